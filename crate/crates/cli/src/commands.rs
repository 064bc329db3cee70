//! The five subcommands. Each returns the rendered artifact.

use serde::Serialize;

use qdecay_core::analytic::coherence_single;
use qdecay_core::channels::{integrate_trajectory, symmetric, symmetric_pair, NoiseKind, Qubit};
use qdecay_core::entanglement::{
    classify_state, default_t_max, diagram, trace_concurrence, CellClass, DecayClass, DiagramGrid,
};
use qdecay_core::validate::{linspace, run_validation, ValidateOptions};
use qdecay_core::{Complex, DensityMatrix, NoiseSpec};

use crate::config::{Format, NoiseEntry, RunConfig, DEFAULT_TRACE_T_MAX};
use crate::error::CliError;
use crate::output::{json, real, Csv};

/// Kraus-path tolerance of the additivity report.
pub const ADDITIVITY_KRAUS_TOL: f64 = 1e-10;
/// Integrator tolerance of the additivity report.
pub const ADDITIVITY_LINDBLAD_TOL: f64 = 1e-6;
pub const MIN_RESOLUTION: usize = 8;
/// Rate used by every diagram panel.
pub const DIAGRAM_RATE: f64 = 1.0;

/// Rendered output plus the error to raise once it has been written.
pub struct Artifact {
    pub content: String,
    pub failure: Option<CliError>,
}

impl Artifact {
    fn ok(content: String) -> Self {
        Self { content, failure: None }
    }
}

#[derive(Serialize)]
struct Series {
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<f64>,
    t: Vec<f64>,
    concurrence: Vec<f64>,
}

#[derive(Serialize)]
struct TraceReport<'a> {
    noises: &'a [NoiseEntry],
    series: Vec<Series>,
}

pub fn trace(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let specs = cfg.specs()?;
    let t_max = cfg.t_max.unwrap_or(DEFAULT_TRACE_T_MAX);
    let times = linspace(t_max, cfg.samples);
    let mut series = Vec::new();
    for (lambda, x) in cfg.initial_states()? {
        let tr = trace_concurrence(x, &specs, &times)?;
        series.push(Series {
            lambda,
            t: tr.times,
            concurrence: tr.values,
        });
    }
    let content = match cfg.format.unwrap_or(Format::Csv) {
        Format::Json => json(&TraceReport {
            noises: &cfg.noises,
            series,
        }),
        Format::Csv => {
            let sweep = cfg.is_sweep();
            let mut csv = Csv::new(if sweep {
                &["lambda", "t", "concurrence"]
            } else {
                &["t", "concurrence"]
            });
            for s in &series {
                for (&t, &c) in s.t.iter().zip(&s.concurrence) {
                    match (sweep, s.lambda) {
                        (true, Some(l)) => csv.row(&[real(l), real(t), real(c)]),
                        _ => csv.row(&[real(t), real(c)]),
                    }
                }
            }
            csv.finish()
        }
    };
    Ok(Artifact::ok(content))
}

#[derive(Serialize)]
struct EsdReport {
    class: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    t_star: Option<f64>,
    t_max: f64,
}

pub fn esd(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let specs = cfg.specs()?;
    let states = cfg.initial_states()?;
    let [(_, x)] = &states[..] else {
        return Err(CliError::config("esd takes a single initial state, not a sweep"));
    };
    let t_max = match cfg.t_max {
        Some(t) => t,
        None => default_t_max(&specs).unwrap_or(DEFAULT_TRACE_T_MAX),
    };
    let class = classify_state(&x.to_density()?, &specs, t_max)?;
    if class == DecayClass::SeparableAtStart {
        return Err(CliError::Separable(
            "concurrence is zero at t = 0; nothing to lose".into(),
        ));
    }
    let report = EsdReport {
        class: class.label(),
        t_star: class.t_star().copied(),
        t_max,
    };
    let content = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => json(&report),
        Format::Csv => {
            let mut csv = Csv::new(&["class", "t_star"]);
            csv.row(&[report.class.to_string(), report.t_star.map(real).unwrap_or_default()]);
            csv.finish()
        }
    };
    Ok(Artifact::ok(content))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Panel {
    /// Amplitude noise only.
    I,
    /// Phase noise only.
    Ii,
    /// Both noises.
    Iii,
}

impl Panel {
    pub fn specs(self) -> Vec<NoiseSpec> {
        let specs = match self {
            Panel::I => symmetric(NoiseKind::Amplitude, DIAGRAM_RATE),
            Panel::Ii => symmetric(NoiseKind::Phase, DIAGRAM_RATE),
            Panel::Iii => symmetric_pair(DIAGRAM_RATE, DIAGRAM_RATE),
        };
        specs.expect("unit rate is valid")
    }
}

#[derive(Serialize)]
struct CellReport {
    a: f64,
    z: f64,
    class: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    t_star: Option<f64>,
}

pub fn diagram_panel(panel: Panel, resolution: usize, format: Option<Format>) -> Result<Artifact, CliError> {
    if resolution < MIN_RESOLUTION {
        return Err(CliError::config(format!(
            "resolution must be at least {MIN_RESOLUTION}, got {resolution}"
        )));
    }
    let specs = panel.specs();
    let t_max = default_t_max(&specs).expect("panels have active noise");
    let cells = diagram(DiagramGrid::square(resolution), &specs, t_max)?;
    let rows: Vec<CellReport> = cells
        .iter()
        .map(|c| CellReport {
            a: c.a,
            z: c.z,
            class: c.class.label(),
            t_star: match &c.class {
                CellClass::Decay(d) => d.t_star().copied(),
                CellClass::Invalid => None,
            },
        })
        .collect();
    let content = match format.unwrap_or(Format::Csv) {
        Format::Json => json(&rows),
        Format::Csv => {
            let mut csv = Csv::new(&["a", "z", "class", "t_star"]);
            for r in &rows {
                csv.row(&[
                    real(r.a),
                    real(r.z),
                    r.class.to_string(),
                    r.t_star.map(real).unwrap_or_default(),
                ]);
            }
            csv.finish()
        }
    };
    Ok(Artifact::ok(content))
}

#[derive(Serialize)]
struct AdditivityPoint {
    t: f64,
    analytic: f64,
    kraus: f64,
    lindblad: f64,
}

#[derive(Serialize)]
struct AdditivityReport {
    gamma1: f64,
    gamma2: f64,
    dt: f64,
    max_deviation_kraus: f64,
    max_deviation_lindblad: f64,
    tolerance_kraus: f64,
    tolerance_lindblad: f64,
    result: &'static str,
    points: Vec<AdditivityPoint>,
}

/// Single-qubit coherence from `|x+⟩` under both noises, three ways.
pub fn additivity(gamma1: f64, gamma2: f64, cfg: &RunConfig) -> Result<Artifact, CliError> {
    let specs = [
        NoiseSpec::amplitude(Qubit::A, gamma1)?,
        NoiseSpec::phase(Qubit::A, gamma2)?,
    ];
    let rho0 = DensityMatrix::pure(&[Complex::new(1.0, 0.0), Complex::new(1.0, 0.0)])?;
    let c0 = rho0.coherence()?.re;
    let times = linspace(cfg.t_max.unwrap_or(DEFAULT_TRACE_T_MAX), cfg.samples);
    let traj = integrate_trajectory(&rho0, &specs, &times, cfg.dt)?;
    let mut points = Vec::with_capacity(times.len());
    let (mut dev_k, mut dev_l) = (0.0f64, 0.0f64);
    for (&t, rho_l) in times.iter().zip(&traj) {
        let analytic = c0 * coherence_single(gamma1, gamma2, t);
        let kraus = qdecay_core::entanglement::evolve(&rho0, &specs, t)?.coherence()?;
        let lindblad = rho_l.coherence()?;
        dev_k = dev_k.max((kraus - analytic).norm());
        dev_l = dev_l.max((lindblad - analytic).norm());
        points.push(AdditivityPoint {
            t,
            analytic,
            kraus: kraus.re,
            lindblad: lindblad.re,
        });
    }
    let pass = dev_k <= ADDITIVITY_KRAUS_TOL && dev_l <= ADDITIVITY_LINDBLAD_TOL;
    let report = AdditivityReport {
        gamma1,
        gamma2,
        dt: cfg.dt,
        max_deviation_kraus: dev_k,
        max_deviation_lindblad: dev_l,
        tolerance_kraus: ADDITIVITY_KRAUS_TOL,
        tolerance_lindblad: ADDITIVITY_LINDBLAD_TOL,
        result: if pass { "PASS" } else { "FAIL" },
        points,
    };
    let content = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => json(&report),
        Format::Csv => {
            let mut csv = Csv::new(&["t", "analytic", "kraus", "lindblad"]);
            for p in &report.points {
                csv.row(&[real(p.t), real(p.analytic), real(p.kraus), real(p.lindblad)]);
            }
            csv.finish()
        }
    };
    let failure = (!pass).then(|| {
        CliError::Validation(format!(
            "coherence deviates by {dev_k:.3e} (Kraus) and {dev_l:.3e} (integrator)"
        ))
    });
    Ok(Artifact { content, failure })
}

#[derive(Serialize)]
struct CheckReport {
    name: &'static str,
    result: &'static str,
    max_deviation: f64,
    tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

#[derive(Serialize)]
struct ValidateReport {
    result: &'static str,
    checks: Vec<CheckReport>,
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn validate(opts: ValidateOptions, format: Option<Format>) -> Result<Artifact, CliError> {
    let report = run_validation(opts);
    let failed: Vec<_> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    let rows = ValidateReport {
        result: verdict(report.passed()),
        checks: report
            .checks
            .into_iter()
            .map(|c| CheckReport {
                name: c.name,
                result: verdict(c.passed),
                max_deviation: c.max_deviation,
                tolerance: c.tolerance,
                note: c.note,
            })
            .collect(),
    };
    let content = match format.unwrap_or(Format::Json) {
        Format::Json => json(&rows),
        Format::Csv => {
            let mut csv = Csv::new(&["check", "result", "max_deviation", "tolerance"]);
            for c in &rows.checks {
                csv.row(&[
                    c.name.to_string(),
                    c.result.to_string(),
                    real(c.max_deviation),
                    real(c.tolerance),
                ]);
            }
            csv.finish()
        }
    };
    let failure = (!failed.is_empty()).then(|| CliError::Validation(format!("failing checks: {}", failed.join(", "))));
    Ok(Artifact { content, failure })
}
