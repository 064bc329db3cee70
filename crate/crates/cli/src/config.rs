//! Run parameters, read from a JSON file and overridden by flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::Context;
use clap::ValueEnum;
use qdecay_core::channels::{NoiseKind, Qubit};
use qdecay_core::Complex;
use qdecay_core::{NoiseSpec, XState};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const DEFAULT_SAMPLES: usize = 101;
pub const DEFAULT_DT: f64 = qdecay_core::channels::DEFAULT_DT;
/// Trace horizon when neither the file nor a flag sets one.
pub const DEFAULT_TRACE_T_MAX: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// X-state populations and coherence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub z_re: f64,
    #[serde(default)]
    pub z_im: f64,
}

impl StateSpec {
    pub fn to_xstate(&self) -> Result<XState, CliError> {
        Ok(XState::new(
            self.a,
            self.b,
            self.c,
            self.d,
            Complex::new(self.z_re, self.z_im),
        )?)
    }
}

/// `a,b,c,d,z_re[,z_im]`
impl FromStr for StateSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let v = s
            .split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        match v[..] {
            [a, b, c, d, z_re] => Ok(Self {
                a,
                b,
                c,
                d,
                z_re,
                z_im: 0.0,
            }),
            [a, b, c, d, z_re, z_im] => Ok(Self { a, b, c, d, z_re, z_im }),
            _ => Err(format!("expected a,b,c,d,z_re[,z_im], got {} values", v.len())),
        }
    }
}

/// One λ, or a sweep over several.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LambdaSpec {
    One(f64),
    Sweep(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Target {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    #[serde(alias = "amp")]
    Amplitude,
    Phase,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseEntry {
    pub target: Target,
    pub kind: Kind,
    pub rate: f64,
}

impl NoiseEntry {
    pub fn to_spec(self) -> Result<NoiseSpec, CliError> {
        let target = match self.target {
            Target::A => Qubit::A,
            Target::B => Qubit::B,
        };
        let kind = match self.kind {
            Kind::Amplitude => NoiseKind::Amplitude,
            Kind::Phase => NoiseKind::Phase,
        };
        Ok(NoiseSpec::new(target, kind, self.rate)?)
    }
}

/// `A:phase:1.0`
impl FromStr for NoiseEntry {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<_> = s.split(':').map(str::trim).collect();
        let [target, kind, rate] = parts[..] else {
            return Err(format!("expected TARGET:KIND:RATE, got {s:?}"));
        };
        let target = match target {
            "A" | "a" => Target::A,
            "B" | "b" => Target::B,
            other => return Err(format!("unknown qubit {other:?}")),
        };
        let kind = match kind.parse::<NoiseKind>().map_err(|e| e.to_string())? {
            NoiseKind::Amplitude => Kind::Amplitude,
            NoiseKind::Phase => Kind::Phase,
        };
        let rate = rate.parse().map_err(|e| format!("rate {rate:?}: {e}"))?;
        Ok(Self { target, kind, rate })
    }
}

impl fmt::Display for NoiseEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            Kind::Amplitude => "amplitude",
            Kind::Phase => "phase",
        };
        write!(f, "{:?}:{kind}:{}", self.target, self.rate)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<StateSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<LambdaSpec>,
    #[serde(default)]
    pub noises: Vec<NoiseEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

fn default_samples() -> usize {
    DEFAULT_SAMPLES
}

fn default_dt() -> f64 {
    DEFAULT_DT
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            state: None,
            lambda: None,
            noises: Vec::new(),
            t_max: None,
            samples: DEFAULT_SAMPLES,
            dt: DEFAULT_DT,
            output: None,
            format: None,
        }
    }
}

/// Flag values that replace file values when present.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub state: Option<StateSpec>,
    pub lambda: Vec<f64>,
    pub noises: Vec<NoiseEntry>,
    pub t_max: Option<f64>,
    pub samples: Option<usize>,
    pub dt: Option<f64>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(anyhow::Error::new(e)))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))
            .map_err(CliError::Io)?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Config(inner) => CliError::Config(inner.context(format!("in {}", path.display()))),
            other => other,
        })
    }

    /// A flag-given state or λ replaces both file fields.
    pub fn apply(&mut self, o: Overrides) {
        if o.state.is_some() || !o.lambda.is_empty() {
            self.state = o.state;
            self.lambda = match o.lambda.len() {
                0 => None,
                1 => Some(LambdaSpec::One(o.lambda[0])),
                _ => Some(LambdaSpec::Sweep(o.lambda)),
            };
        }
        if !o.noises.is_empty() {
            self.noises = o.noises;
        }
        self.t_max = o.t_max.or(self.t_max);
        self.samples = o.samples.unwrap_or(self.samples);
        self.dt = o.dt.unwrap_or(self.dt);
        self.output = o.output.or(self.output.take());
        self.format = o.format.or(self.format);
    }

    pub fn check(&self) -> Result<(), CliError> {
        if let Some(t) = self.t_max {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::config(format!("t_max must be positive, got {t}")));
            }
        }
        if self.samples < 2 {
            return Err(CliError::config(format!(
                "samples must be at least 2, got {}",
                self.samples
            )));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(CliError::config(format!("dt must be positive, got {}", self.dt)));
        }
        if self.state.is_some() && self.lambda.is_some() {
            return Err(CliError::config("give either state or lambda, not both"));
        }
        if let Some(LambdaSpec::Sweep(v)) = &self.lambda {
            if v.is_empty() {
                return Err(CliError::config("lambda sweep is empty"));
            }
        }
        Ok(())
    }

    /// Initial states, tagged with λ when they come from the family.
    pub fn initial_states(&self) -> Result<Vec<(Option<f64>, XState)>, CliError> {
        match (&self.state, &self.lambda) {
            (Some(s), None) => Ok(vec![(None, s.to_xstate()?)]),
            (None, Some(LambdaSpec::One(l))) => Ok(vec![(Some(*l), XState::lambda_family(*l)?)]),
            (None, Some(LambdaSpec::Sweep(ls))) => {
                ls.iter().map(|&l| Ok((Some(l), XState::lambda_family(l)?))).collect()
            }
            (None, None) => Err(CliError::config("no initial state: set state or lambda")),
            (Some(_), Some(_)) => Err(CliError::config("give either state or lambda, not both")),
        }
    }

    pub fn is_sweep(&self) -> bool {
        matches!(self.lambda, Some(LambdaSpec::Sweep(_)))
    }

    pub fn specs(&self) -> Result<Vec<NoiseSpec>, CliError> {
        self.noises.iter().map(|n| n.to_spec()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_file() {
        let cfg =
            RunConfig::from_json(r#"{"lambda": 4, "noises": [{"target": "A", "kind": "amp", "rate": 1}]}"#).unwrap();
        assert_eq!(cfg.lambda, Some(LambdaSpec::One(4.0)));
        assert_eq!(cfg.noises[0].kind, Kind::Amplitude);
        assert_eq!(cfg.samples, DEFAULT_SAMPLES);
        assert_eq!(cfg.dt, DEFAULT_DT);
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(RunConfig::from_json(r#"{"lambda": 4, "gamma": 1}"#).is_err());
    }

    #[test]
    fn flags_override_file() {
        let mut cfg = RunConfig::from_json(r#"{"lambda": 4, "samples": 10, "t_max": 2}"#).unwrap();
        cfg.apply(Overrides {
            state: Some("0.25,0.25,0.25,0.25,0.1".parse().unwrap()),
            samples: Some(5),
            ..Overrides::default()
        });
        assert_eq!(cfg.lambda, None);
        assert_eq!(cfg.state.unwrap().z_re, 0.1);
        assert_eq!((cfg.samples, cfg.t_max), (5, Some(2.0)));
    }

    #[test]
    fn noise_flag_syntax() {
        let n: NoiseEntry = "B:phase:0.5".parse().unwrap();
        assert_eq!(
            n,
            NoiseEntry {
                target: Target::B,
                kind: Kind::Phase,
                rate: 0.5
            }
        );
        assert_eq!(n.to_string().parse::<NoiseEntry>().unwrap(), n);
        assert!("C:phase:1".parse::<NoiseEntry>().is_err());
        assert!("A:phase".parse::<NoiseEntry>().is_err());
    }

    #[test]
    fn invariants() {
        let bad = |json: &str| RunConfig::from_json(json).unwrap().check().is_err();
        assert!(bad(r#"{"lambda": 4, "samples": 1}"#));
        assert!(bad(r#"{"lambda": 4, "t_max": 0}"#));
        assert!(bad(r#"{"lambda": 4, "dt": -1}"#));
        assert!(bad(r#"{"lambda": 4, "state": {"a":1,"b":0,"c":0,"d":0,"z_re":0}}"#));
    }
}
