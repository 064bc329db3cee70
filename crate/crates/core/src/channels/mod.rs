//! Independent amplitude and phase noise on one or two qubits.
//!
//! A noise source is described by a [`NoiseSpec`]. The same set of specs
//! drives two independent evolutions: a Kraus channel built in closed form
//! ([`channel_for`]) and an RK4 integration of the master equation
//! ([`integrate`]). The two must agree.
//!
//! Rate conventions. Amplitude rates are unambiguous: `Γ₁` drains the
//! excited population as `e^{−Γ₁t}` and damps a qubit's coherence as
//! `e^{−Γ₁t/2}`. For phase noise the rate is tied to the register size:
//!
//! * on a lone qubit, `Γ₂` damps the coherence as `e^{−Γ₂t}`
//!   (generator `(Γ₂/2)(σ_zρσ_z − ρ)`), so amplitude and phase together give
//!   `e^{−(Γ₁/2 + Γ₂)t}`;
//! * on a qubit inside a pair, `Γ₂` is the Kraus rate of
//!   `γ = e^{−Γ₂t/2}` (generator `(Γ₂/4)(σ_zρσ_z − ρ)`), so symmetric phase
//!   noise on both qubits damps the `|+−⟩⟨−+|` coherence as `e^{−Γ₂t}`.

mod kraus;
mod lindblad;

pub use kraus::{
    amplitude_channel, apply, completeness_defect, compose, dephasing_channel, dephasing_factors, kraus_sum, lift,
    KrausChannel, COMPLETENESS_TOL,
};
pub use lindblad::{integrate, integrate_trajectory, lindblad_rhs, Generator, DEFAULT_DT};

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

/// Which qubit of the pair a noise source acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Qubit {
    A,
    B,
}

/// Kind of noise coupling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NoiseKind {
    /// Longitudinal coupling through `σ±` (rate `Γ₁`).
    Amplitude,
    /// Transverse coupling through `σ_z` (rate `Γ₂`).
    Phase,
}

/// One independent Markovian noise source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec<T> {
    target: Qubit,
    kind: NoiseKind,
    rate: T,
}

impl<T: Real> NoiseSpec<T> {
    pub fn new(target: Qubit, kind: NoiseKind, rate: T) -> Result<Self> {
        if !rate.is_finite() || rate < T::zero() {
            return Err(invalid(format!(
                "noise rate must be finite and non-negative, got {rate}"
            )));
        }
        Ok(Self { target, kind, rate })
    }

    pub fn amplitude(target: Qubit, rate: T) -> Result<Self> {
        Self::new(target, NoiseKind::Amplitude, rate)
    }

    pub fn phase(target: Qubit, rate: T) -> Result<Self> {
        Self::new(target, NoiseKind::Phase, rate)
    }

    pub fn target(&self) -> Qubit {
        self.target
    }

    pub fn kind(&self) -> NoiseKind {
        self.kind
    }

    pub fn rate(&self) -> T {
        self.rate
    }

    /// Rate fed to the Kraus factors `γ = e^{−rate·t/2}` for this spec.
    pub(crate) fn kraus_rate(&self, n_qubits: usize) -> T {
        match (self.kind, n_qubits) {
            (NoiseKind::Phase, 1) => self.rate * T::lit(2.0),
            _ => self.rate,
        }
    }
}

/// Symmetric noise of one kind on both qubits.
pub fn symmetric<T: Real>(kind: NoiseKind, rate: T) -> Result<Vec<NoiseSpec<T>>> {
    Ok(vec![
        NoiseSpec::new(Qubit::A, kind, rate)?,
        NoiseSpec::new(Qubit::B, kind, rate)?,
    ])
}

/// Amplitude `Γ₁` and phase `Γ₂` on both qubits; zero rates are skipped.
pub fn symmetric_pair<T: Real>(gamma1: T, gamma2: T) -> Result<Vec<NoiseSpec<T>>> {
    let mut specs = Vec::new();
    if gamma1 > T::zero() {
        specs.extend(symmetric(NoiseKind::Amplitude, gamma1)?);
    }
    if gamma2 > T::zero() {
        specs.extend(symmetric(NoiseKind::Phase, gamma2)?);
    }
    if gamma1 < T::zero() || gamma2 < T::zero() {
        return Err(invalid("noise rates must be non-negative"));
    }
    Ok(specs)
}

/// Smallest strictly positive rate among `specs`.
pub fn min_active_rate<T: Real>(specs: &[NoiseSpec<T>]) -> Option<T> {
    specs
        .iter()
        .map(|s| s.rate)
        .filter(|&r| r > T::zero())
        .fold(None, |acc, r| Some(acc.map_or(r, |m: T| m.min(r))))
}

pub(crate) fn check_targets<T: Real>(specs: &[NoiseSpec<T>], n_qubits: usize) -> Result<()> {
    match n_qubits {
        1 => {
            if specs.iter().any(|s| s.target == Qubit::B) {
                return Err(invalid("single-qubit evolution only accepts noise on qubit A"));
            }
        }
        2 => {}
        n => return Err(invalid(format!("unsupported register of {n} qubits"))),
    }
    Ok(())
}

/// Single-qubit channel accumulated from every spec targeting `qubit`.
fn local_channel<T: Real>(specs: &[NoiseSpec<T>], qubit: Qubit, n_qubits: usize, t: T) -> Result<KrausChannel<T>> {
    let mut ch = KrausChannel::identity(2);
    for spec in specs.iter().filter(|s| s.target == qubit) {
        let next = match spec.kind {
            NoiseKind::Amplitude => amplitude_channel(spec.kraus_rate(n_qubits), t)?,
            NoiseKind::Phase => dephasing_channel(spec.kraus_rate(n_qubits), t)?,
        };
        ch = compose(&ch, &next)?;
    }
    Ok(ch)
}

/// Kraus channel realising `specs` for duration `t` on a register of
/// `n_qubits` (1 or 2).
pub fn channel_for<T: Real>(specs: &[NoiseSpec<T>], n_qubits: usize, t: T) -> Result<KrausChannel<T>> {
    check_targets(specs, n_qubits)?;
    if t < T::zero() || !t.is_finite() {
        return Err(invalid(format!("time must be finite and non-negative, got {t}")));
    }
    let a = local_channel(specs, Qubit::A, n_qubits, t)?;
    if n_qubits == 1 {
        return Ok(a);
    }
    let b = local_channel(specs, Qubit::B, n_qubits, t)?;
    lift(&a, &b)
}

impl fmt::Display for Qubit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Qubit::A => "A",
            Qubit::B => "B",
        })
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NoiseKind::Amplitude => "amplitude",
            NoiseKind::Phase => "phase",
        })
    }
}

impl FromStr for Qubit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Qubit::A),
            "B" | "b" => Ok(Qubit::B),
            other => Err(invalid(format!("unknown qubit '{other}' (expected A or B)"))),
        }
    }
}

impl FromStr for NoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "amplitude" | "amp" => Ok(NoiseKind::Amplitude),
            "phase" => Ok(NoiseKind::Phase),
            other => Err(invalid(format!(
                "unknown noise kind '{other}' (expected amplitude or phase)"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_negative_or_nan_rate() {
        assert!(NoiseSpec::amplitude(Qubit::A, -1.0).is_err());
        assert!(NoiseSpec::phase(Qubit::B, f64::NAN).is_err());
        assert!(NoiseSpec::phase(Qubit::B, 0.0).is_ok());
    }

    #[test]
    fn single_qubit_rejects_b_target() {
        let specs = vec![NoiseSpec::phase(Qubit::B, 1.0).unwrap()];
        assert!(channel_for(&specs, 1, 0.5).is_err());
    }

    #[test]
    fn min_rate_ignores_zero() {
        let specs = symmetric_pair(0.0, 2.0).unwrap();
        assert_eq!(specs.len(), 2);
        assert_eq!(min_active_rate(&specs), Some(2.0));
        assert_eq!(min_active_rate::<f64>(&[]), None);
    }

    #[test]
    fn parse_labels() {
        assert_eq!("B".parse::<Qubit>().unwrap(), Qubit::B);
        assert_eq!("Amplitude".parse::<NoiseKind>().unwrap(), NoiseKind::Amplitude);
        assert!("x".parse::<NoiseKind>().is_err());
    }
}
