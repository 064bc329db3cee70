//! Master-equation generator and its fixed-step RK4 integration.

use super::{check_targets, NoiseKind, NoiseSpec, Qubit};
use crate::error::{invalid, Error, Result};
use crate::qmat::{kron, pauli, validate_density_with, ComplexMat, DensityMatrix, DensityTolerances};
use crate::scalar::Real;

/// Default RK4 step.
pub const DEFAULT_DT: f64 = 1e-4;

/// Positivity slack granted to integrated states (RK4 truncation).
const INTEGRATED_POSITIVITY_TOL: f64 = 1e-8;

enum Term<T> {
    /// `rate · (LρL† − ½{L†L, ρ})`
    Jump {
        rate: T,
        op: ComplexMat<T>,
        op_dag: ComplexMat<T>,
        number: ComplexMat<T>,
    },
    /// `rate · (ZρZ − ρ)`
    Dephase { rate: T, z: ComplexMat<T> },
}

/// Precomputed Lindblad generator for a fixed set of noise specs.
pub struct Generator<T> {
    dim: usize,
    terms: Vec<Term<T>>,
}

fn embed<T: Real>(op: ComplexMat<T>, target: Qubit, n_qubits: usize) -> Result<ComplexMat<T>> {
    if n_qubits == 1 {
        return Ok(op);
    }
    let id = ComplexMat::identity(2);
    match target {
        Qubit::A => kron(&op, &id),
        Qubit::B => kron(&id, &op),
    }
}

impl<T: Real> Generator<T> {
    pub fn new(specs: &[NoiseSpec<T>], n_qubits: usize) -> Result<Self> {
        check_targets(specs, n_qubits)?;
        let mut terms = Vec::with_capacity(specs.len());
        for spec in specs {
            if spec.rate() == T::zero() {
                continue;
            }
            match spec.kind() {
                NoiseKind::Amplitude => {
                    let op = embed(pauli::sigma_minus(), spec.target(), n_qubits)?;
                    let op_dag = op.dagger();
                    let number = &op_dag * &op;
                    terms.push(Term::Jump {
                        rate: spec.rate(),
                        op,
                        op_dag,
                        number,
                    });
                }
                NoiseKind::Phase => {
                    // the Kraus rate r damps coherence as e^{−rt/2}, i.e. r/4 on (ZρZ − ρ)
                    let rate = spec.kraus_rate(n_qubits) / T::lit(4.0);
                    let z = embed(pauli::sigma_z(), spec.target(), n_qubits)?;
                    terms.push(Term::Dephase { rate, z });
                }
            }
        }
        Ok(Self {
            dim: 1 << n_qubits,
            terms,
        })
    }

    /// `dρ/dt` at `rho`.
    pub fn eval(&self, rho: &ComplexMat<T>) -> ComplexMat<T> {
        let mut out = ComplexMat::zeros(self.dim);
        let half = T::lit(0.5);
        for term in &self.terms {
            let contrib = match term {
                Term::Jump {
                    rate,
                    op,
                    op_dag,
                    number,
                } => {
                    let jump = &(op * rho) * op_dag;
                    let anti = &(number * rho) + &(rho * number);
                    (&jump - &anti.scale_real(half)).scale_real(*rate)
                }
                Term::Dephase { rate, z } => (&(&(z * rho) * z) - rho).scale_real(*rate),
            };
            out = &out + &contrib;
        }
        out
    }

    fn rk4_step(&self, rho: &ComplexMat<T>, h: T) -> ComplexMat<T> {
        let half = h * T::lit(0.5);
        let k1 = self.eval(rho);
        let k2 = self.eval(&(rho + &k1.scale_real(half)));
        let k3 = self.eval(&(rho + &k2.scale_real(half)));
        let k4 = self.eval(&(rho + &k3.scale_real(h)));
        let two = T::lit(2.0);
        let sum = &(&(&k1 + &k2.scale_real(two)) + &k3.scale_real(two)) + &k4;
        rho + &sum.scale_real(h / T::lit(6.0))
    }

    fn advance(&self, rho: ComplexMat<T>, span: T, dt: T) -> ComplexMat<T> {
        if span == T::zero() {
            return rho;
        }
        let steps = (span / dt).ceil().max(T::one());
        let n = steps.to_f64() as usize;
        let h = span / steps;
        (0..n).fold(rho, |acc, _| self.rk4_step(&acc, h))
    }
}

/// Value of the master-equation right-hand side at `rho`.
pub fn lindblad_rhs<T: Real>(rho: &DensityMatrix<T>, specs: &[NoiseSpec<T>]) -> Result<ComplexMat<T>> {
    Ok(Generator::new(specs, rho.n_qubits())?.eval(rho.matrix()))
}

fn revalidate<T: Real>(m: ComplexMat<T>) -> Result<DensityMatrix<T>> {
    let tol = DensityTolerances {
        positivity: INTEGRATED_POSITIVITY_TOL,
        ..DensityTolerances::default()
    };
    validate_density_with(m, tol).map_err(|e| Error::Numerical(format!("integrated state is invalid: {e}")))
}

fn check_step<T: Real>(dt: T) -> Result<()> {
    if !(dt > T::zero()) || !dt.is_finite() {
        return Err(invalid(format!("step must be positive, got {dt}")));
    }
    Ok(())
}

/// Integrates the master equation from `0` to `t` with classical RK4.
///
/// The step count is `⌈t/dt⌉` so the last step lands exactly on `t`.
pub fn integrate<T: Real>(rho0: &DensityMatrix<T>, specs: &[NoiseSpec<T>], t: T, dt: T) -> Result<DensityMatrix<T>> {
    if !(t >= T::zero()) || !t.is_finite() {
        return Err(invalid(format!("time must be finite and non-negative, got {t}")));
    }
    if t == T::zero() {
        return Ok(rho0.clone());
    }
    check_step(dt)?;
    let gen = Generator::new(specs, rho0.n_qubits())?;
    revalidate(gen.advance(rho0.matrix().clone(), t, dt))
}

/// Integrates through ascending `times`, returning the state at each.
pub fn integrate_trajectory<T: Real>(
    rho0: &DensityMatrix<T>,
    specs: &[NoiseSpec<T>],
    times: &[T],
    dt: T,
) -> Result<Vec<DensityMatrix<T>>> {
    check_step(dt)?;
    if times.first().is_some_and(|&t| !(t >= T::zero())) || times.windows(2).any(|w| !(w[1] >= w[0])) {
        return Err(invalid("times must be non-negative and ascending"));
    }
    let gen = Generator::new(specs, rho0.n_qubits())?;
    let mut out = Vec::with_capacity(times.len());
    let mut state = rho0.matrix().clone();
    let mut now = T::zero();
    for &t in times {
        state = gen.advance(state, t - now, dt);
        now = t;
        out.push(revalidate(state.clone())?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    fn plus_x() -> DensityMatrix<f64> {
        DensityMatrix::pure(&[Complex::new(1.0, 0.0), Complex::new(1.0, 0.0)]).unwrap()
    }

    #[test]
    fn empty_specs_give_zero_generator() {
        let rhs = lindblad_rhs(&plus_x(), &[]).unwrap();
        assert_eq!(rhs, ComplexMat::zeros(2));
    }

    #[test]
    fn amplitude_drains_excited_population() {
        let excited = DensityMatrix::pure(&[Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)]).unwrap();
        let specs = [NoiseSpec::amplitude(Qubit::A, 1.0).unwrap()];
        let rhs: ComplexMat<f64> = lindblad_rhs(&excited, &specs).unwrap();
        assert!((rhs[(0, 0)].re + 1.0).abs() < 1e-15);
        assert!((rhs[(1, 1)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn phase_noise_damps_coherence_only() {
        let specs = [NoiseSpec::phase(Qubit::A, 1.3).unwrap()];
        let rho = plus_x();
        let rhs = lindblad_rhs(&rho, &specs).unwrap();
        assert!((rhs[(0, 1)] + rho.matrix()[(0, 1)] * 1.3).norm() < 1e-15);
        assert_eq!(rhs[(0, 0)].re, 0.0);
        assert_eq!(rhs[(1, 1)].re, 0.0);
    }

    #[test]
    fn generator_is_traceless_and_hermitian() {
        let specs = [
            NoiseSpec::amplitude(Qubit::A, 0.4).unwrap(),
            NoiseSpec::phase(Qubit::B, 1.1).unwrap(),
            NoiseSpec::amplitude(Qubit::B, 2.0).unwrap(),
        ];
        let h = 0.5;
        let psi = [0.3, 0.5, h, 0.4].map(|x| Complex::new(x, 0.1 * x));
        let rho = DensityMatrix::pure(&psi).unwrap();
        let rhs = lindblad_rhs(&rho, &specs).unwrap();
        assert!(rhs.trace().norm() < 1e-15);
        assert!(rhs.hermiticity_defect() < 1e-15);
    }

    #[test]
    fn zero_time_returns_input() {
        let rho = plus_x();
        let specs = [NoiseSpec::phase(Qubit::A, 1.0).unwrap()];
        assert_eq!(integrate(&rho, &specs, 0.0, 1e-4).unwrap(), rho);
        assert!(integrate(&rho, &specs, -1.0, 1e-4).is_err());
        assert!(integrate(&rho, &specs, 1.0, 0.0).is_err());
    }

    #[test]
    fn single_qubit_rates_add() {
        let specs = [
            NoiseSpec::amplitude(Qubit::A, 1.0).unwrap(),
            NoiseSpec::phase(Qubit::A, 1.0).unwrap(),
        ];
        let out = integrate(&plus_x(), &specs, 1.0, 1e-4).unwrap();
        assert!((out.coherence().unwrap().re - 0.5 * (-1.5f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn trajectory_matches_pointwise_integration() {
        let specs = [NoiseSpec::amplitude(Qubit::A, 0.8).unwrap()];
        let times = [0.0, 0.3, 1.0];
        let traj = integrate_trajectory(&plus_x(), &specs, &times, 1e-3).unwrap();
        let direct = integrate(&plus_x(), &specs, 1.0, 1e-3).unwrap();
        assert_eq!(traj[0], plus_x());
        assert!(traj[2].matrix().max_diff(direct.matrix()) < 1e-13);
        assert!(integrate_trajectory(&plus_x(), &specs, &[1.0, 0.5], 1e-3).is_err());
    }
}
