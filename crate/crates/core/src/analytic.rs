//! Closed forms for the one-parameter family
//! `ρ_λ = (1/9)·[[1,0,0,0],[0,4,λ,0],[0,λ,4,0],[0,0,0,0]]` under symmetric
//! noise, and for single-qubit coherence.
//!
//! These are written straight from the formulas and never touch the Kraus or
//! Lindblad machinery, so they can serve as an independent oracle for it.

use crate::error::{invalid, Result};
use crate::scalar::Real;

/// Bisection tolerance of [`esd_time_combined`].
pub const ROOT_TOL: f64 = 1e-12;

/// A member of the λ family, `0 < λ ≤ 4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaFamily<T>(T);

impl<T: Real> LambdaFamily<T> {
    pub fn new(lambda: T) -> Result<Self> {
        if !(lambda > T::zero() && lambda <= T::lit(4.0)) {
            return Err(invalid(format!("λ must lie in (0, 4], got {lambda}")));
        }
        Ok(Self(lambda))
    }

    pub fn lambda(&self) -> T {
        self.0
    }
}

fn ninth<T: Real>() -> T {
    T::one() / T::lit(9.0)
}

/// `ω₁² = 1 − e^{−Γ₁t}`.
fn omega_sq<T: Real>(gamma1: T, t: T) -> T {
    -(-gamma1 * t).exp_m1()
}

/// `√(ω₁⁴ + 8ω₁²)`, the `√(ad)` factor stripped of `e^{−Γ₁t}/9`.
fn amp_root<T: Real>(gamma1: T, t: T) -> T {
    let w2 = omega_sq(gamma1, t);
    (w2 * w2 + T::lit(8.0) * w2).sqrt()
}

/// Single-qubit coherence factor `e^{−(Γ₁/2 + Γ₂)t}`.
pub fn coherence_single<T: Real>(gamma1: T, gamma2: T, t: T) -> T {
    (-(gamma1 / T::lit(2.0) + gamma2) * t).exp()
}

/// Phase-noise concurrence `(2λ/9)e^{−Γ₂t}`.
pub fn c_phase<T: Real>(fam: LambdaFamily<T>, gamma2: T, t: T) -> T {
    T::lit(2.0) * fam.0 * ninth::<T>() * (-gamma2 * t).exp()
}

/// X-state elements of `ρ_λ` under amplitude noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmpElements<T> {
    pub z: T,
    pub a: T,
    pub d: T,
}

/// `z = (λ/9)e^{−Γ₁t}`, `a = (1/9)e^{−2Γ₁t}`, `d = (1/9)ω₁⁴ + (8/9)ω₁²`.
pub fn amp_elements<T: Real>(fam: LambdaFamily<T>, gamma1: T, t: T) -> AmpElements<T> {
    let decay = (-gamma1 * t).exp();
    let w2 = omega_sq(gamma1, t);
    AmpElements {
        z: fam.0 * ninth::<T>() * decay,
        a: ninth::<T>() * decay * decay,
        d: ninth::<T>() * w2 * w2 + T::lit(8.0) * ninth::<T>() * w2,
    }
}

/// Amplitude-noise concurrence `(2/9)[λ − √(ω₁⁴ + 8ω₁²)]e^{−Γ₁t}`, valid
/// for `3 ≤ λ ≤ 4` where the bracket never changes sign.
pub fn c_amp<T: Real>(fam: LambdaFamily<T>, gamma1: T, t: T) -> Result<T> {
    if fam.0 < T::lit(3.0) {
        return Err(invalid(format!(
            "closed form holds for 3 ≤ λ ≤ 4 (got {}); evolve numerically instead",
            fam.0
        )));
    }
    let bracket = fam.0 - amp_root(gamma1, t);
    Ok(T::lit(2.0) * ninth::<T>() * bracket * (-gamma1 * t).exp())
}

/// Bracket `λe^{−Γ₂t} − √(ω₁⁴ + 8ω₁²)` whose sign decides entanglement
/// under combined noise.
pub fn combined_bracket<T: Real>(fam: LambdaFamily<T>, gamma1: T, gamma2: T, t: T) -> T {
    fam.0 * (-gamma2 * t).exp() - amp_root(gamma1, t)
}

/// Two-noise concurrence `(2/9)e^{−Γ₁t}·max{0, λe^{−Γ₂t} − √(ω₁⁴ + 8ω₁²)}`.
pub fn c_combined<T: Real>(fam: LambdaFamily<T>, gamma1: T, gamma2: T, t: T) -> T {
    let bracket = combined_bracket(fam, gamma1, gamma2, t).max(T::zero());
    T::lit(2.0) * ninth::<T>() * (-gamma1 * t).exp() * bracket
}

/// Root of [`combined_bracket`] in `(0, 20/min Γ]`, or `None` if the bracket
/// stays positive over that range.
pub fn esd_time_combined<T: Real>(fam: LambdaFamily<T>, gamma1: T, gamma2: T) -> Result<Option<T>> {
    if gamma1 < T::zero() || gamma2 < T::zero() {
        return Err(invalid("rates must be non-negative"));
    }
    let active = [gamma1, gamma2].into_iter().filter(|&g| g > T::zero());
    let Some(min_rate) = active.fold(None, |acc: Option<T>, g| Some(acc.map_or(g, |m| m.min(g)))) else {
        return Ok(None);
    };
    let t_max = T::lit(20.0) / min_rate;
    let f = |t: T| combined_bracket(fam, gamma1, gamma2, t);
    if f(t_max) > T::zero() {
        return Ok(None);
    }
    let (mut lo, mut hi) = (T::zero(), t_max);
    let tol = T::tol(ROOT_TOL);
    while hi - lo > tol {
        let mid = (lo + hi) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some((lo + hi) / T::lit(2.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn fam(l: f64) -> LambdaFamily<f64> {
        LambdaFamily::new(l).unwrap()
    }

    #[test]
    fn family_bounds() {
        assert!(LambdaFamily::new(0.0).is_err());
        assert!(LambdaFamily::new(4.0 + 1e-9).is_err());
        assert!(LambdaFamily::new(4.0).is_ok());
    }

    #[test]
    fn coherence_values() {
        assert_eq!(coherence_single(0.0, 0.0, 3.7), 1.0);
        assert!((coherence_single(1.0f64, 1.0, 1.0) - 0.22313016014842982).abs() < 1e-16);
        assert!((coherence_single(2.0, 0.0, 1.0) - (-1.0f64).exp()).abs() < 1e-16);
    }

    #[test]
    fn phase_values() {
        assert!((c_phase(fam(4.0), 1.0, 0.0) - 8.0 / 9.0).abs() < 1e-16);
        assert!((c_phase(fam(4.0), 1.0, LN_2) - 4.0 / 9.0).abs() < 1e-16);
        assert!(c_phase(fam(1e-300), 1.0, 0.5) < 1e-299);
    }

    #[test]
    fn amplitude_elements() {
        let e = amp_elements(fam(4.0), 1.0, 0.0);
        assert_eq!((e.z, e.a, e.d), (4.0 / 9.0, 1.0 / 9.0, 0.0));
        let e = amp_elements(fam(4.0), 1.0, LN_2);
        assert!((e.z - 2.0 / 9.0).abs() < 1e-16);
        assert!((e.a - 1.0 / 36.0).abs() < 1e-16);
        assert!((e.d - 17.0 / 36.0).abs() < 1e-16);
        let e = amp_elements(fam(4.0), 1.0, 60.0);
        assert!(e.z < 1e-25 && e.a < 1e-50 && (e.d - 1.0).abs() < 1e-15);
    }

    #[test]
    fn amplitude_concurrence() {
        assert!((c_amp(fam(4.0), 1.0, 0.0).unwrap() - 8.0 / 9.0).abs() < 1e-16);
        // (2/9)(4 − √17/2)/2
        assert!((c_amp(fam(4.0), 1.0, LN_2).unwrap() - 0.21538302079901886).abs() < 1e-15);
        let late = c_amp(fam(3.0), 1.0, 10.0).unwrap();
        assert!(late > 0.0 && late < 1e-8);
        assert!(c_amp(fam(2.0), 1.0, 1.0).is_err());
    }

    #[test]
    fn combined_reduces_to_single_noises() {
        for t in [0.0, 0.3, 1.0, 4.0] {
            assert!((c_combined(fam(2.5), 0.0, 1.3, t) - c_phase(fam(2.5), 1.3, t)).abs() < 1e-16);
            let amp = c_amp(fam(3.5), 0.7, t).unwrap();
            assert!((c_combined(fam(3.5), 0.7, 0.0, t) - amp).abs() < 1e-16);
        }
    }

    #[test]
    fn combined_root() {
        let t = esd_time_combined(fam(4.0), 1.0, 1.0).unwrap().unwrap();
        assert!((t - 0.6734608161431411).abs() < 1e-11);
        assert_eq!(esd_time_combined(fam(4.0), 1.0, 0.0).unwrap(), None);
        assert_eq!(esd_time_combined(fam(4.0), 0.0, 1.0).unwrap(), None);
        assert_eq!(esd_time_combined(fam(4.0), 0.0, 0.0).unwrap(), None);
        let t = esd_time_combined(fam(2.0), 1.0, 0.0).unwrap().unwrap();
        assert!((t - 0.6389165189617602).abs() < 1e-11);
    }
}
