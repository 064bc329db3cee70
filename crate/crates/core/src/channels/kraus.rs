use crate::error::{invalid, Error, Result};
use crate::qmat::{kron, validate_density, ComplexMat, DensityMatrix};
use crate::scalar::Real;

/// Largest accepted `‖∑K†K − I‖_max`.
pub const COMPLETENESS_TOL: f64 = 1e-10;

/// A finite Kraus set on one (dim 2) or two (dim 4) qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel<T> {
    dim: usize,
    ops: Vec<ComplexMat<T>>,
}

impl<T: Real> KrausChannel<T> {
    /// Builds a channel, rejecting sets that are not trace preserving.
    pub fn new(ops: Vec<ComplexMat<T>>) -> Result<Self> {
        let ch = Self::new_unchecked(ops)?;
        let defect = completeness_defect(&ch);
        if defect > T::tol(COMPLETENESS_TOL) {
            return Err(Error::Incomplete {
                defect: defect.to_f64(),
            });
        }
        Ok(ch)
    }

    /// Builds a channel without the completeness check. [`apply`] still
    /// refuses incomplete sets; use [`kraus_sum`] to inspect their action.
    pub fn new_unchecked(ops: Vec<ComplexMat<T>>) -> Result<Self> {
        let dim = ops
            .first()
            .map(ComplexMat::dim)
            .ok_or_else(|| invalid("empty Kraus set"))?;
        if let Some(bad) = ops.iter().find(|k| k.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: bad.dim(),
            });
        }
        Ok(Self { dim, ops })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            ops: vec![ComplexMat::identity(dim)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ops(&self) -> &[ComplexMat<T>] {
        &self.ops
    }
}

/// Max-norm of `∑K†K − I`.
pub fn completeness_defect<T: Real>(ch: &KrausChannel<T>) -> T {
    let mut acc = ComplexMat::zeros(ch.dim);
    for k in &ch.ops {
        acc = &acc + &(&k.dagger() * k);
    }
    acc.max_diff(&ComplexMat::identity(ch.dim))
}

fn check_time<T: Real>(t: T) -> Result<()> {
    if !(t >= T::zero()) || !t.is_finite() {
        return Err(invalid(format!("time must be finite and non-negative, got {t}")));
    }
    Ok(())
}

/// `γ = e^{−Γt/2}` and `ω = √(1 − γ²)`.
pub fn dephasing_factors<T: Real>(rate: T, t: T) -> Result<(T, T)> {
    check_time(t)?;
    if !(rate >= T::zero()) || !rate.is_finite() {
        return Err(invalid(format!("rate must be finite and non-negative, got {rate}")));
    }
    let gamma = (-rate * t / T::lit(2.0)).exp();
    // 1 − γ² = −expm1(−Γt) keeps ω accurate for small Γt
    let omega = (-(-rate * t).exp_m1()).max(T::zero()).sqrt();
    Ok((gamma, omega))
}

/// Pure dephasing `{diag(γ, 1), diag(ω, 0)}` with `γ = e^{−rate·t/2}`.
///
/// The second operator carries `ω` on the `|+⟩⟨+|` entry; that is the
/// placement for which `∑K†K = I` with the first operator `diag(γ, 1)`.
pub fn dephasing_channel<T: Real>(rate: T, t: T) -> Result<KrausChannel<T>> {
    let (g, w) = dephasing_factors(rate, t)?;
    let z = T::zero();
    Ok(KrausChannel {
        dim: 2,
        ops: vec![ComplexMat::diag(&[g, T::one()])?, ComplexMat::diag(&[w, z])?],
    })
}

/// Amplitude damping `{diag(γ₁, 1), ω₁|−⟩⟨+|}` with `γ₁ = e^{−rate·t/2}`.
pub fn amplitude_channel<T: Real>(rate: T, t: T) -> Result<KrausChannel<T>> {
    let (g, w) = dephasing_factors(rate, t)?;
    let z = T::zero();
    Ok(KrausChannel {
        dim: 2,
        ops: vec![
            ComplexMat::diag(&[g, T::one()])?,
            ComplexMat::from_real(2, &[z, z, w, z])?,
        ],
    })
}

/// Product channel `chA ⊗ chB`: every Kronecker pair `K_i ⊗ L_j`.
pub fn lift<T: Real>(ch_a: &KrausChannel<T>, ch_b: &KrausChannel<T>) -> Result<KrausChannel<T>> {
    for ch in [ch_a, ch_b] {
        if ch.dim != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: ch.dim,
            });
        }
    }
    let mut ops = Vec::with_capacity(ch_a.ops.len() * ch_b.ops.len());
    for k in &ch_a.ops {
        for l in &ch_b.ops {
            ops.push(kron(k, l)?);
        }
    }
    Ok(KrausChannel { dim: 4, ops })
}

/// `then ∘ first`: Kraus set `{L_j K_i}`.
pub fn compose<T: Real>(first: &KrausChannel<T>, then: &KrausChannel<T>) -> Result<KrausChannel<T>> {
    if first.dim != then.dim {
        return Err(Error::DimensionMismatch {
            expected: first.dim,
            got: then.dim,
        });
    }
    let mut ops = Vec::with_capacity(first.ops.len() * then.ops.len());
    for l in &then.ops {
        for k in &first.ops {
            ops.push(l * k);
        }
    }
    Ok(KrausChannel { dim: first.dim, ops })
}

/// Raw `∑ K ρ K†` with no completeness or validity checks.
pub fn kraus_sum<T: Real>(ch: &KrausChannel<T>, rho: &ComplexMat<T>) -> Result<ComplexMat<T>> {
    if ch.dim != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: ch.dim,
            got: rho.dim(),
        });
    }
    let mut out = ComplexMat::zeros(ch.dim);
    for k in &ch.ops {
        out = &out + &k.sandwich(rho);
    }
    Ok(out)
}

/// `ρ → ∑ K ρ K†`, revalidating the output.
pub fn apply<T: Real>(ch: &KrausChannel<T>, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
    let defect = completeness_defect(ch);
    if defect > T::tol(COMPLETENESS_TOL) {
        return Err(Error::Incomplete {
            defect: defect.to_f64(),
        });
    }
    let out = kraus_sum(ch, rho.matrix())?;
    validate_density(out)
}
