//! Concurrence, sudden-death detection and decay classification.
//!
//! Concurrence is computed two ways: the general Wootters construction on
//! any two-qubit density matrix, and the closed form `2·max{0, |z| − √(ad)}`
//! on X states. Sudden death is located by scanning the Kraus evolution on a
//! coarse grid, bisecting the first vanishing interval and then checking that
//! the zero persists.

use num_complex::Complex;
use rayon::prelude::*;

use crate::channels::{apply, channel_for, min_active_rate, NoiseSpec};
use crate::error::{invalid, Error, Result};
use crate::qmat::{product_spectrum, spin_flip, validate_density, ComplexMat, DensityMatrix};
use crate::scalar::Real;

/// Population-sum and positivity slack for [`XState`].
pub const XSTATE_TOL: f64 = 1e-12;
/// Relative Wootters margin at or below which a state counts as separable.
pub const ESD_THRESHOLD: f64 = 1e-12;
/// Coarse scan resolution of [`esd_time`].
pub const ESD_SCAN_POINTS: usize = 512;
/// Bisection stops once the bracket is this narrow.
pub const ESD_TIME_RESOLUTION: f64 = 1e-10;
/// Points checked on `(t*, 2t*]` to confirm an absorbing zero.
pub const ESD_VERIFY_POINTS: usize = 8;
/// `t_max = T_MAX_FACTOR / min(active rate)` when the caller gives none.
pub const T_MAX_FACTOR: f64 = 20.0;

/// Two-qubit state with nonzero entries only on the diagonal and the
/// central anti-diagonal:
///
/// ```text
/// ⎡a 0  0 0⎤
/// ⎢0 b  z 0⎥
/// ⎢0 z* c 0⎥
/// ⎣0 0  0 d⎦
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XState<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
    pub z: Complex<T>,
}

impl<T: Real> XState<T> {
    pub fn new(a: T, b: T, c: T, d: T, z: Complex<T>) -> Result<Self> {
        let tol = T::tol(XSTATE_TOL);
        let values = [a, b, c, d, z.re, z.im];
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("X-state parameters must be finite"));
        }
        if [a, b, c, d].iter().any(|&p| p < -tol) {
            return Err(invalid("X-state populations must be non-negative"));
        }
        let sum = a + b + c + d;
        if (sum - T::one()).abs() > tol {
            return Err(invalid(format!("X-state populations sum to {sum}, not 1")));
        }
        let bound = (b.max(T::zero()) * c.max(T::zero())).sqrt();
        if z.norm() > bound + tol {
            return Err(invalid(format!(
                "|z| = {} exceeds √(bc) = {bound}; state is not positive",
                z.norm()
            )));
        }
        Ok(Self { a, b, c, d, z })
    }

    /// One-parameter family `(1/9)·[[1,0,0,0],[0,4,λ,0],[0,λ,4,0],[0,0,0,0]]`.
    pub fn lambda_family(lambda: T) -> Result<Self> {
        let ninth = T::one() / T::lit(9.0);
        let four = T::lit(4.0) * ninth;
        Self::new(ninth, four, four, T::zero(), Complex::new(lambda * ninth, T::zero()))
    }

    /// Diagram slice point: `b = c = (1 − a)/2`, `d = 0`, real `z`.
    pub fn slice_point(a: T, z_abs: T) -> Result<Self> {
        let half = (T::one() - a) / T::lit(2.0);
        Self::new(a, half, half, T::zero(), Complex::new(z_abs, T::zero()))
    }

    pub fn to_matrix(&self) -> ComplexMat<T> {
        let mut m = ComplexMat::zeros(4);
        let re = |x: T| Complex::new(x, T::zero());
        m[(0, 0)] = re(self.a);
        m[(1, 1)] = re(self.b);
        m[(2, 2)] = re(self.c);
        m[(3, 3)] = re(self.d);
        m[(1, 2)] = self.z;
        m[(2, 1)] = self.z.conj();
        m
    }

    pub fn to_density(&self) -> Result<DensityMatrix<T>> {
        validate_density(self.to_matrix())
    }

    /// Reads an X state back out of a density matrix whose off-X entries are
    /// all within `tol` of zero.
    pub fn from_density(rho: &DensityMatrix<T>, tol: T) -> Option<Self> {
        if rho.n_qubits() != 2 {
            return None;
        }
        let m = rho.matrix();
        for i in 0..4 {
            for j in 0..4 {
                let on_x = i == j || (i, j) == (1, 2) || (i, j) == (2, 1);
                if !on_x && m[(i, j)].norm() > tol {
                    return None;
                }
            }
        }
        Some(Self {
            a: m[(0, 0)].re,
            b: m[(1, 1)].re,
            c: m[(2, 2)].re,
            d: m[(3, 3)].re,
            z: m[(1, 2)],
        })
    }
}

/// Closed-form X-state concurrence `2·max{0, |z| − √(ad)}`.
pub fn concurrence_x<T: Real>(x: &XState<T>) -> Result<T> {
    let x = XState::new(x.a, x.b, x.c, x.d, x.z)?;
    let margin = x.z.norm() - (x.a.max(T::zero()) * x.d.max(T::zero())).sqrt();
    Ok(T::lit(2.0) * margin.max(T::zero()))
}

/// Square roots of the `ρρ̃` spectrum, descending.
pub fn wootters_roots<T: Real>(rho: &DensityMatrix<T>) -> Result<[T; 4]> {
    if rho.n_qubits() != 2 {
        return Err(invalid("concurrence needs a two-qubit state"));
    }
    let m = rho.matrix();
    let product = m * &spin_flip(m)?;
    Ok(product_spectrum(&product)?.map(|v| v.sqrt()))
}

/// Wootters concurrence `max{0, √λ₁ − √λ₂ − √λ₃ − √λ₄}`.
pub fn concurrence<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    let s = wootters_roots(rho)?;
    Ok((s[0] - s[1] - s[2] - s[3]).max(T::zero()).min(T::one()))
}

/// Signed Wootters margin `(√λ₁ − √λ₂ − √λ₃ − √λ₄) / ∑√λᵢ`.
///
/// Positive iff the state is entangled. The normalisation keeps the value
/// scale-free, so a state that only decays exponentially stays clearly
/// positive long after its concurrence drops below any absolute threshold.
pub fn relative_margin<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    let s = wootters_roots(rho)?;
    let total = s.iter().fold(T::zero(), |acc, &v| acc + v);
    if total == T::zero() {
        return Ok(T::zero());
    }
    Ok((s[0] - s[1] - s[2] - s[3]) / total)
}

/// State at time `t` under `specs`, via the product Kraus channel.
pub fn evolve<T: Real>(rho0: &DensityMatrix<T>, specs: &[NoiseSpec<T>], t: T) -> Result<DensityMatrix<T>> {
    apply(&channel_for(specs, rho0.n_qubits(), t)?, rho0)
}

/// Starting point of a [`ConcurrenceTrace`].
#[derive(Debug, Clone, PartialEq)]
pub enum Initial<T> {
    X(XState<T>),
    Density(DensityMatrix<T>),
}

impl<T: Real> Initial<T> {
    pub fn to_density(&self) -> Result<DensityMatrix<T>> {
        match self {
            Initial::X(x) => x.to_density(),
            Initial::Density(rho) => Ok(rho.clone()),
        }
    }
}

impl<T> From<XState<T>> for Initial<T> {
    fn from(x: XState<T>) -> Self {
        Initial::X(x)
    }
}

impl<T> From<DensityMatrix<T>> for Initial<T> {
    fn from(rho: DensityMatrix<T>) -> Self {
        Initial::Density(rho)
    }
}

/// Concurrence sampled along an evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcurrenceTrace<T> {
    pub times: Vec<T>,
    pub values: Vec<T>,
    pub specs: Vec<NoiseSpec<T>>,
    pub initial: Initial<T>,
}

/// Concurrence at each of the ascending `times`, every point evolved from
/// `t = 0` by its own channel.
pub fn trace_concurrence<T: Real>(
    initial: impl Into<Initial<T>>,
    specs: &[NoiseSpec<T>],
    times: &[T],
) -> Result<ConcurrenceTrace<T>> {
    let initial = initial.into();
    if times.first().is_some_and(|&t| !(t >= T::zero())) || times.windows(2).any(|w| !(w[1] >= w[0])) {
        return Err(invalid("times must be non-negative and ascending"));
    }
    let rho0 = initial.to_density()?;
    let values = times
        .iter()
        .map(|&t| concurrence(&evolve(&rho0, specs, t)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConcurrenceTrace {
        times: times.to_vec(),
        values,
        specs: specs.to_vec(),
        initial,
    })
}

/// `20 / min(active rate)`, or `None` when no noise is active.
pub fn default_t_max<T: Real>(specs: &[NoiseSpec<T>]) -> Option<T> {
    min_active_rate(specs).map(|r| T::lit(T_MAX_FACTOR) / r)
}

fn is_dead<T: Real>(rho0: &DensityMatrix<T>, specs: &[NoiseSpec<T>], t: T) -> Result<bool> {
    Ok(relative_margin(&evolve(rho0, specs, t)?)? <= T::tol(ESD_THRESHOLD))
}

/// First time in `(0, t_max]` after which the state stays separable.
///
/// Returns `Ok(None)` when the concurrence is still positive at every scan
/// point up to `t_max`. A separable initial state is an error.
pub fn esd_time<T: Real>(rho0: &DensityMatrix<T>, specs: &[NoiseSpec<T>], t_max: T) -> Result<Option<T>> {
    if !(t_max > T::zero()) || !t_max.is_finite() {
        return Err(invalid(format!("t_max must be positive, got {t_max}")));
    }
    if rho0.n_qubits() != 2 {
        return Err(invalid("sudden death needs a two-qubit state"));
    }
    if relative_margin(rho0)? <= T::tol(ESD_THRESHOLD) {
        return Err(Error::Separable);
    }
    if min_active_rate(specs).is_none() {
        return Ok(None);
    }

    let n = ESD_SCAN_POINTS;
    let grid = |k: usize| t_max * T::lit(k as f64) / T::lit(n as f64);
    let resolution = T::tol(ESD_TIME_RESOLUTION);
    let mut k = 1;
    while k <= n {
        if !is_dead(rho0, specs, grid(k))? {
            k += 1;
            continue;
        }
        let (mut lo, mut hi) = (grid(k - 1), grid(k));
        while hi - lo > resolution {
            let mid = (lo + hi) / T::lit(2.0);
            if mid <= lo || mid >= hi {
                break;
            }
            if is_dead(rho0, specs, mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let t_star = hi;
        let mut absorbed = true;
        for j in 1..=ESD_VERIFY_POINTS {
            let t = t_star + t_star * T::lit(j as f64) / T::lit(ESD_VERIFY_POINTS as f64);
            if !is_dead(rho0, specs, t)? {
                absorbed = false;
                break;
            }
        }
        if absorbed {
            return Ok(Some(t_star));
        }
        k += 1;
    }
    Ok(None)
}

/// How the entanglement of an initial state decays.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecayClass<T> {
    SeparableAtStart,
    /// Positive concurrence at every scanned time.
    Exponential,
    /// Concurrence vanishes at `t_star` and stays zero.
    SuddenDeath {
        t_star: T,
    },
}

impl<T> DecayClass<T> {
    pub fn label(&self) -> &'static str {
        match self {
            DecayClass::SeparableAtStart => "SEPARABLE_AT_START",
            DecayClass::Exponential => "EXPONENTIAL",
            DecayClass::SuddenDeath { .. } => "SUDDEN_DEATH",
        }
    }

    pub fn t_star(&self) -> Option<&T> {
        match self {
            DecayClass::SuddenDeath { t_star } => Some(t_star),
            _ => None,
        }
    }

    pub fn is_sudden_death(&self) -> bool {
        matches!(self, DecayClass::SuddenDeath { .. })
    }
}

/// Classifies any two-qubit state.
pub fn classify_state<T: Real>(rho0: &DensityMatrix<T>, specs: &[NoiseSpec<T>], t_max: T) -> Result<DecayClass<T>> {
    match esd_time(rho0, specs, t_max) {
        Err(Error::Separable) => Ok(DecayClass::SeparableAtStart),
        Err(e) => Err(e),
        Ok(Some(t_star)) => Ok(DecayClass::SuddenDeath { t_star }),
        Ok(None) => Ok(DecayClass::Exponential),
    }
}

/// Classifies an X state on the `d = 0` slice.
pub fn classify<T: Real>(x: &XState<T>, specs: &[NoiseSpec<T>], t_max: T) -> Result<DecayClass<T>> {
    if x.d.abs() > T::tol(XSTATE_TOL) {
        return Err(invalid("classification is defined on the d = 0 slice"));
    }
    classify_state(&x.to_density()?, specs, t_max)
}

/// Lattice over `(a, |z|) ∈ [0, 1] × [0, 1/2]`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiagramGrid {
    pub n_a: usize,
    pub n_z: usize,
}

impl DiagramGrid {
    pub fn square(n: usize) -> Self {
        Self { n_a: n, n_z: n }
    }

    pub fn a<T: Real>(&self, i: usize) -> T {
        T::lit(i as f64) / T::lit((self.n_a - 1) as f64)
    }

    pub fn z<T: Real>(&self, j: usize) -> T {
        T::lit(j as f64) / T::lit((2 * (self.n_z - 1)) as f64)
    }
}

/// Outcome for one diagram cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CellClass<T> {
    /// `|z| > (1 − a)/2`: no valid state at this point.
    Invalid,
    Decay(DecayClass<T>),
}

impl<T> CellClass<T> {
    pub fn label(&self) -> &'static str {
        match self {
            CellClass::Invalid => "INVALID",
            CellClass::Decay(d) => d.label(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagramCell<T> {
    pub i: usize,
    pub j: usize,
    pub a: T,
    pub z: T,
    pub class: CellClass<T>,
}

/// Classifies every lattice point, row-major in `a` then `|z|`.
///
/// Cells run in parallel; the output order does not depend on scheduling.
pub fn diagram<T: Real>(grid: DiagramGrid, specs: &[NoiseSpec<T>], t_max: T) -> Result<Vec<DiagramCell<T>>> {
    if grid.n_a < 2 || grid.n_z < 2 {
        return Err(invalid("diagram grid needs at least two points per axis"));
    }
    (0..grid.n_a * grid.n_z)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / grid.n_z, idx % grid.n_z);
            let a: T = grid.a(i);
            let z: T = grid.z(j);
            let class = match XState::slice_point(a, z) {
                Err(_) => CellClass::Invalid,
                Ok(x) => CellClass::Decay(classify(&x, specs, t_max)?),
            };
            Ok(DiagramCell { i, j, a, z, class })
        })
        .collect()
}
