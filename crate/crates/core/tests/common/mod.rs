//! Seeded random states and unitaries shared by the integration tests.

#![allow(dead_code)]

use num_complex::Complex;
use qdecay_core::qmat::{kron, ComplexMat, DensityMatrix};
use qdecay_core::XState;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut impl Rng) -> Complex<f64> {
    Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Full-rank random state `GG†/tr(GG†)` from a Ginibre matrix `G`.
pub fn random_density(rng: &mut impl Rng, n_qubits: usize) -> DensityMatrix<f64> {
    let dim = 1 << n_qubits;
    let g = ComplexMat::new(dim, (0..dim * dim).map(|_| gaussian(rng)).collect()).unwrap();
    let m = &g * &g.dagger();
    let tr = m.trace().re;
    qdecay_core::qmat::validate_density(m.scale_real(1.0 / tr)).unwrap()
}

/// Random state of rank one.
pub fn random_pure(rng: &mut impl Rng, n_qubits: usize) -> DensityMatrix<f64> {
    let psi: Vec<_> = (0..1 << n_qubits).map(|_| gaussian(rng)).collect();
    DensityMatrix::pure(&psi).unwrap()
}

/// Haar-random element of U(2).
pub fn random_unitary(rng: &mut impl Rng) -> ComplexMat<f64> {
    let (a, b) = (gaussian(rng), gaussian(rng));
    let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let (a, b) = (a / norm, b / norm);
    let phase = Complex::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
    ComplexMat::new(2, vec![a * phase, -b.conj() * phase, b * phase, a.conj() * phase]).unwrap()
}

pub fn local_unitary(rng: &mut impl Rng) -> ComplexMat<f64> {
    kron(&random_unitary(rng), &random_unitary(rng)).unwrap()
}

/// Random valid X state with `|z|² ≤ bc`.
pub fn random_x(rng: &mut impl Rng) -> XState {
    let w: [f64; 4] = std::array::from_fn(|_| rng.gen_range(0.0..1.0));
    let total: f64 = w.iter().sum();
    let [a, b, c, d] = w.map(|x| x / total);
    let r = (b * c).sqrt() * rng.gen_range(0.0..1.0);
    let z = Complex::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU));
    XState::new(a, b, c, d, z).unwrap()
}
