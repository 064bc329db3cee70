//! Eigenvalue routines for the small matrices used in the crate.
//!
//! Two solvers live here: a cyclic complex Jacobi sweep for Hermitian input
//! and a shifted Hessenberg-QR for the general case. Both deflate on exact
//! zeros, so block-structured input (X states, product channels) keeps its
//! blocks separate and each block's eigenvalues keep relative accuracy.

#![allow(clippy::needless_range_loop)]

use num_complex::Complex;

use super::ComplexMat;
use crate::error::{Error, Result};
use crate::scalar::Real;

const HERMITIAN_INPUT_TOL: f64 = 1e-10;
const MAX_JACOBI_SWEEPS: usize = 64;
const MAX_QR_ITERS: usize = 200;

/// Real spectrum of a Hermitian matrix, ascending.
pub fn hermitian_eigvals<T: Real>(a: &ComplexMat<T>) -> Result<Vec<T>> {
    let defect = a.hermiticity_defect();
    if defect > T::tol(HERMITIAN_INPUT_TOL) {
        return Err(Error::NotHermitian {
            defect: defect.to_f64(),
        });
    }
    let n = a.dim();
    let mut m: Vec<Vec<Complex<T>>> = (0..n).map(|i| (0..n).map(|j| a[(i, j)]).collect()).collect();
    // symmetrise so roundoff in the input cannot bias the sweep
    for i in 0..n {
        m[i][i] = Complex::new(m[i][i].re, T::zero());
        for j in (i + 1)..n {
            let avg = (m[i][j] + m[j][i].conj()) * T::lit(0.5);
            m[i][j] = avg;
            m[j][i] = avg.conj();
        }
    }

    let scale = a.max_abs();
    for _ in 0..MAX_JACOBI_SWEEPS {
        let off: T = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .fold(T::zero(), |acc, (i, j)| acc + m[i][j].norm_sqr());
        if off.sqrt() <= T::epsilon() * scale * T::lit(1e-2) || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                jacobi_rotate(&mut m, p, q);
            }
        }
    }

    let mut vals: Vec<T> = (0..n).map(|i| m[i][i].re).collect();
    vals.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    Ok(vals)
}

/// One two-sided rotation annihilating `m[p][q]`.
fn jacobi_rotate<T: Real>(m: &mut [Vec<Complex<T>>], p: usize, q: usize) {
    let g = m[p][q];
    let mag = g.norm();
    if mag == T::zero() {
        return;
    }
    let phase = g / mag;
    let zeta = (m[q][q].re - m[p][p].re) / (T::lit(2.0) * mag);
    let t = if zeta >= T::zero() {
        T::one() / (zeta + (T::one() + zeta * zeta).sqrt())
    } else {
        -T::one() / (-zeta + (T::one() + zeta * zeta).sqrt())
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;
    let n = m.len();

    // columns: A ← A G with G = [[c, s e], [−s ē, c]]
    for row in m.iter_mut().take(n) {
        let ap = row[p];
        let aq = row[q];
        row[p] = ap * c - aq * phase.conj() * s;
        row[q] = ap * phase * s + aq * c;
    }
    // rows: A ← G† A
    for k in 0..n {
        let ap = m[p][k];
        let aq = m[q][k];
        m[p][k] = ap * c - aq * phase * s;
        m[q][k] = ap * phase.conj() * s + aq * c;
    }
    m[p][q] = Complex::new(T::zero(), T::zero());
    m[q][p] = Complex::new(T::zero(), T::zero());
    m[p][p] = Complex::new(m[p][p].re, T::zero());
    m[q][q] = Complex::new(m[q][q].re, T::zero());
}

/// Eigenvalues of a general complex matrix, unordered.
pub fn eigenvalues<T: Real>(a: &ComplexMat<T>) -> Result<Vec<Complex<T>>> {
    let n = a.dim();
    let mut h: Vec<Vec<Complex<T>>> = (0..n).map(|i| (0..n).map(|j| a[(i, j)]).collect()).collect();
    hessenberg(&mut h);
    hessenberg_qr(h)
}

/// Householder reduction to upper Hessenberg form (similarity transform).
fn hessenberg<T: Real>(h: &mut [Vec<Complex<T>>]) {
    let n = h.len();
    let zero = Complex::new(T::zero(), T::zero());
    for k in 0..n.saturating_sub(2) {
        let tail: T = ((k + 2)..n).fold(T::zero(), |acc, i| acc + h[i][k].norm_sqr());
        if tail == T::zero() {
            continue;
        }
        let x0 = h[k + 1][k];
        let norm = (tail + x0.norm_sqr()).sqrt();
        let phase = if x0.norm() == T::zero() {
            Complex::new(T::one(), T::zero())
        } else {
            x0 / x0.norm()
        };
        // v = x + e^{iφ}‖x‖ e₁, H = I − 2 v v†/(v†v)
        let mut v = vec![zero; n];
        v[k + 1] = x0 + phase * norm;
        for i in (k + 2)..n {
            v[i] = h[i][k];
        }
        let vnorm2: T = v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr());
        let two = T::lit(2.0) / vnorm2;

        // left: rows k+1.. of every column
        for j in 0..n {
            let dot = ((k + 1)..n).fold(zero, |acc, i| acc + v[i].conj() * h[i][j]);
            for i in (k + 1)..n {
                h[i][j] -= v[i] * dot * two;
            }
        }
        // right: columns k+1.. of every row
        for row in h.iter_mut() {
            let dot = ((k + 1)..n).fold(zero, |acc, j| acc + row[j] * v[j]);
            for j in (k + 1)..n {
                row[j] -= dot * v[j].conj() * two;
            }
        }
        for row in h.iter_mut().skip(k + 2) {
            row[k] = zero;
        }
    }
}

/// Stable roots of the 2×2 block `[[p, q], [r, s]]`.
fn eig2<T: Real>(p: Complex<T>, q: Complex<T>, r: Complex<T>, s: Complex<T>) -> [Complex<T>; 2] {
    let half = T::lit(0.5);
    let mean = (p + s) * half;
    let diff = (p - s) * half;
    let disc = (diff * diff + q * r).sqrt();
    let plus = mean + disc;
    let minus = mean - disc;
    let big = if plus.norm() >= minus.norm() { plus } else { minus };
    if big.norm() == T::zero() {
        return [big, big];
    }
    let det = p * s - q * r;
    [big, det / big]
}

fn negligible<T: Real>(sub: Complex<T>, d1: Complex<T>, d2: Complex<T>, scale: T) -> bool {
    let mag = sub.norm();
    if mag == T::zero() {
        return true;
    }
    let local = d1.norm() + d2.norm();
    let reference = if local > T::zero() { local } else { scale };
    mag <= T::epsilon() * reference
}

fn hessenberg_qr<T: Real>(mut h: Vec<Vec<Complex<T>>>) -> Result<Vec<Complex<T>>> {
    let n = h.len();
    let zero = Complex::new(T::zero(), T::zero());
    let scale = h.iter().flatten().fold(T::zero(), |acc, z| acc.max(z.norm()));
    let mut out = Vec::with_capacity(n);
    let mut hi = n as isize - 1;
    let mut iters = 0usize;
    let mut total = 0usize;

    while hi >= 0 {
        let top = hi as usize;
        if top == 0 {
            out.push(h[0][0]);
            break;
        }
        let mut lo = top;
        while lo > 0 {
            if negligible(h[lo][lo - 1], h[lo][lo], h[lo - 1][lo - 1], scale) {
                h[lo][lo - 1] = zero;
                break;
            }
            lo -= 1;
        }
        if lo == top {
            out.push(h[top][top]);
            hi -= 1;
            iters = 0;
            continue;
        }
        if lo + 1 == top {
            let pair = eig2(h[lo][lo], h[lo][top], h[top][lo], h[top][top]);
            out.extend_from_slice(&pair);
            hi -= 2;
            iters = 0;
            continue;
        }

        iters += 1;
        total += 1;
        if total > MAX_QR_ITERS * n {
            return Err(Error::Numerical("QR iteration did not converge".into()));
        }
        let shift = if iters % 11 == 10 {
            // exceptional shift breaks symmetric stalls
            h[top][top] + Complex::new(h[top][top - 1].norm() * T::lit(0.75), T::zero())
        } else {
            let pair = eig2(h[top - 1][top - 1], h[top - 1][top], h[top][top - 1], h[top][top]);
            if (pair[0] - h[top][top]).norm() <= (pair[1] - h[top][top]).norm() {
                pair[0]
            } else {
                pair[1]
            }
        };

        for k in lo..=top {
            h[k][k] -= shift;
        }
        let mut rotations = Vec::with_capacity(top - lo);
        for k in lo..top {
            let x = h[k][k];
            let y = h[k + 1][k];
            let rho = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (c, s) = if rho == T::zero() {
                (T::one(), zero)
            } else if x.norm() == T::zero() {
                (T::zero(), Complex::new(T::one(), T::zero()))
            } else {
                let xn = x.norm();
                (xn / rho, (x / xn) * y.conj() / rho)
            };
            for j in k..=top {
                let a = h[k][j];
                let b = h[k + 1][j];
                h[k][j] = a * c + s * b;
                h[k + 1][j] = -s.conj() * a + b * c;
            }
            rotations.push((c, s));
        }
        for (offset, (c, s)) in rotations.into_iter().enumerate() {
            let k = lo + offset;
            let last = (k + 2).min(top);
            for row in h.iter_mut().take(last + 1).skip(lo) {
                let a = row[k];
                let b = row[k + 1];
                row[k] = a * c + s.conj() * b;
                row[k + 1] = -s * a + b * c;
            }
        }
        for k in lo..=top {
            h[k][k] += shift;
        }
    }
    if out.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Numerical("non-finite eigenvalue".into()));
    }
    Ok(out)
}

const HARD_TOL: f64 = 1e-6;

/// Spectrum of `ρ ρ̃` (the Wootters product), real, clamped to ≥ 0 and
/// sorted descending.
///
/// Imaginary parts and negative parts up to `1e-9` are treated as roundoff;
/// anything beyond `1e-6` means the input was not `ρρ̃` for a valid state.
/// Values between the two thresholds are accepted and clamped.
pub fn product_spectrum<T: Real>(a: &ComplexMat<T>) -> Result<[T; 4]> {
    if a.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: a.dim(),
        });
    }
    let vals = eigenvalues(a)?;
    let mut out = [T::zero(); 4];
    for (slot, z) in out.iter_mut().zip(&vals) {
        if z.im.abs() > T::tol(HARD_TOL) {
            return Err(Error::Numerical(format!(
                "product spectrum has imaginary part {:e}",
                z.im.to_f64()
            )));
        }
        if z.re < -T::tol(HARD_TOL) {
            return Err(Error::Numerical(format!(
                "product spectrum has negative value {:e}",
                z.re.to_f64()
            )));
        }
        *slot = z.re.max(T::zero());
    }
    out.sort_by(|x, y| y.partial_cmp(x).expect("finite spectrum"));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{spin_flip, DensityMatrix};

    fn bell_phi_plus() -> ComplexMat<f64> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = [h, 0.0, 0.0, h].map(|x| Complex::new(x, 0.0));
        DensityMatrix::pure(&psi).unwrap().into_matrix()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn hermitian_diag_and_projector() {
        let d = ComplexMat::diag(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(hermitian_eigvals(&d).unwrap(), vec![0.0, 0.0, 0.0, 1.0]);
        assert!(close(
            &hermitian_eigvals(&bell_phi_plus()).unwrap(),
            &[0.0, 0.0, 0.0, 1.0],
            1e-15
        ));
    }

    #[test]
    fn hermitian_lambda_state() {
        // central block (1/9)[[4, 4], [4, 4]] has eigenvalues 0 and 8/9
        let n = 1.0 / 9.0;
        let rho = ComplexMat::from_real(
            4,
            &[
                n,
                0.0,
                0.0,
                0.0,
                0.0,
                4.0 * n,
                4.0 * n,
                0.0,
                0.0,
                4.0 * n,
                4.0 * n,
                0.0,
                0.0,
                0.0,
                0.0,
                0.0,
            ],
        )
        .unwrap();
        let vals = hermitian_eigvals(&rho).unwrap();
        assert!(close(&vals, &[0.0, 0.0, 1.0 / 9.0, 8.0 / 9.0], 1e-15), "{vals:?}");
    }

    #[test]
    fn hermitian_complex_2x2() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3
        let m = ComplexMat::new(
            2,
            vec![
                Complex::new(2.0, 0.0),
                Complex::new(0.0, 1.0),
                Complex::new(0.0, -1.0),
                Complex::new(2.0, 0.0),
            ],
        )
        .unwrap();
        assert!(close(&hermitian_eigvals(&m).unwrap(), &[1.0, 3.0], 1e-14));
    }

    #[test]
    fn hermitian_rejects_non_hermitian() {
        let m = ComplexMat::from_real(2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(hermitian_eigvals(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn general_eigenvalues_of_triangular_and_rotation() {
        let m = ComplexMat::from_real(
            4,
            &[
                1.0, 2.0, 3.0, 4.0, //
                0.0, 5.0, 6.0, 7.0, //
                0.0, 0.0, 8.0, 9.0, //
                0.0, 0.0, 0.0, 10.0,
            ],
        )
        .unwrap();
        let mut re: Vec<f64> = eigenvalues(&m).unwrap().iter().map(|z| z.re).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!(close(&re, &[1.0, 5.0, 8.0, 10.0], 1e-12));

        // 90° rotation has eigenvalues ±i
        let r = ComplexMat::from_real(2, &[0.0, -1.0, 1.0, 0.0]).unwrap();
        let mut im: Vec<f64> = eigenvalues(&r).unwrap().iter().map(|z| z.im).collect();
        im.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!(close(&im, &[-1.0, 1.0], 1e-14));
    }

    #[test]
    fn general_eigenvalues_of_dense_companion() {
        // companion matrix of (x-1)(x-2)(x-3)(x-4) = x⁴ − 10x³ + 35x² − 50x + 24
        let m = ComplexMat::from_real(
            4,
            &[
                10.0, -35.0, 50.0, -24.0, //
                1.0, 0.0, 0.0, 0.0, //
                0.0, 1.0, 0.0, 0.0, //
                0.0, 0.0, 1.0, 0.0,
            ],
        )
        .unwrap();
        let mut re: Vec<f64> = eigenvalues(&m).unwrap().iter().map(|z| z.re).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!(close(&re, &[1.0, 2.0, 3.0, 4.0], 1e-10), "{re:?}");
    }

    #[test]
    fn product_spectrum_reference_states() {
        let bell = bell_phi_plus();
        let s = product_spectrum(&(&bell * &spin_flip(&bell).unwrap())).unwrap();
        assert!(close(&s, &[1.0, 0.0, 0.0, 0.0], 1e-14), "{s:?}");

        let mixed = ComplexMat::<f64>::identity(4).scale_real(0.25);
        let s = product_spectrum(&(&mixed * &spin_flip(&mixed).unwrap())).unwrap();
        assert!(close(&s, &[1.0 / 16.0; 4], 1e-15));

        let up = ComplexMat::diag(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        let s = product_spectrum(&(&up * &spin_flip(&up).unwrap())).unwrap();
        assert_eq!(s, [0.0; 4]);
    }

    #[test]
    fn product_spectrum_rejects_negative_spectrum() {
        let m = ComplexMat::diag(&[0.5, 0.2, 0.1, -0.01]).unwrap();
        assert!(matches!(product_spectrum(&m), Err(Error::Numerical(_))));
        let tiny = ComplexMat::diag(&[0.5, 0.2, 0.1, -1e-12]).unwrap();
        assert_eq!(product_spectrum(&tiny).unwrap()[3], 0.0);
    }
}
