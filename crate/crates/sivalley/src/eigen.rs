//! Dense complex Hermitian eigensolver with residual verification.
//!
//! Backed by LAPACK's divide-and-conquer driver (zheevd) through the system
//! BLAS/LAPACK library. Every returned eigenpair is verified against the
//! residual bound ‖Hv − λv‖ ≤ tol·‖H‖_F and phase-fixed so that the
//! largest-magnitude coefficient is real positive, which makes output files
//! deterministic in degenerate subspaces.

use ndarray::Array2;
use num_complex::Complex64;
use thiserror::Error;

extern crate openblas_src;

extern "C" {
    fn zheevd_(
        jobz: *const u8,
        uplo: *const u8,
        n: *const i32,
        a: *mut Complex64,
        lda: *const i32,
        w: *mut f64,
        work: *mut Complex64,
        lwork: *const i32,
        rwork: *mut f64,
        lrwork: *const i32,
        iwork: *mut i32,
        liwork: *const i32,
        info: *mut i32,
    );
}

/// Relative residual bound enforced on every returned eigenpair.
pub const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EigenError {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("requested {k} eigenpairs from a {dim}-dimensional matrix")]
    TooManyPairs { k: usize, dim: usize },
    #[error("matrix is not Hermitian: max |H - H†| element {defect:.3e} exceeds {tol:.3e}")]
    NotHermitian { defect: f64, tol: f64 },
    #[error("LAPACK zheevd failed to converge (info = {info}, dim = {dim})")]
    LapackFailure { info: i32, dim: usize },
    #[error(
        "eigenpair {index} failed residual verification: ‖Hv − λv‖ = {residual:.3e} > {bound:.3e}"
    )]
    ResidualTooLarge {
        index: usize,
        residual: f64,
        bound: f64,
    },
}

/// The k lowest eigenpairs in ascending eigenvalue order.
#[derive(Debug, Clone)]
pub struct EigenSolution {
    pub values: Vec<f64>,
    /// Column i is the eigenvector of `values[i]`, unit norm, phase-fixed.
    pub vectors: Array2<Complex64>,
    /// Per-pair residual ‖Hv − λv‖ relative to ‖H‖_F.
    pub residuals: Vec<f64>,
}

fn frobenius_norm(h: &Array2<Complex64>) -> f64 {
    h.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest-magnitude coefficient made real positive.
fn fix_phase(v: &mut [Complex64]) {
    let mut best = 0usize;
    let mut best_norm = 0.0;
    for (i, c) in v.iter().enumerate() {
        let n = c.norm_sqr();
        if n > best_norm {
            best_norm = n;
            best = i;
        }
    }
    let pivot = v[best];
    let norm = pivot.norm();
    if norm > 0.0 {
        let phase = pivot.conj() / norm;
        for c in v.iter_mut() {
            *c *= phase;
        }
    }
}

/// Computes the k lowest eigenpairs of a Hermitian matrix.
pub fn eigh_lowest(h: &Array2<Complex64>, k: usize) -> Result<EigenSolution, EigenError> {
    let (rows, cols) = h.dim();
    if rows != cols {
        return Err(EigenError::NotSquare { rows, cols });
    }
    let n = rows;
    if k > n {
        return Err(EigenError::TooManyPairs { k, dim: n });
    }
    let norm = frobenius_norm(h);
    // Hermiticity guard; construction should guarantee far better than this.
    let scale = norm.max(1e-300) / (n as f64);
    let mut defect = 0.0f64;
    for i in 0..n {
        for j in i..n {
            let d = (h[(i, j)] - h[(j, i)].conj()).norm();
            if d > defect {
                defect = d;
            }
        }
    }
    let herm_tol = 1e-12 * scale.max(1e-12);
    if defect > herm_tol {
        return Err(EigenError::NotHermitian {
            defect,
            tol: herm_tol,
        });
    }

    // column-major copy for LAPACK
    let mut a = vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..n {
        for i in 0..n {
            a[j * n + i] = h[(i, j)];
        }
    }
    let mut w = vec![0.0f64; n];
    let nn = n as i32;
    let mut info = 0i32;
    unsafe {
        let mut wkopt = Complex64::new(0.0, 0.0);
        let mut rwkopt = 0.0f64;
        let mut iwkopt = 0i32;
        let m1 = -1i32;
        zheevd_(
            b"V".as_ptr(),
            b"L".as_ptr(),
            &nn,
            a.as_mut_ptr(),
            &nn,
            w.as_mut_ptr(),
            &mut wkopt,
            &m1,
            &mut rwkopt,
            &m1,
            &mut iwkopt,
            &m1,
            &mut info,
        );
        if info != 0 {
            return Err(EigenError::LapackFailure { info, dim: n });
        }
        let lwork = wkopt.re as i32;
        let lrwork = rwkopt as i32;
        let liwork = iwkopt;
        let mut work = vec![Complex64::new(0.0, 0.0); lwork.max(1) as usize];
        let mut rwork = vec![0.0f64; lrwork.max(1) as usize];
        let mut iwork = vec![0i32; liwork.max(1) as usize];
        zheevd_(
            b"V".as_ptr(),
            b"L".as_ptr(),
            &nn,
            a.as_mut_ptr(),
            &nn,
            w.as_mut_ptr(),
            work.as_mut_ptr(),
            &lwork,
            rwork.as_mut_ptr(),
            &lrwork,
            iwork.as_mut_ptr(),
            &liwork,
            &mut info,
        );
    }
    if info != 0 {
        return Err(EigenError::LapackFailure { info, dim: n });
    }

    let mut vectors = Array2::<Complex64>::zeros((n, k));
    let mut residuals = vec![0.0; k];
    let bound = RESIDUAL_TOL * norm.max(1e-300);
    for col in 0..k {
        let mut v: Vec<Complex64> = (0..n).map(|i| a[col * n + i]).collect();
        fix_phase(&mut v);
        // residual ‖Hv − λv‖
        let lambda = w[col];
        let mut res = 0.0f64;
        for i in 0..n {
            let mut hv = Complex64::new(0.0, 0.0);
            for j in 0..n {
                hv += h[(i, j)] * v[j];
            }
            res += (hv - lambda * v[i]).norm_sqr();
        }
        let res = res.sqrt();
        if res > bound && norm > 0.0 {
            return Err(EigenError::ResidualTooLarge {
                index: col,
                residual: res,
                bound,
            });
        }
        residuals[col] = if norm > 0.0 { res / norm } else { 0.0 };
        for i in 0..n {
            vectors[(i, col)] = v[i];
        }
    }
    Ok(EigenSolution {
        values: w[..k].to_vec(),
        vectors,
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn scaled_identity() {
        let n = 5;
        let mut h = Array2::<Complex64>::zeros((n, n));
        for i in 0..n {
            h[(i, i)] = c(2.5, 0.0);
        }
        let sol = eigh_lowest(&h, n).unwrap();
        for v in sol.values {
            assert!((v - 2.5).abs() < 1e-14);
        }
    }

    #[test]
    fn two_by_two_symmetric_coupling() {
        let delta = 0.37;
        let mut h = Array2::<Complex64>::zeros((2, 2));
        h[(0, 1)] = c(delta, 0.0);
        h[(1, 0)] = c(delta, 0.0);
        let sol = eigh_lowest(&h, 2).unwrap();
        assert!((sol.values[0] + delta).abs() < 1e-14);
        assert!((sol.values[1] - delta).abs() < 1e-14);
        // eigenvectors (1, ∓1)/√2 up to the fixed phase
        let s = 1.0 / 2.0f64.sqrt();
        let v0 = [sol.vectors[(0, 0)], sol.vectors[(1, 0)]];
        assert!((v0[0].re.abs() - s).abs() < 1e-12);
        assert!((v0[0] + v0[1]).norm() < 1e-12 || (v0[0] - v0[1]).norm() < 1e-12);
    }

    #[test]
    fn random_hermitian_spectral_mapping() {
        // eigenvalues of H² must equal squares of eigenvalues of H
        let n = 50;
        let mut h = Array2::<Complex64>::zeros((n, n));
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for i in 0..n {
            for j in i..n {
                let re = next();
                let im = if i == j { 0.0 } else { next() };
                h[(i, j)] = c(re, im);
                h[(j, i)] = c(re, -im);
            }
        }
        let mut h2 = Array2::<Complex64>::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                let mut s = c(0.0, 0.0);
                for k in 0..n {
                    s += h[(i, k)] * h[(k, j)];
                }
                h2[(i, j)] = s;
            }
        }
        let sol = eigh_lowest(&h, n).unwrap();
        let sol2 = eigh_lowest(&h2, n).unwrap();
        let mut squares: Vec<f64> = sol.values.iter().map(|v| v * v).collect();
        squares.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in squares.iter().zip(sol2.values.iter()) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn orthonormal_and_phase_fixed() {
        let n = 20;
        let mut h = Array2::<Complex64>::zeros((n, n));
        for i in 0..n {
            h[(i, i)] = c(i as f64, 0.0);
            if i + 1 < n {
                h[(i, i + 1)] = c(0.3, 0.2);
                h[(i + 1, i)] = c(0.3, -0.2);
            }
        }
        let sol = eigh_lowest(&h, n).unwrap();
        for a in 0..n {
            // pivot real positive
            let col: Vec<Complex64> = (0..n).map(|i| sol.vectors[(i, a)]).collect();
            let pivot = col
                .iter()
                .cloned()
                .max_by(|x, y| x.norm().partial_cmp(&y.norm()).unwrap())
                .unwrap();
            assert!(pivot.im.abs() < 1e-12 && pivot.re > 0.0);
            for b in 0..n {
                let mut dot = c(0.0, 0.0);
                for i in 0..n {
                    dot += sol.vectors[(i, a)].conj() * sol.vectors[(i, b)];
                }
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((dot.norm() - expect).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn non_square_and_oversized_k_rejected() {
        let h = Array2::<Complex64>::zeros((2, 3));
        assert!(matches!(
            eigh_lowest(&h, 1),
            Err(EigenError::NotSquare { .. })
        ));
        let h = Array2::<Complex64>::zeros((2, 2));
        assert!(matches!(
            eigh_lowest(&h, 3),
            Err(EigenError::TooManyPairs { .. })
        ));
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut h = Array2::<Complex64>::zeros((2, 2));
        h[(0, 1)] = c(1.0, 0.0);
        h[(1, 0)] = c(0.5, 0.0);
        assert!(matches!(
            eigh_lowest(&h, 2),
            Err(EigenError::NotHermitian { .. })
        ));
    }
}
