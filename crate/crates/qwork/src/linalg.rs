//! Small dense linear-algebra helpers shared across modules.
//!
//! All decompositions go through nalgebra's pure-Rust Hermitian
//! eigendecomposition; sizes here are desk scale (dim ≤ ~64), so no BLAS
//! backend is needed.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{QworkError, Result};

pub(crate) type CMat = DMatrix<C64>;
pub(crate) type RMat = DMatrix<f64>;
pub(crate) type RVec = DVector<f64>;

pub(crate) fn dagger(m: &CMat) -> CMat {
    m.adjoint()
}

/// `(A + A†)/2`; cheap symmetrization before eigendecompositions.
pub(crate) fn hermitize(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

/// Largest entrywise deviation from Hermiticity, `max |A − A†|`.
pub(crate) fn herm_deviation(m: &CMat) -> f64 {
    let d = m - m.adjoint();
    d.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entrywise deviation from symmetry of a real matrix.
pub(crate) fn sym_deviation(m: &RMat) -> f64 {
    let d = m - m.transpose();
    d.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

pub(crate) fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub(crate) fn trace_re(m: &CMat) -> f64 {
    m.trace().re
}

/// Real part of `tr(AB)`.
pub(crate) fn trace_prod_re(a: &CMat, b: &CMat) -> f64 {
    // tr(AB) = Σ_ij A_ij B_ji
    let n = a.nrows();
    let mut t = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            t += a[(i, j)] * b[(j, i)];
        }
    }
    t.re
}

pub(crate) fn identity_c(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub(crate) fn to_complex(m: &RMat) -> CMat {
    m.map(|x| C64::new(x, 0.0))
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
///
/// The input is symmetrized first, so callers may pass matrices that are
/// Hermitian only up to rounding.
pub(crate) fn herm_eigen(m: &CMat) -> (RVec, CMat) {
    let se = hermitize(m).symmetric_eigen();
    sort_eigen_c(se.eigenvalues, se.eigenvectors)
}

fn sort_eigen_c(vals: RVec, vecs: CMat) -> (RVec, CMat) {
    let n = vals.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| vals[a].partial_cmp(&vals[b]).unwrap());
    let sorted_vals = RVec::from_iterator(n, idx.iter().map(|&i| vals[i]));
    let mut sorted_vecs = CMat::zeros(n, n);
    for (k, &i) in idx.iter().enumerate() {
        sorted_vecs.set_column(k, &vecs.column(i));
    }
    (sorted_vals, sorted_vecs)
}

/// Eigendecomposition of a real symmetric matrix, eigenvalues ascending.
pub(crate) fn sym_eigen(m: &RMat) -> (RVec, RMat) {
    let sym = (m + m.transpose()).scale(0.5);
    let se = sym.symmetric_eigen();
    let (vals, vecs) = (se.eigenvalues, se.eigenvectors);
    let n = vals.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| vals[a].partial_cmp(&vals[b]).unwrap());
    let sorted_vals = RVec::from_iterator(n, idx.iter().map(|&i| vals[i]));
    let mut sorted_vecs = RMat::zeros(n, n);
    for (k, &i) in idx.iter().enumerate() {
        sorted_vecs.set_column(k, &vecs.column(i));
    }
    (sorted_vals, sorted_vecs)
}

/// Applies a real scalar function to a Hermitian matrix through its
/// eigendecomposition: `f(A) = V f(Λ) V†`.
pub(crate) fn herm_fn(m: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (vals, vecs) = herm_eigen(m);
    let n = vals.len();
    let fd = CMat::from_diagonal(&DVector::from_iterator(
        n,
        vals.iter().map(|&l| C64::new(f(l), 0.0)),
    ));
    &vecs * fd * vecs.adjoint()
}

/// Square root of a real symmetric PSD matrix; eigenvalues below zero are
/// clamped before the root.
pub(crate) fn sym_psd_sqrt(m: &RMat) -> RMat {
    let (vals, vecs) = sym_eigen(m);
    let n = vals.len();
    let d = RMat::from_diagonal(&RVec::from_iterator(
        n,
        vals.iter().map(|&l| l.max(0.0).sqrt()),
    ));
    &vecs * d * vecs.transpose()
}

/// Matrix logarithm of a strictly positive definite Hermitian matrix.
pub(crate) fn herm_log(m: &CMat) -> Result<CMat> {
    let (vals, vecs) = herm_eigen(m);
    if vals.iter().any(|&l| l <= 0.0) {
        return Err(QworkError::Numerical(format!(
            "matrix logarithm of a non-positive matrix (min eigenvalue {:.3e})",
            vals.min()
        )));
    }
    let n = vals.len();
    let d = CMat::from_diagonal(&DVector::from_iterator(
        n,
        vals.iter().map(|&l| C64::new(l.ln(), 0.0)),
    ));
    Ok(&vecs * d * vecs.adjoint())
}

/// Entropy functional `−Σ λ ln λ` with `0·ln 0 := 0`; eigenvalues in
/// `[−psd_tol, 0]` are clamped to zero, anything lower is an error.
pub(crate) fn entropy_from_eigenvalues(vals: &RVec, psd_tol: f64) -> Result<f64> {
    let mut s = 0.0;
    for &l in vals.iter() {
        if l < -psd_tol {
            return Err(QworkError::InvalidState(format!(
                "negative eigenvalue {l:.3e} beyond tolerance {psd_tol:.1e}"
            )));
        }
        if l > 0.0 {
            s -= l * l.ln();
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn herm_eigen_recovers_matrix() {
        let m = CMat::from_row_slice(
            2,
            2,
            &[c(1.0, 0.0), c(0.0, -0.5), c(0.0, 0.5), c(2.0, 0.0)],
        );
        let (vals, vecs) = herm_eigen(&m);
        let d = CMat::from_diagonal(&DVector::from_iterator(
            2,
            vals.iter().map(|&l| c(l, 0.0)),
        ));
        let rec = &vecs * d * vecs.adjoint();
        assert!(max_abs(&(rec - m)) < 1e-12);
        assert!(vals[0] <= vals[1]);
    }

    #[test]
    fn log_exp_roundtrip() {
        let m = CMat::from_row_slice(2, 2, &[c(0.6, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.9, 0.0)]);
        let l = herm_log(&m).unwrap();
        let back = herm_fn(&l, f64::exp);
        assert!(max_abs(&(back - m)) < 1e-12);
    }

    #[test]
    fn psd_sqrt_squares_back() {
        let a = RMat::from_row_slice(2, 2, &[2.0, 0.3, 0.3, 1.0]);
        let r = sym_psd_sqrt(&a);
        assert!(sym_deviation(&(&r * &r - &a)) < 1e-12);
        assert_abs_diff_eq!((&r * &r - &a).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn entropy_clamps_small_negatives() {
        let v = RVec::from_vec(vec![0.5, 0.5, -1e-10]);
        let s = entropy_from_eigenvalues(&v, 1e-8).unwrap();
        assert_abs_diff_eq!(s, std::f64::consts::LN_2, epsilon = 1e-12);
        let bad = RVec::from_vec(vec![0.5, 0.5, -1e-3]);
        assert!(entropy_from_eigenvalues(&bad, 1e-8).is_err());
    }
}
