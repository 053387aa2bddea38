//! Singular-value based decompositions: rank, null space, and the polar
//! partial isometry.
//!
//! The SVD itself comes from `faer`; everything here works on its
//! singular triplets with relative cutoffs.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::subspace::OperatorSubspace;
use super::tolerance::Tolerances;
use crate::error::{Error, Result};

/// Thin singular value decomposition `m = u * diag(s) * v*`, singular values
/// sorted in decreasing order.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

fn raw_svd(m: &ComplexMatrix) -> Result<(ComplexMatrix, Vec<f64>, ComplexMatrix)> {
    let svd = m
        .to_faer()
        .thin_svd()
        .map_err(|e| Error::Numerical(format!("SVD did not converge: {e:?}")))?;
    let sigma = svd.S().column_vector().iter().map(|s| s.re).collect();
    Ok((ComplexMatrix::from_faer(svd.U()), sigma, ComplexMatrix::from_faer(svd.V())))
}

pub fn svd(m: &ComplexMatrix) -> Result<Svd> {
    let (u, singular_values, v) = raw_svd(m)?;
    Ok(Svd { u, singular_values, v })
}

/// Number of singular values strictly above `rank_tol * sigma_max`.
pub fn numerical_rank(m: &ComplexMatrix, tol: &Tolerances) -> Result<usize> {
    let s = svd(m)?.singular_values;
    let cutoff = tol.rank_tol * s.first().copied().unwrap_or(0.0);
    Ok(s.iter().filter(|&&x| x > cutoff).count())
}

/// Orthonormal basis of `{x : m x = 0}` as column vectors.
///
/// A singular value counts as zero when it is at most `rank_tol * sigma_max`,
/// so the zero matrix has the whole space as its kernel.
pub fn null_space(m: &ComplexMatrix, tol: &Tolerances) -> Result<OperatorSubspace> {
    null_space_scaled(m, 0.0, tol)
}

/// Like [`null_space`], with the cutoff `rank_tol * max(sigma_max, scale)`.
///
/// For a matrix assembled from operators of norm about `scale`, rounding
/// noise alone can make `sigma_max` tiny; `scale` keeps that noise in the
/// kernel.
pub fn null_space_scaled(m: &ComplexMatrix, scale: f64, tol: &Tolerances) -> Result<OperatorSubspace> {
    let n = m.cols();
    // zero rows leave the kernel alone but make the thin SVD return a full V
    let padded;
    let m = if m.rows() < n {
        padded = ComplexMatrix::from_fn(n, n, |i, j| if i < m.rows() { m.get(i, j) } else { Complex64::new(0.0, 0.0) });
        &padded
    } else {
        m
    };
    let (_, sigma, v) = raw_svd(m)?;
    let cutoff = tol.rank_tol * sigma.first().copied().unwrap_or(0.0).max(scale);
    let rank = sigma.iter().filter(|&&x| x > cutoff).count();
    let basis = (rank..n)
        .map(|k| ComplexMatrix::from_fn(n, 1, |i, _| v.get(i, k)))
        .collect();
    Ok(OperatorSubspace::from_orthonormal_unchecked(1, n, basis))
}

/// Result of [`polar_partial_isometry`]: `m = u * abs`.
#[derive(Debug, Clone)]
pub struct Polar {
    pub u: ComplexMatrix,
    pub abs: ComplexMatrix,
}

/// Polar decomposition through the SVD `m = U S V*`: keeps the singular
/// values above `rank_tol * sigma_max` and returns `u = U_r V_r*` together
/// with `|m| = V_r S_r V_r*`.
pub fn polar_partial_isometry(m: &ComplexMatrix, tol: &Tolerances) -> Result<Polar> {
    if m.frobenius_norm() <= tol.rank_tol {
        return Err(Error::ZeroMatrix);
    }
    let Svd {
        u,
        singular_values,
        v,
    } = svd(m)?;
    let cutoff = tol.rank_tol * singular_values[0];
    let r = singular_values.iter().filter(|&&x| x > cutoff).count();

    let u_r = ComplexMatrix::from_fn(u.rows(), r, |i, k| u.get(i, k));
    let v_r = ComplexMatrix::from_fn(v.rows(), r, |i, k| v.get(i, k));
    let s_v = ComplexMatrix::from_fn(v.rows(), r, |i, k| v.get(i, k) * singular_values[k]);
    Ok(Polar {
        u: &u_r * &v_r.adjoint(),
        abs: &s_v * &v_r.adjoint(),
    })
}
