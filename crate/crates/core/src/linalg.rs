//! Small dense complex matrix helpers on top of nalgebra's pivoted LU.

use crate::{CMatrix, Error, Result, C64};

/// Matrices whose 1-norm condition number exceeds this are treated as singular.
pub const MAX_CONDITION: f64 = 1e12;

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// `J`, the all-ones matrix.
pub fn ones(n: usize) -> CMatrix {
    CMatrix::from_element(n, n, C64::new(1.0, 0.0))
}

/// Maximum absolute column sum.
pub fn norm1(a: &CMatrix) -> f64 {
    a.column_iter().map(|c| c.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Inverse by pivoted LU, rejecting matrices with condition number above
/// [`MAX_CONDITION`].
pub fn inverse(a: &CMatrix) -> Result<CMatrix> {
    inverse_with_scale(a, 0.0)
}

/// As [`inverse`], but measuring the condition against `max(‖a‖₁, scale)`,
/// where `scale` is the size of the terms that were summed to form `a`.
/// Catches cancellation that leaves a well-conditioned but tiny matrix.
pub fn inverse_with_scale(a: &CMatrix, scale: f64) -> Result<CMatrix> {
    debug_assert!(a.is_square());
    if a.nrows() == 0 {
        return Ok(a.clone());
    }
    let anorm = norm1(a).max(scale);
    let inv = a.clone().lu().try_inverse().ok_or(Error::Singular { condition: f64::INFINITY })?;
    let condition = anorm * norm1(&inv);
    if !condition.is_finite() || condition > MAX_CONDITION {
        return Err(Error::Singular { condition });
    }
    Ok(inv)
}

pub fn det(a: &CMatrix) -> C64 {
    if a.nrows() == 0 {
        return C64::new(1.0, 0.0);
    }
    a.clone().lu().determinant()
}

/// Product of the Euclidean row norms; an upper bound on `|det a|` and the
/// natural magnitude scale of a determinant evaluated in floating point.
pub fn hadamard_bound(a: &CMatrix) -> f64 {
    a.row_iter().map(|r| r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).product()
}

/// `max |A^* A - I|` elementwise.
pub fn unitarity_defect(a: &CMatrix) -> f64 {
    let n = a.ncols();
    max_abs(&(a.adjoint() * a - identity(n)))
}
