//! Small dense linear algebra on top of nalgebra's SVD: numerical rank,
//! unit null vectors and minimum-norm least squares.

use nalgebra::{ComplexField, DMatrix, DVector};

/// Relative threshold for rank decisions: a singular value counts as zero
/// when it is at most `RANK_RTOL` times a reference singular value.
pub const RANK_RTOL: f64 = 1e-8;

pub(crate) fn singular_values<T>(a: &DMatrix<T>) -> DVector<f64>
where
    T: ComplexField<RealField = f64>,
{
    if a.nrows() == 0 || a.ncols() == 0 {
        return DVector::zeros(0);
    }
    a.clone().svd(false, false).singular_values
}

pub(crate) fn largest_singular_value<T>(a: &DMatrix<T>) -> f64
where
    T: ComplexField<RealField = f64>,
{
    singular_values(a).iter().fold(0.0, |m, s| m.max(*s))
}

/// Whether the rows of `a` span the whole `ncols`-dimensional space, i.e.
/// `a` has `ncols` singular values above `threshold`.
pub(crate) fn rows_span<T>(a: &DMatrix<T>, threshold: f64) -> bool
where
    T: ComplexField<RealField = f64>,
{
    let k = a.ncols();
    if k == 0 {
        return true;
    }
    if a.nrows() < k {
        return false;
    }
    let sv = singular_values(a);
    sv.len() == k && sv.iter().all(|s| *s > threshold)
}

/// Unit vector `u` minimizing `|a u|`, from the right singular vector of the
/// smallest singular value. The phase is fixed so that the first component
/// with modulus above `1e-12` is real and positive.
pub(crate) fn null_vector<T>(a: &DMatrix<T>) -> DVector<T>
where
    T: ComplexField<RealField = f64>,
{
    let k = a.ncols();
    assert!(k > 0, "null vector of a zero-column matrix");
    // pad to square so the SVD returns a full right basis
    let rows = a.nrows().max(k);
    let mut padded = DMatrix::<T>::zeros(rows, k);
    padded.view_mut((0, 0), (a.nrows(), k)).copy_from(a);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let (idx, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |(bi, bs), (i, s)| {
            if *s < bs {
                (i, *s)
            } else {
                (bi, bs)
            }
        });
    let mut u: DVector<T> = v_t.row(idx).adjoint();
    let norm = u.norm();
    u.unscale_mut(norm);
    normalize_phase(&mut u);
    u
}

pub(crate) fn normalize_phase<T>(u: &mut DVector<T>)
where
    T: ComplexField<RealField = f64>,
{
    if let Some(c) = u.iter().find(|c| (*c).clone().modulus() > 1e-12).cloned() {
        let phase = c.clone().unscale(c.clone().modulus());
        let rot = phase.conjugate();
        for e in u.iter_mut() {
            *e = e.clone() * rot.clone();
        }
    }
}

/// Minimum-norm least-squares solution of `a x = b` with its numerical rank
/// (singular values above `RANK_RTOL * sigma_max`).
pub(crate) fn lstsq(a: &DMatrix<f64>, b: &DVector<f64>) -> (DVector<f64>, usize) {
    let n = a.ncols();
    if a.nrows() == 0 || n == 0 {
        return (DVector::zeros(n), 0);
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().fold(0.0f64, |m, s| m.max(*s));
    let eps = RANK_RTOL * smax;
    let rank = svd.singular_values.iter().filter(|s| **s > eps).count();
    if smax == 0.0 {
        return (DVector::zeros(n), 0);
    }
    let x = svd.solve(b, eps).expect("U and V^T were computed");
    (x, rank)
}
