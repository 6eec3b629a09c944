use nalgebra::{Matrix2, Vector2};

use crate::error::{Error, Result};

/// Normalized null vector of a 2×2 generator with zero column sums.
///
/// For `M = [[-a, b], [a, -b]]` the kernel is spanned by `(b, a)`, so the
/// probability vector is `(b, a) / (a + b)`.
pub fn null_vector_2(m: &Matrix2<f64>) -> Result<Vector2<f64>> {
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("generator has non-finite entries".into()));
    }
    let scale = m.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    if scale == 0.0 {
        return Err(Error::DegenerateGenerator);
    }
    let col_tol = 1e-12 * scale;
    for c in 0..2 {
        let sum = m[(0, c)] + m[(1, c)];
        if sum.abs() > col_tol {
            return Err(Error::Domain(format!(
                "column {c} of the generator sums to {sum:e}, not zero"
            )));
        }
    }
    let (a, b) = (m[(1, 0)], m[(0, 1)]);
    if a < 0.0 || b < 0.0 {
        return Err(Error::Domain(
            "generator has negative off-diagonal entries".into(),
        ));
    }
    let total = a + b;
    if total == 0.0 {
        return Err(Error::DegenerateGenerator);
    }
    Ok(Vector2::new(b / total, a / total))
}
