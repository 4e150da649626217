use itertools::Itertools;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{principal_submatrix, CMatrix};

/// Largest matrix order accepted by the subset enumerations.
pub const MAX_SUBSET_ORDER: usize = 20;

/// Index subsets of `{0, .., n-1}` with `t` elements, in lexicographic order.
pub fn index_subsets(n: usize, t: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n).combinations(t)
}

pub(crate) fn check_order(n: usize) -> Result<()> {
    if n > MAX_SUBSET_ORDER {
        return Err(Error::TooLarge { size: n, limit: MAX_SUBSET_ORDER });
    }
    Ok(())
}

/// Sum of all principal minors of order `t`, so that
/// `det(I + x A) = sum_t x^t principal_minor_sum(A, t)`.
pub fn principal_minor_sum(a: &CMatrix, t: usize) -> Result<Complex64> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::InvalidDimension(format!("expected a square matrix, got {}x{}", n, a.ncols())));
    }
    check_order(n)?;
    if t > n {
        return Err(Error::InvalidDimension(format!("minor order {t} exceeds matrix order {n}")));
    }
    if t == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    Ok(index_subsets(n, t).map(|idx| principal_submatrix(a, &idx).determinant()).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{complex_normal_matrix, stream_rng};

    #[test]
    fn identity_minors() {
        let i2 = CMatrix::identity(2, 2);
        assert!((principal_minor_sum(&i2, 0).unwrap() - 1.0).norm() < 1e-15);
        assert!((principal_minor_sum(&i2, 1).unwrap() - 2.0).norm() < 1e-15);
        assert!((principal_minor_sum(&i2, 2).unwrap() - 1.0).norm() < 1e-15);
    }

    #[test]
    fn diagonal_first_order_is_trace() {
        let a = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(3.0, 1.0),
            Complex64::new(-0.5, 2.0),
        ]));
        assert!((principal_minor_sum(&a, 1).unwrap() - Complex64::new(2.5, 3.0)).norm() < 1e-15);
    }

    #[test]
    fn expansion_reproduces_determinant() {
        let mut rng = stream_rng(21, 0);
        let x = complex_normal_matrix(&mut rng, 5, 5);
        let a = &x + x.adjoint();
        for lambda in [0.1, 1.0, 10.0] {
            let direct = (CMatrix::identity(5, 5) + a.map(|z| z * lambda)).determinant();
            let expanded: Complex64 =
                (0..=5).map(|t| principal_minor_sum(&a, t).unwrap() * lambda.powi(t as i32)).sum();
            assert!((direct - expanded).norm() <= 1e-10 * direct.norm(), "lambda {lambda}");
        }
    }

    #[test]
    fn guards() {
        let big = CMatrix::identity(21, 21);
        assert!(matches!(principal_minor_sum(&big, 1), Err(Error::TooLarge { .. })));
        assert!(principal_minor_sum(&CMatrix::identity(2, 2), 3).is_err());
        assert!(principal_minor_sum(&CMatrix::zeros(2, 3), 1).is_err());
        assert_eq!(index_subsets(4, 2).count(), 6);
        assert_eq!(index_subsets(3, 2).next().unwrap(), vec![0, 1]);
    }
}
