//! Small dense linear algebra over any [`Scalar`] ring that is a field.

use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::scalar::Scalar;

pub type Matrix<S> = Vec<Vec<S>>;

pub fn identity<S: Scalar>(n: usize) -> Matrix<S> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect())
        .collect()
}

/// Solves `a · x = b` for a square `a`, with `b` holding one or more
/// right-hand-side columns. Pivots on the largest numeric magnitude, which
/// is exact-safe (any nonzero pivot works) and stable in floating point.
pub fn solve<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Result<Matrix<S>> {
    let n = a.len();
    if b.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(Error::Dimension(n, b.len()));
    }
    let m = b.first().map_or(0, Vec::len);
    let mut aug: Matrix<S> = a
        .iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().chain(rb).cloned().collect())
        .collect();

    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !aug[r][col].is_zero())
            .max_by(|&x, &y| {
                aug[x][col]
                    .value()
                    .abs()
                    .total_cmp(&aug[y][col].value().abs())
            })
            .ok_or(Error::Singular)?;
        aug.swap(col, pivot);
        let inv = S::one() / aug[col][col].clone();
        for v in aug[col].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for r in 0..n {
            if r == col || aug[r][col].is_zero() {
                continue;
            }
            let factor = aug[r][col].clone();
            for k in col..n + m {
                let delta = factor.clone() * aug[col][k].clone();
                aug[r][k] = aug[r][k].clone() - delta;
            }
        }
    }
    Ok(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn inverse<S: Scalar>(a: &Matrix<S>) -> Result<Matrix<S>> {
    solve(a, &identity(a.len()))
}

pub fn mat_mul<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Matrix<S> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(S::zero(), |acc, k| acc + row[k].clone() * b[k][j].clone())
                })
                .collect()
        })
        .collect()
}

/// Orthogonal projection of `target` onto the span of linearly independent
/// `spanning` forms. Returns the expansion coefficients and the residual
/// `target − Σ c_i spanning_i`.
pub fn project<S: Scalar>(target: &Form<S>, spanning: &[Form<S>]) -> Result<(Vec<S>, Form<S>)> {
    let gram: Matrix<S> = spanning
        .iter()
        .map(|a| spanning.iter().map(|b| a.inner(b)).collect())
        .collect();
    let rhs: Matrix<S> = spanning.iter().map(|a| vec![a.inner(target)]).collect();
    let coeffs: Vec<S> = solve(&gram, &rhs)?.into_iter().map(|r| r[0].clone()).collect();
    let mut residual = target.clone();
    for (c, s) in coeffs.iter().zip(spanning) {
        if !c.is_zero() {
            residual = residual - s.scale(c);
        }
    }
    Ok((coeffs, residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactScalar;

    fn q(n: i64) -> ExactScalar {
        ExactScalar::from_i64(n)
    }

    #[test]
    fn exact_inverse() {
        let a = vec![vec![q(2), ExactScalar::sqrt5()], vec![q(1), q(3)]];
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(2));
    }

    #[test]
    fn singular_is_reported() {
        let a = vec![vec![q(1), q(2)], vec![q(2), q(4)]];
        assert!(matches!(inverse(&a), Err(Error::Singular)));
    }

    #[test]
    fn float_solve() {
        let a = vec![vec![1e-3, 1.0], vec![1.0, 1.0]];
        let x = solve(&a, &vec![vec![1.0], vec![2.0]]).unwrap();
        assert!((x[0][0] - 1.001_001_001).abs() < 1e-9);
    }
}
