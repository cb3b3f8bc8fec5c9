//! Levi-Civita connection and Ricci tensor of a left-invariant metric for
//! which the frame is orthonormal.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frames::FrameAlgebra;
use crate::scalar::Scalar;

/// `gamma[i][j][k] = Γ^k_{ij} = ⟨∇_{e_i} e_j, e_k⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection<S> {
    pub gamma: Vec<Vec<Vec<S>>>,
    /// `bracket[i][j][k] = ⟨[e_i, e_j], e_k⟩ = −c^k_{ij}`.
    pub bracket: Vec<Vec<Vec<S>>>,
}

fn brackets<S: Scalar>(frame: &FrameAlgebra) -> Vec<Vec<Vec<S>>> {
    let n = frame.dim();
    let mut b = vec![vec![vec![S::zero(); n]; n]; n];
    for k in 0..n {
        for (mono, c) in frame.de(k + 1).monomials() {
            let (i, j) = (mono[0] - 1, mono[1] - 1);
            // de^k(e_i, e_j) = −e^k([e_i, e_j])
            b[i][j][k] = -S::from_exact(&c);
            b[j][i][k] = S::from_exact(&c);
        }
    }
    b
}

/// Koszul formula on an orthonormal frame with constant structure
/// coefficients: `2Γ^k_{ij} = b_{ijk} − b_{jki} + b_{kij}`.
pub fn levi_civita<S: Scalar>(frame: &FrameAlgebra) -> Result<Connection<S>> {
    let report = frame.validate();
    if !report.passed() {
        return Err(Error::Frame(format!(
            "d² ≠ 0 on coframe element(s) {:?}",
            report.failures.iter().map(|f| f.0).collect::<Vec<_>>()
        )));
    }
    let n = frame.dim();
    let b = brackets::<S>(frame);
    let half = S::from_ratio(1, 2);
    let gamma = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n)
                        .map(|k| {
                            (b[i][j][k].clone() - b[j][k][i].clone() + b[k][i][j].clone())
                                * half.clone()
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    Ok(Connection { gamma, bracket: b })
}

/// `Ric(e_b, e_c) = Σ_a ⟨R(e_a, e_b) e_c, e_a⟩` with
/// `R(X,Y) = ∇_X∇_Y − ∇_Y∇_X − ∇_[X,Y]`.
pub fn ricci_from<S: Scalar>(conn: &Connection<S>) -> Vec<Vec<S>> {
    let g = &conn.gamma;
    let br = &conn.bracket;
    let n = g.len();
    let mut ric = vec![vec![S::zero(); n]; n];
    for b in 0..n {
        for c in 0..n {
            let mut acc = S::zero();
            for a in 0..n {
                for l in 0..n {
                    acc = acc + g[b][c][l].clone() * g[a][l][a].clone()
                        - g[a][c][l].clone() * g[b][l][a].clone()
                        - br[a][b][l].clone() * g[l][c][a].clone();
                }
            }
            ric[b][c] = acc;
        }
    }
    ric
}

pub fn ricci(frame: &FrameAlgebra) -> Result<Vec<Vec<f64>>> {
    Ok(ricci_from(&levi_civita::<f64>(frame)?))
}

#[derive(Clone, Debug, Serialize)]
pub struct EinsteinReport {
    pub passed: bool,
    pub mu: f64,
    /// `trace(Ric) / n`.
    pub fitted_mu: f64,
    pub scalar: f64,
    /// `max |Ric − μ·id|`.
    pub deviation: f64,
}

pub fn einstein_verify(frame: &FrameAlgebra, mu: f64, tol: f64) -> Result<EinsteinReport> {
    let ric = ricci(frame)?;
    let n = ric.len();
    let scalar: f64 = (0..n).map(|i| ric[i][i]).sum();
    let mut deviation: f64 = 0.0;
    for (i, row) in ric.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let target = if i == j { mu } else { 0.0 };
            deviation = deviation.max((v - target).abs());
        }
    }
    Ok(EinsteinReport {
        passed: deviation < tol,
        mu,
        fitted_mu: scalar / n as f64,
        scalar,
        deviation,
    })
}
