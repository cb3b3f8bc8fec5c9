//! Sampling grids and grid-wide classification.

use rayon::prelude::*;
use serde::Serialize;

use super::{warped_g2_torsion, warped_spin7_torsion, WarpProfile, WarpedG2, WarpedSpin7, Warping};
use crate::catalog::{G2Fiber, Su3Fiber};
use crate::class::ClassLabel;
use crate::error::Result;

pub const DEFAULT_GRID: usize = 17;

/// `n` Chebyshev nodes of the first kind in the open interval `(lo, hi)`,
/// ascending.
pub fn chebyshev_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (mid, half) = ((lo + hi) / 2.0, (hi - lo) / 2.0);
    (0..n)
        .rev()
        .map(|k| {
            let x = ((2 * k + 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos();
            mid + half * x
        })
        .collect()
}

/// Finite sampling window inside a profile domain: `(0, ∞) → (0.05, 3)`,
/// `ℝ → (−2, 2)`, finite ends pulled in by 2% of the length.
pub fn sample_window(domain: (f64, f64)) -> (f64, f64) {
    match domain {
        (lo, hi) if lo.is_finite() && hi.is_finite() => {
            let m = 0.02 * (hi - lo);
            (lo + m, hi - m)
        }
        (lo, _) if lo.is_finite() => (lo + 0.05, lo + 3.0),
        (_, hi) if hi.is_finite() => (hi - 3.0, hi - 0.05),
        _ => (-2.0, 2.0),
    }
}

pub fn profile_grid(w: &WarpProfile, n: usize) -> Vec<f64> {
    let (lo, hi) = sample_window(w.domain);
    chebyshev_grid(lo, hi, n)
}

/// Relative variation `(max − min)/max|·|` of `f¹³ f″` over `[0.1, 2]`.
/// A constant would be needed for an Einstein X₂⊕X₃ warped structure.
pub fn obstruction_variation(w: Warping) -> f64 {
    let values: Vec<f64> = chebyshev_grid(0.1, 2.0, 64)
        .into_iter()
        .chain([0.1, 2.0])
        .map(|t| {
            let j = w.expr().jet(t).expect("warping is smooth on [0.1, 2]");
            j.v.powi(13) * j.d2
        })
        .collect();
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        0.0
    } else {
        (max - min) / scale
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GridClass {
    /// Union of the nonvanishing patterns over the grid.
    pub label: ClassLabel,
    pub ts: Vec<f64>,
    pub scalars: Vec<f64>,
    /// Per grid point torsion norms, in the order of the group's components.
    pub norms: Vec<Vec<f64>>,
}

impl GridClass {
    /// Largest `|Scal − target|` over the grid.
    pub fn scalar_deviation(&self, target: f64) -> f64 {
        self.scalars
            .iter()
            .fold(0.0, |m, s| f64::max(m, (s - target).abs()))
    }
}

pub fn g2_grid(fiber: &Su3Fiber, w: &WarpProfile, n: usize, tol: f64) -> Result<(GridClass, Vec<WarpedG2>)> {
    let ts = profile_grid(w, n);
    let samples: Vec<WarpedG2> = ts
        .par_iter()
        .map(|&t| warped_g2_torsion(fiber, w, t))
        .collect::<Result<_>>()?;
    let mask = samples.iter().fold(0, |m, s| m | s.mask(tol));
    Ok((
        GridClass {
            label: ClassLabel::g2(mask),
            ts,
            scalars: samples.iter().map(|s| s.scalar).collect(),
            norms: samples.iter().map(|s| s.norms().to_vec()).collect(),
        },
        samples,
    ))
}

pub fn spin7_grid(
    fiber: &G2Fiber,
    w: &WarpProfile,
    n: usize,
    tol: f64,
) -> Result<(GridClass, Vec<WarpedSpin7>)> {
    let ts = profile_grid(w, n);
    let samples: Vec<WarpedSpin7> = ts
        .par_iter()
        .map(|&t| warped_spin7_torsion(fiber, w, t))
        .collect::<Result<_>>()?;
    let mask = samples.iter().fold(0, |m, s| m | s.mask(tol));
    Ok((
        GridClass {
            label: ClassLabel::spin7(mask),
            ts,
            scalars: samples.iter().map(|s| s.scalar).collect(),
            norms: samples.iter().map(|s| s.norms().to_vec()).collect(),
        },
        samples,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_are_interior_and_sorted() {
        let g = chebyshev_grid(0.0, 1.0, 17);
        assert_eq!(g.len(), 17);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(g[0] > 0.0 && g[16] < 1.0);
        assert!((g[8] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn windows() {
        assert_eq!(sample_window((0.0, f64::INFINITY)), (0.05, 3.0));
        assert_eq!(sample_window((f64::NEG_INFINITY, f64::INFINITY)), (-2.0, 2.0));
        let (lo, hi) = sample_window((0.0, 1.0));
        assert!((lo - 0.02).abs() < 1e-15 && (hi - 0.98).abs() < 1e-15);
    }

    #[test]
    fn obstruction_is_not_constant() {
        for w in [Warping::HypCosine, Warping::Exponential, Warping::HypSine] {
            assert!(obstruction_variation(w) > 0.1, "{w:?}");
        }
    }
}
