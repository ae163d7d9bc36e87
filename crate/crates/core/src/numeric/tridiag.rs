//! Symmetric tridiagonal eigenvalues by Sturm-sequence bisection.

use serde::{Deserialize, Serialize};

/// Symmetric tridiagonal matrix from a discretized `-d^2/dz^2 + V(z)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TridiagSystem {
    pub diagonal: Vec<f64>,
    pub off_diagonal: Vec<f64>,
    pub z_min: f64,
    pub z_max: f64,
    pub n_points: usize,
}

impl TridiagSystem {
    pub fn spacing(&self) -> f64 {
        (self.z_max - self.z_min) / (self.n_points + 1) as f64
    }

    /// Grid abscissae of the interior points.
    pub fn abscissae(&self) -> impl Iterator<Item = f64> + '_ {
        let h = self.spacing();
        (1..=self.n_points).map(move |i| self.z_min + i as f64 * h)
    }
}

/// Number of eigenvalues strictly below `x` (negative pivots of `T - x I`).
pub fn sturm_count(diagonal: &[f64], off_diagonal: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for (i, d) in diagonal.iter().enumerate() {
        let e2 = if i == 0 { 0.0 } else { off_diagonal[i - 1] * off_diagonal[i - 1] };
        let prev = if q == 0.0 { f64::EPSILON * (d.abs() + e2.sqrt()).max(f64::MIN_POSITIVE) } else { q };
        q = (d - x) - if i == 0 { 0.0 } else { e2 / prev };
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn gershgorin(diagonal: &[f64], off_diagonal: &[f64]) -> (f64, f64) {
    let n = diagonal.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { off_diagonal[i - 1].abs() } else { 0.0 }
            + if i + 1 < n { off_diagonal[i].abs() } else { 0.0 };
        lo = lo.min(diagonal[i] - r);
        hi = hi.max(diagonal[i] + r);
    }
    (lo, hi)
}

/// The `k` smallest eigenvalues, ascending. Each index is bisected until the
/// bracket is `1e-12` wide or cannot shrink further in floating point.
pub fn tridiag_eigs(sys: &TridiagSystem, k: usize) -> Vec<f64> {
    eigenvalues_by_index(&sys.diagonal, &sys.off_diagonal, k)
}

pub fn eigenvalues_by_index(diagonal: &[f64], off_diagonal: &[f64], k: usize) -> Vec<f64> {
    let n = diagonal.len();
    assert_eq!(off_diagonal.len(), n.saturating_sub(1), "off-diagonal length must be n - 1");
    let k = k.min(n);
    if k == 0 {
        return Vec::new();
    }
    let (glo, ghi) = gershgorin(diagonal, off_diagonal);
    let pad = 1e-12 * (glo.abs().max(ghi.abs())).max(1.0);
    (0..k)
        .map(|j| {
            let (mut lo, mut hi) = (glo - pad, ghi + pad);
            while hi - lo > 1e-12 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if sturm_count(diagonal, off_diagonal, mid) > j {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}
