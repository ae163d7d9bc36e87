//! Independent numerical oracles for the closed-form spectra.
//!
//! The half-line operator `-d^2/dz^2 + V(z)` is discretized by second-order
//! central differences with Dirichlet ends, its lowest eigenvalues are found
//! by Sturm bisection, and the `O(h^2)` error is removed by Richardson
//! extrapolation over grids of ratio two.

pub mod quadrature;
pub mod tridiag;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use quadrature::{composite, integrate_adaptive, quad_halfline, GaussLegendre};
pub use tridiag::{eigenvalues_by_index, sturm_count, tridiag_eigs, TridiagSystem};

pub const DEFAULT_Z_MIN: f64 = 1e-3;
pub const DEFAULT_GRIDS: [usize; 2] = [2000, 4000];

pub fn fd_discretize(v: impl Fn(f64) -> f64, z_min: f64, z_max: f64, n_points: usize) -> Result<TridiagSystem> {
    if !(z_min > 0.0 && z_max > z_min) {
        return Err(Error::InvalidParameter(format!("need 0 < z_min < z_max, got ({z_min}, {z_max})")));
    }
    if n_points < 3 {
        return Err(Error::InvalidParameter(format!("n_points = {n_points} is too small")));
    }
    let h = (z_max - z_min) / (n_points + 1) as f64;
    let inv_h2 = 1.0 / (h * h);
    let mut diagonal = Vec::with_capacity(n_points);
    for i in 1..=n_points {
        let z = z_min + i as f64 * h;
        let vz = v(z);
        if !vz.is_finite() {
            return Err(Error::Domain(format!("potential is not finite at z = {z}")));
        }
        diagonal.push(2.0 * inv_h2 + vz);
    }
    Ok(TridiagSystem {
        diagonal,
        off_diagonal: vec![-inv_h2; n_points - 1],
        z_min,
        z_max,
        n_points,
    })
}

/// Extrapolated eigenvalues with the convergence order seen on the grids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinedSpectrum {
    pub extrapolated: Vec<f64>,
    /// Eigenvalues on the finest grid.
    pub finest: Vec<f64>,
    /// Per level; `None` when successive differences are at rounding level.
    pub observed_order: Vec<Option<f64>>,
}

/// Richardson extrapolation of the `k` lowest eigenvalues assuming `O(h^2)`
/// error. `grids` must hold at least two point counts, each twice the
/// previous; with exactly two grids an auxiliary grid of half the coarsest
/// size is used only to estimate the order.
pub fn refine_extrapolate(
    v: impl Fn(f64) -> f64,
    k: usize,
    grids: &[usize],
    z_min: f64,
    z_max: f64,
) -> Result<RefinedSpectrum> {
    if grids.len() < 2 {
        return Err(Error::InvalidParameter("Richardson refinement needs at least two grids".into()));
    }
    if grids.windows(2).any(|w| w[1] != 2 * w[0]) {
        return Err(Error::InvalidParameter(format!("grids {grids:?} must double at each step")));
    }
    let mut all: Vec<usize> = grids.to_vec();
    if all.len() == 2 {
        all.insert(0, (grids[0] / 2).max(3));
    }
    let mut levels = Vec::with_capacity(all.len());
    for &n in &all {
        let sys = fd_discretize(&v, z_min, z_max, n)?;
        levels.push((sys.spacing(), tridiag_eigs(&sys, k)));
    }
    let m = levels.len();
    let (hc, ec) = &levels[m - 2];
    let (hf, ef) = &levels[m - 1];
    let (hc2, hf2) = (hc * hc, hf * hf);
    let extrapolated: Vec<f64> = ec.iter().zip(ef).map(|(c, f)| (hc2 * f - hf2 * c) / (hc2 - hf2)).collect();

    let (h0, e0) = &levels[m - 3];
    let mut observed_order = Vec::with_capacity(k);
    for j in 0..ef.len() {
        let d1 = e0[j] - ec[j];
        let d2 = ec[j] - ef[j];
        if d2.abs() <= 1e-11 * ef[j].abs().max(1.0) {
            observed_order.push(None);
            continue;
        }
        let p = (d1 / d2).abs().ln() / (h0 / hc).ln();
        if !(p >= 1.5) {
            return Err(Error::NonConvergent(format!("level {j}: observed order {p:.3} below 1.5")));
        }
        observed_order.push(Some(p));
    }
    Ok(RefinedSpectrum { extrapolated, finest: ef.clone(), observed_order })
}

/// Default right end: twice the turning point of the highest level for a
/// potential growing like `b z^2`, never below 10.
pub fn default_z_max(highest_energy: f64, quadratic_strength: f64) -> f64 {
    (2.0 * (highest_energy / quadratic_strength).sqrt()).max(10.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelPair {
    pub analytic: f64,
    pub numeric: f64,
    pub abs_error: f64,
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumComparison {
    pub pairs: Vec<LevelPair>,
    /// Numeric levels inside the compared window that no analytic level claimed.
    pub unmatched_numeric_levels: Vec<f64>,
    /// Numeric levels lying below the lowest analytic level.
    pub unexpected_low_levels: Vec<f64>,
}

impl SpectrumComparison {
    pub fn max_rel_error(&self) -> f64 {
        self.pairs.iter().map(|p| p.rel_error).fold(0.0, f64::max)
    }
}

/// Pairs every analytic level with its nearest unused numeric level.
pub fn compare_spectra(analytic: &[f64], numeric: &[f64], tol: f64) -> SpectrumComparison {
    let mut used = vec![false; numeric.len()];
    let mut pairs = Vec::with_capacity(analytic.len());
    for &a in analytic {
        let best = numeric
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .min_by(|(_, x), (_, y)| (*x - a).abs().total_cmp(&(*y - a).abs()));
        if let Some((i, &nv)) = best {
            used[i] = true;
            let abs_error = (nv - a).abs();
            pairs.push(LevelPair { analytic: a, numeric: nv, abs_error, rel_error: abs_error / a.abs().max(f64::MIN_POSITIVE) });
        }
    }
    let lowest = analytic.first().copied().unwrap_or(f64::NEG_INFINITY);
    let highest = analytic.last().copied().unwrap_or(f64::INFINITY);
    let margin = tol * lowest.abs().max(1.0);
    let unmatched_numeric_levels = numeric
        .iter()
        .zip(&used)
        .filter(|(v, u)| !**u && **v <= highest + margin)
        .map(|(v, _)| *v)
        .collect();
    let unexpected_low_levels = numeric.iter().copied().filter(|v| *v < lowest - margin).collect();
    SpectrumComparison { pairs, unmatched_numeric_levels, unexpected_low_levels }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coarse_system_is_valid() {
        let sys = fd_discretize(|z| z * z, 1e-3, 12.0, 10).unwrap();
        assert_eq!(sys.diagonal.len(), 10);
        assert_eq!(sys.off_diagonal.len(), 9);
        assert_eq!(tridiag_eigs(&sys, 3).len(), 3);
    }

    #[test]
    fn rejects_bad_domain_and_nonfinite_potential() {
        assert!(fd_discretize(|z| z, 0.0, 1.0, 100).is_err());
        assert!(fd_discretize(|z| 1.0 / (z - 0.5), 1e-3, 1.0, 100).is_ok());
        assert!(fd_discretize(|_| f64::NAN, 1e-3, 1.0, 100).is_err());
    }

    #[test]
    fn half_line_oscillator_odd_levels() {
        // Dirichlet wall at z_min = 1e-3; the ground state grows like z at the
        // origin, so the wall lifts it by about psi'(0)^2 z_min = 2.26e-3
        let r = refine_extrapolate(|z| z * z, 3, &[2000, 4000], 1e-3, 12.0).unwrap();
        for (got, want) in r.extrapolated.iter().zip([3.0, 7.0, 11.0]) {
            assert!((got - want).abs() / want < 1e-5, "{got} vs {want}");
        }
        assert!((r.extrapolated[0] - 3.0).abs() <= 1e-7);
    }

    #[test]
    fn half_line_oscillator_with_wall_near_origin() {
        let r = refine_extrapolate(|z| z * z, 3, &[2000, 4000], 1e-9, 12.0).unwrap();
        for (got, want) in r.extrapolated.iter().zip([3.0, 7.0, 11.0]) {
            assert!((got - want).abs() / want < 1e-5, "{got} vs {want}");
        }
        assert!((r.extrapolated[0] - 3.0).abs() <= 1e-7);
        for p in r.observed_order.iter().flatten() {
            assert!((p - 2.0).abs() < 0.2, "order {p}");
        }
    }

    #[test]
    fn single_grid_rejected() {
        assert!(refine_extrapolate(|z| z * z, 1, &[2000], 1e-3, 12.0).is_err());
        assert!(refine_extrapolate(|z| z * z, 1, &[2000, 3000], 1e-3, 12.0).is_err());
    }

    #[test]
    fn comparison_cases() {
        let a = [3.0, 7.0, 11.0];
        let same = compare_spectra(&a, &a, 1e-6);
        assert!(same.pairs.iter().all(|p| p.abs_error == 0.0 && p.rel_error == 0.0));
        assert!(same.unmatched_numeric_levels.is_empty());

        let shifted: Vec<f64> = a.iter().map(|v| v + 0.5).collect();
        let cmp = compare_spectra(&a, &shifted, 1e-6);
        for p in &cmp.pairs {
            assert!((p.rel_error - 0.5 / p.analytic).abs() < 1e-15);
        }

        let extra = [1.0, 3.0, 7.0, 11.0];
        let cmp = compare_spectra(&a, &extra, 1e-6);
        assert_eq!(cmp.unexpected_low_levels, vec![1.0]);
        assert_eq!(cmp.unmatched_numeric_levels, vec![1.0]);
    }
}
