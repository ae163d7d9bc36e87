//! Gauss-Legendre rules, composite and adaptive integration.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess, then Newton on P_n
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn integrate(&self, f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn rule20() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(20))
}

fn rule10() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(10))
}

/// Composite 20-point Gauss-Legendre with `panels` equal panels.
pub fn composite(f: &impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let rule = rule20();
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            let lo = a + i as f64 * h;
            rule.integrate(f, lo, lo + h)
        })
        .sum()
}

/// Adaptive bisection comparing the 10- and 20-point rules on each panel.
pub fn integrate_adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let whole = rule20().integrate(f, a, b);
    if !whole.is_finite() {
        return Err(Error::SingularIntegrand(format!("non-finite integrand on [{a}, {b}]")));
    }
    let scale = whole.abs().max(f64::MIN_POSITIVE);
    adapt(f, a, b, whole, rel_tol, scale, 0)
}

fn adapt(f: &impl Fn(f64) -> f64, a: f64, b: f64, fine: f64, tol: f64, scale: f64, depth: usize) -> Result<f64> {
    let coarse = rule10().integrate(f, a, b);
    if !fine.is_finite() || !coarse.is_finite() {
        return Err(Error::SingularIntegrand(format!("non-finite integrand on [{a}, {b}]")));
    }
    if (fine - coarse).abs() <= tol * scale.max(fine.abs()) {
        return Ok(fine);
    }
    if depth >= 48 {
        return Err(Error::SingularIntegrand(format!("no convergence near [{a}, {b}]")));
    }
    let m = 0.5 * (a + b);
    let left = rule20().integrate(f, a, m);
    let right = rule20().integrate(f, m, b);
    Ok(adapt(f, a, m, left, tol, scale, depth + 1)? + adapt(f, m, b, right, tol, scale, depth + 1)?)
}

/// `int_0^inf f(z) dz` for integrands with Gaussian decay `~ exp(-decay z^2)`.
///
/// The cutoff `Z` starts where `exp(-decay Z^2) < 1e-18` and is extended while
/// the integrand at `Z` is not negligible against its sampled maximum. Panels
/// are doubled until consecutive estimates agree to `1e-11` relative to
/// `int |f|`, so integrals that cancel to zero still converge.
pub fn quad_halfline(f: &impl Fn(f64) -> f64, decay: f64) -> Result<f64> {
    if !(decay > 0.0 && decay.is_finite()) {
        return Err(Error::InvalidParameter(format!("decay rate {decay} must be positive")));
    }
    let mut cutoff = (18.0 * std::f64::consts::LN_10 / decay).sqrt();
    let peak = (1..=400)
        .map(|i| f(cutoff * i as f64 / 400.0).abs())
        .fold(0.0, f64::max);
    let mut guard = 0;
    while f(cutoff).abs() > 1e-20 * peak.max(f64::MIN_POSITIVE) || f(0.9 * cutoff).abs() > 1e-20 * peak {
        cutoff *= 1.25;
        guard += 1;
        if guard > 60 {
            return Err(Error::NonConvergent("half-line cutoff did not settle".into()));
        }
    }
    let mut panels = 8;
    let mut prev = composite(f, 0.0, cutoff, panels);
    for _ in 0..14 {
        panels *= 2;
        let next = composite(f, 0.0, cutoff, panels);
        if !next.is_finite() {
            return Err(Error::NonConvergent("non-finite quadrature estimate".into()));
        }
        let scale = composite(&|z: f64| f(z).abs(), 0.0, cutoff, panels);
        if (next - prev).abs() <= 1e-11 * scale.max(f64::MIN_POSITIVE) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NonConvergent(format!("panel doubling stalled at {panels} panels")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let gl = GaussLegendre::new(5);
        // degree 9 is exact for 5 points
        let v = gl.integrate(&|x: f64| x.powi(8) + x.powi(3), -1.0, 1.0);
        assert!((v - 2.0 / 9.0).abs() < 1e-15);
        let w: f64 = GaussLegendre::new(20).weights.iter().sum();
        assert!((w - 2.0).abs() < 1e-14);
    }

    #[test]
    fn gaussian_half_line() {
        let v = quad_halfline(&|z: f64| (-z * z).exp(), 1.0).unwrap();
        assert!((v - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-13);
    }

    #[test]
    fn adaptive_matches_antiderivative() {
        let v = integrate_adaptive(&|y: f64| 1.0 / (y * y), 1.0, 2.0, 1e-13).unwrap();
        assert!((v - 0.5).abs() < 1e-13);
    }

    #[test]
    fn adaptive_rejects_singular_path() {
        assert!(integrate_adaptive(&|y: f64| 1.0 / (y * y), -1.0, 1.0, 1e-12).is_err());
    }
}
