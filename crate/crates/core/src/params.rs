//! Model parameters and the parameter-matching problem.
//!
//! Two ways to obtain a solvable superpotential:
//!
//! * [`solve_forward`] takes `(omega_bar, rho_q, d)` as free inputs and always
//!   returns a consistent [`FactorizationParams`].
//! * [`solve_inverse`] starts from the Swanson couplings `(omega, alpha, beta)`.
//!   The matching system has five equations for three unknowns, so the solver
//!   fixes `d` and `c` from the two coupling equations, `rho_q` from the
//!   closed-form expression in `X`, and reports the residual of every equation
//!   in a [`ConstraintReport`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Swanson couplings `omega`, `alpha`, `beta` and the gauge constant `delta`
/// entering the zeroth-order coefficient of the expanded Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub omega: f64,
    pub alpha: f64,
    pub beta: f64,
    #[serde(default)]
    pub delta_gauge: f64,
}

impl ModelParams {
    pub fn new(omega: f64, alpha: f64, beta: f64) -> Self {
        Self { omega, alpha, beta, delta_gauge: 0.0 }
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta_gauge = delta;
        self
    }

    /// Builds the couplings whose reduced frequency equals `omega_bar`.
    pub fn from_omega_bar(omega_bar: f64, alpha: f64, beta: f64) -> Self {
        Self::new(omega_bar + alpha + beta, alpha, beta)
    }

    pub fn omega_bar(&self) -> f64 {
        self.omega - self.alpha - self.beta
    }

    /// Set when `omega^2 - 4 alpha beta <= 0`. Only a warning: the reality
    /// condition was established for the harmonic-oscillator realization.
    pub fn reality_warning(&self) -> bool {
        self.omega * self.omega - 4.0 * self.alpha * self.beta <= 0.0
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("omega", self.omega), ("alpha", self.alpha), ("beta", self.beta), ("delta", self.delta_gauge)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} = {v} is not finite")));
            }
        }
        let wb = self.omega_bar();
        if wb <= 0.0 {
            return Err(Error::IllPosedModel(wb));
        }
        if self.alpha == self.beta {
            return Err(Error::EqualCouplings(self.alpha));
        }
        Ok(())
    }
}

/// The constants `a1..a5` collecting the couplings of the expanded potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstants {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    pub a5: f64,
    pub omega_bar: f64,
}

impl DerivedConstants {
    /// Coefficients `(4 wb, 0, -(2 a1 - a2), -2 a1)` of the cubic fixing `d`.
    pub fn d_cubic(&self) -> [f64; 4] {
        [4.0 * self.omega_bar, 0.0, -(2.0 * self.a1 - self.a2), -2.0 * self.a1]
    }
}

pub fn derive_constants(p: &ModelParams) -> Result<DerivedConstants> {
    p.validate()?;
    let wb = p.omega_bar();
    let (al, be) = (p.alpha, p.beta);
    let diff2 = (al - be) * (al - be) / wb;
    let sum = al + be;
    let dc = DerivedConstants {
        a1: diff2 + wb + 2.0 * sum,
        a2: wb + sum,
        a3: sum / 2.0,
        a4: 0.25 * (diff2 + 2.0 * sum),
        a5: (wb + sum) / 2.0,
        omega_bar: wb,
    };
    Ok(dc)
}

/// Parameters of the superpotential ansatz and of the solvable partner pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FactorizationParams {
    pub omega_bar: f64,
    pub rho_q: f64,
    pub d: f64,
    /// Only present for parameters obtained from the Swanson couplings.
    pub c: Option<f64>,
    pub mu: f64,
    pub lambda: f64,
    pub omega_hat: f64,
    pub gamma: f64,
}

impl FactorizationParams {
    pub fn sqrt_omega_bar(&self) -> f64 {
        self.omega_bar.sqrt()
    }

    pub fn with_c(mut self, c: f64) -> Self {
        self.c = Some(c);
        self
    }

    /// Constant shift of the transformed plus-side potential,
    /// `2 d (rho + 7 sqrt(wb)/2)(rho + 3 sqrt(wb)/2)`.
    pub fn plus_shift(&self) -> f64 {
        let s = self.sqrt_omega_bar();
        2.0 * self.d * (self.rho_q + 3.5 * s) * (self.rho_q + 1.5 * s)
    }

    /// Inverse-square strength of the transformed plus-side potential.
    pub fn inverse_square_strength(&self) -> f64 {
        (self.rho_q * self.rho_q + self.sqrt_omega_bar() * self.rho_q) / self.omega_bar
    }

    /// Quadratic strength `mu^2 wb` of the transformed potentials.
    pub fn quadratic_strength(&self) -> f64 {
        self.mu * self.mu * self.omega_bar
    }
}

/// Residuals of the five matching equations plus the feasibility data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstraintReport {
    /// `|a1 - mu^2|`
    pub mu_squared: f64,
    /// `|2(a3 + 2 a4) - rho (rho + 3 sqrt(wb))|`
    pub quadratic: f64,
    /// `|(a2 - 2 a1)(c + 1) + a5 - 2 d (rho + 7 sqrt(wb)/2)(rho + sqrt(wb)/2)|`
    pub constant: f64,
    /// `|c(-3 a2 d + 2 a1 + a1 c + 2 a1 d) - 12 wb d^2|`
    pub coupling: f64,
    /// `|2 a1 (1 + d) - a2 d - 4 wb d^3|`
    pub cubic: f64,
    pub x: f64,
    pub feasible_4x: bool,
    pub d_root_count: usize,
}

pub fn solve_forward(omega_bar: f64, rho_q: f64, d: f64) -> Result<FactorizationParams> {
    for (name, v) in [("omega_bar", omega_bar), ("rho_q", rho_q), ("d", d)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::InvalidParameter(format!("{name} = {v} must be positive")));
        }
    }
    let s = omega_bar.sqrt();
    let bracket = 2.0 * rho_q + 3.0 * s;
    Ok(FactorizationParams {
        omega_bar,
        rho_q,
        d,
        c: None,
        mu: -0.5 * d * bracket,
        lambda: -2.0 * d * s,
        omega_hat: 0.5 * d * s * bracket,
        gamma: rho_q / s + 1.5,
    })
}

/// `X` of the closed-form expression for `rho`.
pub fn x_value(dc: &DerivedConstants, c: f64, d: f64) -> f64 {
    4.0 * dc.a1 / (d * d) - 8.0 * (dc.a3 + 2.0 * dc.a4)
        + ((dc.a2 - 2.0 * dc.a1) * (c + 1.0) + dc.a5) / (2.0 * d)
}

/// Negative branch of the quadratic for `c` given `d`.
pub fn c_negative_branch(dc: &DerivedConstants, d: f64) -> f64 {
    let wb = dc.omega_bar;
    let lin = 2.0 * dc.a2 * d - 4.0 * wb * d.powi(3);
    let disc = lin * lin + 48.0 * dc.a1 * wb * d * d;
    (lin - disc.sqrt()) / (2.0 * dc.a1)
}

pub fn check_constraints(fp: &FactorizationParams, dc: &DerivedConstants, c: f64, d: f64) -> ConstraintReport {
    let s = fp.omega_bar.sqrt();
    let rho = fp.rho_q;
    let wb = dc.omega_bar;
    let x = x_value(dc, c, d);
    ConstraintReport {
        mu_squared: (dc.a1 - fp.mu * fp.mu).abs(),
        quadratic: (2.0 * (dc.a3 + 2.0 * dc.a4) - rho * (rho + 3.0 * s)).abs(),
        constant: ((dc.a2 - 2.0 * dc.a1) * (c + 1.0) + dc.a5
            - 2.0 * fp.d * (rho + 3.5 * s) * (rho + 0.5 * s))
            .abs(),
        coupling: (c * (-3.0 * dc.a2 * d + 2.0 * dc.a1 + dc.a1 * c + 2.0 * dc.a1 * d) - 12.0 * wb * d * d).abs(),
        cubic: (2.0 * dc.a1 * (1.0 + d) - dc.a2 * d - 4.0 * wb * d.powi(3)).abs(),
        x,
        feasible_4x: 4.0 * x > 43.0 * wb,
        d_root_count: positive_d_roots(dc).len(),
    }
}

/// The first stage of the inverse solve: `d` and `c` from the coupling
/// equations, before `rho` is known.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingSolution {
    pub constants: DerivedConstants,
    pub d: f64,
    pub c: f64,
    pub x: f64,
    pub d_root_count: usize,
    /// Residual of the `c` quadratic at `(c, d)`.
    pub coupling_residual: f64,
    /// Residual of the `d` cubic at `d`.
    pub cubic_residual: f64,
}

impl CouplingSolution {
    pub fn feasible_4x(&self) -> bool {
        4.0 * self.x > 43.0 * self.constants.omega_bar
    }
}

fn positive_d_roots(dc: &DerivedConstants) -> Vec<f64> {
    let [a, b, c, d] = dc.d_cubic();
    cubic_real_roots(a, b, c, d).into_iter().filter(|r| *r > 0.0).collect()
}

/// Solves for `d` (smallest positive root of the cubic) and `c` (negative
/// branch). Does not require `rho` to be feasible.
pub fn solve_couplings(p: &ModelParams) -> Result<CouplingSolution> {
    let dc = derive_constants(p)?;
    let roots = positive_d_roots(&dc);
    let d = *roots.first().ok_or(Error::NoPositiveRoot)?;
    let c = c_negative_branch(&dc, d);
    let wb = dc.omega_bar;
    Ok(CouplingSolution {
        constants: dc,
        d,
        c,
        x: x_value(&dc, c, d),
        d_root_count: roots.len(),
        coupling_residual: (c * (-3.0 * dc.a2 * d + 2.0 * dc.a1 + dc.a1 * c + 2.0 * dc.a1 * d) - 12.0 * wb * d * d)
            .abs(),
        cubic_residual: (2.0 * dc.a1 * (1.0 + d) - dc.a2 * d - 4.0 * wb * d.powi(3)).abs(),
    })
}

pub fn solve_inverse(p: &ModelParams) -> Result<(FactorizationParams, ConstraintReport)> {
    let sol = solve_couplings(p)?;
    let dc = sol.constants;
    if !(sol.c < 0.0 && sol.c.abs() > 1.0) {
        return Err(Error::BranchViolation(sol.c));
    }
    let wb = dc.omega_bar;
    if !sol.feasible_4x() {
        return Err(Error::Infeasible4X { four_x: 4.0 * sol.x, bound: 43.0 * wb });
    }
    let rho = 0.5 * ((4.0 * sol.x - 27.0 * wb).sqrt() - 4.0 * wb.sqrt());
    let fp = solve_forward(wb, rho, sol.d)?.with_c(sol.c);
    let report = check_constraints(&fp, &dc, sol.c, sol.d);
    Ok((fp, report))
}

/// Real roots of `a x^3 + b x^2 + c x + d` in ascending order.
///
/// The real line is split at the critical points into monotone pieces; every
/// piece with a sign change is bisected and the bracket is then polished by
/// Newton steps that are only accepted inside the bracket.
pub fn cubic_real_roots(a: f64, b: f64, c: f64, d: f64) -> Vec<f64> {
    if a == 0.0 {
        return quadratic_real_roots(b, c, d);
    }
    let f = |x: f64| ((a * x + b) * x + c) * x + d;
    let df = |x: f64| (3.0 * a * x + 2.0 * b) * x + c;
    // Cauchy bound on root magnitude
    let bound = 1.0 + [b, c, d].iter().map(|v| (v / a).abs()).fold(0.0, f64::max);
    let mut knots = vec![-bound];
    for r in quadratic_real_roots(3.0 * a, 2.0 * b, c) {
        if r > -bound && r < bound {
            knots.push(r);
        }
    }
    knots.push(bound);

    let mut roots: Vec<f64> = Vec::new();
    for w in knots.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let (flo, fhi) = (f(lo), f(hi));
        let root = if flo == 0.0 {
            Some(lo)
        } else if fhi == 0.0 {
            Some(hi)
        } else if flo.signum() != fhi.signum() {
            Some(bisect_newton(&f, &df, lo, hi))
        } else {
            None
        };
        if let Some(r) = root {
            if roots.last().is_none_or(|last| (r - last).abs() > 1e-14 * r.abs().max(1.0)) {
                roots.push(r);
            }
        }
    }
    roots
}

fn quadratic_real_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a == 0.0 {
        return if b == 0.0 { vec![] } else { vec![-c / b] };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return vec![];
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let mut r = if q == 0.0 { vec![0.0] } else { vec![q / a, c / q] };
    r.sort_by(|x, y| x.total_cmp(y));
    r.dedup();
    r
}

fn bisect_newton(f: &impl Fn(f64) -> f64, df: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo_sign = f(lo).signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || (hi - lo) <= 1e-10 * mid.abs().max(1.0) {
            break;
        }
        if f(mid).signum() == flo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..8 {
        let slope = df(x);
        if slope == 0.0 {
            break;
        }
        let next = x - f(x) / slope;
        if !(next >= lo && next <= hi) || next == x {
            break;
        }
        x = next;
    }
    x
}
