//! Linear ordinary differential operators `sum_i c_i(x) D^i` with jet-valued
//! coefficient functions.
//!
//! Operators are immutable expression trees. Evaluating the coefficients at a
//! point walks the tree once, asking each child for jets of just the order
//! its parent needs (a composition `T S` needs `order(T)` extra derivatives
//! of the coefficients of `S`).

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::{Jet, DEFAULT_JET_ORDER, MAX_JET_ORDER};
use crate::params::{solve_inverse, FactorizationParams, ModelParams};
use crate::potentials::{a_fn, eval_potential, superpotential, w_of_z, Gauge, PotentialForm, PotentialFormId, Side};

/// Largest total operator order a composition may produce.
pub const JET_BUDGET: usize = DEFAULT_JET_ORDER;

type CoeffEval = dyn Fn(f64, usize) -> Result<Jet> + Send + Sync;

/// A coefficient function: `(x, K)` to the jet of order `K` at `x`.
#[derive(Clone)]
pub struct CoeffFn(Arc<CoeffEval>);

impl fmt::Debug for CoeffFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("CoeffFn")
    }
}

impl CoeffFn {
    pub fn new(f: impl Fn(f64, usize) -> Result<Jet> + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    /// Wraps a closed form written on jets; it is evaluated at the
    /// independent variable.
    pub fn from_jet_fn(f: impl Fn(Jet) -> Jet + Send + Sync + 'static) -> Self {
        Self::new(move |x, k| Ok(f(Jet::variable(x, k))))
    }

    pub fn constant(c: f64) -> Self {
        Self::new(move |_, k| Ok(Jet::constant(c, k)))
    }

    pub fn eval(&self, x: f64, order: usize) -> Result<Jet> {
        if order > MAX_JET_ORDER {
            return Err(Error::JetOrderExceeded { requested: order, max: MAX_JET_ORDER });
        }
        let j = (self.0)(x, order)?;
        Ok(j.truncate(order))
    }

    pub fn value(&self, x: f64) -> Result<f64> {
        Ok(self.eval(x, 0)?.value())
    }
}

#[derive(Debug)]
enum Node {
    Leaf(Vec<CoeffFn>),
    Compose(LinDiffOp, LinDiffOp),
    Sum(LinDiffOp, LinDiffOp),
    Scale(f64, LinDiffOp),
    Adjoint(LinDiffOp),
    Conjugate { op: LinDiffOp, dlog: CoeffFn, sign: f64 },
}

/// A linear differential operator of order `order()`.
#[derive(Debug, Clone)]
pub struct LinDiffOp {
    order: usize,
    node: Arc<Node>,
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `k`-th derivative of a jet, returned at order `target`.
fn nth_derivative(j: &Jet, k: usize, target: usize) -> Jet {
    let mut d = *j;
    for _ in 0..k {
        d = d.differentiate();
    }
    d.truncate(target)
}

impl LinDiffOp {
    /// `coeffs[i]` multiplies `D^i`.
    pub fn new(coeffs: Vec<CoeffFn>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter("an operator needs at least one coefficient".into()));
        }
        Ok(Self { order: coeffs.len() - 1, node: Arc::new(Node::Leaf(coeffs)) })
    }

    /// Multiplication by a function.
    pub fn multiply(c: CoeffFn) -> Self {
        Self { order: 0, node: Arc::new(Node::Leaf(vec![c])) }
    }

    pub fn identity() -> Self {
        Self::multiply(CoeffFn::constant(1.0))
    }

    /// `d/dx`.
    pub fn derivative() -> Self {
        Self { order: 1, node: Arc::new(Node::Leaf(vec![CoeffFn::constant(0.0), CoeffFn::constant(1.0)])) }
    }

    /// First-order operator `a D + b`.
    pub fn first_order(a: CoeffFn, b: CoeffFn) -> Self {
        Self { order: 1, node: Arc::new(Node::Leaf(vec![b, a])) }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficient jets `[c_0, ..., c_order]` at `x`, each of order `k`.
    pub fn coeffs_at(&self, x: f64, k: usize) -> Result<Vec<Jet>> {
        if k > MAX_JET_ORDER {
            return Err(Error::JetOrderExceeded { requested: k, max: MAX_JET_ORDER });
        }
        match &*self.node {
            Node::Leaf(cs) => cs.iter().map(|c| c.eval(x, k)).collect(),
            Node::Scale(s, op) => Ok(op.coeffs_at(x, k)?.into_iter().map(|j| j * *s).collect()),
            Node::Sum(a, b) => {
                let (ca, cb) = (a.coeffs_at(x, k)?, b.coeffs_at(x, k)?);
                let zero = Jet::constant(0.0, k);
                Ok((0..=self.order)
                    .map(|i| *ca.get(i).unwrap_or(&zero) + *cb.get(i).unwrap_or(&zero))
                    .collect())
            }
            Node::Compose(t, s) => {
                let ct = t.coeffs_at(x, k)?;
                let cs = s.coeffs_at(x, k + t.order)?;
                let mut out = vec![Jet::constant(0.0, k); self.order + 1];
                for (i, ti) in ct.iter().enumerate() {
                    for (j, sj) in cs.iter().enumerate() {
                        for kk in 0..=i {
                            let m = i - kk + j;
                            out[m] = out[m] + *ti * nth_derivative(sj, kk, k) * binomial(i, kk);
                        }
                    }
                }
                Ok(out)
            }
            Node::Adjoint(op) => {
                // (c D^i)^dag = (-1)^i D^i c = (-1)^i sum_m C(i, m) c^(i-m) D^m
                let n = op.order;
                let c = op.coeffs_at(x, k + n)?;
                let mut out = vec![Jet::constant(0.0, k); n + 1];
                for (i, ci) in c.iter().enumerate() {
                    let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                    for (m, slot) in out.iter_mut().enumerate().take(i + 1) {
                        *slot = *slot + nth_derivative(ci, i - m, k) * (sign * binomial(i, m));
                    }
                }
                Ok(out)
            }
            Node::Conjugate { op, dlog, sign } => {
                // rho^s T rho^-s = sum_i t_i (D - s g)^i with g = (log rho)'
                let n = op.order;
                let t = op.coeffs_at(x, k)?;
                let g = dlog.eval(x, k + n)?;
                let mut out: Vec<Jet> = vec![Jet::constant(0.0, k); n + 1];
                let mut p: Vec<Jet> = vec![Jet::constant(1.0, k + n)];
                out[0] = out[0] + t[0];
                for (i, ti) in t.iter().enumerate().skip(1) {
                    let ord = k + n - i;
                    let gi = g.truncate(ord);
                    let mut next = vec![Jet::constant(0.0, ord); i + 1];
                    for (m, pm) in p.iter().enumerate() {
                        next[m] = next[m] + pm.differentiate() - gi * pm.truncate(ord) * *sign;
                        next[m + 1] = next[m + 1] + pm.truncate(ord);
                    }
                    p = next;
                    for (m, pm) in p.iter().enumerate() {
                        out[m] = out[m] + *ti * pm.truncate(k);
                    }
                }
                Ok(out)
            }
        }
    }

    /// Coefficient values at `x`.
    pub fn values_at(&self, x: f64) -> Result<Vec<f64>> {
        Ok(self.coeffs_at(x, 0)?.iter().map(Jet::value).collect())
    }

    /// `(T f)(x)` for a function given on jets.
    pub fn apply(&self, f: impl Fn(Jet) -> Jet, x: f64) -> Result<f64> {
        let c = self.values_at(x)?;
        let fx = f(Jet::variable(x, self.order));
        Ok(c.iter().enumerate().map(|(i, ci)| ci * fx.derivative(i)).sum())
    }
}

/// `T S`.
pub fn compose(t: &LinDiffOp, s: &LinDiffOp) -> Result<LinDiffOp> {
    let order = t.order + s.order;
    if order > JET_BUDGET {
        return Err(Error::JetOrderExceeded { requested: order, max: JET_BUDGET });
    }
    Ok(LinDiffOp { order, node: Arc::new(Node::Compose(t.clone(), s.clone())) })
}

pub fn add(t: &LinDiffOp, s: &LinDiffOp) -> LinDiffOp {
    LinDiffOp { order: t.order.max(s.order), node: Arc::new(Node::Sum(t.clone(), s.clone())) }
}

pub fn scale(c: f64, t: &LinDiffOp) -> LinDiffOp {
    LinDiffOp { order: t.order, node: Arc::new(Node::Scale(c, t.clone())) }
}

/// Formal adjoint with respect to `dx`.
pub fn formal_adjoint(t: &LinDiffOp) -> LinDiffOp {
    LinDiffOp { order: t.order, node: Arc::new(Node::Adjoint(t.clone())) }
}

/// `rho^sign T rho^-sign` where `dlog_rho = (log rho)'`.
pub fn conjugate(t: &LinDiffOp, dlog_rho: &CoeffFn, sign: f64) -> Result<LinDiffOp> {
    if t.order > 3 {
        return Err(Error::JetOrderExceeded { requested: t.order, max: 3 });
    }
    if sign != 1.0 && sign != -1.0 {
        return Err(Error::InvalidParameter(format!("conjugation sign must be +-1, got {sign}")));
    }
    Ok(LinDiffOp { order: t.order, node: Arc::new(Node::Conjugate { op: t.clone(), dlog: dlog_rho.clone(), sign }) })
}

/// `max |T_i(x) - S_i(x)| / max(1, |T_i(x)|)` over points and coefficients,
/// padding the lower-order operator with zeros.
pub fn residual(t: &LinDiffOp, s: &LinDiffOp, points: &[f64]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &x in points {
        let (ct, cs) = (t.values_at(x)?, s.values_at(x)?);
        for i in 0..ct.len().max(cs.len()) {
            let a = ct.get(i).copied().unwrap_or(0.0);
            let b = cs.get(i).copied().unwrap_or(0.0);
            worst = worst.max((a - b).abs() / a.abs().max(1.0));
        }
    }
    Ok(worst)
}

/// Same as [`residual`] restricted to one coefficient index.
pub fn coefficient_residual(t: &LinDiffOp, s: &LinDiffOp, index: usize, points: &[f64]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &x in points {
        let a = t.values_at(x)?.get(index).copied().unwrap_or(0.0);
        let b = s.values_at(x)?.get(index).copied().unwrap_or(0.0);
        worst = worst.max((a - b).abs() / a.abs().max(1.0));
    }
    Ok(worst)
}

/// `n` deterministic points with `|x|` spread over `[0.3, 5]`, alternating
/// branches when `both_branches` is set, otherwise on `x < 0`.
pub fn sample_points(n: usize, both_branches: bool) -> Vec<f64> {
    (0..n)
        .map(|i| {
            // golden-ratio sequence keeps the points generic
            let u = (0.5 + i as f64 * 0.618_033_988_749_894_9).fract();
            let r = 0.3 + 4.7 * u;
            if both_branches && i % 2 == 1 {
                r
            } else {
                -r
            }
        })
        .collect()
}

/// Points on `z > 0` matching [`sample_points`] through `z = -1/(sqrt(wb) x)`.
pub fn sample_points_z(n: usize, omega_bar: f64) -> Vec<f64> {
    sample_points(n, false).into_iter().map(|x| -1.0 / (omega_bar.sqrt() * x)).collect()
}

// ---------------------------------------------------------------------------
// the hierarchy

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorId {
    /// `sqrt(wb) a D + bt`.
    A,
    ADag,
    /// `a D + b`, the Swanson ladder operator.
    Xi,
    XiDag,
    /// `D_z + w(z)`.
    Atilde,
    /// `-D_z + w(z)`.
    AtildeDag,
    /// `-D_z + w` with the `1/z` coefficient as printed in the closed form
    /// used for the minus-side wavefunctions.
    AtildeDagPrinted,
    /// `w(xi^dag xi + 1/2) + alpha xi^2 + beta xi^dag^2` composed.
    HMinus,
    /// `-wb D a^2 D + b1 D + c1`.
    HMinusExpanded,
    /// `rho^-1 A^dag A rho`.
    HMinusGauge,
    /// `-wb D a^2 D + V-` with the closed-form `V-`.
    HMinusHermitian,
    /// `-wb D a^2 D + V+` with the closed-form `V+`.
    HPlusHermitian,
    /// `-wb D a^2 D + b1 D + b1'/2 - b1^2/(4 wb a^2) + V+`.
    HPlus,
    /// Intertwiner as printed.
    Eta1Explicit,
    /// `rho^-1 A rho` at coefficient level.
    Eta1Constructed,
    /// `rho^-1 A^dag rho`.
    Eta2,
    /// `-D_z^2 + w^2 - w'`.
    HTildeMinus,
    /// `-D_z^2 + w^2 + w'`.
    HTildePlus,
}

impl OperatorId {
    pub fn needs_gauge(self) -> bool {
        use OperatorId::*;
        matches!(self, Xi | XiDag | HMinus | HMinusExpanded | HMinusGauge | HPlus | Eta1Explicit | Eta1Constructed | Eta2)
    }

    /// Operators acting on functions of `z` rather than `x`.
    pub fn in_z(self) -> bool {
        matches!(self, OperatorId::Atilde | OperatorId::AtildeDag | OperatorId::AtildeDagPrinted | OperatorId::HTildeMinus | OperatorId::HTildePlus)
    }
}

/// Factorization parameters together with an optional Swanson gauge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hierarchy {
    pub fp: FactorizationParams,
    pub gauge: Option<Gauge>,
}

/// Couplings of the gauge used with forward-mode parameters.
pub const REFERENCE_GAUGE: (f64, f64, f64) = (0.3, 0.1, -2.0);

impl Hierarchy {
    pub fn forward(fp: FactorizationParams) -> Self {
        Self { fp, gauge: None }
    }

    pub fn with_gauge(fp: FactorizationParams, gauge: Gauge) -> Result<Self> {
        let (g, f) = (gauge.omega_bar(), fp.omega_bar);
        if (g - f).abs() > 1e-12 * f.max(1.0) {
            return Err(Error::InvalidParameter(format!("gauge wb = {g} differs from the factorization wb = {f}")));
        }
        Ok(Self { fp, gauge: Some(gauge) })
    }

    /// Forward-mode parameters with the reference couplings `alpha = 0.3,
    /// beta = 0.1, c = -2` and `w = wb + alpha + beta`.
    pub fn with_reference_gauge(fp: FactorizationParams) -> Result<Self> {
        let (al, be, c) = REFERENCE_GAUGE;
        let model = ModelParams::from_omega_bar(fp.omega_bar, al, be);
        Self::with_gauge(fp, Gauge::new(model, fp.c.unwrap_or(c), fp.d)?)
    }

    /// Solve the inverse problem and attach its gauge.
    pub fn inverse(model: ModelParams) -> Result<Self> {
        let (fp, _) = solve_inverse(&model)?;
        Self::with_gauge(fp, Gauge::from_solution(model, &fp)?)
    }

    pub fn gauge(&self) -> Result<&Gauge> {
        self.gauge.as_ref().ok_or_else(|| Error::Mode("this operator needs the Swanson couplings (inverse mode or a gauge)".into()))
    }

    pub fn dlog_rho(&self) -> Result<CoeffFn> {
        let g = *self.gauge()?;
        Ok(CoeffFn::from_jet_fn(move |x| g.dlog_rho(x)))
    }

    fn kinetic(&self) -> LinDiffOp {
        // -wb D a^2 D = -wb a^2 D^2 - 2 wb a a' D
        let wb = self.fp.omega_bar;
        LinDiffOp {
            order: 2,
            node: Arc::new(Node::Leaf(vec![
                CoeffFn::constant(0.0),
                CoeffFn::from_jet_fn(move |x| x * x * x * (-4.0 * wb)),
                CoeffFn::from_jet_fn(move |x| x * x * x * x * (-wb)),
            ])),
        }
    }

    fn schroedinger(&self, v: CoeffFn) -> LinDiffOp {
        add(&self.kinetic(), &LinDiffOp::multiply(v))
    }

    fn z_hamiltonian(&self, side: Side) -> LinDiffOp {
        let fp = self.fp;
        let v = CoeffFn::new(move |z, k| {
            let w = w_of_z(&fp, Jet::variable(z, k + 1));
            let dw = w.differentiate();
            let w = w.truncate(k);
            Ok(w * w + dw * side.sign())
        });
        LinDiffOp {
            order: 2,
            node: Arc::new(Node::Leaf(vec![v, CoeffFn::constant(0.0), CoeffFn::constant(-1.0)])),
        }
    }

    pub fn build(&self, which: OperatorId) -> Result<LinDiffOp> {
        use OperatorId::*;
        let fp = self.fp;
        let s = fp.sqrt_omega_bar();
        Ok(match which {
            A => LinDiffOp::first_order(
                CoeffFn::from_jet_fn(move |x| a_fn(x) * s),
                CoeffFn::from_jet_fn(move |x| superpotential(&fp, x)),
            ),
            ADag => formal_adjoint(&self.build(A)?),
            Xi => {
                let g = *self.gauge()?;
                LinDiffOp::first_order(CoeffFn::from_jet_fn(a_fn), CoeffFn::from_jet_fn(move |x| g.b(x)))
            }
            XiDag => formal_adjoint(&self.build(Xi)?),
            Atilde => LinDiffOp::first_order(CoeffFn::constant(1.0), CoeffFn::from_jet_fn(move |z| w_of_z(&fp, z))),
            AtildeDag => LinDiffOp::first_order(CoeffFn::constant(-1.0), CoeffFn::from_jet_fn(move |z| w_of_z(&fp, z))),
            AtildeDagPrinted => {
                let (wh, r, dwb) = (fp.omega_hat, fp.rho_q / s, fp.d * fp.omega_bar);
                LinDiffOp::first_order(
                    CoeffFn::constant(-1.0),
                    CoeffFn::from_jet_fn(move |z| z * wh + z.recip() * r + z * (2.0 * dwb) / (z * z * dwb + 1.0)),
                )
            }
            HMinus => {
                let m = self.gauge()?.model;
                let xi = self.build(Xi)?;
                let xd = self.build(XiDag)?;
                let number = add(&compose(&xd, &xi)?, &scale(0.5, &LinDiffOp::identity()));
                add(
                    &add(&scale(m.omega, &number), &scale(m.alpha, &compose(&xi, &xi)?)),
                    &scale(m.beta, &compose(&xd, &xd)?),
                )
            }
            HMinusExpanded => {
                let g = *self.gauge()?;
                let c1 = CoeffFn::from_jet_fn(move |t| g.c1_jet(t));
                let b1 = CoeffFn::from_jet_fn(move |x| g.b1(x));
                add(&self.kinetic(), &LinDiffOp::new(vec![c1, b1])?)
            }
            HMinusGauge => conjugate(&self.build(HMinusHermitian)?, &self.dlog_rho()?, -1.0)?,
            HMinusHermitian => self.schroedinger(CoeffFn::new(move |x, k| {
                Ok(crate::potentials::operator_product_jet(Side::Minus, &fp, x, k))
            })),
            HPlusHermitian => self.schroedinger(CoeffFn::new(move |x, k| {
                Ok(crate::potentials::operator_product_jet(Side::Plus, &fp, x, k))
            })),
            HPlus => {
                let g = *self.gauge()?;
                let wb = g.omega_bar();
                let v = CoeffFn::new(move |x, k| {
                    let t = Jet::variable(x, k + 1);
                    let b1 = g.b1(t);
                    let db1 = b1.differentiate();
                    let b1 = b1.truncate(k);
                    let a = a_fn(t.truncate(k));
                    let vp = crate::potentials::operator_product_jet(Side::Plus, &fp, x, k);
                    Ok(db1 * 0.5 - b1 * b1 / (a * a * (4.0 * wb)) + vp)
                });
                let b1 = CoeffFn::from_jet_fn(move |x| g.b1(x));
                add(&self.kinetic(), &LinDiffOp::new(vec![v, b1])?)
            }
            Eta1Explicit => {
                let m = self.gauge()?.model;
                let c = self.gauge()?.c;
                let (d, rho, mu, wb) = (fp.d, fp.rho_q, fp.mu, fp.omega_bar);
                let k = m.alpha - m.beta;
                let zeroth = CoeffFn::from_jet_fn(move |x| {
                    let x2 = x * x;
                    let num = x2 * x2 * (k - rho * s) + x2 * (k * (d - c - 1.0) - (3.5 * d * wb + 2.0 * rho * d * s))
                        + d * (mu * s - k);
                    num / (x * (x2 + d) * s)
                });
                LinDiffOp::first_order(CoeffFn::from_jet_fn(move |x| a_fn(x) * s), zeroth)
            }
            Eta1Constructed => {
                let g = *self.gauge()?;
                let zeroth = CoeffFn::from_jet_fn(move |x| superpotential(&fp, x) + a_fn(x) * g.dlog_rho(x) * s);
                LinDiffOp::first_order(CoeffFn::from_jet_fn(move |x| a_fn(x) * s), zeroth)
            }
            Eta2 => conjugate(&self.build(ADag)?, &self.dlog_rho()?, -1.0)?,
            HTildeMinus => self.z_hamiltonian(Side::Minus),
            HTildePlus => self.z_hamiltonian(Side::Plus),
        })
    }

    /// `-wb D a^2 D + V` with `V` one of the partner potentials in the `x`
    /// variable, evaluated through [`eval_potential`] (values only).
    pub fn hermitian_with_form(&self, id: PotentialFormId) -> Result<LinDiffOp> {
        if id.is_z_form() {
            return Err(Error::Mode(format!("{} is a z-variable form", id.label())));
        }
        let fp = self.fp;
        let model = self.gauge.map(|g| g.model);
        let v = CoeffFn::new(move |x, k| {
            if k > 0 {
                return Err(Error::JetOrderExceeded { requested: k, max: 0 });
            }
            Ok(Jet::constant(eval_potential(id, x, &fp, model.as_ref())?, 0))
        });
        Ok(self.schroedinger(v))
    }
}

/// Least-squares fit of a constant `delta` so that the zeroth-order
/// coefficient of `rho H- rho^-1` matches `target` at the points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaFit {
    pub delta: f64,
    /// Largest remaining absolute mismatch.
    pub fit_residual: f64,
    /// Set when the regressor `a'` carries no information or the couplings
    /// are Hermitian.
    pub degenerate: bool,
}

pub fn infer_delta_against(gauge: &Gauge, points: &[f64], target: impl Fn(f64) -> Result<f64>) -> Result<DeltaFit> {
    let mut base = *gauge;
    base.model.delta_gauge = 0.0;
    let fp_dummy = crate::params::solve_forward(base.omega_bar(), 1.0, base.d)?;
    let h = Hierarchy { fp: fp_dummy, gauge: Some(base) };
    let conj = conjugate(&h.build(OperatorId::HMinusExpanded)?, &h.dlog_rho()?, 1.0)?;
    let mut rows = Vec::with_capacity(points.len());
    for &x in points {
        let z0 = conj.values_at(x)?[0];
        let ap = 2.0 * x;
        rows.push((ap, z0 - target(x)?));
    }
    // model: z0 - delta a' = target
    let sxx: f64 = rows.iter().map(|(a, _)| a * a).sum();
    let sxy: f64 = rows.iter().map(|(a, r)| a * r).sum();
    let degenerate = sxx <= f64::MIN_POSITIVE || gauge.model.alpha == gauge.model.beta;
    let delta = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let fit_residual = rows.iter().map(|(a, r)| (r - delta * a).abs()).fold(0.0, f64::max);
    Ok(DeltaFit { delta, fit_residual, degenerate })
}

/// Fit `delta` against the expanded general minus-side potential.
pub fn infer_delta(model: &ModelParams, fp: &FactorizationParams, points: &[f64]) -> Result<DeltaFit> {
    let c = fp.c.ok_or_else(|| Error::Mode("delta inference needs inverse-mode parameters".into()))?;
    let gauge = Gauge { model: *model, c, d: fp.d };
    let id = PotentialFormId::new(Side::Minus, PotentialForm::General);
    let fp = *fp;
    let m = *model;
    infer_delta_against(&gauge, points, move |x| eval_potential(id, x, &fp, Some(&m)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::solve_forward;

    fn x_op() -> LinDiffOp {
        LinDiffOp::multiply(CoeffFn::from_jet_fn(|x| x))
    }

    fn pstar() -> Hierarchy {
        Hierarchy::with_reference_gauge(solve_forward(1.0, 1.0, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn leibniz_examples() {
        let d = LinDiffOp::derivative();
        let dx = compose(&d, &x_op()).unwrap();
        for x in [-1.3, 0.7] {
            let v = dx.values_at(x).unwrap();
            assert_eq!(v, vec![1.0, x]);
        }
        let xd = compose(&x_op(), &d).unwrap();
        let xdxd = compose(&xd, &xd).unwrap();
        let v = xdxd.values_at(2.0).unwrap();
        assert_eq!(v, vec![0.0, 2.0, 4.0]);
    }

    #[test]
    fn budget_is_enforced() {
        let d = LinDiffOp::derivative();
        let d2 = compose(&d, &d).unwrap();
        let d4 = compose(&d2, &d2).unwrap();
        assert!(matches!(compose(&d4, &d), Err(Error::JetOrderExceeded { .. })));
    }

    #[test]
    fn adjoint_of_first_order() {
        let h = pstar();
        let a = h.build(OperatorId::A).unwrap();
        let ad = h.build(OperatorId::ADag).unwrap();
        let x = -1.0;
        let v = ad.values_at(x).unwrap();
        // -sqrt(wb) a D + bt - sqrt(wb) a'
        assert!((v[0] - (4.5 + 2.0)).abs() < 1e-14);
        assert!((v[1] + 1.0).abs() < 1e-14);
        assert_eq!(a.values_at(x).unwrap(), vec![4.5, 1.0]);
        let back = formal_adjoint(&ad);
        assert!(residual(&back, &a, &sample_points(20, true)).unwrap() < 1e-13);
    }

    #[test]
    fn kinetic_term_is_self_adjoint() {
        let h = pstar();
        let k = h.kinetic();
        assert!(residual(&formal_adjoint(&k), &k, &sample_points(20, true)).unwrap() < 1e-13);
    }

    #[test]
    fn conjugation_rules() {
        let g = CoeffFn::from_jet_fn(|x| x * x * 0.3 + 1.0);
        let d = LinDiffOp::derivative();
        let c = conjugate(&d, &g, 1.0).unwrap();
        let v = c.values_at(2.0).unwrap();
        assert!((v[0] + 2.2).abs() < 1e-15 && v[1] == 1.0);
        let h = pstar();
        let t = h.build(OperatorId::HPlusHermitian).unwrap();
        let round = conjugate(&conjugate(&t, &g, 1.0).unwrap(), &g, -1.0).unwrap();
        assert!(residual(&round, &t, &sample_points(20, true)).unwrap() < 1e-12);
    }

    #[test]
    fn factorized_potentials_at_reference_point() {
        let h = pstar();
        let hm = h.build(OperatorId::HMinusHermitian).unwrap().values_at(-1.0).unwrap();
        let hp = h.build(OperatorId::HPlusHermitian).unwrap().values_at(-1.0).unwrap();
        assert!((hm[0] - 27.75).abs() < 1e-12);
        assert!((hp[0] - 28.75).abs() < 1e-12);
        assert!((hm[2] + 1.0).abs() < 1e-14 && (hm[1] - 4.0).abs() < 1e-13);
    }

    #[test]
    fn hermitian_limit_keeps_a() {
        let fp = solve_forward(1.0, 1.0, 1.0).unwrap();
        let model = ModelParams { omega: 1.6, alpha: 0.3, beta: 0.3, delta_gauge: 0.0 };
        let h = Hierarchy { fp, gauge: Some(Gauge { model, c: -2.0, d: 1.0 }) };
        let e = h.build(OperatorId::Eta1Constructed).unwrap();
        let a = h.build(OperatorId::A).unwrap();
        assert_eq!(residual(&e, &a, &sample_points(20, true)).unwrap(), 0.0);
    }

    #[test]
    fn forward_mode_rejects_gauge_operators() {
        let h = Hierarchy::forward(solve_forward(1.0, 1.0, 1.0).unwrap());
        assert!(matches!(h.build(OperatorId::HPlus), Err(Error::Mode(_))));
        assert!(h.build(OperatorId::HTildePlus).is_ok());
    }

    #[test]
    fn apply_matches_manual_derivative() {
        let h = pstar();
        let hm = h.build(OperatorId::HMinusHermitian).unwrap();
        let f = |t: Jet| (t * t * -0.25).exp();
        let x = -1.0;
        let got = hm.apply(f, x).unwrap();
        // -wb (a^2 f')' + V- f
        let fj = f(Jet::variable(x, 2));
        let fp_ = fj.derivative(1);
        let fpp = fj.derivative(2);
        let want = -(x.powi(4) * fpp + 4.0 * x.powi(3) * fp_) + 27.75 * fj.value();
        assert!((got - want).abs() < 1e-12 * want.abs().max(1.0));
    }
}
