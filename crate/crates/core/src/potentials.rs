//! Scalar functions of the hierarchy: superpotentials, the metric gauge and
//! every expanded form of the partner potentials.
//!
//! The canonical potentials are the zeroth-order coefficients of the operator
//! products (`V- = bt^2 - sqrt(wb) (a bt)'` and
//! `V+ = bt^2 + sqrt(wb)(a bt' - a' bt) - wb a a''`) and, in the `z` variable,
//! `w^2 -+ dw/dz`. The other forms are evaluated term by term exactly as they
//! are printed and classified by [`PotentialFormId::status`].
//!
//! All closed forms are generic over [`Scalar`], so derivatives come from
//! evaluating them on jets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::{Jet, Scalar};
use crate::numeric::integrate_adaptive;
use crate::params::{DerivedConstants, FactorizationParams, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }
}

/// Which expression of a partner potential to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialForm {
    /// Zeroth-order coefficient of the factorized product.
    OperatorProduct,
    /// Expansion in the generic `a(x), b(x)` (minus, needs the couplings)
    /// or in `a(x), bt(x)` (plus).
    General,
    /// Minus side written with the constants `a1..a5`, `c` and `d`.
    CouplingAnsatz,
    /// First expansion with the rational superpotential ansatz.
    SuperpotentialAnsatz,
    /// Rearranged version of the superpotential expansion.
    Rearranged,
    /// After imposing the solvability restriction on `mu` and `lambda`.
    Reduced,
    /// `z`-variable potentials as printed.
    Transformed,
    /// `w^2 -+ dw/dz` in the `z` variable.
    ZCanonical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormStatus {
    Canonical,
    /// Agrees with the canonical form at matched parameters.
    Validated,
    /// Evaluated as printed; its residual is reported, never used as truth.
    Suspect,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PotentialFormId {
    pub side: Side,
    pub form: PotentialForm,
}

impl PotentialFormId {
    pub const fn new(side: Side, form: PotentialForm) -> Self {
        Self { side, form }
    }

    /// Every `(side, form)` pair that has an expression.
    pub fn all() -> Vec<PotentialFormId> {
        use PotentialForm::*;
        let mut out = Vec::new();
        for form in [OperatorProduct, General, CouplingAnsatz, SuperpotentialAnsatz, Rearranged, Reduced, Transformed, ZCanonical] {
            for side in [Side::Minus, Side::Plus] {
                let id = PotentialFormId::new(side, form);
                if id.exists() {
                    out.push(id);
                }
            }
        }
        out
    }

    pub fn exists(&self) -> bool {
        !(self.form == PotentialForm::CouplingAnsatz && self.side == Side::Plus)
    }

    pub fn is_z_form(&self) -> bool {
        matches!(self.form, PotentialForm::Transformed | PotentialForm::ZCanonical)
    }

    pub fn status(&self) -> FormStatus {
        use PotentialForm::*;
        match (self.form, self.side) {
            (OperatorProduct | ZCanonical, _) => FormStatus::Canonical,
            (SuperpotentialAnsatz | Rearranged, Side::Minus) => FormStatus::Validated,
            (Reduced, _) => FormStatus::Validated,
            (Transformed, Side::Plus) => FormStatus::Validated,
            _ => FormStatus::Suspect,
        }
    }

    pub fn label(&self) -> String {
        let side = match self.side {
            Side::Plus => "plus",
            Side::Minus => "minus",
        };
        let form = match self.form {
            PotentialForm::OperatorProduct => "operator_product",
            PotentialForm::General => "general",
            PotentialForm::CouplingAnsatz => "coupling_ansatz",
            PotentialForm::SuperpotentialAnsatz => "superpotential_ansatz",
            PotentialForm::Rearranged => "rearranged",
            PotentialForm::Reduced => "reduced",
            PotentialForm::Transformed => "transformed",
            PotentialForm::ZCanonical => "z_canonical",
        };
        format!("{side}/{form}")
    }
}

// ---------------------------------------------------------------------------
// closed forms

/// `a(x) = x^2`.
pub fn a_fn<T: Scalar>(x: T) -> T {
    x * x
}

/// `bt(x) = mu/x - rho x + lambda x/(x^2 + d)`.
pub fn superpotential<T: Scalar>(fp: &FactorizationParams, x: T) -> T {
    x.recip() * fp.mu - x * fp.rho_q + x * fp.lambda / (x * x + fp.d)
}

/// Superpotential of the `z`-gauge operators, `w = bt - sqrt(wb) a'/2`, as a
/// function of `x`.
pub fn w_of_x<T: Scalar>(fp: &FactorizationParams, x: T) -> T {
    superpotential(fp, x) - x * fp.sqrt_omega_bar()
}

/// `z = -1/(sqrt(wb) x)`; the map is its own inverse.
pub fn coord_map<T: Scalar>(v: T, omega_bar: f64) -> T {
    -(v * omega_bar.sqrt()).recip()
}

pub fn coord_z(x: f64, omega_bar: f64) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::Domain("z is undefined at x = 0".into()));
    }
    Ok(coord_map(x, omega_bar))
}

pub fn coord_x(z: f64, omega_bar: f64) -> Result<f64> {
    if z == 0.0 {
        return Err(Error::Domain("x is undefined at z = 0".into()));
    }
    Ok(coord_map(z, omega_bar))
}

/// `w` as a function of `z`.
pub fn w_of_z<T: Scalar>(fp: &FactorizationParams, z: T) -> T {
    w_of_x(fp, coord_map(z, fp.omega_bar))
}

fn v_minus_product(fp: &FactorizationParams, x: f64, order: usize) -> Jet {
    let t = Jet::variable(x, order + 1);
    let bt = superpotential(fp, t);
    let abt = (a_fn(t) * bt).differentiate();
    let bt = bt.truncate(order);
    bt * bt - abt * fp.sqrt_omega_bar()
}

fn v_plus_product(fp: &FactorizationParams, x: f64, order: usize) -> Jet {
    let t = Jet::variable(x, order + 2);
    let s = fp.sqrt_omega_bar();
    let bt = superpotential(fp, t);
    let a = a_fn(t);
    let bt1 = bt.differentiate().truncate(order);
    let a1 = a.differentiate().truncate(order);
    let a2 = a.differentiate().differentiate();
    let (bt, a) = (bt.truncate(order), a.truncate(order));
    bt * bt + (a * bt1 - a1 * bt) * s - a * a2 * fp.omega_bar
}

/// Canonical `V-` or `V+` at `x` as a jet of the given order.
pub fn operator_product_jet(side: Side, fp: &FactorizationParams, x: f64, order: usize) -> Jet {
    match side {
        Side::Minus => v_minus_product(fp, x, order),
        Side::Plus => v_plus_product(fp, x, order),
    }
}

/// Canonical `z`-gauge potential `w^2 -+ dw/dz` as a jet in `z`.
pub fn z_canonical_jet(side: Side, fp: &FactorizationParams, z: f64, order: usize) -> Jet {
    let w = w_of_z(fp, Jet::variable(z, order + 1));
    let dw = w.differentiate();
    let w = w.truncate(order);
    w * w + dw * side.sign()
}

// ---------------------------------------------------------------------------
// the non-Hermitian gauge

/// The Swanson couplings together with the ansatz `b(x) = 1/x + c x/(x^2+d)`.
/// Everything that depends on the metric `rho` lives here.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gauge {
    pub model: ModelParams,
    pub c: f64,
    pub d: f64,
}

impl Gauge {
    pub fn new(model: ModelParams, c: f64, d: f64) -> Result<Self> {
        model.validate()?;
        if !(d > 0.0) {
            return Err(Error::InvalidParameter(format!("d = {d} must be positive")));
        }
        Ok(Self { model, c, d })
    }

    /// Gauge of an inverse-mode solution (`fp.c` must be present).
    pub fn from_solution(model: ModelParams, fp: &FactorizationParams) -> Result<Self> {
        let c = fp.c.ok_or_else(|| Error::Mode("factorization parameters carry no c".into()))?;
        Self::new(model, c, fp.d)
    }

    pub fn omega_bar(&self) -> f64 {
        self.model.omega_bar()
    }

    pub fn b<T: Scalar>(&self, x: T) -> T {
        x.recip() + x * self.c / (x * x + self.d)
    }

    /// First-order coefficient of the expanded Hamiltonian, `(alpha-beta) a (2b - a')`.
    pub fn b1<T: Scalar>(&self, x: T) -> T {
        let (al, be) = (self.model.alpha, self.model.beta);
        a_fn(x) * (self.b(x) * 2.0 - x * 2.0) * (al - be)
    }

    /// `(log rho)' = -b1/(2 wb a^2)`.
    pub fn dlog_rho<T: Scalar>(&self, x: T) -> T {
        let a = a_fn(x);
        -self.b1(x) / (a * a * (2.0 * self.omega_bar()))
    }

    /// Zeroth-order coefficient of the expanded Hamiltonian, including the
    /// `-delta a'` term.
    pub fn c1(&self, x: f64) -> f64 {
        self.c1_jet(Jet::variable(x, 0)).value()
    }

    /// [`Gauge::c1`] as a jet of the same order as `t` (a variable jet).
    pub fn c1_jet(&self, t: Jet) -> Jet {
        let m = &self.model;
        let (w, al, be) = (m.omega, m.alpha, m.beta);
        let k = t.order();
        let tt = Jet::variable(t.value(), k + 2);
        let b = self.b(tt);
        let a = a_fn(tt);
        let bp = b.differentiate().truncate(k);
        let ap = a.differentiate();
        let app = ap.differentiate().truncate(k);
        let ap = ap.truncate(k);
        let (b, a) = (b.truncate(k), a.truncate(k));
        b * b * (w + al + be) - ap * b * (w + 2.0 * be) - a * bp * (w - al + be) + (a * app + ap * ap) * be
            - ap * m.delta_gauge
            + w / 2.0
    }

    /// `log rho(x)` relative to the reference point `-1` (negative branch)
    /// or `+1` (positive branch), by adaptive quadrature of `(log rho)'`.
    pub fn log_rho(&self, x: f64) -> Result<f64> {
        if x == 0.0 {
            return Err(Error::Domain("log rho is undefined at x = 0".into()));
        }
        let x0 = x.signum();
        integrate_adaptive(&|y: f64| self.dlog_rho(y), x0, x, 1e-13)
    }
}

/// Every scalar function of the hierarchy at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointFunctions {
    pub x: f64,
    pub a: f64,
    pub a_prime: f64,
    pub b: Option<f64>,
    pub b_tilde: f64,
    pub b1: Option<f64>,
    pub c1: Option<f64>,
    pub w: f64,
    pub log_rho: Option<f64>,
}

pub fn point_functions(x: f64, fp: &FactorizationParams, mp: Option<&ModelParams>) -> Result<PointFunctions> {
    if x == 0.0 {
        return Err(Error::Domain("point functions are singular at x = 0".into()));
    }
    if x * x + fp.d <= 0.0 {
        return Err(Error::Domain(format!("x^2 + d vanishes at x = {x}")));
    }
    let gauge = match (mp, fp.c) {
        (Some(m), Some(c)) => Some(Gauge::new(*m, c, fp.d)?),
        _ => None,
    };
    Ok(PointFunctions {
        x,
        a: x * x,
        a_prime: 2.0 * x,
        b: gauge.map(|g| g.b(x)),
        b_tilde: superpotential(fp, x),
        b1: gauge.map(|g| g.b1(x)),
        c1: gauge.map(|g| g.c1(x)),
        w: w_of_x(fp, x),
        log_rho: gauge.map(|g| g.log_rho(x)).transpose()?,
    })
}

/// `b(x) = a'(x)/2 + (1/2) int_{x0}^{x} dy / a(y)` for a unit commutator.
pub fn unit_commutator_b(x: f64, a: impl Fn(Jet) -> Jet, x0: f64) -> Result<f64> {
    let av = |y: f64| a(Jet::constant(y, 0)).value();
    // a sign change or a zero along the path makes the integral diverge
    let (lo, hi) = if x0 < x { (x0, x) } else { (x, x0) };
    let samples = 1024;
    let mut prev = av(lo);
    for i in 0..=samples {
        let y = lo + (hi - lo) * i as f64 / samples as f64;
        let v = av(y);
        if v == 0.0 || !v.is_finite() || v.signum() != prev.signum() {
            return Err(Error::SingularIntegrand(format!("a(y) vanishes between {x0} and {x}")));
        }
        prev = v;
    }
    let integral = integrate_adaptive(&|y: f64| 1.0 / av(y), x0, x, 1e-13)?;
    let slope = a(Jet::variable(x, 1)).derivative(1);
    Ok(0.5 * slope + 0.5 * integral)
}

// ---------------------------------------------------------------------------
// printed forms

fn general_minus(g: &Gauge, x: f64) -> Result<f64> {
    let dc: DerivedConstants = crate::params::derive_constants(&g.model)?;
    let t = Jet::variable(x, 2);
    let b = g.b(t);
    let a = a_fn(t);
    let (bv, bp) = (b.value(), b.derivative(1));
    let (av, ap, app) = (a.value(), a.derivative(1), a.derivative(2));
    Ok(dc.a1 * bv * (bv - ap) - dc.a2 * av * bp + dc.a3 * av * app + dc.a4 * ap * ap + dc.a5)
}

fn general_plus(fp: &FactorizationParams, x: f64) -> f64 {
    let s = fp.sqrt_omega_bar();
    let t = Jet::variable(x, 2);
    let bt = superpotential(fp, t);
    let a = a_fn(t);
    let (btv, btpp) = (bt.value(), bt.derivative(2));
    let (av, app) = (a.value(), a.derivative(2));
    btv * btv + s * (-s * av * app + av * btpp - btv * app)
}

fn coupling_ansatz(g: &Gauge, x: f64) -> Result<f64> {
    let dc = crate::params::derive_constants(&g.model)?;
    let (c, d) = (g.c, g.d);
    let x2 = x * x;
    let (a1, a2, a3, a4, a5) = (dc.a1, dc.a2, dc.a3, dc.a4, dc.a5);
    Ok(a1 / x2 + 2.0 * (a3 + 2.0 * a4) * x2 + (-2.0 * a1 + a2) * (c + 1.0) + a5
        + c * ((2.0 * a1 + a1 * c + 2.0 * a1 * d - 3.0 * a2 * d) * x2 + 2.0 * a1 * (1.0 + d) - a2 * d)
            / (x2 + d).powi(2))
}

fn superpotential_ansatz(side: Side, fp: &FactorizationParams, x: f64) -> f64 {
    let (mu, rho, lam, d, wb) = (fp.mu, fp.rho_q, fp.lambda, fp.d, fp.omega_bar);
    let s = wb.sqrt();
    let x2 = x * x;
    let den = (x2 + d).powi(2);
    match side {
        Side::Minus => {
            mu * mu / x2 + rho * (rho + 3.0 * s) * x2 - mu * (2.0 * rho + s)
                + lam * (-(2.0 * rho + s) * x2 * x2 + (-3.0 * d * s + lam + 2.0 * mu - 2.0 * d * rho) * x2 + 2.0 * d * mu)
                    / den
        }
        Side::Plus => {
            mu * mu / x2 + (rho * rho + rho * s - 2.0 * wb) * x2 - mu * (2.0 * rho + 3.0 * s)
                + lam
                    * (-(2.0 * rho + 3.0 * s) * x2 * x2
                        + (lam + 2.0 * mu - 2.0 * d * rho - d * s + 2.0 * d * mu) * x2
                        + 2.0 * d * mu)
                    / den
        }
    }
}

fn rearranged(side: Side, fp: &FactorizationParams, x: f64) -> f64 {
    let (mu, rho, lam, d, wb) = (fp.mu, fp.rho_q, fp.lambda, fp.d, fp.omega_bar);
    let s = wb.sqrt();
    let x2 = x * x;
    let den = (x2 + d).powi(2);
    match side {
        Side::Minus => {
            mu * mu / x2 + rho * (rho + 3.0 * s) * x2 - (mu + lam) * (s + 2.0 * rho)
                + lam
                    * ((2.0 * rho * d + 2.0 * mu + lam - d * s) * x2 + d * (2.0 * mu + d * s + 2.0 * rho * d))
                    / den
        }
        Side::Plus => {
            mu * mu / x2 + rho * (rho + s - 2.0 * wb) * x2 - (mu + lam) * (3.0 * s + 2.0 * rho)
                + lam
                    * ((2.0 * rho * d + 2.0 * mu + lam + 5.0 * d * s) * x2
                        + d * (2.0 * mu + 3.0 * d * s + 2.0 * rho * d))
                    / den
        }
    }
}

fn reduced(side: Side, fp: &FactorizationParams, x: f64) -> f64 {
    let (mu, rho, d, wb) = (fp.mu, fp.rho_q, fp.d, fp.omega_bar);
    let s = wb.sqrt();
    let x2 = x * x;
    match side {
        Side::Plus => mu * mu / x2 + (rho * rho + rho * s - 2.0 * wb) * x2 + 2.0 * d * (rho + 3.5 * s) * (rho + 1.5 * s),
        Side::Minus => {
            mu * mu / x2 + rho * (rho + 3.0 * s) * x2 + 2.0 * d * (rho + 3.5 * s) * (rho + 0.5 * s)
                + 4.0 * wb * d * d * (3.0 * x2 + d) / (x2 + d).powi(2)
        }
    }
}

fn transformed(side: Side, fp: &FactorizationParams, z: f64) -> f64 {
    let (mu, rho, d, wb) = (fp.mu, fp.rho_q, fp.d, fp.omega_bar);
    let s = wb.sqrt();
    let z2 = z * z;
    match side {
        Side::Plus => mu * mu * wb * z2 + (rho * rho + s * rho) / wb / z2 + 2.0 * d * (rho + 3.5 * s) * (rho + 1.5 * s),
        Side::Minus => {
            let sz = d * wb * z2;
            mu * mu * wb * z2
                + (rho * rho + 3.0 * s * rho + 2.0 * wb) / wb / z2
                + 2.0 * d * (rho + 3.5 * s) * (rho + 0.5 * s)
                + 4.0 * wb * d
                + 4.0 * wb * d * (2.0 * sz - 1.0) / (sz + 1.0).powi(2)
        }
    }
}

fn check_x(x: f64, fp: &FactorizationParams) -> Result<()> {
    if x == 0.0 || !x.is_finite() {
        return Err(Error::Domain(format!("potentials are singular at x = {x}")));
    }
    if x * x + fp.d <= 0.0 {
        return Err(Error::Domain(format!("x^2 + d vanishes at x = {x}")));
    }
    Ok(())
}

fn gauge_for(mp: Option<&ModelParams>, fp: &FactorizationParams, what: &str) -> Result<Gauge> {
    let mp = mp.ok_or_else(|| Error::Mode(format!("{what} needs the Swanson couplings")))?;
    Gauge::from_solution(*mp, fp)
}

/// A partner potential in the `x` variable.
pub fn eval_potential(id: PotentialFormId, x: f64, fp: &FactorizationParams, mp: Option<&ModelParams>) -> Result<f64> {
    check_x(x, fp)?;
    use PotentialForm::*;
    match (id.form, id.side) {
        (OperatorProduct, side) => Ok(operator_product_jet(side, fp, x, 0).value()),
        (General, Side::Minus) => general_minus(&gauge_for(mp, fp, "the general expansion")?, x),
        (General, Side::Plus) => Ok(general_plus(fp, x)),
        (CouplingAnsatz, Side::Minus) => coupling_ansatz(&gauge_for(mp, fp, "the coupling ansatz")?, x),
        (CouplingAnsatz, Side::Plus) => Err(Error::Mode("the coupling ansatz has no plus-side form".into())),
        (SuperpotentialAnsatz, side) => Ok(superpotential_ansatz(side, fp, x)),
        (Rearranged, side) => Ok(rearranged(side, fp, x)),
        (Reduced, side) => Ok(reduced(side, fp, x)),
        (Transformed | ZCanonical, _) => Err(Error::Mode(format!("{} is a z-variable form", id.label()))),
    }
}

/// A transformed partner potential in the `z` variable.
pub fn eval_potential_z(side: Side, form: PotentialForm, z: f64, fp: &FactorizationParams) -> Result<f64> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::Domain(format!("z-potentials live on z > 0, got z = {z}")));
    }
    if fp.d * fp.omega_bar * z * z + 1.0 <= 0.0 {
        return Err(Error::Domain(format!("d wb z^2 + 1 vanishes at z = {z}")));
    }
    match form {
        PotentialForm::ZCanonical => Ok(z_canonical_jet(side, fp, z, 0).value()),
        PotentialForm::Transformed => Ok(transformed(side, fp, z)),
        other => Err(Error::Mode(format!("{other:?} is an x-variable form"))),
    }
}

/// `(wb/4) a'^2 + (wb/2) a a''` at `x`: the shift picked up by the
/// similarity transform with `sqrt(a)` and the change of variable.
pub fn transform_shift(x: f64, omega_bar: f64) -> f64 {
    let a = a_fn(Jet::variable(x, 2));
    omega_bar / 4.0 * a.derivative(1).powi(2) + omega_bar / 2.0 * a.value() * a.derivative(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::solve_forward;

    fn pstar() -> FactorizationParams {
        solve_forward(1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn superpotential_reference_point() {
        let fp = pstar();
        assert!((superpotential(&fp, -1.0) - 4.5).abs() < 1e-15);
        assert!((w_of_x(&fp, -1.0) - 5.5).abs() < 1e-15);
        let pf = point_functions(-1.0, &fp, None).unwrap();
        assert_eq!((pf.a, pf.a_prime), (1.0, -2.0));
        assert!(pf.b.is_none() && pf.log_rho.is_none());
    }

    #[test]
    fn hermitian_limit_has_flat_metric() {
        let fp = solve_forward(1.0, 1.0, 1.0).unwrap().with_c(-2.0);
        let mp = ModelParams::from_omega_bar(1.0, 0.3, 0.3);
        let g = Gauge { model: mp, c: -2.0, d: 1.0 };
        for x in [-2.0, -0.7, 0.4, 3.0] {
            assert_eq!(g.b1(x), 0.0);
            assert_eq!(g.log_rho(x).unwrap(), 0.0);
        }
        // point_functions validates the model, which rejects alpha = beta
        assert!(point_functions(-1.0, &fp, Some(&mp)).is_err());
    }

    #[test]
    fn log_rho_matches_closed_form_antiderivative() {
        let g = Gauge::new(ModelParams::new(2.0, 0.5, 0.1), -3.0, 1.2).unwrap();
        // b1/a^2 = (al-be)(2/x^3 + 2c/(x (x^2+d)) - 2/x), antiderivative:
        // (al-be)(-1/x^2 + (c/d) ln(x^2/(x^2+d)) - 2 ln|x|)
        let (c, d, k) = (-3.0f64, 1.2f64, 0.4f64);
        let anti = |x: f64| k * (-1.0 / (x * x) + c / d * (x * x / (x * x + d)).ln() - 2.0 * x.abs().ln());
        let wb = 1.4;
        for x in [-3.0, -1.5, -0.6] {
            let want = -(anti(x) - anti(-1.0)) / (2.0 * wb);
            assert!((g.log_rho(x).unwrap() - want).abs() < 1e-11, "x = {x}");
        }
    }

    #[test]
    fn unit_commutator_cases() {
        let b = unit_commutator_b(0.7, |t| t.lift(1.0), 0.0).unwrap();
        assert!((b - 0.35).abs() < 1e-14);
        let b = unit_commutator_b(2.0, |t| t * t, 1.0).unwrap();
        assert!((b - 2.25).abs() < 1e-13);
        assert!(unit_commutator_b(1.0, |t| t * t, -1.0).is_err());
    }

    #[test]
    fn coordinate_map_cases() {
        assert_eq!(coord_z(-1.0, 1.0).unwrap(), 1.0);
        assert_eq!(coord_z(-0.5, 4.0).unwrap(), 1.0);
        assert!(coord_z(0.0, 1.0).is_err());
        assert!(coord_x(0.0, 1.0).is_err());
        for x in [-3.7, -0.2, 0.9, 11.0] {
            let back = coord_x(coord_z(x, 2.3).unwrap(), 2.3).unwrap();
            assert!((back - x).abs() < 1e-14 * x.abs());
        }
    }

    #[test]
    fn reference_potential_values() {
        let fp = pstar();
        let v = |side, form| eval_potential(PotentialFormId::new(side, form), -1.0, &fp, None).unwrap();
        assert!((v(Side::Minus, PotentialForm::OperatorProduct) - 27.75).abs() < 1e-13);
        assert!((v(Side::Minus, PotentialForm::SuperpotentialAnsatz) - 27.75).abs() < 1e-13);
        assert!((v(Side::Minus, PotentialForm::Reduced) - 27.75).abs() < 1e-13);
        assert!((v(Side::Plus, PotentialForm::Reduced) - 28.75).abs() < 1e-13);
        assert!((v(Side::Plus, PotentialForm::OperatorProduct) - 28.75).abs() < 1e-13);
    }

    #[test]
    fn reference_z_values() {
        let fp = pstar();
        let vz = |side, form, z| eval_potential_z(side, form, z, &fp).unwrap();
        assert!((vz(Side::Plus, PotentialForm::ZCanonical, 1.0) - 30.75).abs() < 1e-13);
        assert!((vz(Side::Plus, PotentialForm::Transformed, 2.0) - 48.0).abs() < 1e-13);
        assert!((vz(Side::Plus, PotentialForm::ZCanonical, 2.0) - 48.0).abs() < 1e-12);
        assert!((vz(Side::Minus, PotentialForm::Transformed, 1.0) - 30.75).abs() < 1e-13);
        assert!((vz(Side::Minus, PotentialForm::ZCanonical, 1.0) - 29.75).abs() < 1e-13);
    }

    #[test]
    fn form_modes_are_enforced() {
        let fp = pstar();
        let id = PotentialFormId::new(Side::Minus, PotentialForm::General);
        assert!(matches!(eval_potential(id, -1.0, &fp, None), Err(Error::Mode(_))));
        let id = PotentialFormId::new(Side::Plus, PotentialForm::CouplingAnsatz);
        assert!(eval_potential(id, -1.0, &fp, None).is_err());
        let id = PotentialFormId::new(Side::Plus, PotentialForm::ZCanonical);
        assert!(eval_potential(id, -1.0, &fp, None).is_err());
        assert!(eval_potential_z(Side::Plus, PotentialForm::Reduced, 1.0, &fp).is_err());
        let id = PotentialFormId::new(Side::Plus, PotentialForm::OperatorProduct);
        assert!(matches!(eval_potential(id, 0.0, &fp, None), Err(Error::Domain(_))));
        assert!(eval_potential_z(Side::Plus, PotentialForm::ZCanonical, 0.0, &fp).is_err());
    }

    #[test]
    fn every_pair_is_listed_once() {
        let all = PotentialFormId::all();
        assert_eq!(all.len(), 15);
        let mut labels: Vec<String> = all.iter().map(|i| i.label()).collect();
        labels.sort();
        labels.dedup();
        assert_eq!(labels.len(), 15);
    }
}
