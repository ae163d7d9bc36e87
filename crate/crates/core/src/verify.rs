//! Residual report for every identity of the hierarchy.
//!
//! Entries with a tolerance are PASS or FAIL. Printed forms known to
//! disagree with their canonical counterparts go to the errata section with
//! status REPORTED and never fail a run.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::diffop::{
    coefficient_residual, compose, conjugate, infer_delta, residual, sample_points, sample_points_z, DeltaFit, Hierarchy,
    OperatorId,
};
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::numeric::quad_halfline;
use crate::params::{derive_constants, solve_couplings, ConstraintReport, FactorizationParams, ModelParams};
use crate::potentials::{
    coord_x, eval_potential, eval_potential_z, transform_shift, w_of_z, Gauge, PotentialForm,
    PotentialFormId, Side,
};
use crate::specialfn::{factorial, gamma_fn, gauss2f1_unit, kummer, laguerre, laguerre_generic, pochhammer};
use crate::spectrum::{
    energy_plus, eigen_residual, j_integral, phi_minus_jet, phi_plus, phi_plus_jet, psi_plus, JMethod, PhiMinusMethod,
};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Reported,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub id: String,
    pub description: String,
    pub residual: f64,
    pub tolerance: Option<f64>,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub crate_version: String,
    pub arch: String,
    pub os: String,
    pub float_format: String,
}

impl Environment {
    pub fn current() -> Self {
        Self {
            crate_version: env!("CARGO_PKG_VERSION").to_string(),
            arch: std::env::consts::ARCH.to_string(),
            os: std::env::consts::OS.to_string(),
            float_format: "ieee754-binary64".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub mode: String,
    pub factorization: FactorizationParams,
    pub model: Option<ModelParams>,
    /// Couplings used for the non-Hermitian identities.
    pub gauge: Gauge,
    pub n_max: usize,
    pub entries: Vec<ReportEntry>,
    pub errata: Vec<ReportEntry>,
    pub constraints: Option<ConstraintReport>,
    pub delta_fit: Option<DeltaFit>,
    pub environment: Environment,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.status != Status::Fail)
    }

    pub fn failures(&self) -> Vec<&ReportEntry> {
        self.entries.iter().filter(|e| e.status == Status::Fail).collect()
    }

    pub fn entry(&self, id: &str) -> Option<&ReportEntry> {
        self.entries.iter().chain(&self.errata).find(|e| e.id == id)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifySettings {
    pub n_max: usize,
    pub sample_points: usize,
    /// Overrides keyed by entry id; the key `all` applies to every entry.
    pub tolerances: BTreeMap<String, f64>,
}

impl Default for VerifySettings {
    fn default() -> Self {
        Self { n_max: 5, sample_points: 20, tolerances: BTreeMap::new() }
    }
}

/// Ids and default tolerances of the PASS-class entries.
pub const DEFAULT_TOLERANCES: &[(&str, f64)] = &[
    ("factorization_minus", 1e-10),
    ("factorization_plus", 1e-10),
    ("intertwining_hermitian_minus", 1e-9),
    ("intertwining_hermitian_plus", 1e-9),
    ("intertwining_non_hermitian", 1e-9),
    ("plus_hamiltonian_gauge_form", 1e-9),
    ("swanson_expansion", 1e-10),
    ("gauge_first_order_cancellation", 1e-10),
    ("z_factorization_minus", 1e-10),
    ("z_factorization_plus", 1e-10),
    ("z_partner_difference", 1e-12),
    ("transform_shift_minus", 1e-10),
    ("transform_shift_plus", 1e-10),
    ("parity_minus", 1e-10),
    ("parity_plus", 1e-10),
    ("validated_form:minus/superpotential_ansatz", 1e-10),
    ("validated_form:minus/rearranged", 1e-10),
    ("validated_form:minus/reduced", 1e-10),
    ("validated_form:plus/reduced", 1e-10),
    ("validated_form:plus/transformed", 1e-10),
    ("transformed_minus_offset_profile", 1e-9),
    ("laguerre_kummer", 1e-10),
    ("laguerre_derivative", 1e-10),
    ("laguerre_contiguity", 1e-10),
    ("pochhammer_truncation", 1e-12),
    ("chu_vandermonde", 1e-12),
    ("eigen_residual_plus", 1e-8),
    ("eigen_residual_minus", 1e-8),
    ("minus_closed_vs_operator", 1e-9),
    ("ladder_reconstruction", 1e-8),
    ("normalization_plus", 1e-8),
    ("normalization_minus", 1e-8),
    ("j_ground_state", 1e-8),
    ("j_diagonal_laguerre", 1e-8),
    ("psi_ground_norm", 1e-8),
    ("coupling_back_substitution", 1e-9),
    ("cubic_back_substitution", 1e-9),
];

pub fn is_known_tolerance(name: &str) -> bool {
    name == "all" || DEFAULT_TOLERANCES.iter().any(|(id, _)| *id == name)
}

struct Builder<'a> {
    settings: &'a VerifySettings,
    entries: Vec<ReportEntry>,
    errata: Vec<ReportEntry>,
}

impl Builder<'_> {
    fn tolerance(&self, id: &str) -> f64 {
        if let Some(t) = self.settings.tolerances.get(id) {
            return *t;
        }
        if let Some(t) = self.settings.tolerances.get("all") {
            return *t;
        }
        DEFAULT_TOLERANCES.iter().find(|(k, _)| *k == id).map(|(_, t)| *t).unwrap_or(1e-9)
    }

    fn check(&mut self, id: &str, description: &str, residual: Result<f64>) {
        let tol = self.tolerance(id);
        let (residual, status) = match residual {
            Ok(r) if r <= tol => (r, Status::Pass),
            Ok(r) => (r, Status::Fail),
            Err(_) => (f64::NAN, Status::Fail),
        };
        self.entries.push(ReportEntry { id: id.into(), description: description.into(), residual, tolerance: Some(tol), status });
    }

    fn report(&mut self, id: &str, description: &str, residual: Result<f64>) {
        let residual = residual.unwrap_or(f64::NAN);
        self.errata.push(ReportEntry { id: id.into(), description: description.into(), residual, tolerance: None, status: Status::Reported });
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(1.0)
}

fn max_over(points: &[f64], f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let mut worst = 0.0f64;
    for &p in points {
        worst = worst.max(f(p)?);
    }
    Ok(worst)
}

/// Largest relative mismatch between two potential forms on the points.
fn form_residual(a: PotentialFormId, b: PotentialFormId, xs: &[f64], fp: &FactorizationParams, m: Option<&ModelParams>) -> Result<f64> {
    max_over(xs, |x| Ok(rel(eval_potential(b, x, fp, m)?, eval_potential(a, x, fp, m)?)))
}

fn z_form_residual(side: Side, zs: &[f64], fp: &FactorizationParams) -> Result<f64> {
    max_over(zs, |z| {
        Ok(rel(
            eval_potential_z(side, PotentialForm::ZCanonical, z, fp)?,
            eval_potential_z(side, PotentialForm::Transformed, z, fp)?,
        ))
    })
}

/// `4 d^2 wb^2 z^2 / (1 + d wb z^2)^2`.
pub fn transformed_minus_offset(fp: &FactorizationParams, z: f64) -> f64 {
    let s = fp.d * fp.omega_bar;
    4.0 * s * s * z * z / (1.0 + s * z * z).powi(2)
}

/// Verify forward-mode parameters with the reference gauge.
pub fn verify_forward(fp: &FactorizationParams, settings: &VerifySettings) -> Result<VerificationReport> {
    let h = Hierarchy::with_reference_gauge(*fp)?;
    run(&h, None, settings)
}

/// Solve the inverse problem and verify it, including the constraint block
/// and the fitted `delta`.
pub fn verify_inverse(model: &ModelParams, settings: &VerifySettings) -> Result<VerificationReport> {
    let h = Hierarchy::inverse(*model)?;
    run(&h, Some(*model), settings)
}

fn run(h: &Hierarchy, inverse: Option<ModelParams>, settings: &VerifySettings) -> Result<VerificationReport> {
    let fp = h.fp;
    let gauge = *h.gauge()?;
    let n = settings.sample_points.max(2);
    let xs = sample_points(n, false);
    let xs_both = sample_points(n, true);
    let zs = sample_points_z(n, fp.omega_bar);
    let mut b = Builder { settings, entries: Vec::new(), errata: Vec::new() };
    let op = |id| h.build(id);

    // factorization and intertwining
    let a = op(OperatorId::A)?;
    let ad = op(OperatorId::ADag)?;
    let hm = op(OperatorId::HMinusHermitian)?;
    let hp = op(OperatorId::HPlusHermitian)?;
    b.check("factorization_minus", "h- = A^dag A", residual(&hm, &compose(&ad, &a)?, &xs_both));
    b.check("factorization_plus", "h+ = A A^dag", residual(&hp, &compose(&a, &ad)?, &xs_both));
    b.check(
        "intertwining_hermitian_minus",
        "h- A^dag = A^dag h+",
        residual(&compose(&hm, &ad)?, &compose(&ad, &hp)?, &xs_both),
    );
    b.check(
        "intertwining_hermitian_plus",
        "h+ A = A h-",
        residual(&compose(&hp, &a)?, &compose(&a, &hm)?, &xs_both),
    );
    let eta1 = op(OperatorId::Eta1Constructed)?;
    let big_hm = op(OperatorId::HMinusGauge)?;
    let big_hp = op(OperatorId::HPlus)?;
    b.check(
        "intertwining_non_hermitian",
        "eta1 H- = H+ eta1 with eta1 = rho^-1 A rho",
        residual(&compose(&eta1, &big_hm)?, &compose(&big_hp, &eta1)?, &xs_both),
    );
    let g = h.dlog_rho()?;
    b.check(
        "plus_hamiltonian_gauge_form",
        "H+ with the b1 terms equals rho^-1 h+ rho",
        residual(&big_hp, &conjugate(&hp, &g, -1.0)?, &xs_both),
    );

    // similarity gauge of the Swanson operator
    let swanson = op(OperatorId::HMinus)?;
    let expanded = op(OperatorId::HMinusExpanded)?;
    b.check("swanson_expansion", "Swanson composition equals -wb D a^2 D + b1 D + c1", residual(&swanson, &expanded, &xs_both));
    let conj = conjugate(&swanson, &g, 1.0)?;
    b.check(
        "gauge_first_order_cancellation",
        "first-order coefficient of rho H- rho^-1 is the Hermitian -2 wb a a'",
        coefficient_residual(&hm, &conj, 1, &xs_both),
    );

    // z gauge
    let at = op(OperatorId::Atilde)?;
    let atd = op(OperatorId::AtildeDag)?;
    b.check("z_factorization_minus", "ht- = Ad At", residual(&op(OperatorId::HTildeMinus)?, &compose(&atd, &at)?, &zs));
    b.check("z_factorization_plus", "ht+ = At Ad", residual(&op(OperatorId::HTildePlus)?, &compose(&at, &atd)?, &zs));
    b.check(
        "z_partner_difference",
        "Vt+ - Vt- = 2 dw/dz",
        max_over(&zs, |z| {
            let w = w_of_z(&fp, Jet::variable(z, 1));
            let d = eval_potential_z(Side::Plus, PotentialForm::ZCanonical, z, &fp)?
                - eval_potential_z(Side::Minus, PotentialForm::ZCanonical, z, &fp)?;
            Ok(rel(2.0 * w.derivative(1), d))
        }),
    );
    for (side, id) in [(Side::Minus, "transform_shift_minus"), (Side::Plus, "transform_shift_plus")] {
        b.check(
            id,
            "Vt(z) = V(x(z)) + (wb/4) a'^2 + (wb/2) a a''",
            max_over(&zs, |z| {
                let x = coord_x(z, fp.omega_bar)?;
                let v = eval_potential(PotentialFormId::new(side, PotentialForm::OperatorProduct), x, &fp, None)?;
                Ok(rel(eval_potential_z(side, PotentialForm::ZCanonical, z, &fp)?, v + transform_shift(x, fp.omega_bar)))
            }),
        );
    }
    for (side, id) in [(Side::Minus, "parity_minus"), (Side::Plus, "parity_plus")] {
        let pid = PotentialFormId::new(side, PotentialForm::OperatorProduct);
        b.check(
            id,
            "V(x) = V(-x)",
            max_over(&xs, |x| Ok(rel(eval_potential(pid, x, &fp, None)?, eval_potential(pid, -x, &fp, None)?))),
        );
    }

    // printed potential forms
    let canon = |side| PotentialFormId::new(side, PotentialForm::OperatorProduct);
    for form in [PotentialForm::SuperpotentialAnsatz, PotentialForm::Rearranged, PotentialForm::Reduced] {
        let id = PotentialFormId::new(Side::Minus, form);
        b.check(&format!("validated_form:{}", id.label()), "printed form equals the operator product", form_residual(canon(Side::Minus), id, &xs_both, &fp, None));
    }
    let red_plus = PotentialFormId::new(Side::Plus, PotentialForm::Reduced);
    b.check("validated_form:plus/reduced", "printed form equals the operator product", form_residual(canon(Side::Plus), red_plus, &xs_both, &fp, None));
    b.check("validated_form:plus/transformed", "printed z form equals w^2 + w'", z_form_residual(Side::Plus, &zs, &fp));

    b.report(
        "general_plus_vs_operator_product",
        "printed general plus-side expansion against the operator product",
        form_residual(canon(Side::Plus), PotentialFormId::new(Side::Plus, PotentialForm::General), &xs_both, &fp, None),
    );
    b.report(
        "superpotential_ansatz_plus_vs_reduced",
        "printed plus-side ansatz expansion against the reduced plus form",
        form_residual(red_plus, PotentialFormId::new(Side::Plus, PotentialForm::SuperpotentialAnsatz), &xs_both, &fp, None),
    );
    b.report(
        "rearranged_plus_vs_reduced",
        "printed rearranged plus form against the reduced plus form",
        form_residual(red_plus, PotentialFormId::new(Side::Plus, PotentialForm::Rearranged), &xs_both, &fp, None),
    );
    b.report("transformed_minus_vs_z_canonical", "printed z minus form against w^2 - w'", z_form_residual(Side::Minus, &zs, &fp));
    b.check(
        "transformed_minus_offset_profile",
        "printed minus z form exceeds w^2 - w' by 4 d^2 wb^2 z^2 / (1 + d wb z^2)^2",
        max_over(&zs, |z| {
            let diff = eval_potential_z(Side::Minus, PotentialForm::Transformed, z, &fp)?
                - eval_potential_z(Side::Minus, PotentialForm::ZCanonical, z, &fp)?;
            Ok(rel(transformed_minus_offset(&fp, z), diff))
        }),
    );
    b.report(
        "printed_ladder_operator",
        "printed -d/dz + w(z) without the 1/z term against the canonical one",
        residual(&atd, &op(OperatorId::AtildeDagPrinted)?, &zs),
    );
    b.report(
        "eta1_explicit_vs_constructed",
        "printed intertwiner against rho^-1 A rho",
        residual(&eta1, &op(OperatorId::Eta1Explicit)?, &xs_both),
    );
    b.report(
        "swanson_vs_factorized_minus",
        "zeroth-order coefficient of rho H- rho^-1 against V- of the factorization",
        coefficient_residual(&hm, &conj, 0, &xs_both),
    );
    if let Some(model) = inverse.as_ref() {
        b.report(
            "general_minus_vs_conjugated_swanson",
            "general minus-side expansion against the zeroth-order coefficient of rho H- rho^-1",
            max_over(&xs_both, |x| {
                let v = eval_potential(PotentialFormId::new(Side::Minus, PotentialForm::General), x, &fp, Some(model))?;
                Ok(rel(conj.values_at(x)?[0], v))
            }),
        );
        b.report(
            "coupling_ansatz_vs_operator_product",
            "printed coupling-constant form of V- against the operator product",
            form_residual(canon(Side::Minus), PotentialFormId::new(Side::Minus, PotentialForm::CouplingAnsatz), &xs_both, &fp, Some(model)),
        );
    }

    // special functions on a fixed grid
    let sf_cases: Vec<(usize, f64, f64)> = (0..40)
        .map(|i| {
            let u = (0.5 + i as f64 * 0.618_033_988_749_894_9).fract();
            let v = (0.5 + i as f64 * 0.754_877_666_246_692_7).fract();
            (i % 13, -0.9 + 8.9 * u, 20.0 * v)
        })
        .collect();
    b.check(
        "laguerre_kummer",
        "L_n^b = (b+1)_n/n! 1F1(-n; b+1; t), relative to max(1, |L|, L_n^b(-t))",
        Ok(sf_cases
            .iter()
            .map(|&(n, be, t)| {
                let l = laguerre(n, be, t);
                let k = pochhammer(be + 1.0, n) / factorial(n) * kummer(n, be + 1.0, t);
                (l - k).abs() / l.abs().max(laguerre(n, be, -t)).max(1.0)
            })
            .fold(0.0, f64::max)),
    );
    b.check(
        "laguerre_derivative",
        "d/dt L_n^b = -L_{n-1}^{b+1}",
        Ok(sf_cases
            .iter()
            .filter(|c| c.0 >= 1)
            .map(|&(n, be, t)| {
                let d = laguerre_generic(n, be, Jet::variable(t, 1)).derivative(1);
                let want = -laguerre(n - 1, be + 1.0, t);
                (d - want).abs() / want.abs().max(1.0)
            })
            .fold(0.0, f64::max)),
    );
    b.check(
        "laguerre_contiguity",
        "L_n^b = L_{n-1}^b + L_n^{b-1}",
        Ok(sf_cases
            .iter()
            .filter(|c| c.0 >= 1)
            .map(|&(n, be, t)| {
                let l = laguerre(n, be, t);
                let s = laguerre(n - 1, be, t) + laguerre(n, be - 1.0, t);
                (l - s).abs() / l.abs().max(1.0)
            })
            .fold(0.0, f64::max)),
    );
    b.check("pochhammer_truncation", "(-k)_n = (-1)^n k!/(k-n)! or 0", {
        let mut worst = 0.0f64;
        for k in 0..10usize {
            for nn in 0..12usize {
                let want = if nn <= k {
                    (if nn % 2 == 0 { 1.0 } else { -1.0 }) * factorial(k) / factorial(k - nn)
                } else {
                    0.0
                };
                worst = worst.max(rel(want, pochhammer(-(k as f64), nn)));
            }
        }
        Ok(worst)
    });
    b.check("chu_vandermonde", "terminating 2F1(-m; b; c; 1) against its finite sum", (|| -> Result<f64> {
        let mut worst = 0.0f64;
        for m in 0..6usize {
            let (bb, cc) = (fp.gamma + 0.3, fp.gamma + 1.1);
            let series: f64 = (0..=m)
                .map(|l| pochhammer(-(m as f64), l) * pochhammer(bb, l) / (pochhammer(cc, l) * factorial(l)))
                .sum();
            worst = worst.max(rel(series, gauss2f1_unit(-(m as f64), bb, cc)?));
        }
        Ok(worst)
    })());

    // eigenfunctions
    let levels: Vec<usize> = (0..=settings.n_max).collect();
    let zs_wave: Vec<f64> = (1..=n).map(|i| 0.15 + 2.85 * (i as f64 - 0.5) / n as f64).collect();
    for (side, id) in [(Side::Plus, "eigen_residual_plus"), (Side::Minus, "eigen_residual_minus")] {
        b.check(
            id,
            "jet Schroedinger residual against the canonical z potential",
            max_over(&zs_wave, |z| {
                let mut w = 0.0f64;
                for &k in &levels {
                    w = w.max(eigen_residual(&fp, side, k, z)?);
                }
                Ok(w)
            }),
        );
    }
    b.check(
        "minus_closed_vs_operator",
        "Laguerre closed form with C_n' = C_n against the ladder operator on the seed",
        max_over(&zs_wave, |z| {
            let mut w = 0.0f64;
            for &k in &levels {
                let o = phi_minus_jet(&fp, k, Jet::variable(z, 1), PhiMinusMethod::Operator)?.value();
                let c = phi_minus_jet(&fp, k, Jet::variable(z, 0), PhiMinusMethod::Closed)?.value();
                w = w.max(rel(o, c));
            }
            Ok(w)
        }),
    );
    b.check(
        "ladder_reconstruction",
        "At phi_n- = sqrt(E_n+) phi_n+",
        max_over(&zs_wave, |z| {
            let mut w = 0.0f64;
            for &k in &levels {
                let m = phi_minus_jet(&fp, k, Jet::variable(z, 2), PhiMinusMethod::Normalized)?;
                let wz = w_of_z(&fp, z);
                let lhs = m.derivative(1) + wz * m.value();
                let rhs = energy_plus(&fp, k).sqrt() * phi_plus(&fp, k, z)?.value;
                w = w.max(rel(rhs, lhs));
            }
            Ok(w)
        }),
    );
    b.check("normalization_plus", "int (phi_n+)^2 dz = 1", (|| -> Result<f64> {
        let mut w = 0.0f64;
        for &k in &levels {
            let v = quad_halfline(&|z: f64| if z > 0.0 { phi_plus_jet(&fp, k, Jet::variable(z, 0)).map(|j| j.value().powi(2)).unwrap_or(0.0) } else { 0.0 }, fp.omega_hat)?;
            w = w.max((v - 1.0).abs());
        }
        Ok(w)
    })());
    b.check("normalization_minus", "int (phi_n-)^2 dz = 1 for the normalized ladder states", (|| -> Result<f64> {
        let mut w = 0.0f64;
        for &k in &levels {
            let v = quad_halfline(
                &|z: f64| {
                    if z > 0.0 {
                        phi_minus_jet(&fp, k, Jet::variable(z, 1), PhiMinusMethod::Normalized).map(|j| j.value().powi(2)).unwrap_or(0.0)
                    } else {
                        0.0
                    }
                },
                fp.omega_hat,
            )?;
            w = w.max((v - 1.0).abs());
        }
        Ok(w)
    })());
    b.check("j_ground_state", "J_00: printed closed form, quadrature and Gamma(gamma+1)/(2 omega_hat^(gamma+1))", (|| -> Result<f64> {
        let exact = gamma_fn(fp.gamma + 1.0)? / (2.0 * fp.omega_hat.powf(fp.gamma + 1.0));
        let q = j_integral(&fp, 0, 0, JMethod::Quadrature)?;
        let c = j_integral(&fp, 0, 0, JMethod::PrintedClosedForm)?;
        Ok(((q - exact).abs() / exact).max((c - exact).abs() / exact))
    })());
    b.check("j_diagonal_laguerre", "J_nn from the Laguerre norm integral against quadrature", (|| -> Result<f64> {
        let mut w = 0.0f64;
        for &k in &levels {
            let q = j_integral(&fp, k, k, JMethod::Quadrature)?;
            let c = j_integral(&fp, k, k, JMethod::LaguerreClosedForm)?;
            w = w.max((q - c).abs() / c);
        }
        Ok(w)
    })());
    b.report("j_diagonal_printed", "printed J_nn closed form against quadrature, n >= 1", (|| -> Result<f64> {
        let mut w = 0.0f64;
        for &k in levels.iter().filter(|k| **k >= 1) {
            let q = j_integral(&fp, k, k, JMethod::Quadrature)?;
            let c = j_integral(&fp, k, k, JMethod::PrintedClosedForm)?;
            w = w.max((q - c).abs() / q);
        }
        Ok(w)
    })());
    let psi_norm = |k: usize| quad_halfline(&|z: f64| if z > 0.0 { psi_plus(&fp, k, z).map(|p| p.value.powi(2)).unwrap_or(0.0) } else { 0.0 }, fp.omega_hat);
    b.check("psi_ground_norm", "int (psi_0+)^2 dz = 1/wb", psi_norm(0).map(|v| (v * fp.omega_bar - 1.0).abs()));
    b.report("psi_normalization_measure", "max_n |wb int (psi_n+)^2 dz - 1| with the printed N", (|| -> Result<f64> {
        let mut w = 0.0f64;
        for &k in &levels {
            w = w.max((psi_norm(k)? * fp.omega_bar - 1.0).abs());
        }
        Ok(w)
    })());
    b.report("off_diagonal_j", "max |J_mn| over m != n by quadrature", (|| -> Result<f64> {
        let mut w = 0.0f64;
        for &m in &levels {
            for &k in levels.iter().filter(|k| **k > m) {
                w = w.max(j_integral(&fp, m, k, JMethod::Quadrature)?.abs());
            }
        }
        Ok(w)
    })());

    // constraint block
    let (constraints, delta_fit) = match inverse {
        Some(model) => {
            let sol = solve_couplings(&model)?;
            let dc = derive_constants(&model)?;
            let report = crate::params::check_constraints(&fp, &dc, sol.c, sol.d);
            b.check("coupling_back_substitution", "coupling relation residual at the solved (c, d)", Ok(report.coupling));
            b.check("cubic_back_substitution", "cubic residual at the solved d", Ok(report.cubic));
            let fit = infer_delta(&model, &fp, &xs_both)?;
            (Some(report), Some(fit))
        }
        None => (None, None),
    };

    Ok(VerificationReport {
        schema_version: REPORT_SCHEMA_VERSION,
        mode: if inverse.is_some() { "inverse" } else { "forward" }.into(),
        factorization: fp,
        model: inverse,
        gauge,
        n_max: settings.n_max,
        entries: b.entries,
        errata: b.errata,
        constraints,
        delta_fit,
        environment: Environment::current(),
    })
}

impl From<&VerificationReport> for Result<()> {
    fn from(r: &VerificationReport) -> Self {
        if r.all_pass() {
            Ok(())
        } else {
            Err(Error::NonConvergent(format!("{} identities failed", r.failures().len())))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::solve_forward;

    #[test]
    fn reference_report() {
        let fp = solve_forward(1.0, 1.0, 1.0).unwrap();
        let r = verify_forward(&fp, &VerifySettings::default()).unwrap();
        for e in &r.entries {
            println!("{:45} {:.3e} {:?}", e.id, e.residual, e.status);
        }
        for e in &r.errata {
            println!("{:45} {:.3e} {:?}", e.id, e.residual, e.status);
        }
        assert!(r.all_pass(), "{:?}", r.failures());
    }
}
