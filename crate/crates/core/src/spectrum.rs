//! Closed-form spectra and eigenfunctions of the transformed partner
//! Hamiltonians.
//!
//! `Vt+(z) = A/z^2 + B z^2 + shift` is an isotonic oscillator with
//! `A = (rho^2 + sqrt(wb) rho)/wb`, `B = mu^2 wb`, so `delta = omega_hat` and
//! `gamma_GK = gamma`. Minus-side states come from the ladder operator
//! `Ad = -d/dz + w(z)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::{Jet, Scalar, DEFAULT_JET_ORDER};
use crate::numeric::{default_z_max, quad_halfline, refine_extrapolate, RefinedSpectrum};
use crate::params::FactorizationParams;
use crate::potentials::{eval_potential_z, w_of_z, z_canonical_jet, PotentialForm, Side};
use crate::specialfn::{factorial, gamma_fn, kummer_generic, laguerre_generic, pochhammer};

/// `-d^2/dz^2 + A/z^2 + B z^2` on the half-line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GKPotential {
    pub a: f64,
    pub b: f64,
}

impl GKPotential {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a >= 0.0) || !(b > 0.0) {
            return Err(Error::InvalidParameter(format!("need A >= 0 and B > 0, got A = {a}, B = {b}")));
        }
        Ok(Self { a, b })
    }

    /// The partner potential `Vt+` without its constant shift.
    pub fn for_plus(fp: &FactorizationParams) -> Result<Self> {
        Self::new(fp.inverse_square_strength(), fp.quadratic_strength())
    }

    pub fn gamma(&self) -> f64 {
        1.0 + 0.5 * (1.0 + 4.0 * self.a).sqrt()
    }

    pub fn delta(&self) -> f64 {
        self.b.sqrt()
    }

    pub fn potential<T: Scalar>(&self, z: T) -> T {
        (z * z).recip() * self.a + z * z * self.b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralLine {
    pub n: usize,
    pub energy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WavefunctionEval {
    pub n: usize,
    pub z: f64,
    pub value: f64,
    pub derivative: f64,
    pub second_derivative: f64,
}

impl WavefunctionEval {
    fn from_jet(n: usize, z: f64, j: &Jet) -> Self {
        Self { n, z, value: j.value(), derivative: j.derivative(1), second_derivative: j.derivative(2) }
    }
}

fn check_z(z: f64) -> Result<()> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::Domain(format!("wavefunctions live on z > 0, got z = {z}")));
    }
    Ok(())
}

/// `eps_n = 2 delta (2n + gamma)`, `n = 0..=n_max`.
pub fn gk_eigenvalues(gk: &GKPotential, n_max: usize) -> Vec<SpectralLine> {
    let (g, d) = (gk.gamma(), gk.delta());
    (0..=n_max).map(|n| SpectralLine { n, energy: 2.0 * d * (2.0 * n as f64 + g) }).collect()
}

/// `(-1)^n sqrt(2 delta^gamma (gamma)_n / (n! Gamma(gamma)))`.
pub fn normalization(gamma: f64, delta: f64, n: usize) -> Result<f64> {
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * (2.0 * delta.powf(gamma) * pochhammer(gamma, n) / (factorial(n) * gamma_fn(gamma)?)).sqrt())
}

/// `norm z^power e^{-delta z^2/2} 1F1(-n; gamma; delta z^2)`.
fn kummer_profile<T: Scalar>(norm: f64, power: f64, gamma: f64, delta: f64, n: usize, z: T) -> T {
    let y = z * z * delta;
    z.powf(power) * (y * -0.5).exp() * kummer_generic(n, gamma, y) * norm
}

pub fn gk_wavefunction_jet(gk: &GKPotential, n: usize, z: Jet) -> Result<Jet> {
    check_z(z.value())?;
    let (g, d) = (gk.gamma(), gk.delta());
    Ok(kummer_profile(normalization(g, d, n)?, g - 0.5, g, d, n, z))
}

pub fn gk_wavefunction(gk: &GKPotential, n: usize, z: f64) -> Result<WavefunctionEval> {
    let j = gk_wavefunction_jet(gk, n, Jet::variable(z, 2))?;
    Ok(WavefunctionEval::from_jet(n, z, &j))
}

/// `E_n+ = 2 omega_hat (2n + 2 rho/sqrt(wb) + 5)`.
pub fn energies_plus(fp: &FactorizationParams, n_max: usize) -> Vec<SpectralLine> {
    let base = 2.0 * fp.rho_q / fp.sqrt_omega_bar() + 5.0;
    (0..=n_max).map(|n| SpectralLine { n, energy: 2.0 * fp.omega_hat * (2.0 * n as f64 + base) }).collect()
}

pub fn energy_plus(fp: &FactorizationParams, n: usize) -> f64 {
    2.0 * fp.omega_hat * (2.0 * n as f64 + 2.0 * fp.rho_q / fp.sqrt_omega_bar() + 5.0)
}

/// `C_n` of the plus-side eigenfunctions.
pub fn c_n(fp: &FactorizationParams, n: usize) -> Result<f64> {
    normalization(fp.gamma, fp.omega_hat, n)
}

pub fn phi_plus_jet(fp: &FactorizationParams, n: usize, z: Jet) -> Result<Jet> {
    check_z(z.value())?;
    Ok(kummer_profile(c_n(fp, n)?, fp.gamma - 0.5, fp.gamma, fp.omega_hat, n, z))
}

/// `C_n z^{gamma-1/2} e^{-omega_hat z^2/2} 1F1(-n; gamma; omega_hat z^2)`.
pub fn phi_plus(fp: &FactorizationParams, n: usize, z: f64) -> Result<WavefunctionEval> {
    let j = phi_plus_jet(fp, n, Jet::variable(z, 2))?;
    Ok(WavefunctionEval::from_jet(n, z, &j))
}

/// Laguerre-form seed `C_n z^{gamma-1/2} e^{-omega_hat z^2/2} L_n^{gamma-1}(omega_hat z^2)`,
/// which is `(gamma)_n/n!` times the plus-side eigenfunction.
pub fn laguerre_seed_jet(fp: &FactorizationParams, n: usize, z: Jet) -> Result<Jet> {
    check_z(z.value())?;
    let y = z * z * fp.omega_hat;
    Ok(z.powf(fp.gamma - 0.5) * (y * -0.5).exp() * laguerre_generic(n, fp.gamma - 1.0, y) * c_n(fp, n)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiMinusMethod {
    /// The Laguerre closed form after using the derivative and contiguity
    /// identities, with `C_n' = C_n`.
    Closed,
    /// `-d/dz + w(z)` applied to the Laguerre-form seed.
    Operator,
    /// `(-d/dz + w(z)) phi_n+ / sqrt(E_n+)`, unit norm.
    Normalized,
}

fn apply_atilde_dag(fp: &FactorizationParams, f: Jet, z: Jet) -> Jet {
    let k = z.order() - 1;
    let w = w_of_z(fp, z.truncate(k));
    w * f.truncate(k) - f.differentiate()
}

/// Minus-side eigenfunction as a jet of order `z.order() - 1` (one order is
/// spent on the ladder operator) for the operator constructions, and of the
/// full order for the closed form.
pub fn phi_minus_jet(fp: &FactorizationParams, n: usize, z: Jet, method: PhiMinusMethod) -> Result<Jet> {
    check_z(z.value())?;
    match method {
        PhiMinusMethod::Operator => Ok(apply_atilde_dag(fp, laguerre_seed_jet(fp, n, z)?, z)),
        PhiMinusMethod::Normalized => {
            let e = energy_plus(fp, n);
            Ok(apply_atilde_dag(fp, phi_plus_jet(fp, n, z)?, z) / e.sqrt())
        }
        PhiMinusMethod::Closed => {
            let g = fp.gamma;
            let y = z * z * fp.omega_hat;
            let nf = n as f64;
            let bracket = laguerre_generic(n, g - 1.0, y) * (g + nf + 1.0) - laguerre_generic(n + 1, g - 1.0, y) * (nf + 1.0)
                + laguerre_generic(n, g, y) * g;
            let pref = z.powf(g + 0.5) * (y * -0.5).exp() * (2.0 * c_n(fp, n)?) / (z * z + 1.0 / (fp.d * fp.omega_bar));
            Ok(pref * bracket)
        }
    }
}

pub fn phi_minus(fp: &FactorizationParams, n: usize, z: f64, method: PhiMinusMethod) -> Result<WavefunctionEval> {
    let j = phi_minus_jet(fp, n, Jet::variable(z, 3), method)?;
    Ok(WavefunctionEval::from_jet(n, z, &j))
}

/// `N` of the `x`-gauge plus-side states as printed.
pub fn psi_normalization(fp: &FactorizationParams, n: usize) -> Result<f64> {
    let (g, wh) = (fp.gamma, fp.omega_hat);
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let nf = n as f64;
    Ok(sign
        * (2.0 * wh.powf(g + 1.0) * pochhammer(g, n) / (fp.omega_bar * (nf + g) * factorial(n + 1) * gamma_fn(g)?))
            .sqrt())
}

pub fn psi_plus_jet(fp: &FactorizationParams, n: usize, z: Jet) -> Result<Jet> {
    check_z(z.value())?;
    Ok(kummer_profile(psi_normalization(fp, n)?, fp.gamma + 0.5, fp.gamma, fp.omega_hat, n, z))
}

/// `N z^{gamma+1/2} e^{-omega_hat z^2/2} 1F1(-n; gamma; omega_hat z^2)`.
pub fn psi_plus(fp: &FactorizationParams, n: usize, z: f64) -> Result<WavefunctionEval> {
    let j = psi_plus_jet(fp, n, Jet::variable(z, 2))?;
    Ok(WavefunctionEval::from_jet(n, z, &j))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JMethod {
    /// `(n+gamma)(n+1)! Gamma(gamma) / (2 omega_hat^{gamma+1} (gamma)_n)` as printed.
    PrintedClosedForm,
    /// `(2n+gamma) n! Gamma(gamma) / (2 omega_hat^{gamma+1} (gamma)_n)` from the
    /// Laguerre norm integral.
    LaguerreClosedForm,
    Quadrature,
}

/// `J_mn = int_0^inf z^{2 gamma+1} e^{-omega_hat z^2} F_m F_n dz` with
/// `F_k = 1F1(-k; gamma; omega_hat z^2)`.
pub fn j_integral(fp: &FactorizationParams, m: usize, n: usize, method: JMethod) -> Result<f64> {
    let (g, wh) = (fp.gamma, fp.omega_hat);
    if !(g > 0.0 && wh > 0.0) {
        return Err(Error::InvalidParameter(format!("need gamma > 0 and omega_hat > 0, got {g}, {wh}")));
    }
    let nf = n as f64;
    let pre = gamma_fn(g)? / (2.0 * wh.powf(g + 1.0) * pochhammer(g, n));
    match method {
        JMethod::PrintedClosedForm | JMethod::LaguerreClosedForm if m != n => {
            Err(Error::Mode(format!("the closed form covers m = n only, got m = {m}, n = {n}")))
        }
        JMethod::PrintedClosedForm => Ok((nf + g) * factorial(n + 1) * pre),
        JMethod::LaguerreClosedForm => Ok((2.0 * nf + g) * factorial(n) * pre),
        JMethod::Quadrature => quad_halfline(
            &|z: f64| {
                let y = wh * z * z;
                z.powf(2.0 * g + 1.0) * (-y).exp() * kummer_generic(m, g, y) * kummer_generic(n, g, y)
            },
            wh,
        ),
    }
}

/// `|-f'' + V f - E f|` relative to the largest of the three terms.
pub fn schroedinger_residual(f: &Jet, v: f64, energy: f64) -> f64 {
    let (f0, f2) = (f.value(), f.derivative(2));
    let r = -f2 + (v - energy) * f0;
    let scale = f2.abs().max((v * f0).abs()).max((energy * f0).abs()).max(f64::MIN_POSITIVE);
    r.abs() / scale
}

/// Relative residual of a plus- or minus-side eigenfunction against the
/// canonical `z` potential at `z`.
pub fn eigen_residual(fp: &FactorizationParams, side: Side, n: usize, z: f64) -> Result<f64> {
    let e = energy_plus(fp, n);
    let f = match side {
        Side::Plus => phi_plus_jet(fp, n, Jet::variable(z, DEFAULT_JET_ORDER))?,
        Side::Minus => phi_minus_jet(fp, n, Jet::variable(z, DEFAULT_JET_ORDER), PhiMinusMethod::Normalized)?,
    };
    let v = z_canonical_jet(side, fp, z, 0).value();
    Ok(schroedinger_residual(&f, v, e))
}

/// Sign changes of `f` over the samples, ignoring exact zeros.
pub fn count_nodes(values: &[f64]) -> usize {
    let signs: Vec<f64> = values.iter().filter(|v| **v != 0.0).map(|v| v.signum()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Right end of the FD box for the lowest `levels` states of `Vt+`.
pub fn fd_z_max(fp: &FactorizationParams, levels: usize) -> f64 {
    default_z_max(energy_plus(fp, levels.saturating_sub(1)), fp.omega_hat * fp.omega_hat)
}

/// Richardson-extrapolated FD levels of the canonical z potential on one side.
pub fn numeric_levels(
    fp: &FactorizationParams,
    side: Side,
    levels: usize,
    z_min: f64,
    z_max: f64,
    grids: &[usize],
) -> Result<RefinedSpectrum> {
    let fp = *fp;
    refine_extrapolate(
        move |z| eval_potential_z(side, PotentialForm::ZCanonical, z, &fp).unwrap_or(f64::NAN),
        levels,
        grids,
        z_min,
        z_max,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::solve_forward;

    fn pstar() -> FactorizationParams {
        solve_forward(1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn gk_ladders() {
        let e: Vec<f64> = gk_eigenvalues(&GKPotential::new(0.0, 1.0).unwrap(), 2).iter().map(|l| l.energy).collect();
        assert_eq!(e, vec![3.0, 7.0, 11.0]);
        let gk = GKPotential::new(2.0, 1.0).unwrap();
        assert_eq!(gk.gamma(), 2.5);
        assert_eq!(gk_eigenvalues(&gk, 1)[1].energy, 9.0);
        assert_eq!(gk_eigenvalues(&GKPotential::new(2.0, 6.25).unwrap(), 0)[0].energy, 12.5);
        assert!(GKPotential::new(-0.1, 1.0).is_err());
    }

    #[test]
    fn plus_energies_at_reference() {
        let fp = pstar();
        let e: Vec<f64> = energies_plus(&fp, 2).iter().map(|l| l.energy).collect();
        assert_eq!(e, vec![35.0, 45.0, 55.0]);
        let gk = GKPotential::for_plus(&fp).unwrap();
        assert_eq!((gk.a, gk.b), (2.0, 6.25));
        let shifted = gk_eigenvalues(&gk, 2)[2].energy + fp.plus_shift();
        assert!((shifted - 55.0).abs() < 1e-12);
    }

    #[test]
    fn ground_state_values() {
        let fp = pstar();
        let c0 = c_n(&fp, 0).unwrap();
        assert!((c0 - 3.856).abs() < 1e-3);
        let phi = phi_plus(&fp, 0, 1.0).unwrap();
        assert!((phi.value - c0 * (-1.25f64).exp()).abs() < 1e-14);
        assert!((phi.value - 1.105).abs() < 1e-3);
        assert!(phi_plus(&fp, 1, 1.0).unwrap().value.abs() < 1e-14);
        assert!(phi_plus(&fp, 0, 0.0).is_err());
    }

    #[test]
    fn minus_ground_state_via_operator() {
        let fp = pstar();
        let m = phi_minus(&fp, 0, 1.0, PhiMinusMethod::Operator).unwrap();
        let p = phi_plus(&fp, 0, 1.0).unwrap();
        assert!((m.value - 6.0 * p.value).abs() < 1e-12);
        let c = phi_minus(&fp, 0, 1.0, PhiMinusMethod::Closed).unwrap();
        assert!((c.value - m.value).abs() < 1e-12);
    }

    #[test]
    fn closed_form_matches_operator_for_excited_states() {
        let fp = solve_forward(1.7, 0.6, 0.8).unwrap();
        for n in 0..6 {
            for z in [0.2, 0.7, 1.3, 2.1] {
                let a = phi_minus(&fp, n, z, PhiMinusMethod::Operator).unwrap().value;
                let b = phi_minus(&fp, n, z, PhiMinusMethod::Closed).unwrap().value;
                assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0), "n = {n}, z = {z}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn j_integral_ground_state() {
        let fp = pstar();
        let want = gamma_fn(3.5).unwrap() / (2.0 * 2.5f64.powf(3.5));
        let q = j_integral(&fp, 0, 0, JMethod::Quadrature).unwrap();
        let c = j_integral(&fp, 0, 0, JMethod::PrintedClosedForm).unwrap();
        assert!((q - want).abs() < 1e-12 * want);
        assert!((c - want).abs() < 1e-14 * want);
        assert!(j_integral(&fp, 0, 1, JMethod::PrintedClosedForm).is_err());
    }

    #[test]
    fn laguerre_closed_form_matches_quadrature() {
        let fp = pstar();
        for n in 0..6 {
            let q = j_integral(&fp, n, n, JMethod::Quadrature).unwrap();
            let c = j_integral(&fp, n, n, JMethod::LaguerreClosedForm).unwrap();
            assert!((q - c).abs() < 1e-10 * c, "n = {n}");
        }
    }

    #[test]
    fn psi_is_phi_times_power() {
        let fp = pstar();
        for z in [0.4, 1.0, 1.9] {
            let r = psi_plus(&fp, 2, z).unwrap().value / phi_plus(&fp, 2, z).unwrap().value;
            let r1 = psi_plus(&fp, 2, 1.0).unwrap().value / phi_plus(&fp, 2, 1.0).unwrap().value;
            assert!((r / r1 - z).abs() < 1e-12);
        }
    }

    #[test]
    fn node_counting() {
        assert_eq!(count_nodes(&[1.0, 0.5, -0.2, -1.0, 0.0, 2.0]), 2);
        assert_eq!(count_nodes(&[]), 0);
    }

    #[test]
    fn fd_levels_match_closed_form_at_reference_point() {
        let fp = crate::params::solve_forward(1.0, 1.0, 1.0).unwrap();
        let zmax = fd_z_max(&fp, 3);
        assert_eq!(zmax, 10.0);
        for side in [Side::Plus, Side::Minus] {
            let r = numeric_levels(&fp, side, 3, 1e-3, zmax, &[2000, 4000]).unwrap();
            for (e, want) in r.extrapolated.iter().zip([35.0, 45.0, 55.0]) {
                assert!((e - want).abs() / want < 1e-6, "{side:?} {e}");
            }
        }
    }
}
