use proptest::prelude::*;
use swanson_core::diffop::{compose, residual, sample_points, sample_points_z, Hierarchy, OperatorId};
use swanson_core::numeric::{composite, quad_halfline};
use swanson_core::params::{cubic_real_roots, derive_constants, solve_couplings, solve_forward};
use swanson_core::potentials::{
    coord_x, eval_potential, eval_potential_z, transform_shift, w_of_z, Gauge, PotentialForm, PotentialFormId, Side,
};
use swanson_core::specialfn::{factorial, kummer, laguerre, laguerre_generic, pochhammer};
use swanson_core::spectrum::{eigen_residual, energy_plus, numeric_levels, phi_minus_jet, phi_plus, phi_plus_jet, PhiMinusMethod};
use swanson_core::{FactorizationParams, Jet, ModelParams};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(1.0)
}

fn forward() -> impl Strategy<Value = FactorizationParams> {
    (0.2f64..4.0, 0.1f64..4.0, 0.1f64..4.0).prop_map(|(w, r, d)| solve_forward(w, r, d).unwrap())
}

/// Forward parameters together with a random Swanson gauge of the same `wb`.
fn gauged() -> impl Strategy<Value = Hierarchy> {
    (forward(), -1.5f64..1.5, 0.2f64..1.5, any::<bool>(), -4.0f64..-1.1).prop_map(|(fp, a, gap, up, c)| {
        let b = if up { a + gap } else { a - gap };
        let g = Gauge::new(ModelParams::from_omega_bar(fp.omega_bar, a, b), c, fp.d).unwrap();
        Hierarchy::with_gauge(fp, g).unwrap()
    })
}

fn x_points(n: usize) -> Vec<f64> {
    let mut xs: Vec<f64> = (0..n).map(|i| 0.2 + 4.8 * (i as f64 + 0.37) / n as f64).collect();
    xs.extend(xs.clone().iter().map(|x| -x));
    xs
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn forward_identities(fp in forward()) {
        prop_assert!(rel(fp.omega_hat, fp.mu.abs() * fp.omega_bar.sqrt()) <= 1e-12);
        prop_assert!(rel(fp.omega_hat, fp.d * fp.omega_bar * fp.gamma) <= 1e-12);
        let again = solve_forward(fp.omega_bar, fp.rho_q, fp.d).unwrap();
        prop_assert_eq!((again.mu.to_bits(), again.lambda.to_bits()), (fp.mu.to_bits(), fp.lambda.to_bits()));
        prop_assert_eq!((again.omega_hat.to_bits(), again.gamma.to_bits()), (fp.omega_hat.to_bits(), fp.gamma.to_bits()));
    }

    #[test]
    fn ground_energy_grows_with_rho(w in 0.2f64..4.0, d in 0.1f64..4.0, r in 0.1f64..4.0, dr in 0.01f64..2.0) {
        let lo = solve_forward(w, r, d).unwrap();
        let hi = solve_forward(w, r + dr, d).unwrap();
        prop_assert!(energy_plus(&hi, 0) > energy_plus(&lo, 0));
    }

    #[test]
    fn spectrum_positive_and_equidistant(fp in forward(), n in 0usize..30) {
        let (e0, e1) = (energy_plus(&fp, n), energy_plus(&fp, n + 1));
        prop_assert!(e0 > 0.0);
        prop_assert!(rel(4.0 * fp.omega_hat, e1 - e0) <= 1e-12);
    }

    #[test]
    fn cubic_root_back_substitution(w in -3.0f64..3.0, a in -3.0f64..3.0, b in -3.0f64..3.0) {
        prop_assume!((a - b).abs() > 0.05);
        let m = ModelParams::new(w, a, b);
        prop_assume!(derive_constants(&m).is_ok());
        let dc = derive_constants(&m).unwrap();
        if let Ok(sol) = solve_couplings(&m) {
            let (a1, a2, wb) = (dc.a1, dc.a2, dc.omega_bar);
            let r = 4.0 * wb * sol.d.powi(3) - (2.0 * a1 - a2) * sol.d - 2.0 * a1;
            prop_assert!(r.abs() < 1e-10 * (2.0 * a1).abs().max(1.0), "{r}");
        }
    }

    #[test]
    fn cubic_roots_are_roots(p in -5.0f64..5.0, q in -5.0f64..5.0, r in -5.0f64..5.0) {
        for x in cubic_real_roots(1.0, p, q, r) {
            let v = x.powi(3) + p * x * x + q * x + r;
            prop_assert!(v.abs() <= 1e-10 * (1.0 + x.abs().powi(3)), "{x} {v}");
        }
    }

    #[test]
    fn laguerre_kummer_relation(n in 0usize..=12, b in -0.9f64..8.0, t in 0.0f64..=20.0) {
        let l = laguerre(n, b, t);
        let k = pochhammer(b + 1.0, n) / factorial(n) * kummer(n, b + 1.0, t);
        prop_assert!((l - k).abs() <= 1e-10 * l.abs().max(laguerre(n, b, -t)).max(1.0));
        prop_assert_eq!(kummer(n, b + 1.0, 0.0), 1.0);
    }

    #[test]
    fn laguerre_derivative_and_contiguity(n in 1usize..=10, b in -0.9f64..8.0, t in 0.0f64..=20.0) {
        let d = laguerre_generic(n, b, Jet::variable(t, 1)).derivative(1);
        let want = -laguerre(n - 1, b + 1.0, t);
        prop_assert!((d - want).abs() <= 1e-10 * want.abs().max(laguerre(n - 1, b + 1.0, -t)).max(1.0));
        let l = laguerre(n, b, t);
        let sum = laguerre(n - 1, b, t) + laguerre(n, b - 1.0, t);
        let scale = l.abs().max(laguerre(n, b, -t)).max(laguerre(n - 1, b, -t)).max(laguerre(n, b - 1.0, -t).abs()).max(1.0);
        prop_assert!((l - sum).abs() <= 1e-10 * scale);
    }

    #[test]
    fn pochhammer_truncation(k in 0usize..15, n in 0usize..20) {
        let want = if n <= k { (if n % 2 == 0 { 1.0 } else { -1.0 }) * factorial(k) / factorial(k - n) } else { 0.0 };
        prop_assert!(rel(want, pochhammer(-(k as f64), n)) <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn validated_forms_agree(fp in forward()) {
        let xs = x_points(50);
        let op = |s| PotentialFormId::new(s, PotentialForm::OperatorProduct);
        for (side, form) in [
            (Side::Minus, PotentialForm::SuperpotentialAnsatz),
            (Side::Minus, PotentialForm::Rearranged),
            (Side::Minus, PotentialForm::Reduced),
            (Side::Plus, PotentialForm::Reduced),
        ] {
            for &x in &xs {
                let want = eval_potential(op(side), x, &fp, None).unwrap();
                let got = eval_potential(PotentialFormId::new(side, form), x, &fp, None).unwrap();
                prop_assert!(rel(want, got) <= 1e-10, "{side:?} {form:?} x = {x}");
            }
        }
        for z in sample_points_z(50, fp.omega_bar) {
            let want = eval_potential_z(Side::Plus, PotentialForm::ZCanonical, z, &fp).unwrap();
            let got = eval_potential_z(Side::Plus, PotentialForm::Transformed, z, &fp).unwrap();
            prop_assert!(rel(want, got) <= 1e-10);
        }
    }

    #[test]
    fn transform_shift_partner_difference_and_parity(fp in forward()) {
        for z in sample_points_z(30, fp.omega_bar) {
            let x = coord_x(z, fp.omega_bar).unwrap();
            for side in [Side::Minus, Side::Plus] {
                let v = eval_potential(PotentialFormId::new(side, PotentialForm::OperatorProduct), x, &fp, None).unwrap();
                let vt = eval_potential_z(side, PotentialForm::ZCanonical, z, &fp).unwrap();
                prop_assert!(rel(vt, v + transform_shift(x, fp.omega_bar)) <= 1e-10);
                let vm = eval_potential(PotentialFormId::new(side, PotentialForm::OperatorProduct), -x, &fp, None).unwrap();
                prop_assert!(rel(v, vm) <= 1e-10);
            }
            let dw = w_of_z(&fp, Jet::variable(z, 1)).derivative(1);
            let diff = eval_potential_z(Side::Plus, PotentialForm::ZCanonical, z, &fp).unwrap()
                - eval_potential_z(Side::Minus, PotentialForm::ZCanonical, z, &fp).unwrap();
            prop_assert!(rel(2.0 * dw, diff) <= 1e-10);
        }
    }

    #[test]
    fn factorization_and_intertwining(h in gauged()) {
        let pts = sample_points(20, true);
        let b = |id| h.build(id).unwrap();
        let (a, ad, hm, hp) = (b(OperatorId::A), b(OperatorId::ADag), b(OperatorId::HMinusHermitian), b(OperatorId::HPlusHermitian));
        prop_assert!(residual(&hm, &compose(&ad, &a).unwrap(), &pts).unwrap() <= 1e-10);
        prop_assert!(residual(&hp, &compose(&a, &ad).unwrap(), &pts).unwrap() <= 1e-10);
        prop_assert!(residual(&compose(&hm, &ad).unwrap(), &compose(&ad, &hp).unwrap(), &pts).unwrap() <= 1e-9);
        prop_assert!(residual(&compose(&hp, &a).unwrap(), &compose(&a, &hm).unwrap(), &pts).unwrap() <= 1e-9);
        let (eta, big_m, big_p) = (b(OperatorId::Eta1Constructed), b(OperatorId::HMinusGauge), b(OperatorId::HPlus));
        prop_assert!(residual(&compose(&eta, &big_m).unwrap(), &compose(&big_p, &eta).unwrap(), &pts).unwrap() <= 1e-9);
        let zs = sample_points_z(20, h.fp.omega_bar);
        let (at, atd) = (b(OperatorId::Atilde), b(OperatorId::AtildeDag));
        prop_assert!(residual(&b(OperatorId::HTildeMinus), &compose(&atd, &at).unwrap(), &zs).unwrap() <= 1e-10);
        prop_assert!(residual(&b(OperatorId::HTildePlus), &compose(&at, &atd).unwrap(), &zs).unwrap() <= 1e-10);
    }

    #[test]
    fn coefficient_jets_match_finite_differences(h in gauged(), which in 0usize..5, x in prop_oneof![-3.0f64..-0.4, 0.4f64..3.0]) {
        let id = [OperatorId::A, OperatorId::HMinusHermitian, OperatorId::HPlus, OperatorId::HMinusExpanded, OperatorId::Eta1Constructed][which];
        let op = h.build(id).unwrap();
        let jets = op.coeffs_at(x, 3).unwrap();
        let step = 1e-5;
        // Richardson-improved central difference of derivative k-1 against derivative k
        for (i, jet) in jets.iter().enumerate() {
            for k in 1..=3 {
                let f = |y: f64| op.coeffs_at(y, k - 1).unwrap()[i].derivative(k - 1);
                let d = |s: f64| (f(x + s) - f(x - s)) / (2.0 * s);
                let fd = (4.0 * d(step / 2.0) - d(step)) / 3.0;
                let want = jet.derivative(k);
                let scale = want.abs().max(f(x).abs()).max(1.0);
                prop_assert!((fd - want).abs() <= 1e-7 * scale, "{id:?} coeff {i} order {k}: {fd} vs {want}");
            }
        }
    }

    #[test]
    fn eigenfunctions_and_ladder(fp in forward(), n in 0usize..=5, u in 0.05f64..0.95) {
        let z = 0.1 + u * 3.5 / fp.omega_hat.sqrt();
        prop_assert!(eigen_residual(&fp, Side::Plus, n, z).unwrap() <= 1e-8);
        prop_assert!(eigen_residual(&fp, Side::Minus, n, z).unwrap() <= 1e-8);
        let m = phi_minus_jet(&fp, n, Jet::variable(z, 2), PhiMinusMethod::Normalized).unwrap();
        let lhs = m.derivative(1) + w_of_z(&fp, z) * m.value();
        let rhs = energy_plus(&fp, n).sqrt() * phi_plus(&fp, n, z).unwrap().value;
        prop_assert!((lhs - rhs).abs() <= 1e-8 * rhs.abs().max(1.0));
    }
}

#[test]
fn plus_states_are_normalized_and_quadrature_is_stable() {
    let fp = solve_forward(1.0, 1.0, 1.0).unwrap();
    for n in 0..=5 {
        let f = |z: f64| if z > 0.0 { phi_plus_jet(&fp, n, Jet::variable(z, 0)).unwrap().value().powi(2) } else { 0.0 };
        let v = quad_halfline(&f, fp.omega_hat).unwrap();
        assert!((v - 1.0).abs() <= 1e-8, "n = {n}: {v}");
        let cutoff = 12.0 / fp.omega_hat.sqrt();
        let (c1, c2) = (composite(&f, 0.0, cutoff, 256), composite(&f, 0.0, cutoff, 512));
        assert!((c1 - c2).abs() <= 1e-11 * c2.abs(), "n = {n}");
    }
}

#[test]
fn fd_levels_converge_and_ignore_the_wall_position() {
    let fp = solve_forward(1.0, 1.0, 1.0).unwrap();
    let a = numeric_levels(&fp, Side::Plus, 4, 1e-3, 10.0, &[2000, 4000]).unwrap();
    let b = numeric_levels(&fp, Side::Plus, 4, 1e-4, 10.0, &[2000, 4000]).unwrap();
    for n in 0..4 {
        let e = energy_plus(&fp, n);
        assert!((a.extrapolated[n] - e).abs() / e <= 1e-6, "n = {n}");
        assert!((a.extrapolated[n] - b.extrapolated[n]).abs() / e < 1e-7, "n = {n}");
        if let Some(p) = a.observed_order[n] {
            assert!((p - 2.0).abs() < 0.2, "order {p}");
        }
    }
}
