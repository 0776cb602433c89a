mod common;

use std::f64::consts::PI;

use common::{assert_close, frozen, DELTA_R};
use covarfit::linalg::symmetric_eigen;
use covarfit::spectrum::{argmax, grid, WavenumberConvention};
use covarfit::turbulence::{
    bessel_k, covariance_tensor, gamma_fn, lambda_ratio, longitudinal_f, make_target, make_two_point_target,
    target_spectrum, transverse_g, von_karman_spectrum,
};
use covarfit::TurbulenceModel;
use proptest::prelude::*;

#[test]
fn bessel_matches_quadrature_oracle() {
    let orders = [-1.0, -2.0 / 3.0, -0.4, 0.0, 1.0 / 3.0, 0.5, 0.9, 4.0 / 3.0, 2.0];
    let xs = [1e-6, 1e-3, 0.05, 0.5, 1.0, 1.99, 2.0, 3.7, 10.0, 25.0, 50.0];
    for &nu in &orders {
        for &x in &xs {
            let exact = common::bessel_k_quadrature(nu, x);
            let k = bessel_k(nu, x).unwrap();
            assert!(((k - exact) / exact).abs() < 1e-10, "K_{nu}({x}) = {k}, oracle {exact}");
        }
    }
}

#[test]
fn bessel_frozen_high_precision_value() {
    let k = bessel_k(1.0 / 3.0, 1.0).unwrap();
    assert!(((k - frozen::K_ONE_THIRD_AT_ONE) / frozen::K_ONE_THIRD_AT_ONE).abs() < 1e-13);
    assert!(
        ((common::bessel_k_quadrature(1.0 / 3.0, 1.0) - frozen::K_ONE_THIRD_AT_ONE) / frozen::K_ONE_THIRD_AT_ONE).abs()
            < 1e-12
    );
}

#[test]
fn gamma_matches_stirling_oracle() {
    let mut x = 1.0 / 3.0;
    while x <= 10.0 {
        let g = gamma_fn(x).unwrap();
        let exact = common::gamma_stirling(x);
        assert!(((g - exact) / exact).abs() < 1e-12, "Γ({x}) = {g}, oracle {exact}");
        x += 0.137;
    }
    let g = gamma_fn(5.0 / 6.0).unwrap();
    assert!(((g - frozen::GAMMA_FIVE_SIXTHS) / frozen::GAMMA_FIVE_SIXTHS).abs() < 1e-13);
    assert!((gamma_fn(0.5).unwrap() - PI.sqrt()).abs() < 1e-14);
}

#[test]
fn lambda_and_grid_spacing() {
    let model = TurbulenceModel::default();
    let lambda = lambda_ratio(&model).unwrap();
    assert!((0.7465..=0.7475).contains(&lambda));
    assert_eq!(format!("{:.4}", lambda / 6.0), "0.1245");
    let l = lambda_ratio(&TurbulenceModel::with_exponent(1.5).unwrap()).unwrap();
    assert!((l - PI / 2.0).abs() < 1e-14);
    let scaled = TurbulenceModel::new(5.0 / 6.0, 40.0, 2.0).unwrap();
    assert!((scaled.integral_length_scale().unwrap() - 40.0 * lambda).abs() < 1e-12);
}

#[test]
fn correlation_functions_against_oracles() {
    let model = TurbulenceModel::default();
    let gamma = 5.0 / 6.0;
    assert_eq!(longitudinal_f(0.0, &model).unwrap(), 1.0);
    assert_eq!(transverse_g(0.0, &model).unwrap(), 1.0);
    assert!(longitudinal_f(50.0, &model).unwrap() < 1e-10);

    let f = longitudinal_f(DELTA_R, &model).unwrap();
    assert_close(f, common::longitudinal_oracle(DELTA_R, gamma), 1e-12, "f(Δr)");
    assert_close(f, frozen::F_AT_DELTA_R, 1e-13, "f(Δr) frozen");
    let g = transverse_g(1.0, &model).unwrap();
    assert_close(g, common::transverse_oracle(1.0, gamma), 1e-12, "g(1)");
    assert_close(g, frozen::G_AT_ONE, 1e-13, "g(1) frozen");
}

#[test]
fn incompressibility_relation_on_grid() {
    // g = f + (r/2)·f′ with a central difference of step 1e-5
    let model = TurbulenceModel::default();
    let h = 1e-5;
    for i in 1..1000 {
        let r = 10.0 * i as f64 / 1000.0;
        let df = (longitudinal_f(r + h, &model).unwrap() - longitudinal_f(r - h, &model).unwrap()) / (2.0 * h);
        let expected = longitudinal_f(r, &model).unwrap() + 0.5 * r * df;
        assert_close(transverse_g(r, &model).unwrap(), expected, 1e-6, &format!("r = {r}"));
    }
}

#[test]
fn tensor_along_wind_and_oblique() {
    let model = TurbulenceModel::new(5.0 / 6.0, 2.0, 1.5).unwrap();
    let r = covariance_tensor([0.8, 0.0, 0.0], &model).unwrap();
    let (f, g) = (longitudinal_f(0.4, &model).unwrap(), transverse_g(0.4, &model).unwrap());
    assert_close(r[(0, 0)], 1.5 * f, 1e-15, "R11");
    assert_close(r[(1, 1)], 1.5 * g, 1e-15, "R22");
    assert_close(r[(2, 2)], 1.5 * g, 1e-15, "R33");
    assert_close(r[(0, 1)], 0.0, 1e-15, "R12");

    let (x, y) = (0.6, 1.1);
    let r = covariance_tensor([x, y, 0.0], &model).unwrap();
    let rho = (x * x + y * y).sqrt() / 2.0;
    let (f, g) = (longitudinal_f(rho, &model).unwrap(), transverse_g(rho, &model).unwrap());
    let expected = 1.5 * ((f - g) * x * x / (x * x + y * y) + g);
    assert_close(r[(0, 0)], expected, 1e-15, "oblique R11");
    let zero = covariance_tensor([0.0; 3], &model).unwrap();
    assert_eq!(zero[(0, 0)], 1.5);
    assert_eq!(zero[(0, 1)], 0.0);
}

#[test]
fn default_target_shape() {
    let t = make_target(&TurbulenceModel::default(), DELTA_R, 41).unwrap();
    assert_eq!(t.values()[0], 1.0);
    assert!(t.values().windows(2).all(|w| w[1] < w[0]));
    // discrete trapezoid over [0, 40Δr] holds about 99.5% of the integral scale
    let v = &t.values()[..=40];
    let trapezoid = DELTA_R * (v.iter().sum::<f64>() - 0.5 * (v[0] + v[40]));
    let lambda = lambda_ratio(&TurbulenceModel::default()).unwrap();
    assert_close(trapezoid, 0.995 * lambda, 0.01 * lambda, "trapezoid");
}

#[test]
fn two_point_target_properties() {
    let model = TurbulenceModel::default();
    let t = make_target(&model, DELTA_R, 20).unwrap();
    let flat = make_two_point_target(&model, DELTA_R, 0.0, 20).unwrap();
    for l in 0..=20 {
        let g = flat.get(l);
        for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            assert_close(g[(i, j)], t.values()[l as usize], 1e-15, "degenerate pair");
        }
    }
    let two = make_two_point_target(&model, DELTA_R, common::DELTA_Y, 20).unwrap();
    let (eig, _) = symmetric_eigen(&two.get(0));
    assert!(eig[0] > 0.0);
    let r = covariance_tensor([3.0 * DELTA_R, common::DELTA_Y, 0.0], &model).unwrap();
    assert_close(two.get(3)[(0, 1)], r[(0, 0)], 1e-15, "cross entry");
}

#[test]
fn von_karman_spectrum_shape() {
    let model = TurbulenceModel::default();
    assert_eq!(von_karman_spectrum(0.0, &model).unwrap(), 0.0);
    let peak = argmax(|k| von_karman_spectrum(k, &model).unwrap(), 0.0, 10.0, 2001);
    assert_close(peak, 1.5f64.sqrt(), 1e-6, "peak");
    // the premultiplied spectrum integrates to the variance over ln k
    let s = |k: f64| von_karman_spectrum(k, &model).unwrap() / k;
    let total = common::integrate(|u: f64| s(u.exp()) * u.exp(), -40.0, 0.0, 1e-13)
        + common::integrate(|u: f64| s(u.exp()) * u.exp(), 0.0, 60.0, 1e-13);
    assert_close(total, 1.0, 1e-6, "∫ S/k dk");
}

#[test]
fn target_spectrum_checks() {
    let white = covarfit::Target::new(vec![1.0, 0.0, 0.0, 0.0], 0.5).unwrap();
    let k_max = WavenumberConvention::Angular.k_max(0.5);
    for k in grid(k_max, 11) {
        assert_close(target_spectrum(&white, k, k_max).unwrap(), 1.0 / k_max, 1e-15, "white");
    }
    assert!(target_spectrum(&white, k_max * 1.01, k_max).is_err());

    let t = common::turbulence_target(4000);
    let k_max = WavenumberConvention::Angular.k_max(DELTA_R);
    let ks = grid(k_max, 4001);
    let vals: Vec<f64> = ks.iter().map(|&k| target_spectrum(&t, k, k_max).unwrap()).collect();
    let h = ks[1] - ks[0];
    let area = h * (vals.iter().sum::<f64>() - 0.5 * (vals[0] + vals[vals.len() - 1]));
    assert_close(area, t.values()[0], 1e-3, "area");
    let peak = argmax(|k| k * target_spectrum(&t, k, k_max).unwrap(), 0.0, k_max, 2001);
    assert_close(peak, 1.245, 0.01, "premultiplied peak");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tensor_is_symmetric_and_bounded(x in -5.0f64..5.0, y in -5.0f64..5.0, z in -5.0f64..5.0, s in 0.1f64..4.0) {
        let model = TurbulenceModel::new(5.0 / 6.0, 1.0, s).unwrap();
        let r = covariance_tensor([x, y, z], &model).unwrap();
        prop_assert!(r.is_symmetric(1e-15));
        let (eig, _) = symmetric_eigen(&r);
        prop_assert!(eig.iter().all(|e| e.abs() <= s * (1.0 + 1e-12)));
    }

    #[test]
    fn target_respects_variance_bound(dr in 0.01f64..1.0, gamma in 0.6f64..2.0) {
        let model = TurbulenceModel::with_exponent(gamma).unwrap();
        let t = make_target(&model, dr, 60).unwrap();
        prop_assert_eq!(t.values()[0], 1.0);
        prop_assert!(t.values().iter().all(|v| v.abs() <= 1.0));
    }
}
