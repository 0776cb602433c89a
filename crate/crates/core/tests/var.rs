mod common;

use common::{assert_close, mat2, toy_var2, turbulence_target, two_point_target};
use covarfit::ar::{fit_linear, theoretical_autocovariance, AutocovMethod, LagSelection, LagVector};
use covarfit::linalg::Matrix;
use covarfit::var::{
    covariance_via_companion, covariance_via_companion_with, covariance_via_vma, default_vma_order, fit_var_linear,
    CompanionOptions, CovarianceMatrixFunction,
};
use covarfit::{ArModel, CovarianceFunction, Error, VarModel};
use proptest::prelude::*;

fn assert_matrix(m: &Matrix<f64>, expected: [[f64; 2]; 2], tol: f64, what: &str) {
    for (r, row) in expected.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            assert_close(m[(r, c)], v, tol, &format!("{what}[{r},{c}]"));
        }
    }
}

/// Stationary covariance by fixed-point iteration of `Γ = ΦΓΦᵀ + Q` on the companion form,
/// followed by the Yule–Walker recursion.
fn covariance_by_iteration(model: &VarModel, n: usize) -> Vec<Matrix<f64>> {
    let (k, p) = (model.k(), model.order());
    let phi = model.phi();
    let dim = k * p;
    let mut big = Matrix::zeros(dim, dim);
    for (i, m) in phi.iter().enumerate() {
        big.set_block(0, i * k, m);
    }
    for i in k..dim {
        big[(i, i - k)] = 1.0;
    }
    let mut q = Matrix::zeros(dim, dim);
    q.set_block(0, 0, &model.b().matmul(&model.b().transpose()));
    // doubling: Γ ← Γ + A Γ Aᵀ, A ← A², converges quadratically
    let (mut g, mut a) = (q, big);
    for _ in 0..60 {
        g = g.add(&a.matmul(&g).matmul(&a.transpose()));
        a = a.matmul(&a);
    }
    let mut out: Vec<Matrix<f64>> = (0..p).map(|h| g.block(0, h * k, k, k)).collect();
    while out.len() <= n {
        let l = out.len();
        let mut s = Matrix::zeros(k, k);
        for (i, m) in phi.iter().enumerate() {
            s = s.add(&m.matmul(&out[l - i - 1]));
        }
        out.push(s);
    }
    out.truncate(n + 1);
    out
}

#[test]
fn two_point_yule_walker_var3() {
    let target = two_point_target(30);
    let model = fit_var_linear(&target, &LagSelection::matched(LagVector::consecutive(3).unwrap())).unwrap();
    assert_matrix(&model.a()[0], [[0.659, 0.022], [0.022, 0.659]], 2e-3, "A1");
    assert_matrix(&model.a()[1], [[0.096, 0.011], [0.011, 0.096]], 2e-3, "A2");
    assert_matrix(&model.a()[2], [[0.039, 0.015], [0.015, 0.039]], 2e-3, "A3");
    assert_matrix(model.b(), [[0.634, 0.0], [0.013, 0.634]], 2e-3, "B");

    let cov = covariance_via_companion(&model, 3).unwrap();
    for l in 0..=3 {
        let d = cov.get(l).sub(&target.get(l)).max_abs();
        assert!(d <= 1e-9, "lag {l}: {d}");
    }
}

#[test]
fn two_point_restricted_var5() {
    let target = two_point_target(30);
    let sel = LagSelection::from_vecs(vec![1, 2, 5], vec![1, 2, 6]).unwrap();
    let model = fit_var_linear(&target, &sel).unwrap();
    assert_matrix(&model.a()[0], [[0.660, 0.023], [0.023, 0.660]], 2e-3, "A1");
    assert_matrix(&model.a()[1], [[0.109, 0.015], [0.015, 0.109]], 2e-3, "A2");
    assert_matrix(&model.a()[2], [[0.028, 0.013], [0.013, 0.028]], 2e-3, "A5");
    assert_matrix(model.b(), [[0.634, 0.0], [0.013, 0.634]], 2e-3, "B");
    assert_eq!(model.order(), 5);
    assert_eq!(model.phi()[2].max_abs(), 0.0);
}

#[test]
fn companion_matches_iteration_on_toy_model() {
    let model = toy_var2();
    let cov = covariance_via_companion(&model, 20).unwrap();
    let reference = covariance_by_iteration(&model, 20);
    for (l, m) in reference.iter().enumerate() {
        assert!(cov.get(l as isize).sub(m).max_abs() <= 1e-12, "lag {l}");
    }
    assert!(cov.get(0).is_symmetric(0.0));
    assert_eq!(cov.get(-3), cov.get(3).transpose());
}

#[test]
fn vma_converges_to_companion() {
    let model = toy_var2();
    let exact = covariance_via_companion(&model, 20).unwrap();
    let errors: Vec<f64> = [5, 20, 80]
        .iter()
        .map(|&q| covariance_via_vma(&model, q, 20).unwrap().max_abs_diff(&exact))
        .collect();
    assert!(errors[0] > errors[1] && errors[1] > errors[2], "{errors:?}");
    assert!(errors[2] <= 1e-6, "{errors:?}");
    let short = covariance_via_vma(&model, 5, 8).unwrap();
    assert_eq!(short.get(6).max_abs(), 0.0);
    let q = default_vma_order(&model);
    assert!(covariance_via_vma(&model, q, 20).unwrap().max_abs_diff(&exact) < 1e-9);
}

#[test]
fn companion_dimension_guard() {
    let model = toy_var2();
    let err = covariance_via_companion_with(&model, 4, CompanionOptions { max_dim: 3 }).unwrap_err();
    assert!(matches!(err, Error::Resource(_)));
}

#[test]
fn univariate_reduction() {
    let t = turbulence_target(40);
    let scalar = CovarianceMatrixFunction::from_scalar(&t);
    for sel in [
        LagSelection::matched(LagVector::consecutive(3).unwrap()),
        LagSelection::from_vecs(vec![1, 2, 7], vec![1, 6, 12]).unwrap(),
    ] {
        let ar = fit_linear(&t, &sel).unwrap();
        let var = fit_var_linear(&scalar, &sel).unwrap();
        for (x, m) in ar.a().iter().zip(var.a()) {
            assert_eq!(*x, m[(0, 0)]);
        }
        assert_eq!(ar.b(), var.b()[(0, 0)]);
        let g = theoretical_autocovariance(&ar, 30, AutocovMethod::DirectSolve).unwrap();
        let c = covariance_via_companion(&VarModel::from_ar(&ar), 30).unwrap();
        for (l, v) in g.iter().enumerate() {
            assert_close(c.get(l as isize)[(0, 0)], *v, 1e-12, "companion vs AR");
        }
    }
}

#[test]
fn model_validation() {
    let j = LagVector::consecutive(1).unwrap();
    let upper = mat2([[1.0, 0.5], [0.0, 1.0]]);
    assert!(VarModel::new(j.clone(), vec![Matrix::identity(2).scale(0.5)], upper).is_err());
    let explosive = mat2([[1.2, 0.0], [0.0, 0.1]]);
    assert!(matches!(
        VarModel::new(j.clone(), vec![explosive], Matrix::identity(2)),
        Err(Error::NonStationary { .. })
    ));
    assert!(VarModel::new(j, vec![Matrix::identity(3).scale(0.1)], Matrix::identity(2)).is_err());
}

#[test]
fn covariance_function_validation() {
    let asym = mat2([[1.0, 0.2], [0.1, 1.0]]);
    assert!(CovarianceFunction::new(vec![asym]).is_err());
    let indefinite = mat2([[1.0, 2.0], [2.0, 1.0]]);
    assert!(CovarianceFunction::new(vec![indefinite]).is_err());
    let ok = CovarianceFunction::new(vec![Matrix::identity(2), mat2([[0.5, 0.1], [0.2, 0.5]])]).unwrap();
    assert_eq!(ok.get(-1)[(0, 1)], 0.2);
    assert!(ok.try_get(2).is_none());
    assert!(matches!(ok.require(3), Err(Error::InsufficientTarget { .. })));
}

fn stable_var() -> impl Strategy<Value = VarModel> {
    (1usize..=3, 1usize..=3).prop_flat_map(|(k, p)| {
        let coeffs = prop::collection::vec(-1.0f64..1.0, k * k * p);
        let noise = prop::collection::vec(-0.5f64..0.5, k * k);
        let diag = prop::collection::vec(0.2f64..1.5, k);
        (coeffs, noise, diag).prop_map(move |(c, n, d)| {
            // row sums of |A_i| below 0.9/p keep the process stationary
            let scale = 0.9 / (p * k) as f64;
            let a = (0..p)
                .map(|i| Matrix::from_fn(k, k, |r, s| scale * c[i * k * k + r * k + s]))
                .collect();
            let b = Matrix::from_fn(k, k, |r, s| match r.cmp(&s) {
                std::cmp::Ordering::Equal => d[r],
                std::cmp::Ordering::Greater => n[r * k + s],
                std::cmp::Ordering::Less => 0.0,
            });
            VarModel::new(LagVector::consecutive(p).unwrap(), a, b).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn companion_agrees_with_vma(model in stable_var()) {
        let exact = covariance_via_companion(&model, 12).unwrap();
        let approx = covariance_via_vma(&model, default_vma_order(&model), 12).unwrap();
        let scale = exact.get(0).max_abs();
        prop_assert!(exact.max_abs_diff(&approx) <= 1e-9 * scale);
        let iter = covariance_by_iteration(&model, 12);
        for (l, m) in iter.iter().enumerate() {
            prop_assert!(exact.get(l as isize).sub(m).max_abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn var_fit_round_trip(model in stable_var()) {
        let p = model.order();
        let target = covariance_via_companion(&model, p + 2).unwrap();
        let target = CovarianceFunction::new(target.mats().to_vec()).unwrap();
        let refit = fit_var_linear(&target, &LagSelection::matched(LagVector::consecutive(p).unwrap())).unwrap();
        for (x, y) in refit.a().iter().zip(model.a()) {
            prop_assert!(x.sub(y).max_abs() <= 1e-8);
        }
        prop_assert!(refit.b().sub(model.b()).max_abs() <= 1e-8);
    }

    #[test]
    fn scalar_var_matches_ar(phi in prop::collection::vec(-0.3f64..0.3, 1..=3), b in 0.1f64..2.0) {
        let ar = ArModel::unrestricted(phi, b).unwrap();
        let g = theoretical_autocovariance(&ar, 15, AutocovMethod::DirectSolve).unwrap();
        let c = covariance_via_companion(&VarModel::from_ar(&ar), 15).unwrap();
        for (l, v) in g.iter().enumerate() {
            prop_assert!((c.get(l as isize)[(0, 0)] - v).abs() <= 1e-12 * g[0]);
        }
    }
}
