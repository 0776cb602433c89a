//! Reference implementations used only by the tests.
//!
//! None of these share code with the library: Bessel K comes from adaptive
//! quadrature of its integral representation, Γ from a shifted Stirling series.

#![allow(clippy::excessive_precision)]
#![allow(dead_code)]

use covarfit::linalg::Matrix;
use covarfit::turbulence::{make_target, make_two_point_target};
use covarfit::{CovarianceFunction, Target, TurbulenceModel, VarModel};

/// Non-dimensional lag spacing of the reference examples.
pub const DELTA_R: f64 = 0.1245;
/// Lateral separation of the two-point example.
pub const DELTA_Y: f64 = 0.747;

/// Values computed with mpmath at 30 digits before the build.
pub mod frozen {
    pub const K_ONE_THIRD_AT_ONE: f64 = 0.438_430_633_441_534_361_713;
    pub const GAMMA_FIVE_SIXTHS: f64 = 1.128_787_029_908_125_961;
    pub const F_AT_DELTA_R: f64 = 0.766_945_121_884_781_078;
    pub const G_AT_ONE: f64 = 0.113_291_189_002_645_346;
}

fn gauss_kronrod(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    const XGK: [f64; 8] = [
        0.991_455_371_120_812_6,
        0.949_107_912_342_758_5,
        0.864_864_423_359_769_1,
        0.741_531_185_599_394_4,
        0.586_087_235_467_691_1,
        0.405_845_151_377_397_2,
        0.207_784_955_007_898_5,
        0.0,
    ];
    const WGK: [f64; 8] = [
        0.022_935_322_010_529_22,
        0.063_092_092_629_978_55,
        0.104_790_010_322_250_2,
        0.140_653_259_715_525_9,
        0.169_004_726_639_267_9,
        0.190_350_578_064_785_4,
        0.204_432_940_075_298_9,
        0.209_482_141_084_727_8,
    ];
    const WG: [f64; 4] = [
        0.129_484_966_168_869_7,
        0.279_705_391_489_276_7,
        0.381_830_050_505_118_9,
        0.417_959_183_673_469_4,
    ];
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let x = h * XGK[i];
        let s = f(c - x) + f(c + x);
        kron += WGK[i] * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Adaptive Gauss–Kronrod (7/15) quadrature to relative tolerance `rel`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rel: f64) -> f64 {
    let (rough, _) = gauss_kronrod(&f, a, b);
    let tol = (rel * rough.abs()).max(f64::MIN_POSITIVE);
    fn rec(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (v, err) = gauss_kronrod(f, a, b);
        if err <= tol || depth == 0 {
            return v;
        }
        let m = 0.5 * (a + b);
        rec(f, a, m, tol / 2.0, depth - 1) + rec(f, m, b, tol / 2.0, depth - 1)
    }
    rec(&f, a, b, tol, 30)
}

/// `K_ν(x) = ∫₀^∞ exp(−x·cosh t)·cosh(ν t) dt`.
pub fn bessel_k_quadrature(nu: f64, x: f64) -> f64 {
    // integrand below e^-745 beyond this point
    let upper = ((745.0 / x) + 1.0).acosh() + 1.0;
    integrate(|t| (-x * t.cosh()).exp() * (nu * t).cosh(), 0.0, upper, 1e-14)
}

/// `Γ(x)` for `x > 0` via the Stirling series at `x + n ≥ 30`.
pub fn gamma_stirling(x: f64) -> f64 {
    assert!(x > 0.0);
    let mut z = x;
    let mut prod = 1.0;
    while z < 30.0 {
        prod *= z;
        z += 1.0;
    }
    let z2 = z * z;
    let series =
        1.0 / (12.0 * z) - 1.0 / (360.0 * z * z2) + 1.0 / (1260.0 * z * z2 * z2) - 1.0 / (1680.0 * z * z2 * z2 * z2);
    let ln = (z - 0.5) * z.ln() - z + 0.5 * (2.0 * std::f64::consts::PI).ln() + series;
    ln.exp() / prod
}

/// `f(r)` composed from the oracle Bessel and gamma functions.
pub fn longitudinal_oracle(r: f64, gamma: f64) -> f64 {
    let nu = gamma - 0.5;
    2.0 / gamma_stirling(nu) * (r / 2.0).powf(nu) * bessel_k_quadrature(nu, r)
}

/// `g(r)` composed from the oracle Bessel and gamma functions.
pub fn transverse_oracle(r: f64, gamma: f64) -> f64 {
    let nu = gamma - 0.5;
    longitudinal_oracle(r, gamma)
        - 2.0 / gamma_stirling(nu) * (r / 2.0).powf(gamma + 0.5) * bessel_k_quadrature(gamma - 1.5, r)
}

pub fn turbulence_target(lags: usize) -> Target {
    make_target(&TurbulenceModel::default(), DELTA_R, lags).unwrap()
}

pub fn two_point_target(lags: usize) -> CovarianceFunction {
    make_two_point_target(&TurbulenceModel::default(), DELTA_R, DELTA_Y, lags).unwrap()
}

pub fn mat2(rows: [[f64; 2]; 2]) -> Matrix<f64> {
    Matrix::from_row_slice(2, 2, &[rows[0][0], rows[0][1], rows[1][0], rows[1][1]])
}

/// The bivariate VAR(2) example with `Φ₁`, `Φ₂` and lower-triangular `Σ`.
pub fn toy_var2() -> VarModel {
    let j = covarfit::ar::LagVector::consecutive(2).unwrap();
    let phi1 = mat2([[1.1, -0.1], [-0.2, 0.7]]);
    let phi2 = mat2([[-0.3, 0.2], [-0.1, 0.1]]);
    let sigma = mat2([[0.3, 0.0], [0.1, 0.2]]);
    VarModel::new(j, vec![phi1, phi2], sigma).unwrap()
}

pub fn assert_close(actual: f64, expected: f64, tol: f64, what: &str) {
    assert!(
        (actual - expected).abs() <= tol,
        "{what}: {actual} vs {expected} (tol {tol})"
    );
}

/// AR coefficients from partial autocorrelations by the Levinson step-up recursion.
/// Any `|κ| < 1` gives a stationary model, which makes this a convenient generator.
pub fn phi_from_pacf(kappa: &[f64]) -> Vec<f64> {
    let mut phi: Vec<f64> = Vec::with_capacity(kappa.len());
    for (k, &kk) in kappa.iter().enumerate() {
        let prev = phi.clone();
        for i in 0..k {
            phi[i] = prev[i] - kk * prev[k - 1 - i];
        }
        phi.push(kk);
    }
    phi
}

/// Published coefficients `(a, b)` for an `N = 3` model, compared to three decimals.
pub fn assert_coefficients(model: &covarfit::ArModel, a: [f64; 3], b: f64, tol: f64) {
    for (i, (&got, want)) in model.a().iter().zip(a).enumerate() {
        assert_close(got, want, tol, &format!("a[{i}]"));
    }
    assert_close(model.b(), b, tol, "b");
}
