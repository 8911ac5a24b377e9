#![allow(dead_code)]

use gaussinv::{MomentMatrices, PassiveUnitary, QuadratureCM, SymplecticForm, C64};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random n-mode Gaussian state `σ = S diag(ν) Sᵀ` with `S = O₂ Z O₁`
/// (Bloch–Messiah form). With `mixed = false` every `ν_k = 1/2`.
pub fn random_state<R: Rng>(n: usize, rng: &mut R, mixed: bool) -> MomentMatrices {
    let o1 = PassiveUnitary::haar_random_with(n, rng).unwrap().orthosymplectic();
    let o2 = PassiveUnitary::haar_random_with(n, rng).unwrap().orthosymplectic();
    let mut z = DMatrix::zeros(2 * n, 2 * n);
    let mut nu = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        let r: f64 = rng.random_range(-1.0..1.0);
        z[(2 * k, 2 * k)] = r.exp();
        z[(2 * k + 1, 2 * k + 1)] = (-r).exp();
        let v = if mixed { 0.5 + rng.random_range(0.0..2.0) } else { 0.5 };
        nu[(2 * k, 2 * k)] = v;
        nu[(2 * k + 1, 2 * k + 1)] = v;
    }
    let s = &o2 * &z * &o1;
    let sigma = &s * nu * s.transpose();
    MomentMatrices::from_quadrature(&QuadratureCM::new(sigma).unwrap()).unwrap()
}

/// Random physical single-mode moments with `|C|² <= B(B + 1)`.
pub fn random_single_mode<R: Rng>(rng: &mut R) -> MomentMatrices {
    let b: f64 = rng.random_range(0.0..5.0);
    let mag = rng.random_range(0.0..=1.0) * (b * (b + 1.0)).sqrt();
    let phase: f64 = rng.random_range(-3.2..3.2);
    MomentMatrices::new(
        DMatrix::from_element(1, 1, C64::new(b, 0.0)),
        DMatrix::from_element(1, 1, C64::from_polar(mag, phase)),
    )
    .unwrap()
}

/// Symplectic eigenvalues as `|λ|` over the eigenvalues of the real matrix
/// Ωσ (real Schur form), one per ± pair, ascending.
pub fn oracle_symplectic_eigenvalues(sigma: &DMatrix<f64>) -> Vec<f64> {
    let n = sigma.nrows() / 2;
    let omega = SymplecticForm::new(n);
    let ev = (omega.matrix() * sigma).complex_eigenvalues();
    let mut mags: Vec<f64> = ev.iter().map(|z| z.im.abs()).collect();
    mags.sort_by(f64::total_cmp);
    mags.into_iter().step_by(2).collect()
}

/// d₋ of a two-mode state from the oracle on ΛσΛ, Λ = diag(1, 1, 1, −1).
pub fn oracle_pt_d_minus(state: &MomentMatrices) -> f64 {
    let mut sigma = state.to_quadrature().matrix().clone();
    for i in 0..4 {
        if i != 3 {
            sigma[(i, 3)] = -sigma[(i, 3)];
            sigma[(3, i)] = -sigma[(3, i)];
        }
    }
    oracle_symplectic_eigenvalues(&sigma)[0]
}

pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax()
}

pub fn max_abs_diff_c(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    (a - b).iter().fold(0.0, |m, z| m.max(z.norm()))
}

pub fn rel_dev(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}
