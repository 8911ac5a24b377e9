//! Nonclassicality quantifiers of two- and three-mode Gaussian states.
//!
//! Local quantities come from the single-mode blocks of the normally ordered
//! moments (`I_j = B_j² − |C_j|²`, Lee depth `τ_j = |C_j| − B_j`). The
//! two-mode quantities use the determinants of the symmetrically ordered
//! covariance matrix `A_S = [[S₁, S₁₂], [S₁₂ᵀ, S₂]]`:
//!
//! ```text
//! I_S1 = det S₁   I_S2 = det S₂   I_S3 = det S₁₂   I_S4 = det A_S
//! Δ̃_S = I_S1 + I_S2 − 2 I_S3
//! EI   = Δ̃_S/4 − I_S4 − 1/16          (> 0 iff PPT is violated)
//! GNI  = LNI₁ + LNI₂ + 2 EI             (conserved by passive unitaries)
//! ```
//!
//! The entanglement invariant is signed; separable states give `EI <= 0`.

use serde::Serialize;

use crate::covariance::{MomentMatrices, TOL_PHYS};
use crate::error::{Error, Result};

/// Threshold above which [`InvariantReport2::entangled`] is set.
pub const TOL_ENT: f64 = 1e-12;

// Radicands in [-RADICAND_TOL * scale, 0) are treated as 0.
const RADICAND_TOL: f64 = 1e-12;

/// Mode pairs of a three-mode state, in report order (12), (13), (23).
pub const PAIRS3: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

fn check_modes(state: &MomentMatrices, expected: usize) -> Result<()> {
    if state.modes() == expected {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected,
            found: state.modes(),
        })
    }
}

fn check_mode_index(state: &MomentMatrices, j: usize) -> Result<()> {
    if j < state.modes() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "mode {j} out of range for a {}-mode state",
            state.modes()
        )))
    }
}

/// `I_j = B_j² − |C_j|²`; negative values signal local nonclassicality.
pub fn local_determinant(state: &MomentMatrices, j: usize) -> Result<f64> {
    check_mode_index(state, j)?;
    Ok(state.b(j).powi(2) - state.c(j).norm_sqr())
}

/// Local nonclassicality invariant `LNI_j = −I_j`.
pub fn local_nonclassicality(state: &MomentMatrices, j: usize) -> Result<f64> {
    Ok(-local_determinant(state, j)?)
}

/// Signed Lee nonclassicality depth `τ_j = |C_j| − B_j`.
pub fn lee_depth(state: &MomentMatrices, j: usize) -> Result<f64> {
    check_mode_index(state, j)?;
    Ok(state.c(j).norm() - state.b(j))
}

/// Determinant invariants of the symmetric-ordering covariance matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimonInvariants {
    pub is1: f64,
    pub is2: f64,
    pub is3: f64,
    pub is4: f64,
    /// `I_S1 + I_S2 − 2 I_S3`
    pub delta_tilde_s: f64,
    /// `I_S1 + I_S2 + 2 I_S3`
    pub delta_s: f64,
}

pub fn simon_invariants(state: &MomentMatrices) -> Result<SimonInvariants> {
    check_modes(state, 2)?;
    let q = state.to_quadrature();
    let is1 = q.block(0, 0).determinant();
    let is2 = q.block(1, 1).determinant();
    let is3 = q.block(0, 1).determinant();
    let is4 = q.determinant();
    Ok(SimonInvariants {
        is1,
        is2,
        is3,
        is4,
        delta_tilde_s: is1 + is2 - 2.0 * is3,
        delta_s: is1 + is2 + 2.0 * is3,
    })
}

fn ei_from_simon(s: &SimonInvariants) -> f64 {
    s.delta_tilde_s / 4.0 - s.is4 - 1.0 / 16.0
}

/// Entanglement invariant `EI = Δ̃_S/4 − I_S4 − 1/16`.
pub fn entanglement_invariant(state: &MomentMatrices) -> Result<f64> {
    Ok(ei_from_simon(&simon_invariants(state)?))
}

fn clamp_radicand(x: f64, scale: f64, what: &str) -> Result<f64> {
    if x >= 0.0 {
        Ok(x)
    } else if x >= -RADICAND_TOL * scale.max(1.0) {
        Ok(0.0)
    } else {
        Err(Error::NumericalDomain(format!("negative radicand {x:.3e} in {what}")))
    }
}

/// `d₋ = √((x − √(x² − 4 I_S4)) / 2)` for `x = Δ̃_S` or `x = I'`.
///
/// The inner difference is evaluated as `4 I_S4 / (x + √(x² − 4 I_S4))`,
/// which is the same number without the cancellation at large `x`.
pub fn d_minus_formula(x: f64, is4: f64) -> Result<f64> {
    if !x.is_finite() || !is4.is_finite() {
        return Err(Error::NonFinite("d_minus arguments"));
    }
    let disc = clamp_radicand(x * x - 4.0 * is4, x * x, "d_minus discriminant")?;
    let root = disc.sqrt();
    let inner = if x > 0.0 { 4.0 * is4 / (x + root) } else { x - root };
    let inner = clamp_radicand(inner, x.abs(), "d_minus")?;
    Ok((0.5 * inner).sqrt())
}

/// Smallest symplectic eigenvalue of the partially transposed state, from
/// `Δ̃_S` and `I_S4`.
pub fn d_minus(state: &MomentMatrices) -> Result<f64> {
    let s = simon_invariants(state)?;
    d_minus_formula(s.delta_tilde_s, s.is4)
}

/// The same eigenvalue from `EI` and `I_S4` through
/// `I' = 4 I_S4 + 4 EI + 1/4`.
pub fn d_minus_from_ei(ei: f64, is4: f64) -> Result<f64> {
    d_minus_formula(4.0 * is4 + 4.0 * ei + 0.25, is4)
}

/// Smallest symplectic eigenvalue of `ΛσΛ`, `Λ = diag(1, 1, 1, −1)`, by
/// direct diagonalization.
pub fn d_minus_partial_transpose(state: &MomentMatrices) -> Result<f64> {
    check_modes(state, 2)?;
    let nu = state.to_quadrature().partially_transposed(1).symplectic_eigenvalues()?;
    Ok(nu[0])
}

/// `E_N = max(0, −ln 2d₋)`.
pub fn log_negativity(state: &MomentMatrices) -> Result<f64> {
    Ok(log_negativity_from_d_minus(d_minus(state)?))
}

pub fn log_negativity_from_d_minus(d_minus: f64) -> f64 {
    (-(2.0 * d_minus).ln()).max(0.0)
}

/// Logarithmic negativity of a pure state from its entanglement invariant:
/// `max(0, ln(2√EI + √(1 + 4EI)))`.
pub fn log_negativity_pure(ei: f64) -> f64 {
    if ei <= 0.0 {
        return 0.0;
    }
    (2.0 * ei.sqrt() + (1.0 + 4.0 * ei).sqrt()).ln().max(0.0)
}

fn ensure_finite<const K: usize>(values: [f64; K], what: &'static str) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Every scalar quantifier of a two-mode state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvariantReport2 {
    #[serde(rename = "I1")]
    pub i1: f64,
    #[serde(rename = "I2")]
    pub i2: f64,
    pub tau1: f64,
    pub tau2: f64,
    #[serde(rename = "LNI1")]
    pub lni1: f64,
    #[serde(rename = "LNI2")]
    pub lni2: f64,
    #[serde(rename = "IS1")]
    pub is1: f64,
    #[serde(rename = "IS2")]
    pub is2: f64,
    #[serde(rename = "IS3")]
    pub is3: f64,
    #[serde(rename = "IS4")]
    pub is4: f64,
    #[serde(rename = "DeltaTildeS")]
    pub delta_tilde_s: f64,
    #[serde(rename = "EI")]
    pub ei: f64,
    /// `I_S4 − Δ̃_S/4 + 1/16 = −EI`.
    pub ppt_witness: f64,
    pub entangled: bool,
    pub d_minus: f64,
    #[serde(rename = "E_N")]
    pub e_n: f64,
    /// `−ln 2d₋` before clipping at zero.
    #[serde(rename = "E_N_unclipped")]
    pub e_n_unclipped: f64,
    /// `I₁ + I₂ + 2 I_S3`, normal-ordering global invariant.
    #[serde(rename = "Delta")]
    pub delta: f64,
    #[serde(rename = "DeltaS")]
    pub delta_s: f64,
    #[serde(rename = "GNI")]
    pub gni: f64,
}

impl InvariantReport2 {
    /// GNI rebuilt from global invariants only:
    /// `−Δ + Δ_S/2 − 2 I_S4 − 1/8`.
    pub fn gni_from_global_invariants(&self) -> f64 {
        -self.delta + 0.5 * self.delta_s - 2.0 * self.is4 - 0.125
    }
}

/// Full two-mode report. The state must be physical.
pub fn gni_two_mode(state: &MomentMatrices) -> Result<InvariantReport2> {
    check_modes(state, 2)?;
    state.ensure_physical(TOL_PHYS)?;
    let i1 = local_determinant(state, 0)?;
    let i2 = local_determinant(state, 1)?;
    let s = simon_invariants(state)?;
    let ei = ei_from_simon(&s);
    let dm = d_minus_formula(s.delta_tilde_s, s.is4)?;
    let e_n_unclipped = -(2.0 * dm).ln();
    let report = InvariantReport2 {
        i1,
        i2,
        tau1: lee_depth(state, 0)?,
        tau2: lee_depth(state, 1)?,
        lni1: -i1,
        lni2: -i2,
        is1: s.is1,
        is2: s.is2,
        is3: s.is3,
        is4: s.is4,
        delta_tilde_s: s.delta_tilde_s,
        ei,
        ppt_witness: -ei,
        entangled: ei > TOL_ENT,
        d_minus: dm,
        e_n: e_n_unclipped.max(0.0),
        e_n_unclipped,
        delta: i1 + i2 + 2.0 * s.is3,
        delta_s: s.delta_s,
        gni: -i1 - i2 + 2.0 * ei,
    };
    let r = &report;
    ensure_finite(
        [
            r.i1,
            r.i2,
            r.tau1,
            r.tau2,
            r.is1,
            r.is2,
            r.is3,
            r.is4,
            r.delta_tilde_s,
            r.ei,
            r.d_minus,
            r.e_n,
            r.e_n_unclipped,
            r.delta,
            r.delta_s,
            r.gni,
        ],
        "two-mode invariant report",
    )?;
    Ok(report)
}

/// Global nonclassicality invariant `LNI₁ + LNI₂ + 2 EI` of a two-mode
/// state, without the physicality check or the rest of the report.
pub fn gni(state: &MomentMatrices) -> Result<f64> {
    check_modes(state, 2)?;
    Ok(-local_determinant(state, 0)? - local_determinant(state, 1)? + 2.0 * entanglement_invariant(state)?)
}

/// Three-mode report. Pair-indexed arrays follow [`PAIRS3`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvariantReport3 {
    #[serde(rename = "LNI")]
    pub lni: [f64; 3],
    #[serde(rename = "EI_pair")]
    pub ei_pair: [f64; 3],
    #[serde(rename = "GNI3")]
    pub gni3: f64,
    /// `Σ I_j + 2 Σ det S_ij`
    #[serde(rename = "Delta3")]
    pub delta3: f64,
    /// `Σ det S_j + 2 Σ det S_ij`
    #[serde(rename = "DeltaS3")]
    pub delta_s3: f64,
    /// `2 Σ det A_S,ij − Σ det S_k / 2`
    #[serde(rename = "K")]
    pub k: f64,
    /// `det S_k` per mode.
    #[serde(rename = "IS_mode")]
    pub is_mode: [f64; 3],
    /// `det A_S,ij` per pair.
    #[serde(rename = "IS_pair")]
    pub is_pair: [f64; 3],
}

impl InvariantReport3 {
    /// `−Δ⁽³⁾ + Δ_S⁽³⁾/2 − K − 3/8`, equal to `GNI3` for every state.
    pub fn gni_from_global_invariants(&self) -> f64 {
        -self.delta3 + 0.5 * self.delta_s3 - self.k - 0.375
    }
}

/// Three-mode report built from single-mode and pairwise reductions. The
/// state must be physical.
pub fn gni_three_mode(state: &MomentMatrices) -> Result<InvariantReport3> {
    check_modes(state, 3)?;
    state.ensure_physical(TOL_PHYS)?;
    let q = state.to_quadrature();
    let mut lni = [0.0; 3];
    let mut is_mode = [0.0; 3];
    for j in 0..3 {
        lni[j] = local_nonclassicality(&state.reduce(&[j])?, 0)?;
        is_mode[j] = q.block(j, j).determinant();
    }
    let mut ei_pair = [0.0; 3];
    let mut is_pair = [0.0; 3];
    let mut cross = 0.0;
    for (p, &(i, j)) in PAIRS3.iter().enumerate() {
        let pair = state.reduce(&[i, j])?;
        ei_pair[p] = entanglement_invariant(&pair)?;
        is_pair[p] = q.sub(&[i, j]).determinant();
        cross += q.block(i, j).determinant();
    }
    let sum_lni: f64 = lni.iter().sum();
    let sum_is: f64 = is_mode.iter().sum();
    let report = InvariantReport3 {
        lni,
        ei_pair,
        gni3: sum_lni + 2.0 * ei_pair.iter().sum::<f64>(),
        delta3: -sum_lni + 2.0 * cross,
        delta_s3: sum_is + 2.0 * cross,
        k: 2.0 * is_pair.iter().sum::<f64>() - 0.5 * sum_is,
        is_mode,
        is_pair,
    };
    let r = &report;
    ensure_finite(
        [
            r.lni[0],
            r.lni[1],
            r.lni[2],
            r.ei_pair[0],
            r.ei_pair[1],
            r.ei_pair[2],
            r.gni3,
            r.delta3,
            r.delta_s3,
            r.k,
        ],
        "three-mode invariant report",
    )?;
    Ok(report)
}

/// `Σ LNI_j + 2 Σ EI_pair` of a three-mode state, without the physicality
/// check.
pub fn gni3(state: &MomentMatrices) -> Result<f64> {
    check_modes(state, 3)?;
    pairwise_budget(state)
}

/// `Σ_j LNI_j + 2 Σ_{j<k} EI_jk` for any number of modes.
///
/// Only for two modes, and for pure three-mode states, is this a passive
/// invariant; beyond that it is a diagnostic.
pub fn pairwise_budget(state: &MomentMatrices) -> Result<f64> {
    let n = state.modes();
    let mut total = 0.0;
    for j in 0..n {
        total -= local_determinant(state, j)?;
    }
    for j in 0..n {
        for k in j + 1..n {
            total += 2.0 * entanglement_invariant(&state.reduce(&[j, k])?)?;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn thermal_pair(b1: f64, b2: f64) -> MomentMatrices {
        MomentMatrices::product(&[
            MomentMatrices::thermal(b1).unwrap(),
            MomentMatrices::thermal(b2).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn local_quantities() {
        let th = MomentMatrices::thermal(0.8).unwrap();
        assert_abs_diff_eq!(local_determinant(&th, 0).unwrap(), 0.64, epsilon = 1e-15);
        assert_abs_diff_eq!(lee_depth(&th, 0).unwrap(), -0.8, epsilon = 1e-15);
        assert_eq!(lee_depth(&MomentMatrices::vacuum(1).unwrap(), 0).unwrap(), 0.0);

        let twb = MomentMatrices::twin_beam(1.5).unwrap();
        assert_abs_diff_eq!(local_determinant(&twb, 1).unwrap(), 2.25, epsilon = 1e-15);

        let r: f64 = 0.6;
        let sq = MomentMatrices::squeezed_thermal(0.0, r, 0.0).unwrap();
        assert_abs_diff_eq!(local_determinant(&sq, 0).unwrap(), -r.sinh().powi(2), epsilon = 1e-14);
        assert!(local_determinant(&sq, 1).is_err());
    }

    #[test]
    fn simon_invariants_examples() {
        let pure = simon_invariants(&MomentMatrices::twin_beam(1.0).unwrap()).unwrap();
        assert_abs_diff_eq!(pure.is1, 2.25, epsilon = 1e-14);
        assert_abs_diff_eq!(pure.is2, 2.25, epsilon = 1e-14);
        assert_abs_diff_eq!(pure.is3, -2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(pure.is4, 1.0 / 16.0, epsilon = 1e-14);
        assert_abs_diff_eq!(pure.delta_s, 0.5, epsilon = 1e-14);

        let vac = simon_invariants(&MomentMatrices::vacuum(2).unwrap()).unwrap();
        assert_eq!((vac.is1, vac.is2, vac.is3), (0.25, 0.25, 0.0));

        assert!(matches!(
            simon_invariants(&MomentMatrices::vacuum(3).unwrap()),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn entanglement_invariant_examples() {
        for bp in [0.0, 0.4, 1.0, 3.0] {
            let ei = entanglement_invariant(&MomentMatrices::twin_beam(bp).unwrap()).unwrap();
            assert_abs_diff_eq!(ei, bp * bp + bp, epsilon = 1e-12);
        }
        let (b1, b2) = (0.7, 2.0);
        let ei = entanglement_invariant(&thermal_pair(b1, b2)).unwrap();
        // a product state sits on the separable side: EI = −(B₁² + B₁)(B₂² + B₂)
        assert_abs_diff_eq!(ei, -(b1 * b1 + b1) * (b2 * b2 + b2), epsilon = 1e-13);
        assert_eq!(
            entanglement_invariant(&MomentMatrices::vacuum(2).unwrap()).unwrap(),
            0.0
        );
    }

    #[test]
    fn d_minus_examples() {
        assert_abs_diff_eq!(
            d_minus(&MomentMatrices::vacuum(2).unwrap()).unwrap(),
            0.5,
            epsilon = 1e-15
        );
        // frozen from a direct eigen-decomposition of i Ω (ΛσΛ)
        let twb = MomentMatrices::twin_beam(1.0).unwrap();
        assert_abs_diff_eq!(d_minus(&twb).unwrap(), 0.085_786_437_626_904_9, epsilon = 1e-14);
        assert_abs_diff_eq!(
            d_minus_partial_transpose(&twb).unwrap(),
            0.085_786_437_626_904_9,
            epsilon = 1e-12
        );
        for (b1, b2) in [(0.3, 1.1), (2.0, 0.0), (1.0, 1.0)] {
            let s = thermal_pair(b1, b2);
            assert_abs_diff_eq!(d_minus(&s).unwrap(), f64::min(b1, b2) + 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn d_minus_formula_domain() {
        assert!(matches!(d_minus_formula(0.1, 1.0), Err(Error::NumericalDomain(_))));
        // exactly on the boundary
        assert_abs_diff_eq!(d_minus_formula(0.5, 1.0 / 16.0).unwrap(), 0.5, epsilon = 1e-15);
        assert!(d_minus_formula(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn log_negativity_examples() {
        assert_eq!(log_negativity(&MomentMatrices::vacuum(2).unwrap()).unwrap(), 0.0);
        let twb = MomentMatrices::twin_beam(1.0).unwrap();
        let expect = 2.0 * (1.0 + 2f64.sqrt()).ln();
        assert_abs_diff_eq!(log_negativity(&twb).unwrap(), expect, epsilon = 1e-12);
        assert_abs_diff_eq!(log_negativity_pure(2.0), expect, epsilon = 1e-14);
        assert_eq!(log_negativity(&thermal_pair(0.2, 0.9)).unwrap(), 0.0);
        assert_eq!(log_negativity_pure(-0.5), 0.0);
    }

    #[test]
    fn two_mode_report() {
        let r = gni_two_mode(&MomentMatrices::twin_beam(2.0).unwrap()).unwrap();
        assert_abs_diff_eq!(r.gni, 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.gni_from_global_invariants(), 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.gni, -r.delta, epsilon = 1e-12);
        assert!(r.entangled);
        assert_eq!(r.ppt_witness, -r.ei);

        let v = gni_two_mode(&MomentMatrices::vacuum(2).unwrap()).unwrap();
        assert_eq!(
            (v.i1, v.i2, v.tau1, v.tau2, v.lni1, v.lni2),
            (0.0, 0.0, 0.0, 0.0, -0.0, -0.0)
        );
        assert_eq!((v.is1, v.is2, v.is3), (0.25, 0.25, 0.0));
        assert_abs_diff_eq!(v.is4, 1.0 / 16.0, epsilon = 1e-16);
        assert_abs_diff_eq!(v.ei, 0.0, epsilon = 1e-16);
        assert_abs_diff_eq!(v.gni, 0.0, epsilon = 1e-16);
        assert_abs_diff_eq!(v.d_minus, 0.5, epsilon = 1e-15);
        assert_eq!(v.e_n, 0.0);
        assert!(!v.entangled);
    }

    #[test]
    fn noisy_twin_beam_gni_frozen() {
        // brute-force substitution: B = 1.2, |D|² = 2, det blocks 2.89 / -2,
        // det A_S = 0.7921 → EI = 1.5904, GNI = -2.88 + 3.1808
        let r = gni_two_mode(&MomentMatrices::noisy_twin_beam(1.0, 0.2, 0.2).unwrap()).unwrap();
        assert_abs_diff_eq!(r.ei, 1.5904, epsilon = 1e-12);
        assert_abs_diff_eq!(r.gni, 0.3008, epsilon = 1e-12);
        assert_abs_diff_eq!(r.gni_from_global_invariants(), 0.3008, epsilon = 1e-12);
        assert_abs_diff_eq!(r.d_minus, 0.285_786_437_626_904_9, epsilon = 1e-13);
    }

    #[test]
    fn unphysical_report_rejected() {
        let bad = MomentMatrices::product(&[
            MomentMatrices::new(
                nalgebra::DMatrix::zeros(1, 1),
                nalgebra::DMatrix::from_element(1, 1, crate::C64::new(0.6, 0.0)),
            )
            .unwrap(),
            MomentMatrices::vacuum(1).unwrap(),
        ])
        .unwrap();
        assert!(matches!(gni_two_mode(&bad), Err(Error::Unphysical { .. })));
    }

    #[test]
    fn three_mode_reports() {
        let r = gni_three_mode(&MomentMatrices::vacuum(3).unwrap()).unwrap();
        for v in r.lni.iter().chain(r.ei_pair.iter()) {
            assert_abs_diff_eq!(*v, 0.0, epsilon = 1e-16);
        }
        assert_abs_diff_eq!(r.gni3, 0.0, epsilon = 1e-16);
        assert_abs_diff_eq!(r.k, 0.0, epsilon = 1e-16);

        let bp = 1.7;
        let st = MomentMatrices::product(&[
            MomentMatrices::twin_beam(bp).unwrap(),
            MomentMatrices::vacuum(1).unwrap(),
        ])
        .unwrap();
        let r = gni_three_mode(&st).unwrap();
        assert_abs_diff_eq!(r.gni3, 2.0 * bp, epsilon = 1e-12);
        assert_abs_diff_eq!(r.gni3, -r.delta3, epsilon = 1e-12);
        assert_abs_diff_eq!(r.delta_s3, 0.75, epsilon = 1e-12);
        assert_abs_diff_eq!(r.k, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.gni_from_global_invariants(), r.gni3, epsilon = 1e-12);
        assert_abs_diff_eq!(r.ei_pair[0], bp * bp + bp, epsilon = 1e-12);
        assert!(matches!(
            gni_three_mode(&MomentMatrices::twin_beam(1.0).unwrap()),
            Err(Error::DimensionMismatch { expected: 3, found: 2 })
        ));
        assert_abs_diff_eq!(gni3(&st).unwrap(), r.gni3, epsilon = 1e-15);
    }
}
