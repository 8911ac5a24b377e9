//! JSON schemas for states.
//!
//! Canonical form:
//!
//! ```json
//! { "modes": 2, "N": [[{"re": 1, "im": 0}, ...], ...], "M": [[...], ...] }
//! ```
//!
//! Two-mode convenience form (missing complex entries default to 0):
//!
//! ```json
//! { "B1": 1, "B2": 1, "C1": {"re": 0, "im": 0}, "C2": 0, "D12": {"re": 1.414, "im": 0}, "Dbar12": 0 }
//! ```
//!
//! Complex entries may also be written as plain numbers.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::covariance::{MomentMatrices, C64};
use crate::error::{Error, Result};
use crate::format::{round_sig, SIG_DIGITS};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
enum ComplexJson {
    Real(f64),
    Complex {
        re: f64,
        #[serde(default)]
        im: f64,
    },
}

impl Default for ComplexJson {
    fn default() -> Self {
        ComplexJson::Real(0.0)
    }
}

impl From<ComplexJson> for C64 {
    fn from(z: ComplexJson) -> Self {
        match z {
            ComplexJson::Real(re) => C64::new(re, 0.0),
            ComplexJson::Complex { re, im } => C64::new(re, im),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FullForm {
    modes: usize,
    #[serde(rename = "N")]
    normal: Vec<Vec<ComplexJson>>,
    #[serde(rename = "M")]
    anomalous: Vec<Vec<ComplexJson>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct TwoModeForm {
    B1: f64,
    B2: f64,
    #[serde(default)]
    C1: ComplexJson,
    #[serde(default)]
    C2: ComplexJson,
    #[serde(default)]
    D12: ComplexJson,
    #[serde(default)]
    Dbar12: ComplexJson,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum StateDocument {
    Full(FullForm),
    TwoMode(TwoModeForm),
}

fn to_matrix(rows: &[Vec<ComplexJson>], n: usize, name: &str) -> Result<DMatrix<C64>> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::MalformedState(format!("{name} must be a {n}x{n} matrix")));
    }
    Ok(DMatrix::from_fn(n, n, |r, c| rows[r][c].into()))
}

/// Parses either JSON state form.
pub fn state_from_json(text: &str) -> Result<MomentMatrices> {
    let doc: StateDocument = serde_json::from_str(text).map_err(|e| {
        Error::Parse(format!(
            "state JSON must be {{modes, N, M}} or {{B1, B2, C1, C2, D12, Dbar12}}: {e}"
        ))
    })?;
    match doc {
        StateDocument::Full(f) => {
            if f.modes == 0 {
                return Err(Error::MalformedState("modes must be positive".into()));
            }
            let normal = to_matrix(&f.normal, f.modes, "N")?;
            let anomalous = to_matrix(&f.anomalous, f.modes, "M")?;
            MomentMatrices::new(normal, anomalous)
        }
        StateDocument::TwoMode(t) => {
            let dbar: C64 = t.Dbar12.into();
            let d: C64 = t.D12.into();
            let mut normal = DMatrix::zeros(2, 2);
            normal[(0, 0)] = C64::new(t.B1, 0.0);
            normal[(1, 1)] = C64::new(t.B2, 0.0);
            normal[(0, 1)] = -dbar;
            normal[(1, 0)] = -dbar.conj();
            let mut anomalous = DMatrix::zeros(2, 2);
            anomalous[(0, 0)] = t.C1.into();
            anomalous[(1, 1)] = t.C2.into();
            anomalous[(0, 1)] = d;
            anomalous[(1, 0)] = d;
            MomentMatrices::new(normal, anomalous)
        }
    }
}

fn matrix_json(m: &DMatrix<C64>, digits: Option<usize>) -> Value {
    let r = |x: f64| digits.map_or(x, |d| round_sig(x, d));
    Value::Array(
        (0..m.nrows())
            .map(|i| {
                Value::Array(
                    (0..m.ncols())
                        .map(|j| json!({ "re": r(m[(i, j)].re), "im": r(m[(i, j)].im) }))
                        .collect(),
                )
            })
            .collect(),
    )
}

/// Canonical `{modes, N, M}` form at full precision.
pub fn state_to_json(state: &MomentMatrices) -> Value {
    state_json_impl(state, None)
}

/// Canonical form with every number rounded to 12 significant digits.
pub fn state_to_json_rounded(state: &MomentMatrices) -> Value {
    state_json_impl(state, Some(SIG_DIGITS))
}

fn state_json_impl(state: &MomentMatrices, digits: Option<usize>) -> Value {
    json!({
        "modes": state.modes(),
        "N": matrix_json(state.normal(), digits),
        "M": matrix_json(state.anomalous(), digits),
    })
}
