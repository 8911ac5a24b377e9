//! Worked examples: a twin beam at a beam splitter, and the same beam split
//! once more against vacuum. Each comes as a closed form and as the
//! simulated pipeline (constructor → passive network → invariants).

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use crate::covariance::MomentMatrices;
use crate::error::{Error, Result};
use crate::format::{fmt_sig, SIG_DIGITS};
use crate::invariants;
use crate::passive::PassiveUnitary;

fn check_params(bp: f64, t: f64) -> Result<()> {
    if !(bp.is_finite() && bp >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "B_p must be finite and >= 0, got {bp}"
        )));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParameter(format!("T must lie in [0, 1], got {t}")));
    }
    Ok(())
}

/// Half-width of the transmissivity window around 1/2 in which the
/// beam-splitter outputs are locally nonclassical.
pub fn nonclassicality_window_halfwidth(bp: f64) -> f64 {
    0.5 / (bp + 1.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwinBeamBsResult {
    #[serde(rename = "B_p")]
    pub bp: f64,
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "LNI1")]
    pub lni1: f64,
    #[serde(rename = "LNI2")]
    pub lni2: f64,
    #[serde(rename = "EI")]
    pub ei: f64,
    #[serde(rename = "GNI")]
    pub gni: f64,
    pub ncl_window_halfwidth: f64,
}

impl TwinBeamBsResult {
    pub const FIELDS: [&'static str; 5] = ["LNI1", "LNI2", "EI", "GNI", "ncl_window_halfwidth"];

    pub fn values(&self) -> Vec<f64> {
        vec![self.lni1, self.lni2, self.ei, self.gni, self.ncl_window_halfwidth]
    }
}

/// Closed form for a twin beam mixed on a beam splitter of transmissivity
/// `t`:
///
/// ```text
/// LNI_j = −B_p² + 4T(1−T)(B_p² + B_p)
/// EI    = (2T − 1)²(B_p² + B_p)
/// GNI   = 2 B_p
/// ```
pub fn twin_beam_at_bs(bp: f64, t: f64) -> Result<TwinBeamBsResult> {
    check_params(bp, t)?;
    let pairs = bp * bp + bp;
    let lni = -bp * bp + 4.0 * t * (1.0 - t) * pairs;
    Ok(TwinBeamBsResult {
        bp,
        t,
        lni1: lni,
        lni2: lni,
        ei: (2.0 * t - 1.0).powi(2) * pairs,
        gni: 2.0 * bp,
        ncl_window_halfwidth: nonclassicality_window_halfwidth(bp),
    })
}

/// Same quantities from `twin_beam(bp)` sent through `BS(t)`.
pub fn twin_beam_at_bs_simulated(bp: f64, t: f64) -> Result<TwinBeamBsResult> {
    check_params(bp, t)?;
    let out = PassiveUnitary::beam_splitter(2, 0, 1, t, 0.0)?.apply(&MomentMatrices::twin_beam(bp)?)?;
    let r = invariants::gni_two_mode(&out)?;
    Ok(TwinBeamBsResult {
        bp,
        t,
        lni1: r.lni1,
        lni2: r.lni2,
        ei: r.ei,
        gni: r.gni,
        ncl_window_halfwidth: nonclassicality_window_halfwidth(bp),
    })
}

/// Pair-indexed arrays use the order (12), (13), (23).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThreeModeSchemeResult {
    #[serde(rename = "B_p")]
    pub bp: f64,
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "LNI")]
    pub lni: [f64; 3],
    #[serde(rename = "EI_pair")]
    pub ei_pair: [f64; 3],
    #[serde(rename = "GNI3")]
    pub gni3: f64,
    /// `LNI₂ + LNI₃ + 2 EI₂₃`, the estimate available to a scheme that only
    /// sees modes 2 and 3.
    pub asboth_estimate: f64,
}

impl ThreeModeSchemeResult {
    pub const FIELDS: [&'static str; 8] = [
        "LNI1",
        "LNI2",
        "LNI3",
        "EI12",
        "EI13",
        "EI23",
        "GNI3",
        "asboth_estimate",
    ];

    pub fn values(&self) -> Vec<f64> {
        vec![
            self.lni[0],
            self.lni[1],
            self.lni[2],
            self.ei_pair[0],
            self.ei_pair[1],
            self.ei_pair[2],
            self.gni3,
            self.asboth_estimate,
        ]
    }
}

/// The two-beam-splitter network: `BS(t)` on modes (1, 2), then a balanced
/// splitter on modes (2, 3).
pub fn three_mode_network(t: f64) -> Result<PassiveUnitary> {
    let first = PassiveUnitary::beam_splitter(3, 0, 1, t, 0.0)?;
    let second = PassiveUnitary::beam_splitter(3, 1, 2, 0.5, 0.0)?;
    second.compose(&first)
}

/// Output state of the two-beam-splitter scheme for `twin_beam(bp) ⊗ vacuum`.
pub fn three_mode_scheme_state(bp: f64, t: f64) -> Result<MomentMatrices> {
    check_params(bp, t)?;
    let input = MomentMatrices::product(&[MomentMatrices::twin_beam(bp)?, MomentMatrices::vacuum(1)?])?;
    three_mode_network(t)?.apply(&input)
}

/// Simulated two-beam-splitter scheme, evaluated with
/// [`invariants::gni_three_mode`].
pub fn three_mode_scheme(bp: f64, t: f64) -> Result<ThreeModeSchemeResult> {
    let r = invariants::gni_three_mode(&three_mode_scheme_state(bp, t)?)?;
    Ok(ThreeModeSchemeResult {
        bp,
        t,
        lni: r.lni,
        ei_pair: r.ei_pair,
        gni3: r.gni3,
        asboth_estimate: r.lni[1] + r.lni[2] + 2.0 * r.ei_pair[2],
    })
}

/// Closed form of the two-beam-splitter scheme:
///
/// ```text
/// LNI₁ = −B_p² + 4T(1−T)(B_p² + B_p)
/// LNI₂ = LNI₃ = EI₂₃ = LNI₁ / 4
/// EI₁₂ = EI₁₃ = [1/2 − 2T(1−T)](B_p² + B_p)
/// ```
pub fn three_mode_scheme_closed_form(bp: f64, t: f64) -> Result<ThreeModeSchemeResult> {
    check_params(bp, t)?;
    let pairs = bp * bp + bp;
    let lni1 = -bp * bp + 4.0 * t * (1.0 - t) * pairs;
    let quarter = lni1 / 4.0;
    let ei1 = (0.5 - 2.0 * t * (1.0 - t)) * pairs;
    Ok(ThreeModeSchemeResult {
        bp,
        t,
        lni: [lni1, quarter, quarter],
        ei_pair: [ei1, ei1, quarter],
        gni3: 2.0 * bp,
        asboth_estimate: 4.0 * quarter,
    })
}

/// `LNI₂ + LNI₃ + 2 EI₂₃` of the simulated scheme.
pub fn asboth_estimate(bp: f64, t: f64) -> Result<f64> {
    Ok(three_mode_scheme(bp, t)?.asboth_estimate)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    TwinBeamBs,
    ThreeMode,
}

impl Scenario {
    pub fn id(self) -> &'static str {
        match self {
            Scenario::TwinBeamBs => "twinbeam-bs",
            Scenario::ThreeMode => "three-mode",
        }
    }

    pub fn fields(self) -> &'static [&'static str] {
        match self {
            Scenario::TwinBeamBs => &TwinBeamBsResult::FIELDS,
            Scenario::ThreeMode => &ThreeModeSchemeResult::FIELDS,
        }
    }

    fn evaluate(self, bp: f64, t: f64, eval: Evaluation) -> Result<Vec<f64>> {
        Ok(match (self, eval) {
            (Scenario::TwinBeamBs, Evaluation::ClosedForm) => twin_beam_at_bs(bp, t)?.values(),
            (Scenario::TwinBeamBs, Evaluation::Pipeline) => twin_beam_at_bs_simulated(bp, t)?.values(),
            (Scenario::ThreeMode, Evaluation::ClosedForm) => three_mode_scheme_closed_form(bp, t)?.values(),
            (Scenario::ThreeMode, Evaluation::Pipeline) => three_mode_scheme(bp, t)?.values(),
        })
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "twinbeam-bs" => Ok(Scenario::TwinBeamBs),
            "three-mode" => Ok(Scenario::ThreeMode),
            other => Err(Error::Parse(format!(
                "unknown scenario '{other}' (expected twinbeam-bs or three-mode)"
            ))),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// How sweep rows are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Evaluation {
    #[default]
    ClosedForm,
    Pipeline,
}

/// Inclusive arithmetic grid `start, start + step, …, stop`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    values: Vec<f64>,
}

impl Grid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(Error::InvalidParameter("grid bounds must be finite".into()));
        }
        if start == stop {
            return Ok(Self { values: vec![start] });
        }
        if stop < start {
            return Err(Error::InvalidParameter(format!(
                "grid stop {stop} is below start {start}"
            )));
        }
        if step <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "grid step must be positive, got {step}"
            )));
        }
        let intervals = ((stop - start) / step + 1e-9).floor() as usize;
        let mut values: Vec<f64> = (0..=intervals).map(|i| start + i as f64 * step).collect();
        // land exactly on `stop` when it is a grid point
        if let Some(last) = values.last_mut() {
            if (*last - stop).abs() <= 1e-9 * step {
                *last = stop;
            }
        }
        Ok(Self { values })
    }

    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter("empty grid".into()));
        }
        if values.iter().any(|v| !v.is_finite()) || values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter(
                "grid must be finite and strictly increasing".into(),
            ));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl FromStr for Grid {
    type Err = Error;

    /// `a:b:step`, or a single number for a one-point grid.
    fn from_str(s: &str) -> Result<Self> {
        let nums = s
            .split(':')
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("bad grid '{s}': {e}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        match nums.as_slice() {
            [v] => Grid::new(*v, *v, 0.0),
            [a, b, step] => Grid::new(*a, *b, *step),
            _ => Err(Error::Parse(format!("grid '{s}' must be a:b:step or a single value"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub bp: f64,
    pub t: f64,
    pub values: Vec<f64>,
}

/// One row per `(B_p, T)` grid point, `B_p` outermost.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub scenario: Scenario,
    pub rows: Vec<SweepRow>,
}

pub fn sweep(scenario: Scenario, bp_grid: &Grid, t_grid: &Grid, eval: Evaluation) -> Result<SweepTable> {
    if bp_grid.is_empty() || t_grid.is_empty() {
        return Err(Error::InvalidParameter("empty grid".into()));
    }
    let mut rows = Vec::with_capacity(bp_grid.len() * t_grid.len());
    for &bp in bp_grid.values() {
        for &t in t_grid.values() {
            rows.push(SweepRow {
                bp,
                t,
                values: scenario.evaluate(bp, t, eval)?,
            });
        }
    }
    Ok(SweepTable { scenario, rows })
}

impl SweepTable {
    pub fn header(&self) -> Vec<&'static str> {
        let mut h = vec!["scenario", "B_p", "T"];
        h.extend_from_slice(self.scenario.fields());
        h
    }

    /// Writes the table as CSV with 12 significant digits. With
    /// `positive_only`, negative scenario values become empty cells.
    pub fn write_csv<W: Write>(&self, out: W, positive_only: bool) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io_err = |e: csv::Error| Error::Parse(format!("csv write failed: {e}"));
        w.write_record(self.header()).map_err(io_err)?;
        for row in &self.rows {
            let mut record = vec![
                self.scenario.id().to_string(),
                fmt_sig(row.bp, SIG_DIGITS),
                fmt_sig(row.t, SIG_DIGITS),
            ];
            record.extend(row.values.iter().map(|&v| {
                if positive_only && v < 0.0 {
                    String::new()
                } else {
                    fmt_sig(v, SIG_DIGITS)
                }
            }));
            w.write_record(&record).map_err(io_err)?;
        }
        w.flush().map_err(|e| Error::Parse(format!("csv flush failed: {e}")))?;
        Ok(())
    }

    pub fn to_csv_string(&self, positive_only: bool) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf, positive_only)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}
