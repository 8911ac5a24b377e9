//! Nonclassicality invariants of Gaussian optical states.
//!
//! Two- and three-mode Gaussian states are stored by their normally ordered
//! second moments ([`MomentMatrices`]). Passive (photon-number preserving)
//! linear optics acts on them through [`PassiveUnitary`]. The [`invariants`]
//! module computes local nonclassicality invariants, the entanglement
//! invariant, logarithmic negativity and the global nonclassicality
//! invariant, which is conserved by every passive transformation of a
//! two-mode state and of a pure three-mode state.
//!
//! Vacuum quadrature variance is 1/2, with `x = (a + a†)/√2` and
//! `p = (a − a†)/(i√2)`.

pub mod cli;
pub mod covariance;
mod error;
pub mod format;
pub mod invariants;
pub mod io;
pub mod passive;
pub mod scenarios;

pub use covariance::{MomentMatrices, Physicality, QuadratureCM, StateSpec, SymplecticForm, C64};
pub use error::{Error, Result};
pub use invariants::{InvariantReport2, InvariantReport3};
pub use passive::{Network, NetworkElement, PassiveUnitary};
pub use scenarios::{Scenario, SweepTable, ThreeModeSchemeResult, TwinBeamBsResult};
