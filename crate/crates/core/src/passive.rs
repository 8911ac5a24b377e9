//! Passive (photon-number preserving) linear optics.
//!
//! A [`PassiveUnitary`] `U` acts on annihilation operators as `a' = U a`,
//! so the moments transform by congruence:
//!
//! ```text
//! N' = conj(U) N Uᵀ        M' = U M Uᵀ
//! ```

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::covariance::{MomentMatrices, C64};
use crate::error::{Error, Result};

const UNITARITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct PassiveUnitary {
    u: DMatrix<C64>,
}

fn unitarity_residual(u: &DMatrix<C64>) -> f64 {
    let n = u.nrows();
    (u.adjoint() * u - DMatrix::<C64>::identity(n, n))
        .iter()
        .fold(0.0, |a, z| a.max(z.norm()))
}

impl PassiveUnitary {
    /// Wraps `u` after checking `U†U = 1` within 1e-10.
    pub fn new(u: DMatrix<C64>) -> Result<Self> {
        if u.nrows() == 0 || !u.is_square() {
            return Err(Error::InvalidParameter(format!(
                "unitary must be square and non-empty, got {}x{}",
                u.nrows(),
                u.ncols()
            )));
        }
        let residual = unitarity_residual(&u);
        if residual.is_nan() || residual > UNITARITY_TOL {
            return Err(Error::NotUnitary { residual });
        }
        Ok(Self { u })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            u: DMatrix::identity(n, n),
        }
    }

    pub fn modes(&self) -> usize {
        self.u.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.u
    }

    /// Beam splitter of transmissivity `t` between modes `i` and `j`
    /// (zero-based), embedding
    ///
    /// ```text
    /// [[ √T,            e^{iφ}√(1−T) ],
    ///  [ −e^{−iφ}√(1−T), √T          ]]
    /// ```
    pub fn beam_splitter(n: usize, i: usize, j: usize, t: f64, phase: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidParameter(format!(
                "transmissivity must lie in [0, 1], got {t}"
            )));
        }
        if !phase.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "beam-splitter phase must be finite, got {phase}"
            )));
        }
        if i == j {
            return Err(Error::InvalidParameter(format!(
                "beam splitter needs two distinct modes, got {i} twice"
            )));
        }
        check_mode(n, i)?;
        check_mode(n, j)?;
        let tr = C64::new(t.sqrt(), 0.0);
        let rf = (1.0 - t).sqrt();
        let mut u = DMatrix::identity(n, n);
        u[(i, i)] = tr;
        u[(j, j)] = tr;
        u[(i, j)] = C64::from_polar(rf, phase);
        u[(j, i)] = -C64::from_polar(rf, -phase);
        Ok(Self { u })
    }

    /// Phase shift `e^{iθ}` on mode `j`.
    pub fn phase_shifter(n: usize, j: usize, theta: f64) -> Result<Self> {
        check_mode(n, j)?;
        if !theta.is_finite() {
            return Err(Error::InvalidParameter(format!("phase must be finite, got {theta}")));
        }
        let mut u = DMatrix::identity(n, n);
        u[(j, j)] = C64::from_polar(1.0, theta);
        Ok(Self { u })
    }

    /// `self · first`: the returned unitary applies `first`, then `self`.
    pub fn compose(&self, first: &PassiveUnitary) -> Result<Self> {
        if self.modes() != first.modes() {
            return Err(Error::DimensionMismatch {
                expected: self.modes(),
                found: first.modes(),
            });
        }
        Ok(Self { u: &self.u * &first.u })
    }

    pub fn inverse(&self) -> Self {
        Self { u: self.u.adjoint() }
    }

    /// Haar-random element of U(n), reproducible from `seed` (ChaCha8).
    pub fn haar_random(n: usize, seed: u64) -> Result<Self> {
        Self::haar_random_with(n, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    /// Haar-random element of U(n) drawn from `rng`.
    ///
    /// QR of a complex Ginibre matrix, with each column of Q rephased so
    /// that the triangular factor has a positive real diagonal.
    pub fn haar_random_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("haar_random needs n >= 1".into()));
        }
        let scale = std::f64::consts::FRAC_1_SQRT_2;
        let mut z = DMatrix::<C64>::zeros(n, n);
        for c in 0..n {
            for r in 0..n {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                z[(r, c)] = C64::new(re * scale, im * scale);
            }
        }
        let qr = z.qr();
        let mut q = qr.q();
        let r = qr.r();
        for c in 0..n {
            let d = r[(c, c)];
            let phase = if d.norm() > 0.0 {
                d / d.norm()
            } else {
                C64::new(1.0, 0.0)
            };
            let mut col = q.column_mut(c);
            col *= phase;
        }
        Self::new(q)
    }

    /// Transforms `state` by `N' = conj(U) N Uᵀ`, `M' = U M Uᵀ`.
    pub fn apply(&self, state: &MomentMatrices) -> Result<MomentMatrices> {
        if self.modes() != state.modes() {
            return Err(Error::DimensionMismatch {
                expected: self.modes(),
                found: state.modes(),
            });
        }
        let ut = self.u.transpose();
        let normal = self.u.conjugate() * state.normal() * &ut;
        let anomalous = &self.u * state.anomalous() * &ut;
        MomentMatrices::new(normal, anomalous)
    }

    /// Real orthosymplectic matrix `R` acting on interleaved quadratures,
    /// with `σ' = R σ Rᵀ`.
    pub fn orthosymplectic(&self) -> DMatrix<f64> {
        let n = self.modes();
        let mut r = DMatrix::zeros(2 * n, 2 * n);
        for j in 0..n {
            for k in 0..n {
                let z = self.u[(j, k)];
                r[(2 * j, 2 * k)] = z.re;
                r[(2 * j, 2 * k + 1)] = -z.im;
                r[(2 * j + 1, 2 * k)] = z.im;
                r[(2 * j + 1, 2 * k + 1)] = z.re;
            }
        }
        r
    }
}

fn check_mode(n: usize, j: usize) -> Result<()> {
    if j < n {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("mode {j} out of range for {n} modes")))
    }
}

/// One element of an optical network; modes are one-based, as in the
/// network JSON format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub enum NetworkElement {
    #[serde(rename = "bs")]
    BeamSplitter {
        modes: [usize; 2],
        #[serde(rename = "T")]
        t: f64,
        #[serde(default)]
        phase: f64,
    },
    #[serde(rename = "ps")]
    PhaseShifter { mode: usize, theta: f64 },
}

fn zero_based(mode: usize) -> Result<usize> {
    mode.checked_sub(1)
        .ok_or_else(|| Error::InvalidParameter("network modes are numbered from 1".into()))
}

impl NetworkElement {
    pub fn unitary(&self, n: usize) -> Result<PassiveUnitary> {
        match *self {
            NetworkElement::BeamSplitter {
                modes: [i, j],
                t,
                phase,
            } => PassiveUnitary::beam_splitter(n, zero_based(i)?, zero_based(j)?, t, phase),
            NetworkElement::PhaseShifter { mode, theta } => PassiveUnitary::phase_shifter(n, zero_based(mode)?, theta),
        }
    }
}

/// Ordered list of elements; the first element acts first.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Network(pub Vec<NetworkElement>);

impl Network {
    /// Highest (one-based) mode index referenced by any element.
    pub fn max_mode(&self) -> usize {
        self.0
            .iter()
            .map(|el| match *el {
                NetworkElement::BeamSplitter { modes: [i, j], .. } => i.max(j),
                NetworkElement::PhaseShifter { mode, .. } => mode,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn unitary(&self, n: usize) -> Result<PassiveUnitary> {
        if self.max_mode() > n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.max_mode(),
            });
        }
        self.0
            .iter()
            .try_fold(PassiveUnitary::identity(n), |acc, el| el.unitary(n)?.compose(&acc))
    }

    pub fn apply(&self, state: &MomentMatrices) -> Result<MomentMatrices> {
        self.unitary(state.modes())?.apply(state)
    }
}
