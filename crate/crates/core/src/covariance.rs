//! Gaussian-state data model.
//!
//! A zero-mean Gaussian state of `n` modes is fixed by its second moments.
//! The canonical form is [`MomentMatrices`], holding the normally ordered
//! moments
//!
//! ```text
//! N[k][l] = <Δa†_k Δa_l>      (Hermitian, B_j = N[j][j])
//! M[k][l] = <Δa_k Δa_l>       (symmetric, C_j = M[j][j], D_jk = M[j][k])
//! ```
//!
//! with `D̄_jk = −N[j][k]` for `j ≠ k`. [`QuadratureCM`] is the symmetrically
//! ordered real covariance matrix in interleaved `(x₁, p₁, x₂, p₂, …)` order.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Complex, DMatrix, Matrix2, SymmetricEigen};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Floor for the eigenvalues of `σ + (i/2)Ω`.
pub const TOL_PHYS: f64 = 1e-9;
/// Allowed deviation of a symplectic eigenvalue from 1/2 for a pure state.
pub const TOL_PURE: f64 = 1e-9;

// Hermiticity / symmetry slack relative to the largest entry.
const STRUCT_TOL: f64 = 1e-10;

fn scale_of_c(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(1.0_f64, |acc, z| acc.max(z.norm()))
}

fn scale_of_r(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(1.0_f64, |acc, x| acc.max(x.abs()))
}

/// Normally ordered second moments of an `n`-mode Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentMatrices {
    normal: DMatrix<C64>,
    anomalous: DMatrix<C64>,
}

impl MomentMatrices {
    /// Builds a state from `N` and `M`, checking the structural invariants.
    ///
    /// Inputs that are Hermitian/symmetric within rounding are symmetrized
    /// exactly.
    pub fn new(normal: DMatrix<C64>, anomalous: DMatrix<C64>) -> Result<Self> {
        let n = normal.nrows();
        if n == 0 {
            return Err(Error::MalformedState("state has no modes".into()));
        }
        if !normal.is_square() || anomalous.shape() != (n, n) {
            return Err(Error::MalformedState(format!(
                "N is {}x{} and M is {}x{}; both must be n x n",
                normal.nrows(),
                normal.ncols(),
                anomalous.nrows(),
                anomalous.ncols()
            )));
        }
        if normal
            .iter()
            .chain(anomalous.iter())
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite("moment matrices"));
        }
        let tol_n = STRUCT_TOL * scale_of_c(&normal);
        let tol_m = STRUCT_TOL * scale_of_c(&anomalous);
        for k in 0..n {
            for l in 0..n {
                if (normal[(k, l)] - normal[(l, k)].conj()).norm() > tol_n {
                    return Err(Error::MalformedState(format!("N is not Hermitian at ({k}, {l})")));
                }
                if (anomalous[(k, l)] - anomalous[(l, k)]).norm() > tol_m {
                    return Err(Error::MalformedState(format!("M is not symmetric at ({k}, {l})")));
                }
            }
            if normal[(k, k)].re < -tol_n {
                return Err(Error::MalformedState(format!(
                    "negative mean photon number B_{} = {}",
                    k + 1,
                    normal[(k, k)].re
                )));
            }
        }
        let normal = (&normal + normal.adjoint()).map(|z| z * 0.5);
        let anomalous = (&anomalous + anomalous.transpose()).map(|z| z * 0.5);
        Ok(Self { normal, anomalous })
    }

    pub fn modes(&self) -> usize {
        self.normal.nrows()
    }

    /// `N[k][l] = <Δa†_k Δa_l>`.
    pub fn normal(&self) -> &DMatrix<C64> {
        &self.normal
    }

    /// `M[k][l] = <Δa_k Δa_l>`.
    pub fn anomalous(&self) -> &DMatrix<C64> {
        &self.anomalous
    }

    /// Mean photon number of mode `j`.
    pub fn b(&self, j: usize) -> f64 {
        self.normal[(j, j)].re
    }

    pub fn c(&self, j: usize) -> C64 {
        self.anomalous[(j, j)]
    }

    pub fn d(&self, j: usize, k: usize) -> C64 {
        self.anomalous[(j, k)]
    }

    /// `D̄_jk = −<Δa†_j Δa_k>`.
    pub fn dbar(&self, j: usize, k: usize) -> C64 {
        -self.normal[(j, k)]
    }

    /// Total mean photon number `Σ B_j`.
    pub fn photon_number(&self) -> f64 {
        (0..self.modes()).map(|j| self.b(j)).sum()
    }

    pub fn vacuum(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("vacuum needs at least one mode".into()));
        }
        Ok(Self {
            normal: DMatrix::zeros(n, n),
            anomalous: DMatrix::zeros(n, n),
        })
    }

    pub fn thermal(b: f64) -> Result<Self> {
        check_nonneg("thermal mean photon number", b)?;
        Ok(Self {
            normal: DMatrix::from_element(1, 1, C64::new(b, 0.0)),
            anomalous: DMatrix::zeros(1, 1),
        })
    }

    /// Single-mode squeezed thermal state: thermal mean `b_th`, squeezing
    /// `r`, squeezing phase `phi`.
    pub fn squeezed_thermal(b_th: f64, r: f64, phi: f64) -> Result<Self> {
        check_nonneg("thermal mean photon number", b_th)?;
        check_finite("squeezing parameter", r)?;
        check_finite("squeezing phase", phi)?;
        let b = b_th * (2.0 * r).cosh() + r.sinh().powi(2);
        let c = -C64::from_polar(1.0, phi) * ((b_th + 0.5) * (2.0 * r).sinh());
        Ok(Self {
            normal: DMatrix::from_element(1, 1, C64::new(b, 0.0)),
            anomalous: DMatrix::from_element(1, 1, c),
        })
    }

    /// Noiseless twin beam (two-mode squeezed vacuum) with mean photon-pair
    /// number `bp`.
    pub fn twin_beam(bp: f64) -> Result<Self> {
        Self::noisy_twin_beam(bp, 0.0, 0.0)
    }

    /// Twin beam with additional mean noise photons `bn1`, `bn2` in the
    /// signal and idler modes.
    pub fn noisy_twin_beam(bp: f64, bn1: f64, bn2: f64) -> Result<Self> {
        check_nonneg("mean photon-pair number", bp)?;
        check_nonneg("noise photon number", bn1)?;
        check_nonneg("noise photon number", bn2)?;
        let d = C64::new((bp * (bp + 1.0)).sqrt(), 0.0);
        let mut normal = DMatrix::zeros(2, 2);
        normal[(0, 0)] = C64::new(bp + bn1, 0.0);
        normal[(1, 1)] = C64::new(bp + bn2, 0.0);
        let mut anomalous = DMatrix::zeros(2, 2);
        anomalous[(0, 1)] = d;
        anomalous[(1, 0)] = d;
        Ok(Self { normal, anomalous })
    }

    /// Block-diagonal composition; mode order follows `parts`.
    pub fn product(parts: &[MomentMatrices]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidParameter("product of zero states".into()));
        }
        let n: usize = parts.iter().map(|s| s.modes()).sum();
        let mut normal = DMatrix::zeros(n, n);
        let mut anomalous = DMatrix::zeros(n, n);
        let mut offset = 0;
        for part in parts {
            let k = part.modes();
            normal.view_mut((offset, offset), (k, k)).copy_from(&part.normal);
            anomalous.view_mut((offset, offset), (k, k)).copy_from(&part.anomalous);
            offset += k;
        }
        Ok(Self { normal, anomalous })
    }

    /// Marginal state on the modes in `keep` (zero-based, set semantics).
    pub fn reduce(&self, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::InvalidParameter("reduce: empty mode set".into()));
        }
        let mut idx = keep.to_vec();
        idx.sort_unstable();
        if idx.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter("reduce: duplicate mode index".into()));
        }
        if let Some(&bad) = idx.iter().find(|&&j| j >= self.modes()) {
            return Err(Error::InvalidParameter(format!(
                "reduce: mode {bad} out of range for a {}-mode state",
                self.modes()
            )));
        }
        let k = idx.len();
        let normal = DMatrix::from_fn(k, k, |r, c| self.normal[(idx[r], idx[c])]);
        let anomalous = DMatrix::from_fn(k, k, |r, c| self.anomalous[(idx[r], idx[c])]);
        Ok(Self { normal, anomalous })
    }

    /// Symmetrically ordered quadrature covariance matrix.
    pub fn to_quadrature(&self) -> QuadratureCM {
        let n = self.modes();
        let mut sigma = DMatrix::zeros(2 * n, 2 * n);
        for j in 0..n {
            let b = self.b(j);
            let c = self.c(j);
            sigma[(2 * j, 2 * j)] = b + 0.5 + c.re;
            sigma[(2 * j, 2 * j + 1)] = c.im;
            sigma[(2 * j + 1, 2 * j)] = c.im;
            sigma[(2 * j + 1, 2 * j + 1)] = b + 0.5 - c.re;
            for k in 0..n {
                if k == j {
                    continue;
                }
                let d = self.d(j, k);
                let dbar = self.dbar(j, k);
                sigma[(2 * j, 2 * k)] = (d - dbar).re;
                sigma[(2 * j, 2 * k + 1)] = (d - dbar).im;
                sigma[(2 * j + 1, 2 * k)] = (d + dbar).im;
                sigma[(2 * j + 1, 2 * k + 1)] = -(d + dbar).re;
            }
        }
        QuadratureCM { sigma }
    }

    /// Inverse of [`MomentMatrices::to_quadrature`].
    pub fn from_quadrature(cm: &QuadratureCM) -> Result<Self> {
        let n = cm.modes();
        let s = &cm.sigma;
        let mut normal = DMatrix::zeros(n, n);
        let mut anomalous = DMatrix::zeros(n, n);
        for j in 0..n {
            let (xx, xp, pp) = (s[(2 * j, 2 * j)], s[(2 * j, 2 * j + 1)], s[(2 * j + 1, 2 * j + 1)]);
            normal[(j, j)] = C64::new(0.5 * (xx + pp) - 0.5, 0.0);
            anomalous[(j, j)] = C64::new(0.5 * (xx - pp), xp);
            for k in 0..n {
                if k == j {
                    continue;
                }
                let a = s[(2 * j, 2 * k)];
                let b = s[(2 * j, 2 * k + 1)];
                let c = s[(2 * j + 1, 2 * k)];
                let d = s[(2 * j + 1, 2 * k + 1)];
                // D − D̄ = a + ib, D + D̄ = −d + ic
                anomalous[(j, k)] = C64::new(0.5 * (a - d), 0.5 * (b + c));
                normal[(j, k)] = C64::new(0.5 * (a + d), 0.5 * (b - c));
            }
        }
        Self::new(normal, anomalous)
    }

    /// Physicality verdict of the state (see [`QuadratureCM::physicality`]).
    pub fn validate_physical(&self, tol_phys: f64) -> Physicality {
        self.to_quadrature().physicality(tol_phys)
    }

    /// `Ok(())` when physical at `tol_phys`, otherwise [`Error::Unphysical`].
    pub fn ensure_physical(&self, tol_phys: f64) -> Result<()> {
        let verdict = self.validate_physical(tol_phys);
        if verdict.physical {
            Ok(())
        } else {
            Err(Error::Unphysical {
                min_eig: verdict.min_eig,
            })
        }
    }

    /// True iff every symplectic eigenvalue equals 1/2 within `tol_pure`.
    pub fn purity_check(&self, tol_pure: f64) -> Result<bool> {
        self.ensure_physical(TOL_PHYS)?;
        let nu = self.to_quadrature().symplectic_eigenvalues()?;
        Ok(nu.iter().all(|v| (v - 0.5).abs() <= tol_pure))
    }

    /// The `2n × 2n` complex matrix of the normally ordered characteristic
    /// function, in `(β₁, β₁*, β₂, β₂*, …)` order.
    pub fn normally_ordered_matrix(&self) -> DMatrix<C64> {
        let n = self.modes();
        let mut a = DMatrix::zeros(2 * n, 2 * n);
        for j in 0..n {
            let b = C64::new(-self.b(j), 0.0);
            let c = self.c(j);
            a[(2 * j, 2 * j)] = b;
            a[(2 * j, 2 * j + 1)] = c;
            a[(2 * j + 1, 2 * j)] = c.conj();
            a[(2 * j + 1, 2 * j + 1)] = b;
            for k in 0..n {
                if k == j {
                    continue;
                }
                let d = self.d(j, k);
                let dbar = self.dbar(j, k);
                a[(2 * j, 2 * k)] = dbar.conj();
                a[(2 * j, 2 * k + 1)] = d;
                a[(2 * j + 1, 2 * k)] = d.conj();
                a[(2 * j + 1, 2 * k + 1)] = dbar;
            }
        }
        a
    }

    /// Builds the state described by a constructor spec.
    pub fn make(spec: &StateSpec) -> Result<Self> {
        match spec {
            StateSpec::Vacuum(n) => Self::vacuum(*n),
            StateSpec::Thermal(b) => Self::thermal(*b),
            StateSpec::SqueezedThermal { b_th, r, phi } => Self::squeezed_thermal(*b_th, *r, *phi),
            StateSpec::TwinBeam(bp) => Self::twin_beam(*bp),
            StateSpec::NoisyTwinBeam { bp, bn1, bn2 } => Self::noisy_twin_beam(*bp, *bn1, *bn2),
            StateSpec::Product(parts) => {
                let parts = parts.iter().map(Self::make).collect::<Result<Vec<_>>>()?;
                Self::product(&parts)
            }
        }
    }
}

fn check_finite(what: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{what} must be finite, got {x}")))
    }
}

fn check_nonneg(what: &str, x: f64) -> Result<()> {
    check_finite(what, x)?;
    if x < 0.0 {
        return Err(Error::InvalidParameter(format!("{what} must be >= 0, got {x}")));
    }
    Ok(())
}

/// Result of [`QuadratureCM::physicality`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Physicality {
    pub physical: bool,
    /// Smallest eigenvalue of `σ + (i/2)Ω`.
    pub min_eig: f64,
}

/// Block-diagonal symplectic form with blocks `[[0, 1], [−1, 0]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm(DMatrix<f64>);

impl SymplecticForm {
    pub fn new(n: usize) -> Self {
        let mut omega = DMatrix::zeros(2 * n, 2 * n);
        for j in 0..n {
            omega[(2 * j, 2 * j + 1)] = 1.0;
            omega[(2 * j + 1, 2 * j)] = -1.0;
        }
        Self(omega)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }
}

/// Real symmetric `2n × 2n` covariance matrix, interleaved `(x₁, p₁, …)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureCM {
    sigma: DMatrix<f64>,
}

impl QuadratureCM {
    pub fn new(sigma: DMatrix<f64>) -> Result<Self> {
        let dim = sigma.nrows();
        if dim == 0 || !dim.is_multiple_of(2) || !sigma.is_square() {
            return Err(Error::MalformedState(format!(
                "covariance matrix must be 2n x 2n, got {}x{}",
                sigma.nrows(),
                sigma.ncols()
            )));
        }
        if sigma.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("covariance matrix"));
        }
        let tol = STRUCT_TOL * scale_of_r(&sigma);
        for r in 0..dim {
            for c in r + 1..dim {
                if (sigma[(r, c)] - sigma[(c, r)]).abs() > tol {
                    return Err(Error::MalformedState(format!(
                        "covariance matrix is not symmetric at ({r}, {c})"
                    )));
                }
            }
        }
        let sigma = (&sigma + sigma.transpose()) * 0.5;
        Ok(Self { sigma })
    }

    pub fn modes(&self) -> usize {
        self.sigma.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.sigma
    }

    /// The 2×2 block coupling mode `j` (rows) to mode `k` (columns).
    pub fn block(&self, j: usize, k: usize) -> Matrix2<f64> {
        Matrix2::new(
            self.sigma[(2 * j, 2 * k)],
            self.sigma[(2 * j, 2 * k + 1)],
            self.sigma[(2 * j + 1, 2 * k)],
            self.sigma[(2 * j + 1, 2 * k + 1)],
        )
    }

    /// Principal submatrix on the given modes (in the given order).
    pub fn sub(&self, modes: &[usize]) -> QuadratureCM {
        let idx: Vec<usize> = modes.iter().flat_map(|&j| [2 * j, 2 * j + 1]).collect();
        let k = idx.len();
        QuadratureCM {
            sigma: DMatrix::from_fn(k, k, |r, c| self.sigma[(idx[r], idx[c])]),
        }
    }

    pub fn determinant(&self) -> f64 {
        self.sigma.determinant()
    }

    /// Partial transposition of `mode`: sign flip of its momentum quadrature.
    pub fn partially_transposed(&self, mode: usize) -> QuadratureCM {
        let mut sigma = self.sigma.clone();
        let p = 2 * mode + 1;
        for i in 0..sigma.nrows() {
            if i != p {
                sigma[(i, p)] = -sigma[(i, p)];
                sigma[(p, i)] = -sigma[(p, i)];
            }
        }
        QuadratureCM { sigma }
    }

    /// Uncertainty-principle check: all eigenvalues of the Hermitian matrix
    /// `σ + (i/2)Ω` must be `>= −tol_phys`.
    pub fn physicality(&self, tol_phys: f64) -> Physicality {
        let omega = SymplecticForm::new(self.modes());
        let h = DMatrix::from_fn(self.sigma.nrows(), self.sigma.ncols(), |r, c| {
            C64::new(self.sigma[(r, c)], 0.5 * omega.0[(r, c)])
        });
        let min_eig = SymmetricEigen::new(h).eigenvalues.min();
        Physicality {
            physical: min_eig >= -tol_phys,
            min_eig,
        }
    }

    /// Symplectic eigenvalues, ascending.
    ///
    /// Computed from the Hermitian matrix `i σ^{1/2} Ω σ^{1/2}`, which is
    /// similar to `iΩσ`; its spectrum is `{±ν_k}`.
    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        let n = self.modes();
        let eig = SymmetricEigen::new(self.sigma.clone());
        if eig.eigenvalues.iter().any(|&l| l <= 0.0) {
            return Err(Error::NumericalDegeneracy(
                "covariance matrix is not positive definite".into(),
            ));
        }
        let v = &eig.eigenvectors;
        let root = v * DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt)) * v.transpose();
        let omega = SymplecticForm::new(n);
        let inner = &root * omega.matrix() * &root;
        let h = inner.map(|x| C64::new(0.0, x));
        let mut spec: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
        spec.sort_by(f64::total_cmp);

        let scale = spec.iter().fold(1.0_f64, |a, x| a.max(x.abs()));
        let mut nu = Vec::with_capacity(n);
        for k in 0..n {
            let (neg, pos) = (spec[k], spec[2 * n - 1 - k]);
            if (neg + pos).abs() > 1e-8 * scale {
                return Err(Error::NumericalDegeneracy(format!(
                    "symplectic spectrum not paired: {neg} vs {pos}"
                )));
            }
            nu.push(0.5 * (pos - neg));
        }
        nu.reverse();
        Ok(nu)
    }
}

/// Constructor description, e.g. `twin-beam:1`, `noisy-twin-beam:1,0.3,0.7`
/// or `twin-beam:1+vacuum:1` for a product.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Vacuum(usize),
    Thermal(f64),
    SqueezedThermal { b_th: f64, r: f64, phi: f64 },
    TwinBeam(f64),
    NoisyTwinBeam { bp: f64, bn1: f64, bn2: f64 },
    Product(Vec<StateSpec>),
}

impl FromStr for StateSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        // split on '+' only where a new constructor name starts, so that
        // exponents like 1e+3 survive
        let mut pieces: Vec<String> = Vec::new();
        for raw in s.split('+') {
            let starts_name = raw.trim_start().starts_with(|c: char| c.is_ascii_alphabetic());
            match pieces.last_mut() {
                Some(last) if !starts_name => {
                    last.push('+');
                    last.push_str(raw);
                }
                _ => pieces.push(raw.to_string()),
            }
        }
        let mut parts = pieces
            .iter()
            .map(|p| parse_single(p.trim()))
            .collect::<Result<Vec<_>>>()?;
        if parts.len() == 1 {
            Ok(parts.remove(0))
        } else {
            Ok(StateSpec::Product(parts))
        }
    }
}

fn parse_single(s: &str) -> Result<StateSpec> {
    let (name, args) = match s.split_once(':') {
        Some((n, a)) => (n.trim(), a.trim()),
        None => (s, ""),
    };
    let nums: Vec<f64> = if args.is_empty() {
        Vec::new()
    } else {
        args.split(',')
            .map(|a| {
                a.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("bad number '{a}' in '{s}': {e}")))
            })
            .collect::<Result<_>>()?
    };
    let arity = |want: usize| -> Result<()> {
        if nums.len() == want {
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "'{name}' takes {want} parameter(s), got {}",
                nums.len()
            )))
        }
    };
    match name.to_ascii_lowercase().replace('_', "-").as_str() {
        "vacuum" => match nums.as_slice() {
            [] => Ok(StateSpec::Vacuum(1)),
            [n] if *n >= 1.0 && n.fract() == 0.0 => Ok(StateSpec::Vacuum(*n as usize)),
            _ => Err(Error::Parse(format!("vacuum takes one positive integer, got '{args}'"))),
        },
        "thermal" => {
            arity(1)?;
            Ok(StateSpec::Thermal(nums[0]))
        }
        "squeezed-thermal" => {
            arity(3)?;
            Ok(StateSpec::SqueezedThermal {
                b_th: nums[0],
                r: nums[1],
                phi: nums[2],
            })
        }
        "twin-beam" => {
            arity(1)?;
            Ok(StateSpec::TwinBeam(nums[0]))
        }
        "noisy-twin-beam" => {
            arity(3)?;
            Ok(StateSpec::NoisyTwinBeam {
                bp: nums[0],
                bn1: nums[1],
                bn2: nums[2],
            })
        }
        other => Err(Error::Parse(format!("unknown state constructor '{other}'"))),
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Vacuum(n) => write!(f, "vacuum:{n}"),
            StateSpec::Thermal(b) => write!(f, "thermal:{b}"),
            StateSpec::SqueezedThermal { b_th, r, phi } => write!(f, "squeezed-thermal:{b_th},{r},{phi}"),
            StateSpec::TwinBeam(bp) => write!(f, "twin-beam:{bp}"),
            StateSpec::NoisyTwinBeam { bp, bn1, bn2 } => write!(f, "noisy-twin-beam:{bp},{bn1},{bn2}"),
            StateSpec::Product(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str("+")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
        }
    }
}
