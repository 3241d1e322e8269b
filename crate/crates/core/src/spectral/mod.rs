//! Spectra, singular values, pseudospectra and reproducing-kernel residuals
//! of dense truncations.
//!
//! Truncations of non-normal operators do not see the spectrum of the
//! operator they come from: the truncated slant Toeplitz operator with a
//! constant symbol `c` has eigenvalues `{c, 0, …, 0}` whereas the operator's
//! spectrum is a disc. Finite-`N` spectral evidence therefore comes from
//! pseudospectra and kernel residuals as much as from eigenvalues.

pub mod schur;

use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operators::{build_matrix, Convention, OperatorKind, OperatorMatrix};
use crate::symbols::HarmonicSymbol;
use crate::weights::{check_alpha, SpaceParams, WeightTable};

pub use schur::Schur;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Largest dimension accepted by [`eigenvalues`].
pub const MAX_EIGEN_DIM: usize = 2048;
/// Largest dimension accepted by [`pseudospectrum`].
pub const MAX_PSEUDO_DIM: usize = 512;

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumResult {
    /// Sorted lexicographically by `(re, im)`.
    pub eigenvalues: Vec<Complex64>,
    /// Largest `‖A v − λ v‖₂` over the computed unit eigenpairs.
    pub max_residual: f64,
}

fn check_square(a: &DMatrix<Complex64>) -> Result<()> {
    if a.nrows() == a.ncols() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left: a.nrows(), right: a.ncols() })
    }
}

/// Maps `-0.0` to `0.0` so sorted output and text exports are stable.
fn positive_zero(z: Complex64) -> Complex64 {
    Complex64::new(z.re + 0.0, z.im + 0.0)
}

pub(crate) fn sort_eigenvalues(values: &mut [Complex64]) {
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// All eigenvalues of a dense complex matrix through the Schur form, with
/// eigenvector residuals measured against the original matrix.
pub fn eigenvalues(a: &DMatrix<Complex64>) -> Result<SpectrumResult> {
    check_square(a)?;
    if a.nrows() > MAX_EIGEN_DIM {
        return Err(Error::validation(format!("eigenvalues: dimension {} exceeds {MAX_EIGEN_DIM}", a.nrows())));
    }
    let Schur { q, t } = schur::schur(a)?;
    let y = schur::triangular_eigenvectors(&t);
    let vectors = &q * &y;
    let n = a.nrows();
    let mut max_residual = 0.0f64;
    for i in 0..n {
        let v = vectors.column(i);
        let v = v.unscale(v.norm());
        let lambda = t[(i, i)];
        let r = (a * &v - &v * lambda).norm();
        max_residual = max_residual.max(r);
    }
    let mut eigenvalues: Vec<Complex64> = (0..n).map(|i| positive_zero(t[(i, i)])).collect();
    sort_eigenvalues(&mut eigenvalues);
    Ok(SpectrumResult { eigenvalues, max_residual })
}

/// `Some(|nonzeros|)` when every row and column holds at most one nonzero.
/// Such matrices are a permutation of a diagonal one, so the magnitudes are
/// exactly the singular values.
fn partial_monomial_singular_values(a: &DMatrix<Complex64>) -> Option<Vec<f64>> {
    let (rows, cols) = a.shape();
    let mut row_used = vec![false; rows];
    let mut col_used = vec![false; cols];
    let mut values = Vec::new();
    for j in 0..cols {
        for i in 0..rows {
            let z = a[(i, j)];
            if z != ZERO {
                if row_used[i] || col_used[j] {
                    return None;
                }
                row_used[i] = true;
                col_used[j] = true;
                values.push(z.norm());
            }
        }
    }
    values.resize(rows.min(cols), 0.0);
    Some(values)
}

/// Singular values in non-increasing order.
pub fn singular_values(a: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    if a.is_empty() {
        return Ok(Vec::new());
    }
    let mut values = match partial_monomial_singular_values(a) {
        Some(v) => v,
        None => {
            let budget = 100 * a.nrows().max(a.ncols()).max(10);
            let svd = a
                .clone()
                .try_svd(false, false, f64::EPSILON, budget)
                .ok_or(Error::NonConvergence { routine: "SVD", budget })?;
            svd.singular_values.iter().copied().collect()
        }
    };
    values.sort_by(|x, y| y.total_cmp(x));
    Ok(values)
}

/// Largest singular value; the operator 2-norm used throughout the crate.
pub fn operator_norm(a: &DMatrix<Complex64>) -> Result<f64> {
    Ok(singular_values(a)?.first().copied().unwrap_or(0.0))
}

/// Number of singular values above `tol · σ_max`.
pub fn numerical_rank(a: &DMatrix<Complex64>, tol: f64) -> Result<usize> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::validation(format!("rank tolerance must be positive, got {tol}")));
    }
    let sv = singular_values(a)?;
    let Some(&smax) = sv.first() else { return Ok(0) };
    if smax == 0.0 {
        return Ok(0);
    }
    Ok(sv.iter().filter(|&&s| s > tol * smax).count())
}

fn check_disc(w: Complex64) -> Result<()> {
    if w.norm() < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("kernel point must lie in the open unit disc, got {w}")))
    }
}

/// First `dim` basis coefficients of the normalized reproducing kernel at `w`:
/// `(1 − |w|²)^{(2+α)/2} w̄^n / γ_n`.
pub fn kernel_vector(w: Complex64, alpha: f64, dim: usize) -> Result<DVector<Complex64>> {
    check_disc(w)?;
    check_alpha(alpha)?;
    let mut v = DVector::from_element(dim, ZERO);
    if dim == 0 {
        return Ok(v);
    }
    let r = w.norm();
    let log_scale = 0.5 * (2.0 + alpha) * (1.0 - r * r).ln();
    if r == 0.0 {
        v[0] = Complex64::new(log_scale.exp(), 0.0);
        return Ok(v);
    }
    let weights = WeightTable::new(alpha, dim - 1)?;
    let (log_r, theta) = (r.ln(), w.arg());
    for n in 0..dim {
        let mag = (log_scale + n as f64 * log_r - weights.log_weight(n)).exp();
        v[n] = if theta == 0.0 { Complex64::new(mag, 0.0) } else { Complex64::from_polar(mag, -(n as f64) * theta) };
    }
    Ok(v)
}

/// `‖(A − λ)^* k_w‖₂` for the truncated normalized kernel `k_w`.
///
/// Reproducing kernels are eigenvectors of adjoints of analytic Toeplitz
/// operators (`T_φ^* k_w = conj(φ(w)) k_w`), so the residual is taken on the
/// adjoint side. For `A = T_φ` with `φ` an analytic polynomial it tends to
/// zero at `λ = φ(w)` as `N` grows, witnessing `λ` in the spectrum.
pub fn kernel_residual(a: &OperatorMatrix, w: Complex64, target: Complex64) -> Result<f64> {
    let v = kernel_vector(w, a.params.alpha, a.dim())?;
    let r = a.matrix().adjoint() * &v - &v * target.conj();
    Ok(r.norm())
}

/// Rectangular grid `[re0, re1] × [im0, im1]` with `steps` points per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub re0: f64,
    pub re1: f64,
    pub im0: f64,
    pub im1: f64,
    pub steps: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { re0: -1.25, re1: 1.25, im0: -1.25, im1: 1.25, steps: 101 }
    }
}

fn linspace(a: f64, b: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![a];
    }
    let h = (b - a) / (steps - 1) as f64;
    (0..steps).map(|i| if i + 1 == steps { b } else { a + h * i as f64 }).collect()
}

impl GridSpec {
    pub fn re_axis(&self) -> Vec<f64> {
        linspace(self.re0, self.re1, self.steps)
    }

    pub fn im_axis(&self) -> Vec<f64> {
        linspace(self.im0, self.im1, self.steps)
    }

    fn validate(&self) -> Result<()> {
        let finite = [self.re0, self.re1, self.im0, self.im1].iter().all(|x| x.is_finite());
        if self.steps == 0 || !finite {
            return Err(Error::validation("grid needs finite bounds and at least one step"));
        }
        Ok(())
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    /// `"re0,re1,im0,im1,steps"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || Error::validation(format!("grid spec must be `re0,re1,im0,im1,steps`, got `{s}`"));
        if parts.len() != 5 {
            return Err(bad());
        }
        let f = |i: usize| parts[i].parse::<f64>().map_err(|_| bad());
        let grid = GridSpec { re0: f(0)?, re1: f(1)?, im0: f(2)?, im1: f(3)?, steps: parts[4].parse().map_err(|_| bad())? };
        grid.validate()?;
        Ok(grid)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PseudospectrumGrid {
    pub re_axis: Vec<f64>,
    pub im_axis: Vec<f64>,
    /// `sigma_min[i][j] = σ_min(A − (re_axis[j] + i·im_axis[i]) I)`.
    pub sigma_min: Vec<Vec<f64>>,
}

impl PseudospectrumGrid {
    /// Fraction of grid points with `σ_min ≤ eps`, an area proxy for the
    /// ε-pseudospectrum.
    pub fn fraction_below(&self, eps: f64) -> f64 {
        let total = self.re_axis.len() * self.im_axis.len();
        if total == 0 {
            return 0.0;
        }
        let count = self.sigma_min.iter().flatten().filter(|&&s| s <= eps).count();
        count as f64 / total as f64
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.im_axis
            .iter()
            .enumerate()
            .flat_map(move |(i, &im)| self.re_axis.iter().enumerate().map(move |(j, &re)| (re, im, self.sigma_min[i][j])))
    }
}

/// `σ_min(A − λ I)` at a single point.
pub fn sigma_min_at(a: &DMatrix<Complex64>, lambda: Complex64) -> Result<f64> {
    check_square(a)?;
    let n = a.nrows();
    let mut shifted = a.clone();
    for i in 0..n {
        shifted[(i, i)] -= lambda;
    }
    Ok(singular_values(&shifted)?.last().copied().unwrap_or(0.0))
}

/// `σ_min(A − λ I)` over a grid. Grid points are evaluated in parallel.
pub fn pseudospectrum(a: &DMatrix<Complex64>, grid: &GridSpec) -> Result<PseudospectrumGrid> {
    check_square(a)?;
    grid.validate()?;
    if a.nrows() > MAX_PSEUDO_DIM {
        return Err(Error::validation(format!("pseudospectrum: dimension {} exceeds {MAX_PSEUDO_DIM}", a.nrows())));
    }
    let re_axis = grid.re_axis();
    let im_axis = grid.im_axis();
    let points: Vec<Complex64> =
        im_axis.iter().flat_map(|&im| re_axis.iter().map(move |&re| Complex64::new(re, im))).collect();
    let values = points.par_iter().map(|&z| sigma_min_at(a, z)).collect::<Result<Vec<f64>>>()?;
    let sigma_min = values.chunks(re_axis.len()).map(<[f64]>::to_vec).collect();
    Ok(PseudospectrumGrid { re_axis, im_axis, sigma_min })
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepEntry {
    pub dim: usize,
    pub spectrum: SpectrumResult,
    /// Fraction of eigenvalues with modulus below the sweep's `eps`.
    pub near_zero_fraction: f64,
    pub max_modulus: f64,
}

/// Spectra of the `N × N` truncations for each `N` in `dims`.
pub fn truncation_sweep(
    kind: OperatorKind,
    s: Option<&HarmonicSymbol>,
    base: SpaceParams,
    convention: Convention,
    dims: &[usize],
    eps: f64,
) -> Result<Vec<SweepEntry>> {
    if dims.is_empty() || dims.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::validation("sweep dimensions must be non-empty and strictly increasing"));
    }
    dims.par_iter()
        .map(|&dim| {
            let a = build_matrix(kind, s, base.with_dim(dim)?, convention)?;
            let spectrum = eigenvalues(a.matrix())?;
            let moduli = spectrum.eigenvalues.iter().map(|z| z.norm());
            let near = moduli.clone().filter(|&r| r < eps).count();
            Ok(SweepEntry {
                dim,
                near_zero_fraction: near as f64 / dim as f64,
                max_modulus: moduli.fold(0.0, f64::max),
                spectrum,
            })
        })
        .collect()
}
