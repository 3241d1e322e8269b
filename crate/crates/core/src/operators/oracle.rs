//! Compositional cross-check for the entry formulas.
//!
//! Operators are applied literally to finite sums of mixed monomials
//! `z^p z̄^q`: multiplication by the symbol, the flip `J` (exponent swap),
//! the Bergman projection through the Γ-quotient coefficient, and the slant
//! shift. Nothing here reads the closed-form entries.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{check_symbol, Convention, OperatorKind, OperatorMatrix};
use crate::error::{Error, Result};
use crate::symbols::HarmonicSymbol;
use crate::weights::{check_slant_order, gamma_weight, projection_coeff, SpaceParams};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Finite sum `Σ c_{p,q} z^p z̄^q`. Zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MixedPolynomial {
    terms: BTreeMap<(usize, usize), Complex64>,
}

impl MixedPolynomial {
    pub fn new() -> Self {
        Self::default()
    }

    /// `c · z^p z̄^q`.
    pub fn term(p: usize, q: usize, c: Complex64) -> Self {
        let mut out = Self::new();
        out.add(p, q, c);
        out
    }

    /// The basis vector `e_n = z^n / γ_n`.
    pub fn basis(n: usize, alpha: f64) -> Result<Self> {
        Ok(Self::term(n, 0, Complex64::new(1.0 / gamma_weight(n, alpha)?, 0.0)))
    }

    pub fn from_symbol(s: &HarmonicSymbol) -> Self {
        let mut out = Self::new();
        for (j, &a) in s.anti().iter().enumerate() {
            out.add(0, j, a);
        }
        for (j, &b) in s.analytic().iter().enumerate() {
            out.add(j + 1, 0, b);
        }
        out
    }

    pub fn add(&mut self, p: usize, q: usize, c: Complex64) {
        if c == ZERO {
            return;
        }
        let slot = self.terms.entry((p, q)).or_insert(ZERO);
        *slot += c;
        if *slot == ZERO {
            self.terms.remove(&(p, q));
        }
    }

    /// Coefficient of `z^p z̄^q`.
    pub fn coeff(&self, p: usize, q: usize) -> Complex64 {
        self.terms.get(&(p, q)).copied().unwrap_or(ZERO)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), Complex64)> + '_ {
        self.terms.iter().map(|(&k, &v)| (k, v))
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_analytic(&self) -> bool {
        self.terms.keys().all(|&(_, q)| q == 0)
    }

    pub fn multiply(&self, other: &MixedPolynomial) -> MixedPolynomial {
        let mut out = Self::new();
        for (&(p1, q1), &c1) in &self.terms {
            for (&(p2, q2), &c2) in &other.terms {
                out.add(p1 + p2, q1 + q2, c1 * c2);
            }
        }
        out
    }

    /// `J`: `z^p z̄^q ↦ z^q z̄^p`.
    pub fn flip(&self) -> MixedPolynomial {
        Self { terms: self.terms.iter().map(|(&(p, q), &c)| ((q, p), c)).collect() }
    }

    /// `P_α`: `z^p z̄^q ↦ c(p, q) z^{p−q}`, zero when `p < q`.
    pub fn project(&self, alpha: f64) -> Result<MixedPolynomial> {
        let mut out = Self::new();
        for (&(p, q), &c) in &self.terms {
            if p >= q {
                out.add(p - q, 0, c * projection_coeff(p, q, alpha)?);
            }
        }
        Ok(out)
    }

    fn require_analytic(&self, step: &str) -> Result<()> {
        if self.is_analytic() {
            Ok(())
        } else {
            Err(Error::validation(format!("{step} acts on analytic polynomials only")))
        }
    }

    /// `W_k`. Monomial convention: `z^p ↦ z^{p/k}` when `k | p`. Normalized
    /// convention: `e_p ↦ e_{p/k}`, i.e. `z^p ↦ (γ_p/γ_{p/k}) z^{p/k}`.
    pub fn slant_shift(&self, k: usize, alpha: f64, convention: Convention) -> Result<MixedPolynomial> {
        check_slant_order(k)?;
        self.require_analytic("the slant shift")?;
        let mut out = Self::new();
        for (&(p, _), &c) in &self.terms {
            if p % k != 0 {
                continue;
            }
            let factor = match convention {
                Convention::Monomial => 1.0,
                Convention::Normalized => gamma_weight(p, alpha)? / gamma_weight(p / k, alpha)?,
            };
            out.add(p / k, 0, c * factor);
        }
        Ok(out)
    }

    /// `W_k^*`. Monomial convention: `e_p ↦ (γ_p/γ_{kp}) e_{kp}`, i.e.
    /// `z^p ↦ (γ_p²/γ_{kp}²) z^{kp}`. Normalized convention: `e_p ↦ e_{kp}`.
    pub fn slant_shift_adjoint(&self, k: usize, alpha: f64, convention: Convention) -> Result<MixedPolynomial> {
        check_slant_order(k)?;
        self.require_analytic("the slant shift adjoint")?;
        let mut out = Self::new();
        for (&(p, _), &c) in &self.terms {
            let ratio = gamma_weight(p, alpha)? / gamma_weight(k * p, alpha)?;
            let factor = match convention {
                Convention::Monomial => ratio * ratio,
                Convention::Normalized => ratio,
            };
            out.add(k * p, 0, c * factor);
        }
        Ok(out)
    }
}

fn apply_with(
    kind: OperatorKind,
    symbol: &MixedPolynomial,
    params: &SpaceParams,
    convention: Convention,
    input: &MixedPolynomial,
) -> Result<MixedPolynomial> {
    let (alpha, k) = (params.alpha, params.k);
    let toeplitz = || symbol.multiply(input).project(alpha);
    let hankel = || symbol.multiply(input).flip().project(alpha);
    match kind {
        OperatorKind::Toeplitz => toeplitz(),
        OperatorKind::LittleHankel => hankel(),
        OperatorKind::SlantShift => input.slant_shift(k, alpha, convention),
        OperatorKind::SlantShiftAdjoint => input.slant_shift_adjoint(k, alpha, convention),
        OperatorKind::SlantToeplitz => toeplitz()?.slant_shift(k, alpha, convention),
        OperatorKind::SlantLittleHankel => hankel()?.slant_shift(k, alpha, convention),
    }
}

/// Applies the operator's defining composition to `input`.
pub fn oracle_apply(
    kind: OperatorKind,
    s: Option<&HarmonicSymbol>,
    params: SpaceParams,
    convention: Convention,
    input: &MixedPolynomial,
) -> Result<MixedPolynomial> {
    let params = SpaceParams::new(params.alpha, params.k, params.dim)?;
    let symbol = MixedPolynomial::from_symbol(check_symbol(kind, s)?);
    apply_with(kind, &symbol, &params, convention, input)
}

/// Same as [`oracle_apply`] for a symbol that is an arbitrary mixed polynomial.
pub fn oracle_apply_mixed(
    kind: OperatorKind,
    symbol: &MixedPolynomial,
    params: SpaceParams,
    convention: Convention,
    input: &MixedPolynomial,
) -> Result<MixedPolynomial> {
    if !kind.requires_symbol() {
        return Err(Error::validation(format!("{kind} takes no symbol")));
    }
    let params = SpaceParams::new(params.alpha, params.k, params.dim)?;
    apply_with(kind, symbol, &params, convention, input)
}

fn matrix_with(
    kind: OperatorKind,
    symbol: &MixedPolynomial,
    params: SpaceParams,
    convention: Convention,
) -> Result<OperatorMatrix> {
    let dim = params.dim;
    let gammas = (0..dim).map(|n| gamma_weight(n, params.alpha)).collect::<Result<Vec<_>>>()?;
    let mut matrix = DMatrix::from_element(dim, dim, ZERO);
    for n in 0..dim {
        let image = apply_with(kind, symbol, &params, convention, &MixedPolynomial::basis(n, params.alpha)?)?;
        for ((p, q), c) in image.terms() {
            if q == 0 && p < dim {
                matrix[(p, n)] = c * gammas[p];
            }
        }
    }
    Ok(OperatorMatrix::from_parts(kind, params, convention, matrix))
}

/// The truncation assembled column by column from [`oracle_apply`] on `e_n`.
pub fn oracle_matrix(
    kind: OperatorKind,
    s: Option<&HarmonicSymbol>,
    params: SpaceParams,
    convention: Convention,
) -> Result<OperatorMatrix> {
    let params = SpaceParams::new(params.alpha, params.k, params.dim)?;
    let symbol = MixedPolynomial::from_symbol(check_symbol(kind, s)?);
    matrix_with(kind, &symbol, params, convention)
}

/// Oracle truncation for a non-harmonic symbol.
pub fn oracle_matrix_mixed(
    kind: OperatorKind,
    symbol: &MixedPolynomial,
    params: SpaceParams,
    convention: Convention,
) -> Result<OperatorMatrix> {
    if !kind.requires_symbol() {
        return Err(Error::validation(format!("{kind} takes no symbol")));
    }
    let params = SpaceParams::new(params.alpha, params.k, params.dim)?;
    matrix_with(kind, symbol, params, convention)
}
