//! Finite truncations of Toeplitz, little Hankel and slant operators.
//!
//! Entry `(m, n)` of every matrix is `⟨A e_n, e_m⟩` for `0 ≤ m, n < N`, i.e. the
//! compression `P_N A P_N`; nothing is corrected at the boundary. Two routes
//! produce these matrices: the closed-form entries in [`entries`] and the
//! compositional [`oracle`], which applies `M_φ`, `J`, `P_α` and `W_k` to
//! mixed monomials.

pub mod entries;
pub mod export;
pub mod oracle;

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::symbols::HarmonicSymbol;
use crate::weights::{SpaceParams, WeightTable};

pub use entries::{
    hankel_entry, slant_hankel_entry, slant_shift_entry, slant_toeplitz_entry, toeplitz_entry, EntryFormulas,
};
pub use oracle::{oracle_apply, oracle_apply_mixed, oracle_matrix, oracle_matrix_mixed, MixedPolynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum OperatorKind {
    Toeplitz,
    LittleHankel,
    SlantShift,
    SlantShiftAdjoint,
    SlantToeplitz,
    SlantLittleHankel,
}

impl OperatorKind {
    pub const ALL: [OperatorKind; 6] = [
        OperatorKind::Toeplitz,
        OperatorKind::LittleHankel,
        OperatorKind::SlantShift,
        OperatorKind::SlantShiftAdjoint,
        OperatorKind::SlantToeplitz,
        OperatorKind::SlantLittleHankel,
    ];

    pub fn requires_symbol(self) -> bool {
        !matches!(self, OperatorKind::SlantShift | OperatorKind::SlantShiftAdjoint)
    }

    pub fn tag(self) -> &'static str {
        match self {
            OperatorKind::Toeplitz => "toeplitz",
            OperatorKind::LittleHankel => "little-hankel",
            OperatorKind::SlantShift => "slant-shift",
            OperatorKind::SlantShiftAdjoint => "slant-shift-adjoint",
            OperatorKind::SlantToeplitz => "slant-toeplitz",
            OperatorKind::SlantLittleHankel => "slant-little-hankel",
        }
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for OperatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let kind = match s {
            "toeplitz" | "T" => OperatorKind::Toeplitz,
            "little-hankel" | "hankel" | "H" => OperatorKind::LittleHankel,
            "slant-shift" | "W" => OperatorKind::SlantShift,
            "slant-shift-adjoint" | "W*" => OperatorKind::SlantShiftAdjoint,
            "slant-toeplitz" | "B" => OperatorKind::SlantToeplitz,
            "slant-little-hankel" | "slant-hankel" | "S" => OperatorKind::SlantLittleHankel,
            _ => return Err(Error::UnknownTag { what: "operator kind", tag: s.to_owned() }),
        };
        Ok(kind)
    }
}

/// How `W_k` acts on the basis.
///
/// `Monomial`: `W_k z^m = z^{m/k}` when `k | m`, giving the entry
/// `γ_m/γ_{km}` at `(m, km)`; this is the convention every slant entry
/// formula is written against. `Normalized`: `W_k e_m = e_{m/k}`, a partial
/// isometry with unit entries.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
pub enum Convention {
    #[default]
    Monomial,
    Normalized,
}

impl Convention {
    pub fn tag(self) -> &'static str {
        match self {
            Convention::Monomial => "monomial",
            Convention::Normalized => "normalized",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "monomial" => Ok(Convention::Monomial),
            "normalized" => Ok(Convention::Normalized),
            _ => Err(Error::UnknownTag { what: "convention", tag: s.to_owned() }),
        }
    }
}

/// Dense `N × N` truncation of one operator, with the parameters that built it.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub kind: OperatorKind,
    pub params: SpaceParams,
    pub convention: Convention,
    matrix: DMatrix<Complex64>,
}

impl OperatorMatrix {
    pub(crate) fn from_parts(
        kind: OperatorKind,
        params: SpaceParams,
        convention: Convention,
        matrix: DMatrix<Complex64>,
    ) -> Self {
        debug_assert_eq!(matrix.nrows(), params.dim);
        Self { kind, params, convention, matrix }
    }

    pub fn dim(&self) -> usize {
        self.params.dim
    }

    /// Entry `(m, n) = ⟨A e_n, e_m⟩`.
    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.matrix[(m, n)]
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    /// Entries in row-major order.
    pub fn row_major(&self) -> Vec<Complex64> {
        let n = self.dim();
        (0..n).flat_map(|m| (0..n).map(move |j| (m, j))).map(|(m, j)| self.matrix[(m, j)]).collect()
    }
}

impl AsRef<DMatrix<Complex64>> for OperatorMatrix {
    fn as_ref(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }
}

pub(crate) fn check_symbol(kind: OperatorKind, s: Option<&HarmonicSymbol>) -> Result<&HarmonicSymbol> {
    static NONE: std::sync::OnceLock<HarmonicSymbol> = std::sync::OnceLock::new();
    match (kind.requires_symbol(), s) {
        (true, Some(s)) => Ok(s),
        (false, None) => Ok(NONE.get_or_init(HarmonicSymbol::zero)),
        (true, None) => Err(Error::validation(format!("{kind} requires a symbol"))),
        (false, Some(_)) => Err(Error::validation(format!("{kind} takes no symbol"))),
    }
}

/// Assembles the truncation from the closed-form entries.
///
/// Rows are filled in parallel; each entry is computed independently, so the
/// result does not depend on the number of worker threads.
pub fn build_matrix(
    kind: OperatorKind,
    s: Option<&HarmonicSymbol>,
    params: SpaceParams,
    convention: Convention,
) -> Result<OperatorMatrix> {
    let params = SpaceParams::new(params.alpha, params.k, params.dim)?;
    let symbol = check_symbol(kind, s)?;
    let (dim, k) = (params.dim, params.k);
    let weights = WeightTable::new(params.alpha, EntryFormulas::required_index(kind, k, dim))?;
    let formulas = EntryFormulas::new(&weights);

    let rows: Vec<Vec<Complex64>> = (0..dim)
        .into_par_iter()
        .map(|m| (0..dim).map(|n| formulas.entry(kind, m, n, symbol, k, convention)).collect())
        .collect();
    let matrix = DMatrix::from_fn(dim, dim, |m, n| rows[m][n]);
    Ok(OperatorMatrix::from_parts(kind, params, convention, matrix))
}
