//! Algebraic diagnostics on truncations: commutators, normality defects,
//! compactness tails, finite-rank support counts, sparsity and entry decay.

use std::fmt::Write;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operators::export::format_float;
use crate::operators::OperatorMatrix;
use crate::spectral::operator_norm;
use crate::symbols::HarmonicSymbol;
use crate::weights::{check_slant_order, WeightTable};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CommutatorNorms {
    pub operator_norm: f64,
    pub frobenius: f64,
}

/// Frobenius norm with a fixed column-major summation order.
pub fn frobenius_norm(a: &DMatrix<Complex64>) -> f64 {
    a.iter().fold(0.0, |acc, z| acc + z.norm_sqr()).sqrt()
}

/// Hilbert–Schmidt norm of the truncation, `(Σ_{m,n<N} |a_{mn}|²)^{1/2}`.
pub fn hilbert_schmidt_norm(a: &OperatorMatrix) -> f64 {
    frobenius_norm(a.matrix())
}

fn commutator(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    if a.shape() != b.shape() || a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch { left: a.nrows(), right: b.nrows() });
    }
    Ok(a * b - b * a)
}

/// `‖AB − BA‖₂` and `‖AB − BA‖_F`.
pub fn commutator_norms(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<CommutatorNorms> {
    matrix_commutator_norms(a.matrix(), b.matrix())
}

pub fn matrix_commutator_norms(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Result<CommutatorNorms> {
    let c = commutator(a, b)?;
    Ok(CommutatorNorms { operator_norm: operator_norm(&c)?, frobenius: frobenius_norm(&c) })
}

/// `‖A^*A − AA^*‖₂`; zero exactly when the truncation is normal.
pub fn self_commutator_defect(a: &OperatorMatrix) -> Result<f64> {
    let m = a.matrix();
    let h = m.adjoint();
    operator_norm(&(&h * m - m * &h))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailReport {
    pub j_values: Vec<usize>,
    pub sup_values: Vec<f64>,
}

impl TailReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,sup_value\n");
        for (j, v) in self.j_values.iter().zip(&self.sup_values) {
            writeln!(out, "{j},{}", format_float(*v)).unwrap();
        }
        out
    }
}

/// For each `j ≤ j_max`, `sup_{0 ≤ m ≤ ⌊j/k⌋} |γ_m γ_j² / (γ_{j−km} γ²_{km}) · c_j|`,
/// the size of the slant little Hankel entries fed by the coefficient `c_j`.
pub fn compactness_tail<F>(coeff: F, k: usize, alpha: f64, j_max: usize) -> Result<TailReport>
where
    F: Fn(usize) -> Complex64,
{
    check_slant_order(k)?;
    if j_max < 1 {
        return Err(Error::validation("j_max must be at least 1"));
    }
    let weights = WeightTable::new(alpha, j_max)?;
    let lw = |n: usize| weights.log_weight(n);
    let sup_values = (0..=j_max)
        .map(|j| {
            let c = coeff(j).norm();
            if c == 0.0 {
                return 0.0;
            }
            let log_c = c.ln();
            (0..=j / k)
                .map(|m| (log_c + lw(m) + 2.0 * lw(j) - lw(j - k * m) - 2.0 * lw(k * m)).exp())
                .fold(0.0, f64::max)
        })
        .collect();
    Ok(TailReport { j_values: (0..=j_max).collect(), sup_values })
}

/// [`compactness_tail`] driven by the Hankel-active coefficients of `s`.
pub fn symbol_compactness_tail(s: &HarmonicSymbol, k: usize, alpha: f64, j_max: usize) -> Result<TailReport> {
    compactness_tail(|j| s.anti_coeff(j), k, alpha, j_max)
}

/// Number of index pairs `(m, n)` in the `N × N` truncation with `n + km ≤ P`,
/// the positions a slant little Hankel symbol of anti-degree `P` can reach.
pub fn hankel_support_count(anti_degree: usize, k: usize, dim: usize) -> Result<usize> {
    check_slant_order(k)?;
    if dim == 0 {
        return Ok(0);
    }
    let rows = (anti_degree / k).min(dim - 1);
    Ok((0..=rows).map(|m| (anti_degree - k * m + 1).min(dim)).sum())
}

/// Fraction of entries with `|entry| > tol`.
pub fn sparsity_ratio(a: &OperatorMatrix, tol: f64) -> Result<f64> {
    if tol.is_nan() || tol < 0.0 {
        return Err(Error::validation(format!("sparsity tolerance must be non-negative, got {tol}")));
    }
    let m = a.matrix();
    if m.is_empty() {
        return Ok(0.0);
    }
    let count = m.iter().filter(|z| z.norm() > tol).count();
    Ok(count as f64 / m.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DecayAxis {
    Row,
    Column,
    /// Index `j = n + km`, the symbol coefficient a slant little Hankel entry reads.
    Diagonal,
}

impl DecayAxis {
    pub fn tag(self) -> &'static str {
        match self {
            DecayAxis::Row => "row",
            DecayAxis::Column => "column",
            DecayAxis::Diagonal => "diagonal",
        }
    }
}

impl FromStr for DecayAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "row" => Ok(DecayAxis::Row),
            "column" | "col" => Ok(DecayAxis::Column),
            "diagonal" | "diag" => Ok(DecayAxis::Diagonal),
            _ => Err(Error::UnknownTag { what: "decay axis", tag: s.to_owned() }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayProfile {
    pub axis: DecayAxis,
    /// Largest entry modulus per axis index.
    pub values: Vec<f64>,
}

impl DecayProfile {
    /// `values[i+1] / values[i]`, `None` where `values[i]` is zero.
    pub fn ratios(&self) -> Vec<Option<f64>> {
        self.values.windows(2).map(|w| (w[0] > 0.0).then(|| w[1] / w[0])).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("axis_index,max_abs\n");
        for (i, v) in self.values.iter().enumerate() {
            writeln!(out, "{i},{}", format_float(*v)).unwrap();
        }
        out
    }
}

/// Maximum entry modulus along rows, columns or the slant index `n + km`.
///
/// The diagonal profile is trimmed after its last nonzero value, keeping at
/// least one entry.
pub fn decay_profile(a: &OperatorMatrix, axis: DecayAxis) -> DecayProfile {
    let m = a.matrix();
    let dim = a.dim();
    let values = match axis {
        DecayAxis::Row => (0..dim).map(|i| m.row(i).iter().fold(0.0, |acc, z| f64::max(acc, z.norm()))).collect(),
        DecayAxis::Column => {
            (0..dim).map(|j| m.column(j).iter().fold(0.0, |acc, z| f64::max(acc, z.norm()))).collect()
        }
        DecayAxis::Diagonal => {
            let k = a.params.k;
            let mut values = vec![0.0f64; dim.saturating_sub(1) * (k + 1) + 1];
            for row in 0..dim {
                for col in 0..dim {
                    let j = col + k * row;
                    values[j] = values[j].max(m[(row, col)].norm());
                }
            }
            let len = values.iter().rposition(|&v| v > 0.0).map_or(1, |p| p + 1);
            values.truncate(len);
            values
        }
    };
    DecayProfile { axis, values }
}

/// `pair_id,op_norm,frobenius` rows.
pub fn commutator_csv<'a>(rows: impl IntoIterator<Item = (&'a str, CommutatorNorms)>) -> String {
    let mut out = String::from("pair_id,op_norm,frobenius\n");
    for (id, n) in rows {
        writeln!(out, "{id},{},{}", format_float(n.operator_norm), format_float(n.frobenius)).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{build_matrix, Convention, OperatorKind};
    use crate::weights::SpaceParams;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn build(kind: OperatorKind, s: &HarmonicSymbol, alpha: f64, k: usize, dim: usize) -> OperatorMatrix {
        build_matrix(kind, Some(s), SpaceParams::new(alpha, k, dim).unwrap(), Convention::Monomial).unwrap()
    }

    fn brute_support(p: usize, k: usize, dim: usize) -> usize {
        (0..dim).flat_map(|m| (0..dim).map(move |n| (m, n))).filter(|&(m, n)| n + k * m <= p).count()
    }

    #[test]
    fn support_count_matches_enumeration() {
        assert_eq!(hankel_support_count(0, 2, 8).unwrap(), 1);
        assert_eq!(hankel_support_count(2, 2, 8).unwrap(), 4);
        assert_eq!(hankel_support_count(5, 2, 6).unwrap(), 12);
        for p in 0..20 {
            for k in 2..5 {
                for dim in 1..12 {
                    assert_eq!(hankel_support_count(p, k, dim).unwrap(), brute_support(p, k, dim), "{p} {k} {dim}");
                }
            }
        }
    }

    #[test]
    fn self_commutator_of_identical_matrices() {
        let s = HarmonicSymbol::new(vec![c(1.0), c(0.5)], vec![c(2.0)]).unwrap();
        let a = build(OperatorKind::SlantToeplitz, &s, 1.0, 2, 12);
        let n = commutator_norms(&a, &a).unwrap();
        assert_eq!((n.operator_norm, n.frobenius), (0.0, 0.0));
    }

    #[test]
    fn mismatched_dimensions() {
        let s = HarmonicSymbol::constant(c(1.0));
        let a = build(OperatorKind::Toeplitz, &s, 1.0, 2, 3);
        let b = build(OperatorKind::Toeplitz, &s, 1.0, 2, 4);
        assert!(matches!(commutator_norms(&a, &b), Err(Error::DimensionMismatch { left: 3, right: 4 })));
    }

    #[test]
    fn toeplitz_z_defect_golden() {
        let a = build(OperatorKind::Toeplitz, &HarmonicSymbol::monomial(1, c(1.0)), 1.0, 2, 16);
        let d = self_commutator_defect(&a).unwrap();
        assert!((d - 15.0 / 17.0).abs() < 1e-12, "{d}");
        let scalar = build(OperatorKind::Toeplitz, &HarmonicSymbol::constant(c(5.0)), 1.0, 2, 16);
        assert_eq!(self_commutator_defect(&scalar).unwrap(), 0.0);
    }

    #[test]
    fn polynomial_tail_vanishes() {
        let s = HarmonicSymbol::new(vec![c(1.0), c(2.0), c(3.0)], vec![c(4.0)]).unwrap();
        let t = symbol_compactness_tail(&s, 2, 1.0, 10).unwrap();
        assert!(t.sup_values[3..].iter().all(|&v| v == 0.0));
        assert_eq!(t.sup_values[0], 1.0);
        assert!(compactness_tail(|_| c(1.0), 2, 1.0, 0).is_err());
    }

    #[test]
    fn sparsity_examples() {
        let zero = build(OperatorKind::Toeplitz, &HarmonicSymbol::zero(), 1.0, 2, 10);
        assert_eq!(sparsity_ratio(&zero, 0.0).unwrap(), 0.0);
        let id = build(OperatorKind::Toeplitz, &HarmonicSymbol::constant(c(1.0)), 1.0, 2, 10);
        assert_eq!(sparsity_ratio(&id, 1e-15).unwrap(), 0.1);
        assert!(sparsity_ratio(&id, -1.0).is_err());
    }

    #[test]
    fn decay_profiles() {
        let zero = build(OperatorKind::SlantLittleHankel, &HarmonicSymbol::zero(), 1.0, 2, 6);
        for axis in [DecayAxis::Row, DecayAxis::Column] {
            assert!(decay_profile(&zero, axis).values.iter().all(|&v| v == 0.0));
        }
        assert_eq!(decay_profile(&zero, DecayAxis::Diagonal).values, vec![0.0]);

        let s = HarmonicSymbol::anti_monomial(3, c(1.0));
        let a = build(OperatorKind::SlantLittleHankel, &s, 1.0, 2, 6);
        let d = decay_profile(&a, DecayAxis::Diagonal);
        assert_eq!(d.values.len(), 4);
        assert!(d.values[..3].iter().all(|&v| v == 0.0) && d.values[3] > 0.0);
        assert!("sideways".parse::<DecayAxis>().is_err());
    }

    #[test]
    fn csv_headers() {
        let p = DecayProfile { axis: DecayAxis::Row, values: vec![1.0, 0.5] };
        assert_eq!(p.to_csv(), "axis_index,max_abs\n0,1.0\n1,0.5\n");
        let n = CommutatorNorms { operator_norm: 0.0, frobenius: 1.5 };
        assert_eq!(commutator_csv([("a", n)]), "pair_id,op_norm,frobenius\na,0.0,1.5\n");
    }
}
