//! Finitely supported harmonic symbols `φ(z) = Σ_{j≥0} a_j z̄^j + Σ_{j≥1} b_j z^j`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weights;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Relative tolerance used when comparing coefficients for linear dependence.
pub const DEPENDENCE_RTOL: f64 = 1e-12;

/// A harmonic symbol with finitely many nonzero coefficients.
///
/// `anti[j]` is the coefficient of `z̄^j` (so `anti[0]` is the constant term)
/// and `analytic[j - 1]` the coefficient of `z^j`. Both lists are kept free of
/// trailing zeros; `anti` always holds at least the constant slot.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicSymbol {
    anti: Vec<Complex64>,
    analytic: Vec<Complex64>,
}

impl Default for HarmonicSymbol {
    fn default() -> Self {
        Self::zero()
    }
}

fn trim(v: &mut Vec<Complex64>, keep: usize) {
    while v.len() > keep && v.last().is_some_and(|c| *c == ZERO) {
        v.pop();
    }
}

impl HarmonicSymbol {
    pub fn new(mut anti: Vec<Complex64>, mut analytic: Vec<Complex64>) -> Result<Self> {
        if let Some(c) = anti.iter().chain(&analytic).find(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::validation(format!("non-finite symbol coefficient {c}")));
        }
        if anti.is_empty() {
            anti.push(ZERO);
        }
        trim(&mut anti, 1);
        trim(&mut analytic, 0);
        Ok(Self { anti, analytic })
    }

    pub fn zero() -> Self {
        Self { anti: vec![ZERO], analytic: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self { anti: vec![c], analytic: Vec::new() }
    }

    /// `c · z^j` for `j ≥ 1`, or the constant `c` for `j = 0`.
    pub fn monomial(j: usize, c: Complex64) -> Self {
        let mut analytic = vec![ZERO; j];
        let mut anti = vec![ZERO];
        if j == 0 {
            anti[0] = c;
        } else {
            analytic[j - 1] = c;
        }
        Self::new(anti, analytic).expect("finite by construction")
    }

    /// `c · z̄^j`.
    pub fn anti_monomial(j: usize, c: Complex64) -> Self {
        let mut anti = vec![ZERO; j + 1];
        anti[j] = c;
        Self::new(anti, Vec::new()).expect("finite by construction")
    }

    /// Builds a symbol from coefficients against the normalized monomials
    /// `z̄^j / γ_j` and `z^j / γ_j` (non-negative indices only).
    pub fn from_normalized(anti: Vec<Complex64>, analytic: Vec<Complex64>, alpha: f64) -> Result<Self> {
        let anti = anti
            .into_iter()
            .enumerate()
            .map(|(j, c)| Ok(c / weights::gamma_weight(j, alpha)?))
            .collect::<Result<Vec<_>>>()?;
        let analytic = analytic
            .into_iter()
            .enumerate()
            .map(|(j, c)| Ok(c / weights::gamma_weight(j + 1, alpha)?))
            .collect::<Result<Vec<_>>>()?;
        Self::new(anti, analytic)
    }

    /// Coefficients of `z̄^0, z̄^1, …`.
    pub fn anti(&self) -> &[Complex64] {
        &self.anti
    }

    /// Coefficients of `z^1, z^2, …`.
    pub fn analytic(&self) -> &[Complex64] {
        &self.analytic
    }

    /// `a_j`, zero outside the support.
    #[inline]
    pub fn anti_coeff(&self, j: usize) -> Complex64 {
        self.anti.get(j).copied().unwrap_or(ZERO)
    }

    /// `b_j`, zero outside the support and for `j = 0`.
    #[inline]
    pub fn analytic_coeff(&self, j: usize) -> Complex64 {
        if j == 0 {
            ZERO
        } else {
            self.analytic.get(j - 1).copied().unwrap_or(ZERO)
        }
    }

    pub fn anti_degree(&self) -> usize {
        self.anti.len() - 1
    }

    pub fn analytic_degree(&self) -> usize {
        self.analytic.len()
    }

    pub fn is_zero(&self) -> bool {
        self.analytic.is_empty() && self.anti[0] == ZERO && self.anti.len() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.anti.len() == 1 && self.analytic.is_empty()
    }

    pub fn is_analytic(&self) -> bool {
        self.anti.len() == 1
    }

    pub fn is_anti_analytic(&self) -> bool {
        self.analytic.is_empty()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let anti = self.anti.iter().map(|a| a * c).collect();
        let analytic = self.analytic.iter().map(|b| b * c).collect();
        Self::new(anti, analytic).expect("scaling finite coefficients by a finite scalar")
    }

    fn coefficients(&self, len_anti: usize, len_analytic: usize) -> impl Iterator<Item = Complex64> + '_ {
        (0..len_anti).map(|j| self.anti_coeff(j)).chain((1..=len_analytic).map(|j| self.analytic_coeff(j)))
    }
}

/// Which half of the exponential series [`truncate_exponential`] fills.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpKind {
    /// `Σ_{j≤d} z^j / j!`
    Analytic,
    /// `Σ_{j≤d} z̄^j / j!`
    AntiAnalytic,
}

impl std::str::FromStr for ExpKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic-exp" | "analytic" => Ok(Self::Analytic),
            "anti-exp" | "anti" => Ok(Self::AntiAnalytic),
            _ => Err(Error::UnknownTag { what: "exponential kind", tag: s.to_owned() }),
        }
    }
}

/// Taylor truncation of `e^z` (or of `e^{z̄}`) at `degree`.
pub fn truncate_exponential(kind: ExpKind, degree: i64) -> Result<HarmonicSymbol> {
    if degree < 0 {
        return Err(Error::validation(format!("degree must be non-negative, got {degree}")));
    }
    let degree = degree as usize;
    let mut coeffs = Vec::with_capacity(degree + 1);
    let mut term = 1.0;
    for j in 0..=degree {
        if j > 0 {
            term /= j as f64;
        }
        coeffs.push(Complex64::new(term, 0.0));
    }
    match kind {
        ExpKind::AntiAnalytic => HarmonicSymbol::new(coeffs, Vec::new()),
        ExpKind::Analytic => {
            let analytic = coeffs.split_off(1);
            HarmonicSymbol::new(coeffs, analytic)
        }
    }
}

/// Returns `c` with `psi = c · phi` coefficientwise, if one exists.
pub fn linear_dependence(phi: &HarmonicSymbol, psi: &HarmonicSymbol) -> Option<Complex64> {
    if phi.is_zero() {
        return psi.is_zero().then_some(ZERO);
    }
    let len_anti = phi.anti.len().max(psi.anti.len());
    let len_analytic = phi.analytic.len().max(psi.analytic.len());

    let (pivot_phi, pivot_psi) = phi
        .coefficients(len_anti, len_analytic)
        .zip(psi.coefficients(len_anti, len_analytic))
        .fold((ZERO, ZERO), |best, (f, g)| if f.norm() > best.0.norm() { (f, g) } else { best });
    let c = pivot_psi / pivot_phi;

    let consistent = phi
        .coefficients(len_anti, len_analytic)
        .zip(psi.coefficients(len_anti, len_analytic))
        .all(|(f, g)| {
            let scaled = c * f;
            (g - scaled).norm() <= DEPENDENCE_RTOL * g.norm().max(scaled.norm())
        });
    consistent.then_some(c)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SymbolWire {
    analytic: Vec<[f64; 2]>,
    anti: Vec<[f64; 2]>,
}

fn to_complex(pairs: Vec<[f64; 2]>) -> Vec<Complex64> {
    pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect()
}

fn to_pairs(coeffs: &[Complex64]) -> Vec<[f64; 2]> {
    coeffs.iter().map(|c| [c.re, c.im]).collect()
}

/// Parses the symbol JSON schema: `{"anti": [[re, im], …], "analytic": [[re, im], …]}`.
pub fn parse_symbol(text: &str) -> Result<HarmonicSymbol> {
    let wire: SymbolWire = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    HarmonicSymbol::new(to_complex(wire.anti), to_complex(wire.analytic))
}

/// Canonical JSON form: sorted keys, no whitespace, shortest round-trip floats.
pub fn serialize_symbol(s: &HarmonicSymbol) -> String {
    let wire = SymbolWire { analytic: to_pairs(&s.analytic), anti: to_pairs(&s.anti) };
    serde_json::to_string(&wire).expect("finite coefficients always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn parse_examples() {
        let one = parse_symbol(r#"{"anti":[[1,0]],"analytic":[]}"#).unwrap();
        assert!(one.is_constant());
        assert_eq!(one.anti_coeff(0), c(1.0, 0.0));

        let s = parse_symbol(r#"{"anti":[[0,0],[0,0],[2,0]],"analytic":[]}"#).unwrap();
        assert_eq!(s, HarmonicSymbol::anti_monomial(2, c(2.0, 0.0)));
        assert!(s.is_anti_analytic() && !s.is_analytic());

        let s = parse_symbol(r#"{"anti":[[0,0]],"analytic":[[1,0],[0.5,0]]}"#).unwrap();
        assert_eq!(s.analytic_coeff(1), c(1.0, 0.0));
        assert_eq!(s.analytic_coeff(2), c(0.5, 0.0));
        assert!(s.is_analytic());
    }

    #[test]
    fn parse_trims_trailing_zeros() {
        let s = parse_symbol(r#"{"anti":[[1,0],[0,0],[0,0]],"analytic":[[0,0]]}"#).unwrap();
        assert_eq!(s.anti().len(), 1);
        assert!(s.analytic().is_empty());
        let z = parse_symbol(r#"{"anti":[],"analytic":[]}"#).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn parse_errors() {
        match parse_symbol("{\"anti\": [[1,0]],\n \"analytic\": [[1,]]}") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(parse_symbol(r#"{"anti":[[1,0]]}"#), Err(Error::Parse { .. })));
        assert!(matches!(parse_symbol(r#"{"anti":[[1e999,0]],"analytic":[]}"#), Err(Error::Parse { .. })));
        assert!(matches!(
            HarmonicSymbol::new(vec![c(f64::NAN, 0.0)], vec![]),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn serialize_examples() {
        assert_eq!(serialize_symbol(&HarmonicSymbol::zero()), r#"{"analytic":[],"anti":[[0.0,0.0]]}"#);
        assert_eq!(
            serialize_symbol(&HarmonicSymbol::anti_monomial(1, c(1.0, 0.0))),
            r#"{"analytic":[],"anti":[[0.0,0.0],[1.0,0.0]]}"#
        );
        let s = HarmonicSymbol::new(vec![c(3.0, 0.0)], vec![c(0.0, 1.0)]).unwrap();
        assert_eq!(serialize_symbol(&s), r#"{"analytic":[[0.0,1.0]],"anti":[[3.0,0.0]]}"#);
    }

    #[test]
    fn dependence_examples() {
        let phi = HarmonicSymbol::new(vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0)]).unwrap();
        let psi = phi.scale(c(2.0, 0.0));
        assert_eq!(linear_dependence(&phi, &psi), Some(c(2.0, 0.0)));

        let z = HarmonicSymbol::monomial(1, c(1.0, 0.0));
        let z2 = HarmonicSymbol::monomial(2, c(1.0, 0.0));
        assert_eq!(linear_dependence(&z, &z2), None);

        let zero = HarmonicSymbol::zero();
        assert_eq!(linear_dependence(&zero, &zero), Some(c(0.0, 0.0)));
        assert_eq!(linear_dependence(&zero, &z), None);
        assert_eq!(linear_dependence(&z, &zero), Some(c(0.0, 0.0)));
    }

    #[test]
    fn dependence_rejects_small_perturbation() {
        let phi = HarmonicSymbol::new(vec![c(1.0, 0.0), c(0.5, 0.0)], vec![c(0.25, 0.0)]).unwrap();
        let mut anti = phi.scale(c(3.0, 0.0)).anti().to_vec();
        anti[1] += c(1e-9, 0.0);
        let psi = HarmonicSymbol::new(anti, phi.scale(c(3.0, 0.0)).analytic().to_vec()).unwrap();
        assert_eq!(linear_dependence(&phi, &psi), None);
    }

    #[test]
    fn exponential_truncations() {
        assert!(truncate_exponential(ExpKind::Analytic, 0).unwrap().is_constant());
        let s = truncate_exponential(ExpKind::Analytic, 2).unwrap();
        assert_eq!(s.anti(), &[c(1.0, 0.0)]);
        assert_eq!(s.analytic(), &[c(1.0, 0.0), c(0.5, 0.0)]);
        let s = truncate_exponential(ExpKind::AntiAnalytic, 3).unwrap();
        assert_eq!(s.anti().len(), 4);
        assert!((s.anti_coeff(3).re - 1.0 / 6.0).abs() < 1e-16);
        assert!(s.is_anti_analytic());
        assert!(truncate_exponential(ExpKind::Analytic, -1).is_err());
    }

    #[test]
    fn normalized_input_divides_by_weights() {
        let s = HarmonicSymbol::from_normalized(vec![c(1.0, 0.0), c(1.0, 0.0)], vec![c(2.0, 0.0)], 1.0).unwrap();
        assert_eq!(s.anti_coeff(0), c(1.0, 0.0));
        assert!((s.anti_coeff(1).re - 3f64.sqrt()).abs() < 1e-14);
        assert!((s.analytic_coeff(1).re - 2.0 * 3f64.sqrt()).abs() < 1e-14);
    }
}
