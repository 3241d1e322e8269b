//! Closed-form matrix entries `⟨A e_n, e_m⟩`.
//!
//! All weight factors are combined in the log domain and exponentiated once,
//! so entries stay accurate at truncation sizes where the individual `γ_n`
//! have long since left the comfortable range of `f64`.

use num_complex::Complex64;

use super::{Convention, OperatorKind};
use crate::error::Result;
use crate::symbols::HarmonicSymbol;
use crate::weights::{check_slant_order, WeightTable};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Entry formulas evaluated against a shared weight table.
///
/// The table must cover every index the requested entries touch; see
/// [`EntryFormulas::required_index`].
#[derive(Debug, Clone, Copy)]
pub struct EntryFormulas<'a> {
    weights: &'a WeightTable,
}

impl<'a> EntryFormulas<'a> {
    pub fn new(weights: &'a WeightTable) -> Self {
        Self { weights }
    }

    /// Largest weight index touched by any entry of an `dim × dim` truncation.
    pub fn required_index(kind: OperatorKind, k: usize, dim: usize) -> usize {
        let last = dim.saturating_sub(1);
        match kind {
            OperatorKind::Toeplitz => last,
            OperatorKind::LittleHankel => 2 * last,
            OperatorKind::SlantShift | OperatorKind::SlantShiftAdjoint | OperatorKind::SlantToeplitz => k * last,
            OperatorKind::SlantLittleHankel => (k + 1) * last,
        }
    }

    #[inline]
    fn lw(&self, n: usize) -> f64 {
        self.weights.log_weight(n)
    }

    /// `(γ_n/γ_m) a_{n−m}` for `n ≥ m`, `(γ_m/γ_n) b_{m−n}` otherwise.
    pub fn toeplitz(&self, m: usize, n: usize, s: &HarmonicSymbol) -> Complex64 {
        let (coeff, log_factor) = if n >= m {
            (s.anti_coeff(n - m), self.lw(n) - self.lw(m))
        } else {
            (s.analytic_coeff(m - n), self.lw(m) - self.lw(n))
        };
        scaled(coeff, log_factor)
    }

    /// `(γ²_{n+m} / (γ_n γ_m)) a_{n+m}`.
    pub fn hankel(&self, m: usize, n: usize, s: &HarmonicSymbol) -> Complex64 {
        let coeff = s.anti_coeff(n + m);
        if coeff == ZERO {
            return ZERO;
        }
        scaled(coeff, 2.0 * self.lw(n + m) - self.lw(n) - self.lw(m))
    }

    /// Truncation entry of `W_k`: nonzero only at `n = km`.
    pub fn slant_shift(&self, m: usize, n: usize, k: usize, convention: Convention) -> f64 {
        if n != k * m {
            return 0.0;
        }
        match convention {
            Convention::Monomial => self.weights.ratio(m, k * m),
            Convention::Normalized => 1.0,
        }
    }

    /// Truncation entry of `W_k^*`, the conjugate transpose of [`Self::slant_shift`].
    pub fn slant_shift_adjoint(&self, m: usize, n: usize, k: usize, convention: Convention) -> f64 {
        self.slant_shift(n, m, k, convention)
    }

    /// `(γ_m γ_n / γ²_{km}) a_{n−km}` for `n ≥ km`, `(γ_m/γ_n) b_{km−n}` otherwise
    /// (monomial convention). Under the normalized convention the row is
    /// `⟨T_φ e_n, e_{km}⟩`.
    pub fn slant_toeplitz(&self, m: usize, n: usize, s: &HarmonicSymbol, k: usize, convention: Convention) -> Complex64 {
        let km = k * m;
        let (coeff, mut log_factor) = if n >= km {
            (s.anti_coeff(n - km), self.lw(n) - self.lw(km))
        } else {
            (s.analytic_coeff(km - n), self.lw(km) - self.lw(n))
        };
        if coeff == ZERO {
            return ZERO;
        }
        if convention == Convention::Monomial {
            log_factor += self.lw(m) - self.lw(km);
        }
        scaled(coeff, log_factor)
    }

    /// `(γ_m γ²_{n+km} / (γ_n γ²_{km})) a_{n+km}` (monomial convention). Under
    /// the normalized convention the row is `⟨H_φ e_n, e_{km}⟩`.
    pub fn slant_hankel(&self, m: usize, n: usize, s: &HarmonicSymbol, k: usize, convention: Convention) -> Complex64 {
        let km = k * m;
        let coeff = s.anti_coeff(n + km);
        if coeff == ZERO {
            return ZERO;
        }
        let mut log_factor = 2.0 * self.lw(n + km) - self.lw(n) - self.lw(km);
        if convention == Convention::Monomial {
            log_factor += self.lw(m) - self.lw(km);
        }
        scaled(coeff, log_factor)
    }

    /// Dispatches on `kind`. `s` is ignored by the two shift kinds.
    pub fn entry(
        &self,
        kind: OperatorKind,
        m: usize,
        n: usize,
        s: &HarmonicSymbol,
        k: usize,
        convention: Convention,
    ) -> Complex64 {
        match kind {
            OperatorKind::Toeplitz => self.toeplitz(m, n, s),
            OperatorKind::LittleHankel => self.hankel(m, n, s),
            OperatorKind::SlantShift => Complex64::new(self.slant_shift(m, n, k, convention), 0.0),
            OperatorKind::SlantShiftAdjoint => Complex64::new(self.slant_shift_adjoint(m, n, k, convention), 0.0),
            OperatorKind::SlantToeplitz => self.slant_toeplitz(m, n, s, k, convention),
            OperatorKind::SlantLittleHankel => self.slant_hankel(m, n, s, k, convention),
        }
    }
}

#[inline]
fn scaled(coeff: Complex64, log_factor: f64) -> Complex64 {
    if coeff == ZERO {
        ZERO
    } else {
        coeff * log_factor.exp()
    }
}

fn table(alpha: f64, max_index: usize) -> Result<WeightTable> {
    WeightTable::new(alpha, max_index)
}

pub fn toeplitz_entry(m: usize, n: usize, s: &HarmonicSymbol, alpha: f64) -> Result<Complex64> {
    let w = table(alpha, m.max(n))?;
    Ok(EntryFormulas::new(&w).toeplitz(m, n, s))
}

pub fn hankel_entry(m: usize, n: usize, s: &HarmonicSymbol, alpha: f64) -> Result<Complex64> {
    let w = table(alpha, m + n)?;
    Ok(EntryFormulas::new(&w).hankel(m, n, s))
}

pub fn slant_shift_entry(m: usize, n: usize, k: usize, alpha: f64, convention: Convention) -> Result<f64> {
    check_slant_order(k)?;
    let w = table(alpha, k * m)?;
    Ok(EntryFormulas::new(&w).slant_shift(m, n, k, convention))
}

pub fn slant_toeplitz_entry(m: usize, n: usize, s: &HarmonicSymbol, k: usize, alpha: f64) -> Result<Complex64> {
    check_slant_order(k)?;
    let w = table(alpha, n.max(k * m))?;
    Ok(EntryFormulas::new(&w).slant_toeplitz(m, n, s, k, Convention::Monomial))
}

pub fn slant_hankel_entry(m: usize, n: usize, s: &HarmonicSymbol, k: usize, alpha: f64) -> Result<Complex64> {
    check_slant_order(k)?;
    let w = table(alpha, n + k * m)?;
    Ok(EntryFormulas::new(&w).slant_hankel(m, n, s, k, Convention::Monomial))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn close(a: Complex64, b: f64) -> bool {
        (a - c(b)).norm() <= 1e-14 * b.abs().max(1.0)
    }

    #[test]
    fn toeplitz_examples() {
        let a1 = HarmonicSymbol::anti_monomial(1, c(1.0));
        assert!(close(toeplitz_entry(0, 1, &a1, 1.0).unwrap(), 1.0 / 3f64.sqrt()));

        let s = HarmonicSymbol::new(vec![c(0.7), c(2.0)], vec![c(3.0)]).unwrap();
        assert_eq!(toeplitz_entry(7, 7, &s, 2.3).unwrap(), c(0.7));

        let b2 = HarmonicSymbol::monomial(2, c(1.0));
        assert!(close(toeplitz_entry(2, 0, &b2, 0.0).unwrap(), 1.0 / 3f64.sqrt()));
    }

    #[test]
    fn toeplitz_alpha_one_display() {
        // first rows of the α = 1 display, which agree with the entry formula
        let s = HarmonicSymbol::new(vec![c(1.0), c(1.0), c(1.0), c(1.0)], vec![c(1.0), c(1.0), c(1.0)]).unwrap();
        let expect = [
            (0, 2, 1.0 / 6f64.sqrt()),
            (0, 3, 1.0 / 10f64.sqrt()),
            (1, 2, 1.0 / 2f64.sqrt()),
            (1, 3, 0.3f64.sqrt()),
            (2, 3, 0.6f64.sqrt()),
            (3, 1, 0.3f64.sqrt()),
            (3, 0, 1.0 / 10f64.sqrt()),
        ];
        for (m, n, v) in expect {
            assert!(close(toeplitz_entry(m, n, &s, 1.0).unwrap(), v), "({m},{n})");
        }
    }

    #[test]
    fn hankel_examples() {
        let s = HarmonicSymbol::constant(Complex64::new(0.3, -1.1));
        assert_eq!(hankel_entry(0, 0, &s, 4.0).unwrap(), Complex64::new(0.3, -1.1));
        let a2 = HarmonicSymbol::anti_monomial(2, c(1.0));
        assert!(close(hankel_entry(1, 1, &a2, 1.0).unwrap(), 0.5));
        let a1 = HarmonicSymbol::anti_monomial(1, c(1.0));
        assert!(close(hankel_entry(0, 1, &a1, 0.0).unwrap(), 1.0 / 2f64.sqrt()));
        let analytic = HarmonicSymbol::monomial(3, c(1.0));
        assert_eq!(hankel_entry(1, 2, &analytic, 1.0).unwrap(), c(0.0));
    }

    #[test]
    fn slant_shift_examples() {
        assert_eq!(slant_shift_entry(0, 0, 3, 2.0, Convention::Monomial).unwrap(), 1.0);
        assert!((slant_shift_entry(1, 2, 2, 1.0, Convention::Monomial).unwrap() - 2f64.sqrt()).abs() < 1e-14);
        assert_eq!(slant_shift_entry(1, 2, 2, 1.0, Convention::Normalized).unwrap(), 1.0);
        assert_eq!(slant_shift_entry(1, 3, 2, 1.0, Convention::Monomial).unwrap(), 0.0);
        assert!(slant_shift_entry(1, 2, 1, 1.0, Convention::Monomial).is_err());
    }

    #[test]
    fn slant_toeplitz_examples() {
        let s = HarmonicSymbol::constant(c(2.5));
        assert_eq!(slant_toeplitz_entry(0, 0, &s, 2, 1.0).unwrap(), c(2.5));
        let a2 = HarmonicSymbol::anti_monomial(2, c(1.0));
        assert!(close(slant_toeplitz_entry(0, 2, &a2, 2, 1.0).unwrap(), 1.0 / 6f64.sqrt()));
        let b2 = HarmonicSymbol::monomial(2, c(1.0));
        assert!(close(slant_toeplitz_entry(1, 0, &b2, 2, 1.0).unwrap(), 1.0 / 3f64.sqrt()));
    }

    #[test]
    fn slant_hankel_examples() {
        let s = HarmonicSymbol::constant(c(-4.0));
        assert_eq!(slant_hankel_entry(0, 0, &s, 2, 1.0).unwrap(), c(-4.0));
        let a2 = HarmonicSymbol::anti_monomial(2, c(1.0));
        assert!(close(slant_hankel_entry(1, 0, &a2, 2, 1.0).unwrap(), 1.0 / 3f64.sqrt()));
        assert!(close(slant_hankel_entry(0, 2, &a2, 2, 1.0).unwrap(), 1.0 / 6f64.sqrt()));
    }

    /// Closed forms for k = 2 at α = 1 and α = 2, written out as rational
    /// expressions in m and n.
    #[test]
    fn slant_hankel_closed_forms() {
        let anti: Vec<_> = (0..=3 * 64).map(|j| c(1.0 + 0.01 * j as f64)).collect();
        let s = HarmonicSymbol::new(anti.clone(), vec![]).unwrap();
        let w1 = WeightTable::new(1.0, 3 * 64).unwrap();
        let w2 = WeightTable::new(2.0, 3 * 64).unwrap();
        for m in 0..=64usize {
            for n in 0..=64usize {
                let (mf, nf) = (m as f64, n as f64);
                let a = anti[n + 2 * m].re;
                let f1 = (2.0 * mf + 1.0) * (2.0 * mf + 2.0) / ((nf + 2.0 * mf + 1.0) * (nf + 2.0 * mf + 2.0))
                    * ((nf + 1.0) * (nf + 2.0) / ((mf + 1.0) * (mf + 2.0))).sqrt()
                    * a;
                let got = EntryFormulas::new(&w1).slant_hankel(m, n, &s, 2, Convention::Monomial);
                assert!((got.re - f1).abs() <= 1e-12 * f1.abs(), "alpha=1 ({m},{n})");
                let f2 = (2.0 * mf + 1.0) * (2.0 * mf + 2.0) * (2.0 * mf + 3.0)
                    / ((nf + 2.0 * mf + 1.0) * (nf + 2.0 * mf + 2.0) * (nf + 2.0 * mf + 3.0))
                    * ((nf + 1.0) * (nf + 2.0) * (nf + 3.0) / ((mf + 1.0) * (mf + 2.0) * (mf + 3.0))).sqrt()
                    * a;
                let got = EntryFormulas::new(&w2).slant_hankel(m, n, &s, 2, Convention::Monomial);
                assert!((got.re - f2).abs() <= 1e-12 * f2.abs(), "alpha=2 ({m},{n})");
            }
        }
    }
}
