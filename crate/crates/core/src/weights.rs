//! Basis weights of the weighted Bergman space.
//!
//! The orthonormal basis is `e_n = z^n / γ_n` with
//! `γ_n = sqrt(Γ(n+1) Γ(α+2) / Γ(n+α+2))`. Every quantity here is evaluated
//! in the log domain: direct Γ quotients overflow long before the truncation
//! sizes the rest of the crate works with.

use libm::lgamma;
use serde::Serialize;

use crate::error::{Error, Result};

/// Smallest admissible weight exponent. Values at or below it are rejected.
pub const ALPHA_FLOOR: f64 = -1.0 + 1e-9;

/// Configuration shared by every computation: weight exponent, slant order
/// and truncation dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpaceParams {
    pub alpha: f64,
    pub k: usize,
    pub dim: usize,
}

impl SpaceParams {
    pub fn new(alpha: f64, k: usize, dim: usize) -> Result<Self> {
        check_alpha(alpha)?;
        check_slant_order(k)?;
        if dim == 0 {
            return Err(Error::validation("truncation dimension must be at least 1"));
        }
        Ok(Self { alpha, k, dim })
    }

    pub fn with_dim(self, dim: usize) -> Result<Self> {
        Self::new(self.alpha, self.k, dim)
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > ALPHA_FLOOR {
        Ok(())
    } else {
        Err(Error::Domain(format!("alpha must satisfy alpha > -1, got {alpha}")))
    }
}

pub(crate) fn check_slant_order(k: usize) -> Result<()> {
    if k >= 2 {
        Ok(())
    } else {
        Err(Error::Domain(format!("slant order must satisfy k >= 2, got {k}")))
    }
}

/// `log γ_n`, without validating `alpha`.
fn log_weight_unchecked(n: usize, alpha: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let x = n as f64;
    0.5 * (lgamma(x + 1.0) + lgamma(alpha + 2.0) - lgamma(x + alpha + 2.0))
}

/// `log γ_n`.
pub fn log_gamma_weight(n: usize, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(log_weight_unchecked(n, alpha))
}

/// `γ_n = sqrt(Γ(n+1) Γ(α+2) / Γ(n+α+2))`.
pub fn gamma_weight(n: usize, alpha: f64) -> Result<f64> {
    Ok(log_gamma_weight(n, alpha)?.exp())
}

/// `γ_p / γ_q`, exactly 1 when `p == q`.
pub fn weight_ratio(p: usize, q: usize, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if p == q {
        return Ok(1.0);
    }
    Ok((log_weight_unchecked(p, alpha) - log_weight_unchecked(q, alpha)).exp())
}

/// Coefficient of `z^{s-t}` in the Bergman projection of `z̄^t z^s`:
/// `Γ(s+1) Γ(s−t+α+2) / (Γ(s+α+2) Γ(s−t+1))` for `s ≥ t`, zero otherwise.
///
/// Evaluated straight from the Γ quotient rather than through the weight
/// table, so it can serve as an independent route to `γ_s² / γ_{s−t}²`.
pub fn projection_coeff(s: usize, t: usize, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if s < t {
        return Ok(0.0);
    }
    if t == 0 {
        return Ok(1.0);
    }
    let s = s as f64;
    let d = s - t as f64;
    Ok((lgamma(s + 1.0) + lgamma(d + alpha + 2.0) - lgamma(s + alpha + 2.0) - lgamma(d + 1.0)).exp())
}

/// `γ_m / γ_{km}`. Increases in `m` towards `k^{(α+1)/2}`.
pub fn slant_ratio(m: usize, k: usize, alpha: f64) -> Result<f64> {
    check_slant_order(k)?;
    weight_ratio(m, k * m, alpha)
}

/// Limit of [`slant_ratio`] as `m → ∞`.
pub fn slant_ratio_limit(k: usize, alpha: f64) -> Result<f64> {
    check_slant_order(k)?;
    check_alpha(alpha)?;
    Ok((k as f64).powf(0.5 * (alpha + 1.0)))
}

/// Refined large-`n` asymptote `sqrt(Γ(α+2)) · n^{−(α+1)/2}`. Diagnostics only.
pub fn asymptotic_weight(n: usize, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if n == 0 {
        return Ok(1.0);
    }
    Ok((0.5 * lgamma(alpha + 2.0) - 0.5 * (alpha + 1.0) * (n as f64).ln()).exp())
}

/// `γ_{k(p+km)} / γ²_{p+km}`, the ratio whose large-`m` behaviour enters the
/// commutation argument for slant little Hankel operators. It grows without
/// bound; exposed so the growth can be measured.
pub fn slant_hankel_commutation_ratio(p: usize, m: usize, k: usize, alpha: f64) -> Result<f64> {
    check_slant_order(k)?;
    check_alpha(alpha)?;
    let q = p + k * m;
    Ok((log_weight_unchecked(k * q, alpha) - 2.0 * log_weight_unchecked(q, alpha)).exp())
}

/// Cached `log γ_n` for `0 ≤ n ≤ max_index`. Immutable after construction.
#[derive(Debug, Clone)]
pub struct WeightTable {
    alpha: f64,
    log_weights: Vec<f64>,
}

impl WeightTable {
    pub fn new(alpha: f64, max_index: usize) -> Result<Self> {
        check_alpha(alpha)?;
        let log_weights = (0..=max_index).map(|n| log_weight_unchecked(n, alpha)).collect();
        Ok(Self { alpha, log_weights })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn max_index(&self) -> usize {
        self.log_weights.len() - 1
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    /// Panics if `n` exceeds `max_index`.
    #[inline]
    pub fn log_weight(&self, n: usize) -> f64 {
        self.log_weights[n]
    }

    #[inline]
    pub fn weight(&self, n: usize) -> f64 {
        self.log_weights[n].exp()
    }

    #[inline]
    pub fn ratio(&self, p: usize, q: usize) -> f64 {
        if p == q {
            1.0
        } else {
            (self.log_weights[p] - self.log_weights[q]).exp()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `γ_n² = ∏_{i=1..n} i / (α+1+i)`, accumulated directly.
    fn product_weight_sq(n: usize, alpha: f64) -> f64 {
        (1..=n).map(|i| i as f64 / (alpha + 1.0 + i as f64)).product()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn gamma_weight_examples() {
        assert_eq!(gamma_weight(0, 1.7).unwrap(), 1.0);
        assert!(rel(gamma_weight(2, 1.0).unwrap(), 1.0 / 6f64.sqrt()) < 1e-14);
        assert!(rel(gamma_weight(3, 0.0).unwrap(), 0.5) < 1e-14);
    }

    #[test]
    fn gamma_weight_matches_product_formula() {
        for &alpha in &[0.0, 1.0, 2.0, 2.5, -0.5, 7.25] {
            for n in 0..=200 {
                let exact = product_weight_sq(n, alpha).sqrt();
                assert!(rel(gamma_weight(n, alpha).unwrap(), exact) < 1e-12, "n={n} alpha={alpha}");
            }
        }
    }

    #[test]
    fn weight_ratio_examples() {
        assert_eq!(weight_ratio(5, 5, 0.3).unwrap(), 1.0);
        assert!(rel(weight_ratio(1, 2, 1.0).unwrap(), 2f64.sqrt()) < 1e-14);
        assert!(rel(weight_ratio(3, 1, 1.0).unwrap(), 0.3f64.sqrt()) < 1e-14);
    }

    #[test]
    fn weight_ratio_matches_product_formula() {
        for &alpha in &[0.0, 1.0, 2.5] {
            for p in (0..=200).step_by(7) {
                for q in (0..=200).step_by(11) {
                    let exact = (product_weight_sq(p, alpha) / product_weight_sq(q, alpha)).sqrt();
                    assert!(rel(weight_ratio(p, q, alpha).unwrap(), exact) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn projection_coeff_examples() {
        assert_eq!(projection_coeff(4, 0, 2.5).unwrap(), 1.0);
        assert_eq!(projection_coeff(1, 3, 1.0).unwrap(), 0.0);
        assert!(rel(projection_coeff(2, 1, 0.0).unwrap(), 2.0 / 3.0) < 1e-14);
    }

    #[test]
    fn projection_coeff_is_squared_weight_ratio() {
        for &alpha in &[0.0, 1.0, 2.0, 2.5] {
            for s in 0..=100 {
                for t in 0..=s {
                    let r = weight_ratio(s, s - t, alpha).unwrap();
                    assert!(rel(projection_coeff(s, t, alpha).unwrap(), r * r) < 1e-10);
                }
            }
        }
    }

    #[test]
    fn slant_ratio_examples() {
        assert_eq!(slant_ratio(0, 2, 1.0).unwrap(), 1.0);
        assert!(rel(slant_ratio(1, 2, 1.0).unwrap(), 2f64.sqrt()) < 1e-14);
        assert!((slant_ratio(10_000, 2, 1.0).unwrap() - 2.0).abs() < 1e-3);
    }

    #[test]
    fn slant_ratio_increases_below_limit() {
        for &(k, alpha) in &[(2, 1.0), (3, 0.0), (2, 2.5)] {
            let limit = slant_ratio_limit(k, alpha).unwrap();
            let mut prev = 0.0;
            for m in (0..=100_000).step_by(997) {
                let r = slant_ratio(m, k, alpha).unwrap();
                assert!(r > prev && r <= limit, "k={k} alpha={alpha} m={m}");
                prev = r;
            }
        }
    }

    #[test]
    fn weights_strictly_decrease() {
        for &alpha in &[0.0, 1.0, 2.0, 2.5] {
            let table = WeightTable::new(alpha, 4096).unwrap();
            assert_eq!(table.log_weight(0), 0.0);
            assert!(table.log_weights().windows(2).all(|w| w[1] < w[0]));
        }
    }

    #[test]
    fn table_agrees_with_pointwise_weights() {
        let table = WeightTable::new(1.5, 300).unwrap();
        for n in 0..=300 {
            assert_eq!(table.weight(n), gamma_weight(n, 1.5).unwrap());
        }
    }

    #[test]
    fn rejects_alpha_out_of_domain() {
        assert!(matches!(gamma_weight(3, -1.0), Err(Error::Domain(_))));
        assert!(matches!(gamma_weight(3, ALPHA_FLOOR), Err(Error::Domain(_))));
        assert!(matches!(weight_ratio(3, 1, -2.0), Err(Error::Domain(_))));
        assert!(matches!(projection_coeff(3, 1, f64::NAN), Err(Error::Domain(_))));
        assert!(gamma_weight(3, -0.999).is_ok());
        assert!(matches!(slant_ratio(3, 1, 1.0), Err(Error::Domain(_))));
        assert!(SpaceParams::new(1.0, 2, 0).is_err());
    }

    #[test]
    fn asymptote_tracks_weights() {
        let w = gamma_weight(100_000, 1.0).unwrap();
        let a = asymptotic_weight(100_000, 1.0).unwrap();
        assert!(rel(w, a) < 1e-4);
    }

    #[test]
    fn commutation_ratio_diverges() {
        let r1 = slant_hankel_commutation_ratio(1, 10, 2, 1.0).unwrap();
        let r2 = slant_hankel_commutation_ratio(1, 1000, 2, 1.0).unwrap();
        assert!(r2 > 10.0 * r1);
    }
}
