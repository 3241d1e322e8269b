//! Finite truncations of Toeplitz, little Hankel and slant operators on the
//! weighted Bergman spaces `A²_α` of the unit disc, together with spectral
//! and algebraic diagnostics of those truncations.
//!
//! ```
//! use num_complex::Complex64;
//! use slant_core::{build_matrix, Convention, HarmonicSymbol, OperatorKind, SpaceParams};
//!
//! let params = SpaceParams::new(1.0, 2, 8)?;
//! let phi = HarmonicSymbol::anti_monomial(2, Complex64::new(1.0, 0.0));
//! let s = build_matrix(OperatorKind::SlantLittleHankel, Some(&phi), params, Convention::Monomial)?;
//! assert_eq!(s.dim(), 8);
//! # Ok::<(), slant_core::Error>(())
//! ```

pub mod analysis;
pub mod error;
pub mod operators;
pub mod spectral;
pub mod symbols;
pub mod weights;

pub use num_complex::Complex64;

pub use error::{Error, Result};
pub use operators::{build_matrix, Convention, OperatorKind, OperatorMatrix};
pub use symbols::{linear_dependence, parse_symbol, serialize_symbol, truncate_exponential, ExpKind, HarmonicSymbol};
pub use weights::{SpaceParams, WeightTable};
