#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use slant_core::{Complex64, HarmonicSymbol, OperatorMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_complex(rng: &mut impl Rng) -> Complex64 {
    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Symbol with anti- and analytic degree at most `max_degree`.
pub fn random_symbol(rng: &mut impl Rng, max_degree: usize) -> HarmonicSymbol {
    let anti = (0..=rng.gen_range(0..=max_degree)).map(|_| random_complex(rng)).collect();
    let analytic = (0..rng.gen_range(0..=max_degree)).map(|_| random_complex(rng)).collect();
    HarmonicSymbol::new(anti, analytic).unwrap()
}

pub fn max_dev(a: &OperatorMatrix, b: &OperatorMatrix) -> f64 {
    a.matrix().iter().zip(b.matrix().iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
