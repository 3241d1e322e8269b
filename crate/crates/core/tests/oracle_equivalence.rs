use proptest::prelude::*;
use slant_core::operators::oracle_matrix;
use slant_core::{build_matrix, Complex64, Convention, HarmonicSymbol, OperatorKind, SpaceParams};

fn coeff() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn symbol(max_degree: usize) -> impl Strategy<Value = HarmonicSymbol> {
    (prop::collection::vec(coeff(), 1..=max_degree + 1), prop::collection::vec(coeff(), 0..=max_degree))
        .prop_map(|(anti, analytic)| HarmonicSymbol::new(anti, analytic).unwrap())
}

fn params() -> impl Strategy<Value = SpaceParams> {
    (prop::sample::select(vec![0.0, 1.0, 2.0, 2.5]), 2..=3usize, 1..=32usize)
        .prop_map(|(alpha, k, dim)| SpaceParams::new(alpha, k, dim).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_forms_match_composition(s in symbol(6), p in params()) {
        for kind in OperatorKind::ALL {
            let sym = kind.requires_symbol().then_some(&s);
            for conv in [Convention::Monomial, Convention::Normalized] {
                let built = build_matrix(kind, sym, p, conv).unwrap();
                let oracle = oracle_matrix(kind, sym, p, conv).unwrap();
                let dev = built
                    .matrix()
                    .iter()
                    .zip(oracle.matrix().iter())
                    .map(|(x, y)| (x - y).norm())
                    .fold(0.0, f64::max);
                prop_assert!(dev <= 1e-10, "{} {} {:?}: {:e}", kind, conv, p, dev);
            }
        }
    }
}
