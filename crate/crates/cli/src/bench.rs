//! Construction and eigenvalue timings.

use std::fmt::Write;
use std::time::Instant;

use serde::Serialize;
use slant_core::analysis::sparsity_ratio;
use slant_core::operators::export::format_float;
use slant_core::spectral::eigenvalues;
use slant_core::{build_matrix, truncate_exponential, Convention, ExpKind, HarmonicSymbol, OperatorKind, SpaceParams};

use crate::error::{CliError, CliResult};

/// Bytes per stored nonzero in coordinate form: a complex value and two indices.
pub const BYTES_PER_ENTRY: usize = 16 + 2 * 8;

#[derive(Debug, Clone, Serialize)]
pub struct BenchRecord {
    pub kind: OperatorKind,
    pub n_dim: usize,
    /// Median seconds.
    pub construction_wall_time: f64,
    pub sparsity: f64,
    /// Median seconds.
    pub eigen_time: f64,
    /// Bytes needed to store the entries above the tolerance.
    pub peak_entry_storage: usize,
}

/// The degree-15 exponential truncation that matches each kind: `exp(z̄)`
/// for slant little Hankel (which ignores analytic parts), `exp(z)` otherwise.
pub fn default_symbol(kind: OperatorKind) -> HarmonicSymbol {
    let exp = if kind == OperatorKind::SlantLittleHankel { ExpKind::AntiAnalytic } else { ExpKind::Analytic };
    truncate_exponential(exp, 15).expect("fixed degree")
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

pub fn bench(
    kinds: &[OperatorKind],
    symbol: Option<&HarmonicSymbol>,
    params: SpaceParams,
    convention: Convention,
    dims: &[usize],
    reps: usize,
    tol: f64,
) -> CliResult<Vec<BenchRecord>> {
    if reps < 3 {
        return Err(CliError::Usage(format!("bench needs at least 3 repetitions, got {reps}")));
    }
    let mut records = Vec::new();
    for &kind in kinds {
        let owned;
        let s = match (kind.requires_symbol(), symbol) {
            (false, _) => None,
            (true, Some(s)) => Some(s),
            (true, None) => {
                owned = default_symbol(kind);
                Some(&owned)
            }
        };
        for &dim in dims {
            let p = params.with_dim(dim)?;
            let mut build_times = Vec::with_capacity(reps);
            let mut eigen_times = Vec::with_capacity(reps);
            let mut last = None;
            for _ in 0..reps {
                let t = Instant::now();
                let a = build_matrix(kind, s, p, convention)?;
                build_times.push(t.elapsed().as_secs_f64());
                let t = Instant::now();
                eigenvalues(a.matrix())?;
                eigen_times.push(t.elapsed().as_secs_f64());
                last = Some(a);
            }
            let a = last.expect("reps >= 3");
            let sparsity = sparsity_ratio(&a, tol)?;
            let nonzeros = a.matrix().iter().filter(|z| z.norm() > tol).count();
            records.push(BenchRecord {
                kind,
                n_dim: dim,
                construction_wall_time: median(build_times),
                sparsity,
                eigen_time: median(eigen_times),
                peak_entry_storage: nonzeros * BYTES_PER_ENTRY,
            });
        }
    }
    records.sort_by_key(|r| (r.kind, r.n_dim));
    Ok(records)
}

pub fn bench_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from("kind,n_dim,construction_wall_time,sparsity,eigen_time,peak_entry_storage\n");
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.kind,
            r.n_dim,
            format_float(r.construction_wall_time),
            format_float(r.sparsity),
            format_float(r.eigen_time),
            r.peak_entry_storage
        )
        .unwrap();
    }
    out
}

/// Host description recorded next to timing data.
pub fn environment() -> serde_json::Value {
    serde_json::json!({
        "os": std::env::consts::OS,
        "arch": std::env::consts::ARCH,
        "logical_cpus": std::thread::available_parallelism().map_or(1, |n| n.get()),
        "worker_threads": rayon::current_num_threads(),
        "slantop_version": env!("CARGO_PKG_VERSION"),
        "profile": if cfg!(debug_assertions) { "debug" } else { "optimized" },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_entry_bench() {
        let p = SpaceParams::new(1.0, 2, 1).unwrap();
        let r = bench(&[OperatorKind::SlantToeplitz], None, p, Convention::Monomial, &[1], 3, 1e-10).unwrap();
        assert_eq!(r.len(), 1);
        assert!(r[0].sparsity == 0.0 || r[0].sparsity == 1.0);
        assert!(r[0].construction_wall_time >= 0.0 && r[0].eigen_time >= 0.0);
    }

    #[test]
    fn records_sorted_and_ordered_by_sparsity() {
        let p = SpaceParams::new(1.0, 2, 1).unwrap();
        let kinds = [OperatorKind::SlantToeplitz, OperatorKind::SlantLittleHankel];
        let r = bench(&kinds, None, p, Convention::Monomial, &[50, 25], 3, 1e-12).unwrap();
        let keys: Vec<_> = r.iter().map(|r| (r.kind, r.n_dim)).collect();
        assert_eq!(
            keys,
            vec![
                (OperatorKind::SlantToeplitz, 25),
                (OperatorKind::SlantToeplitz, 50),
                (OperatorKind::SlantLittleHankel, 25),
                (OperatorKind::SlantLittleHankel, 50)
            ]
        );
        assert!(r[2].sparsity < r[0].sparsity && r[3].sparsity < r[1].sparsity);
        assert!(r[2].peak_entry_storage < r[0].peak_entry_storage);
        assert!(bench(&kinds, None, p, Convention::Monomial, &[5], 2, 1e-12).is_err());
    }

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
