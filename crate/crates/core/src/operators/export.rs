//! Text exports of truncations: sparse CSV and dense JSON.

use std::fmt::Write;

use serde::Serialize;

use super::OperatorMatrix;

/// Shortest round-trip representation of `x`.
pub fn format_float(x: f64) -> String {
    format!("{x:?}")
}

/// `m,n,re,im` for every nonzero entry, row-major.
pub fn to_sparse_csv(a: &OperatorMatrix) -> String {
    let mut out = String::from("m,n,re,im\n");
    let n = a.dim();
    for m in 0..n {
        for j in 0..n {
            let z = a.get(m, j);
            if z.norm() > 0.0 {
                writeln!(out, "{m},{j},{},{}", format_float(z.re), format_float(z.im)).unwrap();
            }
        }
    }
    out
}

#[derive(Serialize)]
struct DenseJson<'a> {
    kind: &'a str,
    alpha: f64,
    k: usize,
    n_dim: usize,
    convention: &'a str,
    entries: Vec<[f64; 2]>,
}

/// `{kind, alpha, k, n_dim, convention, entries: [[re, im], …]}` with entries row-major.
pub fn to_dense_json(a: &OperatorMatrix) -> String {
    let doc = DenseJson {
        kind: a.kind.tag(),
        alpha: a.params.alpha,
        k: a.params.k,
        n_dim: a.dim(),
        convention: a.convention.tag(),
        entries: a.row_major().iter().map(|z| [z.re, z.im]).collect(),
    };
    serde_json::to_string(&doc).expect("entries are finite")
}
