//! Single-operator subcommands.

use std::fmt::Write;

use serde::Serialize;
use serde_json::json;
use slant_core::analysis::{
    commutator_csv, commutator_norms, compactness_tail, decay_profile, self_commutator_defect, symbol_compactness_tail,
};
use slant_core::operators::export::{format_float, to_dense_json, to_sparse_csv};
use slant_core::spectral::{eigenvalues, pseudospectrum, truncation_sweep, PseudospectrumGrid, SpectrumResult};
use slant_core::{build_matrix, linear_dependence, serialize_symbol, Complex64, OperatorKind, OperatorMatrix};

use crate::config::{Format, LoadedSymbol, RunConfig, Task, TailSource};
use crate::error::CliResult;
use crate::report::Panel;

pub fn symbol_input(s: &LoadedSymbol) -> serde_json::Value {
    json!({ "origin": s.source, "coefficients": serde_json::from_str::<serde_json::Value>(&serialize_symbol(&s.symbol)).unwrap() })
}

/// Everything the run read, recorded in its manifest.
pub fn inputs(config: &RunConfig) -> serde_json::Value {
    let mut v = json!({
        "subcommand": config.subcommand(),
        "alpha": config.params.alpha,
        "k": config.params.k,
        "n_dim": config.params.dim,
        "convention": config.convention.tag(),
        "tol": config.tol,
        "format": config.format,
    });
    let map = v.as_object_mut().unwrap();
    if let Some(kind) = config.kind {
        map.insert("kind".into(), kind.tag().into());
    }
    if let Some(s) = &config.symbol {
        map.insert("symbol".into(), symbol_input(s));
    }
    match &config.task {
        Task::Commutator { symbol2 } => {
            map.insert("symbol2".into(), symbol_input(symbol2));
        }
        Task::Compactness { tail, j_max } => {
            map.insert("j_max".into(), (*j_max).into());
            match tail {
                TailSource::Symbol(s) => map.insert("symbol".into(), symbol_input(s)),
                TailSource::Family(f) => map.insert("family".into(), serde_json::to_value(f).unwrap()),
            };
        }
        Task::Decay { axis } => {
            map.insert("axis".into(), axis.tag().into());
        }
        Task::Pseudo { grid } => {
            map.insert("grid".into(), serde_json::to_value(grid).unwrap());
        }
        Task::Sweep { dims, eps } => {
            map.insert("dims".into(), serde_json::to_value(dims).unwrap());
            map.insert("eps".into(), (*eps).into());
        }
        Task::Bench { kinds, dims, reps } => {
            map.insert("kinds".into(), kinds.iter().map(|k| k.tag()).collect::<Vec<_>>().into());
            map.insert("dims".into(), serde_json::to_value(dims).unwrap());
            map.insert("reps".into(), (*reps).into());
        }
        Task::Build | Task::Spectrum | Task::Normality | Task::Reproduce => {}
    }
    v
}

fn operator(config: &RunConfig) -> CliResult<OperatorMatrix> {
    let kind = config.kind.expect("operator subcommands carry a kind");
    let s = config.symbol.as_ref().map(|s| &s.symbol);
    Ok(build_matrix(kind, s, config.params, config.convention)?)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("finite values serialize");
    s.push('\n');
    s
}

pub fn spectrum_csv(a: &OperatorMatrix, spectrum: &SpectrumResult) -> String {
    let mut out = format!(
        "# kind={} alpha={} k={} n_dim={} convention={}\nre,im\n",
        a.kind,
        format_float(a.params.alpha),
        a.params.k,
        a.dim(),
        a.convention
    );
    for z in &spectrum.eigenvalues {
        writeln!(out, "{},{}", format_float(z.re), format_float(z.im)).unwrap();
    }
    out
}

fn spectrum_json(a: &OperatorMatrix, spectrum: &SpectrumResult) -> String {
    to_json(&json!({
        "kind": a.kind.tag(),
        "alpha": a.params.alpha,
        "k": a.params.k,
        "n_dim": a.dim(),
        "convention": a.convention.tag(),
        "eigenvalues": spectrum.eigenvalues,
        "max_residual": spectrum.max_residual,
    }))
}

pub fn pseudospectrum_csv(grid: &PseudospectrumGrid) -> String {
    let mut out = String::from("re,im,sigma_min\n");
    for (re, im, s) in grid.points() {
        writeln!(out, "{},{},{}", format_float(re), format_float(im), format_float(s)).unwrap();
    }
    out
}

fn pair_id(a: &LoadedSymbol, b: &LoadedSymbol) -> String {
    let name = |s: &LoadedSymbol| match &s.source {
        crate::config::SymbolSource::Builtin { name } => name.clone(),
        crate::config::SymbolSource::File { path } => {
            path.file_stem().map_or_else(|| "symbol".to_owned(), |s| s.to_string_lossy().into_owned())
        }
    };
    format!("{}|{}", name(a), name(b)).replace(',', ";")
}

/// Runs one operator subcommand and returns its output files.
pub fn execute(config: &RunConfig) -> CliResult<Vec<Panel>> {
    let json = config.format == Format::Json;
    let panels = match &config.task {
        Task::Build => {
            let a = operator(config)?;
            if json {
                vec![Panel::new("matrix.json", to_dense_json(&a) + "\n")]
            } else {
                vec![Panel::new("matrix.csv", to_sparse_csv(&a))]
            }
        }
        Task::Spectrum => {
            let a = operator(config)?;
            let s = eigenvalues(a.matrix())?;
            if json {
                vec![Panel::new("spectrum.json", spectrum_json(&a, &s))]
            } else {
                vec![Panel::new("spectrum.csv", spectrum_csv(&a, &s))]
            }
        }
        Task::Commutator { symbol2 } => {
            let symbol = config.symbol.as_ref().expect("commutator carries a symbol");
            let a = operator(config)?;
            let b = build_matrix(a.kind, Some(&symbol2.symbol), config.params, config.convention)?;
            let norms = commutator_norms(&a, &b)?;
            let id = pair_id(symbol, symbol2);
            if json {
                let dependence = linear_dependence(&symbol.symbol, &symbol2.symbol);
                vec![Panel::new(
                    "commutator.json",
                    to_json(&json!({
                        "pair_id": id,
                        "op_norm": norms.operator_norm,
                        "frobenius": norms.frobenius,
                        "linearly_dependent": dependence.is_some(),
                        "scale": dependence,
                    })),
                )]
            } else {
                vec![Panel::new("commutator.csv", commutator_csv([(id.as_str(), norms)]))]
            }
        }
        Task::Normality => {
            let a = operator(config)?;
            let defect = self_commutator_defect(&a)?;
            if json {
                vec![Panel::new("normality.json", to_json(&json!({ "kind": a.kind.tag(), "n_dim": a.dim(), "defect": defect })))]
            } else {
                vec![Panel::new("normality.csv", format!("kind,n_dim,defect\n{},{},{}\n", a.kind, a.dim(), format_float(defect)))]
            }
        }
        Task::Compactness { tail, j_max } => {
            let (k, alpha) = (config.params.k, config.params.alpha);
            let report = match tail {
                TailSource::Symbol(s) => symbol_compactness_tail(&s.symbol, k, alpha, *j_max)?,
                TailSource::Family(f) => compactness_tail(|j| Complex64::new(f.coefficient(j), 0.0), k, alpha, *j_max)?,
            };
            if json {
                vec![Panel::new("tail.json", to_json(&report))]
            } else {
                vec![Panel::new("tail.csv", report.to_csv())]
            }
        }
        Task::Decay { axis } => {
            let profile = decay_profile(&operator(config)?, *axis);
            if json {
                vec![Panel::new("decay.json", to_json(&profile))]
            } else {
                vec![Panel::new("decay.csv", profile.to_csv())]
            }
        }
        Task::Pseudo { grid } => {
            let ps = pseudospectrum(operator(config)?.matrix(), grid)?;
            if json {
                vec![Panel::new("pseudospectrum.json", to_json(&ps))]
            } else {
                vec![Panel::new("pseudospectrum.csv", pseudospectrum_csv(&ps))]
            }
        }
        Task::Sweep { dims, eps } => {
            let kind = config.kind.expect("sweep carries a kind");
            let s = config.symbol.as_ref().map(|s| &s.symbol);
            let sweep = truncation_sweep(kind, s, config.params, config.convention, dims, *eps)?;
            let summary: Vec<_> = sweep
                .iter()
                .map(|e| {
                    let mut v = json!({
                        "n_dim": e.dim,
                        "near_zero_fraction": e.near_zero_fraction,
                        "max_modulus": e.max_modulus,
                        "max_residual": e.spectrum.max_residual,
                    });
                    if json {
                        v["eigenvalues"] = serde_json::to_value(&e.spectrum.eigenvalues).unwrap();
                    }
                    v
                })
                .collect();
            let mut panels =
                vec![Panel::new("sweep.json", to_json(&json!({ "kind": kind.tag(), "eps": eps, "entries": summary })))];
            if !json {
                for e in &sweep {
                    let a = build_matrix(kind, s, config.params.with_dim(e.dim)?, config.convention)?;
                    panels.push(Panel::new(format!("spectrum_n{}.csv", e.dim), spectrum_csv(&a, &e.spectrum)));
                }
            }
            panels
        }
        Task::Bench { .. } | Task::Reproduce => unreachable!("handled by the caller"),
    };
    Ok(panels)
}

pub fn kind_file_tag(kind: OperatorKind) -> &'static str {
    match kind {
        OperatorKind::SlantLittleHankel => "slant_hankel",
        OperatorKind::SlantToeplitz => "slant_toeplitz",
        OperatorKind::Toeplitz => "toeplitz",
        OperatorKind::LittleHankel => "little_hankel",
        OperatorKind::SlantShift => "slant_shift",
        OperatorKind::SlantShiftAdjoint => "slant_shift_adjoint",
    }
}
