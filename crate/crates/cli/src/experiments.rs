//! The figure and table experiments, each written to its own subdirectory.

use std::fmt::Write;
use std::path::Path;

use serde_json::json;
use slant_core::analysis::{commutator_csv, commutator_norms, decay_profile, sparsity_ratio, DecayAxis};
use slant_core::operators::export::{format_float, to_sparse_csv};
use slant_core::spectral::{eigenvalues, pseudospectrum, GridSpec};
use slant_core::{
    build_matrix, serialize_symbol, truncate_exponential, Complex64, Convention, ExpKind, HarmonicSymbol, OperatorKind,
    SpaceParams,
};

use crate::bench::BYTES_PER_ENTRY;
use crate::commands::{kind_file_tag, pseudospectrum_csv, spectrum_csv};
use crate::error::CliResult;
use crate::report::{emit_figure_data, Manifest, Panel};

const S: OperatorKind = OperatorKind::SlantLittleHankel;
const B: OperatorKind = OperatorKind::SlantToeplitz;
const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub const EXPERIMENTS: [&str; 6] = ["structure", "decay", "commutator", "spectrum", "pseudospectrum", "efficiency"];

fn params(dim: usize) -> SpaceParams {
    SpaceParams::new(1.0, 2, dim).expect("fixed parameters")
}

fn build(kind: OperatorKind, s: &HarmonicSymbol, dim: usize) -> CliResult<slant_core::OperatorMatrix> {
    Ok(build_matrix(kind, Some(s), params(dim), Convention::Monomial)?)
}

fn coefficients(s: &HarmonicSymbol) -> serde_json::Value {
    serde_json::from_str(&serialize_symbol(s)).expect("canonical JSON")
}

fn exp(kind: ExpKind, degree: i64) -> HarmonicSymbol {
    truncate_exponential(kind, degree).expect("fixed degree")
}

/// `Σ_{j≤d} z̄^j`, the truncated geometric series `1/(1 − z̄)`.
fn anti_geometric(degree: usize) -> HarmonicSymbol {
    HarmonicSymbol::new(vec![ONE; degree + 1], Vec::new()).expect("unit coefficients")
}

fn z_plus_zbar() -> HarmonicSymbol {
    HarmonicSymbol::new(vec![Complex64::new(0.0, 0.0), ONE], vec![ONE]).expect("unit coefficients")
}

fn base_inputs(dim: usize) -> serde_json::Value {
    json!({ "alpha": 1.0, "k": 2, "n_dim": dim, "convention": "monomial" })
}

fn structure() -> CliResult<(serde_json::Value, Vec<Panel>)> {
    let (s_sym, b_sym) = (exp(ExpKind::AntiAnalytic, 15), exp(ExpKind::Analytic, 15));
    let panels = vec![
        Panel::new("slant_hankel.csv", to_sparse_csv(&build(S, &s_sym, 15)?)),
        Panel::new("slant_toeplitz.csv", to_sparse_csv(&build(B, &b_sym, 15)?)),
    ];
    let mut inputs = base_inputs(15);
    inputs["symbols"] = json!({ "slant_hankel": coefficients(&s_sym), "slant_toeplitz": coefficients(&b_sym) });
    Ok((inputs, panels))
}

fn decay() -> CliResult<(serde_json::Value, Vec<Panel>)> {
    let dim = 20;
    let analytic = exp(ExpKind::Analytic, 20);
    let analytic_conj = exp(ExpKind::AntiAnalytic, 20);
    let geometric = anti_geometric(20);
    let cases = [
        ("decay_analytic_slant_toeplitz.csv", B, &analytic, DecayAxis::Row),
        ("decay_analytic_slant_hankel.csv", S, &analytic_conj, DecayAxis::Diagonal),
        ("decay_anti_analytic_slant_toeplitz.csv", B, &geometric, DecayAxis::Row),
        ("decay_anti_analytic_slant_hankel.csv", S, &geometric, DecayAxis::Diagonal),
    ];
    let mut panels = Vec::new();
    let mut described = serde_json::Map::new();
    for (name, kind, s, axis) in cases {
        panels.push(Panel::new(name, decay_profile(&build(kind, s, dim)?, axis).to_csv()));
        described.insert(name.into(), json!({ "kind": kind.tag(), "axis": axis.tag(), "symbol": coefficients(s) }));
    }
    let mut inputs = base_inputs(dim);
    inputs["panels"] = described.into();
    Ok((inputs, panels))
}

fn commutator() -> CliResult<(serde_json::Value, Vec<Panel>)> {
    let dim = 16;
    let phi = z_plus_zbar();
    let two_phi = phi.scale(Complex64::new(2.0, 0.0));
    let pairs = [
        (B, "dependent", phi.clone(), two_phi.clone()),
        (B, "independent", HarmonicSymbol::monomial(1, ONE), HarmonicSymbol::monomial(2, ONE)),
        (S, "dependent", phi.clone(), two_phi.clone()),
        // slant little Hankel reads only anti-analytic coefficients
        (S, "independent", HarmonicSymbol::anti_monomial(1, ONE), HarmonicSymbol::anti_monomial(2, ONE)),
    ];
    let mut panels = Vec::new();
    let mut described = Vec::new();
    for kind in [B, S] {
        let mut rows = Vec::new();
        for (k, id, a, b) in pairs.iter().filter(|p| p.0 == kind) {
            rows.push((*id, commutator_norms(&build(*k, a, dim)?, &build(*k, b, dim)?)?));
            described.push(json!({ "kind": k.tag(), "pair_id": id, "phi": coefficients(a), "psi": coefficients(b) }));
        }
        panels.push(Panel::new(format!("commutator_{}.csv", kind_file_tag(kind)), commutator_csv(rows)));
    }
    let mut inputs = base_inputs(dim);
    inputs["pairs"] = described.into();
    Ok((inputs, panels))
}

fn spectrum() -> CliResult<(serde_json::Value, Vec<Panel>)> {
    let dim = 64;
    let cases = [("analytic", HarmonicSymbol::monomial(2, ONE)), ("anti_analytic", HarmonicSymbol::anti_monomial(1, ONE))];
    let mut panels = Vec::new();
    let mut described = serde_json::Map::new();
    for (panel, s) in &cases {
        for kind in [B, S] {
            let a = build(kind, s, dim)?;
            let spec = eigenvalues(a.matrix())?;
            panels.push(Panel::new(format!("spectrum_{panel}_{}.csv", kind_file_tag(kind)), spectrum_csv(&a, &spec)));
        }
        described.insert((*panel).into(), coefficients(s));
    }
    let mut inputs = base_inputs(dim);
    inputs["symbols"] = described.into();
    Ok((inputs, panels))
}

fn pseudo() -> CliResult<(serde_json::Value, Vec<Panel>)> {
    let dim = 64;
    let grid = GridSpec { steps: 51, ..GridSpec::default() };
    let cases = [(B, HarmonicSymbol::constant(ONE)), (S, HarmonicSymbol::anti_monomial(2, ONE))];
    let mut panels = Vec::new();
    let mut summary = String::from("kind,eps,area_fraction\n");
    let mut described = serde_json::Map::new();
    for (kind, s) in &cases {
        let ps = pseudospectrum(build(*kind, s, dim)?.matrix(), &grid)?;
        for eps in [1e-2, 1e-4, 1e-6] {
            writeln!(summary, "{kind},{},{}", format_float(eps), format_float(ps.fraction_below(eps))).unwrap();
        }
        panels.push(Panel::new(format!("pseudospectrum_{}.csv", kind_file_tag(*kind)), pseudospectrum_csv(&ps)));
        described.insert(kind.tag().into(), coefficients(s));
    }
    panels.push(Panel::new("area_fractions.csv", summary));
    let mut inputs = base_inputs(dim);
    inputs["grid"] = serde_json::to_value(grid).unwrap();
    inputs["symbols"] = described.into();
    Ok((inputs, panels))
}

fn efficiency() -> CliResult<(serde_json::Value, Vec<Panel>)> {
    let tol = 1e-12;
    let dims = [25, 50, 100];
    let mut out = String::from("kind,n_dim,sparsity,nonzeros,peak_entry_storage\n");
    for (kind, s) in [(S, exp(ExpKind::AntiAnalytic, 15)), (B, exp(ExpKind::Analytic, 15))] {
        for dim in dims {
            let a = build(kind, &s, dim)?;
            let nonzeros = a.matrix().iter().filter(|z| z.norm() > tol).count();
            writeln!(
                out,
                "{kind},{dim},{},{nonzeros},{}",
                format_float(sparsity_ratio(&a, tol)?),
                nonzeros * BYTES_PER_ENTRY
            )
            .unwrap();
        }
    }
    let mut inputs = base_inputs(0);
    inputs["n_dim"] = serde_json::to_value(dims).unwrap();
    inputs["tol"] = tol.into();
    inputs["symbols"] = json!({ "slant_hankel": "anti-exp:15", "slant_toeplitz": "analytic-exp:15" });
    Ok((inputs, vec![Panel::new("efficiency.csv", out)]))
}

/// Runs one named experiment into `out/<name>/`.
pub fn run_experiment(name: &str, out: &Path) -> CliResult<Manifest> {
    let (inputs, panels) = match name {
        "structure" => structure()?,
        "decay" => decay()?,
        "commutator" => commutator()?,
        "spectrum" => spectrum()?,
        "pseudospectrum" => pseudo()?,
        "efficiency" => efficiency()?,
        _ => return Err(crate::error::CliError::Usage(format!("unknown experiment `{name}`"))),
    };
    emit_figure_data(&out.join(name), name, inputs, &panels, None)
}

pub fn reproduce(out: &Path) -> CliResult<Vec<Manifest>> {
    EXPERIMENTS.iter().map(|name| run_experiment(name, out)).collect()
}
