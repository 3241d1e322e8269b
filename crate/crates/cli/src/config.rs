//! Command-line surface and its validated form, [`RunConfig`].

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use slant_core::analysis::DecayAxis;
use slant_core::spectral::GridSpec;
use slant_core::{parse_symbol, truncate_exponential, Convention, ExpKind, HarmonicSymbol, OperatorKind, SpaceParams};

use crate::error::{CliError, CliResult};

pub const THREADS_ENV: &str = "SLANT_THREADS";

const AFTER_HELP: &str = "\
Exit codes:
  0  success
  2  usage error (bad flag, missing or surplus input)
  3  file I/O error
  4  symbol parse error
  5  validation error (parameter out of range, dimension mismatch)
  6  solver did not converge within its iteration budget

On failure a single JSON record {\"error\", \"exit_code\", \"message\"} is written to stderr.

Symbols are JSON files {\"anti\": [[re, im], ...], \"analytic\": [[re, im], ...]} where anti[j]
multiplies conj(z)^j and analytic[j-1] multiplies z^j. The built-in names anti-exp:<d> and
analytic-exp:<d> stand for the Taylor truncations of exp(conj z) and exp(z) at degree d.

Environment:
  SLANT_THREADS  worker threads for parallel sections (default: one per logical CPU).
                 Output bytes do not depend on it.";

#[derive(Debug, Parser)]
#[command(name = "slantop", version, about = "Truncated slant Toeplitz and slant little Hankel operators on weighted Bergman spaces", after_help = AFTER_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Weight exponent, alpha > -1.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Slant order, k >= 2.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Truncation dimension N.
    #[arg(long, default_value_t = 15)]
    pub dim: usize,
    #[arg(long, value_parser = parse_tag::<Convention>, default_value = "monomial")]
    pub convention: Convention,
    /// Numerical-zero tolerance.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Output directory.
    #[arg(long, default_value = "slantop-out")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct OperatorArgs {
    /// toeplitz, little-hankel, slant-shift, slant-shift-adjoint, slant-toeplitz or slant-little-hankel.
    #[arg(long, value_parser = parse_tag::<OperatorKind>, default_value = "slant-little-hankel")]
    pub kind: OperatorKind,
    /// Symbol file or built-in name.
    #[arg(long)]
    pub symbol: Option<String>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum CommandArgs {
    /// Write the truncated matrix (sparse CSV or dense JSON).
    Build {
        #[command(flatten)]
        op: OperatorArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Eigenvalues of the truncation.
    Spectrum {
        #[command(flatten)]
        op: OperatorArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Commutator norms of the truncations for two symbols.
    Commutator {
        #[command(flatten)]
        op: OperatorArgs,
        /// Second symbol file or built-in name.
        #[arg(long)]
        symbol2: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Self-commutator defect ||A*A - AA*||.
    Normality {
        #[command(flatten)]
        op: OperatorArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Compactness tail sup-values for a symbol or a coefficient family.
    Compactness {
        /// Symbol file or built-in name.
        #[arg(long)]
        symbol: Option<String>,
        /// Coefficient family used instead of a symbol.
        #[arg(long, value_enum)]
        family: Option<Family>,
        #[arg(long, default_value_t = 100)]
        jmax: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Maximum entry modulus along rows, columns or the slant index n + km.
    Decay {
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(long, value_parser = parse_tag::<DecayAxis>, default_value = "row")]
        axis: DecayAxis,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Smallest singular value of A - lambda I over a grid.
    Pseudo {
        #[command(flatten)]
        op: OperatorArgs,
        /// re0,re1,im0,im1,steps
        #[arg(long, value_parser = parse_tag::<GridSpec>, allow_hyphen_values = true)]
        grid: Option<GridSpec>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Spectra of the truncations over increasing dimensions.
    Sweep {
        #[command(flatten)]
        op: OperatorArgs,
        /// Comma-separated, strictly increasing.
        #[arg(long, value_delimiter = ',', default_value = "8,16,32")]
        dims: Vec<usize>,
        /// Modulus below which an eigenvalue counts as zero.
        #[arg(long, default_value_t = 1e-8)]
        eps: f64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Construction and eigenvalue timings, sparsity and storage.
    Bench {
        #[arg(long, value_delimiter = ',', value_parser = parse_tag::<OperatorKind>, default_value = "slant-little-hankel,slant-toeplitz")]
        kinds: Vec<OperatorKind>,
        /// Symbol for every kind; defaults to anti-exp:15 for slant little Hankel and analytic-exp:15 otherwise.
        #[arg(long)]
        symbol: Option<String>,
        #[arg(long, value_delimiter = ',', default_value = "25,50,100")]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Emit the data behind every figure and the efficiency table.
    Reproduce {
        /// Output directory; one subdirectory per experiment.
        #[arg(long, default_value = "slantop-out")]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// c_j = 1/j!
    Factorial,
    /// c_j = 1/j², c_0 = 1
    InverseSquare,
    /// c_j = 1
    Constant,
}

impl Family {
    pub fn coefficient(self, j: usize) -> f64 {
        match self {
            Family::Factorial => 1.0 / (1..=j).map(|i| i as f64).product::<f64>(),
            Family::InverseSquare => 1.0 / (j.max(1) as f64).powi(2),
            Family::Constant => 1.0,
        }
    }
}

fn parse_tag<T: FromStr<Err = slant_core::Error>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: slant_core::Error| e.to_string())
}

/// Where a symbol came from, kept for the manifest.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "source", rename_all = "kebab-case")]
pub enum SymbolSource {
    File { path: PathBuf },
    Builtin { name: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedSymbol {
    pub source: SymbolSource,
    pub symbol: HarmonicSymbol,
}

impl LoadedSymbol {
    pub fn builtin(kind: ExpKind, degree: usize) -> Self {
        let tag = match kind {
            ExpKind::Analytic => "analytic-exp",
            ExpKind::AntiAnalytic => "anti-exp",
        };
        Self {
            source: SymbolSource::Builtin { name: format!("{tag}:{degree}") },
            symbol: truncate_exponential(kind, degree as i64).expect("non-negative degree"),
        }
    }
}

fn builtin_symbol(spec: &str) -> Option<CliResult<LoadedSymbol>> {
    let (tag, degree) = spec.split_once(':')?;
    let kind = tag.parse::<ExpKind>().ok()?;
    Some(
        degree
            .parse::<usize>()
            .map(|d| LoadedSymbol::builtin(kind, d))
            .map_err(|_| CliError::Usage(format!("bad degree in built-in symbol `{spec}`"))),
    )
}

pub fn load_symbol(spec: &str) -> CliResult<LoadedSymbol> {
    if let Some(builtin) = builtin_symbol(spec) {
        return builtin;
    }
    let path = Path::new(spec);
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Ok(LoadedSymbol { source: SymbolSource::File { path: path.to_owned() }, symbol: parse_symbol(&text)? })
}

/// Validated, subcommand-specific settings.
#[derive(Debug, Clone)]
pub enum Task {
    Build,
    Spectrum,
    Commutator { symbol2: LoadedSymbol },
    Normality,
    Compactness { tail: TailSource, j_max: usize },
    Decay { axis: DecayAxis },
    Pseudo { grid: GridSpec },
    Sweep { dims: Vec<usize>, eps: f64 },
    Bench { kinds: Vec<OperatorKind>, dims: Vec<usize>, reps: usize },
    Reproduce,
}

#[derive(Debug, Clone)]
pub enum TailSource {
    Symbol(LoadedSymbol),
    Family(Family),
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub task: Task,
    pub params: SpaceParams,
    pub kind: Option<OperatorKind>,
    pub symbol: Option<LoadedSymbol>,
    pub out: PathBuf,
    pub tol: f64,
    pub convention: Convention,
    pub format: Format,
}

impl RunConfig {
    pub fn subcommand(&self) -> &'static str {
        match self.task {
            Task::Build => "build",
            Task::Spectrum => "spectrum",
            Task::Commutator { .. } => "commutator",
            Task::Normality => "normality",
            Task::Compactness { .. } => "compactness",
            Task::Decay { .. } => "decay",
            Task::Pseudo { .. } => "pseudo",
            Task::Sweep { .. } => "sweep",
            Task::Bench { .. } => "bench",
            Task::Reproduce => "reproduce",
        }
    }
}

fn operator_symbol(op: &OperatorArgs) -> CliResult<Option<LoadedSymbol>> {
    match (op.kind.requires_symbol(), &op.symbol) {
        (true, Some(spec)) => load_symbol(spec).map(Some),
        (false, None) => Ok(None),
        (true, None) => Err(CliError::Usage(format!("{} needs --symbol", op.kind))),
        (false, Some(_)) => Err(CliError::Usage(format!("{} takes no --symbol", op.kind))),
    }
}

fn with_common(task: Task, common: CommonArgs, kind: Option<OperatorKind>, symbol: Option<LoadedSymbol>) -> CliResult<RunConfig> {
    if common.tol.is_nan() || common.tol <= 0.0 {
        return Err(CliError::Core(slant_core::Error::Validation(format!("--tol must be positive, got {}", common.tol))));
    }
    Ok(RunConfig {
        task,
        params: SpaceParams::new(common.alpha, common.k, common.dim)?,
        kind,
        symbol,
        out: common.out,
        tol: common.tol,
        convention: common.convention,
        format: common.format,
    })
}

impl TryFrom<Cli> for RunConfig {
    type Error = CliError;

    fn try_from(cli: Cli) -> CliResult<Self> {
        match cli.command {
            CommandArgs::Build { op, common } => {
                let s = operator_symbol(&op)?;
                with_common(Task::Build, common, Some(op.kind), s)
            }
            CommandArgs::Spectrum { op, common } => {
                let s = operator_symbol(&op)?;
                with_common(Task::Spectrum, common, Some(op.kind), s)
            }
            CommandArgs::Normality { op, common } => {
                let s = operator_symbol(&op)?;
                with_common(Task::Normality, common, Some(op.kind), s)
            }
            CommandArgs::Commutator { op, symbol2, common } => {
                if !op.kind.requires_symbol() {
                    return Err(CliError::Usage(format!("commutator compares symbols; {} has none", op.kind)));
                }
                let s = operator_symbol(&op)?;
                let symbol2 = load_symbol(symbol2.as_deref().ok_or_else(|| CliError::Usage("commutator needs --symbol2".into()))?)?;
                with_common(Task::Commutator { symbol2 }, common, Some(op.kind), s)
            }
            CommandArgs::Compactness { symbol, family, jmax, common } => {
                let tail = match (symbol, family) {
                    (Some(spec), None) => TailSource::Symbol(load_symbol(&spec)?),
                    (None, Some(f)) => TailSource::Family(f),
                    _ => return Err(CliError::Usage("compactness needs exactly one of --symbol and --family".into())),
                };
                with_common(Task::Compactness { tail, j_max: jmax }, common, None, None)
            }
            CommandArgs::Decay { op, axis, common } => {
                let s = operator_symbol(&op)?;
                with_common(Task::Decay { axis }, common, Some(op.kind), s)
            }
            CommandArgs::Pseudo { op, grid, common } => {
                let s = operator_symbol(&op)?;
                with_common(Task::Pseudo { grid: grid.unwrap_or_default() }, common, Some(op.kind), s)
            }
            CommandArgs::Sweep { op, dims, eps, common } => {
                let s = operator_symbol(&op)?;
                with_common(Task::Sweep { dims, eps }, common, Some(op.kind), s)
            }
            CommandArgs::Bench { kinds, symbol, dims, reps, common } => {
                if reps < 3 {
                    return Err(CliError::Usage(format!("--reps must be at least 3, got {reps}")));
                }
                if kinds.is_empty() || dims.is_empty() {
                    return Err(CliError::Usage("bench needs at least one kind and one dimension".into()));
                }
                let symbol = symbol.as_deref().map(load_symbol).transpose()?;
                with_common(Task::Bench { kinds, dims, reps }, common, None, symbol)
            }
            CommandArgs::Reproduce { out } => Ok(RunConfig {
                task: Task::Reproduce,
                params: SpaceParams::new(1.0, 2, 15)?,
                kind: None,
                symbol: None,
                out,
                tol: 1e-10,
                convention: Convention::Monomial,
                format: Format::Csv,
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(args: &[&str]) -> CliResult<RunConfig> {
        let cli = Cli::try_parse_from(std::iter::once("slantop").chain(args.iter().copied())).unwrap();
        RunConfig::try_from(cli)
    }

    #[test]
    fn defaults() {
        let c = config(&["build", "--symbol", "anti-exp:15"]).unwrap();
        assert_eq!((c.params.alpha, c.params.k, c.params.dim), (1.0, 2, 15));
        assert_eq!(c.kind, Some(OperatorKind::SlantLittleHankel));
        assert_eq!(c.symbol.unwrap().symbol.anti_degree(), 15);
    }

    #[test]
    fn missing_and_surplus_inputs() {
        assert!(matches!(config(&["build"]), Err(CliError::Usage(_))));
        assert!(matches!(config(&["build", "--kind", "W", "--symbol", "anti-exp:2"]), Err(CliError::Usage(_))));
        assert!(matches!(config(&["commutator", "--symbol", "anti-exp:2"]), Err(CliError::Usage(_))));
        assert!(matches!(config(&["compactness"]), Err(CliError::Usage(_))));
        assert!(matches!(config(&["bench", "--reps", "2"]), Err(CliError::Usage(_))));
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(config(&["build", "--kind", "W", "--tol", "0"]), Err(CliError::Core(_))));
        assert!(matches!(config(&["build", "--kind", "W", "--alpha", "-1"]), Err(CliError::Core(_))));
    }

    #[test]
    fn grid_accepts_negative_bounds() {
        let c = config(&["pseudo", "--kind", "W", "--grid", "-1,1,-1,1,5"]).unwrap();
        assert!(matches!(c.task, Task::Pseudo { grid } if grid.steps == 5 && grid.re0 == -1.0));
    }

    #[test]
    fn family_coefficients() {
        assert_eq!(Family::Factorial.coefficient(4), 1.0 / 24.0);
        assert_eq!(Family::InverseSquare.coefficient(0), 1.0);
        assert_eq!(Family::InverseSquare.coefficient(3), 1.0 / 9.0);
    }
}
