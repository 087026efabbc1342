//! Command-line front end. Each subcommand is a plain function so the same
//! paths can be driven from tests and examples.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use serde::Serialize;

use crate::analysis::{
    convergence_profile, optimal_truncation, pade_diagonal, ProfilePoint, TruncationReport,
};
use crate::error::{Error, Result};
use crate::io::{self, RunManifest, SeriesCache};
use crate::numkernel::Scalar;
use crate::oracle::{self, OracleConfig, OracleEstimate};
use crate::series::{run_series, AnsatzSpec, BBSeries, PotentialSpec};

#[derive(Parser, Debug)]
#[command(name = "bbpert", version, about = "Riccati perturbation series for x^2K ground states")]
pub struct Cli {
    /// Working precision in significant decimal digits.
    #[arg(long, global = true, default_value_t = crate::DEFAULT_PRECISION)]
    pub precision: u32,
    /// Directory for cached series.
    #[arg(long, global = true, env = io::CACHE_DIR_ENV)]
    pub cache_dir: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    /// Only meaningful for `figure`.
    Svg,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve the hierarchy to order J and write the series file.
    Series(SeriesArgs),
    /// Diagonal Pade values at beta = 1.
    Pade {
        #[arg(long)]
        series: PathBuf,
        #[arg(long)]
        n_max: usize,
        /// Append the reference eigenvalue as an `Exact` row.
        #[arg(long)]
        with_oracle: bool,
        #[command(flatten)]
        oracle: OracleArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimal truncation of the energy series.
    Truncate {
        #[arg(long)]
        series: PathBuf,
        /// Largest j considered; defaults to J-1.
        #[arg(long)]
        search_bound: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// log10 |E_j/E_0| profiles of one or more series.
    Figure {
        #[arg(long, required = true, num_args = 1..)]
        series: Vec<PathBuf>,
        /// One label per series; defaults to the file stem.
        #[arg(long)]
        label: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Best truncation and best Pade value against the reference eigenvalue.
    Compare {
        #[arg(long)]
        series: PathBuf,
        #[arg(long)]
        search_bound: Option<usize>,
        #[command(flatten)]
        oracle: OracleArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reference ground-state eigenvalue of -psi'' + lambda x^2K psi.
    Oracle {
        #[arg(long = "K")]
        k: u32,
        #[arg(long)]
        lambda: Option<String>,
        #[command(flatten)]
        oracle: OracleArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct SeriesArgs {
    /// Leading power is x^{2K}.
    #[arg(long = "K")]
    pub k: u32,
    /// Ansatz offset; defaults to K-1.
    #[arg(long)]
    pub p: Option<u32>,
    /// Highest order.
    #[arg(long = "J")]
    pub max_order: usize,
    /// Use x^2 + lambda x^{2K} instead of the pure power.
    #[arg(long)]
    pub lambda: Option<String>,
    /// Angular factor; only 0 is solvable.
    #[arg(long, default_value_t = 0)]
    pub s: u32,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone, Default)]
pub struct OracleArgs {
    /// Even basis functions for the reference diagonalization.
    #[arg(long)]
    pub basis: Option<usize>,
    /// Extra basis functions for the convergence check.
    #[arg(long)]
    pub window: Option<usize>,
    /// Oscillator length scale.
    #[arg(long)]
    pub scale: Option<String>,
    /// Digits that must be stable.
    #[arg(long)]
    pub oracle_digits: Option<u32>,
}

impl OracleArgs {
    pub fn config(&self, k: u32, precision: u32) -> Result<OracleConfig> {
        let mut c = OracleConfig::for_power(k, precision);
        if let Some(n) = self.basis {
            c.basis_size = n;
            c.scale = oracle::default_scale(k, n, precision);
            c.convergence_window = n / 2;
        }
        if let Some(w) = self.window {
            c.convergence_window = w;
        }
        if let Some(s) = &self.scale {
            c.scale = Scalar::parse(s, precision)?;
        }
        if let Some(d) = self.oracle_digits {
            c.digits = d;
        }
        Ok(c)
    }
}

impl SeriesArgs {
    pub fn potential(&self, precision: u32) -> Result<PotentialSpec> {
        let v = match &self.lambda {
            None => PotentialSpec::pure_power(self.k, precision)?,
            Some(l) => PotentialSpec::anharmonic(self.k, Scalar::parse(l, precision)?)?,
        };
        Ok(v.with_angular_factor(self.s))
    }
}

/// Result of [`cmd_series`].
#[derive(Debug)]
pub struct SeriesOutcome {
    pub series: BBSeries,
    pub manifest: RunManifest,
    pub cache_hit: bool,
}

/// Solves (or fetches from the cache) and writes `out` plus its manifest.
pub fn cmd_series(
    args: &SeriesArgs,
    precision: u32,
    cache: Option<&SeriesCache>,
    command_line: Vec<String>,
) -> Result<SeriesOutcome> {
    let potential = args.potential(precision)?;
    let ansatz = args.p.map_or_else(|| AnsatzSpec::canonical(&potential), AnsatzSpec::new);
    let key = SeriesCache::key(&potential, ansatz, args.max_order, precision);

    let cached = match cache {
        Some(c) => c.load(&key)?,
        None => None,
    };
    let cache_hit = cached.is_some();
    let (series, bytes) = match cached {
        Some(bytes) => {
            info!("cache hit {key}");
            let text = String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))?;
            (io::series_from_json(&text)?, text)
        }
        None => {
            let series = run_series(&potential, ansatz, args.max_order, precision)?;
            let text = io::series_to_json(&series)?;
            if let Some(c) = cache {
                c.store(&key, text.as_bytes())?;
            }
            (series, text)
        }
    };
    io::write_atomic(&args.out, bytes.as_bytes())?;
    let manifest = RunManifest::new(command_line, &series, bytes.as_bytes());
    manifest.write(&RunManifest::path_for(&args.out))?;
    Ok(SeriesOutcome {
        series,
        manifest,
        cache_hit,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PadeRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub value: Scalar,
}

#[derive(Clone, Debug, Serialize)]
pub struct PadeOutput {
    pub rows: Vec<PadeRow>,
    pub exact: Option<Scalar>,
}

/// Largest `N` whose `[N,N]` fits in the computed coefficients.
pub fn feasible_pade_order(series: &BBSeries) -> usize {
    series.len().saturating_sub(1) / 2
}

/// Rows `N = 1..=n_max`, or the single `[0,0]` row when `n_max = 0`.
pub fn cmd_pade(series: &BBSeries, n_max: usize, oracle: Option<&OracleConfig>) -> Result<PadeOutput> {
    let feasible = feasible_pade_order(series);
    if n_max > feasible {
        return Err(Error::InsufficientTerms {
            requested: n_max,
            needed: 2 * n_max + 1,
            available: series.len(),
            feasible,
        });
    }
    let range = if n_max == 0 { 0..=0 } else { 1..=n_max };
    let rows = range
        .map(|n| pade_diagonal(series, n).map(|value| PadeRow { n, value }))
        .collect::<Result<Vec<_>>>()?;
    let exact = match oracle {
        Some(cfg) => Some(reference_for(&series.potential, cfg)?.eigenvalue),
        None => None,
    };
    Ok(PadeOutput { rows, exact })
}

pub fn cmd_truncate(series: &BBSeries, search_bound: Option<usize>) -> Result<TruncationReport> {
    optimal_truncation(series, search_bound)
}

pub type LabelledProfile = (String, Vec<ProfilePoint>);

pub fn cmd_figure(series: &[(String, BBSeries)]) -> Result<Vec<LabelledProfile>> {
    series
        .iter()
        .map(|(label, s)| Ok((label.clone(), convergence_profile(s)?)))
        .collect()
}

/// Reference eigenvalue for the potential of a series.
///
/// Pure powers `lambda x^{2K}` go through the scaling law; anything else is
/// diagonalized directly with the settings in `config`.
pub fn reference_for(potential: &PotentialSpec, config: &OracleConfig) -> Result<OracleEstimate> {
    let k = potential.k();
    if potential.is_pure_power() {
        let lambda = potential.coeff(k).with_digits(config.precision);
        let eigenvalue = oracle::scaled_eigenvalue(k, &lambda, config)?;
        return Ok(OracleEstimate {
            k,
            eigenvalue,
            basis_size: config.basis_size,
            converged: true,
        });
    }
    Ok(OracleEstimate {
        k,
        eigenvalue: oracle::converged_ground_state(potential, config)?,
        basis_size: config.basis_size,
        converged: true,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Estimate {
    pub index: usize,
    pub value: Scalar,
    pub abs_error: Scalar,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompareReport {
    #[serde(rename = "K")]
    pub k: u32,
    pub p: u32,
    /// `index` is the argmin `j*`; `value` is `E^[j*-1]`.
    pub truncation: Estimate,
    /// `index` is the Pade order `N`.
    pub pade: Estimate,
    pub oracle: OracleEstimate,
}

/// Largest nondegenerate diagonal Pade value.
pub fn best_pade(series: &BBSeries) -> Result<(usize, Scalar)> {
    for n in (0..=feasible_pade_order(series)).rev() {
        match pade_diagonal(series, n) {
            Ok(v) => return Ok((n, v)),
            Err(Error::DegeneratePade { .. } | Error::Singular { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::InvalidInput("empty series".into()))
}

pub fn cmd_compare(series: &BBSeries, search_bound: Option<usize>, config: &OracleConfig) -> Result<CompareReport> {
    let oracle = reference_for(&series.potential, config)?;
    let exact = &oracle.eigenvalue;
    let tr = optimal_truncation(series, search_bound)?;
    let (n, pade) = best_pade(series)?;
    Ok(CompareReport {
        k: series.potential.k(),
        p: series.ansatz.p,
        truncation: Estimate {
            index: tr.argmin_index,
            abs_error: (&tr.best_estimate - exact).abs(),
            value: tr.best_estimate,
        },
        pade: Estimate {
            index: n,
            abs_error: (&pade - exact).abs(),
            value: pade,
        },
        oracle,
    })
}

pub fn cmd_oracle(k: u32, lambda: Option<&Scalar>, config: &OracleConfig) -> Result<OracleEstimate> {
    let mut est = oracle::reference_eigenvalue(k, config)?;
    if let Some(l) = lambda {
        est.eigenvalue = oracle::scaled_eigenvalue(k, l, config)?;
    }
    Ok(est)
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => io::write_atomic(p, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn unsupported(format: Format, what: &str) -> Error {
    Error::InvalidInput(format!("{what} cannot be written as {format:?}"))
}

fn truncation_csv(r: &TruncationReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["M", "partial_sum"])?;
    for (m, s) in r.partial_sums.iter().enumerate() {
        w.write_record([m.to_string(), s.to_decimal()])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

fn label_for(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Dispatches a parsed command line.
pub fn run(cli: &Cli, command_line: Vec<String>) -> Result<()> {
    let cache = cli.cache_dir.as_ref().map(SeriesCache::new);
    let precision = cli.precision;
    if precision < 10 {
        return Err(Error::InvalidInput("precision must be at least 10 digits".into()));
    }
    match &cli.command {
        Command::Series(args) => {
            let outcome = cmd_series(args, precision, cache.as_ref(), command_line)?;
            info!(
                "wrote {} ({} terms{})",
                args.out.display(),
                outcome.series.len(),
                if outcome.cache_hit { ", cached" } else { "" }
            );
        }
        Command::Pade {
            series,
            n_max,
            with_oracle,
            oracle,
            out,
        } => {
            let s = io::read_series(series)?;
            let cfg = oracle.config(s.potential.k(), s.precision)?;
            let res = cmd_pade(&s, *n_max, with_oracle.then_some(&cfg))?;
            let text = match cli.format {
                Format::Json => json(&res)?,
                Format::Csv => {
                    let rows: Vec<_> = res.rows.iter().map(|r| (r.n, r.value.clone())).collect();
                    io::pade_csv(&rows, res.exact.as_ref())?
                }
                f => return Err(unsupported(f, "a Pade table")),
            };
            emit(out.as_deref(), &text)?;
        }
        Command::Truncate {
            series,
            search_bound,
            out,
        } => {
            let r = cmd_truncate(&io::read_series(series)?, *search_bound)?;
            let text = match cli.format {
                Format::Json => json(&r)?,
                Format::Csv => truncation_csv(&r)?,
                f => return Err(unsupported(f, "a truncation report")),
            };
            emit(out.as_deref(), &text)?;
        }
        Command::Figure { series, label, out } => {
            if !label.is_empty() && label.len() != series.len() {
                return Err(Error::InvalidInput(format!(
                    "{} labels given for {} series",
                    label.len(),
                    series.len()
                )));
            }
            let loaded = series
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    let l = label.get(i).cloned().unwrap_or_else(|| label_for(p));
                    Ok((l, io::read_series(p)?))
                })
                .collect::<Result<Vec<_>>>()?;
            let profiles = cmd_figure(&loaded)?;
            let text = match cli.format {
                Format::Json => json(&profiles)?,
                Format::Csv => io::figure_csv(&profiles)?,
                Format::Svg => io::figure_svg(&profiles),
            };
            emit(out.as_deref(), &text)?;
        }
        Command::Compare {
            series,
            search_bound,
            oracle,
            out,
        } => {
            let s = io::read_series(series)?;
            let cfg = oracle.config(s.potential.k(), s.precision)?;
            let r = cmd_compare(&s, *search_bound, &cfg)?;
            match cli.format {
                Format::Json => emit(out.as_deref(), &json(&r)?)?,
                f => return Err(unsupported(f, "a comparison report")),
            }
        }
        Command::Oracle { k, lambda, oracle, out } => {
            let cfg = oracle.config(*k, precision)?;
            let lambda = lambda.as_deref().map(|l| Scalar::parse(l, precision)).transpose()?;
            let est = cmd_oracle(*k, lambda.as_ref(), &cfg)?;
            match cli.format {
                Format::Json => emit(out.as_deref(), &json(&est)?)?,
                f => return Err(unsupported(f, "an oracle estimate")),
            }
        }
    }
    Ok(())
}

/// Reads a series file and checks it against its manifest when one exists.
pub fn read_verified(path: &Path) -> Result<BBSeries> {
    let m = RunManifest::path_for(path);
    if m.exists() {
        RunManifest::read(&m)?.verify(path)?;
    }
    let text = fs::read_to_string(path)?;
    io::series_from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const D: u32 = 40;

    fn series(k: u32, j: usize) -> BBSeries {
        let v = PotentialSpec::pure_power(k, D).unwrap();
        run_series(&v, AnsatzSpec::canonical(&v), j, D).unwrap()
    }

    #[test]
    fn pade_rows_and_feasibility() {
        let s = series(2, 6);
        let out = cmd_pade(&s, 3, None).unwrap();
        assert_eq!(out.rows.iter().map(|r| r.n).collect::<Vec<_>>(), vec![1, 2, 3]);
        let zero = cmd_pade(&s, 0, None).unwrap();
        assert_eq!(zero.rows.len(), 1);
        assert_eq!(zero.rows[0].value, s.terms[0].energy);
        match cmd_pade(&s, 4, None) {
            Err(e @ Error::InsufficientTerms { feasible: 3, .. }) => {
                assert!(e.to_string().contains("largest feasible N is 3"))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn best_pade_falls_back_for_harmonic() {
        let (n, v) = best_pade(&series(1, 5)).unwrap();
        assert_eq!(n, 0);
        assert_eq!(v, Scalar::one(D));
    }

    #[test]
    fn cli_parses_global_flags_after_subcommand() {
        let cli = Cli::try_parse_from([
            "bbpert", "series", "--K", "2", "--J", "5", "--out", "x.json", "--precision", "30",
        ])
        .unwrap();
        assert_eq!(cli.precision, 30);
        assert!(matches!(cli.command, Command::Series(ref a) if a.k == 2 && a.max_order == 5 && a.p.is_none()));
    }

    #[test]
    fn oracle_args_override_defaults() {
        let a = OracleArgs {
            basis: Some(40),
            window: Some(6),
            scale: Some("0.5".into()),
            oracle_digits: Some(9),
        };
        let c = a.config(3, D).unwrap();
        assert_eq!((c.basis_size, c.convergence_window, c.digits), (40, 6, 9));
        assert_eq!(c.scale, Scalar::from_ratio(1, 2, D));
    }
}
