//! The `okdens` command line: every subcommand prints JSON on stdout,
//! except `sweep`, which writes CSV.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{parse_coeff_list, FieldOptions, NumberField};
use crate::json::number;
use crate::montecarlo::{
    brute_force_density, run_experiment, sweep_b, write_sweep_csv, ExperimentConfig, DEFAULT_BOUND,
    DEFAULT_SAMPLES,
};
use crate::primes::primes_up_to;
use crate::splitting::{split_prime, SplitSummary};
use crate::unimodular::{is_unimodular, is_unimodular_modp, parse_matrix_json, UnimodReport};
use crate::zeta::{predicted_density, DEFAULT_PRIME_BOUND};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_UNIMODULAR: i32 = 3;

/// Named fields accepted by `--field` besides explicit coefficient lists.
pub const FIELD_ALIASES: [(&str, &[i64]); 4] = [
    ("Q", &[0, 1]),
    ("Q(sqrt2)", &[-2, 0, 1]),
    ("x^3+x+1", &[1, 1, 0, 1]),
    ("x^5-13x-7", &[-7, -13, 0, 0, 0, 1]),
];

#[derive(Parser, Debug)]
#[command(
    name = "okdens",
    version,
    about = "Densities of unimodular matrices over rings of integers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Degree, discriminant, maximality and small prime splittings.
    FieldInfo {
        #[command(flatten)]
        field: FieldArgs,
        /// Report splittings of the primes up to this bound.
        #[arg(long, default_value_t = 20)]
        show_primes: u64,
    },
    /// Decide unimodularity of a matrix given as JSON.
    Check {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, value_enum, default_value_t = CheckMethod::Hnf)]
        method: CheckMethod,
        #[command(flatten)]
        opts: OverrideArgs,
    },
    /// Predicted density as a truncated Euler product.
    Density {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, default_value_t = DEFAULT_PRIME_BOUND)]
        prime_bound: u64,
    },
    /// Monte-Carlo estimate against the prediction.
    Experiment {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: u64,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Monte-Carlo estimates over a range of coordinate bounds, as CSV.
    Sweep {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long)]
        b_start: u64,
        #[arg(long)]
        b_end: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        b_step: u64,
        #[command(flatten)]
        run: RunArgs,
        /// Output path; `-` writes to stdout.
        #[arg(long)]
        csv: PathBuf,
    },
    /// Exact density over the full coordinate box.
    Brute {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long)]
        bound: u64,
    },
}

#[derive(Args, Debug)]
struct FieldArgs {
    /// Coefficients of f, constant term first ("-2,0,1"), or one of
    /// Q, Q(sqrt2), x^3+x+1, x^5-13x-7.
    #[arg(long, allow_hyphen_values = true)]
    field: String,
    #[command(flatten)]
    opts: OverrideArgs,
}

#[derive(Args, Debug)]
struct OverrideArgs {
    /// Skip the irreducibility certificate.
    #[arg(long)]
    assume_irreducible: bool,
    /// Work over Z[theta] even where it is not the maximal order.
    #[arg(long)]
    allow_nonmaximal: bool,
}

impl OverrideArgs {
    fn options(&self) -> FieldOptions {
        FieldOptions {
            assume_irreducible: self.assume_irreducible,
            allow_nonmaximal: self.allow_nonmaximal,
        }
    }
}

#[derive(Args, Debug)]
struct ShapeArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: u64,
    #[arg(long, env = "OKDENS_SEED", default_value_t = 0)]
    seed: u64,
    /// Worker threads; defaults to all available cores.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_PRIME_BOUND)]
    prime_bound: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CheckMethod {
    Hnf,
    Modp,
    Both,
}

/// Resolves a `--field` value: an alias or a coefficient list.
pub fn field_from_flag(text: &str, opts: FieldOptions) -> Result<NumberField> {
    let t = text.trim();
    match FIELD_ALIASES.iter().find(|(name, _)| *name == t) {
        Some((_, c)) => NumberField::from_i64s(c, opts),
        None => NumberField::new(parse_coeff_list(t)?, opts),
    }
}

/// Runs the command line `argv` (program name first), writing to `out`
/// and `err`, and returns the process exit code.
pub fn run_cli<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let text = e.render().to_string();
                    let line = text
                        .lines()
                        .find(|l| !l.trim().is_empty())
                        .unwrap_or("invalid arguments");
                    let _ = writeln!(err, "{line}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Internal(_) => EXIT_FAILURE,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn emit(out: &mut dyn Write, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Internal(e.to_string()))?;
    writeln!(out, "{text}").map_err(|e| Error::Io(format!("writing output: {e}")))
}

fn check_shape(shape: &ShapeArgs, allow_square: bool) -> Result<()> {
    let ok = shape.n >= 1 && (shape.n < shape.m || (allow_square && shape.n == shape.m));
    if ok {
        Ok(())
    } else {
        let need = if allow_square {
            "1 <= n <= m"
        } else {
            "1 <= n < m"
        };
        Err(Error::BadShape(format!(
            "need {need}, got n = {}, m = {}",
            shape.n, shape.m
        )))
    }
}

fn check_prime_bound(p: u64) -> Result<()> {
    if p < 2 {
        return Err(Error::BadBound(format!(
            "prime bound must be at least 2, got {p}"
        )));
    }
    Ok(())
}

fn experiment_config(
    field: NumberField,
    shape: &ShapeArgs,
    bound: u64,
    run: &RunArgs,
) -> Result<ExperimentConfig> {
    check_shape(shape, false)?;
    check_prime_bound(run.prime_bound)?;
    if bound == 0 {
        return Err(Error::BadBound(
            "coordinate bound must be at least 1".into(),
        ));
    }
    if run.samples == 0 {
        return Err(Error::BadBound("sample count must be at least 1".into()));
    }
    Ok(ExperimentConfig {
        bound,
        samples: run.samples,
        seed: run.seed,
        workers: run.workers.map_or(0, |w| w as usize),
        prime_bound: run.prime_bound,
        ..ExperimentConfig::new(Arc::new(field), shape.n, shape.m)
    })
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::FieldInfo { field, show_primes } => {
            let k = field_from_flag(&field.field, field.opts.options())?;
            emit(out, &field_info(&k, show_primes)?)?;
            Ok(EXIT_OK)
        }
        Command::Check {
            matrix,
            method,
            opts,
        } => {
            let text = std::fs::read_to_string(&matrix)
                .map_err(|e| Error::Io(format!("cannot read {}: {e}", matrix.display())))?;
            let mat = parse_matrix_json(&text, opts.options())?;
            let reports: Vec<UnimodReport> = match method {
                CheckMethod::Hnf => vec![is_unimodular(&mat)?],
                CheckMethod::Modp => vec![is_unimodular_modp(&mat, false)?],
                CheckMethod::Both => vec![is_unimodular(&mat)?, is_unimodular_modp(&mat, true)?],
            };
            let verdict = reports[0].verdict;
            if reports.iter().any(|r| r.verdict != verdict) {
                return Err(Error::Internal("methods disagree on the verdict".into()));
            }
            if reports.len() == 1 {
                emit(out, &reports[0])?;
            } else {
                emit(out, &reports)?;
            }
            Ok(if verdict {
                EXIT_OK
            } else {
                EXIT_NOT_UNIMODULAR
            })
        }
        Command::Density {
            field,
            shape,
            prime_bound,
        } => {
            let k = field_from_flag(&field.field, field.opts.options())?;
            check_shape(&shape, false)?;
            check_prime_bound(prime_bound)?;
            emit(out, &predicted_density(&k, shape.n, shape.m, prime_bound)?)?;
            Ok(EXIT_OK)
        }
        Command::Experiment {
            field,
            shape,
            bound,
            run,
        } => {
            let k = field_from_flag(&field.field, field.opts.options())?;
            let cfg = experiment_config(k, &shape, bound, &run)?;
            emit(out, &run_experiment(&cfg)?)?;
            Ok(EXIT_OK)
        }
        Command::Sweep {
            field,
            shape,
            b_start,
            b_end,
            b_step,
            run,
            csv,
        } => {
            if b_start == 0 || b_start > b_end {
                return Err(Error::BadBound(format!(
                    "need 1 <= b-start <= b-end, got {b_start}..{b_end}"
                )));
            }
            let bounds: Vec<u64> = (b_start..=b_end).step_by(b_step as usize).collect();
            let k = field_from_flag(&field.field, field.opts.options())?;
            let cfg = experiment_config(k, &shape, b_start, &run)?;
            let sink: Box<dyn Write> = if csv.as_os_str() == "-" {
                Box::new(out)
            } else {
                let f = File::create(&csv)
                    .map_err(|e| Error::Io(format!("cannot create {}: {e}", csv.display())))?;
                Box::new(BufWriter::new(f))
            };
            let reports = sweep_b(&cfg, &bounds)?;
            write_sweep_csv(&reports, sink)?;
            Ok(EXIT_OK)
        }
        Command::Brute {
            field,
            shape,
            bound,
        } => {
            let k = Arc::new(field_from_flag(&field.field, field.opts.options())?);
            check_shape(&shape, true)?;
            let d = brute_force_density(&k, shape.n, shape.m, bound)?;
            emit(
                out,
                &json!({
                    "field": k.spec_string(),
                    "n": shape.n,
                    "m": shape.m,
                    "B": bound,
                    "exact": d.to_string(),
                    "hits": d.hits,
                    "total": d.total,
                    "decimal": d.value(),
                }),
            )?;
            Ok(EXIT_OK)
        }
    }
}

fn field_info(k: &NumberField, show_primes: u64) -> Result<Value> {
    let splits = primes_up_to(show_primes)
        .into_iter()
        .map(|p| split_prime(k, p).map(|s| SplitSummary::from(&s)))
        .collect::<Result<Vec<_>>>()?;
    let mut v = json!({
        "field": k.coeffs().iter().map(number).collect::<Vec<_>>(),
        "degree": k.degree(),
        "disc": number(k.discriminant()),
        "maximality": k.maximality(),
        "irreducibility": k.irreducibility(),
        "splits": splits,
    });
    if let Some(w) = k.warning() {
        v["warning"] = json!(w);
    }
    Ok(v)
}
