//! `lagrange`: invert formal power series and run the identity checks from
//! the command line. JSON goes to stdout; diagnostics go to stderr.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 usage or contract error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lagrange_core::combinatorics::{bell_number, bell_polynomial, set_partitions};
use lagrange_core::random::{default_pool, RandomSpec};
use lagrange_core::rational::parse_rational;
use lagrange_core::series::{Convention, EgfSeries, InvertibleSeries, SeriesJson};
use lagrange_core::suite::{run_theorem, InverseSet, TheoremId, VerifyReport};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "lagrange", version, about = "Compositional inversion and operator identity checks over exact rationals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the compositional inverse of a series.
    Invert(InvertArgs),
    /// Run a named identity suite on seeded random instances.
    Verify(VerifyArgs),
    /// List the set partitions of [m].
    Partitions(SizeArgs),
    /// Print the complete Bell polynomial Y_m.
    Bell(SizeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Classical,
    Operator,
    Log,
    Newton,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    Egf,
    Ogf,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Egf => Convention::Egf,
            ConventionArg::Ogf => Convention::Ogf,
        }
    }
}

#[derive(clap::Args, Debug)]
struct InvertArgs {
    #[arg(long, value_enum, default_value = "all")]
    method: Method,
    /// Number of inverse coefficients N to compute.
    #[arg(long)]
    order: usize,
    /// Comma-separated coefficients a0,a1,... (integers or p/q).
    #[arg(long, allow_hyphen_values = true, conflicts_with = "input")]
    coeffs: Option<String>,
    /// JSON series file: {"convention": "egf"|"ogf", "order": N, "coeffs": [...]}.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Convention of --coeffs; a JSON input carries its own.
    #[arg(long, value_enum, default_value = "egf")]
    convention: ConventionArg,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(clap::Args, Debug)]
struct VerifyArgs {
    /// One of: prop1, corollary, compos, bellpower, expid, stirling, inversion.
    theorem: String,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of variables of random operators.
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Degree bound for random polynomial coefficients.
    #[arg(long, default_value_t = 2)]
    degree: usize,
    /// Operator count / power (compos, bellpower, stirling).
    #[arg(long)]
    m: Option<usize>,
    /// Series order (inversion) or z-order (expid).
    #[arg(long)]
    order: Option<usize>,
    /// Include per-report elapsed times (makes output non-reproducible).
    #[arg(long)]
    timings: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(clap::Args, Debug)]
struct SizeArgs {
    #[arg(long)]
    m: usize,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

/// A failure that maps to exit code 2.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Invert(args) => run_invert(&args),
        Command::Verify(args) => run_verify(&args),
        Command::Partitions(args) => run_partitions(&args),
        Command::Bell(args) => run_bell(&args),
    };
    match outcome {
        Ok(code) => code,
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Usage> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn read_series(args: &InvertArgs) -> Result<(EgfSeries, Convention), Usage> {
    match (&args.coeffs, &args.input) {
        (Some(list), None) => {
            let raw = list
                .split(',')
                .map(parse_rational)
                .collect::<Result<Vec<_>, _>>()?;
            if raw.is_empty() {
                return Err(Usage("no coefficients given".into()));
            }
            let convention = Convention::from(args.convention);
            let series = match convention {
                Convention::Egf => EgfSeries::new(raw),
                Convention::Ogf => EgfSeries::from_ogf(&raw),
            };
            Ok((series, convention))
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Usage(format!("{}: {e}", path.display())))?;
            let json: SeriesJson = serde_json::from_str(&text)?;
            Ok((EgfSeries::from_json(&json)?, json.convention))
        }
        _ => Err(Usage("give exactly one of --coeffs or --input".into())),
    }
}

fn run_invert(args: &InvertArgs) -> Result<ExitCode, Usage> {
    let (series, convention) = read_series(args)?;
    let f = InvertibleSeries::new(series)?;
    let n = args.order;
    let ser = |s: &EgfSeries| serde_json::to_value(s.to_json(convention));

    let mut out = serde_json::Map::new();
    out.insert("method".into(), json!(format!("{:?}", args.method).to_lowercase()));
    out.insert("order".into(), json!(n));
    let mut text = Vec::new();
    match args.method {
        Method::Classical | Method::Operator | Method::Newton => {
            let g = match args.method {
                Method::Classical => f.inverse_classical(n)?,
                Method::Operator => f.inverse_via_operator(n)?,
                _ => f.inverse_newton(n)?,
            };
            out.insert("inverse".into(), ser(&g)?);
            text.push(format!("inverse: {}", g.to_text()));
        }
        Method::Log => {
            let log = f.inverse_log_form(n)?;
            out.insert("inner".into(), ser(&log.inner)?);
            out.insert("inverse".into(), ser(&log.inverse)?);
            text.push(format!("inner: {}", log.inner.to_text()));
            text.push(format!("inverse: {}", log.inverse.to_text()));
        }
        Method::All => {
            let set = InverseSet::compute(&f, n)?;
            let agree = set.agree();
            let fg = f.series().truncate(n).compose(&set.classical)?;
            let composes = fg == EgfSeries::identity(n);
            out.insert(
                "inverses".into(),
                json!({
                    "classical": ser(&set.classical)?,
                    "operator": ser(&set.operator)?,
                    "log": ser(&set.log_form)?,
                    "newton": ser(&set.newton)?,
                }),
            );
            out.insert("inner".into(), ser(&set.log_inner)?);
            out.insert("agree".into(), json!(agree));
            out.insert("composes_to_identity".into(), json!(composes));
            for (name, s) in [
                ("classical", &set.classical),
                ("operator", &set.operator),
                ("log", &set.log_form),
                ("newton", &set.newton),
            ] {
                text.push(format!("{name}: {}", s.to_text()));
            }
            text.push(format!("inner: {}", set.log_inner.to_text()));
            text.push(format!("agree: {agree}"));
            if !(agree && composes) {
                emit(args.format, &Value::Object(out), &text)?;
                return Ok(ExitCode::from(1));
            }
        }
    }
    emit(args.format, &Value::Object(out), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn emit(format: Format, json: &Value, text: &[String]) -> Result<(), Usage> {
    match format {
        Format::Json => print_json(json),
        Format::Text => {
            for line in text {
                println!("{line}");
            }
            Ok(())
        }
    }
}

fn default_size(id: TheoremId) -> usize {
    match id {
        TheoremId::Prop1 | TheoremId::Corollary | TheoremId::Compos => 3,
        TheoremId::BellPower | TheoremId::ExpId | TheoremId::Stirling => 4,
        TheoremId::Inversion => 8,
    }
}

fn run_verify(args: &VerifyArgs) -> Result<ExitCode, Usage> {
    let id: TheoremId = args.theorem.parse()?;
    let size = match id {
        TheoremId::Inversion | TheoremId::ExpId => args.order.or(args.m),
        _ => args.m.or(args.order),
    }
    .unwrap_or_else(|| default_size(id));
    let spec = RandomSpec {
        seed: args.seed,
        n: args.n,
        max_degree: args.degree,
        pool: default_pool(),
        size,
    };
    let reports: Vec<VerifyReport> = run_theorem(id, &spec, args.trials)?
        .into_iter()
        .map(|r| if args.timings { r } else { r.without_timing() })
        .collect();
    let all_pass = reports.iter().all(|r| r.pass);
    match args.format {
        Format::Json => print_json(&reports)?,
        Format::Text => {
            for r in &reports {
                let seed = r.seed.map(|s| format!(" seed={s}")).unwrap_or_default();
                let terms = r.summands.map(|s| format!(" terms={s}")).unwrap_or_default();
                let status = if r.pass { "PASS" } else { "FAIL" };
                println!("{status} {}{seed} {}{terms}", r.theorem, r.instance);
                if !r.pass {
                    println!("  lhs: {}\n  rhs: {}", r.lhs, r.rhs);
                }
            }
        }
    }
    Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run_partitions(args: &SizeArgs) -> Result<ExitCode, Usage> {
    let parts = set_partitions(args.m)?;
    let rendered: Vec<String> = parts.iter().map(ToString::to_string).collect();
    let json = json!({ "m": args.m, "count": parts.len(), "partitions": rendered });
    emit(args.format, &json, &rendered)?;
    Ok(ExitCode::SUCCESS)
}

fn run_bell(args: &SizeArgs) -> Result<ExitCode, Usage> {
    if args.m == 0 {
        return Err(Usage("m must be at least 1".into()));
    }
    let y = bell_polynomial(args.m);
    let terms: Vec<Value> = y
        .terms()
        .map(|(lambda, k)| json!({ "partition": lambda.to_string(), "coeff": k.to_string() }))
        .collect();
    let json = json!({
        "m": args.m,
        "polynomial": y.to_string(),
        "terms": terms,
        "bell_number": bell_number(args.m).to_string(),
    });
    emit(args.format, &json, &[y.to_string()])?;
    Ok(ExitCode::SUCCESS)
}
