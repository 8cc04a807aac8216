use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use toric_apery::apery::apery_limit;
use toric_apery::catalog;
use toric_apery::pfops::{involution, singular_points};
use toric_apery::pipeline::{
    self, check_v16, discover_operator, polytope_summary, resolve_input, PipelineConfig,
    PipelineError,
};
use toric_apery::polytope::temperedness_check;
use toric_apery::Rational;

#[derive(Parser)]
#[command(name = "toric-apery", version, about = "Periods, Picard-Fuchs operators and Apéry limits of Laurent polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Emit JSON (the only output format).
    #[arg(long, global = true, default_value_t = true)]
    json: bool,

    /// Terms for the Apéry recurrence, or period terms with --periods-only.
    #[arg(long, global = true, default_value_t = 200)]
    terms: usize,

    /// Decimal digits for limits and constants.
    #[arg(long, global = true, default_value_t = 50)]
    digits: u32,

    /// Operator search box as ORDERxDEGREE.
    #[arg(long, global = true, default_value = "4x4", value_parser = parse_ansatz)]
    ansatz: (usize, usize),

    /// Largest denominator accepted by recognition.
    #[arg(long, global = true, default_value_t = 10_000)]
    max_denominator: u64,

    /// Period terms used for operator discovery (the last 8 are held out).
    #[arg(long, global = true, default_value_t = 30)]
    discovery_terms: usize,

    /// Recheck periods against full expansion of each power.
    #[arg(long, global = true)]
    oracle: bool,

    /// Exit with status 6 when the limit is not recognized.
    #[arg(long, global = true)]
    require_recognition: bool,

    /// Stop `run` after the period sequence.
    #[arg(long, global = true)]
    periods_only: bool,

    /// Include per-stage wall-clock timings.
    #[arg(long, global = true)]
    timings: bool,

    /// Add a constant to the membrane integrands (negative control).
    #[arg(long, global = true, hide = true)]
    perturb: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in models.
    Catalog,
    /// Full pipeline on a catalog name or a polynomial in x, y, z.
    Run { input: String },
    /// Period sequence a_0..a_N.
    Periods { input: String },
    /// Discover the Picard-Fuchs operator.
    Pfop { input: String },
    /// Symbol, singular points and involution.
    Singular { input: String },
    /// Reflexivity and the edge criterion for temperedness.
    Tempered { input: String },
    /// Apéry limit and its recognition.
    Apery { input: String },
    /// Membrane integral for V16 against 7 zeta(3).
    CheckV16,
}

fn parse_ansatz(s: &str) -> Result<(usize, usize), String> {
    let (r, d) = s
        .to_ascii_lowercase()
        .split_once('x')
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .ok_or_else(|| format!("expected ORDERxDEGREE, got {s:?}"))?;
    let r: usize = r.trim().parse().map_err(|_| format!("bad order in {s:?}"))?;
    let d: usize = d.trim().parse().map_err(|_| format!("bad degree in {s:?}"))?;
    if r == 0 {
        return Err("order must be at least 1".into());
    }
    Ok((r, d))
}

impl Cli {
    fn config(&self) -> PipelineConfig {
        PipelineConfig {
            terms: self.terms,
            digits: self.digits,
            max_order: self.ansatz.0,
            max_degree: self.ansatz.1,
            discovery_terms: self.discovery_terms,
            max_denominator: self.max_denominator,
            periods_only: self.periods_only,
            oracle: self.oracle,
            require_recognition: self.require_recognition,
            ..PipelineConfig::default()
        }
    }
}

enum Failure {
    Pipeline(PipelineError),
    Usage(String),
    /// Output was produced but the check did not pass.
    Check(Value),
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        Failure::Pipeline(e)
    }
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn execute(cli: &Cli) -> Result<Value, Failure> {
    let config = cli.config();
    match &cli.command {
        Command::Catalog => Ok(to_json(&catalog::all())),
        Command::Run { input } => {
            let mut report = pipeline::run(input, &config)?;
            if !cli.timings {
                report.timings.clear();
            }
            Ok(to_json(&report))
        }
        Command::Periods { input } => {
            let phi = resolve_input(input).map_err(PipelineError::from)?;
            Ok(to_json(&pipeline::periods(&phi, cli.terms, cli.oracle)?))
        }
        Command::Pfop { input } => {
            let (_, op) = discovered(input, &config)?;
            let rec = op.to_recurrence();
            let q: Vec<String> = rec.coefficients().iter().map(|p| p.display_in("n")).collect();
            Ok(json!({
                "operator": to_json(&op),
                "display": op.to_string(),
                "recurrence": q,
                "symbol": op.symbol().display_in("t"),
            }))
        }
        Command::Singular { input } => {
            let (_, op) = discovered(input, &config)?;
            Ok(json!({
                "symbol": op.symbol().display_in("t"),
                "singular": to_json(&singular_points(&op)),
                "points": singular_points(&op).finite_points.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                "involution": to_json(&involution(&op)),
            }))
        }
        Command::Tempered { input } => {
            let phi = resolve_input(input).map_err(PipelineError::from)?;
            let summary = polytope_summary(&phi).map_err(PipelineError::from)?;
            let report = temperedness_check(&phi).map_err(PipelineError::from)?;
            Ok(json!({
                "polytope": to_json(&summary),
                "criterion": "Minkowski edge criterion",
                "temperedness": to_json(&report),
            }))
        }
        Command::Apery { input } => {
            let (_, op) = discovered(input, &config)?;
            let singular = singular_points(&op);
            let mut result = apery_limit(&op.to_recurrence(), &singular, cli.digits, cli.terms)
                .map_err(PipelineError::from)?;
            result.recognize(&config.bases, config.max_denominator, config.guard_digits);
            if result.recognized.is_none() && cli.require_recognition {
                return Err(Failure::Pipeline(PipelineError::RecognitionAbsent));
            }
            Ok(to_json(&result))
        }
        Command::CheckV16 => {
            let perturbation = match &cli.perturb {
                Some(text) => Some(
                    text.parse::<Rational>()
                        .map_err(|_| Failure::Usage(format!("bad perturbation {text:?}")))?,
                ),
                None => None,
            };
            let check = check_v16(cli.digits, perturbation.as_ref())?;
            let value = to_json(&check);
            if check.pass {
                Ok(value)
            } else {
                Err(Failure::Check(value))
            }
        }
    }
}

fn discovered(
    input: &str,
    config: &PipelineConfig,
) -> Result<(toric_apery::PeriodSequence, toric_apery::DifferentialOperator), PipelineError> {
    let phi = resolve_input(input)?;
    let seq = pipeline::periods(&phi, config.discovery_terms.max(1) - 1, config.oracle)?;
    let op = discover_operator(&seq.values, config)?;
    Ok((seq, op))
}

fn emit(v: &Value) {
    let text = serde_json::to_string_pretty(v).expect("valid json");
    // a closed pipe downstream is not an error worth reporting
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(v) => {
            emit(&v);
            ExitCode::SUCCESS
        }
        Err(Failure::Pipeline(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(v)) => {
            emit(&v);
            eprintln!("error: check failed");
            ExitCode::from(6)
        }
    }
}
