//! `bernapprox`: identity suites, convergence experiments and the
//! rational approximation pipeline from the shell.
//!
//! Exit codes: 0 success, 1 a mathematical check failed, 2 usage or parse
//! error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use bernapprox::approx::{build_qn, ApproxError, ApproxRequest, Smoothness};
use bernapprox::verify::{identity_suites, run_convergence};
use bernapprox::{Expression, MultiIndex};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "bernapprox",
    version,
    about = "Bernstein approximation experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Exact moment, variance, linearity and factorization suites.
    Identities {
        #[arg(long)]
        n_max: u32,
        #[arg(long, default_value_t = 25)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sup-norm errors of ∂^β B_α(f) over a ladder of degrees.
    Converge {
        #[arg(long = "fn")]
        function: String,
        #[arg(long)]
        dim: usize,
        /// Derivative order, comma-joined; repeatable. Defaults to 0.
        #[arg(long)]
        beta: Vec<String>,
        /// Bernstein degree, comma-joined or one integer for every axis; repeatable.
        #[arg(long, alias = "alpha", required = true)]
        ladder: Vec<String>,
        #[arg(long, default_value_t = 101)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Builds the rational polynomial q_n.
    Build {
        #[arg(long = "fn")]
        function: String,
        #[arg(long)]
        dim: usize,
        /// Smoothness: "inf" or a comma-joined multi-index.
        #[arg(long, default_value = "inf")]
        gamma: String,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 101)]
        grid: usize,
        #[arg(long, default_value_t = 64)]
        alpha_cap: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Math(String),
}

impl From<bernapprox::Error> for Failure {
    fn from(e: bernapprox::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn parse_index(text: &str, dim: usize) -> Result<MultiIndex, Failure> {
    let parts = text
        .split(',')
        .map(|s| s.trim().parse::<u32>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| Failure::Usage(format!("not a multi-index: {text:?}")))?;
    let entries = if parts.len() == 1 && dim > 1 {
        vec![parts[0]; dim]
    } else {
        parts
    };
    if entries.len() != dim {
        return Err(Failure::Usage(format!(
            "multi-index {text:?} has {} entries, expected {dim}",
            entries.len()
        )));
    }
    Ok(MultiIndex::new(entries)?)
}

fn emit(out: &Option<PathBuf>, body: &str) -> Outcome {
    match out {
        Some(path) => fs::write(path, body)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn identities(n_max: u32, trials: usize, seed: u64) -> Outcome {
    if n_max == 0 {
        return Err(Failure::Usage("--n-max must be at least 1".into()));
    }
    let suites = identity_suites(n_max, trials, seed)?;
    let mut first = None;
    for s in &suites {
        println!(
            "{:<14} checked {:>6}  failed {:>4}",
            s.name, s.checked, s.failed
        );
        if first.is_none() {
            first = s
                .first_counterexample
                .clone()
                .map(|c| format!("{}: {c}", s.name));
        }
    }
    match first {
        None => Ok(()),
        Some(c) => Err(Failure::Math(format!("counterexample in {c}"))),
    }
}

#[allow(clippy::too_many_arguments)]
fn converge(
    function: &str,
    dim: usize,
    beta: &[String],
    ladder: &[String],
    grid: usize,
    out: &Option<PathBuf>,
    format: Format,
) -> Outcome {
    let f = Expression::parse(function, dim)?;
    let betas = if beta.is_empty() {
        vec![MultiIndex::zeros(dim)]
    } else {
        beta.iter()
            .map(|b| parse_index(b, dim))
            .collect::<Result<_, _>>()?
    };
    let ladder: Vec<MultiIndex> = ladder
        .iter()
        .map(|a| parse_index(a, dim))
        .collect::<Result<_, _>>()?;
    for a in &ladder {
        for b in &betas {
            if !b.is_lt(a)? {
                return Err(Failure::Usage(format!(
                    "alpha ({a}) does not strictly dominate beta ({b})"
                )));
            }
        }
    }
    let report = run_convergence(&f, &betas, &ladder, grid)?;
    let body = match format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => report.to_csv(),
    };
    emit(out, &body)?;
    if out.is_some() {
        for r in &report.rows {
            println!("alpha ({}) beta ({}): {}", r.alpha, r.beta, r.sup_error);
        }
    }
    for (stage, t) in &report.timings {
        eprintln!("{stage}: {:.3}s", t.as_secs_f64());
    }
    for s in &report.skipped {
        eprintln!(
            "skipped alpha ({}) beta ({}): {}",
            s.alpha, s.beta, s.reason
        );
    }
    let mut failed = Vec::new();
    for v in &report.verdicts {
        let line = format!(
            "beta ({}): bottom {:?} top {:?} halved {}",
            v.beta, v.bottom, v.top, v.halved
        );
        eprintln!("{line}");
        if !v.halved {
            failed.push(line);
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Math(format!(
            "halving check failed: {}",
            failed.join("; ")
        )))
    }
}

#[allow(clippy::too_many_arguments)]
fn build(
    function: &str,
    dim: usize,
    gamma: &str,
    n: u32,
    grid: usize,
    alpha_cap: u32,
    out: &Option<PathBuf>,
) -> Outcome {
    let f = Expression::parse(function, dim)?;
    let gamma = if gamma.trim().eq_ignore_ascii_case("inf") {
        Smoothness::Infinite
    } else {
        Smoothness::Finite(parse_index(gamma, dim)?)
    };
    let req = ApproxRequest::new(f, gamma, n, grid, alpha_cap)?;
    match build_qn(&req) {
        Ok(res) => {
            emit(out, &(res.to_json() + "\n"))?;
            if out.is_some() {
                println!("alpha ({}), {} terms", res.alpha, res.q.num_terms());
            }
            for e in &res.errors {
                eprintln!("beta ({}): {:e} (limit 1/{n})", e.beta, e.estimate);
            }
            Ok(())
        }
        Err(ApproxError::Invalid(e)) => Err(e.into()),
        Err(ApproxError::AlphaCapExhausted { cap, attempts }) => {
            let body = serde_json::json!({ "error": "alpha_cap exhausted", "alpha_cap": cap, "attempts": attempts });
            emit(
                out,
                &(serde_json::to_string_pretty(&body).unwrap_or_default() + "\n"),
            )?;
            Err(Failure::Math(format!(
                "alpha_cap {cap} exhausted before the Bernstein stage met its budget"
            )))
        }
        Err(ApproxError::FinalCheckFailed { n, worst, result }) => {
            emit(out, &(result.to_json() + "\n"))?;
            Err(Failure::Math(format!(
                "final error estimate {worst} is not below 1/{n}"
            )))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match &cli.command {
        Command::Identities {
            n_max,
            trials,
            seed,
        } => identities(*n_max, *trials, *seed),
        Command::Converge {
            function,
            dim,
            beta,
            ladder,
            grid,
            out,
            format,
        } => converge(function, *dim, beta, ladder, *grid, out, *format),
        Command::Build {
            function,
            dim,
            gamma,
            n,
            grid,
            alpha_cap,
            out,
        } => build(function, *dim, gamma, *n, *grid, *alpha_cap, out),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Math(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
