use std::io::{self, Write};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use finsum_cli::config::Config;
use finsum_cli::output::{to_json, write_csv};
use finsum_cli::run::{parse_complex, run, MethodChoice, Request, DEFAULT_TOL};
use finsum_cli::bench;
use finsum_core::Variant;
use finsum_core::identities::{verify_identity, Grid, IDENTITIES};

#[derive(Parser)]
#[command(name = "finsum", version, about = "Finite sums by integral transforms, cross-checked against direct summation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sum an expression in k over k = 1..N.
    Eval(EvalArgs),
    /// Closed-form identity checks.
    Identities {
        #[command(subcommand)]
        action: IdentityAction,
    },
    /// Accuracy and cost of every method on a fixed set of series, as CSV.
    Bench {
        #[arg(long, default_value = "standard")]
        suite: String,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
}

#[derive(Subcommand)]
enum IdentityAction {
    /// Compare every closed form with direct summation over a parameter grid.
    Verify {
        #[arg(long, default_value = "default")]
        grid: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Every option may also come from the file named by FINSUM_CONFIG.
#[derive(clap::Args)]
struct EvalArgs {
    /// Index function g(k), e.g. "1/(k^2+1)".
    #[arg(long)]
    expr: Option<String>,
    #[arg(long)]
    n: Option<String>,
    /// oracle, laplace, fourier, telescope, euler-maclaurin, closed-form or all.
    #[arg(long)]
    method: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long)]
    variant: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(long)]
    tol: Option<String>,
    #[arg(long)]
    format: Option<String>,
}

fn request(args: EvalArgs, config: &Config) -> Result<(Request, Format)> {
    let expr = config.pick(args.expr, "expr").context("--expr is required")?;
    let n: u64 = config
        .pick(args.n, "n")
        .context("--n is required")?
        .parse()
        .context("--n must be a positive integer")?;
    let methods = MethodChoice::parse_list(&config.pick(args.method, "method").unwrap_or_else(|| "all".into()))?;
    let mut req = Request::new(expr, n, methods);
    if let Some(a) = config.pick(args.alpha, "alpha") {
        req.alpha = parse_complex(&a).context("--alpha")?;
    }
    if let Some(v) = config.pick(args.variant, "variant") {
        req.variant = v.parse::<Variant>()?;
    }
    if let Some(b) = config.pick(args.beta, "beta") {
        req.beta = parse_complex(&b).context("--beta")?;
    }
    if let Some(t) = config.pick(args.tol, "tol") {
        req.tol = t.parse().context("--tol must be a number")?;
    }
    let format = match config.pick(args.format, "format") {
        Some(f) => Format::from_str(&f, true).map_err(|e| anyhow::anyhow!("--format: {e}"))?,
        None => Format::Json,
    };
    Ok((req, format))
}

fn eval(args: EvalArgs) -> Result<ExitCode> {
    let config = Config::from_env()?;
    let (req, format) = request(args, &config)?;
    let report = run(&req)?;
    let mut out = io::stdout().lock();
    match format {
        Format::Json => writeln!(out, "{}", to_json(&report)?)?,
        Format::Csv => write_csv(&report, &mut out)?,
    }
    Ok(if report.succeeded() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn verify(grid: &str) -> Result<ExitCode> {
    let grid: Grid = grid.parse()?;
    let mut out = io::stdout().lock();
    let mut ok = true;
    for identity in IDENTITIES.iter() {
        let r = verify_identity(identity.name, grid)?;
        writeln!(
            out,
            "{:<11} {} points={} max_abs={:.3e} max_rel={:.3e} warnings={}",
            r.identity,
            if r.passed() { "PASS" } else { "FAIL" },
            r.points,
            r.max_abs,
            r.max_rel,
            r.warnings
        )?;
        for d in r.failures.iter().take(5) {
            writeln!(
                out,
                "  params={:?} N={} closed={} direct={}",
                d.point.params, d.point.n, d.closed_form, d.direct
            )?;
        }
        ok &= r.passed();
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Eval(args) => eval(args),
        Command::Identities {
            action: IdentityAction::Verify { grid },
        } => verify(&grid),
        Command::Bench { suite, tol } => {
            bench::suite(&suite).and_then(|cases| bench::write_bench(&cases, tol, io::stdout().lock()).map(|()| ExitCode::SUCCESS))
        }
    };
    outcome.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::from(2)
    })
}
