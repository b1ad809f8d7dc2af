use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use qseries::catalog::{self, SuiteSummary, DEFAULT_ORDER};
use qseries::expr::{evaluate, parse_expr, parse_identities, Env};
use qseries::stringfn::{string_c, StringParams};
use qseries::Series;

#[derive(Parser)]
#[command(name = "qseries", version, about = "Exact q-series coefficients and identity verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the coefficients of an expression up to the given order.
    Coeffs {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        order: i64,
        /// Parameter binding `name=value`; may be repeated.
        #[arg(long = "param", value_parser = parse_binding)]
        params: Vec<(String, i64)>,
    },
    /// Verify built-in or user identities.
    Verify {
        /// Glob over entry names and tags; `all` selects everything.
        #[arg(long, conflicts_with = "file")]
        suite: Option<String>,
        /// Identity file to verify instead of the built-in suite.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: i64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Write the report here instead of standard output.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Print the normalized string function coefficients.
    String {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        pp: i64,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long)]
        l: i64,
        #[arg(long)]
        order: i64,
    },
    /// Inspect the built-in suite.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// List entry names and anchors.
    List { pattern: Option<String> },
}

fn parse_binding(s: &str) -> Result<(String, i64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, got `{s}`"))?;
    let v = v.trim().parse().map_err(|e| format!("bad value in `{s}`: {e}"))?;
    Ok((k.trim().to_string(), v))
}

enum Failure {
    Usage(String),
    Verification,
}

impl From<qseries::Error> for Failure {
    fn from(e: qseries::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn print_coefficients(s: &Series) {
    let start = s.lo().min(0);
    for e in start..=s.order() {
        let c = s.coefficient_at(e).expect("inside the validity window");
        if c.is_integer() {
            println!("{e} {}", c.numer());
        } else {
            println!("{e} {}/{}", c.numer(), c.denom());
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Coeffs { expr, order, params } => {
            let names: Vec<&str> = params.iter().map(|(k, _)| k.as_str()).collect();
            let e = parse_expr(&expr, &names)?;
            let env: Env = params.iter().map(|(k, v)| (k.clone(), (*v).into())).collect();
            print_coefficients(&evaluate(&e, &env, order)?.truncate(order));
        }
        Command::String { p, pp, m, l, order } => {
            let params = StringParams::new(p, pp, m, l)?;
            print_coefficients(&string_c(&params, order)?.truncate(order));
        }
        Command::Catalog { action: CatalogAction::List { pattern } } => {
            for id in catalog::list_identities(pattern.as_deref())? {
                println!("{}\t{}", id.name, id.anchor);
            }
        }
        Command::Verify { suite, file, order, jobs, report } => {
            let started = Instant::now();
            let summary: SuiteSummary = match file {
                Some(path) => {
                    let text = fs::read_to_string(&path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                    let ids = parse_identities(&text)?;
                    let refs: Vec<_> = ids.iter().collect();
                    catalog::verify_instances(&refs, order, jobs)?
                }
                None => catalog::verify_suite(Some(suite.as_deref().unwrap_or("all")), order, jobs)?,
            };
            let text = summary.to_string();
            match report {
                Some(path) => fs::write(&path, &text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
                None => print!("{text}"),
            }
            eprintln!(
                "{} instances, {} failed, {} errors, {:.2}s",
                summary.total(),
                summary.failed,
                summary.errors,
                started.elapsed().as_secs_f64()
            );
            if !summary.ok() {
                return Err(Failure::Verification);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
