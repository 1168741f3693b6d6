use std::io::Read;
use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use peaceful_cli::api::{
    self, ApiError, BucketsResponse, PointsRequest, SolveRequest, VerifyResponse,
};
use peaceful_cli::service::{self, ServiceConfig};
use peaceful_core::{Bounds, Construction, Point, SolveReport};
use serde::Deserialize;

/// Peaceful point sets: no three chosen grid points form the angle θ.
///
/// Angles are written `deg=45|90|135|180` or `tan=±p/q`.
#[derive(Parser)]
#[command(name = "peaceful", version)]
struct Cli {
    /// Grid side length.
    #[arg(long, global = true)]
    n: Option<u32>,
    /// Forbidden angle, e.g. `deg=135` or `tan=-3/2`.
    #[arg(long, global = true)]
    theta: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Check a construction file (or stdin) for forbidden angles.
    ///
    /// Exits 0 when peaceful, 1 when violations were found, 2 on bad input.
    Verify {
        /// Construction JSON `{"n": .., "points": [[x, y], ..]}`; `-` or absent for stdin.
        input: Option<PathBuf>,
        /// Stop after this many violations.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Print a named construction: `two-rows` or `witness`.
    Construct {
        kind: String,
        /// Swap x and y (two columns instead of two rows).
        #[arg(long)]
        transpose: bool,
    },
    /// Lower and upper bounds on the largest peaceful set.
    Bounds,
    /// Search for a large peaceful set.
    Solve {
        /// oracle, branch-and-bound or greedy.
        #[arg(long, default_value = "branch-and-bound")]
        mode: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        budget_nodes: Option<u64>,
        #[arg(long)]
        budget_seconds: Option<f64>,
        /// Disable root symmetry breaking in branch and bound.
        #[arg(long)]
        no_symmetry: bool,
        /// Greedy restarts.
        #[arg(long)]
        restarts: Option<u32>,
    },
    /// List the lines of one slope and cross-check their count against pn + qn - pq.
    Buckets {
        /// `-1`, `1/2`, `vertical`, ...
        #[arg(long, allow_hyphen_values = true)]
        slope: String,
    },
    /// Run the local JSON service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        /// Largest n accepted by the endpoints.
        #[arg(long, default_value_t = api::DEFAULT_N_CAP)]
        max_n: u32,
        /// Concurrent solve jobs.
        #[arg(long)]
        workers: Option<usize>,
    },
}

/// A construction file. `n` may instead come from `--n`.
#[derive(Deserialize)]
struct ConstructionFile {
    #[serde(default)]
    n: Option<u32>,
    points: Vec<Point>,
}

/// The CLI has no size cap of its own.
const NO_CAP: u32 = u32::MAX;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            match e.downcast_ref::<ApiError>() {
                Some(api) if cli.format == Format::Json => eprint!("{}", api::render(api)),
                _ => eprintln!("error: {e:#}"),
            }
            ExitCode::from(2)
        }
    }
}

fn theta(cli: &Cli) -> anyhow::Result<&str> {
    cli.theta
        .as_deref()
        .ok_or_else(|| ApiError::bad_request("missing_theta", "--theta is required").into())
}

fn n(cli: &Cli) -> anyhow::Result<u32> {
    cli.n
        .ok_or_else(|| ApiError::bad_request("missing_n", "--n is required").into())
}

fn run(cli: &Cli) -> anyhow::Result<ExitCode> {
    match &cli.command {
        Command::Verify { input, limit } => {
            let text = read_input(input.as_ref())?;
            let file: ConstructionFile = api::parse_json(&text)?;
            let n = match (cli.n, file.n) {
                (Some(a), Some(b)) if a != b => {
                    return Err(ApiError::bad_request(
                        "domain_error",
                        format!("--n {a} disagrees with n = {b} in the input"),
                    )
                    .into())
                }
                (Some(n), _) | (None, Some(n)) => n,
                (None, None) => return Err(ApiError::bad_request("missing_n", "no n given").into()),
            };
            let req = PointsRequest {
                n,
                theta: theta(cli)?.to_owned(),
                points: file.points,
                limit: *limit,
            };
            let report = api::verify_request(&req, NO_CAP)?;
            emit(cli.format, &report, verify_text);
            Ok(if report.is_peaceful() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Construct { kind, transpose } => {
            let c = api::construct(
                kind.parse()?,
                cli.n,
                cli.theta.as_deref(),
                *transpose,
                NO_CAP,
            )?;
            emit(cli.format, &c, picture);
            Ok(ExitCode::SUCCESS)
        }
        Command::Bounds => {
            let b = api::bounds_request(n(cli)?, theta(cli)?, NO_CAP)?;
            emit(cli.format, &b, bounds_text);
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve {
            mode,
            seed,
            budget_nodes,
            budget_seconds,
            no_symmetry,
            restarts,
        } => {
            let req = SolveRequest {
                n: n(cli)?,
                theta: theta(cli)?.to_owned(),
                mode: Some(mode.clone()),
                seed: *seed,
                budget_nodes: *budget_nodes,
                budget_seconds: *budget_seconds,
                symmetry_breaking: Some(!no_symmetry),
                restarts: *restarts,
            };
            let report = api::solve(&req, NO_CAP)?;
            emit(cli.format, &report, solve_text);
            Ok(ExitCode::SUCCESS)
        }
        Command::Buckets { slope } => {
            let b = api::buckets(n(cli)?, slope, NO_CAP)?;
            emit(cli.format, &b, buckets_text);
            Ok(ExitCode::SUCCESS)
        }
        Command::Serve {
            port,
            host,
            max_n,
            workers,
        } => {
            let mut config = ServiceConfig {
                n_cap: *max_n,
                ..ServiceConfig::default()
            };
            if let Some(w) = workers {
                config.workers = *w;
            }
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(service::serve(SocketAddr::new(*host, *port), config))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn read_input(path: Option<&PathBuf>) -> anyhow::Result<String> {
    let mut text = String::new();
    match path {
        Some(p) if p.as_os_str() != "-" => {
            text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?
        }
        _ => {
            std::io::stdin()
                .read_to_string(&mut text)
                .context("reading stdin")?;
        }
    }
    Ok(text)
}

fn emit<T: serde::Serialize>(format: Format, value: &T, text: fn(&T) -> String) {
    match format {
        Format::Json => print!("{}", api::render(value)),
        Format::Text => print!("{}", text(value)),
    }
}

fn verify_text(r: &VerifyResponse) -> String {
    if r.is_peaceful() {
        return "peaceful\n".into();
    }
    let mut out = format!("{} violation(s) of {}:\n", r.violations.len(), r.theta);
    for t in &r.violations {
        out += &format!("  {} at vertex {} with {}\n", t.a, t.vertex, t.c);
    }
    out
}

/// Row `n` at the top, `#` for chosen cells.
fn picture(c: &Construction) -> String {
    let n = c.dim().n() as i32;
    let mut out = String::new();
    for y in (1..=n).rev() {
        let row: Vec<&str> = (1..=n)
            .map(|x| {
                if c.contains(Point::new(x, y)) {
                    "#"
                } else {
                    "."
                }
            })
            .collect();
        out += &row.join(" ");
        out.push('\n');
    }
    out += &format!("n = {}, {} points\n", n, c.len());
    out
}

fn bounds_text(b: &Bounds) -> String {
    let show = |v: Option<u64>| v.map_or("unknown".to_string(), |v| v.to_string());
    let mut out = format!(
        "lower: {}{}\n",
        show(b.lower),
        b.lower_formula
            .map(|f| format!(" ({})", f.label()))
            .unwrap_or_default()
    );
    out += &format!(
        "upper: {}{}{}\n",
        show(b.upper),
        b.formula
            .as_ref()
            .map(|f| format!(" ({f})"))
            .unwrap_or_default(),
        if b.external { " [external]" } else { "" }
    );
    for note in &b.notes {
        out += &format!("note: {note}\n");
    }
    out
}

fn solve_text(r: &SolveReport) -> String {
    let mut out = picture(&r.best);
    out += &format!(
        "size {} ({}), {} nodes, {} ms\n",
        r.size,
        if r.optimal { "optimal" } else { "best found" },
        r.nodes_explored,
        r.elapsed.as_millis()
    );
    out
}

fn buckets_text(b: &BucketsResponse) -> String {
    let mut out = format!("{} lines of slope {} on G_{}", b.count, b.slope, b.n);
    match (b.formula, b.formula_match) {
        (Some(f), Some(m)) => {
            out += &format!(
                "; pn + qn - pq = {f} ({})\n",
                if m { "match" } else { "MISMATCH" }
            )
        }
        _ => out.push('\n'),
    }
    for (id, bucket) in b.buckets.iter().enumerate() {
        let pts: Vec<String> = bucket.iter().map(Point::to_string).collect();
        out += &format!("  {id}: {}\n", pts.join(" "));
    }
    out
}
