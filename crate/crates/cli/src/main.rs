use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use wcspflow::benchmarks::{
    generate, oracle_solve, parse_instance, run_suite, write_instance, BenchError, BenchmarkSpec,
    Family, OracleOutcome,
};
use wcspflow::global::ViolationMeasure;
use wcspflow::{solve, Consistency, Cost, SearchConfig, SearchStatus, Wcsp};

const EXIT_LIMIT: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "wcspflow",
    version,
    about = "Weighted CSP solver with soft global cost functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file by branch and bound.
    Solve {
        file: PathBuf,
        #[arg(long, default_value = "wedgac")]
        consistency: Consistency,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Time limit in seconds.
        #[arg(long)]
        timeout: Option<f64>,
        /// Node limit.
        #[arg(long)]
        nodes: Option<u64>,
        /// Accept only solutions cheaper than this.
        #[arg(long)]
        ub: Option<u64>,
    },
    /// Generate a benchmark instance.
    Gen {
        family: Family,
        /// Size parameters, e.g. `8` or `4,3,2`. Defaults to the suite size.
        #[arg(long, value_delimiter = ',')]
        size: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        measure: Option<ViolationMeasure>,
        /// Output file; standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run families at several levels and seeds and report node counts.
    Suite {
        #[arg(long, value_delimiter = ',', default_value = "all-interval")]
        families: Vec<Family>,
        #[arg(long, value_delimiter = ',', default_value = "soic,gac,fdgac,wedgac")]
        levels: Vec<Consistency>,
        /// A count `N` (seeds 0..N), a range `A..B`, or a list `1,5,9`.
        #[arg(long, default_value = "5")]
        seeds: String,
        /// Use the small enumerable sizes instead of the suite sizes.
        #[arg(long)]
        tiny: bool,
        #[arg(long)]
        measure: Option<ViolationMeasure>,
        #[arg(long)]
        timeout: Option<f64>,
        #[arg(long)]
        nodes: Option<u64>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Solve an instance by exhaustive enumeration.
    Oracle { file: PathBuf },
}

fn parse_seeds(s: &str) -> Result<Vec<u64>> {
    if let Some((a, b)) = s.split_once("..") {
        let (a, b): (u64, u64) = (a.trim().parse()?, b.trim().parse()?);
        return Ok((a..b).collect());
    }
    if s.contains(',') {
        return s.split(',').map(|t| Ok(t.trim().parse()?)).collect();
    }
    let n: u64 = s
        .trim()
        .parse()
        .context("seeds must be a count, a range or a list")?;
    Ok((0..n).collect())
}

fn load(path: &PathBuf) -> Result<Wcsp> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_instance(&text)?)
}

fn seconds(t: Option<f64>) -> Result<Option<Duration>> {
    match t {
        Some(s) if s.is_nan() || s <= 0.0 => bail!("timeout must be positive"),
        Some(s) => Ok(Some(Duration::from_secs_f64(s))),
        None => Ok(None),
    }
}

fn join(values: &[i64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Solve {
            file,
            consistency,
            seed,
            timeout,
            nodes,
            ub,
        } => {
            let w = load(&file)?;
            if nodes == Some(0) {
                bail!("node limit must be positive");
            }
            let cfg = SearchConfig {
                consistency,
                node_limit: nodes,
                time_limit: seconds(timeout)?,
                upper_bound: ub.map(Cost),
                seed,
            };
            let r = solve(&w, &cfg);
            let status = match r.status {
                SearchStatus::Optimal => "optimal",
                SearchStatus::Infeasible => "infeasible",
                SearchStatus::LimitReached => "limit",
            };
            println!("status {status}");
            if let (Some(c), Some(a)) = (r.cost, &r.assignment) {
                println!("cost {c}");
                println!("assignment {}", join(a));
            }
            println!("nodes {}", r.nodes);
            println!("time {:.3}", r.elapsed.as_secs_f64());
            Ok(match r.status {
                SearchStatus::Optimal => 0,
                SearchStatus::Infeasible => EXIT_INFEASIBLE,
                SearchStatus::LimitReached => EXIT_LIMIT,
            })
        }
        Command::Gen {
            family,
            size,
            seed,
            measure,
            output,
        } => {
            let size = if size.is_empty() {
                family.default_size()
            } else {
                size
            };
            let mut spec = BenchmarkSpec::new(family, size, seed);
            if let Some(m) = measure {
                spec = spec.with_measure(m);
            }
            let text = write_instance(&generate(&spec)?);
            match output {
                Some(p) => {
                    std::fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?
                }
                None => print!("{text}"),
            }
            Ok(0)
        }
        Command::Suite {
            families,
            levels,
            seeds,
            tiny,
            measure,
            timeout,
            nodes,
            csv,
        } => {
            let seeds = parse_seeds(&seeds)?;
            let mut specs = Vec::new();
            for &f in &families {
                let size = if tiny {
                    f.tiny_size()
                } else {
                    f.default_size()
                };
                for &s in &seeds {
                    let mut spec = BenchmarkSpec::new(f, size.clone(), s);
                    if let Some(m) = measure {
                        spec = spec.with_measure(m);
                    }
                    specs.push(spec);
                }
            }
            let limits = SearchConfig {
                time_limit: seconds(timeout)?,
                node_limit: nodes,
                ..SearchConfig::default()
            };
            let report = match run_suite(&specs, &levels, &limits) {
                Ok(r) => r,
                Err(e @ BenchError::Disagreement { .. }) => {
                    eprintln!("error: {e}");
                    return Ok(1);
                }
                Err(e) => return Err(e.into()),
            };
            print!("{}", report.to_table());
            if let Some(p) = csv {
                std::fs::write(&p, report.to_csv())
                    .with_context(|| format!("writing {}", p.display()))?;
            }
            let limited = report
                .rows
                .iter()
                .any(|r| r.status == SearchStatus::LimitReached);
            Ok(if limited { EXIT_LIMIT } else { 0 })
        }
        Command::Oracle { file } => {
            let w = load(&file)?;
            match oracle_solve(&w) {
                Ok(OracleOutcome::Optimal(c, a)) => {
                    println!("status optimal");
                    println!("cost {c}");
                    println!("assignment {}", join(&a));
                    Ok(0)
                }
                Ok(OracleOutcome::Infeasible) => {
                    println!("status infeasible");
                    Ok(EXIT_INFEASIBLE)
                }
                Err(e @ BenchError::TooLarge { .. }) => {
                    eprintln!("error: {e}");
                    Ok(EXIT_LIMIT)
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
