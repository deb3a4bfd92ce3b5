use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};

use pidtw_cli::{census, check, lower_bound, read_graph, solve, CensusRow, CliError, Format, SolveOptions, StatsRecord};

#[derive(Parser)]
#[command(name = "tw", version, about = "Exact treewidth solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Gr,
    Col,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Gr => Format::Gr,
            FormatArg::Col => Format::Col,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute the exact treewidth and a tree decomposition.
    Exact {
        input: PathBuf,
        /// Write the decomposition in .td format.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        no_safe_separators: bool,
        /// Input format; guessed from the extension by default.
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        /// Write run statistics as JSON.
        #[arg(long)]
        stats: Option<PathBuf>,
        /// Parts solved in parallel.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Certified lower bound within a time limit.
    Lb {
        input: PathBuf,
        #[arg(long, default_value_t = 60.0)]
        time_limit: f64,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Count separators, PMCs and feasible objects as CSV.
    Census {
        input: PathBuf,
        #[arg(long, default_value_t = 16)]
        max_n: usize,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Check a .td file against a graph.
    Validate {
        graph: PathBuf,
        td: PathBuf,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Exact {
            input,
            output,
            no_safe_separators,
            format,
            stats,
            jobs,
        } => {
            let g = read_graph(&input, format.map(Into::into))?;
            let start = Instant::now();
            let opts = SolveOptions {
                safe_separators: !no_safe_separators,
                jobs: jobs.max(1),
                ..Default::default()
            };
            let sol = solve(&g, opts)?;
            let elapsed = start.elapsed();
            println!("{}", sol.tw);
            if let Some(out) = output {
                write_file(&out, &pidtw::io::write_td(&sol.td, g.n()))?;
            }
            if let Some(path) = stats {
                let rec = StatsRecord {
                    instance: input.display().to_string(),
                    n: g.n(),
                    m: g.edge_count(),
                    tw: sol.tw,
                    time_ms: elapsed.as_millis(),
                    counters: sol.counters,
                    safe_separators: sol.safe_separators,
                };
                let json = serde_json::to_string_pretty(&rec).expect("stats serialize");
                write_file(&path, &(json + "\n"))?;
            }
        }
        Command::Lb {
            input,
            time_limit,
            format,
        } => {
            let g = read_graph(&input, format.map(Into::into))?;
            let limit = Duration::from_secs_f64(time_limit.max(0.0));
            println!("{}", lower_bound(&g, limit)?);
        }
        Command::Census { input, max_n, format } => {
            let g = read_graph(&input, format.map(Into::into))?;
            if !g.is_connected() {
                return Err(CliError::Solver(pidtw::Error::Disconnected));
            }
            let row = census(&g, max_n)?;
            println!("{}", CensusRow::HEADER);
            println!("{}", row.to_csv());
        }
        Command::Validate { graph, td, format } => {
            let g = read_graph(&graph, format.map(Into::into))?;
            let text = std::fs::read_to_string(&td).map_err(|source| CliError::Io {
                path: td.display().to_string(),
                source,
            })?;
            let (dec, n) = pidtw::io::read_td(&text).map_err(|source| CliError::Parse {
                path: td.display().to_string(),
                source,
            })?;
            if n != g.n() {
                log::warn!("decomposition declares {n} vertices, graph has {}", g.n());
            }
            match check(&g, &dec) {
                Ok(width) => println!("{width}"),
                Err(v) => {
                    for x in &v {
                        println!("{x}");
                    }
                    return Err(CliError::Invalid(v));
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("TW_LOG", "warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tw: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
