use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pkt::cli::{
    self, Algorithm, BenchOptions, DecomposeOptions, GenModel, LabeledGraph, Ordering,
    OutputFormat, ValidateOptions,
};
use pkt::gen::RmatParams;
use pkt::{Error, Result};

#[derive(Parser)]
#[command(name = "pkt", version, about = "Parallel k-truss decomposition")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Pkt,
    Wc,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Kcore,
    Natural,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Tsv,
    Json,
    Histogram,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Er,
    Rmat,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a seeded synthetic edge list.
    Gen {
        model: ModelArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Vertex count (er).
        #[arg(long, default_value_t = 1000)]
        n: u64,
        /// Edge probability (er).
        #[arg(long, default_value_t = 0.01)]
        p: f64,
        #[arg(long, default_value_t = 10)]
        scale: u32,
        #[arg(long, default_value_t = 16)]
        edge_factor: u32,
        #[arg(long, default_value_t = 0.57)]
        a: f64,
        #[arg(long, default_value_t = 0.19)]
        b: f64,
        #[arg(long, default_value_t = 0.19)]
        c: f64,
        #[arg(long, default_value_t = 0.05)]
        d: f64,
    },
    /// Trussness of every edge, plus a run report.
    Decompose {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = AlgoArg::Pkt)]
        algorithm: AlgoArg,
        #[arg(short, long, env = "PKT_THREADS")]
        threads: Option<usize>,
        #[arg(long, value_enum, default_value_t = OrderArg::Kcore)]
        reorder: OrderArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FormatArg::Tsv)]
        format: FormatArg,
        /// Print the report summary to stderr.
        #[arg(long)]
        report: bool,
    },
    /// Cross-check every engine on a seeded random suite.
    Validate {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        graphs: usize,
        #[arg(long, default_value_t = 256)]
        max_n: usize,
        /// Also check this graph.
        #[arg(short, long)]
        input: Option<PathBuf>,
    },
    /// List the maximal k-trusses.
    Ktruss {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        k: u32,
        #[arg(short, long, env = "PKT_THREADS")]
        threads: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Median phase timings per worker count.
    Bench {
        #[arg(short, long)]
        input: PathBuf,
        /// Comma-separated worker counts; the first is the speedup baseline.
        #[arg(short, long, value_delimiter = ',', default_value = "1")]
        threads: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        #[arg(long, value_enum, default_value_t = OrderArg::Kcore)]
        reorder: OrderArg,
        #[arg(long, value_enum, default_value_t = FormatArg::Tsv)]
        format: FormatArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn sink(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Error::io(p, e))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load(path: &PathBuf) -> Result<LabeledGraph> {
    LabeledGraph::from_raw(&pkt::io::read_edge_list(path)?)
}

fn ordering(o: OrderArg) -> Ordering {
    match o {
        OrderArg::Kcore => Ordering::Kcore,
        OrderArg::Natural => Ordering::Natural,
    }
}

fn workers(threads: Option<usize>) -> usize {
    threads
        .filter(|&t| t > 0)
        .unwrap_or_else(pkt::parallel::default_workers)
}

fn run(cli: Cli) -> Result<bool> {
    let out_err = |e| Error::io("<output>", e);
    match cli.cmd {
        Cmd::Gen {
            model,
            seed,
            output,
            n,
            p,
            scale,
            edge_factor,
            a,
            b,
            c,
            d,
        } => {
            let model = match model {
                ModelArg::Er => GenModel::ErdosRenyi { n, p },
                ModelArg::Rmat => GenModel::Rmat(RmatParams {
                    scale,
                    edge_factor,
                    a,
                    b,
                    c,
                    d,
                }),
            };
            let mut out = sink(&output)?;
            cli::cmd_gen(model, seed, &mut out)?;
            out.flush().map_err(out_err)?;
        }
        Cmd::Decompose {
            input,
            algorithm,
            threads,
            reorder,
            output,
            format,
            report,
        } => {
            let opts = DecomposeOptions {
                algorithm: match algorithm {
                    AlgoArg::Pkt => Algorithm::Pkt,
                    AlgoArg::Wc => Algorithm::Wc,
                    AlgoArg::Oracle => Algorithm::Oracle,
                },
                workers: workers(threads),
                ordering: ordering(reorder),
            };
            let d = cli::decompose(load(&input)?, &opts)?;
            let format = match format {
                FormatArg::Tsv => OutputFormat::Tsv,
                FormatArg::Json => OutputFormat::Json,
                FormatArg::Histogram => OutputFormat::Histogram,
            };
            let mut out = sink(&output)?;
            cli::write_decomposition(&mut out, &d, format)?;
            out.flush().map_err(out_err)?;
            if report {
                eprint!("{}", d.report.summary());
            }
        }
        Cmd::Validate {
            seed,
            graphs,
            max_n,
            input,
        } => {
            let mut report = cli::cmd_validate(&ValidateOptions {
                graphs,
                max_n,
                seed,
            })?;
            if report.passed() {
                if let Some(path) = input {
                    let g = load(&path)?;
                    let extra = [cli::SuiteGraph {
                        name: path.display().to_string(),
                        graph: g.graph,
                    }];
                    let checked = report.graphs_checked;
                    report = cli::validate(&extra, &cli::default_engines());
                    report.graphs_checked += checked;
                }
            }
            println!("{}", report.summary());
            return Ok(report.passed());
        }
        Cmd::Ktruss {
            input,
            k,
            threads,
            output,
        } => {
            let listing = cli::cmd_ktruss(load(&input)?, k, workers(threads))?;
            let mut out = sink(&output)?;
            listing.write_text(&mut out).map_err(out_err)?;
            out.flush().map_err(out_err)?;
            if let Some(notice) = &listing.notice {
                eprintln!("{notice}");
            }
        }
        Cmd::Bench {
            input,
            threads,
            repeats,
            reorder,
            format,
            output,
        } => {
            let opts = BenchOptions {
                workers: threads,
                repeats,
                ordering: ordering(reorder),
            };
            let report = cli::cmd_bench(&load(&input)?, &opts)?;
            let text = match format {
                FormatArg::Json => report.to_json()?,
                _ => report.table(),
            };
            let mut out = sink(&output)?;
            writeln!(out, "{}", text.trim_end()).map_err(out_err)?;
            out.flush().map_err(out_err)?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
