use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spectral_sketch::pipeline::EstimateConfig;
use spectral_sketch_cli::commands::{self, EstimateArgs, PartitionArgs};
use spectral_sketch_cli::{CliError, Result};

/// Estimate and compare normalized-Laplacian spectra of graphs.
#[derive(Parser, Debug)]
#[command(name = "spectral-sketch", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a synthetic graph as an edge list.
    Generate {
        /// cycle | complete | path | star | grid2d | pa
        kind: String,
        /// Size parameters: N for cycle/complete/path/star, ROWS COLS for
        /// grid2d, N ATTACH for pa.
        #[arg(required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exact spectrum by dense eigendecomposition.
    Exact {
        graph: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Walk-based spectrum estimate.
    Estimate {
        graph: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        walks: u64,
        #[arg(long, default_value_t = 20)]
        length: usize,
        #[arg(long, default_value_t = 20)]
        repeats: usize,
        #[arg(long, default_value_t = 0.01)]
        grid: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Also write the estimate as a length-n eigenvalue vector.
        #[arg(long)]
        n_out: Option<PathBuf>,
        /// Run manifest path (default: <out>.manifest.json).
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Earth mover distance between two spectrum files.
    Compare { a: PathBuf, b: PathBuf },
    /// Partition into small components and sample their eigenvalues.
    PartitionEstimate {
        graph: PathBuf,
        #[arg(long)]
        max_component: usize,
        #[arg(long, default_value_t = 20_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Certificate JSON path (default: <out>.certificate.json).
        #[arg(long)]
        certificate: Option<PathBuf>,
        /// Optional `vertex,component` dump.
        #[arg(long)]
        partition_out: Option<PathBuf>,
    },
    /// Plot a spectrum CDF as SVG.
    Plot {
        spectrum: PathBuf,
        /// Overlay a second (reference) spectrum.
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("SPECTRAL_SKETCH_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("SPECTRAL_SKETCH_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn run(cli: Cli) -> Result<()> {
    configure_threads()?;
    match cli.command {
        Command::Generate { kind, sizes, seed, out } => {
            let kind = commands::parse_kind(&kind, &sizes, seed)?;
            let g = commands::cmd_generate(kind, &out)?;
            eprintln!("wrote {} vertices, {} edges", g.vertex_count(), g.edge_count());
        }
        Command::Exact { graph, out } => {
            commands::cmd_exact(&graph, &out)?;
        }
        Command::Estimate {
            graph,
            walks,
            length,
            repeats,
            grid,
            seed,
            out,
            n_out,
            manifest,
        } => {
            let args = EstimateArgs {
                graph,
                out,
                n_out,
                manifest,
                config: EstimateConfig {
                    walks,
                    length,
                    repeats,
                    grid_spacing: grid,
                    seed,
                },
            };
            let (_, manifest) = commands::cmd_estimate(&args)?;
            eprintln!(
                "{} neighbor queries in {:.2}s",
                manifest.query_count, manifest.wall_time_secs
            );
        }
        Command::Compare { a, b } => {
            println!("{}", commands::format_distance(commands::cmd_compare(&a, &b)?));
        }
        Command::PartitionEstimate {
            graph,
            max_component,
            samples,
            seed,
            out,
            certificate,
            partition_out,
        } => {
            let args = PartitionArgs {
                graph,
                out,
                max_component,
                samples,
                seed,
                certificate,
                partition_out,
            };
            let (_, cert) = commands::cmd_partition_estimate(&args)?;
            eprintln!(
                "{} components, {} cut edges, certified W1 bound {:.6}",
                cert.summary.components, cert.summary.cut_edges, cert.summary.certified_w1_bound
            );
        }
        Command::Plot { spectrum, truth, out } => {
            commands::cmd_plot(&spectrum, truth.as_deref(), &out)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
