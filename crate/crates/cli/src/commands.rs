//! File-level implementations of each subcommand.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use spectral_sketch::exact::DENSE_LIMIT;
use spectral_sketch::graph::{read_edge_list_file, write_edge_list_file};
use spectral_sketch::partition::PartitionSummary;
use spectral_sketch::pipeline::{estimate_spectrum, EstimateConfig};
use spectral_sketch::spectrum::{discretize_spectrum, spectrum_distribution};
use spectral_sketch::{
    emd_w1, exact_spectrum, generate, partition_spectrum_estimate, Graph, GraphKind, SortedSpectrum,
    SpectralDistribution,
};

use crate::error::{io_context, CliError, Result};
use crate::plot::render_cdf_svg;

fn load_graph(path: &Path) -> Result<Graph> {
    read_edge_list_file(path).map_err(|e| match e {
        spectral_sketch::Error::Io(source) => CliError::Io {
            context: format!("reading {}", path.display()),
            source,
        },
        other => other.into(),
    })
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    io_context(std::fs::write(path, text), || format!("writing {}", path.display()))
}

/// `<path>` with `suffix` appended to its file name.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(suffix);
    path.with_file_name(name)
}

/// Parses a generator spec such as `("grid2d", [3, 3])`.
pub fn parse_kind(kind: &str, sizes: &[usize], seed: u64) -> Result<GraphKind> {
    let want = |k: usize| -> Result<()> {
        if sizes.len() == k {
            Ok(())
        } else {
            Err(CliError::Usage(format!("{kind} takes {k} size parameter(s), got {}", sizes.len())))
        }
    };
    Ok(match kind {
        "cycle" => {
            want(1)?;
            GraphKind::Cycle(sizes[0])
        }
        "complete" => {
            want(1)?;
            GraphKind::Complete(sizes[0])
        }
        "path" => {
            want(1)?;
            GraphKind::Path(sizes[0])
        }
        "star" => {
            want(1)?;
            GraphKind::Star(sizes[0])
        }
        "grid2d" => {
            want(2)?;
            GraphKind::Grid2d(sizes[0], sizes[1])
        }
        "pa" => {
            want(2)?;
            GraphKind::PreferentialAttachment {
                n: sizes[0],
                attach: sizes[1],
                seed,
            }
        }
        other => return Err(CliError::Usage(format!("unknown graph kind {other:?}"))),
    })
}

pub fn cmd_generate(kind: GraphKind, out: &Path) -> Result<Graph> {
    let g = generate(kind)?;
    write_edge_list_file(&g, out).map_err(|e| match e {
        spectral_sketch::Error::Io(source) => CliError::Io {
            context: format!("writing {}", out.display()),
            source,
        },
        other => other.into(),
    })?;
    Ok(g)
}

pub fn cmd_exact(graph: &Path, out: &Path) -> Result<SortedSpectrum> {
    let g = load_graph(graph)?;
    let s = exact_spectrum(&g)?;
    write_text(out, &s.to_csv())?;
    Ok(s)
}

#[derive(Clone, Debug)]
pub struct EstimateArgs {
    pub graph: PathBuf,
    pub out: PathBuf,
    pub n_out: Option<PathBuf>,
    pub manifest: Option<PathBuf>,
    pub config: EstimateConfig,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub graph: String,
    pub vertices: usize,
    pub edges: usize,
    pub walks: u64,
    pub length: usize,
    pub repeats: usize,
    pub grid: f64,
    pub seed: u64,
    pub query_count: u64,
    pub vertex_queries: u64,
    pub threads: usize,
    pub wall_time_secs: f64,
}

pub fn cmd_estimate(args: &EstimateArgs) -> Result<(SpectralDistribution, RunManifest)> {
    let started = Instant::now();
    let g = load_graph(&args.graph)?;
    let est = estimate_spectrum(&g, &args.config)?;
    write_text(&args.out, &est.distribution.to_csv())?;
    if let Some(n_out) = &args.n_out {
        let v = discretize_spectrum(g.vertex_count(), &est.distribution)?;
        write_text(n_out, &v.to_csv())?;
    }
    let manifest = RunManifest {
        graph: args.graph.display().to_string(),
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        walks: args.config.walks,
        length: args.config.length,
        repeats: args.config.repeats,
        grid: args.config.grid_spacing,
        seed: args.config.seed,
        query_count: est.neighbor_queries,
        vertex_queries: est.vertex_queries,
        threads: rayon::current_num_threads(),
        wall_time_secs: started.elapsed().as_secs_f64(),
    };
    let manifest_path = args
        .manifest
        .clone()
        .unwrap_or_else(|| sibling(&args.out, ".manifest.json"));
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    write_text(&manifest_path, &(json + "\n"))?;
    Ok((est.distribution, manifest))
}

/// Reads either a `value,mass` distribution CSV or a bare eigenvalue list
/// (taken as equal point masses), by header.
pub fn read_spectrum_file(path: &Path) -> Result<SpectralDistribution> {
    let text = io_context(std::fs::read_to_string(path), || format!("reading {}", path.display()))?;
    let first = text.lines().map(str::trim).find(|l| !l.is_empty()).unwrap_or("");
    if first == "value,mass" {
        Ok(SpectralDistribution::from_csv(&text)?)
    } else {
        let s = SortedSpectrum::from_csv(&text)?;
        if s.is_empty() {
            return Err(spectral_sketch::Error::InvalidParameter(format!("{} holds no eigenvalues", path.display())).into());
        }
        Ok(spectrum_distribution(&s)?)
    }
}

pub fn cmd_compare(a: &Path, b: &Path) -> Result<f64> {
    let p = read_spectrum_file(a)?;
    let q = read_spectrum_file(b)?;
    Ok(emd_w1(&p, &q)?)
}

pub fn format_distance(w: f64) -> String {
    format!("{w:.6}")
}

#[derive(Clone, Debug)]
pub struct PartitionArgs {
    pub graph: PathBuf,
    pub out: PathBuf,
    pub max_component: usize,
    pub samples: u64,
    pub seed: u64,
    pub certificate: Option<PathBuf>,
    pub partition_out: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    #[serde(flatten)]
    pub summary: PartitionSummary,
    pub sampling_band: f64,
    pub samples: u64,
    pub seed: u64,
}

pub fn cmd_partition_estimate(args: &PartitionArgs) -> Result<(SpectralDistribution, Certificate)> {
    let g = load_graph(&args.graph)?;
    if args.max_component > DENSE_LIMIT {
        return Err(CliError::Usage(format!(
            "--max-component {} exceeds the dense limit {DENSE_LIMIT}",
            args.max_component
        )));
    }
    let est = partition_spectrum_estimate(&g, args.max_component, args.samples, args.seed)?;
    write_text(&args.out, &est.distribution.to_csv())?;
    let certificate = Certificate {
        summary: est.partition.summary(),
        sampling_band: est.sampling_band,
        samples: args.samples,
        seed: args.seed,
    };
    let path = args
        .certificate
        .clone()
        .unwrap_or_else(|| sibling(&args.out, ".certificate.json"));
    let json = serde_json::to_string_pretty(&certificate).expect("certificate serializes");
    write_text(&path, &(json + "\n"))?;
    if let Some(p) = &args.partition_out {
        write_text(p, &est.partition.to_csv())?;
    }
    Ok((est.distribution, certificate))
}

pub fn cmd_plot(spectrum: &Path, truth: Option<&Path>, out: &Path) -> Result<()> {
    let estimate = read_spectrum_file(spectrum)?;
    let truth = truth.map(read_spectrum_file).transpose()?;
    let mut curves = vec![("spectrum", &estimate)];
    if let Some(t) = &truth {
        curves.push(("truth", t));
    }
    write_text(out, &render_cdf_svg(&curves))
}
