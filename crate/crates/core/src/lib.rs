//! Estimate the eigenvalue distribution of a graph's normalized Laplacian
//! from random-walk return statistics, with a dense exact solver for
//! validation and a partition-based sampler for graphs that split into
//! small pieces.
//!
//! The pipeline: [`moments::estimate_moments`] samples walk return
//! frequencies, [`inversion::moment_inverse`] fits a distribution on a grid
//! in the walk domain `[−1, 1]`, and [`inversion::walk_to_laplacian`] maps it
//! to `[0, 2]`.

pub mod distribution;
pub mod eigen;
pub mod error;
pub mod exact;
pub mod graph;
pub mod inversion;
pub mod moments;
mod numeric;
pub mod partition;
pub mod pipeline;
pub mod rng;
pub mod simplex;
pub mod spectrum;

pub use distribution::SpectralDistribution;
pub use error::{Error, Result};
pub use exact::{exact_moments, exact_spectrum, normalized_laplacian, SortedSpectrum};
pub use graph::{generate, load_edge_list, Graph, GraphKind, WalkOracle};
pub use inversion::{average_distributions, moment_inverse, walk_to_laplacian, GridSpec};
pub use moments::{approx_spectral_moment, estimate_moments, required_walks, MomentVector};
pub use pipeline::{estimate_spectrum, EstimateConfig, SpectrumEstimate};
pub use partition::{partition_graph, partition_spectrum_estimate, Partition};
pub use rng::RngStream;
pub use spectrum::{discretize_spectrum, emd_w1, sorted_vector_distance, union_spectrum};
pub use numeric::compensated_sum;
