//! Searches for the coarse-graining with the most causal emergence.

pub mod gradient;
pub mod greedy;
pub mod optics;
pub mod spectral;

pub use gradient::{
    gradient_search, gradient_search_report, soft_ei, soft_ei_gradient, GradConfig, GradientReport,
    SoftAssignment,
};
pub use greedy::{greedy_search, GreedyConfig, NodeOrder};
pub use optics::{extract_clusters, optics_order, DistanceMatrix, OpticsConfig, OpticsOrdering};
pub use spectral::{
    candidate_partitions, distances, embed, spectral_search, SpectralConfig, SpectralEmbedding,
};
