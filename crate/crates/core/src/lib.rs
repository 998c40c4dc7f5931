//! Cluster-relevance analysis of one-dimensional slices.
//!
//! A 1D signal is clustered by single linkage; the resulting dendrogram is
//! pruned of streak subtrees (fewer than `N / alpha` points) and its
//! absorption chains are contracted. The relevance `rho` of the signal is the
//! length of the second-longest surviving leaf branch divided by the height
//! of the tree. A homogeneous Poisson scatter typically shows small `rho`;
//! two clusters separated by an empty gap show large `rho`.
//!
//! Higher-dimensional data is handled by cutting it into thin hypercylinder
//! slices parallel to one axis. Scoring every slice gives
//!
//! * a filter-style feature ranking ([`select_features`]), and
//! * a map of the empty regions between clusters ([`detect_interstices`]).
//!
//! ```
//! use patchclust::{relevance_1d, single_linkage_1d, cut};
//!
//! let x = [0.0, 0.01, 0.02, 0.03, 1.0, 1.01, 1.02, 1.03];
//! let report = relevance_1d(&x, 2.0).unwrap();
//! assert!(report.occurred && report.rho > 0.9);
//!
//! let two = cut(&single_linkage_1d(&x).unwrap(), 2).unwrap();
//! assert_eq!(two.clusters[0].len(), 4);
//! ```
//!
//! The `examples/` directory has one runnable program per capability:
//! `poisson_gaps`, `null_distributions`, `two_cluster_model`,
//! `dendrogram_svg`, `shapes_feature_selection`, `interstice_map` and
//! `slicing_basics`.

pub mod error;
pub mod io;
pub mod linkage;
pub mod model;
pub mod pipeline;
pub mod relevance;
pub mod slicer;
pub mod svg;
pub mod synth;

pub use error::{Error, Result};
pub use linkage::{cut, single_linkage_1d, single_linkage_naive, single_linkage_slice, Cut};
pub use model::{
    Dataset, Leaf, LeafBranch, Merge, MergeTree, PrunedTree, RelevanceReport, Slice1D, SliceSpec,
};
pub use pipeline::{
    detect_interstices, select_features, slice_population_histogram, FeatureReportRow,
    FeatureSelectionConfig, Histogram, InterstitialConfig, InterstitialPatch,
};
pub use relevance::{
    find_interstices, prune_and_contract, relevance, relevance_1d, relevance_with, Interstice,
    OccurrenceRule,
};
pub use slicer::{add_uniform_noise, grid_anchors, slice, standardize, ColumnStats};
pub use svg::{dendrogram_svg, SvgOptions};
