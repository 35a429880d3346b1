//! Cutpoint-additive distances on connected weighted multigraphs.
//!
//! The crate builds four transitional measures on a graph (path
//! τ-accessibility, connection reliability, the matrix of forests and the
//! walk matrix), turns them into distances with the logarithmic transform
//! `d_ij = ½(ln s_ii + ln s_jj − ln s_ij − ln s_ji)`, and adds the
//! shortest-path, resistance and long-walk distances. Every structural
//! claim (transition inequality, graph bottleneck identity, metric axioms,
//! cutpoint additivity) has a checker, and the [`oracle`] module holds
//! brute-force reference implementations.
//!
//! ```
//! use cutmetrics::{Graph, walk_distance, check_cutpoint_additivity};
//!
//! let g: Graph = "3\n1 2 1\n2 3 1\n".parse().unwrap();
//! let d = walk_distance(&g, 0.5).unwrap();
//! assert!((d.get(0, 2) - 3f64.ln()).abs() < 1e-12);
//! assert!(check_cutpoint_additivity(&g, &d, 1e-9).passed());
//! ```

pub mod comparison;
pub mod corpus;
pub mod distances;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod matrix;
pub mod measures;
pub mod oracle;
pub mod report;

pub use comparison::{compare, trapezoid, ComparisonRow, Trapezoid};
pub use distances::{
    check_cutpoint_additivity, check_metric_axioms, forest_distance, log_distance,
    long_walk_distance, long_walk_distance_closed_form, normalize_distances, path_distance,
    reliability_distance, rescaled_long_walk_distance, resistance_distance, walk_distance,
    DistanceMatrix, LongWalkMethod, Metric,
};
pub use error::{Error, Result};
pub use graph::{Edge, Graph};
pub use linalg::SpectralData;
pub use matrix::Matrix;
pub use measures::{
    connection_reliability, find_tau_threshold, forest_matrix, path_accessibility,
    validate_transitional_measure, walk_matrix, MeasureKind, TransitionalMeasure,
};
pub use report::{ValidationReport, Violation, ViolationKind};
