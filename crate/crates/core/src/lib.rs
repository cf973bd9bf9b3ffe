//! Gender homophily measurement for co-authorship data.
//!
//! Papers are modeled as cliques of authors with a binary label. The crate
//! computes Bergstrom's α (per-individual and clique-count formulations),
//! Newman's r under unit and inverse-degree edge weighting, and checks that
//! r with inverse-degree weighting coincides with α on any reciprocated
//! graph.
//!
//! ```
//! use homophily_core::{build_network, metric_report, GenderLabel::*, PaperRecord};
//!
//! let records = vec![
//!     PaperRecord::new("p1", vec![Positive, Positive, Negative]),
//!     PaperRecord::new("p2", vec![Negative, Negative]),
//! ];
//! let (net, _warnings) = build_network(&records).unwrap();
//! let report = metric_report(&net, 1.0).unwrap();
//! assert!(report.equivalence_gap < 1e-10);
//! ```

pub mod error;
pub mod graph;
pub mod ingest;
pub mod label;
pub mod metrics;
pub mod report;
pub mod synth;

pub use error::{GraphError, IngestError, MetricError, SynthError};
pub use graph::{
    build_network, build_reciprocated_graph, node_out_weight, AuthorNode, BuildWarning, Clique,
    CliqueNetwork, EdgeWeighting, ReciprocatedGraph, TieNetwork, UndirectedEdge,
    UnknownLabelPolicy, ValidationPolicy,
};
pub use ingest::{
    parse_edge_list, parse_records, read_edge_list, read_records, to_paper_records, write_records,
    DataFormat, IngestDiagnostics, LabelMapping, LabelTotals, LabelsField, RawRecord,
};
pub use label::{GenderLabel, PaperRecord};
pub use metrics::{
    alpha_from_clique_counts, alpha_from_individuals, build_mixing_matrix, equivalence_report,
    metric_report, newman_r, AlphaRisks, CliqueCountTable, EquivalenceReport, MetricReport,
    MixingMatrix, ScaleCheck, EQUIVALENCE_TOLERANCE,
};
pub use report::{MetricValue, ReportDocument};
pub use synth::{generate, CliqueSizes, SynthConfig};
