use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("no record survived filtering; the network is empty")]
    EmptyNetwork,
    #[error("node {node} has degree zero")]
    ZeroDegree { node: usize },
    #[error("edge scale constant must be positive and finite, got {0}")]
    InvalidScale(f64),
    #[error("self-loop on node `{0}`")]
    SelfLoop(String),
    #[error("edge `{0}`-`{1}` listed more than once")]
    DuplicateEdge(String, String),
    #[error("node `{0}` has conflicting labels")]
    ConflictingLabel(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error(
        "only one label class is present ({positive} positive, {negative} negative individuals)"
    )]
    OneSidedPopulation { positive: usize, negative: usize },
    #[error("mixing matrix is degenerate: sum of a_i * b_i equals 1")]
    DegenerateMixing,
    #[error("clique count table is inconsistent: {0}")]
    InconsistentTable(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl MetricError {
    /// True for the outcomes where a metric simply has no value for the data
    /// (one label class only), as opposed to malformed input.
    pub fn is_undefined(&self) -> bool {
        matches!(
            self,
            MetricError::OneSidedPopulation { .. } | MetricError::DegenerateMixing
        )
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("duplicate paper id `{paper_id}` on line {line}")]
    DuplicatePaperId { paper_id: String, line: usize },
    #[error("{context}: unknown label token `{token}`")]
    UnknownLabel { context: String, token: String },
    #[error("invalid label mapping `{0}`")]
    InvalidMapping(String),
    #[error("all {0} records were dropped during validation")]
    AllRecordsDropped(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl IngestError {
    /// Errors about the content of otherwise readable input.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            IngestError::DuplicatePaperId { .. }
                | IngestError::UnknownLabel { .. }
                | IngestError::InvalidMapping(_)
                | IngestError::AllRecordsDropped(_)
                | IngestError::Graph(_)
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SynthError {
    #[error("invalid synthetic config: {0}")]
    InvalidConfig(String),
}
