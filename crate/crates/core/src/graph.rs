//! Labeled networks with fully reciprocated ties.
//!
//! [`CliqueNetwork`] is the co-authorship model: one clique per paper, no
//! author identity shared across papers. [`ReciprocatedGraph`] is a general
//! undirected graph built from an edge list, for inputs that are not a
//! disjoint union of cliques.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::error::GraphError;
use crate::label::{GenderLabel, PaperRecord};

/// A node with its tie counts: `pi` edges to positive individuals, `nu`
/// edges to negative individuals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AuthorNode {
    pub id: usize,
    pub label: GenderLabel,
    pub pi: u64,
    pub nu: u64,
}

impl AuthorNode {
    pub fn degree(&self) -> u64 {
        self.pi + self.nu
    }

    /// Ties to individuals carrying `label`.
    pub fn ties_to(&self, label: GenderLabel) -> u64 {
        match label {
            GenderLabel::Positive => self.pi,
            GenderLabel::Negative => self.nu,
        }
    }
}

/// Anything the metrics can run on: a labeled graph whose directed edges
/// come in reciprocated pairs.
pub trait TieNetwork {
    /// Nodes in id order; `nodes()[k].id == k`.
    fn nodes(&self) -> &[AuthorNode];

    /// Every directed edge `(from, to)`. Each tie appears in both directions.
    fn directed_edges(&self) -> Vec<(usize, usize)>;

    /// `(|N+|, |N-|)`.
    fn population(&self) -> (usize, usize) {
        let positive = self
            .nodes()
            .iter()
            .filter(|n| n.label.is_positive())
            .count();
        (positive, self.nodes().len() - positive)
    }

    /// The shared degree when every node has the same number of ties. For a
    /// clique network this is equivalent to all cliques having equal size.
    fn uniform_degree(&self) -> Option<u64> {
        let mut degrees = self.nodes().iter().map(AuthorNode::degree);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }
}

/// Edge weight assigned to every outgoing edge of a node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EdgeWeighting {
    Unit,
    /// `Z_s = scale / K_s`.
    InverseDegree {
        scale: f64,
    },
}

impl EdgeWeighting {
    pub fn inverse_degree(scale: f64) -> Result<Self, GraphError> {
        if scale.is_finite() && scale > 0.0 {
            Ok(EdgeWeighting::InverseDegree { scale })
        } else {
            Err(GraphError::InvalidScale(scale))
        }
    }
}

/// Weight `Z_s` carried by each outgoing edge of `node`.
pub fn node_out_weight(node: &AuthorNode, weighting: EdgeWeighting) -> Result<f64, GraphError> {
    let degree = node.degree();
    if degree == 0 {
        return Err(GraphError::ZeroDegree { node: node.id });
    }
    match weighting {
        EdgeWeighting::Unit => Ok(1.0),
        EdgeWeighting::InverseDegree { scale } => {
            if !(scale.is_finite() && scale > 0.0) {
                return Err(GraphError::InvalidScale(scale));
            }
            Ok(scale / degree as f64)
        }
    }
}

/// What to do with a paper that carries a label outside the binary alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnknownLabelPolicy {
    /// Drop the whole paper and count it in the diagnostics.
    #[default]
    RejectRecord,
    /// Fail the whole dataset.
    RejectDataset,
}

/// Record validation settings. Single-author papers are always dropped, so
/// the only knob is the unknown-label policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ValidationPolicy {
    pub on_unknown_label: UnknownLabelPolicy,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuildWarning {
    SingleAuthorDropped { paper_id: String },
    EmptyRecordDropped { paper_id: String },
}

impl std::fmt::Display for BuildWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BuildWarning::SingleAuthorDropped { paper_id } => {
                write!(f, "paper `{paper_id}` has a single author and was dropped")
            }
            BuildWarning::EmptyRecordDropped { paper_id } => {
                write!(f, "paper `{paper_id}` has no authors and was dropped")
            }
        }
    }
}

/// One paper's authors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clique {
    pub paper_id: String,
    pub positive: usize,
    pub negative: usize,
    pub members: Vec<usize>,
}

impl Clique {
    pub fn size(&self) -> usize {
        self.positive + self.negative
    }
}

/// Disjoint union of cliques, one per paper.
#[derive(Debug, Clone, PartialEq)]
pub struct CliqueNetwork {
    nodes: Vec<AuthorNode>,
    cliques: Vec<Clique>,
    n_positive: usize,
    n_negative: usize,
}

impl CliqueNetwork {
    pub fn cliques(&self) -> &[Clique] {
        &self.cliques
    }

    pub fn n_positive(&self) -> usize {
        self.n_positive
    }

    pub fn n_negative(&self) -> usize {
        self.n_negative
    }

    /// Clique compositions `(positive, negative)`, sorted.
    pub fn compositions(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = self
            .cliques
            .iter()
            .map(|c| (c.positive, c.negative))
            .collect();
        out.sort_unstable();
        out
    }
}

impl TieNetwork for CliqueNetwork {
    fn nodes(&self) -> &[AuthorNode] {
        &self.nodes
    }

    fn directed_edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for clique in &self.cliques {
            for &s in &clique.members {
                for &t in &clique.members {
                    if s != t {
                        edges.push((s, t));
                    }
                }
            }
        }
        edges
    }

    fn population(&self) -> (usize, usize) {
        (self.n_positive, self.n_negative)
    }
}

/// Builds the disjoint-clique network, one clique per record. Records with
/// fewer than two authors are dropped and reported as warnings.
pub fn build_network(
    records: &[PaperRecord],
) -> Result<(CliqueNetwork, Vec<BuildWarning>), GraphError> {
    let mut nodes = Vec::new();
    let mut cliques = Vec::new();
    let mut warnings = Vec::new();

    for record in records {
        match record.len() {
            0 => {
                warnings.push(BuildWarning::EmptyRecordDropped {
                    paper_id: record.paper_id.clone(),
                });
                continue;
            }
            1 => {
                warnings.push(BuildWarning::SingleAuthorDropped {
                    paper_id: record.paper_id.clone(),
                });
                continue;
            }
            _ => {}
        }
        let (positive, negative) = record.composition();
        let mut members = Vec::with_capacity(record.len());
        for &label in &record.author_labels {
            let id = nodes.len();
            // Ties to everyone else in the clique.
            let (pi, nu) = match label {
                GenderLabel::Positive => (positive - 1, negative),
                GenderLabel::Negative => (positive, negative - 1),
            };
            nodes.push(AuthorNode {
                id,
                label,
                pi: pi as u64,
                nu: nu as u64,
            });
            members.push(id);
        }
        cliques.push(Clique {
            paper_id: record.paper_id.clone(),
            positive,
            negative,
            members,
        });
    }

    if cliques.is_empty() {
        return Err(GraphError::EmptyNetwork);
    }
    let n_positive = nodes.iter().filter(|n| n.label.is_positive()).count();
    let n_negative = nodes.len() - n_positive;
    Ok((
        CliqueNetwork {
            nodes,
            cliques,
            n_positive,
            n_negative,
        },
        warnings,
    ))
}

/// An undirected tie between two named, labeled nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedEdge {
    pub src: String,
    pub dst: String,
    pub label_src: GenderLabel,
    pub label_dst: GenderLabel,
}

impl UndirectedEdge {
    pub fn new(
        src: impl Into<String>,
        label_src: GenderLabel,
        dst: impl Into<String>,
        label_dst: GenderLabel,
    ) -> Self {
        Self {
            src: src.into(),
            dst: dst.into(),
            label_src,
            label_dst,
        }
    }
}

/// General labeled graph where every tie is stored in both directions.
#[derive(Debug, Clone, PartialEq)]
pub struct ReciprocatedGraph {
    names: Vec<String>,
    nodes: Vec<AuthorNode>,
    adjacency: Vec<Vec<usize>>,
}

impl ReciprocatedGraph {
    pub fn name(&self, id: usize) -> &str {
        &self.names[id]
    }

    pub fn neighbors(&self, id: usize) -> &[usize] {
        &self.adjacency[id]
    }

    pub fn undirected_edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }
}

impl TieNetwork for ReciprocatedGraph {
    fn nodes(&self) -> &[AuthorNode] {
        &self.nodes
    }

    fn directed_edges(&self) -> Vec<(usize, usize)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(s, nbrs)| nbrs.iter().map(move |&t| (s, t)))
            .collect()
    }
}

/// Builds a graph from undirected edges; each becomes two directed edges.
/// Node ids follow order of first appearance. Self-loops, repeated edges and
/// nodes listed with two different labels are rejected.
pub fn build_reciprocated_graph(edges: &[UndirectedEdge]) -> Result<ReciprocatedGraph, GraphError> {
    if edges.is_empty() {
        return Err(GraphError::EmptyNetwork);
    }
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut labels: Vec<GenderLabel> = Vec::new();
    let mut adjacency: Vec<Vec<usize>> = Vec::new();
    let mut seen: HashSet<(usize, usize)> = HashSet::new();

    for edge in edges {
        if edge.src == edge.dst {
            return Err(GraphError::SelfLoop(edge.src.clone()));
        }
        let mut endpoint = |name: &'_ str, label: GenderLabel| -> Result<usize, GraphError> {
            match index.get(name) {
                Some(&id) if labels[id] != label => Err(GraphError::ConflictingLabel(name.into())),
                Some(&id) => Ok(id),
                None => {
                    let id = labels.len();
                    labels.push(label);
                    adjacency.push(Vec::new());
                    Ok(id)
                }
            }
        };
        let s = endpoint(&edge.src, edge.label_src)?;
        let t = endpoint(&edge.dst, edge.label_dst)?;
        index.entry(&edge.src).or_insert(s);
        index.entry(&edge.dst).or_insert(t);
        let key = (s.min(t), s.max(t));
        if !seen.insert(key) {
            return Err(GraphError::DuplicateEdge(
                edge.src.clone(),
                edge.dst.clone(),
            ));
        }
        adjacency[s].push(t);
        adjacency[t].push(s);
    }

    let nodes = adjacency
        .iter()
        .enumerate()
        .map(|(id, nbrs)| {
            let pi = nbrs.iter().filter(|&&t| labels[t].is_positive()).count() as u64;
            AuthorNode {
                id,
                label: labels[id],
                pi,
                nu: nbrs.len() as u64 - pi,
            }
        })
        .collect();

    let mut names = vec![String::new(); labels.len()];
    for (name, &id) in &index {
        names[id] = (*name).to_string();
    }
    Ok(ReciprocatedGraph {
        names,
        nodes,
        adjacency,
    })
}
