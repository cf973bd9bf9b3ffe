//! Report document assembled from a network, in JSON and plain text.
//!
//! A metric without a value (one label class only) is carried in-band as
//! the string `"undefined"` and never as NaN.

use std::fmt::Write as _;

use serde::{Serialize, Serializer};

use crate::error::MetricError;
use crate::graph::{build_network, EdgeWeighting, ReciprocatedGraph, TieNetwork};
use crate::ingest::{IngestDiagnostics, LabelMapping, LabelTotals};
use crate::label::{GenderLabel, PaperRecord};
use crate::metrics::{
    alpha_from_clique_counts, alpha_from_individuals, build_mixing_matrix, equivalence_report,
    newman_r, CliqueCountTable, MixingMatrix, ScaleCheck, EQUIVALENCE_TOLERANCE,
};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Scale constant used for the headline inverse-degree r.
pub const DEFAULT_SCALE: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricValue {
    Defined(f64),
    Undefined,
}

impl MetricValue {
    pub fn value(self) -> Option<f64> {
        match self {
            MetricValue::Defined(v) => Some(v),
            MetricValue::Undefined => None,
        }
    }

    fn text(self) -> String {
        match self {
            MetricValue::Defined(v) => format!("{v:.4}"),
            MetricValue::Undefined => "undefined".into(),
        }
    }
}

impl From<Result<f64, MetricError>> for MetricValue {
    fn from(r: Result<f64, MetricError>) -> Self {
        match r {
            Ok(v) if v.is_finite() => MetricValue::Defined(v),
            _ => MetricValue::Undefined,
        }
    }
}

impl Serialize for MetricValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match *self {
            MetricValue::Defined(v) => serializer.serialize_f64(v),
            MetricValue::Undefined => serializer.serialize_str("undefined"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DatasetSummary {
    Records {
        #[serde(flatten)]
        diagnostics: IngestDiagnostics,
        nodes: usize,
        cliques: usize,
    },
    EdgeList {
        nodes: usize,
        undirected_edges: usize,
        label_totals: LabelTotals,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub undefined_reason: Option<String>,
    pub alpha: MetricValue,
    pub p_risk: MetricValue,
    pub q_risk: MetricValue,
    pub r_unit: MetricValue,
    pub r_inverse_degree: MetricValue,
    pub inverse_degree_scale: f64,
    pub equivalence_gap: MetricValue,
    pub mixing_unit: MixingMatrix,
    pub mixing_weighted: MixingMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub undefined_reason: Option<String>,
    pub tolerance: f64,
    pub checks: Vec<ScaleCheck>,
    pub max_gap: MetricValue,
    pub corollary_applies: bool,
    pub shared_degree: Option<u64>,
    pub unit_gap: Option<f64>,
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument {
    pub tool_version: String,
    pub label_orientation: LabelMapping,
    pub dataset: DatasetSummary,
    pub metrics: MetricsSection,
    /// Present for record datasets only.
    pub clique_counts: Option<CliqueCountTable>,
    pub alpha_from_clique_counts: Option<MetricValue>,
    pub equivalence: EquivalenceSection,
}

impl ReportDocument {
    pub fn for_records(
        records: &[PaperRecord],
        diagnostics: IngestDiagnostics,
        mapping: &LabelMapping,
        c_values: &[f64],
    ) -> Result<Self, MetricError> {
        let (network, _) = build_network(records)?;
        let table = CliqueCountTable::from_network(&network);
        let (n_pos, n_neg) = network.population();
        let alpha_table = alpha_from_clique_counts(&table, n_pos, n_neg).into();
        let dataset = DatasetSummary::Records {
            diagnostics,
            nodes: network.nodes().len(),
            cliques: network.cliques().len(),
        };
        let (metrics, equivalence) = assemble(&network, c_values)?;
        Ok(Self {
            tool_version: TOOL_VERSION.into(),
            label_orientation: mapping.clone(),
            dataset,
            metrics,
            clique_counts: Some(table),
            alpha_from_clique_counts: Some(alpha_table),
            equivalence,
        })
    }

    pub fn for_graph(
        graph: &ReciprocatedGraph,
        mapping: &LabelMapping,
        c_values: &[f64],
    ) -> Result<Self, MetricError> {
        let (positive, negative) = graph.population();
        let dataset = DatasetSummary::EdgeList {
            nodes: graph.nodes().len(),
            undirected_edges: graph.undirected_edge_count(),
            label_totals: LabelTotals { positive, negative },
        };
        let (metrics, equivalence) = assemble(graph, c_values)?;
        Ok(Self {
            tool_version: TOOL_VERSION.into(),
            label_orientation: mapping.clone(),
            dataset,
            metrics,
            clique_counts: None,
            alpha_from_clique_counts: None,
            equivalence,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let m = &self.metrics;
        let tokens = |label| self.label_orientation.tokens_for(label).join(",");
        let _ = writeln!(out, "homophily {}", self.tool_version);
        let _ = writeln!(
            out,
            "labels: positive = {}; negative = {}",
            tokens(GenderLabel::Positive),
            tokens(GenderLabel::Negative)
        );
        match &self.dataset {
            DatasetSummary::Records {
                diagnostics: d,
                nodes,
                cliques,
            } => {
                let _ = writeln!(
                    out,
                    "dataset: {} records, {} kept, {} single-author dropped, {} unknown-label dropped",
                    d.total_records, d.surviving_records, d.dropped_single_author, d.dropped_unknown_label
                );
                let _ = writeln!(
                    out,
                    "network: {nodes} authors in {cliques} cliques ({} positive, {} negative)",
                    d.label_totals.positive, d.label_totals.negative
                );
            }
            DatasetSummary::EdgeList {
                nodes,
                undirected_edges,
                label_totals,
            } => {
                let _ = writeln!(
                    out,
                    "edge list: {nodes} nodes, {undirected_edges} edges ({} positive, {} negative)",
                    label_totals.positive, label_totals.negative
                );
            }
        }
        if let Some(reason) = &m.undefined_reason {
            let _ = writeln!(out, "undefined: {reason}");
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "alpha                      {}", m.alpha.text());
        let _ = writeln!(out, "  p risk                   {}", m.p_risk.text());
        let _ = writeln!(out, "  q risk                   {}", m.q_risk.text());
        if let Some(a) = self.alpha_from_clique_counts {
            let _ = writeln!(out, "alpha (clique counts)      {}", a.text());
        }
        let _ = writeln!(out, "r (unit weights)           {}", m.r_unit.text());
        let _ = writeln!(
            out,
            "r (inverse degree, c={})  {}",
            m.inverse_degree_scale,
            m.r_inverse_degree.text()
        );
        let _ = writeln!(
            out,
            "|r_inverse_degree - alpha| {}",
            m.equivalence_gap.text()
        );
        for (name, mix) in [
            ("unit", &m.mixing_unit),
            ("inverse degree", &m.mixing_weighted),
        ] {
            let _ = writeln!(
                out,
                "mixing ({name}): e_pp {:.4}  e_pn {:.4}  e_np {:.4}  e_nn {:.4}  a_p {:.4}  a_n {:.4}",
                mix.e_pp, mix.e_pn, mix.e_np, mix.e_nn, mix.a_p, mix.a_n
            );
        }
        if let Some(table) = &self.clique_counts {
            let _ = writeln!(out);
            let _ = writeln!(out, "clique counts (K* = {}):", table.k_star());
            for ((i, j), n) in table.cells() {
                let _ = writeln!(out, "  {i} positive, {j} negative: {n}");
            }
        }
        let _ = writeln!(out);
        out.push_str(&self.equivalence.to_text());
        out
    }
}

impl EquivalenceSection {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("equivalence section serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "equivalence (tolerance {:e}):", self.tolerance);
        if let Some(reason) = &self.undefined_reason {
            let _ = writeln!(out, "  undefined: {reason}");
        }
        for check in &self.checks {
            let _ = writeln!(
                out,
                "  c = {}: r = {:.4}, gap = {:.4}",
                check.c, check.r, check.gap
            );
        }
        let _ = writeln!(out, "  max gap: {}", self.max_gap.text());
        match (self.shared_degree, self.unit_gap) {
            (Some(k), Some(gap)) => {
                let _ = writeln!(
                    out,
                    "  all cliques share size {}: |r_unit - alpha| = {gap:.4}",
                    k + 1
                );
            }
            _ => {
                let _ = writeln!(
                    out,
                    "  clique sizes differ: unit-weight r not expected to equal alpha"
                );
            }
        }
        let _ = writeln!(
            out,
            "  certified: {}",
            if self.certified { "yes" } else { "no" }
        );
        out
    }
}

fn undefined_reason(results: &[&Result<f64, MetricError>]) -> Option<String> {
    results
        .iter()
        .find_map(|r| r.as_ref().err())
        .map(ToString::to_string)
}

fn pass_through<T>(r: Result<T, MetricError>) -> Result<Result<T, MetricError>, MetricError> {
    match r {
        Err(e) if !e.is_undefined() => Err(e),
        other => Ok(other),
    }
}

fn assemble<N: TieNetwork + ?Sized>(
    network: &N,
    c_values: &[f64],
) -> Result<(MetricsSection, EquivalenceSection), MetricError> {
    let risks = pass_through(alpha_from_individuals(network))?;
    let mixing_unit = build_mixing_matrix(network, EdgeWeighting::Unit)?;
    let mixing_weighted =
        build_mixing_matrix(network, EdgeWeighting::inverse_degree(DEFAULT_SCALE)?)?;
    let r_unit = pass_through(newman_r(&mixing_unit))?;
    let r_weighted = pass_through(newman_r(&mixing_weighted))?;
    let alpha = risks.as_ref().map(|r| r.alpha).map_err(Clone::clone);
    let gap = match (&alpha, &r_weighted) {
        (Ok(a), Ok(r)) => Ok((r - a).abs()),
        (Err(e), _) | (_, Err(e)) => Err(e.clone()),
    };
    let metrics = MetricsSection {
        undefined_reason: undefined_reason(&[&alpha, &r_unit, &r_weighted]),
        alpha: alpha.clone().into(),
        p_risk: risks
            .as_ref()
            .map(|r| r.p_risk)
            .map_err(Clone::clone)
            .into(),
        q_risk: risks
            .as_ref()
            .map(|r| r.q_risk)
            .map_err(Clone::clone)
            .into(),
        r_unit: r_unit.into(),
        r_inverse_degree: r_weighted.into(),
        inverse_degree_scale: DEFAULT_SCALE,
        equivalence_gap: gap.into(),
        mixing_unit,
        mixing_weighted,
    };

    let equivalence = match pass_through(equivalence_report(network, c_values))? {
        Ok(eq) => EquivalenceSection {
            undefined_reason: None,
            tolerance: eq.tolerance,
            checks: eq.checks,
            max_gap: MetricValue::Defined(eq.max_gap),
            corollary_applies: eq.corollary_applies,
            shared_degree: eq.shared_degree,
            unit_gap: eq.unit_gap,
            certified: eq.certified,
        },
        Err(e) => EquivalenceSection {
            undefined_reason: Some(e.to_string()),
            tolerance: EQUIVALENCE_TOLERANCE,
            checks: Vec::new(),
            max_gap: MetricValue::Undefined,
            corollary_applies: network.uniform_degree().is_some(),
            shared_degree: network.uniform_degree(),
            unit_gap: None,
            certified: false,
        },
    };
    Ok((metrics, equivalence))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_reciprocated_graph, UndirectedEdge};
    use GenderLabel::{Negative as N, Positive as P};

    fn diagnostics_for(records: &[PaperRecord]) -> IngestDiagnostics {
        IngestDiagnostics {
            total_records: records.len(),
            surviving_records: records.len(),
            ..Default::default()
        }
    }

    #[test]
    fn one_label_report_is_undefined_not_nan() {
        let records = vec![
            PaperRecord::new("p1", vec![N, N]),
            PaperRecord::new("p2", vec![N, N]),
        ];
        let doc = ReportDocument::for_records(
            &records,
            diagnostics_for(&records),
            &LabelMapping::default(),
            &[1.0],
        )
        .unwrap();
        assert_eq!(doc.metrics.alpha, MetricValue::Undefined);
        assert_eq!(doc.metrics.r_unit, MetricValue::Undefined);
        assert_eq!(doc.metrics.r_inverse_degree, MetricValue::Undefined);
        assert!(!doc.equivalence.certified);
        let json = doc.to_json();
        assert!(!json.contains("NaN") && !json.contains("null,\n  \"p_risk"));
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["metrics"]["alpha"], "undefined");
        assert_eq!(value["metrics"]["r_unit"], "undefined");
        assert!(doc.to_text().contains("undefined"));
    }

    #[test]
    fn record_report_fields() {
        let records = vec![
            PaperRecord::new("p1", vec![P, P, N]),
            PaperRecord::new("p2", vec![N, N, N]),
        ];
        let doc = ReportDocument::for_records(
            &records,
            diagnostics_for(&records),
            &LabelMapping::default(),
            &[0.5, 1.0, 3.0],
        )
        .unwrap();
        let alpha = doc.metrics.alpha.value().unwrap();
        let from_table = doc.alpha_from_clique_counts.unwrap().value().unwrap();
        assert!((alpha - from_table).abs() < 1e-12);
        assert!(doc.equivalence.corollary_applies);
        assert!(doc.equivalence.certified);
        assert_eq!(doc.equivalence.checks.len(), 3);
        let value: serde_json::Value = serde_json::from_str(&doc.to_json()).unwrap();
        assert_eq!(value["dataset"]["kind"], "records");
        assert_eq!(value["label_orientation"]["positive"][0], "F");
        assert_eq!(value["clique_counts"]["k_star"], 3);
    }

    #[test]
    fn text_matches_json_to_four_decimals() {
        let graph = build_reciprocated_graph(&[
            UndirectedEdge::new("a", P, "b", P),
            UndirectedEdge::new("b", P, "c", N),
            UndirectedEdge::new("c", N, "d", N),
            UndirectedEdge::new("a", P, "d", N),
            UndirectedEdge::new("a", P, "c", N),
        ])
        .unwrap();
        let doc = ReportDocument::for_graph(&graph, &LabelMapping::default(), &[1.0]).unwrap();
        let text = doc.to_text();
        for v in [
            doc.metrics.alpha,
            doc.metrics.r_unit,
            doc.metrics.r_inverse_degree,
        ] {
            assert!(text.contains(&format!("{:.4}", v.value().unwrap())));
        }
        assert!(doc.clique_counts.is_none());
    }

    #[test]
    fn invalid_scale_is_an_error_not_undefined() {
        let records = vec![PaperRecord::new("p1", vec![P, N])];
        let err = ReportDocument::for_records(
            &records,
            diagnostics_for(&records),
            &LabelMapping::default(),
            &[-1.0],
        )
        .unwrap_err();
        assert!(!err.is_undefined());
    }
}
