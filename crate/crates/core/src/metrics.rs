//! Assortativity metrics on reciprocated labeled graphs.
//!
//! All sums run over nodes in id order so results are reproducible bit for
//! bit on the same input.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use crate::error::{GraphError, MetricError};
use crate::graph::{node_out_weight, CliqueNetwork, EdgeWeighting, TieNetwork};
use crate::label::GenderLabel;

/// Absolute tolerance used when certifying that r under inverse-degree
/// weighting equals α.
pub const EQUIVALENCE_TOLERANCE: f64 = 1e-10;

/// 2x2 table of weighted directed-edge proportions between label classes.
/// Rows are the source label, columns the target label.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixingMatrix {
    pub e_pp: f64,
    pub e_pn: f64,
    pub e_np: f64,
    pub e_nn: f64,
    pub a_p: f64,
    pub a_n: f64,
    pub b_p: f64,
    pub b_n: f64,
}

impl MixingMatrix {
    /// Normalizes raw weights `[[pp, pn], [np, nn]]` into proportions.
    /// Returns `None` when the total weight is not positive.
    pub fn from_weights(weights: [[f64; 2]; 2]) -> Option<Self> {
        let total = weights[0][0] + weights[0][1] + weights[1][0] + weights[1][1];
        if !(total > 0.0 && total.is_finite()) {
            return None;
        }
        let e_pp = weights[0][0] / total;
        let e_pn = weights[0][1] / total;
        let e_np = weights[1][0] / total;
        let e_nn = weights[1][1] / total;
        Some(Self {
            e_pp,
            e_pn,
            e_np,
            e_nn,
            a_p: e_pp + e_pn,
            a_n: e_np + e_nn,
            b_p: e_pp + e_np,
            b_n: e_pn + e_nn,
        })
    }

    pub fn entry(&self, from: GenderLabel, to: GenderLabel) -> f64 {
        use GenderLabel::{Negative as N, Positive as P};
        match (from, to) {
            (P, P) => self.e_pp,
            (P, N) => self.e_pn,
            (N, P) => self.e_np,
            (N, N) => self.e_nn,
        }
    }

    pub fn total(&self) -> f64 {
        self.e_pp + self.e_pn + self.e_np + self.e_nn
    }
}

/// Weighted mixing matrix: each directed edge out of node `s` contributes
/// `Z_s` to the cell (label of s, label of target).
pub fn build_mixing_matrix<N: TieNetwork + ?Sized>(
    network: &N,
    weighting: EdgeWeighting,
) -> Result<MixingMatrix, MetricError> {
    let mut weights = [[0.0f64; 2]; 2];
    for node in network.nodes() {
        let z = node_out_weight(node, weighting)?;
        let row = usize::from(!node.label.is_positive());
        weights[row][0] += z * node.pi as f64;
        weights[row][1] += z * node.nu as f64;
    }
    MixingMatrix::from_weights(weights).ok_or(MetricError::Graph(GraphError::EmptyNetwork))
}

/// Newman's discrete assortativity coefficient on a 2x2 mixing matrix.
pub fn newman_r(m: &MixingMatrix) -> Result<f64, MetricError> {
    let trace = m.e_pp + m.e_nn;
    let expected = m.a_p * m.b_p + m.a_n * m.b_n;
    let denom = 1.0 - expected;
    // With both classes present denom is bounded well away from zero; it
    // only vanishes (up to rounding) when one class carries all the weight.
    if denom.is_nan() || denom <= 1e-14 {
        return Err(MetricError::DegenerateMixing);
    }
    Ok((trace - expected) / denom)
}

/// Risk decomposition of α: `p_risk` is the mean share of positive ties
/// among positive individuals, `q_risk` the same among negative ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaRisks {
    pub alpha: f64,
    pub p_risk: f64,
    pub q_risk: f64,
}

/// α as a difference of per-individual risks.
pub fn alpha_from_individuals<N: TieNetwork + ?Sized>(
    network: &N,
) -> Result<AlphaRisks, MetricError> {
    let mut sums = [0.0f64; 2];
    let mut counts = [0usize; 2];
    for node in network.nodes() {
        let degree = node.degree();
        if degree == 0 {
            return Err(GraphError::ZeroDegree { node: node.id }.into());
        }
        let class = usize::from(!node.label.is_positive());
        sums[class] += node.pi as f64 / degree as f64;
        counts[class] += 1;
    }
    if counts[0] == 0 || counts[1] == 0 {
        return Err(MetricError::OneSidedPopulation {
            positive: counts[0],
            negative: counts[1],
        });
    }
    let p_risk = sums[0] / counts[0] as f64;
    let q_risk = sums[1] / counts[1] as f64;
    Ok(AlphaRisks {
        alpha: p_risk - q_risk,
        p_risk,
        q_risk,
    })
}

/// Number of cliques per composition `(positive members, negative members)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CliqueCountTable {
    cells: BTreeMap<(usize, usize), u64>,
    k_star: usize,
}

impl CliqueCountTable {
    pub fn from_network(network: &CliqueNetwork) -> Self {
        let mut cells = BTreeMap::new();
        for clique in network.cliques() {
            *cells.entry((clique.positive, clique.negative)).or_insert(0) += 1;
        }
        let k_star = network
            .cliques()
            .iter()
            .map(|c| c.size())
            .max()
            .unwrap_or(0);
        Self { cells, k_star }
    }

    /// Builds a table from explicit counts. Zero counts are ignored; cells
    /// describing cliques of fewer than two members are rejected.
    pub fn from_counts(
        counts: impl IntoIterator<Item = ((usize, usize), u64)>,
    ) -> Result<Self, MetricError> {
        let mut cells = BTreeMap::new();
        for ((i, j), n) in counts {
            if n == 0 {
                continue;
            }
            if i + j < 2 {
                return Err(MetricError::InconsistentTable(format!(
                    "cell ({i}, {j}) describes a clique with fewer than two members"
                )));
            }
            *cells.entry((i, j)).or_insert(0) += n;
        }
        let k_star = cells.keys().map(|&(i, j)| i + j).max().unwrap_or(0);
        Ok(Self { cells, k_star })
    }

    pub fn get(&self, positive: usize, negative: usize) -> u64 {
        self.cells.get(&(positive, negative)).copied().unwrap_or(0)
    }

    pub fn cells(&self) -> impl Iterator<Item = ((usize, usize), u64)> + '_ {
        self.cells.iter().map(|(&k, &v)| (k, v))
    }

    /// Largest clique size present.
    pub fn k_star(&self) -> usize {
        self.k_star
    }

    pub fn clique_count(&self) -> u64 {
        self.cells.values().sum()
    }

    /// `Σ i·n_ij`
    pub fn positive_individuals(&self) -> u64 {
        self.cells.iter().map(|(&(i, _), &n)| i as u64 * n).sum()
    }

    /// `Σ j·n_ij`
    pub fn negative_individuals(&self) -> u64 {
        self.cells.iter().map(|(&(_, j), &n)| j as u64 * n).sum()
    }
}

impl Serialize for CliqueCountTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Cell {
            positive: usize,
            negative: usize,
            count: u64,
        }
        #[derive(Serialize)]
        struct Table {
            k_star: usize,
            cliques: u64,
            cells: Vec<Cell>,
        }
        Table {
            k_star: self.k_star,
            cliques: self.clique_count(),
            cells: self
                .cells()
                .map(|((positive, negative), count)| Cell {
                    positive,
                    negative,
                    count,
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

/// α from the clique composition counts alone.
///
/// A clique with `i` positive and `j` negative members holds `i` positive
/// individuals with risk `(i-1)/(i+j-1)` and `j` negative individuals with
/// risk `i/(i+j-1)`, so each cell is weighted by its member multiplicity.
pub fn alpha_from_clique_counts(
    table: &CliqueCountTable,
    n_pos: usize,
    n_neg: usize,
) -> Result<f64, MetricError> {
    if table.positive_individuals() != n_pos as u64 {
        return Err(MetricError::InconsistentTable(format!(
            "table holds {} positive individuals, expected {n_pos}",
            table.positive_individuals()
        )));
    }
    if table.negative_individuals() != n_neg as u64 {
        return Err(MetricError::InconsistentTable(format!(
            "table holds {} negative individuals, expected {n_neg}",
            table.negative_individuals()
        )));
    }
    if n_pos == 0 || n_neg == 0 {
        return Err(MetricError::OneSidedPopulation {
            positive: n_pos,
            negative: n_neg,
        });
    }
    let mut positive_sum = 0.0;
    let mut negative_sum = 0.0;
    for ((i, j), n) in table.cells() {
        if i + j < 2 || i + j > table.k_star {
            return Err(MetricError::InconsistentTable(format!(
                "cell ({i}, {j}) outside the clique size range 2..={}",
                table.k_star
            )));
        }
        let n = n as f64;
        let others = (i + j - 1) as f64;
        positive_sum += n * (i * (i.saturating_sub(1))) as f64 / others;
        negative_sum += n * (j * i) as f64 / others;
    }
    Ok(positive_sum / n_pos as f64 - negative_sum / n_neg as f64)
}

/// Both α and r on one network, with unit and inverse-degree weighting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricReport {
    pub alpha: f64,
    pub p_risk: f64,
    pub q_risk: f64,
    pub r_unit: f64,
    pub r_inverse_degree: f64,
    /// The `c` used for `r_inverse_degree`.
    pub inverse_degree_scale: f64,
    pub mixing_unit: MixingMatrix,
    pub mixing_weighted: MixingMatrix,
    /// `|r_inverse_degree - alpha|`
    pub equivalence_gap: f64,
}

pub fn metric_report<N: TieNetwork + ?Sized>(
    network: &N,
    scale: f64,
) -> Result<MetricReport, MetricError> {
    let risks = alpha_from_individuals(network)?;
    let mixing_unit = build_mixing_matrix(network, EdgeWeighting::Unit)?;
    let mixing_weighted = build_mixing_matrix(network, EdgeWeighting::inverse_degree(scale)?)?;
    let r_unit = newman_r(&mixing_unit)?;
    let r_inverse_degree = newman_r(&mixing_weighted)?;
    Ok(MetricReport {
        alpha: risks.alpha,
        p_risk: risks.p_risk,
        q_risk: risks.q_risk,
        r_unit,
        r_inverse_degree,
        inverse_degree_scale: scale,
        mixing_unit,
        mixing_weighted,
        equivalence_gap: (r_inverse_degree - risks.alpha).abs(),
    })
}

/// r under inverse-degree weighting for one scale constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaleCheck {
    pub c: f64,
    pub r: f64,
    pub gap: f64,
}

/// Numerical check that r with inverse-degree weights equals α, plus the
/// unit-weight case when every node has the same degree.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub alpha: f64,
    pub checks: Vec<ScaleCheck>,
    pub max_gap: f64,
    pub r_unit: f64,
    /// All cliques share one size (all nodes share one degree).
    pub corollary_applies: bool,
    pub shared_degree: Option<u64>,
    /// `|r_unit - alpha|`, reported only when the corollary applies.
    pub unit_gap: Option<f64>,
    pub tolerance: f64,
    pub certified: bool,
}

pub fn equivalence_report<N: TieNetwork + ?Sized>(
    network: &N,
    c_values: &[f64],
) -> Result<EquivalenceReport, MetricError> {
    if c_values.is_empty() {
        return Err(MetricError::Graph(GraphError::InvalidScale(f64::NAN)));
    }
    let alpha = alpha_from_individuals(network)?.alpha;
    let mut checks = Vec::with_capacity(c_values.len());
    for &c in c_values {
        let m = build_mixing_matrix(network, EdgeWeighting::inverse_degree(c)?)?;
        let r = newman_r(&m)?;
        checks.push(ScaleCheck {
            c,
            r,
            gap: (r - alpha).abs(),
        });
    }
    let max_gap = checks.iter().map(|c| c.gap).fold(0.0, f64::max);
    let r_unit = newman_r(&build_mixing_matrix(network, EdgeWeighting::Unit)?)?;
    let shared_degree = network.uniform_degree();
    let unit_gap = shared_degree.map(|_| (r_unit - alpha).abs());
    let certified =
        max_gap < EQUIVALENCE_TOLERANCE && unit_gap.is_none_or(|gap| gap < EQUIVALENCE_TOLERANCE);
    Ok(EquivalenceReport {
        alpha,
        checks,
        max_gap,
        r_unit,
        corollary_applies: shared_degree.is_some(),
        shared_degree,
        unit_gap,
        tolerance: EQUIVALENCE_TOLERANCE,
        certified,
    })
}
