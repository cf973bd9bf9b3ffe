//! Fixtures shared by the criterion benchmarks.

use homophily_core::{
    build_network, generate, CliqueNetwork, CliqueSizes, PaperRecord, SynthConfig,
};

/// `papers` random records with clique sizes 2-8 and a fixed seed.
pub fn records(papers: usize) -> Vec<PaperRecord> {
    generate(&SynthConfig {
        num_papers: papers,
        sizes: CliqueSizes::Uniform { min: 2, max: 8 },
        positive_fraction: 0.4,
        seed: 2024,
    })
    .expect("valid bench config")
}

pub fn network(papers: usize) -> CliqueNetwork {
    build_network(&records(papers)).expect("non-empty").0
}
