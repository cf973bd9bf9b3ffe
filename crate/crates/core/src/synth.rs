//! Seeded random disjoint-clique datasets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::SynthError;
use crate::label::{GenderLabel, PaperRecord};

/// Largest clique size of the default size distribution.
pub const DEFAULT_MAX_CLIQUE: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CliqueSizes {
    Fixed(usize),
    /// Uniform over `min..=max`.
    Uniform {
        min: usize,
        max: usize,
    },
}

impl Default for CliqueSizes {
    fn default() -> Self {
        CliqueSizes::Uniform {
            min: 2,
            max: DEFAULT_MAX_CLIQUE,
        }
    }
}

impl std::str::FromStr for CliqueSizes {
    type Err = SynthError;

    /// `5` for a fixed size, `2-8` for a uniform range.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SynthError::InvalidConfig(format!("cannot parse clique sizes `{s}`"));
        match s.split_once('-') {
            Some((lo, hi)) => Ok(CliqueSizes::Uniform {
                min: lo.trim().parse().map_err(|_| bad())?,
                max: hi.trim().parse().map_err(|_| bad())?,
            }),
            None => Ok(CliqueSizes::Fixed(s.trim().parse().map_err(|_| bad())?)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthConfig {
    pub num_papers: usize,
    pub sizes: CliqueSizes,
    /// Independent per-author probability of the positive label.
    pub positive_fraction: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            num_papers: 100,
            sizes: CliqueSizes::default(),
            positive_fraction: 0.5,
            seed: 0,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<(), SynthError> {
        let (min, max) = match self.sizes {
            CliqueSizes::Fixed(k) => (k, k),
            CliqueSizes::Uniform { min, max } => (min, max),
        };
        if min < 2 {
            return Err(SynthError::InvalidConfig(format!(
                "clique sizes must be at least 2, got {min}"
            )));
        }
        if min > max {
            return Err(SynthError::InvalidConfig(format!(
                "empty size range {min}-{max}"
            )));
        }
        if !(self.positive_fraction > 0.0 && self.positive_fraction < 1.0) {
            return Err(SynthError::InvalidConfig(format!(
                "positive fraction must lie strictly between 0 and 1, got {}",
                self.positive_fraction
            )));
        }
        Ok(())
    }
}

/// Generates `num_papers` records with ids `p1, p2, ...`. The output depends
/// only on the config.
pub fn generate(config: &SynthConfig) -> Result<Vec<PaperRecord>, SynthError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let records = (0..config.num_papers)
        .map(|idx| {
            let size = match config.sizes {
                CliqueSizes::Fixed(k) => k,
                CliqueSizes::Uniform { min, max } => rng.gen_range(min..=max),
            };
            let labels = (0..size)
                .map(|_| {
                    if rng.gen_bool(config.positive_fraction) {
                        GenderLabel::Positive
                    } else {
                        GenderLabel::Negative
                    }
                })
                .collect();
            PaperRecord::new(format!("p{}", idx + 1), labels)
        })
        .collect();
    Ok(records)
}
