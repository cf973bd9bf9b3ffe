use serde::{Deserialize, Serialize};

/// Binary characteristic carried by every author.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GenderLabel {
    Positive,
    Negative,
}

impl GenderLabel {
    pub fn flipped(self) -> Self {
        match self {
            GenderLabel::Positive => GenderLabel::Negative,
            GenderLabel::Negative => GenderLabel::Positive,
        }
    }

    pub fn is_positive(self) -> bool {
        self == GenderLabel::Positive
    }
}

/// One publication: its identifier and the labels of its authors, in
/// author order. Each record becomes one clique.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperRecord {
    pub paper_id: String,
    pub author_labels: Vec<GenderLabel>,
}

impl PaperRecord {
    pub fn new(paper_id: impl Into<String>, author_labels: Vec<GenderLabel>) -> Self {
        Self {
            paper_id: paper_id.into(),
            author_labels,
        }
    }

    /// `(positive, negative)` member counts.
    pub fn composition(&self) -> (usize, usize) {
        let positive = self
            .author_labels
            .iter()
            .filter(|l| l.is_positive())
            .count();
        (positive, self.author_labels.len() - positive)
    }

    pub fn len(&self) -> usize {
        self.author_labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.author_labels.is_empty()
    }
}
