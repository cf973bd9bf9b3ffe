//! Reading and writing publication datasets.
//!
//! Two record formats are supported:
//!
//! * CSV with header `paper_id,labels`, where `labels` is a compact string
//!   with one character per author (`FFM`).
//! * JSONL with one `{"paper_id": "...", "genders": ["F", "M"]}` object per
//!   line, for tokens longer than one character.
//!
//! Edge lists (`src,dst,label_src,label_dst`) describe general reciprocated
//! graphs.

use std::collections::{BTreeMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::IngestError;
use crate::graph::{UndirectedEdge, UnknownLabelPolicy, ValidationPolicy};
use crate::label::{GenderLabel, PaperRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DataFormat {
    #[default]
    Csv,
    Jsonl,
}

impl FromStr for DataFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(DataFormat::Csv),
            "jsonl" | "ndjson" => Ok(DataFormat::Jsonl),
            other => Err(format!("unknown format `{other}` (expected csv or jsonl)")),
        }
    }
}

/// Author labels as they appear on disk, before mapping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelsField {
    /// One character per author.
    Compact(String),
    Tokens(Vec<String>),
}

impl LabelsField {
    pub fn tokens(&self) -> Vec<String> {
        match self {
            LabelsField::Compact(s) => s.chars().map(String::from).collect(),
            LabelsField::Tokens(t) => t.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawRecord {
    pub paper_id: String,
    pub labels: LabelsField,
}

impl RawRecord {
    pub fn compact(paper_id: impl Into<String>, labels: impl Into<String>) -> Self {
        Self {
            paper_id: paper_id.into(),
            labels: LabelsField::Compact(labels.into()),
        }
    }
}

/// Token-to-label assignment. Tokens not listed map to "unknown".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMapping {
    entries: Vec<(String, GenderLabel)>,
}

impl Default for LabelMapping {
    fn default() -> Self {
        Self {
            entries: vec![
                ("F".to_string(), GenderLabel::Positive),
                ("M".to_string(), GenderLabel::Negative),
            ],
        }
    }
}

impl LabelMapping {
    pub fn new(entries: Vec<(String, GenderLabel)>) -> Result<Self, IngestError> {
        let mut seen = HashSet::new();
        for (token, _) in &entries {
            if token.is_empty() || !seen.insert(token.as_str()) {
                return Err(IngestError::InvalidMapping(format!(
                    "empty or repeated token `{token}`"
                )));
            }
        }
        Ok(Self { entries })
    }

    pub fn label(&self, token: &str) -> Option<GenderLabel> {
        self.entries
            .iter()
            .find(|(t, _)| t == token)
            .map(|&(_, label)| label)
    }

    /// First token mapped to `label`, used when writing datasets.
    pub fn token(&self, label: GenderLabel) -> Option<&str> {
        self.entries
            .iter()
            .find(|&&(_, l)| l == label)
            .map(|(t, _)| t.as_str())
    }

    pub fn tokens_for(&self, label: GenderLabel) -> Vec<&str> {
        self.entries
            .iter()
            .filter(|&&(_, l)| l == label)
            .map(|(t, _)| t.as_str())
            .collect()
    }
}

/// Parses `F=+,M=-`. Values accept `+`/`-` or `positive`/`negative`.
impl FromStr for LabelMapping {
    type Err = IngestError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut entries = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (token, value) = part
                .split_once('=')
                .ok_or_else(|| IngestError::InvalidMapping(s.to_string()))?;
            let label = match value.trim().to_ascii_lowercase().as_str() {
                "+" | "positive" | "pos" => GenderLabel::Positive,
                "-" | "negative" | "neg" => GenderLabel::Negative,
                _ => return Err(IngestError::InvalidMapping(s.to_string())),
            };
            entries.push((token.trim().to_string(), label));
        }
        if entries.is_empty() {
            return Err(IngestError::InvalidMapping(s.to_string()));
        }
        Self::new(entries)
    }
}

impl Serialize for LabelMapping {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Orientation<'a> {
            positive: Vec<&'a str>,
            negative: Vec<&'a str>,
        }
        Orientation {
            positive: self.tokens_for(GenderLabel::Positive),
            negative: self.tokens_for(GenderLabel::Negative),
        }
        .serialize(serializer)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct LabelTotals {
    pub positive: usize,
    pub negative: usize,
}

/// Accounting of every input record.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct IngestDiagnostics {
    pub total_records: usize,
    pub surviving_records: usize,
    pub dropped_single_author: usize,
    pub dropped_unknown_label: usize,
    /// Surviving papers keyed by author count.
    pub papers_by_size: BTreeMap<usize, usize>,
    /// Authors on surviving papers.
    pub label_totals: LabelTotals,
}

fn open(path: &Path) -> Result<File, IngestError> {
    File::open(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_records(
    path: impl AsRef<Path>,
    format: DataFormat,
) -> Result<Vec<RawRecord>, IngestError> {
    parse_records(open(path.as_ref())?, format)
}

pub fn parse_records<R: Read>(
    reader: R,
    format: DataFormat,
) -> Result<Vec<RawRecord>, IngestError> {
    let records = match format {
        DataFormat::Csv => parse_csv(reader)?,
        DataFormat::Jsonl => parse_jsonl(reader)?,
    };
    let mut seen = HashSet::new();
    for (line, record) in &records {
        if !seen.insert(record.paper_id.as_str()) {
            return Err(IngestError::DuplicatePaperId {
                paper_id: record.paper_id.clone(),
                line: *line,
            });
        }
    }
    Ok(records.into_iter().map(|(_, r)| r).collect())
}

fn csv_error(err: csv::Error) -> IngestError {
    let line = err.position().map_or(0, |p| p.line() as usize);
    IngestError::Parse {
        line,
        message: err.to_string(),
    }
}

fn parse_csv<R: Read>(reader: R) -> Result<Vec<(usize, RawRecord)>, IngestError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers().map_err(csv_error)?.clone();
    if headers.iter().collect::<Vec<_>>() != ["paper_id", "labels"] {
        return Err(IngestError::Parse {
            line: 1,
            message: format!(
                "expected header `paper_id,labels`, found `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(csv_error)?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        let paper_id = &row[0];
        let labels = &row[1];
        if paper_id.is_empty() {
            return Err(IngestError::Parse {
                line,
                message: "empty paper_id".into(),
            });
        }
        if labels.is_empty() {
            return Err(IngestError::Parse {
                line,
                message: format!("paper `{paper_id}` has an empty labels field"),
            });
        }
        out.push((line, RawRecord::compact(paper_id, labels)));
    }
    Ok(out)
}

#[derive(Deserialize)]
struct JsonRecord {
    paper_id: String,
    genders: Vec<String>,
}

fn parse_jsonl<R: Read>(reader: R) -> Result<Vec<(usize, RawRecord)>, IngestError> {
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| IngestError::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: JsonRecord = serde_json::from_str(&line).map_err(|e| IngestError::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
        if rec.paper_id.is_empty() {
            return Err(IngestError::Parse {
                line: lineno,
                message: "empty paper_id".into(),
            });
        }
        if rec.genders.is_empty() {
            return Err(IngestError::Parse {
                line: lineno,
                message: format!("paper `{}` has an empty genders array", rec.paper_id),
            });
        }
        out.push((
            lineno,
            RawRecord {
                paper_id: rec.paper_id,
                labels: LabelsField::Tokens(rec.genders),
            },
        ));
    }
    Ok(out)
}

/// Maps raw tokens to labels and applies the validation policy. Papers with
/// an unknown token are dropped whole, since removing just that author
/// would change every co-author's degree.
pub fn to_paper_records(
    raw: &[RawRecord],
    mapping: &LabelMapping,
    policy: &ValidationPolicy,
) -> Result<(Vec<PaperRecord>, IngestDiagnostics), IngestError> {
    let mut diag = IngestDiagnostics {
        total_records: raw.len(),
        ..Default::default()
    };
    let mut records = Vec::with_capacity(raw.len());
    'records: for rec in raw {
        let tokens = rec.labels.tokens();
        let mut labels = Vec::with_capacity(tokens.len());
        for token in &tokens {
            match mapping.label(token) {
                Some(label) => labels.push(label),
                None => match policy.on_unknown_label {
                    UnknownLabelPolicy::RejectRecord => {
                        diag.dropped_unknown_label += 1;
                        continue 'records;
                    }
                    UnknownLabelPolicy::RejectDataset => {
                        return Err(IngestError::UnknownLabel {
                            context: format!("paper `{}`", rec.paper_id),
                            token: token.clone(),
                        });
                    }
                },
            }
        }
        if labels.len() < 2 {
            diag.dropped_single_author += 1;
            continue;
        }
        let record = PaperRecord::new(rec.paper_id.clone(), labels);
        let (positive, negative) = record.composition();
        diag.label_totals.positive += positive;
        diag.label_totals.negative += negative;
        *diag.papers_by_size.entry(record.len()).or_insert(0) += 1;
        records.push(record);
    }
    diag.surviving_records = records.len();
    if records.is_empty() {
        return Err(IngestError::AllRecordsDropped(raw.len()));
    }
    Ok((records, diag))
}

/// Writes records in a format `parse_records` reads back. The CSV header is
/// written even when `records` is empty.
pub fn write_records<W: Write>(
    records: &[PaperRecord],
    format: DataFormat,
    mapping: &LabelMapping,
    writer: W,
) -> Result<(), IngestError> {
    let token = |label: GenderLabel| {
        mapping
            .token(label)
            .ok_or_else(|| IngestError::InvalidMapping(format!("no token is mapped to {label:?}")))
    };
    let positive = token(GenderLabel::Positive)?;
    let negative = token(GenderLabel::Negative)?;
    let io_err = |source: std::io::Error| IngestError::Io {
        path: "<output>".into(),
        source,
    };

    match format {
        DataFormat::Csv => {
            if positive.chars().count() != 1 || negative.chars().count() != 1 {
                return Err(IngestError::InvalidMapping(
                    "CSV output needs single-character tokens".into(),
                ));
            }
            let mut w = csv::Writer::from_writer(writer);
            w.write_record(["paper_id", "labels"]).map_err(csv_error)?;
            for rec in records {
                let labels: String = rec
                    .author_labels
                    .iter()
                    .map(|&l| if l.is_positive() { positive } else { negative })
                    .collect();
                w.write_record([rec.paper_id.as_str(), labels.as_str()])
                    .map_err(csv_error)?;
            }
            w.flush().map_err(io_err)?;
        }
        DataFormat::Jsonl => {
            #[derive(Serialize)]
            struct Line<'a> {
                paper_id: &'a str,
                genders: Vec<&'a str>,
            }
            let mut w = std::io::BufWriter::new(writer);
            for rec in records {
                let line = Line {
                    paper_id: &rec.paper_id,
                    genders: rec
                        .author_labels
                        .iter()
                        .map(|&l| if l.is_positive() { positive } else { negative })
                        .collect(),
                };
                let text = serde_json::to_string(&line).map_err(|e| IngestError::Parse {
                    line: 0,
                    message: e.to_string(),
                })?;
                writeln!(w, "{text}").map_err(io_err)?;
            }
            w.flush().map_err(io_err)?;
        }
    }
    Ok(())
}

pub fn read_edge_list(
    path: impl AsRef<Path>,
    mapping: &LabelMapping,
) -> Result<Vec<UndirectedEdge>, IngestError> {
    parse_edge_list(open(path.as_ref())?, mapping)
}

/// Parses undirected edges from CSV with header `src,dst,label_src,label_dst`.
pub fn parse_edge_list<R: Read>(
    reader: R,
    mapping: &LabelMapping,
) -> Result<Vec<UndirectedEdge>, IngestError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers().map_err(csv_error)?.clone();
    if headers.iter().collect::<Vec<_>>() != ["src", "dst", "label_src", "label_dst"] {
        return Err(IngestError::Parse {
            line: 1,
            message: "expected header `src,dst,label_src,label_dst`".into(),
        });
    }
    let mut edges = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(csv_error)?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        let label = |token: &str| {
            mapping
                .label(token)
                .ok_or_else(|| IngestError::UnknownLabel {
                    context: format!("edge on line {line}"),
                    token: token.to_string(),
                })
        };
        if row[0].is_empty() || row[1].is_empty() {
            return Err(IngestError::Parse {
                line,
                message: "empty node id".into(),
            });
        }
        edges.push(UndirectedEdge::new(
            &row[0],
            label(&row[2])?,
            &row[1],
            label(&row[3])?,
        ));
    }
    Ok(edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use GenderLabel::{Negative as N, Positive as P};

    fn csv(text: &str) -> Result<Vec<RawRecord>, IngestError> {
        parse_records(text.as_bytes(), DataFormat::Csv)
    }

    #[test]
    fn csv_rows() {
        let recs = csv("paper_id,labels\np1,FFM\n").unwrap();
        assert_eq!(recs, vec![RawRecord::compact("p1", "FFM")]);
    }

    #[test]
    fn jsonl_rows() {
        let recs = parse_records(
            r#"{"paper_id":"p2","genders":["F","F"]}"#.as_bytes(),
            DataFormat::Jsonl,
        )
        .unwrap();
        assert_eq!(recs[0].paper_id, "p2");
        assert_eq!(
            recs[0].labels,
            LabelsField::Tokens(vec!["F".into(), "F".into()])
        );
    }

    #[test]
    fn empty_labels_is_a_parse_error() {
        match csv("paper_id,labels\np0,FM\np1,\n").unwrap_err() {
            IngestError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        let err = parse_records(
            r#"{"paper_id":"x","genders":[]}"#.as_bytes(),
            DataFormat::Jsonl,
        );
        assert!(matches!(err, Err(IngestError::Parse { line: 1, .. })));
    }

    #[test]
    fn malformed_input() {
        assert!(matches!(
            csv("id,genders\np1,FM\n"),
            Err(IngestError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            csv("paper_id,labels\np1,FM,extra\n"),
            Err(IngestError::Parse { .. })
        ));
        let bad_json = "{\"paper_id\":\"a\",\"genders\":[\"F\",\"M\"]}\nnot json\n";
        assert!(matches!(
            parse_records(bad_json.as_bytes(), DataFormat::Jsonl),
            Err(IngestError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let err = csv("paper_id,labels\np1,FM\np2,FF\np1,MM\n").unwrap_err();
        match err {
            IngestError::DuplicatePaperId { paper_id, line } => {
                assert_eq!(paper_id, "p1");
                assert_eq!(line, 4);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = read_records("/definitely/not/here.csv", DataFormat::Csv).unwrap_err();
        assert!(matches!(err, IngestError::Io { .. }));
        assert!(!err.is_validation());
    }

    #[test]
    fn single_author_papers_are_dropped() {
        let raw = [
            RawRecord::compact("p1", "FFM"),
            RawRecord::compact("p2", "F"),
        ];
        let (recs, diag) =
            to_paper_records(&raw, &LabelMapping::default(), &ValidationPolicy::default()).unwrap();
        assert_eq!(recs, vec![PaperRecord::new("p1", vec![P, P, N])]);
        assert_eq!(diag.dropped_single_author, 1);
        assert_eq!(diag.total_records, 2);
        assert_eq!(diag.papers_by_size.get(&3), Some(&1));
        assert_eq!(
            diag.label_totals,
            LabelTotals {
                positive: 2,
                negative: 1
            }
        );
    }

    #[test]
    fn unknown_labels_drop_the_paper() {
        let raw = [
            RawRecord::compact("p1", "FXM"),
            RawRecord::compact("p2", "FM"),
        ];
        let (recs, diag) =
            to_paper_records(&raw, &LabelMapping::default(), &ValidationPolicy::default()).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(diag.dropped_unknown_label, 1);
        assert_eq!(
            diag.total_records,
            diag.surviving_records + diag.dropped_single_author + diag.dropped_unknown_label
        );

        let strict = ValidationPolicy {
            on_unknown_label: UnknownLabelPolicy::RejectDataset,
        };
        let err = to_paper_records(&raw, &LabelMapping::default(), &strict).unwrap_err();
        assert!(matches!(err, IngestError::UnknownLabel { .. }));
        assert!(err.is_validation());
    }

    #[test]
    fn everything_dropped() {
        let raw = [RawRecord::compact("p1", "F"), RawRecord::compact("p2", "X")];
        let err = to_paper_records(&raw, &LabelMapping::default(), &ValidationPolicy::default())
            .unwrap_err();
        assert!(matches!(err, IngestError::AllRecordsDropped(2)));
    }

    #[test]
    fn one_label_dataset_survives_ingest() {
        let raw = [
            RawRecord::compact("p1", "MM"),
            RawRecord::compact("p2", "MM"),
        ];
        let (recs, _) =
            to_paper_records(&raw, &LabelMapping::default(), &ValidationPolicy::default()).unwrap();
        assert_eq!(recs.len(), 2);
    }

    #[test]
    fn mapping_parsing() {
        let m: LabelMapping = "W=+, M=-, N=negative".parse().unwrap();
        assert_eq!(m.label("W"), Some(P));
        assert_eq!(m.label("N"), Some(N));
        assert_eq!(m.label("F"), None);
        assert_eq!(m.token(N), Some("M"));
        assert!("F=?".parse::<LabelMapping>().is_err());
        assert!("F".parse::<LabelMapping>().is_err());
        assert!("F=+,F=-".parse::<LabelMapping>().is_err());
        let flipped: LabelMapping = "M=+,F=-".parse().unwrap();
        assert_eq!(flipped.label("F"), Some(N));
    }

    #[test]
    fn write_then_read_back() {
        let records = vec![
            PaperRecord::new("a", vec![P, N, N]),
            PaperRecord::new("b", vec![P, P]),
        ];
        let mapping = LabelMapping::default();
        for format in [DataFormat::Csv, DataFormat::Jsonl] {
            let mut buf = Vec::new();
            write_records(&records, format, &mapping, &mut buf).unwrap();
            let raw = parse_records(buf.as_slice(), format).unwrap();
            let (back, _) = to_paper_records(&raw, &mapping, &ValidationPolicy::default()).unwrap();
            assert_eq!(back, records);
        }
        let mut buf = Vec::new();
        write_records(&[], DataFormat::Csv, &mapping, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "paper_id,labels\n");
    }

    #[test]
    fn edge_lists() {
        let text = "src,dst,label_src,label_dst\n1,2,F,F\n1,4,F,M\n";
        let edges = parse_edge_list(text.as_bytes(), &LabelMapping::default()).unwrap();
        assert_eq!(edges.len(), 2);
        assert_eq!(edges[1], UndirectedEdge::new("1", P, "4", N));
        let bad = "src,dst,label_src,label_dst\n1,2,F,Q\n";
        assert!(matches!(
            parse_edge_list(bad.as_bytes(), &LabelMapping::default()),
            Err(IngestError::UnknownLabel { .. })
        ));
    }
}
