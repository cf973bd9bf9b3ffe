//! `homophily` command-line tool.
//!
//! Exit codes: 0 success, 1 I/O or parse failure, 2 validation failure,
//! 3 equivalence certification failure.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use homophily_core::{
    build_network, build_reciprocated_graph, generate, read_edge_list, read_records,
    to_paper_records, write_records, CliqueSizes, DataFormat, IngestError, LabelMapping,
    MetricError, ReportDocument, SynthConfig, SynthError, UnknownLabelPolicy, ValidationPolicy,
};

#[derive(Parser, Debug)]
#[command(
    name = "homophily",
    version,
    about = "Gender homophily metrics for co-authorship data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute alpha, r (unit and inverse-degree weights) and the equivalence check.
    Compute(InputArgs),
    /// Certify that inverse-degree r equals alpha; exits 3 if it does not.
    Check(InputArgs),
    /// Write a random disjoint-clique dataset.
    Synth(SynthArgs),
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Paper records (CSV `paper_id,labels` or JSONL).
    #[arg(required_unless_present = "edges", conflicts_with = "edges")]
    input: Option<PathBuf>,
    /// Undirected edge list CSV `src,dst,label_src,label_dst` instead of paper records.
    #[arg(long)]
    edges: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Token assignment, e.g. `F=+,M=-`.
    #[arg(long, default_value = "F=+,M=-")]
    mapping: String,
    #[arg(long, value_enum, default_value_t = OutputArg::Text)]
    out: OutputArg,
    /// Scale constants for the inverse-degree weighting.
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,3")]
    c_values: Vec<f64>,
    #[arg(long, value_enum, default_value_t = UnknownArg::RejectRecord)]
    on_unknown_label: UnknownArg,
}

#[derive(Args, Debug)]
struct SynthArgs {
    #[arg(long)]
    papers: usize,
    /// Fixed clique size.
    #[arg(long, conflicts_with = "size_dist")]
    size: Option<usize>,
    /// Uniform clique size range such as `2-8` (default 2-12).
    #[arg(long)]
    size_dist: Option<String>,
    /// Probability that an author carries the positive label.
    #[arg(long, default_value_t = 0.5)]
    pfrac: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    #[arg(long, default_value = "F=+,M=-")]
    mapping: String,
    /// Output file; standard output when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Jsonl,
}

impl From<FormatArg> for DataFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => DataFormat::Csv,
            FormatArg::Jsonl => DataFormat::Jsonl,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputArg {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum UnknownArg {
    RejectRecord,
    RejectDataset,
}

#[derive(Debug)]
enum Failure {
    Io(String),
    Validation(String),
    Certification,
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Validation(_) => 2,
            Failure::Certification => 3,
        }
    }
}

impl From<IngestError> for Failure {
    fn from(e: IngestError) -> Self {
        if e.is_validation() {
            Failure::Validation(e.to_string())
        } else {
            Failure::Io(e.to_string())
        }
    }
}

impl From<MetricError> for Failure {
    fn from(e: MetricError) -> Self {
        Failure::Validation(e.to_string())
    }
}

impl From<SynthError> for Failure {
    fn from(e: SynthError) -> Self {
        Failure::Validation(e.to_string())
    }
}

fn load_report(args: &InputArgs) -> Result<ReportDocument, Failure> {
    let mapping: LabelMapping = args.mapping.parse()?;
    if let Some(bad) = args.c_values.iter().find(|c| !(c.is_finite() && **c > 0.0)) {
        return Err(Failure::Validation(format!(
            "c values must be positive, got {bad}"
        )));
    }
    if args.c_values.is_empty() {
        return Err(Failure::Validation(
            "at least one c value is required".into(),
        ));
    }

    if let Some(path) = &args.edges {
        let edges = read_edge_list(path, &mapping)?;
        let graph = build_reciprocated_graph(&edges).map_err(IngestError::from)?;
        return Ok(ReportDocument::for_graph(&graph, &mapping, &args.c_values)?);
    }

    let path = args.input.as_ref().expect("clap requires input or --edges");
    let raw = read_records(path, args.format.into())?;
    let policy = ValidationPolicy {
        on_unknown_label: match args.on_unknown_label {
            UnknownArg::RejectRecord => UnknownLabelPolicy::RejectRecord,
            UnknownArg::RejectDataset => UnknownLabelPolicy::RejectDataset,
        },
    };
    let (records, diagnostics) = to_paper_records(&raw, &mapping, &policy)?;
    if diagnostics.dropped_single_author > 0 || diagnostics.dropped_unknown_label > 0 {
        eprintln!(
            "warning: dropped {} single-author and {} unknown-label papers",
            diagnostics.dropped_single_author, diagnostics.dropped_unknown_label
        );
    }
    // Surface anything the network builder drops as well.
    let (_, warnings) = build_network(&records).map_err(IngestError::from)?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    Ok(ReportDocument::for_records(
        &records,
        diagnostics,
        &mapping,
        &args.c_values,
    )?)
}

fn print(text: &str) -> Result<(), Failure> {
    let mut stdout = std::io::stdout().lock();
    stdout
        .write_all(text.as_bytes())
        .and_then(|_| stdout.flush())
        .map_err(|e| Failure::Io(e.to_string()))
}

fn compute(args: &InputArgs) -> Result<(), Failure> {
    let doc = load_report(args)?;
    match args.out {
        OutputArg::Json => print(&format!("{}\n", doc.to_json())),
        OutputArg::Text => print(&doc.to_text()),
    }
}

fn check(args: &InputArgs) -> Result<(), Failure> {
    let doc = load_report(args)?;
    let eq = &doc.equivalence;
    if let Some(reason) = &eq.undefined_reason {
        return Err(Failure::Validation(format!("undefined metric: {reason}")));
    }
    match args.out {
        OutputArg::Json => print(&format!("{}\n", eq.to_json()))?,
        OutputArg::Text => print(&eq.to_text())?,
    }
    if eq.certified {
        Ok(())
    } else {
        Err(Failure::Certification)
    }
}

fn synth(args: &SynthArgs) -> Result<(), Failure> {
    let sizes = match (&args.size, &args.size_dist) {
        (Some(k), _) => CliqueSizes::Fixed(*k),
        (None, Some(dist)) => dist.parse()?,
        (None, None) => CliqueSizes::default(),
    };
    let config = SynthConfig {
        num_papers: args.papers,
        sizes,
        positive_fraction: args.pfrac,
        seed: args.seed,
    };
    let records = generate(&config)?;
    let mapping: LabelMapping = args.mapping.parse()?;
    match &args.output {
        Some(path) => {
            let file = std::fs::File::create(path)
                .map_err(|e| Failure::Io(format!("cannot create `{}`: {e}", path.display())))?;
            write_records(&records, args.format.into(), &mapping, file)?;
        }
        None => write_records(
            &records,
            args.format.into(),
            &mapping,
            std::io::stdout().lock(),
        )?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Compute(args) => compute(args),
        Command::Check(args) => check(args),
        Command::Synth(args) => synth(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Io(msg) | Failure::Validation(msg) => eprintln!("error: {msg}"),
                Failure::Certification => {
                    eprintln!("error: inverse-degree r differs from alpha beyond tolerance")
                }
            }
            ExitCode::from(failure.exit_code())
        }
    }
}
