mod analyze;
mod config;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ilm_core::harness::{self, CorpusSpec, Format};
use ilm_core::io::{parse_edge_list, write_dot, write_edge_list, write_lineage_json};
use ilm_core::{generate, named, Error, Graph, Limits, Sequence};

use config::Config;

#[derive(Parser)]
#[command(name = "ilm", version, about = "Generate and verify iterated local model graphs")]
struct Cli {
    /// JSON file with caps, solver budgets and seeds.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build ILM_t(G, S) and write it as an edge list.
    Generate(GenerateArgs),
    /// Report metrics, parameters, spectrum and structure of a graph.
    Analyze(AnalyzeArgs),
    /// Run verification checks over a corpus.
    Verify(VerifyArgs),
    /// Write density, clustering and gap series against t as CSV.
    ExportPlots(ExportArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Graph name (K4, C5, P4, K_{1,3}, 2K1, K2+K3, Petersen, G(n,p,seed)) or edge-list file.
    #[arg(long)]
    graph: String,
    /// Sequence such as 0101, (01)* or 1(100)*.
    #[arg(long)]
    sequence: String,
    #[arg(long)]
    steps: usize,
    /// Edge-list destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-step CSV: step,bit,n,e,predicted_e.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Lineage sidecar (JSON).
    #[arg(long)]
    lineage: Option<PathBuf>,
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Edge-list file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Lineage sidecar; enables per-step reports.
    #[arg(long)]
    lineage: Option<PathBuf>,
    #[arg(long)]
    metrics: bool,
    #[arg(long)]
    params: bool,
    #[arg(long)]
    spectral: bool,
    #[arg(long)]
    structure: bool,
    /// JSON destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Corpus JSON file, or `builtin`.
    #[arg(long, default_value = "builtin")]
    corpus: String,
    /// Comma-separated check ids, or `all`.
    #[arg(long, default_value = "all")]
    theorems: String,
    /// Directory for report.json, report.csv, report.txt and corpus.json.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Format printed to stdout.
    #[arg(long, default_value = "text")]
    format: String,
}

#[derive(Args)]
struct ExportArgs {
    /// Directory written by `verify --out`; its corpus.json selects the series.
    #[arg(long = "in")]
    input: PathBuf,
    /// Destination directory; `<in>/plots` when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Error(Error),
    Checks(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks(n)) => {
            eprintln!("{n} check(s) failed");
            ExitCode::from(1)
        }
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_resource_limit() { 3 } else { 2 })
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let config = match &cli.config {
        Some(path) => Config::from_json(&read(path)?)?,
        None => Config::default(),
    };
    match cli.command {
        Command::Generate(a) => generate_cmd(a),
        Command::Analyze(a) => analyze_cmd(a, &config),
        Command::Verify(a) => verify_cmd(a, &config),
        Command::ExportPlots(a) => export_cmd(a, &config),
    }
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, bytes: impl AsRef<[u8]>) -> Result<(), Error> {
    fs::write(path, bytes).map_err(|e| Error::Usage(format!("cannot write {}: {e}", path.display())))
}

fn emit(out: Option<&Path>, bytes: impl AsRef<[u8]>) -> Result<(), Error> {
    match out {
        Some(p) => write(p, bytes),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(bytes.as_ref()).map_err(Error::Io)
        }
    }
}

/// A path to an existing file is read as an edge list; anything else is a
/// graph name.
fn load_seed(spec: &str) -> Result<Graph, Error> {
    let p = Path::new(spec);
    if p.is_file() {
        parse_edge_list(&read(p)?)
    } else {
        named::parse(spec)
    }
}

fn generate_cmd(a: GenerateArgs) -> Result<(), Failure> {
    let g0 = load_seed(&a.graph)?;
    let seq = Sequence::parse(&a.sequence)?;
    let (g, trace) = generate(&g0, &seq, a.steps, &Limits::from_env())?;
    emit(a.out.as_deref(), write_edge_list(&g))?;
    if let Some(p) = &a.trace {
        write(p, trace.to_csv())?;
    }
    if let Some(p) = &a.lineage {
        write(p, write_lineage_json(&g)?)?;
    }
    if let Some(p) = &a.dot {
        write(p, write_dot(&g))?;
    }
    Ok(())
}

fn analyze_cmd(a: AnalyzeArgs, config: &Config) -> Result<(), Failure> {
    let g = parse_edge_list(&read(&a.input)?)?;
    let limit = Limits::from_env().max_vertices;
    if g.n() > limit {
        return Err(Error::Capacity {
            what: "graph order",
            requested: g.n(),
            limit,
        }
        .into());
    }
    let g = match &a.lineage {
        Some(p) => g.with_lineage(ilm_core::io::parse_lineage_json(&read(p)?)?)?,
        None => g,
    };
    let all = !(a.metrics || a.params || a.spectral || a.structure);
    let sections = analyze::Sections {
        metrics: all || a.metrics,
        params: all || a.params,
        spectral: all || a.spectral,
        structure: all || a.structure,
    };
    let value = analyze::analyze(&g, &sections, &config.caps())?;
    let mut text = serde_json::to_string_pretty(&value).map_err(Error::from)?;
    text.push('\n');
    emit(a.out.as_deref(), text)?;
    Ok(())
}

fn load_corpus(spec: &str, config: &Config) -> Result<CorpusSpec, Error> {
    let corpus = if spec == "builtin" {
        CorpusSpec::builtin()
    } else {
        CorpusSpec::from_json(&read(Path::new(spec))?)?
    };
    let corpus = config.apply(corpus);
    corpus.validate()?;
    Ok(corpus)
}

fn verify_cmd(a: VerifyArgs, config: &Config) -> Result<(), Failure> {
    let format: Format = a.format.parse()?;
    let corpus = load_corpus(&a.corpus, config)?;
    let ids = harness::resolve_theorems(&a.theorems)?;
    let reports = harness::run_campaign(&corpus, &ids)?;
    if let Some(dir) = &a.out {
        fs::create_dir_all(dir).map_err(|e| Error::Usage(format!("cannot create {}: {e}", dir.display())))?;
        for (name, fmt) in [("report.json", Format::Json), ("report.csv", Format::Csv), ("report.txt", Format::Text)] {
            write(&dir.join(name), harness::export(&reports, fmt)?)?;
        }
        let mut spec = serde_json::to_string_pretty(&corpus).map_err(Error::from)?;
        spec.push('\n');
        write(&dir.join("corpus.json"), spec)?;
    }
    emit(None, harness::export(&reports, format)?)?;
    match harness::summary(&reports).fail {
        0 => Ok(()),
        n => Err(Failure::Checks(n)),
    }
}

fn export_cmd(a: ExportArgs, config: &Config) -> Result<(), Failure> {
    if !a.input.is_dir() {
        return Err(Error::Usage(format!("{} is not a directory", a.input.display())).into());
    }
    let spec_path = a.input.join("corpus.json");
    let corpus = if spec_path.is_file() {
        load_corpus(&spec_path.to_string_lossy(), config)?
    } else {
        eprintln!("no corpus.json in {}; using the builtin corpus", a.input.display());
        load_corpus("builtin", config)?
    };
    let dir = a.out.unwrap_or_else(|| a.input.join("plots"));
    fs::create_dir_all(&dir).map_err(|e| Error::Usage(format!("cannot create {}: {e}", dir.display())))?;
    for (name, csv) in harness::plot_series(&corpus)? {
        write(&dir.join(&name), csv)?;
        println!("{}", dir.join(&name).display());
    }
    Ok(())
}
