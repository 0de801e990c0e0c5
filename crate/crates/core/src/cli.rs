//! Command-line front end. Stages talk to each other only through files.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use log::warn;
use serde::Serialize;

use crate::annotate::{
    annotate_builtin, read_annotation_file, resolve_against, write_annotations, AdmissionMode, AnnotationFile,
    AnnotationMeta,
};
use crate::canon::{
    build_alias_table, load_blocklist, AliasTable, CanonParams, DEFAULT_MIN_CHILD_FREQ, DEFAULT_MIN_PARENT_FREQ,
};
use crate::contrast::{contrast, contrast_subgraph, ContrastParams};
use crate::corpus::{load_corpus, split_sentences, Corpus};
use crate::error::{Error, Result};
use crate::export::{export_contrast, export_graph, AttrFlags, ColorBy, ExportFormat, ExportSpec};
use crate::graph::{build_graph, filter_graph, load_graph, mention_counts, save_graph, EdgeMode, TOOL_VERSION};
use crate::metrics::{analyze, louvain, WeightSource};
use crate::sentiment::SentimentLexicon;

#[derive(Debug, Parser)]
#[command(name = "mediagraph", version, about = "Entity knowledge graphs from news corpora")]
#[command(args_override_self = true)]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads (0 = all cores). Outputs do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    /// key=value file supplying defaults for any flag.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate an article file and print a short census.
    IngestCheck(IngestCheckArgs),
    /// Produce or import the sentence annotation file.
    Annotate(AnnotateArgs),
    /// Build a knowledge graph from annotations.
    BuildGraph(BuildGraphArgs),
    /// Compute the graph summary and sentiment histograms.
    Metrics(MetricsArgs),
    /// Compare two graphs.
    Contrast(ContrastArgs),
    /// Convert a graph to an interchange format.
    Export(ExportArgs),
    /// Dump the alias table built from annotations.
    Aliases(AliasesArgs),
}

#[derive(Debug, Args)]
pub struct IngestCheckArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub source_label: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AnnotateMode {
    Builtin,
    Import,
}

#[derive(Debug, Args)]
pub struct AnnotateArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long, value_enum, default_value_t = AnnotateMode::Builtin)]
    pub mode: AnnotateMode,
    /// Replacement sentiment lexicon (builtin mode).
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    /// External annotation file to validate (import mode).
    #[arg(long)]
    pub annotations: Option<PathBuf>,
    /// Treat the title as sentence 0 (builtin mode).
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub include_title: bool,
    #[arg(long)]
    pub source_label: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EdgeModeArg {
    Auto,
    SentenceCooccurrence,
    RelationPair,
}

#[derive(Debug, Args)]
pub struct CanonArgs {
    #[arg(long, value_enum, default_value_t = AdmissionMode::Intersection)]
    pub admission: AdmissionMode,
    #[arg(long, default_value_t = DEFAULT_MIN_PARENT_FREQ)]
    pub min_parent_freq: u64,
    #[arg(long, default_value_t = DEFAULT_MIN_CHILD_FREQ)]
    pub min_child_freq: u64,
    /// File of normalized surfaces to drop, one per line.
    #[arg(long)]
    pub blocklist: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BuildGraphArgs {
    #[arg(long)]
    pub annotations: PathBuf,
    /// Corpus to check article ids against.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[arg(long)]
    pub source_label: Option<String>,
    #[arg(long, value_enum, default_value_t = EdgeModeArg::Auto)]
    pub edge_mode: EdgeModeArg,
    #[command(flatten)]
    pub canon: CanonArgs,
    #[arg(long, default_value_t = 1)]
    pub min_vertex_weight: u64,
    #[arg(long, default_value_t = 1)]
    pub min_edge_freq: u64,
    /// Also write the alias table as CSV.
    #[arg(long)]
    pub aliases_out: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value_t = WeightSource::Frequency)]
    pub weight_source: WeightSource,
    /// Directory for summary.json and the histogram CSVs.
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct ContrastArgs {
    #[arg(long)]
    pub graph_a: PathBuf,
    #[arg(long)]
    pub graph_b: PathBuf,
    #[arg(long, default_value_t = 3)]
    pub min_freq: u64,
    #[arg(long, default_value_t = 0.05)]
    pub min_abs_pol: f64,
    #[arg(long, default_value_t = 3)]
    pub min_degree: usize,
    #[arg(long, default_value_t = 20)]
    pub top_k: usize,
    /// Format of the contrast subgraph file.
    #[arg(long, value_enum, default_value_t = ExportFormat::Gexf)]
    pub format: ExportFormat,
    /// Defaults to `lean` for formats that carry colors.
    #[arg(long, value_enum)]
    pub color_by: Option<ColorBy>,
    #[arg(long)]
    pub stamp: bool,
    /// Directory for contrast.json and the subgraph file.
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value_t = ExportFormat::Gexf)]
    pub format: ExportFormat,
    #[arg(long, value_enum, default_value_t = ColorBy::None)]
    pub color_by: ColorBy,
    /// Attach Louvain community ids (implied by `--color-by community`).
    #[arg(long)]
    pub communities: bool,
    #[arg(long, value_enum, default_value_t = WeightSource::Frequency)]
    pub weight_source: WeightSource,
    /// Write only structure, no attributes.
    #[arg(long)]
    pub no_attrs: bool,
    /// Record today's date in the file header.
    #[arg(long)]
    pub stamp: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AliasesArgs {
    #[arg(long)]
    pub annotations: PathBuf,
    #[command(flatten)]
    pub canon: CanonArgs,
    #[arg(long)]
    pub out: PathBuf,
}

fn today() -> String {
    chrono::Local::now().format("%Y-%m-%d").to_string()
}

fn create(path: &Path) -> Result<BufWriter<fs::File>> {
    fs::File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Invariant(e.to_string()))?;
    text.push('\n');
    write_bytes(path, text.as_bytes())
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

#[derive(Serialize)]
struct IngestReport {
    source_label: String,
    articles: usize,
    body_sentences: usize,
    titled: usize,
    dated: usize,
    first_date: Option<String>,
    last_date: Option<String>,
}

fn ingest_check(args: &IngestCheckArgs) -> Result<()> {
    let corpus = load_corpus(&args.corpus, args.source_label.as_deref())?;
    let dates: BTreeSet<_> = corpus.articles.iter().filter_map(|a| a.published_date).collect();
    let report = IngestReport {
        source_label: corpus.source_label.clone(),
        articles: corpus.len(),
        body_sentences: corpus.articles.iter().map(|a| split_sentences(&a.body).len()).sum(),
        titled: corpus.articles.iter().filter(|a| !a.title.trim().is_empty()).count(),
        dated: corpus.articles.iter().filter(|a| a.published_date.is_some()).count(),
        first_date: dates.first().map(ToString::to_string),
        last_date: dates.last().map(ToString::to_string),
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&report).map_err(|e| Error::Invariant(e.to_string()))?
    );
    Ok(())
}

fn annotate(args: &AnnotateArgs) -> Result<()> {
    let corpus: Corpus = load_corpus(&args.corpus, args.source_label.as_deref())?;
    let file = match args.mode {
        AnnotateMode::Builtin => {
            if args.annotations.is_some() {
                return Err(Error::Input("--annotations only applies to --mode import".into()));
            }
            let lexicon = match &args.lexicon {
                Some(p) => SentimentLexicon::load(p)?,
                None => SentimentLexicon::bundled(),
            };
            AnnotationFile {
                meta: AnnotationMeta {
                    annotator: "builtin".into(),
                    relation_extraction: false,
                    source: Some(corpus.source_label.clone()),
                    include_title: Some(args.include_title),
                    tool_version: Some(TOOL_VERSION.into()),
                },
                annotations: annotate_builtin(&corpus, &lexicon, args.include_title),
            }
        }
        AnnotateMode::Import => {
            let path = args
                .annotations
                .as_ref()
                .ok_or_else(|| Error::Input("--mode import needs --annotations".into()))?;
            let mut file = read_annotation_file(path)?;
            resolve_against(&mut file, &corpus, &path.display().to_string())?;
            match &file.meta.source {
                Some(s) if *s != corpus.source_label => {
                    return Err(Error::Input(format!(
                        "{}: annotations are for source `{s}`, corpus is `{}`",
                        path.display(),
                        corpus.source_label
                    )));
                }
                _ => file.meta.source = Some(corpus.source_label.clone()),
            }
            file
        }
    };
    let mut out = create(&args.out)?;
    write_annotations(&file, &mut out)
        .and_then(|_| out.flush())
        .map_err(|e| Error::io(&args.out, e))
}

fn alias_table(file: &AnnotationFile, args: &CanonArgs) -> Result<(AliasTable, usize)> {
    let blocklist = match &args.blocklist {
        Some(p) => load_blocklist(p)?,
        None => BTreeSet::new(),
    };
    let params = CanonParams {
        min_parent_freq: args.min_parent_freq,
        min_child_freq: args.min_child_freq,
    };
    let counts = mention_counts(&file.annotations, args.admission);
    Ok((build_alias_table(&counts, params, &blocklist)?, blocklist.len()))
}

fn write_aliases(table: &AliasTable, path: &Path) -> Result<()> {
    let mut out = create(path)?;
    table.write_csv(&mut out)?;
    out.flush().map_err(|e| Error::io(path, e))
}

fn build(args: &BuildGraphArgs) -> Result<()> {
    let mut file = read_annotation_file(&args.annotations)?;
    if let Some(cp) = &args.corpus {
        let corpus = load_corpus(cp, None)?;
        resolve_against(&mut file, &corpus, &args.annotations.display().to_string())?;
    }
    let label = match (&args.source_label, &file.meta.source) {
        (Some(flag), Some(meta)) if flag != meta => {
            return Err(Error::Input(format!(
                "--source-label `{flag}` does not match annotation source `{meta}`"
            )));
        }
        (Some(l), _) | (None, Some(l)) => l.clone(),
        (None, None) => {
            return Err(Error::Input(format!(
                "{}: no source label in the header; pass --source-label",
                args.annotations.display()
            )));
        }
    };
    let (table, blocklist_size) = alias_table(&file, &args.canon)?;
    let edge_mode = match args.edge_mode {
        EdgeModeArg::Auto => EdgeMode::auto(&file.annotations),
        EdgeModeArg::SentenceCooccurrence => EdgeMode::SentenceCooccurrence,
        EdgeModeArg::RelationPair => EdgeMode::RelationPair,
    };
    let (mut g, warnings) = build_graph(&label, &file.annotations, &table, edge_mode, args.canon.admission);
    for w in &warnings {
        warn!("{w}");
    }
    g.build_config.blocklist_size = blocklist_size;
    g.build_config.include_title = file.meta.include_title;
    g.build_config.annotator = Some(file.meta.annotator.clone());
    let g = filter_graph(&g, args.min_vertex_weight, args.min_edge_freq)?;
    if g.vertex_count() == 0 && !file.annotations.is_empty() {
        warn!("graph is empty after canonicalization and filtering");
    }
    g.validate().map_err(|e| Error::Invariant(e.to_string()))?;
    save_graph(&g, &args.out)?;
    if let Some(p) = &args.aliases_out {
        write_aliases(&table, p)?;
    }
    Ok(())
}

fn metrics(args: &MetricsArgs, seed: u64) -> Result<()> {
    let g = load_graph(&args.graph)?;
    let analysis = analyze(&g, args.weight_source, seed)?;
    for f in &analysis.summary.flags {
        warn!("{}: {f}", args.graph.display());
    }
    ensure_dir(&args.out_dir)?;
    write_json(&args.out_dir.join("summary.json"), &analysis.summary)?;
    write_bytes(
        &args.out_dir.join("polarity_histogram.csv"),
        analysis.summary.polarity_histogram.to_csv().as_bytes(),
    )?;
    write_bytes(
        &args.out_dir.join("subjectivity_histogram.csv"),
        analysis.summary.subjectivity_histogram.to_csv().as_bytes(),
    )
}

fn run_contrast(args: &ContrastArgs) -> Result<()> {
    if !(args.min_abs_pol >= 0.0 && args.min_abs_pol <= 1.0) {
        return Err(Error::Input("--min-abs-pol must lie in [0, 1]".into()));
    }
    if args.min_freq < 1 || args.min_degree < 1 {
        return Err(Error::Input("--min-freq and --min-degree must be at least 1".into()));
    }
    let a = load_graph(&args.graph_a)?;
    let b = load_graph(&args.graph_b)?;
    let params = ContrastParams {
        min_freq: args.min_freq,
        min_abs_pol: args.min_abs_pol,
        min_degree: args.min_degree,
        top_k: args.top_k,
    };
    let report = contrast(&a, &b, params);
    if report.shared_vertices == 0 {
        warn!("graphs share no vertices; contrast is empty");
    } else if report.edge_items.is_empty() && report.vertex_items.is_empty() {
        warn!("no contrasting edges or vertices under the current thresholds");
    }
    let sub = contrast_subgraph(&report.edge_items, &report.vertex_items, &a, &b);
    let color_by = args.color_by.unwrap_or(match args.format {
        ExportFormat::Gexf | ExportFormat::Dot => ColorBy::Lean,
        _ => ColorBy::None,
    });
    let spec = ExportSpec {
        format: args.format,
        include_attrs: AttrFlags::default(),
        color_by,
        stamp: args.stamp.then(today),
    };
    ensure_dir(&args.out_dir)?;
    write_json(&args.out_dir.join("contrast.json"), &report)?;
    let name = format!("contrast_subgraph.{}", args.format.extension());
    export_contrast(&sub, &spec, &args.out_dir.join(name))
}

fn export(args: &ExportArgs, seed: u64) -> Result<()> {
    let g = load_graph(&args.graph)?;
    let partition = if args.communities || args.color_by == ColorBy::Community {
        Some(louvain(&g, args.weight_source, seed)?.partition)
    } else {
        None
    };
    let spec = ExportSpec {
        format: args.format,
        include_attrs: if args.no_attrs {
            AttrFlags::none()
        } else {
            AttrFlags::default()
        },
        color_by: args.color_by,
        stamp: args.stamp.then(today),
    };
    export_graph(&g, partition.as_ref(), &spec, &args.out)
}

fn aliases(args: &AliasesArgs) -> Result<()> {
    let file = read_annotation_file(&args.annotations)?;
    let (table, _) = alias_table(&file, &args.canon)?;
    write_aliases(&table, &args.out)
}

/// Runs a parsed command line on a pool of `cli.threads` workers.
pub fn execute(cli: &Cli) -> Result<()> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| Error::Input(format!("cannot start {} threads: {e}", cli.threads)))?;
    pool.install(|| match &cli.command {
        Command::IngestCheck(a) => ingest_check(a),
        Command::Annotate(a) => annotate(a),
        Command::BuildGraph(a) => build(a),
        Command::Metrics(a) => metrics(a, cli.seed),
        Command::Contrast(a) => run_contrast(a),
        Command::Export(a) => export(a, cli.seed),
        Command::Aliases(a) => aliases(a),
    })
}

// ---------------------------------------------------------------------------
// Config files

/// Parses `key = value` lines; `#` starts a comment line. Keys may use `-`
/// or `_`.
pub fn parse_config(text: &str, name: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::record(name, i + 1, format!("expected `key = value`, got `{line}`")))?;
        let key = k.trim().replace('_', "-");
        if key.is_empty() {
            return Err(Error::record(name, i + 1, "empty key"));
        }
        let value = v.trim().trim_matches('"').to_string();
        out.push((key, value));
    }
    Ok(out)
}

fn config_path(args: &[OsString]) -> Option<PathBuf> {
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--" {
            break;
        }
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

/// Splices config entries into `args` as flags placed before the user's own
/// flags, so the command line wins. Entries a subcommand does not know are
/// skipped; keys no subcommand knows are an error.
pub fn apply_config(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let entries = parse_config(&text, &path.display().to_string())?;

    let cmd = Cli::command();
    let subcommands: Vec<String> = cmd.get_subcommands().map(|s| s.get_name().to_string()).collect();
    let Some(sub_pos) = args
        .iter()
        .position(|a| subcommands.iter().any(|s| a.to_str() == Some(s.as_str())))
    else {
        return Ok(args);
    };
    let sub_name = args[sub_pos].to_string_lossy().to_string();
    let sub = cmd.find_subcommand(&sub_name).expect("listed subcommand");

    let lookup = |c: &clap::Command, key: &str| -> Option<bool> {
        c.get_arguments()
            .find(|a| a.get_long() == Some(key))
            .map(|a| a.get_action().takes_values())
    };
    let mut global = Vec::new();
    let mut local = Vec::new();
    for (key, value) in entries {
        if key == "config" {
            continue;
        }
        let (target, takes_value) = if let Some(t) = lookup(&cmd, &key) {
            (&mut global, t)
        } else if let Some(t) = lookup(sub, &key) {
            (&mut local, t)
        } else if cmd.get_subcommands().any(|s| lookup(s, &key).is_some()) {
            continue;
        } else {
            return Err(Error::Input(format!("{}: unknown key `{key}`", path.display())));
        };
        if takes_value {
            target.push(OsString::from(format!("--{key}")));
            target.push(OsString::from(value));
        } else {
            match value.as_str() {
                "true" | "yes" | "1" => target.push(OsString::from(format!("--{key}"))),
                "false" | "no" | "0" => {}
                other => {
                    return Err(Error::Input(format!(
                        "{}: `{key}` expects true or false, got `{other}`",
                        path.display()
                    )))
                }
            }
        }
    }
    let mut out = Vec::with_capacity(args.len() + global.len() + local.len());
    out.push(args[0].clone());
    out.extend(global);
    out.extend(args[1..=sub_pos].iter().cloned());
    out.extend(local);
    out.extend(args[sub_pos + 1..].iter().cloned());
    Ok(out)
}

fn report(e: &Error) -> i32 {
    eprintln!("error: {e}");
    if e.is_internal() {
        2
    } else {
        1
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code: 0 success, 1 input error, 2 internal error.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match apply_config(args) {
        Ok(a) => a,
        Err(e) => return report(&e),
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => report(&e),
    }
}

pub fn main() -> i32 {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    run_from(std::env::args_os())
}
