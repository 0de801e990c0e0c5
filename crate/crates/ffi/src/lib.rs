//! C ABI over the mediagraph pipeline.
//!
//! Graphs cross the boundary as opaque [`MgGraph`] handles. Every fallible
//! call returns an [`MgStatus`]; on failure the message is available from
//! [`mg_last_error`] on the same thread. Strings handed out by the library
//! must be released with [`mg_string_free`].

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use mediagraph::annotate::{annotate_builtin, AdmissionMode};
use mediagraph::canon::{build_alias_table, CanonParams};
use mediagraph::contrast::{contrast, contrast_subgraph, ContrastParams};
use mediagraph::corpus::load_corpus;
use mediagraph::export::{export_graph, ColorBy, ExportFormat, ExportSpec};
use mediagraph::graph::{
    build_graph, load_graph, mention_counts, read_graph_json, write_graph_json, EdgeMode, KnowledgeGraph,
};
use mediagraph::metrics::{analyze, louvain, WeightSource};
use mediagraph::sentiment::SentimentLexicon;
use mediagraph::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MgStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Io = 3,
    Parse = 4,
    InvalidInput = 5,
    Unsupported = 6,
    Internal = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MgFormat {
    Gexf = 0,
    Graphml = 1,
    Dot = 2,
    CsvEdges = 3,
    CsvVertices = 4,
    Json = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MgColor {
    None = 0,
    Community = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MgWeight {
    Frequency = 0,
    Unit = 1,
}

/// Thresholds for [`mg_contrast_json`]. Obtain defaults from
/// [`mg_contrast_params_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MgContrastParams {
    pub min_freq: u64,
    pub min_abs_pol: f64,
    pub min_degree: usize,
    pub top_k: usize,
}

/// Opaque graph handle.
pub struct MgGraph {
    inner: KnowledgeGraph,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(MgStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Io { .. } => MgStatus::Io,
            Error::Record { .. } => MgStatus::Parse,
            Error::Input(_) | Error::EmptyGraph | Error::EdgelessGraph | Error::IncompletePartition(_) => {
                MgStatus::InvalidInput
            }
            Error::UnsupportedExport(_) => MgStatus::Unsupported,
            Error::Invariant(_) => MgStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard<F>(f: F) -> MgStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MgStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(&format!("panic: {msg}"));
            MgStatus::Panic
        }
    }
}

fn null(name: &str) -> Failure {
    Failure(MgStatus::NullArgument, format!("`{name}` is null"))
}

unsafe fn read_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(MgStatus::InvalidUtf8, format!("`{name}` is not valid UTF-8")))
}

unsafe fn graph_ref<'a>(p: *const MgGraph, name: &str) -> Result<&'a KnowledgeGraph, Failure> {
    p.as_ref().map(|h| &h.inner).ok_or_else(|| null(name))
}

fn hand_out(s: String, out: *mut *mut c_char) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(MgStatus::Internal, "output contains NUL".into()))?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

fn store(g: KnowledgeGraph, out: *mut *mut MgGraph) {
    unsafe { *out = Box::into_raw(Box::new(MgGraph { inner: g })) };
}

/// Message of the last failed call on this thread, or NULL. The pointer stays
/// valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn mg_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Load a graph from its native JSON file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mg_graph_load_json(path: *const c_char, out: *mut *mut MgGraph) -> MgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let path = read_str(path, "path")?;
        store(load_graph(Path::new(path))?, out);
        Ok(())
    })
}

/// Parse a graph from native JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mg_graph_from_json(json: *const c_char, out: *mut *mut MgGraph) -> MgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let text = read_str(json, "json")?;
        store(read_graph_json(text, "<json>")?, out);
        Ok(())
    })
}

/// Run the builtin pipeline on a corpus file with default parameters:
/// builtin annotation with title, intersection admission, default alias
/// thresholds, sentence co-occurrence edges.
///
/// # Safety
/// `corpus_path` must be a NUL-terminated string, `source_label` NULL or a
/// NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mg_graph_build_builtin(
    corpus_path: *const c_char,
    source_label: *const c_char,
    out: *mut *mut MgGraph,
) -> MgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let path = read_str(corpus_path, "corpus_path")?;
        let label = if source_label.is_null() {
            None
        } else {
            Some(read_str(source_label, "source_label")?)
        };
        let corpus = load_corpus(Path::new(path), label)?;
        let anns = annotate_builtin(&corpus, &SentimentLexicon::bundled(), true);
        let admission = AdmissionMode::Intersection;
        let table = build_alias_table(
            &mention_counts(&anns, admission),
            CanonParams::default(),
            &BTreeSet::new(),
        )?;
        let (mut g, _) = build_graph(
            &corpus.source_label,
            &anns,
            &table,
            EdgeMode::SentenceCooccurrence,
            admission,
        );
        g.build_config.include_title = Some(true);
        g.build_config.annotator = Some("builtin".into());
        g.validate().map_err(|e| Failure(MgStatus::Internal, e.to_string()))?;
        store(g, out);
        Ok(())
    })
}

/// # Safety
/// `graph` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mg_graph_free(graph: *mut MgGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mg_graph_vertex_count(graph: *const MgGraph, out: *mut usize) -> MgStatus {
    guard(|| {
        let g = graph_ref(graph, "graph")?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = g.vertex_count();
        Ok(())
    })
}

/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mg_graph_edge_count(graph: *const MgGraph, out: *mut usize) -> MgStatus {
    guard(|| {
        let g = graph_ref(graph, "graph")?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = g.edge_count();
        Ok(())
    })
}

/// Serialize the graph to native JSON. Free the result with [`mg_string_free`].
///
/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mg_graph_to_json(graph: *const MgGraph, out: *mut *mut c_char) -> MgStatus {
    guard(|| {
        let g = graph_ref(graph, "graph")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let mut buf = Vec::new();
        write_graph_json(g, &mut buf)?;
        let s = String::from_utf8(buf).map_err(|e| Failure(MgStatus::Internal, e.to_string()))?;
        hand_out(s, out)
    })
}

/// Metrics summary as JSON, the same document `metrics` writes to
/// `summary.json`. Free the result with [`mg_string_free`].
///
/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mg_graph_summary_json(
    graph: *const MgGraph,
    weight: MgWeight,
    seed: u64,
    out: *mut *mut c_char,
) -> MgStatus {
    guard(|| {
        let g = graph_ref(graph, "graph")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let summary = analyze(g, weight_source(weight), seed)?.summary;
        let s = serde_json::to_string_pretty(&summary).map_err(|e| Failure(MgStatus::Internal, e.to_string()))?;
        hand_out(s, out)
    })
}

/// Write the graph to `path`. Community colors run Louvain with `seed` and
/// frequency weights.
///
/// # Safety
/// `graph` must be a live handle; `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn mg_graph_export(
    graph: *const MgGraph,
    path: *const c_char,
    format: MgFormat,
    color: MgColor,
    seed: u64,
) -> MgStatus {
    guard(|| {
        let g = graph_ref(graph, "graph")?;
        let path = read_str(path, "path")?;
        let mut spec = ExportSpec::new(export_format(format));
        let partition = match color {
            MgColor::None => None,
            MgColor::Community => {
                spec.color_by = ColorBy::Community;
                Some(louvain(g, WeightSource::Frequency, seed)?.partition)
            }
        };
        export_graph(g, partition.as_ref(), &spec, Path::new(path))?;
        Ok(())
    })
}

#[no_mangle]
pub extern "C" fn mg_contrast_params_default() -> MgContrastParams {
    let d = ContrastParams::default();
    MgContrastParams {
        min_freq: d.min_freq,
        min_abs_pol: d.min_abs_pol,
        min_degree: d.min_degree,
        top_k: d.top_k,
    }
}

/// Contrast report and subgraph of two graphs as one JSON object with keys
/// `report` and `subgraph`. Free the result with [`mg_string_free`].
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mg_contrast_json(
    a: *const MgGraph,
    b: *const MgGraph,
    params: MgContrastParams,
    out: *mut *mut c_char,
) -> MgStatus {
    guard(|| {
        let ga = graph_ref(a, "a")?;
        let gb = graph_ref(b, "b")?;
        if out.is_null() {
            return Err(null("out"));
        }
        if !(0.0..=1.0).contains(&params.min_abs_pol) {
            return Err(Failure(MgStatus::InvalidInput, "min_abs_pol must lie in [0, 1]".into()));
        }
        if params.min_freq < 1 || params.min_degree < 1 {
            return Err(Failure(
                MgStatus::InvalidInput,
                "min_freq and min_degree must be at least 1".into(),
            ));
        }
        let params = ContrastParams {
            min_freq: params.min_freq,
            min_abs_pol: params.min_abs_pol,
            min_degree: params.min_degree,
            top_k: params.top_k,
        };
        let report = contrast(ga, gb, params);
        let sub = contrast_subgraph(&report.edge_items, &report.vertex_items, ga, gb);
        let doc = serde_json::json!({ "report": report, "subgraph": sub });
        let s = serde_json::to_string_pretty(&doc).map_err(|e| Failure(MgStatus::Internal, e.to_string()))?;
        hand_out(s, out)
    })
}

fn weight_source(w: MgWeight) -> WeightSource {
    match w {
        MgWeight::Frequency => WeightSource::Frequency,
        MgWeight::Unit => WeightSource::Unit,
    }
}

fn export_format(f: MgFormat) -> ExportFormat {
    match f {
        MgFormat::Gexf => ExportFormat::Gexf,
        MgFormat::Graphml => ExportFormat::Graphml,
        MgFormat::Dot => ExportFormat::Dot,
        MgFormat::CsvEdges => ExportFormat::CsvEdges,
        MgFormat::CsvVertices => ExportFormat::CsvVertices,
        MgFormat::Json => ExportFormat::Json,
    }
}
