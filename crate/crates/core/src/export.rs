//! Writers for graph interchange formats.
//!
//! Graphs and contrast subgraphs are first flattened into a [`Table`] of typed
//! node/edge attributes; each writer renders a table. Elements come out in a
//! fixed order (vertices by name, edges by endpoint pair) so identical inputs
//! give identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::contrast::{ContrastSubgraph, Lean};
use crate::error::{Error, Result};
use crate::graph::{write_graph_json, KnowledgeGraph, TOOL_VERSION};
use crate::metrics::Partition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ExportFormat {
    Gexf,
    Graphml,
    Dot,
    CsvEdges,
    CsvVertices,
    Json,
}

impl ExportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ExportFormat::Gexf => "gexf",
            ExportFormat::Graphml => "graphml",
            ExportFormat::Dot => "dot",
            ExportFormat::CsvEdges | ExportFormat::CsvVertices => "csv",
            ExportFormat::Json => "json",
        }
    }

    /// Name as spelled on the command line.
    pub fn name(self) -> &'static str {
        match self {
            ExportFormat::Gexf => "gexf",
            ExportFormat::Graphml => "graphml",
            ExportFormat::Dot => "dot",
            ExportFormat::CsvEdges => "csv-edges",
            ExportFormat::CsvVertices => "csv-vertices",
            ExportFormat::Json => "json",
        }
    }

    fn supports_color(self) -> bool {
        matches!(self, ExportFormat::Gexf | ExportFormat::Dot)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ColorBy {
    Community,
    Lean,
    #[default]
    None,
}

/// Which attribute groups to carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttrFlags {
    pub weights: bool,
    pub sentiment: bool,
    pub community: bool,
}

impl Default for AttrFlags {
    fn default() -> Self {
        Self {
            weights: true,
            sentiment: true,
            community: true,
        }
    }
}

impl AttrFlags {
    pub fn none() -> Self {
        Self {
            weights: false,
            sentiment: false,
            community: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExportSpec {
    pub format: ExportFormat,
    pub include_attrs: AttrFlags,
    pub color_by: ColorBy,
    /// Date written into the file header; absent for byte-stable output.
    pub stamp: Option<String>,
}

impl ExportSpec {
    pub fn new(format: ExportFormat) -> Self {
        Self {
            format,
            include_attrs: AttrFlags::default(),
            color_by: ColorBy::None,
            stamp: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttrType {
    Long,
    Double,
    Bool,
    Str,
}

impl AttrType {
    fn gexf(self) -> &'static str {
        match self {
            AttrType::Long => "long",
            AttrType::Double => "double",
            AttrType::Bool => "boolean",
            AttrType::Str => "string",
        }
    }

    fn graphml(self) -> &'static str {
        match self {
            AttrType::Long => "long",
            AttrType::Double => "double",
            AttrType::Bool => "boolean",
            AttrType::Str => "string",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AttrValue {
    Long(i64),
    Double(f64),
    Bool(bool),
    Str(String),
}

impl std::fmt::Display for AttrValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AttrValue::Long(v) => write!(f, "{v}"),
            AttrValue::Double(v) => write!(f, "{v}"),
            AttrValue::Bool(v) => write!(f, "{v}"),
            AttrValue::Str(v) => f.write_str(v),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableNode {
    pub id: String,
    pub values: Vec<Option<AttrValue>>,
    pub color: Option<[u8; 3]>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableEdge {
    pub source: String,
    pub target: String,
    pub weight: Option<f64>,
    pub values: Vec<Option<AttrValue>>,
}

/// Format-neutral flattened graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub title: String,
    pub node_attrs: Vec<(&'static str, AttrType)>,
    pub edge_attrs: Vec<(&'static str, AttrType)>,
    pub nodes: Vec<TableNode>,
    pub edges: Vec<TableEdge>,
}

const PALETTE: [[u8; 3]; 12] = [
    [31, 119, 180],
    [255, 127, 14],
    [44, 160, 44],
    [214, 39, 40],
    [148, 103, 189],
    [140, 86, 75],
    [227, 119, 194],
    [127, 127, 127],
    [188, 189, 34],
    [23, 190, 207],
    [174, 199, 232],
    [255, 187, 120],
];
const LEAN_A: [u8; 3] = [214, 39, 40];
const LEAN_B: [u8; 3] = [31, 119, 180];
const NEUTRAL: [u8; 3] = [170, 170, 170];

fn check_color(spec: &ExportSpec) -> Result<()> {
    if spec.color_by != ColorBy::None && !spec.format.supports_color() {
        return Err(Error::UnsupportedExport(format!(
            "{} output cannot carry colors (color_by {:?})",
            spec.format.name(),
            spec.color_by
        )));
    }
    Ok(())
}

/// Flattens a knowledge graph, with community ids when a partition is given.
pub fn graph_table(g: &KnowledgeGraph, partition: Option<&Partition>, spec: &ExportSpec) -> Result<Table> {
    check_color(spec)?;
    match spec.color_by {
        ColorBy::Lean => {
            return Err(Error::UnsupportedExport("lean colors need a contrast subgraph".into()));
        }
        ColorBy::Community if partition.is_none() => {
            return Err(Error::UnsupportedExport("community colors need a partition".into()));
        }
        _ => {}
    }
    let flags = spec.include_attrs;
    let with_community = flags.community && partition.is_some();
    let mut node_attrs = Vec::new();
    if flags.weights {
        node_attrs.push(("weight", AttrType::Long));
    }
    if with_community {
        node_attrs.push(("community", AttrType::Long));
    }
    let mut edge_attrs = Vec::new();
    if flags.weights {
        edge_attrs.push(("frequency", AttrType::Long));
    }
    if flags.sentiment {
        edge_attrs.push(("polarity", AttrType::Double));
        edge_attrs.push(("subjectivity", AttrType::Double));
    }

    let mut nodes = Vec::with_capacity(g.vertex_count());
    for (v, &w) in &g.vertices {
        let community = match partition {
            Some(p) => Some(p.community_of(v).ok_or_else(|| Error::IncompletePartition(v.clone()))?),
            None => None,
        };
        let mut values = Vec::new();
        if flags.weights {
            values.push(Some(AttrValue::Long(w as i64)));
        }
        if with_community {
            values.push(community.map(|c| AttrValue::Long(c as i64)));
        }
        let color = match spec.color_by {
            ColorBy::Community => community.map(|c| PALETTE[c % PALETTE.len()]),
            _ => None,
        };
        nodes.push(TableNode {
            id: v.clone(),
            values,
            color,
        });
    }
    let edges = g
        .edges
        .iter()
        .map(|(k, e)| {
            let mut values = Vec::new();
            if flags.weights {
                values.push(Some(AttrValue::Long(e.frequency as i64)));
            }
            if flags.sentiment {
                values.push(Some(AttrValue::Double(e.polarity)));
                values.push(Some(AttrValue::Double(e.subjectivity)));
            }
            TableEdge {
                source: k.first().to_string(),
                target: k.second().to_string(),
                weight: flags.weights.then_some(e.frequency as f64),
                values,
            }
        })
        .collect();
    Ok(Table {
        title: g.source_label.clone(),
        node_attrs,
        edge_attrs,
        nodes,
        edges,
    })
}

/// Flattens a contrast subgraph; every element carries both sources' values.
pub fn contrast_table(sub: &ContrastSubgraph, spec: &ExportSpec) -> Result<Table> {
    check_color(spec)?;
    if spec.color_by == ColorBy::Community {
        return Err(Error::UnsupportedExport(
            "contrast subgraphs have no communities".into(),
        ));
    }
    let flags = spec.include_attrs;
    let mut node_attrs = Vec::new();
    if flags.weights {
        node_attrs.push(("weight_a", AttrType::Long));
        node_attrs.push(("weight_b", AttrType::Long));
    }
    if flags.sentiment {
        node_attrs.push(("contrast_score", AttrType::Double));
        node_attrs.push(("lean", AttrType::Str));
    }
    let mut edge_attrs = Vec::new();
    if flags.weights {
        edge_attrs.push(("frequency_a", AttrType::Long));
        edge_attrs.push(("frequency_b", AttrType::Long));
    }
    if flags.sentiment {
        edge_attrs.extend([
            ("polarity_a", AttrType::Double),
            ("polarity_b", AttrType::Double),
            ("subjectivity_a", AttrType::Double),
            ("subjectivity_b", AttrType::Double),
        ]);
    }
    edge_attrs.push(("contrasting", AttrType::Bool));

    let lean_label = |l: Lean| match l {
        Lean::A => sub.source_a.clone(),
        Lean::B => sub.source_b.clone(),
    };
    let nodes = sub
        .nodes
        .iter()
        .map(|n| {
            let mut values = Vec::new();
            if flags.weights {
                values.push(n.weight_a.map(|w| AttrValue::Long(w as i64)));
                values.push(n.weight_b.map(|w| AttrValue::Long(w as i64)));
            }
            if flags.sentiment {
                values.push(n.contrast_score.map(AttrValue::Double));
                values.push(n.lean.map(|l| AttrValue::Str(lean_label(l))));
            }
            let color = (spec.color_by == ColorBy::Lean).then_some(match n.lean {
                Some(Lean::A) => LEAN_A,
                Some(Lean::B) => LEAN_B,
                None => NEUTRAL,
            });
            TableNode {
                id: n.id.clone(),
                values,
                color,
            }
        })
        .collect();
    let edges = sub
        .links
        .iter()
        .map(|l| {
            let mut values = Vec::new();
            if flags.weights {
                values.push(l.a.map(|e| AttrValue::Long(e.frequency as i64)));
                values.push(l.b.map(|e| AttrValue::Long(e.frequency as i64)));
            }
            if flags.sentiment {
                values.push(l.a.map(|e| AttrValue::Double(e.polarity)));
                values.push(l.b.map(|e| AttrValue::Double(e.polarity)));
                values.push(l.a.map(|e| AttrValue::Double(e.subjectivity)));
                values.push(l.b.map(|e| AttrValue::Double(e.subjectivity)));
            }
            values.push(Some(AttrValue::Bool(l.contrasting)));
            TableEdge {
                source: l.source.clone(),
                target: l.target.clone(),
                weight: None,
                values,
            }
        })
        .collect();
    Ok(Table {
        title: format!("{} vs {}", sub.source_a, sub.source_b),
        node_attrs,
        edge_attrs,
        nodes,
        edges,
    })
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c if (c as u32) < 0x20 && !matches!(c, '\t' | '\n' | '\r') => {}
            c => out.push(c),
        }
    }
    out
}

fn node_index(table: &Table) -> std::collections::HashMap<&str, usize> {
    table
        .nodes
        .iter()
        .enumerate()
        .map(|(i, n)| (n.id.as_str(), i))
        .collect()
}

pub fn render_gexf(table: &Table, stamp: Option<&str>) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(
        "<gexf xmlns=\"http://gexf.net/1.3\" xmlns:viz=\"http://gexf.net/1.3/viz\" \
         xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" \
         xsi:schemaLocation=\"http://gexf.net/1.3 http://gexf.net/1.3/gexf.xsd\" version=\"1.3\">\n",
    );
    match stamp {
        Some(d) => {
            let _ = writeln!(out, "  <meta lastmodifieddate=\"{}\">", xml_escape(d));
        }
        None => out.push_str("  <meta>\n"),
    }
    let _ = writeln!(out, "    <creator>mediagraph {TOOL_VERSION}</creator>");
    let _ = writeln!(out, "    <description>{}</description>", xml_escape(&table.title));
    out.push_str("  </meta>\n");
    out.push_str("  <graph defaultedgetype=\"undirected\" mode=\"static\">\n");
    for (class, attrs) in [("node", &table.node_attrs), ("edge", &table.edge_attrs)] {
        if attrs.is_empty() {
            continue;
        }
        let _ = writeln!(out, "    <attributes class=\"{class}\">");
        for (i, (name, ty)) in attrs.iter().enumerate() {
            let _ = writeln!(
                out,
                "      <attribute id=\"{i}\" title=\"{name}\" type=\"{}\"/>",
                ty.gexf()
            );
        }
        out.push_str("    </attributes>\n");
    }
    let attvalues = |out: &mut String, values: &[Option<AttrValue>]| {
        if values.iter().all(Option::is_none) {
            return;
        }
        out.push_str("        <attvalues>\n");
        for (i, v) in values.iter().enumerate() {
            if let Some(v) = v {
                let _ = writeln!(
                    out,
                    "          <attvalue for=\"{i}\" value=\"{}\"/>",
                    xml_escape(&v.to_string())
                );
            }
        }
        out.push_str("        </attvalues>\n");
    };
    let idx = node_index(table);
    out.push_str("    <nodes>\n");
    for (i, n) in table.nodes.iter().enumerate() {
        let _ = writeln!(out, "      <node id=\"n{i}\" label=\"{}\">", xml_escape(&n.id));
        attvalues(&mut out, &n.values);
        if let Some([r, g, b]) = n.color {
            let _ = writeln!(out, "        <viz:color r=\"{r}\" g=\"{g}\" b=\"{b}\"/>");
        }
        out.push_str("      </node>\n");
    }
    out.push_str("    </nodes>\n    <edges>\n");
    for (i, e) in table.edges.iter().enumerate() {
        let _ = write!(
            out,
            "      <edge id=\"e{i}\" source=\"n{}\" target=\"n{}\"",
            idx[e.source.as_str()],
            idx[e.target.as_str()]
        );
        if let Some(w) = e.weight {
            let _ = write!(out, " weight=\"{w}\"");
        }
        out.push_str(">\n");
        attvalues(&mut out, &e.values);
        out.push_str("      </edge>\n");
    }
    out.push_str("    </edges>\n  </graph>\n</gexf>\n");
    out
}

pub fn render_graphml(table: &Table, stamp: Option<&str>) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    if let Some(d) = stamp {
        let _ = writeln!(out, "<!-- generated {} -->", xml_escape(d).replace("--", "- -"));
    }
    out.push_str(
        "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" \
         xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" \
         xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n",
    );
    out.push_str("  <key id=\"d_label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n");
    for (name, ty) in &table.node_attrs {
        let _ = writeln!(
            out,
            "  <key id=\"v_{name}\" for=\"node\" attr.name=\"{name}\" attr.type=\"{}\"/>",
            ty.graphml()
        );
    }
    for (name, ty) in &table.edge_attrs {
        let _ = writeln!(
            out,
            "  <key id=\"e_{name}\" for=\"edge\" attr.name=\"{name}\" attr.type=\"{}\"/>",
            ty.graphml()
        );
    }
    let _ = writeln!(
        out,
        "  <graph id=\"{}\" edgedefault=\"undirected\">",
        xml_escape(&table.title)
    );
    let idx = node_index(table);
    for (i, n) in table.nodes.iter().enumerate() {
        let _ = writeln!(out, "    <node id=\"n{i}\">");
        let _ = writeln!(out, "      <data key=\"d_label\">{}</data>", xml_escape(&n.id));
        for ((name, _), v) in table.node_attrs.iter().zip(&n.values) {
            if let Some(v) = v {
                let _ = writeln!(
                    out,
                    "      <data key=\"v_{name}\">{}</data>",
                    xml_escape(&v.to_string())
                );
            }
        }
        out.push_str("    </node>\n");
    }
    for (i, e) in table.edges.iter().enumerate() {
        let _ = writeln!(
            out,
            "    <edge id=\"e{i}\" source=\"n{}\" target=\"n{}\">",
            idx[e.source.as_str()],
            idx[e.target.as_str()]
        );
        for ((name, _), v) in table.edge_attrs.iter().zip(&e.values) {
            if let Some(v) = v {
                let _ = writeln!(
                    out,
                    "      <data key=\"e_{name}\">{}</data>",
                    xml_escape(&v.to_string())
                );
            }
        }
        out.push_str("    </edge>\n");
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

fn dot_id(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' | '\r' => out.push(' '),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn dot_value(v: &AttrValue) -> String {
    match v {
        AttrValue::Str(s) => dot_id(s),
        other => other.to_string(),
    }
}

pub fn render_dot(table: &Table, stamp: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(d) = stamp {
        let _ = writeln!(out, "// generated {d}");
    }
    let _ = writeln!(out, "graph {} {{", dot_id(&table.title));
    for n in &table.nodes {
        let mut attrs: Vec<String> = table
            .node_attrs
            .iter()
            .zip(&n.values)
            .filter_map(|((name, _), v)| v.as_ref().map(|v| format!("{name}={}", dot_value(v))))
            .collect();
        if let Some([r, g, b]) = n.color {
            attrs.push("style=filled".to_string());
            attrs.push(format!("fillcolor=\"#{r:02x}{g:02x}{b:02x}\""));
        }
        if attrs.is_empty() {
            let _ = writeln!(out, "  {};", dot_id(&n.id));
        } else {
            let _ = writeln!(out, "  {} [{}];", dot_id(&n.id), attrs.join(", "));
        }
    }
    for e in &table.edges {
        let attrs: Vec<String> = table
            .edge_attrs
            .iter()
            .zip(&e.values)
            .filter_map(|((name, _), v)| v.as_ref().map(|v| format!("{name}={}", dot_value(v))))
            .collect();
        if attrs.is_empty() {
            let _ = writeln!(out, "  {} -- {};", dot_id(&e.source), dot_id(&e.target));
        } else {
            let _ = writeln!(
                out,
                "  {} -- {} [{}];",
                dot_id(&e.source),
                dot_id(&e.target),
                attrs.join(", ")
            );
        }
    }
    out.push_str("}\n");
    out
}

fn csv_bytes(header: Vec<String>, rows: Vec<Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let to_err = |e: csv::Error| Error::Input(format!("csv: {e}"));
    w.write_record(&header).map_err(to_err)?;
    for r in rows {
        w.write_record(&r).map_err(to_err)?;
    }
    w.into_inner().map_err(|e| Error::Input(format!("csv: {e}")))
}

fn cell(v: &Option<AttrValue>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

pub fn render_csv_edges(table: &Table) -> Result<Vec<u8>> {
    let header = ["source", "target"]
        .into_iter()
        .chain(table.edge_attrs.iter().map(|(n, _)| *n))
        .map(str::to_string)
        .collect();
    let rows = table
        .edges
        .iter()
        .map(|e| {
            [e.source.clone(), e.target.clone()]
                .into_iter()
                .chain(e.values.iter().map(cell))
                .collect()
        })
        .collect();
    csv_bytes(header, rows)
}

pub fn render_csv_vertices(table: &Table) -> Result<Vec<u8>> {
    let header = std::iter::once("id")
        .chain(table.node_attrs.iter().map(|(n, _)| *n))
        .map(str::to_string)
        .collect();
    let rows = table
        .nodes
        .iter()
        .map(|n| std::iter::once(n.id.clone()).chain(n.values.iter().map(cell)).collect())
        .collect();
    csv_bytes(header, rows)
}

fn render_table(table: &Table, spec: &ExportSpec) -> Result<Vec<u8>> {
    let stamp = spec.stamp.as_deref();
    Ok(match spec.format {
        ExportFormat::Gexf => render_gexf(table, stamp).into_bytes(),
        ExportFormat::Graphml => render_graphml(table, stamp).into_bytes(),
        ExportFormat::Dot => render_dot(table, stamp).into_bytes(),
        ExportFormat::CsvEdges => render_csv_edges(table)?,
        ExportFormat::CsvVertices => render_csv_vertices(table)?,
        ExportFormat::Json => unreachable!("json is handled by the callers"),
    })
}

/// Renders a knowledge graph in the requested format.
pub fn render_graph(g: &KnowledgeGraph, partition: Option<&Partition>, spec: &ExportSpec) -> Result<Vec<u8>> {
    if spec.format == ExportFormat::Json {
        if spec.color_by != ColorBy::None {
            return Err(Error::UnsupportedExport(
                "the native JSON format carries no colors".into(),
            ));
        }
        let mut buf = Vec::new();
        write_graph_json(g, &mut buf)?;
        return Ok(buf);
    }
    render_table(&graph_table(g, partition, spec)?, spec)
}

/// Renders a contrast subgraph; JSON output is the subgraph payload itself.
pub fn render_contrast(sub: &ContrastSubgraph, spec: &ExportSpec) -> Result<Vec<u8>> {
    if spec.format == ExportFormat::Json {
        if spec.color_by != ColorBy::None {
            return Err(Error::UnsupportedExport("JSON output carries no colors".into()));
        }
        let mut buf = serde_json::to_vec_pretty(sub).map_err(|e| Error::Input(e.to_string()))?;
        buf.push(b'\n');
        return Ok(buf);
    }
    render_table(&contrast_table(sub, spec)?, spec)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn export_graph(g: &KnowledgeGraph, partition: Option<&Partition>, spec: &ExportSpec, path: &Path) -> Result<()> {
    write_file(path, &render_graph(g, partition, spec)?)
}

pub fn export_contrast(sub: &ContrastSubgraph, spec: &ExportSpec, path: &Path) -> Result<()> {
    write_file(path, &render_contrast(sub, spec)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annotate::AdmissionMode;
    use crate::canon::CanonParams;
    use crate::graph::{read_graph_json, BuildConfig, EdgeAttrs, EdgeMode};

    fn tiny() -> KnowledgeGraph {
        let cfg = BuildConfig::new(
            EdgeMode::SentenceCooccurrence,
            AdmissionMode::Intersection,
            CanonParams::default(),
        );
        let mut g = KnowledgeGraph::empty("BN", cfg);
        g.add_edge(
            "bank of \"england\"",
            "r&d <corp>",
            EdgeAttrs {
                frequency: 2,
                polarity: -0.25,
                subjectivity: 0.5,
            },
        );
        g
    }

    #[test]
    fn gexf_is_well_formed() {
        let bytes = render_graph(&tiny(), None, &ExportSpec::new(ExportFormat::Gexf)).unwrap();
        let text = String::from_utf8(bytes).unwrap();
        let doc = roxmltree::Document::parse(&text).unwrap();
        let root = doc.root_element();
        assert_eq!(root.tag_name().name(), "gexf");
        assert_eq!(root.attribute("version"), Some("1.3"));
        let nodes: Vec<_> = doc.descendants().filter(|n| n.has_tag_name("node")).collect();
        assert_eq!(nodes.len(), 2);
        assert_eq!(nodes[0].attribute("label"), Some("bank of \"england\""));
        let edge = doc.descendants().find(|n| n.has_tag_name("edge")).unwrap();
        assert_eq!(edge.attribute("weight"), Some("2"));
    }

    #[test]
    fn graphml_is_well_formed() {
        let text =
            String::from_utf8(render_graph(&tiny(), None, &ExportSpec::new(ExportFormat::Graphml)).unwrap()).unwrap();
        let doc = roxmltree::Document::parse(&text).unwrap();
        assert_eq!(doc.descendants().filter(|n| n.has_tag_name("edge")).count(), 1);
        assert_eq!(doc.descendants().filter(|n| n.has_tag_name("key")).count(), 5);
    }

    #[test]
    fn dot_quotes_identifiers() {
        let text =
            String::from_utf8(render_graph(&tiny(), None, &ExportSpec::new(ExportFormat::Dot)).unwrap()).unwrap();
        assert_eq!(
            text,
            "graph \"BN\" {\n  \"bank of \\\"england\\\"\" [weight=1];\n  \"r&d <corp>\" [weight=1];\n  \
             \"bank of \\\"england\\\"\" -- \"r&d <corp>\" [frequency=2, polarity=-0.25, subjectivity=0.5];\n}\n"
        );
    }

    #[test]
    fn csv_outputs() {
        let e = render_graph(&tiny(), None, &ExportSpec::new(ExportFormat::CsvEdges)).unwrap();
        assert_eq!(
            String::from_utf8(e).unwrap(),
            "source,target,frequency,polarity,subjectivity\n\"bank of \"\"england\"\"\",r&d <corp>,2,-0.25,0.5\n"
        );
        let v = render_graph(&tiny(), None, &ExportSpec::new(ExportFormat::CsvVertices)).unwrap();
        assert!(String::from_utf8(v).unwrap().starts_with("id,weight\n"));
    }

    #[test]
    fn json_round_trips() {
        let g = tiny();
        let bytes = render_graph(&g, None, &ExportSpec::new(ExportFormat::Json)).unwrap();
        assert_eq!(read_graph_json(std::str::from_utf8(&bytes).unwrap(), "mem").unwrap(), g);
    }

    #[test]
    fn unsupported_combinations() {
        let g = tiny();
        let mut spec = ExportSpec::new(ExportFormat::CsvEdges);
        spec.color_by = ColorBy::Community;
        assert!(matches!(
            render_graph(&g, None, &spec),
            Err(Error::UnsupportedExport(_))
        ));
        spec.format = ExportFormat::Gexf;
        assert!(matches!(
            render_graph(&g, None, &spec),
            Err(Error::UnsupportedExport(_))
        ));
        spec.color_by = ColorBy::Lean;
        assert!(matches!(
            render_graph(&g, None, &spec),
            Err(Error::UnsupportedExport(_))
        ));
    }

    #[test]
    fn community_colors() {
        let g = tiny();
        let p = Partition {
            assignment: g.vertices.keys().enumerate().map(|(i, v)| (v.clone(), i)).collect(),
        };
        let mut spec = ExportSpec::new(ExportFormat::Gexf);
        spec.color_by = ColorBy::Community;
        let text = String::from_utf8(render_graph(&g, Some(&p), &spec).unwrap()).unwrap();
        assert_eq!(text.matches("<viz:color").count(), 2);
        assert!(text.contains("title=\"community\""));
    }

    #[test]
    fn stamp_only_when_requested() {
        let mut spec = ExportSpec::new(ExportFormat::Gexf);
        let plain = render_graph(&tiny(), None, &spec).unwrap();
        assert!(!String::from_utf8_lossy(&plain).contains("lastmodifieddate"));
        spec.stamp = Some("2024-01-02".into());
        let stamped = render_graph(&tiny(), None, &spec).unwrap();
        assert!(String::from_utf8_lossy(&stamped).contains("lastmodifieddate=\"2024-01-02\""));
    }

    #[test]
    fn no_attrs() {
        let mut spec = ExportSpec::new(ExportFormat::CsvEdges);
        spec.include_attrs = AttrFlags::none();
        let e = render_graph(&tiny(), None, &spec).unwrap();
        assert_eq!(
            String::from_utf8(e).unwrap(),
            "source,target\n\"bank of \"\"england\"\"\",r&d <corp>\n"
        );
    }
}
