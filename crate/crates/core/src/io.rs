//! Documents on disk and graph export.
//!
//! Instances travel as [`InstanceDocument`] JSON: the graph with names,
//! labels, positions and rotations, the demand classes, and optional layout
//! metadata (cells, pruning cuts, terminal names, layout parameters).
//! Routings travel as [`RoutingDocument`]. Every write goes through a
//! temporary file in the target directory followed by a rename.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub use crate::cnf::parse_dimacs;
use crate::cnf::CnfFormula;
use crate::error::{Error, Result};
use crate::graph::{RotationGraph, VertexId};
use crate::grid::{CellView, Grid};
use crate::instance::{path_vertices, DemandClass, Instance, Routing};
use crate::solver::CutSet;

pub const FORMAT_VERSION: u32 = 1;

/// Optional description of how an instance was laid out.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LayoutMeta {
    /// What produced the instance, e.g. `undirected`, `directed`, `gadget`.
    pub kind: String,
    /// Layout numbers such as `n`, `q`, `p`, `columns`, `rows`.
    #[serde(default)]
    pub parameters: BTreeMap<String, u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cells: Vec<CellView>,
    /// Inside sets `U` of cuts registered for pruning.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cuts: Vec<Vec<VertexId>>,
    /// Role name to vertex name, e.g. `x` to the merged top terminal.
    #[serde(default)]
    pub terminals: BTreeMap<String, String>,
}

impl LayoutMeta {
    pub fn new(kind: &str) -> Self {
        LayoutMeta { kind: kind.to_string(), ..Default::default() }
    }

    pub fn parameter(mut self, key: &str, value: usize) -> Self {
        self.parameters.insert(key.to_string(), value as u64);
        self
    }

    pub fn terminal(mut self, role: &str, g: &RotationGraph, v: VertexId) -> Self {
        self.terminals.insert(role.to_string(), g.name(v).to_string());
        self
    }

    /// Cell map of a grid.
    pub fn with_cells(mut self, grid: &Grid) -> Self {
        self.cells = grid.cells().to_vec();
        self
    }

    pub fn with_cuts(mut self, cuts: Vec<Vec<VertexId>>) -> Self {
        self.cuts = cuts;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceDocument {
    pub format_version: u32,
    pub graph: RotationGraph,
    pub demands: Vec<DemandClass>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layout: Option<LayoutMeta>,
}

impl InstanceDocument {
    pub fn new(inst: &Instance, layout: Option<LayoutMeta>) -> Self {
        InstanceDocument {
            format_version: FORMAT_VERSION,
            graph: inst.graph.clone(),
            demands: inst.demands.clone(),
            layout,
        }
    }

    /// The instance, with its demands re-checked against the graph.
    pub fn instance(&self) -> Result<Instance> {
        Instance::new(self.graph.clone(), self.demands.clone())
    }

    /// The cuts recorded in the layout, registered for the instance.
    pub fn cut_set(&self, inst: &Instance) -> Result<CutSet> {
        let cuts = self.layout.as_ref().map(|l| l.cuts.clone()).unwrap_or_default();
        crate::solver::register_cuts(inst, cuts)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoutingDocument {
    pub format_version: u32,
    pub routing: Routing,
    /// Vertex names along each path, for reading; ignored on input.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub walks: Vec<Vec<String>>,
}

impl RoutingDocument {
    pub fn new(routing: &Routing) -> Self {
        RoutingDocument { format_version: FORMAT_VERSION, routing: routing.clone(), walks: Vec::new() }
    }

    /// Adds the vertex-name walks of every path.
    pub fn with_walks(mut self, g: &RotationGraph) -> Result<Self> {
        self.walks = self
            .routing
            .paths
            .iter()
            .map(|p| Ok(path_vertices(g, p)?.into_iter().map(|v| g.name(v).to_string()).collect()))
            .collect::<Result<_>>()?;
        Ok(self)
    }
}

fn check_version(v: u32) -> Result<()> {
    if v != FORMAT_VERSION {
        return Err(Error::Input(format!("unsupported format version {v} (expected {FORMAT_VERSION})")));
    }
    Ok(())
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Internal(format!("serialization failed: {e}")))
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })
}

pub fn parse_instance_document(text: &str) -> Result<InstanceDocument> {
    let doc: InstanceDocument = from_json(text)?;
    check_version(doc.format_version)?;
    doc.instance()?;
    Ok(doc)
}

pub fn parse_routing_document(text: &str) -> Result<RoutingDocument> {
    let doc: RoutingDocument = from_json(text)?;
    check_version(doc.format_version)?;
    Ok(doc)
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

/// Writes `bytes` to a temporary file next to `path`, then renames it into
/// place, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let io_err = |e: std::io::Error| Error::Input(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(bytes).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    // Temporary files are private; give the result the usual mode, or the
    // mode of the file it replaces.
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        let perms = std::fs::metadata(path)
            .map(|m| m.permissions())
            .unwrap_or_else(|_| std::fs::Permissions::from_mode(0o644));
        tmp.as_file().set_permissions(perms).map_err(io_err)?;
    }
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

pub fn read_formula(path: &Path) -> Result<CnfFormula> {
    parse_dimacs(&read_text(path)?)
}

pub fn read_instance(path: &Path) -> Result<InstanceDocument> {
    parse_instance_document(&read_text(path)?)
}

pub fn write_instance(path: &Path, doc: &InstanceDocument) -> Result<()> {
    write_atomic(path, to_json(doc)?.as_bytes())
}

pub fn read_routing(path: &Path) -> Result<RoutingDocument> {
    parse_routing_document(&read_text(path)?)
}

pub fn write_routing(path: &Path, doc: &RoutingDocument) -> Result<()> {
    write_atomic(path, to_json(doc)?.as_bytes())
}

/// Rendering choices for [`export_dot`].
#[derive(Clone, Debug, Default)]
pub struct DotOptions {
    pub name: String,
    /// Paths to draw over the graph, one style per demand class.
    pub routing: Option<Routing>,
    /// Cells to draw as clusters.
    pub cells: Vec<CellView>,
    /// Draw vertices where paths may cross as bold points.
    pub mark_crossing: bool,
    /// Vertices drawn as boxes (gadget ports, terminals).
    pub highlight: Vec<VertexId>,
}

const CLASS_STYLES: [(&str, &str); 8] = [
    ("red", "solid"),
    ("blue", "solid"),
    ("darkgreen", "solid"),
    ("orange", "solid"),
    ("purple", "dashed"),
    ("brown", "dashed"),
    ("magenta", "dashed"),
    ("cyan4", "dashed"),
];

/// Style of demand class `c` in a routing overlay.
pub fn class_style(c: usize) -> (&'static str, &'static str) {
    CLASS_STYLES[c % CLASS_STYLES.len()]
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Vertices drawn as bold points: undirected, allowed to host crossings,
/// and not a stub.
pub fn crossing_marks(g: &RotationGraph) -> Vec<VertexId> {
    if g.is_directed() {
        return Vec::new();
    }
    g.vertices().filter(|&v| !g.is_noncrossing(v) && g.degree(v) > 1).collect()
}

/// Graphviz text for `g`. Vertices and edges appear in id order, so equal
/// inputs give byte-identical output.
pub fn export_dot(g: &RotationGraph, opts: &DotOptions) -> String {
    let directed = g.is_directed();
    let arrow = if directed { "->" } else { "--" };
    let mut out = String::new();
    let name = if opts.name.is_empty() { "G" } else { opts.name.as_str() };
    let _ = writeln!(out, "{} {} {{", if directed { "digraph" } else { "graph" }, quote(name));
    let _ = writeln!(out, "  node [shape=circle, width=0.12, fixedsize=true, label=\"\", fontsize=8];");

    let bold: Vec<bool> = {
        let mut b = vec![false; g.vertex_count()];
        if opts.mark_crossing {
            for v in crossing_marks(g) {
                b[v.index()] = true;
            }
        }
        b
    };
    let node = |v: VertexId| -> String {
        let mut attrs = vec![format!("xlabel={}", quote(g.label(v).unwrap_or(g.name(v))))];
        if let Some((x, y)) = g.position(v) {
            attrs.push(format!("pos=\"{x},{y}!\""));
        }
        if bold[v.index()] {
            attrs.push("style=filled, fillcolor=black, penwidth=3".into());
        }
        if opts.highlight.contains(&v) {
            attrs.push("shape=box".into());
        }
        format!("{} [{}];", quote(g.name(v)), attrs.join(", "))
    };

    let mut owner: Vec<Option<usize>> = vec![None; g.vertex_count()];
    for (k, cell) in opts.cells.iter().enumerate() {
        for &v in cell.vertices.values() {
            if g.contains_vertex(v) && owner[v.index()].is_none() {
                owner[v.index()] = Some(k);
            }
        }
    }
    for (k, cell) in opts.cells.iter().enumerate() {
        let _ = writeln!(out, "  subgraph \"cluster_{}_{}\" {{", cell.column, cell.row);
        let _ = writeln!(out, "    label={};", quote(&format!("({},{}) {}", cell.column, cell.row, cell.kind)));
        let _ = writeln!(out, "    color=gray;");
        for v in g.vertices().filter(|v| owner[v.index()] == Some(k)) {
            let _ = writeln!(out, "    {}", node(v));
        }
        let _ = writeln!(out, "  }}");
    }
    for v in g.vertices().filter(|v| owner[v.index()].is_none()) {
        let _ = writeln!(out, "  {}", node(v));
    }

    let mut class_of = vec![None; g.edge_count()];
    if let Some(r) = &opts.routing {
        for p in &r.paths {
            for e in &p.edges {
                if g.contains_edge(*e) {
                    class_of[e.index()] = Some(p.class);
                }
            }
        }
    }
    for e in g.edge_ids() {
        let ed = g.edge(e);
        let mut attrs = Vec::new();
        if let Some(l) = &ed.label {
            attrs.push(format!("tooltip={}", quote(l)));
        }
        match class_of[e.index()] {
            Some(c) => {
                let (color, style) = class_style(c);
                attrs.push(format!("color={color}, style={style}, penwidth=2.5"));
            }
            None if opts.routing.is_some() => attrs.push("color=gray70".into()),
            None => {}
        }
        let tail = quote(g.name(ed.tail));
        let head = quote(g.name(ed.head));
        if attrs.is_empty() {
            let _ = writeln!(out, "  {tail} {arrow} {head};");
        } else {
            let _ = writeln!(out, "  {tail} {arrow} {head} [{}];", attrs.join(", "));
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::figures::{figure_routing, FigureId};
    use crate::gadgets::{standard, GadgetKind};

    #[test]
    fn dimacs_examples() {
        let f = parse_dimacs("p cnf 1 1\n1 0").unwrap();
        assert_eq!(f.clauses, vec![vec![1]]);
        let f = parse_dimacs("p cnf 2 2\n1 -2 0\n-1 2 0").unwrap();
        assert_eq!(f.clauses, vec![vec![1, -2], vec![-1, 2]]);
        assert!(parse_dimacs("p cnf 2 3\n1 -2 0\n-1 2 0").is_err());
    }

    #[test]
    fn xch_has_four_bold_vertices() {
        let gd = standard(GadgetKind::Xch);
        let dot = export_dot(&gd.graph, &DotOptions { mark_crossing: true, ..Default::default() });
        assert_eq!(dot.matches("penwidth=3").count(), 4);
        assert_eq!(crossing_marks(&gd.graph), gd.crossing_vertices());
    }

    #[test]
    fn overlay_styles_classes_and_is_stable() {
        let gd = standard(GadgetKind::Xch);
        let r = figure_routing(FigureId::XchShift).unwrap();
        let opts = DotOptions { routing: Some(r.clone()), ..Default::default() };
        let a = export_dot(&gd.graph, &opts);
        assert_eq!(a, export_dot(&gd.graph, &opts));
        let classes: std::collections::BTreeSet<usize> = r.paths.iter().map(|p| p.class).collect();
        for c in classes {
            let (color, style) = class_style(c);
            assert!(a.contains(&format!("color={color}, style={style}")));
        }
    }

    #[test]
    fn instance_document_round_trip() {
        let gd = standard(GadgetKind::Lic);
        let inst = Instance::new(gd.graph.clone(), crate::gadgets::figures::figure_demands(gd, FigureId::LicKeepLeft).unwrap())
            .unwrap();
        let meta = LayoutMeta::new("gadget").parameter("columns", 1).terminal("s1", &gd.graph, gd.port("s1").unwrap());
        let doc = InstanceDocument::new(&inst, Some(meta));
        let back = parse_instance_document(&to_json(&doc).unwrap()).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.instance().unwrap(), inst);
    }

    #[test]
    fn version_is_checked() {
        let gd = standard(GadgetKind::Yes);
        let inst = Instance::new(gd.graph.clone(), Vec::new()).unwrap();
        let mut doc = InstanceDocument::new(&inst, None);
        doc.format_version = 99;
        assert!(parse_instance_document(&to_json(&doc).unwrap()).is_err());
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.json");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
