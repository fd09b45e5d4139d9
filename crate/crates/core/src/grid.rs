//! Rectangular grids of gadgets.
//!
//! Cells are addressed `(column, row)`, both 1-based, with row 1 on top.
//! Horizontally adjacent cells are joined by fusing the right stubs of the
//! left cell with the left stubs of the right cell, in order; vertically
//! adjacent cells by fusing bottom stubs of the upper cell with top stubs of
//! the lower one. Stubs left on the border are renamed `x1, x2, ...` (top),
//! `x'1, ...` (bottom), `y1, ...` (left) and `y'1, ...` (right). Interior
//! vertices are named `M(i,j).<local name>`.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gadgets::{Gadget, GadgetKind, GadgetSet};
use crate::graph::{EdgeId, GraphBuilder, RotationGraph, VertexId};
use crate::instance::{DemandClass, Instance};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub columns: usize,
    pub rows: usize,
    /// Row-major: the cell `(i, j)` is at `(j - 1) * columns + (i - 1)`.
    pub cells: Vec<GadgetKind>,
}

impl GridSpec {
    pub fn uniform(kind: GadgetKind, columns: usize, rows: usize) -> Self {
        GridSpec { columns, rows, cells: vec![kind; columns * rows] }
    }

    pub fn from_fn(columns: usize, rows: usize, mut f: impl FnMut(usize, usize) -> GadgetKind) -> Self {
        let mut cells = Vec::with_capacity(columns * rows);
        for j in 1..=rows {
            for i in 1..=columns {
                cells.push(f(i, j));
            }
        }
        GridSpec { columns, rows, cells }
    }

    /// Builds a spec from rows of kinds, top row first.
    pub fn from_rows(rows: Vec<Vec<GadgetKind>>) -> Result<Self> {
        let columns = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != columns) {
            return Err(Error::Input("ragged grid layout".into()));
        }
        Ok(GridSpec { columns, rows: rows.len(), cells: rows.into_iter().flatten().collect() })
    }

    fn index(&self, i: usize, j: usize) -> Result<usize> {
        if i == 0 || j == 0 || i > self.columns || j > self.rows {
            return Err(Error::Input(format!(
                "cell ({i},{j}) outside a {}x{} grid",
                self.columns, self.rows
            )));
        }
        Ok((j - 1) * self.columns + (i - 1))
    }

    pub fn kind(&self, i: usize, j: usize) -> Result<GadgetKind> {
        Ok(self.cells[self.index(i, j)?])
    }

    pub fn set(&mut self, i: usize, j: usize, kind: GadgetKind) -> Result<()> {
        let k = self.index(i, j)?;
        self.cells[k] = kind;
        Ok(())
    }

    pub fn count(&self, kind: GadgetKind) -> usize {
        self.cells.iter().filter(|&&k| k == kind).count()
    }

    fn check(&self) -> Result<()> {
        if self.columns == 0 || self.rows == 0 {
            return Err(Error::Input("empty grid layout".into()));
        }
        if self.cells.len() != self.columns * self.rows {
            return Err(Error::Input(format!(
                "layout has {} cells, expected {}x{}",
                self.cells.len(),
                self.columns,
                self.rows
            )));
        }
        let directed = self.cells[0].is_directed();
        if let Some(k) = self.cells.iter().find(|k| k.is_directed() != directed) {
            return Err(Error::Input(format!("{k} cannot share a grid with {}", self.cells[0])));
        }
        Ok(())
    }
}

/// The inter-column and inter-row edge sets of a grid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutRegistry {
    /// `vertical[i - 1]` is `V_i`, between columns `i` and `i + 1`, listed
    /// top to bottom.
    pub vertical: Vec<Vec<EdgeId>>,
    /// `horizontal[j - 1]` is `H_j`, between rows `j` and `j + 1`, listed
    /// left to right.
    pub horizontal: Vec<Vec<EdgeId>>,
}

impl CutRegistry {
    pub fn vertical_cut(&self, i: usize) -> Result<&[EdgeId]> {
        i.checked_sub(1)
            .and_then(|k| self.vertical.get(k))
            .map(|v| v.as_slice())
            .ok_or_else(|| Error::Input(format!("no vertical cut V_{i}")))
    }

    pub fn horizontal_cut(&self, j: usize) -> Result<&[EdgeId]> {
        j.checked_sub(1)
            .and_then(|k| self.horizontal.get(k))
            .map(|v| v.as_slice())
            .ok_or_else(|| Error::Input(format!("no horizontal cut H_{j}")))
    }
}

/// The vertices of one cell, keyed by their local gadget names. Border
/// stubs appear under their port name (so `s1` of a top-row cell maps to
/// some `x` vertex); fused stubs have no vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellView {
    pub column: usize,
    pub row: usize,
    pub kind: GadgetKind,
    pub vertices: BTreeMap<String, VertexId>,
    /// Edges with both ends in the cell.
    pub edges: Vec<EdgeId>,
}

impl CellView {
    pub fn vertex(&self, local: &str) -> Result<VertexId> {
        self.vertices.get(local).copied().ok_or_else(|| {
            Error::Input(format!("cell ({},{}) has no vertex `{local}`", self.column, self.row))
        })
    }
}

#[derive(Clone, Debug)]
pub struct Grid {
    pub spec: GridSpec,
    pub graph: RotationGraph,
    pub cuts: CutRegistry,
    cells: Vec<CellView>,
    /// Border stub names in order: top, bottom, left, right.
    pub top: Vec<VertexId>,
    pub bottom: Vec<VertexId>,
    pub left: Vec<VertexId>,
    pub right: Vec<VertexId>,
}

pub fn build_grid(spec: &GridSpec) -> Result<Grid> {
    build_grid_with(spec, &GadgetSet::standard())
}

/// Intermediate grid assembly: the builder before compaction, with the
/// builder index of each cell's vertices. The directed reduction keeps
/// editing it before building.
pub(crate) struct GridBuild {
    pub builder: GraphBuilder,
    /// Per cell (row-major), local name → builder vertex.
    pub cell_vertices: Vec<BTreeMap<String, usize>>,
    pub top: Vec<usize>,
    pub bottom: Vec<usize>,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

pub(crate) fn copy_gadget(b: &mut GraphBuilder, gd: &Gadget, prefix: &str, offset: (f64, f64)) -> BTreeMap<String, usize> {
    let g = &gd.graph;
    let mut vmap = Vec::with_capacity(g.vertex_count());
    let mut names = BTreeMap::new();
    for v in g.vertices() {
        let local = g.name(v);
        let pos = g.position(v).map(|(x, y)| (x + offset.0, y + offset.1));
        let nv = b.add_vertex(&format!("{prefix}.{local}"), pos);
        b.set_label(nv, g.label(v).map(|s| s.to_string()));
        b.set_noncrossing(nv, g.is_noncrossing(v));
        names.insert(local.to_string(), nv);
        vmap.push(nv);
    }
    let base = b.edge_count();
    for e in g.edges() {
        let ne = b.add_edge(vmap[e.tail.index()], vmap[e.head.index()]);
        if let Some(l) = &e.label {
            b.set_edge_label(ne, Some(l.clone()));
        }
    }
    for v in g.vertices() {
        let rot = g.rotation(v).iter().map(|e| base + e.index()).collect();
        b.set_rotation(vmap[v.index()], rot);
    }
    names
}

/// Fuses two stubs whichever way their arcs chain (undirected: as given).
pub(crate) fn fuse(b: &mut GraphBuilder, x: usize, y: usize) -> Result<usize> {
    if !b.is_directed() {
        return b.fuse_stubs(x, y);
    }
    let ex = b.rotation(x)[0];
    let x_is_in = b.endpoints(ex).1 == x;
    if x_is_in {
        b.fuse_stubs(x, y)
    } else {
        b.fuse_stubs(y, x)
    }
}

pub(crate) fn assemble(spec: &GridSpec, set: &GadgetSet) -> Result<GridBuild> {
    spec.check()?;
    let cells = spec.cells.iter().map(|&k| set.get(k)).collect::<Result<Vec<_>>>()?;
    assemble_cells(spec.columns, spec.rows, &cells)
}

/// Assembles arbitrary gadgets, one per cell in row-major order.
pub(crate) fn assemble_cells(columns: usize, rows: usize, cells: &[&Gadget]) -> Result<GridBuild> {
    if columns == 0 || rows == 0 || cells.len() != columns * rows {
        return Err(Error::Input(format!("{} gadgets for a {columns}x{rows} grid", cells.len())));
    }
    let directed = cells[0].graph.is_directed();
    if cells.iter().any(|g| g.graph.is_directed() != directed) {
        return Err(Error::Input("directed and undirected gadgets cannot share a grid".into()));
    }
    let at = |i: usize, j: usize| (j - 1) * columns + (i - 1);
    let gadget = |i: usize, j: usize| -> Result<&Gadget> { Ok(cells[at(i, j)]) };
    // Cell pitch from the largest drawing.
    let (mut w, mut h) = (0.0f64, 0.0f64);
    for gd in cells {
        let ps: Vec<(f64, f64)> = gd.graph.vertices().filter_map(|v| gd.graph.position(v)).collect();
        if let (Some(x0), Some(x1)) = (
            ps.iter().map(|p| p.0).min_by(f64::total_cmp),
            ps.iter().map(|p| p.0).max_by(f64::total_cmp),
        ) {
            w = w.max(x1 - x0);
        }
        if let (Some(y0), Some(y1)) = (
            ps.iter().map(|p| p.1).min_by(f64::total_cmp),
            ps.iter().map(|p| p.1).max_by(f64::total_cmp),
        ) {
            h = h.max(y1 - y0);
        }
    }
    let (dx, dy) = (w + 2.0, h + 2.0);

    let mut b = GraphBuilder::new(directed);
    let mut cell_vertices = Vec::with_capacity(cells.len());
    for j in 1..=rows {
        for i in 1..=columns {
            let gd = gadget(i, j)?;
            let off = ((i - 1) as f64 * dx, -((j - 1) as f64) * dy);
            cell_vertices.push(copy_gadget(&mut b, gd, &format!("M({i},{j})"), off));
        }
    }
    // Horizontal neighbours: the f edges of the vertical cuts.
    for j in 1..=rows {
        for i in 1..columns {
            let (l, r) = (gadget(i, j)?, gadget(i + 1, j)?);
            if l.sides.right.len() != r.sides.left.len() {
                return Err(Error::Construction(format!(
                    "cells ({i},{j}) {} and ({},{j}) {}: {} right stubs against {} left stubs",
                    l.kind,
                    i + 1,
                    r.kind,
                    l.sides.right.len(),
                    r.sides.left.len()
                )));
            }
            for (k, (a, c)) in l.sides.right.iter().zip(&r.sides.left).enumerate() {
                let x = cell_vertices[at(i, j)][a];
                let y = cell_vertices[at(i + 1, j)][c];
                let e = fuse(&mut b, x, y).map_err(|err| {
                    Error::Construction(format!("joining ({i},{j}).{a} with ({},{j}).{c}: {err}", i + 1))
                })?;
                b.set_edge_label(e, Some(format!("f({i},{j}).{}", k + 1)));
            }
        }
    }
    // Vertical neighbours: the e edges of the horizontal cuts.
    for j in 1..rows {
        for i in 1..=columns {
            let (u, d) = (gadget(i, j)?, gadget(i, j + 1)?);
            if u.sides.bottom.len() != d.sides.top.len() {
                return Err(Error::Construction(format!(
                    "cells ({i},{j}) {} and ({i},{}) {}: {} bottom stubs against {} top stubs",
                    u.kind,
                    j + 1,
                    d.kind,
                    u.sides.bottom.len(),
                    d.sides.top.len()
                )));
            }
            for (k, (a, c)) in u.sides.bottom.iter().zip(&d.sides.top).enumerate() {
                let x = cell_vertices[at(i, j)][a];
                let y = cell_vertices[at(i, j + 1)][c];
                let e = fuse(&mut b, x, y).map_err(|err| {
                    Error::Construction(format!("joining ({i},{j}).{a} with ({i},{}).{c}: {err}", j + 1))
                })?;
                b.set_edge_label(e, Some(format!("e({i},{j}).{}", k + 1)));
            }
        }
    }
    // Fused stubs are gone from the cell maps.
    for cv in cell_vertices.iter_mut() {
        cv.retain(|_, v| b.is_alive(*v));
    }
    let mut border = |cells: Vec<(usize, usize)>, side: fn(&Gadget) -> &Vec<String>, stem: &str| -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for (i, j) in cells {
            let gd = gadget(i, j)?;
            for port in side(gd) {
                let v = cell_vertices[at(i, j)][port];
                b.rename(v, &format!("{stem}{}", out.len() + 1));
                out.push(v);
            }
        }
        Ok(out)
    };
    let top = border((1..=columns).map(|i| (i, 1)).collect(), |g| &g.sides.top, "x")?;
    let bottom = border((1..=columns).map(|i| (i, rows)).collect(), |g| &g.sides.bottom, "x'")?;
    let left = border((1..=rows).map(|j| (1, j)).collect(), |g| &g.sides.left, "y")?;
    let right = border((1..=rows).map(|j| (columns, j)).collect(), |g| &g.sides.right, "y'")?;
    Ok(GridBuild { builder: b, cell_vertices, top, bottom, left, right })
}

impl GridBuild {
    /// Compacts the builder into a grid.
    pub fn finish(&self, spec: &GridSpec) -> Result<Grid> {
        let graph = self.builder.build()?;
        let find = |v: usize| graph.require(self.builder.name(v));
        let mut cells = Vec::with_capacity(spec.cells.len());
        let mut owner: HashMap<VertexId, usize> = HashMap::new();
        for j in 1..=spec.rows {
            for i in 1..=spec.columns {
                let k = (j - 1) * spec.columns + (i - 1);
                let mut vertices = BTreeMap::new();
                for (local, &bv) in &self.cell_vertices[k] {
                    let v = find(bv)?;
                    owner.insert(v, k);
                    vertices.insert(local.clone(), v);
                }
                cells.push(CellView { column: i, row: j, kind: spec.cells[k], vertices, edges: Vec::new() });
            }
        }
        let mut vertical = vec![Vec::new(); spec.columns.saturating_sub(1)];
        let mut horizontal = vec![Vec::new(); spec.rows.saturating_sub(1)];
        let mut keyed_v: Vec<Vec<(usize, usize, EdgeId)>> = vec![Vec::new(); vertical.len()];
        let mut keyed_h: Vec<Vec<(usize, usize, EdgeId)>> = vec![Vec::new(); horizontal.len()];
        for e in graph.edge_ids() {
            let ed = graph.edge(e);
            if let (Some(&a), Some(&c)) = (owner.get(&ed.tail), owner.get(&ed.head)) {
                if a == c {
                    cells[a].edges.push(e);
                    continue;
                }
            }
            if let Some((kind, i, j, k)) = ed.label.as_deref().and_then(parse_cut_label) {
                match kind {
                    'f' => keyed_v[i - 1].push((j, k, e)),
                    _ => keyed_h[j - 1].push((i, k, e)),
                }
            }
        }
        for (dst, mut src) in vertical.iter_mut().zip(keyed_v).chain(horizontal.iter_mut().zip(keyed_h)) {
            src.sort();
            *dst = src.into_iter().map(|t| t.2).collect();
        }
        let ids = |vs: &[usize]| vs.iter().map(|&v| find(v)).collect::<Result<Vec<_>>>();
        Ok(Grid {
            spec: spec.clone(),
            cuts: CutRegistry { vertical, horizontal },
            cells,
            top: ids(&self.top)?,
            bottom: ids(&self.bottom)?,
            left: ids(&self.left)?,
            right: ids(&self.right)?,
            graph,
        })
    }
}

fn parse_cut_label(s: &str) -> Option<(char, usize, usize, usize)> {
    let kind = s.chars().next()?;
    if kind != 'e' && kind != 'f' {
        return None;
    }
    let rest = s.get(1..)?.strip_prefix('(')?;
    let (coords, k) = rest.split_once(").")?;
    let (i, j) = coords.split_once(',')?;
    Some((kind, i.parse().ok()?, j.parse().ok()?, k.parse().ok()?))
}

/// Builds a grid from the gadgets of a set (standard or altered tables).
pub fn build_grid_with(spec: &GridSpec, set: &GadgetSet) -> Result<Grid> {
    assemble(spec, set)?.finish(spec)
}

impl Grid {
    pub fn cell(&self, i: usize, j: usize) -> Result<&CellView> {
        Ok(&self.cells[self.spec.index(i, j)?])
    }

    pub fn cells(&self) -> &[CellView] {
        &self.cells
    }

    /// The vertex `v^{i,j}`.
    pub fn vertex(&self, i: usize, j: usize, local: &str) -> Result<VertexId> {
        self.cell(i, j)?.vertex(local)
    }

    /// Vertices of columns `1..=i`, whose coboundary is `V_i`.
    pub fn columns_upto(&self, i: usize) -> Vec<VertexId> {
        let mut out: Vec<VertexId> =
            self.cells.iter().filter(|c| c.column <= i).flat_map(|c| c.vertices.values().copied()).collect();
        out.sort();
        out
    }

    /// Vertices of rows `1..=j`, whose coboundary is `H_j`.
    pub fn rows_upto(&self, j: usize) -> Vec<VertexId> {
        let mut out: Vec<VertexId> =
            self.cells.iter().filter(|c| c.row <= j).flat_map(|c| c.vertices.values().copied()).collect();
        out.sort();
        out
    }

    /// Resolves an endpoint group: `X`, `X'`, `Y`, `Y'` for the border sides,
    /// otherwise a comma-separated list of vertex names.
    pub fn group(&self, name: &str) -> Result<Vec<VertexId>> {
        match name.trim() {
            "X" => Ok(self.top.clone()),
            "X'" => Ok(self.bottom.clone()),
            "Y" => Ok(self.left.clone()),
            "Y'" => Ok(self.right.clone()),
            list => list.split(',').map(|n| self.graph.require(n.trim())).collect(),
        }
    }
}

/// One demand class in terms of endpoint groups (see [`Grid::group`]).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSpec {
    pub sources: String,
    pub sinks: String,
    pub count: u32,
    #[serde(default)]
    pub exempt: bool,
}

impl ClassSpec {
    pub fn new(sources: &str, sinks: &str, count: u32) -> Self {
        ClassSpec { sources: sources.into(), sinks: sinks.into(), count, exempt: false }
    }
}

/// Packages a demand specification over a grid into an instance.
pub fn standard_demand(grid: &Grid, spec: &[ClassSpec]) -> Result<Instance> {
    let mut demands = Vec::with_capacity(spec.len());
    for c in spec {
        let mut d = DemandClass::new(grid.group(&c.sources)?, grid.group(&c.sinks)?, c.count)
            .labelled(&format!("{}->{}", c.sources, c.sinks));
        if c.exempt {
            d = d.exempt();
        }
        demands.push(d);
    }
    Instance::new(grid.graph.clone(), demands)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cuts::delta;

    #[test]
    fn single_cell_renames_stubs() {
        let g = build_grid(&GridSpec::uniform(GadgetKind::Xch, 1, 1)).unwrap();
        let xch = crate::gadgets::standard(GadgetKind::Xch);
        assert_eq!(g.graph.vertex_count(), xch.graph.vertex_count());
        assert_eq!(g.graph.edge_count(), xch.graph.edge_count());
        for n in ["x1", "x4", "x'1", "x'4", "y1", "y2", "y'1", "y'2"] {
            assert!(g.graph.vertex(n).is_some(), "{n}");
        }
        assert_eq!(g.vertex(1, 1, "s1").unwrap(), g.graph.require("x1").unwrap());
        assert_eq!(g.vertex(1, 1, "t'2").unwrap(), g.graph.require("y'2").unwrap());
    }

    #[test]
    fn two_by_three_cut_sizes() {
        let g = build_grid(&GridSpec::uniform(GadgetKind::Xch, 2, 3)).unwrap();
        assert_eq!(g.cuts.vertical_cut(1).unwrap().len(), 6);
        assert_eq!(g.cuts.horizontal_cut(1).unwrap().len(), 8);
        assert_eq!(g.cuts.horizontal_cut(2).unwrap().len(), 8);
        assert!(g.cuts.vertical_cut(2).is_err());
        let mut v1 = g.cuts.vertical_cut(1).unwrap().to_vec();
        v1.sort();
        assert_eq!(delta(&g.graph, &g.columns_upto(1)).unwrap().edges, v1);
        let mut h2 = g.cuts.horizontal_cut(2).unwrap().to_vec();
        h2.sort();
        assert_eq!(delta(&g.graph, &g.rows_upto(2)).unwrap().edges, h2);
    }

    #[test]
    fn interior_degree_kept() {
        let spec = GridSpec::from_fn(3, 3, |i, j| if (i + j) % 2 == 0 { GadgetKind::Lic } else { GadgetKind::Xch });
        let g = build_grid(&spec).unwrap();
        let border: Vec<VertexId> = [&g.top, &g.bottom, &g.left, &g.right].into_iter().flatten().copied().collect();
        for v in g.graph.vertices() {
            let d = g.graph.degree(v);
            assert_eq!(d, if border.contains(&v) { 1 } else { 4 }, "{}", g.graph.name(v));
        }
        assert_eq!(g.graph.noncrossing_vertices().len(), 5 * 10 + 4 * 12);
    }

    #[test]
    fn cells_are_disjoint() {
        let g = build_grid(&GridSpec::uniform(GadgetKind::Xch, 2, 1)).unwrap();
        let a = g.cell(1, 1).unwrap();
        let b = g.cell(2, 1).unwrap();
        assert!(a.vertices.values().all(|v| !b.vertices.values().any(|w| w == v)));
        assert!(g.cell(3, 1).is_err());
        assert!(g.vertex(2, 1, "a").is_ok());
    }

    #[test]
    fn bad_layouts() {
        assert!(GridSpec::from_rows(vec![vec![GadgetKind::Xch], vec![]]).is_err());
        let mixed = GridSpec { columns: 2, rows: 1, cells: vec![GadgetKind::Xch, GadgetKind::Yes] };
        assert!(build_grid(&mixed).is_err());
    }

    #[test]
    fn lemma_demand_specs() {
        let g = build_grid(&GridSpec::uniform(GadgetKind::Xch, 1, 3)).unwrap();
        let inst = standard_demand(
            &g,
            &[ClassSpec::new("Y", "Y'", 5), ClassSpec::new("x1", "x'1", 1), ClassSpec::new("x2", "x'2", 1)],
        )
        .unwrap();
        assert_eq!(inst.total_paths(), 7);
        assert_eq!(inst.demands[0].sources.len(), 6);
        assert!(standard_demand(&g, &[]).unwrap().demands.is_empty());
        assert!(standard_demand(&g, &[ClassSpec::new("Z", "Y", 1)]).is_err());
    }
}
