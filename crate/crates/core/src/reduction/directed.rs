//! The directed reduction. A clause grid `G₁` of YES and NO gadgets (two
//! rows per variable, one column per clause) sits in the upper middle of a
//! larger grid `G` with `2p` rows and `2p + n` columns. The bands on either
//! side carry one IF, TT, LL and VV per variable; every other band cell is
//! a NO or an ON, chosen so that port counts match across each shared side.
//! Below `G₁`, each cell stacks two NO gadgets, as do the cells of `G₁`
//! itself, so that one row of `G` spans two rows of `G₁`.
//!
//! Terminals: `s1` feeds every row from the left and `s2` collects every
//! row on the right; `t1` feeds every column from the top and `t2` collects
//! every column at the bottom. The demands are `2p` paths `s1 → s2` and
//! `2p + n` paths `t1 → t2`.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::cnf::{lit_true, CnfFormula};
use crate::cuts::{delta, is_tight, Tightness};
use crate::error::{Error, Result};
use crate::gadgets::{Gadget, GadgetKind, GadgetSet};
use crate::graph::{EdgeId, GraphBuilder, VertexId};
use crate::grid::{assemble_cells, build_grid_with, copy_gadget, fuse, Grid, GridSpec};
use crate::instance::{validate_routing, DemandClass, Instance, RoutedPath, Routing};
use crate::solver::{solve, Engine, Mode, SearchPolicy, Status};

use super::undirected::extend_path;

/// The content of one cell of `G`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectedCell {
    Single(GadgetKind),
    /// Two gadgets stacked vertically, upper one first.
    Stack { upper: GadgetKind, lower: GadgetKind },
}

impl DirectedCell {
    /// The kind reported for the cell in grid views: a stack holding a YES
    /// is a YES, any other stack a NO.
    pub fn representative(self) -> GadgetKind {
        match self {
            DirectedCell::Single(k) => k,
            DirectedCell::Stack { upper, lower } => {
                if upper == GadgetKind::Yes || lower == GadgetKind::Yes {
                    GadgetKind::Yes
                } else {
                    GadgetKind::No
                }
            }
        }
    }
}

/// Stacks two gadgets: the bottom stubs of `upper` are fused with the top
/// stubs of `lower`. Local names get the prefixes `U.` and `L.`.
pub fn stack_gadget(upper: &Gadget, lower: &Gadget) -> Result<Gadget> {
    if upper.sides.bottom.len() != lower.sides.top.len() {
        return Err(Error::Construction(format!("cannot stack {} on {}", upper.kind, lower.kind)));
    }
    let span = |gd: &Gadget| {
        let ys: Vec<f64> = gd.graph.vertices().filter_map(|v| gd.graph.position(v)).map(|p| p.1).collect();
        ys.iter().copied().fold(f64::MIN, f64::max) - ys.iter().copied().fold(f64::MAX, f64::min)
    };
    let mut b = GraphBuilder::new(true);
    let u = copy_gadget(&mut b, upper, "U", (0.0, 0.0));
    let l = copy_gadget(&mut b, lower, "L", (0.0, -(span(upper) + 2.0)));
    for (x, y) in upper.sides.bottom.iter().zip(&lower.sides.top) {
        fuse(&mut b, u[x], l[y])?;
    }
    let graph = b.build()?;
    let pre = |p: &str, list: &[String]| list.iter().map(|s| format!("{p}.{s}")).collect::<Vec<_>>();
    let sides = crate::gadgets::Sides {
        top: pre("U", &upper.sides.top),
        bottom: pre("L", &lower.sides.bottom),
        left: [pre("U", &upper.sides.left), pre("L", &lower.sides.left)].concat(),
        right: [pre("U", &upper.sides.right), pre("L", &lower.sides.right)].concat(),
    };
    let mut ports = BTreeMap::new();
    for name in sides.top.iter().chain(&sides.bottom).chain(&sides.left).chain(&sides.right) {
        ports.insert(name.clone(), graph.require(name)?);
    }
    let kind = DirectedCell::Stack { upper: upper.kind, lower: lower.kind }.representative();
    Ok(Gadget { kind, graph, ports, sides })
}

fn check_formula(f: &CnfFormula) -> Result<()> {
    if f.num_vars == 0 || f.clauses.is_empty() {
        return Err(Error::Precondition("the directed reduction needs a variable and a clause".into()));
    }
    Ok(())
}

/// Kind of `G₁` at row `r` (`1..=2p`) and column `j`: row `2i-1` holds a
/// YES where `X_i` occurs in clause `j`, row `2i` where `¬X_i` does.
pub fn g1_kind(f: &CnfFormula, r: usize, j: usize) -> GadgetKind {
    let var = r.div_ceil(2) as u32;
    if f.occurs(var, r % 2 == 1, j - 1) {
        GadgetKind::Yes
    } else {
        GadgetKind::No
    }
}

/// `G₁` on its own: `n` columns, `2p` rows.
pub fn compile_g1(f: &CnfFormula) -> Result<Grid> {
    compile_g1_with(f, &GadgetSet::standard())
}

pub fn compile_g1_with(f: &CnfFormula, set: &GadgetSet) -> Result<Grid> {
    check_formula(f)?;
    let (n, p) = (f.clauses.len(), f.num_vars as usize);
    build_grid_with(&GridSpec::from_fn(n, 2 * p, |j, r| g1_kind(f, r, j)), set)
}

/// The `G₁` demands for one choice of row per variable (`lower[i-1]` picks
/// row `2i` over `2i-1`): a path from `c` at the top of each column to `b'`
/// at its bottom, and a path along the chosen row of each variable.
pub fn g1_instance(g1: &Grid, lower: &[bool]) -> Result<Instance> {
    let (n, rows) = (g1.spec.columns, g1.spec.rows);
    let mut demands = Vec::new();
    for j in 1..=n {
        demands.push(DemandClass::new(vec![g1.vertex(j, 1, "c")?], vec![g1.vertex(j, rows, "b'")?], 1));
    }
    for (i, &lo) in lower.iter().enumerate() {
        let r = 2 * i + 1 + lo as usize;
        demands.push(DemandClass::new(vec![g1.vertex(1, r, "a")?], vec![g1.vertex(n, r, "a'")?], 1));
    }
    Instance::new(g1.graph.clone(), demands)
}

/// Whether `G₁` has the column and row paths for some choice of rows,
/// decided exactly for every choice.
pub fn claim1_check(f: &CnfFormula) -> Result<bool> {
    let g1 = compile_g1(f)?;
    let p = f.num_vars as usize;
    let policy = SearchPolicy::new(Mode::Decide).engine(Engine::Sat);
    for mask in 0u64..1 << p {
        let lower: Vec<bool> = (0..p).map(|i| mask >> i & 1 == 1).collect();
        match solve(&g1_instance(&g1, &lower)?, &policy)?.status {
            Status::Sat => return Ok(true),
            Status::Unsat => {}
            Status::BudgetExceeded => return Err(Error::Budget("G1 choice undecided".into())),
        }
    }
    Ok(false)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectedLayout {
    pub n: usize,
    pub variables: usize,
    pub columns: usize,
    pub rows: usize,
    /// Row-major cell contents.
    pub cells: Vec<DirectedCell>,
    /// The IF, TT, LL and VV cells as `(column, row, kind)`.
    pub specials: Vec<(usize, usize, GadgetKind)>,
    pub s1: VertexId,
    pub s2: VertexId,
    pub t1: VertexId,
    pub t2: VertexId,
    /// Per row, the stub fed by `s1` and the stub feeding `s2`.
    pub row_entries: Vec<VertexId>,
    pub row_exits: Vec<VertexId>,
    /// Per column, the stub fed by `t1` and the stub feeding `t2`.
    pub column_inlets: Vec<VertexId>,
    pub column_outlets: Vec<VertexId>,
}

impl DirectedLayout {
    pub fn cell(&self, i: usize, j: usize) -> DirectedCell {
        self.cells[(j - 1) * self.columns + (i - 1)]
    }
}

#[derive(Clone, Debug)]
pub struct DirectedCompiled {
    pub instance: Instance,
    pub layout: DirectedLayout,
    pub grid: Grid,
    /// The gadget behind each distinct cell content.
    pub gadgets: BTreeMap<DirectedCell, Gadget>,
}

/// The IF, TT, LL and VV positions for `p` variables and `n` clauses, as
/// `(column, row)`: IF on the diagonal of the upper left band, TT on the
/// anti-diagonal of the upper right band, LL on the anti-diagonal of the
/// lower left band, VV on the diagonal of the lower right band.
pub fn special_cells(p: usize, n: usize) -> Vec<(usize, usize, GadgetKind)> {
    let mut out = Vec::new();
    for i in 1..=p {
        out.push((i, i, GadgetKind::If));
        out.push((n + p + i, p + 1 - i, GadgetKind::Tt));
        out.push((i, 2 * p + 1 - i, GadgetKind::Ll));
        out.push((n + p + i, p + i, GadgetKind::Vv));
    }
    out.sort();
    out
}

/// Fills the band cells: a free cell keeps the port counts of the fixed
/// cells around it, so it is a NO where its column carries two stubs and
/// its row one, an ON in the opposite case; anything else is an error.
fn place_bands(
    columns: usize,
    rows: usize,
    fixed: &BTreeMap<(usize, usize), DirectedCell>,
    gadget: &dyn Fn(DirectedCell) -> Result<Gadget>,
) -> Result<Vec<DirectedCell>> {
    let mut arity: BTreeMap<DirectedCell, [usize; 4]> = BTreeMap::new();
    for &c in fixed.values() {
        if let std::collections::btree_map::Entry::Vacant(e) = arity.entry(c) {
            let gd = gadget(c)?;
            let s = &gd.sides;
            e.insert([s.top.len(), s.bottom.len(), s.left.len(), s.right.len()]);
        }
    }
    // Count of stubs across each free cell, from the nearest fixed cells.
    let span = |line: Vec<Option<[usize; 2]>>| -> Result<Vec<Option<usize>>> {
        let mut out = vec![None; line.len()];
        let mut prev: Option<usize> = None;
        let mut pending = Vec::new();
        for (k, cell) in line.iter().enumerate() {
            match cell {
                None => pending.push(k),
                Some([before, after]) => {
                    if let Some(a) = prev {
                        if a != *before && !pending.is_empty() {
                            return Err(Error::Construction(format!(
                                "no NO/ON run joins {a} stubs to {before} stubs"
                            )));
                        }
                    }
                    for &q in &pending {
                        out[q] = Some(*before);
                    }
                    pending.clear();
                    prev = Some(*after);
                }
            }
        }
        for &q in &pending {
            out[q] = prev;
        }
        Ok(out)
    };
    let mut horizontal = vec![vec![None; columns]; rows];
    for j in 1..=rows {
        let line = (1..=columns).map(|i| fixed.get(&(i, j)).map(|c| [arity[c][2], arity[c][3]])).collect();
        horizontal[j - 1] = span(line)?;
    }
    let mut vertical = vec![vec![None; rows]; columns];
    for i in 1..=columns {
        let line = (1..=rows).map(|j| fixed.get(&(i, j)).map(|c| [arity[c][0], arity[c][1]])).collect();
        vertical[i - 1] = span(line)?;
    }
    let mut cells = Vec::with_capacity(columns * rows);
    for j in 1..=rows {
        for i in 1..=columns {
            if let Some(&c) = fixed.get(&(i, j)) {
                cells.push(c);
                continue;
            }
            let kind = match (vertical[i - 1][j - 1], horizontal[j - 1][i - 1]) {
                (Some(2), Some(1)) => GadgetKind::No,
                (Some(1), Some(2)) => GadgetKind::On,
                (v, h) => {
                    return Err(Error::Construction(format!(
                        "cell ({i},{j}): no gadget has {v:?} vertical and {h:?} horizontal stubs"
                    )))
                }
            };
            cells.push(DirectedCell::Single(kind));
        }
    }
    Ok(cells)
}

pub fn compile_full(f: &CnfFormula) -> Result<DirectedCompiled> {
    compile_full_with(f, &GadgetSet::standard())
}

pub fn compile_full_with(f: &CnfFormula, set: &GadgetSet) -> Result<DirectedCompiled> {
    check_formula(f)?;
    let (n, p) = (f.clauses.len(), f.num_vars as usize);
    let (columns, rows) = (2 * p + n, 2 * p);
    let make = |c: DirectedCell| -> Result<Gadget> {
        match c {
            DirectedCell::Single(k) => Ok(set.get(k)?.clone()),
            DirectedCell::Stack { upper, lower } => stack_gadget(set.get(upper)?, set.get(lower)?),
        }
    };
    let mut fixed: BTreeMap<(usize, usize), DirectedCell> = BTreeMap::new();
    let specials = special_cells(p, n);
    for &(i, j, k) in &specials {
        fixed.insert((i, j), DirectedCell::Single(k));
    }
    for j in 1..=n {
        for r in 1..=p {
            let (upper, lower) = (g1_kind(f, 2 * r - 1, j), g1_kind(f, 2 * r, j));
            fixed.insert((p + j, r), DirectedCell::Stack { upper, lower });
            fixed.insert((p + j, p + r), DirectedCell::Stack { upper: GadgetKind::No, lower: GadgetKind::No });
        }
    }
    let cells = place_bands(columns, rows, &fixed, &make)?;
    let mut gadgets = BTreeMap::new();
    for &c in &cells {
        if !gadgets.contains_key(&c) {
            gadgets.insert(c, make(c)?);
        }
    }
    let refs: Vec<&Gadget> = cells.iter().map(|c| &gadgets[c]).collect();
    let mut gb = assemble_cells(columns, rows, &refs)?;

    // Which border stubs the terminals use: every row stub; per column the
    // `c` track at the top and the `b'` track at the bottom of stacks.
    let mut inlets = Vec::new();
    let mut outlets = Vec::new();
    let (mut top_k, mut bottom_k) = (0, 0);
    for i in 1..=columns {
        let (t, b) = (&gadgets[&cells[i - 1]].sides.top, &gadgets[&cells[(rows - 1) * columns + i - 1]].sides.bottom);
        inlets.push(gb.top[top_k + t.len() - 1]);
        outlets.push(gb.bottom[bottom_k]);
        top_k += t.len();
        bottom_k += b.len();
    }
    if gb.left.len() != rows || gb.right.len() != rows {
        return Err(Error::Construction("rows do not end in single stubs".into()));
    }
    let b = &mut gb.builder;
    let centre = |b: &GraphBuilder, vs: &[usize]| {
        let ps: Vec<(f64, f64)> = vs.iter().filter_map(|&v| b.position(v)).collect();
        let k = ps.len().max(1) as f64;
        (ps.iter().map(|p| p.0).sum::<f64>() / k, ps.iter().map(|p| p.1).sum::<f64>() / k)
    };
    let (lx, ly) = centre(b, &gb.left);
    let (rx, ry) = centre(b, &gb.right);
    let (tx, ty) = centre(b, &inlets);
    let (bx, by) = centre(b, &outlets);
    let s1 = b.add_vertex("s1", Some((lx - 10.0, ly)));
    let s2 = b.add_vertex("s2", Some((rx + 10.0, ry)));
    let t1 = b.add_vertex("t1", Some((tx, ty + 10.0)));
    let t2 = b.add_vertex("t2", Some((bx, by - 10.0)));
    for k in 0..rows {
        b.add_edge(s1, gb.left[k]);
        b.add_edge(gb.right[k], s2);
    }
    for k in 0..columns {
        b.add_edge(t1, inlets[k]);
        b.add_edge(outlets[k], t2);
    }
    for v in [s1, s2, t1, t2] {
        b.sort_rotation_geometric(v);
    }
    let spec = GridSpec::from_fn(columns, rows, |i, j| cells[(j - 1) * columns + i - 1].representative());
    let grid = gb.finish(&spec)?;
    let g = &grid.graph;
    let ids = |vs: &[usize]| vs.iter().map(|&v| g.require(gb.builder.name(v))).collect::<Result<Vec<_>>>();
    let layout = DirectedLayout {
        n,
        variables: p,
        columns,
        rows,
        cells,
        specials,
        s1: g.require("s1")?,
        s2: g.require("s2")?,
        t1: g.require("t1")?,
        t2: g.require("t2")?,
        row_entries: ids(&gb.left)?,
        row_exits: ids(&gb.right)?,
        column_inlets: ids(&inlets)?,
        column_outlets: ids(&outlets)?,
    };
    let demands = vec![
        DemandClass::new(vec![layout.s1], vec![layout.s2], rows as u32).labelled("horizontal"),
        DemandClass::new(vec![layout.t1], vec![layout.t2], columns as u32).labelled("vertical"),
    ];
    let instance = Instance::new(g.clone(), demands)?;
    Ok(DirectedCompiled { instance, layout, grid, gadgets })
}

/// Structural facts about a compiled directed instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectedStructureReport {
    pub acyclic: bool,
    /// `{s1}`, `V - {s2}`, `{t1}`, `V - {t2}` with their tightness.
    pub terminal_cuts: Vec<(String, Tightness)>,
    /// Every arc between neighbouring columns points right.
    pub column_cuts_directed: bool,
    /// Every arc between neighbouring rows points down.
    pub row_cuts_directed: bool,
    /// Arcs across each column boundary and each row boundary.
    pub column_cut_sizes: Vec<usize>,
    pub row_cut_sizes: Vec<usize>,
    pub problems: Vec<String>,
}

impl DirectedStructureReport {
    pub fn passed(&self) -> bool {
        self.problems.is_empty()
    }
}

pub fn validate_directed(c: &DirectedCompiled) -> Result<DirectedStructureReport> {
    let g = &c.instance.graph;
    let lay = &c.layout;
    let mut problems = Vec::new();
    let acyclic = g.is_acyclic();
    if !acyclic {
        problems.push("the graph has a directed cycle".into());
    }
    let all_but = |x: VertexId| g.vertices().filter(|&v| v != x).collect::<Vec<_>>();
    let mut terminal_cuts = Vec::new();
    for (name, u) in
        [("s1", vec![lay.s1]), ("s2", all_but(lay.s2)), ("t1", vec![lay.t1]), ("t2", all_but(lay.t2))]
    {
        let t = is_tight(&c.instance, &u)?;
        if t.tight != Some(true) {
            problems.push(format!("terminal cut {name} is not tight: {t:?}"));
        }
        terminal_cuts.push((name.to_string(), t));
    }
    let mut directed_along = |cuts: &[Vec<EdgeId>], upto: &dyn Fn(usize) -> Vec<VertexId>, what: &str| {
        let mut ok = true;
        let mut sizes = Vec::new();
        for (k, cut) in cuts.iter().enumerate() {
            let inside = upto(k + 1);
            let mut mask = vec![false; g.vertex_count()];
            for v in inside {
                mask[v.index()] = true;
            }
            for &e in cut {
                if !mask[g.edge(e).tail.index()] || mask[g.edge(e).head.index()] {
                    ok = false;
                    problems.push(format!("{what} boundary {}: an arc points backwards", k + 1));
                }
            }
            sizes.push(cut.len());
        }
        (ok, sizes)
    };
    let (column_cuts_directed, column_cut_sizes) =
        directed_along(&c.grid.cuts.vertical, &|i| c.grid.columns_upto(i), "column");
    let (row_cuts_directed, row_cut_sizes) = directed_along(&c.grid.cuts.horizontal, &|j| c.grid.rows_upto(j), "row");
    Ok(DirectedStructureReport {
        acyclic,
        terminal_cuts,
        column_cuts_directed,
        row_cuts_directed,
        column_cut_sizes,
        row_cut_sizes,
        problems,
    })
}

/// The instance with `t1` merged into `s2` and `t2` into `s1`: demands
/// `s1 → s2` (rows) and `s2 → s1` (columns).
#[derive(Clone, Debug)]
pub struct Identified {
    pub instance: Instance,
    pub s1: VertexId,
    pub s2: VertexId,
    /// Whether the graph without the two merged terminals is acyclic.
    pub acyclic_without_terminals: bool,
}

pub fn identify_terminals(c: &DirectedCompiled) -> Result<Identified> {
    let g = &c.instance.graph;
    let lay = &c.layout;
    let mut b = g.to_builder();
    b.merge_vertices(lay.s2.index(), lay.t1.index())?;
    b.merge_vertices(lay.s1.index(), lay.t2.index())?;
    let h = b.build()?;
    let (s1, s2) = (h.require("s1")?, h.require("s2")?);
    let instance = Instance::new(
        h.clone(),
        vec![
            DemandClass::new(vec![s1], vec![s2], lay.rows as u32).labelled("horizontal"),
            DemandClass::new(vec![s2], vec![s1], lay.columns as u32).labelled("vertical"),
        ],
    )?;
    let mut rest = h.to_builder();
    rest.remove_vertex(s1.index());
    rest.remove_vertex(s2.index());
    let acyclic_without_terminals = rest.build()?.is_acyclic();
    Ok(Identified { instance, s1, s2, acyclic_without_terminals })
}

/// The instance without `t1` and `t2`: an arc from the bottom of each
/// column to the top of the column on its left, and one path from the top
/// of the rightmost column to the bottom of the leftmost.
#[derive(Clone, Debug)]
pub struct Wrapped {
    pub instance: Instance,
    pub wrap_arcs: Vec<EdgeId>,
    pub columns: usize,
}

pub fn corollary_transform(c: &DirectedCompiled) -> Result<Wrapped> {
    let g = &c.instance.graph;
    let lay = &c.layout;
    let mut b = g.to_builder();
    b.remove_vertex(lay.t1.index());
    b.remove_vertex(lay.t2.index());
    let mut wraps = Vec::new();
    for k in 1..lay.columns {
        let e = b.add_edge(lay.column_outlets[k].index(), lay.column_inlets[k - 1].index());
        b.set_edge_label(e, Some(format!("wrap{}", k + 1)));
        wraps.push(e);
    }
    for k in 0..lay.columns {
        b.sort_rotation_geometric(lay.column_outlets[k].index());
        b.sort_rotation_geometric(lay.column_inlets[k].index());
    }
    let h = b.build()?;
    let name = |v: VertexId| h.require(g.name(v));
    let (s1, s2) = (name(lay.s1)?, name(lay.s2)?);
    let from = name(lay.column_inlets[lay.columns - 1])?;
    let to = name(lay.column_outlets[0])?;
    let instance = Instance::new(
        h.clone(),
        vec![
            DemandClass::new(vec![s1], vec![s2], lay.rows as u32).labelled("horizontal"),
            DemandClass::new(vec![from], vec![to], 1).labelled("wrap"),
        ],
    )?;
    let wrap_arcs = h
        .edge_ids()
        .filter(|&e| h.edge(e).label.as_deref().is_some_and(|l| l.starts_with("wrap")))
        .collect();
    Ok(Wrapped { instance, wrap_arcs, columns: lay.columns })
}

/// For each column boundary, the arcs entering the columns to its left.
/// The wrap path has to cross every boundary right to left, so each list
/// must be exactly one wrap arc.
pub fn wrap_cut_check(c: &DirectedCompiled, w: &Wrapped) -> Result<Vec<Tightness>> {
    let h = &w.instance.graph;
    let mut out = Vec::new();
    for i in 1..c.layout.columns {
        let mut u: Vec<VertexId> = Vec::new();
        for v in c.grid.columns_upto(i) {
            u.push(h.require(c.grid.graph.name(v))?);
        }
        u.push(h.require("s1")?);
        let cut = delta(h, &u)?;
        let capacity = cut.in_edges.len() as u64;
        let wraps = cut.in_edges.iter().all(|e| w.wrap_arcs.contains(e));
        let tight = capacity == 1 && wraps;
        out.push(Tightness { capacity, demand: Some(1), slack: Some(capacity as i64 - 1), tight: Some(tight) });
    }
    Ok(out)
}

/// Stub index on a shared side between cells: `Some(k)` is the `k`-th stub
/// of a two-stub side, `None` a single stub.
fn track(two: bool, k: usize) -> usize {
    if two {
        k
    } else {
        0
    }
}

/// Builds the routing of `G` that a satisfying assignment describes.
///
/// Variable `i` sends row `i` through the lower stub pair after its IF
/// when true, the upper when false; in `G₁` this leaves row `2i-1` free
/// for a positive literal and row `2i` for a negative one. Each clause
/// column switches from the `c` to the `b` track at the YES of its first
/// true literal. Band columns follow their variable through IF/LL or
/// TT/VV. Each cell is routed locally by the solver.
pub fn witness_directed(c: &DirectedCompiled, f: &CnfFormula, assignment: &[bool]) -> Result<Routing> {
    let lay = &c.layout;
    let (n, p) = (lay.n, lay.variables);
    if assignment.len() != p || !f.eval(assignment) {
        return Err(Error::Precondition("the assignment does not satisfy the formula".into()));
    }
    let x = |i: usize| assignment[i - 1];
    // Switch row of each clause column in G₁ numbering.
    let mut switch = Vec::with_capacity(n);
    for clause in &f.clauses {
        let l = *clause
            .iter()
            .find(|l| lit_true(**l, assignment))
            .ok_or_else(|| Error::Internal("a satisfied clause without a true literal".into()))?;
        let v = l.unsigned_abs() as usize;
        switch.push(if l > 0 { 2 * v - 1 } else { 2 * v });
    }
    // Stub index across the boundary right of column `b` in row `r`.
    let h_track = |r: usize, b: usize| -> usize {
        if r <= p {
            let tt = n + 2 * p + 1 - r;
            track(b >= r && b < tt, x(r) as usize)
        } else {
            let (ll, vv) = (2 * p + 1 - r, n + r);
            track(b >= ll && b < vv, x(ll) as usize)
        }
    };
    // Stub index across the boundary below row `b` in column `i`.
    let v_track = |i: usize, b: usize| -> usize {
        if i <= p {
            track(b >= i && b < 2 * p + 1 - i, !x(i) as usize)
        } else if i <= p + n {
            let r = switch[i - p - 1];
            (b <= p && 2 * b < r) as usize
        } else {
            let k = i - n - p;
            track(b > p - k && b < p + k, !x(p + 1 - k) as usize)
        }
    };
    let g = &c.instance.graph;
    let mut memo: HashMap<(DirectedCell, [usize; 4]), (Vec<EdgeId>, Vec<EdgeId>)> = HashMap::new();
    let mut local = |cell: DirectedCell, ports: [usize; 4]| -> Result<(Vec<EdgeId>, Vec<EdgeId>)> {
        if let Some(r) = memo.get(&(cell, ports)) {
            return Ok(r.clone());
        }
        let gd = &c.gadgets[&cell];
        let s = &gd.sides;
        let inst = Instance::new(
            gd.graph.clone(),
            vec![
                DemandClass::new(vec![gd.port(&s.top[ports[0]])?], vec![gd.port(&s.bottom[ports[1]])?], 1),
                DemandClass::new(vec![gd.port(&s.left[ports[2]])?], vec![gd.port(&s.right[ports[3]])?], 1),
            ],
        )?;
        let r = solve(&inst, &SearchPolicy::new(Mode::Witness))?;
        if r.status != Status::Sat {
            return Err(Error::Construction(format!("{cell:?} has no routing for stubs {ports:?}")));
        }
        let w = &r.witnesses[0];
        let pick = |class: usize| w.paths.iter().find(|q| q.class == class).map(|q| q.edges.clone()).unwrap();
        let out = (pick(0), pick(1));
        memo.insert((cell, ports), out.clone());
        Ok(out)
    };
    let arc = |a: VertexId, b: VertexId| -> Result<EdgeId> {
        g.leaving(a)
            .find(|&e| g.edge(e).head == b)
            .ok_or_else(|| Error::Internal(format!("no arc {} -> {}", g.name(a), g.name(b))))
    };
    let mut rows: Vec<Vec<EdgeId>> = (0..lay.rows).map(|r| vec![arc(lay.s1, lay.row_entries[r]).unwrap()]).collect();
    let mut cols: Vec<Vec<EdgeId>> =
        (0..lay.columns).map(|i| vec![arc(lay.t1, lay.column_inlets[i]).unwrap()]).collect();
    for j in 1..=lay.rows {
        for i in 1..=lay.columns {
            let cell = lay.cell(i, j);
            let ports = [v_track(i, j - 1), v_track(i, j), h_track(j, i - 1), h_track(j, i)];
            let (vert, horiz) = local(cell, ports)?;
            let view = c.grid.cell(i, j)?;
            let gd = &c.gadgets[&cell];
            extend_path(&mut cols[i - 1], g, view, gd, &vert)?;
            extend_path(&mut rows[j - 1], g, view, gd, &horiz)?;
        }
    }
    let mut paths = Vec::new();
    for (r, mut edges) in rows.into_iter().enumerate() {
        edges.push(arc(lay.row_exits[r], lay.s2)?);
        paths.push(RoutedPath { class: 0, start: lay.s1, edges });
    }
    for (i, mut edges) in cols.into_iter().enumerate() {
        edges.push(arc(lay.column_outlets[i], lay.t2)?);
        paths.push(RoutedPath { class: 1, start: lay.t1, edges });
    }
    Ok(Routing::new(paths).canonical())
}

/// [`witness_directed`], validated against the instance.
pub fn checked_witness_directed(c: &DirectedCompiled, f: &CnfFormula, assignment: &[bool]) -> Result<Routing> {
    let r = witness_directed(c, f, assignment)?;
    let report = validate_routing(&c.instance, &r);
    if !report.is_valid() {
        return Err(Error::Internal(format!("directed witness is invalid: {:?}", report.violations)));
    }
    Ok(r)
}

/// Decides the compiled instance (or a transformed one) with the
/// satisfiability engine.
pub fn decide(inst: &Instance) -> Result<Status> {
    Ok(solve(inst, &SearchPolicy::new(Mode::Decide).engine(Engine::Sat))?.status)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectedStats {
    pub n: usize,
    pub variables: usize,
    pub columns: usize,
    pub rows: usize,
    pub vertices: usize,
    pub arcs: usize,
    pub yes_cells: usize,
}

pub fn directed_stats(c: &DirectedCompiled) -> DirectedStats {
    let lay = &c.layout;
    let yes = lay
        .cells
        .iter()
        .map(|c| match c {
            DirectedCell::Stack { upper, lower } => {
                (*upper == GadgetKind::Yes) as usize + (*lower == GadgetKind::Yes) as usize
            }
            _ => 0,
        })
        .sum();
    DirectedStats {
        n: lay.n,
        variables: lay.variables,
        columns: lay.columns,
        rows: lay.rows,
        vertices: c.instance.graph.vertex_count(),
        arcs: c.instance.graph.edge_count(),
        yes_cells: yes,
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    fn f(vars: u32, clauses: Vec<Vec<i32>>) -> CnfFormula {
        CnfFormula::new(vars, clauses).unwrap()
    }

    #[test]
    fn bands_follow_port_counts() {
        let c = compile_full(&f(2, vec![vec![1, -2], vec![2]])).unwrap();
        let lay = &c.layout;
        assert_eq!((lay.columns, lay.rows), (6, 4));
        use DirectedCell::Single;
        use GadgetKind::*;
        // Column 1 holds IF at row 1 and LL at row 4; NO between.
        assert_eq!(lay.cell(1, 1), Single(If));
        assert_eq!(lay.cell(1, 2), Single(No));
        assert_eq!(lay.cell(1, 4), Single(Ll));
        assert_eq!(lay.cell(2, 1), Single(On));
        assert_eq!(lay.cell(6, 1), Single(Tt));
        assert_eq!(lay.cell(5, 2), Single(Tt));
        assert_eq!(lay.cell(5, 3), Single(Vv));
        assert_eq!(lay.cell(6, 4), Single(Vv));
        assert_eq!(lay.cell(3, 1), DirectedCell::Stack { upper: Yes, lower: No });
        assert_eq!(lay.cell(3, 2), DirectedCell::Stack { upper: No, lower: Yes });
        assert_eq!(lay.cell(4, 2), DirectedCell::Stack { upper: Yes, lower: No });
        assert_eq!(lay.cell(4, 3), DirectedCell::Stack { upper: No, lower: No });
        let rep = validate_directed(&c).unwrap();
        assert!(rep.passed(), "{:?}", rep.problems);
    }

    #[test]
    fn witnesses_validate() {
        for formula in [
            f(1, vec![vec![1]]),
            f(2, vec![vec![1, -2], vec![2]]),
            f(3, vec![vec![1, 2, 3], vec![-1, -2], vec![-3, 2]]),
        ] {
            let c = compile_full(&formula).unwrap();
            for a in formula.satisfying_assignments() {
                checked_witness_directed(&c, &formula, &a).unwrap();
            }
        }
    }

    #[test]
    fn g1_matches_oracle() {
        for formula in [
            f(1, vec![vec![1]]),
            f(1, vec![vec![1], vec![-1]]),
            f(2, vec![vec![1, 2], vec![-1], vec![-2]]),
            f(2, vec![vec![1, 2], vec![-1]]),
        ] {
            assert_eq!(claim1_check(&formula).unwrap(), formula.is_satisfiable(), "{formula:?}");
        }
    }

    #[test]
    fn full_and_transformed_match_oracle() {
        for formula in [f(1, vec![vec![1], vec![-1]]), f(2, vec![vec![1, 2], vec![-1, -2]]), f(2, vec![vec![1], vec![-1, 2]])] {
            let c = compile_full(&formula).unwrap();
            let expect = if formula.is_satisfiable() { Status::Sat } else { Status::Unsat };
            assert_eq!(decide(&c.instance).unwrap(), expect, "{formula:?}");
            let id = identify_terminals(&c).unwrap();
            assert_eq!(id.instance.graph.vertex_count() + 2, c.instance.graph.vertex_count());
            assert!(id.acyclic_without_terminals);
            assert_eq!(decide(&id.instance).unwrap(), expect, "identified {formula:?}");
            let w = corollary_transform(&c).unwrap();
            assert_eq!(w.wrap_arcs.len(), c.layout.columns - 1);
            assert!(wrap_cut_check(&c, &w).unwrap().iter().all(|t| t.tight == Some(true)));
            assert_eq!(decide(&w.instance).unwrap(), expect, "wrapped {formula:?}");
        }
    }
}
