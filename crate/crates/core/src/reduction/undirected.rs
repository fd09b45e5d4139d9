//! The planar undirected reduction: a 3-CNF formula with `n` clauses over
//! `p'` variables becomes a grid of XCH and LIC with `n` columns and
//! `p = 2p'(q+1)` rows, `q = 4(p'+3)n + 2`, plus the terminals `x`, `x'`,
//! `y`, `y'` and the no-path anchors `w_i`, `w'_i`.
//!
//! Variable `v` owns a true-row `1 + 2(v-1)(q+1)` and a false-row
//! `q + 2 + 2(v-1)(q+1)`; cell `(c, r)` is a LIC exactly when `r` is the
//! true-row of a variable occurring positively in clause `c`, or its
//! false-row and the variable occurs negatively. The column, row and
//! variable are kept as three separate parameters throughout.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cnf::{lit_true, CnfFormula};
use crate::cuts::{is_tight, Tightness};
use crate::error::{Error, Result};
use crate::gadgets::{standard, Gadget, GadgetKind, GadgetSet};
use crate::graph::{EdgeId, RotationGraph, VertexId};
use crate::grid::{assemble, CellView, Grid, GridSpec};
use crate::instance::{validate_routing, DemandClass, Instance, RoutedPath, Routing};

use super::templates::{Behavior, CellTemplate, Horizontal, Side, TemplateCache, TemplateKey};

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompileOptions {
    /// Accept formulas outside the stated regime (fewer than three clauses
    /// or variables, clauses of other sizes). The structure is built the
    /// same way, but hardness is only argued for the regime.
    pub relaxed: bool,
}

/// Buffer height `q` and row count `p` for `n` clauses over `vars`
/// variables.
pub fn dimensions(n: usize, vars: usize) -> (usize, usize) {
    let q = 4 * (vars + 3) * n + 2;
    (q, 2 * vars * (q + 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionLayout {
    /// Number of clauses, which is the number of columns.
    pub n: usize,
    /// Number of variables `p'`.
    pub variables: usize,
    pub q: usize,
    /// Number of rows `p`.
    pub p: usize,
    /// `true_rows[v - 1]` for variable `v`.
    pub true_rows: Vec<usize>,
    pub false_rows: Vec<usize>,
    /// LIC cells as `(column, row)`, sorted.
    pub lic_cells: Vec<(usize, usize)>,
    pub x: VertexId,
    pub x_prime: VertexId,
    pub y: VertexId,
    pub y_prime: VertexId,
    pub w: Vec<VertexId>,
    pub w_prime: Vec<VertexId>,
    pub relaxed: bool,
}

impl ReductionLayout {
    pub fn true_row(&self, var: usize) -> usize {
        self.true_rows[var - 1]
    }

    pub fn false_row(&self, var: usize) -> usize {
        self.false_rows[var - 1]
    }

    /// The row left with a single horizontal path under an assignment.
    pub fn chosen_row(&self, var: usize, value: bool) -> usize {
        if value {
            self.true_row(var)
        } else {
            self.false_row(var)
        }
    }
}

#[derive(Clone, Debug)]
pub struct Compiled {
    pub instance: Instance,
    pub layout: ReductionLayout,
    /// The grid with terminals; `grid.graph` is the instance graph.
    pub grid: Grid,
}

fn check_regime(f: &CnfFormula, opts: CompileOptions) -> Result<()> {
    if f.clauses.is_empty() || f.num_vars == 0 {
        return Err(Error::Input("the formula needs at least one clause and one variable".into()));
    }
    if opts.relaxed {
        return Ok(());
    }
    if f.clauses.len() < 3 || f.num_vars < 3 {
        return Err(Error::Precondition(format!(
            "{} clauses over {} variables; at least 3 of each are required (use relaxed mode)",
            f.clauses.len(),
            f.num_vars
        )));
    }
    if let Some((i, c)) = f.clauses.iter().enumerate().find(|(_, c)| c.len() != 3) {
        return Err(Error::Precondition(format!("clause {} has {} literals, expected 3", i + 1, c.len())));
    }
    Ok(())
}

/// Cell kinds of the grid.
pub fn layout_spec(f: &CnfFormula) -> (GridSpec, Vec<usize>, Vec<usize>, usize) {
    let n = f.clauses.len();
    let vars = f.num_vars as usize;
    let (q, p) = dimensions(n, vars);
    let true_rows: Vec<usize> = (1..=vars).map(|v| 1 + 2 * (v - 1) * (1 + q)).collect();
    let false_rows: Vec<usize> = (1..=vars).map(|v| q + 2 + 2 * (v - 1) * (1 + q)).collect();
    let spec = GridSpec::from_fn(n, p, |c, r| {
        let lic = (1..=vars).any(|v| {
            (r == true_rows[v - 1] && f.occurs(v as u32, true, c - 1))
                || (r == false_rows[v - 1] && f.occurs(v as u32, false, c - 1))
        });
        if lic {
            GadgetKind::Lic
        } else {
            GadgetKind::Xch
        }
    });
    (spec, true_rows, false_rows, q)
}

pub fn compile(f: &CnfFormula, opts: CompileOptions) -> Result<Compiled> {
    compile_with(f, opts, &GadgetSet::standard())
}

pub fn compile_with(f: &CnfFormula, opts: CompileOptions, set: &GadgetSet) -> Result<Compiled> {
    check_regime(f, opts)?;
    let n = f.clauses.len();
    let vars = f.num_vars as usize;
    let (spec, true_rows, false_rows, q) = layout_spec(f);
    let p = spec.rows;
    let mut gb = assemble(&spec, set)?;
    let b = &mut gb.builder;
    let pos = |b: &crate::graph::GraphBuilder, vs: &[usize]| -> (f64, f64, f64, f64) {
        let ps: Vec<(f64, f64)> = vs.iter().filter_map(|&v| b.position(v)).collect();
        let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for (x, y) in ps {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        (x0, x1, y0, y1)
    };
    let (tx0, tx1, ty, _) = pos(b, &gb.top);
    let (_, _, by, _) = pos(b, &gb.bottom);
    let (lx, _, ly0, ly1) = pos(b, &gb.left);
    let (_, rx, _, _) = pos(b, &gb.right);
    let x = b.add_vertex("x", Some(((tx0 + tx1) / 2.0, ty + 6.0)));
    let xp = b.add_vertex("x'", Some(((tx0 + tx1) / 2.0, by - 6.0)));
    let y = b.add_vertex("y", Some((lx - 12.0, (ly0 + ly1) / 2.0)));
    let yp = b.add_vertex("y'", Some((rx + 12.0, (ly0 + ly1) / 2.0)));
    // Vertical terminals and the parity edges.
    for k in 0..n {
        let t = &gb.top[4 * k..4 * k + 4];
        let bo = &gb.bottom[4 * k..4 * k + 4];
        b.add_edge(x, t[0]);
        b.add_edge(x, t[1]);
        b.add_edge(bo[2], xp);
        b.add_edge(bo[3], xp);
        b.add_edge(t[2], t[3]);
        b.add_edge(bo[0], bo[1]);
    }
    // No-path anchors.
    let mut w = Vec::with_capacity(vars);
    let mut wp = Vec::with_capacity(vars);
    let mut anchored = vec![false; gb.left.len()];
    for v in 1..=vars {
        let lo = 4 * (v - 1) * (q + 1) + 1;
        let hi = lo + 2 * q + 3;
        let (_, _, a0, a1) = pos(b, &gb.left[lo - 1..hi]);
        let wi = b.add_vertex(&format!("w{v}"), Some((lx - 6.0, (a0 + a1) / 2.0)));
        let wpi = b.add_vertex(&format!("w'{v}"), Some((rx + 6.0, (a0 + a1) / 2.0)));
        for j in lo..=hi {
            b.add_edge(wi, gb.left[j - 1]);
            b.add_edge(gb.right[j - 1], wpi);
            anchored[j - 1] = true;
        }
        for _ in 0..2 * q + 3 {
            b.add_edge(y, wi);
            b.add_edge(wpi, yp);
        }
        w.push(wi);
        wp.push(wpi);
    }
    for (j, &a) in anchored.iter().enumerate() {
        if !a {
            b.add_edge(y, gb.left[j]);
            b.add_edge(gb.right[j], yp);
        }
    }
    let mut touched: Vec<usize> = vec![x, xp, y, yp];
    touched.extend(&w);
    touched.extend(&wp);
    touched.extend(gb.top.iter().chain(&gb.bottom).chain(&gb.left).chain(&gb.right));
    for v in touched {
        b.sort_rotation_geometric(v);
    }
    let grid = gb.finish(&spec)?;
    let g = &grid.graph;
    let id = |name: &str| g.require(name);
    let (x, xp, y, yp) = (id("x")?, id("x'")?, id("y")?, id("y'")?);
    let w = (1..=vars).map(|v| id(&format!("w{v}"))).collect::<Result<Vec<_>>>()?;
    let wp = (1..=vars).map(|v| id(&format!("w'{v}"))).collect::<Result<Vec<_>>>()?;
    let demands = vec![
        DemandClass::new(vec![x], vec![xp], 2 * n as u32).labelled("vertical"),
        DemandClass::new(vec![y], vec![yp], (2 * p - vars) as u32).labelled("horizontal"),
    ];
    let instance = Instance::new(g.clone(), demands)?;
    let mut lic_cells: Vec<(usize, usize)> = Vec::new();
    for r in true_rows.iter().chain(&false_rows) {
        for c in 1..=n {
            if spec.kind(c, *r)? == GadgetKind::Lic {
                lic_cells.push((c, *r));
            }
        }
    }
    lic_cells.sort();
    let layout = ReductionLayout {
        n,
        variables: vars,
        q,
        p,
        true_rows,
        false_rows,
        lic_cells,
        x,
        x_prime: xp,
        y,
        y_prime: yp,
        w,
        w_prime: wp,
        relaxed: opts.relaxed,
    };
    Ok(Compiled { instance, layout, grid })
}

/// Outcome of the structural checks on a compiled instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureReport {
    /// Vertices of odd degree once the demand edges are added.
    pub odd_vertices: Vec<VertexId>,
    pub odd_set_matches: bool,
    /// `δ(x)`, `δ(x')`, `δ(y)`, `δ(y')`.
    pub terminal_cuts: Vec<(String, Tightness)>,
    /// `|V_i|` for every vertical cut.
    pub vertical_cut_sizes: Vec<usize>,
    /// Horizontal paths plus no-paths that must cross every vertical cut.
    pub vertical_cut_demand: usize,
    pub lic_count: usize,
    pub literal_occurrences: usize,
    pub problems: Vec<String>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.problems.is_empty()
    }
}

pub fn validate_structure(c: &Compiled, f: &CnfFormula) -> Result<StructureReport> {
    let inst = &c.instance;
    let g = &inst.graph;
    let lay = &c.layout;
    let mut problems = Vec::new();
    // (a) parity of G + H
    let mut extra = vec![0usize; g.vertex_count()];
    for d in &inst.demands {
        for v in d.sources.iter().chain(&d.sinks) {
            extra[v.index()] += d.count as usize;
        }
    }
    let odd_vertices: Vec<VertexId> = g.vertices().filter(|v| (g.degree(*v) + extra[v.index()]) % 2 == 1).collect();
    let expected: BTreeSet<VertexId> = lay.w.iter().chain(&lay.w_prime).copied().collect();
    let odd_set_matches = odd_vertices.iter().copied().collect::<BTreeSet<_>>() == expected;
    if !odd_set_matches {
        problems.push(format!("{} odd vertices, expected exactly W and W'", odd_vertices.len()));
    }
    // (b) terminal cuts
    let mut terminal_cuts = Vec::new();
    for (name, v) in [("x", lay.x), ("x'", lay.x_prime), ("y", lay.y), ("y'", lay.y_prime)] {
        let t = is_tight(inst, &[v])?;
        if t.tight != Some(true) {
            problems.push(format!("δ({name}) is not tight: {t:?}"));
        }
        terminal_cuts.push((name.to_string(), t));
    }
    // (c) vertical cuts against horizontal paths plus one no-path per variable
    let vertical_cut_sizes: Vec<usize> = c.grid.cuts.vertical.iter().map(|v| v.len()).collect();
    let vertical_cut_demand = inst.demands[1].count as usize + lay.w.len();
    for (i, &s) in vertical_cut_sizes.iter().enumerate() {
        if s != 2 * lay.p || s != vertical_cut_demand {
            problems.push(format!("V_{} has {s} edges for {vertical_cut_demand} crossing paths", i + 1));
        }
    }
    // (d) one LIC per literal occurrence
    let lic_count = c.grid.spec.count(GadgetKind::Lic);
    let literal_occurrences: usize =
        f.clauses.iter().map(|cl| cl.iter().collect::<BTreeSet<_>>().len()).sum();
    if lic_count != literal_occurrences {
        problems.push(format!("{lic_count} LIC cells for {literal_occurrences} literal occurrences"));
    }
    if !lay.relaxed && lic_count != 3 * lay.n {
        problems.push(format!("{lic_count} LIC cells, expected 3n = {}", 3 * lay.n));
    }
    Ok(StructureReport {
        odd_vertices,
        odd_set_matches,
        terminal_cuts,
        vertical_cut_sizes,
        vertical_cut_demand,
        lic_count,
        literal_occurrences,
        problems,
    })
}

/// The grid edge that a gadget edge became inside a cell. Every gadget edge
/// has an interior endpoint, whose rotation slots survive stub fusion.
pub(super) fn cell_edge(g: &RotationGraph, cell: &CellView, gd: &Gadget, e: EdgeId) -> Result<EdgeId> {
    let ed = gd.graph.edge(e);
    let u = if gd.is_port(ed.tail) { ed.head } else { ed.tail };
    let gv = cell.vertex(gd.graph.name(u))?;
    Ok(g.rotation(gv)[gd.graph.slot(e, u)])
}

/// Appends mapped local edges, dropping the fused edge shared with the
/// previous cell.
pub(super) fn extend_path(path: &mut Vec<EdgeId>, g: &RotationGraph, cell: &CellView, gd: &Gadget, local: &[EdgeId]) -> Result<()> {
    for (k, &e) in local.iter().enumerate() {
        let ge = cell_edge(g, cell, gd, e)?;
        if k == 0 && path.last() == Some(&ge) {
            continue;
        }
        path.push(ge);
    }
    Ok(())
}

/// Chooses single-path stubs along a row so that consecutive templates
/// chain; returns one key per column.
fn single_row_keys(
    cache: &TemplateCache,
    kinds: &[GadgetKind],
    entries: &[Side],
    behaviors: &[Behavior],
) -> Option<Vec<TemplateKey>> {
    fn go(
        cache: &TemplateCache,
        kinds: &[GadgetKind],
        entries: &[Side],
        behaviors: &[Behavior],
        c: usize,
        stub: u8,
        acc: &mut Vec<TemplateKey>,
    ) -> bool {
        if c == kinds.len() {
            return true;
        }
        for to in [stub, 3 - stub] {
            let key = TemplateKey {
                kind: kinds[c],
                horizontal: Horizontal::One { from: stub, to },
                entry: entries[c],
                behavior: behaviors[c],
            };
            if cache.get(&key).is_some() {
                acc.push(key);
                if go(cache, kinds, entries, behaviors, c + 1, to, acc) {
                    return true;
                }
                acc.pop();
            }
        }
        false
    }
    for start in [1u8, 2] {
        let mut acc = Vec::new();
        if go(cache, kinds, entries, behaviors, 0, start, &mut acc) {
            return Some(acc);
        }
    }
    None
}

/// The keep row of each column: the row of the first true literal of the
/// column's clause.
pub fn keep_rows(lay: &ReductionLayout, f: &CnfFormula, assignment: &[bool]) -> Result<Vec<usize>> {
    f.clauses
        .iter()
        .enumerate()
        .map(|(i, cl)| {
            let l = cl
                .iter()
                .find(|&&l| lit_true(l, assignment))
                .ok_or_else(|| Error::Input(format!("clause {} is not satisfied", i + 1)))?;
            let v = l.unsigned_abs() as usize;
            Ok(if *l > 0 { lay.true_row(v) } else { lay.false_row(v) })
        })
        .collect()
}

/// A routing of the compiled instance built from a satisfying assignment:
/// one horizontal path in each chosen row, two elsewhere, vertical paths
/// shifted in every cell but one keep cell per column.
pub fn witness(c: &Compiled, f: &CnfFormula, assignment: &[bool]) -> Result<Routing> {
    witness_with(c, f, assignment, TemplateCache::standard())
}

pub fn witness_with(c: &Compiled, f: &CnfFormula, assignment: &[bool], cache: &TemplateCache) -> Result<Routing> {
    let lay = &c.layout;
    if assignment.len() != lay.variables {
        return Err(Error::Input(format!("{} values for {} variables", assignment.len(), lay.variables)));
    }
    if !f.eval(assignment) {
        return Err(Error::Input("the assignment does not satisfy the formula".into()));
    }
    let keep = keep_rows(lay, f, assignment)?;
    let spec = &c.grid.spec;
    let (n, p) = (lay.n, lay.p);
    let single: BTreeSet<usize> = (1..=lay.variables).map(|v| lay.chosen_row(v, assignment[v - 1])).collect();
    // Vertical side at the top of every cell.
    let mut entry = vec![vec![Side::Left; p + 1]; n + 1];
    for col in 1..=n {
        for r in 1..p {
            let s = entry[col][r];
            entry[col][r + 1] = if r == keep[col - 1] { s } else { s.flip() };
        }
    }
    // Template keys per row.
    let rows: Vec<Vec<TemplateKey>> = (1..=p)
        .into_par_iter()
        .map(|r| {
            let kinds: Vec<GadgetKind> = (1..=n).map(|col| spec.kind(col, r)).collect::<Result<_>>()?;
            let entries: Vec<Side> = (1..=n).map(|col| entry[col][r]).collect();
            let behaviors: Vec<Behavior> =
                (1..=n).map(|col| if keep[col - 1] == r { Behavior::Keep } else { Behavior::Shift }).collect();
            if single.contains(&r) {
                single_row_keys(cache, &kinds, &entries, &behaviors)
                    .ok_or_else(|| Error::Construction(format!("no chaining single-path templates in row {r}")))
            } else {
                (0..n)
                    .map(|k| {
                        let key = TemplateKey {
                            kind: kinds[k],
                            horizontal: Horizontal::Two,
                            entry: entries[k],
                            behavior: behaviors[k],
                        };
                        cache
                            .get(&key)
                            .map(|_| key)
                            .ok_or_else(|| Error::Construction(format!("no template {key:?} at ({},{r})", k + 1)))
                    })
                    .collect()
            }
        })
        .collect::<Result<_>>()?;
    let g = &c.grid.graph;
    let tpl = |col: usize, r: usize| -> &CellTemplate { cache.get(&rows[r - 1][col - 1]).expect("checked above") };
    let gadget = |col: usize, r: usize| -> Result<&Gadget> { Ok(standard(spec.kind(col, r)?)) };
    let edge_between = |a: VertexId, b: VertexId| -> Result<EdgeId> {
        g.rotation(a)
            .iter()
            .copied()
            .find(|&e| g.edge(e).other(a) == b)
            .ok_or_else(|| Error::Internal(format!("no edge {}-{}", g.name(a), g.name(b))))
    };
    let mut paths = Vec::new();
    // Horizontal paths, row by row.
    let mut anchor_edges: Vec<Vec<EdgeId>> = Vec::new();
    let mut anchor_out: Vec<Vec<EdgeId>> = Vec::new();
    for (wi, wpi) in lay.w.iter().zip(&lay.w_prime) {
        anchor_edges.push(g.rotation(*wi).iter().copied().filter(|&e| g.edge(e).other(*wi) == lay.y).collect());
        anchor_out.push(g.rotation(*wpi).iter().copied().filter(|&e| g.edge(e).other(*wpi) == lay.y_prime).collect());
    }
    for r in 1..=p {
        let first = tpl(1, r);
        for lp in &first.horizontal {
            let cell = c.grid.cell(1, r)?;
            let stub = cell.vertex(&lp.from)?;
            let mut edges = Vec::new();
            // the stub's outer neighbour is y or an anchor w_i
            let outer = g
                .rotation(stub)
                .iter()
                .map(|&e| g.edge(e).other(stub))
                .find(|&v| v == lay.y || lay.w.contains(&v))
                .ok_or_else(|| Error::Internal(format!("stub {} has no terminal", g.name(stub))))?;
            if outer == lay.y {
                edges.push(edge_between(lay.y, stub)?);
            } else {
                let i = lay.w.iter().position(|&v| v == outer).unwrap();
                let e = anchor_edges[i].pop().ok_or_else(|| Error::Internal("anchor edges exhausted".into()))?;
                edges.push(e);
                edges.push(edge_between(outer, stub)?);
            }
            let mut to = lp.to.clone();
            extend_path(&mut edges, g, cell, gadget(1, r)?, &lp.edges)?;
            for col in 2..=n {
                let t = tpl(col, r);
                let from = to.replace("t'", "t");
                let next = t
                    .horizontal
                    .iter()
                    .find(|q| q.from == from)
                    .ok_or_else(|| Error::Internal(format!("row {r}: nothing continues at {from} in column {col}")))?;
                extend_path(&mut edges, g, c.grid.cell(col, r)?, gadget(col, r)?, &next.edges)?;
                to = next.to.clone();
            }
            let last = c.grid.cell(n, r)?.vertex(&to)?;
            let outer = g
                .rotation(last)
                .iter()
                .map(|&e| g.edge(e).other(last))
                .find(|&v| v == lay.y_prime || lay.w_prime.contains(&v))
                .ok_or_else(|| Error::Internal(format!("stub {} has no terminal", g.name(last))))?;
            if outer == lay.y_prime {
                edges.push(edge_between(last, lay.y_prime)?);
            } else {
                let i = lay.w_prime.iter().position(|&v| v == outer).unwrap();
                edges.push(edge_between(last, outer)?);
                edges.push(anchor_out[i].pop().ok_or_else(|| Error::Internal("anchor edges exhausted".into()))?);
            }
            paths.push(RoutedPath { class: 1, start: lay.y, edges });
        }
    }
    // Vertical paths, column by column.
    for col in 1..=n {
        for lp in &tpl(col, 1).vertical {
            let cell = c.grid.cell(col, 1)?;
            let stub = cell.vertex(&lp.from)?;
            let mut edges = vec![edge_between(lay.x, stub)?];
            extend_path(&mut edges, g, cell, gadget(col, 1)?, &lp.edges)?;
            let mut to = lp.to.clone();
            for r in 2..=p {
                let from = to.replace("s'", "s");
                let next = tpl(col, r)
                    .vertical
                    .iter()
                    .find(|q| q.from == from)
                    .ok_or_else(|| Error::Internal(format!("column {col}: nothing continues at {from} in row {r}")))?;
                extend_path(&mut edges, g, c.grid.cell(col, r)?, gadget(col, r)?, &next.edges)?;
                to = next.to.clone();
            }
            let last = c.grid.cell(col, p)?.vertex(&to)?;
            edges.push(edge_between(last, lay.x_prime)?);
            paths.push(RoutedPath { class: 0, start: lay.x, edges });
        }
    }
    Ok(Routing::new(paths))
}

/// Builds a witness and checks it against the instance.
pub fn checked_witness(c: &Compiled, f: &CnfFormula, assignment: &[bool]) -> Result<Routing> {
    let r = witness(c, f, assignment)?;
    let rep = validate_routing(&c.instance, &r);
    if !rep.is_valid() {
        return Err(Error::Internal(format!(
            "witness has {} violations, first: {:?}",
            rep.violations.len(),
            rep.violations[0]
        )));
    }
    Ok(r)
}

/// Layout numbers for reporting.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompileStats {
    pub n: usize,
    pub variables: usize,
    pub q: usize,
    pub p: usize,
    pub vertices: usize,
    pub edges: usize,
    pub demands: Vec<u32>,
    pub lic_cells: usize,
}

pub fn stats(c: &Compiled) -> CompileStats {
    CompileStats {
        n: c.layout.n,
        variables: c.layout.variables,
        q: c.layout.q,
        p: c.layout.p,
        vertices: c.instance.graph.vertex_count(),
        edges: c.instance.graph.edge_count(),
        demands: c.instance.demands.iter().map(|d| d.count).collect(),
        lic_cells: c.layout.lic_cells.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f333() -> CnfFormula {
        CnfFormula::new(3, vec![vec![1, 2, 3], vec![1, 2, 3], vec![1, 2, 3]]).unwrap()
    }

    #[test]
    fn dimensions_for_three_by_three() {
        assert_eq!(dimensions(3, 3), (74, 450));
    }

    #[test]
    fn strict_regime_is_enforced() {
        let small = CnfFormula::new(2, vec![vec![1, 2]]).unwrap();
        assert!(compile(&small, CompileOptions::default()).is_err());
        assert!(compile(&small, CompileOptions { relaxed: true }).is_ok());
    }

    #[test]
    fn lic_rule_and_degrees() {
        let f = CnfFormula::new(3, vec![vec![-1, 2, 3], vec![1, -2, 3], vec![1, 2, -3]]).unwrap();
        let c = compile(&f, CompileOptions::default()).unwrap();
        let lay = &c.layout;
        assert!(lay.lic_cells.contains(&(2, 1)));
        assert!(lay.lic_cells.contains(&(1, lay.false_row(1))));
        assert_eq!(lay.lic_cells.len(), 9);
        let g = &c.instance.graph;
        assert_eq!(g.degree(lay.y), 2 * lay.p - 3);
        assert_eq!(g.degree(lay.x), 6);
        let rep = validate_structure(&c, &f).unwrap();
        assert!(rep.passed(), "{:?}", rep.problems);
    }

    #[test]
    fn witness_validates_in_relaxed_mode() {
        let f = CnfFormula::new(2, vec![vec![1, -2], vec![-1, 2]]).unwrap();
        let c = compile(&f, CompileOptions { relaxed: true }).unwrap();
        for a in f.satisfying_assignments() {
            checked_witness(&c, &f, &a).unwrap();
        }
        assert!(witness(&c, &f, &[true, false]).is_err());
    }

    #[test]
    fn witness_validates_at_full_scale() {
        let f = f333();
        let c = compile(&f, CompileOptions::default()).unwrap();
        let r = checked_witness(&c, &f, &[true, true, true]).unwrap();
        assert_eq!(r.paths.iter().filter(|p| p.class == 1).count(), 2 * c.layout.p - 3);
        let keeps = keep_rows(&c.layout, &f, &[true, true, true]).unwrap();
        assert_eq!(keeps.len(), 3);
    }
}
