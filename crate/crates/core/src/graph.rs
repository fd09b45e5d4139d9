//! Multigraphs with a rotation system.
//!
//! A [`RotationGraph`] is either wholly directed or wholly undirected, may
//! carry parallel edges, never carries loops, and stores at every vertex the
//! cyclic order of its incident edges. A subset of the vertices is marked
//! non-crossing: paths may meet there but their edge pairs must not
//! interleave.
//!
//! Graphs are immutable once built; all editing happens in [`GraphBuilder`].

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An edge or arc. For undirected graphs `tail`/`head` are just the two
/// endpoints in the order they were declared.
#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub tail: VertexId,
    pub head: VertexId,
    pub label: Option<String>,
}

impl Edge {
    /// The endpoint opposite to `v`.
    #[inline]
    pub fn other(&self, v: VertexId) -> VertexId {
        if self.tail == v {
            self.head
        } else {
            self.tail
        }
    }

    #[inline]
    pub fn is_incident(&self, v: VertexId) -> bool {
        self.tail == v || self.head == v
    }
}

#[derive(Clone, Debug)]
pub struct RotationGraph {
    directed: bool,
    names: Vec<String>,
    labels: Vec<Option<String>>,
    positions: Vec<Option<(f64, f64)>>,
    edges: Vec<Edge>,
    rotation: Vec<Vec<EdgeId>>,
    noncrossing: Vec<bool>,
    index: HashMap<String, VertexId>,
    /// Position of each edge in the rotation of its tail and of its head.
    slot: Vec<[u32; 2]>,
}

impl PartialEq for RotationGraph {
    fn eq(&self, other: &Self) -> bool {
        self.directed == other.directed
            && self.names == other.names
            && self.labels == other.labels
            && self.positions == other.positions
            && self.edges == other.edges
            && self.rotation == other.rotation
            && self.noncrossing == other.noncrossing
    }
}

impl RotationGraph {
    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.names.len() as u32).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v.index()]
    }

    pub fn label(&self, v: VertexId) -> Option<&str> {
        self.labels[v.index()].as_deref()
    }

    pub fn position(&self, v: VertexId) -> Option<(f64, f64)> {
        self.positions[v.index()]
    }

    /// Looks a vertex up by its stable name.
    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.index.get(name).copied()
    }

    /// Like [`vertex`](Self::vertex) but reports unknown names as input errors.
    pub fn require(&self, name: &str) -> Result<VertexId> {
        self.vertex(name)
            .ok_or_else(|| Error::Input(format!("unknown vertex `{name}`")))
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        v.index() < self.names.len()
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        e.index() < self.edges.len()
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.index()]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Cyclic order of the edges incident to `v`.
    pub fn rotation(&self, v: VertexId) -> &[EdgeId] {
        &self.rotation[v.index()]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rotation[v.index()].len()
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        if !self.directed {
            return self.degree(v);
        }
        self.rotation(v).iter().filter(|&&e| self.edge(e).tail == v).count()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        if !self.directed {
            return self.degree(v);
        }
        self.rotation(v).iter().filter(|&&e| self.edge(e).head == v).count()
    }

    pub fn is_noncrossing(&self, v: VertexId) -> bool {
        self.noncrossing[v.index()]
    }

    pub fn noncrossing_vertices(&self) -> Vec<VertexId> {
        self.vertices().filter(|&v| self.is_noncrossing(v)).collect()
    }

    /// Position of `e` in the rotation at `v`. Panics if `e` is not incident to `v`.
    #[inline]
    pub fn slot(&self, e: EdgeId, v: VertexId) -> usize {
        let edge = &self.edges[e.index()];
        if edge.tail == v {
            self.slot[e.index()][0] as usize
        } else {
            debug_assert_eq!(edge.head, v);
            self.slot[e.index()][1] as usize
        }
    }

    /// Edges that can be traversed away from `v` (all incident edges when undirected).
    pub fn leaving(&self, v: VertexId) -> impl Iterator<Item = EdgeId> + '_ {
        self.rotation(v)
            .iter()
            .copied()
            .filter(move |&e| !self.directed || self.edges[e.index()].tail == v)
    }

    /// Kahn's algorithm; `None` for undirected graphs or when a directed cycle exists.
    pub fn topological_order(&self) -> Option<Vec<VertexId>> {
        if !self.directed {
            return None;
        }
        let mut indeg: Vec<usize> = self.vertices().map(|v| self.in_degree(v)).collect();
        let mut stack: Vec<VertexId> = self.vertices().filter(|v| indeg[v.index()] == 0).collect();
        stack.reverse();
        let mut order = Vec::with_capacity(self.vertex_count());
        while let Some(v) = stack.pop() {
            order.push(v);
            for e in self.leaving(v) {
                let w = self.edge(e).head;
                indeg[w.index()] -= 1;
                if indeg[w.index()] == 0 {
                    stack.push(w);
                }
            }
        }
        (order.len() == self.vertex_count()).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Copies the graph into a builder for further editing.
    pub fn to_builder(&self) -> GraphBuilder {
        let mut b = GraphBuilder::new(self.directed);
        for v in self.vertices() {
            let i = b.add_vertex(self.name(v), self.position(v));
            b.vertices[i].label = self.labels[v.index()].clone();
            b.vertices[i].noncrossing = self.is_noncrossing(v);
        }
        for e in &self.edges {
            let i = b.add_edge(e.tail.index(), e.head.index());
            b.edges[i].label = e.label.clone();
        }
        for v in self.vertices() {
            b.vertices[v.index()].rotation = self.rotation(v).iter().map(|e| e.index()).collect();
        }
        b
    }
}

#[derive(Clone, Debug)]
pub(crate) struct BuilderVertex {
    pub name: String,
    pub label: Option<String>,
    pub pos: Option<(f64, f64)>,
    pub rotation: Vec<usize>,
    pub noncrossing: bool,
    pub alive: bool,
}

#[derive(Clone, Debug)]
pub(crate) struct BuilderEdge {
    pub a: usize,
    pub b: usize,
    pub label: Option<String>,
    pub alive: bool,
}

/// Mutable staging area for a [`RotationGraph`].
///
/// Indices handed out by the builder are builder-local; [`build`](Self::build)
/// compacts away removed vertices and edges, preserving relative order.
#[derive(Clone, Debug)]
pub struct GraphBuilder {
    directed: bool,
    pub(crate) vertices: Vec<BuilderVertex>,
    pub(crate) edges: Vec<BuilderEdge>,
    index: HashMap<String, usize>,
}

impl GraphBuilder {
    pub fn new(directed: bool) -> Self {
        GraphBuilder {
            directed,
            vertices: Vec::new(),
            edges: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn add_vertex(&mut self, name: &str, pos: Option<(f64, f64)>) -> usize {
        let i = self.vertices.len();
        self.vertices.push(BuilderVertex {
            name: name.to_string(),
            label: None,
            pos,
            rotation: Vec::new(),
            noncrossing: false,
            alive: true,
        });
        // Duplicate names are reported by `build`.
        self.index.entry(name.to_string()).or_insert(i);
        i
    }

    /// Appends an edge (an arc `a → b` when directed) to both rotations.
    pub fn add_edge(&mut self, a: usize, b: usize) -> usize {
        let i = self.edges.len();
        self.edges.push(BuilderEdge { a, b, label: None, alive: true });
        self.vertices[a].rotation.push(i);
        self.vertices[b].rotation.push(i);
        i
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied().filter(|&i| self.vertices[i].alive)
    }

    pub fn name(&self, v: usize) -> &str {
        &self.vertices[v].name
    }

    pub fn position(&self, v: usize) -> Option<(f64, f64)> {
        self.vertices[v].pos
    }

    pub fn set_label(&mut self, v: usize, label: Option<String>) {
        self.vertices[v].label = label;
    }

    pub fn set_edge_label(&mut self, e: usize, label: Option<String>) {
        self.edges[e].label = label;
    }

    pub fn edge_label(&self, e: usize) -> Option<&str> {
        self.edges[e].label.as_deref()
    }

    pub fn set_noncrossing(&mut self, v: usize, flag: bool) {
        self.vertices[v].noncrossing = flag;
    }

    pub fn is_noncrossing(&self, v: usize) -> bool {
        self.vertices[v].noncrossing
    }

    pub fn rename(&mut self, v: usize, name: &str) {
        if self.index.get(&self.vertices[v].name) == Some(&v) {
            self.index.remove(&self.vertices[v].name);
        }
        self.vertices[v].name = name.to_string();
        self.index.entry(name.to_string()).or_insert(v);
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.vertices[v].rotation
    }

    pub fn set_rotation(&mut self, v: usize, rotation: Vec<usize>) {
        self.vertices[v].rotation = rotation;
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        (self.edges[e].a, self.edges[e].b)
    }

    pub fn other(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.endpoints(e);
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_alive(&self, v: usize) -> bool {
        self.vertices[v].alive
    }

    /// Sorts every rotation counterclockwise by the direction of each edge in
    /// the vertex coordinates, starting from the positive x axis. Vertices
    /// lacking a position (or neighbours lacking one) keep insertion order
    /// for those edges, after the positioned ones.
    pub fn sort_rotations_geometric(&mut self) {
        for v in 0..self.vertices.len() {
            self.sort_rotation_geometric(v);
        }
    }

    pub fn sort_rotation_geometric(&mut self, v: usize) {
        let Some((x, y)) = self.vertices[v].pos else { return };
        let mut keyed: Vec<(f64, usize, usize)> = self.vertices[v]
            .rotation
            .iter()
            .enumerate()
            .map(|(k, &e)| {
                let w = self.other(e, v);
                let angle = match self.vertices[w].pos {
                    Some((wx, wy)) => {
                        let a = (wy - y).atan2(wx - x);
                        if a < 0.0 {
                            a + std::f64::consts::TAU
                        } else {
                            a
                        }
                    }
                    None => f64::INFINITY,
                };
                (angle, k, e)
            })
            .collect();
        keyed.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.cmp(&q.1)));
        self.vertices[v].rotation = keyed.into_iter().map(|t| t.2).collect();
    }

    pub fn remove_edge(&mut self, e: usize) {
        if !self.edges[e].alive {
            return;
        }
        self.edges[e].alive = false;
        let (a, b) = self.endpoints(e);
        self.vertices[a].rotation.retain(|&x| x != e);
        self.vertices[b].rotation.retain(|&x| x != e);
    }

    /// Removes a vertex together with its incident edges.
    pub fn remove_vertex(&mut self, v: usize) {
        for e in self.vertices[v].rotation.clone() {
            self.remove_edge(e);
        }
        self.vertices[v].alive = false;
        if self.index.get(&self.vertices[v].name) == Some(&v) {
            self.index.remove(&self.vertices[v].name);
        }
    }

    /// Fuses two degree-1 stubs into one edge between their neighbours.
    ///
    /// The new edge takes over the rotation slot of each old stub edge. For
    /// directed graphs the stubs must be an out-stub (`u → stub_a`) and an
    /// in-stub (`stub_b → w`); the result is the arc `u → w`. Returns the new
    /// edge index.
    pub fn fuse_stubs(&mut self, stub_a: usize, stub_b: usize) -> Result<usize> {
        let ea = self.single_edge(stub_a)?;
        let eb = self.single_edge(stub_b)?;
        let u = self.other(ea, stub_a);
        let w = self.other(eb, stub_b);
        if self.directed {
            let ok = self.edges[ea].b == stub_a && self.edges[eb].a == stub_b;
            if !ok {
                return Err(Error::Construction(format!(
                    "cannot fuse `{}` with `{}`: arc directions do not chain",
                    self.vertices[stub_a].name, self.vertices[stub_b].name
                )));
            }
        }
        let label = self.edges[ea].label.clone().or_else(|| self.edges[eb].label.clone());
        let ne = self.edges.len();
        self.edges.push(BuilderEdge { a: u, b: w, label, alive: true });
        for x in self.vertices[u].rotation.iter_mut() {
            if *x == ea {
                *x = ne;
            }
        }
        for x in self.vertices[w].rotation.iter_mut() {
            if *x == eb {
                *x = ne;
            }
        }
        self.edges[ea].alive = false;
        self.edges[eb].alive = false;
        self.vertices[stub_a].rotation.clear();
        self.vertices[stub_b].rotation.clear();
        self.remove_vertex(stub_a);
        self.remove_vertex(stub_b);
        Ok(ne)
    }

    /// Moves every edge of `drop` onto `keep` (appended to `keep`'s rotation)
    /// and deletes `drop`. Fails if that would create a loop.
    pub fn merge_vertices(&mut self, keep: usize, drop: usize) -> Result<()> {
        let moved = self.vertices[drop].rotation.clone();
        for &e in &moved {
            if self.other(e, drop) == keep {
                return Err(Error::Construction(format!(
                    "merging `{}` into `{}` would create a loop",
                    self.vertices[drop].name, self.vertices[keep].name
                )));
            }
        }
        for &e in &moved {
            if self.edges[e].a == drop {
                self.edges[e].a = keep;
            }
            if self.edges[e].b == drop {
                self.edges[e].b = keep;
            }
        }
        self.vertices[keep].rotation.extend(moved);
        self.vertices[drop].rotation.clear();
        self.remove_vertex(drop);
        Ok(())
    }

    fn single_edge(&self, v: usize) -> Result<usize> {
        match self.vertices[v].rotation.as_slice() {
            [e] => Ok(*e),
            r => Err(Error::Construction(format!(
                "`{}` is not a stub (degree {})",
                self.vertices[v].name,
                r.len()
            ))),
        }
    }

    /// Compacts ids and checks every structural invariant.
    pub fn build(&self) -> Result<RotationGraph> {
        let mut vmap = vec![u32::MAX; self.vertices.len()];
        let mut names = Vec::new();
        let mut labels = Vec::new();
        let mut positions = Vec::new();
        let mut noncrossing = Vec::new();
        let mut index = HashMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if !v.alive {
                continue;
            }
            let id = VertexId(names.len() as u32);
            if index.insert(v.name.clone(), id).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex name `{}`", v.name)));
            }
            vmap[i] = id.0;
            names.push(v.name.clone());
            labels.push(v.label.clone());
            positions.push(v.pos);
            noncrossing.push(v.noncrossing);
        }
        let mut emap = vec![u32::MAX; self.edges.len()];
        let mut edges = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if !e.alive {
                continue;
            }
            if !self.vertices[e.a].alive || !self.vertices[e.b].alive {
                return Err(Error::InvalidGraph(format!("edge {i} touches a removed vertex")));
            }
            if e.a == e.b {
                return Err(Error::InvalidGraph(format!(
                    "loop at `{}`",
                    self.vertices[e.a].name
                )));
            }
            emap[i] = edges.len() as u32;
            edges.push(Edge {
                tail: VertexId(vmap[e.a]),
                head: VertexId(vmap[e.b]),
                label: e.label.clone(),
            });
        }
        let mut rotation = vec![Vec::new(); names.len()];
        for (i, v) in self.vertices.iter().enumerate() {
            if !v.alive {
                continue;
            }
            let r: Result<Vec<EdgeId>> = v
                .rotation
                .iter()
                .map(|&e| {
                    if emap[e] == u32::MAX {
                        Err(Error::InvalidGraph(format!(
                            "rotation of `{}` lists a removed edge",
                            v.name
                        )))
                    } else {
                        Ok(EdgeId(emap[e]))
                    }
                })
                .collect();
            rotation[vmap[i] as usize] = r?;
        }
        finish(self.directed, names, labels, positions, edges, rotation, noncrossing, index)
    }
}

/// Assembles a graph from already-compacted parts, validating the rotation
/// invariant: every edge appears exactly once at each of its endpoints.
#[allow(clippy::too_many_arguments)]
fn finish(
    directed: bool,
    names: Vec<String>,
    labels: Vec<Option<String>>,
    positions: Vec<Option<(f64, f64)>>,
    edges: Vec<Edge>,
    rotation: Vec<Vec<EdgeId>>,
    noncrossing: Vec<bool>,
    index: HashMap<String, VertexId>,
) -> Result<RotationGraph> {
    let mut slot = vec![[u32::MAX; 2]; edges.len()];
    for (v, rot) in rotation.iter().enumerate() {
        for (k, &e) in rot.iter().enumerate() {
            let edge = edges.get(e.index()).ok_or_else(|| {
                Error::InvalidGraph(format!("rotation of `{}` lists unknown edge {}", names[v], e.0))
            })?;
            let end = if edge.tail.index() == v {
                0
            } else if edge.head.index() == v {
                1
            } else {
                return Err(Error::InvalidGraph(format!(
                    "rotation of `{}` lists non-incident edge {}",
                    names[v], e.0
                )));
            };
            if slot[e.index()][end] != u32::MAX {
                return Err(Error::InvalidGraph(format!(
                    "edge {} appears twice in the rotation of `{}`",
                    e.0, names[v]
                )));
            }
            slot[e.index()][end] = k as u32;
        }
    }
    if let Some(i) = slot.iter().position(|s| s[0] == u32::MAX || s[1] == u32::MAX) {
        return Err(Error::InvalidGraph(format!("edge {i} missing from a rotation")));
    }
    Ok(RotationGraph {
        directed,
        names,
        labels,
        positions,
        edges,
        rotation,
        noncrossing,
        index,
        slot,
    })
}

/// Plain-data form of a graph, used for serialization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphData {
    pub directed: bool,
    pub vertices: Vec<VertexData>,
    pub edges: Vec<EdgeData>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexData {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pos: Option<(f64, f64)>,
    pub rotation: Vec<u32>,
    #[serde(default)]
    pub noncrossing: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeData {
    pub ends: (u32, u32),
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl From<&RotationGraph> for GraphData {
    fn from(g: &RotationGraph) -> Self {
        GraphData {
            directed: g.directed,
            vertices: g
                .vertices()
                .map(|v| VertexData {
                    name: g.name(v).to_string(),
                    label: g.labels[v.index()].clone(),
                    pos: g.position(v),
                    rotation: g.rotation(v).iter().map(|e| e.0).collect(),
                    noncrossing: g.is_noncrossing(v),
                })
                .collect(),
            edges: g
                .edges
                .iter()
                .map(|e| EdgeData { ends: (e.tail.0, e.head.0), label: e.label.clone() })
                .collect(),
        }
    }
}

impl TryFrom<GraphData> for RotationGraph {
    type Error = Error;

    fn try_from(d: GraphData) -> Result<Self> {
        let n = d.vertices.len() as u32;
        let mut index = HashMap::new();
        for (i, v) in d.vertices.iter().enumerate() {
            if index.insert(v.name.clone(), VertexId(i as u32)).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex name `{}`", v.name)));
            }
        }
        let mut edges = Vec::with_capacity(d.edges.len());
        for (i, e) in d.edges.iter().enumerate() {
            if e.ends.0 >= n || e.ends.1 >= n {
                return Err(Error::InvalidGraph(format!("edge {i} has an unknown endpoint")));
            }
            if e.ends.0 == e.ends.1 {
                return Err(Error::InvalidGraph(format!("edge {i} is a loop")));
            }
            edges.push(Edge {
                tail: VertexId(e.ends.0),
                head: VertexId(e.ends.1),
                label: e.label.clone(),
            });
        }
        let rotation = d
            .vertices
            .iter()
            .map(|v| v.rotation.iter().map(|&e| EdgeId(e)).collect())
            .collect();
        finish(
            d.directed,
            d.vertices.iter().map(|v| v.name.clone()).collect(),
            d.vertices.iter().map(|v| v.label.clone()).collect(),
            d.vertices.iter().map(|v| v.pos).collect(),
            edges,
            rotation,
            d.vertices.iter().map(|v| v.noncrossing).collect(),
            index,
        )
    }
}

impl Serialize for RotationGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphData::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for RotationGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let data = GraphData::deserialize(d)?;
        RotationGraph::try_from(data).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star() -> RotationGraph {
        let mut b = GraphBuilder::new(false);
        let c = b.add_vertex("c", Some((0.0, 0.0)));
        for (name, p) in [("e", (1.0, 0.0)), ("s", (0.0, -1.0)), ("w", (-1.0, 0.0)), ("n", (0.0, 1.0))] {
            let v = b.add_vertex(name, Some(p));
            b.add_edge(c, v);
        }
        b.sort_rotations_geometric();
        b.build().unwrap()
    }

    #[test]
    fn geometric_rotation_is_counterclockwise() {
        let g = star();
        let c = g.require("c").unwrap();
        let order: Vec<&str> = g.rotation(c).iter().map(|&e| g.name(g.edge(e).other(c))).collect();
        assert_eq!(order, ["e", "n", "w", "s"]);
    }

    #[test]
    fn slots_match_rotation() {
        let g = star();
        for v in g.vertices() {
            for (k, &e) in g.rotation(v).iter().enumerate() {
                assert_eq!(g.slot(e, v), k);
            }
        }
    }

    #[test]
    fn loops_are_rejected() {
        let mut b = GraphBuilder::new(false);
        let a = b.add_vertex("a", None);
        b.add_edge(a, a);
        assert!(b.build().is_err());
    }

    #[test]
    fn duplicate_names_are_rejected() {
        let mut b = GraphBuilder::new(false);
        b.add_vertex("a", None);
        b.add_vertex("a", None);
        assert!(matches!(b.build(), Err(Error::InvalidGraph(_))));
    }

    #[test]
    fn fusing_stubs_keeps_the_rotation_slot() {
        let mut b = GraphBuilder::new(false);
        let u = b.add_vertex("u", Some((0.0, 0.0)));
        let sa = b.add_vertex("sa", Some((1.0, 0.0)));
        let other = b.add_vertex("o", Some((0.0, 1.0)));
        let sb = b.add_vertex("sb", Some((2.0, 0.0)));
        let w = b.add_vertex("w", Some((3.0, 0.0)));
        b.add_edge(u, other);
        b.add_edge(u, sa);
        b.add_edge(sb, w);
        b.sort_rotations_geometric();
        b.fuse_stubs(sa, sb).unwrap();
        let g = b.build().unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 2);
        let u = g.require("u").unwrap();
        let first = g.rotation(u)[0];
        assert_eq!(g.name(g.edge(first).other(u)), "w");
    }

    #[test]
    fn directed_fusion_requires_chaining_arcs() {
        let mut b = GraphBuilder::new(true);
        let u = b.add_vertex("u", None);
        let sa = b.add_vertex("sa", None);
        let sb = b.add_vertex("sb", None);
        let w = b.add_vertex("w", None);
        b.add_edge(sa, u);
        b.add_edge(sb, w);
        assert!(b.fuse_stubs(sa, sb).is_err());
    }

    #[test]
    fn topological_order_detects_cycles() {
        let mut b = GraphBuilder::new(true);
        let x = b.add_vertex("x", None);
        let y = b.add_vertex("y", None);
        let z = b.add_vertex("z", None);
        b.add_edge(x, y);
        b.add_edge(y, z);
        assert!(b.build().unwrap().is_acyclic());
        b.add_edge(z, x);
        assert!(!b.build().unwrap().is_acyclic());
    }

    #[test]
    fn serde_round_trip() {
        let g = star();
        let text = serde_json::to_string(&g).unwrap();
        let back: RotationGraph = serde_json::from_str(&text).unwrap();
        assert_eq!(g, back);
    }
}
