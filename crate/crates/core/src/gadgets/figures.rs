//! Hand-transcribed routings from the drawings, and the two-path
//! crossing/non-crossing configurations.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, GraphBuilder, RotationGraph};
use crate::instance::{DemandClass, Instance, RoutedPath, Routing};

use super::{standard, Gadget, GadgetKind};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum FigureId {
    /// XCH with two horizontal paths, vertical paths shifted left to right.
    XchShift,
    /// LIC with one horizontal path, vertical paths kept on the left.
    LicKeepLeft,
    /// A second keep-left routing in which the horizontal path changes row.
    LicKeepLeftAlt,
    /// Reflection of [`FigureId::LicKeepLeft`]: kept on the right.
    LicKeepRight,
}

impl FigureId {
    pub const ALL: [FigureId; 4] =
        [FigureId::XchShift, FigureId::LicKeepLeft, FigureId::LicKeepLeftAlt, FigureId::LicKeepRight];

    pub fn as_str(self) -> &'static str {
        match self {
            FigureId::XchShift => "xch_shift",
            FigureId::LicKeepLeft => "lic_keep_left",
            FigureId::LicKeepLeftAlt => "lic_keep_left_alt",
            FigureId::LicKeepRight => "lic_keep_right",
        }
    }

    pub fn kind(self) -> GadgetKind {
        match self {
            FigureId::XchShift => GadgetKind::Xch,
            _ => GadgetKind::Lic,
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::Input(format!("unknown figure `{s}`")))
    }
}

/// Paths as (class, vertex names). The keep-right routing is derived by
/// reflection instead of being listed.
fn listing(id: FigureId) -> Vec<(usize, Vec<&'static str>)> {
    match id {
        FigureId::XchShift => vec![
            (0, vec!["s1", "u1", "u2", "u5", "b", "d", "u11", "s'3"]),
            (0, vec!["s2", "u2", "a", "c", "u8", "u11", "u12", "s'4"]),
            (1, vec!["t1", "u1", "u5", "u7", "b", "a", "u3", "u4", "t'1"]),
            (1, vec!["t2", "u9", "u10", "d", "c", "u6", "u8", "u12", "t'2"]),
        ],
        FigureId::LicKeepLeft | FigureId::LicKeepRight => vec![
            (0, vec!["t1", "u1", "u5", "b", "a", "u3", "u4", "t'1"]),
            (1, vec!["s1", "u1", "u2", "u5", "u7", "u9", "s'1"]),
            (2, vec!["s2", "u2", "a", "c", "d", "u10", "s'2"]),
        ],
        FigureId::LicKeepLeftAlt => vec![
            (0, vec!["t1", "u1", "u5", "b", "d", "u11", "u12", "t'2"]),
            (1, vec!["s1", "u1", "u2", "u5", "u7", "u9", "s'1"]),
            (2, vec!["s2", "u2", "a", "c", "d", "u10", "s'2"]),
        ],
    }
}

/// Turns a vertex walk into a routed path, taking the lowest-id unused edge
/// between consecutive vertices.
pub fn route_names(g: &RotationGraph, class: usize, walk: &[&str], used: &mut Vec<EdgeId>) -> Result<RoutedPath> {
    let vs = walk.iter().map(|n| g.require(n)).collect::<Result<Vec<_>>>()?;
    let mut edges = Vec::new();
    for w in vs.windows(2) {
        let e = g
            .leaving(w[0])
            .filter(|&e| g.edge(e).other(w[0]) == w[1] && !used.contains(&e))
            .min()
            .ok_or_else(|| Error::Input(format!("no free edge `{}`-`{}`", g.name(w[0]), g.name(w[1]))))?;
        used.push(e);
        edges.push(e);
    }
    Ok(RoutedPath { class, start: vs[0], edges })
}

/// Demand classes the figure's routing is stated against.
pub fn figure_demands(gd: &Gadget, id: FigureId) -> Result<Vec<DemandClass>> {
    let g = &gd.graph;
    let s = &gd.sides;
    let names = |v: &[String]| v.iter().map(|n| g.require(n)).collect::<Result<Vec<_>>>();
    let one = |a: &str, b: &str| Instance::class_by_names(g, &[a], &[b], 1);
    Ok(match id {
        FigureId::XchShift => vec![
            DemandClass::new(names(&s.top)?, names(&s.bottom)?, 2),
            DemandClass::new(names(&s.left)?, names(&s.right)?, 2),
        ],
        FigureId::LicKeepLeft | FigureId::LicKeepLeftAlt => vec![
            DemandClass::new(names(&s.left)?, names(&s.right)?, 1),
            one("s1", "s'1")?,
            one("s2", "s'2")?,
        ],
        FigureId::LicKeepRight => vec![
            DemandClass::new(names(&s.left)?, names(&s.right)?, 1),
            one("s3", "s'3")?,
            one("s4", "s'4")?,
        ],
    })
}

/// The figure routing over the standard gadget.
pub fn figure_routing(id: FigureId) -> Result<Routing> {
    figure_routing_in(standard(id.kind()), id)
}

/// The figure routing over a given gadget of the right kind.
pub fn figure_routing_in(gd: &Gadget, id: FigureId) -> Result<Routing> {
    if gd.kind != id.kind() {
        return Err(Error::Input(format!("{id} is drawn on {}, not {}", id.kind(), gd.kind)));
    }
    let g = &gd.graph;
    let mut used = Vec::new();
    let mut paths = Vec::new();
    if id == FigureId::LicKeepRight {
        let m = gd.mirror()?;
        for (class, walk) in listing(id) {
            let mut names: Vec<String> = walk
                .iter()
                .map(|n| g.require(n).map(|v| g.name(m[&v]).to_string()))
                .collect::<Result<_>>()?;
            // The reflected horizontal path runs right to left.
            if class == 0 {
                names.reverse();
            }
            // Reflection swaps the two vertical classes.
            let class = match class {
                1 => 2,
                2 => 1,
                c => c,
            };
            let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
            paths.push(route_names(g, class, &refs, &mut used)?);
        }
    } else {
        for (class, walk) in listing(id) {
            paths.push(route_names(g, class, &walk, &mut used)?);
        }
    }
    Ok(Routing::new(paths))
}

/// The two-path configurations at a single degree-4 vertex: turning paths
/// (`crossing = false`) or straight-through paths (`crossing = true`), on
/// the coordinates of the original drawing.
pub fn two_path_configuration(crossing: bool) -> Result<(RotationGraph, Routing)> {
    let mut b = GraphBuilder::new(false);
    let (centre, arms): ((f64, f64), [(&str, (f64, f64)); 4]) = if crossing {
        ((15.0, 17.0), [("p", (13.0, 15.0)), ("q", (17.0, 19.0)), ("r", (13.0, 19.0)), ("s", (17.0, 15.0))])
    } else {
        ((8.0, 17.0), [("p", (10.0, 15.0)), ("q", (10.0, 19.0)), ("r", (6.0, 15.0)), ("s", (6.0, 19.0))])
    };
    let c = b.add_vertex("v", Some(centre));
    let mut e = Vec::new();
    for (name, pos) in arms {
        let v = b.add_vertex(name, Some(pos));
        e.push(EdgeId(b.add_edge(v, c) as u32));
    }
    b.sort_rotations_geometric();
    let g = b.build()?;
    let dashed = RoutedPath { class: 0, start: g.require("p")?, edges: vec![e[0], e[1]] };
    let dotted = RoutedPath { class: 1, start: g.require("r")?, edges: vec![e[2], e[3]] };
    Ok((g, Routing::new(vec![dashed, dotted])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crossing::detect_crossings;
    use crate::instance::validate_routing;

    fn check(id: FigureId) {
        let gd = standard(id.kind());
        let r = figure_routing(id).unwrap();
        let inst = Instance::new(gd.graph.clone(), figure_demands(gd, id).unwrap()).unwrap();
        let rep = validate_routing(&inst, &r);
        assert!(rep.is_valid(), "{id}: {:?}", rep.violations);
    }

    #[test]
    fn every_figure_routing_validates() {
        for id in FigureId::ALL {
            check(id);
        }
    }

    #[test]
    fn shift_routing_pairs_left_entries_with_right_exits() {
        let gd = standard(GadgetKind::Xch);
        let r = figure_routing(FigureId::XchShift).unwrap();
        let g = &gd.graph;
        let ends: Vec<String> = r.paths[..2]
            .iter()
            .map(|p| g.name(crate::instance::path_end(g, p).unwrap()).to_string())
            .collect();
        assert_eq!(ends, ["s'3", "s'4"]);
    }

    #[test]
    fn two_path_verdicts() {
        let (g, r) = two_path_configuration(false).unwrap();
        assert!(detect_crossings(&g, &r).unwrap().is_empty());
        let (g, r) = two_path_configuration(true).unwrap();
        assert_eq!(detect_crossings(&g, &r).unwrap().len(), 1);
    }

    #[test]
    fn figure_ids_parse() {
        assert_eq!("lic_keep_right".parse::<FigureId>().unwrap(), FigureId::LicKeepRight);
        assert!("fig9".parse::<FigureId>().is_err());
    }
}
