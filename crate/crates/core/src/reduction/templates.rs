//! Per-cell routings used to assemble witnesses.
//!
//! A template routes, inside one standard XCH or LIC, the two vertical
//! paths of a column (entering on one side of the top, leaving on the same
//! or the opposite side of the bottom) together with the horizontal paths of
//! the row. Hand-transcribed figure routings are used where they fit; every
//! other combination is decided by the solver once and memoized, so a
//! missing template means the combination has no routing at all.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gadgets::figures::{figure_routing, FigureId};
use crate::gadgets::{standard, Gadget, GadgetKind};
use crate::graph::{EdgeId, VertexId};
use crate::instance::{path_end, reversed, DemandClass, Instance, RoutedPath, Routing};
use crate::solver::{solve, Mode, SearchPolicy, Status};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Behavior {
    /// The vertical paths leave on the opposite side.
    Shift,
    /// The vertical paths leave on the side they entered.
    Keep,
}

/// Horizontal traffic through a cell: both stubs on each side, or a single
/// path between the given stub numbers (1 = upper, 2 = lower).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Horizontal {
    Two,
    One { from: u8, to: u8 },
}

impl Horizontal {
    pub const ALL: [Horizontal; 5] = [
        Horizontal::Two,
        Horizontal::One { from: 1, to: 1 },
        Horizontal::One { from: 1, to: 2 },
        Horizontal::One { from: 2, to: 1 },
        Horizontal::One { from: 2, to: 2 },
    ];
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TemplateKey {
    pub kind: GadgetKind,
    pub horizontal: Horizontal,
    pub entry: Side,
    pub behavior: Behavior,
}

impl TemplateKey {
    pub fn exit(&self) -> Side {
        match self.behavior {
            Behavior::Shift => self.entry.flip(),
            Behavior::Keep => self.entry,
        }
    }

    pub fn all() -> Vec<TemplateKey> {
        let mut out = Vec::new();
        for kind in [GadgetKind::Xch, GadgetKind::Lic] {
            for horizontal in Horizontal::ALL {
                for entry in [Side::Left, Side::Right] {
                    for behavior in [Behavior::Shift, Behavior::Keep] {
                        out.push(TemplateKey { kind, horizontal, entry, behavior });
                    }
                }
            }
        }
        out
    }
}

/// A path inside the standard gadget, oriented from its entry stub.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalPath {
    pub from: String,
    pub to: String,
    pub edges: Vec<EdgeId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TemplateOrigin {
    Figure(String),
    Solver,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellTemplate {
    pub key: TemplateKey,
    pub vertical: Vec<LocalPath>,
    pub horizontal: Vec<LocalPath>,
    pub origin: TemplateOrigin,
}

impl CellTemplate {
    /// The template as a routing of [`template_instance`]: class 0 vertical,
    /// class 1 horizontal.
    pub fn routing(&self, gd: &Gadget) -> Result<Routing> {
        let mut paths = Vec::new();
        for (class, list) in [(0, &self.vertical), (1, &self.horizontal)] {
            for p in list {
                paths.push(RoutedPath { class, start: gd.port(&p.from)?, edges: p.edges.clone() });
            }
        }
        Ok(Routing::new(paths))
    }
}

fn pair(side: Side, list: &[String]) -> [String; 2] {
    match side {
        Side::Left => [list[0].clone(), list[1].clone()],
        Side::Right => [list[2].clone(), list[3].clone()],
    }
}

/// The single-gadget instance a template has to solve.
pub fn template_instance(gd: &Gadget, key: &TemplateKey) -> Result<Instance> {
    let g = &gd.graph;
    let ids = |names: &[String]| names.iter().map(|n| gd.port(n)).collect::<Result<Vec<VertexId>>>();
    let s = &gd.sides;
    let mut demands =
        vec![DemandClass::new(ids(&pair(key.entry, &s.top))?, ids(&pair(key.exit(), &s.bottom))?, 2)];
    demands.push(match key.horizontal {
        Horizontal::Two => DemandClass::new(ids(&s.left)?, ids(&s.right)?, 2),
        Horizontal::One { from, to } => DemandClass::new(
            vec![gd.port(&s.left[from as usize - 1])?],
            vec![gd.port(&s.right[to as usize - 1])?],
            1,
        ),
    });
    Instance::new(g.clone(), demands)
}

/// Splits a routing into vertical and horizontal local paths, each
/// oriented from the top or left stub, and reads off its key.
fn classify(gd: &Gadget, routing: &Routing) -> Result<(TemplateKey, Vec<LocalPath>, Vec<LocalPath>)> {
    let g = &gd.graph;
    let s = &gd.sides;
    let name = |v: VertexId| g.name(v).to_string();
    let mut vertical = Vec::new();
    let mut horizontal = Vec::new();
    for p in &routing.paths {
        let end = path_end(g, p)?;
        let (a, b) = (name(p.start), name(end));
        let oriented = if s.bottom.contains(&a) || s.right.contains(&a) { reversed(g, p)? } else { p.clone() };
        let (from, to) = (name(oriented.start), name(path_end(g, &oriented)?));
        let lp = LocalPath { from: from.clone(), to: to.clone(), edges: oriented.edges };
        if s.top.contains(&from) && s.bottom.contains(&to) {
            vertical.push(lp);
        } else if s.left.contains(&from) && s.right.contains(&to) {
            horizontal.push(lp);
        } else {
            return Err(Error::Construction(format!("path {a}..{b} is neither vertical nor horizontal")));
        }
    }
    let side_of = |n: &str, list: &[String]| {
        if list[..2].iter().any(|x| x == n) {
            Side::Left
        } else {
            Side::Right
        }
    };
    if vertical.len() != 2 {
        return Err(Error::Construction("a template needs two vertical paths".into()));
    }
    let entry = side_of(&vertical[0].from, &s.top);
    let exit = side_of(&vertical[0].to, &s.bottom);
    if vertical.iter().any(|p| side_of(&p.from, &s.top) != entry || side_of(&p.to, &s.bottom) != exit) {
        return Err(Error::Construction("vertical paths split across sides".into()));
    }
    let stub = |n: &str, list: &[String]| list.iter().position(|x| x == n).unwrap() as u8 + 1;
    let h = match horizontal.as_slice() {
        [_, _] => Horizontal::Two,
        [p] => Horizontal::One { from: stub(&p.from, &s.left), to: stub(&p.to, &s.right) },
        _ => return Err(Error::Construction("a template needs one or two horizontal paths".into())),
    };
    let behavior = if entry == exit { Behavior::Keep } else { Behavior::Shift };
    vertical.sort_by(|a, b| a.from.cmp(&b.from));
    horizontal.sort_by(|a, b| a.from.cmp(&b.from));
    Ok((TemplateKey { kind: gd.kind, horizontal: h, entry, behavior }, vertical, horizontal))
}

/// Memoized templates for every key; `None` marks a combination without
/// any routing.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TemplateCache {
    pub entries: BTreeMap<TemplateKey, Option<CellTemplate>>,
}

impl TemplateCache {
    pub fn get(&self, key: &TemplateKey) -> Option<&CellTemplate> {
        self.entries.get(key).and_then(|t| t.as_ref())
    }

    /// The cache over the standard gadgets, built on first use.
    pub fn standard() -> &'static TemplateCache {
        static CACHE: OnceLock<TemplateCache> = OnceLock::new();
        CACHE.get_or_init(|| template_cache_build().expect("standard templates build"))
    }
}

/// Builds every template: figure routings first, the solver for the rest.
pub fn template_cache_build() -> Result<TemplateCache> {
    let mut entries: BTreeMap<TemplateKey, Option<CellTemplate>> = BTreeMap::new();
    for id in FigureId::ALL {
        let gd = standard(id.kind());
        let (key, vertical, horizontal) = classify(gd, &figure_routing(id)?)?;
        entries
            .entry(key)
            .or_insert(Some(CellTemplate { key, vertical, horizontal, origin: TemplateOrigin::Figure(id.to_string()) }));
    }
    for key in TemplateKey::all() {
        if entries.contains_key(&key) {
            continue;
        }
        let gd = standard(key.kind);
        let inst = template_instance(gd, &key)?;
        let r = solve(&inst, &SearchPolicy::new(Mode::Witness))?;
        let t = match r.status {
            Status::Sat => {
                let (found, vertical, horizontal) = classify(gd, &r.witnesses[0])?;
                debug_assert_eq!(found, key);
                Some(CellTemplate { key, vertical, horizontal, origin: TemplateOrigin::Solver })
            }
            Status::Unsat => None,
            Status::BudgetExceeded => {
                return Err(Error::Budget(format!("template {key:?} undecided within the default budget")))
            }
        };
        entries.insert(key, t);
    }
    Ok(TemplateCache { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::validate_routing;

    fn key(kind: GadgetKind, horizontal: Horizontal, entry: Side, behavior: Behavior) -> TemplateKey {
        TemplateKey { kind, horizontal, entry, behavior }
    }

    #[test]
    fn every_template_validates() {
        let cache = TemplateCache::standard();
        assert_eq!(cache.entries.len(), 40);
        for (k, t) in &cache.entries {
            if let Some(t) = t {
                let gd = standard(k.kind);
                let inst = template_instance(gd, k).unwrap();
                assert!(validate_routing(&inst, &t.routing(gd).unwrap()).is_valid(), "{k:?}");
            }
        }
    }

    #[test]
    fn figure_and_lemma_entries() {
        let cache = TemplateCache::standard();
        let shift = cache.get(&key(GadgetKind::Xch, Horizontal::Two, Side::Left, Behavior::Shift)).unwrap();
        assert_eq!(shift.origin, TemplateOrigin::Figure("xch_shift".into()));
        let keep = cache
            .get(&key(GadgetKind::Lic, Horizontal::One { from: 1, to: 1 }, Side::Left, Behavior::Keep))
            .unwrap();
        assert_eq!(keep.origin, TemplateOrigin::Figure("lic_keep_left".into()));
        for h in Horizontal::ALL {
            for e in [Side::Left, Side::Right] {
                assert!(cache.get(&key(GadgetKind::Xch, h, e, Behavior::Keep)).is_none(), "{h:?} {e:?}");
                assert!(cache.get(&key(GadgetKind::Xch, h, e, Behavior::Shift)).is_some(), "{h:?} {e:?}");
                assert!(cache.get(&key(GadgetKind::Lic, h, e, Behavior::Shift)).is_some(), "{h:?} {e:?}");
            }
        }
        for e in [Side::Left, Side::Right] {
            assert!(cache.get(&key(GadgetKind::Lic, Horizontal::Two, e, Behavior::Keep)).is_none());
        }
    }
}
