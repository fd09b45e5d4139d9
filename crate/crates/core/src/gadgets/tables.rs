//! Literal gadget tables.
//!
//! Coordinates are the drawing coordinates of the original figures; every
//! edge is listed as the coordinate pair it is drawn between (for directed
//! gadgets, from tail to head). Keeping the raw coordinates makes each entry
//! checkable against the drawing by eye.

use super::GadgetKind;

pub type Pt = (i32, i32);

/// Raw description of one gadget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetTable {
    pub kind: GadgetKind,
    /// Named vertices. Unnamed internal vertices of the directed gadgets are
    /// named after their coordinates when the table is built.
    pub named: Vec<(String, Pt)>,
    pub edges: Vec<(Pt, Pt)>,
    /// Interior vertices where paths may cross (undirected gadgets only).
    pub crossing: Vec<String>,
    pub sides: Sides,
}

/// Port names per side: top and bottom listed left to right, left and right
/// listed top to bottom.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Sides {
    pub top: Vec<String>,
    pub bottom: Vec<String>,
    pub left: Vec<String>,
    pub right: Vec<String>,
}

fn names(list: &[(&str, Pt)]) -> Vec<(String, Pt)> {
    list.iter().map(|(n, p)| (n.to_string(), *p)).collect()
}

fn strs(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

const XCH_VERTICES: &[(&str, Pt)] = &[
    ("u1", (6, 22)),
    ("u2", (10, 22)),
    ("u3", (18, 22)),
    ("u4", (22, 22)),
    ("u5", (10, 18)),
    ("u6", (18, 18)),
    ("u7", (10, 14)),
    ("u8", (18, 14)),
    ("u9", (6, 10)),
    ("u10", (10, 10)),
    ("u11", (18, 10)),
    ("u12", (22, 10)),
    ("a", (14, 18)),
    ("b", (12, 16)),
    ("c", (16, 16)),
    ("d", (14, 14)),
    ("s1", (6, 24)),
    ("s2", (10, 24)),
    ("s3", (18, 24)),
    ("s4", (22, 24)),
    ("s'1", (6, 8)),
    ("s'2", (10, 8)),
    ("s'3", (18, 8)),
    ("s'4", (22, 8)),
    ("t1", (4, 22)),
    ("t2", (4, 10)),
    ("t'1", (24, 22)),
    ("t'2", (24, 10)),
];

const XCH_EDGES: &[(Pt, Pt)] = &[
    ((6, 10), (4, 10)),
    ((6, 8), (6, 10)),
    ((10, 8), (10, 10)),
    ((22, 10), (24, 10)),
    ((22, 8), (22, 10)),
    ((18, 10), (18, 8)),
    ((22, 10), (18, 10)),
    ((18, 14), (22, 10)),
    ((18, 10), (18, 14)),
    ((14, 14), (18, 10)),
    ((10, 10), (14, 14)),
    ((10, 10), (10, 14)),
    ((6, 10), (10, 10)),
    ((10, 14), (6, 10)),
    ((22, 22), (24, 22)),
    ((22, 24), (22, 22)),
    ((18, 22), (18, 24)),
    ((22, 22), (18, 22)),
    ((18, 18), (22, 22)),
    ((18, 14), (18, 18)),
    ((16, 16), (18, 14)),
    ((14, 14), (16, 16)),
    ((12, 16), (14, 14)),
    ((10, 14), (12, 16)),
    ((10, 18), (10, 14)),
    ((12, 16), (10, 18)),
    ((14, 18), (12, 16)),
    ((16, 16), (14, 18)),
    ((18, 18), (16, 16)),
    ((18, 22), (18, 18)),
    ((14, 18), (18, 22)),
    ((10, 22), (14, 18)),
    ((10, 18), (10, 22)),
    ((6, 22), (10, 18)),
    ((10, 22), (10, 24)),
    ((6, 22), (10, 22)),
    ((6, 22), (4, 22)),
    ((6, 24), (6, 22)),
];

fn undirected_sides() -> Sides {
    Sides {
        top: strs(&["s1", "s2", "s3", "s4"]),
        bottom: strs(&["s'1", "s'2", "s'3", "s'4"]),
        left: strs(&["t1", "t2"]),
        right: strs(&["t'1", "t'2"]),
    }
}

const NO_VERTICES: &[(&str, Pt)] = &[
    ("a", (3, 21)),
    ("b", (5, 23)),
    ("c", (7, 23)),
    ("a'", (9, 21)),
    ("b'", (5, 19)),
    ("c'", (7, 19)),
];

const NO_ARCS: &[(Pt, Pt)] = &[
    ((5, 21), (5, 19)),
    ((7, 21), (7, 19)),
    ((7, 23), (7, 21)),
    ((7, 21), (9, 21)),
    ((5, 21), (7, 21)),
    ((5, 23), (5, 21)),
    ((3, 21), (5, 21)),
];

const YES_VERTICES: &[(&str, Pt)] = &[
    ("a", (13, 21)),
    ("b", (15, 24)),
    ("c", (19, 24)),
    ("a'", (21, 21)),
    ("b'", (15, 18)),
    ("c'", (19, 18)),
];

const YES_ARCS: &[(Pt, Pt)] = &[
    ((15, 24), (15, 22)),
    ((19, 24), (19, 22)),
    ((19, 22), (19, 20)),
    ((19, 20), (21, 21)),
    ((19, 20), (19, 18)),
    ((17, 20), (19, 20)),
    ((19, 22), (17, 22)),
    ((17, 20), (15, 20)),
    ((17, 22), (17, 20)),
    ((15, 22), (17, 22)),
    ((15, 20), (15, 18)),
    ((15, 22), (15, 20)),
    ((13, 21), (15, 22)),
];

fn yes_no_sides() -> Sides {
    Sides {
        top: strs(&["b", "c"]),
        bottom: strs(&["b'", "c'"]),
        left: strs(&["a"]),
        right: strs(&["a'"]),
    }
}

const ON_VERTICES: &[(&str, Pt)] = &[
    ("a", (7, 25)),
    ("b", (5, 23)),
    ("c", (5, 21)),
    ("a'", (7, 19)),
    ("b'", (9, 23)),
    ("c'", (9, 21)),
];

const ON_ARCS: &[(Pt, Pt)] = &[
    ((7, 21), (9, 21)),
    ((7, 23), (9, 23)),
    ((5, 23), (7, 23)),
    ((5, 21), (7, 21)),
    ((7, 21), (7, 19)),
    ((7, 23), (7, 21)),
    ((7, 25), (7, 23)),
];

const IF_VERTICES: &[(&str, Pt)] = &[
    ("a", (6, 26)),
    ("b", (2, 22)),
    ("b1", (14, 20)),
    ("b2", (14, 22)),
    ("a1", (8, 18)),
    ("a2", (12, 18)),
];

const IF_ARCS: &[(Pt, Pt)] = &[
    ((12, 20), (12, 18)),
    ((8, 20), (8, 18)),
    ((12, 20), (14, 20)),
    ((10, 20), (12, 20)),
    ((8, 20), (10, 20)),
    ((4, 20), (8, 20)),
    ((10, 22), (10, 20)),
    ((8, 22), (8, 20)),
    ((4, 22), (4, 20)),
    ((10, 22), (14, 22)),
    ((8, 22), (10, 22)),
    ((6, 22), (8, 22)),
    ((4, 22), (6, 22)),
    ((2, 22), (4, 22)),
    ((10, 24), (10, 22)),
    ((6, 24), (10, 24)),
    ((6, 24), (6, 22)),
    ((6, 26), (6, 24)),
];

const LL_VERTICES: &[(&str, Pt)] = &[
    ("a", (18, 26)),
    ("b1", (22, 28)),
    ("b2", (24, 28)),
    ("a2", (26, 24)),
    ("a1", (26, 20)),
    ("b", (24, 16)),
];

const LL_ARCS: &[(Pt, Pt)] = &[
    ((18, 26), (20, 26)),
    ((20, 26), (22, 26)),
    ((20, 26), (20, 22)),
    ((22, 22), (24, 22)),
    ((20, 22), (22, 22)),
    ((24, 20), (26, 20)),
    ((22, 18), (24, 18)),
    ((22, 22), (22, 18)),
    ((22, 24), (22, 22)),
    ((24, 24), (26, 24)),
    ((22, 24), (24, 24)),
    ((22, 26), (22, 24)),
    ((22, 28), (22, 26)),
    ((24, 28), (24, 24)),
    ((24, 24), (24, 22)),
    ((24, 22), (24, 20)),
    ((24, 20), (24, 18)),
    ((24, 18), (24, 16)),
];

const VV_VERTICES: &[(&str, Pt)] = &[
    ("b1", (20, 8)),
    ("b2", (20, 10)),
    ("a1", (22, 12)),
    ("a2", (24, 12)),
    ("b", (28, 8)),
    ("a", (24, 6)),
];

const VV_ARCS: &[(Pt, Pt)] = &[
    ((24, 12), (24, 10)),
    ((22, 12), (22, 10)),
    ((24, 10), (26, 10)),
    ((22, 10), (24, 10)),
    ((20, 10), (22, 10)),
    ((26, 10), (26, 8)),
    ((24, 10), (24, 8)),
    ((24, 8), (24, 6)),
    ((26, 8), (28, 8)),
    ((24, 8), (26, 8)),
    ((20, 8), (24, 8)),
];

const TT_VERTICES: &[(&str, Pt)] = &[
    ("a", (4, 14)),
    ("b1", (2, 10)),
    ("b2", (2, 8)),
    ("a2", (6, 6)),
    ("a1", (10, 6)),
    ("b", (14, 8)),
];

const TT_ARCS: &[(Pt, Pt)] = &[
    ((10, 8), (12, 8)),
    ((8, 10), (8, 8)),
    ((6, 10), (8, 10)),
    ((12, 8), (14, 8)),
    ((12, 10), (12, 8)),
    ((8, 10), (12, 10)),
    ((8, 12), (8, 10)),
    ((4, 12), (8, 12)),
    ((10, 8), (10, 6)),
    ((8, 8), (10, 8)),
    ((6, 8), (8, 8)),
    ((6, 10), (6, 8)),
    ((4, 10), (6, 10)),
    ((6, 8), (6, 6)),
    ((2, 8), (6, 8)),
    ((2, 10), (4, 10)),
    ((4, 12), (4, 10)),
    ((4, 14), (4, 12)),
];

/// The table for a gadget kind, as drawn.
pub fn table(kind: GadgetKind) -> GadgetTable {
    use GadgetKind::*;
    let sides4 = |top: &[&str], bottom: &[&str], left: &[&str], right: &[&str]| Sides {
        top: strs(top),
        bottom: strs(bottom),
        left: strs(left),
        right: strs(right),
    };
    match kind {
        Xch => GadgetTable {
            kind,
            named: names(XCH_VERTICES),
            edges: XCH_EDGES.to_vec(),
            crossing: strs(&["a", "b", "c", "d"]),
            sides: undirected_sides(),
        },
        Lic => GadgetTable {
            kind,
            named: names(XCH_VERTICES),
            edges: XCH_EDGES.to_vec(),
            crossing: strs(&["a", "b", "c", "d", "u5", "u6"]),
            sides: undirected_sides(),
        },
        Yes => GadgetTable {
            kind,
            named: names(YES_VERTICES),
            edges: YES_ARCS.to_vec(),
            crossing: vec![],
            sides: yes_no_sides(),
        },
        No => GadgetTable {
            kind,
            named: names(NO_VERTICES),
            edges: NO_ARCS.to_vec(),
            crossing: vec![],
            sides: yes_no_sides(),
        },
        On => GadgetTable {
            kind,
            named: names(ON_VERTICES),
            edges: ON_ARCS.to_vec(),
            crossing: vec![],
            sides: sides4(&["a"], &["a'"], &["b", "c"], &["b'", "c'"]),
        },
        If => GadgetTable {
            kind,
            named: names(IF_VERTICES),
            edges: IF_ARCS.to_vec(),
            crossing: vec![],
            sides: sides4(&["a"], &["a1", "a2"], &["b"], &["b2", "b1"]),
        },
        Ll => GadgetTable {
            kind,
            named: names(LL_VERTICES),
            edges: LL_ARCS.to_vec(),
            crossing: vec![],
            sides: sides4(&["b1", "b2"], &["b"], &["a"], &["a2", "a1"]),
        },
        Tt => GadgetTable {
            kind,
            named: names(TT_VERTICES),
            edges: TT_ARCS.to_vec(),
            crossing: vec![],
            sides: sides4(&["a"], &["a2", "a1"], &["b1", "b2"], &["b"]),
        },
        Vv => GadgetTable {
            kind,
            named: names(VV_VERTICES),
            edges: VV_ARCS.to_vec(),
            crossing: vec![],
            sides: sides4(&["a1", "a2"], &["a"], &["b2", "b1"], &["b"]),
        },
    }
}
