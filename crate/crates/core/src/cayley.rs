//! The Cayley trick for `d = 3`: fine mixed cells of `nΔ₂`, puzzle pieces,
//! transition rules between neighbouring cells, and SVG rendering of the
//! pseudoline picture.
//!
//! Points of `nΔ₂` are kept in barycentric coordinates `(x1, x2, x3)` with
//! `x1 + x2 + x3 = n`. A cell `S_1 + … + S_n` is the Minkowski sum of the
//! simplices `conv(e_j : j ∈ S_i)`, so all cell vertices are lattice points.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fmt::Write as _;

use num_rational::Rational64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::subdivision::{facet_neighbors, subgraph_to_type, type_to_subgraph, SubgraphCollection};
use crate::types::{DirSet, Type};

/// A type read as a Minkowski sum of faces of the simplex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MixedCell {
    pub summands: Vec<DirSet>,
    pub d: usize,
}

impl MixedCell {
    /// `Σ(|S_i| − 1) = d − 1`.
    pub fn is_fine(&self) -> bool {
        self.summands.iter().map(|s| s.len() - 1).sum::<usize>() == self.d - 1
    }

    pub fn dimension_sum(&self) -> usize {
        self.summands.iter().map(|s| s.len() - 1).sum()
    }
}

impl fmt::Display for MixedCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.summands.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join("+"))
    }
}

pub fn cayley_cell(a: &Type) -> MixedCell {
    MixedCell {
        summands: a.coords().to_vec(),
        d: a.d(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum PieceKind {
    /// A unit triangle.
    A,
    /// `13 + 23`
    B,
    /// `12 + 23`
    C,
    /// `12 + 13`
    D,
}

impl PieceKind {
    /// `(a, s, b)` with the rhombus equal to `as + sb`.
    pub fn rhombus_roles(self) -> Option<(usize, usize, usize)> {
        match self {
            PieceKind::A => None,
            PieceKind::B => Some((1, 3, 2)),
            PieceKind::C => Some((1, 2, 3)),
            PieceKind::D => Some((2, 1, 3)),
        }
    }

    pub fn letter(self) -> char {
        match self {
            PieceKind::A => 'A',
            PieceKind::B => 'B',
            PieceKind::C => 'C',
            PieceKind::D => 'D',
        }
    }
}

/// A fine cell of a `d = 3` mixed subdivision.
///
/// `anchors` are the 1-based positions of the non-singleton coordinates: the
/// tripleton for kind A, or the `as` then the `sb` doubleton for a rhombus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PuzzlePiece {
    pub kind: PieceKind,
    pub anchors: Vec<usize>,
}

fn pair(j: usize, k: usize) -> DirSet {
    DirSet::singleton(j).with(k)
}

pub fn classify_piece(a: &Type) -> Result<PuzzlePiece> {
    let fail = || Error::NotAFineCell(a.to_string());
    if a.d() != 3 {
        return Err(fail());
    }
    let big: Vec<usize> = (1..=a.n()).filter(|&i| a.coord(i).len() > 1).collect();
    match big.as_slice() {
        [i] if a.coord(*i).len() == 3 => Ok(PuzzlePiece {
            kind: PieceKind::A,
            anchors: vec![*i],
        }),
        [p, q]
            if a.coord(*p).len() == 2 && a.coord(*q).len() == 2 && a.coord(*p) != a.coord(*q) =>
        {
            for kind in [PieceKind::B, PieceKind::C, PieceKind::D] {
                let (x, s, y) = kind.rhombus_roles().expect("rhombus");
                let (first, second) = (pair(x, s), pair(s, y));
                if a.coord(*p) == first && a.coord(*q) == second {
                    return Ok(PuzzlePiece {
                        kind,
                        anchors: vec![*p, *q],
                    });
                }
                if a.coord(*q) == first && a.coord(*p) == second {
                    return Ok(PuzzlePiece {
                        kind,
                        anchors: vec![*q, *p],
                    });
                }
            }
            Err(fail())
        }
        _ => Err(fail()),
    }
}

/// How the neighbour across a facet differs from the facet itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "effect", rename_all = "snake_case")]
pub enum RuleEffect {
    /// Some other coordinate `{k}` becomes `{k, x}` with `x ≠ k`.
    GrowSingleton { k: usize },
    /// Some other singleton `{x}` with `x ≠ a` becomes `{x, a}`.
    AbsorbInto { a: usize },
    /// The other doubleton of the rhombus becomes `123`.
    MergeSlot,
}

/// Removing `removed` from the coordinate at `anchors[slot]` of a `kind` piece.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransitionRule {
    pub kind: PieceKind,
    pub slot: usize,
    pub removed: usize,
    pub effects: Vec<RuleEffect>,
}

fn marked(s: DirSet, bold: Option<usize>) -> String {
    s.iter()
        .map(|j| {
            if Some(j) == bold {
                format!("[{j}]")
            } else {
                j.to_string()
            }
        })
        .collect()
}

impl fmt::Display for TransitionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = self.removed;
        match self.kind.rhombus_roles() {
            None => {
                let rest = marked(DirSet::full(3).without(x), None);
                write!(
                    f,
                    "({}, {x}) -> ({rest}, {x}y)",
                    marked(DirSet::full(3), Some(x))
                )
            }
            Some((a, s, b)) => {
                let (first, second) = (pair(a, s), pair(s, b));
                let (p0, p1) = if self.slot == 0 {
                    (marked(first, Some(x)), marked(second, None))
                } else {
                    (marked(first, None), marked(second, Some(x)))
                };
                let (q0, q1) = if self.slot == 0 {
                    (marked(first.without(x), None), marked(second, None))
                } else {
                    (marked(first, None), marked(second.without(x), None))
                };
                let other = match self.effects[0] {
                    RuleEffect::GrowSingleton { k } => {
                        return write!(f, "({p0}, {p1}, {k}) -> ({q0}, {q1}, {k}y)");
                    }
                    RuleEffect::AbsorbInto { a } => a,
                    RuleEffect::MergeSlot => unreachable!("merge is never listed first"),
                };
                let merged = if self.slot == 0 {
                    format!("({q0}, 123, y)")
                } else {
                    format!("(123, {q1}, y)")
                };
                write!(f, "({p0}, {p1}, y) -> ({q0}, {q1}, y{other}) or {merged}")
            }
        }
    }
}

/// The rule table: three triangle rules and four rules for each rhombus kind.
pub fn rule_table() -> Vec<TransitionRule> {
    let mut rules: Vec<TransitionRule> = (1..=3)
        .map(|x| TransitionRule {
            kind: PieceKind::A,
            slot: 0,
            removed: x,
            effects: vec![RuleEffect::GrowSingleton { k: x }],
        })
        .collect();
    for kind in [PieceKind::B, PieceKind::C, PieceKind::D] {
        let (a, s, b) = kind.rhombus_roles().expect("rhombus");
        let rule = |slot, removed, effects| TransitionRule {
            kind,
            slot,
            removed,
            effects,
        };
        rules.push(rule(0, a, vec![RuleEffect::GrowSingleton { k: a }]));
        rules.push(rule(
            0,
            s,
            vec![RuleEffect::AbsorbInto { a }, RuleEffect::MergeSlot],
        ));
        rules.push(rule(
            1,
            s,
            vec![RuleEffect::AbsorbInto { a: b }, RuleEffect::MergeSlot],
        ));
        rules.push(rule(1, b, vec![RuleEffect::GrowSingleton { k: b }]));
    }
    rules
}

/// One crossing out of a fine cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transition {
    /// 1-based coordinate losing an element.
    pub position: usize,
    pub removed: usize,
    pub rule: TransitionRule,
    /// Types the rule admits on the other side; empty means a boundary exit.
    pub candidates: Vec<Type>,
}

impl Transition {
    pub fn is_boundary(&self) -> bool {
        self.candidates.is_empty()
    }
}

fn apply_effect(
    base: &[DirSet],
    piece: &PuzzlePiece,
    position: usize,
    effect: RuleEffect,
) -> Vec<Vec<DirSet>> {
    let mut out = Vec::new();
    match effect {
        RuleEffect::GrowSingleton { k } => {
            for i in 0..base.len() {
                if i + 1 != position && base[i] == DirSet::singleton(k) {
                    for y in (1..=3).filter(|&y| y != k) {
                        let mut c = base.to_vec();
                        c[i] = pair(k, y);
                        out.push(c);
                    }
                }
            }
        }
        RuleEffect::AbsorbInto { a } => {
            for i in 0..base.len() {
                if i + 1 != position && base[i].is_singleton() && !base[i].contains(a) {
                    let mut c = base.to_vec();
                    c[i] = base[i].with(a);
                    out.push(c);
                }
            }
        }
        RuleEffect::MergeSlot => {
            let other = piece
                .anchors
                .iter()
                .copied()
                .find(|&p| p != position)
                .expect("rhombus has two anchors");
            let mut c = base.to_vec();
            c[other - 1] = DirSet::full(3);
            out.push(c);
        }
    }
    out
}

/// Every facet crossing of a fine cell, with the neighbours the rule table admits.
pub fn transitions(a: &Type) -> Result<Vec<Transition>> {
    let piece = classify_piece(a)?;
    let table = rule_table();
    let mut out = Vec::new();
    for (slot, &position) in piece.anchors.iter().enumerate() {
        for removed in a.coord(position).iter() {
            let rule = table
                .iter()
                .find(|r| r.kind == piece.kind && r.slot == slot && r.removed == removed)
                .expect("the table covers every piece edge")
                .clone();
            let mut base = a.coords().to_vec();
            base[position - 1] = base[position - 1].without(removed);
            let mut candidates: BTreeSet<Type> = BTreeSet::new();
            for &effect in &rule.effects {
                for coords in apply_effect(&base, &piece, position, effect) {
                    candidates.insert(Type::new_unchecked(3, coords));
                }
            }
            out.push(Transition {
                position,
                removed,
                rule,
                candidates: candidates.into_iter().collect(),
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransitionViolation {
    pub cell: Type,
    pub position: usize,
    pub removed: usize,
    pub neighbors: Vec<Type>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransitionReport {
    pub n: usize,
    pub cells: usize,
    pub interior_crossings: usize,
    pub boundary_exits: usize,
    pub ok: bool,
    pub violations: Vec<TransitionViolation>,
}

/// Checks every facet crossing of a `d = 3` triangulation against the rule table.
///
/// A crossing conforms when the cells on the other side of the facet are exactly
/// one rule candidate, or none when the rule exits through the boundary. The
/// rule candidates are also compared with the tree-cut description of the
/// neighbours of `t − e`.
pub fn verify_transition_rules(c: &SubgraphCollection) -> Result<TransitionReport> {
    if c.d() != 3 {
        return Err(Error::ParameterMismatch {
            n: c.n(),
            d: 3,
            found_n: c.n(),
            found_d: c.d(),
        });
    }
    let types = c.types()?;
    let present: BTreeSet<&Type> = types.iter().collect();
    let mut report = TransitionReport {
        n: c.n(),
        cells: types.len(),
        interior_crossings: 0,
        boundary_exits: 0,
        ok: true,
        violations: Vec::new(),
    };
    for a in &types {
        let crossings = match transitions(a) {
            Ok(t) => t,
            Err(e) => {
                report.violations.push(TransitionViolation {
                    cell: a.clone(),
                    position: 0,
                    removed: 0,
                    neighbors: Vec::new(),
                    reason: e.to_string(),
                });
                continue;
            }
        };
        let tree = type_to_subgraph(a);
        for t in crossings {
            let facet = tree.without_edge(t.position, t.removed);
            let neighbors: Vec<Type> = c
                .cells()
                .iter()
                .filter(|other| **other != tree && facet.is_subgraph_of(other))
                .map(|g| subgraph_to_type(g).expect("cells are types"))
                .collect();
            let cut: Option<BTreeSet<Type>> =
                facet_neighbors(&tree, t.position, t.removed).map(|v| {
                    v.iter()
                        .map(|g| subgraph_to_type(g).expect("trees span"))
                        .collect()
                });
            let rule_set: BTreeSet<Type> = t.candidates.iter().cloned().collect();
            let mut reason = None;
            match &cut {
                None if !rule_set.is_empty() => {
                    reason = Some("rule admits neighbours across a boundary facet")
                }
                Some(s) if *s != rule_set => {
                    reason = Some("rule candidates differ from the tree-cut neighbours")
                }
                _ => {}
            }
            if reason.is_none() {
                if t.is_boundary() {
                    report.boundary_exits += 1;
                    if !neighbors.is_empty() {
                        reason = Some("boundary exit has a neighbouring cell");
                    }
                } else {
                    report.interior_crossings += 1;
                    let hits = t.candidates.iter().filter(|x| present.contains(x)).count();
                    if neighbors.len() != 1 {
                        reason = Some("interior facet is not shared by exactly two cells");
                    } else if hits != 1 || !rule_set.contains(&neighbors[0]) {
                        reason = Some("neighbour is not the unique rule candidate");
                    }
                }
            }
            if let Some(r) = reason {
                report.violations.push(TransitionViolation {
                    cell: a.clone(),
                    position: t.position,
                    removed: t.removed,
                    neighbors,
                    reason: r.to_string(),
                });
            }
        }
    }
    report.ok = report.violations.is_empty();
    Ok(report)
}

/// Lattice point of `nΔ₂` in barycentric coordinates.
pub type LatticePoint = [i64; 3];
/// Rational point of `nΔ₂` in barycentric coordinates.
pub type BaryPoint = [Rational64; 3];

fn serialize_bary<S: serde::Serializer>(
    p: &BaryPoint,
    ser: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = ser.serialize_seq(Some(3))?;
    for r in p {
        seq.serialize_element(&r.to_string())?;
    }
    seq.end()
}

fn serialize_bary_lists<S: serde::Serializer>(
    rays: &[Vec<BaryPoint>],
    ser: S,
) -> std::result::Result<S::Ok, S::Error> {
    let strings: Vec<Vec<[String; 3]>> = rays
        .iter()
        .map(|ray| ray.iter().map(|p| p.map(|r| r.to_string())).collect())
        .collect();
    strings.serialize(ser)
}

fn to_bary(p: LatticePoint) -> BaryPoint {
    p.map(Rational64::from_integer)
}

fn midpoint(p: LatticePoint, q: LatticePoint) -> BaryPoint {
    [0, 1, 2].map(|k| Rational64::new(p[k] + q[k], 2))
}

/// Planar coordinates `(x2, x3)`; an orientation-preserving affine image of the drawing.
fn planar(p: LatticePoint) -> (i64, i64) {
    (p[1], p[2])
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Twice the area of a polygon in the `(x2, x3)` plane; a unit triangle gives 1.
fn doubled_area(poly: &[LatticePoint]) -> i64 {
    let o = planar(poly[0]);
    (1..poly.len() - 1)
        .map(|k| cross(o, planar(poly[k]), planar(poly[k + 1])))
        .sum()
}

/// Interiors of two convex polygons are disjoint iff some edge normal separates them.
fn interiors_disjoint(p: &[LatticePoint], q: &[LatticePoint]) -> bool {
    let axes = |poly: &[LatticePoint]| {
        (0..poly.len())
            .map(|k| {
                let (a, b) = (planar(poly[k]), planar(poly[(k + 1) % poly.len()]));
                (b.1 - a.1, a.0 - b.0)
            })
            .collect::<Vec<_>>()
    };
    let range = |poly: &[LatticePoint], axis: (i64, i64)| {
        let vals = poly.iter().map(|&v| {
            let (x, y) = planar(v);
            x * axis.0 + y * axis.1
        });
        let (mut lo, mut hi) = (i64::MAX, i64::MIN);
        for v in vals {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (lo, hi)
    };
    axes(p).into_iter().chain(axes(q)).any(|axis| {
        let (a0, a1) = range(p, axis);
        let (b0, b1) = range(q, axis);
        a1 <= b0 || b1 <= a0
    })
}

/// A fine cell placed in `nΔ₂`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlacedCell {
    #[serde(rename = "type")]
    pub ty: Type,
    pub piece: PuzzlePiece,
    /// Counter-clockwise in the drawing.
    pub vertices: Vec<LatticePoint>,
    pub overlay: Vec<OverlaySegment>,
}

/// A piece of pseudoline `hyperplane` inside one cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OverlaySegment {
    pub hyperplane: usize,
    #[serde(serialize_with = "serialize_bary")]
    pub from: BaryPoint,
    #[serde(serialize_with = "serialize_bary")]
    pub to: BaryPoint,
}

/// Pseudoline of one hyperplane: three rays leaving the centre of its triangle.
///
/// `rays[l-1]` ends on the side `x_l = 0` of `nΔ₂`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pseudoline {
    pub hyperplane: usize,
    #[serde(serialize_with = "serialize_bary")]
    pub apex: BaryPoint,
    #[serde(serialize_with = "serialize_bary_lists")]
    pub rays: Vec<Vec<BaryPoint>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Embedding {
    pub n: usize,
    pub cells: Vec<PlacedCell>,
    pub pseudolines: Vec<Pseudoline>,
    /// Index of the cell containing the corner `n·e_1`.
    pub anchor: usize,
    /// Twice the covered area in the `(x2, x3)` plane; equals `n²` for a tiling.
    pub doubled_area: i64,
}

impl Embedding {
    pub fn triangle_count(&self) -> usize {
        self.cells
            .iter()
            .filter(|c| c.piece.kind == PieceKind::A)
            .count()
    }
}

fn place(a: &Type, piece: &PuzzlePiece) -> PlacedCell {
    let mut base: LatticePoint = [0; 3];
    for s in a.coords().iter().filter(|s| s.is_singleton()) {
        base[s.first().expect("singleton") - 1] += 1;
    }
    let at = |extra: &[usize]| {
        let mut p = base;
        for &j in extra {
            p[j - 1] += 1;
        }
        p
    };
    let mut overlay = Vec::new();
    let vertices = match piece.kind.rhombus_roles() {
        None => {
            let vs = vec![at(&[1]), at(&[2]), at(&[3])];
            let center = [0, 1, 2].map(|k| Rational64::new(3 * base[k] + 1, 3));
            for k in 0..3 {
                overlay.push(OverlaySegment {
                    hyperplane: piece.anchors[0],
                    from: center,
                    to: midpoint(vs[k], vs[(k + 1) % 3]),
                });
            }
            vs
        }
        Some((x, s, y)) => {
            let mut vs = vec![at(&[x, s]), at(&[x, y]), at(&[s, y]), at(&[s, s])];
            if doubled_area(&vs) < 0 {
                vs.reverse();
            }
            // the pseudoline of a doubleton crosses the two edges parallel to its segment
            for (&position, (j, k)) in piece.anchors.iter().zip([(x, s), (s, y)]) {
                let dir = |p: LatticePoint, q: LatticePoint| [0, 1, 2].map(|m| q[m] - p[m]);
                let mut seg = [0i64; 3];
                seg[j - 1] = 1;
                seg[k - 1] = -1;
                let neg = seg.map(|v| -v);
                let mids: Vec<BaryPoint> = (0..4)
                    .filter(|&m| {
                        let dv = dir(vs[m], vs[(m + 1) % 4]);
                        dv == seg || dv == neg
                    })
                    .map(|m| midpoint(vs[m], vs[(m + 1) % 4]))
                    .collect();
                overlay.push(OverlaySegment {
                    hyperplane: position,
                    from: mids[0],
                    to: mids[1],
                });
            }
            vs
        }
    };
    PlacedCell {
        ty: a.clone(),
        piece: piece.clone(),
        vertices,
        overlay,
    }
}

type EdgeKey = (LatticePoint, LatticePoint);

fn edge_key(p: LatticePoint, q: LatticePoint) -> EdgeKey {
    if p <= q {
        (p, q)
    } else {
        (q, p)
    }
}

fn trace(
    cells: &[PlacedCell],
    edges: &BTreeMap<EdgeKey, Vec<usize>>,
    n: usize,
    hyperplane: usize,
    start_cell: usize,
) -> Result<Pseudoline> {
    let bad = |msg: String| Error::EmbeddingInconsistent(msg);
    let tri = &cells[start_cell];
    let apex = tri.overlay[0].from;
    let mut rays = vec![Vec::new(); 3];
    for l in 1..=3 {
        let (j, k) = match l {
            1 => (2, 3),
            2 => (1, 3),
            _ => (1, 2),
        };
        let mut ray = vec![apex];
        let vs = &tri.vertices;
        let mut edge = edge_key(vs[j - 1], vs[k - 1]);
        let mut cell = start_cell;
        for _ in 0..=cells.len() {
            ray.push(midpoint(edge.0, edge.1));
            if edge.0[l - 1] == 0 {
                break;
            }
            let next = edges
                .get(&edge)
                .and_then(|v| v.iter().copied().find(|&c| c != cell))
                .ok_or_else(|| bad(format!("pseudoline {hyperplane} stops inside nΔ₂")))?;
            let c = &cells[next];
            if c.ty.coord(hyperplane) != pair(j, k) {
                return Err(bad(format!(
                    "pseudoline {hyperplane} enters cell {} through the wrong edge",
                    c.ty
                )));
            }
            let m = c.vertices.len();
            let opposite = (0..m)
                .map(|q| edge_key(c.vertices[q], c.vertices[(q + 1) % m]))
                .find(|&e| {
                    e != edge && {
                        let d1 = [0, 1, 2].map(|t| e.1[t] - e.0[t]);
                        let d0 = [0, 1, 2].map(|t| edge.1[t] - edge.0[t]);
                        d1 == d0 || d1 == d0.map(|v| -v)
                    }
                })
                .ok_or_else(|| bad(format!("cell {} has no opposite edge", c.ty)))?;
            edge = opposite;
            cell = next;
        }
        if edge.0[l - 1] != 0 {
            return Err(bad(format!(
                "pseudoline {hyperplane} does not reach the boundary"
            )));
        }
        let _ = n;
        rays[l - 1] = ray;
    }
    Ok(Pseudoline {
        hyperplane,
        apex,
        rays,
    })
}

/// Places every cell of a `d = 3` triangulation in `nΔ₂` and traces its pseudolines.
///
/// Fails with `EmbeddingInconsistent` unless the cells tile `nΔ₂` (total area
/// `n²` unit triangles, disjoint interiors, exactly `n` triangles) and every
/// pseudoline runs from its apex to the boundary.
pub fn embed(c: &SubgraphCollection) -> Result<Embedding> {
    if c.d() != 3 {
        return Err(Error::ParameterMismatch {
            n: c.n(),
            d: 3,
            found_n: c.n(),
            found_d: c.d(),
        });
    }
    let n = c.n();
    let bad = |msg: String| Error::EmbeddingInconsistent(msg);
    let types = c.types()?;
    let mut cells = Vec::with_capacity(types.len());
    for a in &types {
        let piece = classify_piece(a)?;
        cells.push(place(a, &piece));
    }
    let area: i64 = cells.iter().map(|p| doubled_area(&p.vertices)).sum();
    let target = (n * n) as i64;
    if area != target {
        return Err(bad(format!(
            "cells cover {area} unit triangles instead of {target}"
        )));
    }
    let overlap = (0..cells.len()).into_par_iter().find_map_first(|x| {
        (x + 1..cells.len())
            .find(|&y| !interiors_disjoint(&cells[x].vertices, &cells[y].vertices))
            .map(|y| (x, y))
    });
    if let Some((x, y)) = overlap {
        return Err(bad(format!(
            "cells {} and {} overlap",
            cells[x].ty, cells[y].ty
        )));
    }
    let triangles = cells
        .iter()
        .filter(|p| p.piece.kind == PieceKind::A)
        .count();
    if triangles != n {
        return Err(bad(format!("{triangles} triangle cells instead of {n}")));
    }
    let corner: LatticePoint = [n as i64, 0, 0];
    let anchor = cells
        .iter()
        .position(|p| p.vertices.contains(&corner))
        .ok_or_else(|| bad("no cell contains the corner n·e1".into()))?;

    let mut edges: BTreeMap<EdgeKey, Vec<usize>> = BTreeMap::new();
    for (idx, p) in cells.iter().enumerate() {
        let m = p.vertices.len();
        for q in 0..m {
            edges
                .entry(edge_key(p.vertices[q], p.vertices[(q + 1) % m]))
                .or_default()
                .push(idx);
        }
    }
    if let Some((e, v)) = edges.iter().find(|(_, v)| v.len() > 2) {
        return Err(bad(format!(
            "edge {:?}-{:?} lies in {} cells",
            e.0,
            e.1,
            v.len()
        )));
    }
    let mut pseudolines = Vec::with_capacity(n);
    for i in 1..=n {
        let start = cells
            .iter()
            .position(|p| p.piece.kind == PieceKind::A && p.piece.anchors[0] == i)
            .ok_or_else(|| bad(format!("hyperplane {i} has no triangle cell")))?;
        pseudolines.push(trace(&cells, &edges, n, i, start)?);
    }
    Ok(Embedding {
        n,
        cells,
        pseudolines,
        anchor,
        doubled_area: area,
    })
}

const PALETTE: [&str; 10] = [
    "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
    "#7f7f7f", "#bcbd22",
];

const SCALE: f64 = 100.0;

fn ratio_f64(r: &Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Drawing position: 100 units per lattice step, corner `n·e_1` at bottom left.
fn screen(p: &BaryPoint, n: usize) -> (f64, f64) {
    let (x2, x3) = (ratio_f64(&p[1]), ratio_f64(&p[2]));
    (
        SCALE * (x2 + x3 / 2.0),
        SCALE * (3f64.sqrt() / 2.0) * (n as f64 - x3),
    )
}

fn points_attr(points: &[BaryPoint], n: usize) -> String {
    points
        .iter()
        .map(|p| {
            let (x, y) = screen(p, n);
            format!("{x:.3},{y:.3}")
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// SVG 1.1 document: cells in canonical order, then pseudolines by index.
pub fn render_svg(e: &Embedding) -> String {
    let n = e.n;
    let margin = 20.0;
    let width = SCALE * n as f64 + 2.0 * margin;
    let height = SCALE * (3f64.sqrt() / 2.0) * n as f64 + 2.0 * margin;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.3}" height="{height:.3}" viewBox="{:.3} {:.3} {width:.3} {height:.3}">"#,
        -margin, -margin
    );
    let _ = writeln!(s, "<style>");
    let _ = writeln!(s, "polygon {{ stroke: #333333; stroke-width: 1.5; }}");
    let _ = writeln!(s, ".piece-A {{ fill: #f6e8b1; }}");
    let _ = writeln!(s, ".piece-B {{ fill: #cfe3f0; }}");
    let _ = writeln!(s, ".piece-C {{ fill: #d8ecd0; }}");
    let _ = writeln!(s, ".piece-D {{ fill: #ead5ea; }}");
    let _ = writeln!(s, "polyline {{ fill: none; stroke-width: 3; }}");
    for i in 1..=n {
        let color = PALETTE[(i - 1) % PALETTE.len()];
        let _ = writeln!(s, ".hp-{i} {{ stroke: {color}; }}");
        let _ = writeln!(s, "circle.hp-{i} {{ fill: {color}; }}");
    }
    let _ = writeln!(s, "</style>");
    let _ = writeln!(s, r#"<g id="cells">"#);
    for c in &e.cells {
        let pts: Vec<BaryPoint> = c.vertices.iter().map(|&v| to_bary(v)).collect();
        let _ = writeln!(
            s,
            r#"<polygon class="piece-{}" data-type="{}" points="{}"/>"#,
            c.piece.kind.letter(),
            c.ty,
            points_attr(&pts, n)
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g id="pseudolines">"#);
    for p in &e.pseudolines {
        let _ = writeln!(s, r#"<g class="hp-{}">"#, p.hyperplane);
        for ray in &p.rays {
            let _ = writeln!(
                s,
                r#"<polyline class="hp-{}" points="{}"/>"#,
                p.hyperplane,
                points_attr(ray, n)
            );
        }
        let (x, y) = screen(&p.apex, n);
        let _ = writeln!(
            s,
            r#"<circle class="hp-{}" cx="{x:.3}" cy="{y:.3}" r="5.000"/>"#,
            p.hyperplane
        );
        let _ = writeln!(s, "</g>");
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    s
}

pub fn embed_and_render(c: &SubgraphCollection) -> Result<String> {
    Ok(render_svg(&embed(c)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subdivision::{enumerate_triangulations, spanning_trees};

    fn t(s: &str) -> Type {
        Type::compact(3, s).unwrap()
    }

    fn prism() -> SubgraphCollection {
        SubgraphCollection::new(
            2,
            3,
            ["123,1", "23,13", "2,123"]
                .iter()
                .map(|s| type_to_subgraph(&t(s))),
        )
        .unwrap()
    }

    #[test]
    fn mixed_cells() {
        assert_eq!(cayley_cell(&t("123,1")).to_string(), "123+1");
        assert!(cayley_cell(&t("123,1")).is_fine());
        assert!(cayley_cell(&t("23,13")).is_fine());
        assert!(!cayley_cell(&t("123,123")).is_fine());
    }

    #[test]
    fn piece_kinds() {
        assert_eq!(
            classify_piece(&t("123,1")).unwrap(),
            PuzzlePiece {
                kind: PieceKind::A,
                anchors: vec![1]
            }
        );
        assert_eq!(
            classify_piece(&t("23,13")).unwrap(),
            PuzzlePiece {
                kind: PieceKind::B,
                anchors: vec![2, 1]
            }
        );
        assert_eq!(classify_piece(&t("12,23,1")).unwrap().kind, PieceKind::C);
        assert_eq!(
            classify_piece(&t("13,12,2")).unwrap(),
            PuzzlePiece {
                kind: PieceKind::D,
                anchors: vec![2, 1]
            }
        );
        assert!(matches!(
            classify_piece(&t("12,12")),
            Err(Error::NotAFineCell(_))
        ));
        assert!(matches!(
            classify_piece(&t("123,12")),
            Err(Error::NotAFineCell(_))
        ));
    }

    #[test]
    fn rule_table_shape() {
        let rules = rule_table();
        assert_eq!(rules.len(), 15);
        let shown: Vec<String> = rules.iter().map(|r| r.to_string()).collect();
        assert!(shown.contains(&"(12[3], 3) -> (12, 3y)".to_string()));
        assert!(shown.contains(&"([1]2, 23, 1) -> (2, 23, 1y)".to_string()));
        assert!(shown.contains(&"(1[2], 23, y) -> (1, 23, y1) or (1, 123, y)".to_string()));
        assert!(shown.contains(&"(12, [2]3, y) -> (12, 3, y3) or (123, 3, y)".to_string()));
        assert!(shown.contains(&"(12, 2[3], 3) -> (12, 2, 3y)".to_string()));
    }

    #[test]
    fn triangle_transition_example() {
        let tr = transitions(&t("123,3")).unwrap();
        let drop3 = tr.iter().find(|x| x.removed == 3).unwrap();
        assert_eq!(drop3.candidates, vec![t("12,13"), t("12,23")]);
        assert!(tr.iter().find(|x| x.removed == 1).unwrap().is_boundary());
    }

    #[test]
    fn rhombus_middle_rule() {
        let tr = transitions(&t("12,23,3")).unwrap();
        let mid = tr
            .iter()
            .find(|x| x.position == 1 && x.removed == 2)
            .unwrap();
        assert_eq!(mid.candidates, vec![t("1,23,13"), t("1,123,3")]);
    }

    #[test]
    fn table_agrees_with_tree_cuts() {
        for n in 1..=4 {
            for tree in spanning_trees(n, 3).unwrap() {
                let a = subgraph_to_type(&tree).unwrap();
                for tr in transitions(&a).unwrap() {
                    let cut = facet_neighbors(&tree, tr.position, tr.removed);
                    let cut: Vec<Type> = cut
                        .map(|v| {
                            v.iter()
                                .map(|g| subgraph_to_type(g).unwrap())
                                .collect::<BTreeSet<_>>()
                        })
                        .unwrap_or_default()
                        .into_iter()
                        .collect();
                    assert_eq!(
                        cut, tr.candidates,
                        "{a} dropping {} at {}",
                        tr.removed, tr.position
                    );
                }
            }
        }
    }

    #[test]
    fn prism_embedding() {
        let e = embed(&prism()).unwrap();
        assert_eq!(e.doubled_area, 4);
        assert_eq!(e.triangle_count(), 2);
        assert_eq!(e.pseudolines.len(), 2);
        assert_eq!(e.cells[e.anchor].ty, t("123,1"));
        let report = verify_transition_rules(&prism()).unwrap();
        assert!(report.ok, "{report:?}");
        assert_eq!(report.interior_crossings, 4);
        let svg = embed_and_render(&prism()).unwrap();
        assert_eq!(svg.matches("<polygon").count(), 3);
        assert!(svg.contains(r#"class="hp-2""#));
        assert_eq!(svg, embed_and_render(&prism()).unwrap());
    }

    #[test]
    fn single_line() {
        let c = SubgraphCollection::new(1, 3, [type_to_subgraph(&t("123"))]).unwrap();
        let e = embed(&c).unwrap();
        assert_eq!(
            e.pseudolines[0]
                .rays
                .iter()
                .map(Vec::len)
                .collect::<Vec<_>>(),
            vec![2, 2, 2]
        );
        assert!(verify_transition_rules(&c).unwrap().ok);
    }

    #[test]
    fn overlapping_cells_are_rejected() {
        let bad = SubgraphCollection::new(
            2,
            3,
            ["123,1", "123,2", "2,123"]
                .iter()
                .map(|s| type_to_subgraph(&t(s))),
        )
        .unwrap();
        assert!(matches!(embed(&bad), Err(Error::EmbeddingInconsistent(_))));
    }

    #[test]
    fn all_small_triangulations_embed() {
        for n in 1..=3 {
            for c in enumerate_triangulations(n, 3).unwrap() {
                let e = embed(&c).unwrap();
                assert_eq!(e.triangle_count(), n);
                assert!(verify_transition_rules(&c).unwrap().ok);
            }
        }
    }
}
