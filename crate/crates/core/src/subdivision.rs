//! Subdivisions of `Δ_{n-1} × Δ_{d-1}` encoded as collections of subgraphs of `K_{n,d}`.
//!
//! Vertex `(i, j)` of the product of simplices is the edge between left vertex
//! `i ∈ [n]` and right vertex `j ∈ [d]`. A cell is the subgraph formed by its
//! vertices; a type and its cell carry the same data.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::axioms::{check_axioms, UnionFind};
use crate::error::{Error, Result};
use crate::structure::vertices;
use crate::types::{check_param, DirSet, TomTypeSet, Type};

/// Largest spanning-tree count `enumerate_triangulations` accepts.
pub const MAX_SPANNING_TREES: u128 = 100_000;
/// Largest `n + d` for the general (non-triangulation) facet condition.
pub const MAX_GENERAL_VERTICES: usize = 20;

/// A subgraph of `K_{n,d}`; `rows[i-1]` holds the right neighbours of left vertex `i`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BipartiteSubgraph {
    n: usize,
    d: usize,
    rows: Vec<DirSet>,
}

impl BipartiteSubgraph {
    pub fn new(n: usize, d: usize, rows: Vec<DirSet>) -> Result<Self> {
        check_param("n", n)?;
        check_param("d", d)?;
        if rows.len() != n {
            return Err(Error::WrongLength {
                expected: n,
                actual: rows.len(),
            });
        }
        for (i, r) in rows.iter().enumerate() {
            if let Some(j) = (*r - DirSet::full(d)).first() {
                return Err(Error::OutOfRange(i + 1, j));
            }
        }
        Ok(BipartiteSubgraph { n, d, rows })
    }

    /// Builds a subgraph from 1-based `(i, j)` edges.
    pub fn from_edges(n: usize, d: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut rows = vec![DirSet::EMPTY; n];
        for &(i, j) in edges {
            if i == 0 || i > n {
                return Err(Error::IndexOutOfRange { index: i, max: n });
            }
            if j == 0 || j > d {
                return Err(Error::OutOfRange(i, j));
            }
            rows[i - 1] = rows[i - 1].with(j);
        }
        BipartiteSubgraph::new(n, d, rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn rows(&self) -> &[DirSet] {
        &self.rows
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |j| (i + 1, j)))
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn contains_edge(&self, i: usize, j: usize) -> bool {
        self.rows[i - 1].contains(j)
    }

    pub fn is_subgraph_of(&self, other: &BipartiteSubgraph) -> bool {
        self.rows
            .iter()
            .zip(&other.rows)
            .all(|(a, b)| a.is_subset(*b))
    }

    pub fn without_edge(&self, i: usize, j: usize) -> BipartiteSubgraph {
        let mut rows = self.rows.clone();
        rows[i - 1] = rows[i - 1].without(j);
        BipartiteSubgraph {
            n: self.n,
            d: self.d,
            rows,
        }
    }

    pub fn with_edge(&self, i: usize, j: usize) -> BipartiteSubgraph {
        let mut rows = self.rows.clone();
        rows[i - 1] = rows[i - 1].with(j);
        BipartiteSubgraph {
            n: self.n,
            d: self.d,
            rows,
        }
    }

    fn right_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.d + 1];
        for r in &self.rows {
            for j in r.iter() {
                deg[j] += 1;
            }
        }
        deg
    }

    /// Some vertex of `[n] ⊔ [d]` has no incident edge.
    pub fn has_isolated_vertex(&self) -> bool {
        self.rows.iter().any(|r| r.is_empty()) || self.right_degrees()[1..].contains(&0)
    }

    /// Component label of each vertex; left `i` is index `i-1`, right `j` is `n+j-1`.
    fn component_labels(&self) -> (Vec<usize>, usize) {
        let mut uf = UnionFind::new(self.n + self.d);
        let mut comps = self.n + self.d;
        for (i, j) in self.edges() {
            if uf.union(i - 1, self.n + j - 1) {
                comps -= 1;
            }
        }
        ((0..self.n + self.d).map(|v| uf.find(v)).collect(), comps)
    }

    /// Every vertex covered and the subgraph connected.
    pub fn spans(&self) -> bool {
        !self.has_isolated_vertex() && self.component_labels().1 == 1
    }

    pub fn is_spanning_tree(&self) -> bool {
        self.edge_count() == self.n + self.d - 1 && self.spans()
    }
}

impl fmt::Display for BipartiteSubgraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.edges().map(|(i, j)| format!("({i},{j})")).collect();
        write!(f, "{{{}}}", e.join(","))
    }
}

impl fmt::Debug for BipartiteSubgraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for BipartiteSubgraph {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.edge_count()))?;
        for (i, j) in self.edges() {
            seq.serialize_element(&[i, j])?;
        }
        seq.end()
    }
}

/// `(i, j)` is an edge iff `j ∈ a_i`.
pub fn type_to_subgraph(a: &Type) -> BipartiteSubgraph {
    BipartiteSubgraph {
        n: a.n(),
        d: a.d(),
        rows: a.coords().to_vec(),
    }
}

/// Inverse of [`type_to_subgraph`]; every left vertex needs an edge.
pub fn subgraph_to_type(g: &BipartiteSubgraph) -> Result<Type> {
    if let Some(i) = g.rows.iter().position(|r| r.is_empty()) {
        return Err(Error::EmptyLeftVertex(i + 1));
    }
    Ok(Type::new_unchecked(g.d, g.rows.clone()))
}

/// The cells of a (candidate) subdivision.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubgraphCollection {
    n: usize,
    d: usize,
    cells: BTreeSet<BipartiteSubgraph>,
}

impl SubgraphCollection {
    pub fn new<I: IntoIterator<Item = BipartiteSubgraph>>(
        n: usize,
        d: usize,
        cells: I,
    ) -> Result<Self> {
        check_param("n", n)?;
        check_param("d", d)?;
        let mut set = BTreeSet::new();
        for c in cells {
            if c.n != n || c.d != d {
                return Err(Error::ParameterMismatch {
                    n,
                    d,
                    found_n: c.n,
                    found_d: c.d,
                });
            }
            set.insert(c);
        }
        Ok(SubgraphCollection { n, d, cells: set })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn cells(&self) -> &BTreeSet<BipartiteSubgraph> {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Cell types in canonical order.
    pub fn types(&self) -> Result<Vec<Type>> {
        self.cells.iter().map(subgraph_to_type).collect()
    }
}

impl fmt::Debug for SubgraphCollection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubgraphCollection(n={}, d={}) ", self.n, self.d)?;
        f.debug_set().entries(self.cells.iter()).finish()
    }
}

/// A single broken condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SubdivisionViolation {
    NotSpanning {
        cell: BipartiteSubgraph,
    },
    NotATree {
        cell: BipartiteSubgraph,
    },
    UncoveredFacet {
        cell: BipartiteSubgraph,
        facet: BipartiteSubgraph,
    },
    AlternatingCycle {
        first: BipartiteSubgraph,
        second: BipartiteSubgraph,
        cycle: Vec<(usize, usize)>,
    },
}

impl fmt::Display for SubdivisionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubdivisionViolation::NotSpanning { cell } => {
                write!(f, "cell {cell} does not span K_n,d")
            }
            SubdivisionViolation::NotATree { cell } => {
                write!(f, "cell {cell} is not a spanning tree")
            }
            SubdivisionViolation::UncoveredFacet { cell, facet } => {
                write!(
                    f,
                    "facet {facet} of cell {cell} is interior but lies in no other cell"
                )
            }
            SubdivisionViolation::AlternatingCycle {
                first,
                second,
                cycle,
            } => {
                let c: Vec<String> = cycle.iter().map(|(i, j)| format!("({i},{j})")).collect();
                write!(
                    f,
                    "cells {first} and {second} share the alternating cycle {}",
                    c.join(" ")
                )
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub ok: bool,
    pub violations: usize,
    pub first_violation: Option<SubdivisionViolation>,
}

impl ConditionReport {
    fn from_violations(v: Vec<SubdivisionViolation>) -> Self {
        ConditionReport {
            ok: v.is_empty(),
            violations: v.len(),
            first_violation: v.into_iter().next(),
        }
    }
}

/// Result of checking the three conditions characterizing subdivisions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubdivisionReport {
    pub n: usize,
    pub d: usize,
    pub triangulation: bool,
    pub ok: bool,
    pub spanning: ConditionReport,
    pub facets: ConditionReport,
    pub face_to_face: ConditionReport,
    /// Present in general mode, where maximal disconnected subgraphs are read as bond complements.
    pub note: Option<String>,
}

/// A simple cycle alternating between edges of `a` and `b` that is not inside both.
///
/// `a`-edges are oriented left→right and `b`-edges right→left, so alternating
/// cycles are exactly directed cycles. A violation exists iff some arc from an
/// edge not shared by both cells closes a directed cycle.
pub fn alternating_cycle(
    a: &BipartiteSubgraph,
    b: &BipartiteSubgraph,
) -> Option<Vec<(usize, usize)>> {
    let (n, d) = (a.n, a.d);
    let total = n + d;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); total];
    for (i, j) in a.edges() {
        adj[i - 1].push(n + j - 1);
    }
    for (i, j) in b.edges() {
        adj[n + j - 1].push(i - 1);
    }
    let mut candidates: Vec<(usize, usize)> = Vec::new();
    for (i, j) in a.edges() {
        if !b.contains_edge(i, j) {
            candidates.push((i - 1, n + j - 1));
        }
    }
    for (i, j) in b.edges() {
        if !a.contains_edge(i, j) {
            candidates.push((n + j - 1, i - 1));
        }
    }
    let edge_of = |x: usize, y: usize| {
        if x < n {
            (x + 1, y - n + 1)
        } else {
            (y + 1, x - n + 1)
        }
    };
    for (u, v) in candidates {
        let mut prev = vec![usize::MAX; total];
        let mut queue = VecDeque::from([v]);
        prev[v] = v;
        while let Some(x) = queue.pop_front() {
            if x == u {
                break;
            }
            for &y in &adj[x] {
                if prev[y] == usize::MAX {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        if prev[u] == usize::MAX {
            continue;
        }
        let mut path = vec![u];
        let mut cur = u;
        while cur != v {
            cur = prev[cur];
            path.push(cur);
        }
        path.reverse();
        // path runs v … u; close it with the arc u → v
        let mut cycle: Vec<(usize, usize)> = path.windows(2).map(|w| edge_of(w[0], w[1])).collect();
        cycle.push(edge_of(u, v));
        return Some(cycle);
    }
    None
}

/// Edge sets `t − B` over all bonds `B` of a connected cell.
fn bond_complements(t: &BipartiteSubgraph) -> Vec<BipartiteSubgraph> {
    let (n, d) = (t.n, t.d);
    let total = n + d;
    let edges: Vec<(usize, usize)> = t.edges().map(|(i, j)| (i - 1, n + j - 1)).collect();
    let connected_side = |side: u64| {
        let members: Vec<usize> = (0..total).filter(|&v| side >> v & 1 == 1).collect();
        let mut uf = UnionFind::new(total);
        let mut comps = members.len();
        for &(x, y) in &edges {
            if side >> x & 1 == 1 && side >> y & 1 == 1 && uf.union(x, y) {
                comps -= 1;
            }
        }
        comps == 1
    };
    let all = (1u64 << total) - 1;
    let mut out = Vec::new();
    // vertex 0 stays on the first side so each bond appears once
    for rest in 0..(1u64 << (total - 1)) {
        let side = (rest << 1) | 1;
        let other = all & !side;
        if other == 0 || !connected_side(side) || !connected_side(other) {
            continue;
        }
        let mut rows = vec![DirSet::EMPTY; n];
        for &(x, y) in &edges {
            if (side >> x & 1) == (side >> y & 1) {
                rows[x] = rows[x].with(y - n + 1);
            }
        }
        out.push(BipartiteSubgraph { n, d, rows });
    }
    out
}

/// Checks spanning cells, facet coverage and face-to-face intersection.
///
/// In triangulation mode each cell must be a spanning tree and the facets of a
/// cell are `t − e`. Otherwise facets are the complements of bonds of the cell,
/// which requires `n + d ≤ 20`.
pub fn check_subdivision(c: &SubgraphCollection, triangulation: bool) -> Result<SubdivisionReport> {
    let (n, d) = (c.n, c.d);
    if !triangulation && n + d > MAX_GENERAL_VERTICES {
        return Err(Error::ParameterOutOfRange {
            name: "n+d",
            value: n + d,
            max: MAX_GENERAL_VERTICES,
        });
    }
    let cells: Vec<&BipartiteSubgraph> = c.cells.iter().collect();

    let mut spanning = Vec::new();
    for &t in &cells {
        if !t.spans() {
            spanning.push(SubdivisionViolation::NotSpanning { cell: t.clone() });
        } else if triangulation && !t.is_spanning_tree() {
            spanning.push(SubdivisionViolation::NotATree { cell: t.clone() });
        }
    }

    let mut facets = Vec::new();
    for (idx, &t) in cells.iter().enumerate() {
        if !t.spans() {
            continue;
        }
        let candidates: Vec<BipartiteSubgraph> = if triangulation {
            t.edges().map(|(i, j)| t.without_edge(i, j)).collect()
        } else {
            bond_complements(t)
        };
        for s in candidates {
            if s.has_isolated_vertex() {
                continue;
            }
            let covered = cells
                .iter()
                .enumerate()
                .any(|(o, other)| o != idx && s.is_subgraph_of(other));
            if !covered {
                facets.push(SubdivisionViolation::UncoveredFacet {
                    cell: t.clone(),
                    facet: s,
                });
            }
        }
    }

    let face_to_face: Vec<SubdivisionViolation> = (0..cells.len())
        .into_par_iter()
        .flat_map_iter(|x| {
            let cells = &cells;
            (x + 1..cells.len()).filter_map(move |y| {
                alternating_cycle(cells[x], cells[y]).map(|cycle| {
                    SubdivisionViolation::AlternatingCycle {
                        first: cells[x].clone(),
                        second: cells[y].clone(),
                        cycle,
                    }
                })
            })
        })
        .collect();

    let spanning = ConditionReport::from_violations(spanning);
    let facets = ConditionReport::from_violations(facets);
    let face_to_face = ConditionReport::from_violations(face_to_face);
    let ok = spanning.ok && facets.ok && face_to_face.ok;
    let note = (!triangulation).then(|| {
        "maximal disconnected subgraphs taken as complements of minimal edge cuts".to_string()
    });
    Ok(SubdivisionReport {
        n,
        d,
        triangulation,
        ok,
        spanning,
        facets,
        face_to_face,
        note,
    })
}

/// The cells `{t_A : A a vertex of m}`.
pub fn tom_to_subdivision(m: &TomTypeSet) -> SubgraphCollection {
    let cells = vertices(m).iter().map(type_to_subgraph).collect();
    SubgraphCollection {
        n: m.n(),
        d: m.d(),
        cells,
    }
}

/// Types of all faces of a triangulation with no empty coordinate.
pub fn triangulation_types(c: &SubgraphCollection) -> Result<TomTypeSet> {
    let report = check_subdivision(c, true)?;
    if !report.ok {
        let first = [&report.spanning, &report.facets, &report.face_to_face]
            .iter()
            .find_map(|r| r.first_violation.as_ref().map(|v| v.to_string()))
            .unwrap_or_default();
        return Err(Error::NotATriangulation(first));
    }
    let (n, d) = (c.n, c.d);
    let mut types = BTreeSet::new();
    for t in &c.cells {
        let edges: Vec<(usize, usize)> = t.edges().collect();
        for mask in 1u64..(1u64 << edges.len()) {
            let mut rows = vec![DirSet::EMPTY; n];
            for (k, &(i, j)) in edges.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    rows[i - 1] = rows[i - 1].with(j);
                }
            }
            if rows.iter().all(|r| !r.is_empty()) {
                types.insert(Type::new_unchecked(d, rows));
            }
        }
    }
    TomTypeSet::from_types(n, d, types)
}

/// Neighbouring cells across the facet `t − (i, j)` of a spanning tree.
///
/// `None` when the facet lies on the boundary of the polytope (removing the
/// edge isolates a vertex). Otherwise the candidates are `t − (i,j) + (i',j')`
/// with `i'` on the side of `j` and `j'` on the side of `i`, i.e. the vertices
/// beyond the facet hyperplane.
pub fn facet_neighbors(
    t: &BipartiteSubgraph,
    i: usize,
    j: usize,
) -> Option<Vec<BipartiteSubgraph>> {
    let facet = t.without_edge(i, j);
    if facet.has_isolated_vertex() {
        return None;
    }
    let (labels, _) = facet.component_labels();
    let n = t.n;
    let side_of_i = labels[i - 1];
    let side_of_j = labels[n + j - 1];
    let mut out = Vec::new();
    for ii in 1..=n {
        if labels[ii - 1] != side_of_j {
            continue;
        }
        for jj in 1..=t.d {
            if labels[n + jj - 1] == side_of_i && (ii, jj) != (i, j) {
                out.push(facet.with_edge(ii, jj));
            }
        }
    }
    Some(out)
}

/// All spanning trees of `K_{n,d}`, in canonical order.
pub fn spanning_trees(n: usize, d: usize) -> Result<Vec<BipartiteSubgraph>> {
    check_param("n", n)?;
    check_param("d", d)?;
    let count = (n as u128)
        .checked_pow(d as u32 - 1)
        .and_then(|a| a.checked_mul((d as u128).checked_pow(n as u32 - 1)?));
    let count = count.unwrap_or(u128::MAX);
    if count > MAX_SPANNING_TREES {
        return Err(Error::SearchSpaceTooLarge {
            size: count,
            limit: MAX_SPANNING_TREES,
        });
    }
    let edges: Vec<(usize, usize)> = (1..=n).flat_map(|i| (1..=d).map(move |j| (i, j))).collect();
    let need = n + d - 1;
    let mut out = Vec::new();
    fn go(
        k: usize,
        chosen: &mut Vec<(usize, usize)>,
        edges: &[(usize, usize)],
        need: usize,
        n: usize,
        d: usize,
        out: &mut Vec<BipartiteSubgraph>,
    ) {
        if chosen.len() == need {
            let mut uf = UnionFind::new(n + d);
            if chosen.iter().all(|&(i, j)| uf.union(i - 1, n + j - 1)) {
                out.push(BipartiteSubgraph::from_edges(n, d, chosen).expect("edges are in range"));
            }
            return;
        }
        if edges.len() - k < need - chosen.len() {
            return;
        }
        // keep the partial choice acyclic
        let mut uf = UnionFind::new(n + d);
        for &(i, j) in chosen.iter() {
            uf.union(i - 1, n + j - 1);
        }
        let (i, j) = edges[k];
        if uf.find(i - 1) != uf.find(n + j - 1) {
            chosen.push((i, j));
            go(k + 1, chosen, edges, need, n, d, out);
            chosen.pop();
        }
        go(k + 1, chosen, edges, need, n, d, out);
    }
    go(0, &mut Vec::new(), &edges, need, n, d, &mut out);
    out.sort();
    Ok(out)
}

/// `C(a, b)`.
pub fn binomial(a: usize, b: usize) -> u128 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    (0..b).fold(1u128, |acc, k| acc * (a - k) as u128 / (k + 1) as u128)
}

/// Flow on each edge of a spanning tree carrying supplies `rows` and demands `cols`.
fn tree_flow(t: &BipartiteSubgraph, rows: &[i64], cols: &[i64]) -> Vec<i64> {
    let (n, d) = (t.n, t.d);
    let total = n + d;
    let edges: Vec<(usize, usize)> = t.edges().map(|(i, j)| (i - 1, n + j - 1)).collect();
    let mut residual: Vec<i64> = rows.iter().chain(cols).copied().collect();
    let mut degree = vec![0usize; total];
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); total];
    for (e, &(x, y)) in edges.iter().enumerate() {
        degree[x] += 1;
        degree[y] += 1;
        incident[x].push(e);
        incident[y].push(e);
    }
    let mut flow = vec![0i64; edges.len()];
    let mut used = vec![false; edges.len()];
    let mut leaves: Vec<usize> = (0..total).filter(|&v| degree[v] == 1).collect();
    while let Some(v) = leaves.pop() {
        let Some(&e) = incident[v].iter().find(|&&e| !used[e]) else {
            continue;
        };
        used[e] = true;
        let (x, y) = edges[e];
        let other = if x == v { y } else { x };
        flow[e] = residual[v];
        residual[other] -= residual[v];
        residual[v] = 0;
        degree[v] -= 1;
        degree[other] -= 1;
        if degree[other] == 1 {
            leaves.push(other);
        }
    }
    flow
}

/// A generic interior point of `Δ_{n-1} × Δ_{d-1}` as integer margins: no
/// spanning tree puts zero flow on any edge, so exactly one cell of each
/// triangulation contains it.
fn generic_margins(trees: &[BipartiteSubgraph], n: usize, d: usize) -> (Vec<i64>, Vec<i64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    loop {
        let weight = 1000i64;
        let mut rows: Vec<i64> = (0..n)
            .map(|_| d as i64 * weight + rng.random_range(1..=97))
            .collect();
        let mut cols: Vec<i64> = (0..d)
            .map(|_| n as i64 * weight + rng.random_range(1..=97))
            .collect();
        let diff: i64 = rows.iter().sum::<i64>() - cols.iter().sum::<i64>();
        if diff >= 0 {
            cols[d - 1] += diff;
        } else {
            rows[n - 1] -= diff;
        }
        if trees
            .iter()
            .all(|t| tree_flow(t, &rows, &cols).iter().all(|&f| f != 0))
        {
            return (rows, cols);
        }
    }
}

struct TriangulationSearch<'a> {
    trees: &'a [BipartiteSubgraph],
    index: HashMap<&'a [DirSet], usize>,
    cell_target: usize,
}

impl TriangulationSearch<'_> {
    /// Interior facets of a tree: `t − e` for edges whose removal isolates nothing.
    fn interior_facets(t: &BipartiteSubgraph) -> Vec<BipartiteSubgraph> {
        t.edges()
            .map(|(i, j)| t.without_edge(i, j))
            .filter(|f| !f.has_isolated_vertex())
            .collect()
    }

    fn run(&self, root: usize, out: &mut Vec<Vec<usize>>) {
        let mut cells = Vec::new();
        let mut facet_count: BTreeMap<BipartiteSubgraph, u8> = BTreeMap::new();
        self.extend(root, &mut cells, &mut facet_count, out);
    }

    fn extend(
        &self,
        tree: usize,
        cells: &mut Vec<usize>,
        facet_count: &mut BTreeMap<BipartiteSubgraph, u8>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let facets = Self::interior_facets(&self.trees[tree]);
        let mut overfull = false;
        for f in &facets {
            let c = facet_count.entry(f.clone()).or_insert(0);
            *c += 1;
            overfull |= *c > 2;
        }
        cells.push(tree);
        if !overfull && cells.len() <= self.cell_target {
            let open = facet_count
                .iter()
                .find(|(_, &c)| c == 1)
                .map(|(f, _)| f.clone());
            match open {
                None => {
                    let mut found = cells.clone();
                    found.sort_unstable();
                    out.push(found);
                }
                Some(facet) => {
                    for cand in self.trees_through(&facet) {
                        if cells.contains(&cand) {
                            continue;
                        }
                        let t = &self.trees[cand];
                        if cells
                            .iter()
                            .all(|&c| alternating_cycle(&self.trees[c], t).is_none())
                        {
                            self.extend(cand, cells, facet_count, out);
                        }
                    }
                }
            }
        }
        cells.pop();
        for f in &facets {
            let c = facet_count.get_mut(f).expect("facet was counted");
            *c -= 1;
            if *c == 0 {
                facet_count.remove(f);
            }
        }
    }

    /// Trees containing a forest with exactly two components.
    fn trees_through(&self, facet: &BipartiteSubgraph) -> Vec<usize> {
        let (labels, _) = facet.component_labels();
        let n = facet.n;
        let mut out = Vec::new();
        for i in 1..=n {
            for j in 1..=facet.d {
                if labels[i - 1] != labels[n + j - 1] {
                    let t = facet.with_edge(i, j);
                    if let Some(&idx) = self.index.get(t.rows.as_slice()) {
                        out.push(idx);
                    }
                }
            }
        }
        out
    }
}

/// Every triangulation of `Δ_{n-1} × Δ_{d-1}`, in canonical order.
///
/// The search starts from each spanning tree containing a fixed generic interior
/// point and repeatedly glues a compatible tree onto the first unmatched
/// interior facet. Each triangulation is reached along exactly one path.
pub fn enumerate_triangulations(n: usize, d: usize) -> Result<Vec<SubgraphCollection>> {
    let trees = spanning_trees(n, d)?;
    let index: HashMap<&[DirSet], usize> = trees
        .iter()
        .enumerate()
        .map(|(k, t)| (t.rows.as_slice(), k))
        .collect();
    let cell_target = binomial(n + d - 2, n - 1) as usize;
    let search = TriangulationSearch {
        trees: &trees,
        index,
        cell_target,
    };
    let (rows, cols) = generic_margins(&trees, n, d);
    let roots: Vec<usize> = (0..trees.len())
        .filter(|&k| tree_flow(&trees[k], &rows, &cols).iter().all(|&f| f > 0))
        .collect();
    let found: Vec<Vec<usize>> = roots
        .par_iter()
        .flat_map_iter(|&root| {
            let mut out = Vec::new();
            search.run(root, &mut out);
            out
        })
        .collect();
    let mut result: Vec<SubgraphCollection> = found
        .into_iter()
        .map(|cells| SubgraphCollection {
            n,
            d,
            cells: cells.into_iter().map(|k| trees[k].clone()).collect(),
        })
        .collect();
    result.sort();
    result.dedup();
    Ok(result)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeFailure {
    /// 1-based position in the enumeration order.
    pub index: usize,
    pub triangulation: Vec<BipartiteSubgraph>,
    pub violations: usize,
    pub boundary_ok: bool,
    pub elimination_ok: bool,
    pub comparability_ok: bool,
    pub surrounding_ok: bool,
}

/// Outcome of testing the triangulation → tropical oriented matroid map at one `(n, d)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub n: usize,
    pub d: usize,
    pub triangulations: usize,
    pub toms_passing: usize,
    pub failures: Vec<ProbeFailure>,
    pub injective: bool,
    pub ok: bool,
}

/// Runs every triangulation through `triangulation_types` and the axiom checker.
pub fn conjecture_probe(n: usize, d: usize) -> Result<ProbeReport> {
    let triangulations = enumerate_triangulations(n, d)?;
    let results: Vec<(TomTypeSet, crate::axioms::AxiomReport)> = triangulations
        .par_iter()
        .map(|t| {
            let tom = triangulation_types(t)?;
            let report = check_axioms(&tom)?;
            Ok((tom, report))
        })
        .collect::<Result<_>>()?;
    let mut failures = Vec::new();
    for (k, (t, (_, r))) in triangulations.iter().zip(&results).enumerate() {
        if !r.ok {
            failures.push(ProbeFailure {
                index: k + 1,
                triangulation: t.cells.iter().cloned().collect(),
                violations: r.violation_count(),
                boundary_ok: r.boundary.ok,
                elimination_ok: r.elimination.ok,
                comparability_ok: r.comparability.ok,
                surrounding_ok: r.surrounding.ok,
            });
        }
    }
    let distinct: BTreeSet<&TomTypeSet> = results.iter().map(|(tom, _)| tom).collect();
    let injective = distinct.len() == results.len();
    let toms_passing = results.len() - failures.len();
    let ok = failures.is_empty() && injective;
    Ok(ProbeReport {
        n,
        d,
        triangulations: triangulations.len(),
        toms_passing,
        failures,
        injective,
        ok,
    })
}
