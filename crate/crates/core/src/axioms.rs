//! Refinement, comparability and the four tropical oriented matroid axioms.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::types::{DirSet, OrderedPartition, Semidigraph, TomTypeSet, Type};

/// Largest `d` for which the surrounding axiom is checked by exhaustive enumeration.
pub const MAX_SURROUNDING_D: usize = 6;

/// `(A_1 ∩ P_{m(1)}, …, A_n ∩ P_{m(n)})` where `m(i)` is the last part meeting `A_i`.
///
/// # Panics
///
/// If the partition's ground set differs from `a.d()`.
pub fn refine(a: &Type, p: &OrderedPartition) -> Type {
    assert_eq!(a.d(), p.d(), "partition ground set does not match the type");
    let coords = a
        .coords()
        .iter()
        .map(|&c| {
            p.parts()
                .iter()
                .rev()
                .map(|&part| c & part)
                .find(|x| !x.is_empty())
                .expect("an ordered partition covers every element")
        })
        .collect();
    Type::new_unchecked(a.d(), coords)
}

/// Every ordered set partition of `{1,…,d}` (ordered Bell number many).
pub fn ordered_partitions(d: usize) -> Vec<OrderedPartition> {
    fn go(rest: DirSet, prefix: &mut Vec<DirSet>, d: usize, out: &mut Vec<OrderedPartition>) {
        if rest.is_empty() {
            out.push(OrderedPartition::new_unchecked(d, prefix.clone()));
            return;
        }
        for block in rest.subsets().filter(|b| !b.is_empty()) {
            prefix.push(block);
            go(rest - block, prefix, d, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(DirSet::full(d), &mut Vec::new(), d, &mut out);
    out
}

/// Finds an ordered partition `P` with `refine(a, P) = b`, if one exists.
///
/// Elements of each `b_i` are tied, and each is strictly above the rest of `a_i`.
/// The tie classes are ordered by Kahn's algorithm, always taking the available
/// class with the smallest element. Elements absent from `a` join the lowest part.
pub(crate) fn refinement_witness(b: &Type, a: &Type) -> Option<OrderedPartition> {
    if a.n() != b.n() || a.d() != b.d() || !b.is_contained_in(a) {
        return None;
    }
    let d = a.d();
    let mut uf = UnionFind::new(d + 1);
    for &c in b.coords() {
        let first = c.first()?;
        for j in c.iter() {
            uf.union(first, j);
        }
    }
    let support = a.support();
    let mut below: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (&bc, &ac) in b.coords().iter().zip(a.coords()) {
        let hi = uf.find(bc.first()?);
        for k in (ac - bc).iter() {
            let lo = uf.find(k);
            if lo == hi {
                return None;
            }
            below.insert((lo, hi));
        }
    }

    let mut classes: HashMap<usize, DirSet> = HashMap::new();
    for j in support.iter() {
        let r = uf.find(j);
        let e = classes.entry(r).or_default();
        *e = e.with(j);
    }
    let mut indegree: HashMap<usize, usize> = classes.keys().map(|&r| (r, 0)).collect();
    let mut succ: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(lo, hi) in &below {
        *indegree.get_mut(&hi).expect("class exists") += 1;
        succ.entry(lo).or_default().push(hi);
    }
    let mut ready: BTreeSet<(usize, usize)> = indegree
        .iter()
        .filter(|(_, &deg)| deg == 0)
        .map(|(&r, _)| (classes[&r].first().unwrap_or(0), r))
        .collect();
    let mut parts = Vec::with_capacity(classes.len());
    while let Some(&(key, r)) = ready.iter().next() {
        ready.remove(&(key, r));
        parts.push(classes[&r]);
        for &s in succ.get(&r).map(Vec::as_slice).unwrap_or(&[]) {
            let deg = indegree.get_mut(&s).expect("class exists");
            *deg -= 1;
            if *deg == 0 {
                ready.insert((classes[&s].first().unwrap_or(0), s));
            }
        }
    }
    if parts.len() != classes.len() {
        return None;
    }
    let free = DirSet::full(d) - support;
    if !free.is_empty() {
        parts[0] = parts[0] | free;
    }
    Some(OrderedPartition::new_unchecked(d, parts))
}

/// All refinements of `a` whose coordinates are singletons.
pub fn total_refinements(a: &Type) -> BTreeSet<Type> {
    let mut out = BTreeSet::new();
    for_each_choice(a, |choice| {
        let t = Type::new_unchecked(a.d(), choice.to_vec());
        if refinement_witness(&t, a).is_some() {
            out.insert(t);
        }
        true
    });
    out
}

/// Calls `f` on each tope `t` with `t_i ∈ a_i`; stops early when `f` returns false.
pub(crate) fn for_each_choice(a: &Type, mut f: impl FnMut(&[DirSet]) -> bool) {
    let options: Vec<Vec<DirSet>> = a
        .coords()
        .iter()
        .map(|c| c.iter().map(DirSet::singleton).collect())
        .collect();
    let mut idx = vec![0usize; options.len()];
    let mut choice: Vec<DirSet> = options.iter().map(|o| o[0]).collect();
    loop {
        if !f(&choice) {
            return;
        }
        let mut i = 0;
        loop {
            if i == idx.len() {
                return;
            }
            idx[i] += 1;
            if idx[i] < options[i].len() {
                choice[i] = options[i][idx[i]];
                break;
            }
            idx[i] = 0;
            choice[i] = options[i][0];
            i += 1;
        }
    }
}

/// The comparability semidigraph `CG_{A,B}` on `{1,…,d}`.
pub fn comparability_graph(a: &Type, b: &Type) -> Semidigraph {
    let mut g = Semidigraph::new(a.d());
    for (&ac, &bc) in a.coords().iter().zip(b.coords()) {
        let shared = ac & bc;
        for j in ac.iter() {
            for k in bc.iter() {
                if j == k {
                    continue;
                }
                if shared.contains(j) && shared.contains(k) {
                    g.add_undirected(j, k);
                } else {
                    g.add_directed(j, k);
                }
            }
        }
    }
    g
}

/// One traversed edge of a witness cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CycleStep {
    pub from: usize,
    pub to: usize,
    pub directed: bool,
}

/// A closed walk using at least one directed edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct DirectedCycle {
    pub steps: Vec<CycleStep>,
}

impl DirectedCycle {
    /// Vertices visited, starting and ending at the same vertex.
    pub fn vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.steps.iter().map(|s| s.from).collect();
        if let Some(last) = self.steps.last() {
            v.push(last.to);
        }
        v
    }
}

impl fmt::Display for DirectedCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(first) = self.steps.first() {
            write!(f, "{}", first.from)?;
        }
        for s in &self.steps {
            write!(f, "{}{}", if s.directed { "→" } else { "∼" }, s.to)?;
        }
        Ok(())
    }
}

/// Returns a directed cycle of `g` if one exists.
///
/// Undirected edges become two opposed arcs. A cycle exists exactly when some
/// directed arc has both ends in one strongly connected component.
pub fn has_directed_cycle(g: &Semidigraph) -> Option<DirectedCycle> {
    if g.directed.is_empty() {
        return None;
    }
    let d = g.vertex_count;
    let mut graph: DiGraph<(), bool> =
        DiGraph::with_capacity(d, 2 * g.undirected.len() + g.directed.len());
    let nodes: Vec<NodeIndex> = (0..d).map(|_| graph.add_node(())).collect();
    let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); d + 1];
    for &(j, k) in &g.directed {
        graph.add_edge(nodes[j - 1], nodes[k - 1], true);
        adj[j].push((k, true));
    }
    for &(j, k) in &g.undirected {
        graph.add_edge(nodes[j - 1], nodes[k - 1], false);
        graph.add_edge(nodes[k - 1], nodes[j - 1], false);
        adj[j].push((k, false));
        adj[k].push((j, false));
    }
    for a in &mut adj {
        // prefer directed arcs, then smaller targets, for deterministic witnesses
        a.sort_by_key(|&(k, directed)| (!directed, k));
    }
    let mut comp = vec![usize::MAX; d + 1];
    for (c, scc) in tarjan_scc(&graph).into_iter().enumerate() {
        for v in scc {
            comp[v.index() + 1] = c;
        }
    }
    let &(u, v) = g.directed.iter().find(|&&(u, v)| comp[u] == comp[v])?;

    // shortest path v ⇝ u
    let mut prev: Vec<Option<(usize, bool)>> = vec![None; d + 1];
    let mut seen = vec![false; d + 1];
    let mut queue = VecDeque::from([v]);
    seen[v] = true;
    while let Some(x) = queue.pop_front() {
        if x == u {
            break;
        }
        for &(y, directed) in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                prev[y] = Some((x, directed));
                queue.push_back(y);
            }
        }
    }
    let mut back = Vec::new();
    let mut cur = u;
    while cur != v {
        let (p, directed) = prev[cur].expect("u is reachable from v inside its component");
        back.push(CycleStep {
            from: p,
            to: cur,
            directed,
        });
        cur = p;
    }
    back.reverse();
    let mut steps = vec![CycleStep {
        from: u,
        to: v,
        directed: true,
    }];
    steps.extend(back);
    Some(DirectedCycle { steps })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryReport {
    pub ok: bool,
    /// Directions `j` whose constant type is absent.
    pub missing: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EliminationViolation {
    pub a: Type,
    pub b: Type,
    pub position: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EliminationReport {
    pub ok: bool,
    pub violations: Vec<EliminationViolation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparabilityViolation {
    pub a: Type,
    pub b: Type,
    pub cycle: DirectedCycle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparabilityReport {
    pub ok: bool,
    pub violations: Vec<ComparabilityViolation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurroundingViolation {
    #[serde(rename = "type")]
    pub ty: Type,
    pub partition: OrderedPartition,
    pub refinement: Type,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurroundingReport {
    pub ok: bool,
    pub violations: Vec<SurroundingViolation>,
}

/// Outcome of checking the boundary, elimination, comparability and surrounding axioms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub n: usize,
    pub d: usize,
    pub ok: bool,
    pub boundary: BoundaryReport,
    pub elimination: EliminationReport,
    pub comparability: ComparabilityReport,
    pub surrounding: SurroundingReport,
}

impl AxiomReport {
    pub fn is_ok(&self) -> bool {
        self.ok
    }

    pub fn violation_count(&self) -> usize {
        self.boundary.missing.len()
            + self.elimination.violations.len()
            + self.comparability.violations.len()
            + self.surrounding.violations.len()
    }
}

/// `c` eliminates `a` and `b` at `position` (1-based).
pub fn eliminates(c: &Type, a: &Type, b: &Type, position: usize) -> bool {
    c.coords()
        .iter()
        .zip(a.coords().iter().zip(b.coords()))
        .enumerate()
        .all(|(k, (&ck, (&ak, &bk)))| {
            if k + 1 == position {
                ck == ak | bk
            } else {
                ck == ak || ck == bk || ck == ak | bk
            }
        })
}

/// Every `C ∈ m` witnessing elimination of `a` and `b` at `position` (1-based), in canonical order.
pub fn elimination_witnesses(m: &TomTypeSet, a: &Type, b: &Type, position: usize) -> Vec<Type> {
    m.iter()
        .filter(|c| eliminates(c, a, b, position))
        .cloned()
        .collect()
}

/// Checks all four axioms and reports every violation found.
///
/// The elimination condition is symmetric in `A` and `B`, so each unordered pair
/// is examined once; positions where one coordinate contains the other are
/// witnessed by `A` or `B` themselves.
pub fn check_axioms(m: &TomTypeSet) -> Result<AxiomReport> {
    let (n, d) = (m.n(), m.d());
    if d > MAX_SURROUNDING_D {
        return Err(Error::ParameterOutOfRange {
            name: "d",
            value: d,
            max: MAX_SURROUNDING_D,
        });
    }
    let types = m.to_vec();

    let missing: Vec<usize> = (1..=d)
        .filter(|&j| !m.contains(&Type::constant(n, d, j)))
        .collect();

    let mut index: HashMap<(usize, DirSet), Vec<usize>> = HashMap::new();
    for (t_idx, t) in types.iter().enumerate() {
        for (pos, &c) in t.coords().iter().enumerate() {
            index.entry((pos, c)).or_default().push(t_idx);
        }
    }

    let pair_results: Vec<(Vec<EliminationViolation>, Vec<ComparabilityViolation>)> = (0..types
        .len())
        .into_par_iter()
        .map(|i| {
            let a = &types[i];
            let mut elim = Vec::new();
            let mut comp = Vec::new();
            for b in &types[i..] {
                for pos in 0..n {
                    let (ac, bc) = (a.coords()[pos], b.coords()[pos]);
                    if ac.is_subset(bc) || bc.is_subset(ac) {
                        continue;
                    }
                    let found = index.get(&(pos, ac | bc)).is_some_and(|cands| {
                        cands.iter().any(|&c| eliminates(&types[c], a, b, pos + 1))
                    });
                    if !found {
                        elim.push(EliminationViolation {
                            a: a.clone(),
                            b: b.clone(),
                            position: pos + 1,
                        });
                    }
                }
                if let Some(cycle) = has_directed_cycle(&comparability_graph(a, b)) {
                    comp.push(ComparabilityViolation {
                        a: a.clone(),
                        b: b.clone(),
                        cycle,
                    });
                }
            }
            (elim, comp)
        })
        .collect();
    let mut elimination = Vec::new();
    let mut comparability = Vec::new();
    for (e, c) in pair_results {
        elimination.extend(e);
        comparability.extend(c);
    }

    let partitions = ordered_partitions(d);
    let surrounding: Vec<SurroundingViolation> = types
        .par_iter()
        .flat_map_iter(|t| {
            let mut reported: BTreeSet<Type> = BTreeSet::new();
            let mut out = Vec::new();
            for p in &partitions {
                let r = refine(t, p);
                if !m.contains(&r) && reported.insert(r.clone()) {
                    out.push(SurroundingViolation {
                        ty: t.clone(),
                        partition: p.clone(),
                        refinement: r,
                    });
                }
            }
            out
        })
        .collect();

    let boundary = BoundaryReport {
        ok: missing.is_empty(),
        missing,
    };
    let elimination = EliminationReport {
        ok: elimination.is_empty(),
        violations: elimination,
    };
    let comparability = ComparabilityReport {
        ok: comparability.is_empty(),
        violations: comparability,
    };
    let surrounding = SurroundingReport {
        ok: surrounding.is_empty(),
        violations: surrounding,
    };
    let ok = boundary.ok && elimination.ok && comparability.ok && surrounding.ok;
    Ok(AxiomReport {
        n,
        d,
        ok,
        boundary,
        elimination,
        comparability,
        surrounding,
    })
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(size: usize) -> Self {
        UnionFind {
            parent: (0..size).collect(),
        }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Returns false if `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}
