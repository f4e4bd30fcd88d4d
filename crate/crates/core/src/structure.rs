//! Dimension, topes and vertices, refinement testing, the two reconstruction
//! theorems, deletion and contraction.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::axioms::{
    comparability_graph, for_each_choice, has_directed_cycle, refine, refinement_witness, UnionFind,
};
use crate::error::{Error, Result};
use crate::types::{DirSet, OrderedPartition, TomTypeSet, Type};

/// Largest candidate count `reconstruct_from_topes` will scan.
pub const MAX_RECONSTRUCTION_CANDIDATES: u128 = 10_000_000;

/// The graph `G_A` on `{1,…,d}`: `j ~ k` whenever some coordinate holds both.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeGraph {
    pub vertex_count: usize,
    pub edges: BTreeSet<(usize, usize)>,
}

impl TypeGraph {
    pub fn of(a: &Type) -> Self {
        let mut edges = BTreeSet::new();
        for c in a.coords() {
            let elems = c.to_vec();
            for (x, &j) in elems.iter().enumerate() {
                for &k in &elems[x + 1..] {
                    edges.insert((j, k));
                }
            }
        }
        TypeGraph {
            vertex_count: a.d(),
            edges,
        }
    }

    /// Connected components, each as a set, ordered by smallest element.
    pub fn components(&self) -> Vec<DirSet> {
        let mut uf = UnionFind::new(self.vertex_count + 1);
        for &(j, k) in &self.edges {
            uf.union(j, k);
        }
        let mut comps: Vec<DirSet> = Vec::new();
        let mut root_of = vec![usize::MAX; self.vertex_count + 1];
        for j in 1..=self.vertex_count {
            let r = uf.find(j);
            if root_of[r] == usize::MAX {
                root_of[r] = comps.len();
                comps.push(DirSet::EMPTY);
            }
            comps[root_of[r]] = comps[root_of[r]].with(j);
        }
        comps
    }
}

fn component_count(a: &Type) -> usize {
    let mut uf = UnionFind::new(a.d() + 1);
    let mut count = a.d();
    for c in a.coords() {
        if let Some(first) = c.first() {
            for j in c.iter().skip(1) {
                if uf.union(first, j) {
                    count -= 1;
                }
            }
        }
    }
    count
}

/// Number of connected components of `G_A`, minus one.
pub fn dimension(a: &Type) -> usize {
    component_count(a) - 1
}

pub fn is_vertex(a: &Type) -> bool {
    component_count(a) == 1
}

/// Members whose coordinates are all singletons.
pub fn topes(m: &TomTypeSet) -> TomTypeSet {
    TomTypeSet::from_set_unchecked(
        m.n(),
        m.d(),
        m.iter().filter(|t| t.is_tope()).cloned().collect(),
    )
}

/// Members whose graph `G_A` is connected.
pub fn vertices(m: &TomTypeSet) -> TomTypeSet {
    TomTypeSet::from_set_unchecked(
        m.n(),
        m.d(),
        m.iter().filter(|t| is_vertex(t)).cloned().collect(),
    )
}

/// Decides whether `b` is a refinement of `a`, returning a witness partition.
pub fn is_refinement_of(b: &Type, a: &Type) -> Option<OrderedPartition> {
    refinement_witness(b, a)
}

/// Closure of `seeds` under refinement by every ordered partition.
///
/// Any refinement is a composite of refinements by two-block partitions, so the
/// fixpoint is computed with those alone.
pub fn refinement_closure(seeds: &TomTypeSet) -> TomTypeSet {
    let d = seeds.d();
    let full = DirSet::full(d);
    let splits: Vec<OrderedPartition> = full
        .subsets()
        .filter(|s| !s.is_empty() && *s != full)
        .map(|s| OrderedPartition::new_unchecked(d, vec![full - s, s]))
        .collect();
    let mut closed: BTreeSet<Type> = seeds.types().clone();
    let mut work: Vec<Type> = closed.iter().cloned().collect();
    while let Some(t) = work.pop() {
        for p in &splits {
            let r = refine(&t, p);
            if !closed.contains(&r) {
                closed.insert(r.clone());
                work.push(r);
            }
        }
    }
    TomTypeSet::from_set_unchecked(seeds.n(), d, closed)
}

/// Rebuilds a tropical oriented matroid from its topes.
///
/// A candidate type is kept when all of its total refinements are among the
/// topes and its comparability graph with every tope is acyclic.
pub fn reconstruct_from_topes(topes: &TomTypeSet) -> Result<TomTypeSet> {
    let (n, d) = (topes.n(), topes.d());
    if let Some(bad) = topes.iter().find(|t| !t.is_tope()) {
        return Err(Error::Invalid(format!("{bad} is not a tope")));
    }
    let radix = (1u128 << d) - 1;
    let size = radix.checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > MAX_RECONSTRUCTION_CANDIDATES {
        return Err(Error::SearchSpaceTooLarge {
            size,
            limit: MAX_RECONSTRUCTION_CANDIDATES,
        });
    }
    let tope_list = topes.to_vec();
    let found: Vec<Type> = (0..size as u64)
        .into_par_iter()
        .filter_map(|code| {
            let mut rest = code;
            let coords = (0..n)
                .map(|_| {
                    let c = DirSet::from_bits(rest % radix as u64 + 1);
                    rest /= radix as u64;
                    c
                })
                .collect();
            let cand = Type::new_unchecked(d, coords);
            let mut refinements_ok = true;
            for_each_choice(&cand, |choice| {
                let t = Type::new_unchecked(d, choice.to_vec());
                if !topes.contains(&t) && refinement_witness(&t, &cand).is_some() {
                    refinements_ok = false;
                }
                refinements_ok
            });
            if !refinements_ok {
                return None;
            }
            tope_list
                .iter()
                .all(|t| has_directed_cycle(&comparability_graph(&cand, t)).is_none())
                .then_some(cand)
        })
        .collect();
    Ok(TomTypeSet::from_set_unchecked(
        n,
        d,
        found.into_iter().collect(),
    ))
}

/// The `(n-1, d)` type set obtained by dropping coordinate `i` (1-based).
pub fn delete(m: &TomTypeSet, i: usize) -> Result<TomTypeSet> {
    let (n, d) = (m.n(), m.d());
    if n < 2 {
        return Err(Error::Invalid(
            "deletion needs at least two coordinates".into(),
        ));
    }
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, max: n });
    }
    let types = m
        .iter()
        .map(|t| {
            let mut coords = t.coords().to_vec();
            coords.remove(i - 1);
            Type::new_unchecked(d, coords)
        })
        .collect();
    Ok(TomTypeSet::from_set_unchecked(n - 1, d, types))
}

/// Result of contracting a direction: the `(n, d-1)` type set and the relabeling used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    pub tom: TomTypeSet,
    /// `original[k-1]` is the old label of new direction `k`.
    pub original: Vec<usize>,
}

fn drop_direction(set: DirSet, j: usize) -> DirSet {
    let bits = set.bits();
    let low = bits & ((1u64 << (j - 1)) - 1);
    let high = if j >= 64 { 0 } else { (bits >> j) << (j - 1) };
    DirSet::from_bits(low | high)
}

/// Members avoiding direction `j` everywhere, relabeled order-preservingly onto `{1,…,d-1}`.
pub fn contract(m: &TomTypeSet, j: usize) -> Result<Contraction> {
    let (n, d) = (m.n(), m.d());
    if d < 2 {
        return Err(Error::Invalid(
            "contraction needs at least two directions".into(),
        ));
    }
    if j == 0 || j > d {
        return Err(Error::IndexOutOfRange { index: j, max: d });
    }
    let types = m
        .iter()
        .filter(|t| !t.support().contains(j))
        .map(|t| {
            Type::new_unchecked(
                d - 1,
                t.coords().iter().map(|&c| drop_direction(c, j)).collect(),
            )
        })
        .collect();
    let original = (1..=d).filter(|&k| k != j).collect();
    Ok(Contraction {
        tom: TomTypeSet::from_set_unchecked(n, d - 1, types),
        original,
    })
}
