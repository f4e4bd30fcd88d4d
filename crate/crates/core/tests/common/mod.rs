//! Fixtures and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tropical_om::arrangement::{arrangement_tom, random_generic_arrangement, Arrangement};
use tropical_om::subdivision::{BipartiteSubgraph, SubgraphCollection};
use tropical_om::TomTypeSet;

pub const SHAPES: [(usize, usize); 5] = [(2, 3), (3, 3), (2, 4), (3, 4), (4, 3)];
pub const PER_SHAPE: usize = 10;
pub const APEX_BOUND: i64 = 1000;

pub struct Fixture {
    pub seed: u64,
    pub arrangement: Arrangement,
    pub tom: TomTypeSet,
}

/// Fifty seeded generic arrangements, ten per shape.
pub fn seeded_arrangements() -> Vec<Fixture> {
    let mut out = Vec::new();
    for (s, &(n, d)) in SHAPES.iter().enumerate() {
        for k in 0..PER_SHAPE {
            let seed = 1000 * s as u64 + k as u64;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let arrangement = random_generic_arrangement(&mut rng, n, d, APEX_BOUND).unwrap();
            let realized = arrangement_tom(&arrangement).unwrap();
            assert!(realized.generic);
            out.push(Fixture {
                seed,
                arrangement,
                tom: realized.tom,
            });
        }
    }
    out
}

/// All spanning trees of `K_{n,d}` by brute force over edge subsets.
pub fn brute_spanning_trees(n: usize, d: usize) -> Vec<Vec<(usize, usize)>> {
    let edges: Vec<(usize, usize)> = (1..=n).flat_map(|i| (1..=d).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << edges.len()) {
        if mask.count_ones() as usize != n + d - 1 {
            continue;
        }
        let chosen: Vec<(usize, usize)> = edges
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        // connected with n+d-1 edges means a tree; check by flood fill
        let mut seen = vec![false; n + d];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(i, j) in &chosen {
                let (a, b) = (i - 1, n + j - 1);
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        if seen.iter().all(|&s| s) {
            out.push(chosen);
        }
    }
    out
}

/// Explicit enumeration of simple cycles that leave left vertices along `a` and
/// right vertices along `b`.
pub fn has_alternating_cycle(
    n: usize,
    d: usize,
    a: &[(usize, usize)],
    b: &[(usize, usize)],
) -> bool {
    let a: BTreeSet<(usize, usize)> = a.iter().copied().collect();
    let b: BTreeSet<(usize, usize)> = b.iter().copied().collect();
    // vertices: Left(i) = (false, i), Right(j) = (true, j)
    fn walk(
        start: usize,
        at: (bool, usize),
        visited: &mut Vec<(bool, usize)>,
        n: usize,
        d: usize,
        a: &BTreeSet<(usize, usize)>,
        b: &BTreeSet<(usize, usize)>,
    ) -> bool {
        let (is_right, v) = at;
        if !is_right {
            for j in 1..=d {
                if a.contains(&(v, j)) && !visited.contains(&(true, j)) {
                    visited.push((true, j));
                    if walk(start, (true, j), visited, n, d, a, b) {
                        return true;
                    }
                    visited.pop();
                }
            }
        } else {
            for i in 1..=n {
                if !b.contains(&(i, v)) {
                    continue;
                }
                if i == start && visited.len() >= 4 {
                    return true;
                }
                if i > start && !visited.contains(&(false, i)) {
                    visited.push((false, i));
                    if walk(start, (false, i), visited, n, d, a, b) {
                        return true;
                    }
                    visited.pop();
                }
            }
        }
        false
    }
    (1..=n).any(|s| walk(s, (false, s), &mut vec![(false, s)], n, d, &a, &b))
}

/// Triangulations as sets of pairwise compatible spanning trees whose number
/// equals the normalized volume `C(n+d-2, n-1)`.
pub fn brute_triangulations(n: usize, d: usize) -> BTreeSet<BTreeSet<Vec<(usize, usize)>>> {
    let trees = brute_spanning_trees(n, d);
    let volume = {
        let (a, b) = (n + d - 2, n - 1);
        (0..b).fold(1usize, |acc, k| acc * (a - k) / (k + 1))
    };
    let m = trees.len();
    let compatible: Vec<Vec<bool>> = (0..m)
        .map(|x| {
            (0..m)
                .map(|y| x != y && !has_alternating_cycle(n, d, &trees[x], &trees[y]))
                .collect()
        })
        .collect();
    let mut out = BTreeSet::new();
    fn grow(
        chosen: &mut Vec<usize>,
        from: usize,
        volume: usize,
        compatible: &[Vec<bool>],
        trees: &[Vec<(usize, usize)>],
        out: &mut BTreeSet<BTreeSet<Vec<(usize, usize)>>>,
    ) {
        if chosen.len() == volume {
            out.insert(chosen.iter().map(|&k| trees[k].clone()).collect());
            return;
        }
        for y in from..trees.len() {
            if chosen.iter().all(|&x| compatible[x][y]) {
                chosen.push(y);
                grow(chosen, y + 1, volume, compatible, trees, out);
                chosen.pop();
            }
        }
    }
    grow(&mut Vec::new(), 0, volume, &compatible, &trees, &mut out);
    out
}

pub fn collection_edges(c: &SubgraphCollection) -> BTreeSet<Vec<(usize, usize)>> {
    c.cells().iter().map(|g| g.edges().collect()).collect()
}

/// The prism `Δ₁×Δ₂` has three square faces `{j,k}`; a triangulation picks one
/// diagonal per square, and the six acyclic choices are exactly its triangulations.
/// Returns, for each square, whether the diagonal `(1,j)-(2,k)` with `j < k` is used.
pub fn prism_diagonals(c: &SubgraphCollection) -> [bool; 3] {
    let squares = [(1, 2), (1, 3), (2, 3)];
    squares.map(|(j, k)| {
        let uses = |p: (usize, usize), q: (usize, usize)| {
            c.cells()
                .iter()
                .any(|g: &BipartiteSubgraph| g.contains_edge(p.0, p.1) && g.contains_edge(q.0, q.1))
        };
        let forward = uses((1, j), (2, k));
        let backward = uses((1, k), (2, j));
        assert!(forward != backward, "exactly one diagonal per square");
        forward
    })
}

/// Orient square `{j,k}` as `j → k` when the diagonal `(1,j)-(2,k)` is used; the
/// cyclic orientations are the two choices that cannot be triangulated.
pub fn prism_diagonal_choices() -> Vec<[bool; 3]> {
    let mut out = Vec::new();
    for bits in 0u8..8 {
        let c = [bits & 1 == 1, bits & 2 == 2, bits & 4 == 4];
        // arcs: 1-2, 1-3, 2-3; cycle 1→2→3→1 is (true, false, true), reverse is (false, true, false)
        if c != [true, false, true] && c != [false, true, false] {
            out.push(c);
        }
    }
    out
}
