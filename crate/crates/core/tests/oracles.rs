mod common;

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tropical_om::arrangement::{arrangement_tom, random_generic_arrangement, Arrangement};
use tropical_om::subdivision::{
    alternating_cycle, enumerate_triangulations, spanning_trees, tom_to_subdivision,
    BipartiteSubgraph,
};

/// Cells of the regular triangulation induced by lifting vertex `(i, j)` to height `h_ij`:
/// a spanning tree is a cell iff the potentials with `a_i + b_j = h_ij` on its edges
/// stay strictly below `h_ij` off them.
fn regular_cells(arr: &Arrangement) -> BTreeSet<Vec<(usize, usize)>> {
    let (n, d) = (arr.n(), arr.d());
    let h = |i: usize, j: usize| arr.apexes()[i - 1][j - 1].clone();
    let mut out = BTreeSet::new();
    for tree in common::brute_spanning_trees(n, d) {
        let mut a: Vec<Option<BigRational>> = vec![None; n + 1];
        let mut b: Vec<Option<BigRational>> = vec![None; d + 1];
        b[1] = Some(BigRational::zero());
        let mut changed = true;
        while changed {
            changed = false;
            for &(i, j) in &tree {
                match (&a[i], &b[j]) {
                    (None, Some(bj)) => {
                        a[i] = Some(h(i, j) - bj);
                        changed = true;
                    }
                    (Some(ai), None) => {
                        b[j] = Some(h(i, j) - ai);
                        changed = true;
                    }
                    _ => {}
                }
            }
        }
        let below = (1..=n).all(|i| {
            (1..=d).all(|j| {
                tree.contains(&(i, j)) || a[i].clone().unwrap() + b[j].clone().unwrap() < h(i, j)
            })
        });
        if below {
            out.insert(tree);
        }
    }
    out
}

#[test]
fn arrangement_vertices_match_the_lifted_triangulation() {
    for (n, d) in [(2, 3), (3, 3), (2, 4), (3, 4), (4, 3)] {
        for seed in 0..6 {
            let mut rng = ChaCha8Rng::seed_from_u64(500 + seed);
            let arr = random_generic_arrangement(&mut rng, n, d, 1000).unwrap();
            let tom = arrangement_tom(&arr).unwrap().tom;
            let ours = common::collection_edges(&tom_to_subdivision(&tom));
            assert_eq!(ours, regular_cells(&arr), "({n},{d}) seed {seed}");
        }
    }
}

#[test]
fn prism_triangulations_match_diagonal_orientations() {
    let found = enumerate_triangulations(2, 3).unwrap();
    assert_eq!(found.len(), 6);
    let choices: BTreeSet<[bool; 3]> = found.iter().map(common::prism_diagonals).collect();
    let expected: BTreeSet<[bool; 3]> = common::prism_diagonal_choices().into_iter().collect();
    assert_eq!(choices, expected);
}

#[test]
fn triangulations_match_compatible_tree_families() {
    for (n, d, count) in [(2, 2, 2), (2, 3, 6), (2, 4, 24), (3, 3, 108)] {
        let ours: BTreeSet<_> = enumerate_triangulations(n, d)
            .unwrap()
            .iter()
            .map(common::collection_edges)
            .collect();
        let oracle = common::brute_triangulations(n, d);
        assert_eq!(ours.len(), count, "({n},{d})");
        assert_eq!(ours, oracle, "({n},{d})");
    }
}

#[test]
fn spanning_trees_match_brute_force() {
    for (n, d) in [(1, 4), (2, 3), (3, 3), (2, 5)] {
        let ours: BTreeSet<Vec<(usize, usize)>> = spanning_trees(n, d)
            .unwrap()
            .iter()
            .map(|t| t.edges().collect())
            .collect();
        let brute: BTreeSet<_> = common::brute_spanning_trees(n, d).into_iter().collect();
        assert_eq!(ours, brute);
    }
}

#[test]
fn alternating_cycles_match_explicit_cycle_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for (n, d) in [(2, 2), (2, 3), (3, 3), (3, 4), (4, 4)] {
        for _ in 0..300 {
            let random_edges = |rng: &mut ChaCha8Rng| {
                (1..=n)
                    .flat_map(|i| (1..=d).map(move |j| (i, j)))
                    .filter(|_| rng.random_bool(0.45))
                    .collect::<Vec<_>>()
            };
            let x = random_edges(&mut rng);
            let y = random_edges(&mut rng);
            let gx = BipartiteSubgraph::from_edges(n, d, &x).unwrap();
            let gy = BipartiteSubgraph::from_edges(n, d, &y).unwrap();
            let ours = alternating_cycle(&gx, &gy);
            let brute = shared_aware_cycle(n, d, &x, &y);
            assert_eq!(ours.is_some(), brute, "{gx} vs {gy}");
            if let Some(cycle) = ours {
                assert!(cycle.len() >= 4 && cycle.len() % 2 == 0);
                assert!(cycle.iter().any(|e| !(x.contains(e) && y.contains(e))));
            }
        }
    }
}

/// Some edge outside `x ∩ y` lies on an explicitly found alternating cycle.
fn shared_aware_cycle(n: usize, d: usize, x: &[(usize, usize)], y: &[(usize, usize)]) -> bool {
    x.iter()
        .chain(y)
        .filter(|e| !(x.contains(e) && y.contains(e)))
        .any(|&e| cycle_through(n, d, x, y, e))
}

/// Explicit search for an alternating cycle containing edge `e`.
fn cycle_through(
    n: usize,
    d: usize,
    x: &[(usize, usize)],
    y: &[(usize, usize)],
    e: (usize, usize),
) -> bool {
    // Walk left→right along x and right→left along y, starting with e in whichever role it can take.
    let roles = [(x.contains(&e), true), (y.contains(&e), false)];
    for (present, as_x) in roles {
        if !present {
            continue;
        }
        let (start, first) = if as_x {
            ((false, e.0), (true, e.1))
        } else {
            ((true, e.1), (false, e.0))
        };
        let mut visited = vec![start, first];
        if walk(start, first, &mut visited, n, d, x, y) {
            return true;
        }
    }
    false
}

fn walk(
    start: (bool, usize),
    at: (bool, usize),
    visited: &mut Vec<(bool, usize)>,
    n: usize,
    d: usize,
    x: &[(usize, usize)],
    y: &[(usize, usize)],
) -> bool {
    let next: Vec<(bool, usize)> = if at.0 {
        (1..=n)
            .filter(|&i| y.contains(&(i, at.1)))
            .map(|i| (false, i))
            .collect()
    } else {
        (1..=d)
            .filter(|&j| x.contains(&(at.1, j)))
            .map(|j| (true, j))
            .collect()
    };
    for v in next {
        if v == start && visited.len() >= 4 {
            return true;
        }
        if !visited.contains(&v) {
            visited.push(v);
            if walk(start, v, visited, n, d, x, y) {
                return true;
            }
            visited.pop();
        }
    }
    false
}
