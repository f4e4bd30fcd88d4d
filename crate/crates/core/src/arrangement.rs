//! Tropical hyperplane arrangements with exact rational apexes.
//!
//! Points of tropical projective space are stored with their last coordinate
//! fixed to zero. The type of a point `x` has `i`-th coordinate
//! `argmax_j (x_j − v_ij)` for the apex `v_i` of hyperplane `i`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::structure::{is_vertex, refinement_closure};
use crate::types::{check_param, DirSet, TomTypeSet, Type};

pub type Rational = BigRational;

/// Largest `d` accepted by vertex enumeration.
pub const MAX_ENUMERATION_D: usize = 5;

/// Parses `"p/q"` or an integer string.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidRational(s.to_string());
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn normalize(mut coords: Vec<Rational>) -> Vec<Rational> {
    if let Some(last) = coords.last().cloned() {
        for c in &mut coords {
            *c -= &last;
        }
    }
    coords
}

/// A point of tropical projective space, last coordinate zero.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    coords: Vec<Rational>,
}

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Point {
            coords: normalize(coords),
        }
    }

    pub fn from_integers(coords: &[i64]) -> Self {
        Point::new(
            coords
                .iter()
                .map(|&c| Rational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn d(&self) -> usize {
        self.coords.len()
    }

    /// Adds `t` to every coordinate; the normalized point is unchanged.
    pub fn shifted(&self, t: &Rational) -> Point {
        Point::new(self.coords.iter().map(|c| c + t).collect())
    }

    pub fn translated(&self, v: &[Rational]) -> Point {
        Point::new(self.coords.iter().zip(v).map(|(c, x)| c + x).collect())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(format_rational).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// `n` tropical hyperplanes in `TP^{d-1}`, given by their apexes.
#[derive(Clone, PartialEq, Eq)]
pub struct Arrangement {
    d: usize,
    apexes: Vec<Vec<Rational>>,
}

impl Arrangement {
    pub fn new(d: usize, apexes: Vec<Vec<Rational>>) -> Result<Self> {
        check_param("d", d)?;
        check_param("n", apexes.len())?;
        if let Some(bad) = apexes.iter().find(|a| a.len() != d) {
            return Err(Error::WrongLength {
                expected: d,
                actual: bad.len(),
            });
        }
        Ok(Arrangement {
            d,
            apexes: apexes.into_iter().map(normalize).collect(),
        })
    }

    pub fn from_integers(d: usize, apexes: &[Vec<i64>]) -> Result<Self> {
        Arrangement::new(
            d,
            apexes
                .iter()
                .map(|a| {
                    a.iter()
                        .map(|&c| Rational::from_integer(c.into()))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.apexes.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn apexes(&self) -> &[Vec<Rational>] {
        &self.apexes
    }

    /// Apex of hyperplane `i` (1-based) as a point.
    pub fn apex(&self, i: usize) -> Point {
        Point {
            coords: self.apexes[i - 1].clone(),
        }
    }

    /// True when two apexes coincide.
    pub fn has_coincident_apexes(&self) -> bool {
        let distinct: BTreeSet<&Vec<Rational>> = self.apexes.iter().collect();
        distinct.len() != self.apexes.len()
    }

    /// Adds `v` to every apex.
    pub fn translated(&self, v: &[Rational]) -> Arrangement {
        Arrangement {
            d: self.d,
            apexes: self
                .apexes
                .iter()
                .map(|a| normalize(a.iter().zip(v).map(|(c, x)| c + x).collect()))
                .collect(),
        }
    }
}

impl fmt::Debug for Arrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .apexes
            .iter()
            .map(|a| {
                format!(
                    "[{}]",
                    a.iter().map(format_rational).collect::<Vec<_>>().join(", ")
                )
            })
            .collect();
        write!(f, "Arrangement(d={}, apexes={})", self.d, rows.join(" "))
    }
}

/// The type of `x`: coordinate `i` is the set of `j` maximizing `x_j − v_ij`.
pub fn type_of_point(arr: &Arrangement, x: &Point) -> Type {
    assert_eq!(arr.d(), x.d(), "point and arrangement dimensions differ");
    let coords = arr
        .apexes
        .iter()
        .map(|v| {
            let diffs: Vec<Rational> = x.coords.iter().zip(v).map(|(xj, vj)| xj - vj).collect();
            let max = diffs.iter().max().expect("d ≥ 1");
            diffs
                .iter()
                .enumerate()
                .filter(|(_, v)| *v == max)
                .map(|(j, _)| j + 1)
                .collect::<DirSet>()
        })
        .collect();
    Type::new_unchecked(arr.d(), coords)
}

/// The vertices of an arrangement together with the points realizing them.
#[derive(Clone, Debug)]
pub struct VertexEnumeration {
    pub vertices: BTreeSet<Type>,
    /// Each vertex point with its type, ordered by point.
    pub points: Vec<(Point, Type)>,
    /// Two apexes coincide.
    pub degenerate: bool,
    /// Distinct vertex points have distinct types and every vertex type is a
    /// spanning tree of `K_{n,d}` (`Σ|A_i| = n+d−1`).
    pub generic: bool,
}

/// Solves `M x = rhs` for square `M`; `None` when singular.
fn solve_unique(mut m: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let k = rhs.len();
    for col in 0..k {
        let pivot = (col..k).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let inv = m[col][col].recip();
        for v in &mut m[col][col..k] {
            *v = &*v * &inv;
        }
        rhs[col] = &rhs[col] * &inv;
        for r in 0..k {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (v, p) in m[r][col..k].iter_mut().zip(&pivot_row[col..k]) {
                    *v -= &factor * p;
                }
                let delta = &factor * &rhs[col];
                rhs[r] -= delta;
            }
        }
    }
    Some(rhs)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Finds every type with connected `G_A` realized by the arrangement.
///
/// Walls `x_j − x_k = v_ij − v_ik` are intersected `d−1` at a time with the
/// gauge `x_d = 0`; each unique solution point is typed and kept if its graph is
/// connected.
pub fn enumerate_vertex_types(arr: &Arrangement) -> Result<VertexEnumeration> {
    let (n, d) = (arr.n(), arr.d());
    if d > MAX_ENUMERATION_D {
        return Err(Error::ParameterOutOfRange {
            name: "d",
            value: d,
            max: MAX_ENUMERATION_D,
        });
    }
    if d == 1 {
        let t = Type::new_unchecked(1, vec![DirSet::singleton(1); n]);
        let p = Point::new(vec![Rational::zero()]);
        return Ok(VertexEnumeration {
            vertices: BTreeSet::from([t.clone()]),
            points: vec![(p, t)],
            degenerate: arr.has_coincident_apexes(),
            generic: !arr.has_coincident_apexes(),
        });
    }
    // each wall as (coefficient row over x_1..x_{d-1}, right-hand side)
    let mut walls: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for v in &arr.apexes {
        for j in 0..d {
            for k in j + 1..d {
                let mut row = vec![Rational::zero(); d - 1];
                row[j] = Rational::from_integer(1.into());
                if k < d - 1 {
                    row[k] = Rational::from_integer((-1).into());
                }
                walls.push((row, &v[j] - &v[k]));
            }
        }
    }
    let subsets = combinations(walls.len(), d - 1);
    let solutions: BTreeSet<Vec<Rational>> = subsets
        .par_iter()
        .filter_map(|subset| {
            let m = subset.iter().map(|&w| walls[w].0.clone()).collect();
            let rhs = subset.iter().map(|&w| walls[w].1.clone()).collect();
            solve_unique(m, rhs)
        })
        .collect();
    let mut points = Vec::new();
    for mut sol in solutions {
        sol.push(Rational::zero());
        let p = Point { coords: sol };
        let t = type_of_point(arr, &p);
        if is_vertex(&t) {
            points.push((p, t));
        }
    }
    let vertices: BTreeSet<Type> = points.iter().map(|(_, t)| t.clone()).collect();
    let degenerate = arr.has_coincident_apexes();
    let trees = vertices
        .iter()
        .all(|t| t.coords().iter().map(|c| c.len()).sum::<usize>() == n + d - 1);
    let generic = !degenerate && vertices.len() == points.len() && trees;
    Ok(VertexEnumeration {
        vertices,
        points,
        degenerate,
        generic,
    })
}

/// The type set of a realizable arrangement, with its degeneracy flag.
#[derive(Clone, Debug)]
pub struct RealizedTom {
    pub tom: TomTypeSet,
    pub degenerate: bool,
    pub generic: bool,
}

/// Refinement closure of the arrangement's vertex types.
pub fn arrangement_tom(arr: &Arrangement) -> Result<RealizedTom> {
    let e = enumerate_vertex_types(arr)?;
    let seeds = TomTypeSet::from_types(arr.n(), arr.d(), e.vertices)?;
    Ok(RealizedTom {
        tom: refinement_closure(&seeds),
        degenerate: e.degenerate,
        generic: e.generic,
    })
}

/// Walks the tropical segment from `x` to `y` to the point `z` lying in the
/// union of the sectors of hyperplane `j` (1-based) occupied by `x` and `y`.
///
/// Returns `z = x' ⊕ y'` after shifting `x` and `y` so that `x_a − v_ja = 0`
/// and `y_b − v_jb = 0` for `a ∈ A_j`, `b ∈ B_j`, together with its type.
pub fn eliminate_points(
    arr: &Arrangement,
    x: &Point,
    y: &Point,
    j: usize,
) -> Result<(Point, Type)> {
    if j == 0 || j > arr.n() {
        return Err(Error::IndexOutOfRange {
            index: j,
            max: arr.n(),
        });
    }
    let v = &arr.apexes[j - 1];
    let a = type_of_point(arr, x)
        .coord(j)
        .first()
        .expect("types are nonempty")
        - 1;
    let b = type_of_point(arr, y)
        .coord(j)
        .first()
        .expect("types are nonempty")
        - 1;
    let sx = &v[a] - &x.coords[a];
    let sy = &v[b] - &y.coords[b];
    let z: Vec<Rational> = x
        .coords
        .iter()
        .zip(&y.coords)
        .map(|(xi, yi)| {
            let (p, q) = (xi + &sx, yi + &sy);
            if p >= q {
                p
            } else {
                q
            }
        })
        .collect();
    let z = Point::new(z);
    let c = type_of_point(arr, &z);
    Ok((z, c))
}

/// Apexes with integer coordinates drawn uniformly from `[-bound, bound]`.
pub fn random_arrangement<R: Rng>(
    rng: &mut R,
    n: usize,
    d: usize,
    bound: i64,
) -> Result<Arrangement> {
    let apexes: Vec<Vec<i64>> = (0..n)
        .map(|_| (0..d).map(|_| rng.random_range(-bound..=bound)).collect())
        .collect();
    Arrangement::from_integers(d, &apexes)
}

/// Draws arrangements until one is generic.
pub fn random_generic_arrangement<R: Rng>(
    rng: &mut R,
    n: usize,
    d: usize,
    bound: i64,
) -> Result<Arrangement> {
    loop {
        let arr = random_arrangement(rng, n, d, bound)?;
        if enumerate_vertex_types(&arr)?.generic {
            return Ok(arr);
        }
    }
}

/// A point with coordinates `p/q`, `|p| ≤ bound·q`, `1 ≤ q ≤ max_denominator`.
pub fn random_point<R: Rng>(rng: &mut R, d: usize, bound: i64, max_denominator: i64) -> Point {
    let coords = (0..d)
        .map(|_| {
            let q = rng.random_range(1..=max_denominator);
            let p = rng.random_range(-bound * q..=bound * q);
            Rational::new(p.into(), q.into())
        })
        .collect();
    Point::new(coords)
}

/// Groups vertex points by type; more than one point per type signals a non-generic arrangement.
pub fn points_by_type(e: &VertexEnumeration) -> BTreeMap<Type, Vec<Point>> {
    let mut out: BTreeMap<Type, Vec<Point>> = BTreeMap::new();
    for (p, t) in &e.points {
        out.entry(t.clone()).or_default().push(p.clone());
    }
    out
}

/// True when every coordinate of `x` is strictly negative relative to the apex in
/// all directions but one; used to reach the boundary sectors.
pub fn is_far_in_direction(arr: &Arrangement, x: &Point, j: usize) -> bool {
    arr.apexes.iter().all(|v| {
        (0..arr.d()).filter(|&i| i != j - 1).all(|i| {
            let lhs = &x.coords[j - 1] - &x.coords[i];
            let rhs = &v[j - 1] - &v[i];
            (lhs - rhs).is_positive()
        })
    })
}
