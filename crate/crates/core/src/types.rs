//! Types, semitypes and the containers built from them.
//!
//! A subset of the ground set `{1,…,d}` is a [`DirSet`], a 64-bit mask where
//! bit `j-1` stands for direction `j`. Every label that crosses the public
//! API (positions, directions, JSON) is 1-based.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported `n` or `d`.
pub const MAX_PARAM: usize = 64;

pub(crate) fn check_param(name: &'static str, value: usize) -> Result<()> {
    if value == 0 || value > MAX_PARAM {
        return Err(Error::ParameterOutOfRange {
            name,
            value,
            max: MAX_PARAM,
        });
    }
    Ok(())
}

/// A subset of `{1,…,64}` stored as a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct DirSet(u64);

impl DirSet {
    pub const EMPTY: DirSet = DirSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        DirSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// `{j}` for a 1-based label `j ≤ 64`.
    pub fn singleton(j: usize) -> Self {
        debug_assert!((1..=MAX_PARAM).contains(&j));
        DirSet(1u64 << (j - 1))
    }

    /// `{1,…,d}`.
    pub fn full(d: usize) -> Self {
        if d >= 64 {
            DirSet(u64::MAX)
        } else {
            DirSet((1u64 << d) - 1)
        }
    }

    pub fn contains(self, j: usize) -> bool {
        (1..=MAX_PARAM).contains(&j) && self.0 & (1u64 << (j - 1)) != 0
    }

    pub fn with(self, j: usize) -> Self {
        self | DirSet::singleton(j)
    }

    pub fn without(self, j: usize) -> Self {
        self - DirSet::singleton(j)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_singleton(self) -> bool {
        self.0.is_power_of_two()
    }

    pub fn is_subset(self, other: DirSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: DirSet) -> bool {
        self.0 & other.0 != 0
    }

    /// Smallest element, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    /// Largest element, if any.
    pub fn last(self) -> Option<usize> {
        (self.0 != 0).then(|| 64 - self.0.leading_zeros() as usize)
    }

    /// Elements in increasing order.
    pub fn iter(self) -> DirSetIter {
        DirSetIter(self.0)
    }

    /// Every subset of `self`, including the empty set and `self`.
    pub fn subsets(self) -> impl Iterator<Item = DirSet> {
        let full = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some(cur.wrapping_sub(full) & full)
            };
            Some(DirSet(cur))
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

pub struct DirSetIter(u64);

impl Iterator for DirSetIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let j = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(j + 1)
    }
}

impl FromIterator<usize> for DirSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter().fold(DirSet::EMPTY, DirSet::with)
    }
}

impl BitOr for DirSet {
    type Output = DirSet;
    fn bitor(self, rhs: DirSet) -> DirSet {
        DirSet(self.0 | rhs.0)
    }
}

impl BitAnd for DirSet {
    type Output = DirSet;
    fn bitand(self, rhs: DirSet) -> DirSet {
        DirSet(self.0 & rhs.0)
    }
}

impl Sub for DirSet {
    type Output = DirSet;
    fn sub(self, rhs: DirSet) -> DirSet {
        DirSet(self.0 & !rhs.0)
    }
}

impl fmt::Display for DirSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("∅");
        }
        if self.last().unwrap_or(0) <= 9 {
            for j in self.iter() {
                write!(f, "{j}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.iter().map(|j| j.to_string()).collect();
            write!(f, "{{{}}}", parts.join(","))
        }
    }
}

impl fmt::Debug for DirSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for DirSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for j in self.iter() {
            seq.serialize_element(&j)?;
        }
        seq.end()
    }
}

fn set_from_labels(position: usize, d: usize, labels: &[usize]) -> Result<DirSet> {
    let mut set = DirSet::EMPTY;
    for &j in labels {
        if j == 0 || j > d {
            return Err(Error::OutOfRange(position, j));
        }
        set = set.with(j);
    }
    Ok(set)
}

/// Parses the compact notation `"123,1"`; `-` or `∅` denotes an empty coordinate.
/// Only usable while `d ≤ 9`.
fn parse_compact(d: usize, s: &str) -> Result<Vec<DirSet>> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    s.split(',')
        .enumerate()
        .map(|(i, part)| {
            let part = part.trim();
            if part == "-" || part == "∅" {
                return Ok(DirSet::EMPTY);
            }
            let labels = part
                .chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|v| v as usize)
                        .ok_or_else(|| Error::Invalid(format!("bad digit {c:?} in {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            set_from_labels(i + 1, d, &labels)
        })
        .collect()
}

fn fmt_coords(f: &mut fmt::Formatter<'_>, coords: &[DirSet]) -> fmt::Result {
    f.write_str("(")?;
    for (i, c) in coords.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{c}")?;
    }
    f.write_str(")")
}

/// An `(n, d)`-type: `n` nonempty subsets of `{1,…,d}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Type {
    d: usize,
    coords: Vec<DirSet>,
}

impl Type {
    /// Builds a type from masks, validating every coordinate.
    pub fn new(d: usize, coords: Vec<DirSet>) -> Result<Self> {
        check_param("d", d)?;
        check_param("n", coords.len())?;
        let ground = DirSet::full(d);
        for (i, c) in coords.iter().enumerate() {
            if c.is_empty() {
                return Err(Error::EmptyCoordinate(i + 1));
            }
            if let Some(j) = (*c - ground).first() {
                return Err(Error::OutOfRange(i + 1, j));
            }
        }
        Ok(Type { d, coords })
    }

    /// Skips validation; callers guarantee nonempty in-range coordinates.
    pub(crate) fn new_unchecked(d: usize, coords: Vec<DirSet>) -> Self {
        debug_assert!(coords
            .iter()
            .all(|c| !c.is_empty() && c.is_subset(DirSet::full(d))));
        Type { d, coords }
    }

    /// Parses the compact notation used in the literature, e.g. `"123,1"` or `"(23,13)"`.
    pub fn compact(d: usize, s: &str) -> Result<Self> {
        Type::new(d, parse_compact(d, s)?)
    }

    /// The constant type `(j,j,…,j)`.
    pub fn constant(n: usize, d: usize, j: usize) -> Self {
        Type::new_unchecked(d, vec![DirSet::singleton(j); n])
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn coords(&self) -> &[DirSet] {
        &self.coords
    }

    /// Coordinate at 1-based position `i`.
    pub fn coord(&self, i: usize) -> DirSet {
        self.coords[i - 1]
    }

    pub fn is_tope(&self) -> bool {
        self.coords.iter().all(|c| c.is_singleton())
    }

    /// Coordinatewise containment `self ⊆ other`.
    pub fn is_contained_in(&self, other: &Type) -> bool {
        self.coords.len() == other.coords.len()
            && self
                .coords
                .iter()
                .zip(&other.coords)
                .all(|(a, b)| a.is_subset(*b))
    }

    /// Union of all coordinates.
    pub fn support(&self) -> DirSet {
        self.coords.iter().fold(DirSet::EMPTY, |acc, &c| acc | c)
    }

    pub fn to_lists(&self) -> Vec<Vec<usize>> {
        self.coords.iter().map(|c| c.to_vec()).collect()
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_coords(f, &self.coords)
    }
}

impl fmt::Debug for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Type {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(serializer)
    }
}

/// Validating constructor taking 1-based label lists.
pub fn make_type<L: AsRef<[usize]>>(n: usize, d: usize, coords: &[L]) -> Result<Type> {
    check_param("n", n)?;
    check_param("d", d)?;
    if coords.len() != n {
        return Err(Error::WrongLength {
            expected: n,
            actual: coords.len(),
        });
    }
    let masks = coords
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let set = set_from_labels(i + 1, d, c.as_ref())?;
            if set.is_empty() {
                return Err(Error::EmptyCoordinate(i + 1));
            }
            Ok(set)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Type::new_unchecked(d, masks))
}

/// Like [`Type`] but coordinates may be empty.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SemiType {
    d: usize,
    coords: Vec<DirSet>,
}

impl SemiType {
    pub fn new(d: usize, coords: Vec<DirSet>) -> Result<Self> {
        check_param("d", d)?;
        check_param("n", coords.len())?;
        let ground = DirSet::full(d);
        for (i, c) in coords.iter().enumerate() {
            if let Some(j) = (*c - ground).first() {
                return Err(Error::OutOfRange(i + 1, j));
            }
        }
        Ok(SemiType { d, coords })
    }

    pub fn from_lists<L: AsRef<[usize]>>(d: usize, coords: &[L]) -> Result<Self> {
        let masks = coords
            .iter()
            .enumerate()
            .map(|(i, c)| set_from_labels(i + 1, d, c.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        SemiType::new(d, masks)
    }

    pub fn compact(d: usize, s: &str) -> Result<Self> {
        SemiType::new(d, parse_compact(d, s)?)
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn coords(&self) -> &[DirSet] {
        &self.coords
    }

    /// True when no coordinate is empty.
    pub fn is_honest(&self) -> bool {
        self.coords.iter().all(|c| !c.is_empty())
    }

    pub fn to_type(&self) -> Option<Type> {
        self.is_honest()
            .then(|| Type::new_unchecked(self.d, self.coords.clone()))
    }

    pub fn to_lists(&self) -> Vec<Vec<usize>> {
        self.coords.iter().map(|c| c.to_vec()).collect()
    }
}

impl From<&Type> for SemiType {
    fn from(t: &Type) -> Self {
        SemiType {
            d: t.d,
            coords: t.coords.clone(),
        }
    }
}

impl fmt::Display for SemiType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_coords(f, &self.coords)
    }
}

impl fmt::Debug for SemiType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for SemiType {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(serializer)
    }
}

/// Reads an `(n,d)` semitype as a `(d,n)` semitype: `i ∈ tᵀ_j ⇔ j ∈ t_i`.
pub fn transpose(s: &SemiType) -> SemiType {
    let n = s.n();
    let mut coords = vec![DirSet::EMPTY; s.d];
    for (i, c) in s.coords.iter().enumerate() {
        for j in c.iter() {
            coords[j - 1] = coords[j - 1].with(i + 1);
        }
    }
    SemiType { d: n, coords }
}

/// An ordered partition `(P_1,…,P_r)` of `{1,…,d}` into nonempty blocks.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderedPartition {
    d: usize,
    parts: Vec<DirSet>,
}

impl OrderedPartition {
    pub fn new(d: usize, parts: Vec<DirSet>) -> Result<Self> {
        check_param("d", d)?;
        let mut seen = DirSet::EMPTY;
        for p in &parts {
            if p.is_empty() {
                return Err(Error::Invalid("ordered partition has an empty part".into()));
            }
            if p.intersects(seen) {
                return Err(Error::Invalid("ordered partition parts overlap".into()));
            }
            seen = seen | *p;
        }
        if seen != DirSet::full(d) {
            return Err(Error::Invalid(format!(
                "ordered partition does not cover 1..={d}"
            )));
        }
        Ok(OrderedPartition { d, parts })
    }

    pub fn from_lists<L: AsRef<[usize]>>(d: usize, parts: &[L]) -> Result<Self> {
        let masks = parts
            .iter()
            .enumerate()
            .map(|(i, p)| set_from_labels(i + 1, d, p.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        OrderedPartition::new(d, masks)
    }

    pub(crate) fn new_unchecked(d: usize, parts: Vec<DirSet>) -> Self {
        OrderedPartition { d, parts }
    }

    /// The one-block partition `({1,…,d})`.
    pub fn trivial(d: usize) -> Self {
        OrderedPartition {
            d,
            parts: vec![DirSet::full(d)],
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn parts(&self) -> &[DirSet] {
        &self.parts
    }
}

impl fmt::Display for OrderedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_coords(f, &self.parts)
    }
}

impl fmt::Debug for OrderedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for OrderedPartition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(serializer)
    }
}

/// A graph on `{1,…,d}` with both undirected and directed edges. Self-pairs are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize)]
pub struct Semidigraph {
    pub vertex_count: usize,
    /// Unordered pairs stored as `(j, k)` with `j < k`.
    pub undirected: BTreeSet<(usize, usize)>,
    pub directed: BTreeSet<(usize, usize)>,
}

impl Semidigraph {
    pub fn new(vertex_count: usize) -> Self {
        Semidigraph {
            vertex_count,
            ..Default::default()
        }
    }

    pub fn add_undirected(&mut self, j: usize, k: usize) {
        if j != k {
            self.undirected.insert((j.min(k), j.max(k)));
        }
    }

    pub fn add_directed(&mut self, j: usize, k: usize) {
        if j != k {
            self.directed.insert((j, k));
        }
    }

    /// The same graph with every directed edge reversed.
    pub fn reversed(&self) -> Semidigraph {
        Semidigraph {
            vertex_count: self.vertex_count,
            undirected: self.undirected.clone(),
            directed: self.directed.iter().map(|&(j, k)| (k, j)).collect(),
        }
    }
}

/// A finite set of `(n, d)`-types kept in canonical (sorted) order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TomTypeSet {
    n: usize,
    d: usize,
    types: BTreeSet<Type>,
}

impl TomTypeSet {
    pub fn empty(n: usize, d: usize) -> Result<Self> {
        check_param("n", n)?;
        check_param("d", d)?;
        Ok(TomTypeSet {
            n,
            d,
            types: BTreeSet::new(),
        })
    }

    pub fn from_types<I: IntoIterator<Item = Type>>(n: usize, d: usize, types: I) -> Result<Self> {
        let mut set = TomTypeSet::empty(n, d)?;
        for t in types {
            set.insert(t)?;
        }
        Ok(set)
    }

    /// Parses a list of compact types, e.g. `["123,1", "23,13"]`.
    pub fn compact(n: usize, d: usize, types: &[&str]) -> Result<Self> {
        let parsed = types
            .iter()
            .map(|s| Type::compact(d, s))
            .collect::<Result<Vec<_>>>()?;
        TomTypeSet::from_types(n, d, parsed)
    }

    pub(crate) fn from_set_unchecked(n: usize, d: usize, types: BTreeSet<Type>) -> Self {
        debug_assert!(types.iter().all(|t| t.n() == n && t.d() == d));
        TomTypeSet { n, d, types }
    }

    /// Inserts a type; returns whether it was new.
    pub fn insert(&mut self, t: Type) -> Result<bool> {
        if t.n() != self.n || t.d() != self.d {
            return Err(Error::ParameterMismatch {
                n: self.n,
                d: self.d,
                found_n: t.n(),
                found_d: t.d(),
            });
        }
        Ok(self.types.insert(t))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn contains(&self, t: &Type) -> bool {
        self.types.contains(t)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Type> {
        self.types.iter()
    }

    pub fn types(&self) -> &BTreeSet<Type> {
        &self.types
    }

    pub fn into_types(self) -> BTreeSet<Type> {
        self.types
    }

    /// Members in canonical order as a vector; handy for index-based access.
    pub fn to_vec(&self) -> Vec<Type> {
        self.types.iter().cloned().collect()
    }
}

impl fmt::Debug for TomTypeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TomTypeSet(n={}, d={}) ", self.n, self.d)?;
        f.debug_set().entries(self.types.iter()).finish()
    }
}

impl<'a> IntoIterator for &'a TomTypeSet {
    type Item = &'a Type;
    type IntoIter = std::collections::btree_set::Iter<'a, Type>;
    fn into_iter(self) -> Self::IntoIter {
        self.types.iter()
    }
}

/// All semitypes obtained from members of `m` by emptying any subset of coordinates.
pub fn completion(m: &TomTypeSet) -> BTreeSet<SemiType> {
    let mut out = BTreeSet::new();
    let n = m.n();
    for t in m {
        for mask in 0u64..(1u64 << n) {
            let coords = t
                .coords()
                .iter()
                .enumerate()
                .map(|(i, &c)| {
                    if mask & (1 << i) != 0 {
                        DirSet::EMPTY
                    } else {
                        c
                    }
                })
                .collect();
            out.insert(SemiType { d: t.d(), coords });
        }
    }
    out
}

/// The honest types among `semis`.
pub fn reduction(n: usize, d: usize, semis: &BTreeSet<SemiType>) -> Result<TomTypeSet> {
    let mut out = TomTypeSet::empty(n, d)?;
    for s in semis {
        if s.n() != n || s.d() != d {
            return Err(Error::ParameterMismatch {
                n,
                d,
                found_n: s.n(),
                found_d: s.d(),
            });
        }
        if let Some(t) = s.to_type() {
            out.types.insert(t);
        }
    }
    Ok(out)
}

/// `reduction({transpose(s) : s ∈ completion(m)})`, an `(d,n)` type set.
///
/// Whether the result satisfies the axioms is not asserted here.
pub fn dual(m: &TomTypeSet) -> TomTypeSet {
    let transposed: BTreeSet<SemiType> = completion(m).iter().map(transpose).collect();
    reduction(m.d(), m.n(), &transposed).expect("transposes share parameters (d, n)")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dirset_basics() {
        let s: DirSet = [1, 3].into_iter().collect();
        assert_eq!(s.to_vec(), vec![1, 3]);
        assert_eq!(s.first(), Some(1));
        assert_eq!(s.last(), Some(3));
        assert!(s.contains(3) && !s.contains(2) && !s.contains(0));
        assert_eq!(s.subsets().count(), 4);
        assert_eq!(DirSet::full(3).subsets().count(), 8);
        assert_eq!(DirSet::EMPTY.subsets().count(), 1);
        assert_eq!(DirSet::full(64).len(), 64);
        assert_eq!(format!("{}", DirSet::full(3)), "123");
        assert_eq!(format!("{}", DirSet::singleton(10).with(2)), "{2,10}");
    }

    #[test]
    fn make_type_accepts_paper_examples() {
        let t = make_type(2, 3, &[vec![1, 2, 3], vec![1]]).unwrap();
        assert_eq!(t.to_string(), "(123,1)");
        let big = make_type(
            8,
            9,
            &[
                vec![1, 2],
                vec![6, 9],
                vec![1, 2],
                vec![6, 7],
                vec![2, 3],
                vec![1, 8],
                vec![3, 4, 5],
                vec![1, 3, 5],
            ],
        )
        .unwrap();
        assert_eq!(big.to_string(), "(12,69,12,67,23,18,345,135)");
        assert_eq!(big, Type::compact(9, "12,69,12,67,23,18,345,135").unwrap());
    }

    #[test]
    fn make_type_rejects_bad_coordinates() {
        assert_eq!(
            make_type(2, 3, &[vec![], vec![1]]),
            Err(Error::EmptyCoordinate(1))
        );
        assert_eq!(
            make_type(2, 3, &[vec![1], vec![4]]),
            Err(Error::OutOfRange(2, 4))
        );
        assert_eq!(
            make_type(2, 3, &[vec![0], vec![1]]),
            Err(Error::OutOfRange(1, 0))
        );
        assert!(matches!(
            make_type(3, 3, &[vec![1], vec![1]]),
            Err(Error::WrongLength { .. })
        ));
        assert!(matches!(
            make_type(1, 65, &[vec![1]]),
            Err(Error::ParameterOutOfRange { .. })
        ));
    }

    #[test]
    fn transpose_examples() {
        let s = SemiType::compact(3, "123,1").unwrap();
        let t = transpose(&s);
        assert_eq!((t.n(), t.d()), (3, 2));
        assert_eq!(t, SemiType::compact(2, "12,1,1").unwrap());

        let empty = SemiType::compact(3, "-,-").unwrap();
        assert_eq!(transpose(&empty), SemiType::compact(2, "-,-,-").unwrap());

        let s = SemiType::compact(3, "23,13").unwrap();
        assert_eq!(transpose(&transpose(&s)), s);
    }

    #[test]
    fn completion_and_reduction() {
        let m = TomTypeSet::compact(2, 2, &["2,1"]).unwrap();
        let c = completion(&m);
        let expected: BTreeSet<SemiType> = ["2,1", "-,1", "2,-", "-,-"]
            .iter()
            .map(|s| SemiType::compact(2, s).unwrap())
            .collect();
        assert_eq!(c, expected);

        let m = TomTypeSet::compact(2, 3, &["123,1"]).unwrap();
        let c = completion(&m);
        assert!(c.contains(&SemiType::compact(3, "123,-").unwrap()));
        assert!(c.contains(&SemiType::compact(3, "-,1").unwrap()));

        let semis: BTreeSet<SemiType> = ["2,1", "-,1"]
            .iter()
            .map(|s| SemiType::compact(2, s).unwrap())
            .collect();
        assert_eq!(
            reduction(2, 2, &semis).unwrap(),
            TomTypeSet::compact(2, 2, &["2,1"]).unwrap()
        );
        assert!(reduction(2, 2, &BTreeSet::new()).unwrap().is_empty());
    }

    #[test]
    fn completion_count_of_three_vertices() {
        // Brute force: every subset of coordinates emptied, deduplicated by hand.
        let m = TomTypeSet::compact(2, 3, &["123,1", "23,13", "2,123"]).unwrap();
        let mut brute = BTreeSet::new();
        for t in &m {
            for keep0 in [true, false] {
                for keep1 in [true, false] {
                    let a = if keep0 { t.coord(1).to_vec() } else { vec![] };
                    let b = if keep1 { t.coord(2).to_vec() } else { vec![] };
                    brute.insert((a, b));
                }
            }
        }
        // 3 full + 3 distinct first coords + 3 distinct second coords + (∅,∅)
        assert_eq!(brute.len(), 10);
        assert_eq!(completion(&m).len(), brute.len());
    }

    #[test]
    fn dual_of_single_hyperplane() {
        let d = 3;
        let all: Vec<Type> = DirSet::full(d)
            .subsets()
            .filter(|s| !s.is_empty())
            .map(|s| Type::new(d, vec![s]).unwrap())
            .collect();
        let m = TomTypeSet::from_types(1, d, all).unwrap();
        assert_eq!(m.len(), 7);
        let dm = dual(&m);
        assert_eq!((dm.n(), dm.d()), (3, 1));
        assert_eq!(dm, TomTypeSet::compact(3, 1, &["1,1,1"]).unwrap());
    }

    #[test]
    fn ordered_partition_validation() {
        assert!(OrderedPartition::from_lists(3, &[vec![1], vec![2, 3]]).is_ok());
        assert!(OrderedPartition::from_lists(3, &[vec![1], vec![2]]).is_err());
        assert!(OrderedPartition::from_lists(3, &[vec![1, 2], vec![2, 3]]).is_err());
        assert!(OrderedPartition::from_lists(3, &[vec![1, 2, 3], vec![]]).is_err());
    }

    #[test]
    fn tom_type_set_rejects_mismatch() {
        let mut m = TomTypeSet::empty(2, 3).unwrap();
        assert!(m.insert(Type::compact(3, "1").unwrap()).is_err());
        assert!(m.insert(Type::compact(3, "1,2").unwrap()).unwrap());
        assert!(!m.insert(Type::compact(3, "1,2").unwrap()).unwrap());
    }
}
