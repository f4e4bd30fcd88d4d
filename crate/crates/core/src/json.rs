//! JSON wire formats.
//!
//! Type sets are `{"n","d","types":[[[1,2,3],[1]], …]}`, arrangements are
//! `{"n","d","apexes":[["0","1/2","0"], …]}` and subgraph collections are
//! `{"n","d","cells":[[[i,j], …], …]}`. All labels are 1-based. Parsing validates
//! everything the constructors validate.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::arrangement::{format_rational, parse_rational, Arrangement};
use crate::error::{Error, Result};
use crate::subdivision::{BipartiteSubgraph, SubgraphCollection};
use crate::types::{make_type, SemiType, TomTypeSet, Type};

#[derive(Serialize, Deserialize)]
struct RawTypeSet {
    n: usize,
    d: usize,
    types: Vec<Vec<Vec<usize>>>,
}

#[derive(Serialize, Deserialize)]
struct RawArrangement {
    #[serde(default)]
    n: Option<usize>,
    d: usize,
    apexes: Vec<Vec<Value>>,
}

#[derive(Serialize, Deserialize)]
struct RawCollection {
    n: usize,
    d: usize,
    cells: Vec<Vec<(usize, usize)>>,
}

fn invalid(e: serde_json::Error) -> Error {
    Error::Invalid(e.to_string())
}

pub fn type_set_to_value(m: &TomTypeSet) -> Value {
    let raw = RawTypeSet {
        n: m.n(),
        d: m.d(),
        types: m.iter().map(Type::to_lists).collect(),
    };
    serde_json::to_value(raw).expect("plain data serializes")
}

pub fn type_set_from_value(v: Value) -> Result<TomTypeSet> {
    let raw: RawTypeSet = serde_json::from_value(v).map_err(invalid)?;
    let types = raw
        .types
        .iter()
        .map(|t| make_type(raw.n, raw.d, t))
        .collect::<Result<Vec<_>>>()?;
    TomTypeSet::from_types(raw.n, raw.d, types)
}

pub fn type_set_from_str(s: &str) -> Result<TomTypeSet> {
    type_set_from_value(serde_json::from_str(s).map_err(invalid)?)
}

pub fn type_set_to_string(m: &TomTypeSet) -> String {
    serde_json::to_string_pretty(&type_set_to_value(m)).expect("plain data serializes")
}

/// A single type as a list of coordinate lists.
pub fn type_from_value(n: usize, d: usize, v: Value) -> Result<Type> {
    let lists: Vec<Vec<usize>> = serde_json::from_value(v).map_err(invalid)?;
    make_type(n, d, &lists)
}

/// A semitype; empty coordinates are allowed.
pub fn semitype_from_value(d: usize, v: Value) -> Result<SemiType> {
    let lists: Vec<Vec<usize>> = serde_json::from_value(v).map_err(invalid)?;
    SemiType::from_lists(d, &lists)
}

pub fn arrangement_to_value(a: &Arrangement) -> Value {
    let apexes = a
        .apexes()
        .iter()
        .map(|p| {
            p.iter()
                .map(|r| Value::String(format_rational(r)))
                .collect()
        })
        .collect();
    serde_json::to_value(RawArrangement {
        n: Some(a.n()),
        d: a.d(),
        apexes,
    })
    .expect("plain data serializes")
}

/// Apex coordinates may be `"p/q"` strings or JSON integers.
pub fn arrangement_from_value(v: Value) -> Result<Arrangement> {
    let raw: RawArrangement = serde_json::from_value(v).map_err(invalid)?;
    if let Some(n) = raw.n {
        if n != raw.apexes.len() {
            return Err(Error::WrongLength {
                expected: n,
                actual: raw.apexes.len(),
            });
        }
    }
    let mut apexes = Vec::with_capacity(raw.apexes.len());
    for p in &raw.apexes {
        let coords = p
            .iter()
            .map(|c| match c {
                Value::String(s) => parse_rational(s),
                Value::Number(x) if x.is_i64() => parse_rational(&x.to_string()),
                other => Err(Error::InvalidRational(other.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        apexes.push(coords);
    }
    Arrangement::new(raw.d, apexes)
}

pub fn arrangement_from_str(s: &str) -> Result<Arrangement> {
    arrangement_from_value(serde_json::from_str(s).map_err(invalid)?)
}

pub fn arrangement_to_string(a: &Arrangement) -> String {
    serde_json::to_string_pretty(&arrangement_to_value(a)).expect("plain data serializes")
}

pub fn collection_to_value(c: &SubgraphCollection) -> Value {
    let cells = c.cells().iter().map(|g| g.edges().collect()).collect();
    serde_json::to_value(RawCollection {
        n: c.n(),
        d: c.d(),
        cells,
    })
    .expect("plain data serializes")
}

pub fn collection_from_value(v: Value) -> Result<SubgraphCollection> {
    let raw: RawCollection = serde_json::from_value(v).map_err(invalid)?;
    let cells = raw
        .cells
        .iter()
        .map(|edges| BipartiteSubgraph::from_edges(raw.n, raw.d, edges))
        .collect::<Result<Vec<_>>>()?;
    SubgraphCollection::new(raw.n, raw.d, cells)
}

pub fn collection_from_str(s: &str) -> Result<SubgraphCollection> {
    collection_from_value(serde_json::from_str(s).map_err(invalid)?)
}

pub fn collection_to_string(c: &SubgraphCollection) -> String {
    serde_json::to_string_pretty(&collection_to_value(c)).expect("plain data serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type_set_round_trip() {
        let m = TomTypeSet::compact(2, 3, &["123,1", "23,13", "2,123"]).unwrap();
        let s = type_set_to_string(&m);
        assert_eq!(type_set_from_str(&s).unwrap(), m);
        let v: Value = serde_json::from_str(&s).unwrap();
        assert!(v["types"]
            .as_array()
            .unwrap()
            .contains(&serde_json::json!([[1, 2, 3], [1]])));
    }

    #[test]
    fn type_set_validation() {
        let bad = r#"{"n":2,"d":3,"types":[[[1],[]]]}"#;
        assert_eq!(type_set_from_str(bad), Err(Error::EmptyCoordinate(2)));
        let bad = r#"{"n":2,"d":3,"types":[[[4],[1]]]}"#;
        assert_eq!(type_set_from_str(bad), Err(Error::OutOfRange(1, 4)));
        let bad = r#"{"n":2,"d":3,"types":[[[1]]]}"#;
        assert!(matches!(
            type_set_from_str(bad),
            Err(Error::WrongLength { .. })
        ));
        assert!(matches!(type_set_from_str("{"), Err(Error::Invalid(_))));
    }

    #[test]
    fn arrangement_round_trip() {
        let s = r#"{"n":2,"d":3,"apexes":[["0","0","0"],["1/2",1,"-3/4"]]}"#;
        let a = arrangement_from_str(s).unwrap();
        assert_eq!(a.n(), 2);
        assert_eq!(arrangement_from_str(&arrangement_to_string(&a)).unwrap(), a);
        assert!(matches!(
            arrangement_from_str(r#"{"d":2,"apexes":[["x","0"]]}"#),
            Err(Error::InvalidRational(_))
        ));
        assert!(matches!(
            arrangement_from_str(r#"{"n":3,"d":2,"apexes":[["0","0"]]}"#),
            Err(Error::WrongLength { .. })
        ));
    }

    #[test]
    fn collection_round_trip() {
        let s = r#"{"n":2,"d":2,"cells":[[[1,1],[2,1],[2,2]],[[1,1],[1,2],[2,2]]]}"#;
        let c = collection_from_str(s).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(collection_from_str(&collection_to_string(&c)).unwrap(), c);
        assert!(collection_from_str(r#"{"n":2,"d":2,"cells":[[[3,1]]]}"#).is_err());
    }
}
