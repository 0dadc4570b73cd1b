//! JSON file formats for quivers, potentials, representations, character
//! inputs and exact-sequence data.
//!
//! * quiver: `{"vertices": n, "arrows": [[s, t, "label"], ...]}`
//! * potential: `[["p/q", ["c", "b", "a"]], ...]`, words in display order
//! * representation: `{"dims": [...], "maps": {"label": [[...], ...]}}`; the
//!   matrix of `a: i -> j` maps the vertex-`j` space to the vertex-`i` space
//! * character input: `{"module": <representation>, "g": [...]}`
//! * exact sequences: `{"x", "y", "e", "e_prime": <representation>,
//!   "i", "p", "i_prime", "p_prime": [<matrix per vertex>]}`

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::character::CharInput;
use crate::jacobian::GVector;
use crate::linalg::{format_rational, parse_rational, IntMatrix};
use crate::potential::{Potential, PotentialError};
use crate::quiver::{Arrow, Quiver, QuiverError};
use crate::repgrass::{Morphism, RepError, Representation, SESData, Side};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Representation(#[from] RepError),
    #[error("bad coefficient {0:?}")]
    BadCoefficient(String),
    #[error("{0}")]
    Shape(String),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Json(e.to_string())
    }
}

#[derive(Serialize, Deserialize)]
struct QuiverFile {
    vertices: usize,
    arrows: Vec<(usize, usize, String)>,
}

#[derive(Serialize, Deserialize)]
struct RepFile {
    dims: Vec<usize>,
    #[serde(default)]
    maps: BTreeMap<String, Vec<Vec<i64>>>,
}

#[derive(Deserialize)]
struct CharFile {
    module: RepFile,
    g: Vec<i64>,
}

#[derive(Deserialize)]
struct SesFile {
    x: RepFile,
    y: RepFile,
    e: RepFile,
    e_prime: RepFile,
    i: Vec<Vec<Vec<i64>>>,
    p: Vec<Vec<Vec<i64>>>,
    i_prime: Vec<Vec<Vec<i64>>>,
    p_prime: Vec<Vec<Vec<i64>>>,
}

/// Loops are accepted here; operations that forbid them check on use.
pub fn parse_quiver(text: &str) -> Result<Quiver, IoError> {
    let f: QuiverFile = serde_json::from_str(text)?;
    quiver_from_file(f)
}

fn quiver_from_file(f: QuiverFile) -> Result<Quiver, IoError> {
    let arrows = f.arrows.into_iter().map(|(s, t, l)| Arrow::new(s, t, l)).collect();
    Ok(Quiver::with_loops(f.vertices, arrows)?)
}

pub fn quiver_to_value(q: &Quiver) -> Value {
    let f = QuiverFile {
        vertices: q.vertex_count(),
        arrows: q.arrows().iter().map(|a| (a.source, a.target, a.label.clone())).collect(),
    };
    serde_json::to_value(f).expect("serializable")
}

pub fn parse_potential(q: Arc<Quiver>, text: &str, trunc: usize) -> Result<Potential, IoError> {
    let raw: Vec<(String, Vec<String>)> = serde_json::from_str(text)?;
    let mut terms = Vec::with_capacity(raw.len());
    for (c, labels) in &raw {
        let c = parse_rational(c).ok_or_else(|| IoError::BadCoefficient(c.clone()))?;
        terms.push((c, labels.iter().map(String::as_str).collect::<Vec<_>>()));
    }
    Ok(Potential::from_terms(q, &terms, trunc)?)
}

pub fn potential_to_value(w: &Potential) -> Value {
    let terms: Vec<(String, Vec<String>)> = w.to_terms().into_iter().map(|(c, l)| (format_rational(&c), l)).collect();
    serde_json::to_value(terms).expect("serializable")
}

fn matrix(rows: usize, cols: usize, entries: &[Vec<i64>], what: &str) -> Result<IntMatrix, IoError> {
    IntMatrix::from_rows(rows, cols, entries).ok_or_else(|| IoError::Shape(format!("{what}: expected a {rows}x{cols} matrix")))
}

fn rep_from_file(q: &Quiver, f: RepFile) -> Result<Representation, IoError> {
    if f.dims.len() != q.vertex_count() {
        return Err(RepError::DimsLength { expected: q.vertex_count(), got: f.dims.len() }.into());
    }
    let mut maps = Vec::with_capacity(f.maps.len());
    for (label, rows) in &f.maps {
        let a = q.arrow_id(label).ok_or_else(|| RepError::UnknownArrow(label.clone()))?;
        let arr = q.arrow(a);
        let m = matrix(f.dims[arr.source - 1], f.dims[arr.target - 1], rows, &format!("arrow {label:?}"))?;
        maps.push((label.as_str(), m));
    }
    Ok(Representation::from_labelled(q, f.dims.clone(), &maps, Side::Opposite)?)
}

/// Parses a `Q^op` representation; arrows missing from `maps` act by zero.
pub fn parse_representation(q: &Quiver, text: &str) -> Result<Representation, IoError> {
    rep_from_file(q, serde_json::from_str(text)?)
}

pub fn representation_to_value(q: &Quiver, m: &Representation) -> Value {
    let maps = (0..q.arrows().len()).map(|a| (q.arrow(a).label.clone(), m.map(a).to_rows())).collect();
    serde_json::to_value(RepFile { dims: m.dims().to_vec(), maps }).expect("serializable")
}

pub fn parse_char_input(q: &Quiver, text: &str) -> Result<CharInput, IoError> {
    let f: CharFile = serde_json::from_str(text)?;
    Ok(CharInput::new(rep_from_file(q, f.module)?, GVector(f.g)))
}

fn morphism(src: &Representation, tgt: &Representation, mats: &[Vec<Vec<i64>>], name: &str) -> Result<Morphism, IoError> {
    if mats.len() != src.dims().len() {
        return Err(IoError::Shape(format!("map {name}: expected one matrix per vertex")));
    }
    mats.iter()
        .enumerate()
        .map(|(v, rows)| matrix(tgt.dims()[v], src.dims()[v], rows, &format!("map {name} at vertex {}", v + 1)))
        .collect()
}

pub fn parse_ses(q: Arc<Quiver>, text: &str) -> Result<SESData, IoError> {
    let f: SesFile = serde_json::from_str(text)?;
    let x = rep_from_file(&q, f.x)?;
    let y = rep_from_file(&q, f.y)?;
    let e = rep_from_file(&q, f.e)?;
    let e_prime = rep_from_file(&q, f.e_prime)?;
    Ok(SESData {
        i: morphism(&x, &e, &f.i, "i")?,
        p: morphism(&e, &y, &f.p, "p")?,
        i_prime: morphism(&y, &e_prime, &f.i_prime, "i_prime")?,
        p_prime: morphism(&e_prime, &x, &f.p_prime, "p_prime")?,
        quiver: q,
        x,
        y,
        e,
        e_prime,
    })
}

pub fn ses_to_value(s: &SESData) -> Value {
    let q = &s.quiver;
    let mor = |f: &Morphism| Value::from(f.iter().map(|m| serde_json::to_value(m.to_rows()).expect("rows")).collect::<Vec<_>>());
    serde_json::json!({
        "x": representation_to_value(q, &s.x),
        "y": representation_to_value(q, &s.y),
        "e": representation_to_value(q, &s.e),
        "e_prime": representation_to_value(q, &s.e_prime),
        "i": mor(&s.i),
        "p": mor(&s.p),
        "i_prime": mor(&s.i_prime),
        "p_prime": mor(&s.p_prime),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::DEFAULT_TRUNC_DEGREE;
    use crate::repgrass::a3_ses_data;

    #[test]
    fn quiver_round_trip() {
        let q = parse_quiver(r#"{"vertices": 3, "arrows": [[2, 3, "b"], [1, 2, "a"]]}"#).unwrap();
        assert_eq!(q.arrows()[0].label, "a");
        let v = quiver_to_value(&q);
        assert_eq!(v.to_string(), r#"{"arrows":[[1,2,"a"],[2,3,"b"]],"vertices":3}"#);
        assert_eq!(parse_quiver(&v.to_string()).unwrap(), q);
        assert!(parse_quiver(r#"{"vertices": 1, "arrows": [[1, 2, "a"]]}"#).is_err());
        assert!(matches!(parse_quiver("[1"), Err(IoError::Json(_))));
    }

    #[test]
    fn potential_round_trip() {
        let q = Arc::new(parse_quiver(r#"{"vertices": 3, "arrows": [[1, 2, "a"], [2, 3, "b"], [3, 1, "c"]]}"#).unwrap());
        let w = parse_potential(q.clone(), r#"[["3/2", ["b", "a", "c"]]]"#, DEFAULT_TRUNC_DEGREE).unwrap();
        let v = potential_to_value(&w);
        assert_eq!(v.to_string(), r#"[["3/2",["a","c","b"]]]"#);
        assert_eq!(parse_potential(q.clone(), &v.to_string(), DEFAULT_TRUNC_DEGREE).unwrap(), w);
        assert!(matches!(
            parse_potential(q, r#"[["x", ["c", "b", "a"]]]"#, DEFAULT_TRUNC_DEGREE),
            Err(IoError::BadCoefficient(_))
        ));
    }

    #[test]
    fn representation_round_trip() {
        let q = parse_quiver(r#"{"vertices": 2, "arrows": [[1, 2, "a"]]}"#).unwrap();
        let m = parse_representation(&q, r#"{"dims": [1, 2], "maps": {"a": [[1, 0]]}}"#).unwrap();
        assert_eq!(m.map(0).to_rows(), vec![vec![1, 0]]);
        let back = parse_representation(&q, &representation_to_value(&q, &m).to_string()).unwrap();
        assert_eq!(back, m);
        assert!(matches!(
            parse_representation(&q, r#"{"dims": [1, 2], "maps": {"a": [[1], [0]]}}"#),
            Err(IoError::Shape(_))
        ));
        let zero = parse_representation(&q, r#"{"dims": [0, 1]}"#).unwrap();
        assert_eq!(zero.map(0).rows(), 0);
    }

    #[test]
    fn ses_round_trip() {
        for s in a3_ses_data() {
            let text = ses_to_value(&s).to_string();
            assert_eq!(parse_ses(s.quiver.clone(), &text).unwrap(), s);
        }
    }

    #[test]
    fn char_input() {
        let q = parse_quiver(r#"{"vertices": 2, "arrows": [[1, 2, "a"]]}"#).unwrap();
        let c = parse_char_input(&q, r#"{"module": {"dims": [1, 0]}, "g": [-1, 1]}"#).unwrap();
        assert_eq!(c.g, GVector(vec![-1, 1]));
        assert_eq!(c.module.dims(), &[1, 0]);
    }
}
