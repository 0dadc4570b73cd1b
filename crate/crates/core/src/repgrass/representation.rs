use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::linalg::{IntMatrix, QMatrix, RationalSpan};
use crate::potential::QP;
use crate::quiver::{ArrowId, Quiver, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("expected {expected} dimensions, got {got}")]
    DimsLength { expected: usize, got: usize },
    #[error("expected {expected} arrow maps, got {got}")]
    MapCount { expected: usize, got: usize },
    #[error("matrix for arrow {arrow:?} has shape {got:?}, expected {expected:?}")]
    Shape { arrow: String, expected: (usize, usize), got: (usize, usize) },
    #[error("unknown arrow {0:?}")]
    UnknownArrow(String),
    #[error("relation from arrow {0:?} does not hold")]
    RelationViolation(String),
    #[error("arrows do not act nilpotently")]
    NotNilpotent,
    #[error("operation expects a {expected:?} representation")]
    WrongSide { expected: Side },
    #[error("dimension vectors have different lengths")]
    LengthMismatch,
}

/// Which way the arrow matrices point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// Representation of `Q^op` (a right module): the matrix of `a: i -> j`
    /// maps the vertex-`j` space to the vertex-`i` space. This is the file
    /// format convention and the module side of the cluster character.
    Opposite,
    /// Representation of `Q` (a left module): `a: i -> j` maps `V_i -> V_j`.
    Forward,
}

/// Integer matrices per arrow over a dimension vector, interpreted on the
/// given [`Side`]. Arrow order is the quiver's label order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Representation {
    dims: Vec<usize>,
    maps: Vec<IntMatrix>,
    side: Side,
}

/// One arrow's action as a linear map `V_from -> V_to`.
pub struct Action<'a> {
    pub arrow: ArrowId,
    pub from: Vertex,
    pub to: Vertex,
    pub matrix: &'a IntMatrix,
}

impl Representation {
    pub fn new(q: &Quiver, dims: Vec<usize>, maps: Vec<IntMatrix>, side: Side) -> Result<Self, RepError> {
        if dims.len() != q.vertex_count() {
            return Err(RepError::DimsLength { expected: q.vertex_count(), got: dims.len() });
        }
        if maps.len() != q.arrows().len() {
            return Err(RepError::MapCount { expected: q.arrows().len(), got: maps.len() });
        }
        let rep = Self { dims, maps, side };
        for a in 0..q.arrows().len() {
            let (from, to) = rep.endpoints(q, a);
            let expected = (rep.dims[to - 1], rep.dims[from - 1]);
            let got = (rep.maps[a].rows(), rep.maps[a].cols());
            if expected != got {
                return Err(RepError::Shape { arrow: q.arrow(a).label.clone(), expected, got });
            }
        }
        Ok(rep)
    }

    /// Builds from `(label, matrix)` pairs; unlisted arrows act by zero.
    pub fn from_labelled(
        q: &Quiver,
        dims: Vec<usize>,
        maps: &[(&str, IntMatrix)],
        side: Side,
    ) -> Result<Self, RepError> {
        if dims.len() != q.vertex_count() {
            return Err(RepError::DimsLength { expected: q.vertex_count(), got: dims.len() });
        }
        let mut all: Vec<Option<IntMatrix>> = vec![None; q.arrows().len()];
        for (l, m) in maps {
            let a = q.arrow_id(l).ok_or_else(|| RepError::UnknownArrow(l.to_string()))?;
            all[a] = Some(m.clone());
        }
        let full = all
            .into_iter()
            .enumerate()
            .map(|(a, m)| {
                m.unwrap_or_else(|| {
                    let arr = q.arrow(a);
                    let (from, to) = match side {
                        Side::Opposite => (arr.target, arr.source),
                        Side::Forward => (arr.source, arr.target),
                    };
                    IntMatrix::zeros(dims[to - 1], dims[from - 1])
                })
            })
            .collect();
        Self::new(q, dims, full, side)
    }

    pub fn zero(q: &Quiver, side: Side) -> Self {
        Self::simple_like(q, vec![0; q.vertex_count()], side)
    }

    /// Simple module at `v`.
    pub fn simple(q: &Quiver, v: Vertex, side: Side) -> Self {
        let mut dims = vec![0; q.vertex_count()];
        dims[v - 1] = 1;
        Self::simple_like(q, dims, side)
    }

    /// Semisimple representation with the given dimension vector.
    pub fn simple_like(q: &Quiver, dims: Vec<usize>, side: Side) -> Self {
        Self::from_labelled(q, dims, &[], side).expect("zero maps always fit")
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn map(&self, a: ArrowId) -> &IntMatrix {
        &self.maps[a]
    }

    pub fn maps(&self) -> &[IntMatrix] {
        &self.maps
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    pub fn max_abs_entry(&self) -> u64 {
        self.maps.iter().map(IntMatrix::max_abs).max().unwrap_or(0)
    }

    /// `(from, to)` of the linear map attached to arrow `a`.
    pub fn endpoints(&self, q: &Quiver, a: ArrowId) -> (Vertex, Vertex) {
        let arr = q.arrow(a);
        match self.side {
            Side::Opposite => (arr.target, arr.source),
            Side::Forward => (arr.source, arr.target),
        }
    }

    pub fn actions<'a>(&'a self, q: &Quiver) -> Vec<Action<'a>> {
        (0..self.maps.len())
            .map(|a| {
                let (from, to) = self.endpoints(q, a);
                Action { arrow: a, from, to, matrix: &self.maps[a] }
            })
            .collect()
    }

    /// Same dimension vector, transposed matrices, opposite side.
    pub fn reflected(&self) -> Self {
        Self {
            dims: self.dims.clone(),
            maps: self.maps.iter().map(IntMatrix::transpose).collect(),
            side: match self.side {
                Side::Opposite => Side::Forward,
                Side::Forward => Side::Opposite,
            },
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self, RepError> {
        if self.side != other.side {
            return Err(RepError::WrongSide { expected: self.side });
        }
        if self.dims.len() != other.dims.len() || self.maps.len() != other.maps.len() {
            return Err(RepError::LengthMismatch);
        }
        Ok(Self {
            dims: self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect(),
            maps: self.maps.iter().zip(&other.maps).map(|(a, b)| a.direct_sum(b)).collect(),
            side: self.side,
        })
    }

    /// Matrix of a path `w_0 w_1 ... w_k` (display order) acting on the
    /// forward view, `V_source -> V_target`.
    pub(crate) fn forward_path_matrix(&self, q: &Quiver, word: &[ArrowId], source: Vertex) -> QMatrix {
        let fwd = match self.side {
            Side::Forward => std::borrow::Cow::Borrowed(self),
            Side::Opposite => std::borrow::Cow::Owned(self.reflected()),
        };
        let mut m = QMatrix::identity(self.dims[source - 1]);
        for &a in word.iter().rev() {
            m = fwd.maps[a].to_rational().mul(&m);
        }
        let _ = q;
        m
    }

    /// Checks nilpotency of the arrow action and every `∂_a W = 0`.
    pub fn check_relations(&self, qp: &QP) -> Result<(), RepError> {
        let q = qp.quiver();
        let total = self.total_dim();
        if total == 0 {
            return Ok(());
        }
        if !self.is_nilpotent(q) {
            return Err(RepError::NotNilpotent);
        }
        for (a, rel) in qp.relations().iter().enumerate() {
            let mut acc: Option<QMatrix> = None;
            for (p, c) in rel.terms() {
                // paths of length >= total act by zero on a nilpotent module
                if p.degree() >= total.max(1) {
                    continue;
                }
                let m = self.forward_path_matrix(q, p.word(), p.source());
                let mut scaled = QMatrix::zeros(m.rows(), m.cols());
                for r in 0..m.rows() {
                    for col in 0..m.cols() {
                        scaled.set(r, col, m.get(r, col) * c);
                    }
                }
                acc = Some(match acc {
                    None => scaled,
                    Some(prev) => {
                        let mut s = prev;
                        for r in 0..s.rows() {
                            for col in 0..s.cols() {
                                let v = s.get(r, col) + scaled.get(r, col);
                                s.set(r, col, v);
                            }
                        }
                        s
                    }
                });
            }
            if let Some(m) = acc {
                if !m.is_zero() {
                    return Err(RepError::RelationViolation(q.arrow(a).label.clone()));
                }
            }
        }
        Ok(())
    }

    /// True when every product of `total_dim` arrow maps vanishes.
    pub fn is_nilpotent(&self, q: &Quiver) -> bool {
        let n = self.dims.len();
        let mut layer: Vec<Vec<Vec<BigRational>>> = (0..n)
            .map(|v| {
                (0..self.dims[v])
                    .map(|k| {
                        let mut e = vec![BigRational::zero(); self.dims[v]];
                        e[k] = BigRational::from_integer(1.into());
                        e
                    })
                    .collect()
            })
            .collect();
        for _ in 0..=self.total_dim() {
            if layer.iter().all(Vec::is_empty) {
                return true;
            }
            let mut spans: Vec<RationalSpan> = (0..n).map(|v| RationalSpan::new(self.dims[v])).collect();
            let mut next: Vec<Vec<Vec<BigRational>>> = vec![Vec::new(); n];
            for act in self.actions(q) {
                let m = act.matrix.to_rational();
                for v in &layer[act.from - 1] {
                    let img = m.apply(v);
                    if spans[act.to - 1].insert(&img) {
                        next[act.to - 1].push(img);
                    }
                }
            }
            layer = next;
        }
        layer.iter().all(Vec::is_empty)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational;
    use crate::potential::{Potential, DEFAULT_TRUNC_DEGREE};
    use std::sync::Arc;

    #[test]
    fn shapes_follow_side() {
        let q = Quiver::from_triples(2, &[(1, 2, "a")]).unwrap();
        let m = IntMatrix::from_rows(1, 2, &[vec![1, 0]]).unwrap();
        // Q^op: a: 1 -> 2 maps V_2 (dim 2) to V_1 (dim 1)
        assert!(Representation::new(&q, vec![1, 2], vec![m.clone()], Side::Opposite).is_ok());
        assert!(matches!(
            Representation::new(&q, vec![1, 2], vec![m], Side::Forward),
            Err(RepError::Shape { .. })
        ));
    }

    #[test]
    fn relations_of_three_cycle() {
        let q = Arc::new(Quiver::from_triples(3, &[(1, 2, "a"), (2, 3, "b"), (3, 1, "c")]).unwrap());
        let w = Potential::from_terms(q.clone(), &[(rational(1), vec!["c", "b", "a"])], DEFAULT_TRUNC_DEGREE).unwrap();
        let qp = QP::new(q.clone(), w).unwrap();
        let one = IntMatrix::identity(1);
        let ok = Representation::from_labelled(&q, vec![1, 1, 0], &[("a", one.clone())], Side::Opposite).unwrap();
        assert!(ok.check_relations(&qp).is_ok());
        let bad = Representation::from_labelled(&q, vec![1, 1, 1], &[("a", one.clone()), ("b", one.clone())], Side::Opposite)
            .unwrap();
        assert_eq!(bad.check_relations(&qp), Err(RepError::RelationViolation("c".into())));
        let cyclic =
            Representation::from_labelled(&q, vec![1, 1, 1], &[("a", one.clone()), ("b", one.clone()), ("c", one)], Side::Opposite)
                .unwrap();
        assert_eq!(cyclic.check_relations(&qp), Err(RepError::NotNilpotent));
    }

    #[test]
    fn reflection_is_involutive() {
        let q = Quiver::from_triples(2, &[(1, 2, "a")]).unwrap();
        let m = IntMatrix::from_rows(2, 1, &[vec![1], vec![3]]).unwrap();
        let r = Representation::new(&q, vec![2, 1], vec![m], Side::Opposite).unwrap();
        assert_eq!(r.reflected().side(), Side::Forward);
        assert_eq!(r.reflected().reflected(), r);
    }
}
