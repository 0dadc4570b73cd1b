//! Quivers, B-matrices and the three-step quiver mutation.
//!
//! Vertices are numbered `1..=n`. Arrows are kept sorted by label, so an
//! [`ArrowId`] order is the label order used everywhere for canonical forms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// 1-based vertex number.
pub type Vertex = usize;

/// Index into [`Quiver::arrows`].
pub type ArrowId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("arrow {label:?} has endpoint {vertex} outside 1..={n}")]
    VertexOutOfRange { label: String, vertex: usize, n: usize },
    #[error("vertex {vertex} outside 1..={n}")]
    NoSuchVertex { vertex: usize, n: usize },
    #[error("duplicate arrow label {0:?}")]
    DuplicateLabel(String),
    #[error("empty arrow label")]
    EmptyLabel,
    #[error("loop at vertex {0}")]
    LoopPresent(Vertex),
    #[error("vertex {0} lies on a 2-cycle; mutation is undefined there")]
    TwoCycleAtVertex(Vertex),
    #[error("2-cycle between vertices {0} and {1}")]
    TwoCyclePresent(Vertex, Vertex),
    #[error("unknown arrow {0:?}")]
    UnknownArrow(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arrow {
    pub source: Vertex,
    pub target: Vertex,
    pub label: String,
}

impl Arrow {
    pub fn new(source: Vertex, target: Vertex, label: impl Into<String>) -> Self {
        Self { source, target, label: label.into() }
    }

    pub fn is_loop(&self) -> bool {
        self.source == self.target
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    n: usize,
    arrows: Vec<Arrow>,
}

impl Quiver {
    /// Loop-free quiver. Arrows are re-sorted by label.
    pub fn new(n: usize, arrows: Vec<Arrow>) -> Result<Self, QuiverError> {
        let q = Self::with_loops(n, arrows)?;
        if let Some(a) = q.arrows.iter().find(|a| a.is_loop()) {
            return Err(QuiverError::LoopPresent(a.source));
        }
        Ok(q)
    }

    /// Like [`Quiver::new`] but permits loops (used for Jacobian algebras of
    /// arbitrary quivers; cluster operations reject them).
    pub fn with_loops(n: usize, mut arrows: Vec<Arrow>) -> Result<Self, QuiverError> {
        let mut seen = BTreeSet::new();
        for a in &arrows {
            if a.label.is_empty() {
                return Err(QuiverError::EmptyLabel);
            }
            for v in [a.source, a.target] {
                if v == 0 || v > n {
                    return Err(QuiverError::VertexOutOfRange { label: a.label.clone(), vertex: v, n });
                }
            }
            if !seen.insert(a.label.as_str()) {
                return Err(QuiverError::DuplicateLabel(a.label.clone()));
            }
        }
        arrows.sort_by(|a, b| a.label.cmp(&b.label));
        Ok(Self { n, arrows })
    }

    /// Convenience constructor from `(source, target, label)` triples.
    pub fn from_triples(n: usize, triples: &[(Vertex, Vertex, &str)]) -> Result<Self, QuiverError> {
        Self::new(n, triples.iter().map(|&(s, t, l)| Arrow::new(s, t, l)).collect())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, id: ArrowId) -> &Arrow {
        &self.arrows[id]
    }

    pub fn arrow_id(&self, label: &str) -> Option<ArrowId> {
        self.arrows.binary_search_by(|a| a.label.as_str().cmp(label)).ok()
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<(), QuiverError> {
        if v == 0 || v > self.n {
            Err(QuiverError::NoSuchVertex { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn count(&self, s: Vertex, t: Vertex) -> usize {
        self.arrows.iter().filter(|a| a.source == s && a.target == t).count()
    }

    pub fn has_loops(&self) -> bool {
        self.arrows.iter().any(Arrow::is_loop)
    }

    pub fn on_two_cycle(&self, v: Vertex) -> bool {
        self.arrows
            .iter()
            .filter(|a| a.source == v && !a.is_loop())
            .any(|a| self.count(a.target, v) > 0)
    }

    pub fn first_two_cycle(&self) -> Option<(Vertex, Vertex)> {
        self.arrows
            .iter()
            .filter(|a| !a.is_loop() && a.source < a.target)
            .find(|a| self.count(a.target, a.source) > 0)
            .map(|a| (a.source, a.target))
    }

    /// Ids of arrows ending at `v`, in label order.
    pub fn incoming(&self, v: Vertex) -> Vec<ArrowId> {
        (0..self.arrows.len()).filter(|&i| self.arrows[i].target == v).collect()
    }

    /// Ids of arrows starting at `v`, in label order.
    pub fn outgoing(&self, v: Vertex) -> Vec<ArrowId> {
        (0..self.arrows.len()).filter(|&i| self.arrows[i].source == v).collect()
    }

    /// Checks the precondition shared by quiver, QP and seed mutation.
    pub fn check_mutable_at(&self, v: Vertex) -> Result<(), QuiverError> {
        self.check_vertex(v)?;
        if let Some(a) = self.arrows.iter().find(|a| a.is_loop()) {
            return Err(QuiverError::LoopPresent(a.source));
        }
        if self.on_two_cycle(v) {
            return Err(QuiverError::TwoCycleAtVertex(v));
        }
        Ok(())
    }

    /// Quiver with the same vertices and every arrow reversed.
    pub fn opposite(&self) -> Self {
        Self {
            n: self.n,
            arrows: self.arrows.iter().map(|a| Arrow::new(a.target, a.source, a.label.clone())).collect(),
        }
    }

    /// Underlying B-matrix; requires no loops and no 2-cycles.
    pub fn b_matrix(&self) -> Result<BMatrix, QuiverError> {
        if let Some(a) = self.arrows.iter().find(|a| a.is_loop()) {
            return Err(QuiverError::LoopPresent(a.source));
        }
        if let Some((i, j)) = self.first_two_cycle() {
            return Err(QuiverError::TwoCyclePresent(i, j));
        }
        Ok(self.signed_counts())
    }

    /// `#{i -> j} - #{j -> i}` ignoring loops, without validating 2-cycles.
    pub fn signed_counts(&self) -> BMatrix {
        let mut b = BMatrix::zero(self.n);
        for a in self.arrows.iter().filter(|a| !a.is_loop()) {
            b.add(a.source, a.target, 1);
            b.add(a.target, a.source, -1);
        }
        b
    }

    /// Quiver mutation at `i`.
    pub fn mutate(&self, i: Vertex) -> Result<Self, QuiverError> {
        self.check_mutable_at(i)?;
        let pre = premutation_arrows(self, i);
        let mut arrows = pre.arrows;
        cancel_two_cycles(&mut arrows);
        Ok(Self::new(self.n, arrows).expect("mutation preserves quiver validity"))
    }

    pub fn mutate_sequence(&self, seq: &[Vertex]) -> Result<Self, QuiverError> {
        seq.iter().try_fold(self.clone(), |q, &i| q.mutate(i))
    }
}

impl fmt::Display for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} vertices;", self.n)?;
        for a in &self.arrows {
            write!(f, " {}: {}->{}", a.label, a.source, a.target)?;
        }
        Ok(())
    }
}

/// `a* <-> a` on labels.
pub fn star_label(label: &str) -> String {
    match label.strip_suffix('*') {
        Some(base) if !base.is_empty() => base.to_string(),
        _ => format!("{label}*"),
    }
}

/// Label of the composite arrow replacing the path `b after a`.
pub fn composite_label(outgoing: &str, incoming: &str) -> String {
    format!("[{outgoing}{incoming}]")
}

/// Arrows of the premutated quiver (steps 1 and 2), with bookkeeping maps
/// from old arrows to new labels.
pub(crate) struct Premutation {
    pub arrows: Vec<Arrow>,
    /// old arrow id -> label in the new quiver (unchanged or starred)
    pub renamed: Vec<String>,
    /// (incoming id, outgoing id) -> composite label
    pub composites: BTreeMap<(ArrowId, ArrowId), String>,
}

pub(crate) fn premutation_arrows(q: &Quiver, i: Vertex) -> Premutation {
    let mut used: BTreeSet<String> = BTreeSet::new();
    let fresh = |base: String, used: &mut BTreeSet<String>| {
        let mut l = base;
        while used.contains(&l) {
            l.push('\'');
        }
        used.insert(l.clone());
        l
    };
    let mut arrows = Vec::new();
    let mut renamed = vec![String::new(); q.arrows.len()];
    // untouched arrows keep their labels and are reserved first
    for (id, a) in q.arrows.iter().enumerate() {
        if a.source != i && a.target != i {
            used.insert(a.label.clone());
            renamed[id] = a.label.clone();
            arrows.push(a.clone());
        }
    }
    for (id, a) in q.arrows.iter().enumerate() {
        if a.source == i || a.target == i {
            let l = fresh(star_label(&a.label), &mut used);
            renamed[id] = l.clone();
            arrows.push(Arrow::new(a.target, a.source, l));
        }
    }
    let mut composites = BTreeMap::new();
    for a in q.incoming(i) {
        for b in q.outgoing(i) {
            let (ia, ob) = (&q.arrows[a], &q.arrows[b]);
            let l = fresh(composite_label(&ob.label, &ia.label), &mut used);
            arrows.push(Arrow::new(ia.source, ob.target, l.clone()));
            composites.insert((a, b), l);
        }
    }
    Premutation { arrows, renamed, composites }
}

/// Step 3: per unordered vertex pair delete `min(#forward, #backward)`
/// opposing arrows, lowest labels first.
fn cancel_two_cycles(arrows: &mut Vec<Arrow>) {
    let mut by_pair: BTreeMap<(Vertex, Vertex), Vec<usize>> = BTreeMap::new();
    for (k, a) in arrows.iter().enumerate() {
        by_pair.entry((a.source, a.target)).or_default().push(k);
    }
    let mut doomed = BTreeSet::new();
    for (&(s, t), fwd) in &by_pair {
        if s >= t {
            continue;
        }
        let Some(bwd) = by_pair.get(&(t, s)) else { continue };
        let m = fwd.len().min(bwd.len());
        let mut f: Vec<usize> = fwd.clone();
        let mut b: Vec<usize> = bwd.clone();
        f.sort_by(|x, y| arrows[*x].label.cmp(&arrows[*y].label));
        b.sort_by(|x, y| arrows[*x].label.cmp(&arrows[*y].label));
        doomed.extend(f.into_iter().take(m));
        doomed.extend(b.into_iter().take(m));
    }
    let mut k = 0;
    arrows.retain(|_| {
        let keep = !doomed.contains(&k);
        k += 1;
        keep
    });
}

/// Skew-symmetric integer exchange matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl BMatrix {
    pub fn zero(n: usize) -> Self {
        Self { n, entries: vec![0; n * n] }
    }

    /// Builds from rows; `None` unless square and skew-symmetric.
    pub fn from_rows(rows: &[Vec<i64>]) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        let b = Self { n, entries: rows.iter().flatten().copied().collect() };
        b.is_skew_symmetric().then_some(b)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Entry `b_ij` with 1-based indices.
    pub fn get(&self, i: Vertex, j: Vertex) -> i64 {
        self.entries[(i - 1) * self.n + (j - 1)]
    }

    fn set(&mut self, i: Vertex, j: Vertex, v: i64) {
        self.entries[(i - 1) * self.n + (j - 1)] = v;
    }

    fn add(&mut self, i: Vertex, j: Vertex, v: i64) {
        self.entries[(i - 1) * self.n + (j - 1)] += v;
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.n.max(1)).take(self.n).map(<[i64]>::to_vec).collect()
    }

    pub fn is_skew_symmetric(&self) -> bool {
        (1..=self.n).all(|i| (1..=self.n).all(|j| self.get(i, j) == -self.get(j, i)))
    }

    /// Matrix mutation: `b'_ij = -b_ij` if `k` is `i` or `j`, otherwise
    /// `b_ij + sgn(b_ik) max(b_ik b_kj, 0)`.
    pub fn mutate(&self, k: Vertex) -> Self {
        assert!(k >= 1 && k <= self.n, "vertex {k} out of range");
        let mut out = self.clone();
        for i in 1..=self.n {
            for j in 1..=self.n {
                let v = if i == k || j == k {
                    -self.get(i, j)
                } else {
                    let (bik, bkj) = (self.get(i, k), self.get(k, j));
                    self.get(i, j) + bik.signum() * (bik * bkj).max(0)
                };
                out.set(i, j, v);
            }
        }
        out
    }

    /// `B' = P^T B P` for the permutation sending new index `r` to old
    /// index `perm[r]` (both 1-based).
    pub fn permuted(&self, perm: &[Vertex]) -> Self {
        let mut out = Self::zero(self.n);
        for r in 1..=self.n {
            for c in 1..=self.n {
                out.set(r, c, self.get(perm[r - 1], perm[c - 1]));
            }
        }
        out
    }

    /// `B e` for an integer vector `e`.
    pub fn apply(&self, e: &[i64]) -> Vec<i64> {
        (1..=self.n).map(|i| (1..=self.n).map(|j| self.get(i, j) * e[j - 1]).sum()).collect()
    }

    /// The quiver with `b_ij` arrows `i -> j` for positive entries, labelled
    /// `a{i}_{j}_{k}`.
    pub fn to_quiver(&self) -> Quiver {
        let mut arrows = Vec::new();
        for i in 1..=self.n {
            for j in 1..=self.n {
                for k in 0..self.get(i, j).max(0) {
                    arrows.push(Arrow::new(i, j, format!("a{i}_{j}_{k}")));
                }
            }
        }
        Quiver::new(self.n, arrows).expect("skew-symmetric matrix gives a valid quiver")
    }
}

impl fmt::Display for BMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| format!("[{}]", r.iter().map(i64::to_string).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}
