//! Degree-truncated series in the completed path algebra, potentials up to
//! cyclic equivalence, and mutation of quivers with potentials.
//!
//! Paths are words of arrows written left to right in *display order*: the
//! word `[c, b, a]` is the path `cba`, i.e. `a` first, then `b`, then `c`.
//! Products follow the same convention: `f * g` is "f after g".

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::format_rational;
use crate::quiver::{premutation_arrows, ArrowId, Quiver, QuiverError, Vertex};

pub const DEFAULT_TRUNC_DEGREE: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PotentialError {
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error("series live on different quivers")]
    QuiverMismatch,
    #[error("word {0:?} is not a composable path")]
    NotComposable(Vec<String>),
    #[error("word {0:?} is not an oriented cycle")]
    NotACycle(Vec<String>),
    #[error("potential term {0:?} has length below 2")]
    ShortCycle(Vec<String>),
    #[error("substitution for arrow {0:?} has wrong endpoints or a constant term")]
    EndpointMismatch(String),
    #[error("a potential term passes through vertex {0} in every rotation")]
    NotRepresentable(Vertex),
    #[error("reduction did not stabilize below degree {trunc}; partial result is inexact")]
    TruncationExhausted { trunc: usize, partial: Box<Reduction> },
    #[error("bad coefficient {0:?}")]
    BadCoefficient(String),
}

/// A path: possibly empty word (an idempotent `e_v`) with its endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    word: Vec<ArrowId>,
    source: Vertex,
    target: Vertex,
}

impl Path {
    pub fn idempotent(v: Vertex) -> Self {
        Self { word: Vec::new(), source: v, target: v }
    }

    pub fn arrow(q: &Quiver, a: ArrowId) -> Self {
        let arr = q.arrow(a);
        Self { word: vec![a], source: arr.source, target: arr.target }
    }

    /// Path from a display-order word; `None` if not composable or empty.
    pub fn from_word(q: &Quiver, word: Vec<ArrowId>) -> Option<Self> {
        let last = *word.last()?;
        for w in word.windows(2) {
            if q.arrow(w[1]).target != q.arrow(w[0]).source {
                return None;
            }
        }
        let target = q.arrow(word[0]).target;
        let source = q.arrow(last).source;
        Some(Self { word, source, target })
    }

    pub fn word(&self) -> &[ArrowId] {
        &self.word
    }

    pub fn source(&self) -> Vertex {
        self.source
    }

    pub fn target(&self) -> Vertex {
        self.target
    }

    pub fn degree(&self) -> usize {
        self.word.len()
    }

    pub fn is_cycle(&self) -> bool {
        !self.word.is_empty() && self.source == self.target
    }

    /// `self after other`, if composable.
    pub fn compose(&self, other: &Path) -> Option<Path> {
        if self.source != other.target {
            return None;
        }
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        Some(Path { word, source: other.source, target: self.target })
    }

    pub fn contains(&self, a: ArrowId) -> bool {
        self.word.contains(&a)
    }

    fn rotated(&self, q: &Quiver, k: usize) -> Path {
        let mut word = self.word[k..].to_vec();
        word.extend_from_slice(&self.word[..k]);
        Path::from_word(q, word).expect("rotation of a cycle is a cycle")
    }

    /// Lexicographically minimal rotation of a cycle word.
    fn canonical_rotation(&self, q: &Quiver) -> Path {
        let n = self.word.len();
        let best = (0..n)
            .min_by(|&i, &j| {
                let a = self.word[i..].iter().chain(&self.word[..i]);
                let b = self.word[j..].iter().chain(&self.word[..j]);
                a.cmp(b)
            })
            .unwrap_or(0);
        self.rotated(q, best)
    }

    pub fn labels(&self, q: &Quiver) -> Vec<String> {
        self.word.iter().map(|&a| q.arrow(a).label.clone()).collect()
    }

    pub fn display(&self, q: &Quiver) -> String {
        if self.word.is_empty() {
            format!("e{}", self.source)
        } else {
            self.labels(q).concat()
        }
    }
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.word.len(), &self.word, self.source).cmp(&(other.word.len(), &other.word, other.source))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Element of the completed path algebra known up to `trunc` degree.
#[derive(Clone, Debug, PartialEq)]
pub struct PathSeries {
    quiver: Arc<Quiver>,
    terms: BTreeMap<Path, BigRational>,
    trunc: usize,
    exact: bool,
}

impl PathSeries {
    pub fn zero(quiver: Arc<Quiver>, trunc: usize) -> Self {
        Self { quiver, terms: BTreeMap::new(), trunc, exact: true }
    }

    pub fn idempotent(quiver: Arc<Quiver>, v: Vertex, trunc: usize) -> Self {
        let mut s = Self::zero(quiver, trunc);
        s.terms.insert(Path::idempotent(v), BigRational::one());
        s
    }

    pub fn arrow(quiver: Arc<Quiver>, a: ArrowId, trunc: usize) -> Self {
        let mut s = Self::zero(quiver.clone(), trunc);
        s.add_term(Path::arrow(&quiver, a), BigRational::one());
        s
    }

    /// Single term from arrow labels in display order.
    pub fn monomial(
        quiver: Arc<Quiver>,
        coeff: BigRational,
        labels: &[&str],
        trunc: usize,
    ) -> Result<Self, PotentialError> {
        let path = path_from_labels(&quiver, labels)?;
        let mut s = Self::zero(quiver, trunc);
        s.add_term(path, coeff);
        Ok(s)
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn trunc_degree(&self) -> usize {
        self.trunc
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, p: &Path) -> BigRational {
        self.terms.get(p).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().map(Path::degree).min()
    }

    /// Adds a term, dropping it (and clearing `exact`) if it exceeds the
    /// truncation degree.
    pub fn add_term(&mut self, p: Path, c: BigRational) {
        if c.is_zero() {
            return;
        }
        if p.degree() > self.trunc {
            self.exact = false;
            return;
        }
        match self.terms.entry(p) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_same_quiver(&self, other: &Self) -> Result<(), PotentialError> {
        if Arc::ptr_eq(&self.quiver, &other.quiver) || self.quiver == other.quiver {
            Ok(())
        } else {
            Err(PotentialError::QuiverMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, PotentialError> {
        self.check_same_quiver(other)?;
        let mut out = Self::zero(self.quiver.clone(), self.trunc.min(other.trunc));
        out.exact = self.exact && other.exact;
        for (p, c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(p.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PotentialError> {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        let mut out = Self::zero(self.quiver.clone(), self.trunc);
        out.exact = self.exact;
        if !k.is_zero() {
            for (p, c) in &self.terms {
                out.terms.insert(p.clone(), c * k);
            }
        }
        out
    }

    /// `self * other`, meaning "self after other".
    pub fn mul(&self, other: &Self) -> Result<Self, PotentialError> {
        self.check_same_quiver(other)?;
        let trunc = self.trunc.min(other.trunc);
        let mut acc: BTreeMap<Path, BigRational> = BTreeMap::new();
        let mut exact = self.exact && other.exact;
        for (p, x) in &self.terms {
            for (r, y) in &other.terms {
                if let Some(pr) = p.compose(r) {
                    *acc.entry(pr).or_insert_with(BigRational::zero) += x * y;
                }
            }
        }
        let mut out = Self::zero(self.quiver.clone(), trunc);
        for (p, c) in acc {
            if c.is_zero() {
                continue;
            }
            if p.degree() > trunc {
                exact = false;
            } else {
                out.terms.insert(p, c);
            }
        }
        out.exact = exact;
        Ok(out)
    }

    /// Image under the continuous algebra map fixing idempotents and sending
    /// each arrow to its image in `sub` (arrows not listed map to themselves).
    pub fn substitute(&self, sub: &Substitution) -> Result<Self, PotentialError> {
        if !Arc::ptr_eq(&self.quiver, &sub.quiver) && *self.quiver != *sub.quiver {
            return Err(PotentialError::QuiverMismatch);
        }
        let mut out = Self::zero(self.quiver.clone(), self.trunc);
        out.exact = self.exact;
        for (p, c) in &self.terms {
            if p.word.is_empty() {
                out.add_term(p.clone(), c.clone());
                continue;
            }
            let mut prod: Option<PathSeries> = None;
            for &a in &p.word {
                let img = sub.image(a, self.trunc);
                prod = Some(match prod {
                    None => img,
                    Some(acc) => {
                        let mut m = acc.mul(&img)?;
                        m.trunc = self.trunc;
                        m
                    }
                });
            }
            let prod = prod.expect("nonempty word");
            out.exact &= prod.exact;
            for (q, d) in prod.terms {
                out.add_term(q, d * c);
            }
        }
        Ok(out)
    }

    fn with_trunc(mut self, trunc: usize) -> Self {
        if trunc < self.trunc {
            let before = self.terms.len();
            self.terms.retain(|p, _| p.degree() <= trunc);
            if self.terms.len() != before {
                self.exact = false;
            }
        }
        self.trunc = trunc;
        self
    }

    /// Re-expresses the series on another quiver through a label map; terms
    /// using arrows missing from `q` are dropped.
    fn transport(&self, q: &Arc<Quiver>, id_map: &BTreeMap<ArrowId, ArrowId>) -> PathSeries {
        let mut out = PathSeries::zero(q.clone(), self.trunc);
        out.exact = self.exact;
        for (p, c) in &self.terms {
            if p.word.is_empty() {
                out.add_term(p.clone(), c.clone());
                continue;
            }
            let word: Option<Vec<ArrowId>> = p.word.iter().map(|a| id_map.get(a).copied()).collect();
            if let Some(word) = word {
                let np = Path::from_word(q, word).expect("transport preserves composability");
                out.add_term(np, c.clone());
            }
        }
        out
    }
}

impl fmt::Display for PathSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (p, c) in &self.terms {
            let neg = c < &BigRational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            if !mag.is_one() {
                write!(f, "{} ", format_rational(&mag))?;
            }
            write!(f, "{}", p.display(&self.quiver))?;
        }
        Ok(())
    }
}

fn path_from_labels(q: &Quiver, labels: &[&str]) -> Result<Path, PotentialError> {
    let word: Vec<ArrowId> = labels
        .iter()
        .map(|l| q.arrow_id(l).ok_or_else(|| QuiverError::UnknownArrow(l.to_string())))
        .collect::<Result<_, _>>()?;
    Path::from_word(q, word).ok_or_else(|| PotentialError::NotComposable(labels.iter().map(|s| s.to_string()).collect()))
}

/// Arrow substitution `a -> series`, the action of a right-equivalence.
#[derive(Clone, Debug, PartialEq)]
pub struct Substitution {
    quiver: Arc<Quiver>,
    images: BTreeMap<ArrowId, PathSeries>,
}

impl Substitution {
    pub fn identity(quiver: Arc<Quiver>) -> Self {
        Self { quiver, images: BTreeMap::new() }
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    /// Sets the image of `a`; the image must run parallel to `a` and have no
    /// constant term.
    pub fn insert(&mut self, a: ArrowId, image: PathSeries) -> Result<(), PotentialError> {
        let arr = self.quiver.arrow(a);
        let ok = image
            .terms()
            .all(|(p, _)| p.degree() >= 1 && p.source == arr.source && p.target == arr.target);
        if !ok {
            return Err(PotentialError::EndpointMismatch(arr.label.clone()));
        }
        self.images.insert(a, image);
        Ok(())
    }

    pub fn insert_label(&mut self, label: &str, image: PathSeries) -> Result<(), PotentialError> {
        let a = self
            .quiver
            .arrow_id(label)
            .ok_or_else(|| QuiverError::UnknownArrow(label.to_string()))?;
        self.insert(a, image)
    }

    pub fn image(&self, a: ArrowId, trunc: usize) -> PathSeries {
        match self.images.get(&a) {
            Some(s) => s.clone().with_trunc(trunc),
            None => PathSeries::arrow(self.quiver.clone(), a, trunc),
        }
    }

    pub fn images(&self) -> impl Iterator<Item = (&str, &PathSeries)> {
        self.images.iter().map(|(a, s)| (self.quiver.arrow(*a).label.as_str(), s))
    }

    /// `other ∘ self`: first apply `self`, then `other`.
    fn then(&self, other: &Substitution, trunc: usize) -> Result<Substitution, PotentialError> {
        let mut out = Substitution::identity(self.quiver.clone());
        for a in 0..self.quiver.arrows().len() {
            let img = self.image(a, trunc).substitute(other)?;
            if img != PathSeries::arrow(self.quiver.clone(), a, trunc) {
                out.images.insert(a, img);
            }
        }
        Ok(out)
    }
}

/// Linear combination of oriented cycles of length at least 2, each stored
/// in its lexicographically minimal rotation.
#[derive(Clone, Debug, PartialEq)]
pub struct Potential {
    series: PathSeries,
}

impl Potential {
    pub fn zero(quiver: Arc<Quiver>, trunc: usize) -> Self {
        Self { series: PathSeries::zero(quiver, trunc) }
    }

    /// Builds from `(coefficient, labels in display order)` terms.
    pub fn from_terms(
        quiver: Arc<Quiver>,
        terms: &[(BigRational, Vec<&str>)],
        trunc: usize,
    ) -> Result<Self, PotentialError> {
        let mut s = PathSeries::zero(quiver.clone(), trunc);
        for (c, labels) in terms {
            let p = path_from_labels(&quiver, labels)?;
            s.add_term(p, c.clone());
        }
        Self::from_series(s)
    }

    /// Canonicalizes every cycle of `series`; errors on non-cycles.
    pub fn from_series(series: PathSeries) -> Result<Self, PotentialError> {
        let q = series.quiver.clone();
        let mut out = PathSeries::zero(q.clone(), series.trunc);
        out.exact = series.exact;
        for (p, c) in series.terms {
            if !p.is_cycle() {
                return Err(PotentialError::NotACycle(p.labels(&q)));
            }
            if p.degree() < 2 {
                return Err(PotentialError::ShortCycle(p.labels(&q)));
            }
            out.add_term(p.canonical_rotation(&q), c);
        }
        Ok(Self { series: out })
    }

    pub fn series(&self) -> &PathSeries {
        &self.series
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.series.quiver
    }

    pub fn trunc_degree(&self) -> usize {
        self.series.trunc
    }

    pub fn is_exact(&self) -> bool {
        self.series.exact
    }

    pub fn is_zero(&self) -> bool {
        self.series.is_zero()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &BigRational)> {
        self.series.terms()
    }

    /// `(coefficient, labels)` list in canonical order.
    pub fn to_terms(&self) -> Vec<(BigRational, Vec<String>)> {
        let q = self.quiver();
        self.terms().map(|(p, c)| (c.clone(), p.labels(q))).collect()
    }

    pub fn add(&self, other: &Potential) -> Result<Potential, PotentialError> {
        Self::from_series(self.series.add(&other.series)?)
    }

    pub fn substitute(&self, sub: &Substitution) -> Result<Potential, PotentialError> {
        Self::from_series(self.series.substitute(sub)?)
    }

    /// Cyclic derivative `∂_a`: for each occurrence of `a` in a cycle, the
    /// rotation starting right after it with that occurrence deleted.
    pub fn cyclic_derivative(&self, label: &str) -> Result<PathSeries, PotentialError> {
        let q = self.quiver().clone();
        let a = q.arrow_id(label).ok_or_else(|| QuiverError::UnknownArrow(label.to_string()))?;
        Ok(self.derivative_by_id(a))
    }

    pub(crate) fn derivative_by_id(&self, a: ArrowId) -> PathSeries {
        let q = self.quiver().clone();
        let arr = q.arrow(a).clone();
        let mut out = PathSeries::zero(q.clone(), self.trunc_degree().saturating_sub(1));
        out.exact = self.is_exact();
        for (p, c) in self.terms() {
            for (k, &b) in p.word.iter().enumerate() {
                if b != a {
                    continue;
                }
                let mut word = p.word[k + 1..].to_vec();
                word.extend_from_slice(&p.word[..k]);
                let path = if word.is_empty() {
                    Path::idempotent(arr.target)
                } else {
                    Path::from_word(&q, word).expect("derivative of a cycle is a path")
                };
                out.add_term(path, c.clone());
            }
        }
        out
    }
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.series.fmt(f)
    }
}

/// Quiver with potential.
#[derive(Clone, Debug, PartialEq)]
pub struct QP {
    quiver: Arc<Quiver>,
    potential: Potential,
}

impl QP {
    pub fn new(quiver: Arc<Quiver>, potential: Potential) -> Result<Self, PotentialError> {
        if *potential.quiver() != quiver {
            return Err(PotentialError::QuiverMismatch);
        }
        let potential = Potential { series: PathSeries { quiver: quiver.clone(), ..potential.series } };
        Ok(Self { quiver, potential })
    }

    /// `(Q, 0)` with the default truncation degree.
    pub fn without_potential(quiver: Quiver) -> Self {
        let quiver = Arc::new(quiver);
        Self { potential: Potential::zero(quiver.clone(), DEFAULT_TRUNC_DEGREE), quiver }
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn trunc_degree(&self) -> usize {
        self.potential.trunc_degree()
    }

    /// Cyclic derivatives `∂_a W` for every arrow, in arrow order.
    pub fn relations(&self) -> Vec<PathSeries> {
        (0..self.quiver.arrows().len()).map(|a| self.potential.derivative_by_id(a)).collect()
    }

    /// Premutation at `i`: composite arrows, reversed arrows at `i`, and the
    /// potential `[W] + Σ a* b* [ba]`.
    pub fn premutate(&self, i: Vertex) -> Result<QP, PotentialError> {
        let q = &self.quiver;
        q.check_mutable_at(i)?;
        let pre = premutation_arrows(q, i);
        let composites = pre.composites.clone();
        let renamed = pre.renamed.clone();
        let nq = Arc::new(Quiver::new(q.vertex_count(), pre.arrows)?);
        let id = |l: &str| nq.arrow_id(l).expect("premutated label exists");
        let trunc = self.trunc_degree();
        let mut s = PathSeries::zero(nq.clone(), trunc);
        s.exact = self.potential.is_exact();

        for (p, c) in self.potential.terms() {
            // rotate so the cycle is not based at i
            let n = p.word.len();
            let k = (0..n)
                .find(|&k| q.arrow(p.word[(k + n - 1) % n]).source != i)
                .ok_or(PotentialError::NotRepresentable(i))?;
            let rot = p.rotated(q, k);
            let mut word = Vec::with_capacity(n);
            let mut j = 0;
            while j < n {
                let out_arrow = rot.word[j];
                if j + 1 < n && q.arrow(rot.word[j + 1]).target == i {
                    let in_arrow = rot.word[j + 1];
                    word.push(id(&composites[&(in_arrow, out_arrow)]));
                    j += 2;
                } else {
                    let arr = q.arrow(out_arrow);
                    if arr.source == i || arr.target == i {
                        return Err(PotentialError::NotRepresentable(i));
                    }
                    word.push(id(&renamed[out_arrow]));
                    j += 1;
                }
            }
            s.add_term(Path::from_word(&nq, word).expect("[W] is composable"), c.clone());
        }
        for (&(a, b), comp) in &composites {
            let word = vec![id(&renamed[a]), id(&renamed[b]), id(comp)];
            s.add_term(Path::from_word(&nq, word).expect("a* b* [ba] is a cycle"), BigRational::one());
        }
        QP::new(nq, Potential::from_series(s)?)
    }

    /// Splits off the trivial part. See [`Reduction`].
    pub fn reduce(&self) -> Result<Reduction, PotentialError> {
        reduce(self)
    }

    /// Mutation at `i`: the reduced part of the premutation.
    pub fn mutate(&self, i: Vertex) -> Result<QP, PotentialError> {
        Ok(self.premutate(i)?.reduce()?.reduced)
    }

    pub fn mutate_sequence(&self, seq: &[Vertex]) -> Result<QP, PotentialError> {
        seq.iter().try_fold(self.clone(), |qp, &i| qp.mutate(i))
    }

    /// Replays `seq`, checking the 2-cycle condition before each step.
    pub fn is_admissible(&self, seq: &[Vertex]) -> bool {
        let mut cur = self.clone();
        for &i in seq {
            if cur.quiver.check_mutable_at(i).is_err() {
                return false;
            }
            cur = match cur.premutate(i).and_then(|p| p.reduce()) {
                Ok(r) => r.reduced,
                Err(PotentialError::TruncationExhausted { partial, .. }) => partial.reduced,
                Err(_) => return false,
            };
        }
        true
    }

    /// Exhaustively mutates along every sequence up to `depth`, memoizing QPs
    /// up to arrow relabelling, and stops at the first depth with failures.
    pub fn probe_nondegeneracy(&self, depth: usize) -> NondegeneracyReport {
        let n = self.quiver.vertex_count();
        let mut seen: HashSet<QpKey> = HashSet::new();
        seen.insert(self.key());
        let mut frontier: Vec<(Vec<Vertex>, QP)> = vec![(Vec::new(), self.clone())];
        let mut explored = 1;
        let mut inexact = false;
        for d in 1..=depth {
            let mut next = Vec::new();
            let mut failures = Vec::new();
            for (seq, qp) in &frontier {
                for i in 1..=n {
                    let mut s = seq.clone();
                    s.push(i);
                    if qp.quiver.check_mutable_at(i).is_err() {
                        failures.push(s);
                        continue;
                    }
                    let m = match qp.premutate(i).and_then(|p| p.reduce()) {
                        Ok(r) => r.reduced,
                        Err(PotentialError::TruncationExhausted { partial, .. }) => {
                            inexact = true;
                            partial.reduced
                        }
                        Err(_) => {
                            failures.push(s);
                            continue;
                        }
                    };
                    if seen.insert(m.key()) {
                        explored += 1;
                        next.push((s, m));
                    }
                }
            }
            if !failures.is_empty() {
                return NondegeneracyReport { depth_checked: d, obstructions: failures, states_explored: explored, inexact };
            }
            frontier = next;
            if frontier.is_empty() {
                break;
            }
        }
        NondegeneracyReport { depth_checked: depth, obstructions: Vec::new(), states_explored: explored, inexact }
    }

    /// Relabelling-invariant memo key: arrows renamed by `(source, target,
    /// label rank)`, potential re-expressed and canonically rotated.
    fn key(&self) -> QpKey {
        let q = &self.quiver;
        let mut order: Vec<ArrowId> = (0..q.arrows().len()).collect();
        order.sort_by(|&x, &y| {
            let (a, b) = (q.arrow(x), q.arrow(y));
            (a.source, a.target, &a.label).cmp(&(b.source, b.target, &b.label))
        });
        let mut rank = vec![0usize; order.len()];
        for (r, &a) in order.iter().enumerate() {
            rank[a] = r;
        }
        let arrows: Vec<(Vertex, Vertex)> = order.iter().map(|&a| (q.arrow(a).source, q.arrow(a).target)).collect();
        let mut terms: Vec<(Vec<usize>, String)> = self
            .potential
            .terms()
            .map(|(p, c)| {
                let w: Vec<usize> = p.word.iter().map(|&a| rank[a]).collect();
                let n = w.len();
                let best = (0..n)
                    .map(|k| w[k..].iter().chain(&w[..k]).copied().collect::<Vec<_>>())
                    .min()
                    .unwrap_or_default();
                (best, format_rational(c))
            })
            .collect();
        terms.sort();
        QpKey { n: q.vertex_count(), arrows, terms }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct QpKey {
    n: usize,
    arrows: Vec<(Vertex, Vertex)>,
    terms: Vec<(Vec<usize>, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NondegeneracyReport {
    /// Deepest sequence length examined.
    pub depth_checked: usize,
    /// Failing sequences at the first failing depth; empty means no
    /// obstruction up to `depth_checked`.
    pub obstructions: Vec<Vec<Vertex>>,
    pub states_explored: usize,
    /// Some reduction along the way hit the truncation degree.
    pub inexact: bool,
}

impl NondegeneracyReport {
    pub fn no_obstruction(&self) -> bool {
        self.obstructions.is_empty()
    }
}

/// Output of reduction: `witness(W) = W_red + W_triv` up to the truncation
/// degree, with the trivial arrows forming disjoint quadratic pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct Reduction {
    pub reduced: QP,
    pub trivial: QP,
    /// Right-equivalence on the input quiver.
    pub witness: Substitution,
}

fn reduce(qp: &QP) -> Result<Reduction, PotentialError> {
    let q = qp.quiver.clone();
    let trunc = qp.trunc_degree();
    let mut w = qp.potential.clone();
    let mut witness = Substitution::identity(q.clone());
    let mut trivial_pairs: Vec<(ArrowId, ArrowId)> = Vec::new();
    let mut trivial: BTreeSet<ArrowId> = BTreeSet::new();
    let mut exhausted = false;

    loop {
        // smallest quadratic term whose arrows have not been split off
        let pick = w
            .terms()
            .filter(|(p, _)| p.degree() == 2 && !p.word.iter().any(|a| trivial.contains(a)))
            .map(|(p, c)| (p.word[0], p.word[1], c.clone()))
            .next();
        let Some((x, y, c)) = pick else { break };
        let mut apply = |w: &mut Potential, sub: Substitution, exhausted: &mut bool| -> Result<(), PotentialError> {
            let before = w.is_exact();
            *w = w.substitute(&sub)?;
            if before && !w.is_exact() {
                *exhausted = true;
            }
            witness = witness.then(&sub, trunc)?;
            Ok(())
        };

        let key = Path::from_word(&q, vec![x, y]).expect("quadratic cycle");
        let guard = 2 * (trunc + 2);
        let mut rounds = 0;
        loop {
            let bad_degree = w
                .terms()
                .filter(|(p, _)| **p != key && (p.contains(x) || p.contains(y)))
                .map(|(p, _)| p.degree())
                .min();
            let Some(d) = bad_degree else { break };
            rounds += 1;
            if rounds > guard {
                exhausted = true;
                break;
            }
            // x U terms: y -> y - U/c
            if let Some(u) = leftmost_rest(&w, &key, x, d) {
                let mut sub = Substitution::identity(q.clone());
                sub.insert(y, PathSeries::arrow(q.clone(), y, trunc).sub(&u.scale(&c.recip()))?)?;
                apply(&mut w, sub, &mut exhausted)?;
            }
            // y V terms: x -> x - V/c
            if let Some(v) = leftmost_rest(&w, &key, y, d) {
                let mut sub = Substitution::identity(q.clone());
                sub.insert(x, PathSeries::arrow(q.clone(), x, trunc).sub(&v.scale(&c.recip()))?)?;
                apply(&mut w, sub, &mut exhausted)?;
            }
        }
        if !c.is_one() {
            let mut sub = Substitution::identity(q.clone());
            sub.insert(x, PathSeries::arrow(q.clone(), x, trunc).scale(&c.recip()))?;
            apply(&mut w, sub, &mut exhausted)?;
        }
        trivial.insert(x);
        trivial.insert(y);
        trivial_pairs.push((x, y));
    }

    let n = q.vertex_count();
    let keep: Vec<ArrowId> = (0..q.arrows().len()).filter(|a| !trivial.contains(a)).collect();
    let red_q = Arc::new(Quiver::new(n, keep.iter().map(|&a| q.arrow(a).clone()).collect())?);
    let triv_q = Arc::new(Quiver::new(n, trivial.iter().map(|&a| q.arrow(a).clone()).collect())?);
    let to_red: BTreeMap<ArrowId, ArrowId> =
        keep.iter().map(|&a| (a, red_q.arrow_id(&q.arrow(a).label).unwrap())).collect();
    let to_triv: BTreeMap<ArrowId, ArrowId> =
        trivial.iter().map(|&a| (a, triv_q.arrow_id(&q.arrow(a).label).unwrap())).collect();

    let red_w = Potential::from_series(w.series.transport(&red_q, &to_red))?;
    let mut triv_s = PathSeries::zero(triv_q.clone(), trunc);
    for &(x, y) in &trivial_pairs {
        let p = Path::from_word(&triv_q, vec![to_triv[&x], to_triv[&y]]).expect("quadratic pair");
        triv_s.add_term(p, BigRational::one());
    }
    let result = Reduction {
        reduced: QP::new(red_q, red_w)?,
        trivial: QP::new(triv_q, Potential::from_series(triv_s)?)?,
        witness,
    };
    if exhausted {
        Err(PotentialError::TruncationExhausted { trunc, partial: Box::new(result) })
    } else {
        Ok(result)
    }
}

/// For terms of degree `d` (other than `key`) containing `letter`, rotate so
/// `letter` is leftmost and sum the remaining paths.
fn leftmost_rest(w: &Potential, key: &Path, letter: ArrowId, d: usize) -> Option<PathSeries> {
    let q = w.quiver().clone();
    let mut rest = PathSeries::zero(q.clone(), w.trunc_degree());
    for (p, c) in w.terms() {
        if p == key || p.degree() != d || !p.contains(letter) {
            continue;
        }
        let k = p.word.iter().position(|&a| a == letter).expect("contains letter");
        let rot = p.rotated(&q, k);
        let tail = Path::from_word(&q, rot.word[1..].to_vec()).expect("tail of a cycle");
        rest.add_term(tail, c.clone());
    }
    (!rest.is_zero()).then_some(rest)
}
