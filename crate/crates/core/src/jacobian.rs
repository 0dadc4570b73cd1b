//! Truncated Jacobian algebras and the module-theoretic data feeding the
//! cluster character: projectives, minimal presentations and g-vectors.
//!
//! The quotient `kQ / (I + m^{N+1})` is computed by Gaussian elimination on
//! the space of paths of length `<= N`, where `I` is spanned by products
//! `p (∂_a W) q`. Columns are ordered by degree so every relation's leading
//! term is its lowest-degree part; the surviving (non-pivot) paths form a
//! normal-form basis and their per-degree counts are the graded dimensions.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::{rational, QMatrix, RationalSpan};
use crate::potential::{Path, QP};
use crate::quiver::{ArrowId, Vertex};
use crate::repgrass::{RepError, Representation, Side};

/// Trailing zero degrees required before a truncation is called stable.
pub const DEFAULT_STABILITY_WINDOW: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JacobianError {
    #[error("Jacobian algebra not known to be finite-dimensional at truncation {0}")]
    NotFiniteDimensional(usize),
    #[error(transparent)]
    Representation(#[from] RepError),
    #[error("projective module at vertex {0} has non-integral structure constants")]
    NonIntegral(Vertex),
}

type SparseRow = BTreeMap<usize, BigRational>;

/// Integer vector in the basis of indecomposable projectives.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GVector(pub Vec<i64>);

impl GVector {
    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    /// Unit vector `δ_i` (1-based).
    pub fn unit(n: usize, i: Vertex) -> Self {
        let mut v = vec![0; n];
        v[i - 1] = 1;
        Self(v)
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }
}

impl fmt::Display for GVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Finiteness {
    Finite { dimension: usize },
    Unknown { truncation: usize },
}

/// Multiplicities of indecomposable projectives in `P1 -> P0 -> M -> 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub p1: Vec<usize>,
    pub p0: Vec<usize>,
}

impl Presentation {
    /// `[P1] - [P0]`.
    pub fn class(&self) -> GVector {
        GVector(self.p1.iter().zip(&self.p0).map(|(&a, &b)| a as i64 - b as i64).collect())
    }
}

#[derive(Clone, Debug)]
pub struct TruncatedJacobian {
    qp: QP,
    max_degree: usize,
    window: usize,
    paths: Vec<Path>,
    index: HashMap<Path, usize>,
    pivots: HashMap<usize, SparseRow>,
    dims: Vec<usize>,
    stabilized: bool,
}

impl TruncatedJacobian {
    pub fn new(qp: &QP, max_degree: usize) -> Self {
        Self::with_window(qp, max_degree, DEFAULT_STABILITY_WINDOW)
    }

    pub fn with_window(qp: &QP, max_degree: usize, window: usize) -> Self {
        Self::build(qp, max_degree.max(1), window, None)
    }

    /// Builds with the relation generators inserted in a permuted order;
    /// the resulting dimensions must not depend on the order.
    pub fn with_generator_order_seed(qp: &QP, max_degree: usize, seed: u64) -> Self {
        Self::build(qp, max_degree.max(1), DEFAULT_STABILITY_WINDOW, Some(seed))
    }

    fn build(qp: &QP, max_degree: usize, window: usize, shuffle: Option<u64>) -> Self {
        let q = qp.quiver().clone();
        let n = q.vertex_count();
        let mut by_degree: Vec<Vec<Path>> = vec![(1..=n).map(Path::idempotent).collect()];
        for d in 0..max_degree {
            let mut next = Vec::new();
            for p in &by_degree[d] {
                for a in q.outgoing(p.target()) {
                    next.push(Path::arrow(&q, a).compose(p).expect("composable by construction"));
                }
            }
            next.sort();
            by_degree.push(next);
        }
        let paths: Vec<Path> = by_degree.into_iter().flatten().collect();
        let index: HashMap<Path, usize> = paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let mut from: HashMap<Vertex, Vec<usize>> = HashMap::new();
        let mut into: HashMap<Vertex, Vec<usize>> = HashMap::new();
        for (i, p) in paths.iter().enumerate() {
            from.entry(p.source()).or_default().push(i);
            into.entry(p.target()).or_default().push(i);
        }

        let mut generators: Vec<SparseRow> = Vec::new();
        for rel in qp.relations() {
            let Some(low) = rel.min_degree() else { continue };
            if low > max_degree {
                continue;
            }
            let (src, tgt) = {
                let (p, _) = rel.terms().next().expect("nonzero relation");
                (p.source(), p.target())
            };
            let budget = max_degree - low;
            let lefts: Vec<&Path> =
                from.get(&tgt).into_iter().flatten().map(|&i| &paths[i]).filter(|p| p.degree() <= budget).collect();
            let rights: Vec<&Path> =
                into.get(&src).into_iter().flatten().map(|&i| &paths[i]).filter(|p| p.degree() <= budget).collect();
            for l in &lefts {
                for r in &rights {
                    if l.degree() + r.degree() > budget {
                        continue;
                    }
                    let mut row = SparseRow::new();
                    for (t, c) in rel.terms() {
                        let full = l.compose(t).and_then(|x| x.compose(r)).expect("endpoints match");
                        if full.degree() > max_degree {
                            continue;
                        }
                        let col = index[&full];
                        let e = row.entry(col).or_insert_with(BigRational::zero);
                        *e += c;
                    }
                    row.retain(|_, v| !v.is_zero());
                    if !row.is_empty() {
                        generators.push(row);
                    }
                }
            }
        }
        if let Some(seed) = shuffle {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for i in (1..generators.len()).rev() {
                let j = rng.gen_range(0..=i);
                generators.swap(i, j);
            }
        }

        let mut pivots: HashMap<usize, SparseRow> = HashMap::new();
        for g in generators {
            let reduced = reduce_row(g, &pivots);
            if let Some((&lead, lc)) = reduced.iter().next() {
                let inv = lc.recip();
                let row: SparseRow = reduced.into_iter().map(|(k, v)| (k, v * &inv)).collect();
                pivots.insert(lead, row);
            }
        }

        let mut dims = vec![0usize; max_degree + 1];
        for (i, p) in paths.iter().enumerate() {
            if !pivots.contains_key(&i) {
                dims[p.degree()] += 1;
            }
        }
        let stabilized = max_degree + 1 >= window && dims[max_degree + 1 - window..].iter().all(|&d| d == 0);
        Self { qp: qp.clone(), max_degree, window, paths, index, pivots, dims, stabilized }
    }

    pub fn qp(&self) -> &QP {
        &self.qp
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dimension(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_stabilized(&self) -> bool {
        self.stabilized
    }

    pub fn finiteness(&self) -> Finiteness {
        if self.stabilized {
            Finiteness::Finite { dimension: self.total_dimension() }
        } else {
            Finiteness::Unknown { truncation: self.max_degree }
        }
    }

    /// Normal-form paths of each degree.
    pub fn basis(&self) -> Vec<Vec<&Path>> {
        let mut out = vec![Vec::new(); self.max_degree + 1];
        for (i, p) in self.paths.iter().enumerate() {
            if !self.pivots.contains_key(&i) {
                out[p.degree()].push(p);
            }
        }
        out
    }

    fn basis_indices(&self, pred: impl Fn(&Path) -> bool) -> Vec<usize> {
        (0..self.paths.len()).filter(|i| !self.pivots.contains_key(i) && pred(&self.paths[*i])).collect()
    }

    /// Normal form of the path `p`, as coefficients on basis path indices.
    fn normal_form(&self, p: &Path) -> SparseRow {
        match self.index.get(p) {
            None => SparseRow::new(),
            Some(&i) => reduce_row(SparseRow::from([(i, BigRational::one())]), &self.pivots),
        }
    }

    /// Normal form of `a * p`.
    fn left_multiply(&self, a: ArrowId, p: usize) -> SparseRow {
        let q = self.qp.quiver();
        match crate::potential::Path::arrow(q, a).compose(&self.paths[p]) {
            Some(ap) => self.normal_form(&ap),
            None => SparseRow::new(),
        }
    }

    /// Product of two normal forms, reduced again.
    pub fn multiply_paths(&self, left: &Path, right: &Path) -> Vec<(Path, BigRational)> {
        match left.compose(right) {
            None => Vec::new(),
            Some(p) => self.normal_form(&p).into_iter().map(|(i, c)| (self.paths[i].clone(), c)).collect(),
        }
    }

    fn require_finite(&self) -> Result<(), JacobianError> {
        if self.stabilized {
            Ok(())
        } else {
            Err(JacobianError::NotFiniteDimensional(self.max_degree))
        }
    }

    /// Simple module at `i`, on the `Q^op` side.
    pub fn simple_module(&self, i: Vertex) -> Representation {
        Representation::simple(self.qp.quiver(), i, Side::Opposite)
    }

    /// Projective `J e_i` (paths starting at `i`, arrows acting by left
    /// multiplication) handed out on the `Q^op` side as its reflection, so
    /// that [`TruncatedJacobian::g_vector`] of the result is `-δ_i`.
    pub fn projective_module(&self, i: Vertex) -> Result<Representation, JacobianError> {
        Ok(self.forward_projective(i)?.reflected())
    }

    /// `J e_i` as a representation of `Q`.
    pub fn forward_projective(&self, i: Vertex) -> Result<Representation, JacobianError> {
        self.require_finite()?;
        let q = self.qp.quiver();
        let n = q.vertex_count();
        let cols: Vec<Vec<usize>> = (1..=n).map(|w| self.basis_indices(|p| p.source() == i && p.target() == w)).collect();
        let pos: Vec<HashMap<usize, usize>> =
            cols.iter().map(|c| c.iter().enumerate().map(|(k, &x)| (x, k)).collect()).collect();
        let dims: Vec<usize> = cols.iter().map(Vec::len).collect();
        let mut maps = Vec::new();
        for a in 0..q.arrows().len() {
            let arr = q.arrow(a);
            let (s, t) = (arr.source, arr.target);
            let mut m = QMatrix::zeros(dims[t - 1], dims[s - 1]);
            for (k, &p) in cols[s - 1].iter().enumerate() {
                for (col, c) in self.left_multiply(a, p) {
                    m.set(pos[t - 1][&col], k, c);
                }
            }
            maps.push(m.to_integer().ok_or(JacobianError::NonIntegral(i))?);
        }
        Ok(Representation::new(q, dims, maps, Side::Forward)?)
    }

    /// Minimal projective presentation of a representation of `Q` (left
    /// `J`-module): `P0` is the projective cover, `P1` covers its kernel.
    pub fn minimal_presentation(&self, m: &Representation) -> Result<Presentation, JacobianError> {
        self.presentation(m, None)
    }

    /// Same as [`TruncatedJacobian::minimal_presentation`] but with randomly
    /// chosen top generators; used as an independent cross-check.
    pub fn randomized_presentation(&self, m: &Representation, seed: u64) -> Result<Presentation, JacobianError> {
        self.presentation(m, Some(seed))
    }

    fn presentation(&self, m: &Representation, seed: Option<u64>) -> Result<Presentation, JacobianError> {
        self.require_finite()?;
        if m.side() != Side::Forward {
            return Err(RepError::WrongSide { expected: Side::Forward }.into());
        }
        let q = self.qp.quiver();
        let n = q.vertex_count();
        if m.dims().len() != n {
            return Err(RepError::DimsLength { expected: n, got: m.dims().len() }.into());
        }
        m.check_relations(&self.qp)?;
        let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
        let dims = m.dims();

        // top generators at each vertex
        let mut gens: Vec<(Vertex, Vec<BigRational>)> = Vec::new();
        let mut p0 = vec![0usize; n];
        for w in 1..=n {
            let d = dims[w - 1];
            let mut span = RationalSpan::new(d);
            for a in q.incoming(w) {
                let s = q.arrow(a).source;
                let mat = m.map(a).to_rational();
                for c in 0..dims[s - 1] {
                    span.insert(&mat.column(c));
                }
            }
            let mut k = 0;
            while span.rank() < d {
                let v: Vec<BigRational> = match rng.as_mut() {
                    Some(r) => (0..d).map(|_| rational(r.gen_range(-3..=3))).collect(),
                    None => {
                        let mut e = vec![BigRational::zero(); d];
                        e[k] = BigRational::one();
                        k += 1;
                        e
                    }
                };
                if span.insert(&v) {
                    gens.push((w, v));
                    p0[w - 1] += 1;
                }
            }
        }

        // P0 at vertex u: pairs (generator, basis path from its vertex to u)
        let mut p0_basis: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (g, (w, _)) in gens.iter().enumerate() {
            for p in self.basis_indices(|p| p.source() == *w) {
                p0_basis[self.paths[p].target() - 1].push((g, p));
            }
        }
        let pos: Vec<HashMap<(usize, usize), usize>> =
            p0_basis.iter().map(|b| b.iter().enumerate().map(|(k, &x)| (x, k)).collect()).collect();

        // kernel of P0 -> M per vertex
        let mut kernels: Vec<Vec<Vec<BigRational>>> = Vec::with_capacity(n);
        for u in 1..=n {
            let columns: Vec<Vec<BigRational>> = p0_basis[u - 1]
                .iter()
                .map(|&(g, p)| {
                    let path = &self.paths[p];
                    m.forward_path_matrix(q, path.word(), path.source()).apply(&gens[g].1)
                })
                .collect();
            let phi = QMatrix::from_columns(dims[u - 1], &columns);
            kernels.push(if columns.is_empty() { Vec::new() } else { phi.kernel() });
        }

        // radical of the kernel: sum of arrow images
        let mut p1 = vec![0usize; n];
        for u in 1..=n {
            let mut rad = RationalSpan::new(p0_basis[u - 1].len());
            for a in q.incoming(u) {
                let s = q.arrow(a).source;
                for v in &kernels[s - 1] {
                    let mut img = vec![BigRational::zero(); p0_basis[u - 1].len()];
                    for (k, x) in v.iter().enumerate() {
                        if x.is_zero() {
                            continue;
                        }
                        let (g, p) = p0_basis[s - 1][k];
                        for (col, c) in self.left_multiply(a, p) {
                            img[pos[u - 1][&(g, col)]] += x * c;
                        }
                    }
                    rad.insert(&img);
                }
            }
            p1[u - 1] = kernels[u - 1].len() - rad.rank();
        }
        Ok(Presentation { p1, p0 })
    }

    /// g-vector of a `Q^op` representation: `[P1] - [P0]` for the minimal
    /// presentation of its reflection.
    pub fn g_vector(&self, m: &Representation) -> Result<GVector, JacobianError> {
        if m.side() != Side::Opposite {
            return Err(RepError::WrongSide { expected: Side::Opposite }.into());
        }
        Ok(self.minimal_presentation(&m.reflected())?.class())
    }
}

fn reduce_row(mut v: SparseRow, pivots: &HashMap<usize, SparseRow>) -> SparseRow {
    let mut out = SparseRow::new();
    while let Some((c, x)) = v.pop_first() {
        match pivots.get(&c) {
            Some(row) => {
                for (k, y) in row.iter().skip(1) {
                    let e = v.entry(*k).or_insert_with(BigRational::zero);
                    *e -= &x * y;
                    if e.is_zero() {
                        v.remove(k);
                    }
                }
            }
            None => {
                out.insert(c, x);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::IntMatrix;
    use crate::potential::{Potential, DEFAULT_TRUNC_DEGREE};
    use crate::quiver::{Arrow, Quiver};
    use std::sync::Arc;

    fn a2() -> QP {
        QP::without_potential(Quiver::from_triples(2, &[(1, 2, "a")]).unwrap())
    }

    fn three_cycle() -> QP {
        let q = Arc::new(Quiver::from_triples(3, &[(1, 2, "a"), (2, 3, "b"), (3, 1, "c")]).unwrap());
        let w = Potential::from_terms(q.clone(), &[(rational(1), vec!["c", "b", "a"])], DEFAULT_TRUNC_DEGREE).unwrap();
        QP::new(q, w).unwrap()
    }

    #[test]
    fn dims_of_small_examples() {
        let j = TruncatedJacobian::new(&a2(), 10);
        assert_eq!(&j.dims()[..3], &[2, 1, 0]);
        assert_eq!(j.total_dimension(), 3);
        assert!(j.is_stabilized());

        let j = TruncatedJacobian::new(&three_cycle(), 10);
        assert_eq!(&j.dims()[..3], &[3, 3, 0]);
        assert_eq!(j.finiteness(), Finiteness::Finite { dimension: 6 });

        let lp = QP::without_potential(Quiver::with_loops(1, vec![Arrow::new(1, 1, "t")]).unwrap());
        let j = TruncatedJacobian::new(&lp, 10);
        assert!(j.dims().iter().all(|&d| d == 1));
        assert_eq!(j.finiteness(), Finiteness::Unknown { truncation: 10 });
    }

    #[test]
    fn normal_forms_are_closed_under_products() {
        let j = TruncatedJacobian::new(&three_cycle(), 8);
        let q = j.qp().quiver().clone();
        let a = Path::arrow(&q, q.arrow_id("a").unwrap());
        let b = Path::arrow(&q, q.arrow_id("b").unwrap());
        assert!(j.multiply_paths(&b, &a).is_empty());
        let e1 = Path::idempotent(1);
        assert_eq!(j.multiply_paths(&a, &e1), vec![(a.clone(), BigRational::one())]);
    }

    #[test]
    fn projectives() {
        let j = TruncatedJacobian::new(&a2(), 10);
        let p1 = j.projective_module(1).unwrap();
        assert_eq!(p1.dims(), &[1, 1]);
        assert_eq!(p1.map(0), &IntMatrix::identity(1));
        let s1 = j.simple_module(1);
        assert_eq!(s1.dims(), &[1, 0]);

        let j = TruncatedJacobian::new(&three_cycle(), 10);
        assert_eq!(j.projective_module(1).unwrap().dims(), &[1, 1, 0]);

        let lp = QP::without_potential(Quiver::with_loops(1, vec![Arrow::new(1, 1, "t")]).unwrap());
        let j = TruncatedJacobian::new(&lp, 10);
        assert_eq!(j.projective_module(1), Err(JacobianError::NotFiniteDimensional(10)));
    }

    #[test]
    fn presentations_over_a2() {
        let qp = a2();
        let j = TruncatedJacobian::new(&qp, 10);
        let q = qp.quiver();
        let s1 = Representation::simple(q, 1, Side::Forward);
        assert_eq!(j.minimal_presentation(&s1).unwrap(), Presentation { p1: vec![0, 1], p0: vec![1, 0] });
        let p1 = j.forward_projective(1).unwrap();
        assert_eq!(j.minimal_presentation(&p1).unwrap(), Presentation { p1: vec![0, 0], p0: vec![1, 0] });
        let s2 = Representation::simple(q, 2, Side::Forward);
        assert_eq!(j.minimal_presentation(&s2).unwrap(), Presentation { p1: vec![0, 0], p0: vec![0, 1] });
    }

    #[test]
    fn g_vectors_over_a2() {
        let qp = a2();
        let j = TruncatedJacobian::new(&qp, 10);
        let q = qp.quiver();
        assert_eq!(j.g_vector(&Representation::simple(q, 1, Side::Opposite)).unwrap(), GVector(vec![-1, 1]));
        assert_eq!(j.g_vector(&Representation::simple(q, 2, Side::Opposite)).unwrap(), GVector(vec![0, -1]));
        let m = Representation::from_labelled(q, vec![1, 1], &[("a", IntMatrix::identity(1))], Side::Opposite).unwrap();
        assert_eq!(j.g_vector(&m).unwrap(), GVector(vec![-1, 0]));
    }

    #[test]
    fn g_vectors_over_three_cycle() {
        let qp = three_cycle();
        let j = TruncatedJacobian::new(&qp, 10);
        let q = qp.quiver();
        // S_1: P_2 -> P_1 -> S_1 since the kernel {a} is simple
        assert_eq!(j.g_vector(&Representation::simple(q, 1, Side::Opposite)).unwrap(), GVector(vec![-1, 1, 0]));
        for i in 1..=3 {
            let g = j.g_vector(&j.projective_module(i).unwrap()).unwrap();
            assert_eq!(g, GVector(GVector::unit(3, i).0.iter().map(|x| -x).collect()));
        }
    }

    #[test]
    fn relation_violations_are_rejected() {
        let qp = three_cycle();
        let j = TruncatedJacobian::new(&qp, 10);
        let q = qp.quiver();
        let one = IntMatrix::identity(1);
        let bad = Representation::from_labelled(q, vec![1, 1, 1], &[("a", one.clone()), ("b", one)], Side::Forward)
            .unwrap();
        assert!(matches!(
            j.minimal_presentation(&bad),
            Err(JacobianError::Representation(RepError::RelationViolation(_)))
        ));
    }

    #[test]
    fn randomized_cover_agrees() {
        let qp = three_cycle();
        let j = TruncatedJacobian::new(&qp, 10);
        let q = qp.quiver();
        let one = IntMatrix::identity(1);
        let m = Representation::from_labelled(q, vec![1, 1, 0], &[("a", one)], Side::Forward).unwrap();
        let m2 = m.direct_sum(&Representation::simple(q, 3, Side::Forward)).unwrap();
        let det = j.minimal_presentation(&m2).unwrap();
        for seed in 0..5 {
            assert_eq!(j.randomized_presentation(&m2, seed).unwrap().class(), det.class());
        }
    }
}
