//! Seeds of coefficient-free cluster algebras, their mutation, and
//! breadth-first exploration of the exchange graph.

mod laurent;
mod poly;

pub use laurent::LaurentPoly;
pub use poly::{gcd, Poly, RationalFunction};

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_traits::One;
use thiserror::Error;

use crate::quiver::{Quiver, QuiverError, Vertex};

/// Default cap on the number of distinct seeds explored.
pub const DEFAULT_SEED_BUDGET: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeedError {
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error("cluster has {got} variables, quiver has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("cluster variable {0} is zero")]
    ZeroVariable(usize),
    #[error("exploration exceeded {0} seeds")]
    BudgetExceeded(usize),
    #[error("{0} is not a Laurent polynomial")]
    NotLaurent(String),
}

/// Quiver plus an ordered cluster; variable `k` sits at vertex `k + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seed {
    quiver: Quiver,
    cluster: Vec<RationalFunction>,
}

/// Seed up to simultaneous permutation of cluster and vertices: the cluster
/// sorted, and the B-matrix conjugated by the sorting permutation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalSeed {
    pub cluster: Vec<RationalFunction>,
    pub b_matrix: Vec<Vec<i64>>,
}

impl Seed {
    pub fn new(quiver: Quiver, cluster: Vec<RationalFunction>) -> Result<Self, SeedError> {
        quiver.b_matrix()?;
        if cluster.len() != quiver.vertex_count() {
            return Err(SeedError::LengthMismatch { expected: quiver.vertex_count(), got: cluster.len() });
        }
        if let Some(k) = cluster.iter().position(RationalFunction::is_zero) {
            return Err(SeedError::ZeroVariable(k + 1));
        }
        Ok(Self { quiver, cluster })
    }

    /// `(Q, (x_1, ..., x_n))`.
    pub fn initial(quiver: Quiver) -> Result<Self, SeedError> {
        let n = quiver.vertex_count();
        Self::new(quiver, (1..=n).map(|i| RationalFunction::var(n, i)).collect())
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn cluster(&self) -> &[RationalFunction] {
        &self.cluster
    }

    /// The two monomials of the exchange relation at `i`: the product over
    /// arrows into `i` of their sources, and over arrows out of `i` of their
    /// targets, in the current cluster.
    pub fn exchange_products(&self, i: Vertex) -> (RationalFunction, RationalFunction) {
        let n = self.cluster.len();
        let prod = |vs: Vec<Vertex>| vs.into_iter().fold(RationalFunction::one(n), |acc, v| acc.mul(&self.cluster[v - 1]));
        let ins = prod(self.quiver.incoming(i).into_iter().map(|a| self.quiver.arrow(a).source).collect());
        let outs = prod(self.quiver.outgoing(i).into_iter().map(|a| self.quiver.arrow(a).target).collect());
        (ins, outs)
    }

    pub fn mutate(&self, i: Vertex) -> Result<Seed, SeedError> {
        self.quiver.check_mutable_at(i)?;
        let (ins, outs) = self.exchange_products(i);
        let mut cluster = self.cluster.clone();
        cluster[i - 1] = ins.add(&outs).div(&self.cluster[i - 1]).ok_or(SeedError::ZeroVariable(i))?;
        Ok(Seed { quiver: self.quiver.mutate(i)?, cluster })
    }

    pub fn mutate_sequence(&self, seq: &[Vertex]) -> Result<Seed, SeedError> {
        seq.iter().try_fold(self.clone(), |s, &i| s.mutate(i))
    }

    pub fn canonical_form(&self) -> CanonicalSeed {
        let mut perm: Vec<Vertex> = (1..=self.cluster.len()).collect();
        perm.sort_by(|&a, &b| self.cluster[a - 1].cmp(&self.cluster[b - 1]));
        let b = self.quiver.signed_counts().permuted(&perm);
        CanonicalSeed { cluster: perm.iter().map(|&v| self.cluster[v - 1].clone()).collect(), b_matrix: b.rows() }
    }

    /// Same seed with the quiver rebuilt from its B-matrix, discarding the
    /// accumulated composite labels.
    fn relabelled(self) -> Self {
        Seed { quiver: self.quiver.signed_counts().to_quiver(), cluster: self.cluster }
    }
}

impl fmt::Display for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<String> = self.cluster.iter().map(ToString::to_string).collect();
        write!(f, "({})", vars.join(", "))
    }
}

/// `true` iff `after = mutate(before, i)` satisfies `u'_i u_i = in + out`.
pub fn exchange_relation_holds(before: &Seed, after: &Seed, i: Vertex) -> bool {
    let (ins, outs) = before.exchange_products(i);
    after.cluster[i - 1].mul(&before.cluster[i - 1]) == ins.add(&outs)
}

pub fn mutate_seed(s: &Seed, i: Vertex) -> Result<Seed, SeedError> {
    s.mutate(i)
}

/// Laurent form of `v`, if its reduced denominator is a monic monomial.
pub fn laurent_check(v: &RationalFunction) -> Result<LaurentPoly, SeedError> {
    let den = v.denominator();
    let monic = den.len() == 1 && den.terms().all(|(_, c)| c.is_one());
    if !monic {
        return Err(SeedError::NotLaurent(v.to_string()));
    }
    let (shift, _) = den.terms().next().expect("nonzero denominator");
    let mut out = LaurentPoly::zero(v.nvars());
    for (e, c) in v.numerator().terms() {
        out.add_term(e.iter().zip(shift).map(|(&a, &s)| a as i64 - s as i64).collect(), c.clone());
    }
    Ok(out)
}

/// Seeds reached from the initial seed, in discovery order.
#[derive(Clone, Debug)]
pub struct ExchangeGraph {
    pub seeds: Vec<Seed>,
    pub canonical: Vec<CanonicalSeed>,
    /// `(from, vertex, to)`: mutating seed `from` at `vertex` gives seed `to`.
    /// Each undirected edge is listed once.
    pub edges: Vec<(usize, Vertex, usize)>,
    /// Breadth-first level at which each seed was found.
    pub levels: Vec<usize>,
    /// No seed outside the graph is adjacent to it.
    pub closed: bool,
}

impl ExchangeGraph {
    /// Distinct cluster variables over all seeds, sorted.
    pub fn cluster_variables(&self) -> Vec<RationalFunction> {
        let set: BTreeSet<&RationalFunction> = self.seeds.iter().flat_map(|s| s.cluster.iter()).collect();
        set.into_iter().cloned().collect()
    }

    pub fn laurent_variables(&self) -> Result<Vec<LaurentPoly>, SeedError> {
        self.cluster_variables().iter().map(laurent_check).collect()
    }
}

/// Breadth-first closure of seed mutation from `(Q, x)` up to `depth`.
pub fn explore(q: &Quiver, depth: usize, max_seeds: usize) -> Result<ExchangeGraph, SeedError> {
    let order: Vec<Vertex> = (1..=q.vertex_count()).collect();
    explore_with_order(q, depth, max_seeds, &order)
}

/// [`explore`] with mutations tried in the given vertex order.
pub fn explore_with_order(
    q: &Quiver,
    depth: usize,
    max_seeds: usize,
    order: &[Vertex],
) -> Result<ExchangeGraph, SeedError> {
    let root = Seed::initial(q.clone())?;
    let mut index: HashMap<CanonicalSeed, usize> = HashMap::new();
    let mut g = ExchangeGraph { seeds: Vec::new(), canonical: Vec::new(), edges: Vec::new(), levels: Vec::new(), closed: false };
    let key = root.canonical_form();
    index.insert(key.clone(), 0);
    g.seeds.push(root);
    g.canonical.push(key);
    g.levels.push(0);
    let mut frontier = vec![0usize];
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut level = 0;
    loop {
        let last = level == depth;
        let mut next = Vec::new();
        let mut found_new = false;
        for &s in &frontier {
            for &k in order {
                let t_seed = g.seeds[s].mutate(k)?;
                let key = t_seed.canonical_form();
                let t = match index.get(&key) {
                    Some(&t) => t,
                    None if last => {
                        found_new = true;
                        continue;
                    }
                    None => {
                        let t = g.seeds.len();
                        if t >= max_seeds {
                            return Err(SeedError::BudgetExceeded(max_seeds));
                        }
                        index.insert(key.clone(), t);
                        g.seeds.push(t_seed.relabelled());
                        g.canonical.push(key);
                        g.levels.push(level + 1);
                        next.push(t);
                        found_new = true;
                        t
                    }
                };
                if pairs.insert((s.min(t), s.max(t))) {
                    g.edges.push((s, k, t));
                }
            }
        }
        if !found_new {
            g.closed = true;
            break;
        }
        if last {
            break;
        }
        frontier = next;
        level += 1;
    }
    Ok(g)
}

/// Cluster variables reachable within `depth` mutations, as Laurent
/// polynomials, with a flag telling whether the exchange graph closed.
pub fn cluster_variables(q: &Quiver, depth: usize) -> Result<(Vec<LaurentPoly>, bool), SeedError> {
    let g = explore(q, depth, DEFAULT_SEED_BUDGET)?;
    Ok((g.laurent_variables()?, g.closed))
}
