//! Pairs of exact sequences `X -> E -> Y` and `Y -> E' -> X` and the strata
//! `G_{U,V}` / `G'_{U,V}` of submodules of `E` and `E'` they induce.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;

use super::{
    all_subreps, certify_polynomial, dimension_box, euler_char_with_budget, grassmannian_dimension_bound, Representation,
    RepgrassError, Side, Subspace, SubspaceTuple,
};
use crate::linalg::{modp, IntMatrix};
use crate::quiver::Quiver;

/// Point counts keyed by `(dim U, dim V)`.
type DimBins = HashMap<(Vec<usize>, Vec<usize>), u128>;

/// Module homomorphism given by one matrix per vertex (`target x source`).
pub type Morphism = Vec<IntMatrix>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SESData {
    pub quiver: Arc<Quiver>,
    pub x: Representation,
    pub y: Representation,
    pub e: Representation,
    pub e_prime: Representation,
    pub i: Morphism,
    pub p: Morphism,
    pub i_prime: Morphism,
    pub p_prime: Morphism,
}

/// Point counts of the two strata over one pair `(U, V)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StratumCounts {
    pub u_dims: Vec<usize>,
    pub v_dims: Vec<usize>,
    pub g: u128,
    pub g_prime: u128,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrataTable {
    pub prime: u64,
    /// Every pair of submodules `U ⊆ X`, `V ⊆ Y`, including empty strata.
    pub cells: BTreeMap<(SubspaceTuple, SubspaceTuple), StratumCounts>,
    /// Members `W` for which `dim U + dim V - dim W` differs from the kernel
    /// dimension of the corresponding first map.
    pub identity_violations: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DichotomyFailure {
    pub prime: u64,
    pub counts: StratumCounts,
}

/// One row of the Euler-characteristic identity `χ(Gr_e X) χ(Gr_f Y) =
/// Σ_g χ(G^g_{e,f}) + χ(G'^g_{e,f})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerRow {
    pub e: Vec<usize>,
    pub f: Vec<usize>,
    pub product: BigInt,
    pub strata: BigInt,
}

impl SESData {
    fn modules(&self) -> [&Representation; 4] {
        [&self.x, &self.y, &self.e, &self.e_prime]
    }

    fn max_entry(&self) -> u64 {
        let maps = [&self.i, &self.p, &self.i_prime, &self.p_prime];
        let m = maps.iter().flat_map(|f| f.iter().map(IntMatrix::max_abs)).max().unwrap_or(0);
        self.modules().iter().map(|r| r.max_abs_entry()).max().unwrap_or(0).max(m)
    }

    /// Checks shapes, that all four maps are homomorphisms, and exactness
    /// at `E` and `E'` over the rationals.
    pub fn validate(&self) -> Result<(), RepgrassError> {
        let q = &self.quiver;
        let n = q.vertex_count();
        for m in self.modules() {
            if m.dims().len() != n {
                return Err(RepgrassError::InvalidSes("dimension vector length".into()));
            }
            if m.side() != self.x.side() {
                return Err(RepgrassError::InvalidSes("modules on different sides".into()));
            }
        }
        check_hom(q, "i", &self.i, &self.x, &self.e)?;
        check_hom(q, "p", &self.p, &self.e, &self.y)?;
        check_hom(q, "i'", &self.i_prime, &self.y, &self.e_prime)?;
        check_hom(q, "p'", &self.p_prime, &self.e_prime, &self.x)?;
        check_exact("E", &self.i, &self.p, &self.e, None)?;
        check_exact("E'", &self.i_prime, &self.p_prime, &self.e_prime, None)
    }

    /// [`SESData::validate`] plus exactness after reduction mod `p`.
    pub fn validate_mod(&self, p: u64) -> Result<(), RepgrassError> {
        self.validate()?;
        check_exact("E", &self.i, &self.p, &self.e, Some(p))?;
        check_exact("E'", &self.i_prime, &self.p_prime, &self.e_prime, Some(p))
    }

    /// `dim Ker(i)` per vertex.
    pub fn kernel_dims(&self) -> Vec<usize> {
        kernel_dims(&self.i, &self.x)
    }

    /// `dim Ker(i')` per vertex.
    pub fn kernel_dims_prime(&self) -> Vec<usize> {
        kernel_dims(&self.i_prime, &self.y)
    }

    /// Enumerates `G_{U,V}` and `G'_{U,V}` over `F_p` for every pair of
    /// submodules and checks the dimension identity on each member.
    pub fn strata_counts(&self, p: u64, budget: u128) -> Result<StrataTable, RepgrassError> {
        self.validate_mod(p)?;
        let q = &self.quiver;
        let mut cells: BTreeMap<(SubspaceTuple, SubspaceTuple), StratumCounts> = BTreeMap::new();
        let subs_x = all_subreps(q, &self.x, p, budget)?;
        let subs_y = all_subreps(q, &self.y, p, budget)?;
        for u in &subs_x {
            for v in &subs_y {
                let counts = StratumCounts { u_dims: dims_of(u), v_dims: dims_of(v), g: 0, g_prime: 0 };
                cells.insert((u.clone(), v.clone()), counts);
            }
        }
        let ker = self.kernel_dims();
        let ker_prime = self.kernel_dims_prime();
        let mut identity_violations = 0;
        for w in all_subreps(q, &self.e, p, budget)? {
            let u = preimage(&self.i, &self.x, &w, p);
            let v = image(&self.p, &self.y, &w, p);
            if !dimension_identity(&u, &v, &w, &ker) {
                identity_violations += 1;
            }
            cell(&mut cells, u, v).g += 1;
        }
        for w in all_subreps(q, &self.e_prime, p, budget)? {
            let v = preimage(&self.i_prime, &self.y, &w, p);
            let u = image(&self.p_prime, &self.x, &w, p);
            if !dimension_identity(&u, &v, &w, &ker_prime) {
                identity_violations += 1;
            }
            cell(&mut cells, u, v).g_prime += 1;
        }
        Ok(StrataTable { prime: p, cells, identity_violations })
    }

    /// First pair `(U, V)` where not exactly one of the strata is non-empty.
    pub fn dichotomy_failure(&self, p: u64, budget: u128) -> Result<Option<DichotomyFailure>, RepgrassError> {
        let table = self.strata_counts(p, budget)?;
        Ok(table
            .cells
            .into_values()
            .find(|c| (c.g > 0) == (c.g_prime > 0))
            .map(|counts| DichotomyFailure { prime: p, counts }))
    }

    pub fn dichotomy_check(&self, p: u64, budget: u128) -> Result<bool, RepgrassError> {
        Ok(self.dichotomy_failure(p, budget)?.is_none())
    }

    pub fn dimension_identity_check(&self, p: u64, budget: u128) -> Result<bool, RepgrassError> {
        Ok(self.strata_counts(p, budget)?.identity_violations == 0)
    }

    /// Evaluates both sides of the Euler-characteristic identity for every
    /// `(e, f)`; the strata side is interpolated from point counts.
    pub fn euler_rows(&self, budget: u128) -> Result<Vec<EulerRow>, RepgrassError> {
        self.validate()?;
        let q = &self.quiver;
        let bound = [&self.e, &self.e_prime]
            .iter()
            .flat_map(|m| dimension_box(m.dims()).into_iter().map(|g| grassmannian_dimension_bound(m.dims(), &g)))
            .max()
            .unwrap_or(0);
        let floor = self.max_entry();
        let mut by_prime: HashMap<u64, DimBins> = HashMap::new();
        let mut rows = Vec::new();
        for e in dimension_box(self.x.dims()) {
            let chi_x = euler_char_with_budget(q, &self.x, &e, budget)?.chi;
            for f in dimension_box(self.y.dims()) {
                let chi_y = euler_char_with_budget(q, &self.y, &f, budget)?.chi;
                let key = (e.clone(), f.clone());
                let strata = certify_polynomial(bound, floor, |p| {
                    let bins = match by_prime.entry(p) {
                        Entry::Occupied(o) => o.into_mut(),
                        Entry::Vacant(v) => v.insert(self.binned_counts(p, budget)?),
                    };
                    Ok(bins.get(&key).copied().unwrap_or(0))
                })?;
                rows.push(EulerRow { e: e.clone(), f, product: &chi_x * chi_y, strata: strata.chi });
            }
        }
        Ok(rows)
    }

    pub fn euler_identity_check(&self, budget: u128) -> Result<bool, RepgrassError> {
        Ok(self.euler_rows(budget)?.iter().all(|r| r.product == r.strata))
    }

    /// `|G ∪ G'|` over `F_p` binned by `(dim U, dim V)`.
    fn binned_counts(&self, p: u64, budget: u128) -> Result<DimBins, RepgrassError> {
        self.validate_mod(p)?;
        let q = &self.quiver;
        let mut out = DimBins::new();
        for w in all_subreps(q, &self.e, p, budget)? {
            let key = (dims_of(&preimage(&self.i, &self.x, &w, p)), dims_of(&image(&self.p, &self.y, &w, p)));
            *out.entry(key).or_default() += 1;
        }
        for w in all_subreps(q, &self.e_prime, p, budget)? {
            let key = (
                dims_of(&image(&self.p_prime, &self.x, &w, p)),
                dims_of(&preimage(&self.i_prime, &self.y, &w, p)),
            );
            *out.entry(key).or_default() += 1;
        }
        Ok(out)
    }
}

fn cell(
    cells: &mut BTreeMap<(SubspaceTuple, SubspaceTuple), StratumCounts>,
    u: SubspaceTuple,
    v: SubspaceTuple,
) -> &mut StratumCounts {
    let (ud, vd) = (dims_of(&u), dims_of(&v));
    cells.entry((u, v)).or_insert_with(|| StratumCounts { u_dims: ud, v_dims: vd, g: 0, g_prime: 0 })
}

fn dims_of(s: &[Subspace]) -> Vec<usize> {
    s.iter().map(Vec::len).collect()
}

fn dimension_identity(u: &[Subspace], v: &[Subspace], w: &[Subspace], ker: &[usize]) -> bool {
    (0..w.len()).all(|k| u[k].len() + v[k].len() == w[k].len() + ker[k])
}

fn kernel_dims(f: &Morphism, source: &Representation) -> Vec<usize> {
    f.iter().zip(source.dims()).map(|(m, &d)| d - m.to_rational().rank()).collect()
}

/// `f(W)` as RREF bases inside the target.
fn image(f: &Morphism, target: &Representation, w: &[Subspace], p: u64) -> SubspaceTuple {
    f.iter()
        .zip(w)
        .zip(target.dims())
        .map(|((m, basis), &d)| {
            let rows = m.to_modp(p);
            let imgs: Vec<Vec<u64>> = basis.iter().map(|x| modp::apply(&rows, x, p)).collect();
            modp::span(&imgs, d, p)
        })
        .collect()
}

/// `f^{-1}(W)` as RREF bases inside the source.
fn preimage(f: &Morphism, source: &Representation, w: &[Subspace], p: u64) -> SubspaceTuple {
    f.iter()
        .zip(w)
        .zip(source.dims())
        .map(|((m, basis), &d)| {
            // kernel of [F | W^T]; the first d coordinates span the preimage
            let rows = m.to_modp(p);
            let k = basis.len();
            let stacked: Vec<Vec<u64>> = rows
                .iter()
                .enumerate()
                .map(|(r, row)| {
                    let mut full = row.clone();
                    full.extend(basis.iter().map(|b| b[r]));
                    full
                })
                .collect();
            let kernel = modp::kernel(&stacked, d + k, p);
            let alphas: Vec<Vec<u64>> = kernel.into_iter().map(|v| v[..d].to_vec()).collect();
            modp::span(&alphas, d, p)
        })
        .collect()
}

fn check_hom(
    q: &Quiver,
    name: &str,
    f: &Morphism,
    src: &Representation,
    tgt: &Representation,
) -> Result<(), RepgrassError> {
    if f.len() != q.vertex_count() {
        return Err(RepgrassError::InvalidSes(format!("map {name} needs one matrix per vertex")));
    }
    for (v, m) in f.iter().enumerate() {
        if (m.rows(), m.cols()) != (tgt.dims()[v], src.dims()[v]) {
            return Err(RepgrassError::InvalidSes(format!("map {name} has the wrong shape at vertex {}", v + 1)));
        }
    }
    for (a, b) in src.actions(q).into_iter().zip(tgt.actions(q)) {
        let lhs = f[a.to - 1].to_rational().mul(&a.matrix.to_rational());
        let rhs = b.matrix.to_rational().mul(&f[a.from - 1].to_rational());
        if lhs != rhs {
            return Err(RepgrassError::InvalidSes(format!(
                "map {name} does not commute with arrow {:?}",
                q.arrow(a.arrow).label
            )));
        }
    }
    Ok(())
}

fn check_exact(
    name: &str,
    i: &Morphism,
    p: &Morphism,
    middle: &Representation,
    prime: Option<u64>,
) -> Result<(), RepgrassError> {
    for (v, (iv, pv)) in i.iter().zip(p).enumerate() {
        let (ri, rp, zero) = match prime {
            None => {
                let (a, b) = (iv.to_rational(), pv.to_rational());
                (a.rank(), b.rank(), b.mul(&a).is_zero())
            }
            Some(q) => {
                let (a, b) = (iv.to_modp(q), pv.to_modp(q));
                let comp: Vec<Vec<u64>> = b
                    .iter()
                    .map(|row| (0..iv.cols()).map(|c| row.iter().zip(&a).fold(0, |s, (x, r)| (s + x * r[c]) % q)).collect())
                    .collect();
                (modp::rank(&a, iv.cols(), q), modp::rank(&b, pv.cols(), q), comp.iter().flatten().all(|&x| x == 0))
            }
        };
        if !zero || ri + rp != middle.dims()[v] {
            let at = prime.map(|q| format!(" mod {q}")).unwrap_or_default();
            return Err(RepgrassError::InvalidSes(format!("sequence is not exact at {name}, vertex {}{at}", v + 1)));
        }
    }
    Ok(())
}

/// Interval module on vertices `lo..=hi` of a type A quiver: one-dimensional
/// at each vertex in range, identity along every arrow inside the range.
pub fn interval_module(q: &Quiver, lo: usize, hi: usize, side: Side) -> Representation {
    let dims: Vec<usize> = (1..=q.vertex_count()).map(|v| usize::from((lo..=hi).contains(&v))).collect();
    let maps: Vec<(&str, IntMatrix)> = q
        .arrows()
        .iter()
        .filter(|a| dims[a.source - 1] == 1 && dims[a.target - 1] == 1)
        .map(|a| (a.label.as_str(), IntMatrix::identity(1)))
        .collect();
    Representation::from_labelled(q, dims, &maps, side).expect("interval shapes are consistent")
}

/// Identity at the `support` vertices (where both sides are one-dimensional),
/// zero elsewhere.
pub fn partial_identity(src: &Representation, tgt: &Representation, support: &[usize]) -> Morphism {
    src.dims()
        .iter()
        .zip(tgt.dims())
        .enumerate()
        .map(|(v, (&s, &t))| if support.contains(&(v + 1)) { IntMatrix::identity(s) } else { IntMatrix::zeros(t, s) })
        .collect()
}

fn build(
    q: &Arc<Quiver>,
    [x, y, e, e_prime]: [Representation; 4],
    [i, p, ip, pp]: [&[usize]; 4],
) -> SESData {
    SESData {
        quiver: q.clone(),
        i: partial_identity(&x, &e, i),
        p: partial_identity(&e, &y, p),
        i_prime: partial_identity(&y, &e_prime, ip),
        p_prime: partial_identity(&e_prime, &x, pp),
        x,
        y,
        e,
        e_prime,
    }
}

/// The extension `S_1 -> P -> S_2` of the A2 quiver `1 -> 2` with `E' = 0`.
pub fn a2_ses_data() -> Vec<SESData> {
    let q = Arc::new(Quiver::from_triples(2, &[(1, 2, "a")]).expect("valid quiver"));
    let m = |lo, hi| interval_module(&q, lo, hi, Side::Opposite);
    let zero = Representation::zero(&q, Side::Opposite);
    vec![build(&q, [m(1, 1), m(2, 2), m(1, 2), zero], [&[1], &[2], &[], &[]])]
}

/// Non-split extensions between interval modules of the linear A3 quiver
/// `1 -> 2 -> 3`.
pub fn a3_ses_data() -> Vec<SESData> {
    let q = Arc::new(Quiver::from_triples(3, &[(1, 2, "a"), (2, 3, "b")]).expect("valid quiver"));
    let m = |lo, hi| interval_module(&q, lo, hi, Side::Opposite);
    let zero = || Representation::zero(&q, Side::Opposite);
    vec![
        build(&q, [m(1, 1), m(2, 2), m(1, 2), zero()], [&[1], &[2], &[], &[]]),
        build(&q, [m(2, 2), m(3, 3), m(2, 3), zero()], [&[2], &[3], &[], &[]]),
        build(&q, [m(1, 1), m(2, 3), m(1, 3), m(3, 3)], [&[1], &[2, 3], &[3], &[]]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repgrass::DEFAULT_BUDGET;

    #[test]
    fn shipped_data_is_valid() {
        for s in a2_ses_data().iter().chain(&a3_ses_data()) {
            s.validate().unwrap();
            for p in [2, 3, 5] {
                s.validate_mod(p).unwrap();
            }
        }
    }

    #[test]
    fn a2_strata() {
        let s = &a2_ses_data()[0];
        let t = s.strata_counts(2, DEFAULT_BUDGET).unwrap();
        assert_eq!(t.cells.len(), 4);
        let by_dims: BTreeMap<(Vec<usize>, Vec<usize>), (u128, u128)> =
            t.cells.values().map(|c| ((c.u_dims.clone(), c.v_dims.clone()), (c.g, c.g_prime))).collect();
        assert_eq!(by_dims[&(vec![0, 0], vec![0, 0])], (1, 0));
        assert_eq!(by_dims[&(vec![1, 0], vec![0, 1])], (1, 0));
        assert_eq!(by_dims[&(vec![1, 0], vec![0, 0])], (1, 0));
        assert_eq!(by_dims[&(vec![0, 0], vec![0, 1])], (0, 1));
        assert_eq!(t.identity_violations, 0);
        for p in [2, 3, 5] {
            assert!(s.dichotomy_check(p, DEFAULT_BUDGET).unwrap());
            assert!(s.dimension_identity_check(p, DEFAULT_BUDGET).unwrap());
        }
        assert_eq!(s.kernel_dims(), vec![0, 0]);
    }

    #[test]
    fn a3_dichotomy_and_euler_identity() {
        for s in a3_ses_data() {
            for p in [2, 3, 5] {
                assert!(s.dichotomy_check(p, DEFAULT_BUDGET).unwrap());
                assert!(s.dimension_identity_check(p, DEFAULT_BUDGET).unwrap());
            }
            assert!(s.euler_identity_check(DEFAULT_BUDGET).unwrap());
        }
        assert!(a2_ses_data()[0].euler_identity_check(DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn zero_first_map_keeps_identity() {
        let q = Arc::new(Quiver::from_triples(2, &[(1, 2, "a")]).unwrap());
        let x = interval_module(&q, 1, 1, Side::Opposite);
        let y = interval_module(&q, 1, 2, Side::Opposite);
        let s = build(&q, [x.clone(), y.clone(), y, x], [&[], &[1, 2], &[], &[1]]);
        s.validate().unwrap();
        assert_eq!(s.kernel_dims(), vec![1, 0]);
        for p in [2, 3, 5] {
            assert!(s.dimension_identity_check(p, DEFAULT_BUDGET).unwrap());
        }
    }

    #[test]
    fn inexact_data_is_rejected() {
        let mut s = a2_ses_data().remove(0);
        s.p[1] = IntMatrix::zeros(1, 1);
        assert!(matches!(s.dichotomy_check(2, DEFAULT_BUDGET), Err(RepgrassError::InvalidSes(_))));
        let mut s = a2_ses_data().remove(0);
        s.i[0] = IntMatrix::from_rows(1, 1, &[vec![2]]).unwrap();
        s.validate().unwrap();
        assert!(matches!(s.validate_mod(2), Err(RepgrassError::InvalidSes(_))));
        let mut s = a2_ses_data().remove(0);
        s.p = vec![IntMatrix::zeros(0, 1), IntMatrix::zeros(1, 1)];
        s.i = vec![IntMatrix::zeros(1, 1), IntMatrix::zeros(1, 0)];
        assert!(matches!(s.validate(), Err(RepgrassError::InvalidSes(_))));
    }
}
