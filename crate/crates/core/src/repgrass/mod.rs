//! Submodule Grassmannians over prime fields: point counts, Euler
//! characteristics by certified interpolation, and the strata attached to a
//! pair of short exact sequences.

mod representation;
mod ses;

pub use representation::{Action, RepError, Representation, Side};
pub use ses::{
    a2_ses_data, a3_ses_data, interval_module, partial_identity, DichotomyFailure, EulerRow, Morphism, SESData,
    StrataTable, StratumCounts,
};

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{is_prime, modp, primes_above};
use crate::quiver::Quiver;

/// Largest enumeration (product of Gaussian binomials) attempted by default.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepgrassError {
    #[error(transparent)]
    Representation(#[from] RepError),
    #[error("dimension vector {e:?} is not bounded by {dims:?}")]
    DimOutOfRange { e: Vec<usize>, dims: Vec<usize> },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("enumeration needs {needed} subspace tuples, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("point counts are not polynomial in q (mismatch at q = {prime}: counted {counted}, predicted {predicted})")]
    NotPolynomialCount { prime: u64, counted: String, predicted: String },
    #[error("invalid exact-sequence data: {0}")]
    InvalidSes(String),
}

/// Subspace of `F_p^d` given by its reduced row echelon basis.
pub type Subspace = Vec<Vec<u64>>;

/// One subspace per vertex.
pub type SubspaceTuple = Vec<Subspace>;

/// `(d choose e)_q`, saturating.
pub fn gaussian_binomial(d: usize, e: usize, q: u64) -> u128 {
    if e > d {
        return 0;
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for k in 0..e {
        let a = q.saturating_pow((d - k) as u32).saturating_sub(1);
        let b = q.saturating_pow((k + 1) as u32) - 1;
        num = num.saturating_mul(a);
        den = den.saturating_mul(b);
        if num == u128::MAX {
            return u128::MAX;
        }
    }
    num / den
}

/// Upper bound on the dimension of `Gr_e` of a module with dimensions `dims`.
pub fn grassmannian_dimension_bound(dims: &[usize], e: &[usize]) -> usize {
    dims.iter().zip(e).map(|(&d, &k)| k * d.saturating_sub(k)).sum()
}

/// All dimension vectors `0 <= e <= dims`, in lexicographic order.
pub fn dimension_box(dims: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &d in dims {
        out = out.into_iter().flat_map(|pre| (0..=d).map(move |k| [pre.clone(), vec![k]].concat())).collect();
    }
    out
}

/// All `e`-dimensional subspaces of `F_p^d` as RREF bases.
pub fn subspaces(d: usize, e: usize, p: u64) -> Vec<Subspace> {
    let mut out = Vec::new();
    for pivots in combinations(d, e) {
        let free: Vec<(usize, usize)> = (0..e)
            .flat_map(|r| ((pivots[r] + 1)..d).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .collect();
        let mut digits = vec![0u64; free.len()];
        loop {
            let mut rows = vec![vec![0u64; d]; e];
            for (r, &c) in pivots.iter().enumerate() {
                rows[r][c] = 1;
            }
            for (&(r, c), &x) in free.iter().zip(&digits) {
                rows[r][c] = x;
            }
            out.push(rows);
            let mut k = 0;
            while k < digits.len() {
                digits[k] += 1;
                if digits[k] < p {
                    break;
                }
                digits[k] = 0;
                k += 1;
            }
            if k == digits.len() {
                break;
            }
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
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
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Arrow actions of `m` reduced modulo `p`.
struct ModAction {
    from: usize,
    to: usize,
    rows: Vec<Vec<u64>>,
}

fn mod_actions(q: &Quiver, m: &Representation, p: u64) -> Vec<ModAction> {
    m.actions(q)
        .into_iter()
        .map(|a| ModAction { from: a.from - 1, to: a.to - 1, rows: a.matrix.to_modp(p) })
        .collect()
}

fn check_prime(p: u64) -> Result<(), RepgrassError> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(RepgrassError::NotPrime(p))
    }
}

fn check_box(m: &Representation, e: &[usize]) -> Result<(), RepgrassError> {
    if e.len() != m.dims().len() || e.iter().zip(m.dims()).any(|(a, b)| a > b) {
        return Err(RepgrassError::DimOutOfRange { e: e.to_vec(), dims: m.dims().to_vec() });
    }
    Ok(())
}

/// Calls `visit` on every subrepresentation of `m` with dimension vector `e`
/// over `F_p`. Vertices are filled in order and a partial tuple is dropped
/// as soon as an arrow between two filled vertices fails to preserve it.
pub fn for_each_subrep(
    q: &Quiver,
    m: &Representation,
    e: &[usize],
    p: u64,
    budget: u128,
    mut visit: impl FnMut(&[Subspace]),
) -> Result<(), RepgrassError> {
    check_prime(p)?;
    check_box(m, e)?;
    let needed = m.dims().iter().zip(e).fold(1u128, |acc, (&d, &k)| acc.saturating_mul(gaussian_binomial(d, k, p)));
    if needed > budget {
        return Err(RepgrassError::BudgetExceeded { needed, budget });
    }
    let dims = m.dims();
    let n = dims.len();
    let actions = mod_actions(q, m, p);
    let candidates: Vec<Vec<Subspace>> = (0..n).map(|v| subspaces(dims[v], e[v], p)).collect();
    let checks: Vec<Vec<&ModAction>> =
        (0..n).map(|v| actions.iter().filter(|a| a.from.max(a.to) == v).collect()).collect();

    fn go(
        v: usize,
        chosen: &mut Vec<Subspace>,
        candidates: &[Vec<Subspace>],
        checks: &[Vec<&ModAction>],
        dims: &[usize],
        p: u64,
        visit: &mut dyn FnMut(&[Subspace]),
    ) {
        if v == candidates.len() {
            visit(chosen);
            return;
        }
        for s in &candidates[v] {
            chosen.push(s.clone());
            let stable = checks[v].iter().all(|a| {
                let images: Vec<Vec<u64>> = chosen[a.from].iter().map(|u| modp::apply(&a.rows, u, p)).collect();
                modp::contained(&images, &chosen[a.to], dims[a.to], p)
            });
            if stable {
                go(v + 1, chosen, candidates, checks, dims, p, visit);
            }
            chosen.pop();
        }
    }
    go(0, &mut Vec::with_capacity(n), &candidates, &checks, dims, p, &mut visit);
    Ok(())
}

/// Number of `F_p`-points of `Gr_e(m)`.
pub fn count_subreps(q: &Quiver, m: &Representation, e: &[usize], p: u64, budget: u128) -> Result<u128, RepgrassError> {
    let mut n = 0u128;
    for_each_subrep(q, m, e, p, budget, |_| n += 1)?;
    Ok(n)
}

/// All subrepresentations of `m` over `F_p`, every dimension vector.
pub fn all_subreps(q: &Quiver, m: &Representation, p: u64, budget: u128) -> Result<Vec<SubspaceTuple>, RepgrassError> {
    let mut out = Vec::new();
    for e in dimension_box(m.dims()) {
        for_each_subrep(q, m, &e, p, budget, |s| out.push(s.to_vec()))?;
    }
    Ok(out)
}

/// Integer polynomial in `q`, coefficients in increasing degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountingPolynomial {
    coeffs: Vec<BigInt>,
}

impl CountingPolynomial {
    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn eval(&self, q: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * q + c)
    }

    pub fn at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }
}

impl fmt::Display for CountingPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = if c.magnitude().is_one() && k > 0 { String::new() } else { c.magnitude().to_string() };
            let var = match k {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{k}"),
            };
            let body = if !mag.is_empty() && !var.is_empty() { format!("{mag}*{var}") } else { format!("{mag}{var}") };
            let sign = if c < &BigInt::zero() { "-" } else { "+" };
            if parts.is_empty() {
                parts.push(if sign == "-" { format!("-{body}") } else { body });
            } else {
                parts.push(format!("{sign} {body}"));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// Certified point-count polynomial together with its value at `q = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerCharacteristic {
    pub chi: BigInt,
    pub polynomial: CountingPolynomial,
    pub sample_primes: Vec<u64>,
    pub check_primes: Vec<u64>,
}

/// Interpolates `count` (degree `<= degree_bound`) on the first
/// `degree_bound + 1` primes above `floor`, then confirms the prediction on
/// the next `degree_bound + 1` primes.
pub fn certify_polynomial(
    degree_bound: usize,
    floor: u64,
    mut count: impl FnMut(u64) -> Result<u128, RepgrassError>,
) -> Result<EulerCharacteristic, RepgrassError> {
    let mut primes = primes_above(floor.max(1));
    let sample: Vec<u64> = primes.by_ref().take(degree_bound + 1).collect();
    let check: Vec<u64> = primes.take(degree_bound + 1).collect();
    let mut values = Vec::with_capacity(sample.len());
    for &p in &sample {
        values.push(BigInt::from(count(p)?));
    }
    let coeffs = interpolate(&sample, &values);
    let integral = coeffs.iter().all(|c| c.is_integer());
    let polynomial = CountingPolynomial {
        coeffs: trim(coeffs.iter().map(|c| c.to_integer()).collect()),
    };
    if !integral {
        return Err(RepgrassError::NotPolynomialCount {
            prime: sample[0],
            counted: values[0].to_string(),
            predicted: "non-integral interpolant".to_string(),
        });
    }
    for &p in &check {
        let counted = BigInt::from(count(p)?);
        let predicted = polynomial.eval(&BigInt::from(p));
        if counted != predicted {
            return Err(RepgrassError::NotPolynomialCount {
                prime: p,
                counted: counted.to_string(),
                predicted: predicted.to_string(),
            });
        }
    }
    Ok(EulerCharacteristic { chi: polynomial.at_one(), polynomial, sample_primes: sample, check_primes: check })
}

fn trim(mut c: Vec<BigInt>) -> Vec<BigInt> {
    while c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    c
}

/// Newton interpolation, returned in the monomial basis.
fn interpolate(xs: &[u64], ys: &[BigInt]) -> Vec<BigRational> {
    let n = xs.len();
    let x: Vec<BigRational> = xs.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect();
    let mut dd: Vec<BigRational> = ys.iter().map(|y| BigRational::from_integer(y.clone())).collect();
    for k in 1..n {
        for i in (k..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&x[i] - &x[i - k]);
        }
    }
    let mut coeffs = vec![BigRational::zero(); n];
    for k in (0..n).rev() {
        // coeffs = coeffs * (q - x_k) + dd[k]
        let mut next = vec![BigRational::zero(); n];
        for (j, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if j + 1 < n {
                next[j + 1] += c;
            }
            next[j] -= c * &x[k];
        }
        next[0] += &dd[k];
        coeffs = next;
    }
    coeffs
}

/// `χ(Gr_e(m))` via certified point counting.
pub fn euler_char(q: &Quiver, m: &Representation, e: &[usize]) -> Result<EulerCharacteristic, RepgrassError> {
    euler_char_with_budget(q, m, e, DEFAULT_BUDGET)
}

pub fn euler_char_with_budget(
    q: &Quiver,
    m: &Representation,
    e: &[usize],
    budget: u128,
) -> Result<EulerCharacteristic, RepgrassError> {
    check_box(m, e)?;
    let bound = grassmannian_dimension_bound(m.dims(), e);
    certify_polynomial(bound, m.max_abs_entry(), |p| count_subreps(q, m, e, p, budget))
}

/// Euler characteristics of every nonempty-range `Gr_e(m)`, keyed by `e`.
pub fn euler_chars(q: &Quiver, m: &Representation, budget: u128) -> Result<Vec<(Vec<usize>, BigInt)>, RepgrassError> {
    dimension_box(m.dims())
        .into_iter()
        .map(|e| Ok((e.clone(), euler_char_with_budget(q, m, &e, budget)?.chi)))
        .collect()
}

/// Total count `Σ_e |Gr_e(m)(F_p)|` as a certified polynomial.
pub fn total_euler_char(q: &Quiver, m: &Representation, budget: u128) -> Result<EulerCharacteristic, RepgrassError> {
    let boxes = dimension_box(m.dims());
    let bound = boxes.iter().map(|e| grassmannian_dimension_bound(m.dims(), e)).max().unwrap_or(0);
    certify_polynomial(bound, m.max_abs_entry(), |p| {
        boxes.iter().try_fold(0u128, |acc, e| Ok(acc + count_subreps(q, m, e, p, budget)?))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::IntMatrix;
    use num_traits::ToPrimitive;

    fn to_i64(x: &BigInt) -> i64 {
        x.to_i64().unwrap()
    }

    fn point() -> Quiver {
        Quiver::new(1, vec![]).unwrap()
    }

    fn a2() -> Quiver {
        Quiver::from_triples(2, &[(1, 2, "a")]).unwrap()
    }

    fn a2_indecomposable() -> Representation {
        Representation::from_labelled(&a2(), vec![1, 1], &[("a", IntMatrix::identity(1))], Side::Opposite).unwrap()
    }

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(2, 1, 3), 4);
        assert_eq!(gaussian_binomial(4, 2, 2), 35);
        assert_eq!(gaussian_binomial(3, 0, 7), 1);
        assert_eq!(gaussian_binomial(1, 2, 7), 0);
        for (d, e, p) in [(3, 1, 2), (3, 2, 3), (4, 2, 3)] {
            assert_eq!(subspaces(d, e, p).len() as u128, gaussian_binomial(d, e, p));
        }
    }

    #[test]
    fn projective_line() {
        let q = point();
        let m = Representation::simple_like(&q, vec![2], Side::Opposite);
        for p in [2, 3, 5, 7] {
            assert_eq!(count_subreps(&q, &m, &[1], p, DEFAULT_BUDGET).unwrap(), (p + 1) as u128);
        }
        let chi = euler_char(&q, &m, &[1]).unwrap();
        assert_eq!(chi.chi, BigInt::from(2));
        assert_eq!(chi.polynomial.to_string(), "q + 1");
        assert!(chi.sample_primes.iter().all(|p| !chi.check_primes.contains(p)));
    }

    #[test]
    fn a2_indecomposable_strata() {
        let q = a2();
        let m = a2_indecomposable();
        for p in [2, 3, 5] {
            assert_eq!(count_subreps(&q, &m, &[1, 0], p, DEFAULT_BUDGET).unwrap(), 1);
            assert_eq!(count_subreps(&q, &m, &[0, 1], p, DEFAULT_BUDGET).unwrap(), 0);
        }
        let chis = euler_chars(&q, &m, DEFAULT_BUDGET).unwrap();
        let expect = [(vec![0, 0], 1), (vec![0, 1], 0), (vec![1, 0], 1), (vec![1, 1], 1)];
        for ((e, c), (e2, c2)) in chis.iter().zip(expect) {
            assert_eq!(e, &e2);
            assert_eq!(to_i64(c), c2);
        }
        assert_eq!(to_i64(&total_euler_char(&q, &m, DEFAULT_BUDGET).unwrap().chi), 3);
    }

    #[test]
    fn extreme_dimension_vectors() {
        let q = a2();
        let m = Representation::simple_like(&q, vec![2, 1], Side::Opposite).direct_sum(&a2_indecomposable()).unwrap();
        assert_eq!(count_subreps(&q, &m, &[0, 0], 3, DEFAULT_BUDGET).unwrap(), 1);
        assert_eq!(count_subreps(&q, &m, m.dims(), 3, DEFAULT_BUDGET).unwrap(), 1);
        assert!(matches!(
            count_subreps(&q, &m, &[4, 0], 3, DEFAULT_BUDGET),
            Err(RepgrassError::DimOutOfRange { .. })
        ));
        assert!(matches!(count_subreps(&q, &m, &[1, 1], 4, DEFAULT_BUDGET), Err(RepgrassError::NotPrime(4))));
        assert!(matches!(count_subreps(&q, &m, &[1, 1], 3, 2), Err(RepgrassError::BudgetExceeded { .. })));
    }

    #[test]
    fn count_is_bounded_by_gaussian_product() {
        let q = a2();
        let m = Representation::simple_like(&q, vec![2, 1], Side::Opposite).direct_sum(&a2_indecomposable()).unwrap();
        for e in dimension_box(m.dims()) {
            let bound: u128 = m.dims().iter().zip(&e).map(|(&d, &k)| gaussian_binomial(d, k, 3)).product();
            assert!(count_subreps(&q, &m, &e, 3, DEFAULT_BUDGET).unwrap() <= bound);
        }
        let free = Representation::simple_like(&q, vec![2, 2], Side::Opposite);
        assert_eq!(count_subreps(&q, &free, &[1, 1], 3, DEFAULT_BUDGET).unwrap(), 16);
    }

    #[test]
    fn sum_of_chis_matches_total() {
        let q = a2();
        let m = Representation::simple_like(&q, vec![1, 1], Side::Opposite).direct_sum(&a2_indecomposable()).unwrap();
        let sum: BigInt = euler_chars(&q, &m, DEFAULT_BUDGET).unwrap().into_iter().map(|(_, c)| c).sum();
        assert_eq!(sum, total_euler_char(&q, &m, DEFAULT_BUDGET).unwrap().chi);
    }

    #[test]
    fn interpolation_recovers_polynomials() {
        let c = certify_polynomial(3, 1, |p| Ok((p * p * p - 2 * p + 5) as u128)).unwrap();
        assert_eq!(c.polynomial.to_string(), "q^3 - 2*q + 5");
        assert_eq!(c.chi, BigInt::from(4));
        let bad = certify_polynomial(1, 1, |p| Ok((p * p) as u128));
        assert!(matches!(bad, Err(RepgrassError::NotPolynomialCount { .. })));
    }
}
