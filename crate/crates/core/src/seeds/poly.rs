//! Multivariate polynomials over `Z` and reduced fractions of them.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Polynomial in `x_1, ..., x_n` with integer coefficients. Terms are keyed
/// by exponent vectors; key order is lex with `x_1` most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    /// The variable `x_i` (1-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i - 1] = 1;
        Self::monomial(e, 1)
    }

    pub fn monomial(exps: Vec<u32>, c: impl Into<BigInt>) -> Self {
        let nvars = exps.len();
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Self { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().all(|(e, c)| c.is_one() && e.iter().all(|&x| x == 0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Single term (possibly with a coefficient other than 1).
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * k);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.nvars), |acc, _| acc.mul(self))
    }

    /// gcd of the coefficients (non-negative).
    pub fn integer_content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Leading term under graded lex order.
    pub fn graded_leading(&self) -> Option<(&Vec<u32>, &BigInt)> {
        self.terms.iter().max_by(|a, b| graded_cmp(a.0, b.0))
    }

    fn lex_leading(&self) -> Option<(&Vec<u32>, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|e| e[v]).max().unwrap_or(0)
    }

    /// Coefficients as a polynomial in `x_{v+1}` (0-based `v`), each free of it.
    fn coeffs_in(&self, v: usize) -> Vec<Poly> {
        let mut out = vec![Self::zero(self.nvars); self.degree_in(v) as usize + 1];
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[v] = 0;
            out[e[v] as usize].add_term(e2, c.clone());
        }
        out
    }

    fn shift(&self, v: usize, k: u32) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = e.clone();
                    e2[v] += k;
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    fn highest_var(&self) -> Option<usize> {
        (0..self.nvars).rev().find(|&v| self.degree_in(v) > 0)
    }

    /// `self / d` if the division is exact in `Z[x]`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (de, dc) = d.lex_leading()?;
        let mut q = Self::zero(self.nvars);
        let mut r = self.clone();
        while let Some((re, rc)) = r.lex_leading() {
            if re.iter().zip(de).any(|(a, b)| a < b) || !rc.is_multiple_of(dc) {
                return None;
            }
            let t = Self::monomial(re.iter().zip(de).map(|(a, b)| a - b).collect(), rc / dc);
            r = r.sub(&t.mul(d));
            q = q.add(&t);
        }
        Some(q)
    }

    fn content_in(&self, v: usize) -> Self {
        self.coeffs_in(v).iter().fold(Self::zero(self.nvars), |g, c| gcd(&g, c))
    }

    fn primitive_in(&self, v: usize) -> Self {
        let c = self.content_in(v);
        self.div_exact(&c).expect("content divides")
    }

    fn pseudo_rem(&self, g: &Self, v: usize) -> Self {
        let n = g.degree_in(v);
        let lc = g.coeffs_in(v).pop().expect("nonzero divisor");
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(v) >= n {
            let d = r.degree_in(v);
            let lr = r.coeffs_in(v).pop().expect("nonzero");
            r = lc.mul(&r).sub(&lr.mul(&g.shift(v, d - n)));
        }
        r
    }

    /// Flips the sign so the graded-lex leading coefficient is positive.
    fn with_positive_lead(self) -> Self {
        match self.graded_leading() {
            Some((_, c)) if c.is_negative() => self.neg(),
            _ => self,
        }
    }

    pub fn eval(&self, point: &[BigInt]) -> BigInt {
        self.terms
            .iter()
            .map(|(e, c)| e.iter().zip(point).fold(c.clone(), |acc, (&k, x)| acc * num_traits::pow(x.clone(), k as usize)))
            .sum()
    }
}

/// Greatest common divisor, normalized to a positive leading coefficient.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.clone().with_positive_lead();
    }
    if b.is_zero() {
        return a.clone().with_positive_lead();
    }
    let v = match (a.highest_var(), b.highest_var()) {
        (None, None) => return Poly::constant(a.nvars, a.integer_content().gcd(&b.integer_content())),
        (x, y) => x.max(y).expect("some variable present"),
    };
    let (ca, cb) = (a.content_in(v), b.content_in(v));
    let c = gcd(&ca, &cb);
    let mut f = a.div_exact(&ca).expect("content divides");
    let mut g = b.div_exact(&cb).expect("content divides");
    if f.degree_in(v) < g.degree_in(v) {
        std::mem::swap(&mut f, &mut g);
    }
    while !g.is_zero() {
        let r = f.pseudo_rem(&g, v);
        f = g;
        g = if r.is_zero() { r } else { r.primitive_in(v) };
    }
    f.primitive_in(v).mul(&c).with_positive_lead()
}

fn graded_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
    da.cmp(&db).then_with(|| a.cmp(b))
}

pub(crate) fn format_monomial(exps: &[i64]) -> String {
    exps.iter()
        .enumerate()
        .filter(|(_, &k)| k != 0)
        .map(|(i, &k)| if k == 1 { format!("x{}", i + 1) } else { format!("x{}^{k}", i + 1) })
        .collect::<Vec<_>>()
        .join("*")
}

/// Formats `(exponents, coefficient)` pairs, highest graded-lex term first.
pub(crate) fn format_terms<'a>(terms: impl Iterator<Item = (Vec<i64>, &'a BigInt)>) -> String {
    let mut ts: Vec<(Vec<i64>, &BigInt)> = terms.collect();
    ts.sort_by(|a, b| {
        let (da, db): (i64, i64) = (a.0.iter().sum(), b.0.iter().sum());
        db.cmp(&da).then_with(|| b.0.cmp(&a.0))
    });
    if ts.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (e, c)) in ts.iter().enumerate() {
        let mono = format_monomial(e);
        let mag = c.magnitude();
        let body = match (mono.is_empty(), mag.is_one()) {
            (true, _) => mag.to_string(),
            (false, true) => mono,
            (false, false) => format!("{mag}*{mono}"),
        };
        match (k, c.is_negative()) {
            (0, true) => out.push_str(&format!("-{body}")),
            (0, false) => out.push_str(&body),
            (_, true) => out.push_str(&format!(" - {body}")),
            (_, false) => out.push_str(&format!(" + {body}")),
        }
    }
    out
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms.iter().map(|(e, c)| (e.iter().map(|&k| k as i64).collect(), c));
        write!(f, "{}", format_terms(terms))
    }
}

/// Reduced fraction `num / den` with `gcd(num, den) = 1` and the
/// denominator's graded-lex leading coefficient positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    /// `None` if `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(Self { den: Poly::one(num.nvars), num });
        }
        let g = gcd(&num, &den);
        let mut num = num.div_exact(&g).expect("gcd divides");
        let mut den = den.div_exact(&g).expect("gcd divides");
        if den.graded_leading().is_some_and(|(_, c)| c.is_negative()) {
            num = num.neg();
            den = den.neg();
        }
        Some(Self { num, den })
    }

    pub fn from_poly(p: Poly) -> Self {
        let n = p.nvars;
        Self { num: p, den: Poly::one(n) }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::from_poly(Poly::var(nvars, i))
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(Poly::one(nvars))
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(self.num.add(&o.num), self.den.clone()).expect("nonzero denominator");
        }
        Self::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den)).expect("nonzero denominator")
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&Self { num: o.num.neg(), den: o.den.clone() })
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero denominator")
    }

    /// `None` when dividing by zero.
    pub fn div(&self, o: &Self) -> Option<Self> {
        if o.is_zero() {
            return None;
        }
        Self::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |p: &Poly, need: bool| if need { format!("({p})") } else { p.to_string() };
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let den_simple = self.den.len() == 1 && self.den.terms().all(|(e, c)| c.is_one() && e.iter().sum::<u32>() == 1);
        write!(f, "{}/{}", wrap(&self.num, self.num.len() > 1), wrap(&self.den, !den_simple))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Poly {
        Poly::var(3, i)
    }

    fn c(k: i64) -> Poly {
        Poly::constant(3, k)
    }

    #[test]
    fn gcd_of_products() {
        let a = x(1).add(&x(2)).mul(&x(3).add(&c(1)));
        let b = x(1).add(&x(2)).mul(&x(1).sub(&c(2)));
        assert_eq!(gcd(&a, &b), x(1).add(&x(2)));
        assert_eq!(gcd(&c(6).mul(&x(1)), &c(4).mul(&x(1)).mul(&x(2))), c(2).mul(&x(1)));
        assert_eq!(gcd(&x(1), &x(2)), c(1));
        assert_eq!(gcd(&Poly::zero(3), &x(2).neg()), x(2));
        let sq = x(1).add(&x(2)).pow(2);
        assert_eq!(gcd(&sq, &x(1).pow(2).sub(&x(2).pow(2))), x(1).add(&x(2)));
    }

    #[test]
    fn exact_division() {
        let a = x(1).add(&c(1)).mul(&x(2).sub(&x(3)));
        assert_eq!(a.div_exact(&x(1).add(&c(1))), Some(x(2).sub(&x(3))));
        assert_eq!(a.div_exact(&x(1)), None);
        assert_eq!(c(6).div_exact(&c(4)), None);
    }

    #[test]
    fn fractions_normalize() {
        let f = RationalFunction::new(x(1).mul(&x(2)).add(&x(1)), x(1).mul(&x(3)).neg()).unwrap();
        assert_eq!(f.numerator(), &x(2).add(&c(1)).neg());
        assert_eq!(f.denominator(), &x(3));
        assert_eq!(f.to_string(), "(-x2 - 1)/x3");
        assert!(RationalFunction::new(x(1), Poly::zero(3)).is_none());
        let g = RationalFunction::var(3, 1);
        let h = g.div(&g).unwrap();
        assert_eq!(h, RationalFunction::one(3));
    }

    #[test]
    fn fraction_arithmetic() {
        let x1 = RationalFunction::var(2, 1);
        let x2 = RationalFunction::var(2, 2);
        let one = RationalFunction::one(2);
        let u = x2.add(&one).div(&x1).unwrap();
        assert_eq!(u.to_string(), "(x2 + 1)/x1");
        let v = x1.add(&x2).add(&one).div(&x1.mul(&x2)).unwrap();
        assert_eq!(v.to_string(), "(x1 + x2 + 1)/(x1*x2)");
        assert_eq!(u.sub(&u), RationalFunction::from_poly(Poly::zero(2)));
        assert!(u.div(&RationalFunction::from_poly(Poly::zero(2))).is_none());
    }
}
