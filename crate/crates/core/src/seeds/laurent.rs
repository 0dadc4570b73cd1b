use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::poly::{format_monomial, format_terms, Poly, RationalFunction};

/// Laurent polynomial in `x_1, ..., x_n` with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(&vec![0; nvars], BigInt::one())
    }

    /// `c * x^exps`.
    pub fn monomial(exps: &[i64], c: BigInt) -> Self {
        let mut out = Self::zero(exps.len());
        out.add_term(exps.to_vec(), c);
        out
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i - 1] = 1;
        Self::monomial(&e, BigInt::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[i64]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn all_positive(&self) -> bool {
        self.terms.values().all(Signed::is_positive)
    }

    pub fn add_term(&mut self, e: Vec<i64>, c: BigInt) {
        if c.is_zero() {
            return;
        }
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

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                out.add_term(e1.iter().zip(e2).map(|(a, b)| a + b).collect(), c1 * c2);
            }
        }
        out
    }

    /// Common denominator form: `(numerator, denominator exponents)` with the
    /// denominator a monomial of minimal degree.
    pub fn as_fraction(&self) -> (Poly, Vec<u32>) {
        let shift: Vec<i64> =
            (0..self.nvars).map(|v| self.terms.keys().map(|e| e[v]).min().unwrap_or(0).min(0)).collect();
        let mut num = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let ex: Vec<u32> = e.iter().zip(&shift).map(|(a, s)| (a - s) as u32).collect();
            num = num.add(&Poly::monomial(ex, c.clone()));
        }
        (num, shift.iter().map(|s| (-s) as u32).collect())
    }

    pub fn to_rational_function(&self) -> RationalFunction {
        let (num, den) = self.as_fraction();
        RationalFunction::new(num, Poly::monomial(den, 1)).expect("monomial denominator")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, den) = self.as_fraction();
        let den_exps: Vec<i64> = den.iter().map(|&k| k as i64).collect();
        let num_str = format_terms(num.terms().map(|(e, c)| (e.iter().map(|&k| k as i64).collect(), c)));
        if den.iter().all(|&k| k == 0) {
            return write!(f, "{num_str}");
        }
        let num_str = if num.len() > 1 { format!("({num_str})") } else { num_str };
        let den_str = format_monomial(&den_exps);
        if den.iter().sum::<u32>() == 1 {
            write!(f, "{num_str}/{den_str}")
        } else {
            write!(f, "{num_str}/({den_str})")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_display() {
        let x1 = LaurentPoly::var(2, 1);
        let x2 = LaurentPoly::var(2, 2);
        let inv1 = LaurentPoly::monomial(&[-1, 0], BigInt::one());
        let u = x2.add(&LaurentPoly::one(2)).mul(&inv1);
        assert_eq!(u.to_string(), "(x2 + 1)/x1");
        assert_eq!(u.coefficient(&[-1, 1]), BigInt::one());
        let w = u.mul(&x1);
        assert_eq!(w.to_string(), "x2 + 1");
        assert!(w.sub(&w).is_zero());
        assert_eq!(LaurentPoly::monomial(&[-1, -2], BigInt::from(3)).to_string(), "3/(x1*x2^2)");
        assert_eq!(u.to_rational_function().to_string(), "(x2 + 1)/x1");
        assert!(u.all_positive());
        assert!(!u.sub(&x1).all_positive());
    }
}
