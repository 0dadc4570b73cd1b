//! Exact linear algebra kernels: integer matrices for representation data,
//! rational matrices for presentations, and dense arithmetic over `F_p`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Row-major integer matrix. Zero-row or zero-column shapes are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from nested rows; `None` if the rows are ragged or do
    /// not match the requested shape.
    pub fn from_rows(rows: usize, cols: usize, entries: &[Vec<i64>]) -> Option<Self> {
        if rows == 0 || cols == 0 {
            // accept [] as well as [[], [], ...] for empty shapes
            let ok = entries.is_empty()
                || (entries.len() == rows && entries.iter().all(|r| r.len() == cols));
            return ok.then(|| Self::zeros(rows, cols));
        }
        if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
            return None;
        }
        Some(Self { rows, cols, data: entries.iter().flatten().copied().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|r| self.data[r * self.cols..(r + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn max_abs(&self) -> u64 {
        self.data.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn to_rational(&self) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect(),
        }
    }

    pub fn to_modp(&self, p: u64) -> Vec<Vec<u64>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| reduce_mod(self.get(r, c), p)).collect())
            .collect()
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c));
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                m.set(self.rows + r, self.cols + c, other.get(r, c));
            }
        }
        m
    }
}

pub fn reduce_mod(x: i64, p: u64) -> u64 {
    (x as i128).rem_euclid(p as i128) as u64
}

/// Dense matrix over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<BigRational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn from_columns(rows: usize, columns: &[Vec<BigRational>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            for (r, v) in col.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut m = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let v = m.get(r, c) + a * b;
                        m.set(r, c, v);
                    }
                }
            }
        }
        m
    }

    pub fn apply(&self, v: &[BigRational]) -> Vec<BigRational> {
        (0..self.rows)
            .map(|r| {
                let mut acc = BigRational::zero();
                for (c, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        acc += self.get(r, c) * x;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<BigRational>> =
            (0..self.rows).map(|r| self.data[r * self.cols..(r + 1) * self.cols].to_vec()).collect();
        row_echelon(rows, self.cols).len()
    }

    /// Basis of the kernel, as column vectors.
    pub fn kernel(&self) -> Vec<Vec<BigRational>> {
        let rows: Vec<Vec<BigRational>> =
            (0..self.rows).map(|r| self.data[r * self.cols..(r + 1) * self.cols].to_vec()).collect();
        let (rref, pivots) = reduced_row_echelon(rows, self.cols);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![BigRational::zero(); self.cols];
                v[f] = BigRational::one();
                for (row, &pc) in rref.iter().zip(&pivots) {
                    v[pc] = -row[f].clone();
                }
                v
            })
            .collect()
    }

    /// Returns `Some` with integer entries when every entry is integral.
    pub fn to_integer(&self) -> Option<IntMatrix> {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = self.get(r, c);
                if !v.is_integer() {
                    return None;
                }
                let x: i64 = v.to_integer().try_into().ok()?;
                m.set(r, c, x);
            }
        }
        Some(m)
    }
}

/// Row echelon form of the given rows (only nonzero rows are kept).
pub fn row_echelon(mut rows: Vec<Vec<BigRational>>, cols: usize) -> Vec<Vec<BigRational>> {
    let mut out = 0;
    for c in 0..cols {
        let Some(p) = (out..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(out, p);
        let inv = rows[out][c].recip();
        for x in rows[out].iter_mut() {
            *x *= &inv;
        }
        let pivot = rows[out].clone();
        for row in rows.iter_mut().skip(out + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row[c..cols].iter_mut().zip(&pivot[c..cols]) {
                *x -= &f * y;
            }
        }
        out += 1;
    }
    rows.truncate(out);
    rows
}

/// Reduced row echelon form plus pivot columns.
pub fn reduced_row_echelon(rows: Vec<Vec<BigRational>>, cols: usize) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut rows = row_echelon(rows, cols);
    let pivots: Vec<usize> = rows
        .iter()
        .map(|r| r.iter().position(|x| !x.is_zero()).expect("echelon rows are nonzero"))
        .collect();
    for i in (0..rows.len()).rev() {
        let pc = pivots[i];
        let pivot = rows[i].clone();
        for row in rows.iter_mut().take(i) {
            if row[pc].is_zero() {
                continue;
            }
            let f = row[pc].clone();
            for (x, y) in row[pc..cols].iter_mut().zip(&pivot[pc..cols]) {
                *x -= &f * y;
            }
        }
    }
    (rows, pivots)
}

/// Incrementally maintained row space used to test membership and extend
/// bases one vector at a time.
#[derive(Clone, Debug, Default)]
pub struct RationalSpan {
    dim: usize,
    // (pivot column, row normalized so that row[pivot] == 1)
    rows: Vec<(usize, Vec<BigRational>)>,
}

impl RationalSpan {
    pub fn new(dim: usize) -> Self {
        Self { dim, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut [BigRational]) {
        for (pc, row) in &self.rows {
            if v[*pc].is_zero() {
                continue;
            }
            let f = v[*pc].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(Zero::is_zero)
    }

    /// Adds `v`; returns true if the span grew.
    pub fn insert(&mut self, v: &[BigRational]) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(pc) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[pc].recip();
        for x in w.iter_mut() {
            *x *= &inv;
        }
        // keep earlier rows reduced against the new pivot
        for (_, row) in self.rows.iter_mut() {
            if row[pc].is_zero() {
                continue;
            }
            let f = row[pc].clone();
            for (x, y) in row.iter_mut().zip(&w) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.rows.push((pc, w));
        true
    }
}

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses "p/q", "p", or "-p/q" into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

pub fn format_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn is_unit(x: &BigRational) -> bool {
    x.abs().is_one()
}

// ---------------------------------------------------------------------------
// Arithmetic over F_p with small primes (p < 2^31).

pub mod modp {
    pub fn inv(a: u64, p: u64) -> u64 {
        pow(a, p - 2, p)
    }

    pub fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
        let mut r = 1 % p;
        a %= p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * a % p;
            }
            a = a * a % p;
            e >>= 1;
        }
        r
    }

    /// Reduced row echelon form in place; returns the pivot columns. Zero
    /// rows are dropped.
    pub fn rref(rows: &mut Vec<Vec<u64>>, cols: usize, p: u64) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut out = 0;
        for c in 0..cols {
            let Some(r0) = (out..rows.len()).find(|&r| rows[r][c] != 0) else {
                continue;
            };
            rows.swap(out, r0);
            let iv = inv(rows[out][c], p);
            for x in rows[out].iter_mut() {
                *x = *x * iv % p;
            }
            let pivot = rows[out].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r == out || row[c] == 0 {
                    continue;
                }
                let f = row[c];
                for (x, y) in row[..cols].iter_mut().zip(&pivot[..cols]) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
            pivots.push(c);
            out += 1;
        }
        rows.truncate(out);
        pivots
    }

    pub fn rank(rows: &[Vec<u64>], cols: usize, p: u64) -> usize {
        let mut m = rows.to_vec();
        rref(&mut m, cols, p).len()
    }

    /// Canonical basis (RREF rows) of the span of `vectors`.
    pub fn span(vectors: &[Vec<u64>], dim: usize, p: u64) -> Vec<Vec<u64>> {
        let mut m = vectors.to_vec();
        rref(&mut m, dim, p);
        m
    }

    /// Basis of `{x : A x = 0}` for `A` given by rows with `cols` columns.
    pub fn kernel(a: &[Vec<u64>], cols: usize, p: u64) -> Vec<Vec<u64>> {
        let mut m = a.to_vec();
        let pivots = rref(&mut m, cols, p);
        (0..cols)
            .filter(|c| !pivots.contains(c))
            .map(|f| {
                let mut v = vec![0u64; cols];
                v[f] = 1;
                for (row, &pc) in m.iter().zip(&pivots) {
                    v[pc] = (p - row[f]) % p;
                }
                v
            })
            .collect()
    }

    /// `m * v` where `m` is given by rows.
    pub fn apply(m: &[Vec<u64>], v: &[u64], p: u64) -> Vec<u64> {
        m.iter()
            .map(|row| row.iter().zip(v).fold(0u64, |acc, (a, b)| (acc + a * b) % p))
            .collect()
    }

    /// True if every vector of `sub` lies in the span whose RREF basis is `basis`.
    pub fn contained(sub: &[Vec<u64>], basis: &[Vec<u64>], dim: usize, p: u64) -> bool {
        if sub.is_empty() {
            return true;
        }
        let mut m = basis.to_vec();
        m.extend(sub.iter().cloned());
        rank(&m, dim, p) == basis.len()
    }
}

/// Primes in increasing order starting above `floor`.
pub fn primes_above(floor: u64) -> impl Iterator<Item = u64> {
    (floor + 1..).filter(|&n| is_prime(n))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_rank_one() {
        let m = IntMatrix::from_rows(2, 3, &[vec![1, 2, 3], vec![2, 4, 6]]).unwrap().to_rational();
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.apply(v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn modp_kernel_and_span() {
        let p = 5;
        let a = vec![vec![1, 1, 0], vec![0, 1, 1]];
        let k = modp::kernel(&a, 3, p);
        assert_eq!(k.len(), 1);
        assert!(modp::apply(&a, &k[0], p).iter().all(|&x| x == 0));
        let s = modp::span(&[vec![2, 2, 0], vec![1, 1, 0]], 3, p);
        assert_eq!(s, vec![vec![1, 1, 0]]);
    }

    #[test]
    fn empty_shapes_parse() {
        assert!(IntMatrix::from_rows(0, 2, &[]).is_some());
        assert!(IntMatrix::from_rows(2, 0, &[vec![], vec![]]).is_some());
        assert!(IntMatrix::from_rows(2, 0, &[]).is_some());
        assert!(IntMatrix::from_rows(1, 2, &[vec![1]]).is_none());
    }

    #[test]
    fn rationals_round_trip() {
        for s in ["3/4", "-2", "0", "-7/3"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert!(parse_rational("1/0").is_none());
    }

    #[test]
    fn span_insert_tracks_rank() {
        let mut s = RationalSpan::new(3);
        assert!(s.insert(&[rational(1), rational(2), rational(0)]));
        assert!(!s.insert(&[rational(2), rational(4), rational(0)]));
        assert!(s.insert(&[rational(0), rational(0), rational(5)]));
        assert_eq!(s.rank(), 2);
        assert!(s.contains(&[rational(1), rational(2), rational(7)]));
    }
}
