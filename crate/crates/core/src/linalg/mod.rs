//! Exact integer and rational matrices.
//!
//! Everything here is arbitrary precision. Matrices are small (rank at most
//! 24 in practice) so nothing is tuned for size.

mod poly;
mod snf;

pub use poly::{char_poly, cyclotomic, frame_shape, poly_from_frame_shape, FrameShape};
pub use snf::{hnf_rows, int_kernel, int_solve_mod, snf, SnfResult};

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type RatVec = Vec<BigRational>;

/// Dense row-major matrix of big integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    /// Panics on ragged input.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Self::from_fn(r, c, |i, j| rows[i][j].clone().into())
    }

    pub fn diagonal<T: Into<BigInt> + Clone>(diag: &[T]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.clone().into();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn neg(&self) -> IntMatrix {
        self.scale(&BigInt::from(-1))
    }

    pub fn pow(&self, mut e: u64) -> IntMatrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = IntMatrix::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = &self[(i, j)];
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn trace(&self) -> BigInt {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    /// Fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * &a[(n - 1, n - 1)]
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += c * row[src]
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * c;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += c * col[src]
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * c;
            self.data[i * self.cols + dst] += v;
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self.data[i * self.cols + j];
            self.data[i * self.cols + j] = v;
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -&self.data[i * self.cols + j];
            self.data[i * self.cols + j] = v;
        }
    }

    /// Columns `idx` as a new matrix.
    pub fn select_cols(&self, idx: &[usize]) -> IntMatrix {
        IntMatrix::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        IntMatrix::from_fn(idx.len(), self.cols, |i, j| self[(idx[i], j)].clone())
    }

    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        IntMatrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        IntMatrix::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self[(i, j)].clone()
            } else {
                other[(i - self.rows, j)].clone()
            }
        })
    }

    pub fn block_diag(blocks: &[&IntMatrix]) -> IntMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = IntMatrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(r0 + i, c0 + j)] = b[(i, j)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn to_rat(&self) -> RatMatrix {
        RatMatrix::new(self.clone(), BigInt::one())
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    /// Entries as i64, or None on overflow.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        use num_traits::ToPrimitive;
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_i64()).collect())
            .collect()
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{:?}", self.to_rows())
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Integer numerator over a single positive denominator, kept reduced.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    num: IntMatrix,
    den: BigInt,
}

impl RatMatrix {
    pub fn new(num: IntMatrix, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut m = RatMatrix { num, den };
        m.normalize();
        m
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            self.num = self.num.neg();
        }
        let mut g = self.den.clone();
        for x in self.num.entries() {
            if g.is_one() {
                break;
            }
            g = g.gcd(x);
        }
        if !g.is_one() {
            for x in self.num.data.iter_mut() {
                *x = &*x / &g;
            }
            self.den = &self.den / &g;
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix::zeros(rows, cols).to_rat()
    }

    pub fn identity(n: usize) -> Self {
        IntMatrix::identity(n).to_rat()
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let entries: Vec<BigRational> = (0..rows * cols).map(|k| f(k / cols.max(1), k % cols.max(1))).collect();
        Self::from_entries(rows, cols, &entries)
    }

    pub fn from_rat_rows(rows: &[RatVec]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        let flat: Vec<BigRational> = rows.iter().flatten().cloned().collect();
        Self::from_entries(r, c, &flat)
    }

    fn from_entries(rows: usize, cols: usize, entries: &[BigRational]) -> Self {
        let den = entries
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let num = IntMatrix {
            rows,
            cols,
            data: entries
                .iter()
                .map(|x| x.numer() * (&den / x.denom()))
                .collect(),
        };
        RatMatrix::new(num, den)
    }

    pub fn rows(&self) -> usize {
        self.num.rows
    }

    pub fn cols(&self) -> usize {
        self.num.cols
    }

    pub fn numer(&self) -> &IntMatrix {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    pub fn get(&self, i: usize, j: usize) -> BigRational {
        BigRational::new(self.num[(i, j)].clone(), self.den.clone())
    }

    pub fn row(&self, i: usize) -> RatVec {
        (0..self.cols()).map(|j| self.get(i, j)).collect()
    }

    pub fn col(&self, j: usize) -> RatVec {
        (0..self.rows()).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rat_rows(&self) -> Vec<RatVec> {
        (0..self.rows()).map(|i| self.row(i)).collect()
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// The numerator when the denominator is 1.
    pub fn to_int(&self) -> Option<IntMatrix> {
        self.is_integral().then(|| self.num.clone())
    }

    pub fn transpose(&self) -> Self {
        RatMatrix {
            num: self.num.transpose(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        RatMatrix::new(self.num.mul(&other.num), &self.den * &other.den)
    }

    pub fn mul_int(&self, other: &IntMatrix) -> RatMatrix {
        RatMatrix::new(self.num.mul(other), self.den.clone())
    }

    pub fn int_mul(a: &IntMatrix, b: &RatMatrix) -> RatMatrix {
        RatMatrix::new(a.mul(&b.num), b.den.clone())
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> RatVec {
        assert_eq!(self.cols(), v.len());
        (0..self.rows())
            .map(|i| {
                let s: BigRational = self
                    .num
                    .row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, _)| !a.is_zero())
                    .map(|(a, b)| b * a)
                    .sum();
                s / &self.den
            })
            .collect()
    }

    pub fn add(&self, other: &RatMatrix) -> RatMatrix {
        let den = self.den.lcm(&other.den);
        let a = self.num.scale(&(&den / &self.den));
        let b = other.num.scale(&(&den / &other.den));
        RatMatrix::new(a.add(&b), den)
    }

    pub fn sub(&self, other: &RatMatrix) -> RatMatrix {
        self.add(&other.scale(&BigRational::from_integer(BigInt::from(-1))))
    }

    pub fn scale(&self, c: &BigRational) -> RatMatrix {
        RatMatrix::new(self.num.scale(c.numer()), &self.den * c.denom())
    }

    pub fn is_symmetric(&self) -> bool {
        self.num.is_symmetric()
    }

    pub fn is_identity(&self) -> bool {
        self.den.is_one() && self.num.is_identity()
    }

    pub fn det(&self) -> BigRational {
        let n = self.rows();
        let d = self.num.det();
        BigRational::new(d, num_traits::pow(self.den.clone(), n))
    }

    pub fn block_diag(blocks: &[&RatMatrix]) -> RatMatrix {
        let den = blocks.iter().fold(BigInt::one(), |acc, b| acc.lcm(&b.den));
        let scaled: Vec<IntMatrix> = blocks.iter().map(|b| b.num.scale(&(&den / &b.den))).collect();
        let refs: Vec<&IntMatrix> = scaled.iter().collect();
        RatMatrix::new(IntMatrix::block_diag(&refs), den)
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn vstack(&self, other: &RatMatrix) -> RatMatrix {
        let den = self.den.lcm(&other.den);
        let a = self.num.scale(&(&den / &self.den));
        let b = other.num.scale(&(&den / &other.den));
        RatMatrix::new(a.vstack(&b), den)
    }

    pub fn select_cols(&self, idx: &[usize]) -> RatMatrix {
        RatMatrix::new(self.num.select_cols(idx), self.den.clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> RatMatrix {
        RatMatrix::new(self.num.select_rows(idx), self.den.clone())
    }

    pub fn inverse(&self) -> Result<RatMatrix> {
        rat_inverse(self)
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = self
            .to_rat_rows()
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect();
        write!(f, "RatMatrix{rows:?}")
    }
}

/// Gauss-Jordan over Q.
pub fn rat_inverse(a: &RatMatrix) -> Result<RatMatrix> {
    if a.rows() != a.cols() {
        return Err(Error::Shape(format!(
            "inverse of {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    // a = N/den, so a^{-1} = den * N^{-1}
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if j < n {
                        BigRational::from_integer(a.num[(i, j)].clone())
                    } else if j - n == i {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero()).ok_or(Error::SingularMatrix)?;
        m.swap(c, p);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x *= &inv;
        }
        let pivot = m[c].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == c || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
    }
    let den = BigRational::from_integer(a.den.clone());
    let entries: Vec<BigRational> = m
        .into_iter()
        .flat_map(|row| row.into_iter().skip(n).map(|x| x * &den).collect::<Vec<_>>())
        .collect();
    Ok(RatMatrix::from_entries(n, n, &entries))
}

/// Solves A X = B for square nonsingular A.
pub fn rat_solve(a: &RatMatrix, b: &RatMatrix) -> Result<RatMatrix> {
    Ok(rat_inverse(a)?.mul(b))
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int_rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Fractional part in [0, 1).
pub fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

pub fn is_integer(x: &BigRational) -> bool {
    x.is_integer()
}

pub fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Parses "p/q" or "p".
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            (!q.is_zero()).then(|| BigRational::new(p, q))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Reduced "p/q", or "p" for integers.
pub fn format_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
