use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::IntMatrix;
use crate::error::{Error, Result};

/// Integer polynomial, coefficients from degree 0 upwards.
pub type Poly = Vec<BigInt>;

/// `{d -> m_d}` with `det(xI - g) = prod (x^d - 1)^{m_d}`. Exponents may be
/// negative: only the product has to be a polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct FrameShape(BTreeMap<u64, i64>);

impl FrameShape {
    pub fn new(map: BTreeMap<u64, i64>) -> Self {
        FrameShape(map.into_iter().filter(|&(_, m)| m != 0).collect())
    }

    pub fn from_pairs(pairs: &[(u64, i64)]) -> Self {
        let mut map = BTreeMap::new();
        for &(d, m) in pairs {
            *map.entry(d).or_insert(0) += m;
        }
        Self::new(map)
    }

    pub fn get(&self, d: u64) -> i64 {
        self.0.get(&d).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.0.iter().map(|(&d, &m)| (d, m))
    }

    pub fn rank(&self) -> i64 {
        self.iter().map(|(d, m)| d as i64 * m).sum()
    }

    /// Multiplicity of the eigenvalue `exp(2 pi i j / p)` for `p` a multiple of
    /// every `d` in the shape.
    pub fn eigen_multiplicity(&self, p: u64, j: u64) -> i64 {
        self.iter()
            .filter(|&(d, _)| p % d == 0 && j % (p / d) == 0)
            .map(|(_, m)| m)
            .sum()
    }

    pub fn merge(&self, other: &FrameShape) -> FrameShape {
        let mut map = self.0.clone();
        for (d, m) in other.iter() {
            *map.entry(d).or_insert(0) += m;
        }
        FrameShape::new(map)
    }
}

impl fmt::Display for FrameShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1^0");
        }
        let parts: Vec<String> = self
            .iter()
            .map(|(d, m)| if m == 1 { d.to_string() } else { format!("{d}^{m}") })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for FrameShape {
    type Err = Error;

    /// Accepts "1^4 2^2 4^4" as well as bare factors like "2 4".
    fn from_str(s: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for tok in s.split_whitespace() {
            let (d, m) = match tok.split_once('^') {
                Some((d, m)) => (d, m),
                None => (tok, "1"),
            };
            let d: u64 = d
                .parse()
                .map_err(|_| Error::parse("frame shape", format!("bad factor {tok:?}")))?;
            let m: i64 = m
                .parse()
                .map_err(|_| Error::parse("frame shape", format!("bad exponent {tok:?}")))?;
            if d == 0 {
                return Err(Error::parse("frame shape", "cycle length 0"));
            }
            pairs.push((d, m));
        }
        Ok(FrameShape::from_pairs(&pairs))
    }
}

impl From<FrameShape> for String {
    fn from(f: FrameShape) -> String {
        f.to_string()
    }
}

impl TryFrom<String> for FrameShape {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// `det(xI - a)` by Faddeev-LeVerrier; every division is exact over Z.
pub fn char_poly(a: &IntMatrix) -> Poly {
    assert!(a.is_square());
    let n = a.rows();
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    let mut m = IntMatrix::zeros(n, n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        m = a.mul(&m);
        for i in 0..n {
            m[(i, i)] += &c[n - k + 1];
        }
        let t = a.mul(&m).trace();
        c[n - k] = -t / BigInt::from(k);
    }
    c
}

fn trim(p: &mut Poly) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

pub fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Poly {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// Division by a monic polynomial; `None` unless the remainder is zero.
pub fn poly_div_exact(a: &[BigInt], b: &[BigInt]) -> Option<Poly> {
    let mut r: Poly = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    debug_assert!(b[db].is_one());
    if r.len() < b.len() {
        return r.iter().all(Zero::is_zero).then(|| vec![BigInt::zero()]);
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let coef = r[k + db].clone();
        if coef.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &coef * bj;
        }
        q[k] = coef;
    }
    r.iter().all(Zero::is_zero).then(|| {
        trim(&mut q);
        q
    })
}

fn x_pow_minus_one(d: u64) -> Poly {
    let mut p = vec![BigInt::zero(); d as usize + 1];
    p[0] = BigInt::from(-1);
    p[d as usize] = BigInt::one();
    p
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

fn mobius(mut n: u64) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// The e-th cyclotomic polynomial.
pub fn cyclotomic(e: u64) -> Poly {
    let mut p = x_pow_minus_one(e);
    for d in divisors(e) {
        if d < e {
            p = poly_div_exact(&p, &cyclotomic(d)).expect("cyclotomic division is exact");
        }
    }
    p
}

/// Frame shape of `m`, which must satisfy `m^order = I`.
///
/// The characteristic polynomial is peeled into cyclotomic factors and the
/// exponents of `(x^d - 1)` recovered by Moebius inversion, so negative
/// exponents come out naturally.
pub fn frame_shape(m: &IntMatrix, order: u64) -> Result<FrameShape> {
    if order == 0 || !m.pow(order).is_identity() {
        return Err(Error::NotFrameShaped);
    }
    let mut p = char_poly(m);
    let divs = divisors(order);
    let mut c: BTreeMap<u64, i64> = BTreeMap::new();
    for &e in &divs {
        let phi = cyclotomic(e);
        while let Some(q) = poly_div_exact(&p, &phi) {
            if p.len() == 1 {
                break;
            }
            p = q;
            *c.entry(e).or_insert(0) += 1;
        }
    }
    if !(p.len() == 1 && p[0].is_one()) {
        return Err(Error::NotFrameShaped);
    }
    let mut shape = BTreeMap::new();
    for &d in &divs {
        let m_d: i64 = divs
            .iter()
            .filter(|&&e| e % d == 0)
            .map(|&e| mobius(e / d) * c.get(&e).copied().unwrap_or(0))
            .sum();
        shape.insert(d, m_d);
    }
    Ok(FrameShape::new(shape))
}

/// `prod (x^d - 1)^{m_d}` when it is a polynomial.
pub fn poly_from_frame_shape(shape: &FrameShape) -> Option<Poly> {
    let mut num: Poly = vec![BigInt::one()];
    let mut den: Poly = vec![BigInt::one()];
    for (d, m) in shape.iter() {
        let f = x_pow_minus_one(d);
        for _ in 0..m.unsigned_abs() {
            if m > 0 {
                num = poly_mul(&num, &f);
            } else {
                den = poly_mul(&den, &f);
            }
        }
    }
    // (x^d - 1) has leading coefficient 1, so den is monic
    poly_div_exact(&num, &den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_shape() {
        let f = frame_shape(&IntMatrix::identity(5), 1).unwrap();
        assert_eq!(f, FrameShape::from_pairs(&[(1, 5)]));
    }

    #[test]
    fn minus_identity_shape() {
        // (x + 1)^24 = (x^2 - 1)^24 / (x - 1)^24
        let m = IntMatrix::identity(24).neg();
        let f = frame_shape(&m, 2).unwrap();
        assert_eq!(f, FrameShape::from_pairs(&[(1, -24), (2, 24)]));
        assert_eq!(poly_from_frame_shape(&f).unwrap(), char_poly(&m));
    }

    #[test]
    fn cyclic_permutation() {
        let m = IntMatrix::from_rows(&[vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(frame_shape(&m, 3).unwrap(), FrameShape::from_pairs(&[(3, 1)]));
    }

    #[test]
    fn wrong_order_rejected() {
        let m = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(frame_shape(&m, 3), Err(Error::NotFrameShaped));
    }

    #[test]
    fn cyclotomic_small() {
        let c6 = cyclotomic(6);
        assert_eq!(c6, vec![BigInt::from(1), BigInt::from(-1), BigInt::from(1)]);
    }

    #[test]
    fn parse_display() {
        let f: FrameShape = "1^4 2^2 4^4".parse().unwrap();
        assert_eq!(f.rank(), 24);
        assert_eq!(f.to_string(), "1^4 2^2 4^4");
        let g: FrameShape = "1^2 2 4 8^2".parse().unwrap();
        assert_eq!(g.to_string(), "1^2 2 4 8^2");
    }

    #[test]
    fn eigenvalue_counts_4c() {
        let f: FrameShape = "1^4 2^2 4^4".parse().unwrap();
        let r: Vec<i64> = (1..4).map(|j| f.eigen_multiplicity(4, j)).collect();
        assert_eq!(r, vec![4, 6, 4]);
    }
}
