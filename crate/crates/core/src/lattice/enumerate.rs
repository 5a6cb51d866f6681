//! Fincke-Pohst enumeration of short vectors in a coset `c + L`.
//!
//! The search runs in floating point on an LLL-reduced basis with a widened
//! bound; every candidate is then checked exactly in integer arithmetic.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::Lattice;
use crate::linalg::RatVec;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ShortVector {
    pub norm: BigRational,
    pub coords: RatVec,
}

struct Setup {
    n: usize,
    /// Integer gram numerator and the scale `gd * cd^2` dividing every norm.
    gram: Vec<Vec<i128>>,
    norm_den: i128,
    /// Coset representative numerator, with common denominator `cd`.
    c_num: Vec<i128>,
    cd: i128,
    /// Unimodular change of basis, columns are the reduced basis.
    t: Vec<Vec<i64>>,
    /// Coset representative in reduced coordinates.
    c_red: Vec<f64>,
    chol_q: Vec<Vec<f64>>,
}

fn to_i128(x: &BigInt) -> i128 {
    x.to_i128().expect("short vector enumeration needs small entries")
}

fn setup(l: &Lattice, coset: &[BigRational]) -> Setup {
    let n = l.rank();
    assert_eq!(coset.len(), n, "coset representative has wrong length");
    let gd = to_i128(l.gram().denom());
    let gram: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| to_i128(&l.gram().numer()[(i, j)])).collect())
        .collect();
    let cd_big = coset.iter().fold(BigInt::one(), |a, x| a.lcm(x.denom()));
    let cd = to_i128(&cd_big);
    let c_num: Vec<i128> = coset
        .iter()
        .map(|x| to_i128(&(x.numer() * (&cd_big / x.denom()))))
        .collect();
    let gf: Vec<Vec<f64>> = gram
        .iter()
        .map(|r| r.iter().map(|&x| x as f64 / gd as f64).collect())
        .collect();
    let t = lll(&gf);
    // reduced gram T^t G T, exact then converted
    let mut gred = vec![vec![0f64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut s: i128 = 0;
            for a in 0..n {
                if t[a][i] == 0 {
                    continue;
                }
                for b in 0..n {
                    s += t[a][i] as i128 * gram[a][b] * t[b][j] as i128;
                }
            }
            gred[i][j] = s as f64 / gd as f64;
        }
    }
    let c_red = solve_unimodular(&t, &c_num.iter().map(|&x| x as f64 / cd as f64).collect::<Vec<_>>());
    Setup {
        n,
        gram,
        norm_den: gd * cd * cd,
        c_num,
        cd,
        t,
        c_red,
        chol_q: cholesky_q(&gred),
    }
}

/// LLL with delta = 0.99 on a float gram matrix; returns the integer
/// transform with columns giving the reduced basis.
fn lll(g0: &[Vec<f64>]) -> Vec<Vec<i64>> {
    let n = g0.len();
    let mut g = g0.to_vec();
    let mut t: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    if n < 2 {
        return t;
    }
    let gram_schmidt = |g: &Vec<Vec<f64>>| {
        let mut mu = vec![vec![0f64; n]; n];
        let mut b = vec![0f64; n];
        for i in 0..n {
            for j in 0..i {
                let mut s = g[i][j];
                for k in 0..j {
                    s -= mu[j][k] * mu[i][k] * b[k];
                }
                mu[i][j] = s / b[j];
            }
            let mut s = g[i][i];
            for k in 0..i {
                s -= mu[i][k] * mu[i][k] * b[k];
            }
            b[i] = s;
        }
        (mu, b)
    };
    let mut k = 1;
    let mut steps = 0usize;
    while k < n && steps < 100_000 {
        steps += 1;
        for j in (0..k).rev() {
            let (mu, _) = gram_schmidt(&g);
            let q = mu[k][j].round();
            if q == 0.0 {
                continue;
            }
            let qi = q as i64;
            // b_k -= q b_j
            for row in t.iter_mut() {
                row[k] -= qi * row[j];
            }
            for i in 0..n {
                g[k][i] -= q * g[j][i];
            }
            for i in 0..n {
                g[i][k] -= q * g[i][j];
            }
        }
        let (mu, b) = gram_schmidt(&g);
        if b[k] < (0.99 - mu[k][k - 1] * mu[k][k - 1]) * b[k - 1] {
            for row in t.iter_mut() {
                row.swap(k, k - 1);
            }
            g.swap(k, k - 1);
            for row in g.iter_mut() {
                row.swap(k, k - 1);
            }
            k = (k - 1).max(1);
        } else {
            k += 1;
        }
    }
    t
}

fn solve_unimodular(t: &[Vec<i64>], c: &[f64]) -> Vec<f64> {
    // Gaussian elimination in f64; t is small and well conditioned after LLL
    let n = t.len();
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row: Vec<f64> = t[i].iter().map(|&x| x as f64).collect();
            row.push(c[i]);
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap();
        a.swap(col, p);
        let pv = a[col][col];
        for row in col + 1..n {
            let f = a[row][col] / pv;
            if f != 0.0 {
                for k in col..=n {
                    a[row][k] -= f * a[col][k];
                }
            }
        }
    }
    let mut x = vec![0f64; n];
    for i in (0..n).rev() {
        let mut s = a[i][n];
        for k in i + 1..n {
            s -= a[i][k] * x[k];
        }
        x[i] = s / a[i][i];
    }
    x
}

/// `Q` with `x^t G x = sum_i Q_ii (x_i + sum_{j>i} Q_ij x_j)^2`.
fn cholesky_q(g: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = g.len();
    let mut q = g.to_vec();
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    q
}

impl Setup {
    fn exact_norm(&self, x: &[i64]) -> i128 {
        let w: Vec<i128> = (0..self.n)
            .map(|i| self.cd * x[i] as i128 + self.c_num[i])
            .collect();
        let mut s = 0i128;
        for i in 0..self.n {
            if w[i] == 0 {
                continue;
            }
            let mut r = 0i128;
            for j in 0..self.n {
                r += self.gram[i][j] * w[j];
            }
            s += w[i] * r;
        }
        s
    }

    /// Calls `f(x, norm_numerator)` for each offset `x` with `x + c` of norm
    /// at most `bound_num / norm_den`.
    fn run(&self, bound_num: i128, mut f: impl FnMut(&[i64], i128)) {
        let n = self.n;
        if n == 0 {
            if bound_num >= 0 {
                f(&[], 0);
            }
            return;
        }
        let bound = bound_num as f64 / self.norm_den as f64;
        let slack = 1e-9 * (1.0 + bound.abs());
        let q = &self.chol_q;
        let mut y = vec![0i64; n];
        let mut x = vec![0i64; n];
        let mut rem = vec![0f64; n + 1];
        rem[n] = bound + slack;
        let mut hi = vec![0i64; n];
        let mut center = vec![0f64; n];
        let mut level = n;
        // descend
        let enter = |i: usize, y: &[i64], rem: &[f64], center: &mut [f64]| -> Option<(i64, i64)> {
            let mut c = 0f64;
            for j in i + 1..n {
                c += q[i][j] * (y[j] as f64 + self.c_red[j]);
            }
            let mid = -c - self.c_red[i];
            center[i] = mid;
            let r = rem[i + 1];
            if r < 0.0 {
                return None;
            }
            let w = (r / q[i][i]).sqrt() + 1e-9;
            let lo = (mid - w).ceil() as i64;
            let hi = (mid + w).floor() as i64;
            (lo <= hi).then_some((lo, hi))
        };
        // iterative depth-first walk
        loop {
            if level == 0 {
                for (i, xi) in x.iter_mut().enumerate() {
                    *xi = (0..n).map(|k| self.t[i][k] * y[k]).sum();
                }
                let nn = self.exact_norm(&x);
                if nn <= bound_num {
                    f(&x, nn);
                }
            } else {
                let i = level - 1;
                if let Some((lo, h)) = enter(i, &y, &rem, &mut center) {
                    y[i] = lo;
                    hi[i] = h;
                    let z = y[i] as f64 - center[i];
                    rem[i] = rem[i + 1] - q[i][i] * z * z;
                    level = i;
                    continue;
                }
                level = i + 1;
            }
            // advance at `level`, climbing while exhausted
            loop {
                if level == n {
                    return;
                }
                let i = level;
                if y[i] < hi[i] {
                    y[i] += 1;
                    let z = y[i] as f64 - center[i];
                    rem[i] = rem[i + 1] - q[i][i] * z * z;
                    break;
                }
                level += 1;
            }
        }
    }
}

fn bound_numerator(s: &Setup, max_norm: &BigRational) -> Option<i128> {
    // floor(max_norm * norm_den)
    let scaled = max_norm * BigRational::from_integer(BigInt::from(s.norm_den));
    if scaled < BigRational::zero() {
        return None;
    }
    scaled.floor().to_integer().to_i128()
}

/// All vectors of `coset + L` with norm at most `max_norm`, sorted by norm
/// then coordinates.
pub fn short_vectors(l: &Lattice, coset: &[BigRational], max_norm: &BigRational) -> Vec<ShortVector> {
    let s = setup(l, coset);
    let Some(b) = bound_numerator(&s, max_norm) else {
        return Vec::new();
    };
    let den = BigInt::from(s.norm_den);
    let mut out = Vec::new();
    s.run(b, |x, nn| {
        let coords = x
            .iter()
            .zip(coset)
            .map(|(&xi, c)| c + BigInt::from(xi))
            .collect();
        out.push(ShortVector {
            norm: BigRational::new(BigInt::from(nn), den.clone()),
            coords,
        });
    });
    out.sort();
    out.dedup();
    out
}

/// Number of coset vectors of each norm up to `max_norm`.
pub fn count_by_norm(
    l: &Lattice,
    coset: &[BigRational],
    max_norm: &BigRational,
) -> BTreeMap<BigRational, u64> {
    let s = setup(l, coset);
    let Some(b) = bound_numerator(&s, max_norm) else {
        return BTreeMap::new();
    };
    let mut raw: BTreeMap<i128, u64> = BTreeMap::new();
    s.run(b, |_, nn| *raw.entry(nn).or_insert(0) += 1);
    let den = BigInt::from(s.norm_den);
    raw.into_iter()
        .map(|(k, v)| (BigRational::new(BigInt::from(k), den.clone()), v))
        .collect()
}

/// Smallest nonzero norm in `L` that is at most `bound`.
pub fn min_nonzero_norm(l: &Lattice, bound: &BigRational) -> Option<BigRational> {
    let zero = vec![BigRational::zero(); l.rank()];
    count_by_norm(l, &zero, bound)
        .into_keys()
        .find(|k| !k.is_zero())
}

/// A vector of smallest norm in `coset + L`.
pub fn shortest_in_coset(l: &Lattice, coset: &[BigRational]) -> RatVec {
    let cap = l.norm(coset);
    let mut bound = BigRational::from_integer(BigInt::from(2));
    loop {
        if bound > cap {
            bound = cap.clone();
        }
        if let Some(v) = short_vectors(l, coset, &bound).into_iter().next() {
            return v.coords;
        }
        if bound >= cap {
            return coset.to_vec();
        }
        bound = bound * BigRational::from_integer(BigInt::from(2));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{root_lattice, RootSystem};
    use crate::linalg::{int_rat, rat};

    #[test]
    fn a1_three_vectors() {
        let a1 = root_lattice(RootSystem::A(1)).unwrap();
        let v = short_vectors(&a1, &[int_rat(0)], &int_rat(2));
        assert_eq!(v.len(), 3);
    }

    #[test]
    fn e8_roots() {
        let e8 = root_lattice(RootSystem::E(8)).unwrap();
        let zero = vec![int_rat(0); 8];
        let counts = count_by_norm(&e8, &zero, &int_rat(4));
        assert_eq!(counts[&int_rat(2)], 240);
        assert_eq!(counts[&int_rat(4)], 2160);
    }

    #[test]
    fn a2_dual_coset() {
        let a2 = root_lattice(RootSystem::A(2)).unwrap();
        let c = vec![rat(1, 3), rat(2, 3)];
        let v = short_vectors(&a2, &c, &rat(2, 3));
        assert_eq!(v.len(), 3);
        assert!(v.iter().all(|s| s.norm == rat(2, 3)));
    }

    #[test]
    fn negative_bound_is_empty() {
        let a1 = root_lattice(RootSystem::A(1)).unwrap();
        assert!(short_vectors(&a1, &[int_rat(0)], &int_rat(-1)).is_empty());
    }
}
