//! Finite quadratic spaces `(A, q)`, `q: A -> Q/Z`.
//!
//! A space is a product of cyclic groups `Z/m_i` with `q` and its polar form
//! `b(x, y) = q(x + y) - q(x) - q(y)` stored as integers over a common level
//! `N`: `q(e_i) = qn[i] / N`, `b(e_i, e_j) = bn[i][j] / N`.

mod iso;
mod io;

pub use iso::{is_isomorphic, verify_witness, IsomWitness};
pub use io::{space_from_json, space_to_json};

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::linalg::{frac, int_solve_mod, snf, IntMatrix};

/// Element tables are only built for spaces up to this size.
pub const ENUMERATION_LIMIT: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteQuadraticSpace {
    orders: Vec<u64>,
    level: u64,
    qn: Vec<u64>,
    bn: Vec<Vec<u64>>,
}

/// Result of `from_presentation`.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub space: FiniteQuadraticSpace,
    /// Row `i` maps a coefficient vector to coordinate `i` (reduce mod the order).
    pub coord_rows: IntMatrix,
    /// Coefficient vector of each generator of `space`.
    pub generators: Vec<Vec<BigInt>>,
}

impl Presentation {
    pub fn coords(&self, c: &[BigInt]) -> Vec<u64> {
        self.space
            .orders()
            .iter()
            .enumerate()
            .map(|(i, &m)| {
                let v: BigInt = (0..c.len()).map(|j| &self.coord_rows[(i, j)] * &c[j]).sum();
                v.mod_floor(&BigInt::from(m)).to_u64().unwrap()
            })
            .collect()
    }
}

/// A subgroup together with its inclusion into the ambient space.
#[derive(Clone, Debug)]
pub struct Subspace {
    pub space: FiniteQuadraticSpace,
    /// Image of each generator of `space` in ambient coordinates.
    pub embedding: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Invariants {
    pub order: u64,
    pub invariant_factors: Vec<u64>,
    /// Counts of elements by `(order, q)`; `None` above the enumeration limit.
    pub q_multiset: Option<BTreeMap<(u64, BigRational), u64>>,
    pub gauss_sum: (f64, f64),
}

fn to_level(x: &BigRational, level: u64) -> u64 {
    let v = frac(x) * BigRational::from_integer(BigInt::from(level));
    debug_assert!(v.is_integer());
    v.to_integer().to_u64().expect("value below level")
}

fn lcm_of_denoms<'a>(xs: impl IntoIterator<Item = &'a BigRational>) -> u64 {
    xs.into_iter()
        .fold(BigInt::one(), |a, x| a.lcm(frac(x).denom()))
        .to_u64()
        .expect("level fits in u64")
}

impl FiniteQuadraticSpace {
    /// Checks that `q` is a well defined quadratic form with polar form `b`.
    pub fn new(orders: Vec<u64>, q: Vec<BigRational>, b: Vec<Vec<BigRational>>) -> Result<Self> {
        let k = orders.len();
        if q.len() != k || b.len() != k || b.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidSpace("shape of q or b does not match orders".into()));
        }
        if orders.iter().any(|&m| m == 0) {
            return Err(Error::InvalidSpace("generator of infinite order".into()));
        }
        let level = lcm_of_denoms(q.iter().chain(b.iter().flatten()));
        let qn: Vec<u64> = q.iter().map(|x| to_level(x, level)).collect();
        let bn: Vec<Vec<u64>> = b
            .iter()
            .map(|r| r.iter().map(|x| to_level(x, level)).collect())
            .collect();
        let s = FiniteQuadraticSpace { orders, level, qn, bn };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        let n = self.level as u128;
        for i in 0..self.orders.len() {
            let m = self.orders[i] as u128;
            if (m * m % n) * self.qn[i] as u128 % n != 0 {
                return Err(Error::InvalidSpace(format!("m^2 q(e_{i}) is not integral")));
            }
            if self.bn[i][i] as u128 != 2 * self.qn[i] as u128 % n {
                return Err(Error::InvalidSpace(format!("b(e_{i}, e_{i}) != 2 q(e_{i})")));
            }
            for j in 0..self.orders.len() {
                if self.bn[i][j] != self.bn[j][i] {
                    return Err(Error::InvalidSpace("b is not symmetric".into()));
                }
                if m * self.bn[i][j] as u128 % n != 0 {
                    return Err(Error::InvalidSpace(format!("m_{i} b(e_{i}, e_{j}) is not integral")));
                }
            }
        }
        Ok(())
    }

    pub fn trivial() -> Self {
        FiniteQuadraticSpace {
            orders: Vec::new(),
            level: 1,
            qn: Vec::new(),
            bn: Vec::new(),
        }
    }

    /// `Z/m` with `q(1) = q`.
    pub fn cyclic(m: u64, q: BigRational) -> Result<Self> {
        let b = &q * BigRational::from_integer(2.into());
        Self::new(vec![m], vec![q], vec![vec![b]])
    }

    /// `(L*/L, (x|x)/2)` for an even lattice.
    pub fn from_lattice(l: &Lattice) -> Result<Self> {
        if !l.is_even() {
            return Err(Error::NotEven);
        }
        let disc = l.discriminant_group()?;
        let gens: Vec<_> = (0..disc.len()).map(|i| disc.generator(i)).collect();
        let half = BigRational::new(1.into(), 2.into());
        let q: Vec<BigRational> = gens.iter().map(|g| frac(&(l.norm(g) * &half))).collect();
        let b: Vec<Vec<BigRational>> = gens
            .iter()
            .map(|x| gens.iter().map(|y| frac(&l.inner(x, y))).collect())
            .collect();
        let orders = disc
            .orders
            .iter()
            .map(|m| m.to_u64().ok_or_else(|| Error::InvalidSpace("discriminant too large".into())))
            .collect::<Result<Vec<_>>>()?;
        Self::new(orders, q, b)
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn num_generators(&self) -> usize {
        self.orders.len()
    }

    /// `|A|`.
    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn q_gen(&self, i: usize) -> BigRational {
        BigRational::new(self.qn[i].into(), self.level.into())
    }

    pub fn b_gen(&self, i: usize, j: usize) -> BigRational {
        BigRational::new(self.bn[i][j].into(), self.level.into())
    }

    /// Numerator of `q(x)` over the level.
    pub fn q_num(&self, x: &[u64]) -> u64 {
        let n = self.level as u128;
        let mut acc: u128 = 0;
        for i in 0..x.len() {
            let xi = x[i] as u128 % n;
            if xi == 0 {
                continue;
            }
            acc = (acc + xi * xi % n * self.qn[i] as u128) % n;
            for j in i + 1..x.len() {
                let xj = x[j] as u128 % n;
                if xj != 0 {
                    acc = (acc + xi * xj % n * self.bn[i][j] as u128) % n;
                }
            }
        }
        acc as u64
    }

    pub fn b_num(&self, x: &[u64], y: &[u64]) -> u64 {
        let n = self.level as u128;
        let mut acc: u128 = 0;
        for i in 0..x.len() {
            let xi = x[i] as u128 % n;
            if xi == 0 {
                continue;
            }
            for j in 0..y.len() {
                let yj = y[j] as u128 % n;
                if yj != 0 {
                    acc = (acc + xi * yj % n * self.bn[i][j] as u128) % n;
                }
            }
        }
        acc as u64
    }

    pub fn q(&self, x: &[u64]) -> BigRational {
        BigRational::new(self.q_num(x).into(), self.level.into())
    }

    pub fn b(&self, x: &[u64], y: &[u64]) -> BigRational {
        BigRational::new(self.b_num(x, y).into(), self.level.into())
    }

    pub fn reduce(&self, x: &[i64]) -> Vec<u64> {
        x.iter()
            .zip(&self.orders)
            .map(|(&c, &m)| c.rem_euclid(m as i64) as u64)
            .collect()
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter()
            .zip(y)
            .zip(&self.orders)
            .map(|((a, b), m)| (a + b) % m)
            .collect()
    }

    pub fn scale(&self, k: u64, x: &[u64]) -> Vec<u64> {
        x.iter()
            .zip(&self.orders)
            .map(|(a, &m)| ((*a as u128 * k as u128) % m as u128) as u64)
            .collect()
    }

    pub fn element_order(&self, x: &[u64]) -> u64 {
        x.iter()
            .zip(&self.orders)
            .fold(1u64, |acc, (&c, &m)| acc.lcm(&(m / m.gcd(&c))))
    }

    pub fn is_member(&self, x: &[u64]) -> bool {
        x.len() == self.orders.len() && x.iter().zip(&self.orders).all(|(c, m)| c < m)
    }

    pub fn index_of(&self, x: &[u64]) -> u64 {
        let mut idx = 0u64;
        for (c, m) in x.iter().zip(&self.orders).rev() {
            idx = idx * m + c;
        }
        idx
    }

    pub fn element_at(&self, mut idx: u64) -> Vec<u64> {
        self.orders
            .iter()
            .map(|&m| {
                let c = idx % m;
                idx /= m;
                c
            })
            .collect()
    }

    /// Elements in index order (first coordinate fastest).
    pub fn elements(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        (0..self.order()).map(|i| self.element_at(i))
    }

    pub fn negate(&self) -> Self {
        let n = self.level;
        FiniteQuadraticSpace {
            orders: self.orders.clone(),
            level: n,
            qn: self.qn.iter().map(|&x| (n - x) % n).collect(),
            bn: self
                .bn
                .iter()
                .map(|r| r.iter().map(|&x| (n - x) % n).collect())
                .collect(),
        }
    }

    pub fn orth_sum(&self, other: &Self) -> Self {
        let level = self.level.lcm(&other.level);
        let (f1, f2) = (level / self.level, level / other.level);
        let k1 = self.orders.len();
        let k = k1 + other.orders.len();
        let mut bn = vec![vec![0u64; k]; k];
        for i in 0..k1 {
            for j in 0..k1 {
                bn[i][j] = self.bn[i][j] * f1;
            }
        }
        for i in 0..other.orders.len() {
            for j in 0..other.orders.len() {
                bn[k1 + i][k1 + j] = other.bn[i][j] * f2;
            }
        }
        let mut s = FiniteQuadraticSpace {
            orders: self.orders.iter().chain(&other.orders).copied().collect(),
            level,
            qn: self
                .qn
                .iter()
                .map(|x| x * f1)
                .chain(other.qn.iter().map(|x| x * f2))
                .collect(),
            bn,
        };
        s.shrink_level();
        s
    }

    fn shrink_level(&mut self) {
        let g = self
            .qn
            .iter()
            .chain(self.bn.iter().flatten())
            .fold(self.level, |a, &x| a.gcd(&x));
        if g > 1 {
            self.level /= g;
            self.qn.iter_mut().for_each(|x| *x /= g);
            self.bn.iter_mut().flatten().for_each(|x| *x /= g);
        }
    }

    /// The space `Z^k / R` with `R` spanned by the columns of `relations`
    /// and `q` given on coefficient vectors by `qfun`.
    pub fn from_presentation(
        k: usize,
        relations: &IntMatrix,
        qfun: impl Fn(&[BigInt]) -> BigRational,
    ) -> Result<Presentation> {
        assert_eq!(relations.rows(), k);
        let unit = |i: usize| -> Vec<BigInt> {
            (0..k).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()
        };
        let q_at = |v: &[BigInt]| frac(&qfun(v));
        // relations must be radical and q-isotropic, or q is not well defined
        for c in 0..relations.cols() {
            let r = relations.col(c);
            let qr = q_at(&r);
            if !qr.is_zero() {
                return Err(Error::InvalidSpace("q does not vanish on a relation".into()));
            }
            for i in 0..k {
                let e = unit(i);
                let sum: Vec<BigInt> = e.iter().zip(&r).map(|(a, b)| a + b).collect();
                if q_at(&sum) != q_at(&e) {
                    return Err(Error::InvalidSpace("q is not constant on cosets".into()));
                }
            }
        }
        let res = snf(relations);
        let diag = res.diagonal();
        let mut s_full = vec![BigInt::zero(); k];
        for (i, d) in diag.iter().enumerate() {
            s_full[i] = d.clone();
        }
        if s_full.iter().any(Zero::is_zero) {
            return Err(Error::InvalidSpace("presentation defines an infinite group".into()));
        }
        let keep: Vec<usize> = (0..k).filter(|&i| !s_full[i].is_one()).collect();
        let u_inv = crate::linalg::rat_inverse(&res.u.to_rat())?
            .to_int()
            .expect("unimodular inverse is integral");
        let gens: Vec<Vec<BigInt>> = keep.iter().map(|&i| u_inv.col(i)).collect();
        let q: Vec<BigRational> = gens.iter().map(|g| q_at(g)).collect();
        let mut b = vec![vec![BigRational::zero(); gens.len()]; gens.len()];
        for i in 0..gens.len() {
            for j in 0..gens.len() {
                let sum: Vec<BigInt> = gens[i].iter().zip(&gens[j]).map(|(x, y)| x + y).collect();
                b[i][j] = frac(&(q_at(&sum) - &q[i] - &q[j]));
            }
        }
        let orders: Vec<u64> = keep
            .iter()
            .map(|&i| s_full[i].to_u64().expect("order fits in u64"))
            .collect();
        let space = Self::new(orders, q, b)?;
        Ok(Presentation {
            space,
            coord_rows: res.u.select_rows(&keep),
            generators: gens,
        })
    }

    /// Coordinates of `sum_j c_j h_j` for integer coefficients.
    fn combine(&self, gens: &[Vec<u64>], c: &[BigInt]) -> Vec<u64> {
        let mut x = vec![0u64; self.orders.len()];
        for (g, cj) in gens.iter().zip(c) {
            for (i, &m) in self.orders.iter().enumerate() {
                let v = (BigInt::from(g[i]) * cj).mod_floor(&BigInt::from(m));
                x[i] = (x[i] + v.to_u64().unwrap()) % m;
            }
        }
        x
    }

    /// Subgroup generated by `gens` with the restricted form.
    pub fn subspace(&self, gens: &[Vec<u64>]) -> Result<Subspace> {
        if gens.iter().any(|g| !self.is_member(g)) {
            return Err(Error::NotMember);
        }
        let k = gens.len();
        if k == 0 {
            return Ok(Subspace {
                space: Self::trivial(),
                embedding: Vec::new(),
            });
        }
        let n = self.orders.len();
        let h = IntMatrix::from_fn(n, k, |i, j| BigInt::from(gens[j][i]));
        let moduli: Vec<BigInt> = self.orders.iter().map(|&m| BigInt::from(m)).collect();
        let relations = int_solve_mod(&h, &moduli);
        let pres = Self::from_presentation(k, &relations, |c| self.q(&self.combine(gens, c)))?;
        let embedding = pres.generators.iter().map(|c| self.combine(gens, c)).collect();
        let space = pres.space;
        Ok(Subspace { space, embedding })
    }

    /// `{x : b(x, h) = 0 for all h in H}`.
    pub fn orthogonal_complement(&self, h: &[Vec<u64>]) -> Result<Subspace> {
        if h.iter().any(|g| !self.is_member(g)) {
            return Err(Error::NotMember);
        }
        let n = self.orders.len();
        if h.is_empty() || n == 0 {
            let gens: Vec<Vec<u64>> = (0..n)
                .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
                .collect();
            return self.subspace(&gens);
        }
        let unit = |i: usize| -> Vec<u64> { (0..n).map(|j| u64::from(i == j)).collect() };
        let c = IntMatrix::from_fn(h.len(), n, |j, i| BigInt::from(self.b_num(&unit(i), &h[j])));
        let moduli = vec![BigInt::from(self.level); h.len()];
        let basis = int_solve_mod(&c, &moduli);
        let gens: Vec<Vec<u64>> = (0..basis.cols())
            .map(|j| {
                (0..n)
                    .map(|i| basis[(i, j)].mod_floor(&BigInt::from(self.orders[i])).to_u64().unwrap())
                    .collect()
            })
            .collect();
        self.subspace(&gens)
    }

    pub fn invariant_factors(&self) -> Vec<u64> {
        let d = IntMatrix::diagonal(&self.orders.iter().map(|&m| BigInt::from(m)).collect::<Vec<_>>());
        snf(&d)
            .diagonal()
            .iter()
            .filter(|x| !x.is_one())
            .map(|x| x.to_u64().unwrap())
            .collect()
    }

    pub fn primes(&self) -> Vec<u64> {
        let mut n = self.order();
        let mut out = Vec::new();
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                out.push(p);
                while n % p == 0 {
                    n /= p;
                }
            }
            p += 1;
        }
        if n > 1 {
            out.push(n);
        }
        out
    }

    /// The `p`-primary component.
    pub fn primary_part(&self, p: u64) -> Result<Subspace> {
        let n = self.orders.len();
        let mut gens = Vec::new();
        for (i, &m) in self.orders.iter().enumerate() {
            let mut pa = 1;
            while m % (pa * p) == 0 {
                pa *= p;
            }
            if pa > 1 {
                let mut g = vec![0u64; n];
                g[i] = m / pa;
                gens.push(g);
            }
        }
        self.subspace(&gens)
    }

    pub fn gauss_sum(&self) -> (f64, f64) {
        let n = self.level as f64;
        let (mut re, mut im) = (0.0, 0.0);
        for x in self.elements() {
            let t = 2.0 * std::f64::consts::PI * self.q_num(&x) as f64 / n;
            re += t.cos();
            im += t.sin();
        }
        (re, im)
    }

    pub fn q_multiset(&self) -> BTreeMap<(u64, BigRational), u64> {
        let mut counts: HashMap<(u64, u64), u64> = HashMap::new();
        for x in self.elements() {
            *counts.entry((self.element_order(&x), self.q_num(&x))).or_insert(0) += 1;
        }
        counts
            .into_iter()
            .map(|((o, q), c)| ((o, BigRational::new(q.into(), self.level.into())), c))
            .collect()
    }

    pub fn invariants(&self) -> Invariants {
        let small = self.order() <= ENUMERATION_LIMIT;
        Invariants {
            order: self.order(),
            invariant_factors: self.invariant_factors(),
            q_multiset: small.then(|| self.q_multiset()),
            gauss_sum: if small { self.gauss_sum() } else { (f64::NAN, f64::NAN) },
        }
    }
}
