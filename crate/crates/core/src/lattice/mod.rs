//! Positive-definite lattices given by exact Gram matrices.
//!
//! Vectors are always written in coordinates of the lattice basis, so `L`
//! itself is `Z^n` and `L*` is `G^{-1} Z^n`.

mod enumerate;
mod io;
mod roots;

pub use enumerate::{count_by_norm, min_nonzero_norm, short_vectors, shortest_in_coset, ShortVector};
pub use io::{lattice_from_json, lattice_to_json};
pub use roots::{root_lattice, RootSystem};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{frac, hnf_rows, int_solve_mod, rat_inverse, snf, IntMatrix, RatMatrix, RatVec};

#[derive(Clone, Debug, PartialEq)]
pub struct Lattice {
    gram: RatMatrix,
    name: Option<String>,
    /// Basis rows in coordinates of the lattice this one was built from.
    embedding: Option<RatMatrix>,
}

/// `L*/L` as a product of cyclic groups.
#[derive(Clone, Debug)]
pub struct Discriminant {
    /// Nontrivial invariant factors.
    pub orders: Vec<BigInt>,
    /// Generators as rows, in lattice-basis coordinates, reduced mod L.
    pub generators: RatMatrix,
    /// Rows of the SNF transform matching `orders`.
    u_rows: IntMatrix,
    gram: IntMatrix,
}

impl Lattice {
    pub fn new(gram: RatMatrix) -> Result<Lattice> {
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        if !is_positive_definite(&gram) {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(Lattice {
            gram,
            name: None,
            embedding: None,
        })
    }

    pub fn from_int_gram(gram: IntMatrix) -> Result<Lattice> {
        Self::new(gram.to_rat())
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Lattice> {
        Self::from_int_gram(IntMatrix::from_rows(rows))
    }

    pub fn zero() -> Lattice {
        Lattice {
            gram: RatMatrix::zeros(0, 0),
            name: None,
            embedding: None,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Lattice {
        self.name = Some(name.into());
        self
    }

    pub fn with_embedding(mut self, embedding: RatMatrix) -> Lattice {
        assert_eq!(embedding.rows(), self.rank());
        self.embedding = Some(embedding);
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn embedding(&self) -> Option<&RatMatrix> {
        self.embedding.as_ref()
    }

    pub fn gram(&self) -> &RatMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn det(&self) -> BigRational {
        self.gram.det()
    }

    pub fn is_integral(&self) -> bool {
        self.gram.is_integral()
    }

    pub fn is_even(&self) -> bool {
        self.is_integral() && (0..self.rank()).all(|i| self.gram.numer()[(i, i)].is_even())
    }

    pub fn is_doubly_even(&self) -> bool {
        let Some(g) = self.gram.to_int() else {
            return false;
        };
        let n = self.rank();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let m = if i == j { 4 } else { 2 };
                g[(i, j)].is_multiple_of(&BigInt::from(m))
            })
        })
    }

    /// Integer Gram matrix, or `NotIntegral`.
    pub fn int_gram(&self) -> Result<IntMatrix> {
        self.gram.to_int().ok_or(Error::NotIntegral)
    }

    pub fn inner(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        let gy = self.gram.mul_vec(y);
        x.iter().zip(&gy).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self, x: &[BigRational]) -> BigRational {
        self.inner(x, x)
    }

    /// Gram of the dual basis; its embedding rows are `G^{-1}` in the
    /// coordinates of `self`.
    pub fn dual(&self) -> Lattice {
        let inv = rat_inverse(&self.gram).expect("positive definite gram is invertible");
        Lattice {
            gram: inv.clone(),
            name: self.name.as_ref().map(|n| format!("{n}*")),
            embedding: Some(inv),
        }
    }

    pub fn rescale(&self, c: &BigRational) -> Result<Lattice> {
        if !c.is_positive() {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(Lattice {
            gram: self.gram.scale(c),
            name: self.name.as_ref().map(|n| format!("sqrt({c}){n}")),
            embedding: None,
        })
    }

    /// Rescales and insists the result is even.
    pub fn rescale_even(&self, c: &BigRational) -> Result<Lattice> {
        let l = self.rescale(c)?;
        if !l.is_even() {
            return Err(Error::NotEven);
        }
        Ok(l)
    }

    pub fn direct_sum(parts: &[Lattice]) -> Lattice {
        let grams: Vec<&RatMatrix> = parts.iter().map(|l| &l.gram).collect();
        let names: Option<Vec<&str>> = parts.iter().map(|l| l.name()).collect();
        Lattice {
            gram: RatMatrix::block_diag(&grams),
            name: names.map(|n| n.join(" + ")),
            embedding: None,
        }
    }

    /// Sublattice spanned by the columns of `basis` (integer coordinates,
    /// linearly independent).
    pub fn sublattice(&self, basis: &IntMatrix) -> Result<Lattice> {
        let b = basis.to_rat();
        let gram = b.transpose().mul(&self.gram).mul(&b);
        let l = Lattice::new(gram)?;
        Ok(l.with_embedding(b.transpose()))
    }

    /// Same as `sublattice` for a rational basis (e.g. inside `L*`).
    pub fn rat_sublattice(&self, basis: &RatMatrix) -> Result<Lattice> {
        let gram = basis.transpose().mul(&self.gram).mul(basis);
        let l = Lattice::new(gram)?;
        Ok(l.with_embedding(basis.transpose()))
    }

    /// Lattice generated by `L` and the glue vectors, with its index over `L`.
    pub fn overlattice(&self, glue: &[RatVec]) -> Result<(Lattice, BigInt)> {
        let n = self.rank();
        for v in glue {
            if v.len() != n {
                return Err(Error::Shape("glue vector length".into()));
            }
            if !self.gram.mul_vec(v).iter().all(|x| x.is_integer()) {
                return Err(Error::NotIntegral);
            }
        }
        for (i, v) in glue.iter().enumerate() {
            for w in &glue[..i] {
                if !self.inner(v, w).is_integer() {
                    return Err(Error::NotIntegral);
                }
            }
        }
        let mut gens: Vec<RatVec> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                    .collect()
            })
            .collect();
        gens.extend(glue.iter().cloned());
        let basis = lattice_basis(&gens, n);
        let gram = basis.mul(&self.gram).mul(&basis.transpose());
        if !gram.is_integral() {
            return Err(Error::NotIntegral);
        }
        let over = Lattice::new(gram)?.with_embedding(basis.clone());
        if self.is_even() && !over.is_even() {
            return Err(Error::NotEven);
        }
        let index = basis.det().abs().recip();
        debug_assert!(index.is_integer());
        Ok((over, index.to_integer()))
    }

    /// `{x in L : (f|x) in Z for every functional f}` and its index in `L`.
    pub fn kernel_sublattice(&self, functionals: &[RatVec]) -> Result<(Lattice, BigInt)> {
        let n = self.rank();
        if functionals.is_empty() {
            return Ok((
                self.clone().with_embedding(RatMatrix::identity(n)),
                BigInt::one(),
            ));
        }
        let rows: Vec<RatVec> = functionals.iter().map(|f| self.gram.mul_vec(f)).collect();
        let a = RatMatrix::from_rat_rows(&rows);
        let moduli = vec![a.denom().clone(); a.rows()];
        let basis = int_solve_mod(a.numer(), &moduli);
        let index = basis.det().abs();
        Ok((self.sublattice(&basis)?, index))
    }

    pub fn discriminant_group(&self) -> Result<Discriminant> {
        let g = self.int_gram()?;
        let res = snf(&g);
        let n = self.rank();
        let diag = res.diagonal();
        let keep: Vec<usize> = (0..n).filter(|&i| !diag[i].is_one()).collect();
        let orders: Vec<BigInt> = keep.iter().map(|&i| diag[i].clone()).collect();
        // generator i = G^{-1} U^{-1} e_i
        let u_inv = rat_inverse(&res.u.to_rat())?;
        let g_inv = rat_inverse(&g.to_rat())?;
        let cols = g_inv.mul(&u_inv).select_cols(&keep);
        let gens: Vec<RatVec> = (0..keep.len())
            .map(|j| cols.col(j).iter().map(frac).collect())
            .collect();
        let generators = if gens.is_empty() {
            RatMatrix::zeros(0, n)
        } else {
            RatMatrix::from_rat_rows(&gens)
        };
        Ok(Discriminant {
            orders,
            generators,
            u_rows: res.u.select_rows(&keep),
            gram: g,
        })
    }

    pub fn is_in_dual(&self, x: &[BigRational]) -> bool {
        self.gram.mul_vec(x).iter().all(|v| v.is_integer())
    }
}

impl Discriminant {
    pub fn order(&self) -> BigInt {
        self.orders.iter().product()
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn generator(&self, i: usize) -> RatVec {
        self.generators.row(i)
    }

    /// Coordinates of `x + L` with respect to the generators.
    pub fn coords(&self, x: &[BigRational]) -> Result<Vec<BigInt>> {
        let y = self.gram.to_rat().mul_vec(x);
        if !y.iter().all(|v| v.is_integer()) {
            return Err(Error::NotMember);
        }
        let y: Vec<BigInt> = y.iter().map(|v| v.to_integer()).collect();
        let uy = self.u_rows.mul_vec(&y);
        Ok(uy
            .iter()
            .zip(&self.orders)
            .map(|(c, m)| c.mod_floor(m))
            .collect())
    }

    /// Canonical representative of `sum c_i g_i + L`.
    pub fn element(&self, coords: &[BigInt]) -> RatVec {
        let n = self.generators.cols();
        let mut v = vec![BigRational::zero(); n];
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = BigRational::from_integer(c.clone());
            for (k, x) in self.generators.row(i).into_iter().enumerate() {
                v[k] += &c * x;
            }
        }
        reduce_mod_lattice(&v)
    }
}

/// Canonical representative of `x + Z^n`: every coordinate in [0, 1).
pub fn reduce_mod_lattice(x: &[BigRational]) -> RatVec {
    x.iter().map(frac).collect()
}

/// Basis (as rows) of the lattice generated by rational vectors.
pub fn lattice_basis(gens: &[RatVec], n: usize) -> RatMatrix {
    let m = RatMatrix::from_rat_rows(gens);
    let h = hnf_rows(m.numer());
    debug_assert_eq!(h.rows(), n);
    RatMatrix::new(h, m.denom().clone())
}

fn is_positive_definite(g: &RatMatrix) -> bool {
    let n = g.rows();
    let mut a: Vec<RatVec> = g.to_rat_rows();
    for k in 0..n {
        if !a[k][k].is_positive() {
            return false;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &a[k][k];
            for j in k..n {
                let v = &f * &a[k][j];
                a[i][j] -= v;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn a1() -> Lattice {
        Lattice::from_rows(&[vec![2]]).unwrap()
    }

    #[test]
    fn dual_of_a1() {
        let d = a1().dual();
        assert_eq!(d.gram().get(0, 0), rat(1, 2));
    }

    #[test]
    fn double_dual() {
        let a2 = root_lattice(RootSystem::A(2)).unwrap();
        assert_eq!(a2.dual().dual().gram(), a2.gram());
    }

    #[test]
    fn kernel_in_a1_dual() {
        let l = a1().dual();
        let (k, idx) = l.kernel_sublattice(&[vec![rat(1, 1)]]).unwrap();
        assert_eq!(idx, BigInt::from(2));
        assert_eq!(k.gram().get(0, 0), rat(2, 1));
    }

    #[test]
    fn empty_glue() {
        let a2 = root_lattice(RootSystem::A(2)).unwrap();
        let (o, idx) = a2.overlattice(&[]).unwrap();
        assert_eq!(idx, BigInt::one());
        assert_eq!(o.det(), a2.det());
    }

    #[test]
    fn a1_squared_glue_is_not_even() {
        let l = Lattice::direct_sum(&[a1(), a1()]);
        let glue = vec![vec![rat(1, 2), rat(1, 2)]];
        assert_eq!(l.overlattice(&glue).unwrap_err(), Error::NotEven);
    }

    #[test]
    fn d4_from_a1_to_the_four() {
        // A1^4 glued by (1/2)(1,1,1,1) is D4
        let l = Lattice::direct_sum(&[a1(), a1(), a1(), a1()]);
        let glue = vec![vec![rat(1, 2); 4]];
        let (o, idx) = l.overlattice(&glue).unwrap();
        assert_eq!(idx, BigInt::from(2));
        assert_eq!(o.det(), rat(4, 1));
        assert!(o.is_even());
    }

    #[test]
    fn not_positive_definite() {
        let g = IntMatrix::from_rows(&[vec![1, 2], vec![2, 1]]);
        assert_eq!(Lattice::from_int_gram(g).unwrap_err(), Error::NotPositiveDefinite);
    }

    #[test]
    fn discriminant_coords_round_trip() {
        let d4 = root_lattice(RootSystem::D(4)).unwrap();
        let disc = d4.discriminant_group().unwrap();
        assert_eq!(disc.orders, vec![BigInt::from(2), BigInt::from(2)]);
        for a in 0..2 {
            for b in 0..2 {
                let c = vec![BigInt::from(a), BigInt::from(b)];
                assert_eq!(disc.coords(&disc.element(&c)).unwrap(), c);
            }
        }
    }
}
