//! Isometries of lattices and the numerical invariants of their lifts.
//!
//! Matrices act on coordinate columns: the image of basis vector `e_j` is
//! column `j`, so `x -> M x` and `M^t G M = G`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::lattice::{lattice_from_json, lattice_to_json, reduce_mod_lattice, shortest_in_coset, Lattice};
use crate::linalg::{
    frac, frame_shape, int_kernel, int_rat, int_solve_mod, rat, rat_inverse, snf, FrameShape,
    IntMatrix, RatMatrix, RatVec,
};

#[derive(Clone, Debug)]
pub struct Isometry {
    lattice: Lattice,
    matrix: IntMatrix,
}

/// Order data of the standard lift `phi_g`.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftData {
    pub p: u64,
    pub n: u64,
    /// `phi_g^p = sigma_h`; present when `n = 2p`. Coordinates in `[0, 1)`.
    pub h: Option<RatVec>,
    pub u: Option<RatVec>,
    pub h_norm: Option<BigRational>,
    pub u_norm: Option<BigRational>,
}

/// `coeff * sqrt(radicand)` with a square-free radicand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantumDimension {
    pub coeff: BigRational,
    pub radicand: BigInt,
}

impl QuantumDimension {
    pub fn sqrt_of(q: &BigRational) -> QuantumDimension {
        assert!(!q.is_negative());
        // sqrt(a/b) = sqrt(ab)/b
        let ab = q.numer() * q.denom();
        let (s, r) = square_part(&ab);
        QuantumDimension {
            coeff: BigRational::new(s, q.denom().clone()),
            radicand: r,
        }
    }

    pub fn is_one(&self) -> bool {
        self.coeff.is_one() && self.radicand.is_one()
    }
}

impl std::fmt::Display for QuantumDimension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.radicand.is_one() {
            write!(f, "{}", self.coeff)
        } else {
            write!(f, "{}*sqrt({})", self.coeff, self.radicand)
        }
    }
}

/// `n = s^2 r` with `r` square-free.
fn square_part(n: &BigInt) -> (BigInt, BigInt) {
    if n.is_zero() {
        return (BigInt::zero(), BigInt::one());
    }
    let mut rest = n.clone();
    let mut s = BigInt::one();
    let mut r = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        let mut e = 0u32;
        while rest.is_multiple_of(&p) {
            rest /= &p;
            e += 1;
        }
        s *= num_traits::pow(p.clone(), (e / 2) as usize);
        if e % 2 == 1 {
            r *= &p;
        }
        p += 1;
    }
    (s, r * rest)
}

impl Isometry {
    pub fn new(lattice: Lattice, matrix: IntMatrix) -> Result<Isometry> {
        let n = lattice.rank();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::NotAnIsometry);
        }
        let g = lattice.gram();
        let lhs = RatMatrix::int_mul(&matrix.transpose(), &g.mul_int(&matrix));
        if &lhs != g || !matrix.det().abs().is_one() {
            return Err(Error::NotAnIsometry);
        }
        Ok(Isometry { lattice, matrix })
    }

    pub fn identity(lattice: Lattice) -> Isometry {
        let n = lattice.rank();
        Isometry {
            lattice,
            matrix: IntMatrix::identity(n),
        }
    }

    pub fn minus_identity(lattice: Lattice) -> Isometry {
        let n = lattice.rank();
        Isometry {
            lattice,
            matrix: IntMatrix::identity(n).neg(),
        }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn order(&self) -> u64 {
        let mut m = self.matrix.clone();
        let mut k = 1;
        while !m.is_identity() {
            m = m.mul(&self.matrix);
            k += 1;
            assert!(k <= 1_000_000, "isometry of infinite order");
        }
        k
    }

    pub fn power(&self, k: u64) -> Isometry {
        Isometry {
            lattice: self.lattice.clone(),
            matrix: self.matrix.pow(k),
        }
    }

    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry {
            lattice: self.lattice.clone(),
            matrix: self.matrix.mul(&other.matrix),
        }
    }

    /// Basis (columns) of `L^g`.
    pub fn fixed_basis(&self) -> IntMatrix {
        let n = self.rank();
        int_kernel(&self.matrix.sub(&IntMatrix::identity(n)))
    }

    pub fn fixed_sublattice(&self) -> Lattice {
        self.lattice
            .sublattice(&self.fixed_basis())
            .expect("sublattice of a positive definite lattice")
    }

    /// Basis (columns) of `L_g`, the annihilator of `L^g` in `L`.
    pub fn coinvariant_basis(&self) -> IntMatrix {
        let k = self.fixed_basis();
        let n = self.rank();
        if k.cols() == 0 {
            return IntMatrix::identity(n);
        }
        let a = RatMatrix::int_mul(&k.transpose(), self.lattice.gram());
        int_kernel(a.numer())
    }

    /// `L_g` with the restriction of `g`.
    pub fn coinvariant(&self) -> Result<(Lattice, Isometry)> {
        let c = self.coinvariant_basis();
        let sub = self.lattice.sublattice(&c)?;
        let g = self.restrict(&c, &sub)?;
        Ok((sub, g))
    }

    /// Restriction to the `g`-stable sublattice spanned by the columns of
    /// `basis`, whose gram matrix is that of `sub`.
    pub fn restrict(&self, basis: &IntMatrix, sub: &Lattice) -> Result<Isometry> {
        if basis.cols() == 0 {
            return Ok(Isometry::identity(sub.clone()));
        }
        let b = basis.to_rat();
        let bt_g = b.transpose().mul(self.lattice.gram());
        let m = rat_inverse(sub.gram())?
            .mul(&bt_g)
            .mul_int(&self.matrix)
            .mul(&b);
        // exactness: M B must equal B M'
        let mint = m.to_int().ok_or(Error::NotAnIsometry)?;
        if self.matrix.mul(basis) != basis.mul(&mint) {
            return Err(Error::NotAnIsometry);
        }
        Isometry::new(sub.clone(), mint)
    }

    /// `(1 - g) L* < L`.
    pub fn acts_trivially_on_discriminant(&self) -> bool {
        let n = self.rank();
        let g_inv = rat_inverse(self.lattice.gram()).expect("nonsingular gram");
        let one_minus = IntMatrix::identity(n).sub(&self.matrix);
        RatMatrix::int_mul(&one_minus, &g_inv).is_integral()
    }

    pub fn frame_shape(&self) -> Result<FrameShape> {
        frame_shape(&self.matrix, self.order())
    }

    /// `sum_{j=1}^{p-1} j (p - j) r_j / (4 p^2)` with `r_j` the multiplicity of
    /// the eigenvalue `exp(2 pi i j / p)`.
    pub fn rho_t(&self) -> Result<BigRational> {
        let p = self.order();
        let shape = self.frame_shape()?;
        Ok(rho_from_shape(&shape, p))
    }

    pub fn is_fixed_point_free(&self) -> bool {
        let n = self.rank();
        !IntMatrix::identity(n).sub(&self.matrix).det().is_zero()
    }

    /// `|det(1 - g)|` together with `[L : (1 - g) L]` from the Smith form.
    pub fn det_one_minus(&self) -> Result<(BigInt, BigInt)> {
        let n = self.rank();
        let a = IntMatrix::identity(n).sub(&self.matrix);
        let det = a.det().abs();
        if det.is_zero() {
            return Err(Error::FixedPointsPresent);
        }
        let index: BigInt = snf(&a).diagonal().iter().product();
        Ok((det, index))
    }

    /// Order of the standard lift, with `h` and `u` when it is `2p`.
    pub fn standard_lift(&self) -> Result<LiftData> {
        self.standard_lift_with_u(0)
    }

    /// As `standard_lift`, taking the `choice`-th admissible `u`.
    pub fn standard_lift_with_u(&self, choice: usize) -> Result<LiftData> {
        let p = self.order();
        let mut data = LiftData {
            p,
            n: p,
            h: None,
            u: None,
            h_norm: None,
            u_norm: None,
        };
        if p % 2 == 1 {
            return Ok(data);
        }
        if !self.power(p / 2).acts_trivially_on_discriminant() {
            return Err(Error::DiscriminantActionNontrivial);
        }
        let h = self.sigma_vector(p / 2)?;
        if h.iter().all(Zero::is_zero) {
            return Ok(data);
        }
        let l = &self.lattice;
        if !l.is_in_dual(&h) {
            return Err(Error::DiscriminantActionNontrivial);
        }
        let h = shortest_in_coset(l, &h);
        let hh = l.norm(&h);
        let candidates = u_candidates(l, &h, p)?;
        let u = candidates
            .get(choice)
            .cloned()
            .ok_or_else(|| Error::InvalidSpace(format!("no admissible u with index {choice}")))?;
        data.n = 2 * p;
        data.u_norm = Some(l.norm(&u));
        data.u = Some(u);
        data.h_norm = Some(hh);
        data.h = Some(h);
        Ok(data)
    }

    /// The vector `h` with `(h|y) = (y|y)/2 - (y|phi y)/2 mod Z` on `L*`,
    /// `phi = g^k`, reduced into `[0, 1)` coordinates.
    fn sigma_vector(&self, k: u64) -> Result<RatVec> {
        let n = self.rank();
        let g_inv = rat_inverse(self.lattice.gram())?;
        let phi = self.matrix.pow(k);
        let phi_ginv = RatMatrix::int_mul(&phi, &g_inv);
        let half = rat(1, 2);
        let mut h = Vec::with_capacity(n);
        for i in 0..n {
            let v = (g_inv.get(i, i) - phi_ginv.get(i, i)) * &half;
            let f = frac(&v);
            if !(f.is_zero() || f == half) {
                return Err(Error::DiscriminantActionNontrivial);
            }
            h.push(f);
        }
        Ok(h)
    }

    /// Lift doubles unless `2 (L_phi)*` is doubly even, for `phi = g^{p/2}`.
    pub fn lift_doubles_by_doubly_even(&self) -> Result<Option<bool>> {
        let p = self.order();
        if p % 2 == 1 {
            return Ok(None);
        }
        let (lphi, _) = self.power(p / 2).coinvariant()?;
        let scaled = lphi.dual().rescale(&int_rat(4))?;
        Ok(Some(!scaled.is_doubly_even()))
    }

    /// Parity test on the lattice itself: some basis vector has
    /// `(a | phi a)` odd. Meaningful for unimodular lattices.
    pub fn lift_doubles_by_parity(&self) -> Option<bool> {
        let p = self.order();
        if p % 2 == 1 {
            return None;
        }
        let phi = self.matrix.pow(p / 2);
        let g = self.lattice.gram();
        let gphi = g.mul_int(&phi);
        Some((0..self.rank()).any(|i| {
            let v = gphi.get(i, i);
            !(v / rat(2, 1)).is_integer()
        }))
    }

    /// `v * dim T / prod d^{m_d / 2}` with `v = |D(L)|^{1/2}` and
    /// `dim T = |L / ((1 - g) L* cap L)|^{1/2}`.
    pub fn quantum_dimension(&self) -> Result<QuantumDimension> {
        let parts = self.quantum_dimension_parts()?;
        let sq = BigRational::from_integer(parts.disc_order * parts.defect_index) / parts.shape_product;
        Ok(QuantumDimension::sqrt_of(&sq))
    }

    pub fn quantum_dimension_parts(&self) -> Result<QdimParts> {
        if !self.is_fixed_point_free() {
            return Err(Error::FixedPointsPresent);
        }
        let n = self.rank();
        let disc_order = self.lattice.det().abs().to_integer();
        let g_inv = rat_inverse(self.lattice.gram())?;
        let a = RatMatrix::int_mul(&IntMatrix::identity(n).sub(&self.matrix), &g_inv);
        let moduli = vec![a.denom().clone(); n];
        let y = int_solve_mod(a.numer(), &moduli);
        let r = a.mul_int(&y);
        let defect_index = r.det().abs().to_integer();
        let shape = self.frame_shape()?;
        let mut shape_product = BigRational::one();
        for (d, m) in shape.iter() {
            let d = int_rat(d as i64);
            let f = if m >= 0 {
                num_traits::pow(d, m as usize)
            } else {
                num_traits::pow(d.recip(), (-m) as usize)
            };
            shape_product *= f;
        }
        Ok(QdimParts {
            disc_order,
            defect_index,
            shape_product,
        })
    }

    pub fn to_json(&self, claimed_class: Option<&str>) -> Value {
        let mut m = Map::new();
        m.insert("lattice_ref".into(), lattice_to_json(&self.lattice));
        let rows: Vec<Value> = self
            .matrix
            .to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(|x| json!(x.to_i64().expect("small entries"))).collect()))
            .collect();
        m.insert("matrix".into(), Value::Array(rows));
        if let Some(c) = claimed_class {
            m.insert("claimed_class".into(), json!(c));
        }
        Value::Object(m)
    }

    /// Parses an isometry file. `resolve` turns a lattice name into a
    /// lattice when `lattice_ref` is a string.
    pub fn from_json(
        v: &Value,
        resolve: impl Fn(&str) -> Result<Lattice>,
    ) -> Result<(Isometry, Option<String>)> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::parse("isometry", "expected an object"))?;
        let lref = obj
            .get("lattice_ref")
            .ok_or_else(|| Error::parse("lattice_ref", "missing field"))?;
        let lattice = match lref {
            Value::String(name) => resolve(name)?,
            other => lattice_from_json(other)?,
        };
        let rows = obj
            .get("matrix")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse("matrix", "expected an array of rows"))?;
        let mut m: Vec<Vec<i64>> = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            let row = row
                .as_array()
                .ok_or_else(|| Error::parse(format!("matrix[{i}]"), "expected an array"))?;
            let parsed: Option<Vec<i64>> = row.iter().map(Value::as_i64).collect();
            m.push(parsed.ok_or_else(|| Error::parse(format!("matrix[{i}]"), "expected integers"))?);
        }
        let n = lattice.rank();
        if m.len() != n || m.iter().any(|r| r.len() != n) {
            return Err(Error::parse("matrix", format!("expected a {n}x{n} matrix")));
        }
        let claimed = obj
            .get("claimed_class")
            .and_then(Value::as_str)
            .map(str::to_string);
        Ok((Isometry::new(lattice, IntMatrix::from_rows(&m))?, claimed))
    }
}

/// The three factors of the squared quantum dimension.
#[derive(Clone, Debug)]
pub struct QdimParts {
    pub disc_order: BigInt,
    pub defect_index: BigInt,
    pub shape_product: BigRational,
}

pub fn rho_from_shape(shape: &FrameShape, p: u64) -> BigRational {
    let mut acc = BigRational::zero();
    for j in 1..p {
        let r = shape.eigen_multiplicity(p, j);
        acc += int_rat((j * (p - j)) as i64 * r);
    }
    acc / int_rat((4 * p * p) as i64)
}

/// Admissible `u`: `h` itself when `(h|h)` is not integral, else cosets
/// outside `X = {x : (h|x) in Z}`, discriminant generators first.
/// Representatives `u` of order 2 in `L*/L` with `(h|u)` not integral and
/// `p (u|u)` an odd integer, so that the `u`-twisted sector sits on odd
/// eigenspaces. When
/// `(h|h)` is not integral `h` itself comes first.
fn u_candidates(l: &Lattice, h: &[BigRational], p: u64) -> Result<Vec<RatVec>> {
    let disc = l.discriminant_group()?;
    let pr = BigRational::from_integer(BigInt::from(p));
    let admissible = |v: &[BigRational]| {
        let pn = l.norm(v) * &pr;
        let two_v: RatVec = v.iter().map(|x| x * BigRational::from_integer(BigInt::from(2))).collect();
        reduce_mod_lattice(&two_v).iter().all(Zero::is_zero)
            && !l.inner(h, v).is_integer() && pn.is_integer() && pn.to_integer().is_odd()
    };
    let mut out: Vec<RatVec> = Vec::new();
    if !l.norm(h).is_integer() && admissible(h) {
        out.push(reduce_mod_lattice(h));
    }
    let total = disc.order().to_u64().unwrap_or(u64::MAX);
    if total > 1 << 20 {
        return Err(Error::InvalidSpace("discriminant too large to search for u".into()));
    }
    for idx in 0..total {
        let mut rest = idx;
        let coords: Vec<BigInt> = disc
            .orders
            .iter()
            .map(|m| {
                let m = m.to_u64().unwrap();
                let c = rest % m;
                rest /= m;
                BigInt::from(c)
            })
            .collect();
        let v = disc.element(&coords);
        if admissible(&v) && !out.contains(&v) {
            out.push(v);
        }
    }
    let first = usize::from(!l.norm(h).is_integer() && admissible(h));
    let mut rest: Vec<RatVec> = out.split_off(first).iter().map(|v| shortest_in_coset(l, v)).collect();
    rest.sort_by_key(|v| l.norm(v));
    out.extend(rest);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{root_lattice, RootSystem};

    #[test]
    fn minus_one_on_a1() {
        let a1 = root_lattice(RootSystem::A(1)).unwrap();
        let g = Isometry::minus_identity(a1);
        assert_eq!(g.order(), 2);
        let (det, idx) = g.det_one_minus().unwrap();
        assert_eq!(det, BigInt::from(2));
        assert_eq!(idx, BigInt::from(2));
        assert!(g.acts_trivially_on_discriminant());
        let lift = g.standard_lift().unwrap();
        assert_eq!(lift.n, 4);
        // h is a shortest representative, so only its coset is pinned down
        assert_eq!(reduce_mod_lattice(&lift.h.unwrap()), vec![rat(1, 2)]);
    }

    #[test]
    fn minus_one_on_a2_is_nontrivial() {
        let a2 = root_lattice(RootSystem::A(2)).unwrap();
        assert!(!Isometry::minus_identity(a2).acts_trivially_on_discriminant());
    }

    #[test]
    fn not_an_isometry() {
        let a2 = root_lattice(RootSystem::A(2)).unwrap();
        let m = IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]);
        assert_eq!(Isometry::new(a2, m).unwrap_err(), Error::NotAnIsometry);
    }

    #[test]
    fn identity_invariants() {
        let e8 = root_lattice(RootSystem::E(8)).unwrap();
        let g = Isometry::identity(e8);
        assert_eq!(g.order(), 1);
        assert_eq!(g.fixed_sublattice().rank(), 8);
        let (c, _) = g.coinvariant().unwrap();
        assert_eq!(c.rank(), 0);
        assert_eq!(g.det_one_minus().unwrap_err(), Error::FixedPointsPresent);
    }

    #[test]
    fn square_part_split() {
        assert_eq!(square_part(&BigInt::from(72)), (BigInt::from(6), BigInt::from(2)));
        assert_eq!(square_part(&BigInt::from(1)), (BigInt::from(1), BigInt::from(1)));
    }

    #[test]
    fn swap_on_a1_squared() {
        let l = Lattice::from_rows(&[vec![2, 0], vec![0, 2]]).unwrap();
        let g = Isometry::new(l, IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]])).unwrap();
        assert_eq!(g.fixed_sublattice().gram().get(0, 0), int_rat(4));
        let (c, gc) = g.coinvariant().unwrap();
        assert_eq!(c.gram().get(0, 0), int_rat(4));
        assert!(gc.matrix().neg().is_identity());
    }
}
