//! The fusion quadratic space of `V_L^g` for a fixed-point-free isometry
//! acting trivially on `D(L)`.
//!
//! Twisted modules `W^{i,j}` of the lifted automorphism of order `n` form a
//! grid with a carry: adding in the first index past `n` shifts the second
//! by `d`. When the lift has order `n = p` the fusion space is `D(L)` times
//! that grid. When `n = 2p` the grid maps 1 or 2 to 1 onto labels
//! `(coset, i mod p, floor(j/2))`, and the space is `Y/L` times the image.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::check::Check;
use crate::error::{Error, Result};
use crate::fqs::{space_to_json, FiniteQuadraticSpace, Presentation};
use crate::isometry::{Isometry, LiftData};
use crate::lattice::Lattice;
use crate::linalg::{format_rational, frac, rat, IntMatrix, RatVec};

fn r(n: u64, d: u64) -> BigRational {
    rat(n as i64, d as i64)
}

/// Label `(i, j)` of `a x + b y`, with `x = W^{1,0}` and `y = W^{0,1}`.
fn grid_label(n: u64, d: u64, a: &BigInt, b: &BigInt) -> (u64, u64) {
    let nb = BigInt::from(n);
    let (carry, i) = a.div_mod_floor(&nb);
    let j = (carry * BigInt::from(d) + b).mod_floor(&nb);
    (i.to_u64().unwrap(), j.to_u64().unwrap())
}

#[derive(Clone, Debug)]
pub struct WGrid {
    pub n: u64,
    pub t: u64,
    pub d: u64,
    pub space: FiniteQuadraticSpace,
    presentation: Presentation,
}

impl WGrid {
    /// `t = n^2 rho mod n`, `d = 2t mod n`, `q(i, j) = ij/n + i^2 t/n^2`.
    pub fn new(n: u64, rho: &BigRational) -> Result<WGrid> {
        let bad = || Error::BadWeightDenominator {
            n,
            rho: format_rational(rho),
        };
        if n == 0 {
            return Err(bad());
        }
        let scaled = rho * BigRational::from_integer(BigInt::from(n * n));
        if !scaled.is_integer() {
            return Err(bad());
        }
        let t = scaled.to_integer().mod_floor(&BigInt::from(n)).to_u64().unwrap();
        Self::with_t(n, t)
    }

    pub fn with_t(n: u64, t: u64) -> Result<WGrid> {
        let d = 2 * t % n;
        let rel = grid_relations(n, d, &[]);
        let presentation = FiniteQuadraticSpace::from_presentation(2, &rel, |c| {
            let (i, j) = grid_label(n, d, &c[0], &c[1]);
            Self::q_formula(n, t, i, j)
        })?;
        let g = WGrid {
            n,
            t,
            d,
            space: presentation.space.clone(),
            presentation,
        };
        for i in 0..n {
            for j in 0..n {
                if g.space.q(&g.coords(i, j)) != Self::q_formula(n, t, i, j) {
                    return Err(Error::InvalidSpace(format!("grid form disagrees at ({i}, {j})")));
                }
            }
        }
        Ok(g)
    }

    pub fn q_formula(n: u64, t: u64, i: u64, j: u64) -> BigRational {
        frac(&(r(i * j, n) + r(i * i * t, n * n)))
    }

    /// Coordinates of `W^{i,j}` in `space`.
    pub fn coords(&self, i: u64, j: u64) -> Vec<u64> {
        self.presentation.coords(&[BigInt::from(i), BigInt::from(j)])
    }

    /// Grid addition with carry.
    pub fn add(&self, (i, k): (u64, u64), (j, l): (u64, u64)) -> (u64, u64) {
        let carry = if i + j >= self.n { self.d } else { 0 };
        ((i + j) % self.n, (k + l + carry) % self.n)
    }
}

/// Relation columns for the grid: `n x = d y`, `n y = 0`, plus `extra` labels.
fn grid_relations(n: u64, d: u64, extra: &[(u64, u64)]) -> IntMatrix {
    let mut cols: Vec<[i64; 2]> = vec![[n as i64, -(d as i64)], [0, n as i64]];
    cols.extend(extra.iter().map(|&(i, j)| [i as i64, j as i64]));
    IntMatrix::from_fn(2, cols.len(), |row, c| BigInt::from(cols[c][row]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FusionCase {
    One,
    TwoA,
    TwoB,
}

impl std::fmt::Display for FusionCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FusionCase::One => "1",
            FusionCase::TwoA => "2a",
            FusionCase::TwoB => "2b",
        })
    }
}

/// One grid element with its module label and position in the space.
#[derive(Clone, Debug, PartialEq)]
pub struct FusionLabel {
    pub i: u64,
    pub j: u64,
    /// One of `0`, `u`, `h`, `h+u`.
    pub coset: &'static str,
    /// Twist `i mod p` and eigenspace index of the image module.
    pub twist: u64,
    pub eigen: u64,
    pub coords: Vec<u64>,
    pub q: BigRational,
}

#[derive(Clone, Debug)]
pub struct FusionDatum {
    pub case: FusionCase,
    pub p: u64,
    pub n: u64,
    pub rho: BigRational,
    pub t: u64,
    pub d: u64,
    pub lift: LiftData,
    pub disc_order: u64,
    /// Number of grid elements sent to the trivial module.
    pub kernel_size: u64,
    /// The kernel sits at a different eigenspace index than the labels suggest.
    pub kernel_shifted: bool,
    pub space: FiniteQuadraticSpace,
    pub labels: Vec<FusionLabel>,
}

pub fn fusion_space(l: &Lattice, g: &Isometry) -> Result<FusionDatum> {
    let lift = g.standard_lift()?;
    fusion_space_with_lift(l, g, lift)
}

/// Same as `fusion_space` with the `choice`-th admissible `u`.
pub fn fusion_space_with_u(l: &Lattice, g: &Isometry, choice: usize) -> Result<FusionDatum> {
    let lift = g.standard_lift_with_u(choice)?;
    fusion_space_with_lift(l, g, lift)
}

fn fusion_space_with_lift(l: &Lattice, g: &Isometry, lift: LiftData) -> Result<FusionDatum> {
    if g.lattice().gram() != l.gram() {
        return Err(Error::Shape("isometry does not act on the given lattice".into()));
    }
    if !g.is_fixed_point_free() {
        return Err(Error::FixedPointsPresent);
    }
    if !g.acts_trivially_on_discriminant() {
        return Err(Error::DiscriminantActionNontrivial);
    }
    let rho = g.rho_t()?;
    let disc_space = FiniteQuadraticSpace::from_lattice(l)?;
    let disc_order = disc_space.order();
    let p = lift.p;
    let n = lift.n;
    let grid = WGrid::new(n, &rho)?;
    let (t, d) = (grid.t, grid.d);
    if n == p {
        let space = disc_space.orth_sum(&grid.space);
        let k = disc_space.num_generators();
        let labels = grid_cells(n)
            .map(|(i, j)| {
                let mut coords = vec![0u64; k];
                coords.extend(grid.coords(i, j));
                FusionLabel {
                    i,
                    j,
                    coset: "0",
                    twist: i,
                    eigen: j,
                    q: space.q(&coords),
                    coords,
                }
            })
            .collect();
        return Ok(FusionDatum {
            case: FusionCase::One,
            p,
            n,
            rho,
            t,
            d,
            lift,
            disc_order,
            kernel_size: 1,
            kernel_shifted: false,
            space,
            labels,
        });
    }

    let (h, u) = match (&lift.h, &lift.u) {
        (Some(h), Some(u)) => (h.clone(), u.clone()),
        _ => return Err(Error::InvalidSpace("lift of order 2p without h and u".into())),
    };
    let uu = lift.u_norm.clone().expect("u norm recorded with u");
    let offset = &rho - r(t, 4 * p * p);
    let case = if (&offset * BigRational::from_integer(BigInt::from(p))).is_integer() {
        FusionCase::TwoA
    } else {
        FusionCase::TwoB
    };
    let eps = |i: u64, j: u64| -> u64 {
        match case {
            FusionCase::TwoA => j % 2,
            _ => (i + j) % 2,
        }
    };
    let half = rat(1, 2);
    let q_formula = |i: u64, j: u64| -> BigRational {
        frac(&(WGrid::q_formula(n, t, i, j) + BigRational::from_integer(eps(i, j).into()) * &uu * &half))
    };
    let q_formula_at = |(i, j): (u64, u64)| q_formula(i, j);
    let disc = l.discriminant_group()?;
    let to_u64 = |v: Vec<BigInt>| -> Vec<u64> { v.iter().map(|c| c.to_u64().unwrap()).collect() };
    let h_c = to_u64(disc.coords(&h)?);
    let u_c = to_u64(disc.coords(&u)?);
    let coset_of = |i: u64, j: u64| -> (&'static str, Vec<u64>) {
        match (i >= p, eps(i, j) == 1) {
            (false, false) => ("0", vec![0; h_c.len()]),
            (false, true) => ("u", u_c.clone()),
            (true, false) => ("h", h_c.clone()),
            (true, true) => ("h+u", disc_space.add(&h_c, &u_c)),
        }
    };
    // Kernel of I. With (h|h) integral it is trivial. Otherwise it has
    // order 2 and lies over the trivial coset in twist p; the eigenspace
    // normalization of the h-sector is not pinned down by the labels alone,
    // so take the element on which the form descends.
    let add = |(i, k): (u64, u64), (j, l): (u64, u64)| -> (u64, u64) {
        let carry = if i + j >= n { d } else { 0 };
        ((i + j) % n, (k + l + carry) % n)
    };
    let h_integral = lift.h_norm.as_ref().is_some_and(|x| x.is_integer());
    let mut kernel = vec![(0u64, 0u64)];
    let mut kernel_shifted = false;
    if !h_integral {
        let trivial_over = |z: (u64, u64)| coset_of(z.0, z.1).1.iter().all(Zero::is_zero);
        let descends = |z: (u64, u64)| {
            q_formula(z.0, z.1).is_zero()
                && grid_cells(n).all(|x| {
                    frac(&(q_formula_at(add(z, x)) - q_formula(x.0, x.1))).is_zero()
                })
        };
        let candidates: Vec<(u64, u64)> = (0..n)
            .map(|j| (p, j))
            .filter(|&z| add(z, z) == (0, 0) && trivial_over(z))
            .collect();
        let preferred = candidates.iter().copied().find(|&(_, j)| j / 2 == 0);
        let z = match preferred.filter(|&z| descends(z)) {
            Some(z) => z,
            None => {
                kernel_shifted = true;
                candidates
                    .iter()
                    .copied()
                    .find(|&z| descends(z))
                    .ok_or_else(|| Error::InvalidSpace("no order-2 kernel on which q descends".into()))?
            }
        };
        kernel.push(z);
    }
    let rel = grid_relations(n, d, &kernel);
    let image = FiniteQuadraticSpace::from_presentation(2, &rel, |c| {
        let (i, j) = grid_label(n, d, &c[0], &c[1]);
        q_formula(i, j)
    })?;
    let y = disc_space.orthogonal_complement(&[h_c.clone(), u_c.clone()])?;
    let space = y.space.orth_sum(&image.space);
    let k = y.space.num_generators();
    let mut labels = Vec::new();
    for (i, j) in grid_cells(n) {
        let mut coords = vec![0u64; k];
        coords.extend(image.coords(&[BigInt::from(i), BigInt::from(j)]));
        let q = space.q(&coords);
        if q != q_formula(i, j) {
            return Err(Error::InvalidSpace(format!("image form disagrees at W^({i},{j})")));
        }
        labels.push(FusionLabel {
            i,
            j,
            coset: coset_of(i, j).0,
            twist: i % p,
            eigen: j / 2,
            coords,
            q,
        });
    }
    Ok(FusionDatum {
        case,
        p,
        n,
        rho,
        t,
        d,
        lift,
        disc_order,
        kernel_size: kernel.len() as u64,
        kernel_shifted,
        space,
        labels,
    })
}

fn grid_cells(n: u64) -> impl Iterator<Item = (u64, u64)> {
    (0..n).flat_map(move |i| (0..n).map(move |j| (i, j)))
}

impl FusionDatum {
    pub fn label(&self, i: u64, j: u64) -> Option<&FusionLabel> {
        self.labels.iter().find(|x| x.i == i && x.j == j)
    }

    /// `q(I(W^{i,j}))` from the closed form.
    pub fn q_closed_form(&self, i: u64, j: u64) -> BigRational {
        let base = WGrid::q_formula(self.n, self.t, i, j);
        let eps = match self.case {
            FusionCase::One => return base,
            FusionCase::TwoA => j % 2,
            FusionCase::TwoB => (i + j) % 2,
        };
        let uu = self.lift.u_norm.clone().unwrap_or_default();
        frac(&(base + BigRational::from_integer(eps.into()) * uu * rat(1, 2)))
    }

    pub fn to_json(&self) -> Value {
        let opt = |x: &Option<BigRational>| x.as_ref().map(format_rational);
        let vec = |x: &Option<RatVec>| x.as_ref().map(|v| v.iter().map(format_rational).collect::<Vec<_>>());
        json!({
            "case": self.case.to_string(),
            "d": self.d,
            "disc_order": self.disc_order,
            "h": vec(&self.lift.h),
            "h_norm": opt(&self.lift.h_norm),
            "kernel_shifted": self.kernel_shifted,
            "kernel_size": self.kernel_size,
            "labels": self.labels.iter().map(|x| json!({
                "coords": x.coords,
                "coset": x.coset,
                "eigen": x.eigen,
                "i": x.i,
                "j": x.j,
                "q": format_rational(&x.q),
                "twist": x.twist,
            })).collect::<Vec<_>>(),
            "n": self.n,
            "p": self.p,
            "rho": format_rational(&self.rho),
            "space": space_to_json(&self.space),
            "t": self.t,
            "u": vec(&self.lift.u),
            "u_norm": opt(&self.lift.u_norm),
        })
    }
}

/// Order bookkeeping and closed-form spot values.
pub fn fusion_sanity(d: &FusionDatum) -> Vec<Check> {
    let mut out = vec![Check::new(
        "order = |D(L)| p^2",
        d.disc_order * d.p * d.p,
        d.space.order(),
    )];
    if d.case != FusionCase::One {
        for (i, j) in [(0, 1), (1, 0), (1, 1)] {
            let computed = d
                .label(i, j)
                .map_or_else(|| "missing".to_string(), |x| format_rational(&d.space.q(&x.coords)));
            out.push(Check::new(
                format!("q(I(W^{{{i},{j}}}))"),
                format_rational(&d.q_closed_form(i, j)),
                computed,
            ));
        }
        let h_integral = d.lift.h_norm.as_ref().is_some_and(|x| x.is_integer());
        out.push(Check::new("kernel size", if h_integral { 1 } else { 2 }, d.kernel_size));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fqs::is_isomorphic;
    use crate::lattice::{root_lattice, RootSystem};

    #[test]
    fn grid_12() {
        let g = WGrid::new(12, &rat(11, 12)).unwrap();
        assert_eq!(g.t, 0);
        assert_eq!(g.space.invariant_factors(), vec![12, 12]);
        assert_eq!(g.space.q(&g.coords(1, 1)), rat(1, 12));
    }

    #[test]
    fn grid_4() {
        let g = WGrid::new(4, &rat(3, 4)).unwrap();
        assert_eq!(g.t, 0);
        assert_eq!(g.space.invariant_factors(), vec![4, 4]);
    }

    #[test]
    fn trivial_grid() {
        let g = WGrid::new(1, &rat(0, 1)).unwrap();
        assert_eq!(g.space.order(), 1);
    }

    #[test]
    fn bad_denominator() {
        assert!(matches!(
            WGrid::new(2, &rat(1, 3)),
            Err(Error::BadWeightDenominator { .. })
        ));
    }

    #[test]
    fn minus_one_on_a1() {
        // order 4 lift, one twisted sector of weight 1/16: space of order 2 * 4
        let l = root_lattice(RootSystem::A(1)).unwrap();
        let g = Isometry::minus_identity(l.clone());
        let f = fusion_space(&l, &g).unwrap();
        assert_eq!(f.n, 4);
        assert_eq!(f.space.order(), 8);
        assert_eq!(f.kernel_size, 2);
        assert!(fusion_sanity(&f).iter().all(|c| c.pass), "{:?}", fusion_sanity(&f));
        let a7 = FiniteQuadraticSpace::from_lattice(&Lattice::from_rows(&[vec![8]]).unwrap()).unwrap();
        assert!(is_isomorphic(&f.space, &a7).unwrap().is_some());
    }

    #[test]
    fn fixed_points_rejected() {
        let l = root_lattice(RootSystem::A(2)).unwrap();
        let g = Isometry::identity(l.clone());
        assert!(matches!(fusion_space(&l, &g), Err(Error::FixedPointsPresent)));
    }
}
