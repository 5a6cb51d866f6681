//! The Leech lattice in Golay-code coordinates, its monomial isometries
//! `2^12 : M24`, and certified representatives of conjugacy classes.

mod certify;
mod golay;
mod perm;
mod search;

pub use certify::{certificate, certify, target, ClassCertificate, CLASS_LABELS};
pub use golay::{golay, GolayCode, ALL_ONES, INFINITY, POINTS};
pub use perm::{m24_generators, Perm24};
pub use search::{builtin_lattice, data_dir, load_representative, representative_json, save_representative, search_class, SearchOutcome, DATA_DIR_ENV};

use std::sync::OnceLock;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::isometry::Isometry;
use crate::lattice::Lattice;
use crate::linalg::{hnf_rows, rat_inverse, FrameShape, IntMatrix, RatMatrix};

struct Frame {
    /// Basis rows in the ambient `sqrt(8) Z^24` coordinates.
    basis: IntMatrix,
    basis_inv: RatMatrix,
    lattice: Lattice,
}

fn build_frame() -> Frame {
    let mut gens: Vec<Vec<i64>> = Vec::new();
    for i in 0..POINTS {
        for j in i + 1..POINTS {
            for s in [1, -1] {
                let mut v = vec![0i64; POINTS];
                v[i] = 4;
                v[j] = 4 * s;
                gens.push(v);
            }
        }
    }
    for &w in golay().basis() {
        gens.push((0..POINTS).map(|i| if w >> i & 1 == 1 { 2 } else { 0 }).collect());
    }
    let mut odd = vec![1i64; POINTS];
    odd[0] = -3;
    gens.push(odd);
    let basis = hnf_rows(&IntMatrix::from_rows(&gens));
    assert_eq!(basis.rows(), POINTS);
    let gram = RatMatrix::new(basis.mul(&basis.transpose()), BigInt::from(8));
    let lattice = Lattice::new(gram)
        .expect("Leech gram is positive definite")
        .with_name("leech")
        .with_embedding(RatMatrix::new(basis.clone(), BigInt::from(1)));
    let basis_inv = rat_inverse(&basis.to_rat()).expect("Leech basis is nonsingular");
    Frame {
        basis,
        basis_inv,
        lattice,
    }
}

fn frame() -> &'static Frame {
    static FRAME: OnceLock<Frame> = OnceLock::new();
    FRAME.get_or_init(build_frame)
}

/// The Leech lattice: vectors `x / sqrt(8)` with `x` congruent to a Golay
/// codeword pattern and the usual coordinate-sum condition.
pub fn leech_lattice() -> Lattice {
    frame().lattice.clone()
}

/// Basis rows of the Leech lattice in `sqrt(8)`-scaled coordinates.
pub fn leech_basis() -> &'static IntMatrix {
    &frame().basis
}

/// Coordinate permutation followed by a sign change on a Golay codeword:
/// `x_i` moves to position `perm(i)` and is negated there when that position
/// lies in `signs`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MonomialIsometry {
    pub perm: Perm24,
    pub signs: u32,
}

impl MonomialIsometry {
    pub fn new(perm: Perm24, signs: u32) -> Result<MonomialIsometry> {
        if !golay().contains(signs) {
            return Err(Error::InvalidMonomial("sign support is not a Golay codeword".into()));
        }
        if !perm.preserves_golay() {
            return Err(Error::InvalidMonomial("permutation is not in M24".into()));
        }
        Ok(MonomialIsometry { perm, signs })
    }

    pub fn identity() -> MonomialIsometry {
        MonomialIsometry {
            perm: Perm24::identity(),
            signs: 0,
        }
    }

    pub fn sign_change(signs: u32) -> Result<MonomialIsometry> {
        Self::new(Perm24::identity(), signs)
    }

    /// `self` after `other`.
    pub fn after(&self, other: &MonomialIsometry) -> MonomialIsometry {
        // x -> eps1 P1 (eps2 P2 x) = eps1 (P1 eps2 P1^-1) P1 P2 x
        MonomialIsometry {
            perm: self.perm.after(&other.perm),
            signs: self.signs ^ self.perm.apply_word(other.signs),
        }
    }

    pub fn power(&self, k: u64) -> MonomialIsometry {
        let mut acc = MonomialIsometry::identity();
        for _ in 0..k {
            acc = self.after(&acc);
        }
        acc
    }

    /// Signed permutation matrix on `Z^24`.
    pub fn ambient_matrix(&self) -> IntMatrix {
        let mut a = IntMatrix::zeros(POINTS, POINTS);
        for i in 0..POINTS {
            let j = self.perm.apply(i as u8) as usize;
            a[(j, i)] = if self.signs >> j & 1 == 1 { (-1).into() } else { 1.into() };
        }
        a
    }

    /// Matrix on the Leech basis in the column convention.
    pub fn to_isometry(&self) -> Result<Isometry> {
        let f = frame();
        let a = self.ambient_matrix();
        // images of basis rows: B A^t = M^t B
        let mt = RatMatrix::int_mul(&f.basis.mul(&a.transpose()), &f.basis_inv);
        let m = mt.to_int().ok_or(Error::NotLeechStabilizing)?.transpose();
        Isometry::new(f.lattice.clone(), m)
    }

    pub fn order(&self) -> u64 {
        use num_integer::Integer;
        self.perm
            .cycles()
            .iter()
            .map(|c| c.len() as u64 * if self.cycle_sign(c) { 2 } else { 1 })
            .fold(1, |a, b| a.lcm(&b))
    }

    /// True when the signs along the cycle multiply to -1.
    fn cycle_sign(&self, cycle: &[u8]) -> bool {
        cycle.iter().filter(|&&i| self.signs >> i & 1 == 1).count() % 2 == 1
    }

    /// Frame shape read off the cycles: a `k`-cycle contributes `x^k - 1`,
    /// or `x^k + 1 = (x^{2k} - 1) / (x^k - 1)` when its signs multiply to -1.
    pub fn frame_shape(&self) -> FrameShape {
        let mut pairs = Vec::new();
        for c in self.perm.cycles() {
            let k = c.len() as u64;
            if self.cycle_sign(&c) {
                pairs.push((2 * k, 1));
                pairs.push((k, -1));
            } else {
                pairs.push((k, 1));
            }
        }
        FrameShape::from_pairs(&pairs)
    }
}
