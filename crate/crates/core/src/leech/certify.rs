use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::isometry::Isometry;
use crate::linalg::{format_rational, rat, snf, FrameShape};

pub const CLASS_LABELS: [&str; 5] = ["4C", "6G", "6E", "8E", "10F"];

/// The invariants used to pin down a conjugacy class of `O(Leech)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassCertificate {
    pub frame_shape: FrameShape,
    pub fixed_rank: usize,
    /// Nontrivial invariant factors of `D(L^g)`, in divisibility order.
    pub fixed_invariant_factors: Vec<u64>,
    pub lift_order: u64,
    pub rho: BigRational,
}

impl ClassCertificate {
    pub fn to_json(&self) -> Value {
        json!({
            "fixed_invariant_factors": self.fixed_invariant_factors,
            "fixed_rank": self.fixed_rank,
            "frame_shape": self.frame_shape.to_string(),
            "lift_order": self.lift_order,
            "rho": format_rational(&self.rho),
        })
    }
}

/// Expected certificate for one of the five target classes.
pub fn target(label: &str) -> Result<ClassCertificate> {
    let (shape, rank, factors, lift, rho): (&str, usize, &[u64], u64, BigRational) = match label {
        "4C" => ("1^4 2^2 4^4", 10, &[2, 2, 4, 4, 4, 4], 4, rat(3, 4)),
        "6G" => ("2^3 6^3", 6, &[2, 2, 2, 6, 6, 6], 12, rat(11, 12)),
        "6E" => ("1^2 2^2 3^2 6^2", 8, &[6, 6, 6, 6], 6, rat(5, 6)),
        "8E" => ("1^2 2 4 8^2", 6, &[2, 4, 8, 8], 8, rat(7, 8)),
        "10F" => ("2^2 10^2", 4, &[2, 2, 10, 10], 20, rat(19, 20)),
        other => return Err(Error::UnknownClass(other.to_string())),
    };
    Ok(ClassCertificate {
        frame_shape: shape.parse()?,
        fixed_rank: rank,
        fixed_invariant_factors: factors.to_vec(),
        lift_order: lift,
        rho,
    })
}

/// Computes every certificate field from the matrix alone. The lift order
/// uses the parity of `(a | g^{p/2} a)` on the (unimodular) lattice.
pub fn certificate(g: &Isometry) -> Result<ClassCertificate> {
    let frame_shape = g.frame_shape()?;
    let p = g.order();
    let fixed = g.fixed_sublattice();
    let fixed_invariant_factors = if fixed.rank() == 0 {
        Vec::new()
    } else {
        snf(&fixed.int_gram()?)
            .diagonal()
            .iter()
            .filter(|d| !d.is_one())
            .map(|d: &BigInt| d.to_u64().expect("small invariant factor"))
            .collect()
    };
    let lift_order = match g.lift_doubles_by_parity() {
        Some(true) => 2 * p,
        _ => p,
    };
    Ok(ClassCertificate {
        rho: g.rho_t()?,
        frame_shape,
        fixed_rank: fixed.rank(),
        fixed_invariant_factors,
        lift_order,
    })
}

/// Recomputes the certificate and compares it field by field with `target`.
pub fn certify(g: &Isometry, target: &ClassCertificate) -> Result<ClassCertificate> {
    let c = certificate(g)?;
    let fail = |field: &str, expected: String, computed: String| {
        Err(Error::CertificationFailed {
            field: field.into(),
            expected,
            computed,
        })
    };
    if c.frame_shape != target.frame_shape {
        return fail("frame_shape", target.frame_shape.to_string(), c.frame_shape.to_string());
    }
    if c.fixed_rank != target.fixed_rank {
        return fail("fixed_rank", target.fixed_rank.to_string(), c.fixed_rank.to_string());
    }
    if c.fixed_invariant_factors != target.fixed_invariant_factors {
        return fail(
            "fixed_invariant_factors",
            format!("{:?}", target.fixed_invariant_factors),
            format!("{:?}", c.fixed_invariant_factors),
        );
    }
    if c.lift_order != target.lift_order {
        return fail("lift_order", target.lift_order.to_string(), c.lift_order.to_string());
    }
    if c.rho != target.rho {
        return fail("rho", target.rho.to_string(), c.rho.to_string());
    }
    Ok(c)
}
