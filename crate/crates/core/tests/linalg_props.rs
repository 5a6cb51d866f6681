use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use orbifold_fusion::linalg::{
    char_poly, frame_shape, poly_from_frame_shape, rat, rat_inverse, snf, FrameShape, IntMatrix, RatMatrix,
};
use proptest::prelude::*;

fn int_matrix(max_dim: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| {
        prop::collection::vec(-9i64..=9, r * c).prop_map(move |e| {
            let rows: Vec<Vec<i64>> = e.chunks(c).map(<[i64]>::to_vec).collect();
            IntMatrix::from_rows(&rows)
        })
    })
}

/// Signed permutation matrix with the given cycle lengths; a cycle carrying
/// an odd number of minus signs behaves like `x^d + 1`.
fn signed_cycles(cycles: &[(usize, bool)]) -> IntMatrix {
    let n: usize = cycles.iter().map(|c| c.0).sum();
    let mut m = IntMatrix::zeros(n, n);
    let mut start = 0;
    for &(d, neg) in cycles {
        for k in 0..d {
            let to = start + (k + 1) % d;
            let s = if neg && k == 0 { -1 } else { 1 };
            m[(to, start + k)] = BigInt::from(s);
        }
        start += d;
    }
    m
}

/// Unimodular matrix from a short word of elementary operations.
fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    for &(a, b, c) in ops {
        let (a, b) = (a % n, b % n);
        if a != b {
            u.add_row_multiple(a, b, &BigInt::from(c));
        }
    }
    u
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_form_round_trip(a in int_matrix(8)) {
        let r = snf(&a);
        prop_assert_eq!(r.u.mul(&a).mul(&r.v), r.s.clone());
        prop_assert!(r.u.det().abs().is_one());
        prop_assert!(r.v.det().abs().is_one());
        for i in 0..r.s.rows() {
            for j in 0..r.s.cols() {
                if i != j {
                    prop_assert!(r.s[(i, j)].is_zero());
                }
            }
        }
        let d = r.diagonal();
        for w in d.windows(2) {
            prop_assert!(!w[0].is_negative() && !w[1].is_negative());
            // d_i | d_{i+1}, with 0 only at the end
            if w[0].is_zero() {
                prop_assert!(w[1].is_zero());
            } else {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
        }
    }

    #[test]
    fn rational_inverse_is_exact(n in 1usize..=6, e in prop::collection::vec((-9i64..=9, 1i64..=5), 36)) {
        let a = RatMatrix::from_fn(n, n, |i, j| {
            let (p, q) = e[i * 6 + j];
            rat(p, q)
        });
        prop_assume!(!a.det().is_zero());
        let inv = rat_inverse(&a).unwrap();
        prop_assert!(a.mul(&inv).is_identity());
        prop_assert!(inv.mul(&a).is_identity());
    }

    #[test]
    fn frame_shape_reconstructs_char_poly(
        cycles in prop::collection::vec((1usize..=6, any::<bool>()), 1..5),
        ops in prop::collection::vec((0usize..24, 0usize..24, -2i64..=2), 0..12),
    ) {
        let m = signed_cycles(&cycles);
        let n = m.rows();
        let u = unimodular(n, &ops);
        let u_inv = rat_inverse(&u.to_rat()).unwrap().to_int().unwrap();
        let conj = u.mul(&m).mul(&u_inv);
        let order = cycles.iter().map(|&(d, neg)| if neg { 2 * d as u64 } else { d as u64 })
            .fold(1u64, num_integer::lcm);
        let shape = frame_shape(&conj, order).unwrap();
        prop_assert_eq!(poly_from_frame_shape(&shape).unwrap(), char_poly(&conj));
        // independent oracle: x^d - 1 per plain cycle, (x^{2d} - 1)/(x^d - 1) per signed one
        let mut pairs: Vec<(u64, i64)> = Vec::new();
        for &(d, neg) in &cycles {
            let d = d as u64;
            if neg {
                pairs.push((2 * d, 1));
                pairs.push((d, -1));
            } else {
                pairs.push((d, 1));
            }
        }
        prop_assert_eq!(shape, FrameShape::from_pairs(&pairs));
    }
}

#[test]
fn minus_identity_has_negative_exponent() {
    let m = IntMatrix::identity(24).neg();
    let shape = frame_shape(&m, 2).unwrap();
    assert_eq!(shape.to_string(), "1^-24 2^24");
    assert_eq!(shape.rank(), 24);
}
