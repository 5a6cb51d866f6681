use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use orbifold_fusion::lattice::{count_by_norm, root_lattice, short_vectors, Lattice, RootSystem};
use orbifold_fusion::leech::leech_lattice;
use orbifold_fusion::linalg::{rat, rat_inverse, snf, IntMatrix, RatMatrix};
use proptest::prelude::*;

/// Even positive definite grams: off-diagonal entries in [-3, 3] and a
/// diagonal large enough to dominate.
pub fn even_gram(max_rank: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max_rank).prop_flat_map(|n| {
        (
            prop::collection::vec(-3i64..=3, n * n),
            prop::collection::vec(0i64..=2, n),
        )
            .prop_map(move |(off, extra)| {
                let mut g = vec![vec![0i64; n]; n];
                for i in 0..n {
                    for j in i + 1..n {
                        g[i][j] = off[i * n + j];
                        g[j][i] = off[i * n + j];
                    }
                }
                for i in 0..n {
                    let row: i64 = (0..n).filter(|&j| j != i).map(|j| g[i][j].abs()).sum();
                    // smallest even value beating the row sum, then a little more
                    g[i][i] = 2 * (row / 2 + 1 + extra[i]);
                }
                IntMatrix::from_rows(&g)
            })
    })
}

/// Counts by brute force over a box that provably contains every vector of
/// norm at most `bound`: |x_i| <= sqrt(bound * (G^{-1})_{ii}).
fn box_counts(l: &Lattice, coset: &[BigRational], bound: i64) -> BTreeMap<BigRational, u64> {
    let n = l.rank();
    let inv = rat_inverse(l.gram()).unwrap();
    let radius: Vec<i64> = (0..n)
        .map(|i| (inv.get(i, i).to_f64().unwrap() * bound as f64).sqrt().ceil() as i64 + 1)
        .collect();
    let mut out = BTreeMap::new();
    let mut x = vec![0i64; n];
    fn rec(
        i: usize,
        x: &mut Vec<i64>,
        radius: &[i64],
        l: &Lattice,
        coset: &[BigRational],
        bound: i64,
        out: &mut BTreeMap<BigRational, u64>,
    ) {
        if i == x.len() {
            let v: Vec<BigRational> = x.iter().zip(coset).map(|(&a, c)| rat(a, 1) + c).collect();
            let nn = l.norm(&v);
            if nn <= rat(bound, 1) {
                *out.entry(nn).or_insert(0) += 1;
            }
            return;
        }
        // the coset shift is in [0, 1), so widen by one on each side
        for a in -radius[i] - 1..=radius[i] + 1 {
            x[i] = a;
            rec(i + 1, x, radius, l, coset, bound, out);
        }
    }
    rec(0, &mut x, &radius, l, coset, bound, &mut out);
    out
}

fn even_lattice(g: &IntMatrix) -> Lattice {
    Lattice::from_int_gram(g.clone()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn det_is_order_of_discriminant(g in even_gram(6)) {
        let l = even_lattice(&g);
        let d = l.discriminant_group().unwrap();
        prop_assert_eq!(BigRational::from(d.order()), l.det().abs());
    }

    #[test]
    fn dual_of_dual_is_the_lattice(g in even_gram(6)) {
        let l = even_lattice(&g);
        let dd = l.dual().dual();
        prop_assert_eq!(dd.gram(), l.gram());
    }

    #[test]
    fn overlattice_index_squared_is_det_ratio(
        g in even_gram(5),
        k in 2i64..=4,
        ops in prop::collection::vec((0usize..5, 0usize..5, -2i64..=2), 0..8),
    ) {
        let m = even_lattice(&g);
        let n = m.rank();
        let mut u = IntMatrix::identity(n);
        for (a, b, c) in ops {
            let (a, b) = (a % n, b % n);
            if a != b {
                u.add_col_multiple(a, b, &BigInt::from(c));
            }
        }
        let mut diag = vec![1i64; n];
        diag[0] = k;
        let c = u.mul(&IntMatrix::diagonal(&diag));
        let l = m.sublattice(&c).unwrap();
        // Smith form of the basis matrix gives the index independently
        let sub_index: BigInt = snf(&c).diagonal().iter().product();
        prop_assert_eq!(sub_index.clone(), BigInt::from(k));
        let c_inv: RatMatrix = rat_inverse(&c.to_rat()).unwrap();
        let glue: Vec<Vec<BigRational>> = (0..n).map(|j| c_inv.col(j)).collect();
        let (over, index) = l.overlattice(&glue).unwrap();
        prop_assert_eq!(index.clone(), sub_index);
        prop_assert_eq!(over.det(), m.det());
        let sq = BigRational::from(&index * &index);
        prop_assert_eq!(sq, l.det() / over.det());
    }

    #[test]
    fn enumeration_matches_box_oracle(g in even_gram(4), bound in 0i64..=12) {
        let l = even_lattice(&g);
        let zero = vec![BigRational::zero(); l.rank()];
        prop_assert_eq!(count_by_norm(&l, &zero, &rat(bound, 1)), box_counts(&l, &zero, bound));
    }

    #[test]
    fn coset_enumeration_matches_box_oracle(g in even_gram(3), pick in 0usize..64, bound in 0i64..=12) {
        let l = even_lattice(&g);
        let d = l.discriminant_group().unwrap();
        prop_assume!(!d.is_empty());
        let coset = d.generator(pick % d.len());
        let found = short_vectors(&l, &coset, &rat(bound, 1));
        let mut counts: BTreeMap<BigRational, u64> = BTreeMap::new();
        for v in &found {
            prop_assert_eq!(&l.norm(&v.coords), &v.norm);
            *counts.entry(v.norm.clone()).or_insert(0) += 1;
        }
        prop_assert_eq!(counts, box_counts(&l, &coset, bound));
    }
}

#[test]
fn root_lattices_against_the_oracle() {
    for kind in [RootSystem::A(3), RootSystem::D(4), RootSystem::A(2), RootSystem::A(1)] {
        let l = root_lattice(kind).unwrap();
        let zero = vec![BigRational::zero(); l.rank()];
        assert_eq!(count_by_norm(&l, &zero, &rat(12, 1)), box_counts(&l, &zero, 12), "{kind}");
    }
}

#[test]
fn leech_is_even_unimodular_without_roots() {
    let l = leech_lattice();
    assert!(l.is_even());
    assert_eq!(l.det(), rat(1, 1));
    let zero = vec![BigRational::zero(); 24];
    // exhaustive below norm 4: only the zero vector
    let below = count_by_norm(&l, &zero, &rat(3, 1));
    assert_eq!(below.len(), 1);
    assert_eq!(below.get(&rat(0, 1)), Some(&1));
    assert_eq!(count_by_norm(&l, &zero, &rat(4, 1)).get(&rat(4, 1)), Some(&196560));
}
