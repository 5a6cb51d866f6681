mod common;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use orbifold_fusion::fqs::{is_isomorphic, FiniteQuadraticSpace};
use orbifold_fusion::isometry::{rho_from_shape, Isometry};
use orbifold_fusion::lattice::{root_lattice, Lattice, RootSystem};
use orbifold_fusion::leech::{data_dir, load_representative, CLASS_LABELS};
use orbifold_fusion::linalg::{rat_inverse, snf, FrameShape, IntMatrix};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

fn leech_classes() -> Vec<(&'static str, Isometry)> {
    CLASS_LABELS
        .iter()
        .map(|&c| (c, load_representative(&data_dir(), c).unwrap()))
        .collect()
}

fn e8_element(seed: u64) -> Isometry {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_weyl_element(&mut rng, &root_lattice(RootSystem::E(8)).unwrap())
}

/// `[L : (1 - g) L]` by the Smith form, compared with `|det(1 - g)|`.
fn index_matches_det(g: &Isometry) -> bool {
    let (det, index) = g.det_one_minus().unwrap();
    let a = IntMatrix::identity(g.rank()).sub(g.matrix());
    let by_snf: BigInt = snf(&a).diagonal().iter().product();
    det == index && by_snf.abs() == det && det == a.det().abs()
}

/// The fixed lattice is 1^rank, so its shape merged with the coinvariant
/// one should be the shape of `g`.
fn shapes_merge(g: &Isometry) -> bool {
    let fixed = g.fixed_sublattice();
    let (_, gc) = g.coinvariant().unwrap();
    let one = FrameShape::from_pairs(&[(1, fixed.rank() as i64)]);
    let inner = if gc.rank() == 0 {
        FrameShape::from_pairs(&[])
    } else {
        gc.frame_shape().unwrap()
    };
    one.merge(&inner) == g.frame_shape().unwrap()
}

/// `ord(g) (N^g)* < N^g`, and `D(N^g)`, `D(N_g)` anti-isometric, for `N`
/// unimodular.
fn unimodular_fixed_coinvariant(g: &Isometry) {
    let fixed = g.fixed_sublattice();
    let (co, _) = g.coinvariant().unwrap();
    if fixed.rank() == 0 {
        assert!(co.det().is_one());
        return;
    }
    let inv = rat_inverse(fixed.gram()).unwrap();
    let scaled = inv.scale(&BigInt::from(g.order()).into());
    assert!(scaled.is_integral(), "ord(g) (N^g)* not inside N^g");
    let a = FiniteQuadraticSpace::from_lattice(&fixed).unwrap();
    let b = FiniteQuadraticSpace::from_lattice(&co).unwrap();
    assert_eq!(a.invariant_factors(), b.invariant_factors());
    assert!(is_isomorphic(&a.negate(), &b).unwrap().is_some());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn index_of_one_minus_g_is_its_determinant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (l, g) = random_fixed_point_free(&mut rng);
        prop_assert!(l.rank() <= 8);
        prop_assert!(g.is_fixed_point_free());
        prop_assert!(index_matches_det(&g));
    }

    #[test]
    fn trivial_action_gives_unit_quantum_dimension(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, g) = random_fixed_point_free(&mut rng);
        prop_assume!(g.acts_trivially_on_discriminant());
        prop_assert!(g.quantum_dimension().unwrap().is_one());
    }

    #[test]
    fn rho_depends_only_on_the_frame_shape(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = random_root_sum(&mut rng, 8);
        let g = random_weyl_element(&mut rng, &l);
        let u = random_unimodular(&mut rng, g.rank());
        let h = change_basis(&g, &u);
        prop_assert_eq!(h.frame_shape().unwrap(), g.frame_shape().unwrap());
        prop_assert_eq!(h.rho_t().unwrap(), g.rho_t().unwrap());
        prop_assert_eq!(rho_from_shape(&g.frame_shape().unwrap(), g.order()), g.rho_t().unwrap());
    }

    #[test]
    fn fixed_and_coinvariant_shapes_merge(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = random_root_sum(&mut rng, 8);
        let g = random_weyl_element(&mut rng, &l);
        prop_assert!(shapes_merge(&g));
    }

    // Weyl groups act trivially on D of a root lattice, so every element
    // is a test case.
    #[test]
    fn trivial_action_passes_to_powers(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = random_root_sum(&mut rng, 8);
        let g = random_weyl_element(&mut rng, &l);
        prop_assume!(g.acts_trivially_on_discriminant());
        for i in 1..g.order() {
            let (_, gi) = g.power(i).coinvariant().unwrap();
            prop_assert!(gi.acts_trivially_on_discriminant(), "power {}", i);
        }
    }

    #[test]
    fn e8_fixed_and_coinvariant_discriminants_agree(seed in any::<u64>()) {
        unimodular_fixed_coinvariant(&e8_element(seed));
    }

    #[test]
    fn e8_lift_tests_agree(seed in any::<u64>()) {
        let g = e8_element(seed);
        prop_assert_eq!(g.lift_doubles_by_parity(), g.lift_doubles_by_doubly_even().unwrap());
    }
}

#[test]
fn shipped_coinvariants_satisfy_the_index_formula() {
    for (label, g) in leech_classes() {
        let (_, gc) = g.coinvariant().unwrap();
        assert!(gc.is_fixed_point_free(), "{label}");
        assert!(index_matches_det(&gc), "{label}");
    }
}

#[test]
fn leech_fixed_and_coinvariant_discriminants_agree() {
    for (label, g) in leech_classes() {
        unimodular_fixed_coinvariant(&g);
        assert!(shapes_merge(&g), "{label}");
    }
}

#[test]
fn leech_coinvariants_keep_trivial_action_under_powers() {
    for (label, g) in leech_classes() {
        let (_, gc) = g.coinvariant().unwrap();
        assert!(gc.acts_trivially_on_discriminant(), "{label}");
        for i in 1..gc.order() {
            let (_, gi) = gc.power(i).coinvariant().unwrap();
            assert!(gi.acts_trivially_on_discriminant(), "{label} power {i}");
        }
        assert!(gc.quantum_dimension().unwrap().is_one(), "{label}");
    }
}

#[test]
fn leech_lift_tests_agree() {
    for (label, g) in leech_classes() {
        assert_eq!(g.lift_doubles_by_parity(), g.lift_doubles_by_doubly_even().unwrap(), "{label}");
    }
}

#[test]
fn minus_one_on_sqrt2_e8() {
    let l: Lattice = root_lattice(RootSystem::E(8)).unwrap().rescale(&BigInt::from(2).into()).unwrap();
    let g = Isometry::minus_identity(l);
    assert!(g.acts_trivially_on_discriminant());
    assert!(g.quantum_dimension().unwrap().is_one());
    let (det, index) = g.det_one_minus().unwrap();
    assert_eq!(det, BigInt::from(256));
    assert_eq!(index, det);
}
