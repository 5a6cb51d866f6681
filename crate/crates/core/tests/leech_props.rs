use orbifold_fusion::leech::{
    certificate, certify, data_dir, golay, leech_lattice, load_representative, m24_generators, target,
    MonomialIsometry, Perm24, CLASS_LABELS,
};
use orbifold_fusion::linalg::rat;
use proptest::prelude::*;

fn random_monomial(word: &[usize], code: u16) -> MonomialIsometry {
    let gens = m24_generators();
    let mut p = Perm24::identity();
    for &i in word {
        p = gens[i % 4].after(&p);
    }
    let basis = golay().basis();
    let signs = (0..12).filter(|i| code >> i & 1 == 1).fold(0u32, |acc, i| acc ^ basis[i]);
    MonomialIsometry::new(p, signs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn monomials_preserve_the_gram_matrix(word in prop::collection::vec(0usize..4, 0..30), code in 0u16..4096) {
        let m = random_monomial(&word, code);
        let g = m.to_isometry().unwrap();
        let gram = leech_lattice().gram().clone();
        // M^t G M = G, checked here rather than trusting the constructor
        let a = g.matrix().to_rat();
        prop_assert_eq!(a.transpose().mul(&gram).mul(&a), gram);
        // the cycle reading of the shape agrees with the char poly one
        prop_assert_eq!(m.frame_shape(), g.frame_shape().unwrap());
        prop_assert_eq!(m.order(), g.order());
    }

    #[test]
    fn monomial_composition_matches_matrices(w1 in prop::collection::vec(0usize..4, 0..12), c1 in 0u16..4096,
                                             w2 in prop::collection::vec(0usize..4, 0..12), c2 in 0u16..4096) {
        let (a, b) = (random_monomial(&w1, c1), random_monomial(&w2, c2));
        let ab = a.after(&b).to_isometry().unwrap();
        let prod = a.to_isometry().unwrap().compose(&b.to_isometry().unwrap());
        prop_assert_eq!(ab.matrix(), prod.matrix());
    }
}

#[test]
fn invariants_of_the_shipped_representatives() {
    // rank of the fixed lattice, frame shape, lift order, rho
    let table = [
        ("4C", 10, "1^4 2^2 4^4", 4, rat(3, 4)),
        ("6G", 6, "2^3 6^3", 12, rat(11, 12)),
        ("6E", 8, "1^2 2^2 3^2 6^2", 6, rat(5, 6)),
        ("8E", 6, "1^2 2 4 8^2", 8, rat(7, 8)),
        ("10F", 4, "2^2 10^2", 20, rat(19, 20)),
    ];
    for (label, rank, shape, lift, rho) in table {
        let g = load_representative(&data_dir(), label).unwrap();
        let c = certificate(&g).unwrap();
        assert_eq!(c.fixed_rank, rank, "{label}");
        assert_eq!(c.frame_shape.to_string(), shape, "{label}");
        assert_eq!(c.lift_order, lift, "{label}");
        assert_eq!(c.rho, rho, "{label}");
        assert_eq!(c, target(label).unwrap(), "{label}");
    }
}

#[test]
fn certify_is_idempotent() {
    for label in CLASS_LABELS {
        let g = load_representative(&data_dir(), label).unwrap();
        let t = target(label).unwrap();
        let once = certify(&g, &t).unwrap();
        let twice = certify(&g, &once).unwrap();
        assert_eq!(once, twice, "{label}");
        assert_eq!(once, t, "{label}");
    }
}

#[test]
fn certify_rejects_the_wrong_class() {
    let g = load_representative(&data_dir(), "6G").unwrap();
    for other in ["4C", "6E", "8E", "10F"] {
        assert!(certify(&g, &target(other).unwrap()).is_err(), "6G certified as {other}");
    }
}

#[test]
fn golay_weights() {
    let w = golay().weight_distribution();
    assert_eq!((w[0], w[8], w[12], w[16], w[24]), (1, 759, 2576, 759, 1));
    assert_eq!(w.iter().sum::<u32>(), 4096);
}
