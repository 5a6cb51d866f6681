// Shared generators and brute-force oracles for the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use orbifold_fusion::fqs::FiniteQuadraticSpace;
use orbifold_fusion::isometry::Isometry;
use orbifold_fusion::lattice::{root_lattice, Lattice, RootSystem};
use orbifold_fusion::linalg::IntMatrix;
use rand::seq::SliceRandom;
use rand::Rng;

pub const SMALL_ROOTS: [RootSystem; 12] = [
    RootSystem::A(1),
    RootSystem::A(2),
    RootSystem::A(3),
    RootSystem::A(4),
    RootSystem::A(5),
    RootSystem::A(6),
    RootSystem::D(4),
    RootSystem::D(5),
    RootSystem::D(6),
    RootSystem::E(6),
    RootSystem::E(7),
    RootSystem::E(8),
];

fn rank_of(r: RootSystem) -> usize {
    match r {
        RootSystem::A(n) | RootSystem::D(n) | RootSystem::E(n) => n,
    }
}

/// Reflection in the i-th basis vector of an even lattice whose basis
/// vectors all have norm 2: `x -> x - (x|e_i) e_i`.
pub fn reflection(gram: &IntMatrix, i: usize) -> IntMatrix {
    let n = gram.rows();
    let mut m = IntMatrix::identity(n);
    for j in 0..n {
        m[(i, j)] = &m[(i, j)] - &gram[(i, j)];
    }
    m
}

/// Orthogonal sum of a few root lattices, total rank at most `max_rank`.
pub fn random_root_sum<R: Rng>(rng: &mut R, max_rank: usize) -> Lattice {
    let mut parts = Vec::new();
    let mut left = max_rank;
    loop {
        let fits: Vec<RootSystem> = SMALL_ROOTS.iter().copied().filter(|&r| rank_of(r) <= left).collect();
        if fits.is_empty() {
            break;
        }
        let r = *fits.choose(rng).unwrap();
        parts.push(root_lattice(r).unwrap());
        left -= rank_of(r);
        if left == 0 || rng.gen_bool(0.5) {
            break;
        }
    }
    Lattice::direct_sum(&parts)
}

/// Random Weyl group element, times -1 half of the time.
pub fn random_weyl_element<R: Rng>(rng: &mut R, l: &Lattice) -> Isometry {
    let gram = l.int_gram().unwrap();
    let n = l.rank();
    let mut m = IntMatrix::identity(n);
    for _ in 0..rng.gen_range(1..=16) {
        m = m.mul(&reflection(&gram, rng.gen_range(0..n)));
    }
    if rng.gen_bool(0.5) {
        m = m.neg();
    }
    Isometry::new(l.clone(), m).unwrap()
}

/// Cyclic shift of `k` copies of `m`, with a sign on one block when `neg`.
pub fn block_shift(m: &Lattice, k: usize, neg: bool) -> Isometry {
    let r = m.rank();
    let l = Lattice::direct_sum(&vec![m.clone(); k]);
    let mut a = IntMatrix::zeros(r * k, r * k);
    for b in 0..k {
        let to = (b + 1) % k;
        let s = if neg && b == 0 { -1 } else { 1 };
        for i in 0..r {
            a[(to * r + i, b * r + i)] = BigInt::from(s);
        }
    }
    Isometry::new(l, a).unwrap()
}

/// Random even positive definite gram matrix, diagonally dominant.
pub fn random_even_gram<R: Rng>(rng: &mut R, n: usize) -> IntMatrix {
    let mut g = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.gen_range(-2..=2);
            g[i][j] = v;
            g[j][i] = v;
        }
    }
    for i in 0..n {
        let row: i64 = (0..n).filter(|&j| j != i).map(|j| g[i][j].abs()).sum();
        g[i][i] = 2 * (row / 2 + 1 + rng.gen_range(0..=1));
    }
    IntMatrix::from_rows(&g)
}

/// A fixed-point-free isometry of rank at most 8: the coinvariant
/// restriction of a random Weyl element, of a block shift, or -1 on a random
/// even lattice.
pub fn random_fixed_point_free<R: Rng>(rng: &mut R) -> (Lattice, Isometry) {
    loop {
        let g = match rng.gen_range(0..4) {
            0 | 1 => {
                let l = random_root_sum(rng, 8);
                random_weyl_element(rng, &l)
            }
            2 => {
                let k = rng.gen_range(2..=4);
                let r = rng.gen_range(1..=8 / k);
                let m = Lattice::from_int_gram(random_even_gram(rng, r)).unwrap();
                block_shift(&m, k, rng.gen_bool(0.5))
            }
            _ => {
                let n = rng.gen_range(1..=6);
                Isometry::minus_identity(Lattice::from_int_gram(random_even_gram(rng, n)).unwrap())
            }
        };
        let (c, gc) = g.coinvariant().unwrap();
        if c.rank() > 0 {
            return (c, gc);
        }
    }
}

/// Gram matrix `U^t G U` and the conjugate `U^-1 g U`: the same isometry in
/// another basis.
pub fn change_basis(g: &Isometry, u: &IntMatrix) -> Isometry {
    let u_inv = u.to_rat().inverse().unwrap().to_int().unwrap();
    let gram = u.to_rat().transpose().mul(g.lattice().gram()).mul_int(u);
    let l = Lattice::new(gram).unwrap();
    Isometry::new(l, u_inv.mul(g.matrix()).mul(u)).unwrap()
}

pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    if n < 2 {
        return u;
    }
    for _ in 0..rng.gen_range(0..10) {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            u.add_col_multiple(a, b, &BigInt::from(rng.gen_range(-2..=2)));
        }
    }
    u
}

/// Every group isomorphism `a -> b` is fixed by the images of the
/// generators of `a`; try all of them and keep those that are bijective and
/// preserve `q`. Only meant for tiny spaces.
pub fn brute_isomorphic(a: &FiniteQuadraticSpace, b: &FiniteQuadraticSpace) -> bool {
    if a.order() != b.order() {
        return false;
    }
    let targets: Vec<Vec<u64>> = b.elements().collect();
    let k = a.num_generators();
    let candidates: Vec<Vec<&Vec<u64>>> = (0..k)
        .map(|i| {
            targets
                .iter()
                .filter(|y| a.orders()[i] % b.element_order(y) == 0)
                .collect()
        })
        .collect();
    let sources: Vec<Vec<u64>> = a.elements().collect();
    let mut pick = vec![0usize; k];
    loop {
        if candidates.iter().all(|c| !c.is_empty()) {
            let images: Vec<&Vec<u64>> = (0..k).map(|i| candidates[i][pick[i]]).collect();
            if extends(a, b, &images, &sources) {
                return true;
            }
        } else {
            return false;
        }
        // odometer over the candidate lists
        let mut i = 0;
        loop {
            if i == k {
                return false;
            }
            pick[i] += 1;
            if pick[i] < candidates[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

fn extends(a: &FiniteQuadraticSpace, b: &FiniteQuadraticSpace, images: &[&Vec<u64>], sources: &[Vec<u64>]) -> bool {
    let mut seen = std::collections::HashSet::new();
    for x in sources {
        let mut y = vec![0u64; b.num_generators()];
        for (c, img) in x.iter().zip(images) {
            y = b.add(&y, &b.scale(*c, img));
        }
        if a.q(x) != b.q(&y) || !seen.insert(y) {
            return false;
        }
    }
    true
}

/// q multiplied by a unit mod the level, or shifted by 1/2 on even cyclic
/// factors; both give valid quadratic forms on the same group.
pub fn perturb(s: &FiniteQuadraticSpace, unit: u64, halves: &[bool]) -> FiniteQuadraticSpace {
    let k = s.num_generators();
    let u = BigRational::from_integer(BigInt::from(unit));
    let half = BigRational::new(1.into(), 2.into());
    let mut q: Vec<BigRational> = (0..k).map(|i| s.q_gen(i) * &u).collect();
    for i in 0..k {
        if s.orders()[i] % 2 == 0 && halves.get(i).copied().unwrap_or(false) {
            q[i] += &half;
        }
    }
    let b: Vec<Vec<BigRational>> = (0..k).map(|i| (0..k).map(|j| s.b_gen(i, j) * &u).collect()).collect();
    FiniteQuadraticSpace::new(s.orders().to_vec(), q, b).unwrap()
}

pub fn is_zero_vec(x: &[BigRational]) -> bool {
    x.iter().all(Zero::is_zero)
}
