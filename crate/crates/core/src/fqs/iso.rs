//! Isomorphism testing: split into primary parts, screen by the `(order, q)`
//! counts, then backtrack over generator images.

use std::collections::HashMap;

use num_integer::Integer;
use num_rational::BigRational;

use super::{FiniteQuadraticSpace, Subspace, ENUMERATION_LIMIT};
use crate::error::{Error, Result};

/// Images of the generators of the source space, in target coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsomWitness {
    pub images: Vec<Vec<u64>>,
}

impl IsomWitness {
    pub fn apply(&self, a: &FiniteQuadraticSpace, b: &FiniteQuadraticSpace, x: &[u64]) -> Vec<u64> {
        let mut y = vec![0u64; b.num_generators()];
        for (i, &c) in x.iter().enumerate() {
            if c != 0 {
                y = b.add(&y, &b.scale(c, &self.images[i]));
            }
        }
        debug_assert_eq!(x.len(), a.num_generators());
        y
    }
}

/// Checks every element: the map is a bijection and preserves `q`.
pub fn verify_witness(a: &FiniteQuadraticSpace, b: &FiniteQuadraticSpace, w: &IsomWitness) -> bool {
    if a.order() != b.order() || w.images.len() != a.num_generators() || a.order() > ENUMERATION_LIMIT {
        return false;
    }
    for (img, &m) in w.images.iter().zip(a.orders()) {
        if !b.is_member(img) || b.scale(m, img).iter().any(|&c| c != 0) {
            return false;
        }
    }
    let mut seen = vec![false; b.order() as usize];
    for x in a.elements() {
        let y = w.apply(a, b, &x);
        let idx = b.index_of(&y) as usize;
        if seen[idx] || a.q(&x) != b.q(&y) {
            return false;
        }
        seen[idx] = true;
    }
    true
}

/// `Ok(None)` when the spaces are not isomorphic.
pub fn is_isomorphic(a: &FiniteQuadraticSpace, b: &FiniteQuadraticSpace) -> Result<Option<IsomWitness>> {
    if a.order() != b.order() || a.invariant_factors() != b.invariant_factors() {
        return Ok(None);
    }
    if a.order() > ENUMERATION_LIMIT {
        return Err(Error::InvalidSpace(format!(
            "order {} exceeds the enumeration limit",
            a.order()
        )));
    }
    let mut images = vec![vec![0u64; b.num_generators()]; a.num_generators()];
    for p in a.primes() {
        let pa = a.primary_part(p)?;
        let pb = b.primary_part(p)?;
        if pa.space.q_multiset() != pb.space.q_multiset() {
            return Ok(None);
        }
        let Some(local) = backtrack(&pa.space, &pb.space, p) else {
            return Ok(None);
        };
        // p-component of each source generator, in the coordinates of pa
        let lookup = coordinate_table(a, &pa);
        let n = a.order();
        let pn = pa.space.order();
        let eps = crt_idempotent(pn, n / pn);
        for (i, img) in images.iter_mut().enumerate() {
            let mut e = vec![0u64; a.num_generators()];
            e[i] = 1;
            let comp = a.scale(eps, &e);
            let y = &lookup[&a.index_of(&comp)];
            let local_img = local.apply(&pa.space, &pb.space, y);
            let mut amb = vec![0u64; b.num_generators()];
            for (j, &c) in local_img.iter().enumerate() {
                amb = b.add(&amb, &b.scale(c, &pb.embedding[j]));
            }
            *img = b.add(img, &amb);
        }
    }
    let w = IsomWitness { images };
    if !verify_witness(a, b, &w) {
        return Err(Error::InvalidSpace("assembled isomorphism failed verification".into()));
    }
    Ok(Some(w))
}

/// `e` with `e = 1 mod m` and `e = 0 mod r`, for coprime `m`, `r`.
fn crt_idempotent(m: u64, r: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    // r * (r^{-1} mod m)
    let g = (r as i128).extended_gcd(&(m as i128));
    let inv = g.x.rem_euclid(m as i128) as u64;
    ((r as u128 * inv as u128) % (m as u128 * r as u128)) as u64
}

/// Ambient index -> subspace coordinates, for every element of the subspace.
fn coordinate_table(ambient: &FiniteQuadraticSpace, sub: &Subspace) -> HashMap<u64, Vec<u64>> {
    let mut out = HashMap::new();
    for y in sub.space.elements() {
        let mut x = vec![0u64; ambient.num_generators()];
        for (j, &c) in y.iter().enumerate() {
            x = ambient.add(&x, &ambient.scale(c, &sub.embedding[j]));
        }
        out.insert(ambient.index_of(&x), y);
    }
    out
}

struct Target<'a> {
    t: &'a FiniteQuadraticSpace,
    coords: Vec<Vec<u64>>,
}

struct Search<'a> {
    s: &'a FiniteQuadraticSpace,
    tgt: Target<'a>,
    p: u64,
    order: Vec<usize>,
    candidates: Vec<Vec<usize>>,
    images: Vec<Option<usize>>,
    in_h: Vec<bool>,
    h: Vec<usize>,
}

impl Search<'_> {
    fn b_matches(&self, g: usize, y: usize) -> bool {
        let s = self.s;
        let t = self.tgt.t;
        let l = s.level().lcm(&t.level());
        let (fs, ft) = (l / s.level(), l / t.level());
        let mut eg = vec![0u64; s.num_generators()];
        eg[g] = 1;
        for (j, img) in self.images.iter().enumerate() {
            let Some(img) = img else { continue };
            let mut ej = vec![0u64; s.num_generators()];
            ej[j] = 1;
            if s.b_num(&eg, &ej) * fs != t.b_num(&self.tgt.coords[y], &self.tgt.coords[*img]) * ft {
                return false;
            }
        }
        true
    }

    /// Adds `<y>` to `H`; returns how many elements were pushed.
    fn extend(&mut self, y: usize, m: u64) -> usize {
        let t = self.tgt.t;
        let before = self.h.len();
        let base: Vec<usize> = self.h.clone();
        let yc = self.tgt.coords[y].clone();
        let mut mult = yc.clone();
        for _ in 1..m {
            for &h in &base {
                let z = t.index_of(&t.add(&self.tgt.coords[h], &mult)) as usize;
                if !self.in_h[z] {
                    self.in_h[z] = true;
                    self.h.push(z);
                }
            }
            mult = t.add(&mult, &yc);
        }
        self.h.len() - before
    }

    fn retract(&mut self, count: usize) {
        for _ in 0..count {
            let z = self.h.pop().unwrap();
            self.in_h[z] = false;
        }
    }

    fn run(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let g = self.order[depth];
        let m = self.s.orders()[g];
        let t = self.tgt.t;
        for ci in 0..self.candidates[depth].len() {
            let y = self.candidates[depth][ci];
            let low = t.scale(m / self.p, &self.tgt.coords[y]);
            if self.in_h[t.index_of(&low) as usize] || !self.b_matches(g, y) {
                continue;
            }
            let added = self.extend(y, m);
            self.images[g] = Some(y);
            if self.run(depth + 1) {
                return true;
            }
            self.images[g] = None;
            self.retract(added);
        }
        false
    }
}

/// Isomorphism of `p`-groups with forms, found generator by generator.
fn backtrack(s: &FiniteQuadraticSpace, t: &FiniteQuadraticSpace, p: u64) -> Option<IsomWitness> {
    let coords: Vec<Vec<u64>> = t.elements().collect();
    let key = |sp: &FiniteQuadraticSpace, x: &[u64]| -> (u64, BigRational) { (sp.element_order(x), sp.q(x)) };
    let mut by_key: HashMap<(u64, BigRational), Vec<usize>> = HashMap::new();
    for (i, x) in coords.iter().enumerate() {
        by_key.entry(key(t, x)).or_default().push(i);
    }
    let k = s.num_generators();
    let unit = |i: usize| -> Vec<u64> { (0..k).map(|j| u64::from(i == j)).collect() };
    let gen_keys: Vec<(u64, BigRational)> = (0..k).map(|i| key(s, &unit(i))).collect();
    let mut order: Vec<usize> = (0..k).collect();
    let rarity = |i: usize| by_key.get(&gen_keys[i]).map_or(0, Vec::len);
    order.sort_by_key(|&i| (std::cmp::Reverse(s.orders()[i]), rarity(i)));
    let candidates: Vec<Vec<usize>> = order
        .iter()
        .map(|&i| by_key.get(&gen_keys[i]).cloned().unwrap_or_default())
        .collect();
    let mut in_h = vec![false; coords.len()];
    in_h[0] = true;
    let mut search = Search {
        s,
        tgt: Target { t, coords },
        p,
        order,
        candidates,
        images: vec![None; k],
        in_h,
        h: vec![0],
    };
    if !search.run(0) {
        return None;
    }
    let images = search
        .images
        .iter()
        .map(|y| search.tgt.coords[y.expect("all placed")].clone())
        .collect();
    Some(IsomWitness { images })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{root_lattice, RootSystem};
    use crate::linalg::rat;

    fn disc(kind: RootSystem) -> FiniteQuadraticSpace {
        FiniteQuadraticSpace::from_lattice(&root_lattice(kind).unwrap()).unwrap()
    }

    #[test]
    fn a2_is_not_minus_a2() {
        let a2 = disc(RootSystem::A(2));
        assert!(is_isomorphic(&a2, &a2.negate()).unwrap().is_none());
        assert!(is_isomorphic(&a2, &disc(RootSystem::E(6))).unwrap().is_none());
        assert!(is_isomorphic(&a2.negate(), &disc(RootSystem::E(6))).unwrap().is_some());
    }

    #[test]
    fn d4_is_three_copies_of_a_cyclic_pair() {
        // D4: all three nonzero classes have q = 1/2
        let d4 = disc(RootSystem::D(4));
        let swapped = FiniteQuadraticSpace::new(
            vec![2, 2],
            vec![rat(1, 2), rat(1, 2)],
            vec![vec![rat(0, 1), rat(1, 2)], vec![rat(1, 2), rat(0, 1)]],
        )
        .unwrap();
        let w = is_isomorphic(&d4, &swapped).unwrap().unwrap();
        assert!(verify_witness(&d4, &swapped, &w));
    }

    #[test]
    fn mixed_primes() {
        // A5 has discriminant Z/6 with q = 5/12
        let a5 = disc(RootSystem::A(5));
        let split = FiniteQuadraticSpace::cyclic(2, rat(3, 4))
            .unwrap()
            .orth_sum(&FiniteQuadraticSpace::cyclic(3, rat(2, 3)).unwrap());
        let w = is_isomorphic(&a5, &split).unwrap();
        assert!(w.is_some());
        assert!(verify_witness(&a5, &split, &w.unwrap()));
    }

    #[test]
    fn crt() {
        assert_eq!(crt_idempotent(4, 9) % 4, 1);
        assert_eq!(crt_idempotent(4, 9) % 9, 0);
        assert_eq!(crt_idempotent(1, 9), 0);
    }
}
