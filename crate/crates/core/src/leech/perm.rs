//! Permutations of the 24 Golay coordinates and generators of M24.

use std::collections::BTreeMap;
use std::fmt;

use super::golay::{golay, INFINITY, POINTS};

/// `self.0[i]` is the image of point `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm24(pub [u8; POINTS]);

impl Perm24 {
    pub fn identity() -> Perm24 {
        let mut p = [0u8; POINTS];
        for (i, x) in p.iter_mut().enumerate() {
            *x = i as u8;
        }
        Perm24(p)
    }

    pub fn from_fn(f: impl Fn(u8) -> u8) -> Option<Perm24> {
        let mut p = [0u8; POINTS];
        let mut seen = 0u32;
        for (i, x) in p.iter_mut().enumerate() {
            let y = f(i as u8);
            if y as usize >= POINTS || seen >> y & 1 == 1 {
                return None;
            }
            seen |= 1 << y;
            *x = y;
        }
        Some(Perm24(p))
    }

    pub fn from_slice(images: &[u8]) -> Option<Perm24> {
        if images.len() != POINTS {
            return None;
        }
        Perm24::from_fn(|i| images[i as usize])
    }

    pub fn apply(&self, i: u8) -> u8 {
        self.0[i as usize]
    }

    /// `self` after `other`: `i -> self(other(i))`.
    pub fn after(&self, other: &Perm24) -> Perm24 {
        let mut p = [0u8; POINTS];
        for (i, x) in p.iter_mut().enumerate() {
            *x = self.0[other.0[i] as usize];
        }
        Perm24(p)
    }

    pub fn inverse(&self) -> Perm24 {
        let mut p = [0u8; POINTS];
        for (i, &x) in self.0.iter().enumerate() {
            p[x as usize] = i as u8;
        }
        Perm24(p)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u8 == x)
    }

    pub fn apply_word(&self, w: u32) -> u32 {
        let mut out = 0u32;
        for i in 0..POINTS {
            if w >> i & 1 == 1 {
                out |= 1 << self.0[i];
            }
        }
        out
    }

    pub fn cycles(&self) -> Vec<Vec<u8>> {
        let mut seen = [false; POINTS];
        let mut out = Vec::new();
        for start in 0..POINTS {
            if seen[start] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cyc.push(i as u8);
                i = self.0[i] as usize;
            }
            out.push(cyc);
        }
        out
    }

    pub fn cycle_type(&self) -> BTreeMap<usize, usize> {
        let mut t = BTreeMap::new();
        for c in self.cycles() {
            *t.entry(c.len()).or_insert(0) += 1;
        }
        t
    }

    pub fn order(&self) -> u64 {
        use num_integer::Integer;
        self.cycles().iter().fold(1u64, |a, c| a.lcm(&(c.len() as u64)))
    }

    pub fn preserves_golay(&self) -> bool {
        let code = golay();
        code.basis().iter().all(|&b| code.contains(self.apply_word(b)))
    }
}

impl fmt::Debug for Perm24 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<String> = self
            .cycles()
            .into_iter()
            .filter(|c| c.len() > 1)
            .map(|c| {
                let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                format!("({})", parts.join(" "))
            })
            .collect();
        if cycles.is_empty() {
            write!(f, "()")
        } else {
            write!(f, "{}", cycles.join(""))
        }
    }
}

fn inv23(x: u32) -> u32 {
    (1..23).find(|y| (x * y) % 23 == 1).expect("nonzero residue")
}

fn is_square(x: u32) -> bool {
    (1..23).any(|y| (y * y) % 23 == x)
}

/// Generators of M24: `x -> x+1`, `x -> 2x`, `x -> -1/x` generate
/// PSL(2, 23); the fourth fixes 0 and infinity and sends a square `x` to
/// `x^3 / 9` and a non-square to `9 x^3`.
pub fn m24_generators() -> [Perm24; 4] {
    let inf = INFINITY;
    let shift = Perm24::from_fn(|x| if x == inf { inf } else { (x + 1) % 23 }).unwrap();
    let double = Perm24::from_fn(|x| if x == inf { inf } else { (2 * x) % 23 }).unwrap();
    let invert = Perm24::from_fn(|x| match x {
        0 => inf,
        x if x == inf => 0,
        x => ((23 - inv23(x as u32)) % 23) as u8,
    })
    .unwrap();
    let inv9 = inv23(9);
    let delta = Perm24::from_fn(|x| {
        if x == 0 || x == inf {
            return x;
        }
        let x = x as u32;
        let cube = x * x % 23 * x % 23;
        let y = if is_square(x) { cube * inv9 % 23 } else { 9 * cube % 23 };
        y as u8
    })
    .unwrap();
    [shift, double, invert, delta]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_preserve_code() {
        for g in m24_generators() {
            assert!(g.preserves_golay(), "{g:?}");
        }
    }

    #[test]
    fn delta_is_outside_psl() {
        // PSL(2, 23) has order 6072 and is maximal in M24
        use std::collections::HashSet;
        let [s, d, i, delta] = m24_generators();
        let mut seen: HashSet<Perm24> = HashSet::new();
        let mut queue = vec![Perm24::identity()];
        seen.insert(Perm24::identity());
        while let Some(p) = queue.pop() {
            for g in [s, d, i] {
                let q = g.after(&p);
                if seen.insert(q) {
                    queue.push(q);
                }
            }
        }
        assert_eq!(seen.len(), 6072);
        assert!(!seen.contains(&delta));
    }

    #[test]
    fn inverse_and_compose() {
        let [s, _, i, _] = m24_generators();
        let p = s.after(&i);
        assert!(p.after(&p.inverse()).is_identity());
        assert_eq!(s.order(), 23);
        assert_eq!(i.order(), 2);
    }
}
