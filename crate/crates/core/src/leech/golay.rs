//! The extended binary Golay code as the extended quadratic residue code of
//! length 24. Points are `0..23` for the field elements of F_23 and 23 for
//! infinity; words are bitmasks.

use std::sync::OnceLock;

pub const POINTS: usize = 24;
pub const INFINITY: u8 = 23;
pub const ALL_ONES: u32 = (1 << POINTS) - 1;

#[derive(Clone, Debug)]
pub struct GolayCode {
    basis: [u32; 12],
    words: Vec<u32>,
}

fn is_square_mod_23(x: u32) -> bool {
    (1..23).any(|y| (y * y) % 23 == x)
}

fn build() -> GolayCode {
    // cyclic shifts of the non-residue indicator, extended by parity
    let non_residues: Vec<u32> = (1..23).filter(|&x| !is_square_mod_23(x)).collect();
    let mut gens: Vec<u32> = (0..23)
        .map(|s| {
            let mut w = 0u32;
            for &x in &non_residues {
                w |= 1 << ((x + s) % 23);
            }
            if w.count_ones() % 2 == 1 {
                w |= 1 << INFINITY;
            }
            w
        })
        .collect();
    gens.push(ALL_ONES);
    let basis = echelon(&gens);
    assert_eq!(basis.len(), 12, "Golay code must have dimension 12");
    let basis: [u32; 12] = basis.try_into().expect("12 basis words");
    let mut words = vec![0u32];
    for b in basis {
        let more: Vec<u32> = words.iter().map(|w| w ^ b).collect();
        words.extend(more);
    }
    words.sort_unstable();
    GolayCode { basis, words }
}

/// Reduced row echelon basis over GF(2), pivots on the highest bits.
fn echelon(gens: &[u32]) -> Vec<u32> {
    let mut basis: Vec<u32> = Vec::new();
    for &g in gens {
        let mut v = g;
        for &b in &basis {
            let top = 31 - b.leading_zeros();
            if v >> top & 1 == 1 {
                v ^= b;
            }
        }
        if v != 0 {
            let top = 31 - v.leading_zeros();
            for b in basis.iter_mut() {
                if *b >> top & 1 == 1 {
                    *b ^= v;
                }
            }
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis
}

pub fn golay() -> &'static GolayCode {
    static CODE: OnceLock<GolayCode> = OnceLock::new();
    CODE.get_or_init(build)
}

impl GolayCode {
    pub fn basis(&self) -> &[u32; 12] {
        &self.basis
    }

    /// All 4096 codewords in increasing order.
    pub fn words(&self) -> &[u32] {
        &self.words
    }

    /// Membership via self-duality: `w` is a codeword iff it meets every
    /// basis word evenly.
    pub fn contains(&self, w: u32) -> bool {
        w & !ALL_ONES == 0 && self.basis.iter().all(|b| (w & b).count_ones() % 2 == 0)
    }

    /// Counts of codewords by weight 0..=24.
    pub fn weight_distribution(&self) -> [u32; 25] {
        let mut d = [0u32; 25];
        for w in &self.words {
            d[w.count_ones() as usize] += 1;
        }
        d
    }

    pub fn min_weight(&self) -> u32 {
        self.words.iter().filter(|&&w| w != 0).map(|w| w.count_ones()).min().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights() {
        let d = golay().weight_distribution();
        let expected: Vec<(usize, u32)> = vec![(0, 1), (8, 759), (12, 2576), (16, 759), (24, 1)];
        for (w, c) in d.iter().enumerate() {
            let e = expected.iter().find(|(x, _)| *x == w).map_or(0, |(_, c)| *c);
            assert_eq!(*c, e, "weight {w}");
        }
    }

    #[test]
    fn membership_agrees_with_enumeration() {
        let c = golay();
        assert!(c.contains(0));
        assert!(c.contains(ALL_ONES));
        let mut n = 0;
        // sample masks, including all codewords
        for w in c.words() {
            assert!(c.contains(*w));
            assert!(!c.contains(w ^ 1));
            n += 1;
        }
        assert_eq!(n, 4096);
    }
}
