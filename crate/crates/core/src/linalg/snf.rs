use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// `u * a * v == s` with `u`, `v` unimodular and `s` in Smith form.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

fn smallest_in(s: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in t..s.rows() {
        for j in t..s.cols() {
            let x = &s[(i, j)];
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().map_or(true, |(_, b)| ax < *b) {
                best = Some(((i, j), ax));
            }
        }
    }
    best.map(|(p, _)| p)
}

/// Smith normal form. Pivots are chosen as the smallest nonzero absolute
/// value, first in row-major order.
pub fn snf(a: &IntMatrix) -> SnfResult {
    let (m, n) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    for t in 0..m.min(n) {
        let Some((pi, pj)) = smallest_in(&s, t) else {
            break;
        };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let p = s[(t, t)].clone();
            for i in t + 1..m {
                if !s[(i, t)].is_zero() {
                    let q = -s[(i, t)].div_floor(&p);
                    s.add_row_multiple(i, t, &q);
                    u.add_row_multiple(i, t, &q);
                }
            }
            for j in t + 1..n {
                if !s[(t, j)].is_zero() {
                    let q = -s[(t, j)].div_floor(&p);
                    s.add_col_multiple(j, t, &q);
                    v.add_col_multiple(j, t, &q);
                }
            }
            // a nonzero remainder is strictly smaller than the pivot
            let mut next: Option<(usize, usize, BigInt)> = None;
            for i in t + 1..m {
                let x = s[(i, t)].abs();
                if !x.is_zero() && next.as_ref().map_or(true, |(_, _, b)| x < *b) {
                    next = Some((i, t, x));
                }
            }
            for j in t + 1..n {
                let x = s[(t, j)].abs();
                if !x.is_zero() && next.as_ref().map_or(true, |(_, _, b)| x < *b) {
                    next = Some((t, j, x));
                }
            }
            if let Some((i, j, _)) = next {
                s.swap_rows(t, i);
                u.swap_rows(t, i);
                s.swap_cols(t, j);
                v.swap_cols(t, j);
                continue;
            }
            let bad = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !s[(i, j)].is_multiple_of(&p));
            match bad {
                Some((i, _)) => {
                    let one = BigInt::one();
                    s.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    SnfResult { u, s, v }
}

/// Row-style Hermite normal form: a basis (as rows) of the row lattice of `a`,
/// echelon with positive pivots and entries above each pivot in [0, pivot).
pub fn hnf_rows(a: &IntMatrix) -> IntMatrix {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        let mut found = false;
        loop {
            let mut best: Option<(usize, BigInt)> = None;
            for i in r..m {
                let x = h[(i, c)].abs();
                if !x.is_zero() && best.as_ref().map_or(true, |(_, b)| x < *b) {
                    best = Some((i, x));
                }
            }
            let Some((bi, _)) = best else { break };
            h.swap_rows(r, bi);
            let p = h[(r, c)].clone();
            let mut clean = true;
            for i in r + 1..m {
                if !h[(i, c)].is_zero() {
                    let q = -h[(i, c)].div_floor(&p);
                    h.add_row_multiple(i, r, &q);
                    if !h[(i, c)].is_zero() {
                        clean = false;
                    }
                }
            }
            if clean {
                found = true;
                break;
            }
        }
        if !found {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
        }
        let p = h[(r, c)].clone();
        for i in 0..r {
            let q = -h[(i, c)].div_floor(&p);
            h.add_row_multiple(i, r, &q);
        }
        r += 1;
    }
    let idx: Vec<usize> = (0..r).collect();
    h.select_rows(&idx)
}

/// Basis (as columns) of `{x in Z^n : a x = 0}`, HNF-canonicalized.
pub fn int_kernel(a: &IntMatrix) -> IntMatrix {
    let n = a.cols();
    let res = snf(a);
    let r = res.rank();
    let idx: Vec<usize> = (r..n).collect();
    let k = res.v.select_cols(&idx);
    if k.cols() == 0 {
        return k;
    }
    hnf_rows(&k.transpose()).transpose()
}

/// Basis (as columns, full rank n) of `{x in Z^n : (a x)_i = 0 mod moduli_i}`.
pub fn int_solve_mod(a: &IntMatrix, moduli: &[BigInt]) -> IntMatrix {
    let (m, n) = (a.rows(), a.cols());
    assert_eq!(m, moduli.len());
    if m == 0 {
        return IntMatrix::identity(n);
    }
    let d = IntMatrix::diagonal(moduli).neg();
    let k = int_kernel(&a.hstack(&d));
    let top: Vec<usize> = (0..n).collect();
    let gens = k.select_rows(&top);
    hnf_rows(&gens.transpose()).transpose()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a2_gram() {
        let a = IntMatrix::from_rows(&[vec![2, 1], vec![1, 2]]);
        let r = snf(&a);
        assert_eq!(r.diagonal(), vec![BigInt::from(1), BigInt::from(3)]);
        assert_eq!(r.u.mul(&a).mul(&r.v), r.s);
    }

    #[test]
    fn already_diagonal() {
        let a = IntMatrix::diagonal(&[2, 2]);
        assert_eq!(snf(&a).s, a);
    }

    #[test]
    fn zero_matrix() {
        let a = IntMatrix::zeros(2, 3);
        assert_eq!(snf(&a).s, a);
    }

    #[test]
    fn divisibility_fixup() {
        let a = IntMatrix::diagonal(&[2, 3]);
        assert_eq!(snf(&a).diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn kernel_of_row() {
        let a = IntMatrix::from_rows(&[vec![2, 4, 6]]);
        let k = int_kernel(&a);
        assert_eq!(k.cols(), 2);
        assert!(a.mul(&k).is_zero());
    }

    #[test]
    fn congruence_lattice() {
        // x + y = 0 mod 2
        let a = IntMatrix::from_rows(&[vec![1, 1]]);
        let k = int_solve_mod(&a, &[BigInt::from(2)]);
        assert_eq!(k.det().abs(), BigInt::from(2));
    }

    #[test]
    fn hnf_of_generators() {
        let a = IntMatrix::from_rows(&[vec![4, 0], vec![0, 4], vec![2, 2]]);
        let h = hnf_rows(&a);
        assert_eq!(h, IntMatrix::from_rows(&[vec![2, 2], vec![0, 4]]));
    }
}
