use std::fmt;
use std::str::FromStr;

use super::Lattice;
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RootSystem {
    A(usize),
    D(usize),
    E(usize),
}

impl fmt::Display for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootSystem::A(n) => write!(f, "A{n}"),
            RootSystem::D(n) => write!(f, "D{n}"),
            RootSystem::E(n) => write!(f, "E{n}"),
        }
    }
}

impl FromStr for RootSystem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::parse("root system", format!("unrecognized {s:?}"));
        let mut chars = s.chars();
        let kind = chars.next().ok_or_else(bad)?;
        let n: usize = chars.as_str().trim_start_matches('_').parse().map_err(|_| bad())?;
        match kind.to_ascii_uppercase() {
            'A' => Ok(RootSystem::A(n)),
            'D' => Ok(RootSystem::D(n)),
            'E' => Ok(RootSystem::E(n)),
            _ => Err(bad()),
        }
    }
}

fn path_edges(n: usize) -> Vec<(usize, usize)> {
    (1..n).map(|i| (i - 1, i)).collect()
}

/// Cartan matrix in the simple-root basis.
///
/// Node order: `A_n` and `D_n` follow the chain, with the last two `D_n`
/// nodes both attached to node `n-3`. For `E_n` the first `n-1` nodes form a
/// chain and the last node hangs off the third one.
pub fn root_lattice(kind: RootSystem) -> Result<Lattice> {
    let invalid = |rank| Error::InvalidRank {
        kind: kind.to_string().chars().take(1).collect(),
        rank,
    };
    let (n, edges) = match kind {
        RootSystem::A(n) if n >= 1 => (n, path_edges(n)),
        RootSystem::D(n) if n >= 3 => {
            let mut e = path_edges(n - 1);
            e.push((n - 3, n - 1));
            (n, e)
        }
        RootSystem::E(n) if (6..=8).contains(&n) => {
            let mut e = path_edges(n - 1);
            e.push((2, n - 1));
            (n, e)
        }
        RootSystem::A(n) | RootSystem::D(n) | RootSystem::E(n) => return Err(invalid(n)),
    };
    let mut g = IntMatrix::zeros(n, n);
    for i in 0..n {
        g[(i, i)] = 2.into();
    }
    for (a, b) in edges {
        g[(a, b)] = (-1).into();
        g[(b, a)] = (-1).into();
    }
    Ok(Lattice::from_int_gram(g)?.with_name(kind.to_string()))
}
