//! Random search for monomial representatives and the shipped data files.

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::certify::{certify, ClassCertificate};
use super::{golay, leech_lattice, m24_generators, MonomialIsometry, Perm24};
use crate::error::{Error, Result};
use crate::isometry::Isometry;
use crate::lattice::{root_lattice, Lattice, RootSystem};
use crate::linalg::rat;

pub const DATA_DIR_ENV: &str = "ORBIFOLD_DATA_DIR";

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub monomial: MonomialIsometry,
    pub isometry: Isometry,
    pub certificate: ClassCertificate,
    /// Permutations examined before the hit, counting the successful one.
    pub candidates: u64,
    pub seed: u64,
}

fn random_perm(rng: &mut ChaCha8Rng, gens: &[Perm24; 4]) -> Perm24 {
    let len = rng.gen_range(8..48);
    let mut p = Perm24::identity();
    for _ in 0..len {
        p = gens[rng.gen_range(0..4)].after(&p);
    }
    p
}

/// Draws random elements of M24, pairs each with every Golay sign vector,
/// and certifies the first monomial whose frame shape matches.
pub fn search_class(target: &ClassCertificate, seed: u64, budget: u64) -> Result<SearchOutcome> {
    let gens = m24_generators();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let code = golay();
    for k in 1..=budget {
        let perm = random_perm(&mut rng, &gens);
        for &w in code.words() {
            let m = MonomialIsometry { perm, signs: w };
            if m.frame_shape() != target.frame_shape {
                continue;
            }
            let g = m.to_isometry()?;
            if let Ok(certificate) = certify(&g, target) {
                return Ok(SearchOutcome {
                    monomial: m,
                    isometry: g,
                    certificate,
                    candidates: k,
                    seed,
                });
            }
        }
    }
    Err(Error::BudgetExhausted(budget))
}

/// `$ORBIFOLD_DATA_DIR`, else the data directory shipped with the crate.
pub fn data_dir() -> PathBuf {
    std::env::var_os(DATA_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("data"))
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

pub fn representative_json(label: &str, outcome: &SearchOutcome) -> Value {
    let mut v = outcome.isometry.to_json(Some(label));
    let signs: Vec<u8> = (0..24).filter(|i| outcome.monomial.signs >> i & 1 == 1).collect();
    let obj = v.as_object_mut().expect("object");
    obj.insert("lattice_ref".into(), json!("leech"));
    obj.insert(
        "monomial".into(),
        json!({ "perm": outcome.monomial.perm.0.to_vec(), "signs": signs }),
    );
    obj.insert(
        "search".into(),
        json!({ "candidates": outcome.candidates, "seed": outcome.seed }),
    );
    v
}

pub fn save_representative(dir: &Path, label: &str, outcome: &SearchOutcome) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let path = dir.join(format!("{label}.json"));
    let text = serde_json::to_string_pretty(&representative_json(label, outcome)).expect("json");
    std::fs::write(&path, text + "\n").map_err(|e| io_err(&path, e))?;
    Ok(path)
}

/// `leech`, a root system such as `E8`, or `sqrtK` followed by a root
/// system for the lattice rescaled by `K` (so `sqrt2E8` has norms 4, 8, ...).
pub fn builtin_lattice(name: &str) -> Result<Lattice> {
    let unknown = || Error::parse("lattice_ref", format!("unknown lattice {name:?}"));
    if name.eq_ignore_ascii_case("leech") {
        return Ok(leech_lattice());
    }
    let (scale, rest) = match name.strip_prefix("sqrt") {
        Some(rest) => {
            let digits = rest.chars().take_while(char::is_ascii_digit).count();
            let k: i64 = rest[..digits].parse().map_err(|_| unknown())?;
            (k, &rest[digits..])
        }
        None => (1, name),
    };
    let kind: RootSystem = rest.parse().map_err(|_| unknown())?;
    let l = root_lattice(kind)?;
    if scale == 1 {
        return Ok(l);
    }
    Ok(l.rescale(&rat(scale, 1))?.with_name(name.to_string()))
}

/// Loads `<dir>/<label>.json`. The stored matrix is what counts; when a
/// monomial description is present it must reproduce that matrix.
pub fn load_representative(dir: &Path, label: &str) -> Result<Isometry> {
    let path = dir.join(format!("{label}.json"));
    let text = std::fs::read_to_string(&path).map_err(|e| io_err(&path, e))?;
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| Error::parse(format!("{}:{}", path.display(), e.line()), e.to_string()))?;
    let (g, _) = Isometry::from_json(&v, builtin_lattice)?;
    if let Some(m) = v.get("monomial") {
        let perm: Option<Vec<u8>> = m
            .get("perm")
            .and_then(Value::as_array)
            .map(|a| a.iter().filter_map(|x| x.as_u64().map(|x| x as u8)).collect());
        let perm = perm
            .and_then(|p| Perm24::from_slice(&p))
            .ok_or_else(|| Error::parse("monomial.perm", "expected a permutation of 0..24"))?;
        let signs = m
            .get("signs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse("monomial.signs", "expected a list of positions"))?
            .iter()
            .try_fold(0u32, |acc, x| match x.as_u64() {
                Some(i) if i < 24 => Ok(acc | 1 << i),
                _ => Err(Error::parse("monomial.signs", "position out of range")),
            })?;
        let rebuilt = MonomialIsometry::new(perm, signs)?.to_isometry()?;
        if rebuilt.matrix() != g.matrix() {
            return Err(Error::parse("monomial", "does not reproduce the stored matrix"));
        }
    }
    Ok(g)
}
