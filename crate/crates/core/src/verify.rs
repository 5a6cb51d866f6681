//! End-to-end check that the fusion space of `V_{L}^g` for the coinvariant
//! lattice of a Leech class is anti-isometric to `D(L_g)`.

use std::path::PathBuf;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::check::{all_pass, Check};
use crate::error::{Error, Result};
use crate::fqs::{is_isomorphic, space_to_json, verify_witness, FiniteQuadraticSpace, IsomWitness};
use crate::fusion::{fusion_sanity, fusion_space, fusion_space_with_u, FusionCase, FusionDatum, WGrid};
use crate::isometry::Isometry;
use crate::lattice::{min_nonzero_norm, root_lattice, Lattice, RootSystem};
use crate::leech::{certify, data_dir, load_representative, search_class, target, ClassCertificate, CLASS_LABELS};
use crate::linalg::{format_rational, frac, rat, rat_inverse, RatVec};

/// Elementary divisor notation, e.g. `2^2·4^6` or `2·4·8^4`.
pub fn group_symbol(invariant_factors: &[u64]) -> String {
    let mut parts: Vec<(u64, u64)> = Vec::new();
    for &m in invariant_factors {
        let mut rest = m;
        let mut p = 2;
        while rest > 1 {
            if rest % p == 0 {
                let mut pk = 1;
                while rest % p == 0 {
                    rest /= p;
                    pk *= p;
                }
                parts.push((p, pk));
            }
            p += 1;
        }
    }
    parts.sort();
    let mut out: Vec<String> = Vec::new();
    let mut i = 0;
    while i < parts.len() {
        let j = (i..parts.len()).find(|&j| parts[j] != parts[i]).unwrap_or(parts.len());
        let (count, q) = (j - i, parts[i].1);
        out.push(if count == 1 { q.to_string() } else { format!("{q}^{count}") });
        i = j;
    }
    if out.is_empty() {
        "1".into()
    } else {
        out.join("·")
    }
}

/// The comparison lattice with the discriminant group it should have.
#[derive(Clone, Debug)]
pub struct LgConstruction {
    pub label: String,
    pub lattice: Lattice,
    /// Orthogonal sum the lattice is glued from.
    pub base: Lattice,
    pub glue: Vec<RatVec>,
    /// Discriminant group as listed for the class.
    pub listed: &'static str,
    /// What the construction must have; differs from `listed` only for 6G.
    pub expected: &'static str,
    pub notes: Vec<String>,
}

fn scaled(kind: RootSystem, c: i64) -> Result<Lattice> {
    root_lattice(kind)?.rescale_even(&rat(c, 1))
}

pub const NOTE_6G: &str = "listed discriminant 2^4·4^2·5^3 (order 32000) is inconsistent with \
det(sqrt6 D4 + sqrt2 A2) = 62208 = 2^8·3^5; the entry 5^3 is read as 3^5, giving 2^4·4^2·3^5";

pub fn build_lg(label: &str) -> Result<Lattice> {
    Ok(build_lg_detailed(label)?.lattice)
}

pub fn build_lg_detailed(label: &str) -> Result<LgConstruction> {
    let a = |n| root_lattice(RootSystem::A(n));
    let mut notes = Vec::new();
    let (base, glue, listed, expected): (Lattice, Vec<RatVec>, &'static str, &'static str) = match label {
        "4C" => {
            let base = Lattice::direct_sum(&[scaled(RootSystem::E(6), 4)?, a(2)?, a(1)?, a(1)?]);
            (base, vec![glue_4c()?], "2^2·4^6", "2^2·4^6")
        }
        "6G" => {
            notes.push(NOTE_6G.to_string());
            let base = Lattice::direct_sum(&[scaled(RootSystem::D(4), 6)?, scaled(RootSystem::A(2), 2)?]);
            (base, Vec::new(), "2^4·4^2·5^3", "2^4·4^2·3^5")
        }
        "6E" => {
            let mut parts: Vec<Lattice> = (0..5).map(|_| scaled(RootSystem::A(1), 3)).collect::<Result<_>>()?;
            parts.push(scaled(RootSystem::A(2), 2)?);
            parts.push(a(1)?);
            let base = Lattice::direct_sum(&parts);
            let (v, count) = glue_6e(&base)?;
            notes.push(format!(
                "index-2 glue found by search: first of {count} even order-2 classes giving 2^6·3^6 with an even 2-part"
            ));
            (base, vec![v], "2^6·3^6", "2^6·3^6")
        }
        "8E" => {
            let d5 = root_lattice(RootSystem::D(5))?.dual().rescale(&rat(8, 1))?;
            let base = Lattice::direct_sum(&[d5, scaled(RootSystem::A(1), 2)?]);
            (base, Vec::new(), "2·4·8^4", "2·4·8^4")
        }
        "10F" => (scaled(RootSystem::D(4), 10)?, Vec::new(), "2^2·4^2·5^4", "2^2·4^2·5^4"),
        other => return Err(Error::UnknownClass(other.to_string())),
    };
    if !base.is_even() {
        return Err(Error::NotEven);
    }
    let lattice = if glue.is_empty() {
        base.clone()
    } else {
        base.overlattice(&glue)?.0
    };
    let got = group_symbol(&FiniteQuadraticSpace::from_lattice(&lattice)?.invariant_factors());
    if got != expected {
        return Err(Error::CertificationFailed {
            field: format!("D(L_g) for {label}"),
            expected: expected.into(),
            computed: got,
        });
    }
    Ok(LgConstruction {
        label: label.into(),
        lattice: lattice.with_name(format!("L_g({label})")),
        base,
        glue,
        listed,
        expected,
        notes,
    })
}

/// Highest root of E6 in simple-root coordinates; the chain is nodes 0..4
/// and node 5 hangs off node 2.
/// Node of the E6 diagram carrying alpha_1..alpha_6.
const E6_LABELS: [usize; 6] = [0, 1, 2, 4, 3, 5];

const E6_HIGHEST_ROOT: [i64; 6] = [1, 2, 3, 2, 1, 2];

/// `2 gamma + eta` with `gamma` the minuscule weight at the end of the E6
/// chain and `eta` a minuscule weight of A2.
fn glue_4c() -> Result<RatVec> {
    let e6 = root_lattice(RootSystem::E(6))?;
    let a2 = root_lattice(RootSystem::A(2))?;
    // in the basis of 2E6 the vector 2 gamma has the coordinates of gamma in E6
    let gamma = rat_inverse(e6.gram())?.row(0);
    let eta = rat_inverse(a2.gram())?.row(0);
    let mut v = gamma;
    v.extend(eta);
    v.extend([BigRational::zero(), BigRational::zero()]);
    Ok(v)
}

fn glue_6e(base: &Lattice) -> Result<(RatVec, usize)> {
    let disc = base.discriminant_group()?;
    let orders: Vec<u64> = disc.orders.iter().map(|m| m.to_u64().unwrap()).collect();
    let total: u64 = orders.iter().product();
    let mut found: Option<RatVec> = None;
    let mut count = 0;
    for idx in 1..total {
        let mut rest = idx;
        let coords: Vec<u64> = orders
            .iter()
            .map(|&m| {
                let c = rest % m;
                rest /= m;
                c
            })
            .collect();
        // order 2: every coordinate is 0 or half the order
        if coords.iter().zip(&orders).any(|(&c, &m)| c != 0 && 2 * c != m) {
            continue;
        }
        let v = disc.element(&coords.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>());
        let norm = base.norm(&v);
        if !(norm.clone() * rat(1, 2)).is_integer() {
            continue;
        }
        let (over, _) = base.overlattice(std::slice::from_ref(&v))?;
        let d = FiniteQuadraticSpace::from_lattice(&over)?;
        if group_symbol(&d.invariant_factors()) == "2^6·3^6" && even_two_part(&d)? {
            count += 1;
            if found.is_none() {
                found = Some(v);
            }
        }
    }
    found
        .map(|v| (v, count))
        .ok_or_else(|| Error::InvalidSpace("no index-2 glue for 6E".into()))
}

/// The 2-part is elementary here, so q stays in Z/2 once it does on generators.
fn even_two_part(d: &FiniteQuadraticSpace) -> Result<bool> {
    let two = d.primary_part(2)?.space;
    Ok((0..two.num_generators()).all(|i| (two.q_gen(i) * rat(2, 1)).is_integer()))
}

/// Coordinates in `D(L)` of a vector given in the coordinates of `base`.
fn disc_coords(c: &LgConstruction, x: &[BigRational]) -> Result<Vec<u64>> {
    let emb = c
        .lattice
        .embedding()
        .cloned()
        .unwrap_or_else(|| crate::linalg::RatMatrix::identity(c.base.rank()));
    // x = y * B with B the basis rows of the overlattice
    let y = rat_inverse(&emb)?.transpose().mul_vec(x);
    let disc = c.lattice.discriminant_group()?;
    Ok(disc.coords(&y)?.iter().map(|v| v.to_u64().unwrap()).collect())
}

/// Explicit generators of `D(L_g)` for 4C.
#[derive(Clone, Debug, Default)]
pub struct Spot4C {
    /// Values printed for the generators.
    pub printed: Vec<Check>,
    /// Structure the generators are claimed to have.
    pub structural: Vec<Check>,
    pub notes: Vec<String>,
}

pub fn spot_checks_4c(c: &LgConstruction, fusion: &FusionDatum, coinvariant: &Lattice, fixed: &Lattice) -> Result<Spot4C> {
    let n = c.base.rank();
    let unit = |i: usize, v: BigRational| -> RatVec {
        (0..n).map(|j| if i == j { v.clone() } else { BigRational::zero() }).collect()
    };
    let lin = |terms: &[(i64, &RatVec)]| -> RatVec {
        let mut out = vec![BigRational::zero(); n];
        for (k, v) in terms {
            for (o, x) in out.iter_mut().zip(v.iter()) {
                *o += x * rat(*k, 1);
            }
        }
        out
    };
    // a_i = alpha_i / 2 with alpha_i a root of E6; in 2E6 coordinates that is e_i / 4
    let mut a: Vec<RatVec> = vec![(0..n)
        .map(|j| if j < 6 { rat(-E6_HIGHEST_ROOT[j], 4) } else { BigRational::zero() })
        .collect()];
    // alpha_1..alpha_5 span A5 with alpha_5 between alpha_3 and alpha_4
    a.extend(E6_LABELS.iter().map(|&i| unit(i, rat(1, 4))));
    let b = [unit(8, rat(1, 2)), unit(9, rat(1, 2))];
    let l = &c.base;
    let q = |v: &RatVec| frac(&(l.norm(v) * rat(1, 2)));
    let bil = |v: &RatVec, w: &RatVec| frac(&l.inner(v, w));
    let mut out = Vec::new();
    let mut st = Vec::new();
    for (i, ai) in a.iter().enumerate().skip(1) {
        out.push(Check::new(format!("4C q(a_{i})"), "1/4", format_rational(&q(ai))));
    }
    for (i, bi) in b.iter().enumerate() {
        out.push(Check::new(format!("4C q(b_{})", i + 1), "1/4", format_rational(&q(bi))));
    }
    let space = FiniteQuadraticSpace::from_lattice(&c.lattice)?;
    let ord = |v: &RatVec| -> Result<u64> { Ok(space.element_order(&disc_coords(c, v)?)) };
    st.push(Check::new(
        "4C orders of a_1..a_6, b_1, b_2",
        "[4, 4, 4, 4, 4, 4, 2, 2]",
        format!("{:?}", a[1..].iter().chain(&b).map(ord).collect::<Result<Vec<_>>>()?),
    ));
    let perp = a[1..].iter().all(|x| b.iter().all(|y| bil(x, y).is_zero()));
    st.push(Check::new("4C a_i orthogonal to b_j", true, perp));

    let x1 = lin(&[(1, &a[0]), (1, &a[6]), (1, &a[1]), (-1, &a[2])]);
    let x2 = lin(&[(1, &a[4]), (-1, &a[5]), (1, &a[6])]);
    out.push(Check::new("4C q(x_1)", "0", format_rational(&q(&x1))));
    out.push(Check::new("4C q(x_2)", "0", format_rational(&q(&x2))));
    // the form on D(L_g) enters with a minus sign
    out.push(Check::new(
        "4C (x_1|x_2) under -q",
        "-1/4",
        format_rational(&(-bil(&x1, &x2))),
    ));
    let y = [
        lin(&[(1, &a[1]), (1, &a[2])]),
        a[3].clone(),
        lin(&[(1, &a[4]), (1, &a[5])]),
        lin(&[(1, &a[1]), (-1, &a[5]), (-1, &a[0]), (-2, &a[6])]),
    ];
    for (i, yi) in y.iter().enumerate() {
        out.push(Check::new(format!("4C q(y_{})", i + 1), "1/4", format_rational(&q(yi))));
    }
    let xs = [disc_coords(c, &x1)?, disc_coords(c, &x2)?];
    let h = space.subspace(&xs)?;
    st.push(Check::new("4C H", "4^2", group_symbol(&h.space.invariant_factors())));
    let grid = WGrid::new(fusion.n, &fusion.rho)?;
    st.push(Check::new(
        "4C (H, -q) isometric to the twisted grid",
        true,
        is_isomorphic(&h.space.negate(), &grid.space)?.is_some(),
    ));
    let perp = space.orthogonal_complement(&xs)?;
    let mut ys: Vec<Vec<u64>> = y.iter().map(|v| disc_coords(c, v)).collect::<Result<_>>()?;
    ys.push(disc_coords(c, &b[0])?);
    ys.push(disc_coords(c, &b[1])?);
    let spanned = space.subspace(&ys)?;
    let inside = ys.iter().all(|v| xs.iter().all(|x| space.b_num(v, x) == 0));
    st.push(Check::new("4C y_1..y_4, b_1, b_2 lie in H^perp", true, inside));
    let mut notes = Vec::new();
    if spanned.space.order() != perp.space.order() {
        notes.push(format!(
            "y_1..y_4, b_1, b_2 span a subgroup of order {} in H^perp of order {}",
            spanned.space.order(),
            perp.space.order()
        ));
    }
    st.push(Check::new(
        "4C (H^perp, -q) isometric to D(coinvariant)",
        true,
        is_isomorphic(&perp.space.negate(), &FiniteQuadraticSpace::from_lattice(coinvariant)?)?.is_some(),
    ));
    let min = min_nonzero_norm(&fixed.dual(), &rat(4, 1)).map(|x| format_rational(&x));
    out.push(Check::new("4C min norm of dual fixed lattice", "3/2", min.unwrap_or_default()));
    Ok(Spot4C {
        printed: out,
        structural: st,
        notes,
    })
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub data_dir: PathBuf,
    pub seed: u64,
    pub budget: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            data_dir: data_dir(),
            seed: 1,
            budget: 2000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub label: String,
    pub certificate: Option<ClassCertificate>,
    pub fusion: Option<Value>,
    pub lg: Option<Value>,
    pub isomorphic: bool,
    pub witness_digest: Option<String>,
    pub checks: Vec<Check>,
    /// Values printed for the class, compared exactly; they do not enter
    /// the verdict.
    pub spot_values: Vec<Check>,
    pub notes: Vec<String>,
    /// Wall-clock seconds per step; left out of the structured output.
    pub timings: Vec<(String, f64)>,
    pub error: Option<String>,
}

impl VerificationReport {
    fn new(label: &str) -> Self {
        VerificationReport {
            label: label.into(),
            certificate: None,
            fusion: None,
            lg: None,
            isomorphic: false,
            witness_digest: None,
            checks: Vec::new(),
            spot_values: Vec::new(),
            notes: Vec::new(),
            timings: Vec::new(),
            error: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.error.is_none() && self.isomorphic && all_pass(&self.checks)
    }

    pub fn spot_values_pass(&self) -> bool {
        all_pass(&self.spot_values)
    }

    pub fn total_seconds(&self) -> f64 {
        self.timings.iter().map(|(_, t)| t).sum()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "certificate": self.certificate.as_ref().map(ClassCertificate::to_json),
            "checks": self.checks,
            "class": self.label,
            "error": self.error,
            "fusion": self.fusion,
            "isomorphic": self.isomorphic,
            "lg": self.lg,
            "notes": self.notes,
            "spot_values": self.spot_values,
            "spot_values_pass": all_pass(&self.spot_values),
            "verdict": if self.passed() { "pass" } else { "fail" },
            "witness_digest": self.witness_digest,
        })
    }

    pub fn summary(&self) -> String {
        let mut s = format!(
            "{}: {} ({} checks, {} failed, {:.2}s)\n",
            self.label,
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks.len(),
            self.checks.iter().filter(|c| !c.pass).count(),
            self.total_seconds()
        );
        for c in &self.checks {
            let mark = if c.pass { "ok  " } else { "FAIL" };
            s += &format!("  {mark} {}: expected {}, computed {}\n", c.name, c.expected, c.computed);
        }
        for c in &self.spot_values {
            let mark = if c.pass { "ok  " } else { "DIFF" };
            s += &format!("  {mark} spot {}: printed {}, computed {}\n", c.name, c.expected, c.computed);
        }
        for n in &self.notes {
            s += &format!("  note: {n}\n");
        }
        if let Some(d) = &self.witness_digest {
            s += &format!("  witness sha256: {d}\n");
        }
        if let Some(e) = &self.error {
            s += &format!("  error: {e}\n");
        }
        for (step, t) in &self.timings {
            s += &format!("  time {step}: {t:.3}s\n");
        }
        s
    }
}

pub fn witness_digest(w: &IsomWitness) -> String {
    let text = serde_json::to_string(&json!({ "images": w.images })).expect("json");
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Expected shape of the fusion datum per class: case, grid order, t.
fn expected_fusion(label: &str) -> (FusionCase, u64, u64) {
    match label {
        "4C" => (FusionCase::One, 4, 0),
        "6G" => (FusionCase::TwoB, 12, 0),
        "6E" => (FusionCase::One, 6, 0),
        "8E" => (FusionCase::One, 8, 0),
        _ => (FusionCase::TwoB, 20, 0),
    }
}

fn expected_order(label: &str) -> u64 {
    match label {
        "4C" => 1 << 14,
        "6G" => 62208,
        "6E" => 46656,
        "8E" => 1 << 15,
        _ => 40000,
    }
}

/// Argument of a Gauss sum in turns, in `[0, 1)`.
fn gauss_turns((re, im): (f64, f64)) -> f64 {
    (im.atan2(re) / std::f64::consts::TAU).rem_euclid(1.0)
}

pub fn verify_class(label: &str, opts: &VerifyOptions) -> VerificationReport {
    let mut report = VerificationReport::new(label);
    if let Err(e) = run_pipeline(label, opts, &mut report) {
        report.error = Some(e.to_string());
    }
    report
}

fn timed<T>(report: &mut VerificationReport, step: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
    let start = Instant::now();
    let out = f();
    report.timings.push((step.into(), start.elapsed().as_secs_f64()));
    out
}

fn run_pipeline(label: &str, opts: &VerifyOptions, r: &mut VerificationReport) -> Result<()> {
    if !CLASS_LABELS.contains(&label) {
        return Err(Error::UnknownClass(label.into()));
    }
    let want = target(label)?;
    let g: Isometry = timed(r, "load", || match load_representative(&opts.data_dir, label) {
        Ok(g) => Ok(g),
        Err(Error::Io { .. }) => search_class(&want, opts.seed, opts.budget).map(|o| o.isometry),
        Err(e) => Err(e),
    })?;

    let cert = timed(r, "certify", || crate::leech::certificate(&g))?;
    r.checks.push(Check::new("frame shape", &want.frame_shape, &cert.frame_shape));
    r.checks.push(Check::new("rank of fixed lattice", want.fixed_rank, cert.fixed_rank));
    r.checks.push(Check::new(
        "D(fixed lattice)",
        group_symbol(&want.fixed_invariant_factors),
        group_symbol(&cert.fixed_invariant_factors),
    ));
    r.checks.push(Check::new("order of standard lift", want.lift_order, cert.lift_order));
    r.checks.push(Check::new("rho", format_rational(&want.rho), format_rational(&cert.rho)));
    r.certificate = Some(cert);
    certify(&g, &want)?;

    let (l, gc) = timed(r, "coinvariant", || g.coinvariant())?;
    r.checks.push(Check::new("coinvariant rank", 24 - want.fixed_rank, l.rank()));
    r.checks.push(Check::new("fixed-point-free on coinvariant", true, gc.is_fixed_point_free()));
    r.checks.push(Check::new(
        "trivial action on D(coinvariant)",
        true,
        gc.acts_trivially_on_discriminant(),
    ));
    let (det, index) = gc.det_one_minus()?;
    r.checks.push(Check::new("[L:(1-g)L] = |det(1-g)|", &det, &index));
    let d_coinv = FiniteQuadraticSpace::from_lattice(&l)?;
    r.checks.push(Check::new("|D(coinvariant)| = |det(1-g)|", &det, d_coinv.order()));
    let fixed = g.fixed_sublattice();
    let d_fixed = FiniteQuadraticSpace::from_lattice(&fixed)?;
    let glued = timed(r, "glue check", || is_isomorphic(&d_coinv, &d_fixed.negate()))?.is_some();
    r.checks.push(Check::new("D(coinvariant) isometric to (D(fixed), -q)", true, glued));
    let qd = timed(r, "quantum dimension", || gc.quantum_dimension())?;
    r.checks.push(Check::new("quantum dimension", "1", &qd));

    let fusion = timed(r, "fusion space", || fusion_space(&l, &gc))?;
    r.checks.extend(fusion_sanity(&fusion));
    let (case, n, t) = expected_fusion(label);
    r.checks.push(Check::new("fusion case", case, fusion.case));
    r.checks.push(Check::new("order of the twisted grid", n, fusion.n));
    r.checks.push(Check::new("t", t, fusion.t));
    r.fusion = Some(json!({
        "case": fusion.case.to_string(),
        "d": fusion.d,
        "group": group_symbol(&fusion.space.invariant_factors()),
        "h_norm": fusion.lift.h_norm.as_ref().map(format_rational),
        "kernel_size": fusion.kernel_size,
        "n": fusion.n,
        "order": fusion.space.order(),
        "p": fusion.p,
        "rho": format_rational(&fusion.rho),
        "space": space_to_json(&fusion.space),
        "t": fusion.t,
        "u_norm": fusion.lift.u_norm.as_ref().map(format_rational),
    }));

    let lg = timed(r, "build L_g", || build_lg_detailed(label))?;
    r.notes.extend(lg.notes.iter().cloned());
    let d_lg = FiniteQuadraticSpace::from_lattice(&lg.lattice)?;
    let lg_group = group_symbol(&d_lg.invariant_factors());
    r.checks.push(Check::new("D(L_g)", lg.expected, &lg_group));
    r.lg = Some(json!({
        "det": format_rational(&lg.lattice.det()),
        "group": lg_group,
        "listed": lg.listed,
        "name": lg.base.name(),
        "rank": lg.lattice.rank(),
    }));
    let expected = expected_order(label);
    r.checks.push(Check::new("|fusion space|", expected, fusion.space.order()));
    r.checks.push(Check::new("|D(coinvariant)| p^2", expected, d_coinv.order() * fusion.p * fusion.p));
    r.checks.push(Check::new("|D(L_g)|", expected, d_lg.order()));

    let target_space = d_lg.negate();
    if let Some(Value::Object(m)) = r.lg.as_mut() {
        // (D(L_g), -q), the space the fusion space is compared with
        m.insert("target_space".into(), space_to_json(&target_space));
    }
    let (ga, gb) = (fusion.space.gauss_sum(), target_space.gauss_sum());
    let (ta, tb) = (gauss_turns(ga), gauss_turns(gb));
    let gap = (ta - tb).rem_euclid(1.0).min((tb - ta).rem_euclid(1.0));
    r.checks.push(Check::with_verdict(
        "Gauss sum argument (turns, approximate)",
        format!("{tb:.11e}"),
        format!("{ta:.11e}"),
        gap < 1e-9,
    ));

    class_spot_checks(label, r, &lg, &fusion, &l, &gc, &fixed)?;

    if gap >= 1e-9 {
        // the exact search cannot succeed
        return Ok(());
    }
    let w = timed(r, "isomorphism", || is_isomorphic(&fusion.space, &target_space))?;
    match w {
        Some(w) => {
            r.checks.push(Check::new("witness verified", true, verify_witness(&fusion.space, &target_space, &w)));
            r.witness_digest = Some(witness_digest(&w));
            r.isomorphic = true;
        }
        None => r.isomorphic = false,
    }
    Ok(())
}

fn class_spot_checks(
    label: &str,
    r: &mut VerificationReport,
    lg: &LgConstruction,
    fusion: &FusionDatum,
    l: &Lattice,
    gc: &Isometry,
    fixed: &Lattice,
) -> Result<()> {
    match label {
        "4C" => {
            let spot = spot_checks_4c(lg, fusion, l, fixed)?;
            r.spot_values.extend(spot.printed);
            r.checks.extend(spot.structural);
            r.notes.extend(spot.notes);
            r.checks.push(Check::new(
                "4C D(coinvariant)",
                "2^2·4^4",
                group_symbol(&FiniteQuadraticSpace::from_lattice(l)?.invariant_factors()),
            ));
        }
        "6G" | "10F" => {
            let q_at = |i, j| {
                fusion
                    .label(i, j)
                    .map_or_else(String::new, |x| format_rational(&fusion.space.q(&x.coords)))
            };
            r.spot_values.push(Check::new(format!("{label} (h|h)"), "2", fusion.lift.h_norm.as_ref().map(format_rational).unwrap_or_default()));
            r.spot_values.push(Check::new(format!("{label} (u|u)"), "3/2", fusion.lift.u_norm.as_ref().map(format_rational).unwrap_or_default()));
            r.checks.push(Check::new(format!("{label} lift doubles"), "Some(true)", format!("{:?}", gc.lift_doubles_by_doubly_even()?)));
            if label == "6G" {
                r.spot_values.push(Check::new("6G q(I(W^{0,1}))", "3/4", q_at(0, 1)));
                r.spot_values.push(Check::new("6G q(I(W^{1,0}))", "3/4", q_at(1, 0)));
                r.spot_values.push(Check::new("6G q(I(W^{1,1}))", "1/12", q_at(1, 1)));
            }
            // another admissible u gives an isometric space
            let alt = timed(r, "alternative u", || fusion_space_with_u(l, gc, 1))?;
            let iso = timed(r, "alternative u isomorphism", || is_isomorphic(&alt.space, &fusion.space))?;
            r.checks.push(Check::new(
                format!("{label} alternative u gives an isometric space"),
                true,
                iso.is_some(),
            ));
        }
        "6E" => {
            r.checks.push(Check::new(
                "6E twisted grid",
                "2^2·3^2",
                group_symbol(&WGrid::new(fusion.n, &fusion.rho)?.space.invariant_factors()),
            ));
        }
        "8E" => {
            r.checks.push(Check::new(
                "8E D(fixed lattice)",
                "2·4·8^2",
                group_symbol(&FiniteQuadraticSpace::from_lattice(fixed)?.invariant_factors()),
            ));
        }
        _ => {}
    }
    Ok(())
}

/// Verifies every class in label order.
pub fn verify_all(opts: &VerifyOptions) -> Vec<VerificationReport> {
    CLASS_LABELS.iter().map(|l| verify_class(l, opts)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbols() {
        assert_eq!(group_symbol(&[2, 2, 4, 4, 4, 4, 4, 4]), "2^2·4^6");
        assert_eq!(group_symbol(&[2, 6, 6, 6, 12, 12]), "2^4·4^2·3^5");
        assert_eq!(group_symbol(&[2, 4, 8, 8, 8, 8]), "2·4·8^4");
        assert_eq!(group_symbol(&[]), "1");
    }

    #[test]
    fn lg_orders() {
        for (label, order) in [("6G", 62208u64), ("10F", 40000), ("8E", 1 << 15), ("4C", 1 << 14)] {
            let l = build_lg(label).unwrap();
            assert_eq!(FiniteQuadraticSpace::from_lattice(&l).unwrap().order(), order, "{label}");
        }
        assert!(matches!(build_lg("3A"), Err(Error::UnknownClass(_))));
    }
}
