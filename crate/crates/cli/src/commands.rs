use std::fmt::Write as _;
use std::path::Path;

use orbifold_fusion::fqs::{is_isomorphic, space_from_json, FiniteQuadraticSpace};
use orbifold_fusion::fusion::{fusion_sanity, fusion_space_with_u};
use orbifold_fusion::isometry::Isometry;
use orbifold_fusion::lattice::{count_by_norm, lattice_from_json, Lattice};
use orbifold_fusion::leech::{
    builtin_lattice, data_dir, load_representative, representative_json, save_representative, search_class, target,
    CLASS_LABELS,
};
use orbifold_fusion::linalg::{format_rational, parse_rational};
use orbifold_fusion::verify::{group_symbol, verify_class, VerificationReport, VerifyOptions};
use orbifold_fusion::Error;
use serde_json::{json, Value};

use crate::{Cli, Command};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Negative,
    Usage,
    Internal,
}

pub struct Outcome {
    pub status: Status,
    pub json: Value,
    pub text: String,
}

#[derive(Debug)]
pub struct Failure {
    pub status: Status,
    pub message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        status: Status::Usage,
        message: message.into(),
    }
}

// bad input is the caller's problem, anything later is ours
fn input(e: Error) -> Failure {
    usage(e.to_string())
}

fn internal(e: Error) -> Failure {
    Failure {
        status: Status::Internal,
        message: e.to_string(),
    }
}

type Run = std::result::Result<Outcome, Failure>;

pub fn run(cli: &Cli) -> Run {
    match &cli.command {
        Command::Lattice { input, max_norm } => cmd_lattice(input, max_norm),
        Command::Isometry { input } => cmd_isometry(input),
        Command::Fusion { input, u } => cmd_fusion(input, *u),
        Command::Search {
            label,
            seed,
            budget,
            save,
        } => cmd_search(label, *seed, *budget, save.as_deref()),
        Command::Verify {
            labels,
            seed,
            budget,
            jobs,
        } => cmd_verify(labels, *seed, *budget, *jobs, cli.verbose),
        Command::FqsIsom { first, second } => cmd_fqs_isom(first, second),
    }
}

/// Reads `path` or `path#/json/pointer`.
fn read_json(arg: &str) -> std::result::Result<Value, Failure> {
    let (path, pointer) = match arg.split_once('#') {
        Some((p, ptr)) => (p, Some(ptr)),
        None => (arg, None),
    };
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}")))?;
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| usage(format!("parse error at {path}:{}:{}: {e}", e.line(), e.column())))?;
    match pointer {
        None => Ok(v),
        Some(ptr) => v
            .pointer(ptr)
            .cloned()
            .ok_or_else(|| usage(format!("{path} has nothing at {ptr}"))),
    }
}

fn load_lattice(arg: &str) -> std::result::Result<Lattice, Failure> {
    if Path::new(arg.split('#').next().unwrap_or(arg)).is_file() {
        return lattice_from_json(&read_json(arg)?).map_err(input);
    }
    builtin_lattice(arg).map_err(|_| usage(format!("{arg:?} is neither a file nor a known lattice")))
}

fn load_isometry(arg: &str) -> std::result::Result<Isometry, Failure> {
    if Path::new(arg.split('#').next().unwrap_or(arg)).is_file() {
        return Isometry::from_json(&read_json(arg)?, builtin_lattice)
            .map(|(g, _)| g)
            .map_err(input);
    }
    if CLASS_LABELS.contains(&arg) {
        return load_representative(&data_dir(), arg).map_err(internal);
    }
    Err(usage(format!("{arg:?} is neither a file nor a class label")))
}

fn cmd_lattice(arg: &str, max_norm: &str) -> Run {
    let l = load_lattice(arg)?;
    let bound = parse_rational(max_norm).ok_or_else(|| usage(format!("bad --max-norm {max_norm:?}")))?;
    let integral = l.is_integral();
    let factors: Option<Vec<String>> = if integral {
        Some(
            l.discriminant_group()
                .map_err(internal)?
                .orders
                .iter()
                .map(ToString::to_string)
                .collect(),
        )
    } else {
        None
    };
    let counts = count_by_norm(&l, &vec![Default::default(); l.rank()], &bound);
    let min = counts.keys().find(|k| **k != Default::default()).map(format_rational);
    let counts_json: Vec<Value> = counts
        .iter()
        .map(|(k, v)| json!({ "count": v, "norm": format_rational(k) }))
        .collect();
    let json = json!({
        "det": format_rational(&l.det()),
        "discriminant_invariant_factors": factors,
        "even": l.is_even(),
        "integral": integral,
        "max_norm": format_rational(&bound),
        "min_norm": min,
        "name": l.name(),
        "norm_counts": counts_json,
        "rank": l.rank(),
    });
    let mut text = String::new();
    let _ = writeln!(text, "rank {}", l.rank());
    let _ = writeln!(text, "det {}", format_rational(&l.det()));
    let _ = writeln!(text, "even {}", l.is_even());
    match &factors {
        Some(f) if f.is_empty() => text += "discriminant trivial\n",
        Some(f) => {
            let _ = writeln!(text, "discriminant {}", f.iter().map(|x| format!("Z/{x}")).collect::<Vec<_>>().join(" + "));
        }
        None => text += "discriminant undefined (not integral)\n",
    }
    match &min {
        Some(m) => {
            let _ = writeln!(text, "min norm {m}");
        }
        None => {
            let _ = writeln!(text, "min norm > {}", format_rational(&bound));
        }
    }
    for (k, v) in &counts {
        let _ = writeln!(text, "  norm {}: {v}", format_rational(k));
    }
    Ok(Outcome {
        status: Status::Pass,
        json,
        text,
    })
}

fn num_one() -> num_rational::BigRational {
    num_rational::BigRational::from_integer(1.into())
}

fn cmd_isometry(arg: &str) -> Run {
    let g = load_isometry(arg)?;
    let shape = g.frame_shape().map_err(internal)?;
    let rho = g.rho_t().map_err(internal)?;
    // on a unimodular lattice the parity test decides; otherwise the lift
    // needs g^{p/2} to act trivially on the discriminant group
    let lift_order = if g.lattice().det() == num_one() {
        if g.lift_doubles_by_parity() == Some(true) {
            2 * g.order()
        } else {
            g.order()
        }
    } else {
        g.standard_lift().map_err(internal)?.n
    };
    let fixed_rank = g.fixed_sublattice().rank();
    let (l, gc) = g.coinvariant().map_err(internal)?;
    // quantum dimension of the coinvariant restriction; rank 0 means g = 1
    let qdim = if l.rank() == 0 {
        "1".to_string()
    } else {
        gc.quantum_dimension().map_err(internal)?.to_string()
    };
    let json = json!({
        "acts_trivially_on_discriminant": g.acts_trivially_on_discriminant(),
        "coinvariant_rank": l.rank(),
        "fixed_rank": fixed_rank,
        "frame_shape": shape.to_string(),
        "lift_order": lift_order,
        "order": g.order(),
        "quantum_dimension": qdim,
        "rank": g.rank(),
        "rho": format_rational(&rho),
    });
    let text = format!(
        "order {}\nframe shape {}\nrho {}\nlift order {}\nfixed rank {}\ntrivial on discriminant {}\nquantum dimension {}\n",
        g.order(),
        shape,
        format_rational(&rho),
        lift_order,
        fixed_rank,
        g.acts_trivially_on_discriminant(),
        qdim
    );
    Ok(Outcome {
        status: Status::Pass,
        json,
        text,
    })
}

fn cmd_fusion(arg: &str, u: usize) -> Run {
    let g = load_isometry(arg)?;
    let (l, gc) = g.coinvariant().map_err(internal)?;
    let d = fusion_space_with_u(&l, &gc, u).map_err(|e| match e {
        Error::FixedPointsPresent | Error::DiscriminantActionNontrivial => Failure {
            status: Status::Negative,
            message: e.to_string(),
        },
        other => internal(other),
    })?;
    let checks = fusion_sanity(&d);
    let ok = checks.iter().all(|c| c.pass);
    let mut json = d.to_json();
    json["checks"] = json!(checks);
    json["group"] = json!(group_symbol(&d.space.invariant_factors()));
    let mut text = format!(
        "case {}\np {} n {} t {} d {}\nrho {}\norder {} ({})\nkernel size {}\n",
        d.case,
        d.p,
        d.n,
        d.t,
        d.d,
        format_rational(&d.rho),
        d.space.order(),
        group_symbol(&d.space.invariant_factors()),
        d.kernel_size
    );
    if let Some(h) = &d.lift.h_norm {
        let _ = writeln!(text, "(h|h) {}", format_rational(h));
    }
    if let Some(u) = &d.lift.u_norm {
        let _ = writeln!(text, "(u|u) {}", format_rational(u));
    }
    for c in &checks {
        let _ = writeln!(text, "{} {}: {}", if c.pass { "ok  " } else { "FAIL" }, c.name, c.computed);
    }
    Ok(Outcome {
        status: if ok { Status::Pass } else { Status::Internal },
        json,
        text,
    })
}

fn cmd_search(label: &str, seed: u64, budget: u64, save: Option<&Path>) -> Run {
    let want = target(label).map_err(input)?;
    let outcome = match search_class(&want, seed, budget) {
        Ok(o) => o,
        Err(Error::BudgetExhausted(n)) => {
            return Err(Failure {
                status: Status::Negative,
                message: format!("no representative of {label} within {n} candidates"),
            })
        }
        Err(e) => return Err(internal(e)),
    };
    let json = representative_json(label, &outcome);
    let mut text = format!(
        "{label}: found after {} candidates (seed {seed})\nframe shape {}\n",
        outcome.candidates, outcome.certificate.frame_shape
    );
    if let Some(dir) = save {
        let path = save_representative(dir, label, &outcome).map_err(internal)?;
        let _ = writeln!(text, "saved {}", path.display());
    }
    Ok(Outcome {
        status: Status::Pass,
        json,
        text,
    })
}

fn cmd_verify(labels: &[String], seed: u64, budget: u64, jobs: usize, verbose: bool) -> Run {
    let mut wanted: Vec<String> = Vec::new();
    for l in labels {
        if l == "all" {
            wanted.extend(CLASS_LABELS.iter().map(|s| s.to_string()));
        } else if CLASS_LABELS.contains(&l.as_str()) {
            wanted.push(l.clone());
        } else {
            return Err(usage(format!(
                "unknown class {l:?}; expected one of {} or all",
                CLASS_LABELS.join(", ")
            )));
        }
    }
    let opts = VerifyOptions {
        data_dir: data_dir(),
        seed,
        budget,
    };
    let reports = run_parallel(&wanted, jobs.max(1), &opts);
    let status = if reports.iter().any(|r| r.error.is_some()) {
        Status::Internal
    } else if reports.iter().all(VerificationReport::passed) {
        Status::Pass
    } else {
        Status::Negative
    };
    let json = json!({
        "classes": reports.iter().map(VerificationReport::to_json).collect::<Vec<_>>(),
        "verdict": if status == Status::Pass { "pass" } else { "fail" },
    });
    let mut text = String::new();
    for r in &reports {
        if verbose {
            text += &r.summary();
        } else {
            let failed: Vec<&str> = r.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
            let _ = writeln!(
                text,
                "{}: {}{}",
                r.label,
                if r.passed() { "PASS" } else { "FAIL" },
                if failed.is_empty() { String::new() } else { format!(" ({})", failed.join("; ")) }
            );
            for c in r.spot_values.iter().filter(|c| !c.pass) {
                let _ = writeln!(text, "  spot value differs: {}: printed {}, computed {}", c.name, c.expected, c.computed);
            }
            for n in &r.notes {
                let _ = writeln!(text, "  note: {n}");
            }
            if let Some(e) = &r.error {
                let _ = writeln!(text, "  error: {e}");
            }
        }
    }
    Ok(Outcome { status, json, text })
}

/// Reports come back in the order of `labels` whatever `jobs` is.
fn run_parallel(labels: &[String], jobs: usize, opts: &VerifyOptions) -> Vec<VerificationReport> {
    let mut out: Vec<Option<VerificationReport>> = vec![None; labels.len()];
    for (chunk_labels, chunk_out) in labels.chunks(jobs).zip(out.chunks_mut(jobs)) {
        std::thread::scope(|s| {
            let handles: Vec<_> = chunk_labels
                .iter()
                .map(|l| s.spawn(move || verify_class(l, opts)))
                .collect();
            for (slot, h) in chunk_out.iter_mut().zip(handles) {
                *slot = Some(h.join().expect("verification thread panicked"));
            }
        });
    }
    out.into_iter().map(|r| r.expect("filled")).collect()
}

fn load_space(arg: &str) -> std::result::Result<FiniteQuadraticSpace, Failure> {
    space_from_json(&read_json(arg)?).map_err(input)
}

fn cmd_fqs_isom(first: &str, second: &str) -> Run {
    let a = load_space(first)?;
    let b = load_space(second)?;
    let w = is_isomorphic(&a, &b).map_err(internal)?;
    let json = json!({
        "isomorphic": w.is_some(),
        "witness": w.as_ref().map(|w| json!({ "images": w.images })),
    });
    let text = match &w {
        Some(w) => format!("isomorphic\nimages of generators: {:?}\n", w.images),
        None => "not isomorphic\n".to_string(),
    };
    Ok(Outcome {
        status: if w.is_some() { Status::Pass } else { Status::Negative },
        json,
        text,
    })
}
