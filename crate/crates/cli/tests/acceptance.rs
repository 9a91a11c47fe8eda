//! Acceptance gate: one line per criterion, exact equality throughout.
//! Exits nonzero if any criterion fails.

use std::process::Command;
use std::time::Instant;

use courant_core::courant::trial_rng;
use courant_core::courant::{axiom_suite, identity_suite, stability_suite, CheckReport, CourantStructure, SuiteConfig};
use courant_core::extension::{
    axiom3_case_values, consistency_suite, foliation_checks, oracle_bigtangent_compare, partial0_image_suite,
    theorem_cases, well_definedness_suite, ExtAlgebroid,
};
use courant_core::models::{big_tangent, q_algebroid, q_bracket_dprimeprime, transverse_e, QSection};
use courant_core::{Chart, PolyBounds, Rational, Result, Splitting};

const SEED: u64 = 2024;

fn cfg(trials: usize, seed: u64) -> SuiteConfig {
    SuiteConfig {
        trials,
        seed,
        bounds: PolyBounds::default(),
    }
}

fn chart(p: usize, q: usize) -> Chart {
    Chart::new(p, q).expect("valid chart")
}

fn random_splitting(p: usize, q: usize, seed: u64) -> Splitting {
    Splitting::random_seeded(chart(p, q), &PolyBounds::default().with_degree(1), seed)
}

fn a0(s: Splitting) -> ExtAlgebroid<Rational> {
    ExtAlgebroid::new(s).expect("A0 builds")
}

/// Outcome of one criterion: overall pass and a short detail string.
struct Verdict {
    pass: bool,
    detail: String,
}

fn tally(groups: &[(&str, Result<Vec<CheckReport>>)]) -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for (label, reports) in groups {
        match reports {
            Ok(rs) => {
                let ok = rs.iter().filter(|r| r.pass).count();
                let first_bad = rs.iter().find(|r| !r.pass);
                pass &= !rs.is_empty() && first_bad.is_none();
                parts.push(format!("{label} {ok}/{}", rs.len()));
                if let Some(r) = first_bad {
                    parts.push(format!("first failure {} on {:?}: {:?}", r.check, r.inputs, r.residual));
                }
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{label} error: {e}"));
            }
        }
    }
    Verdict {
        pass,
        detail: parts.join(", "),
    }
}

fn stability(model: &dyn CourantStructure<Rational>, trials: usize, seed: u64) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for r in stability_suite(model, &cfg(trials, seed))? {
        out.push(r.multiplied.clone());
        out.push(CheckReport::boolean(
            model.name(),
            "premises",
            vec![],
            r.base.pass && r.prerequisite.as_ref().is_none_or(|p| p.pass),
            "base triple or cyclic pairing failed",
        ));
    }
    Ok(out)
}

fn criterion_1() -> Verdict {
    tally(&[
        (
            "(3,0)",
            axiom_suite(&big_tangent::<Rational>(chart(3, 0)), &cfg(200, SEED)),
        ),
        (
            "(2,1)",
            axiom_suite(&big_tangent::<Rational>(chart(2, 1)), &cfg(200, SEED + 1)),
        ),
    ])
}

fn q_forms_agree(s: &Splitting, trials: usize) -> Result<Vec<CheckReport>> {
    let m = q_algebroid(s.clone());
    (0..trials)
        .map(|i| {
            let rng = &mut trial_rng(SEED, "acceptance/q_forms", i);
            let a = QSection::from_section(&m.random_section(&PolyBounds::default(), rng));
            let b = QSection::from_section(&m.random_section(&PolyBounds::default(), rng));
            let ok = q_bracket_dprimeprime(s, &a, &b)? == m.bracket_typed(&a, &b)?;
            Ok(CheckReport::boolean(
                "Q",
                "bracket_forms_agree",
                vec![],
                ok,
                "forms differ",
            ))
        })
        .collect()
}

fn criterion_2() -> Verdict {
    let s = random_splitting(2, 2, 42);
    if s.is_flat() {
        return Verdict {
            pass: false,
            detail: "random splitting came out flat".into(),
        };
    }
    tally(&[
        ("axioms", axiom_suite(&q_algebroid(s.clone()), &cfg(100, SEED + 2))),
        ("forms", q_forms_agree(&s, 100)),
    ])
}

fn criterion_3() -> Verdict {
    let m = transverse_e(random_splitting(2, 2, 43));
    tally(&[("axioms", axiom_suite(&m, &cfg(100, SEED + 3)))])
}

fn criterion_4() -> Verdict {
    let flat = a0(Splitting::flat(chart(2, 2)));
    let random = a0(random_splitting(2, 2, 42));
    tally(&[
        ("flat", theorem_cases(&flat, &cfg(100, SEED + 4))),
        ("random", theorem_cases(&random, &cfg(100, SEED + 5))),
    ])
}

fn criterion_5() -> Verdict {
    let a = a0(random_splitting(2, 2, 44));
    tally(&[("pairs", well_definedness_suite(&a, &cfg(100, SEED + 6)))])
}

fn criterion_6() -> Verdict {
    let s = random_splitting(2, 2, 45);
    let c = cfg(50, SEED + 7);
    tally(&[
        ("bigtangent", identity_suite(&big_tangent::<Rational>(chart(2, 2)), &c)),
        ("Q", identity_suite(&q_algebroid(s.clone()), &c)),
        ("E", identity_suite(&transverse_e(s.clone()), &c)),
        ("A0", identity_suite(&a0(s), &c)),
    ])
}

fn criterion_7() -> Verdict {
    let s = random_splitting(2, 2, 46);
    tally(&[
        (
            "bigtangent",
            stability(&big_tangent::<Rational>(chart(2, 2)), 50, SEED + 8),
        ),
        ("Q", stability(&q_algebroid(s.clone()), 50, SEED + 8)),
        ("E", stability(&transverse_e(s.clone()), 50, SEED + 8)),
        ("A0", stability(&a0(s), 50, SEED + 8)),
    ])
}

fn criterion_8() -> Verdict {
    let c = cfg(50, SEED + 9);
    tally(&[
        ("flat", partial0_image_suite(&a0(Splitting::flat(chart(2, 2))), &c)),
        ("random", partial0_image_suite(&a0(random_splitting(2, 2, 47)), &c)),
    ])
}

fn criterion_9() -> Verdict {
    let a = a0(random_splitting(2, 2, 48));
    tally(&[("instances", consistency_suite(&a, &cfg(50, SEED + 10)))])
}

fn criterion_10() -> Verdict {
    let c = cfg(100, SEED + 11);
    tally(&[
        ("flat", oracle_bigtangent_compare(&a0(Splitting::flat(chart(2, 2))), &c)),
        ("random", oracle_bigtangent_compare(&a0(random_splitting(2, 2, 49)), &c)),
    ])
}

fn criterion_11() -> Verdict {
    let c = cfg(50, SEED + 12);
    tally(&[
        ("flat", foliation_checks(&a0(Splitting::flat(chart(2, 2))), &c)),
        ("random", foliation_checks(&a0(random_splitting(2, 2, 50)), &c)),
    ])
}

fn criterion_12() -> Verdict {
    let c = cfg(25, SEED + 13);
    tally(&[
        ("flat", axiom3_case_values(&a0(Splitting::flat(chart(2, 2))), &c)),
        ("random", axiom3_case_values(&a0(random_splitting(2, 2, 51)), &c)),
    ])
}

fn criterion_13() -> Verdict {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_courant"))
            .args([
                "verify",
                "theorem",
                "--p",
                "2",
                "--q",
                "2",
                "--splitting",
                "random:1:42",
            ])
            .args(["--trials", "2", "--seed", "13", "--format", "json"])
            .output()
    };
    match (run(), run()) {
        (Ok(a), Ok(b)) => {
            let same = a.stdout == b.stdout && !a.stdout.is_empty();
            let exit_ok = a.status.success() && b.status.success();
            Verdict {
                pass: same && exit_ok,
                detail: format!(
                    "{} bytes, identical {same}, exit codes {:?} {:?}",
                    a.stdout.len(),
                    a.status.code(),
                    b.status.code()
                ),
            }
        }
        (Err(e), _) | (_, Err(e)) => Verdict {
            pass: false,
            detail: format!("could not run the binary: {e}"),
        },
    }
}

fn main() {
    type Criterion = (&'static str, fn() -> Verdict);
    let criteria: [Criterion; 13] = [
        ("big tangent axioms", criterion_1),
        ("leafwise algebroid axioms and bracket forms", criterion_2),
        ("transverse algebroid axioms", criterion_3),
        ("extension axioms by case", criterion_4),
        ("correction has no transverse part", criterion_5),
        ("derived identities in every model", criterion_6),
        ("function-stability lemmas", criterion_7),
        ("image of the extended partial", criterion_8),
        ("generator and Leibniz brackets agree", criterion_9),
        ("big tangent oracle", criterion_10),
        ("foliation conditions", criterion_11),
        ("axiom 3 case values", criterion_12),
        ("deterministic reports", criterion_13),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run();
        failed += usize::from(!v.pass);
        println!(
            "criterion {:>2} {} {name} [{:.1}s] {}",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            v.detail
        );
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
