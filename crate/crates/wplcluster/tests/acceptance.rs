use std::process::ExitCode;
use std::time::{Duration, Instant};

use wplcluster::verify::{audit, run_suite, AuditFamily, CaseResult, SuiteParams, SuiteReport};
use wplcluster::{CompatiblePair, IntMatrix, WeightSpec};

struct Outcome {
    passed: bool,
    detail: String,
}

fn matrix(rows: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect())
}

fn suite(name: &str, params: &SuiteParams) -> SuiteReport {
    run_suite(name, params).unwrap_or_else(|e| panic!("suite {name}: {e}"))
}

/// Pass iff every selected case passes and at least one is selected.
fn cases<'a>(label: &str, selected: impl Iterator<Item = &'a CaseResult>) -> Outcome {
    let selected: Vec<&CaseResult> = selected.collect();
    let failing: Vec<&&CaseResult> = selected.iter().filter(|c| !c.passed()).collect();
    let detail = match failing.first() {
        Some(c) => format!("{label}: {} of {} failed, first `{}` ({})", failing.len(), selected.len(), c.name, c.detail),
        None => format!("{label}: {} cases", selected.len()),
    };
    Outcome {
        passed: !selected.is_empty() && failing.is_empty(),
        detail,
    }
}

fn golden_matrices() -> Outcome {
    let p: WeightSpec = "1,1,4".parse().unwrap();
    let s = CompatiblePair::new(&p).unwrap().summary();
    let b = matrix(&[
        &[0, -2, 0, 0, -1],
        &[2, 0, 0, 0, 0],
        &[0, 0, 0, 1, 0],
        &[0, 0, -1, 0, 1],
        &[1, 0, 0, -1, 0],
    ]);
    let btilde = matrix(&[
        &[0, -2, 0, 0, -1, 0],
        &[2, 0, 0, 0, 0, 0],
        &[0, 0, 0, 1, 0, -1],
        &[0, 0, -1, 0, 1, 0],
        &[1, 0, 0, -1, 0, 0],
        &[0, 0, 1, 0, 0, 0],
    ]);
    let p1 = CompatiblePair::p1().summary();
    let checks = [
        ("B(1,1,4)", s.b == b),
        ("B̃(1,1,4)", s.btilde == btilde),
        ("Λ(P¹)", p1.lambda == matrix(&[&[0, -1], &[1, 0]])),
        ("d(P¹)", p1.d == 2),
    ];
    let bad: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    Outcome {
        passed: bad.is_empty(),
        detail: if bad.is_empty() {
            "B, B̃ for (1,1,4); Λ, d for P¹".into()
        } else {
            format!("mismatch in {bad:?}")
        },
    }
}

fn main() -> ExitCode {
    let defaults = SuiteParams::default();
    let mut closure: Option<SuiteReport> = None;
    let mut kronecker: Option<SuiteReport> = None;
    let mut results: Vec<(usize, &str, Outcome, Duration, u64)> = Vec::new();
    let mut run = |n: usize, name: &'static str, limit: u64, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let outcome = f();
        results.push((n, name, outcome, start.elapsed(), limit));
    };

    run(1, "matrix golden tests", 1, &mut golden_matrices);
    run(2, "sign and transpose identities", 5, &mut || {
        let r = suite("prop34", &defaults);
        cases("prop34", r.cases.iter())
    });
    run(3, "P¹ relations and bar variants", 60, &mut || {
        let params = SuiteParams {
            precision: Some(16),
            lmax: Some(5),
            q: None,
        };
        let mut r = suite("p1_relations", &params);
        r.cases.extend(suite("lemma54_prop511", &params).cases);
        cases("p1_relations + lemma54_prop511", r.cases.iter())
    });
    run(4, "multiplication identities", 10, &mut || {
        let r = suite("example33", &defaults);
        cases("example33", r.cases.iter())
    });
    run(5, "torsion algebra", 10, &mut || {
        let r = suite("torsion_lemmas", &defaults);
        cases("torsion_lemmas", r.cases.iter())
    });
    // Criteria 6 to 8 share one engine run.
    run(6, "mutation closure on P¹ lines", 60, &mut || {
        let r = closure.insert(suite("mutation_closure", &defaults));
        cases("lines", r.cases.iter().filter(|c| c.name.starts_with("lines/")))
    });
    run(7, "involutivity and bar-invariance", 120, &mut || {
        let r = closure.get_or_insert_with(|| suite("mutation_closure", &defaults));
        cases(
            "involution + bar",
            r.cases
                .iter()
                .filter(|c| c.name.starts_with("involution/") || c.name.starts_with("bar/")),
        )
    });
    run(8, "Grassmannian coefficients in Z[ν]", 120, &mut || {
        let r = closure.get_or_insert_with(|| suite("mutation_closure", &defaults));
        cases("polynomial", r.cases.iter().filter(|c| c.name.starts_with("polynomial/")))
    });
    run(9, "basis suites", 30, &mut || {
        let r = suite("bases", &defaults);
        cases("bases", r.cases.iter())
    });
    run(10, "Kronecker and P¹ exchange relations", 30, &mut || {
        let r = kronecker.insert(suite("kronecker_oracle", &defaults));
        cases("A(2,2) + κ", r.cases.iter().filter(|c| !c.name.starts_with("oracle:")))
    });
    run(11, "Kronecker brute-force oracle", 60, &mut || {
        let r = kronecker.get_or_insert_with(|| suite("kronecker_oracle", &defaults));
        cases("oracle", r.cases.iter().filter(|c| c.name.starts_with("oracle:")))
    });
    run(12, "exponent convention auditor", 60, &mut || match audit(AuditFamily::All) {
        Ok(r) => {
            let flag = |rule: &str, expect: bool| {
                r.rules
                    .iter()
                    .any(|c| c.family == AuditFamily::Exchange && c.rule.starts_with(rule) && c.passes == expect)
            };
            let flags = flag("printed", false) && flag("calibrated", true);
            Outcome {
                passed: r.unique && flags && r.passed,
                detail: format!(
                    "{} instances, fits {:?}, printed −1 fails and −d passes: {flags}",
                    r.instances.len(),
                    r.fits
                ),
            }
        }
        Err(e) => Outcome {
            passed: false,
            detail: format!("error: {e}"),
        },
    });

    let mut all = true;
    for (n, name, outcome, elapsed, limit) in &results {
        all &= outcome.passed;
        let over = if elapsed.as_secs_f64() > *limit as f64 {
            format!(" (over the {limit} s budget)")
        } else {
            String::new()
        };
        println!(
            "criterion {n:>2} {}: {name} [{:.2} s{over}] {}",
            if outcome.passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            outcome.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
