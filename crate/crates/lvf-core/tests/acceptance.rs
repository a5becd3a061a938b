//! Acceptance gate: eleven criteria, one test per criterion, each
//! printing a `criterion-NN …: PASS/FAIL` line (run with `--nocapture`
//! to see the lines for passing criteria too). The tests assert the
//! stated tolerances directly — a criterion that the implementation
//! cannot meet fails here rather than being weakened.

use std::time::Instant;

use lvf_core::report::{CheckResult, Report};
use lvf_core::suites::{run_suite, suite_names, SuiteConfig};

fn run(suite: &str) -> Report {
    run_suite(&SuiteConfig::default_for(suite)).expect("suite runs")
}

fn check<'r>(report: &'r Report, name: &str) -> &'r CheckResult {
    report
        .find(name)
        .unwrap_or_else(|| panic!("check `{name}` missing from suite {}", report.suite))
}

fn named<'r>(report: &'r Report, fragment: &str) -> Vec<&'r CheckResult> {
    report.checks.iter().filter(|c| c.name.contains(fragment)).collect()
}

/// Prints the criterion line, then enforces it.
fn conclude(label: &str, ok: bool, detail: &str) {
    println!("{label}: {} — {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{label}: {detail}");
}

#[test]
fn criterion_01_commutation_identities() {
    let mut cfg = SuiteConfig::default_for("js-identities");
    cfg.window = 12;
    cfg.instances = 100;
    let start = Instant::now();
    let report = run_suite(&cfg).expect("suite runs");
    let elapsed = start.elapsed();

    let mut ok = report.all_passed();
    for family in ["comm-dd-", "comm-del-d-", "comm-del-del-", "comm-d-delbar-"] {
        ok &= named(&report, family).len() == 100;
    }
    ok &= report.checks.iter().any(|c| {
        c.window.as_deref().is_some_and(|w| w.contains("12"))
    });
    ok &= elapsed.as_secs_f64() < 10.0;
    conclude(
        "criterion-01 commutation-identities",
        ok,
        &format!(
            "4 identities x 100 banded instances, windows up to 12, exact, in {:.2}s",
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_02_sine_pairing_oracles() {
    let report = run("sine-examples");
    let triple = check(&report, "sine-triple-vs-quadrature");
    let err = triple.max_abs_error.unwrap_or(f64::INFINITY);
    let fixed = check(&report, "sine-operator-closed-form-fixed");
    let random = check(&report, "sine-operator-closed-form-random");
    let ok = triple.status.is_pass()
        && err <= 1e-10
        && fixed.status.is_pass()
        && random.status.is_pass();
    conclude(
        "criterion-02 sine-pairing-oracles",
        ok,
        &format!(
            "1000 triple products within 1e-10 of quadrature (max {err:.3e}); operator matrix matches the closed form exactly"
        ),
    );
}

#[test]
fn criterion_03_quadratic_field_matrix_and_flow() {
    let report = run("sine-examples");
    let names = [
        "x2dx-closed-form",
        "x2dx-vs-quadrature",
        "x2dx-antisymmetric-shift",
        "x2dx-flow-window-8-tolerance",
        "x2dx-flow-error-monotone",
    ];
    let mut failed = Vec::new();
    for name in names {
        let c = check(&report, name);
        let detail = match (c.max_abs_error, &c.witness) {
            (Some(e), _) => format!("max error {e:.4e}"),
            (None, Some(w)) => w.clone(),
            _ => String::from("exact"),
        };
        println!(
            "criterion-03 {name}: {} — {detail}",
            if c.status.is_pass() { "PASS" } else { "FAIL" }
        );
        if !c.status.is_pass() {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "criterion-03 sub-checks failed: {failed:?}");
}

#[test]
fn criterion_04_heisenberg_virasoro_realization() {
    let report = run("heisenberg-virasoro");
    let count = named(&report, "realization-").len();
    conclude(
        "criterion-04 heisenberg-virasoro-realization",
        report.all_passed() && count > 0,
        &format!("{count} bracket families exact on the truncated window"),
    );
}

#[test]
fn criterion_05_schrodinger_virasoro_family() {
    let report = run("schrodinger-virasoro");
    let mut ok = report.all_passed();
    for tag in ["s0-rho0", "s0-rho1", "s12-rho12", "s12-rho13"] {
        ok &= !named(&report, tag).is_empty();
    }
    ok &= check(&report, "sv-zero-shift-matches-heisenberg-virasoro").status.is_pass();
    conclude(
        "criterion-05 schrodinger-virasoro-family",
        ok,
        "four (s, rho) members exact; the zero-shift member reproduces the Heisenberg–Virasoro structure constants",
    );
}

#[test]
fn criterion_06_invariant_form_and_cocycle() {
    let report = run("killing-cocycle");
    let mut ok = report.all_passed();
    for name in [
        "sl2-form-frozen-values",
        "sl2-cocycle-table-frozen",
        "sl2-form-proportional-to-killing",
    ] {
        ok &= check(&report, name).status.is_pass();
    }
    let solvable = named(&report, "solvable4-").len();
    ok &= solvable >= 6;
    conclude(
        "criterion-06 invariant-form-and-cocycle",
        ok,
        &format!(
            "form and cocycle identities exact on sl2 and a random solvable algebra ({solvable} solvable checks); sl2 form proportional to the Killing form with one constant"
        ),
    );
}

#[test]
fn criterion_07_substitution_dynamics() {
    let report = run("dynamics");
    let mut ok = true;
    for i in 0..20 {
        let iterates = named(&report, "dynamics-iterate-pow")
            .into_iter()
            .filter(|c| c.name.ends_with(&format!("-m{i:02}")))
            .collect::<Vec<_>>();
        ok &= !iterates.is_empty() && iterates.iter().all(|c| c.status.is_pass());
        ok &= check(&report, &format!("n-point-motion-i{i:02}")).status.is_pass();
    }
    conclude(
        "criterion-07 substitution-dynamics",
        ok,
        "20 random maps iterate exactly; 20 n-point motions with up to four derivation factors exact",
    );
}

#[test]
fn criterion_08_isometry_relations_and_homotopes() {
    let mut cfg = SuiteConfig::default_for("cuntz-identities");
    cfg.instances = 100;
    let relations = run_suite(&cfg).expect("suite runs");
    let mut ok = relations.all_passed();
    for family in ["cuntz-dd-", "cuntz-del-d-", "cuntz-d-delbar-", "cuntz-del-delbar-"] {
        ok &= named(&relations, family).len() == 100;
    }

    let homotope = run("homotope");
    ok &= homotope.all_passed();
    for n in [2, 3] {
        ok &= named(&homotope, &format!("n{n}-r09")).len() >= 2;
        ok &= !named(&homotope, &format!("n{n}-invertible")).is_empty();
        ok &= check(&homotope, &format!("homotope-zero-weight-kernel-n{n}")).status.is_pass();
        ok &= check(&homotope, &format!("homotope-zero-weight-detected-n{n}")).status.is_pass();
    }
    ok &= check(&homotope, "homotope-rank-one-weight-kernel").status.is_pass();
    conclude(
        "criterion-08 isometry-relations-and-homotopes",
        ok,
        "4 identities x 100 instances exact; homotope antihomomorphism on 2x2/3x3 with 10 random weights each, injectivity for invertible weights, nontrivial kernel at weight zero",
    );
}

#[test]
fn criterion_09_filter_banks() {
    let report = run("wavelet");
    let mut ok = report.all_passed();
    for n in [2, 3, 4] {
        ok &= !named(&report, &format!("qmf-filter-n{n}")).is_empty();
        ok &= check(&report, &format!("wavelet-isometry-relations-n{n}")).status.is_pass();
        ok &= check(&report, &format!("wavelet-completeness-n{n}")).status.is_pass();
    }
    for i in 0..50 {
        ok &= check(&report, &format!("wavelet-d-two-routes-i{i:02}")).status.is_pass();
    }
    ok &= check(&report, "wavelet-broken-filter-detected").status.is_pass();
    conclude(
        "criterion-09 filter-banks",
        ok,
        "QMF identities exact for 2/3/4 branches; isometry relations on monomials to degree 30; 50 random pairings agree along both routes",
    );
}

#[test]
fn criterion_10_cylindrical_derivatives() {
    let report = run("dynamics");
    let mut ok = true;
    let mut worst = 0.0f64;
    for i in 0..50 {
        let c = check(&report, &format!("cylindrical-vs-flow-i{i:02}"));
        let err = c.max_abs_error.unwrap_or(f64::INFINITY);
        ok &= c.status.is_pass() && err <= 1e-5;
        worst = worst.max(err);
    }
    conclude(
        "criterion-10 cylindrical-derivatives",
        ok,
        &format!("50 smooth cases, relative error vs flow derivative at most 1e-5 (worst {worst:.3e})"),
    );
}

#[test]
fn criterion_11_deterministic_reports() {
    let mut mismatched = Vec::new();
    for suite in suite_names() {
        let cfg = SuiteConfig::default_for(suite);
        let first = run_suite(&cfg).expect("suite runs").to_json();
        let second = run_suite(&cfg).expect("suite runs").to_json();
        if first != second {
            mismatched.push(*suite);
        }
    }
    conclude(
        "criterion-11 deterministic-reports",
        mismatched.is_empty(),
        &format!(
            "two consecutive runs of all {} suites byte-identical{}",
            suite_names().len(),
            if mismatched.is_empty() {
                String::new()
            } else {
                format!("; mismatched: {mismatched:?}")
            }
        ),
    );
}
