//! Acceptance suite: every criterion from the verification matrix, each as
//! one test printing a pass/fail line with its runtime. Run with
//! `cargo test -p waldenfels-cli --test acceptance -- --nocapture` to see
//! the lines as they complete.

use std::time::Instant;

use waldenfels::report::VerificationReport;
use waldenfels_cli::suite;

fn run(
    number: u32,
    name: &str,
    cap_seconds: f64,
    f: impl FnOnce() -> waldenfels::Result<Vec<VerificationReport>>,
) {
    let t0 = Instant::now();
    let reports = f().unwrap_or_else(|e| panic!("criterion {number} ({name}) errored: {e}"));
    let elapsed = t0.elapsed().as_secs_f64();
    let failing: Vec<&VerificationReport> = reports.iter().filter(|r| !r.passing()).collect();
    let verdict = if failing.is_empty() { "PASS" } else { "FAIL" };
    println!(
        "ACCEPTANCE {number:>2} {name:<28} {verdict} ({} checks, {elapsed:.1}s, cap {cap_seconds}s)",
        reports.len()
    );
    assert!(
        failing.is_empty(),
        "criterion {number} ({name}): {} failing checks, first: {:?}",
        failing.len(),
        failing.first()
    );
    assert!(
        elapsed <= cap_seconds,
        "criterion {number} ({name}) took {elapsed:.1}s, cap {cap_seconds}s"
    );
}

#[test]
fn criterion_01_eigenpair_reference() {
    run(1, "eigenpair reference", 5.0, || {
        suite::criterion_1_eigen(None)
    });
}

#[test]
fn criterion_02_gauge_closed_form() {
    run(2, "gauge closed form", 60.0, || {
        suite::criterion_2_gauge(None)
    });
}

#[test]
fn criterion_03_feynman_kac_consistency() {
    run(3, "Feynman-Kac consistency", 120.0, || {
        suite::criterion_3_feynman_kac(None)
    });
}

#[test]
fn criterion_04_discrete_weak_maximum() {
    run(4, "discrete weak maximum", 60.0, || {
        suite::criterion_4_weak_max(None, 200)
    });
}

#[test]
fn criterion_05_barrier_lemma() {
    run(5, "barrier lemma", 30.0, || {
        suite::criterion_5_barrier(None)
    });
}

#[test]
fn criterion_06_hopf_inequality() {
    run(6, "Hopf inequality", 60.0, || {
        suite::criterion_6_hopf(None, 50)
    });
}

#[test]
fn criterion_07_quantitative_hopf_suites() {
    run(7, "quantitative Hopf suites", 300.0, || {
        suite::criterion_7_qhl(None, 50)
    });
}

#[test]
fn criterion_08_delta_lower_bound() {
    run(8, "delta_D lower bound", 30.0, || {
        suite::criterion_8_delta(None)
    });
}

#[test]
fn criterion_09_weak_harnack() {
    run(9, "weak Harnack", 60.0, || {
        suite::criterion_9_weak_harnack(None, 200)
    });
}

#[test]
fn criterion_10_structural_identities() {
    run(10, "structural identities", 60.0, || {
        suite::criterion_10_structural(None)
    });
}

#[test]
fn criterion_11_negative_controls() {
    run(11, "negative controls", 120.0, || {
        suite::criterion_11_negative_controls(None)
    });
}

#[test]
fn criterion_11_reproducibility() {
    // two full paper-core runs with identical configs must produce
    // byte-identical reports (timestamps live in the separate metadata file)
    let t0 = Instant::now();
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    suite::run_suite("paper-core", dir_a.path()).unwrap();
    suite::run_suite("paper-core", dir_b.path()).unwrap();
    for file in ["report.jsonl", "summary.txt"] {
        let a = std::fs::read(dir_a.path().join(file)).unwrap();
        let b = std::fs::read(dir_b.path().join(file)).unwrap();
        assert_eq!(a, b, "{file} differs between identical suite runs");
    }
    println!(
        "ACCEPTANCE 11 reproducibility              PASS (byte-identical reports, {:.1}s)",
        t0.elapsed().as_secs_f64()
    );
}
