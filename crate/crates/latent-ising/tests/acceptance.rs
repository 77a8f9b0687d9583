//! Acceptance gate: the full verification suite, one test per criterion.
//!
//! The suite runs once (twice internally, for the determinism criterion) and
//! each test asserts its own criterion, so `cargo test --test acceptance`
//! reports a pass/fail line per criterion. Artifacts land in the cargo
//! target tmpdir. Run with `-- --nocapture` to see the one-line summaries.

use std::path::Path;
use std::sync::OnceLock;

use latent_ising::verify::{run_all, write_artifacts, VerifyReport};

fn report() -> &'static VerifyReport {
    static REPORT: OnceLock<VerifyReport> = OnceLock::new();
    REPORT.get_or_init(|| {
        let report = run_all().expect("verification suite must complete");
        for outcome in &report.outcomes {
            println!("{}", outcome.line());
        }
        let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance-artifacts");
        write_artifacts(&report, &dir).expect("artifacts must be writable");
        report
    })
}

fn assert_criterion(id: &str) {
    let outcome = report()
        .outcomes
        .iter()
        .find(|o| o.id == id)
        .unwrap_or_else(|| panic!("criterion {id} missing from the report"));
    println!("{}", outcome.line());
    assert!(outcome.passed, "{id} failed: {}", outcome.detail);
}

#[test]
fn a1_influence_is_monotone_submodular() {
    assert_criterion("A1");
}

#[test]
fn a2_log_z_derivative_signs() {
    assert_criterion("A2");
}

#[test]
fn a3_two_hop_influence_gap() {
    assert_criterion("A3");
}

#[test]
fn a4_exact_oracle_structure_recovery() {
    assert_criterion("A4");
}

#[test]
fn a5_sampled_recovery_at_prescribed_m() {
    assert_criterion("A5");
}

#[test]
fn a6_conversion_round_trips() {
    assert_criterion("A6");
}

#[test]
fn a7_worked_fixtures() {
    assert_criterion("A7");
}

#[test]
fn a8_sparse_parity_instance() {
    assert_criterion("A8");
}

#[test]
fn a9_regression_recovery() {
    assert_criterion("A9");
}

#[test]
fn a10_lee_yang_log_z() {
    assert_criterion("A10");
}

#[test]
fn a11_byte_identical_artifacts() {
    assert_criterion("A11");
}
