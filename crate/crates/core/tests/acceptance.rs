//! One test per acceptance property; each prints a PASS/FAIL line and
//! enforces its runtime limit.

use std::io::Write;

use polysieve::suite::{self, CriterionResult};

fn check(result: CriterionResult) {
    // written to the process handle so the line survives output capture
    let _ = writeln!(std::io::stdout(), "{result}");
    assert!(result.ok, "property failed: {}", result.detail);
    assert!(
        result.within_time(),
        "exceeded time limit: {:.2}s",
        result.elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_01_kernel_identity() {
    check(suite::kernel_identity());
}

#[test]
fn criterion_02_quadratic_form_equivalence() {
    check(suite::quadratic_form_equivalence());
}

#[test]
fn criterion_03_power_sum_identity() {
    check(suite::power_sum_identity());
}

#[test]
fn criterion_04_root_bounds() {
    check(suite::root_bounds());
}

#[test]
fn criterion_05_root_count_sum_structure() {
    check(suite::proposition_structure());
}

#[test]
fn criterion_06_bound_chain() {
    check(suite::bound_chain());
}

#[test]
fn criterion_07_envelope_ratio() {
    check(suite::envelope_ratio());
}

#[test]
fn criterion_08_exponential_sum_bounds() {
    check(suite::exponential_sum_bounds());
}

#[test]
fn criterion_09_lower_bound() {
    check(suite::lower_bound());
}

#[test]
fn criterion_10_character_sum() {
    check(suite::character_corollary());
}

#[test]
fn criterion_11_vandermonde_identity() {
    check(suite::vandermonde_identity());
}
