//! Acceptance gate: every release-blocking criterion, one test each, with
//! its stated tolerance and runtime budget. Each test prints a single
//! pass/fail line (visible with --nocapture).

use std::time::{Duration, Instant};

use czv_core::checks;

fn run(criterion: &str, suite: &str, budget: Option<Duration>) {
    let start = Instant::now();
    let report = checks::run_suite(suite, None).expect("suite must run");
    let elapsed = start.elapsed();
    let ok = report.all_pass() && budget.map_or(true, |b| elapsed < b);
    println!(
        "{} criterion {criterion} [{suite}, {elapsed:.2?}]",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(report.all_pass(), "criterion {criterion}: {report:#?}");
    if let Some(b) = budget {
        assert!(elapsed < b, "criterion {criterion} overran {b:?}: {elapsed:?}");
    }
}

#[test]
fn golden_value_under_both_schemes() {
    run(
        "golden value 3/8 in both schemes, five directions",
        "golden",
        Some(Duration::from_secs(1)),
    );
}

#[test]
fn projection_of_the_double_pole_product() {
    run(
        "holomorphic projection of the double pole product to order 6",
        "projection-display",
        Some(Duration::from_secs(1)),
    );
}

#[test]
fn reduced_coproduct_of_the_chen_two_cone() {
    run(
        "reduced coproduct of the Chen 2-cone with exact lattices",
        "coproduct",
        None,
    );
}

#[test]
fn euler_maclaurin_on_the_corpus() {
    run(
        "sum = counterterm * integral to order 8 on twelve cones",
        "euler-maclaurin",
        Some(Duration::from_secs(60)),
    );
}

#[test]
fn coalgebra_axioms_on_the_coloured_corpus() {
    run(
        "coalgebra axioms with colours of weight at most 2",
        "coalgebra-axioms",
        Some(Duration::from_secs(120)),
    );
}

#[test]
fn differential_intertwining() {
    run(
        "colour decrements intertwine with derivatives for the sum and both factors",
        "intertwining",
        None,
    );
}

#[test]
fn subdivision_invariance() {
    run(
        "quadrant sum through two subdivisions to order 8",
        "subdivision",
        None,
    );
}

#[test]
fn smoothing_terminates_with_unimodular_pieces() {
    run(
        "smooth subdivision yields unimodular pieces; plane piece count = index",
        "smoothing",
        None,
    );
}

#[test]
fn numeric_soundness() {
    run(
        "closed form vs lattice sum within 1e-6 relative error",
        "numeric",
        Some(Duration::from_secs(5)),
    );
}

#[test]
fn projection_well_definedness() {
    run(
        "projection stable, idempotent, annihilating on fifty seeded germs",
        "pi-plus",
        None,
    );
}

#[test]
fn restriction_projection_counterexample() {
    run(
        "restriction and projection do not commute on e1/e2",
        "counterexample",
        None,
    );
}
