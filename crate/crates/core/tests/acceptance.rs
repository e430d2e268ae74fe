//! Acceptance gate: one test per top-level criterion, each printing its
//! pass/fail summary line. Tolerances and runtime budgets are pinned inside
//! `lambda_local::verify`; nothing here is tunable.

use lambda_local::verify::{criterion_ids, run_by_id};

fn run(id: &str) {
    let report = run_by_id(id).expect("criterion id is registered");
    println!("{}", report.summary_line());
    assert!(report.pass, "{}", report.summary_line());
}

#[test]
fn c1_q2_golden_table() {
    run("c1-q2-golden-table");
}

#[test]
fn c2_gauss_oracle() {
    run("c2-gauss-oracle");
}

#[test]
fn c3_functional_equation() {
    run("c3-functional-equation");
}

#[test]
fn c4_klein_four() {
    run("c4-klein-four");
}

#[test]
fn c5_tame_quadratic() {
    run("c5-tame-quadratic");
}

#[test]
fn c6_group_dichotomy() {
    run("c6-group-dichotomy");
}

#[test]
fn c7_dispatcher() {
    run("c7-dispatcher");
}

#[test]
fn c8_conductor_tower() {
    run("c8-conductor-tower");
}

#[test]
fn registry_is_complete() {
    assert_eq!(criterion_ids().len(), 8);
}
