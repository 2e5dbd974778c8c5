//! One test per acceptance criterion. Each prints a single PASS/FAIL line.
//! Criteria run one at a time so the runtime budgets are measured without
//! contention from other tests in this binary.

use std::io::Write;
use std::sync::Mutex;

use std::f64::consts::PI;

use rayleigh::acceptance::{run, Outcome};
use rayleigh::{build_series, creep_f, memory_phi, Execution, Order};

static SERIAL: Mutex<()> = Mutex::new(());

fn criterion(id: u8) -> Outcome {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let outcome = run(id, Execution::default()).expect("known criterion");
    // bypasses libtest capture so the line shows in plain `cargo test` output
    let mut out = std::io::stdout().lock();
    writeln!(out, "{outcome}").expect("stdout");
    out.flush().expect("stdout");
    outcome
}

#[test]
fn criterion_01_rayleigh_identity() {
    assert!(criterion(1).passed);
}

#[test]
fn criterion_02_half_integer_closed_forms() {
    assert!(criterion(2).passed);
}

#[test]
fn criterion_03_small_argument_limit() {
    assert!(criterion(3).passed);
}

#[test]
fn criterion_04_partial_fraction_identity() {
    assert!(criterion(4).passed);
}

#[test]
fn criterion_05_inversion_oracle() {
    assert!(criterion(5).passed);
}

#[test]
fn criterion_06_forward_image() {
    assert!(criterion(6).passed);
}

/// `Φ(t)√(πt)/(2(ν+1)) = 1 − (ν + 1/2)√(πt) + O(t)`, so at `t = 1e-4` the
/// ±2% band holds only for `ν ≲ 0.63`. The criterion is red for `ν ∈ {1, 3}`;
/// this test pins that state and checks the computed values are the true ones.
#[test]
fn criterion_07_small_time_asymptotics() {
    let outcome = criterion(7);
    assert!(outcome.within_budget);
    assert!(!outcome.checks_passed);
    for &nu in &[-0.5, 0.0, 1.0, 3.0] {
        let series = build_series(Order::new(nu).unwrap(), 1e-4, 1e-6).unwrap();
        let t = 1e-6;
        let rf = creep_f(&series, t).unwrap() / (4.0 * (nu + 1.0) * (t / PI).sqrt());
        assert!((0.98..=1.02).contains(&rf), "nu {nu}: F ratio {rf}");
        let t = 1e-4;
        let rp = memory_phi(&series, t).unwrap() * (PI * t).sqrt() / (2.0 * (nu + 1.0));
        let two_term = 1.0 - (nu + 0.5) * (PI * t).sqrt();
        assert!((rp - two_term).abs() <= 1e-3, "nu {nu}: Phi ratio {rp} vs {two_term}");
        assert_eq!((0.98..=1.02).contains(&rp), nu < 0.63);
    }
}

#[test]
fn criterion_08_complete_monotonicity() {
    assert!(criterion(8).passed);
}

#[test]
fn criterion_09_step_response() {
    assert!(criterion(9).passed);
}

#[test]
fn criterion_10_convergence_diagnostics() {
    assert!(criterion(10).passed);
}
