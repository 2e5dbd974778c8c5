//! The acceptance criteria as runnable checks, shared by the test suite and
//! the `verify` subcommand. Tolerances and budgets are fixed here.

use std::f64::consts::PI;
use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::bessel::{laplace_image, Order};
use crate::error::Result;
use crate::exec::Execution;
use crate::grid::{SignalTrace, TimeGrid};
use crate::ladder::{convolve_response_with, step_response_with};
use crate::oracle::{forward_image_of_truncation, oracle_compare_with, InversionConfig};
use crate::rayleigh::{
    bessel_ratio_direct, calogero_limit_check, calogero_ratio_series, convergence_diagnostics,
    rayleigh_closed_form, rayleigh_partial_sum,
};
use crate::relaxation::{build_series_with, cm_check_with, creep_f, memory_phi};
use crate::zeros::zero_table_with;

pub const CRITERIA: [u8; 10] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub checks_passed: bool,
    pub within_budget: bool,
    pub passed: bool,
    pub elapsed_s: f64,
    pub budget_s: f64,
    pub detail: String,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} [{}] {} ({:.3} s of {:.0} s): {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.elapsed_s,
            self.budget_s,
            self.detail
        )
    }
}

struct Check {
    ok: bool,
    detail: String,
}

fn o(nu: f64) -> Order {
    Order::new(nu).expect("fixed orders are valid")
}

fn title(id: u8) -> (&'static str, f64) {
    match id {
        1 => ("Rayleigh-Sneddon identity, 500 zeros", 2.0),
        2 => ("half-integer closed forms", 1.0),
        3 => ("small-x limit of J_{nu+1}/(2x J_nu)", 1.0),
        4 => ("partial-fraction identity, N = 2000", 5.0),
        5 => ("Gaver-Stehfest oracle, M = 16", 5.0),
        6 => ("forward image of the truncation", 2.0),
        7 => ("small-t asymptotics of F and Phi", 2.0),
        8 => ("complete monotonicity to order 6", 2.0),
        9 => ("step response, linearity, causality", 2.0),
        10 => ("convergence abscissa diagnostics", 2.0),
        _ => ("unknown criterion", 0.0),
    }
}

/// Runs one criterion; `None` for an unknown id.
pub fn run(id: u8, exec: Execution) -> Option<Outcome> {
    let (name, budget) = title(id);
    let start = Instant::now();
    let check = match id {
        1 => c1(exec),
        2 => c2(exec),
        3 => c3(),
        4 => c4(exec),
        5 => c5(exec),
        6 => c6(exec),
        7 => c7(exec),
        8 => c8(exec),
        9 => c9(exec),
        10 => c10(exec),
        _ => return None,
    };
    let elapsed = start.elapsed();
    let check = check.unwrap_or_else(|e| Check {
        ok: false,
        detail: format!("error: {e}"),
    });
    let within_budget = elapsed <= Duration::from_secs_f64(budget);
    Some(Outcome {
        id,
        title: name,
        checks_passed: check.ok,
        within_budget,
        passed: check.ok && within_budget,
        elapsed_s: elapsed.as_secs_f64(),
        budget_s: budget,
        detail: check.detail,
    })
}

pub fn run_all(exec: Execution) -> Vec<Outcome> {
    CRITERIA.iter().filter_map(|&id| run(id, exec)).collect()
}

fn c1(exec: Execution) -> Result<Check> {
    let mut worst = 0.0_f64;
    for &nu in &[-0.5, -0.1, 0.0, 0.5, 1.0, 2.0, 5.0, 10.0] {
        let t = zero_table_with(o(nu), 500, exec)?;
        let est = rayleigh_partial_sum(&t);
        worst = worst.max((est.total - rayleigh_closed_form(o(nu))).abs());
    }
    Ok(Check {
        ok: worst <= 1e-6,
        detail: format!("max |S_est - 1/(4(nu+1))| = {worst:.3e} (tol 1e-6)"),
    })
}

fn c2(exec: Execution) -> Result<Check> {
    let sine = zero_table_with(o(0.5), 500, exec)?;
    let cosine = zero_table_with(o(-0.5), 500, exec)?;
    let mut zero_err = 0.0_f64;
    for n in 1..=100 {
        let k = n as f64;
        zero_err = zero_err.max((sine.zeros()[n - 1] - k * PI).abs());
        zero_err = zero_err.max((cosine.zeros()[n - 1] - (k - 0.5) * PI).abs());
    }
    let s1 = (rayleigh_partial_sum(&sine).total - 1.0 / 6.0).abs();
    let s2 = (rayleigh_partial_sum(&cosine).total - 0.5).abs();
    Ok(Check {
        ok: zero_err <= 1e-12 && s1 <= 1e-6 && s2 <= 1e-6,
        detail: format!(
            "max zero error {zero_err:.3e} (tol 1e-12); sum errors {s1:.3e}, {s2:.3e} (tol 1e-6)"
        ),
    })
}

fn c3() -> Result<Check> {
    let mut worst = 0.0_f64;
    for &nu in &[-0.9, 0.0, 1.0, 4.0] {
        worst = worst.max((calogero_limit_check(o(nu)) - rayleigh_closed_form(o(nu))).abs());
    }
    Ok(Check {
        ok: worst <= 1e-10,
        detail: format!("max |limit - 1/(4(nu+1))| = {worst:.3e} (tol 1e-10)"),
    })
}

/// 50 points in `(0, j_5)`, each kept at least `1e-3` away from a zero.
fn partial_fraction_points(zeros: &[f64]) -> Vec<f64> {
    let top = zeros[4];
    (1..=50)
        .map(|i| {
            let x = top * i as f64 / 51.0;
            if zeros.iter().any(|j| (j - x).abs() < 1e-3) {
                x + 2e-3
            } else {
                x
            }
        })
        .collect()
}

fn c4(exec: Execution) -> Result<Check> {
    let mut worst = 0.0_f64;
    for &nu in &[0.0, 1.3] {
        let t = zero_table_with(o(nu), 2000, exec)?;
        for x in partial_fraction_points(t.zeros()) {
            let a = calogero_ratio_series(o(nu), x, &t)?;
            let b = bessel_ratio_direct(o(nu), x)?;
            worst = worst.max((a - b).abs());
        }
    }
    Ok(Check {
        ok: worst <= 1e-5,
        detail: format!("max error {worst:.3e} over 50 points (tol 1e-5)"),
    })
}

fn c5(exec: Execution) -> Result<Check> {
    let grid = TimeGrid::geometric(0.01, 2.0, 20)?;
    let config = InversionConfig::default();
    let mut parts = Vec::new();
    let mut worst = 0.0_f64;
    for &nu in &[-0.5, 0.0, 1.0, 3.0] {
        let series = build_series_with(o(nu), 1e-4, 0.01, exec)?;
        let r = oracle_compare_with(o(nu), &grid, &series, &config, exec)?;
        worst = worst.max(r.max_abs_err);
        parts.push(format!("nu={nu}: {:.2e}", r.max_abs_err));
    }
    Ok(Check {
        ok: worst <= 1e-4,
        detail: format!("max |F - GS| {} (tol 1e-4)", parts.join(", ")),
    })
}

fn c6(exec: Execution) -> Result<Check> {
    let tol = 1e-5;
    let mut worst = 0.0_f64;
    for &nu in &[-0.5, 0.0, 1.0, 3.0] {
        let series = build_series_with(o(nu), tol, 1.0, exec)?;
        let s_values: Vec<f64> = (0..=60).map(|i| 10f64.powf(-2.0 + i as f64 / 10.0)).collect();
        let ratios = exec.map_slice(&s_values, |&s| -> Result<f64> {
            let diff = forward_image_of_truncation(&series, s)? - laplace_image(o(nu), s)?;
            Ok(diff.abs() * s / tol)
        });
        for r in ratios {
            worst = worst.max(r?);
        }
    }
    Ok(Check {
        ok: worst <= 1.0,
        detail: format!(
            "max |forward - image| * s / tail_tol = {worst:.3e} on 61 points in [1e-2, 1e4] (tol 1)"
        ),
    })
}

fn c7(exec: Execution) -> Result<Check> {
    let mut ok = true;
    let mut parts = Vec::new();
    for &nu in &[-0.5, 0.0, 1.0, 3.0] {
        let series = build_series_with(o(nu), 1e-4, 1e-6, exec)?;
        let t = 1e-6;
        let rf = creep_f(&series, t)? / (4.0 * (nu + 1.0) * (t / PI).sqrt());
        let t = 1e-4;
        let rp = memory_phi(&series, t)? * t.sqrt() * PI.sqrt() / (2.0 * (nu + 1.0));
        let in_band = |r: f64| (0.98..=1.02).contains(&r);
        ok &= in_band(rf) && in_band(rp);
        parts.push(format!("nu={nu}: F {rf:.4}, Phi {rp:.4}"));
    }
    Ok(Check {
        ok,
        detail: format!("ratios {} (band [0.98, 1.02])", parts.join("; ")),
    })
}

fn c8(exec: Execution) -> Result<Check> {
    let grid = TimeGrid::geometric(1e-3, 10.0, 64)?;
    let mut ok = true;
    let mut count = 0;
    for &nu in &[0.0, 2.0] {
        let series = build_series_with(o(nu), 1e-4, 1e-3, exec)?;
        let r = cm_check_with(&series, &grid, 6, exec)?;
        ok &= r.passed;
        count += r.violations.len();
    }
    Ok(Check {
        ok,
        detail: format!("{count} sign violations up to order 6 on 64 points in [1e-3, 10]"),
    })
}

fn c9(exec: Execution) -> Result<Check> {
    let grid = TimeGrid::linear(0.0, 2.0, 200)?;
    let mut worst_step = 0.0_f64;
    let mut worst_lin = 0.0_f64;
    let mut causal = true;
    let mut ok = true;
    for &nu in &[0.0, 1.0] {
        let series = build_series_with(o(nu), 1e-4, 1e-2, exec)?;
        let tol = 1e-5 + series.tail_tol();

        let unit = SignalTrace::sample(grid.clone(), |_| 1.0)?;
        let got = convolve_response_with(&series, &unit, exec)?;
        let positive = TimeGrid::new(grid.times()[1..].to_vec())?;
        let want = step_response_with(&series, &positive, exec)?;
        for (a, b) in got.current.values()[1..].iter().zip(want.values()) {
            worst_step = worst_step.max((a - b).abs());
        }
        ok &= worst_step <= tol;

        let v1 = SignalTrace::sample(grid.clone(), |t| (5.0 * t).sin())?;
        let v2 = SignalTrace::sample(grid.clone(), |t| t * t - 0.5)?;
        let (a, b) = (0.75, -2.5);
        let mix = SignalTrace::sample(grid.clone(), |t| a * (5.0 * t).sin() + b * (t * t - 0.5))?;
        let r1 = convolve_response_with(&series, &v1, exec)?;
        let r2 = convolve_response_with(&series, &v2, exec)?;
        let rm = convolve_response_with(&series, &mix, exec)?;
        for ((x, y), z) in r1
            .current
            .values()
            .iter()
            .zip(r2.current.values())
            .zip(rm.current.values())
        {
            worst_lin = worst_lin.max((a * x + b * y - z).abs());
        }
        ok &= worst_lin <= 1e-12;

        let late = 150;
        let mut bumped = v1.values().to_vec();
        bumped[late] += 1.0;
        let bumped = SignalTrace::new(grid.clone(), bumped)?;
        let rb = convolve_response_with(&series, &bumped, exec)?;
        causal &= rb.current.values()[..late] == r1.current.values()[..late];
        causal &= rb.current.values()[late] != r1.current.values()[late];
    }
    ok &= causal;
    Ok(Check {
        ok,
        detail: format!(
            "step error {worst_step:.3e} (tol 1e-5 + tail_tol), linearity {worst_lin:.3e} (tol 1e-12), causal {causal}"
        ),
    })
}

fn c10(exec: Execution) -> Result<Check> {
    let mut monotone = true;
    let mut worst = 0.0_f64;
    for &nu in &[0.0, 0.5, 2.0] {
        let t = zero_table_with(o(nu), 1000, exec)?;
        let d = convergence_diagnostics(o(nu), &t)?;
        worst = worst.max(d.d_estimate).max(d.sigma_estimate);
        monotone &= d.d_sequence[2..].windows(2).all(|w| w[1].1 < w[0].1);
    }
    Ok(Check {
        ok: worst <= 1e-3 && monotone,
        detail: format!(
            "max estimate {worst:.3e} (tol 1e-3); ln n / j^2 decreasing from n = 3: {monotone}"
        ),
    })
}
