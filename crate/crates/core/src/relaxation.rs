//! The Dirichlet series `Σ a_n e^{−α_n t}` with `a_n = 4(ν+1)/j²`,
//! `α_n = j²`, and the functions built from it:
//!
//! * creep `F(t) = 1 − Σ a_n e^{−α_n t}`, a Bernstein function;
//! * relaxation `G(t) = 1 − F(t)`;
//! * memory `Φ(t) = −G′(t) = 4(ν+1) Σ e^{−α_n t}`, completely monotone.
//!
//! `Σ a_n = 1`, so `F` and `G` admit a truncation bound uniform in `t`.
//! `Φ` does not; it is only evaluated above a certified time.

use std::f64::consts::PI;

use serde::Serialize;

use crate::bessel::Order;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::grid::TimeGrid;
use crate::rayleigh::TailBracket;
use crate::zeros::{zero_table_with, MAX_TABLE};

/// `e^{−x}` is below the smallest subnormal past this.
const EXP_CUTOFF: f64 = 745.0;

/// Largest derivative order accepted by [`cm_check`].
pub const MAX_CM_ORDER: usize = 8;

/// Truncated Dirichlet series with its truncation certificates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirichletSeries {
    order: Order,
    amplitudes: Vec<f64>,
    rates: Vec<f64>,
    tail_tol: f64,
    t_min: f64,
    tail_bound: f64,
    exp_terms: usize,
    exp_tail_bound: f64,
    phi_t_min: f64,
    next_rate: f64,
    /// Lower bound for `j_{n+1} − j_n` past the retained zeros.
    gap: f64,
}

/// Smallest `N` with `4(ν+1)·tail(N) ≤ tol`, from the Rayleigh tail bracket.
fn uniform_terms(nu: f64, tol: f64) -> usize {
    let scale = 4.0 * (nu + 1.0);
    let shift = 0.5 * nu - 0.25;
    let ok = |n: usize| scale * TailBracket::new(nu, n).upper_bound() <= tol;
    let guess = (scale / (PI * PI * tol) - shift).ceil().max(1.0);
    if guess > 2.0 * MAX_TABLE as f64 {
        return usize::MAX;
    }
    let mut n = guess as usize;
    while !ok(n) {
        n += 1;
    }
    while n > 1 && ok(n - 1) {
        n -= 1;
    }
    n
}

/// `a_{N+1} e^{−α_{N+1} t}/(1 − e^{−2 g j_{N+1} t})`: successive rates beyond
/// `N` differ by at least `2 g j_{N+1}` and amplitudes decrease.
fn exp_tail(amp_next: f64, j_next: f64, gap: f64, t: f64) -> f64 {
    let head = amp_next * (-(j_next * j_next) * t).exp();
    let ratio = -(-2.0 * gap * j_next * t).exp_m1();
    if ratio <= 0.0 {
        return f64::INFINITY;
    }
    head / ratio
}

/// Builds the series truncated so that the neglected amplitudes sum to at
/// most `tail_tol`, which bounds the error of `F` and `G` for every `t ≥ 0`.
pub fn build_series(order: Order, tail_tol: f64, t_min: f64) -> Result<DirichletSeries> {
    build_series_with(order, tail_tol, t_min, Execution::default())
}

pub fn build_series_with(
    order: Order,
    tail_tol: f64,
    t_min: f64,
    exec: Execution,
) -> Result<DirichletSeries> {
    if !(tail_tol > 0.0 && tail_tol < 1.0) {
        return Err(Error::domain(format!("tail_tol must lie in (0, 1), got {tail_tol}")));
    }
    if !(t_min > 0.0 && t_min.is_finite()) {
        return Err(Error::domain(format!("t_min must be > 0, got {t_min}")));
    }
    let nu = order.nu();
    let scale = 4.0 * (nu + 1.0);
    let mut n = uniform_terms(nu, tail_tol);
    if n.saturating_add(2) > MAX_TABLE {
        return Err(Error::Resource(format!(
            "tail_tol {tail_tol} needs more than {MAX_TABLE} zeros"
        )));
    }
    let mut table = zero_table_with(order, n + 2, exec)?;
    // The bracket is asymptotic; the normalization Σ a_n = 1 is checked too.
    loop {
        let head: f64 = table.zeros()[..n].iter().rev().map(|j| scale / (j * j)).sum();
        if 1.0 - head <= tail_tol {
            break;
        }
        n += 1;
        if n + 2 > MAX_TABLE {
            return Err(Error::Resource(format!(
                "tail_tol {tail_tol} needs more than {MAX_TABLE} zeros"
            )));
        }
        if n + 2 > table.len() {
            table = zero_table_with(order, (2 * n).min(MAX_TABLE), exec)?;
        }
    }
    let zeros = table.zeros();
    let amplitudes: Vec<f64> = zeros[..n].iter().map(|j| scale / (j * j)).collect();
    let rates: Vec<f64> = zeros[..n].iter().map(|j| j * j).collect();
    let head: f64 = amplitudes.iter().rev().sum();
    let tail_bound = (scale * TailBracket::new(nu, n).upper_bound()).max(1.0 - head);

    let gap_after = |m: usize| (zeros[m + 1] - zeros[m]).min(PI);
    let bound_at = |m: usize, t: f64| {
        let j = zeros[m];
        exp_tail(scale / (j * j), j, gap_after(m), t)
    };
    // smallest m ≤ n whose exponential bound at t_min meets the tolerance
    let exp_terms = (0..=n)
        .find(|&m| bound_at(m, t_min) <= tail_tol)
        .unwrap_or(n);
    let exp_tail_bound = bound_at(exp_terms, t_min).min(tail_bound);

    let j_next = zeros[n];
    let gap = gap_after(n);
    let phi_tail = |t: f64| scale * exp_tail(1.0, j_next, gap, t);
    let phi_t_min = certify_phi(phi_tail, tail_tol, j_next);

    Ok(DirichletSeries {
        order,
        amplitudes,
        rates,
        tail_tol,
        t_min,
        tail_bound,
        exp_terms,
        exp_tail_bound,
        phi_t_min,
        next_rate: j_next * j_next,
        gap,
    })
}

/// Smallest `t` (to bisection resolution) with `phi_tail(t) ≤ tol`;
/// `phi_tail` decreases in `t`.
fn certify_phi(phi_tail: impl Fn(f64) -> f64, tol: f64, j_next: f64) -> f64 {
    let mut hi = 1.0 / (j_next * j_next);
    while phi_tail(hi) > tol {
        hi *= 2.0;
    }
    let mut lo = hi / 2.0;
    while lo > 0.0 && phi_tail(lo) <= tol {
        lo /= 2.0;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if phi_tail(mid) <= tol {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

impl DirichletSeries {
    pub fn order(&self) -> Order {
        self.order
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    pub fn tail_tol(&self) -> f64 {
        self.tail_tol
    }

    pub fn t_min(&self) -> f64 {
        self.t_min
    }

    /// Bound on `Σ_{n>N} a_n`, valid for `F` and `G` at every `t`.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// Terms sufficient for `tail_tol` when only `t ≥ t_min` is needed.
    pub fn exp_terms(&self) -> usize {
        self.exp_terms
    }

    /// The exponential tail bound of the first `exp_terms` terms at `t_min`.
    pub fn exp_tail_bound(&self) -> f64 {
        self.exp_tail_bound
    }

    /// Smallest time at which the neglected part of `Φ` is below `tail_tol`.
    pub fn phi_t_min(&self) -> f64 {
        self.phi_t_min
    }

    /// Bound on the neglected part of `F` and `G` at time `t`.
    pub fn tail_bound_at(&self, t: f64) -> f64 {
        let scale = 4.0 * (self.order.nu() + 1.0);
        let j = self.next_rate.sqrt();
        let amp = scale / self.next_rate;
        self.tail_bound.min(exp_tail(amp, j, self.gap, t))
    }

    /// Bound on the neglected part of `Φ` at time `t`.
    pub fn phi_tail_bound_at(&self, t: f64) -> f64 {
        let scale = 4.0 * (self.order.nu() + 1.0);
        scale * exp_tail(1.0, self.next_rate.sqrt(), self.gap, t)
    }

    /// Number of leading terms not flushed to zero by `e^{−α t}`.
    fn live_terms(&self, t: f64) -> usize {
        self.rates.partition_point(|&a| a * t < EXP_CUTOFF)
    }

    /// `Σ a_n e^{−α_n t}`, smallest terms first.
    fn weighted(&self, t: f64) -> f64 {
        let k = self.live_terms(t);
        self.amplitudes[..k]
            .iter()
            .zip(&self.rates[..k])
            .rev()
            .map(|(a, r)| a * (-r * t).exp())
            .sum()
    }

    /// `Σ (−α_n)^k e^{−α_n t}` without the `4(ν+1)` factor.
    fn moment(&self, k: usize, t: f64) -> f64 {
        let n = self.live_terms(t);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let s: f64 = self.rates[..n]
            .iter()
            .rev()
            .map(|&r| r.powi(k as i32) * (-r * t).exp())
            .sum();
        sign * s
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("time must be > 0, got {t}")));
    }
    Ok(())
}

/// `F(t) = 1 − G(t)`.
pub fn creep_f(series: &DirichletSeries, t: f64) -> Result<f64> {
    Ok(1.0 - relaxation_g(series, t)?)
}

/// `G(t) = Σ a_n e^{−α_n t}`.
pub fn relaxation_g(series: &DirichletSeries, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(series.weighted(t))
}

/// `Φ(t) = 4(ν+1) Σ e^{−α_n t}`, for `t ≥ phi_t_min`.
pub fn memory_phi(series: &DirichletSeries, t: f64) -> Result<f64> {
    memory_phi_derivative(series, 0, t)
}

/// `Φ^{(k)}(t) = 4(ν+1) Σ (−α_n)^k e^{−α_n t}`, for `t ≥ phi_t_min`.
pub fn memory_phi_derivative(series: &DirichletSeries, k: usize, t: f64) -> Result<f64> {
    check_time(t)?;
    if t < series.phi_t_min {
        return Err(Error::domain(format!(
            "Phi is certified only for t >= {:e} with {} terms, got t = {t:e}",
            series.phi_t_min,
            series.len()
        )));
    }
    Ok(4.0 * (series.order.nu() + 1.0) * series.moment(k, t))
}

/// One row of a grid evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RelaxationSample {
    pub t: f64,
    pub f: f64,
    pub g: f64,
    pub phi: f64,
}

/// Evaluates `F`, `G`, `Φ` on every grid time.
pub fn evaluate_grid(
    series: &DirichletSeries,
    grid: &TimeGrid,
    exec: Execution,
) -> Result<Vec<RelaxationSample>> {
    exec.map_slice(grid.times(), |&t| {
        let g = relaxation_g(series, t)?;
        Ok(RelaxationSample {
            t,
            f: 1.0 - g,
            g,
            phi: memory_phi(series, t)?,
        })
    })
    .into_iter()
    .collect()
}

/// Which check produced a [`CmViolation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CmWitness {
    /// `(−1)^k Φ^{(k)}(t) > 0` from the analytic derivative.
    Analytic,
    /// `(−1)^k Φ[t_i, …, t_{i+k}] ≥ 0` from divided differences of samples.
    DividedDifference,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CmViolation {
    pub k: usize,
    pub t: f64,
    pub value: f64,
    pub witness: CmWitness,
}

/// Outcome of [`cm_check`]; `passed` is true exactly when `violations` is empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CMReport {
    pub max_order_checked: usize,
    pub violations: Vec<CmViolation>,
    pub passed: bool,
}

/// Checks complete monotonicity of `Φ` on `grid` up to derivative order `k_max`.
///
/// Divided differences of order `k` equal `Φ^{(k)}(ξ)/k!` for some `ξ` in the
/// node span, so they share the sign of the analytic derivative. A divided
/// difference smaller than its rounding-noise estimate is not a witness
/// either way and is skipped.
pub fn cm_check(series: &DirichletSeries, grid: &TimeGrid, k_max: usize) -> Result<CMReport> {
    cm_check_with(series, grid, k_max, Execution::default())
}

pub fn cm_check_with(
    series: &DirichletSeries,
    grid: &TimeGrid,
    k_max: usize,
    exec: Execution,
) -> Result<CMReport> {
    if k_max > MAX_CM_ORDER {
        return Err(Error::invalid(format!(
            "k_max must be <= {MAX_CM_ORDER}, got {k_max}"
        )));
    }
    if grid.first() < series.phi_t_min {
        return Err(Error::domain(format!(
            "grid starts at {:e}, below the certified time {:e}",
            grid.first(),
            series.phi_t_min
        )));
    }
    let times = grid.times();
    let rows: Vec<Vec<f64>> = exec.map_slice(times, |&t| {
        (0..=k_max)
            .map(|k| memory_phi_derivative(series, k, t).expect("certified grid"))
            .collect()
    });
    let mut violations = Vec::new();
    for (row, &t) in rows.iter().zip(times) {
        for (k, &d) in row.iter().enumerate() {
            let signed = if k % 2 == 0 { d } else { -d };
            if !(signed > 0.0) {
                violations.push(CmViolation {
                    k,
                    t,
                    value: d,
                    witness: CmWitness::Analytic,
                });
            }
        }
    }

    let values: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    violations.extend(divided_difference_violations(times, &values, k_max));

    Ok(CMReport {
        max_order_checked: k_max,
        passed: violations.is_empty(),
        violations,
    })
}

/// Sign violations of `(−1)^k f[t_i, …, t_{i+k}]` that exceed a running
/// worst-case rounding estimate.
fn divided_difference_violations(times: &[f64], values: &[f64], k_max: usize) -> Vec<CmViolation> {
    let mut out = Vec::new();
    let mut dd = values.to_vec();
    let mut noise: Vec<f64> = dd.iter().map(|v| 4.0 * f64::EPSILON * v.abs()).collect();
    for k in 1..=k_max.min(times.len().saturating_sub(1)) {
        let m = dd.len() - 1;
        let mut next = Vec::with_capacity(m);
        let mut next_noise = Vec::with_capacity(m);
        for i in 0..m {
            let h = times[i + k] - times[i];
            let d = (dd[i + 1] - dd[i]) / h;
            next.push(d);
            next_noise.push((noise[i + 1] + noise[i]) / h + 4.0 * f64::EPSILON * d.abs());
        }
        dd = next;
        noise = next_noise;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        for i in 0..dd.len() {
            if sign * dd[i] < -noise[i] {
                out.push(CmViolation {
                    k,
                    t: times[i],
                    value: dd[i],
                    witness: CmWitness::DividedDifference,
                });
            }
        }
    }
    out
}
