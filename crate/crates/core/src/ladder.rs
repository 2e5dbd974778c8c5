//! Current response of the ladder network, `I = V + Ġ ∗ V = V − Φ ∗ V`.
//!
//! Each mode `y_n(t) = ∫₀ᵗ e^{−α_n(t−τ)} V(τ) dτ` is advanced exactly for
//! piecewise-linear `V`, so `I(t_k) = V(t_k) − Σ c_n y_n(t_k)` carries no
//! quadrature error.

use serde::Serialize;

use crate::bessel::Order;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::grid::{SignalTrace, TimeGrid};
use crate::relaxation::{relaxation_g, DirichletSeries};

/// Modes per work unit; chunk sums are reduced in index order.
const MODE_CHUNK: usize = 512;

/// Finite exponential-sum form `Φ(t) = Σ c_n e^{−α_n t}` plus the static term
/// of `G`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PronyModel {
    pub order: Order,
    pub amplitudes: Vec<f64>,
    pub rates: Vec<f64>,
    pub static_term: f64,
}

impl PronyModel {
    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    /// `Σ c_n e^{−α_n t}`.
    pub fn phi(&self, t: f64) -> f64 {
        self.amplitudes
            .iter()
            .zip(&self.rates)
            .rev()
            .map(|(c, a)| c * (-a * t).exp())
            .sum()
    }
}

/// Memory-function weights `c_n = 4(ν+1)` with rates `α_n = j²`.
pub fn prony_export(series: &DirichletSeries) -> PronyModel {
    let c = 4.0 * (series.order().nu() + 1.0);
    PronyModel {
        order: series.order(),
        amplitudes: vec![c; series.len()],
        rates: series.rates().to_vec(),
        static_term: 1.0,
    }
}

/// `I(t) = G(t)` for a unit step applied at `t = 0`.
pub fn step_response(series: &DirichletSeries, grid: &TimeGrid) -> Result<SignalTrace> {
    step_response_with(series, grid, Execution::default())
}

pub fn step_response_with(
    series: &DirichletSeries,
    grid: &TimeGrid,
    exec: Execution,
) -> Result<SignalTrace> {
    if grid.first() <= 0.0 {
        return Err(Error::domain("step response needs grid times > 0"));
    }
    let values = exec
        .map_slice(grid.times(), |&t| relaxation_g(series, t))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    SignalTrace::new(grid.clone(), values)
}

/// Raised when a step is long compared with the fastest retained mode.
/// The update stays exact for piecewise-linear input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnderResolved {
    pub max_step: f64,
    pub fastest_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Response {
    pub current: SignalTrace,
    pub under_resolved: Option<UnderResolved>,
}

/// Exact per-step weights of the piecewise-linear exponential integrator:
/// `y ← e^{−αh} y + w0 V_k + w1 V_{k+1}`.
#[derive(Debug, Clone, Copy)]
struct StepWeights {
    decay: f64,
    w0: f64,
    w1: f64,
}

impl StepWeights {
    fn new(alpha: f64, h: f64) -> Self {
        let x = alpha * h;
        // phi1 = ∫₀ʰ e^{−α(h−s)} ds; w1 = h (x − 1 + e^{−x})/x²
        let (phi1, w1) = if x < 0.1 {
            let mut term = 1.0;
            let mut p1 = 0.0;
            let mut q = 0.0;
            // p1 = Σ (−x)^k/(k+1)!, q = Σ (−x)^k/(k+2)!
            for k in 0..12 {
                p1 += term / (k + 1) as f64;
                q += term / ((k + 1) * (k + 2)) as f64;
                term *= -x / (k + 1) as f64;
            }
            (h * p1, h * q)
        } else {
            let em1 = -(-x).exp_m1();
            (h * em1 / x, h * (x - em1) / (x * x))
        };
        StepWeights {
            decay: (-x).exp(),
            w0: phi1 - w1,
            w1,
        }
    }
}

/// `Σ_{n ∈ chunk} c_n y_n(t_k)` for every `k`.
fn chunk_memory(c: f64, rates: &[f64], times: &[f64], v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; times.len()];
    let mut y = vec![0.0; rates.len()];
    for k in 1..times.len() {
        let h = times[k] - times[k - 1];
        let mut acc = 0.0;
        for (yn, &a) in y.iter_mut().zip(rates).rev() {
            let w = StepWeights::new(a, h);
            *yn = w.decay * *yn + w.w0 * v[k - 1] + w.w1 * v[k];
            acc += *yn;
        }
        out[k] = c * acc;
    }
    out
}

/// `I = V − Φ ∗ V` for causal `V` (zero before the first sample, linear
/// between samples).
pub fn convolve_response(series: &DirichletSeries, input: &SignalTrace) -> Result<Response> {
    convolve_response_with(series, input, Execution::default())
}

pub fn convolve_response_with(
    series: &DirichletSeries,
    input: &SignalTrace,
    exec: Execution,
) -> Result<Response> {
    let times = input.times();
    let v = input.values();
    let c = 4.0 * (series.order().nu() + 1.0);
    let parts = exec.map_chunks(series.rates(), MODE_CHUNK, |_, rates| {
        chunk_memory(c, rates, times, v)
    });
    // slowest chunks hold the largest contributions; add fastest first
    let mut memory = vec![0.0; times.len()];
    for part in parts.iter().rev() {
        for (m, p) in memory.iter_mut().zip(part) {
            *m += p;
        }
    }
    let values: Vec<f64> = v.iter().zip(&memory).map(|(vk, m)| vk - m).collect();
    let max_step = input.grid().max_step();
    let fastest_rate = series.rates().last().copied().unwrap_or(0.0);
    let under_resolved = (max_step * fastest_rate > 1.0).then_some(UnderResolved {
        max_step,
        fastest_rate,
    });
    Ok(Response {
        current: SignalTrace::new(input.grid().clone(), values)?,
        under_resolved,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relaxation::{build_series, memory_phi};
    use std::f64::consts::PI;

    fn o(nu: f64) -> Order {
        Order::new(nu).unwrap()
    }

    #[test]
    fn weights_match_quadrature() {
        for &(alpha, h) in &[(1e-6, 0.5), (0.05, 1.0), (3.0, 0.2), (50.0, 1.0), (1e9, 0.01)] {
            let w = StepWeights::new(alpha, h);
            // Simpson on ∫₀ʰ e^{−α(h−s)} (1 − s/h) ds and ∫₀ʰ e^{−α(h−s)} s/h ds
            let n = 20_000;
            let (mut q0, mut q1) = (0.0, 0.0);
            for i in 0..=n {
                let s = h * i as f64 / n as f64;
                let wt = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
                let e = (-alpha * (h - s)).exp();
                q0 += wt * e * (1.0 - s / h);
                q1 += wt * e * s / h;
            }
            let step = h / n as f64 / 3.0;
            let (q0, q1) = (q0 * step, q1 * step);
            if alpha * h < 100.0 {
                assert!((w.w0 - q0).abs() <= 1e-10 * q0.abs().max(1e-300), "{alpha} {h}");
                assert!((w.w1 - q1).abs() <= 1e-10 * q1.abs(), "{alpha} {h}");
            }
            assert!(w.w0 >= 0.0 && w.w1 >= 0.0);
        }
        // series and closed form agree across the switch
        let a = StepWeights::new(0.099_999_999, 1.0);
        let b = StepWeights::new(0.100_000_001, 1.0);
        assert!((a.w1 - b.w1).abs() < 1e-9 && (a.w0 - b.w0).abs() < 1e-9);
    }

    #[test]
    fn prony_examples() {
        let s = build_series(o(0.0), 1e-3, 1.0).unwrap();
        let p = prony_export(&s);
        assert_eq!(p.len(), s.len());
        assert_eq!(p.amplitudes[0], 4.0);
        assert!((p.rates[0] - 2.404_825_557_695_773f64.powi(2)).abs() < 1e-13);
        assert!((p.rates[0] - 5.78318).abs() < 1e-5);
        assert_eq!(p.static_term, 1.0);
        assert_eq!(p.phi(0.5), memory_phi(&s, 0.5).unwrap());

        let s = build_series(o(0.5), 1e-2, 1.0).unwrap();
        let p = prony_export(&s);
        for (n, (&c, &a)) in p.amplitudes.iter().zip(&p.rates).enumerate() {
            let k = (n + 1) as f64;
            assert_eq!(c, 6.0);
            assert!((a - (k * PI).powi(2)).abs() <= 1e-13 * a);
        }
    }

    #[test]
    fn step_examples() {
        let s = build_series(o(0.0), 1e-4, 1e-4).unwrap();
        let g = TimeGrid::new(vec![1e-12, 1e-4 - 1e-9, 1e-4, 1e-4 + 1e-9, 50.0]).unwrap();
        let r = step_response(&s, &g).unwrap();
        let v = r.values();
        assert!((v[0] - 1.0).abs() <= 1e-4 + 1e-5);
        assert!(v[4].abs() < 1e-12);
        let slope = (v[3] - v[1]) / 2e-9;
        assert!((slope / -112.84 - 1.0).abs() < 0.02, "{slope}");
        let bad = TimeGrid::new(vec![0.0, 1.0]).unwrap();
        assert!(step_response(&s, &bad).is_err());
    }

    #[test]
    fn unit_step_matches_relaxation() {
        let s = build_series(o(1.0), 1e-4, 1e-2).unwrap();
        let grid = TimeGrid::linear(0.0, 2.0, 200).unwrap();
        let input = SignalTrace::sample(grid.clone(), |_| 1.0).unwrap();
        let resp = convolve_response(&s, &input).unwrap();
        assert!(resp.under_resolved.is_some());
        for (k, (&t, &i)) in grid.times().iter().zip(resp.current.values()).enumerate().skip(1) {
            let g = relaxation_g(&s, t).unwrap();
            assert!((i - g).abs() <= 1e-5 + s.tail_tol(), "k {k}: {i} vs {g}");
        }
        assert_eq!(resp.current.values()[0], 1.0);
    }

    #[test]
    fn zero_and_scaled_inputs() {
        let s = build_series(o(0.0), 1e-3, 1e-2).unwrap();
        let grid = TimeGrid::linear(0.0, 1.0, 50).unwrap();
        let zero = SignalTrace::sample(grid.clone(), |_| 0.0).unwrap();
        let r = convolve_response(&s, &zero).unwrap();
        assert!(r.current.values().iter().all(|&v| v == 0.0));
        let unit = SignalTrace::sample(grid.clone(), |_| 1.0).unwrap();
        let three = SignalTrace::sample(grid.clone(), |_| 3.0).unwrap();
        let a = convolve_response(&s, &unit).unwrap();
        let b = convolve_response(&s, &three).unwrap();
        for (x, y) in a.current.values().iter().zip(b.current.values()) {
            assert!((3.0 * x - y).abs() <= 1e-14);
        }
    }

    #[test]
    fn ramp_has_closed_form() {
        // V = t gives I = t − Σ c_n (α t − 1 + e^{−α t})/α²
        let s = build_series(o(0.5), 1e-2, 1e-2).unwrap();
        let grid = TimeGrid::geometric(1e-3, 3.0, 40).unwrap();
        let mut times = vec![0.0];
        times.extend_from_slice(grid.times());
        let grid = TimeGrid::new(times).unwrap();
        let input = SignalTrace::sample(grid.clone(), |t| t).unwrap();
        let r = convolve_response(&s, &input).unwrap();
        for (&t, &i) in grid.times().iter().zip(r.current.values()) {
            let mem: f64 = s
                .rates()
                .iter()
                .map(|&a| 6.0 * (a * t - 1.0 + (-a * t).exp()) / (a * a))
                .sum();
            assert!((i - (t - mem)).abs() < 1e-12, "t {t}");
        }
    }

    #[test]
    fn policies_are_bit_identical() {
        let s = build_series(o(2.0), 1e-4, 1e-2).unwrap();
        assert!(s.len() > 4 * MODE_CHUNK);
        let grid = TimeGrid::linear(0.0, 1.0, 64).unwrap();
        let input = SignalTrace::sample(grid, |t| (3.0 * t).sin() + 0.5).unwrap();
        let a = convolve_response_with(&s, &input, Execution::Sequential).unwrap();
        let b = convolve_response_with(&s, &input, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }
}
