//! Independent checks of the series against its Laplace image
//! `F̃_ν(s) = 2(ν+1) I_{ν+1}(√s)/(s√s I_ν(√s))`: Gaver–Stehfest inversion on
//! the real axis, and the closed-form image of the truncated series.

use std::f64::consts::LN_2;

use serde::Serialize;

use crate::bessel::{laplace_image, Order};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::grid::TimeGrid;
use crate::relaxation::{creep_f, DirichletSeries};
use crate::special::dd::Dd;

/// Gaver–Stehfest parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InversionConfig {
    term_count: usize,
    t_range: (f64, f64),
}

impl InversionConfig {
    /// `term_count` must be even and within `4..=20`.
    pub fn new(term_count: usize, t_range: (f64, f64)) -> Result<Self> {
        if term_count % 2 != 0 || !(4..=20).contains(&term_count) {
            return Err(Error::invalid(format!(
                "Gaver-Stehfest term count must be even and in [4, 20], got {term_count}"
            )));
        }
        let (a, b) = t_range;
        if !(a > 0.0 && b >= a && b.is_finite()) {
            return Err(Error::invalid(format!("invalid inversion range [{a}, {b}]")));
        }
        Ok(InversionConfig {
            term_count,
            t_range,
        })
    }

    pub fn term_count(&self) -> usize {
        self.term_count
    }

    pub fn t_range(&self) -> (f64, f64) {
        self.t_range
    }

    pub fn weights(&self) -> Vec<f64> {
        stehfest_weights(self.term_count)
    }
}

impl Default for InversionConfig {
    fn default() -> Self {
        InversionConfig {
            term_count: 16,
            t_range: (0.01, 2.0),
        }
    }
}

fn binomial(n: u32, k: u32) -> i128 {
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

/// `V_k · (M/2)!` for `k = 1..M`, exact. Each summand
/// `j^{M/2} (2j)! / ((M/2−j)! j! (j−1)! (k−j)! (2j−k)!)` times `(M/2)!` equals
/// `j^{M/2+1} C(M/2, j) C(2j, j) C(j, k−j)`.
fn stehfest_numerators(m: usize) -> Vec<i128> {
    let half = (m / 2) as u32;
    (1..=m as u32)
        .map(|k| {
            let acc: i128 = ((k + 1) / 2..=k.min(half))
                .map(|j| {
                    (j as i128).pow(half + 1)
                        * binomial(half, j)
                        * binomial(2 * j, j)
                        * binomial(j, k - j)
                })
                .sum();
            if (k + half) % 2 == 0 {
                acc
            } else {
                -acc
            }
        })
        .collect()
}

fn half_factorial(m: usize) -> f64 {
    (1..=m / 2).map(|k| k as f64).product()
}

fn dd_from_i128(n: i128) -> Dd {
    let hi = n as f64;
    Dd::sum(hi, (n - hi as i128) as f64)
}

/// Stehfest weights `V_1..V_M`.
pub fn stehfest_weights(m: usize) -> Vec<f64> {
    let d = half_factorial(m);
    stehfest_numerators(m)
        .into_iter()
        .map(|n| (dd_from_i128(n) / Dd::from_f64(d)).to_f64())
        .collect()
}

/// `f(t) ≈ (ln2/t) Σ_k V_k image(k ln2/t)`.
///
/// Weights are exact and the sum is accumulated in double-double, so the
/// result is limited by the rounding of the image values, amplified by
/// `Σ |V_k image(s_k)| / |f(t)|`.
pub fn gaver_stehfest_invert(
    image: impl Fn(f64) -> f64,
    t: f64,
    config: &InversionConfig,
) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("inversion time must be > 0, got {t}")));
    }
    let a = LN_2 / t;
    let mut acc = Dd::ZERO;
    for (i, n) in stehfest_numerators(config.term_count).into_iter().enumerate() {
        let s = a * (i + 1) as f64;
        let v = image(s);
        if !v.is_finite() {
            return Err(Error::domain(format!("image is not finite at s = {s:e}: {v}")));
        }
        acc = acc + dd_from_i128(n) * Dd::from_f64(v);
    }
    let sum = acc / Dd::from_f64(half_factorial(config.term_count));
    Ok((sum * Dd::from_f64(a)).to_f64())
}

/// Pointwise comparison of the series against the inverted image.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticsReport {
    pub nu: f64,
    pub t_values: Vec<f64>,
    pub series_values: Vec<f64>,
    pub inverted_values: Vec<f64>,
    pub max_abs_err: f64,
    pub mean_abs_err: f64,
}

pub fn oracle_compare(
    order: Order,
    grid: &TimeGrid,
    series: &DirichletSeries,
    config: &InversionConfig,
) -> Result<DiagnosticsReport> {
    oracle_compare_with(order, grid, series, config, Execution::default())
}

pub fn oracle_compare_with(
    order: Order,
    grid: &TimeGrid,
    series: &DirichletSeries,
    config: &InversionConfig,
    exec: Execution,
) -> Result<DiagnosticsReport> {
    if series.order() != order {
        return Err(Error::invalid("series order does not match"));
    }
    let image = |s: f64| laplace_image(order, s).unwrap_or(f64::NAN);
    let pairs: Vec<Result<(f64, f64)>> = exec.map_slice(grid.times(), |&t| {
        Ok((creep_f(series, t)?, gaver_stehfest_invert(image, t, config)?))
    });
    let pairs = pairs.into_iter().collect::<Result<Vec<_>>>()?;
    let (series_values, inverted_values): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    let errs: Vec<f64> = series_values
        .iter()
        .zip(&inverted_values)
        .map(|(a, b)| (a - b).abs())
        .collect();
    Ok(DiagnosticsReport {
        nu: order.nu(),
        t_values: grid.times().to_vec(),
        max_abs_err: errs.iter().copied().fold(0.0, f64::max),
        mean_abs_err: errs.iter().sum::<f64>() / errs.len() as f64,
        series_values,
        inverted_values,
    })
}

/// `1/s − Σ a_n/(s + α_n)`, the exact image of the truncated creep function.
pub fn forward_image_of_truncation(series: &DirichletSeries, s: f64) -> Result<f64> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::domain(format!("s must be > 0, got {s}")));
    }
    let sum: f64 = series
        .amplitudes()
        .iter()
        .zip(series.rates())
        .rev()
        .map(|(a, r)| a / (s + r))
        .sum();
    Ok(1.0 / s - sum)
}
