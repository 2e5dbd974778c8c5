//! Sums over Bessel zeros: the Rayleigh–Sneddon sum `Σ 1/j² = 1/(4(ν+1))`,
//! the partial-fraction expansion of `J_{ν+1}/J_ν`, and the convergence
//! abscissa diagnostics of the associated Dirichlet series.

use std::f64::consts::PI;

use serde::Serialize;

use crate::bessel::{j_value, Order};
use crate::error::{Error, Result};
use crate::special::trigamma;
use crate::zeros::ZeroTable;

/// A truncated sum plus its tail estimate and a bracket half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SumEstimate {
    pub partial_sum: f64,
    pub tail_estimate: f64,
    pub tail_bound: f64,
    pub total: f64,
    pub n_terms: usize,
}

/// Tail `Σ_{n>N} 1/j_{ν,n}²` approximated by the McMahon surrogate
/// `Σ_{n>N} 1/((n + ν/2 − 1/4)π)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct TailBracket {
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
    /// Allowance for `1/j² − 1/β²`, which is `O(n⁻⁴)` per term.
    pub allowance: f64,
}

impl TailBracket {
    pub(crate) fn new(nu: f64, n_terms: usize) -> Self {
        let shift = 0.5 * nu - 0.25;
        let m = n_terms as f64 + shift;
        let pi2 = PI * PI;
        let estimate = trigamma(m + 1.0) / pi2;
        let lower = 1.0 / (pi2 * (m + 1.0));
        let upper = 1.0 / (pi2 * m);
        let mu1 = (4.0 * nu * nu - 1.0).abs();
        let allowance = mu1 / (6.0 * pi2 * pi2 * m * m * m);
        TailBracket {
            estimate,
            lower,
            upper,
            allowance,
        }
    }

    pub(crate) fn half_width(&self) -> f64 {
        (self.upper - self.estimate).max(self.estimate - self.lower) + self.allowance
    }

    /// Rigorous-ish upper bound for the true tail.
    pub(crate) fn upper_bound(&self) -> f64 {
        self.upper + self.allowance
    }
}

/// `S_ν = Σ 1/j_{ν,n}² = 1/(4(ν+1))`.
pub fn rayleigh_closed_form(order: Order) -> f64 {
    1.0 / (4.0 * (order.nu() + 1.0))
}

/// Partial sum of `1/j²` over the table, completed by the trigamma tail.
pub fn rayleigh_partial_sum(table: &ZeroTable) -> SumEstimate {
    let partial_sum = table
        .zeros()
        .iter()
        .rev()
        .map(|j| 1.0 / (j * j))
        .sum::<f64>();
    let tail = TailBracket::new(table.order().nu(), table.len());
    SumEstimate {
        partial_sum,
        tail_estimate: tail.estimate,
        tail_bound: tail.half_width(),
        total: partial_sum + tail.estimate,
        n_terms: table.len(),
    }
}

/// Serializable comparison of a sum estimate against the closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SumReport {
    pub nu: f64,
    pub n_terms: usize,
    pub partial_sum: f64,
    pub tail_estimate: f64,
    pub tail_bound: f64,
    pub total: f64,
    pub closed_form: f64,
    pub abs_error: f64,
}

impl SumReport {
    pub fn new(table: &ZeroTable) -> Self {
        let est = rayleigh_partial_sum(table);
        let closed_form = rayleigh_closed_form(table.order());
        SumReport {
            nu: table.order().nu(),
            n_terms: est.n_terms,
            partial_sum: est.partial_sum,
            tail_estimate: est.tail_estimate,
            tail_bound: est.tail_bound,
            total: est.total,
            closed_form,
            abs_error: (est.total - closed_form).abs(),
        }
    }
}

/// `J_{ν+1}(x)/J_ν(x)` evaluated directly.
pub fn bessel_ratio_direct(order: Order, x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain(format!("ratio requires x > 0, got {x}")));
    }
    let nu = order.nu();
    let den = j_value(nu, x);
    let num = j_value(nu + 1.0, x);
    if den.abs() < 1e-14 * (den.abs() + num.abs()) {
        return Err(Error::Pole(format!(
            "x = {x} is at a zero of J_{nu} (|J| = {:e})",
            den.abs()
        )));
    }
    Ok(num / den)
}

/// Partial-fraction series `Σ 2x/(j² − x²)` for `J_{ν+1}(x)/J_ν(x)`, with a
/// McMahon-surrogate tail correction.
pub fn calogero_ratio_series(order: Order, x: f64, table: &ZeroTable) -> Result<f64> {
    if table.order() != order {
        return Err(Error::invalid("zero table order does not match"));
    }
    if !(x > 0.0 && x < table.last()) {
        return Err(Error::domain(format!(
            "x = {x} must lie in (0, {}) for this table",
            table.last()
        )));
    }
    let nearest = table
        .zeros()
        .iter()
        .map(|j| (j - x).abs())
        .fold(f64::INFINITY, f64::min);
    if nearest < 1e-8 {
        return Err(Error::Pole(format!(
            "x = {x} is within {nearest:e} of a tabulated zero"
        )));
    }
    let x2 = x * x;
    let head: f64 = table
        .zeros()
        .iter()
        .rev()
        .map(|j| 2.0 * x / (j * j - x2))
        .sum();
    // Σ_{n>N} 2x/(j² − x²) ≈ 2x Σ 1/j² + 2x³ Σ 1/j⁴
    let tail = TailBracket::new(order.nu(), table.len());
    let m = table.len() as f64 + 0.5 * order.nu() - 0.25 + 0.5;
    let quartic = 1.0 / (3.0 * PI.powi(4) * m * m * m);
    Ok(head + 2.0 * x * tail.estimate + 2.0 * x * x2 * quartic)
}

/// Richardson-extrapolated `lim_{x→0} J_{ν+1}(x)/(2x J_ν(x))`, which equals
/// `1/(4(ν+1))`.
pub fn calogero_limit_check(order: Order) -> f64 {
    let xs = [1e-2, 1e-3, 1e-4];
    let h: Vec<f64> = xs.iter().map(|x| x * x).collect();
    let f: Vec<f64> = xs
        .iter()
        .map(|&x| bessel_ratio_direct(order, x).expect("no zeros near the origin") / (2.0 * x))
        .collect();
    // quadratic in h = x², evaluated at h = 0 (Lagrange form)
    let mut limit = 0.0;
    for i in 0..3 {
        let mut w = 1.0;
        for k in 0..3 {
            if k != i {
                w *= h[k] / (h[k] - h[i]);
            }
        }
        limit += w * f[i];
    }
    limit
}

/// Finite-N readings of the abscissae `d = limsup ln n / α_n` and
/// `σ = limsup ln|a_n| / α_n` for `a_n = 1/j²`, `α_n = j²`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceDiagnostics {
    pub d_sequence: Vec<(usize, f64)>,
    pub sigma_sequence: Vec<(usize, f64)>,
    /// Supremum over the last 10% of indices.
    pub d_estimate: f64,
    /// Supremum over the last 10% of indices.
    pub sigma_estimate: f64,
}

pub fn convergence_diagnostics(order: Order, table: &ZeroTable) -> Result<ConvergenceDiagnostics> {
    if table.order() != order {
        return Err(Error::invalid("zero table order does not match"));
    }
    if table.len() < 10 {
        return Err(Error::invalid(format!(
            "diagnostics need at least 10 zeros, got {}",
            table.len()
        )));
    }
    let mut d_sequence = Vec::with_capacity(table.len());
    let mut sigma_sequence = Vec::with_capacity(table.len());
    for (i, &j) in table.zeros().iter().enumerate() {
        let n = i + 1;
        let alpha = j * j;
        d_sequence.push((n, (n as f64).ln() / alpha));
        // ln|a_n| = ln(1/j²) = −ln α_n
        sigma_sequence.push((n, -alpha.ln() / alpha));
    }
    let window = (table.len() / 10).max(1);
    let sup = |s: &[(usize, f64)]| {
        s[s.len() - window..]
            .iter()
            .map(|p| p.1)
            .fold(f64::NEG_INFINITY, f64::max)
    };
    Ok(ConvergenceDiagnostics {
        d_estimate: sup(&d_sequence),
        sigma_estimate: sup(&sigma_sequence),
        d_sequence,
        sigma_sequence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeros::zero_table;

    fn o(nu: f64) -> Order {
        Order::new(nu).unwrap()
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(rayleigh_closed_form(o(0.0)), 0.25);
        assert_eq!(rayleigh_closed_form(o(-0.5)), 0.5);
        assert!((rayleigh_closed_form(o(0.5)) - 1.0 / 6.0).abs() < 1e-16);
        for &nu in &[-0.9, 0.0, 0.3, 7.0] {
            let s = rayleigh_closed_form(o(nu));
            assert!((s * 4.0 * (nu + 1.0) - 1.0).abs() < 4.0 * f64::EPSILON);
        }
    }

    #[test]
    fn trivial_cross_checks() {
        // cosine zeros (n − 1/2)π and sine zeros nπ, summed by brute force
        let cos: f64 = (1..2_000_000)
            .rev()
            .map(|n| 1.0 / ((n as f64 - 0.5) * PI).powi(2))
            .sum();
        assert!((cos - 0.5).abs() < 1e-6);
        let sin: f64 = (1..2_000_000).rev().map(|n| 1.0 / (n as f64 * PI).powi(2)).sum();
        assert!((sin - 1.0 / 6.0).abs() < 1e-6);
    }

    #[test]
    fn half_integer_partial_sum() {
        let t = zero_table(o(0.5), 4).unwrap();
        let est = rayleigh_partial_sum(&t);
        let want = (1.0 + 0.25 + 1.0 / 9.0 + 1.0 / 16.0) / (PI * PI);
        assert!((est.partial_sum - want).abs() < 1e-15);
        assert!((est.partial_sum - 0.144_24).abs() < 1e-5);
        assert!((est.total - 1.0 / 6.0).abs() <= est.tail_bound);
    }

    #[test]
    fn identity_with_500_zeros() {
        for &nu in &[-0.5, -0.1, 0.0, 0.5, 1.0, 2.0, 5.0, 10.0] {
            let t = zero_table(o(nu), 500).unwrap();
            let est = rayleigh_partial_sum(&t);
            let err = (est.total - rayleigh_closed_form(o(nu))).abs();
            assert!(est.tail_bound <= 1e-6, "nu {nu}");
            assert!(err <= est.tail_bound, "nu {nu}: err {err:e} bound {:e}", est.tail_bound);
            assert!(err <= 1e-6);
        }
    }

    #[test]
    fn partial_sums_increase() {
        let t = zero_table(o(1.0), 50).unwrap();
        let mut acc = 0.0;
        for j in t.zeros() {
            let next = acc + 1.0 / (j * j);
            assert!(next > acc);
            acc = next;
        }
        let tail = TailBracket::new(1.0, 50);
        assert!(tail.lower <= tail.estimate && tail.estimate <= tail.upper);
    }

    #[test]
    fn direct_ratio_examples() {
        let x = PI / 2.0;
        assert!((bessel_ratio_direct(o(0.5), x).unwrap() - 2.0 / PI).abs() < 1e-14);
        let x = PI / 4.0;
        assert!((bessel_ratio_direct(o(0.5), x).unwrap() - (4.0 / PI - 1.0)).abs() < 1e-14);
        // J_1(1)/J_0(1) from tabulated values
        let want = 0.440_050_585_744_933_5 / 0.765_197_686_557_966_6;
        assert!((bessel_ratio_direct(o(0.0), 1.0).unwrap() - want).abs() < 1e-14);
        assert!((want - 0.575_081).abs() < 1e-6);
        assert!(matches!(bessel_ratio_direct(o(0.5), PI), Err(Error::Pole(_))));
    }

    #[test]
    fn partial_fraction_examples() {
        let t = zero_table(o(0.5), 2000).unwrap();
        let v = calogero_ratio_series(o(0.5), PI / 2.0, &t).unwrap();
        assert!((v - 2.0 / PI).abs() < 1e-5);
        let t0 = zero_table(o(0.0), 2000).unwrap();
        let small = calogero_ratio_series(o(0.0), 1e-6, &t0).unwrap();
        assert!((small - 0.5e-6).abs() < 1e-12);
        let one = calogero_ratio_series(o(0.0), 1.0, &t0).unwrap();
        assert!((one - bessel_ratio_direct(o(0.0), 1.0).unwrap()).abs() < 1e-5);
        let j1 = t0.zeros()[0];
        assert!(matches!(
            calogero_ratio_series(o(0.0), j1 + 1e-10, &t0),
            Err(Error::Pole(_))
        ));
        assert!(calogero_ratio_series(o(0.0), t0.last() + 1.0, &t0).is_err());
        assert!(calogero_ratio_series(o(1.0), 1.0, &t0).is_err());
    }

    #[test]
    fn partial_fraction_matches_direct_on_grid() {
        for &nu in &[0.0, 1.3] {
            let t = zero_table(o(nu), 2000).unwrap();
            let top = t.zeros()[4];
            let mut worst = 0.0_f64;
            for i in 1..=50 {
                let mut x = top * i as f64 / 51.0;
                if t.zeros().iter().any(|j| (j - x).abs() < 1e-3) {
                    x += 2e-3;
                }
                let a = calogero_ratio_series(o(nu), x, &t).unwrap();
                let b = bessel_ratio_direct(o(nu), x).unwrap();
                worst = worst.max((a - b).abs());
            }
            assert!(worst <= 1e-5, "nu {nu}: {worst:e}");
        }
    }

    #[test]
    fn limit_examples() {
        assert!((calogero_limit_check(o(0.0)) - 0.25).abs() < 1e-10);
        assert!((calogero_limit_check(o(1.0)) - 0.125).abs() < 1e-10);
        assert!((calogero_limit_check(o(-0.9)) - 2.5).abs() < 1e-9);
        assert!((calogero_limit_check(o(4.0)) - 0.05).abs() < 1e-10);
    }

    #[test]
    fn diagnostics_examples() {
        let t = zero_table(o(0.0), 100).unwrap();
        let d = convergence_diagnostics(o(0.0), &t).unwrap();
        let j100 = t.zeros()[99];
        assert!((j100 - 99.75 * PI).abs() < 1e-2);
        assert!((d.d_sequence[99].1 - 100f64.ln() / (j100 * j100)).abs() < 1e-18);
        assert!((d.d_sequence[99].1 - 4.7e-5).abs() < 1e-6);

        let t = zero_table(o(0.5), 10).unwrap();
        let d = convergence_diagnostics(o(0.5), &t).unwrap();
        assert!((d.d_sequence[9].1 - 2.333e-3).abs() < 1e-6);
        for (dn, sn) in d.d_sequence.iter().zip(&d.sigma_sequence) {
            let j = t.zeros()[dn.0 - 1];
            assert!((sn.1 + (j * j).ln() / (j * j)).abs() < 1e-18);
            assert!(sn.1 < 0.0);
        }
        assert!(convergence_diagnostics(o(0.5), &zero_table(o(0.5), 9).unwrap()).is_err());
    }

    #[test]
    fn diagnostics_decrease_toward_zero() {
        for &nu in &[0.0, 0.5, 2.0] {
            let t = zero_table(o(nu), 1000).unwrap();
            let d = convergence_diagnostics(o(nu), &t).unwrap();
            assert!(d.d_estimate <= 1e-3 && d.d_estimate > 0.0);
            assert!(d.sigma_estimate <= 1e-3);
            for w in d.d_sequence[2..].windows(2) {
                assert!(w[1].1 < w[0].1);
            }
        }
    }
}
