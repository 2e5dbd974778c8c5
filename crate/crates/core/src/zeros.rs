//! Positive zeros `j_{ν,n}` of `J_ν`.
//!
//! The first zeros (and every zero whose McMahon estimate is not yet
//! trustworthy) are found sequentially by a sign-change scan from the
//! previous zero. Once the asymptotic estimate is reliable, each remaining
//! zero is bracketed by `[g − π/2, g + π/2]` around its McMahon guess `g`
//! and refined independently, which is where the parallel work happens.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::bessel::{j_value, Order};
use crate::error::{Error, Result};
use crate::exec::Execution;

const SCAN_STEP: f64 = PI / 8.0;
const MAX_ITER: usize = 50;
/// Largest table the library will build.
pub const MAX_TABLE: usize = 1_000_000;

/// Ordered positive zeros of `J_ν` with the largest residual `|J_ν(j)|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroTable {
    order: Order,
    zeros: Vec<f64>,
    residual_bound: f64,
}

impl ZeroTable {
    pub fn order(&self) -> Order {
        self.order
    }

    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    /// Largest `|J_ν(j_{ν,n})|` over the table.
    pub fn residual_bound(&self) -> f64 {
        self.residual_bound
    }

    /// The largest tabulated zero.
    pub fn last(&self) -> f64 {
        *self.zeros.last().expect("tables are never empty")
    }

    /// Pole locations `s_{ν,n} = −j_{ν,n}²` of the Laplace image.
    pub fn poles(&self) -> Vec<f64> {
        self.zeros.iter().map(|j| -j * j).collect()
    }

    /// `|J_ν(j)|` for every zero, in order.
    pub fn residuals(&self) -> Vec<f64> {
        let nu = self.order.nu();
        self.zeros.iter().map(|&j| j_value(nu, j).abs()).collect()
    }
}

fn beta(nu: f64, n: usize) -> f64 {
    (n as f64 + 0.5 * nu - 0.25) * PI
}

fn mcmahon_two_term(nu: f64, n: usize) -> f64 {
    let b = beta(nu, n);
    let mu = 4.0 * nu * nu;
    b - (mu - 1.0) / (8.0 * b)
}

/// Four-term McMahon expansion, used as the Newton starting point.
fn mcmahon_refined(nu: f64, n: usize) -> f64 {
    let b = beta(nu, n);
    let mu = 4.0 * nu * nu;
    let e = 8.0 * b;
    let e2 = e * e;
    let m1 = mu - 1.0;
    b - m1 / e
        - 4.0 * m1 * (7.0 * mu - 31.0) / (3.0 * e * e2)
        - 32.0 * m1 * (83.0 * mu * mu - 982.0 * mu + 3779.0) / (15.0 * e * e2 * e2)
}

/// True once the asymptotic estimate is accurate enough that
/// `[g − π/2, g + π/2]` isolates exactly one zero.
fn mcmahon_reliable(nu: f64, n: usize) -> bool {
    n >= 3 && beta(nu, n) >= (12.0 * nu * nu).max(12.0)
}

/// Lower bound for the first zero: `j_{ν,1} > ν` for ν > 0, and
/// `j_{ν,1} > 2√(ν+1)` because `1/j_{ν,1}²` cannot exceed `Σ 1/j² = 1/(4(ν+1))`.
fn first_zero_lower_bound(nu: f64) -> f64 {
    nu.max(0.0).max(2.0 * (nu + 1.0).sqrt()) * (1.0 - 1e-9)
}

/// Classical McMahon estimate `β − (4ν² − 1)/(8β)`, `β = (n + ν/2 − 1/4)π`.
///
/// A non-positive estimate is replaced by the midpoint of the n-th
/// sign-change bracket found by scanning.
pub fn mcmahon_guess(order: Order, n: usize) -> f64 {
    let n = n.max(1);
    let nu = order.nu();
    let g = mcmahon_two_term(nu, n);
    if g > 0.0 {
        return g;
    }
    let mut from = first_zero_lower_bound(nu);
    let mut bracket = (from, from);
    for _ in 0..n {
        match scan_bracket(nu, from) {
            Some(b) => {
                bracket = b;
                from = b.1;
            }
            None => break,
        }
    }
    0.5 * (bracket.0 + bracket.1)
}

/// Steps right from `from` until `J_ν` changes sign.
fn scan_bracket(nu: f64, from: f64) -> Option<(f64, f64)> {
    let mut a = from;
    let mut fa = j_value(nu, a);
    for _ in 0..1_000_000 {
        let b = a + SCAN_STEP;
        let fb = j_value(nu, b);
        if fa == 0.0 {
            return Some((a, a));
        }
        if fa.signum() != fb.signum() {
            return Some((a, b));
        }
        a = b;
        fa = fb;
    }
    None
}

fn bisect_to(nu: f64, mut lo: f64, mut hi: f64, width: f64) -> (f64, f64) {
    let mut flo = j_value(nu, lo);
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        let fm = j_value(nu, mid);
        if fm == 0.0 {
            return (mid, mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Newton iteration on `J_ν` safeguarded by the sign-change bracket
/// `[lo, hi]`. Returns the root and `|J_ν(root)|`.
fn safeguarded_newton(nu: f64, lo: f64, hi: f64, start: f64) -> Result<(f64, f64)> {
    let (mut lo, mut hi) = (lo.min(hi), lo.max(hi));
    if lo == hi {
        return Ok((lo, j_value(nu, lo).abs()));
    }
    let f_lo = j_value(nu, lo);
    let mut x = if start > lo && start < hi {
        start
    } else {
        0.5 * (lo + hi)
    };
    for _ in 0..MAX_ITER {
        let f = j_value(nu, x);
        if f == 0.0 {
            return Ok((x, 0.0));
        }
        if f.signum() == f_lo.signum() {
            lo = x;
        } else {
            hi = x;
        }
        // J'_ν = (ν/x) J_ν − J_{ν+1}
        let d = nu / x * f - j_value(nu + 1.0, x);
        let step = f / d;
        let tol = 4.0 * f64::EPSILON * x.abs().max(1.0);
        if d != 0.0 && step.abs() <= tol {
            let next = (x - step).clamp(lo, hi);
            return Ok((next, j_value(nu, next).abs()));
        }
        let mut next = x - step;
        if !(d != 0.0 && next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if hi - lo <= tol {
            return Ok((next, j_value(nu, next).abs()));
        }
        x = next;
    }
    Err(Error::NoConvergence {
        lo,
        hi,
        index: None,
    })
}

/// Refines a zero of `J_ν` from a nearby guess.
///
/// The sign-change bracket nearest to `guess` (searched out to ±π/2) is
/// used to safeguard the Newton steps.
pub fn refine_zero(order: Order, guess: f64) -> Result<f64> {
    let nu = order.nu();
    if !(guess > 0.0 && guess.is_finite()) {
        return Err(Error::domain(format!("guess must be positive, got {guess}")));
    }
    let f0 = j_value(nu, guess);
    if f0 == 0.0 {
        return Ok(guess);
    }
    let h = PI / 32.0;
    for k in 1..=16 {
        let step = k as f64 * h;
        let right = guess + step;
        if j_value(nu, right).signum() != f0.signum() {
            return safeguarded_newton(nu, right - h, right, guess).map(|r| r.0);
        }
        let left = guess - step;
        if left > 0.0 && j_value(nu, left).signum() != f0.signum() {
            return safeguarded_newton(nu, left, left + h, guess).map(|r| r.0);
        }
    }
    Err(Error::NoConvergence {
        lo: (guess - FRAC_PI_2).max(0.0),
        hi: guess + FRAC_PI_2,
        index: None,
    })
}

fn with_index(e: Error, n: usize) -> Error {
    match e {
        Error::NoConvergence { lo, hi, .. } => Error::NoConvergence {
            lo,
            hi,
            index: Some(n),
        },
        other => other,
    }
}

/// Zero `n` located by scanning right from `from`.
fn scanned_zero(nu: f64, from: f64, n: usize) -> Result<(f64, f64)> {
    let (a, b) = scan_bracket(nu, from).ok_or(Error::NoConvergence {
        lo: from,
        hi: f64::INFINITY,
        index: Some(n),
    })?;
    let (lo, hi) = bisect_to(nu, a, b, 1e-3);
    safeguarded_newton(nu, lo, hi, 0.5 * (lo + hi)).map_err(|e| with_index(e, n))
}

/// Zero `n` from its McMahon bracket, or `None` if the bracket fails the
/// integrity check.
fn bracketed_zero(nu: f64, n: usize) -> Option<Result<(f64, f64)>> {
    let g = mcmahon_two_term(nu, n);
    let (lo, hi) = (g - FRAC_PI_2, g + FRAC_PI_2);
    let (flo, fhi) = (j_value(nu, lo), j_value(nu, hi));
    if flo.signum() == fhi.signum() {
        return None;
    }
    Some(safeguarded_newton(nu, lo, hi, mcmahon_refined(nu, n)).map_err(|e| with_index(e, n)))
}

/// The first `count` positive zeros of `J_ν`.
pub fn zero_table(order: Order, count: usize) -> Result<ZeroTable> {
    zero_table_with(order, count, Execution::default())
}

pub fn zero_table_with(order: Order, count: usize, exec: Execution) -> Result<ZeroTable> {
    if count == 0 {
        return Err(Error::invalid("zero table needs at least one zero"));
    }
    if count > MAX_TABLE {
        return Err(Error::Resource(format!(
            "zero table of {count} entries exceeds the limit of {MAX_TABLE}"
        )));
    }
    let nu = order.nu();
    let mut zeros = Vec::with_capacity(count);
    let mut residual = 0.0_f64;

    // sequential scan until the asymptotic brackets can be trusted
    let mut n = 1;
    while n <= count && !mcmahon_reliable(nu, n) {
        let from = match zeros.last() {
            Some(&p) => p + PI / 16.0,
            None => first_zero_lower_bound(nu),
        };
        let (z, r) = scanned_zero(nu, from, n)?;
        zeros.push(z);
        residual = residual.max(r);
        n += 1;
    }

    while n <= count {
        let first = n;
        let found = exec.map_range(count - first + 1, |i| bracketed_zero(nu, first + i));
        let mut failed_at = None;
        for (i, item) in found.into_iter().enumerate() {
            match item {
                Some(res) => {
                    let (z, r) = res?;
                    zeros.push(z);
                    residual = residual.max(r);
                }
                None => {
                    failed_at = Some(first + i);
                    break;
                }
            }
        }
        match failed_at {
            None => n = count + 1,
            Some(k) => {
                // fall back to scanning for this one, then retry brackets
                let from = zeros.last().map_or(first_zero_lower_bound(nu), |p| p + PI / 16.0);
                let (z, r) = scanned_zero(nu, from, k)?;
                zeros.push(z);
                residual = residual.max(r);
                n = k + 1;
            }
        }
    }

    for (i, w) in zeros.windows(2).enumerate() {
        if !(w[1] > w[0]) {
            return Err(Error::NoConvergence {
                lo: w[0],
                hi: w[1],
                index: Some(i + 2),
            });
        }
    }
    Ok(ZeroTable {
        order,
        zeros,
        residual_bound: residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(nu: f64) -> Order {
        Order::new(nu).unwrap()
    }

    /// Independent oracle: plain bisection on the Taylor series in f64,
    /// where no cancellation trouble arises for x ≤ 7.
    fn taylor_j(nu: f64, x: f64) -> f64 {
        let y = 0.25 * x * x;
        let mut term = 1.0 / crate::special::gamma(nu + 1.0);
        let mut sum = term;
        for k in 1..80 {
            let k = k as f64;
            term *= -y / (k * (nu + k));
            sum += term;
        }
        (0.5 * x).powf(nu) * sum
    }

    fn bisection_oracle(nu: f64, mut a: f64, mut b: f64) -> f64 {
        let fa = taylor_j(nu, a);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if taylor_j(nu, m).signum() == fa.signum() {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn oracle_values_are_frozen() {
        assert!((bisection_oracle(0.0, 2.0, 3.0) - 2.404_825_557_695_773).abs() < 1e-14);
        assert!((bisection_oracle(0.0, 5.0, 6.0) - 5.520_078_110_286_311).abs() < 1e-13);
        assert!((bisection_oracle(1.0, 3.5, 4.2) - 3.831_705_970_207_512).abs() < 1e-14);
    }

    #[test]
    fn mcmahon_examples() {
        assert_eq!(mcmahon_guess(o(0.5), 3), 3.0 * PI);
        assert!((mcmahon_guess(o(-0.5), 1) - FRAC_PI_2).abs() < 1e-15);
        let g = mcmahon_guess(o(0.0), 1);
        let b = 0.75 * PI;
        assert!((g - (b + 1.0 / (8.0 * b))).abs() < 1e-15);
        assert!((g - 2.404_825_557_695_773).abs() < 5e-3);
    }

    #[test]
    fn refine_examples() {
        assert!((refine_zero(o(0.5), 3.1).unwrap() - PI).abs() < 1e-13);
        assert!((refine_zero(o(0.0), 2.41).unwrap() - 2.404_825_557_695_773).abs() < 1e-12);
        assert!((refine_zero(o(1.0), 3.83).unwrap() - 3.831_705_970_207_512).abs() < 1e-12);
        assert!(refine_zero(o(0.0), -1.0).is_err());
    }

    #[test]
    fn table_examples() {
        let t = zero_table(o(0.5), 4).unwrap();
        for (n, z) in t.zeros().iter().enumerate() {
            assert!((z - (n + 1) as f64 * PI).abs() < 1e-12);
        }
        let t = zero_table(o(-0.5), 3).unwrap();
        for (n, z) in t.zeros().iter().enumerate() {
            assert!((z - (n as f64 + 0.5) * PI).abs() < 1e-12);
        }
        let t = zero_table(o(0.0), 2).unwrap();
        assert!((t.zeros()[0] - 2.404_825_557_695_773).abs() < 1e-11);
        assert!((t.zeros()[1] - 5.520_078_110_286_311).abs() < 1e-11);
        assert!(t.residual_bound() < 4e-16);
        assert!(zero_table(o(0.0), 0).is_err());
        assert!(matches!(zero_table(o(0.0), MAX_TABLE + 1), Err(Error::Resource(_))));
    }

    #[test]
    fn small_orders_near_minus_one() {
        // 1/j₁² dominates Σ 1/j² = 1/(4(ν+1)) as ν → −1
        for &nu in &[-0.99, -0.9, -0.7] {
            let t = zero_table(o(nu), 3).unwrap();
            let j1 = t.zeros()[0];
            assert!(j1 > 2.0 * (nu + 1.0).sqrt());
            assert!(j_value(nu, 0.5 * j1) > 0.0);
            assert!(t.residual_bound() < 1e-14);
        }
    }

    #[test]
    fn table_invariants() {
        for &nu in &[-0.5, 0.0, 1.0, 2.7, 3.7, 10.0] {
            let t = zero_table(o(nu), 400).unwrap();
            let z = t.zeros();
            assert!(z[0] > 0.0);
            assert!(z.windows(2).all(|w| w[1] > w[0]));
            let p = t.poles();
            assert!(p.windows(2).all(|w| w[1] < w[0]));
            // the gap approaches π like (4ν²−1)/(8πn²)
            let start = 10.max(((4.0 * nu * nu - 1.0).abs() / (0.2 * PI)).ceil() as usize);
            for n in start..z.len() {
                let gap = z[n] - z[n - 1];
                assert!((gap - PI).abs() < 0.05 / n as f64, "nu {nu} n {n} gap {gap}");
            }
            for &j in z {
                // within a couple of ulps of the true zero
                let ulp = f64::EPSILON * j;
                // Steed's method (large orders, moderate x) is good to ~1e-13 of the amplitude
                let allowed = if nu > 5.0 { 1e-13_f64.max(2.0 * ulp) } else { 2.0 * ulp };
                let r = j_value(nu, j).abs() / (2.0 / (PI * j)).sqrt();
                assert!(r <= allowed, "nu {nu} j {j} residual/amp {r:e}");
            }
        }
    }

    #[test]
    fn interlacing() {
        for &nu in &[-0.5, 0.0, 1.0, 2.7] {
            let a = zero_table(o(nu), 51).unwrap();
            let b = zero_table(o(nu + 1.0), 50).unwrap();
            for n in 0..50 {
                assert!(a.zeros()[n] < b.zeros()[n] && b.zeros()[n] < a.zeros()[n + 1]);
            }
        }
    }

    #[test]
    fn brackets_isolate_zeros() {
        for &nu in &[-0.5, 0.0, 0.5, 1.0, 3.0] {
            let t = zero_table(o(nu), 60).unwrap();
            for n in 2..=60 {
                let g = mcmahon_guess(o(nu), n);
                let inside = t
                    .zeros()
                    .iter()
                    .filter(|&&j| j > g - FRAC_PI_2 && j < g + FRAC_PI_2)
                    .count();
                assert_eq!(inside, 1, "nu {nu} n {n}");
            }
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let a = zero_table_with(o(0.3), 3000, Execution::Sequential).unwrap();
        let b = zero_table_with(o(0.3), 3000, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn large_order_first_zeros() {
        // j_{50,1} ≈ 57.1168 (standard tables)
        let t = zero_table(o(50.0), 3).unwrap();
        assert!((t.zeros()[0] - 57.116_899_160_119_5).abs() < 1e-9);
    }
}
