//! Bessel functions of the first kind and their modified counterparts on
//! the nonnegative real axis, for real order ν > −1.
//!
//! `J_ν` is evaluated in three regimes:
//!
//! * `x ≤ 30`: the power series, summed in double-double arithmetic so that
//!   the alternating cancellation (up to `e^x`) does not eat the result;
//! * `x > 30` and `x ≥ ν²/2`: the Hankel asymptotic expansion, truncated at
//!   its smallest term;
//! * otherwise (large orders only): Steed's continued-fraction method.
//!
//! `I_ν` is only exposed as `e^{-x} I_ν(x)`. Ratios `I_{ν+1}/I_ν` come from
//! the Gauss continued fraction, which never forms either function.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::dd::Dd;
use crate::special::{ln_gamma, recip_gamma};

const TAYLOR_MAX: f64 = 30.0;
const EPS: f64 = f64::EPSILON;

/// A validated Bessel order ν > −1.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Order(f64);

impl Order {
    pub fn new(nu: f64) -> Result<Self> {
        if !nu.is_finite() {
            return Err(Error::domain(format!("order must be finite, got {nu}")));
        }
        if nu <= -1.0 {
            return Err(Error::domain(format!("requires nu > -1, got {nu}")));
        }
        Ok(Order(nu))
    }

    #[inline]
    pub fn nu(self) -> f64 {
        self.0
    }

    /// The order ν + 1.
    pub fn succ(self) -> Order {
        Order(self.0 + 1.0)
    }

    /// `2(ν + 1)`, the weight appearing in the Laplace image.
    #[inline]
    pub(crate) fn two_nu_plus_two(self) -> f64 {
        2.0 * (self.0 + 1.0)
    }
}

impl TryFrom<f64> for Order {
    type Error = Error;
    fn try_from(nu: f64) -> Result<Self> {
        Order::new(nu)
    }
}

impl From<Order> for f64 {
    fn from(o: Order) -> f64 {
        o.0
    }
}

impl std::fmt::Display for Order {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A function value together with an estimate of its absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: f64,
    pub abs_error_bound: f64,
}

impl EvalResult {
    fn new(value: f64, abs_error_bound: f64) -> Self {
        EvalResult {
            value,
            abs_error_bound: abs_error_bound.abs(),
        }
    }
}

fn check_arg(x: f64) -> Result<()> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::domain(format!("argument must be finite and >= 0, got {x}")));
    }
    Ok(())
}

/// `J_ν(x)` for `x ≥ 0`.
///
/// At `x = 0` the value is 1 for ν = 0 and 0 for ν > 0; for −1 < ν < 0 the
/// function is unbounded there and a domain error is returned.
pub fn bessel_j(order: Order, x: f64) -> Result<EvalResult> {
    check_arg(x)?;
    let nu = order.nu();
    if x == 0.0 {
        return if nu == 0.0 {
            Ok(EvalResult::new(1.0, 0.0))
        } else if nu > 0.0 {
            Ok(EvalResult::new(0.0, 0.0))
        } else {
            Err(Error::domain(format!(
                "J_nu(0) is unbounded for -1 < nu < 0 (nu = {nu})"
            )))
        };
    }
    Ok(j_eval(nu, x))
}

/// `e^{-x} I_ν(x)` for `x ≥ 0`.
pub fn bessel_i_scaled(order: Order, x: f64) -> Result<EvalResult> {
    check_arg(x)?;
    let nu = order.nu();
    if x == 0.0 {
        return if nu == 0.0 {
            Ok(EvalResult::new(1.0, 0.0))
        } else if nu > 0.0 {
            Ok(EvalResult::new(0.0, 0.0))
        } else {
            Err(Error::domain(format!(
                "I_nu(0) is unbounded for -1 < nu < 0 (nu = {nu})"
            )))
        };
    }
    Ok(i_scaled_eval(nu, x))
}

/// `I_{ν+1}(x) / I_ν(x)` for `x > 0`.
///
/// Positive for every admissible order; strictly increasing in x and below 1
/// when ν ≥ −1/2. For −1 < ν < −1/2 it exceeds 1 and decreases toward 1.
pub fn modified_ratio(order: Order, x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::domain(format!("ratio requires x > 0, got {x}")));
    }
    Ok(i_ratio(order.nu(), x))
}

/// Laplace image `F̃_ν(s) = 2(ν+1)/(s√s) · I_{ν+1}(√s)/I_ν(√s)` for real `s > 0`.
pub fn laplace_image(order: Order, s: f64) -> Result<f64> {
    if !s.is_finite() || s <= 0.0 {
        return Err(Error::domain(format!("laplace image requires s > 0, got {s}")));
    }
    let r = s.sqrt();
    Ok(order.two_nu_plus_two() / (s * r) * i_ratio(order.nu(), r))
}

// ---------------------------------------------------------------------------
// J_ν

/// `J_ν(x)` for `x > 0` and any real ν with ν > −1 (callers also pass ν + 1).
pub(crate) fn j_eval(nu: f64, x: f64) -> EvalResult {
    debug_assert!(x > 0.0);
    if x <= TAYLOR_MAX {
        j_taylor(nu, x)
    } else if x >= 0.5 * nu * nu {
        j_hankel(nu, x)
    } else {
        j_steed(nu, x)
    }
}

#[inline]
pub(crate) fn j_value(nu: f64, x: f64) -> f64 {
    j_eval(nu, x).value
}

/// `(x/2)^ν / Γ(ν+1)`, computed in log space only when the direct form would
/// overflow.
fn series_prefactor(nu: f64, x: f64) -> f64 {
    if nu + 1.0 < 170.0 {
        let p = (0.5 * x).powf(nu);
        if p.is_finite() && p != 0.0 {
            return p * recip_gamma(nu + 1.0);
        }
    }
    (nu * (0.5 * x).ln() - ln_gamma(nu + 1.0)).exp()
}

fn j_taylor(nu: f64, x: f64) -> EvalResult {
    let y = Dd::prod(x, x).scale(0.25);
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    let mut abs_sum = 1.0;
    let mut k = 1.0_f64;
    loop {
        let denom = Dd::from_f64(k) * Dd::sum(nu, k);
        term = -(term * y) / denom;
        sum = sum + term;
        let t = term.hi.abs();
        abs_sum += t;
        if k * (k + nu) > y.hi && t <= 1e-34 * abs_sum {
            break;
        }
        k += 1.0;
        if k > 2000.0 {
            break;
        }
    }
    let pref = series_prefactor(nu, x);
    let value = pref * sum.to_f64();
    let err = 4.0 * EPS * value.abs() + pref.abs() * abs_sum * 1e-30;
    EvalResult::new(value, err)
}

/// `(cos πr, sin πr)` with the argument reduced exactly.
fn cos_sin_pi(r: f64) -> (f64, f64) {
    let r = r - 2.0 * (0.5 * r).round();
    let (s, c) = (PI * r).sin_cos();
    (c, s)
}

/// Hankel-expansion coefficients `P`, `Q` and the size of the last
/// retained term.
fn hankel_pq(nu: f64, x: f64) -> (f64, f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0_f64;
    let mut k = 1u32;
    let last = loop {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        let next = term * (mu - odd * odd) / (kf * 8.0 * x);
        if next == 0.0 {
            break 0.0;
        }
        // past the turning point the series diverges; stop at the smallest term
        if odd * odd > mu && next.abs() > term.abs() {
            break term.abs();
        }
        term = next;
        if k % 2 == 0 {
            p += if (k / 2) % 2 == 0 { term } else { -term };
        } else {
            q += if ((k - 1) / 2) % 2 == 0 { term } else { -term };
        }
        if term.abs() < 1e-17 * (p.abs() + q.abs()) || k >= 500 {
            break term.abs();
        }
        k += 1;
    };
    (p, q, last)
}

fn j_hankel(nu: f64, x: f64) -> EvalResult {
    let (p, q, last) = hankel_pq(nu, x);
    // χ = x − (ν/2 + 1/4)π, expanded so that x itself is never reduced by a
    // rounded multiple of π
    let (cphi, sphi) = cos_sin_pi(0.5 * nu + 0.25);
    let (sx, cx) = x.sin_cos();
    let cos_chi = cx * cphi + sx * sphi;
    let sin_chi = sx * cphi - cx * sphi;
    let amp = (2.0 / (PI * x)).sqrt();
    let value = amp * (p * cos_chi - q * sin_chi);
    let err = amp * (last + 4.0 * EPS * (p.abs() + q.abs()));
    EvalResult::new(value, err)
}

/// Steed's method (CF1 + CF2 with downward recurrence), valid for x ≥ 2, ν ≥ 0.
fn j_steed(nu: f64, x: f64) -> EvalResult {
    const FPMIN: f64 = 1e-300;
    const MAXIT: usize = 1_000_000;
    let nl = ((nu - x + 1.5).floor()).max(0.0) as usize;
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;

    // CF1: J'_ν / J_ν
    let mut isign = 1.0;
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    for _ in 0..MAXIT {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() < EPS {
            break;
        }
    }

    // downward recurrence to order μ
    let mut rjl = isign * 1e-200;
    let mut rjpl = h * rjl;
    let mut rjl1 = rjl;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
        if rjl.abs() > 1e200 {
            rjl *= 1e-200;
            rjpl *= 1e-200;
            rjl1 *= 1e-200;
        }
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;

    // CF2: p + iq
    let mut a = 0.25 - xmu2;
    let mut p = -0.5 * xi;
    let mut q = 1.0;
    let br = 2.0 * x;
    let mut bi = 2.0;
    let mut fct = a * xi / (p * p + q * q);
    let mut cr = br + q * fct;
    let mut ci = bi + p * fct;
    let mut den = br * br + bi * bi;
    let mut dr = br / den;
    let mut di = -bi / den;
    let mut dlr = cr * dr - ci * di;
    let mut dli = cr * di + ci * dr;
    let mut temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    for i in 2..MAXIT {
        a += 2.0 * (i as f64 - 1.0);
        bi += 2.0;
        dr = a * dr + br;
        di = a * di + bi;
        if dr.abs() + di.abs() < FPMIN {
            dr = FPMIN;
        }
        fct = a / (cr * cr + ci * ci);
        cr = br + cr * fct;
        ci = bi - ci * fct;
        if cr.abs() + ci.abs() < FPMIN {
            cr = FPMIN;
        }
        den = dr * dr + di * di;
        dr /= den;
        di /= -den;
        dlr = cr * dr - ci * di;
        dli = cr * di + ci * dr;
        temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        if (dlr - 1.0).abs() + dli.abs() < EPS {
            break;
        }
    }
    let gam = (p - f) / q;
    let rjmu = (w / ((p - f) * gam + q)).sqrt().copysign(rjl);
    let value = rjl1 * (rjmu / rjl);
    let amp = (2.0 / (PI * x)).sqrt();
    EvalResult::new(value, 64.0 * EPS * amp.max(value.abs()))
}

// ---------------------------------------------------------------------------
// I_ν

fn i_asymptotic_regime(nu: f64, x: f64) -> bool {
    x > 40.0_f64.max(nu * nu)
}

/// `Σ_k (−1)^k a_k(ν) / x^k`, the bracket of the large-x expansion of
/// `√(2πx) e^{−x} I_ν(x)`, with the size of its last term.
fn i_asymptotic_sum(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut sum = 1.0;
    let mut term = 1.0_f64;
    let mut k = 1u32;
    loop {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        let next = -term * (mu - odd * odd) / (kf * 8.0 * x);
        if next == 0.0 {
            return (sum, 0.0);
        }
        if odd * odd > mu && next.abs() > term.abs() {
            return (sum, term.abs());
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() || k > 500 {
            return (sum, term.abs());
        }
        k += 1;
    }
}

pub(crate) fn i_scaled_eval(nu: f64, x: f64) -> EvalResult {
    if i_asymptotic_regime(nu, x) {
        let (s, last) = i_asymptotic_sum(nu, x);
        let amp = 1.0 / (2.0 * PI * x).sqrt();
        return EvalResult::new(amp * s, amp * (last + 4.0 * EPS * s.abs()));
    }
    // positive-term series; track a log scale in case the partial sum grows large
    let y = 0.25 * x * x;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut log_scale = 0.0_f64;
    let mut k = 1.0_f64;
    loop {
        term *= y / (k * (nu + k));
        sum += term;
        if sum > 1e280 {
            sum *= 1e-280;
            term *= 1e-280;
            log_scale += 280.0 * std::f64::consts::LN_10;
        }
        if k * (k + nu) > y && term <= 1e-17 * sum {
            break;
        }
        k += 1.0;
    }
    let direct = if log_scale == 0.0 && x < 700.0 {
        let p = series_prefactor(nu, x) * (-x).exp();
        if p.is_finite() && p > 1e-300 {
            Some(p * sum)
        } else {
            None
        }
    } else {
        None
    };
    let value = direct.unwrap_or_else(|| {
        (nu * (0.5 * x).ln() - ln_gamma(nu + 1.0) - x + log_scale + sum.ln()).exp()
    });
    EvalResult::new(value, 8.0 * EPS * value * (1.0 + 0.1 * x.ln().max(0.0)))
}

/// `I_{ν+1}(x)/I_ν(x)` by the Gauss continued fraction
/// `1/(2(ν+1)/x + 1/(2(ν+2)/x + …))` (modified Lentz), switching to the
/// ratio of asymptotic expansions for large x.
pub(crate) fn i_ratio(nu: f64, x: f64) -> f64 {
    if i_asymptotic_regime(nu + 1.0, x) {
        let (a, _) = i_asymptotic_sum(nu + 1.0, x);
        let (b, _) = i_asymptotic_sum(nu, x);
        return a / b;
    }
    const TINY: f64 = 1e-300;
    let mut f = TINY;
    let mut c = f;
    let mut d = 0.0;
    let mut k = 1.0;
    loop {
        let b = 2.0 * (nu + k) / x;
        d = b + d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + 1.0 / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < EPS || k > 1e7 {
            break;
        }
        k += 1.0;
    }
    f
}
