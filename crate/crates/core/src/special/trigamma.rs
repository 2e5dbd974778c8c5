/// Trigamma ψ′(z) = Σ_{k≥0} 1/(z+k)² for z > 0.
///
/// Upward recurrence to z ≥ 20, then the Bernoulli asymptotic series.
pub fn trigamma(z: f64) -> f64 {
    if !(z > 0.0) {
        return f64::NAN;
    }
    let mut acc = 0.0;
    let mut z = z;
    while z < 20.0 {
        acc += 1.0 / (z * z);
        z += 1.0;
    }
    let w = 1.0 / (z * z);
    // 1/z + 1/(2z²) + Σ B_{2k}/z^{2k+1}
    let series = 1.0 / 6.0
        + w * (-1.0 / 30.0
            + w * (1.0 / 42.0 + w * (-1.0 / 30.0 + w * (5.0 / 66.0 + w * (-691.0 / 2730.0)))));
    acc + 1.0 / z + 0.5 * w + series * w / z
}
