//! Riemann zeta function for real arguments above one.
//!
//! Direct summation of the first terms plus an Euler-Maclaurin tail. Used for
//! the odd zeta values in the low-temperature expansions and for the even
//! values that generate the Bernoulli-number series of the ideal-metal
//! correction factors.

/// B₂ₖ/(2k)! for k = 1..=7.
const BERNOULLI_OVER_FACTORIAL: [f64; 7] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40_320.0,
    5.0 / 66.0 / 3_628_800.0,
    -691.0 / 2730.0 / 479_001_600.0,
    7.0 / 6.0 / 87_178_291_200.0,
];

const DIRECT_TERMS: u32 = 12;

/// ζ(s) for real s > 1. Returns `f64::INFINITY` at s = 1 and NaN below.
pub fn zeta(s: f64) -> f64 {
    if s.is_nan() || s < 1.0 {
        return f64::NAN;
    }
    if s == 1.0 {
        return f64::INFINITY;
    }
    if s > 60.0 {
        // 2^{-s} is below the last bit
        return 1.0 + 2f64.powf(-s);
    }
    let n = f64::from(DIRECT_TERMS);
    // sum small terms first
    let mut sum: f64 = (1..DIRECT_TERMS).rev().map(|k| f64::from(k).powf(-s)).sum();
    sum += n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    // rising factorial s(s+1)...(s+2k-2) times N^{-s-2k+1}
    let mut rising = s;
    let mut power = n.powf(-s - 1.0);
    for (k, coeff) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        if k > 0 {
            let j = 2.0 * k as f64;
            rising *= (s + j - 1.0) * (s + j);
            power /= n * n;
        }
        sum += coeff * rising * power;
    }
    sum
}

/// Bernoulli number B₂ₖ/(2k)! from ζ(2k) = (−1)^{k+1} B₂ₖ (2π)^{2k} / (2(2k)!).
pub fn bernoulli_over_factorial(k: u32) -> f64 {
    assert!(k >= 1, "B_2k is defined here for k >= 1");
    let two_k = f64::from(2 * k);
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    sign * 2.0 * zeta(two_k) / (2.0 * std::f64::consts::PI).powf(two_k)
}
