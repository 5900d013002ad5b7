//! Adaptive Gauss-Kronrod quadrature.
//!
//! A globally adaptive 21-point Gauss-Kronrod scheme in the style of
//! QUADPACK's `qag`: the panel with the largest error estimate is bisected
//! until the summed error meets the requested tolerance. Panel selection is
//! deterministic (ties resolve to the lowest index) so repeated runs are
//! bit-identical.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("quadrature did not converge after {subdivisions} subdivisions (estimate {value:e}, error {error:e})")]
    NoConvergence {
        value: f64,
        error: f64,
        subdivisions: usize,
    },
    #[error("integrand returned a non-finite value at x = {x:e}")]
    NonFinite { x: f64 },
    #[error("invalid integration interval [{lower:e}, {upper:e}]")]
    InvalidInterval { lower: f64, upper: f64 },
}

/// Requested accuracy: converged when `error <= max(absolute, relative * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub relative: f64,
    pub absolute: f64,
}

impl Tolerance {
    pub const fn relative(relative: f64) -> Self {
        Self {
            relative,
            absolute: 0.0,
        }
    }

    fn target(&self, value: f64) -> f64 {
        self.absolute.max(self.relative * value.abs())
    }
}

/// Result of an integration with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

impl Integral {
    pub fn scaled(self, factor: f64) -> Self {
        Self {
            value: self.value * factor,
            error: self.error * factor.abs(),
            evaluations: self.evaluations,
        }
    }
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    lower: f64,
    upper: f64,
    value: f64,
    error: f64,
    abs_value: f64,
}

/// One application of the 21-point Kronrod rule with the embedded 10-point
/// Gauss rule as error estimator.
fn kronrod21<F>(f: &mut F, lower: f64, upper: f64) -> Result<Panel, QuadratureError>
where
    F: FnMut(f64) -> f64,
{
    let center = 0.5 * (lower + upper);
    let half = 0.5 * (upper - lower);
    let eval = |f: &mut F, x: f64| -> Result<f64, QuadratureError> {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QuadratureError::NonFinite { x })
        }
    };

    let f_center = eval(f, center)?;
    let mut res_kronrod = f_center * WGK[10];
    let mut res_gauss = 0.0;
    let mut res_abs = f_center.abs() * WGK[10];
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];

    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = eval(f, center - dx)?;
        let f2 = eval(f, center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        // Gauss nodes sit at the odd Kronrod indices
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let scale = half.abs();
    let value = res_kronrod * half;
    res_abs *= scale;
    res_asc *= scale;
    let mut error = ((res_kronrod - res_gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }

    Ok(Panel {
        lower,
        upper,
        value,
        error,
        abs_value: res_abs,
    })
}

/// Adaptive integration over the finite interval split at `breakpoints`
/// (which must be sorted and contain at least the two end points).
pub fn integrate_panels<F>(
    mut f: F,
    breakpoints: &[f64],
    tol: Tolerance,
    max_panels: usize,
) -> Result<Integral, QuadratureError>
where
    F: FnMut(f64) -> f64,
{
    if breakpoints.len() < 2 {
        return Err(QuadratureError::InvalidInterval {
            lower: f64::NAN,
            upper: f64::NAN,
        });
    }
    let mut panels = Vec::with_capacity(max_panels.max(breakpoints.len()));
    for w in breakpoints.windows(2) {
        if !(w[0].is_finite() && w[1].is_finite()) || w[1] < w[0] {
            return Err(QuadratureError::InvalidInterval {
                lower: w[0],
                upper: w[1],
            });
        }
        if w[1] > w[0] {
            panels.push(kronrod21(&mut f, w[0], w[1])?);
        }
    }
    let mut evaluations = 21 * panels.len();

    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let abs_value: f64 = panels.iter().map(|p| p.abs_value).sum();
        let roundoff_floor = 50.0 * f64::EPSILON * abs_value;
        if error <= tol.target(value).max(roundoff_floor) {
            return Ok(Integral {
                value,
                error,
                evaluations,
            });
        }
        if panels.len() >= max_panels {
            return Err(QuadratureError::NoConvergence {
                value,
                error,
                subdivisions: panels.len(),
            });
        }

        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(bi, be), (i, p)| {
                if p.error > be {
                    (i, p.error)
                } else {
                    (bi, be)
                }
            });
        let p = panels[worst];
        let mid = 0.5 * (p.lower + p.upper);
        if mid <= p.lower || mid >= p.upper {
            // panel cannot be split further in floating point
            return Ok(Integral {
                value,
                error,
                evaluations,
            });
        }
        let left = kronrod21(&mut f, p.lower, mid)?;
        let right = kronrod21(&mut f, mid, p.upper)?;
        evaluations += 42;
        panels[worst] = left;
        panels.push(right);
    }
}

/// Adaptive integration over `[lower, upper]`.
pub fn integrate<F>(f: F, lower: f64, upper: f64, tol: Tolerance) -> Result<Integral, QuadratureError>
where
    F: FnMut(f64) -> f64,
{
    integrate_panels(f, &[lower, upper], tol, DEFAULT_MAX_PANELS)
}

pub const DEFAULT_MAX_PANELS: usize = 2000;

/// Integral over `[0, ∞)` through the map `x = scale·u/(1−u)`, `u ∈ [0, 1)`.
pub fn integrate_half_line<F>(mut f: F, scale: f64, tol: Tolerance) -> Result<Integral, QuadratureError>
where
    F: FnMut(f64) -> f64,
{
    let g = |u: f64| {
        let one_minus = 1.0 - u;
        let x = scale * u / one_minus;
        let jac = scale / (one_minus * one_minus);
        let v = f(x);
        // the integrand must decay faster than the Jacobian grows
        if v == 0.0 {
            0.0
        } else {
            v * jac
        }
    };
    integrate_panels(g, &[0.0, 0.25, 0.5, 0.75, 1.0], tol, DEFAULT_MAX_PANELS)
}

/// Integral of `e^{-t} g(t)` over `t ∈ [0, ∞)` for smooth, at most
/// polynomially growing `g`, truncated at `t = cutoff`.
///
/// `tail_bound(cutoff)` must bound the magnitude of the discarded tail; it is
/// added to the error estimate.
pub fn integrate_exp_weighted<F, B>(
    mut g: F,
    cutoff: f64,
    tail_bound: B,
    tol: Tolerance,
) -> Result<Integral, QuadratureError>
where
    F: FnMut(f64) -> f64,
    B: Fn(f64) -> f64,
{
    let mut breaks = vec![0.0];
    for b in [1.0, 3.0, 7.0, 15.0, 30.0] {
        if b < cutoff {
            breaks.push(b);
        }
    }
    breaks.push(cutoff);
    let mut integral = integrate_panels(|t| (-t).exp() * g(t), &breaks, tol, DEFAULT_MAX_PANELS)?;
    integral.error += tail_bound(cutoff).abs();
    Ok(integral)
}
