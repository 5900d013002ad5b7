//! Closed forms and asymptotic expansions of the atom-wall interaction.
//!
//! Ideal metal with a static atom: 𝓕 = E_CP·η(τ), F = F_CP·κ(τ),
//! S = (3k_B/2a³)α(0)·σ(τ), where σ = dη/dτ and κ = η − τσ/4.
//! Low-temperature and perturbative results cover the plasma wall and the
//! single-oscillator atom to second order in the small parameters.

use std::f64::consts::PI;

use thiserror::Error;

use crate::atoms::{geometry_params, AtomError, AtomModel, OscillatorGeometry};
use crate::materials::WallModel;
use crate::special::zeta;
use crate::units::{C, HBAR, K_B};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AsymptoticError {
    #[error("dimensionless temperature must be non-negative, got {0}")]
    NegativeTau(f64),
    #[error("separation must be positive, got {0:e} m")]
    NonPositiveSeparation(f64),
    #[error("temperature must be non-negative, got {0} K")]
    NegativeTemperature(f64),
    #[error(transparent)]
    Atom(#[from] AtomError),
}

/// Below this τ the factors are evaluated from their Bernoulli-number series,
/// which converge for τ < 2π and avoid the cancellation of the closed forms.
pub const SERIES_BRANCH_TAU: f64 = 1.0;

/// Upper edge of the small-parameter window used by the validity flags.
pub const SMALL_PARAMETER_LIMIT: f64 = 0.3;
/// Classical expressions are flagged below this τ.
pub const CLASSICAL_TAU: f64 = 10.0;

fn check_tau(tau: f64) -> Result<(), AsymptoticError> {
    if tau >= 0.0 && !tau.is_nan() {
        Ok(())
    } else {
        Err(AsymptoticError::NegativeTau(tau))
    }
}

/// τ = 4πk_B aT/(ħc).
pub fn dimensionless_temperature(a: f64, temperature: f64) -> f64 {
    4.0 * PI * K_B * a * temperature / (HBAR * C)
}

/// E_CP = −3ħcα(0)/(8πa⁴)
pub fn casimir_polder_energy(alpha0: f64, a: f64) -> f64 {
    -3.0 * HBAR * C * alpha0 / (8.0 * PI * a.powi(4))
}

/// F_CP = −3ħcα(0)/(2πa⁵)
pub fn casimir_polder_force(alpha0: f64, a: f64) -> f64 {
    -3.0 * HBAR * C * alpha0 / (2.0 * PI * a.powi(5))
}

/// Σ_{k≥k0} c_k(τ/2π)^{2k}·weight(k), c_k = (−1)^{k+1}·2ζ(2k)(2k−2)(2k−3).
fn bernoulli_series(tau: f64, k0: u32, weight: impl Fn(f64) -> f64) -> f64 {
    let x2 = (tau / (2.0 * PI)).powi(2);
    let mut power = x2.powi(k0 as i32);
    let mut sum = 0.0;
    for k in k0..80 {
        let kf = f64::from(k);
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let term = sign * 2.0 * zeta(2.0 * kf) * (2.0 * kf - 2.0) * (2.0 * kf - 3.0) * weight(kf) * power;
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
        power *= x2;
    }
    sum
}

struct Exponentials {
    q: f64,
    d: f64,
}

impl Exponentials {
    /// q = e^{−τ}, d = 1 − e^{−τ}
    fn new(tau: f64) -> Self {
        Self {
            q: (-tau).exp(),
            d: -(-tau).exp_m1(),
        }
    }

    /// e^τ(e^{2τ} + 4e^τ + 1)/(e^τ − 1)⁴
    fn quartic(&self) -> f64 {
        let q = self.q;
        q * (1.0 + 4.0 * q + q * q) / self.d.powi(4)
    }
}

fn eta_closed(tau: f64) -> f64 {
    let Exponentials { q, d } = Exponentials::new(tau);
    tau / 6.0 * (1.0 + 2.0 * q / d + 2.0 * tau * q / (d * d) + tau * tau * q * (1.0 + q) / d.powi(3))
}

fn kappa_closed(tau: f64) -> f64 {
    0.75 * eta_closed(tau) + tau.powi(4) * Exponentials::new(tau).quartic() / 24.0
}

fn sigma_closed(tau: f64) -> f64 {
    eta_closed(tau) / tau - tau.powi(3) * Exponentials::new(tau).quartic() / 6.0
}

/// η − 1, accurate even where η rounds to one.
pub fn eta_correction(tau: f64) -> Result<f64, AsymptoticError> {
    check_tau(tau)?;
    Ok(if tau < SERIES_BRANCH_TAU {
        bernoulli_series(tau, 2, |_| 1.0) / 6.0
    } else {
        eta_closed(tau) - 1.0
    })
}

/// κ − 1, accurate even where κ rounds to one.
pub fn kappa_correction(tau: f64) -> Result<f64, AsymptoticError> {
    check_tau(tau)?;
    Ok(if tau < SERIES_BRANCH_TAU {
        -bernoulli_series(tau, 3, |k| 2.0 * k - 4.0) / 24.0
    } else {
        kappa_closed(tau) - 1.0
    })
}

/// Free-energy correction factor 𝓕/E_CP for an ideal metal and a static atom.
pub fn eta(tau: f64) -> Result<f64, AsymptoticError> {
    Ok(1.0 + eta_correction(tau)?)
}

/// Force correction factor F/F_CP.
pub fn kappa(tau: f64) -> Result<f64, AsymptoticError> {
    Ok(1.0 + kappa_correction(tau)?)
}

/// Entropy factor: S = (3k_B/2a³)α(0)σ.
pub fn sigma(tau: f64) -> Result<f64, AsymptoticError> {
    check_tau(tau)?;
    Ok(if tau == 0.0 {
        0.0
    } else if tau < SERIES_BRANCH_TAU {
        bernoulli_series(tau, 2, |k| 2.0 * k) / (6.0 * tau)
    } else {
        sigma_closed(tau)
    })
}

/// η = 1 − τ⁴/2160 + τ⁶/15120 − τ⁸/241920
pub fn eta_series(tau: f64) -> f64 {
    1.0 + eta_series_correction(tau)
}

/// The terms of [`eta_series`] beyond the leading 1.
pub fn eta_series_correction(tau: f64) -> f64 {
    let t2 = tau * tau;
    t2 * t2 * (-1.0 / 2160.0 + t2 * (1.0 / 15120.0 - t2 / 241_920.0))
}

/// κ = 1 − τ⁶/30240 + τ⁸/241920
///
/// The τ⁸ term is positive: it follows from κ = η − τη′/4 applied to the η
/// series.
pub fn kappa_series(tau: f64) -> f64 {
    1.0 + kappa_series_correction(tau)
}

/// The terms of [`kappa_series`] beyond the leading 1.
pub fn kappa_series_correction(tau: f64) -> f64 {
    let t2 = tau * tau;
    t2 * t2 * t2 * (-1.0 / 30240.0 + t2 / 241_920.0)
}

/// σ = −τ³/540 + τ⁵/2520
pub fn sigma_series(tau: f64) -> f64 {
    let t2 = tau * tau;
    tau * t2 * (-1.0 / 540.0 + t2 / 2520.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrectionFactors {
    pub tau: f64,
    pub eta: f64,
    pub kappa: f64,
    pub sigma: f64,
}

pub fn correction_factors(tau: f64) -> Result<CorrectionFactors, AsymptoticError> {
    Ok(CorrectionFactors {
        tau,
        eta: eta(tau)?,
        kappa: kappa(tau)?,
        sigma: sigma(tau)?,
    })
}

/// Ideal metal + static atom: (𝓕, F, S) in SI from the correction factors.
pub fn ideal_metal_static(alpha0: f64, a: f64, temperature: f64) -> Result<(f64, f64, f64), AsymptoticError> {
    check_scene(a, temperature)?;
    let f = correction_factors(dimensionless_temperature(a, temperature))?;
    Ok((
        casimir_polder_energy(alpha0, a) * f.eta,
        casimir_polder_force(alpha0, a) * f.kappa,
        1.5 * K_B * alpha0 / a.powi(3) * f.sigma,
    ))
}

fn check_scene(a: f64, temperature: f64) -> Result<(), AsymptoticError> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(AsymptoticError::NonPositiveSeparation(a));
    }
    if !(temperature >= 0.0) {
        return Err(AsymptoticError::NegativeTemperature(temperature));
    }
    Ok(())
}

/// A value from an expansion together with whether its inputs lie inside the
/// window where the expansion is meaningful.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub within_validity: bool,
}

fn small(g: &OscillatorGeometry) -> bool {
    g.beta_a < SMALL_PARAMETER_LIMIT && g.delta0_over_a < SMALL_PARAMETER_LIMIT
}

/// 1 − (20/3)β_A² − (8/5)δ₀/a + (62/21)(δ₀/a)²
pub fn energy_bracket(g: &OscillatorGeometry) -> f64 {
    let (b, d) = (g.beta_a, g.delta0_over_a);
    1.0 - 20.0 / 3.0 * b * b - 1.6 * d + 62.0 / 21.0 * d * d
}

/// 1 − 10β_A² − 2δ₀/a + (31/7)(δ₀/a)²
pub fn force_bracket(g: &OscillatorGeometry) -> f64 {
    let (b, d) = (g.beta_a, g.delta0_over_a);
    1.0 - 10.0 * b * b - 2.0 * d + 31.0 / 7.0 * d * d
}

/// Zero-temperature energy to second order in β_A and δ₀/a.
pub fn perturbative_energy(a: f64, atom: &AtomModel, wall: &WallModel) -> Result<Estimate, AsymptoticError> {
    let g = geometry_params(atom, wall, a)?;
    Ok(Estimate {
        value: casimir_polder_energy(atom.static_polarizability(), a) * energy_bracket(&g),
        within_validity: small(&g),
    })
}

/// Zero-temperature force to second order in β_A and δ₀/a.
pub fn perturbative_force(a: f64, atom: &AtomModel, wall: &WallModel) -> Result<Estimate, AsymptoticError> {
    let g = geometry_params(atom, wall, a)?;
    Ok(Estimate {
        value: casimir_polder_force(atom.static_polarizability(), a) * force_bracket(&g),
        within_validity: small(&g),
    })
}

/// Low-temperature results for a plasma wall and a single-oscillator atom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalCorrection {
    pub tau: f64,
    pub geometry: OscillatorGeometry,
    /// Δ_T𝓕, J
    pub free_energy: f64,
    /// Δ_TF, N
    pub force: f64,
    /// S, J/K
    pub entropy: f64,
    pub within_validity: bool,
}

struct LowT {
    t: f64,
    b2: f64,
    d: f64,
    z5: f64,
    z7: f64,
}

impl LowT {
    fn new(tau: f64, g: &OscillatorGeometry) -> Self {
        Self {
            t: tau,
            b2: g.beta_a * g.beta_a,
            d: g.delta0_over_a,
            z5: zeta(5.0),
            z7: zeta(7.0),
        }
    }

    /// Braces of Δ_T𝓕 = (ħcα(0)/128πa⁴)·τ⁴·{…}
    fn free_energy_bracket(&self) -> f64 {
        let LowT { t, b2, d, z5, z7 } = *self;
        let t2 = t * t;
        1.0 / 45.0 - t2 / 315.0 * (1.0 - 10.0 / 3.0 * b2) + t2 * t2 / 5040.0 * (1.0 - 84.0 / 5.0 * b2 + 56.0 * b2 * b2)
            - t * d * (3.0 * z5 / PI.powi(4) + b2 * t2 * 45.0 * z7 / (2.0 * PI.powi(6)) - t2 * t / 1350.0)
            - t2 * d * d * (5.0 / 189.0 - 45.0 * z7 / (4.0 * PI.powi(6)) * t + (1.0 + 50.0 * b2) * t2 / 1800.0)
    }

    /// Brackets of Δ_TF = (ħcα(0)/128πa⁵)·τ⁶·[…], the exact −∂/∂a of the
    /// free-energy expression (τβ_A and τδ₀/a do not depend on a).
    fn force_bracket(&self) -> f64 {
        let LowT { t, b2, d, z7, .. } = *self;
        let t2 = t * t;
        2.0 / 315.0
            - t2 / 30.0 * (1.0 / 42.0 - b2 / 5.0)
            - t2 * d / 450.0
            - t * d * d * (45.0 * z7 / (4.0 * PI.powi(6)) - t / 900.0)
    }

    /// Brackets of S = −(k_Bα(0)/32a³)·τ³·[…]
    fn entropy_bracket(&self) -> f64 {
        let LowT { t, b2, d, z5, .. } = *self;
        let t2 = t * t;
        4.0 / 45.0
            - 2.0 * t2 / 105.0 * (1.0 - 10.0 / 3.0 * b2)
            - t * d * 15.0 * z5 / PI.powi(4)
            - 10.0 / 63.0 * t2 * d * d
    }
}

pub fn low_temperature(
    a: f64,
    temperature: f64,
    atom: &AtomModel,
    wall: &WallModel,
) -> Result<ThermalCorrection, AsymptoticError> {
    check_scene(a, temperature)?;
    let g = geometry_params(atom, wall, a)?;
    let tau = dimensionless_temperature(a, temperature);
    let alpha0 = atom.static_polarizability();
    let s = LowT::new(tau, &g);
    let prefactor = HBAR * C * alpha0 / (128.0 * PI * a.powi(4));
    Ok(ThermalCorrection {
        tau,
        geometry: g,
        free_energy: prefactor * tau.powi(4) * s.free_energy_bracket(),
        force: prefactor / a * tau.powi(6) * s.force_bracket(),
        entropy: -K_B * alpha0 / (32.0 * a.powi(3)) * tau.powi(3) * s.entropy_bracket(),
        within_validity: tau < 1.0 && small(&g),
    })
}

/// Δ_T𝓕 at low temperature.
pub fn low_t_free_energy_correction(
    a: f64,
    temperature: f64,
    atom: &AtomModel,
    wall: &WallModel,
) -> Result<Estimate, AsymptoticError> {
    let r = low_temperature(a, temperature, atom, wall)?;
    Ok(Estimate {
        value: r.free_energy,
        within_validity: r.within_validity,
    })
}

/// Δ_TF at low temperature.
pub fn low_t_force_correction(
    a: f64,
    temperature: f64,
    atom: &AtomModel,
    wall: &WallModel,
) -> Result<Estimate, AsymptoticError> {
    let r = low_temperature(a, temperature, atom, wall)?;
    Ok(Estimate {
        value: r.force,
        within_validity: r.within_validity,
    })
}

/// Entropy at low temperature.
pub fn low_t_entropy(
    a: f64,
    temperature: f64,
    atom: &AtomModel,
    wall: &WallModel,
) -> Result<Estimate, AsymptoticError> {
    let r = low_temperature(a, temperature, atom, wall)?;
    Ok(Estimate {
        value: r.entropy,
        within_validity: r.within_validity,
    })
}

/// High-temperature (classical) limits. They hold for real metals as well as
/// for the ideal one, since only the zero-frequency TM term survives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalLimits {
    pub tau: f64,
    pub free_energy: f64,
    pub force: f64,
    pub entropy: f64,
    pub within_validity: bool,
}

pub fn classical_limits(a: f64, temperature: f64, atom: &AtomModel) -> Result<ClassicalLimits, AsymptoticError> {
    check_scene(a, temperature)?;
    let alpha0 = atom.static_polarizability();
    let tau = dimensionless_temperature(a, temperature);
    Ok(ClassicalLimits {
        tau,
        free_energy: -K_B * temperature * alpha0 / (4.0 * a.powi(3)),
        force: -3.0 * K_B * temperature * alpha0 / (4.0 * a.powi(4)),
        entropy: -K_B * alpha0 / (4.0 * a.powi(3)),
        within_validity: tau >= CLASSICAL_TAU,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate_half_line, Tolerance};
    use crate::units::MICROMETRE;
    use proptest::prelude::*;

    /// η from its defining primed sum, (τ/6)Σ' e^{−x}(x² + 2x + 2), x = lτ.
    fn eta_sum(tau: f64) -> f64 {
        let f = |x: f64| (-x).exp() * (x * x + 2.0 * x + 2.0);
        let mut s = 0.5 * f(0.0);
        let mut l = 1.0;
        loop {
            let t = f(l * tau);
            s += t;
            if t < 1e-20 * s {
                break;
            }
            l += 1.0;
        }
        tau / 6.0 * s
    }

    /// dη/dτ from the same sum differentiated term by term.
    fn sigma_sum(tau: f64) -> f64 {
        let g = |x: f64| (-x).exp() * (x * x + 2.0 * x + 2.0 - x * x * x);
        let mut s = 0.5 * g(0.0);
        let mut l = 1.0;
        loop {
            let t = g(l * tau);
            s += t;
            if t.abs() < 1e-22 && l * tau > 10.0 {
                break;
            }
            l += 1.0;
        }
        s / 6.0
    }

    /// Closed form of the inner integral for an ideal metal and an
    /// oscillator atom, in units of α(0):
    /// H₀(x) = −(2/(1 + β²x²))e^{−x}(2 + 2x + x²).
    fn h0(x: f64, beta: f64) -> f64 {
        -2.0 / (1.0 + beta * beta * x * x) * (-x).exp() * (2.0 + 2.0 * x + x * x)
    }

    #[test]
    fn limits_and_examples() {
        assert_eq!(eta(0.0).unwrap(), 1.0);
        assert_eq!(kappa(0.0).unwrap(), 1.0);
        assert_eq!(sigma(0.0).unwrap(), 0.0);
        assert!(eta(-0.1).is_err() && kappa(-1.0).is_err() && sigma(f64::NAN).is_err());
        let e = eta(0.5).unwrap();
        assert!((e - (1.0 - 0.5f64.powi(4) / 2160.0 + 0.5f64.powi(6) / 15120.0)).abs() < 2e-8);
        assert!((e - 0.999_972).abs() < 1e-6);
        assert!((eta(6.0).unwrap() - 1.1250).abs() < 1e-4, "{}", eta(6.0).unwrap());
        assert!((kappa_correction(0.5).unwrap() + 0.5f64.powi(6) / 30240.0).abs() < 2e-8);
        assert!((kappa(30.0).unwrap() - 3.75).abs() < 1e-6);
        assert!((sigma(0.1).unwrap() + 1.85e-6).abs() < 1e-8);
        assert!((sigma(30.0).unwrap() - 1.0 / 6.0).abs() < 1e-6);
        assert!((eta(1000.0).unwrap() / 1000.0 - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn eta_matches_defining_sum() {
        for tau in [0.05, 0.1, 0.3, 0.99, 1.0, 1.01, 2.0, 5.0, 20.0, 50.0] {
            let (e, s) = (eta(tau).unwrap(), eta_sum(tau));
            assert!((e - s).abs() < 1e-13 * s, "tau {tau}: {e} vs {s}");
        }
    }

    #[test]
    fn sigma_is_derivative_of_eta() {
        // below τ ≈ 0.3 the term-by-term sum cancels to worse than 1e-10;
        // those points use the closed forms evaluated at 50 digits instead
        for (tau, exact) in [
            (0.05, -2.313_574_993_761_551e-7),
            (0.1, -1.847_886_902_814_358_2e-6),
            (0.15, -6.219_922_497_720_053e-6),
            (0.2, -1.468_825_297_256_793_4e-5),
        ] {
            assert!((sigma(tau).unwrap() / exact - 1.0).abs() < 1e-12, "tau {tau}");
        }
        assert!((eta_correction(0.1).unwrap() / -4.623_020_004_666_052e-8 - 1.0).abs() < 1e-12);
        assert!((eta_correction(1.0).unwrap() / -4.007_717_867_958_534e-4 - 1.0).abs() < 1e-12);
        for tau in [0.3, 0.5, 0.99, 1.01, 2.0, 3.0, 7.0, 20.0] {
            let (s, o) = (sigma(tau).unwrap(), sigma_sum(tau));
            assert!((s - o).abs() <= 1e-10 * o.abs(), "tau {tau}: {s} vs {o}");
        }
    }

    #[test]
    fn series_and_closed_forms_overlap() {
        // both routes converge on [1, 3]
        for tau in [1.0, 1.5, 2.2, 3.0] {
            let es = bernoulli_series(tau, 2, |_| 1.0) / 6.0;
            assert!((es - (eta_closed(tau) - 1.0)).abs() < 1e-13, "eta {tau}");
            let ks = -bernoulli_series(tau, 3, |k| 2.0 * k - 4.0) / 24.0;
            assert!((ks - (kappa_closed(tau) - 1.0)).abs() < 1e-13, "kappa {tau}");
            let ss = bernoulli_series(tau, 2, |k| 2.0 * k) / (6.0 * tau);
            assert!((ss - sigma_closed(tau)).abs() < 1e-12 * ss.abs(), "sigma {tau}");
        }
    }

    #[test]
    fn closed_form_identities() {
        for tau in [0.2, 1.0, 3.0, 9.0, 40.0] {
            let q = Exponentials::new(tau).quartic();
            let k = kappa(tau).unwrap();
            assert!((k - (0.75 * eta(tau).unwrap() + tau.powi(4) * q / 24.0)).abs() < 1e-13 * k);
            assert!((k - (eta(tau).unwrap() - tau * sigma(tau).unwrap() / 4.0)).abs() < 1e-13 * k);
        }
    }

    #[test]
    fn sigma_changes_sign_near_three() {
        let mut lo = 2.7;
        let mut hi = 3.3;
        assert!(sigma(lo).unwrap() < 0.0 && sigma(hi).unwrap() > 0.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if sigma(mid).unwrap() < 0.0 {
                lo = mid
            } else {
                hi = mid
            }
        }
        assert!((2.7..3.3).contains(&lo));
    }

    #[test]
    fn low_t_reduces_to_ideal_metal_series() {
        let g = OscillatorGeometry {
            beta_a: 0.0,
            delta0_over_a: 0.0,
        };
        for tau in [0.05, 0.2, 0.5, 0.9] {
            let s = LowT::new(tau, &g);
            // E_CP(η_series − 1) = (ħcα/128πa⁴)·(−48)(−τ⁴/2160 + …)
            let from_eta = -48.0 * eta_series_correction(tau) / tau.powi(4);
            assert!((s.free_energy_bracket() - from_eta).abs() < 1e-12 * from_eta);
            // F_CP(κ_series − 1) = (ħcα/128πa⁵)·(−192)(…)
            let from_kappa = -192.0 * kappa_series_correction(tau) / tau.powi(6);
            assert!((s.force_bracket() - from_kappa).abs() < 1e-12 * from_kappa);
            // (3/2)σ vs −(1/32)·τ³[…] at leading orders
            let from_sigma = -48.0 * sigma_series(tau) / tau.powi(3);
            assert!((s.entropy_bracket() - from_sigma).abs() < 1e-12 * from_sigma);
        }
    }

    #[test]
    fn low_t_force_is_minus_derivative_of_free_energy() {
        let atom = AtomModel::metastable_helium();
        let wall = WallModel::gold_plasma();
        for (a, t) in [(2e-6, 100.0), (1e-6, 300.0), (3e-6, 50.0)] {
            let h = 1e-4 * a;
            let f = |x: f64| low_t_free_energy_correction(x, t, &atom, &wall).unwrap().value;
            let fd = -(f(a + h) - f(a - h)) / (2.0 * h);
            let fd2 = -(f(a + 2.0 * h) - f(a - 2.0 * h)) / (4.0 * h);
            let rich = (4.0 * fd - fd2) / 3.0;
            let exact = low_t_force_correction(a, t, &atom, &wall).unwrap().value;
            assert!((rich - exact).abs() < 1e-8 * exact.abs(), "{rich} vs {exact}");
        }
    }

    #[test]
    fn low_t_entropy_leading_terms() {
        let atom = AtomModel::metastable_helium();
        let wall = WallModel::gold_plasma();
        let a = 2.0 * MICROMETRE;
        // −∂Δ_T𝓕/∂T to the orders kept in the entropy formula
        let t = 30.0;
        let h = 1e-3;
        let f = |x: f64| low_t_free_energy_correction(a, x, &atom, &wall).unwrap().value;
        let fd = -(f(t + h) - f(t - h)) / (2.0 * h);
        let s = low_t_entropy(a, t, &atom, &wall).unwrap();
        assert!(s.value < 0.0 && s.within_validity);
        let tau = dimensionless_temperature(a, t);
        assert!((fd - s.value).abs() < 10.0 * tau.powi(3) * s.value.abs());
        assert_eq!(low_t_entropy(a, 0.0, &atom, &wall).unwrap().value, 0.0);
    }

    #[test]
    fn oscillator_expansion_matches_h0_fixture() {
        // τΣ'H₀(lτ) − ∫H₀ = (τ⁴/4){…} at δ₀ = 0, in units of α(0)
        for &(tau, beta) in &[(0.3, 0.05), (0.5, 0.1), (0.4, 0.0)] {
            let mut sum = 0.5 * h0(0.0, beta);
            let mut l = 1.0;
            while l * tau < 80.0 {
                sum += h0(l * tau, beta);
                l += 1.0;
            }
            let integral = integrate_half_line(|x| h0(x, beta), 1.0, Tolerance::relative(1e-13)).unwrap();
            let numeric = tau * sum - integral.value;
            let g = OscillatorGeometry {
                beta_a: beta,
                delta0_over_a: 0.0,
            };
            let expansion = tau.powi(4) / 4.0 * LowT::new(tau, &g).free_energy_bracket();
            // next term is O(τ¹⁰) and O(β²τ⁸)
            assert!(
                (numeric - expansion).abs() < 0.5 * tau.powi(10) / 4.0 * 1e-3 + 1e-13,
                "{numeric} vs {expansion}"
            );
        }
    }

    #[test]
    fn perturbative_examples() {
        let he = AtomModel::metastable_helium();
        let au = WallModel::gold_plasma();
        let a = MICROMETRE;
        let g = geometry_params(&he, &au, a).unwrap();
        let b = force_bracket(&g);
        assert!((b - 0.888).abs() < 2e-3, "{b}");
        let e = perturbative_energy(a, &he, &au).unwrap();
        assert!(e.within_validity && e.value < 0.0);
        let e0 = perturbative_energy(a, &he.as_static(), &WallModel::IdealMetal).unwrap();
        assert_eq!(e0.value, casimir_polder_energy(he.static_polarizability(), a));
        let f0 = perturbative_force(a, &he.as_static(), &WallModel::IdealMetal).unwrap();
        assert_eq!(f0.value, casimir_polder_force(he.static_polarizability(), a));
        assert!(!perturbative_energy(0.05 * a, &he, &au).unwrap().within_validity);
    }

    #[test]
    fn perturbative_force_is_derivative_of_energy() {
        let he = AtomModel::metastable_helium();
        let au = WallModel::gold_plasma();
        for a in [0.8e-6, 1e-6, 1.7e-6, 3e-6] {
            let h = 1e-4 * a;
            let e = |x: f64| perturbative_energy(x, &he, &au).unwrap().value;
            let fd = -(e(a + h) - e(a - h)) / (2.0 * h);
            let f = perturbative_force(a, &he, &au).unwrap().value;
            assert!((fd - f).abs() < 1e-7 * f.abs());
        }
    }

    #[test]
    fn classical_expressions() {
        let he = AtomModel::metastable_helium();
        let a = 6.0 * MICROMETRE;
        let c = classical_limits(a, 300.0, &he).unwrap();
        assert!((c.tau - 9.87).abs() < 0.02, "{}", c.tau);
        assert!(!c.within_validity);
        assert!((c.free_energy / c.force - a / 3.0).abs() < 1e-20);
        assert_eq!(c.entropy, classical_limits(a, 600.0, &he).unwrap().entropy);
        assert!(classical_limits(-1.0, 300.0, &he).is_err());
    }

    proptest! {
        #[test]
        fn eta_series_remainder(tau in 0.01f64..0.5) {
            let d = eta_correction(tau).unwrap() - eta_series_correction(tau);
            prop_assert!(d.abs() <= tau.powi(10));
        }

        #[test]
        fn kappa_series_remainder(tau in 0.01f64..0.5) {
            let d = kappa_correction(tau).unwrap() - kappa_series_correction(tau);
            prop_assert!(d.abs() <= tau.powi(10));
        }

        #[test]
        fn sigma_series_remainder(tau in 0.01f64..0.3) {
            prop_assert!((sigma(tau).unwrap() - sigma_series(tau)).abs() <= tau.powi(7));
        }

        #[test]
        fn factors_continuous_across_branch(eps in 1e-9f64..1e-6) {
            let lo = SERIES_BRANCH_TAU - eps;
            let hi = SERIES_BRANCH_TAU + eps;
            prop_assert!((eta(lo).unwrap() - eta(hi).unwrap()).abs() < 1e-2 * eps + 1e-15);
            prop_assert!((sigma(lo).unwrap() - sigma(hi).unwrap()).abs() < 1e-2 * eps + 1e-14);
        }
    }
}
