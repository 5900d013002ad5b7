//! Dielectric response of the wall on the imaginary frequency axis and the
//! Fresnel reflection coefficients built from it.
//!
//! In the dimensionless variables of the Lifshitz kernel (ζ = ξ/ω_c and
//! y = 2aq ≥ ζ) the coefficients read
//!
//! ```text
//! r_TM = (εy − √(y² + ζ²(ε−1))) / (εy + √(y² + ζ²(ε−1)))
//! r_TE = ( y − √(y² + ζ²(ε−1))) / ( y + √(y² + ζ²(ε−1)))
//! ```
//!
//! Both are evaluated in factored forms that avoid the cancellation in the
//! numerators. The ζ = 0 term never goes through these expressions: each model
//! supplies its analytic zero-frequency limit instead.

mod optical;

use std::sync::Arc;

use thiserror::Error;

use crate::quadrature::QuadratureError;
use crate::units;

pub use optical::{
    kramers_kronig, static_permittivity, DrudeTail, LowFrequencyTail, OpticalTable, TabulatedPermittivity, KK_TOLERANCE,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MaterialError {
    #[error("frequency must be non-negative, got {0:e} rad/s")]
    NegativeFrequency(f64),
    #[error("the ideal metal has no finite permittivity; use its reflection coefficients")]
    IdealMetalPermittivity,
    #[error("{model} permittivity diverges at zero frequency; use the zero-frequency reflection path")]
    ZeroFrequencySingularity { model: &'static str },
    #[error("invalid optical table: {0}")]
    InvalidTable(String),
    #[error("xi = {xi:e} rad/s outside the Kramers-Kronig validity window [{lower:e}, {upper:e}]")]
    OutsideWindow { xi: f64, lower: f64, upper: f64 },
    #[error("reflection requires y >= zeta >= 0 (got zeta = {zeta}, y = {y})")]
    Domain { zeta: f64, y: f64 },
    #[error("invalid model parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// Conventional Au relaxation frequency when none is configured, in eV.
pub const DEFAULT_GOLD_RELAXATION_EV: f64 = 0.035;
/// Au plasma frequency, eV.
pub const GOLD_PLASMA_FREQUENCY_EV: f64 = 9.0;
/// Static permittivity of high-resistivity Si.
pub const SILICON_STATIC_PERMITTIVITY: f64 = 11.66;
/// Oscillator frequency of the one-resonance Si model, eV. Not a fitted
/// quantity; Si runs with this model are qualitative.
pub const SILICON_OSCILLATOR_EV: f64 = 4.34;

/// Permittivity model of the wall.
#[derive(Debug, Clone, PartialEq)]
pub enum WallModel {
    /// Perfect reflector: r_TM = 1, r_TE = −1 at every frequency.
    IdealMetal,
    /// ε(iξ) = 1 + ωp²/ξ²
    Plasma { plasma_frequency: f64 },
    /// ε(iξ) = 1 + ωp²/(ξ(ξ + γ))
    Drude { plasma_frequency: f64, relaxation: f64 },
    /// ε(iξ) = 1 + (ε(0) − 1)/(1 + ξ²/ω²)
    DielectricOscillator {
        static_permittivity: f64,
        oscillator_frequency: f64,
    },
    /// Kramers-Kronig transform of tabulated absorption.
    Tabulated(Arc<TabulatedPermittivity>),
}

fn positive(name: &str, v: f64) -> Result<f64, MaterialError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(MaterialError::InvalidParameter(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

impl WallModel {
    pub fn plasma(plasma_frequency: f64) -> Result<Self, MaterialError> {
        Ok(Self::Plasma {
            plasma_frequency: positive("plasma frequency", plasma_frequency)?,
        })
    }

    pub fn drude(plasma_frequency: f64, relaxation: f64) -> Result<Self, MaterialError> {
        Ok(Self::Drude {
            plasma_frequency: positive("plasma frequency", plasma_frequency)?,
            relaxation: positive("relaxation frequency", relaxation)?,
        })
    }

    pub fn dielectric_oscillator(static_permittivity: f64, oscillator_frequency: f64) -> Result<Self, MaterialError> {
        if !(static_permittivity.is_finite() && static_permittivity >= 1.0) {
            return Err(MaterialError::InvalidParameter(format!(
                "static permittivity must be >= 1, got {static_permittivity}"
            )));
        }
        Ok(Self::DielectricOscillator {
            static_permittivity,
            oscillator_frequency: positive("oscillator frequency", oscillator_frequency)?,
        })
    }

    pub fn tabulated(model: TabulatedPermittivity) -> Self {
        Self::Tabulated(Arc::new(model))
    }

    /// Au in the plasma model, ωp = 9.0 eV.
    pub fn gold_plasma() -> Self {
        Self::Plasma {
            plasma_frequency: units::ev_to_rad_per_s(GOLD_PLASMA_FREQUENCY_EV),
        }
    }

    /// Au in the Drude model with the default relaxation.
    pub fn gold_drude() -> Self {
        Self::Drude {
            plasma_frequency: units::ev_to_rad_per_s(GOLD_PLASMA_FREQUENCY_EV),
            relaxation: units::ev_to_rad_per_s(DEFAULT_GOLD_RELAXATION_EV),
        }
    }

    /// One-oscillator Si, ε(0) = 11.66.
    pub fn silicon_oscillator() -> Self {
        Self::DielectricOscillator {
            static_permittivity: SILICON_STATIC_PERMITTIVITY,
            oscillator_frequency: units::ev_to_rad_per_s(SILICON_OSCILLATOR_EV),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::IdealMetal => "ideal-metal",
            Self::Plasma { .. } => "plasma",
            Self::Drude { .. } => "drude",
            Self::DielectricOscillator { .. } => "dielectric-oscillator",
            Self::Tabulated(_) => "tabulated",
        }
    }

    /// Whether the static TM response is that of a conductor (r_TM(0) = 1).
    pub fn is_conductor(&self) -> bool {
        match self {
            Self::IdealMetal | Self::Plasma { .. } | Self::Drude { .. } => true,
            Self::DielectricOscillator { .. } => false,
            Self::Tabulated(t) => t.is_conductor(),
        }
    }

    pub fn plasma_frequency(&self) -> Option<f64> {
        match self {
            Self::Plasma { plasma_frequency } | Self::Drude { plasma_frequency, .. } => Some(*plasma_frequency),
            Self::Tabulated(t) if t.is_conductor() => t.table.drude_fit().map(|d| d.plasma_frequency()),
            _ => None,
        }
    }

    /// Plasma wavelength 2πc/ωp, for models that have one.
    pub fn plasma_wavelength(&self) -> Option<f64> {
        self.plasma_frequency().map(units::wavelength)
    }

    /// Human-readable parameter summary (used in output headers).
    pub fn describe(&self) -> String {
        match self {
            Self::IdealMetal => "ideal-metal".into(),
            Self::Plasma { plasma_frequency } => {
                format!(
                    "plasma omega_p={:.6e} rad/s ({} eV)",
                    plasma_frequency,
                    units::rad_per_s_to_ev(*plasma_frequency)
                )
            }
            Self::Drude {
                plasma_frequency,
                relaxation,
            } => format!(
                "drude omega_p={:.6e} rad/s gamma={:.6e} rad/s",
                plasma_frequency, relaxation
            ),
            Self::DielectricOscillator {
                static_permittivity,
                oscillator_frequency,
            } => format!(
                "dielectric-oscillator eps0={} omega={:.6e} rad/s (qualitative model)",
                static_permittivity, oscillator_frequency
            ),
            Self::Tabulated(t) => {
                let (lo, hi) = t.table.frequency_range();
                format!(
                    "tabulated rows={} range=[{:.6e}, {:.6e}] rad/s tail={:?}",
                    t.table.len(),
                    lo,
                    hi,
                    t.tail
                )
            }
        }
    }
}

/// ε(iξ) of the wall.
///
/// Plasma and Drude walls diverge at ξ = 0 and the ideal metal has no finite
/// permittivity at all; both cases are errors that direct the caller to
/// [`SurfaceResponse`].
pub fn permittivity_at(model: &WallModel, xi: f64) -> Result<f64, MaterialError> {
    if !(xi >= 0.0) {
        return Err(MaterialError::NegativeFrequency(xi));
    }
    match model {
        WallModel::IdealMetal => Err(MaterialError::IdealMetalPermittivity),
        WallModel::Plasma { plasma_frequency } => {
            if xi == 0.0 {
                return Err(MaterialError::ZeroFrequencySingularity { model: "plasma" });
            }
            let r = plasma_frequency / xi;
            Ok(1.0 + r * r)
        }
        WallModel::Drude {
            plasma_frequency,
            relaxation,
        } => {
            if xi == 0.0 {
                return Err(MaterialError::ZeroFrequencySingularity { model: "drude" });
            }
            Ok(1.0 + plasma_frequency * plasma_frequency / (xi * (xi + relaxation)))
        }
        WallModel::DielectricOscillator {
            static_permittivity,
            oscillator_frequency,
        } => {
            let r = xi / oscillator_frequency;
            Ok(1.0 + (static_permittivity - 1.0) / (1.0 + r * r))
        }
        WallModel::Tabulated(t) => {
            if xi == 0.0 {
                static_permittivity(t).ok_or(MaterialError::ZeroFrequencySingularity {
                    model: "tabulated conductor",
                })
            } else {
                kramers_kronig(t, xi)
            }
        }
    }
}

/// Pair of Fresnel coefficients at imaginary frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionPair {
    pub tm: f64,
    pub te: f64,
}

/// TE coefficient at ζ = 0. It never contributes to the interaction (it is
/// multiplied by ζ² = 0) but is still reported.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StaticTe {
    /// r_TE(0, y) = 0: Drude metals and all insulators.
    Vanishing,
    /// r_TE(0, y) = −Ω²/(y + √(y² + Ω²))², Ω = ωp/ω_c: plasma model.
    Plasma { omega_ratio: f64 },
    /// r_TE = −1.
    Ideal,
}

/// Wall response at one dimensionless frequency ζ, from which reflection
/// coefficients for any y ≥ ζ follow without re-evaluating ε.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SurfaceResponse {
    Ideal,
    Finite { eps: f64 },
    ZeroFrequency { tm: f64, te: StaticTe },
}

impl SurfaceResponse {
    /// Response at ζ = ξ/ω_c. ζ = 0 uses the analytic zero-frequency limit.
    pub fn at(model: &WallModel, zeta: f64, omega_c: f64) -> Result<Self, MaterialError> {
        if !(zeta >= 0.0) {
            return Err(MaterialError::NegativeFrequency(zeta));
        }
        if matches!(model, WallModel::IdealMetal) {
            return Ok(Self::Ideal);
        }
        if zeta > 0.0 {
            return Ok(Self::Finite {
                eps: permittivity_at(model, zeta * omega_c)?,
            });
        }
        Ok(match model {
            WallModel::IdealMetal => Self::Ideal,
            WallModel::Plasma { plasma_frequency } => Self::ZeroFrequency {
                tm: 1.0,
                te: StaticTe::Plasma {
                    omega_ratio: plasma_frequency / omega_c,
                },
            },
            WallModel::Drude { .. } => Self::ZeroFrequency {
                tm: 1.0,
                te: StaticTe::Vanishing,
            },
            WallModel::DielectricOscillator {
                static_permittivity, ..
            } => Self::ZeroFrequency {
                tm: (static_permittivity - 1.0) / (static_permittivity + 1.0),
                te: StaticTe::Vanishing,
            },
            WallModel::Tabulated(t) => match static_permittivity(t) {
                Some(eps0) => Self::ZeroFrequency {
                    tm: (eps0 - 1.0) / (eps0 + 1.0),
                    te: StaticTe::Vanishing,
                },
                None => Self::ZeroFrequency {
                    tm: 1.0,
                    te: StaticTe::Vanishing,
                },
            },
        })
    }

    /// Coefficients at (ζ, y); the caller guarantees y ≥ ζ.
    #[inline]
    pub fn reflection(&self, zeta: f64, y: f64) -> ReflectionPair {
        match *self {
            Self::Ideal => ReflectionPair { tm: 1.0, te: -1.0 },
            Self::Finite { eps } => finite_reflection(eps, zeta, y),
            Self::ZeroFrequency { tm, te } => {
                let te = match te {
                    StaticTe::Vanishing => 0.0,
                    StaticTe::Ideal => -1.0,
                    StaticTe::Plasma { omega_ratio } => {
                        let s = (y * y + omega_ratio * omega_ratio).sqrt();
                        -(omega_ratio / (y + s)).powi(2)
                    }
                };
                ReflectionPair { tm, te }
            }
        }
    }
}

#[inline]
fn finite_reflection(eps: f64, zeta: f64, y: f64) -> ReflectionPair {
    let em1 = eps - 1.0;
    let z2 = zeta * zeta;
    let s = (y * y + z2 * em1).sqrt();
    let tm_den = eps * y + s;
    // (εy − s)(εy + s) = (ε − 1)((ε + 1)y² − ζ²)
    let tm = (em1 / tm_den) * (((eps + 1.0) * y * y - z2) / tm_den);
    let te_den = y + s;
    // (y − s)(y + s) = −ζ²(ε − 1)
    let te = -(z2 * em1 / te_den) / te_den;
    ReflectionPair { tm, te }
}

/// Reflection coefficients of `model` at dimensionless frequency ζ and
/// dimensionless normal wave number y, with characteristic frequency ω_c.
pub fn reflection(model: &WallModel, zeta: f64, y: f64, omega_c: f64) -> Result<ReflectionPair, MaterialError> {
    if !(zeta >= 0.0 && y >= zeta && y.is_finite()) {
        return Err(MaterialError::Domain { zeta, y });
    }
    if !(omega_c > 0.0) {
        return Err(MaterialError::InvalidParameter(format!(
            "characteristic frequency must be positive, got {omega_c}"
        )));
    }
    Ok(SurfaceResponse::at(model, zeta, omega_c)?.reflection(zeta, y))
}
