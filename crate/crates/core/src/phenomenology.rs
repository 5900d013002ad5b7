//! Dispersion coefficients and the phenomenological potential
//! E(a) = −C₄/(a³(a + l)) used in quantum-reflection analyses.

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

use crate::asymptotics::casimir_polder_energy;
use crate::atoms::{polarizability_at, AtomError, AtomModel, Polarizability};
use crate::lifshitz::{LifshitzError, Solver};
use crate::materials::{permittivity_at, MaterialError, WallModel};
use crate::quadrature::{integrate_half_line, QuadratureError, Tolerance};
use crate::units::HBAR;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PhenomenologyError {
    #[error("C3 of an ideal metal needs the ideal-limit branch, (eps-1)/(eps+1) -> 1")]
    IdealMetalC3,
    #[error("{name} must be positive and finite, got {value:e}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("C3 diverges for a static polarizability; configure C3 or l")]
    StaticC3,
    #[error("relative difference undefined for a vanishing accurate energy")]
    ZeroAccurateEnergy,
    #[error(transparent)]
    Lifshitz(#[from] LifshitzError),
    #[error(transparent)]
    Material(#[from] MaterialError),
    #[error(transparent)]
    Atom(#[from] AtomError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

fn positive(name: &'static str, value: f64) -> Result<f64, PhenomenologyError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(PhenomenologyError::NonPositive { name, value })
    }
}

/// Where a coefficient came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Computed,
    Configured,
    /// Obtained from the other two coefficients through l = C₄/C₃.
    Derived,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Computed => "computed",
            Self::Configured => "configured",
            Self::Derived => "derived",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficient {
    pub value: f64,
    pub provenance: Provenance,
}

/// C₃ (J·m³), C₄ (J·m⁴) and l = C₄/C₃ (m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionCoefficients {
    pub c3: Coefficient,
    pub c4: Coefficient,
    pub l: Coefficient,
}

impl DispersionCoefficients {
    /// From C₃ and C₄; l is derived.
    pub fn from_c3_c4(c3: Coefficient, c4: Coefficient) -> Result<Self, PhenomenologyError> {
        positive("C3", c3.value)?;
        positive("C4", c4.value)?;
        Ok(Self {
            c3,
            c4,
            l: Coefficient {
                value: c4.value / c3.value,
                provenance: Provenance::Derived,
            },
        })
    }

    /// From C₄ and l; C₃ is derived.
    pub fn from_c4_l(c4: Coefficient, l: Coefficient) -> Result<Self, PhenomenologyError> {
        positive("C4", c4.value)?;
        positive("l", l.value)?;
        Ok(Self {
            c3: Coefficient {
                value: c4.value / l.value,
                provenance: Provenance::Derived,
            },
            c4,
            l,
        })
    }

    pub fn potential(&self) -> PhenomenologicalPotential {
        PhenomenologicalPotential {
            c4: self.c4.value,
            l: self.l.value,
        }
    }
}

/// E(a) = −C₄/(a³(a + l))
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhenomenologicalPotential {
    /// J·m⁴
    pub c4: f64,
    /// m
    pub l: f64,
}

impl PhenomenologicalPotential {
    pub fn new(c4: f64, l: f64) -> Result<Self, PhenomenologyError> {
        Ok(Self {
            c4: positive("C4", c4)?,
            l: positive("l", l)?,
        })
    }

    pub fn from_c3_c4(c3: f64, c4: f64) -> Result<Self, PhenomenologyError> {
        Self::new(c4, c4 / positive("C3", c3)?)
    }

    /// C₃ = C₄/l, J·m³
    pub fn c3(&self) -> f64 {
        self.c4 / self.l
    }

    pub fn energy(&self, a: f64) -> Result<f64, PhenomenologyError> {
        positive("separation", a)?;
        Ok(phenomenological_energy(self, a))
    }
}

/// −C₄/(a³(a + l)), J. The caller guarantees a > 0.
pub fn phenomenological_energy(p: &PhenomenologicalPotential, a: f64) -> f64 {
    -p.c4 / (a.powi(3) * (a + p.l))
}

/// δE = (E_acc − E_ph)/E_acc
pub fn relative_difference(e_acc: f64, e_ph: f64) -> Result<f64, PhenomenologyError> {
    if e_acc == 0.0 || !e_acc.is_finite() {
        return Err(PhenomenologyError::ZeroAccurateEnergy);
    }
    Ok((e_acc - e_ph) / e_acc)
}

/// Relative tolerance of the C₃ frequency integral.
pub const C3_TOLERANCE: f64 = 1e-7;

/// Van der Waals coefficient C₃ = (ħ/4π)∫₀^∞dξ α(iξ)(ε(iξ) − 1)/(ε(iξ) + 1), J·m³.
///
/// With `ideal_limit` the permittivity factor is replaced by its ε → ∞ value
/// of one, which is the only meaningful choice for an ideal-metal wall.
pub fn c3(wall: &WallModel, atom: &AtomModel, ideal_limit: bool) -> Result<f64, PhenomenologyError> {
    let ideal = ideal_limit || matches!(wall, WallModel::IdealMetal);
    if matches!(wall, WallModel::IdealMetal) && !ideal_limit {
        return Err(PhenomenologyError::IdealMetalC3);
    }
    let scale = atom
        .oscillator_frequency()
        .or_else(|| wall.plasma_frequency())
        .unwrap_or(1e16);
    let mut failure = None;
    let integral = integrate_half_line(
        |xi| {
            if failure.is_some() {
                return 0.0;
            }
            let alpha = match polarizability_at(atom, xi) {
                Ok(v) => v,
                Err(e) => {
                    failure = Some(PhenomenologyError::from(e));
                    return 0.0;
                }
            };
            if ideal {
                return alpha;
            }
            match permittivity_at(wall, xi) {
                Ok(eps) => alpha * (eps - 1.0) / (eps + 1.0),
                Err(e) => {
                    failure = Some(e.into());
                    0.0
                }
            }
        },
        scale,
        Tolerance::relative(C3_TOLERANCE),
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(HBAR / (4.0 * PI) * integral?.value)
}

/// C₄ = 3ħcα(0)/(8π), J·m⁴
pub fn c4_ideal(atom: &AtomModel) -> Result<f64, PhenomenologyError> {
    Ok(-casimir_polder_energy(
        positive("alpha(0)", atom.static_polarizability())?,
        1.0,
    ))
}

/// Separations used to extract C₄ from the zero-temperature Lifshitz energy, m.
pub const C4_EXTRACTION_SEPARATIONS: [f64; 3] = [50e-6, 100e-6, 200e-6];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct C4Extraction {
    /// J·m⁴
    pub value: f64,
    /// |extrapolated − a⁴|E| at the largest separation|, J·m⁴
    pub residual: f64,
}

/// C₄ as lim a⁴|E(a)| at T = 0: a⁴|E| at 50, 100 and 200 μm extrapolated to
/// 1/a = 0 with a quadratic in 1/a (the skin-depth correction is linear in
/// 1/a, the dynamic-polarizability one quadratic).
pub fn c4_lifshitz(wall: &WallModel, atom: &AtomModel) -> Result<C4Extraction, PhenomenologyError> {
    let solver = Solver::default();
    let mut x = [0.0; 3];
    let mut g = [0.0; 3];
    for (i, &a) in C4_EXTRACTION_SEPARATIONS.iter().enumerate() {
        x[i] = 1.0 / a;
        g[i] = a.powi(4) * solver.zero_temperature_energy(a, wall, atom)?.value.abs();
    }
    // Lagrange interpolation evaluated at x = 0
    let mut value = 0.0;
    for i in 0..3 {
        let mut w = 1.0;
        for j in 0..3 {
            if j != i {
                w *= x[j] / (x[j] - x[i]);
            }
        }
        value += w * g[i];
    }
    Ok(C4Extraction {
        value,
        residual: (value - g[2]).abs(),
    })
}

/// ρ = (√(2m_a)/ħ)·C₃/√C₄. Below one the reflection is governed by the
/// nonretarded tail, above one by the retarded tail.
pub fn rho_parameter(atom: &AtomModel, coeffs: &DispersionCoefficients) -> Result<f64, PhenomenologyError> {
    let m = positive("mass", atom.mass)?;
    positive("C4", coeffs.c4.value)?;
    if !(coeffs.c3.value >= 0.0) {
        return Err(PhenomenologyError::NonPositive {
            name: "C3",
            value: coeffs.c3.value,
        });
    }
    Ok((2.0 * m).sqrt() / HBAR * coeffs.c3.value / coeffs.c4.value.sqrt())
}

/// Coefficient values supplied from configuration, SI. Any subset may be present.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CoefficientOverrides {
    /// J·m³
    pub c3: Option<f64>,
    /// J·m⁴
    pub c4: Option<f64>,
    /// m
    pub l: Option<f64>,
}

impl CoefficientOverrides {
    pub fn is_empty(&self) -> bool {
        self.c3.is_none() && self.c4.is_none() && self.l.is_none()
    }
}

/// Computed and configured coefficients side by side, plus the set used for δE.
#[derive(Debug, Clone)]
pub struct CoefficientReport {
    /// None when the C₃ integral does not exist (static atom).
    pub computed_c3: Option<f64>,
    pub computed_c4: f64,
    /// "closed-form" for conductors, "lifshitz-extrapolation" otherwise.
    pub c4_method: &'static str,
    pub configured: CoefficientOverrides,
    pub effective: DispersionCoefficients,
    /// False when nothing was configured and the wall is a model rather than data.
    pub quantitative: bool,
}

/// Coefficients for a wall/atom pair. Configured values win; C₄ of a
/// conductor is the ideal-metal value, C₄ of a dielectric is extracted from
/// the Lifshitz energy.
pub fn coefficient_report(
    wall: &WallModel,
    atom: &AtomModel,
    configured: CoefficientOverrides,
) -> Result<CoefficientReport, PhenomenologyError> {
    let computed_c3 = match atom.polarizability {
        Polarizability::Static { .. } => None,
        _ => Some(c3(wall, atom, matches!(wall, WallModel::IdealMetal))?),
    };
    let (computed_c4, c4_method) = if wall.is_conductor() {
        (c4_ideal(atom)?, "closed-form")
    } else {
        (c4_lifshitz(wall, atom)?.value, "lifshitz-extrapolation")
    };
    let c4 = match configured.c4 {
        Some(v) => Coefficient {
            value: v,
            provenance: Provenance::Configured,
        },
        None => Coefficient {
            value: computed_c4,
            provenance: Provenance::Computed,
        },
    };
    let effective = match (configured.l, configured.c3, computed_c3) {
        (Some(l), _, _) => DispersionCoefficients::from_c4_l(
            c4,
            Coefficient {
                value: l,
                provenance: Provenance::Configured,
            },
        )?,
        (None, Some(v), _) => DispersionCoefficients::from_c3_c4(
            Coefficient {
                value: v,
                provenance: Provenance::Configured,
            },
            c4,
        )?,
        (None, None, Some(v)) => DispersionCoefficients::from_c3_c4(
            Coefficient {
                value: v,
                provenance: Provenance::Computed,
            },
            c4,
        )?,
        (None, None, None) => return Err(PhenomenologyError::StaticC3),
    };
    Ok(CoefficientReport {
        computed_c3,
        computed_c4,
        c4_method,
        configured,
        effective,
        quantitative: !configured.is_empty() || matches!(wall, WallModel::Tabulated(_)),
    })
}

/// Unretarded C₃ in the ideal-metal limit for a single-oscillator atom:
/// ħα(0)ω₀/8.
pub fn c3_ideal_oscillator(alpha0: f64, omega0: f64) -> f64 {
    HBAR * alpha0 * omega0 / 8.0
}
