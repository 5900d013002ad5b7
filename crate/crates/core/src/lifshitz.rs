//! Lifshitz free energy, force and entropy of an atom near a wall.
//!
//! With ω_c = c/(2a), τ = 4πk_B aT/(ħc) and ζ_l = τl,
//!
//! ```text
//! 𝓕 = −(k_BT/8a³) Σ'_l α(iω_cζ_l) ∫_{ζ_l}^∞ dy e^{−y} {2y² r_TM − ζ_l² (r_TM + r_TE)}
//! F = −(k_BT/8a⁴) Σ'_l α(iω_cζ_l) ∫_{ζ_l}^∞ dy y e^{−y} {…}
//! ```
//!
//! and at T = 0 the sums become (ħc/32πa⁴)∫dζ and (ħc/32πa⁵)∫dζ.

use std::f64::consts::PI;

use thiserror::Error;

use crate::asymptotics::{self, AsymptoticError};
use crate::atoms::{polarizability_at, AtomError, AtomModel, Polarizability};
use crate::materials::{MaterialError, SurfaceResponse, WallModel};
use crate::quadrature::{integrate_exp_weighted, integrate_half_line, Integral, QuadratureError, Tolerance};
use crate::units::{C, HBAR, K_B};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LifshitzError {
    #[error("separation must be positive and finite, got {0:e} m")]
    NonPositiveSeparation(f64),
    #[error("temperature must be non-negative and finite, got {0} K")]
    NegativeTemperature(f64),
    #[error("entropy requires T > 0")]
    ZeroTemperatureEntropy,
    #[error("Matsubara sum not converged after {terms} terms (last term {last_term:e})")]
    TruncationCap { terms: usize, last_term: f64 },
    #[error("quadrature failed at zeta = {zeta}: {source}")]
    Quadrature {
        zeta: f64,
        #[source]
        source: QuadratureError,
    },
    #[error(transparent)]
    Material(#[from] MaterialError),
    #[error(transparent)]
    Atom(#[from] AtomError),
    #[error(transparent)]
    Asymptotic(#[from] AsymptoticError),
}

/// Separation and temperature with the derived dimensionless state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scene {
    /// m
    pub a: f64,
    /// K
    pub temperature: f64,
}

impl Scene {
    pub fn new(a: f64, temperature: f64) -> Result<Self, LifshitzError> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(LifshitzError::NonPositiveSeparation(a));
        }
        if !(temperature >= 0.0 && temperature.is_finite()) {
            return Err(LifshitzError::NegativeTemperature(temperature));
        }
        Ok(Self { a, temperature })
    }

    /// Scene at separation `a` with the given τ.
    pub fn from_tau(a: f64, tau: f64) -> Result<Self, LifshitzError> {
        Self::new(a, tau * HBAR * C / (4.0 * PI * K_B * a))
    }

    /// ω_c = c/(2a), rad/s
    pub fn omega_c(&self) -> f64 {
        C / (2.0 * self.a)
    }

    /// T_eff = ħω_c/k_B, K
    pub fn effective_temperature(&self) -> f64 {
        HBAR * self.omega_c() / K_B
    }

    pub fn tau(&self) -> f64 {
        asymptotics::dimensionless_temperature(self.a, self.temperature)
    }

    /// ξ_l = 2πk_B T l/ħ, rad/s
    pub fn matsubara_frequency(&self, l: u64) -> f64 {
        2.0 * PI * K_B * self.temperature * l as f64 / HBAR
    }

    /// ζ_l = ξ_l/ω_c = τl
    pub fn matsubara_zeta(&self, l: u64) -> f64 {
        self.tau() * l as f64
    }
}

/// Numerical settings of the solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Relative tolerance of each y-integral.
    pub inner_tolerance: f64,
    /// Relative tolerance of the ζ-integral at T = 0.
    pub outer_tolerance: f64,
    /// A Matsubara term is negligible below this fraction of the running sum.
    pub truncation: f64,
    /// Consecutive negligible terms before the sum stops.
    pub consecutive: usize,
    /// Upper limit of t = y − ζ in the y-integrals.
    pub cutoff: f64,
    /// Route ideal metal + static atom to the closed forms.
    pub closed_form_shortcut: bool,
    /// Replaces r_TE at zero frequency; it cannot change any result.
    pub zero_frequency_te: Option<f64>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            inner_tolerance: 1e-12,
            outer_tolerance: 1e-10,
            truncation: 1e-14,
            consecutive: 3,
            cutoff: 60.0,
            closed_form_shortcut: true,
            zero_frequency_te: None,
        }
    }
}

impl SolverOptions {
    /// Default settings with the closed-form shortcut disabled.
    pub fn numeric() -> Self {
        Self {
            closed_form_shortcut: false,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    MatsubaraSum,
    ZeroTemperatureIntegral,
    FiniteDifference,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Self::ClosedForm => "closed-form",
            Self::MatsubaraSum => "matsubara-sum",
            Self::ZeroTemperatureIntegral => "zero-temperature-integral",
            Self::FiniteDifference => "finite-difference",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub method: Method,
    /// Matsubara terms summed (0 for the other methods).
    pub terms: usize,
    /// Accumulated quadrature error estimate, in the units of the value.
    pub quadrature_error: f64,
    /// Estimate of the discarded Matsubara tail, in the units of the value.
    pub truncation_error: f64,
    pub evaluations: usize,
    /// Entropy only: the central differences with steps h and h/2 (J/K).
    pub stencil: Option<[f64; 2]>,
}

impl Diagnostics {
    fn closed_form() -> Self {
        Self {
            method: Method::ClosedForm,
            terms: 0,
            quadrature_error: 0.0,
            truncation_error: 0.0,
            evaluations: 0,
            stencil: None,
        }
    }

    pub fn total_error(&self) -> f64 {
        self.quadrature_error + self.truncation_error
    }
}

/// A computed quantity in SI units with its diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity {
    pub value: f64,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteractionResult {
    /// J
    pub free_energy: Quantity,
    /// N
    pub force: Quantity,
    /// J/K
    pub entropy: Quantity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kernel {
    Energy,
    Force,
}

/// One term of the primed Matsubara sum for the free energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatsubaraTerm {
    pub l: u64,
    pub zeta: f64,
    /// α(iξ_l), m³
    pub polarizability: f64,
    /// ∫_{ζ_l}^∞ dy e^{−y}{2y²r_TM − ζ_l²(r_TM + r_TE)}
    pub integral: Integral,
    /// Contribution to 𝓕 with the ½ weight at l = 0, J.
    pub value: f64,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Solver {
    pub options: SolverOptions,
}

impl Solver {
    pub fn new(options: SolverOptions) -> Self {
        Self { options }
    }

    fn shortcut(&self, wall: &WallModel, atom: &AtomModel) -> Option<f64> {
        match (wall, &atom.polarizability) {
            (WallModel::IdealMetal, Polarizability::Static { alpha0 }) if self.options.closed_form_shortcut => {
                Some(*alpha0)
            }
            _ => None,
        }
    }

    /// ∫_ζ^∞ dy [y] e^{−y}{2y²r_TM − ζ²(r_TM + r_TE)}
    fn inner(&self, response: &SurfaceResponse, zeta: f64, kernel: Kernel) -> Result<Integral, LifshitzError> {
        if zeta > 700.0 {
            // e^{−ζ} times a polynomial in ζ is below the smallest normal double
            return Ok(Integral {
                value: 0.0,
                error: 0.0,
                evaluations: 0,
            });
        }
        let z2 = zeta * zeta;
        let te_override = if zeta == 0.0 {
            self.options.zero_frequency_te
        } else {
            None
        };
        let g = |t: f64| {
            let y = zeta + t;
            let r = response.reflection(zeta, y);
            let te = te_override.unwrap_or(r.te);
            let braces = 2.0 * y * y * r.tm - z2 * (r.tm + te);
            match kernel {
                Kernel::Energy => braces,
                Kernel::Force => y * braces,
            }
        };
        // |braces| ≤ 4y², so the tail past the cutoff is bounded by moments of e^{−t}
        let tail = |cut: f64| {
            let u = zeta + cut;
            let poly = match kernel {
                Kernel::Energy => u * u + 2.0 * u + 2.0,
                Kernel::Force => u * u * u + 3.0 * u * u + 6.0 * u + 6.0,
            };
            4.0 * (-cut).exp() * poly
        };
        integrate_exp_weighted(
            g,
            self.options.cutoff,
            tail,
            Tolerance::relative(self.options.inner_tolerance),
        )
        .map(|i| i.scaled((-zeta).exp()))
        .map_err(|source| LifshitzError::Quadrature { zeta, source })
    }

    /// α(iω_cζ)·∫dy(…) at one dimensionless frequency.
    fn weighted_inner(
        &self,
        scene_omega_c: f64,
        zeta: f64,
        wall: &WallModel,
        atom: &AtomModel,
        kernel: Kernel,
    ) -> Result<(f64, Integral), LifshitzError> {
        let alpha = polarizability_at(atom, zeta * scene_omega_c)?;
        if alpha == 0.0 {
            return Ok((
                0.0,
                Integral {
                    value: 0.0,
                    error: 0.0,
                    evaluations: 0,
                },
            ));
        }
        let response = SurfaceResponse::at(wall, zeta, scene_omega_c)?;
        Ok((alpha, self.inner(&response, zeta, kernel)?))
    }

    fn matsubara_sum(
        &self,
        scene: &Scene,
        wall: &WallModel,
        atom: &AtomModel,
        kernel: Kernel,
    ) -> Result<Quantity, LifshitzError> {
        let tau = scene.tau();
        let omega_c = scene.omega_c();
        let prefactor = match kernel {
            Kernel::Energy => -K_B * scene.temperature / (8.0 * scene.a.powi(3)),
            Kernel::Force => -K_B * scene.temperature / (8.0 * scene.a.powi(4)),
        };
        let cap = (1e5f64).max(200.0 / tau).ceil() as u64;
        let mut sum = 0.0;
        let mut quad_error = 0.0;
        let mut evaluations = 0;
        let mut quiet = 0;
        let mut last = 0.0;
        let mut l = 0u64;
        loop {
            if l > cap {
                return Err(LifshitzError::TruncationCap {
                    terms: l as usize,
                    last_term: last,
                });
            }
            let zeta = tau * l as f64;
            let weight = if l == 0 { 0.5 } else { 1.0 };
            let (alpha, integral) = self.weighted_inner(omega_c, zeta, wall, atom, kernel)?;
            let term = weight * alpha * integral.value;
            sum += term;
            quad_error += weight * alpha * integral.error;
            evaluations += integral.evaluations;
            last = term;
            if l > 0 && term.abs() <= self.options.truncation * sum.abs() {
                quiet += 1;
                if quiet >= self.options.consecutive {
                    break;
                }
            } else {
                quiet = 0;
            }
            l += 1;
        }
        // remaining terms fall off at least geometrically with ratio e^{−τ}
        let ratio = (-tau).exp();
        let tail = last.abs() * ratio / (1.0 - ratio);
        Ok(Quantity {
            value: prefactor * sum,
            diagnostics: Diagnostics {
                method: Method::MatsubaraSum,
                terms: l as usize + 1,
                quadrature_error: prefactor.abs() * quad_error,
                truncation_error: prefactor.abs() * tail,
                evaluations,
                stencil: None,
            },
        })
    }

    fn zero_temperature(
        &self,
        a: f64,
        wall: &WallModel,
        atom: &AtomModel,
        kernel: Kernel,
    ) -> Result<Quantity, LifshitzError> {
        let omega_c = C / (2.0 * a);
        let prefactor = match kernel {
            Kernel::Energy => -HBAR * C / (32.0 * PI * a.powi(4)),
            Kernel::Force => -HBAR * C / (32.0 * PI * a.powi(5)),
        };
        let mut failure = None;
        let mut inner_error = 0.0;
        let mut inner_evals = 0;
        let outer = integrate_half_line(
            |zeta| {
                if failure.is_some() {
                    return 0.0;
                }
                match self.weighted_inner(omega_c, zeta, wall, atom, kernel) {
                    Ok((alpha, i)) => {
                        inner_error += alpha * i.error;
                        inner_evals += i.evaluations;
                        alpha * i.value
                    }
                    Err(e) => {
                        failure = Some(e);
                        0.0
                    }
                }
            },
            1.0,
            Tolerance::relative(self.options.outer_tolerance),
        );
        if let Some(e) = failure {
            return Err(e);
        }
        let outer = outer.map_err(|source| LifshitzError::Quadrature { zeta: f64::NAN, source })?;
        // inner errors are summed over every outer node; a loose but safe bound
        let inner_bound = inner_error / outer.evaluations.max(1) as f64;
        Ok(Quantity {
            value: prefactor * outer.value,
            diagnostics: Diagnostics {
                method: Method::ZeroTemperatureIntegral,
                terms: 0,
                quadrature_error: prefactor.abs() * (outer.error + inner_bound),
                truncation_error: 0.0,
                evaluations: outer.evaluations + inner_evals,
                stencil: None,
            },
        })
    }

    /// E(a) at T = 0, J.
    pub fn zero_temperature_energy(
        &self,
        a: f64,
        wall: &WallModel,
        atom: &AtomModel,
    ) -> Result<Quantity, LifshitzError> {
        Scene::new(a, 0.0)?;
        if let Some(alpha0) = self.shortcut(wall, atom) {
            return Ok(Quantity {
                value: asymptotics::casimir_polder_energy(alpha0, a),
                diagnostics: Diagnostics::closed_form(),
            });
        }
        self.zero_temperature(a, wall, atom, Kernel::Energy)
    }

    /// F(a) at T = 0, N.
    pub fn zero_temperature_force(
        &self,
        a: f64,
        wall: &WallModel,
        atom: &AtomModel,
    ) -> Result<Quantity, LifshitzError> {
        Scene::new(a, 0.0)?;
        if let Some(alpha0) = self.shortcut(wall, atom) {
            return Ok(Quantity {
                value: asymptotics::casimir_polder_force(alpha0, a),
                diagnostics: Diagnostics::closed_form(),
            });
        }
        self.zero_temperature(a, wall, atom, Kernel::Force)
    }

    /// 𝓕(a, T), J. T = 0 is evaluated as the zero-temperature integral.
    pub fn free_energy(&self, scene: &Scene, wall: &WallModel, atom: &AtomModel) -> Result<Quantity, LifshitzError> {
        if scene.temperature == 0.0 {
            return self.zero_temperature_energy(scene.a, wall, atom);
        }
        if let Some(alpha0) = self.shortcut(wall, atom) {
            let (f, _, _) = asymptotics::ideal_metal_static(alpha0, scene.a, scene.temperature)?;
            return Ok(Quantity {
                value: f,
                diagnostics: Diagnostics::closed_form(),
            });
        }
        self.matsubara_sum(scene, wall, atom, Kernel::Energy)
    }

    /// F(a, T) = −∂𝓕/∂a, N.
    pub fn force(&self, scene: &Scene, wall: &WallModel, atom: &AtomModel) -> Result<Quantity, LifshitzError> {
        if scene.temperature == 0.0 {
            return self.zero_temperature_force(scene.a, wall, atom);
        }
        if let Some(alpha0) = self.shortcut(wall, atom) {
            let (_, f, _) = asymptotics::ideal_metal_static(alpha0, scene.a, scene.temperature)?;
            return Ok(Quantity {
                value: f,
                diagnostics: Diagnostics::closed_form(),
            });
        }
        self.matsubara_sum(scene, wall, atom, Kernel::Force)
    }

    /// S = −∂𝓕/∂T, J/K, by central differences with steps h and h/2 combined
    /// by one Richardson step, h = max(10⁻³T, 10⁻³ K) (capped at T/2).
    pub fn entropy(&self, scene: &Scene, wall: &WallModel, atom: &AtomModel) -> Result<Quantity, LifshitzError> {
        if scene.temperature == 0.0 {
            return Err(LifshitzError::ZeroTemperatureEntropy);
        }
        if let Some(alpha0) = self.shortcut(wall, atom) {
            let (_, _, s) = asymptotics::ideal_metal_static(alpha0, scene.a, scene.temperature)?;
            return Ok(Quantity {
                value: s,
                diagnostics: Diagnostics::closed_form(),
            });
        }
        let t = scene.temperature;
        let h = (1e-3 * t).max(1e-3).min(0.5 * t);
        let mut noise = 0.0;
        let mut evaluations = 0;
        let mut f = |temp: f64| -> Result<f64, LifshitzError> {
            let q = self.matsubara_sum(&Scene::new(scene.a, temp)?, wall, atom, Kernel::Energy)?;
            noise += q.diagnostics.total_error();
            evaluations += q.diagnostics.evaluations;
            Ok(q.value)
        };
        let d1 = (f(t + h)? - f(t - h)?) / (2.0 * h);
        let d2 = (f(t + 0.5 * h)? - f(t - 0.5 * h)?) / h;
        let derivative = (4.0 * d2 - d1) / 3.0;
        Ok(Quantity {
            value: -derivative,
            diagnostics: Diagnostics {
                method: Method::FiniteDifference,
                terms: 0,
                // the error estimates of the four evaluations enter with weight ≤ 1/h each
                quadrature_error: noise / h,
                truncation_error: (d2 - d1).abs() / 3.0,
                evaluations,
                stencil: Some([-d1, -d2]),
            },
        })
    }

    /// The l-th term of the free-energy sum.
    pub fn matsubara_term(
        &self,
        scene: &Scene,
        wall: &WallModel,
        atom: &AtomModel,
        l: u64,
    ) -> Result<MatsubaraTerm, LifshitzError> {
        let zeta = scene.matsubara_zeta(l);
        let (alpha, integral) = self.weighted_inner(scene.omega_c(), zeta, wall, atom, Kernel::Energy)?;
        let weight = if l == 0 { 0.5 } else { 1.0 };
        Ok(MatsubaraTerm {
            l,
            zeta,
            polarizability: alpha,
            integral,
            value: -K_B * scene.temperature / (8.0 * scene.a.powi(3)) * weight * alpha * integral.value,
        })
    }

    pub fn interaction(
        &self,
        scene: &Scene,
        wall: &WallModel,
        atom: &AtomModel,
    ) -> Result<InteractionResult, LifshitzError> {
        Ok(InteractionResult {
            free_energy: self.free_energy(scene, wall, atom)?,
            force: self.force(scene, wall, atom)?,
            entropy: self.entropy(scene, wall, atom)?,
        })
    }
}

/// 𝓕(a, T) with default options.
pub fn free_energy(scene: &Scene, wall: &WallModel, atom: &AtomModel) -> Result<Quantity, LifshitzError> {
    Solver::default().free_energy(scene, wall, atom)
}

/// F(a, T) with default options.
pub fn force(scene: &Scene, wall: &WallModel, atom: &AtomModel) -> Result<Quantity, LifshitzError> {
    Solver::default().force(scene, wall, atom)
}

/// S(a, T) with default options.
pub fn entropy(scene: &Scene, wall: &WallModel, atom: &AtomModel) -> Result<Quantity, LifshitzError> {
    Solver::default().entropy(scene, wall, atom)
}

/// E(a) at T = 0 with default options.
pub fn zero_temperature_energy(a: f64, wall: &WallModel, atom: &AtomModel) -> Result<Quantity, LifshitzError> {
    Solver::default().zero_temperature_energy(a, wall, atom)
}

/// F(a) at T = 0 with default options.
pub fn zero_temperature_force(a: f64, wall: &WallModel, atom: &AtomModel) -> Result<Quantity, LifshitzError> {
    Solver::default().zero_temperature_force(a, wall, atom)
}

pub fn matsubara_term(
    scene: &Scene,
    wall: &WallModel,
    atom: &AtomModel,
    l: u64,
) -> Result<MatsubaraTerm, LifshitzError> {
    Solver::default().matsubara_term(scene, wall, atom, l)
}
