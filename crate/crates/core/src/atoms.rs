//! Atomic dynamic polarizability on the imaginary frequency axis.
//!
//! Polarizabilities are volumes in m³ (Gaussian-style α, so that the
//! Casimir-Polder energy near an ideal metal is −3ħcα(0)/(8πa⁴)).

use std::path::Path;
use std::sync::Arc;

use thiserror::Error;

use crate::materials::WallModel;
use crate::units;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AtomError {
    #[error("frequency must be non-negative, got {0:e} rad/s")]
    NegativeFrequency(f64),
    #[error("separation must be positive, got {0:e} m")]
    NonPositiveSeparation(f64),
    #[error("invalid polarizability table: {0}")]
    InvalidTable(String),
    #[error("invalid atom parameter: {0}")]
    InvalidParameter(String),
    #[error("{0}")]
    Unsupported(String),
}

/// He* polarizability in atomic units.
pub const METASTABLE_HELIUM_ALPHA0_AU: f64 = 315.63;
/// He* characteristic absorption frequency, eV.
pub const METASTABLE_HELIUM_OMEGA0_EV: f64 = 1.18;
/// He mass in unified atomic mass units.
pub const HELIUM_MASS_U: f64 = 4.0026;

/// Tabulated α(iξ), strictly increasing ξ and positive non-increasing α.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarizabilityTable {
    xi: Vec<f64>,
    alpha: Vec<f64>,
}

impl PolarizabilityTable {
    pub fn new(xi: Vec<f64>, alpha: Vec<f64>) -> Result<Self, AtomError> {
        let bad = |m: String| Err(AtomError::InvalidTable(m));
        if xi.len() != alpha.len() {
            return bad(format!("{} frequencies but {} values", xi.len(), alpha.len()));
        }
        if xi.len() < 2 {
            return bad("need at least 2 rows".into());
        }
        if !(xi[0] >= 0.0) {
            return bad(format!("negative frequency {}", xi[0]));
        }
        for w in xi.windows(2) {
            if !(w[1] > w[0]) || !w[1].is_finite() {
                return bad(format!("frequencies not strictly increasing at {}", w[1]));
            }
        }
        for (i, &a) in alpha.iter().enumerate() {
            if !(a > 0.0 && a.is_finite()) {
                return bad(format!("polarizability must be positive, row {i} has {a}"));
            }
            if i > 0 && a > alpha[i - 1] {
                return bad(format!("polarizability increases at row {i}"));
            }
        }
        Ok(Self { xi, alpha })
    }

    /// Two whitespace-separated columns, ξ in rad/s and α in m³; `#` comments.
    pub fn parse(text: &str) -> Result<Self, AtomError> {
        let mut xi = Vec::new();
        let mut alpha = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split_whitespace().collect();
            if cols.len() != 2 {
                return Err(AtomError::InvalidTable(format!("line {}: expected 2 columns", n + 1)));
            }
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| AtomError::InvalidTable(format!("line {}: {e}", n + 1)))
            };
            xi.push(parse(cols[0])?);
            alpha.push(parse(cols[1])?);
        }
        Self::new(xi, alpha)
    }

    pub fn load(path: &Path) -> Result<Self, AtomError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| AtomError::InvalidTable(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn len(&self) -> usize {
        self.xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi.is_empty()
    }

    /// Log-log interpolation inside the table, constant below the first row,
    /// and α ∝ 1/ξ² above the last.
    pub fn value_at(&self, xi: f64) -> f64 {
        let n = self.xi.len();
        if xi <= self.xi[0] {
            return self.alpha[0];
        }
        if xi >= self.xi[n - 1] {
            let r = self.xi[n - 1] / xi;
            return self.alpha[n - 1] * r * r;
        }
        let i = self.xi.partition_point(|&x| x <= xi) - 1;
        let (x0, x1, a0, a1) = (self.xi[i], self.xi[i + 1], self.alpha[i], self.alpha[i + 1]);
        if x0 == 0.0 {
            let t = xi / x1;
            return (a0.ln() + t * (a1 / a0).ln()).exp();
        }
        let t = (xi / x0).ln() / (x1 / x0).ln();
        a0 * (a1 / a0).powf(t)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Polarizability {
    /// α(iξ) = α(0) at every frequency.
    Static {
        alpha0: f64,
    },
    /// α(iξ) = α(0)/(1 + ξ²/ω₀²)
    SingleOscillator {
        alpha0: f64,
        omega0: f64,
    },
    Tabulated(Arc<PolarizabilityTable>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtomModel {
    pub polarizability: Polarizability,
    /// kg
    pub mass: f64,
}

fn positive(name: &str, v: f64) -> Result<f64, AtomError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(AtomError::InvalidParameter(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

impl AtomModel {
    pub fn static_atom(alpha0: f64, mass: f64) -> Result<Self, AtomError> {
        Ok(Self {
            polarizability: Polarizability::Static {
                alpha0: positive("alpha(0)", alpha0)?,
            },
            mass: positive("mass", mass)?,
        })
    }

    pub fn single_oscillator(alpha0: f64, omega0: f64, mass: f64) -> Result<Self, AtomError> {
        Ok(Self {
            polarizability: Polarizability::SingleOscillator {
                alpha0: positive("alpha(0)", alpha0)?,
                omega0: positive("omega0", omega0)?,
            },
            mass: positive("mass", mass)?,
        })
    }

    pub fn tabulated(table: PolarizabilityTable, mass: f64) -> Result<Self, AtomError> {
        Ok(Self {
            polarizability: Polarizability::Tabulated(Arc::new(table)),
            mass: positive("mass", mass)?,
        })
    }

    /// Metastable He in the single-oscillator model.
    pub fn metastable_helium() -> Self {
        Self {
            polarizability: Polarizability::SingleOscillator {
                alpha0: units::au_to_m3(METASTABLE_HELIUM_ALPHA0_AU),
                omega0: units::ev_to_rad_per_s(METASTABLE_HELIUM_OMEGA0_EV),
            },
            mass: units::dalton_to_kg(HELIUM_MASS_U),
        }
    }

    /// Same atom with the static polarizability α(0) at all frequencies.
    pub fn as_static(&self) -> Self {
        Self {
            polarizability: Polarizability::Static {
                alpha0: self.static_polarizability(),
            },
            mass: self.mass,
        }
    }

    pub fn static_polarizability(&self) -> f64 {
        match &self.polarizability {
            Polarizability::Static { alpha0 } | Polarizability::SingleOscillator { alpha0, .. } => *alpha0,
            Polarizability::Tabulated(t) => t.value_at(0.0),
        }
    }

    pub fn oscillator_frequency(&self) -> Option<f64> {
        match self.polarizability {
            Polarizability::SingleOscillator { omega0, .. } => Some(omega0),
            _ => None,
        }
    }

    /// λ₀ = 2πc/ω₀ for a single-oscillator atom.
    pub fn absorption_wavelength(&self) -> Option<f64> {
        self.oscillator_frequency().map(units::wavelength)
    }

    pub fn kind_name(&self) -> &'static str {
        match self.polarizability {
            Polarizability::Static { .. } => "static",
            Polarizability::SingleOscillator { .. } => "single-oscillator",
            Polarizability::Tabulated(_) => "tabulated",
        }
    }

    pub fn describe(&self) -> String {
        let body = match &self.polarizability {
            Polarizability::Static { alpha0 } => {
                format!("static alpha0={:.6e} m^3 ({} a.u.)", alpha0, units::m3_to_au(*alpha0))
            }
            Polarizability::SingleOscillator { alpha0, omega0 } => format!(
                "single-oscillator alpha0={:.6e} m^3 ({} a.u.) omega0={:.6e} rad/s",
                alpha0,
                units::m3_to_au(*alpha0),
                omega0
            ),
            Polarizability::Tabulated(t) => format!("tabulated rows={}", t.len()),
        };
        format!("{body} mass={:.6e} kg", self.mass)
    }
}

/// α(iξ) in m³.
pub fn polarizability_at(atom: &AtomModel, xi: f64) -> Result<f64, AtomError> {
    if !(xi >= 0.0) {
        return Err(AtomError::NegativeFrequency(xi));
    }
    Ok(match &atom.polarizability {
        Polarizability::Static { alpha0 } => *alpha0,
        Polarizability::SingleOscillator { alpha0, omega0 } => {
            let r = xi / omega0;
            alpha0 / (1.0 + r * r)
        }
        Polarizability::Tabulated(t) => t.value_at(xi),
    })
}

/// Small parameters of the perturbative expansions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorGeometry {
    /// β_A = ω_c/ω₀ = λ₀/(4πa); zero for a static atom.
    pub beta_a: f64,
    /// δ₀/a = λp/(2πa); zero for an ideal metal.
    pub delta0_over_a: f64,
}

pub fn geometry_params(atom: &AtomModel, wall: &WallModel, a: f64) -> Result<OscillatorGeometry, AtomError> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(AtomError::NonPositiveSeparation(a));
    }
    let beta_a = match &atom.polarizability {
        Polarizability::Static { .. } => 0.0,
        Polarizability::SingleOscillator { omega0, .. } => units::C / (2.0 * a * omega0),
        Polarizability::Tabulated(_) => {
            return Err(AtomError::Unsupported(
                "a tabulated polarizability has no single absorption frequency".into(),
            ))
        }
    };
    let delta0_over_a = match wall {
        WallModel::IdealMetal => 0.0,
        _ => match wall.plasma_wavelength() {
            Some(lp) => lp / (2.0 * std::f64::consts::PI * a),
            None => {
                return Err(AtomError::Unsupported(format!(
                    "{} wall has no plasma wavelength",
                    wall.kind_name()
                )))
            }
        },
    };
    Ok(OscillatorGeometry { beta_a, delta0_over_a })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::MICROMETRE;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn helium_polarizability() {
        let he = AtomModel::metastable_helium();
        let a0 = polarizability_at(&he, 0.0).unwrap();
        assert!((a0 - 315.63 * 1.482e-31).abs() < 1e-40);
        assert!((a0 / 4.678e-29 - 1.0).abs() < 1e-3);
        let w0 = he.oscillator_frequency().unwrap();
        assert!((polarizability_at(&he, w0).unwrap() - a0 / 2.0).abs() < 1e-15 * a0);
        assert!((polarizability_at(&he, 2.0 * w0).unwrap() - a0 / 5.0).abs() < 1e-15 * a0);
        assert!(polarizability_at(&he, -1.0).is_err());
        assert!((he.mass - 6.6465e-27).abs() < 1e-30);
    }

    #[test]
    fn helium_gold_geometry() {
        let he = AtomModel::metastable_helium();
        let au = WallModel::gold_plasma();
        let lambda0 = he.absorption_wavelength().unwrap();
        assert!((lambda0 / MICROMETRE - 1.0506).abs() < 1e-3);
        let g = geometry_params(&he, &au, MICROMETRE).unwrap();
        assert!((g.beta_a - 0.0836).abs() < 1e-4, "{}", g.beta_a);
        assert!((g.beta_a - lambda0 / (4.0 * PI * MICROMETRE)).abs() < 1e-16);
        assert!((g.delta0_over_a - 0.0218).abs() < 2e-4, "{}", g.delta0_over_a);
        // skin-depth coefficient −8/5·δ₀/a ≈ −0.035; with the (δ₀/a)² term ≈ −0.034
        assert!((-1.6 * g.delta0_over_a + 62.0 / 21.0 * g.delta0_over_a.powi(2) + 0.034).abs() < 5e-4);
        // dynamic-polarizability coefficient −20/3·β² ≈ −0.046
        assert!((-20.0 / 3.0 * g.beta_a.powi(2) + 0.046).abs() < 1e-3);
    }

    #[test]
    fn geometry_edge_cases() {
        let he = AtomModel::metastable_helium();
        let g = geometry_params(&he.as_static(), &WallModel::IdealMetal, MICROMETRE).unwrap();
        assert_eq!((g.beta_a, g.delta0_over_a), (0.0, 0.0));
        assert!(geometry_params(&he, &WallModel::silicon_oscillator(), MICROMETRE).is_err());
        assert!(geometry_params(&he, &WallModel::IdealMetal, 0.0).is_err());
        let far = geometry_params(&he, &WallModel::gold_plasma(), 1e6).unwrap();
        assert!(far.beta_a < 1e-7 && far.delta0_over_a < 1e-7);
    }

    #[test]
    fn table_interpolation() {
        let t = PolarizabilityTable::new(vec![0.0, 1.0, 10.0], vec![4.0, 2.0, 0.02]).unwrap();
        assert_eq!(t.value_at(0.0), 4.0);
        assert!((t.value_at(0.5) - 8f64.sqrt()).abs() < 1e-14);
        // power law 1/ξ² between 1 and 10 is reproduced exactly
        assert!((t.value_at(3.0) - 2.0 / 9.0).abs() < 1e-14);
        assert!((t.value_at(20.0) - 0.005).abs() < 1e-16);
        assert!(PolarizabilityTable::new(vec![0.0, 1.0], vec![1.0, 2.0]).is_err());
        assert!(PolarizabilityTable::new(vec![1.0, 1.0], vec![1.0, 1.0]).is_err());
        assert!(PolarizabilityTable::parse("# xi alpha\n0 1e-29\n1e15 5e-30\n").is_ok());
        assert!(PolarizabilityTable::parse("0 1e-29 3\n").is_err());
    }

    #[test]
    fn doubling_separation_halves_parameters() {
        let he = AtomModel::metastable_helium();
        let au = WallModel::gold_plasma();
        for a in [0.3e-6, 1e-6, 2.7e-6] {
            let g1 = geometry_params(&he, &au, a).unwrap();
            let g2 = geometry_params(&he, &au, 2.0 * a).unwrap();
            assert_eq!(g1.beta_a, 2.0 * g2.beta_a);
            assert_eq!(g1.delta0_over_a, 2.0 * g2.delta0_over_a);
        }
    }

    proptest! {
        #[test]
        fn oscillator_identity(lx in 10.0f64..18.0) {
            let he = AtomModel::metastable_helium();
            let w0 = he.oscillator_frequency().unwrap();
            let xi = 10f64.powf(lx);
            let a = polarizability_at(&he, xi).unwrap();
            let a0 = he.static_polarizability();
            prop_assert!((a * (1.0 + (xi / w0).powi(2)) / a0 - 1.0).abs() < 1e-14);
        }

        #[test]
        fn polarizability_non_increasing(lx in 10.0f64..18.0, dl in 0.0f64..1.0) {
            let table = PolarizabilityTable::new(
                vec![0.0, 1e14, 1e15, 3e15, 1e16],
                vec![5e-29, 4.9e-29, 2.5e-29, 5e-30, 4e-31],
            ).unwrap();
            let atoms = [
                AtomModel::metastable_helium(),
                AtomModel::metastable_helium().as_static(),
                AtomModel::tabulated(table, 1e-26).unwrap(),
            ];
            let x1 = 10f64.powf(lx);
            let x2 = x1 * 10f64.powf(dl);
            for atom in &atoms {
                let a1 = polarizability_at(atom, x1).unwrap();
                let a2 = polarizability_at(atom, x2).unwrap();
                prop_assert!(a1 > 0.0 && a2 > 0.0 && a2 <= a1);
            }
        }
    }
}
