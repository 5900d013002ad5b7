//! Parameter sweeps producing delimited tables with a provenance header.
//!
//! Points are evaluated in parallel and emitted in grid order; every number
//! is printed with 12 significant digits, so reruns with the same config are
//! byte-identical regardless of thread count.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::asymptotics::sigma;
use crate::config::{ConfigError, Registry};
use crate::lifshitz::{Diagnostics, LifshitzError, Quantity, Scene, Solver, SolverOptions};
use crate::phenomenology::{
    coefficient_report, phenomenological_energy, relative_difference, CoefficientReport, PhenomenologicalPotential,
    PhenomenologyError,
};
use crate::units::{si_to_ev_nm4, NANOMETRE};

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("dispersion coefficients: {0}")]
    Coefficients(#[from] PhenomenologyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepQuantity {
    FreeEnergy,
    Force,
    Entropy,
    /// a⁴|E(a)|, eV·nm⁴
    A4E,
    /// a⁵|F(a)|/4, eV·nm⁴; tends to C₄ at large a like a4E
    A4FScaled,
    /// σ(τ), swept over τ directly
    Sigma,
    /// δE in percent
    DeltaE,
}

impl SweepQuantity {
    pub const ALL: [Self; 7] = [
        Self::FreeEnergy,
        Self::Force,
        Self::Entropy,
        Self::A4E,
        Self::A4FScaled,
        Self::Sigma,
        Self::DeltaE,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::FreeEnergy => "free_energy",
            Self::Force => "force",
            Self::Entropy => "entropy",
            Self::A4E => "a4E",
            Self::A4FScaled => "a4F_scaled",
            Self::Sigma => "sigma",
            Self::DeltaE => "deltaE",
        }
    }

    fn column(self) -> &'static str {
        match self {
            Self::FreeEnergy => "free_energy_J",
            Self::Force => "force_N",
            Self::Entropy => "entropy_J_per_K",
            Self::A4E => "a4E_eV_nm4",
            Self::A4FScaled => "a4F_scaled_eV_nm4",
            Self::Sigma => "sigma",
            Self::DeltaE => "deltaE_percent",
        }
    }

    fn definition(self) -> &'static str {
        match self {
            Self::FreeEnergy => "Lifshitz free energy (zero-temperature energy at T = 0), J",
            Self::Force => "Lifshitz force, N (negative = attractive)",
            Self::Entropy => "Lifshitz entropy -dF/dT, J/K",
            Self::A4E => "a^4 |E(a)| with E the free energy at the given T, eV nm^4",
            Self::A4FScaled => "a^5 |F(a)| / 4 with F the force at the given T, eV nm^4",
            Self::Sigma => "ideal-metal entropy factor sigma(tau), dimensionless",
            Self::DeltaE => "(E_acc - E_ph)/E_acc in percent, E_acc the Lifshitz free energy, E_ph = -C4/(a^3 (a + l))",
        }
    }

    /// Whether the grid runs over τ instead of the separation.
    pub fn sweeps_tau(self) -> bool {
        self == Self::Sigma
    }
}

impl fmt::Display for SweepQuantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepQuantity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|q| q.name() == s).ok_or_else(|| {
            let names: Vec<_> = Self::ALL.iter().map(|q| q.name()).collect();
            format!("unknown quantity '{s}' (expected one of {})", names.join(", "))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// `count` points from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl Grid {
    pub fn validate(&self) -> Result<(), SweepError> {
        if self.count < 2 {
            return Err(SweepError::Grid(format!("need at least 2 points, got {}", self.count)));
        }
        if !(self.start.is_finite() && self.stop.is_finite() && self.start < self.stop) {
            return Err(SweepError::Grid(format!(
                "need start < stop, got {} .. {}",
                self.start, self.stop
            )));
        }
        if !(self.start > 0.0) {
            return Err(SweepError::Grid(format!("start must be positive, got {}", self.start)));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let n = self.count;
        let last = (n - 1) as f64;
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    return self.stop;
                }
                let t = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.start + t * (self.stop - self.start),
                    Spacing::Log => self.start * (self.stop / self.start).powf(t),
                }
            })
            .collect()
    }
}

/// What to sweep. The grid is in nm, or in τ for [`SweepQuantity::Sigma`].
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub quantity: SweepQuantity,
    pub grid: Grid,
    /// K
    pub temperature: f64,
    pub material: String,
    pub atom: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub x: f64,
    pub value: Result<f64, String>,
    pub diagnostics: Option<Diagnostics>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub header: Vec<String>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Row>,
}

impl SweepTable {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.value.is_err()).count()
    }

    /// Tab-separated text: `#` header lines, a column line, then one row per point.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for line in &self.header {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
        out.push_str(&self.columns.join("\t"));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&sig12(row.x));
            out.push('\t');
            match &row.value {
                Ok(v) => out.push_str(&sig12(*v)),
                Err(_) => out.push_str("nan"),
            }
            out.push('\t');
            match &row.diagnostics {
                Some(d) => out.push_str(&format!("{}\t{}\t{:.3e}", d.method.name(), d.terms, d.total_error())),
                None => out.push_str("-\t-\t-"),
            }
            out.push('\t');
            match &row.value {
                Ok(_) => out.push_str("ok"),
                Err(e) => {
                    out.push_str("error: ");
                    out.push_str(&e.replace(['\t', '\n'], " "));
                }
            }
            out.push('\n');
        }
        out
    }
}

/// 12 significant digits in scientific notation.
pub fn sig12(v: f64) -> String {
    format!("{v:.11e}")
}

pub fn run_sweep(spec: &SweepSpec, registry: &Registry, options: SolverOptions) -> Result<SweepTable, SweepError> {
    spec.grid.validate()?;
    if !(spec.temperature >= 0.0 && spec.temperature.is_finite()) {
        return Err(SweepError::Grid(format!(
            "temperature must be >= 0, got {}",
            spec.temperature
        )));
    }
    let material = registry.material(&spec.material)?;
    let atom = registry.atom(&spec.atom)?;
    let wall = &material.model;
    let atom_model = &atom.model;
    let solver = Solver::new(options);
    let t = spec.temperature;

    let report = match spec.quantity {
        SweepQuantity::DeltaE => Some(coefficient_report(
            wall,
            atom_model,
            registry.coefficients(&spec.material),
        )?),
        _ => None,
    };
    let potential = report.as_ref().map(|r| r.effective.potential());

    let header = header_lines(spec, registry, &options, report.as_ref());
    let x_column = if spec.quantity.sweeps_tau() { "tau" } else { "a_nm" };
    let columns = vec![
        x_column,
        spec.quantity.column(),
        "method",
        "terms",
        "error_estimate",
        "status",
    ];

    let rows = spec
        .grid
        .points()
        .into_par_iter()
        .map(|x| {
            let outcome = evaluate(spec.quantity, x, t, &solver, wall, atom_model, potential.as_ref());
            match outcome {
                Ok((value, diagnostics)) => Row {
                    x,
                    value: Ok(value),
                    diagnostics,
                },
                Err(e) => Row {
                    x,
                    value: Err(e),
                    diagnostics: None,
                },
            }
        })
        .collect();

    Ok(SweepTable { header, columns, rows })
}

type Point = Result<(f64, Option<Diagnostics>), String>;

fn evaluate(
    quantity: SweepQuantity,
    x: f64,
    t: f64,
    solver: &Solver,
    wall: &crate::materials::WallModel,
    atom: &crate::atoms::AtomModel,
    potential: Option<&PhenomenologicalPotential>,
) -> Point {
    if quantity == SweepQuantity::Sigma {
        return sigma(x).map(|s| (s, None)).map_err(|e| e.to_string());
    }
    let a = x * NANOMETRE;
    let scene = Scene::new(a, t).map_err(|e| e.to_string())?;
    let lift = |r: Result<Quantity, LifshitzError>| r.map_err(|e| e.to_string());
    let (value, q) = match quantity {
        SweepQuantity::FreeEnergy => {
            let q = lift(solver.free_energy(&scene, wall, atom))?;
            (q.value, q)
        }
        SweepQuantity::Force => {
            let q = lift(solver.force(&scene, wall, atom))?;
            (q.value, q)
        }
        SweepQuantity::Entropy => {
            let q = lift(solver.entropy(&scene, wall, atom))?;
            (q.value, q)
        }
        SweepQuantity::A4E => {
            let q = lift(solver.free_energy(&scene, wall, atom))?;
            (si_to_ev_nm4(a.powi(4) * q.value.abs()), q)
        }
        SweepQuantity::A4FScaled => {
            let q = lift(solver.force(&scene, wall, atom))?;
            (si_to_ev_nm4(a.powi(5) * q.value.abs() / 4.0), q)
        }
        SweepQuantity::DeltaE => {
            let q = lift(solver.free_energy(&scene, wall, atom))?;
            let p = potential.expect("coefficients resolved for deltaE");
            let d = relative_difference(q.value, phenomenological_energy(p, a)).map_err(|e| e.to_string())?;
            (100.0 * d, q)
        }
        SweepQuantity::Sigma => unreachable!(),
    };
    Ok((value, Some(q.diagnostics)))
}

fn header_lines(
    spec: &SweepSpec,
    registry: &Registry,
    options: &SolverOptions,
    report: Option<&CoefficientReport>,
) -> Vec<String> {
    let g = &spec.grid;
    let spacing = match g.spacing {
        Spacing::Linear => "linear",
        Spacing::Log => "log",
    };
    let x_name = if spec.quantity.sweeps_tau() { "tau" } else { "a [nm]" };
    let mut lines = vec![
        format!("cpkit {}", env!("CARGO_PKG_VERSION")),
        format!("config_sha256: {}", registry.hash()),
        format!("quantity: {} = {}", spec.quantity, spec.quantity.definition()),
        format!(
            "grid: {x_name} from {:e} to {:e}, {} points, {spacing}",
            g.start, g.stop, g.count
        ),
        format!("temperature_K: {:e}", spec.temperature),
    ];
    if let (Ok(m), Ok(a)) = (registry.material(&spec.material), registry.atom(&spec.atom)) {
        lines.push(format!("material: {} = {}", m.name, m.model.describe()));
        lines.push(format!("atom: {} = {}", a.name, a.model.describe()));
    }
    lines.push(format!(
        "solver: inner_tolerance={:e} outer_tolerance={:e} truncation={:e} consecutive={} cutoff={:e} closed_form_shortcut={}",
        options.inner_tolerance,
        options.outer_tolerance,
        options.truncation,
        options.consecutive,
        options.cutoff,
        options.closed_form_shortcut
    ));
    if let Some(r) = report {
        let e = &r.effective;
        lines.push(format!(
            "coefficients: C3={:e} J m^3 ({}) C4={:e} J m^4 ({}) l={:e} m ({}) quantitative={}",
            e.c3.value, e.c3.provenance, e.c4.value, e.c4.provenance, e.l.value, e.l.provenance, r.quantitative
        ));
    }
    lines
}
