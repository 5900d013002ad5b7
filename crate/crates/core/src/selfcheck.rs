//! Oracle suite: the Lifshitz solver against closed forms and expansions.

use crate::asymptotics::{
    casimir_polder_energy, classical_limits, dimensionless_temperature, eta, eta_series, ideal_metal_static,
    low_temperature, perturbative_energy, sigma,
};
use crate::atoms::AtomModel;
use crate::lifshitz::{Scene, Solver, SolverOptions};
use crate::materials::WallModel;
use crate::phenomenology::{c4_ideal, c4_lifshitz};
use crate::special::zeta;
use crate::units::MICROMETRE;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    /// Largest deviation seen; NaN when the check could not be evaluated.
    pub residual: f64,
    pub threshold: f64,
    pub detail: String,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.residual <= self.threshold
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

type Outcome = Result<(f64, String), String>;

fn check(name: &'static str, threshold: f64, f: impl FnOnce() -> Outcome) -> Check {
    match f() {
        Ok((residual, detail)) => Check {
            name,
            residual,
            threshold,
            detail,
        },
        Err(detail) => Check {
            name,
            residual: f64::NAN,
            threshold,
            detail,
        },
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Runs every check; the order is fixed.
pub fn self_check() -> Vec<Check> {
    let numeric = Solver::new(SolverOptions::numeric());
    let solver = Solver::default();
    let he = AtomModel::metastable_helium();
    let he0 = he.as_static();
    let alpha0 = he.static_polarizability();
    let ideal = WallModel::IdealMetal;
    let au = WallModel::gold_plasma();
    let a = MICROMETRE;
    let taus = [0.1, 1.0, 10.0];

    vec![
        check("eta-oracle", 1e-8, || {
            let mut worst: f64 = 0.0;
            for &tau in &taus {
                let scene = Scene::from_tau(a, tau).map_err(err)?;
                let f = numeric.free_energy(&scene, &ideal, &he0).map_err(err)?.value;
                let (exact, _, _) = ideal_metal_static(alpha0, a, scene.temperature).map_err(err)?;
                worst = worst.max(rel(f, exact));
            }
            Ok((worst, "ideal metal, static atom, a = 1 um, tau = 0.1, 1, 10".into()))
        }),
        check("kappa-oracle", 1e-7, || {
            let mut worst: f64 = 0.0;
            for &tau in &taus {
                let scene = Scene::from_tau(a, tau).map_err(err)?;
                let f = numeric.force(&scene, &ideal, &he0).map_err(err)?.value;
                let (_, exact, _) = ideal_metal_static(alpha0, a, scene.temperature).map_err(err)?;
                worst = worst.max(rel(f, exact));
            }
            Ok((worst, "ideal metal, static atom, a = 1 um, tau = 0.1, 1, 10".into()))
        }),
        check("zero-temperature-oracle", 1e-8, || {
            let e = numeric.zero_temperature_energy(a, &ideal, &he0).map_err(err)?.value;
            Ok((
                rel(e, casimir_polder_energy(alpha0, a)),
                "T = 0 integral vs -3 hbar c alpha(0)/(8 pi a^4)".into(),
            ))
        }),
        check("sigma-oracle", 1e-8, || {
            let scene = Scene::from_tau(a, 1.0).map_err(err)?;
            let s = numeric.entropy(&scene, &ideal, &he0).map_err(err)?.value;
            let (_, _, exact) = ideal_metal_static(alpha0, a, scene.temperature).map_err(err)?;
            Ok((rel(s, exact), "finite-difference entropy at tau = 1".into()))
        }),
        check("eta-series", 1.0, || {
            let tau: f64 = 0.5;
            let d = (eta(tau).map_err(err)? - eta_series(tau)).abs();
            Ok((d / tau.powi(10), "|eta - series| / tau^10 at tau = 0.5".into()))
        }),
        check("sigma-zero-crossing", 0.3, || {
            let (mut lo, mut hi) = (0.1, 10.0);
            if !(sigma(lo).map_err(err)? < 0.0 && sigma(hi).map_err(err)? > 0.0) {
                return Err("sigma does not change sign on [0.1, 10]".into());
            }
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if sigma(mid).map_err(err)? < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok(((lo - 3.0).abs(), format!("crossing at tau = {lo:.6}")))
        }),
        check("classical-limit", 1e-3, || {
            let t = 30.0 / dimensionless_temperature(a, 1.0);
            let mut worst: f64 = 0.0;
            for wall in [&ideal, &au] {
                let scene = Scene::new(a, t).map_err(err)?;
                let limits = classical_limits(a, t, &he).map_err(err)?;
                worst = worst.max(rel(
                    solver.free_energy(&scene, wall, &he).map_err(err)?.value,
                    limits.free_energy,
                ));
                worst = worst.max(rel(solver.force(&scene, wall, &he).map_err(err)?.value, limits.force));
            }
            Ok((worst, "tau = 30, ideal metal and plasma Au".into()))
        }),
        check("force-derivative", 1e-5, || {
            let (x, t) = (2.0 * MICROMETRE, 300.0);
            let h = 1e-3 * x;
            let f = |x: f64| -> Result<f64, String> {
                Ok(solver
                    .free_energy(&Scene::new(x, t).map_err(err)?, &au, &he)
                    .map_err(err)?
                    .value)
            };
            let d1 = (f(x + h)? - f(x - h)?) / (2.0 * h);
            let d2 = (f(x + 0.5 * h)? - f(x - 0.5 * h)?) / h;
            let derivative = (4.0 * d2 - d1) / 3.0;
            let force = solver
                .force(&Scene::new(x, t).map_err(err)?, &au, &he)
                .map_err(err)?
                .value;
            Ok((rel(-derivative, force), "plasma Au, a = 2 um, T = 300 K".into()))
        }),
        check("zero-frequency-te", 0.0, || {
            let scene = Scene::new(2.0 * MICROMETRE, 300.0).map_err(err)?;
            let base = solver.free_energy(&scene, &au, &he).map_err(err)?.value;
            let perturbed = Solver::new(SolverOptions {
                zero_frequency_te: Some(0.37),
                ..SolverOptions::default()
            })
            .free_energy(&scene, &au, &he)
            .map_err(err)?
            .value;
            Ok(((perturbed - base).abs(), "r_TE(0) replaced by 0.37".into()))
        }),
        check("low-temperature-expansion", 0.05, || {
            let x = 2.0 * MICROMETRE;
            let t = 0.5 / dimensionless_temperature(x, 1.0);
            let numeric_delta = solver
                .free_energy(&Scene::new(x, t).map_err(err)?, &au, &he)
                .map_err(err)?
                .value
                - solver.zero_temperature_energy(x, &au, &he).map_err(err)?.value;
            let expansion = low_temperature(x, t, &he, &au).map_err(err)?.free_energy;
            Ok((
                rel(expansion, numeric_delta),
                "free-energy correction, plasma Au, a = 2 um, tau = 0.5".into(),
            ))
        }),
        check("perturbative-energy", 0.01, || {
            let x = 2.0 * MICROMETRE;
            let e = solver.zero_temperature_energy(x, &au, &he).map_err(err)?.value;
            let p = perturbative_energy(x, &he, &au).map_err(err)?.value;
            Ok((rel(p, e), "plasma Au, a = 2 um, T = 0".into()))
        }),
        check("plasma-drude", 5e-3, || {
            let scene = Scene::new(MICROMETRE, 300.0).map_err(err)?;
            let p = solver.free_energy(&scene, &au, &he).map_err(err)?.value;
            let d = solver
                .free_energy(&scene, &WallModel::gold_drude(), &he)
                .map_err(err)?
                .value;
            Ok((rel(d, p), "Au, a = 1 um, T = 300 K".into()))
        }),
        check("c4-extraction", 1e-3, || {
            let extracted = c4_lifshitz(&ideal, &he0).map_err(err)?.value;
            Ok((
                rel(extracted, c4_ideal(&he).map_err(err)?),
                "large-a extrapolation vs closed form".into(),
            ))
        }),
        check("zeta-values", 1e-14, || {
            let z5 = 1.036_927_755_143_37;
            let z7 = 1.008_349_277_381_923;
            Ok((rel(zeta(5.0), z5).max(rel(zeta(7.0), z7)), "zeta(5), zeta(7)".into()))
        }),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_build_passes_every_check() {
        let checks = self_check();
        for c in &checks {
            assert!(
                c.passed(),
                "{} residual {:e} > {:e}: {}",
                c.name,
                c.residual,
                c.threshold,
                c.detail
            );
        }
        let mut names: Vec<_> = checks.iter().map(|c| c.name).collect();
        names.dedup();
        assert_eq!(names.len(), checks.len());
    }

    #[test]
    fn nan_residual_fails() {
        let c = check("x", 1.0, || Err("boom".into()));
        assert!(!c.passed());
    }
}
