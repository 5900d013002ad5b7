//! Material, atom and coefficient registry read from TOML.
//!
//! Quantities are given in the units people quote them in (eV, a.u., u, nm)
//! and converted to SI here, once.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::atoms::{AtomError, AtomModel, PolarizabilityTable};
use crate::materials::{LowFrequencyTail, MaterialError, OpticalTable, TabulatedPermittivity, WallModel};
use crate::units::{au_to_m3, dalton_to_kg, ev_nm3_to_si, ev_nm4_to_si, ev_to_rad_per_s, NANOMETRE};

/// Environment variable naming a config file.
pub const CONFIG_ENV: &str = "CPKIT_CONFIG";

const DEFAULTS: &str = include_str!("defaults.toml");

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{origin}: {message}")]
    Parse { origin: String, message: String },
    #[error("[{section}]: {message}")]
    Invalid { section: String, message: String },
    #[error("unknown material '{name}' (known: {})", .known.join(", "))]
    UnknownMaterial { name: String, known: Vec<String> },
    #[error("unknown atom '{name}' (known: {})", .known.join(", "))]
    UnknownAtom { name: String, known: Vec<String> },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    #[serde(default)]
    material: BTreeMap<String, RawMaterial>,
    #[serde(default)]
    atom: BTreeMap<String, RawAtom>,
    #[serde(default)]
    phenomenology: BTreeMap<String, RawCoefficients>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct RawMaterial {
    kind: String,
    omega_p_eV: Option<f64>,
    gamma_eV: Option<f64>,
    eps0: Option<f64>,
    omega_osc_eV: Option<f64>,
    table_path: Option<PathBuf>,
    low_freq_tail: Option<String>,
    window_eV: Option<[f64; 2]>,
    phenomenology: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct RawAtom {
    alpha0_au: Option<f64>,
    omega0_eV: Option<f64>,
    mass_u: Option<f64>,
    table_path: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct RawCoefficients {
    C3_eV_nm3: Option<f64>,
    C4_eV_nm4: Option<f64>,
    l_nm: Option<f64>,
}

pub use crate::phenomenology::CoefficientOverrides as ConfiguredCoefficients;

#[derive(Debug, Clone)]
pub struct MaterialEntry {
    pub name: String,
    pub model: WallModel,
    /// Section of `[phenomenology]` holding this material's coefficients.
    pub phenomenology: String,
}

#[derive(Debug, Clone)]
pub struct AtomEntry {
    pub name: String,
    pub model: AtomModel,
}

/// Everything the front end can refer to by name.
#[derive(Debug, Clone)]
pub struct Registry {
    materials: BTreeMap<String, MaterialEntry>,
    atoms: BTreeMap<String, AtomEntry>,
    coefficients: BTreeMap<String, ConfiguredCoefficients>,
    hash: String,
    source: Option<PathBuf>,
}

impl Registry {
    /// The built-in registry alone.
    pub fn builtin() -> Self {
        Self::build(None, None).expect("built-in registry is valid")
    }

    /// Built-ins overlaid with `path`, when given.
    pub fn load(path: Option<&Path>) -> Result<Self, ConfigError> {
        match path {
            None => Self::build(None, None),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|source| ConfigError::Io {
                    path: p.to_path_buf(),
                    source,
                })?;
                let dir = p.parent().map_or_else(|| PathBuf::from("."), Path::to_path_buf);
                let mut r = Self::build(Some(&text), Some((&p.display().to_string(), &dir)))?;
                r.source = Some(p.to_path_buf());
                Ok(r)
            }
        }
    }

    /// Built-ins overlaid with TOML text; relative table paths resolve against `base`.
    pub fn from_str_with_base(text: &str, base: &Path) -> Result<Self, ConfigError> {
        Self::build(Some(text), Some(("config", base)))
    }

    fn build(user: Option<&str>, origin: Option<(&str, &Path)>) -> Result<Self, ConfigError> {
        let defaults = parse(DEFAULTS, "built-in registry")?;
        let mut hasher = Sha256::new();
        hasher.update(DEFAULTS.as_bytes());

        let mut materials = BTreeMap::new();
        let mut atoms = BTreeMap::new();
        let mut coefficients = BTreeMap::new();
        ingest(defaults, Path::new("."), &mut materials, &mut atoms, &mut coefficients)?;

        if let Some(text) = user {
            hasher.update([0u8]);
            hasher.update(text.as_bytes());
            let (name, base) = origin.unwrap_or(("config", Path::new(".")));
            let raw = parse(text, name)?;
            ingest(raw, base, &mut materials, &mut atoms, &mut coefficients)?;
        }

        let digest = hasher.finalize();
        let mut hash = String::with_capacity(64);
        for b in digest {
            let _ = write!(hash, "{b:02x}");
        }
        Ok(Self {
            materials,
            atoms,
            coefficients,
            hash,
            source: None,
        })
    }

    /// SHA-256 over the built-in and user config text.
    pub fn hash(&self) -> &str {
        &self.hash
    }

    pub fn source(&self) -> Option<&Path> {
        self.source.as_deref()
    }

    pub fn material(&self, name: &str) -> Result<&MaterialEntry, ConfigError> {
        self.materials.get(name).ok_or_else(|| ConfigError::UnknownMaterial {
            name: name.to_string(),
            known: self.materials.keys().cloned().collect(),
        })
    }

    pub fn atom(&self, name: &str) -> Result<&AtomEntry, ConfigError> {
        self.atoms.get(name).ok_or_else(|| ConfigError::UnknownAtom {
            name: name.to_string(),
            known: self.atoms.keys().cloned().collect(),
        })
    }

    /// Overrides for a material; empty when none are configured.
    pub fn coefficients(&self, material: &str) -> ConfiguredCoefficients {
        self.materials
            .get(material)
            .and_then(|m| self.coefficients.get(&m.phenomenology))
            .copied()
            .unwrap_or_default()
    }

    pub fn materials(&self) -> impl Iterator<Item = &MaterialEntry> {
        self.materials.values()
    }

    pub fn atoms(&self) -> impl Iterator<Item = &AtomEntry> {
        self.atoms.values()
    }
}

fn parse(text: &str, origin: &str) -> Result<RawFile, ConfigError> {
    toml::from_str(text).map_err(|e| ConfigError::Parse {
        origin: origin.to_string(),
        message: e.to_string(),
    })
}

fn ingest(
    raw: RawFile,
    base: &Path,
    materials: &mut BTreeMap<String, MaterialEntry>,
    atoms: &mut BTreeMap<String, AtomEntry>,
    coefficients: &mut BTreeMap<String, ConfiguredCoefficients>,
) -> Result<(), ConfigError> {
    for (name, m) in raw.material {
        let section = format!("material.{name}");
        let model = material_model(&m, base).map_err(|message| ConfigError::Invalid {
            section: section.clone(),
            message,
        })?;
        let phenomenology = m.phenomenology.clone().unwrap_or_else(|| name.clone());
        materials.insert(
            name.clone(),
            MaterialEntry {
                name,
                model,
                phenomenology,
            },
        );
    }
    for (name, a) in raw.atom {
        let model = atom_model(&a, base).map_err(|message| ConfigError::Invalid {
            section: format!("atom.{name}"),
            message,
        })?;
        atoms.insert(name.clone(), AtomEntry { name, model });
    }
    for (name, c) in raw.phenomenology {
        let section = format!("phenomenology.{name}");
        let convert = |v: Option<f64>, key: &str, f: fn(f64) -> f64| -> Result<Option<f64>, ConfigError> {
            match v {
                None => Ok(None),
                Some(x) if x > 0.0 && x.is_finite() => Ok(Some(f(x))),
                Some(x) => Err(ConfigError::Invalid {
                    section: section.clone(),
                    message: format!("{key} must be positive, got {x}"),
                }),
            }
        };
        let parsed = ConfiguredCoefficients {
            c3: convert(c.C3_eV_nm3, "C3_eV_nm3", ev_nm3_to_si)?,
            c4: convert(c.C4_eV_nm4, "C4_eV_nm4", ev_nm4_to_si)?,
            l: convert(c.l_nm, "l_nm", |x| x * NANOMETRE)?,
        };
        if let (Some(c3), Some(c4), Some(l)) = (parsed.c3, parsed.c4, parsed.l) {
            if ((c4 / c3 - l) / l).abs() > 1e-6 {
                return Err(ConfigError::Invalid {
                    section,
                    message: "C3, C4 and l given together but l != C4/C3".into(),
                });
            }
        }
        coefficients.insert(name, parsed);
    }
    Ok(())
}

fn need(value: Option<f64>, key: &str, kind: &str) -> Result<f64, String> {
    value.ok_or_else(|| format!("kind '{kind}' requires {key}"))
}

fn material_model(m: &RawMaterial, base: &Path) -> Result<WallModel, String> {
    let err = |e: MaterialError| e.to_string();
    let kind = m.kind.as_str();
    match kind {
        "ideal-metal" => Ok(WallModel::IdealMetal),
        "plasma" => WallModel::plasma(ev_to_rad_per_s(need(m.omega_p_eV, "omega_p_eV", kind)?)).map_err(err),
        "drude" => WallModel::drude(
            ev_to_rad_per_s(need(m.omega_p_eV, "omega_p_eV", kind)?),
            ev_to_rad_per_s(need(m.gamma_eV, "gamma_eV", kind)?),
        )
        .map_err(err),
        "dielectric-oscillator" => WallModel::dielectric_oscillator(
            need(m.eps0, "eps0", kind)?,
            ev_to_rad_per_s(need(m.omega_osc_eV, "omega_osc_eV", kind)?),
        )
        .map_err(err),
        "tabulated" => {
            let rel = m.table_path.as_ref().ok_or("kind 'tabulated' requires table_path")?;
            let table = OpticalTable::load(&base.join(rel)).map_err(err)?;
            let tail = match m.low_freq_tail.as_deref() {
                None | Some("insulator") => LowFrequencyTail::Insulator,
                Some("drude") => LowFrequencyTail::Drude,
                Some(other) => return Err(format!("low_freq_tail must be 'insulator' or 'drude', got '{other}'")),
            };
            let mut model = TabulatedPermittivity::new(table, tail);
            if let Some([lo, hi]) = m.window_eV {
                if !(lo >= 0.0 && hi > lo) {
                    return Err(format!("window_eV must satisfy 0 <= lower < upper, got [{lo}, {hi}]"));
                }
                model = model.with_window(ev_to_rad_per_s(lo), ev_to_rad_per_s(hi));
            }
            Ok(WallModel::tabulated(model))
        }
        other => Err(format!(
            "unknown kind '{other}' (expected ideal-metal, plasma, drude, dielectric-oscillator or tabulated)"
        )),
    }
}

fn atom_model(a: &RawAtom, base: &Path) -> Result<AtomModel, String> {
    let err = |e: AtomError| e.to_string();
    let mass = dalton_to_kg(a.mass_u.unwrap_or(crate::atoms::HELIUM_MASS_U));
    if let Some(rel) = &a.table_path {
        let table = PolarizabilityTable::load(&base.join(rel)).map_err(err)?;
        return AtomModel::tabulated(table, mass).map_err(err);
    }
    let alpha0 = au_to_m3(a.alpha0_au.ok_or("alpha0_au or table_path is required")?);
    match a.omega0_eV {
        Some(w) => AtomModel::single_oscillator(alpha0, ev_to_rad_per_s(w), mass).map_err(err),
        None => AtomModel::static_atom(alpha0, mass).map_err(err),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::GOLD_PLASMA_FREQUENCY_EV;

    #[test]
    fn builtin_entries() {
        let r = Registry::builtin();
        let names: Vec<_> = r.materials().map(|m| m.name.as_str()).collect();
        assert_eq!(names, ["Au", "Au-Drude", "Si-oscillator", "ideal-metal"]);
        let au = r.material("Au").unwrap();
        assert_eq!(
            au.model.plasma_frequency(),
            Some(ev_to_rad_per_s(GOLD_PLASMA_FREQUENCY_EV))
        );
        assert_eq!(r.atom("HeStar").unwrap().model, AtomModel::metastable_helium());
        assert_eq!(r.coefficients("Au-Drude"), r.coefficients("Au"));
        assert!(r.coefficients("ideal-metal").is_empty());
        assert_eq!(r.hash().len(), 64);
    }

    #[test]
    fn unknown_names_list_known_ones() {
        let r = Registry::builtin();
        let msg = r.material("Cu").unwrap_err().to_string();
        assert!(msg.contains("Au-Drude") && msg.contains("ideal-metal"), "{msg}");
        let msg = r.atom("Rb").unwrap_err().to_string();
        assert!(msg.contains("HeStar"), "{msg}");
    }

    #[test]
    fn overlay_replaces_and_extends() {
        let text = r#"
            [material.Au]
            kind = "drude"
            omega_p_eV = 9.0
            gamma_eV = 0.02

            [atom.Na]
            alpha0_au = 162.7
            mass_u = 22.99

            [phenomenology.Au]
            C4_eV_nm4 = 1.0
            l_nm = 200.0
        "#;
        let r = Registry::from_str_with_base(text, Path::new(".")).unwrap();
        assert_eq!(
            r.material("Au").unwrap().model.kind_name(),
            WallModel::gold_drude().kind_name()
        );
        assert_eq!(r.atom("Na").unwrap().model.kind_name(), "static");
        let c = r.coefficients("Au");
        assert!(c.c3.is_none());
        assert!((c.l.unwrap() - 200e-9).abs() < 1e-20);
        assert_ne!(r.hash(), Registry::builtin().hash());
    }

    #[test]
    fn rejects_bad_input() {
        for text in [
            "[material.X]\nkind = \"plasma\"\n",
            "[material.X]\nkind = \"copper\"\n",
            "[material.X]\nkind = \"plasma\"\nomega_p_eV = -1.0\n",
            "[material.X]\nkind = \"plasma\"\nomega_p = 9.0\n",
            "[atom.X]\nomega0_eV = 1.0\n",
            "[phenomenology.X]\nC3_eV_nm3 = 0.0\n",
            "[phenomenology.X]\nC3_eV_nm3 = 1.0\nC4_eV_nm4 = 1.0\nl_nm = 3.0\n",
            "not toml [",
        ] {
            assert!(Registry::from_str_with_base(text, Path::new(".")).is_err(), "{text}");
        }
    }

    #[test]
    fn table_paths_resolve_against_config_dir() {
        let dir = std::env::temp_dir().join(format!("cpkit-config-{}", std::process::id()));
        std::fs::create_dir_all(dir.join("data")).unwrap();
        std::fs::write(
            dir.join("data/wall.txt"),
            "# omega_rad_s im_eps\n1e14 0.5\n1e15 2.0\n1e16 0.1\n",
        )
        .unwrap();
        std::fs::write(
            dir.join("cfg.toml"),
            "[material.T]\nkind = \"tabulated\"\ntable_path = \"data/wall.txt\"\n",
        )
        .unwrap();
        let r = Registry::load(Some(&dir.join("cfg.toml"))).unwrap();
        assert_eq!(r.material("T").unwrap().model.kind_name(), "tabulated");
        let _ = std::fs::remove_dir_all(&dir);
    }
}
