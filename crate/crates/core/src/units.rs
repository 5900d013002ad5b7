//! Physical constants and unit conversions.
//!
//! Every public interface of the crate works in SI. Atomic units, electron
//! volts and nanometres are accepted only at the configuration layer and
//! converted here, once.

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum, m/s.
pub const C: f64 = 299_792_458.0;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Elementary charge, C (also J per eV).
pub const EV: f64 = 1.602_176_634e-19;
/// Unified atomic mass unit, kg.
pub const DALTON: f64 = 1.660_539_066_60e-27;
/// One atomic unit of polarizability expressed as a volume, m³.
pub const AU_POLARIZABILITY: f64 = 1.482e-31;

pub const NANOMETRE: f64 = 1e-9;
pub const MICROMETRE: f64 = 1e-6;

/// Angular frequency (rad/s) of a photon energy given in eV.
pub fn ev_to_rad_per_s(energy_ev: f64) -> f64 {
    energy_ev * EV / HBAR
}

pub fn rad_per_s_to_ev(omega: f64) -> f64 {
    omega * HBAR / EV
}

pub fn au_to_m3(alpha_au: f64) -> f64 {
    alpha_au * AU_POLARIZABILITY
}

pub fn m3_to_au(alpha_m3: f64) -> f64 {
    alpha_m3 / AU_POLARIZABILITY
}

pub fn dalton_to_kg(mass_u: f64) -> f64 {
    mass_u * DALTON
}

/// eV·nm³ → J·m³
pub fn ev_nm3_to_si(value: f64) -> f64 {
    value * EV * 1e-27
}

pub fn si_to_ev_nm3(value: f64) -> f64 {
    value / (EV * 1e-27)
}

/// eV·nm⁴ → J·m⁴
pub fn ev_nm4_to_si(value: f64) -> f64 {
    value * EV * 1e-36
}

pub fn si_to_ev_nm4(value: f64) -> f64 {
    value / (EV * 1e-36)
}

/// Wavelength 2πc/ω of an angular frequency, m.
pub fn wavelength(omega: f64) -> f64 {
    2.0 * std::f64::consts::PI * C / omega
}
