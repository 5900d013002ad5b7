//! Tabulated optical data and its Kramers-Kronig continuation to the
//! imaginary frequency axis.
//!
//! ε(iξ) = 1 + (2/π) ∫₀^∞ ω Im ε(ω) / (ω² + ξ²) dω
//!
//! Inside the table, Im ε is interpolated linearly in ω and each panel is
//! integrated analytically against the kernel ω/(ω² + ξ²). Outside the table
//! the extrapolation is explicit:
//!
//! * below the first row, conductors get a Drude tail
//!   Im ε = ωp²γ / (ω(ω² + γ²)) fitted through the two lowest rows, insulators
//!   get Im ε = 0;
//! * above the last row, Im ε falls off as ω⁻³ from the last tabulated value.
//!
//! Both tails are integrated numerically to the configured tolerance.

use std::f64::consts::FRAC_2_PI;
use std::path::Path;

use crate::materials::MaterialError;
use crate::quadrature::{self, Tolerance};

/// Low-frequency behaviour assumed below the first tabulated row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LowFrequencyTail {
    /// Im ε = 0 below the table (insulator).
    Insulator,
    /// Drude absorption fitted to the two lowest rows (conductor).
    Drude,
}

/// Rows of (ω [rad/s], Im ε(ω)), strictly increasing in ω.
#[derive(Debug, Clone, PartialEq)]
pub struct OpticalTable {
    omega: Vec<f64>,
    im_eps: Vec<f64>,
}

impl OpticalTable {
    pub fn new(omega: Vec<f64>, im_eps: Vec<f64>) -> Result<Self, MaterialError> {
        if omega.len() != im_eps.len() {
            return Err(MaterialError::InvalidTable(format!(
                "{} frequencies but {} absorption values",
                omega.len(),
                im_eps.len()
            )));
        }
        if omega.len() < 2 {
            return Err(MaterialError::InvalidTable("at least two rows are required".into()));
        }
        for (i, (&w, &e)) in omega.iter().zip(&im_eps).enumerate() {
            if !w.is_finite() || w <= 0.0 {
                return Err(MaterialError::InvalidTable(format!(
                    "row {i}: frequency {w} must be positive"
                )));
            }
            if !e.is_finite() || e < 0.0 {
                return Err(MaterialError::InvalidTable(format!(
                    "row {i}: Im eps {e} must be non-negative"
                )));
            }
        }
        if let Some(i) = omega.windows(2).position(|w| w[1] <= w[0]) {
            return Err(MaterialError::InvalidTable(format!(
                "frequencies not strictly increasing at row {}",
                i + 1
            )));
        }
        Ok(Self { omega, im_eps })
    }

    /// Parses the two-column text format: `# omega_rad_s im_eps` header,
    /// whitespace separated columns, `#` comments.
    pub fn parse(text: &str) -> Result<Self, MaterialError> {
        let mut omega = Vec::new();
        let mut im_eps = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut cols = line.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<f64, MaterialError> {
                let tok = tok
                    .ok_or_else(|| MaterialError::InvalidTable(format!("line {}: expected two columns", lineno + 1)))?;
                tok.parse::<f64>()
                    .map_err(|e| MaterialError::InvalidTable(format!("line {}: {tok:?}: {e}", lineno + 1)))
            };
            omega.push(parse(cols.next())?);
            im_eps.push(parse(cols.next())?);
            if cols.next().is_some() {
                return Err(MaterialError::InvalidTable(format!(
                    "line {}: more than two columns",
                    lineno + 1
                )));
            }
        }
        Self::new(omega, im_eps)
    }

    pub fn load(path: &Path) -> Result<Self, MaterialError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| MaterialError::InvalidTable(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# omega_rad_s im_eps\n");
        for (w, e) in self.omega.iter().zip(&self.im_eps) {
            out.push_str(&format!("{w:.16e} {e:.16e}\n"));
        }
        out
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.omega
    }

    pub fn absorption(&self) -> &[f64] {
        &self.im_eps
    }

    pub fn frequency_range(&self) -> (f64, f64) {
        (self.omega[0], self.omega[self.omega.len() - 1])
    }

    /// Interpolated Im ε at a real frequency, including the extrapolated tails.
    pub fn absorption_at(&self, omega: f64, tail: LowFrequencyTail) -> f64 {
        let (lo, hi) = self.frequency_range();
        if omega < lo {
            match (tail, self.drude_fit()) {
                (LowFrequencyTail::Drude, Some(fit)) => fit.absorption(omega),
                (LowFrequencyTail::Drude, None) => self.im_eps[0] * lo / omega,
                (LowFrequencyTail::Insulator, _) => 0.0,
            }
        } else if omega > hi {
            self.im_eps[self.len() - 1] * (hi / omega).powi(3)
        } else {
            let i = self.omega.partition_point(|&w| w <= omega).clamp(1, self.len() - 1);
            let (w0, w1) = (self.omega[i - 1], self.omega[i]);
            let (e0, e1) = (self.im_eps[i - 1], self.im_eps[i]);
            e0 + (e1 - e0) * (omega - w0) / (w1 - w0)
        }
    }

    /// Drude parameters (ωp², γ) through the two lowest rows, if the rows
    /// admit a Drude shape with real positive γ.
    pub fn drude_fit(&self) -> Option<DrudeTail> {
        let (w1, w2) = (self.omega[0], self.omega[1]);
        let (i1, i2) = (self.im_eps[0], self.im_eps[1]);
        // Im ε·ω·(ω² + γ²) = ωp²γ at both rows
        let denom = i1 * w1 - i2 * w2;
        let gamma2 = (i2 * w2.powi(3) - i1 * w1.powi(3)) / denom;
        if !(gamma2.is_finite() && gamma2 > 0.0) {
            return None;
        }
        let gamma = gamma2.sqrt();
        let strength = i1 * w1 * (w1 * w1 + gamma2); // ωp²γ
        (strength > 0.0).then_some(DrudeTail { strength, gamma })
    }
}

/// Im ε(ω) = strength / (ω(ω² + γ²)) with strength = ωp²γ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrudeTail {
    pub strength: f64,
    pub gamma: f64,
}

impl DrudeTail {
    pub fn absorption(&self, omega: f64) -> f64 {
        self.strength / (omega * (omega * omega + self.gamma * self.gamma))
    }

    pub fn plasma_frequency(&self) -> f64 {
        (self.strength / self.gamma).sqrt()
    }
}

/// Imaginary-axis permittivity computed from an optical table.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedPermittivity {
    pub table: OpticalTable,
    pub tail: LowFrequencyTail,
    /// ξ range (rad/s) over which [`kramers_kronig`] accepts queries.
    pub window: (f64, f64),
    pub tolerance: f64,
}

impl TabulatedPermittivity {
    pub fn new(table: OpticalTable, tail: LowFrequencyTail) -> Self {
        Self {
            table,
            tail,
            window: (0.0, f64::INFINITY),
            tolerance: KK_TOLERANCE,
        }
    }

    pub fn with_window(mut self, lower: f64, upper: f64) -> Self {
        self.window = (lower, upper);
        self
    }

    pub fn is_conductor(&self) -> bool {
        self.tail == LowFrequencyTail::Drude
    }
}

pub const KK_TOLERANCE: f64 = 1e-6;

/// ∫_{ω₀}^{ω₁} (A + Bω) ω/(ω² + ξ²) dω for the linear interpolant through
/// the panel end points.
fn panel_integral(w0: f64, w1: f64, e0: f64, e1: f64, xi: f64) -> f64 {
    let slope = (e1 - e0) / (w1 - w0);
    let intercept = e0 - slope * w0;
    // ∫ ω/(ω²+ξ²) = ½ ln(ω²+ξ²)
    let log_part = 0.5 * ((w1 * w1 - w0 * w0) / (w0 * w0 + xi * xi)).ln_1p();
    // ∫ ω²/(ω²+ξ²) = ξ·[x − atan x], x = ω/ξ
    let (x0, x1) = (w0 / xi, w1 / xi);
    let poly_part = xi * (x_minus_atan(x1) - x_minus_atan(x0));
    intercept * log_part + slope * poly_part
}

/// x − atan(x) without cancellation for small x.
fn x_minus_atan(x: f64) -> f64 {
    if x.abs() < 0.1 {
        let x2 = x * x;
        // x³/3 − x⁵/5 + x⁷/7 − …
        let mut term = x * x2;
        let mut sum = 0.0;
        let mut k = 3.0;
        let mut sign = 1.0;
        while term.abs() > 1e-18 * (x * x2).abs() {
            sum += sign * term / k;
            term *= x2;
            k += 2.0;
            sign = -sign;
        }
        sum
    } else {
        x - x.atan()
    }
}

/// ε(iξ) from the Kramers-Kronig integral over the table and its tails.
pub fn kramers_kronig(model: &TabulatedPermittivity, xi: f64) -> Result<f64, MaterialError> {
    if !(xi > 0.0) {
        return Err(MaterialError::NegativeFrequency(xi));
    }
    if xi < model.window.0 || xi > model.window.1 {
        return Err(MaterialError::OutsideWindow {
            xi,
            lower: model.window.0,
            upper: model.window.1,
        });
    }
    let table = &model.table;
    let tol = Tolerance::relative(model.tolerance);

    let mut inner = 0.0;
    for i in 1..table.len() {
        inner += panel_integral(
            table.omega[i - 1],
            table.omega[i],
            table.im_eps[i - 1],
            table.im_eps[i],
            xi,
        );
    }

    let (lo, hi) = table.frequency_range();
    let low = match model.tail {
        LowFrequencyTail::Insulator => 0.0,
        LowFrequencyTail::Drude => {
            let fit = table.drude_fit();
            let (w_first, e_first) = (table.omega[0], table.im_eps[0]);
            // ω·Im ε(ω)/(ω² + ξ²) with the ω cancelled analytically
            let f = |w: f64| {
                let weighted = match fit {
                    Some(d) => d.strength / (w * w + d.gamma * d.gamma),
                    None => e_first * w_first,
                };
                weighted / (w * w + xi * xi)
            };
            // split at the scales of the integrand
            let mut breaks = vec![0.0];
            let mut scales = vec![xi];
            if let Some(d) = fit {
                scales.push(d.gamma);
            }
            scales.sort_by(f64::total_cmp);
            for s in scales {
                if s < lo && s > *breaks.last().unwrap() {
                    breaks.push(s);
                }
            }
            breaks.push(lo);
            quadrature::integrate_panels(f, &breaks, tol, quadrature::DEFAULT_MAX_PANELS)?.value
        }
    };

    // ω = hi/u: ∫_hi^∞ ω·I_N (hi/ω)³/(ω²+ξ²) dω = I_N ∫₀¹ u² hi / (hi² + ξ²u²) du
    let last = table.im_eps[table.len() - 1];
    let high = if last > 0.0 {
        last * quadrature::integrate(|u| u * u * hi / (hi * hi + xi * xi * u * u), 0.0, 1.0, tol)?.value
    } else {
        0.0
    };

    Ok(1.0 + FRAC_2_PI * (low + inner + high))
}

/// Static permittivity ε(0) of an insulating table (the ξ → 0 limit of the
/// Kramers-Kronig integral); `None` for conductors, whose ε(iξ) diverges.
pub fn static_permittivity(model: &TabulatedPermittivity) -> Option<f64> {
    if model.is_conductor() {
        return None;
    }
    let t = &model.table;
    let mut inner = 0.0;
    for i in 1..t.len() {
        // ∫ (A + Bω)/ω dω
        let (w0, w1, e0, e1) = (t.omega[i - 1], t.omega[i], t.im_eps[i - 1], t.im_eps[i]);
        let slope = (e1 - e0) / (w1 - w0);
        let intercept = e0 - slope * w0;
        inner += intercept * (w1 / w0).ln() + slope * (w1 - w0);
    }
    // ∫_hi^∞ I_N hi³ ω⁻⁴ dω = I_N/3
    inner += t.im_eps[t.len() - 1] / 3.0;
    Some(1.0 + FRAC_2_PI * inner)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lorentz_table(eps0: f64, w0: f64, gamma: f64, n: usize) -> OpticalTable {
        let strength = eps0 - 1.0;
        let (lo, hi) = (w0 * 1e-3, w0 * 1e3);
        let omega: Vec<f64> = (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect();
        let im = omega
            .iter()
            .map(|&w| strength * w0 * w0 * gamma * w / ((w0 * w0 - w * w).powi(2) + gamma * gamma * w * w))
            .collect();
        OpticalTable::new(omega, im).unwrap()
    }

    #[test]
    fn zero_absorption_is_vacuum() {
        let t = OpticalTable::new(vec![1e14, 1e15, 1e16], vec![0.0; 3]).unwrap();
        let m = TabulatedPermittivity::new(t, LowFrequencyTail::Insulator);
        for xi in [1e12, 1e15, 1e18] {
            assert_eq!(kramers_kronig(&m, xi).unwrap(), 1.0);
        }
    }

    #[test]
    fn lorentz_oscillator_is_recovered() {
        let (eps0, w0, gamma) = (11.66, 6.6e15, 0.05 * 6.6e15);
        let m = TabulatedPermittivity::new(lorentz_table(eps0, w0, gamma, 4000), LowFrequencyTail::Insulator);
        for k in 0..40 {
            let xi = w0 * 1e-2 * 10f64.powf(k as f64 / 10.0);
            let exact = 1.0 + (eps0 - 1.0) * w0 * w0 / (w0 * w0 + xi * xi + gamma * xi);
            let kk = kramers_kronig(&m, xi).unwrap();
            assert!((kk / exact - 1.0).abs() < 5e-3, "xi={xi:e}: {kk} vs {exact}");
        }
        let s = static_permittivity(&m).unwrap();
        assert!((s / eps0 - 1.0).abs() < 5e-3, "{s}");
    }

    #[test]
    fn drude_table_has_drude_tail() {
        let (wp, g) = (1.37e16, 5.3e13);
        let omega: Vec<f64> = (0..400).map(|i| 1e14 * 1.02f64.powi(i)).collect();
        let im = omega.iter().map(|&w| wp * wp * g / (w * (w * w + g * g))).collect();
        let t = OpticalTable::new(omega, im).unwrap();
        let fit = t.drude_fit().unwrap();
        assert!((fit.gamma / g - 1.0).abs() < 1e-8);
        assert!((fit.plasma_frequency() / wp - 1.0).abs() < 1e-8);
        let m = TabulatedPermittivity::new(t, LowFrequencyTail::Drude);
        for xi in [1e13, 2.5e14, 1e15, 1e16] {
            let exact = 1.0 + wp * wp / (xi * (xi + g));
            let kk = kramers_kronig(&m, xi).unwrap();
            assert!((kk / exact - 1.0).abs() < 1e-3, "xi={xi:e}: {kk} vs {exact}");
        }
        assert!(static_permittivity(&m).is_none());
    }

    #[test]
    fn parse_text_format() {
        let text = "# omega_rad_s im_eps\n1e14 0.5\n# comment\n2e14   0.25 # trailing\n\n3e14 0\n";
        let t = OpticalTable::parse(text).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.absorption(), &[0.5, 0.25, 0.0]);
        let back = OpticalTable::parse(&t.to_text()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn invalid_tables_are_rejected() {
        assert!(OpticalTable::new(vec![1.0], vec![0.0]).is_err());
        assert!(OpticalTable::new(vec![2.0, 1.0], vec![0.0, 0.0]).is_err());
        assert!(OpticalTable::new(vec![1.0, 1.0], vec![0.0, 0.0]).is_err());
        assert!(OpticalTable::new(vec![1.0, 2.0], vec![-1.0, 0.0]).is_err());
        assert!(OpticalTable::parse("1 2 3\n4 5 6\n").is_err());
        assert!(OpticalTable::parse("1 x\n2 3\n").is_err());
    }

    #[test]
    fn window_is_enforced() {
        let t = OpticalTable::new(vec![1e14, 1e15], vec![1.0, 1.0]).unwrap();
        let m = TabulatedPermittivity::new(t, LowFrequencyTail::Insulator).with_window(1e13, 1e17);
        assert!(kramers_kronig(&m, 1e15).is_ok());
        assert!(matches!(
            kramers_kronig(&m, 1e12),
            Err(MaterialError::OutsideWindow { .. })
        ));
        assert!(matches!(
            kramers_kronig(&m, -1.0),
            Err(MaterialError::NegativeFrequency(_))
        ));
    }

    #[test]
    fn small_ratio_kernel_series() {
        for x in [1e-6, 1e-3, 0.05, 0.099] {
            let direct = x - f64::atan(x);
            let series = x_minus_atan(x);
            if x > 1e-3 {
                assert!((series / direct - 1.0).abs() < 1e-8, "{x}");
            }
            assert!((series / (x * x * x / 3.0) - 1.0).abs() < 0.01);
        }
    }
}
