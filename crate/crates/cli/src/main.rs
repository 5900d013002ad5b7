use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cpkit::config::{ConfigError, Registry, CONFIG_ENV};
use cpkit::lifshitz::SolverOptions;
use cpkit::phenomenology::{coefficient_report, rho_parameter};
use cpkit::selfcheck::self_check;
use cpkit::sweep::{run_sweep, Grid, Spacing, SweepError, SweepQuantity, SweepSpec};
use cpkit::units::{si_to_ev_nm3, si_to_ev_nm4, NANOMETRE};

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

/// Casimir-Polder atom-wall interaction tables.
#[derive(Parser)]
#[command(name = "cpkit", version)]
struct Cli {
    /// Config file layered over the built-in registry.
    #[arg(long, global = true, env = CONFIG_ENV)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate a quantity over separation (or over tau for sigma).
    Sweep {
        #[arg(long, default_value = "Au")]
        material: String,
        #[arg(long, default_value = "HeStar")]
        atom: String,
        #[arg(long = "temperature-K", default_value_t = 0.0)]
        temperature_k: f64,
        /// Lower end of the grid: nm, or tau for sigma.
        #[arg(long)]
        amin: f64,
        /// Upper end of the grid: nm, or tau for sigma.
        #[arg(long)]
        amax: f64,
        #[arg(long, default_value_t = 50)]
        points: usize,
        /// Logarithmic spacing instead of linear.
        #[arg(long)]
        log: bool,
        /// free_energy, force, entropy, a4E, a4F_scaled, sigma or deltaE.
        #[arg(long)]
        quantity: SweepQuantity,
        /// Write the table here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Computed and configured C3, C4, l and rho.
    Coeffs {
        #[arg(long, default_value = "Au")]
        material: String,
        #[arg(long, default_value = "HeStar")]
        atom: String,
    },
    /// Run the oracle suite.
    Selfcheck,
    /// List registry entries.
    Materials,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let registry = match Registry::load(cli.config.as_deref()) {
        Ok(r) => r,
        Err(e) => return config_error(&e),
    };
    match cli.command {
        Command::Sweep {
            material,
            atom,
            temperature_k,
            amin,
            amax,
            points,
            log,
            quantity,
            out,
        } => {
            let spec = SweepSpec {
                quantity,
                grid: Grid {
                    start: amin,
                    stop: amax,
                    count: points,
                    spacing: if log { Spacing::Log } else { Spacing::Linear },
                },
                temperature: temperature_k,
                material,
                atom,
            };
            sweep(&spec, &registry, out)
        }
        Command::Coeffs { material, atom } => coeffs(&registry, &material, &atom),
        Command::Selfcheck => selfcheck(),
        Command::Materials => {
            materials(&registry);
            ExitCode::SUCCESS
        }
    }
}

fn config_error(e: &ConfigError) -> ExitCode {
    eprintln!("cpkit: config error: {e}");
    ExitCode::from(EXIT_CONFIG)
}

fn sweep(spec: &SweepSpec, registry: &Registry, out: Option<PathBuf>) -> ExitCode {
    let table = match run_sweep(spec, registry, SolverOptions::default()) {
        Ok(t) => t,
        Err(SweepError::Config(e)) => return config_error(&e),
        Err(e @ SweepError::Grid(_)) => {
            eprintln!("cpkit: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
        Err(e) => {
            eprintln!("cpkit: {e}");
            return ExitCode::from(EXIT_NUMERICAL);
        }
    };
    let text = table.render();
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, text) {
                eprintln!("cpkit: cannot write {}: {e}", path.display());
                return ExitCode::FAILURE;
            }
        }
        None => print!("{text}"),
    }
    let failed = table.failures();
    if failed > 0 {
        eprintln!("cpkit: {failed} of {} points failed", table.rows.len());
        return ExitCode::from(EXIT_NUMERICAL);
    }
    ExitCode::SUCCESS
}

fn coeffs(registry: &Registry, material: &str, atom: &str) -> ExitCode {
    let (m, a) = match (registry.material(material), registry.atom(atom)) {
        (Ok(m), Ok(a)) => (m, a),
        (Err(e), _) | (_, Err(e)) => return config_error(&e),
    };
    let configured = registry.coefficients(material);
    let report = match coefficient_report(&m.model, &a.model, configured) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("cpkit: {e}");
            return ExitCode::from(EXIT_NUMERICAL);
        }
    };
    let fmt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |x| format!("{x:.6e}"));
    let computed_l = report.computed_c3.map(|c3| report.computed_c4 / c3 / NANOMETRE);
    let e = &report.effective;

    println!("material: {} = {}", m.name, m.model.describe());
    println!("atom: {} = {}", a.name, a.model.describe());
    println!("config_sha256: {}", registry.hash());
    println!(
        "{:<12}{:<16}{:<16}{:<16}provenance",
        "", "computed", "configured", "used"
    );
    println!(
        "{:<12}{:<16}{:<16}{:<16}{}",
        "C3_eV_nm3",
        fmt(report.computed_c3.map(si_to_ev_nm3)),
        fmt(configured.c3.map(si_to_ev_nm3)),
        fmt(Some(si_to_ev_nm3(e.c3.value))),
        e.c3.provenance
    );
    println!(
        "{:<12}{:<16}{:<16}{:<16}{}",
        "C4_eV_nm4",
        fmt(Some(si_to_ev_nm4(report.computed_c4))),
        fmt(configured.c4.map(si_to_ev_nm4)),
        fmt(Some(si_to_ev_nm4(e.c4.value))),
        e.c4.provenance
    );
    println!(
        "{:<12}{:<16}{:<16}{:<16}{}",
        "l_nm",
        fmt(computed_l),
        fmt(configured.l.map(|l| l / NANOMETRE)),
        fmt(Some(e.l.value / NANOMETRE)),
        e.l.provenance
    );
    println!("computed C4 method: {}", report.c4_method);
    match rho_parameter(&a.model, e) {
        Ok(rho) => println!("rho: {rho:.4}"),
        Err(err) => println!("rho: - ({err})"),
    }
    println!(
        "quantitative: {}",
        if report.quantitative {
            "yes"
        } else {
            "no (model wall, nothing configured)"
        }
    );
    ExitCode::SUCCESS
}

fn selfcheck() -> ExitCode {
    let checks = self_check();
    let mut failed = 0;
    for c in &checks {
        let verdict = if c.passed() { "PASS" } else { "FAIL" };
        if !c.passed() {
            failed += 1;
        }
        println!(
            "{verdict} {:<28} residual {:.3e} <= {:.1e}  {}",
            c.name, c.residual, c.threshold, c.detail
        );
    }
    println!("{} of {} checks passed", checks.len() - failed, checks.len());
    if failed > 0 {
        ExitCode::from(EXIT_NUMERICAL)
    } else {
        ExitCode::SUCCESS
    }
}

fn materials(registry: &Registry) {
    match registry.source() {
        Some(p) => println!("config: {} (sha256 {})", p.display(), registry.hash()),
        None => println!("config: built-in (sha256 {})", registry.hash()),
    }
    println!("materials:");
    for m in registry.materials() {
        let c = registry.coefficients(&m.name);
        let tag = if c.is_empty() {
            String::new()
        } else {
            format!("  [coefficients: {}]", m.phenomenology)
        };
        println!("  {:<16}{}{tag}", m.name, m.model.describe());
    }
    println!("atoms:");
    for a in registry.atoms() {
        println!("  {:<16}{}", a.name, a.model.describe());
    }
}
