use std::path::Path;
use std::process::{Command, Output};

fn cpkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cpkit"))
        .args(args)
        .env_remove("CPKIT_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// (x, value) pairs of the data rows that evaluated.
fn rows(table: &str) -> Vec<(f64, f64)> {
    table
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .filter(|l| l.ends_with("\tok"))
        .map(|l| {
            let mut it = l.split('\t');
            (it.next().unwrap().parse().unwrap(), it.next().unwrap().parse().unwrap())
        })
        .collect()
}

#[test]
fn materials_lists_the_builtin_registry() {
    let o = cpkit(&["materials"]);
    assert!(o.status.success());
    let s = stdout(&o);
    for name in ["Au", "Au-Drude", "Si-oscillator", "ideal-metal", "HeStar"] {
        assert!(s.contains(name), "{name} missing:\n{s}");
    }
}

#[test]
fn unknown_material_is_a_config_error_listing_known_names() {
    let o = cpkit(&[
        "sweep",
        "--material",
        "Cu",
        "--quantity",
        "force",
        "--amin",
        "100",
        "--amax",
        "200",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(
        e.contains("Cu") && e.contains("Au-Drude") && e.contains("Si-oscillator"),
        "{e}"
    );

    let o = cpkit(&["coeffs", "--atom", "Rb"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("HeStar"));
}

#[test]
fn invalid_grid_and_bad_config_exit_with_config_status() {
    let o = cpkit(&["sweep", "--quantity", "force", "--amin", "200", "--amax", "100"]);
    assert_eq!(o.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[material.X]\nkind = \"plasma\"\n").unwrap();
    let o = cpkit(&["materials", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("omega_p_eV"));

    let o = cpkit(&[
        "materials",
        "--config",
        dir.path().join("missing.toml").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn environment_variable_selects_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("extra.toml");
    std::fs::write(&cfg, "[material.Cu]\nkind = \"plasma\"\nomega_p_eV = 8.9\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_cpkit"))
        .arg("materials")
        .env("CPKIT_CONFIG", &cfg)
        .output()
        .unwrap();
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("Cu") && s.contains("extra.toml"), "{s}");
}

#[test]
fn numerical_failures_are_recorded_per_row() {
    let o = cpkit(&[
        "sweep",
        "--quantity",
        "entropy",
        "--amin",
        "100",
        "--amax",
        "200",
        "--points",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let s = stdout(&o);
    assert_eq!(s.lines().filter(|l| l.contains("\terror: ")).count(), 3, "{s}");
}

#[test]
fn sigma_sweep_changes_sign_near_three() {
    let o = cpkit(&[
        "sweep",
        "--quantity",
        "sigma",
        "--amin",
        "0.1",
        "--amax",
        "10",
        "--points",
        "100",
        "--log",
    ]);
    assert!(o.status.success());
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 100);
    let first_positive = r.iter().position(|&(_, v)| v > 0.0).unwrap();
    assert!(r[..first_positive].iter().all(|&(_, v)| v < 0.0));
    assert!(r[first_positive..].iter().all(|&(_, v)| v > 0.0));
    let (t0, t1) = (r[first_positive - 1].0, r[first_positive].0);
    assert!(t0 >= 2.7 && t1 <= 3.3, "crossing between {t0} and {t1}");
}

#[test]
fn a4e_sweep_reaches_the_retarded_plateau() {
    let o = cpkit(&[
        "sweep",
        "--quantity",
        "a4E",
        "--amin",
        "20",
        "--amax",
        "10000",
        "--points",
        "30",
        "--log",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 30);
    assert!(
        r.windows(2).all(|w| w[0].1 < w[1].1),
        "a^4|E| rises towards the plateau"
    );
    let plateau = r.last().unwrap().1;
    assert!((plateau - 1.1).abs() < 0.02, "plateau {plateau} eV nm^4");
}

#[test]
fn delta_e_at_five_micrometres_room_temperature() {
    let o = cpkit(&[
        "sweep",
        "--quantity",
        "deltaE",
        "--temperature-K",
        "300",
        "--amin",
        "4000",
        "--amax",
        "5000",
        "--points",
        "2",
    ]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(
        s.contains("(configured)") && s.contains("(computed)"),
        "provenance of coefficients recorded"
    );
    let (a, d) = rows(&s)[1];
    assert_eq!(a, 5000.0);
    assert!((d - 31.0).abs() < 3.0, "deltaE {d}%");
}

#[test]
fn header_records_provenance() {
    let o = cpkit(&[
        "sweep",
        "--quantity",
        "force",
        "--amin",
        "500",
        "--amax",
        "600",
        "--points",
        "2",
    ]);
    let s = stdout(&o);
    let header: Vec<_> = s.lines().take_while(|l| l.starts_with('#')).collect();
    for key in [
        "cpkit ",
        "config_sha256: ",
        "material: Au",
        "atom: HeStar",
        "solver: inner_tolerance=",
        "temperature_K",
    ] {
        assert!(header.iter().any(|l| l.contains(key)), "{key} missing from header");
    }
}

fn sweep_to(path: &Path, extra: &[&str]) -> Vec<u8> {
    let mut args = vec![
        "sweep",
        "--quantity",
        "free_energy",
        "--temperature-K",
        "300",
        "--amin",
        "200",
        "--amax",
        "8000",
        "--points",
        "12",
        "--log",
        "--out",
        path.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    let o = cpkit(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    std::fs::read(path).unwrap()
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let first = sweep_to(&dir.path().join("a.tsv"), &[]);
    let second = sweep_to(&dir.path().join("b.tsv"), &[]);
    assert!(!first.is_empty());
    assert_eq!(first, second);

    let single = Command::new(env!("CARGO_BIN_EXE_cpkit"))
        .args([
            "sweep",
            "--quantity",
            "free_energy",
            "--temperature-K",
            "300",
            "--amin",
            "200",
            "--amax",
            "8000",
            "--points",
            "12",
            "--log",
        ])
        .env("RAYON_NUM_THREADS", "1")
        .env_remove("CPKIT_CONFIG")
        .output()
        .unwrap();
    assert_eq!(single.stdout, first, "thread count changes nothing");
}

#[test]
fn coefficients_for_gold_and_silicon() {
    let o = cpkit(&["coeffs", "--material", "Au"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let used = |key: &str| -> f64 {
        let line = s.lines().find(|l| l.starts_with(key)).unwrap();
        line.split_whitespace().nth(3).unwrap().parse().unwrap()
    };
    assert!((used("l_nm") - 172.0).abs() < 1.0, "{s}");
    let rho: f64 = s
        .lines()
        .find_map(|l| l.strip_prefix("rho: "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((rho - 2.6).abs() <= 0.1, "rho {rho}");

    let o = cpkit(&["coeffs", "--material", "Si-oscillator"]);
    let s = stdout(&o);
    let line = s.lines().find(|l| l.starts_with("l_nm")).unwrap();
    assert_eq!(line.split_whitespace().nth(3).unwrap().parse::<f64>().unwrap(), 136.0);

    let o = cpkit(&["coeffs", "--material", "ideal-metal"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("quantitative: no"));
}

#[test]
fn selfcheck_passes_on_a_fresh_build() {
    let o = cpkit(&["selfcheck"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}
