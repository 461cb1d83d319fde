use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hologram_core::constants::{HBAR_C, NEUTRON_MASS};
use hologram_core::numerics::re;
use hologram_core::oracle::oracle_phase_shifts;
use hologram_core::scattering::{scattering_amplitudes, PhaseShiftTable};
use hologram_core::PotentialSpec;

const GOLDEN_ENERGY: f64 = 10.0;
const GOLDEN_L_MAX: u32 = 12;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hologram"));
    cmd.env_remove("HOLOGRAM_OUT_DIR");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn repo_path(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Numeric rows of a CSV, skipping `#` comments and the header.
fn rows(path: &Path) -> Vec<Vec<f64>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn pt_scan_labels_three_regimes() {
    let o = run(&["pt-scan", "--omega-min", "0", "--omega-max", "2", "--mass", "1", "--steps", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(data.len(), 3);
    assert!(data[0].starts_with("0,") && data[0].ends_with(",Broken"));
    assert!(data[1].starts_with("1,") && data[1].ends_with(",ExceptionalPoint"));
    assert!(data[2].starts_with("2,") && data[2].ends_with(",Unbroken"));
}

#[test]
fn pt_scan_gapless_is_unbroken() {
    let o = run(&["pt-scan", "--omega-min", "0.1", "--omega-max", "3", "--mass", "0", "--steps", "30"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().filter(|l| !l.starts_with('#')).skip(1).all(|l| l.ends_with(",Unbroken")));
}

#[test]
fn pt_scan_rejects_single_step() {
    let o = run(&["pt-scan", "--steps", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("steps"));
}

#[test]
fn scatter_free_potential_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let pot = dir.path().join("free.toml");
    std::fs::write(&pot, "kind = \"free\"\n").unwrap();
    let out = dir.path().join("out");
    let o = run(&["scatter", "--potential", pot.to_str().unwrap(), "--energy", "7.5", "--out-dir", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let phases = rows(&out.join("phase_shifts.csv"));
    assert_eq!(phases.len(), 25);
    assert!(phases.iter().all(|r| r[2].abs() < 1e-8 && r[3].abs() < 1e-8));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert!(summary["results"]["sigma_el_mb"].as_f64().unwrap().abs() < 1e-10);
    assert!(summary["results"]["sigma_tot_mb"].as_f64().unwrap().abs() < 1e-6);
    assert_eq!(summary["inputs"]["energy_mev"].as_f64(), Some(7.5));
}

#[test]
fn scatter_missing_energy_names_field() {
    let o = run(&["scatter", "--potential", repo_path("configs/square_well.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`energy`"), "{}", stderr(&o));
}

#[test]
fn scatter_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let pot = dir.path().join("well.toml");
    std::fs::write(&pot, "kind = \"square_well\"\ndepth = -10.0\nradius = 3.0\nradus = 2.0\n").unwrap();
    let o = run(&["scatter", "--potential", pot.to_str().unwrap(), "--energy", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("radus"));

    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "potential = \"well.toml\"\nenergy = 5.0\nlmax = 3\n").unwrap();
    let o = run(&["scatter", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("lmax"));
}

#[test]
fn scatter_config_and_env_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(repo_path("configs/square_well.toml"), dir.path().join("well.toml")).unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "potential = \"well.toml\"\nenergy = 5.0\nl_max = 2\nout_dir = \"from_config\"\n").unwrap();
    let env_out = dir.path().join("from_env");
    let o = bin()
        .args(["scatter", "--config", cfg.to_str().unwrap(), "--l-max", "3"])
        .env("HOLOGRAM_OUT_DIR", &env_out)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(!dir.path().join("from_config").exists());
    // Flag wins over the config value.
    assert_eq!(rows(&env_out.join("phase_shifts.csv")).len(), 7);
}

#[test]
fn scatter_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let pot = repo_path("configs/pb208_ch89_style.toml");
    let mut outputs = Vec::new();
    for name in ["a", "b"] {
        let out = dir.path().join(name);
        let o = run(&[
            "scatter", "--potential", pot.to_str().unwrap(), "--energy", "25", "--l-max", "8",
            "--out-dir", out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        outputs.push(out);
    }
    for f in ["phase_shifts.csv", "angular.csv"] {
        assert_eq!(
            std::fs::read(outputs[0].join(f)).unwrap(),
            std::fs::read(outputs[1].join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn scatter_writes_chi2_report() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data.txt");
    std::fs::write(&data, "# theta  mb/sr  err\n20 300 30\n40 50 5\n60 10 1\n").unwrap();
    let out = dir.path().join("out");
    let o = run(&[
        "scatter", "--potential", repo_path("configs/square_well.toml").to_str().unwrap(), "--energy", "10",
        "--data", data.to_str().unwrap(), "--out-dir", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report = rows(&out.join("chi2.csv"));
    assert_eq!(report.len(), 3);
    let chi2: f64 = report.iter().map(|r| r[4] * r[4]).sum();
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    let reported = summary["results"]["chi2"]["chi2"].as_f64().unwrap();
    assert!((chi2 - reported).abs() <= 1e-9 * reported.max(1.0));
}

fn golden_table() -> PhaseShiftTable {
    let spec = PotentialSpec::square_well(re(-10.0), 3.0).unwrap();
    let pairs = oracle_phase_shifts(&spec, GOLDEN_ENERGY, NEUTRON_MASS, HBAR_C, GOLDEN_L_MAX, 19.98, 20.0).unwrap();
    let k = hologram_core::scattering::wave_number(GOLDEN_ENERGY, NEUTRON_MASS, HBAR_C);
    PhaseShiftTable::from_pairs(GOLDEN_ENERGY, k, &pairs)
}

/// Rewrites the golden files from the Numerov oracle. Run with `--ignored` after changing the
/// fixture.
#[test]
#[ignore]
fn regenerate_square_well_goldens() {
    let table = golden_table();
    let mut phases = String::from("# Numerov oracle, square well -10 MeV / 3 fm, E = 10 MeV\nl,j,re_delta,im_delta\n");
    for e in &table.entries {
        phases.push_str(&format!("{},{},{:e},{:e}\n", e.l, e.j, e.delta.re, e.delta.im));
    }
    std::fs::write(golden_dir().join("square_well_phase_shifts.csv"), phases).unwrap();

    let degrees: Vec<f64> = (1..=179).map(f64::from).collect();
    let radians: Vec<f64> = degrees.iter().map(|d| d.to_radians()).collect();
    let dist = scattering_amplitudes(&table, &radians).unwrap();
    let mut angular = String::from("# Numerov oracle, square well -10 MeV / 3 fm, E = 10 MeV\ntheta_deg,dsigma_dOmega_mb_per_sr\n");
    for (d, p) in degrees.iter().zip(&dist.points) {
        angular.push_str(&format!("{d},{:e}\n", p.dsigma_domega * 10.0));
    }
    std::fs::write(golden_dir().join("square_well_angular.csv"), angular).unwrap();
}

#[test]
fn scatter_square_well_matches_goldens() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = run(&[
        "scatter", "--potential", repo_path("configs/square_well.toml").to_str().unwrap(),
        "--energy", &GOLDEN_ENERGY.to_string(), "--l-max", &GOLDEN_L_MAX.to_string(),
        "--out-dir", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));

    let got = rows(&out.join("phase_shifts.csv"));
    let want = rows(&golden_dir().join("square_well_phase_shifts.csv"));
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(&want) {
        assert_eq!((g[0], g[1]), (w[0], w[1]));
        assert!((g[2] - w[2]).abs() < 1e-6 && (g[3] - w[3]).abs() < 1e-6, "{g:?} vs {w:?}");
    }

    let got = rows(&out.join("angular.csv"));
    let want = rows(&golden_dir().join("square_well_angular.csv"));
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(&want) {
        assert_eq!(g[0], w[0]);
        assert!((g[5] - w[1]).abs() <= 1e-5 * w[1].abs().max(1e-3), "θ={}: {} vs {}", g[0], g[5], w[1]);
    }
}

#[test]
fn bound_defaults_find_zero_mode() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["bound", "--out-dir", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let e: f64 = stdout(&o).trim().strip_prefix("E_star = ").unwrap().parse().unwrap();
    assert!(e.abs() < 1e-3);
    let result: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("result.json")).unwrap()).unwrap();
    assert_eq!(result["e_star"].as_f64(), Some(e));
    let traj = rows(&dir.path().join("trajectory.csv"));
    assert_eq!(traj.len(), 201);
    assert!(traj.iter().all(|r| r[7].abs() < 1e-8));
}

#[test]
fn bound_grid_has_81_rows() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "bound", "--grid-min", "-0.4", "--grid-max", "0.4", "--grid-step", "0.01",
        "--out-dir", dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(rows(&dir.path().join("scan.csv")).len(), 81);
}

#[test]
fn bound_without_minimum_has_distinct_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["bound", "--bracket-lo", "0.2", "--bracket-hi", "0.8", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
}

#[test]
fn dirac_check_passes_and_is_deterministic() {
    let a = run(&["dirac-check", "--seed", "42", "--draws", "1000"]);
    let b = run(&["dirac-check", "--seed", "42", "--draws", "1000"]);
    assert!(a.status.success());
    assert!(stdout(&a).contains("status = PASS"));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn dirac_check_rejects_zero_draws() {
    let o = run(&["dirac-check", "--draws", "0"]);
    assert_eq!(o.status.code(), Some(2));
}
