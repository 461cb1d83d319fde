use std::path::PathBuf;

use clap::Args;
use hologram_core::bound::{
    bloch_components, evolve_trial, find_bound_state, scan_energies, turning_points, DEFAULT_ENERGY_TOLERANCE,
    DEFAULT_WINDOW,
};
use hologram_core::numerics::DEFAULT_TOLERANCE;
use hologram_core::MassProfile;
use serde::{Deserialize, Serialize};

use crate::config::{self, finite, merge_fields, positive};
use crate::error::{CliError, CliResult};
use crate::output::{self, num, Csv};

#[derive(Args, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundArgs {
    /// TOML file with any of the fields below (flags take precedence).
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// First trial energy of the scan [default: -1].
    #[arg(long, allow_negative_numbers = true)]
    pub grid_min: Option<f64>,
    /// Last trial energy of the scan [default: 1].
    #[arg(long, allow_negative_numbers = true)]
    pub grid_max: Option<f64>,
    /// Spacing of the scan grid [default: 0.025].
    #[arg(long)]
    pub grid_step: Option<f64>,
    /// Lower end of the golden-section bracket [default: -0.5].
    #[arg(long, allow_negative_numbers = true)]
    pub bracket_lo: Option<f64>,
    /// Upper end of the golden-section bracket [default: 0.5].
    #[arg(long, allow_negative_numbers = true)]
    pub bracket_hi: Option<f64>,
    /// Energy tolerance of the golden-section search [default: 1e-4].
    #[arg(long)]
    pub tol_e: Option<f64>,
    /// Left end of the evolution window [default: -5].
    #[arg(long, allow_negative_numbers = true)]
    pub x0: Option<f64>,
    /// Right end of the evolution window [default: 5].
    #[arg(long, allow_negative_numbers = true)]
    pub x1: Option<f64>,
    /// Integrator tolerance [default: 1e-10].
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Intervals in the emitted trajectory [default: 200].
    #[arg(long)]
    pub samples: Option<usize>,
    /// Mass far to the left of the wall; m(x) = -amplitude tanh((x - center)/width) [default: 1].
    #[arg(long, allow_negative_numbers = true)]
    pub wall_amplitude: Option<f64>,
    /// Wall position [default: 0].
    #[arg(long, allow_negative_numbers = true)]
    pub wall_center: Option<f64>,
    /// Wall width [default: 1].
    #[arg(long)]
    pub wall_width: Option<f64>,
    /// Output directory [default: out].
    #[arg(long, env = super::OUT_DIR_ENV)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct BoundReport {
    e_star: f64,
    final_amplitude: f64,
    turning_points: Vec<f64>,
    window: (f64, f64),
    bracket: (f64, f64),
    tol_e: f64,
    tolerance: f64,
    grid: Grid,
    profile: MassProfile,
    scan_minima: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Serialize)]
struct Grid {
    min: f64,
    max: f64,
    step: f64,
    points: usize,
}

pub fn run(mut args: BoundArgs) -> CliResult<u8> {
    if let Some(path) = args.config.clone() {
        let file: BoundArgs = config::load(&path)?;
        merge_fields!(
            args,
            file,
            [grid_min, grid_max, grid_step, bracket_lo, bracket_hi, tol_e, x0, x1, tolerance, samples, wall_amplitude, wall_center, wall_width]
        );
        if args.out_dir.is_none() {
            args.out_dir = file.out_dir.map(|p| config::relative_to(&path, p));
        }
    }
    let grid_min = finite(args.grid_min.unwrap_or(-1.0), "grid_min")?;
    let grid_max = finite(args.grid_max.unwrap_or(1.0), "grid_max")?;
    let step = positive(args.grid_step.unwrap_or(0.025), "grid_step")?;
    if !(grid_max > grid_min) {
        return Err(CliError::config(format!("grid must satisfy grid_min < grid_max, got [{grid_min}, {grid_max}]")));
    }
    let intervals = ((grid_max - grid_min) / step).round();
    if (grid_min + intervals * step - grid_max).abs() > 1e-9 * step.max(grid_max.abs()) {
        return Err(CliError::config(format!(
            "grid_step {step} does not divide [{grid_min}, {grid_max}] evenly"
        )));
    }
    let grid = Grid { min: grid_min, max: grid_max, step, points: intervals as usize + 1 };
    let energies: Vec<f64> = (0..grid.points)
        .map(|i| if i + 1 == grid.points { grid_max } else { grid_min + step * i as f64 })
        .collect();

    let bracket = (
        finite(args.bracket_lo.unwrap_or(-0.5), "bracket_lo")?,
        finite(args.bracket_hi.unwrap_or(0.5), "bracket_hi")?,
    );
    let tol_e = positive(args.tol_e.unwrap_or(DEFAULT_ENERGY_TOLERANCE), "tol_e")?;
    let window = (
        finite(args.x0.unwrap_or(DEFAULT_WINDOW.0), "x0")?,
        finite(args.x1.unwrap_or(DEFAULT_WINDOW.1), "x1")?,
    );
    let tolerance = positive(args.tolerance.unwrap_or(DEFAULT_TOLERANCE), "tolerance")?;
    let samples = args.samples.unwrap_or(200);
    if samples == 0 {
        return Err(CliError::config("`samples` must be at least 1"));
    }
    let profile = MassProfile::DomainWall {
        amplitude: args.wall_amplitude.unwrap_or(1.0),
        center: args.wall_center.unwrap_or(0.0),
        width: args.wall_width.unwrap_or(1.0),
    };
    profile.validate()?;
    let out_dir = args.out_dir.unwrap_or_else(|| PathBuf::from("out"));

    let scan = scan_energies(profile, &energies, window.0, window.1, tolerance)?;
    output::ensure_dir(&out_dir)?;
    let mut csv = Csv::new(
        &[&format!(
            "final amplitude |psi(x1)| of the |y-> start, window [{}, {}]",
            window.0, window.1
        )],
        &["E", "final_amplitude"],
    );
    for &(e, a) in &scan.entries {
        csv.row(&[e.to_string(), num(a)]);
    }
    output::write(&out_dir, "scan.csv", &csv.into_string())?;

    // The scan is already on disk when no interior minimum exists (exit code 4).
    let e_star = find_bound_state(profile, bracket, tol_e, window.0, window.1, tolerance)?;

    let trial = evolve_trial(e_star, profile, window.0, window.1, tolerance, samples)?;
    let mut csv = Csv::new(
        &[
            &format!("trajectory at E_star = {e_star:e}; alpha, beta are the L/R amplitudes"),
            "sigma_* are Bloch components of the normalised spinor; norm is unnormalised",
        ],
        &["x", "re_alpha", "im_alpha", "re_beta", "im_beta", "sigma_x", "sigma_y", "sigma_z", "norm"],
    );
    for (x, psi) in trial.trajectory.samples() {
        let ([sx, sy, sz], norm) = bloch_components(psi);
        csv.row(&[
            num(*x),
            num(psi[0].re),
            num(psi[0].im),
            num(psi[1].re),
            num(psi[1].im),
            num(sx),
            num(sy),
            num(sz),
            num(norm),
        ]);
    }
    output::write(&out_dir, "trajectory.csv", &csv.into_string())?;

    let report = BoundReport {
        e_star,
        final_amplitude: trial.final_amplitude,
        turning_points: turning_points(e_star, profile, window),
        window,
        bracket,
        tol_e,
        tolerance,
        grid,
        profile,
        scan_minima: scan.interior_minima().into_iter().map(|i| scan.entries[i].0).collect(),
    };
    output::write_json(&out_dir, "result.json", &report)?;
    println!("E_star = {e_star:e}");
    Ok(0)
}
