use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::Args;
use hologram_core::constants::FM2_TO_MB;
use hologram_core::potential::parse_columns;
use hologram_core::scattering::{
    compare_to_data, phase_shift_table, scattering_amplitudes, total_cross_sections, wave_number,
    DEFAULT_L_MAX,
};
use hologram_core::{Constants, PotentialConfig, PotentialSpec, ScatteringSetup, SolverParams};
use serde::{Deserialize, Serialize};

use crate::config::{self, merge_fields, positive, require};
use crate::error::{CliError, CliResult};
use crate::output::{self, num, Csv};

/// Extra partial waves used for the truncation check reported in `summary.json`.
const L_MAX_CHECK_INCREMENT: u32 = 4;

#[derive(Args, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatterArgs {
    /// TOML file with any of the fields below (flags take precedence; paths are relative to it).
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Potential document (TOML, `kind = ...`).
    #[arg(long)]
    pub potential: Option<PathBuf>,
    /// Lab energy in MeV.
    #[arg(long)]
    pub energy: Option<f64>,
    /// Highest partial wave [default: 12].
    #[arg(long)]
    pub l_max: Option<u32>,
    /// Starting radius in fm [default: 1e-3].
    #[arg(long)]
    pub r_start: Option<f64>,
    /// Inner matching radius in fm [default: 19.98].
    #[arg(long)]
    pub r1: Option<f64>,
    /// Outer matching radius in fm [default: 20].
    #[arg(long)]
    pub r2: Option<f64>,
    /// Space-to-time scaling r = v t [default: 1].
    #[arg(long)]
    pub v: Option<f64>,
    /// Integrator tolerance [default: 1e-10].
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// First angle of the output grid in degrees [default: 1].
    #[arg(long)]
    pub theta_min_deg: Option<f64>,
    /// Last angle of the output grid in degrees [default: 179].
    #[arg(long)]
    pub theta_max_deg: Option<f64>,
    /// Number of angles in the output grid [default: 179].
    #[arg(long)]
    pub theta_steps: Option<usize>,
    /// Measured cross sections: `theta_deg  value_mb_per_sr  uncertainty` rows.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// ħc in MeV fm (overrides the potential document).
    #[arg(long)]
    pub hbar_c: Option<f64>,
    /// Projectile mass in MeV (overrides the potential document).
    #[arg(long)]
    pub projectile_mass: Option<f64>,
    /// Use the projectile-target reduced mass.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub reduced_mass: Option<bool>,
    /// Output directory [default: out].
    #[arg(long, env = super::OUT_DIR_ENV)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct Summary {
    inputs: Inputs,
    results: Results,
}

#[derive(Debug, Serialize)]
struct Inputs {
    potential_file: PathBuf,
    potential: PotentialSpec,
    energy_mev: f64,
    l_max: u32,
    solver: SolverParams,
    constants: Constants,
    mass_mev: f64,
    k_per_fm: f64,
    theta_deg: ThetaGrid,
    data_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Serialize)]
struct ThetaGrid {
    min: f64,
    max: f64,
    steps: usize,
}

#[derive(Debug, Serialize)]
struct Results {
    sigma_el_mb: f64,
    sigma_tot_mb: f64,
    sigma_reaction_mb: f64,
    absorptive: bool,
    truncation_check: TruncationCheck,
    chi2: Option<Chi2Summary>,
}

/// σ_el recomputed with more partial waves; reported, not asserted.
#[derive(Debug, Serialize)]
struct TruncationCheck {
    l_max: u32,
    sigma_el_mb: f64,
    relative_delta: f64,
}

#[derive(Debug, Serialize)]
struct Chi2Summary {
    chi2: f64,
    points: usize,
    chi2_per_point: f64,
}

impl ThetaGrid {
    fn degrees(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let n = (self.steps - 1) as f64;
        // Weighted form keeps integer-degree grids exact.
        (0..self.steps)
            .map(|i| (self.min * (n - i as f64) + self.max * i as f64) / n)
            .collect()
    }
}

pub fn run(mut args: ScatterArgs) -> CliResult<u8> {
    if let Some(path) = args.config.clone() {
        let file: ScatterArgs = config::load(&path)?;
        merge_fields!(
            args,
            file,
            [energy, l_max, r_start, r1, r2, v, tolerance, theta_min_deg, theta_max_deg, theta_steps, hbar_c, projectile_mass, reduced_mass]
        );
        if args.potential.is_none() {
            args.potential = file.potential.map(|p| config::relative_to(&path, p));
        }
        if args.data.is_none() {
            args.data = file.data.map(|p| config::relative_to(&path, p));
        }
        if args.out_dir.is_none() {
            args.out_dir = file.out_dir.map(|p| config::relative_to(&path, p));
        }
    }

    let potential_file = require(args.potential, "potential")?;
    let energy = positive(require(args.energy, "energy")?, "energy")?;
    let pot_cfg = PotentialConfig::from_path(&potential_file)?;
    let spec = pot_cfg.resolve(energy)?;

    let mut constants = pot_cfg.constants();
    if let Some(x) = args.hbar_c {
        constants.hbar_c = positive(x, "hbar_c")?;
    }
    if let Some(x) = args.projectile_mass {
        constants.projectile_mass = positive(x, "projectile_mass")?;
    }
    if let Some(x) = args.reduced_mass {
        constants.reduced_mass = x;
    }
    positive(constants.hbar_c, "constants.hbar_c")?;
    positive(constants.projectile_mass, "constants.projectile_mass")?;

    let defaults = SolverParams::default();
    let solver = SolverParams {
        r_start: args.r_start.unwrap_or(defaults.r_start),
        r1: args.r1.unwrap_or(defaults.r1),
        r2: args.r2.unwrap_or(defaults.r2),
        v: args.v.unwrap_or(defaults.v),
        tolerance: args.tolerance.unwrap_or(defaults.tolerance),
    };
    solver.validate()?;
    let theta = ThetaGrid {
        min: args.theta_min_deg.unwrap_or(1.0),
        max: args.theta_max_deg.unwrap_or(179.0),
        steps: args.theta_steps.unwrap_or(179),
    };
    if !(theta.min > 0.0 && theta.max < 180.0 && theta.min <= theta.max) || theta.steps == 0 {
        return Err(CliError::config(format!(
            "angle grid must lie inside (0, 180) degrees with at least one point, got {theta:?}"
        )));
    }
    let data = match &args.data {
        Some(path) => Some(read_data(path)?),
        None => None,
    };
    let out_dir = args.out_dir.unwrap_or_else(|| PathBuf::from("out"));

    let setup = ScatteringSetup {
        energy,
        constants,
        l_max: args.l_max.unwrap_or(DEFAULT_L_MAX),
        solver,
    };
    let mass = constants.effective_mass(spec.target_mass_number());
    let k = wave_number(energy, mass, constants.hbar_c);

    let table = phase_shift_table(&spec, &setup)?;
    let degrees = theta.degrees();
    let radians: Vec<f64> = degrees.iter().map(|d| d * PI / 180.0).collect();
    let dist = scattering_amplitudes(&table, &radians)?;
    let (sigma_el, sigma_tot) = total_cross_sections(&table)?;
    let check_setup = ScatteringSetup { l_max: setup.l_max + L_MAX_CHECK_INCREMENT, ..setup };
    let (sigma_el_check, _) = total_cross_sections(&phase_shift_table(&spec, &check_setup)?)?;

    output::ensure_dir(&out_dir)?;

    let mut phases = Csv::new(
        &[
            &format!("complex phase shifts in radians, E = {energy} MeV, k = {k:e} fm^-1"),
            "j is the total angular momentum l +- 1/2",
        ],
        &["l", "j", "re_delta", "im_delta"],
    );
    for e in &table.entries {
        phases.row(&[e.l.to_string(), e.j.to_string(), num(e.delta.re), num(e.delta.im)]);
    }
    output::write(&out_dir, "phase_shifts.csv", &phases.into_string())?;

    let mut angular = Csv::new(
        &["theta in degrees; f and g in fm; cross section in mb/sr (1 fm^2 = 10 mb)"],
        &["theta_deg", "re_f", "im_f", "re_g", "im_g", "dsigma_dOmega_mb_per_sr"],
    );
    for (deg, p) in degrees.iter().zip(&dist.points) {
        angular.row(&[
            deg.to_string(),
            num(p.f.re),
            num(p.f.im),
            num(p.g.re),
            num(p.g.im),
            num(p.dsigma_domega * FM2_TO_MB),
        ]);
    }
    output::write(&out_dir, "angular.csv", &angular.into_string())?;

    let chi2 = match &data {
        Some(points) => {
            let in_fm2: Vec<(f64, f64, f64)> = points
                .iter()
                .map(|&(deg, value, sigma)| (deg * PI / 180.0, value / FM2_TO_MB, sigma / FM2_TO_MB))
                .collect();
            let cmp = compare_to_data(&dist, &in_fm2)?;
            let mut report = Csv::new(
                &[&format!("chi2 = {:e} over {} points", cmp.chi2, cmp.residuals.len()), "cross sections in mb/sr"],
                &["theta_deg", "model_mb_per_sr", "data_mb_per_sr", "uncertainty_mb_per_sr", "pull"],
            );
            for (&(theta, model, value, pull), &(_, _, sigma)) in cmp.residuals.iter().zip(points) {
                report.row(&[
                    num(theta * 180.0 / PI),
                    num(model * FM2_TO_MB),
                    num(value * FM2_TO_MB),
                    num(sigma),
                    num(pull),
                ]);
            }
            output::write(&out_dir, "chi2.csv", &report.into_string())?;
            Some(Chi2Summary {
                chi2: cmp.chi2,
                points: cmp.residuals.len(),
                chi2_per_point: cmp.chi2 / cmp.residuals.len() as f64,
            })
        }
        None => None,
    };

    let summary = Summary {
        inputs: Inputs {
            potential_file,
            potential: spec.clone(),
            energy_mev: energy,
            l_max: setup.l_max,
            solver,
            constants,
            mass_mev: mass,
            k_per_fm: k,
            theta_deg: theta,
            data_file: args.data,
        },
        results: Results {
            sigma_el_mb: sigma_el * FM2_TO_MB,
            sigma_tot_mb: sigma_tot * FM2_TO_MB,
            sigma_reaction_mb: (sigma_tot - sigma_el) * FM2_TO_MB,
            absorptive: spec.is_absorptive(solver.r2),
            truncation_check: TruncationCheck {
                l_max: check_setup.l_max,
                sigma_el_mb: sigma_el_check * FM2_TO_MB,
                relative_delta: relative_delta(sigma_el_check, sigma_el),
            },
            chi2,
        },
    };
    output::write_json(&out_dir, "summary.json", &summary)?;
    println!(
        "sigma_el = {:.6} mb, sigma_tot = {:.6} mb -> {}",
        sigma_el * FM2_TO_MB,
        sigma_tot * FM2_TO_MB,
        out_dir.display()
    );
    Ok(0)
}

fn relative_delta(new: f64, old: f64) -> f64 {
    if old == 0.0 {
        if new == 0.0 { 0.0 } else { f64::INFINITY }
    } else {
        (new - old) / old
    }
}

fn read_data(path: &Path) -> CliResult<Vec<(f64, f64, f64)>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let rows = parse_columns(&text, 3, 3).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    Ok(rows.into_iter().map(|r| (r[0], r[1], r[2])).collect())
}
