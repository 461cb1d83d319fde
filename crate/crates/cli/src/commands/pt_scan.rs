use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use hologram_core::pt::{classify_pt, EffectiveParams, DEFAULT_EP_TOLERANCE};
use serde::Deserialize;

use crate::config::{self, finite, merge_fields};
use crate::error::{CliError, CliResult};
use crate::output::{num, Csv};

#[derive(Args, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PtScanArgs {
    /// TOML file with any of the fields below (flags take precedence).
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Lower end of the omega range [default: 0].
    #[arg(long, allow_negative_numbers = true)]
    pub omega_min: Option<f64>,
    /// Upper end of the omega range [default: 2].
    #[arg(long, allow_negative_numbers = true)]
    pub omega_max: Option<f64>,
    /// Mass parameter m [default: 1].
    #[arg(long)]
    pub mass: Option<f64>,
    /// Number of omega values, including both ends [default: 81].
    #[arg(long)]
    pub steps: Option<usize>,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(mut args: PtScanArgs) -> CliResult<u8> {
    if let Some(path) = args.config.clone() {
        let file: PtScanArgs = config::load(&path)?;
        merge_fields!(args, file, [omega_min, omega_max, mass, steps]);
        if args.out.is_none() {
            args.out = file.out.map(|p| config::relative_to(&path, p));
        }
    }
    let lo = finite(args.omega_min.unwrap_or(0.0), "omega_min")?;
    let hi = finite(args.omega_max.unwrap_or(2.0), "omega_max")?;
    let mass = finite(args.mass.unwrap_or(1.0), "mass")?;
    let steps = args.steps.unwrap_or(81);
    if steps < 2 {
        return Err(CliError::config(format!("`steps` must be at least 2, got {steps}")));
    }
    if !(hi > lo) {
        return Err(CliError::config(format!("omega range must satisfy omega_min < omega_max, got [{lo}, {hi}]")));
    }
    if mass < 0.0 {
        return Err(CliError::config(format!("`mass` must be non-negative, got {mass}")));
    }

    let text = scan(lo, hi, mass, steps)?;
    match args.out {
        Some(path) => std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?,
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::config(format!("stdout: {e}")))?,
    }
    Ok(0)
}

fn scan(lo: f64, hi: f64, mass: f64, steps: usize) -> CliResult<String> {
    let header = format!("eigenmomenta of [[omega, -m], [m, -omega]], m = {mass} (natural units)");
    let mut csv = Csv::new(
        &[&header, "k+ and k- are +sqrt(omega^2 - m^2) and its negative"],
        &["omega", "re_k_plus", "im_k_plus", "re_k_minus", "im_k_minus", "phase"],
    );
    for i in 0..steps {
        let n = (steps - 1) as f64;
        let omega = (lo * (n - i as f64) + hi * i as f64) / n;
        let c = classify_pt(EffectiveParams::new(omega, mass)?, DEFAULT_EP_TOLERANCE);
        let (kp, km) = c.eigenmomenta;
        csv.row(&[
            omega.to_string(),
            num(kp.re),
            num(kp.im),
            num(km.re),
            num(km.im),
            c.phase.label().to_string(),
        ]);
    }
    Ok(csv.into_string())
}
