use std::path::PathBuf;

use clap::Args;
use hologram_core::dirac::{mirror_decomposition_check, parity_check, pt_identity_check};
use hologram_core::DiracParams;
use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::config::{self, merge_fields};
use crate::error::{CliError, CliResult, EXIT_NUMERICAL};

/// Residual bound for a passing check.
const THRESHOLD: f64 = 1e-12;

#[derive(Args, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiracCheckArgs {
    /// TOML file with any of the fields below (flags take precedence).
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Random seed [default: 42].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of random parameter draws [default: 1000].
    #[arg(long)]
    pub draws: Option<usize>,
    /// Half-width of the uniform range for momenta, energies and masses [default: 5].
    #[arg(long)]
    pub range: Option<f64>,
}

pub fn run(mut args: DiracCheckArgs) -> CliResult<u8> {
    if let Some(path) = args.config.clone() {
        let file: DiracCheckArgs = config::load(&path)?;
        merge_fields!(args, file, [seed, draws, range]);
    }
    let seed = args.seed.unwrap_or(42);
    let draws = args.draws.unwrap_or(1000);
    let range = config::positive(args.range.unwrap_or(5.0), "range")?;
    if draws == 0 {
        return Err(CliError::config("`draws` must be at least 1"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut parity, mut pt) = (0.0f64, 0.0f64);
    for _ in 0..draws {
        let k = Vector3::new(
            rng.random_range(-range..range),
            rng.random_range(-range..range),
            rng.random_range(-range..range),
        );
        let mass = rng.random_range(0.0..range);
        parity = parity.max(parity_check(k, mass));
        let p = DiracParams {
            omega: rng.random_range(-range..range),
            kx: rng.random_range(-range..range),
            ky: rng.random_range(-range..range),
            mass: rng.random_range(0.0..range),
        };
        pt = pt.max(pt_identity_check(p));
    }
    let mirror = mirror_decomposition_check();
    let pass = [parity, mirror, pt].iter().all(|&r| r <= THRESHOLD);

    println!("# dirac-check seed={seed} draws={draws} range={range} threshold={THRESHOLD:e}");
    println!("parity_residual_max = {parity:e}");
    println!("mirror_decomposition_residual_max = {mirror:e}");
    println!("pt_identity_residual_max = {pt:e}");
    println!("status = {}", if pass { "PASS" } else { "FAIL" });
    Ok(if pass { 0 } else { EXIT_NUMERICAL })
}
