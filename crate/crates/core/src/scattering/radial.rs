use std::f64::consts::SQRT_2;

use super::ScatteringChannel;
use crate::error::{Error, Result};
use crate::numerics::{re, CMatrix, CVector, Complex, HamiltonianEvaluator, Integrator, I};
use crate::potential::{total_potential, PotentialSpec};

/// `t ↦ v · [[0, 2m̃], [Ẽ − Ṽ_tot(v t), 0]]` in the internal units (ħc = 1, lengths in fm):
/// `m̃ = m/ħc`, `Ẽ = k²/(2m̃)`, `Ṽ_tot = V_tot/ħc`.
pub struct HologramHamiltonian<'a> {
    channel: ScatteringChannel,
    spec: &'a PotentialSpec,
    v: f64,
}

pub fn hologram_hamiltonian<'a>(
    channel: ScatteringChannel,
    spec: &'a PotentialSpec,
    v: f64,
) -> Result<HologramHamiltonian<'a>> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::InvalidInput(format!("scaling v must be positive, got {v}")));
    }
    Ok(HologramHamiltonian { channel, spec, v })
}

impl HologramHamiltonian<'_> {
    pub fn channel(&self) -> &ScatteringChannel {
        &self.channel
    }

    pub fn scaling(&self) -> f64 {
        self.v
    }

    /// `Ṽ_tot(r)` in fm⁻¹.
    fn internal_total_potential(&self, r: f64) -> Result<Complex> {
        let c = &self.channel;
        Ok(total_potential(self.spec, c.l, c.j, r, c.mass, c.hbar_c)? / c.hbar_c)
    }
}

impl HamiltonianEvaluator for HologramHamiltonian<'_> {
    fn dim(&self) -> usize {
        2
    }

    fn matrix(&self, t: f64) -> Result<CMatrix> {
        let c = &self.channel;
        let upper = re(2.0 * c.internal_mass() * self.v);
        let lower = (re(c.internal_energy()) - self.internal_total_potential(self.v * t)?) * self.v;
        Ok(CMatrix::from_row_slice(2, 2, &[re(0.0), upper, lower, re(0.0)]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialSample {
    pub r: f64,
    pub u: Complex,
    pub du_dr: Complex,
}

/// Sampled radial function. The overall complex scale is a gauge freedom.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSolution {
    pub samples: Vec<RadialSample>,
    pub channel: ScatteringChannel,
    /// Complex factor applied to the regular near-origin behaviour `r^{l+1}`.
    pub scale: Complex,
}

impl RadialSolution {
    /// Sample at exactly `r`, if requested.
    pub fn at(&self, r: f64) -> Option<&RadialSample> {
        self.samples
            .binary_search_by(|s| s.r.total_cmp(&r))
            .ok()
            .map(|i| &self.samples[i])
    }
}

/// Evolves the hologram from `r_start` to `r_end` and decodes `u`, `u'` at `r_start`,
/// every `sample_rs` and `r_end`.
///
/// Initial condition is the regular solution `u = r^{l+1}`, `u' = (l+1) r^l`. Encoding:
/// `α = √2 u`, `β = i u' / (√2 m̃)`; for `l = 0` this is (to `O(r_start)`) the pure `|−⟩` state.
pub fn solve_radial(
    channel: ScatteringChannel,
    spec: &PotentialSpec,
    r_start: f64,
    r_end: f64,
    v: f64,
    tolerance: f64,
    sample_rs: &[f64],
) -> Result<RadialSolution> {
    solve_radial_scaled(channel, spec, r_start, r_end, v, tolerance, sample_rs, re(1.0))
}

/// [`solve_radial`] with the initial spinor multiplied by `scale`.
#[allow(clippy::too_many_arguments)]
pub fn solve_radial_scaled(
    channel: ScatteringChannel,
    spec: &PotentialSpec,
    r_start: f64,
    r_end: f64,
    v: f64,
    tolerance: f64,
    sample_rs: &[f64],
    scale: Complex,
) -> Result<RadialSolution> {
    if !(r_start > 0.0 && r_end > r_start) {
        return Err(Error::InvalidInput(format!(
            "radial interval must satisfy 0 < r_start < r_end, got [{r_start}, {r_end}]"
        )));
    }
    if scale.norm() == 0.0 {
        return Err(Error::InvalidInput("initial scale must be non-zero".into()));
    }
    if let Some(bad) = sample_rs.iter().find(|&&r| !(r >= r_start && r <= r_end)) {
        return Err(Error::InvalidInput(format!(
            "sample radius {bad} outside [{r_start}, {r_end}]"
        )));
    }
    let hamiltonian = hologram_hamiltonian(channel, spec, v)?;
    let m_int = channel.internal_mass();

    let l = channel.l as i32;
    let u0 = scale * r_start.powi(l + 1);
    let du0 = scale * ((l + 1) as f64 * r_start.powi(l));
    let psi0 = CVector::from_vec(vec![u0 * SQRT_2, I * du0 / (SQRT_2 * m_int)]);

    let mut radii: Vec<f64> = sample_rs.to_vec();
    radii.push(r_start);
    radii.push(r_end);
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    let times: Vec<f64> = radii.iter().map(|r| r / v).collect();
    let breakpoints = spec
        .breakpoints()
        .into_iter()
        .filter(|&b| b > r_start && b < r_end)
        .map(|b| b / v);

    let traj = Integrator::new(tolerance)
        .with_breakpoints(breakpoints)
        .integrate(&hamiltonian, &psi0, r_start / v, r_end / v, &times)?;

    // `times` is sorted and deduplicated, so samples align one-to-one with `radii`
    // unless two radii collapse onto the same time after division.
    let states = traj.into_samples();
    if states.len() != radii.len() {
        return Err(Error::InvalidInput(
            "sample radii are not distinguishable after scaling by v".into(),
        ));
    }
    let samples = radii
        .into_iter()
        .zip(states)
        .map(|(r, (_, psi))| RadialSample {
            r,
            u: psi[0] / SQRT_2,
            du_dr: -I * SQRT_2 * m_int * psi[1],
        })
        .collect();
    Ok(RadialSolution {
        samples,
        channel,
        scale,
    })
}
