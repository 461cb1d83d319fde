//! Partial-wave neutron scattering through the qubit hologram.
//!
//! The radial equation `u'' + [k² − U(r)] u = 0` with
//! `U = 2mV_lj/(ħc)² + l(l+1)/r²` is mapped onto a non-Hermitian two-level evolution
//! whose amplitudes `(α, β)` encode `u` and `u'`. Phase shifts come from the two-radius
//! comparison against free spherical waves; amplitudes and cross sections follow from the
//! partial-wave sums.

mod amplitudes;
mod phase;
mod radial;

pub use amplitudes::{
    compare_to_data, scattering_amplitudes, total_cross_sections, AngularDistribution,
    AngularPoint, DataComparison, SIGMA_EL_GRID_POINTS,
};
pub use phase::{extract_phase_shift, phase_shift_table, PhaseShiftEntry, PhaseShiftTable};
pub use radial::{
    hologram_hamiltonian, solve_radial, solve_radial_scaled, HologramHamiltonian, RadialSample,
    RadialSolution,
};

use serde::{Deserialize, Serialize};

use crate::constants::Constants;
use crate::error::{Error, Result};
use crate::potential::HalfInteger;

/// Default near-origin starting radius (fm).
pub const DEFAULT_R_START: f64 = 1e-3;
/// Default inner matching radius (fm).
pub const DEFAULT_R1: f64 = 19.98;
/// Default outer matching radius and integration endpoint (fm).
pub const DEFAULT_R2: f64 = 20.0;
/// Default partial-wave cutoff.
pub const DEFAULT_L_MAX: u32 = 12;

/// Quantum numbers and kinematics of one partial wave.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatteringChannel {
    pub l: u32,
    pub j: HalfInteger,
    /// Lab energy in MeV.
    pub energy: f64,
    /// Wave number in fm⁻¹.
    pub k: f64,
    /// Mass entering the radial equation, MeV.
    pub mass: f64,
    pub hbar_c: f64,
}

impl ScatteringChannel {
    pub fn new(l: u32, j: HalfInteger, energy: f64, mass: f64, hbar_c: f64) -> Result<Self> {
        if !j.couples_with(l) {
            return Err(Error::InvalidChannel { l, j: j.value() });
        }
        if !(energy > 0.0) || !energy.is_finite() {
            return Err(Error::InvalidInput(format!("energy must be positive, got {energy}")));
        }
        if !(mass > 0.0) || !(hbar_c > 0.0) {
            return Err(Error::InvalidInput("mass and ħc must be positive".into()));
        }
        Ok(ScatteringChannel {
            l,
            j,
            energy,
            k: wave_number(energy, mass, hbar_c),
            mass,
            hbar_c,
        })
    }

    /// Mass in the internal unit system, `m / ħc` (fm⁻¹).
    pub fn internal_mass(&self) -> f64 {
        self.mass / self.hbar_c
    }

    /// Energy in the internal unit system, `k² / (2 m̃)` (fm⁻¹).
    pub fn internal_energy(&self) -> f64 {
        self.k * self.k / (2.0 * self.internal_mass())
    }
}

/// `k = √(2 m E) / ħc`.
pub fn wave_number(energy: f64, mass: f64, hbar_c: f64) -> f64 {
    (2.0 * mass * energy).sqrt() / hbar_c
}

/// Lab energy giving wave number `k`.
pub fn energy_for_wave_number(k: f64, mass: f64, hbar_c: f64) -> f64 {
    (k * hbar_c).powi(2) / (2.0 * mass)
}

/// Knobs of the radial solve and phase-shift extraction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverParams {
    pub r_start: f64,
    pub r1: f64,
    pub r2: f64,
    /// Space-to-time scaling `r = v t`.
    pub v: f64,
    pub tolerance: f64,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            r_start: DEFAULT_R_START,
            r1: DEFAULT_R1,
            r2: DEFAULT_R2,
            v: 1.0,
            tolerance: crate::numerics::DEFAULT_TOLERANCE,
        }
    }
}

impl SolverParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.r_start > 0.0 && self.r_start < self.r1 && self.r1 < self.r2) {
            return Err(Error::InvalidInput(format!(
                "radii must satisfy 0 < r_start < R1 < R2, got {} / {} / {}",
                self.r_start, self.r1, self.r2
            )));
        }
        if !(self.v > 0.0) || !self.v.is_finite() {
            return Err(Error::InvalidInput(format!("scaling v must be positive, got {}", self.v)));
        }
        if !(self.tolerance > 0.0 && self.tolerance <= 1e-3) {
            return Err(Error::InvalidInput(format!(
                "tolerance must lie in (0, 1e-3], got {}",
                self.tolerance
            )));
        }
        Ok(())
    }
}

/// Energy, constants and solver settings for one phase-shift run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatteringSetup {
    pub energy: f64,
    pub constants: Constants,
    pub l_max: u32,
    pub solver: SolverParams,
}

impl ScatteringSetup {
    pub fn new(energy: f64) -> Self {
        ScatteringSetup {
            energy,
            constants: Constants::default(),
            l_max: DEFAULT_L_MAX,
            solver: SolverParams::default(),
        }
    }
}
