//! Physical constants in MeV / fm units.

use serde::{Deserialize, Serialize};

/// ħc in MeV·fm (CODATA 2018).
pub const HBAR_C: f64 = 197.326_980_4;

/// Neutron rest energy in MeV (CODATA 2018).
pub const NEUTRON_MASS: f64 = 939.565_420_52;

/// Atomic mass unit in MeV, used for the target mass in the reduced-mass option.
pub const ATOMIC_MASS_UNIT: f64 = 931.494_102_42;

/// Conversion from fm² to millibarn.
pub const FM2_TO_MB: f64 = 10.0;

/// Constants table used by the scattering pipeline. Every field may be overridden from a
/// potential or run config.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Constants {
    pub hbar_c: f64,
    pub projectile_mass: f64,
    /// Use the projectile-target reduced mass instead of the bare projectile mass.
    pub reduced_mass: bool,
}

impl Default for Constants {
    fn default() -> Self {
        Constants {
            hbar_c: HBAR_C,
            projectile_mass: NEUTRON_MASS,
            reduced_mass: false,
        }
    }
}

impl Constants {
    /// Mass entering the radial equation. `target_mass_number` is only consulted when the
    /// reduced-mass option is on; a stationary target is assumed otherwise.
    pub fn effective_mass(&self, target_mass_number: Option<u32>) -> f64 {
        match (self.reduced_mass, target_mass_number) {
            (true, Some(a)) => {
                let target = a as f64 * ATOMIC_MASS_UNIT;
                self.projectile_mass * target / (self.projectile_mass + target)
            }
            _ => self.projectile_mass,
        }
    }
}
