use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{solve_radial, ScatteringChannel, ScatteringSetup};
use crate::error::{Error, Result};
use crate::numerics::{re, spherical_bessel_j, spherical_neumann_n, Complex, I};
use crate::potential::{HalfInteger, PotentialSpec};

/// Complex phase shift from `u` at two radii beyond the potential range.
///
/// With `G = R₂ u(R₁) / (R₁ u(R₂))`, `N = j_l(kR₁) − G j_l(kR₂)` and
/// `D = n_l(kR₁) − G n_l(kR₂)`, `tan δ = N / D`. The result is taken from
/// `e^{2iδ} = (D + iN) / (D − iN)` on the principal branch, so `Re δ ∈ (−π/2, π/2]`.
pub fn extract_phase_shift(
    u_r1: Complex,
    u_r2: Complex,
    channel: &ScatteringChannel,
    r1: f64,
    r2: f64,
) -> Result<Complex> {
    if !(r2 > r1 && r1 > 0.0) {
        return Err(Error::InvalidInput(format!(
            "matching radii must satisfy 0 < R1 < R2, got {r1}, {r2}"
        )));
    }
    if u_r2.norm() == 0.0 || !u_r2.is_finite() || !u_r1.is_finite() {
        return Err(Error::IllConditionedRadii { r1, r2 });
    }
    let (l, k) = (channel.l, channel.k);
    let g = (u_r1 * r2) / (u_r2 * r1);
    let (j1, j2) = (spherical_bessel_j(l, k * r1)?, spherical_bessel_j(l, k * r2)?);
    let (n1, n2) = (spherical_neumann_n(l, k * r1)?, spherical_neumann_n(l, k * r2)?);
    let num = re(j1) - g * j2;
    let den = re(n1) - g * n2;

    let scale = j1.abs() + g.norm() * j2.abs() + n1.abs() + g.norm() * n2.abs();
    let lower = den - I * num;
    if num.norm() + den.norm() <= 1e-14 * scale || lower.norm() <= 1e-300 {
        return Err(Error::IllConditionedRadii { r1, r2 });
    }
    let s_matrix = (den + I * num) / lower;
    let delta = -0.5 * I * s_matrix.ln();
    if !delta.is_finite() {
        return Err(Error::IllConditionedRadii { r1, r2 });
    }
    Ok(reduce_branch(delta))
}

/// Shifts `Re δ` into `(−π/2, π/2]`.
fn reduce_branch(delta: Complex) -> Complex {
    use std::f64::consts::{FRAC_PI_2, PI};
    let mut d = delta;
    while d.re > FRAC_PI_2 {
        d.re -= PI;
    }
    while d.re <= -FRAC_PI_2 {
        d.re += PI;
    }
    d
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseShiftEntry {
    pub l: u32,
    pub j: HalfInteger,
    pub delta: Complex,
}

/// Phase shifts for every `(l, j = l ± 1/2)` up to `l_max`, ordered by `(l, j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseShiftTable {
    pub entries: Vec<PhaseShiftEntry>,
    pub energy: f64,
    pub k: f64,
    pub l_max: u32,
}

impl PhaseShiftTable {
    /// Table from explicit `(δ₊, δ₋)` pairs indexed by `l`; `δ₋` of `l = 0` is ignored.
    pub fn from_pairs(energy: f64, k: f64, pairs: &[(Complex, Complex)]) -> Self {
        let mut entries = Vec::with_capacity(2 * pairs.len());
        for (l, &(plus, minus)) in pairs.iter().enumerate() {
            let l = l as u32;
            if let Some(j) = HalfInteger::minus(l) {
                entries.push(PhaseShiftEntry { l, j, delta: minus });
            }
            entries.push(PhaseShiftEntry {
                l,
                j: HalfInteger::plus(l),
                delta: plus,
            });
        }
        PhaseShiftTable {
            entries,
            energy,
            k,
            l_max: pairs.len().saturating_sub(1) as u32,
        }
    }

    pub fn get(&self, l: u32, j: HalfInteger) -> Option<Complex> {
        self.entries
            .iter()
            .find(|e| e.l == l && e.j == j)
            .map(|e| e.delta)
    }

    /// `δ_{l, j = l + 1/2}` (zero if absent).
    pub fn plus(&self, l: u32) -> Complex {
        self.get(l, HalfInteger::plus(l)).unwrap_or_default()
    }

    /// `δ_{l, j = l − 1/2}` (zero for `l = 0` or if absent).
    pub fn minus(&self, l: u32) -> Complex {
        HalfInteger::minus(l)
            .and_then(|j| self.get(l, j))
            .unwrap_or_default()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.delta.norm()).fold(0.0, f64::max)
    }
}

/// All channels `l ≤ l_max` in `(l, j)` order.
pub fn channel_list(l_max: u32) -> Vec<(u32, HalfInteger)> {
    (0..=l_max)
        .flat_map(|l| HalfInteger::minus(l).into_iter().chain([HalfInteger::plus(l)]).map(move |j| (l, j)))
        .collect()
}

/// Runs the hologram solve and two-radius extraction for each channel (in parallel).
pub fn phase_shift_table(spec: &PotentialSpec, setup: &ScatteringSetup) -> Result<PhaseShiftTable> {
    setup.solver.validate()?;
    let mass = setup.constants.effective_mass(spec.target_mass_number());
    let hbar_c = setup.constants.hbar_c;
    let sp = setup.solver;
    let k = super::wave_number(setup.energy, mass, hbar_c);

    let results: Vec<Result<PhaseShiftEntry>> = channel_list(setup.l_max)
        .into_par_iter()
        .map(|(l, j)| {
            let run = || -> Result<PhaseShiftEntry> {
                let ch = ScatteringChannel::new(l, j, setup.energy, mass, hbar_c)?;
                let sol = solve_radial(ch, spec, sp.r_start, sp.r2, sp.v, sp.tolerance, &[sp.r1])?;
                let u1 = sol.at(sp.r1).expect("R1 sampled").u;
                let u2 = sol.at(sp.r2).expect("R2 sampled").u;
                let delta = extract_phase_shift(u1, u2, &ch, sp.r1, sp.r2)?;
                Ok(PhaseShiftEntry { l, j, delta })
            };
            run().map_err(|e| Error::Channel {
                l,
                j: j.value(),
                source: Box::new(e),
            })
        })
        .collect();

    let mut entries = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(e) => entries.push(e),
            Err(e) => failures.push(e),
        }
    }
    match failures.len() {
        0 => Ok(PhaseShiftTable {
            entries,
            energy: setup.energy,
            k,
            l_max: setup.l_max,
        }),
        1 => Err(failures.pop().unwrap()),
        _ => Err(Error::Aggregate(failures)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{HBAR_C, NEUTRON_MASS};
    use crate::scattering::{DEFAULT_R1, DEFAULT_R2};

    fn ch(l: u32, k: f64) -> ScatteringChannel {
        let e = crate::scattering::energy_for_wave_number(k, NEUTRON_MASS, HBAR_C);
        ScatteringChannel::new(l, HalfInteger::plus(l), e, NEUTRON_MASS, HBAR_C).unwrap()
    }

    /// u(r) = C r [cos δ j_l(kr) − sin δ n_l(kr)], evaluated directly.
    fn asymptotic_u(c: &ScatteringChannel, delta: Complex, r: f64, norm: Complex) -> Complex {
        let x = c.k * r;
        norm * r
            * (delta.cos() * spherical_bessel_j(c.l, x).unwrap()
                - delta.sin() * spherical_neumann_n(c.l, x).unwrap())
    }

    #[test]
    fn free_waves_have_zero_shift() {
        for l in 0..=12 {
            let c = ch(l, 0.6);
            let u1 = asymptotic_u(&c, re(0.0), DEFAULT_R1, re(1.0));
            let u2 = asymptotic_u(&c, re(0.0), DEFAULT_R2, re(1.0));
            let d = extract_phase_shift(u1, u2, &c, DEFAULT_R1, DEFAULT_R2).unwrap();
            assert!(d.norm() < 1e-10, "l = {l}: {d}");
        }
    }

    #[test]
    fn recovers_prescribed_complex_shift() {
        for (l, delta) in [(0, Complex::new(0.7, 0.2)), (3, Complex::new(-1.2, 0.05)), (6, Complex::new(0.01, 0.3))] {
            let c = ch(l, 1.1);
            let norm = Complex::new(-3.0, 2.0);
            let u1 = asymptotic_u(&c, delta, DEFAULT_R1, norm);
            let u2 = asymptotic_u(&c, delta, DEFAULT_R2, norm);
            let d = extract_phase_shift(u1, u2, &c, DEFAULT_R1, DEFAULT_R2).unwrap();
            assert!((d - delta).norm() < 1e-9, "l = {l}: {d} vs {delta}");
        }
    }

    #[test]
    fn branch_is_reduced() {
        let c = ch(0, 0.8);
        let delta = re(1.4 + std::f64::consts::PI);
        let u1 = asymptotic_u(&c, delta, DEFAULT_R1, re(1.0));
        let u2 = asymptotic_u(&c, delta, DEFAULT_R2, re(1.0));
        let d = extract_phase_shift(u1, u2, &c, DEFAULT_R1, DEFAULT_R2).unwrap();
        assert!((d.re - 1.4).abs() < 1e-9);
        assert!(reduce_branch(re(std::f64::consts::FRAC_PI_2)).re > 0.0);
        assert!(reduce_branch(re(-std::f64::consts::FRAC_PI_2)).re > 0.0);
    }

    #[test]
    fn degenerate_inputs() {
        let c = ch(0, 0.8);
        assert!(matches!(
            extract_phase_shift(re(1.0), re(0.0), &c, DEFAULT_R1, DEFAULT_R2),
            Err(Error::IllConditionedRadii { .. })
        ));
        assert!(extract_phase_shift(re(1.0), re(1.0), &c, 20.0, 19.0).is_err());
    }

    #[test]
    fn channel_ordering() {
        let list = channel_list(2);
        let labels: Vec<(u32, u32)> = list.iter().map(|(l, j)| (*l, j.twice())).collect();
        assert_eq!(labels, vec![(0, 1), (1, 1), (1, 3), (2, 3), (2, 5)]);
    }

    #[test]
    fn free_table_is_zero() {
        let mut setup = ScatteringSetup::new(12.0);
        setup.l_max = 4;
        let table = phase_shift_table(&PotentialSpec::Free, &setup).unwrap();
        assert_eq!(table.entries.len(), 9);
        // The u = r^{l+1} start leaves an O(k³ r_start³) irregular admixture.
        assert!(table.max_abs() < 1e-9, "{}", table.max_abs());
    }

    #[test]
    fn failing_channels_are_labelled() {
        let table = PotentialSpec::Tabulated(
            crate::potential::TabulatedPotential::new(vec![(0.0, re(-5.0)), (10.0, re(0.0))]).unwrap(),
        );
        let mut setup = ScatteringSetup::new(12.0);
        setup.l_max = 1;
        match phase_shift_table(&table, &setup) {
            Err(Error::Aggregate(errs)) => {
                assert_eq!(errs.len(), 3);
                assert!(errs[0].to_string().contains("l = 0"));
            }
            other => panic!("expected aggregate failure, got {other:?}"),
        }
    }
}
