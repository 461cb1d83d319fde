//! Shooting solver for bound states across a mass domain wall.
//!
//! The trial energy `E` enters `H(x) = [[E, −m(x)], [m(x), −E]]`. Starting from the gain
//! eigenvector `|y−⟩ = (|L⟩ − i|R⟩)/√2` of the `m = +1` side, a true bound state is the
//! trial energy for which the far side carries no growing component, i.e. where the final
//! amplitude is minimal.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{re, CMatrix, CVector, Complex, HamiltonianEvaluator, Integrator, Trajectory};

/// Default evolution window.
pub const DEFAULT_WINDOW: (f64, f64) = (-5.0, 5.0);
/// Default golden-section tolerance on E.
pub const DEFAULT_ENERGY_TOLERANCE: f64 = 1e-4;

/// Spatially varying mass `m(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MassProfile {
    /// `m(x) = −amplitude · tanh((x − center)/width)`: `+amplitude` on the left.
    DomainWall {
        amplitude: f64,
        center: f64,
        width: f64,
    },
    /// `m(x) = mass` everywhere (no wall).
    Constant { mass: f64 },
}

impl Default for MassProfile {
    fn default() -> Self {
        MassProfile::DomainWall {
            amplitude: 1.0,
            center: 0.0,
            width: 1.0,
        }
    }
}

impl MassProfile {
    pub fn shifted(center: f64) -> Self {
        MassProfile::DomainWall {
            amplitude: 1.0,
            center,
            width: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            MassProfile::DomainWall { amplitude, center, width } => {
                amplitude.is_finite() && amplitude != 0.0 && center.is_finite() && width > 0.0 && width.is_finite()
            }
            MassProfile::Constant { mass } => mass.is_finite() && mass != 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("invalid mass profile {self:?}")))
        }
    }

    pub fn mass(&self, x: f64) -> f64 {
        match *self {
            MassProfile::DomainWall { amplitude, center, width } => -amplitude * ((x - center) / width).tanh(),
            MassProfile::Constant { mass } => mass,
        }
    }

    /// `(m(−∞), m(+∞))`.
    pub fn asymptotes(&self) -> (f64, f64) {
        match *self {
            MassProfile::DomainWall { amplitude, .. } => (amplitude, -amplitude),
            MassProfile::Constant { mass } => (mass, mass),
        }
    }

    pub fn max_abs(&self) -> f64 {
        let (a, b) = self.asymptotes();
        a.abs().max(b.abs())
    }
}

/// `t ↦ [[E, −m(t)], [m(t), −E]]`.
#[derive(Debug, Clone, Copy)]
pub struct MajoranaHamiltonian {
    pub energy: f64,
    pub profile: MassProfile,
}

pub fn majorana_hamiltonian(energy: f64, profile: MassProfile) -> MajoranaHamiltonian {
    MajoranaHamiltonian { energy, profile }
}

impl HamiltonianEvaluator for MajoranaHamiltonian {
    fn dim(&self) -> usize {
        2
    }

    fn matrix(&self, t: f64) -> Result<CMatrix> {
        let m = self.profile.mass(t);
        let e = self.energy;
        Ok(CMatrix::from_row_slice(2, 2, &[re(e), re(-m), re(m), re(-e)]))
    }
}

/// `|y−⟩ = (1, −i)/√2` in the `{|L⟩, |R⟩}` basis.
pub fn y_minus() -> CVector {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CVector::from_vec(vec![re(s), Complex::new(0.0, -s)])
}

#[derive(Debug, Clone)]
pub struct TrialEvolution {
    pub energy: f64,
    pub final_state: CVector,
    /// Euclidean norm of the unnormalised final spinor.
    pub final_amplitude: f64,
    pub trajectory: Trajectory,
}

/// Bloch components `(⟨σx⟩, ⟨σy⟩, ⟨σz⟩)` of the normalised spinor, plus its norm.
pub fn bloch_components(psi: &CVector) -> ([f64; 3], f64) {
    let norm = psi.norm();
    if norm == 0.0 {
        return ([0.0; 3], 0.0);
    }
    let (a, b) = (psi[0] / norm, psi[1] / norm);
    let ab = a.conj() * b;
    ([2.0 * ab.re, 2.0 * ab.im, a.norm_sqr() - b.norm_sqr()], norm)
}

/// Evolves `|y−⟩` from `x0` to `x1` at trial energy `E`. `samples` extra sample points are
/// recorded uniformly across the window (0 records only the endpoints).
pub fn evolve_trial(
    energy: f64,
    profile: MassProfile,
    x0: f64,
    x1: f64,
    tolerance: f64,
    samples: usize,
) -> Result<TrialEvolution> {
    profile.validate()?;
    if !(x1 > x0) {
        return Err(Error::InvalidInput(format!("window must satisfy x0 < x1, got [{x0}, {x1}]")));
    }
    let h = majorana_hamiltonian(energy, profile);
    let times: Vec<f64> = (1..samples.max(1))
        .map(|i| x0 + (x1 - x0) * i as f64 / samples as f64)
        .collect();
    let trajectory = Integrator::new(tolerance).integrate(&h, &y_minus(), x0, x1, &times)?;
    let final_state = trajectory.final_state().clone();
    Ok(TrialEvolution {
        energy,
        final_amplitude: final_state.norm(),
        final_state,
        trajectory,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyScan {
    /// `(E, final amplitude)` with E strictly increasing.
    pub entries: Vec<(f64, f64)>,
    pub window: (f64, f64),
    pub evolution_window: (f64, f64),
}

impl EnergyScan {
    /// Indices of strict interior local minima.
    pub fn interior_minima(&self) -> Vec<usize> {
        let a: Vec<f64> = self.entries.iter().map(|e| e.1).collect();
        (1..a.len().saturating_sub(1))
            .filter(|&i| a[i] < a[i - 1] && a[i] < a[i + 1])
            .collect()
    }
}

/// Final amplitude for every trial energy in `grid` (sorted, strictly increasing).
pub fn scan_energies(
    profile: MassProfile,
    grid: &[f64],
    x0: f64,
    x1: f64,
    tolerance: f64,
) -> Result<EnergyScan> {
    use rayon::prelude::*;
    if grid.is_empty() {
        return Err(Error::InvalidInput("energy grid is empty".into()));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidInput("energy grid must be strictly increasing".into()));
    }
    let results: Vec<Result<(f64, f64)>> = grid
        .par_iter()
        .map(|&e| evolve_trial(e, profile, x0, x1, tolerance, 0).map(|t| (e, t.final_amplitude)))
        .collect();
    let mut entries = Vec::with_capacity(grid.len());
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(p) => entries.push(p),
            Err(e) => failures.push(e),
        }
    }
    if !failures.is_empty() {
        return Err(Error::Aggregate(failures));
    }
    Ok(EnergyScan {
        entries,
        window: (grid[0], *grid.last().unwrap()),
        evolution_window: (x0, x1),
    })
}

/// Golden-section minimisation of the final amplitude over `bracket`.
pub fn find_bound_state(
    profile: MassProfile,
    bracket: (f64, f64),
    tol_e: f64,
    x0: f64,
    x1: f64,
    tolerance: f64,
) -> Result<f64> {
    let (lo, hi) = bracket;
    if !(hi > lo) || !(tol_e > 0.0) {
        return Err(Error::InvalidInput(format!(
            "bracket must satisfy lo < hi with a positive tolerance, got ({lo}, {hi}), {tol_e}"
        )));
    }
    let amp = |e: f64| evolve_trial(e, profile, x0, x1, tolerance, 0).map(|t| t.final_amplitude);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (amp(c)?, amp(d)?);
    while b - a > tol_e {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = amp(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = amp(d)?;
        }
    }
    let e_star = 0.5 * (a + b);
    // Collapsing onto an end of the bracket means the amplitude is monotone there.
    if e_star - lo <= tol_e || hi - e_star <= tol_e {
        return Err(Error::NoInteriorMinimum { lo, hi });
    }
    let f_star = amp(e_star)?;
    if f_star >= amp(lo)? || f_star >= amp(hi)? {
        return Err(Error::NoInteriorMinimum { lo, hi });
    }
    Ok(e_star)
}

/// Points in `x_range` where `|m(x)| = |E|` (the exceptional points of the local
/// Hamiltonian). Roots of `m(x) ∓ |E|` are bracketed on a dense pre-scan and bisected;
/// coincident roots (as at `E = 0`) are merged.
pub fn turning_points(energy: f64, profile: MassProfile, x_range: (f64, f64)) -> Vec<f64> {
    const SCAN: usize = 4000;
    let target = energy.abs();
    if target >= profile.max_abs() {
        return Vec::new();
    }
    let (lo, hi) = x_range;
    let dx = (hi - lo) / SCAN as f64;
    let mut roots: Vec<f64> = Vec::new();
    for sign in [1.0, -1.0] {
        let f = |x: f64| profile.mass(x) - sign * target;
        for i in 0..SCAN {
            let (a, b) = (lo + i as f64 * dx, lo + (i + 1) as f64 * dx);
            let (fa, fb) = (f(a), f(b));
            if fa == 0.0 {
                roots.push(a);
            } else if fa * fb < 0.0 {
                roots.push(bisect(&f, a, b, fa));
            } else if i + 1 == SCAN && fb == 0.0 {
                roots.push(b);
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * (1.0 + b.abs()));
    roots
}

fn bisect(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fa * fm < 0.0 {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    0.5 * (a + b)
}
