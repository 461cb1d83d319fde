//! Independent reference solvers used by the test suites.
//!
//! Nothing here shares code with the hologram path beyond the potential evaluation and the
//! spherical Bessel functions: the radial equation `u'' = [U(r) − k²] u` is integrated with
//! a fixed-step Numerov scheme on a uniform grid.

use crate::error::{Error, Result};
use crate::numerics::{re, spherical_bessel_j, spherical_neumann_n, Complex};
use crate::potential::{
    evaluate_potential, HalfInteger, OpticalModelSpec, PotentialSpec, SpinOrbitTerm, WoodsSaxonForm,
    WoodsSaxonTerm,
};
use crate::scattering::ScatteringChannel;

pub const NUMEROV_STEP: f64 = 2e-4;

/// Numerov solution on the grid `r_n = n h`, starting at `n = start_index`.
#[derive(Debug, Clone)]
pub struct NumerovSolution {
    pub h: f64,
    pub start_index: usize,
    pub u: Vec<Complex>,
}

impl NumerovSolution {
    pub fn r(&self, i: usize) -> f64 {
        (self.start_index + i) as f64 * self.h
    }

    /// Value at a grid node `r` (must lie on the grid up to 1e−9).
    pub fn at(&self, r: f64) -> Option<Complex> {
        let n = (r / self.h).round();
        if (n * self.h - r).abs() > 1e-9 || (n as usize) < self.start_index {
            return None;
        }
        self.u.get(n as usize - self.start_index).copied()
    }

    /// `(r, u)` for every grid node.
    pub fn points(&self) -> impl Iterator<Item = (f64, Complex)> + '_ {
        self.u.iter().enumerate().map(|(i, &u)| (self.r(i), u))
    }
}

/// `U(r) − k²` in fm⁻², averaging the two one-sided limits on a breakpoint.
fn coefficient(spec: &PotentialSpec, ch: &ScatteringChannel, breaks: &[f64], r: f64) -> Result<Complex> {
    let scale = 2.0 * ch.mass / (ch.hbar_c * ch.hbar_c);
    let lf = ch.l as f64;
    let centrifugal = lf * (lf + 1.0) / (r * r);
    let v = if breaks.iter().any(|b| (b - r).abs() < 1e-9) {
        let eps = 1e-9 * r.max(1.0);
        (evaluate_potential(spec, ch.l, ch.j, r - eps)? + evaluate_potential(spec, ch.l, ch.j, r + eps)?) * 0.5
    } else {
        evaluate_potential(spec, ch.l, ch.j, r)?
    };
    Ok(v * scale + centrifugal - ch.k * ch.k)
}

/// Integrates the radial equation from `start_index · h` to `r_end` with step `h`.
///
/// The two starting values come from the regular series
/// `u = r^{l+1} (1 + a r²)`, `a = (W(r₀) − k²) / (2(2l+3))`, `W = 2mV/(ħc)²`.
pub fn numerov_radial(
    spec: &PotentialSpec,
    ch: &ScatteringChannel,
    h: f64,
    start_index: usize,
    r_end: f64,
) -> Result<NumerovSolution> {
    if !(h > 0.0) || start_index < 1 {
        return Err(Error::InvalidInput("Numerov grid needs h > 0 and a start index ≥ 1".into()));
    }
    let n_end = (r_end / h).round() as usize;
    if n_end <= start_index + 1 {
        return Err(Error::InvalidInput("Numerov grid too short".into()));
    }
    let breaks = spec.breakpoints();
    let lf = ch.l as f64;
    let w0 = evaluate_potential(spec, ch.l, ch.j, start_index as f64 * h)? * (2.0 * ch.mass / (ch.hbar_c * ch.hbar_c));
    let a = (w0 - ch.k * ch.k) / (2.0 * (2.0 * lf + 3.0));
    let series = |r: f64| (a * r * r + 1.0) * r.powi(ch.l as i32 + 1);

    // Summed form of `y_{n+1} − 2y_n + y_{n−1} = h² f_n u_n` with `y = (1 − h² f / 12) u`;
    // the direct three-term recurrence loses ~1e−8 relative accuracy to roundoff at this step.
    let h2 = h * h;
    let r0 = start_index as f64 * h;
    let mut u = Vec::with_capacity(n_end - start_index + 1);
    let mut f = coefficient(spec, ch, &breaks, r0)?;
    let f1 = coefficient(spec, ch, &breaks, r0 + h)?;
    let (u0, u1) = (series(r0), series(r0 + h));
    let y0 = (re(1.0) - f * (h2 / 12.0)) * u0;
    let mut y = (re(1.0) - f1 * (h2 / 12.0)) * u1;
    let mut d = y - y0;
    u.push(u0);
    u.push(u1);
    f = f1;
    for n in (start_index + 2)..=n_end {
        let r = n as f64 * h;
        d += f * u[u.len() - 1] * h2;
        y += d;
        f = coefficient(spec, ch, &breaks, r)?;
        let next = y / (re(1.0) - f * (h2 / 12.0));
        if !next.is_finite() {
            return Err(Error::NonFinite { t: r });
        }
        u.push(next);
    }
    Ok(NumerovSolution { h, start_index, u })
}

/// Phase shift from a Numerov solution at two grid radii, via `tan δ = N / D`.
pub fn oracle_phase_shift(sol: &NumerovSolution, ch: &ScatteringChannel, r1: f64, r2: f64) -> Result<Complex> {
    let u1 = sol.at(r1).ok_or_else(|| Error::InvalidInput(format!("{r1} is not a grid node")))?;
    let u2 = sol.at(r2).ok_or_else(|| Error::InvalidInput(format!("{r2} is not a grid node")))?;
    let (x1, x2) = (ch.k * r1, ch.k * r2);
    // u(r) ∝ r [j_l(kr) − tan δ · n_l(kr)]; eliminate the normalization.
    let num = u1 * r2 * spherical_bessel_j(ch.l, x2)? - u2 * r1 * spherical_bessel_j(ch.l, x1)?;
    let den = u1 * r2 * spherical_neumann_n(ch.l, x2)? - u2 * r1 * spherical_neumann_n(ch.l, x1)?;
    let mut delta = (num / den).atan();
    let pi = std::f64::consts::PI;
    while delta.re > pi / 2.0 {
        delta.re -= pi;
    }
    while delta.re <= -pi / 2.0 {
        delta.re += pi;
    }
    Ok(delta)
}

/// Oracle table `[(δ_{l,j−}, δ_{l,j+})]` for `l = 0..=l_max` (`δ_{0,j−}` repeats `δ_{0,1/2}`).
pub fn oracle_phase_shifts(
    spec: &PotentialSpec,
    energy: f64,
    mass: f64,
    hbar_c: f64,
    l_max: u32,
    r1: f64,
    r2: f64,
) -> Result<Vec<(Complex, Complex)>> {
    let mut out = Vec::new();
    for l in 0..=l_max {
        let mut pair = [re(0.0); 2];
        for (slot, j) in [HalfInteger::minus(l), Some(HalfInteger::plus(l))].into_iter().enumerate() {
            let Some(j) = j else { continue };
            let ch = ScatteringChannel::new(l, j, energy, mass, hbar_c)?;
            let sol = numerov_radial(spec, &ch, NUMEROV_STEP, 50, r2)?;
            pair[slot] = oracle_phase_shift(&sol, &ch, r1, r2)?;
        }
        if l == 0 {
            pair[0] = pair[1];
        }
        out.push((pair[0], pair[1]));
    }
    Ok(out)
}

/// Closed-form s-wave shift of a real square well (depth `v0` MeV, radius `radius` fm),
/// reduced to `(−π/2, π/2]`.
///
/// Interior `sin(κr)`, exterior `sin(kr + δ)`; continuity of `u'/u` at `R` gives
/// `tan(kR + δ) = (k/κ) tan(κR)`.
pub fn square_well_s_wave(energy: f64, v0: f64, radius: f64, mass: f64, hbar_c: f64) -> f64 {
    let k = (2.0 * mass * energy).sqrt() / hbar_c;
    let kappa = (2.0 * mass * (energy - v0)).sqrt() / hbar_c;
    let pi = std::f64::consts::PI;
    let mut delta = ((k / kappa) * (kappa * radius).tan()).atan() - k * radius;
    while delta > pi / 2.0 {
        delta -= pi;
    }
    while delta <= -pi / 2.0 {
        delta += pi;
    }
    delta
}

/// Test corpus: free, real and complex square wells, and a complex Woods-Saxon optical
/// potential with spin-orbit coupling.
pub fn potential_corpus() -> Vec<(&'static str, PotentialSpec)> {
    let a = 40u32;
    let radius = 1.2 * (a as f64).cbrt();
    let term = |depth: f64, form| WoodsSaxonTerm::new(depth, radius, 0.65, form).expect("valid term");
    let optical = OpticalModelSpec {
        real_volume: term(-46.0, WoodsSaxonForm::Volume),
        imag_volume: Some(term(-2.0, WoodsSaxonForm::Volume)),
        imag_surface: Some(term(-6.0, WoodsSaxonForm::SurfaceDerivative)),
        spin_orbit: Some(SpinOrbitTerm { term: term(6.0, WoodsSaxonForm::Volume), thomas_factor: 2.0 }),
        target_mass_number: a,
    };
    vec![
        ("free", PotentialSpec::Free),
        ("real square well", PotentialSpec::square_well(re(-40.0), 3.0).expect("valid well")),
        ("complex square well", PotentialSpec::square_well(Complex::new(-40.0, -10.0), 3.0).expect("valid well")),
        ("woods-saxon", PotentialSpec::OpticalModel(optical)),
    ]
}

/// Largest pointwise deviation between hologram samples and a Numerov solution for `r ≥ r_min`.
///
/// The overall complex scale is fixed at the sample where `|u_numerov|` is largest. Each
/// deviation is measured relative to the running maximum of `|u_numerov|` up to that radius,
/// so nodes of the wave function do not inflate the metric.
pub fn pointwise_deviation(samples: &[(f64, Complex)], reference: &NumerovSolution, r_min: f64) -> Result<f64> {
    let pairs: Vec<(f64, Complex, Complex)> = samples
        .iter()
        .filter(|(r, _)| *r >= r_min)
        .map(|&(r, u)| {
            reference
                .at(r)
                .map(|o| (r, u, o))
                .ok_or_else(|| Error::InvalidInput(format!("{r} is not a Numerov grid node")))
        })
        .collect::<Result<_>>()?;
    let Some(&(_, u_anchor, o_anchor)) = pairs.iter().max_by(|a, b| a.2.norm().total_cmp(&b.2.norm())) else {
        return Err(Error::InvalidInput("no sample at or beyond r_min".into()));
    };
    let gauge = o_anchor / u_anchor;
    // Running maximum includes the part of the reference below r_min.
    let mut running = reference
        .points()
        .take_while(|(r, _)| *r < r_min)
        .map(|(_, u)| u.norm())
        .fold(0.0, f64::max);
    let mut worst: f64 = 0.0;
    for (_, u, o) in pairs {
        running = running.max(o.norm());
        worst = worst.max((u * gauge - o).norm() / running);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{HBAR_C, NEUTRON_MASS};

    #[test]
    fn numerov_free_s_wave() {
        let ch = ScatteringChannel::new(0, HalfInteger::plus(0), 10.0, NEUTRON_MASS, HBAR_C).unwrap();
        let sol = numerov_radial(&PotentialSpec::Free, &ch, NUMEROV_STEP, 50, 20.0).unwrap();
        for (r, u) in sol.points().step_by(997) {
            let want = (ch.k * r).sin() / ch.k;
            assert!((u - want).norm() < 1e-9, "r={r}: {u} vs {want}");
        }
    }

    #[test]
    fn numerov_square_well_matches_closed_form() {
        let spec = PotentialSpec::square_well(re(-10.0), 3.0).unwrap();
        for e in [1.0, 5.0, 20.0] {
            let ch = ScatteringChannel::new(0, HalfInteger::plus(0), e, NEUTRON_MASS, HBAR_C).unwrap();
            let sol = numerov_radial(&spec, &ch, NUMEROV_STEP, 50, 20.0).unwrap();
            let d = oracle_phase_shift(&sol, &ch, 19.98, 20.0).unwrap();
            let want = square_well_s_wave(e, -10.0, 3.0, NEUTRON_MASS, HBAR_C);
            assert!((d - want).norm() < 1e-7, "E={e}: {d} vs {want}");
        }
    }

    #[test]
    fn square_well_closed_form_limits() {
        // Vanishing depth gives no shift; an attractive well gives a positive low-energy shift.
        assert!(square_well_s_wave(5.0, 0.0, 3.0, NEUTRON_MASS, HBAR_C).abs() < 1e-14);
        assert!(square_well_s_wave(0.5, -5.0, 3.0, NEUTRON_MASS, HBAR_C) > 0.0);
    }
}
