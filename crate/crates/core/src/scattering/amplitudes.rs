use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::PhaseShiftTable;
use crate::error::{Error, Result};
use crate::numerics::{legendre_table, re, Complex, I};

/// Number of θ nodes in the composite Simpson rule for σ_el.
pub const SIGMA_EL_GRID_POINTS: usize = 2001;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngularPoint {
    /// Radians, in (0, π).
    pub theta: f64,
    /// Non-spin-flip amplitude (fm).
    pub f: Complex,
    /// Spin-flip amplitude (fm).
    pub g: Complex,
    /// Unpolarised `|f|² + |g|²` in fm²/sr.
    pub dsigma_domega: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngularDistribution {
    pub points: Vec<AngularPoint>,
}

fn s_minus_one(delta: Complex) -> Complex {
    (2.0 * I * delta).exp() - 1.0
}

/// Spin-1/2 partial-wave sums for `f(k, θ)`, `g(k, θ)` and the unpolarised cross section.
pub fn scattering_amplitudes(table: &PhaseShiftTable, theta_grid: &[f64]) -> Result<AngularDistribution> {
    if !(table.k > 0.0) {
        return Err(Error::InvalidInput("wave number must be positive".into()));
    }
    let k = table.k;
    // Per-l coefficients of the f and g sums.
    let coeffs: Vec<(Complex, Complex)> = (0..=table.l_max)
        .map(|l| {
            let (sp, sm) = (s_minus_one(table.plus(l)), s_minus_one(table.minus(l)));
            let lf = l as f64;
            ((lf + 1.0) * sp + lf * sm, sp - sm)
        })
        .collect();

    let points = theta_grid
        .iter()
        .map(|&theta| {
            if !(theta > 0.0 && theta < PI) {
                return Err(Error::Domain(format!("scattering angle {theta} outside (0, π)")));
            }
            let (p, dp) = legendre_table(table.l_max, theta.cos())?;
            let mut fsum = re(0.0);
            let mut gsum = re(0.0);
            for (l, (cf, cg)) in coeffs.iter().enumerate() {
                fsum += cf * p[l];
                gsum += cg * dp[l];
            }
            let f = fsum / (2.0 * I * k);
            let g = gsum * (theta.sin() / (2.0 * k));
            Ok(AngularPoint {
                theta,
                f,
                g,
                dsigma_domega: f.norm_sqr() + g.norm_sqr(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AngularDistribution { points })
}

/// Forward amplitude `f(θ = 0)`, using `P_l(1) = 1`.
pub fn forward_amplitude(table: &PhaseShiftTable) -> Complex {
    let sum: Complex = (0..=table.l_max)
        .map(|l| {
            let lf = l as f64;
            (lf + 1.0) * s_minus_one(table.plus(l)) + lf * s_minus_one(table.minus(l))
        })
        .sum();
    sum / (2.0 * I * table.k)
}

/// `(σ_el, σ_tot)` in fm². σ_el integrates the angular distribution with composite Simpson
/// on [`SIGMA_EL_GRID_POINTS`] nodes; σ_tot comes from the optical theorem.
pub fn total_cross_sections(table: &PhaseShiftTable) -> Result<(f64, f64)> {
    let n = SIGMA_EL_GRID_POINTS;
    let h = PI / (n - 1) as f64;
    let interior: Vec<f64> = (1..n - 1).map(|i| i as f64 * h).collect();
    let dist = scattering_amplitudes(table, &interior)?;
    // The integrand carries sin θ, so both endpoints contribute zero.
    let mut sum = 0.0;
    for (i, pt) in dist.points.iter().enumerate() {
        let w = if (i + 1) % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * pt.dsigma_domega * pt.theta.sin();
    }
    let sigma_el = 2.0 * PI * sum * h / 3.0;
    let sigma_tot = 4.0 * PI / table.k * forward_amplitude(table).im;
    Ok((sigma_el, sigma_tot))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataComparison {
    pub chi2: f64,
    /// `(θ, model, value, (model − value)/uncertainty)` per data point.
    pub residuals: Vec<(f64, f64, f64, f64)>,
}

/// χ² of `(θ, value, uncertainty)` data against the linearly interpolated model curve.
/// Values must be in the same units as `dsigma_domega`.
pub fn compare_to_data(dist: &AngularDistribution, data: &[(f64, f64, f64)]) -> Result<DataComparison> {
    if data.is_empty() {
        return Err(Error::InvalidInput("no data points to compare".into()));
    }
    if dist.points.len() < 2 {
        return Err(Error::InvalidInput("model curve needs at least two angles".into()));
    }
    let thetas: Vec<f64> = dist.points.iter().map(|p| p.theta).collect();
    let (lo, hi) = (thetas[0], *thetas.last().unwrap());
    let mut chi2 = 0.0;
    let mut residuals = Vec::with_capacity(data.len());
    for &(theta, value, sigma) in data {
        if !(sigma > 0.0) {
            return Err(Error::InvalidInput(format!(
                "uncertainty must be positive, got {sigma} at θ = {theta}"
            )));
        }
        if !(theta >= lo && theta <= hi) {
            return Err(Error::InvalidInput(format!(
                "data angle {theta} outside the model grid [{lo}, {hi}]"
            )));
        }
        let i = thetas.partition_point(|&t| t < theta).max(1).min(thetas.len() - 1);
        let (t0, t1) = (thetas[i - 1], thetas[i]);
        let (y0, y1) = (dist.points[i - 1].dsigma_domega, dist.points[i].dsigma_domega);
        let w = (theta - t0) / (t1 - t0);
        let model = y0 + w * (y1 - y0);
        let z = (model - value) / sigma;
        chi2 += z * z;
        residuals.push((theta, model, value, z));
    }
    Ok(DataComparison { chi2, residuals })
}
