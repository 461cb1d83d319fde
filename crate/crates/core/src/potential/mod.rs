//! Channel-dependent complex potentials `V_lj(r)` and the centrifugal total potential.

mod config;

pub use config::{
    parse_columns, parse_tabulated, DepthRule, PotentialConfig, RadiusRule, TermConfig,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::Complex;

/// A non-negative half-odd-integer angular momentum, stored as `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HalfInteger(u32);

impl HalfInteger {
    /// `twice` must be odd.
    pub fn from_twice(twice: u32) -> Result<Self> {
        if twice % 2 == 1 {
            Ok(HalfInteger(twice))
        } else {
            Err(Error::InvalidInput(format!("2j = {twice} is not odd")))
        }
    }

    pub fn from_f64(j: f64) -> Result<Self> {
        let twice = 2.0 * j;
        if twice.fract() != 0.0 || twice < 1.0 {
            return Err(Error::InvalidInput(format!("j = {j} is not a positive half-integer")));
        }
        Self::from_twice(twice as u32)
    }

    /// `l + 1/2`.
    pub fn plus(l: u32) -> Self {
        HalfInteger(2 * l + 1)
    }

    /// `l - 1/2`, absent for `l = 0`.
    pub fn minus(l: u32) -> Option<Self> {
        (l > 0).then(|| HalfInteger(2 * l - 1))
    }

    pub fn twice(self) -> u32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// Whether `j = l ± 1/2`.
    pub fn couples_with(self, l: u32) -> bool {
        self.0 == 2 * l + 1 || (l > 0 && self.0 == 2 * l - 1)
    }
}

impl std::fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// `⟨L·S⟩ = [j(j+1) − l(l+1) − 3/4] / 2` for a spin-1/2 projectile.
pub fn spin_orbit_expectation(l: u32, j: HalfInteger) -> Result<f64> {
    if !j.couples_with(l) {
        return Err(Error::InvalidChannel { l, j: j.value() });
    }
    let (lf, jf) = (l as f64, j.value());
    Ok((jf * (jf + 1.0) - lf * (lf + 1.0) - 0.75) / 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WoodsSaxonForm {
    /// `1 / (1 + exp((r − R)/a))`
    Volume,
    /// `−4a d/dr` of the volume form; equals 1 at `r = R`.
    SurfaceDerivative,
}

/// One Woods-Saxon term with a concrete (energy-resolved) depth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WoodsSaxonTerm {
    /// Signed strength in MeV (negative for attraction or absorption).
    pub depth: f64,
    /// Half-value radius in fm.
    pub radius: f64,
    /// Diffuseness in fm.
    pub diffuseness: f64,
    pub form: WoodsSaxonForm,
}

impl WoodsSaxonTerm {
    pub fn new(depth: f64, radius: f64, diffuseness: f64, form: WoodsSaxonForm) -> Result<Self> {
        if !(radius > 0.0) || !(diffuseness > 0.0) || !depth.is_finite() || !radius.is_finite() {
            return Err(Error::InvalidInput(format!(
                "Woods-Saxon term needs finite depth and positive radius/diffuseness, got \
                 depth = {depth}, R = {radius}, a = {diffuseness}"
            )));
        }
        Ok(WoodsSaxonTerm {
            depth,
            radius,
            diffuseness,
            form,
        })
    }

    pub fn volume(depth: f64, radius: f64, diffuseness: f64) -> Result<Self> {
        Self::new(depth, radius, diffuseness, WoodsSaxonForm::Volume)
    }

    pub fn surface(depth: f64, radius: f64, diffuseness: f64) -> Result<Self> {
        Self::new(depth, radius, diffuseness, WoodsSaxonForm::SurfaceDerivative)
    }

    fn argument(&self, r: f64) -> f64 {
        (r - self.radius) / self.diffuseness
    }

    /// Dimensionless radial shape (without the depth).
    pub fn shape(&self, r: f64) -> f64 {
        let x = self.argument(r);
        match self.form {
            WoodsSaxonForm::Volume => fermi(x),
            // 4 e^x / (1 + e^x)^2
            WoodsSaxonForm::SurfaceDerivative => (0.5 * x).cosh().powi(-2),
        }
    }

    pub fn value(&self, r: f64) -> f64 {
        self.depth * self.shape(r)
    }

    /// Thomas radial factor `(1/r) d/dr` of the volume shape.
    pub fn thomas_shape(&self, r: f64) -> f64 {
        let x = self.argument(r);
        let dfdr = -(0.5 * x).cosh().powi(-2) / (4.0 * self.diffuseness);
        dfdr / r
    }
}

fn fermi(x: f64) -> f64 {
    if x > 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// Spin-orbit term `depth · thomas_factor · (1/r) df/dr · ⟨L·S⟩`.
///
/// `df/dr < 0`, so a positive depth lowers the `j = l + 1/2` channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinOrbitTerm {
    pub term: WoodsSaxonTerm,
    /// Length² prefactor in fm² (the squared pion Compton wavelength is ≈ 2.0 fm²).
    pub thomas_factor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpticalModelSpec {
    pub real_volume: WoodsSaxonTerm,
    pub imag_volume: Option<WoodsSaxonTerm>,
    pub imag_surface: Option<WoodsSaxonTerm>,
    pub spin_orbit: Option<SpinOrbitTerm>,
    pub target_mass_number: u32,
}

impl OpticalModelSpec {
    pub fn real_only(real_volume: WoodsSaxonTerm, target_mass_number: u32) -> Self {
        OpticalModelSpec {
            real_volume,
            imag_volume: None,
            imag_surface: None,
            spin_orbit: None,
            target_mass_number,
        }
    }

    fn evaluate(&self, l: u32, j: HalfInteger, r: f64) -> Result<Complex> {
        let mut v = Complex::new(self.real_volume.value(r), 0.0);
        if let Some(t) = &self.imag_volume {
            v.im += t.value(r);
        }
        if let Some(t) = &self.imag_surface {
            v.im += t.value(r);
        }
        if let Some(so) = &self.spin_orbit {
            let ls = spin_orbit_expectation(l, j)?;
            v.re += so.term.depth * so.thomas_factor * so.term.thomas_shape(r) * ls;
        }
        Ok(v)
    }

    /// Radius beyond which every term is below `1e-12` of its depth.
    pub fn support_radius(&self) -> f64 {
        let terms = [
            Some(&self.real_volume),
            self.imag_volume.as_ref(),
            self.imag_surface.as_ref(),
            self.spin_orbit.as_ref().map(|s| &s.term),
        ];
        terms
            .into_iter()
            .flatten()
            .map(|t| t.radius + 28.0 * t.diffuseness)
            .fold(0.0, f64::max)
    }
}

/// Linearly interpolated complex potential samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabulatedPotential {
    r: Vec<f64>,
    v: Vec<Complex>,
}

impl TabulatedPotential {
    pub fn new(samples: Vec<(f64, Complex)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidInput(
                "tabulated potential needs at least two samples".into(),
            ));
        }
        if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::InvalidInput(
                "tabulated radii must be strictly increasing".into(),
            ));
        }
        let (r, v) = samples.into_iter().unzip();
        Ok(TabulatedPotential { r, v })
    }

    pub fn range(&self) -> (f64, f64) {
        (self.r[0], *self.r.last().unwrap())
    }

    pub fn nodes(&self) -> &[f64] {
        &self.r
    }

    pub fn interpolate(&self, r: f64) -> Result<Complex> {
        let (lo, hi) = self.range();
        if !(r >= lo && r <= hi) {
            return Err(Error::OutOfTableRange { r, lo, hi });
        }
        let i = match self.r.binary_search_by(|x| x.total_cmp(&r)) {
            Ok(i) => return Ok(self.v[i]),
            Err(i) => i,
        };
        let (r0, r1) = (self.r[i - 1], self.r[i]);
        let w = (r - r0) / (r1 - r0);
        Ok(self.v[i - 1] * (1.0 - w) + self.v[i] * w)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PotentialSpec {
    OpticalModel(OpticalModelSpec),
    /// Constant complex depth for `r <= radius`, zero outside.
    SquareWell { depth: Complex, radius: f64 },
    Tabulated(TabulatedPotential),
    Free,
}

impl PotentialSpec {
    pub fn square_well(depth: Complex, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidInput(format!(
                "square well radius must be positive, got {radius}"
            )));
        }
        Ok(PotentialSpec::SquareWell { depth, radius })
    }

    /// Radii where the potential or its derivative jumps. Integrators stop on these.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            PotentialSpec::SquareWell { radius, .. } => vec![*radius],
            PotentialSpec::Tabulated(t) => t.nodes().to_vec(),
            _ => Vec::new(),
        }
    }

    /// Whether any region has a negative imaginary part (absorption), probed on `[0, r_max]`.
    pub fn is_absorptive(&self, r_max: f64) -> bool {
        match self {
            PotentialSpec::Free => false,
            PotentialSpec::SquareWell { depth, .. } => depth.im < 0.0,
            PotentialSpec::Tabulated(t) => t.v.iter().any(|v| v.im < 0.0),
            PotentialSpec::OpticalModel(m) => (1..=2000).any(|i| {
                let r = r_max * i as f64 / 2000.0;
                m.evaluate(0, HalfInteger::plus(0), r)
                    .map(|v| v.im < 0.0)
                    .unwrap_or(false)
            }),
        }
    }

    pub fn is_real(&self) -> bool {
        match self {
            PotentialSpec::Free => true,
            PotentialSpec::SquareWell { depth, .. } => depth.im == 0.0,
            PotentialSpec::Tabulated(t) => t.v.iter().all(|v| v.im == 0.0),
            PotentialSpec::OpticalModel(m) => m.imag_volume.is_none() && m.imag_surface.is_none(),
        }
    }

    pub fn target_mass_number(&self) -> Option<u32> {
        match self {
            PotentialSpec::OpticalModel(m) => Some(m.target_mass_number),
            _ => None,
        }
    }
}

/// Full channel potential `V_lj(r)` in MeV.
pub fn evaluate_potential(spec: &PotentialSpec, l: u32, j: HalfInteger, r: f64) -> Result<Complex> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("potential radius must be positive, got {r}")));
    }
    if !j.couples_with(l) {
        return Err(Error::InvalidChannel { l, j: j.value() });
    }
    match spec {
        PotentialSpec::Free => Ok(Complex::new(0.0, 0.0)),
        PotentialSpec::SquareWell { depth, radius } => Ok(if r <= *radius {
            *depth
        } else {
            Complex::new(0.0, 0.0)
        }),
        PotentialSpec::Tabulated(t) => t.interpolate(r),
        PotentialSpec::OpticalModel(m) => m.evaluate(l, j, r),
    }
}

/// Centrifugal barrier `(ħc)² l(l+1) / (2 m r²)` in MeV.
pub fn centrifugal(l: u32, r: f64, mass: f64, hbar_c: f64) -> f64 {
    let lf = l as f64;
    hbar_c * hbar_c / (2.0 * mass) * lf * (lf + 1.0) / (r * r)
}

/// `V_lj(r)` plus the centrifugal term.
pub fn total_potential(
    spec: &PotentialSpec,
    l: u32,
    j: HalfInteger,
    r: f64,
    mass: f64,
    hbar_c: f64,
) -> Result<Complex> {
    Ok(evaluate_potential(spec, l, j, r)? + centrifugal(l, r, mass, hbar_c))
}
