//! TOML potential documents and whitespace-column data files.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{
    OpticalModelSpec, PotentialSpec, SpinOrbitTerm, TabulatedPotential, WoodsSaxonForm,
    WoodsSaxonTerm,
};
use crate::constants::Constants;
use crate::error::{Error, Result};
use crate::numerics::Complex;

/// Depth in MeV, optionally affine in the lab energy: `constant + per_mev · E`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DepthRule {
    Fixed(f64),
    Affine {
        constant: f64,
        #[serde(default)]
        per_mev: f64,
    },
}

impl DepthRule {
    pub fn at(self, energy: f64) -> f64 {
        match self {
            DepthRule::Fixed(d) => d,
            DepthRule::Affine { constant, per_mev } => constant + per_mev * energy,
        }
    }
}

/// Absolute radius in fm, or the rule `r0 · A^{1/3} + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RadiusRule {
    Absolute(f64),
    Scaled {
        r0: f64,
        #[serde(default)]
        offset: f64,
    },
}

impl RadiusRule {
    pub fn resolve(self, mass_number: u32) -> f64 {
        match self {
            RadiusRule::Absolute(r) => r,
            RadiusRule::Scaled { r0, offset } => r0 * (mass_number as f64).cbrt() + offset,
        }
    }
}

fn default_form() -> WoodsSaxonForm {
    WoodsSaxonForm::Volume
}

fn default_thomas() -> f64 {
    2.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermConfig {
    pub depth: DepthRule,
    pub radius: RadiusRule,
    pub diffuseness: f64,
    #[serde(default = "default_form")]
    pub form: WoodsSaxonForm,
    /// Only read for the spin-orbit term (fm²).
    #[serde(default = "default_thomas")]
    pub thomas_factor: f64,
}

impl TermConfig {
    fn resolve(&self, energy: f64, a: u32, name: &str) -> Result<WoodsSaxonTerm> {
        WoodsSaxonTerm::new(self.depth.at(energy), self.radius.resolve(a), self.diffuseness, self.form)
            .map_err(|e| Error::Config(format!("{name}: {e}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexValue {
    Real(f64),
    Parts {
        re: f64,
        #[serde(default)]
        im: f64,
    },
}

impl From<ComplexValue> for Complex {
    fn from(v: ComplexValue) -> Self {
        match v {
            ComplexValue::Real(x) => Complex::new(x, 0.0),
            ComplexValue::Parts { re, im } => Complex::new(re, im),
        }
    }
}

/// One potential document. `kind` selects the variant.
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialConfig {
    OpticalModel {
        target_mass_number: u32,
        real_volume: TermConfig,
        imag_volume: Option<TermConfig>,
        imag_surface: Option<TermConfig>,
        spin_orbit: Option<TermConfig>,
        constants: Option<Constants>,
    },
    SquareWell {
        depth: ComplexValue,
        radius: f64,
        constants: Option<Constants>,
    },
    Tabulated {
        /// Path to a `r ReV [ImV]` file, relative to the config document.
        file: Option<PathBuf>,
        /// Inline `[r, ReV, ImV]` rows.
        samples: Option<Vec<[f64; 3]>>,
        constants: Option<Constants>,
    },
    Free {
        constants: Option<Constants>,
    },
}

impl PotentialConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Reads a document; a relative tabulated `file` is resolved against the document's directory.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let mut cfg: Self = toml::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {}", path.display(), e.to_string().trim_end())))?;
        if let PotentialConfig::Tabulated { file: Some(f), .. } = &mut cfg {
            if f.is_relative() {
                if let Some(dir) = path.parent() {
                    *f = dir.join(&*f);
                }
            }
        }
        Ok(cfg)
    }

    pub fn constants(&self) -> Constants {
        match self {
            PotentialConfig::OpticalModel { constants, .. }
            | PotentialConfig::SquareWell { constants, .. }
            | PotentialConfig::Tabulated { constants, .. }
            | PotentialConfig::Free { constants } => constants.unwrap_or_default(),
        }
    }

    /// Concrete potential at lab energy `energy` (MeV).
    pub fn resolve(&self, energy: f64) -> Result<PotentialSpec> {
        match self {
            PotentialConfig::Free { .. } => Ok(PotentialSpec::Free),
            PotentialConfig::SquareWell { depth, radius, .. } => {
                PotentialSpec::square_well((*depth).into(), *radius)
                    .map_err(|e| Error::Config(e.to_string()))
            }
            PotentialConfig::Tabulated { file, samples, .. } => {
                let rows = match (file, samples) {
                    (Some(path), None) => {
                        let text = std::fs::read_to_string(path)
                            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                        parse_tabulated(&text)?
                    }
                    (None, Some(rows)) => rows
                        .iter()
                        .map(|r| (r[0], Complex::new(r[1], r[2])))
                        .collect(),
                    _ => {
                        return Err(Error::Config(
                            "tabulated potential needs exactly one of `file` or `samples`".into(),
                        ))
                    }
                };
                TabulatedPotential::new(rows)
                    .map(PotentialSpec::Tabulated)
                    .map_err(|e| Error::Config(e.to_string()))
            }
            PotentialConfig::OpticalModel {
                target_mass_number,
                real_volume,
                imag_volume,
                imag_surface,
                spin_orbit,
                ..
            } => {
                let a = *target_mass_number;
                if a == 0 {
                    return Err(Error::Config("target_mass_number must be positive".into()));
                }
                let spin_orbit = match spin_orbit {
                    Some(t) => Some(SpinOrbitTerm {
                        term: t.resolve(energy, a, "spin_orbit")?,
                        thomas_factor: t.thomas_factor,
                    }),
                    None => None,
                };
                Ok(PotentialSpec::OpticalModel(OpticalModelSpec {
                    real_volume: real_volume.resolve(energy, a, "real_volume")?,
                    imag_volume: imag_volume
                        .as_ref()
                        .map(|t| t.resolve(energy, a, "imag_volume"))
                        .transpose()?,
                    imag_surface: imag_surface
                        .as_ref()
                        .map(|t| t.resolve(energy, a, "imag_surface"))
                        .transpose()?,
                    spin_orbit,
                    target_mass_number: a,
                }))
            }
        }
    }
}

/// Parses whitespace-separated numeric rows, skipping blank lines and `#` comments.
/// Every row must have between `min_cols` and `max_cols` columns.
pub fn parse_columns(text: &str, min_cols: usize, max_cols: usize) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|e| Error::Config(format!("line {}: `{s}`: {e}", lineno + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        if row.len() < min_cols || row.len() > max_cols {
            return Err(Error::Config(format!(
                "line {}: expected {min_cols}..={max_cols} columns, found {}",
                lineno + 1,
                row.len()
            )));
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Two- or three-column `r [fm]  Re V [MeV]  Im V [MeV]` text.
pub fn parse_tabulated(text: &str) -> Result<Vec<(f64, Complex)>> {
    Ok(parse_columns(text, 2, 3)?
        .into_iter()
        .map(|row| (row[0], Complex::new(row[1], row.get(2).copied().unwrap_or(0.0))))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{evaluate_potential, HalfInteger};

    const OPTICAL: &str = r#"
kind = "optical_model"
target_mass_number = 208

[real_volume]
depth = { constant = -48.0, per_mev = 0.3 }
radius = { r0 = 1.2 }
diffuseness = 0.69

[imag_surface]
depth = -7.0
radius = { r0 = 1.3, offset = -0.4 }
diffuseness = 0.69
form = "surface_derivative"

[spin_orbit]
depth = 5.9
radius = 7.0
diffuseness = 0.63
thomas_factor = 2.0

[constants]
hbar_c = 197.0
"#;

    #[test]
    fn optical_document_resolves_at_energy() {
        let cfg = PotentialConfig::from_toml_str(OPTICAL).unwrap();
        assert_eq!(cfg.constants().hbar_c, 197.0);
        assert_eq!(cfg.constants().projectile_mass, crate::constants::NEUTRON_MASS);
        let spec = cfg.resolve(10.0).unwrap();
        let PotentialSpec::OpticalModel(m) = &spec else { panic!() };
        assert!((m.real_volume.depth + 45.0).abs() < 1e-12);
        assert!((m.real_volume.radius - 1.2 * 208f64.cbrt()).abs() < 1e-12);
        let surf = m.imag_surface.unwrap();
        assert!((surf.radius - (1.3 * 208f64.cbrt() - 0.4)).abs() < 1e-12);
        assert_eq!(surf.form, WoodsSaxonForm::SurfaceDerivative);
        let v = evaluate_potential(&spec, 0, HalfInteger::plus(0), surf.radius).unwrap();
        assert!(v.im < -6.9);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let bad = OPTICAL.replace("diffuseness = 0.63", "diffuseness = 0.63\nwidth = 2.0");
        assert!(PotentialConfig::from_toml_str(&bad).is_err());
        let bad = "kind = \"free\"\nenergy = 3.0\n";
        assert!(PotentialConfig::from_toml_str(bad).is_err());
        let bad = "kind = \"free\"\n[constants]\nhbarc = 1.0\n";
        assert!(PotentialConfig::from_toml_str(bad).is_err());
    }

    #[test]
    fn square_well_and_inline_table() {
        let cfg = PotentialConfig::from_toml_str(
            "kind = \"square_well\"\nradius = 3.0\ndepth = { re = -40.0, im = -2.0 }\n",
        )
        .unwrap();
        assert_eq!(
            cfg.resolve(5.0).unwrap(),
            PotentialSpec::SquareWell { depth: Complex::new(-40.0, -2.0), radius: 3.0 }
        );
        let cfg = PotentialConfig::from_toml_str(
            "kind = \"tabulated\"\nsamples = [[0.0, -5.0, 0.0], [30.0, 0.0, 0.0]]\n",
        )
        .unwrap();
        assert!(matches!(cfg.resolve(1.0).unwrap(), PotentialSpec::Tabulated(_)));
        let cfg = PotentialConfig::from_toml_str("kind = \"tabulated\"\n").unwrap();
        assert!(cfg.resolve(1.0).is_err());
    }

    #[test]
    fn column_parsing() {
        let rows = parse_tabulated("# r ReV ImV\n0.5 -40 -1\n\n1.0 -39.5  # two columns ok\n").unwrap();
        assert_eq!(rows, vec![(0.5, Complex::new(-40.0, -1.0)), (1.0, Complex::new(-39.5, 0.0))]);
        assert!(parse_tabulated("1.0\n").is_err());
        assert!(parse_tabulated("1.0 2.0 x\n").is_err());
    }
}
