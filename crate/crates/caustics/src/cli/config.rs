//! TOML configuration for the command-line tool.
//!
//! A single file can describe everything several subcommands need; each
//! subcommand reads the sections relevant to it and ignores the rest, so
//! one configuration can drive a portrait, a graph search, and a
//! certification of the same system.  Unknown keys inside a section are
//! rejected.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::geometry::{Domain, DomainSpec};
use crate::models::{BirkhoffBilliard, OuterBilliard, ShearMap, SymplecticBilliard};
use crate::scan::{Family, FamilyKind, FamilySpec, ModelKind};
use crate::solver::GraphOptions;
use crate::tol;
use crate::twist::{RotationData, TwistMap};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub domain: Option<DomainSpec>,
    pub model: Option<ModelSection>,
    pub rotation: Option<RotationData>,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub portrait: PortraitSection,
    #[serde(default)]
    pub twist: TwistSection,
    #[serde(default)]
    pub certify: CertifySection,
    pub family: Option<FamilySection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub kind: ModelKind,
    /// Shear offset (shear model only).
    pub offset: Option<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    pub grid: usize,
    pub accept_tol: f64,
    pub resolution: usize,
}

impl Default for SolverSection {
    fn default() -> Self {
        SolverSection { grid: 256, accept_tol: tol::ACCEPT_TOL, resolution: tol::FIBER_SCAN }
    }
}

impl SolverSection {
    pub fn graph_options(&self) -> GraphOptions {
        GraphOptions {
            grid: self.grid,
            accept_tol: self.accept_tol,
            resolution: self.resolution,
            seed: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PortraitSection {
    /// Number of initial conditions.
    pub orbits: usize,
    /// Iterates per initial condition.
    pub steps: usize,
}

impl Default for PortraitSection {
    fn default() -> Self {
        PortraitSection { orbits: 24, steps: 512 }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TwistSection {
    /// Smallest fiber margin of the extrapolation schedule.
    pub margin: f64,
}

impl Default for TwistSection {
    fn default() -> Self {
        TwistSection { margin: tol::SCAN_TI_MARGIN }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CertifySection {
    pub invariance_tol: f64,
    pub conjugate_tol: f64,
    pub consistency_tol: f64,
    pub minimality_grid: usize,
}

impl Default for CertifySection {
    fn default() -> Self {
        CertifySection {
            invariance_tol: tol::RESIDUAL_TOL,
            conjugate_tol: tol::CONJUGATE_TOL,
            consistency_tol: tol::CONSISTENCY_TOL,
            minimality_grid: tol::MINIMALITY_GRID,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKindName {
    EllipseEccentricity,
    FourierPerturbation,
    ShearOffset,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySection {
    pub kind: FamilyKindName,
    /// Base-ellipse eccentricity (fourier-perturbation only).
    pub base_eccentricity: Option<f64>,
    /// Perturbing harmonic (fourier-perturbation only).
    pub harmonic: Option<u32>,
    pub model: ModelKind,
    pub m: i64,
    pub n: u32,
    pub eps_lo: f64,
    pub eps_hi: f64,
    pub samples: usize,
}

impl Config {
    /// Parse a configuration file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|err| {
            Error::Config(format!("cannot read {}: {err}", path.display()))
        })?;
        toml::from_str(&text)
            .map_err(|err| Error::Config(format!("{}: {err}", path.display())))
    }

    fn model_section(&self) -> Result<&ModelSection> {
        self.model
            .as_ref()
            .ok_or_else(|| Error::Config("this command needs a [model] section".into()))
    }

    fn domain_spec(&self) -> Result<&DomainSpec> {
        self.domain
            .as_ref()
            .ok_or_else(|| Error::Config("this model needs a [domain] section".into()))
    }

    /// Build the configured domain, if any.
    pub fn domain(&self) -> Result<Option<Domain>> {
        match (self.model_section()?.kind, &self.domain) {
            (ModelKind::Shear, Some(_)) => {
                Err(Error::Config("the shear map takes no [domain] section".into()))
            }
            (ModelKind::Shear, None) => Ok(None),
            (_, _) => Ok(Some(self.domain_spec()?.build()?)),
        }
    }

    /// Build the configured twist map.
    pub fn twist_map(&self) -> Result<Box<dyn TwistMap>> {
        let section = self.model_section()?;
        match section.kind {
            ModelKind::Shear => {
                if self.domain.is_some() {
                    return Err(Error::Config(
                        "the shear map takes no [domain] section".into(),
                    ));
                }
                let offset = section.offset.ok_or_else(|| {
                    Error::Config("the shear model needs an offset".into())
                })?;
                Ok(Box::new(ShearMap::new(offset)))
            }
            kind => {
                if section.offset.is_some() {
                    return Err(Error::Config(
                        "only the shear model takes an offset".into(),
                    ));
                }
                let domain = self.domain_spec()?.build()?;
                Ok(match kind {
                    ModelKind::Birkhoff => Box::new(BirkhoffBilliard::new(domain)),
                    ModelKind::Outer => Box::new(OuterBilliard::new(domain)),
                    ModelKind::Symplectic => Box::new(SymplecticBilliard::new(domain)),
                    ModelKind::Shear => unreachable!("handled above"),
                })
            }
        }
    }

    pub fn rotation(&self) -> Result<RotationData> {
        self.rotation
            .ok_or_else(|| Error::Config("this command needs a [rotation] section".into()))
    }

    /// Build the configured family.
    pub fn family(&self) -> Result<Family> {
        let section = self
            .family
            .as_ref()
            .ok_or_else(|| Error::Config("this command needs a [family] section".into()))?;
        let kind = match section.kind {
            FamilyKindName::EllipseEccentricity => {
                reject_perturbation_keys(section)?;
                FamilyKind::EllipseEccentricity
            }
            FamilyKindName::ShearOffset => {
                reject_perturbation_keys(section)?;
                FamilyKind::ShearOffset
            }
            FamilyKindName::FourierPerturbation => FamilyKind::FourierPerturbation {
                base_eccentricity: section.base_eccentricity.ok_or_else(|| {
                    Error::Config(
                        "the fourier-perturbation family needs a base_eccentricity".into(),
                    )
                })?,
                harmonic: section.harmonic.ok_or_else(|| {
                    Error::Config("the fourier-perturbation family needs a harmonic".into())
                })?,
            },
        };
        Family::new(FamilySpec {
            family: kind,
            model: section.model,
            rotation: RotationData::new(section.m, section.n)?,
            eps_lo: section.eps_lo,
            eps_hi: section.eps_hi,
            samples: section.samples,
        })
    }
}

fn reject_perturbation_keys(section: &FamilySection) -> Result<()> {
    if section.base_eccentricity.is_some() || section.harmonic.is_some() {
        return Err(Error::Config(
            "base_eccentricity and harmonic apply only to the fourier-perturbation family"
                .into(),
        ));
    }
    Ok(())
}
