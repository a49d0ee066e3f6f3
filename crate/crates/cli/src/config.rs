//! Run configuration.
//!
//! A run is described by a sectioned TOML file. All quantities are SI.
//!
//! ```toml
//! [material]          # either E and nu, or a11, a12, a13, a33, a44 (Pa)
//! E = 1.0e6
//! nu = 0.45
//!
//! [coating]           # kind = "none" | "membrane" | "inextensible"
//! kind = "membrane"
//! hhat = 1.0e-5       # membrane thickness (m)
//! E = 5.0e8           # coating moduli: E and nu, the five moduli, or b11 and b12
//! nu = 0.3
//!
//! [layer]
//! h = 1.0e-3
//!
//! [grid]              # needed by `indent`
//! n1 = 128
//! n2 = 128
//! L1 = 0.04
//! L2 = 0.04
//!
//! [load]              # kind = "uniform" | "cosine" | "gaussian" | "hertz"
//! kind = "gaussian"
//! center = [0.02, 0.02]
//! width = 2.0e-3
//! amplitude = 1.0e3
//!
//! [model]             # branch = "compressible" | "compressible_two_term" | "incompressible"
//! branch = "incompressible"
//!
//! [output]
//! directory = "out"
//! format = "both"     # "csv" | "bin" | "both"
//!
//! [transfer]          # optional, used by `transfer`
//! k_min = 0.0
//! k_max = 2000.0
//! n_points = 101
//! plot = true
//!
//! [converge]          # optional, used by `converge`
//! eps = [0.2, 0.1, 0.05]
//! hold_stiffness_ratio = 1.0
//! ```
//!
//! Unknown keys are errors. A `[provenance]` table is accepted and ignored,
//! so a run manifest can be fed back as a configuration.

use std::path::{Path, PathBuf};

use coated_layer::model::Coating;
use coated_layer::{
    ElasticConstants, LayerSystem, MembraneConstants, ModelKind, PeriodicGrid, PressureLoad,
};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub material: MaterialSection,
    #[serde(default)]
    pub coating: CoatingSection,
    pub layer: LayerSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub load: Option<LoadSection>,
    #[serde(default)]
    pub model: ModelSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transfer: Option<TransferSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub converge: Option<ConvergeSection>,
    #[serde(default, skip_serializing)]
    pub provenance: Option<toml::Table>,
}

/// Elastic moduli, given either as isotropic `E`, `nu` or as the five
/// transversely isotropic constants.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Moduli {
    #[serde(rename = "E", skip_serializing_if = "Option::is_none")]
    pub e: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a11: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a12: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a13: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a33: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a44: Option<f64>,
}

pub type MaterialSection = Moduli;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoatingKind {
    #[default]
    None,
    Membrane,
    Inextensible,
}

/// Coating description. With `kind = "membrane"` the stiffness is given by
/// the reduced `b11`, `b12`, or by coating moduli in the same two forms as
/// `[material]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoatingSection {
    pub kind: CoatingKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hhat: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b11: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b12: Option<f64>,
    #[serde(rename = "E", skip_serializing_if = "Option::is_none")]
    pub e: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a11: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a12: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a13: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a33: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a44: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerSection {
    pub h: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub n1: usize,
    pub n2: usize,
    #[serde(rename = "L1")]
    pub l1: f64,
    #[serde(rename = "L2")]
    pub l2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum LoadSection {
    Uniform {
        amplitude: f64,
    },
    Cosine {
        m1: i64,
        m2: i64,
        amplitude: f64,
    },
    Gaussian {
        center: [f64; 2],
        width: f64,
        amplitude: f64,
    },
    Hertz {
        center: [f64; 2],
        radius: f64,
        peak: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    #[default]
    Compressible,
    CompressibleTwoTerm,
    Incompressible,
}

impl Branch {
    pub fn kind(self) -> ModelKind {
        match self {
            Branch::Compressible => ModelKind::Winkler,
            Branch::CompressibleTwoTerm => ModelKind::TwoTermCompressible,
            Branch::Incompressible => ModelKind::Incompressible,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub branch: Branch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Bin,
    #[default]
    Both,
}

impl Format {
    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }
    pub fn bin(self) -> bool {
        matches!(self, Format::Bin | Format::Both)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_directory")]
    pub directory: PathBuf,
    #[serde(default)]
    pub format: Format,
}

fn default_directory() -> PathBuf {
    PathBuf::from("out")
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            directory: default_directory(),
            format: Format::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransferSection {
    pub k_min: f64,
    pub k_max: f64,
    pub n_points: usize,
    #[serde(default)]
    pub plot: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergeSection {
    pub eps: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hold_stiffness_ratio: Option<f64>,
}

fn config_err(key: &str, reason: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{key}: {reason}"))
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string().trim_end().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration always serializes")
    }

    pub fn layer_constants(&self) -> Result<ElasticConstants, CliError> {
        self.material.resolve("material")
    }

    /// Builds and validates the physical system.
    pub fn system(&self) -> Result<LayerSystem, CliError> {
        let layer = self.layer_constants()?;
        let coating = self.coating.resolve()?;
        let h = self.layer.h;
        if !(h.is_finite() && h > 0.0) {
            return Err(config_err("layer.h", format!("must be positive, got {h}")));
        }
        LayerSystem::new(h, layer, coating).map_err(|e| config_err("material", e))
    }

    pub fn grid(&self) -> Result<PeriodicGrid, CliError> {
        let g = self
            .grid
            .ok_or_else(|| config_err("grid", "section is required"))?;
        PeriodicGrid::new(g.n1, g.n2, g.l1, g.l2).map_err(|e| config_err("grid", e))
    }

    pub fn pressure_load(&self) -> Result<PressureLoad, CliError> {
        let load = self
            .load
            .ok_or_else(|| config_err("load", "section is required"))?;
        Ok(match load {
            LoadSection::Uniform { amplitude } => PressureLoad::CosineMode {
                m1: 0,
                m2: 0,
                amplitude,
            },
            LoadSection::Cosine { m1, m2, amplitude } => {
                PressureLoad::CosineMode { m1, m2, amplitude }
            }
            LoadSection::Gaussian {
                center,
                width,
                amplitude,
            } => PressureLoad::Gaussian {
                center,
                width,
                amplitude,
            },
            LoadSection::Hertz {
                center,
                radius,
                peak,
            } => PressureLoad::Hertz {
                center,
                radius,
                peak,
            },
        })
    }
}

impl Moduli {
    fn isotropic(&self) -> bool {
        self.e.is_some() || self.nu.is_some()
    }
    fn anisotropic(&self) -> bool {
        [self.a11, self.a12, self.a13, self.a33, self.a44]
            .iter()
            .any(Option::is_some)
    }
    fn any(&self) -> bool {
        self.isotropic() || self.anisotropic()
    }

    fn resolve(&self, section: &str) -> Result<ElasticConstants, CliError> {
        let key = |k: &str| format!("{section}.{k}");
        let need = |v: Option<f64>, k: &str| v.ok_or_else(|| config_err(&key(k), "missing"));
        match (self.isotropic(), self.anisotropic()) {
            (true, true) => Err(config_err(
                section,
                "give either E and nu or the five moduli a11, a12, a13, a33, a44, not both",
            )),
            (false, false) => Err(config_err(
                section,
                "no moduli given; expected E and nu or a11, a12, a13, a33, a44",
            )),
            (true, false) => {
                let (e, nu) = (need(self.e, "E")?, need(self.nu, "nu")?);
                ElasticConstants::from_isotropic(e, nu).map_err(|err| config_err(section, err))
            }
            (false, true) => ElasticConstants::new(
                need(self.a11, "a11")?,
                need(self.a12, "a12")?,
                need(self.a13, "a13")?,
                need(self.a33, "a33")?,
                need(self.a44, "a44")?,
            )
            .map_err(|err| config_err(section, err)),
        }
    }
}

impl CoatingSection {
    fn moduli(&self) -> Moduli {
        Moduli {
            e: self.e,
            nu: self.nu,
            a11: self.a11,
            a12: self.a12,
            a13: self.a13,
            a33: self.a33,
            a44: self.a44,
        }
    }

    fn resolve(&self) -> Result<Coating, CliError> {
        let moduli = self.moduli();
        let reduced = self.b11.is_some() || self.b12.is_some();
        let extra = reduced || moduli.any() || self.hhat.is_some();
        match self.kind {
            CoatingKind::None | CoatingKind::Inextensible if extra => Err(config_err(
                "coating",
                "moduli and hhat are only accepted with kind = \"membrane\"",
            )),
            CoatingKind::None => Ok(Coating::None),
            CoatingKind::Inextensible => Ok(Coating::Inextensible),
            CoatingKind::Membrane => {
                let hhat = self
                    .hhat
                    .ok_or_else(|| config_err("coating.hhat", "missing"))?;
                let m = match (reduced, moduli.any()) {
                    (true, true) => {
                        return Err(config_err(
                            "coating",
                            "give either b11 and b12 or the coating moduli, not both",
                        ))
                    }
                    (false, false) => return Err(config_err(
                        "coating",
                        "no stiffness given; expected b11 and b12, E and nu, or the five moduli",
                    )),
                    (true, false) => {
                        let b11 = self
                            .b11
                            .ok_or_else(|| config_err("coating.b11", "missing"))?;
                        let b12 = self
                            .b12
                            .ok_or_else(|| config_err("coating.b12", "missing"))?;
                        MembraneConstants::from_reduced(b11, b12, hhat)
                    }
                    (false, true) => {
                        let c = moduli.resolve("coating")?;
                        MembraneConstants::reduce_plane_stress(&c, hhat)
                    }
                };
                m.map(Coating::Membrane)
                    .map_err(|e| config_err("coating", e))
            }
        }
    }
}
