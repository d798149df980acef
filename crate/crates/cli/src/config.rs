use std::path::{Path, PathBuf};

use cosserat_plate::dynamics::{EdgeConditions, LoadFields, LoadPreset, ModelConfig};
use cosserat_plate::{MaterialParams, MicroInertia, ShearCorrection};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Geometry {
    pub a: f64,
    pub b: f64,
    pub h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { nx: 33, ny: 33 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TimeSpec {
    pub t_final: f64,
    /// Overrides the stable step when set.
    pub dt: Option<f64>,
    /// Snapshot every `cadence` steps.
    pub cadence: usize,
}

impl Default for TimeSpec {
    fn default() -> Self {
        Self { t_final: 1.0, dt: None, cadence: 100 }
    }
}

/// Initial transverse deflection and velocity, as load-style presets evaluated at t = 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct InitialSpec {
    pub w: LoadPreset,
    pub w_velocity: LoadPreset,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct Options {
    pub shear: ShearCorrection,
    pub micro_inertia: MicroInertia,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DispersionSpec {
    /// Largest |ξ|; defaults to 20/h.
    pub k_max: Option<f64>,
    pub samples: usize,
    /// Unit directions; defaults to the two axes and the diagonal.
    pub directions: Option<Vec<[f64; 2]>>,
    pub modes: bool,
}

impl Default for DispersionSpec {
    fn default() -> Self {
        Self { k_max: None, samples: 64, directions: None, modes: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSpec {
    pub coupling: Vec<f64>,
    pub l_t: Vec<f64>,
    pub l_b: Vec<f64>,
    pub polar_ratio: Vec<f64>,
    /// Wavenumber at which branch frequencies are reported next to the cutoffs; defaults to 1/h.
    pub k_ref: Option<f64>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            coupling: vec![0.1, 0.5, 0.9],
            l_t: vec![0.01, 0.02],
            l_b: vec![0.01, 0.05],
            polar_ratio: vec![1.0, 1.25],
            k_ref: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub material: Option<MaterialParams>,
    /// JSON file holding the material, relative to the config file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub material_file: Option<PathBuf>,
    pub geometry: Geometry,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub time: TimeSpec,
    #[serde(default)]
    pub loads: LoadFields,
    #[serde(default)]
    pub bc: EdgeConditions,
    #[serde(default)]
    pub initial: InitialSpec,
    #[serde(default)]
    pub options: Options,
    #[serde(default)]
    pub dispersion: DispersionSpec,
    #[serde(default)]
    pub sweep: SweepSpec,
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

impl RunConfig {
    /// Parse and inline the material file, so the result is self-contained.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let mut cfg: RunConfig = parse_json(path)?;
        match (&cfg.material, cfg.material_file.take()) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config(format!(
                    "{}: give either `material` or `material_file`, not both",
                    path.display()
                )))
            }
            (None, None) => {
                return Err(CliError::Config(format!(
                    "{}: missing `material` (or `material_file`)",
                    path.display()
                )))
            }
            (None, Some(file)) => {
                let base = path.parent().unwrap_or(Path::new("."));
                cfg.material = Some(parse_json(&base.join(file))?);
            }
            (Some(_), None) => {}
        }
        Ok(cfg)
    }

    pub fn material(&self) -> MaterialParams {
        self.material.expect("inlined by load")
    }

    pub fn model(&self) -> ModelConfig {
        ModelConfig {
            material: self.material(),
            h: self.geometry.h,
            a: self.geometry.a,
            b: self.geometry.b,
            nx: self.grid.nx,
            ny: self.grid.ny,
            shear: self.options.shear,
            micro_inertia: self.options.micro_inertia,
            bc: self.bc,
            loads: self.loads,
        }
    }

    /// sha256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        digest(&serde_json::to_string(self).expect("config serializes"))
    }
}

pub fn digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}
