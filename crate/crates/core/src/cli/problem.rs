//! Problem files: a fan, two measures and run options as strict JSON.

use serde::{Deserialize, Serialize};

use crate::certify::CounterexampleConfig;
use crate::geom::{fan_from_degrees, fan_from_directions, Fan, Vector2};
use crate::measures::{
    joint_support, DiskBlob, DiskBlobMeasure, GaussianMeasure, Measure, PolygonMeasure, DEFAULT_SUPPORT_SIGMAS,
};

use super::CliError;

pub const FORMAT_VERSION: u32 = 1;
pub const DEFAULT_TOL: f64 = 1e-8;
/// Default grid step as a fraction of the joint support radius.
pub const GRID_STEP_FRACTION: f64 = 1.0 / 2000.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub version: u32,
    pub fan: FanSpec,
    pub measures: Vec<MeasureSpec>,
    #[serde(default, skip_serializing_if = "Options::is_empty")]
    pub options: Options,
}

/// Fan rays as given in the file, either direction vectors or polar
/// angles in degrees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum FanSpec {
    Directions(Vec<[f64; 2]>),
    Degrees(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasure", into = "RawMeasure")]
pub enum MeasureSpec {
    DiskBlobs { blobs: Vec<BlobSpec> },
    Gaussian { mean: [f64; 2], sigma: f64 },
    Polygon { vertices: Vec<[f64; 2]> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum MeasureKind {
    DiskBlobs,
    Gaussian,
    Polygon,
}

/// Flat form of [`MeasureSpec`]. An internally tagged enum would buffer its
/// content and lose the field path of errors inside it.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMeasure {
    #[serde(rename = "type")]
    kind: MeasureKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    blobs: Option<Vec<BlobSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mean: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<[f64; 2]>>,
}

impl TryFrom<RawMeasure> for MeasureSpec {
    type Error = String;

    fn try_from(r: RawMeasure) -> Result<Self, String> {
        let extra = |fields: &[(&str, bool)]| -> Result<(), String> {
            match fields.iter().find(|f| f.1) {
                Some((name, _)) => Err(format!("field `{name}` does not apply to type {:?}", r.kind)),
                None => Ok(()),
            }
        };
        let missing = |name: &str| format!("missing field `{name}`");
        match r.kind {
            MeasureKind::DiskBlobs => {
                extra(&[("mean", r.mean.is_some()), ("sigma", r.sigma.is_some()), ("vertices", r.vertices.is_some())])?;
                Ok(MeasureSpec::DiskBlobs { blobs: r.blobs.ok_or_else(|| missing("blobs"))? })
            }
            MeasureKind::Gaussian => {
                extra(&[("blobs", r.blobs.is_some()), ("vertices", r.vertices.is_some())])?;
                Ok(MeasureSpec::Gaussian {
                    mean: r.mean.ok_or_else(|| missing("mean"))?,
                    sigma: r.sigma.ok_or_else(|| missing("sigma"))?,
                })
            }
            MeasureKind::Polygon => {
                extra(&[("blobs", r.blobs.is_some()), ("mean", r.mean.is_some()), ("sigma", r.sigma.is_some())])?;
                Ok(MeasureSpec::Polygon { vertices: r.vertices.ok_or_else(|| missing("vertices"))? })
            }
        }
    }
}

impl From<MeasureSpec> for RawMeasure {
    fn from(m: MeasureSpec) -> Self {
        let empty = |kind| RawMeasure { kind, blobs: None, mean: None, sigma: None, vertices: None };
        match m {
            MeasureSpec::DiskBlobs { blobs } => RawMeasure { blobs: Some(blobs), ..empty(MeasureKind::DiskBlobs) },
            MeasureSpec::Gaussian { mean, sigma } => {
                RawMeasure { mean: Some(mean), sigma: Some(sigma), ..empty(MeasureKind::Gaussian) }
            }
            MeasureSpec::Polygon { vertices } => RawMeasure { vertices: Some(vertices), ..empty(MeasureKind::Polygon) },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlobSpec {
    pub c: [f64; 2],
    pub r: f64,
    pub w: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_step: Option<f64>,
    /// Gaussian truncation radius in standard deviations.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation_sigmas: Option<f64>,
}

impl Options {
    fn is_empty(&self) -> bool {
        *self == Options::default()
    }
}

/// A validated problem ready for the library.
#[derive(Debug, Clone)]
pub struct Problem {
    pub fan: Fan,
    pub m1: Measure,
    pub m2: Measure,
    pub tol: f64,
    pub grid_step: f64,
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let file: ProblemFile = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::Input { path: if path == "." { "<root>".into() } else { path }, message: e.into_inner().to_string() }
        })?;
        if file.version != FORMAT_VERSION {
            return Err(CliError::input("version", format!("unsupported version {}, expected {FORMAT_VERSION}", file.version)));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem files always serialize")
    }

    pub fn from_config(cfg: &CounterexampleConfig) -> Self {
        let grid_step = cfg.params.scale * GRID_STEP_FRACTION;
        Self {
            version: FORMAT_VERSION,
            fan: FanSpec::Directions(cfg.fan.directions().iter().map(|&d| d.into()).collect()),
            measures: vec![MeasureSpec::from_measure(&cfg.m1), MeasureSpec::from_measure(&cfg.m2)],
            options: Options { tol: Some(DEFAULT_TOL), grid_step: Some(grid_step), truncation_sigmas: None },
        }
    }

    pub fn build(&self) -> Result<Problem, CliError> {
        let fan = self.fan.build()?;
        if self.measures.len() != 2 {
            return Err(CliError::input("measures", format!("expected 2 measures, got {}", self.measures.len())));
        }
        let sigmas = self.options.truncation_sigmas.unwrap_or(DEFAULT_SUPPORT_SIGMAS);
        let m1 = self.measures[0].build(sigmas).map_err(|m| CliError::input("measures[0]", m))?;
        let m2 = self.measures[1].build(sigmas).map_err(|m| CliError::input("measures[1]", m))?;
        let tol = self.options.tol.unwrap_or(DEFAULT_TOL);
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(CliError::input("options.tol", format!("must be positive, got {tol}")));
        }
        let grid_step = match self.options.grid_step {
            Some(g) if g > 0.0 && g.is_finite() => g,
            Some(g) => return Err(CliError::input("options.grid_step", format!("must be positive, got {g}"))),
            None => joint_support(&m1.support_bounds(), &m2.support_bounds()).radius * GRID_STEP_FRACTION,
        };
        Ok(Problem { fan, m1, m2, tol, grid_step })
    }
}

impl FanSpec {
    pub fn build(&self) -> Result<Fan, CliError> {
        match self {
            FanSpec::Directions(d) => {
                let dirs: Vec<Vector2> = d.iter().map(|&v| v.into()).collect();
                fan_from_directions(&dirs).map_err(|e| CliError::input("fan.directions", e.to_string()))
            }
            FanSpec::Degrees(d) => fan_from_degrees(d).map_err(|e| CliError::input("fan.degrees", e.to_string())),
        }
    }
}

impl MeasureSpec {
    fn build(&self, truncation_sigmas: f64) -> Result<Measure, String> {
        let m: Measure = match self {
            MeasureSpec::DiskBlobs { blobs } => DiskBlobMeasure::new(
                blobs.iter().map(|b| DiskBlob::new(b.c.into(), b.r, b.w)).collect(),
            )
            .map_err(|e| e.to_string())?
            .into(),
            MeasureSpec::Gaussian { mean, sigma } => {
                GaussianMeasure::with_support_sigmas((*mean).into(), *sigma, truncation_sigmas)
                    .map_err(|e| e.to_string())?
                    .into()
            }
            MeasureSpec::Polygon { vertices } => {
                PolygonMeasure::new(vertices.iter().map(|&v| v.into()).collect()).map_err(|e| e.to_string())?.into()
            }
        };
        Ok(m)
    }

    pub fn from_measure(m: &Measure) -> Self {
        match m {
            Measure::DiskBlobs(d) => MeasureSpec::DiskBlobs {
                blobs: d.blobs().iter().map(|b| BlobSpec { c: b.center.into(), r: b.radius, w: b.weight }).collect(),
            },
            Measure::Gaussian(g) => MeasureSpec::Gaussian { mean: g.mean.into(), sigma: g.sigma },
            Measure::Polygon(p) => MeasureSpec::Polygon { vertices: p.vertices().iter().map(|&v| v.into()).collect() },
        }
    }
}
