//! Input file format.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use torricelli_core::{Configuration, SphereConfiguration, SpherePoint};

use crate::CliError;

pub const FORMAT_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub version: String,
    pub dimension: Dimension,
    pub points: Vec<PointEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub options: Option<FileOptions>,
}

/// `2`, `3`, or `"sphere"`; anything else is rejected during validation so
/// the diagnostic can say what was expected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Dimension {
    Number(u64),
    Name(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointEntry {
    pub coords: Coords,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coords {
    Cartesian(Vec<f64>),
    LatLon { lat_deg: f64, lon_deg: f64 },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual_tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<usize>,
}

#[derive(Clone, Debug)]
pub enum Problem {
    Euclidean(Configuration),
    Sphere(SphereConfiguration),
}

/// A parsed and validated input together with the digest of its raw bytes.
#[derive(Clone, Debug)]
pub struct LoadedConfig {
    pub file: ConfigFile,
    pub digest: String,
    pub problem: Problem,
}

pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{:x}", Sha256::digest(bytes))
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let field = e.path().to_string();
            CliError::Input {
                field: if field == "." { "input".into() } else { field },
                message: e.into_inner().to_string(),
            }
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Checks every field and builds the geometric configuration.
    pub fn build(&self) -> Result<Problem, CliError> {
        if self.version != FORMAT_VERSION {
            return Err(invalid(
                "version",
                format!("unsupported version {:?}, expected \"1\"", self.version),
            ));
        }
        let sphere = match &self.dimension {
            Dimension::Number(2 | 3) => false,
            Dimension::Name(s) if s == "sphere" => true,
            other => {
                return Err(invalid(
                    "dimension",
                    format!("expected 2, 3 or \"sphere\", got {}", show_dimension(other)),
                ))
            }
        };
        if self.points.is_empty() {
            return Err(invalid("points", "at least one point is required"));
        }
        for (i, p) in self.points.iter().enumerate() {
            if !(p.weight >= 0.0) || !p.weight.is_finite() {
                return Err(invalid(
                    format!("points[{i}].weight"),
                    format!("must be a finite nonnegative number, got {}", p.weight),
                ));
            }
        }
        if !self.points.iter().any(|p| p.weight > 0.0) {
            return Err(invalid("points", "at least one weight must be positive"));
        }
        if let Some(o) = &self.options {
            if let Some(t) = o.residual_tolerance {
                if !(t > 0.0 && t.is_finite()) {
                    return Err(invalid(
                        "options.residual_tolerance",
                        format!("must be positive, got {t}"),
                    ));
                }
            }
            if o.max_iterations == Some(0) {
                return Err(invalid("options.max_iterations", "must be at least 1"));
            }
        }
        if sphere {
            self.build_sphere().map(Problem::Sphere)
        } else {
            self.build_euclidean().map(Problem::Euclidean)
        }
    }

    fn build_euclidean(&self) -> Result<Configuration, CliError> {
        let Dimension::Number(d) = self.dimension else {
            unreachable!("checked by build")
        };
        let mut coords = Vec::with_capacity(self.points.len());
        for (i, p) in self.points.iter().enumerate() {
            match &p.coords {
                Coords::Cartesian(c) if c.len() as u64 == d => coords.push(c.clone()),
                Coords::Cartesian(c) => {
                    return Err(invalid(
                        format!("points[{i}].coords"),
                        format!("expected {d} coordinates, got {}", c.len()),
                    ))
                }
                Coords::LatLon { .. } => {
                    return Err(invalid(
                        format!("points[{i}].coords"),
                        "latitude/longitude is only accepted when dimension is \"sphere\"",
                    ))
                }
            }
        }
        let weights: Vec<f64> = self.points.iter().map(|p| p.weight).collect();
        Configuration::from_coords(&coords, &weights).map_err(|e| invalid("points", e.to_string()))
    }

    fn build_sphere(&self) -> Result<SphereConfiguration, CliError> {
        let mut points = Vec::with_capacity(self.points.len());
        for (i, p) in self.points.iter().enumerate() {
            let field = format!("points[{i}].coords");
            let point = match &p.coords {
                Coords::Cartesian(c) => {
                    let v: [f64; 3] = c.as_slice().try_into().map_err(|_| {
                        invalid(&field, format!("expected 3 coordinates, got {}", c.len()))
                    })?;
                    SpherePoint::from_vector(v).map_err(|e| invalid(&field, e.to_string()))?
                }
                Coords::LatLon { lat_deg, lon_deg } => {
                    if !(lat_deg.abs() <= 90.0) {
                        return Err(invalid(
                            format!("{field}.lat_deg"),
                            format!("must lie in [-90, 90], got {lat_deg}"),
                        ));
                    }
                    SpherePoint::from_lat_lon_deg(*lat_deg, *lon_deg)
                        .map_err(|e| invalid(&field, e.to_string()))?
                }
            };
            points.push((point, p.weight));
        }
        let config =
            SphereConfiguration::new(points).map_err(|e| invalid("points", e.to_string()))?;
        if !config.in_hemisphere() {
            return Err(invalid(
                "points",
                "active anchors must lie in an open hemisphere",
            ));
        }
        Ok(config)
    }
}

impl LoadedConfig {
    pub fn from_bytes(bytes: &[u8]) -> Result<Self, CliError> {
        let text = std::str::from_utf8(bytes).map_err(|e| CliError::Input {
            field: "input".into(),
            message: format!("not valid UTF-8: {e}"),
        })?;
        let file = ConfigFile::parse(text)?;
        let problem = file.build()?;
        Ok(LoadedConfig {
            file,
            digest: digest(bytes),
            problem,
        })
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self, CliError> {
        let bytes = std::fs::read(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_bytes(&bytes)
    }
}

fn show_dimension(d: &Dimension) -> String {
    match d {
        Dimension::Number(n) => n.to_string(),
        Dimension::Name(s) => format!("{s:?}"),
    }
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::Input {
        field: field.into(),
        message: message.into(),
    }
}
