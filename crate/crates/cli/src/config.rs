//! Run configuration: documented defaults, an optional JSON file, then
//! command-line overrides.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use vantage::measures::SymmetryParams;
use vantage::overlap::MIN_RESOLUTION;
use vantage::pipeline::DEFAULT_RESOLUTION;
use vantage::{CameraConfig, EvalSettings, MEASURE_COUNT, REGISTRY_VERSION};

use crate::error::{CliError, CliResult};

pub const DEFAULT_SAMPLE_COUNT: usize = 5000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub camera: CameraConfig,
    /// Fibonacci viewpoints per graph.
    pub sample_count: usize,
    pub raster_resolution: usize,
    pub symmetry: SymmetryParams,
    /// Active-set sizes fitted by `fit` and `analyze`.
    pub subset_sizes: Vec<usize>,
    /// L2 penalty of the logistic fit.
    pub l2: f64,
    /// Default output directory when a command has no `--out`.
    pub output_dir: Option<PathBuf>,
    /// Worker threads; `None` uses one per core.
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            camera: CameraConfig::default(),
            sample_count: DEFAULT_SAMPLE_COUNT,
            raster_resolution: DEFAULT_RESOLUTION,
            symmetry: SymmetryParams::default(),
            subset_sizes: vec![21, 5, 3],
            l2: vantage::fitting::DEFAULT_L2,
            output_dir: None,
            threads: None,
        }
    }
}

/// Values given on the command line; each one replaces the file value.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub sample_count: Option<usize>,
    pub raster_resolution: Option<usize>,
    pub subset_sizes: Option<Vec<usize>>,
    pub l2: Option<f64>,
    pub threads: Option<usize>,
}

/// The settings that change output bytes. Paths and thread counts are
/// excluded so that runs differing only in those share a hash.
#[derive(Serialize)]
struct Hashed<'a> {
    registry: &'static str,
    camera: &'a CameraConfig,
    sample_count: usize,
    raster_resolution: usize,
    symmetry: &'a SymmetryParams,
    subset_sizes: &'a [usize],
    l2: f64,
}

impl RunConfig {
    pub fn eval_settings(&self) -> EvalSettings {
        EvalSettings {
            camera: self.camera.clone(),
            raster_resolution: self.raster_resolution,
            symmetry: self.symmetry.clone(),
        }
    }

    fn hashed(&self) -> Hashed<'_> {
        Hashed {
            registry: REGISTRY_VERSION,
            camera: &self.camera,
            sample_count: self.sample_count,
            raster_resolution: self.raster_resolution,
            symmetry: &self.symmetry,
            subset_sizes: &self.subset_sizes,
            l2: self.l2,
        }
    }

    /// First 16 hex digits of the SHA-256 of the output-affecting settings
    /// in canonical JSON.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(&self.hashed()).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    /// The output-affecting settings with their hash, as written next to
    /// the artifacts.
    pub fn echo_json(&self) -> String {
        #[derive(Serialize)]
        struct Echo<'a> {
            config_hash: String,
            #[serde(flatten)]
            config: Hashed<'a>,
        }
        let mut text = serde_json::to_string_pretty(&Echo {
            config_hash: self.hash(),
            config: self.hashed(),
        })
        .expect("config serializes");
        text.push('\n');
        text
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.sample_count < 2 {
            return Err(CliError::Usage(format!("sample_count must be at least 2, got {}", self.sample_count)));
        }
        if self.raster_resolution < MIN_RESOLUTION {
            return Err(CliError::Usage(format!(
                "raster_resolution must be at least {MIN_RESOLUTION}, got {}",
                self.raster_resolution
            )));
        }
        if let Some(k) = self.subset_sizes.iter().find(|k| !(1..=MEASURE_COUNT).contains(*k)) {
            return Err(CliError::Usage(format!("subset sizes must lie in 1..={MEASURE_COUNT}, got {k}")));
        }
        if !(self.l2 >= 0.0 && self.l2.is_finite()) {
            return Err(CliError::Usage(format!("l2 must be a finite nonnegative number, got {}", self.l2)));
        }
        if self.threads == Some(0) {
            return Err(CliError::Usage("threads must be at least 1".into()));
        }
        self.camera.validate().map_err(|e| CliError::Usage(e.to_string()))
    }
}

/// Resolves defaults, the optional file and the overrides, then validates.
pub fn load_config(file: Option<&Path>, overrides: &Overrides) -> CliResult<RunConfig> {
    let mut config = match file {
        None => RunConfig::default(),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
    };
    if let Some(v) = overrides.sample_count {
        config.sample_count = v;
    }
    if let Some(v) = overrides.raster_resolution {
        config.raster_resolution = v;
    }
    if let Some(v) = &overrides.subset_sizes {
        config.subset_sizes = v.clone();
    }
    if let Some(v) = overrides.l2 {
        config.l2 = v;
    }
    if let Some(v) = overrides.threads {
        config.threads = Some(v);
    }
    config.validate()?;
    Ok(config)
}
