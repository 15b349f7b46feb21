//! Run configuration: a TOML file of nested sections plus flat CLI
//! overrides. Unknown keys are rejected so a typo cannot silently fall
//! back to a default; the fully resolved configuration is echoed into the
//! output directory for reproducibility.

use crate::error::{CliError, CliResult};
use corioband_core::{
    derive_constants, reciprocal_vectors, DerivedConstants, PathLabel, PhasePattern,
    PhysicalParameters, ReciprocalSet,
};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PhysicalSection {
    pub wavelength: f64,
    pub refractive_index: f64,
    pub pitch: f64,
    pub fill_factor: f64,
    pub phase_contrast: f64,
    pub rotation_rate: f64,
}

impl Default for PhysicalSection {
    fn default() -> Self {
        let p = PhysicalParameters::default();
        Self {
            wavelength: p.wavelength,
            refractive_index: p.refractive_index,
            pitch: p.pitch,
            fill_factor: p.fill_factor,
            phase_contrast: p.phase_contrast,
            rotation_rate: p.rotation_rate,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PweSection {
    /// Square Fourier cutoff N: (2N+1)² plane waves.
    pub cutoff: i32,
    /// Number of bands to solve and report.
    pub bands: usize,
}

impl Default for PweSection {
    fn default() -> Self {
        Self {
            cutoff: 10,
            bands: 8,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PathSection {
    /// Vertex labels: G (Γ), X, T (= M of the standard convention).
    pub labels: Vec<String>,
    pub samples_per_segment: usize,
}

impl Default for PathSection {
    fn default() -> Self {
        Self {
            labels: vec!["G".into(), "X".into(), "T".into(), "G".into()],
            samples_per_segment: 40,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OmegaSweep {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl Default for OmegaSweep {
    fn default() -> Self {
        Self {
            start: 1.0,
            stop: 1e4,
            count: 9,
            spacing: Spacing::Log,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ContrastSweep {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    /// Lattice pitches to sweep side by side (m).
    pub pitches: Vec<f64>,
}

impl Default for ContrastSweep {
    fn default() -> Self {
        Self {
            start: 3e-5,
            stop: 1e-3,
            count: 7,
            pitches: vec![4e-6, 6e-6],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Svg,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub directory: PathBuf,
    pub formats: Vec<OutputFormat>,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            directory: PathBuf::from("out"),
            formats: vec![OutputFormat::Csv],
        }
    }
}

/// The fully resolved run configuration. An empty file (or no file) is the
/// reference configuration of the studied lattice.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub physical: PhysicalSection,
    pub pwe: PweSection,
    pub path: PathSection,
    pub omega_sweep: OmegaSweep,
    pub contrast_sweep: ContrastSweep,
    pub output: OutputSection,
    /// Seed for the randomized validation oracles.
    pub seed: u64,
}

/// Flat CLI overrides applied on top of the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub pwe_cutoff: Option<i32>,
    pub bands: Option<usize>,
    pub format: Option<String>,
    pub seed: Option<u64>,
    pub wavelength: Option<f64>,
    pub refractive_index: Option<f64>,
    pub pitch: Option<f64>,
    pub fill_factor: Option<f64>,
    pub delta_phi: Option<f64>,
    pub omega: Option<f64>,
}

impl RunConfig {
    /// Load from a TOML file (strict keys), then apply flat overrides and
    /// validate.
    pub fn load(path: Option<&Path>, overrides: &Overrides) -> CliResult<Self> {
        let mut config: RunConfig = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| {
                    CliError::Config(format!("cannot read config {}: {e}", p.display()))
                })?;
                toml::from_str(&text)
                    .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?
            }
            None => RunConfig::default(),
        };
        config.apply(overrides);
        config.validate()?;
        Ok(config)
    }

    fn apply(&mut self, o: &Overrides) {
        if let Some(v) = &o.out {
            self.output.directory = v.clone();
        }
        if let Some(v) = o.pwe_cutoff {
            self.pwe.cutoff = v;
        }
        if let Some(v) = o.bands {
            self.pwe.bands = v;
        }
        if let Some(v) = o.seed {
            self.seed = v;
        }
        if let Some(v) = o.wavelength {
            self.physical.wavelength = v;
        }
        if let Some(v) = o.refractive_index {
            self.physical.refractive_index = v;
        }
        if let Some(v) = o.pitch {
            self.physical.pitch = v;
        }
        if let Some(v) = o.fill_factor {
            self.physical.fill_factor = v;
        }
        if let Some(v) = o.delta_phi {
            self.physical.phase_contrast = v;
        }
        if let Some(v) = o.omega {
            self.physical.rotation_rate = v;
        }
        if let Some(v) = &o.format {
            self.output.formats = match v.as_str() {
                "csv" => vec![OutputFormat::Csv],
                "csv+svg" => vec![OutputFormat::Csv, OutputFormat::Svg],
                other => {
                    // reject later in validate by storing an empty list
                    log::error!("unknown format `{other}`");
                    Vec::new()
                }
            };
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        self.parameters()
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        if self.pwe.cutoff < 1 {
            return Err(CliError::Config("pwe.cutoff must be >= 1".into()));
        }
        if self.pwe.bands < 1 {
            return Err(CliError::Config("pwe.bands must be >= 1".into()));
        }
        if self.path.labels.len() < 2 {
            return Err(CliError::Config("path.labels needs at least 2 vertices".into()));
        }
        if self.path.samples_per_segment < 2 {
            return Err(CliError::Config(
                "path.samples_per_segment must be >= 2".into(),
            ));
        }
        for label in &self.path.labels {
            label
                .parse::<PathLabel>()
                .map_err(|e| CliError::Config(e.to_string()))?;
        }
        for (name, sweep_count) in [
            ("omega_sweep", self.omega_sweep.count),
            ("contrast_sweep", self.contrast_sweep.count),
        ] {
            if sweep_count == 0 {
                return Err(CliError::Config(format!("{name}.count must be >= 1")));
            }
        }
        if self.contrast_sweep.pitches.is_empty() {
            return Err(CliError::Config("contrast_sweep.pitches is empty".into()));
        }
        if self.output.formats.is_empty() {
            return Err(CliError::Config(
                "output.formats is empty (expected csv or csv+svg)".into(),
            ));
        }
        Ok(())
    }

    pub fn parameters(&self) -> PhysicalParameters {
        PhysicalParameters {
            wavelength: self.physical.wavelength,
            refractive_index: self.physical.refractive_index,
            pitch: self.physical.pitch,
            fill_factor: self.physical.fill_factor,
            phase_contrast: self.physical.phase_contrast,
            rotation_rate: self.physical.rotation_rate,
        }
    }

    pub fn derived(&self) -> CliResult<DerivedConstants> {
        derive_constants(&self.parameters()).map_err(CliError::Numerical)
    }

    pub fn pattern(&self) -> CliResult<PhasePattern> {
        PhasePattern::from_parameters(&self.parameters()).map_err(CliError::Numerical)
    }

    pub fn reciprocal(&self) -> CliResult<ReciprocalSet> {
        reciprocal_vectors(self.physical.pitch, self.pwe.cutoff).map_err(CliError::Numerical)
    }

    pub fn path_labels(&self) -> CliResult<Vec<PathLabel>> {
        self.path
            .labels
            .iter()
            .map(|l| l.parse::<PathLabel>().map_err(CliError::Numerical))
            .collect()
    }

    pub fn wants_svg(&self) -> bool {
        self.output.formats.contains(&OutputFormat::Svg)
    }

    /// The resolved configuration as TOML, written next to every result.
    pub fn echo_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Sample grid of a sweep section, endpoints included.
    pub fn omega_grid(&self) -> Vec<f64> {
        grid(
            self.omega_sweep.start,
            self.omega_sweep.stop,
            self.omega_sweep.count,
            self.omega_sweep.spacing,
        )
    }

    pub fn contrast_grid(&self) -> Vec<f64> {
        grid(
            self.contrast_sweep.start,
            self.contrast_sweep.stop,
            self.contrast_sweep.count,
            Spacing::Log,
        )
    }
}

fn grid(start: f64, stop: f64, count: usize, spacing: Spacing) -> Vec<f64> {
    if count == 1 {
        return vec![start];
    }
    let n = (count - 1) as f64;
    (0..count)
        .map(|i| {
            let t = i as f64 / n;
            match spacing {
                Spacing::Linear => start + t * (stop - start),
                Spacing::Log => start * (stop / start).powf(t),
            }
        })
        .collect()
}
