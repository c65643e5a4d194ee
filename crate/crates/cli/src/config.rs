use std::path::{Path, PathBuf};

use lhp4d_core::decoder::{BpConfig, BpVariant, Schedule};
use lhp4d_core::noise::ChannelSpec;
use lhp4d_core::montecarlo::SimOptions;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Experiment description read from a TOML file. Every field has a default,
/// so the smallest useful file only names the code.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub code: CodeSection,
    pub channel: ChannelSection,
    pub decoder: DecoderSection,
    pub run: RunSection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CodeSection {
    /// Preset name, seed file, or code file produced by `build`.
    pub preset: Option<String>,
    pub seeds: Option<PathBuf>,
    pub code_file: Option<PathBuf>,
    pub mapping: Option<String>,
    pub lift: Option<usize>,
}

impl Default for CodeSection {
    fn default() -> Self {
        Self {
            preset: Some("paper-L3".into()),
            seeds: None,
            code_file: None,
            mapping: None,
            lift: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelSection {
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    /// Bias ratios `p_Z / p_X`; each sets `β = (1, beta_y, η)`. Ignored when
    /// `beta` is given.
    pub eta: Vec<f64>,
    pub beta_y: f64,
    /// Explicit `[β_X, β_Y, β_Z]` triples.
    pub beta: Vec<[f64; 3]>,
}

impl Default for ChannelSection {
    fn default() -> Self {
        Self {
            p: vec![0.04],
            q: vec![0.0],
            eta: vec![1.0],
            beta_y: 0.0,
            beta: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecoderSection {
    pub max_iterations: usize,
    pub variant: String,
    pub min_sum_scale: f64,
    pub osd_order: usize,
    pub osd_cap: usize,
    pub schedule: String,
    pub channel_update: bool,
}

impl Default for DecoderSection {
    fn default() -> Self {
        let bp = BpConfig::default();
        Self {
            max_iterations: bp.max_iterations,
            variant: bp.variant.to_string(),
            min_sum_scale: bp.min_sum_scale,
            osd_order: bp.osd_order,
            osd_cap: bp.osd_cap,
            schedule: bp.schedule.to_string(),
            channel_update: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    pub trials: u64,
    pub master_seed: u64,
    pub tailored: Vec<bool>,
    pub single_shot: Vec<bool>,
    pub output: PathBuf,
    /// Write measured wall time; when false the column is 0 so that repeated
    /// runs produce identical files.
    pub record_timing: bool,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            trials: 1000,
            master_seed: 1,
            tailored: vec![false],
            single_shot: vec![true],
            output: PathBuf::from("results.csv"),
            record_timing: true,
        }
    }
}

/// One point of the experiment grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GridPoint {
    pub channel: ChannelSpec,
    pub opts: SimOptions,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
        let cfg: ExperimentConfig =
            toml::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let c = &self.channel;
        let bias_empty = c.beta.is_empty() && c.eta.is_empty();
        if c.p.is_empty() || c.q.is_empty() || bias_empty || self.run.tailored.is_empty() || self.run.single_shot.is_empty() {
            return Err(CliError::Validation("every grid (p, q, eta/beta, tailored, single_shot) must be non-empty".into()));
        }
        if self.run.trials == 0 {
            return Err(CliError::Validation("trials must be at least 1".into()));
        }
        let sources = [self.code.seeds.is_some(), self.code.code_file.is_some()];
        if sources.iter().filter(|&&s| s).count() > 1 {
            return Err(CliError::Validation("give at most one of code.seeds and code.code_file".into()));
        }
        self.bp_config()?;
        self.grid()?;
        Ok(())
    }

    pub fn bp_config(&self) -> Result<BpConfig, CliError> {
        let d = &self.decoder;
        let cfg = BpConfig {
            max_iterations: d.max_iterations,
            variant: d.variant.parse::<BpVariant>().map_err(|e| CliError::Validation(e.to_string()))?,
            min_sum_scale: d.min_sum_scale,
            osd_order: d.osd_order,
            osd_cap: d.osd_cap,
            schedule: d.schedule.parse::<Schedule>().map_err(|e| CliError::Validation(e.to_string()))?,
        };
        cfg.validate().map_err(|e| CliError::Validation(e.to_string()))?;
        Ok(cfg)
    }

    fn biases(&self) -> Vec<(f64, f64, f64)> {
        if self.channel.beta.is_empty() {
            self.channel.eta.iter().map(|&eta| (1.0, self.channel.beta_y, eta)).collect()
        } else {
            self.channel.beta.iter().map(|b| (b[0], b[1], b[2])).collect()
        }
    }

    /// Grid points in a fixed order: tailored, single_shot, bias, q, p.
    pub fn grid(&self) -> Result<Vec<GridPoint>, CliError> {
        let mut out = Vec::new();
        for &tailored in &self.run.tailored {
            for &single_shot in &self.run.single_shot {
                for &beta in &self.biases() {
                    for &q in &self.channel.q {
                        for &p in &self.channel.p {
                            let channel = ChannelSpec::new(p, beta, q).map_err(|e| CliError::Validation(e.to_string()))?;
                            out.push(GridPoint {
                                channel,
                                opts: SimOptions {
                                    single_shot,
                                    tailored,
                                    channel_update: self.decoder.channel_update,
                                    trials: self.run.trials,
                                    master_seed: self.run.master_seed,
                                },
                            });
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// The config with every default filled in, as TOML.
    pub fn resolved(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_uses_defaults() {
        let cfg: ExperimentConfig = toml::from_str("[code]\npreset = \"trivial-scalar\"\n").unwrap();
        assert_eq!(cfg.run.trials, 1000);
        assert_eq!(cfg.grid().unwrap().len(), 1);
    }

    #[test]
    fn grid_size_is_the_product() {
        let text = "[channel]\np = [0.01, 0.02]\nq = [0.0]\neta = [1, 10, 100, 1000]\n[run]\ntailored = [false, true]\n";
        let cfg: ExperimentConfig = toml::from_str(text).unwrap();
        let grid = cfg.grid().unwrap();
        assert_eq!(grid.len(), 16);
        assert_eq!(grid[0].channel.beta_z, 1.0);
        assert!(!grid[0].opts.tailored && grid[15].opts.tailored);
    }

    #[test]
    fn rejects_unknown_keys_and_empty_grids() {
        assert!(toml::from_str::<ExperimentConfig>("[run]\ntrails = 3\n").is_err());
        let cfg: ExperimentConfig = toml::from_str("[channel]\np = []\n").unwrap();
        assert!(cfg.validate().is_err());
        let cfg: ExperimentConfig = toml::from_str("[decoder]\nvariant = \"bogus\"\n").unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn resolved_round_trips() {
        let cfg = ExperimentConfig::default();
        let back: ExperimentConfig = toml::from_str(&cfg.resolved()).unwrap();
        assert_eq!(back, cfg);
    }
}
