//! Pipeline configuration: a TOML file over built-in defaults.
//!
//! Every knob has a default matching the standard parameterization, so an
//! absent or empty config file runs the reference setup. A config file
//! overrides selectively; command-line flags override the file; the
//! `LITRANK_STAGE_DIR` environment variable overrides the staging directory
//! from either.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::ensemble::EnsembleWeights;
use crate::error::{Error, Result};
use crate::eval::TiePolicy;
use crate::ingest::IngestOptions;
use crate::linking::{LinkingThresholds, NormalizeRules};
use crate::rank::RankingParams;

/// Name of the environment variable overriding the staging directory.
pub const STAGE_DIR_ENV: &str = "LITRANK_STAGE_DIR";

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub ranking: RankingParams,
    pub weights: EnsembleWeights,
    pub thresholds: LinkingThresholds,
    pub normalize: NormalizeRules,
    pub tie_policy: TiePolicy,
    pub enable_affiliation_ensemble: bool,
    pub enable_enrichment: bool,
    pub emit_ensembles: bool,
    pub staging_dir: PathBuf,
    pub output_dir: PathBuf,
    pub year_min: i32,
    pub year_max: i32,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        let ingest = IngestOptions::default();
        PipelineConfig {
            ranking: RankingParams::default(),
            weights: EnsembleWeights::default(),
            thresholds: LinkingThresholds::default(),
            normalize: NormalizeRules::default(),
            tie_policy: TiePolicy::default(),
            enable_affiliation_ensemble: false,
            enable_enrichment: false,
            emit_ensembles: false,
            staging_dir: PathBuf::from("stage"),
            output_dir: PathBuf::from("out"),
            year_min: ingest.year_min,
            year_max: ingest.year_max,
        }
    }
}

impl PipelineConfig {
    /// Defaults, overridden by the given TOML file (when any), overridden by
    /// `LITRANK_STAGE_DIR` (when set). Call [`validate`](Self::validate)
    /// after applying command-line overrides.
    pub fn load(file: Option<&Path>) -> Result<PipelineConfig> {
        let mut config = PipelineConfig::default();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            let parsed: FileConfig = toml::from_str(&text).map_err(|e| {
                Error::config(format!("{}: {e}", path.display()))
            })?;
            parsed.apply(&mut config)?;
        }
        if let Some(dir) = std::env::var_os(STAGE_DIR_ENV) {
            config.staging_dir = PathBuf::from(dir);
        }
        Ok(config)
    }

    pub fn ingest_options(&self) -> IngestOptions {
        IngestOptions {
            year_min: self.year_min,
            year_max: self.year_max,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let r = &self.ranking;
        if !r.damping.is_finite() || !(0.0..=1.0).contains(&r.damping) {
            return Err(Error::config(format!(
                "ranking.damping must lie in [0,1], got {}",
                r.damping
            )));
        }
        if !r.decay_exponent.is_finite() || r.decay_exponent < 0.0 {
            return Err(Error::config(format!(
                "ranking.decay_exponent must be non-negative, got {}",
                r.decay_exponent
            )));
        }
        if r.iterations == 0 {
            return Err(Error::config(
                "ranking.iterations must be at least 1".to_string(),
            ));
        }
        if let Some(eps) = r.epsilon {
            if !eps.is_finite() || eps <= 0.0 {
                return Err(Error::config(format!(
                    "ranking.epsilon must be positive when set, got {eps}"
                )));
            }
        }
        self.weights.validate()?;
        self.thresholds.validate()?;
        if self.year_min > self.year_max {
            return Err(Error::config(format!(
                "ingest.year_min ({}) exceeds ingest.year_max ({})",
                self.year_min, self.year_max
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    ranking: Option<RankingSection>,
    ensemble: Option<EnsembleSection>,
    linking: Option<LinkingSection>,
    evaluation: Option<EvaluationSection>,
    ingest: Option<IngestSection>,
    paths: Option<PathsSection>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RankingSection {
    damping: Option<f64>,
    decay_exponent: Option<f64>,
    iterations: Option<u32>,
    epsilon: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnsembleSection {
    alpha: Option<f64>,
    beta: Option<f64>,
    gamma: Option<f64>,
    enable_affiliation: Option<bool>,
    emit_ensembles: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkingSection {
    lambda: Option<f64>,
    theta: Option<f64>,
    phi: Option<f64>,
    stop_words: Option<Vec<String>>,
    common_words: Option<Vec<String>>,
    enable_enrichment: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct EvaluationSection {
    tie_policy: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct IngestSection {
    year_min: Option<i32>,
    year_max: Option<i32>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PathsSection {
    staging_dir: Option<PathBuf>,
    output_dir: Option<PathBuf>,
}

impl FileConfig {
    fn apply(self, config: &mut PipelineConfig) -> Result<()> {
        if let Some(s) = self.ranking {
            set(&mut config.ranking.damping, s.damping);
            set(&mut config.ranking.decay_exponent, s.decay_exponent);
            set(&mut config.ranking.iterations, s.iterations);
            if s.epsilon.is_some() {
                config.ranking.epsilon = s.epsilon;
            }
        }
        if let Some(s) = self.ensemble {
            set(&mut config.weights.alpha, s.alpha);
            set(&mut config.weights.beta, s.beta);
            set(&mut config.weights.gamma, s.gamma);
            set(&mut config.enable_affiliation_ensemble, s.enable_affiliation);
            set(&mut config.emit_ensembles, s.emit_ensembles);
        }
        if let Some(s) = self.linking {
            set(&mut config.thresholds.lambda, s.lambda);
            set(&mut config.thresholds.theta, s.theta);
            set(&mut config.thresholds.phi, s.phi);
            set(&mut config.normalize.stop_words, s.stop_words);
            set(&mut config.normalize.common_words, s.common_words);
            set(&mut config.enable_enrichment, s.enable_enrichment);
        }
        if let Some(s) = self.evaluation {
            if let Some(policy) = s.tie_policy {
                config.tie_policy = policy.parse()?;
            }
        }
        if let Some(s) = self.ingest {
            set(&mut config.year_min, s.year_min);
            set(&mut config.year_max, s.year_max);
        }
        if let Some(s) = self.paths {
            set(&mut config.staging_dir, s.staging_dir);
            set(&mut config.output_dir, s.output_dir);
        }
        Ok(())
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}
