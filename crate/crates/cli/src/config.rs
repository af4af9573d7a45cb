use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use talkalign::embeddings::SimilarityKind;
use talkalign::hmm::{AlignOptions, EmissionOptions, HmmParams};
use talkalign::summarizer::BudgetMode;

use crate::CliError;

/// Pipeline settings shared by every command. A JSON config file carries the
/// same fields; command-line flags override file values.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub params: HmmParams,
    pub remove_stopwords: bool,
    pub similarity_kind: SimilarityKind,
    pub emission_normalize: bool,
    pub budget_modes: Vec<BudgetMode>,
    pub hybrid: bool,
    pub redundancy_threshold: f64,
    pub embeddings_path: Option<PathBuf>,
    pub parallelism: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            params: HmmParams::default(),
            remove_stopwords: true,
            similarity_kind: SimilarityKind::default(),
            emission_normalize: true,
            // the standard training sweep: two fixed lengths, two ratios
            budget_modes: vec![
                BudgetMode::FixedWords { budget: 150 },
                BudgetMode::FixedWords { budget: 250 },
                BudgetMode::Ratio { ratio: 0.3 },
                BudgetMode::Ratio { ratio: 0.4 },
            ],
            hybrid: false,
            redundancy_threshold: 0.5,
            embeddings_path: None,
            parallelism: 1,
        }
    }
}

impl PipelineConfig {
    /// Load from a JSON file. Missing fields take their defaults.
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let config: PipelineConfig = serde_json::from_str(&text).map_err(|e| CliError::Io {
            path: path.to_path_buf(),
            source: std::io::Error::new(
                std::io::ErrorKind::InvalidData,
                format!("malformed config: {e}"),
            ),
        })?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.params.validate().map_err(CliError::Usage)?;
        if self.budget_modes.is_empty() {
            return Err(CliError::Usage("at least one budget mode is required".into()));
        }
        for mode in &self.budget_modes {
            validate_mode(mode)?;
        }
        if !(0.0..=1.0).contains(&self.redundancy_threshold) {
            return Err(CliError::Usage(format!(
                "redundancy_threshold must lie in [0,1], got {}",
                self.redundancy_threshold
            )));
        }
        if self.parallelism == 0 {
            return Err(CliError::Usage("parallelism must be at least 1".into()));
        }
        Ok(())
    }

    pub fn align_options(&self) -> AlignOptions {
        AlignOptions {
            params: self.params,
            emission: EmissionOptions {
                similarity: self.similarity_kind,
                normalize: self.emission_normalize,
            },
        }
    }

    /// Stable hash of the effective configuration, recorded in batch
    /// manifests so outputs can be tied to the settings that produced them.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

pub fn validate_mode(mode: &BudgetMode) -> Result<(), CliError> {
    match mode {
        BudgetMode::FixedWords { budget } if *budget == 0 => {
            Err(CliError::Usage("--words must be at least 1".into()))
        }
        BudgetMode::Ratio { ratio } if !(*ratio > 0.0 && *ratio < 1.0) => Err(CliError::Usage(
            format!("--ratio must lie strictly inside (0,1), got {ratio}"),
        )),
        BudgetMode::TopN { n } if *n == 0 => {
            Err(CliError::Usage("--top-n must be at least 1".into()))
        }
        _ => Ok(()),
    }
}
