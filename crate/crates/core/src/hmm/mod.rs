//! The sentence-level alignment model: a hidden Markov model whose states are
//! the eligible paper sentences and whose observations are the transcript
//! tokens.
//!
//! Paths start uniformly over the introduction sentences, transitions decay
//! geometrically with sentence distance (backward moves penalized), and
//! emissions score a spoken word by its best embedding similarity against the
//! words of the state's sentence. Decoding is exact MAP via Viterbi; the fast
//! decoder exploits the geometric transition structure and produces the same
//! result in O(T·K).

mod decode;
mod emission;
pub mod report;
mod transition;

pub use decode::{viterbi, viterbi_fast, AlignmentResult};
pub use emission::{EmissionMatrix, EmissionOptions};
pub use transition::{row_coefficient, TransitionModel};

use serde::{Deserialize, Serialize};

use crate::corpus::{PaperDocument, StateSpace, Transcript};
use crate::embeddings::{filter_oov, EmbeddingTable};
use crate::error::Result;

/// Transition-model parameters. All values live strictly inside (0,1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HmmParams {
    /// Geometric decay of transition probability with sentence distance.
    pub lambda: f64,
    /// Penalty factor on backward moves.
    pub gamma: f64,
    /// Scale of the stay probability.
    pub delta: f64,
    /// Floor of the stay probability.
    pub epsilon: f64,
    /// Fixed stay probability, bypassing the K/T formula.
    pub alpha_override: Option<f64>,
}

impl Default for HmmParams {
    fn default() -> Self {
        HmmParams {
            lambda: 0.75,
            gamma: 0.5,
            delta: 0.33,
            epsilon: 0.1,
            alpha_override: None,
        }
    }
}

impl HmmParams {
    /// Check that every parameter lies strictly inside (0,1).
    pub fn validate(&self) -> std::result::Result<(), String> {
        let mut fields = vec![
            ("lambda", self.lambda),
            ("gamma", self.gamma),
            ("delta", self.delta),
            ("epsilon", self.epsilon),
        ];
        if let Some(alpha) = self.alpha_override {
            fields.push(("alpha_override", alpha));
        }
        for (name, value) in fields {
            if !(value > 0.0 && value < 1.0) {
                return Err(format!("{name} must lie strictly inside (0,1), got {value}"));
            }
        }
        Ok(())
    }
}

/// Stay probability `alpha = max(delta·(1 - K/T), epsilon)`, or the override
/// when one is set.
pub fn stay_probability(k_states: usize, transcript_len: usize, params: &HmmParams) -> f64 {
    assert!(k_states >= 1 && transcript_len >= 1);
    if let Some(alpha) = params.alpha_override {
        return alpha;
    }
    let ratio = k_states as f64 / transcript_len as f64;
    (params.delta * (1.0 - ratio)).max(params.epsilon)
}

/// Log start distribution: uniform over the introduction states, -inf
/// elsewhere.
pub fn start_log_distribution(state_space: &StateSpace) -> Vec<f64> {
    assert!(!state_space.intro_states.is_empty());
    let log_uniform = -(state_space.intro_states.len() as f64).ln();
    let mut start = vec![f64::NEG_INFINITY; state_space.len()];
    for &position in &state_space.intro_states {
        start[position] = log_uniform;
    }
    start
}

/// Options for the end-to-end alignment of one document.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct AlignOptions {
    pub params: HmmParams,
    pub emission: EmissionOptions,
}

/// Align a transcript against a document: drop out-of-vocabulary tokens,
/// build the model, decode. Returns the result together with the observed
/// (filtered) transcript the path refers to.
pub fn align_transcript(
    doc: &PaperDocument,
    state_space: &StateSpace,
    transcript: &Transcript,
    table: &EmbeddingTable,
    options: &AlignOptions,
) -> Result<(AlignmentResult, Transcript)> {
    let (observed, dropped) = filter_oov(table, transcript);
    if observed.is_empty() {
        return Err(crate::error::Error::EmptyTranscript);
    }
    let transitions = TransitionModel::build(state_space, observed.len(), &options.params);
    let emissions = EmissionMatrix::build(state_space, doc, &observed, table, &options.emission)?;
    let start = start_log_distribution(state_space);
    let mut result = viterbi_fast(&emissions, &transitions, &start, state_space, &observed);
    result.dropped_oov = dropped;
    Ok((result, observed))
}
