//! Serialized forms of an alignment: the JSON record and the human-readable
//! interval report (one row per run of consecutive identical states).

use serde::{Deserialize, Serialize};

use super::decode::AlignmentResult;
use crate::corpus::{PaperDocument, StateSpace, Transcript};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlignmentJson {
    pub log_prob: f64,
    pub dropped_oov: usize,
    pub path: Vec<PathEntry>,
    pub counts: Vec<CountEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathEntry {
    pub t: usize,
    pub token: String,
    pub state: usize,
    pub sentence_id: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CountEntry {
    pub sentence_id: usize,
    pub count: usize,
}

/// Assemble the JSON record for an alignment. The transcript must be the one
/// that was decoded (after OOV filtering).
pub fn alignment_json(
    result: &AlignmentResult,
    state_space: &StateSpace,
    transcript: &Transcript,
) -> AlignmentJson {
    assert_eq!(result.path.len(), transcript.len());
    let path = result
        .path
        .iter()
        .enumerate()
        .map(|(t, &state)| PathEntry {
            t,
            token: transcript.tokens[t].surface.clone(),
            state,
            sentence_id: state_space.sentence_id(state),
        })
        .collect();
    let counts = result
        .counts
        .iter()
        .map(|(&sentence_id, &count)| CountEntry { sentence_id, count })
        .collect();
    AlignmentJson {
        log_prob: result.log_prob,
        dropped_oov: result.dropped_oov,
        path,
        counts,
    }
}

fn tsv_safe(text: &str) -> String {
    text.replace(['\t', '\n'], " ")
}

/// Tab-separated interval report: consecutive time steps on the same sentence
/// collapse into one row of
/// `sentence_id, first_t, last_t, sentence_text, transcript_span`.
pub fn interval_report(
    result: &AlignmentResult,
    state_space: &StateSpace,
    transcript: &Transcript,
    doc: &PaperDocument,
) -> String {
    assert_eq!(result.path.len(), transcript.len());
    let mut out = String::new();
    let mut first_t = 0;
    for t in 0..result.path.len() {
        let last_of_run =
            t + 1 == result.path.len() || result.path[t + 1] != result.path[t];
        if !last_of_run {
            continue;
        }
        let state = result.path[t];
        let sentence_id = state_space.sentence_id(state);
        let sentence_text = doc
            .sentence(sentence_id)
            .map(|s| s.text.as_str())
            .unwrap_or_default();
        let span = transcript.tokens[first_t..=t]
            .iter()
            .map(|tok| tok.surface.as_str())
            .collect::<Vec<_>>()
            .join(" ");
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            sentence_id,
            first_t,
            t,
            tsv_safe(sentence_text),
            span
        ));
        first_t = t + 1;
    }
    out
}
