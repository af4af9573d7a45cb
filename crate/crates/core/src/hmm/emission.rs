use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{PaperDocument, StateSpace, Transcript};
use crate::embeddings::{EmbeddingTable, SimilarityKind, EMISSION_FLOOR};
use crate::error::{Error, Result};

/// Knobs for emission construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmissionOptions {
    pub similarity: SimilarityKind,
    /// Normalize each state row into a distribution over the transcript's
    /// token types. Turning this off decodes with the raw scores.
    pub normalize: bool,
}

impl Default for EmissionOptions {
    fn default() -> Self {
        EmissionOptions {
            similarity: SimilarityKind::default(),
            normalize: true,
        }
    }
}

/// Per-state log scores over the transcript's distinct token types.
#[derive(Debug, Clone)]
pub struct EmissionMatrix {
    k_states: usize,
    types: Vec<String>,
    type_index: HashMap<String, usize>,
    /// k_states x types.len(), row-major.
    log_scores: Vec<f64>,
}

impl EmissionMatrix {
    /// Score every eligible sentence against every distinct transcript token
    /// type. With `normalize` set, each state row becomes a distribution.
    ///
    /// The transcript is expected to be cleaned (out-of-vocabulary tokens
    /// dropped); stray OOV types still get the floor score rather than
    /// failing.
    pub fn build(
        state_space: &StateSpace,
        doc: &PaperDocument,
        transcript: &Transcript,
        table: &EmbeddingTable,
        options: &EmissionOptions,
    ) -> Result<Self> {
        let (types, type_index) = collect_types(transcript);
        if types.is_empty() {
            return Err(Error::EmptyTranscript);
        }
        let type_ids: Vec<Option<usize>> =
            types.iter().map(|t| table.word_id(t)).collect();

        let sentences: Vec<_> = doc.sentences().collect();
        let k_states = state_space.len();
        let n_types = types.len();
        let mut log_scores = vec![0.0_f64; k_states * n_types];
        // Word-pair similarities repeat across sentences; memoize by row ids.
        let mut memo: HashMap<(usize, usize), f64> = HashMap::new();
        for (state, &sentence_id) in state_space.states.iter().enumerate() {
            let sentence = sentences[sentence_id];
            let word_ids: Vec<usize> = {
                let mut seen = Vec::new();
                for token in &sentence.tokens {
                    if let Some(id) = table.word_id(token) {
                        if !seen.contains(&id) {
                            seen.push(id);
                        }
                    }
                }
                seen
            };
            let row = &mut log_scores[state * n_types..(state + 1) * n_types];
            for (col, type_id) in type_ids.iter().enumerate() {
                row[col] = match type_id {
                    Some(tid) => {
                        let mut best = 0.0_f64;
                        for &wid in &word_ids {
                            let sim = *memo.entry((*tid, wid)).or_insert_with(|| {
                                table.similarity_ids(options.similarity, *tid, wid)
                            });
                            best = best.max(sim);
                        }
                        if best > 0.0 {
                            best
                        } else {
                            EMISSION_FLOOR
                        }
                    }
                    None => EMISSION_FLOOR,
                };
            }
            if options.normalize {
                let total: f64 = row.iter().sum();
                for score in row.iter_mut() {
                    *score = (*score / total).ln();
                }
            } else {
                for score in row.iter_mut() {
                    *score = score.ln();
                }
            }
        }
        Ok(EmissionMatrix {
            k_states,
            types,
            type_index,
            log_scores,
        })
    }

    /// Assemble a matrix from prepared log rows, one per state. Intended for
    /// tests and synthetic models.
    pub fn from_log_rows(rows: Vec<Vec<f64>>, types: Vec<String>) -> Self {
        let k_states = rows.len();
        let n_types = types.len();
        let mut log_scores = Vec::with_capacity(k_states * n_types);
        for row in &rows {
            assert_eq!(row.len(), n_types, "ragged emission rows");
            log_scores.extend_from_slice(row);
        }
        let type_index = types
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        EmissionMatrix {
            k_states,
            types,
            type_index,
            log_scores,
        }
    }

    pub fn k_states(&self) -> usize {
        self.k_states
    }

    pub fn n_types(&self) -> usize {
        self.types.len()
    }

    pub fn types(&self) -> &[String] {
        &self.types
    }

    pub fn type_of(&self, token: &str) -> Option<usize> {
        self.type_index.get(token).copied()
    }

    pub fn log_prob(&self, state: usize, type_idx: usize) -> f64 {
        self.log_scores[state * self.types.len() + type_idx]
    }

    /// Map transcript tokens onto type columns. Panics on a token the matrix
    /// has never seen (the matrix must be built from the same transcript).
    pub fn observation_sequence(&self, transcript: &Transcript) -> Vec<usize> {
        transcript
            .surfaces()
            .map(|s| {
                self.type_of(s)
                    .unwrap_or_else(|| panic!("token '{s}' missing from emission matrix"))
            })
            .collect()
    }
}

fn collect_types(transcript: &Transcript) -> (Vec<String>, HashMap<String, usize>) {
    let mut types = Vec::new();
    let mut index = HashMap::new();
    for surface in transcript.surfaces() {
        if !index.contains_key(surface) {
            index.insert(surface.to_string(), types.len());
            types.push(surface.to_string());
        }
    }
    (types, index)
}
