//! Word-embedding table and the word-similarity scores behind the HMM's
//! emission probabilities.
//!
//! The loader accepts the common text format for pre-trained embeddings: one
//! entry per line, a token followed by its vector components, space-separated.
//! Vectors are unit-normalized at load so cosine reduces to a dot product.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::corpus::{Sentence, Transcript};
use crate::error::{Error, Result};

/// How raw cosine is mapped onto the [0,1] similarity scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimilarityKind {
    /// (cos + 1) / 2 — keeps dissimilar word pairs at small positive mass.
    #[default]
    RescaledCosine,
    /// max(0, cos) — zeroes out dissimilar pairs.
    ClampedCosine,
}

/// Floor applied to emission scores so that every state stays reachable in
/// log space.
pub const EMISSION_FLOOR: f64 = 1e-8;

/// Immutable word → unit-vector map, shareable across decoding workers.
#[derive(Debug, Clone)]
pub struct EmbeddingTable {
    dimension: usize,
    index: HashMap<String, usize>,
    /// Row-major storage of unit-normalized vectors.
    vectors: Vec<f32>,
    dropped_zero_norm: usize,
}

impl EmbeddingTable {
    /// Read a table from the text line format. Duplicate words keep their
    /// first occurrence; zero-norm vectors are dropped and counted.
    pub fn load(reader: impl BufRead) -> Result<Self> {
        let mut builder = Builder::new();
        for (idx, line) in reader.lines().enumerate() {
            builder.push_line(idx + 1, &line?)?;
        }
        builder.finish()
    }

    /// Build a table directly from (word, vector) pairs, mostly for tests and
    /// synthetic setups. Entry order stands in for line numbers in errors.
    pub fn from_entries<I, S>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Vec<f32>)>,
        S: Into<String>,
    {
        let mut builder = Builder::new();
        for (idx, (word, vector)) in entries.into_iter().enumerate() {
            builder.push_entry(idx + 1, word.into(), vector)?;
        }
        builder.finish()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn vocab_size(&self) -> usize {
        self.index.len()
    }

    /// Number of zero-norm vectors skipped at load time.
    pub fn dropped_zero_norm(&self) -> usize {
        self.dropped_zero_norm
    }

    pub fn contains(&self, word: &str) -> bool {
        self.index.contains_key(word)
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.index.keys().map(String::as_str)
    }

    pub fn vector(&self, word: &str) -> Option<&[f32]> {
        self.index.get(word).map(|&row| self.row(row))
    }

    pub(crate) fn word_id(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }

    fn row(&self, row: usize) -> &[f32] {
        &self.vectors[row * self.dimension..(row + 1) * self.dimension]
    }

    /// Similarity between two in-vocabulary rows.
    pub(crate) fn similarity_ids(&self, kind: SimilarityKind, a: usize, b: usize) -> f64 {
        let (va, vb) = (self.row(a), self.row(b));
        let dot: f64 = va
            .iter()
            .zip(vb)
            .map(|(&x, &y)| f64::from(x) * f64::from(y))
            .sum();
        let cos = dot.clamp(-1.0, 1.0);
        match kind {
            SimilarityKind::RescaledCosine => (cos + 1.0) / 2.0,
            SimilarityKind::ClampedCosine => cos.max(0.0),
        }
    }

    /// Word similarity in [0,1]; 0 when either word is out of vocabulary.
    /// Symmetric in its arguments.
    pub fn similarity_as(&self, kind: SimilarityKind, a: &str, b: &str) -> f64 {
        match (self.word_id(a), self.word_id(b)) {
            (Some(ia), Some(ib)) => self.similarity_ids(kind, ia, ib),
            _ => 0.0,
        }
    }

    /// [`similarity_as`](Self::similarity_as) with the default rescaled-cosine mapping.
    pub fn similarity(&self, a: &str, b: &str) -> f64 {
        self.similarity_as(SimilarityKind::RescaledCosine, a, b)
    }
}

struct Builder {
    dimension: Option<usize>,
    index: HashMap<String, usize>,
    vectors: Vec<f32>,
    dropped_zero_norm: usize,
}

impl Builder {
    fn new() -> Self {
        Builder {
            dimension: None,
            index: HashMap::new(),
            vectors: Vec::new(),
            dropped_zero_norm: 0,
        }
    }

    fn push_line(&mut self, line_no: usize, line: &str) -> Result<()> {
        if line.trim().is_empty() {
            return Ok(());
        }
        let mut fields = line.split_whitespace();
        let word = fields.next().expect("non-empty line has a first field");
        let mut vector = Vec::with_capacity(self.dimension.unwrap_or(0));
        for field in fields {
            let value: f32 = field.parse().map_err(|_| Error::Format {
                line: line_no,
                message: format!("cannot parse '{field}' as a float"),
            })?;
            vector.push(value);
        }
        self.push_entry(line_no, word.to_string(), vector)
    }

    fn push_entry(&mut self, line_no: usize, word: String, vector: Vec<f32>) -> Result<()> {
        let dimension = *self.dimension.get_or_insert(vector.len());
        if vector.len() != dimension || dimension == 0 {
            return Err(Error::Format {
                line: line_no,
                message: format!(
                    "expected {dimension} vector components, found {}",
                    vector.len()
                ),
            });
        }
        let entry = match self.index.entry(word) {
            Entry::Occupied(_) => return Ok(()), // keep first occurrence
            Entry::Vacant(v) => v,
        };
        let norm = vector
            .iter()
            .map(|&x| f64::from(x) * f64::from(x))
            .sum::<f64>()
            .sqrt();
        if norm == 0.0 {
            self.dropped_zero_norm += 1;
            return Ok(());
        }
        let row = self.vectors.len() / dimension;
        self.vectors
            .extend(vector.iter().map(|&x| (f64::from(x) / norm) as f32));
        entry.insert(row);
        Ok(())
    }

    fn finish(self) -> Result<EmbeddingTable> {
        if self.index.is_empty() {
            return Err(Error::EmptyTable);
        }
        Ok(EmbeddingTable {
            dimension: self.dimension.unwrap_or(0),
            index: self.index,
            vectors: self.vectors,
            dropped_zero_norm: self.dropped_zero_norm,
        })
    }
}

/// Emission score of a transcript token against one paper sentence: the best
/// similarity over the sentence's in-vocabulary words, floored at
/// [`EMISSION_FLOOR`] when no positive similarity exists.
pub fn emission_score(
    table: &EmbeddingTable,
    kind: SimilarityKind,
    token: &str,
    sentence: &Sentence,
) -> f64 {
    let Some(token_id) = table.word_id(token) else {
        return EMISSION_FLOOR;
    };
    let mut best = 0.0_f64;
    for word in &sentence.tokens {
        if let Some(word_id) = table.word_id(word) {
            best = best.max(table.similarity_ids(kind, token_id, word_id));
        }
    }
    if best > 0.0 {
        best
    } else {
        EMISSION_FLOOR
    }
}

/// Drop transcript tokens that have no vector, returning the filtered
/// transcript and how many tokens were removed.
pub fn filter_oov(table: &EmbeddingTable, transcript: &Transcript) -> (Transcript, usize) {
    let tokens: Vec<_> = transcript
        .tokens
        .iter()
        .filter(|t| table.contains(&t.surface))
        .cloned()
        .collect();
    let dropped = transcript.len() - tokens.len();
    (Transcript { tokens }, dropped)
}
