//! ROUGE-N and ROUGE-SU4 scoring of a candidate summary against a reference.
//!
//! Units are counted as multisets; overlap takes the minimum count per unit.
//! SU4 units are the unigrams plus every ordered token pair with at most four
//! intervening tokens. Tokenization matches the corpus tokenizer; an optional
//! stemming flag exists for parity experiments with stemmed toolkits.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use rust_stemmers::{Algorithm, Stemmer};
use serde::{Deserialize, Serialize};

use crate::corpus::tokenize;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Rouge2,
    Rouge3,
    Su4,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Rouge2, Metric::Rouge3, Metric::Su4];

    pub fn as_str(&self) -> &'static str {
        match self {
            Metric::Rouge2 => "rouge2",
            Metric::Rouge3 => "rouge3",
            Metric::Su4 => "su4",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "rouge2" => Ok(Metric::Rouge2),
            "rouge3" => Ok(Metric::Rouge3),
            "su4" => Ok(Metric::Su4),
            other => Err(format!("unknown metric '{other}' (expected rouge2|rouge3|su4)")),
        }
    }
}

/// Recall / precision / F1 triple for one metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RougeScore {
    pub metric: Metric,
    pub recall: f64,
    pub precision: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ScoreOptions {
    /// Stem tokens (English Snowball) before counting units.
    pub stem: bool,
}

/// Contiguous n-grams with multiplicity. Inputs shorter than `n` yield an
/// empty multiset.
pub fn ngram_multiset(tokens: &[String], n: usize) -> HashMap<Vec<String>, usize> {
    assert!(n >= 1);
    let mut counts = HashMap::new();
    if tokens.len() >= n {
        for window in tokens.windows(n) {
            *counts.entry(window.to_vec()).or_insert(0) += 1;
        }
    }
    counts
}

/// A unigram or skip-bigram unit of the SU4 metric.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SkipUnit {
    Unigram(String),
    Pair(String, String),
}

/// Unigrams plus ordered pairs `(tokens[i], tokens[j])` with `i < j` and at
/// most four tokens between them.
pub fn su4_multiset(tokens: &[String]) -> HashMap<SkipUnit, usize> {
    let mut counts = HashMap::new();
    for (i, token) in tokens.iter().enumerate() {
        *counts
            .entry(SkipUnit::Unigram(token.clone()))
            .or_insert(0) += 1;
        for j in i + 1..tokens.len().min(i + 6) {
            *counts
                .entry(SkipUnit::Pair(token.clone(), tokens[j].clone()))
                .or_insert(0) += 1;
        }
    }
    counts
}

fn overlap_counts<T: Eq + Hash>(
    candidate: &HashMap<T, usize>,
    reference: &HashMap<T, usize>,
) -> (usize, usize, usize) {
    let shared: usize = candidate
        .iter()
        .map(|(unit, &c)| c.min(reference.get(unit).copied().unwrap_or(0)))
        .sum();
    let cand_total = candidate.values().sum();
    let ref_total = reference.values().sum();
    (shared, cand_total, ref_total)
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn score_tokens(candidate: &[String], reference: &[String], metric: Metric) -> RougeScore {
    let (shared, cand_total, ref_total) = match metric {
        Metric::Rouge2 => {
            let (c, r) = (ngram_multiset(candidate, 2), ngram_multiset(reference, 2));
            overlap_counts(&c, &r)
        }
        Metric::Rouge3 => {
            let (c, r) = (ngram_multiset(candidate, 3), ngram_multiset(reference, 3));
            overlap_counts(&c, &r)
        }
        Metric::Su4 => {
            let (c, r) = (su4_multiset(candidate), su4_multiset(reference));
            overlap_counts(&c, &r)
        }
    };
    let recall = ratio(shared, ref_total);
    let precision = ratio(shared, cand_total);
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    RougeScore {
        metric,
        recall,
        precision,
        f1,
    }
}

fn prepare(text: &str, options: &ScoreOptions) -> Vec<String> {
    let tokens = tokenize(text);
    if options.stem {
        let stemmer = Stemmer::create(Algorithm::English);
        tokens
            .iter()
            .map(|t| stemmer.stem(t).into_owned())
            .collect()
    } else {
        tokens
    }
}

/// Score a candidate text against a single reference.
pub fn score_with(
    candidate: &str,
    reference: &str,
    metric: Metric,
    options: &ScoreOptions,
) -> Result<RougeScore> {
    let cand_tokens = prepare(candidate, options);
    let ref_tokens = prepare(reference, options);
    if cand_tokens.is_empty() || ref_tokens.is_empty() {
        return Err(Error::EmptyText);
    }
    Ok(score_tokens(&cand_tokens, &ref_tokens, metric))
}

/// [`score_with`] under default options (no stemming).
pub fn score(candidate: &str, reference: &str, metric: Metric) -> Result<RougeScore> {
    score_with(candidate, reference, metric, &ScoreOptions::default())
}

/// One batch-scoring TSV row: `doc_id, metric, recall, precision, f1`.
pub fn tsv_row(doc_id: &str, score: &RougeScore) -> String {
    format!(
        "{}\t{}\t{:?}\t{:?}\t{:?}",
        doc_id, score.metric, score.recall, score.precision, score.f1
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn toks(words: &[&str]) -> Vec<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn ngram_examples() {
        let counts = ngram_multiset(&toks(&["a", "b", "a", "b"]), 2);
        assert_eq!(counts.get(&toks(&["a", "b"])), Some(&2));
        assert_eq!(counts.get(&toks(&["b", "a"])), Some(&1));
        assert_eq!(counts.len(), 2);

        assert!(ngram_multiset(&toks(&["a"]), 2).is_empty());

        let tri = ngram_multiset(&toks(&["a", "b", "c"]), 3);
        assert_eq!(tri.get(&toks(&["a", "b", "c"])), Some(&1));
        assert_eq!(tri.len(), 1);
    }

    #[test]
    fn su4_examples() {
        let two = su4_multiset(&toks(&["a", "b"]));
        assert_eq!(two.len(), 3);
        assert_eq!(
            two.get(&SkipUnit::Pair("a".to_string(), "b".to_string())),
            Some(&1)
        );

        let three = su4_multiset(&toks(&["a", "b", "c"]));
        // 3 unigrams + pairs (a,b),(a,c),(b,c)
        assert_eq!(three.values().sum::<usize>(), 6);

        assert!(su4_multiset(&[]).is_empty());
    }

    #[test]
    fn su4_respects_window() {
        // distance 5 is the last pair kept; distance 6 is out
        let tokens = toks(&["x", "a", "b", "c", "d", "e", "y"]);
        let units = su4_multiset(&tokens);
        assert!(units.contains_key(&SkipUnit::Pair("x".to_string(), "e".to_string())));
        assert!(!units.contains_key(&SkipUnit::Pair("x".to_string(), "y".to_string())));
    }

    #[test]
    fn identical_texts_score_one() {
        for metric in Metric::ALL {
            let s = score("The cat sat on the mat today", "The cat sat on the mat today", metric)
                .unwrap();
            assert_eq!((s.recall, s.precision, s.f1), (1.0, 1.0, 1.0));
        }
    }

    #[test]
    fn disjoint_texts_score_zero() {
        for metric in Metric::ALL {
            let s = score("alpha beta gamma delta", "one two three four", metric).unwrap();
            assert_eq!((s.recall, s.precision, s.f1), (0.0, 0.0, 0.0));
        }
    }

    #[test]
    fn hand_counted_bigram_case() {
        let s = score("the cat on the mat", "the cat sat on the mat", Metric::Rouge2).unwrap();
        assert_abs_diff_eq!(s.recall, 0.6, epsilon = 1e-12);
        assert_abs_diff_eq!(s.precision, 0.75, epsilon = 1e-12);
        assert_abs_diff_eq!(s.f1, 2.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn empty_after_tokenization_errors() {
        assert!(matches!(
            score("...", "words here", Metric::Rouge2),
            Err(Error::EmptyText)
        ));
        assert!(matches!(
            score("words here", "", Metric::Rouge2),
            Err(Error::EmptyText)
        ));
    }

    #[test]
    fn stemming_flag_merges_inflections() {
        let plain = score("the cats are running", "the cat runs", Metric::Su4).unwrap();
        let stemmed = score_with(
            "the cats are running",
            "the cat runs",
            Metric::Su4,
            &ScoreOptions { stem: true },
        )
        .unwrap();
        assert!(stemmed.recall > plain.recall);
    }

    #[test]
    fn tsv_row_format() {
        let s = RougeScore {
            metric: Metric::Rouge2,
            recall: 1.0,
            precision: 0.75,
            f1: 2.0 / 3.0,
        };
        assert_eq!(
            tsv_row("doc1", &s),
            "doc1\trouge2\t1.0\t0.75\t0.6666666666666666"
        );
    }
}
