//! Turn alignment counts into budgeted extractive summaries.
//!
//! A sentence's importance is the number of transcript time steps aligned to
//! it. Summaries take top-ranked sentences under a word budget (fixed or as a
//! ratio of the eligible paper length), a sentence count, or the hybrid form
//! that augments the abstract with non-redundant extracted sentences.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::corpus::{PaperDocument, SectionRole, Sentence, StateSpace};
use crate::error::{Error, Result};

/// How the summary length is controlled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BudgetMode {
    /// At most this many words.
    FixedWords { budget: usize },
    /// At most `ratio` of the eligible sentences' total word count.
    Ratio { ratio: f64 },
    /// Exactly the top `n` ranked sentences (fewer if the ranking is shorter).
    TopN { n: usize },
}

impl BudgetMode {
    pub fn slug(&self) -> String {
        match self {
            BudgetMode::FixedWords { budget } => format!("words{budget}"),
            BudgetMode::Ratio { ratio } => format!("ratio{ratio}"),
            BudgetMode::TopN { n } => format!("top{n}"),
        }
    }
}

/// A budget after resolution against a concrete document.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResolvedBudget {
    Words(usize),
    Sentences(usize),
}

impl ResolvedBudget {
    pub fn value(&self) -> usize {
        match self {
            ResolvedBudget::Words(n) | ResolvedBudget::Sentences(n) => *n,
        }
    }
}

/// One ranked sentence: id plus its time-step count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankedSentence {
    pub sentence_id: usize,
    pub count: usize,
}

/// Extracted summary in document order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub sentence_ids: Vec<usize>,
    pub texts: Vec<String>,
    pub total_words: usize,
    pub mode: BudgetMode,
    pub hybrid: bool,
}

impl Summary {
    /// Plain-text form: one sentence per line, document order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for text in &self.texts {
            out.push_str(text);
            out.push('\n');
        }
        out
    }
}

/// Sentences sorted by count descending, earlier document position on ties.
/// Zero counts never make the ranking.
pub fn importance_ranking(counts: &BTreeMap<usize, usize>) -> Vec<RankedSentence> {
    let mut ranking: Vec<RankedSentence> = counts
        .iter()
        .filter(|(_, &count)| count > 0)
        .map(|(&sentence_id, &count)| RankedSentence { sentence_id, count })
        .collect();
    ranking.sort_by(|a, b| {
        b.count
            .cmp(&a.count)
            .then(a.sentence_id.cmp(&b.sentence_id))
    });
    ranking
}

/// Resolve a budget mode against the document. Ratio budgets measure the
/// eligible state-space word total.
pub fn resolve_budget(
    mode: &BudgetMode,
    doc: &PaperDocument,
    state_space: &StateSpace,
) -> Result<ResolvedBudget> {
    match mode {
        BudgetMode::FixedWords { budget } => Ok(ResolvedBudget::Words(*budget)),
        BudgetMode::Ratio { ratio } => {
            let eligible = state_space.eligible_word_count(doc) as f64;
            let budget = (ratio * eligible).floor() as usize;
            if budget == 0 {
                return Err(Error::BudgetTooSmall);
            }
            Ok(ResolvedBudget::Words(budget))
        }
        BudgetMode::TopN { n } => Ok(ResolvedBudget::Sentences(*n)),
    }
}

fn sentences_by_id(doc: &PaperDocument) -> Vec<&Sentence> {
    doc.sentences().collect()
}

fn finish_summary(
    mut ids: Vec<usize>,
    doc: &PaperDocument,
    mode: BudgetMode,
    hybrid: bool,
) -> Summary {
    ids.sort_unstable();
    let by_id = sentences_by_id(doc);
    let texts: Vec<String> = ids.iter().map(|&id| by_id[id].text.clone()).collect();
    let total_words = ids.iter().map(|&id| by_id[id].word_count).sum();
    Summary {
        sentence_ids: ids,
        texts,
        total_words,
        mode,
        hybrid,
    }
}

/// Greedy selection down the ranking. Word budgets skip sentences that do not
/// fit and keep scanning; the sentence-count budget takes the first `n`.
pub fn select_summary(
    ranking: &[RankedSentence],
    doc: &PaperDocument,
    mode: BudgetMode,
    budget: ResolvedBudget,
) -> Summary {
    let by_id = sentences_by_id(doc);
    let ids = match budget {
        ResolvedBudget::Sentences(n) => ranking
            .iter()
            .take(n)
            .map(|r| r.sentence_id)
            .collect::<Vec<_>>(),
        ResolvedBudget::Words(limit) => {
            let mut remaining = limit;
            let mut ids = Vec::new();
            for ranked in ranking {
                let words = by_id[ranked.sentence_id].word_count;
                if words <= remaining {
                    ids.push(ranked.sentence_id);
                    remaining -= words;
                }
            }
            ids
        }
    };
    finish_summary(ids, doc, mode, false)
}

fn bigrams(sentence: &Sentence) -> Vec<(String, String)> {
    sentence
        .tokens
        .windows(2)
        .map(|w| (w[0].clone(), w[1].clone()))
        .collect()
}

/// Fraction of the candidate's distinct bigrams already present in the
/// selected set; 0 when the candidate has no bigrams.
fn redundancy(candidate: &Sentence, selected: &HashSet<(String, String)>) -> f64 {
    let cand: HashSet<(String, String)> = bigrams(candidate).into_iter().collect();
    if cand.is_empty() {
        return 0.0;
    }
    let shared = cand.iter().filter(|b| selected.contains(*b)).count();
    shared as f64 / cand.len() as f64
}

/// Abstract-first summary: all abstract sentences, then ranked sentences that
/// fit the remaining word budget and are not redundant against what is
/// already selected.
pub fn hybrid_summary(
    doc: &PaperDocument,
    ranking: &[RankedSentence],
    budget_words: usize,
    redundancy_threshold: f64,
) -> Result<Summary> {
    let abstract_ids: Vec<usize> = doc
        .sections
        .iter()
        .filter(|s| s.role == SectionRole::Abstract)
        .flat_map(|s| s.sentences.iter().map(|sent| sent.id))
        .collect();
    if abstract_ids.is_empty() {
        return Err(Error::MissingAbstract);
    }
    let by_id = sentences_by_id(doc);
    let mut selected_bigrams: HashSet<(String, String)> = HashSet::new();
    let mut abstract_words = 0;
    for &id in &abstract_ids {
        selected_bigrams.extend(bigrams(by_id[id]));
        abstract_words += by_id[id].word_count;
    }
    let mut remaining = budget_words.saturating_sub(abstract_words);
    let mut ids = abstract_ids;
    for ranked in ranking {
        let sentence = by_id[ranked.sentence_id];
        if sentence.word_count > remaining {
            continue;
        }
        if redundancy(sentence, &selected_bigrams) > redundancy_threshold {
            continue;
        }
        selected_bigrams.extend(bigrams(sentence));
        remaining -= sentence.word_count;
        ids.push(ranked.sentence_id);
    }
    Ok(finish_summary(
        ids,
        doc,
        BudgetMode::FixedWords {
            budget: budget_words,
        },
        true,
    ))
}

/// JSON form of a summary.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SummaryJson {
    pub mode: BudgetMode,
    pub budget: usize,
    pub sentence_ids: Vec<usize>,
    pub total_words: usize,
    pub hybrid: bool,
    pub text: String,
}

pub fn summary_json(summary: &Summary, budget: ResolvedBudget) -> SummaryJson {
    SummaryJson {
        mode: summary.mode,
        budget: budget.value(),
        sentence_ids: summary.sentence_ids.clone(),
        total_words: summary.total_words,
        hybrid: summary.hybrid,
        text: summary.to_text(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{clean_paper, parse_paper};

    /// Document with one body section whose sentences have the given word
    /// counts (every word is unique so redundancy stays zero).
    fn doc_with_word_counts(counts: &[usize]) -> PaperDocument {
        let sentences: Vec<String> = counts
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                (0..n)
                    .map(|j| format!("w{i}x{j}"))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        let json = serde_json::json!({
            "title": "t",
            "sections": [{ "name": "Body", "sentences": sentences }]
        });
        clean_paper(parse_paper(&json.to_string()).unwrap())
    }

    fn counts_of(pairs: &[(usize, usize)]) -> BTreeMap<usize, usize> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn ranking_orders_by_count_then_position() {
        let counts = counts_of(&[(3, 10), (7, 4), (1, 10)]);
        let ranking = importance_ranking(&counts);
        let ids: Vec<usize> = ranking.iter().map(|r| r.sentence_id).collect();
        assert_eq!(ids, vec![1, 3, 7]);
        assert_eq!(ranking[0].count, 10);
    }

    #[test]
    fn ranking_drops_zero_counts() {
        let counts = counts_of(&[(0, 5), (1, 0), (2, 2)]);
        let ranking = importance_ranking(&counts);
        let ids: Vec<usize> = ranking.iter().map(|r| r.sentence_id).collect();
        assert_eq!(ids, vec![0, 2]);
    }

    #[test]
    fn resolve_budget_modes() {
        let doc = doc_with_word_counts(&[400, 600]);
        let space = StateSpace {
            states: vec![0, 1],
            intro_states: vec![0],
        };
        assert_eq!(
            resolve_budget(&BudgetMode::FixedWords { budget: 150 }, &doc, &space).unwrap(),
            ResolvedBudget::Words(150)
        );
        assert_eq!(
            resolve_budget(&BudgetMode::Ratio { ratio: 0.3 }, &doc, &space).unwrap(),
            ResolvedBudget::Words(300)
        );
        assert_eq!(
            resolve_budget(&BudgetMode::TopN { n: 30 }, &doc, &space).unwrap(),
            ResolvedBudget::Sentences(30)
        );
    }

    #[test]
    fn ratio_budget_too_small() {
        let doc = doc_with_word_counts(&[3]);
        let space = StateSpace {
            states: vec![0],
            intro_states: vec![0],
        };
        assert!(matches!(
            resolve_budget(&BudgetMode::Ratio { ratio: 0.3 }, &doc, &space),
            Err(Error::BudgetTooSmall)
        ));
    }

    #[test]
    fn greedy_selection_skips_and_continues() {
        // ids 0,1,2 with 40, 80, 30 words; ranked 0 > 1 > 2 by count
        let doc = doc_with_word_counts(&[40, 80, 30]);
        let ranking = vec![
            RankedSentence { sentence_id: 0, count: 9 },
            RankedSentence { sentence_id: 1, count: 7 },
            RankedSentence { sentence_id: 2, count: 5 },
        ];
        let mode = BudgetMode::FixedWords { budget: 75 };
        let summary = select_summary(&ranking, &doc, mode, ResolvedBudget::Words(75));
        assert_eq!(summary.sentence_ids, vec![0, 2]);
        assert_eq!(summary.total_words, 70);
    }

    #[test]
    fn top_n_takes_highest_count() {
        let doc = doc_with_word_counts(&[5, 5, 5]);
        let ranking = importance_ranking(&counts_of(&[(0, 2), (1, 9), (2, 1)]));
        let mode = BudgetMode::TopN { n: 1 };
        let summary = select_summary(&ranking, &doc, mode, ResolvedBudget::Sentences(1));
        assert_eq!(summary.sentence_ids, vec![1]);
    }

    #[test]
    fn nothing_fits_gives_empty_summary() {
        let doc = doc_with_word_counts(&[40, 80]);
        let ranking = importance_ranking(&counts_of(&[(0, 2), (1, 9)]));
        let mode = BudgetMode::FixedWords { budget: 10 };
        let summary = select_summary(&ranking, &doc, mode, ResolvedBudget::Words(10));
        assert!(summary.sentence_ids.is_empty());
        assert_eq!(summary.total_words, 0);
    }

    fn hybrid_doc() -> PaperDocument {
        let json = serde_json::json!({
            "title": "t",
            "sections": [
                { "name": "Abstract", "sentences": [
                    "alpha beta gamma delta epsilon zeta",      // id 0, 6 words
                    "eta theta iota kappa lambda mu",           // id 1, 6 words
                ]},
                { "name": "Body", "sentences": [
                    "one two three four five six seven eight",  // id 2, 8 words
                    "alpha beta gamma delta epsilon zeta",      // id 3, duplicate of abstract
                    "nine ten eleven twelve thirteen",          // id 4, 5 words
                ]},
            ]
        });
        clean_paper(parse_paper(&json.to_string()).unwrap())
    }

    #[test]
    fn hybrid_appends_nonredundant_until_budget() {
        let doc = hybrid_doc();
        let ranking = vec![
            RankedSentence { sentence_id: 3, count: 10 }, // redundant with abstract
            RankedSentence { sentence_id: 2, count: 8 },
            RankedSentence { sentence_id: 4, count: 2 },
        ];
        let summary = hybrid_summary(&doc, &ranking, 24, 0.5).unwrap();
        // abstract (12 words) + id 2 (8 words); id 3 skipped as redundant,
        // id 4 (5 words) no longer fits
        assert_eq!(summary.sentence_ids, vec![0, 1, 2]);
        assert_eq!(summary.total_words, 20);
        assert!(summary.hybrid);
    }

    #[test]
    fn hybrid_with_oversized_abstract_keeps_abstract_only() {
        let doc = hybrid_doc();
        let ranking = vec![RankedSentence { sentence_id: 4, count: 5 }];
        let summary = hybrid_summary(&doc, &ranking, 10, 0.5).unwrap();
        assert_eq!(summary.sentence_ids, vec![0, 1]);
        assert_eq!(summary.total_words, 12);
    }

    #[test]
    fn hybrid_requires_abstract() {
        let doc = doc_with_word_counts(&[5, 5]);
        let err = hybrid_summary(&doc, &[], 100, 0.5).unwrap_err();
        assert!(matches!(err, Error::MissingAbstract));
    }

    #[test]
    fn summary_text_is_one_sentence_per_line() {
        let doc = doc_with_word_counts(&[4, 4]);
        let ranking = importance_ranking(&counts_of(&[(0, 1), (1, 2)]));
        let mode = BudgetMode::FixedWords { budget: 100 };
        let summary = select_summary(&ranking, &doc, mode, ResolvedBudget::Words(100));
        let text = summary.to_text();
        assert_eq!(text.lines().count(), 2);
        assert!(text.ends_with('\n'));
    }
}
