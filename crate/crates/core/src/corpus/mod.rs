//! Ingestion and structuring of paper text and talk transcripts.
//!
//! A paper arrives as sectioned, sentence-split JSON; a transcript as plain
//! text or a word-list JSON. Both are cleaned and tokenized here, and the
//! eligible hidden states for alignment (every sentence outside the Abstract,
//! Related Work and Acknowledgments sections) are collected into a
//! [`StateSpace`].

mod stopwords;

pub use stopwords::{is_stopword, STOPWORDS};

use serde::Deserialize;

use crate::error::{json_parse_error, Error, Result};

/// Role a section plays in the document, derived from its name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SectionRole {
    Abstract,
    Introduction,
    RelatedWork,
    Acknowledgments,
    Body,
}

impl SectionRole {
    /// Case-insensitive substring match on the section name; first rule wins,
    /// anything unrecognized is body text.
    pub fn from_name(name: &str) -> Self {
        let lower = name.to_lowercase();
        if lower.contains("abstract") {
            SectionRole::Abstract
        } else if lower.contains("introduction") {
            SectionRole::Introduction
        } else if lower.contains("related work") {
            SectionRole::RelatedWork
        } else if lower.contains("acknowledg") {
            SectionRole::Acknowledgments
        } else {
            SectionRole::Body
        }
    }

    /// Sections excluded from the hidden-state space.
    pub fn excluded_from_states(self) -> bool {
        matches!(
            self,
            SectionRole::Abstract | SectionRole::RelatedWork | SectionRole::Acknowledgments
        )
    }
}

/// A single paper sentence with its document-wide id.
#[derive(Debug, Clone, PartialEq)]
pub struct Sentence {
    /// Dense index in document order.
    pub id: usize,
    pub text: String,
    /// Lowercase tokens produced by [`tokenize`].
    pub tokens: Vec<String>,
    /// Raw whitespace word count of `text` (summary budgets count these).
    pub word_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub name: String,
    pub role: SectionRole,
    pub sentences: Vec<Sentence>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PaperDocument {
    pub title: String,
    pub sections: Vec<Section>,
}

impl PaperDocument {
    pub fn sentence_count(&self) -> usize {
        self.sections.iter().map(|s| s.sentences.len()).sum()
    }

    /// All sentences in document order; index equals sentence id.
    pub fn sentences(&self) -> impl Iterator<Item = &Sentence> {
        self.sections.iter().flat_map(|s| s.sentences.iter())
    }

    pub fn sentence(&self, id: usize) -> Option<&Sentence> {
        self.sentences().nth(id)
    }

    /// Role of the section containing the given sentence id.
    pub fn role_of(&self, id: usize) -> Option<SectionRole> {
        let mut offset = 0;
        for section in &self.sections {
            offset += section.sentences.len();
            if id < offset {
                return Some(section.role);
            }
        }
        None
    }

    fn renumber(&mut self) {
        let mut next = 0;
        for section in &mut self.sections {
            for sentence in &mut section.sentences {
                sentence.id = next;
                next += 1;
            }
        }
    }
}

/// The HMM's hidden states: eligible sentence ids in document order, plus the
/// positions that may start a path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSpace {
    /// Sentence ids of the eligible states, in document order.
    pub states: Vec<usize>,
    /// Positions (indices into `states`) of introduction sentences.
    pub intro_states: Vec<usize>,
}

impl StateSpace {
    /// Number of hidden states K.
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Sentence id behind a state position.
    pub fn sentence_id(&self, position: usize) -> usize {
        self.states[position]
    }

    /// Total raw word count of the eligible sentences (the paper length used
    /// by ratio budgets).
    pub fn eligible_word_count(&self, doc: &PaperDocument) -> usize {
        let by_id: Vec<&Sentence> = doc.sentences().collect();
        self.states.iter().map(|&id| by_id[id].word_count).sum()
    }
}

/// One cleaned transcript token and the whitespace-group index it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranscriptToken {
    pub surface: String,
    pub position: usize,
}

/// Ordered token stream of the spoken talk after cleaning.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Transcript {
    pub tokens: Vec<TranscriptToken>,
}

impl Transcript {
    /// Token count T.
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn surfaces(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|t| t.surface.as_str())
    }
}

/// Lowercase a string and split it into tokens. Unicode letters, digits and
/// apostrophes are token characters; everything else separates. Edge
/// apostrophes are trimmed.
pub fn tokenize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !(c.is_alphanumeric() || c == '\''))
        .map(|t| t.trim_matches('\''))
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}

/// Clean one whitespace group of a transcript: lowercase, keep only letters,
/// digits and apostrophes, trim edge apostrophes. Returns None when nothing
/// survives.
fn clean_transcript_group(group: &str) -> Option<String> {
    let cleaned: String = group
        .to_lowercase()
        .chars()
        .filter(|&c| c.is_alphanumeric() || c == '\'')
        .collect();
    let cleaned = cleaned.trim_matches('\'');
    if cleaned.is_empty() {
        None
    } else {
        Some(cleaned.to_string())
    }
}

/// Fallback sentence splitter for sections that arrive as raw text: split
/// after `.`, `?` or `!` followed by whitespace and an uppercase letter.
pub fn split_sentences(text: &str) -> Vec<String> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut start = 0;
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if matches!(c, '.' | '?' | '!') {
            let mut j = i + 1;
            while j < chars.len() && chars[j].1.is_whitespace() {
                j += 1;
            }
            if j > i + 1 && j < chars.len() && chars[j].1.is_uppercase() {
                let piece = text[start..pos + c.len_utf8()].trim();
                if !piece.is_empty() {
                    out.push(piece.to_string());
                }
                start = chars[j].0;
                i = j;
                continue;
            }
        }
        i += 1;
    }
    let tail = text[start..].trim();
    if !tail.is_empty() {
        out.push(tail.to_string());
    }
    out
}

#[derive(Deserialize)]
struct RawPaper {
    #[serde(default)]
    title: String,
    sections: Vec<RawSection>,
}

#[derive(Deserialize)]
struct RawSection {
    name: String,
    #[serde(default)]
    sentences: Vec<String>,
    /// Raw-text alternative to `sentences`, split with [`split_sentences`].
    #[serde(default)]
    text: Option<String>,
}

fn make_sentence(id: usize, text: String) -> Sentence {
    let tokens = tokenize(&text);
    let word_count = text.split_whitespace().count();
    Sentence {
        id,
        text,
        tokens,
        word_count,
    }
}

/// Parse a paper from its JSON form. Sections keep file order, sentence ids
/// are assigned densely, roles are derived from section names.
pub fn parse_paper(input: &str) -> Result<PaperDocument> {
    let raw: RawPaper =
        serde_json::from_str(input).map_err(|e| json_parse_error(input, &e))?;
    let mut next_id = 0;
    let mut sections = Vec::with_capacity(raw.sections.len());
    for raw_section in raw.sections {
        let texts = if !raw_section.sentences.is_empty() {
            raw_section.sentences
        } else if let Some(text) = &raw_section.text {
            split_sentences(text)
        } else {
            Vec::new()
        };
        let sentences = texts
            .into_iter()
            .map(|t| {
                let s = make_sentence(next_id, t);
                next_id += 1;
                s
            })
            .collect();
        sections.push(Section {
            role: SectionRole::from_name(&raw_section.name),
            name: raw_section.name,
            sentences,
        });
    }
    let doc = PaperDocument {
        title: raw.title,
        sections,
    };
    if doc.sentence_count() == 0 {
        return Err(Error::EmptyDocument);
    }
    Ok(doc)
}

const MIN_SENTENCE_TOKENS: usize = 3;

/// Drop noise sentences: anything starting with "Copyright" (case-insensitive,
/// after leading whitespace) and fragments shorter than three tokens. Ids are
/// re-densified afterwards.
pub fn clean_paper(mut doc: PaperDocument) -> PaperDocument {
    for section in &mut doc.sections {
        section.sentences.retain(|s| {
            let trimmed = s.text.trim_start();
            let is_copyright = trimmed
                .get(..9)
                .is_some_and(|p| p.eq_ignore_ascii_case("copyright"));
            !is_copyright && s.tokens.len() >= MIN_SENTENCE_TOKENS
        });
    }
    doc.renumber();
    doc
}

/// Collect the eligible hidden states of a cleaned document.
///
/// Abstract, Related Work and Acknowledgments sentences are excluded. The
/// start states are the introduction sentences; when a document has none, the
/// first non-excluded section with sentences stands in.
pub fn build_state_space(doc: &PaperDocument) -> Result<StateSpace> {
    let mut states = Vec::new();
    let mut intro_states = Vec::new();
    let mut fallback: Option<(usize, Vec<usize>)> = None; // (section index, positions)
    for (section_idx, section) in doc.sections.iter().enumerate() {
        if section.role.excluded_from_states() {
            continue;
        }
        let mut positions = Vec::with_capacity(section.sentences.len());
        for sentence in &section.sentences {
            positions.push(states.len());
            states.push(sentence.id);
        }
        if section.role == SectionRole::Introduction {
            intro_states.extend_from_slice(&positions);
        } else if fallback.is_none() && !positions.is_empty() {
            fallback = Some((section_idx, positions));
        }
    }
    if states.is_empty() {
        return Err(Error::EmptyStateSpace);
    }
    if intro_states.is_empty() {
        intro_states = fallback.map(|(_, p)| p).unwrap_or_default();
    }
    debug_assert!(!intro_states.is_empty());
    Ok(StateSpace {
        states,
        intro_states,
    })
}

#[derive(Deserialize)]
struct RawTranscript {
    words: Vec<RawWord>,
}

#[derive(Deserialize)]
struct RawWord {
    w: String,
    /// Timestamp; parsed but unused by alignment.
    #[serde(default)]
    #[allow(dead_code)]
    t: Option<f64>,
}

/// Parse a transcript from plain text or from the word-list JSON form
/// (detected by a leading `{`). Tokens are cleaned per whitespace group;
/// positions index the original groups.
pub fn parse_transcript(input: &str, remove_stopwords: bool) -> Result<Transcript> {
    let groups: Vec<String> = if input.trim_start().starts_with('{') {
        let raw: RawTranscript =
            serde_json::from_str(input).map_err(|e| json_parse_error(input, &e))?;
        raw.words.into_iter().map(|w| w.w).collect()
    } else {
        input.split_whitespace().map(str::to_string).collect()
    };
    let mut tokens = Vec::new();
    for (position, group) in groups.iter().enumerate() {
        let Some(surface) = clean_transcript_group(group) else {
            continue;
        };
        if remove_stopwords && is_stopword(&surface) {
            continue;
        }
        tokens.push(TranscriptToken { surface, position });
    }
    if tokens.is_empty() {
        return Err(Error::EmptyTranscript);
    }
    Ok(Transcript { tokens })
}
