//! Shared fixtures for the CLI and acceptance suites: a synthetic corpus with
//! orthogonal word families, a generative sampler for the alignment model,
//! and an exhaustive decoding oracle.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use talkalign::corpus::{PaperDocument, StateSpace, Transcript, TranscriptToken};
use talkalign::embeddings::{emission_score, EmbeddingTable, SimilarityKind};
use talkalign::hmm::{EmissionMatrix, TransitionModel};

pub const FAMILY_DIM: usize = 8;
pub const MAX_FAMILIES: usize = 16;
pub const WORDS_PER_FAMILY: usize = 6;

/// Word `i` of family `j`.
pub fn family_word(family: usize, word: usize) -> String {
    format!("f{family}w{word}")
}

/// Embedding lines for the orthogonal family geometry: families 0..8 sit on
/// +e_j, families 8..16 on -e_(j-8), so distinct families have cosine 0 or -1.
pub fn family_embedding_lines() -> String {
    let mut lines = String::new();
    for family in 0..MAX_FAMILIES {
        let axis = family % FAMILY_DIM;
        let sign = if family < FAMILY_DIM { "1" } else { "-1" };
        for word in 0..WORDS_PER_FAMILY {
            let components: Vec<&str> = (0..FAMILY_DIM)
                .map(|d| if d == axis { sign } else { "0" })
                .collect();
            lines.push_str(&format!(
                "{} {}\n",
                family_word(family, word),
                components.join(" ")
            ));
        }
    }
    lines
}

/// Paper JSON with all five section roles. Each eligible sentence (3
/// introduction + `body_sentences` method) owns one word family.
pub fn fixture_paper_json(body_sentences: usize) -> String {
    assert!(3 + body_sentences <= MAX_FAMILIES);
    let eligible_sentence = |position: usize| -> String {
        let words: Vec<String> = (0..WORDS_PER_FAMILY)
            .map(|w| family_word(position, w))
            .collect();
        format!("{} under discussion here", words.join(" "))
    };
    let intro: Vec<String> = (0..3).map(eligible_sentence).collect();
    let body: Vec<String> = (3..3 + body_sentences).map(eligible_sentence).collect();
    serde_json::json!({
        "title": "Synthetic fixture paper",
        "sections": [
            { "name": "Abstract", "sentences": [
                "This paper studies alignment of recorded talks to their papers.",
                "A decoding model recovers which sentence each spoken word describes.",
            ]},
            { "name": "1 Introduction", "sentences": intro },
            { "name": "2 Related Work", "sentences": [
                "Earlier systems matched slides to documents with heuristics.",
                "Other work aligned captions to cooking recipes step by step.",
            ]},
            { "name": "3 Method", "sentences": body },
            { "name": "Acknowledgments", "sentences": [
                "We thank the reviewers for their careful comments.",
            ]},
        ]
    })
    .to_string()
}

/// Transcript walking through the eligible sentences in order, `tokens_each`
/// family tokens per sentence, with stopword and out-of-vocabulary chatter
/// sprinkled in.
pub fn fixture_transcript(eligible: usize, tokens_each: usize, rng: &mut ChaCha8Rng) -> String {
    let mut words = Vec::new();
    for position in 0..eligible {
        if position % 2 == 0 {
            words.push("so".to_string()); // stopword, removed at parse
        }
        for i in 0..tokens_each {
            let pick = if rng.random_bool(0.5) {
                i % WORDS_PER_FAMILY
            } else {
                rng.random_range(0..WORDS_PER_FAMILY)
            };
            words.push(family_word(position, pick));
        }
        if position % 3 == 0 {
            words.push(format!("chatter{position}")); // no vector, dropped later
        }
    }
    words.join(" ")
}

/// Write a corpus of `n_docs` paper/transcript pairs plus the shared
/// embedding file and a config; returns (embeddings path, config path).
pub fn write_fixture_corpus(
    dir: &Path,
    n_docs: usize,
    seed: u64,
) -> (std::path::PathBuf, std::path::PathBuf) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for doc in 0..n_docs {
        let body_sentences = rng.random_range(9..=12);
        let paper = fixture_paper_json(body_sentences);
        let transcript = fixture_transcript(3 + body_sentences, 20, &mut rng);
        fs::write(dir.join(format!("doc{doc}.paper.json")), paper).unwrap();
        fs::write(dir.join(format!("doc{doc}.transcript.txt")), transcript).unwrap();
    }
    let embeddings = dir.join("embeddings.txt");
    fs::write(&embeddings, family_embedding_lines()).unwrap();
    let config = dir.join("config.json");
    fs::write(
        &config,
        serde_json::json!({
            "similarity_kind": "clamped_cosine",
            "budget_modes": [
                { "kind": "fixed_words", "budget": 40 },
                { "kind": "fixed_words", "budget": 80 },
                { "kind": "ratio", "ratio": 0.3 },
                { "kind": "ratio", "ratio": 0.4 },
                { "kind": "top_n", "n": 5 },
            ],
        })
        .to_string(),
    )
    .unwrap();
    (embeddings, config)
}

/// Snapshot of a directory as file name -> bytes.
pub fn dir_snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut snapshot = BTreeMap::new();
    for entry in fs::read_dir(dir).unwrap() {
        let entry = entry.unwrap();
        if entry.file_type().unwrap().is_file() {
            snapshot.insert(
                entry.file_name().to_string_lossy().into_owned(),
                fs::read(entry.path()).unwrap(),
            );
        }
    }
    snapshot
}

/// Draw an index from explicit probabilities.
fn sample_index(probs: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let total: f64 = probs.iter().sum();
    let mut point = rng.random_range(0.0..total);
    for (idx, &p) in probs.iter().enumerate() {
        if point < p {
            return idx;
        }
        point -= p;
    }
    probs.len() - 1
}

/// A talk sampled from the alignment model's own generative process.
pub struct SampledTalk {
    pub states: Vec<usize>,
    pub transcript: Transcript,
}

/// Sample `t_len` tokens: start uniformly over the introduction states, walk
/// the transition rows, emit words with probability proportional to their
/// emission score against the current sentence (over the whole table
/// vocabulary).
pub fn sample_talk(
    doc: &PaperDocument,
    space: &StateSpace,
    table: &EmbeddingTable,
    similarity: SimilarityKind,
    transitions: &TransitionModel,
    t_len: usize,
    rng: &mut ChaCha8Rng,
) -> SampledTalk {
    let mut vocab: Vec<&str> = table.words().collect();
    vocab.sort_unstable();
    let sentences: Vec<_> = doc.sentences().collect();
    let emission_probs: Vec<Vec<f64>> = space
        .states
        .iter()
        .map(|&id| {
            vocab
                .iter()
                .map(|word| emission_score(table, similarity, word, sentences[id]))
                .collect()
        })
        .collect();
    let transition_rows: Vec<Vec<f64>> = (0..space.len())
        .map(|from| transitions.row(from))
        .collect();

    let mut states = Vec::with_capacity(t_len);
    let mut tokens = Vec::with_capacity(t_len);
    let start = space.intro_states[rng.random_range(0..space.intro_states.len())];
    let mut state = start;
    for position in 0..t_len {
        states.push(state);
        let word = vocab[sample_index(&emission_probs[state], rng)];
        tokens.push(TranscriptToken {
            surface: word.to_string(),
            position,
        });
        state = sample_index(&transition_rows[state], rng);
    }
    SampledTalk {
        states,
        transcript: Transcript { tokens },
    }
}

/// Exhaustive MAP search with the decoders' score association. Position 0 is
/// the fastest enumeration digit, so keeping the first maximum reproduces the
/// decoders' tie-break (reverse-lexicographically smallest optimal path).
pub fn enumerate_map(
    emissions: &EmissionMatrix,
    transitions: &TransitionModel,
    start: &[f64],
    obs: &[usize],
    k: usize,
) -> (Vec<usize>, f64) {
    let t = obs.len();
    let mut best: Option<(Vec<usize>, f64)> = None;
    let mut path = vec![0usize; t];
    loop {
        let mut score = start[path[0]] + emissions.log_prob(path[0], obs[0]);
        for step in 1..t {
            score = score + transitions.log_prob(path[step - 1], path[step]);
            score = score + emissions.log_prob(path[step], obs[step]);
        }
        match &best {
            Some((_, b)) if *b >= score => {}
            _ => best = Some((path.clone(), score)),
        }
        let mut idx = 0;
        loop {
            if idx == t {
                return best.unwrap();
            }
            path[idx] += 1;
            if path[idx] < k {
                break;
            }
            path[idx] = 0;
            idx += 1;
        }
    }
}

/// Random decoding instance used by the oracle and equivalence suites.
pub struct RandomInstance {
    pub space: StateSpace,
    pub transcript: Transcript,
    pub emissions: EmissionMatrix,
    pub transitions: TransitionModel,
    pub start: Vec<f64>,
}

pub fn random_instance(k: usize, t: usize, v: usize, rng: &mut ChaCha8Rng) -> RandomInstance {
    let intro_len = rng.random_range(1..=k);
    let mut intro: Vec<usize> = (0..k).collect();
    for i in (1..k).rev() {
        let j = rng.random_range(0..=i);
        intro.swap(i, j);
    }
    let mut intro: Vec<usize> = intro.into_iter().take(intro_len).collect();
    intro.sort_unstable();
    let space = StateSpace {
        states: (0..k).collect(),
        intro_states: intro,
    };

    let types: Vec<String> = (0..v).map(|i| format!("w{i}")).collect();
    let rows: Vec<Vec<f64>> = (0..k)
        .map(|_| {
            let raw: Vec<f64> = (0..v).map(|_| rng.random_range(0.05..1.0)).collect();
            let total: f64 = raw.iter().sum();
            raw.into_iter().map(|x| (x / total).ln()).collect()
        })
        .collect();
    let emissions = EmissionMatrix::from_log_rows(rows, types);

    let tokens = (0..t)
        .map(|position| TranscriptToken {
            surface: format!("w{}", rng.random_range(0..v)),
            position,
        })
        .collect();
    let transcript = Transcript { tokens };

    let params = if rng.random_bool(0.25) {
        talkalign::hmm::HmmParams {
            alpha_override: Some(rng.random_range(0.05..0.95)),
            ..talkalign::hmm::HmmParams::default()
        }
    } else {
        talkalign::hmm::HmmParams::default()
    };
    let transitions = TransitionModel::build(&space, t, &params);
    let start = talkalign::hmm::start_log_distribution(&space);
    RandomInstance {
        space,
        transcript,
        emissions,
        transitions,
        start,
    }
}
