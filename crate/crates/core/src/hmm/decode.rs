use std::collections::BTreeMap;

use super::emission::EmissionMatrix;
use super::transition::TransitionModel;
use crate::corpus::{StateSpace, Transcript};

/// MAP decoding output: the state path, its log probability, and per-sentence
/// time-step counts.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentResult {
    /// State position per time step, length T.
    pub path: Vec<usize>,
    /// Log probability of the MAP path.
    pub log_prob: f64,
    /// Sentence id -> number of time steps spent on it.
    pub counts: BTreeMap<usize, usize>,
    /// Transcript tokens dropped before decoding for lack of a vector.
    pub dropped_oov: usize,
}

fn check_dimensions(
    emissions: &EmissionMatrix,
    transitions: &TransitionModel,
    start: &[f64],
    state_space: &StateSpace,
    transcript: &Transcript,
) {
    let k = state_space.len();
    assert!(k >= 1, "empty state space");
    assert!(!transcript.is_empty(), "empty transcript");
    assert_eq!(emissions.k_states(), k, "emission/state-space mismatch");
    assert_eq!(transitions.k_states(), k, "transition/state-space mismatch");
    assert_eq!(start.len(), k, "start distribution length mismatch");
}

fn backtrack(
    delta_last: &[f64],
    psi: &[u32],
    k: usize,
    t: usize,
    state_space: &StateSpace,
    dropped_oov: usize,
) -> AlignmentResult {
    let mut best_state = 0;
    let mut best_val = delta_last[0];
    for (state, &val) in delta_last.iter().enumerate().skip(1) {
        if val > best_val {
            best_val = val;
            best_state = state;
        }
    }
    let mut path = vec![0usize; t];
    path[t - 1] = best_state;
    for step in (0..t - 1).rev() {
        path[step] = psi[(step + 1) * k + path[step + 1]] as usize;
    }
    let mut counts = BTreeMap::new();
    for &position in &path {
        *counts.entry(state_space.sentence_id(position)).or_insert(0) += 1;
    }
    AlignmentResult {
        path,
        log_prob: best_val,
        counts,
        dropped_oov,
    }
}

/// Reference Viterbi decoder, O(T·K²).
///
/// Ties at every argmax break toward the lowest state index. `path[0]` always
/// lies in the start support because non-start states open at -inf.
pub fn viterbi(
    emissions: &EmissionMatrix,
    transitions: &TransitionModel,
    start: &[f64],
    state_space: &StateSpace,
    transcript: &Transcript,
) -> AlignmentResult {
    check_dimensions(emissions, transitions, start, state_space, transcript);
    let k = state_space.len();
    let obs = emissions.observation_sequence(transcript);
    let t = obs.len();

    let mut prev: Vec<f64> = (0..k)
        .map(|s| start[s] + emissions.log_prob(s, obs[0]))
        .collect();
    let mut cur = vec![0.0_f64; k];
    let mut psi = vec![0u32; t * k];

    for (step, &symbol) in obs.iter().enumerate().skip(1) {
        for dest in 0..k {
            let mut best_src = 0usize;
            let mut best_val = prev[0] + transitions.log_prob(0, dest);
            for (src, &p) in prev.iter().enumerate().skip(1) {
                let cand = p + transitions.log_prob(src, dest);
                if cand > best_val {
                    best_val = cand;
                    best_src = src;
                }
            }
            psi[step * k + dest] = best_src as u32;
            cur[dest] = best_val + emissions.log_prob(dest, symbol);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    backtrack(&prev, &psi, k, t, state_space, 0)
}

/// Fast decoder, O(T·K).
///
/// Because log transition scores are linear in the jump distance, the best
/// forward predecessor of every destination can be tracked with one running
/// maximum over `delta[src] + log beta_src - src·log lambda` (and its mirror
/// for backward moves). The winning candidate's score is then recomputed with
/// the same arithmetic as the reference decoder, so paths, log probabilities
/// and counts come out bit-identical.
pub fn viterbi_fast(
    emissions: &EmissionMatrix,
    transitions: &TransitionModel,
    start: &[f64],
    state_space: &StateSpace,
    transcript: &Transcript,
) -> AlignmentResult {
    check_dimensions(emissions, transitions, start, state_space, transcript);
    let k = state_space.len();
    let obs = emissions.observation_sequence(transcript);
    let t = obs.len();

    let mut prev: Vec<f64> = (0..k)
        .map(|s| start[s] + emissions.log_prob(s, obs[0]))
        .collect();
    let mut cur = vec![0.0_f64; k];
    let mut psi = vec![0u32; t * k];

    let log_lambda = transitions.log_lambda();
    // suffix_best[l] = source with the best backward key among l..K
    let mut suffix_best = vec![(f64::NEG_INFINITY, 0usize); k + 1];

    for (step, &symbol) in obs.iter().enumerate().skip(1) {
        if k >= 2 {
            suffix_best[k] = (f64::NEG_INFINITY, 0);
            for src in (0..k).rev() {
                let key = prev[src] + transitions.log_gamma_beta(src) + src as f64 * log_lambda;
                // lower index wins ties
                suffix_best[src] = if key >= suffix_best[src + 1].0 {
                    (key, src)
                } else {
                    suffix_best[src + 1]
                };
            }
        }

        let mut forward_best: (f64, usize) = (f64::NEG_INFINITY, 0);
        for dest in 0..k {
            // stay candidate; sources below `dest` were folded into
            // forward_best, sources above come from the suffix scan
            let mut best_src = dest;
            let mut best_val = prev[dest] + transitions.log_prob(dest, dest);
            if dest > 0 {
                let (_, src) = forward_best;
                let cand = prev[src] + transitions.log_prob(src, dest);
                // forward source has the lower index: it wins ties
                if cand >= best_val {
                    best_val = cand;
                    best_src = src;
                }
            }
            if dest + 1 < k {
                let (_, src) = suffix_best[dest + 1];
                let cand = prev[src] + transitions.log_prob(src, dest);
                if cand > best_val {
                    best_val = cand;
                    best_src = src;
                }
            }
            psi[step * k + dest] = best_src as u32;
            cur[dest] = best_val + emissions.log_prob(dest, symbol);

            if k >= 2 {
                let key = prev[dest] + transitions.log_beta(dest) - dest as f64 * log_lambda;
                if key > forward_best.0 {
                    forward_best = (key, dest);
                }
            }
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    backtrack(&prev, &psi, k, t, state_space, 0)
}
