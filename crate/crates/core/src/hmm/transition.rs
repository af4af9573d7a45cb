use super::{stay_probability, HmmParams};
use crate::corpus::StateSpace;

/// Transition structure over the hidden states: staying costs `alpha`,
/// moving decays geometrically with distance, and backward moves carry the
/// extra `gamma` penalty. Rows are never materialized; probabilities are
/// computed from the per-state row coefficients.
#[derive(Debug, Clone)]
pub struct TransitionModel {
    k_states: usize,
    alpha: f64,
    log_alpha: f64,
    log_lambda: f64,
    betas: Vec<f64>,
    log_beta: Vec<f64>,
    log_gamma_beta: Vec<f64>,
}

/// Row coefficient `beta` for one state, from the closed form of the row-sum
/// constraint over the forward and backward geometric series.
///
/// `position` is 0-based, so the state has `k_states - 1 - position` forward
/// and `position` backward destinations. Undefined for a single-state model.
pub fn row_coefficient(
    position: usize,
    k_states: usize,
    alpha: f64,
    params: &HmmParams,
) -> f64 {
    assert!(k_states >= 2, "row coefficient needs at least two states");
    assert!(position < k_states);
    let lambda = params.lambda;
    let forward = (k_states - 1 - position) as i32;
    let backward = position as i32;
    (1.0 - alpha) * (1.0 - lambda)
        / ((1.0 - lambda.powi(forward)) + params.gamma * (1.0 - lambda.powi(backward)))
}

impl TransitionModel {
    /// Build the model for a state space and a transcript of length
    /// `transcript_len` (the stay probability depends on both).
    pub fn build(state_space: &StateSpace, transcript_len: usize, params: &HmmParams) -> Self {
        Self::with_k(state_space.len(), transcript_len, params)
    }

    /// As [`build`](Self::build), from the state count alone.
    pub fn with_k(k_states: usize, transcript_len: usize, params: &HmmParams) -> Self {
        assert!(k_states >= 1);
        let alpha = stay_probability(k_states, transcript_len, params);
        let mut betas = Vec::new();
        let mut log_beta = Vec::new();
        let mut log_gamma_beta = Vec::new();
        if k_states >= 2 {
            for position in 0..k_states {
                let beta = row_coefficient(position, k_states, alpha, params);
                betas.push(beta);
                log_beta.push(beta.ln());
                log_gamma_beta.push((params.gamma * beta).ln());
            }
        }
        TransitionModel {
            k_states,
            alpha,
            log_alpha: alpha.ln(),
            log_lambda: params.lambda.ln(),
            betas,
            log_beta,
            log_gamma_beta,
        }
    }

    pub fn k_states(&self) -> usize {
        self.k_states
    }

    /// Stay probability alpha.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Row coefficient for a state position (K >= 2).
    pub fn beta(&self, position: usize) -> f64 {
        self.betas[position]
    }

    pub(crate) fn log_lambda(&self) -> f64 {
        self.log_lambda
    }

    pub(crate) fn log_beta(&self, position: usize) -> f64 {
        self.log_beta[position]
    }

    pub(crate) fn log_gamma_beta(&self, position: usize) -> f64 {
        self.log_gamma_beta[position]
    }

    /// Log transition probability between two state positions. The
    /// single-state model transitions to itself with probability one.
    pub fn log_prob(&self, from: usize, to: usize) -> f64 {
        assert!(
            from < self.k_states && to < self.k_states,
            "transition index out of range"
        );
        if self.k_states == 1 {
            return 0.0;
        }
        if to == from {
            self.log_alpha
        } else if to > from {
            self.log_beta[from] + ((to - from - 1) as f64) * self.log_lambda
        } else {
            self.log_gamma_beta[from] + ((from - to - 1) as f64) * self.log_lambda
        }
    }

    /// Probability-space row, mostly for tests and sampling.
    pub fn row(&self, from: usize) -> Vec<f64> {
        (0..self.k_states)
            .map(|to| self.log_prob(from, to).exp())
            .collect()
    }
}
