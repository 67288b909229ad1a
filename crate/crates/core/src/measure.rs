//! Target measures, log-weight oracles, and the current-state relabeling.
//!
//! Indices are 0-based throughout the library. The relabeling convention
//! moves the current state to the last index `n - 1` (the 1-based state `n`).

use crate::error::{Error, Result};
use crate::samplers::ProposalSet;

/// Sum-to-one tolerance for a [`ProbabilityMeasure`].
pub const MEASURE_TOL: f64 = 1e-12;

/// A normalized, entrywise nonnegative weight vector over `n >= 2` states.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityMeasure {
    weights: Vec<f64>,
}

impl ProbabilityMeasure {
    /// Rescales nonnegative weights to sum to one.
    pub fn normalize(weights: &[f64]) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::InvalidMeasure(format!(
                "need at least 2 states, got {}",
                weights.len()
            )));
        }
        if let Some(i) = weights.iter().position(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidMeasure(format!(
                "entry {} is {} (must be finite and >= 0)",
                i + 1,
                weights[i]
            )));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidMeasure("all weights are zero".into()));
        }
        Ok(Self {
            weights: weights.iter().map(|w| w / total).collect(),
        })
    }

    /// Accepts an already-normalized vector, checking the invariants.
    pub fn from_probabilities(probs: Vec<f64>) -> Result<Self> {
        let m = Self::normalize(&probs)?;
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > MEASURE_TOL {
            return Err(Error::InvalidMeasure(format!("entries sum to {total}, not 1")));
        }
        Ok(m)
    }

    /// Normalizes `exp(log_weights)` with a log-sum-exp shift.
    pub fn from_log_weights(log_weights: &[f64]) -> Result<Self> {
        let max = log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !max.is_finite() {
            return Err(Error::InvalidMeasure("log-weights have no finite maximum".into()));
        }
        let shifted: Vec<f64> = log_weights.iter().map(|l| (l - max).exp()).collect();
        Self::normalize(&shifted)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn get(&self, i: usize) -> f64 {
        self.weights[i]
    }

    /// Point mass at `state`.
    pub fn dirac(n: usize, state: usize) -> Result<Self> {
        if state >= n {
            return Err(Error::IndexOutOfRange(format!("state {} of {}", state + 1, n)));
        }
        let mut w = vec![0.0; n];
        w[state] = 1.0;
        Self::normalize(&w)
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::normalize(&vec![1.0; n])
    }

    /// Ratios `p_j / p_n` for `j < n - 1`.
    pub fn ratios_to_last(&self) -> Vec<f64> {
        let last = self.weights[self.weights.len() - 1];
        self.weights[..self.weights.len() - 1]
            .iter()
            .map(|w| w / last)
            .collect()
    }
}

/// State-index to natural-log weight, defined up to a shared additive
/// constant. Implementations must be pure so chains can share them.
pub trait LogWeightOracle: Sync {
    fn n_states(&self) -> usize;
    fn log_weight(&self, state: usize) -> f64;
}

/// Tabulated log-weights.
#[derive(Debug, Clone, PartialEq)]
pub struct LogWeights(pub Vec<f64>);

impl LogWeights {
    pub fn from_measure(p: &ProbabilityMeasure) -> Self {
        LogWeights(p.as_slice().iter().map(|w| w.ln()).collect())
    }

    /// Tabulates any oracle.
    pub fn tabulate<O: LogWeightOracle + ?Sized>(oracle: &O) -> Self {
        LogWeights((0..oracle.n_states()).map(|s| oracle.log_weight(s)).collect())
    }
}

impl LogWeightOracle for LogWeights {
    fn n_states(&self) -> usize {
        self.0.len()
    }

    fn log_weight(&self, state: usize) -> f64 {
        self.0[state]
    }
}

impl<O: LogWeightOracle + ?Sized> LogWeightOracle for &O {
    fn n_states(&self) -> usize {
        (**self).n_states()
    }

    fn log_weight(&self, state: usize) -> f64 {
        (**self).log_weight(state)
    }
}

/// The transposition swapping the current state with the last index.
///
/// 0-based: `current` maps to `n - 1`, `n - 1` maps to `current`, all other
/// indices are fixed. The 1-based user-facing state `c` is index `c - 1` here.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelabelView {
    current: usize,
    n: usize,
}

impl RelabelView {
    pub fn new(current: usize, n: usize) -> Result<Self> {
        if current >= n {
            return Err(Error::IndexOutOfRange(format!(
                "current state {} of {}",
                current + 1,
                n
            )));
        }
        Ok(Self { current, n })
    }

    pub fn current(&self) -> usize {
        self.current
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Applies the transposition. It is its own inverse.
    pub fn map(&self, i: usize) -> usize {
        let last = self.n - 1;
        if i == self.current {
            last
        } else if i == last {
            self.current
        } else {
            i
        }
    }
}

/// Likelihood ratios `exp(logw(j_u) - logw(current))` for each proposal.
///
/// Differences are taken before exponentiating so that shifting every
/// log-weight by a constant leaves the result unchanged. A ratio can still
/// overflow to `+inf`; samplers reject that with [`Error::RatioOverflow`].
pub fn ratios_for<O: LogWeightOracle + ?Sized>(
    oracle: &O,
    current: usize,
    proposals: &ProposalSet,
) -> Result<Vec<f64>> {
    let n = oracle.n_states();
    if current >= n {
        return Err(Error::IndexOutOfRange(format!(
            "current state {} of {}",
            current + 1,
            n
        )));
    }
    if proposals.contains(current) {
        return Err(Error::InvalidProposal(format!(
            "current state {} is among the proposals",
            current + 1
        )));
    }
    if let Some(&bad) = proposals.indices().iter().find(|&&j| j >= n) {
        return Err(Error::IndexOutOfRange(format!("proposal {} of {}", bad + 1, n)));
    }
    let base = oracle.log_weight(current);
    Ok(proposals
        .indices()
        .iter()
        .map(|&j| (oracle.log_weight(j) - base).exp())
        .collect())
}
