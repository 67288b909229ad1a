use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    barker_probs, metropolis_probs, propose_uniform, AcceptanceDistribution, ProposalSet, SamplerKind,
};
use crate::error::{Error, Result};
use crate::hops::{ensemble_acceptance, HopsObjective};
use crate::measure::LogWeightOracle;

/// Generator for chain `chain_index` under a master seed: ChaCha8 seeded
/// from the master seed, on its own stream.
pub fn chain_rng(seed: u64, chain_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chain_index);
    rng
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainState {
    pub current: usize,
    pub step: u64,
    pub rng: ChaCha8Rng,
    /// Log-weight of `current`, carried so each step costs `d` evaluations.
    current_log_weight: f64,
}

impl ChainState {
    pub fn new<O: LogWeightOracle + ?Sized>(oracle: &O, initial: usize, rng: ChaCha8Rng) -> Result<Self> {
        let n = oracle.n_states();
        if initial >= n {
            return Err(Error::IndexOutOfRange(format!(
                "initial state {} of {n}",
                initial + 1
            )));
        }
        Ok(Self {
            current: initial,
            step: 0,
            rng,
            current_log_weight: oracle.log_weight(initial),
        })
    }

    pub fn current_log_weight(&self) -> f64 {
        self.current_log_weight
    }
}

/// Acceptance distribution over the sorted proposals `j` from `current`,
/// given the log-weights of the current state and of each proposal.
///
/// Shared by the chain driver and the expected-kernel enumeration.
pub fn acceptance_for(
    kind: SamplerKind,
    current: usize,
    current_log_weight: f64,
    j: &ProposalSet,
    proposal_log_weights: &[f64],
    objective: HopsObjective,
) -> Result<AcceptanceDistribution> {
    kind.check_size(j.len())?;
    let mut r = Vec::with_capacity(j.len());
    for (&state, &lw) in j.indices().iter().zip(proposal_log_weights) {
        let log_ratio = lw - current_log_weight;
        let v = log_ratio.exp();
        if v.is_infinite() {
            return Err(Error::RatioOverflow {
                state: state + 1,
                log_ratio,
            });
        }
        r.push(v);
    }
    match kind {
        SamplerKind::Barker | SamplerKind::Hobs => barker_probs(&r),
        SamplerKind::Metropolis | SamplerKind::Homs => metropolis_probs(&r),
        SamplerKind::Hops => {
            super::acceptance_check_ratios(&r)?;
            let pos = j.indices().partition_point(|&i| i < current);
            let mut log_w = Vec::with_capacity(j.len() + 1);
            log_w.extend_from_slice(&proposal_log_weights[..pos]);
            log_w.push(current_log_weight);
            log_w.extend_from_slice(&proposal_log_weights[pos..]);
            let full = ensemble_acceptance(&log_w, pos, objective)?;
            Ok(full)
        }
    }
}

/// One propose-accept step: `d` proposals, `d` oracle evaluations, one
/// uniform draw for the accept decision.
pub fn chain_step<O: LogWeightOracle + ?Sized>(
    state: &mut ChainState,
    oracle: &O,
    kind: SamplerKind,
    d: usize,
    objective: HopsObjective,
) -> Result<()> {
    kind.check_size(d)?;
    let n = oracle.n_states();
    let j = propose_uniform(&mut state.rng, n, state.current, d)?;
    let lw: Vec<f64> = j.indices().iter().map(|&i| oracle.log_weight(i)).collect();
    let dist = acceptance_for(kind, state.current, state.current_log_weight, &j, &lw, objective)
        .map_err(|e| annotate(e, state))?;
    let u: f64 = state.rng.random();
    if let Some(pos) = dist.sample(u) {
        state.current = j.indices()[pos];
        state.current_log_weight = lw[pos];
    }
    state.step += 1;
    Ok(())
}

fn annotate(e: Error, state: &ChainState) -> Error {
    match e {
        Error::LpFailure(msg) => Error::LpFailure(format!(
            "step {} from state {}: {msg}",
            state.step,
            state.current + 1
        )),
        Error::MembershipViolation(msg) => Error::MembershipViolation(format!(
            "step {} from state {}: {msg}",
            state.step,
            state.current + 1
        )),
        other => other,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainConfig {
    pub steps: usize,
    pub d: usize,
    pub kind: SamplerKind,
    pub seed: u64,
    pub chain_index: u64,
    pub initial: usize,
    pub objective: HopsObjective,
}

impl ChainConfig {
    pub fn new(kind: SamplerKind, d: usize, steps: usize, seed: u64) -> Self {
        Self {
            steps,
            d,
            kind,
            seed,
            chain_index: 0,
            initial: 0,
            objective: HopsObjective::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainRun {
    /// `steps + 1` states, starting with the initial one.
    pub trajectory: Vec<usize>,
    /// Oracle evaluations made by proposals, `d * steps`.
    pub evaluations: u64,
}

pub fn run_chain<O: LogWeightOracle + ?Sized>(oracle: &O, config: &ChainConfig) -> Result<ChainRun> {
    config.kind.check_size(config.d)?;
    let n = oracle.n_states();
    if config.d >= n {
        return Err(Error::InvalidProposal(format!(
            "d={} with only {n} states",
            config.d
        )));
    }
    let rng = chain_rng(config.seed, config.chain_index);
    let mut state = ChainState::new(oracle, config.initial, rng)?;
    let mut trajectory = Vec::with_capacity(config.steps + 1);
    trajectory.push(state.current);
    let mut evaluations = 0u64;
    for _ in 0..config.steps {
        chain_step(&mut state, oracle, config.kind, config.d, config.objective)?;
        evaluations += config.d as u64;
        trajectory.push(state.current);
    }
    Ok(ChainRun {
        trajectory,
        evaluations,
    })
}
