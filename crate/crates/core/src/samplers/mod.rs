//! Acceptance rules and the relabel-propose-accept chain driver.
//!
//! The relabeling that moves the current state to the last index is never
//! materialized during a chain: ratios are taken against the current state
//! directly. Full matrices are built only on verification paths.

mod acceptance;
mod chain;
mod proposal;

pub(crate) use acceptance::check_ratios as acceptance_check_ratios;
pub use acceptance::{
    barker_matrix, barker_matrix_with_omega, barker_probs, metropolis_matrix, metropolis_matrix_with_omega,
    metropolis_probs, AcceptanceDistribution,
};
pub use chain::{acceptance_for, chain_rng, chain_step, run_chain, ChainConfig, ChainRun, ChainState};
pub use proposal::{propose_uniform, ProposalSet};

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Which acceptance rule a chain uses. `Barker` and `Metropolis` are the
/// single-proposal (`d = 1`) cases of `Hobs` and `Homs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SamplerKind {
    Barker,
    Metropolis,
    Hobs,
    Homs,
    Hops,
}

impl SamplerKind {
    pub const ALL: [SamplerKind; 5] = [
        SamplerKind::Barker,
        SamplerKind::Metropolis,
        SamplerKind::Hobs,
        SamplerKind::Homs,
        SamplerKind::Hops,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SamplerKind::Barker => "barker",
            SamplerKind::Metropolis => "metropolis",
            SamplerKind::Hobs => "hobs",
            SamplerKind::Homs => "homs",
            SamplerKind::Hops => "hops",
        }
    }

    /// Checks that `d` is a legal proposal-set size for this rule.
    pub fn check_size(&self, d: usize) -> Result<(), Error> {
        match self {
            SamplerKind::Barker | SamplerKind::Metropolis if d != 1 => Err(Error::InvalidProposal(format!(
                "{} takes exactly one proposal, got d={d}",
                self.name()
            ))),
            _ if d == 0 => Err(Error::InvalidProposal("d must be >= 1".into())),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SamplerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SamplerKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown sampler '{s}'")))
    }
}
