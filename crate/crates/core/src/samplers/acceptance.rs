use crate::error::{Error, Result};
use crate::lie::{assemble_a, GeneratorElement};
use crate::samplers::ProposalSet;
use crate::Matrix;

/// Probabilities of moving to each proposal `j_u`, plus staying put.
#[derive(Debug, Clone, PartialEq)]
pub struct AcceptanceDistribution {
    pub move_probs: Vec<f64>,
    pub stay_prob: f64,
}

impl AcceptanceDistribution {
    pub fn total(&self) -> f64 {
        self.move_probs.iter().sum::<f64>() + self.stay_prob
    }

    pub fn min_entry(&self) -> f64 {
        self.move_probs.iter().copied().fold(self.stay_prob, f64::min)
    }

    /// Picks an outcome from a uniform `u` in `[0, 1)`: `Some(position)` for
    /// a move, `None` to stay. Scans proposals left to right, stay last.
    pub fn sample(&self, u: f64) -> Option<usize> {
        let mut acc = 0.0;
        for (pos, &p) in self.move_probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return Some(pos);
            }
        }
        None
    }
}

pub(crate) fn check_ratios(r: &[f64]) -> Result<()> {
    if r.is_empty() {
        return Err(Error::InvalidProposal("empty ratio vector".into()));
    }
    if let Some((i, v)) = r.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::InvalidRatio {
            position: i + 1,
            value: *v,
        });
    }
    Ok(())
}

/// Higher-order Barker rule: `r_u / (1 + sum r)` to move, `1 / (1 + sum r)`
/// to stay.
pub fn barker_probs(r: &[f64]) -> Result<AcceptanceDistribution> {
    check_ratios(r)?;
    let denom = 1.0 + r.iter().sum::<f64>();
    Ok(AcceptanceDistribution {
        move_probs: r.iter().map(|x| x / denom).collect(),
        stay_prob: 1.0 / denom,
    })
}

/// Higher-order Metropolis rule: with `m = min(1, min r)`, move with
/// `r_u / (1 + sum r - m)`. Reduces to `min(1, r)` for a single proposal.
pub fn metropolis_probs(r: &[f64]) -> Result<AcceptanceDistribution> {
    check_ratios(r)?;
    let s: f64 = r.iter().sum();
    let m = r.iter().copied().fold(1.0, f64::min);
    let denom = s + (1.0 - m);
    Ok(AcceptanceDistribution {
        move_probs: r.iter().map(|x| x / denom).collect(),
        stay_prob: 1.0 - s / denom,
    })
}

fn generator(r: &[f64], j: &ProposalSet, omega: f64) -> Result<GeneratorElement> {
    let n = r.len() + 1;
    j.check_excludes_last(n)?;
    let r_j: Vec<f64> = j.indices().iter().map(|&i| r[i]).collect();
    assemble_a(&r_j, omega, j, n)
}

/// Barker matrix `I - A / omega` for ratios `r = p_j / p_n` (length `n - 1`).
pub fn barker_matrix(r: &[f64], j: &ProposalSet) -> Result<Matrix> {
    barker_matrix_with_omega(r, j, 1.0)
}

pub fn barker_matrix_with_omega(r: &[f64], j: &ProposalSet, omega: f64) -> Result<Matrix> {
    let a = generator(r, j, omega)?;
    let n = a.n();
    Ok(Matrix::identity(n, n) - a.into_matrix() / omega)
}

/// Metropolis matrix `I - A / max diag(A)`, a boundary point of the monoid.
pub fn metropolis_matrix(r: &[f64], j: &ProposalSet) -> Result<Matrix> {
    metropolis_matrix_with_omega(r, j, 1.0)
}

/// `omega` must be positive so that `max diag(A)` is the scale of `A`.
pub fn metropolis_matrix_with_omega(r: &[f64], j: &ProposalSet, omega: f64) -> Result<Matrix> {
    if omega.is_nan() || omega <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "metropolis matrix needs omega > 0, got {omega}"
        )));
    }
    let a = generator(r, j, omega)?;
    let n = a.n();
    let max_diag = a.matrix().diagonal().max();
    Ok(Matrix::identity(n, n) - a.into_matrix() / max_diag)
}
