//! Exact checks on transition matrices: membership in the set of stochastic
//! matrices fixing `p`, invariant measures, detailed balance, total
//! variation, and the expected one-step kernel of a sampler.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hops::HopsObjective;
use crate::measure::{LogWeightOracle, LogWeights, ProbabilityMeasure};
use crate::samplers::{acceptance_for, ProposalSet, SamplerKind};
use crate::Matrix;

/// Most proposal subsets enumerated per state by [`expected_kernel`].
pub const MAX_SUBSETS_PER_STATE: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct MembershipReport {
    pub is_row_stochastic: bool,
    /// `max_i |sum_j P_ij - 1|`.
    pub row_sum_violation: f64,
    pub fixes_p: bool,
    /// `|pP - p|_inf`.
    pub stationarity_violation: f64,
    pub min_entry: f64,
    /// First failed condition, if any.
    pub violated: Option<String>,
}

impl MembershipReport {
    pub fn is_member(&self) -> bool {
        self.violated.is_none()
    }
}

pub fn check_membership(p_mat: &Matrix, p: &ProbabilityMeasure, tol: f64) -> Result<MembershipReport> {
    let n = p.len();
    if p_mat.nrows() != n || p_mat.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix against a measure on {n} states",
            p_mat.nrows(),
            p_mat.ncols()
        )));
    }
    let row_sum_violation = p_mat
        .row_iter()
        .map(|row| (row.sum() - 1.0).abs())
        .fold(0.0, f64::max);
    let min_entry = p_mat.min();
    let stationarity_violation = (0..n)
        .map(|k| {
            let v: f64 = (0..n).map(|i| p.get(i) * p_mat[(i, k)]).sum();
            (v - p.get(k)).abs()
        })
        .fold(0.0, f64::max);
    let is_row_stochastic = row_sum_violation <= tol && min_entry >= -tol;
    let fixes_p = stationarity_violation <= tol;
    let violated = if row_sum_violation > tol {
        Some(format!("row sums deviate from 1 by {row_sum_violation:e}"))
    } else if min_entry < -tol {
        Some(format!("negative entry {min_entry:e}"))
    } else if !fixes_p {
        Some(format!("pP differs from p by {stationarity_violation:e}"))
    } else {
        None
    };
    Ok(MembershipReport {
        is_row_stochastic,
        row_sum_violation,
        fixes_p,
        stationarity_violation,
        min_entry,
        violated,
    })
}

/// `1^T (P - I + 1 1^T)^{-1}`, validated against `pi P = pi` and
/// renormalized.
pub fn invariant_measure(p_mat: &Matrix) -> Result<ProbabilityMeasure> {
    let n = p_mat.nrows();
    if n == 0 || p_mat.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix",
            n,
            p_mat.ncols()
        )));
    }
    let system = (p_mat - Matrix::identity(n, n)).add_scalar(1.0).transpose();
    let lu = system.lu();
    let u = lu.u();
    let diag = u.diagonal().abs();
    if diag.min() <= 1e-13 * diag.max().max(1.0) {
        return Err(Error::NonErgodic);
    }
    let pi = lu
        .solve(&nalgebra::DVector::from_element(n, 1.0))
        .ok_or(Error::NonErgodic)?;
    if pi.iter().any(|v| !v.is_finite() || *v < -1e-9) {
        return Err(Error::NonErgodic);
    }
    let residual = (p_mat.transpose() * &pi - &pi).amax();
    if residual > 1e-9 || (pi.sum() - 1.0).abs() > 1e-9 {
        return Err(Error::NonErgodic);
    }
    ProbabilityMeasure::normalize(&pi.iter().map(|v| v.max(0.0)).collect::<Vec<_>>())
}

pub fn total_variation(p: &ProbabilityMeasure, q: &ProbabilityMeasure) -> Result<f64> {
    total_variation_slices(p.as_slice(), q.as_slice())
}

pub fn total_variation_slices(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch(format!(
            "measures on {} and {} states",
            p.len(),
            q.len()
        )));
    }
    Ok(0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// `max_{i,j} |p_i P_ij - p_j P_ji|`.
pub fn detailed_balance_violation(p: &ProbabilityMeasure, p_mat: &Matrix) -> Result<f64> {
    let n = p.len();
    if p_mat.nrows() != n || p_mat.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix, {n} states",
            p_mat.nrows(),
            p_mat.ncols()
        )));
    }
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..i {
            worst = worst.max((p.get(i) * p_mat[(i, j)] - p.get(j) * p_mat[(j, i)]).abs());
        }
    }
    Ok(worst)
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Advances `c` to the next `k`-combination of `0..m` in lexicographic
/// order; false once exhausted.
fn next_combination(c: &mut [usize], m: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < m - k + i {
            c[i] += 1;
            for t in i + 1..k {
                c[t] = c[t - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// The exact one-step kernel of a sampler with uniform size-`d`
/// proposals: row `c` averages the acceptance distribution from `c` over
/// every size-`d` subset of the other states.
pub fn expected_kernel<O: LogWeightOracle + ?Sized>(
    oracle: &O,
    kind: SamplerKind,
    d: usize,
) -> Result<Matrix> {
    expected_kernel_with(oracle, kind, d, HopsObjective::default())
}

pub fn expected_kernel_with<O: LogWeightOracle + ?Sized>(
    oracle: &O,
    kind: SamplerKind,
    d: usize,
    objective: HopsObjective,
) -> Result<Matrix> {
    kind.check_size(d)?;
    let n = oracle.n_states();
    if d >= n {
        return Err(Error::InvalidProposal(format!("d={d} with only {n} states")));
    }
    let subsets = binomial(n as u64 - 1, d as u64);
    if subsets > MAX_SUBSETS_PER_STATE {
        return Err(Error::EnumerationGuard(format!(
            "{subsets} proposal subsets per state (limit {MAX_SUBSETS_PER_STATE})"
        )));
    }
    let lw = LogWeights::tabulate(oracle);
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|c| -> Result<Vec<f64>> {
            let mut row = vec![0.0; n];
            let mut pos: Vec<usize> = (0..d).collect();
            let mut states = vec![0; d];
            let mut weights = vec![0.0; d];
            loop {
                for (u, &q) in pos.iter().enumerate() {
                    states[u] = if q >= c { q + 1 } else { q };
                    weights[u] = lw.0[states[u]];
                }
                let j = ProposalSet::from_sorted_unchecked(states.clone());
                let a = acceptance_for(kind, c, lw.0[c], &j, &weights, objective)?;
                for (u, &s) in states.iter().enumerate() {
                    row[s] += a.move_probs[u];
                }
                row[c] += a.stay_prob;
                if !next_combination(&mut pos, n - 1) {
                    break;
                }
            }
            let scale = 1.0 / subsets as f64;
            row.iter_mut().for_each(|v| *v *= scale);
            Ok(row)
        })
        .collect::<Result<_>>()?;
    Ok(Matrix::from_fn(n, n, |i, k| rows[i][k]))
}

/// `TV(mu0 K^t, p)` for `t = 0..=steps`.
pub fn tv_curve_exact(
    kernel: &Matrix,
    p: &ProbabilityMeasure,
    mu0: &ProbabilityMeasure,
    steps: usize,
) -> Result<Vec<f64>> {
    let n = p.len();
    if kernel.nrows() != n || kernel.ncols() != n || mu0.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "kernel {}x{}, measures on {n} and {} states",
            kernel.nrows(),
            kernel.ncols(),
            mu0.len()
        )));
    }
    let kt = kernel.transpose();
    let mut mu = nalgebra::DVector::from_column_slice(mu0.as_slice());
    let mut out = Vec::with_capacity(steps + 1);
    out.push(total_variation_slices(mu.as_slice(), p.as_slice())?);
    for _ in 0..steps {
        mu = &kt * mu;
        out.push(total_variation_slices(mu.as_slice(), p.as_slice())?);
    }
    Ok(out)
}
