//! The higher-order programming sampler (HOPS): a linear program over the
//! coefficient matrix `tau` whose lift `I - tau^(p)_(J)` is a transition
//! matrix fixing `p`.
//!
//! With `R = [I; -r_J^-]` and `C = [I, -1_J^-]`, `tau^(p)_(J) = R tau C`, so
//! for `j, k < n - 1`
//!
//! ```text
//! P_jk = delta_jk - tau_jk      P_jn = (tau 1_J^-)_j
//! P_nk = (r_J^- tau)_k          P_nn = 1 - r_J^- tau 1_J^-
//! ```
//!
//! Variables are `vec(tau)` in column-major order. The objective maximizes
//! `x^T tau^(p)_(J) y`; the default `x = 1_J`, `y = -r_J^T` maximizes the
//! Frobenius inner product of `P` with `1_J r_J`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lp::{self, LinearProgram, LpStatus};
use crate::samplers::{AcceptanceDistribution, ProposalSet};
use crate::Matrix;

/// Negative acceptance entries above this are roundoff and get clamped.
pub const CLAMP_TOL: f64 = 1e-9;
/// Tolerance for membership checks on a recovered transition matrix.
pub const RECOVER_TOL: f64 = 1e-9;

/// Named choices for the objective vectors `x` and `y`, evaluated per step
/// against the proposal set and the distinguished state `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObjectiveVector {
    /// `1_J`: ones on `J` and `n`.
    OnesJ,
    /// `-1_J`.
    NegOnesJ,
    /// `r_J = r . 1_J`, with `r_n = 1`.
    RJ,
    /// `-r_J`.
    NegRJ,
    /// `e_n`.
    En,
}

impl ObjectiveVector {
    pub fn name(&self) -> &'static str {
        match self {
            ObjectiveVector::OnesJ => "ones-j",
            ObjectiveVector::NegOnesJ => "neg-ones-j",
            ObjectiveVector::RJ => "r-j",
            ObjectiveVector::NegRJ => "neg-r-j",
            ObjectiveVector::En => "e-n",
        }
    }

    /// Values on `J` (in order) followed by the value at `n`.
    fn on_support(&self, r_j: &[f64]) -> Vec<f64> {
        let d = r_j.len();
        match self {
            ObjectiveVector::OnesJ => vec![1.0; d + 1],
            ObjectiveVector::NegOnesJ => vec![-1.0; d + 1],
            ObjectiveVector::RJ => r_j.iter().copied().chain([1.0]).collect(),
            ObjectiveVector::NegRJ => r_j.iter().map(|r| -r).chain([-1.0]).collect(),
            ObjectiveVector::En => {
                let mut v = vec![0.0; d + 1];
                v[d] = 1.0;
                v
            }
        }
    }

    /// Dense length-`n` vector for the full-form program.
    pub fn dense(&self, r: &[f64], j: &ProposalSet) -> Vec<f64> {
        let n = r.len() + 1;
        let r_j: Vec<f64> = j.indices().iter().map(|&i| r[i]).collect();
        let support = self.on_support(&r_j);
        let mut out = vec![0.0; n];
        for (u, &i) in j.indices().iter().enumerate() {
            out[i] = support[u];
        }
        out[n - 1] = support[j.len()];
        out
    }
}

impl fmt::Display for ObjectiveVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ObjectiveVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            ObjectiveVector::OnesJ,
            ObjectiveVector::NegOnesJ,
            ObjectiveVector::RJ,
            ObjectiveVector::NegRJ,
            ObjectiveVector::En,
        ]
        .into_iter()
        .find(|v| v.name() == s.trim())
        .ok_or_else(|| {
            Error::InvalidParameter(format!(
                "unknown objective vector '{s}' (expected ones-j, neg-ones-j, r-j, neg-r-j, e-n)"
            ))
        })
    }
}

/// The pair `(x, y)` defining the objective `x^T tau^(p)_(J) y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HopsObjective {
    pub x: ObjectiveVector,
    pub y: ObjectiveVector,
}

impl Default for HopsObjective {
    fn default() -> Self {
        Self {
            x: ObjectiveVector::OnesJ,
            y: ObjectiveVector::NegRJ,
        }
    }
}

impl HopsObjective {
    /// The default objective and its sign-flipped twin are the Frobenius
    /// inner product with `1_J r_J`, which does not depend on which member
    /// of `J u {n}` is labeled `n` beyond a positive scale.
    pub fn is_relabel_invariant(&self) -> bool {
        use ObjectiveVector::*;
        matches!((self.x, self.y), (OnesJ, NegRJ) | (NegOnesJ, RJ))
    }
}

/// The coefficient matrix `tau`, `(n - 1) x (n - 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TauCoefficients {
    pub tau: Matrix,
}

impl TauCoefficients {
    pub fn zeros(n: usize) -> Self {
        Self {
            tau: Matrix::zeros(n - 1, n - 1),
        }
    }
}

/// A HOPS linear program, in full `(n-1)^2`-variable form or reduced to the
/// `J x J` block.
///
/// Rows of `ineq` are `[U; -U]` with right-hand side `[1; 0]`, where `U`
/// stacks the last-column, last-row, and last-element constraints. In the
/// full form `eq` holds the sparsity equalities; the reduced form has none.
#[derive(Debug, Clone, PartialEq)]
pub struct HopsProgram {
    pub n: usize,
    /// `(row, col)` of `tau` for each variable.
    pub vars: Vec<(usize, usize)>,
    pub objective: Vec<f64>,
    /// Row-major, `rhs.len()` rows.
    pub ineq: Vec<f64>,
    pub rhs: Vec<f64>,
    /// Row-major equality rows `eq . vec(tau) = 0`.
    pub eq: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

fn box_bounds(vars: &[(usize, usize)]) -> (Vec<f64>, Vec<f64>) {
    vars.iter()
        .map(|&(a, b)| if a == b { (0.0, 1.0) } else { (-1.0, 0.0) })
        .unzip()
}

fn check_inputs(r: &[f64], j: &ProposalSet) -> Result<()> {
    crate::samplers::acceptance_check_ratios(r)?;
    j.check_excludes_last(r.len() + 1)
}

/// Assembles the full-form program for ratios `r` (length `n - 1`),
/// proposals `J`, and objective vectors `x`, `y` (length `n`). The
/// objective row is `w = -(y^T [I; -1_J^-]) (x) (x^T [I; -r_J^-])`, to be
/// minimized.
pub fn build_lp(r: &[f64], j: &ProposalSet, x: &[f64], y: &[f64]) -> Result<HopsProgram> {
    check_inputs(r, j)?;
    let n = r.len() + 1;
    let m = n - 1;
    if x.len() != n || y.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "objective vectors have lengths {}, {}; expected {n}",
            x.len(),
            y.len()
        )));
    }
    let ind: Vec<f64> = (0..m).map(|i| if j.contains(i) { 1.0 } else { 0.0 }).collect();
    let r_j: Vec<f64> = (0..m).map(|i| r[i] * ind[i]).collect();

    let vars: Vec<(usize, usize)> = (0..m).flat_map(|k| (0..m).map(move |jj| (jj, k))).collect();
    let nv = vars.len();
    let col = |(a, b): (usize, usize)| a + b * m;

    let xb: Vec<f64> = (0..m).map(|a| x[a] - x[m] * r_j[a]).collect();
    let ya: Vec<f64> = (0..m).map(|b| y[b] - y[m] * ind[b]).collect();
    let objective: Vec<f64> = vars.iter().map(|&(a, b)| -ya[b] * xb[a]).collect();

    let rows = 2 * m + 1;
    let mut u = vec![0.0; rows * nv];
    for &(a, b) in &vars {
        let c = col((a, b));
        u[a * nv + c] = ind[b];
        u[(m + b) * nv + c] = r_j[a];
        u[2 * m * nv + c] = r_j[a] * ind[b];
    }
    let mut ineq = u.clone();
    ineq.extend(u.iter().map(|v| -v));
    let mut rhs = vec![1.0; rows];
    rhs.extend(vec![0.0; rows]);

    let mut eq = vec![0.0; 2 * nv * nv];
    for &(a, b) in &vars {
        let c = col((a, b));
        eq[c * nv + c] = 1.0 - ind[a];
        eq[(nv + c) * nv + c] = 1.0 - ind[b];
    }

    let (lower, upper) = box_bounds(&vars);
    Ok(HopsProgram {
        n,
        vars,
        objective,
        ineq,
        rhs,
        eq,
        lower,
        upper,
    })
}

/// Builds the reduced program over the `J x J` block directly from the
/// proposal ratios. `x` and `y` are given on `J` followed by `n`.
pub(crate) fn build_reduced(r_j: &[f64], x: &[f64], y: &[f64], members: &[usize], n: usize) -> HopsProgram {
    let d = r_j.len();
    let vars: Vec<(usize, usize)> = (0..d)
        .flat_map(|v| (0..d).map(move |u| (members[u], members[v])))
        .collect();
    let nv = d * d;
    let objective: Vec<f64> = (0..d)
        .flat_map(|v| (0..d).map(move |u| (u, v)))
        .map(|(u, v)| -(y[v] - y[d]) * (x[u] - x[d] * r_j[u]))
        .collect();

    let rows = 2 * d + 1;
    let mut ineq = vec![0.0; 2 * rows * nv];
    for v in 0..d {
        for (u, &ru) in r_j.iter().enumerate() {
            let c = u + v * d;
            let entries = [(u, 1.0), (d + v, ru), (2 * d, ru)];
            for (row, val) in entries {
                ineq[row * nv + c] = val;
                ineq[(rows + row) * nv + c] = -val;
            }
        }
    }
    let mut rhs = vec![1.0; rows];
    rhs.extend(vec![0.0; rows]);
    let (lower, upper) = box_bounds(&vars);
    HopsProgram {
        n,
        vars,
        objective,
        ineq,
        rhs,
        eq: Vec::new(),
        lower,
        upper,
    }
}

impl HopsProgram {
    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn num_ineq(&self) -> usize {
        self.rhs.len()
    }

    pub fn num_eq(&self) -> usize {
        if self.vars.is_empty() {
            0
        } else {
            self.eq.len() / self.vars.len()
        }
    }

    /// Drops variables pinned to zero by single-variable equality rows, then
    /// any rows left without coefficients.
    pub fn reduce(&self) -> HopsProgram {
        let nv = self.num_vars();
        let mut pinned = vec![false; nv];
        for row in self.eq.chunks_exact(nv.max(1)) {
            let mut nz = row.iter().enumerate().filter(|(_, v)| **v != 0.0);
            if let (Some((c, _)), None) = (nz.next(), nz.next()) {
                pinned[c] = true;
            }
        }
        let keep: Vec<usize> = (0..nv).filter(|&c| !pinned[c]).collect();
        let restrict = |row: &[f64]| -> Vec<f64> { keep.iter().map(|&c| row[c]).collect() };

        let mut ineq = Vec::new();
        let mut rhs = Vec::new();
        for (row, &b) in self.ineq.chunks_exact(nv.max(1)).zip(&self.rhs) {
            let sub = restrict(row);
            if sub.iter().any(|v| *v != 0.0) || b < 0.0 {
                ineq.extend(sub);
                rhs.push(b);
            }
        }
        let mut eq = Vec::new();
        for row in self.eq.chunks_exact(nv.max(1)) {
            let sub = restrict(row);
            if sub.iter().any(|v| *v != 0.0) {
                eq.extend(sub);
            }
        }
        HopsProgram {
            n: self.n,
            vars: keep.iter().map(|&c| self.vars[c]).collect(),
            objective: restrict(&self.objective),
            ineq,
            rhs,
            eq,
            lower: restrict(&self.lower),
            upper: restrict(&self.upper),
        }
    }

    /// Equalities become pairs of opposite inequalities.
    pub fn to_linear_program(&self) -> Result<LinearProgram> {
        let mut a = self.ineq.clone();
        let mut b = self.rhs.clone();
        for row in self.eq.chunks_exact(self.num_vars().max(1)) {
            a.extend_from_slice(row);
            a.extend(row.iter().map(|v| -v));
            b.extend([0.0, 0.0]);
        }
        LinearProgram::new(
            self.objective.clone(),
            a,
            b,
            self.lower.clone(),
            self.upper.clone(),
        )
    }

    /// Scatters a solution vector into `tau`.
    pub fn tau_from(&self, x: &[f64]) -> TauCoefficients {
        let mut tau = TauCoefficients::zeros(self.n);
        for (&(a, b), &v) in self.vars.iter().zip(x) {
            tau.tau[(a, b)] = v;
        }
        tau
    }

    /// `w . vec(tau)` restricted to this program's variables.
    pub fn objective_at(&self, tau: &TauCoefficients) -> f64 {
        self.vars
            .iter()
            .zip(&self.objective)
            .map(|(&(a, b), w)| w * tau.tau[(a, b)])
            .sum()
    }

    /// Secondary objective used to break ties among optimal vertices:
    /// minimize the trace of `P` over `J u {n}`.
    fn trace_tiebreak(&self, r: &[f64]) -> Vec<f64> {
        self.vars
            .iter()
            .map(|&(a, b)| -(if a == b { 1.0 } else { 0.0 }) - r[a])
            .collect()
    }
}

/// `P = I - tau^(p)_(J)` after checking that `tau` is supported on `J x J`
/// and that every constraint of the program holds.
pub fn recover_transition(tau: &TauCoefficients, r: &[f64], j: &ProposalSet) -> Result<Matrix> {
    check_inputs(r, j)?;
    let n = r.len() + 1;
    let m = n - 1;
    if tau.tau.nrows() != m || tau.tau.ncols() != m {
        return Err(Error::DimensionMismatch(format!(
            "tau is {}x{}, expected {m}x{m}",
            tau.tau.nrows(),
            tau.tau.ncols()
        )));
    }
    let t = &tau.tau;
    for a in 0..m {
        for b in 0..m {
            let v = t[(a, b)];
            if (!j.contains(a) || !j.contains(b)) && v != 0.0 {
                return Err(Error::MembershipViolation(format!(
                    "sparsity: tau[{},{}] = {v} outside J x J",
                    a + 1,
                    b + 1
                )));
            }
            let (lo, hi) = if a == b { (0.0, 1.0) } else { (-1.0, 0.0) };
            if v < lo - RECOVER_TOL || v > hi + RECOVER_TOL {
                return Err(Error::MembershipViolation(format!(
                    "body: tau[{},{}] = {v} outside [{lo}, {hi}]",
                    a + 1,
                    b + 1
                )));
            }
        }
    }
    let idx = j.indices();
    let mut p = Matrix::identity(n, n);
    for &a in idx {
        for &b in idx {
            p[(a, b)] -= t[(a, b)];
        }
        let last_col: f64 = idx.iter().map(|&b| t[(a, b)]).sum();
        p[(a, m)] = last_col;
        check_unit("last column", a, last_col)?;
    }
    let mut corner = 0.0;
    for &b in idx {
        let last_row: f64 = idx.iter().map(|&a| r[a] * t[(a, b)]).sum();
        p[(m, b)] = last_row;
        corner += last_row;
        check_unit("last row", b, last_row)?;
    }
    check_unit("last element", m, corner)?;
    p[(m, m)] = 1.0 - corner;
    Ok(p)
}

fn check_unit(what: &str, at: usize, v: f64) -> Result<()> {
    if !(-RECOVER_TOL..=1.0 + RECOVER_TOL).contains(&v) {
        return Err(Error::MembershipViolation(format!(
            "{what} constraint at {}: {v} outside [0, 1]",
            at + 1
        )));
    }
    Ok(())
}

/// Solves the reduced program for proposals with ratios `r_j` relative to
/// the distinguished state, returning the `d x d` block of `tau`
/// (`tau[(u, v)]` for `u, v` positions in `J`).
fn solve_block(r_j: &[f64], objective: HopsObjective) -> Result<Matrix> {
    let d = r_j.len();
    let members: Vec<usize> = (0..d).collect();
    let x = objective.x.on_support(r_j);
    let y = objective.y.on_support(r_j);
    let program = build_reduced(r_j, &x, &y, &members, d + 1);
    let lp = program.to_linear_program()?;
    let tiebreak = program.trace_tiebreak(r_j);
    let sol = lp::solve_lexicographic(&lp, &[&tiebreak])?;
    match sol.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => {
            return Err(Error::LpFailure(
                "reported infeasible, but tau = 0 is always feasible".into(),
            ))
        }
        LpStatus::IterationLimit => {
            return Err(Error::LpFailure(format!(
                "hit the iteration limit after {} pivots",
                sol.iterations
            )))
        }
        LpStatus::Unbounded => return Err(Error::LpFailure("reported unbounded".into())),
    }
    Ok(Matrix::from_fn(d, d, |u, v| sol.x[u + v * d]))
}

/// Full HOPS transition matrix for the literal construction with state `n`
/// (index `n - 1`) as the distinguished state.
pub fn hops_matrix(r: &[f64], j: &ProposalSet) -> Result<Matrix> {
    hops_matrix_with(r, j, HopsObjective::default())
}

pub fn hops_matrix_with(r: &[f64], j: &ProposalSet, objective: HopsObjective) -> Result<Matrix> {
    let tau = solve_tau(r, j, objective)?;
    recover_transition(&tau, r, j)
}

/// Optimal `tau` of the reduced program, with state `n` distinguished.
pub fn solve_tau(r: &[f64], j: &ProposalSet, objective: HopsObjective) -> Result<TauCoefficients> {
    check_inputs(r, j)?;
    let n = r.len() + 1;
    let r_j: Vec<f64> = j.indices().iter().map(|&i| r[i]).collect();
    let block = solve_block(&r_j, objective)?;
    let mut tau = TauCoefficients::zeros(n);
    for (u, &a) in j.indices().iter().enumerate() {
        for (v, &b) in j.indices().iter().enumerate() {
            tau.tau[(a, b)] = block[(u, v)];
        }
    }
    Ok(tau)
}

/// HOPS acceptance row for the current state `n` given proposal ratios
/// `r_j`. Equivalent to [`ensemble_acceptance`] with log-weights
/// `(ln r_j, 0)` and the current state last.
pub fn hops_probs(r_j: &[f64]) -> Result<AcceptanceDistribution> {
    hops_probs_with(r_j, HopsObjective::default())
}

pub fn hops_probs_with(r_j: &[f64], objective: HopsObjective) -> Result<AcceptanceDistribution> {
    crate::samplers::acceptance_check_ratios(r_j)?;
    let log_w: Vec<f64> = r_j.iter().map(|r| r.ln()).chain([0.0]).collect();
    ensemble_acceptance(&log_w, r_j.len(), objective)
}

/// HOPS acceptance for an ensemble `S = J u {current}` listed in a fixed
/// canonical order (ascending state index), with its log-weights and the
/// position of the current state in the list. Returns move probabilities
/// for the other members in list order.
///
/// For relabel-invariant objectives the program is solved once per
/// ensemble with its highest-weight member (first in order on ties) as the
/// distinguished state, and the matrix row of the current state is read
/// off. The optimal set is the same whichever member is distinguished, so
/// every member of `S` reads its row from one matrix fixing `p`. Other
/// objectives distinguish the current state, as the algorithm states.
pub fn ensemble_acceptance(
    log_w: &[f64],
    current_pos: usize,
    objective: HopsObjective,
) -> Result<AcceptanceDistribution> {
    let size = log_w.len();
    if size < 2 || current_pos >= size {
        return Err(Error::InvalidProposal(format!(
            "ensemble of {size} with current position {current_pos}"
        )));
    }
    let reference = if objective.is_relabel_invariant() {
        (0..size).fold(0, |best, i| if log_w[i] > log_w[best] { i } else { best })
    } else {
        current_pos
    };
    let others: Vec<usize> = (0..size).filter(|&i| i != reference).collect();
    let base = log_w[reference];
    let r: Vec<f64> = others.iter().map(|&i| (log_w[i] - base).exp()).collect();
    if let Some((pos, &v)) = r.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
        return Err(if v.is_infinite() {
            Error::RatioOverflow {
                state: others[pos] + 1,
                log_ratio: log_w[others[pos]] - base,
            }
        } else {
            Error::InvalidRatio {
                position: pos + 1,
                value: v,
            }
        });
    }
    let tau = solve_block(&r, objective)?;
    let d = others.len();

    // Row of the transition matrix over `others` then `reference`.
    let mut row = vec![0.0; size];
    if current_pos == reference {
        let mut corner = 0.0;
        for v in 0..d {
            let val: f64 = (0..d).map(|w| r[w] * tau[(w, v)]).sum();
            row[others[v]] = val;
            corner += val;
        }
        row[reference] = 1.0 - corner;
    } else {
        let u = others.iter().position(|&i| i == current_pos).unwrap();
        for v in 0..d {
            row[others[v]] = if u == v { 1.0 } else { 0.0 } - tau[(u, v)];
        }
        row[reference] = (0..d).map(|v| tau[(u, v)]).sum();
    }

    for (i, v) in row.iter_mut().enumerate() {
        if *v < -CLAMP_TOL {
            return Err(Error::MembershipViolation(format!(
                "acceptance entry {} is {v}",
                i + 1
            )));
        }
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    let total: f64 = row.iter().sum();
    for v in row.iter_mut() {
        *v /= total;
    }
    let stay_prob = row[current_pos];
    let move_probs = (0..size).filter(|&i| i != current_pos).map(|i| row[i]).collect();
    Ok(AcceptanceDistribution {
        move_probs,
        stay_prob,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn worked() -> (Vec<f64>, ProposalSet) {
        (
            vec![0.1, 0.2, 0.3, 0.4],
            ProposalSet::new(vec![0, 1, 2], 5).unwrap(),
        )
    }

    #[test]
    fn full_form_shapes() {
        let (r, j) = worked();
        let x = ObjectiveVector::OnesJ.dense(&r, &j);
        let y = ObjectiveVector::NegRJ.dense(&r, &j);
        let prog = build_lp(&r, &j, &x, &y).unwrap();
        assert_eq!(prog.num_vars(), 16);
        assert_eq!(prog.num_ineq(), 18);
        assert_eq!(prog.rhs, [vec![1.0; 9], vec![0.0; 9]].concat());
        let red = prog.reduce();
        assert_eq!(red.num_vars(), 9);
        assert_eq!(red.num_ineq(), 2 * (2 * 3 + 1));
        assert_eq!(red.num_eq(), 0);
    }

    #[test]
    fn zero_tau_is_identity() {
        let (r, j) = worked();
        let p = recover_transition(&TauCoefficients::zeros(5), &r, &j).unwrap();
        assert_eq!(p, Matrix::identity(5, 5));
    }

    #[test]
    fn recover_names_the_violated_constraint() {
        let (r, j) = worked();
        let mut tau = TauCoefficients::zeros(5);
        tau.tau[(3, 3)] = 0.5;
        let e = recover_transition(&tau, &r, &j).unwrap_err();
        assert!(e.to_string().contains("sparsity"), "{e}");
        let mut tau = TauCoefficients::zeros(5);
        tau.tau[(0, 1)] = 0.25;
        assert!(recover_transition(&tau, &r, &j)
            .unwrap_err()
            .to_string()
            .contains("body"));
        let mut tau = TauCoefficients::zeros(5);
        tau.tau[(0, 1)] = -0.5;
        let e = recover_transition(&tau, &r, &j).unwrap_err();
        assert!(e.to_string().contains("last column"), "{e}");
    }

    #[test]
    fn worked_lp_example() {
        let (r, j) = worked();
        let p = hops_matrix(&r, &j).unwrap();
        #[rustfmt::skip]
        let expected = Matrix::from_row_slice(5, 5, &[
            0.0, 0.0, 0.0, 0.0, 1.0,
            0.0, 0.0, 0.0, 0.0, 1.0,
            0.0, 0.0, 0.0, 0.0, 1.0,
            0.0, 0.0, 0.0, 1.0, 0.0,
            0.1, 0.2, 0.3, 0.0, 0.4,
        ]);
        assert_abs_diff_eq!(p, expected, epsilon = 1e-12);
        let a = hops_probs(&[0.1, 0.2, 0.3]).unwrap();
        for (x, y) in a.move_probs.iter().zip([0.1, 0.2, 0.3]) {
            assert_abs_diff_eq!(*x, y, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(a.stay_prob, 0.4, epsilon = 1e-12);
    }

    #[test]
    fn single_proposal_matches_metropolis() {
        for r in [0.01, 0.5, 1.0, 1.7, 40.0] {
            let a = hops_probs(&[r]).unwrap();
            assert_abs_diff_eq!(a.move_probs[0], r.min(1.0), epsilon = 1e-12);
        }
    }

    #[test]
    fn objective_names_round_trip() {
        for v in [
            ObjectiveVector::OnesJ,
            ObjectiveVector::NegOnesJ,
            ObjectiveVector::RJ,
            ObjectiveVector::NegRJ,
            ObjectiveVector::En,
        ] {
            assert_eq!(v.name().parse::<ObjectiveVector>().unwrap(), v);
        }
        assert!("bogus".parse::<ObjectiveVector>().is_err());
    }

    #[test]
    fn uniform_weights_are_fully_degenerate() {
        // Every doubly stochastic matrix is optimal; only membership and the
        // objective value are pinned down.
        let r = vec![1.0; 2];
        let j = ProposalSet::new(vec![0, 1], 3).unwrap();
        let m = hops_matrix(&r, &j).unwrap();
        for i in 0..3 {
            assert_abs_diff_eq!(m.row(i).sum(), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(m.column(i).sum(), 1.0, epsilon = 1e-12);
        }
        assert!(m.min() >= 0.0);
        assert_abs_diff_eq!(m.sum(), 3.0, epsilon = 1e-12);
    }
}
