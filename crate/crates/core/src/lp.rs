//! Dense bounded-variable primal simplex.
//!
//! Solves `minimize c.x  s.t.  A x <= b,  lower <= x <= upper` with finite
//! boxes. Each inequality gets a slack; rows that are violated at the
//! starting point get an artificial and are repaired in phase 1. Pivoting
//! follows Bland's rule throughout, so the returned vertex is a
//! deterministic function of the input.

use crate::error::{Error, Result};

/// Pivot-element threshold.
pub const PIVOT_TOL: f64 = 1e-10;
/// Primal feasibility tolerance.
pub const FEAS_TOL: f64 = 1e-9;
/// Reduced-cost threshold for optimality.
pub const OPT_TOL: f64 = 1e-10;

/// `minimize c.x` subject to `a x <= b` and `lower <= x <= upper`.
///
/// `a` is row-major with `b.len()` rows of `c.len()` entries.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub c: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl LinearProgram {
    pub fn new(c: Vec<f64>, a: Vec<f64>, b: Vec<f64>, lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let lp = Self {
            c,
            a,
            b,
            lower,
            upper,
        };
        lp.validate()?;
        Ok(lp)
    }

    pub fn num_vars(&self) -> usize {
        self.c.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.b.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let m = self.num_vars();
        &self.a[i * m..(i + 1) * m]
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.c.len();
        let k = self.b.len();
        if self.a.len() != m * k || self.lower.len() != m || self.upper.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "lp with {m} variables and {k} rows: a has {} entries, bounds {}/{}",
                self.a.len(),
                self.lower.len(),
                self.upper.len()
            )));
        }
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        if !(finite(&self.c)
            && finite(&self.a)
            && finite(&self.b)
            && finite(&self.lower)
            && finite(&self.upper))
        {
            return Err(Error::InvalidParameter("lp data must be finite".into()));
        }
        if let Some(i) = (0..m).find(|&i| self.lower[i] > self.upper[i]) {
            return Err(Error::InvalidParameter(format!(
                "variable {} has lower {} > upper {}",
                i + 1,
                self.lower[i],
                self.upper[i]
            )));
        }
        Ok(())
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        self.c.iter().zip(x).map(|(c, x)| c * x).sum()
    }

    /// Largest violation of any row or bound at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.num_constraints() {
            let lhs: f64 = self.row(i).iter().zip(x).map(|(a, x)| a * x).sum();
            worst = worst.max(lhs - self.b[i]);
        }
        for (j, &xj) in x.iter().enumerate() {
            worst = worst.max(self.lower[j] - xj).max(xj - self.upper[j]);
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    IterationLimit,
    /// Only reachable through roundoff, since all structural variables are boxed.
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub status: LpStatus,
    pub iterations: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

/// Solves `lp`. Infeasibility and the iteration limit `50 (m + k)` are
/// reported through [`LpStatus`], not as errors.
pub fn solve(lp: &LinearProgram) -> Result<LpSolution> {
    solve_lexicographic(lp, &[])
}

/// Optimizes `lp.c`, then each of `tiebreaks` in turn over the optimal face
/// of the previous objectives. The reported objective is always `lp.c`.
pub fn solve_lexicographic(lp: &LinearProgram, tiebreaks: &[&[f64]]) -> Result<LpSolution> {
    lp.validate()?;
    if let Some(t) = tiebreaks.iter().find(|t| t.len() != lp.num_vars()) {
        return Err(Error::DimensionMismatch(format!(
            "tie-break objective has {} entries, expected {}",
            t.len(),
            lp.num_vars()
        )));
    }
    let mut s = Simplex::new(lp);
    let limit = 50 * (lp.num_vars() + lp.num_constraints());

    if s.num_art > 0 {
        let mut cost = vec![0.0; s.total];
        for c in cost.iter_mut().skip(s.num_struct + s.num_rows) {
            *c = 1.0;
        }
        s.set_costs(&cost);
        match s.optimize(limit) {
            Phase::Optimal => {}
            Phase::IterationLimit => return Ok(s.finish(lp, LpStatus::IterationLimit)),
            Phase::Unbounded => return Ok(s.finish(lp, LpStatus::Unbounded)),
        }
        let infeasibility: f64 = (s.num_struct + s.num_rows..s.total).map(|j| s.x[j]).sum();
        if infeasibility > FEAS_TOL {
            return Ok(s.finish(lp, LpStatus::Infeasible));
        }
        for j in s.num_struct + s.num_rows..s.total {
            s.upper[j] = 0.0;
            s.locked[j] = true;
        }
    }

    let mut cost = vec![0.0; s.total];
    cost[..s.num_struct].copy_from_slice(&lp.c);
    s.set_costs(&cost);
    match s.optimize(limit) {
        Phase::Optimal => {}
        Phase::IterationLimit => return Ok(s.finish(lp, LpStatus::IterationLimit)),
        Phase::Unbounded => return Ok(s.finish(lp, LpStatus::Unbounded)),
    }

    for tb in tiebreaks {
        s.lock_nonzero_reduced_costs();
        let mut cost = vec![0.0; s.total];
        cost[..s.num_struct].copy_from_slice(tb);
        s.set_costs(&cost);
        match s.optimize(limit) {
            Phase::Optimal => {}
            Phase::IterationLimit => return Ok(s.finish(lp, LpStatus::IterationLimit)),
            Phase::Unbounded => return Ok(s.finish(lp, LpStatus::Unbounded)),
        }
    }
    Ok(s.finish(lp, LpStatus::Optimal))
}

enum Phase {
    Optimal,
    IterationLimit,
    Unbounded,
}

/// Tableau state. Columns are ordered structural, slack, artificial.
struct Simplex {
    num_struct: usize,
    num_rows: usize,
    num_art: usize,
    total: usize,
    /// `B^-1 [A | I | art]`, row-major `num_rows x total`.
    tab: Vec<f64>,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    x: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    locked: Vec<bool>,
    cost: Vec<f64>,
    reduced: Vec<f64>,
    iterations: usize,
}

impl Simplex {
    fn new(lp: &LinearProgram) -> Self {
        let m = lp.num_vars();
        let k = lp.num_constraints();

        // Start every structural variable at the bound closest to zero.
        let x0: Vec<f64> = (0..m)
            .map(|j| {
                let (l, u) = (lp.lower[j], lp.upper[j]);
                if l.abs() <= u.abs() {
                    l
                } else {
                    u
                }
            })
            .collect();
        let slack0: Vec<f64> = (0..k)
            .map(|i| lp.b[i] - lp.row(i).iter().zip(&x0).map(|(a, x)| a * x).sum::<f64>())
            .collect();
        let needs_art: Vec<bool> = slack0.iter().map(|&s| s < -FEAS_TOL).collect();
        let num_art = needs_art.iter().filter(|&&b| b).count();
        let total = m + k + num_art;

        let mut tab = vec![0.0; k * total];
        let mut basis = vec![0; k];
        let mut is_basic = vec![false; total];
        let mut x = vec![0.0; total];
        x[..m].copy_from_slice(&x0);
        let mut lower = vec![0.0; total];
        let mut upper = vec![f64::INFINITY; total];
        lower[..m].copy_from_slice(&lp.lower);
        upper[..m].copy_from_slice(&lp.upper);

        let mut art = m + k;
        for i in 0..k {
            let row = &mut tab[i * total..(i + 1) * total];
            if needs_art[i] {
                for (t, a) in row[..m].iter_mut().zip(lp.row(i)) {
                    *t = -a;
                }
                row[m + i] = -1.0;
                row[art] = 1.0;
                basis[i] = art;
                x[art] = -slack0[i];
                art += 1;
            } else {
                row[..m].copy_from_slice(lp.row(i));
                row[m + i] = 1.0;
                basis[i] = m + i;
                x[m + i] = slack0[i].max(0.0);
            }
            is_basic[basis[i]] = true;
        }

        Self {
            num_struct: m,
            num_rows: k,
            num_art,
            total,
            tab,
            basis,
            is_basic,
            x,
            lower,
            upper,
            locked: vec![false; total],
            cost: vec![0.0; total],
            reduced: vec![0.0; total],
            iterations: 0,
        }
    }

    fn set_costs(&mut self, cost: &[f64]) {
        self.cost.copy_from_slice(cost);
        self.reduced.copy_from_slice(cost);
        for i in 0..self.num_rows {
            let cb = self.cost[self.basis[i]];
            if cb != 0.0 {
                let row = &self.tab[i * self.total..(i + 1) * self.total];
                for (d, t) in self.reduced.iter_mut().zip(row) {
                    *d -= cb * t;
                }
            }
        }
        for i in 0..self.num_rows {
            self.reduced[self.basis[i]] = 0.0;
        }
    }

    /// Restricts later phases to the optimal face of the current costs.
    fn lock_nonzero_reduced_costs(&mut self) {
        for j in 0..self.total {
            if !self.is_basic[j] && self.reduced[j].abs() > OPT_TOL {
                self.locked[j] = true;
            }
        }
    }

    fn at_lower(&self, j: usize) -> bool {
        self.x[j] <= self.lower[j]
    }

    fn entering(&self) -> Option<(usize, f64)> {
        (0..self.total).find_map(|j| {
            if self.is_basic[j] || self.locked[j] || self.upper[j] <= self.lower[j] {
                return None;
            }
            let d = self.reduced[j];
            if self.at_lower(j) {
                (d < -OPT_TOL).then_some((j, 1.0))
            } else {
                (d > OPT_TOL).then_some((j, -1.0))
            }
        })
    }

    fn optimize(&mut self, limit: usize) -> Phase {
        loop {
            let Some((q, sigma)) = self.entering() else {
                return Phase::Optimal;
            };
            if self.iterations >= limit {
                return Phase::IterationLimit;
            }
            self.iterations += 1;

            let mut theta = self.upper[q] - self.lower[q];
            let mut leave: Option<(usize, bool)> = None;
            for i in 0..self.num_rows {
                let alpha = sigma * self.tab[i * self.total + q];
                let b = self.basis[i];
                let (limit_i, to_lower) = if alpha > PIVOT_TOL {
                    (((self.x[b] - self.lower[b]) / alpha).max(0.0), true)
                } else if alpha < -PIVOT_TOL && self.upper[b].is_finite() {
                    (((self.upper[b] - self.x[b]) / -alpha).max(0.0), false)
                } else {
                    continue;
                };
                let better = match leave {
                    _ if limit_i < theta => true,
                    Some((r, _)) if limit_i == theta => b < self.basis[r],
                    _ => false,
                };
                if better {
                    theta = limit_i;
                    leave = Some((i, to_lower));
                }
            }
            if !theta.is_finite() {
                return Phase::Unbounded;
            }

            let step = sigma * theta;
            self.x[q] += step;
            for i in 0..self.num_rows {
                let a = self.tab[i * self.total + q];
                if a != 0.0 {
                    let b = self.basis[i];
                    self.x[b] -= step * a;
                }
            }

            match leave {
                None => {
                    // Bound flip.
                    self.x[q] = if sigma > 0.0 { self.upper[q] } else { self.lower[q] };
                }
                Some((r, to_lower)) => {
                    let out = self.basis[r];
                    self.x[out] = if to_lower {
                        self.lower[out]
                    } else {
                        self.upper[out]
                    };
                    self.pivot(r, q);
                }
            }
        }
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let total = self.total;
        let piv = self.tab[r * total + q];
        {
            let row = &mut self.tab[r * total..(r + 1) * total];
            for v in row.iter_mut() {
                *v /= piv;
            }
            row[q] = 1.0;
        }
        let (before, rest) = self.tab.split_at_mut(r * total);
        let (prow, after) = rest.split_at_mut(total);
        for other in before
            .chunks_exact_mut(total)
            .chain(after.chunks_exact_mut(total))
        {
            let f = other[q];
            if f != 0.0 {
                for (v, p) in other.iter_mut().zip(prow.iter()) {
                    *v -= f * p;
                }
                other[q] = 0.0;
            }
        }
        let f = self.reduced[q];
        if f != 0.0 {
            for (d, p) in self.reduced.iter_mut().zip(prow.iter()) {
                *d -= f * p;
            }
        }
        self.reduced[q] = 0.0;

        let out = self.basis[r];
        self.is_basic[out] = false;
        self.is_basic[q] = true;
        self.basis[r] = q;
    }

    fn finish(&self, lp: &LinearProgram, status: LpStatus) -> LpSolution {
        let x: Vec<f64> = (0..self.num_struct)
            .map(|j| self.x[j].clamp(lp.lower[j], lp.upper[j]))
            .collect();
        LpSolution {
            objective: lp.objective(&x),
            x,
            status,
            iterations: self.iterations,
        }
    }
}
