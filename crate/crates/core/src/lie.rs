//! Closed forms for the stochastic Lie algebra and the subalgebra that
//! annihilates a target measure.
//!
//! All indices are 0-based; `n - 1` plays the role of the distinguished
//! (relabeled current) state. Ratios `r` have length `n - 1` and hold
//! `p_j / p_{n-1}`.

use crate::error::{Error, Result};
use crate::samplers::ProposalSet;
use crate::Matrix;

/// Row-sum tolerance for generator elements.
pub const GENERATOR_TOL: f64 = 1e-12;

/// A dense element of lie(STO(n)), optionally known to annihilate `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorElement {
    matrix: Matrix,
    p_annihilating: bool,
}

impl GeneratorElement {
    fn new(matrix: Matrix, p_annihilating: bool) -> Self {
        Self {
            matrix,
            p_annihilating,
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    /// Whether the element was built from the p-basis.
    pub fn is_p_annihilating(&self) -> bool {
        self.p_annihilating
    }

    /// Largest absolute row sum.
    pub fn row_sum_violation(&self) -> f64 {
        self.matrix
            .row_iter()
            .map(|row| row.sum().abs())
            .fold(0.0, f64::max)
    }

    /// `max_k |(p^T X)_k|`.
    pub fn annihilation_violation(&self, p: &[f64]) -> f64 {
        let n = self.n();
        (0..n)
            .map(|k| (0..n).map(|i| p[i] * self.matrix[(i, k)]).sum::<f64>().abs())
            .fold(0.0, f64::max)
    }

    /// Matrix commutator `[self, other]`.
    pub fn bracket(&self, other: &GeneratorElement) -> GeneratorElement {
        GeneratorElement::new(
            &self.matrix * &other.matrix - &other.matrix * &self.matrix,
            self.p_annihilating && other.p_annihilating,
        )
    }

    pub fn scale(&self, s: f64) -> GeneratorElement {
        GeneratorElement::new(&self.matrix * s, self.p_annihilating)
    }
}

fn delta(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

fn check_sto_index(n: usize, j: usize, k: usize) -> Result<()> {
    if n < 2 || j >= n || k + 1 >= n {
        return Err(Error::IndexOutOfRange(format!(
            "sto basis (j,k)=({},{}) with n={n}",
            j + 1,
            k + 1
        )));
    }
    Ok(())
}

fn check_ratios(r: &[f64]) -> Result<()> {
    if let Some((i, v)) = r.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::InvalidRatio {
            position: i + 1,
            value: *v,
        });
    }
    Ok(())
}

fn check_p_index(r: &[f64], j: usize, k: usize) -> Result<()> {
    if j >= r.len() || k >= r.len() {
        return Err(Error::IndexOutOfRange(format!(
            "p-basis (j,k)=({},{}) with n={}",
            j + 1,
            k + 1,
            r.len() + 1
        )));
    }
    Ok(())
}

/// `e_(j,k) = e_j (e_k - e_n)^T` for `j < n`, `k < n - 1`.
pub fn sto_basis_element(n: usize, j: usize, k: usize) -> Result<GeneratorElement> {
    check_sto_index(n, j, k)?;
    let mut m = Matrix::zeros(n, n);
    m[(j, k)] = 1.0;
    m[(j, n - 1)] = -1.0;
    Ok(GeneratorElement::new(m, false))
}

/// Closed-form bracket `[e_(j,k), e_(l,m)]`.
pub fn sto_commutator_closed(
    n: usize,
    (j, k): (usize, usize),
    (l, m): (usize, usize),
) -> Result<GeneratorElement> {
    check_sto_index(n, j, k)?;
    check_sto_index(n, l, m)?;
    let last = n - 1;
    let a = delta(k, l) - delta(last, l);
    let b = delta(m, j) - delta(last, j);
    let mut out = Matrix::zeros(n, n);
    out += sto_basis_element(n, j, m)?.matrix * a;
    out -= sto_basis_element(n, l, k)?.matrix * b;
    Ok(GeneratorElement::new(out, false))
}

/// `e^(p)_(j,k) = (e_j - r_j e_n)(e_k - e_n)^T` for `j, k < n - 1`.
pub fn p_basis_element(r: &[f64], j: usize, k: usize) -> Result<GeneratorElement> {
    check_ratios(r)?;
    check_p_index(r, j, k)?;
    let n = r.len() + 1;
    let last = n - 1;
    let mut m = Matrix::zeros(n, n);
    m[(j, k)] = 1.0;
    m[(j, last)] = -1.0;
    m[(last, k)] = -r[j];
    m[(last, last)] = r[j];
    Ok(GeneratorElement::new(m, true))
}

/// `(e^(p)_(j,k))^i`: the identity for `i = 0`, otherwise
/// `(delta_jk + r_j)^(i-1) e^(p)_(j,k)`.
pub fn p_power(r: &[f64], j: usize, k: usize, i: u32) -> Result<Matrix> {
    let e = p_basis_element(r, j, k)?;
    if i == 0 {
        return Ok(Matrix::identity(e.n(), e.n()));
    }
    let lambda = delta(j, k) + r[j];
    Ok(e.into_matrix() * lambda.powi(i as i32 - 1))
}

/// Closed-form bracket `[e^(p)_(j,k), e^(p)_(l,m)]`.
pub fn p_commutator_closed(
    r: &[f64],
    (j, k): (usize, usize),
    (l, m): (usize, usize),
) -> Result<GeneratorElement> {
    check_ratios(r)?;
    check_p_index(r, j, k)?;
    check_p_index(r, l, m)?;
    let a = delta(k, l) + r[l];
    let b = delta(m, j) + r[j];
    let out = p_basis_element(r, j, m)?.into_matrix() * a - p_basis_element(r, l, k)?.into_matrix() * b;
    Ok(GeneratorElement::new(out, true))
}

/// `f^(p)_(j,k)(t) = (exp(-t (delta_jk + r_j)) - 1) / (delta_jk + r_j)`.
pub fn f_p(r: &[f64], j: usize, k: usize, t: f64) -> Result<f64> {
    check_ratios(r)?;
    check_p_index(r, j, k)?;
    let lambda = delta(j, k) + r[j];
    Ok((-t * lambda).exp_m1() / lambda)
}

/// `exp(t e^(p)_(j,k)) = I + (exp(t lambda) - 1)/lambda e^(p)_(j,k)` with
/// `lambda = delta_jk + r_j`.
pub fn exp_p_basis(r: &[f64], j: usize, k: usize, t: f64) -> Result<Matrix> {
    if !t.is_finite() {
        return Err(Error::InvalidParameter(format!("t must be finite, got {t}")));
    }
    let e = p_basis_element(r, j, k)?;
    let n = e.n();
    let lambda = delta(j, k) + r[j];
    let coeff = (t * lambda).exp_m1() / lambda;
    Ok(Matrix::identity(n, n) + e.into_matrix() * coeff)
}

/// `exp(-sum_j t_j e^(p)_(j,j))` for `t >= 0`, an element of the positive
/// monoid. There is no closed form for the sum, so this goes through a
/// general Pade matrix exponential.
pub fn diagonal_semigroup_element(r: &[f64], t: &[f64]) -> Result<Matrix> {
    check_ratios(r)?;
    if t.len() != r.len() {
        return Err(Error::DimensionMismatch(format!(
            "t has length {}, expected {}",
            t.len(),
            r.len()
        )));
    }
    if let Some((i, v)) = t.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "t_{} = {v} must be finite and >= 0",
            i + 1
        )));
    }
    let n = r.len() + 1;
    let mut gen = Matrix::zeros(n, n);
    for (j, &tj) in t.iter().enumerate() {
        if tj != 0.0 {
            gen -= p_basis_element(r, j, j)?.into_matrix() * tj;
        }
    }
    Ok(gen.exp())
}

/// `alpha^(p)_(J) = sum_{u,v} alpha_uv e^(p)_(j_u, j_v)` for a `d x d`
/// coefficient block. `r_j` holds the ratios of the members of `J` in order.
pub fn lift_coefficients(
    coeffs: &Matrix,
    r_j: &[f64],
    j: &ProposalSet,
    n: usize,
) -> Result<GeneratorElement> {
    let d = j.len();
    check_lift_inputs(r_j, j, n)?;
    if coeffs.nrows() != d || coeffs.ncols() != d {
        return Err(Error::DimensionMismatch(format!(
            "coefficient block is {}x{}, expected {d}x{d}",
            coeffs.nrows(),
            coeffs.ncols()
        )));
    }
    let last = n - 1;
    let idx = j.indices();
    let mut m = Matrix::zeros(n, n);
    for u in 0..d {
        for v in 0..d {
            let c = coeffs[(u, v)];
            if c == 0.0 {
                continue;
            }
            m[(idx[u], idx[v])] += c;
            m[(idx[u], last)] -= c;
            m[(last, idx[v])] -= r_j[u] * c;
            m[(last, last)] += r_j[u] * c;
        }
    }
    Ok(GeneratorElement::new(m, true))
}

fn check_lift_inputs(r_j: &[f64], j: &ProposalSet, n: usize) -> Result<()> {
    check_ratios(r_j)?;
    if r_j.len() != j.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} ratios for {} proposals",
            r_j.len(),
            j.len()
        )));
    }
    if let Some(&bad) = j.indices().iter().find(|&&i| i + 1 >= n) {
        return Err(Error::IndexOutOfRange(format!(
            "proposal {} must lie in [1, {}]",
            bad + 1,
            n - 1
        )));
    }
    Ok(())
}

/// Coefficient block `omega (I - 1 r_(J) / (1 + r_(J) 1))` of the generator.
pub fn generator_coefficients(r_j: &[f64], omega: f64) -> Matrix {
    let d = r_j.len();
    let s: f64 = r_j.iter().sum();
    Matrix::from_fn(d, d, |u, v| omega * (delta(u, v) - r_j[v] / (1.0 + s)))
}

/// The generator `A^(p;omega)_(J)`, which satisfies `A^2 = omega A`.
pub fn assemble_a(r_j: &[f64], omega: f64, j: &ProposalSet, n: usize) -> Result<GeneratorElement> {
    if omega == 0.0 || !omega.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "omega must be finite and nonzero, got {omega}"
        )));
    }
    check_lift_inputs(r_j, j, n)?;
    lift_coefficients(&generator_coefficients(r_j, omega), r_j, j, n)
}

/// `exp(t A) = I + (exp(omega t) - 1)/omega A`.
pub fn exp_a(a: &GeneratorElement, omega: f64, t: f64) -> Result<Matrix> {
    if omega == 0.0 || !omega.is_finite() || !t.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "omega={omega}, t={t} must be finite with omega nonzero"
        )));
    }
    let n = a.n();
    Ok(Matrix::identity(n, n) + a.matrix() * ((omega * t).exp_m1() / omega))
}
