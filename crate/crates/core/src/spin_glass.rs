//! Sherrington-Kirkpatrick spin glass over `{-1, +1}^N`.
//!
//! State index `i` (0-based) encodes spin `k` as `+1` when bit `k` of `i`
//! is set, so index 0 is all spins down.

use std::fmt::Write as _;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::measure::{LogWeightOracle, ProbabilityMeasure};
use crate::Matrix;

/// Enumeration limit for exact distributions and kernels.
pub const MAX_EXACT_SPINS: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct SkModel {
    couplings: Matrix,
    beta: f64,
    scale: f64,
}

/// Draws the upper triangle, diagonal included, row by row from a ChaCha8
/// stream, and mirrors it.
pub fn sample_couplings(n: usize, seed: u64) -> Result<Matrix> {
    if n == 0 {
        return Err(Error::InvalidParameter("spin count must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut j = Matrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let v: f64 = StandardNormal.sample(&mut rng);
            j[(a, b)] = v;
            j[(b, a)] = v;
        }
    }
    Ok(j)
}

impl SkModel {
    pub fn new(couplings: Matrix, beta: f64) -> Result<Self> {
        let n = couplings.nrows();
        if n == 0 || couplings.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "couplings must be square and nonempty, got {}x{}",
                n,
                couplings.ncols()
            )));
        }
        if n >= usize::BITS as usize {
            return Err(Error::InvalidParameter(format!(
                "{n} spins do not fit a state index"
            )));
        }
        if !beta.is_finite() {
            return Err(Error::InvalidParameter(format!("beta = {beta}")));
        }
        for a in 0..n {
            for b in 0..a {
                if couplings[(a, b)] != couplings[(b, a)] {
                    return Err(Error::InvalidParameter(format!(
                        "couplings not symmetric at ({}, {})",
                        a + 1,
                        b + 1
                    )));
                }
            }
        }
        if couplings.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite coupling".into()));
        }
        Ok(Self {
            couplings,
            beta,
            scale: beta / (n as f64).sqrt(),
        })
    }

    pub fn random(n: usize, beta: f64, seed: u64) -> Result<Self> {
        Self::new(sample_couplings(n, seed)?, beta)
    }

    pub fn spins(&self) -> usize {
        self.couplings.nrows()
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn couplings(&self) -> &Matrix {
        &self.couplings
    }

    pub fn n_states(&self) -> usize {
        1 << self.spins()
    }

    /// `-(beta / sqrt N) sum_{j,k} J_jk s_j s_k` over all ordered pairs.
    pub fn log_weight_of(&self, s: &[i8]) -> f64 {
        let n = self.spins();
        let mut e = 0.0;
        for a in 0..n {
            let row: f64 = s[..n]
                .iter()
                .enumerate()
                .map(|(b, &sb)| self.couplings[(a, b)] * f64::from(sb))
                .sum();
            e += f64::from(s[a]) * row;
        }
        -self.scale * e
    }

    pub fn exact_distribution(&self) -> Result<ProbabilityMeasure> {
        if self.spins() > MAX_EXACT_SPINS {
            return Err(Error::EnumerationGuard(format!(
                "exact distribution over 2^{} states (limit 2^{MAX_EXACT_SPINS})",
                self.spins()
            )));
        }
        let lw: Vec<f64> = (0..self.n_states()).map(|i| self.log_weight(i)).collect();
        ProbabilityMeasure::from_log_weights(&lw)
    }

    /// One row per line, shortest round-trip decimals separated by spaces.
    pub fn couplings_to_text(&self) -> String {
        let mut out = String::new();
        for a in 0..self.spins() {
            for b in 0..self.spins() {
                if b > 0 {
                    out.push(' ');
                }
                write!(out, "{:?}", self.couplings[(a, b)]).unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn couplings_from_text(text: &str) -> Result<Matrix> {
        let rows: Vec<Vec<f64>> = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .enumerate()
            .map(|(i, l)| {
                l.split_whitespace()
                    .map(|t| {
                        t.parse::<f64>().map_err(|e| {
                            Error::InvalidParameter(format!("couplings line {}: '{t}': {e}", i + 1))
                        })
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(
                "couplings file is not a square matrix".into(),
            ));
        }
        Ok(Matrix::from_fn(n, n, |a, b| rows[a][b]))
    }

    pub fn save_couplings(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.couplings_to_text())
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }

    pub fn load_couplings(path: &Path) -> Result<Matrix> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::couplings_from_text(&text)
    }
}

/// Spins of state `index`, `+1` where the bit is set.
pub fn index_to_spins(index: usize, n: usize) -> Vec<i8> {
    (0..n).map(|k| if index >> k & 1 == 1 { 1 } else { -1 }).collect()
}

pub fn spins_to_index(s: &[i8]) -> Result<usize> {
    if s.len() >= usize::BITS as usize {
        return Err(Error::InvalidParameter(format!(
            "{} spins do not fit a state index",
            s.len()
        )));
    }
    s.iter().enumerate().try_fold(0usize, |acc, (k, &v)| match v {
        1 => Ok(acc | 1 << k),
        -1 => Ok(acc),
        _ => Err(Error::InvalidParameter(format!(
            "spin {} is {v}, expected +-1",
            k + 1
        ))),
    })
}

impl LogWeightOracle for SkModel {
    fn n_states(&self) -> usize {
        SkModel::n_states(self)
    }

    fn log_weight(&self, state: usize) -> f64 {
        let n = self.spins();
        let mut e = 0.0;
        for a in 0..n {
            let sa = if state >> a & 1 == 1 { 1.0 } else { -1.0 };
            let mut row = 0.0;
            for b in 0..n {
                let sb = if state >> b & 1 == 1 { 1.0 } else { -1.0 };
                row += self.couplings[(a, b)] * sb;
            }
            e += sa * row;
        }
        -self.scale * e
    }
}
