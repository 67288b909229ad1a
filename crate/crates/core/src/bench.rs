//! Benchmark drivers producing total-variation curves as CSV: Monte Carlo
//! over many independent chains, and the exact expected-kernel surrogate.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::diagnostics::{expected_kernel_with, total_variation_slices, tv_curve_exact};
use crate::error::{Error, Result};
use crate::hops::HopsObjective;
use crate::measure::ProbabilityMeasure;
use crate::samplers::{chain_rng, chain_step, ChainState, SamplerKind};
use crate::spin_glass::{SkModel, MAX_EXACT_SPINS};

/// Upper bound on `chains * steps` summed over all (sampler, d) pairs.
pub const MAX_CHAIN_STEPS: u64 = 2_000_000_000;
/// Chains per parallel work unit; counts are reduced in chunk order.
const CHUNK: usize = 256;

pub const BENCH_HEADER: &str = "sampler,d,t,tv,evals";
pub const CURVE_HEADER: &str = "sampler,d,t,tv";

#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub spins: usize,
    pub beta: f64,
    pub samplers: Vec<SamplerKind>,
    pub ds: Vec<usize>,
    pub steps: usize,
    pub chains: usize,
    pub seed: u64,
    /// 0-based initial state.
    pub initial: usize,
    pub objective: HopsObjective,
}

impl Default for RunSpec {
    fn default() -> Self {
        Self {
            spins: 9,
            beta: 0.25,
            samplers: vec![SamplerKind::Hobs, SamplerKind::Homs, SamplerKind::Hops],
            ds: vec![1, 2, 4, 8],
            steps: 200,
            chains: 20_000,
            seed: 0,
            initial: 0,
            objective: HopsObjective::default(),
        }
    }
}

impl RunSpec {
    pub fn validate(&self) -> Result<()> {
        if self.spins == 0 || self.spins > MAX_EXACT_SPINS {
            return Err(Error::InvalidParameter(format!(
                "spins must lie in [1, {MAX_EXACT_SPINS}], got {}",
                self.spins
            )));
        }
        if !self.beta.is_finite() || self.beta < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "beta must be finite and >= 0, got {}",
                self.beta
            )));
        }
        if self.samplers.is_empty() || self.ds.is_empty() {
            return Err(Error::InvalidParameter(
                "need at least one sampler and one d".into(),
            ));
        }
        let n = 1usize << self.spins;
        for &kind in &self.samplers {
            for &d in &self.ds {
                kind.check_size(d)?;
                if d >= n {
                    return Err(Error::InvalidProposal(format!("d={d} with only {n} states")));
                }
            }
        }
        if self.initial >= n {
            return Err(Error::IndexOutOfRange(format!(
                "initial state {} of {n}",
                self.initial + 1
            )));
        }
        Ok(())
    }

    pub fn model(&self) -> Result<SkModel> {
        SkModel::random(self.spins, self.beta, self.seed)
    }

    fn pairs(&self) -> Vec<(SamplerKind, usize)> {
        self.samplers
            .iter()
            .flat_map(|&k| self.ds.iter().map(move |&d| (k, d)))
            .collect()
    }
}

/// One TV curve from a benchmark.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub kind: SamplerKind,
    pub d: usize,
    pub tv: Vec<f64>,
}

impl Curve {
    /// Sum of TV over the recorded steps.
    pub fn area(&self) -> f64 {
        self.tv.iter().sum()
    }
}

/// Occupation counts `[t][state]` across `chains` chains started at
/// `initial`, with chain `i` on stream `i` of `seed`.
fn occupation_counts(model: &SkModel, spec: &RunSpec, kind: SamplerKind, d: usize) -> Result<Vec<Vec<u32>>> {
    let n = model.n_states();
    let steps = spec.steps;
    let chunks: Vec<(usize, usize)> = (0..spec.chains)
        .step_by(CHUNK)
        .map(|lo| (lo, (lo + CHUNK).min(spec.chains)))
        .collect();
    let partial: Vec<Vec<u32>> = chunks
        .into_par_iter()
        .map(|(lo, hi)| -> Result<Vec<u32>> {
            let mut counts = vec![0u32; (steps + 1) * n];
            for chain in lo..hi {
                let mut state = ChainState::new(model, spec.initial, chain_rng(spec.seed, chain as u64))?;
                counts[state.current] += 1;
                for t in 1..=steps {
                    chain_step(&mut state, model, kind, d, spec.objective)?;
                    counts[t * n + state.current] += 1;
                }
            }
            Ok(counts)
        })
        .collect::<Result<_>>()?;
    let mut total = vec![0u32; (steps + 1) * n];
    for part in partial {
        for (a, b) in total.iter_mut().zip(part) {
            *a += b;
        }
    }
    Ok(total.chunks_exact(n).map(|c| c.to_vec()).collect())
}

/// Empirical TV curves against the exact distribution, one per
/// (sampler, d) in the order given, all pairs sharing the master seed.
pub fn sk_bench_curves(model: &SkModel, spec: &RunSpec) -> Result<Vec<Curve>> {
    spec.validate()?;
    let pairs = spec.pairs();
    let work = (spec.chains as u64)
        .saturating_mul(spec.steps as u64)
        .saturating_mul(pairs.len() as u64);
    if work > MAX_CHAIN_STEPS {
        return Err(Error::BudgetExceeded(format!(
            "{work} chain steps requested (limit {MAX_CHAIN_STEPS})"
        )));
    }
    if spec.chains == 0 {
        return Err(Error::InvalidParameter("chains must be >= 1".into()));
    }
    let p = model.exact_distribution()?;
    let m = spec.chains as f64;
    pairs
        .into_iter()
        .map(|(kind, d)| {
            let counts = occupation_counts(model, spec, kind, d)?;
            let tv = counts
                .iter()
                .map(|c| {
                    let emp: Vec<f64> = c.iter().map(|&k| f64::from(k) / m).collect();
                    total_variation_slices(&emp, p.as_slice())
                })
                .collect::<Result<_>>()?;
            Ok(Curve { kind, d, tv })
        })
        .collect()
}

/// Exact TV curves from the expected kernel, started at `spec.initial`.
pub fn exact_curves(model: &SkModel, spec: &RunSpec) -> Result<Vec<Curve>> {
    spec.validate()?;
    for &kind in &spec.samplers {
        let limit = if kind == SamplerKind::Hops { 4 } else { 10 };
        if spec.spins > limit {
            return Err(Error::EnumerationGuard(format!(
                "exact curves for {kind} need at most {limit} spins, got {}",
                spec.spins
            )));
        }
    }
    let p = model.exact_distribution()?;
    let mu0 = ProbabilityMeasure::dirac(p.len(), spec.initial)?;
    spec.pairs()
        .into_iter()
        .map(|(kind, d)| {
            let k = expected_kernel_with(model, kind, d, spec.objective)?;
            Ok(Curve {
                kind,
                d,
                tv: tv_curve_exact(&k, &p, &mu0, spec.steps)?,
            })
        })
        .collect()
}

pub fn bench_csv(curves: &[Curve]) -> String {
    let mut out = String::from(BENCH_HEADER);
    out.push('\n');
    for c in curves {
        for (t, tv) in c.tv.iter().enumerate() {
            writeln!(out, "{},{},{t},{tv},{}", c.kind, c.d, c.d * t).unwrap();
        }
    }
    out
}

pub fn curve_csv(curves: &[Curve]) -> String {
    let mut out = String::from(CURVE_HEADER);
    out.push('\n');
    for c in curves {
        for (t, tv) in c.tv.iter().enumerate() {
            writeln!(out, "{},{},{t},{tv}", c.kind, c.d).unwrap();
        }
    }
    out
}

/// Where the couplings behind an output file are saved: `<stem>.couplings.txt`
/// next to it.
pub fn couplings_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    out.with_file_name(format!("{stem}.couplings.txt"))
}

pub fn write_output(out: &Path, csv: &str, model: &SkModel) -> Result<()> {
    std::fs::write(out, csv).map_err(|e| Error::Io(format!("{}: {e}", out.display())))?;
    model.save_couplings(&couplings_path(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> RunSpec {
        RunSpec {
            spins: 3,
            steps: 5,
            chains: 300,
            ds: vec![1, 2],
            ..RunSpec::default()
        }
    }

    #[test]
    fn zero_steps_is_initial_tv() {
        let spec = RunSpec { steps: 0, ..small() };
        let model = spec.model().unwrap();
        let p = model.exact_distribution().unwrap();
        let expected = 1.0 - p.get(spec.initial);
        for c in sk_bench_curves(&model, &spec).unwrap() {
            assert_eq!(c.tv.len(), 1);
            assert!((c.tv[0] - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn csv_schema() {
        let spec = small();
        let model = spec.model().unwrap();
        let csv = bench_csv(&sk_bench_curves(&model, &spec).unwrap());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], BENCH_HEADER);
        assert_eq!(lines.len(), 1 + 3 * 2 * 6);
        assert!(csv.ends_with('\n'));
        assert!(lines[1].starts_with("hobs,1,0,"));
    }

    #[test]
    fn budget_and_validation() {
        let spec = RunSpec {
            chains: 100_000_000,
            ..small()
        };
        let model = spec.model().unwrap();
        assert!(matches!(
            sk_bench_curves(&model, &spec),
            Err(Error::BudgetExceeded(_))
        ));
        let spec = RunSpec {
            samplers: vec![SamplerKind::Barker],
            ..small()
        };
        assert!(spec.validate().is_err());
        let spec = RunSpec {
            spins: 5,
            samplers: vec![SamplerKind::Hops],
            ..small()
        };
        assert!(matches!(
            exact_curves(&spec.model().unwrap(), &spec),
            Err(Error::EnumerationGuard(_))
        ));
    }

    #[test]
    fn couplings_file_name() {
        assert_eq!(
            couplings_path(Path::new("/x/run.csv")),
            PathBuf::from("/x/run.couplings.txt")
        );
    }
}
