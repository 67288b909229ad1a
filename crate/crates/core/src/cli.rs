//! Command-line front end. User-facing state indices are 1-based.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{bench_csv, curve_csv, exact_curves, sk_bench_curves, write_output, RunSpec};
use crate::error::{Error, Result};
use crate::hops::{hops_matrix_with, HopsObjective, ObjectiveVector};
use crate::lie::assemble_a;
use crate::measure::ProbabilityMeasure;
use crate::samplers::{barker_matrix, metropolis_matrix, ProposalSet, SamplerKind};
use crate::spin_glass::SkModel;
use crate::verify::{run_suite, Goldens};
use crate::Matrix;

#[derive(Debug, Parser)]
#[command(
    name = "liemcmc",
    version,
    about = "Higher-order MCMC samplers and their exact diagnostics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every property check and worked example; exit 1 on any failure.
    Verify,
    /// Print a transition matrix or generator for weights p and proposals J.
    Matrices(MatricesArgs),
    /// Monte Carlo TV curves on a Sherrington-Kirkpatrick model.
    SkBench(BenchArgs),
    /// Exact TV curves from the expected one-step kernel.
    ExactCurve(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MatrixKind {
    Barker,
    Metropolis,
    Hops,
    /// The generator `A` with scale `omega`.
    Generator,
    /// `exp(t A)`.
    ExpA,
}

#[derive(Debug, Args)]
pub struct MatricesArgs {
    /// Comma-separated nonnegative weights; the last state is the current one.
    #[arg(long, value_delimiter = ',', required = true)]
    pub p: Vec<f64>,
    /// Comma-separated 1-based proposal indices, all below the last state.
    #[arg(long, value_delimiter = ',', required = true)]
    pub j: Vec<usize>,
    #[arg(long, value_enum, default_value = "barker")]
    pub sampler: MatrixKind,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub omega: f64,
    /// Time for `exp-a`; defaults to `-ln 2`.
    #[arg(long, allow_negative_numbers = true)]
    pub t: Option<f64>,
    #[arg(long = "lp-x", default_value = "ones-j")]
    pub lp_x: String,
    #[arg(long = "lp-y", default_value = "neg-r-j")]
    pub lp_y: String,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 9)]
    pub spins: usize,
    #[arg(long, default_value_t = 0.25)]
    pub beta: f64,
    #[arg(long, value_delimiter = ',', default_value = "hobs,homs,hops")]
    pub samplers: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
    pub d: Vec<usize>,
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    /// Independent chains per (sampler, d); ignored by `exact-curve`.
    #[arg(long, default_value_t = 20_000)]
    pub chains: usize,
    /// Master seed for the couplings and every chain.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV destination; couplings go to `<stem>.couplings.txt` beside it.
    /// Writes to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long = "lp-x", default_value = "ones-j")]
    pub lp_x: String,
    #[arg(long = "lp-y", default_value = "neg-r-j")]
    pub lp_y: String,
    /// Couplings file to use instead of sampling from the seed.
    #[arg(long)]
    pub couplings: Option<PathBuf>,
    /// 1-based initial state.
    #[arg(long, default_value_t = 1)]
    pub initial: usize,
}

fn objective(x: &str, y: &str) -> Result<HopsObjective> {
    Ok(HopsObjective {
        x: x.parse::<ObjectiveVector>()?,
        y: y.parse::<ObjectiveVector>()?,
    })
}

impl BenchArgs {
    fn resolve(&self) -> Result<(RunSpec, SkModel)> {
        let samplers = self
            .samplers
            .iter()
            .map(|s| s.parse::<SamplerKind>())
            .collect::<Result<Vec<_>>>()?;
        if self.initial == 0 {
            return Err(Error::IndexOutOfRange("initial state is 1-based".into()));
        }
        let mut spec = RunSpec {
            spins: self.spins,
            beta: self.beta,
            samplers,
            ds: self.d.clone(),
            steps: self.steps,
            chains: self.chains,
            seed: self.seed,
            initial: self.initial - 1,
            objective: objective(&self.lp_x, &self.lp_y)?,
        };
        let model = match &self.couplings {
            Some(path) => {
                let m = SkModel::new(SkModel::load_couplings(path)?, self.beta)?;
                spec.spins = m.spins();
                m
            }
            None => spec.model()?,
        };
        spec.validate()?;
        Ok((spec, model))
    }
}

/// Rows of comma-separated shortest round-trip decimals.
pub fn matrix_csv(m: &Matrix) -> String {
    let mut out = String::new();
    for row in m.row_iter() {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn cmd_matrices(args: &MatricesArgs) -> Result<String> {
    let p = ProbabilityMeasure::normalize(&args.p)?;
    let n = p.len();
    if p.get(n - 1) <= 0.0 {
        return Err(Error::InvalidMeasure(
            "the last state must have positive weight".into(),
        ));
    }
    if args.j.contains(&0) {
        return Err(Error::IndexOutOfRange("proposal indices are 1-based".into()));
    }
    let j = ProposalSet::new(args.j.iter().map(|i| i - 1).collect(), n)?;
    let r = p.ratios_to_last();
    let m = match args.sampler {
        MatrixKind::Barker => barker_matrix(&r, &j)?,
        MatrixKind::Metropolis => metropolis_matrix(&r, &j)?,
        MatrixKind::Hops => hops_matrix_with(&r, &j, objective(&args.lp_x, &args.lp_y)?)?,
        kind @ (MatrixKind::Generator | MatrixKind::ExpA) => {
            let r_j: Vec<f64> = j.indices().iter().map(|&i| r[i]).collect();
            let a = assemble_a(&r_j, args.omega, &j, n)?;
            if kind == MatrixKind::Generator {
                a.into_matrix()
            } else {
                crate::lie::exp_a(&a, args.omega, args.t.unwrap_or(-(2f64.ln())))?
            }
        }
    };
    Ok(matrix_csv(&m))
}

fn emit(out: &Option<PathBuf>, csv: &str, model: &SkModel) -> Result<()> {
    match out {
        Some(path) => write_output(path, csv, model),
        None => std::io::stdout().write_all(csv.as_bytes()).map_err(Error::from),
    }
}

pub fn cmd_sk_bench(args: &BenchArgs) -> Result<()> {
    let (spec, model) = args.resolve()?;
    let curves = sk_bench_curves(&model, &spec)?;
    emit(&args.out, &bench_csv(&curves), &model)
}

pub fn cmd_exact_curve(args: &BenchArgs) -> Result<()> {
    let (spec, model) = args.resolve()?;
    let curves = exact_curves(&model, &spec)?;
    emit(&args.out, &curve_csv(&curves), &model)
}

/// Prints one line per property and returns whether all passed.
pub fn cmd_verify(goldens: &Goldens, out: &mut impl Write) -> std::io::Result<bool> {
    let outcomes = run_suite(goldens);
    let mut failed = 0;
    for o in &outcomes {
        match &o.result {
            Ok(()) => writeln!(out, "PASS  {}", o.name)?,
            Err(msg) => {
                failed += 1;
                writeln!(out, "FAIL  {}: {msg}", o.name)?
            }
        }
    }
    writeln!(out, "{} passed, {failed} failed", outcomes.len() - failed)?;
    Ok(failed == 0)
}

pub fn run(cli: Cli) -> ExitCode {
    let result = match &cli.command {
        Command::Verify => {
            return match cmd_verify(&Goldens::default(), &mut std::io::stdout()) {
                Ok(true) => ExitCode::SUCCESS,
                _ => ExitCode::FAILURE,
            }
        }
        Command::Matrices(args) => {
            cmd_matrices(args).and_then(|s| std::io::stdout().write_all(s.as_bytes()).map_err(Error::from))
        }
        Command::SkBench(args) => cmd_sk_bench(args),
        Command::ExactCurve(args) => cmd_exact_curve(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flags() {
        let cli = Cli::try_parse_from([
            "liemcmc",
            "sk-bench",
            "--spins",
            "4",
            "--beta",
            "0.5",
            "--samplers",
            "hobs,hops",
            "--d",
            "1,3",
            "--steps",
            "10",
            "--chains",
            "7",
            "--seed",
            "3",
            "--lp-x",
            "neg-ones-j",
            "--lp-y",
            "r-j",
        ])
        .unwrap();
        let Command::SkBench(args) = cli.command else {
            panic!()
        };
        let (spec, _) = args.resolve().unwrap();
        assert_eq!(spec.ds, vec![1, 3]);
        assert_eq!(spec.samplers, vec![SamplerKind::Hobs, SamplerKind::Hops]);
        assert_eq!(spec.objective.x, ObjectiveVector::NegOnesJ);
    }

    #[test]
    fn matrices_reject_bad_input() {
        let cli = Cli::try_parse_from(["liemcmc", "matrices", "--p", "1,2", "--j", "2"]).unwrap();
        let Command::Matrices(args) = cli.command else {
            panic!()
        };
        assert!(cmd_matrices(&args).is_err());
    }
}
