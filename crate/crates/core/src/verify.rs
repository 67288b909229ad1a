//! Named property checks run by `liemcmc verify`.
//!
//! Each check draws its random cases from a fixed seed, so a failure is
//! reproducible. Worked-example constants live in [`Goldens`] so that the
//! suite can be run against deliberately wrong values.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bench::{bench_csv, sk_bench_curves, RunSpec, BENCH_HEADER};
use crate::diagnostics::{
    check_membership, expected_kernel, invariant_measure, total_variation, tv_curve_exact,
};
use crate::hops::{build_lp, hops_matrix, recover_transition, solve_tau, HopsObjective, ObjectiveVector};
use crate::lie::{
    assemble_a, exp_a, lift_coefficients, p_basis_element, p_commutator_closed, sto_basis_element,
    sto_commutator_closed,
};
use crate::lp;
use crate::measure::{ratios_for, LogWeights, ProbabilityMeasure};
use crate::oracle::{commutator, lp_vertex_enumeration, random_feasible_lp};
use crate::samplers::{
    barker_matrix, barker_probs, chain_rng, chain_step, metropolis_matrix, metropolis_probs, ChainState,
    ProposalSet, SamplerKind,
};
use crate::spin_glass::SkModel;
use crate::Matrix;

type Check = std::result::Result<(), String>;
type Property = (&'static str, fn(&Goldens) -> Check);
/// Exact kernels tagged by sampler and proposal count.
pub type TaggedKernels = Vec<(SamplerKind, usize, Matrix)>;

/// Worked-example inputs and expected matrices (row-major, scaled to
/// integers by the stated denominators).
#[derive(Debug, Clone, PartialEq)]
pub struct Goldens {
    pub weights: [f64; 5],
    /// 1-based proposal indices.
    pub proposals: [usize; 3],
    pub generator_x16: [f64; 25],
    pub exp_neg_ln2_x32: [f64; 25],
    pub barker_x16: [f64; 25],
    pub metropolis_x15: [f64; 25],
    pub hops: [f64; 25],
}

impl Default for Goldens {
    #[rustfmt::skip]
    fn default() -> Self {
        Self {
            weights: [1.0, 2.0, 3.0, 4.0, 10.0],
            proposals: [1, 2, 3],
            generator_x16: [
                15.0, -2.0, -3.0, 0.0, -10.0,
                -1.0, 14.0, -3.0, 0.0, -10.0,
                -1.0, -2.0, 13.0, 0.0, -10.0,
                0.0, 0.0, 0.0, 0.0, 0.0,
                -1.0, -2.0, -3.0, 0.0, 6.0,
            ],
            exp_neg_ln2_x32: [
                17.0, 2.0, 3.0, 0.0, 10.0,
                1.0, 18.0, 3.0, 0.0, 10.0,
                1.0, 2.0, 19.0, 0.0, 10.0,
                0.0, 0.0, 0.0, 32.0, 0.0,
                1.0, 2.0, 3.0, 0.0, 26.0,
            ],
            barker_x16: [
                1.0, 2.0, 3.0, 0.0, 10.0,
                1.0, 2.0, 3.0, 0.0, 10.0,
                1.0, 2.0, 3.0, 0.0, 10.0,
                0.0, 0.0, 0.0, 16.0, 0.0,
                1.0, 2.0, 3.0, 0.0, 10.0,
            ],
            metropolis_x15: [
                0.0, 2.0, 3.0, 0.0, 10.0,
                1.0, 1.0, 3.0, 0.0, 10.0,
                1.0, 2.0, 2.0, 0.0, 10.0,
                0.0, 0.0, 0.0, 15.0, 0.0,
                1.0, 2.0, 3.0, 0.0, 9.0,
            ],
            hops: [
                0.0, 0.0, 0.0, 0.0, 1.0,
                0.0, 0.0, 0.0, 0.0, 1.0,
                0.0, 0.0, 0.0, 0.0, 1.0,
                0.0, 0.0, 0.0, 1.0, 0.0,
                0.1, 0.2, 0.3, 0.0, 0.4,
            ],
        }
    }
}

impl Goldens {
    pub fn measure(&self) -> ProbabilityMeasure {
        ProbabilityMeasure::normalize(&self.weights).expect("positive weights")
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.measure().ratios_to_last()
    }

    pub fn proposal_set(&self) -> ProposalSet {
        ProposalSet::new(self.proposals.iter().map(|i| i - 1).collect(), 5).expect("valid proposals")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub name: &'static str,
    pub result: Check,
}

/// Every check, in reporting order.
pub const PROPERTIES: &[Property] = &[
    ("Golden generator matrix", golden_generator),
    ("Golden exponential at t = -ln 2", golden_exponential),
    ("Golden Barker matrix", golden_barker),
    ("Golden Metropolis matrix", golden_metropolis),
    ("Golden HOPS matrix", golden_hops),
    ("Shift invariance", shift_invariance),
    ("Self-consistency", self_consistency),
    ("Basis completeness", basis_completeness),
    ("Annihilation", annihilation),
    ("Jacobi identity", jacobi_identity),
    (
        "Both closed-form commutators equal direct matrix commutators",
        closed_commutators,
    ),
    ("Product identity", product_identity),
    ("Reduction", reduction),
    ("Stationarity", stationarity),
    ("Detailed balance at d=1", detailed_balance_d1),
    ("HOBS/HOMS equality in the saturated regime", saturated_regime),
    ("AcceptanceDistribution always sums to 1", acceptance_sums),
    ("Membership", hops_membership),
    ("Objective consistency", objective_consistency),
    ("Dominance over HOMS in objective", dominance_over_homs),
    ("Sign-convention equivalence", sign_convention),
    ("Returned point satisfies all constraints", lp_feasibility),
    ("Weak-duality sanity", weak_duality),
    ("Determinism", lp_determinism),
    ("Agreement with vertex enumeration", lp_vertex_agreement),
    ("Global flip symmetry", flip_symmetry),
    (
        "ratios_for over this oracle reproduces exact_distribution ratios",
        sk_ratios,
    ),
    (
        "invariant_measure(expected_kernel) = exact_distribution",
        kernel_stationarity,
    ),
    ("tv_curve_exact is non-increasing", tv_monotone),
    (
        "total_variation is symmetric and satisfies the triangle inequality",
        tv_metric,
    ),
    ("CSV schema stable", csv_schema),
    ("Paired-seed protocol", paired_seed),
];

pub fn run_suite(goldens: &Goldens) -> Vec<Outcome> {
    PROPERTIES
        .iter()
        .map(|&(name, check)| Outcome {
            name,
            result: check(goldens),
        })
        .collect()
}

fn err<T>(r: crate::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn max_abs_diff(a: &Matrix, b: &Matrix) -> f64 {
    (a - b).amax()
}

fn compare(what: &str, got: &Matrix, expected: &[f64], scale: f64, tol: f64) -> Check {
    let want = Matrix::from_row_slice(5, 5, expected) / scale;
    let diff = max_abs_diff(got, &want);
    ensure(diff <= tol, || format!("{what} differs by {diff:e}"))
}

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + tag)
}

fn random_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-3.0f64..3.0).exp()).collect()
}

fn random_measure(rng: &mut ChaCha8Rng, n: usize) -> ProbabilityMeasure {
    ProbabilityMeasure::normalize(&random_weights(rng, n)).expect("positive weights")
}

fn random_subset(rng: &mut ChaCha8Rng, m: usize, d: usize) -> ProposalSet {
    let mut idx: Vec<usize> = (0..m).collect();
    for u in 0..d {
        let k = rng.random_range(u..m);
        idx.swap(u, k);
    }
    idx.truncate(d);
    ProposalSet::new(idx, m + 1).expect("distinct in range")
}

/// Random `(p, r, J)` with `n` in `2..=max_n`.
fn random_instance(rng: &mut ChaCha8Rng, max_n: usize) -> (ProbabilityMeasure, Vec<f64>, ProposalSet) {
    let n = rng.random_range(2..=max_n);
    let p = random_measure(rng, n);
    let d = rng.random_range(1..n);
    let j = random_subset(rng, n - 1, d);
    let r = p.ratios_to_last();
    (p, r, j)
}

fn golden_generator(g: &Goldens) -> Check {
    let a = err(assemble_a(&g.ratios()[..3], 1.0, &g.proposal_set(), 5))?;
    compare("generator", a.matrix(), &g.generator_x16, 16.0, 1e-12)
}

fn golden_exponential(g: &Goldens) -> Check {
    let a = err(assemble_a(&g.ratios()[..3], 1.0, &g.proposal_set(), 5))?;
    let e = err(exp_a(&a, 1.0, -(2f64.ln())))?;
    compare("exp(tA)", &e, &g.exp_neg_ln2_x32, 32.0, 1e-12)
}

fn golden_barker(g: &Goldens) -> Check {
    let b = err(barker_matrix(&g.ratios(), &g.proposal_set()))?;
    compare("Barker matrix", &b, &g.barker_x16, 16.0, 1e-12)
}

fn golden_metropolis(g: &Goldens) -> Check {
    let m = err(metropolis_matrix(&g.ratios(), &g.proposal_set()))?;
    compare("Metropolis matrix", &m, &g.metropolis_x15, 15.0, 1e-12)
}

/// `<P, 1_J r_J>` over `J u {n}` with `r_n = 1`.
pub fn frobenius_objective(p_mat: &Matrix, r: &[f64], j: &ProposalSet) -> f64 {
    let n = r.len() + 1;
    let support: Vec<usize> = j.indices().iter().copied().chain([n - 1]).collect();
    let weight = |k: usize| if k == n - 1 { 1.0 } else { r[k] };
    support
        .iter()
        .flat_map(|&i| support.iter().map(move |&k| (i, k)))
        .map(|(i, k)| p_mat[(i, k)] * weight(k))
        .sum()
}

fn golden_hops(g: &Goldens) -> Check {
    let r = g.ratios();
    let j = g.proposal_set();
    let h = err(hops_matrix(&r, &j))?;
    compare("HOPS matrix", &h, &g.hops, 1.0, 1e-6)?;
    let m = err(metropolis_matrix(&r, &j))?;
    let (oh, om) = (frobenius_objective(&h, &r, &j), frobenius_objective(&m, &r, &j));
    ensure(oh >= om - 1e-9, || {
        format!("objective {oh} below Metropolis {om}")
    })
}

/// Log-weights on a dyadic grid, so that shifting by a grid constant is
/// exact in floating point.
fn grid_value(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(-(1i64 << 30)..(1i64 << 30)) as f64 / (1u64 << 20) as f64
}

fn shift_invariance(_: &Goldens) -> Check {
    let mut rng = rng(1);
    for case in 0..1000 {
        let n = rng.random_range(2..20);
        let lw: Vec<f64> = (0..n).map(|_| grid_value(&mut rng) / 64.0).collect();
        let c = grid_value(&mut rng);
        let shifted = LogWeights(lw.iter().map(|v| v + c).collect());
        let current = rng.random_range(0..n);
        let d = rng.random_range(1..n);
        let j = err(crate::samplers::propose_uniform(&mut rng, n, current, d))?;
        let a = err(ratios_for(&LogWeights(lw), current, &j))?;
        let b = err(ratios_for(&shifted, current, &j))?;
        ensure(a == b, || format!("case {case}: {a:?} vs {b:?}"))?;
    }
    Ok(())
}

fn self_consistency(_: &Goldens) -> Check {
    let mut rng = rng(2);
    for case in 0..200 {
        let n = rng.random_range(2..16);
        let p = random_measure(&mut rng, n);
        let j = ProposalSet::new((0..n - 1).collect(), n).unwrap();
        let r = err(ratios_for(&LogWeights::from_measure(&p), n - 1, &j))?;
        for (k, &v) in r.iter().enumerate() {
            let want = p.get(k) / p.get(n - 1);
            ensure(((v - want) / want).abs() <= 1e-14, || {
                format!("case {case}: r_{} = {v}, want {want}", k + 1)
            })?;
        }
    }
    Ok(())
}

fn rank_of(elements: &[Matrix]) -> usize {
    let n2 = elements[0].len();
    let stacked = Matrix::from_fn(elements.len(), n2, |i, k| elements[i].as_slice()[k]);
    stacked.rank(1e-10)
}

fn basis_completeness(_: &Goldens) -> Check {
    let mut rng = rng(3);
    for n in 2..=6 {
        let sto: Vec<Matrix> = (0..n)
            .flat_map(|j| (0..n - 1).map(move |k| (j, k)))
            .map(|(j, k)| sto_basis_element(n, j, k).map(|e| e.into_matrix()))
            .collect::<crate::Result<_>>()
            .map_err(|e| e.to_string())?;
        let rank = rank_of(&sto);
        ensure(rank == n * (n - 1), || {
            format!("n={n}: stochastic basis rank {rank}")
        })?;
        let r = random_measure(&mut rng, n).ratios_to_last();
        let pb: Vec<Matrix> = (0..n - 1)
            .flat_map(|j| (0..n - 1).map(move |k| (j, k)))
            .map(|(j, k)| p_basis_element(&r, j, k).map(|e| e.into_matrix()))
            .collect::<crate::Result<_>>()
            .map_err(|e| e.to_string())?;
        let rank = rank_of(&pb);
        ensure(rank == (n - 1) * (n - 1), || {
            format!("n={n}: p-basis rank {rank}")
        })?;
    }
    Ok(())
}

fn annihilation(_: &Goldens) -> Check {
    let mut rng = rng(4);
    for case in 0..200 {
        let n = rng.random_range(2..9);
        let p = random_measure(&mut rng, n);
        let r = p.ratios_to_last();
        for j in 0..n - 1 {
            for k in 0..n - 1 {
                let v = err(p_basis_element(&r, j, k))?.annihilation_violation(p.as_slice());
                ensure(v <= 1e-12, || {
                    format!("case {case} ({},{}): |p e| = {v:e}", j + 1, k + 1)
                })?;
            }
        }
    }
    Ok(())
}

fn jacobi_identity(_: &Goldens) -> Check {
    let mut rng = rng(5);
    for case in 0..100 {
        let n = rng.random_range(3..8);
        let r = random_measure(&mut rng, n).ratios_to_last();
        let mut pick = || -> crate::Result<(Matrix, Matrix)> {
            let (j, k) = (rng.random_range(0..n - 1), rng.random_range(0..n - 1));
            let sto = sto_basis_element(n, rng.random_range(0..n), rng.random_range(0..n - 1))?;
            Ok((sto.into_matrix(), p_basis_element(&r, j, k)?.into_matrix()))
        };
        let (x1, x2) = err(pick())?;
        let (y1, y2) = err(pick())?;
        let (z1, z2) = err(pick())?;
        for (x, y, z) in [(&x1, &y1, &z1), (&x2, &y2, &z2)] {
            let sum = commutator(x, &commutator(y, z))
                + commutator(y, &commutator(z, x))
                + commutator(z, &commutator(x, y));
            ensure(sum.amax() <= 1e-10, || {
                format!("case {case}: Jacobi sum {:e}", sum.amax())
            })?;
        }
    }
    Ok(())
}

fn closed_commutators(_: &Goldens) -> Check {
    let mut rng = rng(6);
    for n in 2..=5 {
        let r = random_measure(&mut rng, n).ratios_to_last();
        let sto: Vec<(usize, usize)> = (0..n).flat_map(|j| (0..n - 1).map(move |k| (j, k))).collect();
        for &a in &sto {
            for &b in &sto {
                let closed = err(sto_commutator_closed(n, a, b))?.into_matrix();
                let direct = commutator(
                    err(sto_basis_element(n, a.0, a.1))?.matrix(),
                    err(sto_basis_element(n, b.0, b.1))?.matrix(),
                );
                ensure(closed == direct, || format!("stochastic basis n={n} {a:?} {b:?}"))?;
            }
        }
        let pidx: Vec<(usize, usize)> = (0..n - 1).flat_map(|j| (0..n - 1).map(move |k| (j, k))).collect();
        for &a in &pidx {
            for &b in &pidx {
                let closed = err(p_commutator_closed(&r, a, b))?.into_matrix();
                let direct = commutator(
                    err(p_basis_element(&r, a.0, a.1))?.matrix(),
                    err(p_basis_element(&r, b.0, b.1))?.matrix(),
                );
                let diff = max_abs_diff(&closed, &direct);
                ensure(diff <= 1e-12, || format!("p-basis n={n} {a:?} {b:?}: {diff:e}"))?;
            }
        }
    }
    Ok(())
}

fn product_identity(_: &Goldens) -> Check {
    let mut rng = rng(7);
    for case in 0..500 {
        let n = rng.random_range(2..=8);
        let p = random_measure(&mut rng, n);
        let r = p.ratios_to_last();
        let d = rng.random_range(1..=(n - 1).min(4));
        let j = random_subset(&mut rng, n - 1, d);
        let r_j: Vec<f64> = j.indices().iter().map(|&i| r[i]).collect();
        let alpha = Matrix::from_fn(d, d, |_, _| rng.random_range(-1.0..1.0));
        let beta = Matrix::from_fn(d, d, |_, _| rng.random_range(-1.0..1.0));
        let lhs = err(lift_coefficients(&alpha, &r_j, &j, n))?.into_matrix()
            * err(lift_coefficients(&beta, &r_j, &j, n))?.into_matrix();
        let middle = Matrix::identity(d, d) + Matrix::from_fn(d, d, |_, v| r_j[v]);
        let gamma = &alpha * middle * &beta;
        let rhs = err(lift_coefficients(&gamma, &r_j, &j, n))?.into_matrix();
        let scale = rhs.abs().max().max(1.0);
        let diff = max_abs_diff(&lhs, &rhs);
        ensure(diff <= 1e-12 * scale, || {
            format!("case {case}: {diff:e} at scale {scale:e}")
        })?;
    }
    Ok(())
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo.ln()..hi.ln()).exp()
}

fn reduction(_: &Goldens) -> Check {
    let mut rng = rng(8);
    for _ in 0..100_000 {
        let r = log_uniform(&mut rng, 1e-8, 1e8);
        let b = err(barker_probs(&[r]))?;
        ensure((b.move_probs[0] - r / (1.0 + r)).abs() <= 1e-15, || {
            format!("Barker at r={r}")
        })?;
        let m = err(metropolis_probs(&[r]))?;
        ensure((m.move_probs[0] - r.min(1.0)).abs() <= 1e-15, || {
            format!("Metropolis at r={r}")
        })?;
    }
    Ok(())
}

fn stationarity(_: &Goldens) -> Check {
    let mut rng = rng(9);
    for case in 0..200 {
        let (p, r, j) = random_instance(&mut rng, 12);
        for (name, m) in [
            ("Barker", barker_matrix(&r, &j)),
            ("Metropolis", metropolis_matrix(&r, &j)),
        ] {
            let m = err(m)?;
            let rep = err(check_membership(&m, &p, 1e-10))?;
            ensure(
                rep.row_sum_violation <= 1e-10
                    && rep.min_entry >= -1e-12
                    && rep.stationarity_violation <= 1e-10,
                || format!("case {case} {name}: {rep:?}"),
            )?;
        }
    }
    Ok(())
}

fn detailed_balance_d1(_: &Goldens) -> Check {
    let mut rng = rng(10);
    for case in 0..200 {
        let n = rng.random_range(2..12);
        let p = random_measure(&mut rng, n);
        let r = p.ratios_to_last();
        let jj = rng.random_range(0..n - 1);
        let j = ProposalSet::new(vec![jj], n).unwrap();
        for m in [barker_matrix(&r, &j), metropolis_matrix(&r, &j)] {
            let m = err(m)?;
            let v = (p.get(jj) * m[(jj, n - 1)] - p.get(n - 1) * m[(n - 1, jj)]).abs();
            ensure(v <= 1e-12, || format!("case {case}: imbalance {v:e}"))?;
        }
    }
    Ok(())
}

fn saturated_regime(_: &Goldens) -> Check {
    let mut rng = rng(11);
    for case in 0..1000 {
        let d = rng.random_range(8..32);
        let r: Vec<f64> = (0..d).map(|_| log_uniform(&mut rng, 1e3, 1e6)).collect();
        let b = err(barker_probs(&r))?;
        let m = err(metropolis_probs(&r))?;
        let diff = b
            .move_probs
            .iter()
            .zip(&m.move_probs)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        ensure(diff <= 1e-3, || format!("case {case}: difference {diff:e}"))?;
    }
    Ok(())
}

fn check_distribution(a: &crate::samplers::AcceptanceDistribution, what: &str) -> Check {
    ensure((a.total() - 1.0).abs() <= 1e-12 && a.min_entry() >= 0.0, || {
        format!("{what}: total {} min {}", a.total(), a.min_entry())
    })
}

fn acceptance_sums(_: &Goldens) -> Check {
    let mut rng = rng(12);
    for case in 0..100_000 {
        let d = rng.random_range(1..16);
        let r: Vec<f64> = (0..d).map(|_| log_uniform(&mut rng, 1e-6, 1e6)).collect();
        check_distribution(&err(barker_probs(&r))?, &format!("case {case} HOBS"))?;
        check_distribution(&err(metropolis_probs(&r))?, &format!("case {case} HOMS"))?;
        if case % 100 == 0 {
            let h = err(crate::hops::hops_probs(&r[..d.min(6)]))?;
            check_distribution(&h, &format!("case {case} HOPS"))?;
        }
    }
    Ok(())
}

fn hops_membership(_: &Goldens) -> Check {
    let mut rng = rng(13);
    for case in 0..200 {
        let (p, r, j) = random_instance(&mut rng, 10);
        let m = err(hops_matrix(&r, &j))?;
        let rep = err(check_membership(&m, &p, 1e-9))?;
        ensure(rep.is_member(), || format!("case {case}: {:?}", rep.violated))?;
    }
    Ok(())
}

fn objective_consistency(_: &Goldens) -> Check {
    let mut rng = rng(14);
    for case in 0..200 {
        let (_, r, j) = random_instance(&mut rng, 10);
        let obj = HopsObjective::default();
        let tau = err(solve_tau(&r, &j, obj))?;
        let x = obj.x.dense(&r, &j);
        let y = obj.y.dense(&r, &j);
        let program = err(build_lp(&r, &j, &x, &y))?;
        let w = program.objective_at(&tau);
        let pm = err(recover_transition(&tau, &r, &j))?;
        let r_sum: f64 = j.indices().iter().map(|&i| r[i]).sum::<f64>() + 1.0;
        let direct = r_sum - frobenius_objective(&pm, &r, &j);
        ensure((w - direct).abs() <= 1e-9, || {
            format!("case {case}: w.tau = {w}, direct {direct}")
        })?;
    }
    Ok(())
}

fn dominance_over_homs(_: &Goldens) -> Check {
    let mut rng = rng(15);
    for case in 0..200 {
        let (_, r, j) = random_instance(&mut rng, 10);
        let h = frobenius_objective(&err(hops_matrix(&r, &j))?, &r, &j);
        let m = frobenius_objective(&err(metropolis_matrix(&r, &j))?, &r, &j);
        ensure(h >= m - 1e-9, || format!("case {case}: HOPS {h} < HOMS {m}"))?;
    }
    Ok(())
}

fn sign_convention(_: &Goldens) -> Check {
    let mut rng = rng(16);
    let a = HopsObjective::default();
    let b = HopsObjective {
        x: ObjectiveVector::NegOnesJ,
        y: ObjectiveVector::RJ,
    };
    for case in 0..200 {
        let (_, r, j) = random_instance(&mut rng, 8);
        let pa = err(build_lp(&r, &j, &a.x.dense(&r, &j), &a.y.dense(&r, &j)))?;
        let pb = err(build_lp(&r, &j, &b.x.dense(&r, &j), &b.y.dense(&r, &j)))?;
        ensure(pa.objective == pb.objective, || {
            format!("case {case}: objectives differ")
        })?;
        let ta = err(solve_tau(&r, &j, a))?;
        let tb = err(solve_tau(&r, &j, b))?;
        ensure(ta == tb, || format!("case {case}: solutions differ"))?;
    }
    Ok(())
}

fn random_lps(tag: u64, count: usize, max_m: usize, max_k: usize) -> Vec<lp::LinearProgram> {
    let mut rng = rng(tag);
    (0..count)
        .map(|_| {
            let m = rng.random_range(1..=max_m);
            let k = rng.random_range(1..=max_k);
            random_feasible_lp(&mut rng, m, k)
        })
        .collect()
}

fn lp_feasibility(_: &Goldens) -> Check {
    for (case, p) in random_lps(17, 200, 12, 30).iter().enumerate() {
        let s = err(lp::solve(p))?;
        ensure(s.is_optimal(), || format!("case {case}: status {:?}", s.status))?;
        let v = p.max_violation(&s.x);
        ensure(v <= 1e-9, || format!("case {case}: violation {v:e}"))?;
    }
    Ok(())
}

fn weak_duality(_: &Goldens) -> Check {
    let mut rng = rng(18);
    for (case, p) in random_lps(19, 100, 6, 10).iter().enumerate() {
        let s = err(lp::solve(p))?;
        for _ in 0..2000 {
            let x: Vec<f64> = p
                .lower
                .iter()
                .zip(&p.upper)
                .map(|(l, u)| rng.random_range(*l..=*u))
                .collect();
            if p.max_violation(&x) <= 0.0 {
                let v = p.objective(&x);
                ensure(v >= s.objective - 1e-7, || {
                    format!("case {case}: sampled {v} beats {}", s.objective)
                })?;
            }
        }
    }
    Ok(())
}

fn lp_determinism(_: &Goldens) -> Check {
    for (case, p) in random_lps(20, 100, 12, 30).iter().enumerate() {
        let a = err(lp::solve(p))?;
        let b = err(lp::solve(p))?;
        ensure(a == b, || format!("case {case}: repeated solves differ"))?;
    }
    Ok(())
}

fn lp_vertex_agreement(_: &Goldens) -> Check {
    for (case, p) in random_lps(21, 100, 5, 8).iter().enumerate() {
        let s = err(lp::solve(p))?;
        let (_, best) = lp_vertex_enumeration(p, 1e-9).ok_or_else(|| format!("case {case}: no vertex"))?;
        ensure((s.objective - best).abs() <= 1e-7, || {
            format!("case {case}: simplex {} vs {best}", s.objective)
        })?;
    }
    Ok(())
}

fn flip_symmetry(_: &Goldens) -> Check {
    for spins in 1..=9 {
        let model = err(SkModel::random(spins, 1.0, spins as u64))?;
        let p = err(model.exact_distribution())?;
        let mask = (1usize << spins) - 1;
        for i in 0..p.len() {
            let v = (p.get(i) - p.get(!i & mask)).abs();
            ensure(v <= 1e-12, || format!("N={spins}, state {}: {v:e}", i + 1))?;
        }
    }
    Ok(())
}

fn sk_ratios(_: &Goldens) -> Check {
    let mut rng = rng(22);
    let model = err(SkModel::random(8, 1.0, 3))?;
    let p = err(model.exact_distribution())?;
    for case in 0..1000 {
        let a = rng.random_range(0..model.n_states());
        let b = (a + rng.random_range(1..model.n_states())) % model.n_states();
        let r = err(ratios_for(
            &model,
            a,
            &ProposalSet::new(vec![b], model.n_states()).unwrap(),
        ))?[0];
        let want = p.get(b) / p.get(a);
        ensure(((r - want) / want).abs() <= 1e-10, || {
            format!("case {case}: {r} vs {want}")
        })?;
    }
    Ok(())
}

/// The 4-spin model and exact kernels shared by the kernel checks.
pub fn small_kernels() -> crate::Result<(ProbabilityMeasure, TaggedKernels)> {
    let model = SkModel::random(4, 0.25, 0)?;
    let p = model.exact_distribution()?;
    let mut out = Vec::new();
    for kind in [SamplerKind::Hobs, SamplerKind::Homs, SamplerKind::Hops] {
        for d in [1, 2, 4] {
            out.push((kind, d, expected_kernel(&model, kind, d)?));
        }
    }
    Ok((p, out))
}

fn kernel_stationarity(_: &Goldens) -> Check {
    let (p, kernels) = err(small_kernels())?;
    for (kind, d, k) in kernels {
        let pi = err(invariant_measure(&k))?;
        let tv = err(total_variation(&pi, &p))?;
        ensure(tv <= 1e-8, || format!("{kind} d={d}: TV {tv:e}"))?;
    }
    Ok(())
}

fn tv_monotone(_: &Goldens) -> Check {
    let (p, kernels) = err(small_kernels())?;
    for (kind, d, k) in kernels {
        for start in [0, 5, 15] {
            let mu0 = err(ProbabilityMeasure::dirac(p.len(), start))?;
            let c = err(tv_curve_exact(&k, &p, &mu0, 100))?;
            if let Some(t) = (1..c.len()).find(|&t| c[t] > c[t - 1] + 1e-14) {
                return Err(format!("{kind} d={d} from {}: TV rises at t={t}", start + 1));
            }
        }
    }
    Ok(())
}

fn tv_metric(_: &Goldens) -> Check {
    let mut rng = rng(23);
    for case in 0..1000 {
        let n = rng.random_range(2..30);
        let (a, b, c) = (
            random_measure(&mut rng, n),
            random_measure(&mut rng, n),
            random_measure(&mut rng, n),
        );
        let ab = err(total_variation(&a, &b))?;
        let ba = err(total_variation(&b, &a))?;
        let bc = err(total_variation(&b, &c))?;
        let ac = err(total_variation(&a, &c))?;
        ensure((ab - ba).abs() <= 1e-12, || format!("case {case}: asymmetric"))?;
        ensure(ac <= ab + bc + 1e-12, || {
            format!("case {case}: triangle inequality fails")
        })?;
        ensure((0.0..=1.0).contains(&ab), || {
            format!("case {case}: TV {ab} outside [0, 1]")
        })?;
    }
    Ok(())
}

fn csv_schema(_: &Goldens) -> Check {
    let spec = RunSpec {
        spins: 4,
        steps: 6,
        chains: 50,
        ds: vec![1, 3],
        ..RunSpec::default()
    };
    let model = err(spec.model())?;
    let csv = bench_csv(&err(sk_bench_curves(&model, &spec))?);
    ensure(csv.ends_with('\n'), || "missing final newline".into())?;
    let mut lines = csv.lines();
    ensure(lines.next() == Some(BENCH_HEADER), || "wrong header".into())?;
    let mut rows = 0;
    for (i, line) in lines.enumerate() {
        let f: Vec<&str> = line.split(',').collect();
        ensure(f.len() == 5, || format!("row {}: {} fields", i + 1, f.len()))?;
        let tv: f64 = f[3]
            .parse()
            .map_err(|_| format!("row {}: tv '{}'", i + 1, f[3]))?;
        ensure(tv.to_string() == f[3], || {
            format!("row {}: tv not at full precision", i + 1)
        })?;
        let d: usize = f[1].parse().map_err(|_| format!("row {}: d", i + 1))?;
        let t: usize = f[2].parse().map_err(|_| format!("row {}: t", i + 1))?;
        ensure(f[4] == (d * t).to_string(), || format!("row {}: evals", i + 1))?;
        rows += 1;
    }
    ensure(rows == 3 * 2 * 7, || format!("{rows} rows"))
}

fn paired_seed(_: &Goldens) -> Check {
    let model = err(SkModel::random(6, 1.0, 4))?;
    for d in [1, 3, 7] {
        for chain in 0..20u64 {
            let mut states: Vec<ChainState> = (0..3)
                .map(|_| ChainState::new(&model, 0, chain_rng(99, chain)))
                .collect::<crate::Result<_>>()
                .map_err(|e| e.to_string())?;
            let kinds = [SamplerKind::Hobs, SamplerKind::Homs, SamplerKind::Hops];
            for step in 0..50 {
                for (s, &k) in states.iter_mut().zip(&kinds) {
                    err(chain_step(s, &model, k, d, HopsObjective::default()))?;
                }
                ensure(
                    states[0].rng == states[1].rng && states[1].rng == states[2].rng,
                    || format!("d={d} chain {chain}: generator states diverge at step {step}"),
                )?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn goldens_pass_and_corruption_is_named() {
        let g = Goldens::default();
        assert_eq!(golden_barker(&g), Ok(()));
        let mut bad = g.clone();
        bad.barker_x16[0] = 2.0;
        assert!(golden_barker(&bad).is_err());
        let mut bad = g.clone();
        bad.hops[24] = 0.5;
        assert!(golden_hops(&bad).is_err());
    }
}
