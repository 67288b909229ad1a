//! Independent reference computations used only to check the closed forms
//! and the simplex solver: a Taylor scaling-and-squaring exponential,
//! commutators by direct multiplication, and LP vertex enumeration.

use rand::Rng;

use crate::lp::LinearProgram;
use crate::Matrix;

const TAYLOR_ORDER: usize = 13;

/// `exp(a)` by scaling `a` to 1-norm at most 1/2, summing the Taylor
/// series through order 13, and squaring back.
pub fn expm_series(a: &Matrix) -> Matrix {
    let n = a.nrows();
    let norm1 = (0..n).map(|j| a.column(j).abs().sum()).fold(0.0, f64::max);
    let squarings = if norm1 > 0.5 {
        (norm1 / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let b = a / 2f64.powi(squarings as i32);
    let mut term = Matrix::identity(n, n);
    let mut sum = Matrix::identity(n, n);
    for i in 1..=TAYLOR_ORDER {
        term = &term * &b / i as f64;
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

pub fn commutator(x: &Matrix, y: &Matrix) -> Matrix {
    x * y - y * x
}

/// Best vertex of `min c.x, A x <= b, lower <= x <= upper` found by
/// trying every choice of `m` active constraints, or `None` if no vertex is
/// feasible within `tol`. Exponential; meant for `m <= 5`, `k <= 8`.
pub fn lp_vertex_enumeration(lp: &LinearProgram, tol: f64) -> Option<(Vec<f64>, f64)> {
    let m = lp.num_vars();
    let k = lp.num_constraints();
    let mut best: Option<(Vec<f64>, f64)> = None;
    // Each variable is pinned low (0), pinned high (1), or free (2).
    let mut state = vec![0u8; m];
    loop {
        let free: Vec<usize> = (0..m).filter(|&j| state[j] == 2).collect();
        let f = free.len();
        if f <= k {
            let mut rows: Vec<usize> = (0..f).collect();
            loop {
                if let Some(x) = vertex(lp, &state, &free, &rows) {
                    if lp.max_violation(&x) <= tol {
                        let obj = lp.objective(&x);
                        if best.as_ref().is_none_or(|(_, b)| obj < *b) {
                            best = Some((x, obj));
                        }
                    }
                }
                if !next_subset(&mut rows, k) {
                    break;
                }
            }
        }
        if !next_state(&mut state) {
            break;
        }
    }
    best
}

fn vertex(lp: &LinearProgram, state: &[u8], free: &[usize], rows: &[usize]) -> Option<Vec<f64>> {
    let m = state.len();
    let mut x: Vec<f64> = (0..m)
        .map(|j| match state[j] {
            0 => lp.lower[j],
            1 => lp.upper[j],
            _ => 0.0,
        })
        .collect();
    let f = free.len();
    if f == 0 {
        return Some(x);
    }
    let sys = Matrix::from_fn(f, f, |a, b| lp.row(rows[a])[free[b]]);
    let rhs = nalgebra::DVector::from_fn(f, |a, _| {
        let row = lp.row(rows[a]);
        lp.b[rows[a]]
            - (0..m)
                .filter(|&j| state[j] != 2)
                .map(|j| row[j] * x[j])
                .sum::<f64>()
    });
    let lu = sys.lu();
    let diag = lu.u().diagonal().abs();
    if diag.min() < 1e-12 * diag.max().max(1.0) {
        return None;
    }
    let sol = lu.solve(&rhs)?;
    for (b, &j) in free.iter().enumerate() {
        x[j] = sol[b];
    }
    Some(x)
}

fn next_state(s: &mut [u8]) -> bool {
    for v in s.iter_mut() {
        if *v < 2 {
            *v += 1;
            return true;
        }
        *v = 0;
    }
    false
}

fn next_subset(c: &mut [usize], k: usize) -> bool {
    let f = c.len();
    for i in (0..f).rev() {
        if c[i] < k - f + i {
            c[i] += 1;
            for t in i + 1..f {
                c[t] = c[t - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// A random LP with `m` variables and `k` rows, made feasible by building
/// `b` from a random interior point of the box.
pub fn random_feasible_lp<R: Rng + ?Sized>(rng: &mut R, m: usize, k: usize) -> LinearProgram {
    let lower: Vec<f64> = (0..m).map(|_| rng.random_range(-2.0..0.0)).collect();
    let upper: Vec<f64> = lower.iter().map(|l| l + rng.random_range(0.5..3.0)).collect();
    let x0: Vec<f64> = lower
        .iter()
        .zip(&upper)
        .map(|(l, u)| rng.random_range(*l..*u))
        .collect();
    let a: Vec<f64> = (0..k * m).map(|_| rng.random_range(-1.0..1.0)).collect();
    let b: Vec<f64> = (0..k)
        .map(|i| {
            let ax: f64 = (0..m).map(|j| a[i * m + j] * x0[j]).sum();
            ax + rng.random_range(0.0..0.5)
        })
        .collect();
    let c: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
    LinearProgram::new(c, a, b, lower, upper).expect("consistent dimensions")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn series_exp_of_diagonal_and_nilpotent() {
        let a = Matrix::from_diagonal(&nalgebra::DVector::from_vec(vec![-3.0, 0.5, 2.0]));
        let e = expm_series(&a);
        for (i, v) in [-3.0f64, 0.5, 2.0].iter().enumerate() {
            assert_abs_diff_eq!(e[(i, i)], v.exp(), epsilon = 1e-12 * v.exp().max(1.0));
        }
        let n = Matrix::from_row_slice(2, 2, &[0.0, 5.0, 0.0, 0.0]);
        assert_abs_diff_eq!(
            expm_series(&n),
            Matrix::from_row_slice(2, 2, &[1.0, 5.0, 0.0, 1.0]),
            epsilon = 1e-12
        );
    }

    #[test]
    fn enumeration_finds_forced_optimum() {
        let lp = LinearProgram::new(
            vec![-1.0, -1.0],
            vec![1.0, 1.0],
            vec![1.0],
            vec![0.0; 2],
            vec![1.0; 2],
        )
        .unwrap();
        let (_, obj) = lp_vertex_enumeration(&lp, 1e-9).unwrap();
        assert_abs_diff_eq!(obj, -1.0, epsilon = 1e-12);
        let lp = LinearProgram::new(vec![1.0], vec![1.0], vec![-1.0], vec![0.0], vec![1.0]).unwrap();
        assert!(lp_vertex_enumeration(&lp, 1e-9).is_none());
    }
}
