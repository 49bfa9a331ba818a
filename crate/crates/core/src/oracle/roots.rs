//! Reference roots by Aberth-Ehrlich iteration and greedy root matching.

use std::f64::consts::PI;

use crate::error::SeriesError;
use crate::poly::PolynomialSpec;
use crate::series::residual;
use crate::ComplexScalar;

const ZERO: ComplexScalar = ComplexScalar::new(0.0, 0.0);
const MAX_ITERATIONS: usize = 500;

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceRoots {
    pub roots: Vec<ComplexScalar>,
    pub converged: bool,
    pub iterations: usize,
    /// Largest `|x^n - rhs(x) t^n|` over the returned roots.
    pub max_residual: f64,
}

/// `p(z)` and `p'(z)` for monic `p` with lower coefficients `c[0..n]`.
fn eval_with_derivative(c: &[ComplexScalar], z: ComplexScalar) -> (ComplexScalar, ComplexScalar) {
    let mut p = ComplexScalar::new(1.0, 0.0);
    let mut dp = ZERO;
    for &ck in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + ck;
    }
    (p, dp)
}

/// `sum_k |c_k| |z|^k + |z|^n`: rounding scale of a residual at `z`.
fn eval_scale(c: &[ComplexScalar], z: ComplexScalar) -> f64 {
    let r = z.norm();
    c.iter().rev().fold(1.0, |acc, ck| acc * r + ck.norm())
}

/// All `n` roots of `x^n - t^n (a_{n-1} x^{n-1} + ... + a_0)`.
///
/// Starts from points near the circle of radius `max_k |a_k t^n|^{1/(n-k)}` with
/// a fixed angular offset, so the result depends only on `spec` and `t`. Converged
/// means every root has `|p(x)| <= 1e-12 sum_k |c_k| |x|^k`.
pub fn reference_roots(spec: &PolynomialSpec, t: f64) -> ReferenceRoots {
    let n = spec.degree();
    if t == 0.0 {
        return ReferenceRoots {
            roots: vec![ZERO; n],
            converged: true,
            iterations: 0,
            max_residual: 0.0,
        };
    }
    let tn = t.powi(n as i32);
    let c: Vec<ComplexScalar> = spec.coeffs().iter().map(|&a| -a * tn).collect();

    let radius = c
        .iter()
        .enumerate()
        .map(|(k, ck)| ck.norm().powf(1.0 / (n - k) as f64))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut z: Vec<ComplexScalar> = (0..n)
        .map(|j| {
            ComplexScalar::from_polar(
                radius * (1.0 + 0.01 * j as f64 / n as f64),
                2.0 * PI * j as f64 / n as f64 + 0.4,
            )
        })
        .collect();

    let mut iterations = 0;
    let mut done = vec![false; n];
    while iterations < MAX_ITERATIONS && done.iter().any(|d| !d) {
        iterations += 1;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp) = eval_with_derivative(&c, z[i]);
            if p.norm() <= 1e-15 * eval_scale(&c, z[i]) {
                done[i] = true;
                continue;
            }
            let ratio = p / dp;
            let repulsion = (0..n)
                .filter(|&j| j != i)
                .fold(ZERO, |acc, j| acc + (z[i] - z[j]).inv());
            let step = ratio / (ComplexScalar::new(1.0, 0.0) - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                continue;
            }
            z[i] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z[i].norm() {
                done[i] = true;
            }
        }
    }

    let converged = z.iter().all(|&x| {
        let (p, _) = eval_with_derivative(&c, x);
        p.norm() <= 1e-12 * eval_scale(&c, x)
    });
    let max_residual = z
        .iter()
        .map(|&x| residual(spec, x, t).norm())
        .fold(0.0, f64::max);
    ReferenceRoots {
        roots: z,
        converged,
        iterations,
        max_residual,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Matching {
    /// Estimate `i` is paired with reference `assignment[i]`.
    pub assignment: Vec<usize>,
    /// Distance of each estimate to its partner.
    pub distances: Vec<f64>,
    /// NaN if any estimate is not finite.
    pub max_distance: f64,
    /// `distance_matrix[i][j] = |estimate_i - reference_j|`.
    pub distance_matrix: Vec<Vec<f64>>,
}

/// Greedy assignment: repeatedly pair the closest remaining estimate and reference.
pub fn match_roots(
    estimates: &[ComplexScalar],
    reference: &[ComplexScalar],
) -> Result<Matching, SeriesError> {
    if estimates.len() != reference.len() {
        return Err(SeriesError::LengthMismatch {
            left: estimates.len(),
            right: reference.len(),
        });
    }
    let n = estimates.len();
    let distance_matrix: Vec<Vec<f64>> = estimates
        .iter()
        .map(|e| reference.iter().map(|r| (e - r).norm()).collect())
        .collect();
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    pairs.sort_by(|&(i, j), &(k, l)| {
        distance_matrix[i][j]
            .total_cmp(&distance_matrix[k][l])
            .then((i, j).cmp(&(k, l)))
    });

    let mut assignment = vec![usize::MAX; n];
    let mut taken = vec![false; n];
    for (i, j) in pairs {
        if assignment[i] == usize::MAX && !taken[j] {
            assignment[i] = j;
            taken[j] = true;
        }
    }
    let distances: Vec<f64> = (0..n).map(|i| distance_matrix[i][assignment[i]]).collect();
    let max_distance =
        distances.iter().copied().fold(
            0.0,
            |acc: f64, d| if d.is_nan() || d > acc { d } else { acc },
        );
    Ok(Matching {
        assignment,
        distances,
        max_distance,
        distance_matrix,
    })
}
