//! The vector recursion for `W(q)`, the master coefficients `beta_m`, and
//! evaluation of the periodic partial sums.
//!
//! `W(q)` lives in `C^{n-1}`. Starting from
//!
//! ```text
//! W(1) = a_0 (1, ..., 1)'
//! W(2) = (a_1 / n) (1, 2, ..., n-1)'
//! ```
//!
//! each later vector is
//!
//! ```text
//! W(q) = ( -M sum_{p=1}^{q-2} W(p+1)_1 W(q-p) + U sum_{p=1}^{min(n-1,q-1)} a_p W(q-p)_p ) / a_0
//! ```
//!
//! and `beta_m = rho^{m/n} e^{i m theta / n} W(m)_1 / a_0`. The recursion does
//! not depend on which n-th root of `a_0` is taken, so one sequence serves all
//! `n` roots through the phase factor `e^{2 pi i k m / n}`.

use std::f64::consts::PI;

use crate::convergence::{ConvergenceReport, Radius};
use crate::error::SeriesError;
use crate::poly::PolynomialSpec;
use crate::ComplexScalar;

/// Below this modulus `W(m)_1` is treated as an exact zero.
pub const W1_ZERO_ABS: f64 = 1e-300;

/// `W(m)_1` is also treated as zero when it is this small relative to the sum
/// of the moduli of the terms it was accumulated from (pure cancellation).
pub const W1_ZERO_REL: f64 = 64.0 * f64::EPSILON;

const ZERO: ComplexScalar = ComplexScalar::new(0.0, 0.0);

/// `e^{2 pi i u m / n}` with the phase reduced to `(-n/2, n/2]` before the
/// trigonometric call.
///
/// Integer `u` gives bit-identical factors for `u` and `u + n`, and exact
/// conjugates for `u` and `n - u`. Quarter turns are returned exactly.
pub fn phase_factor(u: f64, m: usize, n: usize) -> ComplexScalar {
    let nf = n as f64;
    let mut r = (u.rem_euclid(nf) * m as f64).rem_euclid(nf);
    if 2.0 * r > nf {
        r -= nf;
    }
    if r == 0.0 {
        ComplexScalar::new(1.0, 0.0)
    } else if 2.0 * r == nf {
        ComplexScalar::new(-1.0, 0.0)
    } else if 4.0 * r == nf {
        ComplexScalar::new(0.0, 1.0)
    } else if 4.0 * r == -nf {
        ComplexScalar::new(0.0, -1.0)
    } else {
        let angle = 2.0 * PI * r / nf;
        ComplexScalar::new(angle.cos(), angle.sin())
    }
}

/// The fixed vectors of the recursion: `u` selects the first component, `U`
/// is `(1, 2, ..., n-1)/n`, and `A_p` carries `a_p` in slot `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureVectors {
    pub u_row: Vec<f64>,
    pub u_col: Vec<f64>,
    pub a_rows: Vec<Vec<ComplexScalar>>,
}

impl StructureVectors {
    pub fn new(spec: &PolynomialSpec) -> Self {
        let n = spec.degree();
        let dim = n - 1;
        let mut u_row = vec![0.0; dim];
        u_row[0] = 1.0;
        let u_col = (1..n).map(|i| i as f64 / n as f64).collect();
        let a_rows = (1..n)
            .map(|p| {
                let mut row = vec![ZERO; dim];
                row[p - 1] = spec.coeffs()[p];
                row
            })
            .collect();
        StructureVectors {
            u_row,
            u_col,
            a_rows,
        }
    }
}

/// The `(n-1) x (n-1)` structural matrix: with 1-based `(i, j)`, entries are
/// `i/n` on and above the diagonal and `-(n-i)/n` below it.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixM {
    n: usize,
    entries: Vec<f64>,
}

pub fn build_matrix_m(n: usize) -> Result<MatrixM, SeriesError> {
    if n < 2 {
        return Err(SeriesError::Dimension(n));
    }
    let dim = n - 1;
    let nf = n as f64;
    let mut entries = Vec::with_capacity(dim * dim);
    for i in 1..=dim {
        for j in 1..=dim {
            entries.push(if i > j {
                -((n - i) as f64) / nf
            } else {
                i as f64 / nf
            });
        }
    }
    Ok(MatrixM { n, entries })
}

impl MatrixM {
    pub fn dim(&self) -> usize {
        self.n - 1
    }

    /// 0-based entry.
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.dim() + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        let d = self.dim();
        &self.entries[row * d..(row + 1) * d]
    }

    pub fn row_abs_sums(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|i| self.row(i).iter().map(|x| x.abs()).sum())
            .collect()
    }

    /// Row-sum (infinity) norm, computed entrywise.
    pub fn norm_inf(&self) -> f64 {
        self.row_abs_sums().into_iter().fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, v: &[ComplexScalar]) -> Vec<ComplexScalar> {
        (0..self.dim())
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(ZERO, |acc, (&m, &x)| acc + x * m)
            })
            .collect()
    }
}

/// `W(1)..W(m_max)` plus, for each `W(q)_1`, the sum of the moduli of the
/// terms that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct WSequence {
    pub w: Vec<Vec<ComplexScalar>>,
    pub w1_scale: Vec<f64>,
}

/// Runs the recursion up to `W(m_max)`.
pub fn compute_w_sequence(spec: &PolynomialSpec, m_max: usize) -> Result<WSequence, SeriesError> {
    if m_max < 2 {
        return Err(SeriesError::TooFewTerms { min: 2, got: m_max });
    }
    let n = spec.degree();
    let dim = n - 1;
    let a = spec.coeffs();
    let a0 = a[0];
    let a0_abs = a0.norm();
    let m = build_matrix_m(n)?;
    let sv = StructureVectors::new(spec);
    let nf = n as f64;

    let mut w: Vec<Vec<ComplexScalar>> = Vec::with_capacity(m_max);
    let mut w1_scale = Vec::with_capacity(m_max);
    w.push(vec![a0; dim]);
    w1_scale.push(a0_abs);
    let w2: Vec<_> = (1..n).map(|i| a[1] * (i as f64 / nf)).collect();
    w1_scale.push(w2[0].norm());
    w.push(w2);

    let mut acc = vec![ZERO; dim];
    let mut acc_abs = vec![0.0; dim];
    for q in 3..=m_max {
        acc.fill(ZERO);
        acc_abs.fill(0.0);
        for p in 1..=q - 2 {
            // W is stored 0-based: W(j) is w[j - 1]
            let lead = w[p][0];
            let lead_abs = lead.norm();
            for ((s, s_abs), &x) in acc.iter_mut().zip(acc_abs.iter_mut()).zip(&w[q - p - 1]) {
                *s += lead * x;
                *s_abs += lead_abs * x.norm();
            }
        }
        let mut source = ZERO;
        let mut source_abs = 0.0;
        for p in 1..=(n - 1).min(q - 1) {
            let dot: ComplexScalar = sv.a_rows[p - 1]
                .iter()
                .zip(&w[q - p - 1])
                .fold(ZERO, |s, (&ap, &x)| s + ap * x);
            source += dot;
            source_abs += a[p].norm() * w[q - p - 1][p - 1].norm();
        }
        let m_acc = m.mul_vec(&acc);
        let next: Vec<ComplexScalar> = m_acc
            .iter()
            .zip(&sv.u_col)
            .map(|(&ma, &uc)| (source * uc - ma) / a0)
            .collect();
        if next.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(SeriesError::Divergence { q });
        }
        let row0_abs: f64 = m
            .row(0)
            .iter()
            .zip(&acc_abs)
            .map(|(x, s)| x.abs() * s)
            .sum();
        w1_scale.push((row0_abs + sv.u_col[0] * source_abs) / a0_abs);
        w.push(next);
    }
    Ok(WSequence { w, w1_scale })
}

/// `beta_m = rho^{m/n} e^{i m theta/n} W(m)_1 / a_0` for `m = 1..=w.len()`.
pub fn compute_beta(
    spec: &PolynomialSpec,
    w: &[Vec<ComplexScalar>],
) -> Result<Vec<ComplexScalar>, SeriesError> {
    let n = spec.degree() as f64;
    let (rho, theta, a0) = (spec.rho(), spec.theta(), spec.a0());
    w.iter()
        .enumerate()
        .map(|(idx, wm)| {
            let m = idx + 1;
            let ratio = wm[0] / a0;
            if ratio == ZERO {
                return Ok(ZERO);
            }
            let modulus = rho.powf(m as f64 / n);
            if !modulus.is_finite() || modulus == 0.0 {
                return Err(SeriesError::BetaOverflow { m });
            }
            let phase = if theta == 0.0 {
                ComplexScalar::new(1.0, 0.0)
            } else {
                ComplexScalar::from_polar(1.0, m as f64 * theta / n)
            };
            let beta = phase * modulus * ratio;
            if !beta.re.is_finite() || !beta.im.is_finite() {
                return Err(SeriesError::BetaOverflow { m });
            }
            Ok(beta)
        })
        .collect()
}

/// A solved series: the `W` vectors and the master coefficients `beta_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesState {
    spec: PolynomialSpec,
    w: Vec<Vec<ComplexScalar>>,
    w1_scale: Vec<f64>,
    beta: Vec<ComplexScalar>,
}

impl SeriesState {
    pub fn compute(spec: &PolynomialSpec, m_max: usize) -> Result<Self, SeriesError> {
        let WSequence { w, w1_scale } = compute_w_sequence(spec, m_max)?;
        let beta = compute_beta(spec, &w)?;
        Ok(SeriesState {
            spec: spec.clone(),
            w,
            w1_scale,
            beta,
        })
    }

    pub fn spec(&self) -> &PolynomialSpec {
        &self.spec
    }

    pub fn m_max(&self) -> usize {
        self.beta.len()
    }

    /// `W(q)`, 1-based.
    pub fn w(&self, q: usize) -> &[ComplexScalar] {
        &self.w[q - 1]
    }

    /// `max_i |W(q)_i|`.
    pub fn w_norm(&self, q: usize) -> f64 {
        self.w(q).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `beta_m`, 1-based.
    pub fn beta(&self, m: usize) -> ComplexScalar {
        self.beta[m - 1]
    }

    pub fn betas(&self) -> &[ComplexScalar] {
        &self.beta
    }

    /// Sum of moduli of the terms accumulated into `W(m)_1`.
    pub fn w1_scale(&self, m: usize) -> f64 {
        self.w1_scale[m - 1]
    }

    /// Whether `W(m)_1` is zero up to underflow or rounding-level cancellation.
    pub fn w1_vanishes(&self, m: usize) -> bool {
        let v = self.w(m)[0].norm();
        v < W1_ZERO_ABS || v <= W1_ZERO_REL * self.w1_scale(m)
    }

    /// `b_m = beta_m e^{2 pi i k m / n}` for branch `k`.
    pub fn b(&self, m: usize, k: usize) -> ComplexScalar {
        self.beta(m) * phase_factor(k as f64, m, self.spec.degree())
    }

    /// Partial sum `x(t, u)_q = sum_{m=1}^{q} beta_m e^{2 pi i u m / n} t^m`.
    pub fn evaluate_x(&self, t: f64, u: f64, q: usize) -> Result<ComplexScalar, SeriesError> {
        if q > self.m_max() {
            return Err(SeriesError::TermsExceeded {
                q,
                m_max: self.m_max(),
            });
        }
        let n = self.spec.degree();
        let mut tm = 1.0;
        let mut sum = ZERO;
        for (idx, &beta) in self.beta[..q].iter().enumerate() {
            tm *= t;
            sum += beta * phase_factor(u, idx + 1, n) * tm;
        }
        Ok(sum)
    }

    /// The `n` partial sums `x(t, k)_q`, `k = 0..n`, with residuals attached.
    pub fn roots_at(
        &self,
        t: f64,
        q: usize,
        report: Option<&ConvergenceReport>,
    ) -> Result<Vec<RootEvaluation>, SeriesError> {
        let status = match report.map(|r| r.rc_estimate) {
            None => ConvergenceStatus::Unknown,
            Some(Radius::Unbounded) => ConvergenceStatus::Inside,
            Some(Radius::Finite(rc)) if t.abs() < rc => ConvergenceStatus::Inside,
            Some(Radius::Finite(_)) => ConvergenceStatus::OutsideEstimate,
        };
        (0..self.spec.degree())
            .map(|k| {
                let value = self.evaluate_x(t, k as f64, q)?;
                Ok(RootEvaluation {
                    t,
                    k,
                    q,
                    value,
                    residual: residual(&self.spec, value, t),
                    status,
                })
            })
            .collect()
    }
}

/// `E(x) = x^n - (a_{n-1} x^{n-1} + ... + a_0) t^n`, right-hand side by Horner.
pub fn residual(spec: &PolynomialSpec, x: ComplexScalar, t: f64) -> ComplexScalar {
    let n = spec.degree() as u32;
    x.powu(n) - spec.rhs(x) * t.powi(n as i32)
}

/// Where `t` sits relative to the empirical radius of convergence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvergenceStatus {
    /// No convergence report was supplied.
    Unknown,
    Inside,
    /// `|t|` is at or beyond the estimated radius; the partial sum may not converge.
    OutsideEstimate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootEvaluation {
    pub t: f64,
    pub k: usize,
    pub q: usize,
    pub value: ComplexScalar,
    pub residual: ComplexScalar,
    pub status: ConvergenceStatus,
}
