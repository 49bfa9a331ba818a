//! The branch-specific recursion for `V(q)`, before the change of variable to `W(q)`.
//!
//! `V(q)_s = K(q + s - 1, B_{q+s-1}^s)` for `s = 1..n-1`, so `V(q)_1 = b_q`. With
//! `X(q-1) = sum_{m=2}^{q-1} b_m V(q-m+1)`,
//!
//! ```text
//! V(q) = -M1^{-1} X(q-1) + (sum_m a_m V(q-m)_m) / (n b1^{n-1}) (1, 2 b1, ..., (n-1) b1^{n-2})'
//! ```

use crate::error::SeriesError;
use crate::poly::PolynomialSpec;
use crate::ComplexScalar;

/// Longest sequence [`v_path`] will produce; powers of `b1` in `M1^{-1}` degrade conditioning.
pub const V_PATH_MAX_TERMS: usize = 60;

const ZERO: ComplexScalar = ComplexScalar::new(0.0, 0.0);

type Matrix = Vec<Vec<ComplexScalar>>;

/// `M1`: first column `2 b1, b1^2, ..., b1^{n-1}`, `b1` on the rest of the
/// diagonal, `-1` on the superdiagonal.
pub fn build_m1(n: usize, b1: ComplexScalar) -> Matrix {
    let dim = n - 1;
    let mut m = vec![vec![ZERO; dim]; dim];
    for i in 0..dim {
        m[i][i] = b1;
        m[i][0] += b1.powu(i as u32 + 1);
        if i + 1 < dim {
            m[i][i + 1] = ComplexScalar::new(-1.0, 0.0);
        }
    }
    m
}

/// `M1^{-1}` from its closed-form entries (1-based):
/// `i b1^{n+i-j-2} / (n b1^{n-1})` for `i <= j`, `-(n-i) b1^{n+i-j-2} / (n b1^{n-1})` for `i > j`.
pub fn build_m1_inv(n: usize, b1: ComplexScalar) -> Matrix {
    let dim = n - 1;
    let denom = b1.powu(n as u32 - 1) * n as f64;
    (1..=dim)
        .map(|i| {
            (1..=dim)
                .map(|j| {
                    let coef = if i > j { -((n - i) as f64) } else { i as f64 };
                    b1.powi((n + i) as i32 - j as i32 - 2) * coef / denom
                })
                .collect()
        })
        .collect()
}

fn mat_vec(m: &Matrix, v: &[ComplexScalar]) -> Vec<ComplexScalar> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(ZERO, |acc, (&a, &x)| acc + a * x))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct VPath {
    pub branch_k: usize,
    pub b1: ComplexScalar,
    /// `v[q-1]` is `V(q)`.
    pub v: Vec<Vec<ComplexScalar>>,
    pub m1_inv: Matrix,
    /// Diagonal of `B`: `b1^{n-1}, ..., b1`.
    pub b_diag: Vec<ComplexScalar>,
}

impl VPath {
    pub fn m_max(&self) -> usize {
        self.v.len()
    }

    /// `V(q)`, 1-based.
    pub fn v(&self, q: usize) -> &[ComplexScalar] {
        &self.v[q - 1]
    }

    /// `b_m = V(m)_1`.
    pub fn b(&self, m: usize) -> ComplexScalar {
        self.v[m - 1][0]
    }

    /// `W(q) = b1^{1-q} B V(q)`.
    pub fn to_w(&self, q: usize) -> Vec<ComplexScalar> {
        let scale = self.b1.powi(1 - q as i32);
        self.b_diag
            .iter()
            .zip(self.v(q))
            .map(|(&d, &x)| d * x * scale)
            .collect()
    }

    /// `max |(M1 M1^{-1} - I)_{ij}|`.
    pub fn inverse_error(&self) -> f64 {
        let n = self.b_diag.len() + 1;
        let m1 = build_m1(n, self.b1);
        let mut worst: f64 = 0.0;
        for (i, row) in m1.iter().enumerate() {
            for j in 0..n - 1 {
                let e = row
                    .iter()
                    .zip(&self.m1_inv)
                    .fold(ZERO, |acc, (&a, inv)| acc + a * inv[j]);
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((e - want).norm());
            }
        }
        worst
    }
}

/// `V(1)..V(m_max)` for branch `b1 = rho^{1/n} e^{i (theta + 2 k pi)/n}`.
pub fn v_path(spec: &PolynomialSpec, k: usize, m_max: usize) -> Result<VPath, SeriesError> {
    let n = spec.degree();
    if k >= n {
        return Err(SeriesError::Phase { k, n });
    }
    if m_max > V_PATH_MAX_TERMS {
        return Err(SeriesError::VPathTooLong {
            max: V_PATH_MAX_TERMS,
            got: m_max,
        });
    }
    if m_max == 0 {
        return Err(SeriesError::TooFewTerms { min: 1, got: 0 });
    }
    let dim = n - 1;
    let a = spec.coeffs();
    let b1 = spec.principal_root_b1(k);
    let m1_inv = build_m1_inv(n, b1);
    let lead = b1.powu(dim as u32) * n as f64;
    let source_dir: Vec<ComplexScalar> = (1..n).map(|s| b1.powu(s as u32 - 1) * s as f64).collect();
    let b_diag: Vec<ComplexScalar> = (1..n).map(|s| b1.powu((n - s) as u32)).collect();

    let mut v: Vec<Vec<ComplexScalar>> = Vec::with_capacity(m_max);
    v.push((1..n).map(|s| b1.powu(s as u32)).collect());
    for q in 2..=m_max {
        let mut x = vec![ZERO; dim];
        for m in 2..q {
            let bm = v[m - 1][0];
            for (xi, &vi) in x.iter_mut().zip(&v[q - m]) {
                *xi += bm * vi;
            }
        }
        let source =
            (1..=dim.min(q - 1)).fold(ZERO, |acc, m| acc + a[m] * v[q - m - 1][m - 1]) / lead;
        let next: Vec<ComplexScalar> = mat_vec(&m1_inv, &x)
            .into_iter()
            .zip(&source_dir)
            .map(|(mx, &dir)| source * dir - mx)
            .collect();
        if next.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(SeriesError::Divergence { q });
        }
        v.push(next);
    }

    Ok(VPath {
        branch_k: k,
        b1,
        v,
        m1_inv,
        b_diag,
    })
}
