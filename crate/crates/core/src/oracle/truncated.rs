//! Powers of truncated series by explicit multiplication.

use std::fmt;

use crate::ComplexScalar;

const ZERO: ComplexScalar = ComplexScalar::new(0.0, 0.0);

/// `B_q = b_1 t + ... + b_q t^q`; `coeffs[0]` is `b_1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<ComplexScalar>,
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<ComplexScalar>) -> Self {
        TruncatedSeries { coeffs }
    }

    /// Highest retained power.
    pub fn q(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[ComplexScalar] {
        &self.coeffs
    }

    /// `b_m`, 1-based; zero past the truncation.
    pub fn b(&self, m: usize) -> ComplexScalar {
        self.coeffs.get(m.wrapping_sub(1)).copied().unwrap_or(ZERO)
    }

    /// `B_q` for `q <= self.q()`.
    pub fn truncate(&self, q: usize) -> TruncatedSeries {
        TruncatedSeries::new(self.coeffs[..q.min(self.q())].to_vec())
    }

    /// Coefficientwise modulus.
    pub fn abs(&self) -> TruncatedSeries {
        TruncatedSeries::new(
            self.coeffs
                .iter()
                .map(|c| ComplexScalar::new(c.norm(), 0.0))
                .collect(),
        )
    }

    /// Dense coefficients of `B_q^r`, index = power of `t`, length `r q + 1`.
    pub fn power(&self, r: usize) -> Vec<ComplexScalar> {
        let mut base = vec![ZERO; self.q() + 1];
        base[1..].copy_from_slice(&self.coeffs);
        let mut acc = base.clone();
        for _ in 1..r {
            let mut next = vec![ZERO; acc.len() + self.q()];
            for (i, &x) in acc.iter().enumerate() {
                if x == ZERO {
                    continue;
                }
                for (j, &y) in base.iter().enumerate() {
                    next[i + j] += x * y;
                }
            }
            acc = next;
        }
        acc
    }
}

/// `K(d, B_q^r)`, the coefficient of `t^d` in `B_q^r`.
///
/// Zero outside the support `r <= d <= r q`; otherwise `B_q^r` is formed by
/// `r - 1` truncated multiplications.
pub fn brute_k(series: &TruncatedSeries, d: usize, r: usize) -> ComplexScalar {
    if r == 0 {
        return if d == 0 {
            ComplexScalar::new(1.0, 0.0)
        } else {
            ZERO
        };
    }
    if d < r || d > r * series.q() {
        return ZERO;
    }
    series.power(r)[d]
}

/// Ranges for [`verify_prop1`]: `d <= d_max`, `1 <= r <= r_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Prop1Bounds {
    pub d_max: usize,
    pub r_max: usize,
}

impl Default for Prop1Bounds {
    fn default() -> Self {
        Prop1Bounds {
            d_max: 10,
            r_max: 5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Identity {
    /// `K(d, B_q^r) = 0` for `d < r` or `d > r q`.
    Support,
    /// `K(d, B_q^r) = K(d, B_{d-r+1}^r)` for `q >= d - r + 1`.
    Truncation,
    /// `K(d, B_q^r) = sum_{m=1}^{min(d-r+1, q)} b_m K(d - m, B_q^{r-1})`.
    Convolution,
    /// `K(q+s, B_{q+s}^{s+1}) = b_1 K(q+s-1, B_{q+s-1}^s) + sum_{m=2}^{q-1} b_m K(q+s-m, B_{q+s-m}^s) + b_q b_1^s`.
    Aligned,
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Identity::Support => "support",
            Identity::Truncation => "truncation",
            Identity::Convolution => "convolution",
            Identity::Aligned => "aligned",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prop1Failure {
    pub identity: Identity,
    pub d: usize,
    pub q: usize,
    pub r: usize,
    pub lhs: ComplexScalar,
    pub rhs: ComplexScalar,
    /// `|lhs - rhs|` over the same expression evaluated on `|b_m|`.
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prop1Report {
    pub checks: usize,
    pub first_failure: Option<Prop1Failure>,
}

impl Prop1Report {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

struct Checker {
    tol: f64,
    checks: usize,
    first_failure: Option<Prop1Failure>,
}

impl Checker {
    fn check(
        &mut self,
        identity: Identity,
        (d, q, r): (usize, usize, usize),
        lhs: ComplexScalar,
        rhs: ComplexScalar,
        scale: f64,
    ) {
        self.checks += 1;
        if self.first_failure.is_some() {
            return;
        }
        let diff = (lhs - rhs).norm();
        let rel_error = if scale > 0.0 { diff / scale } else { diff };
        if rel_error.is_nan() || rel_error > self.tol {
            self.first_failure = Some(Prop1Failure {
                identity,
                d,
                q,
                r,
                lhs,
                rhs,
                rel_error,
            });
        }
    }
}

/// Checks the support, truncation, convolution and aligned-index identities for
/// `K(d, B_q^r)` against [`brute_k`] over every `q <= series.q()`, `d <= d_max`,
/// `r <= r_max`, at relative tolerance `1e-9`.
pub fn verify_prop1(series: &TruncatedSeries, bounds: Prop1Bounds) -> Prop1Report {
    verify_prop1_with(series, bounds, 1e-9)
}

pub fn verify_prop1_with(series: &TruncatedSeries, bounds: Prop1Bounds, tol: f64) -> Prop1Report {
    let abs = series.abs();
    let scale = |d: usize, q: usize, r: usize| brute_k(&abs.truncate(q), d, r).re;
    let k = |d: usize, q: usize, r: usize| brute_k(&series.truncate(q), d, r);
    let mut ck = Checker {
        tol,
        checks: 0,
        first_failure: None,
    };

    for q in 1..=series.q() {
        let trunc = series.truncate(q);
        for r in 1..=bounds.r_max {
            let full = trunc.power(r);
            for d in 0..=bounds.d_max {
                if d < r || d > r * q {
                    let value = full.get(d).copied().unwrap_or(ZERO);
                    ck.check(Identity::Support, (d, q, r), value, ZERO, 0.0);
                    continue;
                }
                let lhs = k(d, q, r);
                let s = scale(d, q, r);

                let base = d - r + 1;
                if q >= base {
                    ck.check(Identity::Truncation, (d, q, r), lhs, k(d, base, r), s);
                }

                if r >= 2 {
                    let rhs = (1..=base.min(q))
                        .fold(ZERO, |acc, m| acc + trunc.b(m) * k(d - m, q, r - 1));
                    ck.check(Identity::Convolution, (d, q, r), lhs, rhs, s);
                }
            }
        }
    }

    // aligned form, indexed by (q, s) with d = q + s and r = s + 1
    for q in 2..=series.q() {
        for s in 1..bounds.r_max {
            let d = q + s;
            if d > bounds.d_max {
                break;
            }
            let lhs = k(d, d, s + 1);
            let b1 = series.b(1);
            let mut rhs = b1 * k(d - 1, d - 1, s);
            for m in 2..q {
                rhs += series.b(m) * k(d - m, d - m, s);
            }
            rhs += series.b(q) * b1.powu(s as u32);
            ck.check(
                Identity::Aligned,
                (d, q, s + 1),
                lhs,
                rhs,
                scale(d, d, s + 1),
            );
        }
    }

    Prop1Report {
        checks: ck.checks,
        first_failure: ck.first_failure,
    }
}
