#![allow(dead_code)]

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use periodic_roots::{PolynomialSpec, SeriesState};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

pub fn worked_example() -> PolynomialSpec {
    PolynomialSpec::from_real(&[8.0, 2.0, -3.0, -2.0, 1.0, -1.0]).unwrap()
}

/// `W(1)_1..W(m_max)_1` in exact rational arithmetic for integer coefficients.
pub fn exact_w1(a: &[i64], m_max: usize) -> Vec<BigRational> {
    let n = a.len();
    let dim = n - 1;
    let r = |x: i64| BigRational::from_integer(BigInt::from(x));
    let a: Vec<BigRational> = a.iter().map(|&x| r(x)).collect();
    let nn = r(n as i64);
    let m: Vec<Vec<BigRational>> = (1..=dim)
        .map(|i| {
            (1..=dim)
                .map(|j| {
                    if i > j {
                        -r((n - i) as i64) / &nn
                    } else {
                        r(i as i64) / &nn
                    }
                })
                .collect()
        })
        .collect();

    let mut w: Vec<Vec<BigRational>> = vec![vec![a[0].clone(); dim]];
    w.push((1..n).map(|i| &a[1] * r(i as i64) / &nn).collect());
    for q in 3..=m_max {
        let mut acc = vec![BigRational::zero(); dim];
        for p in 1..=q - 2 {
            let lead = &w[p][0];
            if lead.is_zero() {
                continue;
            }
            for (s, x) in acc.iter_mut().zip(&w[q - p - 1]) {
                *s += lead * x;
            }
        }
        let mut source = BigRational::zero();
        for p in 1..=dim.min(q - 1) {
            source += &a[p] * &w[q - p - 1][p - 1];
        }
        let next: Vec<BigRational> = (0..dim)
            .map(|i| {
                let mut v = &source * r(i as i64 + 1) / &nn;
                for (mij, s) in m[i].iter().zip(&acc) {
                    v -= mij * s;
                }
                v / &a[0]
            })
            .collect();
        w.push(next);
    }
    w.into_iter().map(|v| v[0].clone()).collect()
}

pub fn exact_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap()
}

/// Complex number with modulus uniform in `[lo, hi]` and uniform argument.
pub fn polar(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Complex64 {
    Complex64::from_polar(rng.gen_range(lo..=hi), rng.gen_range(0.0..TAU))
}

/// Degree in `[2, n_max]`, `|a_0|` in `[a0_lo, a0_hi]`, other moduli at most `alpha_max`.
pub fn random_spec(
    rng: &mut ChaCha8Rng,
    n_max: usize,
    a0_lo: f64,
    a0_hi: f64,
    alpha_max: f64,
) -> PolynomialSpec {
    let n = rng.gen_range(2..=n_max);
    let mut a = vec![polar(rng, a0_lo, a0_hi)];
    for _ in 1..n {
        a.push(polar(rng, 0.0, alpha_max));
    }
    PolynomialSpec::new(a).unwrap()
}

/// Magnitude of `W(q)` for relative comparisons: `max_i |W(q)_i|`, or the size of
/// the terms accumulated into `W(q)_1` where the vector cancels to zero.
pub fn w_scale(state: &SeriesState, q: usize) -> f64 {
    state.w_norm(q).max(state.w1_scale(q))
}

/// `|b_1|^m w_scale(m) / |a_0|`: the size of `b_m` absent cancellation.
pub fn branch_scale(state: &SeriesState, m: usize) -> f64 {
    let spec = state.spec();
    let b1 = spec.rho().powf(1.0 / spec.degree() as f64);
    b1.powi(m as i32) * w_scale(state, m) / spec.rho()
}
