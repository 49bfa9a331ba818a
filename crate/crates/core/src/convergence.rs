//! Where the master series converges.
//!
//! Two independent answers are computed. The analytic one is a worst-case lower
//! bound built only from `alpha = max_{k>=1} |a_k|`, `|a_0|` and `||M||`: a
//! majorant sequence `S_q >= max_i |W(q)_i|` whose tail is a mu-convolution,
//! and mu-convolutions of order one are closed-form in the Catalan numbers.
//! The empirical one applies the root test to the computed `W(m)_1`:
//! `RC = liminf Q(m)`, `Q(m) = 1 / (|a_0|^{1/n} |W(m)_1|^{1/m})`.

use std::fmt;

use crate::poly::PolynomialSpec;
use crate::series::SeriesState;

/// Fraction of the computed terms used for the tail minimum standing in for `liminf`.
pub const DEFAULT_TAIL_FRACTION: f64 = 0.25;

/// Below this many terms the empirical radius is flagged low-confidence.
pub const MIN_TERMS_FOR_CONFIDENCE: usize = 50;

/// Minimum number of non-missing `Q(m)` values the tail window must contain.
pub const MIN_TAIL_ENTRIES: usize = 25;

/// `z(u, n) = -2u^2 + u(2n + 1) - n`; `z(i, n)/n` is the absolute row sum of row `i` of `M`.
pub fn z_quadratic(u: f64, n: f64) -> f64 {
    -2.0 * u * u + u * (2.0 * n + 1.0) - n
}

/// `||M||` in closed form, maximising `z` at the integers around `n/2 + 1/4`.
pub fn norm_m(n: usize) -> f64 {
    let nf = n as f64;
    let peak = nf / 2.0 + 0.25;
    let best = z_quadratic(peak.floor(), nf).max(z_quadratic(peak.ceil(), nf));
    best / nf
}

/// Exact Catalan number `(2r)! / ((r+1)! r!)`, or `None` once it leaves `u128`.
pub fn catalan(r: u32) -> Option<u128> {
    let mut c: u128 = 1;
    for j in 0..r as u128 {
        // C_{j+1} = C_j * 2(2j+1) / (j+2), exact at every step
        c = c.checked_mul(2 * (2 * j + 1))? / (j + 2);
    }
    Some(c)
}

/// Largest `r` with an exact `u128` Catalan number.
const CATALAN_EXACT_MAX: u32 = 64;

/// `C_r` in floating point.
///
/// Exact (correctly rounded) up to `r = 64`; beyond that the ratio recurrence is
/// continued in `f64`, with relative error below `4 r eps` (under `1e-12` for
/// `r <= 1000`). Returns `inf` once `C_r` exceeds `f64::MAX` (`r > 518`); use
/// [`ln_catalan`] there.
pub fn catalan_f64(r: u32) -> f64 {
    if r <= CATALAN_EXACT_MAX {
        return catalan(r).expect("exact below CATALAN_EXACT_MAX") as f64;
    }
    let mut c = catalan(CATALAN_EXACT_MAX).unwrap() as f64;
    for j in CATALAN_EXACT_MAX..r {
        let j = j as f64;
        c *= 2.0 * (2.0 * j + 1.0) / (j + 2.0);
    }
    c
}

/// `ln C_r`, finite for every `r`.
pub fn ln_catalan(r: u32) -> f64 {
    let direct = catalan_f64(r);
    if direct.is_finite() {
        return direct.ln();
    }
    let start = 500;
    let mut acc = catalan_f64(start).ln();
    for j in start..r {
        let j = j as f64;
        acc += (2.0 * (2.0 * j + 1.0) / (j + 2.0)).ln();
    }
    acc
}

/// Leading asymptotic `4^r / (sqrt(pi) r^{3/2})`; diagnostic only, `r >= 1`.
pub fn catalan_asymptotic(r: u32) -> f64 {
    let r = r as f64;
    (r * 4f64.ln() - 0.5 * std::f64::consts::PI.ln() - 1.5 * r.ln()).exp()
}

/// `u_1..u_m` given, then `u_q = mu * sum_{p=1}^{q-1} u_p u_{q-p}`; returns `len` terms.
pub fn mu_convolution(seeds: &[f64], mu: f64, len: usize) -> Vec<f64> {
    let mut u: Vec<f64> = seeds.iter().copied().take(len).collect();
    while u.len() < len {
        let q = u.len() + 1;
        let s: f64 = (1..q).map(|p| u[p - 1] * u[q - p - 1]).sum();
        u.push(mu * s);
    }
    u
}

/// Seed `v_1 = max_k (u_k / (C_{k-1} mu^{k-1}))^{1/k}` of the order-one
/// mu-convolution that dominates the one seeded with `seeds`.
pub fn dominating_seed(seeds: &[f64], mu: f64) -> f64 {
    seeds
        .iter()
        .enumerate()
        .map(|(i, &u)| {
            let k = i as f64 + 1.0;
            (u / (catalan_f64(i as u32) * mu.powi(i as i32))).powf(1.0 / k)
        })
        .fold(0.0, f64::max)
}

/// `S_2, S_3, ...` dominating `max_i |W(q)_i|`.
#[derive(Debug, Clone, PartialEq)]
pub struct MajorantSequence {
    pub n: usize,
    pub alpha: f64,
    pub a0_mod: f64,
    pub norm_m: f64,
    /// `||M|| / |a_0|`.
    pub mu: f64,
    /// `s[0]` is `S_2`.
    pub s: Vec<f64>,
}

impl MajorantSequence {
    /// `S_q`, `q >= 2`.
    pub fn get(&self, q: usize) -> f64 {
        self.s[q - 2]
    }

    /// Highest `q` stored.
    pub fn q_max(&self) -> usize {
        self.s.len() + 1
    }

    /// `sigma_p(alpha)`: `alpha/||M||` up to `p = n`, zero after.
    pub fn sigma(&self, p: usize) -> f64 {
        if p <= self.n {
            self.alpha / self.norm_m
        } else {
            0.0
        }
    }

    /// `alpha = 0`: every `S_q` vanishes and the bound is unbounded.
    pub fn is_degenerate(&self) -> bool {
        self.alpha == 0.0
    }
}

/// `S_2..S_n`.
pub fn s_sequence(spec: &PolynomialSpec) -> MajorantSequence {
    s_sequence_to(spec, spec.degree())
}

/// `S_2..S_{q_max}`; past `q = n` the sequence continues as a pure mu-convolution.
pub fn s_sequence_to(spec: &PolynomialSpec, q_max: usize) -> MajorantSequence {
    let n = spec.degree();
    let alpha = spec.alpha();
    let a0_mod = spec.rho();
    let nm = norm_m(n);
    let mu = nm / a0_mod;
    let q_max = q_max.max(n);
    // index by q directly; slots 0 and 1 unused
    let mut s = vec![0.0; q_max + 1];
    s[2] = alpha + alpha / nm;
    for q in 3..=n {
        let conv: f64 = (1..=q - 2)
            .map(|p| (nm * s[p + 1] + alpha) * s[q - p])
            .sum();
        s[q] = conv / a0_mod + alpha + alpha / nm;
    }
    for q in n + 1..=q_max {
        let conv: f64 = (1..=q - 2).map(|p| s[p + 1] * s[q - p]).sum();
        s[q] = mu * conv;
    }
    MajorantSequence {
        n,
        alpha,
        a0_mod,
        norm_m: nm,
        mu,
        s: s.split_off(2),
    }
}

/// A radius that may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Radius {
    Finite(f64),
    Unbounded,
}

impl Radius {
    /// `f64::INFINITY` for [`Radius::Unbounded`].
    pub fn value(self) -> f64 {
        match self {
            Radius::Finite(r) => r,
            Radius::Unbounded => f64::INFINITY,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Radius::Finite(_))
    }
}

impl fmt::Display for Radius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Radius::Finite(r) => write!(f, "{r}"),
            Radius::Unbounded => f.write_str("unbounded"),
        }
    }
}

/// Analytic lower bound on the radius of convergence of `sum beta_m t^m`:
///
/// ```text
/// LBRC = 1 / (4 max_{k=1..n-1} (S_{k+1} ||M|| / (C_{k-1} |a_0|^{1-k/n}))^{1/k})
/// ```
pub fn lbrc(spec: &PolynomialSpec) -> Radius {
    lbrc_from(&s_sequence(spec))
}

pub fn lbrc_from(seq: &MajorantSequence) -> Radius {
    if seq.is_degenerate() {
        return Radius::Unbounded;
    }
    let nf = seq.n as f64;
    let worst = (1..seq.n)
        .map(|k| {
            let kf = k as f64;
            let ratio = seq.get(k + 1) * seq.norm_m
                / (catalan_f64(k as u32 - 1) * seq.a0_mod.powf(1.0 - kf / nf));
            ratio.powf(1.0 / kf)
        })
        .fold(0.0, f64::max);
    Radius::Finite(1.0 / (4.0 * worst))
}

/// One point of the root-test profile; `q` is `None` where `W(m)_1` vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QEntry {
    pub m: usize,
    pub q: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub alpha: f64,
    pub norm_m: f64,
    pub majorant: MajorantSequence,
    pub lbrc: Radius,
    /// `Q(m)` for `m = 2..=m_max`.
    pub q_profile: Vec<QEntry>,
    pub rc_estimate: Radius,
    pub m_max_used: usize,
    /// Number of trailing indices whose minimum is the estimate.
    pub tail_window: usize,
    pub low_confidence: bool,
}

/// `Q(m)` profile, tail-window radius estimate and the analytic bound.
///
/// `window_fraction` in `(0, 1]` selects the trailing share of `m = 2..=m_max`
/// whose minimum stands in for the `liminf`. The estimate is flagged
/// low-confidence when fewer than [`MIN_TERMS_FOR_CONFIDENCE`] terms were
/// computed or the window holds fewer than [`MIN_TAIL_ENTRIES`] finite values.
pub fn q_profile(state: &SeriesState, window_fraction: f64) -> ConvergenceReport {
    let spec = state.spec();
    let n = spec.degree() as f64;
    let m_max = state.m_max();
    let ln_a0 = spec.rho().ln();

    let profile: Vec<QEntry> = (2..=m_max)
        .map(|m| {
            let q = if state.w1_vanishes(m) {
                None
            } else {
                let ln_w = state.w(m)[0].norm().ln();
                Some((-(ln_a0 / n + ln_w / m as f64)).exp())
            };
            QEntry { m, q }
        })
        .collect();

    let fraction = if window_fraction > 0.0 && window_fraction <= 1.0 {
        window_fraction
    } else {
        DEFAULT_TAIL_FRACTION
    };
    let tail_window = ((fraction * m_max as f64).ceil() as usize).clamp(1, profile.len().max(1));
    let tail = &profile[profile.len().saturating_sub(tail_window)..];
    let finite: Vec<f64> = tail.iter().filter_map(|e| e.q).collect();
    let rc_estimate = finite
        .iter()
        .copied()
        .reduce(f64::min)
        .map_or(Radius::Unbounded, Radius::Finite);
    let low_confidence =
        m_max < MIN_TERMS_FOR_CONFIDENCE || (!finite.is_empty() && finite.len() < MIN_TAIL_ENTRIES);

    let majorant = s_sequence(spec);
    ConvergenceReport {
        alpha: majorant.alpha,
        norm_m: majorant.norm_m,
        lbrc: lbrc_from(&majorant),
        majorant,
        q_profile: profile,
        rc_estimate,
        m_max_used: m_max,
        tail_window,
        low_confidence,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::build_matrix_m;
    use crate::ComplexScalar;
    use num_bigint::BigUint;
    use proptest::prelude::*;

    fn worked_example() -> PolynomialSpec {
        PolynomialSpec::from_real(&[8.0, 2.0, -3.0, -2.0, 1.0, -1.0]).unwrap()
    }

    fn factorial(k: u32) -> BigUint {
        (1..=k).fold(BigUint::from(1u32), |acc, j| acc * j)
    }

    #[test]
    fn norm_m_examples() {
        assert_eq!(norm_m(6), 2.5);
        assert_eq!(norm_m(2), 0.5);
        assert_eq!(norm_m(3), 1.0);
        assert_eq!(z_quadratic(3.0, 6.0), 15.0);
        assert_eq!(z_quadratic(4.0, 6.0), 14.0);
    }

    #[test]
    fn norm_m_matches_explicit_matrix() {
        for n in 2..=64 {
            let direct = build_matrix_m(n).unwrap().norm_inf();
            assert!(
                (norm_m(n) - direct).abs() <= 1e-14 * direct,
                "n={n}: {} vs {direct}",
                norm_m(n)
            );
        }
    }

    #[test]
    fn catalan_small_values() {
        assert_eq!(catalan(0), Some(1));
        assert_eq!(catalan(1), Some(1));
        assert_eq!(catalan(2), Some(2));
        assert_eq!(catalan(3), Some(5));
        assert_eq!(catalan(10), Some(16796));
    }

    #[test]
    fn catalan_matches_factorial_formula() {
        for r in 0..=CATALAN_EXACT_MAX {
            let want = factorial(2 * r) / (factorial(r + 1) * factorial(r));
            assert_eq!(BigUint::from(catalan(r).unwrap()), want, "r={r}");
        }
        assert_eq!(catalan(200), None);
    }

    #[test]
    fn catalan_convolution_identity() {
        for s in 1..=20u32 {
            let conv: u128 = (0..s)
                .map(|i| catalan(i).unwrap() * catalan(s - 1 - i).unwrap())
                .sum();
            assert_eq!(conv, catalan(s).unwrap());
        }
    }

    #[test]
    fn catalan_float_accuracy() {
        for r in [65u32, 100, 300, 500] {
            let want = factorial(2 * r) / (factorial(r + 1) * factorial(r));
            // leading 17 digits of the exact value
            let digits = want.to_string();
            let exp = digits.len() as i32 - 1;
            let mantissa: f64 = format!("{}.{}", &digits[..1], &digits[1..18])
                .parse()
                .unwrap();
            let exact = mantissa * 10f64.powi(exp);
            let got = catalan_f64(r);
            assert!(
                ((got - exact) / exact).abs() < 1e-12,
                "r={r}: {got} vs {exact}"
            );
            assert!((ln_catalan(r) - exact.ln()).abs() < 1e-12 * exact.ln());
        }
        assert!(catalan_f64(600).is_infinite());
        assert!(ln_catalan(600).is_finite());
        let ratio = catalan_f64(400) / catalan_asymptotic(400);
        assert!((ratio - 1.0).abs() < 0.01);
    }

    #[test]
    fn majorant_worked_example() {
        let seq = s_sequence(&worked_example());
        assert_eq!(seq.alpha, 3.0);
        assert!((seq.get(2) - 4.2).abs() < 1e-15);
        assert_eq!(seq.q_max(), 6);
        assert_eq!(seq.sigma(6), 3.0 / 2.5);
        assert_eq!(seq.sigma(7), 0.0);
    }

    #[test]
    fn majorant_vanishes_without_alpha() {
        let spec = PolynomialSpec::from_real(&[8.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let seq = s_sequence_to(&spec, 30);
        assert!(seq.is_degenerate());
        assert!(seq.s.iter().all(|&s| s == 0.0));
        assert_eq!(lbrc(&spec), Radius::Unbounded);
    }

    #[test]
    fn majorant_dominates_w_on_worked_example() {
        let spec = worked_example();
        let state = SeriesState::compute(&spec, 50).unwrap();
        let seq = s_sequence_to(&spec, 50);
        for q in 2..=50 {
            assert!(state.w_norm(q) <= seq.get(q), "q={q}");
        }
    }

    #[test]
    fn lbrc_worked_example() {
        let r = lbrc(&worked_example()).value();
        assert!((r - 0.094).abs() <= 0.001, "{r}");
        let scaled = worked_example()
            .map_coeffs(|k, c| if k == 0 { c * 1e6 } else { c })
            .unwrap();
        assert!(lbrc(&scaled).value() > r);
    }

    #[test]
    fn lbrc_agrees_with_dominating_seed_route() {
        // v_1 of the order-(n-1) convolution S_2..S_n gives LBRC = |a0|^{1-1/n} / (4 ||M|| v_1)
        for spec in [
            worked_example(),
            PolynomialSpec::new(vec![
                ComplexScalar::new(3.0, -4.0),
                ComplexScalar::new(0.5, 0.5),
                ComplexScalar::new(-1.0, 0.0),
            ])
            .unwrap(),
        ] {
            let seq = s_sequence(&spec);
            let v1 = dominating_seed(&seq.s, seq.mu);
            let n = spec.degree() as f64;
            let via_seed = spec.rho().powf(1.0 - 1.0 / n) / (4.0 * seq.norm_m * v1);
            let direct = lbrc(&spec).value();
            assert!((via_seed - direct).abs() <= 1e-12 * direct);
        }
    }

    #[test]
    fn order_one_convolution_is_catalan() {
        for (v1, mu) in [(1.0, 1.0), (0.5, 2.0), (2.0, 0.25), (0.25, 0.5)] {
            let v = mu_convolution(&[v1], mu, 26);
            for (q, &vq) in v.iter().enumerate() {
                let closed = v1 * catalan_f64(q as u32) * (v1 * mu).powi(q as i32);
                assert_eq!(vq, closed, "v1={v1} mu={mu} q={q}");
            }
        }
    }

    #[test]
    fn profile_of_a0_only_spec_is_empty() {
        let spec = PolynomialSpec::from_real(&[8.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let state = SeriesState::compute(&spec, 100).unwrap();
        let report = q_profile(&state, DEFAULT_TAIL_FRACTION);
        assert!(report.q_profile.iter().all(|e| e.q.is_none()));
        assert_eq!(report.rc_estimate, Radius::Unbounded);
        assert_eq!(report.lbrc, Radius::Unbounded);
        assert!(!report.low_confidence);
    }

    #[test]
    fn profile_worked_example() {
        let state = SeriesState::compute(&worked_example(), 200).unwrap();
        let report = q_profile(&state, DEFAULT_TAIL_FRACTION);
        let rc = report.rc_estimate.value();
        assert!((rc - 1.05).abs() <= 0.05, "{rc}");
        assert!(rc >= report.lbrc.value());
        assert_eq!(report.tail_window, 50);
        assert!(!report.low_confidence);
        assert_eq!(report.q_profile.len(), 199);

        let short = SeriesState::compute(&worked_example(), 60).unwrap();
        assert!(q_profile(&short, DEFAULT_TAIL_FRACTION).low_confidence);
        let tiny = SeriesState::compute(&worked_example(), 30).unwrap();
        assert!(q_profile(&tiny, 1.0).low_confidence);
    }

    fn arb_spec() -> impl Strategy<Value = PolynomialSpec> {
        (2usize..9).prop_flat_map(|n| {
            let unit = (0.0..1.0f64, 0.0..std::f64::consts::TAU)
                .prop_map(|(r, phi)| ComplexScalar::from_polar(r, phi));
            (
                proptest::collection::vec(unit, n - 1),
                1.0..100.0f64,
                0.0..std::f64::consts::TAU,
            )
                .prop_map(|(rest, r, phi)| {
                    let mut a = vec![ComplexScalar::from_polar(r, phi)];
                    a.extend(rest);
                    PolynomialSpec::new(a).unwrap()
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn majorant_dominates_w(spec in arb_spec()) {
            let state = SeriesState::compute(&spec, 100).unwrap();
            let seq = s_sequence_to(&spec, 100);
            for q in 2..=100 {
                prop_assert!(state.w_norm(q) <= seq.get(q), "q={} w={} S={}", q, state.w_norm(q), seq.get(q));
            }
        }

        #[test]
        fn order_m_convolution_is_dominated(
            seeds in proptest::collection::vec(0.0..5.0f64, 1..6),
            mu in 0.05..3.0f64,
        ) {
            let u = mu_convolution(&seeds, mu, 51);
            let v1 = dominating_seed(&seeds, mu);
            let v = mu_convolution(&[v1], mu, 51);
            for (q, (a, b)) in u.iter().zip(&v).enumerate() {
                prop_assert!(*a <= b * (1.0 + 1e-12), "q={} u={} v={}", q + 1, a, b);
            }
        }

        #[test]
        fn majorant_decreases_in_a0(spec in arb_spec(), scales in proptest::collection::vec(1.0..10.0f64, 4)) {
            let n = spec.degree();
            let mut factor = 1.0;
            let mut prev = s_sequence(&spec);
            for s in scales {
                factor *= s;
                let bigger = spec.map_coeffs(|k, c| if k == 0 { c * factor } else { c }).unwrap();
                let next = s_sequence(&bigger);
                for q in 2..=n {
                    prop_assert!(next.get(q) <= prev.get(q) * (1.0 + 1e-12));
                }
                prev = next;
            }
        }

        #[test]
        fn series_is_cauchy_inside_lbrc(spec in arb_spec()) {
            let t = 0.9 * lbrc(&spec).value();
            prop_assume!(t.is_finite());
            let state = SeriesState::compute(&spec, 400).unwrap();
            let terms: Vec<f64> = state.betas().iter().enumerate()
                .map(|(i, b)| b.norm() * t.powi(i as i32 + 1))
                .collect();
            let cauchy = (1..=200).any(|m| terms[m - 1..2 * m].iter().sum::<f64>() < 1e-10);
            prop_assert!(cauchy);
        }
    }

    #[test]
    fn series_is_cauchy_inside_lbrc_worked_example() {
        let spec = worked_example();
        let t = 0.9 * lbrc(&spec).value();
        let state = SeriesState::compute(&spec, 200).unwrap();
        let terms: Vec<f64> = state
            .betas()
            .iter()
            .enumerate()
            .map(|(i, b)| b.norm() * t.powi(i as i32 + 1))
            .collect();
        assert!((1..=100).any(|m| terms[m - 1..2 * m].iter().sum::<f64>() < 1e-10));
    }
}
