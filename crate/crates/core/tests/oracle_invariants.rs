mod common;

use common::{polar, random_spec, w_scale, worked_example};
use num_complex::Complex64;
use periodic_roots::oracle::{
    brute_k, build_m1, build_m1_inv, verify_prop1, Prop1Bounds, TruncatedSeries,
};
use periodic_roots::{match_roots, reference_roots, residual, v_path, SeriesState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn support_of_powers() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..20 {
        let len = rng.gen_range(1..=8);
        let s = TruncatedSeries::new((0..len).map(|_| polar(&mut rng, 0.1, 3.0)).collect());
        for r in 1..=5 {
            let full = s.power(r);
            for (d, c) in full.iter().enumerate() {
                if d < r {
                    assert_eq!(*c, Complex64::new(0.0, 0.0));
                }
            }
            assert_eq!(brute_k(&s, r * len + 1, r), Complex64::new(0.0, 0.0));
        }
    }
}

#[test]
fn prop1_on_worked_example_coefficients() {
    let state = SeriesState::compute(&worked_example(), 6).unwrap();
    let s = TruncatedSeries::new(state.betas().to_vec());
    let report = verify_prop1(&s, Prop1Bounds::default());
    assert!(report.passed(), "{:?}", report.first_failure);
}

#[test]
fn prop1_on_random_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    for _ in 0..50 {
        let len = rng.gen_range(1..=8);
        let s = TruncatedSeries::new((0..len).map(|_| polar(&mut rng, 0.0, 4.0)).collect());
        let report = verify_prop1(&s, Prop1Bounds::default());
        assert!(report.passed(), "{:?}", report.first_failure);
        assert!(report.checks > 0);
    }
}

#[test]
fn m1_inverse_on_unit_annulus() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..200 {
        let n = rng.gen_range(2..=10);
        let b1 = polar(&mut rng, 0.5, 2.0);
        let m1 = build_m1(n, b1);
        let inv = build_m1_inv(n, b1);
        for (i, row) in m1.iter().enumerate() {
            for j in 0..n - 1 {
                let e: Complex64 = row
                    .iter()
                    .zip(&inv)
                    .map(|(x, inv_row)| x * inv_row[j])
                    .sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((e - want).norm() < 1e-10, "n={n} b1={b1} ({i},{j}) = {e}");
            }
        }
    }
}

#[test]
fn every_branch_reproduces_w() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut specs = vec![worked_example()];
    specs.extend((0..5).map(|_| random_spec(&mut rng, 6, 1.0, 10.0, 1.5)));
    for spec in specs {
        let state = SeriesState::compute(&spec, 40).unwrap();
        for k in 0..spec.degree() {
            let path = v_path(&spec, k, 40).unwrap();
            for q in 1..=40 {
                let scale = w_scale(&state, q);
                for (x, y) in path.to_w(q).iter().zip(state.w(q)) {
                    assert!(
                        (x - y).norm() <= 1e-8 * scale,
                        "{spec} k={k} q={q}: {x} vs {y}"
                    );
                }
            }
        }
    }
}

#[test]
fn reference_roots_are_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..100 {
        let spec = random_spec(&mut rng, 12, 1.0, 10.0, 2.0);
        let t = rng.gen_range(0.1..1.0);
        let r = reference_roots(&spec, t);
        assert!(r.converged, "{spec} t={t}");
        let bound = 1e-10 * (spec.rho() * t.powi(spec.degree() as i32)).max(1.0);
        for x in &r.roots {
            assert!(residual(&spec, *x, t).norm() < bound, "{spec} t={t} x={x}");
        }
    }
}

#[test]
fn reference_roots_converge_for_large_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    for _ in 0..100 {
        let spec = random_spec(&mut rng, 16, 0.1, 10.0, 3.0);
        let t = rng.gen_range(0.1..3.0);
        let r = reference_roots(&spec, t);
        assert!(r.converged, "{spec} t={t}");
        let reference_sum: Complex64 = r.roots.iter().sum();
        let want = spec.coeffs()[spec.degree() - 1] * t.powi(spec.degree() as i32);
        let size = r.roots.iter().map(|x| x.norm()).fold(0.0, f64::max);
        assert!(
            (reference_sum - want).norm() <= 1e-9 * size.max(1.0),
            "{spec} t={t}"
        );
    }
}

#[test]
fn reference_roots_are_deterministic() {
    let spec = worked_example();
    assert_eq!(reference_roots(&spec, 0.7), reference_roots(&spec, 0.7));
}

#[test]
fn quadratic_formula_agreement() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for _ in 0..50 {
        let a0 = polar(&mut rng, 0.5, 5.0);
        let a1 = polar(&mut rng, 0.0, 2.0);
        let t: f64 = rng.gen_range(0.1..2.0);
        let spec = periodic_roots::PolynomialSpec::new(vec![a0, a1]).unwrap();
        // x^2 - a1 t^2 x - a0 t^2 = 0
        let (b, c) = (-a1 * t * t, -a0 * t * t);
        let disc = (b * b - c * 4.0).sqrt();
        let want = [(-b + disc) / 2.0, (-b - disc) / 2.0];
        let got = reference_roots(&spec, t).roots;
        let m = match_roots(&got, &want).unwrap();
        assert!(m.max_distance < 1e-12 * (1.0 + want[0].norm().max(want[1].norm())));
    }
}
