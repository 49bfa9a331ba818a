//! Fixed problem instances for the benchmarks.

use periodic_roots::{ComplexScalar, PolynomialSpec};

/// `x^6 = -x^5 + x^4 - 2x^3 - 3x^2 + 2x + 8`.
pub fn worked_example() -> PolynomialSpec {
    PolynomialSpec::from_real(&[8.0, 2.0, -3.0, -2.0, 1.0, -1.0]).unwrap()
}

/// Degree-`n` instance with `a_0 = 10` and unit-modulus coefficients on a fixed spiral.
pub fn spiral(n: usize) -> PolynomialSpec {
    let mut a = vec![ComplexScalar::new(10.0, 0.0)];
    a.extend((1..n).map(|k| ComplexScalar::from_polar(1.0, 0.7 * k as f64)));
    PolynomialSpec::new(a).unwrap()
}
