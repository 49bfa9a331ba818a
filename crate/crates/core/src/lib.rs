//! Roots of `x^n = (a_{n-1} x^{n-1} + ... + a_1 x + a_0) t^n` as values of a
//! single power series that is periodic in a phase variable.
//!
//! One coefficient sequence `beta_m` yields every root:
//!
//! ```text
//! x(t, u) = sum_{m >= 1} beta_m * exp(2 pi i u m / n) * t^m
//! ```
//!
//! evaluated at `u = 0, 1, ..., n - 1`. The crate is split into:
//!
//! - [`poly`]: the problem instance, its text syntax and the polar form of `a_0`;
//! - [`series`]: the vector recursion producing `beta_m`, partial sums and residuals;
//! - [`convergence`]: the analytic lower bound on the radius of convergence and
//!   the empirical estimate read off the coefficient sequence;
//! - [`oracle`]: independent ground truth (brute-force series powers, the
//!   pre-change-of-variable recursion, and an Aberth-Ehrlich root finder).
//!
//! ```
//! use periodic_roots::{PolynomialSpec, SeriesState};
//!
//! let spec: PolynomialSpec = "x^6 = -x^5 + x^4 - 2x^3 - 3x^2 + 2x + 8".parse().unwrap();
//! let state = SeriesState::compute(&spec, 200).unwrap();
//! let roots = state.roots_at(0.4, 200, None).unwrap();
//! assert!(roots.iter().all(|r| r.residual.norm() < 1e-8));
//! ```

pub mod convergence;
pub mod error;
pub mod oracle;
pub mod poly;
pub mod series;

pub use convergence::{
    catalan, lbrc, norm_m, q_profile, s_sequence, ConvergenceReport, MajorantSequence, QEntry,
    Radius,
};
pub use error::{Error, ParseError, SeriesError, SpecError};
pub use oracle::{match_roots, reference_roots, v_path, Matching, ReferenceRoots, VPath};
pub use poly::{parse_polynomial, PolynomialSpec};
pub use series::{
    build_matrix_m, residual, ConvergenceStatus, MatrixM, RootEvaluation, SeriesState,
    StructureVectors,
};

/// Scalar field for every coefficient and series value.
pub type ComplexScalar = num_complex::Complex64;

pub type Result<T, E = Error> = std::result::Result<T, E>;
