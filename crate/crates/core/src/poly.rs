//! Problem instances `x^n = (a_{n-1} x^{n-1} + ... + a_0) t^n`.
//!
//! Two text forms are accepted:
//!
//! - list form, coefficients `a_0` first: `n=6; a=[8, 2, -3, -2, 1, -1]`
//! - equation form: `x^6 = -x^5 + x^4 - 2x^3 - 3x^2 + 2x + 8`
//!
//! Complex literals are written `re+imi` / `re-imi` (`1+2i`, `-0.5 - 3i`, `2i`,
//! `-i`); inside the equation form a complex coefficient is parenthesised:
//! `(1+2i)x^2`. Whitespace is free everywhere.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, ParseError, SpecError};
use crate::series::phase_factor;
use crate::ComplexScalar;

/// A validated problem instance together with the polar form `a_0 = rho e^{i theta}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialSpec {
    n: usize,
    a: Vec<ComplexScalar>,
    rho: f64,
    theta: f64,
}

impl PolynomialSpec {
    /// Builds a spec from `a_0..a_{n-1}`; the degree is the number of coefficients.
    pub fn new(a: Vec<ComplexScalar>) -> Result<Self, SpecError> {
        let n = a.len();
        if n < 2 {
            return Err(SpecError::DegreeTooSmall(n));
        }
        if let Some(index) = a
            .iter()
            .position(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(SpecError::NonFinite { index });
        }
        let a0 = a[0];
        if a0.re == 0.0 && a0.im == 0.0 {
            return Err(SpecError::ZeroConstantTerm);
        }
        let rho = a0.norm();
        if !rho.is_finite() {
            return Err(SpecError::NonFinite { index: 0 });
        }
        let mut theta = a0.im.atan2(a0.re);
        // principal branch is (-pi, pi]
        if theta <= -PI {
            theta = PI;
        }
        Ok(PolynomialSpec { n, a, rho, theta })
    }

    pub fn from_real(a: &[f64]) -> Result<Self, SpecError> {
        Self::new(a.iter().map(|&x| ComplexScalar::new(x, 0.0)).collect())
    }

    /// Checks that `a` has exactly `n` entries before building.
    pub fn with_degree(n: usize, a: Vec<ComplexScalar>) -> Result<Self, SpecError> {
        if n < 2 {
            return Err(SpecError::DegreeTooSmall(n));
        }
        if a.len() != n {
            return Err(SpecError::CoefficientCount {
                expected: n,
                got: a.len(),
            });
        }
        Self::new(a)
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// `a_0..a_{n-1}`.
    pub fn coeffs(&self) -> &[ComplexScalar] {
        &self.a
    }

    pub fn a0(&self) -> ComplexScalar {
        self.a[0]
    }

    /// `|a_0|`.
    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// `arg a_0` in `(-pi, pi]`.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Largest modulus among `a_1..a_{n-1}`.
    pub fn alpha(&self) -> f64 {
        self.a[1..].iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// True when every coefficient has a zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.a.iter().all(|c| c.im == 0.0)
    }

    /// The `k`-th n-th root of `a_0`, `rho^{1/n} e^{i(theta + 2 k pi)/n}`.
    ///
    /// Computed as `b_1(0) * e^{2 k pi i / n}` so every branch is an exact
    /// rotation of the principal one.
    ///
    /// # Panics
    /// If `k >= n`.
    pub fn principal_root_b1(&self, k: usize) -> ComplexScalar {
        assert!(
            k < self.n,
            "branch index {k} out of range for degree {}",
            self.n
        );
        let principal = ComplexScalar::from_polar(
            self.rho.powf(1.0 / self.n as f64),
            self.theta / self.n as f64,
        );
        if k == 0 {
            principal
        } else {
            principal * phase_factor(k as f64, 1, self.n)
        }
    }

    /// `a_{n-1} x^{n-1} + ... + a_1 x + a_0` by Horner's scheme.
    pub fn rhs(&self, x: ComplexScalar) -> ComplexScalar {
        self.a
            .iter()
            .rev()
            .fold(ComplexScalar::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    /// Same polynomial with every coefficient replaced by `f(k, a_k)`.
    pub fn map_coeffs(
        &self,
        mut f: impl FnMut(usize, ComplexScalar) -> ComplexScalar,
    ) -> Result<Self, SpecError> {
        Self::new(self.a.iter().enumerate().map(|(k, &c)| f(k, c)).collect())
    }
}

impl fmt::Display for PolynomialSpec {
    /// List form; reparsing the output gives a bit-identical spec.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}; a=[", self.n)?;
        for (k, c) in self.a.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            f.write_str(&format_complex(*c))?;
        }
        f.write_str("]")
    }
}

impl FromStr for PolynomialSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_polynomial(s)
    }
}

/// Shortest round-trip decimal; scientific outside `[1e-5, 1e16)`.
pub fn format_real(x: f64) -> String {
    let mag = x.abs();
    if mag == 0.0 || (1e-5..1e16).contains(&mag) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// `re`, `re+imi` or `re-imi`.
pub fn format_complex(c: ComplexScalar) -> String {
    if c.im == 0.0 && c.im.is_sign_positive() {
        return format_real(c.re);
    }
    let sign = if c.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", format_real(c.re), sign, format_real(c.im.abs()))
}

/// Parses either text form into a validated spec.
pub fn parse_polynomial(text: &str) -> Result<PolynomialSpec, Error> {
    let mut sc = Scanner::new(text);
    sc.skip_ws();
    let (n, a) = match sc.peek() {
        Some(b'n') => sc.list_form()?,
        Some(b'x') => sc.equation_form()?,
        Some(_) => return Err(ParseError::new(sc.pos, "expected `n=` or `x^n =`").into()),
        None => return Err(ParseError::new(0, "empty input").into()),
    };
    sc.skip_ws();
    if sc.peek().is_some() {
        return Err(ParseError::new(sc.pos, "unexpected trailing input").into());
    }
    Ok(PolynomialSpec::with_degree(n, a)?)
}

struct Scanner<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str) -> Self {
        Scanner {
            src,
            bytes: src.as_bytes(),
            pos: 0,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<u8> {
        self.bytes.get(self.pos + offset).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.pos, message)
    }

    fn expect(&mut self, ch: u8) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek() == Some(ch) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{}`", ch as char)))
        }
    }

    fn eat(&mut self, ch: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(ch) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<usize, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| ParseError::new(start, "integer out of range"))
    }

    fn starts_number(&self) -> bool {
        match self.peek() {
            Some(b) if b.is_ascii_digit() => true,
            Some(b'.') => matches!(self.peek_at(1), Some(b) if b.is_ascii_digit()),
            _ => false,
        }
    }

    /// Unsigned decimal with optional fraction and exponent.
    fn number(&mut self) -> Result<f64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if !self.starts_number() {
            return Err(self.err("expected a number"));
        }
        while matches!(self.peek(), Some(b) if b.is_ascii_digit() || b == b'.') {
            self.pos += 1;
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let mut look = 1;
            if matches!(self.peek_at(look), Some(b'+' | b'-')) {
                look += 1;
            }
            if matches!(self.peek_at(look), Some(b) if b.is_ascii_digit()) {
                self.pos += look;
                while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
                    self.pos += 1;
                }
            }
        }
        let value: f64 = self.src[start..self.pos]
            .parse()
            .map_err(|_| ParseError::new(start, "malformed number"))?;
        if !value.is_finite() {
            return Err(ParseError::new(start, "number is not finite"));
        }
        Ok(value)
    }

    fn sign(&mut self) -> Option<f64> {
        self.skip_ws();
        match self.peek() {
            Some(b'+') => {
                self.pos += 1;
                Some(1.0)
            }
            Some(b'-') => {
                self.pos += 1;
                Some(-1.0)
            }
            _ => None,
        }
    }

    /// Imaginary magnitude following a sign: `i` or `<number>i`.
    fn imaginary_tail(&mut self) -> Result<f64, ParseError> {
        self.skip_ws();
        if self.peek() == Some(b'i') {
            self.pos += 1;
            return Ok(1.0);
        }
        let v = self.number()?;
        self.skip_ws();
        if self.peek() != Some(b'i') {
            return Err(self.err("expected `i` after imaginary part"));
        }
        self.pos += 1;
        Ok(v)
    }

    /// `[sign] re [(+|-) im i]`, `[sign] im i`, or `[sign] i`.
    fn complex_literal(&mut self) -> Result<ComplexScalar, ParseError> {
        let s = self.sign().unwrap_or(1.0);
        self.skip_ws();
        if self.peek() == Some(b'i') {
            self.pos += 1;
            return Ok(ComplexScalar::new(0.0, s));
        }
        let first = self.number()?;
        self.skip_ws();
        if self.peek() == Some(b'i') {
            self.pos += 1;
            return Ok(ComplexScalar::new(0.0, s * first));
        }
        let re = s * first;
        self.skip_ws();
        if matches!(self.peek(), Some(b'+' | b'-')) {
            let s2 = self.sign().unwrap_or(1.0);
            let im = self.imaginary_tail()?;
            return Ok(ComplexScalar::new(re, s2 * im));
        }
        Ok(ComplexScalar::new(re, 0.0))
    }

    fn list_form(&mut self) -> Result<(usize, Vec<ComplexScalar>), ParseError> {
        self.expect(b'n')?;
        self.expect(b'=')?;
        let n = self.integer()?;
        self.expect(b';')?;
        self.expect(b'a')?;
        self.expect(b'=')?;
        self.expect(b'[')?;
        let mut a = Vec::new();
        if !self.eat(b']') {
            loop {
                a.push(self.complex_literal()?);
                if self.eat(b']') {
                    break;
                }
                self.expect(b',')?;
            }
        }
        Ok((n, a))
    }

    /// `x^k` after the `x` has been consumed; bare `x` is power 1.
    fn power(&mut self) -> Result<usize, ParseError> {
        if self.eat(b'^') {
            self.integer()
        } else {
            Ok(1)
        }
    }

    fn equation_form(&mut self) -> Result<(usize, Vec<ComplexScalar>), ParseError> {
        self.expect(b'x')?;
        let n = self.power()?;
        self.expect(b'=')?;
        let mut a = vec![ComplexScalar::new(0.0, 0.0); n];
        let mut seen = vec![false; n];
        let mut first = true;
        loop {
            self.skip_ws();
            if self.peek().is_none() {
                if first {
                    return Err(self.err("expected a term"));
                }
                break;
            }
            let term_start = self.pos;
            let sign = match self.sign() {
                Some(s) => s,
                None if first => 1.0,
                None => return Err(self.err("expected `+` or `-` between terms")),
            };
            first = false;
            let (coeff, power) = self.term()?;
            if power >= n {
                return Err(ParseError::new(
                    term_start,
                    format!("power {power} must be below the degree {n}"),
                ));
            }
            if std::mem::replace(&mut seen[power], true) {
                return Err(ParseError::new(
                    term_start,
                    format!("duplicate term in x^{power}"),
                ));
            }
            a[power] = coeff * sign + ComplexScalar::new(0.0, 0.0);
        }
        Ok((n, a))
    }

    fn term(&mut self) -> Result<(ComplexScalar, usize), ParseError> {
        self.skip_ws();
        let mut coeff = None;
        if self.peek() == Some(b'(') {
            self.pos += 1;
            coeff = Some(self.complex_literal()?);
            self.expect(b')')?;
        } else if self.starts_number() {
            let v = self.number()?;
            self.skip_ws();
            if self.peek() == Some(b'i') {
                self.pos += 1;
                coeff = Some(ComplexScalar::new(0.0, v));
            } else {
                coeff = Some(ComplexScalar::new(v, 0.0));
            }
        } else if self.peek() == Some(b'i') {
            self.pos += 1;
            coeff = Some(ComplexScalar::new(0.0, 1.0));
        }
        let has_star = self.eat(b'*');
        self.skip_ws();
        if self.peek() == Some(b'x') {
            self.pos += 1;
            let power = self.power()?;
            Ok((coeff.unwrap_or(ComplexScalar::new(1.0, 0.0)), power))
        } else if has_star {
            Err(self.err("expected `x` after `*`"))
        } else {
            match coeff {
                Some(c) => Ok((c, 0)),
                None => Err(self.err("expected a coefficient or `x`")),
            }
        }
    }
}
