//! Parameter, mode and result types shared by every evaluator.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{render_decimal, render_f64, render_fraction, Field, Rational};

/// Default target for truncating the positive-term series.
pub const DEFAULT_TRUNCATION_EPSILON: f64 = 1e-13;

/// Relative error above which the alternating sums are abandoned in favour
/// of the positive-term series.
pub const CANCELLATION_TOLERANCE: f64 = 1e-9;

/// `n` dice with `s` faces each; success probability `p = 1/s`.
///
/// The standard constructor enforces `1 <= n <= s`. [`GameParams::relaxed`]
/// only requires `n, s >= 1`: the distribution of the maximum is well
/// defined there even though the dice game itself is not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GameParams {
    n: u32,
    s: u32,
    relaxed: bool,
}

impl GameParams {
    pub fn new(n: u32, s: u32) -> Result<Self> {
        if n == 0 || s == 0 {
            return Err(Error::InvalidParams {
                n,
                s,
                reason: "n and s must be positive".into(),
            });
        }
        if n > s {
            return Err(Error::InvalidParams {
                n,
                s,
                reason: "n must not exceed s (use relaxed mode for the pure distribution)".into(),
            });
        }
        Ok(Self {
            n,
            s,
            relaxed: false,
        })
    }

    pub fn relaxed(n: u32, s: u32) -> Result<Self> {
        if n == 0 || s == 0 {
            return Err(Error::InvalidParams {
                n,
                s,
                reason: "n and s must be positive".into(),
            });
        }
        Ok(Self {
            n,
            s,
            relaxed: true,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn is_relaxed(&self) -> bool {
        self.relaxed
    }

    /// Whether `n <= s`, the regime in which the dice game makes sense.
    pub fn is_standard(&self) -> bool {
        self.n <= self.s
    }

    pub fn p(&self) -> f64 {
        f64::from_ratio(1, self.s as u64)
    }

    pub fn q(&self) -> f64 {
        f64::from_ratio(self.s as u64 - 1, self.s as u64)
    }

    pub fn p_as<T: Field>(&self) -> T {
        T::from_ratio(1, self.s as u64)
    }

    pub fn q_as<T: Field>(&self) -> T {
        T::from_ratio(self.s as u64 - 1, self.s as u64)
    }

    pub(crate) fn require_standard(&self) -> Result<()> {
        if self.n > self.s {
            return Err(Error::InvalidParams {
                n: self.n,
                s: self.s,
                reason: "this operation assumes n <= s".into(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for GameParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n = {}, s = {})", self.n, self.s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Arithmetic {
    ExactRational,
    Float,
}

/// How to evaluate: exact rationals or `f64`, plus float-mode tuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericMode {
    arithmetic: Arithmetic,
    truncation_epsilon: f64,
    series_fallback: bool,
}

impl NumericMode {
    pub fn exact() -> Self {
        Self {
            arithmetic: Arithmetic::ExactRational,
            truncation_epsilon: DEFAULT_TRUNCATION_EPSILON,
            series_fallback: true,
        }
    }

    pub fn float() -> Self {
        Self {
            arithmetic: Arithmetic::Float,
            ..Self::exact()
        }
    }

    pub fn with_truncation_epsilon(self, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::invalid_argument(
                "truncation_epsilon",
                format!("must be a positive finite number, got {epsilon}"),
            ));
        }
        Ok(Self {
            truncation_epsilon: epsilon,
            ..self
        })
    }

    /// Disables the automatic switch from the alternating sums to the
    /// positive-term series; cancellation then becomes an error.
    pub fn without_fallback(self) -> Self {
        Self {
            series_fallback: false,
            ..self
        }
    }

    pub fn arithmetic(&self) -> Arithmetic {
        self.arithmetic
    }

    pub fn is_exact(&self) -> bool {
        self.arithmetic == Arithmetic::ExactRational
    }

    pub fn truncation_epsilon(&self) -> f64 {
        self.truncation_epsilon
    }

    pub fn series_fallback(&self) -> bool {
        self.series_fallback
    }
}

impl Default for NumericMode {
    fn default() -> Self {
        Self::float()
    }
}

/// A value produced in either arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub enum Number {
    Exact(Rational),
    Float(f64),
}

impl Number {
    pub fn to_f64(&self) -> f64 {
        match self {
            Number::Exact(r) => Field::to_f64(r),
            Number::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Number::Exact(r) => Some(r),
            Number::Float(_) => None,
        }
    }

    /// `"numerator/denominator"` for exact values, plain decimal with
    /// `sig_digits` significant digits for floats.
    pub fn render(&self, sig_digits: usize) -> String {
        match self {
            Number::Exact(r) => render_fraction(r),
            Number::Float(x) => render_f64(*x, sig_digits),
        }
    }

    /// Decimal rendering in both arithmetics.
    pub fn render_decimal(&self, sig_digits: usize) -> String {
        match self {
            Number::Exact(r) => render_decimal(r, sig_digits),
            Number::Float(x) => render_f64(*x, sig_digits),
        }
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Exact(r) => f.write_str(&render_fraction(r)),
            Number::Float(x) => write!(f, "{x}"),
        }
    }
}

impl From<f64> for Number {
    fn from(x: f64) -> Self {
        Number::Float(x)
    }
}

impl From<Rational> for Number {
    fn from(r: Rational) -> Self {
        Number::Exact(r)
    }
}

/// Which evaluation route produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedAlternating,
    Series,
    Recursive,
    MatrixPower,
    MonteCarlo,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ClosedAlternating => "closed-alternating",
            Method::Series => "series",
            Method::Recursive => "recursive",
            Method::MatrixPower => "matrix-power",
            Method::MonteCarlo => "monte-carlo",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One evaluated quantity with the route that produced it and an absolute
/// error bound (zero in exact mode).
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub value: Number,
    pub error_bound: f64,
    pub method: Method,
}

impl Evaluation {
    pub(crate) fn exact(value: Rational, method: Method) -> Self {
        Self {
            value: Number::Exact(value),
            error_bound: 0.0,
            method,
        }
    }

    pub(crate) fn float(value: f64, error_bound: f64, method: Method) -> Self {
        Self {
            value: Number::Float(value),
            error_bound,
            method,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

/// Mean, second moment and variance of the number of turns.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub params: GameParams,
    pub mean: Number,
    pub second_moment: Number,
    pub variance: Number,
    pub method: Method,
    /// Largest of the three absolute error bounds.
    pub error_bound: f64,
}
