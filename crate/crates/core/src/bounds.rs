//! Lower and upper bounds on the mean and variance of the number of turns.
//!
//! All bounds are rational in `n` and `s` and are returned exactly. Every
//! operation requires `1 <= n <= s`.

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::Result;
use crate::numeric::{Field, Rational};
use crate::params::GameParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    Mean,
    SecondMoment,
    Variance,
}

impl Quantity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Quantity::Mean => "mean",
            Quantity::SecondMoment => "second-moment",
            Quantity::Variance => "variance",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which argument produced a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundSource {
    /// `s <= E <= ns`, from `Z_1 <= max <= sum`.
    ElementaryEv,
    /// Pair the dice and use the exact two-dice mean.
    PairingEv,
    /// `s^2 - s <= Var <= s^2 (2n - 1) - ns`.
    ElementaryVar,
    /// `Var <= n s (s - 1)`, from non-negative covariances.
    SumVar,
}

impl BoundSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundSource::ElementaryEv => "elementary-EV",
            BoundSource::PairingEv => "pairing-EV",
            BoundSource::ElementaryVar => "elementary-Var",
            BoundSource::SumVar => "sum-Var",
        }
    }
}

impl fmt::Display for BoundSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub quantity: Quantity,
    pub lower: Rational,
    pub upper: Rational,
    pub lower_source: BoundSource,
    pub upper_source: BoundSource,
}

impl BoundReport {
    pub fn lower_f64(&self) -> f64 {
        Field::to_f64(&self.lower)
    }

    pub fn upper_f64(&self) -> f64 {
        Field::to_f64(&self.upper)
    }

    pub fn contains(&self, value: &Rational) -> bool {
        self.lower <= *value && *value <= self.upper
    }
}

fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

fn ns(params: &GameParams) -> Result<(i64, i64)> {
    params.require_standard()?;
    Ok((params.n() as i64, params.s() as i64))
}

/// `[s, n s]`.
pub fn ev_bounds_elementary(params: &GameParams) -> Result<BoundReport> {
    let (n, s) = ns(params)?;
    Ok(BoundReport {
        quantity: Quantity::Mean,
        lower: int(s),
        upper: int(n * s),
        lower_source: BoundSource::ElementaryEv,
        upper_source: BoundSource::ElementaryEv,
    })
}

/// Exact `E(max)` for two dice: `(3s^2 - 2s) / (2s - 1)`.
pub fn two_dice_mean(s: u32) -> Rational {
    let s = s as i64;
    Rational::new(BigInt::from(3 * s * s - 2 * s), BigInt::from(2 * s - 1))
}

/// Upper bound `(n/2) E(Y_2)` for even `n`, `((n-1)/2) E(Y_2) + s` for odd
/// `n >= 3`. For `n = 1` the elementary bound is returned unchanged.
pub fn ev_bound_pairing(params: &GameParams) -> Result<BoundReport> {
    let elementary = ev_bounds_elementary(params)?;
    let (n, s) = ns(params)?;
    if n == 1 {
        return Ok(elementary);
    }
    let pairs = int(n / 2);
    let mut upper = pairs * two_dice_mean(s as u32);
    if n % 2 == 1 {
        upper += int(s);
    }
    Ok(BoundReport {
        upper,
        upper_source: BoundSource::PairingEv,
        ..elementary
    })
}

/// `[s^2 - s, s^2 (2n - 1) - n s]`.
pub fn var_bounds_elementary(params: &GameParams) -> Result<BoundReport> {
    let (n, s) = ns(params)?;
    Ok(BoundReport {
        quantity: Quantity::Variance,
        lower: int(s * s - s),
        upper: int(s * s * (2 * n - 1) - n * s),
        lower_source: BoundSource::ElementaryVar,
        upper_source: BoundSource::ElementaryVar,
    })
}

/// `[s^2 (2 - 1/s), n s^2 (2 - 1/s)]`, i.e. `[2s^2 - s, n (2s^2 - s)]`.
pub fn second_moment_bounds_elementary(params: &GameParams) -> Result<BoundReport> {
    let (n, s) = ns(params)?;
    Ok(BoundReport {
        quantity: Quantity::SecondMoment,
        lower: int(2 * s * s - s),
        upper: int(n * (2 * s * s - s)),
        lower_source: BoundSource::ElementaryVar,
        upper_source: BoundSource::ElementaryVar,
    })
}

/// Upper bound `n s (s - 1)`; lower bound from the elementary report.
pub fn var_bound_sum(params: &GameParams) -> Result<BoundReport> {
    let elementary = var_bounds_elementary(params)?;
    let (n, s) = ns(params)?;
    Ok(BoundReport {
        upper: int(n * s * (s - 1)),
        upper_source: BoundSource::SumVar,
        ..elementary
    })
}
