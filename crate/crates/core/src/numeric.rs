//! Shared numeric machinery.
//!
//! * [`Field`] abstracts over `f64` and exact [`Rational`] so that the
//!   Markov-chain evaluators can run in either arithmetic.
//! * [`CompensatedAccumulator`] is a Neumaier sum that also remembers the
//!   largest magnitude it has seen, which is how cancellation is estimated.
//! * Binomial coefficients come from a Pascal table (`n <= 64`) or from
//!   arbitrary precision integers.
//! * The weighted geometric series `sum i x^i` and `sum i^2 x^i`, plus the
//!   tail bounds used to truncate the positive-term moment series.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number backed by arbitrary precision integers.
pub type Rational = BigRational;

/// Largest `n` covered by the integer Pascal table.
pub const PASCAL_LIMIT: u64 = 64;

/// Scalar type the generic evaluators run over.
pub trait Field: Clone + fmt::Debug + PartialOrd + Num + Send + Sync {
    /// `num / den`, correctly rounded in floating point.
    fn from_ratio(num: u64, den: u64) -> Self;

    /// `C(n, k)`; floating point is limited to the Pascal table.
    fn binomial(n: u64, k: u64) -> Result<Self>;

    fn to_f64(&self) -> f64;

    fn abs_value(&self) -> Self {
        if *self < Self::zero() {
            Self::zero() - self.clone()
        } else {
            self.clone()
        }
    }
}

impl Field for f64 {
    fn from_ratio(num: u64, den: u64) -> Self {
        num as f64 / den as f64
    }

    fn binomial(n: u64, k: u64) -> Result<Self> {
        binomial(n, k).map(|c| c as f64)
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Field for Rational {
    fn from_ratio(num: u64, den: u64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn binomial(n: u64, k: u64) -> Result<Self> {
        Ok(Rational::from_integer(BigInt::from(binomial_big(n, k))))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// `a / b` as an exact rational.
pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn pascal_table() -> &'static [Vec<u64>] {
    static TABLE: OnceLock<Vec<Vec<u64>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(PASCAL_LIMIT as usize + 1);
        rows.push(vec![1]);
        for n in 1..=PASCAL_LIMIT as usize {
            let prev = &rows[n - 1];
            let mut row = vec![1u64; n + 1];
            for k in 1..n {
                row[k] = prev[k - 1] + prev[k];
            }
            rows.push(row);
        }
        rows
    })
}

/// Exact `C(n, k)` from the Pascal table. Returns 0 for `k > n`.
pub fn binomial(n: u64, k: u64) -> Result<u64> {
    if n > PASCAL_LIMIT {
        return Err(Error::BinomialOverflow { n, k });
    }
    if k > n {
        return Ok(0);
    }
    Ok(pascal_table()[n as usize][k as usize])
}

/// Exact `C(n, k)` for any size.
pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        // acc * (n - i) is always divisible by (i + 1)
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Neumaier-compensated running sum.
///
/// `max_partial_magnitude` is the largest absolute value among the addends
/// and the running sums; the ratio of it to the final value measures how
/// much cancellation happened.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedAccumulator {
    sum: f64,
    compensation: f64,
    max_partial_magnitude: f64,
}

impl CompensatedAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
        self.max_partial_magnitude = self.max_partial_magnitude.max(x.abs()).max(t.abs());
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }

    pub fn max_partial_magnitude(&self) -> f64 {
        self.max_partial_magnitude
    }

    /// `log10(max_partial_magnitude / |value|)`: decimal digits lost to
    /// cancellation. Infinite when the sum is exactly zero.
    pub fn digits_lost(&self) -> f64 {
        let v = self.value().abs();
        if self.max_partial_magnitude == 0.0 {
            0.0
        } else if v == 0.0 {
            f64::INFINITY
        } else {
            (self.max_partial_magnitude / v).log10().max(0.0)
        }
    }

    /// Folds another accumulator in. Merging is exact up to the
    /// compensation terms, so partial sums can be combined in any grouping.
    pub fn merge(&mut self, other: &Self) {
        self.add(other.sum);
        self.add(other.compensation);
        self.max_partial_magnitude = self.max_partial_magnitude.max(other.max_partial_magnitude);
    }
}

impl Extend<f64> for CompensatedAccumulator {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

impl FromIterator<f64> for CompensatedAccumulator {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        acc.extend(iter);
        acc
    }
}

fn check_open_unit(x: f64) -> Result<()> {
    if x.is_nan() || x.abs() >= 1.0 {
        return Err(Error::invalid_argument(
            "x",
            format!("|x| must be < 1, got {x}"),
        ));
    }
    Ok(())
}

/// `sum_{i>=1} i x^i = x / (1 - x)^2` for `|x| < 1`.
pub fn weighted_geom_sum_first(x: f64) -> Result<f64> {
    check_open_unit(x)?;
    let d = 1.0 - x;
    Ok(x / (d * d))
}

/// `sum_{i>=1} i^2 x^i = x (1 + x) / (1 - x)^3` for `|x| < 1`.
pub fn weighted_geom_sum_second(x: f64) -> Result<f64> {
    check_open_unit(x)?;
    let d = 1.0 - x;
    Ok(x * (1.0 + x) / (d * d * d))
}

fn check_q(q: f64) -> Result<()> {
    if !(0.0..1.0).contains(&q) {
        return Err(Error::invalid_argument(
            "q",
            format!("must lie in [0, 1), got {q}"),
        ));
    }
    Ok(())
}

/// Upper bound `n q^K / (1 - q)` on `sum_{k>=K} (1 - (1 - q^k)^n)`, using
/// `1 - (1 - x)^n <= n x`.
pub fn tail_bound_max_geom(n: u64, q: f64, k: u64) -> Result<f64> {
    check_q(q)?;
    Ok(n as f64 * q.powf(k as f64) / (1.0 - q))
}

/// Upper bound on `sum_{t>=K} (2t + 1)(1 - (1 - q^t)^n)`:
/// `(2K + 3) n q^K (1 + 2q / (1 - q)) / (1 - q)`.
pub fn tail_bound_max_geom_second(n: u64, q: f64, k: u64) -> Result<f64> {
    check_q(q)?;
    let one_minus = 1.0 - q;
    Ok((2 * k + 3) as f64 * n as f64 * q.powf(k as f64) * (1.0 + 2.0 * q / one_minus) / one_minus)
}

/// `"numerator/denominator"`, always in lowest terms; integers keep the
/// `/1` so that every exact value has the same shape.
pub fn render_fraction(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Parses `"a/b"` or a plain integer.
pub fn parse_fraction(text: &str) -> Result<Rational> {
    let bad = || Error::invalid_argument("fraction", format!("cannot parse `{text}`"));
    let text = text.trim();
    match text.split_once('/') {
        Some((num, den)) => {
            let num: BigInt = num.trim().parse().map_err(|_| bad())?;
            let den: BigInt = den.trim().parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(num, den))
        }
        None => text
            .parse::<BigInt>()
            .map(Rational::from_integer)
            .map_err(|_| bad()),
    }
}

/// Exact decimal rendering rounded (half away from zero) to `sig_digits`
/// significant digits, trailing fractional zeros dropped. Never uses
/// exponent notation.
pub fn render_decimal(value: &Rational, sig_digits: usize) -> String {
    let sig_digits = sig_digits.max(1);
    if value.is_zero() {
        return "0".to_string();
    }
    let negative = value.is_negative();
    let magnitude = value.abs();

    // floor(log10 |v|): start from the float estimate, then correct exactly.
    let ten = Rational::from_integer(BigInt::from(10));
    let mut exponent = Field::to_f64(&magnitude).log10().floor();
    if !exponent.is_finite() {
        exponent = 0.0;
    }
    let mut exponent = exponent as i64;
    loop {
        let lower = pow10(&ten, exponent);
        if magnitude < lower {
            exponent -= 1;
        } else if magnitude >= &lower * &ten {
            exponent += 1;
        } else {
            break;
        }
    }

    let shift = sig_digits as i64 - 1 - exponent;
    let scaled = &magnitude * pow10(&ten, shift);
    let half = rational(1, 2);
    let rounded = (scaled + half).floor().to_integer();

    let mut digits = rounded.to_string();
    let body = if shift > 0 {
        let shift = shift as usize;
        if digits.len() <= shift {
            digits = "0".repeat(shift + 1 - digits.len()) + &digits;
        }
        let (int, frac) = digits.split_at(digits.len() - shift);
        format!("{int}.{frac}")
    } else {
        digits + &"0".repeat((-shift) as usize)
    };
    let body = trim_fraction_zeros(body);
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

fn trim_fraction_zeros(mut text: String) -> String {
    if text.contains('.') {
        let keep = text.trim_end_matches('0').trim_end_matches('.').len();
        text.truncate(keep);
    }
    text
}

fn pow10(ten: &Rational, exponent: i64) -> Rational {
    let p = num_traits::pow(ten.clone(), exponent.unsigned_abs() as usize);
    if exponent < 0 {
        p.recip()
    } else {
        p
    }
}

/// Floating point rendering with `sig_digits` significant digits, plain
/// decimal notation, `.` separator.
pub fn render_f64(value: f64, sig_digits: usize) -> String {
    let sig_digits = sig_digits.max(1);
    if !value.is_finite() {
        return value.to_string();
    }
    if value == 0.0 {
        return "0".to_string();
    }
    let exponent = value.abs().log10().floor() as i64;
    let decimals = (sig_digits as i64 - 1 - exponent).max(0) as usize;
    trim_fraction_zeros(format!("{value:.decimals$}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn partial_first(x: f64, terms: usize) -> f64 {
        let mut acc = 0.0;
        let mut pow = 1.0;
        for i in 1..=terms {
            pow *= x;
            acc += i as f64 * pow;
        }
        acc
    }

    fn partial_second(x: f64, terms: usize) -> f64 {
        let mut acc = 0.0;
        let mut pow = 1.0;
        for i in 1..=terms {
            pow *= x;
            acc += (i * i) as f64 * pow;
        }
        acc
    }

    #[test]
    fn weighted_sums_match_partial_sums() {
        assert_eq!(weighted_geom_sum_first(0.0).unwrap(), 0.0);
        assert_eq!(weighted_geom_sum_second(0.0).unwrap(), 0.0);
        let first_half = partial_first(0.5, 200);
        assert!((first_half - 2.0).abs() < 1e-12);
        assert!((weighted_geom_sum_first(0.5).unwrap() - first_half).abs() < 1e-12);
        let first_neg = partial_first(-0.5, 200);
        assert!((first_neg + 2.0 / 9.0).abs() < 1e-12);
        assert!((weighted_geom_sum_first(-0.5).unwrap() - first_neg).abs() < 1e-12);
        let second_half = partial_second(0.5, 200);
        assert!((second_half - 6.0).abs() < 1e-12);
        assert!((weighted_geom_sum_second(0.5).unwrap() - second_half).abs() < 1e-12);
        let second_third = partial_second(1.0 / 3.0, 200);
        assert!((second_third - 1.5).abs() < 1e-12);
        assert!((weighted_geom_sum_second(1.0 / 3.0).unwrap() - second_third).abs() < 1e-12);
    }

    #[test]
    fn weighted_sums_reject_outside_unit_disc() {
        for x in [1.0, -1.0, 1.5, f64::NAN] {
            assert!(weighted_geom_sum_first(x).is_err());
            assert!(weighted_geom_sum_second(x).is_err());
        }
    }

    #[test]
    fn binomial_table() {
        assert_eq!(binomial(4, 2).unwrap(), 6);
        assert_eq!(binomial(9, 0).unwrap(), 1);
        assert_eq!(binomial(3, 5).unwrap(), 0);
        assert_eq!(binomial(64, 32).unwrap(), 1_832_624_140_942_590_534);
        assert!(matches!(
            binomial(65, 3),
            Err(Error::BinomialOverflow { .. })
        ));
    }

    #[test]
    fn binomial_30_15_matches_pascal_oracle() {
        // independent Pascal recursion on u128
        let mut row = vec![1u128];
        for _ in 0..30 {
            let mut next = vec![1u128; row.len() + 1];
            for k in 1..row.len() {
                next[k] = row[k - 1] + row[k];
            }
            row = next;
        }
        assert_eq!(row[15], 155_117_520);
        assert_eq!(binomial(30, 15).unwrap() as u128, row[15]);
    }

    #[test]
    fn binomial_table_matches_factorial_formula() {
        let mut factorial = vec![BigUint::one()];
        for i in 1..=64u64 {
            let next = &factorial[i as usize - 1] * BigUint::from(i);
            factorial.push(next);
        }
        for n in 0..=64u64 {
            for k in 0..=n {
                let by_factorial = &factorial[n as usize]
                    / (&factorial[k as usize] * &factorial[(n - k) as usize]);
                assert_eq!(BigUint::from(binomial(n, k).unwrap()), by_factorial);
                assert_eq!(binomial_big(n, k), by_factorial);
                assert_eq!(binomial(n, k).unwrap(), binomial(n, n - k).unwrap());
            }
        }
        assert_eq!(
            binomial_big(100, 50).to_string(),
            "100891344545564193334812497256"
        );
    }

    #[test]
    fn tail_bounds() {
        assert_eq!(tail_bound_max_geom(5, 0.0, 1).unwrap(), 0.0);
        assert_eq!(tail_bound_max_geom(2, 0.5, 10).unwrap(), 2f64.powi(-8));
        assert!(tail_bound_max_geom(2, 1.0, 10).is_err());
        assert!(tail_bound_max_geom_second(2, 1.0, 10).is_err());

        let q: f64 = 0.9;
        let n = 3;
        // 1 - (1 - x)^3 = 3x - 3x^2 + x^3, expanded to dodge cancellation
        let survival = |x: f64| 3.0 * x - 3.0 * x * x + x * x * x;
        let brute: f64 = (200..100_000).map(|k| survival(q.powi(k))).sum();
        assert!(tail_bound_max_geom(n, q, 200).unwrap() >= brute);
        let brute_second: f64 = (200..100_000)
            .map(|t| (2 * t + 1) as f64 * survival(q.powi(t)))
            .sum();
        assert!(tail_bound_max_geom_second(n, q, 200).unwrap() >= brute_second);
    }

    #[test]
    fn compensated_sum_tracks_cancellation() {
        let acc: CompensatedAccumulator = [1e16, 1.0, -1e16, 1.0].into_iter().collect();
        assert_eq!(acc.value(), 2.0);
        assert!(acc.max_partial_magnitude() >= acc.value().abs());
        assert!((acc.digits_lost() - 16.0 + 2f64.log10()).abs() < 1e-9);
    }

    #[test]
    fn compensated_merge_is_grouping_independent() {
        let values: Vec<f64> = (0..1000)
            .map(|i| ((i * 37) % 101) as f64 * 0.1 - 5.0)
            .collect();
        let whole: CompensatedAccumulator = values.iter().copied().collect();
        let mut left: CompensatedAccumulator = values[..400].iter().copied().collect();
        let right: CompensatedAccumulator = values[400..].iter().copied().collect();
        left.merge(&right);
        assert!((whole.value() - left.value()).abs() <= 1e-12);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(render_decimal(&rational(280, 19), 10), "14.73684211");
        assert_eq!(render_decimal(&rational(8, 3), 10), "2.666666667");
        assert_eq!(render_decimal(&rational(-1, 8), 2), "-0.13");
        assert_eq!(render_decimal(&rational(1800, 1), 3), "1800");
        assert_eq!(render_decimal(&rational(123456, 1), 3), "123000");
        assert_eq!(render_decimal(&rational(1, 1000), 3), "0.001");
        assert_eq!(render_decimal(&rational(0, 1), 5), "0");
        assert_eq!(render_f64(14.736842105263158, 12), "14.7368421053");
        assert_eq!(render_f64(0.0, 12), "0");
        assert_eq!(render_f64(1800.0, 3), "1800");
    }

    #[test]
    fn fraction_round_trip() {
        let x = rational(-280, 38);
        assert_eq!(render_fraction(&x), "-140/19");
        assert_eq!(parse_fraction(&render_fraction(&x)).unwrap(), x);
        assert_eq!(render_fraction(&rational(12, 4)), "3/1");
        assert_eq!(render_fraction(&rational(0, 7)), "0/1");
        assert_eq!(parse_fraction("7").unwrap(), rational(7, 1));
        assert!(parse_fraction("1/0").is_err());
        assert!(parse_fraction("a/b").is_err());
    }
}
