//! Distribution and moments of `Y = max(Z_1, ..., Z_n)` with
//! `Z_i ~ Geom(1/s)` i.i.d. on `{1, 2, ...}`.
//!
//! Two families of evaluators live here:
//!
//! * the finite alternating binomial sums
//!   `E(Y) = sum_k C(n,k) (-1)^(k+1) / (1 - q^k)` and
//!   `E(Y^2) = sum_k C(n,k) (-1)^(k+1) (1 + q^k) / (1 - q^k)^2`,
//!   exact in rational arithmetic but cancellation-prone in `f64`;
//! * the positive-term series `E(Y) = sum_{k>=0} P(Y > k)` and
//!   `E(Y^2) = sum_{t>=0} (2t + 1) P(Y > t)`, truncated with an explicit
//!   tail bound.
//!
//! In float mode the alternating sums run through a compensated
//! accumulator; when the estimated relative error exceeds
//! [`CANCELLATION_TOLERANCE`] they hand over to the series (unless the
//! mode forbids it, in which case [`Error::Cancellation`] is returned).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::{
    binomial, tail_bound_max_geom, tail_bound_max_geom_second, CompensatedAccumulator, Field,
    Rational, PASCAL_LIMIT,
};
use crate::params::{Evaluation, GameParams, Method, Number, NumericMode, CANCELLATION_TOLERANCE};

const EPS: f64 = f64::EPSILON;

fn sign(k: u64) -> i32 {
    if k % 2 == 1 {
        1
    } else {
        -1
    }
}

fn exact_binomial(n: u64, k: u64) -> Rational {
    <Rational as Field>::binomial(n, k).expect("exact binomial is infallible")
}

/// `log(q)` computed without forming `1 - p` first.
fn ln_q(params: &GameParams) -> f64 {
    (-params.p()).ln_1p()
}

/// `1 - q^k` without cancellation.
fn one_minus_q_pow(ln_q: f64, k: f64) -> f64 {
    -(k * ln_q).exp_m1()
}

/// `P(Y > k) = 1 - (1 - q^k)^n` without cancellation.
fn survival_f64(n: u32, ln_q: f64, k: u64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let q_k = (k as f64 * ln_q).exp();
    -(n as f64 * (-q_k).ln_1p()).exp_m1()
}

/// Probability mass `P(Y = y)` for `y >= 1`.
pub fn pmf(params: &GameParams, y: i64, mode: &NumericMode) -> Result<Number> {
    if y < 1 {
        return Err(Error::invalid_argument(
            "y",
            format!("must be >= 1, got {y}"),
        ));
    }
    let n = params.n() as u64;
    if params.s() == 1 {
        let v = if y == 1 { 1 } else { 0 };
        return Ok(match mode.is_exact() {
            true => Number::Exact(Rational::from_integer(BigInt::from(v))),
            false => Number::Float(v as f64),
        });
    }
    let y = y as u64;
    if mode.is_exact() {
        // sum_k C(n,k) (-1)^(k+1) q^(yk) (1/q^k - 1), written as
        // q^((y-1)k) (1 - q^k) so that no division by q is needed.
        let q = params.q_as::<Rational>();
        let mut acc = Rational::zero();
        for k in 1..=n {
            let q_k = num_traits::pow(q.clone(), k as usize);
            let q_prev = num_traits::pow(q_k.clone(), (y - 1) as usize);
            let term = exact_binomial(n, k) * q_prev * (Rational::one() - q_k);
            if sign(k) > 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        return Ok(Number::Exact(acc));
    }
    if n > PASCAL_LIMIT {
        // The alternating form needs the integer table; use F(y) - F(y-1).
        let hi = cdf(params, y as i64, mode)?.to_f64();
        let lo = cdf(params, y as i64 - 1, mode)?.to_f64();
        return Ok(Number::Float((hi - lo).max(0.0)));
    }
    let lq = ln_q(params);
    let mut acc = CompensatedAccumulator::new();
    for k in 1..=n {
        let c = binomial(n, k)? as f64;
        let term = c * ((y - 1) as f64 * k as f64 * lq).exp() * one_minus_q_pow(lq, k as f64);
        acc.add(sign(k) as f64 * term);
    }
    Ok(Number::Float(acc.value().clamp(0.0, 1.0)))
}

/// `P(Y <= y) = (1 - q^y)^n`, zero for `y < 1`.
pub fn cdf(params: &GameParams, y: i64, mode: &NumericMode) -> Result<Number> {
    if mode.is_exact() {
        return Ok(Number::Exact(cdf_exact(params, y)));
    }
    if y < 1 {
        return Ok(Number::Float(0.0));
    }
    if params.s() == 1 {
        return Ok(Number::Float(1.0));
    }
    Ok(Number::Float(
        1.0 - survival_f64(params.n(), ln_q(params), y as u64),
    ))
}

fn cdf_exact(params: &GameParams, y: i64) -> Rational {
    if y < 1 {
        return Rational::zero();
    }
    let q = params.q_as::<Rational>();
    let inner = Rational::one() - num_traits::pow(q, y as usize);
    num_traits::pow(inner, params.n() as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Moment {
    First,
    Second,
}

fn alternating_exact(params: &GameParams, moment: Moment) -> Rational {
    if params.s() == 1 {
        return Rational::one();
    }
    let n = params.n() as u64;
    let q = params.q_as::<Rational>();
    let mut acc = Rational::zero();
    let mut q_k = Rational::one();
    for k in 1..=n {
        q_k *= &q;
        let denom = Rational::one() - &q_k;
        let term = match moment {
            Moment::First => exact_binomial(n, k) / denom,
            Moment::Second => exact_binomial(n, k) * (Rational::one() + &q_k) / (&denom * &denom),
        };
        if sign(k) > 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Alternating sum in `f64`: `(value, absolute error estimate)`.
fn alternating_f64(params: &GameParams, moment: Moment) -> Result<(f64, f64)> {
    if params.s() == 1 {
        return Ok((1.0, 0.0));
    }
    let n = params.n() as u64;
    let lq = ln_q(params);
    let mut acc = CompensatedAccumulator::new();
    for k in 1..=n {
        let c = binomial(n, k)? as f64;
        let denom = one_minus_q_pow(lq, k as f64);
        let term = match moment {
            Moment::First => c / denom,
            Moment::Second => c * (1.0 + (k as f64 * lq).exp()) / (denom * denom),
        };
        acc.add(sign(k) as f64 * term);
    }
    // every term carries a few ulps of its own magnitude; the compensated
    // sum adds essentially nothing on top
    let error = (n as f64 + 4.0) * 4.0 * EPS * acc.max_partial_magnitude();
    Ok((acc.value(), error))
}

fn closed_moment(params: &GameParams, mode: &NumericMode, moment: Moment) -> Result<Evaluation> {
    if mode.is_exact() {
        return Ok(Evaluation::exact(
            alternating_exact(params, moment),
            Method::ClosedAlternating,
        ));
    }
    let attempt = alternating_f64(params, moment);
    let relative_error = match &attempt {
        Ok((value, error)) if *value != 0.0 => error / value.abs(),
        Ok(_) => f64::INFINITY,
        // beyond the Pascal table the alternating sum is hopeless in f64
        Err(Error::BinomialOverflow { .. }) => f64::INFINITY,
        Err(e) => return Err(e.clone()),
    };
    if relative_error <= CANCELLATION_TOLERANCE {
        let (value, error) = attempt.expect("checked above");
        return Ok(Evaluation::float(value, error, Method::ClosedAlternating));
    }
    if !mode.series_fallback() {
        return Err(Error::Cancellation {
            relative_error,
            tolerance: CANCELLATION_TOLERANCE,
        });
    }
    series_moment(params, mode, moment)
}

/// Expected number of turns from the alternating binomial sum.
///
/// In float mode the result may come from the series instead; the returned
/// [`Evaluation::method`] says which.
pub fn expected_value_closed(params: &GameParams, mode: &NumericMode) -> Result<Evaluation> {
    closed_moment(params, mode, Moment::First)
}

/// `E(Y^2)` from the alternating binomial sum.
pub fn second_moment_closed(params: &GameParams, mode: &NumericMode) -> Result<Evaluation> {
    closed_moment(params, mode, Moment::Second)
}

/// `Var(Y) = E(Y^2) - E(Y)^2` from the closed forms.
pub fn variance_closed(params: &GameParams, mode: &NumericMode) -> Result<Evaluation> {
    let mean = expected_value_closed(params, mode)?;
    let second = second_moment_closed(params, mode)?;
    Ok(variance_from(&mean, &second))
}

pub(crate) fn variance_from(mean: &Evaluation, second: &Evaluation) -> Evaluation {
    let method = if mean.method == second.method {
        mean.method
    } else {
        Method::Series
    };
    match (&mean.value, &second.value) {
        (Number::Exact(m), Number::Exact(m2)) => Evaluation::exact(m2 - m * m, method),
        _ => {
            let m = mean.to_f64();
            let m2 = second.to_f64();
            let error = second.error_bound
                + 2.0 * m.abs() * mean.error_bound
                + mean.error_bound * mean.error_bound
                + 2.0 * EPS * m2.abs();
            Evaluation::float(m2 - m * m, error, method)
        }
    }
}

fn series_moment(params: &GameParams, mode: &NumericMode, moment: Moment) -> Result<Evaluation> {
    if mode.is_exact() {
        // no exact tail; the two forms are equal, so use the finite one
        return Ok(Evaluation::exact(
            alternating_exact(params, moment),
            Method::ClosedAlternating,
        ));
    }
    if params.s() == 1 {
        return Ok(Evaluation::float(1.0, 0.0, Method::Series));
    }
    let n = params.n();
    let q = params.q();
    let lq = ln_q(params);
    let epsilon = mode.truncation_epsilon();
    let tail = |k: u64| match moment {
        Moment::First => tail_bound_max_geom(n as u64, q, k),
        Moment::Second => tail_bound_max_geom_second(n as u64, q, k),
    };

    let mut acc = CompensatedAccumulator::new();
    let mut k = 0u64;
    let tail_bound = loop {
        let bound = tail(k)?;
        if bound < epsilon {
            break bound;
        }
        let weight = match moment {
            Moment::First => 1.0,
            Moment::Second => (2 * k + 1) as f64,
        };
        acc.add(weight * survival_f64(n, lq, k));
        k += 1;
    };
    let value = acc.value();
    // each positive term is accurate to a few ulps, so the relative error of
    // the sum is too
    let error = tail_bound + 8.0 * EPS * value;
    Ok(Evaluation::float(value, error, Method::Series))
}

/// `E(Y) = sum_{k>=0} (1 - (1 - q^k)^n)`, truncated once the tail bound
/// drops below the mode's truncation epsilon. Exact mode delegates to the
/// closed form.
pub fn expected_value_series(params: &GameParams, mode: &NumericMode) -> Result<Evaluation> {
    series_moment(params, mode, Moment::First)
}

/// `E(Y^2) = sum_{t>=0} (2t + 1)(1 - (1 - q^t)^n)`, truncated like
/// [`expected_value_series`].
pub fn second_moment_series(params: &GameParams, mode: &NumericMode) -> Result<Evaluation> {
    series_moment(params, mode, Moment::Second)
}

/// Variance from the two series.
pub fn variance_series(params: &GameParams, mode: &NumericMode) -> Result<Evaluation> {
    let mean = expected_value_series(params, mode)?;
    let second = second_moment_series(params, mode)?;
    Ok(variance_from(&mean, &second))
}

/// Smallest `y >= 1` with `P(Y <= y) >= prob`.
pub fn quantile(params: &GameParams, prob: f64, mode: &NumericMode) -> Result<u64> {
    if !(prob > 0.0 && prob < 1.0) {
        return Err(Error::invalid_argument(
            "prob",
            format!("must lie in (0, 1), got {prob}"),
        ));
    }
    let reaches: Box<dyn Fn(u64) -> bool> = if mode.is_exact() {
        let target = Rational::from_float(prob).expect("finite probability");
        let params = *params;
        Box::new(move |y| cdf_exact(&params, y as i64) >= target)
    } else {
        let params = *params;
        let mode = *mode;
        Box::new(move |y| {
            cdf(&params, y as i64, &mode)
                .map(|c| c.to_f64())
                .unwrap_or(0.0)
                >= prob
        })
    };

    // exponential search for an upper bracket, then bisection; the cdf is
    // non-decreasing so the predicate is monotone
    let mut hi = 1u64;
    while !reaches(hi) {
        if hi > u64::MAX / 4 {
            return Err(Error::invalid_argument("prob", "quantile out of range"));
        }
        hi *= 2;
    }
    let mut lo = hi / 2; // reaches(lo) is false unless lo == 0
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if reaches(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
