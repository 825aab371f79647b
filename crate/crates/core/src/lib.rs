//! Exact distribution, moments and bounds for the number of turns in the
//! dice-elimination game.
//!
//! `n` dice with `s` faces are rolled; with `k` dice on the table, every
//! die showing `k` is removed. The number of turns is distributed as the
//! maximum of `n` i.i.d. geometric variables with success probability
//! `1/s`. The crate evaluates its moments by four independent routes that
//! serve as checks on one another:
//!
//! * [`closed`]: alternating binomial sums, and positive-term series;
//! * [`markov`]: first-step recursions and matrix powers of the
//!   transition matrix on the number of remaining dice;
//! * [`simulator`]: seeded Monte Carlo play of the game itself.
//!
//! [`bounds`] provides elementary and improved bounds, and [`cli`] the
//! command line front end used by the `geomax` binary.
//!
//! ```
//! use geomax::{closed, GameParams, NumericMode};
//!
//! let params = GameParams::new(2, 10).unwrap();
//! let mean = closed::expected_value_closed(&params, &NumericMode::exact()).unwrap();
//! assert_eq!(mean.value.to_string(), "280/19");
//! ```

pub mod bounds;
pub mod cli;
pub mod closed;
mod error;
pub mod markov;
pub mod numeric;
mod params;
pub mod simulator;

pub use bounds::{BoundReport, BoundSource, Quantity};
pub use error::{Error, Result};
pub use markov::{AbsorptionProfile, TransitionMatrix};
pub use numeric::{CompensatedAccumulator, Field, Rational};
pub use params::{
    Arithmetic, Evaluation, GameParams, Method, MomentReport, Number, NumericMode,
    CANCELLATION_TOLERANCE, DEFAULT_TRUNCATION_EPSILON,
};
pub use simulator::{GameRecord, McEstimate, Signature};

/// Mean, second moment and variance by the requested route.
///
/// `ClosedAlternating` may silently use the series in float mode (see
/// [`closed::expected_value_closed`]); `Series` in exact mode resolves to
/// the closed form. `MatrixPower` and `MonteCarlo` do not produce moments
/// here.
pub fn moments(params: &GameParams, method: Method, mode: &NumericMode) -> Result<MomentReport> {
    let [mean, second, variance] = match method {
        Method::ClosedAlternating => {
            let mean = closed::expected_value_closed(params, mode)?;
            let second = closed::second_moment_closed(params, mode)?;
            let variance = closed::variance_from(&mean, &second);
            [mean, second, variance]
        }
        Method::Series => {
            let mean = closed::expected_value_series(params, mode)?;
            let second = closed::second_moment_series(params, mode)?;
            let variance = closed::variance_from(&mean, &second);
            [mean, second, variance]
        }
        Method::Recursive => markov::recursive_evaluations(params, mode)?,
        Method::MatrixPower | Method::MonteCarlo => {
            return Err(Error::UnsupportedMethod {
                method: method.as_str(),
                quantity: "moments",
            })
        }
    };
    let error_bound = mean
        .error_bound
        .max(second.error_bound)
        .max(variance.error_bound);
    Ok(MomentReport {
        params: *params,
        method: variance.method,
        mean: mean.value,
        second_moment: second.value,
        variance: variance.value,
        error_bound,
    })
}
