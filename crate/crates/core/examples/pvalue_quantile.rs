//! Tail probabilities and quantiles of the game length, e.g. to judge how
//! surprising a long game is.
//!
//! ```bash
//! cargo run -p geomax --example pvalue_quantile
//! ```

use geomax::closed::{cdf, quantile};
use geomax::{GameParams, NumericMode};

fn main() -> geomax::Result<()> {
    let params = GameParams::new(4, 6)?;
    let exact = NumericMode::exact();
    let float = NumericMode::float();

    for observed in [10, 20, 30, 40] {
        // P(Y >= observed) = 1 - F(observed - 1)
        let below = cdf(&params, observed - 1, &exact)?;
        let p_value = 1.0 - below.to_f64();
        println!("{params}: P(turns >= {observed}) = {p_value:.3e}");
    }
    for prob in [0.5, 0.9, 0.99, 0.999] {
        println!(
            "  {prob} quantile: {} turns",
            quantile(&params, prob, &float)?
        );
    }
    Ok(())
}
