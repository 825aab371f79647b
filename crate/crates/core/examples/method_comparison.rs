//! The same moments by three routes, and what happens when the
//! alternating sum cancels.
//!
//! ```bash
//! cargo run -p geomax --example method_comparison
//! ```

use geomax::{moments, Error, GameParams, Method, NumericMode};

fn main() -> geomax::Result<()> {
    let float = NumericMode::float();
    for (n, s) in [(2, 10), (6, 10), (12, 20), (20, 20)] {
        let params = GameParams::new(n, s)?;
        println!("{params}");
        for method in [Method::ClosedAlternating, Method::Series, Method::Recursive] {
            let report = moments(&params, method, &float)?;
            println!(
                "  {:<20} mean {:<20} variance {:<20} (+/- {:.1e}, via {})",
                method.as_str(),
                report.mean.to_f64(),
                report.variance.to_f64(),
                report.error_bound,
                report.method,
            );
        }
    }

    // Sixty dice: the alternating binomial sum loses ~17 digits.
    let params = GameParams::new(60, 60)?;
    let fallback = moments(&params, Method::ClosedAlternating, &float)?;
    println!(
        "{params}: closed form answered via {} -> mean {}",
        fallback.method,
        fallback.mean.to_f64()
    );
    match moments(
        &params,
        Method::ClosedAlternating,
        &float.without_fallback(),
    ) {
        Err(Error::Cancellation { relative_error, .. }) => {
            println!("  without fallback: refused, estimated relative error {relative_error:.1e}")
        }
        other => println!("  without fallback: {other:?}"),
    }
    let exact = moments(&params, Method::ClosedAlternating, &NumericMode::exact())?;
    println!("  exact rational mean: {}", exact.mean.render_decimal(20));
    Ok(())
}
