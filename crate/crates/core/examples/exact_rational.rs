//! Exact rational moments, and the two-dice identity
//! `E = (3s^2 - 2s) / (2s - 1)`.
//!
//! ```bash
//! cargo run -p geomax --example exact_rational
//! ```

use geomax::bounds::two_dice_mean;
use geomax::closed::{expected_value_closed, second_moment_closed, variance_closed};
use geomax::{GameParams, NumericMode};

fn main() -> geomax::Result<()> {
    let exact = NumericMode::exact();
    for (n, s) in [(1, 6), (2, 2), (2, 10), (4, 6), (6, 6)] {
        let params = GameParams::new(n, s)?;
        let mean = expected_value_closed(&params, &exact)?;
        let second = second_moment_closed(&params, &exact)?;
        let var = variance_closed(&params, &exact)?;
        println!("{params}");
        println!(
            "  E(Y)   = {} ~ {}",
            mean.value,
            mean.value.render_decimal(12)
        );
        println!("  E(Y^2) = {}", second.value);
        println!(
            "  Var(Y) = {} ~ {}",
            var.value,
            var.value.render_decimal(12)
        );
    }

    for s in 2..=8 {
        let params = GameParams::new(2, s)?;
        let mean = expected_value_closed(&params, &exact)?;
        let identity = two_dice_mean(s);
        assert_eq!(mean.value.as_exact(), Some(&identity));
        println!("s = {s}: E(max of two) = {identity}");
    }
    Ok(())
}
