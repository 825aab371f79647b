//! Exact means and variances next to their bounds, at the points used in
//! the bound-comparison plots.
//!
//! ```bash
//! cargo run -p geomax --example figures
//! ```

use geomax::bounds::{
    ev_bound_pairing, ev_bounds_elementary, var_bound_sum, var_bounds_elementary,
};
use geomax::closed::{expected_value_closed, variance_closed};
use geomax::numeric::render_decimal;
use geomax::{GameParams, NumericMode};

fn main() -> geomax::Result<()> {
    let exact = NumericMode::exact();

    println!("expected number of turns: exact | n*s | pairing bound");
    let ev_points = [2, 4, 6, 8, 10]
        .map(|n| (n, 10))
        .into_iter()
        .chain([4, 6, 8, 10, 12].map(|s| (4, s)));
    for (n, s) in ev_points {
        let params = GameParams::new(n, s)?;
        let mean = expected_value_closed(&params, &exact)?;
        println!(
            "  n = {n:>2}, s = {s:>2}: {:>14} | {:>4} | {:>14}",
            mean.value.render_decimal(10),
            render_decimal(&ev_bounds_elementary(&params)?.upper, 10),
            render_decimal(&ev_bound_pairing(&params)?.upper, 10),
        );
    }

    println!("variance: exact | s^2(2n-1)-ns | ns(s-1)");
    let var_points = [2, 4, 6, 8, 10]
        .map(|n| (n, 10))
        .into_iter()
        .chain([2, 4, 6, 8, 10].map(|s| (2, s)));
    for (n, s) in var_points {
        let params = GameParams::new(n, s)?;
        let var = variance_closed(&params, &exact)?;
        println!(
            "  n = {n:>2}, s = {s:>2}: {:>14} | {:>5} | {:>4}",
            var.value.render_decimal(10),
            render_decimal(&var_bounds_elementary(&params)?.upper, 10),
            render_decimal(&var_bound_sum(&params)?.upper, 10),
        );
    }
    Ok(())
}
