//! Every bound for a handful of parameters, with where it comes from.
//!
//! ```bash
//! cargo run -p geomax --example bounds_table
//! ```

use geomax::bounds::{
    ev_bound_pairing, ev_bounds_elementary, second_moment_bounds_elementary, var_bound_sum,
    var_bounds_elementary,
};
use geomax::closed::{expected_value_closed, second_moment_closed, variance_closed};
use geomax::{BoundReport, GameParams, NumericMode};

fn show(report: &BoundReport, value: f64) {
    println!(
        "  {:<13} [{:>10.4}, {:>10.4}]  value {:>10.4}  ({} / {})",
        report.quantity.as_str(),
        report.lower_f64(),
        report.upper_f64(),
        value,
        report.lower_source,
        report.upper_source,
    );
}

fn main() -> geomax::Result<()> {
    let mode = NumericMode::float();
    for (n, s) in [(1, 6), (3, 6), (5, 10), (12, 20)] {
        let params = GameParams::new(n, s)?;
        let mean = expected_value_closed(&params, &mode)?.to_f64();
        let second = second_moment_closed(&params, &mode)?.to_f64();
        let var = variance_closed(&params, &mode)?.to_f64();
        println!("{params}");
        show(&ev_bounds_elementary(&params)?, mean);
        show(&ev_bound_pairing(&params)?, mean);
        show(&second_moment_bounds_elementary(&params)?, second);
        show(&var_bounds_elementary(&params)?, var);
        show(&var_bound_sum(&params)?, var);
    }
    Ok(())
}
