//! The transition matrix on the number of remaining dice, the absorption
//! profile from every state, and the CDF read off matrix powers.
//!
//! ```bash
//! cargo run -p geomax --example markov_chain
//! ```

use geomax::closed::cdf;
use geomax::markov::{absorption_cdf_by_power, second_moments_recursive, TransitionMatrix};
use geomax::{GameParams, NumericMode, Rational};

fn main() -> geomax::Result<()> {
    let params = GameParams::new(3, 4)?;

    let exact = TransitionMatrix::<Rational>::new(&params)?;
    println!("transition matrix for {params}:");
    for row in exact.rows() {
        let cells: Vec<String> = row.iter().map(|p| format!("{p:>6}")).collect();
        println!("  {}", cells.join(" "));
    }

    let profile = second_moments_recursive::<Rational>(&params)?;
    for k in 0..=params.n() as usize {
        println!(
            "  from {k} dice: E(T) = {}, Var(T) = {}",
            profile.first_moments[k],
            profile.variance_from(k)
        );
    }

    for t in [1, 5, 10, 25] {
        let by_power = absorption_cdf_by_power::<f64>(&params, t)?;
        let direct = cdf(&params, t as i64, &NumericMode::float())?.to_f64();
        println!("  P(T <= {t:>2}) = {by_power:.12} (closed form {direct:.12})");
    }
    Ok(())
}
