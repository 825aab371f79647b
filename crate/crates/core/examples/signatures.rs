//! Enumerate the possible signatures and compare with how often each one
//! shows up in simulated games.
//!
//! ```bash
//! cargo run --release -p geomax --example signatures
//! ```

use geomax::simulator::{enumerate_signatures, signature_count, signature_frequencies};
use geomax::GameParams;

fn main() -> geomax::Result<()> {
    for n in 1..=6 {
        let all = enumerate_signatures(n)?;
        let listed: Vec<String> = all.iter().map(ToString::to_string).collect();
        println!("n = {n}: {} signatures: {}", all.len(), listed.join(" "));
    }
    println!("n = 40: {} signatures", signature_count(40)?);

    let params = GameParams::new(4, 6)?;
    let trials = 100_000;
    let counts = signature_frequencies(&params, trials, 1)?;
    println!("{params}, {trials} games:");
    for signature in enumerate_signatures(4)? {
        let seen = counts.get(&signature).copied().unwrap_or(0);
        println!("  {signature}: {:.4}", seen as f64 / trials as f64);
    }
    Ok(())
}
