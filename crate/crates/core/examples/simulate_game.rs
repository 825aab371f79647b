//! Play games: a scripted transcript, a seeded game, and a Monte Carlo
//! estimate checked against the exact moments.
//!
//! ```bash
//! cargo run --release -p geomax --example simulate_game
//! ```

use geomax::closed::{expected_value_closed, variance_closed};
use geomax::simulator::{monte_carlo_moments, play_game, play_game_with, ScriptedRolls};
use geomax::{GameParams, NumericMode};

fn main() -> geomax::Result<()> {
    let params = GameParams::new(4, 6)?;

    let mut script = ScriptedRolls::from_turns(&[&[3, 2, 2, 4], &[3, 6, 3], &[4], &[1]]);
    let game = play_game_with(&params, &mut script)?;
    println!(
        "scripted: {:?} -> {} turns, signature {}",
        game.turns, game.turn_count, game.signature
    );

    let game = play_game(&params, 7)?;
    println!(
        "seed 7:   {} turns, removed {:?}, signature {}",
        game.turn_count, game.removed_per_turn, game.signature
    );

    let estimate = monte_carlo_moments(&params, 200_000, 42)?;
    let mean = expected_value_closed(&params, &NumericMode::float())?.to_f64();
    let var = variance_closed(&params, &NumericMode::float())?.to_f64();
    println!(
        "monte carlo ({} trials, seed {}): mean {:.4} +/- {:.4} (exact {mean:.4}), variance {:.3} +/- {:.3} (exact {var:.3})",
        estimate.trials,
        estimate.seed,
        estimate.mean,
        estimate.std_error_mean,
        estimate.variance,
        estimate.std_error_variance,
    );
    Ok(())
}
