//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p geomax --test acceptance` (add `--release` for
//! representative timings).

use std::time::{Duration, Instant};

use geomax::markov::{absorption_cdf_sequence, second_moments_recursive};
use geomax::numeric::{weighted_geom_sum_first, weighted_geom_sum_second};
use geomax::simulator::{
    enumerate_signatures, ks_critical_value, ks_statistic, play_game_with, turn_count_samples,
    McEstimate, ScriptedRolls,
};
use geomax::{bounds, closed, GameParams, Number, NumericMode, Rational};

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
        }
    }
}

fn params(n: u32, s: u32) -> GameParams {
    GameParams::new(n, s).expect("valid parameters")
}

fn exact(value: Number) -> Rational {
    value.as_exact().cloned().expect("exact mode value")
}

fn within(actual: f64, expected: f64, tolerance: f64, failures: &mut Vec<String>, label: String) {
    let error = (actual - expected).abs();
    if error.is_nan() || error > tolerance {
        failures.push(format!(
            "{label}: got {actual}, expected {expected} (tol {tolerance:e})"
        ));
    }
}

fn summary(failures: Vec<String>, checked: usize) -> Outcome {
    if failures.is_empty() {
        Outcome::new(true, format!("{checked} checks"))
    } else {
        let shown: Vec<_> = failures.iter().take(4).cloned().collect();
        Outcome::new(
            false,
            format!(
                "{} of {checked} checks failed; {}",
                failures.len(),
                shown.join("; ")
            ),
        )
    }
}

/// Plotted expected number of turns against both bounds.
fn ev_plot_values() -> Outcome {
    let mode = NumericMode::float();
    let mut failures = Vec::new();
    let fixed_s = [
        (2, 14.73684211),
        (4, 20.27337819),
        (6, 23.75349288),
        (8, 26.29578437),
        (10, 28.2994867),
    ];
    for (n, expected) in fixed_s {
        let e = closed::expected_value_closed(&params(n, 10), &mode)
            .unwrap()
            .to_f64();
        within(e, expected, 1e-6, &mut failures, format!("E({n}, 10)"));
    }
    let fixed_n = [
        (4, 7.74178),
        (6, 11.9267),
        (8, 16.1018),
        (10, 20.2734),
        (12, 24.4433),
    ];
    for (s, expected) in fixed_n {
        let e = closed::expected_value_closed(&params(4, s), &mode)
            .unwrap()
            .to_f64();
        within(e, expected, 5e-4, &mut failures, format!("E(4, {s})"));
    }
    summary(failures, 10)
}

/// Plotted variances against both bounds.
fn var_plot_values() -> Outcome {
    let mode = NumericMode::float();
    let mut failures = Vec::new();
    let fixed_s = [
        (2, 112.6869806),
        (4, 128.3269068),
        (6, 134.4325467),
        (8, 137.6785326),
        (10, 139.6915048),
    ];
    for (n, expected) in fixed_s {
        let v = closed::variance_closed(&params(n, 10), &mode)
            .unwrap()
            .to_f64();
        within(v, expected, 1e-6, &mut failures, format!("Var({n}, 10)"));
    }
    let fixed_n = [
        (2, 2.666666667),
        (4, 15.18367347),
        (6, 37.68595041),
        (8, 70.18666667),
        (10, 112.6869806),
    ];
    for (s, expected) in fixed_n {
        let v = closed::variance_closed(&params(2, s), &mode)
            .unwrap()
            .to_f64();
        within(v, expected, 1e-6, &mut failures, format!("Var(2, {s})"));
    }
    summary(failures, 10)
}

/// Closed-alternating, positive-series and recursive evaluators agree.
fn method_equivalence() -> Outcome {
    let float = NumericMode::float();
    let rational = NumericMode::exact();
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut worst = 0.0f64;
    for s in 1..=20 {
        for n in 1..=s {
            let g = params(n, s);
            let profile = second_moments_recursive::<f64>(&g).unwrap();
            let means = [
                closed::expected_value_closed(&g, &float).unwrap().to_f64(),
                closed::expected_value_series(&g, &float).unwrap().to_f64(),
                *profile.mean(),
            ];
            let seconds = [
                closed::second_moment_closed(&g, &float).unwrap().to_f64(),
                closed::second_moment_series(&g, &float).unwrap().to_f64(),
                *profile.second_moment(),
            ];
            for (label, values) in [("mean", means), ("second moment", seconds)] {
                for i in 0..3 {
                    for j in i + 1..3 {
                        let d = (values[i] - values[j]).abs();
                        worst = worst.max(d);
                        checked += 1;
                        if d > 1e-9 {
                            failures
                                .push(format!("{label} ({n}, {s}) routes {i}/{j}: |diff| = {d:e}"));
                        }
                    }
                }
            }

            let exact_profile = second_moments_recursive::<Rational>(&g).unwrap();
            let e_closed = exact(closed::expected_value_closed(&g, &rational).unwrap().value);
            let m_closed = exact(closed::second_moment_closed(&g, &rational).unwrap().value);
            checked += 2;
            if &e_closed != exact_profile.mean() {
                failures.push(format!("exact mean ({n}, {s}) differs"));
            }
            if &m_closed != exact_profile.second_moment() {
                failures.push(format!("exact second moment ({n}, {s}) differs"));
            }
        }
    }
    let mut outcome = summary(failures, checked);
    outcome
        .detail
        .push_str(&format!(", worst float discrepancy {worst:.2e}"));
    outcome
}

/// Matrix-power absorption CDF against the closed-form CDF.
fn matrix_power_cdf() -> Outcome {
    let mode = NumericMode::float();
    let mut failures = Vec::new();
    let mut checked = 0;
    for s in 1..=8 {
        for n in 1..=s {
            let g = params(n, s);
            let by_power = absorption_cdf_sequence::<f64>(&g, 200).unwrap();
            for (t, p) in by_power.iter().enumerate() {
                let direct = closed::cdf(&g, t as i64, &mode).unwrap().to_f64();
                checked += 1;
                if (p - direct).abs() > 1e-12 {
                    failures.push(format!("({n}, {s}) t = {t}: {p} vs {direct}"));
                }
            }
        }
    }
    summary(failures, checked)
}

/// Signature enumeration count law and the four-dice list.
fn signature_enumeration() -> Outcome {
    let mut failures = Vec::new();
    for n in 1..=16u32 {
        let count = enumerate_signatures(n).unwrap().len();
        if count != 1 << (n - 1) {
            failures.push(format!("n = {n}: {count} signatures"));
        }
    }
    let four: Vec<String> = enumerate_signatures(4)
        .unwrap()
        .iter()
        .map(|s| s.to_string())
        .collect();
    let expected = [
        "4444", "4441", "4422", "4421", "4333", "4331", "4322", "4321",
    ];
    if four != expected {
        failures.push(format!("n = 4 list {four:?}"));
    }
    summary(failures, 17)
}

/// Exact moments lie inside every bound; the pairing bound is tight at n = 2.
fn bound_suite() -> Outcome {
    let mode = NumericMode::exact();
    let mut failures = Vec::new();
    let mut checked = 0;
    for s in 1..=30 {
        for n in 1..=s {
            let g = params(n, s);
            let mean = exact(closed::expected_value_closed(&g, &mode).unwrap().value);
            let var = exact(closed::variance_closed(&g, &mode).unwrap().value);
            let ev = bounds::ev_bounds_elementary(&g).unwrap();
            let pairing = bounds::ev_bound_pairing(&g).unwrap();
            let v_el = bounds::var_bounds_elementary(&g).unwrap();
            let v_sum = bounds::var_bound_sum(&g).unwrap();
            let checks = [
                ("s <= E <= ns", ev.contains(&mean)),
                ("E <= pairing", mean <= pairing.upper),
                ("Var elementary", v_el.contains(&var)),
                ("Var <= ns(s-1)", var <= v_sum.upper),
            ];
            for (label, ok) in checks {
                checked += 1;
                if !ok {
                    failures.push(format!("{label} at ({n}, {s})"));
                }
            }
            if n == 2 {
                checked += 1;
                if pairing.upper != mean {
                    failures.push(format!("pairing bound not tight at (2, {s})"));
                }
            }
        }
    }
    summary(failures, checked)
}

/// Simulation agrees with the exact distribution.
fn monte_carlo_agreement() -> Outcome {
    const TRIALS: u64 = 1_000_000;
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    for (n, s, seed) in [(2, 2, 20240101u64), (4, 6, 20240102), (3, 10, 20240103)] {
        let g = params(n, s);
        let samples = turn_count_samples(&g, TRIALS, seed).unwrap();
        let est = McEstimate::from_samples(&samples, seed).unwrap();
        let exact_mean = closed::expected_value_closed(&g, &NumericMode::exact())
            .unwrap()
            .to_f64();
        let exact_var = closed::variance_closed(&g, &NumericMode::exact())
            .unwrap()
            .to_f64();
        let z_mean = (est.mean - exact_mean) / est.std_error_mean;
        let z_var = (est.variance - exact_var) / est.std_error_variance;
        if z_mean.abs() > 3.0 {
            failures.push(format!("({n}, {s}) mean z = {z_mean:.2}"));
        }
        if z_var.abs() > 3.0 {
            failures.push(format!("({n}, {s}) variance z = {z_var:.2}"));
        }
        let float = NumericMode::float();
        let d = ks_statistic(&samples, |y| {
            closed::cdf(&g, y as i64, &float).unwrap().to_f64()
        });
        let critical = ks_critical_value(samples.len(), 0.001);
        if d >= critical {
            failures.push(format!("({n}, {s}) KS D = {d:.2e} >= {critical:.2e}"));
        }
        notes.push(format!(
            "({n},{s}) z_mean {z_mean:+.2} z_var {z_var:+.2} D {d:.1e}"
        ));
    }
    let mut outcome = summary(failures, 9);
    outcome.detail.push_str(&format!("; {}", notes.join(", ")));
    outcome
}

/// PMF sums to the CDF and the tail beyond 200 turns is negligible.
fn normalization() -> Outcome {
    let mode = NumericMode::float();
    let mut failures = Vec::new();
    let mut checked = 0;
    for s in 1..=12 {
        for n in 1..=s {
            let g = params(n, s);
            let mut total = 0.0;
            for y in 1..=200 {
                total += closed::pmf(&g, y, &mode).unwrap().to_f64();
            }
            let c = closed::cdf(&g, 200, &mode).unwrap().to_f64();
            checked += 2;
            if (total - c).abs() > 1e-12 {
                failures.push(format!(
                    "({n}, {s}) |sum pmf - cdf| = {:e}",
                    (total - c).abs()
                ));
            }
            if c.is_nan() || 1.0 - c >= 1e-8 {
                failures.push(format!("({n}, {s}) 1 - cdf(200) = {:.3e}", 1.0 - c));
            }
        }
    }
    summary(failures, checked)
}

/// The four-dice transcript 3224 / 363 / 4 / 1.
fn transcript_fixture() -> Outcome {
    let mut rolls = ScriptedRolls::from_turns(&[&[3, 2, 2, 4], &[3, 6, 3], &[4], &[1]]);
    let game = play_game_with(&params(4, 6), &mut rolls).unwrap();
    let ok = game.turn_count == 4 && game.signature.to_string() == "4331";
    Outcome::new(
        ok,
        format!("turns {}, signature {}", game.turn_count, game.signature),
    )
}

/// Weighted geometric series closed forms against partial sums.
fn series_identities() -> Outcome {
    let mut failures = Vec::new();
    for x in [0.1, -0.1, 0.5, -0.5, 0.9, 0.99] {
        let (mut first, mut second, mut pow) = (0.0f64, 0.0f64, 1.0f64);
        for i in 1..=10_000u32 {
            pow *= x;
            first += i as f64 * pow;
            second += (i as f64) * (i as f64) * pow;
        }
        let closed_first = weighted_geom_sum_first(x).unwrap();
        let closed_second = weighted_geom_sum_second(x).unwrap();
        for (label, c, p) in [
            ("first", closed_first, first),
            ("second", closed_second, second),
        ] {
            let rel = ((c - p) / p).abs();
            if rel > 1e-10 {
                failures.push(format!("{label} x = {x}: relative {rel:e}"));
            }
        }
    }
    summary(failures, 12)
}

type Criterion = (u32, &'static str, Option<u64>, fn() -> Outcome);

fn main() {
    // (number, description, runtime limit, check)
    let criteria: [Criterion; 10] = [
        (1, "ev-bounds plot values", Some(1), ev_plot_values),
        (2, "var-bounds plot values", Some(1), var_plot_values),
        (
            3,
            "closed / series / recursive equivalence",
            Some(10),
            method_equivalence,
        ),
        (
            4,
            "matrix-power CDF vs closed CDF",
            Some(30),
            matrix_power_cdf,
        ),
        (
            5,
            "signature count law and n = 4 list",
            Some(5),
            signature_enumeration,
        ),
        (
            6,
            "bound containment and n = 2 tightness",
            Some(10),
            bound_suite,
        ),
        (
            7,
            "Monte Carlo moments and KS",
            Some(60),
            monte_carlo_agreement,
        ),
        (8, "pmf/cdf normalization", None, normalization),
        (9, "scripted game transcript", None, transcript_fixture),
        (
            10,
            "weighted geometric series identities",
            None,
            series_identities,
        ),
    ];

    let mut failed = Vec::new();
    for (number, description, limit, check) in criteria {
        let start = Instant::now();
        let mut outcome = check();
        let elapsed = start.elapsed();
        if let Some(limit) = limit {
            if elapsed > Duration::from_secs(limit) {
                outcome.passed = false;
                outcome.detail.push_str(&format!("; exceeded {limit} s"));
            }
        }
        let status = if outcome.passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {number:>2} {status} [{:>7.3}s] {description}: {}",
            elapsed.as_secs_f64(),
            outcome.detail
        );
        if !outcome.passed {
            failed.push(number);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
