//! Playing the dice game itself.
//!
//! With `k` dice left, all `k` are rolled and every die showing `k` is
//! removed; the game ends when no dice remain. The removal values, in
//! removal order, form the game's signature.
//!
//! Rolls come from a [`RollSource`], either a seeded generator or a fixed
//! script. Monte Carlo runs derive one independent generator per trial from
//! `(seed, trial_index)`, so results do not depend on how trials are spread
//! over threads.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::params::GameParams;

/// Hard cap on the number of turns in one game.
pub const MAX_TURNS: u64 = 1_000_000_000;

/// Largest `n` accepted by [`enumerate_signatures`].
pub const MAX_ENUMERATED_DICE: u32 = 24;

/// Supplies face values in `1..=faces`.
pub trait RollSource {
    /// Next face, or `None` when the source has run dry.
    fn roll(&mut self, faces: u32) -> Option<u32>;
}

/// Uniform rolls from any `rand` generator.
#[derive(Debug, Clone)]
pub struct RngRolls<R>(pub R);

impl RngRolls<ChaCha8Rng> {
    pub fn seeded(seed: u64) -> Self {
        RngRolls(ChaCha8Rng::seed_from_u64(seed))
    }
}

impl<R: Rng> RollSource for RngRolls<R> {
    fn roll(&mut self, faces: u32) -> Option<u32> {
        Some(self.0.random_range(1..=faces))
    }
}

/// A fixed transcript of rolls, consumed in order.
#[derive(Debug, Clone, Default)]
pub struct ScriptedRolls {
    rolls: Vec<u32>,
    position: usize,
}

impl ScriptedRolls {
    pub fn new(rolls: impl Into<Vec<u32>>) -> Self {
        Self {
            rolls: rolls.into(),
            position: 0,
        }
    }

    /// One slice per turn; the turns are simply concatenated.
    pub fn from_turns(turns: &[&[u32]]) -> Self {
        Self::new(turns.concat())
    }

    pub fn consumed(&self) -> usize {
        self.position
    }
}

impl RollSource for ScriptedRolls {
    fn roll(&mut self, _faces: u32) -> Option<u32> {
        let value = *self.rolls.get(self.position)?;
        self.position += 1;
        Some(value)
    }
}

fn draw(source: &mut impl RollSource, faces: u32, rolls_so_far: usize) -> Result<u32> {
    let value = source.roll(faces).ok_or(Error::RollSourceExhausted {
        rolls: rolls_so_far,
    })?;
    if value == 0 || value > faces {
        return Err(Error::RollOutOfRange { value, faces });
    }
    Ok(value)
}

/// Removal values of all dice, in removal order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature(Vec<u32>);

impl Signature {
    /// Checks the block structure before wrapping.
    pub fn new(values: Vec<u32>) -> Result<Self> {
        if !is_valid_signature(&values) {
            return Err(Error::invalid_argument(
                "signature",
                format!("{values:?} is not reachable"),
            ));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Digits run together (`4331`) while every value is a single digit,
/// otherwise comma separated (`12,12,10,...`).
impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let separator = if self.0.iter().all(|&v| v < 10) {
            ""
        } else {
            ","
        };
        let mut first = true;
        for v in &self.0 {
            if !first {
                f.write_str(separator)?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

/// A signature of `n` dice is a sequence of blocks; a block starting after
/// `start` removals holds the value `n - start`.
pub fn is_valid_signature(values: &[u32]) -> bool {
    let n = values.len();
    if n == 0 {
        return false;
    }
    let mut block_value = n as u32;
    for (j, &v) in values.iter().enumerate() {
        if j == 0 || v != block_value {
            if v != (n - j) as u32 {
                return false;
            }
            block_value = v;
        }
    }
    true
}

/// One complete game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameRecord {
    pub params: GameParams,
    /// Face values of every roll, one list per turn.
    pub turns: Vec<Vec<u32>>,
    pub removed_per_turn: Vec<u32>,
    pub signature: Signature,
    pub turn_count: u64,
}

fn require_game(params: &GameParams) -> Result<()> {
    // dice showing k > s could never be removed
    params.require_standard()
}

/// Plays one game with rolls from a seeded generator.
pub fn play_game(params: &GameParams, seed: u64) -> Result<GameRecord> {
    play_game_with(params, &mut RngRolls::seeded(seed))
}

pub fn play_game_with(params: &GameParams, source: &mut impl RollSource) -> Result<GameRecord> {
    play_game_with_limit(params, source, MAX_TURNS)
}

pub fn play_game_with_limit(
    params: &GameParams,
    source: &mut impl RollSource,
    max_turns: u64,
) -> Result<GameRecord> {
    require_game(params)?;
    let s = params.s();
    let mut remaining = params.n();
    let mut turns = Vec::new();
    let mut removed_per_turn = Vec::new();
    let mut signature = Vec::with_capacity(params.n() as usize);
    let mut rolls = 0usize;
    while remaining > 0 {
        if turns.len() as u64 >= max_turns {
            return Err(Error::NonTermination { max_turns });
        }
        let mut faces = Vec::with_capacity(remaining as usize);
        for _ in 0..remaining {
            faces.push(draw(source, s, rolls)?);
            rolls += 1;
        }
        // all removed dice show the same value, so die-index order within
        // the turn is also removal order
        let removed = faces.iter().filter(|&&f| f == remaining).count() as u32;
        signature.extend(std::iter::repeat_n(remaining, removed as usize));
        turns.push(faces);
        removed_per_turn.push(removed);
        remaining -= removed;
    }
    let turn_count = turns.len() as u64;
    Ok(GameRecord {
        params: *params,
        turns,
        removed_per_turn,
        signature: Signature(signature),
        turn_count,
    })
}

/// Same game as [`play_game_with`] without recording the rolls.
fn count_turns(params: &GameParams, source: &mut impl RollSource) -> Result<(u64, Signature)> {
    let s = params.s();
    let mut remaining = params.n();
    let mut signature = Vec::with_capacity(params.n() as usize);
    let mut turns = 0u64;
    let mut rolls = 0usize;
    while remaining > 0 {
        if turns >= MAX_TURNS {
            return Err(Error::NonTermination {
                max_turns: MAX_TURNS,
            });
        }
        let mut removed = 0u32;
        for _ in 0..remaining {
            if draw(source, s, rolls)? == remaining {
                removed += 1;
            }
            rolls += 1;
        }
        signature.extend(std::iter::repeat_n(remaining, removed as usize));
        remaining -= removed;
        turns += 1;
    }
    Ok((turns, Signature(signature)))
}

/// Seed of the generator used for trial `index`.
pub fn trial_seed(seed: u64, index: u64) -> u64 {
    // SplitMix64 finaliser over a Weyl sequence
    let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn check_trials(trials: u64) -> Result<()> {
    if trials < 2 {
        return Err(Error::invalid_argument(
            "trials",
            format!("need at least 2, got {trials}"),
        ));
    }
    Ok(())
}

fn run_trials(params: &GameParams, trials: u64, seed: u64) -> Result<Vec<(u64, Signature)>> {
    require_game(params)?;
    check_trials(trials)?;
    (0..trials)
        .into_par_iter()
        .map(|i| count_turns(params, &mut RngRolls::seeded(trial_seed(seed, i))))
        .collect()
}

/// Turn counts of `trials` independent games, in trial order.
pub fn turn_count_samples(params: &GameParams, trials: u64, seed: u64) -> Result<Vec<u64>> {
    Ok(run_trials(params, trials, seed)?
        .into_iter()
        .map(|(t, _)| t)
        .collect())
}

/// Sample moments of the number of turns.
#[derive(Debug, Clone, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    pub std_error_mean: f64,
    /// Asymptotic standard error of the sample variance,
    /// `sqrt((m4 - var^2 (N - 3)/(N - 1)) / N)`.
    pub std_error_variance: f64,
    pub trials: u64,
    pub seed: u64,
}

impl McEstimate {
    /// Two-pass moments over samples taken in a fixed order.
    pub fn from_samples(samples: &[u64], seed: u64) -> Result<Self> {
        check_trials(samples.len() as u64)?;
        let count = samples.len() as f64;
        let mean = samples.iter().map(|&x| x as f64).sum::<f64>() / count;
        let (mut m2, mut m4) = (0.0, 0.0);
        for &x in samples {
            let d = x as f64 - mean;
            let d2 = d * d;
            m2 += d2;
            m4 += d2 * d2;
        }
        let variance = m2 / (count - 1.0);
        let central4 = m4 / count;
        let var_of_var = (central4 - variance * variance * (count - 3.0) / (count - 1.0)) / count;
        Ok(Self {
            mean,
            variance,
            std_error_mean: (variance / count).sqrt(),
            std_error_variance: var_of_var.max(0.0).sqrt(),
            trials: samples.len() as u64,
            seed,
        })
    }
}

pub fn monte_carlo_moments(params: &GameParams, trials: u64, seed: u64) -> Result<McEstimate> {
    let samples = turn_count_samples(params, trials, seed)?;
    McEstimate::from_samples(&samples, seed)
}

/// How often each signature occurred.
pub fn signature_frequencies(
    params: &GameParams,
    trials: u64,
    seed: u64,
) -> Result<BTreeMap<Signature, u64>> {
    let mut counts = BTreeMap::new();
    for (_, signature) in run_trials(params, trials, seed)? {
        *counts.entry(signature).or_insert(0) += 1;
    }
    Ok(counts)
}

/// Number of possible signatures for `n` dice, `2^(n-1)`.
pub fn signature_count(n: u32) -> Result<u128> {
    if n == 0 || n > 128 {
        return Err(Error::invalid_argument(
            "n",
            format!("must lie in 1..=128, got {n}"),
        ));
    }
    Ok(1u128 << (n - 1))
}

/// Lazy enumeration of all signatures of `n` dice, lexicographically
/// descending.
///
/// Bit `j` of the mask, counted from the most significant of `n - 1`
/// bits, starts a new block at position `j + 1`. Counting the mask upward
/// walks the signatures downward.
#[derive(Debug, Clone)]
pub struct Signatures {
    n: u32,
    next_mask: u64,
    end: u64,
}

impl Iterator for Signatures {
    type Item = Signature;

    fn next(&mut self) -> Option<Signature> {
        if self.next_mask >= self.end {
            return None;
        }
        let mask = self.next_mask;
        self.next_mask += 1;
        let n = self.n as usize;
        let mut values = Vec::with_capacity(n);
        let mut start = 0usize;
        for j in 0..n {
            if j > 0 && (mask >> (n - 1 - j)) & 1 == 1 {
                start = j;
            }
            values.push((n - start) as u32);
        }
        Some(Signature(values))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next_mask) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for Signatures {}

pub fn signatures(n: u32) -> Result<Signatures> {
    if n == 0 || n > 63 {
        return Err(Error::invalid_argument(
            "n",
            format!("must lie in 1..=63, got {n}"),
        ));
    }
    Ok(Signatures {
        n,
        next_mask: 0,
        end: 1u64 << (n - 1),
    })
}

/// All `2^(n-1)` signatures, lexicographically descending.
pub fn enumerate_signatures(n: u32) -> Result<Vec<Signature>> {
    if n > MAX_ENUMERATED_DICE {
        return Err(Error::invalid_argument(
            "n",
            format!("enumeration is limited to n <= {MAX_ENUMERATED_DICE}, got {n}"),
        ));
    }
    Ok(signatures(n)?.collect())
}

/// Kolmogorov-Smirnov distance between the empirical distribution of
/// integer samples and a model CDF. Both are step functions jumping at the
/// integers, so the supremum is attained at the observed support points
/// and between them.
pub fn ks_statistic(samples: &[u64], cdf: impl Fn(u64) -> f64) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for &x in samples {
        *counts.entry(x).or_insert(0) += 1;
    }
    let total = samples.len() as f64;
    let max_value = *counts.keys().next_back().expect("non-empty");
    let mut cumulative = 0u64;
    let mut distance = 0.0f64;
    for y in 0..=max_value {
        cumulative += counts.get(&y).copied().unwrap_or(0);
        distance = distance.max((cumulative as f64 / total - cdf(y)).abs());
    }
    // beyond the largest sample the empirical CDF is 1
    distance.max((1.0 - cdf(max_value)).abs())
}

/// Asymptotic KS critical value `sqrt(-ln(alpha / 2) / 2) / sqrt(N)`.
/// Conservative for discrete distributions.
pub fn ks_critical_value(samples: usize, alpha: f64) -> f64 {
    (-(alpha / 2.0).ln() / 2.0).sqrt() / (samples as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32, s: u32) -> GameParams {
        GameParams::new(n, s).unwrap()
    }

    #[test]
    fn single_die_single_face() {
        for seed in [0, 1, 99] {
            let g = play_game(&p(1, 1), seed).unwrap();
            assert_eq!(g.turn_count, 1);
            assert_eq!(g.signature.values(), &[1]);
        }
    }

    #[test]
    fn replay_is_deterministic() {
        assert_eq!(
            play_game(&p(4, 6), 42).unwrap(),
            play_game(&p(4, 6), 42).unwrap()
        );
    }

    #[test]
    fn scripted_transcript() {
        let mut rolls = ScriptedRolls::from_turns(&[&[3, 2, 2, 4], &[3, 6, 3], &[4], &[1]]);
        let g = play_game_with(&p(4, 6), &mut rolls).unwrap();
        assert_eq!(g.turn_count, 4);
        assert_eq!(g.removed_per_turn, vec![1, 2, 0, 1]);
        assert_eq!(g.signature.to_string(), "4331");
        assert_eq!(rolls.consumed(), 9);
    }

    #[test]
    fn record_invariants() {
        for seed in 0..200 {
            let g = play_game(&p(5, 7), seed).unwrap();
            let mut k = 5u32;
            for (turn, removed) in g.turns.iter().zip(&g.removed_per_turn) {
                assert_eq!(turn.len() as u32, k);
                assert!(turn.iter().all(|&f| (1..=7).contains(&f)));
                assert_eq!(turn.iter().filter(|&&f| f == k).count() as u32, *removed);
                k -= removed;
            }
            assert_eq!(k, 0);
            assert_eq!(g.turn_count as usize, g.turns.len());
            assert!(is_valid_signature(g.signature.values()));
        }
    }

    #[test]
    fn script_errors() {
        let mut short = ScriptedRolls::new(vec![1, 2]);
        assert!(matches!(
            play_game_with(&p(2, 6), &mut short),
            Err(Error::RollSourceExhausted { .. })
        ));
        let mut bad = ScriptedRolls::new(vec![7]);
        assert!(matches!(
            play_game_with(&p(1, 6), &mut bad),
            Err(Error::RollOutOfRange { .. })
        ));
        let mut never = ScriptedRolls::new(vec![2; 10]);
        assert!(matches!(
            play_game_with_limit(&p(1, 6), &mut never, 5),
            Err(Error::NonTermination { max_turns: 5 })
        ));
        assert!(play_game(&GameParams::relaxed(3, 2).unwrap(), 0).is_err());
    }

    fn recursive_oracle(n: u32) -> Vec<Vec<u32>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for i in 1..=n {
            for rest in recursive_oracle(n - i) {
                let mut v = vec![n; i as usize];
                v.extend(rest);
                out.push(v);
            }
        }
        out.sort_by(|a, b| b.cmp(a));
        out
    }

    #[test]
    fn enumeration_matches_recursive_construction() {
        for n in 1..=10 {
            let fast: Vec<Vec<u32>> = enumerate_signatures(n)
                .unwrap()
                .into_iter()
                .map(|s| s.0)
                .collect();
            assert_eq!(fast, recursive_oracle(n), "n = {n}");
        }
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_signatures(1).unwrap(), vec![Signature(vec![1])]);
        let four: Vec<String> = enumerate_signatures(4)
            .unwrap()
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(
            four,
            ["4444", "4441", "4422", "4421", "4333", "4331", "4322", "4321"]
        );
        assert_eq!(enumerate_signatures(10).unwrap().len(), 512);
        assert!(enumerate_signatures(25).is_err());
        assert_eq!(signature_count(20).unwrap(), 524_288);
    }

    #[test]
    fn validator() {
        assert!(is_valid_signature(&[4, 3, 3, 1]));
        assert!(!is_valid_signature(&[3, 1, 3, 3]));
        assert!(!is_valid_signature(&[4, 4, 3, 1]));
        assert!(!is_valid_signature(&[]));
        assert!(Signature::new(vec![4, 2, 2, 1]).is_err());
    }

    #[test]
    fn signature_display() {
        let s = Signature::new(vec![10, 9, 8, 7, 6, 5, 4, 3, 2, 1]).unwrap();
        assert_eq!(s.to_string(), "10,9,8,7,6,5,4,3,2,1");
    }

    #[test]
    fn monte_carlo_trivial_cases() {
        let est = monte_carlo_moments(&p(1, 1), 100, 7).unwrap();
        assert_eq!((est.mean, est.variance), (1.0, 0.0));
        assert!(monte_carlo_moments(&p(1, 1), 1, 7).is_err());
        let freq = signature_frequencies(&p(1, 5), 1000, 3).unwrap();
        assert_eq!(freq.len(), 1);
        assert_eq!(freq[&Signature(vec![1])], 1000);
    }

    #[test]
    fn monte_carlo_is_schedule_independent() {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let single = pool.install(|| monte_carlo_moments(&p(3, 5), 5000, 11).unwrap());
        let multi = monte_carlo_moments(&p(3, 5), 5000, 11).unwrap();
        assert_eq!(single, multi);
    }

    #[test]
    fn ks_distance_of_exact_sample_is_small() {
        // a sample placed exactly on the quantiles of Geom(1/2)
        let samples: Vec<u64> = (0..1024u64)
            .map(|i| {
                let mut y = 1;
                while 1.0 - 0.5f64.powi(y as i32) < (i as f64 + 0.5) / 1024.0 {
                    y += 1;
                }
                y
            })
            .collect();
        let d = ks_statistic(&samples, |y| {
            if y == 0 {
                0.0
            } else {
                1.0 - 0.5f64.powi(y as i32)
            }
        });
        assert!(d < 0.01, "{d}");
        assert!((ks_critical_value(1_000_000, 0.001) - 1.94947e-3).abs() < 1e-7);
    }
}
