//! The game as an absorbing Markov chain on the number of dice left.
//!
//! From state `i` each die independently succeeds with probability `p`, so
//! `P[i][j] = C(i, j) p^(i-j) q^j` for `j <= i`. State 0 absorbs. First-step
//! analysis gives, bottom-up in `k`,
//!
//! ```text
//! E(T_k)   (1 - P[k][k]) = 1 + sum_{j<k} P[k][j] E(T_j)
//! E(T_k^2) (1 - P[k][k]) = 2 E(T_k) - 1 + sum_{j<k} P[k][j] E(T_j^2)
//! ```
//!
//! Everything is generic over [`Field`], so the same code runs in `f64` and
//! in exact rationals. The leaving probability `1 - P[k][k]` is formed as
//! the sum of the off-diagonal row entries, which avoids cancellation when
//! `q` is close to one.

use crate::error::{Error, Result};
use crate::numeric::{Field, Rational};
use crate::params::{Evaluation, GameParams, Method, NumericMode};

/// Row-stochastic, lower-triangular `(n + 1) x (n + 1)` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix<T> {
    n: usize,
    entries: Vec<Vec<T>>,
}

impl<T: Field> TransitionMatrix<T> {
    pub fn new(params: &GameParams) -> Result<Self> {
        let n = params.n() as usize;
        let p = params.p_as::<T>();
        let q = params.q_as::<T>();
        let p_pow = powers(&p, n);
        let q_pow = powers(&q, n);
        let mut entries = vec![vec![T::zero(); n + 1]; n + 1];
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate().take(i + 1) {
                *entry = T::binomial(i as u64, j as u64)? * p_pow[i - j].clone() * q_pow[j].clone();
            }
        }
        Ok(Self { n, entries })
    }

    fn identity(n: usize) -> Self {
        let mut entries = vec![vec![T::zero(); n + 1]; n + 1];
        for (i, row) in entries.iter_mut().enumerate() {
            row[i] = T::one();
        }
        Self { n, entries }
    }

    /// Number of dice at the start state; the matrix has `n + 1` rows.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, from: usize, to: usize) -> &T {
        &self.entries[from][to]
    }

    pub fn row(&self, from: usize) -> &[T] {
        &self.entries[from]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.entries.iter().map(Vec::as_slice)
    }

    /// Probability of leaving state `k`, as the sum of `P[k][j]` for `j < k`.
    pub fn leaving_probability(&self, k: usize) -> T {
        self.entries[k][..k]
            .iter()
            .fold(T::zero(), |acc, x| acc + x.clone())
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let size = self.n + 1;
        let mut entries = vec![vec![T::zero(); size]; size];
        // both factors are lower triangular, so is the product
        #[allow(clippy::needless_range_loop)]
        for i in 0..size {
            for j in 0..=i {
                let mut acc = T::zero();
                for k in j..=i {
                    acc = acc + self.entries[i][k].clone() * other.entries[k][j].clone();
                }
                entries[i][j] = acc;
            }
        }
        Self { n: self.n, entries }
    }

    /// `P^t` by repeated squaring.
    pub fn power(&self, mut t: u64) -> Self {
        let mut result = Self::identity(self.n);
        let mut base = self.clone();
        while t > 0 {
            if t & 1 == 1 {
                result = result.multiply(&base);
            }
            t >>= 1;
            if t > 0 {
                base = base.multiply(&base);
            }
        }
        result
    }

    /// `P^0, P^1, P^2, ...` by iterated multiplication.
    pub fn powers(&self) -> MatrixPowers<'_, T> {
        MatrixPowers {
            matrix: self,
            current: Some(Self::identity(self.n)),
        }
    }
}

fn powers<T: Field>(base: &T, up_to: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(up_to + 1);
    out.push(T::one());
    for i in 1..=up_to {
        let next = out[i - 1].clone() * base.clone();
        out.push(next);
    }
    out
}

/// Iterator over successive powers of a transition matrix.
#[derive(Debug)]
pub struct MatrixPowers<'a, T> {
    matrix: &'a TransitionMatrix<T>,
    current: Option<TransitionMatrix<T>>,
}

impl<T: Field> Iterator for MatrixPowers<'_, T> {
    type Item = TransitionMatrix<T>;

    fn next(&mut self) -> Option<Self::Item> {
        let current = self.current.take()?;
        self.current = Some(current.multiply(self.matrix));
        Some(current)
    }
}

pub fn build_transition_matrix<T: Field>(params: &GameParams) -> Result<TransitionMatrix<T>> {
    TransitionMatrix::new(params)
}

/// First and second moments of the absorption time from every state
/// `k = 0..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct AbsorptionProfile<T> {
    pub params: GameParams,
    pub first_moments: Vec<T>,
    pub second_moments: Vec<T>,
}

impl<T: Field> AbsorptionProfile<T> {
    pub fn mean(&self) -> &T {
        &self.first_moments[self.params.n() as usize]
    }

    pub fn second_moment(&self) -> &T {
        &self.second_moments[self.params.n() as usize]
    }

    pub fn variance(&self) -> T {
        self.variance_from(self.params.n() as usize)
    }

    pub fn variance_from(&self, k: usize) -> T {
        let m = self.first_moments[k].clone();
        self.second_moments[k].clone() - m.clone() * m
    }
}

fn leaving<T: Field>(matrix: &TransitionMatrix<T>, k: usize) -> Result<T> {
    let leave = matrix.leaving_probability(k);
    if leave > T::zero() {
        Ok(leave)
    } else {
        Err(Error::DegenerateTransition { state: k })
    }
}

/// `E(T_k)` for `k = 0..=n`.
pub fn expected_values_recursive<T: Field>(params: &GameParams) -> Result<Vec<T>> {
    let matrix = TransitionMatrix::<T>::new(params)?;
    first_moments(&matrix)
}

fn first_moments<T: Field>(matrix: &TransitionMatrix<T>) -> Result<Vec<T>> {
    let mut first = vec![T::zero()];
    for k in 1..=matrix.n() {
        let row = matrix.row(k);
        let carried = row[..k]
            .iter()
            .zip(&first)
            .fold(T::one(), |acc, (p, e)| acc + p.clone() * e.clone());
        first.push(carried / leaving(matrix, k)?);
    }
    Ok(first)
}

/// Both moment arrays.
pub fn second_moments_recursive<T: Field>(params: &GameParams) -> Result<AbsorptionProfile<T>> {
    let matrix = TransitionMatrix::<T>::new(params)?;
    let first = first_moments(&matrix)?;
    let two = T::one() + T::one();
    let mut second = vec![T::zero()];
    for k in 1..=matrix.n() {
        let row = matrix.row(k);
        let carried = row[..k]
            .iter()
            .zip(&second)
            .fold(T::zero(), |acc, (p, e)| acc + p.clone() * e.clone());
        let numerator = carried - T::one() + two.clone() * first[k].clone();
        second.push(numerator / leaving(&matrix, k)?);
    }
    Ok(AbsorptionProfile {
        params: *params,
        first_moments: first,
        second_moments: second,
    })
}

/// `P(T_n <= t)`: entry `[n][0]` of `P^t`.
pub fn absorption_cdf_by_power<T: Field>(params: &GameParams, t: u64) -> Result<T> {
    let matrix = TransitionMatrix::<T>::new(params)?;
    let n = matrix.n();
    Ok(matrix.power(t).get(n, 0).clone())
}

/// `P(T_n <= t)` for `t = 0..=t_max`, one multiplication per step.
pub fn absorption_cdf_sequence<T: Field>(params: &GameParams, t_max: u64) -> Result<Vec<T>> {
    let matrix = TransitionMatrix::<T>::new(params)?;
    let n = matrix.n();
    Ok(matrix
        .powers()
        .take(t_max as usize + 1)
        .map(|m| m.get(n, 0).clone())
        .collect())
}

/// Mode-dispatched recursive evaluation of `E(T_n)`, `E(T_n^2)`, `Var(T_n)`.
pub(crate) fn recursive_evaluations(
    params: &GameParams,
    mode: &NumericMode,
) -> Result<[Evaluation; 3]> {
    if mode.is_exact() {
        let profile = second_moments_recursive::<Rational>(params)?;
        return Ok([
            Evaluation::exact(profile.mean().clone(), Method::Recursive),
            Evaluation::exact(profile.second_moment().clone(), Method::Recursive),
            Evaluation::exact(profile.variance(), Method::Recursive),
        ]);
    }
    let profile = second_moments_recursive::<f64>(params)?;
    // all recursion terms are positive; the relative error grows roughly
    // linearly with the number of states
    let scale = 4.0 * (params.n() as f64 + 2.0) * f64::EPSILON;
    let mean = *profile.mean();
    let second = *profile.second_moment();
    let variance = profile.variance();
    Ok([
        Evaluation::float(mean, scale * mean, Method::Recursive),
        Evaluation::float(second, scale * second, Method::Recursive),
        Evaluation::float(
            variance,
            scale * (second + mean * mean) + 2.0 * f64::EPSILON * second,
            Method::Recursive,
        ),
    ])
}
