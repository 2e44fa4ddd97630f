//! Closed-form counting bounds on bichromatic lines.

use num_bigint::BigInt;
use num_integer::Roots;
use serde::Serialize;
use thiserror::Error;

use crate::exactmath::{rational::serde_rational, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("invalid case: {red} red, {blue} blue (need red >= 2, blue in {{red, red - 1}})")]
    InvalidCase { red: usize, blue: usize },
    #[error("line profile ({r} red, {b} blue) does not fit case ({red} red, {blue} blue)")]
    InvalidProfile { r: usize, b: usize, red: usize, blue: usize },
    #[error("ratio is undefined at (1, 1)")]
    RatioAtOneOne,
    #[error("argument out of range: {0}")]
    OutOfRange(String),
}

/// `n` red points and `blue ∈ {n, n - 1}` blue points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CaseSpec {
    pub n: usize,
    pub blue: usize,
}

impl CaseSpec {
    pub fn new(n: usize, blue: usize) -> Result<Self, BoundsError> {
        if n < 2 || !(blue == n || blue + 1 == n) {
            return Err(BoundsError::InvalidCase { red: n, blue });
        }
        Ok(CaseSpec { n, blue })
    }

    pub fn total(&self) -> usize {
        self.n + self.blue
    }

    pub fn balanced(&self) -> bool {
        self.blue == self.n
    }
}

/// A line carrying `r` red and `b` blue points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LineProfile {
    pub r: usize,
    pub b: usize,
}

impl LineProfile {
    pub fn new(spec: &CaseSpec, r: usize, b: usize) -> Result<Self, BoundsError> {
        if r + b < 2 || r > spec.n || b > spec.blue {
            return Err(BoundsError::InvalidProfile { r, b, red: spec.n, blue: spec.blue });
        }
        Ok(LineProfile { r, b })
    }

    pub fn bichromatic(&self) -> bool {
        self.r >= 1 && self.b >= 1
    }
}

/// Lower bound from joining the points on a line to points of the other
/// colour off it: with `r' = min(n - r, b)` and `b' = min(blue - b, r)`,
/// `b r' - r'(r' - 1)/2 + r b' - b'(b' - 1)/2`, plus one if the line itself is
/// bichromatic.
pub fn imp21_bound(spec: &CaseSpec, profile: &LineProfile) -> usize {
    let LineProfile { r, b } = *profile;
    let r_off = (spec.n - r).min(b);
    let b_off = (spec.blue - b).min(r);
    let tri = |k: usize| k * k.saturating_sub(1) / 2;
    let base = b * r_off - tri(r_off) + r * b_off - tri(b_off);
    base + usize::from(profile.bichromatic())
}

/// `min_{i ∈ 1..=range} { i + (on_line - 1) · max(⌈range / i⌉, i) }`, or 0
/// when the range is empty or no point of that colour sits on the line.
fn tricky_term(on_line: usize, range: usize) -> usize {
    if on_line == 0 || range == 0 {
        return 0;
    }
    (1..=range).map(|i| i + (on_line - 1) * range.div_ceil(i).max(i)).min().expect("range is nonempty")
}

/// Sharper line bound: the point of each colour on the line that lies on the
/// fewest bichromatic lines constrains all the others. Uses `b' = blue - b`
/// and `r' = n - r`, plus one if the line is bichromatic.
pub fn tricky_bound(spec: &CaseSpec, profile: &LineProfile) -> usize {
    let LineProfile { r, b } = *profile;
    let blue_off = spec.blue - b;
    let red_off = spec.n - r;
    tricky_term(r, blue_off) + tricky_term(b, red_off) + usize::from(profile.bichromatic())
}

/// `(((i - j)² + i + j)/2 - 1) / (i j)`.
pub fn ratio(i: usize, j: usize) -> Result<Rational, BoundsError> {
    if i == 0 || j == 0 {
        return Err(BoundsError::OutOfRange(format!("ratio needs i, j >= 1, got ({i}, {j})")));
    }
    if (i, j) == (1, 1) {
        return Err(BoundsError::RatioAtOneOne);
    }
    let (i, j) = (BigInt::from(i), BigInt::from(j));
    let diff = &i - &j;
    let numer: BigInt = (&diff * &diff + &i + &j) / 2 - 1;
    Ok(Rational::new(numer, i * j))
}

/// `⌊√(2n)⌋`, computed with an exact integer square root.
pub fn k_of_n(n: usize) -> usize {
    (2 * n).sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Eqn5Outcome {
    pub n: usize,
    pub k: usize,
    #[serde(with = "serde_rational")]
    pub lhs: Rational,
    #[serde(with = "serde_rational")]
    pub rhs: Rational,
    /// `false` rules out a minimal counterexample with `n` red points.
    pub holds: bool,
}

/// `4n - 4 >= n + 2 + (k - 1) n (n - 1) / k²` with `k = ⌊√(2n)⌋`.
pub fn minimal_cx_inequality(n: usize) -> Result<Eqn5Outcome, BoundsError> {
    if n < 2 {
        return Err(BoundsError::OutOfRange(format!("n must be >= 2, got {n}")));
    }
    let k = k_of_n(n);
    let big_n = BigInt::from(n);
    let big_k = BigInt::from(k);
    let lhs = Rational::from_integer(4 * &big_n - 4);
    let rhs = Rational::from_integer(&big_n + 2) + Rational::new((&big_k - 1) * &big_n * (&big_n - 1), &big_k * &big_k);
    Ok(Eqn5Outcome { n, k, holds: lhs >= rhs, lhs, rhs })
}
