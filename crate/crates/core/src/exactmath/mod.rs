//! Exact arithmetic substrate: rationals, linear systems, polynomials.

pub mod linsys;
pub mod poly;
pub mod rational;

use std::ops::{Add, Mul, Sub};

use thiserror::Error;

pub use linsys::{solve_linear, LinSystem, Relation, SolveKind, SolveOutcome};
pub use poly::Poly;
pub use rational::{fmt_rational, int, parse_rational, rat, rat_normalize, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MathError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse `{0}` as a rational")]
    Parse(String),
    #[error("row has {found} columns, system has {expected}")]
    RowWidth { expected: usize, found: usize },
    #[error("relation `{0}` is not allowed here")]
    UnsupportedRelation(&'static str),
    #[error("no value assigned to variable `{0}`")]
    MissingVariable(String),
}

/// Cofactor expansion along the first row. Generic so the same routine
/// serves rationals and polynomials.
pub fn det3<T>(m: &[[T; 3]; 3]) -> T
where
    for<'a> &'a T: Add<&'a T, Output = T> + Sub<&'a T, Output = T> + Mul<&'a T, Output = T>,
{
    let minor = |r1: &[T; 3], r2: &[T; 3], i: usize, j: usize| &(&r1[i] * &r2[j]) - &(&r1[j] * &r2[i]);
    let m0 = minor(&m[1], &m[2], 1, 2);
    let m1 = minor(&m[1], &m[2], 0, 2);
    let m2 = minor(&m[1], &m[2], 0, 1);
    let t0 = &m[0][0] * &m0;
    let t1 = &m[0][1] * &m1;
    let t2 = &m[0][2] * &m2;
    &(&t0 - &t1) + &t2
}
