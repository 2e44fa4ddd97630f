//! Coloured point sets in the rational projective plane.
//!
//! Points and lines both use integer homogeneous coordinates, reduced so the
//! gcd of the entries is 1 and the first nonzero entry is positive. Points at
//! infinity (`z = 0`) are ordinary values; every predicate is a determinant.

mod checks;
mod search;
mod stats;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactmath::{fmt_rational, Rational};

pub use checks::{check_dbe, check_hirzebruch, check_main_theorem, check_melchior, check_motzkin, CheckKind, Verdict};
pub use search::{build_tightness, grid_configurations, search_counterexamples, SearchMode, SearchReport};
pub use stats::{classify, compute_stats, determined_lines, Classification, DeterminedLine, IncidenceStats};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("homogeneous coordinates are all zero")]
    ZeroVector,
    #[error("a line needs two distinct points")]
    SamePoint,
    #[error("two lines needed, got the same line twice")]
    SameLine,
    #[error("point {second} duplicates point {first}")]
    DuplicatePoint { first: usize, second: usize },
    #[error("need at least {needed} points, got {found}")]
    TooFewPoints { needed: usize, found: usize },
    #[error("configuration is collinear")]
    Collinear,
    #[error("line {line} holds {count} of {total} points; at most |P| - 3 allowed")]
    TooManyCollinear { line: LineKey, count: usize, total: usize },
    #[error("{red} red / {blue} blue is not a valid colour split (need blue = red or red - 1, red >= 1)")]
    ColourSplit { red: usize, blue: usize },
    #[error("configuration is {0:?}, not general")]
    NotGeneral(Classification),
    #[error("{theorem} violated with slack {slack}")]
    TheoremViolated { theorem: &'static str, slack: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("matrix maps a point to the zero vector")]
    SingularMap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Colour {
    Red,
    Blue,
}

impl Colour {
    pub fn letter(self) -> char {
        match self {
            Colour::Red => 'R',
            Colour::Blue => 'B',
        }
    }
}

fn canonical_triple(mut v: [BigInt; 3]) -> Option<[BigInt; 3]> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return None;
    }
    let first_negative = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    for x in v.iter_mut() {
        *x = &*x / &g;
        if first_negative {
            *x = -&*x;
        }
    }
    Some(v)
}

fn cross(p: &[BigInt; 3], q: &[BigInt; 3]) -> [BigInt; 3] {
    [&p[1] * &q[2] - &p[2] * &q[1], &p[2] * &q[0] - &p[0] * &q[2], &p[0] * &q[1] - &p[1] * &q[0]]
}

fn dot(p: &[BigInt; 3], q: &[BigInt; 3]) -> BigInt {
    &p[0] * &q[0] + &p[1] * &q[1] + &p[2] * &q[2]
}

/// Scales a rational triple to a primitive integer triple.
fn clear_denominators(v: &[Rational; 3]) -> [BigInt; 3] {
    let lcm = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    std::array::from_fn(|i| (&v[i] * Rational::from_integer(lcm.clone())).to_integer())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: [BigInt; 3],
}

impl ProjPoint {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>, z: impl Into<BigInt>) -> Result<Self, GeometryError> {
        Self::from_coords([x.into(), y.into(), z.into()])
    }

    pub fn from_coords(coords: [BigInt; 3]) -> Result<Self, GeometryError> {
        canonical_triple(coords).map(|coords| ProjPoint { coords }).ok_or(GeometryError::ZeroVector)
    }

    /// Lifts an affine point to homogeneous form by clearing denominators.
    pub fn from_affine(x: &Rational, y: &Rational) -> Self {
        Self::from_rationals(&[x.clone(), y.clone(), Rational::one()]).expect("z = 1 is nonzero")
    }

    pub fn affine_int(x: i64, y: i64) -> Self {
        Self::new(x, y, 1).expect("z = 1 is nonzero")
    }

    pub fn from_rationals(v: &[Rational; 3]) -> Result<Self, GeometryError> {
        Self::from_coords(clear_denominators(v))
    }

    pub fn coords(&self) -> &[BigInt; 3] {
        &self.coords
    }

    pub fn is_at_infinity(&self) -> bool {
        self.coords[2].is_zero()
    }

    pub fn affine(&self) -> Option<(Rational, Rational)> {
        if self.is_at_infinity() {
            return None;
        }
        let z = &self.coords[2];
        Some((Rational::new(self.coords[0].clone(), z.clone()), Rational::new(self.coords[1].clone(), z.clone())))
    }

    /// Image under the linear map `v ↦ M v`.
    pub fn apply(&self, m: &[[Rational; 3]; 3]) -> Result<ProjPoint, GeometryError> {
        let v: [Rational; 3] = std::array::from_fn(|i| Rational::from_integer(self.coords[i].clone()));
        let image: [Rational; 3] =
            std::array::from_fn(|r| (0..3).fold(Rational::zero(), |acc, c| acc + &m[r][c] * &v[c]));
        ProjPoint::from_rationals(&image).map_err(|_| GeometryError::SingularMap)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.affine() {
            Some((x, y)) => write!(f, "({}, {})", fmt_rational(&x), fmt_rational(&y)),
            None => write!(f, "[{}:{}:{}]", self.coords[0], self.coords[1], self.coords[2]),
        }
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

/// Line `[a:b:c]`, i.e. the set of points with `a x + b y + c z = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LineKey {
    coeffs: [BigInt; 3],
}

impl LineKey {
    pub fn from_coeffs(coeffs: [BigInt; 3]) -> Result<Self, GeometryError> {
        canonical_triple(coeffs).map(|coeffs| LineKey { coeffs }).ok_or(GeometryError::ZeroVector)
    }

    pub fn coeffs(&self) -> &[BigInt; 3] {
        &self.coeffs
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        dot(&self.coeffs, &p.coords).is_zero()
    }

    /// The line at infinity, `z = 0`.
    pub fn at_infinity() -> Self {
        LineKey { coeffs: [BigInt::zero(), BigInt::zero(), BigInt::one()] }
    }
}

impl fmt::Display for LineKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{}:{}]", self.coeffs[0], self.coeffs[1], self.coeffs[2])
    }
}

impl Serialize for LineKey {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

/// The unique line through two distinct points.
pub fn canonical_line(p: &ProjPoint, q: &ProjPoint) -> Result<LineKey, GeometryError> {
    LineKey::from_coeffs(cross(&p.coords, &q.coords)).map_err(|_| GeometryError::SamePoint)
}

/// The common point of two distinct lines.
pub fn intersection(l: &LineKey, m: &LineKey) -> Result<ProjPoint, GeometryError> {
    ProjPoint::from_coords(cross(&l.coeffs, &m.coeffs)).map_err(|_| GeometryError::SameLine)
}

pub fn collinear(p: &ProjPoint, q: &ProjPoint, r: &ProjPoint) -> bool {
    dot(&cross(&p.coords, &q.coords), &r.coords).is_zero()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    points: Vec<(ProjPoint, Colour)>,
}

impl Configuration {
    pub fn new(points: Vec<(ProjPoint, Colour)>) -> Result<Self, GeometryError> {
        for (j, (q, _)) in points.iter().enumerate() {
            if let Some(i) = points[..j].iter().position(|(p, _)| p == q) {
                return Err(GeometryError::DuplicatePoint { first: i, second: j });
            }
        }
        Ok(Configuration { points })
    }

    /// Builds from affine integer coordinates; panics on duplicates.
    pub fn from_affine_ints(points: &[(Colour, i64, i64)]) -> Self {
        Self::new(points.iter().map(|&(c, x, y)| (ProjPoint::affine_int(x, y), c)).collect())
            .expect("duplicate point in literal configuration")
    }

    pub fn points(&self) -> &[(ProjPoint, Colour)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn count(&self, colour: Colour) -> usize {
        self.points.iter().filter(|(_, c)| *c == colour).count()
    }

    pub fn red_count(&self) -> usize {
        self.count(Colour::Red)
    }

    pub fn blue_count(&self) -> usize {
        self.count(Colour::Blue)
    }

    /// Applies `v ↦ M v` to every point. Fails when `M` is singular on the set.
    pub fn transformed(&self, m: &[[Rational; 3]; 3]) -> Result<Self, GeometryError> {
        let points =
            self.points.iter().map(|(p, c)| Ok((p.apply(m)?, *c))).collect::<Result<Vec<_>, GeometryError>>()?;
        Configuration::new(points).map_err(|_| GeometryError::SingularMap)
    }
}
