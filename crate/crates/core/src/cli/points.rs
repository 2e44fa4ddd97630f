//! Point-set text format: one point per line, a colour letter followed by
//! either two rational affine coordinates or three integer homogeneous ones.
//!
//! ```text
//! # a triangle with a blue point at x-infinity
//! R 0 0
//! R -1/2 3
//! B 1 0 0
//! ```

use std::collections::HashMap;
use std::fmt::Write;

use num_bigint::BigInt;
use thiserror::Error;

use crate::exactmath::{fmt_rational, parse_rational};
use crate::geometry::{Colour, Configuration, ProjPoint};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum PointsError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {second}: point {point} duplicates line {first}")]
    Duplicate { first: usize, second: usize, point: String },
}

fn parse_colour(token: &str) -> Option<Colour> {
    match token {
        "R" | "r" => Some(Colour::Red),
        "B" | "b" => Some(Colour::Blue),
        _ => None,
    }
}

fn parse_line(tokens: &[&str]) -> Result<(ProjPoint, Colour), String> {
    let (first, coords) = tokens.split_first().ok_or("empty point")?;
    let colour = parse_colour(first).ok_or_else(|| format!("expected colour R or B, found {first:?}"))?;
    let point = match coords {
        [x, y] => {
            let x = parse_rational(x).map_err(|e| e.to_string())?;
            let y = parse_rational(y).map_err(|e| e.to_string())?;
            ProjPoint::from_affine(&x, &y)
        }
        [x, y, z] => {
            let parse =
                |s: &str| s.parse::<BigInt>().map_err(|_| format!("homogeneous coordinate {s:?} is not an integer"));
            ProjPoint::from_coords([parse(x)?, parse(y)?, parse(z)?]).map_err(|e| e.to_string())?
        }
        _ => return Err(format!("expected 2 or 3 coordinates, found {}", coords.len())),
    };
    Ok((point, colour))
}

pub fn parse_points(text: &str) -> Result<Configuration, PointsError> {
    let mut points = Vec::new();
    let mut seen: HashMap<ProjPoint, usize> = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let (point, colour) = parse_line(&tokens).map_err(|message| PointsError::Malformed { line, message })?;
        if let Some(&first) = seen.get(&point) {
            return Err(PointsError::Duplicate { first, second: line, point: point.to_string() });
        }
        seen.insert(point.clone(), line);
        points.push((point, colour));
    }
    Ok(Configuration::new(points).expect("duplicates already rejected"))
}

/// Writes a configuration in the format read by [`parse_points`]; finite
/// points use affine coordinates, points at infinity homogeneous ones.
pub fn write_points(cfg: &Configuration) -> String {
    let mut out = String::new();
    for (p, c) in cfg.points() {
        match p.affine() {
            Some((x, y)) => writeln!(out, "{} {} {}", c.letter(), fmt_rational(&x), fmt_rational(&y)),
            None => {
                let [x, y, z] = p.coords();
                writeln!(out, "{} {x} {y} {z}", c.letter())
            }
        }
        .expect("writing to a String");
    }
    out
}
