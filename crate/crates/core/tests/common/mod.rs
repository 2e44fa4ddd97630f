//! Independent oracles shared by the integration and acceptance tests. None
//! of them calls into the library code they are used to check.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use bichromatic::exactmath::{int, Rational};
use bichromatic::geometry::{grid_configurations, Colour, Configuration, SearchMode};
use rand::Rng;

/// Affine integer points of a grid configuration with their colours.
pub fn affine_points(cfg: &Configuration) -> Vec<(i64, i64, Colour)> {
    cfg.points()
        .iter()
        .map(|(p, c)| {
            let (x, y) = p.affine().expect("grid points are finite");
            assert!(x.is_integer() && y.is_integer());
            (x.to_integer().try_into().unwrap(), y.to_integer().try_into().unwrap(), *c)
        })
        .collect()
}

/// The `(red, blue)` profile of every determined line, found by brute force:
/// for each pair, collect every point with a zero cross product.
pub fn brute_force_profiles(points: &[(i64, i64, Colour)]) -> Vec<(usize, usize)> {
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for a in 0..points.len() {
        for b in a + 1..points.len() {
            let (ax, ay, _) = points[a];
            let (bx, by, _) = points[b];
            let members: Vec<usize> = (0..points.len())
                .filter(|&c| {
                    let (cx, cy, _) = points[c];
                    (bx - ax) * (cy - ay) - (by - ay) * (cx - ax) == 0
                })
                .collect();
            seen.insert(members);
        }
    }
    seen.iter()
        .map(|m| {
            let red = m.iter().filter(|&&k| points[k].2 == Colour::Red).count();
            (red, m.len() - red)
        })
        .collect()
}

pub fn s_table(profiles: &[(usize, usize)]) -> BTreeMap<(usize, usize), usize> {
    let mut s = BTreeMap::new();
    for &p in profiles {
        *s.entry(p).or_insert(0) += 1;
    }
    s
}

fn c2(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

/// The pair-counting identities evaluated on an s-table; `Ok` iff all hold.
pub fn identities(s: &BTreeMap<(usize, usize), usize>, red: usize, blue: usize) -> Result<(), String> {
    let red_pairs: usize = s.iter().map(|(&(i, _), &c)| c2(i) * c).sum();
    let blue_pairs: usize = s.iter().map(|(&(_, j), &c)| c2(j) * c).sum();
    let mixed: usize = s.iter().map(|(&(i, j), &c)| i * j * c).sum();
    let all: usize = s.iter().map(|(&(i, j), &c)| c2(i + j) * c).sum();
    let same = red_pairs + blue_pairs;
    if red_pairs != c2(red) {
        return Err(format!("red pairs {red_pairs}"));
    }
    if blue_pairs != c2(blue) {
        return Err(format!("blue pairs {blue_pairs}"));
    }
    if mixed != red * blue {
        return Err(format!("mixed pairs {mixed}"));
    }
    if same as i64 - mixed as i64 != (c2(red) + c2(blue)) as i64 - (red * blue) as i64 {
        return Err("S - D".into());
    }
    if all != c2(red + blue) {
        return Err(format!("all pairs {all}"));
    }
    Ok(())
}

fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

fn tricky_term(on_line: u64, off_line: u64) -> u64 {
    if on_line == 0 || off_line == 0 {
        return 0;
    }
    let mut best = u64::MAX;
    for i in 1..=off_line {
        best = best.min(i + (on_line - 1) * ceil_div(off_line, i).max(i));
    }
    best
}

/// Lower bound on bichromatic lines from a line with `r` red and `b` blue
/// points, by scanning every `i` explicitly.
pub fn tricky_oracle(red: usize, blue: usize, r: usize, b: usize) -> usize {
    let (r, b) = (r as u64, b as u64);
    let first = tricky_term(r, blue as u64 - b);
    let second = tricky_term(b, red as u64 - r);
    (first + second + u64::from(r >= 1 && b >= 1)) as usize
}

/// The explicit sum form of the bound from a line with `r` red, `b` blue.
pub fn imp21_oracle(red: usize, blue: usize, r: usize, b: usize) -> usize {
    let r_prime = (red - r).min(b);
    let b_prime = (blue - b).min(r);
    let mut total = 0;
    for i in 0..r_prime {
        total += b - i;
    }
    for i in 0..b_prime {
        total += r - i;
    }
    total + usize::from(r >= 1 && b >= 1)
}

/// Grid sizes and colour splits cycled through by [`random_configurations`].
const SETTINGS: [(usize, usize, usize); 8] =
    [(3, 3, 3), (4, 3, 2), (4, 4, 4), (4, 5, 4), (5, 5, 5), (5, 6, 5), (6, 6, 6), (6, 7, 6)];

/// `count` seeded random grid configurations with `blue` in `{red, red - 1}`.
pub fn random_configurations(count: usize, seed: u64) -> Vec<Configuration> {
    let per = count.div_ceil(SETTINGS.len());
    let mut out = Vec::with_capacity(count);
    for (k, &(grid, red, blue)) in SETTINGS.iter().enumerate() {
        let mode = SearchMode::Random { seed: seed.wrapping_add(k as u64), trials: per };
        out.extend(grid_configurations(grid, red, blue, mode).unwrap());
    }
    out.truncate(count);
    out
}

/// A random integer matrix with determinant ±1, as a product of elementary
/// row operations.
pub fn random_unimodular(rng: &mut impl Rng) -> [[Rational; 3]; 3] {
    let mut m = [[0i64; 3]; 3];
    for (k, row) in m.iter_mut().enumerate() {
        row[k] = 1;
    }
    for _ in 0..6 {
        let (src, dst) = (rng.gen_range(0..3), rng.gen_range(0..3));
        if src == dst {
            continue;
        }
        let factor = rng.gen_range(-2..=2);
        let source = m[src];
        for (entry, s) in m[dst].iter_mut().zip(source) {
            *entry += factor * s;
        }
    }
    if rng.gen_bool(0.5) {
        m.swap(0, 1);
    }
    m.map(|row| row.map(int))
}
