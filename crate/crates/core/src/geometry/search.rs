//! Tight examples and small-grid searches for violations of the main bound.

use itertools::Itertools;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::stats::{classify_lines, determined_lines, stats_from_lines, Classification};
use super::{Colour, Configuration, GeometryError, ProjPoint};

/// `n - 1` red and `n - 1` blue points alternating on the x-axis, plus
/// `R(0, 1)` and `B(0, 2)` on the y-axis through the red point at the origin.
/// For `n >= 3` this has exactly `2n - 1` bichromatic lines; for `n = 2` it is
/// a near-pencil.
pub fn build_tightness(n: usize) -> Result<Configuration, GeometryError> {
    if n < 2 {
        return Err(GeometryError::InvalidArgument(format!("tightness needs n >= 2, got {n}")));
    }
    let mut points: Vec<(ProjPoint, Colour)> = (0..2 * (n - 1))
        .map(|x| {
            let colour = if x % 2 == 0 { Colour::Red } else { Colour::Blue };
            (ProjPoint::affine_int(x as i64, 0), colour)
        })
        .collect();
    points.push((ProjPoint::affine_int(0, 1), Colour::Red));
    points.push((ProjPoint::affine_int(0, 2), Colour::Blue));
    Configuration::new(points)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    Exhaustive,
    Random { seed: u64, trials: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub grid: usize,
    pub red: usize,
    pub blue: usize,
    pub mode: SearchMode,
    pub examined: usize,
    /// Configurations that are neither collinear nor near-pencils.
    pub general: usize,
    /// General configurations with fewer than `|P| - 1` bichromatic lines.
    pub violations: Vec<Vec<String>>,
}

fn grid_point(grid: usize, cell: usize) -> ProjPoint {
    ProjPoint::affine_int((cell % grid) as i64, (cell / grid) as i64)
}

fn assemble(grid: usize, reds: &[usize], blues: &[usize]) -> Configuration {
    let points = reds
        .iter()
        .map(|&c| (grid_point(grid, c), Colour::Red))
        .chain(blues.iter().map(|&c| (grid_point(grid, c), Colour::Blue)))
        .collect();
    Configuration::new(points).expect("grid cells are distinct")
}

/// Configurations on the `grid × grid` lattice `{0..grid}²`. Exhaustive mode
/// yields every placement of `red` red and `blue` blue points; random mode
/// yields `trials` uniformly sampled placements.
pub fn grid_configurations(
    grid: usize,
    red: usize,
    blue: usize,
    mode: SearchMode,
) -> Result<Box<dyn Iterator<Item = Configuration>>, GeometryError> {
    let cells = grid * grid;
    if red + blue > cells {
        return Err(GeometryError::InvalidArgument(format!(
            "{red} + {blue} points do not fit on a {grid}x{grid} grid"
        )));
    }
    Ok(match mode {
        SearchMode::Exhaustive => Box::new((0..cells).combinations(red).flat_map(move |reds| {
            let rest: Vec<usize> = (0..cells).filter(|c| !reds.contains(c)).collect();
            rest.into_iter().combinations(blue).map(move |blues| assemble(grid, &reds, &blues))
        })),
        SearchMode::Random { seed, trials } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Box::new((0..trials).map(move |_| {
                let chosen = sample(&mut rng, cells, red + blue).into_vec();
                assemble(grid, &chosen[..red], &chosen[red..])
            }))
        }
    })
}

fn describe(cfg: &Configuration) -> Vec<String> {
    cfg.points().iter().map(|(p, c)| format!("{} {}", c.letter(), p)).collect()
}

pub fn search_counterexamples(
    grid: usize,
    red: usize,
    blue: usize,
    mode: SearchMode,
) -> Result<SearchReport, GeometryError> {
    if red == 0 || !(blue == red || blue + 1 == red) {
        return Err(GeometryError::ColourSplit { red, blue });
    }
    let mut report = SearchReport { grid, red, blue, mode, examined: 0, general: 0, violations: Vec::new() };
    let total = red + blue;
    for cfg in grid_configurations(grid, red, blue, mode)? {
        report.examined += 1;
        if total < 3 {
            continue;
        }
        let lines = determined_lines(&cfg);
        if classify_lines(total, &lines) != Classification::General {
            continue;
        }
        report.general += 1;
        if stats_from_lines(&cfg, &lines).bichromatic_count() + 1 < total {
            report.violations.push(describe(&cfg));
        }
    }
    Ok(report)
}
