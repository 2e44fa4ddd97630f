//! Classical incidence theorems evaluated on concrete configurations.
//!
//! Melchior's and Hirzebruch's inequalities are theorems, so a violation
//! means the statistics pipeline is broken and is returned as an error.
//! The other checks report their outcome as data.

use serde::Serialize;

use super::stats::{classify_lines, determined_lines, stats_from_lines, Classification, IncidenceStats};
use super::{Configuration, GeometryError};
use crate::exactmath::{int, rat, rational::serde_rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Melchior,
    Hirzebruch,
    Motzkin,
    DeBruijnErdos,
    MainTheorem,
}

/// `holds` iff `value >= bound`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub check: CheckKind,
    pub holds: bool,
    #[serde(with = "serde_rational")]
    pub value: Rational,
    #[serde(with = "serde_rational")]
    pub bound: Rational,
}

impl Verdict {
    fn new(check: CheckKind, value: Rational, bound: Rational) -> Self {
        Verdict { check, holds: value >= bound, value, bound }
    }

    pub fn slack(&self) -> Rational {
        &self.value - &self.bound
    }
}

fn non_collinear(cfg: &Configuration) -> Result<(Vec<super::DeterminedLine>, IncidenceStats), GeometryError> {
    if cfg.len() < 3 {
        return Err(GeometryError::TooFewPoints { needed: 3, found: cfg.len() });
    }
    let lines = determined_lines(cfg);
    if classify_lines(cfg.len(), &lines) == Classification::Collinear {
        return Err(GeometryError::Collinear);
    }
    let stats = stats_from_lines(cfg, &lines);
    Ok((lines, stats))
}

fn usize_r(v: usize) -> Rational {
    int(v as i64)
}

/// `t2 >= 3 + Σ_{k>=3} (k - 3) t_k`.
pub fn check_melchior(cfg: &Configuration) -> Result<Verdict, GeometryError> {
    let (_, stats) = non_collinear(cfg)?;
    let t = stats.t_vector();
    let excess: Rational = t.iter().filter(|(&k, _)| k >= 3).map(|(&k, &c)| usize_r((k - 3) * c)).sum();
    let verdict = Verdict::new(CheckKind::Melchior, usize_r(stats.t(2)), int(3) + excess);
    if !verdict.holds {
        return Err(GeometryError::TheoremViolated {
            theorem: "Melchior",
            slack: crate::exactmath::fmt_rational(&verdict.slack()),
        });
    }
    Ok(verdict)
}

/// `t2 + (3/4) t3 >= |P| + Σ_{k>=5} (2k - 9) t_k`, for sets with at most
/// `|P| - 3` points on a line.
pub fn check_hirzebruch(cfg: &Configuration) -> Result<Verdict, GeometryError> {
    let total = cfg.len();
    let lines = determined_lines(cfg);
    if let Some(line) = lines.iter().max_by_key(|l| l.size()).filter(|l| l.size() + 3 > total) {
        return Err(GeometryError::TooManyCollinear { line: line.key.clone(), count: line.size(), total });
    }
    let stats = stats_from_lines(cfg, &lines);
    let t = stats.t_vector();
    let value = usize_r(stats.t(2)) + rat(3, 4) * usize_r(stats.t(3));
    let excess: Rational = t.iter().filter(|(&k, _)| k >= 5).map(|(&k, &c)| usize_r((2 * k - 9) * c)).sum();
    let verdict = Verdict::new(CheckKind::Hirzebruch, value, usize_r(total) + excess);
    if !verdict.holds {
        return Err(GeometryError::TheoremViolated {
            theorem: "Hirzebruch",
            slack: crate::exactmath::fmt_rational(&verdict.slack()),
        });
    }
    Ok(verdict)
}

/// Counts monochromatic lines; the bound is one such line. A one-coloured
/// set holds trivially since all of its lines are monochromatic.
pub fn check_motzkin(cfg: &Configuration) -> Result<Verdict, GeometryError> {
    let (lines, _) = non_collinear(cfg)?;
    let mono = lines.iter().filter(|l| !l.is_bichromatic()).count();
    Ok(Verdict::new(CheckKind::Motzkin, usize_r(mono), int(1)))
}

/// A non-collinear set determines at least `|P|` lines.
pub fn check_dbe(cfg: &Configuration) -> Result<Verdict, GeometryError> {
    let (lines, _) = non_collinear(cfg)?;
    Ok(Verdict::new(CheckKind::DeBruijnErdos, usize_r(lines.len()), usize_r(cfg.len())))
}

/// At least `|P| - 1` bichromatic lines, for `n` red and `n` or `n - 1` blue
/// points in general (non-collinear, non-near-pencil) position.
pub fn check_main_theorem(cfg: &Configuration) -> Result<Verdict, GeometryError> {
    let (red, blue) = (cfg.red_count(), cfg.blue_count());
    if red == 0 || !(blue == red || blue + 1 == red) {
        return Err(GeometryError::ColourSplit { red, blue });
    }
    if cfg.len() < 3 {
        return Err(GeometryError::TooFewPoints { needed: 3, found: cfg.len() });
    }
    let lines = determined_lines(cfg);
    let class = classify_lines(cfg.len(), &lines);
    if class != Classification::General {
        return Err(GeometryError::NotGeneral(class));
    }
    let stats = stats_from_lines(cfg, &lines);
    Ok(Verdict::new(CheckKind::MainTheorem, usize_r(stats.bichromatic_count()), usize_r(cfg.len() - 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Colour::{Blue as B, Red as R};

    fn triangle() -> Configuration {
        Configuration::from_affine_ints(&[(R, 0, 0), (R, 1, 0), (B, 0, 1)])
    }

    fn grid3() -> Configuration {
        let pts: Vec<_> = (0..3).flat_map(|x| (0..3).map(move |y| (R, x, y))).collect();
        Configuration::from_affine_ints(&pts)
    }

    #[test]
    fn melchior_examples() {
        assert_eq!(check_melchior(&triangle()).unwrap().slack(), int(0));
        assert_eq!(check_melchior(&grid3()).unwrap().slack(), int(9));
        let pencil = Configuration::from_affine_ints(&[(R, 0, 0), (R, 1, 0), (R, 2, 0), (R, 3, 0), (B, 0, 1)]);
        let v = check_melchior(&pencil).unwrap();
        assert_eq!(v.value, int(4));
        assert_eq!(v.slack(), int(0));
        let line = Configuration::from_affine_ints(&[(R, 0, 0), (R, 1, 0), (R, 2, 0)]);
        assert_eq!(check_melchior(&line), Err(GeometryError::Collinear));
    }

    #[test]
    fn hirzebruch_examples() {
        // t2 = 12, t3 = 8: 12 + 6 - 9.
        assert_eq!(check_hirzebruch(&grid3()).unwrap().slack(), int(9));
        // Convex pentagon, no three collinear: t2 = 10.
        let pentagon = Configuration::from_affine_ints(&[(R, 0, 0), (R, 2, 0), (B, 3, 2), (B, 1, 4), (R, -1, 2)]);
        assert_eq!(check_hirzebruch(&pentagon).unwrap().slack(), int(5));
        let crowded =
            Configuration::from_affine_ints(&[(R, 0, 0), (R, 1, 0), (R, 2, 0), (B, 3, 0), (B, 0, 1), (B, 1, 2)]);
        match check_hirzebruch(&crowded) {
            Err(GeometryError::TooManyCollinear { line, count: 4, total: 6 }) => {
                assert_eq!(line.to_string(), "[0:1:0]")
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn motzkin_examples() {
        let square = Configuration::from_affine_ints(&[(R, 0, 0), (R, 1, 0), (B, 0, 1), (B, 1, 1)]);
        let v = check_motzkin(&square).unwrap();
        assert!(v.holds);
        assert_eq!(v.value, int(2));
        assert!(check_motzkin(&grid3()).unwrap().holds);
    }

    #[test]
    fn dbe_examples() {
        assert_eq!(check_dbe(&triangle()).unwrap().value, int(3));
        assert_eq!(check_dbe(&grid3()).unwrap().value, int(20));
        for k in 2..8 {
            let mut pts: Vec<_> = (0..k).map(|x| (R, x, 0)).collect();
            pts.push((B, 0, 1));
            let v = check_dbe(&Configuration::from_affine_ints(&pts)).unwrap();
            assert_eq!(v.value, int(k + 1));
            assert_eq!(v.slack(), int(0));
        }
    }

    #[test]
    fn main_theorem_examples() {
        let square = Configuration::from_affine_ints(&[(R, 0, 0), (R, 1, 1), (B, 1, 0), (B, 0, 1)]);
        let v = check_main_theorem(&square).unwrap();
        assert_eq!(v.value, int(4));
        assert!(v.holds);
        let pencil = Configuration::from_affine_ints(&[(R, 0, 0), (R, 1, 0), (B, 2, 0), (B, 0, 1)]);
        assert_eq!(check_main_theorem(&pencil), Err(GeometryError::NotGeneral(Classification::NearPencil)));
        let lopsided = Configuration::from_affine_ints(&[(R, 0, 0), (R, 1, 0), (R, 2, 1), (B, 0, 1)]);
        assert!(matches!(check_main_theorem(&lopsided), Err(GeometryError::ColourSplit { .. })));
    }
}
