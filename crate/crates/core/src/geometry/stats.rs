use std::collections::BTreeMap;

use serde::Serialize;

use super::{canonical_line, Colour, Configuration, GeometryError, LineKey};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeterminedLine {
    pub key: LineKey,
    /// Indices into the configuration, ascending.
    pub members: Vec<usize>,
    pub red: usize,
    pub blue: usize,
}

impl DeterminedLine {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn is_bichromatic(&self) -> bool {
        self.red > 0 && self.blue > 0
    }
}

/// Every line through at least two points, each reported once, ordered by
/// the first pair of points that spans it.
pub fn determined_lines(cfg: &Configuration) -> Vec<DeterminedLine> {
    let pts = cfg.points();
    let n = pts.len();
    let mut covered = vec![false; n * n];
    let mut lines = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if covered[i * n + j] {
                continue;
            }
            let key = canonical_line(&pts[i].0, &pts[j].0).expect("configuration points are distinct");
            let members: Vec<usize> = (0..n).filter(|&k| key.contains(&pts[k].0)).collect();
            for (a, &u) in members.iter().enumerate() {
                for &v in &members[a + 1..] {
                    covered[u * n + v] = true;
                }
            }
            let red = members.iter().filter(|&&k| pts[k].1 == Colour::Red).count();
            let blue = members.len() - red;
            lines.push(DeterminedLine { key, members, red, blue });
        }
    }
    lines
}

/// Line counts by colour profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceStats {
    /// `(i, j) ↦` number of lines with exactly `i` red and `j` blue points.
    pub s: BTreeMap<(usize, usize), usize>,
    pub red: usize,
    pub blue: usize,
}

fn choose2(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

impl IncidenceStats {
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.s.get(&(i, j)).copied().unwrap_or(0)
    }

    /// Number of lines with exactly `k` points.
    pub fn t(&self, k: usize) -> usize {
        self.s.iter().filter(|((i, j), _)| i + j == k).map(|(_, c)| c).sum()
    }

    pub fn t_vector(&self) -> BTreeMap<usize, usize> {
        let mut t = BTreeMap::new();
        for (&(i, j), &c) in &self.s {
            *t.entry(i + j).or_insert(0) += c;
        }
        t
    }

    pub fn line_count(&self) -> usize {
        self.s.values().sum()
    }

    pub fn bichromatic_count(&self) -> usize {
        self.s.iter().filter(|((i, j), _)| *i >= 1 && *j >= 1).map(|(_, c)| c).sum()
    }

    /// Same-colour pairs, counted through the lines.
    pub fn same_pairs(&self) -> usize {
        self.s.iter().map(|(&(i, j), &c)| (choose2(i) + choose2(j)) * c).sum()
    }

    /// Different-colour pairs, counted through the lines.
    pub fn diff_pairs(&self) -> usize {
        self.s.iter().map(|(&(i, j), &c)| i * j * c).sum()
    }

    pub fn max_line_size(&self) -> usize {
        self.s.keys().map(|(i, j)| i + j).max().unwrap_or(0)
    }

    /// Checks the pair-counting identities; returns the failed ones.
    pub fn identity_failures(&self) -> Vec<String> {
        let (r, b) = (self.red, self.blue);
        let red_pairs: usize = self.s.iter().map(|(&(i, _), &c)| choose2(i) * c).sum();
        let blue_pairs: usize = self.s.iter().map(|(&(_, j), &c)| choose2(j) * c).sum();
        let mut failures = Vec::new();
        if red_pairs != choose2(r) {
            failures.push(format!("red pairs {red_pairs} != C({r},2)"));
        }
        if blue_pairs != choose2(b) {
            failures.push(format!("blue pairs {blue_pairs} != C({b},2)"));
        }
        if self.diff_pairs() != r * b {
            failures.push(format!("mixed pairs {} != {r}*{b}", self.diff_pairs()));
        }
        let lhs = self.same_pairs() as i128 - self.diff_pairs() as i128;
        let rhs = (choose2(r) + choose2(b)) as i128 - (r * b) as i128;
        if lhs != rhs {
            failures.push(format!("S - D = {lhs} != {rhs}"));
        }
        let all_pairs: usize = self.t_vector().iter().map(|(&k, &c)| choose2(k) * c).sum();
        if all_pairs != choose2(r + b) {
            failures.push(format!("sum t_k C(k,2) = {all_pairs} != C({},2)", r + b));
        }
        failures
    }
}

impl Serialize for IncidenceStats {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        #[derive(Serialize)]
        struct Cell {
            red: usize,
            blue: usize,
            lines: usize,
        }
        let cells: Vec<Cell> = self.s.iter().map(|(&(red, blue), &lines)| Cell { red, blue, lines }).collect();
        let t: BTreeMap<String, usize> = self.t_vector().into_iter().map(|(k, c)| (k.to_string(), c)).collect();
        let mut map = ser.serialize_map(Some(9))?;
        map.serialize_entry("red", &self.red)?;
        map.serialize_entry("blue", &self.blue)?;
        map.serialize_entry("s", &cells)?;
        map.serialize_entry("t", &t)?;
        map.serialize_entry("lines", &self.line_count())?;
        map.serialize_entry("same_pairs", &self.same_pairs())?;
        map.serialize_entry("diff_pairs", &self.diff_pairs())?;
        map.serialize_entry("bichromatic_count", &self.bichromatic_count())?;
        map.serialize_entry("identities_hold", &self.identity_failures().is_empty())?;
        map.end()
    }
}

pub fn stats_from_lines(cfg: &Configuration, lines: &[DeterminedLine]) -> IncidenceStats {
    let mut s = BTreeMap::new();
    for line in lines {
        *s.entry((line.red, line.blue)).or_insert(0) += 1;
    }
    IncidenceStats { s, red: cfg.red_count(), blue: cfg.blue_count() }
}

pub fn compute_stats(cfg: &Configuration) -> IncidenceStats {
    stats_from_lines(cfg, &determined_lines(cfg))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Collinear,
    NearPencil,
    General,
}

pub fn classify(cfg: &Configuration) -> Result<Classification, GeometryError> {
    if cfg.len() < 3 {
        return Err(GeometryError::TooFewPoints { needed: 3, found: cfg.len() });
    }
    Ok(classify_lines(cfg.len(), &determined_lines(cfg)))
}

pub(crate) fn classify_lines(total: usize, lines: &[DeterminedLine]) -> Classification {
    let longest = lines.iter().map(DeterminedLine::size).max().unwrap_or(0);
    if longest == total {
        Classification::Collinear
    } else if longest + 1 == total {
        Classification::NearPencil
    } else {
        Classification::General
    }
}
