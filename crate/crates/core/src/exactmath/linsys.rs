//! Exact solution sets of small linear systems with `=` and `≠` rows.

use num_traits::{One, Zero};
use serde::Serialize;

use super::rational::{int, Rational};
use super::MathError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Relation {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "!=")]
    Ne,
}

impl Relation {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Eq => lhs == rhs,
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Ne => lhs != rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Ne => "!=",
        }
    }

    /// The relation obtained after multiplying both sides by -1.
    pub fn flipped(self) -> Relation {
        match self {
            Relation::Le => Relation::Ge,
            Relation::Ge => Relation::Le,
            other => other,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct LinSystem {
    width: usize,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    relations: Vec<Relation>,
}

impl LinSystem {
    pub fn new(width: usize) -> Self {
        LinSystem { width, ..Default::default() }
    }

    pub fn push(&mut self, row: Vec<Rational>, relation: Relation, rhs: Rational) -> Result<(), MathError> {
        if row.len() != self.width {
            return Err(MathError::RowWidth { expected: self.width, found: row.len() });
        }
        self.rows.push(row);
        self.relations.push(relation);
        self.rhs.push(rhs);
        Ok(())
    }

    /// Convenience for integer rows.
    pub fn push_int(&mut self, row: &[i64], relation: Relation, rhs: i64) -> Result<(), MathError> {
        self.push(row.iter().map(|&v| int(v)).collect(), relation, int(rhs))
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> impl Iterator<Item = (&[Rational], Relation, &Rational)> {
        self.rows.iter().zip(&self.relations).zip(&self.rhs).map(|((row, rel), rhs)| (row.as_slice(), *rel, rhs))
    }

    /// Checks every row of the system at `point`.
    pub fn satisfied_by(&self, point: &[Rational]) -> bool {
        self.rows().all(|(row, rel, rhs)| rel.holds(&dot(row, point), rhs))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveKind {
    Infeasible,
    Unique,
    AffineSubspace,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOutcome {
    pub kind: SolveKind,
    /// A point satisfying every row, including the `≠` rows.
    pub witness: Option<Vec<Rational>>,
    /// Dimension of the solution space of the `=` rows.
    pub dimension: usize,
}

impl SolveOutcome {
    fn infeasible() -> Self {
        SolveOutcome { kind: SolveKind::Infeasible, witness: None, dimension: 0 }
    }

    pub fn is_feasible(&self) -> bool {
        self.kind != SolveKind::Infeasible
    }
}

pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Solves the `=` rows by Gauss-Jordan elimination, then checks each `≠`
/// row against the resulting affine solution space. A `≠` row is violated
/// everywhere exactly when its left side is constant on that space and equal
/// to its right side.
pub fn solve_linear(system: &LinSystem) -> Result<SolveOutcome, MathError> {
    let width = system.width;
    let mut matrix: Vec<Vec<Rational>> = Vec::new();
    let mut diseqs: Vec<(&[Rational], &Rational)> = Vec::new();
    for (row, rel, rhs) in system.rows() {
        match rel {
            Relation::Eq => {
                let mut aug = row.to_vec();
                aug.push(rhs.clone());
                matrix.push(aug);
            }
            Relation::Ne => diseqs.push((row, rhs)),
            other => return Err(MathError::UnsupportedRelation(other.symbol())),
        }
    }

    let pivots = reduce_to_rref(&mut matrix, width);
    if matrix.iter().skip(pivots.len()).any(|row| !row[width].is_zero()) {
        return Ok(SolveOutcome::infeasible());
    }

    let mut particular = vec![Rational::zero(); width];
    for (r, &col) in pivots.iter().enumerate() {
        particular[col] = matrix[r][width].clone();
    }
    let free: Vec<usize> = (0..width).filter(|c| !pivots.contains(c)).collect();
    let basis: Vec<Vec<Rational>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); width];
            v[f] = Rational::one();
            for (r, &col) in pivots.iter().enumerate() {
                v[col] = -matrix[r][f].clone();
            }
            v
        })
        .collect();

    // Each ≠ row restricted to the solution space: offset + Σ slope_k t_k ≠ 0.
    let mut restricted = Vec::with_capacity(diseqs.len());
    for (row, rhs) in &diseqs {
        let offset = dot(row, &particular) - *rhs;
        let slopes: Vec<Rational> = basis.iter().map(|v| dot(row, v)).collect();
        if slopes.iter().all(Zero::is_zero) && offset.is_zero() {
            return Ok(SolveOutcome::infeasible());
        }
        restricted.push((offset, slopes));
    }

    // t_k = m^(k+1) turns each restricted row into a nonzero polynomial in m
    // of degree at most |free|, so some m in 0..=|free|·|rows| avoids them all.
    let witness = if restricted.is_empty() {
        particular
    } else {
        let limit = free.len() * restricted.len() + 1;
        let m = (0..=limit as i64)
            .map(int)
            .find(|m| {
                restricted.iter().all(|(offset, slopes)| {
                    let mut power = Rational::one();
                    let mut value = offset.clone();
                    for s in slopes {
                        power *= m;
                        value += s * &power;
                    }
                    !value.is_zero()
                })
            })
            .expect("a nonzero polynomial has finitely many roots");
        let mut point = particular;
        let mut power = Rational::one();
        for v in &basis {
            power *= &m;
            for (p, x) in point.iter_mut().zip(v) {
                *p += x * &power;
            }
        }
        point
    };

    let dimension = free.len();
    let kind = if dimension == 0 { SolveKind::Unique } else { SolveKind::AffineSubspace };
    Ok(SolveOutcome { kind, witness: Some(witness), dimension })
}

/// Brings the first `width` columns of `matrix` to reduced row echelon form
/// in place and returns the pivot columns, one per leading row.
fn reduce_to_rref(matrix: &mut [Vec<Rational>], width: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..width {
        if row == matrix.len() {
            break;
        }
        let Some(found) = (row..matrix.len()).find(|&r| !matrix[r][col].is_zero()) else {
            continue;
        };
        matrix.swap(row, found);
        let inv = matrix[row][col].recip();
        for x in matrix[row].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = matrix[row].clone();
        for (r, other) in matrix.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let factor = other[col].clone();
            for (x, p) in other.iter_mut().zip(&pivot_row) {
                *x -= &factor * p;
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_system_is_unique() {
        let mut sys = LinSystem::new(2);
        sys.push_int(&[1, 0], Relation::Eq, 1).unwrap();
        sys.push_int(&[0, 1], Relation::Eq, 2).unwrap();
        let out = solve_linear(&sys).unwrap();
        assert_eq!(out.kind, SolveKind::Unique);
        assert_eq!(out.dimension, 0);
        assert_eq!(out.witness, Some(vec![int(1), int(2)]));
    }

    #[test]
    fn direct_contradiction() {
        let mut sys = LinSystem::new(2);
        sys.push_int(&[1, -1], Relation::Eq, 0).unwrap();
        sys.push_int(&[1, -1], Relation::Ne, 0).unwrap();
        assert_eq!(solve_linear(&sys).unwrap().kind, SolveKind::Infeasible);
    }

    #[test]
    fn inconsistent_equalities() {
        let mut sys = LinSystem::new(2);
        sys.push_int(&[1, 1], Relation::Eq, 1).unwrap();
        sys.push_int(&[2, 2], Relation::Eq, 3).unwrap();
        assert_eq!(solve_linear(&sys).unwrap().kind, SolveKind::Infeasible);
    }

    // Columns: x1..x6, d2, d3.
    fn displacement_system(with_diseq: bool) -> LinSystem {
        let mut sys = LinSystem::new(8);
        for d in [6usize, 7] {
            for i in 0..3 {
                let mut row = [0i64; 8];
                row[i + 3] = 1;
                row[i] = -1;
                row[d] = -1;
                sys.push_int(&row, Relation::Eq, 0).unwrap();
            }
        }
        if with_diseq {
            sys.push_int(&[0, 0, 0, 0, 0, 0, 1, -1], Relation::Ne, 0).unwrap();
        }
        sys
    }

    #[test]
    fn displacement_system_forces_equal_shifts() {
        assert_eq!(solve_linear(&displacement_system(true)).unwrap().kind, SolveKind::Infeasible);
        let relaxed = solve_linear(&displacement_system(false)).unwrap();
        assert_eq!(relaxed.kind, SolveKind::AffineSubspace);
        assert_eq!(relaxed.dimension, 4);
    }

    #[test]
    fn displacement_oracle_brute_force() {
        // Every integer point of [-1, 1]^8 violates the system, while the
        // relaxed system (no ≠ row) has grid solutions.
        let strict = displacement_system(true);
        let relaxed = displacement_system(false);
        let mut relaxed_hits = 0;
        for code in 0..3i64.pow(8) {
            let point: Vec<Rational> = (0..8).map(|k| int((code / 3i64.pow(k)) % 3 - 1)).collect();
            assert!(!strict.satisfied_by(&point));
            if relaxed.satisfied_by(&point) {
                relaxed_hits += 1;
            }
        }
        assert!(relaxed_hits > 0);
    }

    #[test]
    fn witness_avoids_diseqs() {
        let mut sys = LinSystem::new(3);
        sys.push_int(&[1, 1, 1], Relation::Eq, 0).unwrap();
        sys.push_int(&[1, 0, 0], Relation::Ne, 0).unwrap();
        sys.push_int(&[0, 1, 0], Relation::Ne, 0).unwrap();
        sys.push_int(&[1, -1, 0], Relation::Ne, 0).unwrap();
        let out = solve_linear(&sys).unwrap();
        assert_eq!(out.kind, SolveKind::AffineSubspace);
        assert!(sys.satisfied_by(out.witness.as_ref().unwrap()));
    }

    #[test]
    fn inequalities_are_rejected() {
        let mut sys = LinSystem::new(1);
        sys.push_int(&[1], Relation::Le, 0).unwrap();
        assert!(matches!(solve_linear(&sys), Err(MathError::UnsupportedRelation(_))));
        assert!(sys.push_int(&[1, 2], Relation::Eq, 0).is_err());
    }

    fn grid_points(k: usize) -> Vec<Vec<Rational>> {
        let mut out = vec![vec![]];
        for _ in 0..k {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (-3i64..=3).map(move |v| {
                        let mut q = p.clone();
                        q.push(int(v));
                        q
                    })
                })
                .collect();
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        // When the grid holds a solution the solver must not report
        // infeasibility; every returned witness must satisfy all rows; a
        // unique solution must be the only grid solution.
        #[test]
        fn agrees_with_grid_enumeration(
            width in 1usize..=4,
            rows in prop::collection::vec(
                (prop::collection::vec(-2i64..=2, 4), -3i64..=3, prop::bool::weighted(0.25)),
                1..=4,
            ),
        ) {
            let mut sys = LinSystem::new(width);
            for (coeffs, rhs, ne) in &rows {
                let rel = if *ne { Relation::Ne } else { Relation::Eq };
                sys.push_int(&coeffs[..width], rel, *rhs).unwrap();
            }
            let out = solve_linear(&sys).unwrap();
            let grid_solutions: Vec<_> =
                grid_points(width).into_iter().filter(|p| sys.satisfied_by(p)).collect();
            if !grid_solutions.is_empty() {
                prop_assert!(out.is_feasible());
            }
            match out.kind {
                SolveKind::Infeasible => prop_assert!(grid_solutions.is_empty()),
                SolveKind::Unique => {
                    let w = out.witness.clone().unwrap();
                    prop_assert!(sys.satisfied_by(&w));
                    prop_assert!(grid_solutions.iter().all(|p| *p == w));
                }
                SolveKind::AffineSubspace => {
                    prop_assert!(out.dimension >= 1);
                    prop_assert!(sys.satisfied_by(out.witness.as_ref().unwrap()));
                }
            }
        }
    }
}
