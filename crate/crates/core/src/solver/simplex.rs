//! Phase-1 simplex over exact rationals with Bland's rule.

use num_traits::{One, Signed, Zero};

use crate::exactmath::{Rational, Relation};

/// `rows` over `num_vars` variables with `lower <= x <= upper`.
#[derive(Clone, Debug)]
pub struct LpProblem {
    pub num_vars: usize,
    pub rows: Vec<(Vec<Rational>, Relation, Rational)>,
    pub lower: Vec<Rational>,
    pub upper: Vec<Option<Rational>>,
}

impl LpProblem {
    pub fn new(num_vars: usize) -> Self {
        LpProblem { num_vars, rows: Vec::new(), lower: vec![Rational::zero(); num_vars], upper: vec![None; num_vars] }
    }

    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        let rows_ok = self.rows.iter().all(|(a, rel, b)| {
            let lhs = a.iter().zip(x).fold(Rational::zero(), |acc, (c, v)| acc + c * v);
            rel.holds(&lhs, b)
        });
        let bounds_ok =
            x.iter().enumerate().all(|(j, v)| *v >= self.lower[j] && self.upper[j].as_ref().is_none_or(|u| v <= u));
        rows_ok && bounds_ok
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Column {
    Structural,
    Slack,
    Artificial,
}

/// Returns a feasible point, or `None` when the system has no solution.
///
/// Variables are shifted by their lower bounds; finite upper bounds become
/// `≤` rows. Phase 1 minimises the sum of artificial variables; Bland's rule
/// (smallest eligible entering column, smallest basic index on ratio ties)
/// rules out cycling.
pub fn find_feasible_point(problem: &LpProblem) -> Option<Vec<Rational>> {
    let n = problem.num_vars;
    let mut rows: Vec<(Vec<Rational>, Relation, Rational)> = Vec::with_capacity(problem.rows.len() + n);
    for (a, rel, b) in &problem.rows {
        let shift = a.iter().zip(&problem.lower).fold(Rational::zero(), |acc, (c, l)| acc + c * l);
        rows.push((a.clone(), *rel, b - shift));
    }
    for j in 0..n {
        if let Some(u) = &problem.upper[j] {
            let room = u - &problem.lower[j];
            if room.is_negative() {
                return None;
            }
            let mut a = vec![Rational::zero(); n];
            a[j] = Rational::one();
            rows.push((a, Relation::Le, room));
        }
    }
    for (a, rel, b) in rows.iter_mut() {
        if b.is_negative() {
            for c in a.iter_mut() {
                *c = -&*c;
            }
            *b = -&*b;
            *rel = rel.flipped();
        }
    }

    let m = rows.len();
    let mut kinds: Vec<Column> = vec![Column::Structural; n];
    for (_, rel, _) in &rows {
        match rel {
            Relation::Le => kinds.push(Column::Slack),
            Relation::Ge => {
                kinds.push(Column::Slack);
                kinds.push(Column::Artificial);
            }
            Relation::Eq => kinds.push(Column::Artificial),
            Relation::Ne => panic!("LP rows cannot use !="),
        }
    }
    let width = kinds.len();
    let rhs_col = width;
    let mut tableau: Vec<Vec<Rational>> = vec![vec![Rational::zero(); width + 1]; m];
    let mut basis = vec![0usize; m];
    let mut next = n;
    for (r, (a, rel, b)) in rows.iter().enumerate() {
        tableau[r][..n].clone_from_slice(a);
        tableau[r][rhs_col] = b.clone();
        match rel {
            Relation::Le => {
                tableau[r][next] = Rational::one();
                basis[r] = next;
                next += 1;
            }
            Relation::Ge => {
                tableau[r][next] = -Rational::one();
                tableau[r][next + 1] = Rational::one();
                basis[r] = next + 1;
                next += 2;
            }
            _ => {
                tableau[r][next] = Rational::one();
                basis[r] = next;
                next += 1;
            }
        }
    }

    // Reduced costs of the phase-1 objective; the last entry is -w.
    let mut cost = vec![Rational::zero(); width + 1];
    for (j, kind) in kinds.iter().enumerate() {
        if *kind == Column::Artificial {
            cost[j] = Rational::one();
        }
    }
    for r in 0..m {
        if kinds[basis[r]] == Column::Artificial {
            for (c, t) in cost.iter_mut().zip(&tableau[r]) {
                *c -= t;
            }
        }
    }

    loop {
        let entering = (0..width).find(|&j| kinds[j] != Column::Artificial && cost[j].is_negative());
        let Some(col) = entering else { break };
        let mut leave: Option<(usize, Rational)> = None;
        for r in 0..m {
            if !tableau[r][col].is_positive() {
                continue;
            }
            let ratio = &tableau[r][rhs_col] / &tableau[r][col];
            let better = match &leave {
                None => true,
                Some((best_r, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*best_r]),
            };
            if better {
                leave = Some((r, ratio));
            }
        }
        // Phase 1 is bounded below by zero, so some row always limits the step.
        let (row, _) = leave.expect("phase-1 objective is bounded");
        pivot(&mut tableau, &mut cost, row, col);
        basis[row] = col;
    }

    if !cost[rhs_col].is_zero() {
        return None;
    }
    let mut shifted = vec![Rational::zero(); n];
    for (r, &b) in basis.iter().enumerate() {
        if b < n {
            shifted[b] = tableau[r][rhs_col].clone();
        }
    }
    Some(shifted.into_iter().zip(&problem.lower).map(|(x, l)| x + l).collect())
}

fn pivot(tableau: &mut [Vec<Rational>], cost: &mut [Rational], row: usize, col: usize) {
    let inv = tableau[row][col].recip();
    for x in tableau[row].iter_mut() {
        if !x.is_zero() {
            *x *= &inv;
        }
    }
    let pivot_row = tableau[row].clone();
    let nonzero: Vec<usize> = (0..pivot_row.len()).filter(|&j| !pivot_row[j].is_zero()).collect();
    let eliminate = |target: &mut [Rational]| {
        if target[col].is_zero() {
            return;
        }
        let factor = target[col].clone();
        for &j in &nonzero {
            target[j] -= &factor * &pivot_row[j];
        }
    };
    for (r, other) in tableau.iter_mut().enumerate() {
        if r != row {
            eliminate(other);
        }
    }
    eliminate(cost);
}
