use num_traits::{One, Zero};

use super::CasesError;
use crate::exactmath::{det3, solve_linear, LinSystem, Rational, Relation, SolveKind};
use crate::geometry::{collinear, ProjPoint};

/// An invertible 3×3 rational matrix acting on homogeneous coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjMap {
    m: [[Rational; 3]; 3],
}

impl ProjMap {
    pub fn new(m: [[Rational; 3]; 3]) -> Result<Self, CasesError> {
        if det3(&m).is_zero() {
            return Err(CasesError::Singular);
        }
        Ok(ProjMap { m })
    }

    pub fn identity() -> Self {
        ProjMap {
            m: std::array::from_fn(|r| {
                std::array::from_fn(|c| if r == c { Rational::one() } else { Rational::zero() })
            }),
        }
    }

    pub fn matrix(&self) -> &[[Rational; 3]; 3] {
        &self.m
    }

    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        p.apply(&self.m).expect("invertible map sends nonzero vectors to nonzero vectors")
    }

    pub fn compose(&self, other: &ProjMap) -> ProjMap {
        let m = std::array::from_fn(|r| {
            std::array::from_fn(|c| (0..3).fold(Rational::zero(), |acc, k| acc + &self.m[r][k] * &other.m[k][c]))
        });
        ProjMap { m }
    }

    /// Inverse via the adjugate.
    pub fn inverse(&self) -> ProjMap {
        let m = &self.m;
        let det = det3(m);
        let cof = |r: usize, c: usize| {
            let rows: Vec<usize> = (0..3).filter(|&x| x != r).collect();
            let cols: Vec<usize> = (0..3).filter(|&x| x != c).collect();
            let minor = &m[rows[0]][cols[0]] * &m[rows[1]][cols[1]] - &m[rows[0]][cols[1]] * &m[rows[1]][cols[0]];
            if (r + c).is_multiple_of(2) {
                minor
            } else {
                -minor
            }
        };
        // inverse[r][c] = cofactor(c, r) / det
        ProjMap { m: std::array::from_fn(|r| std::array::from_fn(|c| cof(c, r) / &det)) }
    }

    /// True when the matrix is a nonzero multiple of the identity, i.e. the
    /// map fixes every point.
    pub fn is_projective_identity(&self) -> bool {
        let d = &self.m[0][0];
        !d.is_zero() && (0..3).all(|r| (0..3).all(|c| if r == c { self.m[r][c] == *d } else { self.m[r][c].is_zero() }))
    }
}

fn as_vector(p: &ProjPoint) -> [Rational; 3] {
    std::array::from_fn(|i| Rational::from_integer(p.coords()[i].clone()))
}

fn general_position(points: &[ProjPoint; 4], which: &'static str) -> Result<(), CasesError> {
    for a in 0..4 {
        for b in a + 1..4 {
            for c in b + 1..4 {
                if collinear(&points[a], &points[b], &points[c]) {
                    return Err(CasesError::Degenerate { which, triple: [a + 1, b + 1, c + 1] });
                }
            }
        }
    }
    Ok(())
}

/// The matrix with columns `λ_k p_k` (k = 1..3) where `p_4 = Σ λ_k p_k`; it
/// sends the standard frame `e1, e2, e3, e1 + e2 + e3` onto `p_1..p_4`.
fn frame_matrix(points: &[ProjPoint; 4]) -> [[Rational; 3]; 3] {
    let cols: Vec<[Rational; 3]> = points.iter().map(as_vector).collect();
    let mut sys = LinSystem::new(3);
    for (r, rhs) in cols[3].iter().enumerate() {
        let row = cols[..3].iter().map(|col| col[r].clone()).collect();
        sys.push(row, Relation::Eq, rhs.clone()).expect("width 3");
    }
    let out = solve_linear(&sys).expect("only = rows");
    assert_eq!(out.kind, SolveKind::Unique, "general position makes the frame system regular");
    let lambda = out.witness.expect("unique solution");
    std::array::from_fn(|r| std::array::from_fn(|k| &lambda[k] * &cols[k][r]))
}

/// The collineation sending `from[k]` to `to[k]` for k = 1..4, unique up to
/// scale. Both quadruples must be in general position.
pub fn projective_map_from_4pts(from: &[ProjPoint; 4], to: &[ProjPoint; 4]) -> Result<ProjMap, CasesError> {
    general_position(from, "source")?;
    general_position(to, "target")?;
    let source = ProjMap::new(frame_matrix(from))?;
    let target = ProjMap::new(frame_matrix(to))?;
    let map = target.compose(&source.inverse());
    for (v, w) in from.iter().zip(to) {
        if map.apply(v) != *w {
            return Err(CasesError::Unverified(format!("{v} does not map to {w}")));
        }
    }
    Ok(map)
}
