//! Exact LP feasibility and integer feasibility for case models.

pub mod simplex;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::CaseSpec;
use crate::exactmath::{fmt_rational, rat, rational::fractional_part, Rational, Relation};
use crate::model::{build_model, verify_assignment, Assignment, CaseModel, VarId};
pub use simplex::{find_feasible_point, LpProblem};

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("branch-and-bound produced a witness the model rejects: {0:?}")]
    WitnessRejected(Vec<String>),
    #[error("variable {0} has no finite upper bound; the search would not terminate")]
    Unbounded(VarId),
    #[error("invalid scan range {0}..={1}")]
    BadRange(usize, usize),
    #[error(transparent)]
    Model(#[from] crate::model::ModelError),
    #[error(transparent)]
    Bounds(#[from] crate::bounds::BoundsError),
    #[error("thread pool: {0}")]
    Pool(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Feasibility {
    Feasible,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpResult {
    pub kind: Feasibility,
    pub witness: Option<BTreeMap<VarId, Rational>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IlpResult {
    pub kind: Feasibility,
    pub witness: Option<BTreeMap<VarId, u64>>,
    pub nodes_explored: usize,
    /// Nodes whose LP relaxation was infeasible.
    pub pruned_infeasible: usize,
}

impl IlpResult {
    pub fn is_feasible(&self) -> bool {
        self.kind == Feasibility::Feasible
    }
}

fn lp_problem(model: &CaseModel) -> (Vec<VarId>, LpProblem) {
    let vars: Vec<VarId> = model.variables().iter().copied().collect();
    let index: BTreeMap<VarId, usize> = vars.iter().enumerate().map(|(k, v)| (*v, k)).collect();
    let mut problem = LpProblem::new(vars.len());
    for c in model.constraints() {
        let mut row = vec![Rational::zero(); vars.len()];
        for (v, coeff) in &c.terms {
            row[index[v]] = coeff.clone();
        }
        problem.rows.push((row, c.relation, c.rhs.clone()));
    }
    (vars, problem)
}

/// Exact feasibility of the continuous relaxation (all variables `>= 0`).
pub fn lp_feasible(model: &CaseModel) -> LpResult {
    if !model.pin_conflicts().is_empty() {
        return LpResult { kind: Feasibility::Infeasible, witness: None };
    }
    let (vars, problem) = lp_problem(model);
    match find_feasible_point(&problem) {
        Some(x) => LpResult { kind: Feasibility::Feasible, witness: Some(vars.into_iter().zip(x).collect()) },
        None => LpResult { kind: Feasibility::Infeasible, witness: None },
    }
}

/// Upper bounds implied by single rows: for a `=` or `<=` row whose
/// coefficients and right side are all nonnegative, every variable with a
/// positive coefficient `a` satisfies `s <= ⌊rhs / a⌋`.
pub fn derived_upper_bounds(model: &CaseModel) -> BTreeMap<VarId, BigInt> {
    let mut bounds: BTreeMap<VarId, BigInt> = BTreeMap::new();
    for c in model.constraints() {
        if !matches!(c.relation, Relation::Eq | Relation::Le) || c.rhs.is_negative() {
            continue;
        }
        if c.terms.values().any(Signed::is_negative) {
            continue;
        }
        for (v, a) in &c.terms {
            let cap = (&c.rhs / a).floor().to_integer();
            bounds.entry(*v).and_modify(|b| *b = b.clone().min(cap.clone())).or_insert(cap);
        }
    }
    bounds
}

struct Node {
    lower: Vec<Rational>,
    upper: Vec<Option<Rational>>,
}

/// Depth-first branch-and-bound on the exact relaxation.
///
/// Branches on the most fractional variable (fractional part closest to
/// 1/2, ties to the smallest `VarId`), exploring `s <= ⌊v⌋` before
/// `s >= ⌈v⌉`. Every variable must have a finite derived upper bound, which
/// makes the search tree finite.
pub fn ilp_feasible(model: &CaseModel) -> Result<IlpResult, SolverError> {
    let mut result =
        IlpResult { kind: Feasibility::Infeasible, witness: None, nodes_explored: 0, pruned_infeasible: 0 };
    if !model.pin_conflicts().is_empty() {
        return Ok(result);
    }
    let (vars, base) = lp_problem(model);
    // An infeasible relaxation settles the case before any caps are needed.
    if find_feasible_point(&base).is_none() {
        result.nodes_explored = 1;
        result.pruned_infeasible = 1;
        return Ok(result);
    }
    let caps = derived_upper_bounds(model);
    let mut root = Node { lower: base.lower.clone(), upper: base.upper.clone() };
    for (k, v) in vars.iter().enumerate() {
        let cap = caps.get(v).ok_or(SolverError::Unbounded(*v))?;
        root.upper[k] = Some(Rational::from_integer(cap.clone()));
    }

    let half = rat(1, 2);
    let mut stack = vec![root];
    while let Some(node) = stack.pop() {
        result.nodes_explored += 1;
        let mut problem = base.clone();
        problem.lower = node.lower.clone();
        problem.upper = node.upper.clone();
        let Some(x) = find_feasible_point(&problem) else {
            result.pruned_infeasible += 1;
            continue;
        };
        let branch = x
            .iter()
            .enumerate()
            .filter(|(_, v)| !fractional_part(v).is_zero())
            .min_by(|(ka, a), (kb, b)| {
                let da = (fractional_part(a) - &half).abs();
                let db = (fractional_part(b) - &half).abs();
                da.cmp(&db).then(ka.cmp(kb))
            })
            .map(|(k, v)| (k, v.clone()));
        match branch {
            None => {
                let witness: Assignment = vars
                    .iter()
                    .zip(&x)
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(var, v)| (*var, v.to_integer().to_u64().expect("nonnegative and bounded")))
                    .collect();
                let check = verify_assignment(model, &witness);
                if !check.satisfied {
                    return Err(SolverError::WitnessRejected(check.violated));
                }
                result.kind = Feasibility::Feasible;
                result.witness = Some(witness);
                return Ok(result);
            }
            Some((k, value)) => {
                let mut up = Node { lower: node.lower.clone(), upper: node.upper.clone() };
                up.lower[k] = Rational::from_integer(value.ceil().to_integer());
                let mut down = node;
                down.upper[k] = Some(Rational::from_integer(value.floor().to_integer()));
                stack.push(up);
                stack.push(down);
            }
        }
    }
    Ok(result)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlueVariant {
    /// `blue = n`
    Equal,
    /// `blue = n - 1`
    OneFewer,
    Both,
}

impl BlueVariant {
    fn blues(self, n: usize) -> Vec<usize> {
        match self {
            BlueVariant::Equal => vec![n],
            BlueVariant::OneFewer => vec![n - 1],
            BlueVariant::Both => vec![n, n - 1],
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanEntry {
    pub spec: CaseSpec,
    pub result: IlpResult,
}

/// Decides every case `(n, blue)` with `min_n <= n <= max_n`, ordered by
/// `(n, blue)`. With `jobs > 1` the cases are distributed over a thread pool;
/// per-case results do not depend on the number of jobs.
pub fn scan(min_n: usize, max_n: usize, variant: BlueVariant, jobs: usize) -> Result<Vec<ScanEntry>, SolverError> {
    if min_n < 3 || min_n > max_n {
        return Err(SolverError::BadRange(min_n, max_n));
    }
    let mut specs = Vec::new();
    for n in min_n..=max_n {
        for blue in variant.blues(n) {
            specs.push(CaseSpec::new(n, blue)?);
        }
    }
    specs.sort();
    let run = |spec: &CaseSpec| -> Result<ScanEntry, SolverError> {
        let model = build_model(*spec, &[])?;
        Ok(ScanEntry { spec: *spec, result: ilp_feasible(&model)? })
    };
    if jobs <= 1 {
        return specs.iter().map(run).collect();
    }
    let pool =
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|e| SolverError::Pool(e.to_string()))?;
    pool.install(|| specs.par_iter().map(run).collect())
}

/// Readable form of a rational witness, for reports.
pub fn describe_lp_witness(witness: &BTreeMap<VarId, Rational>) -> BTreeMap<String, String> {
    witness.iter().filter(|(_, v)| !v.is_zero()).map(|(k, v)| (k.lp_name(), fmt_rational(v))).collect()
}
