//! The integer feasibility system describing a minimal counterexample.
//!
//! Variables `s_{i,j}` count the lines with exactly `i` red and `j` blue
//! points. A case `(n, blue)` keeps only the variables that survive the
//! zeroing rules, then adds the pair-counting equalities, the incidence
//! inequalities, and the per-point line budgets.

pub mod lp;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::{tricky_bound, CaseSpec, LineProfile};
use crate::exactmath::{int, rat, Rational, Relation};

pub use lp::{export_lp_text, parse_lp_text, LpText};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("variable {0} is outside the case (needs i <= n, j <= blue, i + j >= 2)")]
    UnknownVariable(VarId),
    #[error("cannot parse pin `{0}` (expected e.g. s_2_3=0, s_2_2<=5, s_2_1>=3)")]
    BadPin(String),
    #[error("constraint `{label}` uses inactive variable {var}")]
    InactiveVariable { label: String, var: VarId },
    #[error("LP text, line {line}: {message}")]
    LpParse { line: usize, message: String },
}

/// `s_{i,j}`: lines with `i` red and `j` blue points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId {
    pub i: usize,
    pub j: usize,
}

impl VarId {
    pub fn new(i: usize, j: usize) -> Self {
        VarId { i, j }
    }

    pub fn size(&self) -> usize {
        self.i + self.j
    }

    pub fn bichromatic(&self) -> bool {
        self.i >= 1 && self.j >= 1
    }

    pub fn lp_name(&self) -> String {
        format!("s_{}_{}", self.i, self.j)
    }

    pub fn parse_lp_name(name: &str) -> Option<VarId> {
        let rest = name.strip_prefix("s_")?;
        let (i, j) = rest.split_once('_')?;
        Some(VarId { i: i.parse().ok()?, j: j.parse().ok()? })
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.lp_name())
    }
}

impl Serialize for VarId {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&self.lp_name())
    }
}

/// The source of each constraint or zeroing rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintGroup {
    RedPairs,
    BluePairs,
    BichromaticPairs,
    Melchior,
    Hirzebruch,
    /// `i + j >= n`: no line holds `n` points.
    CollinearZeroing,
    /// No line with a single red point (nor a single blue one when balanced).
    OneRedZeroing,
    /// `i² + i + j² + j >= 2|P| - 2`.
    Imp21Zeroing,
    /// Each point lies on at most `⌊other/2⌋` lines with two or more points
    /// of the other colour.
    PointLineBudget,
    /// The line bound of `tricky_bound` exceeds `|P| - 2`.
    TrickyZeroing,
    /// A minimal counterexample has exactly `|P| - 2` bichromatic lines.
    OneOffLines,
    Pin,
}

impl ConstraintGroup {
    /// The eleven model groups, in declaration order (pins excluded).
    pub const MODEL_GROUPS: [ConstraintGroup; 11] = [
        ConstraintGroup::RedPairs,
        ConstraintGroup::BluePairs,
        ConstraintGroup::BichromaticPairs,
        ConstraintGroup::Melchior,
        ConstraintGroup::Hirzebruch,
        ConstraintGroup::CollinearZeroing,
        ConstraintGroup::OneRedZeroing,
        ConstraintGroup::Imp21Zeroing,
        ConstraintGroup::PointLineBudget,
        ConstraintGroup::TrickyZeroing,
        ConstraintGroup::OneOffLines,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ConstraintGroup::RedPairs => "red_pairs",
            ConstraintGroup::BluePairs => "blue_pairs",
            ConstraintGroup::BichromaticPairs => "bichromatic_pairs",
            ConstraintGroup::Melchior => "melchior",
            ConstraintGroup::Hirzebruch => "hirzebruch",
            ConstraintGroup::CollinearZeroing => "zero_collinear",
            ConstraintGroup::OneRedZeroing => "zero_one_red",
            ConstraintGroup::Imp21Zeroing => "zero_imp21",
            ConstraintGroup::PointLineBudget => "point_line_budget",
            ConstraintGroup::TrickyZeroing => "zero_tricky",
            ConstraintGroup::OneOffLines => "one_off_lines",
            ConstraintGroup::Pin => "pin",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinConstraint {
    pub terms: BTreeMap<VarId, Rational>,
    pub relation: Relation,
    pub rhs: Rational,
    pub group: ConstraintGroup,
    pub label: String,
}

impl LinConstraint {
    pub fn lhs_at(&self, value: impl Fn(VarId) -> Rational) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, (v, c)| acc + c * value(*v))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pin {
    pub var: VarId,
    pub relation: Relation,
    pub value: i64,
}

impl Pin {
    pub fn new(var: VarId, relation: Relation, value: i64) -> Self {
        Pin { var, relation, value }
    }

    pub fn label(&self) -> String {
        let op = match self.relation {
            Relation::Eq => "eq",
            Relation::Le => "le",
            Relation::Ge => "ge",
            Relation::Ne => "ne",
        };
        format!("pin_{}_{}_{}", self.var.lp_name(), op, self.value)
    }
}

impl fmt::Display for Pin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.var, self.relation.symbol(), self.value)
    }
}

impl FromStr for Pin {
    type Err = ModelError;

    fn from_str(text: &str) -> Result<Self, ModelError> {
        let bad = || ModelError::BadPin(text.to_string());
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let (name, relation, value) = if let Some((n, v)) = compact.split_once("<=") {
            (n, Relation::Le, v)
        } else if let Some((n, v)) = compact.split_once(">=") {
            (n, Relation::Ge, v)
        } else if let Some((n, v)) = compact.split_once('=') {
            (n, Relation::Eq, v)
        } else {
            return Err(bad());
        };
        let var = VarId::parse_lp_name(name).ok_or_else(bad)?;
        let value = value.parse().map_err(|_| bad())?;
        Ok(Pin { var, relation, value })
    }
}

impl Serialize for Pin {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug)]
pub struct CaseModel {
    spec: CaseSpec,
    variables: BTreeSet<VarId>,
    zeroed: BTreeMap<VarId, Vec<ConstraintGroup>>,
    constraints: Vec<LinConstraint>,
    pins: Vec<Pin>,
    /// Pins that force a zeroed variable away from zero.
    pin_conflicts: Vec<String>,
}

fn choose2(k: usize) -> i64 {
    (k * k.saturating_sub(1) / 2) as i64
}

/// All `s_{i,j}` with `i <= n`, `j <= blue`, `i + j >= 2`, in lexicographic order.
pub fn variable_universe(spec: &CaseSpec) -> Vec<VarId> {
    (0..=spec.n).flat_map(|i| (0..=spec.blue).map(move |j| VarId::new(i, j))).filter(|v| v.size() >= 2).collect()
}

/// Reasons, in rule order, why `var` must be zero in a minimal counterexample.
pub fn zeroing_reasons(spec: &CaseSpec, var: VarId) -> Vec<ConstraintGroup> {
    let n = spec.n;
    let total = spec.total();
    let VarId { i, j } = var;
    let mut reasons = Vec::new();
    if i + j >= n {
        reasons.push(ConstraintGroup::CollinearZeroing);
    }
    if i == 1 || (j == 1 && spec.balanced()) {
        reasons.push(ConstraintGroup::OneRedZeroing);
    }
    if i * i + i + j * j + j >= 2 * total - 2 {
        reasons.push(ConstraintGroup::Imp21Zeroing);
    }
    if var.bichromatic() {
        let profile = LineProfile { r: i, b: j };
        if tricky_bound(spec, &profile) > total - 2 {
            reasons.push(ConstraintGroup::TrickyZeroing);
        }
    }
    reasons
}

impl CaseModel {
    pub fn spec(&self) -> &CaseSpec {
        &self.spec
    }

    pub fn variables(&self) -> &BTreeSet<VarId> {
        &self.variables
    }

    pub fn zeroed(&self) -> &BTreeMap<VarId, Vec<ConstraintGroup>> {
        &self.zeroed
    }

    pub fn constraints(&self) -> &[LinConstraint] {
        &self.constraints
    }

    pub fn pins(&self) -> &[Pin] {
        &self.pins
    }

    pub fn pin_conflicts(&self) -> &[String] {
        &self.pin_conflicts
    }

    /// Groups that appear either as a constraint or as a zeroing reason.
    pub fn groups_present(&self) -> BTreeSet<ConstraintGroup> {
        self.constraints.iter().map(|c| c.group).chain(self.zeroed.values().flatten().copied()).collect()
    }

    /// A model over explicit variables and constraints, for tests and ad hoc
    /// systems. Every constraint may only mention listed variables.
    pub fn custom(
        spec: CaseSpec,
        variables: BTreeSet<VarId>,
        constraints: Vec<LinConstraint>,
    ) -> Result<Self, ModelError> {
        for c in &constraints {
            if let Some(var) = c.terms.keys().find(|v| !variables.contains(v)) {
                return Err(ModelError::InactiveVariable { label: c.label.clone(), var: *var });
            }
        }
        Ok(CaseModel {
            spec,
            variables,
            zeroed: BTreeMap::new(),
            constraints,
            pins: Vec::new(),
            pin_conflicts: Vec::new(),
        })
    }

    /// Returns a copy with extra pins appended.
    pub fn with_pins(&self, pins: &[Pin]) -> Result<Self, ModelError> {
        let mut all = self.pins.clone();
        all.extend_from_slice(pins);
        build_model(self.spec, &all)
    }
}

pub fn build_model(spec: CaseSpec, pins: &[Pin]) -> Result<CaseModel, ModelError> {
    let universe = variable_universe(&spec);
    let mut variables = BTreeSet::new();
    let mut zeroed = BTreeMap::new();
    for &v in &universe {
        let reasons = zeroing_reasons(&spec, v);
        if reasons.is_empty() {
            variables.insert(v);
        } else {
            zeroed.insert(v, reasons);
        }
    }

    let (n, blue, total) = (spec.n, spec.blue, spec.total());
    let mut constraints = Vec::new();
    let mut push =
        |group: ConstraintGroup, label: &str, coeff: &dyn Fn(VarId) -> Rational, relation: Relation, rhs: Rational| {
            let terms: BTreeMap<VarId, Rational> =
                variables.iter().map(|&v| (v, coeff(v))).filter(|(_, c)| !c.is_zero()).collect();
            constraints.push(LinConstraint { terms, relation, rhs, group, label: label.to_string() });
        };

    use ConstraintGroup as G;
    push(G::RedPairs, "red_pairs", &|v| int(choose2(v.i)), Relation::Eq, int(choose2(n)));
    push(G::BluePairs, "blue_pairs", &|v| int(choose2(v.j)), Relation::Eq, int(choose2(blue)));
    push(G::BichromaticPairs, "bichromatic_pairs", &|v| int((v.i * v.j) as i64), Relation::Eq, int((n * blue) as i64));
    push(G::Melchior, "melchior", &|v| int(v.size() as i64 - 3), Relation::Le, int(-3));
    let hirzebruch = |v: VarId| match v.size() {
        2 => int(1),
        3 => rat(3, 4),
        4 => int(0),
        k => int(9 - 2 * k as i64),
    };
    push(G::Hirzebruch, "hirzebruch", &hirzebruch, Relation::Ge, int(total as i64));
    push(
        G::PointLineBudget,
        "point_line_budget_red",
        &|v| if v.j >= 2 { int(v.i as i64) } else { int(0) },
        Relation::Le,
        int((n * (blue / 2)) as i64),
    );
    push(
        G::PointLineBudget,
        "point_line_budget_blue",
        &|v| if v.i >= 2 { int(v.j as i64) } else { int(0) },
        Relation::Le,
        int((blue * (n / 2)) as i64),
    );
    push(
        G::OneOffLines,
        "one_off_lines",
        &|v| if v.bichromatic() { int(1) } else { int(0) },
        Relation::Eq,
        int(total as i64 - 2),
    );

    let mut pin_conflicts = Vec::new();
    for pin in pins {
        if !universe.contains(&pin.var) {
            return Err(ModelError::UnknownVariable(pin.var));
        }
        if variables.contains(&pin.var) {
            let terms = BTreeMap::from([(pin.var, int(1))]);
            constraints.push(LinConstraint {
                terms,
                relation: pin.relation,
                rhs: int(pin.value),
                group: G::Pin,
                label: pin.label(),
            });
        } else if !pin.relation.holds(&int(0), &int(pin.value)) {
            pin_conflicts.push(pin.label());
        }
    }

    Ok(CaseModel { spec, variables, zeroed, constraints, pins: pins.to_vec(), pin_conflicts })
}

/// Integer values for the `s_{i,j}`; absent variables read as zero.
pub type Assignment = BTreeMap<VarId, u64>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssignmentCheck {
    pub satisfied: bool,
    pub violated: Vec<String>,
}

/// Checks an integer assignment against every constraint, zeroing rule and
/// pin of the model, directly and without reference to any solver state.
pub fn verify_assignment(model: &CaseModel, assignment: &Assignment) -> AssignmentCheck {
    let mut violated = Vec::new();
    for (var, &value) in assignment {
        if value == 0 || model.variables.contains(var) {
            continue;
        }
        match model.zeroed.get(var) {
            Some(reasons) => violated.extend(reasons.iter().map(|g| format!("{}:{}", g.label(), var))),
            None => violated.push(format!("unknown_variable:{var}")),
        }
    }
    let value = |v: VarId| int(assignment.get(&v).copied().unwrap_or(0) as i64);
    for c in &model.constraints {
        if !c.relation.holds(&c.lhs_at(value), &c.rhs) {
            violated.push(c.label.clone());
        }
    }
    violated.extend(model.pin_conflicts.iter().cloned());
    AssignmentCheck { satisfied: violated.is_empty(), violated }
}
