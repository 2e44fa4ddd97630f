//! Exact refutation of the two residual cases, (6 red, 5 blue) and
//! (8 red, 7 blue), left open by the feasibility scan.

mod projmap;

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::bounds::CaseSpec;
use crate::exactmath::{
    det3, fmt_rational, int, rat, solve_linear, LinSystem, Poly, Rational, Relation, SolveKind, SolveOutcome,
};
use crate::geometry::{canonical_line, collinear, intersection, ProjPoint};
use crate::model::{build_model, Pin, VarId};
use crate::solver::{ilp_feasible, Feasibility};
pub use projmap::{projective_map_from_4pts, ProjMap};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CasesError {
    #[error("{which} quadruple is degenerate: points {triple:?} are collinear")]
    Degenerate { which: &'static str, triple: [usize; 3] },
    #[error("matrix is singular")]
    Singular,
    #[error("map verification failed: {0}")]
    Unverified(String),
    #[error("not a bijection onto {{4, 5, 6}}: {0:?}")]
    Bijection([usize; 3]),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepVerdict {
    AsExpected,
    Deviated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub label: String,
    pub claim: String,
    pub verdict: StepVerdict,
    pub data: BTreeMap<String, String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Overall {
    Refuted,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefutationReport {
    pub case_id: String,
    pub steps: Vec<Step>,
    pub notes: Vec<String>,
    pub overall: Overall,
}

impl RefutationReport {
    fn new(case_id: &str, steps: Vec<Step>, notes: Vec<String>) -> Self {
        let overall =
            if steps.iter().all(|s| s.verdict == StepVerdict::AsExpected) { Overall::Refuted } else { Overall::Failed };
        RefutationReport { case_id: case_id.to_string(), steps, notes, overall }
    }

    pub fn is_refuted(&self) -> bool {
        self.overall == Overall::Refuted
    }
}

fn step(label: &str, claim: &str, ok: bool, data: BTreeMap<String, String>) -> Step {
    Step {
        label: label.to_string(),
        claim: claim.to_string(),
        verdict: if ok { StepVerdict::AsExpected } else { StepVerdict::Deviated },
        data,
    }
}

fn pin_step(spec: CaseSpec, pin: Pin) -> Step {
    let label = format!("ilp_{}", pin.label());
    let claim = format!("{} red, {} blue with {} has no integer solution", spec.n, spec.blue, pin);
    let mut data = BTreeMap::new();
    let outcome =
        build_model(spec, &[pin]).map_err(|e| e.to_string()).and_then(|m| ilp_feasible(&m).map_err(|e| e.to_string()));
    let ok = match outcome {
        Ok(res) => {
            data.insert("nodes_explored".into(), res.nodes_explored.to_string());
            data.insert("pruned_infeasible".into(), res.pruned_infeasible.to_string());
            if let Some(w) = &res.witness {
                let text = w.iter().filter(|(_, v)| **v > 0).map(|(k, v)| format!("{}={v}", k.lp_name())).join(", ");
                data.insert("witness".into(), text);
            }
            data.insert("feasibility".into(), if res.is_feasible() { "feasible" } else { "infeasible" }.into());
            res.kind == Feasibility::Infeasible
        }
        Err(e) => {
            data.insert("error".into(), e);
            false
        }
    };
    step(&label, &claim, ok, data)
}

const VARS: [&str; 2] = ["a", "c"];

type PolyPoint = [Poly; 3];

fn k(v: i64) -> Poly {
    Poly::constant(&VARS, int(v))
}

fn var(name: &str) -> Poly {
    Poly::var(&VARS, name)
}

fn affine(x: Poly, y: Poly) -> PolyPoint {
    [x, y, k(1)]
}

fn lit(x: i64, y: i64) -> PolyPoint {
    affine(k(x), k(y))
}

fn det_points(p: &PolyPoint, q: &PolyPoint, r: &PolyPoint) -> Poly {
    det3(&[p.clone(), q.clone(), r.clone()])
}

/// Named points of the (6,5) frame, with `b3 = (a, 1)` and `b4 = (a, -1)`.
struct Frame65 {
    r: [PolyPoint; 6],
    b3: PolyPoint,
    b4: PolyPoint,
}

impl Frame65 {
    fn new() -> Self {
        let half = rat(1, 2);
        let r5 = affine((var("a") - k(1)).scale(&half), k(0));
        let r6 = affine((var("a") + k(1)).scale(&half), k(0));
        Frame65 {
            r: [lit(-1, 1), lit(1, 1), lit(-1, -1), lit(1, -1), r5, r6],
            b3: affine(var("a"), k(1)),
            b4: affine(var("a"), k(-1)),
        }
    }

    fn red(&self, i: usize) -> &PolyPoint {
        &self.r[i - 1]
    }
}

fn show(p: &Poly) -> String {
    p.to_string()
}

fn frame_step() -> Step {
    let corners = [(-1, 1), (1, 1), (-1, -1), (1, -1)].map(|(x, y)| ProjPoint::affine_int(x, y));
    let mut data = BTreeMap::new();
    let mut ok = true;

    // Any four reds in general position can be sent to the square corners.
    let generic = [(0, 0), (3, 1), (1, 4), (5, 7)].map(|(x, y)| ProjPoint::affine_int(x, y));
    match projective_map_from_4pts(&generic, &corners) {
        Ok(map) => {
            let m = map.matrix();
            let rows = m.iter().map(|row| row.iter().map(fmt_rational).join(" ")).join("; ");
            data.insert("map_from_sample_quadruple".into(), rows);
        }
        Err(e) => {
            ok = false;
            data.insert("map_error".into(), e.to_string());
        }
    }

    let [r1, r2, r3, r4] = &corners;
    let join = |p: &ProjPoint, q: &ProjPoint| canonical_line(p, q).expect("distinct corners");
    let b1 = intersection(&join(r1, r2), &join(r3, r4)).expect("distinct lines");
    let b2 = intersection(&join(r1, r4), &join(r2, r3)).expect("distinct lines");
    let expected_b1 = ProjPoint::new(1, 0, 0).expect("nonzero");
    let expected_b2 = ProjPoint::affine_int(0, 0);
    ok &= b1 == expected_b1 && b2 == expected_b2;
    ok &= collinear(&b1, r1, r2) && collinear(&b1, r3, r4) && collinear(&b2, r1, r4) && collinear(&b2, r2, r3);
    let l = join(&b1, &b2);
    data.insert("b1".into(), b1.to_string());
    data.insert("b2".into(), b2.to_string());
    data.insert("line_b1_b2".into(), l.to_string());

    // r5 and r6 lie on L and on both blue-red lines through b3 and b4.
    let f = Frame65::new();
    let incidences = [
        ("r5 on b3r3", det_points(f.red(5), &f.b3, f.red(3))),
        ("r5 on b4r1", det_points(f.red(5), &f.b4, f.red(1))),
        ("r6 on b3r4", det_points(f.red(6), &f.b3, f.red(4))),
        ("r6 on b4r2", det_points(f.red(6), &f.b4, f.red(2))),
    ];
    for (name, d) in &incidences {
        ok &= d.is_zero();
        data.insert(format!("det[{name}]"), show(d));
    }
    data.insert("r5".into(), "((a - 1)/2, 0)".into());
    data.insert("r6".into(), "((a + 1)/2, 0)".into());
    step("frame", "r1..r4 at the square corners give b1 = [1:0:0], b2 = (0, 0); r5, r6 are determined by a", ok, data)
}

/// Eliminates `a` between two polynomials that agree on `ac`, returning the
/// linear root `a = f(c)` and the eliminant normalized to a positive leading
/// coefficient.
fn eliminate(e1: &Poly, e2: &Poly) -> Option<(Poly, Poly)> {
    let diff = e1 - e2;
    let root = diff.linear_root_in("a")?;
    let mut eliminant = e2.substitute("a", &root);
    let coeffs = eliminant.univariate_coeffs("c")?;
    if coeffs.last().is_some_and(|lead| lead.is_negative()) {
        eliminant = -eliminant;
    }
    Some((root, eliminant))
}

fn branch_step(
    label: &str,
    claim: &str,
    b5: PolyPoint,
    first: (&PolyPoint, &PolyPoint),
    second: (&PolyPoint, &PolyPoint),
    expected: (Poly, Poly),
) -> Step {
    let e1 = det_points(&b5, first.0, first.1);
    let e2 = det_points(&b5, second.0, second.1);
    let mut data = BTreeMap::new();
    data.insert("e1".into(), show(&e1));
    data.insert("e2".into(), show(&e2));
    data.insert("e1 - e2".into(), show(&(&e1 - &e2)));
    let mut ok = e1 == expected.0 && e2 == expected.1;
    match eliminate(&e1, &e2) {
        Some((root, eliminant)) => {
            data.insert("a".into(), show(&root));
            data.insert("eliminant".into(), show(&eliminant));
            ok &= root == var("c").scale(&int(3));
            ok &= eliminant == &var("c").pow(2).scale(&int(3)) + &k(1);
            match eliminant.univariate_coeffs("c").as_deref() {
                Some([c0, c1, c2]) => {
                    let disc = c1 * c1 - int(4) * c2 * c0;
                    ok &= disc.is_negative() && c2.is_positive() && c0.is_positive();
                    data.insert("discriminant".into(), fmt_rational(&disc));
                    data.insert("real_roots".into(), if disc.is_negative() { "0" } else { "some" }.into());
                }
                _ => ok = false,
            }
        }
        None => {
            ok = false;
            data.insert("a".into(), "not linear in a".into());
        }
    }
    step(label, claim, ok, data)
}

/// Each condition is linear in `a`; the pair has no common solution.
fn infinity_step(label: &str, claim: &str, direction: PolyPoint, lines: [(&PolyPoint, &PolyPoint); 2]) -> Step {
    let mut data = BTreeMap::new();
    let mut sys = LinSystem::new(1);
    let mut ok = true;
    let mut roots = Vec::new();
    for (idx, (p, q)) in lines.iter().enumerate() {
        let d = det_points(&direction, p, q);
        data.insert(format!("condition_{}", idx + 1), format!("{} = 0", show(&d)));
        let slope = d.coeff(&[("a", 1)]);
        let constant = d.coeff(&[]);
        ok &= d.degree_in("a") == 1 && d.degree_in("c") == 0;
        if !slope.is_zero() {
            roots.push(-&constant / &slope);
        }
        sys.push(vec![slope], Relation::Eq, -constant).expect("width 1");
    }
    ok &= roots == vec![int(3), int(-3)];
    data.insert("a_values".into(), roots.iter().map(fmt_rational).join(", "));
    match solve_linear(&sys) {
        Ok(out) => {
            ok &= out.kind == SolveKind::Infeasible;
            data.insert("joint_system".into(), format!("{:?}", out.kind).to_lowercase());
        }
        Err(e) => {
            ok = false;
            data.insert("error".into(), e.to_string());
        }
    }
    step(label, claim, ok, data)
}

/// Machine-checked refutation of 6 red and 5 blue points with the pinned
/// line profile `s_2_2 = 6`, `s_2_1 = 3`.
pub fn refute_6_5() -> RefutationReport {
    let spec = CaseSpec::new(6, 5).expect("valid case");
    let v22 = VarId::new(2, 2);
    let v21 = VarId::new(2, 1);
    let mut steps = vec![
        pin_step(spec, Pin::new(v22, Relation::Le, 5)),
        pin_step(spec, Pin::new(v22, Relation::Ge, 7)),
        pin_step(spec, Pin::new(v21, Relation::Le, 2)),
        frame_step(),
    ];
    let f = Frame65::new();
    let (a, c) = (var("a"), var("c"));
    let ac = &a * &c;
    let c3 = c.scale(&int(3));
    steps.push(branch_step(
        "branch_b5_on_r2r3_r4r6_r5r1",
        "b5 = (c, c) on b4r1 and b3r4 forces a = 3c and 3c^2 + 1 = 0",
        affine(c.clone(), c.clone()),
        (&f.b4, f.red(1)),
        (&f.b3, f.red(4)),
        (&(&(&a - &k(1)) - &c3) - &ac, &(&(&c3 - &a) - &k(1)) - &ac),
    ));
    steps.push(branch_step(
        "branch_b5_on_r1r4_r6r2_r3r5",
        "b5 = (c, -c) on b4r2 and b3r3 forces a = 3c and 3c^2 + 1 = 0",
        affine(c.clone(), -&c),
        (&f.b4, f.red(2)),
        (&f.b3, f.red(3)),
        (&(&(&ac + &a) + &k(1)) - &c3, &(&(&ac - &a) + &k(1)) + &c3),
    ));
    let at_inf = |x: i64, y: i64| [k(x), k(y), k(0)];
    steps.push(infinity_step(
        "b5_at_infinity_on_r2r3",
        "r4r6 and r5r1 both parallel to (1, 1) needs a = 3 and a = -3",
        at_inf(1, 1),
        [(f.red(4), f.red(6)), (f.red(5), f.red(1))],
    ));
    steps.push(infinity_step(
        "b5_at_infinity_on_r1r4",
        "r6r2 and r3r5 both parallel to (1, -1) needs a = 3 and a = -3",
        at_inf(1, -1),
        [(f.red(6), f.red(2)), (f.red(3), f.red(5))],
    ));
    RefutationReport::new("6_5", steps, Vec::new())
}

fn check_bijection(sigma: [usize; 3]) -> Result<(), CasesError> {
    let mut sorted = sigma;
    sorted.sort_unstable();
    if sorted == [4, 5, 6] {
        Ok(())
    } else {
        Err(CasesError::Bijection(sigma))
    }
}

const DISPLACEMENT_WIDTH: usize = 8;
const D2: usize = 6;
const D3: usize = 7;

/// Constant-displacement system over `x1..x6, d2, d3`: bottom reds `x1..x3`
/// on one row, top reds `x4..x6` on the other, and `x_{σ(i)} - x_i = d` for
/// both matchings. With `distinct_directions` the row `d2 - d3 ≠ 0` is added.
pub fn displacement_system(
    sigma2: [usize; 3],
    sigma3: [usize; 3],
    distinct_directions: bool,
) -> Result<LinSystem, CasesError> {
    check_bijection(sigma2)?;
    check_bijection(sigma3)?;
    let mut sys = LinSystem::new(DISPLACEMENT_WIDTH);
    for (sigma, d) in [(sigma2, D2), (sigma3, D3)] {
        for (i, &top) in sigma.iter().enumerate() {
            let mut row = vec![0i64; DISPLACEMENT_WIDTH];
            row[top - 1] = 1;
            row[i] = -1;
            row[d] = -1;
            sys.push_int(&row, Relation::Eq, 0).expect("fixed width");
        }
    }
    if distinct_directions {
        let mut row = vec![0i64; DISPLACEMENT_WIDTH];
        row[D2] = 1;
        row[D3] = -1;
        sys.push_int(&row, Relation::Ne, 0).expect("fixed width");
    }
    Ok(sys)
}

/// Exact feasibility of the displacement system for the pair of matchings,
/// with the two directions required to differ.
pub fn match_displacement(sigma2: [usize; 3], sigma3: [usize; 3]) -> Result<SolveOutcome, CasesError> {
    let sys = displacement_system(sigma2, sigma3, true)?;
    Ok(solve_linear(&sys).expect("only = and ≠ rows"))
}

/// The summation certificate: the σ₂ rows minus the σ₃ rows combine to
/// `3 d3 - 3 d2 = 0`.
fn summation_certificate(sys: &LinSystem) -> Vec<Rational> {
    let mut combo = vec![Rational::zero(); DISPLACEMENT_WIDTH + 1];
    for (idx, (row, rel, rhs)) in sys.rows().enumerate() {
        if rel != Relation::Eq {
            continue;
        }
        let sign = if idx < 3 { int(1) } else { int(-1) };
        for (acc, x) in combo.iter_mut().zip(row.iter().chain(std::iter::once(rhs))) {
            *acc += &sign * x;
        }
    }
    combo
}

/// All bijections `{1,2,3} → {4,5,6}`, in lexicographic order.
pub fn all_matchings() -> Vec<[usize; 3]> {
    (4..=6).permutations(3).map(|p| [p[0], p[1], p[2]]).collect()
}

/// Machine-checked refutation of 8 red and 7 blue points with the pinned
/// profile `s_2_3 >= 1`.
pub fn refute_8_7() -> RefutationReport {
    let spec = CaseSpec::new(8, 7).expect("valid case");
    let mut steps = vec![pin_step(spec, Pin::new(VarId::new(2, 3), Relation::Eq, 0))];

    let mut data = BTreeMap::new();
    data.insert("line_L".into(), "sent to the line at infinity; b1, b2, b3 become directions".into());
    data.insert(
        "rows".into(),
        "the two lines of 3 reds through b1 become y = 0 (x1, x2, x3) and y = 1 (x4, x5, x6)".into(),
    );
    data.insert(
        "matchings".into(),
        "each 2-red line through b2 (or b3) joins a bottom red to a top red with displacement d2 (or d3)".into(),
    );
    steps.push(step(
        "reduction",
        "documented reduction: an affine map fixing parallel classes normalizes the two rows of reds",
        true,
        data,
    ));

    let identity = [4, 5, 6];
    let mut data = BTreeMap::new();
    let control = displacement_system(identity, identity, false).map(|s| solve_linear(&s).expect("only = rows"));
    let ok = match &control {
        Ok(out) => {
            data.insert("kind".into(), format!("{:?}", out.kind).to_lowercase());
            data.insert("dimension".into(), out.dimension.to_string());
            out.is_feasible() && out.dimension >= 1
        }
        Err(e) => {
            data.insert("error".into(), e.to_string());
            false
        }
    };
    steps.push(step("control_without_distinct_directions", "dropping d2 != d3 leaves a feasible system", ok, data));

    let mut data = BTreeMap::new();
    let mut infeasible = 0;
    let mut certified = 0;
    let mut deviations = Vec::new();
    let mut expected_certificate = vec![Rational::zero(); DISPLACEMENT_WIDTH + 1];
    expected_certificate[D2] = int(-3);
    expected_certificate[D3] = int(3);
    let pairs: Vec<_> = all_matchings().into_iter().cartesian_product(all_matchings()).collect();
    for (s2, s3) in &pairs {
        let sys = displacement_system(*s2, *s3, true).expect("valid matchings");
        let out = solve_linear(&sys).expect("only = and ≠ rows");
        if out.kind == SolveKind::Infeasible {
            infeasible += 1;
        } else {
            deviations.push(format!("{s2:?}/{s3:?}"));
        }
        if summation_certificate(&sys) == expected_certificate {
            certified += 1;
        }
    }
    data.insert("pairs".into(), pairs.len().to_string());
    data.insert("infeasible".into(), infeasible.to_string());
    data.insert("certificate".into(), "sum(sigma2 rows) - sum(sigma3 rows) = 3 d3 - 3 d2 = 0".into());
    data.insert("certified".into(), certified.to_string());
    if !deviations.is_empty() {
        data.insert("feasible_pairs".into(), deviations.join(" "));
    }
    steps.push(step(
        "displacement_all_matchings",
        "no pair of matchings admits two distinct parallel directions",
        pairs.len() == 36 && infeasible == 36 && certified == 36,
        data,
    ));

    let notes = vec![
        "only the profile with 2 lines of 3 reds through b1 and 3 lines of 2 reds through b2 and b3 is refuted; other distributions of the 6 reds are not enumerated".to_string(),
    ];
    RefutationReport::new("8_7", steps, notes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn six_five_refuted() {
        let report = refute_6_5();
        for s in &report.steps {
            assert_eq!(s.verdict, StepVerdict::AsExpected, "{} {:?}", s.label, s.data);
        }
        assert!(report.is_refuted());
        assert_eq!(report.steps.len(), 8);
    }

    #[test]
    fn six_five_elimination_values() {
        let report = refute_6_5();
        let branch = report.steps.iter().find(|s| s.label == "branch_b5_on_r2r3_r4r6_r5r1").unwrap();
        assert_eq!(branch.data["a"], "3c");
        assert_eq!(branch.data["eliminant"], "3c^2 + 1");
        assert_eq!(branch.data["discriminant"], "-12");
        assert_eq!(branch.data["e1 - e2"], "2a - 6c");
        let mirror = report.steps.iter().find(|s| s.label == "branch_b5_on_r1r4_r6r2_r3r5").unwrap();
        assert_eq!(mirror.data["eliminant"], "3c^2 + 1");
        let inf = report.steps.iter().find(|s| s.label == "b5_at_infinity_on_r2r3").unwrap();
        assert_eq!(inf.data["a_values"], "3, -3");
        assert_eq!(inf.data["joint_system"], "infeasible");
    }

    #[test]
    fn six_five_frame() {
        let f = frame_step();
        assert_eq!(f.verdict, StepVerdict::AsExpected, "{:?}", f.data);
        assert_eq!(f.data["b1"], "[1:0:0]");
        assert_eq!(f.data["b2"], "(0, 0)");
    }

    #[test]
    fn eight_seven_refuted() {
        let report = refute_8_7();
        for s in &report.steps {
            assert_eq!(s.verdict, StepVerdict::AsExpected, "{} {:?}", s.label, s.data);
        }
        assert!(report.is_refuted());
        assert_eq!(report.notes.len(), 1);
    }

    #[test]
    fn reports_are_stable() {
        assert_eq!(refute_6_5(), refute_6_5());
        assert_eq!(serde_json::to_string(&refute_8_7()).unwrap(), serde_json::to_string(&refute_8_7()).unwrap());
    }

    #[test]
    fn displacement_examples() {
        assert_eq!(match_displacement([4, 5, 6], [4, 5, 6]).unwrap().kind, SolveKind::Infeasible);
        assert_eq!(match_displacement([4, 5, 6], [5, 6, 4]).unwrap().kind, SolveKind::Infeasible);
        assert_eq!(match_displacement([4, 4, 6], [4, 5, 6]), Err(CasesError::Bijection([4, 4, 6])));
        assert_eq!(match_displacement([1, 2, 3], [4, 5, 6]), Err(CasesError::Bijection([1, 2, 3])));
    }

    #[test]
    fn every_pair_infeasible_but_feasible_without_distinct_row() {
        let matchings = all_matchings();
        assert_eq!(matchings.len(), 6);
        for s2 in &matchings {
            for s3 in &matchings {
                assert!(!match_displacement(*s2, *s3).unwrap().is_feasible());
                let relaxed = solve_linear(&displacement_system(*s2, *s3, false).unwrap()).unwrap();
                assert!(relaxed.is_feasible());
                assert!(relaxed.dimension >= 1);
            }
        }
    }

    #[test]
    fn displacement_oracle_by_sums() {
        // Independent check: a solution of the relaxed system always has d2 = d3.
        let relaxed = solve_linear(&displacement_system([4, 5, 6], [6, 4, 5], false).unwrap()).unwrap();
        let w = relaxed.witness.unwrap();
        let bottom: Rational = w[0..3].iter().sum();
        let top: Rational = w[3..6].iter().sum();
        assert_eq!(&top - &bottom, int(3) * &w[D2]);
        assert_eq!(w[D2], w[D3]);
    }

    #[test]
    fn eliminant_positive_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let elim = &var("c").pow(2).scale(&int(3)) + &k(1);
        for _ in 0..1000 {
            let den: i64 = rng.gen_range(1..=1000);
            let num: i64 = rng.gen_range(-10 * den..=10 * den);
            let c = rat(num, den);
            let value = elim.eval(&BTreeMap::from([("c".to_string(), c.clone())])).unwrap();
            assert!(value.is_positive());
            assert_eq!(value, int(3) * &c * &c + int(1));
        }
    }
}
