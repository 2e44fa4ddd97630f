//! Acceptance suite: one PASS/FAIL line per criterion, with pinned limits.
//! Runs under `cargo test`; exits nonzero if any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use bichromatic::bounds::{imp21_bound, minimal_cx_inequality, tricky_bound, CaseSpec, LineProfile};
use bichromatic::cases::{all_matchings, match_displacement, refute_6_5, refute_8_7};
use bichromatic::cli::{run, Report};
use bichromatic::exactmath::{int, Relation, SolveKind};
use bichromatic::geometry::{
    build_tightness, check_dbe, check_hirzebruch, check_melchior, check_motzkin, classify, compute_stats,
    determined_lines, search_counterexamples, Classification, GeometryError, SearchMode,
};
use bichromatic::model::{build_model, export_lp_text, parse_lp_text, verify_assignment, Assignment, Pin, VarId};
use bichromatic::solver::ilp_feasible;
use common::*;

type Check = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Check, Duration);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn ac1_scan() -> Check {
    let out = run(["bichromatic", "scan", "--min-n", "3", "--max-n", "20", "--blue", "both", "--jobs", "1", "--json"]);
    ensure(out.code == 0, format!("exit code {}", out.code))?;
    let report = Report::from_json(&out.stdout).map_err(|e| e.to_string())?;
    let feasible: Vec<String> = report.results["feasible"]
        .as_array()
        .ok_or("no feasible list")?
        .iter()
        .map(|p| format!("({},{})", p[0], p[1]))
        .collect();
    let cases = report.results["cases"].as_array().map_or(0, Vec::len);
    ensure(cases == 36, format!("{cases} cases scanned"))?;
    ensure(feasible == ["(6,5)", "(8,7)"], format!("feasible {feasible:?}"))?;
    Ok(format!("36 cases, feasible exactly {}", feasible.join(" ")))
}

fn ac2_pins() -> Check {
    let pins = [(8, 7, "s_2_3=0"), (6, 5, "s_2_2<=5"), (6, 5, "s_2_2>=7"), (6, 5, "s_2_1<=2")];
    let mut parts = Vec::new();
    for (n, blue, pin) in pins {
        let start = Instant::now();
        let pin: Pin = pin.parse().map_err(|e| format!("{e}"))?;
        let model = build_model(CaseSpec::new(n, blue).unwrap(), &[pin]).map_err(|e| e.to_string())?;
        let res = ilp_feasible(&model).map_err(|e| e.to_string())?;
        let took = start.elapsed();
        ensure(!res.is_feasible(), format!("({n},{blue}) {pin} is feasible"))?;
        ensure(took <= Duration::from_secs(60), format!("({n},{blue}) {pin} took {took:?}"))?;
        parts.push(format!("({n},{blue}) {pin}"));
    }
    Ok(format!("infeasible: {}", parts.join(", ")))
}

fn ac3_witness() -> Check {
    let model = build_model(CaseSpec::new(6, 5).unwrap(), &[]).map_err(|e| e.to_string())?;
    let witness: Assignment =
        [((2, 2), 6), ((2, 1), 3), ((2, 0), 6), ((0, 2), 4)].iter().map(|&((i, j), c)| (VarId::new(i, j), c)).collect();
    let check = verify_assignment(&model, &witness);
    ensure(check.satisfied, format!("violated {:?}", check.violated))?;
    Ok("s_2_2=6 s_2_1=3 s_2_0=6 s_0_2=4 satisfies every (6,5) row".into())
}

/// `4n - 4 >= n + 2 + (k - 1) n (n - 1) / k²` cleared of denominators.
fn eqn5_oracle(n: u128) -> bool {
    let mut k = 0u128;
    while (k + 1) * (k + 1) <= 2 * n {
        k += 1;
    }
    k * k * (3 * n - 6) >= (k - 1) * n * (n - 1)
}

fn ac4_eqn5() -> Check {
    let start = Instant::now();
    for n in 20..=10_000usize {
        let out = minimal_cx_inequality(n).map_err(|e| e.to_string())?;
        ensure(out.holds == eqn5_oracle(n as u128), format!("n = {n} disagrees with the oracle"))?;
        ensure(out.holds == (n == 20), format!("n = {n}: holds = {}", out.holds))?;
    }
    let took = start.elapsed();
    ensure(took <= Duration::from_secs(1), format!("took {took:?}"))?;
    Ok("holds at n = 20, fails for 21..=10000".into())
}

fn ac5_six_five() -> Check {
    let first = serde_json::to_string(&refute_6_5()).unwrap();
    let second = serde_json::to_string(&refute_6_5()).unwrap();
    ensure(first == second, "reports differ between runs")?;
    let report = refute_6_5();
    ensure(report.is_refuted(), "overall failed")?;
    let step = |label: &str| report.steps.iter().find(|s| s.label == label).ok_or(format!("missing step {label}"));
    for label in ["branch_b5_on_r2r3_r4r6_r5r1", "branch_b5_on_r1r4_r6r2_r3r5"] {
        let s = step(label)?;
        ensure(s.data["a"] == "3c", format!("{label}: a = {}", s.data["a"]))?;
        ensure(s.data["eliminant"] == "3c^2 + 1", format!("{label}: eliminant {}", s.data["eliminant"]))?;
        ensure(s.data["discriminant"] == "-12", format!("{label}: discriminant {}", s.data["discriminant"]))?;
    }
    for label in ["b5_at_infinity_on_r2r3", "b5_at_infinity_on_r1r4"] {
        let s = step(label)?;
        ensure(s.data["a_values"] == "3, -3", format!("{label}: {}", s.data["a_values"]))?;
        ensure(s.data["joint_system"] == "infeasible", format!("{label}: {}", s.data["joint_system"]))?;
    }
    Ok("a = 3c, eliminant 3c^2 + 1 (both branches), a = 3 vs a = -3 at infinity; report byte-identical".into())
}

fn ac6_eight_seven() -> Check {
    let start = Instant::now();
    let report = refute_8_7();
    ensure(report.is_refuted(), "overall failed")?;
    let mut infeasible = 0;
    for s2 in all_matchings() {
        for s3 in all_matchings() {
            let out = match_displacement(s2, s3).map_err(|e| e.to_string())?;
            if out.kind == SolveKind::Infeasible {
                infeasible += 1;
            }
        }
    }
    ensure(infeasible == 36, format!("{infeasible} of 36 infeasible"))?;
    let took = start.elapsed();
    ensure(took <= Duration::from_secs(1), format!("took {took:?}"))?;
    Ok("s_2_3=0 infeasible; 36/36 displacement systems infeasible".into())
}

fn ac7_properties() -> Check {
    let configs = random_configurations(10_000, 2024);
    ensure(configs.len() == 10_000, "sample size")?;
    let mut pairs = 0usize;
    let mut hirzebruch_applied = 0usize;
    for cfg in &configs {
        let (red, blue) = (cfg.red_count(), cfg.blue_count());
        // (a) statistics against a brute-force line enumeration.
        let oracle = s_table(&brute_force_profiles(&affine_points(cfg)));
        let stats = compute_stats(cfg);
        ensure(stats.s == oracle, "s-table differs from brute force")?;
        identities(&oracle, red, blue)?;
        ensure(stats.identity_failures().is_empty(), "library identity check failed")?;

        // (b) classical theorems where their preconditions hold.
        if classify(cfg).map_err(|e| e.to_string())? != Classification::Collinear {
            let holds = |r: Result<bichromatic::geometry::Verdict, GeometryError>| {
                r.map(|v| v.holds).map_err(|e| e.to_string())
            };
            ensure(holds(check_melchior(cfg))?, "Melchior")?;
            ensure(holds(check_motzkin(cfg))?, "Motzkin")?;
            ensure(holds(check_dbe(cfg))?, "de Bruijn-Erdos")?;
            match check_hirzebruch(cfg) {
                Ok(v) => {
                    hirzebruch_applied += 1;
                    ensure(v.holds, "Hirzebruch")?;
                }
                Err(GeometryError::TooManyCollinear { .. }) => {}
                Err(e) => return Err(e.to_string()),
            }
        }

        // (c) line bounds against the true count and the oracles.
        let spec = CaseSpec::new(red, blue).map_err(|e| e.to_string())?;
        let truth = stats.bichromatic_count();
        for line in determined_lines(cfg) {
            let profile = LineProfile::new(&spec, line.red, line.blue).map_err(|e| e.to_string())?;
            let imp = imp21_bound(&spec, &profile);
            let tricky = tricky_bound(&spec, &profile);
            ensure(imp == imp21_oracle(red, blue, line.red, line.blue), "imp21 differs from sum form")?;
            ensure(tricky == tricky_oracle(red, blue, line.red, line.blue), "tricky differs from i-scan")?;
            ensure(imp <= truth && tricky <= truth, format!("bound exceeds {truth} on {:?}", (line.red, line.blue)))?;
            pairs += 1;
        }
    }
    ensure(pairs >= 10_000, format!("only {pairs} (configuration, line) samples"))?;

    // (d) exhaustive searches.
    let mut examined = Vec::new();
    for (grid, red, blue) in [(3, 2, 2), (4, 3, 2)] {
        let report = search_counterexamples(grid, red, blue, SearchMode::Exhaustive).map_err(|e| e.to_string())?;
        ensure(report.violations.is_empty(), format!("grid {grid}: {:?}", report.violations))?;
        examined.push(report.examined);
    }
    ensure(examined == [36 * 21, 560 * 78], format!("examined {examined:?}"))?;
    Ok(format!(
        "10000 configurations, {hirzebruch_applied} Hirzebruch-applicable, {pairs} line bounds, exhaustive searches {examined:?} clean"
    ))
}

fn ac8_tightness() -> Check {
    for n in 3..=12 {
        let cfg = build_tightness(n).map_err(|e| e.to_string())?;
        let stats = compute_stats(&cfg);
        let brute = brute_force_profiles(&affine_points(&cfg)).iter().filter(|(r, b)| *r > 0 && *b > 0).count();
        ensure(stats.bichromatic_count() == cfg.len() - 1, format!("n = {n}: {}", stats.bichromatic_count()))?;
        ensure(brute == cfg.len() - 1, format!("n = {n}: brute force {brute}"))?;
        ensure(classify(&cfg) == Ok(Classification::General), format!("n = {n}: not general"))?;
    }
    Ok("|P| - 1 bichromatic lines and general position for 3 <= n <= 12".into())
}

fn ac9_lp_export() -> Check {
    let model = build_model(CaseSpec::new(6, 5).unwrap(), &[]).map_err(|e| e.to_string())?;
    let first = export_lp_text(&model);
    let second = export_lp_text(&build_model(CaseSpec::new(6, 5).unwrap(), &[]).unwrap());
    ensure(first == second, "exports differ")?;
    let lp = parse_lp_text(&first).map_err(|e| e.to_string())?;
    let values: BTreeMap<String, _> = [("s_2_2", 6), ("s_2_1", 3), ("s_2_0", 6), ("s_0_2", 4)]
        .iter()
        .map(|(k, v)| (k.to_string(), int(*v)))
        .collect();
    let violated = lp.violations(&values);
    ensure(violated.is_empty(), format!("re-parsed text rejects the witness: {violated:?}"))?;
    let mut broken = values.clone();
    broken.insert("s_2_2".into(), int(5));
    ensure(!lp.violations(&broken).is_empty(), "re-parsed text accepts a perturbed witness")?;
    let rows = lp.rows.iter().filter(|r| r.relation == Relation::Eq).count();
    Ok(format!("byte-identical export, {} rows ({rows} equalities), witness re-verified", lp.rows.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("AC1", "scan reproduction", ac1_scan, Duration::from_secs(600)),
        ("AC2", "pin reproductions", ac2_pins, Duration::from_secs(240)),
        ("AC3", "known (6,5) witness", ac3_witness, Duration::from_secs(10)),
        ("AC4", "minimal-counterexample inequality", ac4_eqn5, Duration::from_secs(1)),
        ("AC5", "case (6,5) algebra", ac5_six_five, Duration::from_secs(60)),
        ("AC6", "case (8,7)", ac6_eight_seven, Duration::from_secs(1)),
        ("AC7", "property suites", ac7_properties, Duration::from_secs(600)),
        ("AC8", "tightness", ac8_tightness, Duration::from_secs(60)),
        ("AC9", "LP export", ac9_lp_export, Duration::from_secs(10)),
    ];
    let mut failed = 0;
    for (id, name, check, limit) in criteria {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > limit => Err(format!("{detail}; exceeded {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => {
                println!("{id} PASS {name}: {detail} [{:.3}s, limit {}s]", took.as_secs_f64(), limit.as_secs())
            }
            Err(why) => {
                failed += 1;
                println!("{id} FAIL {name}: {why} [{:.3}s, limit {}s]", took.as_secs_f64(), limit.as_secs());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
