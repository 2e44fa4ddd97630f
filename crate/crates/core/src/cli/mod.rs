//! Command-line front end. [`run`] maps a command to the library pipeline and
//! returns what would be printed together with the exit code, so the whole
//! tool can be driven from tests.

mod points;
mod report;

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use itertools::Itertools;
use serde_json::{json, Value};

use crate::bounds::{imp21_bound, minimal_cx_inequality, tricky_bound, CaseSpec, LineProfile};
use crate::cases::{refute_6_5, refute_8_7, RefutationReport};
use crate::exactmath::fmt_rational;
use crate::geometry::{
    build_tightness, check_dbe, check_hirzebruch, check_main_theorem, check_melchior, check_motzkin, classify,
    compute_stats, determined_lines, search_counterexamples, Classification, GeometryError, SearchMode, Verdict,
};
use crate::model::{build_model, export_lp_text, CaseModel, Pin};
use crate::solver::{describe_lp_witness, ilp_feasible, lp_feasible, scan, BlueVariant, Feasibility};
pub use points::{parse_points, write_points, PointsError};
pub use report::{inputs_digest, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// The feasible cases of the scan over `3 <= n <= 20`.
pub const KNOWN_FEASIBLE: [(usize, usize); 2] = [(6, 5), (8, 7)];

#[derive(Parser, Debug)]
#[command(name = "bichromatic", version, about = "Exact verification of the bichromatic lines bound")]
struct Cli {
    /// Print the JSON report instead of the text summary.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Incidence statistics of a point-set file.
    Analyze { file: PathBuf },
    /// Evaluate one incidence theorem on a point-set file.
    Check { theorem: Theorem, file: PathBuf },
    /// Line-count lower bounds and the minimal-counterexample inequality.
    Bound {
        #[command(subcommand)]
        which: BoundCommand,
    },
    /// Build the constraint model of a case; prints LP text unless exported.
    Model(ModelArgs),
    /// Decide integer feasibility of a case model.
    Solve {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        expect: Option<Expect>,
    },
    /// Decide every case in a range of n.
    Scan {
        #[arg(long, default_value_t = 3)]
        min_n: usize,
        #[arg(long, default_value_t = 20)]
        max_n: usize,
        #[arg(long, value_enum, default_value = "both")]
        blue: BlueArg,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Refute the residual cases.
    Cases {
        #[arg(long, value_enum, default_value = "all")]
        which: Which,
    },
    /// Look for counterexamples among grid configurations.
    #[command(group(ArgGroup::new("mode").required(true).args(["exhaustive", "random"])))]
    Search {
        #[arg(long)]
        grid: usize,
        #[arg(long)]
        red: usize,
        #[arg(long)]
        blue: usize,
        #[arg(long)]
        exhaustive: bool,
        /// Number of random trials.
        #[arg(long, value_name = "T")]
        random: Option<usize>,
        #[arg(long, default_value_t = 0, requires = "random")]
        seed: u64,
    },
    /// Write the extremal configuration for n and verify its line count.
    Tightness {
        #[arg(long)]
        n: usize,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum BoundCommand {
    Imp21(ProfileArgs),
    Tricky(ProfileArgs),
    Eqn5 {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Args, Debug)]
struct ProfileArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    blue: usize,
    /// Red points on the line.
    #[arg(short = 'r')]
    r: usize,
    /// Blue points on the line.
    #[arg(short = 'b')]
    b: usize,
}

#[derive(Args, Debug)]
struct ModelArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    blue: usize,
    /// Extra constraint such as `s_2_3=0`, `s_2_2<=5` or `s_2_1>=3`.
    #[arg(long = "pin")]
    pins: Vec<Pin>,
    #[arg(long)]
    export: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Theorem {
    Melchior,
    Hirzebruch,
    Motzkin,
    Dbe,
    #[value(name = "theorem")]
    Main,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Expect {
    Feasible,
    Infeasible,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BlueArg {
    #[value(name = "n")]
    Equal,
    #[value(name = "n-1")]
    OneFewer,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Which {
    #[value(name = "6_5")]
    SixFive,
    #[value(name = "8_7")]
    EightSeven,
    All,
}

/// What a command printed and how it exited.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Done {
    ok: bool,
    results: Value,
    text: String,
    inputs: Vec<Vec<u8>>,
}

impl Done {
    fn new(ok: bool, results: Value, text: String) -> Self {
        Done { ok, results, text, inputs: Vec::new() }
    }

    fn with_input(mut self, bytes: Vec<u8>) -> Self {
        self.inputs.push(bytes);
        self
    }
}

struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult = Result<Done, UsageError>;

/// Runs one invocation; `args` starts with the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: rendered }
            } else {
                Outcome { code: EXIT_OK, stdout: rendered, stderr: String::new() }
            };
        }
    };
    let words: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match dispatch(&cli.command) {
        Ok(done) => {
            let inputs: Vec<&[u8]> = done.inputs.iter().map(Vec::as_slice).collect();
            let report = Report::new(words, &inputs, done.results);
            let stdout = if cli.json { report.to_json() } else { done.text };
            Outcome { code: if done.ok { EXIT_OK } else { EXIT_FAILED }, stdout, stderr: String::new() }
        }
        Err(UsageError(message)) => {
            Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {message}\n") }
        }
    }
}

fn dispatch(command: &Command) -> CmdResult {
    match command {
        Command::Analyze { file } => analyze(file),
        Command::Check { theorem, file } => check(*theorem, file),
        Command::Bound { which } => bound(which),
        Command::Model(args) => model(args),
        Command::Solve { model, expect } => solve(model, *expect),
        Command::Scan { min_n, max_n, blue, jobs } => run_scan(*min_n, *max_n, *blue, *jobs),
        Command::Cases { which } => cases(*which),
        Command::Search { grid, red, blue, exhaustive: _, random, seed } => {
            let mode = match random {
                Some(trials) => SearchMode::Random { seed: *seed, trials: *trials },
                None => SearchMode::Exhaustive,
            };
            search(*grid, *red, *blue, mode)
        }
        Command::Tightness { n, output } => tightness(*n, output),
    }
}

fn read_points(file: &Path) -> Result<(crate::geometry::Configuration, Vec<u8>), UsageError> {
    let bytes = std::fs::read(file).map_err(|e| UsageError(format!("{}: {e}", file.display())))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| UsageError(format!("{}: not UTF-8", file.display())))?;
    let cfg = parse_points(&text).map_err(|e| UsageError(format!("{}: {e}", file.display())))?;
    Ok((cfg, bytes))
}

fn analyze(file: &Path) -> CmdResult {
    let (cfg, bytes) = read_points(file)?;
    let stats = compute_stats(&cfg);
    let lines = determined_lines(&cfg);
    let class = classify(&cfg).ok();
    let failures = stats.identity_failures();
    let line_list: Vec<Value> = lines
        .iter()
        .map(|l| json!({"line": l.key.to_string(), "members": l.members, "red": l.red, "blue": l.blue}))
        .collect();
    let results = json!({
        "points": cfg.len(),
        "red": cfg.red_count(),
        "blue": cfg.blue_count(),
        "classification": class,
        "stats": stats,
        "lines": line_list,
        "identity_failures": failures,
    });

    let mut text = String::new();
    writeln!(text, "points: {} ({} red, {} blue)", cfg.len(), cfg.red_count(), cfg.blue_count()).unwrap();
    if let Some(c) = class {
        writeln!(text, "classification: {}", json!(c).as_str().unwrap_or("?")).unwrap();
    }
    writeln!(text, "lines: {}", stats.line_count()).unwrap();
    writeln!(text, "bichromatic lines: {}", stats.bichromatic_count()).unwrap();
    writeln!(text, "same-colour pairs: {}, different-colour pairs: {}", stats.same_pairs(), stats.diff_pairs())
        .unwrap();
    let t = stats.t_vector().iter().map(|(k, c)| format!("t{k}={c}")).join(" ");
    writeln!(text, "t: {t}").unwrap();
    let s = stats.s.iter().filter(|(_, c)| **c > 0).map(|((i, j), c)| format!("s_{i}_{j}={c}")).join(" ");
    writeln!(text, "s: {s}").unwrap();
    for f in &failures {
        writeln!(text, "identity failed: {f}").unwrap();
    }
    Ok(Done::new(failures.is_empty(), results, text).with_input(bytes))
}

fn verdict_json(v: &Verdict) -> Value {
    json!({
        "check": v.check,
        "holds": v.holds,
        "value": fmt_rational(&v.value),
        "bound": fmt_rational(&v.bound),
        "slack": fmt_rational(&v.slack()),
    })
}

fn check(theorem: Theorem, file: &Path) -> CmdResult {
    let (cfg, bytes) = read_points(file)?;
    let outcome = match theorem {
        Theorem::Melchior => check_melchior(&cfg),
        Theorem::Hirzebruch => check_hirzebruch(&cfg),
        Theorem::Motzkin => check_motzkin(&cfg),
        Theorem::Dbe => check_dbe(&cfg),
        Theorem::Main => check_main_theorem(&cfg),
    };
    let done = match outcome {
        Ok(v) => {
            let text = format!(
                "{}: {} (value {}, bound {}, slack {})\n",
                json!(v.check).as_str().unwrap_or("?"),
                if v.holds { "holds" } else { "FAILS" },
                fmt_rational(&v.value),
                fmt_rational(&v.bound),
                fmt_rational(&v.slack())
            );
            Done::new(v.holds, verdict_json(&v), text)
        }
        Err(e @ GeometryError::TheoremViolated { .. }) => {
            Done::new(false, json!({"holds": false, "error": e.to_string()}), format!("FAILS: {e}\n"))
        }
        Err(e) => return Err(UsageError(format!("precondition: {e}"))),
    };
    Ok(done.with_input(bytes))
}

fn bound(which: &BoundCommand) -> CmdResult {
    match which {
        BoundCommand::Imp21(p) | BoundCommand::Tricky(p) => {
            let spec = CaseSpec::new(p.n, p.blue)?;
            let profile = LineProfile::new(&spec, p.r, p.b)?;
            let (name, value) = match which {
                BoundCommand::Imp21(_) => ("imp21", imp21_bound(&spec, &profile)),
                _ => ("tricky", tricky_bound(&spec, &profile)),
            };
            let budget = spec.total() - 2;
            let results = json!({
                "bound": name,
                "n": spec.n,
                "blue": spec.blue,
                "r": p.r,
                "b": p.b,
                "value": value,
                "budget": budget,
                "exceeds_budget": value > budget,
            });
            let text = format!("{name} bound for a line with {} red, {} blue: {value} (budget {budget})\n", p.r, p.b);
            Ok(Done::new(true, results, text))
        }
        BoundCommand::Eqn5 { n } => {
            let out = minimal_cx_inequality(*n)?;
            // The inequality must fail from n = 21 on.
            let ok = *n <= 20 || !out.holds;
            let text = format!(
                "n = {}, k = {}: {} <= {} is {}\n",
                out.n,
                out.k,
                fmt_rational(&out.lhs),
                fmt_rational(&out.rhs),
                if out.holds { "true" } else { "false" }
            );
            Ok(Done::new(ok, serde_json::to_value(&out)?, text))
        }
    }
}

fn build(args: &ModelArgs) -> Result<CaseModel, UsageError> {
    let spec = CaseSpec::new(args.n, args.blue)?;
    Ok(build_model(spec, &args.pins)?)
}

fn model_json(m: &CaseModel) -> Value {
    let mut groups: BTreeMap<&str, usize> = BTreeMap::new();
    for c in m.constraints() {
        *groups.entry(c.group.label()).or_default() += 1;
    }
    let zeroed: BTreeMap<String, Vec<&str>> =
        m.zeroed().iter().map(|(v, rs)| (v.lp_name(), rs.iter().map(|g| g.label()).collect())).collect();
    json!({
        "n": m.spec().n,
        "blue": m.spec().blue,
        "variables": m.variables().iter().map(|v| v.lp_name()).collect::<Vec<_>>(),
        "zeroed": zeroed,
        "constraints_per_group": groups,
        "pins": m.pins(),
        "pin_conflicts": m.pin_conflicts(),
    })
}

fn model(args: &ModelArgs) -> CmdResult {
    let m = build(args)?;
    let lp = export_lp_text(&m);
    let mut results = model_json(&m);
    let text = match &args.export {
        Some(path) => {
            std::fs::write(path, &lp).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
            results["exported"] = json!(path.display().to_string());
            format!(
                "{} variables, {} constraints, {} zeroed; written to {}\n",
                m.variables().len(),
                m.constraints().len(),
                m.zeroed().len(),
                path.display()
            )
        }
        None => lp.clone(),
    };
    results["lp_sha256"] = json!(inputs_digest(&[], &[lp.as_bytes()]));
    Ok(Done::new(true, results, text))
}

fn feasibility_word(f: Feasibility) -> &'static str {
    match f {
        Feasibility::Feasible => "feasible",
        Feasibility::Infeasible => "infeasible",
    }
}

fn solve(args: &ModelArgs, expect: Option<Expect>) -> CmdResult {
    let m = build(args)?;
    if let Some(path) = &args.export {
        std::fs::write(path, export_lp_text(&m)).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    }
    let lp = lp_feasible(&m);
    let ilp = ilp_feasible(&m)?;
    let ok = match expect {
        Some(Expect::Feasible) => ilp.is_feasible(),
        Some(Expect::Infeasible) => !ilp.is_feasible(),
        None => true,
    };
    let results = json!({
        "n": args.n,
        "blue": args.blue,
        "pins": args.pins,
        "relaxation": {
            "kind": lp.kind,
            "witness": lp.witness.as_ref().map(describe_lp_witness),
        },
        "integer": ilp,
    });
    let mut text = format!(
        "({}, {}){}: {} ({} nodes, relaxation {})\n",
        args.n,
        args.blue,
        args.pins.iter().map(|p| format!(" {p}")).join(""),
        feasibility_word(ilp.kind),
        ilp.nodes_explored,
        feasibility_word(lp.kind)
    );
    if let Some(w) = &ilp.witness {
        writeln!(text, "witness: {}", w.iter().map(|(k, v)| format!("{k}={v}")).join(" ")).unwrap();
    }
    Ok(Done::new(ok, results, text))
}

fn run_scan(min_n: usize, max_n: usize, blue: BlueArg, jobs: usize) -> CmdResult {
    let variant = match blue {
        BlueArg::Equal => BlueVariant::Equal,
        BlueArg::OneFewer => BlueVariant::OneFewer,
        BlueArg::Both => BlueVariant::Both,
    };
    let entries = scan(min_n, max_n, variant, jobs.max(1))?;
    let scanned: BTreeSet<(usize, usize)> = entries.iter().map(|e| (e.spec.n, e.spec.blue)).collect();
    let feasible: Vec<(usize, usize)> =
        entries.iter().filter(|e| e.result.is_feasible()).map(|e| (e.spec.n, e.spec.blue)).collect();
    let expected: Vec<(usize, usize)> = KNOWN_FEASIBLE.iter().copied().filter(|c| scanned.contains(c)).collect();
    let ok = feasible == expected;
    let cases: Vec<Value> = entries
        .iter()
        .map(|e| {
            json!({
                "n": e.spec.n,
                "blue": e.spec.blue,
                "kind": e.result.kind,
                "nodes_explored": e.result.nodes_explored,
                "witness": e.result.witness,
            })
        })
        .collect();
    let results = json!({
        "min_n": min_n,
        "max_n": max_n,
        "blue": variant,
        "cases": cases,
        "feasible": feasible,
        "expected_feasible": expected,
    });
    let mut text = String::new();
    for e in &entries {
        writeln!(text, "n={:>2} blue={:>2}: {}", e.spec.n, e.spec.blue, feasibility_word(e.result.kind)).unwrap();
    }
    writeln!(text, "feasible: {}", feasible.iter().map(|(n, b)| format!("({n},{b})")).join(" ")).unwrap();
    Ok(Done::new(ok, results, text))
}

fn cases(which: Which) -> CmdResult {
    let reports: Vec<RefutationReport> = match which {
        Which::SixFive => vec![refute_6_5()],
        Which::EightSeven => vec![refute_8_7()],
        Which::All => vec![refute_6_5(), refute_8_7()],
    };
    let ok = reports.iter().all(RefutationReport::is_refuted);
    let mut text = String::new();
    for r in &reports {
        writeln!(text, "case {}: {}", r.case_id, if r.is_refuted() { "refuted" } else { "FAILED" }).unwrap();
        for s in &r.steps {
            writeln!(text, "  {} {}", json!(s.verdict).as_str().unwrap_or("?"), s.label).unwrap();
        }
        for n in &r.notes {
            writeln!(text, "  note: {n}").unwrap();
        }
    }
    Ok(Done::new(ok, json!({ "reports": reports }), text))
}

fn search(grid: usize, red: usize, blue: usize, mode: SearchMode) -> CmdResult {
    let report = search_counterexamples(grid, red, blue, mode)?;
    let ok = report.violations.is_empty();
    let text = format!(
        "examined {} configurations, {} in general position, {} violations\n",
        report.examined,
        report.general,
        report.violations.len()
    );
    Ok(Done::new(ok, serde_json::to_value(&report)?, text))
}

fn tightness(n: usize, output: &Path) -> CmdResult {
    let cfg = build_tightness(n)?;
    let text_out = write_points(&cfg);
    std::fs::write(output, &text_out).map_err(|e| UsageError(format!("{}: {e}", output.display())))?;
    let stats = compute_stats(&cfg);
    let class = classify(&cfg)?;
    let expected = cfg.len() - 1;
    let ok = stats.bichromatic_count() == expected && (n < 3 || class == Classification::General);
    let results = json!({
        "n": n,
        "points": cfg.len(),
        "bichromatic_count": stats.bichromatic_count(),
        "expected": expected,
        "classification": class,
        "output": output.display().to_string(),
    });
    let text = format!(
        "wrote {} points to {}; {} bichromatic lines (|P| - 1 = {expected})\n",
        cfg.len(),
        output.display(),
        stats.bichromatic_count()
    );
    Ok(Done::new(ok, results, text).with_input(text_out.into_bytes()))
}
