//! Command-line front end. [`run`] does all the work and returns the exit
//! code and rendered output, so it can be driven from tests.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{Budget, Exec};
use crate::gf::{format_poly, Field};
use crate::groups::{GroupSpec, GroupTable};
use crate::intersect::{
    max_clique, CheckReport, CliqueReport, FixingGraph, Method, DEFAULT_ADJACENCY_LIMIT, DEFAULT_ENUMERATION_LIMIT,
};
use crate::verify::{
    case_iii_sweep, classify_exhaustive, classify_sampled, det_orders, extension_sweep, group_export, group_summary,
    lemma_suite, maximal_summary, subgroup_suite, ClassifySummary, ExtensionSummary, GroupSummary, Histogram,
    LemmaSuite, MaximalSummary, ELEMENT_ORDER,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_THEOREM: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ekr", version, about = "Intersecting sets in SL(2,q) <= G <= GL(2,q)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Certify the clique number of the fixing graph and classify a witness.
    Verify(RunArgs),
    /// Classify maximum intersecting sets, exhaustively or by sampling.
    Classify(RunArgs),
    /// Enumerate all maximal intersecting sets and report their sizes.
    Maximal(RunArgs),
    /// Extend intersecting seeds to maximum ones.
    Extend(RunArgs),
    /// Subgroup, shape and bound checks.
    Lemmas(RunArgs),
    /// Write the fixing graph (DIMACS) or the group metadata (JSON).
    Export(RunArgs),
    /// Print the field's modulus and operation tables.
    Field(FieldArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dimacs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ClassifyMode {
    /// Exhaustive when the group has at most --max-enum elements.
    Auto,
    Exhaustive,
    Sampled,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    /// Order of the determinant subgroup; must divide q - 1.
    #[arg(long, required_unless_present = "all_d", conflicts_with = "all_d")]
    pub d: Option<u32>,
    /// Run every divisor d of q - 1.
    #[arg(long)]
    pub all_d: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Vertex cap for exhaustive enumeration.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
    pub max_enum: usize,
    /// Refuse groups larger than this.
    #[arg(long, default_value_t = 100_000)]
    pub max_group: usize,
    /// Wall-clock cap in seconds for the whole command.
    #[arg(long)]
    pub time_cap: Option<f64>,
    /// Use brute-force fixed-vector scans for intersection and H.
    #[arg(long)]
    pub oracle: bool,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Run every search on the calling thread.
    #[arg(long)]
    pub sequential: bool,
    /// Random seeds for `extend`, samples for sampled `classify`.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Random intersecting sets for `lemmas`.
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, value_enum, default_value_t = ClassifyMode::Auto)]
    pub mode: ClassifyMode,
    /// Include wall-clock timings and search node counts (not reproducible).
    #[arg(long)]
    pub timings: bool,
}

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    TheoremFailure,
    /// Checks failed, but d = 1 lies outside the theorem's hypothesis.
    FailedOutsideHypothesis,
    ResourceCap,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub q: usize,
    pub d: usize,
    pub group_size: usize,
    pub omega: usize,
    pub omega_matches_qd: bool,
    pub no_clique_of_size_qd_plus_one: bool,
    pub witness: Option<CliqueReport>,
    pub classification_histogram: Histogram,
    /// Absent when the group exceeds the enumeration cap.
    pub maximal_sizes: Option<BTreeMap<usize, usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    #[serde(flatten)]
    pub group: GroupSummary,
    pub outside_theorem_hypothesis: bool,
    pub method: Method,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classify: Option<ClassifySummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub maximal: Option<MaximalSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extend: Option<ExtensionSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subgroups: Option<CheckReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lemmas: Option<LemmaSuite>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case_iii: Option<CheckReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<BTreeMap<&'static str, f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search_nodes: Option<u64>,
}

#[derive(Serialize)]
struct Document<'a> {
    schema: u32,
    command: &'static str,
    element_order: &'static str,
    seed: u64,
    runs: &'a [RunReport],
}

/// Exit code plus what would be printed. `stdout` is empty when the
/// output went to `--out`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn config(msg: impl std::fmt::Display) -> Self {
        Outcome {
            code: EXIT_CONFIG,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            }
        }
    }
}

pub fn execute(cli: Cli) -> Outcome {
    match cli.command {
        Command::Field(a) => field_command(&a),
        Command::Verify(a) => with_threads(&a, || run_grid("verify", &a)),
        Command::Classify(a) => with_threads(&a, || run_grid("classify", &a)),
        Command::Maximal(a) => with_threads(&a, || run_grid("maximal", &a)),
        Command::Extend(a) => with_threads(&a, || run_grid("extend", &a)),
        Command::Lemmas(a) => with_threads(&a, || run_grid("lemmas", &a)),
        Command::Export(a) => export_command(&a),
    }
}

fn with_threads(args: &RunArgs, f: impl FnOnce() -> Outcome + Send) -> Outcome {
    #[cfg(feature = "parallel")]
    if let Some(n) = args.threads {
        return match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(e) => Outcome::config(e),
        };
    }
    #[cfg(not(feature = "parallel"))]
    let _ = args.threads;
    f()
}

fn finish(text: String, out: &Option<PathBuf>, code: i32) -> Outcome {
    match out {
        Some(path) => match std::fs::write(path, text) {
            Ok(()) => Outcome { code, stdout: String::new(), stderr: String::new() },
            Err(e) => Outcome::config(format!("cannot write {}: {e}", path.display())),
        },
        None => Outcome { code, stdout: text, stderr: String::new() },
    }
}

fn config_error(e: &Error) -> bool {
    matches!(
        e,
        Error::NotPrime(_) | Error::BadExponent(_) | Error::FieldTooLarge { .. } | Error::BadSubgroupOrder { .. }
    )
}

fn specs(args: &RunArgs) -> std::result::Result<Vec<GroupSpec>, Outcome> {
    let ds = match args.d {
        Some(d) => vec![d],
        None => det_orders(args.p, args.k).map_err(Outcome::config)?,
    };
    ds.into_iter()
        .map(|d| GroupSpec::from_params(args.p, args.k, d).map_err(Outcome::config))
        .collect()
}

fn build_group(spec: GroupSpec, args: &RunArgs) -> Result<GroupTable> {
    let size = spec.expected_order();
    if size > args.max_group {
        return Err(Error::TooLarge {
            what: "group",
            size,
            limit: args.max_group,
        });
    }
    Ok(GroupTable::build(spec))
}

fn run_grid(command: &'static str, args: &RunArgs) -> Outcome {
    if args.format == Format::Dimacs {
        return Outcome::config(format!("--format dimacs is only valid for export, not {command}"));
    }
    let specs = match specs(args) {
        Ok(s) => s,
        Err(o) => return o,
    };
    let budget = Budget::from_secs(args.time_cap);
    let method = if args.oracle { Method::Oracle } else { Method::Fast };
    let exec = if args.sequential { Exec::Sequential } else { Exec::Parallel };
    let mut runs = Vec::new();
    for spec in specs {
        let run = run_one(command, spec, args, method, exec, &budget);
        let stop = run.status == Status::ResourceCap;
        runs.push(run);
        if stop {
            break;
        }
    }
    let code = exit_code(&runs);
    let text = match args.format {
        Format::Json => {
            let doc = Document {
                schema: 1,
                command,
                element_order: ELEMENT_ORDER,
                seed: args.seed,
                runs: &runs,
            };
            serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
        }
        _ => render_text(command, &runs),
    };
    finish(text, &args.out, code)
}

fn exit_code(runs: &[RunReport]) -> i32 {
    if runs.iter().any(|r| r.status == Status::TheoremFailure) {
        EXIT_THEOREM
    } else if runs.iter().any(|r| r.status == Status::ResourceCap) {
        EXIT_RESOURCE
    } else {
        EXIT_OK
    }
}

fn run_one(command: &str, spec: GroupSpec, args: &RunArgs, method: Method, exec: Exec, budget: &Budget) -> RunReport {
    let scope = spec.in_theorem_scope();
    let mut report = RunReport {
        group: GroupSummary {
            p: spec.field().p(),
            k: spec.field().k(),
            q: spec.q(),
            d: spec.d(),
            modulus: spec.field().modulus().to_vec(),
            det_group: spec.det_group().elements().iter().map(|s| s.value()).collect(),
            group_size: 0,
            expected_size: spec.expected_order(),
            qd: spec.qd(),
            theorem_scope: scope,
        },
        outside_theorem_hypothesis: !scope,
        method,
        status: Status::Pass,
        error: None,
        verify: None,
        classify: None,
        maximal: None,
        extend: None,
        subgroups: None,
        lemmas: None,
        case_iii: None,
        timing_ms: None,
        search_nodes: None,
    };
    let mut timings = BTreeMap::new();
    let outcome = fill(command, spec, args, method, exec, budget, &mut report, &mut timings);
    if args.timings {
        report.timing_ms = Some(timings);
    } else {
        report.search_nodes = None;
    }
    report.status = match outcome {
        Ok(true) => Status::Pass,
        Ok(false) if scope => Status::TheoremFailure,
        Ok(false) => Status::FailedOutsideHypothesis,
        Err(e) => {
            report.error = Some(e.to_string());
            Status::ResourceCap
        }
    };
    report
}

fn timed<T>(timings: &mut BTreeMap<&'static str, f64>, phase: &'static str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    timings.insert(phase, start.elapsed().as_secs_f64() * 1e3);
    out
}

/// Runs the command's phases into `report`; `Ok(passed)` or the error that
/// stopped it.
#[allow(clippy::too_many_arguments)]
fn fill(
    command: &str,
    spec: GroupSpec,
    args: &RunArgs,
    method: Method,
    exec: Exec,
    budget: &Budget,
    report: &mut RunReport,
    timings: &mut BTreeMap<&'static str, f64>,
) -> Result<bool> {
    let group = timed(timings, "group", || build_group(spec, args))?;
    report.group = group_summary(&group);
    let graph = timed(timings, "graph", || FixingGraph::build_with(&group, method, DEFAULT_ADJACENCY_LIMIT));
    let qd = group.spec().qd();
    let samples = args.samples;
    match command {
        "verify" => {
            let subgroups = timed(timings, "subgroups", || subgroup_suite(&group, method));
            let mc = timed(timings, "max_clique", || max_clique(&graph, qd, exec, budget))?;
            report.search_nodes = Some(mc.nodes);
            let mut histogram = Histogram::default();
            if let Some(r) = &mc.report {
                histogram.add(&r.classification);
            }
            let maximal = if graph.vertex_count() <= args.max_enum {
                Some(timed(timings, "maximal", || maximal_summary(&graph, args.max_enum, budget))?)
            } else {
                None
            };
            let omega_matches_qd = mc.omega == qd;
            let passed = subgroups.passed()
                && omega_matches_qd
                && mc.no_clique_above_target
                && histogram.other == 0
                && maximal.as_ref().is_none_or(|m| m.all_of_size(qd));
            report.subgroups = Some(subgroups);
            report.verify = Some(VerifyReport {
                q: group.spec().q(),
                d: group.spec().d(),
                group_size: group.size(),
                omega: mc.omega,
                omega_matches_qd,
                no_clique_of_size_qd_plus_one: mc.no_clique_above_target,
                witness: mc.report,
                classification_histogram: histogram,
                maximal_sizes: maximal.map(|m| m.sizes),
            });
            Ok(passed)
        }
        "classify" => {
            let exhaustive = match args.mode {
                ClassifyMode::Exhaustive => true,
                ClassifyMode::Sampled => false,
                ClassifyMode::Auto => group.size() <= args.max_enum,
            };
            let summary = if exhaustive {
                let mc = timed(timings, "max_clique", || max_clique(&graph, qd, exec, budget))?;
                timed(timings, "classify", || classify_exhaustive(&graph, mc.omega, budget))?
            } else {
                let n = samples.unwrap_or(500);
                timed(timings, "classify", || classify_sampled(&graph, n, args.seed, exec, budget))?
            };
            let passed = summary.passed(true);
            report.classify = Some(summary);
            Ok(passed)
        }
        "maximal" => {
            let m = timed(timings, "maximal", || maximal_summary(&graph, args.max_enum, budget))?;
            let passed = m.all_of_size(qd);
            report.maximal = Some(m);
            Ok(passed)
        }
        "extend" => {
            let n = samples.unwrap_or(1000);
            let e = timed(timings, "extend", || extension_sweep(&graph, n, args.seed, exec, budget))?;
            let passed = e.passed();
            report.extend = Some(e);
            Ok(passed)
        }
        "lemmas" => {
            let subgroups = timed(timings, "subgroups", || subgroup_suite(&group, method));
            let lemmas = timed(timings, "lemmas", || lemma_suite(&graph, args.trials, args.seed, exec, budget))?;
            let case_iii = case_iii_sweep(64);
            let passed = subgroups.passed() && lemmas.passed() && case_iii.passed();
            report.subgroups = Some(subgroups);
            report.lemmas = Some(lemmas);
            report.case_iii = Some(case_iii);
            Ok(passed)
        }
        other => unreachable!("unknown command {other}"),
    }
}

fn render_text(command: &str, runs: &[RunReport]) -> String {
    let mut s = String::new();
    for r in runs {
        let g = &r.group;
        let _ = writeln!(s, "{command}: q = {} (p = {}, k = {}), d = {}, |G| = {}", g.q, g.p, g.k, g.d, g.group_size);
        if r.outside_theorem_hypothesis {
            let _ = writeln!(s, "  note: d = 1 is outside the theorem's hypothesis; failures are reported, not fatal");
        }
        if let Some(v) = &r.verify {
            let _ = writeln!(
                s,
                "  omega = {} (qd = {}), matches: {}, no clique of size {}: {}",
                v.omega,
                g.qd,
                v.omega_matches_qd,
                g.qd + 1,
                v.no_clique_of_size_qd_plus_one
            );
            if let Some(w) = &v.witness {
                let _ = writeln!(s, "  witness {:?}: {}", w.members, w.classification.label());
            }
            match &v.maximal_sizes {
                Some(m) => {
                    let _ = writeln!(s, "  maximal clique sizes: {m:?}");
                }
                None => {
                    let _ = writeln!(s, "  maximal clique sizes: skipped (above enumeration cap)");
                }
            }
        }
        if let Some(c) = &r.classify {
            let h = &c.histogram;
            let _ = writeln!(
                s,
                "  {} classification of {} cliques ({} distinct): STABILIZER_COSET {}, H_COSET {}, OTHER {}, ambiguous {}, wrong size {}",
                c.mode, c.cliques, c.distinct, h.stabilizer_coset, h.h_coset, h.other, c.ambiguous, c.wrong_size
            );
            let _ = writeln!(s, "  distinct H subgroups: {}", c.distinct_h_subgroups);
        }
        if let Some(m) = &r.maximal {
            let _ = writeln!(s, "  {} maximal cliques, sizes {:?}", m.count, m.sizes);
        }
        if let Some(e) = &r.extend {
            let _ = writeln!(
                s,
                "  extended {}/{} pair seeds and {}/{} random seeds",
                e.pair_successes, e.pair_seeds, e.random_successes, e.random_seeds
            );
            for f in &e.failures {
                let _ = writeln!(s, "  failed seed {f:?}");
            }
        }
        let mut checks = |name: &str, c: &CheckReport| {
            let _ = writeln!(s, "  {name}: {} checks, {} violations", c.checked, c.violations.len());
            for v in c.violations.iter().take(20) {
                let _ = writeln!(s, "    {v}");
            }
        };
        if let Some(c) = &r.subgroups {
            checks("subgroups", c);
        }
        if let Some(l) = &r.lemmas {
            checks(&format!("shapes ({} sets, {} frames)", l.sets, l.frames), &l.shapes);
            checks("corollaries", &l.corollaries);
        }
        if let Some(c) = &r.case_iii {
            checks("case iii bound, q <= 64", c);
        }
        if let Some(t) = &r.timing_ms {
            for (phase, ms) in t {
                let _ = writeln!(s, "  time {phase}: {ms:.1} ms");
            }
        }
        if let Some(n) = r.search_nodes {
            let _ = writeln!(s, "  search nodes: {n}");
        }
        if let Some(e) = &r.error {
            let _ = writeln!(s, "  stopped: {e}");
        }
        let _ = writeln!(s, "  status: {:?}", r.status);
    }
    s
}

fn export_command(args: &RunArgs) -> Outcome {
    let specs = match specs(args) {
        Ok(s) => s,
        Err(o) => return o,
    };
    if specs.len() != 1 {
        return Outcome::config("export needs a single --d");
    }
    let spec = specs.into_iter().next().expect("one spec");
    let group = match build_group(spec, args) {
        Ok(g) => g,
        Err(e) => {
            let code = if config_error(&e) { EXIT_CONFIG } else { EXIT_RESOURCE };
            return Outcome { code, stdout: String::new(), stderr: format!("error: {e}\n") };
        }
    };
    let method = if args.oracle { Method::Oracle } else { Method::Fast };
    let graph = FixingGraph::build_with(&group, method, DEFAULT_ADJACENCY_LIMIT);
    let text = match args.format {
        Format::Dimacs => graph.to_dimacs(),
        Format::Json => serde_json::to_string_pretty(&group_export(&graph)).expect("serializable") + "\n",
        Format::Text => {
            let g = group_summary(&group);
            let mut s = String::new();
            let _ = writeln!(s, "q = {}, d = {}, |G| = {}", g.q, g.d, g.group_size);
            let _ = writeln!(s, "modulus: {}", format_poly(&g.modulus));
            let _ = writeln!(s, "det(G) = {:?}", g.det_group);
            let _ = writeln!(s, "fixing graph: {} vertices, degree {}, {} edges", graph.vertex_count(), graph.degree(), graph.edge_count());
            if !g.theorem_scope {
                let _ = writeln!(s, "note: d = 1 is outside the theorem's hypothesis");
            }
            s
        }
    };
    finish(text, &args.out, EXIT_OK)
}

#[derive(Serialize)]
struct FieldDoc {
    schema: u32,
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    primitive_element: u32,
    add: Vec<Vec<u32>>,
    mul: Vec<Vec<u32>>,
}

fn field_command(args: &FieldArgs) -> Outcome {
    let f = match Field::new(args.p, args.k) {
        Ok(f) => f,
        Err(e) => return Outcome::config(e),
    };
    let text = match args.format {
        Format::Json => {
            let table = |op: &dyn Fn(u32, u32) -> u32| -> Vec<Vec<u32>> {
                (0..f.q()).map(|a| (0..f.q()).map(|b| op(a, b)).collect()).collect()
            };
            let doc = FieldDoc {
                schema: 1,
                p: f.p(),
                k: f.k(),
                q: f.q(),
                modulus: f.modulus().to_vec(),
                primitive_element: f.primitive_element().value(),
                add: table(&|a, b| f.add(f.scalar(a), f.scalar(b)).value()),
                mul: table(&|a, b| f.mul(f.scalar(a), f.scalar(b)).value()),
            };
            serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
        }
        Format::Text => f.format_tables(),
        Format::Dimacs => return Outcome::config("--format dimacs is only valid for export"),
    };
    finish(text, &args.out, EXIT_OK)
}
