use std::collections::BTreeSet;
use std::path::Path;
use std::time::{Duration, Instant};

use anyhow::{bail, Context};
use serde::Serialize;
use valsym::consistency::{brute_force_gac_by, enforce_sac, is_k_consistent, Witness, DEFAULT_BUDGET};
use valsym::engine::{propagate_fixpoint, PropagationOutcome};
use valsym::instances::{
    channelling_gap_example, generator_gap_example, paired_pigeonhole, paired_pigeonhole_encoding, parse_dimacs,
    pigeonhole_model, reduce_3sat, reduction_support_exists,
};
use valsym::search::{solve as run_search, Goal, Mode, SearchStats, Strategy, VarOrder};
use valsym::symmetry::{build_generator_lex, build_precedence, build_puget, valsymbreak_full_holds};
use valsym::{Error, Problem, PugetEncoding, Value, ValueClassPartition, Var};

use crate::file::{ProblemFile, FORMAT};
use crate::output::{cause, table, value_set, Names};
use crate::{Family, GoalArg, KFamily, Level, Method, Status, VarOrderArg};

const BUDGET_VAR: &str = "VALSYM_BUDGET";

/// A run stopped by a time or size limit rather than by bad input.
#[derive(Debug)]
pub enum Limit {
    Time(u64),
    CheckTooLarge(usize),
}

impl std::fmt::Display for Limit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Limit::Time(s) => write!(f, "search aborted after {s} s"),
            Limit::CheckTooLarge(n) => {
                write!(f, "--check enumerates supports and is limited to 3 variables; formula has {n}")
            }
        }
    }
}

impl std::error::Error for Limit {}

/// 3 for an exceeded budget or limit, 2 for everything else.
pub fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<Limit>().is_some() {
        return 3;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::BudgetExceeded { .. }) => 3,
        _ => 2,
    }
}

fn budget(flag: Option<u128>) -> anyhow::Result<u128> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(BUDGET_VAR) {
        Ok(s) => s.trim().parse().with_context(|| format!("{BUDGET_VAR}={s} is not a number")),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn load(path: &Path) -> anyhow::Result<Problem> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    ProblemFile::parse(&text)?.to_problem()
}

fn partition_of(p: &Problem, method: Method) -> anyhow::Result<&ValueClassPartition> {
    p.partition().with_context(|| format!("method {} needs \"classes\" in the problem file", method_name(method)))
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::None => "none",
        Method::Precedence => "precedence",
        Method::GeneratorLex => "generator-lex",
        Method::Puget => "puget",
        Method::GeTree => "ge-tree",
        Method::Valsymbreak => "valsymbreak",
    }
}

/// The problem with the method's constraints posted, or its encoding.
struct Prepared {
    problem: Problem,
    encoding: Option<PugetEncoding>,
}

fn prepare(p: &Problem, method: Method) -> anyhow::Result<Prepared> {
    let plain = |problem| Ok(Prepared { problem, encoding: None });
    match method {
        Method::None | Method::GeTree | Method::Valsymbreak => plain(p.clone()),
        Method::Precedence => plain(p.with_constraints(build_precedence(p, partition_of(p, method)?))?),
        Method::GeneratorLex => plain(p.with_constraints(build_generator_lex(p, partition_of(p, method)?))?),
        Method::Puget => {
            let enc = build_puget(p, partition_of(p, method)?);
            Ok(Prepared { problem: enc.problem.clone(), encoding: Some(enc) })
        }
    }
}

#[derive(Serialize)]
struct SolveRecord<'a> {
    format: u32,
    method: &'a str,
    goal: &'a str,
    satisfiable: Option<bool>,
    count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    solutions: Option<Vec<Vec<Value>>>,
    stats: &'a SearchStats,
}

pub fn solve(
    path: &Path,
    method: Method,
    goal: GoalArg,
    order: VarOrderArg,
    timeout_secs: Option<u64>,
    json: bool,
) -> anyhow::Result<Status> {
    let p = load(path)?;
    if method == Method::Valsymbreak {
        bail!("valsymbreak has no propagator; use it with `propagate --level oracle-gac`");
    }
    if method == Method::GeTree {
        partition_of(&p, method)?;
    }
    let prepared = prepare(&p, method)?;
    let mode = if method == Method::GeTree { Mode::GeTree } else { Mode::Static };
    let var_order = match order {
        VarOrderArg::Lex => VarOrder::Lex,
        VarOrderArg::MinDomain => VarOrder::MinDomain,
    };
    let (goal, goal_name) = match goal {
        GoalArg::First => (Goal::First, "first"),
        GoalArg::All => (Goal::All, "all"),
        GoalArg::Count => (Goal::Count, "count"),
    };
    let mut strategy = Strategy::new(mode, var_order);
    strategy.deadline = timeout_secs.map(|s| Instant::now() + Duration::from_secs(s));
    let result = run_search(&prepared.problem, prepared.problem.domains(), strategy, goal)?;
    let solutions: Vec<Vec<Value>> = match &prepared.encoding {
        Some(enc) => result.solutions.iter().map(|s| enc.project(s)).collect(),
        None => result.solutions,
    };
    let stats = result.stats;
    let record = SolveRecord {
        format: FORMAT,
        method: method_name(method),
        goal: goal_name,
        satisfiable: if stats.aborted && stats.solutions == 0 { None } else { Some(stats.solutions > 0) },
        count: stats.solutions,
        solutions: (goal != Goal::Count).then_some(solutions.clone()),
        stats: &stats,
    };
    if !json {
        for (i, s) in solutions.iter().enumerate() {
            println!("solution {}: {s:?}", i + 1);
        }
        let rows = vec![
            vec!["method".into(), method_name(method).into()],
            vec!["solutions".into(), stats.solutions.to_string()],
            vec!["nodes".into(), stats.nodes.to_string()],
            vec!["branches".into(), stats.branches.to_string()],
            vec!["backtracks".into(), stats.backtracks.to_string()],
            vec!["prunings".into(), stats.prunings.to_string()],
            vec!["aborted".into(), stats.aborted.to_string()],
            vec!["wall time".into(), format!("{:.3?}", stats.wall_time)],
        ];
        print!("{}", table(&rows));
    }
    println!("{}", serde_json::to_string(&record)?);
    if stats.aborted {
        return Err(Limit::Time(timeout_secs.unwrap_or(0)).into());
    }
    Ok(if stats.solutions == 0 { Status::Unsatisfiable } else { Status::Ok })
}

/// Values with no support in the conjunction of `p`'s constraints and,
/// if asked, the full symmetry breaking constraint.
fn oracle(p: &Problem, with_symmetry: bool, budget: u128) -> anyhow::Result<PropagationOutcome> {
    let scope: Vec<Var> = (0..p.num_vars()).collect();
    let part = p.partition();
    let holds = |a: &[Value]| {
        p.constraints().iter().all(|c| c.check(a))
            && (!with_symmetry || part.is_none_or(|q| valsymbreak_full_holds(a, q)))
    };
    Ok(brute_force_gac_by(&scope, p.domains(), budget, &holds)?)
}

#[derive(Serialize)]
struct PruningRecord {
    var: String,
    value: Value,
    cause: String,
}

#[derive(Serialize)]
struct PropagateRecord {
    format: u32,
    level: &'static str,
    method: &'static str,
    wipeout: bool,
    prunings: Vec<PruningRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    duals: Option<Vec<(String, Vec<Value>)>>,
}

pub fn propagate(
    path: &Path,
    level: Level,
    method: Method,
    budget_flag: Option<u128>,
    json: bool,
) -> anyhow::Result<Status> {
    let p = load(path)?;
    if method == Method::GeTree {
        bail!("ge-tree is a search strategy; use `solve --method ge-tree`");
    }
    if method == Method::Valsymbreak && level != Level::OracleGac {
        bail!("valsymbreak is only available with --level oracle-gac");
    }
    if method == Method::Valsymbreak {
        partition_of(&p, method)?;
    }
    let prepared = prepare(&p, method)?;
    let prob = &prepared.problem;
    let out = match level {
        Level::Ac | Level::Gac => propagate_fixpoint(prob, prob.domains().clone()),
        Level::Sac => enforce_sac(prob, prob.domains()),
        Level::OracleGac => oracle(prob, method == Method::Valsymbreak, budget(budget_flag)?)?,
    };
    let names = Names { encoding: prepared.encoding.as_ref() };
    let shown = prepared.encoding.as_ref().map_or(prob.num_vars(), |e| e.original_vars());
    let mut prunings: Vec<_> = out.prunings.iter().filter(|pr| pr.var < shown).collect();
    prunings.sort_by_key(|pr| (pr.var, pr.value));
    let duals = prepared.encoding.as_ref().map(|enc| {
        (1..=enc.values())
            .map(|j| (names.var(enc.dual_var(j)), out.domains.values(enc.dual_var(j)).collect()))
            .collect::<Vec<(String, Vec<Value>)>>()
    });
    let level_name = match level {
        Level::Ac => "ac",
        Level::Gac => "gac",
        Level::Sac => "sac",
        Level::OracleGac => "oracle-gac",
    };
    if json {
        let record = PropagateRecord {
            format: FORMAT,
            level: level_name,
            method: method_name(method),
            wipeout: out.wipeout,
            prunings: prunings
                .iter()
                .map(|pr| PruningRecord {
                    var: names.var(pr.var),
                    value: pr.value,
                    cause: cause(pr.cause, prob.constraints()),
                })
                .collect(),
            duals,
        };
        println!("{}", serde_json::to_string_pretty(&record)?);
        return Ok(Status::Ok);
    }
    println!("level: {level_name}");
    println!("method: {}", method_name(method));
    println!("wipeout: {}", if out.wipeout { "yes" } else { "no" });
    println!("prunings: {}", prunings.len());
    let rows: Vec<Vec<String>> = prunings
        .iter()
        .map(|pr| vec![format!("{}={}", names.var(pr.var), pr.value), cause(pr.cause, prob.constraints())])
        .collect();
    print!("{}", table(&rows));
    if let Some(duals) = duals {
        println!("dual domains:");
        let rows: Vec<Vec<String>> = duals.into_iter().map(|(name, vals)| vec![name, value_set(vals)]).collect();
        print!("{}", table(&rows));
    }
    Ok(Status::Ok)
}

type PairSet = BTreeSet<(Var, Value)>;

/// Pruned pairs among the first `n` variables; a wipeout counts as
/// pruning everything.
fn pruned(out: &PropagationOutcome, initial: &Problem, n: usize) -> PairSet {
    if out.wipeout {
        return (0..n).flat_map(|v| initial.domains().values(v).map(move |x| (v, x))).collect();
    }
    out.pruned_pairs().into_iter().filter(|&(v, _)| v < n).collect()
}

fn relation(a: &PairSet, b: &PairSet) -> &'static str {
    match (a.is_subset(b), b.is_subset(a)) {
        (true, true) => "=",
        (true, false) => "⊊",
        (false, true) => "⊋",
        (false, false) => "incomparable",
    }
}

pub fn compare(path: &Path, budget_flag: Option<u128>) -> anyhow::Result<Status> {
    let p = load(path)?;
    let n = p.num_vars();
    partition_of(&p, Method::Precedence)?;
    let budget = budget(budget_flag)?;
    let lex = prepare(&p, Method::GeneratorLex)?.problem;
    let prec = prepare(&p, Method::Precedence)?.problem;
    let enc = prepare(&p, Method::Puget)?.problem;
    let runs: Vec<(&str, PropagationOutcome)> = vec![
        ("generator-lex", propagate_fixpoint(&lex, lex.domains().clone())),
        ("precedence", propagate_fixpoint(&prec, prec.domains().clone())),
        ("puget-ac", propagate_fixpoint(&enc, enc.domains().clone())),
        ("puget-sac", enforce_sac(&enc, enc.domains())),
        ("oracle", oracle(&p, true, budget)?),
    ];
    let sets: Vec<(&str, PairSet, bool)> =
        runs.iter().map(|(name, out)| (*name, pruned(out, &p, n), out.wipeout)).collect();
    let mut rows = vec![vec!["method".to_string(), "pruned".into(), "wipeout".into(), "values".into()]];
    for (name, set, wipeout) in &sets {
        let values: Vec<String> = set.iter().map(|&(v, x)| format!("X{}={x}", v + 1)).collect();
        rows.push(vec![
            name.to_string(),
            set.len().to_string(),
            if *wipeout { "yes" } else { "no" }.into(),
            values.join(" "),
        ]);
    }
    print!("{}", table(&rows));
    println!();
    let get = |name: &str| &sets.iter().find(|s| s.0 == name).expect("known method").1;
    let order =
        [("generator-lex", "puget-ac"), ("puget-ac", "puget-sac"), ("puget-sac", "oracle"), ("precedence", "oracle")];
    let mut violations = 0;
    let mut rows = Vec::new();
    for (weak, strong) in order {
        let ok = get(weak).is_subset(get(strong));
        violations += usize::from(!ok);
        rows.push(vec![
            weak.to_string(),
            relation(get(weak), get(strong)).into(),
            strong.to_string(),
            if ok { "ok".into() } else { "VIOLATION".into() },
        ]);
    }
    print!("{}", table(&rows));
    println!("violations: {violations}");
    Ok(if violations == 0 { Status::Ok } else { Status::CheckFailed })
}

pub fn reduce(cnf: &Path, check: bool, out: Option<&Path>) -> anyhow::Result<Status> {
    let text = std::fs::read_to_string(cnf).with_context(|| format!("reading {}", cnf.display()))?;
    let f = parse_dimacs(&text)?;
    if check && f.num_vars() > 3 {
        return Err(Limit::CheckTooLarge(f.num_vars()).into());
    }
    let (problem, _) = reduce_3sat(&f)?;
    let json = ProblemFile::from_problem(&problem).to_json();
    match out {
        Some(path) => std::fs::write(path, json + "\n").with_context(|| format!("writing {}", path.display()))?,
        None => println!("{json}"),
    }
    if check {
        let support = reduction_support_exists(&f)?;
        let sat = f.is_satisfiable_brute_force();
        let yn = |b: bool| if b { "yes" } else { "no" };
        println!("support exists: {}, SAT: {}", yn(support), yn(sat));
        if support != sat {
            return Ok(Status::CheckFailed);
        }
    }
    Ok(Status::Ok)
}

fn describe_witness(w: &Witness, names: &Names) -> String {
    let Witness::Unextendable { partial, var } = w;
    let assigned: Vec<String> = partial.iter().map(|&(v, x)| format!("{}={x}", names.var(v))).collect();
    let lhs = if assigned.is_empty() { "the empty assignment".to_string() } else { assigned.join(", ") };
    format!("{lhs} cannot be extended to {}", names.var(*var))
}

pub fn kcheck(family: KFamily, k: usize, budget_flag: Option<u128>) -> anyhow::Result<Status> {
    let budget = budget(budget_flag)?;
    let KFamily::PairedPigeonhole = family;
    let enc = paired_pigeonhole_encoding(k);
    let names = Names { encoding: Some(&enc) };
    println!(
        "family: paired-pigeonhole, k={k}, encoding: {} variables over {} values",
        enc.problem.num_vars(),
        enc.problem.max_value()
    );
    let mut strong = true;
    for j in 1..=k + 1 {
        let report = is_k_consistent(&enc.problem, j, budget)?;
        let was_strong = strong;
        strong &= report.holds;
        let mut line = format!(
            "level {j}: {j}-consistent {}, strongly {j}-consistent {}",
            if report.holds { "yes" } else { "no" },
            if strong { "yes" } else { "no" }
        );
        if was_strong && !strong {
            if let Some(w) = &report.witness {
                line.push_str(&format!("; witness: {}", describe_witness(w, &names)));
            }
        }
        println!("{line}");
    }
    Ok(Status::Ok)
}

pub fn generate(family: Family, n: usize, k: usize) -> anyhow::Result<Status> {
    let problem = match family {
        Family::Pigeonhole => {
            if n == 0 {
                bail!("--n must be at least 1");
            }
            pigeonhole_model(n)
        }
        Family::GeneratorGap => generator_gap_example().0,
        Family::ChannellingGap => channelling_gap_example().0,
        Family::PairedPigeonhole => {
            if k == 0 {
                bail!("--k must be at least 1");
            }
            paired_pigeonhole(k)
        }
    };
    println!("{}", ProblemFile::from_problem(&problem).to_json());
    Ok(Status::Ok)
}
