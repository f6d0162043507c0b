//! Command implementations behind the CLI surface.
//!
//! Every command returns a JSON value describing the outcome; the binary
//! renders it (pretty JSON under `--json`, terse lines otherwise) and maps
//! errors to exit codes: 1 for operation/verification failures, 2 for usage
//! errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num::ToPrimitive;
use serde_json::{json, Value};

use matchpoly::lp::{monotone_weights, pivot_run, PivotRule, WeightFunction};
use matchpoly::recovery::{longest_directed_cycle, recover_long_cycle, FlipTrace};
use matchpoly::reduction::{
    build_reduction, random_hamiltonian_digraph, two_flip_witness, ReductionInstance,
};
use matchpoly::skeleton::{
    enumerate_perfect_matchings, is_adjacent, skeleton_distance, sym_diff_decompose,
};
use matchpoly::{Cycle, Error as CoreError, PerfectMatching};

use crate::formats::{
    emit_cycle, emit_digraph, emit_graph, emit_json, emit_matching, emit_weights, parse_cycle,
    parse_digraph, parse_graph, parse_json, parse_matching, parse_orientation, parse_rational,
    parse_weights, BundleDto, ParseError, TraceDto, BUNDLE_SCHEMA, REPORT_SCHEMA,
};
use crate::report::{ExperimentReport, OracleResult, ReportRow, RuleResult, PRNG_NAME};

#[derive(Debug)]
pub enum CmdError {
    /// Bad flag combination or value: exit code 2.
    Usage(String),
    /// Operation failure: exit code 1.
    Failed(String),
    /// Verification ran and found violations: exit code 1, with the full
    /// check table attached.
    Verification(Value),
}

impl From<ParseError> for CmdError {
    fn from(e: ParseError) -> Self {
        CmdError::Failed(e.to_string())
    }
}

impl From<CoreError> for CmdError {
    fn from(e: CoreError) -> Self {
        CmdError::Failed(e.to_string())
    }
}

impl From<std::io::Error> for CmdError {
    fn from(e: std::io::Error) -> Self {
        CmdError::Failed(e.to_string())
    }
}

pub type CmdResult = Result<Value, CmdError>;

fn read(path: &Path) -> Result<String, CmdError> {
    fs::read_to_string(path).map_err(|e| CmdError::Failed(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), CmdError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::write(path, contents).map_err(|e| CmdError::Failed(format!("{}: {e}", path.display())))?;
    Ok(())
}

fn parse_probability(p: &str) -> Result<f64, CmdError> {
    let r = parse_rational(p, 0).map_err(|e| CmdError::Usage(format!("--p: {e}")))?;
    let v = r
        .to_f64()
        .ok_or_else(|| CmdError::Usage("--p out of range".into()))?;
    if !(0.0..=1.0).contains(&v) {
        return Err(CmdError::Usage("--p must lie in [0, 1]".into()));
    }
    Ok(v)
}

/// Parses a bundle and reconstructs its instance by rerunning the
/// deterministic construction, cross-checking every stored field.
pub fn load_bundle(path: &Path) -> Result<ReductionInstance, CmdError> {
    let dto: BundleDto = parse_json(&read(path)?)?;
    if dto.schema != BUNDLE_SCHEMA {
        return Err(CmdError::Failed(format!(
            "unknown bundle schema {:?}",
            dto.schema
        )));
    }
    let d = dto.digraph.to_digraph()?;
    let ham = dto
        .ham
        .clone()
        .map(Cycle::new)
        .transpose()
        .map_err(CmdError::from)?;
    let r = build_reduction(&d, ham.as_ref())?;
    let rebuilt = BundleDto::from_instance(&r);
    if rebuilt != dto {
        return Err(CmdError::Failed(
            "bundle contents disagree with the deterministic rebuild".into(),
        ));
    }
    Ok(r)
}

// ---- generate ----------------------------------------------------------

pub fn cmd_generate(seed: u64, n: usize, p: &str, out: Option<&Path>) -> CmdResult {
    let prob = parse_probability(p)?;
    let (d, ham) = random_hamiltonian_digraph(seed, n, prob)?;
    let mut files = Vec::new();
    if let Some(dir) = out {
        let digraph_path = dir.join("digraph.txt");
        let ham_path = dir.join("ham.txt");
        write(&digraph_path, &emit_digraph(&d))?;
        write(&ham_path, &emit_cycle(&ham))?;
        files = vec![digraph_path, ham_path];
    }
    Ok(json!({
        "seed": seed,
        "prng": PRNG_NAME,
        "n": n,
        "p": p,
        "arc_count": d.arc_count(),
        "ham": ham.vertices(),
        "files": files.iter().map(|f| f.display().to_string()).collect::<Vec<_>>(),
    }))
}

// ---- reduce -------------------------------------------------------------

pub fn cmd_reduce(digraph: &Path, ham: Option<&Path>, out: Option<&Path>) -> CmdResult {
    let d = parse_digraph(&read(digraph)?)?;
    let ham = match ham {
        Some(path) => Some(parse_cycle(&read(path)?)?),
        None => None,
    };
    let r = build_reduction(&d, ham.as_ref())?;
    let dto = BundleDto::from_instance(&r);
    if let Some(path) = out {
        write(path, &emit_json(&dto))?;
    }
    Ok(json!({
        "n": d.vertex_count(),
        "arc_count": d.arc_count(),
        "big_n": r.vertex_count(),
        "size_bound": 8 * d.vertex_count() * d.vertex_count(),
        "edge_count": r.graph().edge_count(),
        "bundle": out.map(|p| p.display().to_string()),
    }))
}

// ---- distance -----------------------------------------------------------

pub struct DistanceArgs<'a> {
    pub bundle: Option<&'a Path>,
    pub graph: Option<&'a Path>,
    pub m1: Option<&'a Path>,
    pub m2: Option<&'a Path>,
    pub oracle_cap: usize,
}

pub fn cmd_distance(args: DistanceArgs<'_>) -> CmdResult {
    let (m1, m2) = match (args.bundle, args.graph) {
        (Some(bundle), None) => {
            let r = load_bundle(bundle)?;
            (r.m1().clone(), r.m2().clone())
        }
        (None, Some(graph)) => {
            let (Some(m1), Some(m2)) = (args.m1, args.m2) else {
                return Err(CmdError::Usage(
                    "--graph needs --m1 and --m2 matching files".into(),
                ));
            };
            let g = parse_graph(&read(graph)?)?;
            (
                parse_matching(&read(m1)?, &g)?,
                parse_matching(&read(m2)?, &g)?,
            )
        }
        _ => {
            return Err(CmdError::Usage(
                "pass exactly one of --bundle or --graph".into(),
            ))
        }
    };
    let started = Instant::now();
    let distance = skeleton_distance(&m1, &m2, args.oracle_cap)?;
    let decomposition = sym_diff_decompose(&m1, &m2)?;
    Ok(json!({
        "distance": distance,
        "reachable": distance.is_some(),
        "sym_diff_cycles": decomposition.len(),
        "adjacent": is_adjacent(&m1, &m2)?,
        "millis": started.elapsed().as_millis() as u64,
    }))
}

// ---- recover --------------------------------------------------------------

pub fn cmd_recover(trace: &Path, ell: usize, cycle: Option<&Path>) -> CmdResult {
    let dto: TraceDto = parse_json(&read(trace)?)?;
    let trace = dto.to_trace()?;
    let c = match cycle {
        Some(path) => parse_cycle(&read(path)?)?,
        None => {
            let (found, _) = longest_directed_cycle(trace.last(), 100_000);
            found
                .ok_or_else(|| CmdError::Failed("final orientation has no directed cycle".into()))?
        }
    };
    let out = recover_long_cycle(ell, &trace, &c)?;
    // Independent re-verification of the output, not trusting the library
    // path that produced it.
    trace
        .initial()
        .check_directed(&out)
        .map_err(|_| CmdError::Failed("recovered cycle not directed in D0".into()))?;
    if out.len() < ell {
        return Err(CmdError::Failed("recovered cycle shorter than ell".into()));
    }
    Ok(json!({
        "ell": ell,
        "input_length": c.len(),
        "cycle": out.vertices(),
        "length": out.len(),
        "verified": true,
    }))
}

// ---- weights ----------------------------------------------------------------

fn witness_weights(
    r: &ReductionInstance,
) -> Result<(WeightFunction, Vec<PerfectMatching>), CmdError> {
    let ham = r
        .planted_ham()
        .ok_or_else(|| CmdError::Failed("bundle carries no hamiltonian cycle".into()))?
        .clone();
    let path = two_flip_witness(r, &ham)?;
    let ms = path.replay()?;
    let w = monotone_weights(&ms[0], &ms[1], &ms[2])?;
    Ok((w, ms))
}

pub fn cmd_weights(bundle: &Path, out: Option<&Path>) -> CmdResult {
    let r = load_bundle(bundle)?;
    let (w, ms) = witness_weights(&r)?;
    if let Some(path) = out {
        write(path, &emit_weights(&w))?;
    }
    let fmt = |x: &num::BigRational| format!("{}/{}", x.numer(), x.denom());
    Ok(json!({
        "edges": r.graph().edge_count(),
        "w_m1": fmt(&w.matching_weight(&ms[0])),
        "w_mid": fmt(&w.matching_weight(&ms[1])),
        "w_m2": fmt(&w.matching_weight(&ms[2])),
        "file": out.map(|p| p.display().to_string()),
    }))
}

// ---- pivot ------------------------------------------------------------------

pub fn cmd_pivot(bundle: &Path, rule: &str, cap: usize, weights: Option<&Path>) -> CmdResult {
    let rule: PivotRule = rule
        .parse()
        .map_err(|e: CoreError| CmdError::Usage(e.to_string()))?;
    let r = load_bundle(bundle)?;
    let w = match weights {
        Some(path) => parse_weights(&read(path)?, r.graph())?,
        None => witness_weights(&r)?.0,
    };
    let started = Instant::now();
    let run = pivot_run(&w, r.m1(), rule, cap)?;
    let fmt = |x: &num::BigRational| format!("{}/{}", x.numer(), x.denom());
    Ok(json!({
        "rule": rule.id(),
        "steps": run.steps(),
        "terminal_weight": fmt(run.terminal_weight()),
        "truncated": run.truncated,
        "reached_m2": run.path.end()? == *r.m2(),
        "weight_trace": run.weight_trace.iter().map(fmt).collect::<Vec<_>>(),
        "millis": started.elapsed().as_millis() as u64,
    }))
}

// ---- verify -----------------------------------------------------------------

struct Checks {
    rows: Vec<Value>,
    ok: bool,
}

impl Checks {
    fn new() -> Self {
        Checks {
            rows: Vec::new(),
            ok: true,
        }
    }

    fn push(&mut self, name: &str, result: Result<(), String>) {
        match result {
            Ok(()) => self.rows.push(json!({"check": name, "ok": true})),
            Err(detail) => {
                self.ok = false;
                self.rows
                    .push(json!({"check": name, "ok": false, "detail": detail}));
            }
        }
    }
}

fn check<E: std::fmt::Display>(r: Result<(), E>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

fn ensure(cond: bool, detail: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(detail.to_string())
    }
}

/// Re-derives every instance invariant from the serialized bundle alone.
pub fn cmd_verify(bundle: &Path, trace: Option<&Path>, oracle_cap: Option<usize>) -> CmdResult {
    let dto: BundleDto = parse_json(&read(bundle)?)?;
    let mut checks = Checks::new();

    checks.push(
        "schema",
        ensure(dto.schema == BUNDLE_SCHEMA, "unknown bundle schema"),
    );

    // Structural checks straight off the stored pieces.
    let graph = dto.graph.to_graph().map_err(CmdError::from)?;
    let d = dto.digraph.to_digraph().map_err(CmdError::from)?;
    let n = d.vertex_count();
    checks.push(
        "size-bound",
        ensure(
            graph.vertex_count() < 8 * n * n,
            &format!("{} >= 8n^2", graph.vertex_count()),
        ),
    );
    checks.push(
        "subcubic",
        ensure(graph.is_subcubic(), "degree above three"),
    );

    let orientation = parse_orientation(&dto.orientation, &graph).map_err(CmdError::from)?;
    let m1 = PerfectMatching::new(graph.clone(), dto.m1.clone());
    let m2 = PerfectMatching::new(graph.clone(), dto.m2.clone());
    checks.push("m1-perfect-matching", check(m1.as_ref().map(|_| ())));
    checks.push("m2-perfect-matching", check(m2.as_ref().map(|_| ())));
    let (Ok(m1), Ok(m2)) = (m1, m2) else {
        return Err(CmdError::Verification(json!({
            "ok": false,
            "checks": checks.rows,
        })));
    };

    checks.push(
        "orientation-encodes-m1",
        check(
            matchpoly::orientation_to_matching(&orientation)
                .map_err(|e| e.to_string())
                .and_then(|m| ensure(m == m1, "A-to-B arcs differ from m1")),
        ),
    );

    let dec = sym_diff_decompose(&m1, &m2).map_err(CmdError::from)?;
    checks.push(
        "sym-diff-n-disjoint-4cycles",
        ensure(
            dec.len() == n && dec.cycles().iter().all(|c| c.len() == 4),
            &format!("{} cycles", dec.len()),
        ),
    );

    checks.push(
        "gadget-flips-reach-m2",
        check((|| -> Result<(), String> {
            let mut m = m1.clone();
            for g in &dto.gadgets {
                let cycle = Cycle::new(g.cycle.to_vec()).map_err(|e| e.to_string())?;
                ensure(
                    orientation.is_directed_cycle(&cycle),
                    "gadget 4-cycle not directed",
                )?;
                m = m.flip(&cycle).map_err(|e| e.to_string())?;
            }
            ensure(m == m2, "flipping all gadget 4-cycles misses m2")
        })()),
    );

    // Deterministic rebuild must agree with every stored field.
    let ham = dto
        .ham
        .clone()
        .map(Cycle::new)
        .transpose()
        .map_err(CmdError::from)?;
    if let Some(h) = &ham {
        checks.push(
            "ham-is-hamiltonian",
            ensure(
                d.is_hamiltonian_cycle(h),
                "not a directed hamiltonian cycle",
            ),
        );
    }
    let rebuilt = build_reduction(&d, ham.as_ref());
    checks.push(
        "deterministic-rebuild",
        check(
            rebuilt
                .as_ref()
                .map_err(|e| e.to_string())
                .and_then(|r| ensure(BundleDto::from_instance(r) == dto, "stored fields differ")),
        ),
    );

    if let (Ok(r), Some(h)) = (&rebuilt, &ham) {
        checks.push(
            "witness-two-flips",
            check((|| -> Result<(), String> {
                let path = two_flip_witness(r, h).map_err(|e| e.to_string())?;
                let ms = path.replay().map_err(|e| e.to_string())?;
                ensure(ms[2] == m2, "witness replay misses m2")?;
                ensure(
                    is_adjacent(&ms[0], &ms[1]).map_err(|e| e.to_string())?
                        && is_adjacent(&ms[1], &ms[2]).map_err(|e| e.to_string())?,
                    "witness steps not single flips",
                )
            })()),
        );
    }

    if let Some(cap) = oracle_cap {
        checks.push(
            "oracle-distance-two",
            check((|| -> Result<(), String> {
                let d = skeleton_distance(&m1, &m2, cap).map_err(|e| e.to_string())?;
                ensure(d == Some(2), &format!("distance = {d:?}"))
            })()),
        );
    }

    if let Some(path) = trace {
        checks.push(
            "trace-valid",
            check((|| -> Result<(), String> {
                let dto: TraceDto = parse_json(&read(path).map_err(|e| match e {
                    CmdError::Failed(m) => m,
                    _ => "unreadable".into(),
                })?)
                .map_err(|e| e.to_string())?;
                dto.to_trace().map(|_| ()).map_err(|e| e.to_string())
            })()),
        );
    }

    let value = json!({"ok": checks.ok, "checks": checks.rows});
    if checks.ok {
        Ok(value)
    } else {
        Err(CmdError::Verification(value))
    }
}

// ---- experiment --------------------------------------------------------------

pub struct ExperimentArgs<'a> {
    pub seed: u64,
    pub runs: usize,
    pub n: usize,
    pub p: &'a str,
    pub rules: Vec<String>,
    pub cap: usize,
    pub oracle_cap: usize,
    pub out: Option<&'a PathBuf>,
}

pub fn cmd_experiment(args: ExperimentArgs<'_>) -> CmdResult {
    let prob = parse_probability(args.p)?;
    let rules: Vec<PivotRule> = if args.rules.is_empty() {
        PivotRule::ALL.to_vec()
    } else {
        args.rules
            .iter()
            .map(|r| {
                r.parse()
                    .map_err(|e: CoreError| CmdError::Usage(e.to_string()))
            })
            .collect::<Result<_, _>>()?
    };

    let mut rows = Vec::with_capacity(args.runs);
    for i in 0..args.runs {
        let seed = args.seed + i as u64;
        let (d, ham) = random_hamiltonian_digraph(seed, args.n, prob)?;
        let r = build_reduction(&d, Some(&ham))?;
        let (w, ms) = witness_weights(&r)?;

        // Exact distance: the BFS oracle when it fits under the cap, the
        // replayed witness plus a non-adjacency check otherwise.
        let started = Instant::now();
        let oracle = match skeleton_distance(r.m1(), r.m2(), args.oracle_cap) {
            Ok(distance) => OracleResult {
                distance,
                method: "bfs".to_string(),
                millis: started.elapsed().as_millis() as u64,
            },
            Err(CoreError::CapExceeded { .. }) => {
                let two = !is_adjacent(r.m1(), r.m2())?
                    && ms.last().unwrap() == r.m2()
                    && r.m1() != r.m2();
                OracleResult {
                    distance: two.then_some(2),
                    method: "witness".to_string(),
                    millis: started.elapsed().as_millis() as u64,
                }
            }
            Err(e) => return Err(e.into()),
        };

        // Enumerated optimum for the terminal-weight invariant, when the
        // instance is small enough.
        let optimum = enumerate_perfect_matchings(r.graph(), args.oracle_cap)
            .ok()
            .map(|all| {
                all.iter()
                    .map(|m| w.matching_weight(m))
                    .max()
                    .expect("nonempty")
            });

        let mut rule_results = Vec::new();
        for rule in &rules {
            let started = Instant::now();
            let run = pivot_run(&w, r.m1(), *rule, args.cap)?;
            let millis = started.elapsed().as_millis() as u64;
            if let Some(distance) = oracle.distance {
                if run.steps() < distance && !run.truncated {
                    return Err(CmdError::Failed(format!(
                        "rule {} finished in {} steps, below the oracle distance {distance}",
                        rule.id(),
                        run.steps()
                    )));
                }
            }
            if let Some(best) = &optimum {
                if run.terminal_weight() > best {
                    return Err(CmdError::Failed(
                        "terminal weight above the enumerated optimum".into(),
                    ));
                }
            }
            rule_results.push(RuleResult {
                rule: rule.id().to_string(),
                steps: run.steps(),
                terminal_weight: format!(
                    "{}/{}",
                    run.terminal_weight().numer(),
                    run.terminal_weight().denom()
                ),
                truncated: run.truncated,
                millis,
            });
        }

        rows.push(ReportRow {
            instance_id: format!("n{}-seed{}", args.n, seed),
            n: args.n,
            big_n: r.vertex_count(),
            seed,
            prng: PRNG_NAME.to_string(),
            oracle: Some(oracle),
            rules: rule_results,
        });
    }

    let report = ExperimentReport {
        schema: REPORT_SCHEMA.to_string(),
        rows,
    };
    if let Some(path) = args.out {
        write(path, &emit_json(&report))?;
    }
    Ok(serde_json::to_value(&report).expect("serializable"))
}

// ---- helpers shared with tests ------------------------------------------------

/// Emits the canonical files for a triangle instance into a directory;
/// returns the bundle path. Test and demo helper.
pub fn write_triangle_fixture(dir: &Path) -> Result<PathBuf, CmdError> {
    let d = matchpoly::Digraph::build(3, &[(0, 1), (1, 2), (2, 0)])?;
    let ham = Cycle::new(vec![0, 1, 2])?;
    write(&dir.join("digraph.txt"), &emit_digraph(&d))?;
    write(&dir.join("ham.txt"), &emit_cycle(&ham))?;
    let r = build_reduction(&d, Some(&ham))?;
    let bundle = dir.join("bundle.json");
    write(&bundle, &emit_json(&BundleDto::from_instance(&r)))?;
    write(&dir.join("graph.txt"), &emit_graph(r.graph()))?;
    write(&dir.join("m1.txt"), &emit_matching(r.m1()))?;
    write(&dir.join("m2.txt"), &emit_matching(r.m2()))?;
    Ok(bundle)
}

/// Serializes a flip trace; test and demo helper.
pub fn write_trace(path: &Path, trace: &FlipTrace) -> Result<(), CmdError> {
    write(path, &emit_json(&TraceDto::from_trace(trace)))
}
