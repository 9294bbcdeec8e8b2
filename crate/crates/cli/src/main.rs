//! `vmkit` command-line front end.
//!
//! Exit codes: 0 decided true or success, 1 decided false, 2 usage or input
//! error, 3 a size cap was exceeded.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value as Json};

use vmkit::extraction::{plan_extraction, Basis};
use vmkit::gf2::cut_rank;
use vmkit::mslogic::{
    build_vm_formula, family_formula, identity_assignment, method1_sequence, method2_sequence, Assignment, Evaluator,
    Program, DEFAULT_BRUTEFORCE_LIMIT,
};
use vmkit::rankwidth::{rank_width_exact_with_limit, DEFAULT_RANKWIDTH_LIMIT};
use vmkit::sim::{
    graph_state_with_limit, schmidt_rank_log2, stabilizer_deviation, verify_lc_rule, verify_measurement_rule,
    verify_multi_z, DEFAULT_SIM_LIMIT, STRUCTURE_TOL,
};
use vmkit::vertex_minor::{has_ghz_minor, lc_equivalent_with_limit, lc_orbit_with_limit, DEFAULT_ORBIT_LIMIT};
use vmkit::{Error, Graph, LcSequence, Vertex, MAX_VERTICES};

#[derive(Parser, Debug)]
#[command(name = "vmkit", version, about = "Vertex-minors of graph states")]
#[command(after_help = "Graph files hold a header `n m`, an optional `V: l1 l2 ...` line \
listing every vertex (needed for isolated ones), then m lines `u v`. Lines starting with # \
are ignored. A file whose first character is `{` is read as JSON \
{\"vertices\": [...], \"edges\": [[u, v], ...]}.\n\n\
Exit codes: 0 true/success, 1 false, 2 usage or input error, 3 size cap exceeded.")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,

    /// Seed for every random choice; fixed seed gives identical output.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Largest graph accepted by exponential procedures (search, rank-width,
    /// formula evaluation, simulation).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    max_n: Option<u64>,

    /// Largest graph whose LC orbit is enumerated.
    #[arg(long, global = true, default_value_t = DEFAULT_ORBIT_LIMIT as u64,
          value_parser = clap::value_parser!(u64).range(1..))]
    max_orbit: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Is H a vertex-minor of G? Prints a witness sequence when it is.
    Vm { g: PathBuf, h: PathBuf },
    /// Can a GHZ state on the given nodes be extracted from G?
    Ghz {
        g: PathBuf,
        /// Comma-separated vertex labels.
        #[arg(long, value_delimiter = ',', required = true)]
        nodes: Vec<Vertex>,
    },
    /// Clifford stage, Z-measurement round and corrections extracting H from G.
    Plan {
        g: PathBuf,
        h: PathBuf,
        /// Measure only the boundary of the target and keep the rest entangled.
        #[arg(long)]
        preserve_rest: bool,
    },
    /// Exact rank-width and a witness decomposition tree.
    Rankwidth { g: PathBuf },
    /// Are G and H related by local complementations?
    LcEquiv { g: PathBuf, h: PathBuf },
    /// Enumerate the LC orbit of G.
    Orbit { g: PathBuf },
    /// Evaluate a built-in formula (Disjoint, Part, EvenInter, Member, Eul,
    /// Base, Adj, or VM with --target) on G.
    EvalFormula {
        name: String,
        g: PathBuf,
        /// Assignment as JSON, or @path to a JSON file; numbers are vertices,
        /// arrays are sets.
        #[arg(default_value = "{}")]
        assignment: String,
        /// Target graph for the VM formula; its free variables default to x<label> ↦ label.
        #[arg(long)]
        target: Option<PathBuf>,
    },
    /// A local-complementation sequence m with τ_m(G)[V(H)] = H.
    Sequence {
        g: PathBuf,
        h: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::One)]
        method: Method,
    },
    /// Run the statevector checks on the given graphs, or on a seeded random
    /// corpus, and print one JSON line per check.
    Verify {
        graphs: Vec<PathBuf>,
        /// Size of the random corpus when no graphs are given.
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
}

/// Failure that maps onto an exit code.
enum Failure {
    Input(String),
    Limit(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        if e.is_limit() {
            Failure::Limit(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type Outcome = Result<bool, Failure>;

struct Ctx {
    json: bool,
    seed: u64,
    max_n: Option<usize>,
    max_orbit: usize,
    out: Vec<u8>,
}

impl Ctx {
    fn emit(&mut self, value: &Json, human: impl FnOnce() -> String) {
        if self.json {
            let _ = writeln!(self.out, "{value}");
        } else {
            let _ = write!(self.out, "{}", human());
        }
    }

    fn limit(&self, default: usize) -> usize {
        self.max_n.unwrap_or(default)
    }

    /// Enforces --max-n on procedures that have no cap of their own.
    fn check_size(&self, g: &Graph) -> Result<(), Failure> {
        match self.max_n {
            Some(m) if g.len() > m => Err(Error::LimitExceeded {
                what: "graph vertex count",
                actual: g.len(),
                limit: m,
            }
            .into()),
            _ => Ok(()),
        }
    }
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let parsed = if text.trim_start().starts_with('{') {
        serde_json::from_str::<Graph>(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    } else {
        text.parse::<Graph>().map_err(|e| match Failure::from(e) {
            Failure::Input(m) => Failure::Input(format!("{}: {m}", path.display())),
            lim => lim,
        })
    };
    parsed
}

fn read_assignment(arg: &str) -> Result<Assignment, Failure> {
    let text = match arg.strip_prefix('@') {
        Some(p) => fs::read_to_string(p).map_err(|e| Failure::Input(format!("{p}: {e}")))?,
        None => arg.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("assignment: {e}")))
}

fn seq_text(m: &LcSequence) -> String {
    if m.is_empty() {
        "(empty)".into()
    } else {
        m.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
    }
}

fn list_text<'a>(vs: impl IntoIterator<Item = &'a Vertex>) -> String {
    vs.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

/// `{is_minor, sequence, measure}` shared by `vm` and `ghz`.
fn report_minor(ctx: &mut Ctx, g: &Graph, kept: &BTreeSet<Vertex>, seq: Option<LcSequence>) -> Outcome {
    let measure: Vec<Vertex> = g.vertices().iter().filter(|v| !kept.contains(v)).copied().collect();
    let found = seq.is_some();
    let value = match &seq {
        Some(m) => json!({"is_minor": true, "sequence": m, "measure": measure}),
        None => json!({"is_minor": false, "sequence": null, "measure": null}),
    };
    ctx.emit(&value, || match &seq {
        Some(m) => format!(
            "vertex-minor: yes\nsequence: {}\nmeasure: {}\n",
            seq_text(m),
            list_text(&measure)
        ),
        None => "vertex-minor: no\n".into(),
    });
    Ok(found)
}

fn cmd_vm(ctx: &mut Ctx, g: &Path, h: &Path) -> Outcome {
    let (g, h) = (read_graph(g)?, read_graph(h)?);
    ctx.check_size(&g)?;
    let w = vmkit::vertex_minor::is_vertex_minor(&g, &h)?;
    report_minor(ctx, &g, &h.vertex_set(), w.map(|w| w.sequence))
}

fn cmd_ghz(ctx: &mut Ctx, g: &Path, nodes: &[Vertex]) -> Outcome {
    let g = read_graph(g)?;
    ctx.check_size(&g)?;
    let nodes: BTreeSet<Vertex> = nodes.iter().copied().collect();
    let w = has_ghz_minor(&g, &nodes)?;
    report_minor(ctx, &g, &nodes, w.map(|w| w.sequence))
}

fn cmd_plan(ctx: &mut Ctx, g: &Path, h: &Path, preserve_rest: bool) -> Outcome {
    let (g, h) = (read_graph(g)?, read_graph(h)?);
    ctx.check_size(&g)?;
    let Some(plan) = plan_extraction(&g, &h, preserve_rest)? else {
        ctx.emit(&json!({"is_minor": false}), || "no plan: the target is not a qubit-minor\n".into());
        return Ok(false);
    };
    let value = plan.to_json();
    ctx.emit(&value, || {
        let mut s = format!("sequence: {}\n", seq_text(&plan.clifford_stage));
        s += &format!("measure in Z: {}\n", list_text(&plan.measured));
        for (v, set) in &plan.correction_sets {
            if !set.is_empty() {
                s += &format!("Z on {v} if the outcomes of {{{}}} have odd parity\n", list_text(set));
            }
        }
        if !plan.reset_to_plus.is_empty() {
            s += &format!("reset to |+>: {}\n", list_text(&plan.reset_to_plus));
        }
        if !plan.residual.is_empty() {
            s += &format!("residual: {}\n", plan.residual);
        }
        s
    });
    Ok(true)
}

fn cmd_rankwidth(ctx: &mut Ctx, g: &Path) -> Outcome {
    let g = read_graph(g)?;
    let (w, d) = rank_width_exact_with_limit(&g, ctx.limit(DEFAULT_RANKWIDTH_LIMIT))?;
    let value = match &d {
        Some(d) => json!({"width": w, "tree_edges": d.edges(), "leaves": d.leaf_map}),
        None => json!({"width": w, "tree_edges": [], "leaves": {}}),
    };
    ctx.emit(&value, || {
        let tree = d.as_ref().map(|d| d.render()).unwrap_or_default();
        format!("rank-width: {w}\n{tree}")
    });
    Ok(true)
}

fn cmd_lc_equiv(ctx: &mut Ctx, g: &Path, h: &Path) -> Outcome {
    let (g, h) = (read_graph(g)?, read_graph(h)?);
    let m = lc_equivalent_with_limit(&g, &h, ctx.max_orbit)?;
    let value = json!({"equivalent": m.is_some(), "sequence": m});
    ctx.emit(&value, || match &m {
        Some(m) => format!("LC-equivalent: yes\nsequence: {}\n", seq_text(m)),
        None => "LC-equivalent: no\n".into(),
    });
    Ok(m.is_some())
}

fn cmd_orbit(ctx: &mut Ctx, g: &Path) -> Outcome {
    let g = read_graph(g)?;
    let orbit = lc_orbit_with_limit(&g, ctx.max_orbit)?;
    let members: Vec<Json> = (0..orbit.len())
        .map(|i| json!({"sequence": orbit.sequence_to(i), "edges": orbit.members()[i].edges()}))
        .collect();
    let value = json!({"size": orbit.len(), "members": members});
    ctx.emit(&value, || {
        let mut s = format!("orbit size: {}\n", orbit.len());
        for (i, m) in orbit.members().iter().enumerate() {
            s += &format!("[{}] {:?}\n", seq_text(&orbit.sequence_to(i)), m.edges());
        }
        s
    });
    Ok(true)
}

fn cmd_eval_formula(ctx: &mut Ctx, name: &str, g: &Path, assignment: &str, target: Option<&Path>) -> Outcome {
    let g = read_graph(g)?;
    let mut a = read_assignment(assignment)?;
    let (label, formula) = if name.eq_ignore_ascii_case("vm") {
        let h = read_graph(target.ok_or_else(|| Failure::Input("VM needs --target".into()))?)?;
        let f = build_vm_formula(&h);
        let free = f.free_names();
        for (k, v) in identity_assignment(&h).0 {
            if free.contains(&k) {
                a.0.entry(k).or_insert(v);
            }
        }
        ("VM".to_string(), f)
    } else {
        let f = family_formula(name).ok_or_else(|| Failure::Input(format!("unknown formula `{name}`")))?;
        (f.name.to_string(), f.formula)
    };
    let mut prog = Program::new();
    let c = prog.compile(&formula)?;
    let mut ev = Evaluator::with_limit(&prog, &g, ctx.limit(DEFAULT_BRUTEFORCE_LIMIT))?;
    let value = ev.evaluate(&c, &a)?;
    let qr = formula.quantifier_rank();
    ctx.emit(
        &json!({"formula": label, "value": value, "quantifier_rank": qr}),
        || format!("{label}: {value}\n"),
    );
    Ok(value)
}

fn cmd_sequence(ctx: &mut Ctx, g: &Path, h: &Path, method: Method) -> Outcome {
    let (g, h) = (read_graph(g)?, read_graph(h)?);
    let m = match method {
        Method::One => {
            ctx.check_size(&g)?;
            method1_sequence(&g, &h)?
        }
        Method::Two => {
            // The formula evaluator carries its own cap.
            let limit = ctx.limit(DEFAULT_BRUTEFORCE_LIMIT);
            if g.len() > limit {
                return Err(Error::LimitExceeded {
                    what: "brute-force evaluation vertex count",
                    actual: g.len(),
                    limit,
                }
                .into());
            }
            method2_sequence(&g, &h)?
        }
    };
    let value = json!({"is_minor": m.is_some(), "sequence": m});
    ctx.emit(&value, || match &m {
        Some(m) => format!("sequence: {}\n", seq_text(m)),
        None => "vertex-minor: no\n".into(),
    });
    Ok(m.is_some())
}

fn random_corpus(rng: &mut ChaCha8Rng, count: usize, max_n: usize) -> Vec<Graph> {
    (0..count)
        .map(|_| {
            let n = rng.random_range(2..=max_n.max(2));
            let labels: Vec<Vertex> = (0..n as Vertex).collect();
            Graph::random(&labels, 0.5, rng).expect("labels are distinct and few")
        })
        .collect()
}

fn cmd_verify(ctx: &mut Ctx, paths: &[PathBuf], count: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let sim_limit = ctx.limit(DEFAULT_SIM_LIMIT);
    let graphs = if paths.is_empty() {
        random_corpus(&mut rng, count, sim_limit.min(6))
    } else {
        paths.iter().map(|p| read_graph(p)).collect::<Result<Vec<_>, _>>()?
    };
    for g in &graphs {
        // Surfaces the simulator cap before any output.
        graph_state_with_limit(g, sim_limit)?;
    }
    let mut lines = Vec::new();
    let mut failed = 0usize;
    let mut record = |lines: &mut Vec<Json>, mut v: Json, passed: bool| {
        if !passed {
            failed += 1;
        }
        v["passed"] = json!(passed);
        lines.push(v);
    };
    for (i, g) in graphs.iter().enumerate() {
        let dev = stabilizer_deviation(g)?;
        record(&mut lines, json!({"graph": i, "check": "stabilizer", "deviation": dev}), dev <= 1e-12);
        for &v in g.vertices() {
            let ok = verify_lc_rule(g, v, STRUCTURE_TOL)?;
            record(&mut lines, json!({"graph": i, "check": "lc_rule", "vertex": v}), ok);
            for basis in [Basis::Z, Basis::Y, Basis::X] {
                let r = verify_measurement_rule(g, v, basis)?;
                record(
                    &mut lines,
                    json!({"graph": i, "check": "measurement", "vertex": v, "basis": basis}),
                    r.passed,
                );
            }
        }
        let mut vs = g.vertices().to_vec();
        vs.shuffle(&mut rng);
        let k = rng.random_range(1..=vs.len());
        let outcomes: BTreeMap<Vertex, bool> = vs[..k].iter().map(|&v| (v, rng.random())).collect();
        let ok = verify_multi_z(g, &outcomes, STRUCTURE_TOL)?;
        record(&mut lines, json!({"graph": i, "check": "multi_z", "outcomes": outcomes}), ok);
        let part: BTreeSet<Vertex> = g.vertices().iter().filter(|_| rng.random()).copied().collect();
        let cr = cut_rank(g, &part)?;
        let sr = schmidt_rank_log2(&vmkit::sim::graph_state(g)?, &part)?;
        record(
            &mut lines,
            json!({"graph": i, "check": "cut_rank", "part": part, "cut_rank": cr, "schmidt_rank_log2": sr}),
            cr == sr,
        );
    }
    let total = lines.len();
    if ctx.json {
        for l in &lines {
            let _ = writeln!(ctx.out, "{l}");
        }
        let _ = writeln!(ctx.out, "{}", json!({"summary": {"checks": total, "failed": failed}}));
    } else {
        for l in lines.iter().filter(|l| l["passed"] == json!(false)) {
            let _ = writeln!(ctx.out, "FAIL {l}");
        }
        let _ = writeln!(ctx.out, "{} checks on {} graphs, {failed} failed", total, graphs.len());
    }
    Ok(failed == 0)
}

fn run(cli: Cli, ctx: &mut Ctx) -> Outcome {
    match &cli.command {
        Command::Vm { g, h } => cmd_vm(ctx, g, h),
        Command::Ghz { g, nodes } => cmd_ghz(ctx, g, nodes),
        Command::Plan { g, h, preserve_rest } => cmd_plan(ctx, g, h, *preserve_rest),
        Command::Rankwidth { g } => cmd_rankwidth(ctx, g),
        Command::LcEquiv { g, h } => cmd_lc_equiv(ctx, g, h),
        Command::Orbit { g } => cmd_orbit(ctx, g),
        Command::EvalFormula { name, g, assignment, target } => {
            cmd_eval_formula(ctx, name, g, assignment, target.as_deref())
        }
        Command::Sequence { g, h, method } => cmd_sequence(ctx, g, h, *method),
        Command::Verify { graphs, count } => cmd_verify(ctx, graphs, *count),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut ctx = Ctx {
        json: cli.json,
        seed: cli.seed,
        max_n: cli.max_n.map(|m| (m as usize).min(MAX_VERTICES)),
        max_orbit: cli.max_orbit as usize,
        out: Vec::new(),
    };
    let result = run(cli, &mut ctx);
    let _ = io::stdout().write_all(&ctx.out);
    match result {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Limit(m)) => {
            eprintln!("limit: {m}");
            ExitCode::from(3)
        }
    }
}
