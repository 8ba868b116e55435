use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hamcube::engine::{ham_path_matching, EngineConfig, EngineError};
use hamcube::forest::{counterexample, matching_bound, nnc_check};
use hamcube::io::{emit_edges, emit_instance, emit_path, emit_report, parse_instance, parse_path};
use hamcube::solver::{self, Budget, Outcome, SearchProblem};
use hamcube::verify::{self, SweepConfig, SweepReport};
use hamcube::{Dim, Vertex};

#[derive(Parser)]
#[command(name = "hamcube", version, about = "Hamiltonian paths in hypercubes through prescribed matchings")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    /// Input file (instance); stdin when absent.
    #[arg(long = "in", global = true)]
    input: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Wall-clock limit per exact-search call.
    #[arg(long, global = true)]
    budget_ms: Option<u64>,
    /// Node limit per exact-search call.
    #[arg(long, global = true)]
    node_cap: Option<u64>,
    /// Dimensions up to this are solved by exact search (at least 5).
    #[arg(long, global = true, default_value_t = 9)]
    n_base: u32,
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Fail instead of falling back to exact search.
    #[arg(long, global = true)]
    strict: bool,
    #[arg(long, global = true)]
    no_symmetry_reduction: bool,
    /// Record runtimes (reports are then no longer reproducible byte for byte).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a Hamiltonian path for an instance.
    Solve,
    /// Check a path file against an instance.
    Verify {
        #[arg(long)]
        path: PathBuf,
    },
    /// Print a random instance.
    Gen {
        #[arg(long)]
        n: u32,
        /// Matching size; defaults to 3n-13.
        #[arg(long)]
        m: Option<usize>,
    },
    /// Print the 2n-3 edge set no Hamiltonian path contains, with the oracle verdict.
    Counterexample {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
    },
    /// Exhaustive (--max-m) or random (--m, --trials) sweep.
    Sweep {
        #[arg(long)]
        n: u32,
        #[arg(long, conflicts_with = "m")]
        max_m: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
    },
    /// Engine against the exact oracle on random instances.
    CrossCheck {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 200)]
        trials: u64,
    },
    /// Runtime of the engine on random instances.
    Bench {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 20)]
        trials: u64,
    },
}

#[derive(Debug)]
enum Fail {
    Contract(String),
    Budget(String),
    Io(String),
}

impl Fail {
    fn code(&self) -> u8 {
        match self {
            Fail::Contract(_) => 1,
            Fail::Budget(_) => 2,
            Fail::Io(_) => 3,
        }
    }
}

type Res = Result<(), Fail>;

fn contract(e: impl std::fmt::Display) -> Fail {
    Fail::Contract(e.to_string())
}

fn read_input(path: Option<&Path>) -> Result<String, Fail> {
    let mut s = String::new();
    match path {
        Some(p) => s = fs::read_to_string(p).map_err(|e| Fail::Io(format!("{}: {e}", p.display())))?,
        None => {
            io::stdin().read_to_string(&mut s).map_err(|e| Fail::Io(format!("stdin: {e}")))?;
        }
    }
    Ok(s)
}

fn write_output(path: Option<&Path>, text: &str) -> Res {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Fail::Io(format!("{}: {e}", p.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| Fail::Io(format!("stdout: {e}"))),
    }
}

fn dim(n: u32) -> Result<Dim, Fail> {
    Dim::new(n).map_err(contract)
}

impl Opts {
    fn budget(&self) -> Budget {
        let mut b = EngineConfig::default().budget;
        if let Some(ms) = self.budget_ms {
            b.time_limit = Some(Duration::from_millis(ms));
        }
        if let Some(cap) = self.node_cap {
            b.node_limit = cap;
        }
        b.seed = self.seed;
        b
    }

    fn engine(&self) -> Result<EngineConfig, Fail> {
        if self.n_base < 5 {
            return Err(Fail::Contract(format!("--n-base must be at least 5, got {}", self.n_base)));
        }
        Ok(EngineConfig { n_base: self.n_base, budget: self.budget(), strict: self.strict, ..EngineConfig::default() })
    }

    fn sweep(&self) -> Result<SweepConfig, Fail> {
        Ok(SweepConfig {
            engine: self.engine()?,
            symmetry_reduction: !self.no_symmetry_reduction,
            jobs: self.jobs,
            timing: self.timing,
            ..SweepConfig::default()
        })
    }
}

fn report_exit(r: &SweepReport) -> Res {
    if r.all_passed() {
        Ok(())
    } else if r.failed() == r.budget_exhausted && r.disagreements == 0 {
        Err(Fail::Budget(format!("{} instances exhausted the budget", r.budget_exhausted)))
    } else {
        Err(Fail::Contract(format!("{} of {} instances failed", r.failed(), r.instances)))
    }
}

fn solve(o: &Opts) -> Res {
    let inst = parse_instance(&read_input(o.input.as_deref())?).map_err(contract)?;
    let start = Instant::now();
    let c = ham_path_matching(&inst, &o.engine()?).map_err(|e| match e {
        EngineError::BudgetExhausted { .. } => Fail::Budget(e.to_string()),
        _ => contract(e),
    })?;
    for ev in &c.trace.events {
        log::debug!("{ev}");
    }
    log::info!("{} construction steps, {} fallbacks", c.trace.stats.constructions, c.trace.stats.fallbacks);
    if o.timing {
        eprintln!("runtime_ms={}", start.elapsed().as_millis());
    }
    write_output(o.out.as_deref(), &emit_path(inst.n, c.path()))
}

fn verify_cmd(o: &Opts, path: &Path) -> Res {
    let inst = parse_instance(&read_input(o.input.as_deref())?).map_err(contract)?;
    let text = fs::read_to_string(path).map_err(|e| Fail::Io(format!("{}: {e}", path.display())))?;
    let (n, p) = parse_path(&text).map_err(contract)?;
    if n != inst.n {
        return Err(Fail::Contract(format!("path is in Q_{n}, instance in Q_{}", inst.n)));
    }
    match verify::verify_path(inst.n, &p, inst.x, inst.y, &inst.m) {
        Ok(()) => write_output(o.out.as_deref(), "ok\n"),
        Err(vs) => {
            let text: String = vs.iter().map(|v| format!("{v}\n")).collect();
            write_output(o.out.as_deref(), &text)?;
            Err(Fail::Contract(format!("{} violations", vs.len())))
        }
    }
}

fn gen(o: &Opts, n: u32, m: Option<usize>) -> Res {
    let d = dim(n)?;
    let m = m.unwrap_or_else(|| matching_bound(n));
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
    let mut inst = verify::random_instance(d, m, &mut rng).map_err(contract)?;
    inst.seed = Some(o.seed);
    write_output(o.out.as_deref(), &emit_instance(&inst))
}

fn vertex_arg(s: &str, n: Dim) -> Result<Vertex, Fail> {
    let (v, d) = Vertex::parse_bits(s).map_err(contract)?;
    if d != n {
        return Err(Fail::Contract(format!("{s} is not a vertex of Q_{n}")));
    }
    Ok(v)
}

fn counterexample_cmd(o: &Opts, n: u32, x: Option<&str>, y: Option<&str>) -> Res {
    let d = dim(n)?;
    let x = x.map(|s| vertex_arg(s, d)).transpose()?.unwrap_or(Vertex(0));
    let y = y.map(|s| vertex_arg(s, d)).transpose()?.unwrap_or(x.flip(n));
    let p = counterexample(d, x, y).map_err(contract)?;
    let complete = n <= 4;
    let budget = if complete { Budget::complete() } else { o.budget() };
    let problem = SearchProblem::ham_path(d, x, y, p.clone());
    let (outcome, stats) = solver::solve_with_stats(&problem, &budget).map_err(contract)?;
    let mut text = emit_edges(d, &p);
    text.push_str(&format!("# x={} y={} |P|={} nnc={}\n", x.to_bits(d), y.to_bits(d), p.len(), nnc_check(&p, x, y)));
    let verdict = match &outcome {
        Outcome::Unsat if complete => format!("# oracle: unsat (complete search, {} nodes)\n", stats.nodes),
        Outcome::Unsat => format!("# oracle: unsat within budget ({} nodes)\n", stats.nodes),
        Outcome::Found(_) => "# oracle: a path exists\n".to_string(),
        Outcome::BudgetExhausted => format!("# oracle: budget exhausted after {} nodes\n", stats.nodes),
    };
    text.push_str(&verdict);
    write_output(o.out.as_deref(), &text)?;
    match outcome {
        Outcome::Unsat => Ok(()),
        Outcome::Found(_) => Err(Fail::Contract("counterexample is contained in a path".into())),
        Outcome::BudgetExhausted => Err(Fail::Budget("oracle budget exhausted".into())),
    }
}

fn sweep_cmd(o: &Opts, n: u32, max_m: Option<usize>, m: Option<usize>, trials: u64) -> Res {
    let d = dim(n)?;
    let cfg = o.sweep()?;
    let r = match (max_m, m) {
        (Some(mm), _) => verify::sweep_exhaustive(d, mm, &cfg),
        (None, Some(m)) => verify::sweep_random(d, m, trials, o.seed, &cfg),
        (None, None) => verify::sweep_exhaustive(d, matching_bound(n), &cfg),
    }
    .map_err(contract)?;
    write_output(o.out.as_deref(), &emit_report(&r))?;
    report_exit(&r)
}

fn cross_check_cmd(o: &Opts, n: u32, trials: u64) -> Res {
    let r = verify::cross_check(dim(n)?, trials, o.seed, &o.sweep()?).map_err(contract)?;
    write_output(o.out.as_deref(), &emit_report(&r))?;
    report_exit(&r)
}

fn bench(o: &Opts, n: u32, m: Option<usize>, trials: u64) -> Res {
    let d = dim(n)?;
    let m = m.unwrap_or_else(|| matching_bound(n));
    let cfg = o.engine()?;
    let insts = verify::random_instances(d, m, trials, o.seed).map_err(contract)?;
    let (mut total, mut worst, mut fallbacks, mut failed) = (Duration::ZERO, Duration::ZERO, 0u64, 0u64);
    for inst in &insts {
        let start = Instant::now();
        match ham_path_matching(inst, &cfg) {
            Ok(c) => fallbacks += c.trace.stats.fallbacks,
            Err(e) => {
                log::warn!("{}: {e}", verify::describe_instance(inst));
                failed += 1;
            }
        }
        let el = start.elapsed();
        total += el;
        worst = worst.max(el);
    }
    let mean = total.as_secs_f64() * 1e3 / trials.max(1) as f64;
    let text = format!(
        "n={n}\nm={m}\ntrials={trials}\nseed={}\nfailed={failed}\nfallbacks={fallbacks}\ntotal_ms={}\nmean_ms={mean:.3}\nmax_ms={}\n",
        o.seed,
        total.as_millis(),
        worst.as_millis()
    );
    write_output(o.out.as_deref(), &text)?;
    if failed > 0 {
        return Err(Fail::Contract(format!("{failed} instances failed")));
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let o = &cli.opts;
    let res = match &cli.cmd {
        Cmd::Solve => solve(o),
        Cmd::Verify { path } => verify_cmd(o, path),
        Cmd::Gen { n, m } => gen(o, *n, *m),
        Cmd::Counterexample { n, x, y } => counterexample_cmd(o, *n, x.as_deref(), y.as_deref()),
        Cmd::Sweep { n, max_m, m, trials } => sweep_cmd(o, *n, *max_m, *m, *trials),
        Cmd::CrossCheck { n, trials } => cross_check_cmd(o, *n, *trials),
        Cmd::Bench { n, m, trials } => bench(o, *n, *m, *trials),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let msg = match &f {
                Fail::Contract(m) | Fail::Budget(m) | Fail::Io(m) => m,
            };
            eprintln!("hamcube: {msg}");
            ExitCode::from(f.code())
        }
    }
}
