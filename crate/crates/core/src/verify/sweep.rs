//! Sweep harnesses: exhaustive and random instance families run through the
//! engine and checked, plus engine-versus-oracle cross-checking.
//!
//! Instances are generated up front in a fixed order, solved on a worker
//! pool, and merged back in generation order, so a report depends only on
//! its parameters. Runtimes are recorded only when timing is requested.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::cube::{Dim, Edge, Vertex};
use crate::engine::{ham_path_matching, EngineConfig, EngineError, TraceEvent};
use crate::forest::{matching_bound, Instance};
use crate::solver::{self, Outcome, SearchProblem};

use super::verify_path;

/// Failing instances kept verbatim in a report.
const FAILURE_SAMPLES: usize = 10;
/// Rejection-sampling attempts per edge or terminal draw.
const SAMPLE_ATTEMPTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepConfig {
    pub engine: EngineConfig,
    /// Canonicalise exhaustive families under cube automorphisms.
    pub symmetry_reduction: bool,
    /// Worker cap; `None` uses every core.
    pub jobs: Option<usize>,
    /// Largest instance family an exhaustive sweep will enumerate.
    pub instance_cap: usize,
    /// Record the slowest instance runtime.
    pub timing: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            engine: EngineConfig::default(),
            symmetry_reduction: true,
            jobs: None,
            instance_cap: 5_000_000,
            timing: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SweepError {
    #[error("enumeration of {0} instances exceeds the cap of {1}")]
    TooLarge(usize, usize),
    #[error("could not sample a matching of size {m} in Q_{n} after bounded rejections")]
    Sampling { n: u32, m: usize },
    #[error("{0}")]
    OutOfRange(String),
    #[error("worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepReport {
    /// `exhaustive`, `random` or `cross-check`.
    pub kind: String,
    pub n: u32,
    /// Largest matching size (exhaustive) or the sampled size (random).
    pub m: usize,
    pub seed: Option<u64>,
    pub n_base: u32,
    pub strict: bool,
    pub symmetry_reduction: bool,
    pub instances: u64,
    pub success: u64,
    /// Successful instances where some construction fell back to search.
    pub fallback: u64,
    pub unsat: u64,
    pub budget_exhausted: u64,
    pub violations: u64,
    pub errors: u64,
    /// Cross-check instances where engine and oracle disagree.
    pub disagreements: u64,
    pub bound_violations: u64,
    pub depth_violations: u64,
    pub max_runtime_ms: Option<u64>,
    /// Split-step labels, keyed `n<dim> <label>`; `exact` counts instances
    /// solved without a split.
    pub cases: BTreeMap<String, u64>,
    /// Up to ten failing instances, one line each.
    pub failures: Vec<String>,
}

impl SweepReport {
    pub fn failed(&self) -> u64 {
        self.instances - self.success
    }

    pub fn all_passed(&self) -> bool {
        self.instances == self.success && self.disagreements == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Success,
    Unsat,
    Budget,
    Violation,
    Error,
}

struct InstanceResult {
    status: Status,
    fallback: bool,
    disagreement: bool,
    cases: Vec<String>,
    bound_violations: u64,
    depth_violations: u64,
    runtime: Duration,
    note: Option<String>,
}

fn run_engine(inst: &Instance, cfg: &EngineConfig) -> InstanceResult {
    let start = Instant::now();
    let res = ham_path_matching(inst, cfg);
    let runtime = start.elapsed();
    let mut out = InstanceResult {
        status: Status::Success,
        fallback: false,
        disagreement: false,
        cases: vec![],
        bound_violations: 0,
        depth_violations: 0,
        runtime,
        note: None,
    };
    match res {
        Ok(c) => {
            // re-check from the raw sequence, independently of the engine's own check
            if verify_path(inst.n, c.path(), inst.x, inst.y, &inst.m).is_err() {
                out.status = Status::Violation;
            }
            out.fallback = c.trace.stats.fallbacks > 0;
            out.bound_violations = c.trace.stats.bound_violations;
            out.depth_violations = c.trace.stats.depth_violations;
            out.cases = c
                .trace
                .events
                .iter()
                .filter_map(|e| match e {
                    TraceEvent::Case { n, label, .. } => Some(format!("n{n} {label}")),
                    _ => None,
                })
                .collect();
            if out.cases.is_empty() {
                out.cases.push("exact".into());
            }
        }
        Err(e) => {
            out.status = match e {
                EngineError::Unsat { .. } => Status::Unsat,
                EngineError::BudgetExhausted { .. } => Status::Budget,
                _ => Status::Error,
            };
            out.note = Some(e.to_string());
        }
    }
    if out.status != Status::Success && out.note.is_none() {
        out.note = Some(format!("{:?}", out.status));
    }
    out
}

pub fn describe_instance(inst: &Instance) -> String {
    let m: Vec<String> = inst.m.iter().map(|e| e.to_bits(inst.n)).collect();
    format!("n={} x={} y={} M={}", inst.n, inst.x.to_bits(inst.n), inst.y.to_bits(inst.n), m.join(","))
}

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool, SweepError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        b = b.num_threads(j.max(1));
    }
    b.build().map_err(|e| SweepError::Pool(e.to_string()))
}

fn merge(mut rep: SweepReport, insts: &[Instance], results: Vec<InstanceResult>, timing: bool) -> SweepReport {
    let mut slowest = Duration::ZERO;
    for (inst, r) in insts.iter().zip(results) {
        rep.instances += 1;
        match r.status {
            Status::Success if !r.disagreement => rep.success += 1,
            Status::Success => {}
            Status::Unsat => rep.unsat += 1,
            Status::Budget => rep.budget_exhausted += 1,
            Status::Violation => rep.violations += 1,
            Status::Error => rep.errors += 1,
        }
        if r.disagreement {
            rep.disagreements += 1;
        }
        if r.status == Status::Success && r.fallback {
            rep.fallback += 1;
        }
        rep.bound_violations += r.bound_violations;
        rep.depth_violations += r.depth_violations;
        for c in r.cases {
            *rep.cases.entry(c).or_default() += 1;
        }
        if (r.status != Status::Success || r.disagreement) && rep.failures.len() < FAILURE_SAMPLES {
            rep.failures.push(format!("{} ({})", describe_instance(inst), r.note.unwrap_or_default()));
        }
        slowest = slowest.max(r.runtime);
    }
    if timing {
        rep.max_runtime_ms = Some(slowest.as_millis() as u64);
    }
    rep
}

fn base_report(kind: &str, n: u32, m: usize, seed: Option<u64>, cfg: &SweepConfig) -> SweepReport {
    SweepReport {
        kind: kind.into(),
        n,
        m,
        seed,
        n_base: cfg.engine.n_base,
        strict: cfg.engine.strict,
        symmetry_reduction: cfg.symmetry_reduction,
        ..SweepReport::default()
    }
}

/// Every matching of `Q_n` with at most `max_m` edges, edges in increasing order.
fn matchings(n: Dim, max_m: usize) -> Vec<Vec<Edge>> {
    fn rec(edges: &[Edge], from: usize, cur: &mut Vec<Edge>, max_m: usize, out: &mut Vec<Vec<Edge>>) {
        out.push(cur.clone());
        if cur.len() == max_m {
            return;
        }
        for i in from..edges.len() {
            if cur.iter().all(|e| !e.touches(edges[i])) {
                cur.push(edges[i]);
                rec(edges, i + 1, cur, max_m, out);
                cur.pop();
            }
        }
    }
    let mut edges: Vec<Edge> = n.edges().collect();
    edges.sort();
    let mut out = Vec::new();
    rec(&edges, 0, &mut Vec::new(), max_m, &mut out);
    out
}

fn permutations(n: u32) -> Vec<Vec<u32>> {
    fn rec(rest: &mut Vec<u32>, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let c = rest.remove(i);
            cur.push(c);
            rec(rest, cur, out);
            cur.pop();
            rest.insert(i, c);
        }
    }
    let mut out = Vec::new();
    rec(&mut (0..n).collect(), &mut Vec::new(), &mut out);
    out
}

fn permute(v: Vertex, perm: &[u32]) -> Vertex {
    let mut out = 0u64;
    for (i, &p) in perm.iter().enumerate() {
        out |= ((v.bits() >> i) & 1) << p;
    }
    Vertex(out)
}

/// Canonical representative of `(M, y)` with `x = 0` under coordinate
/// permutations.
fn canonical(m: &[Edge], y: Vertex, perms: &[Vec<u32>]) -> (Vec<Edge>, Vertex) {
    let mut best: Option<(Vec<Edge>, Vertex)> = None;
    for p in perms {
        let mut me: Vec<Edge> = m.iter().map(|e| Edge::of(permute(e.lo(), p), permute(e.hi(), p))).collect();
        me.sort();
        let cand = (me, permute(y, p));
        if best.as_ref().is_none_or(|b| cand < *b) {
            best = Some(cand);
        }
    }
    best.expect("at least one permutation")
}

/// The instances of an exhaustive sweep in a fixed order: all matchings of
/// size at most `max_m` and admissible pairs `(x, y)`. With reduction, `x` is
/// translated to `0` and one representative per coordinate-permutation
/// orbit is kept.
pub fn canonical_instances(n: Dim, max_m: usize, reduce: bool, cap: usize) -> Result<Vec<Instance>, SweepError> {
    if n.get() > 7 {
        return Err(SweepError::OutOfRange(format!("exhaustive enumeration needs n <= 7, got {n}")));
    }
    let ms = matchings(n, max_m);
    let half = (n.order() / 2) as usize;
    let xs: Vec<Vertex> = if reduce { vec![Vertex(0)] } else { n.vertices().collect() };
    let estimate = ms.len().saturating_mul(xs.len()).saturating_mul(half);
    if estimate > cap {
        return Err(SweepError::TooLarge(estimate, cap));
    }
    let mk = |m: Vec<Edge>, x: Vertex, y: Vertex| Instance { n, m, x, y, seed: None };
    let admissible = |m: &[Edge], x: Vertex, y: Vertex| {
        x.parity() != y.parity() && !m.iter().any(|e| e.contains(x) && e.contains(y))
    };
    if !reduce {
        let mut out = Vec::with_capacity(estimate);
        for m in &ms {
            for &x in &xs {
                for y in n.vertices().filter(|&y| admissible(m, x, y)) {
                    out.push(mk(m.clone(), x, y));
                }
            }
        }
        return Ok(out);
    }
    let perms = permutations(n.get());
    let reps: BTreeSet<(Vec<Edge>, Vertex)> = ms
        .par_iter()
        .flat_map_iter(|m| {
            let perms = &perms;
            n.vertices().filter(move |&y| admissible(m, Vertex(0), y)).map(move |y| canonical(m, y, perms))
        })
        .collect();
    Ok(reps.into_iter().map(|(m, y)| mk(m, Vertex(0), y)).collect())
}

/// Runs the engine on every instance of [`canonical_instances`].
pub fn sweep_exhaustive(n: Dim, max_m: usize, cfg: &SweepConfig) -> Result<SweepReport, SweepError> {
    if max_m > matching_bound(n.get()) {
        return Err(SweepError::OutOfRange(format!("max_m {max_m} exceeds 3n-13 for n = {n}")));
    }
    let insts = pool(cfg.jobs)?.install(|| canonical_instances(n, max_m, cfg.symmetry_reduction, cfg.instance_cap))?;
    run_family("exhaustive", n, max_m, None, insts, cfg)
}

fn run_family(
    kind: &str,
    n: Dim,
    m: usize,
    seed: Option<u64>,
    insts: Vec<Instance>,
    cfg: &SweepConfig,
) -> Result<SweepReport, SweepError> {
    let results: Vec<InstanceResult> =
        pool(cfg.jobs)?.install(|| insts.par_iter().map(|i| run_engine(i, &cfg.engine)).collect());
    Ok(merge(base_report(kind, n.get(), m, seed, cfg), &insts, results, cfg.timing))
}

/// A uniformly random matching of size `m` (rejection sampling) and an
/// admissible terminal pair.
pub fn random_instance(n: Dim, m: usize, rng: &mut impl Rng) -> Result<Instance, SweepError> {
    let fail = || SweepError::Sampling { n: n.get(), m };
    let mut edges: Vec<Edge> = Vec::with_capacity(m);
    let mut attempts = 0;
    while edges.len() < m {
        attempts += 1;
        if attempts > SAMPLE_ATTEMPTS * m.max(1) {
            return Err(fail());
        }
        let v = Vertex(rng.gen_range(0..n.order()));
        let e = Edge::of(v, v.flip(rng.gen_range(1..=n.get())));
        if edges.iter().all(|f| !f.touches(e)) {
            edges.push(e);
        }
    }
    edges.sort();
    for _ in 0..SAMPLE_ATTEMPTS {
        let x = Vertex(rng.gen_range(0..n.order()));
        let y = Vertex(rng.gen_range(0..n.order()));
        if x.parity() != y.parity() && !edges.iter().any(|e| e.contains(x) && e.contains(y)) {
            return Ok(Instance { n, m: edges, x, y, seed: None });
        }
    }
    Err(fail())
}

/// Seed of instance `i` of a family: independent of worker scheduling.
fn instance_rng(seed: u64, i: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    rng
}

/// The instances of a random sweep, deterministic under `seed`.
pub fn random_instances(n: Dim, m: usize, trials: u64, seed: u64) -> Result<Vec<Instance>, SweepError> {
    (0..trials)
        .map(|i| {
            let mut inst = random_instance(n, m, &mut instance_rng(seed, i))?;
            inst.seed = Some(seed);
            Ok(inst)
        })
        .collect()
}

pub fn sweep_random(n: Dim, m: usize, trials: u64, seed: u64, cfg: &SweepConfig) -> Result<SweepReport, SweepError> {
    if n.get() < 5 || m > matching_bound(n.get()) {
        return Err(SweepError::OutOfRange(format!("need n >= 5 and m <= 3n-13, got n = {n}, m = {m}")));
    }
    let insts = random_instances(n, m, trials, seed)?;
    run_family("random", n, m, Some(seed), insts, cfg)
}

/// Engine and exact oracle on the same sampled instances (matching size
/// uniform in `0..=3n-13`): both results must verify and agree.
pub fn cross_check(n: Dim, trials: u64, seed: u64, cfg: &SweepConfig) -> Result<SweepReport, SweepError> {
    if !(5..=6).contains(&n.get()) {
        return Err(SweepError::OutOfRange(format!("cross-check needs 5 <= n <= 6, got {n}")));
    }
    let bound = matching_bound(n.get());
    let insts: Vec<Instance> = (0..trials)
        .map(|i| {
            let mut rng = instance_rng(seed, i);
            let m = rng.gen_range(0..=bound);
            random_instance(n, m, &mut rng)
        })
        .collect::<Result<_, _>>()?;
    let results: Vec<InstanceResult> = pool(cfg.jobs)?.install(|| {
        insts
            .par_iter()
            .map(|inst| {
                let mut r = run_engine(inst, &cfg.engine);
                let p = SearchProblem::ham_path(inst.n, inst.x, inst.y, inst.m.clone());
                let oracle = solver::solve(&p, &cfg.engine.budget);
                let oracle_ok = match &oracle {
                    Ok(Outcome::Found(s)) => verify_path(inst.n, &s.paths()[0], inst.x, inst.y, &inst.m).is_ok(),
                    _ => false,
                };
                let oracle_budget = matches!(oracle, Ok(Outcome::BudgetExhausted));
                if !oracle_budget && oracle_ok != (r.status == Status::Success) {
                    r.disagreement = true;
                    r.note = Some(format!(
                        "engine {:?}, oracle {:?}",
                        r.status,
                        oracle.as_ref().map(|o| matches!(o, Outcome::Found(_)))
                    ));
                }
                r
            })
            .collect::<Vec<_>>()
    });
    Ok(merge(base_report("cross-check", n.get(), bound, Some(seed), cfg), &insts, results, cfg.timing))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matchings_count_q2() {
        // Q_2 (a 4-cycle): empty, 4 single edges, 2 perfect matchings
        let all = matchings(Dim::new(2).unwrap(), 2);
        assert_eq!(all.len(), 7);
    }

    #[test]
    fn permutations_of_three() {
        let p = permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p.iter().collect::<BTreeSet<_>>().len(), 6);
    }

    #[test]
    fn canonical_is_orbit_invariant() {
        let perms = permutations(4);
        let m = vec![Edge::of(Vertex(0b0011), Vertex(0b0111))];
        let y = Vertex(0b0001);
        let base = canonical(&m, y, &perms);
        for p in &perms {
            let pm: Vec<Edge> = m.iter().map(|e| Edge::of(permute(e.lo(), p), permute(e.hi(), p))).collect();
            assert_eq!(canonical(&pm, permute(y, p), &perms), base);
        }
    }

    #[test]
    fn random_family_is_deterministic() {
        let n = Dim::new(6).unwrap();
        let a = random_instances(n, 5, 20, 7).unwrap();
        let b = random_instances(n, 5, 20, 7).unwrap();
        assert_eq!(a, b);
        for i in &a {
            i.validate().unwrap();
        }
        assert_ne!(a, random_instances(n, 5, 20, 8).unwrap());
    }

    #[test]
    fn sampler_gives_up_on_impossible_sizes() {
        let n = Dim::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(random_instance(n, 3, &mut rng), Err(SweepError::Sampling { .. })));
    }

    #[test]
    fn small_exhaustive_sweep() {
        let cfg = SweepConfig::default();
        let rep = sweep_exhaustive(Dim::new(5).unwrap(), 0, &cfg).unwrap();
        assert!(rep.all_passed());
        // x = 0 fixed, y up to permutation is determined by its weight: 1, 3 or 5
        assert_eq!(rep.instances, 3);
    }
}
