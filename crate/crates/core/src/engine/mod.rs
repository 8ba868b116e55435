//! Constructive engine: the inductive Hamiltonian-path construction, the
//! spanning-path lemma constructions it relies on, and the subroutine
//! provider that discharges cited statements with the exact solver.
//!
//! Every value leaving this module has passed [`crate::verify::verify`].
//! When a transcribed construction does not assemble, the same-level request
//! is re-solved by the budgeted exact search and a fallback event is logged,
//! unless [`EngineConfig::strict`] is set.

pub mod assemble;
mod bridge;
mod matching3;
mod one_edge;
mod provider;
mod theorem;
mod two_edges;

use std::fmt;

use thiserror::Error;

use crate::cube::{Dim, Edge, Vertex};
use crate::forest::{Instance, InstanceError};
use crate::solver::{Budget, SolverError};

pub use assemble::{assemble, assemble_paths, AssembleError, Assembly};
pub use provider::{classify, Request, Statement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineConfig {
    /// Dimensions up to this are solved directly by the exact search.
    pub n_base: u32,
    /// Limits for each exact-search call.
    pub budget: Budget,
    /// Report construction failures instead of falling back.
    pub strict: bool,
    /// Sub-requests tried per bridging step before giving up.
    pub plan_cap: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            n_base: 9,
            budget: Budget { node_limit: 2_000_000, ..Budget::default() },
            strict: false,
            plan_cap: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceEvent {
    /// A split step: dimension of the cube, split coordinate and case label.
    Case { n: u32, j: u32, label: String },
    /// A sub-request discharged under a statement.
    Statement { n: u32, statement: Statement },
    /// A construction that did not assemble and was re-solved exactly.
    Fallback { n: u32, label: String, reason: String },
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceEvent::Case { n, j, label } => write!(f, "case n={n} j={j} {label}"),
            TraceEvent::Statement { n, statement } => write!(f, "statement n={n} {statement}"),
            TraceEvent::Fallback { n, label, reason } => write!(f, "fallback n={n} {label}: {reason}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TraceStats {
    pub solver_calls: u64,
    pub solver_nodes: u64,
    pub constructions: u64,
    pub fallbacks: u64,
    pub rejected_requests: u64,
    /// Sub-calls of the matching 3-path construction whose matching
    /// exceeded `2(n-1) - 10`. Must stay zero.
    pub bound_violations: u64,
    /// Recursive calls that did not drop exactly one dimension. Must stay zero.
    pub depth_violations: u64,
    pub max_depth: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    pub events: Vec<TraceEvent>,
    pub stats: TraceStats,
}

impl Trace {
    /// Labels of the top-level split steps, outermost first.
    pub fn case_labels(&self) -> impl Iterator<Item = &str> {
        self.events.iter().filter_map(|e| match e {
            TraceEvent::Case { label, .. } => Some(label.as_str()),
            _ => None,
        })
    }

    pub fn fallbacks(&self) -> impl Iterator<Item = &TraceEvent> {
        self.events.iter().filter(|e| matches!(e, TraceEvent::Fallback { .. }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("input out of contract: {0}")]
    OutOfContract(#[from] InstanceError),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("search budget exhausted on {label}")]
    BudgetExhausted { label: String },
    #[error("no solution exists for {label}")]
    Unsat { label: String },
    #[error("construction failed in {label}: {detail}")]
    Construction { label: String, detail: String },
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// A verified result with the trace of how it was built. For the
/// Hamiltonian-path entry point `paths` holds exactly one path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub paths: Vec<Vec<Vertex>>,
    pub trace: Trace,
}

impl Construction {
    pub fn path(&self) -> &[Vertex] {
        &self.paths[0]
    }
}

/// Internal failure of one attempt; callers try the next plan or fall back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Failure {
    Rejected(String),
    Budget(String),
    Unsat(String),
    Broken(String),
}

impl Failure {
    fn into_error(self, label: &str) -> EngineError {
        match self {
            Failure::Rejected(d) => EngineError::Precondition(d),
            Failure::Budget(l) => EngineError::BudgetExhausted { label: l },
            Failure::Unsat(l) => EngineError::Unsat { label: l },
            Failure::Broken(d) => EngineError::Construction { label: label.to_string(), detail: d },
        }
    }

    fn reason(&self) -> String {
        match self {
            Failure::Rejected(d) => format!("rejected: {d}"),
            Failure::Budget(l) => format!("budget exhausted: {l}"),
            Failure::Unsat(l) => format!("unsat: {l}"),
            Failure::Broken(d) => d.clone(),
        }
    }
}

pub(crate) type Attempt<T> = Result<T, Failure>;

pub(crate) struct Engine {
    cfg: EngineConfig,
    trace: Trace,
    depth: u32,
}

impl Engine {
    pub(crate) fn new(cfg: &EngineConfig) -> Self {
        Engine { cfg: cfg.clone(), trace: Trace::default(), depth: 0 }
    }

    fn event(&mut self, e: TraceEvent) {
        log::trace!("{e}");
        self.trace.events.push(e);
    }

    fn case(&mut self, n: Dim, j: u32, label: impl Into<String>) {
        self.event(TraceEvent::Case { n: n.get(), j, label: label.into() });
    }

    /// Records a failed construction, then either reports it (strict mode)
    /// or re-solves `req` exactly.
    fn fall_back(&mut self, label: &str, why: Failure, req: &Request) -> Attempt<Vec<Vec<Vertex>>> {
        if self.cfg.strict {
            return Err(Failure::Broken(format!("{label}: {}", why.reason())));
        }
        log::debug!("fallback in {label}: {}", why.reason());
        self.trace.stats.fallbacks += 1;
        self.event(TraceEvent::Fallback { n: req.n.get(), label: label.to_string(), reason: why.reason() });
        self.exact(req)
    }

    fn enter(&mut self) {
        self.depth += 1;
        self.trace.stats.max_depth = self.trace.stats.max_depth.max(self.depth);
    }

    fn leave(&mut self) {
        self.depth -= 1;
    }

    fn finish(self, paths: Vec<Vec<Vertex>>) -> Construction {
        Construction { paths, trace: self.trace }
    }
}

/// Builds a Hamiltonian path of `Q_n` from `x` to `y` through every edge of
/// the matching `M`, for `|M| <= 3n - 13`.
pub fn ham_path_matching(inst: &Instance, cfg: &EngineConfig) -> Result<Construction, EngineError> {
    inst.validate()?;
    if cfg.n_base < 5 {
        return Err(EngineError::Precondition(format!("n_base {} below 5", cfg.n_base)));
    }
    let mut eng = Engine::new(cfg);
    let path = eng.theorem(inst.n, &inst.m, inst.x, inst.y).map_err(|f| f.into_error("theorem"))?;
    crate::verify::verify_path(inst.n, &path, inst.x, inst.y, &inst.m).map_err(|v| EngineError::Construction {
        label: "theorem".into(),
        detail: format!("unverified result: {}", v[0]),
    })?;
    Ok(eng.finish(vec![path]))
}

/// Spanning 2-path `P_uv + P_xy` of `Q_n` through `e1` and `e2`.
#[allow(clippy::too_many_arguments)]
pub fn spanning2_two_edges(
    n: Dim,
    u: Vertex,
    v: Vertex,
    x: Vertex,
    y: Vertex,
    e1: Edge,
    e2: Edge,
    cfg: &EngineConfig,
) -> Result<Construction, EngineError> {
    two_edges::check(n, u, v, x, y, e1, e2).map_err(EngineError::Precondition)?;
    let mut eng = Engine::new(cfg);
    let paths = eng.two_edges(n, u, v, x, y, e1, e2).map_err(|f| f.into_error("two-edge 2-path"))?;
    Ok(eng.finish(paths))
}

/// Spanning 3-path `P_uv + P_xy + P_wz` of `Q_n` through `e`; when `uv = e`
/// the first path is the edge itself.
#[allow(clippy::too_many_arguments)]
pub fn spanning3_one_edge(
    n: Dim,
    u: Vertex,
    v: Vertex,
    x: Vertex,
    y: Vertex,
    w: Vertex,
    z: Vertex,
    e: Edge,
    cfg: &EngineConfig,
) -> Result<Construction, EngineError> {
    let pairs = [(u, v), (x, y), (w, z)];
    one_edge::check(n, &pairs, e).map_err(EngineError::Precondition)?;
    let mut eng = Engine::new(cfg);
    let paths = eng.one_edge(n, pairs, e).map_err(|f| f.into_error("one-edge 3-path"))?;
    Ok(eng.finish(paths))
}

/// Spanning 3-path `P_ux + P_vy + P_wz` of `Q_n` through the matching `m`,
/// for `|m| <= 2n - 10`.
pub fn spanning3_matching(
    n: Dim,
    u: Vertex,
    x: Vertex,
    vy: (Vertex, Vertex),
    wz: (Vertex, Vertex),
    m: &[Edge],
    cfg: &EngineConfig,
) -> Result<Construction, EngineError> {
    let roles = matching3::Roles { u, x, v: vy.0, y: vy.1, w: wz.0, z: wz.1 };
    matching3::check(n, &roles, m).map_err(EngineError::Precondition)?;
    let mut eng = Engine::new(cfg);
    let paths = eng.matching3(n, roles, m).map_err(|f| f.into_error("matching 3-path"))?;
    Ok(eng.finish(paths))
}

/// Discharges one request through the provider: classification, dispatch and
/// verification. Requests matching no statement are rejected.
pub fn subroutine(req: &Request, cfg: &EngineConfig) -> Result<Construction, EngineError> {
    let mut eng = Engine::new(cfg);
    let paths = eng.provide(req).map_err(|f| f.into_error("subroutine"))?;
    Ok(eng.finish(paths))
}
