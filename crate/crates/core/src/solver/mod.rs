//! Budgeted exact search for Hamiltonian paths, Hamiltonian cycles and
//! spanning k-paths of `Q_n` with prescribed edges and deleted vertices.
//!
//! The search decides each edge in or out, propagates degree constraints,
//! keeps path fragments as endpoint links, and prunes with a connectivity and
//! parity check on the residual graph. A run that finishes its tree without
//! hitting a limit is a proof of unsatisfiability.

mod search;

use std::collections::HashSet;
use std::time::Duration;

use thiserror::Error;

use crate::cube::{Dim, Edge, Vertex};

pub use search::SolveStats;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    HamPath,
    HamCycle,
    SpanningKPath,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchProblem {
    pub n: Dim,
    pub kind: Kind,
    /// Ordered terminal pairs. A pair `(a, a)` asks for the one-vertex path.
    pub terminals: Vec<(Vertex, Vertex)>,
    pub prescribed: Vec<Edge>,
    pub forbidden: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("vertex {0:#x} is outside the cube")]
    BadVertex(u64),
    #[error("terminal {0:#x} appears more than once")]
    TerminalOverlap(u64),
    #[error("terminal {0:#x} is forbidden")]
    TerminalForbidden(u64),
    #[error("prescribed edge touches forbidden vertex {0:#x}")]
    PrescribedForbidden(u64),
    #[error("{kind:?} needs {expected} terminal pairs, got {got}")]
    PairCount { kind: Kind, expected: String, got: usize },
    #[error("dimension {0} too large for exact search")]
    TooLarge(u32),
}

/// Largest cube the search accepts.
pub const MAX_SEARCH_DIM: u32 = 20;

impl SearchProblem {
    pub fn ham_path(n: Dim, x: Vertex, y: Vertex, prescribed: Vec<Edge>) -> Self {
        SearchProblem { n, kind: Kind::HamPath, terminals: vec![(x, y)], prescribed, forbidden: vec![] }
    }

    pub fn ham_cycle(n: Dim, prescribed: Vec<Edge>) -> Self {
        SearchProblem { n, kind: Kind::HamCycle, terminals: vec![], prescribed, forbidden: vec![] }
    }

    pub fn k_path(n: Dim, terminals: Vec<(Vertex, Vertex)>, prescribed: Vec<Edge>) -> Self {
        SearchProblem { n, kind: Kind::SpanningKPath, terminals, prescribed, forbidden: vec![] }
    }

    pub fn with_forbidden(mut self, forbidden: Vec<Vertex>) -> Self {
        self.forbidden = forbidden;
        self
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        let n = self.n;
        if n.get() > MAX_SEARCH_DIM {
            return Err(SolverError::TooLarge(n.get()));
        }
        match self.kind {
            Kind::HamPath if self.terminals.len() != 1 => {
                return Err(SolverError::PairCount { kind: self.kind, expected: "1".into(), got: self.terminals.len() })
            }
            Kind::HamCycle if !self.terminals.is_empty() => {
                return Err(SolverError::PairCount { kind: self.kind, expected: "0".into(), got: self.terminals.len() })
            }
            Kind::SpanningKPath if self.terminals.is_empty() => {
                return Err(SolverError::PairCount { kind: self.kind, expected: ">= 1".into(), got: 0 })
            }
            _ => {}
        }
        let forbidden: HashSet<Vertex> = self.forbidden.iter().copied().collect();
        for &v in &self.forbidden {
            if !v.is_valid(n) {
                return Err(SolverError::BadVertex(v.bits()));
            }
        }
        let mut seen = HashSet::new();
        for &(a, b) in &self.terminals {
            if self.kind == Kind::HamPath && a == b {
                return Err(SolverError::TerminalOverlap(a.bits()));
            }
            let ends: &[Vertex] = if a == b { &[a] } else { &[a, b] };
            for &t in ends {
                if !t.is_valid(n) {
                    return Err(SolverError::BadVertex(t.bits()));
                }
                if forbidden.contains(&t) {
                    return Err(SolverError::TerminalForbidden(t.bits()));
                }
                if !seen.insert(t) {
                    return Err(SolverError::TerminalOverlap(t.bits()));
                }
            }
        }
        for e in &self.prescribed {
            for v in [e.lo(), e.hi()] {
                if !v.is_valid(n) {
                    return Err(SolverError::BadVertex(v.bits()));
                }
                if forbidden.contains(&v) {
                    return Err(SolverError::PrescribedForbidden(v.bits()));
                }
            }
        }
        Ok(())
    }
}

/// Search limits. `node_limit` counts decisions over all restarts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub node_limit: u64,
    pub time_limit: Option<Duration>,
    pub restarts: bool,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { node_limit: 20_000_000, time_limit: None, restarts: true, seed: 0 }
    }
}

impl Budget {
    pub fn nodes(node_limit: u64) -> Self {
        Budget { node_limit, ..Budget::default() }
    }

    /// A single complete run with no restarts and no clock; used when an
    /// Unsat answer has to be a full refutation.
    pub fn complete() -> Self {
        Budget { node_limit: u64::MAX, time_limit: None, restarts: false, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    /// One vertex sequence per terminal pair, in pair order, from `a_i` to `b_i`.
    Paths(Vec<Vec<Vertex>>),
    Cycle(Vec<Vertex>),
}

impl Solution {
    pub fn paths(&self) -> &[Vec<Vertex>] {
        match self {
            Solution::Paths(p) => p,
            Solution::Cycle(c) => std::slice::from_ref(c),
        }
    }

    pub fn into_path(self) -> Vec<Vertex> {
        match self {
            Solution::Paths(mut p) => p.swap_remove(0),
            Solution::Cycle(c) => c,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Found(Solution),
    Unsat,
    BudgetExhausted,
}

pub fn solve(p: &SearchProblem, b: &Budget) -> Result<Outcome, SolverError> {
    solve_with_stats(p, b).map(|(o, _)| o)
}

pub fn solve_with_stats(p: &SearchProblem, b: &Budget) -> Result<(Outcome, SolveStats), SolverError> {
    p.validate()?;
    Ok(search::run(p, b))
}

/// Number of distinct solutions (edge sets, so paths up to reversal), stopping at `cap`.
pub fn count_solutions(p: &SearchProblem, cap: u64) -> Result<u64, SolverError> {
    p.validate()?;
    Ok(search::count(p, cap))
}

/// Sufficient pre-screen for a spanning k-path: the pair set is balanced and
/// `2k - #(pairs that are edges) < n`.
pub fn check_feasible_kpath(p: &SearchProblem) -> bool {
    if p.kind != Kind::SpanningKPath && p.kind != Kind::HamPath {
        return false;
    }
    if !p.prescribed.is_empty() || !p.forbidden.is_empty() {
        return false;
    }
    let mut seen = HashSet::new();
    let mut balance = 0i64;
    let mut adjacent = 0usize;
    for &(a, b) in &p.terminals {
        if a == b || !seen.insert(a) || !seen.insert(b) {
            return false;
        }
        for v in [a, b] {
            balance += if v.parity() == 0 { 1 } else { -1 };
        }
        if a.is_adjacent(b) {
            adjacent += 1;
        }
    }
    let k = p.terminals.len();
    balance == 0 && 2 * k - adjacent < p.n.get() as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Vertex {
        Vertex::parse_bits(s).unwrap().0
    }

    #[test]
    fn q2_with_edge() {
        let n = Dim::new(2).unwrap();
        let p = SearchProblem::ham_path(n, v("00"), v("01"), vec![Edge::of(v("10"), v("11"))]);
        match solve(&p, &Budget::complete()).unwrap() {
            Outcome::Found(s) => assert_eq!(s.into_path(), vec![v("00"), v("10"), v("11"), v("01")]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn q1_path() {
        let n = Dim::new(1).unwrap();
        let p = SearchProblem::ham_path(n, v("0"), v("1"), vec![]);
        match solve(&p, &Budget::complete()).unwrap() {
            Outcome::Found(s) => assert_eq!(s.into_path(), vec![v("0"), v("1")]),
            other => panic!("{other:?}"),
        }
        assert_eq!(count_solutions(&p, 10).unwrap(), 1);
    }

    #[test]
    fn counterexample_q3_unsat() {
        let n = Dim::new(3).unwrap();
        let (x, y) = (v("000"), v("111"));
        let pe = crate::forest::counterexample(n, x, y).unwrap();
        let p = SearchProblem::ham_path(n, x, y, pe);
        assert_eq!(solve(&p, &Budget::complete()).unwrap(), Outcome::Unsat);
    }

    #[test]
    fn cycle_q3() {
        let n = Dim::new(3).unwrap();
        let p = SearchProblem::ham_cycle(n, vec![]);
        assert!(matches!(solve(&p, &Budget::complete()).unwrap(), Outcome::Found(Solution::Cycle(_))));
        // Q_3 has 6 Hamiltonian cycles
        assert_eq!(count_solutions(&p, 100).unwrap(), 6);
    }

    #[test]
    fn malformed() {
        let n = Dim::new(3).unwrap();
        let p = SearchProblem::k_path(n, vec![(v("000"), v("001")), (v("001"), v("011"))], vec![]);
        assert!(matches!(solve(&p, &Budget::complete()), Err(SolverError::TerminalOverlap(_))));
        let q = SearchProblem::ham_path(n, v("000"), v("001"), vec![]).with_forbidden(vec![v("000")]);
        assert!(matches!(solve(&q, &Budget::complete()), Err(SolverError::TerminalForbidden(_))));
    }

    #[test]
    fn feasibility_screen() {
        let n = Dim::new(4).unwrap();
        let p = SearchProblem::k_path(n, vec![(v("0000"), v("1000"))], vec![]);
        assert!(check_feasible_kpath(&p));
        let q = SearchProblem::k_path(n, vec![(v("0000"), v("1100")), (v("1000"), v("0100"))], vec![]);
        assert!(!check_feasible_kpath(&q));
        let r = SearchProblem::k_path(n, vec![(v("0000"), v("1100")), (v("1010"), v("0110"))], vec![]);
        assert!(!check_feasible_kpath(&r));
    }
}
