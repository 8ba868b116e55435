//! Subroutine provider: classifies a spanning-path request against the
//! statements the construction relies on and discharges it.
//!
//! Statements proven constructively here (two-edge 2-path, one-edge 3-path,
//! matching 3-path) dispatch to the engine's own constructions; the cited
//! ones go to the exact solver. Requests matching no statement are rejected
//! before any search.

use std::collections::HashSet;
use std::fmt;

use crate::cube::{Dim, Edge, Side, SplitContext, Vertex};
use crate::forest::{is_linear_forest, is_matching, nnc_check};
use crate::solver::{self, Kind, Outcome, SearchProblem, Solution};

use super::matching3::Roles;
use super::{Attempt, Engine, Failure, TraceEvent};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Request {
    pub n: Dim,
    /// Terminal pairs; `(a, a)` asks for a one-vertex path.
    pub pairs: Vec<(Vertex, Vertex)>,
    pub prescribed: Vec<Edge>,
    pub forbidden: Vec<Vertex>,
    /// Hamiltonian cycle request (no pairs).
    pub cycle: bool,
}

impl Request {
    pub fn path(n: Dim, x: Vertex, y: Vertex, prescribed: Vec<Edge>) -> Self {
        Request { n, pairs: vec![(x, y)], prescribed, forbidden: vec![], cycle: false }
    }

    pub fn k_path(n: Dim, pairs: Vec<(Vertex, Vertex)>, prescribed: Vec<Edge>) -> Self {
        Request { n, pairs, prescribed, forbidden: vec![], cycle: false }
    }

    pub fn cycle(n: Dim, prescribed: Vec<Edge>) -> Self {
        Request { n, pairs: vec![], prescribed, forbidden: vec![], cycle: true }
    }

    pub fn with_forbidden(mut self, forbidden: Vec<Vertex>) -> Self {
        self.forbidden = forbidden;
        self
    }

    pub fn to_problem(&self) -> SearchProblem {
        let kind = if self.cycle {
            Kind::HamCycle
        } else if self.pairs.len() == 1 && self.pairs[0].0 != self.pairs[0].1 {
            Kind::HamPath
        } else {
            Kind::SpanningKPath
        };
        SearchProblem {
            n: self.n,
            kind,
            terminals: self.pairs.clone(),
            prescribed: self.prescribed.clone(),
            forbidden: self.forbidden.clone(),
        }
    }

    /// The request seen from inside one half of `sc`. Everything must lie in
    /// that half.
    pub(crate) fn project(&self, sc: &SplitContext) -> Request {
        Request {
            n: sc.sub_dim(),
            pairs: self.pairs.iter().map(|&(a, b)| (sc.project(a), sc.project(b))).collect(),
            prescribed: self
                .prescribed
                .iter()
                .map(|&e| sc.project_edge(e).expect("cross edge in half request"))
                .collect(),
            forbidden: self.forbidden.iter().map(|&v| sc.project(v)).collect(),
            cycle: self.cycle,
        }
    }

    pub(crate) fn describe(&self) -> String {
        if self.cycle {
            format!("cycle n={} |P|={}", self.n, self.prescribed.len())
        } else {
            format!("{}-path n={} |P|={} |F|={}", self.pairs.len(), self.n, self.prescribed.len(), self.forbidden.len())
        }
    }

    fn verify(&self, paths: &[Vec<Vertex>]) -> bool {
        if self.cycle {
            paths.len() == 1 && crate::verify::verify_cycle(self.n, &paths[0], &self.prescribed).is_ok()
        } else {
            crate::verify::verify(self.n, paths, &self.pairs, &self.prescribed, &self.forbidden).is_ok()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Statement {
    /// Hamiltonian path between opposite-parity vertices.
    Laceable,
    /// Hamiltonian path through one edge `f != xy`.
    PathOneEdge,
    /// Hamiltonian path through two disjoint edges, `n >= 4`.
    PathTwoEdges,
    /// Hamiltonian path through a linear forest of at most `2n - 4` edges
    /// meeting the natural necessary conditions, `n >= 5`.
    PathLinearForest,
    /// Hamiltonian path of `Q_n - {a, b}` (`ab` an edge) through one edge, `n >= 5`.
    PathAvoidingEdge,
    /// Spanning 2-path for two opposite-parity pairs; a pair that is an edge
    /// may be required to be that edge.
    TwoPath,
    /// Spanning 2-path `P_uv + P_xy` with `p(u) = p(v) != p(x) = p(y)`, `n >= 4`.
    TwoPathSameParity,
    /// Spanning 2-path through one edge avoided by one pair, `n >= 5`.
    TwoPathOneEdge,
    /// Spanning 2-path through two edges avoided by one pair, `n >= 6`.
    TwoPathTwoEdges,
    /// Spanning 3-path through one edge avoided by two pairs, `n >= 6`.
    ThreePathOneEdge,
    /// Spanning 3-path through a matching with two edge pairs, `n >= 5`.
    ThreePathMatching,
    /// Spanning 2-path with both pairs edges, through a matching of at most
    /// `2n - 8` edges, `n >= 4`.
    TwoPathMatching,
    /// Spanning k-path for a balanced pair set with `2k - #edge pairs < n`.
    KPath,
    /// Hamiltonian cycle through a matching of at most `3n - 10` edges.
    CycleMatching,
    /// Spanning k-path split into two requests on the halves of one direction.
    Halves,
}

impl Statement {
    pub fn name(self) -> &'static str {
        match self {
            Statement::Laceable => "laceable",
            Statement::PathOneEdge => "path-one-edge",
            Statement::PathTwoEdges => "path-two-edges",
            Statement::PathLinearForest => "path-linear-forest",
            Statement::PathAvoidingEdge => "path-avoiding-edge",
            Statement::TwoPath => "two-path",
            Statement::TwoPathSameParity => "two-path-same-parity",
            Statement::TwoPathOneEdge => "two-path-one-edge",
            Statement::TwoPathTwoEdges => "two-path-two-edges",
            Statement::ThreePathOneEdge => "three-path-one-edge",
            Statement::ThreePathMatching => "three-path-matching",
            Statement::TwoPathMatching => "two-path-matching",
            Statement::KPath => "k-path",
            Statement::CycleMatching => "cycle-matching",
            Statement::Halves => "halves",
        }
    }

    /// Statements whose constructions live in this crate.
    pub fn is_constructive(self) -> bool {
        matches!(self, Statement::TwoPathTwoEdges | Statement::ThreePathOneEdge | Statement::ThreePathMatching)
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn opposite(a: Vertex, b: Vertex) -> bool {
    a.parity() != b.parity()
}

fn avoids(pair: (Vertex, Vertex), edges: &[Edge]) -> bool {
    edges.iter().all(|e| !e.contains(pair.0) && !e.contains(pair.1))
}

/// The request with edge pairs (a pair that is itself a prescribed edge) and
/// one-vertex pairs moved into the forbidden set.
struct Canon {
    pairs: Vec<(Vertex, Vertex)>,
    prescribed: Vec<Edge>,
    forbidden: Vec<Vertex>,
    /// The removed edge pair, when there is exactly one and nothing else
    /// was forbidden.
    edge_pair: Option<(Vertex, Vertex)>,
}

fn canon(req: &Request) -> Canon {
    let mut pairs = Vec::new();
    let mut prescribed = req.prescribed.clone();
    let mut forbidden = req.forbidden.clone();
    let mut edge_pairs = Vec::new();
    let mut degenerate = false;
    for &(a, b) in &req.pairs {
        if a == b {
            forbidden.push(a);
            degenerate = true;
        } else if a.is_adjacent(b) && prescribed.contains(&Edge::of(a, b)) {
            prescribed.retain(|&e| e != Edge::of(a, b));
            forbidden.push(a);
            forbidden.push(b);
            edge_pairs.push((a, b));
        } else {
            pairs.push((a, b));
        }
    }
    let edge_pair =
        if edge_pairs.len() == 1 && req.forbidden.is_empty() && !degenerate { Some(edge_pairs[0]) } else { None };
    Canon { pairs, prescribed, forbidden, edge_pair }
}

/// Which statement, if any, covers the request.
pub fn classify(req: &Request) -> Option<Statement> {
    let m = req.n.get();
    if req.to_problem().validate().is_err() {
        return None;
    }
    if req.cycle {
        let ok = req.forbidden.is_empty()
            && m >= 4
            && is_matching(&req.prescribed)
            && req.prescribed.len() <= (3 * m as usize).saturating_sub(10);
        return ok.then_some(Statement::CycleMatching);
    }
    let c = canon(req);
    if !c.forbidden.is_empty() {
        return classify_forbidden(m, &c);
    }
    let (pairs, p) = (&c.pairs, &c.prescribed);
    let k = pairs.len();
    let all_opposite = pairs.iter().all(|&(a, b)| opposite(a, b));
    if k == 1 && all_opposite {
        let (x, y) = pairs[0];
        match p.len() {
            0 => return Some(Statement::Laceable),
            1 if !(x.is_adjacent(y) && p[0] == Edge::of(x, y)) => return Some(Statement::PathOneEdge),
            2 if m >= 4 && !p[0].touches(p[1]) => return Some(Statement::PathTwoEdges),
            _ => {}
        }
        if m >= 5 && p.len() <= 2 * m as usize - 4 && is_linear_forest(p) && nnc_check(p, x, y) {
            return Some(Statement::PathLinearForest);
        }
        return None;
    }
    if k == 2 {
        let (a, b) = (pairs[0], pairs[1]);
        if p.is_empty() {
            if all_opposite {
                return Some(Statement::TwoPath);
            }
            if m >= 4 && a.0.parity() == a.1.parity() && b.0.parity() == b.1.parity() && a.0.parity() != b.0.parity() {
                return Some(Statement::TwoPathSameParity);
            }
        }
        if all_opposite && p.len() == 1 && m >= 5 && (avoids(a, p) || avoids(b, p)) {
            return Some(Statement::TwoPathOneEdge);
        }
        if all_opposite && p.len() == 2 && m >= 6 && !p[0].touches(p[1]) && (avoids(a, p) || avoids(b, p)) {
            return Some(Statement::TwoPathTwoEdges);
        }
        if two_path_matching_roles(m, pairs, p).is_some() {
            return Some(Statement::TwoPathMatching);
        }
    }
    if k == 3 && all_opposite && p.len() == 1 && m >= 6 && pairs.iter().filter(|&&q| avoids(q, p)).count() >= 2 {
        return Some(Statement::ThreePathOneEdge);
    }
    if p.is_empty() && kpath_ok(m, pairs) {
        return Some(Statement::KPath);
    }
    if k == 3 && matching3_roles(m, pairs, p).is_some() {
        return Some(Statement::ThreePathMatching);
    }
    if p.is_empty() && k >= 2 && halves_split(req).is_some() {
        return Some(Statement::Halves);
    }
    None
}

fn classify_forbidden(m: u32, c: &Canon) -> Option<Statement> {
    let f = &c.forbidden;
    if f.len() != 2 || !f[0].is_adjacent(f[1]) {
        return None;
    }
    let (pairs, p) = (&c.pairs, &c.prescribed);
    if !pairs.iter().all(|&(a, b)| opposite(a, b)) {
        return None;
    }
    match (pairs.len(), p.len()) {
        (1, 0) => {
            let (u, v) = pairs[0];
            let exception =
                m == 3 && f[0].is_adjacent(f[1]) && u.is_adjacent(v) && pair_distance((u, v), (f[0], f[1])) == 2;
            (!exception).then_some(Statement::TwoPath)
        }
        (1, 1) => {
            let (u, v) = pairs[0];
            let e = p[0];
            let ok = m >= 5 && !e.contains(f[0]) && !e.contains(f[1]) && !(u.is_adjacent(v) && Edge::of(u, v) == e);
            ok.then_some(Statement::PathAvoidingEdge)
        }
        (2, 0) if m >= 6 && c.edge_pair.is_some() => Some(Statement::ThreePathOneEdge),
        _ => None,
    }
}

/// Distance between two edges: the least distance between their ends.
fn pair_distance(a: (Vertex, Vertex), b: (Vertex, Vertex)) -> u32 {
    [a.0.distance(b.0), a.0.distance(b.1), a.1.distance(b.0), a.1.distance(b.1)].into_iter().min().unwrap_or(0)
}

fn kpath_ok(m: u32, pairs: &[(Vertex, Vertex)]) -> bool {
    let mut balance = 0i64;
    let mut adjacent = 0usize;
    for &(a, b) in pairs {
        if a == b {
            return false;
        }
        for v in [a, b] {
            balance += if v.parity() == 0 { 1 } else { -1 };
        }
        if a.is_adjacent(b) {
            adjacent += 1;
        }
    }
    balance == 0 && 2 * pairs.len() - adjacent < m as usize
}

/// `(u, x, v, y)` for the matching 2-path statement: pairs `ux` and `vy` are
/// disjoint edges, `{u, v}` avoid the matching and `xy` is not in it.
fn two_path_matching_roles(
    m: u32,
    pairs: &[(Vertex, Vertex)],
    p: &[Edge],
) -> Option<(usize, Vertex, Vertex, usize, Vertex, Vertex)> {
    if m < 4 || pairs.len() != 2 || p.len() > (2 * m as usize).saturating_sub(8) || !is_matching(p) {
        return None;
    }
    let (a, b) = (pairs[0], pairs[1]);
    if !a.0.is_adjacent(a.1) || !b.0.is_adjacent(b.1) || Edge::of(a.0, a.1).touches(Edge::of(b.0, b.1)) {
        return None;
    }
    let covered: HashSet<Vertex> = p.iter().flat_map(|e| [e.lo(), e.hi()]).collect();
    for (u, x) in [(a.0, a.1), (a.1, a.0)] {
        for (v, y) in [(b.0, b.1), (b.1, b.0)] {
            let xy_in = x.is_adjacent(y) && p.contains(&Edge::of(x, y));
            if !covered.contains(&u) && !covered.contains(&v) && !xy_in {
                return Some((0, u, x, 1, v, y));
            }
        }
    }
    None
}

/// Role assignment for the matching 3-path statement, with the index of the
/// request pair playing each of `ux`, `vy`, `wz`.
pub(crate) fn matching3_roles(m: u32, pairs: &[(Vertex, Vertex)], p: &[Edge]) -> Option<(Roles, [usize; 3])> {
    if m < 5 || pairs.len() != 3 || p.len() > (2 * m as usize).saturating_sub(10) || !is_matching(p) {
        return None;
    }
    for first in 0..3 {
        let rest: Vec<usize> = (0..3).filter(|&i| i != first).collect();
        let (i1, i2) = (rest[0], rest[1]);
        let (a, b) = (pairs[i1], pairs[i2]);
        if !a.0.is_adjacent(a.1) || !b.0.is_adjacent(b.1) {
            continue;
        }
        for (u, x) in [pairs[first], (pairs[first].1, pairs[first].0)] {
            for (v, y) in [a, (a.1, a.0)] {
                for (w, z) in [b, (b.1, b.0)] {
                    let r = Roles { u, x, v, y, w, z };
                    if super::matching3::check(Dim::new(m).ok()?, &r, p).is_ok() {
                        return Some((r, [first, i1, i2]));
                    }
                }
            }
        }
    }
    None
}

/// A direction splitting the pairs into two non-empty groups, one per half,
/// with each half's request covered by some statement.
fn halves_split(req: &Request) -> Option<(SplitContext, Request, Request, Vec<Side>)> {
    let m = req.n.get();
    if m < 2 || !req.prescribed.is_empty() || !req.forbidden.is_empty() || req.cycle {
        return None;
    }
    for i in 1..=m {
        let sc = SplitContext::new(req.n, i).ok()?;
        let mut sides = Vec::with_capacity(req.pairs.len());
        let mut ok = true;
        for &(a, b) in &req.pairs {
            let s = sc.side(a);
            if sc.side(b) != s {
                ok = false;
                break;
            }
            sides.push(s);
        }
        if !ok || sides.iter().all(|&s| s == Side::Zero) || sides.iter().all(|&s| s == Side::One) {
            continue;
        }
        let half = |side: Side| {
            let pairs = req
                .pairs
                .iter()
                .zip(&sides)
                .filter(|(_, &s)| s == side)
                .map(|(&(a, b), _)| (sc.project(a), sc.project(b)))
                .collect();
            Request::k_path(sc.sub_dim(), pairs, vec![])
        };
        let (r0, r1) = (half(Side::Zero), half(Side::One));
        let covered = |r: &Request| matches!(classify(r), Some(s) if s != Statement::Halves);
        if covered(&r0) && covered(&r1) {
            return Some((sc, r0, r1, sides));
        }
    }
    None
}

/// Reorders and reverses `paths` so that path `i` runs from `pairs[i].0` to
/// `pairs[i].1`.
pub(crate) fn orient(paths: Vec<Vec<Vertex>>, pairs: &[(Vertex, Vertex)]) -> Option<Vec<Vec<Vertex>>> {
    let mut pool: Vec<Option<Vec<Vertex>>> = paths.into_iter().map(Some).collect();
    let mut out = Vec::with_capacity(pairs.len());
    for &(a, b) in pairs {
        let idx = pool.iter().position(|p| {
            p.as_ref().is_some_and(|p| {
                let (s, t) = (p[0], p[p.len() - 1]);
                (s == a && t == b) || (s == b && t == a)
            })
        })?;
        let mut p = pool[idx].take()?;
        if p[0] != a {
            p.reverse();
        }
        out.push(p);
    }
    Some(out)
}

pub(crate) fn lift_paths(sc: &SplitContext, side: Side, paths: Vec<Vec<Vertex>>) -> Vec<Vec<Vertex>> {
    paths.into_iter().map(|p| p.into_iter().map(|w| sc.lift(w, side)).collect()).collect()
}

impl Engine {
    /// Classifies, dispatches and verifies one request.
    pub(crate) fn provide(&mut self, req: &Request) -> Attempt<Vec<Vec<Vertex>>> {
        let Some(st) = classify(req) else {
            self.trace.stats.rejected_requests += 1;
            return Err(Failure::Rejected(format!("no statement covers {}", req.describe())));
        };
        self.event(TraceEvent::Statement { n: req.n.get(), statement: st });
        let got = match st {
            Statement::TwoPathTwoEdges => self.dispatch_two_edges(req),
            Statement::ThreePathOneEdge => self.dispatch_one_edge(req),
            Statement::ThreePathMatching => self.dispatch_matching3(req),
            Statement::Halves => self.halves(req),
            _ => return self.exact(req),
        };
        match got {
            Ok(paths) if req.verify(&paths) => Ok(paths),
            Ok(_) => self.fall_back(st.name(), Failure::Broken("result failed verification".into()), req),
            Err(e) => Err(e),
        }
    }

    /// Provides a request lying inside one half of `sc`, given and returned
    /// in full-cube coordinates.
    pub(crate) fn provide_half(&mut self, sc: &SplitContext, side: Side, req: Request) -> Attempt<Vec<Vec<Vertex>>> {
        let sub = self.provide(&req.project(sc))?;
        Ok(lift_paths(sc, side, sub))
    }

    /// Budgeted exact search on the request; the result is verified.
    pub(crate) fn exact(&mut self, req: &Request) -> Attempt<Vec<Vec<Vertex>>> {
        let p = req.to_problem();
        self.trace.stats.solver_calls += 1;
        let (outcome, stats) =
            solver::solve_with_stats(&p, &self.cfg.budget).map_err(|e| Failure::Rejected(e.to_string()))?;
        self.trace.stats.solver_nodes += stats.nodes;
        let paths = match outcome {
            Outcome::Found(Solution::Paths(p)) => p,
            Outcome::Found(Solution::Cycle(c)) => vec![c],
            Outcome::Unsat => return Err(Failure::Unsat(req.describe())),
            Outcome::BudgetExhausted => return Err(Failure::Budget(req.describe())),
        };
        if !req.verify(&paths) {
            return Err(Failure::Broken(format!("exact search returned an invalid solution for {}", req.describe())));
        }
        Ok(paths)
    }

    fn dispatch_two_edges(&mut self, req: &Request) -> Attempt<Vec<Vec<Vertex>>> {
        let p = &req.prescribed;
        let (a, b) = (req.pairs[0], req.pairs[1]);
        let ((u, v), (x, y)) = if avoids(b, p) { (a, b) } else { (b, a) };
        let paths = self.two_edges(req.n, u, v, x, y, p[0], p[1])?;
        orient(paths, &req.pairs).ok_or_else(|| Failure::Broken("two-edge result does not match pairs".into()))
    }

    fn dispatch_one_edge(&mut self, req: &Request) -> Attempt<Vec<Vec<Vertex>>> {
        let c = canon(req);
        let (first, e) = match c.edge_pair {
            Some((a, b)) if c.prescribed.is_empty() => ((a, b), Edge::of(a, b)),
            _ => {
                let e = req.prescribed[0];
                let first = req.pairs.iter().copied().find(|&q| !avoids(q, &[e])).unwrap_or(req.pairs[0]);
                (first, e)
            }
        };
        let rest: Vec<(Vertex, Vertex)> = req.pairs.iter().copied().filter(|&q| q != first).collect();
        let paths = self.one_edge(req.n, [first, rest[0], rest[1]], e)?;
        orient(paths, &req.pairs).ok_or_else(|| Failure::Broken("one-edge result does not match pairs".into()))
    }

    fn dispatch_matching3(&mut self, req: &Request) -> Attempt<Vec<Vec<Vertex>>> {
        let (roles, _) = matching3_roles(req.n.get(), &req.pairs, &req.prescribed)
            .ok_or_else(|| Failure::Rejected("matching 3-path roles".into()))?;
        let paths = self.matching3(req.n, roles, &req.prescribed)?;
        orient(paths, &req.pairs).ok_or_else(|| Failure::Broken("matching 3-path result does not match pairs".into()))
    }

    fn halves(&mut self, req: &Request) -> Attempt<Vec<Vec<Vertex>>> {
        let (sc, r0, r1, sides) = halves_split(req).ok_or_else(|| Failure::Rejected("no halves split".into()))?;
        let p0 = lift_paths(&sc, Side::Zero, self.provide(&r0)?);
        let p1 = lift_paths(&sc, Side::One, self.provide(&r1)?);
        let (mut i0, mut i1) = (p0.into_iter(), p1.into_iter());
        let mut out = Vec::with_capacity(req.pairs.len());
        for s in sides {
            let next = if s == Side::Zero { i0.next() } else { i1.next() };
            out.push(next.ok_or_else(|| Failure::Broken("halves path count".into()))?);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Vertex {
        Vertex::parse_bits(s).unwrap().0
    }

    fn dim(n: u32) -> Dim {
        Dim::new(n).unwrap()
    }

    #[test]
    fn laceable_and_paths() {
        let r = Request::path(dim(4), v("0000"), v("1000"), vec![]);
        assert_eq!(classify(&r), Some(Statement::Laceable));
        let r = Request::path(dim(4), v("0000"), v("1000"), vec![Edge::of(v("0000"), v("1000"))]);
        assert_eq!(classify(&r), None);
        let r = Request::path(dim(4), v("0000"), v("1000"), vec![Edge::of(v("0100"), v("0110"))]);
        assert_eq!(classify(&r), Some(Statement::PathOneEdge));
    }

    #[test]
    fn two_edges_routes_to_construction() {
        let n = dim(6);
        let r = Request::k_path(
            n,
            vec![(v("000000"), v("100000")), (v("111111"), v("011111"))],
            vec![Edge::of(v("010000"), v("011000")), Edge::of(v("000110"), v("000111"))],
        );
        assert_eq!(classify(&r), Some(Statement::TwoPathTwoEdges));
        assert!(Statement::TwoPathTwoEdges.is_constructive());
    }

    #[test]
    fn hypothesis_violations_rejected() {
        // same-parity pair
        let r = Request::path(dim(4), v("0000"), v("1100"), vec![]);
        assert_eq!(classify(&r), None);
        // too many pairs for the k-path bound and no split
        let r = Request::k_path(dim(2), vec![(v("00"), v("10")), (v("11"), v("01"))], vec![]);
        assert!(classify(&r).is_some());
        let r = Request::k_path(dim(2), vec![(v("00"), v("11"))], vec![]);
        assert_eq!(classify(&r), None);
    }

    #[test]
    fn forbidden_pair_statements() {
        let n = dim(5);
        let r = Request::k_path(
            n,
            vec![(v("00000"), v("10000")), (v("01000"), v("01100"))],
            vec![Edge::of(v("00000"), v("10000"))],
        );
        assert_eq!(classify(&r), Some(Statement::TwoPath));
        let r = Request::k_path(
            n,
            vec![(v("00000"), v("10000")), (v("01000"), v("01100"))],
            vec![Edge::of(v("00000"), v("10000")), Edge::of(v("00011"), v("00111"))],
        );
        assert_eq!(classify(&r), Some(Statement::PathAvoidingEdge));
    }

    #[test]
    fn cycle_requests() {
        let r = Request::cycle(dim(4), vec![Edge::of(v("0000"), v("1000"))]);
        assert_eq!(classify(&r), Some(Statement::CycleMatching));
        let r = Request::cycle(dim(3), vec![]);
        assert_eq!(classify(&r), None);
    }

    #[test]
    fn provide_verifies() {
        let r = Request::path(dim(4), v("0000"), v("1000"), vec![Edge::of(v("0100"), v("0110"))]);
        let out = super::super::subroutine(&r, &Default::default()).unwrap();
        assert_eq!(out.paths[0][0], v("0000"));
        assert_eq!(*out.paths[0].last().unwrap(), v("1000"));
    }

    #[test]
    fn orient_reorders() {
        let p = vec![vec![v("11"), v("01")], vec![v("10"), v("00")]];
        let o = orient(p, &[(v("00"), v("10")), (v("01"), v("11"))]).unwrap();
        assert_eq!(o[0], vec![v("00"), v("10")]);
        assert_eq!(o[1], vec![v("01"), v("11")]);
    }
}
