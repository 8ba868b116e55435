//! Spanning 3-path `P_ux + P_vy + P_wz` through a matching `M`,
//! `|M| <= 2n - 10`, where `vy` and `wz` are edges of the cube.
//!
//! `Q_5` is solved directly. Above that the cube is split along a coordinate
//! that neither `vy` nor `wz` uses, oriented so `vy` lies in half 0, and the
//! case is read off the sides of `wz`, `u` and `x`:
//!
//! * `wz` in half 0, `u, x` in half 0: recurse in half 0 with `M_0` (after
//!   dropping matching edges that would break the bound there; they are
//!   inserted back before bridging).
//! * `wz` in half 0, one of `u, x` in half 1: recurse on `(u, r_0)` with `r_0`
//!   a free neighbour that crosses over, or, when `M_0` is too large, take a
//!   2-path `P_vy + P_wz` through `M_0` and carve the remaining terminal out.
//! * `wz` in half 0, `u, x` in half 1: 2-path `P_vy + P_wz` through `M_0`.
//! * `wz` in half 1: a path `P_vy` (or a 2-path with a neighbour of `u` or
//!   `x`) through `M_0` in half 0, the rest in half 1.

use crate::cube::{Dim, Edge, Side, SplitContext, Vertex};
use crate::forest::is_matching;

use super::bridge::Bridge;
use super::provider::Request;
use super::theorem::drop_sets;
use super::{Attempt, Engine, Failure};

/// Split coordinates tried before the exact fallback.
const SPLIT_TRIES: usize = 3;
/// Choices of a free neighbour or carve-out edge per split.
const NEIGHBOR_TRIES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Roles {
    pub u: Vertex,
    pub x: Vertex,
    pub v: Vertex,
    pub y: Vertex,
    pub w: Vertex,
    pub z: Vertex,
}

impl Roles {
    fn pairs(&self) -> [(Vertex, Vertex); 3] {
        [(self.u, self.x), (self.v, self.y), (self.w, self.z)]
    }

    fn all(&self) -> [Vertex; 6] {
        [self.u, self.x, self.v, self.y, self.w, self.z]
    }

    fn map(&self, f: impl Fn(Vertex) -> Vertex) -> Roles {
        Roles { u: f(self.u), x: f(self.x), v: f(self.v), y: f(self.y), w: f(self.w), z: f(self.z) }
    }
}

pub(crate) fn bound(n: u32) -> usize {
    (2 * n as usize).saturating_sub(10)
}

pub(crate) fn check(n: Dim, r: &Roles, m: &[Edge]) -> Result<(), String> {
    if n.get() < 5 {
        return Err(format!("matching 3-path needs n >= 5, got {n}"));
    }
    let vs = r.all();
    if vs.iter().any(|a| !a.is_valid(n)) || m.iter().any(|e| !e.is_valid(n)) {
        return Err("vertex or edge outside the cube".into());
    }
    if m.len() > bound(n.get()) {
        return Err(format!("|M| = {} exceeds 2n-10 = {}", m.len(), bound(n.get())));
    }
    if !is_matching(m) {
        return Err("M is not a matching".into());
    }
    for i in 0..6 {
        if vs[i + 1..].contains(&vs[i]) {
            return Err("terminals must be distinct".into());
        }
    }
    if r.u.parity() == r.x.parity() {
        return Err("u and x need opposite parity".into());
    }
    if !r.v.is_adjacent(r.y) || !r.w.is_adjacent(r.z) {
        return Err("vy and wz must be edges".into());
    }
    if m.iter().any(|e| e.contains(r.u) || e.contains(r.v) || e.contains(r.w)) {
        return Err("u, v, w must avoid M".into());
    }
    let in_m = |a: Vertex, b: Vertex| a.is_adjacent(b) && m.contains(&Edge::of(a, b));
    if in_m(r.x, r.y) || in_m(r.y, r.z) || in_m(r.z, r.x) {
        return Err("xy, yz and zx must not be in M".into());
    }
    Ok(())
}

impl Engine {
    pub(crate) fn matching3(&mut self, n: Dim, r: Roles, m: &[Edge]) -> Attempt<Vec<Vec<Vertex>>> {
        self.trace.stats.constructions += 1;
        let req = Request::k_path(n, r.pairs().to_vec(), m.to_vec());
        if n.get() <= 5 {
            return self.exact(&req);
        }
        self.enter();
        let built = self.matching3_build(n, r, m);
        self.leave();
        match built {
            Ok(p) => Ok(p),
            Err(f) => self.fall_back("matching 3-path", f, &req),
        }
    }

    fn matching3_build(&mut self, n: Dim, r: Roles, m: &[Edge]) -> Attempt<Vec<Vec<Vertex>>> {
        let (dvy, dwz) = (Edge::of(r.v, r.y).dim(), Edge::of(r.w, r.z).dim());
        let mut dims: Vec<(usize, u32)> = (1..=n.get())
            .filter(|&j| j != dvy && j != dwz)
            .filter_map(|j| {
                let cut: Vec<&Edge> = m.iter().filter(|e| e.dim() == j).collect();
                let clean = cut.iter().all(|e| !e.contains(r.x) && !e.contains(r.y) && !e.contains(r.z));
                clean.then_some((cut.len(), j))
            })
            .collect();
        dims.sort();
        let mut last = Failure::Rejected("no admissible split".into());
        for &(_, j) in dims.iter().take(SPLIT_TRIES) {
            let mut sc = SplitContext::new(n, j).map_err(|e| Failure::Broken(e.to_string()))?;
            if sc.side(r.v) == Side::One {
                sc = sc.swapped();
            }
            match self.matching3_split(&sc, r, m) {
                Ok(p) => return Ok(p),
                Err(f) => last = f,
            }
        }
        Err(last)
    }

    fn matching3_split(&mut self, sc: &SplitContext, r: Roles, m: &[Edge]) -> Attempt<Vec<Vec<Vertex>>> {
        let n = sc.n();
        let half0 = |a: Vertex| sc.side(a) == Side::Zero;
        let (m0, m1, _) = sc.classify_edges(m.iter());
        let pairs = r.pairs();
        let sub_bound = bound(n.get() - 1);
        let bridge = |structure: Vec<Vec<Vertex>>, insert: Vec<Edge>, max_detours: usize| Bridge {
            sc: *sc,
            structure,
            cyclic: false,
            pairs: &pairs,
            prescribed: m,
            insert,
            forced: vec![],
            max_detours,
        };
        let covered = |a: Vertex| m.iter().any(|e| e.contains(a));
        let free_nbrs = |a: Vertex| -> Vec<Vertex> {
            a.neighbors(n).filter(|&s| half0(s) && !covered(s) && !r.all().contains(&s)).take(NEIGHBOR_TRIES).collect()
        };
        let mut last = Failure::Rejected("configuration not covered".into());

        if half0(r.w) {
            match (half0(r.u), half0(r.x)) {
                (true, true) => {
                    let excess = m0.len().saturating_sub(sub_bound);
                    let label = match (excess, m1.len()) {
                        (0, _) => "case1.1",
                        (_, 0) => "case1.2.1",
                        _ => "case1.2.2",
                    };
                    self.case(n, sc.j(), label);
                    for drop in drop_sets(&m0, excess, &[r.x, r.y, r.z]) {
                        let kept: Vec<Edge> = m0.iter().copied().filter(|e| !drop.contains(e)).collect();
                        let s = match self.matching3_half(sc, r, &kept) {
                            Ok(s) => s,
                            Err(f) => {
                                last = f;
                                continue;
                            }
                        };
                        let detours = if drop.is_empty() { 1 } else { 2 };
                        match self.bridge(&bridge(s, drop, detours)) {
                            Ok(p) => return Ok(p),
                            Err(f) => last = f,
                        }
                    }
                }
                (false, false) => {
                    self.case(n, sc.j(), "case2.3");
                    let req = Request::k_path(n, vec![(r.v, r.y), (r.w, r.z)], m0.clone());
                    let s = self.provide_half(sc, Side::Zero, req)?;
                    return self.bridge(&bridge(s, vec![], 1));
                }
                (u_in, _) => {
                    // one of u, x crosses; `a` stays, `b` is in half 1
                    let (a, b) = if u_in { (r.u, r.x) } else { (r.x, r.u) };
                    if m0.len() <= sub_bound {
                        self.case(n, sc.j(), "case2.1");
                        for r0 in free_nbrs(a) {
                            if sc.partner(r0) == b {
                                continue;
                            }
                            let sub = if u_in { Roles { x: r0, ..r } } else { Roles { u: r0, ..r } };
                            let s = match self.matching3_half(sc, sub, &m0) {
                                Ok(s) => s,
                                Err(f) => {
                                    last = f;
                                    continue;
                                }
                            };
                            match self.bridge(&bridge(s, vec![], 0)) {
                                Ok(p) => return Ok(p),
                                Err(f) => last = f,
                            }
                        }
                    } else {
                        self.case(n, sc.j(), "case2.2");
                        let req = Request::k_path(n, vec![(r.v, r.y), (r.w, r.z)], m0.clone());
                        let s = self.provide_half(sc, Side::Zero, req)?;
                        for s0 in a.neighbors(n).filter(|&s0| half0(s0) && !r.all().contains(&s0)) {
                            match self.bridge(&bridge(s.clone(), vec![Edge::of(a, s0)], 0)) {
                                Ok(p) => return Ok(p),
                                Err(f) => last = f,
                            }
                        }
                    }
                }
            }
            return Err(last);
        }

        // wz in half 1
        match (half0(r.u), half0(r.x)) {
            (false, false) => {
                self.case(n, sc.j(), "case3");
                let s = self.provide_half(sc, Side::Zero, Request::path(n, r.v, r.y, m0.clone()))?;
                self.bridge(&bridge(s, vec![], 1))
            }
            (true, true) => {
                self.case(n, sc.j(), "case3.2");
                let req = Request::k_path(n, vec![(r.u, r.x), (r.v, r.y)], m0.clone());
                let s = self.provide_half(sc, Side::Zero, req)?;
                self.bridge(&bridge(s, vec![], 1))
            }
            (u_in, _) => {
                self.case(n, sc.j(), "case3.1");
                let a = if u_in { r.u } else { r.x };
                for t0 in free_nbrs(a) {
                    let req = Request::k_path(n, vec![(a, t0), (r.v, r.y)], m0.clone());
                    let s = match self.provide_half(sc, Side::Zero, req) {
                        Ok(s) => s,
                        Err(f) => {
                            last = f;
                            continue;
                        }
                    };
                    match self.bridge(&bridge(s, vec![], 0)) {
                        Ok(p) => return Ok(p),
                        Err(f) => last = f,
                    }
                }
                Err(last)
            }
        }
    }

    /// Recursive call in half 0 of `sc`, in full-cube coordinates.
    fn matching3_half(&mut self, sc: &SplitContext, r: Roles, m0: &[Edge]) -> Attempt<Vec<Vec<Vertex>>> {
        let sub = sc.sub_dim();
        if m0.len() > bound(sub.get()) {
            self.trace.stats.bound_violations += 1;
            return Err(Failure::Rejected(format!("sub-matching of {} edges exceeds the bound", m0.len())));
        }
        let pr = r.map(|a| sc.project(a));
        let pm: Vec<Edge> = m0.iter().filter_map(|&e| sc.project_edge(e)).collect();
        check(sub, &pr, &pm).map_err(Failure::Rejected)?;
        let paths = self.matching3(sub, pr, &pm)?;
        Ok(super::provider::lift_paths(sc, Side::Zero, paths))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::EngineConfig;

    fn v(s: &str) -> Vertex {
        Vertex::parse_bits(s).unwrap().0
    }

    fn roles6() -> Roles {
        Roles { u: v("000000"), x: v("111110"), v: v("100000"), y: v("110000"), w: v("000011"), z: v("000111") }
    }

    #[test]
    fn check_rules() {
        let n = Dim::new(6).unwrap();
        let r = roles6();
        check(n, &r, &[Edge::of(v("010101"), v("110101"))]).unwrap();
        assert!(check(n, &r, &[Edge::of(v("000000"), v("000001"))]).is_err());
        assert!(check(n, &r, &[Edge::of(v("100000"), v("100001"))]).is_err());
        let three = [
            Edge::of(v("010101"), v("110101")),
            Edge::of(v("011101"), v("011111")),
            Edge::of(v("001001"), v("001000")),
        ];
        assert!(check(n, &r, &three).is_err());
        assert!(check(Dim::new(4).unwrap(), &r, &[]).is_err());
    }

    #[test]
    fn builds_at_six() {
        let n = Dim::new(6).unwrap();
        let r = roles6();
        let m = [Edge::of(v("010101"), v("110101"))];
        let cfg = EngineConfig { strict: true, ..Default::default() };
        let out = crate::engine::spanning3_matching(n, r.u, r.x, (r.v, r.y), (r.w, r.z), &m, &cfg).unwrap();
        crate::verify::verify(n, &out.paths, &r.pairs(), &m, &[]).unwrap();
        assert_eq!(out.trace.stats.bound_violations, 0);
    }

    #[test]
    fn base_case_is_exact() {
        let n = Dim::new(5).unwrap();
        let r = Roles { u: v("00000"), x: v("11100"), v: v("10000"), y: v("11000"), w: v("00011"), z: v("00111") };
        let out = crate::engine::spanning3_matching(n, r.u, r.x, (r.v, r.y), (r.w, r.z), &[], &EngineConfig::default())
            .unwrap();
        assert_eq!(out.paths.len(), 3);
        assert_eq!(out.trace.stats.fallbacks, 0);
    }
}
