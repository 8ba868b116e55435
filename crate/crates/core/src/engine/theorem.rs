//! The inductive construction of a Hamiltonian `x`-`y` path through a
//! matching `M`, `|M| <= 3n - 13`.
//!
//! Split along the coordinate cutting fewest matching edges, with the larger
//! share `M_0` in half 0. The case is how far `M_0` exceeds the bound one
//! dimension down: case 1 recurses directly, cases 2 to 4 first set aside
//! one to three edges of `M_0` and insert them back before bridging. The
//! subcase is where the terminals sit:
//!
//! * `.1` both in half 0: recurse on `x, y`.
//! * `.2` one in each half: recurse on `x, z_0` with `z_0` free, crossing to
//!   the half-1 path `z_1 .. y`.
//! * `.3` both in half 1 (cases 2 to 4): a Hamiltonian cycle of half 0
//!   through `M_0`, opened towards half 1.

use crate::cube::{vertex_edge_distance, Dim, Edge, Side, SplitContext, Vertex};
use crate::forest::{choose_split_dim, layer_counts, matching_bound};

use super::bridge::Bridge;
use super::provider::{lift_paths, Request};
use super::{Attempt, Engine, Failure};

/// Split coordinates tried before the exact fallback.
const SPLIT_TRIES: usize = 2;
/// Choices of `z_0` and of dropped edge sets per split.
const CHOICE_TRIES: usize = 4;

impl Engine {
    pub(crate) fn theorem(&mut self, n: Dim, m: &[Edge], x: Vertex, y: Vertex) -> Attempt<Vec<Vertex>> {
        let req = Request::path(n, x, y, m.to_vec());
        if m.is_empty() || n.get() <= self.cfg.n_base.max(5) {
            return Ok(self.exact(&req)?.swap_remove(0));
        }
        self.enter();
        let built = self.theorem_build(n, m, x, y);
        self.leave();
        match built {
            Ok(p) => Ok(p),
            Err(f) => Ok(self.fall_back("theorem", f, &req)?.swap_remove(0)),
        }
    }

    fn theorem_build(&mut self, n: Dim, m: &[Edge], x: Vertex, y: Vertex) -> Attempt<Vec<Vertex>> {
        let first = choose_split_dim(n, m, &[]);
        let counts = layer_counts(n, m);
        let mut dims: Vec<u32> = (1..=n.get()).filter(|&j| j != first).collect();
        dims.sort_by_key(|&j| (counts[j as usize], j));
        dims.insert(0, first);
        let mut last = Failure::Rejected("no split".into());
        for &j in dims.iter().take(SPLIT_TRIES) {
            match self.theorem_split(n, j, m, x, y) {
                Ok(p) => return Ok(p),
                Err(f) => last = f,
            }
        }
        Err(last)
    }

    fn theorem_split(&mut self, n: Dim, j: u32, m: &[Edge], x: Vertex, y: Vertex) -> Attempt<Vec<Vertex>> {
        let mut sc = SplitContext::new(n, j).map_err(|e| Failure::Broken(e.to_string()))?;
        let (m0, m1, _) = sc.classify_edges(m.iter());
        if m1.len() > m0.len() {
            sc = sc.swapped();
        }
        let sub_bound = matching_bound(n.get() - 1);
        let (m0, _, _) = sc.classify_edges(m.iter());
        let case = 1 + m0.len().saturating_sub(sub_bound);
        let side = |v: Vertex| sc.side(v);
        if case == 1 && side(x) == Side::One && side(y) == Side::One {
            sc = sc.swapped();
        }
        let (m0, _, _) = sc.classify_edges(m.iter());
        let case = 1 + m0.len().saturating_sub(sub_bound);
        // terminals oriented so `a` is in half 0 whenever one of them is
        let side = |v: Vertex| sc.side(v);
        let reversed = side(x) == Side::One && side(y) == Side::Zero;
        let (a, b) = if reversed { (y, x) } else { (x, y) };
        let pairs = [(a, b)];
        let bridge = |structure: Vec<Vec<Vertex>>, cyclic: bool, insert: Vec<Edge>| Bridge {
            sc,
            structure,
            cyclic,
            pairs: &pairs,
            prescribed: m,
            insert,
            forced: vec![],
            max_detours: 2,
        };
        let covered = |v: Vertex| m.iter().any(|e| e.contains(v));
        let mut last = Failure::Rejected("no plan".into());
        let path = match (side(a), side(b)) {
            (Side::Zero, Side::Zero) => {
                self.case(n, j, format!("case{case}.1"));
                let mut found = None;
                for drop in drop_sets(&m0, case - 1, &[a, b]).into_iter().take(CHOICE_TRIES) {
                    let kept: Vec<Edge> = m0.iter().copied().filter(|e| !drop.contains(e)).collect();
                    let res = self.theorem_half(&sc, &kept, a, b).and_then(|s| self.bridge(&bridge(s, false, drop)));
                    match res {
                        Ok(p) => {
                            found = Some(p);
                            break;
                        }
                        Err(f) => last = f,
                    }
                }
                found
            }
            (Side::Zero, Side::One) => {
                self.case(n, j, format!("case{case}.2"));
                let z0s: Vec<Vertex> = n
                    .vertices()
                    .filter(|&z| {
                        side(z) == Side::Zero
                            && z.parity() != a.parity()
                            && !covered(z)
                            && sc.partner(z) != b
                            && !covered(sc.partner(z))
                    })
                    .take(CHOICE_TRIES)
                    .collect();
                let mut found = None;
                'outer: for z0 in z0s {
                    for drop in drop_sets(&m0, case - 1, &[a, z0]).into_iter().take(CHOICE_TRIES) {
                        let kept: Vec<Edge> = m0.iter().copied().filter(|e| !drop.contains(e)).collect();
                        let res =
                            self.theorem_half(&sc, &kept, a, z0).and_then(|s| self.bridge(&bridge(s, false, drop)));
                        match res {
                            Ok(p) => {
                                found = Some(p);
                                break 'outer;
                            }
                            Err(f) => last = f,
                        }
                    }
                }
                found
            }
            _ => {
                self.case(n, j, format!("case{case}.3"));
                let c0 = self.provide_half(&sc, Side::Zero, Request::cycle(n, m0.clone()))?;
                Some(self.bridge(&bridge(c0, true, vec![]))?)
            }
        };
        let mut path = path.ok_or(last)?.swap_remove(0);
        if reversed {
            path.reverse();
        }
        Ok(path)
    }

    /// Recursive call in half 0 of `sc`, in full-cube coordinates.
    fn theorem_half(&mut self, sc: &SplitContext, m0: &[Edge], a: Vertex, b: Vertex) -> Attempt<Vec<Vec<Vertex>>> {
        let sub = sc.sub_dim();
        if sub.get() + 1 != sc.n().get() {
            self.trace.stats.depth_violations += 1;
        }
        if m0.len() > matching_bound(sub.get()) {
            self.trace.stats.bound_violations += 1;
            return Err(Failure::Rejected(format!("sub-matching of {} edges exceeds the bound", m0.len())));
        }
        let pm: Vec<Edge> = m0.iter().filter_map(|&e| sc.project_edge(e)).collect();
        let (pa, pb) = (sc.project(a), sc.project(b));
        if pa.is_adjacent(pb) && pm.contains(&Edge::of(pa, pb)) {
            return Err(Failure::Rejected("terminal pair is a matching edge".into()));
        }
        let p = self.theorem(sub, &pm, pa, pb)?;
        Ok(lift_paths(sc, Side::Zero, vec![p]))
    }
}

/// Candidate sets of `k` edges of `m0` to set aside, avoiding the vertices in
/// `avoid`, preferring edges far from them and spread apart.
pub(super) fn drop_sets(m0: &[Edge], k: usize, avoid: &[Vertex]) -> Vec<Vec<Edge>> {
    if k == 0 {
        return vec![vec![]];
    }
    let far = |e: &Edge| avoid.iter().map(|&t| vertex_edge_distance(t, *e)).min().unwrap_or(u32::MAX);
    let mut cand: Vec<Edge> = m0.iter().copied().filter(|e| far(e) >= 1).collect();
    cand.sort_by_key(|e| std::cmp::Reverse(far(e).min(2)));
    let mut out = Vec::new();
    for start in 0..cand.len().min(CHOICE_TRIES) {
        let mut set = vec![cand[start]];
        for &e in cand.iter().skip(start + 1) {
            if set.len() == k {
                break;
            }
            if set.iter().all(|d| vertex_edge_distance(d.lo(), e).min(vertex_edge_distance(d.hi(), e)) >= 2) {
                set.push(e);
            }
        }
        for &e in &cand {
            if set.len() == k {
                break;
            }
            if !set.contains(&e) {
                set.push(e);
            }
        }
        set.sort();
        if set.len() == k && !out.contains(&set) {
            out.push(set);
        }
    }
    out
}
