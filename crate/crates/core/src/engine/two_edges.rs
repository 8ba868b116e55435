//! Spanning 2-path `P_uv + P_xy` through two prescribed edges, `n >= 6`.
//!
//! Split along a coordinate separating `u` from `x` that neither edge uses.
//! Half 0 gets a Hamiltonian path through its share of the edges, ending at
//! `u` and at `y`, `v` or a chosen vertex `w_0`; the bridge cuts it where the
//! final paths leave for half 1 and closes them there.

use crate::cube::{Dim, Edge, Side, SplitContext, Vertex};

use super::bridge::Bridge;
use super::provider::Request;
use super::{Attempt, Engine, Failure};

/// Attempts per role assignment before the exact fallback.
const SPLIT_TRIES: usize = 6;

pub(super) fn check(n: Dim, u: Vertex, v: Vertex, x: Vertex, y: Vertex, e1: Edge, e2: Edge) -> Result<(), String> {
    if n.get() < 6 {
        return Err(format!("two-edge 2-path needs n >= 6, got {n}"));
    }
    let vs = [u, v, x, y];
    if vs.iter().any(|w| !w.is_valid(n)) || !e1.is_valid(n) || !e2.is_valid(n) {
        return Err("vertex or edge outside the cube".into());
    }
    for i in 0..4 {
        for j in i + 1..4 {
            if vs[i] == vs[j] {
                return Err("terminals must be distinct".into());
            }
        }
    }
    if u.parity() == v.parity() || x.parity() == y.parity() {
        return Err("each pair needs opposite parity".into());
    }
    if [e1, e2].iter().any(|e| e.contains(x) || e.contains(y)) {
        return Err("x and y must avoid both edges".into());
    }
    if e1 == e2 || e1.touches(e2) {
        return Err("the two edges must be disjoint".into());
    }
    Ok(())
}

impl Engine {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn two_edges(
        &mut self,
        n: Dim,
        u: Vertex,
        v: Vertex,
        x: Vertex,
        y: Vertex,
        e1: Edge,
        e2: Edge,
    ) -> Attempt<Vec<Vec<Vertex>>> {
        self.trace.stats.constructions += 1;
        let req = Request::k_path(n, vec![(u, v), (x, y)], vec![e1, e2]);
        self.enter();
        let built = self.two_edges_build(n, u, v, x, y, e1, e2);
        self.leave();
        match built {
            Ok(p) => Ok(p),
            Err(f) => self.fall_back("two-edge 2-path", f, &req),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn two_edges_build(
        &mut self,
        n: Dim,
        u: Vertex,
        v: Vertex,
        x: Vertex,
        y: Vertex,
        e1: Edge,
        e2: Edge,
    ) -> Attempt<Vec<Vec<Vertex>>> {
        let pairs = [(u, v), (x, y)];
        let edges = [e1, e2];
        if u.is_adjacent(v) && edges.contains(&Edge::of(u, v)) {
            // P_uv is the edge itself; P_xy avoids it and takes the other edge.
            let other = if e1 == Edge::of(u, v) { e2 } else { e1 };
            let sub = Request::path(n, x, y, vec![other]).with_forbidden(vec![u, v]);
            let pxy = self.provide(&sub)?;
            return Ok(vec![vec![u, v], pxy.into_iter().next().unwrap_or_default()]);
        }
        // orientations: v should avoid both edges; x takes u's parity
        let mut roles = vec![(u, v), (v, u)];
        roles.sort_by_key(|&(_, b)| edges.iter().any(|e| e.contains(b)));
        let mut last = Failure::Rejected("no admissible split".into());
        for (a, b) in roles {
            let (c, d) = if x.parity() == a.parity() { (x, y) } else { (y, x) };
            let dims: Vec<u32> =
                (1..=n.get()).filter(|&j| a.coord(j) != c.coord(j) && j != e1.dim() && j != e2.dim()).collect();
            for j in dims.into_iter().take(SPLIT_TRIES) {
                let mut sc = SplitContext::new(n, j).map_err(|e| Failure::Broken(e.to_string()))?;
                if sc.side(a) == Side::One {
                    sc = sc.swapped();
                }
                self.case(n, j, format!("two-edge d={} b={}", side_tag(&sc, d), side_tag(&sc, b)));
                match self.two_edges_split(&sc, (a, b), (c, d), &edges, &pairs) {
                    Ok(p) => return Ok(p),
                    Err(f) => last = f,
                }
            }
        }
        Err(last)
    }

    /// One split with `a` in half 0 and `c` in half 1; `(a, b)` is the pair
    /// playing `uv`, `(c, d)` the pair playing `xy`.
    fn two_edges_split(
        &mut self,
        sc: &SplitContext,
        (a, b): (Vertex, Vertex),
        (c, d): (Vertex, Vertex),
        edges: &[Edge; 2],
        pairs: &[(Vertex, Vertex)],
    ) -> Attempt<Vec<Vec<Vertex>>> {
        let (e0, _, _) = sc.classify_edges(edges.iter());
        let half0 = |w: Vertex| sc.side(w) == Side::Zero;
        let bridge = |structure: Vec<Vec<Vertex>>, max_detours: usize| Bridge {
            sc: *sc,
            structure,
            cyclic: false,
            pairs,
            prescribed: edges,
            insert: vec![],
            forced: vec![],
            max_detours,
        };
        if half0(d) {
            // P^0 from a to d; b is cut out of it (b in half 0) or reached by a detour
            let p0 = self.provide_half(sc, Side::Zero, Request::path(sc.n(), a, d, e0.clone()))?;
            return self.bridge(&bridge(p0, usize::from(!half0(b))));
        }
        if half0(b) {
            let p0 = self.provide_half(sc, Side::Zero, Request::path(sc.n(), a, b, e0.clone()))?;
            return self.bridge(&bridge(p0, 0));
        }
        // b and d in half 1: P^0 from a to some w_0, crossing to w_1
        let mut last = Failure::Rejected("no w_0 candidate".into());
        let mut tries = 0;
        for w0 in sc.n().vertices().filter(|&w| half0(w) && w.parity() != a.parity()) {
            let w1 = sc.partner(w0);
            if w1 == c || (a.is_adjacent(w0) && edges.contains(&Edge::of(a, w0))) {
                continue;
            }
            tries += 1;
            if tries > SPLIT_TRIES {
                break;
            }
            let p0 = match self.provide_half(sc, Side::Zero, Request::path(sc.n(), a, w0, e0.clone())) {
                Ok(p) => p,
                Err(f) => {
                    last = f;
                    continue;
                }
            };
            match self.bridge(&bridge(p0, 0)) {
                Ok(p) => return Ok(p),
                Err(f) => last = f,
            }
        }
        Err(last)
    }
}

pub(super) fn side_tag(sc: &SplitContext, v: Vertex) -> &'static str {
    match sc.side(v) {
        Side::Zero => "0",
        Side::One => "1",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::EngineConfig;

    fn v(s: &str) -> Vertex {
        Vertex::parse_bits(s).unwrap().0
    }

    #[test]
    fn builds_and_verifies() {
        let n = Dim::new(6).unwrap();
        let (u, vv, x, y) = (v("000000"), v("100000"), v("111111"), v("011111"));
        let e1 = Edge::of(v("010000"), v("011000"));
        let e2 = Edge::of(v("000110"), v("000111"));
        let cfg = EngineConfig { strict: true, ..Default::default() };
        let out = crate::engine::spanning2_two_edges(n, u, vv, x, y, e1, e2, &cfg).unwrap();
        crate::verify::verify(n, &out.paths, &[(u, vv), (x, y)], &[e1, e2], &[]).unwrap();
    }

    #[test]
    fn edge_pair_gives_single_edge() {
        let n = Dim::new(6).unwrap();
        let (u, vv, x, y) = (v("000000"), v("100000"), v("111111"), v("011111"));
        let e1 = Edge::of(u, vv);
        let e2 = Edge::of(v("000110"), v("000111"));
        let out = crate::engine::spanning2_two_edges(n, u, vv, x, y, e1, e2, &EngineConfig::default()).unwrap();
        assert_eq!(out.paths[0], vec![u, vv]);
    }

    #[test]
    fn rejects_bad_input() {
        let n = Dim::new(6).unwrap();
        let (u, vv, x, y) = (v("000000"), v("100000"), v("111111"), v("011111"));
        let e1 = Edge::of(x, v("111110"));
        let e2 = Edge::of(v("000110"), v("000111"));
        assert!(check(n, u, vv, x, y, e1, e2).is_err());
        assert!(check(Dim::new(5).unwrap(), v("00000"), v("10000"), v("11111"), v("01111"), e2, e2).is_err());
    }
}
