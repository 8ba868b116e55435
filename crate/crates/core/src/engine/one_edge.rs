//! Spanning 3-path `P_uv + P_xy + P_wz` through one prescribed edge `e`,
//! `n >= 6`, with `x, y, w, z` off `e`. When `uv = e` the first path is `e`.
//!
//! Roles are normalised so `u`, `x`, `w` share a parity, then the cube is
//! split along a coordinate separating `u` from `x` other than `dim(e)`, with
//! `e` in half 0. Two configurations are built:
//!
//! * A: `v, w, z` in half 0. Half 0 gets a 2-path `P_uv + P_wz` through `e`;
//!   if `y` is in half 0 as well it is carved out of its host path by
//!   inserting an edge `y s_0`.
//! * B: `v, z` in half 1 and `y` in half 0. Half 0 gets a 2-path
//!   `P_{u s_0} + P_{y r_0}` through `e`, and `w` is carved out when it lies
//!   in half 0.
//!
//! The bridge chooses the edges to cut and the pairing in half 1. Other
//! configurations get a generic split-and-bridge attempt, then the next
//! split, then the exact fallback.

use crate::cube::{Dim, Edge, Side, SplitContext, Vertex};

use super::bridge::Bridge;
use super::provider::Request;
use super::{Attempt, Engine, Failure};

/// Bridging calls per construction before the exact fallback.
const MAX_TRIES: usize = 24;

pub(super) fn check(n: Dim, pairs: &[(Vertex, Vertex); 3], e: Edge) -> Result<(), String> {
    if n.get() < 6 {
        return Err(format!("one-edge 3-path needs n >= 6, got {n}"));
    }
    let vs: Vec<Vertex> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    if vs.iter().any(|w| !w.is_valid(n)) || !e.is_valid(n) {
        return Err("vertex or edge outside the cube".into());
    }
    for i in 0..vs.len() {
        if vs[i + 1..].contains(&vs[i]) {
            return Err("terminals must be distinct".into());
        }
    }
    if pairs.iter().any(|&(a, b)| a.parity() == b.parity()) {
        return Err("each pair needs opposite parity".into());
    }
    if vs[2..].iter().any(|&w| e.contains(w)) {
        return Err("x, y, w, z must avoid the edge".into());
    }
    Ok(())
}

/// Roles `(u, v), (x, y), (w, z)` with `u, x, w` of one parity.
type Roles = [(Vertex, Vertex); 3];

fn role_assignments(pairs: &[(Vertex, Vertex); 3], e: Edge) -> Vec<Roles> {
    let touching: Vec<usize> = (0..3).filter(|&i| e.contains(pairs[i].0) || e.contains(pairs[i].1)).collect();
    let firsts = if touching.is_empty() { vec![0, 1, 2] } else { touching };
    let mut out = Vec::new();
    for f in firsts {
        let rest: Vec<usize> = (0..3).filter(|&i| i != f).collect();
        for (i, k) in [(rest[0], rest[1]), (rest[1], rest[0])] {
            for (a, b) in [pairs[f], (pairs[f].1, pairs[f].0)] {
                let align = |(s, t): (Vertex, Vertex)| if s.parity() == a.parity() { (s, t) } else { (t, s) };
                out.push([(a, b), align(pairs[i]), align(pairs[k])]);
            }
        }
    }
    out
}

impl Engine {
    pub(crate) fn one_edge(&mut self, n: Dim, pairs: [(Vertex, Vertex); 3], e: Edge) -> Attempt<Vec<Vec<Vertex>>> {
        self.trace.stats.constructions += 1;
        let req = Request::k_path(n, pairs.to_vec(), vec![e]);
        self.enter();
        let built = self.one_edge_build(n, &pairs, e);
        self.leave();
        match built {
            Ok(p) => Ok(p),
            Err(f) => self.fall_back("one-edge 3-path", f, &req),
        }
    }

    fn one_edge_build(&mut self, n: Dim, pairs: &[(Vertex, Vertex); 3], e: Edge) -> Attempt<Vec<Vec<Vertex>>> {
        let mut last = Failure::Rejected("no covered configuration".into());
        let mut tries = 0usize;
        for roles in role_assignments(pairs, e) {
            let [(u, _), (x, _), _] = roles;
            for j in (1..=n.get()).filter(|&j| u.coord(j) != x.coord(j) && j != e.dim()) {
                let mut sc = SplitContext::new(n, j).map_err(|err| Failure::Broken(err.to_string()))?;
                if sc.side(u) == Side::One {
                    sc = sc.swapped();
                }
                if sc.side(e.lo()) != Side::Zero {
                    continue;
                }
                match self.one_edge_split(&sc, roles, pairs, e, &mut tries) {
                    Ok(p) => return Ok(p),
                    Err(f) => last = f,
                }
                if tries >= MAX_TRIES {
                    return Err(last);
                }
            }
        }
        Err(last)
    }

    fn one_edge_split(
        &mut self,
        sc: &SplitContext,
        [(u, v), (x, y), (w, z)]: Roles,
        pairs: &[(Vertex, Vertex); 3],
        e: Edge,
        tries: &mut usize,
    ) -> Attempt<Vec<Vec<Vertex>>> {
        let n = sc.n();
        let half0 = |a: Vertex| sc.side(a) == Side::Zero;
        let terminals = [u, v, x, y, w, z];
        let prescribed = [e];
        let bridge = |structure: Vec<Vec<Vertex>>, insert: Vec<Edge>| Bridge {
            sc: *sc,
            structure,
            cyclic: false,
            pairs,
            prescribed: &prescribed,
            insert,
            forced: vec![],
            max_detours: 0,
        };
        // vertices of half 0 adjacent to `a`, off every terminal
        let free_nbrs = |a: Vertex, extra: &[Vertex]| -> Vec<Vertex> {
            a.neighbors(n).filter(|&s| half0(s) && !terminals.contains(&s) && !extra.contains(&s)).collect()
        };
        let mut last = Failure::Rejected("configuration not covered".into());
        if half0(v) && half0(w) && half0(z) {
            self.case(n, sc.j(), format!("one-edge A y={}", super::two_edges::side_tag(sc, y)));
            let s = self.provide_half(sc, Side::Zero, Request::k_path(n, vec![(u, v), (w, z)], vec![e]))?;
            if !half0(y) {
                *tries += 1;
                return self.bridge(&bridge(s, vec![]));
            }
            for s0 in free_nbrs(y, &[]) {
                if *tries >= MAX_TRIES {
                    break;
                }
                *tries += 1;
                match self.bridge(&bridge(s.clone(), vec![Edge::of(y, s0)])) {
                    Ok(p) => return Ok(p),
                    Err(f) => last = f,
                }
            }
            return Err(last);
        }
        if !half0(v) && !half0(z) && half0(y) {
            self.case(n, sc.j(), format!("one-edge B w={}", super::two_edges::side_tag(sc, w)));
            for s0 in free_nbrs(u, &[]) {
                for r0 in free_nbrs(y, &[s0]) {
                    if *tries >= MAX_TRIES {
                        return Err(last);
                    }
                    let req = Request::k_path(n, vec![(u, s0), (y, r0)], vec![e]);
                    let s = match self.provide_half(sc, Side::Zero, req) {
                        Ok(s) => s,
                        Err(f) => {
                            last = f;
                            continue;
                        }
                    };
                    let inserts: Vec<Vec<Edge>> = if half0(w) {
                        free_nbrs(w, &[s0, r0]).into_iter().map(|t0| vec![Edge::of(w, t0)]).collect()
                    } else {
                        vec![vec![]]
                    };
                    for ins in inserts {
                        if *tries >= MAX_TRIES {
                            return Err(last);
                        }
                        *tries += 1;
                        match self.bridge(&bridge(s.clone(), ins)) {
                            Ok(p) => return Ok(p),
                            Err(f) => last = f,
                        }
                    }
                }
            }
            return Err(last);
        }
        self.case(n, sc.j(), "one-edge split");
        for variant in 0..2 {
            if *tries >= MAX_TRIES {
                break;
            }
            *tries += 1;
            match self.split_generic(sc, pairs, &prescribed, variant) {
                Ok(p) => return Ok(p),
                Err(f) => last = f,
            }
        }
        Err(last)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::EngineConfig;

    fn v(s: &str) -> Vertex {
        Vertex::parse_bits(s).unwrap().0
    }

    fn pairs6() -> [(Vertex, Vertex); 3] {
        [(v("000000"), v("110100")), (v("011000"), v("111110")), (v("101000"), v("001011"))]
    }

    #[test]
    fn builds_and_verifies() {
        let n = Dim::new(6).unwrap();
        let p = pairs6();
        let e = Edge::of(v("000000"), v("000001"));
        check(n, &p, e).unwrap();
        let out = crate::engine::spanning3_one_edge(
            n,
            p[0].0,
            p[0].1,
            p[1].0,
            p[1].1,
            p[2].0,
            p[2].1,
            e,
            &EngineConfig::default(),
        )
        .unwrap();
        crate::verify::verify(n, &out.paths, &p, &[e], &[]).unwrap();
    }

    #[test]
    fn edge_pair_is_the_edge() {
        let n = Dim::new(6).unwrap();
        let p = [(v("000000"), v("000001")), (v("011000"), v("111110")), (v("101000"), v("001011"))];
        let e = Edge::of(p[0].0, p[0].1);
        let out = crate::engine::spanning3_one_edge(
            n,
            p[0].0,
            p[0].1,
            p[1].0,
            p[1].1,
            p[2].0,
            p[2].1,
            e,
            &EngineConfig::default(),
        )
        .unwrap();
        assert_eq!(out.paths[0], vec![p[0].0, p[0].1]);
    }

    #[test]
    fn roles_share_parity() {
        let p = pairs6();
        let e = Edge::of(v("000000"), v("000001"));
        let all = role_assignments(&p, e);
        assert_eq!(all.len(), 4);
        for r in all {
            assert_eq!(r[0].0.parity(), r[1].0.parity());
            assert_eq!(r[0].0.parity(), r[2].0.parity());
        }
    }

    #[test]
    fn rejects_edge_on_second_pair() {
        let n = Dim::new(6).unwrap();
        let p = pairs6();
        assert!(check(n, &p, Edge::of(v("011000"), v("011001"))).is_err());
    }
}
