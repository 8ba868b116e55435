//! Bridging a structure in one half to a sub-request in the other half.
//!
//! The structure is a set of disjoint paths (or one cycle) spanning half 0.
//! A plan edits it: edges to insert, and structure edges to remove so that
//! every vertex keeps the degree it needs once prescribed cross edges are
//! counted. Every vertex left one edge short takes its cross edge; the
//! partners, plus final terminals lying in half 1, become the terminals of a
//! spanning k-path request in half 1. The pairing of those terminals is
//! enumerated so that the whole result is exactly the requested set of
//! paths, and the first pairing some statement covers is solved.

use std::collections::{HashMap, HashSet};

use crate::cube::{Edge, Side, SplitContext, Vertex};

use super::assemble::{assemble_paths, Assembly};
use super::provider::{classify, lift_paths, Request};
use super::{Attempt, Engine, Failure};

/// Cap on pairings examined per bridging call.
const PAIRING_CAP: usize = 20_000;
/// Candidate detour edges considered for one and for two detours.
const DETOUR_CANDIDATES: [usize; 3] = [0, 12, 8];

pub(crate) struct Bridge<'a> {
    pub sc: SplitContext,
    /// Paths spanning half 0, in full-cube coordinates.
    pub structure: Vec<Vec<Vertex>>,
    /// `structure[0]` is a cycle.
    pub cyclic: bool,
    /// The paths the result must consist of.
    pub pairs: &'a [(Vertex, Vertex)],
    /// Edges the result must contain.
    pub prescribed: &'a [Edge],
    /// Half-0 edges added to the structure.
    pub insert: Vec<Edge>,
    /// Structure edges removed in every plan.
    pub forced: Vec<Edge>,
    /// Extra structure edges that may be removed to reach half 1.
    pub max_detours: usize,
}

struct Layout {
    pos: HashMap<Vertex, (usize, usize)>,
    paths: Vec<Vec<Vertex>>,
    cyclic: bool,
}

impl Layout {
    fn neighbors(&self, v: Vertex) -> [Option<Vertex>; 2] {
        let Some(&(p, i)) = self.pos.get(&v) else { return [None, None] };
        let path = &self.paths[p];
        let len = path.len();
        let wrap = self.cyclic && p == 0 && len >= 3;
        let prev = if i > 0 {
            Some(path[i - 1])
        } else if wrap {
            Some(path[len - 1])
        } else {
            None
        };
        let next = if i + 1 < len {
            Some(path[i + 1])
        } else if wrap {
            Some(path[0])
        } else {
            None
        };
        [prev, next]
    }

    fn has_edge(&self, e: Edge) -> bool {
        self.neighbors(e.lo()).contains(&Some(e.hi()))
    }

    fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.paths.iter().enumerate().flat_map(move |(p, path)| {
            let closing = (self.cyclic && p == 0 && path.len() >= 3).then(|| Edge::of(path[path.len() - 1], path[0]));
            path.windows(2).map(|w| Edge::of(w[0], w[1])).chain(closing)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum End {
    Slot(usize),
    Final(Vertex),
}

/// A plan with its derived half-1 terminals.
struct Evaluated {
    removed: Vec<Edge>,
    crosses: Vec<Edge>,
    slots: Vec<Vertex>,
    degenerate: Vec<Vertex>,
    other: Vec<End>,
}

impl<'a> Bridge<'a> {
    fn is_final(&self, v: Vertex) -> bool {
        self.pairs.iter().any(|&(a, b)| a == v || b == v)
    }

    fn is_pair(&self, a: Vertex, b: Vertex) -> bool {
        self.pairs.iter().any(|&(s, t)| (s == a && t == b) || (s == b && t == a))
    }

    fn required(&self, v: Vertex) -> i32 {
        if self.is_final(v) {
            1
        } else {
            2
        }
    }
}

struct Ctx<'b, 'a> {
    br: &'b Bridge<'a>,
    lay: Layout,
    half0: usize,
    protected: HashSet<Edge>,
    cross0: HashSet<Vertex>,
    mc: Vec<Edge>,
    m1: Vec<Edge>,
    m1_cover: HashSet<Vertex>,
    finals0: Vec<Vertex>,
    finals1: Vec<Vertex>,
}

impl<'b, 'a> Ctx<'b, 'a> {
    fn new(br: &'b Bridge<'a>) -> Result<Self, Failure> {
        let sc = &br.sc;
        let mut pos = HashMap::new();
        for (p, path) in br.structure.iter().enumerate() {
            for (i, &v) in path.iter().enumerate() {
                if sc.side(v) != Side::Zero || pos.insert(v, (p, i)).is_some() {
                    return Err(Failure::Broken("structure is not a spanning path system of half 0".into()));
                }
            }
        }
        let half0 = (sc.n().order() / 2) as usize;
        if pos.len() != half0 {
            return Err(Failure::Broken(format!("structure covers {} of {half0} vertices", pos.len())));
        }
        let lay = Layout { pos, paths: br.structure.clone(), cyclic: br.cyclic };
        let (m0, m1, mc) = sc.classify_edges(br.prescribed.iter());
        let mut protected: HashSet<Edge> = m0.iter().copied().collect();
        protected.extend(br.insert.iter().copied());
        let cross0 = mc.iter().map(|e| if sc.side(e.lo()) == Side::Zero { e.lo() } else { e.hi() }).collect();
        let m1_cover = m1.iter().flat_map(|e| [e.lo(), e.hi()]).collect();
        let mut finals0 = Vec::new();
        let mut finals1 = Vec::new();
        for &(a, b) in br.pairs {
            for v in [a, b] {
                if sc.side(v) == Side::Zero {
                    finals0.push(v)
                } else {
                    finals1.push(v)
                }
            }
        }
        Ok(Ctx { br, lay, half0, protected, cross0, mc, m1, m1_cover, finals0, finals1 })
    }

    fn removable(&self, e: Edge, removed: &[Edge]) -> bool {
        !self.protected.contains(&e) && !removed.contains(&e) && self.lay.has_edge(e)
    }

    /// Neighbors of `v` after removing `removed` and adding the inserts.
    fn nbrs(&self, v: Vertex, removed: &[Edge]) -> Vec<Vertex> {
        let mut out: Vec<Vertex> =
            self.lay.neighbors(v).into_iter().flatten().filter(|&w| !removed.contains(&Edge::of(v, w))).collect();
        for e in &self.br.insert {
            if let Some(w) = e.other(v) {
                if !self.lay.has_edge(*e) {
                    out.push(w);
                }
            }
        }
        out
    }

    fn cross(&self, v: Vertex) -> i32 {
        i32::from(self.cross0.contains(&v))
    }

    /// Degree surplus of `v` once removals, inserts and crosses are counted.
    fn excess(&self, v: Vertex, removed: &[Edge]) -> i32 {
        self.nbrs(v, removed).len() as i32 + self.cross(v) - self.br.required(v)
    }

    fn touched(&self, removed: &[Edge]) -> Vec<Vertex> {
        let mut t: Vec<Vertex> = Vec::new();
        for p in &self.lay.paths {
            if !(self.lay.cyclic && self.lay.paths.len() == 1) {
                t.push(p[0]);
                t.push(p[p.len() - 1]);
            }
        }
        t.extend(self.finals0.iter().copied());
        t.extend(self.cross0.iter().copied());
        for e in self.br.insert.iter().chain(removed) {
            t.push(e.lo());
            t.push(e.hi());
        }
        t.sort();
        t.dedup();
        t
    }

    /// Removal sets at vertices with surplus degree, each extending `base`.
    fn site_plans(&self, base: Vec<Edge>) -> Vec<Vec<Edge>> {
        let mut out = Vec::new();
        self.site_rec(base, &mut out);
        out
    }

    fn site_rec(&self, removed: Vec<Edge>, out: &mut Vec<Vec<Edge>>) {
        if out.len() >= 256 {
            return;
        }
        let site = self.touched(&removed).into_iter().find(|&v| self.excess(v, &removed) > 0);
        let Some(v) = site else {
            out.push(removed);
            return;
        };
        let options: Vec<Edge> = self
            .lay
            .neighbors(v)
            .into_iter()
            .flatten()
            .map(|w| Edge::of(v, w))
            .filter(|&e| self.removable(e, &removed))
            .collect();
        for e in options {
            let mut next = removed.clone();
            next.push(e);
            self.site_rec(next, out);
        }
    }

    fn detour_candidates(&self, removed: &[Edge], limit: usize) -> Vec<Edge> {
        let touched: HashSet<Vertex> = self.touched(removed).into_iter().collect();
        let busy1: HashSet<Vertex> = self
            .finals1
            .iter()
            .copied()
            .chain(self.mc.iter().map(|e| if self.br.sc.side(e.lo()) == Side::One { e.lo() } else { e.hi() }))
            .collect();
        let mut scored: Vec<(u8, Edge)> = Vec::new();
        for e in self.lay.edges() {
            if !self.removable(e, removed) || touched.contains(&e.lo()) || touched.contains(&e.hi()) {
                continue;
            }
            let (a1, b1) = (self.br.sc.partner(e.lo()), self.br.sc.partner(e.hi()));
            if busy1.contains(&a1) || busy1.contains(&b1) {
                continue;
            }
            let mut score = u8::from(self.m1_cover.contains(&a1)) + u8::from(self.m1_cover.contains(&b1));
            if self.m1.contains(&Edge::of(a1, b1)) {
                score += 2;
            }
            scored.push((score, e));
        }
        scored.sort_by_key(|&(s, _)| s);
        scored.into_iter().take(limit).map(|(_, e)| e).collect()
    }

    /// Derives half-1 terminals and the partial path ends for a removal set.
    fn evaluate(&self, removed: &[Edge]) -> Option<Evaluated> {
        let sc = &self.br.sc;
        let touched = self.touched(removed);
        let mut open = Vec::new();
        for &v in &touched {
            let deficit = -self.excess(v, removed);
            match deficit {
                0 => {}
                1 if !self.cross0.contains(&v) => open.push(v),
                _ => return None,
            }
        }
        let crossed: HashSet<Vertex> = open.iter().copied().chain(self.cross0.iter().copied()).collect();
        // segment ends in half 0
        let mut seg_other: HashMap<Vertex, Vertex> = HashMap::new();
        let mut visited = 0usize;
        for &s in &touched {
            if seg_other.contains_key(&s) || self.nbrs(s, removed).len() > 1 {
                continue;
            }
            let (mut prev, mut cur, mut count) = (None, s, 1usize);
            loop {
                let next = self.nbrs(cur, removed).into_iter().find(|&w| Some(w) != prev);
                match next {
                    Some(w) => {
                        prev = Some(cur);
                        cur = w;
                        count += 1;
                        if count > self.half0 {
                            return None;
                        }
                    }
                    None => break,
                }
            }
            seg_other.insert(s, cur);
            seg_other.insert(cur, s);
            visited += count;
        }
        if visited != self.half0 {
            return None;
        }
        for (&a, &b) in &seg_other {
            if !crossed.contains(&a) && !crossed.contains(&b) && a != b && !self.br.is_pair(a, b) {
                return None;
            }
        }
        // half-1 terminals
        let mut slots = Vec::new();
        let mut degenerate = Vec::new();
        let mut crosses = Vec::new();
        for &v in crossed.iter().collect::<std::collections::BTreeSet<_>>() {
            let v1 = sc.partner(v);
            crosses.push(Edge::of(v, v1));
            if self.br.is_final(v1) {
                degenerate.push(v1);
            } else {
                slots.push(v1);
            }
        }
        for &t in &self.finals1 {
            if !crossed.contains(&sc.partner(t)) {
                slots.push(t);
            }
        }
        slots.sort();
        let index: HashMap<Vertex, usize> = slots.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let follow = |t0: Vertex| -> Option<End> {
            let e = *seg_other.get(&t0)?;
            if e == t0 {
                return self.br.is_final(e).then_some(End::Final(e));
            }
            if crossed.contains(&e) {
                let e1 = sc.partner(e);
                return Some(if self.br.is_final(e1) { End::Final(e1) } else { End::Slot(index[&e1]) });
            }
            self.br.is_final(e).then_some(End::Final(e))
        };
        let mut other = Vec::with_capacity(slots.len());
        for &t in &slots {
            let t0 = sc.partner(t);
            if crossed.contains(&t0) {
                other.push(follow(t0)?);
            } else {
                other.push(End::Final(t));
            }
        }
        for &d in &degenerate {
            match follow(sc.partner(d))? {
                End::Final(f) if self.br.is_pair(d, f) => {}
                End::Final(_) => return None,
                End::Slot(_) => {}
            }
        }
        Some(Evaluated { removed: removed.to_vec(), crosses, slots, degenerate, other })
    }
}

type PairingVisitor<'a> = dyn FnMut(&[(usize, usize)]) -> bool + 'a;

/// Enumerates pairings of `slots` under which the partial paths close into
/// exactly the final pairs. `visit` returns true to stop.
fn pairings(br: &Bridge<'_>, ev: &Evaluated, budget: &mut usize, visit: &mut PairingVisitor<'_>) -> bool {
    let n = ev.slots.len();
    if n % 2 == 1 {
        return false;
    }
    let mut other = ev.other.clone();
    let mut used = vec![false; n];
    let mut chosen = Vec::with_capacity(n / 2);
    rec(br, &mut other, &mut used, &mut chosen, budget, visit)
}

fn rec(
    br: &Bridge<'_>,
    other: &mut Vec<End>,
    used: &mut Vec<bool>,
    chosen: &mut Vec<(usize, usize)>,
    budget: &mut usize,
    visit: &mut PairingVisitor<'_>,
) -> bool {
    let Some(s) = used.iter().position(|&u| !u) else {
        return visit(chosen);
    };
    used[s] = true;
    for t in s + 1..used.len() {
        if used[t] {
            continue;
        }
        if *budget == 0 {
            used[s] = false;
            return true;
        }
        *budget -= 1;
        let (a, b) = (other[s], other[t]);
        if a == End::Slot(t) {
            continue;
        }
        if let (End::Final(x), End::Final(y)) = (a, b) {
            if !br.is_pair(x, y) {
                continue;
            }
        }
        let saved: Vec<(usize, End)> =
            [a, b].iter().filter_map(|e| if let End::Slot(i) = e { Some((*i, other[*i])) } else { None }).collect();
        if let End::Slot(i) = a {
            other[i] = b;
        }
        if let End::Slot(i) = b {
            other[i] = a;
        }
        used[t] = true;
        chosen.push((s, t));
        let stop = rec(br, other, used, chosen, budget, visit);
        chosen.pop();
        used[t] = false;
        for (i, e) in saved {
            other[i] = e;
        }
        if stop {
            used[s] = false;
            return true;
        }
    }
    used[s] = false;
    false
}

fn pairing_valid(br: &Bridge<'_>, ev: &Evaluated, pairs: &[(usize, usize)]) -> bool {
    let mut other = ev.other.clone();
    for &(s, t) in pairs {
        let (a, b) = (other[s], other[t]);
        if a == End::Slot(t) {
            return false;
        }
        if let (End::Final(x), End::Final(y)) = (a, b) {
            if !br.is_pair(x, y) {
                return false;
            }
        }
        if let End::Slot(i) = a {
            other[i] = b;
        }
        if let End::Slot(i) = b {
            other[i] = a;
        }
    }
    true
}

/// A half-1 request ready to solve, with the edge to cut afterwards when two
/// pairs were merged into one path.
struct SubPlan {
    req: Request,
    cut: Option<Edge>,
}

impl Engine {
    pub(crate) fn bridge(&mut self, br: &Bridge<'_>) -> Attempt<Vec<Vec<Vertex>>> {
        let ctx = Ctx::new(br)?;
        let mut attempts = 0usize;
        let mut last = Failure::Rejected("no bridging plan found".into());
        let mut budget = PAIRING_CAP;
        if br.forced.iter().any(|&e| !ctx.lay.has_edge(e) || ctx.protected.contains(&e)) {
            return Err(Failure::Rejected("forced edge not removable".into()));
        }
        for (detours, &cand_cap) in DETOUR_CANDIDATES.iter().enumerate().take(br.max_detours.min(2) + 1) {
            for base in ctx.site_plans(br.forced.clone()) {
                let combos: Vec<Vec<Edge>> = match detours {
                    0 => vec![base.clone()],
                    _ => {
                        let cand = ctx.detour_candidates(&base, cand_cap);
                        let mut out = Vec::new();
                        if detours == 1 {
                            for &e in &cand {
                                out.push([base.clone(), vec![e]].concat());
                            }
                        } else {
                            for (i, &e) in cand.iter().enumerate() {
                                for &f in &cand[i + 1..] {
                                    if !e.touches(f) {
                                        out.push([base.clone(), vec![e, f]].concat());
                                    }
                                }
                            }
                        }
                        out
                    }
                };
                for removed in combos {
                    let Some(ev) = ctx.evaluate(&removed) else { continue };
                    let mut found: Option<SubPlan> = None;
                    pairings(br, &ev, &mut budget, &mut |chosen| {
                        found = self.sub_plan(br, &ctx, &ev, chosen);
                        found.is_some()
                    });
                    if let Some(plan) = found {
                        attempts += 1;
                        match self.solve_sub(br, &ctx, &ev, plan) {
                            Ok(paths) => return Ok(paths),
                            Err(f) => last = f,
                        }
                        if attempts >= self.cfg.plan_cap {
                            return Err(last);
                        }
                    }
                    if budget == 0 {
                        return Err(Failure::Rejected("pairing enumeration cap reached".into()));
                    }
                }
            }
        }
        Err(last)
    }

    /// Split-and-bridge for a configuration without a dedicated case: each
    /// pair inside half 0 stays, a pair with one end in half 0 runs from that
    /// end to a free neighbour which crosses over, and the bridge completes
    /// the rest in half 1. `variant` rotates the neighbour choices.
    pub(crate) fn split_generic(
        &mut self,
        sc: &SplitContext,
        pairs: &[(Vertex, Vertex)],
        prescribed: &[Edge],
        variant: usize,
    ) -> Attempt<Vec<Vec<Vertex>>> {
        let n = sc.n();
        let half0 = |v: Vertex| sc.side(v) == Side::Zero;
        let (e0, _, ec) = sc.classify_edges(prescribed.iter());
        if !ec.is_empty() {
            return Err(Failure::Rejected("prescribed cross edge".into()));
        }
        let mut taken: HashSet<Vertex> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        taken.extend(prescribed.iter().flat_map(|e| [e.lo(), e.hi()]));
        let mut sub = Vec::new();
        for &(a, b) in pairs {
            match (half0(a), half0(b)) {
                (true, true) => sub.push((a, b)),
                (false, false) => {}
                (a_in, _) => {
                    let (s, t) = if a_in { (a, b) } else { (b, a) };
                    let free: Vec<Vertex> =
                        s.neighbors(n).filter(|&r| half0(r) && !taken.contains(&r) && sc.partner(r) != t).collect();
                    if free.is_empty() {
                        return Err(Failure::Rejected("no free neighbour".into()));
                    }
                    let r = free[(variant + sub.len()) % free.len()];
                    taken.insert(r);
                    sub.push((s, r));
                }
            }
        }
        if sub.is_empty() {
            return Err(Failure::Rejected("nothing in half 0".into()));
        }
        let structure = self.provide_half(sc, Side::Zero, Request::k_path(n, sub, e0))?;
        self.bridge(&Bridge {
            sc: *sc,
            structure,
            cyclic: false,
            pairs,
            prescribed,
            insert: vec![],
            forced: vec![],
            max_detours: 1,
        })
    }

    fn sub_plan(
        &self,
        br: &Bridge<'_>,
        ctx: &Ctx<'_, '_>,
        ev: &Evaluated,
        chosen: &[(usize, usize)],
    ) -> Option<SubPlan> {
        let sc = &br.sc;
        let mut pairs: Vec<(Vertex, Vertex)> = chosen.iter().map(|&(s, t)| (ev.slots[s], ev.slots[t])).collect();
        pairs.extend(ev.degenerate.iter().map(|&d| (d, d)));
        let req = Request::k_path(sc.n(), pairs.clone(), ctx.m1.clone()).project(sc);
        if classify(&req).is_some() {
            return Some(SubPlan { req, cut: None });
        }
        if chosen.len() != 2 || !ev.degenerate.is_empty() {
            return None;
        }
        let (p, q) = (pairs[0], pairs[1]);
        for (a, b) in [p, (p.1, p.0)] {
            for (c, d) in [q, (q.1, q.0)] {
                if !b.is_adjacent(c) || ctx.m1.contains(&Edge::of(b, c)) {
                    continue;
                }
                let idx = |v: Vertex| ev.slots.iter().position(|&s| s == v);
                let alt = [(idx(a)?, idx(c)?), (idx(b)?, idx(d)?)];
                if !pairing_valid(br, ev, &alt) {
                    continue;
                }
                let mut pres = ctx.m1.clone();
                pres.push(Edge::of(b, c));
                let req = Request::path(sc.n(), a, d, pres).project(sc);
                if classify(&req).is_some() {
                    return Some(SubPlan { req, cut: Some(Edge::of(b, c)) });
                }
            }
        }
        None
    }

    fn solve_sub(
        &mut self,
        br: &Bridge<'_>,
        ctx: &Ctx<'_, '_>,
        ev: &Evaluated,
        plan: SubPlan,
    ) -> Attempt<Vec<Vec<Vertex>>> {
        let sc = &br.sc;
        let sub = self.provide(&plan.req)?;
        let lifted = lift_paths(sc, Side::One, sub);
        let mut a = Assembly::new();
        for (i, p) in br.structure.iter().enumerate() {
            if br.cyclic && i == 0 {
                a = a.cycle(p.clone());
            } else {
                a = a.fragment(p.clone());
            }
        }
        for p in lifted {
            a = a.fragment(p);
        }
        for &e in &br.insert {
            if !ctx.lay.has_edge(e) {
                a = a.add_edge(e);
            }
        }
        for &e in &ev.crosses {
            a = a.add_edge(e);
        }
        for &e in &ev.removed {
            a = a.remove_edge(e);
        }
        if let Some(e) = plan.cut {
            a = a.remove_edge(e);
        }
        let paths = assemble_paths(&a, br.pairs).map_err(|e| Failure::Broken(e.to_string()))?;
        crate::verify::verify(sc.n(), &paths, br.pairs, br.prescribed, &[])
            .map_err(|v| Failure::Broken(format!("bridged result unverified: {}", v[0])))?;
        Ok(paths)
    }
}
