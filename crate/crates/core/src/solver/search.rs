use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Budget, Kind, Outcome, SearchProblem, Solution};
use crate::cube::Vertex;

const NONE: u32 = u32::MAX;
const LUBY_UNIT: u64 = 512;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub nodes: u64,
    pub runs: u64,
}

#[derive(Clone, Copy)]
enum Op {
    Removed { v: u32, d: u8 },
    Added { u: u32, v: u32, d: u8, a: u32, b: u32, old_a: u32, old_b: u32, closed: bool },
}

struct Frame {
    mark: usize,
    u: u32,
    d: u8,
    tried_remove: bool,
}

enum RunEnd {
    Found,
    Exhausted,
    Limit,
}

struct State {
    n: u32,
    cycle: bool,
    k: u32,
    need: Vec<u8>,
    deg: Vec<u8>,
    avail: Vec<u64>,
    chosen: Vec<u64>,
    end_other: Vec<u32>,
    pair_of: Vec<u32>,
    pairs: Vec<(u32, u32)>,
    active: Vec<u32>,
    closed: u32,
    chosen_count: u32,
    total: u32,
    trail: Vec<Op>,
    queue: Vec<u32>,
    // scratch for the component check
    comp: Vec<u32>,
    seen: Vec<u32>,
    stamp: u32,
    stack: Vec<u32>,
    comp_bal: Vec<i32>,
    comp_expect: Vec<i32>,
    comp_terms: Vec<u32>,
    tie_mask: u32,
}

impl State {
    fn new(p: &SearchProblem) -> Option<State> {
        let n = p.n.get();
        let size = 1usize << n;
        let mut need = vec![2u8; size];
        for &f in &p.forbidden {
            need[f.bits() as usize] = 0;
        }
        let mut pair_of = vec![NONE; size];
        let mut pairs = Vec::new();
        let mut closed = 0;
        for (i, &(a, b)) in p.terminals.iter().enumerate() {
            let (a, b) = (a.bits() as u32, b.bits() as u32);
            pairs.push((a, b));
            if a == b {
                need[a as usize] = 0;
                closed += 1;
            } else {
                need[a as usize] = 1;
                need[b as usize] = 1;
                pair_of[a as usize] = i as u32;
                pair_of[b as usize] = i as u32;
            }
        }
        let active: Vec<u32> = (0..size as u32).filter(|&v| need[v as usize] > 0).collect();
        let mut avail = vec![0u64; size];
        for &v in &active {
            let mut m = 0u64;
            for d in 0..n {
                if need[(v ^ (1 << d)) as usize] > 0 {
                    m |= 1 << d;
                }
            }
            avail[v as usize] = m;
        }
        let need_sum: u32 = need.iter().map(|&x| x as u32).sum();
        let mut st = State {
            n,
            cycle: p.kind == Kind::HamCycle,
            k: pairs.len() as u32,
            need,
            deg: vec![0; size],
            avail,
            chosen: vec![0; size],
            end_other: (0..size as u32).collect(),
            pair_of,
            pairs,
            active,
            closed,
            chosen_count: 0,
            total: need_sum / 2,
            trail: Vec::new(),
            queue: Vec::new(),
            comp: vec![0; size],
            seen: vec![0; size],
            stamp: 0,
            stack: Vec::new(),
            comp_bal: Vec::new(),
            comp_expect: Vec::new(),
            comp_terms: Vec::new(),
            tie_mask: 0,
        };
        if st.active.is_empty() {
            // every vertex is forbidden or a one-vertex path
            return if st.cycle { None } else { Some(st) };
        }
        for e in &p.prescribed {
            let (u, v) = (e.lo().bits() as u32, e.hi().bits() as u32);
            let d = (e.dim() - 1) as u8;
            if st.chosen[u as usize] >> d & 1 == 1 {
                continue;
            }
            if st.avail[u as usize] >> d & 1 == 0 || !st.add(u, v, d) {
                return None;
            }
        }
        st.queue.extend(st.active.iter().copied());
        if !st.propagate() {
            return None;
        }
        Some(st)
    }

    fn slack(&self, v: u32) -> i32 {
        let v = v as usize;
        self.deg[v] as i32 + self.avail[v].count_ones() as i32 - self.need[v] as i32
    }

    fn legal(&self, u: u32, v: u32) -> bool {
        let (ui, vi) = (u as usize, v as usize);
        if self.deg[ui] >= self.need[ui] || self.deg[vi] >= self.need[vi] {
            return false;
        }
        let a = self.end_other[ui];
        let b = self.end_other[vi];
        if a == v {
            return self.cycle && self.chosen_count + 1 == self.total;
        }
        let pa = self.pair_of[a as usize];
        let pb = self.pair_of[b as usize];
        if pa != NONE && pb != NONE {
            if pa != pb {
                return false;
            }
            return self.closed + 1 < self.k || self.chosen_count + 1 == self.total;
        }
        true
    }

    fn remove(&mut self, v: u32, d: u8) {
        let w = v ^ (1 << d);
        self.avail[v as usize] &= !(1 << d);
        self.avail[w as usize] &= !(1 << d);
        self.trail.push(Op::Removed { v, d });
        self.queue.push(v);
        self.queue.push(w);
    }

    /// Adds edge `u`–`v` of dimension `d`; false if illegal.
    fn add(&mut self, u: u32, v: u32, d: u8) -> bool {
        if !self.legal(u, v) {
            return false;
        }
        let (ui, vi) = (u as usize, v as usize);
        let a = self.end_other[ui];
        let b = self.end_other[vi];
        let old_a = self.end_other[a as usize];
        let old_b = self.end_other[b as usize];
        self.avail[ui] &= !(1 << d);
        self.avail[vi] &= !(1 << d);
        self.chosen[ui] |= 1 << d;
        self.chosen[vi] |= 1 << d;
        self.deg[ui] += 1;
        self.deg[vi] += 1;
        self.chosen_count += 1;
        let closed = a != v && {
            let pa = self.pair_of[a as usize];
            pa != NONE && pa == self.pair_of[b as usize]
        };
        if closed {
            self.closed += 1;
        }
        if a != v {
            self.end_other[a as usize] = b;
            self.end_other[b as usize] = a;
        }
        self.trail.push(Op::Added { u, v, d, a, b, old_a, old_b, closed });
        self.queue.push(u);
        self.queue.push(v);
        if a != v {
            self.prune_at(a);
            self.prune_at(b);
        }
        true
    }

    /// Drops available edges at a fragment end that could never be added:
    /// those closing a cycle in path mode and those joining terminals of
    /// different pairs.
    fn prune_at(&mut self, a: u32) {
        let ai = a as usize;
        if self.deg[ai] >= self.need[ai] {
            return;
        }
        let ea = self.end_other[ai];
        let pa = self.pair_of[ea as usize];
        let mut m = self.avail[ai];
        while m != 0 {
            let d = m.trailing_zeros() as u8;
            m &= m - 1;
            let c = a ^ (1 << d);
            let dead = if ea == c {
                !self.cycle
            } else {
                let pc = self.pair_of[self.end_other[c as usize] as usize];
                pa != NONE && pc != NONE && pa != pc
            };
            if dead {
                self.remove(a, d);
            }
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                Op::Removed { v, d } => {
                    let w = v ^ (1 << d);
                    self.avail[v as usize] |= 1 << d;
                    self.avail[w as usize] |= 1 << d;
                }
                Op::Added { u, v, d, a, b, old_a, old_b, closed } => {
                    let (ui, vi) = (u as usize, v as usize);
                    self.avail[ui] |= 1 << d;
                    self.avail[vi] |= 1 << d;
                    self.chosen[ui] &= !(1 << d);
                    self.chosen[vi] &= !(1 << d);
                    self.deg[ui] -= 1;
                    self.deg[vi] -= 1;
                    self.chosen_count -= 1;
                    if closed {
                        self.closed -= 1;
                    }
                    if a != v {
                        self.end_other[b as usize] = old_b;
                        self.end_other[a as usize] = old_a;
                    }
                }
            }
        }
        self.queue.clear();
    }

    fn propagate(&mut self) -> bool {
        while let Some(w) = self.queue.pop() {
            let wi = w as usize;
            let need = self.need[wi];
            if need == 0 {
                continue;
            }
            let deg = self.deg[wi];
            let av = self.avail[wi];
            let cnt = av.count_ones() as u8;
            if deg == need {
                let mut m = av;
                while m != 0 {
                    let d = m.trailing_zeros() as u8;
                    m &= m - 1;
                    self.remove(w, d);
                }
            } else if deg + cnt < need {
                self.queue.clear();
                return false;
            } else if deg + cnt == need {
                let mut m = av;
                while m != 0 {
                    let d = m.trailing_zeros() as u8;
                    m &= m - 1;
                    if self.avail[wi] >> d & 1 == 0 {
                        continue;
                    }
                    if !self.add(w, w ^ (1 << d), d) {
                        self.queue.clear();
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Every component of the residual graph must be coverable: it holds both
    /// ends of each pair touching it, has a terminal (paths) and the parity
    /// surplus its pairs allow. A cycle needs one balanced component.
    fn components_ok(&mut self) -> bool {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.seen.iter_mut().for_each(|c| *c = 0);
            self.stamp = 1;
        }
        let stamp = self.stamp;
        self.comp_bal.clear();
        self.comp_terms.clear();
        let mut ids: u32 = 0;
        for idx in 0..self.active.len() {
            let s = self.active[idx];
            if self.seen[s as usize] == stamp {
                continue;
            }
            let id = ids;
            ids += 1;
            let mut bal = 0i32;
            let mut terms = 0u32;
            self.stack.clear();
            self.stack.push(s);
            self.seen[s as usize] = stamp;
            self.comp[s as usize] = id;
            while let Some(v) = self.stack.pop() {
                let vi = v as usize;
                bal += if v.count_ones() & 1 == 0 { 1 } else { -1 };
                if self.pair_of[vi] != NONE {
                    terms += 1;
                }
                let mut m = self.avail[vi] | self.chosen[vi];
                while m != 0 {
                    let d = m.trailing_zeros();
                    m &= m - 1;
                    let w = (v ^ (1 << d)) as usize;
                    if self.seen[w] != stamp {
                        self.seen[w] = stamp;
                        self.comp[w] = id;
                        self.stack.push(w as u32);
                    }
                }
            }
            self.comp_bal.push(bal);
            self.comp_terms.push(terms);
        }
        if self.cycle {
            return ids == 1 && self.comp_bal[0] == 0;
        }
        self.comp_expect.clear();
        self.comp_expect.resize(ids as usize, 0);
        for i in 0..self.pairs.len() {
            let (a, b) = self.pairs[i];
            if a == b {
                continue;
            }
            let ca = self.comp[a as usize];
            if ca != self.comp[b as usize] {
                return false;
            }
            let pa = a.count_ones() & 1;
            let pb = b.count_ones() & 1;
            let delta = if pa != pb {
                0
            } else if pa == 0 {
                1
            } else {
                -1
            };
            self.comp_expect[ca as usize] += delta;
        }
        (0..ids as usize).all(|c| self.comp_terms[c] > 0 && self.comp_bal[c] == self.comp_expect[c])
    }

    /// The unsaturated vertex with the fewest spare options, and the edge to
    /// its neighbor with the fewest spare options.
    fn pick_branch(&self) -> Option<(u32, u8)> {
        let mut best: Option<(i32, u32, u32, u32)> = None;
        for &v in &self.active {
            let vi = v as usize;
            if self.deg[vi] >= self.need[vi] {
                continue;
            }
            let key = (self.slack(v), self.avail[vi].count_ones(), v ^ self.tie_mask, v);
            if best.is_none_or(|b| (key.0, key.1, key.2) < (b.0, b.1, b.2)) {
                best = Some(key);
            }
        }
        let (_, _, _, u) = best?;
        let mut m = self.avail[u as usize];
        let mut pick: Option<(i32, u32, u8)> = None;
        while m != 0 {
            let d = m.trailing_zeros() as u8;
            m &= m - 1;
            let c = u ^ (1 << d);
            let key = (self.slack(c), c ^ self.tie_mask, d);
            if pick.is_none_or(|p| (key.0, key.1) < (p.0, p.1)) {
                pick = Some(key);
            }
        }
        pick.map(|(_, _, d)| (u, d))
    }

    fn solution(&self) -> Solution {
        if self.cycle {
            let start = self.active[0];
            let mut seq = vec![Vertex(start as u64)];
            let (mut prev, mut cur) = (start, start ^ (1 << self.chosen[start as usize].trailing_zeros()));
            while cur != start {
                seq.push(Vertex(cur as u64));
                let m = self.chosen[cur as usize];
                let mut next = NONE;
                let mut mm = m;
                while mm != 0 {
                    let d = mm.trailing_zeros();
                    mm &= mm - 1;
                    if cur ^ (1 << d) != prev {
                        next = cur ^ (1 << d);
                    }
                }
                prev = cur;
                cur = next;
            }
            return Solution::Cycle(seq);
        }
        let mut paths = Vec::with_capacity(self.pairs.len());
        for &(a, b) in &self.pairs {
            let mut seq = vec![Vertex(a as u64)];
            if a != b {
                let (mut prev, mut cur) = (a, a ^ (1 << self.chosen[a as usize].trailing_zeros()));
                loop {
                    seq.push(Vertex(cur as u64));
                    if cur == b {
                        break;
                    }
                    let mut mm = self.chosen[cur as usize];
                    let mut next = NONE;
                    while mm != 0 {
                        let d = mm.trailing_zeros();
                        mm &= mm - 1;
                        if cur ^ (1 << d) != prev {
                            next = cur ^ (1 << d);
                        }
                    }
                    prev = cur;
                    cur = next;
                }
            }
            paths.push(seq);
        }
        Solution::Paths(paths)
    }
}

struct Limits {
    nodes_left: u64,
    deadline: Option<Instant>,
}

/// Depth-first search from the current state. `on_solution` returns true to
/// stop at this solution, false to keep enumerating.
fn dfs(
    st: &mut State,
    run_limit: u64,
    limits: &mut Limits,
    stats: &mut SolveStats,
    on_solution: &mut dyn FnMut(&State) -> bool,
) -> RunEnd {
    let root_mark = st.trail.len();
    let mut stack: Vec<Frame> = Vec::new();
    let mut run_nodes = 0u64;
    let mut ok = st.components_ok();
    loop {
        if ok {
            if st.chosen_count == st.total {
                if on_solution(st) {
                    return RunEnd::Found;
                }
                ok = false;
                continue;
            }
            if run_nodes >= run_limit || limits.nodes_left == 0 {
                st.undo_to(root_mark);
                return RunEnd::Limit;
            }
            run_nodes += 1;
            limits.nodes_left -= 1;
            stats.nodes += 1;
            if stats.nodes.is_multiple_of(1024) {
                if let Some(dl) = limits.deadline {
                    if Instant::now() >= dl {
                        limits.nodes_left = 0;
                        st.undo_to(root_mark);
                        return RunEnd::Limit;
                    }
                }
            }
            let Some((u, d)) = st.pick_branch() else {
                ok = false;
                continue;
            };
            stack.push(Frame { mark: st.trail.len(), u, d, tried_remove: false });
            let v = u ^ (1 << d);
            ok = st.add(u, v, d) && st.propagate() && st.components_ok();
        } else {
            // backtrack to the most recent frame with an untried branch
            loop {
                let Some(frame) = stack.last_mut() else {
                    st.undo_to(root_mark);
                    return RunEnd::Exhausted;
                };
                st.undo_to(frame.mark);
                if frame.tried_remove {
                    stack.pop();
                    continue;
                }
                frame.tried_remove = true;
                let (u, d) = (frame.u, frame.d);
                st.remove(u, d);
                ok = st.propagate() && st.components_ok();
                break;
            }
        }
    }
}

fn luby(i: u64) -> u64 {
    // 1 1 2 1 1 2 4 1 1 2 ...
    let mut i = i + 1;
    loop {
        let mut k = 1u32;
        while (1u64 << k) - 1 < i {
            k += 1;
        }
        if (1u64 << k) - 1 == i {
            return 1u64 << (k - 1);
        }
        i -= (1u64 << (k - 1)) - 1;
    }
}

pub(super) fn run(p: &SearchProblem, b: &Budget) -> (Outcome, SolveStats) {
    let mut stats = SolveStats::default();
    let Some(mut st) = State::new(p) else {
        return (Outcome::Unsat, stats);
    };
    let mut limits = Limits { nodes_left: b.node_limit, deadline: b.time_limit.map(|t| Instant::now() + t) };
    let mut rng = ChaCha8Rng::seed_from_u64(b.seed);
    let mut run_idx = 0u64;
    loop {
        let run_limit = if b.restarts { luby(run_idx) * LUBY_UNIT } else { u64::MAX };
        st.tie_mask = if run_idx == 0 { 0 } else { rng.gen::<u32>() & ((1 << st.n) - 1) };
        stats.runs += 1;
        let mut found = None;
        let end = dfs(&mut st, run_limit, &mut limits, &mut stats, &mut |s| {
            found = Some(s.solution());
            true
        });
        match end {
            RunEnd::Found => return (Outcome::Found(found.expect("solution recorded")), stats),
            RunEnd::Exhausted => return (Outcome::Unsat, stats),
            RunEnd::Limit => {
                if limits.nodes_left == 0 {
                    return (Outcome::BudgetExhausted, stats);
                }
                run_idx += 1;
            }
        }
    }
}

pub(super) fn count(p: &SearchProblem, cap: u64) -> u64 {
    let Some(mut st) = State::new(p) else {
        return 0;
    };
    let mut limits = Limits { nodes_left: u64::MAX, deadline: None };
    let mut stats = SolveStats::default();
    let mut found = 0u64;
    dfs(&mut st, u64::MAX, &mut limits, &mut stats, &mut |_| {
        found += 1;
        found >= cap
    });
    found
}

#[cfg(test)]
mod tests {
    use super::luby;

    #[test]
    fn luby_prefix() {
        let seq: Vec<u64> = (0..15).map(luby).collect();
        assert_eq!(seq, vec![1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }
}
