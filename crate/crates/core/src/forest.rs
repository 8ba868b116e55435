//! Edge-set predicates, the problem instance, the classic unextendable forest,
//! and the split-dimension chooser.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::cube::{Dim, Edge, Vertex};

/// True iff no two edges share an endpoint.
pub fn is_matching(edges: &[Edge]) -> bool {
    let mut seen = HashSet::with_capacity(edges.len() * 2);
    edges.iter().all(|e| seen.insert(e.lo()) && seen.insert(e.hi()))
}

/// Path components of a linear forest as `(end, end, edge count)`, or `None`
/// when some vertex has degree above two or the edges close a cycle.
/// Duplicate edges count as a cycle.
pub fn forest_paths(edges: &[Edge]) -> Option<Vec<(Vertex, Vertex, usize)>> {
    let mut adj: HashMap<Vertex, Vec<Vertex>> = HashMap::new();
    for e in edges {
        let (a, b) = e.ends();
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    if adj.values().any(|nb| nb.len() > 2) {
        return None;
    }
    let mut visited: HashSet<Vertex> = HashSet::new();
    let mut starts: Vec<Vertex> = adj.iter().filter(|(_, nb)| nb.len() == 1).map(|(&v, _)| v).collect();
    starts.sort();
    let mut paths = Vec::new();
    for s in starts {
        if visited.contains(&s) {
            continue;
        }
        let (mut prev, mut cur, mut len) = (s, adj[&s][0], 1);
        visited.insert(s);
        loop {
            visited.insert(cur);
            let nb = &adj[&cur];
            if nb.len() == 1 {
                break;
            }
            let next = if nb[0] == prev { nb[1] } else { nb[0] };
            prev = cur;
            cur = next;
            len += 1;
        }
        paths.push((s, cur, len));
    }
    // anything not reached from a degree-1 vertex lies on a cycle
    if visited.len() != adj.len() {
        return None;
    }
    Some(paths)
}

/// True iff every vertex has degree at most two and there is no cycle.
pub fn is_linear_forest(edges: &[Edge]) -> bool {
    forest_paths(edges).is_some()
}

/// The natural necessary condition for extending `p` to a Hamiltonian
/// `x`–`y` path: `p` is a linear forest, no component joins `x` to `y`,
/// and neither `x` nor `y` is an interior vertex of a component.
pub fn nnc_check(p: &[Edge], x: Vertex, y: Vertex) -> bool {
    let Some(paths) = forest_paths(p) else {
        return false;
    };
    let deg = |v: Vertex| p.iter().filter(|e| e.contains(v)).count();
    if deg(x) > 1 || deg(y) > 1 {
        return false;
    }
    !paths.iter().any(|&(a, b, _)| (a == x && b == y) || (a == y && b == x))
}

/// Number of edges of `edges` in each layer, indexed by dimension `1..=n`
/// (entry 0 unused).
pub fn layer_counts(n: Dim, edges: &[Edge]) -> Vec<usize> {
    let mut counts = vec![0; n.get() as usize + 1];
    for e in edges {
        counts[e.dim() as usize] += 1;
    }
    counts
}

/// A split dimension minimizing the number of `m ∪ pinned` edges it cuts;
/// ties go to the smallest dimension.
pub fn choose_split_dim(n: Dim, m: &[Edge], pinned: &[Edge]) -> u32 {
    let mut all: Vec<Edge> = m.to_vec();
    all.extend(pinned.iter().copied().filter(|e| !m.contains(e)));
    let counts = layer_counts(n, &all);
    (1..=n.get()).min_by_key(|&j| (counts[j as usize], j)).expect("n >= 1")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CounterexampleError {
    #[error("the construction needs n >= 3, got {0}")]
    TooSmall(u32),
    #[error("x and y must have opposite parity")]
    SameParity,
    #[error("no neighbor u of x admits the construction")]
    NoPivot,
}

/// The classic set of `2n - 3` edges satisfying the natural necessary
/// condition yet contained in no Hamiltonian `x`–`y` path.
///
/// Pick a neighbor `u != y` of `x` (lowest dimension first). Give `x` one
/// edge and all but one of the other neighbors of `u` two edges each, none
/// touching `u`. Then `u` keeps at most one usable edge and must be skipped.
pub fn counterexample(n: Dim, x: Vertex, y: Vertex) -> Result<Vec<Edge>, CounterexampleError> {
    if n.get() < 3 {
        return Err(CounterexampleError::TooSmall(n.get()));
    }
    if x.parity() == y.parity() {
        return Err(CounterexampleError::SameParity);
    }
    for du in 1..=n.get() {
        let u = x.flip(du);
        if u == y {
            continue;
        }
        if let Some(p) = counterexample_around(n, x, y, u) {
            return Ok(p);
        }
    }
    Err(CounterexampleError::NoPivot)
}

fn counterexample_around(n: Dim, x: Vertex, y: Vertex, u: Vertex) -> Option<Vec<Edge>> {
    let others: Vec<Vertex> = u.neighbors(n).filter(|&w| w != x).collect();
    for dx in 1..=n.get() {
        let e = Edge::of(x, x.flip(dx));
        if e.contains(u) {
            continue;
        }
        let mut chosen = vec![e];
        if !nnc_check(&chosen, x, y) {
            continue;
        }
        if fill_neighbors(n, x, y, u, &others, 0, false, &mut chosen) {
            return Some(chosen);
        }
    }
    None
}

/// Depth-first assignment of two edges to each neighbor in `others[i..]`,
/// allowing exactly one neighbor to be skipped.
#[allow(clippy::too_many_arguments)]
fn fill_neighbors(
    n: Dim,
    x: Vertex,
    y: Vertex,
    u: Vertex,
    others: &[Vertex],
    i: usize,
    skipped: bool,
    chosen: &mut Vec<Edge>,
) -> bool {
    if i == others.len() {
        return skipped;
    }
    let w = others[i];
    let dims: Vec<u32> = (1..=n.get()).filter(|&d| w.flip(d) != u).collect();
    for (a, &d1) in dims.iter().enumerate() {
        for &d2 in &dims[a + 1..] {
            let e1 = Edge::of(w, w.flip(d1));
            let e2 = Edge::of(w, w.flip(d2));
            if chosen.contains(&e1) || chosen.contains(&e2) {
                continue;
            }
            chosen.push(e1);
            chosen.push(e2);
            if nnc_check(chosen, x, y) && fill_neighbors(n, x, y, u, others, i + 1, skipped, chosen) {
                return true;
            }
            chosen.truncate(chosen.len() - 2);
        }
    }
    !skipped && fill_neighbors(n, x, y, u, others, i + 1, true, chosen)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("n must be at least 5, got {0}")]
    TooSmall(u32),
    #[error("vertex {0} is outside Q_{1}")]
    BadVertex(u64, u32),
    #[error("x and y must have opposite parity")]
    SameParity,
    #[error("not a matching")]
    NotAMatching,
    #[error("matching of size {size} exceeds 3n-13 = {bound}")]
    ExceedsBound { size: usize, bound: usize },
    #[error("xy in M")]
    XyInM,
}

/// A problem instance: find a Hamiltonian `x`–`y` path of `Q_n` through `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub n: Dim,
    pub m: Vec<Edge>,
    pub x: Vertex,
    pub y: Vertex,
    pub seed: Option<u64>,
}

/// Largest matching size covered by the construction in `Q_n`.
pub fn matching_bound(n: u32) -> usize {
    (3 * n as usize).saturating_sub(13)
}

impl Instance {
    /// Builds and validates an instance. Edges are stored sorted.
    pub fn new(n: Dim, mut m: Vec<Edge>, x: Vertex, y: Vertex) -> Result<Self, InstanceError> {
        m.sort();
        m.dedup();
        let inst = Instance { n, m, x, y, seed: None };
        inst.validate()?;
        Ok(inst)
    }

    /// Structural checks without the size bound or the `n >= 5` floor.
    pub fn validate_shape(&self) -> Result<(), InstanceError> {
        let n = self.n;
        for v in [self.x, self.y] {
            if !v.is_valid(n) {
                return Err(InstanceError::BadVertex(v.bits(), n.get()));
            }
        }
        for e in &self.m {
            if !e.is_valid(n) {
                return Err(InstanceError::BadVertex(e.hi().bits(), n.get()));
            }
        }
        if self.x.parity() == self.y.parity() {
            return Err(InstanceError::SameParity);
        }
        if !is_matching(&self.m) {
            return Err(InstanceError::NotAMatching);
        }
        if self.m.iter().any(|e| e.contains(self.x) && e.contains(self.y)) {
            return Err(InstanceError::XyInM);
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), InstanceError> {
        if self.n.get() < 5 {
            return Err(InstanceError::TooSmall(self.n.get()));
        }
        self.validate_shape()?;
        let bound = matching_bound(self.n.get());
        if self.m.len() > bound {
            return Err(InstanceError::ExceedsBound { size: self.m.len(), bound });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Vertex {
        Vertex::parse_bits(s).unwrap().0
    }

    fn e(a: &str, b: &str) -> Edge {
        Edge::of(v(a), v(b))
    }

    #[test]
    fn matching_examples() {
        assert!(is_matching(&[e("00", "01"), e("10", "11")]));
        assert!(!is_matching(&[e("00", "01"), e("01", "11")]));
        assert!(is_matching(&[]));
    }

    #[test]
    fn forest_examples() {
        assert!(is_linear_forest(&[e("00", "01"), e("10", "11")]));
        let square = [e("00", "01"), e("01", "11"), e("11", "10"), e("10", "00")];
        assert!(!is_linear_forest(&square));
        assert!(is_linear_forest(&[e("000", "100"), e("100", "110"), e("110", "111")]));
        let star = [e("000", "100"), e("000", "010"), e("000", "001")];
        assert!(!is_linear_forest(&star));
    }

    #[test]
    fn nnc_examples() {
        let (x, y) = (v("000"), v("111"));
        assert!(nnc_check(&[e("000", "100")], x, y));
        let joined = [e("000", "100"), e("100", "110"), e("110", "111")];
        assert!(!nnc_check(&joined, x, y));
        let interior = [e("100", "000"), e("000", "010")];
        assert!(!nnc_check(&interior, x, y));
    }

    #[test]
    fn counterexample_sizes() {
        for n in 3..=7 {
            let d = Dim::new(n).unwrap();
            let x = Vertex(0);
            for y in d.vertices().filter(|w| w.parity() == 1) {
                let p = counterexample(d, x, y).unwrap();
                assert_eq!(p.len(), 2 * n as usize - 3);
                assert!(nnc_check(&p, x, y));
            }
        }
        assert!(counterexample(Dim::new(2).unwrap(), Vertex(0), Vertex(1)).is_err());
    }

    #[test]
    fn split_dim_examples() {
        let n5 = Dim::new(5).unwrap();
        let m = [
            Edge::of(Vertex(0b00000), Vertex(0b00001)),
            Edge::of(Vertex(0b00010), Vertex(0b00011)),
            Edge::of(Vertex(0b00100), Vertex(0b00110)),
        ];
        assert_eq!(choose_split_dim(n5, &m, &[]), 3);
        assert_eq!(choose_split_dim(n5, &[], &[]), 1);
    }

    #[test]
    fn instance_validation() {
        let n = Dim::new(5).unwrap();
        let ok = Instance::new(n, vec![e("01100", "01110")], v("00000"), v("00001"));
        assert!(ok.is_ok());
        let xy = Instance::new(n, vec![e("00000", "00001")], v("00000"), v("00001"));
        assert_eq!(xy.unwrap_err(), InstanceError::XyInM);
        let same = Instance::new(n, vec![], v("00000"), v("00011"));
        assert_eq!(same.unwrap_err(), InstanceError::SameParity);
        let big = Instance::new(
            n,
            vec![e("01100", "01110"), e("10000", "11000"), e("00111", "00101")],
            v("00000"),
            v("00001"),
        );
        assert!(matches!(big.unwrap_err(), InstanceError::ExceedsBound { .. }));
    }
}
