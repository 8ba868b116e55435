//! Path surgery: fragments plus added edges minus removed edges, read back as
//! simple paths.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::cube::{Edge, Vertex};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assembly {
    pub fragments: Vec<Vec<Vertex>>,
    pub added: Vec<Edge>,
    pub removed: Vec<Edge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssembleError {
    #[error("not a path: {0}")]
    NotAPath(String),
}

fn not_a_path(msg: impl Into<String>) -> AssembleError {
    AssembleError::NotAPath(msg.into())
}

impl Assembly {
    pub fn new() -> Self {
        Assembly::default()
    }

    pub fn fragment(mut self, f: Vec<Vertex>) -> Self {
        self.fragments.push(f);
        self
    }

    /// Adds a cycle given as a closed vertex sequence (last adjacent to first).
    pub fn cycle(mut self, c: Vec<Vertex>) -> Self {
        if c.len() >= 3 {
            self.added.push(Edge::of(c[c.len() - 1], c[0]));
        }
        self.fragments.push(c);
        self
    }

    pub fn add_edge(mut self, e: Edge) -> Self {
        self.added.push(e);
        self
    }

    pub fn remove_edge(mut self, e: Edge) -> Self {
        self.removed.push(e);
        self
    }

    /// The resulting edge set, or an error on a non-adjacent step, a removal
    /// of a missing edge, or a doubled edge.
    fn edge_set(&self) -> Result<(HashSet<Vertex>, HashMap<Edge, u32>), AssembleError> {
        let mut verts = HashSet::new();
        let mut edges: HashMap<Edge, u32> = HashMap::new();
        for f in &self.fragments {
            for (i, &v) in f.iter().enumerate() {
                verts.insert(v);
                if i > 0 {
                    let e = Edge::between(f[i - 1], v)
                        .map_err(|_| not_a_path(format!("fragment step {:#x}->{:#x}", f[i - 1].bits(), v.bits())))?;
                    *edges.entry(e).or_default() += 1;
                }
            }
        }
        for &e in &self.added {
            verts.insert(e.lo());
            verts.insert(e.hi());
            *edges.entry(e).or_default() += 1;
        }
        for &e in &self.removed {
            match edges.get_mut(&e) {
                Some(c) if *c > 0 => *c -= 1,
                _ => return Err(not_a_path(format!("removed edge {:#x}-{:#x} absent", e.lo().bits(), e.hi().bits()))),
            }
        }
        edges.retain(|_, c| *c > 0);
        if let Some((e, _)) = edges.iter().find(|(_, &c)| c > 1) {
            return Err(not_a_path(format!("edge {:#x}-{:#x} used twice", e.lo().bits(), e.hi().bits())));
        }
        Ok((verts, edges))
    }
}

/// Reads the assembly as one simple path from `x` to `y` through every
/// fragment vertex.
pub fn assemble(a: &Assembly, x: Vertex, y: Vertex) -> Result<Vec<Vertex>, AssembleError> {
    let mut paths = assemble_paths(a, &[(x, y)])?;
    Ok(paths.swap_remove(0))
}

/// Reads the assembly as vertex-disjoint paths joining the given pairs and
/// covering every vertex involved. A pair `(a, a)` is an isolated vertex.
pub fn assemble_paths(a: &Assembly, pairs: &[(Vertex, Vertex)]) -> Result<Vec<Vec<Vertex>>, AssembleError> {
    let (mut verts, edges) = a.edge_set()?;
    for &(s, t) in pairs {
        verts.insert(s);
        verts.insert(t);
    }
    let mut adj: HashMap<Vertex, Vec<Vertex>> = HashMap::with_capacity(verts.len());
    for e in edges.keys() {
        adj.entry(e.lo()).or_default().push(e.hi());
        adj.entry(e.hi()).or_default().push(e.lo());
    }
    if let Some((v, _)) = adj.iter().find(|(_, nb)| nb.len() > 2) {
        return Err(not_a_path(format!("vertex {:#x} has degree > 2", v.bits())));
    }
    let mut visited: HashSet<Vertex> = HashSet::with_capacity(verts.len());
    let mut out = Vec::with_capacity(pairs.len());
    for &(s, t) in pairs {
        let nb = adj.get(&s).map(|v| v.as_slice()).unwrap_or(&[]);
        if s == t {
            if !nb.is_empty() {
                return Err(not_a_path(format!("single-vertex path {:#x} has edges", s.bits())));
            }
            if !visited.insert(s) {
                return Err(not_a_path(format!("vertex {:#x} reused", s.bits())));
            }
            out.push(vec![s]);
            continue;
        }
        if nb.len() != 1 {
            return Err(not_a_path(format!("terminal {:#x} has degree {}", s.bits(), nb.len())));
        }
        let mut seq = vec![s];
        if !visited.insert(s) {
            return Err(not_a_path(format!("vertex {:#x} reused", s.bits())));
        }
        let (mut prev, mut cur) = (s, nb[0]);
        loop {
            if !visited.insert(cur) {
                return Err(not_a_path(format!("vertex {:#x} reused", cur.bits())));
            }
            seq.push(cur);
            let nbs = &adj[&cur];
            if nbs.len() == 1 {
                break;
            }
            let next = if nbs[0] == prev { nbs[1] } else { nbs[0] };
            prev = cur;
            cur = next;
        }
        if cur != t {
            return Err(not_a_path(format!(
                "path from {:#x} ends at {:#x}, expected {:#x}",
                s.bits(),
                cur.bits(),
                t.bits()
            )));
        }
        out.push(seq);
    }
    if visited.len() != verts.len() {
        return Err(not_a_path(format!(
            "{} of {} vertices left over (extra component or cycle)",
            verts.len() - visited.len(),
            verts.len()
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Vertex {
        Vertex::parse_bits(s).unwrap().0
    }

    #[test]
    fn joins_two_fragments() {
        let a = Assembly::new()
            .fragment(vec![v("00"), v("10")])
            .fragment(vec![v("11"), v("01")])
            .add_edge(Edge::of(v("10"), v("11")));
        assert_eq!(assemble(&a, v("00"), v("01")).unwrap(), vec![v("00"), v("10"), v("11"), v("01")]);
    }

    #[test]
    fn disconnecting_removal_fails() {
        let a =
            Assembly::new().fragment(vec![v("00"), v("10"), v("11"), v("01")]).remove_edge(Edge::of(v("10"), v("11")));
        assert!(matches!(assemble(&a, v("00"), v("01")), Err(AssembleError::NotAPath(_))));
    }

    #[test]
    fn cycle_is_rejected() {
        let a = Assembly::new().cycle(vec![v("00"), v("10"), v("11"), v("01")]);
        assert!(assemble(&a, v("00"), v("01")).is_err());
        let b = a.clone().remove_edge(Edge::of(v("01"), v("00")));
        assert!(assemble(&b, v("00"), v("01")).is_ok());
    }

    #[test]
    fn missing_removal_fails() {
        let a = Assembly::new().fragment(vec![v("00"), v("10")]).remove_edge(Edge::of(v("00"), v("01")));
        assert!(assemble(&a, v("00"), v("10")).is_err());
    }
}
