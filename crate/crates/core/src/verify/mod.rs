//! Independent solution checker and sweep harnesses.
//!
//! The checker reads raw vertex sequences only; it shares no code with the
//! construction or the search.

mod sweep;

use std::collections::HashMap;
use std::fmt;

use crate::cube::{Dim, Edge, Vertex};

pub use sweep::{
    canonical_instances, cross_check, describe_instance, random_instance, random_instances, sweep_exhaustive,
    sweep_random, SweepConfig, SweepError, SweepReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    NotPath,
    WrongEndpoints,
    MissedVertex,
    RepeatedVertex,
    MissingPrescribedEdge,
    ForbiddenVertexUsed,
    NotDisjoint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.kind, self.detail)
    }
}

fn violation(kind: ViolationKind, detail: String) -> Violation {
    Violation { kind, detail }
}

/// Checks that `paths` are vertex-disjoint paths of `Q_n` covering every
/// vertex outside `forbidden`, that path `i` joins `terminals[i]` (in either
/// direction), and that every prescribed edge is traversed.
pub fn verify(
    n: Dim,
    paths: &[Vec<Vertex>],
    terminals: &[(Vertex, Vertex)],
    prescribed: &[Edge],
    forbidden: &[Vertex],
) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    let size = 1u64 << n.get();
    let mut owner: HashMap<u64, usize> = HashMap::with_capacity(size as usize);
    let mut used_edges: HashMap<(u64, u64), ()> = HashMap::new();
    if paths.len() != terminals.len() {
        out.push(violation(
            ViolationKind::WrongEndpoints,
            format!("{} paths for {} terminal pairs", paths.len(), terminals.len()),
        ));
    }
    for (i, path) in paths.iter().enumerate() {
        if path.is_empty() {
            out.push(violation(ViolationKind::NotPath, format!("path {i} is empty")));
            continue;
        }
        for (pos, v) in path.iter().enumerate() {
            let b = v.bits();
            if b >= size {
                out.push(violation(ViolationKind::NotPath, format!("path {i}: vertex {b:#x} outside cube")));
                continue;
            }
            if let Some(&j) = owner.get(&b) {
                let kind = if j == i { ViolationKind::RepeatedVertex } else { ViolationKind::NotDisjoint };
                out.push(violation(kind, format!("vertex {} (path {i}, also path {j})", v.to_bits(n))));
            } else {
                owner.insert(b, i);
            }
            if pos > 0 {
                let a = path[pos - 1].bits();
                if (a ^ b).count_ones() != 1 {
                    out.push(violation(
                        ViolationKind::NotPath,
                        format!("path {i}: {} and {} not adjacent", path[pos - 1].to_bits(n), v.to_bits(n)),
                    ));
                } else {
                    used_edges.insert((a.min(b), a.max(b)), ());
                }
            }
        }
        if let Some(&(a, b)) = terminals.get(i) {
            let (s, t) = (path[0], path[path.len() - 1]);
            if !((s == a && t == b) || (s == b && t == a)) {
                out.push(violation(
                    ViolationKind::WrongEndpoints,
                    format!(
                        "path {i} runs {}..{}, expected {}..{}",
                        s.to_bits(n),
                        t.to_bits(n),
                        a.to_bits(n),
                        b.to_bits(n)
                    ),
                ));
            }
        }
    }
    for f in forbidden {
        if owner.remove(&f.bits()).is_some() {
            out.push(violation(ViolationKind::ForbiddenVertexUsed, f.to_bits(n)));
        }
    }
    let forbidden_bits: Vec<u64> = forbidden.iter().map(|v| v.bits()).collect();
    for b in 0..size {
        if !owner.contains_key(&b) && !forbidden_bits.contains(&b) {
            out.push(violation(ViolationKind::MissedVertex, Vertex(b).to_bits(n)));
        }
    }
    for e in prescribed {
        let (a, b) = (e.lo().bits(), e.hi().bits());
        if !used_edges.contains_key(&(a.min(b), a.max(b))) {
            out.push(violation(ViolationKind::MissingPrescribedEdge, e.to_bits(n)));
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// Checks a Hamiltonian path of `Q_n` from `x` to `y` through `prescribed`.
pub fn verify_path(n: Dim, path: &[Vertex], x: Vertex, y: Vertex, prescribed: &[Edge]) -> Result<(), Vec<Violation>> {
    verify(n, &[path.to_vec()], &[(x, y)], prescribed, &[])
}

/// Checks a Hamiltonian cycle, given as a vertex sequence whose last vertex
/// is adjacent to the first.
pub fn verify_cycle(n: Dim, cycle: &[Vertex], prescribed: &[Edge]) -> Result<(), Vec<Violation>> {
    let mut extra = Vec::new();
    if cycle.len() < 2 || (cycle[0].bits() ^ cycle[cycle.len() - 1].bits()).count_ones() != 1 {
        extra.push(violation(ViolationKind::NotPath, "cycle does not close".into()));
    }
    let closing = if cycle.len() >= 2 { Some((cycle[0].bits(), cycle[cycle.len() - 1].bits())) } else { None };
    let rest: Vec<Edge> = prescribed
        .iter()
        .copied()
        .filter(|e| {
            let key = (e.lo().bits(), e.hi().bits());
            closing.is_none_or(|(a, b)| key != (a.min(b), a.max(b)))
        })
        .collect();
    let ends = match (cycle.first(), cycle.last()) {
        (Some(&a), Some(&b)) => vec![(a, b)],
        _ => vec![],
    };
    let base = verify(n, &[cycle.to_vec()], &ends, &rest, &[]);
    match (base, extra.is_empty()) {
        (Ok(()), true) => Ok(()),
        (Ok(()), false) => Err(extra),
        (Err(mut v), _) => {
            v.extend(extra);
            Err(v)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Vertex {
        Vertex::parse_bits(s).unwrap().0
    }

    fn seq(list: &[&str]) -> Vec<Vertex> {
        list.iter().map(|s| v(s)).collect()
    }

    #[test]
    fn q2_examples() {
        let n = Dim::new(2).unwrap();
        let p = seq(&["00", "10", "11", "01"]);
        let (x, y) = (v("00"), v("01"));
        assert!(verify_path(n, &p, x, y, &[Edge::of(v("10"), v("11"))]).is_ok());
        let err = verify_path(n, &p, x, y, &[Edge::of(v("00"), v("01"))]).unwrap_err();
        assert_eq!(err[0].kind, ViolationKind::MissingPrescribedEdge);
        let rep = seq(&["00", "10", "00", "01"]);
        let err = verify_path(n, &rep, x, y, &[]).unwrap_err();
        assert!(err.iter().any(|e| e.kind == ViolationKind::RepeatedVertex));
    }

    #[test]
    fn disjointness_and_forbidden() {
        let n = Dim::new(2).unwrap();
        let paths = vec![seq(&["00", "10"]), seq(&["10", "11", "01"])];
        let err = verify(n, &paths, &[(v("00"), v("10")), (v("10"), v("01"))], &[], &[]).unwrap_err();
        assert!(err.iter().any(|e| e.kind == ViolationKind::NotDisjoint));
        let one = vec![seq(&["10", "11", "01"])];
        assert!(verify(n, &one, &[(v("10"), v("01"))], &[], &[v("00")]).is_ok());
        let err = verify(n, &one, &[(v("10"), v("01"))], &[], &[v("11")]).unwrap_err();
        assert!(err.iter().any(|e| e.kind == ViolationKind::ForbiddenVertexUsed));
    }

    #[test]
    fn cycle_check() {
        let n = Dim::new(2).unwrap();
        let c = seq(&["00", "10", "11", "01"]);
        assert!(verify_cycle(n, &c, &[Edge::of(v("00"), v("01"))]).is_ok());
        let open = seq(&["00", "10", "11"]);
        assert!(verify_cycle(n, &open, &[]).is_err());
    }
}
