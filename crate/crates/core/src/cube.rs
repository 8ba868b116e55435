//! Bit-level algebra of the hypercube `Q_n`.
//!
//! A vertex is an `n`-bit word; coordinate `i` (1-based) lives at bit `i - 1`.
//! Text forms print coordinate 1 first, so `"10110"` has coordinates 1, 3 and 4 set.

use std::fmt;

use thiserror::Error;

/// Largest supported dimension.
pub const MAX_DIM: u32 = 63;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CubeError {
    #[error("dimension {0} out of range 1..={MAX_DIM}")]
    BadDim(u32),
    #[error("coordinate {j} out of range 1..={n}")]
    BadCoordinate { j: u32, n: u32 },
    #[error("vertex {0:#x} has bits above dimension {1}")]
    BadVertex(u64, u32),
    #[error("vertices {0} and {1} are not adjacent")]
    NotAdjacent(u64, u64),
    #[error("cannot split Q_1")]
    NoSplit,
    #[error("malformed bit string {0:?}")]
    BadBits(String),
}

/// Hypercube dimension `n >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dim(u32);

impl Dim {
    pub fn new(n: u32) -> Result<Self, CubeError> {
        if (1..=MAX_DIM).contains(&n) {
            Ok(Dim(n))
        } else {
            Err(CubeError::BadDim(n))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn order(self) -> u64 {
        1u64 << self.0
    }

    /// Mask of the valid coordinate bits.
    pub fn mask(self) -> u64 {
        if self.0 == 64 {
            u64::MAX
        } else {
            (1u64 << self.0) - 1
        }
    }

    pub fn check_coordinate(self, j: u32) -> Result<(), CubeError> {
        if j >= 1 && j <= self.0 {
            Ok(())
        } else {
            Err(CubeError::BadCoordinate { j, n: self.0 })
        }
    }

    pub fn vertices(self) -> impl Iterator<Item = Vertex> {
        (0..self.order()).map(Vertex)
    }

    /// All `n * 2^(n-1)` edges, ordered by lower endpoint then dimension.
    pub fn edges(self) -> impl Iterator<Item = Edge> {
        let n = self.0;
        self.vertices().flat_map(move |v| {
            (1..=n).filter_map(move |j| {
                let w = v.flip(j);
                (v < w).then(|| Edge::between(v, w).expect("flip is adjacent"))
            })
        })
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A vertex of `Q_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex(pub u64);

impl Vertex {
    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn is_valid(self, n: Dim) -> bool {
        self.0 & !n.mask() == 0
    }

    pub fn check(self, n: Dim) -> Result<Self, CubeError> {
        if self.is_valid(n) {
            Ok(self)
        } else {
            Err(CubeError::BadVertex(self.0, n.get()))
        }
    }

    /// Coordinate `j` (1-based).
    pub fn coord(self, j: u32) -> u8 {
        ((self.0 >> (j - 1)) & 1) as u8
    }

    pub fn parity(self) -> u8 {
        (self.0.count_ones() & 1) as u8
    }

    pub fn flip(self, j: u32) -> Vertex {
        Vertex(self.0 ^ (1u64 << (j - 1)))
    }

    pub fn distance(self, other: Vertex) -> u32 {
        (self.0 ^ other.0).count_ones()
    }

    pub fn is_adjacent(self, other: Vertex) -> bool {
        (self.0 ^ other.0).is_power_of_two()
    }

    pub fn neighbors(self, n: Dim) -> impl Iterator<Item = Vertex> {
        (1..=n.get()).map(move |j| self.flip(j))
    }

    /// Fixed-width bit string, coordinate 1 first.
    pub fn to_bits(self, n: Dim) -> String {
        (1..=n.get()).map(|j| if self.coord(j) == 1 { '1' } else { '0' }).collect()
    }

    pub fn parse_bits(s: &str) -> Result<(Vertex, Dim), CubeError> {
        let n = u32::try_from(s.len()).map_err(|_| CubeError::BadBits(s.to_string()))?;
        let dim = Dim::new(n).map_err(|_| CubeError::BadBits(s.to_string()))?;
        let mut bits = 0u64;
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits |= 1 << i,
                _ => return Err(CubeError::BadBits(s.to_string())),
            }
        }
        Ok((Vertex(bits), dim))
    }
}

/// Parity of a vertex: coordinate sum mod 2.
pub fn parity(v: Vertex) -> u8 {
    v.parity()
}

/// The neighbor of `v` across coordinate `j`.
pub fn neighbor(n: Dim, v: Vertex, j: u32) -> Result<Vertex, CubeError> {
    n.check_coordinate(j)?;
    v.check(n)?;
    Ok(v.flip(j))
}

/// Hamming distance.
pub fn distance(u: Vertex, v: Vertex) -> u32 {
    u.distance(v)
}

/// An edge of `Q_n`, stored with endpoints in increasing numeric order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    lo: Vertex,
    hi: Vertex,
}

impl Edge {
    pub fn between(a: Vertex, b: Vertex) -> Result<Edge, CubeError> {
        if !a.is_adjacent(b) {
            return Err(CubeError::NotAdjacent(a.0, b.0));
        }
        Ok(if a < b { Edge { lo: a, hi: b } } else { Edge { lo: b, hi: a } })
    }

    /// Panics if the endpoints are not adjacent; for internal construction sites
    /// where adjacency is structural.
    pub fn of(a: Vertex, b: Vertex) -> Edge {
        Edge::between(a, b).expect("endpoints must be adjacent")
    }

    pub fn lo(self) -> Vertex {
        self.lo
    }

    pub fn hi(self) -> Vertex {
        self.hi
    }

    pub fn ends(self) -> (Vertex, Vertex) {
        (self.lo, self.hi)
    }

    /// The coordinate in which the endpoints differ (1-based).
    pub fn dim(self) -> u32 {
        (self.lo.0 ^ self.hi.0).trailing_zeros() + 1
    }

    pub fn contains(self, v: Vertex) -> bool {
        self.lo == v || self.hi == v
    }

    pub fn other(self, v: Vertex) -> Option<Vertex> {
        if v == self.lo {
            Some(self.hi)
        } else if v == self.hi {
            Some(self.lo)
        } else {
            None
        }
    }

    pub fn touches(self, other: Edge) -> bool {
        self.contains(other.lo) || self.contains(other.hi)
    }

    pub fn is_valid(self, n: Dim) -> bool {
        self.lo.is_valid(n) && self.hi.is_valid(n)
    }

    /// Canonical text form: endpoints in lexicographic bit-string order.
    pub fn to_bits(self, n: Dim) -> String {
        let a = self.lo.to_bits(n);
        let b = self.hi.to_bits(n);
        if a <= b {
            format!("{a}-{b}")
        } else {
            format!("{b}-{a}")
        }
    }
}

/// Minimum distance from a vertex to either endpoint of an edge.
pub fn vertex_edge_distance(v: Vertex, e: Edge) -> u32 {
    v.distance(e.lo()).min(v.distance(e.hi()))
}

/// All edges of dimension `j`.
pub fn layer(n: Dim, j: u32) -> Result<Vec<Edge>, CubeError> {
    n.check_coordinate(j)?;
    let bit = 1u64 << (j - 1);
    Ok(n.vertices().filter(|v| v.0 & bit == 0).map(|v| Edge::of(v, v.flip(j))).collect())
}

/// Which subcube of a split a vertex lies in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Zero,
    One,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Zero => Side::One,
            Side::One => Side::Zero,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Side::Zero => 0,
            Side::One => 1,
        }
    }
}

/// Decomposition of `Q_n` along coordinate `j` into two copies of `Q_{n-1}`.
///
/// Projection deletes coordinate `j` and shifts higher coordinates down by one.
/// `flipped` relabels the halves: logical side 0 is the half whose coordinate
/// `j` equals `flipped as u8`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitContext {
    n: Dim,
    j: u32,
    flipped: bool,
}

impl SplitContext {
    pub fn new(n: Dim, j: u32) -> Result<Self, CubeError> {
        if n.get() < 2 {
            return Err(CubeError::NoSplit);
        }
        n.check_coordinate(j)?;
        Ok(SplitContext { n, j, flipped: false })
    }

    pub fn n(&self) -> Dim {
        self.n
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    pub fn sub_dim(&self) -> Dim {
        Dim(self.n.get() - 1)
    }

    pub fn is_flipped(&self) -> bool {
        self.flipped
    }

    /// The same split with the two halves exchanged.
    pub fn swapped(&self) -> SplitContext {
        SplitContext { flipped: !self.flipped, ..*self }
    }

    pub fn side(&self, v: Vertex) -> Side {
        if (v.coord(self.j) == 1) != self.flipped {
            Side::One
        } else {
            Side::Zero
        }
    }

    pub fn partner(&self, v: Vertex) -> Vertex {
        v.flip(self.j)
    }

    pub fn project(&self, v: Vertex) -> Vertex {
        let low = v.0 & ((1u64 << (self.j - 1)) - 1);
        let high = (v.0 >> self.j) << (self.j - 1);
        Vertex(low | high)
    }

    pub fn lift(&self, w: Vertex, side: Side) -> Vertex {
        let low = w.0 & ((1u64 << (self.j - 1)) - 1);
        let high = (w.0 >> (self.j - 1)) << self.j;
        let bit = u64::from((side == Side::One) != self.flipped) << (self.j - 1);
        Vertex(low | high | bit)
    }

    /// Coordinate index in `Q_{n-1}` of coordinate `k != j` of `Q_n`.
    pub fn project_coordinate(&self, k: u32) -> Option<u32> {
        match k.cmp(&self.j) {
            std::cmp::Ordering::Less => Some(k),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(k - 1),
        }
    }

    /// Projects an edge lying inside one half; cross edges have no image.
    pub fn project_edge(&self, e: Edge) -> Option<Edge> {
        if e.dim() == self.j {
            return None;
        }
        Some(Edge::of(self.project(e.lo()), self.project(e.hi())))
    }

    pub fn lift_edge(&self, e: Edge, side: Side) -> Edge {
        Edge::of(self.lift(e.lo(), side), self.lift(e.hi(), side))
    }

    pub fn is_cross(&self, e: Edge) -> bool {
        e.dim() == self.j
    }

    /// Splits an edge set into (side 0, side 1, cross) parts.
    pub fn classify_edges<'a, I>(&self, edges: I) -> (Vec<Edge>, Vec<Edge>, Vec<Edge>)
    where
        I: IntoIterator<Item = &'a Edge>,
    {
        let (mut e0, mut e1, mut ec) = (Vec::new(), Vec::new(), Vec::new());
        for &e in edges {
            if self.is_cross(e) {
                ec.push(e);
            } else if self.side(e.lo()) == Side::Zero {
                e0.push(e);
            } else {
                e1.push(e);
            }
        }
        (e0, e1, ec)
    }
}

pub fn split(n: Dim, j: u32) -> Result<SplitContext, CubeError> {
    SplitContext::new(n, j)
}

pub fn classify_edges(ctx: &SplitContext, edges: &[Edge]) -> (Vec<Edge>, Vec<Edge>, Vec<Edge>) {
    ctx.classify_edges(edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Vertex {
        Vertex::parse_bits(s).unwrap().0
    }

    #[test]
    fn parity_examples() {
        assert_eq!(parity(v("00000")), 0);
        assert_eq!(parity(v("10110")), 1);
        for n in 1..=8 {
            let d = Dim::new(n).unwrap();
            let even = d.vertices().filter(|u| u.parity() == 0).count() as u64;
            assert_eq!(even, 1 << (n - 1));
        }
    }

    #[test]
    fn neighbor_examples() {
        let n3 = Dim::new(3).unwrap();
        assert_eq!(neighbor(n3, v("000"), 2).unwrap(), v("010"));
        assert_eq!(neighbor(n3, v("111"), 1).unwrap(), v("011"));
        assert!(neighbor(n3, v("000"), 4).is_err());
        assert!(neighbor(n3, v("000"), 0).is_err());
        for u in n3.vertices() {
            let set: std::collections::HashSet<_> = u.neighbors(n3).collect();
            assert_eq!(set.len(), 3);
        }
    }

    #[test]
    fn layer_sizes() {
        let n1 = Dim::new(1).unwrap();
        assert_eq!(layer(n1, 1).unwrap(), vec![Edge::of(Vertex(0), Vertex(1))]);
        let n5 = Dim::new(5).unwrap();
        let mut all = std::collections::HashSet::new();
        for j in 1..=5 {
            let l = layer(n5, j).unwrap();
            assert_eq!(l.len(), 16);
            assert!(l.iter().all(|e| e.dim() == j));
            for e in l {
                assert!(all.insert(e));
            }
        }
        assert_eq!(all.len(), 5 * 16);
        assert!(layer(n5, 6).is_err());
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance(v("000"), v("000")), 0);
        assert_eq!(distance(v("000"), v("111")), 3);
        assert_eq!(distance(v("101"), v("101").flip(2)), 1);
    }

    #[test]
    fn split_q3_side_zero() {
        let n3 = Dim::new(3).unwrap();
        let ctx = split(n3, 1).unwrap();
        let side0: Vec<_> = n3.vertices().filter(|&u| ctx.side(u) == Side::Zero).collect();
        assert_eq!(side0.len(), 4);
        let mut images: Vec<_> = side0.iter().map(|&u| ctx.project(u)).collect();
        images.sort();
        assert_eq!(images, (0..4).map(Vertex).collect::<Vec<_>>());
        for &u in &side0 {
            assert_eq!(u.coord(1), 0);
            assert_eq!(ctx.partner(u).distance(u), 1);
            assert_eq!(ctx.partner(u).coord(1), 1);
        }
        assert_eq!(split(Dim::new(1).unwrap(), 1), Err(CubeError::NoSplit));
    }

    #[test]
    fn swapped_split_exchanges_halves() {
        let n4 = Dim::new(4).unwrap();
        let ctx = split(n4, 3).unwrap();
        let sw = ctx.swapped();
        for u in n4.vertices() {
            assert_eq!(sw.side(u), ctx.side(u).other());
            assert_eq!(sw.lift(sw.project(u), sw.side(u)), u);
        }
    }

    #[test]
    fn edge_text_is_lexicographic() {
        let n = Dim::new(3).unwrap();
        // numeric order puts 001 (bit 0 set, "100") before 010 ("010")
        let e = Edge::of(v("100"), v("110"));
        assert_eq!(e.to_bits(n), "100-110");
        let f = Edge::of(v("001"), v("000"));
        assert_eq!(f.to_bits(n), "000-001");
    }
}
