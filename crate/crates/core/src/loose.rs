//! Loose paths, loose cycles and tight cycles.
//!
//! A loose path of length `t` is a vertex sequence `v_0 .. v_{t(k-1)}` whose
//! edges are `{v_{i(k-1)}, .., v_{i(k-1)+k-1}}`; consecutive edges share
//! exactly one vertex. A loose cycle uses the same pattern with indices taken
//! modulo `n`.

use std::fmt;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::hypergraph::{Edge, Hypergraph, Vertex};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LoosePath {
    k: usize,
    vertices: Vec<Vertex>,
}

impl LoosePath {
    /// Validates the shape: `t(k-1)+1` distinct vertices with `t >= 1`.
    pub fn new(k: usize, vertices: Vec<Vertex>) -> Result<LoosePath> {
        if k < 2 {
            return Err(invalid("k must be at least 2"));
        }
        let len = vertices.len();
        if len < k || !(len - 1).is_multiple_of(k - 1) {
            return Err(invalid(format!(
                "a loose path of a {k}-graph has t(k-1)+1 vertices, got {len}"
            )));
        }
        let mut sorted = vertices.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(invalid(format!("vertex {} repeated in path", w[0])));
        }
        Ok(LoosePath { k, vertices })
    }

    /// A full traversal of a cycle: the last vertex repeats the first.
    fn closed(k: usize, vertices: Vec<Vertex>) -> LoosePath {
        LoosePath { k, vertices }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn length(&self) -> usize {
        (self.vertices.len() - 1) / (self.k - 1)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn is_closed(&self) -> bool {
        self.vertices.first() == self.vertices.last()
    }

    pub fn first(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn last(&self) -> Vertex {
        *self.vertices.last().expect("paths are non-empty")
    }

    pub fn edge(&self, i: usize) -> Edge {
        let s = i * (self.k - 1);
        Edge::new(self.vertices[s..s + self.k].to_vec()).expect("path vertices are distinct")
    }

    pub fn edges(&self) -> Vec<Edge> {
        (0..self.length()).map(|i| self.edge(i)).collect()
    }

    /// The vertices other than the two ends.
    pub fn interior(&self) -> &[Vertex] {
        &self.vertices[1..self.vertices.len() - 1]
    }

    pub fn reversed(&self) -> LoosePath {
        let mut v = self.vertices.clone();
        v.reverse();
        LoosePath { k: self.k, vertices: v }
    }

    /// Fails naming the first edge missing from `g`.
    pub fn check_in(&self, g: &Hypergraph) -> Result<()> {
        for (i, e) in self.edges().iter().enumerate() {
            if !g.contains_edge(e.vertices()) {
                return Err(invalid(format!("path edge {} = {e} is not in the hypergraph", i + 1)));
            }
        }
        Ok(())
    }
}

impl fmt::Display for LoosePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::io::join(&self.vertices))
    }
}

/// Reasons a vertex ordering fails to describe a Hamilton cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "kebab-case")]
pub enum CycleViolation {
    Divisibility { n: usize, k: usize },
    WrongVertexCount { expected: usize, found: usize },
    VertexOutOfRange { vertex: Vertex },
    RepeatedVertex { vertex: Vertex },
    TooShort { edges: usize },
    /// 1-based position of the first missing edge.
    MissingEdge { position: usize, edge: Edge },
}

impl fmt::Display for CycleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CycleViolation::Divisibility { n, k } => {
                write!(f, "divisibility violation: k-1 = {} does not divide n = {n}", k - 1)
            }
            CycleViolation::WrongVertexCount { expected, found } => {
                write!(f, "ordering has {found} vertices, expected {expected}")
            }
            CycleViolation::VertexOutOfRange { vertex } => write!(f, "vertex {vertex} out of range"),
            CycleViolation::RepeatedVertex { vertex } => write!(f, "vertex {vertex} repeated"),
            CycleViolation::TooShort { edges } => write!(f, "a cycle with {edges} edges is degenerate"),
            CycleViolation::MissingEdge { position, edge } => {
                write!(f, "missing edge at position {position}: {edge}")
            }
        }
    }
}

impl std::error::Error for CycleViolation {}

fn check_ordering(g: &Hypergraph, ordering: &[Vertex]) -> Result<(), CycleViolation> {
    let n = g.n();
    if ordering.len() != n {
        return Err(CycleViolation::WrongVertexCount {
            expected: n,
            found: ordering.len(),
        });
    }
    let mut seen = vec![false; n];
    for &v in ordering {
        if v >= n {
            return Err(CycleViolation::VertexOutOfRange { vertex: v });
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(CycleViolation::RepeatedVertex { vertex: v });
        }
    }
    Ok(())
}

/// A loose Hamilton cycle, kept in the orientation and rotation it was
/// built with. [`LooseCycle::canonical`] gives the representative used for
/// deduplication.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LooseCycle {
    k: usize,
    vertices: Vec<Vertex>,
}

impl LooseCycle {
    pub fn validate(g: &Hypergraph, ordering: &[Vertex]) -> Result<LooseCycle, CycleViolation> {
        let (n, k) = (g.n(), g.k());
        if k < 2 || n % (k - 1) != 0 {
            return Err(CycleViolation::Divisibility { n, k });
        }
        check_ordering(g, ordering)?;
        let edges = n / (k - 1);
        if edges < 3 {
            return Err(CycleViolation::TooShort { edges });
        }
        let c = LooseCycle {
            k,
            vertices: ordering.to_vec(),
        };
        for i in 0..edges {
            let e = c.edge(i);
            if !g.contains_edge(e.vertices()) {
                return Err(CycleViolation::MissingEdge {
                    position: i + 1,
                    edge: e,
                });
            }
        }
        Ok(c)
    }

    pub(crate) fn from_trusted(k: usize, vertices: Vec<Vertex>) -> LooseCycle {
        LooseCycle { k, vertices }
    }

    /// Rebuilds the vertex sequence from a cyclic edge sequence; interior
    /// vertices of each edge are listed in ascending order.
    pub(crate) fn from_edge_sequence(k: usize, edges: &[Edge]) -> Result<LooseCycle> {
        let l = edges.len();
        if l < 3 {
            return Err(invalid("a loose cycle needs at least three edges"));
        }
        let shared = |a: &Edge, b: &Edge| -> Result<Vertex> {
            let common: Vec<Vertex> = a.vertices().iter().copied().filter(|&v| b.contains(v)).collect();
            match common[..] {
                [v] => Ok(v),
                _ => Err(invalid(format!("edges {a} and {b} do not meet in one vertex"))),
            }
        };
        let mut vertices = Vec::with_capacity(l * (k - 1));
        for i in 0..l {
            let e = &edges[i];
            let entry = shared(&edges[(i + l - 1) % l], e)?;
            let exit = shared(e, &edges[(i + 1) % l])?;
            vertices.push(entry);
            vertices.extend(e.vertices().iter().copied().filter(|&v| v != entry && v != exit));
        }
        Ok(LooseCycle { k, vertices })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Number of edges, `n / (k-1)`.
    pub fn edge_count(&self) -> usize {
        self.vertices.len() / (self.k - 1)
    }

    fn at(&self, i: usize) -> Vertex {
        self.vertices[i % self.vertices.len()]
    }

    /// The edge at position `i` (0-based, taken modulo the edge count).
    pub fn edge(&self, i: usize) -> Edge {
        let s = (i % self.edge_count()) * (self.k - 1);
        Edge::new((s..s + self.k).map(|x| self.at(x)).collect()).expect("cycle vertices are distinct")
    }

    pub fn edges(&self) -> Vec<Edge> {
        (0..self.edge_count()).map(|i| self.edge(i)).collect()
    }

    /// The vertex shared by edges `i-1` and `i`.
    pub fn entry(&self, i: usize) -> Vertex {
        self.at((i % self.edge_count()) * (self.k - 1))
    }

    pub fn position_of(&self, e: &Edge) -> Option<usize> {
        (0..self.edge_count()).find(|&i| self.edge(i) == *e)
    }

    /// Positions of the edges containing `v` (one or two).
    pub fn positions_containing(&self, v: Vertex) -> Vec<usize> {
        let Some(idx) = self.vertices.iter().position(|&x| x == v) else {
            return Vec::new();
        };
        let l = self.edge_count();
        let p = idx / (self.k - 1);
        if idx % (self.k - 1) == 0 {
            vec![(p + l - 1) % l, p]
        } else {
            vec![p]
        }
    }

    /// Number of steps between two edge positions along the shorter way round.
    pub fn cyclic_distance(&self, i: usize, j: usize) -> usize {
        let l = self.edge_count();
        let d = (i + l - j % l) % l;
        d.min(l - d)
    }

    /// The sub-path made of edges `start, .., start+t-1`.
    pub fn subpath(&self, start: usize, t: usize) -> Result<LoosePath> {
        let l = self.edge_count();
        if t == 0 || t > l {
            return Err(invalid(format!("path length {t} must lie in 1..={l}")));
        }
        let s = (start % l) * (self.k - 1);
        let vs: Vec<Vertex> = (s..=s + t * (self.k - 1)).map(|x| self.at(x)).collect();
        if t == l {
            Ok(LoosePath::closed(self.k, vs))
        } else {
            LoosePath::new(self.k, vs)
        }
    }

    /// The edge `e` followed by the `t-1` edges after it.
    pub fn increasing_path(&self, e: &Edge, t: usize) -> Result<LoosePath> {
        let p = self
            .position_of(e)
            .ok_or_else(|| invalid(format!("edge {e} is not on the cycle")))?;
        self.subpath(p, t)
    }

    /// Where `path` sits on the cycle: its first edge position in the
    /// cycle's orientation and whether it is traversed forwards.
    pub fn locate(&self, path: &LoosePath) -> Option<(usize, bool)> {
        let t = path.length();
        let l = self.edge_count();
        if path.k() != self.k || t >= l {
            return None;
        }
        let first = path.edge(0);
        let p = self.position_of(&first)?;
        for (start, forward) in [(p, true), ((p + l + 1 - t) % l, false)] {
            let Ok(sub) = self.subpath(start, t) else { continue };
            let cand = if forward { sub } else { sub.reversed() };
            if cand.first() == path.first() && cand.last() == path.last() && cand.edges() == path.edges() {
                return Some((start, forward));
            }
        }
        None
    }

    /// Rotation and orientation starting at the least edge, in whichever
    /// direction gives the smaller edge sequence.
    pub fn canonical(&self) -> LooseCycle {
        let edges = self.edges();
        let l = edges.len();
        let p = (0..l).min_by(|&a, &b| edges[a].cmp(&edges[b])).expect("cycles have edges");
        let fwd: Vec<Edge> = (0..l).map(|i| edges[(p + i) % l].clone()).collect();
        let bwd: Vec<Edge> = (0..l).map(|i| edges[(p + l - i) % l].clone()).collect();
        let seq = if fwd <= bwd { fwd } else { bwd };
        LooseCycle::from_edge_sequence(self.k, &seq).expect("edges of a loose cycle")
    }

    /// Edge sequence of the canonical form; equal for equal cycles.
    pub fn canonical_key(&self) -> Vec<Edge> {
        self.canonical().edges()
    }
}

impl fmt::Display for LooseCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::io::join(&self.vertices))
    }
}

/// A tight Hamilton cycle: every `k` cyclically consecutive vertices form an edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TightCycle {
    k: usize,
    vertices: Vec<Vertex>,
}

impl TightCycle {
    pub fn validate(g: &Hypergraph, ordering: &[Vertex]) -> Result<TightCycle, CycleViolation> {
        check_ordering(g, ordering)?;
        let (n, k) = (g.n(), g.k());
        if n <= k {
            return Err(CycleViolation::TooShort { edges: n });
        }
        let c = TightCycle {
            k,
            vertices: ordering.to_vec(),
        };
        for i in 0..n {
            let e = c.edge(i);
            if !g.contains_edge(e.vertices()) {
                return Err(CycleViolation::MissingEdge {
                    position: i + 1,
                    edge: e,
                });
            }
        }
        Ok(c)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edge(&self, i: usize) -> Edge {
        let n = self.vertices.len();
        Edge::new((i..i + self.k).map(|x| self.vertices[x % n]).collect()).expect("distinct")
    }

    pub fn edges(&self) -> Vec<Edge> {
        (0..self.vertices.len()).map(|i| self.edge(i)).collect()
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn h8() -> (Hypergraph, LooseCycle) {
        let g = Hypergraph::new(8, 3, vec![vec![0, 1, 2], vec![2, 3, 4], vec![4, 5, 6], vec![6, 7, 0]]).unwrap();
        let c = LooseCycle::validate(&g, &[0, 1, 2, 3, 4, 5, 6, 7]).unwrap();
        (g, c)
    }

    fn edge(v: &[usize]) -> Edge {
        Edge::new(v.to_vec()).unwrap()
    }

    #[test]
    fn validation_messages() {
        let (g, c) = h8();
        assert_eq!(c.edges(), vec![edge(&[0, 1, 2]), edge(&[2, 3, 4]), edge(&[4, 5, 6]), edge(&[0, 6, 7])]);
        let g2 = g.filter_edges(|_, e| e != &edge(&[2, 3, 4]));
        let err = LooseCycle::validate(&g2, &[0, 1, 2, 3, 4, 5, 6, 7]).unwrap_err();
        assert!(err.to_string().starts_with("missing edge at position 2"));
        let g7 = Hypergraph::complete(7, 3);
        assert!(matches!(
            LooseCycle::validate(&g7, &[0, 1, 2, 3, 4, 5, 6]),
            Err(CycleViolation::Divisibility { .. })
        ));
        assert!(matches!(
            LooseCycle::validate(&g, &[0, 1, 2, 3, 4, 5, 6, 6]),
            Err(CycleViolation::RepeatedVertex { vertex: 6 })
        ));
        assert!(matches!(
            LooseCycle::validate(&g, &[0, 1, 2]),
            Err(CycleViolation::WrongVertexCount { .. })
        ));
    }

    #[test]
    fn increasing_paths() {
        let (_, c) = h8();
        assert_eq!(c.increasing_path(&edge(&[0, 1, 2]), 2).unwrap().vertices(), &[0, 1, 2, 3, 4]);
        assert_eq!(c.increasing_path(&edge(&[0, 6, 7]), 2).unwrap().vertices(), &[6, 7, 0, 1, 2]);
        assert!(c.increasing_path(&edge(&[0, 1, 2]), 5).is_err());
        assert!(c.increasing_path(&edge(&[1, 2, 3]), 1).is_err());
        let full = c.increasing_path(&edge(&[2, 3, 4]), 4).unwrap();
        assert!(full.is_closed());
    }

    #[test]
    fn canonical_form() {
        let (g, c) = h8();
        let other = LooseCycle::validate(&g, &[4, 3, 2, 1, 0, 7, 6, 5]).unwrap();
        assert_eq!(c.canonical(), other.canonical());
        assert_eq!(c.canonical().vertices(), &[2, 1, 0, 7, 6, 5, 4, 3]);
    }

    #[test]
    fn locating_subpaths() {
        let (_, c) = h8();
        let p = LoosePath::new(3, vec![2, 3, 4, 5, 6]).unwrap();
        assert_eq!(c.locate(&p), Some((1, true)));
        assert_eq!(c.locate(&p.reversed()), Some((1, false)));
        let bad = LoosePath::new(3, vec![3, 2, 4]).unwrap();
        assert_eq!(c.locate(&bad), None);
    }

    #[test]
    fn tight_cycles() {
        let g = Hypergraph::complete(5, 3);
        let c = TightCycle::validate(&g, &[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(c.edges().len(), 5);
        let g2 = g.filter_edges(|_, e| e != &edge(&[0, 1, 4]));
        assert!(TightCycle::validate(&g2, &[0, 1, 2, 3, 4]).is_err());
    }

    proptest! {
        #[test]
        fn full_traversal_visits_every_edge_once(l in 3usize..9, k in 2usize..5, start in 0usize..9) {
            let n = l * (k - 1);
            let g = Hypergraph::complete(n, k);
            let order: Vec<usize> = (0..n).collect();
            let c = LooseCycle::validate(&g, &order).unwrap();
            let e = c.edge(start);
            let p = c.increasing_path(&e, l).unwrap();
            let mut got = p.edges();
            let mut want = c.edges();
            got.sort();
            want.sort();
            prop_assert_eq!(got, want);
        }

        #[test]
        fn canonical_is_invariant(l in 3usize..8, rot in 0usize..8, rev in any::<bool>()) {
            let k = 3;
            let n = l * (k - 1);
            let g = Hypergraph::complete(n, k);
            let mut order: Vec<usize> = (0..n).collect();
            let c = LooseCycle::validate(&g, &order).unwrap();
            order.rotate_left((rot % l) * (k - 1));
            if rev {
                order.reverse();
                order.rotate_right(1);
            }
            let d = LooseCycle::validate(&g, &order).unwrap();
            prop_assert_eq!(c.canonical(), d.canonical());
            let cc = c.canonical();
            prop_assert_eq!(cc.canonical(), cc.clone());
        }
    }
}
