//! Finite k-uniform hypergraphs on the vertex set `{0, .., n-1}` and their
//! degree statistics.

use std::borrow::Borrow;
use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub type Vertex = usize;

/// A set of vertices stored in ascending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Edge(Vec<Vertex>);

impl Edge {
    /// Sorts the vertices; rejects repeats.
    pub fn new(mut vertices: Vec<Vertex>) -> Result<Edge> {
        vertices.sort_unstable();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(invalid(format!("vertex {} repeated in edge", w[0])));
        }
        Ok(Edge(vertices))
    }

    pub(crate) fn from_sorted(vertices: Vec<Vertex>) -> Edge {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Edge(vertices)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn contains_all(&self, s: &[Vertex]) -> bool {
        s.iter().all(|&v| self.contains(v))
    }

    pub fn intersection_size(&self, other: &Edge) -> usize {
        self.0.iter().filter(|&&v| other.contains(v)).count()
    }

    pub fn is_disjoint(&self, other: &Edge) -> bool {
        self.intersection_size(other) == 0
    }

    /// Bitmask of the vertices; all vertices must be below 64.
    pub fn mask(&self) -> u64 {
        self.0.iter().fold(0u64, |m, &v| m | (1u64 << v))
    }
}

impl Borrow<[Vertex]> for Edge {
    fn borrow(&self) -> &[Vertex] {
        &self.0
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().join(","))
    }
}

/// A k-uniform hypergraph. Edges keep their insertion order, which is the
/// order colourings refer to.
#[derive(Clone, Debug)]
pub struct Hypergraph {
    n: usize,
    k: usize,
    edges: Vec<Edge>,
    index: HashMap<Edge, usize>,
}

impl Hypergraph {
    pub fn new<I>(n: usize, k: usize, edges: I) -> Result<Hypergraph>
    where
        I: IntoIterator<Item = Vec<Vertex>>,
    {
        if k == 0 {
            return Err(invalid("uniformity k must be positive"));
        }
        let mut g = Hypergraph::empty(n, k);
        for raw in edges {
            g.push_edge(raw)?;
        }
        Ok(g)
    }

    pub fn empty(n: usize, k: usize) -> Hypergraph {
        Hypergraph {
            n,
            k,
            edges: Vec::new(),
            index: HashMap::new(),
        }
    }

    /// The complete k-graph with edges in lexicographic order.
    pub fn complete(n: usize, k: usize) -> Hypergraph {
        let mut g = Hypergraph::empty(n, k);
        for c in (0..n).combinations(k) {
            let e = Edge::from_sorted(c);
            g.index.insert(e.clone(), g.edges.len());
            g.edges.push(e);
        }
        g
    }

    /// Adds an edge and returns its id.
    pub fn push_edge(&mut self, raw: Vec<Vertex>) -> Result<usize> {
        if raw.len() != self.k {
            return Err(invalid(format!(
                "edge has {} vertices, expected {}",
                raw.len(),
                self.k
            )));
        }
        if let Some(&v) = raw.iter().find(|&&v| v >= self.n) {
            return Err(invalid(format!("vertex {v} out of range 0..{}", self.n)));
        }
        let e = Edge::new(raw)?;
        if self.index.contains_key(&e) {
            return Err(invalid(format!("duplicate edge {e}")));
        }
        let id = self.edges.len();
        self.index.insert(e.clone(), id);
        self.edges.push(e);
        Ok(id)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id]
    }

    /// Id of the edge with exactly these vertices (in any order).
    pub fn edge_id(&self, vertices: &[Vertex]) -> Option<usize> {
        if vertices.windows(2).all(|w| w[0] < w[1]) {
            return self.index.get(vertices).copied();
        }
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        self.index.get(sorted.as_slice()).copied()
    }

    pub fn contains_edge(&self, vertices: &[Vertex]) -> bool {
        self.edge_id(vertices).is_some()
    }

    fn checked_set(&self, s: &[Vertex], what: &str) -> Result<Vec<Vertex>> {
        let mut sorted = s.to_vec();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(invalid(format!("vertex {} repeated in {what}", w[0])));
        }
        if let Some(&v) = sorted.iter().find(|&&v| v >= self.n) {
            return Err(invalid(format!("vertex {v} of {what} out of range 0..{}", self.n)));
        }
        Ok(sorted)
    }

    /// Number of edges containing `s`.
    pub fn degree(&self, s: &[Vertex]) -> Result<usize> {
        let s = self.checked_set(s, "S")?;
        if s.len() > self.k {
            return Err(invalid(format!("|S| = {} exceeds k = {}", s.len(), self.k)));
        }
        Ok(self.edges.iter().filter(|e| e.contains_all(&s)).count())
    }

    /// Number of edges `e` with `s ⊆ e` and `e \ s ⊆ w`.
    pub fn relative_degree(&self, s: &[Vertex], w: &[Vertex]) -> Result<usize> {
        let s = self.checked_set(s, "S")?;
        let w = self.checked_set(w, "W")?;
        if s.len() > self.k {
            return Err(invalid(format!("|S| = {} exceeds k = {}", s.len(), self.k)));
        }
        let mut in_w = vec![false; self.n];
        for &v in &w {
            in_w[v] = true;
        }
        Ok(self
            .edges
            .iter()
            .filter(|e| {
                e.contains_all(&s)
                    && e.vertices()
                        .iter()
                        .all(|&v| in_w[v] || s.binary_search(&v).is_ok())
            })
            .count())
    }

    /// Minimum of `degree(S)` over all j-subsets `S` of the vertex set.
    pub fn min_j_degree(&self, j: usize) -> Result<usize> {
        if j == 0 || j >= self.k {
            return Err(invalid(format!("j = {j} must lie in 1..k-1 with k = {}", self.k)));
        }
        if self.n < j {
            return Err(invalid(format!("n = {} is smaller than j = {j}", self.n)));
        }
        let mut counts: HashMap<Vec<Vertex>, usize> = HashMap::new();
        for e in &self.edges {
            for s in e.vertices().iter().copied().combinations(j) {
                *counts.entry(s).or_insert(0) += 1;
            }
        }
        if (counts.len() as u128) < binomial(self.n as u64, j as u64) {
            return Ok(0);
        }
        Ok(counts.values().copied().min().unwrap_or(0))
    }

    /// The sub-hypergraph induced on `w`, relabelled to `0..|w|` in the
    /// order given; the second component maps new labels to old.
    pub fn induced(&self, w: &[Vertex]) -> Result<(Hypergraph, Vec<Vertex>)> {
        self.checked_set(w, "W")?;
        let mut new_label = vec![usize::MAX; self.n];
        for (i, &v) in w.iter().enumerate() {
            new_label[v] = i;
        }
        let mut g = Hypergraph::empty(w.len(), self.k);
        for e in &self.edges {
            if e.vertices().iter().all(|&v| new_label[v] != usize::MAX) {
                let mut r: Vec<Vertex> = e.vertices().iter().map(|&v| new_label[v]).collect();
                r.sort_unstable();
                let e2 = Edge::from_sorted(r);
                g.index.insert(e2.clone(), g.edges.len());
                g.edges.push(e2);
            }
        }
        Ok((g, w.to_vec()))
    }

    /// Edges lying entirely inside the vertex set marked by `inside`.
    pub fn edges_within<'a>(&'a self, inside: &'a [bool]) -> impl Iterator<Item = (usize, &'a Edge)> + 'a {
        self.edges
            .iter()
            .enumerate()
            .filter(move |(_, e)| e.vertices().iter().all(|&v| inside[v]))
    }

    /// Keeps the edges accepted by `keep`, preserving order.
    pub fn filter_edges(&self, mut keep: impl FnMut(usize, &Edge) -> bool) -> Hypergraph {
        let mut g = Hypergraph::empty(self.n, self.k);
        for (id, e) in self.edges.iter().enumerate() {
            if keep(id, e) {
                g.index.insert(e.clone(), g.edges.len());
                g.edges.push(e.clone());
            }
        }
        g
    }
}

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: u64, r: u64) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(x) => x / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Membership vector of length `n` for the given vertices.
pub fn membership(n: usize, vertices: impl IntoIterator<Item = Vertex>) -> Vec<bool> {
    let mut m = vec![false; n];
    for v in vertices {
        m[v] = true;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn degrees_in_complete_graphs() {
        let k5 = Hypergraph::complete(5, 3);
        assert_eq!(k5.degree(&[0, 1]).unwrap(), 3);
        assert_eq!(k5.degree(&[0]).unwrap(), 6);
        assert_eq!(k5.relative_degree(&[0], &[1, 2, 3]).unwrap(), 3);
        let k6 = Hypergraph::complete(6, 3);
        assert_eq!(k6.relative_degree(&[0, 1], &[2, 3]).unwrap(), 2);
        assert_eq!(k6.relative_degree(&[0], &[]).unwrap(), 0);
        assert_eq!(k6.min_j_degree(2).unwrap(), 4);
    }

    #[test]
    fn rejects_bad_sets() {
        let k5 = Hypergraph::complete(5, 3);
        assert!(k5.degree(&[0, 7]).is_err());
        assert!(k5.degree(&[0, 0]).is_err());
        assert!(k5.degree(&[0, 1, 2, 3]).is_err());
        assert!(k5.min_j_degree(3).is_err());
        assert!(k5.min_j_degree(0).is_err());
    }

    #[test]
    fn edge_validation() {
        assert!(Hypergraph::new(4, 3, vec![vec![0, 1, 1]]).is_err());
        assert!(Hypergraph::new(4, 3, vec![vec![0, 1, 4]]).is_err());
        assert!(Hypergraph::new(4, 3, vec![vec![0, 1]]).is_err());
        assert!(Hypergraph::new(4, 3, vec![vec![0, 1, 2], vec![2, 1, 0]]).is_err());
        let g = Hypergraph::new(4, 3, vec![vec![2, 1, 0]]).unwrap();
        assert_eq!(g.edge_id(&[1, 0, 2]), Some(0));
    }

    #[test]
    fn induced_relabels() {
        let g = Hypergraph::complete(6, 3);
        let (h, map) = g.induced(&[5, 1, 3]).unwrap();
        assert_eq!(h.edge_count(), 1);
        assert_eq!(map, vec![5, 1, 3]);
        assert!(h.contains_edge(&[0, 1, 2]));
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(3, 5), 0);
        assert!(binomial(200, 100) > 0);
    }

    fn random_graph() -> impl Strategy<Value = Hypergraph> {
        (4usize..8, 2usize..4).prop_flat_map(|(n, k)| {
            let all: Vec<Vec<usize>> = (0..n).combinations(k).collect();
            let len = all.len();
            proptest::collection::vec(any::<bool>(), len).prop_map(move |keep| {
                let chosen = all.iter().zip(keep).filter(|(_, b)| *b).map(|(e, _)| e.clone());
                Hypergraph::new(n, k, chosen).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn double_counting(g in random_graph(), seed in 0usize..1000) {
            let n = g.n();
            let k = g.k();
            let size = seed % k;
            let s: Vec<usize> = (0..n).filter(|v| (seed >> v) & 1 == 1).take(size).collect();
            let lhs = g.degree(&s).unwrap() * (k - s.len());
            let mut rhs = 0;
            for v in (0..n).filter(|v| !s.contains(v)) {
                let mut sv = s.clone();
                sv.push(v);
                let rest: Vec<usize> = (0..n).filter(|u| !sv.contains(u)).collect();
                rhs += g.relative_degree(&sv, &rest).unwrap();
            }
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn relative_degree_bounded_by_degree(g in random_graph(), mask in 0u64..256) {
            let n = g.n();
            let w: Vec<usize> = (1..n).filter(|v| (mask >> v) & 1 == 1).collect();
            prop_assert!(g.relative_degree(&[0], &w).unwrap() <= g.degree(&[0]).unwrap());
        }

        #[test]
        fn min_degree_is_a_minimum(g in random_graph()) {
            let k = g.k();
            for j in 1..k {
                let d = g.min_j_degree(j).unwrap();
                let brute = (0..g.n()).combinations(j).map(|s| g.degree(&s).unwrap()).min().unwrap();
                prop_assert_eq!(d, brute);
            }
        }
    }
}
