//! Explicit colourings: a 3-graph with no rainbow tight Hamilton cycle, and
//! the complete k-graph coloured by the first `k-1` vertices of each edge.

use crate::colouring::{Colour, Colouring};
use crate::error::{invalid, Result};
use crate::hypergraph::{binomial, Hypergraph, Vertex};

/// Rank of a sorted vertex set in the combinatorial number system; distinct
/// sets of the same size get distinct ranks independent of `n`.
pub fn subset_rank(sorted: &[Vertex]) -> Colour {
    sorted
        .iter()
        .enumerate()
        .map(|(i, &v)| binomial(v as u64, i as u64 + 1) as Colour)
        .sum()
}

/// Three near-equal parts filled in vertex order, larger parts first.
pub fn three_parts(n: usize) -> [Vec<Vertex>; 3] {
    let base = n / 3;
    let extra = n % 3;
    let mut parts: [Vec<Vertex>; 3] = Default::default();
    let mut v = 0;
    for (i, part) in parts.iter_mut().enumerate() {
        let size = base + usize::from(i < extra);
        part.extend(v..v + size);
        v += size;
    }
    parts
}

/// The triples meeting some part in exactly two vertices, each coloured by
/// that same-part pair.
pub fn tight_counterexample(n: usize) -> Result<(Hypergraph, Colouring)> {
    if n < 6 {
        return Err(invalid(format!("the construction needs n >= 6, got {n}")));
    }
    let parts = three_parts(n);
    let part_of: Vec<usize> = (0..n).map(|v| parts.iter().position(|p| p.contains(&v)).expect("parts cover")).collect();
    let mut edges = Vec::new();
    let mut colours = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let (pa, pb, pc) = (part_of[a], part_of[b], part_of[c]);
                let pair = if pa == pb && pb != pc {
                    [a, b]
                } else if pa == pc && pb != pc {
                    [a, c]
                } else if pb == pc && pa != pb {
                    [b, c]
                } else {
                    continue;
                };
                edges.push(vec![a, b, c]);
                colours.push(subset_rank(&pair));
            }
        }
    }
    let g = Hypergraph::new(n, 3, edges)?;
    let chi = Colouring::new(&g, colours)?;
    Ok((g, chi))
}

/// The complete `k`-graph with each edge coloured by its `k-1` smallest
/// vertices.
pub fn first_prefix_colouring(n: usize, k: usize) -> Result<(Hypergraph, Colouring)> {
    if k < 3 {
        return Err(invalid(format!("the prefix colouring needs k >= 3, got {k}")));
    }
    if n < k {
        return Err(invalid(format!("need n >= k, got n = {n}, k = {k}")));
    }
    let g = Hypergraph::complete(n, k);
    let chi = Colouring::from_fn(&g, |e| subset_rank(&e.vertices()[..k - 1]));
    Ok((g, chi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Edge;
    use crate::oracles::{find_tight_hamilton_cycle, EnumerationBudget};
    use itertools::Itertools;

    #[test]
    fn counterexample_small_cases() {
        let (g, chi) = tight_counterexample(6).unwrap();
        assert_eq!(g.edge_count(), 12);
        assert_eq!(chi.class_sizes().len(), 3);
        assert!(chi.class_sizes().values().all(|&s| s == 4));
        assert_eq!(g.min_j_degree(2).unwrap(), 2);
        let (g, chi) = tight_counterexample(9).unwrap();
        assert_eq!(g.min_j_degree(2).unwrap(), 4);
        assert_eq!(chi.max_class_size(), 6);
        assert!(tight_counterexample(5).is_err());
    }

    #[test]
    fn counterexample_has_no_edge_inside_a_part() {
        for n in [6, 7, 8, 9, 10] {
            let (g, chi) = tight_counterexample(n).unwrap();
            let parts = three_parts(n);
            assert!(parts.iter().all(|p| p.len() == n / 3 || p.len() == n.div_ceil(3)));
            for e in g.edges() {
                assert!(parts.iter().all(|p| !e.vertices().iter().all(|v| p.contains(v))));
                let same: Vec<Vec<Vertex>> = parts
                    .iter()
                    .map(|p| e.vertices().iter().copied().filter(|v| p.contains(v)).collect::<Vec<_>>())
                    .filter(|s| s.len() == 2)
                    .collect();
                assert_eq!(same.len(), 1);
                assert_eq!(chi.colour_of(&g, e).unwrap(), subset_rank(&same[0]));
            }
            assert!(chi.max_class_size() <= 2 * n.div_ceil(3));
        }
    }

    #[test]
    fn counterexample_has_tight_cycles() {
        let (g, _) = tight_counterexample(6).unwrap();
        let c = find_tight_hamilton_cycle(&g, None, EnumerationBudget::default().node_limit).unwrap();
        assert!(c.is_found());
    }

    #[test]
    fn prefix_colour_examples() {
        let (g, chi) = first_prefix_colouring(8, 3).unwrap();
        let e = Edge::new(vec![2, 5, 7]).unwrap();
        assert_eq!(chi.colour_of(&g, &e).unwrap(), subset_rank(&[2, 5]));
        let c01 = subset_rank(&[0, 1]);
        assert_eq!(chi.class_sizes()[&c01], 6);
        assert!(first_prefix_colouring(5, 2).is_err());
        for quad in (0..8).combinations(4) {
            let tri: Vec<Edge> = quad.iter().copied().combinations(3).map(|t| Edge::new(t).unwrap()).collect();
            assert!(!chi.is_rainbow(&g, &tri).unwrap());
        }
    }

    #[test]
    fn subset_rank_is_injective() {
        let mut seen = std::collections::HashSet::new();
        for s in (0..12).combinations(3) {
            assert!(seen.insert(subset_rank(&s)));
        }
    }
}
