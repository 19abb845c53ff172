//! Fixtures shared by the benchmarks.

use rainbow_core::rng::{stream, Purpose};
use rainbow_core::{Colour, Colouring, Hypergraph, LooseCycle, Vertex};
use rand::seq::SliceRandom;

/// Random colouring in which every class has at most two edges.
pub fn paired_colouring(g: &Hypergraph, seed: u64) -> Colouring {
    let mut ids: Vec<usize> = (0..g.edge_count()).collect();
    ids.shuffle(&mut stream(seed, Purpose::Test, 0));
    let mut colours = vec![0; g.edge_count()];
    for (rank, id) in ids.into_iter().enumerate() {
        colours[id] = (rank / 2) as Colour;
    }
    Colouring::new(g, colours).expect("one colour per edge")
}

/// The cycle visiting vertices in increasing order.
pub fn identity_cycle(g: &Hypergraph) -> LooseCycle {
    let order: Vec<Vertex> = (0..g.n()).collect();
    LooseCycle::validate(g, &order).expect("complete hosts contain it")
}
