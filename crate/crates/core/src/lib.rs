//! Rainbow loose Hamilton cycles in uniform hypergraphs: splittings,
//! switchings, path tilings, the sampling pipeline, exhaustive oracles,
//! explicit colourings and a switching-driven local search.

pub mod colouring;
pub mod constructions;
pub mod digraph;
pub mod error;
pub mod hypergraph;
pub mod io;
pub mod loose;
pub mod oracles;
pub mod outcome;
pub mod params;
pub mod rng;
pub mod sampler;
pub mod search;
pub mod splitting;
pub mod switchbuild;
pub mod tiling;

pub use colouring::{Colour, Colouring};
pub use error::{Error, Result};
pub use hypergraph::{Edge, Hypergraph, Vertex};
pub use loose::{CycleViolation, LooseCycle, LoosePath, TightCycle};
pub use outcome::Outcome;
pub use params::Parameters;
pub use search::{find_rainbow_hamilton_cycle, SearchConfig, SearchReport};
pub use splitting::{Rerouting, Splitting, Switching, TransversePartition};
