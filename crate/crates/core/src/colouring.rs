//! Edge colourings and rainbow checks.

use std::collections::{BTreeMap, HashMap};

use crate::error::{invalid, Result};
use crate::hypergraph::{Edge, Hypergraph};

pub type Colour = u64;

/// A colour per edge id of a fixed hypergraph.
#[derive(Clone, Debug, PartialEq)]
pub struct Colouring {
    colours: Vec<Colour>,
    classes: BTreeMap<Colour, usize>,
}

impl Colouring {
    pub fn new(g: &Hypergraph, colours: Vec<Colour>) -> Result<Colouring> {
        if colours.len() != g.edge_count() {
            return Err(invalid(format!(
                "{} colours for {} edges",
                colours.len(),
                g.edge_count()
            )));
        }
        let mut classes = BTreeMap::new();
        for &c in &colours {
            *classes.entry(c).or_insert(0) += 1;
        }
        Ok(Colouring { colours, classes })
    }

    /// Every edge gets its own colour (its id).
    pub fn injective(g: &Hypergraph) -> Colouring {
        Colouring::new(g, (0..g.edge_count() as Colour).collect()).expect("lengths agree")
    }

    pub fn from_fn(g: &Hypergraph, f: impl FnMut(&Edge) -> Colour) -> Colouring {
        Colouring::new(g, g.edges().iter().map(f).collect()).expect("lengths agree")
    }

    pub fn colours(&self) -> &[Colour] {
        &self.colours
    }

    pub fn colour(&self, edge_id: usize) -> Colour {
        self.colours[edge_id]
    }

    pub fn colour_of(&self, g: &Hypergraph, e: &Edge) -> Result<Colour> {
        g.edge_id(e.vertices())
            .map(|id| self.colours[id])
            .ok_or_else(|| invalid(format!("edge {e} is not in the host hypergraph")))
    }

    pub fn class_sizes(&self) -> &BTreeMap<Colour, usize> {
        &self.classes
    }

    pub fn max_class_size(&self) -> usize {
        self.classes.values().copied().max().unwrap_or(0)
    }

    /// Whether every colour class has at most `mu * n^(k-1)` edges.
    pub fn check_global_bound(&self, mu: f64, n: usize, k: usize) -> Result<bool> {
        if mu <= 0.0 || !mu.is_finite() {
            return Err(invalid(format!("mu = {mu} must be positive")));
        }
        let bound = mu * (n as f64).powi(k as i32 - 1);
        Ok(self.classes.values().all(|&s| s as f64 <= bound))
    }

    /// Whether the edges of `f` (taken as a set) have pairwise distinct colours.
    pub fn is_rainbow(&self, g: &Hypergraph, f: &[Edge]) -> Result<bool> {
        Ok(self.shares_colour(g, f, f)?.is_empty())
    }

    /// All pairs `(e, f)` in `f1 x f2` with `e != f` and equal colours.
    pub fn shares_colour(&self, g: &Hypergraph, f1: &[Edge], f2: &[Edge]) -> Result<Vec<(Edge, Edge)>> {
        let mut by_colour: HashMap<Colour, Vec<&Edge>> = HashMap::new();
        let mut seen = std::collections::HashSet::new();
        for f in f2 {
            let c = self.colour_of(g, f)?;
            if seen.insert(f) {
                by_colour.entry(c).or_default().push(f);
            }
        }
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for e in f1 {
            let c = self.colour_of(g, e)?;
            if !seen.insert(e) {
                continue;
            }
            for &f in by_colour.get(&c).map(Vec::as_slice).unwrap_or(&[]) {
                if f != e {
                    out.push((e.clone(), f.clone()));
                }
            }
        }
        Ok(out)
    }
}
