//! Exhaustive searches on small hypergraphs (at most 64 vertices).
//!
//! Loose Hamilton cycles are enumerated from their lexicographically least
//! edge: a cycle with least edge `e0` is grown from `e0` using only edges
//! greater than `e0`, and kept in the direction whose second edge is the
//! smaller of the two neighbours of `e0`. Every cycle is therefore produced
//! exactly once, in its canonical form.

use std::collections::{HashMap, HashSet};
use std::ops::ControlFlow;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::colouring::Colouring;
use crate::error::{invalid, Error, Result};
use crate::hypergraph::{Edge, Hypergraph, Vertex};
use crate::loose::{LooseCycle, LoosePath, TightCycle};
use crate::outcome::Outcome;
use crate::rng::{stream, Purpose};

pub use crate::digraph::{find_hamilton_dicycle, Digraph};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct EnumerationBudget {
    pub node_limit: u64,
    pub time_limit: Option<Duration>,
    /// When false, each cycle is reported in both orientations.
    pub canonical: bool,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            node_limit: 200_000_000,
            time_limit: None,
            canonical: true,
        }
    }
}

impl EnumerationBudget {
    pub fn nodes(node_limit: u64) -> Self {
        EnumerationBudget {
            node_limit,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Enumeration {
    pub cycles: Vec<LooseCycle>,
    /// False when the budget ran out; `cycles` is then a prefix.
    pub complete: bool,
    pub nodes: u64,
}

fn bit(v: Vertex) -> u64 {
    1u64 << v
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn mask_vertices(mut m: u64) -> Vec<Vertex> {
    let mut out = Vec::with_capacity(m.count_ones() as usize);
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

fn check_small(g: &Hypergraph) -> Result<()> {
    if g.n() > 64 {
        return Err(Error::Unsupported(format!(
            "exhaustive oracles handle at most 64 vertices, got {}",
            g.n()
        )));
    }
    Ok(())
}

struct Budget {
    nodes: AtomicU64,
    limit: u64,
    deadline: Option<Instant>,
    aborted: AtomicBool,
}

impl Budget {
    fn new(limit: u64, time: Option<Duration>) -> Budget {
        Budget {
            nodes: AtomicU64::new(0),
            limit,
            deadline: time.map(|d| Instant::now() + d),
            aborted: AtomicBool::new(false),
        }
    }

    fn tick(&self) -> bool {
        let c = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if c > self.limit {
            self.aborted.store(true, Ordering::Relaxed);
        } else if c & 0xfff == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() > d {
                    self.aborted.store(true, Ordering::Relaxed);
                }
            }
        }
        !self.aborted.load(Ordering::Relaxed)
    }

    fn aborted(&self) -> bool {
        self.aborted.load(Ordering::Relaxed)
    }

    fn used(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed).min(self.limit)
    }
}

/// Edges sorted lexicographically, as bitmasks, with dense colour ids.
struct LooseEngine {
    n: usize,
    k: usize,
    masks: Vec<u64>,
    incident: Vec<Vec<usize>>,
    rank_of: HashMap<u64, usize>,
    colour: Option<Vec<usize>>,
    colour_count: usize,
}

impl LooseEngine {
    fn new(g: &Hypergraph, chi: Option<&Colouring>) -> Result<LooseEngine> {
        check_small(g)?;
        let mut ids: Vec<usize> = (0..g.edge_count()).collect();
        ids.sort_by(|&a, &b| g.edge(a).cmp(g.edge(b)));
        let masks: Vec<u64> = ids.iter().map(|&id| g.edge(id).mask()).collect();
        let mut incident = vec![Vec::new(); g.n()];
        for (r, &id) in ids.iter().enumerate() {
            for &v in g.edge(id).vertices() {
                incident[v].push(r);
            }
        }
        let rank_of = masks.iter().enumerate().map(|(r, &m)| (m, r)).collect();
        let (colour, colour_count) = match chi {
            None => (None, 0),
            Some(c) => {
                let mut dense: HashMap<u64, usize> = HashMap::new();
                let cols = ids
                    .iter()
                    .map(|&id| {
                        let next = dense.len();
                        *dense.entry(c.colour(id)).or_insert(next)
                    })
                    .collect();
                (Some(cols), dense.len())
            }
        };
        Ok(LooseEngine {
            n: g.n(),
            k: g.k(),
            masks,
            incident,
            rank_of,
            colour,
            colour_count,
        })
    }

    fn shape_ok(&self) -> bool {
        self.k >= 2 && self.n.is_multiple_of(self.k - 1) && self.n / (self.k - 1) >= 3
    }

    /// Visits every cycle whose least edge has rank `r0`.
    fn run_from<F>(&self, r0: usize, canonical: bool, budget: &Budget, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[Vertex]) -> ControlFlow<()>,
    {
        let e0 = mask_vertices(self.masks[r0]);
        for &c_in in &e0 {
            for &c_out in &e0 {
                if c_in == c_out {
                    continue;
                }
                let mut w = Walk {
                    eng: self,
                    r0,
                    c_in,
                    canonical,
                    used: self.masks[r0],
                    seq: vec![c_in],
                    ranks: vec![r0],
                    colours_used: vec![false; self.colour_count],
                };
                w.seq.extend(e0.iter().copied().filter(|&v| v != c_in && v != c_out));
                w.seq.push(c_out);
                if let Some(col) = &self.colour {
                    w.colours_used[col[r0]] = true;
                }
                w.rec(c_out, budget, visit)?;
            }
        }
        ControlFlow::Continue(())
    }
}

struct Walk<'e> {
    eng: &'e LooseEngine,
    r0: usize,
    c_in: Vertex,
    canonical: bool,
    used: u64,
    seq: Vec<Vertex>,
    ranks: Vec<usize>,
    colours_used: Vec<bool>,
}

impl Walk<'_> {
    fn colour_free(&self, r: usize) -> bool {
        self.eng.colour.as_ref().is_none_or(|c| !self.colours_used[c[r]])
    }

    fn set_colour(&mut self, r: usize, on: bool) {
        if let Some(c) = &self.eng.colour {
            self.colours_used[c[r]] = on;
        }
    }

    fn rec<F>(&mut self, cur: Vertex, budget: &Budget, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[Vertex]) -> ControlFlow<()>,
    {
        if !budget.tick() {
            return ControlFlow::Break(());
        }
        let eng = self.eng;
        let free = full_mask(eng.n) & !self.used;
        let remaining = free.count_ones() as usize;
        if remaining == eng.k - 2 {
            let last = free | bit(cur) | bit(self.c_in);
            if let Some(&lr) = eng.rank_of.get(&last) {
                if lr > self.r0 && self.colour_free(lr) && (!self.canonical || self.ranks[1] < lr) {
                    let before = self.seq.len();
                    self.seq.extend(mask_vertices(free));
                    let flow = visit(&self.seq);
                    self.seq.truncate(before);
                    flow?;
                }
            }
            return ControlFlow::Continue(());
        }
        for &f in &eng.incident[cur] {
            if f <= self.r0 {
                continue;
            }
            let fm = eng.masks[f];
            if fm & self.used != bit(cur) || !self.colour_free(f) {
                continue;
            }
            self.set_colour(f, true);
            self.used |= fm;
            self.ranks.push(f);
            let rest = fm & !bit(cur);
            for x in mask_vertices(rest) {
                let before = self.seq.len();
                self.seq.extend(mask_vertices(rest & !bit(x)));
                self.seq.push(x);
                let flow = self.rec(x, budget, visit);
                self.seq.truncate(before);
                if flow.is_break() {
                    self.ranks.pop();
                    self.used &= !rest;
                    self.set_colour(f, false);
                    return flow;
                }
            }
            self.ranks.pop();
            self.used &= !rest;
            self.set_colour(f, false);
        }
        ControlFlow::Continue(())
    }
}

fn divisibility(g: &Hypergraph) -> Result<()> {
    if g.k() < 2 || !g.n().is_multiple_of(g.k() - 1) {
        return Err(invalid(format!(
            "k-1 = {} does not divide n = {}",
            g.k().saturating_sub(1),
            g.n()
        )));
    }
    Ok(())
}

/// All loose Hamilton cycles of `g`, ordered by least edge.
pub fn enumerate_loose_hamilton_cycles(g: &Hypergraph, budget: EnumerationBudget) -> Result<Enumeration> {
    divisibility(g)?;
    let eng = LooseEngine::new(g, None)?;
    let b = Budget::new(budget.node_limit, budget.time_limit);
    if !eng.shape_ok() {
        return Ok(Enumeration {
            cycles: Vec::new(),
            complete: true,
            nodes: 0,
        });
    }
    let k = g.k();
    let per_edge: Vec<Vec<LooseCycle>> = (0..eng.masks.len())
        .into_par_iter()
        .map(|r0| {
            let mut out = Vec::new();
            let _ = eng.run_from(r0, budget.canonical, &b, &mut |seq| {
                out.push(LooseCycle::from_trusted(k, seq.to_vec()));
                ControlFlow::Continue(())
            });
            out
        })
        .collect();
    Ok(Enumeration {
        cycles: per_edge.into_iter().flatten().collect(),
        complete: !b.aborted(),
        nodes: b.used(),
    })
}

fn counts_per_edge(eng: &LooseEngine, b: &Budget) -> Vec<u64> {
    (0..eng.masks.len())
        .into_par_iter()
        .map(|r0| {
            let mut c = 0u64;
            let _ = eng.run_from(r0, true, b, &mut |_| {
                c += 1;
                ControlFlow::Continue(())
            });
            c
        })
        .collect()
}

/// Number of loose Hamilton cycles; `None` when the budget ran out.
pub fn count_loose_hamilton_cycles(g: &Hypergraph, budget: EnumerationBudget) -> Result<Option<u64>> {
    divisibility(g)?;
    let eng = LooseEngine::new(g, None)?;
    if !eng.shape_ok() {
        return Ok(Some(0));
    }
    let b = Budget::new(budget.node_limit, budget.time_limit);
    let total = counts_per_edge(&eng, &b).iter().sum();
    Ok((!b.aborted()).then_some(total))
}

/// The first rainbow loose Hamilton cycle in enumeration order.
pub fn exists_rainbow_loose_hc(g: &Hypergraph, chi: &Colouring, budget: EnumerationBudget) -> Result<Outcome<LooseCycle>> {
    divisibility(g)?;
    let eng = LooseEngine::new(g, Some(chi))?;
    if !eng.shape_ok() {
        return Ok(Outcome::Absent);
    }
    let b = Budget::new(budget.node_limit, budget.time_limit);
    let k = g.k();
    let found = (0..eng.masks.len()).into_par_iter().find_map_first(|r0| {
        let mut hit = None;
        let _ = eng.run_from(r0, true, &b, &mut |seq| {
            hit = Some(LooseCycle::from_trusted(k, seq.to_vec()));
            ControlFlow::Break(())
        });
        hit
    });
    Ok(match found {
        Some(c) => Outcome::Found(c),
        None if b.aborted() => Outcome::Unknown,
        None => Outcome::Absent,
    })
}

/// A loose Hamilton cycle drawn uniformly from all of them.
pub fn uniform_random_hamilton_cycle(g: &Hypergraph, seed: u64, budget: EnumerationBudget) -> Result<Outcome<LooseCycle>> {
    let mut rng = stream(seed, Purpose::Cycle, 0);
    uniform_random_hamilton_cycle_with(g, &mut rng, budget)
}

pub fn uniform_random_hamilton_cycle_with<R: Rng>(
    g: &Hypergraph,
    rng: &mut R,
    budget: EnumerationBudget,
) -> Result<Outcome<LooseCycle>> {
    divisibility(g)?;
    let eng = LooseEngine::new(g, None)?;
    if !eng.shape_ok() {
        return Ok(Outcome::Absent);
    }
    let b = Budget::new(budget.node_limit, budget.time_limit);
    let counts = counts_per_edge(&eng, &b);
    if b.aborted() {
        return Ok(Outcome::Unknown);
    }
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Ok(Outcome::Absent);
    }
    let mut target = rng.random_range(0..total);
    let r0 = counts
        .iter()
        .position(|&c| {
            if target < c {
                true
            } else {
                target -= c;
                false
            }
        })
        .expect("target lies below the total");
    let b = Budget::new(u64::MAX, None);
    let mut seen = 0u64;
    let mut pick = None;
    let _ = eng.run_from(r0, true, &b, &mut |seq| {
        if seen == target {
            pick = Some(LooseCycle::from_trusted(g.k(), seq.to_vec()));
            return ControlFlow::Break(());
        }
        seen += 1;
        ControlFlow::Continue(())
    });
    Ok(Outcome::Found(pick.expect("bucket holds the target")))
}

/// A loose Hamilton path from `a` to `b` none of whose edges contains a
/// forbidden pair.
pub fn find_loose_hamilton_path(
    g: &Hypergraph,
    a: Vertex,
    b: Vertex,
    forbidden: &[(Vertex, Vertex)],
    node_limit: u64,
) -> Result<Outcome<LoosePath>> {
    check_small(g)?;
    let (n, k) = (g.n(), g.k());
    if a >= n || b >= n || a == b {
        return Err(invalid(format!("endpoints {a}, {b} must be distinct vertices below {n}")));
    }
    if k < 2 || (n - 1) % (k - 1) != 0 || n < k {
        return Ok(Outcome::Absent);
    }
    let mut adj = vec![0u64; n];
    for &(x, y) in forbidden {
        if x >= n || y >= n {
            return Err(invalid(format!("forbidden pair ({x}, {y}) out of range")));
        }
        adj[x] |= bit(y);
        adj[y] |= bit(x);
    }
    let mut incident: Vec<Vec<u64>> = vec![Vec::new(); n];
    for e in g.edges() {
        let m = e.mask();
        if e.vertices().iter().any(|&v| adj[v] & m != 0) {
            continue;
        }
        for &v in e.vertices() {
            incident[v].push(m);
        }
    }
    let mut s = PathSearch {
        incident,
        full: full_mask(n),
        b,
        failed: HashSet::new(),
        seq: vec![a],
        nodes: 0,
        limit: node_limit,
    };
    Ok(match s.rec(a, bit(a)) {
        Some(true) => Outcome::Found(LoosePath::new(k, s.seq)?),
        Some(false) => Outcome::Absent,
        None => Outcome::Unknown,
    })
}

struct PathSearch {
    incident: Vec<Vec<u64>>,
    full: u64,
    b: Vertex,
    failed: HashSet<(Vertex, u64)>,
    seq: Vec<Vertex>,
    nodes: u64,
    limit: u64,
}

impl PathSearch {
    fn rec(&mut self, cur: Vertex, used: u64) -> Option<bool> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return None;
        }
        if self.failed.contains(&(cur, used)) {
            return Some(false);
        }
        let edges = self.incident[cur].clone();
        for fm in edges {
            if fm & used != bit(cur) {
                continue;
            }
            let rest = fm & !bit(cur);
            let before = self.seq.len();
            if rest & bit(self.b) != 0 {
                if used | fm == self.full {
                    self.seq.extend(mask_vertices(rest & !bit(self.b)));
                    self.seq.push(self.b);
                    return Some(true);
                }
                continue;
            }
            for x in mask_vertices(rest) {
                self.seq.extend(mask_vertices(rest & !bit(x)));
                self.seq.push(x);
                if self.rec(x, used | fm)? {
                    return Some(true);
                }
                self.seq.truncate(before);
            }
        }
        self.failed.insert((cur, used));
        Some(false)
    }
}

/// A tight Hamilton cycle of a 3-graph, rainbow under `chi` when given.
/// Orderings start at vertex 0 and satisfy `v_1 < v_{n-1}`.
pub fn find_tight_hamilton_cycle(
    g: &Hypergraph,
    chi: Option<&Colouring>,
    node_limit: u64,
) -> Result<Outcome<TightCycle>> {
    check_small(g)?;
    if g.k() != 3 {
        return Err(Error::Unsupported("tight cycle search is implemented for k = 3".into()));
    }
    let n = g.n();
    if n < 4 {
        return Ok(Outcome::Absent);
    }
    let mut colour_of: HashMap<u64, usize> = HashMap::new();
    let mut dense: HashMap<u64, usize> = HashMap::new();
    for (id, e) in g.edges().iter().enumerate() {
        let c = chi.map_or(id as u64, |c| c.colour(id));
        let next = dense.len();
        let d = *dense.entry(c).or_insert(next);
        colour_of.insert(e.mask(), d);
    }
    let mut s = TightSearch {
        n,
        colour_of,
        coloured: chi.is_some(),
        used_colour: vec![false; dense.len()],
        seq: vec![0],
        failed: HashSet::new(),
        nodes: 0,
        limit: node_limit,
    };
    Ok(match s.rec(bit(0)) {
        Some(true) => Outcome::Found(
            TightCycle::validate(g, &s.seq).map_err(|e| Error::Invariant(e.to_string()))?,
        ),
        Some(false) => Outcome::Absent,
        None => Outcome::Unknown,
    })
}

/// `find_tight_hamilton_cycle` with a colouring: a rainbow witness or a
/// definitive absence.
pub fn exists_rainbow_tight_hc(g: &Hypergraph, chi: &Colouring, node_limit: u64) -> Result<Outcome<TightCycle>> {
    find_tight_hamilton_cycle(g, Some(chi), node_limit)
}

struct TightSearch {
    n: usize,
    colour_of: HashMap<u64, usize>,
    coloured: bool,
    used_colour: Vec<bool>,
    seq: Vec<Vertex>,
    failed: HashSet<(Vertex, Vertex, Vertex, u64)>,
    nodes: u64,
    limit: u64,
}

impl TightSearch {
    fn window(&self, a: Vertex, b: Vertex, c: Vertex) -> Option<usize> {
        self.colour_of.get(&(bit(a) | bit(b) | bit(c))).copied()
    }

    fn rec(&mut self, used: u64) -> Option<bool> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return None;
        }
        let len = self.seq.len();
        if len == self.n {
            let s = &self.seq;
            if s[1] > s[self.n - 1] {
                return Some(false);
            }
            let w1 = self.window(s[len - 2], s[len - 1], s[0]);
            let w2 = self.window(s[len - 1], s[0], s[1]);
            return Some(match (w1, w2) {
                (Some(x), Some(y)) => !self.coloured || (x != y && !self.used_colour[x] && !self.used_colour[y]),
                _ => false,
            });
        }
        let memo_key = (self.seq[1.min(len - 1)], self.seq[len.saturating_sub(2)], self.seq[len - 1], used);
        if !self.coloured && len >= 2 && self.failed.contains(&memo_key) {
            return Some(false);
        }
        for v in 1..self.n {
            if used & bit(v) != 0 {
                continue;
            }
            let col = if len >= 2 {
                match self.window(self.seq[len - 2], self.seq[len - 1], v) {
                    Some(c) if !self.coloured || !self.used_colour[c] => Some(c),
                    _ => continue,
                }
            } else {
                None
            };
            if let Some(c) = col {
                self.used_colour[c] = true;
            }
            self.seq.push(v);
            let r = self.rec(used | bit(v));
            if r == Some(true) {
                return r;
            }
            self.seq.pop();
            if let Some(c) = col {
                self.used_colour[c] = false;
            }
            r?;
        }
        if !self.coloured && len >= 2 {
            self.failed.insert(memo_key);
        }
        Some(false)
    }
}

/// Edges of a cycle, for callers that only need the set.
pub fn cycle_edges(c: &LooseCycle) -> Vec<Edge> {
    c.edges()
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;
    use std::collections::BTreeSet;

    fn brute_force_count(g: &Hypergraph) -> usize {
        let n = g.n();
        let mut keys = BTreeSet::new();
        for order in (0..n).permutations(n) {
            if let Ok(c) = LooseCycle::validate(g, &order) {
                keys.insert(c.canonical_key());
            }
        }
        keys.len()
    }

    #[test]
    fn counts_match_brute_force() {
        for (n, k) in [(6, 3), (8, 3), (6, 4)] {
            let g = Hypergraph::complete(n, k);
            let e = enumerate_loose_hamilton_cycles(&g, EnumerationBudget::default()).unwrap();
            assert!(e.complete);
            assert_eq!(e.cycles.len(), brute_force_count(&g), "n={n} k={k}");
            let keys: BTreeSet<_> = e.cycles.iter().map(|c| c.canonical_key()).collect();
            assert_eq!(keys.len(), e.cycles.len());
            for c in &e.cycles {
                assert!(LooseCycle::validate(&g, c.vertices()).is_ok());
                assert_eq!(c, &c.canonical());
            }
        }
    }

    #[test]
    fn sparse_graph_count() {
        let g = Hypergraph::complete(8, 3).filter_edges(|id, _| id % 3 != 0);
        let e = enumerate_loose_hamilton_cycles(&g, EnumerationBudget::default()).unwrap();
        assert_eq!(e.cycles.len(), brute_force_count(&g));
    }

    #[test]
    fn non_canonical_mode_doubles() {
        let g = Hypergraph::complete(6, 3);
        let b = EnumerationBudget {
            canonical: false,
            ..Default::default()
        };
        assert_eq!(enumerate_loose_hamilton_cycles(&g, b).unwrap().cycles.len(), 240);
        assert_eq!(count_loose_hamilton_cycles(&g, EnumerationBudget::default()).unwrap(), Some(120));
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let g = Hypergraph::complete(8, 3);
        let e = enumerate_loose_hamilton_cycles(&g, EnumerationBudget::nodes(50)).unwrap();
        assert!(!e.complete);
        assert_eq!(count_loose_hamilton_cycles(&g, EnumerationBudget::nodes(50)).unwrap(), None);
    }

    #[test]
    fn degenerate_inputs() {
        let g = Hypergraph::complete(7, 3);
        assert!(enumerate_loose_hamilton_cycles(&g, EnumerationBudget::default()).is_err());
        let g4 = Hypergraph::complete(4, 3);
        assert!(enumerate_loose_hamilton_cycles(&g4, EnumerationBudget::default()).unwrap().cycles.is_empty());
    }

    #[test]
    fn rainbow_search() {
        let g = Hypergraph::complete(6, 3);
        let mono = Colouring::new(&g, vec![0; 20]).unwrap();
        assert_eq!(exists_rainbow_loose_hc(&g, &mono, EnumerationBudget::default()).unwrap(), Outcome::Absent);
        let inj = Colouring::injective(&g);
        let c = exists_rainbow_loose_hc(&g, &inj, EnumerationBudget::default()).unwrap().into_found().unwrap();
        assert!(inj.is_rainbow(&g, &c.edges()).unwrap());
        let first = &enumerate_loose_hamilton_cycles(&g, EnumerationBudget::default()).unwrap().cycles[0];
        assert_eq!(&c, first);
    }

    #[test]
    fn hamilton_paths() {
        let g = Hypergraph::new(3, 3, vec![vec![0, 1, 2]]).unwrap();
        let p = find_loose_hamilton_path(&g, 0, 2, &[], 1000).unwrap().into_found().unwrap();
        assert_eq!(p.vertices(), &[0, 1, 2]);
        assert_eq!(find_loose_hamilton_path(&g, 0, 1, &[(0, 1)], 1000).unwrap(), Outcome::Absent);
        let k7 = Hypergraph::complete(7, 3);
        let p = find_loose_hamilton_path(&k7, 0, 1, &[], 100_000).unwrap().into_found().unwrap();
        assert_eq!(p.length(), 3);
        assert_eq!((p.first(), p.last()), (0, 1));
        p.check_in(&k7).unwrap();
        let k8 = Hypergraph::complete(8, 3);
        assert_eq!(find_loose_hamilton_path(&k8, 0, 1, &[], 1000).unwrap(), Outcome::Absent);
        assert!(find_loose_hamilton_path(&k7, 0, 0, &[], 1000).is_err());
    }

    #[test]
    fn hamilton_paths_avoid_forbidden_pairs() {
        let k9 = Hypergraph::complete(9, 3);
        let forbidden = [(2, 3), (4, 5), (6, 7), (2, 8)];
        let p = find_loose_hamilton_path(&k9, 0, 1, &forbidden, 1_000_000).unwrap().into_found().unwrap();
        for e in p.edges() {
            for &(x, y) in &forbidden {
                assert!(!(e.contains(x) && e.contains(y)));
            }
        }
    }

    #[test]
    fn uniform_sampler_returns_valid_cycles() {
        let g = Hypergraph::complete(8, 3);
        for seed in 0..5 {
            let c = uniform_random_hamilton_cycle(&g, seed, EnumerationBudget::default()).unwrap().into_found().unwrap();
            assert!(LooseCycle::validate(&g, c.vertices()).is_ok());
        }
        let a = uniform_random_hamilton_cycle(&g, 9, EnumerationBudget::default()).unwrap();
        let b = uniform_random_hamilton_cycle(&g, 9, EnumerationBudget::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn tight_cycles_in_complete_graph() {
        let g = Hypergraph::complete(6, 3);
        let c = find_tight_hamilton_cycle(&g, None, 1_000_000).unwrap().into_found().unwrap();
        assert_eq!(c.vertices(), &[0, 1, 2, 3, 4, 5]);
        let inj = Colouring::injective(&g);
        assert!(exists_rainbow_tight_hc(&g, &inj, 1_000_000).unwrap().is_found());
        let mono = Colouring::new(&g, vec![1; 20]).unwrap();
        assert_eq!(exists_rainbow_tight_hc(&g, &mono, 1_000_000).unwrap(), Outcome::Absent);
    }
}
