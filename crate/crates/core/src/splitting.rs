//! Splittings of a loose Hamilton cycle, reroutings, transverse partitions,
//! switchings and the predicates built on them.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use itertools::Itertools;
use serde::Serialize;

use crate::colouring::{Colour, Colouring};
use crate::error::{invalid, Result};
use crate::hypergraph::{membership, Edge, Hypergraph, Vertex};
use crate::loose::{LooseCycle, LoosePath};
use crate::outcome::Outcome;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LengthMode {
    /// Every path has length exactly `t`.
    Balanced(usize),
    /// Every path has length at most `t`.
    Bounded(usize),
}

impl LengthMode {
    fn admits(self, len: usize) -> bool {
        match self {
            LengthMode::Balanced(t) => len == t,
            LengthMode::Bounded(t) => len <= t,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "kebab-case")]
pub enum SplittingViolation {
    UniformityTooSmall { k: usize },
    Empty,
    NotASubpath { path: usize },
    Length { path: usize, length: usize, mode: LengthMode },
    Overlap { first: usize, second: usize, vertex: Vertex },
}

impl fmt::Display for SplittingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplittingViolation::UniformityTooSmall { k } => {
                write!(f, "splittings need k >= 3, got k = {k}")
            }
            SplittingViolation::Empty => write!(f, "a splitting needs at least one path"),
            SplittingViolation::NotASubpath { path } => write!(f, "path {path} is not a sub-path of the cycle"),
            SplittingViolation::Length { path, length, mode } => {
                write!(f, "path {path} has length {length}, violating {mode:?}")
            }
            SplittingViolation::Overlap { first, second, vertex } => {
                write!(f, "paths {first} and {second} share vertex {vertex}")
            }
        }
    }
}

impl std::error::Error for SplittingViolation {}

/// Vertex-disjoint sub-paths of a host loose Hamilton cycle. Path 0 plays
/// the role of the distinguished path `P_0`.
#[derive(Clone, Debug)]
pub struct Splitting {
    host: LooseCycle,
    paths: Vec<LoosePath>,
    starts: Vec<usize>,
    entries: Vec<Vertex>,
    exits: Vec<Vertex>,
    path_of: HashMap<Vertex, usize>,
}

pub fn validate_splitting(
    host: &LooseCycle,
    paths: Vec<LoosePath>,
    mode: LengthMode,
) -> Result<Splitting, SplittingViolation> {
    if host.k() < 3 {
        return Err(SplittingViolation::UniformityTooSmall { k: host.k() });
    }
    if paths.is_empty() {
        return Err(SplittingViolation::Empty);
    }
    let mut starts = Vec::with_capacity(paths.len());
    let mut entries = Vec::with_capacity(paths.len());
    let mut exits = Vec::with_capacity(paths.len());
    let mut path_of = HashMap::new();
    for (i, p) in paths.iter().enumerate() {
        if !mode.admits(p.length()) {
            return Err(SplittingViolation::Length {
                path: i,
                length: p.length(),
                mode,
            });
        }
        let (start, forward) = host.locate(p).ok_or(SplittingViolation::NotASubpath { path: i })?;
        starts.push(start);
        let (a, b) = if forward { (p.first(), p.last()) } else { (p.last(), p.first()) };
        entries.push(a);
        exits.push(b);
        for &v in p.vertices() {
            if let Some(j) = path_of.insert(v, i) {
                return Err(SplittingViolation::Overlap {
                    first: j,
                    second: i,
                    vertex: v,
                });
            }
        }
    }
    Ok(Splitting {
        host: host.clone(),
        paths,
        starts,
        entries,
        exits,
        path_of,
    })
}

impl Splitting {
    pub fn host(&self) -> &LooseCycle {
        &self.host
    }

    pub fn paths(&self) -> &[LoosePath] {
        &self.paths
    }

    pub fn path(&self, i: usize) -> &LoosePath {
        &self.paths[i]
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// Endvertex met first when traversing the host in its orientation.
    pub fn entry(&self, i: usize) -> Vertex {
        self.entries[i]
    }

    /// Endvertex met last when traversing the host in its orientation.
    pub fn exit(&self, i: usize) -> Vertex {
        self.exits[i]
    }

    /// Position on the host of the first edge of path `i`.
    pub fn start(&self, i: usize) -> usize {
        self.starts[i]
    }

    pub fn path_index(&self, v: Vertex) -> Option<usize> {
        self.path_of.get(&v).copied()
    }

    pub fn vertices(&self) -> BTreeSet<Vertex> {
        self.path_of.keys().copied().collect()
    }

    pub fn endvertices(&self) -> BTreeSet<Vertex> {
        self.entries.iter().chain(&self.exits).copied().collect()
    }

    pub fn interior_vertices(&self) -> BTreeSet<Vertex> {
        self.paths.iter().flat_map(|p| p.interior().iter().copied()).collect()
    }

    pub fn is_endvertex(&self, v: Vertex) -> bool {
        self.path_index(v)
            .is_some_and(|i| self.entries[i] == v || self.exits[i] == v)
    }

    /// Path indices sorted by position along the host, starting at path 0.
    pub fn cycle_order(&self) -> Vec<usize> {
        let l = self.host.edge_count();
        let s0 = self.starts[0];
        let mut order: Vec<usize> = (0..self.paths.len()).collect();
        order.sort_by_key(|&i| (self.starts[i] + l - s0) % l);
        order
    }

    /// The same paths relabelled so that their indices follow the host.
    pub fn in_cycle_order(&self) -> Splitting {
        let order = self.cycle_order();
        let paths = order.iter().map(|&i| self.paths[i].clone()).collect();
        validate_splitting(&self.host, paths, LengthMode::Bounded(usize::MAX)).expect("reordering keeps validity")
    }

    /// Endpoint pairs of the paths of the host outside the splitting, each
    /// as (exit of a path, entry of the next path).
    pub fn arcs(&self) -> Vec<(Vertex, Vertex)> {
        let order = self.cycle_order();
        (0..order.len())
            .map(|x| (self.exits[order[x]], self.entries[order[(x + 1) % order.len()]]))
            .collect()
    }

    /// Edges of the host avoiding every interior vertex of the splitting.
    pub fn outer_edges(&self) -> Vec<Edge> {
        let interior = membership(self.host.n().max(1), self.interior_vertices());
        self.host
            .edges()
            .into_iter()
            .filter(|e| e.vertices().iter().all(|&v| !interior[v]))
            .collect()
    }

    /// Whether `s` meets every path at most once; `s` must lie in `V(P)`.
    pub fn is_transverse(&self, s: &[Vertex]) -> Result<bool> {
        let mut seen = HashSet::new();
        for &v in s {
            let i = self
                .path_index(v)
                .ok_or_else(|| invalid(format!("vertex {v} is not covered by the splitting")))?;
            if !seen.insert(i) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn transverse_unchecked(&self, s: &[Vertex]) -> bool {
        let mut seen: Vec<usize> = s.iter().map(|v| self.path_of[v]).collect();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }
}

/// A pairing of the endvertices of a splitting.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rerouting {
    pairs: Vec<(Vertex, Vertex)>,
}

impl Rerouting {
    pub fn pairs(&self) -> &[(Vertex, Vertex)] {
        &self.pairs
    }

    /// The pairing `{entry_i, exit_i}`, which rebuilds the host.
    pub fn identity(sp: &Splitting) -> Rerouting {
        Rerouting::normalised((0..sp.len()).map(|i| (sp.entry(i), sp.exit(i))).collect())
    }

    fn normalised(pairs: Vec<(Vertex, Vertex)>) -> Rerouting {
        let mut pairs: Vec<(Vertex, Vertex)> = pairs.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        pairs.sort_unstable();
        Rerouting { pairs }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "kebab-case")]
pub enum ReroutingViolation {
    NotAnEndvertex { vertex: Vertex },
    PairedTwice { vertex: Vertex },
    Unpaired { vertex: Vertex },
    /// Identifying the pairs yields this many cycles instead of one.
    Cycles { count: usize },
}

impl fmt::Display for ReroutingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReroutingViolation::NotAnEndvertex { vertex } => write!(f, "vertex {vertex} is not an endvertex"),
            ReroutingViolation::PairedTwice { vertex } => write!(f, "vertex {vertex} is paired twice"),
            ReroutingViolation::Unpaired { vertex } => write!(f, "endvertex {vertex} is unpaired"),
            ReroutingViolation::Cycles { count } => write!(f, "identification yields {count} cycles"),
        }
    }
}

impl std::error::Error for ReroutingViolation {}

pub fn validate_rerouting(sp: &Splitting, pairs: &[(Vertex, Vertex)]) -> Result<Rerouting, ReroutingViolation> {
    let mut partner: HashMap<Vertex, Vertex> = HashMap::new();
    for &(a, b) in pairs {
        for (x, y) in [(a, b), (b, a)] {
            if !sp.is_endvertex(x) {
                return Err(ReroutingViolation::NotAnEndvertex { vertex: x });
            }
            if x == y || partner.insert(x, y).is_some() {
                return Err(ReroutingViolation::PairedTwice { vertex: x });
            }
        }
    }
    if let Some(&v) = sp.endvertices().iter().find(|v| !partner.contains_key(v)) {
        return Err(ReroutingViolation::Unpaired { vertex: v });
    }
    let mut arc: HashMap<Vertex, Vertex> = HashMap::new();
    for (x, y) in sp.arcs() {
        arc.insert(x, y);
        arc.insert(y, x);
    }
    let mut visited: HashSet<Vertex> = HashSet::new();
    let mut cycles = 0;
    for &start in partner.keys().sorted() {
        if visited.contains(&start) {
            continue;
        }
        cycles += 1;
        let mut v = start;
        loop {
            visited.insert(v);
            let u = partner[&v];
            visited.insert(u);
            v = arc[&u];
            if v == start {
                break;
            }
        }
    }
    if cycles != 1 {
        return Err(ReroutingViolation::Cycles { count: cycles });
    }
    Ok(Rerouting::normalised(pairs.to_vec()))
}

/// A partition of `V(P)` into parts meeting every path at most once.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransversePartition {
    parts: Vec<Vec<Vertex>>,
    #[serde(skip)]
    part_of: HashMap<Vertex, usize>,
}

impl TransversePartition {
    pub fn new(sp: &Splitting, parts: Vec<Vec<Vertex>>) -> Result<TransversePartition> {
        let mut part_of = HashMap::new();
        for (h, part) in parts.iter().enumerate() {
            if !sp.is_transverse(part)? {
                return Err(invalid(format!("part {h} meets some path twice")));
            }
            for &v in part {
                if part_of.insert(v, h).is_some() {
                    return Err(invalid(format!("vertex {v} lies in two parts")));
                }
            }
        }
        if part_of.len() != sp.vertices().len() {
            return Err(invalid("parts do not cover every vertex of the splitting"));
        }
        Ok(TransversePartition { parts, part_of })
    }

    pub fn parts(&self) -> &[Vec<Vertex>] {
        &self.parts
    }

    pub fn part_of(&self, v: Vertex) -> Option<usize> {
        self.part_of.get(&v).copied()
    }

    /// Whether each part meets each path exactly once.
    pub fn is_exact(&self, sp: &Splitting) -> bool {
        self.parts.iter().all(|p| p.len() == sp.len())
    }

    /// The vertex of path `i` in part `h`.
    pub fn vertex_in(&self, sp: &Splitting, i: usize, h: usize) -> Option<Vertex> {
        self.parts[h].iter().copied().find(|&v| sp.path_index(v) == Some(i))
    }
}

/// A switching: the host cycle `H` with its splitting, and a new cycle `H'`
/// with its splitting.
#[derive(Clone, Debug)]
pub struct Switching {
    pub p0: LoosePath,
    pub old: Splitting,
    pub new: Splitting,
}

impl Switching {
    pub fn new_cycle(&self) -> &LooseCycle {
        self.new.host()
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SwitchingReport {
    pub shape_errors: Vec<String>,
    pub condition_i: bool,
    pub only_in_old: Vec<Edge>,
    pub only_in_new: Vec<Edge>,
    pub condition_ii: bool,
    /// A path of the new splitting containing two vertices of `V(P_0)`.
    pub condition_ii_witness: Option<(usize, Vec<Vertex>)>,
}

impl SwitchingReport {
    pub fn holds(&self) -> bool {
        self.shape_errors.is_empty() && self.condition_i && self.condition_ii
    }
}

pub fn is_switching(p0: &LoosePath, old: &Splitting, new: &Splitting) -> SwitchingReport {
    let mut r = SwitchingReport::default();
    let t = p0.length();
    if old.host().n() != new.host().n() || old.host().k() != new.host().k() {
        r.shape_errors.push("the two cycles live on different vertex sets".into());
        return r;
    }
    if !old.paths().iter().all(|p| p.length() == t) {
        r.shape_errors.push(format!("the old splitting is not {t}-balanced"));
    }
    if !new.paths().iter().all(|p| p.length() <= 2 * t) {
        r.shape_errors.push(format!("the new splitting is not {}-bounded", 2 * t));
    }
    if old.len() != new.len() {
        r.shape_errors.push(format!("splittings have {} and {} paths", old.len(), new.len()));
    }
    let p0_edges: BTreeSet<Edge> = p0.edges().into_iter().collect();
    if !old.paths().iter().any(|p| p.edges().into_iter().collect::<BTreeSet<_>>() == p0_edges) {
        r.shape_errors.push("P_0 is not a path of the old splitting".into());
    }
    let a: BTreeSet<Edge> = old.outer_edges().into_iter().collect();
    let b: BTreeSet<Edge> = new.outer_edges().into_iter().collect();
    r.only_in_old = a.difference(&b).cloned().collect();
    r.only_in_new = b.difference(&a).cloned().collect();
    r.condition_i = r.only_in_old.is_empty() && r.only_in_new.is_empty();
    r.condition_ii = true;
    let mut per_path: HashMap<usize, Vec<Vertex>> = HashMap::new();
    for &v in p0.vertices() {
        match new.path_index(v) {
            Some(i) => per_path.entry(i).or_default().push(v),
            None => {
                r.condition_ii = false;
                r.condition_ii_witness = Some((usize::MAX, vec![v]));
                return r;
            }
        }
    }
    if let Some((i, vs)) = per_path.into_iter().filter(|(_, vs)| vs.len() > 1).min_by_key(|(i, _)| *i) {
        r.condition_ii = false;
        r.condition_ii_witness = Some((i, vs));
    }
    r
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct FeasibilityReport {
    /// Same-coloured pairs inside the new edges avoiding `V(P_0)`.
    pub repeated_colours: Vec<(Edge, Edge)>,
    /// A new edge sharing a colour with an untouched edge of the old cycle.
    pub shared_with_old: Vec<(Edge, Edge)>,
}

impl FeasibilityReport {
    pub fn holds(&self) -> bool {
        self.repeated_colours.is_empty() && self.shared_with_old.is_empty()
    }
}

pub fn is_feasible(sw: &Switching, g: &Hypergraph, chi: &Colouring) -> Result<FeasibilityReport> {
    let n = g.n();
    let mut inside = membership(n, sw.new.vertices());
    for &v in sw.p0.vertices() {
        inside[v] = false;
    }
    let f_new: Vec<Edge> = sw
        .new_cycle()
        .edges()
        .into_iter()
        .filter(|e| e.vertices().iter().all(|&v| inside[v]))
        .collect();
    let outer = sw.old.outer_edges();
    Ok(FeasibilityReport {
        repeated_colours: chi.shares_colour(g, &f_new, &f_new)?,
        shared_with_old: chi.shares_colour(g, &f_new, &outer)?,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Crowded {
    pub set: Vec<Vertex>,
    pub count: usize,
    pub bound: f64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SuitabilityReport {
    pub condition_i: Option<Crowded>,
    pub condition_ii: Option<(Edge, Edge)>,
    pub condition_iii: Option<(Edge, Edge)>,
}

impl SuitabilityReport {
    pub fn holds(&self) -> bool {
        self.condition_i.is_none() && self.condition_ii.is_none() && self.condition_iii.is_none()
    }
}

fn host_colours(sp: &Splitting, g: &Hypergraph, chi: &Colouring) -> Result<HashSet<Colour>> {
    sp.host().edges().iter().map(|e| chi.colour_of(g, e)).collect()
}

/// Transverse edges of `g` inside `V(P) \ V(P_0)`, grouped by colour.
fn transverse_edges_by_colour(sp: &Splitting, g: &Hypergraph, chi: &Colouring) -> Vec<Vec<Edge>> {
    let mut inside = membership(g.n(), sp.vertices());
    for &v in sp.path(0).vertices() {
        inside[v] = false;
    }
    let mut groups: HashMap<Colour, Vec<Edge>> = HashMap::new();
    for (id, e) in g.edges_within(&inside) {
        if sp.transverse_unchecked(e.vertices()) {
            groups.entry(chi.colour(id)).or_default().push(e.clone());
        }
    }
    groups.into_iter().sorted_by_key(|(c, _)| *c).map(|(_, v)| v).collect()
}

fn union_vertices(e: &Edge, f: &Edge) -> Vec<Vertex> {
    let mut u: Vec<Vertex> = e.vertices().iter().chain(f.vertices()).copied().collect();
    u.sort_unstable();
    u.dedup();
    u
}

/// Checks the three suitability conditions with `m = |P|`, stopping at the
/// first witness of each.
pub fn is_suitable(sp: &Splitting, g: &Hypergraph, chi: &Colouring, epsilon: f64) -> Result<SuitabilityReport> {
    let k = g.k();
    let m = sp.len();
    let bound = epsilon * m as f64 / 4.0;
    let hcols = host_colours(sp, g, chi)?;
    let all: Vec<Vertex> = sp.vertices().into_iter().collect();
    let rest: Vec<Vertex> = all.iter().copied().filter(|v| sp.path_index(*v) != Some(0)).collect();
    let mut report = SuitabilityReport::default();

    'outer: for s in rest.iter().copied().combinations(k - 1) {
        if !sp.transverse_unchecked(&s) {
            continue;
        }
        let mut count = 0;
        let mut e = s.clone();
        for &w in &all {
            if s.contains(&w) {
                continue;
            }
            e.push(w);
            if let Some(id) = g.edge_id(&e) {
                if hcols.contains(&chi.colour(id)) {
                    count += 1;
                }
            }
            e.pop();
        }
        if count as f64 > bound {
            report.condition_i = Some(Crowded { set: s, count, bound });
            break 'outer;
        }
    }

    for group in transverse_edges_by_colour(sp, g, chi) {
        for (e, f) in group.iter().tuple_combinations() {
            let common = e.intersection_size(f);
            if report.condition_ii.is_none() && common == 1 && sp.transverse_unchecked(&union_vertices(e, f)) {
                report.condition_ii = Some((e.clone(), f.clone()));
            }
            if report.condition_iii.is_none() && common == 0 {
                let pe: HashSet<usize> = e.vertices().iter().map(|v| sp.path_of[v]).collect();
                let shared = f.vertices().iter().filter(|v| pe.contains(&sp.path_of[*v])).count();
                if shared < 2 {
                    report.condition_iii = Some((e.clone(), f.clone()));
                }
            }
        }
    }
    Ok(report)
}

/// A pair of disjoint same-coloured edges whose union is transverse and
/// avoids `V(P_0)`.
pub fn disjoint_monochromatic_transverse(sp: &Splitting, g: &Hypergraph, chi: &Colouring) -> Option<(Edge, Edge)> {
    for group in transverse_edges_by_colour(sp, g, chi) {
        for (e, f) in group.iter().tuple_combinations() {
            if e.is_disjoint(f) && sp.transverse_unchecked(&union_vertices(e, f)) {
                return Some((e.clone(), f.clone()));
            }
        }
    }
    None
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeShortfall {
    pub part: usize,
    pub min_degree: usize,
    pub bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ViabilityReport {
    pub exact: bool,
    pub rerouting: Outcome<Rerouting>,
    pub degree_shortfalls: Vec<DegreeShortfall>,
}

impl ViabilityReport {
    pub fn holds(&self) -> bool {
        self.exact && self.rerouting.is_found() && self.degree_shortfalls.is_empty()
    }
}

pub struct ViabilityConfig {
    pub epsilon: f64,
    pub mtilde: usize,
    pub threshold: f64,
    pub j: usize,
    pub node_budget: u64,
}

pub fn is_viable(
    sp: &Splitting,
    x: &TransversePartition,
    g: &Hypergraph,
    cfg: &ViabilityConfig,
) -> Result<ViabilityReport> {
    let k = g.k();
    if cfg.j == 0 || cfg.j >= k {
        return Err(invalid(format!("j = {} must lie in 1..k-1", cfg.j)));
    }
    let m = sp.len();
    let exact = x.is_exact(sp);
    let rerouting = if exact {
        search_rerouting(sp, x, cfg.mtilde, cfg.node_budget)
    } else {
        Outcome::Absent
    };
    let bound = (cfg.threshold + cfg.epsilon / 2.0) * (m as f64).powi((k - cfg.j) as i32);
    let mut degree_shortfalls = Vec::new();
    for (h, part) in x.parts().iter().enumerate() {
        let (sub, _) = g.induced(part)?;
        let d = if sub.n() < cfg.j { 0 } else { sub.min_j_degree(cfg.j)? };
        if (d as f64) < bound {
            degree_shortfalls.push(DegreeShortfall {
                part: h,
                min_degree: d,
                bound,
            });
        }
    }
    Ok(ViabilityReport {
        exact,
        rerouting,
        degree_shortfalls,
    })
}

/// Searches for a rerouting whose pairs lie inside parts, with exactly
/// `mtilde` pairs per part.
pub fn search_rerouting(sp: &Splitting, x: &TransversePartition, mtilde: usize, node_budget: u64) -> Outcome<Rerouting> {
    let ends: Vec<Vertex> = sp.endvertices().into_iter().collect();
    let idx: HashMap<Vertex, usize> = ends.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let part: Vec<usize> = match ends.iter().map(|&v| x.part_of(v)).collect::<Option<Vec<_>>>() {
        Some(p) => p,
        None => return Outcome::Absent,
    };
    let parts = x.parts().len();
    let mut per_part = vec![0usize; parts];
    for &h in &part {
        per_part[h] += 1;
    }
    if per_part.iter().any(|&c| c != 2 * mtilde) {
        return Outcome::Absent;
    }
    let mut other_end = vec![0usize; ends.len()];
    for (a, b) in sp.arcs() {
        other_end[idx[&a]] = idx[&b];
        other_end[idx[&b]] = idx[&a];
    }
    let mut s = RerouteSearch {
        part,
        other_end,
        paired: vec![false; ends.len()],
        pairs: Vec::new(),
        nodes: 0,
        budget: node_budget,
    };
    match s.run() {
        Some(true) => Outcome::Found(Rerouting::normalised(
            s.pairs.iter().map(|&(a, b)| (ends[a], ends[b])).collect(),
        )),
        Some(false) => Outcome::Absent,
        None => Outcome::Unknown,
    }
}

struct RerouteSearch {
    part: Vec<usize>,
    other_end: Vec<usize>,
    paired: Vec<bool>,
    pairs: Vec<(usize, usize)>,
    nodes: u64,
    budget: u64,
}

impl RerouteSearch {
    /// `None` when the budget runs out.
    fn run(&mut self) -> Option<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        let Some(v) = self.paired.iter().position(|p| !p) else {
            return Some(true);
        };
        let total = self.paired.len() / 2;
        for u in v + 1..self.paired.len() {
            if self.paired[u] || self.part[u] != self.part[v] {
                continue;
            }
            let closing = self.other_end[v] == u;
            if closing && self.pairs.len() + 1 < total {
                continue;
            }
            self.paired[v] = true;
            self.paired[u] = true;
            self.pairs.push((v, u));
            let (a, b) = (self.other_end[v], self.other_end[u]);
            if !closing {
                self.other_end[a] = b;
                self.other_end[b] = a;
            }
            let r = self.run();
            if !closing {
                self.other_end[a] = v;
                self.other_end[b] = u;
            }
            match r {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            self.pairs.pop();
            self.paired[v] = false;
            self.paired[u] = false;
        }
        Some(false)
    }
}
