//! Path tilings: vertex-disjoint loose paths covering a small hypergraph,
//! joining prescribed endpoint pairs and avoiding a conflict graph.
//!
//! The construction reserves small sets `W_i` between consecutive pairs,
//! splits the remaining vertices into parts `U_i` at random, moves one
//! vertex out of each bad part, borrows vertices from the reserves so that
//! every part has `1 mod (k-1)` vertices, and finally asks the Hamilton path
//! oracle for a path through each part.

use std::collections::BTreeSet;

use itertools::Itertools;
use rand::Rng;
use serde::Serialize;

use crate::error::{infeasible, invalid, Error, Result};
use crate::hypergraph::{Hypergraph, Vertex};
use crate::loose::LoosePath;
use crate::oracles::find_loose_hamilton_path;
use crate::outcome::Outcome;
use crate::rng::{stream, Purpose};

/// A simple graph given by adjacency sets.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConflictGraph {
    adj: Vec<BTreeSet<Vertex>>,
}

impl ConflictGraph {
    pub fn new(n: usize, edges: &[(Vertex, Vertex)]) -> Result<ConflictGraph> {
        let mut adj = vec![BTreeSet::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n || a == b {
                return Err(invalid(format!("conflict edge ({a}, {b}) is a loop or out of range")));
            }
            adj[a].insert(b);
            adj[b].insert(a);
        }
        Ok(ConflictGraph { adj })
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        self.adj[a].contains(&b)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).max().unwrap_or(0)
    }

    pub fn neighbours(&self, v: Vertex) -> &BTreeSet<Vertex> {
        &self.adj[v]
    }

    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        (0..self.adj.len())
            .flat_map(|a| self.adj[a].iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
            .collect()
    }

    /// Edges with both ends in `set`.
    pub fn edges_within(&self, set: &BTreeSet<Vertex>) -> Vec<(Vertex, Vertex)> {
        set.iter()
            .flat_map(|&a| self.adj[a].iter().filter(move |&&b| a < b && set.contains(&b)).map(move |&b| (a, b)))
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct TilingRequest {
    pub graph: Hypergraph,
    /// `(u_a^i, u_b^i)` for `i = 1..mtilde`, in order.
    pub pairs: Vec<(Vertex, Vertex)>,
    pub conflicts: ConflictGraph,
    pub t: usize,
}

impl TilingRequest {
    pub fn new(graph: Hypergraph, pairs: Vec<(Vertex, Vertex)>, conflicts: &[(Vertex, Vertex)], t: usize) -> Result<Self> {
        let n = graph.n();
        let k = graph.k();
        if k < 2 || t == 0 {
            return Err(invalid("tilings need k >= 2 and t >= 1"));
        }
        if pairs.is_empty() {
            return Err(invalid("at least one endpoint pair is required"));
        }
        let mut seen = BTreeSet::new();
        for &(a, b) in &pairs {
            if a >= n || b >= n || a == b || !seen.insert(a) || !seen.insert(b) {
                return Err(invalid(format!("pair ({a}, {b}) is degenerate, out of range or overlaps another")));
            }
        }
        let conflicts = ConflictGraph::new(n, conflicts)?;
        let cap = 2 * t * k * k;
        if conflicts.max_degree() > cap {
            return Err(invalid(format!(
                "conflict graph has maximum degree {} above 2tk^2 = {cap}",
                conflicts.max_degree()
            )));
        }
        Ok(TilingRequest { graph, pairs, conflicts, t })
    }

    pub fn mtilde(&self) -> usize {
        self.pairs.len()
    }

    fn k(&self) -> usize {
        self.graph.k()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TilingConfig {
    pub j: usize,
    pub epsilon: f64,
    pub beta: f64,
    pub threshold: f64,
    /// Skip the degree condition and tolerate bad parts the repair step
    /// cannot fix, leaving them to the path oracle.
    pub structural: bool,
    pub resample_budget: usize,
    pub node_limit: u64,
    pub seed: u64,
}

impl TilingConfig {
    pub fn new(seed: u64, structural: bool) -> TilingConfig {
        TilingConfig {
            j: 1,
            epsilon: 0.1,
            beta: 0.5,
            threshold: 0.0,
            structural,
            resample_budget: 1000,
            node_limit: 20_000_000,
            seed,
        }
    }
}

/// Lexicographically least reserve sets `W_1 .. W_{mtilde-1}` of size
/// `k-2`; the returned vector also holds the empty `W_0` and `W_mtilde`.
pub fn choose_reservoirs(req: &TilingRequest) -> Result<Vec<Vec<Vertex>>> {
    let k = req.k();
    let mt = req.mtilde();
    let b = &req.conflicts;
    let endpoints: BTreeSet<Vertex> = req.pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    let mut pool: BTreeSet<Vertex> = (0..req.graph.n()).filter(|v| !endpoints.contains(v)).collect();
    let mut reserves = vec![Vec::new(); mt + 1];
    for i in 1..mt {
        let (a0, b0) = req.pairs[i - 1];
        let (a1, b1) = req.pairs[i];
        let mut blocked: BTreeSet<Vertex> = BTreeSet::new();
        for v in [a0, b0, a1, b1].into_iter().chain(reserves[i - 1].iter().copied()) {
            blocked.extend(b.neighbours(v));
        }
        let cands: Vec<Vertex> = pool.iter().copied().filter(|v| !blocked.contains(v)).collect();
        let w = least_independent(&cands, k - 2, b).ok_or_else(|| {
            infeasible("reservoirs", format!("no independent reserve of size {} for W_{i}", k - 2))
        })?;
        for v in &w {
            pool.remove(v);
        }
        reserves[i] = w;
    }
    Ok(reserves)
}

fn least_independent(cands: &[Vertex], size: usize, b: &ConflictGraph) -> Option<Vec<Vertex>> {
    fn go(cands: &[Vertex], from: usize, size: usize, b: &ConflictGraph, acc: &mut Vec<Vertex>) -> bool {
        if acc.len() == size {
            return true;
        }
        for i in from..cands.len() {
            if cands.len() - i < size - acc.len() {
                break;
            }
            let v = cands[i];
            if acc.iter().any(|&u| b.has_edge(u, v)) {
                continue;
            }
            acc.push(v);
            if go(cands, i + 1, size, b, acc) {
                return true;
            }
            acc.pop();
        }
        false
    }
    let mut acc = Vec::with_capacity(size);
    go(cands, 0, size, b, &mut acc).then_some(acc)
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimReport {
    pub sizes: Vec<usize>,
    pub size_window: (f64, f64),
    pub sizes_ok: bool,
    /// `None` when the degree condition was skipped.
    pub degree_ok: Option<bool>,
    pub bad: Vec<usize>,
    pub very_bad: Vec<usize>,
    pub bad_limit: usize,
}

impl ClaimReport {
    fn strict_ok(&self) -> bool {
        self.sizes_ok && self.degree_ok != Some(false) && self.very_bad.is_empty() && self.bad.len() <= self.bad_limit
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimPartition {
    /// `U_1 .. U_mtilde` (zero-based).
    pub parts: Vec<Vec<Vertex>>,
    pub attempts: usize,
    pub report: ClaimReport,
}

/// `U_i ∪ {u_a^i, u_b^i} ∪ W_i ∪ W_{i-1}` for zero-based `i`.
fn augmented(req: &TilingRequest, reserves: &[Vec<Vertex>], parts: &[Vec<Vertex>], i: usize) -> BTreeSet<Vertex> {
    let (a, b) = req.pairs[i];
    let mut s: BTreeSet<Vertex> = parts[i].iter().copied().collect();
    s.insert(a);
    s.insert(b);
    s.extend(&reserves[i]);
    s.extend(&reserves[i + 1]);
    s
}

/// Conflict edges inside the augmented part other than the pair itself.
fn bad_edges(req: &TilingRequest, reserves: &[Vec<Vertex>], parts: &[Vec<Vertex>], i: usize) -> Vec<(Vertex, Vertex)> {
    let (a, b) = req.pairs[i];
    let pair = (a.min(b), a.max(b));
    req.conflicts
        .edges_within(&augmented(req, reserves, parts, i))
        .into_iter()
        .filter(|&e| e != pair)
        .collect()
}

fn is_good(req: &TilingRequest, reserves: &[Vec<Vertex>], parts: &[Vec<Vertex>], i: usize) -> bool {
    bad_edges(req, reserves, parts, i).is_empty()
}

/// Vertices of `U_i` lying on every bad edge of part `i`.
fn covering_vertices(req: &TilingRequest, reserves: &[Vec<Vertex>], parts: &[Vec<Vertex>], i: usize) -> Vec<Vertex> {
    let bad = bad_edges(req, reserves, parts, i);
    parts[i]
        .iter()
        .copied()
        .filter(|&z| bad.iter().all(|&(x, y)| x == z || y == z))
        .collect()
}

fn claim_report(req: &TilingRequest, reserves: &[Vec<Vertex>], parts: &[Vec<Vertex>], cfg: &TilingConfig, free: &[Vertex]) -> Result<ClaimReport> {
    let k = req.k();
    let t = req.t as f64;
    let mt = req.mtilde();
    let window = if cfg.structural {
        let lambda = ((req.t - 1) * (k - 1)) as f64 + (k - 2) as f64 / mt as f64;
        (lambda - cfg.beta * t - 1.0, lambda + cfg.beta * t)
    } else {
        let c = ((req.t - 1) * (k - 1)) as f64;
        (c - cfg.beta * t, c + cfg.beta * t)
    };
    let sizes: Vec<usize> = parts.iter().map(Vec::len).collect();
    let sizes_ok = sizes.iter().all(|&s| (s as f64) >= window.0 && (s as f64) <= window.1);
    let degree_ok = if cfg.structural {
        None
    } else {
        let mut ok = true;
        'scan: for i in 0..mt {
            let aug: Vec<Vertex> = augmented(req, reserves, parts, i).into_iter().collect();
            let bound = (cfg.threshold + 3.0 * cfg.epsilon / 16.0) * (aug.len() as f64).powi((k - cfg.j) as i32);
            for s in free.iter().copied().combinations(cfg.j) {
                if (req.graph.relative_degree(&s, &aug)? as f64) < bound {
                    ok = false;
                    break 'scan;
                }
            }
        }
        Some(ok)
    };
    let mut bad = Vec::new();
    let mut very_bad = Vec::new();
    for i in 0..mt {
        if !is_good(req, reserves, parts, i) {
            bad.push(i);
            if covering_vertices(req, reserves, parts, i).is_empty() {
                very_bad.push(i);
            }
        }
    }
    Ok(ClaimReport {
        sizes,
        size_window: window,
        sizes_ok,
        degree_ok,
        bad,
        very_bad,
        bad_limit: req.t.pow(3) * k.pow(3),
    })
}

/// Vertices outside the pairs and reserves.
fn free_vertices(req: &TilingRequest, reserves: &[Vec<Vertex>]) -> Vec<Vertex> {
    let mut taken: BTreeSet<Vertex> = req.pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    taken.extend(reserves.iter().flatten());
    (0..req.graph.n()).filter(|v| !taken.contains(v)).collect()
}

/// Uniform random partition of the free vertices into `mtilde` parts,
/// resampled until the claim conditions hold. In structural mode a sample
/// meeting only the size window is accepted if no sample meets all of them.
pub fn sample_claim_partition(req: &TilingRequest, reserves: &[Vec<Vertex>], cfg: &TilingConfig) -> Result<ClaimPartition> {
    let free = free_vertices(req, reserves);
    let mt = req.mtilde();
    let mut fallback: Option<ClaimPartition> = None;
    for attempt in 0..cfg.resample_budget.max(1) {
        let mut rng = stream(cfg.seed, Purpose::Claim, attempt as u64);
        let mut parts = vec![Vec::new(); mt];
        for &v in &free {
            parts[rng.random_range(0..mt)].push(v);
        }
        let report = claim_report(req, reserves, &parts, cfg, &free)?;
        let cand = ClaimPartition {
            parts,
            attempts: attempt + 1,
            report,
        };
        if cand.report.strict_ok() {
            return Ok(cand);
        }
        if cfg.structural && cand.report.sizes_ok && fallback.is_none() {
            fallback = Some(cand);
        }
    }
    fallback.ok_or_else(|| {
        infeasible(
            "claim-partition",
            format!("no partition met the claim conditions in {} samples", cfg.resample_budget),
        )
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Repair {
    pub vertex: Vertex,
    pub from: usize,
    pub to: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RepairReport {
    pub moves: Vec<Repair>,
    pub unrepaired: Vec<usize>,
}

/// Moves one vertex out of every bad part into a distinct good part that
/// stays good.
pub fn repair_bad_parts(
    req: &TilingRequest,
    reserves: &[Vec<Vertex>],
    parts: &mut [Vec<Vertex>],
    structural: bool,
) -> Result<RepairReport> {
    let mt = req.mtilde();
    let initially_good: Vec<bool> = (0..mt).map(|i| is_good(req, reserves, parts, i)).collect();
    let mut used_target = vec![false; mt];
    let mut moves = Vec::new();
    let mut unrepaired = Vec::new();
    for i in 0..mt {
        if initially_good[i] {
            continue;
        }
        let mut done = false;
        'z: for z in covering_vertices(req, reserves, parts, i) {
            for to in 0..mt {
                if to == i || !initially_good[to] || used_target[to] {
                    continue;
                }
                parts[to].push(z);
                if is_good(req, reserves, parts, to) {
                    parts[i].retain(|&v| v != z);
                    parts[to].sort_unstable();
                    used_target[to] = true;
                    moves.push(Repair { vertex: z, from: i, to });
                    done = true;
                    break 'z;
                }
                parts[to].pop();
            }
        }
        if !done {
            if !structural {
                return Err(infeasible("repair", format!("no vertex of bad part {i} can be moved")));
            }
            unrepaired.push(i);
        }
    }
    Ok(RepairReport { moves, unrepaired })
}

/// One step of the divisibility fix: for `|U'_i| = u` and `|W^-_{i-1}| = w`,
/// returns `(k_i, |W_i^+|, |V_i|)`.
pub fn divisibility_step(k: usize, u: usize, w: usize) -> (usize, usize, usize) {
    let ki = (u + w + 1) % (k - 1);
    let plus = (k - 1 - ki) % (k - 1);
    (ki, plus, u + w + 2 + plus)
}

#[derive(Clone, Debug, Serialize)]
pub struct DivisibilityReport {
    pub residues: Vec<usize>,
    pub parts: Vec<Vec<Vertex>>,
}

/// Builds `V_i = U'_i ∪ W^-_{i-1} ∪ {u_a^i, u_b^i} ∪ W_i^+`, each of size
/// `1 mod (k-1)`.
pub fn fix_divisibility(req: &TilingRequest, reserves: &[Vec<Vertex>], parts: &[Vec<Vertex>]) -> Result<DivisibilityReport> {
    let k = req.k();
    let mt = req.mtilde();
    let mut carry: Vec<Vertex> = Vec::new();
    let mut residues = Vec::with_capacity(mt);
    let mut out = Vec::with_capacity(mt);
    for i in 0..mt {
        let (ki, plus, _) = divisibility_step(k, parts[i].len(), carry.len());
        if i + 1 == mt && ki != 0 {
            return Err(infeasible(
                "divisibility",
                format!("the last part has residue {ki}; the vertex count is not mtilde mod (k-1)"),
            ));
        }
        let w = &reserves[i + 1];
        let (w_plus, w_minus) = w.split_at(plus.min(w.len()));
        let (a, b) = req.pairs[i];
        let mut v: Vec<Vertex> = parts[i].iter().chain(&carry).chain(w_plus).copied().chain([a, b]).collect();
        v.sort_unstable();
        residues.push(ki);
        out.push(v);
        carry = w_minus.to_vec();
    }
    Ok(DivisibilityReport { residues, parts: out })
}

#[derive(Clone, Debug, Serialize)]
pub struct TilingReport {
    pub reservoirs: Vec<Vec<Vertex>>,
    pub claim: ClaimPartition,
    pub repair: RepairReport,
    pub divisibility: DivisibilityReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct PathTiling {
    pub paths: Vec<LoosePath>,
    pub report: TilingReport,
}

pub fn build_path_tiling(req: &TilingRequest, cfg: &TilingConfig) -> Result<PathTiling> {
    let k = req.k();
    let reservoirs = choose_reservoirs(req)?;
    let mut claim = sample_claim_partition(req, &reservoirs, cfg)?;
    let mut parts = claim.parts.clone();
    let repair = repair_bad_parts(req, &reservoirs, &mut parts, cfg.structural)?;
    claim.parts = parts.clone();
    let divisibility = fix_divisibility(req, &reservoirs, &parts)?;
    let mut paths = Vec::with_capacity(req.mtilde());
    for (i, vi) in divisibility.parts.iter().enumerate() {
        let len = (vi.len() - 1) / (k - 1);
        if len > 2 * req.t {
            return Err(infeasible(
                "path-length",
                format!("part {i} has {} vertices, needing a path of length {len} > 2t", vi.len()),
            ));
        }
        let (sub, map) = req.graph.induced(vi)?;
        let local = |v: Vertex| map.iter().position(|&x| x == v).expect("vertex lies in the part");
        let set: BTreeSet<Vertex> = vi.iter().copied().collect();
        let forbidden: Vec<(Vertex, Vertex)> = req
            .conflicts
            .edges_within(&set)
            .into_iter()
            .map(|(x, y)| (local(x), local(y)))
            .collect();
        let (a, b) = req.pairs[i];
        match find_loose_hamilton_path(&sub, local(a), local(b), &forbidden, cfg.node_limit)? {
            Outcome::Found(p) => {
                let vs = p.vertices().iter().map(|&v| map[v]).collect();
                paths.push(LoosePath::new(k, vs)?);
            }
            Outcome::Absent => {
                return Err(infeasible(
                    "hamilton-path",
                    format!("part {i} has no loose Hamilton path from {a} to {b} avoiding the conflicts"),
                ))
            }
            Outcome::Unknown => {
                return Err(Error::Budget(format!("Hamilton path search in part {i}")));
            }
        }
    }
    Ok(PathTiling {
        paths,
        report: TilingReport {
            reservoirs,
            claim,
            repair,
            divisibility,
        },
    })
}

/// Independent check of a tiling; returns one message per violated
/// property (cover, disjointness, endpoints, length, edges, conflicts).
pub fn verify_tiling(req: &TilingRequest, paths: &[LoosePath]) -> Vec<String> {
    let mut out = Vec::new();
    let n = req.graph.n();
    let mut owner = vec![None; n];
    for (i, p) in paths.iter().enumerate() {
        for &v in p.vertices() {
            if v >= n {
                out.push(format!("path {i} uses vertex {v} outside the graph"));
            } else if let Some(j) = owner[v].replace(i) {
                out.push(format!("vertex {v} lies on paths {j} and {i}"));
            }
        }
    }
    if let Some(v) = owner.iter().position(Option::is_none) {
        out.push(format!("vertex {v} is not covered"));
    }
    if paths.len() != req.pairs.len() {
        out.push(format!("{} paths for {} pairs", paths.len(), req.pairs.len()));
    }
    for (i, (p, &(a, b))) in paths.iter().zip(&req.pairs).enumerate() {
        if (p.first(), p.last()) != (a, b) {
            out.push(format!("path {i} runs {}..{} instead of {a}..{b}", p.first(), p.last()));
        }
        if p.length() > 2 * req.t {
            out.push(format!("path {i} has length {} > 2t", p.length()));
        }
        for e in p.edges() {
            if !req.graph.contains_edge(e.vertices()) {
                out.push(format!("path {i} uses non-edge {e}"));
            }
            for (x, y) in e.vertices().iter().copied().tuple_combinations() {
                if req.conflicts.has_edge(x, y) {
                    out.push(format!("path {i} edge {e} contains conflict pair ({x}, {y})"));
                }
            }
        }
    }
    out
}
