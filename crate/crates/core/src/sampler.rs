//! Random splittings, the bad events that spoil them, random transverse
//! partitions, and the auxiliary digraph that turns a partition into a
//! viable one.

use std::collections::{BTreeSet, HashMap};
use std::time::Instant;

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::colouring::{Colour, Colouring};
use crate::digraph::{find_hamilton_dicycle, Digraph};
use crate::error::{infeasible, invalid, Error, Result};
use crate::hypergraph::{binomial, Edge, Hypergraph, Vertex};
use crate::loose::{LooseCycle, LoosePath};
use crate::params::Parameters;
use crate::rng::{stream, Purpose};
use crate::splitting::{
    is_suitable, is_viable, validate_rerouting, validate_splitting, LengthMode, Rerouting, Splitting,
    TransversePartition, ViabilityConfig,
};

/// Pairwise closeness on a host cycle: `u` and `v` are close when some
/// edges through them lie on a common sub-path of length at most `2t+1`.
#[derive(Clone, Debug)]
pub struct Closeness {
    t: usize,
    l: usize,
    positions: Vec<Vec<usize>>,
}

impl Closeness {
    pub fn new(h: &LooseCycle, t: usize) -> Closeness {
        let mut positions = vec![Vec::new(); h.n()];
        for i in 0..h.edge_count() {
            for &v in h.edge(i).vertices() {
                positions[v].push(i);
            }
        }
        Closeness {
            t,
            l: h.edge_count(),
            positions,
        }
    }

    pub fn close(&self, u: Vertex, v: Vertex) -> bool {
        if u == v {
            return true;
        }
        let dist = |a: usize, b: usize| {
            let d = (a + self.l - b) % self.l;
            d.min(self.l - d)
        };
        self.positions[u]
            .iter()
            .any(|&a| self.positions[v].iter().any(|&b| dist(a, b) <= 2 * self.t))
    }

    pub fn close_pairs(&self, s: &[Vertex]) -> usize {
        s.iter().tuple_combinations().filter(|(&a, &b)| self.close(a, b)).count()
    }

    pub fn is_spread(&self, s: &[Vertex]) -> bool {
        s.iter().tuple_combinations().all(|(&a, &b)| !self.close(a, b))
    }
}

pub fn close(h: &LooseCycle, u: Vertex, v: Vertex, t: usize) -> bool {
    Closeness::new(h, t).close(u, v)
}

/// The edge sample `E_p` with its increasing paths.
#[derive(Clone, Debug, Serialize)]
pub struct SampledSplitting {
    pub p: f64,
    /// Host positions of the sampled edges, ascending.
    pub sampled: Vec<usize>,
    pub paths: Vec<LoosePath>,
    pub p0: LoosePath,
}

impl SampledSplitting {
    /// `P_0` followed by the sampled paths.
    pub fn paths_star(&self) -> Vec<LoosePath> {
        std::iter::once(self.p0.clone()).chain(self.paths.iter().cloned()).collect()
    }

    pub fn sampled_vertices(&self) -> BTreeSet<Vertex> {
        self.paths.iter().flat_map(|p| p.vertices().iter().copied()).collect()
    }

    pub fn star_vertices(&self) -> BTreeSet<Vertex> {
        let mut s = self.sampled_vertices();
        s.extend(self.p0.vertices());
        s
    }
}

pub fn sampling_probability(n: usize, k: usize, m: usize) -> Result<f64> {
    if m == 0 || n == 0 {
        return Err(invalid("m and n must be positive"));
    }
    let p = ((m - 1) * (k - 1)) as f64 / n as f64;
    if p > 1.0 {
        return Err(invalid(format!("sampling probability (m-1)(k-1)/n = {p} exceeds 1")));
    }
    Ok(p)
}

pub fn sample_splitting_with<R: Rng>(h: &LooseCycle, p0: &LoosePath, m: usize, t: usize, rng: &mut R) -> Result<SampledSplitting> {
    let p = sampling_probability(h.n(), h.k(), m)?;
    if h.locate(p0).is_none() {
        return Err(invalid("P_0 is not a sub-path of the host cycle"));
    }
    let sampled: Vec<usize> = (0..h.edge_count()).filter(|_| rng.random_bool(p)).collect();
    let paths = sampled.iter().map(|&i| h.subpath(i, t)).collect::<Result<_>>()?;
    Ok(SampledSplitting {
        p,
        sampled,
        paths,
        p0: p0.clone(),
    })
}

pub fn sample_splitting(h: &LooseCycle, p0: &LoosePath, m: usize, t: usize, seed: u64) -> Result<SampledSplitting> {
    sample_splitting_with(h, p0, m, t, &mut stream(seed, Purpose::Splitting, 0))
}

/// First witness of each bad event, `None` when the event does not occur.
#[derive(Clone, Debug, Default, Serialize)]
pub struct EventReport {
    /// A spread `(k-1)`-set and its count of host-coloured edges.
    pub e1: Option<(Vec<Vertex>, usize)>,
    pub e2: Option<(Edge, Edge)>,
    pub e3: Option<(Edge, Edge)>,
    /// The `j`-set attaining the minimum degree and that degree.
    pub e4: Option<(Vec<Vertex>, usize)>,
    pub e5: Option<(Vertex, Vertex)>,
}

impl EventReport {
    pub fn flags(&self) -> [bool; 5] {
        [
            self.e1.is_some(),
            self.e2.is_some(),
            self.e3.is_some(),
            self.e4.is_some(),
            self.e5.is_some(),
        ]
    }

    pub fn any(&self) -> bool {
        self.flags().iter().any(|&f| f)
    }
}

/// Evaluates the five events on a realised sample; `m` is the target
/// splitting size and `M = (t(k-1)+1) m`.
pub fn check_events(
    sample: &SampledSplitting,
    g: &Hypergraph,
    chi: &Colouring,
    h: &LooseCycle,
    params: &Parameters,
) -> Result<EventReport> {
    let k = g.k();
    let t = params.t();
    let m = params.m();
    let j = params.j();
    let eps = params.epsilon();
    let close = Closeness::new(h, t);
    let vp: Vec<Vertex> = sample.sampled_vertices().into_iter().collect();
    let vstar: Vec<Vertex> = sample.star_vertices().into_iter().collect();
    let hcols: std::collections::HashSet<Colour> = h.edges().iter().map(|e| chi.colour_of(g, e)).collect::<Result<_>>()?;
    let mut r = EventReport::default();

    let bound1 = eps * m as f64 / 4.0;
    for s in vp.iter().copied().combinations(k - 1) {
        if !close.is_spread(&s) {
            continue;
        }
        let mut e = s.clone();
        let mut count = 0;
        for &w in &vstar {
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
        if count as f64 >= bound1 {
            r.e1 = Some((s, count));
            break;
        }
    }

    let inside = crate::hypergraph::membership(g.n(), vp.iter().copied());
    let mut groups: HashMap<Colour, Vec<&Edge>> = HashMap::new();
    for (id, e) in g.edges_within(&inside) {
        groups.entry(chi.colour(id)).or_default().push(e);
    }
    for c in groups.keys().copied().sorted() {
        for (e, f) in groups[&c].iter().tuple_combinations() {
            let common = e.intersection_size(f);
            let union: Vec<Vertex> = e.vertices().iter().chain(f.vertices()).copied().sorted().dedup().collect();
            if r.e2.is_none() && common <= 1 && close.is_spread(&union) {
                r.e2 = Some(((*e).clone(), (*f).clone()));
            }
            if r.e3.is_none() && common == 0 && close.close_pairs(&union) == 1 {
                r.e3 = Some(((*e).clone(), (*f).clone()));
            }
        }
    }

    let big_m = params.splitting_vertices() as f64;
    let bound4 = (params.threshold() + 3.0 * eps / 4.0) * big_m.powi((k - j) as i32);
    let (sub, map) = g.induced(&vstar)?;
    if sub.n() < j {
        r.e4 = Some((Vec::new(), 0));
    } else {
        let mut best: Option<(Vec<Vertex>, usize)> = None;
        for s in (0..sub.n()).combinations(j) {
            let d = sub.degree(&s)?;
            if best.as_ref().is_none_or(|b| d < b.1) {
                best = Some((s.iter().map(|&v| map[v]).collect(), d));
            }
        }
        if let Some(b) = best.filter(|b| (b.1 as f64) < bound4) {
            r.e4 = Some(b);
        }
    }

    let paths = sample.paths_star();
    'e5: for (a, b) in (0..paths.len()).tuple_combinations() {
        for &u in paths[a].vertices() {
            for &v in paths[b].vertices() {
                if close.close(u, v) {
                    r.e5 = Some((u, v));
                    break 'e5;
                }
            }
        }
    }
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AcceptMode {
    /// Right size and none of the five events.
    Events,
    /// Right size, a valid splitting, and the suitability predicate.
    Structural,
}

#[derive(Clone, Debug)]
pub struct Acceptance {
    pub sized: bool,
    pub events: Option<EventReport>,
    /// The accepted splitting, in host order with `P_0` first.
    pub splitting: Option<Splitting>,
}

impl Acceptance {
    pub fn accepted(&self) -> bool {
        self.splitting.is_some()
    }
}

/// Decides whether a sample is kept. In event mode an accepted sample must
/// also pass the suitability predicate; a disagreement is an invariant error.
pub fn accept_suitable(
    sample: &SampledSplitting,
    g: &Hypergraph,
    chi: &Colouring,
    h: &LooseCycle,
    params: &Parameters,
    mode: AcceptMode,
) -> Result<Acceptance> {
    let sized = sample.sampled.len() + 1 == params.m();
    let mut out = Acceptance {
        sized,
        events: None,
        splitting: None,
    };
    if !sized {
        return Ok(out);
    }
    if mode == AcceptMode::Events {
        let ev = check_events(sample, g, chi, h, params)?;
        let bad = ev.any();
        out.events = Some(ev);
        if bad {
            return Ok(out);
        }
    }
    let sp = match validate_splitting(h, sample.paths_star(), LengthMode::Balanced(params.t())) {
        Ok(sp) => sp.in_cycle_order(),
        Err(e) if mode == AcceptMode::Events => {
            return Err(Error::Invariant(format!("event-free sample is not a splitting: {e}")))
        }
        Err(_) => return Ok(out),
    };
    let suitable = is_suitable(&sp, g, chi, params.epsilon())?;
    match (mode, suitable.holds()) {
        (_, true) => out.splitting = Some(sp),
        (AcceptMode::Events, false) => {
            return Err(Error::Invariant(format!(
                "event-free sample fails suitability: {}",
                suitability_witnesses(&suitable)
            )))
        }
        (AcceptMode::Structural, false) => {}
    }
    Ok(out)
}

fn suitability_witnesses(r: &crate::splitting::SuitabilityReport) -> String {
    format!("{:?}", (&r.condition_i, &r.condition_ii, &r.condition_iii))
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionConditions {
    pub ub_counts: Vec<usize>,
    pub ua_counts: Vec<usize>,
    pub a: bool,
    pub b: bool,
    /// `None` when not evaluated.
    pub c: Option<bool>,
}

impl PartitionConditions {
    pub fn all(&self) -> bool {
        self.a && self.b && self.c != Some(false)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionSample {
    pub parts: Vec<Vec<Vertex>>,
    pub conditions: PartitionConditions,
    pub attempts: usize,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct PartitionConfig {
    pub budget: usize,
    /// Only condition (A) is required.
    pub structural: bool,
}

impl Default for PartitionConfig {
    fn default() -> Self {
        PartitionConfig {
            budget: 1000,
            structural: false,
        }
    }
}

/// One uniform transverse partition: part `h` takes a uniformly random
/// remaining vertex from every path, the last part takes what is left.
pub fn random_transverse_partition<R: Rng>(sp: &Splitting, parts: usize, rng: &mut R) -> Vec<Vec<Vertex>> {
    let mut remaining: Vec<Vec<Vertex>> = sp.paths().iter().map(|p| p.vertices().to_vec()).collect();
    let mut out = vec![Vec::with_capacity(sp.len()); parts];
    for part in out.iter_mut().take(parts.saturating_sub(1)) {
        for rem in remaining.iter_mut() {
            let x = rng.random_range(0..rem.len());
            part.push(rem.swap_remove(x));
        }
    }
    if let Some(last) = out.last_mut() {
        for rem in remaining.iter_mut() {
            last.append(rem);
        }
    }
    for part in out.iter_mut() {
        part.sort_unstable();
    }
    out
}

pub fn partition_conditions(
    sp: &Splitting,
    parts: &[Vec<Vertex>],
    g: &Hypergraph,
    params: &Parameters,
    check_degree: bool,
) -> Result<PartitionConditions> {
    let k = g.k();
    let j = params.j();
    let m = sp.len();
    let ub: BTreeSet<Vertex> = (0..m).map(|i| sp.exit(i)).collect();
    let ua: BTreeSet<Vertex> = (0..m).map(|i| sp.entry(i)).collect();
    let ub_counts: Vec<usize> = parts.iter().map(|p| p.iter().filter(|v| ub.contains(v)).count()).collect();
    let ua_counts: Vec<usize> = parts.iter().map(|p| p.iter().filter(|v| ua.contains(v)).count()).collect();
    let a = ub_counts.iter().all(|&c| c == params.mtilde());
    let b = ua_counts.iter().all(|&c| c as f64 <= params.beta() * m as f64);
    let c = if check_degree {
        let bound = (params.threshold() + 5.0 * params.epsilon() / 8.0) * (m as f64).powi((k - j) as i32);
        let all: Vec<Vertex> = sp.vertices().into_iter().collect();
        let mut ok = true;
        'scan: for part in parts {
            for s in all.iter().copied().combinations(j) {
                if (g.relative_degree(&s, part)? as f64) < bound {
                    ok = false;
                    break 'scan;
                }
            }
        }
        Some(ok)
    } else {
        None
    };
    Ok(PartitionConditions {
        ub_counts,
        ua_counts,
        a,
        b,
        c,
    })
}

/// Resamples until (A)-(C) hold, or only (A) in structural mode.
pub fn sample_transverse_partition(
    sp: &Splitting,
    g: &Hypergraph,
    params: &Parameters,
    cfg: PartitionConfig,
    seed: u64,
    index: u64,
) -> Result<PartitionSample> {
    check_cycle_order(sp)?;
    let parts_n = params.part_count();
    if sp.paths().iter().any(|p| p.vertices().len() != parts_n) {
        return Err(invalid(format!("every path needs exactly {parts_n} vertices")));
    }
    let mut rng = stream(seed, Purpose::Partition, index);
    for attempt in 0..cfg.budget.max(1) {
        let parts = random_transverse_partition(sp, parts_n, &mut rng);
        let mut conditions = partition_conditions(sp, &parts, g, params, false)?;
        let ok = if cfg.structural {
            conditions.a
        } else if conditions.a && conditions.b {
            conditions = partition_conditions(sp, &parts, g, params, true)?;
            conditions.all()
        } else {
            false
        };
        if ok {
            return Ok(PartitionSample {
                parts,
                conditions,
                attempts: attempt + 1,
            });
        }
    }
    Err(infeasible(
        "transverse-partition",
        format!("no partition met the conditions in {} samples", cfg.budget),
    ))
}

/// `P[condition (A)]` for a uniform transverse partition, as the product
/// over `h = 1..t(k-1)` of `P[Bin(mtilde (T+1-h), 1/(T+1-h)) = mtilde]`.
pub fn condition_a_probability(t: usize, k: usize, mtilde: usize) -> f64 {
    let big_t = t * (k - 1) + 1;
    (1..big_t)
        .map(|h| {
            let r = big_t + 1 - h;
            let n = mtilde * r;
            let q = 1.0 / r as f64;
            binomial(n as u64, mtilde as u64) as f64 * q.powi(mtilde as i32) * (1.0 - q).powi((n - mtilde) as i32)
        })
        .product()
}

fn check_cycle_order(sp: &Splitting) -> Result<()> {
    if sp.cycle_order() != (0..sp.len()).collect::<Vec<_>>() {
        return Err(invalid("splitting paths must be indexed in host order starting from P_0"));
    }
    Ok(())
}

/// Arc `i -> i'` iff `i != i'` and `b_part[i] != b_part[i'-1]`.
pub fn aux_digraph_from_parts(b_part: &[usize]) -> Result<Digraph> {
    let m = b_part.len();
    let mut d = Digraph::new(m)?;
    for i in 0..m {
        for ip in 0..m {
            if i != ip && b_part[i] != b_part[(ip + m - 1) % m] {
                d.add_arc(i, ip)?;
            }
        }
    }
    Ok(d)
}

#[derive(Clone, Debug, Serialize)]
pub struct AuxDigraph {
    pub digraph: Digraph,
    /// Part of `u_b^i` for each path `i`.
    pub b_part: Vec<usize>,
}

pub fn build_aux_digraph(sp: &Splitting, y: &[Vec<Vertex>]) -> Result<AuxDigraph> {
    check_cycle_order(sp)?;
    let part_of: HashMap<Vertex, usize> = y.iter().enumerate().flat_map(|(h, p)| p.iter().map(move |&v| (v, h))).collect();
    let b_part = (0..sp.len())
        .map(|i| {
            part_of
                .get(&sp.exit(i))
                .copied()
                .ok_or_else(|| invalid(format!("endvertex {} lies in no part", sp.exit(i))))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AuxDigraph {
        digraph: aux_digraph_from_parts(&b_part)?,
        b_part,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DicycleResult {
    pub cycle: Option<Vec<usize>>,
    pub min_out: usize,
    pub min_in: usize,
    /// Both minimum semidegrees are at least `n/2`.
    pub dirac_condition: bool,
}

pub fn find_dicycle(d: &Digraph) -> DicycleResult {
    let n = d.n();
    let min_out = (0..n).map(|v| d.out_degree(v)).min().unwrap_or(0);
    let min_in = (0..n).map(|v| d.in_degree(v)).min().unwrap_or(0);
    DicycleResult {
        cycle: find_hamilton_dicycle(d),
        min_out,
        min_in,
        dirac_condition: 2 * min_out >= n && 2 * min_in >= n,
    }
}

/// The pairs `{u_a^i, u_b^{i'-1}}` for the arcs `i -> i'` of the dicycle.
pub fn rerouting_from_dicycle(sp: &Splitting, cycle: &[usize]) -> Vec<(Vertex, Vertex)> {
    let m = sp.len();
    (0..cycle.len())
        .map(|x| {
            let (i, ip) = (cycle[x], cycle[(x + 1) % cycle.len()]);
            (sp.entry(i), sp.exit((ip + m - 1) % m))
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ViableBuild {
    pub parts: Vec<Vec<Vertex>>,
    pub rerouting: Rerouting,
    pub h: Vec<usize>,
    pub w: Vec<Vertex>,
    /// `|Y_h \ X_h|` per part.
    pub moved: Vec<usize>,
}

/// Swaps `u_a^i` with `w_i` on every path to place each rerouting pair
/// inside one part.
pub fn build_viable_partition(sp: &Splitting, y: &[Vec<Vertex>], cycle: &[usize], mtilde: usize) -> Result<ViableBuild> {
    check_cycle_order(sp)?;
    let m = sp.len();
    let mut sorted = cycle.to_vec();
    sorted.sort_unstable();
    if sorted != (0..m).collect::<Vec<_>>() {
        return Err(invalid("the dicycle must visit every path index once"));
    }
    let mut part_of: HashMap<Vertex, usize> = y.iter().enumerate().flat_map(|(h, p)| p.iter().map(move |&v| (v, h))).collect();
    let ub_counts: Vec<usize> = (0..y.len())
        .map(|h| (0..m).filter(|&i| part_of.get(&sp.exit(i)) == Some(&h)).count())
        .collect();
    if ub_counts.iter().any(|&c| c != mtilde) {
        return Err(invalid(format!("condition (A) fails: exit counts per part are {ub_counts:?}")));
    }
    let pairs = rerouting_from_dicycle(sp, cycle);
    let mut succ = vec![0; m];
    for x in 0..m {
        succ[cycle[x]] = cycle[(x + 1) % m];
    }
    let original = part_of.clone();
    let mut hs = vec![0; m];
    let mut ws = vec![0; m];
    for i in 0..m {
        let ip = succ[i];
        let hi = original[&sp.exit((ip + m - 1) % m)];
        let wi = *y[hi]
            .iter()
            .find(|&&v| sp.path_index(v) == Some(i))
            .ok_or_else(|| invalid(format!("part {hi} misses path {i}")))?;
        if wi == sp.exit(i) {
            return Err(Error::Invariant(format!("w_{i} equals the exit of path {i}")));
        }
        let ha = original[&sp.entry(i)];
        part_of.insert(sp.entry(i), hi);
        part_of.insert(wi, ha);
        hs[i] = hi;
        ws[i] = wi;
    }
    let mut parts = vec![Vec::new(); y.len()];
    for (&v, &h) in &part_of {
        parts[h].push(v);
    }
    for p in parts.iter_mut() {
        p.sort_unstable();
    }
    let x = TransversePartition::new(sp, parts.clone())?;
    let rerouting = validate_rerouting(sp, &pairs).map_err(|e| Error::Invariant(format!("dicycle rerouting: {e}")))?;
    for h in 0..y.len() {
        let inside = pairs
            .iter()
            .filter(|&&(a, b)| x.part_of(a) == Some(h) && x.part_of(b) == Some(h))
            .count();
        if inside != mtilde {
            return Err(Error::Invariant(format!("part {h} holds {inside} rerouting pairs")));
        }
    }
    let ua = |h: usize| (0..m).filter(|&i| original[&sp.entry(i)] == h).count();
    let mut moved = Vec::with_capacity(y.len());
    for (h, yh) in y.iter().enumerate() {
        let lost = yh.iter().filter(|v| x.part_of(**v) != Some(h)).count();
        let ih = hs.iter().filter(|&&x| x == h).count();
        if lost > ua(h) + ih {
            return Err(Error::Invariant(format!("part {h} lost {lost} vertices, above |Y_h ∩ U_a| + |I_h|")));
        }
        moved.push(lost);
    }
    Ok(ViableBuild {
        parts,
        rerouting,
        h: hs,
        w: ws,
        moved,
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SamplerConfig {
    pub mode: AcceptMode,
    pub partition: PartitionConfig,
    pub node_budget: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            mode: AcceptMode::Events,
            partition: PartitionConfig::default(),
            node_budget: 10_000_000,
        }
    }
}

/// A splitting with a viable partition and its rerouting.
#[derive(Clone, Debug)]
pub struct ViableSplitting {
    pub splitting: Splitting,
    pub partition: TransversePartition,
    pub rerouting: Rerouting,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub sampled_edges: usize,
    pub sized: bool,
    pub events: Option<[bool; 5]>,
    pub accepted: bool,
    pub partition_attempts: Option<usize>,
    pub dicycle: Option<bool>,
    pub viable: bool,
    /// Stage at which the trial stopped, if it failed after acceptance.
    pub failure: Option<String>,
    pub micros: u128,
}

/// One pass of the pipeline with streams derived from `(seed, trial)`.
pub fn run_trial(
    g: &Hypergraph,
    chi: &Colouring,
    h: &LooseCycle,
    p0: &LoosePath,
    params: &Parameters,
    cfg: &SamplerConfig,
    seed: u64,
    trial: u64,
) -> Result<(TrialRecord, Option<ViableSplitting>)> {
    let start = Instant::now();
    let sample = sample_splitting_with(h, p0, params.m(), params.t(), &mut stream(seed, Purpose::Splitting, trial))?;
    let acc = accept_suitable(&sample, g, chi, h, params, cfg.mode)?;
    let mut rec = TrialRecord {
        trial,
        sampled_edges: sample.sampled.len(),
        sized: acc.sized,
        events: acc.events.as_ref().map(EventReport::flags),
        accepted: acc.accepted(),
        partition_attempts: None,
        dicycle: None,
        viable: false,
        failure: None,
        micros: 0,
    };
    let mut found = None;
    if let Some(sp) = acc.splitting {
        match viable_from_splitting(&sp, g, params, cfg, seed, trial, &mut rec) {
            Ok(v) => found = v,
            Err(Error::Infeasible { stage, reason }) => rec.failure = Some(format!("{stage}: {reason}")),
            Err(e) => return Err(e),
        }
    }
    rec.viable = found.is_some();
    rec.micros = start.elapsed().as_micros();
    Ok((rec, found))
}

fn viable_from_splitting(
    sp: &Splitting,
    g: &Hypergraph,
    params: &Parameters,
    cfg: &SamplerConfig,
    seed: u64,
    trial: u64,
    rec: &mut TrialRecord,
) -> Result<Option<ViableSplitting>> {
    let y = sample_transverse_partition(sp, g, params, cfg.partition, seed, trial)?;
    rec.partition_attempts = Some(y.attempts);
    let aux = build_aux_digraph(sp, &y.parts)?;
    let dc = find_dicycle(&aux.digraph);
    rec.dicycle = Some(dc.cycle.is_some());
    let Some(cycle) = dc.cycle else {
        if dc.dirac_condition {
            return Err(Error::Invariant("no Hamilton dicycle despite the degree condition".into()));
        }
        rec.failure = Some("dicycle: none".into());
        return Ok(None);
    };
    let vb = build_viable_partition(sp, &y.parts, &cycle, params.mtilde())?;
    let x = TransversePartition::new(sp, vb.parts)?;
    let report = is_viable(
        sp,
        &x,
        g,
        &ViabilityConfig {
            epsilon: params.epsilon(),
            mtilde: params.mtilde(),
            threshold: params.threshold(),
            j: params.j(),
            node_budget: cfg.node_budget,
        },
    )?;
    if !report.holds() {
        rec.failure = Some(format!("viability: {} degree shortfalls", report.degree_shortfalls.len()));
        return Ok(None);
    }
    Ok(Some(ViableSplitting {
        splitting: sp.clone(),
        partition: x,
        rerouting: vb.rerouting,
    }))
}

#[derive(Clone, Debug, Serialize)]
pub struct Estimate {
    pub trials: u64,
    pub sized: u64,
    pub accepted: u64,
    pub successes: u64,
    pub rate: f64,
    pub wilson95: (f64, f64),
}

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Monte Carlo rate of trials ending in a viable splitting, with per-trial
/// records in trial order.
pub fn estimate_suitable_fraction(
    g: &Hypergraph,
    chi: &Colouring,
    h: &LooseCycle,
    p0: &LoosePath,
    params: &Parameters,
    cfg: &SamplerConfig,
    trials: u64,
    seed: u64,
) -> Result<(Estimate, Vec<TrialRecord>)> {
    if trials == 0 {
        return Err(invalid("trials must be at least 1"));
    }
    let records: Vec<TrialRecord> = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(g, chi, h, p0, params, cfg, seed, i).map(|r| r.0))
        .collect::<Result<_>>()?;
    let count = |f: fn(&TrialRecord) -> bool| records.iter().filter(|r| f(r)).count() as u64;
    let successes = count(|r| r.viable);
    Ok((
        Estimate {
            trials,
            sized: count(|r| r.sized),
            accepted: count(|r| r.accepted),
            successes,
            rate: successes as f64 / trials as f64,
            wilson95: wilson_interval(successes, trials, 1.959_963_984_540_054),
        },
        records,
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct BinomialHit {
    pub n: u64,
    pub lambda: u64,
    pub probability: f64,
    pub bound: f64,
    pub passes: bool,
    /// `lambda <= sqrt(n)`.
    pub in_regime: bool,
}

/// Exact `P[Bin(n, p) = np]` against `1/(4 sqrt(np))`; the comparison is
/// done in integers as `16 lambda P^2 >= 1`.
pub fn exact_binomial_hit(n: u64, p: f64) -> Result<BinomialHit> {
    if !(0.0..=1.0).contains(&p) || n == 0 {
        return Err(invalid(format!("need n >= 1 and p in [0, 1], got n = {n}, p = {p}")));
    }
    let np = n as f64 * p;
    let lambda = np.round();
    if (np - lambda).abs() > 1e-9 * np.max(1.0) || lambda < 1.0 {
        return Err(invalid(format!("np = {np} is not a positive integer")));
    }
    let lambda = lambda as u64;
    let big = |x: u64| BigUint::from(x);
    let choose = (0..lambda).fold(BigUint::one(), |acc, i| acc * big(n - i) / big(i + 1));
    let num = choose * big(lambda).pow(lambda as u32) * big(n - lambda).pow((n - lambda) as u32);
    let den = big(n).pow(n as u32);
    let passes = big(16) * big(lambda) * &num * &num >= &den * &den;
    let shift = den.bits().saturating_sub(60);
    let probability = (&num >> shift).to_f64().unwrap_or(0.0) / (&den >> shift).to_f64().unwrap_or(1.0);
    Ok(BinomialHit {
        n,
        lambda,
        probability,
        bound: 1.0 / (4.0 * (lambda as f64).sqrt()),
        passes,
        in_regime: lambda * lambda <= n,
    })
}
