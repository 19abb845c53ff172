//! Local search for a rainbow loose Hamilton cycle driven by switchings.
//!
//! Each step picks the closest same-coloured pair of cycle edges, wraps the
//! first in a path `P_0`, and tries to apply a feasible switching built from
//! a sampled suitable splitting. Hosts too short to carry a splitting, and
//! steps where no switching is found, fall back to re-solving a short window
//! of the cycle around the conflict.

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use rand::seq::IndexedRandom;
use rand::Rng;
use serde::Serialize;

use crate::colouring::{Colour, Colouring};
use crate::error::{invalid, Error, Result};
use crate::hypergraph::{membership, Edge, Hypergraph, Vertex};
use crate::loose::{LooseCycle, LoosePath};
use crate::oracles::{uniform_random_hamilton_cycle, EnumerationBudget};
use crate::outcome::Outcome;
use crate::params::Parameters;
use crate::rng::{combine, stream, Purpose};
use crate::sampler::{run_trial, AcceptMode, PartitionConfig, SamplerConfig};
use crate::switchbuild::{build_feasible_switching, SwitchBuildConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConflictKind {
    /// The two edges share exactly one vertex.
    A,
    /// The two edges are disjoint.
    B,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Conflict {
    /// Host positions with `e < f`.
    pub e: usize,
    pub f: usize,
    pub colour: Colour,
    pub kind: ConflictKind,
    pub distance: usize,
    /// Start position of the covering length-`t` path.
    pub p0_start: usize,
    /// Whether `P_0` contains both edges.
    pub covers_both: bool,
}

/// Every same-coloured pair of edges of `h`, sorted by cyclic distance and
/// then by position.
pub fn find_conflicts(h: &LooseCycle, g: &Hypergraph, chi: &Colouring, t: usize) -> Result<Vec<Conflict>> {
    let l = h.edge_count();
    if t == 0 || t > l {
        return Err(invalid(format!("path length {t} must lie in 1..={l}")));
    }
    let edges = h.edges();
    let mut by_colour: BTreeMap<Colour, Vec<usize>> = BTreeMap::new();
    for (i, e) in edges.iter().enumerate() {
        by_colour.entry(chi.colour_of(g, e)?).or_default().push(i);
    }
    let mut out = Vec::new();
    for (&colour, positions) in &by_colour {
        for (&e, &f) in positions.iter().tuple_combinations() {
            let shared = edges[e].vertices().iter().filter(|v| edges[f].contains(**v)).count();
            let distance = h.cyclic_distance(e, f);
            let covers_both = distance < t;
            let p0_start = if covers_both && f - e != distance { f } else { e };
            out.push(Conflict {
                e,
                f,
                colour,
                kind: if shared == 0 { ConflictKind::B } else { ConflictKind::A },
                distance,
                p0_start,
                covers_both,
            });
        }
    }
    out.sort_by_key(|c| (c.distance, c.e, c.f));
    Ok(out)
}

/// Number of unordered same-coloured edge pairs on `h`.
pub fn conflict_count(h: &LooseCycle, g: &Hypergraph, chi: &Colouring) -> Result<usize> {
    let mut counts: HashMap<Colour, usize> = HashMap::new();
    for e in h.edges() {
        *counts.entry(chi.colour_of(g, &e)?).or_default() += 1;
    }
    Ok(counts.values().map(|&c| c * (c - 1) / 2).sum())
}

/// Same-coloured pairs on `h` with neither edge meeting `avoid`.
fn conflicts_avoiding(h: &LooseCycle, g: &Hypergraph, chi: &Colouring, avoid: &[Vertex]) -> Result<usize> {
    let mask = membership(g.n(), avoid.iter().copied());
    let kept: Vec<Edge> = h
        .edges()
        .into_iter()
        .filter(|e| e.vertices().iter().all(|&v| !mask[v]))
        .collect();
    Ok(chi.shares_colour(g, &kept, &kept)?.len() / 2)
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchConfig {
    pub max_steps: usize,
    /// Sampler trials per step before falling back to a window move.
    pub trials_per_step: u64,
    /// Edges in the fallback window; `None` picks the largest window whose
    /// interior has at most eight vertices.
    pub window: Option<usize>,
    pub sampler: SamplerConfig,
    pub node_limit: u64,
    pub cycle_budget: EnumerationBudget,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_steps: 500,
            trials_per_step: 32,
            window: None,
            sampler: SamplerConfig {
                mode: AcceptMode::Structural,
                partition: PartitionConfig {
                    budget: 200,
                    structural: true,
                },
                node_budget: 1_000_000,
            },
            node_limit: 2_000_000,
            cycle_budget: EnumerationBudget::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MoveKind {
    Switching,
    Window,
    /// Neither move was applicable.
    Stuck,
}

#[derive(Clone, Debug, Serialize)]
pub struct StepLog {
    pub step: usize,
    pub conflicts: usize,
    pub target: Conflict,
    pub kind: MoveKind,
    pub trials: u64,
    pub viable: u64,
    pub conflicts_after: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub success: bool,
    /// The rainbow cycle on success, otherwise the cycle with fewest conflicts.
    pub cycle: Option<Vec<Vertex>>,
    pub best_conflicts: Option<usize>,
    pub steps: Vec<StepLog>,
    pub failure: Option<String>,
}

fn fail(reason: &str) -> SearchReport {
    SearchReport {
        success: false,
        cycle: None,
        best_conflicts: None,
        steps: Vec::new(),
        failure: Some(reason.into()),
    }
}

pub fn find_rainbow_hamilton_cycle(
    g: &Hypergraph,
    chi: &Colouring,
    params: &Parameters,
    seed: u64,
    cfg: &SearchConfig,
    start: Option<LooseCycle>,
) -> Result<SearchReport> {
    let k = g.k();
    if k != params.k() {
        return Err(invalid(format!("parameters are for k = {}, the host has k = {k}", params.k())));
    }
    if !g.n().is_multiple_of(k - 1) {
        return Err(invalid(format!("(k-1) = {} must divide n = {}", k - 1, g.n())));
    }
    let mut h = match start {
        Some(c) => LooseCycle::validate(g, c.vertices()).map_err(|e| invalid(format!("start cycle: {e}")))?,
        None => match uniform_random_hamilton_cycle(g, seed, cfg.cycle_budget)? {
            Outcome::Found(c) => c,
            Outcome::Absent => return Ok(fail("no loose Hamilton cycle exists")),
            Outcome::Unknown => return Err(Error::Budget("start cycle enumeration".into())),
        },
    };
    let mut current = conflict_count(&h, g, chi)?;
    let mut best = (current, h.clone());
    let mut steps = Vec::new();
    let t = params.t();
    let l = h.edge_count();
    let switching_fits = l >= params.m() * (t + 1);
    for step in 0..cfg.max_steps {
        if current == 0 {
            break;
        }
        let target = find_conflicts(&h, g, chi, t)?.swap_remove(0);
        let step_seed = combine(seed, step as u64);
        let mut log = StepLog {
            step,
            conflicts: current,
            target: target.clone(),
            kind: MoveKind::Stuck,
            trials: 0,
            viable: 0,
            conflicts_after: current,
        };
        let mut next = None;
        if switching_fits {
            let p0 = h.subpath(target.p0_start, t)?;
            next = try_switching(g, chi, &h, &p0, params, cfg, step_seed, current, &mut log)?;
            if next.is_some() {
                log.kind = MoveKind::Switching;
            }
        }
        if next.is_none() {
            let mut rng = stream(seed, Purpose::Search, step as u64);
            next = window_move(g, chi, &h, target.e, cfg.window, current, &mut rng)?;
            if next.is_some() {
                log.kind = MoveKind::Window;
            }
        }
        if let Some((c, count)) = next {
            h = c;
            current = count;
        }
        log.conflicts_after = current;
        steps.push(log);
        if current < best.0 {
            best = (current, h.clone());
        }
    }
    let success = best.0 == 0;
    if success {
        let c = LooseCycle::validate(g, best.1.vertices()).map_err(|e| Error::Invariant(format!("returned cycle: {e}")))?;
        if !chi.is_rainbow(g, &c.edges())? {
            return Err(Error::Invariant("returned cycle is not rainbow".into()));
        }
    }
    Ok(SearchReport {
        success,
        cycle: Some(best.1.vertices().to_vec()),
        best_conflicts: Some(best.0),
        steps,
        failure: (!success).then(|| format!("step budget of {} exhausted", cfg.max_steps)),
    })
}

/// Samples splittings around `p0` until a feasible switching that does not
/// raise the conflict count is found.
#[allow(clippy::too_many_arguments)]
fn try_switching(
    g: &Hypergraph,
    chi: &Colouring,
    h: &LooseCycle,
    p0: &LoosePath,
    params: &Parameters,
    cfg: &SearchConfig,
    seed: u64,
    current: usize,
    log: &mut StepLog,
) -> Result<Option<(LooseCycle, usize)>> {
    let before = conflicts_avoiding(h, g, chi, p0.vertices())?;
    for trial in 0..cfg.trials_per_step {
        log.trials += 1;
        let found = match run_trial(g, chi, h, p0, params, &cfg.sampler, seed, trial) {
            Ok((_, found)) => found,
            Err(Error::Infeasible { .. } | Error::Budget(_) | Error::InvalidArgument(_)) => None,
            Err(e) => return Err(e),
        };
        let Some(v) = found else { continue };
        log.viable += 1;
        let mut sb = SwitchBuildConfig::new(combine(seed, trial));
        sb.node_limit = cfg.node_limit;
        let build = match build_feasible_switching(g, chi, &v.splitting, &v.partition, &v.rerouting, params, &sb) {
            Ok(b) => b,
            Err(Error::Infeasible { .. } | Error::Budget(_)) => continue,
            Err(e) => return Err(e),
        };
        if !build.switching_report.holds() || !build.feasibility.holds() {
            continue;
        }
        let new = build.switching.new.host().clone();
        let after = conflicts_avoiding(&new, g, chi, p0.vertices())?;
        if after > before {
            return Err(Error::Invariant(format!(
                "feasible switching raised conflicts away from P_0 from {before} to {after}"
            )));
        }
        let count = conflict_count(&new, g, chi)?;
        if count <= current {
            return Ok(Some((new, count)));
        }
    }
    Ok(None)
}

/// Replaces a window of consecutive edges containing position `e` by the
/// loose path on the same vertices and endpoints that minimises conflicts.
fn window_move<R: Rng>(
    g: &Hypergraph,
    chi: &Colouring,
    h: &LooseCycle,
    e: usize,
    window: Option<usize>,
    current: usize,
    rng: &mut R,
) -> Result<Option<(LooseCycle, usize)>> {
    let k = h.k();
    let l = h.edge_count();
    if l < 2 {
        return Ok(None);
    }
    let w = window.unwrap_or(9 / (k - 1)).clamp(1, l - 1);
    let start = (e + l - rng.random_range(0..w)) % l;
    let n = h.n();
    let s = start * (k - 1);
    let seq: Vec<Vertex> = (0..n).map(|i| h.vertices()[(s + i) % n]).collect();
    let span = w * (k - 1);
    let (a, b) = (seq[0], seq[span]);
    let interior = &seq[1..span];
    let rest = &seq[span + 1..];
    let outside: Vec<Edge> = (w..l).map(|i| h.edge(start + i)).collect();
    let mut base: HashMap<Colour, usize> = HashMap::new();
    for f in &outside {
        *base.entry(chi.colour_of(g, f)?).or_default() += 1;
    }
    let base_pairs: usize = base.values().map(|&c| c * (c - 1) / 2).sum();
    let mut candidates: BTreeMap<Vec<Edge>, (usize, Vec<Vertex>)> = BTreeMap::new();
    'perm: for perm in interior.iter().copied().permutations(interior.len()) {
        let path: Vec<Vertex> = std::iter::once(a).chain(perm).chain(std::iter::once(b)).collect();
        let mut edges = Vec::with_capacity(w);
        let mut ids = Vec::with_capacity(w);
        for i in 0..w {
            let mut vs = path[i * (k - 1)..=i * (k - 1) + k - 1].to_vec();
            vs.sort_unstable();
            let Some(id) = g.edge_id(&vs) else { continue 'perm };
            ids.push(id);
            edges.push(Edge::new(vs).expect("distinct vertices"));
        }
        let mut extra: HashMap<Colour, usize> = HashMap::new();
        let mut score = base_pairs;
        for id in ids {
            let c = chi.colour(id);
            let seen = base.get(&c).copied().unwrap_or(0) + extra.get(&c).copied().unwrap_or(0);
            score += seen;
            *extra.entry(c).or_default() += 1;
        }
        edges.sort();
        candidates.entry(edges).or_insert((score, path));
    }
    let Some(min) = candidates.values().map(|(s, _)| *s).min() else {
        return Ok(None);
    };
    if min > current {
        return Ok(None);
    }
    let best: Vec<&Vec<Vertex>> = candidates.values().filter(|(s, _)| *s == min).map(|(_, p)| p).collect();
    let path = best.choose(rng).expect("a minimum exists");
    let ordering: Vec<Vertex> = path.iter().chain(rest).copied().collect();
    let c = LooseCycle::validate(g, &ordering).map_err(|e| Error::Invariant(format!("window move: {e}")))?;
    Ok(Some((c, min)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::first_prefix_colouring;

    fn identity_cycle(g: &Hypergraph) -> LooseCycle {
        let order: Vec<Vertex> = (0..g.n()).collect();
        LooseCycle::validate(g, &order).unwrap()
    }

    fn colour_with(g: &Hypergraph, same: &[&[usize]]) -> Colouring {
        let ids: Vec<usize> = same.iter().map(|e| g.edge_id(e).unwrap()).collect();
        Colouring::from_fn(g, |e| {
            let id = g.edge_id(e.vertices()).unwrap();
            if ids.contains(&id) {
                0
            } else {
                id as Colour + 1
            }
        })
    }

    #[test]
    fn conflict_examples() {
        let g = Hypergraph::complete(12, 3);
        let h = identity_cycle(&g);
        assert!(find_conflicts(&h, &g, &Colouring::injective(&g), 1).unwrap().is_empty());
        let chi = colour_with(&g, &[&[0, 1, 2], &[2, 3, 4]]);
        let c = find_conflicts(&h, &g, &chi, 1).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!((c[0].e, c[0].f, c[0].kind, c[0].distance), (0, 1, ConflictKind::A, 1));
        let c2 = find_conflicts(&h, &g, &chi, 2).unwrap();
        assert!(c2[0].covers_both);
        assert_eq!(c2[0].p0_start, 0);
        let chi = colour_with(&g, &[&[0, 1, 2], &[6, 7, 8]]);
        let c = find_conflicts(&h, &g, &chi, 1).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!((c[0].kind, c[0].distance, c[0].p0_start), (ConflictKind::B, 3, 0));
        assert!(!c[0].covers_both);
        let chi = colour_with(&g, &[&[0, 1, 2], &[10, 11, 0]]);
        let c = find_conflicts(&h, &g, &chi, 2).unwrap();
        assert_eq!((c[0].e, c[0].f, c[0].p0_start, c[0].kind), (0, 5, 5, ConflictKind::A));
        assert_eq!(conflict_count(&h, &g, &chi).unwrap(), 1);
    }

    #[test]
    fn injective_colouring_succeeds_at_once() {
        let g = Hypergraph::complete(8, 3);
        let params = Parameters::new(3, 1, 1, 1).unwrap();
        let r = find_rainbow_hamilton_cycle(&g, &Colouring::injective(&g), &params, 1, &SearchConfig::default(), None).unwrap();
        assert!(r.success);
        assert!(r.steps.is_empty());
    }

    #[test]
    fn prefix_colouring_succeeds() {
        let (g, chi) = first_prefix_colouring(8, 3).unwrap();
        let params = Parameters::new(3, 1, 1, 1).unwrap();
        let r = find_rainbow_hamilton_cycle(&g, &chi, &params, 5, &SearchConfig::default(), None).unwrap();
        assert!(r.success);
        let c = LooseCycle::validate(&g, r.cycle.as_ref().unwrap()).unwrap();
        assert!(chi.is_rainbow(&g, &c.edges()).unwrap());
    }

    #[test]
    fn window_move_removes_adjacent_conflict() {
        let g = Hypergraph::complete(8, 3);
        let h = identity_cycle(&g);
        let chi = colour_with(&g, &[&[0, 1, 2], &[2, 3, 4]]);
        let mut rng = stream(0, Purpose::Test, 0);
        let (c, count) = window_move(&g, &chi, &h, 0, Some(2), 1, &mut rng).unwrap().unwrap();
        assert_eq!(count, 0);
        assert_eq!(conflict_count(&c, &g, &chi).unwrap(), 0);
    }

    #[test]
    fn switching_step_runs_on_k12() {
        let g = Hypergraph::complete(12, 3);
        let h = identity_cycle(&g);
        let chi = colour_with(&g, &[&[0, 1, 2], &[6, 7, 8]]);
        let params = Parameters::new(3, 1, 1, 1).unwrap();
        let cfg = SearchConfig {
            trials_per_step: 400,
            ..SearchConfig::default()
        };
        let p0 = h.subpath(0, 1).unwrap();
        let mut log = StepLog {
            step: 0,
            conflicts: 1,
            target: find_conflicts(&h, &g, &chi, 1).unwrap()[0].clone(),
            kind: MoveKind::Stuck,
            trials: 0,
            viable: 0,
            conflicts_after: 1,
        };
        let out = try_switching(&g, &chi, &h, &p0, &params, &cfg, 9, 1, &mut log).unwrap();
        assert!(log.viable > 0);
        let (c, count) = out.unwrap();
        assert!(count <= 1);
        assert_eq!(conflict_count(&c, &g, &chi).unwrap(), count);
        assert!(LooseCycle::validate(&g, c.vertices()).is_ok());
    }

    #[test]
    fn search_is_deterministic_and_valid() {
        let g = Hypergraph::complete(10, 3);
        let mut rng = stream(3, Purpose::Test, 0);
        let mut ids: Vec<usize> = (0..g.edge_count()).collect();
        rand::seq::SliceRandom::shuffle(ids.as_mut_slice(), &mut rng);
        let chi = Colouring::new(&g, ids.iter().map(|&i| (i / 2) as Colour).collect()).unwrap();
        let params = Parameters::new(3, 1, 1, 1).unwrap();
        let a = find_rainbow_hamilton_cycle(&g, &chi, &params, 4, &SearchConfig::default(), None).unwrap();
        let b = find_rainbow_hamilton_cycle(&g, &chi, &params, 4, &SearchConfig::default(), None).unwrap();
        assert_eq!(a.cycle, b.cycle);
        assert_eq!(a.steps.len(), b.steps.len());
        let c = LooseCycle::validate(&g, a.cycle.as_ref().unwrap()).unwrap();
        assert_eq!(conflict_count(&c, &g, &chi).unwrap(), a.best_conflicts.unwrap());
        assert!(a.success);
    }
}
