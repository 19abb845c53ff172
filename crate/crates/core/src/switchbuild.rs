//! Turning a suitable splitting with a viable partition into a switching.
//!
//! Parts `X_1 .. X_T` are processed in order. For part `h` the vertices are
//! labelled `u_{i,h}` (the vertex of path `i`), edges inside `X_h \ {u_{0,h}}`
//! sharing a colour with the host cycle are deleted, a conflict graph `B_h`
//! records index pairs already used together by earlier parts, and a path
//! tiling joins the rerouting pairs of the part.

use std::collections::{BTreeSet, HashMap, HashSet};

use itertools::Itertools;
use serde::Serialize;

use crate::colouring::{Colour, Colouring};
use crate::error::{invalid, Error, Result};
use crate::hypergraph::{Edge, Hypergraph, Vertex};
use crate::loose::{LooseCycle, LoosePath};
use crate::params::Parameters;
use crate::rng::combine;
use crate::splitting::{
    is_feasible, is_switching, validate_rerouting, validate_splitting, FeasibilityReport, LengthMode, Rerouting,
    Splitting, Switching, SwitchingReport, TransversePartition,
};
use crate::tiling::{build_path_tiling, verify_tiling, TilingConfig, TilingReport, TilingRequest};

/// Labels `u_{i,h}` and the edges `Ĉ_h` of the parts built so far.
#[derive(Clone, Debug)]
pub struct SwitchBuildState {
    labels: Vec<Vec<Vertex>>,
    index: HashMap<Vertex, (usize, usize)>,
    hat_edges: Vec<Vec<Edge>>,
}

impl SwitchBuildState {
    /// `labels[h][i]` is `u_{i,h}`.
    pub fn new(labels: Vec<Vec<Vertex>>) -> Result<SwitchBuildState> {
        let m = labels.first().map_or(0, Vec::len);
        if m == 0 || labels.iter().any(|l| l.len() != m) {
            return Err(invalid("every part needs the same positive number of labels"));
        }
        let mut index = HashMap::new();
        for (h, part) in labels.iter().enumerate() {
            for (i, &v) in part.iter().enumerate() {
                if index.insert(v, (i, h)).is_some() {
                    return Err(invalid(format!("vertex {v} is labelled twice")));
                }
            }
        }
        Ok(SwitchBuildState {
            labels,
            index,
            hat_edges: Vec::new(),
        })
    }

    pub fn from_partition(sp: &Splitting, x: &TransversePartition) -> Result<SwitchBuildState> {
        let labels = (0..x.parts().len())
            .map(|h| {
                (0..sp.len())
                    .map(|i| {
                        x.vertex_in(sp, i, h)
                            .ok_or_else(|| invalid(format!("part {h} misses path {i}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        SwitchBuildState::new(labels)
    }

    pub fn part_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self, h: usize) -> &[Vertex] {
        &self.labels[h]
    }

    /// `(i, h)` with `v = u_{i,h}`.
    pub fn index_of(&self, v: Vertex) -> Option<(usize, usize)> {
        self.index.get(&v).copied()
    }

    /// Records `Ĉ_h` for the next part in order.
    pub fn push_hat_edges(&mut self, edges: Vec<Edge>) {
        self.hat_edges.push(edges);
    }

    pub fn hat_edges(&self) -> &[Vec<Edge>] {
        &self.hat_edges
    }

    /// Path-index pairs `{i, i'}` with `0 ∉ {i, i'}` lying together in an
    /// edge of some recorded `Ĉ_{h'}` with `h' < h`.
    fn index_pairs(&self, h: usize) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for edges in self.hat_edges.iter().take(h) {
            for e in edges {
                let idx: Vec<usize> = e.vertices().iter().filter_map(|v| self.index.get(v).map(|p| p.0)).collect();
                for (a, b) in idx.into_iter().tuple_combinations() {
                    if a != 0 && b != 0 && a != b {
                        out.insert((a.min(b), a.max(b)));
                    }
                }
            }
        }
        out
    }

    /// The conflict graph `B_h` on `X_h`, as sorted vertex pairs.
    pub fn build_conflict_graph(&self, h: usize) -> Vec<(Vertex, Vertex)> {
        let l = &self.labels[h];
        let mut out: Vec<(Vertex, Vertex)> = self
            .index_pairs(h)
            .into_iter()
            .map(|(a, b)| (l[a].min(l[b]), l[a].max(l[b])))
            .collect();
        out.sort_unstable();
        out
    }
}

/// `G'_h` in local labels (local `i` is `u_{i,h}`) and the deleted edges in
/// original labels.
pub fn filtered_part_graph(
    g: &Hypergraph,
    chi: &Colouring,
    host: &LooseCycle,
    labels: &[Vertex],
) -> Result<(Hypergraph, Vec<Edge>)> {
    let hcols: HashSet<Colour> = host.edges().iter().map(|e| chi.colour_of(g, e)).collect::<Result<_>>()?;
    let (local, map) = g.induced(labels)?;
    let mut removed = Vec::new();
    let kept = local.filter_edges(|_, e| {
        if e.contains(0) {
            return true;
        }
        let orig = Edge::new(e.vertices().iter().map(|&v| map[v]).collect()).expect("relabelling is injective");
        let c = chi.colour_of(g, &orig).expect("induced edges come from the host graph");
        if hcols.contains(&c) {
            removed.push(orig);
            false
        } else {
            true
        }
    });
    removed.sort();
    Ok((kept, removed))
}

/// Joins the paths outside the splitting with `new_paths`, whose endpoint
/// pairs must form a rerouting, into a loose Hamilton cycle of `g`.
pub fn assemble_cycle(g: &Hypergraph, sp: &Splitting, new_paths: &[LoosePath]) -> Result<LooseCycle> {
    let pairs: Vec<(Vertex, Vertex)> = new_paths.iter().map(|p| (p.first(), p.last())).collect();
    validate_rerouting(sp, &pairs).map_err(|e| invalid(format!("new path endpoints: {e}")))?;
    let host = sp.host();
    let hv = host.vertices();
    let n = hv.len();
    let pos: HashMap<Vertex, usize> = hv.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut outer: HashMap<Vertex, Vec<Vertex>> = HashMap::new();
    for (x, y) in sp.arcs() {
        let (a, b) = (pos[&x], pos[&y]);
        let len = (b + n - a) % n;
        let seg: Vec<Vertex> = (0..=len).map(|s| hv[(a + s) % n]).collect();
        let mut rev = seg.clone();
        rev.reverse();
        outer.insert(x, seg);
        outer.insert(y, rev);
    }
    let mut inner: HashMap<Vertex, Vec<Vertex>> = HashMap::new();
    for p in new_paths {
        inner.insert(p.first(), p.vertices().to_vec());
        inner.insert(p.last(), p.reversed().vertices().to_vec());
    }
    let start = sp.arcs()[0].0;
    let mut seq = Vec::with_capacity(n);
    let mut v = start;
    loop {
        let seg = &outer[&v];
        seq.extend_from_slice(&seg[..seg.len() - 1]);
        let w = *seg.last().expect("segments are non-empty");
        let path = &inner[&w];
        seq.extend_from_slice(&path[..path.len() - 1]);
        v = *path.last().expect("paths are non-empty");
        if v == start || seq.len() > n {
            break;
        }
    }
    LooseCycle::validate(g, &seq).map_err(|e| Error::Invariant(format!("assembled cycle: {e}")))
}

#[derive(Clone, Debug, Serialize)]
pub struct SwitchBuildConfig {
    pub seed: u64,
    /// Passed to every tiling.
    pub structural: bool,
    pub node_limit: u64,
    pub resample_budget: usize,
}

impl SwitchBuildConfig {
    pub fn new(seed: u64) -> SwitchBuildConfig {
        SwitchBuildConfig {
            seed,
            structural: true,
            node_limit: 20_000_000,
            resample_budget: 1000,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PartBuild {
    pub h: usize,
    pub labels: Vec<Vertex>,
    pub pairs: Vec<(Vertex, Vertex)>,
    pub conflicts: Vec<(Vertex, Vertex)>,
    pub filtered_out: Vec<Edge>,
    pub paths: Vec<LoosePath>,
    /// Edges of the paths avoiding `u_{0,h}`.
    pub hat_edges: Vec<Edge>,
    pub tiling: TilingReport,
}

/// The five per-part properties, each as a list of witnesses.
#[derive(Clone, Debug, Default, Serialize)]
pub struct PropertyReport {
    pub tiling_violations: Vec<String>,
    pub outside_colour_clashes: Vec<(Edge, Edge)>,
    pub earlier_colour_clashes: Vec<(Edge, Edge)>,
    pub internal_colour_clashes: Vec<(Edge, Edge)>,
    pub max_conflict_degree: usize,
    pub conflict_degree_cap: usize,
}

impl PropertyReport {
    pub fn holds(&self) -> bool {
        self.tiling_violations.is_empty()
            && self.outside_colour_clashes.is_empty()
            && self.earlier_colour_clashes.is_empty()
            && self.internal_colour_clashes.is_empty()
            && self.max_conflict_degree <= self.conflict_degree_cap
    }
}

#[derive(Clone, Debug)]
pub struct SwitchBuild {
    pub switching: Switching,
    pub parts: Vec<PartBuild>,
    pub properties: PropertyReport,
    pub switching_report: SwitchingReport,
    pub feasibility: FeasibilityReport,
}

fn check_preconditions(sp: &Splitting, x: &TransversePartition, r: &Rerouting, params: &Parameters) -> Result<Vec<Vec<(Vertex, Vertex)>>> {
    let t = sp.path(0).length();
    if t != params.t() || sp.paths().iter().any(|p| p.length() != t) {
        return Err(invalid(format!("the splitting must be {}-balanced", params.t())));
    }
    TransversePartition::new(sp, x.parts().to_vec())?;
    if x.parts().len() != params.part_count() || !x.is_exact(sp) {
        return Err(invalid(format!(
            "the partition needs {} parts each meeting every path once",
            params.part_count()
        )));
    }
    validate_rerouting(sp, r.pairs()).map_err(|e| invalid(format!("rerouting: {e}")))?;
    let mut per_part = vec![Vec::new(); x.parts().len()];
    for &(a, b) in r.pairs() {
        match (x.part_of(a), x.part_of(b)) {
            (Some(h), Some(h2)) if h == h2 => per_part[h].push((a, b)),
            _ => return Err(invalid(format!("rerouting pair ({a}, {b}) straddles two parts"))),
        }
    }
    if per_part.iter().any(|p| p.len() != params.mtilde()) {
        return Err(invalid(format!("every part must hold exactly {} rerouting pairs", params.mtilde())));
    }
    Ok(per_part)
}

/// Builds the switching part by part. Feasibility is checked afterwards by
/// the independent predicates and reported, not assumed.
pub fn build_feasible_switching(
    g: &Hypergraph,
    chi: &Colouring,
    sp: &Splitting,
    x: &TransversePartition,
    r: &Rerouting,
    params: &Parameters,
    cfg: &SwitchBuildConfig,
) -> Result<SwitchBuild> {
    let k = g.k();
    let t = params.t();
    let per_part = check_preconditions(sp, x, r, params)?;
    let mut state = SwitchBuildState::from_partition(sp, x)?;
    let outer = sp.outer_edges();
    let mut props = PropertyReport {
        conflict_degree_cap: 2 * t * k * k,
        ..PropertyReport::default()
    };
    let mut parts = Vec::with_capacity(state.part_count());
    for h in 0..state.part_count() {
        let labels = state.labels(h).to_vec();
        let local = |v: Vertex| state.index_of(v).expect("labelled vertex").0;
        let conflicts = state.build_conflict_graph(h);
        let (gh, filtered_out) = filtered_part_graph(g, chi, sp.host(), &labels)?;
        let mut pairs = per_part[h].clone();
        pairs.sort_unstable();
        let local_pairs: Vec<(Vertex, Vertex)> = pairs.iter().map(|&(a, b)| (local(a), local(b))).collect();
        let local_conflicts: Vec<(Vertex, Vertex)> = conflicts.iter().map(|&(a, b)| (local(a), local(b))).collect();
        let req = TilingRequest::new(gh, local_pairs, &local_conflicts, t)
            .map_err(|e| Error::Invariant(format!("part {h}: {e}")))?;
        props.max_conflict_degree = props.max_conflict_degree.max(req.conflicts.max_degree());
        let mut tcfg = TilingConfig::new(combine(cfg.seed, h as u64), cfg.structural);
        tcfg.j = params.j();
        tcfg.epsilon = params.epsilon();
        tcfg.beta = params.beta();
        tcfg.threshold = params.threshold();
        tcfg.node_limit = cfg.node_limit;
        tcfg.resample_budget = cfg.resample_budget;
        let tiling = build_path_tiling(&req, &tcfg).map_err(|e| match e {
            Error::Infeasible { stage, reason } => Error::Infeasible {
                stage,
                reason: format!("part {h}: {reason}"),
            },
            Error::Budget(s) => Error::Budget(format!("part {h}: {s}")),
            other => other,
        })?;
        props
            .tiling_violations
            .extend(verify_tiling(&req, &tiling.paths).into_iter().map(|s| format!("part {h}: {s}")));
        let paths: Vec<LoosePath> = tiling
            .paths
            .iter()
            .map(|p| LoosePath::new(k, p.vertices().iter().map(|&v| labels[v]).collect()))
            .collect::<Result<_>>()?;
        let hat: Vec<Edge> = paths
            .iter()
            .flat_map(LoosePath::edges)
            .filter(|e| !e.contains(labels[0]))
            .collect();
        props.outside_colour_clashes.extend(chi.shares_colour(g, &hat, &outer)?);
        for earlier in state.hat_edges() {
            props.earlier_colour_clashes.extend(chi.shares_colour(g, &hat, earlier)?);
        }
        props.internal_colour_clashes.extend(chi.shares_colour(g, &hat, &hat)?);
        state.push_hat_edges(hat.clone());
        parts.push(PartBuild {
            h,
            labels,
            pairs,
            conflicts,
            filtered_out,
            paths,
            hat_edges: hat,
            tiling: tiling.report,
        });
    }
    let new_paths: Vec<LoosePath> = parts.iter().flat_map(|p| p.paths.iter().cloned()).collect();
    let cycle = assemble_cycle(g, sp, &new_paths)?;
    let new = validate_splitting(&cycle, new_paths, LengthMode::Bounded(2 * t))
        .map_err(|e| Error::Invariant(format!("new splitting: {e}")))?;
    let switching = Switching {
        p0: sp.path(0).clone(),
        old: sp.clone(),
        new,
    };
    let switching_report = is_switching(&switching.p0, &switching.old, &switching.new);
    let feasibility = is_feasible(&switching, g, chi)?;
    Ok(SwitchBuild {
        switching,
        parts,
        properties: props,
        switching_report,
        feasibility,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::splitting::is_suitable;

    fn edge(v: &[usize]) -> Edge {
        Edge::new(v.to_vec()).unwrap()
    }

    #[test]
    fn conflict_graph_examples() {
        let labels: Vec<Vec<Vertex>> = (0..3).map(|h| (0..10).map(|i| 10 * h + i).collect()).collect();
        let mut st = SwitchBuildState::new(labels).unwrap();
        assert!(st.build_conflict_graph(0).is_empty());
        st.push_hat_edges(vec![edge(&[3, 5, 9])]);
        assert_eq!(st.build_conflict_graph(1), vec![(13, 15), (13, 19), (15, 19)]);
        st.push_hat_edges(vec![edge(&[10, 12, 14])]);
        assert_eq!(st.build_conflict_graph(2), vec![(22, 24), (23, 25), (23, 29), (25, 29)]);
        assert!(st.build_conflict_graph(2).iter().all(|&(a, b)| a != 20 && b != 20));
    }

    fn k12_setup() -> (Hypergraph, LooseCycle, Splitting) {
        let g = Hypergraph::complete(12, 3);
        let order: Vec<Vertex> = (0..12).collect();
        let host = LooseCycle::validate(&g, &order).unwrap();
        let paths = vec![
            host.subpath(0, 1).unwrap(),
            host.subpath(2, 1).unwrap(),
            host.subpath(4, 1).unwrap(),
        ];
        let sp = validate_splitting(&host, paths, LengthMode::Balanced(1)).unwrap();
        (g, host, sp)
    }

    #[test]
    fn injective_colouring_gives_feasible_switching() {
        let (g, _, sp) = k12_setup();
        let chi = Colouring::injective(&g);
        let params = Parameters::new(3, 1, 1, 1).unwrap();
        let x = TransversePartition::new(&sp, vec![vec![0, 4, 9], vec![2, 5, 8], vec![1, 6, 10]]).unwrap();
        let r = crate::splitting::search_rerouting(&sp, &x, 1, 1_000_000).into_found().unwrap();
        assert!(is_suitable(&sp, &g, &chi, 0.5).unwrap().holds());
        let b = build_feasible_switching(&g, &chi, &sp, &x, &r, &params, &SwitchBuildConfig::new(3)).unwrap();
        assert!(b.switching_report.holds(), "{:?}", b.switching_report);
        assert!(b.feasibility.holds());
        assert!(b.properties.holds());
        assert_eq!(b.switching.new.len(), 3);
    }

    #[test]
    fn filter_drops_host_coloured_edges() {
        let (g, host, _) = k12_setup();
        let target = edge(&[5, 8, 9]);
        let hc = 1_000_000;
        let chi = Colouring::from_fn(&g, |e| if *e == target || *e == edge(&[0, 1, 2]) { hc } else { g.edge_id(e.vertices()).unwrap() as Colour });
        let (gh, removed) = filtered_part_graph(&g, &chi, &host, &[0, 5, 8, 9]).unwrap();
        assert_eq!(removed, vec![target]);
        assert_eq!(gh.edge_count(), 3);
        assert!(!gh.contains_edge(&[1, 2, 3]));
    }

    #[test]
    fn rejects_non_transverse_partition() {
        let (g, _, sp) = k12_setup();
        let chi = Colouring::injective(&g);
        let params = Parameters::new(3, 1, 1, 1).unwrap();
        assert!(TransversePartition::new(&sp, vec![vec![0, 1, 8], vec![2, 4, 9], vec![5, 6, 10]]).is_err());
        let other = validate_splitting(
            sp.host(),
            vec![sp.host().subpath(1, 1).unwrap(), sp.host().subpath(3, 1).unwrap(), sp.host().subpath(5, 1).unwrap()],
            LengthMode::Balanced(1),
        )
        .unwrap();
        let x = TransversePartition::new(&other, vec![vec![2, 6, 10], vec![3, 7, 11], vec![4, 8, 0]]).unwrap();
        let r = Rerouting::identity(&sp);
        assert!(build_feasible_switching(&g, &chi, &sp, &x, &r, &params, &SwitchBuildConfig::new(0)).is_err());
    }

    #[test]
    fn identity_paths_reassemble_the_host() {
        let (g, host, sp) = k12_setup();
        let c = assemble_cycle(&g, &sp, sp.paths()).unwrap();
        assert_eq!(c.canonical_key(), host.canonical_key());
    }
}
