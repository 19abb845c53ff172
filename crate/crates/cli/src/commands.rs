use std::path::{Path, PathBuf};

use rainbow_core::constructions::{first_prefix_colouring, tight_counterexample};
use rainbow_core::io::{join, parse_colouring, parse_hypergraph, parse_pairs, parse_vertex_list, parse_vertex_lists, write_colouring, write_hypergraph};
use rainbow_core::oracles::{
    enumerate_loose_hamilton_cycles, exists_rainbow_loose_hc, exists_rainbow_tight_hc, find_loose_hamilton_path,
    EnumerationBudget,
};
use rainbow_core::sampler::{estimate_suitable_fraction, run_trial, AcceptMode, PartitionConfig, SamplerConfig, ViableSplitting};
use rainbow_core::search::{find_rainbow_hamilton_cycle, SearchConfig};
use rainbow_core::splitting::{validate_rerouting, validate_splitting, LengthMode, TransversePartition};
use rainbow_core::switchbuild::{build_feasible_switching, SwitchBuildConfig};
use rainbow_core::tiling::{build_path_tiling, verify_tiling, TilingConfig, TilingRequest};
use rainbow_core::{Colouring, Error, Hypergraph, LooseCycle, LoosePath, Outcome, Parameters, TightCycle, Vertex};
use serde::Serialize;
use serde_json::json;

use crate::{Command, Construction, Failure, ParamArgs, SampleArgs};

type Run = Result<u8, Failure>;

fn emit(v: impl Serialize) {
    crate::out(&serde_json::to_string(&v).expect("reports serialize"));
}

fn read(p: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(p).map_err(|e| Failure::Io(p.to_path_buf(), e))
}

fn write(p: &Path, s: &str) -> Result<(), Failure> {
    std::fs::write(p, s).map_err(|e| Failure::Io(p.to_path_buf(), e))
}

fn with_path(p: &Path, e: Error) -> Failure {
    match e {
        Error::Parse { line, message } => Failure::Core(Error::Parse {
            line,
            message: format!("{}: {message}", p.display()),
        }),
        other => Failure::Core(other),
    }
}

fn load_hg(p: &Path) -> Result<Hypergraph, Failure> {
    parse_hypergraph(&read(p)?).map_err(|e| with_path(p, e))
}

fn load_col(g: &Hypergraph, p: &Path) -> Result<Colouring, Failure> {
    parse_colouring(g, &read(p)?).map_err(|e| with_path(p, e))
}

fn load_cycle(g: &Hypergraph, p: &Path) -> Result<LooseCycle, Failure> {
    let order = parse_vertex_list(&read(p)?).map_err(|e| with_path(p, e))?;
    LooseCycle::validate(g, &order).map_err(|v| Error::InvalidArgument(format!("{}: {v}", p.display())).into())
}

fn params(k: usize, a: &ParamArgs) -> Result<Parameters, Failure> {
    let p = Parameters::new(k, a.j, a.t, a.mtilde)?.with_reals(a.epsilon, a.mu, a.gamma, a.beta, a.threshold)?;
    if let Some(m) = a.m {
        if m != p.m() {
            return Err(Error::InvalidArgument(format!("--m {m} differs from (t(k-1)+1) * mtilde = {}", p.m())).into());
        }
    }
    Ok(p)
}

fn witness_lines(p: &Option<PathBuf>, lines: &[Vec<Vertex>]) -> Result<(), Failure> {
    if let Some(p) = p {
        let body: String = lines.iter().map(|l| join(l) + "\n").collect();
        write(p, &body)?;
    }
    Ok(())
}

fn paths_json(paths: &[LoosePath]) -> Vec<&[Vertex]> {
    paths.iter().map(LoosePath::vertices).collect()
}

pub fn run(cmd: Command) -> Run {
    match cmd {
        Command::Enumerate {
            hg,
            col,
            count_only,
            witness,
            budget,
        } => enumerate(&hg, col.as_deref(), count_only, &witness, budget.node_limit),
        Command::RainbowExists {
            hg,
            col,
            tight,
            witness,
            budget,
        } => rainbow_exists(&hg, &col, tight, &witness, budget.node_limit),
        Command::HamPath {
            hg,
            a,
            b,
            forbid,
            witness,
            budget,
        } => ham_path(&hg, a, b, forbid.as_deref(), &witness, budget.node_limit),
        Command::Sample(s) => sample(&s, false, true),
        Command::Estimate { sample: s, records } => sample(&s, true, records),
        Command::Tile {
            hg,
            pairs,
            conflicts,
            t,
            seed,
            strict,
        } => tile(&hg, &pairs, conflicts.as_deref(), t, seed, strict),
        Command::Switch {
            hg,
            col,
            cycle,
            p0_start,
            splitting,
            partition,
            rerouting,
            sample,
            trials,
            params: pa,
            seed,
        } => {
            let g = load_hg(&hg)?;
            let chi = load_col(&g, &col)?;
            let h = load_cycle(&g, &cycle)?;
            let params = params(g.k(), &pa)?;
            let v = match (sample, splitting, partition, rerouting) {
                (true, ..) => match sampled_viable(&g, &chi, &h, p0_start, &params, seed, trials)? {
                    Some(v) => v,
                    None => {
                        emit(json!({ "switch": { "status": "no-viable-splitting", "trials": trials } }));
                        eprintln!("no viable splitting in {trials} trials");
                        return Ok(1);
                    }
                },
                (false, Some(s), Some(x), Some(r)) => viable_from_files(&h, &s, &x, &r, params.t())?,
                _ => return Err(Error::InvalidArgument("give --sample or all of --splitting, --partition, --rerouting".into()).into()),
            };
            switch(&g, &chi, &v, &params, seed)
        }
        Command::Construct { which } => construct(which),
        Command::Search {
            hg,
            col,
            cycle,
            params: pa,
            seed,
            max_steps,
            trials_per_step,
        } => {
            let g = load_hg(&hg)?;
            let chi = load_col(&g, &col)?;
            let start = cycle.map(|c| load_cycle(&g, &c)).transpose()?;
            let params = params(g.k(), &pa)?;
            let cfg = SearchConfig {
                max_steps,
                trials_per_step,
                ..SearchConfig::default()
            };
            let r = find_rainbow_hamilton_cycle(&g, &chi, &params, seed, &cfg, start)?;
            for s in &r.steps {
                emit(json!({ "step": s }));
            }
            emit(json!({ "search": {
                "success": r.success,
                "cycle": r.cycle,
                "best_conflicts": r.best_conflicts,
                "steps": r.steps.len(),
                "failure": r.failure,
            }}));
            if r.success {
                eprintln!("rainbow cycle found after {} steps", r.steps.len());
                Ok(0)
            } else if r.cycle.is_none() {
                eprintln!("{}", r.failure.as_deref().unwrap_or("search failed"));
                Ok(1)
            } else {
                eprintln!("no rainbow cycle within {max_steps} steps; best has {:?} conflicts", r.best_conflicts);
                Ok(3)
            }
        }
        Command::Verify { hg, col, cycle, tight } => verify(&hg, col.as_deref(), &cycle, tight),
    }
}

fn enumerate(hg: &Path, col: Option<&Path>, count_only: bool, witness: &Option<PathBuf>, node_limit: u64) -> Run {
    let g = load_hg(hg)?;
    let chi = col.map(|c| load_col(&g, c)).transpose()?;
    let en = enumerate_loose_hamilton_cycles(&g, EnumerationBudget::nodes(node_limit))?;
    let mut rainbow = 0usize;
    for c in &en.cycles {
        let is_rainbow = match &chi {
            Some(chi) => Some(chi.is_rainbow(&g, &c.edges())?),
            None => None,
        };
        rainbow += usize::from(is_rainbow == Some(true));
        if !count_only {
            emit(json!({ "cycle": c.vertices(), "rainbow": is_rainbow }));
        }
    }
    let lines: Vec<Vec<Vertex>> = en.cycles.iter().map(|c| c.vertices().to_vec()).collect();
    witness_lines(witness, &lines)?;
    emit(json!({ "enumerate": {
        "count": en.cycles.len(),
        "rainbow": chi.as_ref().map(|_| rainbow),
        "complete": en.complete,
        "nodes": en.nodes,
    }}));
    eprintln!(
        "{} loose Hamilton cycles{}",
        en.cycles.len(),
        if en.complete { "" } else { " before the budget ran out" }
    );
    Ok(if en.complete { 0 } else { 3 })
}

fn outcome_code<T>(o: &Outcome<T>, what: &str) -> u8 {
    match o {
        Outcome::Found(_) => {
            eprintln!("{what}: found");
            0
        }
        Outcome::Absent => {
            eprintln!("{what}: none exists");
            1
        }
        Outcome::Unknown => {
            eprintln!("{what}: budget exhausted");
            3
        }
    }
}

fn rainbow_exists(hg: &Path, col: &Path, tight: bool, witness: &Option<PathBuf>, node_limit: u64) -> Run {
    let g = load_hg(hg)?;
    let chi = load_col(&g, col)?;
    let o: Outcome<Vec<Vertex>> = if tight {
        exists_rainbow_tight_hc(&g, &chi, node_limit)?.map(|c: TightCycle| c.vertices().to_vec())
    } else {
        exists_rainbow_loose_hc(&g, &chi, EnumerationBudget::nodes(node_limit))?.map(|c| c.vertices().to_vec())
    };
    if let Some(w) = o.found() {
        witness_lines(witness, std::slice::from_ref(w))?;
    }
    emit(json!({ "rainbow_exists": { "mode": if tight { "tight" } else { "loose" }, "result": &o } }));
    Ok(outcome_code(&o, "rainbow Hamilton cycle"))
}

fn ham_path(hg: &Path, a: Vertex, b: Vertex, forbid: Option<&Path>, witness: &Option<PathBuf>, node_limit: u64) -> Run {
    let g = load_hg(hg)?;
    let forbidden = match forbid {
        Some(p) => parse_pairs(&read(p)?).map_err(|e| with_path(p, e))?,
        None => Vec::new(),
    };
    let o = find_loose_hamilton_path(&g, a, b, &forbidden, node_limit)?.map(|p| p.vertices().to_vec());
    if let Some(w) = o.found() {
        witness_lines(witness, std::slice::from_ref(w))?;
    }
    emit(json!({ "ham_path": { "a": a, "b": b, "result": &o } }));
    Ok(outcome_code(&o, "loose Hamilton path"))
}

fn sampler_config(structural: bool) -> SamplerConfig {
    SamplerConfig {
        mode: if structural { AcceptMode::Structural } else { AcceptMode::Events },
        partition: PartitionConfig {
            structural,
            ..PartitionConfig::default()
        },
        ..SamplerConfig::default()
    }
}

fn sample(s: &SampleArgs, summary: bool, records: bool) -> Run {
    let g = load_hg(&s.hg)?;
    let chi = load_col(&g, &s.col)?;
    let h = load_cycle(&g, &s.cycle)?;
    let params = params(g.k(), &s.params)?;
    let p0 = h.subpath(s.p0_start, params.t())?;
    let cfg = sampler_config(s.structural);
    let (est, recs) = estimate_suitable_fraction(&g, &chi, &h, &p0, &params, &cfg, s.trials, s.seed)?;
    if records {
        for r in &recs {
            emit(json!({ "trial": r }));
        }
    }
    if summary {
        emit(json!({ "estimate": est }));
    }
    eprintln!(
        "{} of {} trials reached a viable splitting ({} sized, {} accepted)",
        est.successes, est.trials, est.sized, est.accepted
    );
    Ok(0)
}

fn tile(hg: &Path, pairs: &Path, conflicts: Option<&Path>, t: usize, seed: u64, strict: bool) -> Run {
    let g = load_hg(hg)?;
    let pairs = parse_pairs(&read(pairs)?).map_err(|e| with_path(pairs, e))?;
    let conf = match conflicts {
        Some(p) => parse_pairs(&read(p)?).map_err(|e| with_path(p, e))?,
        None => Vec::new(),
    };
    let req = TilingRequest::new(g, pairs, &conf, t)?;
    let tiling = build_path_tiling(&req, &TilingConfig::new(seed, !strict))?;
    let violations = verify_tiling(&req, &tiling.paths);
    emit(json!({ "tiling": {
        "paths": paths_json(&tiling.paths),
        "violations": violations,
        "report": tiling.report,
    }}));
    if violations.is_empty() {
        eprintln!("{} paths", tiling.paths.len());
        Ok(0)
    } else {
        Err(Error::Invariant(format!("tiling violates {} invariants", violations.len())).into())
    }
}

fn sampled_viable(
    g: &Hypergraph,
    chi: &Colouring,
    h: &LooseCycle,
    p0_start: usize,
    params: &Parameters,
    seed: u64,
    trials: u64,
) -> Result<Option<ViableSplitting>, Failure> {
    let p0 = h.subpath(p0_start, params.t())?;
    let cfg = sampler_config(true);
    for trial in 0..trials {
        if let (_, Some(v)) = run_trial(g, chi, h, &p0, params, &cfg, seed, trial)? {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

fn viable_from_files(h: &LooseCycle, s: &Path, x: &Path, r: &Path, t: usize) -> Result<ViableSplitting, Failure> {
    let k = h.k();
    let paths = parse_vertex_lists(&read(s)?)
        .map_err(|e| with_path(s, e))?
        .into_iter()
        .map(|vs| LoosePath::new(k, vs))
        .collect::<Result<Vec<_>, _>>()?;
    let sp = validate_splitting(h, paths, LengthMode::Balanced(t))
        .map_err(|v| Error::InvalidArgument(format!("{}: {v}", s.display())))?;
    let parts = parse_vertex_lists(&read(x)?).map_err(|e| with_path(x, e))?;
    let partition = TransversePartition::new(&sp, parts)?;
    let pairs = parse_pairs(&read(r)?).map_err(|e| with_path(r, e))?;
    let rerouting = validate_rerouting(&sp, &pairs).map_err(|v| Error::InvalidArgument(format!("{}: {v}", r.display())))?;
    Ok(ViableSplitting {
        splitting: sp,
        partition,
        rerouting,
    })
}

fn switch(g: &Hypergraph, chi: &Colouring, v: &ViableSplitting, params: &Parameters, seed: u64) -> Run {
    let b = build_feasible_switching(g, chi, &v.splitting, &v.partition, &v.rerouting, params, &SwitchBuildConfig::new(seed))?;
    let ok = b.switching_report.holds() && b.feasibility.holds();
    emit(json!({ "switch": {
        "p0": b.switching.p0.vertices(),
        "old_paths": paths_json(b.switching.old.paths()),
        "partition": v.partition.parts(),
        "rerouting": v.rerouting.pairs(),
        "new_paths": paths_json(b.switching.new.paths()),
        "new_cycle": b.switching.new.host().vertices(),
        "is_switching": b.switching_report,
        "is_feasible": b.feasibility,
        "properties": b.properties,
    }}));
    eprintln!("switching {}", if ok { "is feasible" } else { "fails a predicate" });
    Ok(if ok { 0 } else { 1 })
}

fn construct(which: Construction) -> Run {
    let (g, chi, out) = match which {
        Construction::TightCx { n, out } => {
            let (g, chi) = tight_counterexample(n)?;
            (g, chi, out)
        }
        Construction::Prefix { n, k, out } => {
            let (g, chi) = first_prefix_colouring(n, k)?;
            (g, chi, out)
        }
    };
    let hg = out.with_extension("hg");
    let col = out.with_extension("col");
    write(&hg, &write_hypergraph(&g))?;
    write(&col, &write_colouring(&chi))?;
    emit(json!({ "construct": {
        "hg": hg,
        "col": col,
        "n": g.n(),
        "k": g.k(),
        "edges": g.edge_count(),
        "colours": chi.class_sizes().len(),
        "max_class": chi.max_class_size(),
    }}));
    eprintln!("wrote {} and {}", hg.display(), col.display());
    Ok(0)
}

fn verify(hg: &Path, col: Option<&Path>, cycle: &Path, tight: bool) -> Run {
    let g = load_hg(hg)?;
    let chi = col.map(|c| load_col(&g, c)).transpose()?;
    let order = parse_vertex_list(&read(cycle)?).map_err(|e| with_path(cycle, e))?;
    let edges = if tight {
        TightCycle::validate(&g, &order).map(|c| c.edges())
    } else {
        LooseCycle::validate(&g, &order).map(|c| c.edges())
    };
    let edges = match edges {
        Ok(e) => e,
        Err(v) => {
            emit(json!({ "verify": { "valid": false, "violation": v } }));
            eprintln!("not a Hamilton cycle: {v}");
            return Ok(1);
        }
    };
    let clashes = match &chi {
        Some(chi) => Some(chi.shares_colour(&g, &edges, &edges)?),
        None => None,
    };
    let rainbow = clashes.as_ref().map(Vec::is_empty);
    let clash_list: Option<Vec<(String, String)>> =
        clashes.map(|c| c.iter().map(|(e, f)| (e.to_string(), f.to_string())).collect());
    emit(json!({ "verify": { "valid": true, "rainbow": rainbow, "clashes": clash_list } }));
    eprintln!(
        "valid {} Hamilton cycle{}",
        if tight { "tight" } else { "loose" },
        match rainbow {
            Some(true) => ", rainbow",
            Some(false) => ", not rainbow",
            None => "",
        }
    );
    Ok(if rainbow == Some(false) { 1 } else { 0 })
}
