//! Small digraphs as adjacency bitmasks, and a Hamilton dicycle search.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{invalid, Result};

/// A loopless digraph on at most 64 vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Digraph {
    n: usize,
    out: Vec<u64>,
}

impl Digraph {
    pub fn new(n: usize) -> Result<Digraph> {
        if n > 64 {
            return Err(invalid(format!("digraphs are limited to 64 vertices, got {n}")));
        }
        Ok(Digraph { n, out: vec![0; n] })
    }

    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Digraph> {
        let mut d = Digraph::new(n)?;
        for &(a, b) in arcs {
            d.add_arc(a, b)?;
        }
        Ok(d)
    }

    pub fn add_arc(&mut self, a: usize, b: usize) -> Result<()> {
        if a >= self.n || b >= self.n || a == b {
            return Err(invalid(format!("arc {a}->{b} is a loop or out of range")));
        }
        self.out[a] |= 1 << b;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_arc(&self, a: usize, b: usize) -> bool {
        (self.out[a] >> b) & 1 == 1
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|a| (0..self.n).filter(move |&b| self.has_arc(a, b)).map(move |b| (a, b)))
            .collect()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].count_ones() as usize
    }

    pub fn in_degree(&self, v: usize) -> usize {
        (0..self.n).filter(|&a| self.has_arc(a, v)).count()
    }

    /// `min(δ⁺, δ⁻)`.
    pub fn min_semidegree(&self) -> usize {
        (0..self.n)
            .map(|v| self.out_degree(v).min(self.in_degree(v)))
            .min()
            .unwrap_or(0)
    }

    /// Whether `cycle` visits every vertex once along arcs and returns.
    pub fn is_hamilton_dicycle(&self, cycle: &[usize]) -> bool {
        if cycle.len() != self.n || self.n < 2 {
            return false;
        }
        let mut seen = 0u64;
        for &v in cycle {
            if v >= self.n || (seen >> v) & 1 == 1 {
                return false;
            }
            seen |= 1 << v;
        }
        (0..self.n).all(|i| self.has_arc(cycle[i], cycle[(i + 1) % self.n]))
    }
}

/// A Hamilton dicycle starting at vertex 0, if one exists. Candidates are
/// tried by fewest onward options first, ties by index; failed states are
/// memoised so the search is exact.
pub fn find_hamilton_dicycle(d: &Digraph) -> Option<Vec<usize>> {
    if d.n < 2 {
        return None;
    }
    let full = if d.n == 64 { u64::MAX } else { (1u64 << d.n) - 1 };
    let mut s = DicycleSearch {
        d,
        full,
        failed: HashSet::new(),
        path: vec![0],
    };
    s.extend(0, 1).then_some(s.path)
}

struct DicycleSearch<'a> {
    d: &'a Digraph,
    full: u64,
    failed: HashSet<(usize, u64)>,
    path: Vec<usize>,
}

impl DicycleSearch<'_> {
    fn extend(&mut self, cur: usize, visited: u64) -> bool {
        if visited == self.full {
            return self.d.has_arc(cur, 0);
        }
        if self.failed.contains(&(cur, visited)) {
            return false;
        }
        let open = self.d.out[cur] & !visited;
        let mut cands: Vec<(u32, usize)> = (0..self.d.n)
            .filter(|&c| (open >> c) & 1 == 1)
            .map(|c| ((self.d.out[c] & !visited & !(1 << c)).count_ones(), c))
            .collect();
        cands.sort_unstable();
        for (_, c) in cands {
            self.path.push(c);
            if self.extend(c, visited | (1 << c)) {
                return true;
            }
            self.path.pop();
        }
        self.failed.insert((cur, visited));
        false
    }
}
