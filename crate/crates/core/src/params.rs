use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Integer and real parameters shared by the pipeline.
///
/// The counts satisfy `part_count = t(k-1)+1`, `m = part_count * mtilde` and
/// `splitting_vertices = part_count * m`; construction rejects anything else.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParameters")]
pub struct Parameters {
    k: usize,
    j: usize,
    t: usize,
    mtilde: usize,
    part_count: usize,
    m: usize,
    splitting_vertices: usize,
    epsilon: f64,
    mu: f64,
    gamma: f64,
    beta: f64,
    threshold: f64,
}

#[derive(Deserialize)]
struct RawParameters {
    k: usize,
    j: usize,
    t: usize,
    mtilde: usize,
    part_count: usize,
    m: usize,
    splitting_vertices: usize,
    epsilon: f64,
    mu: f64,
    gamma: f64,
    beta: f64,
    threshold: f64,
}

impl TryFrom<RawParameters> for Parameters {
    type Error = Error;

    fn try_from(r: RawParameters) -> Result<Parameters> {
        Parameters::from_counts(r.k, r.j, r.t, r.mtilde, r.part_count, r.m, r.splitting_vertices)?
            .with_reals(r.epsilon, r.mu, r.gamma, r.beta, r.threshold)
    }
}

impl Parameters {
    pub const DEFAULT_EPSILON: f64 = 0.1;
    pub const DEFAULT_MU: f64 = 0.05;
    pub const DEFAULT_GAMMA: f64 = 0.01;
    pub const DEFAULT_BETA: f64 = 0.5;

    /// Derives `part_count`, `m` and `splitting_vertices` from `k`, `t`, `mtilde`.
    pub fn new(k: usize, j: usize, t: usize, mtilde: usize) -> Result<Parameters> {
        if k < 2 {
            return Err(invalid(format!("k = {k} must be at least 2")));
        }
        if t == 0 || mtilde == 0 {
            return Err(invalid("t and mtilde must be positive"));
        }
        let part_count = t * (k - 1) + 1;
        let m = part_count * mtilde;
        Parameters::from_counts(k, j, t, mtilde, part_count, m, part_count * m)
    }

    /// Checks the count identities explicitly.
    pub fn from_counts(
        k: usize,
        j: usize,
        t: usize,
        mtilde: usize,
        part_count: usize,
        m: usize,
        splitting_vertices: usize,
    ) -> Result<Parameters> {
        if k < 2 {
            return Err(invalid(format!("k = {k} must be at least 2")));
        }
        if j == 0 || j >= k {
            return Err(invalid(format!("j = {j} must lie in 1..={}", k - 1)));
        }
        if t == 0 || mtilde == 0 {
            return Err(invalid("t and mtilde must be positive"));
        }
        if part_count != t * (k - 1) + 1 {
            return Err(invalid(format!(
                "part count {part_count} differs from t(k-1)+1 = {}",
                t * (k - 1) + 1
            )));
        }
        if m != part_count * mtilde {
            return Err(invalid(format!(
                "m = {m} differs from part_count * mtilde = {}",
                part_count * mtilde
            )));
        }
        if splitting_vertices != part_count * m {
            return Err(invalid(format!(
                "splitting vertex count {splitting_vertices} differs from part_count * m = {}",
                part_count * m
            )));
        }
        Ok(Parameters {
            k,
            j,
            t,
            mtilde,
            part_count,
            m,
            splitting_vertices,
            epsilon: Self::DEFAULT_EPSILON,
            mu: Self::DEFAULT_MU,
            gamma: Self::DEFAULT_GAMMA,
            beta: Self::DEFAULT_BETA,
            threshold: 0.0,
        })
    }

    pub fn with_reals(
        mut self,
        epsilon: f64,
        mu: f64,
        gamma: f64,
        beta: f64,
        threshold: f64,
    ) -> Result<Parameters> {
        for (name, x) in [("epsilon", epsilon), ("mu", mu), ("gamma", gamma), ("beta", beta)] {
            if !(x > 0.0 && x < 1.0) {
                return Err(invalid(format!("{name} = {x} must lie in (0, 1)")));
            }
        }
        if !(threshold >= 0.0 && threshold.is_finite()) {
            return Err(invalid(format!("threshold = {threshold} must be finite and non-negative")));
        }
        self.epsilon = epsilon;
        self.mu = mu;
        self.gamma = gamma;
        self.beta = beta;
        self.threshold = threshold;
        Ok(self)
    }

    pub fn k(&self) -> usize {
        self.k
    }
    pub fn j(&self) -> usize {
        self.j
    }
    pub fn t(&self) -> usize {
        self.t
    }
    pub fn mtilde(&self) -> usize {
        self.mtilde
    }
    /// `T = t(k-1)+1`.
    pub fn part_count(&self) -> usize {
        self.part_count
    }
    /// Number of paths in a splitting.
    pub fn m(&self) -> usize {
        self.m
    }
    /// `M = T m`, the number of vertices covered by a splitting.
    pub fn splitting_vertices(&self) -> usize {
        self.splitting_vertices
    }
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn threshold(&self) -> f64 {
        self.threshold
    }
}
