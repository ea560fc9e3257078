//! Fair correlation clustering on complete signed graphs.
//!
//! Only the "+" edges are stored; every other pair is implicitly "−".

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fairness::ColorAssignment;
use crate::fairify::{fairify, FairifyMode};
use crate::oracle::Oracle;
use crate::partition::{pairs, Clustering, MAX_POINTS};

/// A complete signed graph on `0..n`, encoded by its "+" edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrelationInstance {
    n: usize,
    plus: Vec<(u32, u32)>,
    // CSR adjacency over the "+" edges
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl CorrelationInstance {
    /// Edges may be given in either orientation; self-loops, out-of-range endpoints and
    /// repeated pairs are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n > MAX_POINTS {
            return Err(Error::TooManyPoints(n));
        }
        let mut plus = Vec::new();
        for (u, v) in edges {
            if u == v || u >= n || v >= n {
                return Err(Error::InvalidEdge(u, v));
            }
            plus.push((u.min(v) as u32, u.max(v) as u32));
        }
        plus.sort_unstable();
        if let Some(w) = plus.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0 as usize, w[0].1 as usize));
        }
        let mut degree = vec![0usize; n + 1];
        for &(u, v) in &plus {
            degree[u as usize + 1] += 1;
            degree[v as usize + 1] += 1;
        }
        for i in 0..n {
            degree[i + 1] += degree[i];
        }
        let offsets = degree;
        let mut fill = offsets.clone();
        let mut neighbors = vec![0u32; 2 * plus.len()];
        for &(u, v) in &plus {
            neighbors[fill[u as usize]] = v;
            fill[u as usize] += 1;
            neighbors[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        Ok(CorrelationInstance { n, plus, offsets, neighbors })
    }

    pub fn n_points(&self) -> usize {
        self.n
    }

    /// "+" edges as `(u, v)` with `u < v`, sorted.
    pub fn plus_edges(&self) -> &[(u32, u32)] {
        &self.plus
    }

    pub fn neighbors(&self, u: usize) -> &[u32] {
        &self.neighbors[self.offsets[u]..self.offsets[u + 1]]
    }

    fn check(&self, c: &Clustering) -> Result<()> {
        if c.n_points() != self.n {
            return Err(Error::PointSetMismatch { left: self.n, right: c.n_points() });
        }
        Ok(())
    }

    fn intra_plus(&self, c: &Clustering) -> u64 {
        self.plus.iter().filter(|&&(u, v)| c.together(u as usize, v as usize)).count() as u64
    }
}

/// Disagreements: "+" edges between clusters plus "−" pairs inside clusters.
pub fn cc_cost(inst: &CorrelationInstance, c: &Clustering) -> Result<u64> {
    inst.check(c)?;
    let intra_plus = inst.intra_plus(c);
    Ok((inst.plus.len() as u64 - intra_plus) + (c.intra_pairs() - intra_plus))
}

/// Agreements: "+" edges inside clusters plus "−" pairs between clusters.
pub fn agreements(inst: &CorrelationInstance, c: &Clustering) -> Result<u64> {
    inst.check(c)?;
    let intra_plus = inst.intra_plus(c);
    let inter_pairs = pairs(inst.n as u64) - c.intra_pairs();
    let inter_plus = inst.plus.len() as u64 - intra_plus;
    Ok(intra_plus + (inter_pairs - inter_plus))
}

/// Randomized pivot: visit points in a seeded random order; each still unclustered point
/// opens a cluster with its unclustered "+" neighbors.
pub fn pivot_cc(inst: &CorrelationInstance, seed: u64) -> Clustering {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<u32> = (0..inst.n as u32).collect();
    order.shuffle(&mut rng);
    let mut label = vec![u32::MAX; inst.n];
    let mut next = 0u32;
    for &pivot in &order {
        if label[pivot as usize] != u32::MAX {
            continue;
        }
        label[pivot as usize] = next;
        for &v in inst.neighbors(pivot as usize) {
            if label[v as usize] == u32::MAX {
                label[v as usize] = next;
            }
        }
        next += 1;
    }
    Clustering::from_dense_labels(label, next as usize)
}

/// Source of the unconstrained clustering that gets fairified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Baseline {
    Pivot { seed: u64 },
    /// Exhaustive optimum; small instances only.
    Exact(Oracle),
    Provided(Clustering),
}

impl Baseline {
    pub fn run(&self, inst: &CorrelationInstance) -> Result<Clustering> {
        match self {
            Baseline::Pivot { seed } => Ok(pivot_cc(inst, *seed)),
            Baseline::Exact(oracle) => Ok(oracle.correlation(inst)?.0),
            Baseline::Provided(c) => {
                inst.check(c)?;
                Ok(c.clone())
            }
        }
    }
}

/// Runs the baseline, then moves its output to a nearby fair clustering.
pub fn fairify_cc(inst: &CorrelationInstance, colors: &ColorAssignment, baseline: &Baseline) -> Result<Clustering> {
    let d = baseline.run(inst)?;
    fairify(&d, colors, FairifyMode::Auto)
}
