//! Fair consensus clustering under an ℓ-norm (or max) of pair-counting distances.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fairness::ColorAssignment;
use crate::fairify::{fairify, FairifyMode};
use crate::partition::{pair_distance, Clustering};

/// How per-input distances are aggregated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    /// `(Σ dᵢ^ℓ)^(1/ℓ)`; `L(1)` is the median objective.
    L(u32),
    /// `max dᵢ`.
    Center,
}

impl std::str::FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Norm> {
        if s.eq_ignore_ascii_case("center") {
            return Ok(Norm::Center);
        }
        match s.parse::<u32>() {
            Ok(l) if l > 0 => Ok(Norm::L(l)),
            _ => Err(Error::InvalidNorm),
        }
    }
}

/// Exact objective value. For ℓ-norms the ℓ-th power is kept, so comparisons are exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Objective {
    Power { exponent: u32, sum: BigUint },
    Max(u64),
}

impl Objective {
    pub fn from_distances(norm: Norm, dists: &[u64]) -> Objective {
        match norm {
            Norm::L(l) => {
                let sum = dists.iter().fold(BigUint::zero(), |acc, &d| acc + BigUint::from(d).pow(l));
                Objective::Power { exponent: l, sum }
            }
            Norm::Center => Objective::Max(dists.iter().copied().max().unwrap_or(0)),
        }
    }

    /// The objective as a float (the ℓ-th root of the power sum).
    pub fn value(&self) -> f64 {
        match self {
            Objective::Power { exponent, sum } => {
                let s = sum.to_f64().unwrap_or(f64::INFINITY);
                if *exponent == 1 {
                    s
                } else {
                    s.powf(1.0 / *exponent as f64)
                }
            }
            Objective::Max(m) => *m as f64,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Objective::Power { sum, .. } => sum.is_zero(),
            Objective::Max(m) => *m == 0,
        }
    }
}

impl PartialOrd for Objective {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Objective::Power { exponent: a, sum: x }, Objective::Power { exponent: b, sum: y }) if a == b => {
                Some(x.cmp(y))
            }
            (Objective::Max(x), Objective::Max(y)) => Some(x.cmp(y)),
            _ => None,
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Objective::Power { exponent: 1, sum } => write!(f, "{sum}"),
            Objective::Max(m) => write!(f, "{m}"),
            _ => write!(f, "{}", self.value()),
        }
    }
}

/// `m ≥ 1` clusterings of one point set together with the aggregation norm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsensusInstance {
    inputs: Vec<Clustering>,
    norm: Norm,
}

impl ConsensusInstance {
    pub fn new(inputs: Vec<Clustering>, norm: Norm) -> Result<Self> {
        let first = inputs.first().ok_or(Error::NoInputs)?;
        if let Some(bad) = inputs.iter().find(|c| c.n_points() != first.n_points()) {
            return Err(Error::PointSetMismatch { left: first.n_points(), right: bad.n_points() });
        }
        if norm == Norm::L(0) {
            return Err(Error::InvalidNorm);
        }
        Ok(ConsensusInstance { inputs, norm })
    }

    pub fn inputs(&self) -> &[Clustering] {
        &self.inputs
    }

    pub fn norm(&self) -> Norm {
        self.norm
    }

    pub fn n_points(&self) -> usize {
        self.inputs[0].n_points()
    }
}

pub fn consensus_objective(inst: &ConsensusInstance, c: &Clustering) -> Result<Objective> {
    let dists = inst.inputs.iter().map(|i| pair_distance(i, c).map(|d| d.get())).collect::<Result<Vec<_>>>()?;
    Ok(Objective::from_distances(inst.norm, &dists))
}

fn argmin(values: &[Objective]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if v < &values[best] {
            best = i;
        }
    }
    best
}

/// Index of the input with the smallest objective (ties to the lowest index).
pub fn best_input(inst: &ConsensusInstance) -> Result<usize> {
    let values = inst.inputs.iter().map(|c| consensus_objective(inst, c)).collect::<Result<Vec<_>>>()?;
    Ok(argmin(&values))
}

/// Result of [`fair_consensus_detailed`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsensusOutcome {
    /// Index of the input whose fairified version was selected.
    pub chosen: usize,
    pub clustering: Clustering,
    pub objective: Objective,
}

/// Fairifies every input and keeps the candidate with the smallest objective.
pub fn fair_consensus_detailed(inst: &ConsensusInstance, colors: &ColorAssignment) -> Result<ConsensusOutcome> {
    let candidates =
        inst.inputs.iter().map(|c| fairify(c, colors, FairifyMode::Auto)).collect::<Result<Vec<_>>>()?;
    let values = candidates.iter().map(|c| consensus_objective(inst, c)).collect::<Result<Vec<_>>>()?;
    let chosen = argmin(&values);
    let objective = values[chosen].clone();
    let clustering = candidates.into_iter().nth(chosen).unwrap();
    Ok(ConsensusOutcome { chosen, clustering, objective })
}

pub fn fair_consensus(inst: &ConsensusInstance, colors: &ColorAssignment) -> Result<Clustering> {
    Ok(fair_consensus_detailed(inst, colors)?.clustering)
}
