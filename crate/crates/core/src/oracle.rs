//! Exhaustive solvers over all set partitions of small point sets.
//!
//! Partitions are enumerated as restricted-growth strings: `a[0] = 0` and
//! `a[i] ≤ 1 + max(a[..i])`, which lists each of the Bell(n) partitions exactly once.

use crate::consensus::{consensus_objective, ConsensusInstance, Objective};
use crate::correlation::{cc_cost, CorrelationInstance};
use crate::error::{Error, Result};
use crate::fairness::{is_multiple_of, reduced_profile, ColorAssignment, ColorProfile};
use crate::partition::{Clustering, PairDistance};

/// Default largest point count the oracle accepts.
pub const DEFAULT_LIMIT: usize = 13;
/// Largest point count any override may allow.
pub const HARD_LIMIT: usize = 15;
/// Environment variable consulted by [`Oracle::from_env`].
pub const LIMIT_ENV: &str = "FAIRCLUST_ORACLE_LIMIT";

/// Iterator over all partitions of `0..n` in lexicographic restricted-growth order.
#[derive(Debug, Clone)]
pub struct PartitionIterator {
    rgs: Vec<u32>,
    // prefix_max[i] = max(rgs[..=i])
    prefix_max: Vec<u32>,
    started: bool,
    done: bool,
}

impl PartitionIterator {
    fn new(n: usize) -> Self {
        PartitionIterator { rgs: vec![0; n], prefix_max: vec![0; n], started: false, done: false }
    }

    /// Moves to the next restricted-growth string; returns it, or `None` when exhausted.
    fn advance(&mut self) -> Option<&[u32]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.rgs);
        }
        let n = self.rgs.len();
        let mut i = n;
        while i > 1 {
            i -= 1;
            if self.rgs[i] <= self.prefix_max[i - 1] {
                self.rgs[i] += 1;
                self.prefix_max[i] = self.prefix_max[i - 1].max(self.rgs[i]);
                for j in i + 1..n {
                    self.rgs[j] = 0;
                    self.prefix_max[j] = self.prefix_max[i];
                }
                return Some(&self.rgs);
            }
        }
        self.done = true;
        None
    }
}

impl Iterator for PartitionIterator {
    type Item = Clustering;

    fn next(&mut self) -> Option<Clustering> {
        self.advance().map(|rgs| Clustering::from_dense_labels(rgs.to_vec(), rgs.len()))
    }
}

/// Exhaustive solver with a guard on the point count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Oracle {
    limit: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle { limit: DEFAULT_LIMIT }
    }
}

impl Oracle {
    pub fn new() -> Self {
        Self::default()
    }

    /// Raises (or lowers) the guard; anything above [`HARD_LIMIT`] is rejected.
    pub fn with_limit(limit: usize) -> Result<Self> {
        if limit > HARD_LIMIT {
            return Err(Error::OracleLimitTooHigh(limit));
        }
        Ok(Oracle { limit })
    }

    /// Reads the guard from `FAIRCLUST_ORACLE_LIMIT`, falling back to the default.
    pub fn from_env() -> Result<Self> {
        match std::env::var(LIMIT_ENV) {
            Ok(v) => {
                let limit = v.trim().parse().map_err(|_| Error::OracleLimitTooHigh(usize::MAX))?;
                Self::with_limit(limit)
            }
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    fn guard(&self, n: usize) -> Result<()> {
        if n > self.limit {
            return Err(Error::OracleLimit { n, limit: self.limit });
        }
        Ok(())
    }

    pub fn partitions(&self, n: usize) -> Result<PartitionIterator> {
        self.guard(n)?;
        Ok(PartitionIterator::new(n))
    }

    /// Minimizes `cost` over all partitions accepted by `keep`; ties go to the earliest
    /// partition in enumeration order. `keep` and `cost` see restricted-growth strings.
    pub fn minimize<K, C>(&self, n: usize, mut keep: K, mut cost: C) -> Result<Option<(Clustering, C::Output)>>
    where
        K: FnMut(&[u32]) -> bool,
        C: CostFn,
    {
        self.guard(n)?;
        let mut it = PartitionIterator::new(n);
        let mut best: Option<(Vec<u32>, C::Output)> = None;
        while let Some(rgs) = it.advance() {
            if !keep(rgs) {
                continue;
            }
            let value = cost.eval(rgs);
            if best.as_ref().is_none_or(|(_, b)| value < *b) {
                best = Some((rgs.to_vec(), value));
            }
        }
        Ok(best.map(|(rgs, v)| {
            let n = rgs.len();
            (Clustering::from_dense_labels(rgs, n), v)
        }))
    }

    /// Closest clustering to `d` among those satisfying `keep`.
    pub fn closest_by<K>(&self, d: &Clustering, keep: K) -> Result<Option<(Clustering, PairDistance)>>
    where
        K: FnMut(&[u32]) -> bool,
    {
        let labels = d.labels().to_vec();
        self.minimize(d.n_points(), keep, move |rgs: &[u32]| PairDistance(naive_distance(&labels, rgs)))
    }

    /// A closest fair clustering to `d` and its distance.
    pub fn closest_fair(&self, d: &Clustering, colors: &ColorAssignment) -> Result<(Clustering, PairDistance)> {
        colors.check_points(d)?;
        let p = reduced_profile(colors).p().to_vec();
        self.closest_by(d, fair_filter(colors, p))?
            .ok_or_else(|| Error::Invariant("no fair partition found".into()))
    }

    /// A closest p-divisible clustering to `d` and its distance.
    pub fn closest_pdc(
        &self,
        d: &Clustering,
        colors: &ColorAssignment,
        profile: &ColorProfile,
    ) -> Result<(Clustering, PairDistance)> {
        colors.check_points(d)?;
        let p = profile.p().to_vec();
        if p.len() != colors.k() {
            return Err(Error::InconsistentProfile { profile: p, counts: colors.counts().to_vec() });
        }
        let k = colors.k();
        let col = colors.colors().to_vec();
        let mut hist = Vec::new();
        let keep = move |rgs: &[u32]| {
            fill_histogram(&mut hist, rgs, &col, k);
            hist.chunks(k.max(1)).all(|row| row.iter().zip(&p).all(|(&x, &pj)| x % pj == 0))
        };
        self.closest_by(d, keep)?.ok_or_else(|| Error::Invariant("no p-divisible partition found".into()))
    }

    /// Optimal (unconstrained) correlation clustering.
    pub fn correlation(&self, inst: &CorrelationInstance) -> Result<(Clustering, u64)> {
        let n = inst.n_points();
        let edges = inst.plus_edges().to_vec();
        let cost = move |rgs: &[u32]| naive_cc_cost(n, &edges, rgs);
        self.minimize(n, |_: &[u32]| true, cost)?
            .ok_or_else(|| Error::Invariant("no partition found".into()))
    }

    /// Optimal fair correlation clustering.
    pub fn fair_correlation(&self, inst: &CorrelationInstance, colors: &ColorAssignment) -> Result<(Clustering, u64)> {
        let n = inst.n_points();
        if colors.n_points() != n {
            return Err(Error::PointSetMismatch { left: n, right: colors.n_points() });
        }
        let p = reduced_profile(colors).p().to_vec();
        let edges = inst.plus_edges().to_vec();
        let cost = move |rgs: &[u32]| naive_cc_cost(n, &edges, rgs);
        let (c, v) = self
            .minimize(n, fair_filter(colors, p), cost)?
            .ok_or_else(|| Error::Invariant("no fair partition found".into()))?;
        debug_assert_eq!(cc_cost(inst, &c).ok(), Some(v));
        Ok((c, v))
    }

    /// Optimal fair consensus clustering.
    pub fn fair_consensus(&self, inst: &ConsensusInstance, colors: &ColorAssignment) -> Result<(Clustering, Objective)> {
        let n = inst.n_points();
        if colors.n_points() != n {
            return Err(Error::PointSetMismatch { left: n, right: colors.n_points() });
        }
        let p = reduced_profile(colors).p().to_vec();
        let inputs: Vec<Vec<u32>> = inst.inputs().iter().map(|c| c.labels().to_vec()).collect();
        let norm = inst.norm();
        let cost = move |rgs: &[u32]| {
            let dists: Vec<u64> = inputs.iter().map(|l| naive_distance(l, rgs)).collect();
            Objective::from_distances(norm, &dists)
        };
        let (c, v) = self
            .minimize(n, fair_filter(colors, p), cost)?
            .ok_or_else(|| Error::Invariant("no fair partition found".into()))?;
        debug_assert_eq!(consensus_objective(inst, &c).ok().as_ref(), Some(&v));
        Ok((c, v))
    }
}

/// Evaluates a candidate partition given as a restricted-growth string.
pub trait CostFn {
    type Output: PartialOrd;
    fn eval(&mut self, rgs: &[u32]) -> Self::Output;
}

impl<F, T> CostFn for F
where
    F: FnMut(&[u32]) -> T,
    T: PartialOrd,
{
    type Output = T;
    fn eval(&mut self, rgs: &[u32]) -> T {
        self(rgs)
    }
}

fn fill_histogram(hist: &mut Vec<u64>, rgs: &[u32], colors: &[u32], k: usize) {
    let blocks = rgs.iter().max().map_or(0, |&m| m as usize + 1);
    hist.clear();
    hist.resize(blocks * k, 0);
    for (&b, &c) in rgs.iter().zip(colors) {
        hist[b as usize * k + c as usize] += 1;
    }
}

fn fair_filter(colors: &ColorAssignment, p: Vec<u64>) -> impl FnMut(&[u32]) -> bool {
    let k = colors.k();
    let col = colors.colors().to_vec();
    let mut hist = Vec::new();
    move |rgs: &[u32]| {
        fill_histogram(&mut hist, rgs, &col, k);
        hist.chunks(k.max(1)).all(|row| is_multiple_of(row, &p))
    }
}

/// Direct `O(n²)` pair enumeration over label vectors.
pub fn naive_distance(a: &[u32], b: &[u32]) -> u64 {
    let mut d = 0;
    for u in 0..a.len() {
        for v in u + 1..a.len() {
            if (a[u] == a[v]) != (b[u] == b[v]) {
                d += 1;
            }
        }
    }
    d
}

fn naive_cc_cost(n: usize, plus: &[(u32, u32)], rgs: &[u32]) -> u64 {
    let mut intra_plus = 0u64;
    for &(u, v) in plus {
        if rgs[u as usize] == rgs[v as usize] {
            intra_plus += 1;
        }
    }
    let mut intra = 0u64;
    for u in 0..n {
        for v in u + 1..n {
            if rgs[u] == rgs[v] {
                intra += 1;
            }
        }
    }
    (plus.len() as u64 - intra_plus) + (intra - intra_plus)
}

/// All partitions of `0..n` under the default guard.
pub fn partitions(n: usize) -> Result<PartitionIterator> {
    Oracle::default().partitions(n)
}

pub fn exact_closest_fair(d: &Clustering, colors: &ColorAssignment) -> Result<(Clustering, PairDistance)> {
    Oracle::default().closest_fair(d, colors)
}

pub fn exact_closest_pdc(
    d: &Clustering,
    colors: &ColorAssignment,
    profile: &ColorProfile,
) -> Result<(Clustering, PairDistance)> {
    Oracle::default().closest_pdc(d, colors, profile)
}

pub fn exact_fair_cc(inst: &CorrelationInstance, colors: &ColorAssignment) -> Result<(Clustering, u64)> {
    Oracle::default().fair_correlation(inst, colors)
}

pub fn exact_fair_consensus(inst: &ConsensusInstance, colors: &ColorAssignment) -> Result<(Clustering, Objective)> {
    Oracle::default().fair_consensus(inst, colors)
}
