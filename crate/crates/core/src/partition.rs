//! Canonical partitions of a point set and the pair-counting distance between them.
//!
//! A [`Clustering`] always lives in normalized form: cluster indices are dense and
//! assigned in order of the smallest point each cluster contains. Two clusterings
//! therefore compare equal exactly when they induce the same partition.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use crate::error::{Error, Result};

/// Index of a point in `0..n`.
pub type PointId = usize;

/// Largest supported point count; keeps `C(n, 2)` inside a `u64`.
pub const MAX_POINTS: usize = 1 << 32;

/// Number of unordered point pairs on which two clusterings disagree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PairDistance(pub u64);

impl PairDistance {
    pub fn get(self) -> u64 {
        self.0
    }
}

impl fmt::Display for PairDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `C(s, 2)`.
#[inline]
pub fn pairs(s: u64) -> u64 {
    if s < 2 {
        0
    } else {
        s * (s - 1) / 2
    }
}

/// A partition of the points `0..n` into non-empty clusters.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Clustering {
    labels: Vec<u32>,
    sizes: Vec<u64>,
}

impl Clustering {
    /// Builds a clustering from one arbitrary label per point (`labels[p]` is the label of
    /// point `p`). Labels are renumbered in order of first appearance.
    pub fn from_labels<L: Eq + Hash>(labels: &[L]) -> Result<Self> {
        if labels.len() > MAX_POINTS {
            return Err(Error::TooManyPoints(labels.len()));
        }
        let mut map: HashMap<&L, u32> = HashMap::new();
        let mut dense = Vec::with_capacity(labels.len());
        let mut sizes = Vec::new();
        for label in labels {
            let next = sizes.len() as u32;
            let id = *map.entry(label).or_insert(next);
            if id == next {
                sizes.push(0);
            }
            sizes[id as usize] += 1;
            dense.push(id);
        }
        Ok(Clustering { labels: dense, sizes })
    }

    /// Like [`Clustering::from_labels`] for labels already in `0..bound`.
    pub(crate) fn from_dense_labels(mut labels: Vec<u32>, bound: usize) -> Self {
        let mut remap = vec![u32::MAX; bound];
        let mut sizes = Vec::new();
        for l in &mut labels {
            let slot = &mut remap[*l as usize];
            if *slot == u32::MAX {
                *slot = sizes.len() as u32;
                sizes.push(0);
            }
            *l = *slot;
            sizes[*l as usize] += 1;
        }
        Clustering { labels, sizes }
    }

    /// Builds a clustering from `(point, label)` pairs in any order. Every point in
    /// `0..n` must appear exactly once, where `n` is the number of pairs.
    pub fn normalize<L, I>(raw: I) -> Result<Self>
    where
        L: Eq + Hash,
        I: IntoIterator<Item = (PointId, L)>,
    {
        let raw: Vec<(PointId, L)> = raw.into_iter().collect();
        let n = raw.len();
        let mut slots: Vec<Option<L>> = (0..n).map(|_| None).collect();
        for (point, label) in raw {
            // A point id >= n means some id below n is missing.
            let slot = match slots.get_mut(point) {
                Some(slot) => slot,
                None => {
                    let missing = (0..n).find(|&p| slots[p].is_none()).unwrap_or(n);
                    return Err(Error::MissingPoint(missing));
                }
            };
            if slot.is_some() {
                return Err(Error::DuplicatePoint(point));
            }
            *slot = Some(label);
        }
        let labels: Vec<L> = slots
            .into_iter()
            .enumerate()
            .map(|(p, l)| l.ok_or(Error::MissingPoint(p)))
            .collect::<Result<_>>()?;
        Self::from_labels(&labels)
    }

    /// Builds a clustering over `0..n` from explicit member lists. Empty lists are dropped.
    pub fn from_clusters(n: usize, clusters: &[Vec<PointId>]) -> Result<Self> {
        if n > MAX_POINTS {
            return Err(Error::TooManyPoints(n));
        }
        let mut labels = vec![u32::MAX; n];
        for (c, members) in clusters.iter().enumerate() {
            for &p in members {
                if p >= n {
                    return Err(Error::PointOutOfRange { point: p, n });
                }
                if labels[p] != u32::MAX {
                    return Err(Error::DuplicatePoint(p));
                }
                labels[p] = c as u32;
            }
        }
        if let Some(p) = labels.iter().position(|&l| l == u32::MAX) {
            return Err(Error::MissingPoint(p));
        }
        Ok(Self::from_dense_labels(labels, clusters.len()))
    }

    /// Every point in its own cluster.
    pub fn singletons(n: usize) -> Self {
        Clustering { labels: (0..n as u32).collect(), sizes: vec![1; n] }
    }

    /// All points in one cluster (no clusters at all when `n == 0`).
    pub fn single_cluster(n: usize) -> Self {
        let sizes = if n == 0 { vec![] } else { vec![n as u64] };
        Clustering { labels: vec![0; n], sizes }
    }

    pub fn n_points(&self) -> usize {
        self.labels.len()
    }

    pub fn n_clusters(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Cluster index of `point`.
    pub fn label(&self, point: PointId) -> usize {
        self.labels[point] as usize
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    /// Member lists, one per cluster, each in ascending point order.
    pub fn clusters(&self) -> Vec<Vec<PointId>> {
        let mut out: Vec<Vec<PointId>> =
            self.sizes.iter().map(|&s| Vec::with_capacity(s as usize)).collect();
        for (p, &l) in self.labels.iter().enumerate() {
            out[l as usize].push(p);
        }
        out
    }

    /// Whether `u` and `v` share a cluster.
    pub fn together(&self, u: PointId, v: PointId) -> bool {
        self.labels[u] == self.labels[v]
    }

    /// Number of co-clustered unordered pairs.
    pub fn intra_pairs(&self) -> u64 {
        self.sizes.iter().map(|&s| pairs(s)).sum()
    }
}

impl fmt::Debug for Clustering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.clusters()).finish()
    }
}

/// Pair-counting (Mirkin) distance: the number of unordered pairs that are together in
/// exactly one of `a` and `b`.
///
/// Runs in `O(n + #non-empty intersections)` via
/// `Σ C(|Aᵢ|,2) + Σ C(|Bⱼ|,2) − 2·Σ C(|Aᵢ∩Bⱼ|,2)`.
pub fn pair_distance(a: &Clustering, b: &Clustering) -> Result<PairDistance> {
    if a.n_points() != b.n_points() {
        return Err(Error::PointSetMismatch { left: a.n_points(), right: b.n_points() });
    }
    let mut table: HashMap<u64, u64> = HashMap::new();
    for (&la, &lb) in a.labels.iter().zip(&b.labels) {
        *table.entry(((la as u64) << 32) | lb as u64).or_insert(0) += 1;
    }
    let both: u64 = table.values().map(|&s| pairs(s)).sum();
    Ok(PairDistance(a.intra_pairs() + b.intra_pairs() - 2 * both))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(a: &Clustering, b: &Clustering) -> u64 {
        let n = a.n_points();
        let mut d = 0;
        for u in 0..n {
            for v in u + 1..n {
                if a.together(u, v) != b.together(u, v) {
                    d += 1;
                }
            }
        }
        d
    }

    #[test]
    fn normalize_string_labels() {
        let c = Clustering::normalize(vec![(0, "a"), (1, "a"), (2, "b")]).unwrap();
        assert_eq!(c.clusters(), vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn normalize_empty() {
        let c = Clustering::normalize(Vec::<(usize, u8)>::new()).unwrap();
        assert_eq!(c.n_points(), 0);
        assert_eq!(c.n_clusters(), 0);
    }

    #[test]
    fn normalize_first_appearance_order() {
        let c = Clustering::normalize(vec![(0, 7), (1, 3), (2, 7)]).unwrap();
        assert_eq!(c.clusters(), vec![vec![0, 2], vec![1]]);
        assert_eq!(c.labels(), &[0, 1, 0]);
    }

    #[test]
    fn normalize_is_order_independent() {
        let c = Clustering::normalize(vec![(2, 7), (0, 7), (1, 3)]).unwrap();
        assert_eq!(c.labels(), &[0, 1, 0]);
    }

    #[test]
    fn normalize_rejects_duplicates_and_gaps() {
        assert_eq!(
            Clustering::normalize(vec![(0, 1), (0, 2)]).unwrap_err(),
            Error::DuplicatePoint(0)
        );
        assert_eq!(
            Clustering::normalize(vec![(0, 1), (2, 2)]).unwrap_err(),
            Error::MissingPoint(1)
        );
    }

    #[test]
    fn from_clusters_drops_empty() {
        let c = Clustering::from_clusters(3, &[vec![], vec![2], vec![0, 1]]).unwrap();
        assert_eq!(c.clusters(), vec![vec![0, 1], vec![2]]);
        assert!(Clustering::from_clusters(3, &[vec![0, 1]]).is_err());
        assert!(Clustering::from_clusters(2, &[vec![0, 1, 2]]).is_err());
    }

    #[test]
    fn distance_examples() {
        let c = Clustering::from_labels(&[0, 0, 1, 2, 2]).unwrap();
        assert_eq!(pair_distance(&c, &c).unwrap().get(), 0);

        let a = Clustering::from_clusters(3, &[vec![0, 1], vec![2]]).unwrap();
        let b = Clustering::from_clusters(3, &[vec![0], vec![1, 2]]).unwrap();
        assert_eq!(naive(&a, &b), 2);
        assert_eq!(pair_distance(&a, &b).unwrap().get(), 2);

        let s = Clustering::singletons(4);
        let one = Clustering::single_cluster(4);
        assert_eq!(pair_distance(&s, &one).unwrap().get(), 6);
    }

    #[test]
    fn distance_rejects_mismatch() {
        let a = Clustering::singletons(3);
        let b = Clustering::singletons(4);
        assert!(matches!(pair_distance(&a, &b), Err(Error::PointSetMismatch { .. })));
    }
}
