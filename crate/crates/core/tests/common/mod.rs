#![allow(dead_code)]

use fairclust::{Clustering, ColorAssignment};
use proptest::prelude::*;

/// A clustering of `n` points together with a coloring of the same points.
#[derive(Debug, Clone)]
pub struct Instance {
    pub d: Clustering,
    pub colors: ColorAssignment,
}

fn colors_from_counts(counts: &[u64]) -> Vec<usize> {
    counts.iter().enumerate().flat_map(|(c, &m)| std::iter::repeat_n(c, m as usize)).collect()
}

/// Labels over `0..n` drawn from at most `max_clusters` distinct values.
pub fn clustering(n: usize, max_clusters: usize) -> impl Strategy<Value = Clustering> {
    let m = max_clusters.clamp(1, n.max(1)) as u32;
    prop::collection::vec(0..m, n).prop_map(|l| Clustering::from_labels(&l).unwrap())
}

/// Points colored by `counts` in shuffled order, clustered arbitrarily.
pub fn with_counts(counts: Vec<u64>) -> impl Strategy<Value = Instance> {
    let n = counts.iter().sum::<u64>() as usize;
    let colors = colors_from_counts(&counts);
    (Just(colors).prop_shuffle(), 1..=n.max(1)).prop_flat_map(move |(colors, max_clusters)| {
        let colors = ColorAssignment::new(colors).unwrap();
        clustering(n, max_clusters).prop_map(move |d| Instance { d, colors: colors.clone() })
    })
}

/// `k` equally sized color classes, `k` drawn from `ks`, `n ≤ max_n`.
pub fn equi(ks: Vec<usize>, max_n: usize) -> impl Strategy<Value = Instance> {
    prop::sample::select(ks).prop_flat_map(move |k| {
        (1..=(max_n / k).max(1) as u64).prop_flat_map(move |m| with_counts(vec![m; k]))
    })
}

/// Arbitrary ratios: `k ≤ max_k` colors, class sizes `t · p_j` with `p_j ≤ max_p`, `n ≤ max_n`.
pub fn profiled(max_k: usize, max_p: u64, max_n: usize) -> impl Strategy<Value = Instance> {
    (1..=max_k)
        .prop_flat_map(move |k| prop::collection::vec(1..=max_p, k))
        .prop_filter("fits", move |p| p.iter().sum::<u64>() as usize <= max_n)
        .prop_flat_map(move |p| {
            let max_t = (max_n as u64 / p.iter().sum::<u64>()).max(1);
            (Just(p), 1..=max_t)
        })
        .prop_flat_map(|(p, t)| with_counts(p.iter().map(|&x| x * t).collect()))
}

/// Colors in the order the general pipeline balances them: weight descending, then id.
pub fn sorted_by_weight(p: &[u64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by(|&a, &b| p[b].cmp(&p[a]).then(a.cmp(&b)));
    order
}

/// Partition filter: within every cluster, each block's colors appear in proportion to `weights`.
pub fn block_filter(
    colors: &ColorAssignment,
    blocks: Vec<Vec<usize>>,
    weights: Vec<u64>,
) -> impl FnMut(&[u32]) -> bool {
    let k = colors.k();
    let col = colors.colors().to_vec();
    let mut hist: Vec<u64> = Vec::new();
    move |rgs: &[u32]| {
        let m = rgs.iter().max().map_or(0, |&x| x as usize + 1);
        hist.clear();
        hist.resize(m * k, 0);
        for (&b, &c) in rgs.iter().zip(&col) {
            hist[b as usize * k + c as usize] += 1;
        }
        hist.chunks(k).all(|row| {
            blocks.iter().all(|block| {
                let t = row[block[0]] / weights[block[0]];
                block.iter().all(|&j| row[j] == t * weights[j])
            })
        })
    }
}

/// Per-color point counts over all clusters, which every transformation must preserve.
pub fn column_sums(c: &Clustering, colors: &ColorAssignment) -> Vec<u64> {
    fairclust::ColorHistogram::new(c, colors).unwrap().column_sums()
}
