//! Instance generators: seeded random clusterings and the 3-Partition hardness reduction.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};

use fairclust::{Clustering, ColorAssignment, CorrelationInstance};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ratio {
    /// `k` classes of `n / k` points.
    Equi,
    /// Classes of `p_j · n / Σp` points.
    Profile(Vec<u64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClusterLaw {
    /// Labels uniform over the clusters.
    #[default]
    Uniform,
    /// Label `i` with probability proportional to `2^-i`.
    Geometric,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomSpec {
    pub n: usize,
    pub k: usize,
    pub ratio: Ratio,
    pub law: ClusterLaw,
    /// Number of label values; defaults to `⌈√n⌉`.
    pub clusters: Option<usize>,
    pub seed: u64,
}

impl RandomSpec {
    pub fn new(n: usize, k: usize, ratio: Ratio, seed: u64) -> Self {
        RandomSpec { n, k, ratio, law: ClusterLaw::Uniform, clusters: None, seed }
    }

    fn clusters(&self) -> usize {
        self.clusters.unwrap_or_else(|| (self.n as f64).sqrt().ceil() as usize).max(1)
    }
}

/// Exact per-color class sizes for `n` points.
pub fn color_counts(n: usize, k: usize, ratio: &Ratio) -> Result<Vec<u64>> {
    let p = match ratio {
        Ratio::Equi => vec![1; k],
        Ratio::Profile(p) => {
            if p.len() != k {
                return Err(CliError::Invalid(format!("profile has {} entries but k = {k}", p.len())));
            }
            p.clone()
        }
    };
    if k == 0 || p.contains(&0) {
        return Err(CliError::Invalid("need k ≥ 1 and positive profile entries".into()));
    }
    let unit: u64 = p.iter().sum();
    if !(n as u64).is_multiple_of(unit) {
        return Err(CliError::Invalid(format!("n = {n} is not a multiple of the profile sum {unit}")));
    }
    let t = n as u64 / unit;
    Ok(p.iter().map(|&x| x * t).collect())
}

fn shuffled_colors(counts: &[u64], rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut colors: Vec<usize> =
        counts.iter().enumerate().flat_map(|(c, &m)| std::iter::repeat_n(c, m as usize)).collect();
    colors.shuffle(rng);
    colors
}

fn random_labels(n: usize, clusters: usize, law: ClusterLaw, rng: &mut ChaCha8Rng) -> Result<Clustering> {
    let labels: Vec<u32> = match law {
        ClusterLaw::Uniform => (0..n).map(|_| rng.gen_range(0..clusters as u32)).collect(),
        ClusterLaw::Geometric => {
            let g = Geometric::new(0.5).expect("valid probability");
            (0..n)
                .map(|_| loop {
                    let x = g.sample(rng);
                    if x < clusters as u64 {
                        break x as u32;
                    }
                })
                .collect()
        }
    };
    Ok(Clustering::from_labels(&labels)?)
}

/// Deterministic per seed; global color counts match the ratio exactly.
pub fn gen_random(spec: &RandomSpec) -> Result<(Clustering, ColorAssignment)> {
    let (mut inputs, colors) = gen_inputs(spec, 1)?;
    Ok((inputs.pop().unwrap(), colors))
}

/// One coloring and `m` independent clusterings, for consensus instances.
pub fn gen_inputs(spec: &RandomSpec, m: usize) -> Result<(Vec<Clustering>, ColorAssignment)> {
    let counts = color_counts(spec.n, spec.k, &spec.ratio)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let colors = ColorAssignment::with_k(shuffled_colors(&counts, &mut rng), spec.k)?;
    let inputs =
        (0..m).map(|_| random_labels(spec.n, spec.clusters(), spec.law, &mut rng)).collect::<Result<Vec<_>>>()?;
    Ok((inputs, colors))
}

/// "+" exactly between co-clustered points of `planted`, each pair flipped with probability `noise`.
pub fn gen_graph(planted: &Clustering, noise: f64, seed: u64) -> Result<CorrelationInstance> {
    if !(0.0..=1.0).contains(&noise) {
        return Err(CliError::Invalid(format!("noise {noise} is not a probability")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = planted.n_points();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if planted.together(u, v) != rng.gen_bool(noise) {
                edges.push((u, v));
            }
        }
    }
    Ok(CorrelationInstance::new(n, edges)?)
}

/// Largest multiset size for which a missing partition is searched exhaustively.
pub const SEARCH_LIMIT: usize = 15;

/// Output of the reduction: `clustering` holds `d/3` clusters with `T` points of each
/// color `1..k` followed by `d` single-color clusters (color 0) of sizes `x_j`.
#[derive(Debug, Clone)]
pub struct HardnessInstance {
    pub clustering: Clustering,
    pub colors: ColorAssignment,
    pub target: u64,
    pub tau: u64,
    pub partition: Option<Vec<[usize; 3]>>,
    /// A fair clustering at distance exactly `tau`, present when a partition is known.
    pub certificate: Option<Clustering>,
    pub warnings: Vec<String>,
}

/// Triples of indices into `s`, each summing to `target`, covering every index once.
pub fn find_three_partition(s: &[u64], target: u64) -> Option<Vec<[usize; 3]>> {
    fn search(s: &[u64], target: u64, used: &mut [bool], out: &mut Vec<[usize; 3]>) -> bool {
        let Some(a) = used.iter().position(|&u| !u) else {
            return true;
        };
        used[a] = true;
        for b in a + 1..s.len() {
            if used[b] || s[a] + s[b] >= target {
                continue;
            }
            used[b] = true;
            for c in b + 1..s.len() {
                if !used[c] && s[a] + s[b] + s[c] == target {
                    used[c] = true;
                    out.push([a, b, c]);
                    if search(s, target, used, out) {
                        return true;
                    }
                    out.pop();
                    used[c] = false;
                }
            }
            used[b] = false;
        }
        used[a] = false;
        false
    }
    if !s.len().is_multiple_of(3) {
        return None;
    }
    let mut used = vec![false; s.len()];
    let mut out = Vec::new();
    search(s, target, &mut used, &mut out).then_some(out)
}

fn check_partition(s: &[u64], target: u64, partition: &[[usize; 3]]) -> Result<()> {
    let mut seen = vec![false; s.len()];
    for triple in partition {
        for &i in triple {
            if i >= s.len() || std::mem::replace(&mut seen[i], true) {
                return Err(CliError::Invalid(format!("index {i} is out of range or repeated in the partition")));
            }
        }
        if triple.iter().map(|&i| s[i]).sum::<u64>() != target {
            return Err(CliError::Invalid(format!("triple {triple:?} does not sum to {target}")));
        }
    }
    if seen.contains(&false) {
        return Err(CliError::Invalid("partition does not cover every element".into()));
    }
    Ok(())
}

/// Threshold of the reduction. For `k ≥ 4` the half-sum is rounded down, which keeps
/// `dist ≤ τ` unchanged since distances are integers.
pub fn hardness_tau(s: &[u64], k: usize, target: u64) -> u128 {
    let t = target as u128;
    let spread: u128 = s.iter().map(|&x| x as u128 * (t - x as u128)).sum();
    if k == 3 {
        let squares: u128 = s.iter().map(|&x| (x as u128).pow(2)).sum();
        2 * squares + 2 * spread
    } else {
        (s.len() as u128 / 3) * (k as u128 - 1) * t * t + spread / 2
    }
}

pub fn gen_hardness(s: &[u64], k: usize, partition: Option<&[[usize; 3]]>) -> Result<HardnessInstance> {
    let d = s.len();
    if d == 0 || !d.is_multiple_of(3) {
        return Err(CliError::Invalid(format!("multiset size {d} is not a positive multiple of 3")));
    }
    if k < 3 {
        return Err(CliError::Invalid(format!("the reduction needs k ≥ 3, got {k}")));
    }
    if s.contains(&0) {
        return Err(CliError::Invalid("multiset entries must be positive".into()));
    }
    let groups = (d / 3) as u64;
    let total: u64 = s.iter().sum();
    if !total.is_multiple_of(groups) {
        return Err(CliError::Invalid(format!("sum {total} is not divisible by d/3 = {groups}")));
    }
    let target = total / groups;
    let mut warnings = Vec::new();
    for &x in s {
        if 4 * x <= target || 2 * x >= target {
            warnings.push(format!("element {x} lies outside (T/4, T/2) for T = {target}"));
        }
    }
    let tau = u64::try_from(hardness_tau(s, k, target))
        .map_err(|_| CliError::Invalid("threshold exceeds 64 bits".into()))?;

    let t = target as usize;
    let mut colors = Vec::new();
    let mut labels = Vec::new();
    for g in 0..d / 3 {
        for c in 1..k {
            colors.extend(std::iter::repeat_n(c, t));
            labels.extend(std::iter::repeat_n(g, t));
        }
    }
    let red_start = colors.len();
    for (j, &x) in s.iter().enumerate() {
        colors.extend(std::iter::repeat_n(0, x as usize));
        labels.extend(std::iter::repeat_n(d / 3 + j, x as usize));
    }
    let colors = ColorAssignment::with_k(colors, k)?;
    let clustering = Clustering::from_labels(&labels)?;

    let partition = match partition {
        Some(p) => {
            check_partition(s, target, p)?;
            Some(p.to_vec())
        }
        None if d <= SEARCH_LIMIT => find_three_partition(s, target),
        None => None,
    };
    let certificate = partition.as_ref().map(|p| certificate(s, k, target, red_start, p)).transpose()?;
    Ok(HardnessInstance { clustering, colors, target, tau, partition, certificate, warnings })
}

/// For `k = 3` each group cluster is split into pieces holding `x_j` points of both of its
/// colors, each joined with the single-color cluster of size `x_j`. For `k ≥ 4` each group
/// cluster absorbs the three single-color clusters of its triple.
fn certificate(s: &[u64], k: usize, target: u64, red_start: usize, partition: &[[usize; 3]]) -> Result<Clustering> {
    let t = target as usize;
    let mut red_offset = Vec::with_capacity(s.len());
    let mut at = red_start;
    for &x in s {
        red_offset.push(at);
        at += x as usize;
    }
    let mut labels = vec![0usize; at];
    for (g, triple) in partition.iter().enumerate() {
        let group_start = g * (k - 1) * t;
        let mut used = 0;
        for (slot, &j) in triple.iter().enumerate() {
            let x = s[j] as usize;
            let label = if k == 3 { 3 * g + slot } else { g };
            labels[red_offset[j]..red_offset[j] + x].fill(label);
            if k == 3 {
                for c in 0..2 {
                    let start = group_start + c * t + used;
                    labels[start..start + x].fill(label);
                }
                used += x;
            }
        }
        if k > 3 {
            labels[group_start..group_start + (k - 1) * t].fill(g);
        }
    }
    Ok(Clustering::from_labels(&labels)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fairclust::{is_fair, pair_distance};

    const S: [u64; 6] = [5, 6, 7, 5, 6, 7];

    #[test]
    fn random_counts() {
        let (_, colors) = gen_random(&RandomSpec::new(12, 3, Ratio::Equi, 1)).unwrap();
        assert_eq!(colors.counts(), &[4, 4, 4]);
        let (_, colors) = gen_random(&RandomSpec::new(10, 2, Ratio::Profile(vec![3, 2]), 1)).unwrap();
        assert_eq!(colors.counts(), &[6, 4]);
        assert!(gen_random(&RandomSpec::new(10, 3, Ratio::Equi, 1)).is_err());
        assert!(gen_random(&RandomSpec::new(10, 3, Ratio::Profile(vec![3, 2]), 1)).is_err());
    }

    #[test]
    fn random_is_deterministic() {
        let mut spec = RandomSpec::new(60, 3, Ratio::Equi, 9);
        spec.law = ClusterLaw::Geometric;
        assert_eq!(gen_random(&spec).unwrap(), gen_random(&spec).unwrap());
        spec.seed = 10;
        let other = gen_random(&spec).unwrap();
        spec.seed = 9;
        assert_ne!(gen_random(&spec).unwrap(), other);
    }

    #[test]
    fn hardness_thresholds() {
        assert_eq!(hardness_tau(&S, 3, 18), 1296);
        assert_eq!(hardness_tau(&S, 4, 18), 2158);
    }

    #[test]
    fn hardness_certificates() {
        for k in [3, 4, 5] {
            let h = gen_hardness(&S, k, None).unwrap();
            assert_eq!(h.target, 18);
            assert!(h.warnings.is_empty());
            assert_eq!(h.clustering.n_clusters(), 2 + 6);
            let f = h.certificate.expect("partition exists");
            assert!(is_fair(&f, &h.colors).unwrap());
            assert_eq!(pair_distance(&h.clustering, &f).unwrap().get(), h.tau);
        }
    }

    #[test]
    fn hardness_rejections() {
        assert!(gen_hardness(&[1, 2], 3, None).is_err());
        assert!(gen_hardness(&[1, 2, 4, 1, 1, 2], 3, None).is_err());
        assert!(gen_hardness(&S, 2, None).is_err());
        assert!(gen_hardness(&S, 3, Some(&[[0, 1, 2], [0, 4, 5]])).is_err());
        assert!(gen_hardness(&S, 3, Some(&[[0, 1, 3], [2, 4, 5]])).is_err());
        let h = gen_hardness(&[1, 1, 10], 3, None).unwrap();
        assert_eq!(h.warnings.len(), 3);
    }

    #[test]
    fn no_partition_means_no_certificate() {
        // T = 18 but no triple of these sums to 18 while covering all six
        let h = gen_hardness(&[5, 5, 5, 7, 7, 7], 3, None).unwrap();
        assert!(h.partition.is_none() && h.certificate.is_none());
    }
}
