//! Color bookkeeping: global color profiles, fairness and p-divisibility predicates, and
//! the surplus/deficit primitives shared by the balancing algorithms.

use crate::error::{Error, Result};
use crate::partition::{Clustering, PointId, MAX_POINTS};

/// Color id in `0..k`.
pub type ColorId = usize;

/// One color per point, with every color class non-empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorAssignment {
    colors: Vec<u32>,
    counts: Vec<u64>,
}

impl ColorAssignment {
    /// Infers `k` as one more than the largest color used.
    pub fn new(colors: Vec<ColorId>) -> Result<Self> {
        let k = colors.iter().map(|&c| c + 1).max().unwrap_or(0);
        Self::with_k(colors, k)
    }

    pub fn with_k(colors: Vec<ColorId>, k: usize) -> Result<Self> {
        if colors.len() > MAX_POINTS {
            return Err(Error::TooManyPoints(colors.len()));
        }
        let mut counts = vec![0u64; k];
        for (point, &color) in colors.iter().enumerate() {
            if color >= k {
                return Err(Error::ColorOutOfRange { point, color, k });
            }
            counts[color] += 1;
        }
        if let Some(empty) = counts.iter().position(|&c| c == 0) {
            return Err(Error::EmptyColorClass(empty));
        }
        Ok(ColorAssignment { colors: colors.into_iter().map(|c| c as u32).collect(), counts })
    }

    pub fn k(&self) -> usize {
        self.counts.len()
    }

    pub fn n_points(&self) -> usize {
        self.colors.len()
    }

    pub fn color(&self, point: PointId) -> ColorId {
        self.colors[point] as usize
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    /// Global number of points of each color.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// All color classes have the same size.
    pub fn is_equi(&self) -> bool {
        self.counts.windows(2).all(|w| w[0] == w[1])
    }

    pub(crate) fn check_points(&self, c: &Clustering) -> Result<()> {
        if c.n_points() != self.n_points() {
            return Err(Error::PointSetMismatch { left: c.n_points(), right: self.n_points() });
        }
        Ok(())
    }
}

/// Global color ratio `p₁:…:p_k` with scale `g`, so that color `j` has `p_j · g` points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorProfile {
    p: Vec<u64>,
    scale: u64,
}

impl ColorProfile {
    /// Accepts any ratio (reduced or not) that the global counts follow exactly.
    pub fn new(p: Vec<u64>, colors: &ColorAssignment) -> Result<Self> {
        let counts = colors.counts();
        let inconsistent = || Error::InconsistentProfile { profile: p.clone(), counts: counts.to_vec() };
        if p.len() != counts.len() || p.contains(&0) {
            return Err(inconsistent());
        }
        if p.is_empty() {
            return Ok(ColorProfile { p, scale: 0 });
        }
        let scale = counts[0] / p[0];
        if p.iter().zip(counts).any(|(&pj, &cj)| pj * scale != cj) {
            return Err(inconsistent());
        }
        Ok(ColorProfile { p, scale })
    }

    pub fn p(&self) -> &[u64] {
        &self.p
    }

    pub fn scale(&self) -> u64 {
        self.scale
    }

    /// Size of the smallest fair cluster, `Σ p_j`.
    pub fn unit_size(&self) -> u64 {
        self.p.iter().sum()
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The gcd-reduced global color ratio.
pub fn reduced_profile(colors: &ColorAssignment) -> ColorProfile {
    let g = colors.counts().iter().fold(0, |acc, &c| gcd(acc, c));
    let p = colors.counts().iter().map(|&c| c / g.max(1)).collect();
    ColorProfile { p, scale: g }
}

/// Per-cluster color counts `c_j(Cᵢ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorHistogram {
    k: usize,
    counts: Vec<u64>,
}

impl ColorHistogram {
    pub fn new(c: &Clustering, colors: &ColorAssignment) -> Result<Self> {
        colors.check_points(c)?;
        let k = colors.k();
        let mut counts = vec![0u64; c.n_clusters() * k];
        for (p, &l) in c.labels().iter().enumerate() {
            counts[l as usize * k + colors.color(p)] += 1;
        }
        Ok(ColorHistogram { k, counts })
    }

    pub fn n_clusters(&self) -> usize {
        self.counts.len().checked_div(self.k).unwrap_or(0)
    }

    pub fn row(&self, cluster: usize) -> &[u64] {
        &self.counts[cluster * self.k..(cluster + 1) * self.k]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u64]> {
        self.counts.chunks(self.k.max(1))
    }

    pub fn column_sums(&self) -> Vec<u64> {
        let mut sums = vec![0u64; self.k];
        for row in self.rows() {
            for (s, &x) in sums.iter_mut().zip(row) {
                *s += x;
            }
        }
        sums
    }
}

/// Whether `row` is a non-negative integer multiple of `p`.
pub(crate) fn is_multiple_of(row: &[u64], p: &[u64]) -> bool {
    let t = row[0] / p[0];
    row.iter().zip(p).all(|(&c, &pj)| c == t * pj)
}

/// Every cluster follows the global color ratio exactly.
pub fn is_fair(c: &Clustering, colors: &ColorAssignment) -> Result<bool> {
    let profile = reduced_profile(colors);
    let hist = ColorHistogram::new(c, colors)?;
    let fair = hist.rows().all(|row| is_multiple_of(row, profile.p()));
    Ok(fair)
}

/// Every cluster holds a multiple of `p_j` points of each color `j`.
pub fn is_p_divisible(c: &Clustering, colors: &ColorAssignment, profile: &ColorProfile) -> Result<bool> {
    if profile.p().len() != colors.k() {
        return Err(Error::InconsistentProfile {
            profile: profile.p().to_vec(),
            counts: colors.counts().to_vec(),
        });
    }
    let hist = ColorHistogram::new(c, colors)?;
    let divisible = hist.rows().all(|row| row.iter().zip(profile.p()).all(|(&x, &pj)| x % pj == 0));
    Ok(divisible)
}

/// Whether, inside every cluster, the colors of each block follow the given weights:
/// for block `B` there is a `t` with `c_j(C) = t · weights[j]` for every `j ∈ B`.
pub fn is_block_balanced(
    c: &Clustering,
    colors: &ColorAssignment,
    blocks: &[Vec<ColorId>],
    weights: &[u64],
) -> Result<bool> {
    let hist = ColorHistogram::new(c, colors)?;
    let balanced = hist.rows().all(|row| {
        blocks.iter().filter(|b| !b.is_empty()).all(|block| {
            let sub: Vec<u64> = block.iter().map(|&j| row[j]).collect();
            let w: Vec<u64> = block.iter().map(|&j| weights[j]).collect();
            is_multiple_of(&sub, &w)
        })
    });
    Ok(balanced)
}

/// Surplus of color `color` in `cluster` with respect to `p_j`: the `c_j mod p_j` lowest
/// ids of that color, or `p_j` of them when the count is a positive multiple of `p_j`.
pub fn surplus_pdc(cluster: &[PointId], color: ColorId, p_j: u64, colors: &ColorAssignment) -> Vec<PointId> {
    let mut members: Vec<PointId> = cluster.iter().copied().filter(|&v| colors.color(v) == color).collect();
    members.sort_unstable();
    let count = members.len() as u64;
    let size = if count == 0 {
        0
    } else if count.is_multiple_of(p_j) {
        p_j
    } else {
        count % p_j
    };
    members.truncate(size as usize);
    members
}

/// Number of color-`color` points `cluster` is missing to reach the next multiple of
/// `p_j`; zero for divisible clusters.
pub fn deficit_size(cluster: &[PointId], color: ColorId, p_j: u64, colors: &ColorAssignment) -> u64 {
    let count = cluster.iter().filter(|&&v| colors.color(v) == color).count() as u64;
    match count % p_j {
        0 => 0,
        r => p_j - r,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn palette(counts: &[usize]) -> ColorAssignment {
        let colors = counts.iter().enumerate().flat_map(|(c, &m)| std::iter::repeat_n(c, m)).collect();
        ColorAssignment::new(colors).unwrap()
    }

    #[test]
    fn reduced_profiles() {
        let p = reduced_profile(&palette(&[4, 4, 4]));
        assert_eq!((p.p(), p.scale()), (&[1, 1, 1][..], 4));
        let p = reduced_profile(&palette(&[2, 4, 6]));
        assert_eq!((p.p(), p.scale()), (&[1, 2, 3][..], 2));
        let p = reduced_profile(&palette(&[5, 3]));
        assert_eq!((p.p(), p.scale()), (&[5, 3][..], 1));
    }

    #[test]
    fn empty_color_class_rejected() {
        assert_eq!(ColorAssignment::with_k(vec![0, 0, 2], 3).unwrap_err(), Error::EmptyColorClass(1));
        assert!(matches!(ColorAssignment::with_k(vec![0, 3], 2), Err(Error::ColorOutOfRange { .. })));
    }

    #[test]
    fn profile_consistency() {
        let colors = palette(&[2]);
        assert_eq!(ColorProfile::new(vec![2], &colors).unwrap().scale(), 1);
        assert!(ColorProfile::new(vec![3], &colors).is_err());
        let colors = palette(&[4, 6]);
        assert!(ColorProfile::new(vec![2, 3], &colors).is_ok());
        assert!(ColorProfile::new(vec![1, 1], &colors).is_err());
    }

    #[test]
    fn fairness_examples() {
        // r, r, b, b
        let colors = ColorAssignment::new(vec![0, 0, 1, 1]).unwrap();
        let mixed = Clustering::from_clusters(4, &[vec![0, 2], vec![1, 3]]).unwrap();
        let mono = Clustering::from_clusters(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        assert!(is_fair(&mixed, &colors).unwrap());
        assert!(!is_fair(&mono, &colors).unwrap());

        // counts 2:4:6, cluster with histogram (1,2,3) and its complement
        let colors = palette(&[2, 4, 6]);
        let c = Clustering::from_clusters(12, &[vec![0, 2, 3, 6, 7, 8], vec![1, 4, 5, 9, 10, 11]]).unwrap();
        assert!(is_fair(&c, &colors).unwrap());
    }

    #[test]
    fn divisibility_examples() {
        // p = (2, 3): cluster (4, 3) passes, cluster (4, 2) fails
        let colors = palette(&[4, 6]);
        let profile = ColorProfile::new(vec![2, 3], &colors).unwrap();
        let good = Clustering::from_clusters(10, &[vec![0, 1, 2, 3, 4, 5, 6], vec![7, 8, 9]]).unwrap();
        assert!(is_p_divisible(&good, &colors, &profile).unwrap());
        let bad = Clustering::from_clusters(10, &[vec![0, 1, 2, 3, 4, 5], vec![6, 7, 8, 9]]).unwrap();
        assert!(!is_p_divisible(&bad, &colors, &profile).unwrap());

        let colors = palette(&[3, 3, 3]);
        let profile = reduced_profile(&colors);
        let c = Clustering::from_labels(&[0, 1, 2, 0, 1, 2, 0, 1, 2]).unwrap();
        assert!(is_p_divisible(&c, &colors, &profile).unwrap());
    }

    #[test]
    fn surplus_and_deficit() {
        let colors = palette(&[7, 6, 2]);
        let seven: Vec<usize> = (0..7).collect();
        let six: Vec<usize> = (7..13).collect();
        let two: Vec<usize> = vec![13, 14];
        assert_eq!(surplus_pdc(&seven, 0, 3, &colors), vec![0]);
        assert_eq!(surplus_pdc(&six, 1, 3, &colors).len(), 3);
        assert!(surplus_pdc(&six, 0, 5, &colors).is_empty());
        assert_eq!(deficit_size(&seven, 0, 3, &colors), 2);
        assert_eq!(deficit_size(&six, 1, 3, &colors), 0);
        assert_eq!(deficit_size(&two, 2, 5, &colors), 3);
    }

    #[test]
    fn fair_implies_divisible() {
        let colors = palette(&[2, 4, 6]);
        let profile = reduced_profile(&colors);
        let c = Clustering::single_cluster(12);
        assert!(is_fair(&c, &colors).unwrap());
        assert!(is_p_divisible(&c, &colors, &profile).unwrap());
    }
}
