//! Closest fair clustering when every color class has the same size.
//!
//! [`fair_power_of_two`] balances colors pairwise along a doubling block hierarchy: at
//! each level, every cluster sheds the excess of the heavier half-block, and the shed
//! pieces are recombined greedily by [`multi_gm`] into new locally balanced clusters.
//! [`fair_equi`] handles any number of colors by splitting them into power-of-two groups,
//! balancing inside each group, then balancing the groups against each other as
//! meta-colors.

use std::collections::VecDeque;

use crate::buckets::Buckets;
use crate::error::{Error, Result};
use crate::fairness::{ColorAssignment, ColorId};
use crate::general::{balance_meta, MetaColor};
use crate::partition::{Clustering, PointId};

/// A block of color positions at one level of the hierarchy. `colors()[..split]` and
/// `colors()[split..]` are the two blocks of the previous level merged into it; a block
/// carried forward unchanged has an empty right half.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    colors: Vec<usize>,
    split: usize,
}

impl Block {
    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn left(&self) -> &[usize] {
        &self.colors[..self.split]
    }

    pub fn right(&self) -> &[usize] {
        &self.colors[self.split..]
    }

    pub fn is_carried(&self) -> bool {
        self.split == self.colors.len()
    }
}

/// Hierarchical color blocks: level 0 holds singletons, and level `t` merges adjacent
/// pairs of level `t - 1`, carrying an odd last block forward.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSchedule {
    levels: Vec<Vec<Block>>,
}

impl BlockSchedule {
    pub fn new(k: usize) -> Self {
        let mut levels = vec![(0..k).map(|c| Block { colors: vec![c], split: 1 }).collect::<Vec<_>>()];
        while levels.last().map_or(0, Vec::len) > 1 {
            let next = levels
                .last()
                .unwrap()
                .chunks(2)
                .map(|pair| match pair {
                    [a, b] => Block {
                        colors: a.colors.iter().chain(&b.colors).copied().collect(),
                        split: a.colors.len(),
                    },
                    [a] => Block { colors: a.colors.clone(), split: a.colors.len() },
                    _ => unreachable!(),
                })
                .collect();
            levels.push(next);
        }
        BlockSchedule { levels }
    }

    /// Number of balancing iterations, `⌈log₂ k⌉`.
    pub fn iterations(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, i: usize) -> &[Block] {
        &self.levels[i]
    }
}

/// Surplus points cut from one cluster: one id list per block color, all the same length,
/// each in descending id order.
#[derive(Debug)]
struct Batch {
    lists: Vec<Vec<u32>>,
}

impl Batch {
    fn per_color(&self) -> usize {
        self.lists.first().map_or(0, Vec::len)
    }

    fn size(&self) -> usize {
        self.per_color() * self.lists.len()
    }

    fn split_lowest(&mut self, per_color: usize) -> Batch {
        let lists = self
            .lists
            .iter_mut()
            .map(|l| {
                let at = l.len() - per_color;
                l.split_off(at)
            })
            .collect();
        Batch { lists }
    }

    fn into_points(self) -> impl Iterator<Item = u32> {
        self.lists.into_iter().flatten()
    }
}

/// Common per-color count of `block` in bucket `b`.
fn block_level(ws: &Buckets, b: usize, block: &[ColorId]) -> Result<usize> {
    let level = ws.count(b, block[0]);
    if block.iter().any(|&c| ws.count(b, c) != level) {
        return Err(Error::Invariant(format!("block {block:?} is not balanced in cluster {b}")));
    }
    Ok(level)
}

/// Greedy pairing of surplus batches from two blocks of equal width.
fn greedy_merge(side_a: Vec<Batch>, side_b: Vec<Batch>) -> Result<Vec<Vec<u32>>> {
    let total_a: usize = side_a.iter().map(Batch::size).sum();
    let total_b: usize = side_b.iter().map(Batch::size).sum();
    if total_a != total_b {
        return Err(Error::Invariant(format!("surplus pool unbalanced: {total_a} vs {total_b}")));
    }
    let mut qa: VecDeque<Batch> = side_a.into_iter().filter(|b| b.size() > 0).collect();
    let mut qb: VecDeque<Batch> = side_b.into_iter().filter(|b| b.size() > 0).collect();
    let mut out = Vec::new();
    while let (Some(sa), Some(sb)) = (qa.front_mut(), qb.front_mut()) {
        if sa.size() >= sb.size() {
            let part = sa.split_lowest(sb.size() / sa.lists.len());
            let whole = qb.pop_front().unwrap();
            out.push(part.into_points().chain(whole.into_points()).collect());
            if qa.front().is_some_and(|s| s.size() == 0) {
                qa.pop_front();
            }
        } else {
            let part = sb.split_lowest(sa.size() / sb.lists.len());
            let whole = qa.pop_front().unwrap();
            out.push(whole.into_points().chain(part.into_points()).collect());
            if qb.front().is_some_and(|s| s.size() == 0) {
                qb.pop_front();
            }
        }
    }
    Ok(out)
}

/// Equalizes blocks `a` and `b` (same width, each internally balanced) in every cluster.
fn balance_pair(ws: &mut Buckets, a: &[ColorId], b: &[ColorId]) -> Result<()> {
    let mut side_a = Vec::new();
    let mut side_b = Vec::new();
    for bucket in 0..ws.len() {
        let la = block_level(ws, bucket, a)?;
        let lb = block_level(ws, bucket, b)?;
        let (block, excess, side) = match la.cmp(&lb) {
            std::cmp::Ordering::Equal => continue,
            std::cmp::Ordering::Greater => (a, la - lb, &mut side_a),
            std::cmp::Ordering::Less => (b, lb - la, &mut side_b),
        };
        let lists = block.iter().map(|&c| ws.take_lowest(bucket, c, excess)).collect();
        side.push(Batch { lists });
    }
    for set in greedy_merge(side_a, side_b)? {
        ws.push_points(&set);
    }
    Ok(())
}

/// Runs the doubling hierarchy over the colors of `group` (a power-of-two count).
pub(crate) fn balance_power_of_two(
    ws: &mut Buckets,
    group: &[ColorId],
    mut trace: Option<&mut Vec<Clustering>>,
) -> Result<()> {
    let schedule = BlockSchedule::new(group.len());
    for level in 1..=schedule.iterations() {
        for block in schedule.level(level) {
            if block.is_carried() {
                continue;
            }
            let a: Vec<ColorId> = block.left().iter().map(|&i| group[i]).collect();
            let b: Vec<ColorId> = block.right().iter().map(|&i| group[i]).collect();
            balance_pair(ws, &a, &b)?;
        }
        if let Some(t) = trace.as_deref_mut() {
            t.push(ws.to_clustering());
        }
    }
    Ok(())
}

fn check_equi(d: &Clustering, colors: &ColorAssignment) -> Result<()> {
    colors.check_points(d)?;
    if !colors.is_equi() {
        return Err(Error::UnequalColorClasses);
    }
    Ok(())
}

/// Surplus of the heavier block inside `cluster`: `(|A| − |B|)/width` lowest ids of each
/// color of the heavier block. Both blocks must already be internally balanced.
pub fn surplus_equi(
    cluster: &[PointId],
    block_a: &[ColorId],
    block_b: &[ColorId],
    colors: &ColorAssignment,
) -> Result<Vec<PointId>> {
    if block_a.len() != block_b.len() || block_a.is_empty() {
        return Err(Error::Invariant("blocks must be non-empty and of equal width".into()));
    }
    let members_of = |c: ColorId| -> Vec<PointId> {
        let mut m: Vec<PointId> = cluster.iter().copied().filter(|&v| colors.color(v) == c).collect();
        m.sort_unstable();
        m
    };
    let level = |block: &[ColorId]| -> Result<usize> {
        let l = members_of(block[0]).len();
        if block.iter().any(|&c| members_of(c).len() != l) {
            return Err(Error::Invariant(format!("block {block:?} is not balanced")));
        }
        Ok(l)
    };
    let (la, lb) = (level(block_a)?, level(block_b)?);
    let (block, excess) = if la >= lb { (block_a, la - lb) } else { (block_b, lb - la) };
    let mut out: Vec<PointId> = block.iter().flat_map(|&c| members_of(c).into_iter().take(excess)).collect();
    out.sort_unstable();
    Ok(out)
}

fn to_batch(set: &[PointId], block: &[ColorId], colors: &ColorAssignment) -> Result<Batch> {
    let mut lists = vec![Vec::new(); block.len()];
    for &v in set {
        let pos = block
            .iter()
            .position(|&c| c == colors.color(v))
            .ok_or_else(|| Error::Invariant(format!("point {v} has a color outside block {block:?}")))?;
        lists[pos].push(v as u32);
    }
    if lists.iter().any(|l| l.len() != lists[0].len()) {
        return Err(Error::Invariant(format!("set {set:?} is not balanced over {block:?}")));
    }
    for l in &mut lists {
        l.sort_unstable_by(|x, y| y.cmp(x));
    }
    Ok(Batch { lists })
}

/// Greedily pairs surplus sets of two equal-width blocks into sets that hold every color
/// of `block_a ∪ block_b` equally often. Sets are consumed in input order; the larger of
/// each pair is trimmed by lowest ids.
pub fn multi_gm(
    side_a: &[Vec<PointId>],
    side_b: &[Vec<PointId>],
    block_a: &[ColorId],
    block_b: &[ColorId],
    colors: &ColorAssignment,
) -> Result<Vec<Vec<PointId>>> {
    if block_a.len() != block_b.len() || block_a.is_empty() {
        return Err(Error::Invariant("blocks must be non-empty and of equal width".into()));
    }
    let a = side_a.iter().map(|s| to_batch(s, block_a, colors)).collect::<Result<_>>()?;
    let b = side_b.iter().map(|s| to_batch(s, block_b, colors)).collect::<Result<_>>()?;
    Ok(greedy_merge(a, b)?
        .into_iter()
        .map(|set| {
            let mut s: Vec<PointId> = set.into_iter().map(|v| v as usize).collect();
            s.sort_unstable();
            s
        })
        .collect())
}

fn check_power_of_two(colors: &ColorAssignment) -> Result<()> {
    if !colors.k().is_power_of_two() {
        return Err(Error::NotPowerOfTwo(colors.k()));
    }
    Ok(())
}

/// Fair clustering for a power-of-two number of equally sized color classes.
pub fn fair_power_of_two(d: &Clustering, colors: &ColorAssignment) -> Result<Clustering> {
    Ok(fair_power_of_two_trace(d, colors)?.pop().unwrap())
}

/// Like [`fair_power_of_two`], returning every intermediate clustering `N⁰ = D, N¹, …`.
pub fn fair_power_of_two_trace(d: &Clustering, colors: &ColorAssignment) -> Result<Vec<Clustering>> {
    check_equi(d, colors)?;
    if d.is_empty() {
        return Ok(vec![d.clone()]);
    }
    check_power_of_two(colors)?;
    let mut trace = vec![d.clone()];
    let mut ws = Buckets::new(d, colors);
    let all: Vec<ColorId> = (0..colors.k()).collect();
    balance_power_of_two(&mut ws, &all, Some(&mut trace))?;
    Ok(trace)
}

/// Splits `0..k` into power-of-two groups following the binary expansion of `k`, largest
/// group first, colors assigned in ascending order.
pub fn binary_color_groups(k: usize) -> Vec<Vec<ColorId>> {
    let mut groups = Vec::new();
    let mut next = 0;
    for bit in (0..usize::BITS).rev() {
        let size = 1usize << bit;
        if k & size != 0 {
            groups.push((next..next + size).collect());
            next += size;
        }
    }
    groups
}

/// Fair clustering for any number of equally sized color classes.
pub fn fair_equi(d: &Clustering, colors: &ColorAssignment) -> Result<Clustering> {
    check_equi(d, colors)?;
    let groups = binary_color_groups(colors.k());
    let mut ws = Buckets::new(d, colors);
    for group in &groups {
        balance_power_of_two(&mut ws, group, None)?;
    }
    if groups.len() > 1 {
        let metas = groups.into_iter().map(|members| MetaColor { members, unit: 1 }).collect();
        balance_meta(&mut ws, metas, None)?;
    }
    Ok(ws.into_clustering())
}
