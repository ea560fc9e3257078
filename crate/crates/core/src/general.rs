//! Closest fair clustering for arbitrary global color ratios.
//!
//! [`create_pdc`] first makes every cluster p-divisible (each color count a multiple of
//! its ratio entry) by cutting small per-color surpluses and merging them into clusters
//! that are just short of the next multiple. [`make_pdc_fair`] then equalizes the
//! per-color scale factors along a hierarchy of color blocks, moving points through a
//! donor pool. [`fair_general`] composes the two.

use std::collections::BTreeSet;

use crate::buckets::Buckets;
use crate::equi::BlockSchedule;
use crate::error::{Error, Result};
use crate::fairness::{is_p_divisible, reduced_profile, ColorAssignment, ColorId, ColorProfile};
use crate::partition::Clustering;

/// A set of colors balanced as one unit. Within every cluster each member holds
/// `unit · scale` points for a common `scale`.
#[derive(Debug, Clone)]
pub(crate) struct MetaColor {
    pub members: Vec<ColorId>,
    pub unit: u64,
}

impl MetaColor {
    fn weight(&self) -> u64 {
        self.members.len() as u64 * self.unit
    }

    fn scale(&self, ws: &Buckets, b: usize) -> u64 {
        self.members.iter().map(|&c| ws.count(b, c) as u64 / self.unit).min().unwrap_or(0)
    }
}

fn block_scale(ws: &Buckets, b: usize, block: &[&MetaColor]) -> u64 {
    block.iter().map(|m| m.scale(ws, b)).min().unwrap_or(0)
}

/// Raises the scale of block `right` to that of block `left` in every cluster, cutting
/// from clusters where it is too high into a FIFO pool and merging from the pool into
/// clusters (in index order) where it is too low.
fn equalize_scales(ws: &mut Buckets, left: &[&MetaColor], right: &[&MetaColor]) -> Result<()> {
    let slots: Vec<(ColorId, u64)> =
        right.iter().flat_map(|m| m.members.iter().map(move |&c| (c, m.unit))).collect();
    let mut pool: Vec<Vec<u32>> = vec![Vec::new(); slots.len()];
    let mut merges = Vec::new();
    for b in 0..ws.len() {
        let x = block_scale(ws, b, left);
        let y = block_scale(ws, b, right);
        if x < y {
            for (slot, &(c, unit)) in pool.iter_mut().zip(&slots) {
                let mut cut = ws.take_lowest(b, c, (unit * (y - x)) as usize);
                cut.reverse();
                slot.extend(cut);
            }
        } else if x > y {
            merges.push((b, x - y));
        }
    }
    let demand: u64 = merges.iter().map(|&(_, gap)| gap).sum();
    for (slot, &(c, unit)) in pool.iter().zip(&slots) {
        if slot.len() as u64 != unit * demand {
            return Err(Error::Invariant(format!(
                "donor pool for color {c} holds {} points but {} are requested",
                slot.len(),
                unit * demand
            )));
        }
    }
    let mut cursor = vec![0usize; slots.len()];
    for (b, gap) in merges {
        for ((slot, at), &(c, unit)) in pool.iter().zip(cursor.iter_mut()).zip(&slots) {
            let m = (unit * gap) as usize;
            ws.insert(b, c, &slot[*at..*at + m]);
            *at += m;
        }
    }
    Ok(())
}

/// Balances meta-colors hierarchically until every cluster follows their weights.
/// Meta-colors are ordered by descending weight, ties by smallest member color.
pub(crate) fn balance_meta(
    ws: &mut Buckets,
    mut metas: Vec<MetaColor>,
    mut trace: Option<&mut Vec<Clustering>>,
) -> Result<()> {
    metas.sort_by(|x, y| y.weight().cmp(&x.weight()).then(x.members[0].cmp(&y.members[0])));
    for b in 0..ws.len() {
        for m in &metas {
            if m.members.iter().any(|&c| !(ws.count(b, c) as u64).is_multiple_of(m.unit)) {
                return Err(Error::NotPDivisible);
            }
        }
    }
    let schedule = BlockSchedule::new(metas.len());
    for level in 1..=schedule.iterations() {
        for block in schedule.level(level) {
            if block.is_carried() {
                continue;
            }
            let left: Vec<&MetaColor> = block.left().iter().map(|&i| &metas[i]).collect();
            let right: Vec<&MetaColor> = block.right().iter().map(|&i| &metas[i]).collect();
            equalize_scales(ws, &left, &right)?;
        }
        if let Some(t) = trace.as_deref_mut() {
            t.push(ws.to_clustering());
        }
    }
    Ok(())
}

fn check_profile(colors: &ColorAssignment, profile: &ColorProfile) -> Result<()> {
    let counts = colors.counts();
    let p = profile.p();
    let g = profile.scale();
    if p.len() != counts.len() || p.iter().zip(counts).any(|(&pj, &cj)| pj == 0 || pj * g != cj) {
        return Err(Error::InconsistentProfile { profile: p.to_vec(), counts: counts.to_vec() });
    }
    Ok(())
}

/// Clusters still short of the next multiple of `p`, in donation (index) order, with the
/// cut-minus-merge cost of each kept for the repeated-pick phase.
struct MergeQueue {
    order: BTreeSet<usize>,
    by_cost: BTreeSet<(i128, usize)>,
    cost: Vec<Option<i128>>,
}

impl MergeQueue {
    fn residue(ws: &Buckets, b: usize, color: ColorId, p: u64) -> u64 {
        ws.count(b, color) as u64 % p
    }

    /// `κ − μ = r(|D| − r) − (p − r)|D|` for residue `r`.
    fn cut_minus_merge(ws: &Buckets, b: usize, color: ColorId, p: u64) -> i128 {
        let r = Self::residue(ws, b, color, p) as i128;
        let size = ws.size(b) as i128;
        r * (size - r) - (p as i128 - r) * size
    }

    fn track_costs(&mut self, ws: &Buckets, color: ColorId, p: u64) {
        for &b in &self.order {
            let key = Self::cut_minus_merge(ws, b, color, p);
            self.cost[b] = Some(key);
            self.by_cost.insert((key, b));
        }
    }

    fn remove(&mut self, b: usize) {
        self.order.remove(&b);
        if let Some(key) = self.cost[b].take() {
            self.by_cost.remove(&(key, b));
        }
    }

    fn refresh(&mut self, ws: &Buckets, b: usize, color: ColorId, p: u64) {
        if let Some(old) = self.cost[b] {
            self.by_cost.remove(&(old, b));
            let key = Self::cut_minus_merge(ws, b, color, p);
            self.cost[b] = Some(key);
            self.by_cost.insert((key, b));
        }
    }

    /// Hands `surplus` out to the queued clusters in index order until either runs out.
    fn donate(&mut self, ws: &mut Buckets, surplus: &mut Vec<u32>, color: ColorId, p: u64) {
        while !surplus.is_empty() {
            let Some(&b) = self.order.first() else { break };
            let need = (p - Self::residue(ws, b, color, p)) as usize;
            let give = need.min(surplus.len());
            let part = surplus.split_off(surplus.len() - give);
            ws.insert(b, color, &part);
            if give == need {
                self.remove(b);
            } else {
                self.refresh(ws, b, color, p);
            }
        }
    }
}

/// Makes the count of `color` a multiple of `p` in every cluster.
fn make_color_divisible(ws: &mut Buckets, color: ColorId, p: u64) -> Result<()> {
    if p == 1 {
        return Ok(());
    }
    let originals = ws.len();
    let mut cut = Vec::new();
    let mut queue = MergeQueue { order: BTreeSet::new(), by_cost: BTreeSet::new(), cost: vec![None; originals] };
    for b in 0..originals {
        match MergeQueue::residue(ws, b, color, p) {
            0 => {}
            r if 2 * r <= p => cut.push(b),
            _ => {
                queue.order.insert(b);
            }
        }
    }

    let mut extra: Option<usize> = None;
    for b in cut {
        let r = MergeQueue::residue(ws, b, color, p) as usize;
        let mut surplus = ws.take_lowest(b, color, r);
        queue.donate(ws, &mut surplus, color, p);
        while !surplus.is_empty() {
            let e = match extra {
                Some(e) if (ws.count(e, color) as u64) < p => e,
                _ => *extra.insert(ws.push_empty()),
            };
            let room = p as usize - ws.count(e, color);
            let part = surplus.split_off(surplus.len() - room.min(surplus.len()));
            ws.insert(e, color, &part);
        }
    }
    if let Some(e) = extra {
        if ws.count(e, color) as u64 != p {
            return Err(Error::Invariant(format!("extra cluster for color {color} left partially filled")));
        }
    }

    queue.track_costs(ws, color, p);
    while let Some(&(_, b)) = queue.by_cost.first() {
        queue.remove(b);
        let r = MergeQueue::residue(ws, b, color, p) as usize;
        let mut surplus = ws.take_lowest(b, color, r);
        queue.donate(ws, &mut surplus, color, p);
        if !surplus.is_empty() {
            return Err(Error::Invariant(format!("surplus of color {color} could not be absorbed")));
        }
    }
    Ok(())
}

/// Converts `d` into a p-divisible clustering for `profile`, processing colors in
/// ascending id order.
pub fn create_pdc(d: &Clustering, colors: &ColorAssignment, profile: &ColorProfile) -> Result<Clustering> {
    colors.check_points(d)?;
    check_profile(colors, profile)?;
    let mut ws = Buckets::new(d, colors);
    for (color, &p) in profile.p().iter().enumerate() {
        make_color_divisible(&mut ws, color, p)?;
    }
    Ok(ws.into_clustering())
}

fn single_color_metas(profile: &ColorProfile) -> Vec<MetaColor> {
    profile.p().iter().enumerate().map(|(c, &unit)| MetaColor { members: vec![c], unit }).collect()
}

/// Turns a p-divisible clustering into a fair one.
pub fn make_pdc_fair(i: &Clustering, colors: &ColorAssignment, profile: &ColorProfile) -> Result<Clustering> {
    Ok(make_pdc_fair_trace(i, colors, profile)?.pop().unwrap())
}

/// Like [`make_pdc_fair`], returning every intermediate clustering `F⁰ = I, F¹, …`.
pub fn make_pdc_fair_trace(
    i: &Clustering,
    colors: &ColorAssignment,
    profile: &ColorProfile,
) -> Result<Vec<Clustering>> {
    colors.check_points(i)?;
    check_profile(colors, profile)?;
    if !is_p_divisible(i, colors, profile)? {
        return Err(Error::NotPDivisible);
    }
    let mut trace = vec![i.clone()];
    let mut ws = Buckets::new(i, colors);
    balance_meta(&mut ws, single_color_metas(profile), Some(&mut trace))?;
    Ok(trace)
}

/// Fair clustering for an arbitrary global color ratio: [`create_pdc`] followed by
/// [`make_pdc_fair`] under the reduced profile.
pub fn fair_general(d: &Clustering, colors: &ColorAssignment) -> Result<Clustering> {
    colors.check_points(d)?;
    let profile = reduced_profile(colors);
    let mut ws = Buckets::new(d, colors);
    for (color, &p) in profile.p().iter().enumerate() {
        make_color_divisible(&mut ws, color, p)?;
    }
    ws.canonicalize();
    balance_meta(&mut ws, single_color_metas(&profile), None)?;
    Ok(ws.into_clustering())
}
