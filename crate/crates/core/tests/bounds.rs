mod common;

use common::{block_filter, equi, profiled, sorted_by_weight, Instance};
use fairclust::{
    binary_color_groups, create_pdc, fair_equi, fair_general, fair_power_of_two_trace, make_pdc_fair_trace,
    pair_distance, reduced_profile, BlockSchedule, Clustering, ColorAssignment, Oracle,
};
use proptest::prelude::*;

fn dist(a: &Clustering, b: &Clustering) -> u64 {
    pair_distance(a, b).unwrap().get()
}

fn opt_fair(inst: &Instance) -> u64 {
    Oracle::default().closest_fair(&inst.d, &inst.colors).unwrap().1.get()
}

/// Distance from `from` to the closest clustering whose level-`level` blocks (schedule
/// indices mapped through `order`) follow `weights`.
fn closest_level(
    from: &Clustering,
    colors: &ColorAssignment,
    schedule: &BlockSchedule,
    level: usize,
    order: &[usize],
    weights: &[u64],
) -> u64 {
    let blocks = schedule.level(level).iter().map(|b| b.colors().iter().map(|&i| order[i]).collect()).collect();
    let keep = block_filter(colors, blocks, weights.to_vec());
    Oracle::default().closest_by(from, keep).unwrap().unwrap().1.get()
}

fn composed_general_bound(k: usize) -> f64 {
    let levels = BlockSchedule::new(k).iterations() as i32;
    let c = 7.5 * k as f64;
    c + (7f64.powi(levels) - 1.0) * (c + 1.0)
}

fn composed_equi_bound(k: usize) -> f64 {
    let groups = binary_color_groups(k);
    let stage1: i32 = groups.iter().map(|g| g.len().trailing_zeros() as i32).sum();
    let stage2 = BlockSchedule::new(groups.len()).iterations() as i32;
    3f64.powi(stage1) * 7f64.powi(stage2) - 1.0
}

#[test]
fn composed_bound_values() {
    assert_eq!(composed_general_bound(1), 7.5);
    assert_eq!(composed_general_bound(2), 111.0);
    assert_eq!(composed_general_bound(3), 1150.5);
    assert_eq!(composed_equi_bound(2), 2.0);
    assert_eq!(composed_equi_bound(3), 20.0);
    assert_eq!(composed_equi_bound(4), 8.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn power_of_two_iterations(inst in equi(vec![2, 4], 8)) {
        let trace = fair_power_of_two_trace(&inst.d, &inst.colors).unwrap();
        let k = inst.colors.k();
        let schedule = BlockSchedule::new(k);
        let order: Vec<usize> = (0..k).collect();
        let ones = vec![1; k];
        let opt = opt_fair(&inst);
        for i in 1..trace.len() {
            let step = dist(&trace[i - 1], &trace[i]);
            let best = closest_level(&trace[i - 1], &inst.colors, &schedule, i, &order, &ones);
            prop_assert!(step <= 2 * best, "level {}: step {} vs closest {}", i, step, best);
            prop_assert!(dist(&inst.d, &trace[i]) <= (3u64.pow(i as u32) - 1) * opt);
        }
    }

    #[test]
    fn pdc_fair_iterations(inst in profiled(3, 3, 9)) {
        let profile = reduced_profile(&inst.colors);
        let i0 = create_pdc(&inst.d, &inst.colors, &profile).unwrap();
        let trace = make_pdc_fair_trace(&i0, &inst.colors, &profile).unwrap();
        let schedule = BlockSchedule::new(inst.colors.k());
        let order = sorted_by_weight(profile.p());
        let opt = Oracle::default().closest_fair(&i0, &inst.colors).unwrap().1.get();
        for t in 1..trace.len() {
            let step = dist(&trace[t - 1], &trace[t]);
            let best = closest_level(&trace[t - 1], &inst.colors, &schedule, t, &order, profile.p());
            prop_assert!(step <= 6 * best, "level {}: step {} vs closest {}", t, step, best);
            prop_assert!(dist(&i0, &trace[t]) <= (7u64.pow(t as u32) - 1) * opt);
        }
    }

    #[test]
    fn create_pdc_bound(inst in profiled(3, 4, 10)) {
        let profile = reduced_profile(&inst.colors);
        let m = create_pdc(&inst.d, &inst.colors, &profile).unwrap();
        let opt = Oracle::default().closest_pdc(&inst.d, &inst.colors, &profile).unwrap().1.get();
        prop_assert!(2 * dist(&inst.d, &m) <= 15 * inst.colors.k() as u64 * opt);
    }

    #[test]
    fn general_bound(inst in profiled(3, 4, 10)) {
        let f = fair_general(&inst.d, &inst.colors).unwrap();
        let bound = composed_general_bound(inst.colors.k());
        prop_assert!(dist(&inst.d, &f) as f64 <= bound * opt_fair(&inst) as f64);
    }

    #[test]
    fn equi_bound(inst in equi(vec![2, 3, 4], 9)) {
        let f = fair_equi(&inst.d, &inst.colors).unwrap();
        let bound = composed_equi_bound(inst.colors.k());
        prop_assert!(dist(&inst.d, &f) as f64 <= bound * opt_fair(&inst) as f64);
    }
}
