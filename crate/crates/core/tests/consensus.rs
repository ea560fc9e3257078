mod common;

use common::{clustering, profiled, Instance};
use fairclust::{
    best_input, consensus_objective, fair_consensus_detailed, fairify, is_fair, pair_distance, ConsensusInstance,
    FairifyMode, Norm, Oracle,
};
use proptest::prelude::*;

fn consensus(s: impl Strategy<Value = Instance>, max_m: usize) -> impl Strategy<Value = (Instance, Vec<fairclust::Clustering>)> {
    s.prop_flat_map(move |inst| {
        let n = inst.d.n_points();
        (Just(inst), prop::collection::vec(clustering(n, n), 1..=max_m))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn median_composition_bound((inst, inputs) in consensus(profiled(3, 3, 8), 3)) {
        let oracle = Oracle::default();
        let ci = ConsensusInstance::new(inputs, Norm::L(1)).unwrap();
        let out = fair_consensus_detailed(&ci, &inst.colors).unwrap();
        prop_assert!(is_fair(&out.clustering, &inst.colors).unwrap());

        let chosen = &ci.inputs()[out.chosen];
        let reached = pair_distance(chosen, &out.clustering).unwrap().get() as f64;
        let closest = oracle.closest_fair(chosen, &inst.colors).unwrap().1.get() as f64;
        let alpha = if closest == 0.0 { 1.0 } else { reached / closest };
        let (_, opt) = oracle.fair_consensus(&ci, &inst.colors).unwrap();
        prop_assert!(out.objective.value() <= (alpha + 2.0) * opt.value());
    }

    #[test]
    fn best_input_is_two_approximate((_, inputs) in consensus(profiled(2, 2, 8), 3)) {
        let ci = ConsensusInstance::new(inputs, Norm::L(1)).unwrap();
        let best = &ci.inputs()[best_input(&ci).unwrap()];
        let value = consensus_objective(&ci, best).unwrap();
        let (_, opt) = Oracle::default()
            .minimize(ci.n_points(), |_: &[u32]| true, |rgs: &[u32]| {
                ci.inputs().iter().map(|c| fairclust::oracle::naive_distance(c.labels(), rgs)).sum::<u64>()
            })
            .unwrap()
            .unwrap();
        prop_assert!(value.value() <= 2.0 * opt as f64);
    }

    #[test]
    fn never_worse_than_fairified_best((inst, inputs) in consensus(profiled(4, 3, 30), 4), l in 1u32..4) {
        for norm in [Norm::L(l), Norm::Center] {
            let ci = ConsensusInstance::new(inputs.clone(), norm).unwrap();
            let out = fair_consensus_detailed(&ci, &inst.colors).unwrap();
            let best = &ci.inputs()[best_input(&ci).unwrap()];
            let fallback = fairify(best, &inst.colors, FairifyMode::Auto).unwrap();
            prop_assert!(out.objective <= consensus_objective(&ci, &fallback).unwrap());
        }
    }
}
