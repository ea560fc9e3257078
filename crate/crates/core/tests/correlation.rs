mod common;

use common::{equi, profiled, Instance};
use fairclust::oracle::Oracle;
use fairclust::{agreements, cc_cost, fairify_cc, is_fair, pair_distance, pivot_cc, Baseline, CorrelationInstance};
use proptest::prelude::*;

fn graph(n: usize) -> impl Strategy<Value = CorrelationInstance> {
    let all: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let m = all.len();
    prop::collection::vec(any::<bool>(), m).prop_map(move |keep| {
        let edges = all.iter().zip(&keep).filter(|(_, &k)| k).map(|(&e, _)| e);
        CorrelationInstance::new(n, edges).unwrap()
    })
}

fn with_graph(s: impl Strategy<Value = Instance>) -> impl Strategy<Value = (Instance, CorrelationInstance)> {
    s.prop_flat_map(|inst| {
        let n = inst.d.n_points();
        (Just(inst), graph(n))
    })
}

fn naive_cost(g: &CorrelationInstance, labels: &[u32]) -> u64 {
    let n = g.n_points();
    let mut cost = 0;
    for u in 0..n {
        for v in u + 1..n {
            let plus = g.plus_edges().binary_search(&(u as u32, v as u32)).is_ok();
            if plus != (labels[u] == labels[v]) {
                cost += 1;
            }
        }
    }
    cost
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn cost_matches_enumeration((inst, g) in with_graph(profiled(3, 3, 24)), seed in any::<u64>()) {
        let n = g.n_points() as u64;
        for c in [inst.d.clone(), pivot_cc(&g, seed)] {
            let cost = cc_cost(&g, &c).unwrap();
            prop_assert_eq!(cost, naive_cost(&g, c.labels()));
            prop_assert_eq!(cost + agreements(&g, &c).unwrap(), n * (n - 1) / 2);
        }
    }

    #[test]
    fn pivot_clusters_are_star_closed(g in (1usize..30).prop_flat_map(graph), seed in any::<u64>()) {
        let c = pivot_cc(&g, seed);
        prop_assert_eq!(&c, &pivot_cc(&g, seed));
        // every cluster contains a pivot adjacent to all other members
        for members in c.clusters() {
            let has_pivot = members.iter().any(|&p| {
                members.iter().all(|&v| v == p || g.neighbors(p).contains(&(v as u32)))
            });
            prop_assert!(has_pivot);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn composition_bound((inst, g) in with_graph(equi(vec![2, 3], 8))) {
        let oracle = Oracle::default();
        let baseline = Baseline::Exact(oracle);
        let d = baseline.run(&g).unwrap();
        let f = fairify_cc(&g, &inst.colors, &baseline).unwrap();
        prop_assert!(is_fair(&f, &inst.colors).unwrap());

        let (_, opt) = oracle.fair_correlation(&g, &inst.colors).unwrap();
        let reached = pair_distance(&d, &f).unwrap().get() as f64;
        let closest = oracle.closest_fair(&d, &inst.colors).unwrap().1.get() as f64;
        let gamma = if closest == 0.0 { 1.0 } else { reached / closest };
        prop_assert!(cc_cost(&g, &f).unwrap() as f64 <= (2.0 * gamma + 1.0) * opt as f64);
    }
}
