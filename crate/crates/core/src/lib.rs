//! Post-processing of arbitrary clusterings of multi-colored points into fair clusterings,
//! where every cluster contains the colors in exactly the global proportion.
//!
//! The main entry points are [`fair_equi`] (all color classes of equal size) and
//! [`fair_general`] (arbitrary ratios), both returning a fair clustering whose
//! pair-counting distance to the input is within a bounded factor of the closest fair
//! clustering. [`fairify_cc`] and [`fair_consensus`] apply them to correlation and
//! consensus clustering, and [`oracle`] holds exhaustive solvers for small instances.
//!
//! ```
//! use fairclust::{fair_equi, is_fair, pair_distance, Clustering, ColorAssignment};
//!
//! let colors = ColorAssignment::new(vec![0, 0, 1, 1]).unwrap();
//! let d = Clustering::from_labels(&[0, 0, 0, 1]).unwrap();
//! let f = fair_equi(&d, &colors).unwrap();
//! assert!(is_fair(&f, &colors).unwrap());
//! assert_eq!(pair_distance(&d, &f).unwrap().get(), 3);
//! ```

mod buckets;
pub mod consensus;
pub mod correlation;
pub mod equi;
pub mod error;
pub mod fairify;
pub mod fairness;
pub mod general;
pub mod oracle;
pub mod partition;

pub use consensus::{
    best_input, consensus_objective, fair_consensus, fair_consensus_detailed, ConsensusInstance, ConsensusOutcome,
    Norm, Objective,
};
pub use correlation::{agreements, cc_cost, fairify_cc, pivot_cc, Baseline, CorrelationInstance};
pub use equi::{
    binary_color_groups, fair_equi, fair_power_of_two, fair_power_of_two_trace, multi_gm, surplus_equi, Block,
    BlockSchedule,
};
pub use error::{Error, Result};
pub use fairify::{fairify, FairifyMode};
pub use fairness::{
    deficit_size, is_block_balanced, is_fair, is_p_divisible, reduced_profile, surplus_pdc, ColorAssignment, ColorHistogram,
    ColorId, ColorProfile,
};
pub use general::{create_pdc, fair_general, make_pdc_fair, make_pdc_fair_trace};
pub use oracle::{exact_closest_fair, exact_closest_pdc, exact_fair_cc, exact_fair_consensus, partitions, Oracle};
pub use partition::{pair_distance, Clustering, PairDistance, PointId};
