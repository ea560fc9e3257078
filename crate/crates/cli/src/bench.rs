//! Runtime and approximation-ratio tables for the fairification algorithms.

use std::io::{self, Write};
use std::time::Instant;

use fairclust::{fair_equi, fair_general, pair_distance, Clustering, ColorAssignment, Oracle};

use crate::error::Result;
use crate::generate::{gen_random, ClusterLaw, Ratio, RandomSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Equi,
    General,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Equi => "equi",
            Algorithm::General => "general",
        }
    }

    pub fn run(self, d: &Clustering, colors: &ColorAssignment) -> fairclust::Result<Clustering> {
        match self {
            Algorithm::Equi => fair_equi(d, colors),
            Algorithm::General => fair_general(d, colors),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchSpec {
    pub sizes: Vec<usize>,
    pub k: usize,
    pub ratio: Ratio,
    pub law: ClusterLaw,
    pub seed: u64,
    /// Instances with at most this many points also get the exact optimum.
    pub oracle: Oracle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub algorithm: &'static str,
    pub n: usize,
    pub k: usize,
    pub profile: String,
    pub seed: u64,
    pub runtime_ms: f64,
    pub dist_to_input: u64,
    pub oracle_dist: Option<u64>,
    pub ratio: Option<f64>,
}

pub const HEADER: [&str; 9] =
    ["algorithm", "n", "k", "profile", "seed", "runtime_ms", "dist_to_input", "oracle_dist", "ratio"];

fn profile_label(ratio: &Ratio) -> String {
    match ratio {
        Ratio::Equi => "equi".into(),
        Ratio::Profile(p) => p.iter().map(u64::to_string).collect::<Vec<_>>().join(":"),
    }
}

/// One row per size and applicable algorithm; `equi` only runs on equal color classes.
pub fn run_bench(spec: &BenchSpec) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &n in &spec.sizes {
        let mut random = RandomSpec::new(n, spec.k, spec.ratio.clone(), spec.seed);
        random.law = spec.law;
        let (d, colors) = gen_random(&random)?;
        let opt = if n <= spec.oracle.limit() { Some(spec.oracle.closest_fair(&d, &colors)?.1.get()) } else { None };
        let algorithms: &[Algorithm] =
            if colors.is_equi() { &[Algorithm::Equi, Algorithm::General] } else { &[Algorithm::General] };
        for &algorithm in algorithms {
            let start = Instant::now();
            let f = algorithm.run(&d, &colors)?;
            let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
            let dist = pair_distance(&d, &f)?.get();
            let ratio = opt.map(|o| if o == 0 { if dist == 0 { 1.0 } else { f64::INFINITY } } else { dist as f64 / o as f64 });
            rows.push(BenchRow {
                algorithm: algorithm.name(),
                n,
                k: spec.k,
                profile: profile_label(&spec.ratio),
                seed: spec.seed,
                runtime_ms,
                dist_to_input: dist,
                oracle_dist: opt,
                ratio,
            });
        }
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(w: W, rows: &[BenchRow]) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let opt = |v: Option<String>| v.unwrap_or_default();
    out.write_record(HEADER)?;
    for r in rows {
        out.write_record([
            r.algorithm.to_string(),
            r.n.to_string(),
            r.k.to_string(),
            r.profile.clone(),
            r.seed.to_string(),
            format!("{:.3}", r.runtime_ms),
            r.dist_to_input.to_string(),
            opt(r.oracle_dist.map(|v| v.to_string())),
            opt(r.ratio.map(|v| format!("{v:.4}"))),
        ])?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_and_columns() {
        let spec = BenchSpec {
            sizes: vec![8, 64],
            k: 2,
            ratio: Ratio::Equi,
            law: ClusterLaw::Uniform,
            seed: 3,
            oracle: Oracle::default(),
        };
        let rows = run_bench(&spec).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows[0].ratio.unwrap() <= 2.0);
        assert!(rows[2].oracle_dist.is_none());
        let mut out = Vec::new();
        write_csv(&mut out, &rows).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("algorithm,n,k,profile,seed,runtime_ms,dist_to_input,oracle_dist,ratio\n"));
        assert_eq!(text.lines().count(), 5);
    }
}
