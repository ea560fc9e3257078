//! Command-line definitions and dispatch.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use fairclust::{
    consensus_objective, fair_consensus_detailed, fairify, fairify_cc, is_fair, is_p_divisible, pair_distance,
    reduced_profile, Baseline, CorrelationInstance, Clustering, ColorAssignment, ColorProfile, ConsensusInstance,
    FairifyMode, Norm, Oracle,
};

use crate::bench::{run_bench, write_csv, BenchSpec};
use crate::error::{CliError, Result};
use crate::generate::{gen_graph, gen_hardness, gen_inputs, gen_random, ClusterLaw, Ratio, RandomSpec};
use crate::io::{read_clustering, read_consensus, read_correlation, write_clustering, write_consensus, write_correlation};

#[derive(Debug, Parser)]
#[command(name = "fairclust", version, about = "Move clusterings to nearby fair clusterings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Replace a clustering by a nearby fair one.
    Fairify {
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
        input: PathBuf,
        output: PathBuf,
    },
    /// Pair-counting distance between two clusterings of the same points.
    Dist { a: PathBuf, b: PathBuf },
    /// Check a clustering file; exits 1 when the property fails.
    Check(CheckArgs),
    /// Exhaustive solvers for small instances.
    Oracle {
        /// Point-count guard (defaults to the FAIRCLUST_ORACLE_LIMIT variable, else 13).
        #[arg(long, global = true)]
        limit: Option<usize>,
        #[command(subcommand)]
        problem: OracleProblem,
    },
    /// Fair correlation clustering.
    Cc {
        #[command(subcommand)]
        action: CcAction,
    },
    /// Fair consensus of the clusterings in a consensus file.
    Consensus {
        /// `center`, or an exponent ℓ ≥ 1 (also written `L1`, `L2`, ...).
        #[arg(long, default_value = "1", value_parser = parse_norm)]
        norm: Norm,
        input: PathBuf,
        output: Option<PathBuf>,
    },
    /// Generate instances.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Time the algorithms on random instances.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Equi,
    General,
    Auto,
}

impl From<Mode> for FairifyMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Equi => FairifyMode::Equi,
            Mode::General => FairifyMode::General,
            Mode::Auto => FairifyMode::Auto,
        }
    }
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("property").required(true))]
pub struct CheckArgs {
    #[arg(long, group = "property")]
    fair: bool,
    #[arg(long, group = "property")]
    pdc: bool,
    /// Ratio for `--pdc`; defaults to the reduced global ratio.
    #[arg(long, value_delimiter = ',', requires = "pdc")]
    profile: Option<Vec<u64>>,
    file: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum OracleProblem {
    /// Closest fair clustering to the input.
    ClosestFair { input: PathBuf, output: Option<PathBuf> },
    /// Closest p-divisible clustering to the input.
    ClosestPdc {
        #[arg(long, value_delimiter = ',')]
        profile: Option<Vec<u64>>,
        input: PathBuf,
        output: Option<PathBuf>,
    },
    /// Optimal fair correlation clustering; colors come from INPUT.
    FairCc {
        #[arg(long)]
        graph: PathBuf,
        input: PathBuf,
        output: Option<PathBuf>,
    },
    /// Optimal fair consensus clustering.
    FairConsensus {
        #[arg(long, default_value = "1", value_parser = parse_norm)]
        norm: Norm,
        input: PathBuf,
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BaselineKind {
    Pivot,
    Exact,
    /// The `cluster` column of INPUT.
    Provided,
}

#[derive(Debug, Subcommand)]
pub enum CcAction {
    /// Run a baseline, then fairify its output. Colors come from INPUT.
    Fairify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = BaselineKind::Pivot)]
        baseline: BaselineKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        input: PathBuf,
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Law {
    Uniform,
    Geometric,
}

#[derive(Debug, Args)]
pub struct RandomArgs {
    #[arg(long)]
    n: usize,
    /// Number of colors; implied by `--profile`.
    #[arg(long)]
    k: Option<usize>,
    /// Global color ratio, e.g. `3,2`; equal classes when absent.
    #[arg(long, value_delimiter = ',')]
    profile: Option<Vec<u64>>,
    #[arg(long, value_enum, default_value_t = Law::Uniform)]
    law: Law,
    /// Number of cluster labels drawn from (default ⌈√n⌉).
    #[arg(long)]
    clusters: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl RandomArgs {
    fn spec(&self) -> Result<RandomSpec> {
        let (k, ratio) = match (&self.profile, self.k) {
            (Some(p), Some(k)) if p.len() != k => {
                return Err(CliError::Invalid(format!("--profile has {} entries but --k is {k}", p.len())))
            }
            (Some(p), _) => (p.len(), Ratio::Profile(p.clone())),
            (None, Some(k)) => (k, Ratio::Equi),
            (None, None) => return Err(CliError::Invalid("one of --k or --profile is required".into())),
        };
        let law = match self.law {
            Law::Uniform => ClusterLaw::Uniform,
            Law::Geometric => ClusterLaw::Geometric,
        };
        Ok(RandomSpec { n: self.n, k, ratio, law, clusters: self.clusters, seed: self.seed })
    }
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    /// Random colored clustering (or consensus inputs, or a planted signed graph).
    Random {
        #[command(flatten)]
        args: RandomArgs,
        /// Write a consensus file with this many input clusterings instead.
        #[arg(long)]
        inputs: Option<usize>,
        /// Also write a signed graph planted on the generated clustering.
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Probability of flipping each pair of the planted graph.
        #[arg(long, default_value_t = 0.1, requires = "graph")]
        noise: f64,
        output: PathBuf,
    },
    /// Reduction from 3-Partition; prints T and τ.
    Hardness {
        /// The multiset, e.g. `5,6,7,5,6,7`.
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<u64>,
        #[arg(long)]
        k: usize,
        /// Known partition as index triples, e.g. `0,1,2;3,4,5`.
        #[arg(long, value_parser = parse_partition)]
        partition: Option<Triples>,
        /// Where to write the fair clustering at distance τ.
        #[arg(long)]
        certificate: Option<PathBuf>,
        output: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Csv,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    profile: Option<Vec<u64>>,
    #[arg(long, value_enum, default_value_t = Law::Uniform)]
    law: Law,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Emit::Csv)]
    emit: Emit,
    /// Destination file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triples(pub Vec<[usize; 3]>);

fn parse_norm(s: &str) -> std::result::Result<Norm, String> {
    let bare = s.strip_prefix(['L', 'l']).unwrap_or(s);
    bare.parse::<Norm>().map_err(|_| format!("`{s}` is not `center` or a positive exponent"))
}

fn parse_partition(s: &str) -> std::result::Result<Triples, String> {
    s.split(';')
        .map(|t| {
            let idx = t.split(',').map(|x| x.trim().parse::<usize>()).collect::<std::result::Result<Vec<_>, _>>();
            match idx {
                Ok(v) if v.len() == 3 => Ok([v[0], v[1], v[2]]),
                _ => Err(format!("`{t}` is not a triple of indices")),
            }
        })
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(Triples)
}

fn profile_for(colors: &ColorAssignment, p: &Option<Vec<u64>>) -> Result<ColorProfile> {
    match p {
        Some(p) => Ok(ColorProfile::new(p.clone(), colors)?),
        None => Ok(reduced_profile(colors)),
    }
}

fn oracle(limit: Option<usize>) -> Result<Oracle> {
    Ok(match limit {
        Some(l) => Oracle::with_limit(l)?,
        None => Oracle::from_env()?,
    })
}

fn maybe_write(path: &Option<PathBuf>, c: &Clustering, colors: &ColorAssignment) -> Result<()> {
    match path {
        Some(p) => write_clustering(p, c, colors),
        None => Ok(()),
    }
}

/// Runs one command, writing reports to `out`; returns the process exit code.
pub fn run<W: Write>(cli: Cli, out: &mut W) -> Result<i32> {
    let report = |out: &mut W, line: String| -> Result<()> {
        writeln!(out, "{line}").map_err(|source| CliError::Io { path: PathBuf::from("<stdout>"), source })
    };
    match cli.command {
        Command::Fairify { mode, input, output } => {
            let (d, colors) = read_clustering(&input)?;
            let f = fairify(&d, &colors, mode.into())?;
            write_clustering(&output, &f, &colors)?;
            report(out, format!("distance {}", pair_distance(&d, &f)?))?;
        }
        Command::Dist { a, b } => {
            let (a, _) = read_clustering(&a)?;
            let (b, _) = read_clustering(&b)?;
            report(out, pair_distance(&a, &b)?.to_string())?;
        }
        Command::Check(args) => {
            let (c, colors) = read_clustering(&args.file)?;
            let (holds, name) = if args.fair {
                (is_fair(&c, &colors)?, "fair")
            } else {
                (is_p_divisible(&c, &colors, &profile_for(&colors, &args.profile)?)?, "p-divisible")
            };
            report(out, if holds { name.to_string() } else { format!("not {name}") })?;
            return Ok(if holds { 0 } else { 1 });
        }
        Command::Oracle { limit, problem } => {
            let oracle = oracle(limit)?;
            match problem {
                OracleProblem::ClosestFair { input, output } => {
                    let (d, colors) = read_clustering(&input)?;
                    let (f, dist) = oracle.closest_fair(&d, &colors)?;
                    maybe_write(&output, &f, &colors)?;
                    report(out, format!("distance {dist}"))?;
                }
                OracleProblem::ClosestPdc { profile, input, output } => {
                    let (d, colors) = read_clustering(&input)?;
                    let profile = profile_for(&colors, &profile)?;
                    let (m, dist) = oracle.closest_pdc(&d, &colors, &profile)?;
                    maybe_write(&output, &m, &colors)?;
                    report(out, format!("distance {dist}"))?;
                }
                OracleProblem::FairCc { graph, input, output } => {
                    let inst = read_correlation(&graph)?;
                    let (_, colors) = read_clustering(&input)?;
                    let (f, cost) = oracle.fair_correlation(&inst, &colors)?;
                    maybe_write(&output, &f, &colors)?;
                    report(out, format!("cost {cost}"))?;
                }
                OracleProblem::FairConsensus { norm, input, output } => {
                    let (inputs, colors) = read_consensus(&input)?;
                    let inst = ConsensusInstance::new(inputs, norm)?;
                    let (f, objective) = oracle.fair_consensus(&inst, &colors)?;
                    maybe_write(&output, &f, &colors)?;
                    report(out, format!("objective {objective}"))?;
                }
            }
        }
        Command::Cc { action: CcAction::Fairify { graph, baseline, seed, input, output } } => {
            let inst: CorrelationInstance = read_correlation(&graph)?;
            let (provided, colors) = read_clustering(&input)?;
            let baseline = match baseline {
                BaselineKind::Pivot => Baseline::Pivot { seed },
                BaselineKind::Exact => Baseline::Exact(Oracle::from_env()?),
                BaselineKind::Provided => Baseline::Provided(provided),
            };
            let f = fairify_cc(&inst, &colors, &baseline)?;
            maybe_write(&output, &f, &colors)?;
            report(out, format!("cost {}", fairclust::cc_cost(&inst, &f)?))?;
        }
        Command::Consensus { norm, input, output } => {
            let (inputs, colors) = read_consensus(&input)?;
            let inst = ConsensusInstance::new(inputs, norm)?;
            let outcome = fair_consensus_detailed(&inst, &colors)?;
            debug_assert_eq!(consensus_objective(&inst, &outcome.clustering)?, outcome.objective);
            maybe_write(&output, &outcome.clustering, &colors)?;
            report(out, format!("objective {}", outcome.objective))?;
            report(out, format!("from input {}", outcome.chosen + 1))?;
        }
        Command::Gen { kind: GenKind::Random { args, inputs, graph, noise, output } } => {
            let spec = args.spec()?;
            match inputs {
                Some(m) => {
                    let (inputs, colors) = gen_inputs(&spec, m)?;
                    write_consensus(&output, &inputs, &colors)?;
                    if let Some(g) = graph {
                        write_correlation(&g, &gen_graph(&inputs[0], noise, spec.seed)?)?;
                    }
                }
                None => {
                    let (d, colors) = gen_random(&spec)?;
                    write_clustering(&output, &d, &colors)?;
                    if let Some(g) = graph {
                        write_correlation(&g, &gen_graph(&d, noise, spec.seed)?)?;
                    }
                }
            }
        }
        Command::Gen { kind: GenKind::Hardness { set, k, partition, certificate, output } } => {
            let h = gen_hardness(&set, k, partition.as_ref().map(|t| t.0.as_slice()))?;
            for w in &h.warnings {
                eprintln!("warning: {w}");
            }
            write_clustering(&output, &h.clustering, &h.colors)?;
            report(out, format!("T {}", h.target))?;
            report(out, format!("tau {}", h.tau))?;
            match (&h.certificate, certificate) {
                (Some(f), Some(path)) => write_clustering(&path, f, &h.colors)?,
                (None, Some(_)) => return Err(CliError::Invalid("no 3-partition known; no certificate".into())),
                _ => {}
            }
        }
        Command::Bench(args) => {
            let random = RandomArgs {
                n: 0,
                k: args.k,
                profile: args.profile.clone(),
                law: args.law,
                clusters: None,
                seed: args.seed,
            }
            .spec()?;
            let spec = BenchSpec {
                sizes: args.sizes,
                k: random.k,
                ratio: random.ratio,
                law: random.law,
                seed: args.seed,
                oracle: Oracle::from_env()?,
            };
            let rows = run_bench(&spec)?;
            let Emit::Csv = args.emit;
            match &args.out {
                Some(path) => {
                    let file = File::create(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
                    write_csv(BufWriter::new(file), &rows).map_err(|source| io_error(path, source))?;
                }
                None => write_csv(&mut *out, &rows).map_err(|source| io_error(Path::new("<stdout>"), source))?,
            }
        }
    }
    Ok(0)
}

fn io_error(path: &Path, source: io::Error) -> CliError {
    CliError::Io { path: path.to_path_buf(), source }
}
