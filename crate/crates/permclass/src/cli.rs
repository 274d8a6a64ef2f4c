//! Command-line front end. Every subcommand is a thin delegation to the
//! library; randomized commands require an explicit `--seed`.

use std::collections::BTreeMap;
use std::io::Write;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::analysis::{report_with, FamilySpec};
use crate::families;
use crate::perm::Permutation;
use crate::permuton::{
    density_vector, diagram_export, estimate_occ, write_points_csv, DensityMode, Lebesgue,
    PermutationPermuton, Permuton,
};
use crate::sample::{biased_signed_permutation, boltzmann_class_sample, stable_permutation, Rng};
use crate::series::{rational_to_f64, ClassSeries};
use crate::tree::{canonical_tree, default_of_binarity, expanded_tree_count};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("unknown family {0:?} (builtin names: increasing-oscillations, av321-simples)")]
    UnknownFamily(String),
    #[error("family member {0} is not simple")]
    NotSimple(String),
    #[error("this subcommand needs a finite family (inline list), got a builtin symbolic one")]
    NeedsFiniteFamily,
    #[error(transparent)]
    Perm(#[from] crate::perm::PermError),
    #[error(transparent)]
    Tree(#[from] crate::tree::TreeError),
    #[error(transparent)]
    Series(#[from] crate::series::SeriesError),
    #[error(transparent)]
    Analysis(#[from] crate::analysis::AnalysisError),
    #[error(transparent)]
    Sample(#[from] crate::sample::SampleError),
    #[error(transparent)]
    Permuton(#[from] crate::permuton::PermutonError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Parser, Debug)]
#[command(
    name = "permclass",
    about = "Substitution-closed permutation classes: enumeration, limits, sampling",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    /// Output format where a choice applies.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct FamilyArg {
    /// Finite family as comma-separated permutations ("2413,3142"; empty or
    /// "none" for ∅) or a builtin name (increasing-oscillations,
    /// av321-simples).
    #[arg(long, default_value = "none")]
    family: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Canonical decomposition of a permutation, with expanded-tree counts.
    Decompose {
        /// One-line notation, e.g. "2413" or "2 4 1 3".
        perm: String,
    },
    /// Class counts [zⁿ]T for n = 1..=n_max.
    Count {
        #[command(flatten)]
        family: FamilyArg,
        /// Truncation order of the solved series.
        #[arg(long, visible_alias = "order", default_value_t = 10)]
        n_max: usize,
    },
    /// Exact expected density E[occ(π, σ_n)] for uniform σ_n in the class.
    ExactOcc {
        #[arg(long)]
        pattern: String,
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        n: usize,
    },
    /// Regime classification and the constant pack, as JSON.
    Report {
        #[command(flatten)]
        family: FamilyArg,
        /// Absolute tolerance for the κ root.
        #[arg(long, default_value_t = crate::analysis::ROOT_TOL)]
        tol: f64,
    },
    /// Random permutations, one per line.
    Sample {
        #[arg(long, value_enum)]
        kind: SampleKind,
        /// Mandatory seed for reproducibility.
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Target size (exact for brownian/stable; window-matched for class).
        #[arg(long, default_value_t = 100)]
        size: usize,
        /// ⊕-probability for brownian sampling.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// Stability index in (1,2) for stable sampling.
        #[arg(long, default_value_t = 1.5)]
        delta: f64,
        #[command(flatten)]
        family: FamilyArg,
        /// Relative size window for class sampling (0 = exact size).
        #[arg(long, default_value_t = 0.1)]
        window: f64,
    },
    /// Normalized diagram of a permutation (or of a sampled one) as CSV.
    Diagram {
        /// Explicit permutation; omit to sample one instead.
        perm: Option<String>,
        #[arg(long, value_enum)]
        kind: Option<SampleKind>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1000)]
        size: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 1.5)]
        delta: f64,
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long, default_value_t = 0.1)]
        window: f64,
    },
    /// Monte-Carlo pattern density in a permuton, or an exact/sampled
    /// density vector of a permutation.
    EstimateDensity {
        /// Pattern π (ignored with --vector).
        #[arg(long, default_value = "12")]
        pattern: String,
        /// "lebesgue" or a permutation σ (estimates occ(π, μ_σ)).
        #[arg(long, default_value = "lebesgue")]
        target: String,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        /// Emit the whole size-k density vector of the target permutation
        /// as a JSON map instead of a single pattern estimate (exact when
        /// C(n,k) subsets fit the budget, sampled otherwise).
        #[arg(long)]
        vector: Option<usize>,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
pub enum SampleKind {
    Class,
    Brownian,
    Stable,
}

enum Family {
    Finite(Vec<Permutation>),
    Builtin(FamilySpec),
}

fn parse_family(s: &str) -> Result<Family, CliError> {
    let s = s.trim();
    if s.is_empty() || s == "none" || s == "empty" || s == "∅" {
        return Ok(Family::Finite(Vec::new()));
    }
    if let Some(spec) = families::builtin(s) {
        return Ok(Family::Builtin(spec));
    }
    if s.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) {
        return Err(CliError::UnknownFamily(s.to_string()));
    }
    let mut members = Vec::new();
    for part in s.split(',') {
        let p = Permutation::from_str(part.trim())?;
        if !p.is_simple() {
            return Err(CliError::NotSimple(p.compact()));
        }
        members.push(p);
    }
    Ok(Family::Finite(members))
}

impl Family {
    fn finite(&self) -> Result<&[Permutation], CliError> {
        match self {
            Family::Finite(m) => Ok(m),
            Family::Builtin(_) => Err(CliError::NeedsFiniteFamily),
        }
    }

    fn spec(self) -> Result<FamilySpec, CliError> {
        match self {
            Family::Finite(m) => Ok(FamilySpec::finite(m)?),
            Family::Builtin(spec) => Ok(spec),
        }
    }
}

/// Parses `args` (including the program name) and runs the command, writing
/// to `out`. This is the whole CLI; the binary only forwards to it.
pub fn run<I, S>(args: I, out: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Usage(e.to_string()))?;
    match cli.out {
        Some(ref path) => {
            let mut file = std::fs::File::create(path)?;
            dispatch(&cli, &mut file)
        }
        None => dispatch(&cli, out),
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Decompose { perm } => cmd_decompose(perm, cli.format, out),
        Command::Count { family, n_max } => cmd_count(&family.family, *n_max, cli.format, out),
        Command::ExactOcc { pattern, family, n } => {
            cmd_exact_occ(pattern, &family.family, *n, cli.format, out)
        }
        Command::Report { family, tol } => cmd_report(&family.family, *tol, out),
        Command::Sample {
            kind,
            seed,
            count,
            size,
            p,
            delta,
            family,
            window,
        } => cmd_sample(
            *kind,
            *seed,
            *count,
            *size,
            *p,
            *delta,
            &family.family,
            *window,
            out,
        ),
        Command::Diagram {
            perm,
            kind,
            seed,
            size,
            p,
            delta,
            family,
            window,
        } => {
            let sigma = match perm {
                Some(s) => Permutation::from_str(s)?,
                None => {
                    let kind = kind.ok_or_else(|| {
                        CliError::Usage("diagram needs a permutation or --kind".into())
                    })?;
                    let seed = seed.ok_or_else(|| {
                        CliError::Usage("sampling a diagram requires --seed".into())
                    })?;
                    sample_one(kind, seed, *size, *p, *delta, &family.family, *window)?
                }
            };
            write_points_csv(&diagram_export(&sigma), out)?;
            Ok(())
        }
        Command::EstimateDensity {
            pattern,
            target,
            samples,
            seed,
            vector,
        } => match vector {
            None => cmd_estimate_density(pattern, target, *samples, *seed, cli.format, out),
            Some(k) => cmd_density_vector(target, *k, *samples, *seed, out),
        },
    }
}

fn cmd_decompose(perm: &str, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    let sigma = Permutation::from_str(perm)?;
    let tree = canonical_tree(&sigma);
    let counts = expanded_tree_count(&sigma);
    let db = default_of_binarity(&sigma);
    match format {
        Format::Json => {
            let labels: Vec<String> = counts.simple_labels.iter().map(|l| l.to_string()).collect();
            let value = serde_json::json!({
                "perm": sigma.to_string(),
                "tree": tree.tree().to_string(),
                "n_expanded": counts.n_tilde.to_string(),
                "n_separation": counts.n_separation.to_string(),
                "r_plus": counts.r_plus,
                "r_minus": counts.r_minus,
                "db": db,
                "simple_labels": labels,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&value).unwrap())?;
        }
        _ => {
            writeln!(out, "tree: {}", tree.tree())?;
            writeln!(out, "n_expanded: {}", counts.n_tilde)?;
            writeln!(out, "n_separation: {}", counts.n_separation)?;
            writeln!(out, "r_plus: {}", counts.r_plus)?;
            writeln!(out, "r_minus: {}", counts.r_minus)?;
            writeln!(out, "db: {db}")?;
        }
    }
    Ok(())
}

fn cmd_count(
    family: &str,
    n_max: usize,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let members = parse_family(family)?;
    let members = members.finite()?;
    let cs = ClassSeries::new(members, n_max)?;
    match format {
        Format::Json => {
            // the full class series T in the standard series format
            writeln!(
                out,
                "{}",
                serde_json::json!({ "family": family, "series": cs.t.to_json() })
            )?;
        }
        Format::Csv => {
            writeln!(out, "n,count")?;
            for n in 1..=n_max {
                writeln!(out, "{n},{}", cs.count(n).unwrap())?;
            }
        }
        Format::Text => {
            for n in 1..=n_max {
                writeln!(out, "{n}\t{}", cs.count(n).unwrap())?;
            }
        }
    }
    Ok(())
}

fn cmd_exact_occ(
    pattern: &str,
    family: &str,
    n: usize,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let pi = Permutation::from_str(pattern)?;
    let members = parse_family(family)?;
    let value = crate::series::exact_expected_occ(&pi, members.finite()?, n)?;
    match format {
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::json!({
                "pattern": pi.to_string(),
                "n": n,
                "value": value.to_string(),
                "float": rational_to_f64(&value),
            })
        )?,
        _ => writeln!(out, "{value}")?,
    }
    Ok(())
}

fn cmd_report(family: &str, tol: f64, out: &mut dyn Write) -> Result<(), CliError> {
    let spec = parse_family(family)?.spec()?;
    let report = report_with(&spec, tol, crate::analysis::EQ_TOL);
    writeln!(out, "{}", serde_json::to_string_pretty(&report).unwrap())?;
    Ok(())
}

fn sample_one(
    kind: SampleKind,
    seed: u64,
    size: usize,
    p: f64,
    delta: f64,
    family: &str,
    window: f64,
) -> Result<Permutation, CliError> {
    let mut rng = Rng::from_seed(seed);
    sample_next(kind, &mut rng, size, p, delta, family, window)
}

fn sample_next(
    kind: SampleKind,
    rng: &mut Rng,
    size: usize,
    p: f64,
    delta: f64,
    family: &str,
    window: f64,
) -> Result<Permutation, CliError> {
    match kind {
        SampleKind::Brownian => Ok(biased_signed_permutation(size, p, rng)?),
        SampleKind::Stable => Ok(stable_permutation(size, delta, &Lebesgue, rng)?),
        SampleKind::Class => {
            let members = parse_family(family)?;
            Ok(boltzmann_class_sample(
                members.finite()?,
                size,
                window,
                rng,
            )?)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_sample(
    kind: SampleKind,
    seed: u64,
    count: usize,
    size: usize,
    p: f64,
    delta: f64,
    family: &str,
    window: f64,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let mut rng = Rng::from_seed(seed);
    for _ in 0..count {
        let sigma = sample_next(kind, &mut rng, size, p, delta, family, window)?;
        writeln!(out, "{sigma}")?;
    }
    Ok(())
}

fn cmd_estimate_density(
    pattern: &str,
    target: &str,
    samples: u64,
    seed: u64,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let pi = Permutation::from_str(pattern)?;
    let mut rng = Rng::from_seed(seed);
    let mu: Box<dyn Permuton> = if target == "lebesgue" {
        Box::new(Lebesgue)
    } else {
        Box::new(PermutationPermuton::new(Permutation::from_str(target)?))
    };
    let est = estimate_occ(&pi, mu.as_ref(), samples, &mut rng)?;
    match format {
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::json!({
                "pattern": pi.to_string(),
                "samples": samples,
                "estimate": est.estimate,
                "stderr": est.stderr,
            })
        )?,
        _ => writeln!(out, "{:.6e} ± {:.6e}", est.estimate, est.stderr)?,
    }
    Ok(())
}

/// Exact or sampled density vector of a permutation as a JSON map keyed by
/// one-line notation (the file format of the density export).
pub fn density_vector_json(
    sigma: &Permutation,
    k: usize,
    mode: DensityMode<'_>,
) -> Result<serde_json::Value, CliError> {
    let map = density_vector(sigma, k, mode)?;
    let obj: BTreeMap<String, f64> = map.into_iter().map(|(pi, v)| (pi.to_string(), v)).collect();
    Ok(serde_json::to_value(obj).unwrap())
}

const EXACT_SUBSET_BUDGET: u64 = 2_000_000;

fn cmd_density_vector(
    target: &str,
    k: usize,
    samples: u64,
    seed: u64,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let sigma = Permutation::from_str(target)?;
    let exact = density_vector_json(
        &sigma,
        k,
        DensityMode::Exact {
            max_subsets: EXACT_SUBSET_BUDGET,
        },
    );
    let value = match exact {
        Ok(v) => v,
        Err(CliError::Permuton(crate::permuton::PermutonError::BudgetExceeded { .. })) => {
            let mut rng = Rng::from_seed(seed);
            density_vector_json(
                &sigma,
                k,
                DensityMode::Sampled {
                    samples,
                    rng: &mut rng,
                },
            )?
        }
        Err(e) => return Err(e),
    };
    writeln!(out, "{}", serde_json::to_string_pretty(&value).unwrap())?;
    Ok(())
}
