//! Enumeration, limit analysis and random generation for substitution-closed
//! permutation classes.
//!
//! A substitution-closed class `⟨S⟩` is determined by its set `S` of simple
//! permutations. This crate makes the combinatorics of such classes executable:
//!
//! * [`perm`] — permutations, patterns, occurrence counting, substitution and
//!   simplicity testing;
//! * [`tree`] — substitution trees, the canonical decomposition, induced trees
//!   and exhaustive class enumeration (the brute-force oracle);
//! * [`series`] — exact truncated power series over rationals: the
//!   generating-function system for `⟨S⟩` and exact expected pattern densities
//!   at finite size;
//! * [`analysis`] — numeric singularity analysis: regime classification, the
//!   constant pack (κ, τ, ρ, β, λ, γ, ν±, p), limit densities and
//!   coefficient asymptotics;
//! * [`families`] — built-in symbolic families (increasing oscillations,
//!   simple 321-avoiders);
//! * [`sample`] — seeded random generation: uniform binary trees, biased
//!   signed trees, stable-tree shapes and Boltzmann samplers;
//! * [`permuton`] — permuton sampling and Monte-Carlo pattern-density
//!   estimation;
//! * [`cli`] — the `permclass` command-line front end.
//!
//! Start with the `examples/` directory: each file is a runnable walkthrough
//! of one capability (`cargo run --example enumerate_class`, ...).

pub mod analysis;
pub mod cli;
pub mod families;
pub mod perm;
pub mod permuton;
pub mod sample;
pub mod series;
pub mod stats;
pub mod tree;

pub use perm::Permutation;
pub use tree::{CanonicalTree, NodeLabel, SubstitutionTree, TreeShape};
