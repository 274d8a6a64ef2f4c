//! Boltzmann sampling of a substitution-closed class: size-windowed
//! rejection, parameter tuning, and uniformity conditioned on size.
//!
//! Run with `cargo run --release --example boltzmann_sampler`.

use std::collections::HashMap;

use permclass::perm::Permutation;
use permclass::sample::{BoltzmannSampler, Rng};
use permclass::tree::enumerate_class;

fn main() {
    let family: Vec<Permutation> = vec!["2413".parse().unwrap(), "3142".parse().unwrap()];
    let sampler = BoltzmannSampler::new(&family).unwrap();
    println!(
        "default parameter z = {:.6} (= 0.99·rho, rho = {:.6}), E[size] ≈ {:.2}",
        sampler.parameter(),
        sampler.rho_value(),
        sampler.expected_size()
    );

    let mut rng = Rng::from_seed(99);
    println!("\nfive samples with size within 20% of 40:");
    for _ in 0..5 {
        let sigma = sampler.sample_sized(40, 0.2, &mut rng, 1_000_000).unwrap();
        println!("  n = {:2}: {sigma}", sigma.size());
    }

    // tuning moves the expected size to the target
    let tuned = BoltzmannSampler::tuned(&family, 100).unwrap();
    println!(
        "\ntuned for target 100: z = {:.8}, E[size] = {:.2}",
        tuned.parameter(),
        tuned.expected_size()
    );

    // conditioned on exact size 4, the 24 class members come up uniformly
    let class4 = enumerate_class(&family, 4).unwrap();
    let mut counts: HashMap<Permutation, u64> = HashMap::new();
    let accepted = 24_000;
    for _ in 0..accepted {
        let sigma = sampler.sample_sized(4, 0.0, &mut rng, 1_000_000).unwrap();
        *counts.entry(sigma).or_insert(0) += 1;
    }
    println!(
        "\nconditioned on size 4 ({} members, expect ~{} each):",
        class4.len(),
        accepted / 24
    );
    for sigma in &class4 {
        println!(
            "  {}: {}",
            sigma.compact(),
            counts.get(sigma).copied().unwrap_or(0)
        );
    }
}
