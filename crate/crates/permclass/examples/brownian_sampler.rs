//! Sampling the biased Brownian separable permuton: uniform binary trees by
//! Rémy's algorithm, i.i.d. signs, and the induced permutations.
//!
//! Run with `cargo run --release --example brownian_sampler`.

use std::collections::HashMap;

use permclass::perm::{all_permutations, Permutation};
use permclass::sample::{biased_signed_permutation, remy_binary_tree, Rng};
use permclass::tree::expanded_tree_count;

fn main() {
    let mut rng = Rng::from_seed(20_240_817);

    // Rémy: all Cat_3 = 5 binary shapes with 4 leaves appear uniformly
    let mut shapes = HashMap::new();
    for _ in 0..50_000 {
        *shapes
            .entry(remy_binary_tree(4, &mut rng).unwrap())
            .or_insert(0u64) += 1;
    }
    let mut rows: Vec<(String, u64)> = shapes
        .iter()
        .map(|(shape, &count)| (format!("{shape:?}"), count))
        .collect();
    rows.sort();
    println!("Rémy shape frequencies with 4 leaves (expect ~10000 each):");
    for (shape, count) in &rows {
        let compact = shape
            .replace("Node", "")
            .replace("Leaf", "o")
            .replace(", ", " ");
        println!("  {compact}: {count}");
    }

    // τ_n^(p): one large sample per bias
    for p in [0.2, 0.5, 0.8] {
        let sigma = biased_signed_permutation(24, p, &mut rng).unwrap();
        println!("\nτ_24^({p}): {sigma}");
    }

    // empirical pattern law of τ_3^(p) against N_π p^{r+} (1−p)^{r−}/Cat_2
    let p = 0.7;
    let draws = 100_000;
    let mut counts: HashMap<Permutation, u64> = HashMap::new();
    for _ in 0..draws {
        *counts
            .entry(biased_signed_permutation(3, p, &mut rng).unwrap())
            .or_insert(0) += 1;
    }
    println!("\nlaw of τ_3^({p}) over {draws} draws:");
    for pi in all_permutations(3) {
        let c = expanded_tree_count(&pi);
        let n_pi: f64 = c.n_separation.to_string().parse().unwrap();
        let expect = n_pi / 2.0 * p.powi(c.r_plus as i32) * (1.0f64 - p).powi(c.r_minus as i32);
        let got = counts.get(&pi).copied().unwrap_or(0) as f64 / draws as f64;
        println!("  {}: empirical {got:.4}, exact {expect:.4}", pi.compact());
    }
}
