//! Stable-tree shapes and δ-stable permuton samples: the exact ν_{δ,k}
//! distribution, Marchal growth, and permutations induced by labeling tree
//! nodes with permuton draws.
//!
//! Run with `cargo run --release --example stable_sampler`.

use std::collections::HashMap;

use permclass::analysis::nu_stable;
use permclass::permuton::Lebesgue;
use permclass::sample::{marchal_tree, marchal_tree_growth, stable_permutation, Rng};
use permclass::tree::enumerate_shapes;

fn main() {
    let delta = 1.5;

    // the exact law of the induced subtree with 4 leaves
    println!("ν_{{δ={delta},k=4}} over all 11 plane shapes:");
    let mut total = 0.0;
    for shape in enumerate_shapes(4) {
        let p = nu_stable(&shape, delta).unwrap();
        total += p;
        println!("  degrees {:?}: {p:.5}", shape.internal_degrees());
    }
    println!("  total = {total}");

    // growth procedure agrees with the formula
    let mut rng = Rng::from_seed(7);
    let draws = 50_000;
    let shapes = enumerate_shapes(3);
    let mut counts = vec![0u64; shapes.len()];
    for _ in 0..draws {
        let t = marchal_tree_growth(3, delta, &mut rng).unwrap();
        counts[shapes.iter().position(|s| *s == t).unwrap()] += 1;
    }
    println!("\nMarchal growth at k = 3 (exact 0.375 / 0.25 / 0.375):");
    for (shape, c) in shapes.iter().zip(&counts) {
        println!(
            "  degrees {:?}: {:.4}",
            shape.internal_degrees(),
            *c as f64 / draws as f64
        );
    }

    // δ-stable permuton samples driven by the Lebesgue measure: smaller δ
    // favors one giant branching, i.e. patterns of a large simple label
    for delta in [1.1, 1.9] {
        let sigma = stable_permutation(30, delta, &Lebesgue, &mut rng).unwrap();
        println!("\nstable sample (δ = {delta}, n = 30): {sigma}");
        let degrees = {
            let shape = marchal_tree(30, delta, &mut rng).unwrap();
            let mut hist: HashMap<usize, usize> = HashMap::new();
            for d in shape.internal_degrees() {
                *hist.entry(d).or_insert(0) += 1;
            }
            let mut v: Vec<_> = hist.into_iter().collect();
            v.sort();
            v
        };
        println!("  a ν_{{δ,30}} degree histogram: {degrees:?}");
    }
}
