//! Limit densities beyond the standard regime: the stable-regime formula
//! summing ν_{δ,k} over substitution trees, and the degenerate-regime
//! normalization of user-supplied singular constants.
//!
//! Run with `cargo run --example stable_limit_densities`.

use std::collections::HashMap;

use permclass::analysis::{degenerate_limit, limit_density_stable};
use permclass::perm::{all_permutations, Permutation};

fn main() {
    // a Δ-table: limiting densities of node labels (here an artificial but
    // normalized choice per size)
    let mut deltas: HashMap<Permutation, f64> = HashMap::new();
    deltas.insert("12".parse().unwrap(), 0.6);
    deltas.insert("21".parse().unwrap(), 0.4);
    for pi in all_permutations(3) {
        deltas.insert(pi, 1.0 / 6.0);
    }
    for pi in all_permutations(4) {
        deltas.insert(pi, 1.0 / 24.0);
    }

    for delta in [1.2, 1.5, 1.8] {
        println!("stable limit densities at δ = {delta}:");
        let mut total = 0.0;
        for pi in all_permutations(3) {
            let v = limit_density_stable(&pi, delta, &deltas).unwrap();
            total += v;
            println!("  {}: {v:.5}", pi.compact());
        }
        println!("  sum = {total:.6}\n");
    }

    // nonseparable patterns survive in the stable regime
    let v = limit_density_stable(&"2413".parse().unwrap(), 1.5, &deltas).unwrap();
    println!("density of 2413 at δ = 1.5: {v:.5} (nonzero!)");

    // degenerate regime: the class looks like its simple permutations;
    // limits are just normalized (CS) constants
    let mut c: HashMap<Permutation, f64> = HashMap::new();
    c.insert("132".parse().unwrap(), 3.0);
    c.insert("213".parse().unwrap(), 1.0);
    println!("\ndegenerate limits from constants {{132: 3, 213: 1}}:");
    for (pi, v) in degenerate_limit(3, &c).unwrap() {
        if v > 0.0 {
            println!("  {}: {v}", pi.compact());
        }
    }
}
