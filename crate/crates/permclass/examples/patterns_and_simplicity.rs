//! Ground-level permutation operations: pattern extraction, occurrence
//! counting, substitution and simplicity testing.
//!
//! Run with `cargo run --example patterns_and_simplicity`.

use permclass::perm::{all_permutations, Permutation};

fn main() {
    let sigma: Permutation = "65831247".parse().unwrap();
    println!("sigma = {sigma}");

    // the pattern induced by positions {2, 5, 7}
    let pat = sigma.pattern_at(&[2, 5, 7]).unwrap();
    println!("pat_{{2,5,7}}(sigma) = {pat}");

    // occurrence counts and densities
    let pi: Permutation = "21".parse().unwrap();
    let host: Permutation = "2413".parse().unwrap();
    println!(
        "occ(21, 2413) = {}  (density {})",
        Permutation::occ_count(&pi, &host),
        Permutation::occ_density(&pi, &host).unwrap()
    );

    // occurrence counts over all patterns of one size partition the subsets
    let k = 3;
    let total: u64 = all_permutations(k)
        .iter()
        .map(|pi| Permutation::occ_count(pi, &sigma))
        .sum();
    println!("sum over S_{k} of occ(pi, sigma) = {total} = C(8,3)");

    // substitution: inflate each skeleton entry into a block
    let skeleton: Permutation = "132".parse().unwrap();
    let blocks: Vec<Permutation> = ["21", "1", "12"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    let combined = Permutation::substitute(&skeleton, &blocks).unwrap();
    println!("132[21, 1, 12] = {combined}");

    // the smallest simple permutations, and a non-simple example
    for s in ["2413", "3142", "451326", "24153", "12"] {
        let p: Permutation = s.parse().unwrap();
        println!("is_simple({s}) = {}", p.is_simple());
    }

    // dihedral symmetries
    let p: Permutation = "2413".parse().unwrap();
    println!(
        "reverse = {}, complement = {}, inverse = {}",
        p.reverse(),
        p.complement(),
        p.inverse()
    );
    let (asc, desc) = "23145".parse::<Permutation>().unwrap().ascents_descents();
    println!("23145 has {asc} ascents, {desc} descents");
}
