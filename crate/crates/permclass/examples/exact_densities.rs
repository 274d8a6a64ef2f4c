//! Exact expected pattern densities at finite size, and their convergence
//! to the limit law of the biased Brownian separable permuton.
//!
//! Run with `cargo run --release --example exact_densities`.

use permclass::analysis::{limit_density_standard, standard_constants, FamilySpec};
use permclass::perm::{all_permutations, Permutation};
use permclass::series::{rational_to_f64, ClassSeries};

fn main() {
    // exact rational densities in the separable class
    let cs = ClassSeries::new(&[], 60).unwrap();
    let pi: Permutation = "123".parse().unwrap();
    println!("E[occ(123, sigma_n)] for uniform separable sigma_n:");
    for n in [3usize, 6, 10, 20, 40, 60] {
        let v = cs.expected_occ(&pi, n).unwrap();
        println!("  n = {n:3}: {} ≈ {:.6}", v, rational_to_f64(&v));
    }
    let rep = standard_constants(&FamilySpec::empty()).unwrap();
    let limit = limit_density_standard(&pi, &rep).unwrap();
    println!("  limit (N_π/Cat_{{k−1}}) p^r+ (1−p)^r− = {limit}");

    // the full size-3 density vector at n = 30, against the limit law
    println!("\nall patterns of size 3 at n = 30 (exact vs limit):");
    for pi in all_permutations(3) {
        let v = rational_to_f64(&cs.expected_occ(&pi, 30).unwrap());
        let l = limit_density_standard(&pi, &rep).unwrap();
        println!("  {}: {v:.6}  ->  {l:.6}", pi.compact());
    }

    // a nonseparable pattern dies out polynomially: db(2413) = 2 means
    // density ~ B n^{-1}
    let fam: Vec<Permutation> = vec!["2413".parse().unwrap(), "3142".parse().unwrap()];
    let cs2 = ClassSeries::new(&fam, 120).unwrap();
    let spec = FamilySpec::finite(fam).unwrap();
    let rep2 = standard_constants(&spec).unwrap();
    let b = permclass::analysis::b_pi_constant(&"2413".parse().unwrap(), &rep2, &spec).unwrap();
    println!("\nE[occ(2413, sigma_n)] in <{{2413,3142}}> with n·E shown (B_2413 = {b:.5}):");
    let pi2413: Permutation = "2413".parse().unwrap();
    for n in [10usize, 30, 60, 120] {
        let v = rational_to_f64(&cs2.expected_occ(&pi2413, n).unwrap());
        println!(
            "  n = {n:3}: density {v:.6}, n·density = {:.5}",
            n as f64 * v
        );
    }
}
