//! Permutons as point samplers: induced permutations, Monte-Carlo pattern
//! densities with standard errors, and the discrepancy bound between a
//! permutation and its permuton.
//!
//! Run with `cargo run --release --example permuton_estimation`.

use permclass::perm::Permutation;
use permclass::permuton::{
    density_vector, estimate_occ, perm_from_permuton, DensityMode, Lebesgue, PermutationPermuton,
};
use permclass::sample::{boltzmann_class_sample, Rng};
use permclass::series::rational_to_f64;

fn main() {
    let mut rng = Rng::from_seed(1234);

    // induced permutations of the Lebesgue permuton are uniform
    print!("five 4-point samples of the Lebesgue permuton: ");
    for _ in 0..5 {
        print!(
            "{} ",
            perm_from_permuton(&Lebesgue, 4, &mut rng)
                .unwrap()
                .compact()
        );
    }
    println!();

    // occ(12, Lebesgue) = 1/2
    let est = estimate_occ(&"12".parse().unwrap(), &Lebesgue, 100_000, &mut rng).unwrap();
    println!(
        "occ(12, Lebesgue) ≈ {:.4} ± {:.4}",
        est.estimate, est.stderr
    );

    // a permutation, its permuton, and the discrepancy bound C(k,2)/n
    let sigma: Permutation = boltzmann_class_sample(&[], 40, 0.2, &mut rng).unwrap();
    let n = sigma.size();
    println!("\nrandom separable sigma of size {n}: {sigma}");
    let mu = PermutationPermuton::new(sigma.clone());
    for pat in ["12", "123", "231"] {
        let pi: Permutation = pat.parse().unwrap();
        let k = pi.size();
        let exact = rational_to_f64(&Permutation::occ_density(&pi, &sigma).unwrap());
        let est = estimate_occ(&pi, &mu, 100_000, &mut rng).unwrap();
        println!(
            "  occ({pat}): exact {exact:.5}, permuton {:.5} ± {:.5}  (bound C({k},2)/{n} = {:.5})",
            est.estimate,
            est.stderr,
            (k * (k - 1) / 2) as f64 / n as f64
        );
    }

    // density vectors: exact enumeration vs sampled subsets
    let exact = density_vector(
        &sigma,
        3,
        DensityMode::Exact {
            max_subsets: 1_000_000,
        },
    )
    .unwrap();
    let sampled = density_vector(
        &sigma,
        3,
        DensityMode::Sampled {
            samples: 50_000,
            rng: &mut rng,
        },
    )
    .unwrap();
    println!("\nsize-3 density vector of sigma (exact | sampled):");
    for (pi, v) in &exact {
        println!(
            "  {}: {v:.5} | {:.5}",
            pi.compact(),
            sampled.get(pi).copied().unwrap_or(0.0)
        );
    }
}
