//! Regime classification and the limiting-permuton constant pack, including
//! the two built-in infinite families.
//!
//! Run with `cargo run --example regime_report`.

use permclass::analysis::{classify_regime, report, standard_constants, FamilySpec};
use permclass::families::{av321_simples, increasing_oscillations};

fn main() {
    // the separable class: everything in closed form
    let spec = FamilySpec::empty();
    let rep = standard_constants(&spec).unwrap();
    println!("S = ∅ ({}):", classify_regime(&spec));
    println!("  kappa = {:.12} (= √2 − 1)", rep.kappa.unwrap());
    println!("  rho   = {:.12} (= 3 − 2√2)", rep.rho.unwrap());
    println!(
        "  beta  = {:.12}, lambda = {:.12}",
        rep.beta.unwrap(),
        rep.lambda.unwrap()
    );
    println!("  p     = {}", rep.p.unwrap());

    // a finite family closed under reverse/complement has p = 1/2
    let spec = FamilySpec::finite(
        ["2413", "3142", "24153", "42513"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect(),
    )
    .unwrap();
    let rep = standard_constants(&spec).unwrap();
    println!("\nS = {{2413, 3142, 24153, 42513}}: p = {}", rep.p.unwrap());

    // increasing oscillations: a genuinely biased limit
    let rep = standard_constants(&increasing_oscillations()).unwrap();
    println!("\nincreasing oscillations:");
    println!("  kappa = {:.6}", rep.kappa.unwrap());
    println!("  p     = {:.6}", rep.p.unwrap());

    // simple 321-avoiders: truncated occurrence sums give an interval for p
    let rep = standard_constants(&av321_simples()).unwrap();
    println!("\nsimple permutations of Av(321):");
    println!("  kappa      = {:.6}", rep.kappa.unwrap());
    let (lo, hi) = rep.p_interval.unwrap();
    println!(
        "  p estimate = {:.6}, certified interval [{lo:.4}, {hi:.4}]",
        rep.p.unwrap()
    );

    // the full report serializes as JSON with 15-digit decimal strings
    println!("\nJSON report for the oscillations family:");
    println!(
        "{}",
        serde_json::to_string_pretty(&report(&increasing_oscillations())).unwrap()
    );
}
