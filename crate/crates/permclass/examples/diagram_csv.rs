//! Diagram export: normalized permutation diagrams as CSV point clouds,
//! here for a large sample of the biased Brownian separable permuton.
//! Plotting the file with any external tool reproduces the familiar
//! fractal permuton pictures.
//!
//! Run with `cargo run --release --example diagram_csv > permuton.csv`.

use permclass::permuton::{diagram_export, write_points_csv};
use permclass::sample::{biased_signed_permutation, Rng};

fn main() {
    let mut rng = Rng::from_seed(5);
    let sigma = biased_signed_permutation(5000, 0.45, &mut rng).unwrap();
    let points = diagram_export(&sigma);
    let mut stdout = std::io::stdout().lock();
    write_points_csv(&points, &mut stdout).unwrap();
}
