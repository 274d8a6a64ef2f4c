//! Permutons as point samplers, Monte-Carlo pattern-density estimation, and
//! diagram export.
//!
//! A permuton is represented purely through sampling: anything that can
//! produce i.i.d. points of a probability measure on `[0,1]²` with uniform
//! marginals. The limiting permutons of the theory are reached through their
//! induced-permutation laws (see [`crate::sample`]), not as density objects.

use std::collections::BTreeMap;
use std::io::Write;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::perm::Permutation;
use crate::sample::Rng;

#[derive(Debug, Error)]
pub enum PermutonError {
    #[error("could not resolve coordinate ties after {0} retries")]
    TieResolution(usize),
    #[error("pattern size {k} exceeds host size {n}")]
    PatternTooLarge { k: usize, n: usize },
    #[error("exact density over C({n},{k}) subsets exceeds budget {budget}")]
    BudgetExceeded { n: usize, k: usize, budget: u64 },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// A probability measure on `[0,1]²` with uniform marginals, seen through
/// its point sampler.
pub trait Permuton: Send + Sync {
    fn point(&self, rng: &mut Rng) -> (f64, f64);
}

/// Lebesgue measure on the unit square (the limit of uniform permutations).
pub struct Lebesgue;

impl Permuton for Lebesgue {
    fn point(&self, rng: &mut Rng) -> (f64, f64) {
        (rng.next_f64(), rng.next_f64())
    }
}

/// `μ_σ`: the permuton of a permutation — mass `1/n` spread uniformly on
/// each cell `[(i−1)/n, i/n] × [(σ(i)−1)/n, σ(i)/n]`.
pub struct PermutationPermuton {
    sigma: Permutation,
}

impl PermutationPermuton {
    pub fn new(sigma: Permutation) -> Self {
        Self { sigma }
    }

    pub fn permutation(&self) -> &Permutation {
        &self.sigma
    }
}

impl Permuton for PermutationPermuton {
    fn point(&self, rng: &mut Rng) -> (f64, f64) {
        let n = self.sigma.size();
        let i = rng.next_range(n) + 1;
        let x = (i as f64 - 1.0 + rng.next_f64()) / n as f64;
        let y = (self.sigma.at(i) as f64 - 1.0 + rng.next_f64()) / n as f64;
        (x, y)
    }
}

const TIE_RETRIES: usize = 100;

/// `Perm(x⃗, y⃗)`: draw `k` points from `μ`, order by `x`, return the pattern
/// of the `y`-values. Coordinate ties are resolved by redrawing the
/// colliding point (they have probability 0 for honest permutons).
pub fn perm_from_permuton(
    mu: &dyn Permuton,
    k: usize,
    rng: &mut Rng,
) -> Result<Permutation, PermutonError> {
    assert!(k >= 1);
    let mut pts: Vec<(f64, f64)> = Vec::with_capacity(k);
    for _ in 0..k {
        let mut accepted = None;
        for _ in 0..TIE_RETRIES {
            let (x, y) = mu.point(rng);
            if pts.iter().all(|&(px, py)| px != x && py != y) {
                accepted = Some((x, y));
                break;
            }
        }
        pts.push(accepted.ok_or(PermutonError::TieResolution(TIE_RETRIES))?);
    }
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| pts[a].1.partial_cmp(&pts[b].1).unwrap());
    let mut values = vec![0u32; k];
    for (rank, &i) in order.iter().enumerate() {
        values[i] = rank as u32 + 1;
    }
    Ok(Permutation::new(values).expect("ranks form a permutation"))
}

/// Monte-Carlo estimate of `occ(π, μ)` with its binomial standard error.
#[derive(Clone, Copy, Debug)]
pub struct OccEstimate {
    pub estimate: f64,
    pub stderr: f64,
}

/// Estimates `occ(π, μ) = P(Perm(x⃗,y⃗) = π)` over `samples` independent
/// `k`-point draws.
pub fn estimate_occ(
    pi: &Permutation,
    mu: &dyn Permuton,
    samples: u64,
    rng: &mut Rng,
) -> Result<OccEstimate, PermutonError> {
    assert!(samples >= 1);
    let k = pi.size();
    let mut hits = 0u64;
    for _ in 0..samples {
        if perm_from_permuton(mu, k, rng)? == *pi {
            hits += 1;
        }
    }
    let p_hat = hits as f64 / samples as f64;
    Ok(OccEstimate {
        estimate: p_hat,
        stderr: (p_hat * (1.0 - p_hat) / samples as f64).sqrt(),
    })
}

/// How to compute a pattern-density vector.
pub enum DensityMode<'a> {
    /// Enumerate every `k`-subset of positions; errors above the budget.
    Exact { max_subsets: u64 },
    /// Average over uniformly drawn `k`-subsets of positions.
    Sampled { samples: u64, rng: &'a mut Rng },
}

/// The density vector `(occ-tilde(π, σ))_{π ∈ S_k}`, keyed by pattern;
/// entries sum to 1 and zero patterns are omitted.
pub fn density_vector(
    sigma: &Permutation,
    k: usize,
    mode: DensityMode<'_>,
) -> Result<BTreeMap<Permutation, f64>, PermutonError> {
    let n = sigma.size();
    if k > n {
        return Err(PermutonError::PatternTooLarge { k, n });
    }
    let mut counts: BTreeMap<Permutation, u64> = BTreeMap::new();
    let total: u64;
    match mode {
        DensityMode::Exact { max_subsets } => {
            let subsets = binomial(BigInt::from(n), BigInt::from(k));
            let subsets = subsets.to_u64().filter(|&s| s <= max_subsets).ok_or(
                PermutonError::BudgetExceeded {
                    n,
                    k,
                    budget: max_subsets,
                },
            )?;
            total = subsets;
            fn next_combination(idx: &mut [usize], n: usize) -> bool {
                let k = idx.len();
                let mut i = k;
                while i > 0 {
                    i -= 1;
                    if idx[i] < n - (k - 1 - i) {
                        idx[i] += 1;
                        for j in i + 1..k {
                            idx[j] = idx[j - 1] + 1;
                        }
                        return true;
                    }
                }
                false
            }
            let mut idx: Vec<usize> = (1..=k).collect();
            loop {
                let pat = sigma.pattern_at(&idx).expect("valid index set");
                *counts.entry(pat).or_insert(0) += 1;
                if !next_combination(&mut idx, n) {
                    break;
                }
            }
        }
        DensityMode::Sampled { samples, rng } => {
            total = samples;
            let mut positions: Vec<usize> = (1..=n).collect();
            for _ in 0..samples {
                for i in 0..k {
                    let j = i + rng.next_range(n - i);
                    positions.swap(i, j);
                }
                let mut set: Vec<usize> = positions[..k].to_vec();
                set.sort_unstable();
                let pat = sigma.pattern_at(&set).expect("valid index set");
                *counts.entry(pat).or_insert(0) += 1;
            }
        }
    }
    Ok(counts
        .into_iter()
        .map(|(pi, c)| {
            let r = BigRational::new(BigInt::from(c), BigInt::from(total));
            (pi, crate::series::rational_to_f64(&r))
        })
        .collect())
}

/// Normalized diagram points `((i−1/2)/n, (σ(i)−1/2)/n)` in position order.
pub fn diagram_export(sigma: &Permutation) -> Vec<(f64, f64)> {
    let n = sigma.size() as f64;
    (1..=sigma.size())
        .map(|i| ((i as f64 - 0.5) / n, (sigma.at(i) as f64 - 0.5) / n))
        .collect()
}

/// Writes points as CSV with header `x,y` and 15-significant-digit decimals.
pub fn write_points_csv(points: &[(f64, f64)], out: &mut dyn Write) -> Result<(), PermutonError> {
    writeln!(out, "x,y")?;
    for (x, y) in points {
        writeln!(out, "{x:.14e},{y:.14e}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{ks_critical, ks_statistic};

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn perm_from_lebesgue_is_uniform() {
        let mut rng = Rng::from_seed(1);
        let draws = 30_000u64;
        let mut counts = std::collections::HashMap::new();
        for _ in 0..draws {
            let sigma = perm_from_permuton(&Lebesgue, 3, &mut rng).unwrap();
            *counts.entry(sigma).or_insert(0u64) += 1;
        }
        let observed: Vec<u64> = crate::perm::all_permutations(3)
            .iter()
            .map(|pi| counts.get(pi).copied().unwrap_or(0))
            .collect();
        let (stat, pv) = crate::stats::chi_square_test(&observed, &[1.0 / 6.0; 6]);
        assert!(pv > 0.01, "chi2 = {stat}");
    }

    #[test]
    fn size_one_pattern() {
        let mut rng = Rng::from_seed(2);
        assert_eq!(perm_from_permuton(&Lebesgue, 1, &mut rng).unwrap(), p("1"));
    }

    #[test]
    fn permutation_permuton_12_probability() {
        // P(Perm = 12) for μ_{12} is 3/4: same-cell draws split evenly,
        // cross-cell draws are always ascending
        let mu = PermutationPermuton::new(p("12"));
        let mut rng = Rng::from_seed(3);
        let est = estimate_occ(&p("12"), &mu, 100_000, &mut rng).unwrap();
        assert!(
            (est.estimate - 0.75).abs() <= 4.0 * est.stderr,
            "estimate {} ± {}",
            est.estimate,
            est.stderr
        );
        // and for μ_{21}, P(Perm = 21) = 3/4 by symmetry
        let mu = PermutationPermuton::new(p("21"));
        let est = estimate_occ(&p("21"), &mu, 100_000, &mut rng).unwrap();
        assert!((est.estimate - 0.75).abs() <= 4.0 * est.stderr);
    }

    #[test]
    fn uniform_marginals_ks() {
        let n = 50_000;
        for (name, mu) in [
            ("lebesgue", Box::new(Lebesgue) as Box<dyn Permuton>),
            ("sigma", Box::new(PermutationPermuton::new(p("35142")))),
        ] {
            let mut rng = Rng::from_seed(9);
            let mut xs = Vec::with_capacity(n);
            let mut ys = Vec::with_capacity(n);
            for _ in 0..n {
                let (x, y) = mu.point(&mut rng);
                xs.push(x);
                ys.push(y);
            }
            let crit = ks_critical(0.01, n);
            assert!(ks_statistic(&mut xs, |x| x) < crit, "{name} x-marginal");
            assert!(ks_statistic(&mut ys, |y| y) < crit, "{name} y-marginal");
        }
    }

    #[test]
    fn density_vector_exact_matches_occ_density() {
        let sigma = p("2413");
        let v = density_vector(
            &sigma,
            2,
            DensityMode::Exact {
                max_subsets: 1_000_000,
            },
        )
        .unwrap();
        assert_eq!(v.len(), 2);
        assert_eq!(v[&p("12")], 0.5);
        assert_eq!(v[&p("21")], 0.5);
        let sigma = p("35142");
        for k in 1..=3usize {
            let v = density_vector(
                &sigma,
                k,
                DensityMode::Exact {
                    max_subsets: 1_000_000,
                },
            )
            .unwrap();
            let total: f64 = v.values().sum();
            assert!((total - 1.0).abs() < 1e-12);
            for (pi, val) in &v {
                let exact = Permutation::occ_density(pi, &sigma).unwrap();
                assert_eq!(*val, crate::series::rational_to_f64(&exact));
            }
        }
    }

    #[test]
    fn density_vector_budget() {
        let sigma = Permutation::identity(30);
        assert!(matches!(
            density_vector(&sigma, 4, DensityMode::Exact { max_subsets: 100 }),
            Err(PermutonError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn density_vector_sampled_close_to_exact() {
        let sigma = p("7 3 10 1 5 9 2 8 4 6 11 15 12 14 13 17 16 20 18 19");
        let exact = density_vector(
            &sigma,
            3,
            DensityMode::Exact {
                max_subsets: 10_000_000,
            },
        )
        .unwrap();
        let mut rng = Rng::from_seed(17);
        let samples = 200_000u64;
        let sampled = density_vector(
            &sigma,
            3,
            DensityMode::Sampled {
                samples,
                rng: &mut rng,
            },
        )
        .unwrap();
        for (pi, &e) in &exact {
            let s = sampled.get(pi).copied().unwrap_or(0.0);
            let stderr = (e * (1.0 - e) / samples as f64).sqrt();
            assert!((s - e).abs() <= 5.0 * stderr + 1e-9, "{pi}: {s} vs {e}");
        }
    }

    #[test]
    fn diagram_points() {
        assert_eq!(diagram_export(&p("1")), vec![(0.5, 0.5)]);
        assert_eq!(diagram_export(&p("21")), vec![(0.25, 0.75), (0.75, 0.25)]);
        let pts = diagram_export(&p("231"));
        let want_x = [1.0 / 6.0, 0.5, 5.0 / 6.0];
        for (i, (x, _)) in pts.iter().enumerate() {
            assert!((x - want_x[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn csv_output_shape() {
        let mut buf = Vec::new();
        write_points_csv(&diagram_export(&p("21")), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("x,y"));
        assert_eq!(lines.count(), 2);
    }

    #[test]
    fn permuton_discrepancy_bound_small_case() {
        // |occ-tilde(π,σ) − occ(π,μ_σ)| ≤ C(k,2)/n, checked by Monte Carlo
        let sigma = p("6 2 5 8 3 1 7 4");
        let mu = PermutationPermuton::new(sigma.clone());
        let mut rng = Rng::from_seed(23);
        for pat in ["12", "21", "123", "231"] {
            let pi = p(pat);
            let k = pi.size();
            let exact =
                crate::series::rational_to_f64(&Permutation::occ_density(&pi, &sigma).unwrap());
            let est = estimate_occ(&pi, &mu, 50_000, &mut rng).unwrap();
            let bound = (k * (k - 1) / 2) as f64 / sigma.size() as f64 + 4.0 * est.stderr;
            assert!(
                (exact - est.estimate).abs() <= bound,
                "{pat}: |{exact} − {}| > {bound}",
                est.estimate
            );
        }
    }
}
