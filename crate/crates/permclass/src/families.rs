//! Built-in symbolic families of simple permutations.
//!
//! Two infinite families ship with closed-form (or exactly truncated)
//! evaluators so their regime reports are one-call reproductions:
//!
//! * [`increasing_oscillations`] — `S(z) = 2z⁴/(1−z)`, with closed forms for
//!   `Occ₁₂`/`Occ₂₁`;
//! * [`av321_simples`] — the simple permutations avoiding `321`, with
//!   `S(z) = (1−z−2z²−2z³−√(1−2z−3z²))/(2+2z)`, truncated occurrence sums
//!   and the `n²/4`-inversions tail bound for interval output.

use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::analysis::{FamilySpec, OccTailBound, SymbolicFamily, TailSplit};
use crate::perm::Permutation;
use crate::series::TruncatedSeries;

/// Truncation order of the exact `S`-series kept for the 321 family.
const AV321_SERIES_ORDER: usize = 360;
/// Truncation order of the `Occ₁₂`/`Occ₂₁` occurrence sums.
pub const AV321_OCC_TRUNCATION: usize = 12;

/// Looks up a built-in family by CLI name.
pub fn builtin(name: &str) -> Option<FamilySpec> {
    match name {
        "increasing-oscillations" => Some(increasing_oscillations()),
        "av321-simples" => Some(av321_simples()),
        _ => None,
    }
}

/// The increasing oscillations: two simple permutations of each size ≥ 4,
/// `S(z) = 2z⁴/(1−z)`.
pub fn increasing_oscillations() -> FamilySpec {
    FamilySpec::Symbolic(SymbolicFamily {
        r_s: 1.0,
        s: Box::new(|z| 2.0 * z.powi(4) / (1.0 - z)),
        s_prime: Box::new(|z| (8.0 * z.powi(3) - 6.0 * z.powi(4)) / (1.0 - z).powi(2)),
        s_double_prime: Box::new(|z| {
            (24.0 * z.powi(2) - 32.0 * z.powi(3) + 12.0 * z.powi(4)) / (1.0 - z).powi(3)
        }),
        occ12: Box::new(|z| 2.0 * z * z * (3.0 - 3.0 * z + z * z) / (1.0 - z).powi(3)),
        occ21: Box::new(|z| 2.0 * z * z * (3.0 - 2.0 * z) / (1.0 - z).powi(2)),
        occ_tail: None,
    })
}

struct Av321Data {
    /// `s_n` for `n = 0..=AV321_SERIES_ORDER`, from the closed form.
    s_coeffs: Vec<f64>,
    /// `Σ_α occ(12, α)` over simple 321-avoiders of each size `4..=12`.
    occ12_terms: Vec<(usize, f64)>,
    occ21_terms: Vec<(usize, f64)>,
}

fn av321_data() -> &'static Av321Data {
    static DATA: OnceLock<Av321Data> = OnceLock::new();
    DATA.get_or_init(|| {
        let s_coeffs = av321_series_coeffs(AV321_SERIES_ORDER)
            .iter()
            .map(|c| c.to_f64().expect("coefficient fits in f64 range"))
            .collect();
        let mut occ12_terms = Vec::new();
        let mut occ21_terms = Vec::new();
        for n in 4..=AV321_OCC_TRUNCATION {
            let mut inv_total = 0u64;
            let mut non_total = 0u64;
            for alpha in simple_av321(n) {
                let inv = Permutation::occ_count(&"21".parse().unwrap(), &alpha);
                inv_total += inv;
                non_total += (n * (n - 1) / 2) as u64 - inv;
            }
            occ12_terms.push((n, non_total as f64));
            occ21_terms.push((n, inv_total as f64));
        }
        Av321Data {
            s_coeffs,
            occ12_terms,
            occ21_terms,
        }
    })
}

/// Exact series coefficients of `S(z) = (1−z−2z²−2z³−√(1−2z−3z²))/(2+2z)`.
pub fn av321_series_coeffs(order: usize) -> Vec<BigRational> {
    // sqrt(1-2z-3z^2) by the coefficient recurrence y_n = (q_n - Σ y_i y_{n-i})/2
    let mut q = vec![BigRational::zero(); order + 1];
    q[0] = BigRational::one();
    q[1] = -BigRational::from_integer(2.into());
    q[2] = -BigRational::from_integer(3.into());
    let mut y = vec![BigRational::zero(); order + 1];
    y[0] = BigRational::one();
    for n in 1..=order {
        let mut acc = q[n].clone();
        for i in 1..n {
            acc -= &y[i] * &y[n - i];
        }
        y[n] = acc / BigRational::from_integer(2.into());
    }
    let mut num = vec![BigRational::zero(); order + 1];
    num[0] = BigRational::one();
    num[1] = -BigRational::one();
    num[2] = -BigRational::from_integer(2.into());
    num[3] = -BigRational::from_integer(2.into());
    for n in 0..=order {
        num[n] -= &y[n];
    }
    let numerator = TruncatedSeries::new(num);
    let mut den = vec![BigRational::zero(); order + 1];
    den[0] = BigRational::from_integer(2.into());
    den[1] = BigRational::from_integer(2.into());
    let out = numerator
        .divide(&TruncatedSeries::new(den))
        .expect("unit constant term");
    debug_assert!(out
        .coeffs()
        .iter()
        .all(|c| c.is_integer() && !c.is_negative()));
    out.coeffs().to_vec()
}

/// All simple 321-avoiding permutations of size `n`, by backtracking over
/// 321-avoiding prefixes.
pub fn simple_av321(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut prefix: Vec<u32> = Vec::with_capacity(n);
    let mut used = vec![false; n + 1];
    // a prefix stays 321-avoiding iff the next value exceeds the largest
    // value that is the bottom of an inversion so far
    fn rec(
        n: usize,
        prefix: &mut Vec<u32>,
        used: &mut Vec<bool>,
        cur_max: u32,
        m2: u32,
        out: &mut Vec<Permutation>,
    ) {
        if prefix.len() == n {
            let p = Permutation::new(prefix.clone()).unwrap();
            if p.is_simple() {
                out.push(p);
            }
            return;
        }
        for v in (m2 + 1)..=(n as u32) {
            if used[v as usize] {
                continue;
            }
            used[v as usize] = true;
            prefix.push(v);
            let new_m2 = if v < cur_max { m2.max(v) } else { m2 };
            rec(n, prefix, used, cur_max.max(v), new_m2, out);
            prefix.pop();
            used[v as usize] = false;
        }
    }
    rec(n, &mut prefix, &mut used, 0, 0, &mut out);
    out.sort();
    out
}

fn horner(coeffs: &[f64], x: f64, weight: impl Fn(usize) -> f64) -> f64 {
    let mut acc = 0.0;
    for n in (0..coeffs.len()).rev() {
        acc = acc * x + coeffs[n] * weight(n);
    }
    acc
}

/// The simple permutations of `Av(321)` as a symbolic family (the
/// substitution closure of `Av(321)` is `⟨S⟩` for this `S`).
///
/// `Occ₁₂`/`Occ₂₁` are the order-12 truncations; the tail bound combines the
/// exact remainder of `Occ₁₂ + Occ₂₁` (computable from the `s_n`) with the
/// `n²/4` cap on inversions of a 321-avoider.
pub fn av321_simples() -> FamilySpec {
    let data = av321_data();
    let s_coeffs = data.s_coeffs.clone();
    let s_coeffs_p = data.s_coeffs.clone();
    let s_coeffs_pp = data.s_coeffs.clone();
    let occ12 = data.occ12_terms.clone();
    let occ21 = data.occ21_terms.clone();
    let tail_coeffs = data.s_coeffs.clone();
    FamilySpec::Symbolic(SymbolicFamily {
        r_s: 1.0 / 3.0,
        s: Box::new(move |x| horner(&s_coeffs, x, |_| 1.0)),
        s_prime: Box::new(move |x| {
            if x == 0.0 {
                return 0.0;
            }
            horner(&s_coeffs_p, x, |n| n as f64) / x
        }),
        s_double_prime: Box::new(move |x| {
            if x == 0.0 {
                return 0.0;
            }
            horner(&s_coeffs_pp, x, |n| (n * n.saturating_sub(1)) as f64) / (x * x)
        }),
        occ12: Box::new(move |x| occ12.iter().map(|&(n, c)| c * x.powi(n as i32 - 2)).sum()),
        occ21: Box::new(move |x| occ21.iter().map(|&(n, c)| c * x.powi(n as i32 - 2)).sum()),
        occ_tail: Some(OccTailBound {
            truncation: AV321_OCC_TRUNCATION,
            eval: Box::new(move |x| av321_tail(&tail_coeffs, x)),
        }),
    })
}

#[allow(clippy::needless_range_loop)] // n is the permutation size, not just an index
fn av321_tail(s_coeffs: &[f64], x: f64) -> TailSplit {
    if x >= 1.0 / 3.0 {
        return TailSplit {
            total: f64::INFINITY,
            occ21_max: f64::INFINITY,
        };
    }
    let mut total = 0.0;
    let mut occ21_max = 0.0;
    for n in (AV321_OCC_TRUNCATION + 1)..s_coeffs.len() {
        let xp = x.powi(n as i32 - 2);
        // every α of size n holds occ(12,α)+occ(21,α) = C(n,2) exactly,
        // and at most n²/4 inversions
        total += s_coeffs[n] * (n * (n - 1) / 2) as f64 * xp;
        occ21_max += s_coeffs[n] * (n as f64 * n as f64 / 4.0) * xp;
    }
    // beyond the stored coefficients: s_n ≤ S(1/3)·3ⁿ = (5/36)·3ⁿ and
    // Σ_{n>M} n² qⁿ ≤ q^{M+1} (M+1)² (1+q)/(1−q)³ for q = 3x < 1
    let m = s_coeffs.len() - 1;
    let q: f64 = 3.0 * x;
    let rest = (5.0 / 36.0) * q.powi(m as i32 + 1) * ((m + 1) * (m + 1)) as f64 * (1.0 + q)
        / (1.0 - q).powi(3)
        / (2.0 * x * x);
    TailSplit {
        total: total + rest,
        occ21_max: occ21_max + rest,
    }
}
