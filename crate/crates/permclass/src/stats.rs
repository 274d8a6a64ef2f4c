//! Small numeric toolbox: gamma function, chi-square goodness of fit and
//! Kolmogorov–Smirnov statistics, used by the analysis layer and the
//! statistical validation tests.

/// Lanczos approximation of `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    assert!(x > 0.0, "ln_gamma requires a positive argument");
    if x < 0.5 {
        // reflection to keep the approximation accurate near 0
        return (std::f64::consts::PI / (std::f64::consts::PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = COEF[0];
    for (i, c) in COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// `Γ(x)` for any non-integer (or positive) argument, by reflection for
/// negative inputs.
pub fn gamma(x: f64) -> f64 {
    if x > 0.0 {
        return ln_gamma(x).exp();
    }
    assert!(x.fract() != 0.0, "gamma pole at nonpositive integer {x}");
    // Γ(x) Γ(1−x) = π / sin(πx)
    std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x))
}

/// Regularized lower incomplete gamma `P(s, x)`.
pub fn reg_lower_gamma(s: f64, x: f64) -> f64 {
    assert!(s > 0.0 && x >= 0.0);
    if x == 0.0 {
        return 0.0;
    }
    if x < s + 1.0 {
        // series expansion
        let mut term = 1.0 / s;
        let mut sum = term;
        let mut a = s;
        for _ in 0..500 {
            a += 1.0;
            term *= x / a;
            sum += term;
            if term.abs() < sum.abs() * 1e-16 {
                break;
            }
        }
        sum * (-x + s * x.ln() - ln_gamma(s)).exp()
    } else {
        // continued fraction for Q(s, x)
        let mut b = x + 1.0 - s;
        let mut c = 1.0 / 1e-300;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..500 {
            let an = -(i as f64) * (i as f64 - s);
            b += 2.0;
            d = an * d + b;
            if d.abs() < 1e-300 {
                d = 1e-300;
            }
            c = b + an / c;
            if c.abs() < 1e-300 {
                c = 1e-300;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        1.0 - (-x + s * x.ln() - ln_gamma(s)).exp() * h
    }
}

/// Chi-square goodness-of-fit: observed counts against cell probabilities.
/// Returns `(statistic, p_value)` with `df = #cells − 1`.
///
/// Cells with zero probability must have zero observations (asserted).
pub fn chi_square_test(observed: &[u64], probs: &[f64]) -> (f64, f64) {
    assert_eq!(observed.len(), probs.len());
    let n: f64 = observed.iter().map(|&o| o as f64).sum();
    let mut stat = 0.0;
    let mut cells = 0usize;
    for (&o, &p) in observed.iter().zip(probs) {
        if p <= 0.0 {
            assert_eq!(o, 0, "observation in a zero-probability cell");
            continue;
        }
        cells += 1;
        let e = n * p;
        stat += (o as f64 - e) * (o as f64 - e) / e;
    }
    let df = (cells - 1) as f64;
    let p_value = 1.0 - reg_lower_gamma(df / 2.0, stat / 2.0);
    (stat, p_value)
}

/// One-sample Kolmogorov–Smirnov statistic against a cdf.
pub fn ks_statistic(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = samples.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs());
        d = d.max(((i as f64 + 1.0) / n - f).abs());
    }
    d
}

/// Asymptotic KS critical value at significance `alpha` for `n` samples.
pub fn ks_critical(alpha: f64, n: usize) -> f64 {
    let c = (-0.5 * (alpha / 2.0).ln()).sqrt();
    c / (n as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_known_values() {
        assert!((gamma(1.0) - 1.0).abs() < 1e-12);
        assert!((gamma(5.0) - 24.0).abs() < 1e-9);
        assert!((gamma(0.5) - std::f64::consts::PI.sqrt()).abs() < 1e-12);
        // Γ(−1/2) = −2√π
        assert!((gamma(-0.5) + 2.0 * std::f64::consts::PI.sqrt()).abs() < 1e-10);
        // Γ(2.5) = 0.75 √π
        assert!((gamma(2.5) - 0.75 * std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn chi_square_reference() {
        // reference values from the rv crate's documented example
        let obs = [28u64, 31, 40, 35];
        let probs = [0.25f64; 4];
        let (stat, p) = chi_square_test(&obs, &probs);
        assert!((stat - 2.417910447761194).abs() < 1e-9);
        assert!((p - 0.4903093069653883).abs() < 1e-9);
    }

    #[test]
    fn incomplete_gamma_edges() {
        assert_eq!(reg_lower_gamma(1.0, 0.0), 0.0);
        // P(1, x) = 1 − e^{−x}
        for x in [0.1, 1.0, 5.0] {
            assert!((reg_lower_gamma(1.0, x) - (1.0 - (-x).exp())).abs() < 1e-12);
        }
    }

    #[test]
    fn ks_on_perfect_grid() {
        let mut xs: Vec<f64> = (0..100).map(|i| (i as f64 + 0.5) / 100.0).collect();
        let d = ks_statistic(&mut xs, |x| x);
        assert!(d <= 0.005 + 1e-12);
    }
}
