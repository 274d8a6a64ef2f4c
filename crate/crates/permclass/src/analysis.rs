//! Numeric singularity analysis: regime classification, the constant pack
//! (κ, τ, ρ, β, λ, γ, ν±, p), limit-density formulas and transfer-theorem
//! coefficient estimates.
//!
//! The central function is `Λ(u) = u²/(1−u) + S(u/(1−u))`: the class series
//! `T_not⊕` solves `T_not⊕ = z + Λ(T_not⊕)`, and everything in the standard
//! regime is read off the unique `τ` with `Λ′(τ) = 1`.

use std::collections::HashMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::perm::Permutation;
use crate::series::{occ_series, rational_to_f64};
use crate::stats::gamma;
use crate::tree::{enumerate_substitution_trees, expanded_tree_count, TreeError, TreeShape};

/// Default absolute tolerance for the κ root.
pub const ROOT_TOL: f64 = 1e-12;
/// Default tolerance for declaring equality in regime classification.
pub const EQ_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("family member {0} is not simple")]
    NotSimple(String),
    #[error("point {0} outside the evaluator domain [0, {1})")]
    OutOfDomain(f64, f64),
    #[error("operation requires the standard regime, got {0:?}")]
    NotStandard(Regime),
    #[error("no sign change found for kappa (regime misclassified?)")]
    NoSignChange,
    #[error("evaluator returned a non-finite value at {0}")]
    EvaluatorFailure(f64),
    #[error("delta = {0} outside (1, 2)")]
    DeltaOutOfRange(f64),
    #[error("tree shape has an internal node with fewer than 2 children")]
    MalformedShape,
    #[error("missing Occ evaluator for simple label {0}")]
    MissingOccEvaluator(String),
    #[error("missing Delta entry for label {0}")]
    MissingDelta(String),
    #[error("Delta entries of size {size} sum to {sum}, above 1")]
    DeltaNotNormalized { size: usize, sum: f64 },
    #[error("constants map has zero total mass")]
    ZeroMass,
    #[error("transfer exponent {0} is a nonnegative integer")]
    IntegerExponent(f64),
    #[error("missing constant {0} in regime report")]
    MissingConstant(&'static str),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Bounds on the part of the `Occ₁₂`/`Occ₂₁` series beyond a truncation
/// order, evaluated at a point `x`:
///
/// * `total` — the exact (or upper-bounded) remainder of
///   `Occ₁₂(x) + Occ₂₁(x)`, i.e. `Σ_{n>N} s_n·C(n,2)·x^{n−2}`;
/// * `occ21_max` — an upper bound on the `Occ₂₁` share of that remainder.
///
/// How the unknown tail splits between the two series is what widens the
/// `p`-interval; the split is constrained by `occ(12,α) + occ(21,α) = C(n,2)`.
#[derive(Clone, Copy, Debug)]
pub struct TailSplit {
    pub total: f64,
    pub occ21_max: f64,
}

/// Numeric evaluator bundle for an infinite family of simple permutations.
pub struct SymbolicFamily {
    /// Radius of convergence of `S` (may be `f64::INFINITY`).
    pub r_s: f64,
    pub s: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    pub s_prime: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    pub s_double_prime: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    /// `Occ₁₂` evaluator (possibly a truncation; see `occ_tail`).
    pub occ12: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    pub occ21: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    /// When `occ12`/`occ21` are truncated sums, the truncation order and a
    /// bound on the remainder; enables interval output for `p`.
    pub occ_tail: Option<OccTailBound>,
}

pub struct OccTailBound {
    pub truncation: usize,
    pub eval: Box<dyn Fn(f64) -> TailSplit + Send + Sync>,
}

/// A family of simple permutations: an explicit finite list, or numeric
/// evaluators for an infinite family.
pub enum FamilySpec {
    Finite(Vec<Permutation>),
    Symbolic(SymbolicFamily),
}

impl FamilySpec {
    pub fn finite(members: Vec<Permutation>) -> Result<Self, AnalysisError> {
        for m in &members {
            if !m.is_simple() {
                return Err(AnalysisError::NotSimple(m.compact()));
            }
        }
        Ok(FamilySpec::Finite(members))
    }

    pub fn empty() -> Self {
        FamilySpec::Finite(Vec::new())
    }

    pub fn r_s(&self) -> f64 {
        match self {
            FamilySpec::Finite(_) => f64::INFINITY,
            FamilySpec::Symbolic(f) => f.r_s,
        }
    }

    pub fn s(&self, x: f64) -> f64 {
        match self {
            FamilySpec::Finite(m) => m.iter().map(|a| x.powi(a.size() as i32)).sum(),
            FamilySpec::Symbolic(f) => (f.s)(x),
        }
    }

    pub fn s_prime(&self, x: f64) -> f64 {
        match self {
            FamilySpec::Finite(m) => m
                .iter()
                .map(|a| a.size() as f64 * x.powi(a.size() as i32 - 1))
                .sum(),
            FamilySpec::Symbolic(f) => (f.s_prime)(x),
        }
    }

    pub fn s_double_prime(&self, x: f64) -> f64 {
        match self {
            FamilySpec::Finite(m) => m
                .iter()
                .map(|a| (a.size() * (a.size() - 1)) as f64 * x.powi(a.size() as i32 - 2))
                .sum(),
            FamilySpec::Symbolic(f) => (f.s_double_prime)(x),
        }
    }

    pub fn occ12(&self, x: f64) -> f64 {
        match self {
            FamilySpec::Finite(m) => finite_occ(m, true, x),
            FamilySpec::Symbolic(f) => (f.occ12)(x),
        }
    }

    pub fn occ21(&self, x: f64) -> f64 {
        match self {
            FamilySpec::Finite(m) => finite_occ(m, false, x),
            FamilySpec::Symbolic(f) => (f.occ21)(x),
        }
    }

    fn occ_tail(&self, x: f64) -> Option<TailSplit> {
        match self {
            FamilySpec::Finite(_) => None,
            FamilySpec::Symbolic(f) => f.occ_tail.as_ref().map(|t| (t.eval)(x)),
        }
    }
}

fn finite_occ(members: &[Permutation], ascents: bool, x: f64) -> f64 {
    let pat: Permutation = if ascents { "12".parse() } else { "21".parse() }.unwrap();
    members
        .iter()
        .map(|a| Permutation::occ_count(&pat, a) as f64 * x.powi(a.size() as i32 - 2))
        .sum()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Standard,
    Critical,
    Degenerate,
    Indeterminate,
}

/// Regime tag plus the constant pack; constants are present in the standard
/// regime (and `p` also in the critical regime when the occurrence
/// evaluators converge at `R_S`).
#[derive(Clone, Debug, PartialEq)]
pub struct RegimeReport {
    pub regime: Regime,
    pub kappa: Option<f64>,
    pub tau: Option<f64>,
    pub rho: Option<f64>,
    pub beta: Option<f64>,
    pub lambda: Option<f64>,
    pub gamma: Option<f64>,
    pub nu_plus: Option<f64>,
    pub nu_minus: Option<f64>,
    pub p: Option<f64>,
    pub p_interval: Option<(f64, f64)>,
}

impl RegimeReport {
    fn bare(regime: Regime) -> Self {
        RegimeReport {
            regime,
            kappa: None,
            tau: None,
            rho: None,
            beta: None,
            lambda: None,
            gamma: None,
            nu_plus: None,
            nu_minus: None,
            p: None,
            p_interval: None,
        }
    }
}

fn fmt15(x: f64) -> String {
    format!("{x:.14e}")
}

#[derive(Serialize, Deserialize)]
struct ReportRepr {
    regime: Regime,
    #[serde(skip_serializing_if = "Option::is_none")]
    kappa: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tau: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rho: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nu_plus: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nu_minus: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_interval: Option<[String; 2]>,
}

impl Serialize for RegimeReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ReportRepr {
            regime: self.regime,
            kappa: self.kappa.map(fmt15),
            tau: self.tau.map(fmt15),
            rho: self.rho.map(fmt15),
            beta: self.beta.map(fmt15),
            lambda: self.lambda.map(fmt15),
            gamma: self.gamma.map(fmt15),
            nu_plus: self.nu_plus.map(fmt15),
            nu_minus: self.nu_minus.map(fmt15),
            p: self.p.map(fmt15),
            p_interval: self.p_interval.map(|(a, b)| [fmt15(a), fmt15(b)]),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RegimeReport {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = ReportRepr::deserialize(deserializer)?;
        fn parse<E: serde::de::Error>(s: Option<String>) -> Result<Option<f64>, E> {
            s.map(|v| v.parse::<f64>().map_err(E::custom)).transpose()
        }
        Ok(RegimeReport {
            regime: repr.regime,
            kappa: parse(repr.kappa)?,
            tau: parse(repr.tau)?,
            rho: parse(repr.rho)?,
            beta: parse(repr.beta)?,
            lambda: parse(repr.lambda)?,
            gamma: parse(repr.gamma)?,
            nu_plus: parse(repr.nu_plus)?,
            nu_minus: parse(repr.nu_minus)?,
            p: parse(repr.p)?,
            p_interval: match repr.p_interval {
                None => None,
                Some([a, b]) => Some((
                    a.parse().map_err(D::Error::custom)?,
                    b.parse().map_err(D::Error::custom)?,
                )),
            },
        })
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Regime::Standard => "standard",
            Regime::Critical => "critical",
            Regime::Degenerate => "degenerate",
            Regime::Indeterminate => "indeterminate",
        };
        write!(f, "{s}")
    }
}

/// Radius of convergence of `Λ`: `R_Λ = R_S/(1+R_S)` (1 when `R_S = ∞`).
pub fn r_lambda(spec: &FamilySpec) -> f64 {
    let r = spec.r_s();
    if r.is_infinite() {
        1.0
    } else {
        r / (1.0 + r)
    }
}

fn check_domain(spec: &FamilySpec, u: f64) -> Result<(), AnalysisError> {
    let rl = r_lambda(spec);
    if !(0.0..1.0).contains(&u) || u >= rl {
        return Err(AnalysisError::OutOfDomain(u, rl));
    }
    Ok(())
}

/// `Λ(u) = u²/(1−u) + S(u/(1−u))`.
pub fn lambda_eval(spec: &FamilySpec, u: f64) -> Result<f64, AnalysisError> {
    check_domain(spec, u)?;
    Ok(u * u / (1.0 - u) + spec.s(u / (1.0 - u)))
}

/// `Λ′(u) = (1 + S′(u/(1−u))) / (1−u)² − 1`.
pub fn lambda_prime(spec: &FamilySpec, u: f64) -> Result<f64, AnalysisError> {
    check_domain(spec, u)?;
    Ok((1.0 + spec.s_prime(u / (1.0 - u))) / ((1.0 - u) * (1.0 - u)) - 1.0)
}

/// `Λ″(u) = S″(v)/(1−u)⁴ + 2(1 + S′(v))/(1−u)³` with `v = u/(1−u)`.
pub fn lambda_double_prime(spec: &FamilySpec, u: f64) -> Result<f64, AnalysisError> {
    check_domain(spec, u)?;
    let v = u / (1.0 - u);
    let w = 1.0 - u;
    Ok(spec.s_double_prime(v) / w.powi(4) + 2.0 * (1.0 + spec.s_prime(v)) / w.powi(3))
}

/// Classifies the regime by the sign of `lim_{x→R_S} S′(x) − 2/(1+R_S)² + 1`.
///
/// `S′` is increasing, so the limit is probed at `R_S(1−2⁻ʲ)`: the first
/// probe above the threshold settles the standard case, a stabilized probe
/// sequence settles the others. A finite family is always standard.
pub fn classify_regime(spec: &FamilySpec) -> Regime {
    classify_regime_with(spec, EQ_TOL)
}

pub fn classify_regime_with(spec: &FamilySpec, eq_tol: f64) -> Regime {
    let r_s = spec.r_s();
    if r_s.is_infinite() {
        return Regime::Standard;
    }
    // R_S > √2 − 1 makes the threshold negative while S' ≥ 0
    if r_s > std::f64::consts::SQRT_2 - 1.0 {
        return Regime::Standard;
    }
    let threshold = 2.0 / ((1.0 + r_s) * (1.0 + r_s)) - 1.0;
    let mut prev = f64::NEG_INFINITY;
    for j in 1..=52u32 {
        let x = r_s * (1.0 - 0.5f64.powi(j as i32));
        let v = spec.s_prime(x);
        if v.is_infinite() && v > 0.0 {
            return Regime::Standard;
        }
        if v.is_nan() {
            return Regime::Indeterminate;
        }
        if v > threshold + eq_tol {
            return Regime::Standard;
        }
        if (v - prev).abs() < eq_tol {
            return if (v - threshold).abs() <= eq_tol {
                Regime::Critical
            } else {
                Regime::Degenerate
            };
        }
        prev = v;
    }
    Regime::Indeterminate
}

/// The unique `κ ∈ (0, R_S)` with `S′(κ) = 2/(1+κ)² − 1`, by bisection to
/// absolute tolerance `tol`. Requires the standard regime.
pub fn solve_kappa(spec: &FamilySpec, tol: f64) -> Result<f64, AnalysisError> {
    let f = |t: f64| spec.s_prime(t) - 2.0 / ((1.0 + t) * (1.0 + t)) + 1.0;
    let r_s = spec.r_s();
    // f(0) = −1; find an upper bracket with f > 0
    let mut hi = None;
    if r_s.is_infinite() {
        let mut t = 1.0;
        for _ in 0..64 {
            let v = f(t);
            if !v.is_finite() {
                return Err(AnalysisError::EvaluatorFailure(t));
            }
            if v > 0.0 {
                hi = Some(t);
                break;
            }
            t *= 2.0;
        }
    } else {
        for j in 1..=60u32 {
            let t = r_s * (1.0 - 0.5f64.powi(j as i32));
            let v = f(t);
            if v.is_nan() {
                return Err(AnalysisError::EvaluatorFailure(t));
            }
            if v > 0.0 {
                hi = Some(t);
                break;
            }
        }
    }
    let Some(mut hi) = hi else {
        return Err(AnalysisError::NoSignChange);
    };
    let mut lo = 0.0f64;
    for _ in 0..200 {
        if hi - lo < tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn p_formula(kappa: f64, occ12: f64, occ21: f64) -> f64 {
    let c = (1.0 + kappa).powi(3);
    (c * occ12 + 1.0) / (c * (occ12 + occ21) + 2.0)
}

/// The full standard-regime constant pack:
/// `τ = κ/(1+κ)`, `ρ = τ − Λ(τ)`, `β = √(2ρ/Λ″(τ))`, `λ = 1/(1−τ)²`,
/// `γ = βλ⁻¹... = β(1−τ)²/(2ρ)`, `ν± = Occ₁₂/₂₁(κ)` and the bias `p`.
pub fn standard_constants(spec: &FamilySpec) -> Result<RegimeReport, AnalysisError> {
    standard_constants_with(spec, ROOT_TOL, EQ_TOL)
}

pub fn standard_constants_with(
    spec: &FamilySpec,
    root_tol: f64,
    eq_tol: f64,
) -> Result<RegimeReport, AnalysisError> {
    let regime = classify_regime_with(spec, eq_tol);
    if regime != Regime::Standard {
        return Err(AnalysisError::NotStandard(regime));
    }
    let kappa = solve_kappa(spec, root_tol)?;
    let tau = kappa / (1.0 + kappa);
    let rho = tau - lambda_eval(spec, tau)?;
    let lpp = lambda_double_prime(spec, tau)?;
    let beta = (2.0 * rho / lpp).sqrt();
    let one_minus_tau_sq = (1.0 - tau) * (1.0 - tau);
    let lambda = 1.0 / one_minus_tau_sq;
    let gamma = beta * one_minus_tau_sq / (2.0 * rho);
    let nu_plus = spec.occ12(kappa);
    let nu_minus = spec.occ21(kappa);
    let p = p_formula(kappa, nu_plus, nu_minus);
    let p_interval = spec.occ_tail(kappa).map(|tail| {
        let t21 = tail.occ21_max.min(tail.total);
        // occ21 share at its maximum pushes p down, at zero pushes p up
        let lo = p_formula(kappa, nu_plus + tail.total - t21, nu_minus + t21);
        let hi = p_formula(kappa, nu_plus + tail.total, nu_minus);
        (lo, hi)
    });
    Ok(RegimeReport {
        regime,
        kappa: Some(kappa),
        tau: Some(tau),
        rho: Some(rho),
        beta: Some(beta),
        lambda: Some(lambda),
        gamma: Some(gamma),
        nu_plus: Some(nu_plus),
        nu_minus: Some(nu_minus),
        p: Some(p),
        p_interval,
    })
}

/// Bias parameter of the critical `δ > 2` branch: the standard `p` formula
/// with `κ` replaced by `R_S`.
pub fn critical_brownian_p(spec: &FamilySpec) -> Option<f64> {
    let r_s = spec.r_s();
    if !r_s.is_finite() {
        return None;
    }
    let o12 = spec.occ12(r_s);
    let o21 = spec.occ21(r_s);
    if o12.is_finite() && o21.is_finite() {
        Some(p_formula(r_s, o12, o21))
    } else {
        None
    }
}

/// Classification plus whatever constants the regime supports.
pub fn report(spec: &FamilySpec) -> RegimeReport {
    report_with(spec, ROOT_TOL, EQ_TOL)
}

pub fn report_with(spec: &FamilySpec, root_tol: f64, eq_tol: f64) -> RegimeReport {
    match classify_regime_with(spec, eq_tol) {
        Regime::Standard => standard_constants_with(spec, root_tol, eq_tol)
            .unwrap_or_else(|_| RegimeReport::bare(Regime::Indeterminate)),
        Regime::Critical => {
            let mut r = RegimeReport::bare(Regime::Critical);
            r.p = critical_brownian_p(spec);
            r
        }
        other => RegimeReport::bare(other),
    }
}

/// Limiting expected density of `π` under the biased Brownian separable
/// permuton: `(N_π / Cat_{k−1}) p^{r₊} (1−p)^{r₋}`; zero for nonseparable `π`.
pub fn limit_density_standard(
    pi: &Permutation,
    report: &RegimeReport,
) -> Result<f64, AnalysisError> {
    let p = report.p.ok_or(AnalysisError::MissingConstant("p"))?;
    let k = pi.size();
    if k == 1 {
        return Ok(1.0);
    }
    let counts = expanded_tree_count(pi);
    if counts.n_separation == num_bigint::BigUint::ZERO {
        return Ok(0.0);
    }
    let n_pi = biguint_to_f64(&counts.n_separation);
    let cat = catalan_f64(k - 1);
    Ok(n_pi / cat * p.powi(counts.r_plus as i32) * (1.0 - p).powi(counts.r_minus as i32))
}

fn biguint_to_f64(x: &num_bigint::BigUint) -> f64 {
    num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::INFINITY)
}

fn catalan_f64(k: usize) -> f64 {
    let mut c = 1.0f64;
    for i in 0..k {
        c = c * (2 * (2 * i + 1)) as f64 / (i + 2) as f64;
    }
    c
}

/// The constant `B_π` in `E[occ(π, σ_n)] = B_π n^{−db(π)/2} (1 + o(1))`.
///
/// Needs `Occ_θ(κ)` for every simple label `θ` of the canonical tree of `π`,
/// so symbolic families support only separable `π` (no labels) unless they
/// are finite.
pub fn b_pi_constant(
    pi: &Permutation,
    report: &RegimeReport,
    spec: &FamilySpec,
) -> Result<f64, AnalysisError> {
    let p = report.p.ok_or(AnalysisError::MissingConstant("p"))?;
    let kappa = report
        .kappa
        .ok_or(AnalysisError::MissingConstant("kappa"))?;
    let rho = report.rho.ok_or(AnalysisError::MissingConstant("rho"))?;
    let beta = report.beta.ok_or(AnalysisError::MissingConstant("beta"))?;
    let tau = report.tau.ok_or(AnalysisError::MissingConstant("tau"))?;
    let k = pi.size();
    let counts = expanded_tree_count(pi);
    let db: usize = counts.simple_labels.iter().map(|t| t.size() - 2).sum();
    let mut product = 1.0f64;
    for theta in &counts.simple_labels {
        let occ_at_kappa = match spec {
            FamilySpec::Finite(members) => {
                let poly = occ_series(
                    theta,
                    members,
                    members.iter().map(|m| m.size()).max().unwrap_or(0),
                );
                poly.coeffs()
                    .iter()
                    .enumerate()
                    .map(|(e, c)| rational_to_f64(c) * kappa.powi(e as i32))
                    .sum::<f64>()
            }
            FamilySpec::Symbolic(_) => match theta.size() {
                2 if theta.is_increasing() => spec.occ12(kappa),
                2 => spec.occ21(kappa),
                _ => return Err(AnalysisError::MissingOccEvaluator(theta.compact())),
            },
        };
        let scale = beta / ((1.0 - tau) * (1.0 - tau));
        product *= scale.powi(theta.size() as i32) / rho * occ_at_kappa;
    }
    let kfact: f64 = (1..=k).map(|i| i as f64).product();
    let prefactor = kfact * std::f64::consts::PI.sqrt()
        / (2f64.powi((2 * k - 2 - db) as i32) * gamma(k as f64 - (db as f64 + 1.0) / 2.0));
    let n_tilde = biguint_to_f64(&counts.n_tilde);
    Ok(n_tilde
        * prefactor
        * p.powi(counts.r_plus as i32)
        * (1.0 - p).powi(counts.r_minus as i32)
        * product)
}

/// `ν_{δ,k}(t₀)`: probability of a plane tree shape with `k` leaves under
/// the δ-stable induced-subtree law.
pub fn nu_stable(shape: &TreeShape, delta: f64) -> Result<f64, AnalysisError> {
    if !(1.0 < delta && delta < 2.0) {
        return Err(AnalysisError::DeltaOutOfRange(delta));
    }
    let k = shape.leaf_count();
    let mut acc = (1..=k).map(|i| i as f64).product::<f64>();
    for j in 1..k {
        acc /= j as f64 * delta - 1.0;
    }
    for d in shape.internal_degrees() {
        if d < 2 {
            return Err(AnalysisError::MalformedShape);
        }
        let mut factor = delta - 1.0;
        for l in 2..d {
            factor *= l as f64 - delta;
        }
        let dfact: f64 = (1..=d).map(|i| i as f64).product();
        acc *= factor / dfact;
    }
    Ok(acc)
}

/// Stable-regime limit `Σ_{t₀: perm(t₀)=π} ν_{δ,k}(t₀) ∏_v Δ_{θ_v}`.
///
/// `deltas` maps node labels (as permutations) to their limiting densities
/// `Δ_θ = E[occ(θ, μ_S)]`; for each label size the provided entries may not
/// exceed total mass 1.
pub fn limit_density_stable(
    pi: &Permutation,
    delta: f64,
    deltas: &HashMap<Permutation, f64>,
) -> Result<f64, AnalysisError> {
    if !(1.0 < delta && delta < 2.0) {
        return Err(AnalysisError::DeltaOutOfRange(delta));
    }
    let mut by_size: HashMap<usize, f64> = HashMap::new();
    for (theta, &v) in deltas {
        *by_size.entry(theta.size()).or_insert(0.0) += v;
    }
    for (&size, &sum) in &by_size {
        if sum > 1.0 + 1e-9 {
            return Err(AnalysisError::DeltaNotNormalized { size, sum });
        }
    }
    let mut total = 0.0;
    for t0 in enumerate_substitution_trees(pi)? {
        let mut term = nu_stable(&t0.shape(), delta)?;
        for label in t0.internal_labels() {
            let d = deltas
                .get(&label)
                .ok_or_else(|| AnalysisError::MissingDelta(label.compact()))?;
            term *= d;
        }
        total += term;
    }
    Ok(total)
}

/// Degenerate-regime limit: normalizes the user-supplied `(CS)` constants
/// over all patterns of size `k`. Missing entries count as zero.
pub fn degenerate_limit(
    k: usize,
    constants: &HashMap<Permutation, f64>,
) -> Result<std::collections::BTreeMap<Permutation, f64>, AnalysisError> {
    let perms = crate::perm::all_permutations(k);
    let total: f64 = perms
        .iter()
        .map(|pi| constants.get(pi).copied().unwrap_or(0.0))
        .sum();
    if total <= 0.0 {
        return Err(AnalysisError::ZeroMass);
    }
    Ok(perms
        .into_iter()
        .map(|pi| {
            let c = constants.get(&pi).copied().unwrap_or(0.0);
            (pi, c / total)
        })
        .collect())
}

/// Transfer-theorem coefficient estimate
/// `[zⁿ]A ≈ C·ρ⁻ⁿ·n^{−(δ+1)}/Γ(−δ)` for `A(z) = (C+o(1))(1−z/ρ)^δ`.
///
/// May overflow to ±∞ for large `n`; use [`transfer_estimate_ln`] then.
pub fn transfer_estimate(c: f64, rho: f64, delta: f64, n: u64) -> Result<f64, AnalysisError> {
    let (sign, ln) = transfer_estimate_ln(c, rho, delta, n)?;
    Ok(sign * ln.exp())
}

/// Same estimate as `(sign, ln|value|)`, safe for coefficients far beyond
/// f64 range.
pub fn transfer_estimate_ln(
    c: f64,
    rho: f64,
    delta: f64,
    n: u64,
) -> Result<(f64, f64), AnalysisError> {
    if delta >= 0.0 && delta.fract() == 0.0 {
        return Err(AnalysisError::IntegerExponent(delta));
    }
    assert!(rho > 0.0 && n >= 1);
    let g = gamma(-delta);
    let sign = (c / g).signum();
    let ln = (c / g).abs().ln() - n as f64 * rho.ln() - (delta + 1.0) * (n as f64).ln();
    Ok((sign, ln))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn lambda_closed_forms() {
        let spec = FamilySpec::empty();
        assert!((lambda_eval(&spec, 0.5).unwrap() - 0.5).abs() < 1e-15);
        assert!(lambda_prime(&spec, 0.0).unwrap().abs() < 1e-15);
        let tau = 1.0 - 1.0 / std::f64::consts::SQRT_2;
        assert!((lambda_prime(&spec, tau).unwrap() - 1.0).abs() < 1e-12);
        assert!(lambda_eval(&spec, 1.5).is_err());
    }

    #[test]
    fn lambda_prime_increases_from_zero() {
        let spec = FamilySpec::finite(vec![p("2413"), p("3142")]).unwrap();
        let mut prev = -1.0;
        for i in 0..20 {
            let u = i as f64 * 0.04;
            let v = lambda_prime(&spec, u).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn empty_family_constants() {
        let spec = FamilySpec::empty();
        let rep = standard_constants(&spec).unwrap();
        assert_eq!(rep.regime, Regime::Standard);
        assert!((rep.kappa.unwrap() - (std::f64::consts::SQRT_2 - 1.0)).abs() < 1e-10);
        assert!((rep.rho.unwrap() - (3.0 - 2.0 * std::f64::consts::SQRT_2)).abs() < 1e-10);
        assert!((rep.tau.unwrap() - (1.0 - 1.0 / std::f64::consts::SQRT_2)).abs() < 1e-10);
        assert!((rep.p.unwrap() - 0.5).abs() < 1e-12);
        assert!((rep.lambda.unwrap() - 2.0).abs() < 1e-9);
        // residual of the defining equation at kappa
        let k = rep.kappa.unwrap();
        assert!((spec.s_prime(k) - 2.0 / (1.0 + k) / (1.0 + k) + 1.0).abs() < 1e-9);
    }

    #[test]
    fn gamma_table_rank_one() {
        // the nine marked-series constants form γ·λ^{a+b}
        let spec = FamilySpec::finite(vec![p("2413")]).unwrap();
        let rep = standard_constants(&spec).unwrap();
        let (g, l) = (rep.gamma.unwrap(), rep.lambda.unwrap());
        let table = [[g * l * l, g * l, g * l], [g * l, g, g], [g * l, g, g]];
        for (a, row) in table.iter().enumerate() {
            for (b, &val) in row.iter().enumerate() {
                let expect = g * l.powi((a == 0) as i32 + (b == 0) as i32);
                assert!((val - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn finite_families_are_standard_with_symmetric_p() {
        for fam in [
            vec![],
            vec![p("2413")],
            vec![p("3142")],
            vec![p("2413"), p("3142"), p("24153"), p("42513")],
        ] {
            let spec = FamilySpec::finite(fam).unwrap();
            assert_eq!(classify_regime(&spec), Regime::Standard);
            let rep = standard_constants(&spec).unwrap();
            assert!((rep.p.unwrap() - 0.5).abs() < 1e-12);
            // 0 < rho < tau and Λ'(τ) = 1
            assert!(rep.rho.unwrap() > 0.0 && rep.rho.unwrap() < rep.tau.unwrap());
            assert!((lambda_prime(&spec, rep.tau.unwrap()).unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn degenerate_and_critical_classification() {
        // synthetic spec with S'(R_S) = 0.1 < 2/(1+R_S)² − 1 = 0.5
        let r_s = (2.0f64 / 1.5).sqrt() - 1.0; // threshold = 0.5
        let degenerate = FamilySpec::Symbolic(SymbolicFamily {
            r_s,
            s: Box::new(|_| 0.0),
            s_prime: Box::new(|x| 0.1 * (x / 0.15).min(1.0)),
            s_double_prime: Box::new(|_| 0.0),
            occ12: Box::new(|_| 0.0),
            occ21: Box::new(|_| 0.0),
            occ_tail: None,
        });
        assert_eq!(classify_regime(&degenerate), Regime::Degenerate);
        let threshold = 2.0 / ((1.0 + r_s) * (1.0 + r_s)) - 1.0;
        let critical = FamilySpec::Symbolic(SymbolicFamily {
            r_s,
            s: Box::new(|_| 0.0),
            s_prime: Box::new(move |x| threshold * (x / 0.15).min(1.0)),
            s_double_prime: Box::new(|_| 0.0),
            occ12: Box::new(|_| 0.3),
            occ21: Box::new(|_| 0.1),
            occ_tail: None,
        });
        assert_eq!(classify_regime(&critical), Regime::Critical);
        let rep = report(&critical);
        assert!(rep.p.is_some());
    }

    #[test]
    fn p_swaps_with_occ_evaluators() {
        // swapping occ12 ↔ occ21 maps p to 1 − p
        fn osc_like(swap: bool) -> FamilySpec {
            let o12 = |z: f64| 2.0 * z * z * (3.0 - 3.0 * z + z * z) / (1.0 - z).powi(3);
            let o21 = |z: f64| 2.0 * z * z * (3.0 - 2.0 * z) / (1.0 - z).powi(2);
            FamilySpec::Symbolic(SymbolicFamily {
                r_s: 1.0,
                s: Box::new(|z| 2.0 * z.powi(4) / (1.0 - z)),
                s_prime: Box::new(|z| (8.0 * z.powi(3) - 6.0 * z.powi(4)) / (1.0 - z).powi(2)),
                s_double_prime: Box::new(|z| {
                    (24.0 * z.powi(2) - 32.0 * z.powi(3) + 12.0 * z.powi(4)) / (1.0 - z).powi(3)
                }),
                occ12: Box::new(if swap { o21 } else { o12 }),
                occ21: Box::new(if swap { o12 } else { o21 }),
                occ_tail: None,
            })
        }
        let p = standard_constants(&osc_like(false)).unwrap().p.unwrap();
        let p_swapped = standard_constants(&osc_like(true)).unwrap().p.unwrap();
        assert!((p + p_swapped - 1.0).abs() < 1e-12);
    }

    #[test]
    fn limit_density_standard_cases() {
        let rep = standard_constants(&FamilySpec::empty()).unwrap();
        assert!((limit_density_standard(&p("12"), &rep).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(limit_density_standard(&p("2413"), &rep).unwrap(), 0.0);
        assert!((limit_density_standard(&p("123"), &rep).unwrap() - 0.25).abs() < 1e-12);
        // densities over S_k sum to 1
        for k in 2..=4usize {
            let total: f64 = crate::perm::all_permutations(k)
                .iter()
                .map(|pi| limit_density_standard(pi, &rep).unwrap())
                .sum();
            assert!((total - 1.0).abs() < 1e-9, "k={k}");
        }
    }

    #[test]
    fn b_pi_simple_cases() {
        let spec = FamilySpec::finite(vec![p("2413"), p("3142")]).unwrap();
        let rep = standard_constants(&spec).unwrap();
        let b12 = b_pi_constant(&p("12"), &rep, &spec).unwrap();
        assert!((b12 - rep.p.unwrap()).abs() < 1e-12);
        let b21 = b_pi_constant(&p("21"), &rep, &spec).unwrap();
        assert!((b21 - (1.0 - rep.p.unwrap())).abs() < 1e-12);
        // value checked against an independent computation of the formula
        let b2413 = b_pi_constant(&p("2413"), &rep, &spec).unwrap();
        assert!((b2413 - 0.076575685586).abs() < 1e-9, "got {b2413}");
    }

    #[test]
    fn nu_stable_values() {
        use crate::tree::enumerate_shapes;
        let shapes3 = enumerate_shapes(3);
        let flat = shapes3
            .iter()
            .find(|s| s.internal_degrees() == vec![3])
            .unwrap();
        assert!((nu_stable(flat, 1.5).unwrap() - 0.25).abs() < 1e-12);
        let cat = shapes3
            .iter()
            .find(|s| s.internal_degrees() == vec![2, 2])
            .unwrap();
        assert!((nu_stable(cat, 1.5).unwrap() - 0.375).abs() < 1e-12);
        for delta in [1.1, 1.5, 1.9] {
            for k in 2..=6usize {
                let total: f64 = enumerate_shapes(k)
                    .iter()
                    .map(|s| nu_stable(s, delta).unwrap())
                    .sum();
                assert!((total - 1.0).abs() < 1e-9, "k={k} delta={delta}");
            }
        }
        assert!(nu_stable(&TreeShape::Leaf, 2.5).is_err());
    }

    #[test]
    fn stable_density_example() {
        let mut deltas = HashMap::new();
        deltas.insert(p("12"), 0.5);
        deltas.insert(p("123"), 0.1);
        let v = limit_density_stable(&p("123"), 1.5, &deltas).unwrap();
        assert!((v - 0.2125).abs() < 1e-12);
        deltas.insert(p("21"), 0.7);
        assert!(matches!(
            limit_density_stable(&p("123"), 1.5, &deltas),
            Err(AnalysisError::DeltaNotNormalized { size: 2, .. })
        ));
    }

    #[test]
    fn stable_density_normalization() {
        // full Δ per size => densities over S_k sum to 1
        let mut deltas = HashMap::new();
        for k in 2..=4usize {
            let perms = crate::perm::all_permutations(k);
            let m = perms.len() as f64;
            for (i, theta) in perms.into_iter().enumerate() {
                // any normalized vector works; make it nonuniform
                let w = 2.0 * (i + 1) as f64 / (m * (m + 1.0));
                deltas.insert(theta, w);
            }
        }
        for delta in [1.2, 1.7] {
            for k in 2..=4usize {
                let total: f64 = crate::perm::all_permutations(k)
                    .iter()
                    .map(|pi| limit_density_stable(pi, delta, &deltas).unwrap())
                    .sum();
                assert!((total - 1.0).abs() < 1e-9, "k={k} delta={delta}");
            }
        }
    }

    #[test]
    fn degenerate_limit_cases() {
        let mut c = HashMap::new();
        c.insert(p("12"), 3.0);
        c.insert(p("21"), 1.0);
        let out = degenerate_limit(2, &c).unwrap();
        assert!((out[&p("12")] - 0.75).abs() < 1e-12);
        assert!((out[&p("21")] - 0.25).abs() < 1e-12);
        assert!(degenerate_limit(3, &HashMap::new()).is_err());
    }

    #[test]
    fn transfer_estimate_forms() {
        let v = transfer_estimate(2.0, 0.5, 0.5, 1).unwrap();
        // C ρ⁻¹ / Γ(−1/2), Γ(−1/2) = −2√π
        let expect = 2.0 / 0.5 / (-2.0 * std::f64::consts::PI.sqrt());
        assert!((v - expect).abs() < 1e-12);
        assert!(transfer_estimate(1.0, 0.5, 2.0, 10).is_err());
        // ratio between consecutive n tends to 1/ρ
        let (_, a) = transfer_estimate_ln(1.0, 0.25, 0.5, 1000).unwrap();
        let (_, b) = transfer_estimate_ln(1.0, 0.25, 0.5, 1001).unwrap();
        assert!(((b - a) - (1.0f64 / 0.25).ln()).abs() < 0.01);
    }

    #[test]
    fn report_json_round_trip() {
        let rep = standard_constants(&FamilySpec::empty()).unwrap();
        let json = serde_json::to_string(&rep).unwrap();
        assert!(json.contains("\"regime\":\"standard\""));
        let back: RegimeReport = serde_json::from_str(&json).unwrap();
        assert!((back.kappa.unwrap() - rep.kappa.unwrap()).abs() < 1e-13);
        assert_eq!(back.regime, rep.regime);
    }
}
