//! Exact truncated power series over rationals, the generating-function
//! system for `⟨S⟩`, and exact expected pattern densities at finite size.
//!
//! Everything here is exact: coefficients are arbitrary-precision rationals
//! (integers in practice for all combinatorial series), so oracle tests are
//! equalities rather than tolerance checks.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{PermError, Permutation};
use crate::tree::{
    enumerate_substitution_trees, preorder_nodes, DecoratedTree, NodeLabel, SubstitutionTree,
    TreeError,
};

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("division by a series with zero constant term")]
    DivisionByNonUnit,
    #[error("composition requires g(0) = 0")]
    CompositionConstantTerm,
    #[error("family member {0} is not simple")]
    NotSimple(String),
    #[error("series order {order} too small for coefficient {wanted}")]
    OrderTooSmall { order: usize, wanted: usize },
    #[error("cannot parse series: {0}")]
    Parse(String),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Perm(#[from] PermError),
}

fn rat(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

/// A dense power series truncated at a fixed order: coefficients of
/// `z^0 … z^N`. Arithmetic propagates the minimum order of the operands.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedSeries {
    coeffs: Vec<BigRational>,
}

impl TruncatedSeries {
    /// Series from explicit coefficients; the order is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series carries at least the constant coefficient"
        );
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![BigRational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigRational::one();
        s
    }

    /// `c · z^k` truncated at `order`.
    pub fn monomial(c: BigRational, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> Result<&BigRational, SeriesError> {
        self.coeffs.get(n).ok_or(SeriesError::OrderTooSmall {
            order: self.order(),
            wanted: n,
        })
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(order + 1);
        coeffs.resize(order + 1, BigRational::zero());
        Self { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self {
            coeffs: (0..=n)
                .map(|i| &self.coeffs[i] + &other.coeffs[i])
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self {
            coeffs: (0..=n)
                .map(|i| &self.coeffs[i] - &other.coeffs[i])
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        // combinatorial series are integer-valued; skipping the rational
        // normalization on every product term is a large constant-factor win
        if let (Some(a), Some(b)) = (integer_view(self, n), integer_view(other, n)) {
            let mut out = vec![BigInt::zero(); n + 1];
            for (i, ai) in a.iter().enumerate() {
                if ai.is_zero() {
                    continue;
                }
                for (j, bj) in b.iter().take(n + 1 - i).enumerate() {
                    if !bj.is_zero() {
                        out[i + j] += *ai * *bj;
                    }
                }
            }
            return Self {
                coeffs: out.into_iter().map(BigRational::from_integer).collect(),
            };
        }
        let mut out = vec![BigRational::zero(); n + 1];
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=n - i {
                if !other.coeffs[j].is_zero() {
                    out[i + j] += &self.coeffs[i] * &other.coeffs[j];
                }
            }
        }
        Self { coeffs: out }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Multiplication by `z^k` (coefficients above the order are dropped).
    pub fn shift(&self, k: usize) -> Self {
        let n = self.order();
        let mut out = vec![BigRational::zero(); n + 1];
        for i in 0..=n {
            if i + k <= n {
                out[i + k] = self.coeffs[i].clone();
            }
        }
        Self { coeffs: out }
    }

    pub fn pow(&self, e: usize) -> Self {
        if e == 0 {
            return Self::one(self.order());
        }
        let mut acc = self.clone();
        for _ in 1..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Termwise derivative; the result is exact to order `N − 1`.
    pub fn derivative(&self) -> Self {
        let n = self.order();
        if n == 0 {
            return Self::zero(0);
        }
        Self {
            coeffs: (1..=n).map(|i| &self.coeffs[i] * rat(i as i64)).collect(),
        }
    }

    /// `1 / self`; the constant term must be nonzero.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        if self.coeffs[0].is_zero() {
            return Err(SeriesError::DivisionByNonUnit);
        }
        let n = self.order();
        if let Some(a) = integer_view(self, n) {
            // unit constant term keeps the inverse integral
            let unit = a[0].magnitude() == &num_bigint::BigUint::from(1u32);
            if unit {
                let sign = a[0].clone();
                let mut out = vec![BigInt::zero(); n + 1];
                out[0] = sign.clone();
                for k in 1..=n {
                    let mut s = BigInt::zero();
                    for i in 1..=k {
                        if !a[i].is_zero() && !out[k - i].is_zero() {
                            s += a[i] * &out[k - i];
                        }
                    }
                    out[k] = -s * &sign;
                }
                return Ok(Self {
                    coeffs: out.into_iter().map(BigRational::from_integer).collect(),
                });
            }
        }
        let mut out = vec![BigRational::zero(); n + 1];
        let c0 = self.coeffs[0].clone();
        out[0] = BigRational::one() / &c0;
        for k in 1..=n {
            let mut s = BigRational::zero();
            for i in 1..=k {
                if !self.coeffs[i].is_zero() {
                    s += &self.coeffs[i] * &out[k - i];
                }
            }
            out[k] = -s / &c0;
        }
        Ok(Self { coeffs: out })
    }

    /// `self / other`; the divisor must have a nonzero constant term.
    pub fn divide(&self, other: &Self) -> Result<Self, SeriesError> {
        Ok(self.mul(&other.inverse()?))
    }

    /// `1 / (1 − f)` for `f(0) = 0`: the sequence (geometric-sum) operator.
    pub fn reciprocal_one_minus(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::CompositionConstantTerm);
        }
        let one = Self::one(self.order());
        one.sub(self).inverse()
    }

    /// `f ∘ g` with `g(0) = 0`, by Horner evaluation from the true degree
    /// of `f` (degrees above the truncation order cannot contribute).
    pub fn compose(&self, g: &Self) -> Result<Self, SeriesError> {
        if !g.coeffs[0].is_zero() {
            return Err(SeriesError::CompositionConstantTerm);
        }
        let n = self.order().min(g.order());
        let g = g.truncate(n);
        let deg = (0..=self.order().min(n))
            .rev()
            .find(|&i| !self.coeffs[i].is_zero());
        let Some(deg) = deg else {
            return Ok(TruncatedSeries::zero(n));
        };
        let mut acc = TruncatedSeries::monomial(self.coeffs[deg].clone(), 0, n);
        for i in (0..deg).rev() {
            acc = acc.mul(&g);
            acc.coeffs[0] += &self.coeffs[i];
        }
        Ok(acc)
    }

    /// Evaluates the truncated polynomial at a float point.
    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + rational_to_f64(c);
        }
        acc
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(SeriesRepr {
            order: self.order(),
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        })
        .expect("series serialization cannot fail")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, SeriesError> {
        let repr: SeriesRepr =
            serde_json::from_value(v.clone()).map_err(|e| SeriesError::Parse(e.to_string()))?;
        if repr.coeffs.len() != repr.order + 1 {
            return Err(SeriesError::Parse(
                "coefficient count does not match order".into(),
            ));
        }
        let coeffs: Result<Vec<BigRational>, _> = repr
            .coeffs
            .iter()
            .map(|s| {
                s.parse::<BigRational>()
                    .map_err(|e| SeriesError::Parse(e.to_string()))
            })
            .collect();
        Ok(Self { coeffs: coeffs? })
    }
}

/// Borrowed numerators when every coefficient up to `n` is an integer.
fn integer_view(s: &TruncatedSeries, n: usize) -> Option<Vec<&BigInt>> {
    s.coeffs[..=n]
        .iter()
        .map(|c| c.is_integer().then(|| c.numer()))
        .collect()
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    order: usize,
    coeffs: Vec<String>,
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*z")?,
                _ => write!(f, "{c}*z^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(z^{})", self.order() + 1)
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    // num's to_f64 handles magnitudes beyond f64 by saturating to infinity,
    // which is fine for downstream float work
    num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::INFINITY)
}

/// Natural log of a positive rational of arbitrary magnitude.
pub fn rational_ln(r: &BigRational) -> f64 {
    assert!(r.is_positive(), "ln of a nonpositive rational");
    fn ln_big(x: &BigInt) -> f64 {
        let bits = x.bits();
        if bits <= 52 {
            return num_traits::ToPrimitive::to_f64(x).unwrap().ln();
        }
        let shift = bits - 52;
        let top: BigInt = x >> shift;
        num_traits::ToPrimitive::to_f64(&top).unwrap().ln() + shift as f64 * std::f64::consts::LN_2
    }
    ln_big(r.numer()) - ln_big(r.denom())
}

/// `S(z) = Σ_{α∈S} z^{|α|}` as a polynomial truncated at `order`.
pub fn s_polynomial(family: &[Permutation], order: usize) -> Result<TruncatedSeries, SeriesError> {
    let mut s = TruncatedSeries::zero(order);
    for alpha in family {
        if !alpha.is_simple() {
            return Err(SeriesError::NotSimple(alpha.compact()));
        }
        if alpha.size() <= order {
            s.coeffs[alpha.size()] += BigRational::one();
        }
    }
    Ok(s)
}

/// Solves `T_not⊕ = z + T_not⊕²/(1−T_not⊕) + S(T_not⊕/(1−T_not⊕))`
/// coefficient by coefficient (coefficient `n` of the right side only
/// involves earlier coefficients).
///
/// `s` must have zero coefficients below `z⁴` (simple permutations have size
/// at least 4).
pub fn solve_t_notplus(s: &TruncatedSeries, order: usize) -> TruncatedSeries {
    for i in 0..s.order().min(3) {
        assert!(
            s.coeffs[i].is_zero(),
            "S must have no coefficients below z^4"
        );
    }
    if let Some(ints) = integer_view(s, s.order()) {
        let ints: Vec<BigInt> = ints.into_iter().cloned().collect();
        return solve_t_notplus_impl(&ints, order, BigInt::from(1));
    }
    solve_t_notplus_impl(s.coeffs(), order, BigRational::one())
}

/// The coefficient recurrence, generic over the (integer or rational)
/// coefficient ring. With `y = T_not⊕` and `v = y/(1−y) = T`, the defining
/// equation reads `y = z + y·v + S_poly(v)` together with `v = y + v·y`,
/// and coefficient `n` of each right side involves only earlier ones.
fn solve_t_notplus_impl<C>(s: &[C], order: usize, one: C) -> TruncatedSeries
where
    C: Clone + Zero + std::ops::AddAssign + for<'a> std::ops::Mul<&'a C, Output = C>,
    BigRational: From<C>,
{
    let deg = (0..s.len()).rev().find(|&i| !s[i].is_zero()).unwrap_or(0);
    let n_max = order;
    let mut y = vec![C::zero(); n_max + 1];
    let mut v = vec![C::zero(); n_max + 1];
    let mut pows: Vec<Vec<C>> = Vec::new(); // v^m for m = 2..=deg
    if deg >= 2 {
        pows = vec![vec![C::zero(); n_max + 1]; deg - 1];
    }
    for n in 1..=n_max {
        for m in 2..=deg {
            let mut acc = C::zero();
            for i in 1..n {
                let prev = if m == 2 {
                    &v[n - i]
                } else {
                    &pows[m - 3][n - i]
                };
                if !v[i].is_zero() && !prev.is_zero() {
                    acc += v[i].clone() * prev;
                }
            }
            pows[m - 2][n] = acc;
        }
        let mut acc = if n == 1 { one.clone() } else { C::zero() };
        for i in 1..n {
            if !y[i].is_zero() && !v[n - i].is_zero() {
                acc += y[i].clone() * &v[n - i];
            }
        }
        for m in 4..=deg {
            if !s[m].is_zero() && !pows[m - 2][n].is_zero() {
                acc += s[m].clone() * &pows[m - 2][n];
            }
        }
        y[n] = acc;
        let mut acc = y[n].clone();
        for i in 1..n {
            if !v[i].is_zero() && !y[n - i].is_zero() {
                acc += v[i].clone() * &y[n - i];
            }
        }
        v[n] = acc;
    }
    TruncatedSeries {
        coeffs: y.into_iter().map(BigRational::from).collect(),
    }
}

/// Same series by Newton iteration on `F(Y) = Y − z − Λ(Y)`; used as a
/// cross-check of the coefficient recurrence.
pub fn solve_t_notplus_newton(
    s: &TruncatedSeries,
    order: usize,
) -> Result<TruncatedSeries, SeriesError> {
    let z = TruncatedSeries::monomial(BigRational::one(), 1, order);
    let s = s.truncate(order);
    let s_prime = {
        // polynomial derivative at full order (termwise, no truncation loss)
        let mut coeffs = vec![BigRational::zero(); order + 1];
        for i in 1..=s.order() {
            coeffs[i - 1] = &s.coeffs[i] * rat(i as i64);
        }
        TruncatedSeries { coeffs }
    };
    let mut y = z.clone();
    for _ in 0..(usize::BITS - order.leading_zeros() + 2) {
        let geom = y.reciprocal_one_minus()?;
        let v = y.mul(&geom);
        let lambda = y.mul(&v).add(&s.compose(&v)?);
        let f = y.sub(&z).sub(&lambda);
        if f.is_zero() {
            break;
        }
        // Λ'(y) = (1 + S'(v)) / (1−y)² − 1
        let lambda_prime = {
            let one = TruncatedSeries::one(order);
            one.add(&s_prime.compose(&v)?)
                .mul(&geom)
                .mul(&geom)
                .sub(&one)
        };
        let denom = TruncatedSeries::one(order).sub(&lambda_prime);
        y = y.sub(&f.divide(&denom)?);
    }
    Ok(y)
}

/// `T = T_not⊕ / (1 − T_not⊕)`; `[zⁿ]T = |⟨S⟩_n|`.
pub fn t_from_t_notplus(t_np: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
    Ok(t_np.mul(&t_np.reciprocal_one_minus()?))
}

/// `Occ_θ(z) = Σ_{α∈S} occ(θ, α) z^{|α|−|θ|}` as a polynomial.
pub fn occ_series(theta: &Permutation, family: &[Permutation], order: usize) -> TruncatedSeries {
    let mut out = TruncatedSeries::zero(order);
    for alpha in family {
        if alpha.size() < theta.size() {
            continue;
        }
        let c = Permutation::occ_count(theta, alpha);
        let e = alpha.size() - theta.size();
        if c > 0 && e <= order {
            out.coeffs[e] += BigRational::from(BigInt::from(c));
        }
    }
    out
}

/// The nine marked-tree series of the system plus `W`; all count trees by
/// the number of unmarked leaves.
#[derive(Clone, Debug)]
pub struct MarkedSeriesPack {
    pub t_prime: TruncatedSeries,
    pub t_plus: TruncatedSeries,
    pub t_minus: TruncatedSeries,
    pub t_np_prime: TruncatedSeries,
    pub t_np_plus: TruncatedSeries,
    pub t_np_minus: TruncatedSeries,
    pub t_nm_prime: TruncatedSeries,
    pub t_nm_plus: TruncatedSeries,
    pub t_nm_minus: TruncatedSeries,
    pub w: TruncatedSeries,
}

/// Solves the marked-tree system:
/// `T⁺ = 1/(1 − W·S′(T) − W − S′(T))`, `T_not⊖⁺ = T⁺/(1+W)`,
/// `T_not⊕⁺ = (W·S′(T) + W + S′(T))·T_not⊖⁺`, with
/// `W = (1/(1−T_not⊕))² − 1`, and the minus variants by symmetry.
///
/// `t_np` and `t` must be given to order `N`; the pack is exact to order
/// `N − 1` (the derivative series lose one order).
pub fn marked_series(
    t_np: &TruncatedSeries,
    t: &TruncatedSeries,
    s: &TruncatedSeries,
) -> Result<MarkedSeriesPack, SeriesError> {
    let order = t_np.order().min(t.order());
    assert!(order >= 1);
    let out_order = order - 1;
    let t_prime = t.derivative().truncate(out_order);
    let t_np_prime = t_np.derivative().truncate(out_order);
    let t_np = t_np.truncate(out_order);
    let t = t.truncate(out_order);

    let geom = t_np.reciprocal_one_minus()?;
    let one_plus_w = geom.mul(&geom);
    let mut w = one_plus_w.clone();
    w.coeffs[0] -= BigRational::one();

    let s_prime_poly = {
        let mut coeffs = vec![BigRational::zero(); out_order + 1];
        for i in 1..=s.order().min(out_order + 1) {
            if i - 1 <= out_order {
                coeffs[i - 1] = &s.coeffs[i] * rat(i as i64);
            }
        }
        TruncatedSeries { coeffs }
    };
    let sp_t = s_prime_poly.compose(&t)?;
    let mix = w.mul(&sp_t).add(&w).add(&sp_t); // W·S′(T) + W + S′(T)
    let denom = TruncatedSeries::one(out_order).sub(&mix);
    let t_plus = denom.inverse()?;
    let t_nm_plus = t_plus.divide(&one_plus_w)?;
    let t_np_plus = mix.mul(&t_nm_plus);

    Ok(MarkedSeriesPack {
        t_minus: t_plus.clone(),
        t_np_minus: t_nm_plus.clone(),
        t_nm_minus: t_np_plus.clone(),
        t_nm_prime: t_np_prime.clone(),
        t_prime,
        t_plus,
        t_np_prime,
        t_np_plus,
        t_nm_plus,
        w,
    })
}

/// All generating series of a class `⟨S⟩`, exact to `order`.
pub struct ClassSeries {
    order: usize,
    family: Vec<Permutation>,
    pub s: TruncatedSeries,
    pub t_notplus: TruncatedSeries,
    pub t: TruncatedSeries,
    pub pack: MarkedSeriesPack,
    geom_np: TruncatedSeries,
}

impl ClassSeries {
    pub fn new(family: &[Permutation], order: usize) -> Result<Self, SeriesError> {
        let s = s_polynomial(family, order + 1)?;
        let t_np_full = solve_t_notplus(&s, order + 1);
        let t_full = t_from_t_notplus(&t_np_full)?;
        let pack = marked_series(&t_np_full, &t_full, &s)?;
        let t_notplus = t_np_full.truncate(order);
        let geom_np = t_notplus.reciprocal_one_minus()?;
        Ok(Self {
            order,
            family: family.to_vec(),
            s: s.truncate(order),
            t: t_full.truncate(order),
            t_notplus,
            pack,
            geom_np,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn family(&self) -> &[Permutation] {
        &self.family
    }

    /// Number of class members of size `n`, i.e. `[zⁿ]T`.
    pub fn count(&self, n: usize) -> Result<&BigRational, SeriesError> {
        self.t.coeff(n)
    }

    /// `T_{t₀,V_s}`: series of canonical trees with marked leaves inducing
    /// the decorated tree `(t₀, V_s)`, counted by total leaves.
    pub fn decorated_tree_series(
        &self,
        dec: &DecoratedTree,
    ) -> Result<TruncatedSeries, SeriesError> {
        let order = self.order;
        let tree = dec.tree();
        let v_s = dec.v_s();
        let k = tree.leaf_count();
        let nodes = preorder_nodes(tree);
        let root_in_vs = v_s.contains(&0);
        let root_label = match &nodes[0] {
            SubstitutionTree::Node { label, .. } => label.clone(),
            SubstitutionTree::Leaf => {
                // a bare leaf induces no constraint beyond one marked leaf
                return Ok(self.pack.t_prime.clone().shift(1));
            }
        };
        let mut acc = if root_in_vs {
            self.pack.t_prime.clone()
        } else {
            match root_label {
                NodeLabel::Plus => self.pack.t_plus.clone(),
                NodeLabel::Minus => self.pack.t_minus.clone(),
                _ => unreachable!("nonlinear root is always in V_s"),
            }
        };
        // child ids per node, to classify children of each internal node
        let mut child_ids: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
        {
            let mut stack = vec![(0usize, 0usize)];
            let mut next_id = 1usize;
            // rebuild preorder child relationships
            fn assign(
                t: &SubstitutionTree,
                my_id: usize,
                next_id: &mut usize,
                child_ids: &mut Vec<Vec<usize>>,
            ) {
                if let SubstitutionTree::Node { children, .. } = t {
                    for c in children {
                        let cid = *next_id;
                        *next_id += 1;
                        child_ids[my_id].push(cid);
                        assign(c, cid, next_id, child_ids);
                    }
                }
            }
            assign(tree, 0, &mut next_id, &mut child_ids);
            let _ = stack.pop();
        }
        for (id, node) in nodes.iter().enumerate() {
            let SubstitutionTree::Node { label, children } = node else {
                continue;
            };
            let d = children.len();
            let mut d_prime = 0usize;
            let mut d_plus = 0usize;
            let mut d_minus = 0usize;
            for (slot, c) in children.iter().enumerate() {
                let cid = child_ids[id][slot];
                match c {
                    SubstitutionTree::Leaf => d_prime += 1,
                    SubstitutionTree::Node { label: cl, .. } => {
                        if v_s.contains(&cid) {
                            d_prime += 1;
                        } else {
                            match cl {
                                NodeLabel::Plus => d_plus += 1,
                                NodeLabel::Minus => d_minus += 1,
                                _ => unreachable!("nonlinear children are always in V_s"),
                            }
                        }
                    }
                }
            }
            debug_assert_eq!(d_prime + d_plus + d_minus, d);
            let factor = if v_s.contains(&id) {
                let theta = label.as_permutation(d);
                let occ = occ_series(&theta, &self.family, order);
                occ.compose(&self.t)?
                    .mul(&self.pack.t_prime.pow(d_prime))
                    .mul(&self.pack.t_plus.pow(d_plus))
                    .mul(&self.pack.t_minus.pow(d_minus))
            } else {
                match label {
                    NodeLabel::Plus => self
                        .geom_np
                        .pow(d + 1)
                        .mul(&self.pack.t_np_prime.pow(d_prime))
                        .mul(&self.pack.t_np_plus.pow(d_plus))
                        .mul(&self.pack.t_np_minus.pow(d_minus)),
                    NodeLabel::Minus => self
                        .geom_np
                        .pow(d + 1)
                        .mul(&self.pack.t_nm_prime.pow(d_prime))
                        .mul(&self.pack.t_nm_plus.pow(d_plus))
                        .mul(&self.pack.t_nm_minus.pow(d_minus)),
                    _ => unreachable!(),
                }
            };
            acc = acc.mul(&factor);
        }
        Ok(acc.shift(k))
    }

    /// `T_{t₀} = Σ_{V_s} T_{t₀,V_s}` over all decorations of `t₀`
    /// (`V_s` ranges over supersets of the nonlinear node set).
    pub fn marked_tree_series(
        &self,
        t0: &SubstitutionTree,
    ) -> Result<TruncatedSeries, SeriesError> {
        let nonlinear: BTreeSet<usize> = DecoratedTree::nonlinear_ids(t0).into_iter().collect();
        let linear: Vec<usize> = DecoratedTree::internal_ids(t0)
            .into_iter()
            .filter(|id| !nonlinear.contains(id))
            .collect();
        let mut total = TruncatedSeries::zero(self.order);
        for mask in 0u64..(1 << linear.len()) {
            let mut v_s = nonlinear.clone();
            for (i, &id) in linear.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    v_s.insert(id);
                }
            }
            let dec = DecoratedTree::new(t0.clone(), v_s)?;
            total = total.add(&self.decorated_tree_series(&dec)?);
        }
        Ok(total)
    }

    /// `E[occ(π, σ_n)]` for a uniform `σ_n ∈ ⟨S⟩_n`, as an exact rational:
    /// the marked-tree series of all substitution trees of `π`, divided by
    /// `C(n,k)·[zⁿ]T`.
    pub fn expected_occ(&self, pi: &Permutation, n: usize) -> Result<BigRational, SeriesError> {
        let k = pi.size();
        if n > self.order {
            return Err(SeriesError::OrderTooSmall {
                order: self.order,
                wanted: n,
            });
        }
        if k > n {
            return Ok(BigRational::zero());
        }
        if k == 1 {
            return Ok(BigRational::one());
        }
        let mut numerator = BigRational::zero();
        for t0 in enumerate_substitution_trees(pi)? {
            numerator += self.marked_tree_series(&t0)?.coeff(n)?;
        }
        let class_count = self.t.coeff(n)?;
        let denom = BigRational::from(binomial(BigInt::from(n), BigInt::from(k))) * class_count;
        Ok(numerator / denom)
    }
}

/// One-shot `T_{t₀,V_s}` (see [`ClassSeries::decorated_tree_series`]).
pub fn decorated_tree_series(
    dec: &DecoratedTree,
    family: &[Permutation],
    order: usize,
) -> Result<TruncatedSeries, SeriesError> {
    ClassSeries::new(family, order)?.decorated_tree_series(dec)
}

/// One-shot exact `E[occ(π, σ_n)]` (see [`ClassSeries::expected_occ`]).
pub fn exact_expected_occ(
    pi: &Permutation,
    family: &[Permutation],
    n: usize,
) -> Result<BigRational, SeriesError> {
    ClassSeries::new(family, n)?.expected_occ(pi, n)
}
