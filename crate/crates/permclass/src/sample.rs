//! Seeded random generation: uniform binary trees (Rémy), biased signed
//! trees for the Brownian separable permuton, Marchal growth for stable-tree
//! shapes, and Boltzmann samplers for `⟨S⟩`.
//!
//! Every sampler takes an explicit [`Rng`]; a fixed seed reproduces the
//! identical sample sequence.

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::analysis::{standard_constants, AnalysisError, FamilySpec};
use crate::perm::Permutation;
use crate::permuton::Permuton;
use crate::tree::{enumerate_shapes, perm_of_tree, NodeLabel, SubstitutionTree, TreeShape};

/// Largest `k` for which `marchal_tree` samples exactly from the enumerated
/// `ν_{δ,k}` distribution instead of running the growth procedure.
pub const MARCHAL_EXACT_CAP: usize = 12;

/// Default rejection budget for size-windowed Boltzmann sampling.
pub const DEFAULT_MAX_DRAWS: u64 = 1_000_000;

#[derive(Debug, Error)]
pub enum SampleError {
    #[error("need at least {0} leaves")]
    TooFewLeaves(usize),
    #[error("sign probability {0} outside [0, 1]")]
    BadProbability(f64),
    #[error("delta = {0} outside (1, 2)")]
    DeltaOutOfRange(f64),
    #[error("window [{lo}, {hi}] never reached within {draws} draws")]
    WindowUnreachable { lo: usize, hi: usize, draws: u64 },
    #[error("empty size window around target {0}")]
    EmptyWindow(usize),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Permuton(#[from] crate::permuton::PermutonError),
}

/// Deterministic pseudo-random stream with an explicit 64-bit seed.
pub struct Rng {
    inner: ChaCha12Rng,
}

impl Rng {
    pub fn from_seed(seed: u64) -> Self {
        Rng {
            inner: ChaCha12Rng::seed_from_u64(seed),
        }
    }

    /// An independent stream derived from this seed for parallel work.
    pub fn derive(seed: u64, stream: u64) -> Self {
        Rng {
            inner: ChaCha12Rng::seed_from_u64(seed ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15)),
        }
    }

    /// Uniform real in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    /// Uniform integer in `0..n`.
    pub fn next_range(&mut self, n: usize) -> usize {
        self.inner.random_range(0..n)
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }

    /// Index drawn proportionally to the (nonnegative) weights.
    pub fn categorical(&mut self, weights: &[f64]) -> usize {
        let total: f64 = weights.iter().sum();
        let mut r = self.next_f64() * total;
        for (i, w) in weights.iter().enumerate() {
            r -= w;
            if r < 0.0 {
                return i;
            }
        }
        weights.len() - 1
    }
}

/// A uniform complete binary plane tree with `n` leaves (all `Cat_{n−1}`
/// shapes equiprobable), by Rémy leaf insertion.
pub fn remy_binary_tree(n: usize, rng: &mut Rng) -> Result<TreeShape, SampleError> {
    if n == 0 {
        return Err(SampleError::TooFewLeaves(1));
    }
    // arena of nodes; leaves have no children
    struct Node {
        children: Option<(usize, usize)>,
        parent: usize, // usize::MAX at the root
    }
    let mut nodes = vec![Node {
        children: None,
        parent: usize::MAX,
    }];
    let mut root = 0usize;
    let mut all: Vec<usize> = vec![0];
    for _ in 1..n {
        let u = all[rng.next_range(all.len())];
        let leaf = nodes.len();
        nodes.push(Node {
            children: None,
            parent: usize::MAX,
        });
        let w = nodes.len();
        nodes.push(Node {
            children: None,
            parent: nodes[u].parent,
        });
        let pair = if rng.bernoulli(0.5) {
            (u, leaf)
        } else {
            (leaf, u)
        };
        nodes[w].children = Some(pair);
        let parent = nodes[w].parent;
        if parent == usize::MAX {
            root = w;
        } else {
            let (a, b) = nodes[parent].children.unwrap();
            nodes[parent].children = Some(if a == u { (w, b) } else { (a, w) });
        }
        nodes[u].parent = w;
        nodes[leaf].parent = w;
        all.push(leaf);
        all.push(w);
    }
    // convert arena to TreeShape without recursion
    let mut built: Vec<Option<TreeShape>> = nodes.iter().map(|_| None).collect();
    let mut stack = vec![(root, false)];
    while let Some((id, expanded)) = stack.pop() {
        match nodes[id].children {
            None => built[id] = Some(TreeShape::Leaf),
            Some((a, b)) => {
                if expanded {
                    let left = built[a].take().unwrap();
                    let right = built[b].take().unwrap();
                    built[id] = Some(TreeShape::Node(vec![left, right]));
                } else {
                    stack.push((id, true));
                    stack.push((a, false));
                    stack.push((b, false));
                }
            }
        }
    }
    Ok(built[root].take().unwrap())
}

fn label_shape(
    shape: &TreeShape,
    pick: &mut impl FnMut(usize, &mut Rng) -> NodeLabel,
    rng: &mut Rng,
) -> SubstitutionTree {
    match shape {
        TreeShape::Leaf => SubstitutionTree::Leaf,
        TreeShape::Node(cs) => {
            let label = pick(cs.len(), rng);
            let children = cs.iter().map(|c| label_shape(c, pick, rng)).collect();
            SubstitutionTree::Node { label, children }
        }
    }
}

/// `τ_n^{(p)}`: `perm` of a uniform binary tree with `n` leaves whose
/// internal nodes carry i.i.d. `⊕`-labels of probability `p`. The monotone
/// extremes `p ∈ {0, 1}` are allowed.
pub fn biased_signed_permutation(
    n: usize,
    p: f64,
    rng: &mut Rng,
) -> Result<Permutation, SampleError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(SampleError::BadProbability(p));
    }
    let shape = remy_binary_tree(n, rng)?;
    let tree = label_shape(
        &shape,
        &mut |_, rng| {
            if rng.bernoulli(p) {
                NodeLabel::Plus
            } else {
                NodeLabel::Minus
            }
        },
        rng,
    );
    Ok(perm_of_tree(&tree))
}

/// A random plane tree shape with `k` leaves distributed as `ν_{δ,k}`.
///
/// For `k ≤ MARCHAL_EXACT_CAP` the shape is drawn categorically from the
/// exact distribution (the formula is the ground truth); beyond that the
/// Marchal growth procedure is used.
pub fn marchal_tree(k: usize, delta: f64, rng: &mut Rng) -> Result<TreeShape, SampleError> {
    if !(1.0 < delta && delta < 2.0) {
        return Err(SampleError::DeltaOutOfRange(delta));
    }
    if k < 2 {
        return Err(SampleError::TooFewLeaves(2));
    }
    if k <= MARCHAL_EXACT_CAP {
        let shapes = enumerate_shapes(k);
        let weights: Vec<f64> = shapes
            .iter()
            .map(|s| crate::analysis::nu_stable(s, delta).expect("delta checked"))
            .collect();
        let idx = rng.categorical(&weights);
        return Ok(shapes.into_iter().nth(idx).unwrap());
    }
    marchal_tree_growth(k, delta, rng)
}

/// Marchal's growth procedure: starting from one edge, repeatedly attach a
/// new leaf to an edge (weight `δ−1`) or to an internal vertex of child
/// degree `c` (weight `c−δ`), with plane positions chosen uniformly.
#[allow(clippy::needless_range_loop)] // vertices are addressed by arena id
pub fn marchal_tree_growth(k: usize, delta: f64, rng: &mut Rng) -> Result<TreeShape, SampleError> {
    if !(1.0 < delta && delta < 2.0) {
        return Err(SampleError::DeltaOutOfRange(delta));
    }
    if k < 2 {
        return Err(SampleError::TooFewLeaves(2));
    }
    // vertex 0 is the external base; its single child is the tree root
    let mut children: Vec<Vec<usize>> = vec![vec![1], vec![]];
    let mut internal: Vec<usize> = Vec::new(); // ids with ≥ 2 children
    let mut edge_count = 1usize;
    for _ in 1..k {
        let total = edge_count as f64 * (delta - 1.0)
            + internal
                .iter()
                .map(|&v| children[v].len() as f64 - delta)
                .sum::<f64>();
        let mut r = rng.next_f64() * total;
        // edges first: (parent u, slot i)
        let mut chosen_edge = None;
        'outer: for u in 0..children.len() {
            for slot in 0..children[u].len() {
                r -= delta - 1.0;
                if r < 0.0 {
                    chosen_edge = Some((u, slot));
                    break 'outer;
                }
            }
        }
        let leaf = children.len();
        if let Some((u, slot)) = chosen_edge {
            // subdivide the edge and hang the new leaf off the middle vertex
            children.push(vec![]); // the leaf
            let w = children.len();
            let c = children[u][slot];
            let pair = if rng.bernoulli(0.5) {
                vec![c, leaf]
            } else {
                vec![leaf, c]
            };
            children.push(pair);
            children[u][slot] = w;
            internal.push(w);
            edge_count += 2;
        } else {
            // pick the internal vertex the remaining weight falls into
            let mut v = None;
            for &cand in &internal {
                r -= children[cand].len() as f64 - delta;
                if r < 0.0 {
                    v = Some(cand);
                    break;
                }
            }
            let v = v.unwrap_or(*internal.last().expect("nonempty once k ≥ 3"));
            children.push(vec![]);
            let pos = rng.next_range(children[v].len() + 1);
            children[v].insert(pos, leaf);
            edge_count += 1;
        }
    }
    // convert, skipping the base vertex
    fn build(v: usize, children: &Vec<Vec<usize>>) -> TreeShape {
        if children[v].is_empty() {
            TreeShape::Leaf
        } else {
            TreeShape::Node(children[v].iter().map(|&c| build(c, children)).collect())
        }
    }
    Ok(build(children[0][0], &children))
}

/// A sample of the δ-stable permuton driven by `nu`: a `ν_{δ,n}` tree shape
/// whose internal nodes are labeled by independent `Perm(m_d, ν)` draws.
pub fn stable_permutation(
    n: usize,
    delta: f64,
    nu: &dyn Permuton,
    rng: &mut Rng,
) -> Result<Permutation, SampleError> {
    if n < 2 {
        return Err(SampleError::TooFewLeaves(2));
    }
    let shape = marchal_tree(n, delta, rng)?;
    let mut label = |d: usize, rng: &mut Rng| {
        let theta = crate::permuton::perm_from_permuton(nu, d, rng).expect("tie resolution");
        NodeLabel::from_permutation(&theta)
    };
    let tree = label_shape(&shape, &mut label, rng);
    Ok(perm_of_tree(&tree))
}

/// Boltzmann sampler for the canonical trees of `⟨S⟩` at parameter `z`,
/// built from the branching weights of the defining equation
/// `T_not⊕ = z + T_not⊖²/(1−T_not⊖) + S(T)`.
pub struct BoltzmannSampler {
    family: Vec<Permutation>,
    z: f64,
    tnp: f64,
    t: f64,
    rho: f64,
}

impl BoltzmannSampler {
    /// Default parameter `z = 0.99·ρ`.
    pub fn new(family: &[Permutation]) -> Result<Self, SampleError> {
        let rho = Self::rho(family)?;
        Self::with_parameter(family, 0.99 * rho)
    }

    /// Parameter tuned so the expected (unconditioned) size is `target`.
    pub fn tuned(family: &[Permutation], target: usize) -> Result<Self, SampleError> {
        let rho = Self::rho(family)?;
        let target = target as f64;
        let mut lo = rho * 1e-9;
        let mut hi = rho * (1.0 - 1e-12);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let sampler = Self::with_parameter_rho(family, mid, rho);
            if sampler.expected_size() < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(Self::with_parameter_rho(family, 0.5 * (lo + hi), rho))
    }

    pub fn with_parameter(family: &[Permutation], z: f64) -> Result<Self, SampleError> {
        let rho = Self::rho(family)?;
        assert!(
            z > 0.0 && z < rho,
            "Boltzmann parameter must lie in (0, rho)"
        );
        Ok(Self::with_parameter_rho(family, z, rho))
    }

    fn rho(family: &[Permutation]) -> Result<f64, SampleError> {
        let spec = FamilySpec::finite(family.to_vec())?;
        let report = standard_constants(&spec)?;
        Ok(report.rho.expect("finite families are standard"))
    }

    fn with_parameter_rho(family: &[Permutation], z: f64, rho: f64) -> Self {
        // scalar fixpoint: tnp = z + Λ(tnp), increasing iteration from 0
        let lambda = |y: f64| -> f64 {
            let v = y / (1.0 - y);
            let s: f64 = family.iter().map(|a| v.powi(a.size() as i32)).sum();
            y * y / (1.0 - y) + s
        };
        let mut y = 0.0f64;
        for _ in 0..100_000 {
            let next = z + lambda(y);
            if (next - y).abs() < 1e-16 {
                y = next;
                break;
            }
            y = next;
        }
        let t = y / (1.0 - y);
        BoltzmannSampler {
            family: family.to_vec(),
            z,
            tnp: y,
            t,
            rho,
        }
    }

    pub fn parameter(&self) -> f64 {
        self.z
    }

    pub fn rho_value(&self) -> f64 {
        self.rho
    }

    /// `E[|T|] = z·T′(z)/T(z)` via implicit differentiation of the fixpoint.
    pub fn expected_size(&self) -> f64 {
        let v = self.tnp / (1.0 - self.tnp);
        let s_prime: f64 = self
            .family
            .iter()
            .map(|a| a.size() as f64 * v.powi(a.size() as i32 - 1))
            .sum();
        let lambda_prime = (1.0 + s_prime) / ((1.0 - self.tnp) * (1.0 - self.tnp)) - 1.0;
        let tnp_prime = 1.0 / (1.0 - lambda_prime);
        let t_prime = tnp_prime / ((1.0 - self.tnp) * (1.0 - self.tnp));
        self.z * t_prime / self.t
    }

    /// Number of children of a linear node: `2 + Geometric(1 − tnp)`.
    fn linear_degree(&self, rng: &mut Rng) -> usize {
        let mut d = 2;
        while rng.bernoulli(self.tnp) {
            d += 1;
        }
        d
    }

    fn sample_constrained(&self, not_plus: bool, rng: &mut Rng) -> SubstitutionTree {
        // weights from tnp = z + tnp²/(1−tnp) + Σ_α t^{|α|}
        let linear_w = self.tnp * self.tnp / (1.0 - self.tnp);
        let mut r = rng.next_f64() * self.tnp;
        if r < self.z {
            return SubstitutionTree::Leaf;
        }
        r -= self.z;
        if r < linear_w {
            let d = self.linear_degree(rng);
            let (label, child_not_plus) = if not_plus {
                (NodeLabel::Minus, false) // children of ⊖ must avoid ⊖ roots
            } else {
                (NodeLabel::Plus, true)
            };
            let children = (0..d)
                .map(|_| self.sample_constrained(child_not_plus, rng))
                .collect();
            return SubstitutionTree::Node { label, children };
        }
        r -= linear_w;
        let mut chosen = self.family.len() - 1;
        for (i, alpha) in self.family.iter().enumerate() {
            r -= self.t.powi(alpha.size() as i32);
            if r < 0.0 {
                chosen = i;
                break;
            }
        }
        let alpha = &self.family[chosen];
        let children = (0..alpha.size()).map(|_| self.sample_tree(rng)).collect();
        SubstitutionTree::Node {
            label: NodeLabel::Simple(alpha.clone()),
            children,
        }
    }

    /// One Boltzmann draw of a canonical tree (unconditioned size).
    pub fn sample_tree(&self, rng: &mut Rng) -> SubstitutionTree {
        // T = Tnp/(1−Tnp): a sequence of j ≥ 1 not-⊕ trees, j = 1 meaning
        // the tree itself, j ≥ 2 a ⊕ root
        let mut j = 1;
        while rng.bernoulli(self.tnp) {
            j += 1;
        }
        if j == 1 {
            self.sample_constrained(true, rng)
        } else {
            let children = (0..j).map(|_| self.sample_constrained(true, rng)).collect();
            SubstitutionTree::Node {
                label: NodeLabel::Plus,
                children,
            }
        }
    }

    /// Rejection-samples until the size lands in
    /// `[target(1−window), target(1+window)]`.
    pub fn sample_sized(
        &self,
        target: usize,
        window: f64,
        rng: &mut Rng,
        max_draws: u64,
    ) -> Result<Permutation, SampleError> {
        let lo = (target as f64 * (1.0 - window)).ceil() as usize;
        let hi = (target as f64 * (1.0 + window)).floor() as usize;
        if lo > hi {
            return Err(SampleError::EmptyWindow(target));
        }
        for _ in 0..max_draws {
            let tree = self.sample_tree(rng);
            let size = tree.leaf_count();
            if (lo..=hi).contains(&size) {
                return Ok(perm_of_tree(&tree));
            }
        }
        Err(SampleError::WindowUnreachable {
            lo,
            hi,
            draws: max_draws,
        })
    }
}

/// One permutation of `⟨S⟩` with size within `window` of `target`, uniform
/// conditioned on its size; default parameter and rejection budget.
pub fn boltzmann_class_sample(
    family: &[Permutation],
    target: usize,
    window: f64,
    rng: &mut Rng,
) -> Result<Permutation, SampleError> {
    BoltzmannSampler::new(family)?.sample_sized(target, window, rng, DEFAULT_MAX_DRAWS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::nu_stable;
    use crate::stats::chi_square_test;
    use std::collections::HashMap;

    #[test]
    fn rng_is_deterministic() {
        let mut a = Rng::from_seed(42);
        let mut b = Rng::from_seed(42);
        for _ in 0..100 {
            assert_eq!(a.next_f64(), b.next_f64());
        }
        let mut c = Rng::from_seed(43);
        assert_ne!(a.next_f64(), c.next_f64());
    }

    #[test]
    fn remy_small_cases() {
        let mut rng = Rng::from_seed(7);
        assert_eq!(remy_binary_tree(1, &mut rng).unwrap(), TreeShape::Leaf);
        let t = remy_binary_tree(50, &mut rng).unwrap();
        assert_eq!(t.leaf_count(), 50);
        assert!(t.internal_degrees().iter().all(|&d| d == 2));
        assert!(remy_binary_tree(0, &mut rng).is_err());
    }

    #[test]
    fn remy_uniform_over_shapes() {
        // n = 4: all 5 binary shapes equally likely
        let mut rng = Rng::from_seed(123);
        let mut counts: HashMap<TreeShape, u64> = HashMap::new();
        let draws = 50_000;
        for _ in 0..draws {
            *counts
                .entry(remy_binary_tree(4, &mut rng).unwrap())
                .or_insert(0) += 1;
        }
        assert_eq!(counts.len(), 5);
        let observed: Vec<u64> = counts.values().copied().collect();
        let probs = vec![0.2; 5];
        let (_, p) = chi_square_test(&observed, &probs);
        assert!(p > 0.01, "p = {p}");
    }

    #[test]
    fn signed_permutation_monotone_limits() {
        let mut rng = Rng::from_seed(5);
        assert_eq!(
            biased_signed_permutation(6, 1.0, &mut rng).unwrap(),
            Permutation::identity(6)
        );
        assert_eq!(
            biased_signed_permutation(6, 0.0, &mut rng).unwrap(),
            Permutation::decreasing(6)
        );
        assert!(biased_signed_permutation(3, 1.5, &mut rng).is_err());
    }

    #[test]
    fn signed_law_matches_enumeration_n3() {
        // P(τ_3^{(p)} = π) = N_π p^{r₊}(1−p)^{r₋} / Cat_2
        let p_plus = 0.3f64;
        let mut rng = Rng::from_seed(99);
        let draws = 40_000u64;
        let mut counts: HashMap<Permutation, u64> = HashMap::new();
        for _ in 0..draws {
            *counts
                .entry(biased_signed_permutation(3, p_plus, &mut rng).unwrap())
                .or_insert(0) += 1;
        }
        let expect = |pi: &str, prob: f64| {
            let c = counts.get(&pi.parse().unwrap()).copied().unwrap_or(0);
            let sd = (draws as f64 * prob * (1.0 - prob)).sqrt();
            assert!(
                (c as f64 - draws as f64 * prob).abs() < 4.0 * sd,
                "{pi}: {c} vs {}",
                draws as f64 * prob
            );
        };
        // 123: two trees, both all-⊕; 321 dually; 132/213/231/312: one tree each
        expect("123", p_plus * p_plus);
        expect("321", (1.0 - p_plus) * (1.0 - p_plus));
        expect("132", p_plus * (1.0 - p_plus) / 2.0);
        expect("213", p_plus * (1.0 - p_plus) / 2.0);
    }

    #[test]
    fn marchal_exact_small_k() {
        let mut rng = Rng::from_seed(11);
        let t = marchal_tree(2, 1.5, &mut rng).unwrap();
        assert_eq!(t, TreeShape::Node(vec![TreeShape::Leaf, TreeShape::Leaf]));
        assert!(marchal_tree(4, 2.5, &mut rng).is_err());
        assert!(marchal_tree(1, 1.5, &mut rng).is_err());
    }

    #[test]
    fn marchal_growth_matches_nu() {
        // the growth procedure itself must reproduce ν_{δ,k}
        for (k, delta, draws) in [(3usize, 1.5f64, 40_000u64), (4, 1.3, 40_000)] {
            let shapes = enumerate_shapes(k);
            let probs: Vec<f64> = shapes
                .iter()
                .map(|s| nu_stable(s, delta).unwrap())
                .collect();
            let mut rng = Rng::from_seed(2024);
            let mut counts = vec![0u64; shapes.len()];
            for _ in 0..draws {
                let t = marchal_tree_growth(k, delta, &mut rng).unwrap();
                let idx = shapes.iter().position(|s| *s == t).expect("known shape");
                counts[idx] += 1;
            }
            let (stat, p) = chi_square_test(&counts, &probs);
            assert!(p > 0.01, "k={k} delta={delta}: chi2={stat}, p={p}");
        }
    }

    #[test]
    fn marchal_no_unary_nodes_large_k() {
        let mut rng = Rng::from_seed(31);
        for _ in 0..20 {
            let t = marchal_tree(40, 1.4, &mut rng).unwrap();
            assert_eq!(t.leaf_count(), 40);
            assert!(t.internal_degrees().iter().all(|&d| d >= 2));
        }
    }

    #[test]
    fn stable_permutation_wellformed() {
        use crate::permuton::Lebesgue;
        let mut rng = Rng::from_seed(8);
        let sigma = stable_permutation(50, 1.5, &Lebesgue, &mut rng).unwrap();
        assert_eq!(sigma.size(), 50);
        assert!(stable_permutation(1, 1.5, &Lebesgue, &mut rng).is_err());
    }

    #[test]
    fn boltzmann_samples_class_members() {
        let fam: Vec<Permutation> = vec!["2413".parse().unwrap()];
        let sampler = BoltzmannSampler::new(&fam).unwrap();
        let mut rng = Rng::from_seed(77);
        for _ in 0..200 {
            let tree = sampler.sample_tree(&mut rng);
            // every sampled tree is a canonical tree over the family
            assert!(crate::tree::CanonicalTree::new(tree, Some(&fam)).is_ok());
        }
        let sigma = sampler.sample_sized(12, 0.25, &mut rng, 100_000).unwrap();
        assert!((9..=15).contains(&sigma.size()));
    }

    #[test]
    fn boltzmann_target_one() {
        let mut rng = Rng::from_seed(3);
        let sigma = boltzmann_class_sample(&[], 1, 0.0, &mut rng).unwrap();
        assert_eq!(sigma, Permutation::identity(1));
    }

    #[test]
    fn boltzmann_tuned_mean() {
        let sampler = BoltzmannSampler::tuned(&[], 30).unwrap();
        assert!((sampler.expected_size() - 30.0).abs() < 0.5);
        // informational: empirical mean within 20% of target
        let mut rng = Rng::from_seed(61);
        let mut total = 0usize;
        let draws = 20_000;
        for _ in 0..draws {
            total += sampler.sample_tree(&mut rng).leaf_count();
        }
        let mean = total as f64 / draws as f64;
        assert!((mean - 30.0).abs() < 6.0, "mean = {mean}");
    }

    #[test]
    fn remy_induced_subtree_consistency() {
        // extracting a uniform 3-pattern from τ_10^{(p)} matches the law of
        // τ_3^{(p)}
        let p_plus = 0.7;
        let mut rng = Rng::from_seed(404);
        let draws = 30_000u64;
        let mut counts: HashMap<Permutation, u64> = HashMap::new();
        for _ in 0..draws {
            let sigma = biased_signed_permutation(10, p_plus, &mut rng).unwrap();
            // uniform 3-subset of positions
            let mut idx: Vec<usize> = (1..=10).collect();
            for i in 0..3 {
                let j = i + rng.next_range(10 - i);
                idx.swap(i, j);
            }
            let mut set = [idx[0], idx[1], idx[2]];
            set.sort_unstable();
            *counts.entry(sigma.pattern_at(&set).unwrap()).or_insert(0) += 1;
        }
        // exact law of τ_3
        let mut probs = Vec::new();
        let mut observed = Vec::new();
        for pi in crate::perm::all_permutations(3) {
            let counts_info = crate::tree::expanded_tree_count(&pi);
            let n_pi: f64 = counts_info.n_separation.to_string().parse().unwrap();
            let prob = n_pi / 2.0
                * p_plus.powi(counts_info.r_plus as i32)
                * (1.0 - p_plus).powi(counts_info.r_minus as i32);
            probs.push(prob);
            observed.push(counts.get(&pi).copied().unwrap_or(0));
        }
        let (stat, p) = chi_square_test(&observed, &probs);
        assert!(p > 0.01, "chi2 = {stat}, p = {p}");
    }
}
