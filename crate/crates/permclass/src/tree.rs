//! Substitution trees, the canonical decomposition, induced trees and
//! exhaustive class enumeration.
//!
//! A substitution tree encodes a permutation by nested substitutions
//! (`perm_of_tree`). Canonical trees — no `⊕` child of a `⊕`, no `⊖` child of
//! a `⊖`, nonlinear labels simple — are in bijection with permutations, which
//! is what makes `enumerate_class` an exact brute-force oracle for the
//! generating-function machinery.

use std::collections::BTreeSet;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use thiserror::Error;

use crate::perm::{PermError, Permutation};

/// Default size cap for `enumerate_substitution_trees`.
pub const DEFAULT_PATTERN_CAP: usize = 6;
/// Default size cap for `enumerate_class`.
pub const DEFAULT_CLASS_CAP: usize = 10;

#[derive(Debug, Error)]
pub enum TreeError {
    #[error("internal node must have at least 2 children, got {0}")]
    ArityTooSmall(usize),
    #[error("label of size {label} does not match arity {arity}")]
    ArityMismatch { label: usize, arity: usize },
    #[error("label {0} is not simple")]
    NotSimple(String),
    #[error("general labels are not allowed in canonical trees")]
    GeneralLabel,
    #[error("a child of a {0} node carries the same linear label")]
    LinearChain(char),
    #[error("simple label {0} is not in the allowed family")]
    LabelOutsideFamily(String),
    #[error("family member {0} is not simple")]
    FamilyMemberNotSimple(String),
    #[error("leaf index set must have at least 2 members")]
    IndexSetTooSmall,
    #[error("leaf index {0} out of range 1..={1}")]
    LeafIndexOutOfRange(usize, usize),
    #[error("leaf index set must be strictly increasing")]
    BadIndexSet,
    #[error("size {0} above cap {1}")]
    AboveCap(usize, usize),
    #[error("node {0} in V_s is not an internal node")]
    DecorationNotInternal(usize),
    #[error("V_s misses nonlinear node {0}")]
    DecorationMissesNonlinear(usize),
    #[error("cannot parse tree: {0}")]
    Parse(String),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// Label of an internal node.
///
/// `Plus`/`Minus` stand for the increasing/decreasing permutation of the
/// node's arity. `General` labels (neither monotone nor simple) appear only in
/// general substitution trees, e.g. as outputs of `induced_tree`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum NodeLabel {
    Plus,
    Minus,
    Simple(Permutation),
    General(Permutation),
}

impl NodeLabel {
    /// Classifies a permutation of size ≥ 2: monotone labels are normalized
    /// to `Plus`/`Minus`, simple ones to `Simple`, the rest to `General`.
    pub fn from_permutation(p: &Permutation) -> NodeLabel {
        if p.is_increasing() {
            NodeLabel::Plus
        } else if p.is_decreasing() {
            NodeLabel::Minus
        } else if p.is_simple() {
            NodeLabel::Simple(p.clone())
        } else {
            NodeLabel::General(p.clone())
        }
    }

    /// The label as an explicit permutation, given the node arity.
    pub fn as_permutation(&self, arity: usize) -> Permutation {
        match self {
            NodeLabel::Plus => Permutation::identity(arity),
            NodeLabel::Minus => Permutation::decreasing(arity),
            NodeLabel::Simple(p) | NodeLabel::General(p) => p.clone(),
        }
    }

    pub fn is_linear(&self) -> bool {
        matches!(self, NodeLabel::Plus | NodeLabel::Minus)
    }
}

/// A rooted planar tree with permutation-labeled internal nodes; leaves are
/// unlabeled. Size = number of leaves.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum SubstitutionTree {
    Leaf,
    Node {
        label: NodeLabel,
        children: Vec<SubstitutionTree>,
    },
}

/// An unlabeled rooted plane tree with internal degrees ≥ 2.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum TreeShape {
    Leaf,
    Node(Vec<TreeShape>),
}

impl TreeShape {
    pub fn leaf_count(&self) -> usize {
        match self {
            TreeShape::Leaf => 1,
            TreeShape::Node(cs) => cs.iter().map(|c| c.leaf_count()).sum(),
        }
    }

    /// Child counts of all internal nodes, in preorder.
    pub fn internal_degrees(&self) -> Vec<usize> {
        let mut out = Vec::new();
        fn go(t: &TreeShape, out: &mut Vec<usize>) {
            if let TreeShape::Node(cs) = t {
                out.push(cs.len());
                for c in cs {
                    go(c, out);
                }
            }
        }
        go(self, &mut out);
        out
    }
}

impl Drop for SubstitutionTree {
    // default recursive drop overflows the stack on very deep trees
    fn drop(&mut self) {
        let mut stack: Vec<SubstitutionTree> = Vec::new();
        if let SubstitutionTree::Node { children, .. } = self {
            stack.append(children);
        }
        while let Some(mut t) = stack.pop() {
            if let SubstitutionTree::Node { children, .. } = &mut t {
                stack.append(children);
            }
        }
    }
}

impl Drop for TreeShape {
    fn drop(&mut self) {
        let mut stack: Vec<TreeShape> = Vec::new();
        if let TreeShape::Node(children) = self {
            stack.append(children);
        }
        while let Some(mut t) = stack.pop() {
            if let TreeShape::Node(children) = &mut t {
                stack.append(children);
            }
        }
    }
}

impl SubstitutionTree {
    pub fn node(label: NodeLabel, children: Vec<SubstitutionTree>) -> Self {
        SubstitutionTree::Node { label, children }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, SubstitutionTree::Leaf)
    }

    /// `|t|`, the number of leaves.
    pub fn leaf_count(&self) -> usize {
        let mut stack = vec![self];
        let mut count = 0;
        while let Some(t) = stack.pop() {
            match t {
                SubstitutionTree::Leaf => count += 1,
                SubstitutionTree::Node { children, .. } => stack.extend(children.iter()),
            }
        }
        count
    }

    /// `#t`, the number of nodes (leaves and internal).
    pub fn node_count(&self) -> usize {
        let mut stack = vec![self];
        let mut count = 0;
        while let Some(t) = stack.pop() {
            count += 1;
            if let SubstitutionTree::Node { children, .. } = t {
                stack.extend(children.iter());
            }
        }
        count
    }

    /// Checks arity constraints: internal nodes have ≥ 2 children and
    /// an arity matching their label size.
    pub fn validate(&self) -> Result<(), TreeError> {
        match self {
            SubstitutionTree::Leaf => Ok(()),
            SubstitutionTree::Node { label, children } => {
                let d = children.len();
                if d < 2 {
                    return Err(TreeError::ArityTooSmall(d));
                }
                match label {
                    NodeLabel::Plus | NodeLabel::Minus => {}
                    NodeLabel::Simple(p) => {
                        if p.size() != d {
                            return Err(TreeError::ArityMismatch {
                                label: p.size(),
                                arity: d,
                            });
                        }
                        if !p.is_simple() {
                            return Err(TreeError::NotSimple(p.compact()));
                        }
                    }
                    NodeLabel::General(p) => {
                        if p.size() != d {
                            return Err(TreeError::ArityMismatch {
                                label: p.size(),
                                arity: d,
                            });
                        }
                    }
                }
                for c in children {
                    c.validate()?;
                }
                Ok(())
            }
        }
    }

    pub fn shape(&self) -> TreeShape {
        match self {
            SubstitutionTree::Leaf => TreeShape::Leaf,
            SubstitutionTree::Node { children, .. } => {
                TreeShape::Node(children.iter().map(|c| c.shape()).collect())
            }
        }
    }

    /// Labels of all internal nodes as permutations, in preorder.
    pub fn internal_labels(&self) -> Vec<Permutation> {
        let mut out = Vec::new();
        fn go(t: &SubstitutionTree, out: &mut Vec<Permutation>) {
            if let SubstitutionTree::Node { label, children } = t {
                out.push(label.as_permutation(children.len()));
                for c in children {
                    go(c, out);
                }
            }
        }
        go(self, &mut out);
        out
    }
}

/// `perm(t)`: the permutation encoded by a substitution tree, by recursive
/// substitution of the children into each node's label. A leaf encodes `1`.
pub fn perm_of_tree(t: &SubstitutionTree) -> Permutation {
    // Flatten to arrays (preorder) so arbitrarily deep trees cannot overflow
    // the call stack; then sizes bottom-up and offsets top-down.
    struct Info<'a> {
        node: &'a SubstitutionTree,
        parent: usize,
    }
    let mut nodes: Vec<Info> = vec![Info {
        node: t,
        parent: usize::MAX,
    }];
    let mut i = 0;
    while i < nodes.len() {
        if let SubstitutionTree::Node { children, .. } = nodes[i].node {
            for c in children {
                nodes.push(Info { node: c, parent: i });
            }
        }
        i += 1;
    }
    let m = nodes.len();
    let mut size = vec![0usize; m];
    for i in (0..m).rev() {
        if nodes[i].node.is_leaf() {
            size[i] = 1;
        }
        let p = nodes[i].parent;
        if p != usize::MAX {
            size[p] += size[i];
        }
    }
    // children of node i are contiguous in preorder? Not in this flattening
    // (children of different nodes interleave). Record child id lists.
    let mut child_ids: Vec<Vec<usize>> = vec![Vec::new(); m];
    for i in 1..m {
        child_ids[nodes[i].parent].push(i);
    }
    // preorder pushes children in order, so each child_ids list is ordered.
    let n = size[0];
    let mut values = vec![0u32; n];
    let mut pos_off = vec![0usize; m];
    let mut val_off = vec![0usize; m];
    for i in 0..m {
        let node = nodes[i].node;
        match node {
            SubstitutionTree::Leaf => values[pos_off[i]] = val_off[i] as u32 + 1,
            SubstitutionTree::Node { label, children } => {
                let ids = &child_ids[i];
                let d = ids.len();
                let theta = match label {
                    NodeLabel::Plus => None,
                    NodeLabel::Minus => Some(Permutation::decreasing(d)),
                    NodeLabel::Simple(p) | NodeLabel::General(p) => Some(p.clone()),
                };
                let mut pos = pos_off[i];
                for &c in ids {
                    pos_off[c] = pos;
                    pos += size[c];
                }
                match theta {
                    None => {
                        let mut v = val_off[i];
                        for &c in ids {
                            val_off[c] = v;
                            v += size[c];
                        }
                    }
                    Some(theta) => {
                        for (ci, &c) in ids.iter().enumerate() {
                            let mut off = val_off[i];
                            for (cj, &c2) in ids.iter().enumerate() {
                                if theta.at(cj + 1) < theta.at(ci + 1) {
                                    off += size[c2];
                                }
                            }
                            val_off[c] = off;
                        }
                    }
                }
                let _ = children;
            }
        }
    }
    Permutation::new(values).expect("substitution tree encodes a permutation")
}

/// A substitution tree certified canonical: internal labels are `⊕`, `⊖` or
/// simple, and no linear node has a child with the same linear label.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CanonicalTree(SubstitutionTree);

impl CanonicalTree {
    /// Validates `tree` as canonical; when `family` is given, simple labels
    /// must additionally belong to it.
    pub fn new(tree: SubstitutionTree, family: Option<&[Permutation]>) -> Result<Self, TreeError> {
        tree.validate()?;
        fn go(t: &SubstitutionTree, family: Option<&[Permutation]>) -> Result<(), TreeError> {
            if let SubstitutionTree::Node { label, children } = t {
                match label {
                    NodeLabel::General(_) => return Err(TreeError::GeneralLabel),
                    NodeLabel::Simple(p) => {
                        if let Some(fam) = family {
                            if !fam.contains(p) {
                                return Err(TreeError::LabelOutsideFamily(p.compact()));
                            }
                        }
                    }
                    _ => {}
                }
                for c in children {
                    if let SubstitutionTree::Node { label: cl, .. } = c {
                        match (label, cl) {
                            (NodeLabel::Plus, NodeLabel::Plus) => {
                                return Err(TreeError::LinearChain('+'))
                            }
                            (NodeLabel::Minus, NodeLabel::Minus) => {
                                return Err(TreeError::LinearChain('-'))
                            }
                            _ => {}
                        }
                    }
                    go(c, family)?;
                }
            }
            Ok(())
        }
        go(&tree, family)?;
        Ok(CanonicalTree(tree))
    }

    pub fn tree(&self) -> &SubstitutionTree {
        &self.0
    }

    pub fn into_tree(self) -> SubstitutionTree {
        self.0
    }
}

/// The unique canonical tree of `σ`: root `⊕` over the maximal
/// `⊕`-indecomposable blocks, or `⊖` dually, or a simple skeleton over the
/// maximal proper blocks.
pub fn canonical_tree(sigma: &Permutation) -> CanonicalTree {
    let tree = canonical_rec(sigma.values());
    debug_assert!(CanonicalTree::new(tree.clone(), None).is_ok());
    CanonicalTree(tree)
}

#[allow(clippy::needless_range_loop)] // min/max window scans over positions
fn canonical_rec(vals: &[u32]) -> SubstitutionTree {
    let n = vals.len();
    if n == 1 {
        return SubstitutionTree::Leaf;
    }
    // vals is always an interval of values [lo, lo+n-1]
    let lo = *vals.iter().min().unwrap();
    // sum decomposition: prefixes holding exactly the smallest values so far
    let mut blocks = Vec::new();
    let mut mx = 0u32;
    let mut start = 0usize;
    for (i, &v) in vals.iter().enumerate() {
        mx = mx.max(v);
        if (mx - lo) as usize == i {
            blocks.push(&vals[start..=i]);
            start = i + 1;
            mx = 0;
        }
    }
    if blocks.len() >= 2 {
        return SubstitutionTree::Node {
            label: NodeLabel::Plus,
            children: blocks.into_iter().map(canonical_rec).collect(),
        };
    }
    // skew decomposition: prefixes holding exactly the largest values so far
    let hi = lo + n as u32 - 1;
    let mut blocks = Vec::new();
    let mut mn = u32::MAX;
    let mut start = 0usize;
    for (i, &v) in vals.iter().enumerate() {
        mn = mn.min(v);
        if (hi - mn) as usize == i {
            blocks.push(&vals[start..=i]);
            start = i + 1;
            mn = u32::MAX;
        }
    }
    if blocks.len() >= 2 {
        return SubstitutionTree::Node {
            label: NodeLabel::Minus,
            children: blocks.into_iter().map(canonical_rec).collect(),
        };
    }
    // simple skeleton over maximal proper blocks; with sum and skew
    // decompositions excluded those blocks are disjoint, so a greedy
    // longest-interval scan from the left finds them
    let mut blocks: Vec<&[u32]> = Vec::new();
    let mut start = 0usize;
    while start < n {
        let mut best = start;
        let mut mn = vals[start];
        let mut mx = vals[start];
        for j in start + 1..n {
            mn = mn.min(vals[j]);
            mx = mx.max(vals[j]);
            if j - start + 1 < n && (mx - mn) as usize == j - start {
                best = j;
            }
        }
        blocks.push(&vals[start..=best]);
        start = best + 1;
    }
    let reps: Vec<u32> = blocks.iter().map(|b| *b.iter().min().unwrap()).collect();
    let skeleton = Permutation::pattern_of_values(&reps);
    debug_assert!(
        skeleton.is_simple(),
        "skeleton {skeleton} of {vals:?} must be simple"
    );
    SubstitutionTree::Node {
        label: NodeLabel::Simple(skeleton),
        children: blocks.into_iter().map(canonical_rec).collect(),
    }
}

/// The tree `t_I` induced by a set of leaves (1-based, strictly increasing,
/// numbered in depth-first left-to-right order). Internal nodes of `t_I` are
/// the first common ancestors of ≥ 2 marked leaves; labels are restricted to
/// the children with marked descendants.
pub fn induced_tree(
    t: &SubstitutionTree,
    indices: &[usize],
) -> Result<SubstitutionTree, TreeError> {
    let n = t.leaf_count();
    if indices.len() < 2 {
        return Err(TreeError::IndexSetTooSmall);
    }
    let mut prev = 0usize;
    for &i in indices {
        if i == 0 || i > n {
            return Err(TreeError::LeafIndexOutOfRange(i, n));
        }
        if i <= prev {
            return Err(TreeError::BadIndexSet);
        }
        prev = i;
    }
    let marked: HashSet<usize> = indices.iter().copied().collect();

    enum Ind {
        None,
        Single,
        Tree(SubstitutionTree),
    }

    fn go(t: &SubstitutionTree, counter: &mut usize, marked: &HashSet<usize>) -> Ind {
        match t {
            SubstitutionTree::Leaf => {
                *counter += 1;
                if marked.contains(counter) {
                    Ind::Single
                } else {
                    Ind::None
                }
            }
            SubstitutionTree::Node { label, children } => {
                let mut active: Vec<(usize, Ind)> = Vec::new();
                for (i, c) in children.iter().enumerate() {
                    match go(c, counter, marked) {
                        Ind::None => {}
                        r => active.push((i, r)),
                    }
                }
                match active.len() {
                    0 => Ind::None,
                    1 => active.pop().unwrap().1,
                    _ => {
                        let theta = label.as_permutation(children.len());
                        let idx: Vec<usize> = active.iter().map(|(i, _)| i + 1).collect();
                        let restricted = theta.pattern_at(&idx).expect("valid child indices");
                        let new_label = NodeLabel::from_permutation(&restricted);
                        let new_children = active
                            .into_iter()
                            .map(|(_, r)| match r {
                                Ind::Single => SubstitutionTree::Leaf,
                                Ind::Tree(t) => t,
                                Ind::None => unreachable!(),
                            })
                            .collect();
                        Ind::Tree(SubstitutionTree::Node {
                            label: new_label,
                            children: new_children,
                        })
                    }
                }
            }
        }
    }

    let mut counter = 0usize;
    match go(t, &mut counter, &marked) {
        Ind::Tree(t) => Ok(t),
        _ => unreachable!("≥2 marked leaves always have a common ancestor"),
    }
}

fn catalan(k: usize) -> BigUint {
    // Cat_{i+1} = Cat_i · 2(2i+1)/(i+2), exact at every step
    let mut c = BigUint::from(1u32);
    for i in 0..k as u64 {
        c = c * BigUint::from(2 * (2 * i + 1)) / BigUint::from(i + 2);
    }
    c
}

fn catalan_u64(k: usize) -> u64 {
    let mut c = 1u128;
    for i in 0..k as u128 {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c as u64
}

/// Summary of the expanded trees of a permutation (all expanded trees of `π`
/// share the counts below).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpandedTreeCount {
    /// `Ñ_π`: number of expanded trees.
    pub n_tilde: BigUint,
    /// `N_π`: number of separation trees (`Ñ_π` when `π` is separable, else 0).
    pub n_separation: BigUint,
    /// Number of `⊕` nodes in any expanded tree.
    pub r_plus: usize,
    /// Number of `⊖` nodes in any expanded tree.
    pub r_minus: usize,
    /// Labels of the nonlinear nodes (same as in the canonical tree).
    pub simple_labels: Vec<Permutation>,
}

/// Expanded-tree counts of `π` from the degree product over its canonical
/// tree: `Ñ_π = ∏ Cat_{d−1}` over linear nodes.
pub fn expanded_tree_count(pi: &Permutation) -> ExpandedTreeCount {
    let ct = canonical_tree(pi);
    let mut n_tilde = BigUint::from(1u32);
    let mut r_plus = 0;
    let mut r_minus = 0;
    let mut simple_labels = Vec::new();
    fn go(
        t: &SubstitutionTree,
        n_tilde: &mut BigUint,
        r_plus: &mut usize,
        r_minus: &mut usize,
        labels: &mut Vec<Permutation>,
    ) {
        if let SubstitutionTree::Node { label, children } = t {
            let d = children.len();
            match label {
                NodeLabel::Plus => {
                    *n_tilde *= catalan(d - 1);
                    *r_plus += d - 1;
                }
                NodeLabel::Minus => {
                    *n_tilde *= catalan(d - 1);
                    *r_minus += d - 1;
                }
                NodeLabel::Simple(p) => labels.push(p.clone()),
                NodeLabel::General(_) => unreachable!("canonical trees have no general labels"),
            }
            for c in children {
                go(c, n_tilde, r_plus, r_minus, labels);
            }
        }
    }
    go(
        ct.tree(),
        &mut n_tilde,
        &mut r_plus,
        &mut r_minus,
        &mut simple_labels,
    );
    let n_separation = if simple_labels.is_empty() {
        n_tilde.clone()
    } else {
        BigUint::from(0u32)
    };
    ExpandedTreeCount {
        n_tilde,
        n_separation,
        r_plus,
        r_minus,
        simple_labels,
    }
}

/// `db(π) = Σ (|θᵢ| − 2)` over the simple labels of the canonical tree;
/// zero exactly for separable permutations.
pub fn default_of_binarity(pi: &Permutation) -> usize {
    expanded_tree_count(pi)
        .simple_labels
        .iter()
        .map(|t| t.size() - 2)
        .sum()
}

/// All binary plane trees with `d` leaves (`Cat_{d−1}` shapes).
fn binary_shapes(d: usize) -> Vec<TreeShape> {
    if d == 1 {
        return vec![TreeShape::Leaf];
    }
    let mut out = Vec::with_capacity(catalan_u64(d - 1) as usize);
    for l in 1..d {
        for ls in binary_shapes(l) {
            for rs in binary_shapes(d - l) {
                out.push(TreeShape::Node(vec![ls.clone(), rs]));
            }
        }
    }
    out
}

/// Attaches `subtrees` at the leaves of a binary shape whose internal nodes
/// all get `label`.
fn inflate_shape(
    shape: &TreeShape,
    label: &NodeLabel,
    subtrees: &mut std::vec::IntoIter<SubstitutionTree>,
) -> SubstitutionTree {
    match shape {
        TreeShape::Leaf => subtrees
            .next()
            .expect("shape has as many leaves as subtrees"),
        TreeShape::Node(cs) => SubstitutionTree::Node {
            label: label.clone(),
            children: cs
                .iter()
                .map(|c| inflate_shape(c, label, subtrees))
                .collect(),
        },
    }
}

fn cartesian<T: Clone>(parts: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for part in parts {
        let mut next = Vec::with_capacity(out.len() * part.len());
        for prefix in &out {
            for item in part {
                let mut row = prefix.clone();
                row.push(item.clone());
                next.push(row);
            }
        }
        out = next;
    }
    out
}

/// All expanded trees of the permutation encoded by a canonical tree:
/// every linear node is inflated with every binary shape of its degree.
fn expanded_trees(t: &SubstitutionTree) -> Vec<SubstitutionTree> {
    match t {
        SubstitutionTree::Leaf => vec![SubstitutionTree::Leaf],
        SubstitutionTree::Node { label, children } => {
            let expansions: Vec<Vec<SubstitutionTree>> =
                children.iter().map(expanded_trees).collect();
            let combos = cartesian(&expansions);
            let mut out = Vec::new();
            for combo in combos {
                match label {
                    NodeLabel::Plus | NodeLabel::Minus => {
                        for shape in binary_shapes(children.len()) {
                            let mut it = combo.clone().into_iter();
                            out.push(inflate_shape(&shape, label, &mut it));
                        }
                    }
                    _ => out.push(SubstitutionTree::Node {
                        label: label.clone(),
                        children: combo,
                    }),
                }
            }
            out
        }
    }
}

/// All trees obtained from `t` by merging one internal node with one of its
/// internal children.
fn single_merges(t: &SubstitutionTree) -> Vec<SubstitutionTree> {
    let SubstitutionTree::Node { label, children } = t else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let d = children.len();
    let theta = label.as_permutation(d);
    for (i, c) in children.iter().enumerate() {
        if let SubstitutionTree::Node {
            label: cl,
            children: cc,
        } = c
        {
            // merge the root with child i: inflate position i of the root
            // label by the child's label and splice the grandchildren in
            let blocks: Vec<Permutation> = (0..d)
                .map(|j| {
                    if j == i {
                        cl.as_permutation(cc.len())
                    } else {
                        Permutation::identity(1)
                    }
                })
                .collect();
            let merged = Permutation::substitute(&theta, &blocks).expect("block count matches");
            let mut new_children = Vec::with_capacity(d - 1 + cc.len());
            new_children.extend_from_slice(&children[..i]);
            new_children.extend_from_slice(cc);
            new_children.extend_from_slice(&children[i + 1..]);
            out.push(SubstitutionTree::Node {
                label: NodeLabel::from_permutation(&merged),
                children: new_children,
            });
        }
        for m in single_merges(c) {
            let mut new_children = children.clone();
            new_children[i] = m;
            out.push(SubstitutionTree::Node {
                label: label.clone(),
                children: new_children,
            });
        }
    }
    out
}

/// All substitution trees encoding `π`, with the default size cap.
pub fn enumerate_substitution_trees(pi: &Permutation) -> Result<Vec<SubstitutionTree>, TreeError> {
    enumerate_substitution_trees_capped(pi, DEFAULT_PATTERN_CAP)
}

/// All substitution trees `t` with `perm(t) = π`: the expanded trees of `π`
/// closed under merge operations, deduplicated. Output is sorted by the text
/// encoding for determinism.
pub fn enumerate_substitution_trees_capped(
    pi: &Permutation,
    cap: usize,
) -> Result<Vec<SubstitutionTree>, TreeError> {
    if pi.size() > cap {
        return Err(TreeError::AboveCap(pi.size(), cap));
    }
    if pi.size() == 1 {
        return Ok(vec![SubstitutionTree::Leaf]);
    }
    let start = expanded_trees(canonical_tree(pi).tree());
    let mut seen: HashSet<SubstitutionTree> = HashSet::new();
    let mut queue: VecDeque<SubstitutionTree> = VecDeque::new();
    for t in start {
        if seen.insert(t.clone()) {
            queue.push_back(t);
        }
    }
    while let Some(t) = queue.pop_front() {
        for m in single_merges(&t) {
            if seen.insert(m.clone()) {
                queue.push_back(m);
            }
        }
    }
    let mut out: Vec<SubstitutionTree> = seen.into_iter().collect();
    out.sort_by_key(|t| t.to_string());
    debug_assert!(out.iter().all(|t| perm_of_tree(t) == *pi));
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum RootConstraint {
    Any,
    NotPlus,
    NotMinus,
}

/// All permutations of `⟨S⟩_n`, with the default size cap.
pub fn enumerate_class(family: &[Permutation], n: usize) -> Result<Vec<Permutation>, TreeError> {
    enumerate_class_capped(family, n, DEFAULT_CLASS_CAP)
}

/// `⟨S⟩_n` by exhaustive generation of canonical trees with `n` leaves and
/// labels in `{⊕, ⊖} ∪ S`; sorted and duplicate-free.
pub fn enumerate_class_capped(
    family: &[Permutation],
    n: usize,
    cap: usize,
) -> Result<Vec<Permutation>, TreeError> {
    for f in family {
        if !f.is_simple() {
            return Err(TreeError::FamilyMemberNotSimple(f.compact()));
        }
    }
    if n > cap {
        return Err(TreeError::AboveCap(n, cap));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut memo: HashMap<(usize, RootConstraint), Vec<SubstitutionTree>> = HashMap::new();
    let trees = gen_canonical(family, n, RootConstraint::Any, &mut memo);
    let mut out: Vec<Permutation> = trees.iter().map(perm_of_tree).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

fn gen_canonical(
    family: &[Permutation],
    n: usize,
    constraint: RootConstraint,
    memo: &mut HashMap<(usize, RootConstraint), Vec<SubstitutionTree>>,
) -> Vec<SubstitutionTree> {
    if let Some(v) = memo.get(&(n, constraint)) {
        return v.clone();
    }
    let mut out = Vec::new();
    if n == 1 {
        out.push(SubstitutionTree::Leaf);
    } else {
        if constraint != RootConstraint::NotPlus {
            for combo in labeled_sequences(family, n, 2, usize::MAX, RootConstraint::NotPlus, memo)
            {
                out.push(SubstitutionTree::Node {
                    label: NodeLabel::Plus,
                    children: combo,
                });
            }
        }
        if constraint != RootConstraint::NotMinus {
            for combo in labeled_sequences(family, n, 2, usize::MAX, RootConstraint::NotMinus, memo)
            {
                out.push(SubstitutionTree::Node {
                    label: NodeLabel::Minus,
                    children: combo,
                });
            }
        }
        for alpha in family {
            let d = alpha.size();
            if d <= n {
                for combo in labeled_sequences(family, n, d, d, RootConstraint::Any, memo) {
                    out.push(SubstitutionTree::Node {
                        label: NodeLabel::Simple(alpha.clone()),
                        children: combo,
                    });
                }
            }
        }
    }
    memo.insert((n, constraint), out.clone());
    out
}

/// All sequences of canonical trees with total `n` leaves, length in
/// `[min_len, max_len]`, each subtree under `constraint`.
fn labeled_sequences(
    family: &[Permutation],
    n: usize,
    min_len: usize,
    max_len: usize,
    constraint: RootConstraint,
    memo: &mut HashMap<(usize, RootConstraint), Vec<SubstitutionTree>>,
) -> Vec<Vec<SubstitutionTree>> {
    fn rec(
        family: &[Permutation],
        remaining: usize,
        slots_left: RangeInfo,
        constraint: RootConstraint,
        memo: &mut HashMap<(usize, RootConstraint), Vec<SubstitutionTree>>,
        acc: &mut Vec<SubstitutionTree>,
        out: &mut Vec<Vec<SubstitutionTree>>,
    ) {
        if remaining == 0 {
            if slots_left.min == 0 {
                out.push(acc.clone());
            }
            return;
        }
        if slots_left.max == 0 {
            return;
        }
        for part in 1..=remaining {
            // enough room left for at least (min-1) more parts
            let rest = remaining - part;
            let need_more = slots_left.min.saturating_sub(1);
            if rest < need_more {
                continue;
            }
            for t in gen_canonical(family, part, constraint, memo) {
                acc.push(t);
                rec(
                    family,
                    rest,
                    RangeInfo {
                        min: need_more,
                        max: slots_left.max - 1,
                    },
                    constraint,
                    memo,
                    acc,
                    out,
                );
                acc.pop();
            }
        }
    }
    #[derive(Clone, Copy)]
    struct RangeInfo {
        min: usize,
        max: usize,
    }
    let mut out = Vec::new();
    let mut acc = Vec::new();
    rec(
        family,
        n,
        RangeInfo {
            min: min_len,
            max: max_len,
        },
        constraint,
        memo,
        &mut acc,
        &mut out,
    );
    out
}

/// All plane tree shapes with `k` leaves and internal degrees ≥ 2
/// (the little Schröder numbers count them).
pub fn enumerate_shapes(k: usize) -> Vec<TreeShape> {
    fn seqs(k: usize, min_len: usize) -> Vec<Vec<TreeShape>> {
        let mut out = Vec::new();
        fn rec(
            remaining: usize,
            min_more: usize,
            acc: &mut Vec<TreeShape>,
            out: &mut Vec<Vec<TreeShape>>,
        ) {
            if remaining == 0 {
                if min_more == 0 {
                    out.push(acc.clone());
                }
                return;
            }
            for part in 1..=remaining {
                if remaining - part < min_more.saturating_sub(1) {
                    continue;
                }
                for s in enumerate_shapes(part) {
                    acc.push(s);
                    rec(remaining - part, min_more.saturating_sub(1), acc, out);
                    acc.pop();
                }
            }
        }
        rec(k, min_len, &mut Vec::new(), &mut out);
        out
    }
    if k == 1 {
        return vec![TreeShape::Leaf];
    }
    seqs(k, 2).into_iter().map(TreeShape::Node).collect()
}

/// A substitution tree with a distinguished set `V_s` of internal nodes
/// containing every nonlinear node. Nodes are addressed by preorder index
/// (counting leaves as well, root = 0).
#[derive(Clone, Debug)]
pub struct DecoratedTree {
    tree: SubstitutionTree,
    v_s: BTreeSet<usize>,
}

/// Preorder ids together with references; leaves included.
pub(crate) fn preorder_nodes(t: &SubstitutionTree) -> Vec<&SubstitutionTree> {
    let mut out = Vec::new();
    fn go<'a>(t: &'a SubstitutionTree, out: &mut Vec<&'a SubstitutionTree>) {
        out.push(t);
        if let SubstitutionTree::Node { children, .. } = t {
            for c in children {
                go(c, out);
            }
        }
    }
    go(t, &mut out);
    out
}

impl DecoratedTree {
    pub fn new(tree: SubstitutionTree, v_s: BTreeSet<usize>) -> Result<Self, TreeError> {
        tree.validate()?;
        let nodes = preorder_nodes(&tree);
        for &id in &v_s {
            match nodes.get(id) {
                Some(SubstitutionTree::Node { .. }) => {}
                _ => return Err(TreeError::DecorationNotInternal(id)),
            }
        }
        for (id, node) in nodes.iter().enumerate() {
            if let SubstitutionTree::Node { label, .. } = node {
                if !label.is_linear() && !v_s.contains(&id) {
                    return Err(TreeError::DecorationMissesNonlinear(id));
                }
            }
        }
        Ok(DecoratedTree { tree, v_s })
    }

    pub fn tree(&self) -> &SubstitutionTree {
        &self.tree
    }

    pub fn v_s(&self) -> &BTreeSet<usize> {
        &self.v_s
    }

    /// Preorder ids of the internal nodes of `tree`.
    pub fn internal_ids(tree: &SubstitutionTree) -> Vec<usize> {
        preorder_nodes(tree)
            .iter()
            .enumerate()
            .filter(|(_, n)| !n.is_leaf())
            .map(|(i, _)| i)
            .collect()
    }

    /// Preorder ids of the nonlinear internal nodes of `tree`.
    pub fn nonlinear_ids(tree: &SubstitutionTree) -> Vec<usize> {
        preorder_nodes(tree)
            .iter()
            .enumerate()
            .filter(
                |(_, n)| matches!(n, SubstitutionTree::Node { label, .. } if !label.is_linear()),
            )
            .map(|(i, _)| i)
            .collect()
    }
}

impl fmt::Display for SubstitutionTree {
    /// Text grammar: `L`, `(+ c₁ … c_d)`, `(- c₁ … c_d)`,
    /// `([p₁ … p_d] c₁ … c_d)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubstitutionTree::Leaf => write!(f, "L"),
            SubstitutionTree::Node { label, children } => {
                match label {
                    NodeLabel::Plus => write!(f, "(+")?,
                    NodeLabel::Minus => write!(f, "(-")?,
                    NodeLabel::Simple(p) | NodeLabel::General(p) => write!(f, "([{p}]")?,
                }
                for c in children {
                    write!(f, " {c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl FromStr for SubstitutionTree {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, TreeError> {
        let mut tokens = tokenize(s)?;
        tokens.reverse(); // pop from the back
        let tree = parse_tree(&mut tokens, s)?;
        if !tokens.is_empty() {
            return Err(TreeError::Parse(format!("trailing input in {s:?}")));
        }
        tree.validate()?;
        Ok(tree)
    }
}

#[derive(Debug, PartialEq)]
enum Tok {
    Open,
    Close,
    BracketOpen,
    BracketClose,
    Leaf,
    Plus,
    Minus,
    Num(u32),
}

fn tokenize(s: &str) -> Result<Vec<Tok>, TreeError> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            '(' => {
                out.push(Tok::Open);
                chars.next();
            }
            ')' => {
                out.push(Tok::Close);
                chars.next();
            }
            '[' => {
                out.push(Tok::BracketOpen);
                chars.next();
            }
            ']' => {
                out.push(Tok::BracketClose);
                chars.next();
            }
            'L' => {
                out.push(Tok::Leaf);
                chars.next();
            }
            '+' => {
                out.push(Tok::Plus);
                chars.next();
            }
            '-' => {
                out.push(Tok::Minus);
                chars.next();
            }
            c if c.is_ascii_digit() => {
                let mut v = 0u32;
                while let Some(&d) = chars.peek() {
                    if let Some(dig) = d.to_digit(10) {
                        v = v * 10 + dig;
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Tok::Num(v));
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            c => return Err(TreeError::Parse(format!("unexpected character {c:?}"))),
        }
    }
    Ok(out)
}

fn parse_tree(tokens: &mut Vec<Tok>, src: &str) -> Result<SubstitutionTree, TreeError> {
    match tokens.pop() {
        Some(Tok::Leaf) => Ok(SubstitutionTree::Leaf),
        Some(Tok::Open) => {
            let label = match tokens.pop() {
                Some(Tok::Plus) => None,
                Some(Tok::Minus) => Some(false),
                Some(Tok::BracketOpen) => {
                    let mut vals = Vec::new();
                    loop {
                        match tokens.pop() {
                            Some(Tok::Num(v)) => vals.push(v),
                            Some(Tok::BracketClose) => break,
                            _ => return Err(TreeError::Parse(format!("bad label in {src:?}"))),
                        }
                    }
                    let perm = Permutation::new(vals)?;
                    let mut children = Vec::new();
                    loop {
                        if matches!(tokens.last(), Some(Tok::Close)) {
                            tokens.pop();
                            break;
                        }
                        if tokens.is_empty() {
                            return Err(TreeError::Parse(format!("unbalanced parens in {src:?}")));
                        }
                        children.push(parse_tree(tokens, src)?);
                    }
                    // monotone labels normalize to ⊕/⊖, so the declared size
                    // must be checked against the arity before normalizing
                    if perm.size() != children.len() {
                        return Err(TreeError::ArityMismatch {
                            label: perm.size(),
                            arity: children.len(),
                        });
                    }
                    return Ok(SubstitutionTree::Node {
                        label: NodeLabel::from_permutation(&perm),
                        children,
                    });
                }
                _ => return Err(TreeError::Parse(format!("bad node head in {src:?}"))),
            };
            let mut children = Vec::new();
            loop {
                if matches!(tokens.last(), Some(Tok::Close)) {
                    tokens.pop();
                    break;
                }
                if tokens.is_empty() {
                    return Err(TreeError::Parse(format!("unbalanced parens in {src:?}")));
                }
                children.push(parse_tree(tokens, src)?);
            }
            let label = match label {
                None => NodeLabel::Plus,
                Some(false) => NodeLabel::Minus,
                Some(true) => unreachable!(),
            };
            Ok(SubstitutionTree::Node { label, children })
        }
        other => Err(TreeError::Parse(format!(
            "unexpected token {other:?} in {src:?}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::all_permutations;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn t(s: &str) -> SubstitutionTree {
        s.parse().unwrap()
    }

    #[test]
    fn perm_of_tree_base_cases() {
        assert_eq!(perm_of_tree(&SubstitutionTree::Leaf), p("1"));
        assert_eq!(perm_of_tree(&t("(- L (+ L L))")), p("312"));
        assert_eq!(perm_of_tree(&t("(+ (- L L) (- L (+ L L)))")), p("21534"));
        assert_eq!(perm_of_tree(&t("([2 4 1 3] L L L L)")), p("2413"));
        assert_eq!(perm_of_tree(&t("([2 4 1 3] (+ L L) L L L)")), p("23514"));
    }

    #[test]
    fn canonical_tree_examples() {
        assert_eq!(canonical_tree(&p("2413")).tree(), &t("([2 4 1 3] L L L L)"));
        assert_eq!(canonical_tree(&p("3412")).tree(), &t("(- (+ L L) (+ L L))"));
        assert_eq!(
            canonical_tree(&p("21534")).tree(),
            &t("(+ (- L L) (- L (+ L L)))")
        );
        assert_eq!(canonical_tree(&p("1")).tree(), &SubstitutionTree::Leaf);
    }

    #[test]
    fn canonical_round_trip_exhaustive() {
        for n in 1..=7 {
            for sigma in all_permutations(n) {
                let ct = canonical_tree(&sigma);
                assert!(CanonicalTree::new(ct.tree().clone(), None).is_ok());
                assert_eq!(
                    perm_of_tree(ct.tree()),
                    sigma,
                    "round trip failed for {sigma}"
                );
            }
        }
    }

    #[test]
    fn induced_tree_examples() {
        let tree = t("(+ (- L L) (- L (+ L L)))"); // 21534
        assert_eq!(induced_tree(&tree, &[1, 3]).unwrap(), t("(+ L L)"));
        // cross-check against the pattern
        assert_eq!(p("21534").pattern_at(&[1, 3]).unwrap(), p("12"));
        // all leaves: tree unchanged
        assert_eq!(induced_tree(&tree, &[1, 2, 3, 4, 5]).unwrap(), tree);
        // restriction of a simple label can become linear
        let simple = t("([2 4 1 3] L L L L)");
        assert_eq!(induced_tree(&simple, &[1, 2]).unwrap(), t("(+ L L)"));
        assert!(induced_tree(&simple, &[1]).is_err());
        assert!(induced_tree(&simple, &[1, 9]).is_err());
    }

    #[test]
    fn induced_commutes_with_pattern() {
        // pat_I(perm(t)) = perm(t_I) for every leaf subset I
        let trees = [
            t("(+ (- L L) (- L (+ L L)))"),
            t("([2 4 1 3] (+ L L) L (- L L) L)"),
            t("(- ([3 1 4 2] L L L L) (+ L L L))"),
        ];
        for tree in &trees {
            let sigma = perm_of_tree(tree);
            let n = tree.leaf_count();
            let sets: Vec<Vec<usize>> = (1..=n)
                .flat_map(|a| ((a + 1)..=n).map(move |b| vec![a, b]))
                .chain((1..n - 1).map(|a| vec![a, a + 1, n]))
                .collect();
            for set in sets {
                let lhs = sigma.pattern_at(&set).unwrap();
                let rhs = perm_of_tree(&induced_tree(tree, &set).unwrap());
                assert_eq!(lhs, rhs, "tree {tree}, I = {set:?}");
            }
        }
    }

    #[test]
    fn enumerate_trees_of_small_patterns() {
        assert_eq!(
            enumerate_substitution_trees(&p("12")).unwrap(),
            vec![t("(+ L L)")]
        );
        let trees = enumerate_substitution_trees(&p("123")).unwrap();
        assert_eq!(trees.len(), 3);
        assert!(trees.contains(&t("(+ L L L)")));
        assert!(trees.contains(&t("(+ (+ L L) L)")));
        assert!(trees.contains(&t("(+ L (+ L L))")));
        assert_eq!(enumerate_substitution_trees(&p("2413")).unwrap().len(), 1);
        assert!(enumerate_substitution_trees(&Permutation::identity(7)).is_err());
    }

    #[test]
    fn enumerate_trees_matches_direct_generation() {
        // independent oracle: generate all substitution trees with k leaves
        // and keep those encoding pi
        fn all_trees(k: usize) -> Vec<SubstitutionTree> {
            if k == 1 {
                return vec![SubstitutionTree::Leaf];
            }
            let mut out = Vec::new();
            fn comps(k: usize, min_parts: usize) -> Vec<Vec<usize>> {
                fn rec(
                    rem: usize,
                    min_more: usize,
                    acc: &mut Vec<usize>,
                    out: &mut Vec<Vec<usize>>,
                ) {
                    if rem == 0 {
                        if min_more == 0 {
                            out.push(acc.clone());
                        }
                        return;
                    }
                    for part in 1..=rem {
                        if rem - part < min_more.saturating_sub(1) {
                            continue;
                        }
                        acc.push(part);
                        rec(rem - part, min_more.saturating_sub(1), acc, out);
                        acc.pop();
                    }
                }
                let mut out = Vec::new();
                rec(k, min_parts, &mut Vec::new(), &mut out);
                out
            }
            for comp in comps(k, 2) {
                let d = comp.len();
                let child_sets: Vec<Vec<SubstitutionTree>> =
                    comp.iter().map(|&s| all_trees(s)).collect();
                for combo in cartesian(&child_sets) {
                    for label in all_permutations(d) {
                        out.push(SubstitutionTree::Node {
                            label: NodeLabel::from_permutation(&label),
                            children: combo.clone(),
                        });
                    }
                }
            }
            out
        }
        for k in 2..=4usize {
            let all: Vec<SubstitutionTree> = all_trees(k);
            for pi in all_permutations(k) {
                let expect: HashSet<SubstitutionTree> = all
                    .iter()
                    .filter(|t| perm_of_tree(t) == pi)
                    .cloned()
                    .collect();
                let got: HashSet<SubstitutionTree> = enumerate_substitution_trees(&pi)
                    .unwrap()
                    .into_iter()
                    .collect();
                assert_eq!(got, expect, "trees of {pi}");
            }
        }
    }

    #[test]
    fn enumerated_trees_contain_canonical() {
        for n in 1..=5usize {
            for pi in all_permutations(n) {
                let trees = enumerate_substitution_trees(&pi).unwrap();
                assert!(trees.contains(canonical_tree(&pi).tree()), "pi={pi}");
                assert!(trees.iter().all(|t| perm_of_tree(t) == pi));
            }
        }
    }

    #[test]
    fn expanded_counts() {
        let c = expanded_tree_count(&p("123"));
        assert_eq!(c.n_tilde, BigUint::from(2u32));
        assert_eq!(c.n_separation, BigUint::from(2u32));
        assert_eq!((c.r_plus, c.r_minus), (2, 0));
        assert!(c.simple_labels.is_empty());

        let c = expanded_tree_count(&p("2413"));
        assert_eq!(c.n_tilde, BigUint::from(1u32));
        assert_eq!(c.n_separation, BigUint::from(0u32));
        assert_eq!((c.r_plus, c.r_minus), (0, 0));
        assert_eq!(c.simple_labels, vec![p("2413")]);

        let c = expanded_tree_count(&p("2143"));
        assert_eq!(c.n_tilde, BigUint::from(1u32));
        assert_eq!(c.n_separation, BigUint::from(1u32));
        assert_eq!((c.r_plus, c.r_minus), (1, 2));

        let c = expanded_tree_count(&p("21534"));
        assert_eq!(c.n_tilde, BigUint::from(1u32));
    }

    #[test]
    fn r_plus_minus_match_ascent_descent_for_separable() {
        for n in 2..=8usize {
            for sigma in enumerate_class(&[], n).unwrap() {
                let c = expanded_tree_count(&sigma);
                let (asc, desc) = sigma.ascents_descents();
                assert_eq!((c.r_plus, c.r_minus), (asc, desc), "sigma={sigma}");
            }
        }
    }

    #[test]
    fn default_of_binarity_examples() {
        assert_eq!(default_of_binarity(&p("2413")), 2);
        assert_eq!(default_of_binarity(&p("24153")), 3);
        for sigma in enumerate_class(&[], 6).unwrap() {
            assert_eq!(default_of_binarity(&sigma), 0);
        }
        // nonseparable always positive
        assert!(default_of_binarity(&p("35142")) > 0);
    }

    #[test]
    fn class_enumeration_counts() {
        let expect = [1usize, 2, 6, 22, 90, 394];
        for (i, &e) in expect.iter().enumerate() {
            assert_eq!(enumerate_class(&[], i + 1).unwrap().len(), e);
        }
        let cls = enumerate_class(&[p("2413")], 4).unwrap();
        assert_eq!(cls.len(), 23);
        assert!(cls.contains(&p("2413")));
        assert!(!cls.contains(&p("3142")));
        assert_eq!(
            enumerate_class(&[p("2413"), p("3142")], 4).unwrap().len(),
            24
        );
        assert_eq!(
            enumerate_class(&[p("2413"), p("3142")], 5).unwrap().len(),
            114
        );
        assert!(enumerate_class(&[p("123")], 4).is_err());
        assert!(enumerate_class(&[], 40).is_err());
    }

    #[test]
    fn class_enumeration_size_3_is_everything() {
        let cls = enumerate_class(&[], 3).unwrap();
        assert_eq!(cls, all_permutations(3));
    }

    #[test]
    fn shapes_counted_by_super_catalan() {
        let expect = [1usize, 1, 3, 11, 45, 197];
        for (i, &e) in expect.iter().enumerate() {
            assert_eq!(enumerate_shapes(i + 1).len(), e);
        }
    }

    #[test]
    fn tree_text_round_trip() {
        for s in [
            "L",
            "(+ L L)",
            "(- (+ L L) ([2 4 1 3] L L L L))",
            "(+ L L L L)",
        ] {
            let tree = t(s);
            assert_eq!(tree.to_string(), s);
        }
        assert!("(+ L)".parse::<SubstitutionTree>().is_err());
        assert!("(+ L L".parse::<SubstitutionTree>().is_err());
        assert!("([1 2 3] L L)".parse::<SubstitutionTree>().is_err());
    }

    #[test]
    fn decorated_tree_validation() {
        let tree = t("(+ ([2 4 1 3] L L L L) L)");
        // preorder ids: 0 = root, 1 = simple node, 2..=5 leaves, 6 leaf
        let ok = DecoratedTree::new(tree.clone(), BTreeSet::from([0, 1]));
        assert!(ok.is_ok());
        let ok = DecoratedTree::new(tree.clone(), BTreeSet::from([1]));
        assert!(ok.is_ok());
        assert!(matches!(
            DecoratedTree::new(tree.clone(), BTreeSet::new()),
            Err(TreeError::DecorationMissesNonlinear(1))
        ));
        assert!(matches!(
            DecoratedTree::new(tree, BTreeSet::from([1, 2])),
            Err(TreeError::DecorationNotInternal(2))
        ));
    }

    #[test]
    fn perm_of_tree_deep_tree_no_overflow() {
        // left caterpillar with 60k leaves encodes the identity
        let mut tree = SubstitutionTree::Leaf;
        for _ in 0..60_000 {
            tree = SubstitutionTree::Node {
                label: NodeLabel::Plus,
                children: vec![tree, SubstitutionTree::Leaf],
            };
        }
        let sigma = perm_of_tree(&tree);
        assert_eq!(sigma, Permutation::identity(60_001));
    }
}
