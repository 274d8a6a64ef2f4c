//! Permutations, patterns and occurrence counting.
//!
//! Permutations are written in one-line notation `σ(1)…σ(n)` and values are
//! 1-based throughout. All values are immutable after construction.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("a permutation must have size at least 1")]
    Empty,
    #[error("values are not a permutation of 1..={0}")]
    NotAPermutation(usize),
    #[error("index {0} out of range 1..={1}")]
    IndexOutOfRange(usize, usize),
    #[error("index set must be nonempty and strictly increasing")]
    BadIndexSet,
    #[error("pattern larger than host permutation ({pattern} > {host})")]
    PatternTooLarge { pattern: usize, host: usize },
    #[error("substitution expects {expected} blocks, got {got}")]
    BlockCountMismatch { expected: usize, got: usize },
    #[error("cannot parse permutation from {0:?}")]
    Parse(String),
}

/// A permutation of `{1, …, n}` in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    values: Vec<u32>,
}

impl Permutation {
    /// Builds a permutation from one-line notation, checking that `values`
    /// contains each of `1..=n` exactly once.
    pub fn new(values: Vec<u32>) -> Result<Self, PermError> {
        if values.is_empty() {
            return Err(PermError::Empty);
        }
        let n = values.len();
        let mut seen = vec![false; n];
        for &v in &values {
            let v = v as usize;
            if v == 0 || v > n || seen[v - 1] {
                return Err(PermError::NotAPermutation(n));
            }
            seen[v - 1] = true;
        }
        Ok(Self { values })
    }

    /// The identity `12…n`.
    pub fn identity(n: usize) -> Self {
        assert!(n >= 1);
        Self {
            values: (1..=n as u32).collect(),
        }
    }

    /// The decreasing permutation `n…21`.
    pub fn decreasing(n: usize) -> Self {
        assert!(n >= 1);
        Self {
            values: (1..=n as u32).rev().collect(),
        }
    }

    /// The standardization (rank pattern) of a sequence of distinct values.
    pub fn pattern_of_values(vals: &[u32]) -> Self {
        debug_assert!(!vals.is_empty());
        let mut idx: Vec<usize> = (0..vals.len()).collect();
        idx.sort_by_key(|&i| vals[i]);
        let mut out = vec![0u32; vals.len()];
        for (rank, &i) in idx.iter().enumerate() {
            out[i] = rank as u32 + 1;
        }
        Self { values: out }
    }

    pub fn size(&self) -> usize {
        self.values.len()
    }

    /// One-line notation, 1-based values.
    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// `σ(i)` for a 1-based position `i`.
    pub fn at(&self, i: usize) -> u32 {
        self.values[i - 1]
    }

    /// `pat_I(σ)`: the pattern induced by the positions in `I`
    /// (1-based, strictly increasing).
    pub fn pattern_at(&self, indices: &[usize]) -> Result<Permutation, PermError> {
        if indices.is_empty() {
            return Err(PermError::BadIndexSet);
        }
        let n = self.size();
        let mut vals = Vec::with_capacity(indices.len());
        let mut prev = 0usize;
        for &i in indices {
            if i == 0 || i > n {
                return Err(PermError::IndexOutOfRange(i, n));
            }
            if i <= prev {
                return Err(PermError::BadIndexSet);
            }
            prev = i;
            vals.push(self.values[i - 1]);
        }
        Ok(Self::pattern_of_values(&vals))
    }

    /// `occ(π, σ)`: the number of index subsets of `σ` inducing the pattern
    /// `π`. Plain enumeration of all `C(n,k)` subsets; intended for small `k`.
    pub fn occ_count(pattern: &Permutation, sigma: &Permutation) -> u64 {
        let k = pattern.size();
        let n = sigma.size();
        if k > n {
            return 0;
        }
        let mut count = 0u64;
        let mut chosen: Vec<u32> = Vec::with_capacity(k);
        occ_rec(pattern, &sigma.values, 0, &mut chosen, &mut count);
        count
    }

    /// `occ-tilde(π, σ) = occ(π, σ) / C(n, k)`, exact.
    pub fn occ_density(
        pattern: &Permutation,
        sigma: &Permutation,
    ) -> Result<BigRational, PermError> {
        let k = pattern.size();
        let n = sigma.size();
        if k > n {
            return Err(PermError::PatternTooLarge {
                pattern: k,
                host: n,
            });
        }
        let num = BigInt::from(Self::occ_count(pattern, sigma));
        let den = binomial(BigInt::from(n), BigInt::from(k));
        Ok(BigRational::new(num, den))
    }

    /// The substitution `θ[π⁽¹⁾, …, π⁽ᵈ⁾]`: each entry of the skeleton is
    /// inflated into a block isomorphic to the corresponding permutation.
    #[allow(clippy::needless_range_loop)] // offsets are indexed by block position
    pub fn substitute(
        theta: &Permutation,
        blocks: &[Permutation],
    ) -> Result<Permutation, PermError> {
        let d = theta.size();
        if blocks.len() != d {
            return Err(PermError::BlockCountMismatch {
                expected: d,
                got: blocks.len(),
            });
        }
        let sizes: Vec<u32> = blocks.iter().map(|b| b.size() as u32).collect();
        // block i spans values starting after all blocks with a smaller skeleton value
        let mut value_offset = vec![0u32; d];
        for i in 0..d {
            let mut off = 0;
            for j in 0..d {
                if theta.values[j] < theta.values[i] {
                    off += sizes[j];
                }
            }
            value_offset[i] = off;
        }
        let mut out = Vec::with_capacity(sizes.iter().sum::<u32>() as usize);
        for (i, block) in blocks.iter().enumerate() {
            for &v in &block.values {
                out.push(value_offset[i] + v);
            }
        }
        Ok(Permutation { values: out })
    }

    /// Whether `σ` maps no nontrivial interval of positions onto an interval
    /// of values. Sizes 1 and 2 are not considered simple.
    pub fn is_simple(&self) -> bool {
        let n = self.size();
        if n <= 2 {
            return false;
        }
        for i in 0..n {
            let mut mn = self.values[i];
            let mut mx = self.values[i];
            for j in i + 1..n {
                mn = mn.min(self.values[j]);
                mx = mx.max(self.values[j]);
                let w = j - i + 1;
                if w < n && (mx - mn) as usize == j - i {
                    return false;
                }
            }
        }
        true
    }

    /// `(r₊, r₋)`: the numbers of ascents and descents.
    pub fn ascents_descents(&self) -> (usize, usize) {
        let asc = self.values.windows(2).filter(|w| w[0] < w[1]).count();
        (asc, self.size() - 1 - asc)
    }

    pub fn reverse(&self) -> Permutation {
        Permutation {
            values: self.values.iter().rev().copied().collect(),
        }
    }

    pub fn complement(&self) -> Permutation {
        let n = self.size() as u32;
        Permutation {
            values: self.values.iter().map(|&v| n + 1 - v).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut out = vec![0u32; self.size()];
        for (i, &v) in self.values.iter().enumerate() {
            out[v as usize - 1] = i as u32 + 1;
        }
        Permutation { values: out }
    }

    pub fn is_increasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_decreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] > w[1])
    }

    /// Compact digit form `2413` when `n ≤ 9`, otherwise space-separated.
    pub fn compact(&self) -> String {
        if self.size() <= 9 {
            self.values.iter().map(|v| v.to_string()).collect()
        } else {
            self.to_string()
        }
    }
}

fn occ_rec(
    pattern: &Permutation,
    sigma: &[u32],
    start: usize,
    chosen: &mut Vec<u32>,
    count: &mut u64,
) {
    let k = pattern.size();
    if chosen.len() == k {
        if Permutation::pattern_of_values(chosen).values == pattern.values {
            *count += 1;
        }
        return;
    }
    let remaining = k - chosen.len();
    // positions left must suffice
    for i in start..=sigma.len().saturating_sub(remaining) {
        chosen.push(sigma[i]);
        occ_rec(pattern, sigma, i + 1, chosen, count);
        chosen.pop();
    }
}

/// All permutations of size `k` in lexicographic order.
pub fn all_permutations(k: usize) -> Vec<Permutation> {
    assert!(k >= 1);
    let mut out = Vec::new();
    let mut current: Vec<u32> = (1..=k as u32).collect();
    loop {
        out.push(Permutation {
            values: current.clone(),
        });
        // next lexicographic permutation
        let Some(i) = (0..k - 1).rev().find(|&i| current[i] < current[i + 1]) else {
            break;
        };
        let j = (i + 1..k).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
    }
    out
}

impl fmt::Display for Permutation {
    /// Space-separated one-line notation, e.g. `2 4 1 3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({})", self.compact())
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    /// Accepts space-separated decimal values (`2 4 1 3`) or, for sizes up to
    /// 9, a contiguous digit string (`2413`).
    fn from_str(s: &str) -> Result<Self, PermError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(PermError::Parse(s.to_string()));
        }
        let vals: Vec<u32> = if s.contains(char::is_whitespace) {
            s.split_whitespace()
                .map(|t| {
                    t.parse::<u32>()
                        .map_err(|_| PermError::Parse(s.to_string()))
                })
                .collect::<Result<_, _>>()?
        } else if s.chars().all(|c| c.is_ascii_digit()) && s.len() <= 9 {
            s.chars().map(|c| c.to_digit(10).unwrap()).collect()
        } else {
            return Err(PermError::Parse(s.to_string()));
        };
        Permutation::new(vals).map_err(|_| PermError::Parse(s.to_string()))
    }
}

/// Parses a comma-separated 1-based index set, e.g. `2,5,7`.
pub fn parse_index_set(s: &str) -> Result<Vec<usize>, PermError> {
    let out: Result<Vec<usize>, _> = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| PermError::Parse(s.to_string()))
        })
        .collect();
    let out = out?;
    if out.is_empty() || out.windows(2).any(|w| w[0] >= w[1]) {
        return Err(PermError::BadIndexSet);
    }
    Ok(out)
}
