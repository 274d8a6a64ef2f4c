//! Property-based invariants over random permutations, trees and series.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use permclass::perm::{all_permutations, Permutation};
use permclass::series::TruncatedSeries;
use permclass::tree::{canonical_tree, induced_tree, perm_of_tree, CanonicalTree};

fn arb_permutation(max_n: usize) -> impl Strategy<Value = Permutation> {
    (1..=max_n).prop_flat_map(|n| {
        Just(n).prop_perturb(move |n, mut rng| {
            let mut vals: Vec<u32> = (1..=n as u32).collect();
            for i in (1..n).rev() {
                let j = rng.random_range(0..=i);
                vals.swap(i, j);
            }
            Permutation::new(vals).unwrap()
        })
    })
}

fn arb_index_set(n: usize, k: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((n, k)).prop_perturb(|(n, k), mut rng| {
        let mut idx: Vec<usize> = (1..=n).collect();
        for i in 0..k.min(n) {
            let j = i + rng.random_range(0..n - i);
            idx.swap(i, j);
        }
        let mut set = idx[..k.min(n)].to_vec();
        set.sort_unstable();
        set
    })
}

proptest! {
    #[test]
    fn pattern_at_is_wellformed(sigma in arb_permutation(12), k in 1usize..=4) {
        let n = sigma.size();
        let k = k.min(n);
        let set = arb_index_set(n, k);
        proptest!(|(idx in set)| {
            let pat = sigma.pattern_at(&idx).unwrap();
            prop_assert_eq!(pat.size(), idx.len());
        });
    }

    #[test]
    fn occ_respects_symmetries(sigma in arb_permutation(10), pi in arb_permutation(3)) {
        let direct = Permutation::occ_count(&pi, &sigma);
        prop_assert_eq!(direct, Permutation::occ_count(&pi.reverse(), &sigma.reverse()));
        prop_assert_eq!(direct, Permutation::occ_count(&pi.complement(), &sigma.complement()));
        prop_assert_eq!(direct, Permutation::occ_count(&pi.inverse(), &sigma.inverse()));
    }

    #[test]
    fn occ_counts_partition_subsets(sigma in arb_permutation(10), k in 1usize..=3) {
        prop_assume!(k <= sigma.size());
        let n = sigma.size() as u64;
        let total: u64 = all_permutations(k)
            .iter()
            .map(|pi| Permutation::occ_count(pi, &sigma))
            .sum();
        let choose: u64 = (1..=k as u64).fold(1, |acc, i| acc * (n - i + 1) / i);
        prop_assert_eq!(total, choose);
    }

    #[test]
    fn simplicity_invariant_under_symmetries(sigma in arb_permutation(9)) {
        let s = sigma.is_simple();
        prop_assert_eq!(s, sigma.reverse().is_simple());
        prop_assert_eq!(s, sigma.complement().is_simple());
        prop_assert_eq!(s, sigma.inverse().is_simple());
    }

    #[test]
    fn substitution_blocks_recoverable(
        theta in arb_permutation(4),
        sizes in proptest::collection::vec(1usize..=3, 1..=4),
    ) {
        prop_assume!(sizes.len() == theta.size());
        // blocks of identity/decreasing runs are easy to build and verify
        let blocks: Vec<Permutation> = sizes
            .iter()
            .enumerate()
            .map(|(i, &s)| if i % 2 == 0 { Permutation::identity(s) } else { Permutation::decreasing(s) })
            .collect();
        let combined = Permutation::substitute(&theta, &blocks).unwrap();
        prop_assert_eq!(combined.size(), sizes.iter().sum::<usize>());
        // positions of block i recover block i as a pattern
        let mut offset = 0usize;
        for block in &blocks {
            let idx: Vec<usize> = (offset + 1..=offset + block.size()).collect();
            prop_assert_eq!(&combined.pattern_at(&idx).unwrap(), block);
            offset += block.size();
        }
    }

    #[test]
    fn canonical_round_trip_randomized(sigma in arb_permutation(10)) {
        let ct = canonical_tree(&sigma);
        prop_assert!(CanonicalTree::new(ct.tree().clone(), None).is_ok());
        prop_assert_eq!(perm_of_tree(ct.tree()), sigma);
    }

    #[test]
    fn induced_tree_commutes_with_patterns(sigma in arb_permutation(10), k in 2usize..=4) {
        prop_assume!(k <= sigma.size());
        let tree = canonical_tree(&sigma).into_tree();
        let set = arb_index_set(sigma.size(), k);
        proptest!(|(idx in set)| {
            prop_assume!(idx.len() >= 2);
            let induced = induced_tree(&tree, &idx).unwrap();
            prop_assert_eq!(perm_of_tree(&induced), sigma.pattern_at(&idx).unwrap());
        });
    }

    #[test]
    fn series_ring_identities(
        a in proptest::collection::vec(-9i64..=9, 6..=6),
        b in proptest::collection::vec(-9i64..=9, 6..=6),
        c in proptest::collection::vec(-9i64..=9, 6..=6),
    ) {
        let mk = |v: &[i64]| TruncatedSeries::new(
            v.iter().map(|&x| BigRational::from(BigInt::from(x))).collect());
        let (a, b, c) = (mk(&a), mk(&b), mk(&c));
        // distributivity and commutativity
        prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        // reciprocal_one_minus(f) · (1 − f) = 1 for f with f(0) = 0
        let mut f = a.clone();
        let f_coeffs: Vec<BigRational> = std::iter::once(BigRational::from(BigInt::from(0)))
            .chain(f.coeffs()[1..].iter().cloned())
            .collect();
        f = TruncatedSeries::new(f_coeffs);
        let geom = f.reciprocal_one_minus().unwrap();
        let one_minus = TruncatedSeries::one(f.order()).sub(&f);
        prop_assert_eq!(geom.mul(&one_minus), TruncatedSeries::one(f.order()));
    }

    #[test]
    fn derivative_of_product(
        a in proptest::collection::vec(-5i64..=5, 5..=5),
        b in proptest::collection::vec(-5i64..=5, 5..=5),
    ) {
        let mk = |v: &[i64]| TruncatedSeries::new(
            v.iter().map(|&x| BigRational::from(BigInt::from(x))).collect());
        let (a, b) = (mk(&a), mk(&b));
        let lhs = a.mul(&b).derivative();
        let rhs = a.derivative().mul(&b.truncate(3)).add(&a.truncate(3).mul(&b.derivative()));
        prop_assert_eq!(lhs.truncate(3), rhs.truncate(3));
    }
}
