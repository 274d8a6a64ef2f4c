//! Substitution trees: the canonical decomposition, induced trees, the
//! expanded-tree counts and exhaustive enumeration of all trees of a
//! pattern.
//!
//! Run with `cargo run --example decompose_trees`.

use permclass::perm::Permutation;
use permclass::tree::{
    canonical_tree, default_of_binarity, enumerate_substitution_trees, expanded_tree_count,
    induced_tree, perm_of_tree,
};

fn main() {
    for s in ["21534", "3412", "2413", "634512789"] {
        let sigma: Permutation = s.parse().unwrap();
        let tree = canonical_tree(&sigma);
        println!("{sigma}  ->  {}", tree.tree());
    }

    // the tree text format round-trips
    let tree: permclass::tree::SubstitutionTree =
        "(- (+ L L) ([2 4 1 3] L L L L))".parse().unwrap();
    println!("\nparsed tree encodes {}", perm_of_tree(&tree));

    // induced trees restrict labels to children with marked descendants
    let sigma: Permutation = "21534".parse().unwrap();
    let t = canonical_tree(&sigma).into_tree();
    let sub = induced_tree(&t, &[1, 3, 5]).unwrap();
    println!("tree induced by leaves {{1,3,5}}: {sub}");
    println!(
        "perm(t_I) = {} = pat_I(perm(t)) = {}",
        perm_of_tree(&sub),
        sigma.pattern_at(&[1, 3, 5]).unwrap()
    );

    // every substitution tree of a pattern, from expanded trees + merges
    for s in ["123", "132", "2413", "2143"] {
        let pi: Permutation = s.parse().unwrap();
        let trees = enumerate_substitution_trees(&pi).unwrap();
        println!("\nsubstitution trees of {pi} ({}):", trees.len());
        for t in &trees {
            println!("  {t}");
        }
    }

    // expanded-tree counts drive both the limit law and the decay exponent
    for s in ["123", "2143", "2413", "24153"] {
        let pi: Permutation = s.parse().unwrap();
        let c = expanded_tree_count(&pi);
        println!(
            "{pi}: N~ = {}, N = {}, r+ = {}, r- = {}, db = {}",
            c.n_tilde,
            c.n_separation,
            c.r_plus,
            c.r_minus,
            default_of_binarity(&pi)
        );
    }
}
