//! Counting a substitution-closed class two ways: brute-force generation of
//! canonical trees versus the generating-function recurrence. The two must
//! agree exactly.
//!
//! Run with `cargo run --example enumerate_class`.

use permclass::perm::Permutation;
use permclass::series::{s_polynomial, solve_t_notplus, t_from_t_notplus, ClassSeries};
use permclass::tree::enumerate_class;

fn main() {
    let families: Vec<(&str, Vec<Permutation>)> = vec![
        ("separable (S = ∅)", vec![]),
        ("S = {2413}", vec!["2413".parse().unwrap()]),
        (
            "S = {2413, 3142}",
            vec!["2413".parse().unwrap(), "3142".parse().unwrap()],
        ),
    ];
    for (name, family) in &families {
        println!("{name}:");
        let cs = ClassSeries::new(family, 10).unwrap();
        print!("  counts [z^n]T:      ");
        for n in 1..=10 {
            print!("{} ", cs.count(n).unwrap());
        }
        println!();
        print!("  brute-force |<S>_n|: ");
        for n in 1..=8 {
            print!("{} ", enumerate_class(family, n).unwrap().len());
        }
        println!("(n ≤ 8)\n");
    }

    // the intermediate series T_not⊕ and its defining recurrence
    let s = s_polynomial(&families[2].1, 8).unwrap();
    let t_np = solve_t_notplus(&s, 8);
    println!("T_not⊕ for S = {{2413, 3142}}: {t_np}");
    println!("T       = {}", t_from_t_notplus(&t_np).unwrap());

    // a few small members of <{2413}>
    let members = enumerate_class(&families[1].1, 4).unwrap();
    println!(
        "\n<{{2413}}>_4 has {} members (22 separable + 2413 itself):",
        members.len()
    );
    for m in &members {
        print!("{} ", m.compact());
    }
    println!();
}
