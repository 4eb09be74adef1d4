//! Schur and Bogomolov multipliers straight from multiplication tables, through the
//! bar complex. Small permutation groups, the maximal-class groups of order 81, and a
//! model group whose answer is compared with the exterior-square pipeline.
//!
//!     cargo run --release --example homology_oracle

use maxclass::group::{maximal_class_order_81, MaxClassGroup};
use maxclass::homology::{b0_oracle_with, FiniteGroupTable, OracleOptions};
use maxclass::multiplier::b0_coinvariants;
use maxclass::verify::p3_groups;

fn show(name: &str, t: &FiniteGroupTable) {
    let r = b0_oracle_with(t, &OracleOptions::default()).expect("small group");
    println!(
        "{name:<22} order {:>3}  H2 = {:<8} B0 = {:<6} ({} relations, {:.2?})",
        r.order, r.schur.to_string(), r.b0.to_string(), r.relations, r.elapsed
    );
}

fn main() {
    let s4 = FiniteGroupTable::from_permutations(&[vec![1, 0, 2, 3], vec![1, 2, 3, 0]]).unwrap();
    show("S4", &s4);
    show("C4 x C4", &FiniteGroupTable::abelian(&[4, 4]));
    show("C2 x C2 x C2", &FiniteGroupTable::abelian(&[2, 2, 2]));
    for (i, t) in maximal_class_order_81().iter().enumerate() {
        show(&format!("maximal class 81 #{i}"), t);
    }

    let g: MaxClassGroup = p3_groups(&[4]).into_iter().next().expect("one group of order 81");
    let t = g.to_multiplication_table().unwrap();
    let oracle = b0_oracle_with(&t, &OracleOptions::default()).unwrap();
    let pipeline = b0_coinvariants(&g).unwrap();
    println!("model group of order 81: oracle {}, coinvariants {}", oracle.b0, pipeline.invariants);
    assert_eq!(oracle.b0, pipeline.invariants);
}
