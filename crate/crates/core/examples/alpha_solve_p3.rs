//! For p = 3 there is no canonical commutator map, so the admissible ones are solved
//! for. A surjective map of order 3^5 gives a group with multiplier C3.
//!
//!     cargo run --example alpha_solve_p3

use maxclass::cyclotomic::alpha_solve;
use maxclass::group::MaxClassGroup;
use maxclass::multiplier::b0_coinvariants;

fn main() {
    let (p, m, n) = (3, 4, 5);
    let sols = alpha_solve(p, m, n).expect("valid parameters");
    println!("admissible maps for (p, m, n) = ({p}, {m}, {n}): {} in total", sols.count());
    for alpha in sols.enumerate(100).unwrap() {
        let kind = if alpha.is_zero() {
            "zero"
        } else if alpha.is_surjective() {
            "surjective"
        } else {
            "proper image"
        };
        match MaxClassGroup::new(p, n, m, alpha) {
            Ok(g) => {
                let b0 = b0_coinvariants(&g).map(|r| r.invariants.to_string());
                println!("  {kind:<12} B0 = {}", b0.unwrap_or_else(|e| format!("n/a ({e})")));
            }
            Err(e) => println!("  {kind:<12} not of maximal class: {e}"),
        }
    }
}
