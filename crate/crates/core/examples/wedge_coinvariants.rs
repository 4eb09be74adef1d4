//! The exterior square of `O/p^j` and its coinvariants under `theta`, which is where the
//! multiplier lives. Prints the staircase of orders.
//!
//!     cargo run --release --example wedge_coinvariants -- 5 8

use maxclass::multiplier::{wedge_coinvariants, wedge_square};

fn main() {
    let args: Vec<usize> = std::env::args().skip(1).map(|s| s.parse().expect("integer")).collect();
    let p = *args.first().unwrap_or(&5) as u32;
    let top = *args.get(1).unwrap_or(&8);
    for j in 1..=top {
        let w = wedge_square(p, j).expect("valid parameters");
        let c = wedge_coinvariants(p, j).unwrap();
        println!(
            "j = {j}: L^2 has {} generators and invariants {}, coinvariants {} of order {}",
            w.dim(),
            w.invariants(),
            c,
            c.torsion_order()
        );
    }
}
