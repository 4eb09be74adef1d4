//! Printed closed formula against the exterior-square computation over a grid.
//!
//!     cargo run --release --example formula_grid -- 5 4 8

use maxclass::multiplier::{bounds_check, reconcile, theorem3_formula, wedge_coinvariants};

fn main() {
    let args: Vec<usize> = std::env::args().skip(1).map(|s| s.parse().expect("integer")).collect();
    let p = *args.first().unwrap_or(&5) as u32;
    let (lo, hi) = (*args.get(1).unwrap_or(&4), *args.get(2).unwrap_or(&8));

    println!("j  |wedge coinvariants(p, j)|");
    for j in 1..=hi {
        let w = wedge_coinvariants(p, j).expect("valid parameters");
        println!("{j:<2} {w}  (order {})", w.torsion_order());
    }
    println!();
    println!("{:>2} {:>2} {:>2} {:>2} {:>12} {:>12} agree", "m", "n", "x", "y", "printed", "computed");
    for m in lo..=hi {
        for n in m + 1..=2 * m - 2 {
            let r = reconcile(p, m, n).expect("valid parameters");
            let report = theorem3_formula(p, m, n).unwrap();
            assert!(bounds_check(&report));
            let mut note = String::new();
            if let Some((prev, printed)) = &r.monotonicity_witness {
                note = format!("  printed order {printed} < {prev} one step down");
            }
            println!(
                "{m:>2} {n:>2} {:>2} {:>2} {:>12} {:>12} {}{note}",
                r.x,
                r.y,
                r.formula.to_string(),
                r.computed.to_string(),
                r.agree
            );
        }
    }
}
