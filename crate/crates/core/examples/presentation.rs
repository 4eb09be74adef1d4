//! Emits the finite presentation of a group and evaluates every relator in it.
//!
//!     cargo run --example presentation -- 7 6 5

use maxclass::group::MaxClassGroup;

fn main() {
    let args: Vec<usize> = std::env::args().skip(1).map(|s| s.parse().expect("integer")).collect();
    let (p, n, m) = (*args.first().unwrap_or(&7) as u32, *args.get(1).unwrap_or(&6), *args.get(2).unwrap_or(&5));
    let g = MaxClassGroup::canonical(p, n, m).expect("5 <= p, m <= n <= 2m - 2");
    let pres = g.emit_presentation().unwrap();
    print!("{}", pres.to_text());
    let (powers, conj, comm) = pres.census();
    println!("census {powers} + {conj} + {comm}");
    for w in pres.relators() {
        assert_eq!(g.evaluate(w), g.identity(), "relator {w}");
    }
    println!("every relator evaluates to the identity");
}
