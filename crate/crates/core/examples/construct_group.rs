//! Builds a group of maximal class from the canonical commutator map and reports its
//! structure: the lower central series, the degree of commutativity and centralizers.
//!
//!     cargo run --example construct_group -- 5 7 5

use maxclass::group::MaxClassGroup;

fn main() {
    let args: Vec<usize> = std::env::args().skip(1).map(|s| s.parse().expect("integer")).collect();
    let (p, n, m) = (*args.first().unwrap_or(&5) as u32, *args.get(1).unwrap_or(&7), *args.get(2).unwrap_or(&5));
    let g = MaxClassGroup::canonical(p, n, m).expect("5 <= p, m <= n <= 2m - 2");
    g.verify_maximal_class().expect("maximal class");

    println!("order {p}^{n}, P1 of class {}, degree of commutativity {}", g.p1_class(), g.degree_of_commutativity());
    for (i, h) in g.gamma_series().iter().enumerate() {
        println!("gamma_{}  order {p}^{}", i + 1, h.order_exponent(&g));
    }
    println!("[P1, P1] = P_{}", g.derived_level().unwrap());
    println!("center has order {p}^{}", g.center().order_exponent(&g));

    for i in 1..n.min(4) {
        let x = g.s_i(i);
        let c = g.centralizer_formula(&x, i).unwrap();
        assert_eq!(c, g.centralizer_brute(&x, i).unwrap());
        println!("C_(P_{i})(s_{i}) has order {p}^{}", c.order_exponent(&g));
    }
    println!("commuting-pair condition on P1: {}", g.theorem1_predicate());
}
