//! Arithmetic in `O/p^j` through kappa-adic digits, checked against the polynomial model.
//!
//!     cargo run --example cyclotomic_arithmetic -- 5 4

use maxclass::cyclotomic::reference::PolyModel;
use maxclass::cyclotomic::CycRing;

fn main() {
    let args: Vec<usize> = std::env::args().skip(1).map(|s| s.parse().expect("integer")).collect();
    let p = *args.first().unwrap_or(&5) as u32;
    let j = *args.get(1).unwrap_or(&4);
    let ring = CycRing::new(p, j).expect("p prime, j >= 1");
    let model = PolyModel::new(p, j);

    println!("O/p^{j} for p = {p}: {} elements", (p as u128).pow(j as u32));
    let theta = ring.theta_power(1);
    println!("theta        = {:?}", theta.digits());
    println!("p            = {:?}  (valuation {})", ring.from_int(p as i64).digits(), ring.valuation(&ring.from_int(p as i64)));

    let x = ring.from_digits((0..j as u32).map(|i| (i + 1) % p).collect()).unwrap();
    let y = ring.kappa_pow(1);
    let xy = ring.mul(&x, &y).unwrap();
    let sx = ring.sigma(&x, 2).unwrap();
    println!("x            = {:?}", x.digits());
    println!("x * kappa    = {:?}", xy.digits());
    println!("theta^2 * x  = {:?}", ring.theta_pow(&x, 2).unwrap().digits());
    println!("sigma_2(x)   = {:?}", sx.digits());

    let via_model = model.mul(&model.from_cyc(&x), &model.from_cyc(&y));
    assert_eq!(model.to_cyc(&ring, &via_model), xy);
    let sigma_model = model.sigma(&model.from_cyc(&x), 2);
    assert_eq!(model.to_cyc(&ring, &sigma_model), sx);
    println!("polynomial model agrees on the product and on sigma_2");
}
