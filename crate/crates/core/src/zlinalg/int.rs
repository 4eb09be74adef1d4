use dashu_int::ops::{DivEuclid, ExtendedGcd};
use dashu_int::IBig;

pub type Int = IBig;

/// `(g, s, t)` with `g = gcd(a, b) >= 0` and `g = s*a + t*b`.
pub fn xgcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    let (g, s, t) = a.gcd_ext(b);
    (Int::from(g), s, t)
}

pub fn int_abs(a: &Int) -> Int {
    if a.signum() < Int::ZERO {
        -a
    } else {
        a.clone()
    }
}

pub fn is_negative(a: &Int) -> bool {
    a.signum() < Int::ZERO
}

pub fn is_unit(a: &Int) -> bool {
    a.is_one() || *a == Int::NEG_ONE
}

/// Floor division `a / b` (rounds towards negative infinity for positive `b`).
pub fn div_floor(a: &Int, b: &Int) -> Int {
    a.div_euclid(b)
}

/// Converts to `u64`, panicking on overflow; used for reporting small group orders.
pub fn to_u64(a: &Int) -> u64 {
    u64::try_from(a).expect("integer does not fit in u64")
}

pub fn to_i64(a: &Int) -> i64 {
    i64::try_from(a).expect("integer does not fit in i64")
}

/// Remainder in `[0, |b|)`.
pub fn rem_floor(a: &Int, b: &Int) -> Int {
    a - div_floor(a, b) * b
}
