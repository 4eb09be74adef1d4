use std::time::Instant;

use crate::cyclotomic::{check_parameters, choose_a};
use crate::zlinalg::{AbelianInvariants, Int};

use super::{wedge_coinvariants, B0Report, Method, MultiplierError};

/// `j = x (p - 1) + y` with `0 <= y < p - 1`.
pub fn decompose(p: u32, j: usize) -> (usize, usize) {
    let q = p as usize - 1;
    (j / q, j % q)
}

fn pow(p: u32, e: usize) -> u64 {
    (p as u64).pow(e as u32)
}

/// The closed formula exactly as typeset: `floor(y/2)` copies of `C_{p^(x+1)}` and
/// `floor((p-1-y)/2)` copies of `C_{p^x}`.
pub fn theorem3_formula(p: u32, m: usize, n: usize) -> Result<B0Report, MultiplierError> {
    let start = Instant::now();
    if p < 5 {
        return Err(MultiplierError::BadParameters(format!("the closed formula needs p >= 5, got {p}")));
    }
    check_parameters(p, m, n).map_err(|e| MultiplierError::BadParameters(e.to_string()))?;
    let (x, y) = decompose(p, n - m + 1);
    let big = std::iter::repeat(pow(p, x + 1)).take(y / 2);
    let small = std::iter::repeat(pow(p, x)).take((p as usize - 1 - y) / 2);
    Ok(B0Report {
        p,
        n,
        m,
        derived_m: m,
        a: choose_a(p).ok().map(|(_, a)| a),
        method: Method::Formula,
        invariants: AbelianInvariants::from_torsion(big.chain(small)),
        strategies: Vec::new(),
        elapsed: start.elapsed(),
    })
}

/// Printed formula against the exterior-square computation for one `(p, m, n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reconciliation {
    pub p: u32,
    pub m: usize,
    pub n: usize,
    pub x: usize,
    pub y: usize,
    pub formula: AbelianInvariants,
    pub computed: AbelianInvariants,
    pub agree: bool,
    /// `|computed(j)| >= |computed(j-1)|`.
    pub computed_monotone: bool,
    /// `|computed(j)| = p |computed(j-2)|`.
    pub computed_staircase: bool,
    /// For `y = 0`: computed value is homocyclic of rank `(p-1)/2` and exponent `p^x`.
    pub computed_homocyclic: Option<bool>,
    /// `(|computed(j-1)|, |formula(j)|)` when the printed value is smaller than the
    /// computed value one step down, which a quotient epimorphism forbids.
    pub monotonicity_witness: Option<(Int, Int)>,
}

pub fn reconcile(p: u32, m: usize, n: usize) -> Result<Reconciliation, MultiplierError> {
    let formula = theorem3_formula(p, m, n)?.invariants;
    let j = n - m + 1;
    let (x, y) = decompose(p, j);
    let at = |j: usize| -> Result<AbelianInvariants, MultiplierError> {
        if j == 0 {
            Ok(AbelianInvariants::trivial())
        } else {
            wedge_coinvariants(p, j)
        }
    };
    let computed = at(j)?;
    let prev = at(j - 1)?;
    let prev2 = at(j.saturating_sub(2))?;
    let order = |a: &AbelianInvariants| a.torsion_order();
    let computed_homocyclic = (y == 0).then(|| {
        computed.rank() == (p as usize - 1) / 2
            && computed.torsion.iter().all(|d| *d == Int::from(pow(p, x)))
    });
    let monotonicity_witness = (order(&formula) < order(&prev)).then(|| (order(&prev), order(&formula)));
    Ok(Reconciliation {
        p,
        m,
        n,
        x,
        y,
        agree: formula == computed,
        computed_monotone: order(&computed) >= order(&prev),
        computed_staircase: order(&computed) == order(&prev2) * Int::from(p),
        computed_homocyclic,
        monotonicity_witness,
        formula,
        computed,
    })
}

/// Rank at most `(p-1)/2` and exponent at most `p^ceil((n-m+1)/(p-1))`.
pub fn bounds_check(report: &B0Report) -> bool {
    let p = report.p;
    let rank_ok = 2 * report.rank() <= (p as usize).saturating_sub(1).max(1);
    let j = report.n + 1 - report.m.min(report.n + 1);
    let q = (p as usize).saturating_sub(1).max(1);
    let e = j.div_ceil(q);
    rank_ok && report.exponent() <= Int::from(p).pow(e)
}

/// `max(p + 2, 6p - 29)`.
pub fn corollary_threshold(p: u32) -> i64 {
    let p = p as i64;
    (p + 2).max(6 * p - 29)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(f: &[u64]) -> AbelianInvariants {
        AbelianInvariants::from_torsion(f.iter().copied())
    }

    #[test]
    fn printed_formula() {
        assert_eq!(theorem3_formula(5, 4, 5).unwrap().invariants, c(&[5]));
        assert_eq!(theorem3_formula(5, 6, 9).unwrap().invariants, c(&[5, 5]));
        assert_eq!(theorem3_formula(7, 4, 5).unwrap().invariants, c(&[7]));
        assert_eq!(theorem3_formula(5, 8, 12).unwrap().invariants, c(&[5]));
        assert!(theorem3_formula(3, 4, 5).is_err());
        assert!(theorem3_formula(5, 4, 9).is_err());
    }

    #[test]
    fn thresholds() {
        assert_eq!(corollary_threshold(2), 4);
        assert_eq!(corollary_threshold(5), 7);
        assert_eq!(corollary_threshold(7), 13);
    }

    #[test]
    fn reconciliation_records() {
        let r = reconcile(5, 4, 5).unwrap();
        assert!(r.agree);
        let r = reconcile(5, 6, 9).unwrap();
        assert!(r.agree);
        assert_eq!(r.computed_homocyclic, Some(true));
    }

    #[test]
    fn bounds() {
        let mut r = theorem3_formula(5, 6, 9).unwrap();
        assert!(bounds_check(&r));
        r.invariants = c(&[5; 5]);
        assert!(!bounds_check(&r));
        r.invariants = AbelianInvariants::trivial();
        assert!(bounds_check(&r));
    }
}
