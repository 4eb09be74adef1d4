//! Bogomolov multipliers of the split maximal-class groups through the exterior
//! square of `P_1 / [P_1, P_1]`, and the closed formula they are compared against.

mod formula;
mod wedge;

use std::fmt;
use std::time::{Duration, Instant};

use crate::cyclotomic::{AlphaMap, CycError, CycRing};
use crate::group::{GroupError, MaxClassGroup};
use crate::zlinalg::{preimage_lattice, sparse_from_pairs, to_i64, AbelianInvariants, Int, IntMatrix, SparseVec};

pub use formula::{bounds_check, corollary_threshold, decompose, reconcile, theorem3_formula, Reconciliation};
pub use wedge::{wedge_coinvariants, wedge_square, wedge_vector, WedgeModule};

/// Default limit on `p^(m-1) (m-1)^2` for the brute commuting-pair search.
pub const DEFAULT_KALPHA_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MultiplierError {
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("brute commuting-pair search needs {needed} operations, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("the closed strategy needs a canonical commutator map")]
    WrongKind,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("internal disagreement: {0}")]
    Disagreement(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Cyc(#[from] CycError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KalphaStrategy {
    Brute,
    Closed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Formula,
    Coinvariants,
    Oracle,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Formula => "formula",
            Method::Coinvariants => "coinvariants",
            Method::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct B0Report {
    pub p: u32,
    pub n: usize,
    pub m: usize,
    /// `m` re-derived as the level of `[P_1, P_1]`; equal to `m` for surjective maps.
    pub derived_m: usize,
    pub a: Option<u32>,
    pub method: Method,
    pub invariants: AbelianInvariants,
    /// Strategies whose quotients were computed and found equal.
    pub strategies: Vec<KalphaStrategy>,
    pub elapsed: Duration,
}

impl B0Report {
    pub fn mu(&self) -> usize {
        self.n - self.m + 2
    }

    /// `(x, y)` with `n - m + 1 = x (p - 1) + y`, `0 <= y < p - 1`.
    pub fn decomposition(&self) -> (usize, usize) {
        decompose(self.p, self.n - self.m + 1)
    }

    pub fn rank(&self) -> usize {
        self.invariants.rank()
    }

    pub fn exponent(&self) -> Int {
        self.invariants.exponent()
    }

    pub fn order(&self) -> Int {
        self.invariants.torsion_order()
    }
}

fn brute_cost(p: u32, d: usize) -> u128 {
    (p as u128).pow(d as u32) * (d as u128) * (d as u128)
}

/// Generators of the span of `x ^ y` over pairs with `alpha(x, y) = 0`, for `x, y`
/// ranging over `O/p^d` (`d >= m - 1`; digits past `m - 2` do not enter `alpha`).
fn kalpha_brute(alpha: &AlphaMap, d: usize, budget: u64) -> Result<Vec<SparseVec>, MultiplierError> {
    let needed = brute_cost(alpha.p(), d);
    if needed > budget as u128 {
        return Err(MultiplierError::BudgetExceeded { needed, budget });
    }
    let target: Vec<SparseVec> = alpha
        .target()
        .relation_rows()
        .iter()
        .map(|r| sparse_from_pairs(r.iter().enumerate().map(|(i, &c)| (i, Int::from(c)))))
        .collect();
    let k = alpha.target().precision();
    let ring = CycRing::new(alpha.p(), d)?;
    let units: Vec<Vec<i64>> = (0..d)
        .map(|v| {
            let mut e = vec![0i64; d];
            e[v] = 1;
            e
        })
        .collect();
    let mut out = Vec::new();
    for x in ring.elements() {
        // k x for k prime to p has the same kernel and proportional wedges
        match x.digits().iter().find(|&&c| c != 0) {
            Some(&1) => {}
            _ => continue,
        }
        let xi = x.to_ints();
        let rows: Vec<SparseVec> = units
            .iter()
            .map(|e| {
                let val = alpha.apply_ints(&xi, e);
                sparse_from_pairs(val.to_ints().into_iter().enumerate().map(|(i, c)| (i, Int::from(c))))
            })
            .collect();
        let f = IntMatrix::from_sparse_rows(k, rows);
        let kernel = preimage_lattice(&f, &target);
        for y in kernel.basis() {
            let mut yi = vec![0i64; d];
            for (i, c) in y {
                yi[*i] = to_i64(c);
            }
            let w = wedge_vector(d, &xi, &yi);
            if !w.is_empty() {
                out.push(w);
            }
        }
    }
    Ok(out)
}

/// `e_u ^ e_v` with `v >= n - m + 1`, i.e. the wedges against `p^(mu-1)/p^(m-1)`.
fn kalpha_closed(alpha: &AlphaMap) -> Result<Vec<SparseVec>, MultiplierError> {
    if !alpha.is_canonical() {
        return Err(MultiplierError::WrongKind);
    }
    let d = alpha.m() - 1;
    let lo = alpha.n() - alpha.m() + 1;
    let mut out = Vec::new();
    for v in lo..d {
        for u in 0..v {
            out.push(sparse_from_pairs([(crate::cyclotomic::pair_index(d, u, v), Int::ONE)]));
        }
    }
    Ok(out)
}

/// Wedge vectors in `L^2(O/p^(m-1))` spanning the commuting-pair subgroup (brute) or
/// the part of it the closed description supplies before the `theta`-twists (closed).
pub fn kalpha_generators(alpha: &AlphaMap, strategy: KalphaStrategy) -> Result<Vec<SparseVec>, MultiplierError> {
    match strategy {
        KalphaStrategy::Brute => kalpha_brute(alpha, alpha.m() - 1, DEFAULT_KALPHA_BUDGET),
        KalphaStrategy::Closed => kalpha_closed(alpha),
    }
}

/// `B_0(G)` as the `theta`-coinvariants of `L^2(P_1/[P_1,P_1])` modulo commuting wedges.
pub fn b0_coinvariants(g: &MaxClassGroup) -> Result<B0Report, MultiplierError> {
    b0_coinvariants_with_budget(g, DEFAULT_KALPHA_BUDGET)
}

pub fn b0_coinvariants_with_budget(g: &MaxClassGroup, budget: u64) -> Result<B0Report, MultiplierError> {
    let start = Instant::now();
    let (p, n, m) = (g.p(), g.n(), g.m());
    if g.degree_of_commutativity() == 0 {
        return Err(MultiplierError::HypothesisViolated("degree of commutativity is 0".into()));
    }
    if g.p1_class() > 2 {
        return Err(MultiplierError::HypothesisViolated("P_1 has class greater than 2".into()));
    }
    let derived_m = g.derived_level()?;
    let alpha = g.alpha();
    let d = derived_m - 1;
    let module = wedge_square(p, d)?;

    let mut strategies = Vec::new();
    let mut result: Option<AbelianInvariants> = None;
    let mut record = |s: KalphaStrategy, inv: AbelianInvariants| -> Result<(), MultiplierError> {
        if !inv.is_finite() {
            return Err(MultiplierError::Disagreement(format!("{s:?} quotient is infinite")));
        }
        if let Some(prev) = &result {
            if *prev != inv {
                return Err(MultiplierError::Disagreement(format!(
                    "brute and closed commuting-pair quotients differ: {prev} vs {inv}"
                )));
            }
        }
        result = Some(inv);
        strategies.push(s);
        Ok(())
    };

    let closed_ok = alpha.is_canonical() && derived_m == m;
    match kalpha_brute(alpha, d, budget) {
        Ok(gens) => record(KalphaStrategy::Brute, module.coinvariants_modulo(gens))?,
        Err(e @ MultiplierError::BudgetExceeded { .. }) if !closed_ok => return Err(e),
        Err(MultiplierError::BudgetExceeded { .. }) => {}
        Err(e) => return Err(e),
    }
    if closed_ok {
        record(KalphaStrategy::Closed, module.coinvariants_modulo(kalpha_closed(alpha)?))?;
    }
    Ok(B0Report {
        p,
        n,
        m,
        derived_m,
        a: alpha.a(),
        method: Method::Coinvariants,
        invariants: result.expect("at least one strategy ran"),
        strategies,
        elapsed: start.elapsed(),
    })
}

/// Brute and closed quotients for a canonical map, side by side.
pub fn compare_kalpha_strategies(alpha: &AlphaMap) -> Result<(AbelianInvariants, AbelianInvariants), MultiplierError> {
    let module = wedge_square(alpha.p(), alpha.m() - 1)?;
    let closed = module.coinvariants_modulo(kalpha_generators(alpha, KalphaStrategy::Closed)?);
    let brute = module.coinvariants_modulo(kalpha_generators(alpha, KalphaStrategy::Brute)?);
    Ok((brute, closed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::alpha_solve;

    fn c(f: &[u64]) -> AbelianInvariants {
        AbelianInvariants::from_torsion(f.iter().copied())
    }

    #[test]
    fn order_p5_groups() {
        for p in [5, 7] {
            let g = MaxClassGroup::canonical(p, 5, 4).unwrap();
            let r = b0_coinvariants(&g).unwrap();
            assert_eq!(r.invariants, c(&[p as u64]));
            assert_eq!(r.strategies, vec![KalphaStrategy::Brute, KalphaStrategy::Closed]);
        }
    }

    #[test]
    fn abelian_p1_is_trivial() {
        let g = MaxClassGroup::canonical(5, 5, 5).unwrap();
        let r = b0_coinvariants(&g).unwrap();
        assert!(r.invariants.is_trivial());
        assert_eq!(r.derived_m, 5);
    }

    #[test]
    fn p3_surjective_case() {
        let sols = alpha_solve(3, 4, 5).unwrap();
        let alpha = sols.enumerate(100).unwrap().into_iter().find(|a| a.is_surjective()).unwrap();
        let g = MaxClassGroup::new(3, 5, 4, alpha).unwrap();
        assert_eq!(b0_coinvariants(&g).unwrap().invariants, c(&[3]));
    }

    #[test]
    fn closed_needs_canonical() {
        let alpha = AlphaMap::zero(5, 4, 5).unwrap();
        assert_eq!(kalpha_generators(&alpha, KalphaStrategy::Closed), Err(MultiplierError::WrongKind));
    }

    #[test]
    fn strategies_agree_and_match_the_small_wedge() {
        for (m, n) in [(4, 5), (4, 6), (5, 6), (5, 8), (6, 8)] {
            let alpha = AlphaMap::canonical(5, m, n).unwrap();
            let (b, cl) = compare_kalpha_strategies(&alpha).unwrap();
            assert_eq!(b, cl);
            assert_eq!(b, wedge_coinvariants(5, n - m + 1).unwrap());
        }
    }

    #[test]
    fn twisting_alpha_changes_nothing() {
        let g = MaxClassGroup::canonical(5, 6, 5).unwrap();
        let base = b0_coinvariants(&g).unwrap().invariants;
        for r in [1, 2, 3] {
            let tw = MaxClassGroup::new(5, 6, 5, g.alpha().theta_twist(r)).unwrap();
            assert_eq!(b0_coinvariants(&tw).unwrap().invariants, base);
        }
    }
}
