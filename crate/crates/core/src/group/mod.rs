//! Groups of maximal class `G = <s> x| P_1` built from a commutator map.
//!
//! `P_1` is `O/p^(n-1)` with the product `x o y = x + y + 1/2 [x, y]`, where the
//! commutator `[x, y] = kappa^(m-1) alpha(x, y)` is central, and `s` acts as
//! multiplication by `theta`. The element `s^i x` has normal form exponents
//! `(i, digits of x)`, and `s_i` is the element with body `kappa^(i-1)`.

mod classical;
mod presentation;
mod subgroup;

use std::fmt;

use rand::Rng;

use crate::cyclotomic::{AlphaMap, CycElement, CycError, CycRing};
use crate::homology::{FiniteGroupTable, DEFAULT_ORACLE_CAP};

pub use classical::{classical_2group, maximal_class_order_81, ClassicalKind};
pub use presentation::{FinitePresentation, Letter, Word};
pub use subgroup::Subgroup;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("model check failed: {0}")]
    ModelInvalid(String),
    #[error("element is not in P_{level} minus P_{}", level + 1)]
    WrongLevel { level: usize },
    #[error("group of order {order} exceeds the cap {cap}")]
    TooLarge { order: u128, cap: usize },
    #[error(transparent)]
    Cyc(#[from] CycError),
}

/// `s^s_exp * x` with `x` in `P_1 = O/p^(n-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub s_exp: u32,
    pub body: CycElement,
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits: Vec<String> = self.body.digits().iter().map(|d| d.to_string()).collect();
        write!(f, "({}; {})", self.s_exp, digits.join(" "))
    }
}

#[derive(Clone, Debug)]
pub struct MaxClassGroup {
    p: u32,
    n: usize,
    m: usize,
    alpha: AlphaMap,
    body: CycRing,
    /// An integer inverse of 2 modulo the exponent of `P_1`.
    half: i64,
    ell: usize,
}

impl MaxClassGroup {
    /// Builds the group and checks that it has maximal class with the expected
    /// `P_i` filtration.
    pub fn new(p: u32, n: usize, m: usize, alpha: AlphaMap) -> Result<Self, GroupError> {
        if (alpha.p(), alpha.m(), alpha.n()) != (p, m, n) {
            return Err(GroupError::BadParameters(format!(
                "commutator map is for (p, m, n) = ({}, {}, {}), not ({p}, {m}, {n})",
                alpha.p(),
                alpha.m(),
                alpha.n()
            )));
        }
        crate::cyclotomic::check_parameters(p, m, n).map_err(|e| match e {
            CycError::BadParameters(s) => GroupError::BadParameters(s),
            other => other.into(),
        })?;
        let body = CycRing::new(p, n - 1)?;
        let e = (n - 1).div_ceil(p as usize - 1) as u32;
        let half = ((p as i64).pow(e) + 1) / 2;
        let mut g = MaxClassGroup {
            p,
            n,
            m,
            alpha,
            body,
            half,
            ell: 0,
        };
        g.ell = g.compute_degree_of_commutativity();
        g.verify_maximal_class()?;
        Ok(g)
    }

    /// The group for the canonical commutator map.
    pub fn canonical(p: u32, n: usize, m: usize) -> Result<Self, GroupError> {
        let alpha = AlphaMap::canonical(p, m, n)?;
        Self::new(p, n, m, alpha)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn alpha(&self) -> &AlphaMap {
        &self.alpha
    }

    pub fn body_ring(&self) -> &CycRing {
        &self.body
    }

    /// `|G| = p^n`.
    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.n as u32)
    }

    /// Degree of commutativity.
    pub fn degree_of_commutativity(&self) -> usize {
        self.ell
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            s_exp: 0,
            body: self.body.zero(),
        }
    }

    pub fn s(&self) -> GroupElement {
        GroupElement {
            s_exp: 1,
            body: self.body.zero(),
        }
    }

    /// `s_i` for `1 <= i`, the element with body `kappa^(i-1)` (the identity for `i >= n`).
    pub fn s_i(&self, i: usize) -> GroupElement {
        assert!(i >= 1);
        self.from_body(self.body.kappa_pow(i - 1))
    }

    pub fn from_body(&self, body: CycElement) -> GroupElement {
        GroupElement { s_exp: 0, body }
    }

    pub fn element(&self, s_exp: u32, digits: Vec<u32>) -> Result<GroupElement, GroupError> {
        Ok(GroupElement {
            s_exp: s_exp % self.p,
            body: self.body.from_digits(digits)?,
        })
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.s_exp < self.p && self.body.check(&g.body).is_ok()
    }

    /// The commutator `[x, y]` of two elements of `P_1`, given by their bodies.
    pub fn body_commutator(&self, x: &CycElement, y: &CycElement) -> CycElement {
        if self.m == self.n {
            return self.body.zero();
        }
        let d = self.m - 1;
        let v = self
            .alpha
            .apply_ints(&x.digits()[..d], &y.digits()[..d]);
        self.body.mul_kappa_pow_from(&v, self.m - 1)
    }

    /// Same as [`MaxClassGroup::body_commutator`] on integer coordinate vectors, as an
    /// integer lift.
    pub(crate) fn body_commutator_ints(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        if self.m == self.n {
            return vec![0; self.n - 1];
        }
        let d = self.m - 1;
        let v = self.alpha.apply_ints(&x[..d], &y[..d]);
        self.body.mul_kappa_pow_from(&v, self.m - 1).to_ints()
    }

    fn circ(&self, x: &CycElement, y: &CycElement) -> CycElement {
        let sum = self.body.add_raw(x, y);
        if self.m == self.n {
            return sum;
        }
        let c = self.body_commutator(x, y);
        if c.is_zero() {
            return sum;
        }
        self.body.add_raw(&sum, &self.body.scale_raw(&c, self.half))
    }

    /// `(i, x)(j, y) = (i + j, theta^j x o y)`.
    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        let shifted = self.body.theta_pow_raw(&g.body, h.s_exp as i64);
        GroupElement {
            s_exp: (g.s_exp + h.s_exp) % self.p,
            body: self.circ(&shifted, &h.body),
        }
    }

    /// `(i, x)^{-1} = (-i, -theta^{-i} x)`.
    pub fn inverse(&self, g: &GroupElement) -> GroupElement {
        let back = self.body.theta_pow_raw(&g.body, -(g.s_exp as i64));
        GroupElement {
            s_exp: (self.p - g.s_exp) % self.p,
            body: self.body.neg_raw(&back),
        }
    }

    pub fn power(&self, g: &GroupElement, k: i64) -> GroupElement {
        let base = if k < 0 { self.inverse(g) } else { g.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = self.identity();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.multiply(&acc, &sq);
            }
            sq = self.multiply(&sq, &sq);
            e >>= 1;
        }
        acc
    }

    /// `g^{-1} h^{-1} g h`.
    pub fn commutator(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        let gh = self.multiply(g, h);
        let hg = self.multiply(h, g);
        self.multiply(&self.inverse(&hg), &gh)
    }

    /// `h^{-1} g h`.
    pub fn conjugate(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        self.multiply(&self.multiply(&self.inverse(h), g), h)
    }

    /// All elements in lexicographic normal-form order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.p).flat_map(move |i| {
            self.body.elements().map(move |body| GroupElement { s_exp: i, body })
        })
    }

    /// Position of `g` in [`MaxClassGroup::elements`].
    pub fn index_of(&self, g: &GroupElement) -> usize {
        let inner = (self.p as u64).pow(self.n as u32 - 1);
        (g.s_exp as u64 * inner + self.body.index_of(&g.body)) as usize
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> GroupElement {
        let digits = (0..self.n - 1).map(|_| rng.gen_range(0..self.p)).collect();
        GroupElement {
            s_exp: rng.gen_range(0..self.p),
            body: self.body.from_digits(digits).expect("digits in range"),
        }
    }

    /// Level `i` with `g` in `P_i \ P_{i+1}` for `g` in `P_1` (`n` for the identity);
    /// `0` for elements outside `P_1`.
    pub fn level(&self, g: &GroupElement) -> usize {
        if g.s_exp != 0 {
            return 0;
        }
        g.body.valuation() + 1
    }

    fn compute_degree_of_commutativity(&self) -> usize {
        let mut ell = self.n - 3;
        let top = self.n - 1;
        for i in 1..=top {
            for j in i + 1..=top {
                let c = self.body_commutator(&self.body.kappa_pow(i - 1), &self.body.kappa_pow(j - 1));
                if c.is_zero() {
                    continue;
                }
                // c lies in P_{val+1}; need val + 1 >= i + j + ell
                let bound = (c.valuation() + 1).saturating_sub(i + j);
                ell = ell.min(bound);
            }
        }
        ell
    }

    /// Multiplication table with elements in lexicographic normal-form order.
    pub fn to_multiplication_table(&self) -> Result<FiniteGroupTable, GroupError> {
        self.to_multiplication_table_capped(DEFAULT_ORACLE_CAP)
    }

    pub fn to_multiplication_table_capped(&self, cap: usize) -> Result<FiniteGroupTable, GroupError> {
        let order = self.order();
        if order > cap as u128 {
            return Err(GroupError::TooLarge { order, cap });
        }
        let elems: Vec<GroupElement> = self.elements().collect();
        let rows: Vec<Vec<usize>> = elems
            .iter()
            .map(|a| elems.iter().map(|b| self.index_of(&self.multiply(a, b))).collect())
            .collect();
        FiniteGroupTable::from_rows(&rows).map_err(|e| GroupError::ModelInvalid(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn group_axioms_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, n, m) in [(5, 5, 4), (5, 6, 4), (7, 8, 5), (5, 10, 6)] {
            let g = MaxClassGroup::canonical(p, n, m).unwrap();
            for _ in 0..200 {
                let (a, b, c) = (g.random_element(&mut rng), g.random_element(&mut rng), g.random_element(&mut rng));
                assert_eq!(g.multiply(&g.multiply(&a, &b), &c), g.multiply(&a, &g.multiply(&b, &c)));
                assert_eq!(g.multiply(&a, &g.inverse(&a)), g.identity());
                assert_eq!(g.multiply(&g.identity(), &a), a);
            }
        }
    }

    #[test]
    fn s_has_order_p_and_commutators_descend() {
        let g = MaxClassGroup::canonical(5, 6, 4).unwrap();
        assert_eq!(g.power(&g.s(), 5), g.identity());
        for i in 2..g.n() {
            let c = g.commutator(&g.s_i(i - 1), &g.s());
            let q = g.multiply(&c, &g.inverse(&g.s_i(i)));
            assert!(g.level(&q) > i, "i = {i}");
        }
        let c = g.commutator(&g.s_i(1), &g.s_i(2));
        assert_eq!(g.level(&c), 4);
    }

    #[test]
    fn degree_of_commutativity_values() {
        for (p, n, m) in [(5, 5, 4), (5, 6, 4), (5, 9, 6), (7, 9, 7)] {
            assert_eq!(MaxClassGroup::canonical(p, n, m).unwrap().degree_of_commutativity(), m - 3);
        }
        let g = MaxClassGroup::canonical(5, 4, 4).unwrap();
        assert_eq!(g.degree_of_commutativity(), 1);
    }

    #[test]
    fn table_matches_multiply() {
        let g = MaxClassGroup::canonical(5, 4, 4).unwrap();
        let t = g.to_multiplication_table_capped(625).unwrap();
        assert_eq!(t.order(), 625);
        assert_eq!(t.identity(), 0);
        assert!(matches!(g.to_multiplication_table(), Err(GroupError::TooLarge { .. })));
    }
}
