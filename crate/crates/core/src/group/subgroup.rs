use crate::zlinalg::{preimage_lattice, sparse_from_pairs, to_i64, Int, IntMatrix, Lattice, SparseVec};

use super::{GroupElement, GroupError, MaxClassGroup};

/// A subgroup of `G`: an additive lattice `L` in `Z^(n-1)` containing the relation
/// lattice of `O/p^(n-1)`, closed under commutators, optionally extended by `s`
/// (only when `L` is `theta`-stable).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    with_s: bool,
    body: Lattice,
}

impl Subgroup {
    pub fn body_lattice(&self) -> &Lattice {
        &self.body
    }

    pub fn contains_s(&self) -> bool {
        self.with_s
    }

    /// `log_p |H|`.
    pub fn order_exponent(&self, g: &MaxClassGroup) -> usize {
        let index = self.body.index().expect("subgroup lattices contain the relations");
        let mut e = 0;
        let mut x = index;
        let p = Int::from(g.p());
        while x > Int::ONE {
            x /= &p;
            e += 1;
        }
        (g.n() - 1 - e) + usize::from(self.with_s)
    }

    pub fn is_trivial(&self, g: &MaxClassGroup) -> bool {
        self.order_exponent(g) == 0
    }

    pub fn contains(&self, g: &MaxClassGroup, x: &GroupElement) -> bool {
        if x.s_exp != 0 && !self.with_s {
            return false;
        }
        // with s present, s^i y is in H iff y is
        let _ = g;
        self.body.contains(&to_sparse(&x.body.to_ints()))
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        (!self.with_s || other.with_s) && other.body.contains_lattice(&self.body)
    }
}

fn to_sparse(v: &[i64]) -> SparseVec {
    sparse_from_pairs(v.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (i, Int::from(x))))
}

fn to_dense(v: &SparseVec, dim: usize) -> Vec<i64> {
    let mut out = vec![0i64; dim];
    for (i, x) in v {
        out[*i] = to_i64(x);
    }
    out
}

impl MaxClassGroup {
    fn dim(&self) -> usize {
        self.n() - 1
    }

    fn relation_vectors(&self) -> Vec<SparseVec> {
        self.body_ring().relation_rows().iter().map(|r| to_sparse(r)).collect()
    }

    fn lattice_of(&self, gens: impl IntoIterator<Item = SparseVec>) -> Lattice {
        Lattice::from_generators(self.dim(), self.relation_vectors().into_iter().chain(gens))
    }

    /// Lattice basis vectors reduced to canonical bodies.
    fn basis_bodies(&self, l: &Lattice) -> Vec<Vec<i64>> {
        l.basis()
            .iter()
            .map(|b| {
                let x: Vec<i64> = to_dense(b, self.dim());
                self.body_ring().from_ints(&x).to_ints()
            })
            .filter(|x| x.iter().any(|&c| c != 0))
            .collect()
    }

    fn theta_ints(&self, x: &[i64]) -> Vec<i64> {
        (0..self.dim())
            .map(|u| x[u] + if u > 0 { x[u - 1] } else { 0 })
            .collect()
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup {
            with_s: false,
            body: self.lattice_of([]),
        }
    }

    pub fn whole_group(&self) -> Subgroup {
        Subgroup {
            with_s: true,
            body: Lattice::full(self.dim()),
        }
    }

    /// The model's `P_i` for `i >= 1`: bodies of valuation at least `i - 1`.
    pub fn level_subgroup(&self, i: usize) -> Subgroup {
        assert!(i >= 1);
        let gens = (i - 1..self.dim()).map(|a| vec![(a, Int::ONE)]);
        Subgroup {
            with_s: false,
            body: self.lattice_of(gens),
        }
    }

    /// Subgroup of `P_1` generated by the given bodies.
    pub fn generated_subgroup(&self, bodies: &[Vec<i64>]) -> Result<Subgroup, GroupError> {
        let mut gens: Vec<SparseVec> = bodies.iter().map(|b| to_sparse(b)).collect();
        for (i, a) in bodies.iter().enumerate() {
            for b in &bodies[i + 1..] {
                gens.push(to_sparse(&self.body_commutator_ints(a, b)));
            }
        }
        let h = Subgroup {
            with_s: false,
            body: self.lattice_of(gens),
        };
        self.check_closed(&h)?;
        Ok(h)
    }

    /// Verifies `[L, L] <= L`; a failure means the lattice is not a subgroup.
    pub fn check_closed(&self, h: &Subgroup) -> Result<(), GroupError> {
        let basis = self.basis_bodies(&h.body);
        for (i, a) in basis.iter().enumerate() {
            for b in &basis[i + 1..] {
                if !h.body.contains(&to_sparse(&self.body_commutator_ints(a, b))) {
                    return Err(GroupError::ModelInvalid(
                        "lattice is not closed under commutators".into(),
                    ));
                }
            }
        }
        if h.with_s {
            for a in &basis {
                if !h.body.contains(&to_sparse(&self.theta_ints(a))) {
                    return Err(GroupError::ModelInvalid(
                        "lattice is not normalized by s".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Normal closure in `G` of the subgroup of `P_1` generated by the given bodies.
    pub fn normal_closure(&self, bodies: &[Vec<i64>]) -> Subgroup {
        let e0: Vec<i64> = self.body_ring().one().to_ints();
        let mut lattice = self.lattice_of(bodies.iter().map(|b| to_sparse(b)));
        loop {
            let basis = self.basis_bodies(&lattice);
            let mut extra = Vec::new();
            for b in &basis {
                extra.push(to_sparse(&self.theta_ints(b)));
                extra.push(to_sparse(&self.body_commutator_ints(b, &e0)));
            }
            let next = lattice.sum(&Lattice::from_generators(self.dim(), extra));
            if next == lattice {
                return Subgroup {
                    with_s: false,
                    body: lattice,
                };
            }
            lattice = next;
        }
    }

    /// `[H, G]` for a normal subgroup `H`.
    pub fn commutator_with_group(&self, h: &Subgroup) -> Subgroup {
        let s = self.s();
        let s1 = self.s_i(1);
        let mut gens: Vec<GroupElement> = self
            .basis_bodies(&h.body)
            .into_iter()
            .map(|b| self.from_body(self.body_ring().from_ints(&b)))
            .collect();
        if h.with_s {
            gens.push(s.clone());
        }
        let mut comms = Vec::new();
        for x in &gens {
            for y in [&s, &s1] {
                let c = self.commutator(x, y);
                debug_assert_eq!(c.s_exp, 0);
                comms.push(c.body.to_ints());
            }
        }
        self.normal_closure(&comms)
    }

    /// `[H, K]` for subgroups of `P_1`: the span of commutators of basis elements.
    pub fn commutator_of(&self, h: &Subgroup, k: &Subgroup) -> Subgroup {
        assert!(!h.with_s && !k.with_s, "only subgroups of P_1");
        let hb = self.basis_bodies(&h.body);
        let kb = self.basis_bodies(&k.body);
        let mut gens = Vec::new();
        for a in &hb {
            for b in &kb {
                gens.push(to_sparse(&self.body_commutator_ints(a, b)));
            }
        }
        Subgroup {
            with_s: false,
            body: self.lattice_of(gens),
        }
    }

    /// Lower central series `gamma_1 = G, gamma_2, ...`, ending with the trivial group.
    pub fn gamma_series(&self) -> Vec<Subgroup> {
        let mut series = vec![self.whole_group()];
        loop {
            let last = series.last().unwrap();
            if last.is_trivial(self) {
                return series;
            }
            let next = self.commutator_with_group(last);
            if next == *last {
                return series;
            }
            series.push(next);
        }
    }

    /// `P_1, ..., P_n` with `P_1 = C_G(P_2 / P_4)` and `P_i = gamma_i` for `i >= 2`.
    pub fn pi_series(&self) -> Result<Vec<Subgroup>, GroupError> {
        let gamma = self.gamma_series();
        if gamma.len() != self.n() {
            return Err(GroupError::ModelInvalid(format!(
                "lower central series has length {}, expected {}",
                gamma.len(),
                self.n()
            )));
        }
        let p1 = self.level_subgroup(1);
        let p2 = &gamma[1];
        let p4 = &gamma[3];
        // every element of P_1 centralizes P_2 / P_4
        for a in self.basis_bodies(&p1.body) {
            for b in self.basis_bodies(&p2.body) {
                if !p4.body.contains(&to_sparse(&self.body_commutator_ints(&a, &b))) {
                    return Err(GroupError::ModelInvalid(
                        "P_1 does not centralize P_2 / P_4".into(),
                    ));
                }
            }
        }
        // the centralizer contains P_1, which has index p, so it is P_1 unless s centralizes
        let s = self.s();
        let s_centralizes = self
            .basis_bodies(&p2.body)
            .into_iter()
            .all(|b| p4.contains(self, &self.commutator(&s, &self.from_body(self.body_ring().from_ints(&b)))));
        if s_centralizes {
            return Err(GroupError::ModelInvalid("s centralizes P_2 / P_4".into()));
        }
        let mut out = vec![p1];
        out.extend(gamma.into_iter().skip(1));
        Ok(out)
    }

    /// Checks order, class `n - 1`, index `p` steps, and that `gamma_i` is the
    /// valuation filtration.
    pub fn verify_maximal_class(&self) -> Result<(), GroupError> {
        if self.n() < 4 {
            return Err(GroupError::BadParameters("n must be at least 4".into()));
        }
        let gamma = self.gamma_series();
        if gamma.len() != self.n() {
            return Err(GroupError::ModelInvalid(format!(
                "nilpotency class is {}, expected {}",
                gamma.len() - 1,
                self.n() - 1
            )));
        }
        for (k, h) in gamma.iter().enumerate() {
            let i = k + 1;
            let expected = if i == 1 { self.n() } else { self.n() - i };
            if h.order_exponent(self) != expected {
                return Err(GroupError::ModelInvalid(format!(
                    "|gamma_{i}| = p^{}, expected p^{expected}",
                    h.order_exponent(self)
                )));
            }
            if i >= 2 && *h != self.level_subgroup(i) {
                return Err(GroupError::ModelInvalid(format!(
                    "gamma_{i} differs from the valuation filtration"
                )));
            }
        }
        self.pi_series()?;
        Ok(())
    }

    /// `[P_1, P_1]`.
    pub fn derived_p1(&self) -> Subgroup {
        let p1 = self.level_subgroup(1);
        self.commutator_of(&p1, &p1)
    }

    /// The level `k` with `[P_1, P_1] = P_k` (`n` when `P_1` is abelian).
    pub fn derived_level(&self) -> Result<usize, GroupError> {
        let d = self.derived_p1();
        (1..=self.n())
            .find(|&k| self.level_subgroup(k) == d)
            .ok_or_else(|| GroupError::ModelInvalid("[P_1, P_1] is not a term of the series".into()))
    }

    pub fn p1_is_abelian(&self) -> bool {
        self.derived_p1().is_trivial(self)
    }

    /// `[P_1, P_1] == [P_1, P_{n-2}]`.
    pub fn theorem1_predicate(&self) -> bool {
        let p1 = self.level_subgroup(1);
        let pn2 = self.level_subgroup(self.n() - 2);
        self.commutator_of(&p1, &p1) == self.commutator_of(&p1, &pn2)
    }

    /// Nilpotency class of `P_1` (1 when abelian, 0 never).
    pub fn p1_class(&self) -> usize {
        let p1 = self.level_subgroup(1);
        let d = self.commutator_of(&p1, &p1);
        if d.is_trivial(self) {
            return 1;
        }
        if self.commutator_of(&d, &p1).is_trivial(self) {
            2
        } else {
            3
        }
    }

    /// The center of `G`.
    pub fn center(&self) -> Subgroup {
        // elements with nonzero s-exponent never commute with s_1: (theta^i - 1) has
        // valuation 1, below the commutator level m - 1
        for i in 1..self.p() as i64 {
            let t = self.body_ring().theta_power(i);
            let d = self.body_ring().sub(&t, &self.body_ring().one()).expect("same ring");
            assert!(d.valuation() < self.m() - 1);
        }
        let dim = self.dim();
        let e0 = self.body_ring().one().to_ints();
        // x -> (kappa x, [x, s_1]) must vanish modulo the relations
        let mut rows = Vec::with_capacity(dim);
        for a in 0..dim {
            let mut ea = vec![0i64; dim];
            ea[a] = 1;
            let mut row: Vec<(usize, Int)> = Vec::new();
            if a + 1 < dim {
                row.push((a + 1, Int::ONE));
            }
            for (t, c) in self.body_commutator_ints(&ea, &e0).into_iter().enumerate() {
                if c != 0 {
                    row.push((dim + t, Int::from(c)));
                }
            }
            rows.push(sparse_from_pairs(row));
        }
        let f = IntMatrix::from_sparse_rows(2 * dim, rows);
        let mut target = Vec::new();
        for r in self.relation_vectors() {
            target.push(r.clone());
            target.push(r.iter().map(|(c, x)| (c + dim, x.clone())).collect());
        }
        let body = preimage_lattice(&f, &target);
        Subgroup {
            with_s: false,
            body: body.sum(&self.lattice_of([])),
        }
    }

    /// `C_{P_i}(x)` for `x` in `P_i \ P_{i+1}`, by solving `[x, y] = 0` on `P_i`.
    pub fn centralizer_in_pi(&self, x: &GroupElement, i: usize) -> Result<Subgroup, GroupError> {
        if i == 0 || i >= self.n() || self.level(x) != i {
            return Err(GroupError::WrongLevel { level: i });
        }
        let dim = self.dim();
        let xs = x.body.to_ints();
        let domain: Vec<usize> = (i - 1..dim).collect();
        let rows: Vec<SparseVec> = domain
            .iter()
            .map(|&a| {
                let mut ea = vec![0i64; dim];
                ea[a] = 1;
                to_sparse(&self.body_commutator_ints(&xs, &ea))
            })
            .collect();
        let f = IntMatrix::from_sparse_rows(dim, rows);
        let pre = preimage_lattice(&f, &self.relation_vectors());
        let embedded = pre
            .basis()
            .iter()
            .map(|v| v.iter().map(|(c, x)| (domain[*c], x.clone())).collect::<SparseVec>());
        let h = Subgroup {
            with_s: false,
            body: self.lattice_of(embedded),
        };
        self.check_closed(&h)?;
        Ok(h)
    }

    /// The predicted centralizer `<x, P_{i+j}>` with `j = max(n - 2i - l, 1)`.
    pub fn centralizer_formula(&self, x: &GroupElement, i: usize) -> Result<Subgroup, GroupError> {
        if i == 0 || i >= self.n() || self.level(x) != i {
            return Err(GroupError::WrongLevel { level: i });
        }
        let j = (self.n() as i64 - 2 * i as i64 - self.degree_of_commutativity() as i64).max(1) as usize;
        let deep = self.level_subgroup((i + j).min(self.n()));
        let mut bodies = self.basis_bodies(&deep.body);
        bodies.push(x.body.to_ints());
        self.generated_subgroup(&bodies)
    }

    /// `C_{P_i}(x)` by enumerating `P_i`.
    pub fn centralizer_brute(&self, x: &GroupElement, i: usize) -> Result<Subgroup, GroupError> {
        if i == 0 || i >= self.n() || self.level(x) != i {
            return Err(GroupError::WrongLevel { level: i });
        }
        let ring = self.body_ring();
        let free = self.dim() - (i - 1);
        let sub = ring.with_precision(free);
        let mut gens = Vec::new();
        for tail in sub.elements() {
            let y = ring.mul_kappa_pow_from(&tail, i - 1);
            let ye = self.from_body(y);
            if self.multiply(x, &ye) == self.multiply(&ye, x) {
                gens.push(to_sparse(&ye.body.to_ints()));
            }
        }
        Ok(Subgroup {
            with_s: false,
            body: self.lattice_of(gens),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_of_canonical_groups() {
        let g = MaxClassGroup::canonical(5, 6, 4).unwrap();
        let gamma = g.gamma_series();
        assert_eq!(gamma.len(), 6);
        assert!(gamma[5].is_trivial(&g));
        let pi = g.pi_series().unwrap();
        assert_eq!(pi[0].order_exponent(&g), 5);
        assert_eq!(g.derived_level().unwrap(), 4);
    }

    #[test]
    fn theorem1_predicate_examples() {
        assert!(MaxClassGroup::canonical(5, 4, 4).unwrap().theorem1_predicate());
        assert!(!MaxClassGroup::canonical(5, 5, 4).unwrap().theorem1_predicate());
        assert!(!MaxClassGroup::canonical(5, 9, 6).unwrap().theorem1_predicate());
    }

    #[test]
    fn center_is_last_term() {
        for (p, n, m) in [(5, 5, 4), (5, 6, 4), (7, 7, 5)] {
            let g = MaxClassGroup::canonical(p, n, m).unwrap();
            assert_eq!(g.center(), g.level_subgroup(n - 1));
        }
    }

    #[test]
    fn centralizers_agree() {
        for (p, n, m) in [(5, 5, 4), (5, 6, 4), (5, 6, 5)] {
            let g = MaxClassGroup::canonical(p, n, m).unwrap();
            for i in 1..n {
                let x = g.s_i(i);
                let solved = g.centralizer_in_pi(&x, i).unwrap();
                assert_eq!(solved, g.centralizer_brute(&x, i).unwrap(), "({p},{n},{m}) i={i}");
                assert_eq!(solved, g.centralizer_formula(&x, i).unwrap(), "({p},{n},{m}) i={i}");
            }
        }
        let g = MaxClassGroup::canonical(5, 5, 4).unwrap();
        assert!(matches!(g.centralizer_in_pi(&g.s_i(2), 1), Err(GroupError::WrongLevel { .. })));
    }
}
