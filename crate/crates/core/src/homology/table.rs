use std::collections::{HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::HomologyError;

/// A finite group given by its full multiplication table.
///
/// `mul[a * N + b]` is the index of `a * b`. Construction validates identity, inverses and
/// associativity (exhaustively up to order 64, on random triples above).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupTable {
    order: usize,
    mul: Vec<u32>,
    identity: usize,
    inv: Vec<u32>,
}

const EXHAUSTIVE_ASSOCIATIVITY: usize = 64;
const RANDOM_TRIPLES: usize = 20_000;

impl FiniteGroupTable {
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self, HomologyError> {
        let n = rows.len();
        if n == 0 {
            return Err(HomologyError::InvalidTable("empty table".into()));
        }
        let mut mul = Vec::with_capacity(n * n);
        for (a, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(HomologyError::InvalidTable(format!(
                    "row {a} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for &x in row {
                if x >= n {
                    return Err(HomologyError::InvalidTable(format!(
                        "entry {x} in row {a} is out of range"
                    )));
                }
                mul.push(x as u32);
            }
        }
        Self::from_flat(n, mul)
    }

    pub(crate) fn from_flat(n: usize, mul: Vec<u32>) -> Result<Self, HomologyError> {
        assert_eq!(mul.len(), n * n);
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mul[e * n + x] as usize == x && mul[x * n + e] as usize == x))
            .ok_or_else(|| HomologyError::InvalidTable("no two-sided identity".into()))?;
        let mut inv = vec![u32::MAX; n];
        for a in 0..n {
            let b = (0..n)
                .find(|&b| mul[a * n + b] as usize == identity)
                .ok_or_else(|| HomologyError::InvalidTable(format!("element {a} has no inverse")))?;
            if mul[b * n + a] as usize != identity {
                return Err(HomologyError::InvalidTable(format!(
                    "element {a} has no two-sided inverse"
                )));
            }
            inv[a] = b as u32;
        }
        let t = FiniteGroupTable {
            order: n,
            mul,
            identity,
            inv,
        };
        t.check_associativity()?;
        Ok(t)
    }

    fn check_associativity(&self) -> Result<(), HomologyError> {
        let n = self.order;
        let check = |a: usize, b: usize, c: usize| -> Result<(), HomologyError> {
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                return Err(HomologyError::InvalidTable(format!(
                    "not associative at ({a}, {b}, {c})"
                )));
            }
            Ok(())
        };
        if n <= EXHAUSTIVE_ASSOCIATIVITY {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..RANDOM_TRIPLES {
                check(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        Ok(())
    }

    /// Closure of the given permutations (images of `0..degree`) under composition.
    /// The product `a * b` applies `a` first, then `b`.
    pub fn from_permutations(generators: &[Vec<usize>]) -> Result<Self, HomologyError> {
        let degree = generators.first().map_or(0, |g| g.len());
        for g in generators {
            let mut seen = vec![false; degree];
            if g.len() != degree || g.iter().any(|&x| x >= degree || std::mem::replace(&mut seen[x], true)) {
                return Err(HomologyError::InvalidTable(format!("{g:?} is not a permutation of 0..{degree}")));
            }
        }
        let compose = |a: &[usize], b: &[usize]| -> Vec<usize> { a.iter().map(|&x| b[x]).collect() };
        let id: Vec<usize> = (0..degree).collect();
        let mut elements = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let x = compose(&elements[i], g);
                if !index.contains_key(&x) {
                    index.insert(x.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(x);
                }
            }
        }
        let n = elements.len();
        let mut mul = Vec::with_capacity(n * n);
        for a in &elements {
            for b in &elements {
                mul.push(index[&compose(a, b)] as u32);
            }
        }
        Self::from_flat(n, mul)
    }

    /// The cyclic group of order `n`.
    pub fn cyclic(n: usize) -> Self {
        Self::abelian(&[n])
    }

    /// Direct product of cyclic groups, elements in mixed-radix order.
    pub fn abelian(orders: &[usize]) -> Self {
        let n: usize = orders.iter().product();
        let digits = |mut x: usize| -> Vec<usize> {
            orders
                .iter()
                .rev()
                .map(|&o| {
                    let d = x % o;
                    x /= o;
                    d
                })
                .collect::<Vec<_>>()
                .into_iter()
                .rev()
                .collect()
        };
        let encode = |ds: &[usize]| ds.iter().zip(orders).fold(0, |acc, (&d, &o)| acc * o + d);
        let mut mul = Vec::with_capacity(n * n);
        for a in 0..n {
            let da = digits(a);
            for b in 0..n {
                let db = digits(b);
                let sum: Vec<usize> = da.iter().zip(&db).zip(orders).map(|((x, y), o)| (x + y) % o).collect();
                mul.push(encode(&sum) as u32);
            }
        }
        Self::from_flat(n, mul).expect("abelian table is valid")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    /// `a^{-1} b^{-1} a b`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a + 1..self.order).all(|b| self.commute(a, b)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Isomorphic copy with element `i` renamed `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let n = self.order;
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[perm[a] * n + perm[b]] = perm[self.mul(a, b)] as u32;
            }
        }
        Self::from_flat(n, mul).expect("relabelled table is valid")
    }

    /// Breadth-first spanning tree of the Cayley graph for right multiplication by
    /// `gens`: returns `(depth, parent, generator)` per element; the root is the identity.
    pub fn cayley_tree(&self, gens: &[usize]) -> Vec<Option<(usize, usize, usize)>> {
        let mut tree = vec![None; self.order];
        tree[self.identity] = Some((0, self.identity, self.identity));
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            let depth = tree[x].unwrap().0;
            for &g in gens {
                let y = self.mul(x, g);
                if tree[y].is_none() {
                    tree[y] = Some((depth + 1, x, g));
                    queue.push_back(y);
                }
            }
        }
        tree
    }

    /// A small generating set: elements are added greedily while they enlarge the span.
    /// For groups of prime-power order the span is taken modulo the Frattini subgroup,
    /// which makes the result minimal.
    pub fn generating_set(&self) -> Vec<usize> {
        let frattini: Vec<usize> = match prime_power(self.order) {
            Some((p, _)) => self.frattini_generators(p),
            None => Vec::new(),
        };
        let mut gens = Vec::new();
        let mut span = self.generate(&frattini);
        // prefer elements of large order, ties by index
        let mut candidates: Vec<usize> = (0..self.order).collect();
        candidates.sort_by_key(|&a| (std::cmp::Reverse(self.element_order(a)), a));
        for a in candidates {
            if span.len() == self.order {
                break;
            }
            if !span.contains(a) {
                gens.push(a);
                let mut all = gens.clone();
                all.extend(&frattini);
                span = self.generate(&all);
            }
        }
        gens
    }

    /// Commutators and `p`-th powers, which generate the Frattini subgroup of a `p`-group.
    fn frattini_generators(&self, p: usize) -> Vec<usize> {
        let mut set = ElementSet::singleton(self.order, self.identity);
        for a in 0..self.order {
            let mut x = self.identity;
            for _ in 0..p {
                x = self.mul(x, a);
            }
            set.insert(x);
            for b in 0..a {
                set.insert(self.commutator(a, b));
            }
        }
        set.iter().filter(|&x| x != self.identity).collect()
    }

    /// Whether the two tables describe isomorphic groups. Tries every image of a
    /// minimal generating set with matching element orders and extends along a Cayley
    /// tree.
    pub fn is_isomorphic(&self, other: &FiniteGroupTable) -> bool {
        if self.order != other.order {
            return false;
        }
        let orders = |t: &FiniteGroupTable| {
            let mut v: Vec<usize> = (0..t.order).map(|a| t.element_order(a)).collect();
            v.sort_unstable();
            v
        };
        if orders(self) != orders(other) || self.center().len() != other.center().len() {
            return false;
        }
        let gens = self.generating_set();
        let tree = self.cayley_tree(&gens);
        let mut bfs: Vec<usize> = (0..self.order).collect();
        bfs.sort_by_key(|&x| tree[x].unwrap().0);
        let candidates: Vec<Vec<usize>> = gens
            .iter()
            .map(|&g| (0..other.order).filter(|&y| other.element_order(y) == self.element_order(g)).collect())
            .collect();
        let mut choice = vec![0usize; gens.len()];
        loop {
            let images: Vec<usize> = choice.iter().zip(&candidates).map(|(&i, c)| c[i]).collect();
            if self.extends_to_isomorphism(other, &gens, &images, &tree, &bfs) {
                return true;
            }
            let mut k = 0;
            loop {
                if k == choice.len() {
                    return false;
                }
                choice[k] += 1;
                if choice[k] < candidates[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    }

    fn extends_to_isomorphism(
        &self,
        other: &FiniteGroupTable,
        gens: &[usize],
        images: &[usize],
        tree: &[Option<(usize, usize, usize)>],
        bfs: &[usize],
    ) -> bool {
        let mut f = vec![usize::MAX; self.order];
        f[self.identity] = other.identity;
        let image_of = |g: usize| images[gens.iter().position(|&x| x == g).unwrap()];
        for &x in bfs {
            if x == self.identity {
                continue;
            }
            let (_, parent, g) = tree[x].unwrap();
            f[x] = other.mul(f[parent], image_of(g));
        }
        let mut seen = vec![false; other.order];
        for &y in &f {
            if std::mem::replace(&mut seen[y], true) {
                return false;
            }
        }
        (0..self.order).all(|x| gens.iter().zip(images).all(|(&g, &h)| f[self.mul(x, g)] == other.mul(f[x], h)))
    }

    /// Subgroup generated by `gens`.
    pub fn generate(&self, gens: &[usize]) -> ElementSet {
        let mut set = ElementSet::singleton(self.order, self.identity);
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        set
    }

    pub fn whole(&self) -> ElementSet {
        ElementSet {
            member: vec![true; self.order],
            count: self.order,
        }
    }

    /// `[H, K]`, generated by all commutators.
    pub fn commutator_subgroup(&self, h: &ElementSet, k: &ElementSet) -> ElementSet {
        let mut gens = ElementSet::singleton(self.order, self.identity);
        for a in h.iter() {
            for b in k.iter() {
                gens.insert(self.commutator(a, b));
            }
        }
        let list: Vec<usize> = gens.iter().collect();
        self.generate(&list)
    }

    /// Lower central series `gamma_1 = G, gamma_2, ...` down to the first repeated term.
    pub fn lower_central_series(&self) -> Vec<ElementSet> {
        let g = self.whole();
        let mut series = vec![g.clone()];
        loop {
            let next = self.commutator_subgroup(series.last().unwrap(), &g);
            if next == *series.last().unwrap() {
                return series;
            }
            let done = next.len() == 1;
            series.push(next);
            if done {
                return series;
            }
        }
    }

    /// Nilpotency class, or `None` when the series stalls above the trivial group.
    pub fn nilpotency_class(&self) -> Option<usize> {
        let series = self.lower_central_series();
        (series.last().unwrap().len() == 1).then(|| series.len() - 1)
    }

    pub fn center(&self) -> ElementSet {
        self.centralizer(&self.whole())
    }

    pub fn centralizer(&self, s: &ElementSet) -> ElementSet {
        let mut out = ElementSet::empty(self.order);
        for a in 0..self.order {
            if s.iter().all(|b| self.commute(a, b)) {
                out.insert(a);
            }
        }
        out
    }

    pub fn is_abelian_subset(&self, s: &ElementSet) -> bool {
        let v: Vec<usize> = s.iter().collect();
        v.iter().enumerate().all(|(i, &a)| v[i + 1..].iter().all(|&b| self.commute(a, b)))
    }

    /// Whether the order is `q^n` for a prime `q` and the class is `n - 1`.
    pub fn is_maximal_class(&self) -> bool {
        let Some((_, n)) = prime_power(self.order) else {
            return false;
        };
        n >= 2 && self.nilpotency_class() == Some(n - 1)
    }

    /// `C_G(P_2 / P_4)` for a group of maximal class, with `P_i = gamma_i`.
    pub fn p1_subgroup(&self) -> Option<ElementSet> {
        if !self.is_maximal_class() {
            return None;
        }
        let series = self.lower_central_series();
        if series.len() < 4 {
            return None;
        }
        let (p2, p4) = (&series[1], &series[3]);
        let mut out = ElementSet::empty(self.order);
        for a in 0..self.order {
            if p2.iter().all(|b| p4.contains(self.commutator(a, b))) {
                out.insert(a);
            }
        }
        Some(out)
    }

    /// `[P_1, P_1] == [P_1, gamma_{n-2}]` for a group of maximal class of order `q^n`, `n >= 4`.
    pub fn theorem1_predicate(&self) -> Option<bool> {
        let p1 = self.p1_subgroup()?;
        let (_, n) = prime_power(self.order)?;
        let series = self.lower_central_series();
        let gamma = &series[n - 3];
        Some(self.commutator_subgroup(&p1, &p1) == self.commutator_subgroup(&p1, gamma))
    }
}

/// `(q, n)` with `order = q^n` for a prime `q`.
pub fn prime_power(order: usize) -> Option<(usize, usize)> {
    if order < 2 {
        return None;
    }
    let q = (2..=order).find(|d| order % d == 0)?;
    let mut x = order;
    let mut n = 0;
    while x % q == 0 {
        x /= q;
        n += 1;
    }
    (x == 1).then_some((q, n))
}

/// A set of group elements as a membership bitmap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementSet {
    member: Vec<bool>,
    count: usize,
}

impl ElementSet {
    pub fn empty(order: usize) -> Self {
        ElementSet {
            member: vec![false; order],
            count: 0,
        }
    }

    pub fn singleton(order: usize, x: usize) -> Self {
        let mut s = Self::empty(order);
        s.insert(x);
        s
    }

    pub fn insert(&mut self, x: usize) -> bool {
        if self.member[x] {
            return false;
        }
        self.member[x] = true;
        self.count += 1;
        true
    }

    pub fn contains(&self, x: usize) -> bool {
        self.member[x]
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.member
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i)
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.iter().all(|x| other.contains(x))
    }
}
