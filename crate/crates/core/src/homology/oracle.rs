use std::time::{Duration, Instant};

use crate::zlinalg::{
    kernel_lattice, quotient_invariants, sparse_from_pairs, AbelianInvariants, Int, IntMatrix, ModVec,
    PrimePowerEchelon, SparseEchelon, SparseVec,
};

use super::{prime_power, FiniteGroupTable, HomologyError, DEFAULT_ORACLE_CAP, LARGE_ORDER};

/// Orders up to this get the redundant pass over every 3-chain by default.
pub const FULL_PASS_LIMIT: usize = 64;
/// Orders up to this are cross-checked against the literal kernel quotient by default.
pub const LITERAL_CHECK_LIMIT: usize = 16;

#[derive(Clone, Debug)]
pub struct OracleOptions {
    pub cap: usize,
    /// Required for orders above 128.
    pub allow_large: bool,
    /// Also push every boundary `d[a|b|c]`, not only those with `c` a generator.
    /// `None` decides by order.
    pub full_pass: Option<bool>,
    /// Recompute via `ker d2 / (im d3 + cycles)` directly. `None` decides by order.
    pub literal_check: Option<bool>,
    /// For groups of order `p^n`, eliminate over `Z/p^(n+1)` instead of `Z`. The
    /// exponent of `H_2` divides the group order, so nothing is lost. `None` means yes
    /// whenever the order is a prime power.
    pub modular: Option<bool>,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            cap: DEFAULT_ORACLE_CAP,
            allow_large: false,
            full_pass: None,
            literal_check: None,
            modular: None,
        }
    }
}

impl OracleOptions {
    /// Defaults with the cap taken from `MAXCLASS_ORACLE_CAP` when set.
    pub fn from_env() -> Self {
        let mut o = Self::default();
        if let Some(cap) = std::env::var("MAXCLASS_ORACLE_CAP").ok().and_then(|s| s.trim().parse().ok()) {
            o.cap = cap;
        }
        o
    }

    pub fn allow_large(mut self, yes: bool) -> Self {
        self.allow_large = yes;
        self
    }

    fn check(&self, order: usize) -> Result<(), HomologyError> {
        if order > self.cap {
            return Err(HomologyError::TooLarge { order, cap: self.cap });
        }
        if order > LARGE_ORDER {
            if !self.allow_large {
                return Err(HomologyError::LargeRunNotEnabled { order });
            }
            log::warn!("homology oracle on a group of order {order}; this can take a long time");
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct OracleReport {
    pub order: usize,
    pub schur: AbelianInvariants,
    pub b0: AbelianInvariants,
    pub generators: Vec<usize>,
    pub relations: usize,
    pub full_pass: bool,
    pub literal_checked: bool,
    /// Modulus of the elimination, `None` for exact integers.
    pub modulus: Option<u64>,
    pub commuting_pairs: usize,
    pub elapsed: Duration,
}

/// `[a|b] - [b|a]` for commuting non-identity `a`, `b`; coordinates in the natural
/// 2-chain basis `(a', b') -> a' (N-1) + b'` over non-identity elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleVector {
    pub a: usize,
    pub b: usize,
    pub vector: SparseVec,
}

/// Non-identity elements and their indices.
struct Labels {
    of_element: Vec<u32>,
    element: Vec<usize>,
}

impl Labels {
    fn new(t: &FiniteGroupTable) -> Self {
        let mut of_element = vec![u32::MAX; t.order()];
        let mut element = Vec::with_capacity(t.order() - 1);
        for x in 0..t.order() {
            if x != t.identity() {
                of_element[x] = element.len() as u32;
                element.push(x);
            }
        }
        Labels { of_element, element }
    }

    fn get(&self, x: usize) -> Option<usize> {
        match self.of_element[x] {
            u32::MAX => None,
            i => Some(i as usize),
        }
    }

    fn len(&self) -> usize {
        self.element.len()
    }
}

fn natural_index(labels: &Labels, a: usize, b: usize) -> Option<usize> {
    Some(labels.get(a)? * labels.len() + labels.get(b)?)
}

/// Boundary of 2-chains in the normalized bar complex: `d[a|b] = [b] - [ab] + [a]`.
/// Rows are 2-chains in natural order, columns the non-identity elements.
pub fn boundary2(t: &FiniteGroupTable) -> Result<IntMatrix, HomologyError> {
    OracleOptions::default().check(t.order()).or_else(|e| match e {
        HomologyError::LargeRunNotEnabled { .. } => Ok(()),
        other => Err(other),
    })?;
    let labels = Labels::new(t);
    let k = labels.len();
    let mut rows = Vec::with_capacity(k * k);
    for &a in &labels.element {
        for &b in &labels.element {
            let mut v = vec![(labels.get(b).unwrap(), Int::ONE), (labels.get(a).unwrap(), Int::ONE)];
            if let Some(ab) = labels.get(t.mul(a, b)) {
                v.push((ab, Int::NEG_ONE));
            }
            rows.push(sparse_from_pairs(v));
        }
    }
    Ok(IntMatrix::from_sparse_rows(k, rows))
}

fn boundary3_terms(t: &FiniteGroupTable, a: usize, b: usize, c: usize) -> [(usize, usize, i64); 4] {
    [
        (b, c, 1),
        (t.mul(a, b), c, -1),
        (a, t.mul(b, c), 1),
        (a, b, -1),
    ]
}

/// Boundaries `d[a|b|c] = [b|c] - [ab|c] + [a|bc] - [a|b]` of all non-degenerate
/// 3-chains, in natural 2-chain coordinates, streamed in `(a, b, c)` order.
pub fn boundary3(t: &FiniteGroupTable) -> impl Iterator<Item = SparseVec> + '_ {
    let labels = Labels::new(t);
    let elems = labels.element.clone();
    let triples = elems.clone().into_iter().flat_map(move |a| {
        let elems = elems.clone();
        elems.clone().into_iter().flat_map(move |b| elems.clone().into_iter().map(move |c| (a, b, c)))
    });
    triples.map(move |(a, b, c)| {
        sparse_from_pairs(
            boundary3_terms(t, a, b, c)
                .into_iter()
                .filter_map(|(x, y, s)| natural_index(&labels, x, y).map(|i| (i, Int::from(s)))),
        )
    })
}

/// `z_{a,b}` for every ordered pair of distinct commuting non-identity elements.
pub fn commuting_pair_cycles(t: &FiniteGroupTable) -> Result<Vec<CycleVector>, HomologyError> {
    OracleOptions {
        allow_large: true,
        ..Default::default()
    }
    .check(t.order())?;
    let labels = Labels::new(t);
    let d2 = boundary2(t)?;
    let mut out = Vec::new();
    for &a in &labels.element {
        for &b in &labels.element {
            if a == b || !t.commute(a, b) {
                continue;
            }
            let vector = sparse_from_pairs([
                (natural_index(&labels, a, b).unwrap(), Int::ONE),
                (natural_index(&labels, b, a).unwrap(), Int::NEG_ONE),
            ]);
            if !d2.left_mul(&vector).is_empty() {
                return Err(HomologyError::Invariant(format!("z({a},{b}) is not a cycle")));
            }
            out.push(CycleVector { a, b, vector });
        }
    }
    Ok(out)
}

/// Column layout for the elimination: 2-chains `[a|d]` ordered by decreasing depth of
/// `d` in a breadth-first Cayley tree, so that the tree relations
/// `d[a|b|c]` (`c` a generator, `b` the tree parent of `d = bc`) lead with `[a|d]` and
/// coefficient 1.
struct Layout {
    labels: Labels,
    block_of: Vec<usize>,
    generators: Vec<usize>,
    tree: Vec<Option<(usize, usize, usize)>>,
}

impl Layout {
    fn new(t: &FiniteGroupTable) -> Self {
        let labels = Labels::new(t);
        let generators = t.generating_set();
        let tree = t.cayley_tree(&generators);
        let mut order: Vec<usize> = labels.element.clone();
        order.sort_by_key(|&d| (std::cmp::Reverse(tree[d].unwrap().0), d));
        let mut block_of = vec![usize::MAX; t.order()];
        for (pos, &d) in order.iter().enumerate() {
            block_of[d] = pos;
        }
        Layout {
            labels,
            block_of,
            generators,
            tree,
        }
    }

    fn column(&self, a: usize, d: usize) -> Option<usize> {
        let ai = self.labels.get(a)?;
        if d == self.labels.of_element.len() || self.block_of[d] == usize::MAX {
            return None;
        }
        Some(self.block_of[d] * self.labels.len() + ai)
    }

    fn ncols(&self) -> usize {
        self.labels.len() * self.labels.len()
    }

    fn boundary3(&self, t: &FiniteGroupTable, a: usize, b: usize, c: usize) -> Vec<(usize, i64)> {
        boundary3_terms(t, a, b, c)
            .into_iter()
            .filter_map(|(x, y, s)| self.column(x, y).map(|i| (i, s)))
            .collect()
    }
}

/// The two elimination backends: exact integers, or residues modulo a prime power.
trait Eliminator {
    fn push(&mut self, terms: &[(usize, i64)]);
    fn has(&self, terms: &[(usize, i64)]) -> bool;
    /// Torsion of the cokernel and its free rank.
    fn split(&self) -> (AbelianInvariants, usize);
}

impl Eliminator for SparseEchelon {
    fn push(&mut self, terms: &[(usize, i64)]) {
        self.insert(sparse_from_pairs(terms.iter().map(|&(i, s)| (i, Int::from(s)))));
    }

    fn has(&self, terms: &[(usize, i64)]) -> bool {
        self.contains(&sparse_from_pairs(terms.iter().map(|&(i, s)| (i, Int::from(s)))))
    }

    fn split(&self) -> (AbelianInvariants, usize) {
        let inv = self.cokernel();
        let free = inv.free_rank;
        (
            AbelianInvariants {
                torsion: inv.torsion,
                free_rank: 0,
            },
            free,
        )
    }
}

fn mod_vector(e: &PrimePowerEchelon, terms: &[(usize, i64)]) -> ModVec {
    let mut acc: Vec<(usize, i64)> = terms.to_vec();
    acc.sort_unstable_by_key(|&(i, _)| i);
    let mut out: ModVec = Vec::with_capacity(acc.len());
    for (i, s) in acc {
        match out.last_mut() {
            Some((j, x)) if *j == i => *x = (*x + e.residue(s)) % e.modulus(),
            _ => out.push((i, e.residue(s))),
        }
    }
    out.retain(|&(_, x)| x != 0);
    out
}

impl Eliminator for PrimePowerEchelon {
    fn push(&mut self, terms: &[(usize, i64)]) {
        let v = mod_vector(self, terms);
        self.insert(v);
    }

    fn has(&self, terms: &[(usize, i64)]) -> bool {
        self.contains(&mod_vector(self, terms))
    }

    fn split(&self) -> (AbelianInvariants, usize) {
        let c = self.cokernel();
        (c.torsion, c.full)
    }
}

/// Invariants of `C_2 / B_2`: its torsion is `H_2(G)` and its free part has rank
/// `N - 1` (the boundaries of 1-chains).
struct Reduction {
    relations: usize,
    full_pass: bool,
    generators: Vec<usize>,
}

fn reduce_boundaries<E: Eliminator>(
    t: &FiniteGroupTable,
    layout: &Layout,
    full_pass: bool,
    ech: &mut E,
) -> Result<Reduction, HomologyError> {
    let mut relations = 0;
    let elems = &layout.labels.element;
    // tree relations first: they pivot out every [a|d] with d outside the generators
    for &d in elems {
        let (depth, parent, gen) = layout.tree[d].expect("generators generate");
        if depth < 2 {
            continue;
        }
        for &a in elems {
            ech.push(&layout.boundary3(t, a, parent, gen));
            relations += 1;
        }
    }
    // boundaries with last entry a generator span all of B_2
    for &a in elems {
        for &b in elems {
            for &c in &layout.generators {
                ech.push(&layout.boundary3(t, a, b, c));
                relations += 1;
            }
        }
    }
    if full_pass {
        for &a in elems {
            for &b in elems {
                for &c in elems {
                    if !ech.has(&layout.boundary3(t, a, b, c)) {
                        return Err(HomologyError::Invariant(format!(
                            "boundary of [{a}|{b}|{c}] escaped the generator-last span"
                        )));
                    }
                    relations += 1;
                }
            }
        }
    }
    Ok(Reduction {
        relations,
        full_pass,
        generators: layout.generators.clone(),
    })
}

fn torsion_checked((torsion, free): (AbelianInvariants, usize), expected_free: usize, what: &str) -> Result<AbelianInvariants, HomologyError> {
    if free != expected_free {
        return Err(HomologyError::Invariant(format!(
            "{what}: free rank {free} but boundaries of 1-chains have rank {expected_free}"
        )));
    }
    Ok(torsion)
}

/// `H_2` and `B_0` with one backend; also the number of commuting pairs.
fn homology_with<E: Eliminator>(
    t: &FiniteGroupTable,
    layout: &Layout,
    full_pass: bool,
    mut ech: E,
) -> Result<(AbelianInvariants, AbelianInvariants, Reduction, usize), HomologyError> {
    let k = t.order() - 1;
    let red = reduce_boundaries(t, layout, full_pass, &mut ech)?;
    let schur = torsion_checked(ech.split(), k, "H_2")?;
    let mut pairs = 0;
    for &a in &layout.labels.element {
        for &b in &layout.labels.element {
            if a != b && t.commute(a, b) {
                ech.push(&[(layout.column(a, b).unwrap(), 1), (layout.column(b, a).unwrap(), -1)]);
                pairs += 1;
            }
        }
    }
    let b0 = torsion_checked(ech.split(), k, "B_0")?;
    Ok((schur, b0, red, pairs))
}

/// `H_2(G, Z)`.
pub fn schur_multiplier(t: &FiniteGroupTable) -> Result<AbelianInvariants, HomologyError> {
    Ok(b0_oracle_with(t, &OracleOptions::from_env().allow_large(true))?.schur)
}

/// `B_0(G)`, as `H_2(G, Z)` modulo the classes of commuting-pair cycles.
pub fn b0_oracle(t: &FiniteGroupTable) -> Result<AbelianInvariants, HomologyError> {
    Ok(b0_oracle_with(t, &OracleOptions::from_env())?.b0)
}

pub fn b0_oracle_with(t: &FiniteGroupTable, opts: &OracleOptions) -> Result<OracleReport, HomologyError> {
    let start = Instant::now();
    let n = t.order();
    opts.check(n)?;
    if n == 1 {
        return Ok(OracleReport {
            order: 1,
            schur: AbelianInvariants::trivial(),
            b0: AbelianInvariants::trivial(),
            generators: Vec::new(),
            relations: 0,
            full_pass: false,
            literal_checked: false,
            modulus: None,
            commuting_pairs: 0,
            elapsed: start.elapsed(),
        });
    }
    let layout = Layout::new(t);
    let full_pass = opts.full_pass.unwrap_or(n <= FULL_PASS_LIMIT);
    let modulus = match (prime_power(n), opts.modular) {
        (Some((p, e)), None | Some(true)) => Some((p as u64, e as u32 + 1)),
        (None, Some(true)) => {
            return Err(HomologyError::Invariant(format!("modular elimination needs a prime-power order, got {n}")))
        }
        _ => None,
    };
    let (schur, b0, red, pairs) = match modulus {
        Some((p, e)) => homology_with(t, &layout, full_pass, PrimePowerEchelon::new(p, e, layout.ncols()))?,
        None => homology_with(t, &layout, full_pass, SparseEchelon::new(layout.ncols()))?,
    };

    let literal_checked = opts.literal_check.unwrap_or(n <= LITERAL_CHECK_LIMIT);
    if literal_checked {
        let (s, b) = literal_invariants(t)?;
        if s != schur || b != b0 {
            return Err(HomologyError::Invariant(format!(
                "literal kernel quotient gives H_2 = {s}, B_0 = {b}; elimination gave {schur}, {b0}"
            )));
        }
    }
    Ok(OracleReport {
        order: n,
        schur,
        b0,
        generators: red.generators,
        relations: red.relations,
        full_pass: red.full_pass,
        literal_checked,
        modulus: modulus.map(|(p, e)| p.pow(e)),
        commuting_pairs: pairs,
        elapsed: start.elapsed(),
    })
}

/// `ker d2 / im d3` and `ker d2 / (im d3 + cycles)` computed literally; small orders only.
pub fn literal_invariants(t: &FiniteGroupTable) -> Result<(AbelianInvariants, AbelianInvariants), HomologyError> {
    let d2 = boundary2(t)?;
    let kernel = kernel_lattice(&d2);
    let mut image = IntMatrix::empty(d2.nrows());
    for v in boundary3(t) {
        if !v.is_empty() {
            image.push_row(v);
        }
    }
    let to_h = |e: crate::zlinalg::LinalgError| HomologyError::Invariant(e.to_string());
    let schur = quotient_invariants(&kernel, &image).map_err(to_h)?;
    for z in commuting_pair_cycles(t)? {
        image.push_row(z.vector);
    }
    let b0 = quotient_invariants(&kernel, &image).map_err(to_h)?;
    Ok((schur, b0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zlinalg::Int;

    fn c(factors: &[u64]) -> AbelianInvariants {
        AbelianInvariants::from_torsion(factors.iter().copied())
    }

    #[test]
    fn boundary_identities() {
        let t = FiniteGroupTable::abelian(&[2, 2]);
        let d2 = boundary2(&t).unwrap();
        assert_eq!(d2.nrows(), 9);
        // [a|a] for a of order 2 maps to 2[a]
        assert_eq!(d2.row(0), &vec![(0, Int::from(2))]);
        let s3 = FiniteGroupTable::from_permutations(&[vec![1, 2, 0], vec![1, 0, 2]]).unwrap();
        let d2 = boundary2(&s3).unwrap();
        let mut count = 0;
        for col in boundary3(&s3) {
            assert!(d2.left_mul(&col).is_empty());
            count += 1;
        }
        assert_eq!(count, 125);
    }

    #[test]
    fn schur_multipliers_of_small_groups() {
        for n in [1, 2, 5, 8] {
            assert!(schur_multiplier(&FiniteGroupTable::cyclic(n)).unwrap().is_trivial());
        }
        assert_eq!(schur_multiplier(&FiniteGroupTable::abelian(&[2, 2])).unwrap(), c(&[2]));
        assert_eq!(schur_multiplier(&FiniteGroupTable::abelian(&[3, 3])).unwrap(), c(&[3]));
        assert_eq!(schur_multiplier(&FiniteGroupTable::abelian(&[2, 2, 2])).unwrap(), c(&[2, 2, 2]));
        let q8 = crate::group::classical_2group(crate::group::ClassicalKind::Quaternion, 4).unwrap();
        assert!(schur_multiplier(&q8).unwrap().is_trivial());
        let d8 = FiniteGroupTable::from_permutations(&[vec![1, 2, 3, 0], vec![3, 2, 1, 0]]).unwrap();
        assert_eq!(schur_multiplier(&d8).unwrap(), c(&[2]));
    }

    #[test]
    fn commuting_cycles() {
        let t = FiniteGroupTable::abelian(&[3]);
        let z = commuting_pair_cycles(&t).unwrap();
        assert_eq!(z.len(), 2);
        let s3 = FiniteGroupTable::from_permutations(&[vec![1, 2, 0], vec![1, 0, 2]]).unwrap();
        // only the two 3-cycles commute among non-identity elements
        assert_eq!(commuting_pair_cycles(&s3).unwrap().len(), 2);
    }

    #[test]
    fn b0_of_abelian_groups_is_trivial() {
        for t in [FiniteGroupTable::abelian(&[2, 2]), FiniteGroupTable::abelian(&[3, 3]), FiniteGroupTable::abelian(&[2, 4])] {
            let r = b0_oracle_with(&t, &OracleOptions::default()).unwrap();
            assert!(r.b0.is_trivial());
            assert!(r.literal_checked);
        }
    }

    #[test]
    fn caps_are_enforced() {
        let t = FiniteGroupTable::cyclic(200);
        assert!(matches!(
            b0_oracle_with(&t, &OracleOptions::default()),
            Err(HomologyError::LargeRunNotEnabled { .. })
        ));
        let opts = OracleOptions { cap: 100, ..Default::default() };
        assert!(matches!(b0_oracle_with(&t, &opts), Err(HomologyError::TooLarge { .. })));
    }
}
