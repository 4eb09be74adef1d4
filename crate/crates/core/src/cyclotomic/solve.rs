use crate::zlinalg::{
    kernel_lattice, rem_floor, smith_form, sparse_from_pairs, to_i64, Int, IntMatrix, Lattice, SparseEchelon,
    SparseVec,
};

use super::alpha::{check_parameters, pair_count, pair_index, AlphaMap};
use super::ring::{CycElement, CycRing};
use super::CycError;

/// One generator of the group of admissible commutator tables.
#[derive(Clone, Debug)]
pub struct AlphaSolution {
    pub alpha: AlphaMap,
    /// Additive order of this table in the solution group.
    pub order: u64,
    pub surjective: bool,
}

/// The finite abelian group of all equivariant alternating maps
/// `L^2(O/p^(m-1)) -> O/p^(n-m)`, given by independent generators.
#[derive(Clone, Debug)]
pub struct AlphaSolutions {
    pub p: u32,
    pub m: usize,
    pub n: usize,
    pub generators: Vec<AlphaSolution>,
    lattice: Lattice,
}

impl AlphaSolutions {
    /// Number of distinct maps.
    pub fn count(&self) -> Int {
        self.generators
            .iter()
            .fold(Int::ONE, |acc, g| acc * Int::from(g.order))
    }

    /// Whether `alpha` (for the same parameters) is in the solution group.
    pub fn contains(&self, alpha: &AlphaMap) -> bool {
        if (alpha.p(), alpha.m(), alpha.n()) != (self.p, self.m, self.n) {
            return false;
        }
        self.lattice.contains(&table_vector(alpha))
    }

    pub fn any_surjective(&self) -> bool {
        self.generators.iter().any(|g| g.surjective)
    }

    /// Every solution, zero map first. Fails when there are more than `limit`.
    pub fn enumerate(&self, limit: u64) -> Result<Vec<AlphaMap>, CycError> {
        let total = self.count();
        if total > Int::from(limit) {
            return Err(CycError::BadParameters(format!(
                "{total} solutions exceed the enumeration limit {limit}"
            )));
        }
        let target = CycRing::new(self.p, self.n - self.m)?;
        let pairs = pair_count(self.m - 1);
        let mut out = Vec::new();
        let mut coeffs = vec![0u64; self.generators.len()];
        loop {
            let table: Vec<CycElement> = (0..pairs)
                .map(|q| {
                    let mut acc = vec![0i64; target.precision()];
                    for (g, &c) in self.generators.iter().zip(&coeffs) {
                        for (t, &d) in g.alpha.table()[q].digits().iter().enumerate() {
                            acc[t] += c as i64 * d as i64;
                        }
                    }
                    target.from_ints(&acc)
                })
                .collect();
            out.push(AlphaMap::custom_unchecked(self.p, self.m, self.n, table)?);
            let mut i = 0;
            loop {
                if i == coeffs.len() {
                    return Ok(out);
                }
                coeffs[i] += 1;
                if coeffs[i] < self.generators[i].order {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
        }
    }
}

fn table_vector(alpha: &AlphaMap) -> SparseVec {
    let k = alpha.n() - alpha.m();
    let pairs: Vec<(usize, Int)> = alpha
        .table()
        .iter()
        .enumerate()
        .flat_map(|(q, v)| {
            v.digits()
                .iter()
                .enumerate()
                .map(move |(t, &d)| (q * k + t, Int::from(d)))
        })
        .collect();
    sparse_from_pairs(pairs)
}

/// Linear equations on the unknown table, one block of `k` target coordinates each.
/// Every term is `(pair, sign)` applied coordinatewise, plus an optional `-theta` term.
struct Equation {
    terms: Vec<(usize, i64)>,
    minus_theta: Option<usize>,
}

fn signed_pair(d: usize, a: usize, b: usize) -> Option<(usize, i64)> {
    match a.cmp(&b) {
        std::cmp::Ordering::Less => Some((pair_index(d, a, b), 1)),
        std::cmp::Ordering::Greater => Some((pair_index(d, b, a), -1)),
        std::cmp::Ordering::Equal => None,
    }
}

fn equations(source: &CycRing) -> Vec<Equation> {
    let d = source.precision();
    let mut eqs = Vec::new();
    for r in source.relation_rows() {
        for w in 0..d {
            let terms: Vec<(usize, i64)> = r
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .filter_map(|(v, &c)| signed_pair(d, v, w).map(|(q, s)| (q, s * c)))
                .collect();
            if !terms.is_empty() {
                eqs.push(Equation {
                    terms,
                    minus_theta: None,
                });
            }
        }
    }
    for u in 0..d {
        for v in u + 1..d {
            let left: Vec<usize> = [u, u + 1].into_iter().filter(|&x| x < d).collect();
            let right: Vec<usize> = [v, v + 1].into_iter().filter(|&x| x < d).collect();
            let mut terms = Vec::new();
            for &a in &left {
                for &b in &right {
                    terms.extend(signed_pair(d, a, b));
                }
            }
            eqs.push(Equation {
                terms,
                minus_theta: Some(pair_index(d, u, v)),
            });
        }
    }
    eqs
}

/// All admissible commutator tables for `(p, m, n)`.
///
/// The unknown table is a vector `X` in `Z^(N k)` with `N` pairs and `k = n - m`. Each
/// condition asks that an integer linear image of `X` lie in the relation lattice `L`
/// of `O/p^k`; adding one auxiliary multiplier vector per condition turns the system
/// into an integer kernel. Projecting the kernel to `X` gives the lattice `S` of valid
/// lifts, and `S / L^N` is diagonalized with Smith transforms.
pub fn alpha_solve(p: u32, m: usize, n: usize) -> Result<AlphaSolutions, CycError> {
    check_parameters(p, m, n)?;
    let source = CycRing::new(p, m - 1)?;
    let target = CycRing::new(p, n - m)?;
    let d = m - 1;
    let k = n - m;
    let pairs = pair_count(d);
    let unknowns = pairs * k;
    if k == 0 {
        return Ok(AlphaSolutions {
            p,
            m,
            n,
            generators: Vec::new(),
            lattice: Lattice::zero(0),
        });
    }
    let eqs = equations(&source);
    let cols = eqs.len() * k;
    let mut rows: Vec<Vec<(usize, i64)>> = vec![Vec::new(); unknowns + cols];
    for (e, eq) in eqs.iter().enumerate() {
        for &(q, c) in &eq.terms {
            for t in 0..k {
                rows[q * k + t].push((e * k + t, c));
            }
        }
        if let Some(q) = eq.minus_theta {
            for t in 0..k {
                rows[q * k + t].push((e * k + t, -1));
                if t + 1 < k {
                    rows[q * k + t].push((e * k + t + 1, -1));
                }
            }
        }
    }
    let relations = target.relation_rows();
    for e in 0..eqs.len() {
        for (s, rel) in relations.iter().enumerate() {
            for (t, &c) in rel.iter().enumerate() {
                if c != 0 {
                    rows[unknowns + e * k + s].push((e * k + t, -c));
                }
            }
        }
    }
    let matrix = IntMatrix::from_sparse_rows(
        cols,
        rows.into_iter()
            .map(|r| sparse_from_pairs(r.into_iter().map(|(c, x)| (c, Int::from(x)))))
            .collect(),
    );
    let kernel = kernel_lattice(&matrix);
    let projected = kernel.rows().iter().map(|r| {
        r.iter()
            .filter(|(c, _)| *c < unknowns)
            .cloned()
            .collect::<SparseVec>()
    });
    let lattice = Lattice::from_generators(unknowns, projected);

    // coordinates of L^N in the basis of S
    let mut ech = SparseEchelon::new(unknowns);
    for b in lattice.basis() {
        ech.insert(b.clone());
    }
    let mut coords = IntMatrix::empty(lattice.rank());
    for q in 0..pairs {
        for rel in &relations {
            let v = sparse_from_pairs(
                rel.iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(t, &c)| (q * k + t, Int::from(c))),
            );
            let sol = ech.solve(&v).ok_or_else(|| {
                CycError::InvalidAlpha("zero tables missing from the solution lattice".into())
            })?;
            coords.push_row(sparse_from_pairs(sol));
        }
    }
    let smith = smith_form(&coords);
    let basis = lattice.as_matrix().to_dense();
    let moduli: Vec<Int> = (0..k)
        .map(|t| Int::from(p).pow((k - t).div_ceil(p as usize - 1)))
        .collect();
    let mut generators = Vec::new();
    for (i, dgt) in smith.diag.iter().enumerate() {
        if *dgt <= Int::ONE {
            continue;
        }
        let mut x = vec![Int::ZERO; unknowns];
        for (j, c) in smith.right_inv[i].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (xi, b) in x.iter_mut().zip(&basis[j]) {
                *xi += c * b;
            }
        }
        let table: Vec<CycElement> = (0..pairs)
            .map(|q| {
                let ints: Vec<i64> = (0..k)
                    .map(|t| to_i64(&rem_floor(&x[q * k + t], &moduli[t])))
                    .collect();
                target.from_ints(&ints)
            })
            .collect();
        let alpha = AlphaMap::custom_unchecked(p, m, n, table)?;
        alpha.validate()?;
        let surjective = alpha.is_surjective();
        generators.push(AlphaSolution {
            alpha,
            order: crate::zlinalg::to_u64(dgt),
            surjective,
        });
    }
    Ok(AlphaSolutions {
        p,
        m,
        n,
        generators,
        lattice,
    })
}
