use super::echelon::SparseEchelon;
use super::int::{div_floor, Int};
use super::matrix::{axpy, sparse_from_dense, IntMatrix, SparseVec};
use super::{smith_form, smith_invariants, AbelianInvariants, LinalgError};

/// Reduced Hermite basis of the row lattice: strictly increasing leading columns,
/// positive leads, and entries above each lead reduced into `[0, lead)`.
pub fn hermite_rows(ncols: usize, generators: impl IntoIterator<Item = SparseVec>) -> Vec<SparseVec> {
    let mut ech = SparseEchelon::fully_reduced(ncols);
    for g in generators {
        ech.insert(g);
    }
    let mut rows = ech.sorted_rows();
    for i in 0..rows.len() {
        let (lead, d) = rows[i][0].clone();
        for j in 0..i {
            let x = match rows[j].binary_search_by_key(&lead, |(c, _)| *c) {
                Ok(k) => rows[j][k].1.clone(),
                Err(_) => continue,
            };
            let q = div_floor(&x, &d);
            if !q.is_zero() {
                rows[j] = axpy(&rows[j], &(-q), &rows[i]);
            }
        }
    }
    rows
}

/// A sublattice of `Z^dim` in canonical (reduced Hermite) form; equality of
/// `Lattice` values is equality of lattices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: usize,
    basis: Vec<SparseVec>,
}

impl Lattice {
    pub fn from_generators(dim: usize, gens: impl IntoIterator<Item = SparseVec>) -> Self {
        Lattice {
            dim,
            basis: hermite_rows(dim, gens),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Lattice {
            dim,
            basis: Vec::new(),
        }
    }

    pub fn full(dim: usize) -> Self {
        Lattice {
            dim,
            basis: (0..dim).map(|i| vec![(i, Int::ONE)]).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.basis
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        let mut v = v.clone();
        for row in &self.basis {
            let (lead, d) = &row[0];
            let Some((c, a)) = v.first().cloned() else {
                return true;
            };
            if c < *lead {
                return false;
            }
            if c > *lead {
                continue;
            }
            if !(&a % d).is_zero() {
                return false;
            }
            v = axpy(&v, &(-(&a / d)), row);
        }
        v.is_empty()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.dim, other.dim);
        Lattice::from_generators(self.dim, self.basis.iter().chain(other.basis.iter()).cloned())
    }

    /// Index `[Z^dim : L]` for a full-rank lattice.
    pub fn index(&self) -> Option<Int> {
        if self.rank() < self.dim {
            return None;
        }
        Some(self.basis.iter().fold(Int::ONE, |acc, r| acc * &r[0].1))
    }

    /// Invariants of `Z^dim / L`.
    pub fn quotient_of_ambient(&self) -> AbelianInvariants {
        smith_invariants(&IntMatrix::from_sparse_rows(self.dim, self.basis.clone()))
    }

    pub fn as_matrix(&self) -> IntMatrix {
        IntMatrix::from_sparse_rows(self.dim, self.basis.clone())
    }
}

/// Saturated basis of the left kernel `{v : v M = 0}`.
///
/// With `L M R = D` in Smith form and `L` unimodular, the rows of `L` past the rank
/// of `D` form a basis of the kernel.
pub fn kernel_lattice(m: &IntMatrix) -> IntMatrix {
    let r = m.nrows();
    if m.ncols() == 0 {
        return IntMatrix::identity(r);
    }
    let f = smith_form(m);
    let rank = f.rank();
    let kernel: Vec<SparseVec> = f.left[rank..].iter().map(|row| sparse_from_dense(row)).collect();
    let basis = hermite_rows(r, kernel);
    IntMatrix::from_sparse_rows(r, basis)
}

/// Invariants of `span(ambient) / span(sub)`.
///
/// Each row of `sub` must lie in the lattice spanned by `ambient`.
pub fn quotient_invariants(
    ambient: &IntMatrix,
    sub: &IntMatrix,
) -> Result<AbelianInvariants, LinalgError> {
    if ambient.ncols() != sub.ncols() {
        return Err(LinalgError::Dimension(format!(
            "ambient has {} columns, sub-generators {}",
            ambient.ncols(),
            sub.ncols()
        )));
    }
    let mut ech = SparseEchelon::fully_reduced(ambient.ncols());
    for r in ambient.rows() {
        ech.insert(r.clone());
    }
    let rank = ech.rank();
    let mut coords = IntMatrix::empty(rank);
    for (i, r) in sub.rows().iter().enumerate() {
        let sol = ech
            .solve(r)
            .ok_or(LinalgError::Membership { row: i })?;
        coords.push_row(super::matrix::sparse_from_pairs(sol));
    }
    Ok(smith_invariants(&coords))
}

/// `{x in Z^d : x F in span(target)}` for a `d x t` matrix `F` and target generators in `Z^t`.
pub fn preimage_lattice(f: &IntMatrix, target: &[SparseVec]) -> Lattice {
    let d = f.nrows();
    let mut stacked = f.clone();
    for t in target {
        stacked.push_row(t.clone());
    }
    let kernel = kernel_lattice(&stacked);
    Lattice::from_generators(
        d,
        kernel
            .rows()
            .iter()
            .map(|r| r.iter().filter(|(c, _)| *c < d).cloned().collect::<SparseVec>()),
    )
}
