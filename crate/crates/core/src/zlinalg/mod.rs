//! Exact integer linear algebra: Smith and Hermite reduction, kernel lattices and
//! invariant factors of finitely generated abelian groups.
//!
//! All arithmetic is arbitrary precision. Relation matrices use the row convention:
//! a matrix with `c` columns presents `Z^c / rowspan`.

mod echelon;
mod int;
mod lattice;
mod matrix;
mod modular;
mod smith;

use std::fmt;
use std::sync::OnceLock;

pub use echelon::SparseEchelon;
pub use int::{div_floor, int_abs, is_negative, is_unit, rem_floor, to_i64, to_u64, xgcd, Int};
pub use lattice::{hermite_rows, kernel_lattice, preimage_lattice, quotient_invariants, Lattice};
pub use matrix::{
    axpy, lincomb, scale, sparse_from_dense, sparse_from_pairs, sparse_to_dense, IntMatrix,
    SparseVec,
};
pub use modular::{ModCokernel, ModVec, PrimePowerEchelon};
pub use smith::{smith_form, smith_invariants, smith_invariants_dense, SmithForm};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("sub-generator {row} does not lie in the ambient lattice")]
    Membership { row: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// Invariant factors `d_1 | d_2 | ...` (all `>= 2`) plus the number of free generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AbelianInvariants {
    pub torsion: Vec<Int>,
    pub free_rank: usize,
}

impl AbelianInvariants {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn from_torsion<I: IntoIterator<Item = u64>>(factors: I) -> Self {
        let mut torsion: Vec<Int> = factors.into_iter().filter(|&d| d > 1).map(Int::from).collect();
        torsion.sort();
        AbelianInvariants {
            torsion,
            free_rank: 0,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the torsion part.
    pub fn torsion_order(&self) -> Int {
        self.torsion.iter().fold(Int::ONE, |acc, d| acc * d)
    }

    pub fn order(&self) -> Option<Int> {
        self.is_finite().then(|| self.torsion_order())
    }

    /// Minimal number of generators.
    pub fn rank(&self) -> usize {
        self.torsion.len() + self.free_rank
    }

    /// Exponent of the torsion part (1 for a torsion-free group).
    pub fn exponent(&self) -> Int {
        self.torsion.last().cloned().unwrap_or(Int::ONE)
    }

    pub fn torsion_u64(&self) -> Vec<u64> {
        self.torsion.iter().map(to_u64).collect()
    }

    /// Checks the divisibility chain.
    pub fn is_well_formed(&self) -> bool {
        self.torsion.iter().all(|d| *d >= Int::from(2u8))
            && self
                .torsion
                .windows(2)
                .all(|w| (&w[1] % &w[0]).is_zero())
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "1");
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.torsion.len() {
            let mut j = i;
            while j < self.torsion.len() && self.torsion[j] == self.torsion[i] {
                j += 1;
            }
            if j - i == 1 {
                parts.push(format!("C{}", self.torsion[i]));
            } else {
                parts.push(format!("C{}^{}", self.torsion[i], j - i));
            }
            i = j;
        }
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" x "))
    }
}

/// A finitely generated abelian group `Z^generator_count / rowspan(relations)` with
/// lazily computed invariants.
#[derive(Debug, Clone)]
pub struct AbelianPresentation {
    relations: IntMatrix,
    invariants: OnceLock<AbelianInvariants>,
}

impl AbelianPresentation {
    pub fn new(relations: IntMatrix) -> Self {
        AbelianPresentation {
            relations,
            invariants: OnceLock::new(),
        }
    }

    pub fn generator_count(&self) -> usize {
        self.relations.ncols()
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn invariants(&self) -> &AbelianInvariants {
        self.invariants
            .get_or_init(|| smith_invariants(&self.relations))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inv(t: &[u64], free: usize) -> AbelianInvariants {
        AbelianInvariants {
            torsion: t.iter().map(|&x| Int::from(x)).collect(),
            free_rank: free,
        }
    }

    #[test]
    fn smith_examples() {
        let zero = IntMatrix::from_i64(&[vec![0, 0], vec![0, 0]]);
        assert_eq!(smith_invariants(&zero), inv(&[], 2));
        let d23 = IntMatrix::from_i64(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(smith_invariants(&d23), inv(&[6], 0));
        assert_eq!(smith_invariants_dense(&d23), inv(&[6], 0));
        let two = IntMatrix::from_i64(&[vec![2, 0], vec![0, 2]]);
        assert_eq!(smith_invariants(&two), inv(&[2, 2], 0));
        assert_eq!(smith_invariants(&IntMatrix::empty(0)), inv(&[], 0));
        assert_eq!(smith_invariants(&IntMatrix::empty(3)), inv(&[], 3));
    }

    #[test]
    fn smith_form_transforms_diagonalize() {
        let m = IntMatrix::from_i64(&[
            vec![-6, 111, -36, 6],
            vec![5, -672, 210, 74],
            vec![0, -255, 81, 24],
            vec![-7, 255, -81, -10],
        ]);
        let f = smith_form(&m);
        assert_eq!(
            f.diag,
            vec![Int::ONE, Int::from(3), Int::from(21), Int::ZERO]
        );
        let left = IntMatrix::from_dense(&f.left, 4);
        let right = IntMatrix::from_dense(&f.right, 4);
        let right_inv = IntMatrix::from_dense(&f.right_inv, 4);
        let d = left.mul(&m).mul(&right);
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { f.diag[i].clone() } else { Int::ZERO };
                assert_eq!(d.get(i, j), expect);
            }
        }
        assert_eq!(right.mul(&right_inv), IntMatrix::identity(4));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_lattice(&IntMatrix::identity(3)).nrows(), 0);
        let col = IntMatrix::from_i64(&[vec![2], vec![-1]]);
        let k = kernel_lattice(&col);
        assert_eq!(k.to_dense(), vec![vec![Int::ONE, Int::from(2)]]);
        let zero = IntMatrix::zeros(3, 2);
        let k = kernel_lattice(&zero);
        assert_eq!(k, IntMatrix::identity(3));
    }

    #[test]
    fn kernel_is_saturated() {
        // v * (2, 4)^T = 0 has kernel spanned by (2, -1), not (4, -2)
        let col = IntMatrix::from_i64(&[vec![2], vec![4]]);
        let k = kernel_lattice(&col);
        assert_eq!(k.nrows(), 1);
        let q = Lattice::from_generators(2, k.rows().to_vec());
        assert_eq!(q.quotient_of_ambient().torsion, Vec::<Int>::new());
    }

    #[test]
    fn quotient_examples() {
        let id = IntMatrix::identity(2);
        let five = IntMatrix::from_i64(&[vec![5, 0], vec![0, 5]]);
        assert_eq!(quotient_invariants(&id, &five).unwrap(), inv(&[5, 5], 0));
        let e1 = IntMatrix::from_i64(&[vec![1, 0]]);
        assert_eq!(quotient_invariants(&id, &e1).unwrap(), inv(&[], 1));
        let amb = IntMatrix::from_i64(&[vec![1, 2]]);
        let sub = IntMatrix::from_i64(&[vec![3, 6]]);
        assert_eq!(quotient_invariants(&amb, &sub).unwrap(), inv(&[3], 0));
        let outside = IntMatrix::from_i64(&[vec![1, 0]]);
        assert_eq!(
            quotient_invariants(&amb, &outside),
            Err(LinalgError::Membership { row: 0 })
        );
        assert!(quotient_invariants(&five, &five).unwrap().is_trivial());
    }

    #[test]
    fn lattice_canonical_form() {
        let a = Lattice::from_generators(2, vec![vec![(0, Int::from(2)), (1, Int::from(1))], vec![(1, Int::from(3))]]);
        let b = Lattice::from_generators(
            2,
            vec![
                vec![(0, Int::from(2)), (1, Int::from(4))],
                vec![(0, Int::from(4)), (1, Int::from(5))],
            ],
        );
        assert_eq!(a, b);
        assert_eq!(a.index(), Some(Int::from(6)));
        assert!(a.contains(&vec![(0, Int::from(2)), (1, Int::from(-2))]));
        assert!(!a.contains(&vec![(1, Int::from(1))]));
    }

    #[test]
    fn echelon_merges_non_dividing_leads() {
        let mut e = SparseEchelon::new(2);
        e.insert(vec![(0, Int::from(4)), (1, Int::from(1))]);
        e.insert(vec![(0, Int::from(6))]);
        // lattice generated by (4,1), (6,0): index |4*0 - 6*1| = 6
        assert_eq!(e.cokernel(), inv(&[6], 0));
        assert!(e.contains(&vec![(0, Int::from(2)), (1, Int::from(-1))]));
    }

    #[test]
    fn abelian_presentation_caches() {
        let p = AbelianPresentation::new(IntMatrix::from_i64(&[vec![4, 0], vec![0, 6]]));
        assert_eq!(p.invariants(), &inv(&[2, 12], 0));
        assert_eq!(p.invariants().to_string(), "C2 x C12");
        assert_eq!(p.generator_count(), 2);
    }
}
