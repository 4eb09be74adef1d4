use maxclass::zlinalg::{
    kernel_lattice, quotient_invariants, smith_form, smith_invariants, smith_invariants_dense, AbelianInvariants,
    Int, IntMatrix, Lattice, SparseEchelon,
};
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-12i64..=12, c), r))
}

fn dense_mul(a: &[Vec<Int>], b: &[Vec<Int>]) -> Vec<Vec<Int>> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(Int::ZERO, |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_transforms_diagonalize(rows in matrix()) {
        let m = IntMatrix::from_i64(&rows);
        let f = smith_form(&m);
        let d = dense_mul(&dense_mul(&f.left, &m.to_dense()), &f.right);
        for (i, row) in d.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let want = if i == j { f.diag[i].clone() } else { Int::ZERO };
                prop_assert_eq!(x, &want);
            }
        }
        let nonzero: Vec<&Int> = f.diag.iter().filter(|x| !x.is_zero()).collect();
        for w in nonzero.windows(2) {
            prop_assert!((w[1] % w[0]).is_zero());
        }
        let id = dense_mul(&f.right, &f.right_inv);
        for (i, row) in id.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                prop_assert_eq!(x, &if i == j { Int::ONE } else { Int::ZERO });
            }
        }
    }

    #[test]
    fn sparse_and_dense_invariants_agree(rows in matrix()) {
        let m = IntMatrix::from_i64(&rows);
        let inv = smith_invariants(&m);
        prop_assert!(inv.is_well_formed());
        prop_assert_eq!(inv, smith_invariants_dense(&m));
    }

    #[test]
    fn row_operations_keep_the_cokernel(rows in matrix(), k in -5i64..=5, i in 0usize..6, j in 0usize..6) {
        let m = IntMatrix::from_i64(&rows);
        let mut moved = rows.clone();
        let (i, j) = (i % rows.len(), j % rows.len());
        if i != j {
            for c in 0..moved[i].len() {
                moved[j][c] += k * rows[i][c];
            }
        }
        moved.reverse();
        prop_assert_eq!(smith_invariants(&m), smith_invariants(&IntMatrix::from_i64(&moved)));
    }

    #[test]
    fn kernel_is_saturated_and_annihilates(rows in matrix()) {
        let m = IntMatrix::from_i64(&rows);
        let k = kernel_lattice(&m);
        let rank = smith_form(&m).rank();
        prop_assert_eq!(k.nrows(), m.nrows() - rank);
        for v in k.rows() {
            prop_assert!(m.left_mul(v).is_empty());
        }
        let quotient = smith_invariants(&k);
        prop_assert_eq!(quotient.torsion_u64(), Vec::<u64>::new());
    }

    #[test]
    fn doubling_a_lattice_has_index_two_to_the_rank(rows in matrix()) {
        let m = IntMatrix::from_i64(&rows);
        let doubled: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|x| 2 * x).collect()).collect();
        let q = quotient_invariants(&m, &IntMatrix::from_i64(&doubled)).unwrap();
        let rank = smith_form(&m).rank();
        prop_assert_eq!(q, AbelianInvariants::from_torsion(vec![2; rank]));
    }

    #[test]
    fn lattice_equality_ignores_generator_order(rows in matrix()) {
        let m = IntMatrix::from_i64(&rows);
        let dim = m.ncols();
        let a = Lattice::from_generators(dim, m.rows().to_vec());
        let mut rev = m.rows().to_vec();
        rev.reverse();
        let b = Lattice::from_generators(dim, rev);
        prop_assert_eq!(&a, &b);
        for r in m.rows() {
            prop_assert!(a.contains(r));
        }
    }

    #[test]
    fn full_reduction_keeps_the_lattice(rows in matrix()) {
        let m = IntMatrix::from_i64(&rows);
        let mut plain = SparseEchelon::new(m.ncols());
        let mut reduced = SparseEchelon::fully_reduced(m.ncols());
        for r in m.rows() {
            plain.insert(r.clone());
            reduced.insert(r.clone());
        }
        prop_assert_eq!(plain.cokernel(), reduced.cokernel());
        for r in m.rows() {
            prop_assert!(reduced.contains(r));
        }
    }
}
