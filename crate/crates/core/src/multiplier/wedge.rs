use crate::cyclotomic::{pair_count, pair_index, CycRing};
use crate::zlinalg::{sparse_from_pairs, AbelianInvariants, Int, IntMatrix, SparseEchelon, SparseVec};

use super::MultiplierError;

/// `L^2(O/p^j)` presented on the wedges `e_u ^ e_v` (`u < v`) of the digit basis
/// `e_u = kappa^u`, together with the action of `theta`.
#[derive(Clone, Debug)]
pub struct WedgeModule {
    pub p: u32,
    pub j: usize,
    pub basis: Vec<(usize, usize)>,
    pub relations: IntMatrix,
    /// Row `i` is the image of basis wedge `i` under `theta`.
    pub theta_action: IntMatrix,
}

/// Coordinates of `x ^ y` for integer vectors of length `j`.
pub fn wedge_vector(j: usize, x: &[i64], y: &[i64]) -> SparseVec {
    let mut pairs = Vec::new();
    for u in 0..j {
        if x[u] == 0 && y[u] == 0 {
            continue;
        }
        for v in u + 1..j {
            let c = x[u] as i128 * y[v] as i128 - x[v] as i128 * y[u] as i128;
            if c != 0 {
                pairs.push((pair_index(j, u, v), Int::from(c)));
            }
        }
    }
    sparse_from_pairs(pairs)
}

fn unit(j: usize, u: usize) -> Vec<i64> {
    let mut e = vec![0; j];
    e[u] = 1;
    e
}

/// `theta e_u = e_u + e_(u+1)`, dropping `e_j`.
fn theta_digits(x: &[i64]) -> Vec<i64> {
    let mut out = x.to_vec();
    for u in 1..x.len() {
        out[u] += x[u - 1];
    }
    out
}

pub fn wedge_square(p: u32, j: usize) -> Result<WedgeModule, MultiplierError> {
    if j == 0 {
        return Err(MultiplierError::BadParameters("j must be at least 1".into()));
    }
    let ring = CycRing::new(p, j).map_err(|e| MultiplierError::BadParameters(e.to_string()))?;
    let dim = pair_count(j);
    let basis: Vec<(usize, usize)> = (0..j).flat_map(|u| (u + 1..j).map(move |v| (u, v))).collect();
    let mut relations = IntMatrix::empty(dim);
    for r in ring.relation_rows() {
        for k in 0..j {
            let w = wedge_vector(j, &r, &unit(j, k));
            if !w.is_empty() {
                relations.push_row(w);
            }
        }
    }
    let mut theta_action = IntMatrix::empty(dim);
    for &(u, v) in &basis {
        theta_action.push_row(wedge_vector(j, &theta_digits(&unit(j, u)), &theta_digits(&unit(j, v))));
    }
    Ok(WedgeModule {
        p,
        j,
        basis,
        relations,
        theta_action,
    })
}

impl WedgeModule {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Invariant factors of `L^2(A)` itself.
    pub fn invariants(&self) -> AbelianInvariants {
        let mut ech = SparseEchelon::new(self.dim());
        for r in self.relations.rows() {
            ech.insert(r.clone());
        }
        ech.cokernel()
    }

    /// Rows `theta w - w` for every basis wedge.
    pub fn coinvariant_rows(&self) -> Vec<SparseVec> {
        self.theta_action
            .rows()
            .iter()
            .enumerate()
            .map(|(i, row)| sparse_from_pairs(row.iter().cloned().chain(std::iter::once((i, Int::NEG_ONE)))))
            .collect()
    }

    /// `L^2(A) / (extra + (theta - 1) L^2(A))`.
    pub fn coinvariants_modulo(&self, extra: impl IntoIterator<Item = SparseVec>) -> AbelianInvariants {
        let mut ech = SparseEchelon::new(self.dim());
        for r in self.relations.rows() {
            ech.insert(r.clone());
        }
        for r in self.coinvariant_rows() {
            ech.insert(r);
        }
        for r in extra {
            ech.insert(r);
        }
        ech.cokernel()
    }
}

/// `(O/p^j ^ O/p^j)` coinvariants under `theta`.
pub fn wedge_coinvariants(p: u32, j: usize) -> Result<AbelianInvariants, MultiplierError> {
    let w = wedge_square(p, j)?;
    Ok(w.coinvariants_modulo(std::iter::empty()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(f: &[u64]) -> AbelianInvariants {
        AbelianInvariants::from_torsion(f.iter().copied())
    }

    #[test]
    fn exterior_squares() {
        assert!(wedge_square(5, 1).unwrap().invariants().is_trivial());
        assert_eq!(wedge_square(5, 2).unwrap().invariants(), c(&[5]));
        assert_eq!(wedge_square(3, 3).unwrap().invariants(), c(&[3]));
        // O/p^4 for p = 5 is (Z/5)^4, whose exterior square is (Z/5)^6
        assert_eq!(wedge_square(5, 4).unwrap().invariants(), c(&[5; 6]));
    }

    #[test]
    fn theta_preserves_relations() {
        for (p, j) in [(3, 4), (5, 5), (7, 3)] {
            let w = wedge_square(p, j).unwrap();
            let mut ech = SparseEchelon::new(w.dim());
            for r in w.relations.rows() {
                ech.insert(r.clone());
            }
            for r in w.relations.rows() {
                assert!(ech.contains(&w.theta_action.left_mul(r)));
            }
        }
    }

    #[test]
    fn coinvariants() {
        for p in [3, 5, 7] {
            assert!(wedge_coinvariants(p, 1).unwrap().is_trivial());
        }
        assert_eq!(wedge_coinvariants(5, 2).unwrap(), c(&[5]));
        assert_eq!(wedge_coinvariants(5, 4).unwrap(), c(&[5, 5]));
        assert!(wedge_coinvariants(5, 0).is_err());
    }
}
