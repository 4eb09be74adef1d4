use super::int::{div_floor, is_negative, is_unit, xgcd, Int};
use super::matrix::{axpy_into, lincomb, SparseVec};
use super::smith::invariants_of_dense;
use super::AbelianInvariants;

const NO_PIVOT: u32 = u32::MAX;

/// Incremental row echelon form of an integer lattice in `Z^ncols`.
///
/// Every stored row has a distinct leading column (its lowest index) with a positive
/// leading coefficient. Insertion reduces the incoming vector by the existing pivots,
/// merging via extended gcd when the leading coefficients do not divide each other,
/// so the stored rows always span exactly the lattice of all inserted vectors.
/// Callers control the elimination order by choosing the column numbering.
#[derive(Clone, Debug)]
pub struct SparseEchelon {
    ncols: usize,
    rows: Vec<SparseVec>,
    pivot_of: Vec<u32>,
    scratch: SparseVec,
    fully_reduced: bool,
}

impl SparseEchelon {
    pub fn new(ncols: usize) -> Self {
        SparseEchelon {
            ncols,
            rows: Vec::new(),
            pivot_of: vec![NO_PIVOT; ncols],
            scratch: Vec::new(),
            fully_reduced: false,
        }
    }

    /// An echelon whose stored rows are reduced against all earlier pivots: entries in
    /// pivot columns lie in `(-b/2, b/2]` for the pivot lead `b`. This costs fill-in on
    /// large sparse systems but stops coefficient growth on dense ones.
    pub fn fully_reduced(ncols: usize) -> Self {
        SparseEchelon {
            fully_reduced: true,
            ..SparseEchelon::new(ncols)
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivot_row(&self, col: usize) -> Option<&SparseVec> {
        match self.pivot_of[col] {
            NO_PIVOT => None,
            k => Some(&self.rows[k as usize]),
        }
    }

    /// Rows sorted by leading column.
    pub fn sorted_rows(&self) -> Vec<SparseVec> {
        (0..self.ncols).filter_map(|c| self.pivot_row(c).cloned()).collect()
    }

    /// Adds `v` to the lattice. Returns `true` when the lattice grew.
    pub fn insert(&mut self, mut v: SparseVec) -> bool {
        let mut buf = std::mem::take(&mut self.scratch);
        let grew = loop {
            let Some((c, a)) = v.first().cloned() else {
                break false;
            };
            let k = self.pivot_of[c];
            if k == NO_PIVOT {
                if is_negative(&a) {
                    for (_, x) in v.iter_mut() {
                        *x = -&*x;
                    }
                }
                if self.fully_reduced {
                    self.reduce_tail(&mut v, &mut buf);
                }
                self.pivot_of[c] = self.rows.len() as u32;
                self.rows.push(v);
                break true;
            }
            let k = k as usize;
            let b = self.rows[k][0].1.clone();
            if (&a % &b).is_zero() {
                let q = -(&a / &b);
                axpy_into(&mut buf, &v, &q, &self.rows[k]);
                std::mem::swap(&mut v, &mut buf);
                continue;
            }
            // gcd merge: the pivot becomes s*row + t*v with leading coefficient g, and
            // the unimodular complement (a/g)*row - (b/g)*v continues down.
            let (g, s, t) = xgcd(&b, &a);
            let row = std::mem::take(&mut self.rows[k]);
            let new_pivot = lincomb(&s, &row, &t, &v);
            let rest = lincomb(&(&a / &g), &row, &(-(&b / &g)), &v);
            debug_assert!(rest.first().map_or(true, |(i, _)| *i > c));
            let mut new_pivot = new_pivot;
            if is_negative(&new_pivot[0].1) {
                for (_, x) in new_pivot.iter_mut() {
                    *x = -&*x;
                }
            }
            if self.fully_reduced {
                self.reduce_tail(&mut new_pivot, &mut buf);
            }
            self.rows[k] = new_pivot;
            v = rest;
            // the lattice may or may not grow; report growth conservatively
            if v.is_empty() {
                break true;
            }
        };
        self.scratch = buf;
        grew
    }

    /// Reduces the entries of `v` past its lead into `(-b/2, b/2]` against every pivot.
    fn reduce_tail(&self, v: &mut SparseVec, buf: &mut SparseVec) {
        let mut cursor = 1;
        while cursor < v.len() {
            let (c, x) = &v[cursor];
            let k = self.pivot_of[*c];
            if k == NO_PIVOT {
                cursor += 1;
                continue;
            }
            let row = &self.rows[k as usize];
            let b = &row[0].1;
            let q = div_floor(&(x + &(b / &Int::from(2))), b);
            if q.is_zero() {
                cursor += 1;
                continue;
            }
            let col = *c;
            axpy_into(buf, v, &(-q), row);
            std::mem::swap(v, buf);
            cursor = v.partition_point(|(j, _)| *j <= col);
        }
    }

    /// Remainder of `v` after reducing its leading entries while a pivot divides them.
    /// Zero exactly when `v` lies in the lattice.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        let mut buf = Vec::new();
        while let Some((c, a)) = v.first().cloned() {
            let k = self.pivot_of[c];
            if k == NO_PIVOT {
                break;
            }
            let row = &self.rows[k as usize];
            let b = &row[0].1;
            if !(&a % b).is_zero() {
                break;
            }
            let q = -(&a / b);
            axpy_into(&mut buf, &v, &q, row);
            std::mem::swap(&mut v, &mut buf);
        }
        v
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone()).is_empty()
    }

    /// Coordinates of `v` with respect to the stored rows (indexed by storage order),
    /// or `None` when `v` is not in the lattice.
    pub fn solve(&self, v: &SparseVec) -> Option<Vec<(usize, Int)>> {
        let mut v = v.clone();
        let mut coeffs = Vec::new();
        let mut buf = Vec::new();
        while let Some((c, a)) = v.first().cloned() {
            let k = self.pivot_of[c];
            if k == NO_PIVOT {
                return None;
            }
            let row = &self.rows[k as usize];
            let b = &row[0].1;
            if !(&a % b).is_zero() {
                return None;
            }
            let q = &a / b;
            axpy_into(&mut buf, &v, &(-&q), row);
            std::mem::swap(&mut v, &mut buf);
            coeffs.push((k as usize, q));
        }
        Some(coeffs)
    }

    /// Invariant factors and free rank of `Z^ncols / lattice`.
    ///
    /// Columns led by a unit pivot are eliminated by substitution; the remaining rows,
    /// rewritten over the non-eliminated columns, go through dense Smith reduction.
    pub fn cokernel(&self) -> AbelianInvariants {
        let unit_col = |c: usize| -> bool {
            let k = self.pivot_of[c];
            k != NO_PIVOT && is_unit(&self.rows[k as usize][0].1)
        };
        let residual: Vec<usize> = (0..self.ncols).filter(|&c| !unit_col(c)).collect();
        let mut position = vec![usize::MAX; self.ncols];
        for (i, &c) in residual.iter().enumerate() {
            position[c] = i;
        }
        let mut dense_rows = Vec::new();
        let mut buf = Vec::new();
        for row in &self.rows {
            if is_unit(&row[0].1) {
                continue;
            }
            let mut v = row.clone();
            let mut cursor = 0;
            loop {
                let Some(idx) = v[cursor..].iter().position(|(c, _)| unit_col(*c)) else {
                    break;
                };
                let idx = cursor + idx;
                let (c, a) = v[idx].clone();
                let pivot = &self.rows[self.pivot_of[c] as usize];
                // pivot lead is +1
                axpy_into(&mut buf, &v, &(-a), pivot);
                std::mem::swap(&mut v, &mut buf);
                cursor = idx;
            }
            let mut dense = vec![Int::ZERO; residual.len()];
            for (c, x) in v {
                dense[position[c]] = x;
            }
            dense_rows.push(dense);
        }
        invariants_of_dense(&dense_rows, residual.len())
    }
}
