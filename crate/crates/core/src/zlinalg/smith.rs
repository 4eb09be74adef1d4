use super::int::{div_floor, int_abs, is_negative, Int};
use super::matrix::IntMatrix;
use super::{AbelianInvariants, SparseEchelon};

/// Result of a dense Smith reduction `left * M * right = diag`.
#[derive(Debug, Clone)]
pub struct SmithForm {
    /// Diagonal entries `d_1 | d_2 | ...`, non-negative, zeros trailing; length `min(rows, cols)`.
    pub diag: Vec<Int>,
    pub left: Vec<Vec<Int>>,
    pub right: Vec<Vec<Int>>,
    /// Inverse of `right`, maintained alongside it.
    pub right_inv: Vec<Vec<Int>>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diag.iter().filter(|d| !d.is_zero()).count()
    }
}

fn identity(n: usize) -> Vec<Vec<Int>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Int::ONE } else { Int::ZERO })
                .collect()
        })
        .collect()
}

struct Reducer {
    a: Vec<Vec<Int>>,
    rows: usize,
    cols: usize,
    track: bool,
    left: Vec<Vec<Int>>,
    right: Vec<Vec<Int>>,
    right_inv: Vec<Vec<Int>>,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if self.track {
            self.left.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in self.a.iter_mut() {
            r.swap(i, j);
        }
        if self.track {
            for r in self.right.iter_mut() {
                r.swap(i, j);
            }
            self.right_inv.swap(i, j);
        }
    }

    /// row_i -= q * row_t
    fn row_sub(&mut self, i: usize, t: usize, q: &Int) {
        for c in 0..self.cols {
            let d = q * &self.a[t][c];
            self.a[i][c] -= d;
        }
        if self.track {
            for c in 0..self.rows {
                let d = q * &self.left[t][c];
                self.left[i][c] -= d;
            }
        }
    }

    /// col_j -= q * col_t
    fn col_sub(&mut self, j: usize, t: usize, q: &Int) {
        for r in 0..self.rows {
            let d = q * &self.a[r][t];
            self.a[r][j] -= d;
        }
        if self.track {
            for r in 0..self.cols {
                let d = q * &self.right[r][t];
                self.right[r][j] -= d;
            }
            // inverse gets the opposite row operation: row_t += q * row_j
            for c in 0..self.cols {
                let d = q * &self.right_inv[j][c];
                self.right_inv[t][c] += d;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut() {
            *x = -&*x;
        }
        if self.track {
            for x in self.left[i].iter_mut() {
                *x = -&*x;
            }
        }
    }

    /// Smallest nonzero absolute value in the trailing block; ties go to the lowest
    /// row-major index.
    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(Int, usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                let ax = int_abs(x);
                if best.as_ref().map_or(true, |(b, _, _)| ax < *b) {
                    best = Some((ax, i, j));
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    /// Smallest nonzero entry in row `t` / column `t` beyond the corner.
    fn find_line_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(Int, usize, usize)> = None;
        let mut consider = |x: &Int, i: usize, j: usize| {
            if x.is_zero() {
                return;
            }
            let ax = int_abs(x);
            if best.as_ref().map_or(true, |(b, _, _)| ax < *b) {
                best = Some((ax, i, j));
            }
        };
        consider(&self.a[t][t], t, t);
        for i in t + 1..self.rows {
            consider(&self.a[i][t], i, t);
        }
        for j in t + 1..self.cols {
            consider(&self.a[t][j], t, j);
        }
        best.map(|(_, i, j)| (i, j))
    }

    fn run(&mut self) -> Vec<Int> {
        let n = self.rows.min(self.cols);
        for t in 0..n {
            let Some((pi, pj)) = self.find_pivot(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let piv = self.a[t][t].clone();
                let mut clean = true;
                for i in t + 1..self.rows {
                    if !self.a[i][t].is_zero() {
                        let q = div_floor(&self.a[i][t], &piv);
                        self.row_sub(i, t, &q);
                        if !self.a[i][t].is_zero() {
                            clean = false;
                        }
                    }
                }
                for j in t + 1..self.cols {
                    if !self.a[t][j].is_zero() {
                        let q = div_floor(&self.a[t][j], &piv);
                        self.col_sub(j, t, &q);
                        if !self.a[t][j].is_zero() {
                            clean = false;
                        }
                    }
                }
                if !clean {
                    let (i, j) = self.find_line_pivot(t).expect("corner is nonzero");
                    if i != t {
                        self.swap_rows(t, i);
                    } else if j != t {
                        self.swap_cols(t, j);
                    }
                    continue;
                }
                // divisibility of the trailing block
                let mut bad_row = None;
                'scan: for i in t + 1..self.rows {
                    for j in t + 1..self.cols {
                        if !(&self.a[i][j] % &piv).is_zero() {
                            bad_row = Some(i);
                            break 'scan;
                        }
                    }
                }
                match bad_row {
                    Some(i) => {
                        // row_t += row_i, then keep reducing
                        self.row_sub(t, i, &Int::NEG_ONE);
                    }
                    None => break,
                }
            }
            if is_negative(&self.a[t][t]) {
                self.negate_row(t);
            }
        }
        (0..n).map(|t| self.a[t][t].clone()).collect()
    }
}

fn reduce(m: &[Vec<Int>], cols: usize, track: bool) -> SmithForm {
    let rows = m.len();
    let mut r = Reducer {
        a: m.to_vec(),
        rows,
        cols,
        track,
        left: if track { identity(rows) } else { Vec::new() },
        right: if track { identity(cols) } else { Vec::new() },
        right_inv: if track { identity(cols) } else { Vec::new() },
    };
    let diag = r.run();
    SmithForm {
        diag,
        left: r.left,
        right: r.right,
        right_inv: r.right_inv,
    }
}

/// Dense Smith normal form with unimodular transforms.
pub fn smith_form(m: &IntMatrix) -> SmithForm {
    reduce(&m.to_dense(), m.ncols(), true)
}

fn invariants_from_diag(diag: &[Int], cols: usize) -> AbelianInvariants {
    let rank = diag.iter().filter(|d| !d.is_zero()).count();
    let mut torsion: Vec<Int> = diag
        .iter()
        .filter(|d| !d.is_zero() && !d.is_one())
        .cloned()
        .collect();
    torsion.sort();
    AbelianInvariants {
        torsion,
        free_rank: cols - rank,
    }
}

/// Invariants of `coker(M) = Z^cols / rowspan(M)` by dense Smith reduction.
pub fn smith_invariants_dense(m: &IntMatrix) -> AbelianInvariants {
    let f = reduce(&m.to_dense(), m.ncols(), false);
    invariants_from_diag(&f.diag, m.ncols())
}

pub(crate) fn invariants_of_dense(m: &[Vec<Int>], cols: usize) -> AbelianInvariants {
    let f = reduce(m, cols, false);
    invariants_from_diag(&f.diag, cols)
}

/// Invariants of `coker(M) = Z^cols / rowspan(M)`.
///
/// Rows are streamed through the sparse echelon; only the residue left after unit
/// pivots are eliminated goes through dense Smith reduction.
pub fn smith_invariants(m: &IntMatrix) -> AbelianInvariants {
    let mut ech = SparseEchelon::fully_reduced(m.ncols());
    for r in m.rows() {
        ech.insert(r.clone());
    }
    ech.cokernel()
}
