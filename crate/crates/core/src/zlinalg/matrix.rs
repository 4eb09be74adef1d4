use std::fmt;

use super::int::Int;

/// Sparse integer vector: `(index, value)` pairs, strictly increasing indices, no zero values.
pub type SparseVec = Vec<(usize, Int)>;

/// Builds a sparse vector from arbitrary `(index, value)` pairs, merging duplicates.
pub fn sparse_from_pairs<I>(pairs: I) -> SparseVec
where
    I: IntoIterator<Item = (usize, Int)>,
{
    let mut v: Vec<(usize, Int)> = pairs.into_iter().collect();
    v.sort_by_key(|(i, _)| *i);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (i, x) in v {
        match out.last_mut() {
            Some((j, y)) if *j == i => *y += x,
            _ => out.push((i, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

pub fn sparse_from_dense(row: &[Int]) -> SparseVec {
    row.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn sparse_to_dense(v: &SparseVec, len: usize) -> Vec<Int> {
    let mut out = vec![Int::ZERO; len];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// `a + k*b`, written into `out`.
pub fn axpy_into(out: &mut SparseVec, a: &SparseVec, k: &Int, b: &SparseVec) {
    out.clear();
    out.reserve(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            if !k.is_zero() {
                out.push((b[j].0, k * &b[j].1));
            }
            j += 1;
        } else {
            let x = &a[i].1 + k * &b[j].1;
            if !x.is_zero() {
                out.push((a[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
}

pub fn axpy(a: &SparseVec, k: &Int, b: &SparseVec) -> SparseVec {
    let mut out = Vec::new();
    axpy_into(&mut out, a, k, b);
    out
}

/// `s*a + t*b`.
pub fn lincomb(s: &Int, a: &SparseVec, t: &Int, b: &SparseVec) -> SparseVec {
    axpy(&scale(a, s), t, b)
}

pub fn scale(v: &SparseVec, k: &Int) -> SparseVec {
    if k.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, k * x)).collect()
}

/// Integer matrix stored as sparse rows.
///
/// Relation matrices throughout the crate use the row convention: each row is a
/// relation vector and the presented group is `Z^cols / rowspan`.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    cols: usize,
    rows: Vec<SparseVec>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            cols,
            rows: vec![Vec::new(); rows],
        }
    }

    pub fn empty(cols: usize) -> Self {
        IntMatrix {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        IntMatrix {
            cols: n,
            rows: (0..n).map(|i| vec![(i, Int::ONE)]).collect(),
        }
    }

    pub fn from_sparse_rows(cols: usize, rows: Vec<SparseVec>) -> Self {
        debug_assert!(rows.iter().all(|r| r.iter().all(|(c, _)| *c < cols)));
        IntMatrix { cols, rows }
    }

    pub fn from_dense(rows: &[Vec<Int>], cols: usize) -> Self {
        IntMatrix {
            cols,
            rows: rows.iter().map(|r| sparse_from_dense(r)).collect(),
        }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_i64_with_cols(rows, cols)
    }

    pub fn from_i64_with_cols(rows: &[Vec<i64>], cols: usize) -> Self {
        let dense: Vec<Vec<Int>> = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged matrix");
                r.iter().map(|&x| Int::from(x)).collect()
            })
            .collect();
        Self::from_dense(&dense, cols)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<SparseVec> {
        self.rows
    }

    pub fn push_row(&mut self, row: SparseVec) {
        debug_assert!(row.iter().all(|(c, _)| *c < self.cols));
        self.rows.push(row);
    }

    pub fn append(&mut self, other: &IntMatrix) {
        assert_eq!(self.cols, other.cols);
        self.rows.extend(other.rows.iter().cloned());
    }

    pub fn get(&self, r: usize, c: usize) -> Int {
        assert!(c < self.cols, "column {c} out of bounds");
        match self.rows[r].binary_search_by_key(&c, |(i, _)| *i) {
            Ok(k) => self.rows[r][k].1.clone(),
            Err(_) => Int::ZERO,
        }
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<Int>> {
        self.rows
            .iter()
            .map(|r| sparse_to_dense(r, self.cols))
            .collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = vec![Vec::new(); self.cols];
        for (i, r) in self.rows.iter().enumerate() {
            for (j, x) in r {
                out[*j].push((i, x.clone()));
            }
        }
        IntMatrix {
            cols: self.rows.len(),
            rows: out,
        }
    }

    /// Row vector times matrix: `v * self`.
    pub fn left_mul(&self, v: &SparseVec) -> SparseVec {
        let mut acc = vec![Int::ZERO; self.cols];
        for (i, x) in v {
            for (j, y) in &self.rows[*i] {
                acc[*j] += x * y;
            }
        }
        sparse_from_dense(&acc)
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.nrows());
        IntMatrix {
            cols: other.cols,
            rows: self.rows.iter().map(|r| other.left_mul(r)).collect(),
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.nrows(), self.cols)?;
        for r in self.to_dense() {
            let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}
