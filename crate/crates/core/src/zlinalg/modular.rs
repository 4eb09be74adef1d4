//! Row echelon form over `Z/p^e`.
//!
//! For a lattice `L` in `Z^n` whose quotient has torsion of exponent below `p^e`, the
//! cokernel of `L` read over `Z/p^e` is `(Z/p^e)^free + torsion(Z^n/L)` restricted to
//! its `p`-part. Entries stay below `p^e`, so nothing grows.

use super::AbelianInvariants;

/// Sparse row over `Z/q`: sorted column indices with nonzero residues.
pub type ModVec = Vec<(usize, u64)>;

const NO_PIVOT: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub struct PrimePowerEchelon {
    p: u64,
    e: u32,
    q: u64,
    ncols: usize,
    rows: Vec<ModVec>,
    pivot_of: Vec<u32>,
    scratch: ModVec,
}

/// Cokernel over `Z/p^e`: the `p^v` factors with `0 < v < e`, and the number of full
/// `Z/p^e` summands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModCokernel {
    pub torsion: AbelianInvariants,
    pub full: usize,
}

impl PrimePowerEchelon {
    /// Panics unless `p^e` fits in 32 bits, so that products fit in `u64`.
    pub fn new(p: u64, e: u32, ncols: usize) -> Self {
        let q = p.checked_pow(e).filter(|&q| q < 1 << 32).expect("modulus below 2^32");
        PrimePowerEchelon {
            p,
            e,
            q,
            ncols,
            rows: Vec::new(),
            pivot_of: vec![NO_PIVOT; ncols],
            scratch: Vec::new(),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Residue of a signed coefficient.
    pub fn residue(&self, x: i64) -> u64 {
        x.rem_euclid(self.q as i64) as u64
    }

    fn valuation(&self, mut x: u64) -> u32 {
        let mut v = 0;
        while x % self.p == 0 && v < self.e {
            x /= self.p;
            v += 1;
        }
        v
    }

    fn inverse(&self, u: u64) -> u64 {
        let (mut r0, mut r1) = (self.q as i64, u as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let k = r0 / r1;
            (r0, r1) = (r1, r0 - k * r1);
            (t0, t1) = (t1, t0 - k * t1);
        }
        debug_assert_eq!(r0, 1, "{u} is not a unit mod {}", self.q);
        t0.rem_euclid(self.q as i64) as u64
    }

    /// `out = a + k b` over `Z/q`.
    fn axpy_into(&self, out: &mut ModVec, a: &ModVec, k: u64, b: &ModVec) {
        out.clear();
        let q = self.q;
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let ca = a.get(i).map_or(usize::MAX, |x| x.0);
            let cb = b.get(j).map_or(usize::MAX, |x| x.0);
            let (c, x) = if ca < cb {
                i += 1;
                (ca, a[i - 1].1)
            } else if cb < ca {
                j += 1;
                (cb, k * b[j - 1].1 % q)
            } else {
                i += 1;
                j += 1;
                (ca, (a[i - 1].1 + k * b[j - 1].1) % q)
            };
            if x != 0 {
                out.push((c, x));
            }
        }
    }

    fn scale(&self, v: &mut ModVec, k: u64) {
        for (_, x) in v.iter_mut() {
            *x = *x * k % self.q;
        }
        v.retain(|(_, x)| *x != 0);
    }

    /// Scales `v` so that its lead is `p^v`.
    fn normalize(&self, v: &mut ModVec) {
        let lead = v[0].1;
        let val = self.valuation(lead);
        let unit = lead / self.p.pow(val);
        self.scale(v, self.inverse(unit % self.q));
    }

    /// Adds `v` (entries already reduced mod `q`) to the span. Returns `true` when a
    /// pivot row was added or replaced.
    pub fn insert(&mut self, mut v: ModVec) -> bool {
        v.retain(|(_, x)| *x != 0);
        let mut buf = std::mem::take(&mut self.scratch);
        let changed = loop {
            let Some(&(c, a)) = v.first() else {
                break false;
            };
            let k = self.pivot_of[c];
            if k == NO_PIVOT {
                self.normalize(&mut v);
                self.pivot_of[c] = self.rows.len() as u32;
                self.rows.push(v);
                break true;
            }
            let k = k as usize;
            let b = self.rows[k][0].1;
            if self.valuation(a) >= self.valuation(b) {
                // b = p^vb divides a
                let f = self.q - a / b;
                self.axpy_into(&mut buf, &v, f, &self.rows[k]);
                std::mem::swap(&mut v, &mut buf);
                continue;
            }
            // v has the smaller valuation: it becomes the pivot and the old row goes down
            self.normalize(&mut v);
            let old = std::mem::replace(&mut self.rows[k], v);
            let f = self.q - (b / self.rows[k][0].1) % self.q;
            self.axpy_into(&mut buf, &old, f, &self.rows[k]);
            v = std::mem::take(&mut buf);
        };
        self.scratch = buf;
        changed
    }

    /// Whether `v` lies in the span over `Z/q`.
    pub fn contains(&self, v: &ModVec) -> bool {
        let mut v: ModVec = v.iter().copied().filter(|(_, x)| *x != 0).collect();
        let mut buf = Vec::new();
        while let Some(&(c, a)) = v.first() {
            let k = self.pivot_of[c];
            if k == NO_PIVOT {
                return false;
            }
            let row = &self.rows[k as usize];
            let b = row[0].1;
            if self.valuation(a) < self.valuation(b) {
                return false;
            }
            self.axpy_into(&mut buf, &v, self.q - a / b, row);
            std::mem::swap(&mut v, &mut buf);
        }
        true
    }

    /// Cokernel of the span in `(Z/q)^ncols`.
    pub fn cokernel(&self) -> ModCokernel {
        let unit_col = |c: usize| {
            let k = self.pivot_of[c];
            k != NO_PIVOT && self.rows[k as usize][0].1 == 1
        };
        let residual: Vec<usize> = (0..self.ncols).filter(|&c| !unit_col(c)).collect();
        let mut position = vec![usize::MAX; self.ncols];
        for (i, &c) in residual.iter().enumerate() {
            position[c] = i;
        }
        let mut dense = Vec::new();
        let mut buf = Vec::new();
        for row in &self.rows {
            if row[0].1 == 1 {
                continue;
            }
            let mut v = row.clone();
            let mut cursor = 0;
            while let Some(idx) = v[cursor..].iter().position(|(c, _)| unit_col(*c)) {
                let idx = cursor + idx;
                let (c, a) = v[idx];
                let pivot = &self.rows[self.pivot_of[c] as usize];
                self.axpy_into(&mut buf, &v, self.q - a, pivot);
                std::mem::swap(&mut v, &mut buf);
                cursor = idx;
            }
            let mut d = vec![0u64; residual.len()];
            for (c, x) in v {
                d[position[c]] = x;
            }
            dense.push(d);
        }
        let vals = self.dense_smith(dense, residual.len());
        let mut factors = Vec::new();
        let mut full = residual.len() - vals.len();
        for v in vals {
            if v >= self.e {
                full += 1;
            } else if v > 0 {
                factors.push(self.p.pow(v));
            }
        }
        ModCokernel {
            torsion: AbelianInvariants::from_torsion(factors),
            full,
        }
    }

    /// Valuations of the Smith diagonal of a dense matrix over `Z/q`, one per row
    /// (`e` for rows that vanish).
    fn dense_smith(&self, mut a: Vec<Vec<u64>>, cols: usize) -> Vec<u32> {
        let q = self.q;
        let rows = a.len();
        let mut out = Vec::with_capacity(rows.min(cols));
        let mut r0 = 0;
        let mut c0 = 0;
        while r0 < rows && c0 < cols {
            let mut best: Option<(u32, usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(r0) {
                for (j, &x) in row.iter().enumerate().skip(c0) {
                    if x != 0 {
                        let v = self.valuation(x);
                        if best.is_none_or(|b| v < b.0) {
                            best = Some((v, i, j));
                        }
                    }
                }
            }
            let Some((v, i, j)) = best else {
                break;
            };
            a.swap(r0, i);
            for row in a.iter_mut() {
                row.swap(c0, j);
            }
            let pivot = a[r0][c0];
            let unit_inv = self.inverse(pivot / self.p.pow(v) % q);
            let pv = self.p.pow(v);
            let prow = a[r0].clone();
            for row in a.iter_mut().skip(r0 + 1) {
                let x = row[c0];
                if x != 0 {
                    // x = pv * (x / pv); the pivot is pv * unit
                    let f = (x / pv) % q * unit_inv % q;
                    for (y, &pr) in row.iter_mut().zip(&prow).skip(c0) {
                        *y = (*y + (q - f) * pr % q) % q;
                    }
                }
            }
            out.push(v);
            r0 += 1;
            c0 += 1;
        }
        out.truncate(rows.min(cols));
        out
    }
}
