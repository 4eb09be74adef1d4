//! An independent model of `O/p^j` as `Z[X]/(1 + X + ... + X^(p-1))` modulo the ideal
//! `(X - 1)^j`, with reduction by lattice membership. Slow, but it shares no code path
//! with the digit arithmetic and serves as a referee for it.

use crate::zlinalg::{div_floor, hermite_rows, Int, SparseVec};

use super::ring::{CycElement, CycRing};

#[derive(Clone, Debug)]
pub struct PolyModel {
    p: usize,
    j: usize,
    /// Reduced Hermite basis of the ideal as a lattice in the power basis `1, X, ..., X^(p-2)`.
    ideal: Vec<SparseVec>,
}

/// Coefficients in the power basis `1, theta, ..., theta^(p-2)`.
pub type PolyElement = Vec<Int>;

impl PolyModel {
    pub fn new(p: u32, j: usize) -> Self {
        let p = p as usize;
        let mut model = PolyModel {
            p,
            j,
            ideal: Vec::new(),
        };
        // (X - 1)^j X^k, k = 0..p-2, generate the ideal over Z
        let mut kappa_j = model.one();
        let kappa = model.kappa();
        for _ in 0..j {
            kappa_j = model.mul_unreduced(&kappa_j, &kappa);
        }
        let mut gens = Vec::new();
        let mut cur = kappa_j;
        for _ in 0..p - 1 {
            gens.push(to_sparse(&cur));
            cur = model.mul_unreduced(&cur, &model.theta());
        }
        model.ideal = hermite_rows(p - 1, gens);
        assert_eq!(model.ideal.len(), p - 1, "ideal has full rank");
        model
    }

    pub fn dim(&self) -> usize {
        self.p - 1
    }

    pub fn precision(&self) -> usize {
        self.j
    }

    pub fn zero(&self) -> PolyElement {
        vec![Int::ZERO; self.p - 1]
    }

    pub fn one(&self) -> PolyElement {
        let mut e = self.zero();
        e[0] = Int::ONE;
        e
    }

    pub fn theta(&self) -> PolyElement {
        let mut e = self.zero();
        if self.p == 2 {
            e[0] = Int::NEG_ONE;
        } else {
            e[1] = Int::ONE;
        }
        e
    }

    pub fn kappa(&self) -> PolyElement {
        let mut e = self.theta();
        e[0] -= Int::ONE;
        e
    }

    pub fn from_int(&self, k: i64) -> PolyElement {
        let mut e = self.zero();
        e[0] = Int::from(k);
        self.reduce(e)
    }

    /// Canonical representative modulo the ideal: each Hermite lead reduced into `[0, d)`.
    pub fn reduce(&self, mut x: PolyElement) -> PolyElement {
        for row in &self.ideal {
            let (lead, d) = &row[0];
            let q = div_floor(&x[*lead], d);
            if !q.is_zero() {
                for (c, v) in row {
                    x[*c] -= &q * v;
                }
            }
        }
        x
    }

    pub fn add(&self, x: &PolyElement, y: &PolyElement) -> PolyElement {
        self.reduce(x.iter().zip(y).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, x: &PolyElement, y: &PolyElement) -> PolyElement {
        self.reduce(x.iter().zip(y).map(|(a, b)| a - b).collect())
    }

    fn mul_unreduced(&self, x: &PolyElement, y: &PolyElement) -> PolyElement {
        let n = self.p - 1;
        let mut full = vec![Int::ZERO; 2 * n];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, b) in y.iter().enumerate() {
                full[i + k] += a * b;
            }
        }
        // X^(p-1) = -(1 + X + ... + X^(p-2)), applied from the top down
        for deg in (n..2 * n).rev() {
            let c = std::mem::take(&mut full[deg]);
            if c.is_zero() {
                continue;
            }
            for t in deg - n..deg {
                full[t] -= &c;
            }
        }
        full.truncate(n);
        full
    }

    pub fn mul(&self, x: &PolyElement, y: &PolyElement) -> PolyElement {
        self.reduce(self.mul_unreduced(x, y))
    }

    /// `theta -> theta^b`.
    pub fn sigma(&self, x: &PolyElement, b: u32) -> PolyElement {
        let tb = (0..b).fold(self.one(), |acc, _| self.mul_unreduced(&acc, &self.theta()));
        let mut acc = self.zero();
        for c in x.iter().rev() {
            acc = self.mul_unreduced(&acc, &tb);
            acc[0] += c;
        }
        self.reduce(acc)
    }

    /// Image of a digit string `sum a_u kappa^u`.
    pub fn from_cyc(&self, x: &CycElement) -> PolyElement {
        let kappa = self.kappa();
        let mut acc = self.zero();
        for &d in x.digits().iter().rev() {
            acc = self.mul_unreduced(&acc, &kappa);
            acc[0] += Int::from(d);
        }
        self.reduce(acc)
    }

    /// Inverse of [`PolyModel::from_cyc`], by peeling off `kappa`-adic digits.
    pub fn to_cyc(&self, ring: &CycRing, x: &PolyElement) -> CycElement {
        let mut digits = Vec::with_capacity(self.j);
        let mut cur = self.reduce(x.clone());
        let kappa = self.kappa();
        for u in 0..self.j {
            // find the digit d with (cur - d) divisible by kappa: evaluate at X = 1 mod p
            let s: Int = cur.iter().fold(Int::ZERO, |acc, c| acc + c);
            let d = crate::zlinalg::rem_floor(&s, &Int::from(self.p as u64));
            let dv = crate::zlinalg::to_u64(&d) as u32;
            digits.push(dv);
            cur[0] -= d;
            if u + 1 < self.j {
                cur = self.div_kappa_exact(&cur, &kappa);
            }
        }
        ring.from_digits(digits).expect("digits in range")
    }

    /// Exact division by `kappa` in `Z[theta]` for an element with `sum of coefficients`
    /// divisible by `p`; the result is only meaningful modulo `p^(j-1)`.
    fn div_kappa_exact(&self, x: &PolyElement, _kappa: &PolyElement) -> PolyElement {
        // x = (theta - 1) q. Work in Z[X] with x of degree <= p-2 plus a multiple of Phi_p
        // making the value at 1 vanish: x(1) = p t, so x - t Phi_p vanishes at X = 1.
        let n = self.p - 1;
        let s: Int = x.iter().fold(Int::ZERO, |acc, c| acc + c);
        let t = &s / Int::from(self.p as u64);
        let mut poly: Vec<Int> = x.clone();
        poly.push(Int::ZERO);
        for c in poly.iter_mut() {
            *c -= &t;
        }
        // synthetic division by (X - 1)
        let mut q = vec![Int::ZERO; n];
        let mut carry = Int::ZERO;
        for deg in (1..=n).rev() {
            carry += &poly[deg];
            q[deg - 1] = carry.clone();
        }
        debug_assert!((carry + &poly[0]).is_zero());
        q
    }
}

fn to_sparse(x: &PolyElement) -> SparseVec {
    x.iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| (i, v.clone()))
        .collect()
}
