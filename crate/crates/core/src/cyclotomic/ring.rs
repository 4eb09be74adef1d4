use std::fmt;

use super::CycError;

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn binomial(n: u32, k: u32) -> i128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc
}

/// An element of `O/p^j` in canonical kappa-adic form `sum_u a_u kappa^u`, `0 <= a_u < p`.
///
/// The precision `j` is the number of digits.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycElement {
    p: u32,
    digits: Vec<u32>,
}

impl CycElement {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn precision(&self) -> usize {
        self.digits.len()
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }

    /// Index of the first nonzero digit; the precision for zero.
    pub fn valuation(&self) -> usize {
        self.digits
            .iter()
            .position(|&d| d != 0)
            .unwrap_or(self.digits.len())
    }

    /// Digits as integers, the natural lift to `Z^j`.
    pub fn to_ints(&self) -> Vec<i64> {
        self.digits.iter().map(|&d| d as i64).collect()
    }
}

impl fmt::Debug for CycElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyc(p={}, {:?})", self.p, self.digits)
    }
}

impl fmt::Display for CycElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .digits
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != 0)
            .map(|(u, &d)| match (u, d) {
                (0, d) => format!("{d}"),
                (1, 1) => "k".to_string(),
                (1, d) => format!("{d}k"),
                (u, 1) => format!("k^{u}"),
                (u, d) => format!("{d}k^{u}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// The truncated cyclotomic local ring `O/p^j` for the `p`-th cyclotomic integers,
/// with uniformizer `kappa = theta - 1`.
///
/// Carries use `p kappa^u = -sum_{i=1}^{p-1} C(p, i+1) kappa^{u+i}`. Coefficients at
/// position `u` may be reduced modulo `p^ceil((j-u)/(p-1))` since `p` has valuation `p-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycRing {
    p: u32,
    prec: usize,
    carry: Vec<i128>,
    moduli: Vec<i128>,
}

impl CycRing {
    pub fn new(p: u32, prec: usize) -> Result<Self, CycError> {
        if p < 3 || !is_prime(p) {
            return Err(CycError::BadParameters(format!(
                "p = {p} must be an odd prime"
            )));
        }
        let carry = (1..p).map(|i| binomial(p, i + 1)).collect();
        Ok(Self::with_carry(p, prec, carry))
    }

    /// Ring with an explicit carry table `carry[i-1]` for `p kappa^u -> -sum carry[i-1] kappa^{u+i}`.
    /// Only meaningful for negative controls in verification.
    #[doc(hidden)]
    pub fn with_carry(p: u32, prec: usize, carry: Vec<i128>) -> Self {
        assert_eq!(carry.len(), (p - 1) as usize);
        let step = (p - 1) as usize;
        let moduli = (0..prec)
            .map(|u| {
                let e = (prec - u).div_ceil(step);
                (p as i128).checked_pow(e as u32).expect("precision too large for this prime")
            })
            .collect();
        CycRing {
            p,
            prec,
            carry,
            moduli,
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    /// `|O/p^j| = p^j`.
    pub fn order_exponent(&self) -> usize {
        self.prec
    }

    /// Same prime, different precision.
    pub fn with_precision(&self, prec: usize) -> CycRing {
        CycRing::with_carry(self.p, prec, self.carry.clone())
    }

    pub fn check(&self, x: &CycElement) -> Result<(), CycError> {
        if x.p != self.p || x.digits.len() != self.prec {
            return Err(CycError::PrecisionMismatch {
                expected: (self.p, self.prec),
                found: (x.p, x.digits.len()),
            });
        }
        Ok(())
    }

    pub fn zero(&self) -> CycElement {
        CycElement {
            p: self.p,
            digits: vec![0; self.prec],
        }
    }

    pub fn one(&self) -> CycElement {
        self.kappa_pow(0)
    }

    /// `kappa^u` (zero once `u >= j`).
    pub fn kappa_pow(&self, u: usize) -> CycElement {
        let mut z = self.zero();
        if u < self.prec {
            z.digits[u] = 1;
        }
        z
    }

    pub fn from_digits(&self, digits: Vec<u32>) -> Result<CycElement, CycError> {
        if digits.len() != self.prec || digits.iter().any(|&d| d >= self.p) {
            return Err(CycError::BadParameters(format!(
                "digit string {digits:?} is not canonical for p = {}, precision {}",
                self.p, self.prec
            )));
        }
        Ok(CycElement { p: self.p, digits })
    }

    /// Canonical form of `sum_u c_u kappa^u` for arbitrary integers (entries past the
    /// precision are ignored).
    pub fn from_ints(&self, coeffs: &[i64]) -> CycElement {
        let mut c: Vec<i128> = (0..self.prec)
            .map(|u| coeffs.get(u).copied().unwrap_or(0) as i128)
            .collect();
        self.normalize(&mut c)
    }

    pub fn from_int(&self, k: i64) -> CycElement {
        self.from_ints(&[k])
    }

    pub(crate) fn normalize(&self, c: &mut [i128]) -> CycElement {
        let p = self.p as i128;
        let mut digits = vec![0u32; self.prec];
        for u in 0..self.prec {
            let v = c[u].rem_euclid(self.moduli[u]);
            let q = v / p;
            digits[u] = (v % p) as u32;
            if q != 0 {
                for (i, b) in self.carry.iter().enumerate() {
                    let t = u + i + 1;
                    if t >= self.prec {
                        break;
                    }
                    c[t] = (c[t] - q * b).rem_euclid(self.moduli[t]);
                }
            }
        }
        CycElement { p: self.p, digits }
    }

    pub(crate) fn add_raw(&self, x: &CycElement, y: &CycElement) -> CycElement {
        let mut c: Vec<i128> = x
            .digits
            .iter()
            .zip(&y.digits)
            .map(|(&a, &b)| (a + b) as i128)
            .collect();
        self.normalize(&mut c)
    }

    pub(crate) fn sub_raw(&self, x: &CycElement, y: &CycElement) -> CycElement {
        let mut c: Vec<i128> = x
            .digits
            .iter()
            .zip(&y.digits)
            .map(|(&a, &b)| a as i128 - b as i128)
            .collect();
        self.normalize(&mut c)
    }

    pub(crate) fn neg_raw(&self, x: &CycElement) -> CycElement {
        let mut c: Vec<i128> = x.digits.iter().map(|&a| -(a as i128)).collect();
        self.normalize(&mut c)
    }

    pub(crate) fn scale_raw(&self, x: &CycElement, k: i64) -> CycElement {
        let mut c: Vec<i128> = x.digits.iter().map(|&a| a as i128 * k as i128).collect();
        self.normalize(&mut c)
    }

    pub(crate) fn mul_raw(&self, x: &CycElement, y: &CycElement) -> CycElement {
        let mut c = vec![0i128; self.prec];
        for (i, &a) in x.digits.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.digits[..self.prec - i].iter().enumerate() {
                c[i + j] += a as i128 * b as i128;
            }
        }
        self.normalize(&mut c)
    }

    /// `theta * x = x + kappa x`.
    pub(crate) fn mul_theta_raw(&self, x: &CycElement) -> CycElement {
        let mut c: Vec<i128> = (0..self.prec)
            .map(|u| x.digits[u] as i128 + if u > 0 { x.digits[u - 1] as i128 } else { 0 })
            .collect();
        self.normalize(&mut c)
    }

    pub(crate) fn theta_pow_raw(&self, x: &CycElement, r: i64) -> CycElement {
        let r = r.rem_euclid(self.p as i64);
        let mut y = x.clone();
        for _ in 0..r {
            y = self.mul_theta_raw(&y);
        }
        y
    }

    pub fn add(&self, x: &CycElement, y: &CycElement) -> Result<CycElement, CycError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.add_raw(x, y))
    }

    pub fn sub(&self, x: &CycElement, y: &CycElement) -> Result<CycElement, CycError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.sub_raw(x, y))
    }

    pub fn neg(&self, x: &CycElement) -> Result<CycElement, CycError> {
        self.check(x)?;
        Ok(self.neg_raw(x))
    }

    pub fn scale(&self, x: &CycElement, k: i64) -> Result<CycElement, CycError> {
        self.check(x)?;
        Ok(self.scale_raw(x, k))
    }

    pub fn mul(&self, x: &CycElement, y: &CycElement) -> Result<CycElement, CycError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul_raw(x, y))
    }

    /// Multiplication by `theta^r = (1 + kappa)^r`.
    pub fn theta_pow(&self, x: &CycElement, r: i64) -> Result<CycElement, CycError> {
        self.check(x)?;
        Ok(self.theta_pow_raw(x, r))
    }

    pub fn theta_power(&self, r: i64) -> CycElement {
        self.theta_pow_raw(&self.one(), r)
    }

    pub fn valuation(&self, x: &CycElement) -> usize {
        x.valuation()
    }

    /// Reduction `O/p^j -> O/p^k` for `k <= j`.
    pub fn truncate(&self, x: &CycElement, k: usize) -> CycElement {
        assert!(k <= x.digits.len());
        CycElement {
            p: x.p,
            digits: x.digits[..k].to_vec(),
        }
    }

    /// Canonical lift `O/p^k -> O/p^j` (zero-padded digits).
    pub fn lift(&self, x: &CycElement) -> CycElement {
        assert!(x.digits.len() <= self.prec && x.p == self.p);
        let mut digits = x.digits.clone();
        digits.resize(self.prec, 0);
        CycElement { p: self.p, digits }
    }

    /// `x / kappa`, an element of precision `j - 1`.
    pub fn div_kappa(&self, x: &CycElement) -> Result<CycElement, CycError> {
        self.check(x)?;
        if self.prec == 0 {
            return Err(CycError::BadParameters(
                "cannot divide in the zero ring".into(),
            ));
        }
        if x.digits[0] != 0 {
            return Err(CycError::NotDivisible);
        }
        Ok(CycElement {
            p: self.p,
            digits: x.digits[1..].to_vec(),
        })
    }

    /// `kappa^k * x` for `x` of precision `j - k`, landing in this ring.
    pub fn mul_kappa_pow_from(&self, x: &CycElement, k: usize) -> CycElement {
        let mut digits = vec![0u32; self.prec];
        for (u, &d) in x.digits.iter().enumerate() {
            if u + k < self.prec {
                digits[u + k] = d;
            }
        }
        CycElement { p: self.p, digits }
    }

    fn residue(&self, b: i64) -> Result<u32, CycError> {
        let r = b.rem_euclid(self.p as i64) as u32;
        if r == 0 {
            return Err(CycError::BadResidue { residue: b, p: self.p });
        }
        Ok(r)
    }

    /// The automorphism `sigma_b : theta -> theta^b`, by substituting
    /// `kappa -> (1 + kappa)^b - 1` and reducing.
    pub fn sigma(&self, x: &CycElement, b: i64) -> Result<CycElement, CycError> {
        self.check(x)?;
        let b = self.residue(b)?;
        let tau = self.sub_raw(&self.theta_power(b as i64), &self.one());
        let mut acc = self.zero();
        for &d in x.digits.iter().rev() {
            acc = self.mul_raw(&acc, &tau);
            acc = self.add_raw(&acc, &self.from_int(d as i64));
        }
        Ok(acc)
    }

    /// The unit `u_a = (theta^a - 1) / kappa`.
    pub fn unit_u(&self, a: i64) -> Result<CycElement, CycError> {
        let a = self.residue(a)?;
        let up = self.with_precision(self.prec + 1);
        let num = up.sub_raw(&up.theta_power(a as i64), &up.one());
        up.div_kappa(&num)
    }

    /// Relation lattice of the additive group: row `u` is
    /// `p e_u + sum_{i=1}^{p-1} C(p, i+1) e_{u+i}`, truncated at the precision.
    pub fn relation_rows(&self) -> Vec<Vec<i64>> {
        (0..self.prec)
            .map(|u| {
                let mut row = vec![0i64; self.prec];
                row[u] = self.p as i64;
                for (i, b) in self.carry.iter().enumerate() {
                    let t = u + i + 1;
                    if t < self.prec {
                        row[t] = *b as i64;
                    }
                }
                row
            })
            .collect()
    }

    /// All `p^j` elements in lexicographic digit order (first digit most significant).
    pub fn elements(&self) -> impl Iterator<Item = CycElement> + '_ {
        let total = (self.p as u64).pow(self.prec as u32);
        (0..total).map(move |mut k| {
            let mut digits = vec![0u32; self.prec];
            for d in digits.iter_mut().rev() {
                *d = (k % self.p as u64) as u32;
                k /= self.p as u64;
            }
            CycElement { p: self.p, digits }
        })
    }

    /// Lexicographic index of an element, inverse of [`CycRing::elements`].
    pub fn index_of(&self, x: &CycElement) -> u64 {
        x.digits
            .iter()
            .fold(0u64, |acc, &d| acc * self.p as u64 + d as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_identity_and_carries() {
        let r = CycRing::new(3, 3).unwrap();
        let x = r.from_digits(vec![2, 1, 0]).unwrap();
        assert_eq!(r.add(&x, &r.zero()).unwrap(), x);
        let one = r.one();
        let three = r.add(&r.add(&one, &one).unwrap(), &one).unwrap();
        // 3 = -3 kappa - kappa^2, and 3 kappa vanishes mod p^3
        assert_eq!(three.digits(), &[0, 0, 2]);

        let r5 = CycRing::new(5, 2).unwrap();
        assert!(r5.from_int(5).is_zero());
        let r55 = CycRing::new(5, 5).unwrap();
        assert_eq!(r55.from_int(5).valuation(), 4);
    }

    #[test]
    fn mul_and_theta() {
        let r = CycRing::new(5, 4).unwrap();
        let k = r.kappa_pow(1);
        assert_eq!(r.mul(&k, &k).unwrap(), r.kappa_pow(2));
        assert_eq!(r.theta_pow(&r.one(), 1).unwrap().digits(), &[1, 1, 0, 0]);
        let x = r.from_digits(vec![3, 0, 4, 1]).unwrap();
        assert_eq!(r.theta_pow(&x, 5).unwrap(), x);
        assert_eq!(r.theta_pow(&x, -1).unwrap(), r.theta_pow(&x, 4).unwrap());
    }

    #[test]
    fn theta_has_order_p() {
        for p in [3u32, 5, 7] {
            for j in 1..=(3 * (p as usize - 1)) {
                let r = CycRing::new(p, j).unwrap();
                assert_eq!(r.theta_power(p as i64), r.one(), "p={p} j={j}");
            }
        }
    }

    #[test]
    fn valuation_and_division() {
        let r = CycRing::new(5, 4).unwrap();
        assert_eq!(r.kappa_pow(2).valuation(), 2);
        assert_eq!(r.zero().valuation(), 4);
        let lower = r.with_precision(3);
        assert_eq!(r.div_kappa(&r.kappa_pow(1)).unwrap(), lower.one());
        assert_eq!(r.div_kappa(&r.kappa_pow(3)).unwrap(), lower.kappa_pow(2));
        assert_eq!(r.div_kappa(&r.one()), Err(CycError::NotDivisible));
    }

    #[test]
    fn sigma_basics() {
        let r = CycRing::new(5, 2).unwrap();
        let k = r.kappa_pow(1);
        assert_eq!(r.sigma(&k, 1).unwrap(), k);
        // (1 + kappa)^2 - 1 = 2 kappa + kappa^2 = 2 kappa at precision 2
        assert_eq!(r.sigma(&k, 2).unwrap().digits(), &[0, 2]);
        assert!(matches!(r.sigma(&k, 5), Err(CycError::BadResidue { .. })));
    }

    #[test]
    fn unit_u_values() {
        let r = CycRing::new(5, 4).unwrap();
        assert_eq!(r.unit_u(1).unwrap(), r.one());
        for a in 1..5 {
            let u = r.unit_u(a).unwrap();
            assert_eq!(u.valuation(), 0);
            assert_eq!(u.digits()[0] as i64, a);
        }
        assert!(r.unit_u(0).is_err());
    }

    #[test]
    fn precision_mismatch_is_reported() {
        let r = CycRing::new(5, 3).unwrap();
        let other = CycRing::new(5, 2).unwrap().one();
        assert!(matches!(
            r.add(&r.one(), &other),
            Err(CycError::PrecisionMismatch { .. })
        ));
    }

    #[test]
    fn element_enumeration_roundtrip() {
        let r = CycRing::new(3, 3).unwrap();
        let all: Vec<_> = r.elements().collect();
        assert_eq!(all.len(), 27);
        for (i, x) in all.iter().enumerate() {
            assert_eq!(r.index_of(x), i as u64);
        }
    }
}
