use super::ring::{is_prime, CycElement, CycRing};
use super::CycError;

/// Checks `p` odd prime and `4 <= m <= n <= 2m - 2`.
pub fn check_parameters(p: u32, m: usize, n: usize) -> Result<(), CycError> {
    if p < 3 || !is_prime(p) {
        return Err(CycError::BadParameters(format!("p = {p} must be an odd prime")));
    }
    if m < 4 {
        return Err(CycError::BadParameters(format!("m = {m} must be at least 4")));
    }
    if n < m {
        return Err(CycError::BadParameters(format!("n = {n} must be at least m = {m}")));
    }
    if n > 2 * m - 2 {
        return Err(CycError::BadParameters(format!(
            "n = {n} exceeds 2m - 2 = {}",
            2 * m - 2
        )));
    }
    Ok(())
}

fn is_primitive_root(g: u32, p: u32) -> bool {
    let mut x = 1u64;
    for k in 1..p {
        x = x * g as u64 % p as u64;
        if x == 1 {
            return k == p - 1;
        }
    }
    false
}

fn inverse_mod(x: u32, p: u32) -> u32 {
    (1..p).find(|&y| (x as u64 * y as u64) % p as u64 == 1).expect("unit")
}

/// Smallest primitive root `g` modulo `p` and the exponent `a = (g+1)^{-1} mod p`,
/// replaced by `1 - a` when needed so that `2 <= a <= (p-1)/2`.
pub fn choose_a(p: u32) -> Result<(u32, u32), CycError> {
    if p <= 3 {
        return Err(CycError::UnsupportedPrime(p));
    }
    if !is_prime(p) {
        return Err(CycError::BadParameters(format!("p = {p} is not prime")));
    }
    let g = (2..p).find(|&g| is_primitive_root(g, p)).expect("primitive root");
    let mut a = inverse_mod((g + 1) % p, p);
    if a > (p - 1) / 2 {
        a = (p + 1 - a) % p;
    }
    Ok((g, a))
}

/// Number of basis wedges `e_u ^ e_v` with `u < v < d`.
pub fn pair_count(d: usize) -> usize {
    d * d.saturating_sub(1) / 2
}

/// Position of `e_u ^ e_v` (`u < v < d`) in the lexicographic list of pairs.
pub fn pair_index(d: usize, u: usize, v: usize) -> usize {
    debug_assert!(u < v && v < d);
    u * (2 * d - u - 1) / 2 + (v - u - 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AlphaKind {
    /// Built from the Galois formula with primitive root `g` and exponent `a`.
    Canonical { g: u32, a: u32 },
    Custom,
}

/// An alternating bilinear `theta`-equivariant map `L^2(O/p^(m-1)) -> O/p^(n-m)`,
/// stored by its values on `kappa^u ^ kappa^v`, `u < v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaMap {
    p: u32,
    m: usize,
    n: usize,
    kind: AlphaKind,
    table: Vec<CycElement>,
    source: CycRing,
    target: CycRing,
}

impl AlphaMap {
    /// The canonical map with the default choice of `a`.
    pub fn canonical(p: u32, m: usize, n: usize) -> Result<Self, CycError> {
        let (_, a) = choose_a(p)?;
        Self::canonical_with_a(p, m, n, a)
    }

    /// The canonical map for an explicit `a`; `a + 1` must be `(g+1)` for a primitive
    /// root `g`, that is `a^{-1} - 1` or `(1-a)^{-1} - 1` generates the units mod `p`.
    pub fn canonical_with_a(p: u32, m: usize, n: usize, a: u32) -> Result<Self, CycError> {
        if p <= 3 {
            return Err(CycError::UnsupportedPrime(p));
        }
        check_parameters(p, m, n)?;
        let a = a % p;
        if a < 2 {
            return Err(CycError::BadParameters(format!(
                "a = {a} must satisfy 2 <= a <= p - 1"
            )));
        }
        let g = [a, (p + 1 - a) % p]
            .into_iter()
            .filter(|&b| b != 0)
            .map(|b| (inverse_mod(b, p) + p - 1) % p)
            .find(|&g| is_primitive_root(g, p))
            .ok_or_else(|| {
                CycError::BadParameters(format!(
                    "a = {a} does not come from a primitive root modulo {p}"
                ))
            })?;
        let source = CycRing::new(p, m - 1)?;
        let target = CycRing::new(p, n - m)?;
        let mut map = AlphaMap {
            p,
            m,
            n,
            kind: AlphaKind::Canonical { g, a },
            table: Vec::new(),
            source,
            target,
        };
        let d = m - 1;
        let mut table = Vec::with_capacity(pair_count(d));
        for u in 0..d {
            for v in u + 1..d {
                let x = map.source.kappa_pow(u);
                let y = map.source.kappa_pow(v);
                table.push(map.eval_formula(&x, &y)?);
            }
        }
        map.table = table;
        Ok(map)
    }

    /// The zero map.
    pub fn zero(p: u32, m: usize, n: usize) -> Result<Self, CycError> {
        check_parameters(p, m, n)?;
        let target = CycRing::new(p, n - m)?;
        Ok(AlphaMap {
            p,
            m,
            n,
            kind: AlphaKind::Custom,
            table: vec![target.zero(); pair_count(m - 1)],
            source: CycRing::new(p, m - 1)?,
            target,
        })
    }

    /// A custom map from its values on `kappa^u ^ kappa^v` for `u < v <= m - 2`. Pairs not
    /// listed are zero. The table is rejected unless it defines an equivariant map on
    /// `L^2(O/p^(m-1))`.
    pub fn from_table(
        p: u32,
        m: usize,
        n: usize,
        entries: impl IntoIterator<Item = ((usize, usize), CycElement)>,
    ) -> Result<Self, CycError> {
        let mut map = Self::zero(p, m, n)?;
        let d = m - 1;
        for ((u, v), value) in entries {
            if u >= v || v >= d {
                return Err(CycError::InvalidAlpha(format!(
                    "entry ({u}, {v}) is not a pair u < v <= {}",
                    d - 1
                )));
            }
            map.target.check(&value)?;
            map.table[pair_index(d, u, v)] = value;
        }
        map.validate()?;
        Ok(map)
    }

    pub(crate) fn custom_unchecked(
        p: u32,
        m: usize,
        n: usize,
        table: Vec<CycElement>,
    ) -> Result<Self, CycError> {
        let mut map = Self::zero(p, m, n)?;
        assert_eq!(table.len(), map.table.len());
        map.table = table;
        Ok(map)
    }

    /// Well-definedness on the quotient by the relation lattice and `theta`-equivariance.
    pub fn validate(&self) -> Result<(), CycError> {
        let d = self.m - 1;
        let rows = self.source.relation_rows();
        for (u, r) in rows.iter().enumerate() {
            for w in 0..d {
                let val = self.apply_ints(r, &unit_vector(d, w));
                if !val.is_zero() {
                    return Err(CycError::InvalidAlpha(format!(
                        "not well defined: relation {u} paired with kappa^{w} maps to {val}"
                    )));
                }
            }
        }
        for u in 0..d {
            for v in u + 1..d {
                let lhs = self.apply_ints(&theta_shift(d, u), &theta_shift(d, v));
                let rhs = self.target.mul_theta_raw(&self.table[pair_index(d, u, v)]);
                if lhs != rhs {
                    return Err(CycError::InvalidAlpha(format!(
                        "not equivariant at (kappa^{u}, kappa^{v}): {lhs} != {rhs}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &AlphaKind {
        &self.kind
    }

    pub fn a(&self) -> Option<u32> {
        match self.kind {
            AlphaKind::Canonical { a, .. } => Some(a),
            AlphaKind::Custom => None,
        }
    }

    pub fn is_canonical(&self) -> bool {
        matches!(self.kind, AlphaKind::Canonical { .. })
    }

    /// `O/p^(m-1)`.
    pub fn source(&self) -> &CycRing {
        &self.source
    }

    /// `O/p^(n-m)`.
    pub fn target(&self) -> &CycRing {
        &self.target
    }

    /// `alpha(kappa^u ^ kappa^v)` for any `u, v <= m - 2`.
    pub fn value(&self, u: usize, v: usize) -> CycElement {
        let d = self.m - 1;
        match u.cmp(&v) {
            std::cmp::Ordering::Less => self.table[pair_index(d, u, v)].clone(),
            std::cmp::Ordering::Greater => self.target.neg_raw(&self.table[pair_index(d, v, u)]),
            std::cmp::Ordering::Equal => self.target.zero(),
        }
    }

    /// Stored values in pair order `(0,1), (0,2), ..., (m-3, m-2)`.
    pub fn table(&self) -> &[CycElement] {
        &self.table
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &CycElement)> + '_ {
        let d = self.m - 1;
        (0..d)
            .flat_map(move |u| (u + 1..d).map(move |v| (u, v)))
            .zip(self.table.iter())
    }

    pub fn apply(&self, x: &CycElement, y: &CycElement) -> Result<CycElement, CycError> {
        self.source.check(x)?;
        self.source.check(y)?;
        Ok(self.apply_ints(x.digits(), y.digits()))
    }

    /// Bilinear evaluation on integer coordinate vectors (any lifts). Coordinates past
    /// `m - 2` are ignored.
    pub fn apply_ints<T: Copy + Into<i64>>(&self, x: &[T], y: &[T]) -> CycElement {
        let d = self.m - 1;
        let k = self.n - self.m;
        let coord = |v: &[T], i: usize| v.get(i).map_or(0i128, |&c| c.into() as i128);
        let mut acc = vec![0i128; k];
        if k > 0 {
            for u in 0..d {
                let (xu, yu) = (coord(x, u), coord(y, u));
                if xu == 0 && yu == 0 {
                    continue;
                }
                for v in u + 1..d {
                    let c = xu * coord(y, v) - coord(x, v) * yu;
                    if c == 0 {
                        continue;
                    }
                    for (t, &dgt) in self.table[pair_index(d, u, v)].digits().iter().enumerate() {
                        acc[t] += c * dgt as i128;
                    }
                }
            }
        }
        self.target.normalize(&mut acc)
    }

    /// The defining Galois formula
    /// `kappa^{-1} (sigma_a(x) sigma_{1-a}(y) - sigma_a(y) sigma_{1-a}(x))`, evaluated on
    /// lifts to `O/p^(n-m+1)`. Only available for canonical maps.
    pub fn eval_formula(&self, x: &CycElement, y: &CycElement) -> Result<CycElement, CycError> {
        let AlphaKind::Canonical { a, .. } = self.kind else {
            return Err(CycError::InvalidAlpha("no formula for a custom table".into()));
        };
        self.source.check(x)?;
        self.source.check(y)?;
        let w = self.n - self.m + 1;
        let lift = self.source.with_precision(w);
        let xs = self.source.truncate(x, w);
        let ys = self.source.truncate(y, w);
        let b = (self.p + 1 - a) as i64;
        let sx_a = lift.sigma(&xs, a as i64)?;
        let sx_b = lift.sigma(&xs, b)?;
        let sy_a = lift.sigma(&ys, a as i64)?;
        let sy_b = lift.sigma(&ys, b)?;
        let num = lift.sub_raw(&lift.mul_raw(&sx_a, &sy_b), &lift.mul_raw(&sy_a, &sx_b));
        lift.div_kappa(&num)
    }

    /// The closed expression
    /// `sgn(i-j) kappa^{i+j-1} (u_a u_{1-a})^{min(i,j)} (u_a^{|i-j|} - u_{1-a}^{|i-j|})`.
    pub fn closed_form_value(&self, i: usize, j: usize) -> Result<CycElement, CycError> {
        let AlphaKind::Canonical { a, .. } = self.kind else {
            return Err(CycError::InvalidAlpha("no closed form for a custom table".into()));
        };
        let t = &self.target;
        if i == j || t.precision() == 0 {
            return Ok(t.zero());
        }
        let ua = t.unit_u(a as i64)?;
        let ub = t.unit_u((self.p + 1 - a) as i64)?;
        let pow = |x: &CycElement, e: usize| (0..e).fold(t.one(), |acc, _| t.mul_raw(&acc, x));
        let lo = i.min(j);
        let diff = i.abs_diff(j);
        let mut val = t.mul_raw(&pow(&t.mul_raw(&ua, &ub), lo), &t.sub_raw(&pow(&ua, diff), &pow(&ub, diff)));
        if i < j {
            val = t.neg_raw(&val);
        }
        Ok(t.mul_kappa_pow_from(&t.truncate(&val, t.precision().saturating_sub(i + j - 1)), i + j - 1))
    }

    /// Smallest valuation among the values; the image of the map is `p^level`. Equals
    /// `n - m` for the zero map.
    pub fn image_level(&self) -> usize {
        self.table
            .iter()
            .map(|v| v.valuation())
            .min()
            .unwrap_or(self.n - self.m)
            .min(self.n - self.m)
    }

    /// Image is all of `O/p^(n-m)`.
    pub fn is_surjective(&self) -> bool {
        self.image_level() == 0
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(|v| v.is_zero())
    }

    /// `theta^r * alpha`, again a valid map.
    pub fn theta_twist(&self, r: i64) -> AlphaMap {
        let mut out = self.clone();
        out.kind = AlphaKind::Custom;
        out.table = self
            .table
            .iter()
            .map(|v| self.target.theta_pow_raw(v, r))
            .collect();
        out
    }

    /// Composite with reduction `O/p^(n-m) -> O/p^(n'-m)`, a map for parameters `(m, n')`.
    pub fn truncate_target(&self, n_new: usize) -> Result<AlphaMap, CycError> {
        check_parameters(self.p, self.m, n_new)?;
        if n_new > self.n {
            return Err(CycError::BadParameters(format!(
                "cannot extend the target from n = {} to n = {n_new}",
                self.n
            )));
        }
        let k = n_new - self.m;
        let target = self.target.with_precision(k);
        Ok(AlphaMap {
            p: self.p,
            m: self.m,
            n: n_new,
            kind: self.kind.clone(),
            table: self.table.iter().map(|v| self.target.truncate(v, k)).collect(),
            source: self.source.clone(),
            target,
        })
    }

    /// Reinterprets the map as a custom table (drops the formula tag).
    pub fn as_custom(&self) -> AlphaMap {
        let mut out = self.clone();
        out.kind = AlphaKind::Custom;
        out
    }
}

fn unit_vector(d: usize, w: usize) -> Vec<i64> {
    let mut e = vec![0; d];
    e[w] = 1;
    e
}

/// Coordinates of `theta kappa^u = kappa^u + kappa^{u+1}` in `Z^d`.
fn theta_shift(d: usize, u: usize) -> Vec<i64> {
    let mut e = unit_vector(d, u);
    if u + 1 < d {
        e[u + 1] = 1;
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn choose_a_examples() {
        assert_eq!(choose_a(5), Ok((2, 2)));
        assert_eq!(choose_a(7), Ok((3, 2)));
        assert_eq!(choose_a(3), Err(CycError::UnsupportedPrime(3)));
        for p in [11u32, 13, 17, 19, 23] {
            let (_, a) = choose_a(p).unwrap();
            assert!(2 <= a && a <= (p - 1) / 2, "p = {p}, a = {a}");
        }
    }

    #[test]
    fn pair_indexing_is_lexicographic() {
        let d = 5;
        let mut k = 0;
        for u in 0..d {
            for v in u + 1..d {
                assert_eq!(pair_index(d, u, v), k);
                k += 1;
            }
        }
        assert_eq!(k, pair_count(d));
    }

    #[test]
    fn canonical_is_valid_and_alternating() {
        for (p, m, n) in [(5, 4, 5), (5, 4, 6), (5, 6, 10), (7, 5, 8)] {
            let a = AlphaMap::canonical(p, m, n).unwrap();
            a.validate().unwrap();
            for x in a.source().elements().step_by(37).take(20) {
                assert!(a.apply(&x, &x).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn canonical_valuations() {
        let a = AlphaMap::canonical(5, 4, 6).unwrap();
        assert_eq!(a.value(0, 1).valuation(), 0);
        let a = AlphaMap::canonical(5, 8, 14).unwrap();
        for u in 0..7 {
            for v in u + 1..7 {
                let val = a.value(u, v).valuation();
                if (v - u) % 4 != 0 {
                    assert_eq!(val, (u + v - 1).min(6), "({u},{v})");
                } else {
                    assert!(val >= (u + v).min(6), "({u},{v})");
                }
            }
        }
    }

    #[test]
    fn table_agrees_with_formula() {
        let a = AlphaMap::canonical(5, 5, 8).unwrap();
        let xs: Vec<_> = a.source().elements().step_by(53).collect();
        for x in &xs {
            for y in xs.iter().take(6) {
                assert_eq!(a.apply(x, y).unwrap(), a.eval_formula(x, y).unwrap());
            }
        }
    }

    #[test]
    fn closed_form_matches_definition() {
        for (p, m, n) in [(5, 6, 10), (7, 6, 10)] {
            let a = AlphaMap::canonical(p, m, n).unwrap();
            for i in 0..m - 1 {
                for j in 0..m - 1 {
                    assert_eq!(a.closed_form_value(i, j).unwrap(), a.value(i, j), "({i},{j})");
                }
            }
        }
    }

    #[test]
    fn invalid_tables_are_rejected() {
        let r = CycRing::new(5, 1).unwrap();
        // theta (kappa ^ kappa^2) picks up the (1, 2) value at position (0, 1)
        let err = AlphaMap::from_table(5, 4, 5, [((1, 2), r.one())]);
        assert!(matches!(err, Err(CycError::InvalidAlpha(_))));
        let err = AlphaMap::from_table(5, 4, 5, [((1, 1), r.one())]);
        assert!(matches!(err, Err(CycError::InvalidAlpha(_))));
        let canon = AlphaMap::canonical(5, 4, 5).unwrap();
        let copy = AlphaMap::from_table(5, 4, 5, canon.entries().map(|(k, v)| (k, v.clone()))).unwrap();
        assert_eq!(copy.table(), canon.table());
    }

    #[test]
    fn parameter_checks() {
        assert!(AlphaMap::canonical(5, 4, 7).is_err());
        assert!(AlphaMap::canonical(5, 3, 4).is_err());
        assert!(AlphaMap::canonical(3, 4, 5).is_err());
        let z = AlphaMap::canonical(5, 4, 4).unwrap();
        assert!(z.is_zero());
        assert!(z.is_surjective());
        assert!(AlphaMap::canonical_with_a(5, 4, 5, 4).is_ok());
        assert!(AlphaMap::canonical_with_a(5, 4, 5, 3).is_err());
        assert!(AlphaMap::canonical_with_a(7, 4, 5, 6).is_ok());
        assert!(AlphaMap::canonical_with_a(7, 4, 5, 4).is_err());
    }

    #[test]
    fn truncation_is_compatible() {
        let a = AlphaMap::canonical(5, 6, 10).unwrap();
        for n in 6..10 {
            let b = AlphaMap::canonical(5, 6, n).unwrap();
            assert_eq!(a.truncate_target(n).unwrap().table(), b.table());
        }
    }
}
