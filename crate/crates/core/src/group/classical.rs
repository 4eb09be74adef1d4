use crate::homology::{FiniteGroupTable, DEFAULT_ORACLE_CAP};

use super::GroupError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassicalKind {
    Dihedral,
    Semidihedral,
    Quaternion,
}

/// The dihedral, semidihedral or generalized quaternion group of order `2^n`.
///
/// Elements are `r^i f^e` with `r` of order `2^(n-1)`, indexed `e * 2^(n-1) + i`, and
/// `f r f^{-1} = r^k` with `k = -1`, `2^(n-2) - 1`, `-1` respectively; `f^2 = r^(2^(n-2))` for
/// the quaternion group, `1` otherwise.
pub fn classical_2group(kind: ClassicalKind, n: usize) -> Result<FiniteGroupTable, GroupError> {
    if n < 4 {
        return Err(GroupError::BadParameters(format!("n = {n} must be at least 4")));
    }
    let order = 1usize << n;
    if order > DEFAULT_ORACLE_CAP {
        return Err(GroupError::TooLarge {
            order: order as u128,
            cap: DEFAULT_ORACLE_CAP,
        });
    }
    let half = order / 2;
    let k = match kind {
        ClassicalKind::Dihedral | ClassicalKind::Quaternion => half - 1,
        ClassicalKind::Semidihedral => half / 2 - 1,
    };
    let f_squared = match kind {
        ClassicalKind::Quaternion => half / 2,
        _ => 0,
    };
    // (r^i f^a)(r^j f^b) = r^(i + k^a j) f^(a + b), with f^2 = r^f_squared
    let mul_index = |x: usize, y: usize| -> usize {
        let (a, i) = (x / half, x % half);
        let (b, j) = (y / half, y % half);
        let twisted = if a == 1 { j * k % half } else { j };
        let mut exp = (i + twisted) % half;
        let mut e = a + b;
        if e == 2 {
            exp = (exp + f_squared) % half;
            e = 0;
        }
        e * half + exp
    };
    let rows: Vec<Vec<usize>> = (0..order)
        .map(|x| (0..order).map(|y| mul_index(x, y)).collect())
        .collect();
    FiniteGroupTable::from_rows(&rows).map_err(|e| GroupError::ModelInvalid(e.to_string()))
}

/// One table for each isomorphism class of groups of order 81 and maximal class.
///
/// Such a group has an abelian maximal subgroup `A` of order 27 (`C_3^3` or `C_9 x C_3`)
/// and is `<s, A>` with `s^-1 a s = phi(a)` and `s^3 = a0` fixed by `phi`. All such
/// extensions are built, filtered by class 3, and reduced up to isomorphism.
pub fn maximal_class_order_81() -> Vec<FiniteGroupTable> {
    let mut found: Vec<FiniteGroupTable> = Vec::new();
    for orders in [vec![3usize, 3, 3], vec![9, 3]] {
        let a = AbelianCoords::new(orders);
        for phi in a.automorphisms_of_order_dividing_3() {
            let (d1, d2) = (a.image_size(&a.minus_one(&phi, 1)), a.image_size(&a.minus_one(&phi, 2)));
            if d1 != 9 || d2 != 3 {
                continue;
            }
            for a0 in 0..a.size() {
                if a.apply(&phi, a0) != a0 {
                    continue;
                }
                let t = a.extension(&phi, a0);
                if t.is_maximal_class() && !found.iter().any(|u| u.is_isomorphic(&t)) {
                    found.push(t);
                }
            }
        }
    }
    found
}

/// `Z/o_1 x ... x Z/o_k` with elements indexed in mixed radix; endomorphisms are given
/// by the images of the standard generators.
struct AbelianCoords {
    orders: Vec<usize>,
}

impl AbelianCoords {
    fn new(orders: Vec<usize>) -> Self {
        AbelianCoords { orders }
    }

    fn size(&self) -> usize {
        self.orders.iter().product()
    }

    fn coords(&self, mut x: usize) -> Vec<usize> {
        self.orders
            .iter()
            .map(|&o| {
                let c = x % o;
                x /= o;
                c
            })
            .collect()
    }

    fn index(&self, c: &[usize]) -> usize {
        let mut x = 0;
        for (k, &o) in self.orders.iter().enumerate().rev() {
            x = x * o + c[k] % o;
        }
        x
    }

    fn add(&self, x: usize, y: usize) -> usize {
        let (a, b) = (self.coords(x), self.coords(y));
        self.index(&a.iter().zip(&b).map(|(u, v)| u + v).collect::<Vec<_>>())
    }

    fn times(&self, k: usize, x: usize) -> usize {
        self.index(&self.coords(x).iter().map(|c| c * k).collect::<Vec<_>>())
    }

    fn order_of(&self, x: usize) -> usize {
        (1..).find(|&k| self.times(k, x) == 0).unwrap()
    }

    fn apply(&self, phi: &[usize], x: usize) -> usize {
        self.coords(x)
            .iter()
            .zip(phi)
            .fold(0, |acc, (&c, &img)| self.add(acc, self.times(c, img)))
    }

    /// The endomorphism `(phi - 1)^k` as a list of images of every element.
    fn minus_one(&self, phi: &[usize], k: usize) -> Vec<usize> {
        (0..self.size())
            .map(|x| {
                let mut y = x;
                for _ in 0..k {
                    let py = self.apply(phi, y);
                    y = self.add(py, self.times(self.orders.iter().max().unwrap() - 1, y));
                }
                y
            })
            .collect()
    }

    fn image_size(&self, images: &[usize]) -> usize {
        let mut seen = vec![false; self.size()];
        images.iter().for_each(|&y| seen[y] = true);
        seen.iter().filter(|&&b| b).count()
    }

    fn automorphisms_of_order_dividing_3(&self) -> Vec<Vec<usize>> {
        let n = self.size();
        let choices: Vec<Vec<usize>> = self
            .orders
            .iter()
            .map(|&o| (0..n).filter(|&y| o % self.order_of(y) == 0).collect())
            .collect();
        let mut out = Vec::new();
        let mut pick = vec![0usize; choices.len()];
        'outer: loop {
            let phi: Vec<usize> = pick.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
            let all: Vec<usize> = (0..n).map(|x| self.apply(&phi, x)).collect();
            if self.image_size(&all) == n && (0..n).all(|x| self.apply(&phi, self.apply(&phi, all[x])) == x) {
                out.push(phi);
            }
            for k in 0..pick.len() {
                pick[k] += 1;
                if pick[k] < choices[k].len() {
                    continue 'outer;
                }
                pick[k] = 0;
            }
            return out;
        }
    }

    /// `(i, a)(j, b) = (i + j, phi^j(a) + b [+ a0 when i + j >= 3])`, indexed `3 a + i`.
    fn extension(&self, phi: &[usize], a0: usize) -> FiniteGroupTable {
        let n = self.size();
        let mut pow = vec![(0..n).collect::<Vec<_>>()];
        for j in 1..3 {
            let prev: &Vec<usize> = &pow[j - 1];
            pow.push(prev.iter().map(|&x| self.apply(phi, x)).collect());
        }
        let rows: Vec<Vec<usize>> = (0..3 * n)
            .map(|x| {
                let (i, a) = (x % 3, x / 3);
                (0..3 * n)
                    .map(|y| {
                        let (j, b) = (y % 3, y / 3);
                        let mut c = self.add(pow[j][a], b);
                        if i + j >= 3 {
                            c = self.add(c, a0);
                        }
                        3 * c + (i + j) % 3
                    })
                    .collect()
            })
            .collect();
        FiniteGroupTable::from_rows(&rows).expect("extension data is consistent")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_16_facts() {
        for kind in [ClassicalKind::Dihedral, ClassicalKind::Semidihedral, ClassicalKind::Quaternion] {
            let t = classical_2group(kind, 4).unwrap();
            assert!(t.is_maximal_class(), "{kind:?}");
            assert_eq!(t.center().len(), 2);
            let p1 = t.p1_subgroup().unwrap();
            assert_eq!(p1.len(), 8);
            assert!(t.is_abelian_subset(&p1));
        }
        let q = classical_2group(ClassicalKind::Quaternion, 4).unwrap();
        let involutions = (0..16).filter(|&a| q.element_order(a) == 2).count();
        assert_eq!(involutions, 1);
    }

    #[test]
    fn size_limits() {
        assert!(classical_2group(ClassicalKind::Dihedral, 3).is_err());
        assert!(classical_2group(ClassicalKind::Dihedral, 8).is_err());
        assert_eq!(classical_2group(ClassicalKind::Dihedral, 7).unwrap().order(), 128);
    }

    #[test]
    fn order_81_maximal_class() {
        let all = maximal_class_order_81();
        assert_eq!(all.len(), 4);
        let wreath = FiniteGroupTable::from_permutations(&[
            vec![1, 2, 0, 3, 4, 5, 6, 7, 8],
            vec![3, 4, 5, 6, 7, 8, 0, 1, 2],
        ])
        .unwrap();
        assert!(all.iter().any(|t| t.is_isomorphic(&wreath)));
        assert!(!all[0].is_isomorphic(&all[1]));
    }
}
