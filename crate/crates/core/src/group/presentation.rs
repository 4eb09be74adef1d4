use std::fmt;
use std::str::FromStr;

use super::{GroupElement, GroupError, MaxClassGroup};

/// A letter over the generators `t` (index 0) and `t1` (index 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub generator: u8,
    pub inverse: bool,
}

impl Letter {
    pub const T: Letter = Letter { generator: 0, inverse: false };
    pub const T1: Letter = Letter { generator: 1, inverse: false };

    fn inv(self) -> Letter {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    fn name(self) -> &'static str {
        if self.generator == 0 {
            "t"
        } else {
            "t1"
        }
    }
}

/// A freely reduced word in `t, t1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        for &l in &other.0 {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        (0..k.unsigned_abs()).fold(Word::empty(), |acc, _| acc.mul(&base))
    }

    /// `a^{-1} b^{-1} a b`.
    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.inverse().mul(&b.inverse()).mul(a).mul(b)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == l {
                j += 1;
            }
            let e = (j - i) as i64 * if l.inverse { -1 } else { 1 };
            parts.push(if e == 1 { l.name().to_string() } else { format!("{}^{e}", l.name()) });
            i = j;
        }
        write!(f, "{}", parts.join("*"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse word: {0}")]
pub struct WordParseError(String);

impl FromStr for Word {
    type Err = WordParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "1" || s.is_empty() {
            return Ok(Word::empty());
        }
        let mut w = Word::empty();
        for token in s.split('*') {
            let (name, exp) = match token.split_once('^') {
                Some((n, e)) => (n, e.parse::<i64>().map_err(|_| WordParseError(token.into()))?),
                None => (token, 1),
            };
            let l = match name {
                "t" => Letter::T,
                "t1" => Letter::T1,
                _ => return Err(WordParseError(token.into())),
            };
            w = w.mul(&Word::letter(l).pow(exp));
        }
        Ok(w)
    }
}

/// Relators over `t, t1`, grouped as `[t_n]`, `[rho(t^p), rho((t t1)^p)]` and
/// `[rho([t_{2i}, t1]) : 1 <= i <= (p-1)/2]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePresentation {
    pub generators: Vec<String>,
    pub power_relators: Vec<Word>,
    pub defining_relators: Vec<Word>,
    pub commutator_relators: Vec<Word>,
}

impl FinitePresentation {
    pub fn relators(&self) -> impl Iterator<Item = &Word> {
        self.power_relators
            .iter()
            .chain(&self.defining_relators)
            .chain(&self.commutator_relators)
    }

    pub fn census(&self) -> (usize, usize, usize) {
        (
            self.power_relators.len(),
            self.defining_relators.len(),
            self.commutator_relators.len(),
        )
    }

    /// One relator per line.
    pub fn to_text(&self) -> String {
        self.relators().map(|w| format!("{w}\n")).collect()
    }
}

impl MaxClassGroup {
    /// `t_k`: `t_1 = t1` and `t_k = [t_{k-1}, t]`.
    pub fn t_word(&self, k: usize) -> Word {
        assert!(k >= 1);
        let t = Word::letter(Letter::T);
        (1..k).fold(Word::letter(Letter::T1), |w, _| Word::commutator(&w, &t))
    }

    /// Evaluates a word under `t -> s`, `t1 -> s_1`.
    pub fn evaluate(&self, w: &Word) -> GroupElement {
        let gens = [self.s(), self.s_i(1)];
        let invs = [self.inverse(&gens[0]), self.inverse(&gens[1])];
        w.letters().iter().fold(self.identity(), |acc, l| {
            let g = if l.inverse { &invs[l.generator as usize] } else { &gens[l.generator as usize] };
            self.multiply(&acc, g)
        })
    }

    /// Normal-form word `t^{i_0} t_1^{i_1} ... t_{n-1}^{i_{n-1}}` for `g`, with `t_k` the
    /// iterated commutator words.
    pub fn normal_form_word(&self, g: &GroupElement) -> Result<Word, GroupError> {
        let p = self.p();
        let mut word = Word::letter(Letter::T).pow(g.s_exp as i64);
        let mut h = self.multiply(&self.power(&self.s(), -(g.s_exp as i64)), g);
        for k in 1..self.n() {
            let tk = self.t_word(k);
            let sk = self.evaluate(&tk);
            if self.level(&sk) != k {
                return Err(GroupError::ModelInvalid(format!("t_{k} does not lie in P_{k} minus P_{}", k + 1)));
            }
            let lead = sk.body.digits()[k - 1];
            let digit = h.body.digits()[k - 1];
            let inv_lead = (1..p).find(|&y| lead * y % p == 1).expect("unit");
            let e = digit * inv_lead % p;
            if e != 0 {
                h = self.multiply(&self.power(&sk, -(e as i64)), &h);
                word = word.mul(&tk.pow(e as i64));
            }
        }
        if h != self.identity() {
            return Err(GroupError::ModelInvalid("normal form collection did not terminate".into()));
        }
        Ok(word)
    }

    /// `w [[w]]^{-1}`.
    pub fn relator_for(&self, w: &Word) -> Result<Word, GroupError> {
        let nf = self.normal_form_word(&self.evaluate(w))?;
        Ok(w.mul(&nf.inverse()))
    }

    pub fn emit_presentation(&self) -> Result<FinitePresentation, GroupError> {
        let t = Word::letter(Letter::T);
        let t1 = Word::letter(Letter::T1);
        let p = self.p() as i64;
        let power_relators = vec![self.t_word(self.n())];
        let defining_relators = vec![
            self.relator_for(&t.pow(p))?,
            self.relator_for(&t.mul(&t1).pow(p))?,
        ];
        let commutator_relators = (1..=(self.p() as usize - 1) / 2)
            .map(|i| self.relator_for(&Word::commutator(&self.t_word(2 * i), &t1)))
            .collect::<Result<Vec<_>, _>>()?;
        let pres = FinitePresentation {
            generators: vec!["t".into(), "t1".into()],
            power_relators,
            defining_relators,
            commutator_relators,
        };
        for (k, w) in pres.relators().enumerate() {
            if self.evaluate(w) != self.identity() {
                return Err(GroupError::ModelInvalid(format!("relator {k} does not evaluate to 1")));
            }
        }
        Ok(pres)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_text_roundtrip() {
        let w: Word = "t^-1*t1*t1*t^3".parse().unwrap();
        assert_eq!(w.to_string(), "t^-1*t1^2*t^3");
        assert_eq!(w.to_string().parse::<Word>().unwrap(), w);
        assert_eq!(Word::empty().to_string(), "1");
        assert!("t2".parse::<Word>().is_err());
        let a: Word = "t*t1".parse().unwrap();
        assert!(a.mul(&a.inverse()).is_empty());
    }

    #[test]
    fn presentation_census_and_check() {
        for (p, n, m) in [(5, 5, 4), (7, 6, 5)] {
            let g = MaxClassGroup::canonical(p, n, m).unwrap();
            let pres = g.emit_presentation().unwrap();
            assert_eq!(pres.census(), (1, 2, (p as usize - 1) / 2));
            assert_eq!(pres.defining_relators[0], Word::letter(Letter::T).pow(p as i64));
            for w in pres.relators() {
                assert_eq!(g.evaluate(w), g.identity());
            }
        }
    }

    #[test]
    fn normal_form_words_evaluate_back() {
        let g = MaxClassGroup::canonical(5, 5, 4).unwrap();
        for x in g.elements().step_by(97) {
            let w = g.normal_form_word(&x).unwrap();
            assert_eq!(g.evaluate(&w), x);
        }
    }
}
