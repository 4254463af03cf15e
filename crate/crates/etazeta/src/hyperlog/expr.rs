use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, One, Signed, Zero};

use super::{HyperlogError, HyperlogWord, Letter, Upper};
use crate::mzv::MzvIndex;
use crate::series::Rational;

/// Formal product of MZV symbols; the empty product is 1.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZetaMonomial(Vec<MzvIndex>);

impl ZetaMonomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn single(index: MzvIndex) -> Self {
        Self(vec![index])
    }

    pub fn factors(&self) -> &[MzvIndex] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().map(MzvIndex::weight).sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut v: Vec<MzvIndex> = self.0.iter().chain(&other.0).cloned().collect();
        v.sort();
        Self(v)
    }
}

impl fmt::Display for ZetaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for z in &self.0 {
            write!(f, "{z}")?;
        }
        Ok(())
    }
}

/// A zeta monomial times a product of nonempty words, kept sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    zetas: ZetaMonomial,
    words: Vec<HyperlogWord>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn new(zetas: ZetaMonomial, words: Vec<HyperlogWord>) -> Self {
        let mut words: Vec<HyperlogWord> = words.into_iter().filter(|w| !w.is_empty()).collect();
        words.sort();
        Self { zetas, words }
    }

    pub fn zetas(&self) -> &ZetaMonomial {
        &self.zetas
    }

    pub fn words(&self) -> &[HyperlogWord] {
        &self.words
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.zetas.mul(&other.zetas), self.words.iter().chain(&other.words).cloned().collect())
    }

    /// Splits off the words with upper limit `upper`.
    pub fn split_upper(&self, upper: Upper) -> (Vec<HyperlogWord>, Monomial) {
        let (hit, rest): (Vec<_>, Vec<_>) = self.words.iter().cloned().partition(|w| w.upper() == upper);
        (hit, Monomial { zetas: self.zetas.clone(), words: rest })
    }

    pub fn depends_on(&self, j: usize) -> bool {
        self.words.iter().any(|w| w.depends_on(j))
    }

    /// Total weight: zeta weights plus word lengths.
    pub fn weight(&self) -> usize {
        self.zetas.weight() as usize + self.words.iter().map(HyperlogWord::len).sum::<usize>()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if !self.zetas.is_one() {
            parts.push(self.zetas.to_string());
        }
        parts.extend(self.words.iter().map(|w| w.to_string()));
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// Rational combination of monomials in canonical (sorted) order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HyperlogExpr {
    terms: BTreeMap<Monomial, Rational>,
}

impl HyperlogExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_monomial(Monomial::one(), c)
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn from_word(w: HyperlogWord) -> Self {
        Self::from_monomial(Monomial::new(ZetaMonomial::one(), vec![w]), Rational::one())
    }

    pub fn from_monomial(m: Monomial, c: Rational) -> Self {
        let mut e = Self::zero();
        e.add_term(m, c);
        e
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn depends_on(&self, j: usize) -> bool {
        self.terms.keys().any(|m| m.depends_on(j))
    }

    pub fn add_expr(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &Self, s: &Rational) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * s);
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, s);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }

    /// Termwise product; words are not shuffled.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    /// Replaces every product of words sharing an upper limit by their shuffle.
    pub fn merged(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut partial: Vec<(Vec<HyperlogWord>, BigInt)> = vec![(Vec::new(), BigInt::one())];
            let mut uppers: Vec<Upper> = m.words.iter().map(|w| w.upper()).collect();
            uppers.dedup();
            for upper in uppers {
                let group: Vec<&HyperlogWord> = m.words.iter().filter(|w| w.upper() == upper).collect();
                let mut acc: BTreeMap<Vec<Letter>, BigInt> = BTreeMap::from([(Vec::new(), BigInt::one())]);
                for w in group {
                    let mut next = BTreeMap::new();
                    for (letters, n) in &acc {
                        for (s, k) in shuffle_letters(letters, w.letters()) {
                            *next.entry(s).or_insert_with(BigInt::zero) += n * k;
                        }
                    }
                    acc = next;
                }
                partial = partial
                    .into_iter()
                    .flat_map(|(words, n)| {
                        acc.iter().map(move |(letters, k)| {
                            let mut ws = words.clone();
                            ws.push(HyperlogWord::new(letters.clone(), upper));
                            (ws, &n * k)
                        })
                    })
                    .collect();
            }
            for (words, n) in partial {
                out.add_term(Monomial::new(m.zetas.clone(), words), c * Rational::from_integer(n));
            }
        }
        out
    }
}

impl fmt::Display for HyperlogExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i > 0 {
                write!(f, " {sign} ")?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

/// All interleavings of `u` and `v`, with multiplicities.
pub fn shuffle_letters(u: &[Letter], v: &[Letter]) -> BTreeMap<Vec<Letter>, u64> {
    fn rec(u: &[Letter], v: &[Letter], prefix: &mut Vec<Letter>, out: &mut BTreeMap<Vec<Letter>, u64>) {
        match (u.split_first(), v.split_first()) {
            (None, _) | (_, None) => {
                let mut w = prefix.clone();
                w.extend_from_slice(u);
                w.extend_from_slice(v);
                *out.entry(w).or_insert(0) += 1;
            }
            (Some((a, ur)), Some((b, vr))) => {
                prefix.push(*a);
                rec(ur, v, prefix, out);
                prefix.pop();
                prefix.push(*b);
                rec(u, vr, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = BTreeMap::new();
    rec(u, v, &mut Vec::new(), &mut out);
    out
}

/// Shuffle product of two words with the same upper limit.
pub fn shuffle(w1: &HyperlogWord, w2: &HyperlogWord) -> Result<HyperlogExpr, HyperlogError> {
    if w1.upper() != w2.upper() {
        return Err(HyperlogError::CannotShuffle(w1.to_string(), w2.to_string()));
    }
    let mut out = HyperlogExpr::zero();
    for (letters, n) in shuffle_letters(w1.letters(), w2.letters()) {
        let m = Monomial::new(ZetaMonomial::one(), vec![HyperlogWord::new(letters, w1.upper())]);
        out.add_term(m, Rational::from_integer(BigInt::from(n)));
    }
    Ok(out)
}
