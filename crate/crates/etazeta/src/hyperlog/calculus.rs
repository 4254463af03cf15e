//! Differentiation, variable removal and integration of hyperlogarithms.

use std::collections::{BTreeMap, HashMap};

use num::{BigInt, One, Zero};

use super::expr::{shuffle_letters, HyperlogExpr, Monomial, ZetaMonomial};
use super::{HyperlogError, HyperlogWord, Letter, Upper};
use crate::mzv::{MzvExpr, MzvIndex};
use crate::series::Rational;

/// Partial fractions `sum c / (x_j - pole)`.
type Poles = BTreeMap<Letter, Rational>;

fn pole(p: Letter, c: i64) -> (Letter, Rational) {
    (p, Rational::from_integer(BigInt::from(c)))
}

/// `d/dx_j log(a - b)` as partial fractions in `x_j`.
fn dlog(a: Letter, b: Letter, j: usize) -> Result<Poles, HyperlogError> {
    if a == b {
        return Ok(Poles::new());
    }
    let (da, db) = (a.variable() == Some(j), b.variable() == Some(j));
    if !da && !db {
        return Ok(Poles::new());
    }
    let unsupported = || HyperlogError::UnsupportedLetter(format!("log({a} - {b}) is not a dlog form in x{j}"));
    if da && db {
        return Err(unsupported());
    }
    let (moving, fixed) = if da { (a, b) } else { (b, a) };
    let out = match (moving, fixed) {
        (Letter::Var(_), Letter::Zero | Letter::One | Letter::Var(_)) => Poles::from([pole(fixed, 1)]),
        (Letter::InvVar(_), Letter::Zero) => Poles::from([pole(Letter::Zero, -1)]),
        (Letter::InvVar(_), Letter::One) => Poles::from([pole(Letter::One, 1), pole(Letter::Zero, -1)]),
        (Letter::InvVar(_), Letter::InvVar(i)) => Poles::from([pole(Letter::Var(i), 1), pole(Letter::Zero, -1)]),
        _ => return Err(unsupported()),
    };
    Ok(out)
}

/// `d/dx_j` of a single word: `sum (pole, c, w')` meaning `c / (x_j - pole) * w'`.
///
/// With `a_0 = 0`, `a_{n+1}` the upper limit and `e_k = dlog(a_{k+1} - a_k)`,
/// `dI = sum_k (e_k - e_{k-1}) I(.. a_k omitted ..)`.
pub fn diff_word(w: &HyperlogWord, j: usize) -> Result<Vec<(Letter, Rational, HyperlogWord)>, HyperlogError> {
    if !w.depends_on(j) || w.is_empty() {
        return Ok(Vec::new());
    }
    let mut seq = vec![Letter::Zero];
    seq.extend_from_slice(w.letters());
    seq.push(w.upper().as_letter());
    let eps = seq.windows(2).map(|p| dlog(p[1], p[0], j)).collect::<Result<Vec<_>, _>>()?;
    let mut out = Vec::new();
    for k in 1..=w.len() {
        let mut diff = eps[k].clone();
        for (p, c) in &eps[k - 1] {
            *diff.entry(*p).or_insert_with(Rational::zero) -= c;
        }
        let mut letters = w.letters().to_vec();
        letters.remove(k - 1);
        let sub = HyperlogWord::new(letters, w.upper());
        for (p, c) in diff.into_iter().filter(|(_, c)| !c.is_zero()) {
            if !sub.is_convergent() {
                return Err(HyperlogError::Divergent(sub.to_string()));
            }
            out.push((p, c, sub.clone()));
        }
    }
    Ok(out)
}

/// `d/dx_j expr = sum_pole (x_j - pole)^{-1} * result[pole]`, by the product rule.
pub fn diff_wrt_var(expr: &HyperlogExpr, j: usize) -> Result<BTreeMap<Letter, HyperlogExpr>, HyperlogError> {
    let mut out: BTreeMap<Letter, HyperlogExpr> = BTreeMap::new();
    for (m, c) in expr.terms() {
        let words = m.words();
        for (i, w) in words.iter().enumerate() {
            for (p, dc, sub) in diff_word(w, j)? {
                let mut others: Vec<HyperlogWord> = words.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, w)| w.clone()).collect();
                others.push(sub);
                out.entry(p).or_default().add_term(Monomial::new(m.zetas().clone(), others), c * &dc);
            }
        }
    }
    out.retain(|_, e| !e.is_zero());
    Ok(out)
}

/// `I(0; w; 1)` for an admissible {0,1}-word as `(-1)^p zeta(k)`.
pub fn word_to_mzv(word: &HyperlogWord) -> Result<MzvExpr, HyperlogError> {
    let (sign, index) = word_to_signed_index(word)?;
    Ok(match index {
        Some(k) => MzvExpr::single(k, sign),
        None => MzvExpr::zero(),
    })
}

/// Sign and index of a constant word; `None` index for the empty word (value 1).
fn word_to_signed_index(word: &HyperlogWord) -> Result<(Rational, Option<MzvIndex>), HyperlogError> {
    if !word.is_constant() {
        return Err(HyperlogError::UnsupportedLetter(format!("{word} is not a word over {{0,1}} with upper limit 1")));
    }
    if word.is_empty() {
        return Ok((Rational::one(), None));
    }
    if !word.is_convergent() {
        return Err(HyperlogError::Divergent(word.to_string()));
    }
    let mut blocks: Vec<u32> = Vec::new();
    for l in word.letters() {
        match l {
            Letter::One => blocks.push(1),
            _ => *blocks.last_mut().expect("first letter is 1") += 1,
        }
    }
    let sign = if blocks.len() % 2 == 0 { Rational::one() } else { -Rational::one() };
    let index = MzvIndex::admissible(blocks).map_err(|e| HyperlogError::Divergent(e.to_string()))?;
    Ok((sign, Some(index)))
}

fn constant_word_expr(word: &HyperlogWord) -> Result<HyperlogExpr, HyperlogError> {
    let (sign, index) = word_to_signed_index(word)?;
    let z = index.map_or_else(ZetaMonomial::one, ZetaMonomial::single);
    Ok(HyperlogExpr::from_monomial(Monomial::new(z, Vec::new()), sign))
}

/// Letters of `zeta(k)` as a word, with `zeta(k) = sign * I(0; letters; 1)`.
fn zeta_letters(k: &MzvIndex) -> (Vec<Letter>, bool) {
    let letters = k
        .entries()
        .iter()
        .flat_map(|&e| std::iter::once(Letter::One).chain(std::iter::repeat(Letter::Zero).take(e as usize - 1)))
        .collect();
    (letters, k.depth() % 2 == 1)
}

/// Linearizes an expression made only of zeta monomials and constant words.
pub fn constants_to_mzv(expr: &HyperlogExpr) -> Result<MzvExpr, HyperlogError> {
    let mut out = MzvExpr::zero();
    for (m, c) in expr.terms() {
        let mut acc: BTreeMap<Vec<Letter>, BigInt> = BTreeMap::from([(Vec::new(), BigInt::one())]);
        let mut negative = false;
        let mut factors: Vec<Vec<Letter>> = Vec::new();
        for z in m.zetas().factors() {
            let (letters, neg) = zeta_letters(z);
            negative ^= neg;
            factors.push(letters);
        }
        for w in m.words() {
            if !w.is_constant() {
                return Err(HyperlogError::NotReady(w.max_var().unwrap_or(0)));
            }
            factors.push(w.letters().to_vec());
        }
        for f in factors {
            let mut next = BTreeMap::new();
            for (letters, n) in &acc {
                for (s, k) in shuffle_letters(letters, &f) {
                    *next.entry(s).or_insert_with(BigInt::zero) += n * k;
                }
            }
            acc = next;
        }
        let sign = if negative { -c.clone() } else { c.clone() };
        for (letters, n) in acc {
            let part = word_to_mzv(&HyperlogWord::new(letters, Upper::One))?;
            out = &out + &part.scale(&(&sign * Rational::from_integer(n)));
        }
    }
    Ok(out)
}

/// Rewrites words into products of canonical words (upper `x_i`, letters in
/// `{0, 1, x_k : k < i}`) and zeta constants, memoizing per word.
#[derive(Debug, Default)]
pub struct Reducer {
    cache: HashMap<HyperlogWord, HyperlogExpr>,
}

impl Reducer {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every non-trivial word rewritten so far with its canonical form.
    pub fn removals(&self) -> impl Iterator<Item = (&HyperlogWord, &HyperlogExpr)> {
        self.cache.iter()
    }

    pub fn canonicalize(&mut self, expr: &HyperlogExpr) -> Result<HyperlogExpr, HyperlogError> {
        let mut out = HyperlogExpr::zero();
        for (m, c) in expr.terms() {
            let mut acc = HyperlogExpr::from_monomial(Monomial::new(m.zetas().clone(), Vec::new()), c.clone());
            for w in m.words() {
                acc = acc.mul(&self.canonicalize_word(w)?);
            }
            out.add_expr(&acc);
        }
        Ok(out.merged())
    }

    pub fn canonicalize_word(&mut self, w: &HyperlogWord) -> Result<HyperlogExpr, HyperlogError> {
        if w.is_empty() {
            return Ok(HyperlogExpr::one());
        }
        if !w.is_convergent() {
            return Err(HyperlogError::Divergent(w.to_string()));
        }
        if w.is_constant() {
            return constant_word_expr(w);
        }
        if w.is_canonical() {
            return Ok(HyperlogExpr::from_word(w.clone()));
        }
        if let Some(hit) = self.cache.get(w) {
            return Ok(hit.clone());
        }
        let j = w.max_var().expect("non-constant word has a variable");
        let mut result = boundary_value(w, j)?;
        let mut divergent = HyperlogExpr::zero();
        for (p, c, sub) in diff_word(w, j)? {
            let e = self.canonicalize_word(&sub)?;
            for (m, mc) in e.terms() {
                let (hit, rest) = m.split_upper(Upper::Var(j));
                let coeff = &c * mc;
                let word = match hit.as_slice() {
                    [] if p == Letter::Zero => {
                        divergent.add_term(rest, coeff);
                        continue;
                    }
                    [] => HyperlogWord::new(vec![p], Upper::Var(j)),
                    [one] => one.with_letter(p),
                    _ => return Err(HyperlogError::NotReady(j)),
                };
                result.add_term(rest.mul(&Monomial::new(ZetaMonomial::one(), vec![word])), coeff);
            }
        }
        if !divergent.is_zero() {
            return Err(HyperlogError::Divergent(format!("integrating d/dx{j} of {w} leaves {divergent} dx{j}/x{j}")));
        }
        self.cache.insert(w.clone(), result.clone());
        Ok(result)
    }
}

/// Value of `w` in the limit `x_j -> 0` with all other variables fixed.
fn boundary_value(w: &HyperlogWord, j: usize) -> Result<HyperlogExpr, HyperlogError> {
    match w.upper() {
        Upper::One => {
            if w.letters().contains(&Letter::Var(j)) {
                return Err(HyperlogError::NeedsManualBoundary(j, w.to_string()));
            }
            // some letter 1/x_j runs off to infinity
            Ok(HyperlogExpr::zero())
        }
        Upper::Var(k) if k == j => {
            // rescale by 1/x_j: 0 stays, x_j becomes 1, everything else runs off to infinity
            let mut letters = Vec::with_capacity(w.len());
            for l in w.letters() {
                match l {
                    Letter::Zero => letters.push(Letter::Zero),
                    Letter::Var(i) if *i == j => letters.push(Letter::One),
                    _ => return Ok(HyperlogExpr::zero()),
                }
            }
            constant_word_expr(&HyperlogWord::new(letters, Upper::One))
        }
        Upper::Var(_) => Err(HyperlogError::NeedsManualBoundary(j, w.to_string())),
    }
}

/// Removes `x_j` from a word whose innermost variable is `x_j`.
pub fn remove_variable(reducer: &mut Reducer, word: &HyperlogWord, j: usize) -> Result<HyperlogExpr, HyperlogError> {
    if word.upper() == Upper::Var(j) && word.letters().iter().all(|l| l.variable() != Some(j)) {
        return Err(HyperlogError::UnsupportedLetter(format!("x{j} is the upper limit of {word}")));
    }
    match word.max_var() {
        Some(m) if m == j => reducer.canonicalize_word(word),
        Some(m) => Err(HyperlogError::UnsupportedLetter(format!("{word}: remove x{m} before x{j}"))),
        None => Ok(HyperlogExpr::from_word(word.clone())),
    }
}

/// `int_0^{x_{j-1}} expr dx_j / (x_j - pole)` (upper limit 1 when `j = 1`).
///
/// Each term may depend on `x_j` only through one word with upper limit `x_j`;
/// the pole is appended to it and the limit moved outward.
pub fn integrate_innermost(expr: &HyperlogExpr, j: usize, pole: Letter) -> Result<HyperlogExpr, HyperlogError> {
    let outer = Upper::outer(j);
    let mut out = HyperlogExpr::zero();
    let mut divergent = HyperlogExpr::zero();
    for (m, c) in expr.terms() {
        let (hit, rest) = m.split_upper(Upper::Var(j));
        if rest.depends_on(j) || hit.len() > 1 || pole.variable().is_some_and(|i| i >= j) {
            return Err(HyperlogError::NotReady(j));
        }
        let mut letters = hit.first().map(|w| w.letters().to_vec()).unwrap_or_default();
        letters.push(pole);
        let word = HyperlogWord::new(letters, outer);
        let m = rest.mul(&Monomial::new(ZetaMonomial::one(), vec![word.clone()]));
        if word.is_convergent() {
            out.add_term(m, c.clone());
        } else {
            divergent.add_term(m, c.clone());
        }
    }
    if !divergent.is_zero() {
        return Err(HyperlogError::Divergent(format!("integral over x{j} against pole {pole}: {divergent}")));
    }
    Ok(out)
}
