//! Multiple zeta symbols `zeta(k_1, ..., k_p) = sum_{0 < m_1 < ... < m_p} prod m_i^{-k_i}`
//! and their formal rational combinations.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::Rational;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MzvError {
    #[error("index {0:?} is not admissible (entries must be positive and the last at least 2)")]
    NotAdmissible(Vec<u32>),
    #[error("malformed MZV expression: {0}")]
    Malformed(String),
}

/// A composition in the increasing-summation convention.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MzvIndex(Vec<u32>);

impl MzvIndex {
    /// Any composition of positive integers; admissibility is checked separately.
    pub fn new(entries: Vec<u32>) -> Result<Self, MzvError> {
        if entries.is_empty() || entries.contains(&0) {
            return Err(MzvError::NotAdmissible(entries));
        }
        Ok(Self(entries))
    }

    pub fn admissible(entries: Vec<u32>) -> Result<Self, MzvError> {
        let idx = Self::new(entries)?;
        if !idx.is_admissible() {
            return Err(MzvError::NotAdmissible(idx.0));
        }
        Ok(idx)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_admissible(&self) -> bool {
        self.0.last().is_some_and(|&k| k >= 2)
    }

    /// All admissible indices of `weight`, by depth then lexicographically.
    pub fn basis(weight: u32) -> Vec<Self> {
        fn compositions(n: u32) -> Vec<Vec<u32>> {
            if n == 0 {
                return vec![vec![]];
            }
            (1..=n)
                .flat_map(|first| {
                    compositions(n - first).into_iter().map(move |mut rest| {
                        rest.insert(0, first);
                        rest
                    })
                })
                .collect()
        }
        let mut out: Vec<Self> = compositions(weight).into_iter().map(Self).filter(Self::is_admissible).collect();
        out.sort();
        out
    }
}

impl Ord for MzvIndex {
    /// Depth first, then lexicographic.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MzvIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MzvIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "ζ({})", parts.join(","))
    }
}

/// Formal rational combination of MZV symbols.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct MzvExpr {
    terms: BTreeMap<MzvIndex, Rational>,
}

impl MzvExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(index: MzvIndex, coeff: Rational) -> Self {
        let mut e = Self::zero();
        e.add_term(index, coeff);
        e
    }

    /// Builds from `(entries, coefficient)` pairs; every index must be admissible.
    pub fn from_pairs<I>(pairs: I) -> Result<Self, MzvError>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut e = Self::zero();
        for (k, c) in pairs {
            e.add_term(MzvIndex::admissible(k)?, c);
        }
        Ok(e)
    }

    pub fn add_term(&mut self, index: MzvIndex, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(index.clone()).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&index);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MzvIndex, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, index: &MzvIndex) -> Rational {
        self.terms.get(index).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common weight of all terms; `None` when empty or mixed.
    pub fn weight(&self) -> Option<u32> {
        let mut weights = self.terms.keys().map(MzvIndex::weight);
        let first = weights.next()?;
        weights.all(|w| w == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_empty() || self.weight().is_some()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    /// Coefficients against an ordered basis; `None` if a term falls outside it.
    pub fn to_row(&self, basis: &[MzvIndex]) -> Option<Vec<Rational>> {
        if self.terms.keys().any(|k| !basis.contains(k)) {
            return None;
        }
        Some(basis.iter().map(|k| self.coeff(k)).collect())
    }

    pub fn from_row(basis: &[MzvIndex], row: &[Rational]) -> Self {
        let mut e = Self::zero();
        for (k, c) in basis.iter().zip(row) {
            e.add_term(k.clone(), c.clone());
        }
        e
    }

    /// `true` when `self == c * other` for some nonzero rational `c`.
    pub fn proportional_to(&self, other: &Self) -> bool {
        match self.terms.iter().next() {
            None => other.is_zero(),
            Some((k, a)) => other.terms.get(k).is_some_and(|b| &other.scale(&(a / b)) == self),
        }
    }
}

impl Add for &MzvExpr {
    type Output = MzvExpr;
    fn add(self, rhs: &MzvExpr) -> MzvExpr {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }
}

impl Sub for &MzvExpr {
    type Output = MzvExpr;
    fn sub(self, rhs: &MzvExpr) -> MzvExpr {
        self + &(-rhs)
    }
}

impl Neg for &MzvExpr {
    type Output = MzvExpr;
    fn neg(self) -> MzvExpr {
        self.scale(&-Rational::one())
    }
}

impl Mul<&Rational> for &MzvExpr {
    type Output = MzvExpr;
    fn mul(self, rhs: &Rational) -> MzvExpr {
        self.scale(rhs)
    }
}

impl fmt::Display for MzvExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i > 0 {
                write!(f, " {sign} ")?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            if !a.is_one() {
                write!(f, "{a}")?;
            }
            write!(f, "{k}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    index: Vec<u32>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct ExprJson {
    weight: Option<u32>,
    terms: Vec<TermJson>,
}

impl Serialize for MzvExpr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ExprJson {
            weight: self.weight(),
            terms: self.terms.iter().map(|(k, c)| TermJson { index: k.0.clone(), coeff: c.to_string() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MzvExpr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = ExprJson::deserialize(d)?;
        let mut e = MzvExpr::zero();
        for t in raw.terms {
            let c: Rational = parse_rational(&t.coeff).map_err(serde::de::Error::custom)?;
            e.add_term(MzvIndex::admissible(t.index).map_err(serde::de::Error::custom)?, c);
        }
        Ok(e)
    }
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(text: &str) -> Result<Rational, MzvError> {
    text.trim().parse::<Rational>().map_err(|_| MzvError::Malformed(format!("bad rational {text:?}")))
}
