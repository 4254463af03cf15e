//! Multivariate truncated power series over exact rationals.
//!
//! A [`TruncatedSeries`] in variables `t_1, ..., t_r` stores the coefficients
//! of the monomials `t_1^{m_1} ... t_r^{m_r}` with `m_j <= N_j`, where
//! `(N_1, ..., N_r)` is its [`TruncationProfile`]. Coefficients outside the
//! window are simply unknown; asking for one is an error.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

/// Exact rational number, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Exponent tuple `(m_1, ..., m_r)`.
pub type Exponent = Vec<u32>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("variable count mismatch: {0} vs {1}")]
    Dimension(usize, usize),
    #[error("series has zero constant term and is not invertible")]
    NonInvertible,
    #[error("exponent {exponent:?} lies outside the truncation window {profile:?}")]
    OutOfWindow { exponent: Exponent, profile: Vec<u32> },
    #[error("variable index {index} is out of range 1..={nvars}")]
    VariableIndex { index: usize, nvars: usize },
}

/// Per-variable truncation orders `(N_1, ..., N_r)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruncationProfile(Vec<u32>);

impl TruncationProfile {
    pub fn new(orders: Vec<u32>) -> Self {
        Self(orders)
    }

    pub fn uniform(nvars: usize, order: u32) -> Self {
        Self(vec![order; nvars])
    }

    pub fn orders(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    /// Sum of the orders; no monomial in the window has larger total degree.
    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn contains(&self, exponent: &[u32]) -> bool {
        exponent.len() == self.0.len() && exponent.iter().zip(&self.0).all(|(m, n)| m <= n)
    }

    /// Component-wise minimum of two profiles.
    pub fn meet(&self, other: &Self) -> Result<Self, SeriesError> {
        if self.nvars() != other.nvars() {
            return Err(SeriesError::Dimension(self.nvars(), other.nvars()));
        }
        Ok(Self(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect()))
    }

    /// Every exponent tuple inside the window, in lexicographic order.
    pub fn exponents(&self) -> impl Iterator<Item = Exponent> + '_ {
        let count: usize = self.0.iter().map(|n| *n as usize + 1).product();
        (0..count).map(move |mut idx| {
            let mut e = vec![0; self.0.len()];
            for (slot, n) in e.iter_mut().zip(&self.0).rev() {
                let base = *n as usize + 1;
                *slot = (idx % base) as u32;
                idx /= base;
            }
            e
        })
    }
}

/// Sparse multivariate power series with exact rational coefficients.
#[derive(Debug, Clone)]
pub struct TruncatedSeries {
    profile: TruncationProfile,
    coeffs: BTreeMap<Exponent, Rational>,
}

impl TruncatedSeries {
    pub fn zero(profile: TruncationProfile) -> Self {
        Self { profile, coeffs: BTreeMap::new() }
    }

    pub fn constant(profile: TruncationProfile, c: Rational) -> Self {
        let mut s = Self::zero(profile);
        let e = vec![0; s.nvars()];
        s.insert(e, c);
        s
    }

    pub fn one(profile: TruncationProfile) -> Self {
        Self::constant(profile, Rational::one())
    }

    /// `c * t^e`; the series is zero when `e` falls outside the window.
    pub fn monomial(profile: TruncationProfile, exponent: Exponent, c: Rational) -> Result<Self, SeriesError> {
        if exponent.len() != profile.nvars() {
            return Err(SeriesError::Dimension(exponent.len(), profile.nvars()));
        }
        let mut s = Self::zero(profile);
        if s.profile.contains(&exponent) {
            s.insert(exponent, c);
        }
        Ok(s)
    }

    /// The formal variable `t_j` (1-based).
    pub fn variable(profile: TruncationProfile, j: usize) -> Result<Self, SeriesError> {
        let r = profile.nvars();
        if j == 0 || j > r {
            return Err(SeriesError::VariableIndex { index: j, nvars: r });
        }
        let mut e = vec![0; r];
        e[j - 1] = 1;
        Self::monomial(profile, e, Rational::one())
    }

    /// Builds a series from `(exponent, coefficient)` pairs, dropping anything outside the window.
    pub fn from_terms<I>(profile: TruncationProfile, terms: I) -> Result<Self, SeriesError>
    where
        I: IntoIterator<Item = (Exponent, Rational)>,
    {
        let mut s = Self::zero(profile);
        for (e, c) in terms {
            if e.len() != s.nvars() {
                return Err(SeriesError::Dimension(e.len(), s.nvars()));
            }
            if s.profile.contains(&e) {
                s.accumulate(e, c);
            }
        }
        Ok(s)
    }

    pub fn profile(&self) -> &TruncationProfile {
        &self.profile
    }

    pub fn nvars(&self) -> usize {
        self.profile.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.coeffs.iter()
    }

    pub fn constant_term(&self) -> Rational {
        self.coeffs.get(&vec![0; self.nvars()]).cloned().unwrap_or_else(Rational::zero)
    }

    /// Raw Taylor coefficient of `t^m`. Asking outside the window is an error.
    pub fn coeff(&self, m: &[u32]) -> Result<Rational, SeriesError> {
        if !self.profile.contains(m) {
            return Err(SeriesError::OutOfWindow { exponent: m.to_vec(), profile: self.profile.0.clone() });
        }
        Ok(self.coeffs.get(m).cloned().unwrap_or_else(Rational::zero))
    }

    /// Smallest total degree of a nonzero term, `None` for the zero series.
    pub fn valuation(&self) -> Option<u32> {
        self.coeffs.keys().map(|e| e.iter().sum()).min()
    }

    fn insert(&mut self, e: Exponent, c: Rational) {
        if c.is_zero() {
            self.coeffs.remove(&e);
        } else {
            self.coeffs.insert(e, c);
        }
    }

    fn accumulate(&mut self, e: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Drops every term outside `profile`, which must not exceed the current one.
    pub fn restrict(&self, profile: &TruncationProfile) -> Result<Self, SeriesError> {
        let target = self.profile.meet(profile)?;
        let coeffs = self.coeffs.iter().filter(|(e, _)| target.contains(e)).map(|(e, c)| (e.clone(), c.clone())).collect();
        Ok(Self { profile: target, coeffs })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, SeriesError> {
        let mut out = self.restrict(&other.profile)?;
        for (e, c) in &other.coeffs {
            if out.profile.contains(e) {
                out.accumulate(e.clone(), c.clone());
            }
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.profile.clone());
        }
        let coeffs = self.coeffs.iter().map(|(e, v)| (e.clone(), v * c)).collect();
        Self { profile: self.profile.clone(), coeffs }
    }

    /// Cauchy product, truncated to the meet of both profiles.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        let profile = self.profile.meet(&other.profile)?;
        let mut out = Self::zero(profile);
        let orders = out.profile.0.clone();
        for (ea, ca) in &self.coeffs {
            if ea.iter().zip(&orders).any(|(m, n)| m > n) {
                continue;
            }
            for (eb, cb) in &other.coeffs {
                let mut e = Vec::with_capacity(orders.len());
                let mut inside = true;
                for ((x, y), n) in ea.iter().zip(eb).zip(&orders) {
                    let s = x + y;
                    if s > *n {
                        inside = false;
                        break;
                    }
                    e.push(s);
                }
                if inside {
                    out.accumulate(e, ca * cb);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.profile.clone());
        for _ in 0..n {
            acc = acc.checked_mul(self).expect("same profile");
        }
        acc
    }

    /// Multiplicative inverse inside the window.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(SeriesError::NonInvertible);
        }
        let inv0 = c0.recip();
        // a = c0 (1 + h) with h of positive valuation, so 1/a = c0^{-1} sum (-h)^k.
        let h = self.scale(&inv0).checked_sub(&Self::one(self.profile.clone()))?;
        let minus_h = h.neg();
        let mut acc = Self::one(self.profile.clone());
        let mut power = Self::one(self.profile.clone());
        for _ in 0..self.profile.total_degree() {
            power = power.checked_mul(&minus_h)?;
            if power.is_zero() {
                break;
            }
            acc = acc.checked_add(&power)?;
        }
        Ok(acc.scale(&inv0))
    }

    /// Truncated `exp(c (t_j + t_{j+1} + ... + t_r))`.
    pub fn exp_linear(c: i64, j: usize, profile: TruncationProfile) -> Result<Self, SeriesError> {
        let r = profile.nvars();
        if j == 0 || j > r {
            return Err(SeriesError::VariableIndex { index: j, nvars: r });
        }
        let mut window = profile.0.clone();
        for slot in window.iter_mut().take(j - 1) {
            *slot = 0;
        }
        let sub = TruncationProfile(window);
        let c = BigInt::from(c);
        let terms = sub.exponents().map(|e| {
            let value = e.iter().fold(Rational::one(), |acc, m| {
                acc * Rational::new(num::pow(c.clone(), *m as usize), factorial(*m))
            });
            (e, value)
        });
        Self::from_terms(profile, terms)
    }
}

impl PartialEq for TruncatedSeries {
    /// Coefficient-wise equality on the common window.
    fn eq(&self, other: &Self) -> bool {
        match (self.restrict(&other.profile), other.restrict(&self.profile)) {
            (Ok(a), Ok(b)) => a.coeffs == b.coeffs,
            _ => false,
        }
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            write!(f, "{}", c.abs())?;
            for (k, m) in e.iter().enumerate().filter(|(_, m)| **m > 0) {
                write!(f, "*t{}", k + 1)?;
                if *m > 1 {
                    write!(f, "^{m}")?;
                }
            }
        }
        Ok(())
    }
}

pub fn series_add(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
    a.checked_add(b)
}

pub fn series_mul(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
    a.checked_mul(b)
}

pub fn series_inverse(a: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
    a.inverse()
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Binomial coefficient by Pascal's rule, exact.
pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut row = vec![BigInt::one()];
    for _ in 0..n {
        let mut next = vec![BigInt::one(); row.len() + 1];
        for i in 1..row.len() {
            next[i] = &row[i - 1] + &row[i];
        }
        row = next;
    }
    row.swap_remove(k as usize)
}

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}
