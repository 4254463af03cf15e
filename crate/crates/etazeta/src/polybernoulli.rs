//! Multi-indexed poly-Bernoulli numbers from their generating functions.
//!
//! With `T_i = t_i + ... + t_r` and `z_i = 1 - e^{-T_i}`, the number
//! `B_m^{(k)}(sigma; a; b)` is `m_1! ... m_r!` times the coefficient of `t^m` in
//!
//! ```text
//! prod_j e^{(a_j - 1) T_j} * Li^sh_k(z_{sigma(1)}, ..., z_{sigma(r)}; b) / prod_j z_{sigma(j)}^{b_j}
//! ```
//!
//! where `Li^sh_k(w; b) = sum_{l_j >= b_j} w^l / (l_1^{k_1} (l_1 + l_2)^{k_2} ...)`.
//! Every expansion is exact; positive `k` is handled as a formal sum.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num::{BigInt, One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::{binomial, factorial, Rational, SeriesError, TruncatedSeries, TruncationProfile};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum BernoulliError {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("argument {0} has a nonzero constant term; substitution would diverge")]
    DivergentSubstitution(usize),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Permutation of `{1, ..., r}` stored by its one-line images.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(r: usize) -> Self {
        Self((1..=r).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, BernoulliError> {
        let r = images.len();
        let mut seen = vec![false; r];
        for &i in &images {
            if i == 0 || i > r || std::mem::replace(&mut seen[i - 1], true) {
                return Err(BernoulliError::InvalidSpec(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Self(images))
    }

    /// Parses one-line images (`2,1`) or the alias `id`, which needs the degree.
    pub fn parse(text: &str, degree: usize) -> Result<Self, BernoulliError> {
        if text.trim() == "id" {
            return Ok(Self::identity(degree));
        }
        let p: Self = text.parse()?;
        if p.degree() != degree {
            return Err(BernoulliError::InvalidSpec(format!("permutation {text} has degree {}, expected {degree}", p.degree())));
        }
        Ok(p)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `sigma(i)`, 1-based.
    pub fn apply(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &s) in self.0.iter().enumerate() {
            inv[s - 1] = i + 1;
        }
        Self(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &s)| s == i + 1)
    }

    /// All of `S_r` in lexicographic order of images.
    pub fn all(r: usize) -> Vec<Self> {
        fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if prefix.len() == used.len() {
                out.push(Permutation(prefix.clone()));
                return;
            }
            for i in 0..used.len() {
                if !used[i] {
                    used[i] = true;
                    prefix.push(i + 1);
                    rec(prefix, used, out);
                    prefix.pop();
                    used[i] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), &mut vec![false; r], &mut out);
        out
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = BernoulliError;
    fn try_from(v: Vec<usize>) -> Result<Self, Self::Error> {
        Self::from_images(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

impl FromStr for Permutation {
    type Err = BernoulliError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let images = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| BernoulliError::InvalidSpec(format!("bad permutation entry {t:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_images(images)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Weights and lower summation bounds of `Li^sh_u(z; offsets)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolylogSpec {
    pub u: Vec<i64>,
    pub offsets: Vec<u32>,
}

impl PolylogSpec {
    pub fn new(u: Vec<i64>, offsets: Vec<u32>) -> Result<Self, BernoulliError> {
        if u.is_empty() || u.len() != offsets.len() {
            return Err(BernoulliError::InvalidSpec(format!("weights {u:?} and offsets {offsets:?} must have the same positive length")));
        }
        if offsets[0] < 1 {
            return Err(BernoulliError::InvalidSpec("the first offset must be at least 1".into()));
        }
        Ok(Self { u, offsets })
    }

    pub fn depth(&self) -> usize {
        self.u.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BernoulliSpec {
    pub k: Vec<i64>,
    pub sigma: Permutation,
    pub a: Vec<u32>,
    pub b: Vec<u32>,
}

impl BernoulliSpec {
    pub fn new(k: Vec<i64>, sigma: Permutation, a: Vec<u32>, b: Vec<u32>) -> Result<Self, BernoulliError> {
        let spec = Self { k, sigma, a, b };
        spec.validate()?;
        Ok(spec)
    }

    /// `sigma = id`, `a = b = (1, ..., 1)`.
    pub fn plain(k: Vec<i64>) -> Self {
        let r = k.len();
        Self { k, sigma: Permutation::identity(r), a: vec![1; r], b: vec![1; r] }
    }

    pub fn depth(&self) -> usize {
        self.k.len()
    }

    pub fn validate(&self) -> Result<(), BernoulliError> {
        check_offsets(self.k.len(), &self.sigma, &self.a, &self.b)
    }

    /// The spec on the other side of the duality: `(sigma^{-1}, b, a)` with index `k`.
    pub fn dual(&self, k: Vec<i64>) -> Self {
        Self { k, sigma: self.sigma.inverse(), a: self.b.clone(), b: self.a.clone() }
    }
}

/// Offset admissibility shared by the Bernoulli and eta specs.
pub(crate) fn check_offsets(r: usize, sigma: &Permutation, a: &[u32], b: &[u32]) -> Result<(), BernoulliError> {
    if r == 0 {
        return Err(BernoulliError::InvalidSpec("depth must be at least 1".into()));
    }
    if sigma.degree() != r || a.len() != r || b.len() != r {
        return Err(BernoulliError::InvalidSpec(format!(
            "length mismatch: depth {r}, sigma degree {}, a has {}, b has {}",
            sigma.degree(),
            a.len(),
            b.len()
        )));
    }
    let s1 = sigma.inverse().apply(1);
    if a[0] < 1 || a[s1 - 1] < 1 {
        return Err(BernoulliError::InvalidSpec(format!("need a_1 >= 1 and a_{s1} >= 1, got a = {a:?}")));
    }
    if b[0] < 1 || b[s1 - 1] < 1 {
        return Err(BernoulliError::InvalidSpec(format!("need b_1 >= 1 and b_{s1} >= 1, got b = {b:?}")));
    }
    for j in 1..=r {
        if a[sigma.apply(j) - 1] + b[j - 1] < 1 {
            return Err(BernoulliError::InvalidSpec(format!("need a_sigma({j}) + b_{j} >= 1")));
        }
    }
    Ok(())
}

/// One computed value together with its exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BernoulliValue {
    pub m: Vec<u32>,
    pub value: Rational,
}

/// `z_i = 1 - e^{-T_i}` for `i = 1..=r`.
pub fn z_args(profile: &TruncationProfile) -> Result<Vec<TruncatedSeries>, BernoulliError> {
    let one = TruncatedSeries::one(profile.clone());
    (1..=profile.nvars())
        .map(|i| Ok(one.checked_sub(&TruncatedSeries::exp_linear(-1, i, profile.clone())?)?))
        .collect()
}

/// `sum_{l_j >= offsets_j, sum l <= deg} prod_j args_j^{l_j - divide_j} / prod_j P_j^{u_j}`.
///
/// Dividing the monomials before summing keeps every intermediate a power series.
fn li_quotient(u: &[i64], offsets: &[u32], divide: &[u32], args: &[TruncatedSeries], profile: &TruncationProfile) -> Result<TruncatedSeries, BernoulliError> {
    let r = u.len();
    for (i, a) in args.iter().enumerate() {
        if !a.constant_term().is_zero() {
            return Err(BernoulliError::DivergentSubstitution(i + 1));
        }
    }
    let deg = profile.total_degree();
    let powers: Vec<Vec<TruncatedSeries>> = args
        .iter()
        .map(|a| {
            let a = a.restrict(profile)?;
            let mut out = vec![TruncatedSeries::one(profile.clone())];
            for e in 1..=deg as usize {
                let next = out[e - 1].checked_mul(&a)?;
                out.push(next);
            }
            Ok(out)
        })
        .collect::<Result<_, SeriesError>>()?;

    struct Walk<'a> {
        u: &'a [i64],
        offsets: &'a [u32],
        divide: &'a [u32],
        powers: &'a [Vec<TruncatedSeries>],
        deg: u32,
        out: TruncatedSeries,
    }

    impl Walk<'_> {
        fn go(&mut self, j: usize, partial: i64, used: u32, acc: &TruncatedSeries, coeff: &Rational) -> Result<(), BernoulliError> {
            if j == self.u.len() {
                let term = acc.scale(coeff);
                self.out = self.out.checked_add(&term)?;
                return Ok(());
            }
            let lo = self.offsets[j] - self.divide[j];
            for e in lo..=self.deg.saturating_sub(used) {
                let series = acc.checked_mul(&self.powers[j][e as usize])?;
                if series.is_zero() {
                    break;
                }
                let p = partial + (e + self.divide[j]) as i64;
                let w = self.u[j];
                let factor = if w == 0 {
                    Rational::one()
                } else if p == 0 {
                    return Err(BernoulliError::InvalidSpec("vanishing partial sum in the polylogarithm".into()));
                } else if w > 0 {
                    Rational::new(BigInt::one(), num::pow(BigInt::from(p), w as usize))
                } else {
                    Rational::from_integer(num::pow(BigInt::from(p), (-w) as usize))
                };
                self.go(j + 1, p, used + e, &series, &(coeff * factor))?;
            }
            Ok(())
        }
    }

    let mut walk = Walk { u, offsets, divide, powers: &powers, deg, out: TruncatedSeries::zero(profile.clone()) };
    debug_assert_eq!(r, offsets.len());
    walk.go(0, 0, 0, &TruncatedSeries::one(profile.clone()), &Rational::one())?;
    Ok(walk.out)
}

/// Formal substitution of `args` into `Li^sh_u(.; offsets)`.
pub fn li_sha_series(spec: &PolylogSpec, args: &[TruncatedSeries], profile: &TruncationProfile) -> Result<TruncatedSeries, BernoulliError> {
    if args.len() != spec.depth() {
        return Err(BernoulliError::InvalidSpec(format!("{} arguments for depth {}", args.len(), spec.depth())));
    }
    li_quotient(&spec.u, &spec.offsets, &vec![0; spec.depth()], args, profile)
}

/// The generating function of `B^{(k)}(sigma; a; b)` inside `profile`.
pub fn bnum_series(spec: &BernoulliSpec, profile: &TruncationProfile) -> Result<TruncatedSeries, BernoulliError> {
    spec.validate()?;
    let r = spec.depth();
    if profile.nvars() != r {
        return Err(BernoulliError::InvalidSpec(format!("profile has {} variables, spec depth {r}", profile.nvars())));
    }
    let z = z_args(profile)?;
    let args: Vec<_> = (1..=r).map(|j| z[spec.sigma.apply(j) - 1].clone()).collect();
    let quotient = li_quotient(&spec.k, &spec.b, &spec.b, &args, profile)?;
    let mut gf = quotient;
    for (j, &aj) in spec.a.iter().enumerate() {
        if aj != 1 {
            gf = gf.checked_mul(&TruncatedSeries::exp_linear(aj as i64 - 1, j + 1, profile.clone())?)?;
        }
    }
    Ok(gf)
}

fn factorial_weight(m: &[u32]) -> Rational {
    Rational::from_integer(m.iter().map(|&x| factorial(x)).product())
}

/// Reads `m! * [t^m]` off a generating function.
pub fn extract(gf: &TruncatedSeries, m: &[u32]) -> Result<Rational, BernoulliError> {
    Ok(gf.coeff(m)? * factorial_weight(m))
}

pub fn bnum(spec: &BernoulliSpec, m: &[u32]) -> Result<Rational, BernoulliError> {
    if m.len() != spec.depth() {
        return Err(BernoulliError::InvalidSpec(format!("exponent {m:?} does not match depth {}", spec.depth())));
    }
    let profile = TruncationProfile::new(m.to_vec());
    extract(&bnum_series(spec, &profile)?, m)
}

/// Generating function of the C-type numbers `C^{(k),(d)}`.
pub fn cnum_series(k: &[i64], d: usize, profile: &TruncationProfile) -> Result<TruncatedSeries, BernoulliError> {
    let r = k.len();
    if r == 0 || d == 0 || d > r {
        return Err(BernoulliError::InvalidSpec(format!("d = {d} must lie in 1..={r}")));
    }
    if profile.nvars() != r {
        return Err(BernoulliError::InvalidSpec(format!("profile has {} variables, depth {r}", profile.nvars())));
    }
    // 1 / (e^{T_j} - 1) = e^{-T_j} / z_j
    let z = z_args(profile)?;
    let divide: Vec<u32> = (1..=r).map(|j| u32::from(j <= d)).collect();
    let mut gf = li_quotient(k, &vec![1; r], &divide, &z, profile)?;
    for j in 1..=d {
        gf = gf.checked_mul(&TruncatedSeries::exp_linear(-1, j, profile.clone())?)?;
    }
    Ok(gf)
}

pub fn cnum(k: &[i64], d: usize, m: &[u32]) -> Result<Rational, BernoulliError> {
    if m.len() != k.len() {
        return Err(BernoulliError::InvalidSpec(format!("exponent {m:?} does not match depth {}", k.len())));
    }
    let profile = TruncationProfile::new(m.to_vec());
    extract(&cnum_series(k, d, &profile)?, m)
}

/// The star spec: `Li^{sh,star}_u / (1 - e^{-T_1})`, i.e. Li offsets `(1, 0, ..., 0)`.
pub fn star_spec(u: Vec<i64>) -> BernoulliSpec {
    let r = u.len();
    let mut b = vec![0; r];
    b[0] = 1;
    BernoulliSpec { k: u, sigma: Permutation::identity(r), a: vec![1; r], b }
}

pub fn star_num(u: &[i64], m: &[u32]) -> Result<Rational, BernoulliError> {
    bnum(&star_spec(u.to_vec()), m)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub holds: bool,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl IdentityCheck {
    fn new(lhs: Rational, rhs: Rational) -> Self {
        Self { holds: lhs == rhs, lhs, rhs }
    }
}

fn negated(v: &[u32]) -> Vec<i64> {
    v.iter().map(|&x| -(x as i64)).collect()
}

/// `B_n^{(-k)}(sigma; a; b)` against `B_k^{(-n)}(sigma^{-1}; b; a)`.
pub fn duality_check(k: &[u32], n: &[u32], sigma: &Permutation, a: &[u32], b: &[u32]) -> Result<IdentityCheck, BernoulliError> {
    let left = BernoulliSpec::new(negated(k), sigma.clone(), a.to_vec(), b.to_vec())?;
    let right = left.dual(negated(n));
    right.validate()?;
    Ok(IdentityCheck::new(bnum(&left, n)?, bnum(&right, k)?))
}

/// Star numbers against binomial sums of C-type numbers:
/// `star(-k)_n = sum_{m <= k} binom(k, m) C_{k-m}^{(-n),(r)}`.
pub fn star_identity_check(k: &[u32], n: &[u32]) -> Result<IdentityCheck, BernoulliError> {
    if k.len() != n.len() || k.is_empty() {
        return Err(BernoulliError::InvalidSpec("k and n must have the same positive length".into()));
    }
    let r = k.len();
    let lhs = star_num(&negated(k), n)?;
    let profile = TruncationProfile::new(k.to_vec());
    let c = cnum_series(&negated(n), r, &profile)?;
    let mut rhs = Rational::zero();
    for m in profile.exponents() {
        let weight: BigInt = k.iter().zip(&m).map(|(&kj, &mj)| binomial(kj, mj)).product();
        let rest: Vec<u32> = k.iter().zip(&m).map(|(kj, mj)| kj - mj).collect();
        rhs += extract(&c, &rest)? * Rational::from_integer(weight);
    }
    Ok(IdentityCheck::new(lhs, rhs))
}

/// Block sums of `v` cut at the (1-based, increasing, starting at 1) positions `starts`.
fn block_sums(v: &[i64], starts: &[usize]) -> Vec<i64> {
    starts
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let end = starts.get(i + 1).map_or(v.len(), |&e| e - 1);
            v[s - 1..end].iter().sum()
        })
        .collect()
}

/// All `1 = b_1 < ... < b_a <= r`.
fn block_starts(r: usize) -> Vec<Vec<usize>> {
    (0..1usize << (r - 1))
        .map(|mask| std::iter::once(1).chain((2..=r).filter(|j| mask >> (j - 2) & 1 == 1)).collect())
        .collect()
}

/// The C-type duality
/// `C_n^{(-k_1-1, -k_2, ..., -k_r),(r)} = sum_b C_{b(k)}^{b(-n_1-1, -n_2, ..., -n_r),(1)}`.
pub fn cnum_duality_check(k: &[u32], n: &[u32]) -> Result<IdentityCheck, BernoulliError> {
    if k.len() != n.len() || k.is_empty() {
        return Err(BernoulliError::InvalidSpec("k and n must have the same positive length".into()));
    }
    let r = k.len();
    let mut upper = negated(k);
    upper[0] -= 1;
    let lhs = cnum(&upper, r, n)?;
    let mut lower = negated(n);
    lower[0] -= 1;
    let kk: Vec<i64> = k.iter().map(|&x| x as i64).collect();
    let mut rhs = Rational::zero();
    for starts in block_starts(r) {
        let idx = block_sums(&lower, &starts);
        let m: Vec<u32> = block_sums(&kk, &starts).into_iter().map(|x| x as u32).collect();
        rhs += cnum(&idx, 1, &m)?;
    }
    Ok(IdentityCheck::new(lhs, rhs))
}

/// `eta(u; -n; sigma; a; b) = B_n^{(u)}(sigma; a; b)` for non-positive `s`.
pub fn eta_nonpositive(spec: &crate::etareduce::EtaSpec) -> Result<Rational, BernoulliError> {
    if let Some(s) = spec.s.iter().find(|&&s| s > 0) {
        return Err(BernoulliError::Domain(format!("s component {s} is positive; use the symbolic reduction")));
    }
    let b = BernoulliSpec::new(spec.u.clone(), spec.sigma.clone(), spec.a.clone(), spec.b.clone())?;
    let m: Vec<u32> = spec.s.iter().map(|&s| (-s) as u32).collect();
    bnum(&b, &m)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualityFailure {
    pub k: Vec<u32>,
    pub n: Vec<u32>,
    pub sigma: Permutation,
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub r: usize,
    pub max: u32,
    pub checked: usize,
    pub failures: Vec<DualityFailure>,
}

fn offset_vectors(r: usize) -> Vec<Vec<u32>> {
    (0..1u32 << r).map(|mask| (0..r).map(|i| mask >> i & 1).collect()).collect()
}

/// Exhaustive exact duality check over `k, n in {0..max}^r`, all `sigma`, all valid `a, b in {0,1}^r`.
///
/// One generating function per `(k, sigma, a, b)` serves every `n`.
pub fn duality_scan(r: usize, max: u32) -> Result<ScanReport, BernoulliError> {
    if r == 0 {
        return Err(BernoulliError::InvalidSpec("r must be positive".into()));
    }
    let profile = TruncationProfile::uniform(r, max);
    let vectors: Vec<Vec<u32>> = profile.exponents().collect();
    let mut cases = Vec::new();
    for sigma in Permutation::all(r) {
        for a in offset_vectors(r) {
            for b in offset_vectors(r) {
                let left_ok = check_offsets(r, &sigma, &a, &b).is_ok();
                let right_ok = check_offsets(r, &sigma.inverse(), &b, &a).is_ok();
                if left_ok && right_ok {
                    cases.push((sigma.clone(), a.clone(), b));
                }
            }
        }
    }
    let mut jobs = Vec::new();
    for (sigma, a, b) in &cases {
        for k in &vectors {
            jobs.push(BernoulliSpec { k: negated(k), sigma: sigma.clone(), a: a.clone(), b: b.clone() });
            jobs.push(BernoulliSpec { k: negated(k), sigma: sigma.inverse(), a: b.clone(), b: a.clone() });
        }
    }
    jobs.sort_by(|x, y| (&x.sigma, &x.a, &x.b, &x.k).cmp(&(&y.sigma, &y.a, &y.b, &y.k)));
    jobs.dedup();
    let table: HashMap<BernoulliSpec, TruncatedSeries> = jobs
        .into_par_iter()
        .map(|spec| bnum_series(&spec, &profile).map(|gf| (spec, gf)))
        .collect::<Result<_, _>>()?;

    let mut checked = 0;
    let mut failures = Vec::new();
    for (sigma, a, b) in &cases {
        for k in &vectors {
            let left = &table[&BernoulliSpec { k: negated(k), sigma: sigma.clone(), a: a.clone(), b: b.clone() }];
            for n in &vectors {
                let right = &table[&BernoulliSpec { k: negated(n), sigma: sigma.inverse(), a: b.clone(), b: a.clone() }];
                let lhs = extract(left, n)?;
                let rhs = extract(right, k)?;
                checked += 1;
                if lhs != rhs {
                    failures.push(DualityFailure {
                        k: k.clone(),
                        n: n.clone(),
                        sigma: sigma.clone(),
                        a: a.clone(),
                        b: b.clone(),
                        lhs: lhs.to_string(),
                        rhs: rhs.to_string(),
                    });
                }
            }
        }
    }
    Ok(ScanReport { r, max, checked, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{int, rat};
    use proptest::prelude::*;

    fn p(v: &[u32]) -> TruncationProfile {
        TruncationProfile::new(v.to_vec())
    }

    /// Bernoulli numbers with B_1 = -1/2 from sum_{j<=n} binom(n+1, j) B_j = 0.
    fn bernoulli_minus(n: usize) -> Vec<Rational> {
        let mut b = vec![int(1)];
        for m in 1..=n {
            let s: Rational = (0..m).map(|j| Rational::from_integer(binomial(m as u32 + 1, j as u32)) * &b[j]).sum();
            b.push(-s / Rational::from_integer(BigInt::from(m + 1)));
        }
        b
    }

    #[test]
    fn permutations() {
        let s = Permutation::parse("2,3,1", 3).unwrap();
        assert_eq!(s.apply(1), 2);
        assert_eq!(s.inverse().images(), &[3, 1, 2]);
        assert_eq!(Permutation::parse("id", 2).unwrap(), Permutation::identity(2));
        assert!(Permutation::parse("1,1", 2).is_err());
        assert!(Permutation::parse("1,2", 3).is_err());
        assert_eq!(Permutation::all(3).len(), 6);
        assert_eq!(s.to_string(), "2,3,1");
    }

    #[test]
    fn li_minus_one_is_exp_2t() {
        // Li_{-1}(z) / z = 1 / (1 - z)^2 and 1 - z = e^{-t}.
        let prof = p(&[6]);
        let spec = BernoulliSpec::plain(vec![-1]);
        assert_eq!(bnum_series(&spec, &prof).unwrap(), TruncatedSeries::exp_linear(2, 1, prof.clone()).unwrap());
        // Raw substitution: Li_{-1}(z) = z / (1 - z)^2 composed with z = 1 - e^{-t}.
        let z = &z_args(&prof).unwrap()[0];
        let one = TruncatedSeries::one(prof.clone());
        let oracle = z.checked_mul(&one.checked_sub(z).unwrap().pow(2).inverse().unwrap()).unwrap();
        let li = li_sha_series(&PolylogSpec::new(vec![-1], vec![1]).unwrap(), std::slice::from_ref(z), &prof).unwrap();
        assert_eq!(li, oracle);
    }

    #[test]
    fn li_leading_term() {
        let prof = p(&[1]);
        let t = TruncatedSeries::variable(prof.clone(), 1).unwrap();
        for k in [-2, 0, 1, 3] {
            let li = li_sha_series(&PolylogSpec::new(vec![k], vec![1]).unwrap(), std::slice::from_ref(&t), &prof).unwrap();
            assert_eq!(li, t);
        }
    }

    #[test]
    fn nonzero_constant_argument_rejected() {
        let prof = p(&[2]);
        let one = TruncatedSeries::one(prof.clone());
        let err = li_sha_series(&PolylogSpec::new(vec![1], vec![1]).unwrap(), &[one], &prof).unwrap_err();
        assert_eq!(err, BernoulliError::DivergentSubstitution(1));
    }

    #[test]
    fn depth_one_values() {
        let spec = BernoulliSpec::plain(vec![-1]);
        assert_eq!(bnum(&spec, &[2]).unwrap(), int(4));
        for k in [-3, 0, 2, 5] {
            assert_eq!(bnum(&BernoulliSpec::plain(vec![k]), &[0]).unwrap(), int(1));
        }
        assert_eq!(cnum(&[1], 1, &[1]).unwrap(), rat(-1, 2));
        assert_eq!(cnum(&[1], 1, &[0]).unwrap(), int(1));
    }

    #[test]
    fn depth_one_matches_bernoulli_recurrence() {
        let bm = bernoulli_minus(10);
        for n in 0..=10u32 {
            let c = cnum(&[1], 1, &[n]).unwrap();
            assert_eq!(c, bm[n as usize], "C_{n}");
            let plus = if n == 1 { -bm[1].clone() } else { bm[n as usize].clone() };
            assert_eq!(bnum(&BernoulliSpec::plain(vec![1]), &[n]).unwrap(), plus, "B_{n}");
        }
    }

    #[test]
    fn classical_duality_instances() {
        let id = Permutation::identity(1);
        assert!(duality_check(&[1], &[1], &id, &[1], &[1]).unwrap().holds);
        let c = duality_check(&[2], &[1], &id, &[1], &[1]).unwrap();
        assert!(c.holds);
        assert_eq!(c.rhs, int(4));
        let s = Permutation::parse("2,1", 2).unwrap();
        assert!(duality_check(&[1, 2], &[2, 1], &s, &[1, 1], &[1, 1]).unwrap().holds);
    }

    #[test]
    fn depth_two_swap_pair() {
        let spec = BernoulliSpec::plain(vec![-1, -1]);
        let x = bnum(&spec, &[1, 1]).unwrap();
        let c = duality_check(&[1, 1], &[1, 1], &Permutation::identity(2), &[1, 1], &[1, 1]).unwrap();
        assert_eq!(c.lhs, x);
        assert!(c.holds);
    }

    #[test]
    fn invalid_specs_rejected() {
        let id = Permutation::identity(2);
        assert!(BernoulliSpec::new(vec![1, 1], id.clone(), vec![0, 1], vec![1, 1]).is_err());
        assert!(BernoulliSpec::new(vec![1, 1], id.clone(), vec![1, 0], vec![1, 0]).is_err());
        assert!(BernoulliSpec::new(vec![1, 1], id, vec![1, 0], vec![1, 1]).is_ok());
        assert!(cnum(&[1, 1], 3, &[0, 0]).is_err());
    }

    #[test]
    fn star_number_paths_agree() {
        assert_eq!(star_num(&[-2], &[3]).unwrap(), bnum(&BernoulliSpec::plain(vec![-2]), &[3]).unwrap());
        let b = BernoulliSpec::new(vec![-1, -1], Permutation::identity(2), vec![1, 1], vec![1, 0]).unwrap();
        assert_eq!(star_num(&[-1, -1], &[0, 0]).unwrap(), bnum(&b, &[0, 0]).unwrap());
        let small = extract(&bnum_series(&star_spec(vec![1, 1]), &p(&[1, 0])).unwrap(), &[1, 0]).unwrap();
        let big = extract(&bnum_series(&star_spec(vec![1, 1]), &p(&[3, 2])).unwrap(), &[1, 0]).unwrap();
        assert_eq!(small, big);
    }

    #[test]
    fn star_identity_small() {
        assert!(star_identity_check(&[0], &[0]).unwrap().holds);
        assert!(star_identity_check(&[1, 1], &[1, 1]).unwrap().holds);
        for n in [[0, 0], [1, 2], [2, 0]] {
            let c = star_identity_check(&[0, 0], &n).unwrap();
            assert!(c.holds);
            assert_eq!(c.rhs, cnum(&[-(n[0] as i64), -(n[1] as i64)], 2, &[0, 0]).unwrap());
        }
    }

    #[test]
    fn cnum_duality_small() {
        assert!(cnum_duality_check(&[0, 0], &[0, 0]).unwrap().holds);
        for k in 0..3 {
            for n in 0..3 {
                assert!(cnum_duality_check(&[k], &[n]).unwrap().holds);
            }
        }
    }

    #[test]
    fn eta_at_nonpositive_points() {
        use crate::etareduce::EtaSpec;
        let spec = |u: Vec<i64>, s: Vec<i64>| {
            let r = u.len();
            EtaSpec { u, s, sigma: Permutation::identity(r), a: vec![1; r], b: vec![1; r] }
        };
        assert_eq!(eta_nonpositive(&spec(vec![-1], vec![0])).unwrap(), int(1));
        assert_eq!(eta_nonpositive(&spec(vec![-1], vec![-2])).unwrap(), int(4));
        assert_eq!(
            eta_nonpositive(&spec(vec![-1, -1], vec![-1, -1])).unwrap(),
            bnum(&BernoulliSpec::plain(vec![-1, -1]), &[1, 1]).unwrap()
        );
        assert!(matches!(eta_nonpositive(&spec(vec![1], vec![1])), Err(BernoulliError::Domain(_))));
    }

    #[test]
    fn small_scan() {
        let report = duality_scan(1, 0).unwrap();
        assert_eq!(report.checked, 1);
        assert!(report.failures.is_empty());
        let report = duality_scan(1, 3).unwrap();
        assert_eq!(report.checked, 16);
        assert!(report.failures.is_empty());
    }

    #[test]
    fn block_helpers() {
        assert_eq!(block_starts(3), vec![vec![1], vec![1, 2], vec![1, 3], vec![1, 2, 3]]);
        assert_eq!(block_sums(&[1, 2, 3], &[1, 3]), vec![3, 3]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn truncation_stability(k1 in -2i64..3, k2 in -2i64..3, m1 in 0u32..3, m2 in 0u32..3, swap in any::<bool>()) {
            let sigma = if swap { Permutation::parse("2,1", 2).unwrap() } else { Permutation::identity(2) };
            let spec = BernoulliSpec::new(vec![k1, k2], sigma, vec![1, 1], vec![1, 1]).unwrap();
            let exact = bnum(&spec, &[m1, m2]).unwrap();
            let wide = extract(&bnum_series(&spec, &p(&[m1 + 2, m2 + 2])).unwrap(), &[m1, m2]).unwrap();
            prop_assert_eq!(exact, wide);
        }

        #[test]
        fn duality_random_depth_two(k in proptest::collection::vec(0u32..3, 2), n in proptest::collection::vec(0u32..3, 2), swap in any::<bool>()) {
            let sigma = if swap { Permutation::parse("2,1", 2).unwrap() } else { Permutation::identity(2) };
            prop_assert!(duality_check(&k, &n, &sigma, &[1, 1], &[1, 1]).unwrap().holds);
        }
    }
}
