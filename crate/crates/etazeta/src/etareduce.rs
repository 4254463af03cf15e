//! Values of `eta(u; s; sigma; a; b)` at positive integers as MZV combinations,
//! and the relation matrices obtained from the duality
//! `eta(u; s; sigma; a; b) = eta(s; u; sigma^-1; b; a)`.
//!
//! Substituting `x_j = 1 - e^{-(t_j + ... + t_r)}` turns the defining integral into
//! an iterated integral over `0 < x_r < ... < x_1 < 1`; variables are then removed
//! innermost first.

use std::fmt;

use num::{BigInt, One};
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::hyperlog::{constants_to_mzv, integrate_innermost, HyperlogError, HyperlogExpr, HyperlogWord, Letter, Reducer, Upper};
use crate::linalg;
use crate::mzv::{MzvError, MzvExpr, MzvIndex};
use crate::polybernoulli::Permutation;
use crate::series::{binomial, factorial, Rational};

pub const MAX_DEPTH: usize = 3;
pub const MAX_WEIGHT: i64 = 6;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EtaError {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported size: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Hyperlog(#[from] HyperlogError),
    #[error(transparent)]
    Mzv(#[from] MzvError),
}

/// `eta(u; s; sigma; a; b)`: `a` drives the `e^{(1 - a_j) T_j}` factors, `b` the
/// lower bounds and denominators of the polylogarithm.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct EtaSpec {
    pub u: Vec<i64>,
    pub s: Vec<i64>,
    pub sigma: Permutation,
    pub a: Vec<u32>,
    pub b: Vec<u32>,
}

/// The two one-parameter families: `Star` fixes `a = (1,...,1)` and puts `c` in
/// the polylogarithm, `StarStar` fixes `b = (1,...,1)` and puts `c` in the exponentials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Star,
    StarStar,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Star => "star",
            Branch::StarStar => "starstar",
        })
    }
}

impl std::str::FromStr for Branch {
    type Err = EtaError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "star" => Ok(Branch::Star),
            "starstar" => Ok(Branch::StarStar),
            _ => Err(EtaError::InvalidSpec(format!("unknown branch {s:?}"))),
        }
    }
}

impl EtaSpec {
    pub fn new(u: Vec<i64>, s: Vec<i64>, sigma: Permutation, a: Vec<u32>, b: Vec<u32>) -> Result<Self, EtaError> {
        let spec = Self { u, s, sigma, a, b };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_branch(branch: Branch, u: Vec<i64>, s: Vec<i64>, sigma: Permutation, c: Vec<u32>) -> Result<Self, EtaError> {
        let ones = vec![1; c.len()];
        match branch {
            Branch::Star => Self::new(u, s, sigma, ones, c),
            Branch::StarStar => Self::new(u, s, sigma, c, ones),
        }
    }

    pub fn star(u: Vec<i64>, s: Vec<i64>, sigma: Permutation, c: Vec<u32>) -> Result<Self, EtaError> {
        Self::from_branch(Branch::Star, u, s, sigma, c)
    }

    pub fn starstar(u: Vec<i64>, s: Vec<i64>, sigma: Permutation, c: Vec<u32>) -> Result<Self, EtaError> {
        Self::from_branch(Branch::StarStar, u, s, sigma, c)
    }

    pub fn depth(&self) -> usize {
        self.u.len()
    }

    pub fn weight(&self) -> i64 {
        self.u.iter().chain(&self.s).sum()
    }

    /// The other side of the duality.
    pub fn dual(&self) -> Self {
        Self { u: self.s.clone(), s: self.u.clone(), sigma: self.sigma.inverse(), a: self.b.clone(), b: self.a.clone() }
    }

    /// Shape and offset constraints shared with the Bernoulli numbers.
    pub fn validate(&self) -> Result<(), EtaError> {
        let r = self.u.len();
        let bad = |m: String| Err(EtaError::InvalidSpec(m));
        if r == 0 {
            return bad("depth must be at least 1".into());
        }
        if self.s.len() != r || self.a.len() != r || self.b.len() != r || self.sigma.degree() != r {
            return bad(format!("u, s, sigma, a, b must all have length {r}"));
        }
        let first = self.sigma.inverse().apply(1) - 1;
        if self.a[0] < 1 || self.a[first] < 1 {
            return bad(format!("a_1 and a_sigma^-1(1) must be at least 1, got a = {:?}", self.a));
        }
        if self.b[0] < 1 || self.b[first] < 1 {
            return bad(format!("b_1 and b_sigma^-1(1) must be at least 1, got b = {:?}", self.b));
        }
        if let Some(j) = (1..=r).find(|&j| self.a[self.sigma.apply(j) - 1] + self.b[j - 1] < 1) {
            return bad(format!("a_sigma({j}) + b_{j} must be at least 1"));
        }
        Ok(())
    }

    /// Additional requirements of the symbolic reduction.
    pub fn validate_reduction(&self) -> Result<(), EtaError> {
        self.validate()?;
        if self.u.iter().chain(&self.s).any(|&v| v < 1) {
            return Err(EtaError::Domain(format!("u and s must be positive integers in {self}")));
        }
        if self.a.iter().chain(&self.b).any(|&v| v > 1) {
            return Err(EtaError::InvalidSpec(format!("offsets must lie in {{0,1}} in {self}")));
        }
        if self.depth() > MAX_DEPTH || self.weight() > MAX_WEIGHT {
            return Err(EtaError::Unsupported(format!("{self}: depth {} and weight {} exceed {MAX_DEPTH} and {MAX_WEIGHT}", self.depth(), self.weight())));
        }
        Ok(())
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for EtaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sigma = if self.sigma.is_identity() { "id".to_string() } else { self.sigma.to_string() };
        write!(f, "η({};{};{};{};{})", join(&self.u), join(&self.s), sigma, join(&self.a), join(&self.b))
    }
}

/// One strict polylogarithm in the expansion of `Li^sh_u(z; offsets)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrictTerm {
    /// Merged weights.
    pub index: Vec<i64>,
    /// Surviving positions, 1-based and increasing.
    pub positions: Vec<usize>,
}

/// Splits `Li^sh_u(z; offsets)` into strict polylogarithms.
///
/// Each zero-offset position either has `l_j >= 1` or `l_j = 0`; in the latter case
/// its partial sum repeats the previous one, so its weight joins the nearest
/// surviving position to the left.
pub fn expand_nonstrict(u: &[i64], offsets: &[u32]) -> Result<Vec<StrictTerm>, EtaError> {
    if u.len() != offsets.len() || u.is_empty() {
        return Err(EtaError::InvalidSpec("weights and offsets must have the same positive length".into()));
    }
    if offsets[0] != 1 || offsets.iter().any(|&o| o > 1) {
        return Err(EtaError::InvalidSpec(format!("offsets {offsets:?} must lie in {{0,1}} with the first equal to 1")));
    }
    let optional: Vec<usize> = (0..u.len()).filter(|&j| offsets[j] == 0).collect();
    let mut out = Vec::new();
    for mask in 0..1u32 << optional.len() {
        let dropped: Vec<usize> = optional.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &j)| j).collect();
        let mut term = StrictTerm { index: Vec::new(), positions: Vec::new() };
        for (j, &w) in u.iter().enumerate() {
            if dropped.contains(&j) {
                *term.index.last_mut().expect("position 1 survives") += w;
            } else {
                term.index.push(w);
                term.positions.push(j + 1);
            }
        }
        out.push(term);
    }
    Ok(out)
}

/// `Li^sh_U(y_{v_1}, ..., y_{v_p})` with `y = 1/(1 - 1/x)` as a signed word:
/// `(-1)^{p + |U|} I(0; 1^{U_p - 1}, x_{v_p}^-1, ..., 1^{U_1 - 1}, x_{v_1}^-1; 1)`.
pub fn strict_li_word(index: &[i64], vars: &[usize]) -> (Rational, HyperlogWord) {
    let mut letters = Vec::new();
    for (&w, &v) in index.iter().zip(vars).rev() {
        letters.extend(std::iter::repeat(Letter::One).take(w as usize - 1));
        letters.push(Letter::InvVar(v));
    }
    let odd = (index.len() as i64 + index.iter().sum::<i64>()) % 2 == 1;
    let sign = if odd { -Rational::one() } else { Rational::one() };
    (sign, HyperlogWord::new(letters, Upper::One))
}

/// Integrand over the simplex and the partial-fraction kernel of each variable.
#[derive(Debug, Clone)]
pub struct Integrand {
    pub expr: HyperlogExpr,
    /// `kernels[j - 1]` is `sum c / (x_j - pole)`.
    pub kernels: Vec<Vec<(Letter, Rational)>>,
}

impl Integrand {
    /// Variables with their kernels in integration order, innermost first.
    pub fn plan(&self) -> impl Iterator<Item = (usize, &[(Letter, Rational)])> {
        self.kernels.iter().enumerate().rev().map(|(i, k)| (i + 1, k.as_slice()))
    }
}

/// `(-1)^b (1 - x)^{a + b - 2} x^{-b}` in partial fractions.
fn kernel(a: u32, b: u32) -> Vec<(Letter, Rational)> {
    let c = |v: i64| Rational::from_integer(BigInt::from(v));
    match (a, b) {
        (1, 1) => vec![(Letter::Zero, c(-1))],
        (1, 0) => vec![(Letter::One, c(-1))],
        (0, 1) => vec![(Letter::Zero, c(-1)), (Letter::One, c(1))],
        _ => unreachable!("validated offsets"),
    }
}

fn log_word(j: usize) -> HyperlogExpr {
    HyperlogExpr::from_word(HyperlogWord::new(vec![Letter::One], Upper::Var(j)))
}

fn power(e: &HyperlogExpr, n: u32) -> HyperlogExpr {
    (0..n).fold(HyperlogExpr::one(), |acc, _| acc.mul(e))
}

pub fn build_integrand(spec: &EtaSpec) -> Result<Integrand, EtaError> {
    spec.validate_reduction()?;
    let r = spec.depth();
    let sinv = spec.sigma.inverse();
    let kernels = (1..=r).map(|v| kernel(spec.a[v - 1], spec.b[sinv.apply(v) - 1])).collect();

    // t_j = I(0;1;x_{j+1}) - I(0;1;x_j), with x_{r+1} = 0
    let mut logs = HyperlogExpr::one();
    for j in 1..=r {
        let n = (spec.s[j - 1] - 1) as u32;
        let mut t_pow = HyperlogExpr::zero();
        for m in 0..=n {
            if j == r && m > 0 {
                break;
            }
            let next = if j < r { power(&log_word(j + 1), m) } else { HyperlogExpr::one() };
            let here = power(&log_word(j), n - m);
            let sign = if (n - m) % 2 == 0 { 1 } else { -1 };
            let c = Rational::new(BigInt::from(sign) * binomial(n, m), factorial(n));
            t_pow.add_scaled(&next.mul(&here), &c);
        }
        logs = logs.mul(&t_pow);
    }

    let mut expr = HyperlogExpr::zero();
    for term in expand_nonstrict(&spec.u, &spec.b)? {
        let vars: Vec<usize> = term.positions.iter().map(|&p| spec.sigma.apply(p)).collect();
        let (sign, word) = strict_li_word(&term.index, &vars);
        expr.add_scaled(&HyperlogExpr::from_word(word).mul(&logs), &sign);
    }
    Ok(Integrand { expr, kernels })
}

pub fn reduce_eta(spec: &EtaSpec) -> Result<MzvExpr, EtaError> {
    reduce_eta_with(spec, &mut Reducer::new())
}

/// As [`reduce_eta`], sharing the rewrite cache so removals can be inspected afterwards.
pub fn reduce_eta_with(spec: &EtaSpec, reducer: &mut Reducer) -> Result<MzvExpr, EtaError> {
    let integrand = build_integrand(spec)?;
    let mut expr = reducer.canonicalize(&integrand.expr)?;
    for (j, kernel) in integrand.plan() {
        let mut next = HyperlogExpr::zero();
        for (pole, c) in kernel {
            next.add_scaled(&integrate_innermost(&expr, j, *pole)?, c);
        }
        expr = reducer.canonicalize(&next)?;
    }
    let out = constants_to_mzv(&expr)?;
    if !out.is_zero() && out.weight() != Some(spec.weight() as u32) {
        return Err(EtaError::InvalidInput(format!("{spec} reduced to the inhomogeneous {out}")));
    }
    Ok(out)
}

/// `reduce(spec) - reduce(dual(spec))`, an expression equal to zero.
pub fn relation_from_duality(spec: &EtaSpec) -> Result<MzvExpr, EtaError> {
    let mut reducer = Reducer::new();
    let lhs = reduce_eta_with(spec, &mut reducer)?;
    let rhs = reduce_eta_with(&spec.dual(), &mut reducer)?;
    Ok(&lhs - &rhs)
}

/// Star-side specs of the dualities used for the relation systems of weight 4, 5 and 6.
pub fn duality_list(weight: u32) -> Result<Vec<EtaSpec>, EtaError> {
    type Raw = (&'static [i64], &'static [i64], &'static str, &'static [u32]);
    let raw: &[Raw] = match weight {
        4 => &[(&[1, 1], &[1, 1], "id", &[1, 0])],
        5 => &[
            (&[1], &[4], "id", &[1]),
            (&[2], &[3], "id", &[1]),
            (&[1, 1], &[1, 2], "id", &[1, 1]),
            (&[1, 1], &[2, 1], "id", &[1, 1]),
            (&[1, 1], &[2, 1], "2,1", &[1, 1]),
            (&[1, 1], &[1, 2], "2,1", &[1, 1]),
        ],
        6 => &[
            (&[1], &[5], "id", &[1]),
            (&[2], &[4], "id", &[1]),
            (&[1, 1], &[2, 2], "id", &[1, 1]),
            (&[1, 2], &[2, 1], "id", &[1, 1]),
            (&[1, 1], &[1, 3], "id", &[1, 1]),
            (&[1, 1], &[3, 1], "id", &[1, 1]),
            (&[1, 1], &[2, 2], "2,1", &[1, 1]),
            (&[1, 2], &[2, 1], "2,1", &[1, 1]),
            (&[1, 1], &[1, 3], "2,1", &[1, 1]),
            (&[1, 1], &[3, 1], "2,1", &[1, 1]),
            (&[1, 1, 1], &[1, 1, 1], "id", &[1, 0, 1]),
            (&[1, 1, 1], &[1, 1, 1], "id", &[1, 1, 0]),
            (&[1, 2], &[1, 2], "id", &[1, 0]),
            (&[2, 1], &[2, 1], "id", &[1, 0]),
        ],
        _ => return Err(EtaError::Unsupported(format!("no duality list for weight {weight}"))),
    };
    raw.iter()
        .map(|(u, s, sigma, c)| {
            let sigma = Permutation::parse(sigma, u.len()).map_err(|e| EtaError::InvalidSpec(e.to_string()))?;
            EtaSpec::star(u.to_vec(), s.to_vec(), sigma, c.to_vec())
        })
        .collect()
}

/// Rows of rational coefficients over a fixed basis, each representing zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationMatrix {
    pub basis: Vec<MzvIndex>,
    pub rows: Vec<Vec<Rational>>,
    pub provenance: Vec<String>,
}

impl RelationMatrix {
    pub fn rank(&self) -> usize {
        linalg::rank(&self.rows)
    }

    /// Reduced row echelon form with the pivot basis elements.
    pub fn reduced(&self) -> Vec<(MzvIndex, MzvExpr)> {
        let (rows, pivots) = linalg::rref(&self.rows);
        rows.iter().zip(pivots).map(|(row, p)| (self.basis[p].clone(), MzvExpr::from_row(&self.basis, row))).collect()
    }

    pub fn row_expr(&self, i: usize) -> MzvExpr {
        MzvExpr::from_row(&self.basis, &self.rows[i])
    }

    pub fn to_csv(&self) -> Result<String, EtaError> {
        let io = |e: csv::Error| EtaError::InvalidInput(e.to_string());
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["provenance".to_string()];
        header.extend(self.basis.iter().map(MzvIndex::to_string));
        w.write_record(&header).map_err(io)?;
        for (row, p) in self.rows.iter().zip(&self.provenance) {
            let mut rec = vec![p.clone()];
            rec.extend(row.iter().map(Rational::to_string));
            w.write_record(&rec).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| EtaError::InvalidInput(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

impl Serialize for RelationMatrix {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Rational::to_string).collect()).collect();
        let mut st = ser.serialize_struct("RelationMatrix", 3)?;
        st.serialize_field("basis", &self.basis)?;
        st.serialize_field("rows", &rows)?;
        st.serialize_field("provenance", &self.provenance)?;
        st.end()
    }
}

/// One row per duality, over all admissible indices of `weight`; rows keep the list order.
pub fn assemble_relation_matrix(weight: u32, dualities: &[EtaSpec]) -> Result<RelationMatrix, EtaError> {
    let basis = MzvIndex::basis(weight);
    let relations: Vec<MzvExpr> = dualities.par_iter().map(relation_from_duality).collect::<Result<_, _>>()?;
    let mut rows = Vec::with_capacity(relations.len());
    for (spec, rel) in dualities.iter().zip(&relations) {
        if !rel.is_zero() && rel.weight() != Some(weight) {
            return Err(EtaError::InvalidInput(format!("{spec} gives a relation of weight {:?}, expected {weight}", rel.weight())));
        }
        rows.push(rel.to_row(&basis).expect("homogeneous relation lies in the basis"));
    }
    let provenance = dualities.iter().map(|s| format!("{s} = {}", s.dual())).collect();
    Ok(RelationMatrix { basis, rows, provenance })
}

pub fn rowspace_membership(matrix: &RelationMatrix, candidate: &[Rational]) -> Result<bool, EtaError> {
    if candidate.len() != matrix.basis.len() {
        return Err(EtaError::InvalidInput(format!("candidate has {} entries, basis has {}", candidate.len(), matrix.basis.len())));
    }
    Ok(linalg::in_rowspace(&matrix.rows, candidate))
}

/// Membership of an expression, which must live in the matrix basis.
pub fn expr_in_rowspace(matrix: &RelationMatrix, candidate: &MzvExpr) -> Result<bool, EtaError> {
    let row = candidate
        .to_row(&matrix.basis)
        .ok_or_else(|| EtaError::InvalidInput(format!("{candidate} is not over the matrix basis")))?;
    rowspace_membership(matrix, &row)
}
