//! Floating-point evaluation of MZVs, polylogarithms on the negative axis and
//! depth-one eta values. Independent of the symbolic code; used as its oracle.

use num::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::mzv::{MzvExpr, MzvIndex};
use crate::quad::PanelGrid;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum NumericError {
    #[error("index {0:?} is not admissible; the series diverges")]
    Divergent(Vec<u32>),
    #[error("no convergence to {tolerance:e}: best error estimate {estimate:e}")]
    NotConverged { tolerance: f64, estimate: f64 },
    #[error("domain error: {0}")]
    Domain(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumericConfig {
    /// Target absolute tolerance.
    pub tolerance: f64,
    /// Initial number of power-series terms at the split point 1/2.
    pub series_terms: usize,
    /// Upper limit when doubling `series_terms`.
    pub max_series_terms: usize,
    /// Gauss–Legendre nodes per panel.
    pub quad_nodes: usize,
}

impl Default for NumericConfig {
    fn default() -> Self {
        Self { tolerance: 1e-10, series_terms: 64, max_series_terms: 1024, quad_nodes: 20 }
    }
}

impl NumericConfig {
    pub fn with_tolerance(tolerance: f64) -> Self {
        Self { tolerance, ..Self::default() }
    }
}

/// A value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    /// `|self - other| <= tol + both error estimates`.
    pub fn agrees_with(&self, other: f64, tol: f64) -> bool {
        (self.value - other).abs() <= tol + self.error
    }
}

/// Letters of the iterated-integral word `(1, 0^{k_1 - 1}, ..., 1, 0^{k_p - 1})`.
fn index_word(index: &[u32]) -> Vec<u8> {
    index.iter().flat_map(|&k| std::iter::once(1u8).chain(std::iter::repeat(0).take(k as usize - 1))).collect()
}

/// Taylor coefficients (through `t^n`) of `I(0; w; t)` for a word starting with 1.
fn word_series(word: &[u8], n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n + 1];
    c[0] = 1.0;
    for &letter in word {
        let mut next = vec![0.0; n + 1];
        if letter == 0 {
            for m in 1..=n {
                next[m] = c[m] / m as f64;
            }
        } else {
            let mut partial = 0.0;
            for m in 1..=n {
                partial += c[m - 1];
                next[m] = -partial / m as f64;
            }
        }
        c = next;
    }
    c
}

/// `I(0; w; 1/2)` for every prefix length of `w` (entry 0 is the empty word), with the
/// magnitude of the last few series terms as a truncation estimate.
fn prefix_values_at_half(word: &[u8], n: usize) -> (Vec<f64>, f64) {
    let mut values = vec![1.0];
    let mut tail: f64 = 0.0;
    for len in 1..=word.len() {
        let c = word_series(&word[..len], n);
        let mut pow = 1.0;
        let mut sum = 0.0;
        for (m, cm) in c.iter().enumerate() {
            let term = cm * pow;
            sum += term;
            if m + 8 > n {
                tail = tail.max(term.abs());
            }
            pow *= 0.5;
        }
        values.push(sum);
    }
    (values, 4.0 * tail)
}

/// `I(0; w; 1)` for a {0,1}-word with first letter 1 and last letter 0, split at 1/2.
fn word_at_one(word: &[u8], n: usize) -> (f64, f64) {
    let reflected: Vec<u8> = word.iter().rev().map(|&a| 1 - a).collect();
    let (left, e1) = prefix_values_at_half(word, n);
    let (right, e2) = prefix_values_at_half(&reflected, n);
    let len = word.len();
    let mut total = 0.0;
    let mut scale: f64 = 0.0;
    for k in 0..=len {
        let sign = if (len - k) % 2 == 0 { 1.0 } else { -1.0 };
        let term = sign * left[k] * right[len - k];
        total += term;
        scale = scale.max(left[k].abs().max(1.0) * right[len - k].abs().max(1.0));
    }
    (total, (e1 + e2) * scale * (len as f64 + 1.0) + 1e-15 * scale)
}

/// `zeta(k_1, ..., k_p)` to the configured tolerance.
pub fn mzv_eval(index: &MzvIndex, cfg: &NumericConfig) -> Result<Estimate, NumericError> {
    if !index.is_admissible() {
        return Err(NumericError::Divergent(index.entries().to_vec()));
    }
    let word = index_word(index.entries());
    let sign = if index.depth() % 2 == 0 { 1.0 } else { -1.0 };
    let mut n = cfg.series_terms.max(16);
    loop {
        let (v, err) = word_at_one(&word, n);
        if err <= cfg.tolerance {
            return Ok(Estimate { value: sign * v, error: err });
        }
        if n >= cfg.max_series_terms {
            return Err(NumericError::NotConverged { tolerance: cfg.tolerance, estimate: err });
        }
        n *= 2;
    }
}

pub fn mzv_expr_eval(expr: &MzvExpr, cfg: &NumericConfig) -> Result<Estimate, NumericError> {
    let mut value = 0.0;
    let mut error = 0.0;
    for (k, c) in expr.terms() {
        let e = mzv_eval(k, cfg)?;
        let c = c.to_f64().unwrap_or(f64::NAN);
        value += c * e.value;
        error += c.abs() * e.error;
    }
    Ok(Estimate { value, error })
}

/// Truncated nested sum with an asymptotic tail; a slow, independent cross-check.
pub fn mzv_direct_sum(index: &MzvIndex, cutoff: u64) -> Result<Estimate, NumericError> {
    if !index.is_admissible() {
        return Err(NumericError::Divergent(index.entries().to_vec()));
    }
    let k = index.entries();
    let p = k.len();
    // z[j] = sum over m_1 < ... < m_j <= m of prod m_i^{-k_i}; z[0] = 1
    let mut z = vec![0.0f64; p + 1];
    let mut comp = vec![0.0f64; p + 1];
    z[0] = 1.0;
    for m in 1..=cutoff {
        let mf = m as f64;
        for j in (1..=p).rev() {
            let add = z[j - 1] / mf.powi(k[j - 1] as i32);
            // Kahan summation
            let y = add - comp[j];
            let t = z[j] + y;
            comp[j] = (t - z[j]) - y;
            z[j] = t;
        }
    }
    // sum_{m > N} z_{p-1}(m) m^{-k_p}, expanding z_{p-1} beyond N through the trailing run of ones
    let nf = cutoff as f64;
    let s = k[p - 1] as f64;
    let mut tail = 0.0;
    let mut j = p - 1;
    let mut level = 1;
    loop {
        tail += z[j] * nf.powf(1.0 - s) / (s - 1.0).powi(level);
        if j == 0 || k[j - 1] != 1 {
            break;
        }
        j -= 1;
        level += 1;
    }
    let lg = nf.ln().max(1.0);
    Ok(Estimate { value: z[p] + tail, error: 10.0 * lg.powi(p as i32) / (nf * nf) + 1e-13 })
}

fn softplus(y: f64) -> f64 {
    if y > 0.0 {
        y + (-y).exp().ln_1p()
    } else {
        y.exp().ln_1p()
    }
}

fn logistic_complement(y: f64) -> f64 {
    // 1 / (1 + e^y)
    if y > 0.0 {
        let e = (-y).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + y.exp())
    }
}

/// Values of `Li_k(-e^y)` at every node of `grid`, which must start far to the left.
fn neg_axis_table(k: u32, grid: &PanelGrid, start: f64) -> Vec<f64> {
    let mut g: Vec<f64> = grid.t.iter().map(|&y| -softplus(y)).collect();
    let x0 = -start.exp();
    for order in 2..=k {
        let init = x0 + x0 * x0 / 2f64.powi(order as i32);
        g = grid.cumulative(&g, init).0;
    }
    g
}

fn li_series(k: u32, x: f64) -> f64 {
    let mut sum = 0.0;
    let mut pow = 1.0;
    for n in 1..200 {
        pow *= x;
        let term = pow / (n as f64).powi(k as i32);
        sum += term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    sum
}

fn polylog_neg_axis_q(k: u32, x: f64, q: usize) -> f64 {
    if x.abs() < 0.25 {
        return li_series(k, x);
    }
    let y = (-x).ln();
    if k == 1 {
        return -softplus(y);
    }
    let start = -45.0;
    let grid = PanelGrid::uniform(start, y, 0.75, q);
    let mut g: Vec<f64> = grid.t.iter().map(|&t| -softplus(t)).collect();
    let x0 = -start.exp();
    let mut total = 0.0;
    for order in 2..=k {
        let init = x0 + x0 * x0 / 2f64.powi(order as i32);
        let (cum, end) = grid.cumulative(&g, init);
        g = cum;
        total = end;
    }
    total
}

/// `Li_k(x)` for `x <= 0`, integrating `d/dy Li_k(-e^y) = Li_{k-1}(-e^y)` from far left.
pub fn polylog_neg_axis(k: u32, x: f64) -> Result<Estimate, NumericError> {
    if k == 0 || x > 0.0 || !x.is_finite() {
        return Err(NumericError::Domain(format!("need k >= 1 and finite x <= 0, got k = {k}, x = {x}")));
    }
    let a = polylog_neg_axis_q(k, x, 20);
    let b = polylog_neg_axis_q(k, x, 14);
    Ok(Estimate { value: a, error: (a - b).abs() + 1e-14 * a.abs().max(1.0) })
}

fn eta_r1_q(k: u32, n: u32, q: usize) -> f64 {
    let (lo, hi) = (-60.0, 100.0);
    let grid = PanelGrid::uniform(lo, hi, 0.75, q);
    let g = neg_axis_table(k, &grid, lo);
    let gamma: f64 = (1..n).map(|i| i as f64).product();
    let integrand: Vec<f64> = grid
        .t
        .iter()
        .zip(&g)
        .map(|(&y, &gk)| -softplus(y).powi(n as i32 - 1) * gk * logistic_complement(y))
        .collect();
    grid.integrate(&integrand) / gamma
}

/// `eta(k; n) = Gamma(n)^{-1} int_0^inf t^{n-1} Li_k(1 - e^t) / (1 - e^t) dt` with `e^t - 1 = e^y`.
pub fn eta_r1_quadrature(k: u32, n: u32, cfg: &NumericConfig) -> Result<Estimate, NumericError> {
    if k == 0 || n == 0 {
        return Err(NumericError::Domain(format!("need k, n >= 1, got ({k}, {n})")));
    }
    let a = eta_r1_q(k, n, cfg.quad_nodes.max(12));
    let b = eta_r1_q(k, n, cfg.quad_nodes.max(12) - 6);
    let est = Estimate { value: a, error: (a - b).abs() + 1e-13 };
    if est.error > cfg.tolerance.max(1e-9) {
        return Err(NumericError::NotConverged { tolerance: cfg.tolerance, estimate: est.error });
    }
    Ok(est)
}
