//! Floating-point values of hyperlogarithms on the real line.

use std::collections::HashMap;

use num::ToPrimitive;

use super::expr::{HyperlogExpr, ZetaMonomial};
use super::{HyperlogError, HyperlogWord};
use crate::quad::PanelGrid;

const LEVELS: u32 = 80;
const NODES: usize = 20;

/// A letter position: its value and whether it coincides symbolically with the upper limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealLetter {
    pub value: f64,
    pub at_upper: bool,
}

/// `I(0; a_1..a_n; x)` for real letters outside `(0, x]`, except letters equal to `x` itself.
///
/// Iterated graded Gauss quadrature; each factor `t - a` is formed from exact
/// node offsets so letters close to the endpoint lose no precision.
pub fn eval_real_word(letters: &[RealLetter], upper: f64) -> Result<f64, HyperlogError> {
    let Some(last) = letters.last() else { return Ok(1.0) };
    if !(upper > 0.0) {
        return Err(HyperlogError::Numeric(format!("upper limit {upper} must be positive")));
    }
    if letters[0].value == 0.0 && !letters[0].at_upper {
        return Err(HyperlogError::Divergent("first letter 0".into()));
    }
    if last.at_upper {
        return Err(HyperlogError::Divergent("last letter equals the upper limit".into()));
    }
    if let Some(l) = letters.iter().find(|l| !l.at_upper && l.value > 0.0 && l.value <= upper) {
        return Err(HyperlogError::Numeric(format!("letter {} lies on the path [0, {upper}]", l.value)));
    }
    let grid = PanelGrid::graded(upper, LEVELS, NODES);
    let mut f = vec![1.0; grid.len()];
    for (k, l) in letters.iter().enumerate() {
        let g: Vec<f64> = (0..grid.len())
            .map(|i| {
                let (t, d) = (grid.t[i], grid.d[i]);
                let gap = if l.at_upper {
                    -d
                } else if l.value == 0.0 {
                    t
                } else if l.value > upper {
                    -(d + (l.value - upper))
                } else {
                    t - l.value
                };
                f[i] / gap
            })
            .collect();
        if k + 1 == letters.len() {
            return Ok(grid.integrate(&g));
        }
        f = grid.cumulative(&g, 0.0).0;
    }
    unreachable!("loop returns on the last letter")
}

/// Value of a word at `x` (`x[0]` is `x_1`).
pub fn word_eval_numeric(w: &HyperlogWord, x: &[f64]) -> Result<f64, HyperlogError> {
    if let Some(j) = w.max_var().filter(|&j| j > x.len()) {
        return Err(HyperlogError::Numeric(format!("no value for x{j}")));
    }
    let up = w.upper().as_letter();
    let letters: Vec<RealLetter> = w
        .letters()
        .iter()
        .map(|&l| RealLetter { value: l.value(x), at_upper: l == up })
        .collect();
    eval_real_word(&letters, w.upper().value(x))
}

/// Product of the zeta factors, each through its iterated integral on `[0, 1]`.
pub fn zeta_monomial_numeric(z: &ZetaMonomial) -> Result<f64, HyperlogError> {
    z.factors().iter().try_fold(1.0, |acc, k| {
        let letters: Vec<RealLetter> = k
            .entries()
            .iter()
            .flat_map(|&e| std::iter::once(1.0).chain(std::iter::repeat(0.0).take(e as usize - 1)))
            .map(|value| RealLetter { value, at_upper: value == 1.0 })
            .collect();
        let sign = if k.depth() % 2 == 0 { 1.0 } else { -1.0 };
        Ok(acc * sign * eval_real_word(&letters, 1.0)?)
    })
}

pub fn expr_eval_numeric(e: &HyperlogExpr, x: &[f64]) -> Result<f64, HyperlogError> {
    let mut words: HashMap<&HyperlogWord, f64> = HashMap::new();
    let mut total = 0.0;
    for (m, c) in e.terms() {
        let mut v = c.to_f64().unwrap_or(f64::NAN) * zeta_monomial_numeric(m.zetas())?;
        for w in m.words() {
            let wv = match words.get(w) {
                Some(v) => *v,
                None => {
                    let v = word_eval_numeric(w, x)?;
                    words.insert(w, v);
                    v
                }
            };
            v *= wv;
        }
        total += v;
    }
    Ok(total)
}

/// `I(0; c a; c x) = I(0; a; x)` for `c > 0`, with every letter and the upper limit scaled.
pub fn scale_invariance_check(w: &HyperlogWord, x: &[f64], c: f64) -> Result<bool, HyperlogError> {
    let up = w.upper().as_letter();
    let make = |s: f64| -> Vec<RealLetter> {
        w.letters().iter().map(|&l| RealLetter { value: s * l.value(x), at_upper: l == up }).collect()
    };
    let a = eval_real_word(&make(1.0), w.upper().value(x))?;
    let b = eval_real_word(&make(c), c * w.upper().value(x))?;
    Ok((a - b).abs() <= 1e-10 * (1.0 + a.abs()))
}
