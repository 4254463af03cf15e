//! Hyperlogarithms `I(0; a_1, ..., a_n; x)` over the letters `{0, 1, x_j, 1/x_j}`.
//!
//! `I(0; a_1, ..., a_n; x) = int_{0 < t_1 < ... < t_n < x} prod dt_k / (t_k - a_k)`.
//! Variables satisfy `0 < x_r < ... < x_1 < 1`.

mod calculus;
mod expr;
mod numeric;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use calculus::{constants_to_mzv, diff_word, diff_wrt_var, integrate_innermost, remove_variable, word_to_mzv, Reducer};
pub use expr::{shuffle, shuffle_letters, HyperlogExpr, Monomial, ZetaMonomial};
pub use numeric::{eval_real_word, RealLetter, expr_eval_numeric, scale_invariance_check, word_eval_numeric, zeta_monomial_numeric};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum HyperlogError {
    #[error("cannot shuffle words with different upper limits {0} and {1}")]
    CannotShuffle(String, String),
    #[error("divergent word {0}")]
    Divergent(String),
    #[error("unsupported letter combination: {0}")]
    UnsupportedLetter(String),
    #[error("expression still depends on x{0} outside the integrated word")]
    NotReady(usize),
    #[error("boundary value at x{0} -> 0 is indeterminate for {1}")]
    NeedsManualBoundary(usize, String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("numeric evaluation failed: {0}")]
    Numeric(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Zero,
    One,
    Var(usize),
    InvVar(usize),
}

impl Letter {
    /// Index of the variable the letter depends on.
    pub fn variable(self) -> Option<usize> {
        match self {
            Letter::Var(j) | Letter::InvVar(j) => Some(j),
            _ => None,
        }
    }

    /// Numeric value under `x` (`x[0]` is `x_1`).
    pub fn value(self, x: &[f64]) -> f64 {
        match self {
            Letter::Zero => 0.0,
            Letter::One => 1.0,
            Letter::Var(j) => x[j - 1],
            Letter::InvVar(j) => 1.0 / x[j - 1],
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Zero => write!(f, "0"),
            Letter::One => write!(f, "1"),
            Letter::Var(j) => write!(f, "x{j}"),
            Letter::InvVar(j) => write!(f, "x{j}^-1"),
        }
    }
}

impl FromStr for Letter {
    type Err = HyperlogError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || HyperlogError::Parse(format!("bad letter {s:?}"));
        match s {
            "0" => Ok(Letter::Zero),
            "1" => Ok(Letter::One),
            _ => {
                let body = s.strip_prefix('x').ok_or_else(bad)?;
                let (digits, inverse) = match body.strip_suffix("^-1") {
                    Some(d) => (d, true),
                    None => (body, false),
                };
                let j: usize = digits.parse().map_err(|_| bad())?;
                if j == 0 {
                    return Err(bad());
                }
                Ok(if inverse { Letter::InvVar(j) } else { Letter::Var(j) })
            }
        }
    }
}

/// Upper integration limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Upper {
    One,
    Var(usize),
}

impl Upper {
    pub fn as_letter(self) -> Letter {
        match self {
            Upper::One => Letter::One,
            Upper::Var(j) => Letter::Var(j),
        }
    }

    pub fn value(self, x: &[f64]) -> f64 {
        self.as_letter().value(x)
    }

    /// The limit one level further out: `x_{j-1}`, or 1 after `x_1`.
    pub fn outer(j: usize) -> Self {
        if j <= 1 {
            Upper::One
        } else {
            Upper::Var(j - 1)
        }
    }
}

impl fmt::Display for Upper {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_letter())
    }
}

/// `I(0; letters; upper)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HyperlogWord {
    upper: Upper,
    letters: Vec<Letter>,
}

impl HyperlogWord {
    pub fn new(letters: Vec<Letter>, upper: Upper) -> Self {
        Self { upper, letters }
    }

    pub fn empty(upper: Upper) -> Self {
        Self { upper, letters: Vec::new() }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn upper(&self) -> Upper {
        self.upper
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Largest variable index among letters and upper limit.
    pub fn max_var(&self) -> Option<usize> {
        let up = match self.upper {
            Upper::Var(j) => Some(j),
            Upper::One => None,
        };
        self.letters.iter().filter_map(|l| l.variable()).chain(up).max()
    }

    pub fn depends_on(&self, j: usize) -> bool {
        self.upper == Upper::Var(j) || self.letters.iter().any(|l| l.variable() == Some(j))
    }

    /// First letter is not 0 and the last letter is not the upper limit.
    pub fn is_convergent(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(first), Some(last)) => *first != Letter::Zero && *last != self.upper.as_letter(),
            _ => true,
        }
    }

    /// Word over {0, 1} with upper limit 1: a multiple zeta value up to sign.
    pub fn is_constant(&self) -> bool {
        self.upper == Upper::One && self.letters.iter().all(|l| matches!(l, Letter::Zero | Letter::One))
    }

    /// Upper `x_i`, letters from `{0, 1, x_k : k < i}`, first letter nonzero.
    pub fn is_canonical(&self) -> bool {
        match self.upper {
            Upper::One => false,
            Upper::Var(i) => {
                self.is_convergent()
                    && self.letters.iter().all(|l| match l {
                        Letter::Zero | Letter::One => true,
                        Letter::Var(k) => *k < i,
                        Letter::InvVar(_) => false,
                    })
            }
        }
    }

    pub fn with_letter(&self, letter: Letter) -> Self {
        let mut letters = self.letters.clone();
        letters.push(letter);
        Self { upper: self.upper, letters }
    }

    pub fn with_upper(&self, upper: Upper) -> Self {
        Self { upper, letters: self.letters.clone() }
    }
}

impl fmt::Display for HyperlogWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "I(0; {}; {})", parts.join(","), self.upper)
    }
}

impl FromStr for HyperlogWord {
    type Err = HyperlogError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |why: &str| HyperlogError::Parse(format!("{why} in {s:?}"));
        let body = s.trim().strip_prefix("I(").and_then(|b| b.strip_suffix(')')).ok_or_else(|| bad("expected I(...)"))?;
        let parts: Vec<&str> = body.split(';').collect();
        if parts.len() != 3 {
            return Err(bad("expected three ';'-separated fields"));
        }
        if parts[0].trim() != "0" {
            return Err(bad("lower limit must be 0"));
        }
        let letters = if parts[1].trim().is_empty() {
            Vec::new()
        } else {
            parts[1].split(',').map(str::parse).collect::<Result<Vec<Letter>, _>>()?
        };
        let upper = match parts[2].parse::<Letter>()? {
            Letter::One => Upper::One,
            Letter::Var(j) => Upper::Var(j),
            _ => return Err(bad("upper limit must be 1 or xJ")),
        };
        Ok(Self { upper, letters })
    }
}
