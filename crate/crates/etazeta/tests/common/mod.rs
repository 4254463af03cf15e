#![allow(dead_code)]

use etazeta::hyperlog::{HyperlogWord, Letter, Upper};
use etazeta::mzv::{MzvExpr, MzvIndex};
use etazeta::series::Rational;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `0 < x_r < ... < x_1 < 1` with neighbours at least `gap` apart.
pub fn assignment(rng: &mut ChaCha8Rng, r: usize, gap: f64) -> Vec<f64> {
    loop {
        let mut x: Vec<f64> = (0..r).map(|_| rng.gen_range(gap..1.0 - gap)).collect();
        x.sort_by(|a, b| b.partial_cmp(a).unwrap());
        if x.windows(2).all(|w| w[0] - w[1] >= gap) {
            return x;
        }
    }
}

/// Random convergent word in two variables of one of the two shapes met in reductions:
/// upper `x2` over `{0, 1, x1, x2}`, or upper `1` over `{0, 1, x1^-1, x2^-1}`.
pub fn random_word(rng: &mut ChaCha8Rng, max_len: usize) -> HyperlogWord {
    let (upper, alphabet) = if rng.gen_bool(0.5) {
        (Upper::Var(2), [Letter::Zero, Letter::One, Letter::Var(1), Letter::Var(2)])
    } else {
        (Upper::One, [Letter::Zero, Letter::One, Letter::InvVar(1), Letter::InvVar(2)])
    };
    random_word_over(rng, max_len, upper, &alphabet)
}

pub fn random_word_over(rng: &mut ChaCha8Rng, max_len: usize, upper: Upper, alphabet: &[Letter]) -> HyperlogWord {
    loop {
        let n = rng.gen_range(1..=max_len);
        let letters: Vec<Letter> = (0..n).map(|_| *alphabet.choose(rng).unwrap()).collect();
        let w = HyperlogWord::new(letters, upper);
        if w.is_convergent() {
            return w;
        }
    }
}

pub fn zeta_expr(pairs: &[(&[u32], i64)]) -> MzvExpr {
    MzvExpr::from_pairs(pairs.iter().map(|(k, c)| (k.to_vec(), Rational::from_integer((*c).into())))).unwrap()
}

/// Expression from integer coefficients over `basis`.
pub fn row_expr(basis: &[MzvIndex], row: &[i64]) -> MzvExpr {
    let row: Vec<Rational> = row.iter().map(|&c| Rational::from_integer(c.into())).collect();
    MzvExpr::from_row(basis, &row)
}

/// `zeta(s)` by Euler-Maclaurin: partial sum to `n` plus the asymptotic tail.
pub fn riemann_zeta(s: u32) -> f64 {
    let n = 1000u32;
    let sf = s as f64;
    let partial: f64 = (1..n).rev().map(|m| (m as f64).powf(-sf)).sum();
    let nf = n as f64;
    let b2 = 1.0 / 6.0;
    let b4 = -1.0 / 30.0;
    partial
        + nf.powf(1.0 - sf) / (sf - 1.0)
        + 0.5 * nf.powf(-sf)
        + b2 / 2.0 * sf * nf.powf(-sf - 1.0)
        + b4 / 24.0 * sf * (sf + 1.0) * (sf + 2.0) * nf.powf(-sf - 3.0)
}
