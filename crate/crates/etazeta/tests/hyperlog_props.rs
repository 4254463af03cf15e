mod common;

use etazeta::etareduce::{duality_list, expand_nonstrict, reduce_eta_with, strict_li_word};
use etazeta::hyperlog::{
    expr_eval_numeric, scale_invariance_check, shuffle, word_eval_numeric, word_to_mzv, HyperlogExpr, HyperlogWord,
    Letter, Reducer, Upper,
};
use etazeta::mzv_numeric::{mzv_expr_eval, NumericConfig};
use num::ToPrimitive;
use proptest::prelude::*;

use common::{assignment, random_word, rng};

#[test]
fn removals_are_sound() {
    let mut reducer = Reducer::new();
    for w in [4, 5, 6] {
        for spec in duality_list(w).unwrap() {
            reduce_eta_with(&spec, &mut reducer).unwrap();
            reduce_eta_with(&spec.dual(), &mut reducer).unwrap();
        }
    }
    let mut g = rng(17);
    let mut checked = 0;
    for (word, expr) in reducer.removals() {
        let r = word.max_var().unwrap_or(1);
        for _ in 0..3 {
            let x = assignment(&mut g, r, 0.05);
            let lhs = word_eval_numeric(word, &x).unwrap();
            let rhs = expr_eval_numeric(expr, &x).unwrap();
            assert!((lhs - rhs).abs() <= 1e-8 * (1.0 + lhs.abs()), "{word} at {x:?}: {lhs} vs {rhs} = {expr}");
        }
        checked += 1;
    }
    assert!(checked > 20, "only {checked} removals recorded");
}

#[test]
fn scale_invariance() {
    let mut g = rng(3);
    for _ in 0..30 {
        let w = random_word(&mut g, 4);
        let x = assignment(&mut g, 2, 0.1);
        for c in [2.0, 3.0, 0.5] {
            assert!(scale_invariance_check(&w, &x, c).unwrap(), "{w} at {x:?}, c = {c}");
        }
    }
}

/// All convergent words over `{0, 1}` with upper limit 1 and length at most 6.
fn binary_words() -> impl Iterator<Item = HyperlogWord> {
    (1..=6usize).flat_map(|n| {
        (0..1u32 << n).filter_map(move |bits| {
            let letters: Vec<Letter> =
                (0..n).map(|i| if bits >> i & 1 == 1 { Letter::One } else { Letter::Zero }).collect();
            let w = HyperlogWord::new(letters, Upper::One);
            w.is_convergent().then_some(w)
        })
    })
}

#[test]
fn word_to_mzv_matches_numeric_value() {
    let cfg = NumericConfig::default();
    let mut n = 0;
    for w in binary_words() {
        let z = word_to_mzv(&w).unwrap();
        let exact = mzv_expr_eval(&z, &cfg).unwrap().value;
        let direct = word_eval_numeric(&w, &[]).unwrap();
        assert!((exact - direct).abs() < 1e-10 * (1.0 + exact.abs()), "{w} -> {z}: {exact} vs {direct}");
        n += 1;
    }
    // 2^(n-2) words of each length n >= 2
    assert_eq!(n, 1 + 2 + 4 + 8 + 16);
}

#[test]
fn nonstrict_expansion_matches_series() {
    let z: [f64; 3] = [0.3, -0.2, 0.4];
    let cut: u32 = 60;
    for u in [[1, 1, 1], [1, 2, 1], [2, 1, 3]] {
        for offsets in [[1, 0, 0], [1, 0, 1], [1, 1, 0]] {
            let mut direct = 0.0;
            for l1 in offsets[0]..cut {
                for l2 in offsets[1]..cut {
                    for l3 in offsets[2]..cut {
                        let (s1, s2, s3) = (l1 as f64, (l1 + l2) as f64, (l1 + l2 + l3) as f64);
                        direct += z[0].powi(l1 as i32) * z[1].powi(l2 as i32) * z[2].powi(l3 as i32)
                            / (s1.powi(u[0]) * s2.powi(u[1]) * s3.powi(u[2]));
                    }
                }
            }
            let expanded: f64 = expand_nonstrict(&u.map(i64::from), &offsets)
                .unwrap()
                .iter()
                .map(|t| {
                    let zs: Vec<f64> = t.positions.iter().map(|&p| z[p - 1]).collect();
                    strict_series(&t.index, &zs, cut)
                })
                .sum();
            assert!((direct - expanded).abs() < 1e-12, "u {u:?} offsets {offsets:?}: {direct} vs {expanded}");
        }
    }
}

/// `sum_{l_j >= 1} prod z_j^{l_j} / prod (l_1 + ... + l_j)^{k_j}`, each `l_j < cut`.
fn strict_series(k: &[i64], z: &[f64], cut: u32) -> f64 {
    fn go(k: &[i64], z: &[f64], cut: u32, partial: u32, acc: f64) -> f64 {
        match k.split_first() {
            None => acc,
            Some((&kj, rest)) => (1..cut)
                .map(|l| {
                    let s = partial + l;
                    go(rest, &z[1..], cut, s, acc * z[0].powi(l as i32) / (s as f64).powi(kj as i32))
                })
                .sum(),
        }
    }
    go(k, z, cut, 0, 1.0)
}

#[test]
fn strict_li_word_matches_series() {
    let x = [0.4, 0.2];
    let y: Vec<f64> = x.iter().map(|&v| v / (v - 1.0)).collect();
    for (index, vars) in [(vec![2], vec![1]), (vec![1, 2], vec![1, 2]), (vec![2, 1], vec![2, 1]), (vec![1, 1], vec![2, 1])] {
        let (sign, word) = strict_li_word(&index, &vars);
        let value = sign.to_f64().unwrap() * word_eval_numeric(&word, &x).unwrap();
        let ys: Vec<f64> = vars.iter().map(|&v| y[v - 1]).collect();
        let series = strict_series(&index, &ys, 200);
        assert!((value - series).abs() < 1e-10, "{index:?} {vars:?}: {value} vs {series}");
    }
}

fn arb_word() -> impl Strategy<Value = HyperlogWord> {
    prop::collection::vec(prop::sample::select(vec![Letter::Zero, Letter::One, Letter::Var(1), Letter::Var(2)]), 1..4)
        .prop_map(|l| HyperlogWord::new(l, Upper::Var(2)))
        .prop_filter("convergent", HyperlogWord::is_convergent)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn shuffle_is_commutative_with_binomial_mass(a in arb_word(), b in arb_word()) {
        let ab = shuffle(&a, &b).unwrap();
        prop_assert_eq!(&ab, &shuffle(&b, &a).unwrap());
        let mass: f64 = ab.terms().map(|(_, c)| c.to_f64().unwrap()).sum();
        let (m, n) = (a.len() as u32, b.len() as u32);
        let binom = (1..=n).fold(1.0, |acc, i| acc * f64::from(m + i) / f64::from(i));
        prop_assert!((mass - binom).abs() < 1e-9);
    }

    #[test]
    fn shuffle_is_multiplicative(a in arb_word(), b in arb_word(), x1 in 0.3f64..0.9, t in 0.2f64..0.8) {
        let x = [x1, x1 * t];
        let lhs = expr_eval_numeric(&shuffle(&a, &b).unwrap(), &x).unwrap();
        let rhs = word_eval_numeric(&a, &x).unwrap() * word_eval_numeric(&b, &x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()));
    }

    #[test]
    fn canonical_form_preserves_value(a in arb_word(), x1 in 0.3f64..0.9, t in 0.2f64..0.8) {
        let x = [x1, x1 * t];
        let mut reducer = Reducer::new();
        let canon = reducer.canonicalize(&HyperlogExpr::from_word(a.clone())).unwrap();
        let lhs = word_eval_numeric(&a, &x).unwrap();
        let rhs = expr_eval_numeric(&canon, &x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs()), "{} vs {}", lhs, rhs);
    }
}
