//! Acceptance criteria 1-9, one PASS/FAIL line each.

mod common;

use std::error::Error;
use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use etazeta::etareduce::{
    assemble_relation_matrix, duality_list, expr_in_rowspace, reduce_eta, EtaSpec, RelationMatrix,
};
use etazeta::hyperlog::{diff_wrt_var, expr_eval_numeric, shuffle, word_eval_numeric, HyperlogExpr, Upper};
use etazeta::mzv::{MzvExpr, MzvIndex};
use etazeta::mzv_numeric::{eta_r1_quadrature, mzv_eval, mzv_expr_eval, NumericConfig};
use etazeta::polybernoulli::{cnum_duality_check, duality_scan, star_identity_check, Permutation};

use etazeta::series::{int, Rational};
use num::Zero;

use common::{assignment, random_word, riemann_zeta, rng, row_expr, zeta_expr};

type Outcome = Result<String, String>;
type Res<T> = Result<T, Box<dyn Error>>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn flatten(r: Res<Outcome>) -> Outcome {
    r.unwrap_or_else(|e| Err(format!("error: {e}")))
}

fn swap() -> Permutation {
    Permutation::from_images(vec![2, 1]).unwrap()
}

fn cfg() -> NumericConfig {
    NumericConfig::default()
}

fn numeric(e: &MzvExpr) -> Res<f64> {
    Ok(mzv_expr_eval(e, &cfg())?.value)
}

fn grid(dims: usize, max: u32) -> impl Iterator<Item = Vec<u32>> {
    (0..(max + 1).pow(dims as u32)).map(move |mut code| {
        (0..dims)
            .map(|_| {
                let d = code % (max + 1);
                code /= max + 1;
                d
            })
            .collect()
    })
}

fn criterion_1() -> Res<Outcome> {
    let start = Instant::now();
    let mut checked = 0;
    let mut failures = 0;
    for r in 1..=2 {
        let report = duality_scan(r, 3)?;
        checked += report.checked;
        failures += report.failures.len();
    }
    let t = start.elapsed();
    Ok(check(failures == 0 && t < Duration::from_secs(120), format!("{checked} cases, {failures} failures, {t:.2?}")))
}

fn criterion_2() -> Res<Outcome> {
    let mut n = 0;
    let mut bad = Vec::new();
    for v in grid(4, 3) {
        n += 1;
        if !cnum_duality_check(&v[..2], &v[2..])?.holds {
            bad.push(v);
        }
    }
    Ok(check(bad.is_empty(), format!("{n} cases, failures {bad:?}")))
}

fn criterion_3() -> Res<Outcome> {
    let mut n = 0;
    let mut bad = Vec::new();
    for r in 2..=3 {
        for v in grid(2 * r, 2) {
            n += 1;
            if !star_identity_check(&v[..r], &v[r..])?.holds {
                bad.push(v);
            }
        }
    }
    Ok(check(bad.is_empty(), format!("{n} cases, failures {bad:?}")))
}

fn exact(spec: &EtaSpec, expected: &MzvExpr) -> Res<(bool, String)> {
    let got = reduce_eta(spec)?;
    Ok((&got == expected, format!("{spec} = {got}")))
}

fn criterion_4() -> Res<Outcome> {
    let star = EtaSpec::star(vec![1, 1], vec![1, 1], Permutation::identity(2), vec![1, 0])?;
    let starstar = EtaSpec::starstar(vec![1, 1], vec![1, 1], Permutation::identity(2), vec![1, 0])?;
    let (a, da) = exact(&star, &zeta_expr(&[(&[1, 1, 2], 1), (&[2, 2], 2)]))?;
    let (b, db) = exact(&starstar, &zeta_expr(&[(&[1, 1, 2], 2), (&[1, 3], 2)]))?;
    Ok(check(a && b, format!("{da}; {db}")))
}

fn criterion_5() -> Res<Outcome> {
    let star = EtaSpec::star(vec![1, 1], vec![1, 2], swap(), vec![1, 1])?;
    let starstar = EtaSpec::starstar(vec![1, 2], vec![1, 1], swap().inverse(), vec![1, 1])?;
    let (a, da) = exact(&star, &zeta_expr(&[(&[1, 4], -2), (&[2, 3], 1), (&[1, 1, 3], 4)]))?;
    let (b, db) = exact(
        &starstar,
        &zeta_expr(&[(&[1, 2, 2], 1), (&[2, 3], 1), (&[1, 1, 3], 3), (&[1, 4], 4), (&[3, 2], -1)]),
    )?;
    Ok(check(a && b, format!("{da}; {db}")))
}

/// Each relation holds numerically and lies in the rowspace.
fn verify_relations(m: &RelationMatrix, relations: &[MzvExpr], tol: f64) -> Res<(usize, Vec<String>)> {
    let mut bad = Vec::new();
    for rel in relations {
        let v = numeric(rel)?;
        let member = expr_in_rowspace(m, rel)?;
        if v.abs() > tol || !member {
            bad.push(format!("{rel} (value {v:.2e}, member {member})"));
        }
    }
    Ok((relations.len(), bad))
}

fn criterion_6() -> Res<Outcome> {
    let m = assemble_relation_matrix(5, &duality_list(5)?)?;
    let relations = [
        zeta_expr(&[(&[5], 1), (&[1, 1, 1, 2], -1)]),
        zeta_expr(&[(&[1, 4], 4), (&[2, 1, 2], -2), (&[1, 1, 1, 2], 1)]),
        zeta_expr(&[(&[2, 3], 4), (&[2, 1, 2], 6), (&[1, 1, 1, 2], -5)]),
        zeta_expr(&[(&[3, 2], 1), (&[2, 1, 2], -1)]),
        zeta_expr(&[(&[1, 1, 3], 4), (&[2, 1, 2], -2), (&[1, 1, 1, 2], 1)]),
        zeta_expr(&[(&[1, 2, 2], 4), (&[2, 1, 2], 6), (&[1, 1, 1, 2], -5)]),
    ];
    let (n, bad) = verify_relations(&m, &relations, 1e-8)?;
    // the six relations determine every basis element from zeta(2,1,2) and zeta(1,1,1,2)
    let solved = m.reduced().iter().all(|(_, e)| relations.iter().any(|r| r.proportional_to(e)));
    Ok(check(
        bad.is_empty() && solved,
        format!("{} rows, rank {}, {n} reduced relations checked, failures {bad:?}", m.rows.len(), m.rank()),
    ))
}

const WEIGHT6_COMBINED: [[i64; 16]; 2] = [
    [0, 1, -2, -1, 2, 2, -6, 3, 3, 0, -2, 1, -2, -1, 2, 0],
    [48, -14, 36, 26, 0, -31, 97, -44, -44, 9, 61, -14, 36, 26, 0, 48],
];

/// `(pivot column, pivot coefficient, coefficient of zeta(2,1,1,2), of zeta(1,1,1,1,2))`.
const WEIGHT6_REDUCED: [(usize, i64, i64, i64); 14] = [
    (0, 1, 0, -1),
    (1, 24, -12, 7),
    (2, -4, -4, 3),
    (3, 24, 12, -13),
    (4, -1, 1, 0),
    (5, 48, -48, 31),
    (6, 48, 144, -97),
    (7, 12, -18, 11),
    (8, 12, -18, 11),
    (9, 16, 0, -3),
    (10, 48, 48, -61),
    (11, 24, -12, 7),
    (12, -4, -4, 3),
    (13, 24, 12, -13),
];

fn criterion_7() -> Res<Outcome> {
    let start = Instant::now();
    let m = assemble_relation_matrix(6, &duality_list(6)?)?;
    let mut bad = Vec::new();
    for i in 0..m.rows.len() {
        let v = numeric(&m.row_expr(i))?;
        if v.abs() > 1e-8 {
            bad.push(format!("row {} = {v:.2e}", i + 1));
        }
    }
    let combined: Vec<MzvExpr> = WEIGHT6_COMBINED.iter().map(|r| row_expr(&m.basis, r)).collect();
    let (_, bad_combined) = verify_relations(&m, &combined, 1e-8)?;
    let kernel = null_space_reading(&m)?;
    let reduced: Vec<MzvExpr> = WEIGHT6_REDUCED
        .iter()
        .map(|&(p, c, a, b)| {
            let mut row = [0i64; 16];
            row[p] = c;
            row[14] = a;
            row[15] = b;
            row_expr(&m.basis, &row)
        })
        .collect();
    let (_, bad_reduced) = verify_relations(&m, &reduced, 1e-8)?;
    let rref = m.reduced();
    let solved = rref.len() == 14 && rref.iter().zip(&reduced).all(|((_, e), r)| r.proportional_to(e));
    let t = start.elapsed();
    let ok = bad.is_empty() && bad_combined.is_empty() && bad_reduced.is_empty() && solved && t < Duration::from_secs(600);
    Ok(check(
        ok,
        format!(
            "{}x{} matrix, rank {}, nonzero rows {bad:?}, combined failures {bad_combined:?} (as null-space vectors: {kernel}), reduced failures {bad_reduced:?}, solved {solved}, {t:.2?}",
            m.rows.len(),
            m.basis.len(),
            m.rank()
        ),
    ))
}

/// The two combined rows read as null-space vectors: the matrix annihilates both and
/// the vector of basis values equals `zeta(2,1,1,2)/2 * A + zeta(1,1,1,1,2)/48 * B`.
fn null_space_reading(m: &RelationMatrix) -> Res<String> {
    let annihilated = m.rows.iter().all(|row| {
        WEIGHT6_COMBINED
            .iter()
            .all(|v| row.iter().zip(v).map(|(r, &c)| r * int(c)).sum::<Rational>().is_zero())
    });
    let values: Vec<f64> = m.basis.iter().map(|k| mzv_eval(k, &cfg()).map(|e| e.value)).collect::<Result<_, _>>()?;
    let (z1, z2) = (values[14], values[15]);
    let worst = values
        .iter()
        .enumerate()
        .map(|(i, v)| (v - (z1 / 2.0 * WEIGHT6_COMBINED[0][i] as f64 + z2 / 48.0 * WEIGHT6_COMBINED[1][i] as f64)).abs())
        .fold(0.0, f64::max);
    Ok(format!("annihilated {annihilated}, max deviation {worst:.1e}"))
}

fn criterion_8() -> Res<Outcome> {
    let z = |v: &[u32]| -> Res<f64> { Ok(mzv_eval(&MzvIndex::admissible(v.to_vec())?, &cfg())?.value) };
    let zeta3 = riemann_zeta(3);
    let zeta5 = riemann_zeta(5);
    let values = [
        ("ζ(2) = π²/6", z(&[2])?, PI * PI / 6.0),
        ("ζ(1,2) = ζ(3)", z(&[1, 2])?, zeta3),
        ("ζ(1,1,2) = π⁴/90", z(&[1, 1, 2])?, PI.powi(4) / 90.0),
        ("ζ(1,1,1,2) = ζ(5)", z(&[1, 1, 1, 2])?, zeta5),
    ];
    let mut bad: Vec<String> =
        values.iter().filter(|(_, a, b)| (a - b).abs() > 1e-9).map(|(n, a, b)| format!("{n}: {a} vs {b}")).collect();

    let mut g = rng(8);
    let (mut shuffles, mut derivatives) = (0, 0);
    while shuffles < 50 {
        let w1 = random_word(&mut g, 3);
        let w2 = common::random_word_over(&mut g, 3, w1.upper(), &shuffle_alphabet(w1.upper()));
        let x = assignment(&mut g, 2, 0.1);
        let lhs = expr_eval_numeric(&shuffle(&w1, &w2)?, &x)?;
        let rhs = word_eval_numeric(&w1, &x)? * word_eval_numeric(&w2, &x)?;
        if (lhs - rhs).abs() > 1e-8 * (1.0 + rhs.abs()) {
            bad.push(format!("shuffle {w1} x {w2}: {lhs} vs {rhs}"));
        }
        shuffles += 1;
    }
    let h = 1e-5;
    while derivatives < 50 {
        let w = random_word(&mut g, 4);
        let x = assignment(&mut g, 2, 0.1);
        for j in 1..=2 {
            let parts = diff_wrt_var(&HyperlogExpr::from_word(w.clone()), j)?;
            let mut analytic = 0.0;
            for (pole, e) in &parts {
                analytic += expr_eval_numeric(e, &x)? / (x[j - 1] - pole.value(&x));
            }
            let (mut up, mut down) = (x.clone(), x.clone());
            up[j - 1] += h;
            down[j - 1] -= h;
            let fd = (word_eval_numeric(&w, &up)? - word_eval_numeric(&w, &down)?) / (2.0 * h);
            if (analytic - fd).abs() > 1e-6 * (1.0 + fd.abs()) {
                bad.push(format!("d/dx{j} {w} at {x:?}: {analytic} vs {fd}"));
            }
        }
        derivatives += 1;
    }
    Ok(check(bad.is_empty(), format!("4 values, {shuffles} shuffle pairs, {derivatives} words differentiated, failures {bad:?}")))
}

fn shuffle_alphabet(upper: Upper) -> Vec<etazeta::hyperlog::Letter> {
    use etazeta::hyperlog::Letter;
    match upper {
        Upper::One => vec![Letter::Zero, Letter::One, Letter::InvVar(1), Letter::InvVar(2)],
        Upper::Var(_) => vec![Letter::Zero, Letter::One, Letter::Var(1), Letter::Var(2)],
    }
}

fn criterion_9() -> Res<Outcome> {
    let mut lines = Vec::new();
    let mut ok = true;
    for (k, n) in [(1, 1), (1, 2), (2, 1), (2, 3), (3, 2)] {
        let quad = eta_r1_quadrature(k, n, &cfg())?;
        let spec = EtaSpec::star(vec![k as i64], vec![n as i64], Permutation::identity(1), vec![1])?;
        let expr = reduce_eta(&spec)?;
        let v = numeric(&expr)?;
        ok &= quad.agrees_with(v, 1e-6);
        lines.push(format!("η({k};{n}) {:.10} vs {expr} = {v:.10}", quad.value));
    }
    let a = eta_r1_quadrature(1, 4, &cfg())?;
    let b = eta_r1_quadrature(4, 1, &cfg())?;
    ok &= (a.value - b.value).abs() <= 1e-6 + a.error + b.error;
    lines.push(format!("η(1;4) {:.10} vs η(4;1) {:.10}", a.value, b.value));
    Ok(check(ok, lines.join("; ")))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Res<Outcome>); 9] = [
        ("exact duality scan, r = 1, 2, entries 0..3", criterion_1),
        ("C-type duality, r = 2, entries 0..3", criterion_2),
        ("star identity, r = 2, 3, entries 0..2", criterion_3),
        ("weight-4 values", criterion_4),
        ("weight-5 values", criterion_5),
        ("weight-5 relation system", criterion_6),
        ("weight-6 relation system", criterion_7),
        ("numeric oracles, shuffle and derivative checks", criterion_8),
        ("depth-1 quadrature cross-check", criterion_9),
    ];
    let mut all = true;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match flatten(f()) {
            Ok(detail) => println!("PASS criterion {}: {name} -- {detail}", i + 1),
            Err(detail) => {
                all = false;
                println!("FAIL criterion {}: {name} -- {detail}", i + 1);
            }
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
