//! Property report suites: each runs a module's checks on the file's
//! couple and elements (plus seeded random data), printing one PASS/FAIL
//! line per property together with the measured constants.

use couplekit::couple::{Couple, Exponent, Side};
use couplekit::interp::{
    k_space_norm, lorentz_k_equiv, prop41_check, KMethodParams, Prop41Outcome,
};
use couplekit::kfun;
use couplekit::orbit;
use couplekit::rel_err;
use couplekit::structure::{dual_k_identity, is_b_quotient, is_b_subcouple, SubcoupleSpec};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::formats::CoupleFile;

pub struct SuiteRun {
    pub all_pass: bool,
}

fn line(pass: &mut bool, ok: bool, name: &str, detail: &str) {
    println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    *pass &= ok;
}

/// The file's elements plus seeded random vectors, deterministic in the
/// seed and the document order.
fn corpus(file: &CoupleFile, couple: &Couple, seed: u64) -> Vec<(String, Vec<f64>)> {
    let mut out: Vec<(String, Vec<f64>)> = file
        .elements
        .iter()
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..4usize {
        let v: Vec<f64> = (0..couple.len())
            .map(|_| rng.gen_range(-2.0..2.0))
            .collect();
        out.push((format!("random-{i}"), v));
    }
    out
}

fn dyadic(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(|k| 2.0f64.powi(k)).collect()
}

pub fn norms(file: &CoupleFile, couple: &Couple, seed: u64) -> SuiteRun {
    let mut pass = true;
    let corpus = corpus(file, couple, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6e6f726d);

    let mut worst_hom = 0.0f64;
    let mut worst_tri = 0.0f64;
    for (_, a) in &corpus {
        let b: Vec<f64> = (0..couple.len())
            .map(|_| rng.gen_range(-1.0..1.0))
            .collect();
        for side in Side::BOTH {
            let na = couple.side_norm(side, a);
            let scaled: Vec<f64> = a.iter().map(|x| -2.5 * x).collect();
            worst_hom =
                worst_hom.max((couple.side_norm(side, &scaled) - 2.5 * na).abs() / na.max(1e-300));
            let sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            let excess = couple.side_norm(side, &sum) - na - couple.side_norm(side, &b);
            worst_tri = worst_tri.max(excess / na.max(1e-300));
        }
    }
    line(
        &mut pass,
        worst_hom < 1e-12 && worst_tri < 1e-12,
        "side-norm axioms",
        &format!("homogeneity gap {worst_hom:.2e}, triangle excess {worst_tri:.2e} (tol 1e-12)"),
    );

    let mut worst_chain = 0.0f64;
    for (_, a) in &corpus {
        if a.iter().all(|&x| x == 0.0) {
            continue;
        }
        for &t in &dyadic(-3, 3) {
            let kv = |p: Exponent| kfun::k_functional(couple, a, t, p, 1e-10).map(|r| r.value);
            let (Ok(ki), Ok(k2), Ok(k1)) = (
                kv(Exponent::Infinity),
                kv(Exponent::Finite(2.0)),
                kv(Exponent::Finite(1.0)),
            ) else {
                pass = false;
                continue;
            };
            let s = k1.max(1e-300);
            worst_chain = worst_chain
                .max((ki - k2) / s)
                .max((k2 - k1) / s)
                .max((k1 - 2.0 * ki) / s);
        }
    }
    line(
        &mut pass,
        worst_chain <= 1e-11,
        "K_p chain",
        &format!("max scaled violation {worst_chain:.2e} (K_inf <= K_2 <= K_1 <= 2 K_inf)"),
    );

    // Closed forms against the solver where the couple admits them.
    let mut closed_checked = false;
    let mut worst_closed = 0.0f64;
    for (_, a) in &corpus {
        for &t in &dyadic(-3, 3) {
            if couple.is_unweighted_l1_linf() {
                let c = kfun::k_l1_linf(a, t).unwrap();
                let s = kfun::k_functional(couple, a, t, Exponent::Finite(1.0), 1e-10)
                    .unwrap()
                    .value;
                worst_closed = worst_closed.max(rel_err(c, s));
                closed_checked = true;
            }
            if couple.exponent(Side::Zero) == couple.exponent(Side::One) {
                if let Ok(c) = kfun::k_equal_exponent(couple, a, t) {
                    let p = couple.exponent(Side::Zero);
                    let s = kfun::k_functional(couple, a, t, p, 1e-10).unwrap().value;
                    worst_closed = worst_closed.max(rel_err(c, s));
                    closed_checked = true;
                }
            }
        }
    }
    if closed_checked {
        line(
            &mut pass,
            worst_closed < 1e-7,
            "closed form vs solver",
            &format!("max relative gap {worst_closed:.2e} (tol 1e-7)"),
        );
    } else {
        println!("SKIP closed form vs solver: no closed form for this exponent pattern");
    }

    // Exact curves where available: solver values sit on the curve.
    if let Some((name, a)) = corpus
        .iter()
        .find(|(_, a)| kfun::k_curve(couple, a).is_some())
    {
        let curve = kfun::k_curve(couple, a).unwrap();
        let mut worst = 0.0f64;
        for &t in &dyadic(-4, 4) {
            worst = worst.max(rel_err(
                curve.eval(t).unwrap(),
                kfun::k(couple, a, t).unwrap(),
            ));
        }
        line(
            &mut pass,
            worst < 1e-9,
            "exact K-curve",
            &format!("element {name}: max gap to solver {worst:.2e}"),
        );
    }
    SuiteRun { all_pass: pass }
}

pub fn duality(file: &CoupleFile, couple: &Couple, seed: u64) -> SuiteRun {
    let mut pass = true;
    for (name, a) in corpus(file, couple, seed) {
        for &t in &dyadic(-2, 2) {
            match dual_k_identity(couple, &a, t) {
                Ok(r) => {
                    let ok = rel_err(r.k_inf, r.dual_sup) < 1e-6 || r.k_inf == 0.0;
                    line(
                        &mut pass,
                        ok,
                        "duality",
                        &format!(
                            "element {name}, t={t}: K_inf={:.9} dual={:.9}",
                            r.k_inf, r.dual_sup
                        ),
                    );
                }
                Err(e) => line(&mut pass, false, "duality", &format!("element {name}: {e}")),
            }
        }
    }
    SuiteRun { all_pass: pass }
}

pub fn subcouple(file: &CoupleFile, couple: &Couple, seed: u64) -> SuiteRun {
    let mut pass = true;
    if couple.len() < 2 {
        println!("SKIP subcouple: the couple has a single coordinate");
        return SuiteRun { all_pass: pass };
    }
    let keep: Vec<usize> = (0..couple.len()).step_by(2).collect();
    let spec = SubcoupleSpec::coordinates(couple.clone(), keep.clone()).unwrap();
    let samples: Vec<Vec<f64>> = corpus(file, couple, seed)
        .into_iter()
        .map(|(_, mut a)| {
            for (i, x) in a.iter_mut().enumerate() {
                if !keep.contains(&i) {
                    *x = 0.0;
                }
            }
            a
        })
        .collect();
    let grid = dyadic(-3, 3);
    match is_b_subcouple(&spec, &samples, &grid) {
        Ok(r) => line(
            &mut pass,
            r.holds,
            "coordinate b-subcouple",
            &format!("keep {keep:?}: K agreement on {} samples", samples.len()),
        ),
        Err(e) => line(&mut pass, false, "coordinate b-subcouple", &e.to_string()),
    }
    let kill: Vec<usize> = (0..couple.len()).filter(|i| !keep.contains(i)).collect();
    if kill.is_empty() {
        println!("SKIP quotient: nothing to kill at this size");
    } else {
        let full: Vec<Vec<f64>> = corpus(file, couple, seed ^ 1)
            .into_iter()
            .map(|(_, a)| a)
            .collect();
        match is_b_quotient(couple, &kill, &full, &grid) {
            Ok(ok) => line(
                &mut pass,
                ok,
                "coordinate b-quotient",
                &format!("kill {kill:?}: quotient K matches zero-filled infimum"),
            ),
            Err(e) => line(&mut pass, false, "coordinate b-quotient", &e.to_string()),
        }
    }
    SuiteRun { all_pass: pass }
}

pub fn fundamental_lemma(file: &CoupleFile, couple: &Couple, seed: u64) -> SuiteRun {
    let mut pass = true;
    let corpus = corpus(file, couple, seed);
    let mut gamma_samples = Vec::new();
    for (name, a) in &corpus {
        if a.iter().all(|&x| x == 0.0) {
            continue;
        }
        gamma_samples.push(a.clone());
        match orbit::fundamental_decomposition(couple, a, 1e-3, None) {
            Ok(d) => {
                let recomposed = d.recompose(couple.len());
                let err: Vec<f64> = recomposed.iter().zip(a).map(|(x, y)| x - y).collect();
                let rel = kfun::k(couple, &err, 1.0).unwrap()
                    / kfun::k(couple, a, 1.0).unwrap().max(1e-300);
                let grid = dyadic(-4, 4);
                let cj = d
                    .j_representation_constant(couple, a, &grid)
                    .unwrap_or(f64::NAN);
                line(
                    &mut pass,
                    rel <= 1e-8 && d.c_meas <= 4.0,
                    "fundamental lemma",
                    &format!(
                        "element {name}: recomposition {rel:.2e}, c_meas={:.4}, \
                         J-representation constant {cj:.4} (levels {}..{})",
                        d.c_meas,
                        d.levels.first().unwrap(),
                        d.levels.last().unwrap()
                    ),
                );
            }
            Err(e) => line(
                &mut pass,
                false,
                "fundamental lemma",
                &format!("{name}: {e}"),
            ),
        }
    }
    match orbit::gamma_estimate(couple, &gamma_samples, 1e-3) {
        Ok(g) => {
            println!("INFO gamma estimate over the corpus: {g:.4} (upper estimate, report only)")
        }
        Err(e) => line(&mut pass, false, "gamma estimate", &e.to_string()),
    }
    SuiteRun { all_pass: pass }
}

pub fn interp(file: &CoupleFile, couple: &Couple, seed: u64) -> SuiteRun {
    let mut pass = true;
    let corpus = corpus(file, couple, seed);
    let thetas = [0.25, 0.5, 0.75];
    let qs = [
        Exponent::Finite(1.0),
        Exponent::Finite(2.0),
        Exponent::Infinity,
    ];

    let mut worst_hom = 0.0f64;
    for (_, a) in &corpus {
        let p = KMethodParams::new(0.5, Exponent::Finite(1.0)).unwrap();
        let na = k_space_norm(couple, a, p).unwrap_or(f64::NAN);
        if na > 0.0 {
            let scaled: Vec<f64> = a.iter().map(|x| 3.0 * x).collect();
            let ns = k_space_norm(couple, &scaled, p).unwrap_or(f64::NAN);
            worst_hom = worst_hom.max(rel_err(ns, 3.0 * na));
        }
    }
    line(
        &mut pass,
        worst_hom < 1e-9,
        "interpolation norm homogeneity",
        &format!("max gap {worst_hom:.2e}"),
    );

    if couple.len() >= 2 {
        let keep: Vec<usize> = (0..couple.len()).step_by(2).collect();
        let spec = SubcoupleSpec::coordinates(couple.clone(), keep.clone()).unwrap();
        let samples: Vec<Vec<f64>> = corpus
            .iter()
            .map(|(_, a)| {
                let mut a = a.clone();
                for (i, x) in a.iter_mut().enumerate() {
                    if !keep.contains(&i) {
                        *x = 0.0;
                    }
                }
                a
            })
            .collect();
        let mut worst = 0.0f64;
        let mut equal = true;
        for &theta in &thetas {
            for &q in &qs {
                let params = KMethodParams::new(theta, q).unwrap();
                match prop41_check(&spec, params, &samples) {
                    Ok(Prop41Outcome::Equal { max_rel_gap }) => worst = worst.max(max_rel_gap),
                    Ok(Prop41Outcome::OneSidedInclusion { .. }) => equal = false,
                    Err(_) => equal = false,
                }
            }
        }
        line(
            &mut pass,
            equal && worst < 1e-7,
            "norm agreement on coordinate subcouples",
            &format!("max gap {worst:.2e} over theta x q grid"),
        );
    }

    // Lorentz equivalence on the rearranged first element.
    if let Some((name, a)) = corpus.first() {
        let b = kfun::decreasing_rearrangement(a);
        match lorentz_k_equiv(1.0, f64::INFINITY, &b, &dyadic(-3, 3)) {
            Ok(r) => line(
                &mut pass,
                r.min_ratio >= 0.125 && r.max_ratio <= 8.0,
                "Lorentz equivalence",
                &format!(
                    "element {name} rearranged: ratios [{:.3}, {:.3}] within [1/8, 8]",
                    r.min_ratio, r.max_ratio
                ),
            ),
            Err(e) => line(&mut pass, false, "Lorentz equivalence", &e.to_string()),
        }
    }
    SuiteRun { all_pass: pass }
}
