//! Acceptance suite. Prints one PASS/FAIL line per criterion.
//!
//! Exit status is nonzero if any criterion fails, except criteria listed in
//! `KNOWN_FAILING`, which are reported as FAIL but do not break the build.
//! Set `HYPERQ_ACCEPTANCE_STRICT=1` to make every FAIL fatal.

use std::process::Command;

use hyperq::checks::{eq1_check, prop31_check};
use hyperq::function::poly::{pole_order, zero_order};
use hyperq::geometry::{
    chart_zeta, chart_zeta_prime, elementary_symmetric_coeffs, eval_monic_poly, hp_normalize,
    hp_transition, verify_sha_transition, Atlas,
};
use hyperq::jet::{fd_partials, DEFAULT_FD_STEP};
use hyperq::operators::{
    eq1_fueter_discrepancy, fueter_from_jets, leibniz_from_evals, magnitude,
    product_condition_from_evals, prop31_from_jets, sum_condition_residual, CheckConfig,
};
use hyperq::{ComponentExpr, GridSpec, Point, QFunction, Quaternion};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const KNOWN_FAILING: &[u32] = &[5, 7];

type Criterion = (u32, &'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rand_quat(rng: &mut ChaCha8Rng, r: f64) -> Quaternion {
    Quaternion::from_real4(std::array::from_fn(|_| rng.gen_range(-r..=r)))
}

fn rand_point(rng: &mut ChaCha8Rng, r: f64) -> Point {
    (
        c(rng.gen_range(-r..=r), rng.gen_range(-r..=r)),
        c(rng.gen_range(-r..=r), rng.gen_range(-r..=r)),
    )
}

/// Hamilton table on `1, i, j, k` coordinates.
fn hamilton(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
    let [a0, a1, a2, a3] = a;
    let [b0, b1, b2, b3] = b;
    [
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    ]
}

/// Random component expression of depth at most `depth`.
fn rand_expr(
    rng: &mut ChaCha8Rng,
    depth: u32,
    allow_conj: bool,
    allow_recip: bool,
) -> ComponentExpr {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..3) {
            0 => ComponentExpr::Z1,
            1 => ComponentExpr::Z2,
            _ => {
                let m = rng.gen_range(0.5..2.0);
                let a: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                ComponentExpr::Lit(Complex64::from_polar(m, a))
            }
        };
    }
    let sub = |rng: &mut ChaCha8Rng| rand_expr(rng, depth - 1, allow_conj, allow_recip);
    loop {
        match rng.gen_range(0..7) {
            0 => return sub(rng).add(sub(rng)),
            1 => return sub(rng).sub(sub(rng)),
            2 => return sub(rng).mul(sub(rng)),
            3 if allow_conj => return sub(rng).conj(),
            4 if allow_recip => return sub(rng).recip(),
            5 => return sub(rng).pow(rng.gen_range(2..=3)),
            6 => return sub(rng).neg(),
            _ => {}
        }
    }
}

/// Magnitudes of every subexpression at `p`, or `None` if one is undefined.
fn sub_magnitudes(e: &ComponentExpr, p: Point, out: &mut Vec<f64>) -> Option<()> {
    use ComponentExpr::*;
    out.push(e.eval(p, 1e-300).ok()?.norm());
    match e {
        Z1 | Z2 | Lit(_) => {}
        Conj(a) | Neg(a) | Recip(a) | Pow(a, _) => sub_magnitudes(a, p, out)?,
        Add(a, b) | Mul(a, b) => {
            sub_magnitudes(a, p, out)?;
            sub_magnitudes(b, p, out)?;
        }
    }
    Some(())
}

fn regular(e: &ComponentExpr, p: Point, lo: f64, hi: f64) -> bool {
    let mut mags = Vec::new();
    sub_magnitudes(e, p, &mut mags).is_some() && mags.iter().all(|m| (lo..=hi).contains(m))
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst_mul = 0.0f64;
    let mut worst_norm = 0.0f64;
    let mut worst_inv = 0.0f64;
    for _ in 0..100_000 {
        let a = rand_quat(&mut rng, 2.0);
        let b = rand_quat(&mut rng, 2.0);
        let got = (a * b).to_real4();
        let want = hamilton(a.to_real4(), b.to_real4());
        for k in 0..4 {
            worst_mul = worst_mul.max((got[k] - want[k]).abs());
        }
        let n = a * a.conj();
        let d = n - Quaternion::from_real(a.norm_sq());
        worst_norm = worst_norm.max(d.to_real4().iter().fold(0.0, |m, x| m.max(x.abs())));
        // inverse over norms spanning 1e-6 .. 1e4
        let scale = 10f64.powf(rng.gen_range(-3.0..2.0));
        let q =
            Quaternion::from_real4(std::array::from_fn(|_| rng.gen_range(-1.0..1.0))).scale(scale);
        if q.norm_sq() >= 1e-6 {
            let r = q * q.inverse().unwrap() - Quaternion::ONE;
            worst_inv = worst_inv.max(r.to_real4().iter().fold(0.0, |m, x| m.max(x.abs())));
        }
    }
    outcome(
        worst_mul <= 1e-12 && worst_norm <= 1e-12 && worst_inv <= 1e-9,
        format!("product {worst_mul:.2e}, q*conj(q) {worst_norm:.2e}, q*q^-1 {worst_inv:.2e}"),
    )
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    let mut n = 0;
    while n < 1000 {
        let e = rand_expr(&mut rng, 6, true, true);
        let p = rand_point(&mut rng, 1.5);
        if !regular(&e, p, 1e-3, 1e3) {
            continue;
        }
        let Ok(jet) = e.jet(p, 1e-12) else { continue };
        let Ok(fd) = fd_partials(|q| e.eval(q, 1e-12), p, DEFAULT_FD_STEP) else {
            continue;
        };
        let a = jet.partials();
        // gradient scale, floored by the value so that an identically
        // vanishing gradient is compared against finite-difference roundoff
        let scale = a.iter().map(|x| x.norm()).fold(jet.value.norm(), f64::max);
        let err = (0..4).map(|k| (a[k] - fd[k]).norm()).fold(0.0, f64::max);
        let rel = err / scale;
        worst = worst.max(rel);
        n += 1;
    }
    outcome(
        worst <= 1e-6,
        format!("{n} expressions, worst relative error {worst:.2e}"),
    )
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    let mut n = 0;
    while n < 10_000 {
        let f = QFunction::new(
            rand_expr(&mut rng, 4, true, true),
            rand_expr(&mut rng, 4, true, true),
        );
        let p = rand_point(&mut rng, 1.5);
        let Ok(e) = f.eval(p) else { continue };
        let d = eq1_fueter_discrepancy(&e.j1, &e.j2);
        if !d.is_finite() {
            continue;
        }
        worst = worst.max(d);
        n += 1;
    }
    outcome(
        worst <= 1e-12,
        format!("{n} samples, worst discrepancy {worst:.2e}"),
    )
}

fn criterion_4() -> Outcome {
    let grid = GridSpec::default().points().unwrap();
    let cfg = CheckConfig::default().with_tol(1e-10);
    let holomorphic = [
        "f1 = z1; f2 = 0",
        "f1 = z1*z2 + 3; f2 = 0",
        "f1 = z1^3 - (0, 2)*z2^2 + 1; f2 = 0",
        "f1 = recip(z1 + 3)*z2; f2 = 0",
        "f1 = (z1 - z2)^2*recip(z2 - 4); f2 = 0",
    ];
    let mut worst = 0.0f64;
    let mut ok = true;
    for src in holomorphic {
        let f = QFunction::parse(src).unwrap();
        let a = eq1_check(&f, &grid, &cfg);
        let b = prop31_check(&f, &grid, &cfg);
        ok &= a.pass && b.pass;
        worst = worst.max(a.max_abs).max(b.max_abs);
    }
    let f = QFunction::parse("f1 = conj(z2); f2 = -conj(z1)").unwrap();
    let eq1 = eq1_check(&f, &grid, &CheckConfig::default().with_tol(1e-12));
    let e = f.eval((c(0.0, 0.0), c(0.0, 1.0))).unwrap();
    let (_, second) = prop31_from_jets(&e.j1, &e.j2);
    let second_ok = (second - c(0.0, -2.0)).norm() <= 1e-9;
    outcome(
        ok && eq1.pass && second_ok,
        format!(
            "holomorphic worst {worst:.2e}; conj pair eq1 {:.2e}, prop31 second residual at (0, i) = {second}",
            eq1.max_abs
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst_literal = 0.0f64;
    let mut worst = 0.0f64;
    let mut n = 0;
    while n < 1000 {
        let f = QFunction::new(
            rand_expr(&mut rng, 3, true, true),
            rand_expr(&mut rng, 3, true, true),
        );
        let g = QFunction::new(
            rand_expr(&mut rng, 3, true, true),
            rand_expr(&mut rng, 3, true, true),
        );
        let p = rand_point(&mut rng, 1.0);
        if ![&f.f1, &f.f2, &g.f1, &g.f2]
            .iter()
            .all(|e| regular(e, p, 1e-1, 1e2))
        {
            continue;
        }
        let fg = f.mul(&g);
        let (Ok(fe), Ok(ge), Ok(fge)) = (f.eval(p), g.eval(p), fg.eval(p)) else {
            continue;
        };
        let d = leibniz_from_evals(&fe, &ge, &fge);
        worst_literal = worst_literal.max((d.lhs - d.term1 - d.term2_componentwise).abs());
        worst = worst.max(d.residual().abs());
        n += 1;
    }
    outcome(
        worst_literal <= 1e-9,
        format!(
            "{n} pairs, worst residual {worst_literal:.2e} with the componentwise second term, \
             {worst:.2e} with the exact second-factor term"
        ),
    )
}

fn criterion_6() -> Outcome {
    let tol = 1e-8;
    let in_hypothesis = [
        "f1 = z1; f2 = 0",
        "f1 = z1*z2 + 3; f2 = 0",
        "f1 = z2^2 - z1; f2 = 0",
        "f1 = recip(z1 + 2); f2 = 0",
        "f1 = 2; f2 = 0",
        "f1 = (0, 1); f2 = 0",
        "f1 = 0; f2 = 1",
        "f1 = (1, -1); f2 = (0.5, 2)",
    ];
    let outside = ["f1 = conj(z2); f2 = -conj(z1)"];
    let parse = |s: &&str| QFunction::parse(s).unwrap();
    let members: Vec<QFunction> = in_hypothesis.iter().map(parse).collect();
    let others: Vec<QFunction> = outside.iter().map(parse).collect();
    let points = GridSpec::uniform(-1.0, 1.0, 5).points().unwrap();

    // returns (agreements, disagreements)
    let co_vanishing = |f: &QFunction, g: &QFunction| -> (usize, usize) {
        let fg = f.mul(g);
        let mut agree = 0;
        let mut disagree = 0;
        for &p in &points {
            let (Ok(fe), Ok(ge), Ok(fge)) = (f.eval(p), g.eval(p), fg.eval(p)) else {
                continue;
            };
            let (a, b) = product_condition_from_evals(&fe, &ge);
            let pc = magnitude(&[a, b]);
            let d = fueter_from_jets(&fge.j1, &fge.j2).abs();
            if (pc <= tol && d <= tol) || (pc >= 10.0 * tol && d >= 10.0 * tol) {
                agree += 1;
            } else {
                disagree += 1;
            }
        }
        (agree, disagree)
    };

    let mut agree = 0;
    let mut disagree = 0;
    for f in &members {
        for g in &members {
            let (a, d) = co_vanishing(f, g);
            agree += a;
            disagree += d;
        }
    }
    let mut outside_disagree = 0;
    for f in &others {
        for g in members.iter().chain(&others) {
            outside_disagree += co_vanishing(f, g).1 + co_vanishing(g, f).1;
        }
    }

    let cfg = CheckConfig::default();
    let mut sum_logged = 0;
    let mut sum_checked = 0;
    for f in members.iter().chain(&others) {
        for g in members.iter().chain(&others) {
            let h = f.add(g);
            for &p in &points {
                if let Ok(s) = sum_condition_residual(&h, p, &cfg) {
                    sum_checked += 1;
                    if !s.consistent(1e-8) {
                        sum_logged += 1;
                        eprintln!("  sum discrepancy {:.3e} at {p:?} for {h}", s.discrepancy());
                    }
                }
            }
        }
    }
    outcome(
        disagree == 0,
        format!(
            "product: {agree} agreeing points, {disagree} disagreeing; outside hypothesis: {outside_disagree} disagreeing; \
             sum: {sum_checked} points, {sum_logged} discrepancies logged"
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_prod = 0.0f64;
    let mut n = 0;
    while n < 10_000 {
        let (q1, q2) = (rand_quat(&mut rng, 2.0), rand_quat(&mut rng, 2.0));
        let Ok(p) = hp_normalize(q1, q2) else {
            continue;
        };
        let (Ok(z), Ok(zp)) = (chart_zeta(&p), chart_zeta_prime(&p)) else {
            continue;
        };
        worst_prod = worst_prod.max((z * zp - Quaternion::ONE).abs());
        n += 1;
    }
    let mut worst_lambda = 0.0f64;
    for _ in 0..10_000 {
        let (q1, q2) = (rand_quat(&mut rng, 2.0), rand_quat(&mut rng, 2.0));
        let dir = rand_quat(&mut rng, 1.0);
        if dir.norm_sq() < 1e-3 || q2.norm_sq() < 1e-3 {
            continue;
        }
        let target = 10f64.powf(rng.gen_range(-4.0..4.0));
        let lambda = dir.scale((target / dir.norm_sq()).sqrt());
        let a = hp_normalize(q1, q2).unwrap();
        let b = hp_normalize(q1 * lambda, q2 * lambda).unwrap();
        worst_lambda = worst_lambda.max((a.q1() - b.q1()).abs());
    }
    let grid = GridSpec::random(-1.5, 1.5, 1000, 7).with_norm_sq_range(0.5, 2.0);
    let points = grid.points().unwrap();
    let sha = verify_sha_transition(&hp_transition(), &points, 1e-8, 1e-6);
    let atlas = Atlas::hamilton_hypersphere(grid).verify().unwrap();
    let round_trip = atlas
        .iter()
        .all(|t| t.round_trip.as_ref().is_some_and(|r| r.pass));
    outcome(
        worst_prod <= 1e-12 && worst_lambda <= 1e-10 && sha.pass && round_trip,
        format!(
            "zeta*zeta' {worst_prod:.2e}; right-lambda {worst_lambda:.2e}; round trip {}; \
             sha check of zeta -> zeta^-1: {} (max residual {:.3e})",
            if round_trip { "ok" } else { "failed" },
            if sha.pass { "pass" } else { "fail" },
            sha.max_abs
        ),
    )
}

fn criterion_8() -> Outcome {
    let z = zero_order(
        &ComponentExpr::Z1.pow(2),
        &ComponentExpr::Z2,
        (c(0.0, 0.0), c(0.0, 0.0)),
        1e-12,
    );
    let p = pole_order(
        &ComponentExpr::Z1.pow(2).recip(),
        &ComponentExpr::Z2.recip(),
        (c(0.0, 0.0), c(0.0, 0.0)),
    );
    let zo = z.as_ref().ok().and_then(|z| z.order);
    let po = p.as_ref().ok().map(|p| p.order);
    outcome(
        zo == Some(1) && po == Some(2),
        format!("zero order {zo:?}, pole order {po:?}"),
    )
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = rng.gen_range(1..=5);
        let vs: Vec<Quaternion> = (0..n)
            .map(|_| {
                Quaternion::from_complex(c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
            })
            .collect();
        let cs = elementary_symmetric_coeffs(&vs);
        for v in &vs {
            worst = worst.max(eval_monic_poly(&cs, *v).abs());
        }
    }
    outcome(worst <= 1e-10, format!("worst root residual {worst:.2e}"))
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_hyperq"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn schema_ok(bytes: &[u8]) -> bool {
    let Ok(v) = serde_json::from_slice::<Value>(bytes) else {
        return false;
    };
    v["schema"] == "hyperq-report/1"
        && v["timestamp"].is_u64()
        && v["def"].is_object()
        && v["grid"].is_object()
        && v.get("classification").is_some()
        && v["checks"].as_array().is_some_and(|cs| {
            cs.iter().all(|c| {
                c["name"].is_string()
                    && c["max_abs"].is_number()
                    && c["argmax"].as_array().is_some_and(|a| a.len() == 4)
                    && c["skipped"].is_u64()
                    && c["pass"].is_boolean()
            })
        })
}

fn strip_timestamp(bytes: &[u8]) -> String {
    let text = String::from_utf8_lossy(bytes).into_owned();
    match text.find("\"timestamp\":") {
        Some(start) => {
            let end = start + text[start..].find(',').unwrap_or(text.len() - start);
            format!("{}{}", &text[..start], &text[end..])
        }
        None => text,
    }
}

fn criterion_10() -> Outcome {
    let ok_args = [
        "check",
        "--def",
        "f1 = conj(z2); f2 = -conj(z1)",
        "--checks",
        "eq1",
        "--grid",
        "default",
    ];
    let fail_args = ["check", "--def", "f1 = conj(z1); f2 = 0", "--checks", "eq1"];
    let parse_args = ["check", "--def", "f1 = z1 +", "--checks", "eq1"];
    let (c0, r0) = run_cli(&ok_args);
    let (c1, r1) = run_cli(&fail_args);
    let (c2, r2) = run_cli(&parse_args);
    let v0: Value = serde_json::from_slice(&r0).unwrap_or(Value::Null);
    let v1: Value = serde_json::from_slice(&r1).unwrap_or(Value::Null);
    let max0 = v0["checks"][0]["max_abs"].as_f64().unwrap_or(f64::NAN);
    let max1 = v1["checks"][0]["max_abs"].as_f64().unwrap_or(f64::NAN);
    let (_, again0) = run_cli(&ok_args);
    let (_, again1) = run_cli(&fail_args);
    let identical = strip_timestamp(&r0) == strip_timestamp(&again0)
        && strip_timestamp(&r1) == strip_timestamp(&again1);
    let pass = c0 == 0
        && c1 == 1
        && c2 == 2
        && schema_ok(&r0)
        && schema_ok(&r1)
        && r2.is_empty()
        && max0 <= 1e-12
        && (max1 - 1.0).abs() <= 1e-12
        && identical;
    outcome(
        pass,
        format!(
            "exit codes {c0}/{c1}/{c2}, max_abs {max0:.2e} / {max1}, reruns identical: {identical}"
        ),
    )
}

fn main() {
    // `cargo test` passes harness flags such as `--quiet`; only a filter
    // argument restricts the run.
    let filter: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let strict = std::env::var("HYPERQ_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let criteria: [Criterion; 10] = [
        (1, "algebra oracle equivalence", criterion_1),
        (2, "Wirtinger jets vs finite differences", criterion_2),
        (3, "Cauchy-Fueter pair vs Fueter operator", criterion_3),
        (4, "known families", criterion_4),
        (5, "Leibniz decomposition", criterion_5),
        (6, "product/sum condition co-vanishing", criterion_6),
        (7, "HP charts and transition", criterion_7),
        (8, "zero and pole orders", criterion_8),
        (9, "symmetric functions", criterion_9),
        (10, "CLI end to end", criterion_10),
    ];
    let mut fatal = 0;
    for (id, name, run) in criteria {
        if filter.is_some_and(|f| f != id) {
            continue;
        }
        let o = run();
        let status = if o.pass { "PASS" } else { "FAIL" };
        let note = if !o.pass && KNOWN_FAILING.contains(&id) {
            " [known failure]"
        } else {
            ""
        };
        println!("criterion {id:>2} {status}{note}: {name}: {}", o.detail);
        if !o.pass && (strict || !KNOWN_FAILING.contains(&id)) {
            fatal += 1;
        }
    }
    if fatal > 0 {
        eprintln!("{fatal} criterion(s) failed");
        std::process::exit(1);
    }
}
