//! End-to-end acceptance run: one PASS/FAIL line per criterion.

use std::f64::consts::{PI, TAU};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use serde_json::{json, Value};

use sk2d::asymptotics::{check_bound, cubic_order, fit_singularity, log_spaced_radii, FitKind};
use sk2d::families::{family_by_name, family_names, ClosedFormMetric, LogFamily};
use sk2d::field::{LogPolarGrid, Loop, ScalarField};
use sk2d::holonomy::{classify, parallel_transport, predicted_class, sp2z_check, ClosedFormConnection};
use sk2d::kw::{solve_kw, KwProblem};
use sk2d::p1::{
    comparison_points, cone_budget, family_perturb, gauss_bonnet_bounded, normalized_difference, p1_family_construct,
    ConeDatum, P1Family, P1Options,
};
use sk2d::refinement::observed_order;
use sk2d::verify::{holonomy_radius, verify_family, VerifyOptions};
use sk2d::Mat2;

const HOLONOMY_TOL: f64 = 1e-6;
const HOLONOMY_TIME: Duration = Duration::from_secs(5);
const P1_TOL: f64 = 5e-2;
const KW_ORDER: f64 = 1.9;
const KW_TIME: Duration = Duration::from_secs(60);
const CURVATURE_FLOOR: f64 = -1e-6;
const FIT_TOL: f64 = 1e-3;
const GB_TOL: f64 = 1e-2;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn family(name: &str, params: Value) -> Box<dyn ClosedFormMetric> {
    family_by_name(name, &params).unwrap()
}

fn holonomy_of(m: &dyn ClosedFormMetric, r: f64) -> Mat2 {
    let conn = ClosedFormConnection::of_family(m).unwrap();
    parallel_transport(&conn, &Loop::circle(c(0.0, 0.0), r).unwrap(), 1e-10).unwrap().matrix
}

fn criterion_1() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut slowest = Duration::ZERO;
    for (a, b) in [(1.0, -1.0), (2.0, -1.0), (1.0, -2.0)] {
        let start = Instant::now();
        let m = LogFamily::new(a, b).unwrap();
        let hol = holonomy_of(&m, 1.0);
        slowest = slowest.max(start.elapsed());
        let expected = Mat2::new(1.0, -2.0 * a * PI / b, 0.0, 1.0);
        worst = worst.max(hol.dist(&expected));
    }
    outcome(
        worst <= HOLONOMY_TOL && slowest < HOLONOMY_TIME,
        format!("max entry error {worst:.2e}, slowest case {slowest:.2?}"),
    )
}

fn cube_roots() -> Vec<Complex64> {
    (0..3).map(|k| Complex64::from_polar(1.0, TAU * k as f64 / 3.0)).collect()
}

fn criterion_2(sym: &P1Family) -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for name in ["poincare", "flat-harmonic"] {
        let m = family(name, Value::Null);
        let hol = holonomy_of(m.as_ref(), holonomy_radius(m.as_ref()));
        let class = classify(&hol, 1e-6).unwrap();
        let beta = m.info().singularity.map_or(0.0, |s| s.beta());
        let log = m.info().singularity.is_some_and(|s| s.is_log_type());
        let admitted = predicted_class(beta, log).admits(&class, 1e-6);
        ok &= admitted;
        notes.push(format!("{name} {}", class.tag.as_str()));
    }
    let expected = 2.0 * (0.9 * PI).cos();
    let mut worst: f64 = 0.0;
    for j in 0..3 {
        let chk = sym.puncture_check(j).unwrap();
        worst = worst.max((chk.holonomy_trace - expected).abs());
    }
    ok &= worst <= P1_TOL;
    notes.push(format!("P1 trace error {worst:.2e}"));
    outcome(ok, notes.join(", "))
}

fn kw_study(name: &str, r0: f64, r1: f64, exact: fn(Complex64) -> f64) -> (bool, String) {
    let base = LogPolarGrid::annulus(r0, r1, 65, 64).unwrap();
    let mut errs = Vec::new();
    let mut slowest = Duration::ZERO;
    let mut converged = true;
    for k in 0..3 {
        let g = base.refined(1 << k);
        let start = Instant::now();
        let p = KwProblem::with_boundary_from(ScalarField::constant(g, 1.0), exact).unwrap();
        let (u, rep) = solve_kw(&p, 1e-10, 50).unwrap();
        slowest = slowest.max(start.elapsed());
        converged &= rep.converged;
        errs.push(g.nodes().map(|(i, j)| (u.at(i, j) - exact(g.point(i, j))).abs()).fold(0.0, f64::max));
    }
    let orders: Vec<f64> = errs.windows(2).map(|w| observed_order(w[0], w[1], 2.0)).collect();
    let ok = converged && slowest < KW_TIME && orders.iter().all(|&o| o >= KW_ORDER);
    (ok, format!("{name} orders {orders:.2?} slowest {slowest:.2?}"))
}

fn criterion_3() -> Outcome {
    let hyperbolic = |z: Complex64| (2.0 / (1.0 - z.norm_sqr())).ln();
    let punctured = |z: Complex64| {
        let r = z.norm();
        -(r * r.ln().abs()).ln()
    };
    let (a, da) = kw_study("disc", 0.05, 0.8, hyperbolic);
    let (b, db) = kw_study("punctured", 1e-3, 0.5, punctured);
    outcome(a && b, format!("{da}; {db}"))
}

fn criterion_4() -> Outcome {
    let names = ["harmonicity", "flatness", "eta-system", "holomorphy", "curvature-nonnegative"];
    let opts = VerifyOptions {
        curvature_floor: CURVATURE_FLOOR,
        min_order: 1.9,
        ..Default::default()
    };
    let mut ok = true;
    let mut failures = Vec::new();
    let mut checked = 0;
    for &name in family_names() {
        let m = family(name, Value::Null);
        if m.sk().is_none() {
            continue;
        }
        let r = verify_family(m.as_ref(), opts).unwrap();
        for inv in r.invariants.iter().filter(|i| names.contains(&i.name)) {
            checked += 1;
            if !inv.passed {
                ok = false;
                failures.push(format!("{name}/{}", inv.name));
            }
        }
    }
    ok &= checked > 0;
    outcome(ok, format!("{checked} checks, failing: {failures:?}"))
}

fn fit_radii(m: &dyn ClosedFormMetric) -> Vec<f64> {
    let r0 = m.info().domain.0;
    log_spaced_radii(r0 * 1e-3, r0, 10)
}

fn criterion_5() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    let mut worst: f64 = 0.0;
    for n in [1.0, 2.0, 3.0, 5.0] {
        let m = family("liouville-zn", json!({ "n": n }));
        let fit = fit_singularity(&|z| m.w(z), &fit_radii(m.as_ref())).unwrap();
        ok &= fit.kind == FitKind::Power;
        worst = worst.max((fit.beta - (1.0 - n)).abs());
        let (lo, hi) = m.info().domain;
        let co = cubic_order(&|z| m.xi0(z).unwrap(), (lo * hi).sqrt()).unwrap();
        ok &= co.order == 0 && check_bound(&fit, co.order);
    }
    ok &= worst <= FIT_TOL;
    notes.push(format!("z^n beta error {worst:.2e}"));

    let rlogr = |z: Complex64| -z.norm() * z.norm().ln();
    let fit = fit_singularity(&rlogr, &log_spaced_radii(1e-6, 1e-2, 10)).unwrap();
    ok &= fit.kind == FitKind::LogType;
    let log = family("log", Value::Null);
    let fit = fit_singularity(&|z| log.w(z), &fit_radii(log.as_ref())).unwrap();
    ok &= fit.kind == FitKind::LogType;
    let (lo, hi) = log.info().domain;
    let co = cubic_order(&|z| log.xi0(z).unwrap(), (lo * hi).sqrt()).unwrap();
    ok &= co.order == -1;
    notes.push(format!("log cubic order {}", co.order));

    for &name in family_names() {
        let m = family(name, Value::Null);
        let Some(n) = m.info().cubic_order else { continue };
        let fit = fit_singularity(&|z| m.w(z), &fit_radii(m.as_ref())).unwrap();
        if !check_bound(&fit, n) {
            ok = false;
            notes.push(format!("{name} bound fails"));
        }
    }
    outcome(ok, notes.join(", "))
}

fn criterion_6() -> Outcome {
    let mut disagreements = Vec::new();
    for k in -12..=12 {
        let beta = k as f64 / 6.0;
        let t = 2.0 * (PI * beta).cos();
        let integral = [-2.0, -1.0, 0.0, 1.0, 2.0].iter().any(|&n: &f64| (t - n).abs() < 1e-9);
        if integral != sp2z_check(beta) {
            disagreements.push(k);
        }
    }
    outcome(disagreements.is_empty(), format!("25 exponents, disagreements at k = {disagreements:?}"))
}

fn criterion_7() -> Outcome {
    let n = 256;
    let mut worst: f64 = 0.0;
    let mut ok = true;
    let mut check = |w: &dyn Fn(Complex64) -> f64, r0: f64, r1: f64| {
        let g = LogPolarGrid::annulus(r0, r1, n + 1, n).unwrap();
        let lhs = gauss_bonnet_bounded(w, g).unwrap().lhs.abs();
        worst = worst.max(lhs);
        ok &= lhs <= GB_TOL;
    };
    check(&|_| 1.0, 0.1, 1.0);
    let flat = family("flat-harmonic", Value::Null);
    let (a, b) = flat.info().domain;
    check(&|z| flat.w(z), a, b);
    check(&|z: Complex64| 4.0 / (1.0 - z.norm_sqr()).powi(2), 0.1, 0.8);
    for k in [1.0, 2.0, 3.0, 5.0] {
        let m = family("liouville-zn", json!({ "n": k }));
        let (a, b) = m.info().domain;
        check(&|z| m.w(z), a, b);
    }

    // β sums by hand: 2·(orders)
    let mut first = vec![ConeDatum::infinity(-3.0)];
    first.extend((0..3).map(|k| ConeDatum::finite(c(k as f64, 0.0), 0.25)));
    let second: Vec<_> = (0..4).map(|k| ConeDatum::finite(c(k as f64, 0.0), -0.5)).collect();
    let third = [ConeDatum::finite(c(0.0, 0.0), -1.5), ConeDatum::finite(c(1.0, 0.0), -1.5)];
    let hand = [(-4.5, false, false), (-4.0, true, true), (-6.0, false, false)];
    let mut budgets_ok = true;
    for (cones, (sum, sat, hyp)) in [&first[..], &second[..], &third[..]].iter().zip(hand) {
        let b = cone_budget(cones);
        budgets_ok &= b.beta_sum == sum && b.satisfied == sat && b.hypothesis_holds == hyp;
    }
    outcome(ok && budgets_ok, format!("max |lhs| {worst:.2e}, budgets match: {budgets_ok}"))
}

fn criterion_8(sym: &P1Family, elapsed: Duration) -> Outcome {
    let mut ok = sym.report.converged;
    let mut worst: f64 = 0.0;
    for j in 0..3 {
        let chk = sym.puncture_check(j).unwrap();
        worst = worst.max((chk.fitted_order - 0.45).abs());
    }
    let inf = sym.fit_infinity().unwrap();
    let inf_err = (0.5 * inf.beta + 3.0).abs();
    ok &= worst <= P1_TOL && inf_err <= P1_TOL;

    let opts = P1Options::default();
    let square = vec![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
    let a = p1_family_construct(&square, &[0.9; 4], opts).unwrap();
    let b = family_perturb(&a, 3, c(0.1, 0.0)).unwrap();
    let d = normalized_difference(&a, &b, &comparison_points()).unwrap();
    ok &= a.report.converged && b.report.converged && d > 10.0 * opts.schwarz_tol;
    outcome(
        ok,
        format!(
            "{} sweeps in {elapsed:.2?}, order error {worst:.2e}, infinity error {inf_err:.2e}, moved family differs by {d:.2e}",
            sym.report.sweeps
        ),
    )
}

fn main() -> ExitCode {
    let total = Instant::now();
    let start = Instant::now();
    let sym = p1_family_construct(&cube_roots(), &[0.9; 3], P1Options::default()).unwrap();
    let sym_time = start.elapsed();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("explicit holonomy", Box::new(criterion_1)),
        ("monodromy classes", Box::new(|| criterion_2(&sym))),
        ("Kazdan-Warner convergence", Box::new(criterion_3)),
        ("structural residuals", Box::new(criterion_4)),
        ("asymptotics", Box::new(criterion_5)),
        ("integral holonomy", Box::new(criterion_6)),
        ("Gauss-Bonnet", Box::new(criterion_7)),
        ("P1 family", Box::new(|| criterion_8(&sym, sym_time))),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        failed += usize::from(!o.passed);
        println!("{tag} {} {name} ({:.2?}): {}", k + 1, start.elapsed(), o.detail);
    }
    println!("{} of {} criteria passed in {:.2?}", criteria.len() - failed, criteria.len(), total.elapsed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
