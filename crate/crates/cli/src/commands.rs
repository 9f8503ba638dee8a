use std::fs::{self, File};
use std::io::{BufWriter, Read};
use std::path::Path;

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use sk2d::asymptotics::{check_bound, cubic_order, fit_singularity, log_spaced_radii};
use sk2d::families::{family_by_name, ClosedFormMetric};
use sk2d::field::{LogPolarGrid, Loop, ScalarField};
use sk2d::holonomy::{classify as classify_matrix, parallel_transport, predicted_class, ClosedFormConnection};
use sk2d::kw::{solve_kw_with, KwProblem, SolveOptions};
use sk2d::p1::{cone_budget, gauss_bonnet_bounded, p1_family_construct, ConeDatum, P1Options};
use sk2d::sk::{connection_from_triple, cubic_form};
use sk2d::verify::{holonomy_radius, verify_family, window, VerifyOptions};
use sk2d::Mat2;

use crate::args::*;
use crate::output::{document, emit, out_dir, CliError, CliResult};

fn build(f: &FamilyArgs) -> CliResult<Box<dyn ClosedFormMetric>> {
    let mut params = match &f.params {
        None => Map::new(),
        Some(s) => match serde_json::from_str::<Value>(s) {
            Ok(Value::Object(m)) => m,
            Ok(_) => return Err(CliError::Validation("--params must be a JSON object".into())),
            Err(e) => return Err(CliError::Validation(format!("--params: {e}"))),
        },
    };
    for (key, v) in [
        ("A", f.a_coef),
        ("B", f.b_coef),
        ("K", f.k),
        ("n", f.n),
        ("a", f.a),
        ("beta", f.beta),
        ("C", f.c),
    ] {
        if let Some(v) = v {
            params.insert(key.into(), json!(v));
        }
    }
    Ok(family_by_name(&f.family, &Value::Object(params))?)
}

fn grid(m: &dyn ClosedFormMetric, g: &GridArgs, default_n: usize) -> CliResult<LogPolarGrid> {
    let (d0, d1) = m.info().domain;
    let nt = g.ntheta.unwrap_or(default_n);
    let nr = g.nrho.unwrap_or(nt + 1);
    let (r0, r1) = (g.rmin.unwrap_or(d0), g.rmax.unwrap_or(d1));
    if r1 >= m.info().max_radius {
        return Err(CliError::Validation(format!(
            "--rmax {r1} reaches the edge of the structure at {}",
            m.info().max_radius
        )));
    }
    Ok(LogPolarGrid::annulus(r0, r1, nr, nt)?)
}

fn require_sk(m: &dyn ClosedFormMetric) -> CliResult<()> {
    if m.sk().is_none() {
        return Err(CliError::Validation(format!(
            "{} is a model metric without harmonic data",
            m.info().family
        )));
    }
    Ok(())
}

fn csv_file(dir: &Path, name: &str) -> CliResult<BufWriter<File>> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

pub fn family(a: &FamilyCmd) -> CliResult<()> {
    let m = build(&a.family)?;
    let g = grid(m.as_ref(), &a.grid, 64)?;
    let mut files = Vec::new();
    if let Some(dir) = out_dir(&a.output)? {
        ScalarField::from_fn(g, |z| m.w(z))?.write_csv(csv_file(&dir, "w.csv")?)?;
        ScalarField::from_fn(g, |z| m.potential(z))?.write_csv(csv_file(&dir, "u.csv")?)?;
        files.extend(["w.csv", "u.csv"]);
        if m.sk().is_some() {
            let t = m.triple(g)?;
            let conn = connection_from_triple(&t);
            conn.omega11.write_csv(csv_file(&dir, "omega11.csv")?)?;
            conn.omega22.write_csv(csv_file(&dir, "omega22.csv")?)?;
            cubic_form(&t)?.xi0.write_csv(csv_file(&dir, "xi0.csv")?)?;
            files.extend(["omega11.csv", "omega22.csv", "xi0.csv"]);
        }
    }
    let doc = document(json!({
        "family": m.info().metadata_json(),
        "info": m.info(),
        "grid": { "r_min": g.r_min(), "r_max": g.r_max(), "n_rho": g.n_rho(), "n_theta": g.n_theta() },
        "files": files,
    }))?;
    emit(&a.output, &doc, true)
}

pub fn solve_kw(a: &SolveKwCmd) -> CliResult<()> {
    let m = build(&a.family)?;
    require_sk(m.as_ref())?;
    let g = grid(m.as_ref(), &a.grid, 64)?;
    let src = m.triple(g)?.source();
    let q = ScalarField::new(g, src.components().iter().map(|[x, y]| x * x + y * y).collect())?;
    let mut prob = KwProblem::with_boundary_from(q, |z| m.potential(z))?;
    if a.inner == InnerKind::Cone {
        let gamma = a
            .gamma
            .ok_or_else(|| CliError::Validation("solve-kw: --inner cone needs --gamma".into()))?;
        prob = prob.with_cone_inner(gamma)?;
    }
    let opts = SolveOptions {
        tol: a.rtol,
        max_iter: a.max_iter,
        ..Default::default()
    };
    let (u, report) = solve_kw_with(&prob, opts)?;
    let max_error = g
        .interior_nodes()
        .map(|(i, j)| (u.at(i, j) - m.potential(g.point(i, j))).abs())
        .fold(0.0, f64::max);
    if let Some(dir) = out_dir(&a.output)? {
        u.write_csv(csv_file(&dir, "u.csv")?)?;
    }
    let converged = report.converged;
    let doc = document(json!({
        "family": m.info().metadata_json(),
        "grid": { "r_min": g.r_min(), "r_max": g.r_max(), "n_rho": g.n_rho(), "n_theta": g.n_theta() },
        "converged": converged,
        "iterations": report.iterations,
        "final_residual": report.final_residual,
        "max_error": max_error,
        "report": report,
    }))?;
    emit(&a.output, &doc, true)?;
    if !converged {
        return Err(CliError::NonConvergence(format!(
            "Newton residual {:.3e} above {:.1e}",
            doc["final_residual"].as_f64().unwrap_or(f64::NAN),
            a.rtol
        )));
    }
    Ok(())
}

pub fn holonomy(a: &HolonomyCmd) -> CliResult<()> {
    let m = build(&a.family)?;
    require_sk(m.as_ref())?;
    let r = a.radius.unwrap_or_else(|| holonomy_radius(m.as_ref()));
    let conn = ClosedFormConnection::of_family(m.as_ref())?;
    let hol = parallel_transport(&conn, &Loop::circle(Complex64::new(0.0, 0.0), r)?, a.rtol)?;
    let doc = document(json!({
        "family": m.info().metadata_json(),
        "radius": r,
        "matrix": hol.matrix,
        "raw": hol.raw,
        "det": hol.det,
        "trace": hol.trace,
        "steps": hol.steps,
        "expected": m.info().holonomy,
    }))?;
    emit(&a.output, &doc, false)
}

fn read_matrix(path: &Path) -> CliResult<Mat2> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text)?;
    } else {
        text = fs::read_to_string(path)?;
    }
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    let m = v.get("matrix").unwrap_or(&v);
    serde_json::from_value(m.clone())
        .map_err(|e| CliError::Validation(format!("{}: no 2×2 \"matrix\" entry ({e})", path.display())))
}

pub fn classify(a: &ClassifyCmd) -> CliResult<()> {
    let m = match (&a.input, &a.matrix) {
        (Some(p), _) => read_matrix(p)?,
        (None, Some(v)) if v.len() == 4 => Mat2::new(v[0], v[1], v[2], v[3]),
        (None, Some(v)) => {
            return Err(CliError::Validation(format!("--matrix needs 4 entries, got {}", v.len())))
        }
        (None, None) => return Err(CliError::Validation("classify: give --input or --matrix".into())),
    };
    let class = classify_matrix(&m, a.rtol)?;
    let mut body = json!({
        "matrix": m,
        "tag": class.tag.as_str(),
        "trace": class.trace,
        "beta_mod2": class.beta_mod2,
        "beta_candidates": class.beta_candidates,
    });
    if let Some(beta) = a.beta {
        let pred = predicted_class(beta, false);
        body["admitted"] = json!(pred.admits(&class, a.rtol));
        body["predicted"] = json!(pred);
    }
    emit(&a.output, &document(body)?, false)
}

pub fn asymptotics(a: &AsymptoticsCmd) -> CliResult<()> {
    let m = build(&a.family)?;
    let info = m.info();
    let r_max = a.rmax.unwrap_or(info.domain.0);
    let r_min = a.rmin.unwrap_or(r_max * 1e-3);
    let radii = log_spaced_radii(r_min, r_max, a.count);
    let fit = fit_singularity(&|z| m.w(z), &radii)?;
    let mut body = json!({
        "family": info.metadata_json(),
        "radii": [r_min, r_max],
        "kind": fit.kind,
        "beta": fit.beta,
        "N": fit.n,
        "fit": fit,
    });
    if m.sk().is_some() {
        let (lo, hi) = window(info.domain);
        let r0 = a.radius.unwrap_or((lo * hi).sqrt());
        match cubic_order(&|z| m.xi0(z).unwrap_or_default(), r0) {
            Ok(co) => {
                body["bound"] = json!(check_bound(&fit, co.order));
                body["cubic_order"] = json!(co);
            }
            Err(e) => body["cubic_order_error"] = json!(e.to_string()),
        }
    }
    emit(&a.output, &document(body)?, false)
}

fn parse_cone(s: &str, k: usize) -> CliResult<ConeDatum> {
    let bad = |e: std::num::ParseFloatError| CliError::Validation(format!("cone order '{s}': {e}"));
    Ok(match s.trim().strip_prefix("inf:") {
        Some(rest) => ConeDatum::infinity(rest.parse().map_err(bad)?),
        None => ConeDatum::finite(Complex64::new(k as f64, 0.0), s.trim().parse().map_err(bad)?),
    })
}

pub fn gauss_bonnet(a: &GaussBonnetCmd) -> CliResult<()> {
    let mut body = json!({});
    if let Some(name) = &a.family {
        let fa = FamilyArgs {
            family: name.clone(),
            a_coef: a.a_coef,
            b_coef: a.b_coef,
            k: a.k,
            n: a.n,
            a: None,
            beta: None,
            c: None,
            params: a.params.clone(),
        };
        let m = build(&fa)?;
        let g = grid(m.as_ref(), &a.grid, 256)?;
        let gb = gauss_bonnet_bounded(&|z| m.w(z), g)?;
        body["family"] = m.info().metadata_json();
        body["grid"] = json!({ "r_min": g.r_min(), "r_max": g.r_max(), "n_rho": g.n_rho(), "n_theta": g.n_theta() });
        body["lhs"] = json!(gb.lhs);
        body["rhs"] = json!(gb.rhs);
        body["gauss_bonnet"] = json!(gb);
    }
    if let Some(orders) = &a.orders {
        let cones = orders
            .iter()
            .enumerate()
            .map(|(k, s)| parse_cone(s, k))
            .collect::<CliResult<Vec<_>>>()?;
        let b = cone_budget(&cones);
        body["beta_sum"] = json!(b.beta_sum);
        body["satisfied"] = json!(b.satisfied);
        body["cone_budget"] = json!(b);
    }
    emit(&a.output, &document(body)?, false)
}

fn parse_punctures(arg: &str) -> CliResult<Vec<Complex64>> {
    let path = Path::new(arg);
    if path.exists() {
        let text = fs::read_to_string(path)?;
        let pts: Vec<[f64; 2]> = serde_json::from_str(&text)
            .map_err(|e| CliError::Validation(format!("{arg}: expected a list of [x, y] pairs ({e})")))?;
        return Ok(pts.into_iter().map(|[x, y]| Complex64::new(x, y)).collect());
    }
    arg.split(';')
        .map(|p| {
            let v: Vec<f64> = p
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::Validation(format!("puncture '{p}': {e}")))?;
            match v[..] {
                [x, y] => Ok(Complex64::new(x, y)),
                _ => Err(CliError::Validation(format!("puncture '{p}' is not x,y"))),
            }
        })
        .collect()
}

pub fn p1(a: &P1Cmd) -> CliResult<()> {
    let pos = parse_punctures(&a.punctures)?;
    let mut alphas = match (&a.alphas, &a.orders) {
        (Some(al), _) => al.clone(),
        (None, Some(o)) => o.iter().map(|x| 2.0 * x).collect(),
        (None, None) => return Err(CliError::Validation("p1: give --orders or --alphas".into())),
    };
    if alphas.len() == 1 {
        alphas = vec![alphas[0]; pos.len()];
    }
    let opts = P1Options {
        n_theta: a.ntheta,
        schwarz_tol: a.rtol,
        ..Default::default()
    };
    let fam = p1_family_construct(&pos, &alphas, opts)?;
    if let Some(dir) = out_dir(&a.output)? {
        for (k, p) in fam.patches.iter().enumerate() {
            p.u.write_csv(csv_file(&dir, &format!("patch_{k}.csv"))?)?;
        }
    }
    let doc = document(fam.summary()?)?;
    emit(&a.output, &doc, true)
}

pub fn verify(a: &VerifyCmd) -> CliResult<()> {
    let m = build(&a.family)?;
    let report = verify_family(m.as_ref(), VerifyOptions::default())?;
    let passed = report.passed;
    let doc = document(&report)?;
    emit(&a.output, &doc, false)?;
    if !a.output.json {
        for inv in &report.invariants {
            println!("{:<22} {}", inv.name, if inv.passed { "pass" } else { "FAIL" });
        }
    }
    if !passed {
        let failed: Vec<&str> = report.invariants.iter().filter(|i| !i.passed).map(|i| i.name).collect();
        return Err(CliError::Other(format!("invariants failed: {}", failed.join(", "))));
    }
    Ok(())
}
