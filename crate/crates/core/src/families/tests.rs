use super::*;
use crate::sk::{connection_from_triple, flatness_residual_field, gaussian_curvature};
use crate::field::ScalarField;
use proptest::prelude::*;
use std::f64::consts::E;

fn c(x: f64, y: f64) -> Complex64 {
    Complex64::new(x, y)
}

fn all_families() -> Vec<Box<dyn ClosedFormMetric>> {
    vec![
        family_by_name("log", &json!({"A": 1.0, "B": -1.0})).unwrap(),
        family_by_name("log", &json!({"A": 2.0, "B": -1.0})).unwrap(),
        family_by_name("liouville-zn", &json!({"n": 2.0})).unwrap(),
        family_by_name("liouville-zn", &json!({"n": 0.5})).unwrap(),
        family_by_name("poincare", &Value::Null).unwrap(),
        family_by_name("flat-harmonic", &Value::Null).unwrap(),
        family_by_name("flat-harmonic", &json!({"kind": "exp-cos", "c": 1.0})).unwrap(),
    ]
}

#[test]
fn log_family_values() {
    let f = LogFamily::new(0.0, -1.0).unwrap();
    assert_eq!(f.w(c(0.3, 0.1)), 1.0);
    assert_eq!(f.connection(c(0.3, 0.1), [1.0, 0.0]).unwrap(), Mat2::ZERO);
    let f = LogFamily::new(2.0, -4.0).unwrap();
    assert!((f.w(c(1.0 / E, 0.0)) - 6.0).abs() < 1e-12);
    let hol = LogFamily::new(1.0, -1.0).unwrap().info().holonomy.unwrap();
    assert!((hol.0[0][1] - 2.0 * std::f64::consts::PI).abs() < 1e-15);
    assert!(LogFamily::new(-1.0, -1.0).is_err());
    assert!(LogFamily::new(1.0, 0.0).is_err());
}

#[test]
fn liouville_closed_forms() {
    let f = Liouville::power(1.0, -1.0).unwrap();
    let z = c(0.3, -0.4);
    assert!((f.w(z) - 0.5 * (1.0 - z.norm_sqr())).abs() < 1e-14);
    for n in [2.0, 3.0, 5.0] {
        let f = Liouville::power(n, -1.0).unwrap();
        let r: f64 = 0.37;
        let want = r.powf(1.0 - n) * (1.0 - r.powf(2.0 * n)) / (2.0 * n);
        assert!((f.w(Complex64::from_polar(r, 1.1)) - want).abs() < 1e-12 * want);
    }
    let xi = f.xi0(z).unwrap();
    assert!((xi - c(0.0, -0.25)).norm() < 1e-15);
}

#[test]
fn liouville_aux_metric_has_requested_curvature() {
    for (n, kappa) in [(1.0, -1.0), (2.0, -1.0), (3.0, -2.5)] {
        let f = Liouville::power(n, kappa).unwrap();
        let errs: Vec<f64> = [64usize, 128]
            .iter()
            .map(|&m| {
                let g = LogPolarGrid::annulus(0.05, 0.5, m + 1, m).unwrap();
                let w = ScalarField::from_fn(g, |z| f.aux_density(z)).unwrap();
                let k = gaussian_curvature(&w).unwrap();
                g.interior_nodes()
                    .filter(|&(i, _)| (0.1..=0.3).contains(&g.radius(i)))
                    .map(|(i, j)| (k.at(i, j) - kappa).abs())
                    .fold(0.0, f64::max)
            })
            .collect();
        assert!(errs[1] < 1e-3 * kappa.abs(), "{errs:?}");
        assert!(errs[0] / errs[1] > 3.5, "{errs:?}");
    }
}

#[test]
fn liouville_rejects_bad_input() {
    assert!(Liouville::power(2.0, 1.0).is_err());
    assert!(Liouville::power(0.0, -1.0).is_err());
    // |f| reaches 1 inside the default domain for a large scale
    let big = PowerMap { n: 1.0, scale: 3.0 };
    assert!(Liouville::new(Box::new(big), -1.0, (1e-3, 0.8)).is_err());
}

#[test]
fn mobius_derivatives() {
    let m = Mobius { a: c(1.0, 0.0), b: c(0.2, 0.1), c: c(0.3, 0.0), d: c(1.0, 0.0) };
    let z = c(0.1, 0.2);
    let h = 1e-5;
    let fd1 = (m.value(z + h) - m.value(z - h)) / (2.0 * h);
    let fd2 = (m.d1(z + h) - m.d1(z - h)) / (2.0 * h);
    assert!((fd1 - m.d1(z)).norm() < 1e-8);
    assert!((fd2 - m.d2(z)).norm() < 1e-8);
    let l = Liouville::new(Box::new(m), -1.0, (1e-3, 0.5)).unwrap();
    assert!(l.w(z) > 0.0);
}

#[test]
fn poincare_values() {
    let p = PoincareDerived::new();
    assert!((p.w(c(1.0 / E, 0.0)) - 1.0 / E).abs() < 1e-15);
    for r in [1e-3, 0.1, 0.4] {
        let z = Complex64::from_polar(r, 0.7);
        assert!((p.w(z) / (-r * r.ln()) - 1.0).abs() < 1e-14);
    }
}

#[test]
fn flat_harmonic_affine() {
    let f = FlatHarmonic::new(HarmonicKind::Affine { c0: -1.0, cx: -1.0, cy: 0.0 }).unwrap();
    let z = c(0.2, 0.3);
    assert!((f.w(z) - 1.2).abs() < 1e-15);
    assert!((f.xi0(z).unwrap() - c(0.0, 0.25)).norm() < 1e-15);
    let k = FlatHarmonic::new(HarmonicKind::Constant { c: 2.0 }).unwrap();
    assert_eq!(k.xi0(z).unwrap(), c(0.0, 0.0));
    assert!(FlatHarmonic::new(HarmonicKind::Affine { c0: 1.0, cx: 0.0, cy: 0.0 }).is_err());
    // closed-form connection (1/h)[[0,0],[∗dh, dh]]
    let m = f.connection(z, [0.3, -0.7]).unwrap();
    let h = f.h(z);
    let dh = [-1.0, 0.0];
    let star = [-dh[1], dh[0]];
    let want = Mat2::new(0.0, 0.0, (star[0] * 0.3 - star[1] * 0.7) / h, (dh[0] * 0.3 - dh[1] * 0.7) / h);
    assert!(m.dist(&want) < 1e-14);
}

#[test]
fn exp_cos_is_harmonic() {
    let f = FlatHarmonic::new(HarmonicKind::ExpCos { c: 1.0 }).unwrap();
    let t = f.triple(LogPolarGrid::annulus(0.05, 0.5, 65, 64).unwrap()).unwrap();
    assert!(t.harmonicity_residual() < 1e-2);
}

#[test]
fn conical_model_is_model_only() {
    let m = ConicalModel::new(0.0, 1.0).unwrap();
    assert_eq!(m.w(c(0.3, 0.2)), 1.0);
    assert!(m.info().model_only);
    assert!(m.triple(LogPolarGrid::annulus(0.1, 0.5, 8, 8).unwrap()).is_err());
    let m = ConicalModel::new(-6.0, 2.0).unwrap();
    assert!((m.w(c(0.5, 0.0)) - 2.0 * 64.0).abs() < 1e-12);
}

#[test]
fn zn_leading_order_matches_model() {
    for n in [2.0, 3.0] {
        let f = Liouville::power(n, -1.0).unwrap();
        let m = match f.info().singularity.unwrap() {
            Singularity::Power { beta, c } => ConicalModel::new(beta, c).unwrap(),
            _ => panic!(),
        };
        let z = c(1e-4, 0.0);
        assert!((f.w(z) / m.w(z) - 1.0).abs() < 1e-6);
    }
}

#[test]
fn every_family_is_special_kahler_on_its_domain() {
    for f in all_families() {
        let (a, b) = f.info().domain;
        let g = LogPolarGrid::annulus(a, b, 129, 64).unwrap();
        let t = f.triple(g).unwrap();
        let name = &f.info().family;
        let (lo, hi) = (2.0 * a, b / 1.5);
        assert!(t.harmonicity_residual_field().max_abs_within(lo, hi) < 5e-2, "{name}");
        let kw = t.kw_residual_field().max_abs_within(lo, hi);
        assert!(kw < 5e-2, "{name} {kw}");
        let flat = flatness_residual_field(&connection_from_triple(&t)).max_abs_within(lo, hi);
        assert!(flat < 5e-2, "{name} {flat}");
        assert!(crate::sk::gaussian_curvature(&crate::sk::metric_density(&t)).unwrap().min_interior() > -1e-6, "{name}");
    }
}

#[test]
fn registry_metadata() {
    let f = family_by_name("log", &json!({"A": 1.0, "B": -2.0})).unwrap();
    assert_eq!(f.info().metadata_json(), json!({"family": "log", "params": {"A": 1.0, "B": -2.0}, "a": 0.0}));
    assert!(family_by_name("nope", &Value::Null).is_err());
    assert!(family_by_name("log", &json!({"C": 1.0})).is_err());
    for name in family_names() {
        assert!(family_by_name(name, &Value::Null).is_ok(), "{name}");
    }
}

fn fd_grad(f: impl Fn(Complex64) -> f64, z: Complex64) -> [f64; 2] {
    let h = 1e-6 * z.norm();
    [
        (f(z + h) - f(z - h)) / (2.0 * h),
        (f(z + c(0.0, h)) - f(z - c(0.0, h))) / (2.0 * h),
    ]
}

proptest! {
    #[test]
    fn closed_form_gradients_match_differences(r in 0.01f64..0.45, t in 0.0f64..6.28, k in 0usize..7) {
        let fam = &all_families()[k];
        let s = fam.sk().unwrap();
        let z = Complex64::from_polar(r, t);
        let (gu, gh) = (s.grad_u(z), s.grad_h(z));
        let (fu, fh) = (fd_grad(|z| s.u(z), z), fd_grad(|z| s.h(z), z));
        let scale = 1.0 + gu[0].abs() + gu[1].abs() + gh[0].abs() + gh[1].abs();
        for q in 0..2 {
            prop_assert!((gu[q] - fu[q]).abs() < 1e-6 * scale);
            prop_assert!((gh[q] - fh[q]).abs() < 1e-6 * scale);
        }
        prop_assert!((fam.w(z) - (-s.u(z)).exp()).abs() < 1e-12 * fam.w(z));
    }

    #[test]
    fn metric_positive_and_trace_condition(r in 0.001f64..0.45, t in 0.0f64..6.28, k in 0usize..7) {
        let fam = &all_families()[k];
        let s = fam.sk().unwrap();
        let z = Complex64::from_polar(r, t);
        prop_assert!(fam.w(z) > 0.0);
        let (a, b, du) = (s.omega11(z), s.omega22(z), s.grad_u(z));
        let scale = 1.0 + du[0].abs() + du[1].abs();
        prop_assert!((a[0] + b[0] + du[0]).abs() < 1e-13 * scale);
        prop_assert!((a[1] + b[1] + du[1]).abs() < 1e-13 * scale);
    }
}

