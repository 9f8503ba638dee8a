use super::*;
use crate::families::{ClosedFormMetric, Liouville};
use crate::refinement::RefinementStudy;
use std::f64::consts::{PI, TAU};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cube_roots() -> Vec<Complex64> {
    (0..3).map(|k| Complex64::from_polar(1.0, TAU * k as f64 / 3.0)).collect()
}

#[test]
fn budget_examples() {
    let mut cones = vec![ConeDatum::infinity(-3.0)];
    cones.extend((0..3).map(|k| ConeDatum::finite(c(k as f64, 0.0), 0.25)));
    let b = cone_budget(&cones);
    assert_eq!(b.beta_sum, -4.5);
    assert!(!b.satisfied);
    assert!(!b.hypothesis_holds);
    assert!(b.notes.iter().any(|n| n.contains("−3")));

    let b = cone_budget(&(0..4).map(|k| ConeDatum::finite(c(k as f64, 0.0), -0.5)).collect::<Vec<_>>());
    assert_eq!(b.beta_sum, -4.0);
    assert!(b.satisfied);
    assert!(b.hypothesis_holds);

    let b = cone_budget(&[ConeDatum::finite(c(0.0, 0.0), -1.5), ConeDatum::finite(c(1.0, 0.0), -1.5)]);
    assert_eq!(b.beta_sum, -6.0);
    assert!(!b.hypothesis_holds);
    assert_eq!(b.notes.len(), 2);
}

#[test]
fn gauss_bonnet_flat_is_exact() {
    let g = LogPolarGrid::annulus(0.1, 0.9, 33, 32).unwrap();
    let gb = gauss_bonnet_bounded(&|_| 1.0, g).unwrap();
    assert!(gb.lhs.abs() < 1e-12);
    assert!((gb.outer_boundary - TAU).abs() < 1e-12);
}

fn gb_study(w: &dyn Fn(Complex64) -> f64, r0: f64, r1: f64) -> RefinementStudy {
    let base = LogPolarGrid::annulus(r0, r1, 17, 16).unwrap();
    RefinementStudy::run(base, 4, |g| Ok(gauss_bonnet_bounded(w, g)?.lhs.abs())).unwrap()
}

#[test]
fn gauss_bonnet_converges() {
    let hyp = |z: Complex64| 4.0 / (1.0 - z.norm_sqr()).powi(2);
    let s = gb_study(&hyp, 0.1, 0.8);
    assert!(s.converges(1.0, 1e-12), "{:?}", s.orders);
    let f = Liouville::power(2.0, -1.0).unwrap();
    let w = |z: Complex64| f.w(z);
    let s = gb_study(&w, 0.1, 0.8);
    assert!(s.converges(1.0, 1e-12), "{:?}", s.orders);
    // not rotationally symmetric
    let bumpy = |z: Complex64| (z.re + 0.3 * z.im * z.im).exp();
    let s = gb_study(&bumpy, 0.2, 1.0);
    assert!(s.converges(1.0, 1e-12), "{:?}", s.orders);
}

#[test]
fn gauss_bonnet_rejects_nonpositive() {
    let g = LogPolarGrid::annulus(0.1, 0.9, 17, 16).unwrap();
    assert!(matches!(gauss_bonnet_bounded(&|z| z.re, g), Err(Error::Domain(_))));
}

#[test]
fn picard_condition_enforced() {
    let r = p1_family_construct(&cube_roots(), &[0.5; 3], P1Options::default());
    assert!(matches!(r, Err(Error::Domain(_))));
    let r = p1_family_construct(&cube_roots(), &[1.0, 0.9, 0.9], P1Options::default());
    assert!(matches!(r, Err(Error::Domain(_))));
    let r = p1_family_construct(&cube_roots()[..2], &[0.9; 2], P1Options::default());
    assert!(r.is_err());
}

#[test]
fn symmetric_three_punctures() {
    let fam = p1_family_construct(&cube_roots(), &[0.9; 3], P1Options::default()).unwrap();
    assert_eq!(fam.moduli_dim, 3);
    let s = fam.summary().unwrap();
    eprintln!("{}", serde_json::to_string_pretty(&s).unwrap());
    for p in &s.puncture_checks {
        assert!((p.fitted_order - 0.45).abs() < 5e-2, "{p:?}");
        assert!((p.holonomy_trace - 2.0 * (0.9 * PI).cos()).abs() < 5e-2, "{p:?}");
    }
    assert!((s.infinity_order + 3.0).abs() < 5e-2);
}

fn square() -> Vec<Complex64> {
    vec![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)]
}

#[test]
fn four_punctures_move_in_moduli() {
    let opts = P1Options::default();
    let a = p1_family_construct(&square(), &[0.9; 4], opts).unwrap();
    assert_eq!(a.moduli_dim, 6);
    let same = family_perturb(&a, 3, c(0.0, 0.0)).unwrap();
    let d0 = normalized_difference(&a, &same, &comparison_points()).unwrap();
    let b = family_perturb(&a, 3, c(0.1, 0.0)).unwrap();
    let d1 = normalized_difference(&a, &b, &comparison_points()).unwrap();
    eprintln!("zero move {d0:e}, moved {d1:e}");
    assert!(d0 < 1e-12);
    assert!(d1 > 10.0 * opts.schwarz_tol);
    // well above the discretization level seen in the three-puncture case
    assert!(d1 > 5e-3);
}

#[test]
fn three_punctures_normalize_back() {
    let a = p1_family_construct(&cube_roots(), &[0.9; 3], P1Options::default()).unwrap();
    let b = family_perturb(&a, 2, c(0.2, -0.1)).unwrap();
    let d = normalized_difference(&a, &b, &comparison_points()).unwrap();
    eprintln!("three-puncture normalized difference {d:e}");
    assert!(d < 5e-3);
}

