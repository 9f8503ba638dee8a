use super::*;
use crate::families::{ClosedFormMetric, Liouville, LogFamily, PoincareDerived};
use crate::field::LogPolarGrid;
use crate::sk::connection_from_triple;
use std::f64::consts::PI;

fn origin_loop(r: f64) -> Loop {
    Loop::circle(Complex64::new(0.0, 0.0), r).unwrap()
}

#[test]
fn zero_connection_gives_identity() {
    let m = parallel_transport(&ZeroConnection, &origin_loop(0.5), 1e-10).unwrap();
    assert_eq!(m.matrix, Mat2::IDENTITY);
}

#[test]
fn log_family_matches_closed_form_on_unit_circle() {
    for (a, b) in [(1.0, -1.0), (2.0, -1.0), (1.0, -2.0), (0.0, -1.0)] {
        let f = LogFamily::new(a, b).unwrap();
        let m = parallel_transport(&ClosedFormConnection::of_family(&f).unwrap(), &origin_loop(1.0), 1e-11).unwrap();
        let want = Mat2::new(1.0, -2.0 * a * PI / b, 0.0, 1.0);
        assert!(m.matrix.dist(&want) < 1e-8, "{a} {b}: {:?}", m.matrix);
        // the integrated matrix in the (∂x, ∂y) frame is the transpose pattern
        assert!(m.raw.dist(&Mat2::new(1.0, 0.0, -2.0 * a * PI / b, 1.0)) < 1e-8);
    }
}

#[test]
fn log_family_class_is_radius_independent() {
    let f = LogFamily::new(1.0, -1.0).unwrap();
    let rc = radius_check(&ClosedFormConnection::of_family(&f).unwrap(), Complex64::new(0.0, 0.0), &[0.01, 0.3, 0.9], 1e-10, 1e-6).unwrap();
    assert!(rc.consistent, "{rc:?}");
    assert!(rc.tags.iter().all(|t| *t == MonodromyTag::ParabolicPlus));
}

#[test]
fn poincare_is_parabolic_minus() {
    let p = PoincareDerived::new();
    let m = parallel_transport(&ClosedFormConnection::of_family(&p).unwrap(), &origin_loop(0.05), 1e-10).unwrap();
    let c = classify(&m.matrix, 1e-6).unwrap();
    assert!((m.trace + 2.0).abs() < 1e-8);
    assert!(predicted_class(1.0, true).admits(&c, 1e-6), "{c:?}");
    assert_eq!(c.tag, MonodromyTag::ParabolicMinus);
}

#[test]
fn liouville_power_traces() {
    for n in [0.5, 0.1, 0.3] {
        let f = Liouville::power(n, -1.0).unwrap();
        let m = parallel_transport(&ClosedFormConnection::of_family(&f).unwrap(), &origin_loop(0.3), 1e-10).unwrap();
        let beta = 1.0 - n;
        assert!((m.trace - 2.0 * (PI * beta).cos()).abs() < 1e-7, "n = {n}: {}", m.trace);
        let c = classify(&m.matrix, 1e-6).unwrap();
        assert!(predicted_class(beta, false).admits(&c, 1e-6));
    }
    for (n, tag) in [(2.0, MonodromyTag::MinusIdentity), (3.0, MonodromyTag::Trivial)] {
        let f = Liouville::power(n, -1.0).unwrap();
        let m = parallel_transport(&ClosedFormConnection::of_family(&f).unwrap(), &origin_loop(0.3), 1e-10).unwrap();
        assert_eq!(classify(&m.matrix, 1e-6).unwrap().tag, tag);
    }
}

#[test]
fn contractible_loop_is_trivial() {
    let f = LogFamily::new(1.0, -1.0).unwrap();
    let lp = Loop::circle(Complex64::new(0.5, 0.1), 0.2).unwrap();
    let m = parallel_transport(&ClosedFormConnection::of_family(&f).unwrap(), &lp, 1e-10).unwrap();
    assert!(m.matrix.dist(&Mat2::IDENTITY) < 1e-8);
}

#[test]
fn double_loop_is_square_and_reverse_is_inverse() {
    let f = Liouville::power(0.3, -1.0).unwrap();
    let c = ClosedFormConnection::of_family(&f).unwrap();
    let lp = origin_loop(0.4);
    let once = parallel_transport(&c, &lp, 1e-11).unwrap();
    let twice = parallel_transport_turns(&c, &lp, 2, 1e-11).unwrap();
    assert!(twice.matrix.dist(&(once.matrix * once.matrix)) < 1e-8);
    let back = parallel_transport(&c, &Loop::new(lp.center, lp.radius, -1, 256).unwrap(), 1e-11).unwrap();
    assert!((back.matrix * once.matrix).dist(&Mat2::IDENTITY) < 1e-8);
}

#[test]
fn unimodular_connections_keep_det_one() {
    let f = LogFamily::new(2.0, -1.0).unwrap();
    let m = parallel_transport(&ClosedFormConnection::of_family(&f).unwrap(), &origin_loop(0.2), 1e-9).unwrap();
    assert!((m.det - 1.0).abs() < 1e-8);
}

#[test]
fn interpolated_connection_approximates_closed_form() {
    let f = Liouville::power(0.5, -1.0).unwrap();
    let g = LogPolarGrid::annulus(0.05, 0.6, 129, 128).unwrap();
    let c = connection_from_triple(&f.triple(g).unwrap());
    let m = parallel_transport(&InterpolatedConnection(&c), &origin_loop(0.2), 1e-8).unwrap();
    assert!((m.det - 1.0).abs() < 1e-12);
    assert!(m.trace.abs() < 1e-2, "{}", m.trace);
    assert!(parallel_transport(&InterpolatedConnection(&c), &origin_loop(0.7), 1e-8).is_err());
}

#[test]
fn loop_outside_domain_is_an_error() {
    let f = Liouville::power(1.0, -1.0).unwrap();
    let r = parallel_transport(&ClosedFormConnection::of_family(&f).unwrap(), &origin_loop(1.5), 1e-8);
    assert!(r.is_err());
    assert!(parallel_transport(&ZeroConnection, &origin_loop(1.0), 0.0).is_err());
}
