use num_complex::Complex64;
use orbit_bergman::Point;
use orbit_bergman::bergman::{BergmanElement, Direction, basis_scale, cayley_transport};
use orbit_bergman::groups::GroupPreset;
use orbit_bergman::moebius::{GroupElement, Letter};
use orbit_bergman::poincare::*;

fn hp(x: f64, y: f64) -> Point {
    Point::half_plane(Complex64::new(x, y)).unwrap()
}

fn e0_transported(s: f64) -> impl Fn(Complex64) -> Complex64 + Sync {
    let b = basis_scale(0, s);
    let ev = cayley_transport(Box::new(move |_| Complex64::new(b, 0.0)), s, Direction::DiscToHalfPlane)
        .unwrap();
    move |z| ev(z)
}

#[test]
fn zero_function_gives_zero_sums() {
    let orbit = GroupPreset::psl2z().orbit(hp(0.1, 1.3), 10).unwrap();
    let r = poincare_sums(&|_| Complex64::new(0.0, 0.0), hp(0.1, 1.3), 2.5, &orbit).unwrap();
    assert_eq!(r.absolute, 0.0);
    assert_eq!(r.holomorphic, Complex64::new(0.0, 0.0));
}

#[test]
fn absolute_sum_grows_with_budget() {
    let xi = e0_transported(2.5);
    let z = hp(0.13, 1.21);
    let mut last = 0.0;
    for n in [5, 10, 20, 40] {
        let orbit = GroupPreset::psl2z().orbit(z, n).unwrap();
        let r = poincare_sums(&xi, z, 2.5, &orbit).unwrap();
        assert!(r.absolute > last);
        assert!(r.last_shell >= 0.0 && r.last_shell <= r.absolute);
        last = r.absolute;
    }
}

#[test]
fn completed_sum_is_invariant_under_t_within_indicator() {
    let s = 2.5;
    let xi = e0_transported(s);
    let preset = GroupPreset::psl2z();
    let z = hp(0.21, 1.37);
    let tz = hp(1.21, 1.37);
    let n = 120;
    let a = poincare_sums(&xi, z, s, &preset.orbit(z, n).unwrap()).unwrap();
    let b = poincare_sums(&xi, tz, s, &preset.orbit(tz, n).unwrap()).unwrap();
    let y = z.value().im.powf(s);
    let diff = (y * a.absolute - y * b.absolute).abs();
    let indicator = y * (a.tail_estimate + b.tail_estimate);
    assert!(diff <= indicator, "diff {diff:e} indicator {indicator:e}");
    assert!(a.converged && b.converged);
}

#[test]
fn transported_constant_is_not_tracelike() {
    let s = 2.5;
    let xi = e0_transported(s);
    let samples = [hp(0.1, 1.2), hp(-0.3, 2.1)];
    let preset = GroupPreset::psl2z();
    let r = tracelike_deviation(&xi, s, &samples, &preset, 120).unwrap();
    assert!(r.deviation > 1e-3, "{}", r.deviation);
    assert!(r.constant > 0.0);
    let xi2 = |z| 2.0 * xi(z);
    let r2 = tracelike_deviation(&xi2, s, &samples, &preset, 120).unwrap();
    assert!((r2.deviation - r.deviation).abs() < 1e-12);
    assert!(matches!(
        tracelike_deviation(&|_| Complex64::new(0.0, 0.0), s, &samples, &preset, 20),
        Err(PoincareError::ZeroVector)
    ));
    assert!(matches!(
        tracelike_deviation(&xi, s, &samples, &preset, 4),
        Err(PoincareError::Unconverged { .. })
    ));
    assert!(tracelike_deviation(&xi, s, &samples[..1], &preset, 20).is_err());
}

#[test]
fn gram_matrix_basics() {
    let s = 2.5;
    let e0 = BergmanElement::basis(s, 0, 0).unwrap();
    let g = gram_matrix(&e0, &[GroupElement::identity()], s).unwrap();
    assert_eq!(g.matrix.len(), 1);
    assert!((g.matrix[0][0].re - 1.0).abs() < 1e-14);

    let taylor: Vec<Complex64> =
        (0..8).map(|k| Complex64::new(1.0 / (k + 1) as f64, 0.3 * k as f64 / 8.0)).collect();
    let xi = BergmanElement::from_taylor(s, &taylor).unwrap().resized(8);
    let elems = vec![
        GroupElement::identity(),
        GroupElement::s(),
        GroupElement::t(),
        GroupElement::generator(Letter::TInv),
    ];
    let g = gram_matrix_with(&xi, &elems, s, 200).unwrap();
    let n2 = xi.norm_sqr();
    for i in 0..elems.len() {
        assert!((g.matrix[i][i].re - n2).abs() < 1e-6 * n2, "diag {i}");
        for j in 0..elems.len() {
            assert!((g.matrix[i][j] - g.matrix[j][i].conj()).norm() < 1e-14);
        }
    }
    assert!(g.is_psd());
    let h = gram_matrix_with(&xi.scaled(Complex64::new(0.0, 3.0)), &elems, s, 200).unwrap();
    assert!((h.wandering_deviation - g.wandering_deviation).abs() < 1e-10);
    assert!(matches!(
        gram_matrix_with(&xi, &elems[1..], s, 50),
        Err(PoincareError::MissingIdentity)
    ));
}
