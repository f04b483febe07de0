use num_complex::Complex64;
use orbit_bergman::Point;
use orbit_bergman::bergman::kernel_raw;
use orbit_bergman::groups::GroupPreset;
use orbit_bergman::moebius::{GroupElement, apply_moebius, to_disc};
use orbit_bergman::zero_lab::*;
use proptest::prelude::*;

fn disc(x: f64, y: f64) -> Point {
    Point::disc(Complex64::new(x, y)).unwrap()
}

#[test]
fn no_constraints_gives_the_kernel_diagonal() {
    for s in [2.0, 3.5, 13.0] {
        let z = disc(0.3, -0.4);
        let v = extremal_value(s, z, &[]).unwrap();
        let expected = (s - 1.0) / (4.0 * std::f64::consts::PI) * (1.0f64 - 0.25).powf(-s);
        assert!((v.value - expected).abs() < 1e-12 * expected);
        assert!(!v.coincident);
    }
}

#[test]
fn self_interpolation_is_zero() {
    let z = disc(0.1, 0.2);
    let v = extremal_value(4.0, z, &[disc(-0.5, 0.0), z]).unwrap();
    assert_eq!(v.value, 0.0);
    assert!(v.coincident);
}

#[test]
fn two_point_closed_form() {
    // λ = K(z,z) (1 - |K̂(p, z)|²) for one constraint.
    let (s, z, p) = (3.0, Complex64::new(0.2, 0.1), Complex64::new(-0.4, 0.3));
    let v = extremal_value(s, Point::disc(z).unwrap(), &[Point::disc(p).unwrap()]).unwrap();
    let kzz = kernel_raw(s, z, z).re;
    let kpp = kernel_raw(s, p, p).re;
    let kpz = kernel_raw(s, p, z).norm_sqr();
    let expected = kzz - kpz / kpp;
    assert!((v.value - expected).abs() < 1e-12 * kzz);
}

#[test]
fn profiles_are_monotone_and_separate_the_weights() {
    let p = GroupPreset::psl2z();
    let z = Point::half_plane(Complex64::new(0.0, 2.0)).unwrap();
    let profiles = extremal_profile(&p, z, disc(0.0, 0.0), &[12.0, 14.0], 30, Some(512)).unwrap();
    for pr in &profiles {
        assert!((pr.values[0] - (pr.s - 1.0) / (4.0 * std::f64::consts::PI)).abs() < 1e-14);
        assert!(pr.values.windows(2).all(|w| w[1] <= w[0] && w[1] >= 0.0));
        assert_eq!(pr.values.len(), 513);
    }
    let (l12, l14) = (profiles[0].values[512], profiles[1].values[512]);
    assert!(l14 > 100.0 * l12, "{l14:e} vs {l12:e}");
    let d12 = decay_summary(&profiles[0]);
    assert!(d12.relative_drop > 0.5, "{}", d12.relative_drop);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn extremal_ratio_is_invariant_under_the_group(
        a in -3i64..3, k in -2i64..3,
        xs in proptest::collection::vec((-0.5f64..0.5, -0.5f64..0.5), 1..6),
    ) {
        // g = T^k S T^a, an automorphism conjugated to the disc.
        let t = GroupElement::t();
        let pow = |e: &GroupElement, n: i64| -> GroupElement {
            let base = if n < 0 { e.inverse() } else { e.clone() };
            (0..n.abs()).fold(GroupElement::identity(), |acc, _| &acc * &base)
        };
        let g = &(&pow(&t, k) * &GroupElement::s()) * &pow(&t, a);
        let s = 5.5;
        let zs = disc(0.05, -0.1);
        let pts: Vec<Point> = xs.iter().map(|&(x, y)| disc(x, y)).collect();
        let mv = |p: Point| to_disc(apply_moebius(&g, p.as_half_plane().unwrap()).unwrap()).unwrap();
        let before = extremal_value(s, zs, &pts).unwrap();
        let moved: Vec<Point> = pts.iter().map(|&p| mv(p)).collect();
        let after = extremal_value(s, mv(zs), &moved).unwrap();
        let kb = kernel_raw(s, zs.value(), zs.value()).re;
        let ka = kernel_raw(s, mv(zs).value(), mv(zs).value()).re;
        prop_assert!((before.value / kb - after.value / ka).abs() < 1e-8);
    }
}

#[test]
fn magnus_labels_on_the_gamma2_orbit() {
    let z0 = vanishing_base_point(2000.0).unwrap();
    let pts = ordered_orbit(z0, 25, 30).unwrap();
    assert_eq!(pts.len(), 25);
    assert_eq!(pts.iter().filter(|p| p.sign == 0).count(), 1);
    assert!(pts[0].element.is_identity());
    for p in &pts {
        if let Some(q) = pts.iter().find(|q| q.element == p.element.inverse()) {
            assert_eq!(q.sign, -p.sign, "{} vs {}", p.word, q.word);
        }
    }
}

#[test]
fn wandering_candidate_satisfies_its_constraints() {
    let f = TransportedVanishing::new(2000.0, 2.0, 1.5).unwrap();
    assert!((f.weight() - 14.5).abs() < 1e-15);
    let z0 = vanishing_base_point(2000.0).unwrap();
    let w0 = z0.as_disc().unwrap().value();
    assert!(f.eval_disc(w0).unwrap().norm() < 1e-10);
    let pts = ordered_orbit(z0, 10, 30).unwrap();
    let c = wandering_truncated(&pts, &f, 40).unwrap();
    assert!(c.constraint_residual < 1e-10);
    assert!((c.candidate.norm() - 1.0).abs() < 1e-12);
    assert!(c.constraint_count >= 1);
    assert!(c.gram.is_psd());
    assert!(c.gram.wandering_deviation < 1e-4);
    // Off the constraint points the candidate does not vanish at the base.
    assert!(c.candidate.eval(w0).norm() > 1e-3);
    assert!(matches!(wandering_truncated(&pts, &f, 0), Err(ZeroLabError::NoCandidate)));
}
