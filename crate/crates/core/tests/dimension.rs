use num_complex::Complex64;
use num_rational::Ratio;
use orbit_bergman::Point;
use orbit_bergman::bergman::QuadratureSpec;
use orbit_bergman::dimension::*;
use orbit_bergman::groups::GroupPreset;
use proptest::prelude::*;

fn spec() -> QuadratureSpec {
    QuadratureSpec { radial_order: 24, angular_points: 24, subdivision_depth: 8, ..Default::default() }
}

#[test]
fn closed_form_values() {
    let p = GroupPreset::psl2z();
    let g = GroupPreset::gamma2();
    let r = |a: i64, b: i64| Ratio::new(a, b);
    assert_eq!(vn_dimension_exact(r(13, 1), &p).unwrap(), r(1, 1));
    assert_eq!(vn_dimension_exact(r(3, 1), &p).unwrap(), r(1, 6));
    assert_eq!(vn_dimension_exact(r(2, 1), &g).unwrap(), r(1, 2));
    assert_eq!(critical_exponent(&p), r(13, 1));
    assert_eq!(critical_exponent(&g), r(3, 1));
    assert_eq!(vn_dimension_exact(critical_exponent(&g), &g).unwrap(), r(1, 1));
    assert!(vn_dimension(1.0, &p).is_err());
    assert!(vn_dimension_exact(r(1, 2), &p).is_err());
    assert!((vn_dimension(3.0, &p).unwrap() - 1.0 / 6.0).abs() < 1e-15);
}

proptest! {
    #[test]
    fn index_six_relation(num in 2i64..400, den in 1i64..20) {
        let s = Ratio::new(num, den);
        prop_assume!(s > Ratio::from_integer(1));
        let a = vn_dimension_exact(s, &GroupPreset::psl2z()).unwrap();
        let b = vn_dimension_exact(s, &GroupPreset::gamma2()).unwrap();
        prop_assert_eq!(b, a * 6);
    }
}

#[test]
fn numeric_dimension_at_three() {
    let p = GroupPreset::psl2z();
    let r = vn_dimension_numeric(3.0, &p, 400, &spec()).unwrap();
    assert!(r.partial_sums.windows(2).all(|w| w[1] >= w[0]));
    assert!((r.total() / r.formula - 1.0).abs() < 0.01, "{}", r.total());
    assert!(r.total() < r.formula);
    assert_eq!(r.unresolved_panels, 0);
    // e_0 alone: β_0² ∫_F u^s dμ₀ is a fixed fraction well below the total.
    assert!(r.partial_sums[0] > 0.0 && r.partial_sums[0] < r.formula);
}

#[test]
fn numeric_dimension_at_critical_weight_approaches_one_from_below() {
    let p = GroupPreset::psl2z();
    let small = vn_dimension_numeric(13.0, &p, 100, &spec()).unwrap();
    let big = vn_dimension_numeric(13.0, &p, 800, &spec()).unwrap();
    assert!(small.total() < big.total() && big.total() < 1.0);
    assert!(big.total() > 0.97, "{}", big.total());
}

#[test]
fn numeric_dimension_rejects_bad_input() {
    assert!(matches!(
        vn_dimension_numeric(3.0, &GroupPreset::gamma2(), 10, &spec()),
        Err(DimensionError::UnsupportedPreset(_))
    ));
    let coarse = QuadratureSpec { cusp_cutoff: 0.5, ..spec() };
    assert!(matches!(
        vn_dimension_numeric(3.0, &GroupPreset::psl2z(), 10, &coarse),
        Err(DimensionError::CuspTail { .. })
    ));
}

#[test]
fn densities_of_the_three_orbit_types() {
    let p = GroupPreset::psl2z();
    let cases = [
        (Complex64::new(0.0, 2.0), 6.0),
        (Complex64::new(0.0, 1.0), 3.0),
        (Complex64::new(0.5, 0.75f64.sqrt()), 2.0),
    ];
    let mut slopes = Vec::new();
    for (z, target) in cases {
        let d = density_for(&p, Point::half_plane(z).unwrap(), 150, 3.0, 10).unwrap();
        assert!((d.target - target).abs() < 1e-12);
        assert!((d.slope / target - 1.0).abs() < 0.1, "z={z} slope={}", d.slope);
        assert!(d.partial_sums.windows(2).all(|w| w[1] >= w[0]));
        slopes.push(d.slope);
    }
    assert!(slopes[0] > slopes[1] && slopes[1] > slopes[2]);
}

#[test]
fn blaschke_sums_keep_growing() {
    let p = GroupPreset::psl2z();
    let z = Point::half_plane(Complex64::new(0.0, 2.0)).unwrap();
    let mut last = 0.0;
    for n in [20, 40, 80] {
        let o = p.orbit(z, n).unwrap();
        let r = o.certified_radius().unwrap();
        let sum = blaschke_sum(&o.disc_images().unwrap(), r);
        assert!(sum > last + 1.0, "n={n} sum={sum}");
        last = sum;
    }
}

#[test]
fn density_needs_certified_coverage() {
    let p = GroupPreset::psl2z();
    let o = p.orbit(Point::half_plane(Complex64::new(0.0, 2.0)).unwrap(), 10).unwrap();
    let r = o.certified_radius().unwrap();
    assert!(matches!(
        density_estimate(&o, &[0.5, (1.0 + r) / 2.0]),
        Err(DimensionError::CoverageInsufficient { .. })
    ));
    assert!(matches!(density_estimate(&o, &[0.5, 0.4]), Err(DimensionError::BadRadii)));
    assert!(matches!(density_estimate(&o, &[0.5]), Err(DimensionError::TooFewRadii(_))));
}
