use std::collections::HashSet;

use num_complex::Complex64;
use orbit_bergman::groups::{
    FreeWord, GroupPreset, enumerate_by_entry, enumerate_group, gamma2_decompose, magnus_cmp,
    magnus_less, reduce_to_fundamental_domain,
};
use orbit_bergman::moebius::{
    apply_moebius, automorphy, branch_log, cocycle_defect, imag_factor, to_disc, to_half_plane,
};
use orbit_bergman::{GroupElement, Letter, Point};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn hp(re: f64, im: f64) -> Point {
    Point::half_plane(c(re, im)).unwrap()
}

fn letter() -> impl Strategy<Value = Letter> {
    prop_oneof![Just(Letter::S), Just(Letter::T), Just(Letter::TInv)]
}

fn element(max_len: usize) -> impl Strategy<Value = GroupElement> {
    prop::collection::vec(letter(), 0..max_len)
        .prop_map(|w| GroupElement::from_word(&w).unwrap())
}

fn free_letter() -> impl Strategy<Value = Letter> {
    prop_oneof![Just(Letter::A), Just(Letter::AInv), Just(Letter::B), Just(Letter::BInv)]
}

fn free_word(max_len: usize) -> impl Strategy<Value = FreeWord> {
    prop::collection::vec(free_letter(), 0..=max_len).prop_map(|w| FreeWord::new(&w).unwrap())
}

fn point() -> impl Strategy<Value = Point> {
    (-3.0..3.0f64, 0.05..4.0f64).prop_map(|(x, y)| hp(x, y))
}

#[test]
fn moebius_examples() {
    let s = GroupElement::s();
    let t = GroupElement::t();
    let g = GroupElement::new(1, 0, 1, 1).unwrap();
    assert!((apply_moebius(&s, Point::i()).unwrap().value() - c(0.0, 1.0)).norm() < 1e-15);
    assert!((apply_moebius(&t, Point::i()).unwrap().value() - c(1.0, 1.0)).norm() < 1e-15);
    assert!((apply_moebius(&g, Point::i()).unwrap().value() - c(0.5, 0.5)).norm() < 1e-15);
    assert_eq!(imag_factor(&s, Point::i()).unwrap(), 1.0);
    assert_eq!(imag_factor(&t, hp(0.0, 2.0)).unwrap(), 2.0);
    assert!((imag_factor(&g, Point::i()).unwrap() - 0.5).abs() < 1e-15);
    assert!(to_disc(Point::i()).unwrap().value().norm() < 1e-15);
    assert!((to_disc(hp(0.0, 2.0)).unwrap().value() - c(1.0 / 3.0, 0.0)).norm() < 1e-15);
    let w0 = Point::disc(c(0.0, 0.0)).unwrap();
    assert!((to_half_plane(w0).unwrap().value() - c(0.0, 1.0)).norm() < 1e-15);
}

#[test]
fn boundary_points_are_rejected() {
    assert!(Point::half_plane(c(0.3, 0.0)).is_err());
    assert!(Point::half_plane(c(0.3, 1e-15)).is_err());
    assert!(Point::disc(c(1.0, 0.0)).is_err());
    assert!(Point::disc(c(0.6, 0.8)).is_err());
    let w = Point::disc(c(0.1, 0.2)).unwrap();
    assert!(imag_factor(&GroupElement::s(), w).is_err());
}

#[test]
fn branch_and_automorphy_examples() {
    let s = GroupElement::s();
    let t = GroupElement::t();
    assert_eq!(branch_log(&t, hp(0.7, 3.0)).unwrap().log_value, c(0.0, 0.0));
    let l = branch_log(&s, Point::i()).unwrap().log_value;
    assert!((l - c(0.0, std::f64::consts::FRAC_PI_2)).norm() < 1e-15);
    assert!((automorphy(&t, Point::i(), 13.0).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
    assert!((automorphy(&s, Point::i(), 2.0).unwrap() - c(-1.0, 0.0)).norm() < 1e-15);
}

#[test]
fn defect_examples() {
    let s = GroupElement::s();
    let id = GroupElement::identity();
    for &sv in &[1.5, 2.5, 13.0] {
        assert_eq!(cocycle_defect(&id, &id, hp(0.2, 0.9), sv).unwrap(), c(1.0, 0.0));
    }
    // SS = -I collapses to I in PSL; the two factors contribute e^{3πi/4} each.
    let d = cocycle_defect(&s, &s, Point::i(), 1.5).unwrap();
    assert!((d - c(0.0, 1.0)).norm() < 1e-12);
}

#[test]
fn branch_is_continuous_along_paths() {
    let gs = [
        GroupElement::new(2, 1, 1, 1).unwrap(),
        GroupElement::new(1, 0, -3, 1).unwrap(),
        GroupElement::s(),
        GroupElement::new(5, -2, 3, -1).unwrap(),
    ];
    for g in &gs {
        // Path winding around in the compact box [-2,2] x [0.1, 2].
        let mut prev: Option<Complex64> = None;
        let n = 4000;
        for k in 0..=n {
            let t = k as f64 / n as f64 * std::f64::consts::TAU;
            let z = hp(1.9 * t.cos(), 1.05 + 0.9 * t.sin());
            let l = branch_log(g, z).unwrap().log_value;
            if let Some(p) = prev {
                assert!((l - p).norm() < 0.1, "jump for {g} at {z}");
            }
            prev = Some(l);
        }
    }
}

#[test]
fn enumeration_by_bfs_matches_lattice() {
    for preset in [GroupPreset::psl2z(), GroupPreset::gamma2()] {
        for n in [1, 2, 5, 9] {
            let bfs = enumerate_group(&preset, 200, n).unwrap();
            let lat = enumerate_by_entry(&preset, n).unwrap();
            let a: HashSet<_> = bfs.iter().map(|g| g.entries()).collect();
            let b: HashSet<_> = lat.iter().map(|g| g.entries()).collect();
            assert_eq!(a.len(), bfs.len());
            assert_eq!(a, b, "{:?} N={n}", preset.name);
            for g in &bfs {
                assert_eq!(GroupElement::from_word(&g.word).unwrap(), *g);
                assert!(a.contains(&g.inverse().entries()));
                assert!(preset.contains(g));
            }
        }
    }
}

#[test]
fn gamma2_index_trend() {
    let p = GroupPreset::psl2z();
    let mut prev = f64::INFINITY;
    for n in [10, 40, 160] {
        let all = enumerate_by_entry(&p, n).unwrap();
        let sub = all.iter().filter(|g| g.in_gamma2()).count();
        let ratio = (6 * sub) as f64 / all.len() as f64;
        let dev = (ratio - 1.0).abs();
        assert!(dev <= prev + 1e-3, "ratio {ratio} at N={n}");
        prev = dev;
    }
    assert!(prev < 0.05);
}

#[test]
fn magnus_total_on_ball() {
    // All reduced words of length <= 3 are pairwise comparable and distinct.
    let mut words = vec![FreeWord::empty()];
    let mut frontier = vec![FreeWord::empty()];
    for _ in 0..3 {
        let mut next = Vec::new();
        for w in &frontier {
            for l in [Letter::A, Letter::AInv, Letter::B, Letter::BInv] {
                let x = w.mul(&FreeWord::new(&[l]).unwrap());
                if x.len() == w.len() + 1 {
                    next.push(x);
                }
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    let mut sorted = words.clone();
    sorted.sort_by(|u, v| magnus_cmp(u, v).unwrap());
    for pair in sorted.windows(2) {
        assert!(magnus_less(&pair[0], &pair[1]).unwrap());
    }
    assert_eq!(sorted.len(), 1 + 4 + 12 + 36);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn group_law(g in element(8), h in element(8), z in point()) {
        let lhs = apply_moebius(&g, apply_moebius(&h, z).unwrap()).unwrap().value();
        let rhs = apply_moebius(&(&g * &h), z).unwrap().value();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()) * (1.0 + 1.0 / lhs.im));
    }

    #[test]
    fn exact_matrix_associativity(g in element(10), h in element(10), k in element(10)) {
        prop_assert_eq!(&(&g * &h) * &k, &g * &(&h * &k));
        prop_assert!((&g * &g.inverse()).is_identity());
        prop_assert_eq!(GroupElement::from_word(&g.word).unwrap(), g);
    }

    #[test]
    fn imag_factor_matches_action(g in element(8), z in point()) {
        let im = apply_moebius(&g, z).unwrap().value().im;
        let f = imag_factor(&g, z).unwrap();
        prop_assert!((im - f).abs() <= 1e-12 * f);
    }

    #[test]
    fn cayley_round_trip(z in point()) {
        let back = to_half_plane(to_disc(z).unwrap()).unwrap().value();
        prop_assert!((back - z.value()).norm() <= 1e-12 * (1.0 + z.value().norm_sqr()));
    }

    #[test]
    fn disc_action_is_conjugated(g in element(6), z in point()) {
        let w = to_disc(z).unwrap();
        let via_disc = apply_moebius(&g, w).unwrap().value();
        let via_hp = to_disc(apply_moebius(&g, z).unwrap()).unwrap().value();
        prop_assert!((via_disc - via_hp).norm() < 1e-10);
    }

    #[test]
    fn branch_exponentiates(g in element(8), z in point()) {
        let l = branch_log(&g, z).unwrap().log_value;
        let j = g.j(z.value());
        prop_assert!((l.exp() - j).norm() <= 1e-12 * j.norm());
    }

    #[test]
    fn automorphy_modulus(g in element(8), z in point(), s in 1.01..20.0f64) {
        let a = automorphy(&g, z, s).unwrap();
        let m = g.j(z.value()).norm().powf(s);
        prop_assert!((a.norm() - m).abs() <= 1e-12 * m);
    }

    #[test]
    fn defect_unit_and_constant(g in element(6), h in element(6), s in 1.01..15.0f64) {
        let grid = [hp(0.0, 1.0), hp(-1.3, 0.2), hp(2.1, 3.5), hp(0.4, 0.05)];
        let d0 = cocycle_defect(&g, &h, grid[0], s).unwrap();
        prop_assert!((d0.norm() - 1.0).abs() < 1e-10);
        for &z in &grid[1..] {
            let d = cocycle_defect(&g, &h, z, s).unwrap();
            prop_assert!((d - d0).norm() < 1e-10);
        }
        // Direct ratio agrees with the log-based evaluation.
        let z = grid[1];
        let hz = apply_moebius(&h, z).unwrap();
        let direct = automorphy(&(&g * &h), z, s).unwrap()
            / (automorphy(&g, hz, s).unwrap() * automorphy(&h, z, s).unwrap());
        prop_assert!((direct - d0).norm() < 1e-9);
        let even = cocycle_defect(&g, &h, z, 2.0).unwrap();
        prop_assert!((even - Complex64::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn reduction_lands_in_domain(z in point()) {
        let (z0, g) = reduce_to_fundamental_domain(z).unwrap();
        let v = z0.value();
        prop_assert!(v.re.abs() <= 0.5 + 1e-12);
        prop_assert!(v.norm() >= 1.0 - 1e-12);
        let gz = apply_moebius(&g, z).unwrap().value();
        prop_assert!((gz - v).norm() < 1e-12 * (1.0 + v.norm()));
        prop_assert_eq!(GroupElement::from_word(&g.word).unwrap(), g);
    }

    #[test]
    fn decompose_round_trip(w in free_word(12)) {
        let g = w.to_element().unwrap().without_word();
        prop_assert_eq!(gamma2_decompose(&g).unwrap(), w);
    }

    #[test]
    fn magnus_left_invariant(u in free_word(5), v in free_word(5), x in free_word(5)) {
        let before = magnus_less(&u, &v).unwrap();
        let after = magnus_less(&x.mul(&u), &x.mul(&v)).unwrap();
        prop_assert_eq!(before, after);
        prop_assert!(!magnus_less(&u, &u).unwrap());
        if u != v {
            prop_assert!(before ^ magnus_less(&v, &u).unwrap());
        }
    }

    #[test]
    fn magnus_transitive(u in free_word(4), v in free_word(4), x in free_word(4)) {
        if magnus_less(&u, &v).unwrap() && magnus_less(&v, &x).unwrap() {
            prop_assert!(magnus_less(&u, &x).unwrap());
        }
    }
}
