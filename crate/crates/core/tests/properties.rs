use num_complex::Complex64;
use proptest::prelude::*;

use spectral_ep::boundary::BoundaryModel;
use spectral_ep::exact::{apply_h, rat, ExpLaurent, QSign, RationalComplex};
use spectral_ep::greens::{boundary_pole_order, green, green_jump, BOUNDARY_RADIUS};
use spectral_ep::interior::InteriorModel;
use spectral_ep::resolution::schemes::{apply_scheme, Scheme};
use spectral_ep::resolution::testfn::TestFunction;
use spectral_ep::susy::{max_normalizable_len, transform, wronskian, TransformationChain};
use spectral_ep::Model;

fn coeff() -> impl Strategy<Value = RationalComplex> {
    (-9i64..=9, 1i64..=5, -9i64..=9, 1i64..=5)
        .prop_map(|(a, b, c, d)| RationalComplex::new(rat(a, b), rat(c, d)))
}

fn laurent_with(phase: i32, z_phase: i32, unit: i32) -> impl Strategy<Value = ExpLaurent> {
    prop::collection::vec((0i32..=3, -5i32..=5, coeff()), 1..5)
        .prop_map(move |terms| ExpLaurent::from_terms(phase, z_phase, unit, terms))
}

fn laurent() -> impl Strategy<Value = ExpLaurent> {
    (-2i32..=2, -2i32..=2, -1i32..=1).prop_flat_map(|(s, t, u)| laurent_with(s, t, u))
}

fn same_phase_pair() -> impl Strategy<Value = (ExpLaurent, ExpLaurent)> {
    (-2i32..=2, -2i32..=2, -1i32..=1).prop_flat_map(|(s, t, u)| (laurent_with(s, t, u), laurent_with(s, t, u)))
}

fn z_off_axis() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, 0.3f64..2.0).prop_map(|(re, im)| Complex64::new(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws((a, b) in same_phase_pair(), c in laurent()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&c * &(&a + &b), &(&c * &a) + &(&c * &b));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn derivative_is_a_derivation(a in laurent(), b in laurent()) {
        let lhs = (&a * &b).diff_x();
        let rhs = (&a.diff_x() * &b).try_add(&(&a * &b.diff_x())).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in laurent(), b in laurent(), x in 0.5f64..3.0, k in 0.2f64..2.0) {
        let (x, k, z) = (Complex64::new(x, 0.0), Complex64::new(k, 0.1), Complex64::new(0.0, 1.0));
        let lhs = (&a * &b).eval(x, k, z);
        let rhs = a.eval(x, k, z) * b.eval(x, k, z);
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()), "{lhs} vs {rhs}");
    }

    #[test]
    fn ladder_factorizes_the_hamiltonian(f in laurent(), n in 1u32..=8) {
        let qp = |g: &ExpLaurent| g.apply_q(n, QSign::Plus);
        let qm = |g: &ExpLaurent| g.apply_q(n, QSign::Minus);
        prop_assert_eq!(apply_h(&f, n), qp(&qm(&f)));
        prop_assert_eq!(apply_h(&f, n - 1), qm(&qp(&f)));
        prop_assert_eq!(apply_h(&qp(&f), n), qp(&apply_h(&f, n - 1)));
        prop_assert_eq!(qm(&apply_h(&f, n)), apply_h(&qm(&f), n - 1));
    }

    #[test]
    fn chains_close_exactly(n in 0u32..=7, z in z_off_axis()) {
        let m = BoundaryModel::new(n, z).unwrap();
        prop_assert!(m.h(&m.growing(0)).is_zero());
        for l in 1..=4 {
            prop_assert_eq!(m.h(&m.growing(l)), m.growing(l - 1));
            prop_assert_eq!(m.h(&m.assoc(l)), m.assoc(l - 1));
        }
    }

    #[test]
    fn green_is_symmetric_with_unit_jump(
        n in 0u32..=4,
        z in z_off_axis(),
        x in 0.0f64..4.0,
        xp in 0.0f64..4.0,
        e in (0.2f64..3.0, -0.5f64..0.5),
    ) {
        let model = Model::from(BoundaryModel::new(n, z).unwrap());
        let e = Complex64::new(e.0, e.1);
        let g1 = green(&model, x, xp, e).unwrap();
        let g2 = green(&model, xp, x, e).unwrap();
        prop_assert!((g1 - g2).norm() <= 1e-10 * (1.0 + g1.norm()));
        let jump = green_jump(&model, xp, e).unwrap();
        prop_assert!((jump + 1.0).norm() < 1e-9, "jump {jump}");
    }

    #[test]
    fn interior_green_is_symmetric(alpha in 0.5f64..2.0, x in -3.0f64..3.0, xp in -3.0f64..3.0, e in (0.1f64..3.0, 0.05f64..0.5)) {
        let model = Model::from(InteriorModel::new(alpha, Complex64::new(0.0, 1.0)).unwrap());
        let e = Complex64::new(e.0, e.1);
        let g1 = green(&model, x, xp, e).unwrap();
        let g2 = green(&model, xp, x, e).unwrap();
        prop_assert!((g1 - g2).norm() <= 1e-9 * (1.0 + g1.norm()));
        prop_assert!((green_jump(&model, xp, e).unwrap() + 1.0).norm() < 1e-8);
    }

    #[test]
    fn susy_endpoints(n in 0u32..=6, len in 1u32..=3, z in z_off_axis()) {
        let base = BoundaryModel::new(n, z).unwrap();
        let up = TransformationChain::growing(&base, len).unwrap();
        prop_assert_eq!(transform(&up).unwrap().n(), n + len);
        prop_assert!(wronskian(&up).unwrap().as_monomial().is_some());
        if len <= max_normalizable_len(n) {
            let down = TransformationChain::normalizable(&base, len).unwrap();
            prop_assert_eq!(transform(&down).unwrap().n(), n - len);
        } else {
            prop_assert!(TransformationChain::normalizable(&base, len).is_err());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn res3_reproduces_gaussians(n in 1u32..=3, xp in -1.5f64..1.5, eps in 0.1f64..0.9) {
        let model = Model::from(BoundaryModel::new(n, Complex64::new(0.0, 1.0)).unwrap());
        let v = apply_scheme(&model, Scheme::Res3, eps, f64::INFINITY, &TestFunction::gaussian(), xp).unwrap();
        prop_assert!(v.abs_error < 5e-6, "n={} x'={} ε={} error {}", n, xp, eps, v.abs_error);
    }
}

#[test]
fn boundary_pole_order_is_stable_under_radius() {
    for n in 0..=4 {
        let m = BoundaryModel::new(n, Complex64::new(0.0, 1.0)).unwrap();
        let a = boundary_pole_order(&m, BOUNDARY_RADIUS).unwrap();
        let b = boundary_pole_order(&m, BOUNDARY_RADIUS / 2.0).unwrap();
        assert_eq!((a, b), (2 * n as usize + 1, 2 * n as usize + 1), "n={n}");
    }
}
