use std::sync::Arc;

use proptest::prelude::*;
use wulff_core::hypersurface::FourierMode;
use wulff_core::linalg::{self, Vector};
use wulff_core::minkowski::make_wulff;
use wulff_core::stability::{deficit_pmomentum, deficit_thm11};
use wulff_core::{MinkowskiNorm, SphereGrid, StarSurface};

fn norms(n: usize) -> Vec<MinkowskiNorm> {
    let axes: &[f64] = if n == 1 {
        &[2.0, 1.0]
    } else {
        &[1.5, 1.0, 0.8]
    };
    vec![
        MinkowskiNorm::euclidean(n).unwrap(),
        MinkowskiNorm::ellipsoid_from_semi_axes(n, axes).unwrap(),
        MinkowskiNorm::perturbed(n, 0.1, 2).unwrap(),
    ]
}

fn planar() -> impl Strategy<Value = Vector> {
    (-3.0..3.0f64, -3.0..3.0f64)
        .prop_filter("away from the origin", |(x, y)| x * x + y * y > 1e-2)
        .prop_map(|(x, y)| [x, y, 0.0])
}

fn spatial() -> impl Strategy<Value = Vector> {
    (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64)
        .prop_filter("away from the origin", |(x, y, z)| {
            x * x + y * y + z * z > 1e-2
        })
        .prop_map(|(x, y, z)| [x, y, z])
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norms_and_duals_are_homogeneous(x in planar(), y in spatial(), lambda in 0.05..20.0f64) {
        for (n, v) in [(1, x), (2, y)] {
            for f in norms(n) {
                let s = linalg::scale(&v, lambda);
                prop_assert!(rel(f.eval(&s), lambda * f.eval(&v)) < 1e-12);
                prop_assert!(rel(f.eval_dual(&s).unwrap(), lambda * f.eval_dual(&v).unwrap()) < 1e-9);
                let g0 = f.grad(&v).unwrap();
                let g1 = f.grad(&s).unwrap();
                prop_assert!(linalg::norm(&linalg::sub(&g0, &g1)) < 1e-10);
            }
        }
    }

    #[test]
    fn cauchy_schwarz_holds(x in planar(), y in planar(), u in spatial(), v in spatial()) {
        for (n, a, b) in [(1, x, y), (2, u, v)] {
            for f in norms(n) {
                prop_assert!(f.cauchy_schwarz_slack(&a, &b).unwrap() >= -1e-10);
                prop_assert!(f.eval(&a) >= f.lower_bound() * linalg::norm(&a) * (1.0 - 1e-12));
            }
        }
    }

    #[test]
    fn dual_gradient_inverts_gradient(x in planar(), u in spatial()) {
        for (n, v) in [(1, x), (2, u)] {
            for f in norms(n) {
                let y = f.grad(&v).unwrap();
                prop_assert!((f.eval_dual(&y).unwrap() - 1.0).abs() < 1e-8);
                let back = f.grad_dual(&y).unwrap();
                let target = linalg::scale(&v, 1.0 / f.eval(&v));
                prop_assert!(linalg::norm(&linalg::sub(&back, &target)) < 1e-7);
            }
        }
    }
}

/// `sup_y x·y / F⁰(y)` by a dense scan of the circle, compared with `F`.
#[test]
fn biduality_of_perturbed_norm() {
    let f = MinkowskiNorm::perturbed(1, 0.1, 3).unwrap();
    let m = 20_000;
    let dual: Vec<(Vector, f64)> = (0..m)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
            let y = [t.cos(), t.sin(), 0.0];
            (y, f.eval_dual(&y).unwrap())
        })
        .collect();
    for k in 0..37 {
        let t = 0.3 + 0.17 * k as f64;
        let x = [1.3 * t.cos(), 1.3 * t.sin(), 0.0];
        let bidual = dual
            .iter()
            .map(|(y, d)| linalg::dot(&x, y) / d)
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(rel(bidual, f.eval(&x)) < 1e-6, "{bidual} vs {}", f.eval(&x));
    }
}

fn random_curve(grid: &Arc<SphereGrid>, coeffs: &[(usize, i64, f64)]) -> StarSurface {
    let modes: Vec<FourierMode> = coeffs
        .iter()
        .map(|&(degree, order, delta)| FourierMode {
            degree,
            order,
            delta,
        })
        .collect();
    StarSurface::radial_fourier(grid.clone(), 1.0, &modes, linalg::ZERO).unwrap()
}

fn modes() -> impl Strategy<Value = Vec<(usize, i64, f64)>> {
    prop::collection::vec(
        (
            1usize..5,
            prop_oneof![Just(1i64), Just(-1i64)],
            -0.06..0.06f64,
        ),
        1..4,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn deficits_are_nonnegative_on_mean_convex_curves(coeffs in modes(), px in -0.1..0.1f64, py in -0.1..0.1f64) {
        let g = Arc::new(SphereGrid::new(1, 256).unwrap());
        let s = random_curve(&g, &coeffs);
        for f in norms(1) {
            let geo = s.geometry(&f).unwrap();
            prop_assume!(geo.min_mean_curvature() > 0.0);
            let w = make_wulff(&f, &g).unwrap();
            let p = [px, py, 0.0];
            prop_assert!(deficit_thm11(&s, &w, p).unwrap() >= -1e-8);
            for e in [1.0, 2.0, 3.0] {
                let d = deficit_pmomentum(&s, &w, p, e).unwrap();
                prop_assert!(d.deficit >= -1e-8);
                prop_assert!(d.deficit >= d.holder_bound - 1e-9);
                prop_assert!(d.holder_bound >= d.linear_bound - 1e-12);
            }
            let m1 = s.weighted_momentum(&f, p, 1.0).unwrap();
            prop_assert!(m1 >= 2.0 * s.volume() - 1e-10);
        }
    }

    #[test]
    fn q_is_scale_and_translation_invariant(coeffs in modes(), k in 0.2..5.0f64, sx in -2.0..2.0f64, sy in -2.0..2.0f64) {
        let g = Arc::new(SphereGrid::new(1, 128).unwrap());
        let s = random_curve(&g, &coeffs);
        let shift = [sx, sy, 0.0];
        let moved = s.scaled(k, shift).unwrap();
        for f in norms(1) {
            let q0 = s.q_functional(&f, linalg::ZERO).unwrap();
            let q1 = moved.q_functional(&f, shift).unwrap();
            prop_assert!(rel(q1, q0) < 1e-10);
        }
    }

    #[test]
    fn rescaled_wulff_shapes_are_equality_cases(a in 0.3..4.0f64, px in -1.0..1.0f64, py in -1.0..1.0f64) {
        let g = Arc::new(SphereGrid::new(1, 512).unwrap());
        let p = [px, py, 0.0];
        for f in norms(1) {
            let w = make_wulff(&f, &g).unwrap();
            let s = w.scaled_surface(a, p).unwrap();
            prop_assert!(deficit_thm11(&s, &w, p).unwrap().abs() < 1e-7);
            prop_assert!(deficit_pmomentum(&s, &w, p, 2.0).unwrap().deficit.abs() < 1e-7);
        }
    }
}
