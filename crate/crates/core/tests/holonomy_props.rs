use gaugecalc::holonomy::{
    aharonov_bohm_monodromy, homomorphism_defect, parallel_transport, wong_evolve, AnalyticTorusPotential,
    MeromorphicPotential, ParametricPath,
};
use gaugecalc::{CMatrix, PauliBasis};
use num_complex::Complex;
use proptest::prelude::*;

fn potential(p: [f64; 6]) -> AnalyticTorusPotential<f64> {
    let b = PauliBasis::new();
    let (e0, e1, e2) = (*b.e[0].matrix(), *b.e[1].matrix(), *b.e[2].matrix());
    AnalyticTorusPotential::new(2, move |x: f64, y: f64| {
        let tau = std::f64::consts::TAU;
        [
            e0.scale(p[0] * (tau * y).sin()) + e2.scale(p[1]),
            e1.scale(p[2] * (tau * x).cos()) + e0.scale(p[3] * (tau * (x + y)).sin()),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn transport_unitary_and_reversible(p in prop::array::uniform6(-2.0f64..2.0), cx in 0.0f64..1.0, cy in 0.0f64..1.0, r in 0.05f64..0.5) {
        let pot = potential(p);
        let path = ParametricPath::circle(Complex::new(cx, cy), r, 1);
        let g = parallel_transport(&pot, &path, 1000).unwrap();
        prop_assert!(g.unitarity_defect() < 1e-8);
        let back = parallel_transport(&pot, &path.reversed(), 1000).unwrap();
        prop_assert!((back * g - CMatrix::identity(2)).max_abs() < 1e-8);
    }

    #[test]
    fn ab_monodromy_formula(k in -1.25f64..1.25, n in -2i32..=2) {
        prop_assume!(n != 0);
        let r = aharonov_bohm_monodromy(Complex::new(k, 0.0), n, 1000 * n.unsigned_abs() as usize).unwrap();
        prop_assert!(r.error <= 1e-8, "{:?}", r);
    }

    #[test]
    fn loop_composition(k in -2.0f64..2.0, r1 in 0.2f64..2.0, r2 in 0.2f64..2.0) {
        let pot = MeromorphicPotential::aharonov_bohm(Complex::new(k, 0.0));
        let a = ParametricPath::circle(Complex::new(0.0, 0.0), r1, 1);
        let b = ParametricPath::circle(Complex::new(0.0, 0.0), r2, -1);
        // conjugate b by a radial bridge so both loops share the basepoint r1
        let bridge = ParametricPath::segment(Complex::new(r1, 0.0), Complex::new(r2, 0.0));
        let back = bridge.reversed();
        let b_loop = bridge.then(&b).then(&back);
        prop_assert!(homomorphism_defect(&pot, &a, &b_loop, 1000).unwrap() < 1e-6);
    }

    #[test]
    fn wong_conserves_norm_and_matches_adjoint_transport(p in prop::array::uniform6(-2.0f64..2.0), i0 in prop::array::uniform3(-1.0f64..1.0)) {
        let pot = potential(p);
        let path = ParametricPath::circle(Complex::new(0.5, 0.5), 0.3, 1);
        let i0 = *PauliBasis::new().combine(i0).matrix();
        let traj = wong_evolve(&pot, &path, &i0, 1000).unwrap();
        prop_assert!(traj.norm_drift() <= 1e-9);
        let g = parallel_transport(&pot, &path, 1000).unwrap();
        prop_assert!((*traj.last() - g * i0 * g.adjoint()).max_abs() < 1e-7);
    }
}

#[test]
fn transport_order_is_four() {
    let b = PauliBasis::new();
    let a = b.e[0].matrix().scale(5.0) + b.e[2].matrix().scale(2.0);
    let pot = AnalyticTorusPotential::constant(a, CMatrix::zeros(2));
    let path = ParametricPath::torus_generator(0, (0.0, 0.0), 1);
    let exact = a.scale(-1.0).exp();
    let errs: Vec<f64> = [100, 200, 400]
        .iter()
        .map(|&s| (parallel_transport(&pot, &path, s).unwrap() - exact).max_abs())
        .collect();
    assert!(errs.windows(2).all(|w| w[0] / w[1] >= 14.0), "{errs:?}");
}
