use gaugecalc::grid_forms::{
    codifferential_flat, ext_d, hodge_star, interior, l2_inner, random_nodal_form, sharp, wedge_compose,
    DifferenceScheme, LieForm, TorusGrid, ValueClass,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn scheme() -> impl Strategy<Value = DifferenceScheme> {
    prop_oneof![Just(DifferenceScheme::Biased), Just(DifferenceScheme::Central)]
}

fn random_scalar(rng: &mut ChaCha8Rng, grid: TorusGrid, degree: usize) -> LieForm<f64> {
    let vals: Vec<f64> = (0..2 * grid.node_count()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    LieForm::scalar_from_fn(grid, degree, |c, x: f64, y: f64| {
        let n = grid.n() as f64;
        let idx = grid.index((x * n).round() as usize, (y * n).round() as usize);
        vals[c * grid.node_count() + idx]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn d_squared_vanishes(seed in any::<u64>(), n in 8usize..24, m in 1usize..=3, s in scheme()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = TorusGrid::with_scheme(n, s).unwrap();
        let f = random_nodal_form::<f64, _>(&mut rng, g, 0, m);
        prop_assert!(ext_d(&ext_d(&f).unwrap()).unwrap().max_abs() < 1e-12 * n as f64 * n as f64);
    }

    #[test]
    fn star_isometry(seed in any::<u64>(), k in 0usize..=2, m in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = TorusGrid::new(12).unwrap();
        let a = random_nodal_form::<f64, _>(&mut rng, g, k, m);
        let b = random_nodal_form::<f64, _>(&mut rng, g, k, m);
        let lhs = l2_inner(&hodge_star(&a), &hodge_star(&b)).unwrap();
        prop_assert!((lhs - l2_inner(&a, &b).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn iota_pairing(seed in any::<u64>(), k in 0usize..=1, m in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = TorusGrid::new(10).unwrap();
        let lambda = random_scalar(&mut rng, g, 1);
        let xi = random_nodal_form::<f64, _>(&mut rng, g, k, m);
        let zeta = random_nodal_form::<f64, _>(&mut rng, g, k + 1, m);
        let lambda_m = if m == 1 { lambda.clone() } else {
            lambda.tensor(&gaugecalc::CMatrix::identity(m), ValueClass::General).unwrap()
        };
        let lhs = l2_inner(&wedge_compose(&lambda_m, &xi).unwrap(), &zeta).unwrap();
        let rhs = l2_inner(&xi, &interior(&sharp(&lambda).unwrap(), &zeta).unwrap()).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-10, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn summation_by_parts(seed in any::<u64>(), k in 0usize..=1, s in scheme()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = TorusGrid::with_scheme(16, s).unwrap();
        let f = random_nodal_form::<f64, _>(&mut rng, g, k, 2);
        let w = random_nodal_form::<f64, _>(&mut rng, g, k + 1, 2);
        let lhs = l2_inner(&ext_d(&f).unwrap(), &w).unwrap();
        let rhs = l2_inner(&f, &codifferential_flat(&w).unwrap()).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn json_roundtrip_is_bit_exact(seed in any::<u64>(), k in 0usize..=2, m in 1usize..=4, n in 8usize..12, s in scheme()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = TorusGrid::with_scheme(n, s).unwrap();
        let scale: f64 = rng.gen_range(-1e3..1e3);
        let f = random_nodal_form::<f64, _>(&mut rng, g, k, m).scale(scale);
        let back = LieForm::<f64>::from_json(&f.to_json()).unwrap();
        prop_assert_eq!(back, f);
    }
}

#[test]
fn d_converges_at_second_order() {
    use std::f64::consts::TAU;
    let errs: Vec<f64> = [32, 64, 128]
        .iter()
        .map(|&n| {
            let g = TorusGrid::new(n).unwrap();
            let w = LieForm::scalar_from_fn(g, 1, |c, x: f64, _| if c == 1 { (TAU * x).sin() } else { 0.0 });
            let exact = LieForm::scalar_from_fn(g, 2, |_, x: f64, _| TAU * (TAU * x).cos());
            ext_d(&w).unwrap().sub(&exact).unwrap().max_abs()
        })
        .collect();
    for w in errs.windows(2) {
        assert!((3.6..=4.4).contains(&(w[0] / w[1])), "{errs:?}");
    }
}

#[test]
fn stokes_mean_of_d_vanishes() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = TorusGrid::new(32).unwrap();
    for _ in 0..10 {
        let a = random_nodal_form::<f64, _>(&mut rng, g, 1, 2);
        let mean = ext_d(&a).unwrap().component_means()[0];
        assert!(mean.max_abs() <= 1e-12);
    }
}
