use std::f64::consts::PI;
use std::sync::Arc;

use ctlab_core::domain::{BumpSum, CounterexampleFamily, CurveSpec, GaussianProfile, SpectralFunction};
use ctlab_core::evolve::{
    direct_quadrature, evaluate_along_curve, propagators, EvolutionParams, PlanConfig, PropagationPlan,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_band(lambda: f64, seed: u64) -> SpectralFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = Arc::new(BumpSum::random_in_band(lambda, 5, &mut rng));
    let n = BumpSum::RECOMMENDED_NODES;
    SpectralFunction::from_profile(p, -2.0 * lambda, 2.0 * lambda, n, Some(lambda)).unwrap()
}

fn close(a: Complex64, b: Complex64, floor: f64, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(floor)
}

#[test]
fn gaussian_closed_form_through_transform() {
    let g = GaussianProfile { cutoff: 12.0 };
    let f = SpectralFunction::sample_profile(Arc::new(g), 481, None).unwrap();
    let p = EvolutionParams::new(2.0, 1.5, true).unwrap();
    let plan = PropagationPlan::with_defaults(f, p, &CurveSpec::identity()).unwrap();
    for &t in &[0.0, 0.05, 0.3, 0.77, 1.0] {
        let slice = plan.propagate_slice(t).unwrap();
        let a = Complex64::new(0.5 + p.damping_rate(t), -t);
        for &y in &[-1.9, -0.6, 0.0, 0.31, 1.4] {
            let exact = (PI / a).sqrt() * (-(y * y) / (4.0 * a)).exp() / (2.0 * PI);
            let v = slice.interpolate(y).unwrap();
            assert!(close(v, exact, 0.0, 1e-7), "t = {t}, y = {y}: {v} vs {exact}");
        }
    }
}

#[test]
fn plancherel_for_damped_slices() {
    let f = random_band(32.0, 3);
    let p = EvolutionParams::new(2.0, 0.5, true).unwrap();
    let plan = PropagationPlan::with_defaults(f.clone(), p, &CurveSpec::shear()).unwrap();
    for &t in &[0.0, 1e-4, 3e-3, 0.01] {
        let slice = plan.propagate_slice(t).unwrap();
        let fine = f.refined(8);
        let damped = fine.map_samples(|xi, v| v * (-p.damping_rate(t) * xi * xi).exp());
        let g = SpectralFunction::from_samples(f.xi_min(), f.xi_max(), damped, None).unwrap();
        let expect = g.l2_norm();
        assert!((slice.l2_norm() - expect).abs() <= 1e-8 * expect, "t = {t}: {} vs {expect}", slice.l2_norm());
    }
}

#[test]
fn identity_at_time_zero() {
    let f = random_band(64.0, 11);
    let p = EvolutionParams::schrodinger(1.0).unwrap();
    let scale = f.sup_bound();
    for curve in [CurveSpec::identity(), CurveSpec::shear(), CurveSpec::holder_tangent(0.3).unwrap()] {
        let plan = PropagationPlan::with_defaults(f.clone(), p, &curve).unwrap();
        for &x in &[-1.0, -0.41, 0.0, 0.017, 0.9, 1.0] {
            let v = evaluate_along_curve(&plan, &curve, x, 0.0).unwrap();
            let d = direct_quadrature(&f, &p, x, 0.0);
            assert!(close(v, d, 1e-6 * scale, 1e-8), "{} at {x}", curve.family);
        }
    }
}

#[test]
fn transform_agrees_with_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (i, &lambda) in [16.0, 64.0].iter().enumerate() {
        let f = random_band(lambda, 100 + i as u64);
        let p = EvolutionParams::schrodinger(0.8).unwrap();
        let curve = CurveSpec::holder_tangent(0.5).unwrap();
        let plan = PropagationPlan::with_defaults(f.clone(), p, &curve).unwrap();
        let scale = f.sup_bound();
        let reg = propagators();
        let tr = reg.get("transform").unwrap();
        let qu = reg.get("quadrature").unwrap();
        for _ in 0..10 {
            let t: f64 = rng.gen_range(0.0..1.0f64).powi(3);
            let xs: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let a = tr.along_curve(&plan, &curve, t, &xs).unwrap();
            let b = qu.along_curve(&plan, &curve, t, &xs).unwrap();
            for (u, v) in a.iter().zip(&b) {
                assert!(close(*u, *v, 1e-6 * scale, 1e-6), "λ = {lambda}, t = {t}: {u} vs {v}");
            }
        }
    }
}

#[test]
fn counterexample_slices_reach_the_witness_bound() {
    let fam = CounterexampleFamily::thm31(0.25, 0.75, 0.01, 64.0).unwrap();
    let f = fam.spectrum(129).unwrap();
    let p = EvolutionParams::schrodinger(0.75).unwrap();
    let curve = CurveSpec::holder_tangent(0.25).unwrap();
    let plan = PropagationPlan::new(f, p, &curve, PlanConfig::default()).unwrap();
    let x = fam.sets_ab().unwrap().midpoint();
    let t = fam.selector_t(x).unwrap();
    let v = evaluate_along_curve(&plan, &curve, x, t).unwrap();
    assert!(v.norm() >= 1.0 / (4.0 * PI));
}
