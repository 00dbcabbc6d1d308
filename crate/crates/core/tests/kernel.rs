use ctlab_core::domain::CurveSpec;
use ctlab_core::evolve::EvolutionParams;
use ctlab_core::kernel::*;
use ctlab_core::summation::trapezoid;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn plan(lambda: f64, alpha: f64, gamma: f64) -> KernelPlan {
    KernelPlan::new(
        lambda,
        EvolutionParams::schrodinger(gamma).unwrap(),
        CurveSpec::holder_tangent(alpha).unwrap(),
        CutoffSpec::default(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn modulus_never_exceeds_lambda_times_mass(
        x in -1.0f64..=1.0, y in -1.0f64..=1.0,
        j1 in 0i32..12, j2 in 0i32..12, z1 in any::<bool>(), z2 in any::<bool>(),
        alpha in 0.1f64..=1.0, gamma in 0.3f64..3.0,
    ) {
        let p = plan(32.0, alpha, gamma);
        let t1 = if z1 { 0.0 } else { 2f64.powi(-j1) };
        let t2 = if z2 { 0.0 } else { 2f64.powi(-j2) };
        let k = p.eval(x, y, t1, t2).unwrap();
        prop_assert!(k.norm() <= p.modulus_bound() * (1.0 + 1e-12));
    }

    #[test]
    fn swapping_arguments_conjugates(
        x in -1.0f64..=1.0, y in -1.0f64..=1.0, t1 in 0.0f64..=1.0, t2 in 0.0f64..=1.0,
        alpha in 0.1f64..=1.0,
    ) {
        let p = plan(16.0, alpha, 1.5);
        let a = p.eval(x, y, t1, t2).unwrap();
        let b = p.eval(y, x, t2, t1).unwrap();
        prop_assert!((a - b.conj()).norm() <= 1e-10 * p.modulus_bound());
    }
}

#[test]
fn free_kernel_decays_non_stationarily() {
    for lambda in [16.0, 64.0] {
        let p = plan(lambda, 0.5, 2.0);
        let c_int = decay_constant(&p, 32.0).unwrap();
        assert!(c_int > 0.0);
        let mut u = 32.0 + 2.0 * std::f64::consts::PI;
        while u < 600.0 {
            let k = p.eval(u / lambda, 0.0, 0.0, 0.0).unwrap().norm();
            assert!(k <= lambda * c_int / (u * u) * (1.0 + 1e-9), "λ={lambda} u={u}: {k}");
            u += 0.37;
        }
    }
}

#[test]
fn kernel_ratio_does_not_grow_with_frequency() {
    let spec = KernelCheckSpec::new(0.5, 2.0, vec![16.0, 64.0], 500, 11);
    let r = verify_kernel_bound(&spec).unwrap();
    assert!(r.pass, "growth {}", r.growth);
    assert!(r.per_lambda.iter().all(|l| l.max_ratio.is_finite() && l.max_ratio > 0.0));
}

#[test]
fn identical_seeds_identical_reports() {
    let spec = KernelCheckSpec::new(1.0 / 3.0, 1.2, vec![16.0, 32.0], 100, 5);
    let a = verify_kernel_bound(&spec).unwrap();
    let b = verify_kernel_bound(&spec).unwrap();
    assert_eq!(a, b);
    let other = verify_kernel_bound(&KernelCheckSpec { seed: 6, ..spec }).unwrap();
    assert_ne!(a.per_lambda[0].worst, other.per_lambda[0].worst);
}

#[test]
fn far_equal_time_draw_has_a_finite_ratio() {
    let p = plan(64.0, 0.5, 2.0);
    let beta = BetaChoice::new(0.0, 0.0).unwrap();
    let (x, y, t) = (0.9, -0.9, 0.125);
    let k = p.eval(x, y, t, t).unwrap().norm();
    let b = bound_rhs(x, y, 64.0, &beta, 0.5, 2.0).unwrap();
    let ratio = k / b;
    assert!(ratio.is_finite());
    assert!(ratio <= k / (64f64.sqrt() / 1.8f64.sqrt()) * (1.0 + 1e-15));
}

#[test]
fn random_assignment_row_integral_sits_under_the_nodewise_majorant() {
    let (alpha, gamma, lambda) = (0.5, 2.0, 32.0);
    let p = plan(lambda, alpha, gamma);
    let beta = beta_table(alpha, gamma).unwrap();
    let ys = schur_grid(lambda);
    let times = time_set(lambda);
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let assigned: Vec<f64> = ys.iter().map(|_| times[rng.gen_range(0..times.len())]).collect();
    let lookup = |v: f64| {
        let k = ys.iter().position(|&y| y == v).expect("grid node");
        assigned[k]
    };
    let x = ys[ys.len() / 3];
    let i = schur_integral(x, &p, &lookup, &ys).unwrap();

    let tx = lookup(x);
    let mut c = 0.0f64;
    let mut majorant = Vec::with_capacity(ys.len());
    for &y in &ys {
        let m = if y == x {
            p.modulus_bound()
        } else {
            bound_rhs(x, y, lambda, &beta, alpha, gamma).unwrap().min(p.modulus_bound())
        };
        c = c.max(p.eval(x, y, tx, lookup(y)).unwrap().norm() / m);
        majorant.push(m);
    }
    let bound = c * trapezoid(&ys, &majorant);
    assert!(i <= bound * (1.0 + 1e-12), "{i} > {bound}");
    assert!(c < 10.0, "kernel constant {c}");
}

#[test]
fn structured_schur_sweep_respects_the_table() {
    let s = schur_sweep(0.5, 2.0, &[16.0, 32.0, 64.0, 128.0], &[0.0, 0.5], CutoffSpec::default(), 0.15).unwrap();
    assert!(s.pass, "slope {}", s.fit.slope);
}

#[test]
fn every_table_row_matches_its_integrated_majorant() {
    for &(a, g) in &TABLE_REPRESENTATIVES {
        let c = table_consistency(a, g, 0.05).unwrap();
        assert!(c.pass, "(α={a}, γ={g}) slope {}", c.fit.slope);
    }
}
