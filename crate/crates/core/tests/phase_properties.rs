use std::f64::consts::{PI, TAU};

use phasecycle::carnot::spin_polarization;
use phasecycle::phase::{
    angle_difference, connection_integral, engine_path_phase, geometric_phase, BlochPath,
    EngineCoordinatePath, EnginePoint,
};
use proptest::prelude::*;

/// Smooth random open path: θ and φ as low-order trigonometric series.
fn random_path() -> impl Strategy<Value = BlochPath> {
    (
        0.9f64..2.2,
        prop::array::uniform4(-0.2f64..0.2),
        0.0f64..TAU,
        prop::array::uniform4(-1.5f64..1.5),
        200usize..600,
    )
        .prop_map(|(theta0, tc, phi0, pc, n)| {
            let times: Vec<f64> = (0..n).map(|k| k as f64 / (n - 1) as f64).collect();
            let series = |c: &[f64; 4], t: f64| {
                c[0] * (TAU * t).sin()
                    + c[1] * (TAU * t).cos()
                    + c[2] * (2.0 * TAU * t).sin()
                    + c[3] * t
            };
            let thetas: Vec<f64> = times.iter().map(|&t| theta0 + series(&tc, t)).collect();
            let phis: Vec<f64> = times.iter().map(|&t| phi0 + 3.0 * series(&pc, t)).collect();
            BlochPath::from_angles(&times, &thetas, &phis, None).unwrap()
        })
}

fn latitude_loop(theta: f64, n: usize) -> BlochPath {
    let times: Vec<f64> = (0..=n).map(|k| k as f64 / n as f64).collect();
    let phis: Vec<f64> = times.iter().map(|t| TAU * t).collect();
    BlochPath::from_angles(&times, &vec![theta; n + 1], &phis, None).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn redressing_leaves_geometric_phase_unchanged(
        path in random_path(), seed in any::<u64>(),
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let phases: Vec<f64> = (0..path.len()).map(|_| rng.random_range(-PI..PI)).collect();
        let a = geometric_phase(&path).unwrap();
        let b = geometric_phase(&path.redressed(&phases).unwrap()).unwrap();
        prop_assert!(angle_difference(a.total_geometric, b.total_geometric).abs() <= 1e-9);
    }

    #[test]
    fn reversal_negates(path in random_path()) {
        let a = geometric_phase(&path).unwrap();
        let b = geometric_phase(&path.reversed()).unwrap();
        prop_assert!(angle_difference(a.total_geometric, -b.total_geometric).abs() <= 1e-9);
    }

    #[test]
    fn connection_is_additive_over_splits(path in random_path(), frac in 0.05f64..0.95) {
        let k = ((path.len() - 1) as f64 * frac).round().clamp(1.0, (path.len() - 2) as f64) as usize;
        let (a, b) = path.split_at(k).unwrap();
        let whole = connection_integral(&path).unwrap().value;
        let parts = connection_integral(&a).unwrap().value + connection_integral(&b).unwrap().value;
        prop_assert!((whole - parts).abs() <= 1e-12 * whole.abs().max(1.0));
    }

    #[test]
    fn error_estimate_bounds_refinement(theta in 0.3f64..2.6, n in 200usize..2000) {
        let coarse = geometric_phase(&latitude_loop(theta, n)).unwrap();
        let fine = geometric_phase(&latitude_loop(theta, 2 * n)).unwrap();
        prop_assert!(angle_difference(coarse.total_geometric, fine.total_geometric).abs() <= coarse.error_estimate);
    }
}

#[test]
fn berry_phase_of_latitude_loops() {
    for theta in [PI / 6.0, PI / 3.0, PI / 2.0, 2.0 * PI / 3.0] {
        let r = geometric_phase(&latitude_loop(theta, 10_000)).unwrap();
        let expected = -PI * (1.0 - theta.cos());
        assert!(
            angle_difference(r.total_geometric, expected).abs() < 1e-4,
            "{theta}"
        );
        assert!((r.total_geometric - phasecycle::phase::principal_value(expected)).abs() < 1e-4);
    }
}

/// Arc of the great circle through x̂ and (0, cos α, sin α); for α ≠ 0
/// it avoids the poles and has a non-trivial connection term.
fn great_circle_arc(alpha: f64, length: f64, n: usize) -> BlochPath {
    let times: Vec<f64> = (0..=n).map(|k| k as f64 / n as f64).collect();
    let (mut thetas, mut phis) = (Vec::new(), Vec::new());
    for &t in &times {
        let (s, c) = (length * t).sin_cos();
        let v = [c, s * alpha.cos(), s * alpha.sin()];
        thetas.push(v[2].clamp(-1.0, 1.0).acos());
        phis.push(v[1].atan2(v[0]));
    }
    BlochPath::from_angles(&times, &thetas, &phis, None).unwrap()
}

#[test]
fn geodesic_arcs_carry_no_geometric_phase() {
    for n in [500, 1000] {
        let r = geometric_phase(&great_circle_arc(0.9, 2.0, n)).unwrap();
        assert!(r.total_geometric.abs() < 1e-6, "{r:?}");
        assert!(r.connection_term.abs() > 0.1);
        let times: Vec<f64> = (0..=n).map(|k| k as f64 / n as f64).collect();
        let thetas: Vec<f64> = times.iter().map(|t| 0.5 * PI * t).collect();
        let meridian = BlochPath::from_angles(&times, &thetas, &vec![0.8; n + 1], None).unwrap();
        assert!(geometric_phase(&meridian).unwrap().total_geometric.abs() < 1e-6);
    }
}

#[test]
fn engine_loop_phase_is_independent_of_field_profile() {
    let n = 10_000;
    for profile in [0.0, 0.5, 2.0] {
        let times: Vec<f64> = (0..=n).map(|k| k as f64 / n as f64).collect();
        let points: Vec<EnginePoint> = times
            .iter()
            .map(|&t| {
                let omega_t = 1.0 + profile * (TAU * t).sin().powi(2);
                EnginePoint {
                    omega_t,
                    s_z: spin_polarization(omega_t, 0.7).unwrap(),
                    direction: Some((PI / 2.0, TAU * t)),
                }
            })
            .collect();
        let path = EngineCoordinatePath::new(times, points).unwrap();
        let r = engine_path_phase(&path).unwrap();
        assert!(angle_difference(r.total_geometric, -PI).abs() < 1e-4);
        assert!(r.dynamical.is_some());
    }
}

#[test]
fn hot_isotherm_has_only_dynamical_phase() {
    let n = 2001;
    let beta_hot = 0.5;
    let times: Vec<f64> = (0..n).map(|k| 3.0 * k as f64 / (n - 1) as f64).collect();
    let omegas: Vec<f64> = times.iter().map(|t| 2.0 - t / 3.0).collect();
    let points: Vec<EnginePoint> = omegas
        .iter()
        .map(|&w| EnginePoint {
            omega_t: w,
            s_z: spin_polarization(w, beta_hot).unwrap(),
            direction: None,
        })
        .collect();
    let path = EngineCoordinatePath::new(times.clone(), points).unwrap();
    let r = engine_path_phase(&path).unwrap();
    assert!(r.total_geometric.abs() <= 1e-10);
    let energy: Vec<f64> = omegas
        .iter()
        .map(|w| -0.5 * w * (0.5 * beta_hot * w).tanh())
        .collect();
    let oracle: f64 = -(0..n - 1)
        .map(|k| 0.5 * (times[k + 1] - times[k]) * (energy[k] + energy[k + 1]))
        .sum::<f64>();
    assert!((r.dynamical.unwrap() - oracle).abs() < 1e-12);
}
