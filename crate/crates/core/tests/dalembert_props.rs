mod common;

use common::*;
use torricelli_core::*;

fn pairs(dim: Dim, count: u64) -> impl Iterator<Item = (Configuration, Point)> {
    (0..count).map(move |seed| {
        let m = 2 + (seed as usize % 6);
        let cfg = random_configuration(seed + 1000, m, dim, 0.5, 2.0).unwrap();
        let mut rng = SplitMix64::new(seed);
        let x = smooth_point(&cfg, &mut rng, 0.05);
        (cfg, x)
    })
}

#[test]
fn cos_sum_is_projection_of_residual() {
    for (cfg, x) in pairs(Dim::Two, 64) {
        let r = balancing_residual(&cfg, &x).unwrap();
        for j in 0..cfg.len() {
            let u = unit_vector(&x, &cfg.position(j).unwrap())
                .unwrap()
                .as_point();
            let c = cos_sum_2d(&cfg, &x, j).unwrap();
            assert!((c - r.dot(&u)).abs() <= 1e-12);
        }
    }
}

#[test]
fn sin_sum_is_projection_on_normal() {
    for (cfg, x) in pairs(Dim::Two, 64) {
        let r = balancing_residual(&cfg, &x).unwrap();
        for j in 0..cfg.len() {
            let u = unit_vector(&x, &cfg.position(j).unwrap())
                .unwrap()
                .as_point();
            let n = Point::xy(-u.coords()[1], u.coords()[0]);
            let s = sin_sum_2d(&cfg, &x, j).unwrap();
            assert!((s - r.dot(&n)).abs() <= 1e-10);
        }
    }
}

#[test]
fn cos_sum_matches_central_difference() {
    for (cfg, x) in pairs(Dim::Two, 64) {
        let h = 1e-6 * cfg.diameter();
        for j in 0..cfg.len() {
            let u = unit_vector(&x, &cfg.position(j).unwrap())
                .unwrap()
                .as_point();
            let fd = -central_directional(&cfg, &x, &u, h);
            let c = cos_sum_2d(&cfg, &x, j).unwrap();
            let rel = (c - fd).abs() / c.abs().max(1e-3 * cfg.total_weight());
            assert!(rel <= 1e-5, "{rel:e}");
        }
    }
}

#[test]
fn virtual_work_is_second_order_accurate() {
    for dim in [Dim::Two, Dim::Three] {
        for (cfg, x) in pairs(dim, 64) {
            let diam = cfg.diameter();
            for delta in [1e-6 * diam, 1e-4 * diam, 1e-3 * diam] {
                for j in 0..cfg.len() {
                    let u = unit_vector(&x, &cfg.position(j).unwrap())
                        .unwrap()
                        .as_point();
                    let drop =
                        objective(&cfg, &x).unwrap() - objective(&cfg, &(x + u * delta)).unwrap();
                    let w = virtual_work(&cfg, &x, j, delta).unwrap();
                    let bound = 10.0 * delta * delta * cfg.total_weight() / diam;
                    // plus rounding in the objective difference
                    let slack = 8.0 * f64::EPSILON * objective(&cfg, &x).unwrap();
                    assert!(
                        (w - drop).abs() <= bound + slack,
                        "{:e} > {bound:e}",
                        (w - drop).abs()
                    );
                }
            }
        }
    }
}

#[test]
fn signed_sines_satisfy_angle_addition() {
    for (cfg, x) in pairs(Dim::Two, 32) {
        let m = cfg.len();
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let direct = signed_coefficient_2d(&cfg, &x, i, j).unwrap();
                    let via = signed_coefficient_2d(&cfg, &x, k, j).unwrap()
                        * signed_coefficient_2d(&cfg, &x, i, k).unwrap()
                        - signed_sine_2d(&cfg, &x, k, j).unwrap()
                            * signed_sine_2d(&cfg, &x, i, k).unwrap();
                    assert!((direct - via).abs() <= 1e-10);
                }
            }
        }
    }
}

fn valid_frames(cfg: &Configuration, x: &Point) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for j in 0..cfg.len() {
        for k in 0..cfg.len() {
            if j != k && spherical_frame(cfg, x, j, k).is_ok() {
                out.push((j, k));
            }
        }
    }
    out
}

#[test]
fn frame_angles_reconstruct_their_unit_vectors() {
    for (cfg, x) in pairs(Dim::Three, 64) {
        for (j, k) in valid_frames(&cfg, &x) {
            let frame = spherical_frame(&cfg, &x, j, k).unwrap();
            for a in spherical_frame_3d(&cfg, &x, j, k).unwrap() {
                assert!(a.alpha.abs() <= std::f64::consts::FRAC_PI_2);
                assert!(a.omega > -std::f64::consts::PI && a.omega <= std::f64::consts::PI);
                let u = unit_vector(&x, &cfg.position(a.index).unwrap())
                    .unwrap()
                    .as_point();
                let want = frame.coordinates(&u);
                for (p, q) in a.unit_vector().iter().zip(want) {
                    assert!((p - q).abs() <= 1e-10);
                }
            }
            // A_k lies in the equatorial half-plane with nonnegative sine
            let ak = spherical_frame_3d(&cfg, &x, j, k).unwrap();
            let ak = ak.iter().find(|a| a.index == k).unwrap();
            assert!(ak.alpha.abs() <= 1e-12 && ak.omega >= 0.0);
        }
    }
}

#[test]
fn component_sums_are_frame_coordinates_of_residual() {
    for (cfg, x) in pairs(Dim::Three, 64) {
        let r = balancing_residual(&cfg, &x).unwrap();
        let r2 = r.dot(&r);
        for (j, k) in valid_frames(&cfg, &x) {
            let s = component_sums_3d(&cfg, &x, j, k).unwrap();
            let want = spherical_frame(&cfg, &x, j, k).unwrap().coordinates(&r);
            for (a, b) in s.iter().zip(want) {
                assert!((a - b).abs() <= 1e-10);
            }
            let n2 = s.iter().map(|v| v * v).sum::<f64>();
            assert!((n2 - r2).abs() <= 1e-10 * r2.max(1e-300));
        }
    }
}

#[test]
fn verify_passes_on_solver_output() {
    let mut checked = 0;
    for seed in 0u64..200 {
        let m = 3 + (seed as usize % 5);
        let cfg = random_configuration(seed, m, mixed_dim(seed), 0.5, 2.0).unwrap();
        let out = solve(&cfg, &SolverOptions::default()).unwrap();
        if out.case != Case::Floating {
            continue;
        }
        let report = verify(&cfg, &out.minimizer, 1e-6).unwrap();
        assert!(report.passed, "seed {seed}");
        let report = verify(&cfg, &out.minimizer, DEFAULT_VERIFY_TOLERANCE).unwrap();
        assert!(report.passed, "seed {seed}");
        checked += 1;
    }
    assert!(checked > 100);
}

#[test]
fn verify_reports_one_entry_per_active_direction() {
    let cfg = random_configuration(5, 6, Dim::Three, 0.5, 2.0).unwrap();
    let mut rng = SplitMix64::new(1);
    let x = smooth_point(&cfg, &mut rng, 0.05);
    let report = verify(&cfg, &x, 1e-8).unwrap();
    assert_eq!(report.per_direction.len(), 6);
    assert_eq!(report.canonical_frame, Some((0, 1)));
    for d in &report.per_direction {
        assert!(d.triple.is_some() && d.sin_sum.is_none());
        assert!((d.component_norm() - report.residual_norm).abs() <= 1e-10 * report.total_weight);
    }
}
