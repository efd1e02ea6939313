use nalgebra::{Matrix6, SymmetricEigen, Vector3, Vector6};
use pmws_core::diffkin::{self, Vector12};
use pmws_core::geometry::{self, CarriageState, GeometryParams, Pose};
use pmws_core::JointLimits;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const STEP: f64 = 1e-6;

fn rel(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let diff = a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    diff / scale.max(f64::MIN_POSITIVE)
}

fn random_geometry(rng: &mut ChaCha8Rng) -> GeometryParams {
    GeometryParams::new(
        rng.random_range(10.0..100.0),
        14.0,
        100.0,
        114.5,
        rng.random_range(10.0..100.0),
        rng.random_range(10.0..90.0),
        rng.random_range(10.0..100.0),
    )
    .unwrap()
}

fn random_carriage(rng: &mut ChaCha8Rng, lim: &JointLimits) -> CarriageState {
    CarriageState::new(
        std::array::from_fn(|_| rng.random_range(lim.d_lo..=lim.d_hi)),
        std::array::from_fn(|_| rng.random_range(lim.eta_lo..=lim.eta_hi)),
    )
}

fn random_pose(rng: &mut ChaCha8Rng) -> Pose {
    Pose::new(
        Vector3::new(rng.random_range(-40.0..40.0), rng.random_range(-40.0..40.0), rng.random_range(100.0..160.0)),
        rng.random_range(-0.4..0.4),
        rng.random_range(-0.4..0.4),
        rng.random_range(-0.4..0.4),
    )
    .unwrap()
}

#[test]
fn carriage_rate_basis_matches_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let g = random_geometry(&mut rng);
        let lim = JointLimits::from_geometry(&g);
        let c = random_carriage(&mut rng, &lim);
        let (i, j) = (rng.random_range(0..3), rng.random_range(0..2));
        let point = |dd: f64, de: f64| {
            let mut c2 = c;
            c2.d[i] += dd;
            c2.eta[i] += de;
            geometry::carriage_points_unchecked(&g, &c2)[i][j]
        };
        let fd_h = (point(STEP, 0.0) - point(-STEP, 0.0)) / (2.0 * STEP);
        let fd_t = (point(0.0, STEP) - point(0.0, -STEP)) / (2.0 * STEP);
        let (h, t) = diffkin::carriage_rate_basis(&g, &c, i, j);
        assert!(rel(h.as_slice(), fd_h.as_slice()) < 1e-6, "h {h:?} vs {fd_h:?}");
        assert!(rel(t.as_slice(), fd_t.as_slice()) < 1e-6, "t {t:?} vs {fd_t:?}");
    }
}

#[test]
fn leg_rates_match_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let g = GeometryParams::reference();
    let lim = JointLimits::from_geometry(&g);
    for _ in 0..1000 {
        let pose = random_pose(&mut rng);
        let c = random_carriage(&mut rng, &lim);
        let jb = diffkin::jacobians(&g, &pose, &c).unwrap();
        let x_dot = Vector6::from_fn(|_, _| rng.random_range(-1.0..1.0));
        let d_dot: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let eta_dot: [f64; 3] = std::array::from_fn(|_| rng.random_range(-0.2..0.2));
        let at = |s: f64| {
            let [phi, theta, psi] = pose.euler();
            let p = Pose::new(
                pose.position() + s * Vector3::new(x_dot[0], x_dot[1], x_dot[2]),
                phi + s * x_dot[3],
                theta + s * x_dot[4],
                psi + s * x_dot[5],
            )
            .unwrap();
            let cs = CarriageState::new(
                std::array::from_fn(|i| c.d[i] + s * d_dot[i]),
                std::array::from_fn(|i| c.eta[i] + s * eta_dot[i]),
            );
            geometry::leg_lengths(&g, &p, &cs).flat()
        };
        let (lp, lm) = (at(STEP), at(-STEP));
        let fd: Vec<f64> = (0..6).map(|k| (lp[k] - lm[k]) / (2.0 * STEP)).collect();
        let predicted = jb.leg_rates(&x_dot, &d_dot, &eta_dot);
        assert!(rel(predicted.as_slice(), &fd) < 1e-6, "{predicted:?} vs {fd:?}");

        // The same identity through Jq: Jx x_dot = Jq [l_dot; d_dot; eta_dot].
        let q_dot = Vector12::from_iterator(fd.iter().copied().chain(d_dot).chain(eta_dot));
        assert!(rel((jb.jq * q_dot).as_slice(), (jb.jx * x_dot).as_slice()) < 1e-6);
    }
}

#[test]
fn small_actuator_step_predicts_pose_change() {
    let g = GeometryParams::reference();
    let pose = Pose::at(0.0, 0.0, 130.0);
    let c = CarriageState::zeros();
    let jb = diffkin::jacobians(&g, &pose, &c).unwrap();
    let big_l = g.characteristic_length();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..50 {
        let dx = Vector6::from_fn(|_, _| rng.random_range(-1.0..1.0)) * 1e-5;
        let dd: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0) * 1e-5);
        let de: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0) * 1e-5);
        // Central difference of the leg lengths along the step, so truncation error is second order.
        let legs = |s: f64| {
            let moved = Pose::new(pose.position() + s * Vector3::new(dx[0], dx[1], dx[2]), s * dx[3], s * dx[4], s * dx[5]).unwrap();
            let c2 = CarriageState::new(
                std::array::from_fn(|i| c.d[i] + s * dd[i]),
                std::array::from_fn(|i| c.eta[i] + s * de[i]),
            );
            geometry::leg_lengths(&g, &moved, &c2).flat()
        };
        let (lp, lm) = (legs(1.0), legs(-1.0));
        let dq = Vector12::from_iterator((0..6).map(|k| (lp[k] - lm[k]) / 2.0).chain(dd).chain(de));
        let predicted = jb.j * dq;
        let expected = Vector6::new(dx[0], dx[1], dx[2], big_l * dx[3], big_l * dx[4], big_l * dx[5]);
        assert!((predicted - expected).norm() / expected.norm() < 1e-4);
        let unscaled = jb.pose_rate(&dq);
        assert!((unscaled - dx).norm() / dx.norm() < 1e-4, "{unscaled:?} vs {dx:?}");
    }
    assert_eq!(jb.j * Vector12::zeros(), Vector6::zeros());
}

/// Condition number from the eigenvalues of `M^T M`, independent of the SVD.
fn eigen_condition(m: &Matrix6<f64>) -> f64 {
    let ev = SymmetricEigen::new(m.transpose() * m).eigenvalues;
    (ev.max() / ev.min()).sqrt()
}

#[test]
fn condition_number_matches_eigenvalue_route() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let g = GeometryParams::reference();
    let lim = JointLimits::from_geometry(&g);
    for _ in 0..200 {
        let pose = random_pose(&mut rng);
        let c = random_carriage(&mut rng, &lim);
        let jb = diffkin::jacobians(&g, &pose, &c).unwrap();
        let k = jb.condition_number();
        assert!(k >= 1.0);
        assert!((k - eigen_condition(&jb.jh)).abs() / k < 1e-8);
    }
}

#[test]
fn jx_row_depends_only_on_its_leg() {
    let g = GeometryParams::reference();
    let pose = Pose::new(Vector3::new(3.0, -7.0, 128.0), 0.05, -0.1, 0.2).unwrap();
    let base = CarriageState::new([10.0, 20.0, 30.0], [0.1, 0.2, 0.3]);
    let jb = diffkin::jacobians(&g, &pose, &base).unwrap();
    // Change groups 1 and 2 only: rows of group 0 must not move.
    let other = CarriageState::new([10.0, 45.0, 5.0], [0.1, 0.0, 0.5]);
    let jb2 = diffkin::jacobians(&g, &pose, &other).unwrap();
    for row in 0..2 {
        assert_eq!(jb.jx.row(row), jb2.jx.row(row));
        assert_eq!(jb.jq.row(row), jb2.jq.row(row));
    }
}

#[test]
fn homogenization_changes_only_rotational_block() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let g = GeometryParams::reference();
    let lim = JointLimits::from_geometry(&g);
    for _ in 0..50 {
        let jb = diffkin::jacobians(&g, &random_pose(&mut rng), &random_carriage(&mut rng, &lim)).unwrap();
        let l1 = rng.random_range(1.0..100.0);
        let l2 = rng.random_range(1.0..100.0);
        let (h1, h2) = (diffkin::homogenize(&jb.jx, l1), diffkin::homogenize(&jb.jx, l2));
        assert_eq!(h1.fixed_view::<6, 3>(0, 0), h2.fixed_view::<6, 3>(0, 0));
        for r in 0..6 {
            for col in 3..6 {
                if jb.jx[(r, col)] != 0.0 {
                    assert!(((h1[(r, col)] / h2[(r, col)]) / (l2 / l1) - 1.0).abs() < 1e-14);
                }
            }
        }
    }
}

#[test]
fn euler_rate_map_matches_angular_velocity() {
    // omega~ = R_dot R^T, with R_dot from central differences of the Euler angles.
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..200 {
        let e = [rng.random_range(-3.0..3.0), rng.random_range(-1.4..1.4), rng.random_range(-3.0..3.0)];
        let rate = Vector3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let r = |s: f64| *geometry::rotation_zyx(e[0] + s * rate.x, e[1] + s * rate.y, e[2] + s * rate.z).matrix();
        let r_dot = (r(STEP) - r(-STEP)) / (2.0 * STEP);
        let w = r_dot * r(0.0).transpose();
        let fd = Vector3::new(w[(2, 1)], w[(0, 2)], w[(1, 0)]);
        let analytic = diffkin::euler_rate_map(e[0], e[1], e[2]) * rate;
        assert!(rel(analytic.as_slice(), fd.as_slice()) < 1e-6, "{analytic:?} vs {fd:?}");
    }
}
