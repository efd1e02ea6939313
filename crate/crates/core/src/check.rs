//! Fast self-test battery: rotations, Jacobians against finite differences,
//! analytic reachability against the brute-force oracle, and the mobility count.

use nalgebra::{Vector3, Vector6};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diffkin;
use crate::error::Result;
use crate::geometry::{self, CarriageState, GeometryParams, Pose, GROUPS, LEGS_PER_GROUP};
use crate::reachability::{brute_force_reachable, JointLimits, ReachabilitySolver};

/// Mechanism count table: spatial order, links, joints, joint freedoms, redundant
/// constraints, passive freedoms.
pub const MOBILITY_TABLE: (i64, i64, i64, i64, i64, i64) = (6, 20, 24, 42, 0, 0);

pub const FD_STEP: f64 = 1e-6;
pub const FD_TOL: f64 = 1e-6;
pub const ORTHONORMAL_TOL: f64 = 1e-12;
/// Minimum agreement between the analytic solver and the oracle.
pub const AGREEMENT_MIN: f64 = 0.995;
pub const ANALYTIC_ETA_STEPS: usize = 181;
pub const ORACLE_STEPS: usize = 101;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    pub seed: u64,
    pub poses: usize,
    pub fd_samples: usize,
    /// Test hook: feeds the analytic solver the pose with `x` negated.
    pub inject_sign_fault: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            seed: 1,
            poses: 500,
            fd_samples: 1000,
            inject_sign_fault: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Uniform pose in the analytic reach cylinder with Euler angles in `±max_angle`.
pub fn random_pose(rng: &mut impl Rng, g: &GeometryParams, lim: &JointLimits, max_angle: f64) -> Pose {
    let bound = lim.l_hi + g.r().hypot(g.b() / 2.0);
    let p = Vector3::new(
        rng.random_range(-bound..=bound),
        rng.random_range(-bound..=bound),
        rng.random_range(0.0..=lim.l_hi),
    );
    let mut ang = || rng.random_range(-max_angle..=max_angle);
    Pose::new(p, ang(), ang(), ang()).expect("angles inside the Euler chart")
}

/// Largest relative difference `|a - b|_inf / |b|_inf`.
pub fn relative_error(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let diff = a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

fn check_rotations(rng: &mut ChaCha8Rng, n: usize) -> CheckOutcome {
    let mut worst = 0.0f64;
    for _ in 0..n {
        let phi = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        let theta = rng.random_range(-1.5..1.5);
        let psi = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        let axis = Vector3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)).normalize();
        let tau = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        let mats = [
            geometry::rotation_zyx(phi, theta, psi),
            geometry::rotation_about_axis(&axis, tau).expect("unit axis"),
        ];
        for r in mats {
            let m = r.matrix();
            let err = (m.transpose() * m - nalgebra::Matrix3::identity()).amax().max((m.determinant() - 1.0).abs());
            worst = worst.max(err);
        }
    }
    CheckOutcome {
        name: "rotation orthonormality",
        passed: worst < ORTHONORMAL_TOL,
        detail: format!("max |R^T R - I|, |det R - 1| = {worst:.3e} over {} matrices", 2 * n),
    }
}

fn random_carriage(rng: &mut ChaCha8Rng, lim: &JointLimits) -> CarriageState {
    let mut c = CarriageState::zeros();
    for i in 0..GROUPS {
        c.d[i] = rng.random_range(lim.d_lo..=lim.d_hi);
        c.eta[i] = rng.random_range(lim.eta_lo..=lim.eta_hi);
    }
    c
}

fn check_rate_basis(rng: &mut ChaCha8Rng, g: &GeometryParams, lim: &JointLimits, n: usize) -> CheckOutcome {
    let mut worst = 0.0f64;
    for _ in 0..n {
        let c = random_carriage(rng, lim);
        let i = rng.random_range(0..GROUPS);
        let j = rng.random_range(0..LEGS_PER_GROUP);
        let (h, t) = diffkin::carriage_rate_basis(g, &c, i, j);
        let at = |dd: f64, de: f64| geometry::carriage_point(g, i, j, c.d[i] + dd, c.eta[i] + de);
        let fd_h = (at(FD_STEP, 0.0) - at(-FD_STEP, 0.0)) / (2.0 * FD_STEP);
        let fd_t = (at(0.0, FD_STEP) - at(0.0, -FD_STEP)) / (2.0 * FD_STEP);
        worst = worst
            .max(relative_error(h.as_slice(), fd_h.as_slice()))
            .max(relative_error(t.as_slice(), fd_t.as_slice()));
    }
    CheckOutcome {
        name: "carriage rate basis vs finite differences",
        passed: worst < FD_TOL,
        detail: format!("max relative error {worst:.3e} over {n} samples"),
    }
}

/// Reachable pose and its witness carriage state, by rejection sampling.
fn random_feasible(rng: &mut ChaCha8Rng, g: &GeometryParams, solver: &ReachabilitySolver) -> (Pose, CarriageState) {
    loop {
        let pose = random_pose(rng, g, solver.limits(), 0.3);
        if let Some(c) = solver.check(&pose).witness {
            return (pose, c);
        }
    }
}

fn check_rate_identity(rng: &mut ChaCha8Rng, g: &GeometryParams, lim: &JointLimits, n: usize) -> Result<CheckOutcome> {
    let solver = ReachabilitySolver::new(g, lim, 31)?;
    let mut worst = 0.0f64;
    let mut used = 0;
    while used < n {
        let (pose, c) = random_feasible(rng, g, &solver);
        let Ok(jb) = diffkin::jacobians(g, &pose, &c) else { continue };
        let x_dot = Vector6::from_fn(|_, _| rng.random_range(-1.0..1.0));
        let d_dot: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let eta_dot: [f64; 3] = std::array::from_fn(|_| rng.random_range(-0.1..0.1));
        let predicted = jb.leg_rates(&x_dot, &d_dot, &eta_dot);
        let lengths = |s: f64| {
            let [phi, theta, psi] = pose.euler();
            let p = Pose::new(
                pose.position() + s * x_dot.fixed_rows::<3>(0),
                phi + s * x_dot[3],
                theta + s * x_dot[4],
                psi + s * x_dot[5],
            )
            .expect("inside the Euler chart");
            let cs = CarriageState::new(
                std::array::from_fn(|i| c.d[i] + s * d_dot[i]),
                std::array::from_fn(|i| c.eta[i] + s * eta_dot[i]),
            );
            geometry::leg_lengths(g, &p, &cs).flat()
        };
        let (lp, lm) = (lengths(FD_STEP), lengths(-FD_STEP));
        let fd: Vec<f64> = (0..6).map(|k| (lp[k] - lm[k]) / (2.0 * FD_STEP)).collect();
        worst = worst.max(relative_error(predicted.as_slice(), &fd));
        used += 1;
    }
    Ok(CheckOutcome {
        name: "leg rate identity vs finite differences",
        passed: worst < FD_TOL,
        detail: format!("max relative error {worst:.3e} over {n} reachable configurations"),
    })
}

/// Agreement statistics of the analytic solver against the brute-force oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Agreement {
    pub total: usize,
    pub agree: usize,
    /// Disagreements that flip when the leg-length limits move by one oracle cell.
    pub near_boundary: usize,
}

impl Agreement {
    pub fn fraction(&self) -> f64 {
        self.agree as f64 / self.total.max(1) as f64
    }

    pub fn passed(&self) -> bool {
        self.fraction() >= AGREEMENT_MIN && self.near_boundary == self.total - self.agree
    }
}

/// Largest leg-length change caused by moving one oracle cell in `(d, eta)`.
pub fn oracle_cell_length(g: &GeometryParams, lim: &JointLimits, d_steps: usize, eta_steps: usize) -> f64 {
    let dd = (lim.d_hi - lim.d_lo) / (d_steps - 1) as f64;
    let de = (lim.eta_hi - lim.eta_lo) / (eta_steps - 1) as f64;
    dd + g.r().hypot(g.b() / 2.0) * de
}

fn widened(lim: &JointLimits, by: f64) -> JointLimits {
    JointLimits {
        l_lo: (lim.l_lo - by).max(0.0),
        l_hi: lim.l_hi + by,
        ..*lim
    }
}

pub fn reachability_agreement(
    g: &GeometryParams,
    lim: &JointLimits,
    poses: &[Pose],
    inject_sign_fault: bool,
) -> Result<Agreement> {
    let solver = ReachabilitySolver::new(g, lim, ANALYTIC_ETA_STEPS)?;
    let cell = oracle_cell_length(g, lim, ORACLE_STEPS, ORACLE_STEPS);
    let outer = ReachabilitySolver::new(g, &widened(lim, cell), ANALYTIC_ETA_STEPS)?;
    let inner = ReachabilitySolver::new(g, &widened(lim, -cell), ANALYTIC_ETA_STEPS)?;
    let mut stats = Agreement {
        total: poses.len(),
        agree: 0,
        near_boundary: 0,
    };
    for pose in poses {
        let probe = if inject_sign_fault {
            let p = pose.position();
            pose.with_position(Vector3::new(-p.x, p.y, p.z))
        } else {
            *pose
        };
        let analytic = solver.is_reachable(&probe);
        let oracle = brute_force_reachable(g, lim, pose, ORACLE_STEPS, ORACLE_STEPS)?;
        if analytic == oracle {
            stats.agree += 1;
        } else if outer.is_reachable(pose) && !inner.is_reachable(pose) {
            stats.near_boundary += 1;
        }
    }
    Ok(stats)
}

fn check_reachability(rng: &mut ChaCha8Rng, g: &GeometryParams, lim: &JointLimits, opts: &CheckOptions) -> Result<CheckOutcome> {
    let poses: Vec<Pose> = (0..opts.poses).map(|_| random_pose(rng, g, lim, 0.3)).collect();
    let a = reachability_agreement(g, lim, &poses, opts.inject_sign_fault)?;
    Ok(CheckOutcome {
        name: "analytic reachability vs brute-force oracle",
        passed: a.passed(),
        detail: format!(
            "agreement {}/{} ({:.2}%), {} of {} disagreements within one oracle cell of the boundary",
            a.agree,
            a.total,
            100.0 * a.fraction(),
            a.near_boundary,
            a.total - a.agree
        ),
    })
}

fn check_mobility() -> CheckOutcome {
    let (d, n, gj, f, nu, xi) = MOBILITY_TABLE;
    let m = geometry::mobility(d, n, gj, f, nu, xi);
    CheckOutcome {
        name: "mobility",
        passed: m == 12,
        detail: format!("M = {d}({n} - {gj} - 1) + {f} + {nu} - {xi} = {m}"),
    }
}

/// Runs every check; each is reported even if an earlier one failed.
pub fn run_checks(g: &GeometryParams, lim: &JointLimits, opts: &CheckOptions) -> Result<Vec<CheckOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    Ok(vec![
        check_rotations(&mut rng, opts.fd_samples),
        check_rate_basis(&mut rng, g, lim, opts.fd_samples),
        check_rate_identity(&mut rng, g, lim, opts.fd_samples)?,
        check_reachability(&mut rng, g, lim, opts)?,
        check_mobility(),
    ])
}
