//! Acceptance criteria, one test per criterion. Each test prints a single
//! `PASS`/`FAIL criterion N: ...` line before asserting. Run with
//! `cargo test -p pmws-core --test acceptance -- --nocapture` to see them.

use std::sync::OnceLock;

use nalgebra::{Matrix3, Vector3, Vector6};
use pmws_core::analysis::{self, Analysis, Resolution, Scope};
use pmws_core::diffkin;
use pmws_core::geometry::{self, CarriageState, DesignParam, GeometryParams, Pose};
use pmws_core::sweep::{self, Metric, ParamRange, SweepResult, SweepSpec, Trend};
use pmws_core::{JointLimits, ReachabilitySolver};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const REFERENCE_VOLUME: f64 = 3.47e6;
const VOLUME_TOL: f64 = 0.10;
const CONVERGENCE_TOL: f64 = 0.05;
const REFERENCE_TI1: f64 = 2789.17;
const REFERENCE_TI2: f64 = 4853.13;
const TI_TOL: f64 = 0.20;
const SWEEP_SPACING: f64 = 2.5;
const COMPLETENESS_THRESHOLD: f64 = 0.99;
const NEAR_OPTIMAL: f64 = 0.95;
const AGREEMENT_MIN: f64 = 0.995;
const ORACLE_POSES: usize = 10_000;
const ANALYTIC_ETA_STEPS: usize = 181;
const ORACLE_STEPS: usize = 101;
const FD_STEP: f64 = 1e-6;
const FD_TOL: f64 = 1e-6;
const FD_CONFIGS: usize = 1000;
const ORTHONORMAL_TOL: f64 = 1e-12;

fn verdict(n: u32, passed: bool, detail: String) {
    println!("{} criterion {n}: {detail}", if passed { "PASS" } else { "FAIL" });
    assert!(passed, "criterion {n}: {detail}");
}

fn reference() -> GeometryParams {
    GeometryParams::reference()
}

fn reference_analysis() -> &'static Analysis {
    static CELL: OnceLock<Analysis> = OnceLock::new();
    CELL.get_or_init(|| {
        let g = reference();
        analysis::analyze(&g, &JointLimits::from_geometry(&g), &Resolution::default()).unwrap()
    })
}

fn volume_at(g: &GeometryParams, spacing: f64) -> f64 {
    let res = Resolution {
        spacing,
        ..Resolution::default()
    };
    let scope = Scope {
        position: true,
        orientation: false,
    };
    let a = analysis::analyze_scoped(g, &JointLimits::from_geometry(g), &res, scope).unwrap();
    a.report.volume.unwrap()
}

fn fine_volume() -> f64 {
    static CELL: OnceLock<f64> = OnceLock::new();
    *CELL.get_or_init(|| volume_at(&reference(), 1.0))
}

fn sweep_resolution() -> Resolution {
    Resolution {
        spacing: SWEEP_SPACING,
        coord_step: SWEEP_SPACING,
        ..Resolution::default()
    }
}

/// Single-parameter sweeps at step 10 over the design ranges, with volume and TI1.
fn single_sweeps() -> &'static Vec<SweepResult> {
    static CELL: OnceLock<Vec<SweepResult>> = OnceLock::new();
    CELL.get_or_init(|| {
        [
            (DesignParam::A, 10.0, 100.0),
            (DesignParam::Ds, 10.0, 90.0),
            (DesignParam::EtaS, 10.0, 100.0),
            (DesignParam::Ls, 10.0, 100.0),
        ]
        .into_iter()
        .map(|(p, lo, hi)| {
            let spec = SweepSpec::new(
                reference(),
                vec![ParamRange::new(p, lo, hi, 10.0).unwrap()],
                vec![Metric::Volume, Metric::Ti1],
                sweep_resolution(),
            );
            sweep::run_sweep(&spec).unwrap()
        })
        .collect()
    })
}

fn sweep_for(param: DesignParam) -> &'static SweepResult {
    single_sweeps().iter().find(|r| r.params[0] == param).unwrap()
}

fn column(r: &SweepResult, metric: Metric) -> Vec<f64> {
    r.column(metric).unwrap().into_iter().map(|v| v.expect("every sweep row evaluates")).collect()
}

fn rel(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let diff = a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    diff / scale.max(f64::MIN_POSITIVE)
}

#[test]
fn criterion_1_mobility() {
    let m = geometry::mobility(6, 20, 24, 42, 0, 0);
    verdict(1, m == 12, format!("mobility(6, 20, 24, 42, 0, 0) = {m}, expected 12"));
}

#[test]
fn criterion_2_reference_volume() {
    let v2 = reference_analysis().report.volume.unwrap();
    let v1 = fine_volume();
    let err = (v2 - REFERENCE_VOLUME).abs() / REFERENCE_VOLUME;
    let change = (v2 - v1).abs() / v1;
    verdict(
        2,
        err <= VOLUME_TOL && change < CONVERGENCE_TOL,
        format!(
            "V(h=2) = {v2:.4e} vs {REFERENCE_VOLUME:.3e} (error {:.1}%, tol {:.0}%); V(h=1) = {v1:.4e}, change {:.2}% (tol {:.0}%)",
            100.0 * err,
            100.0 * VOLUME_TOL,
            100.0 * change,
            100.0 * CONVERGENCE_TOL
        ),
    );
}

#[test]
fn criterion_3_capability_indices() {
    let r = &reference_analysis().report;
    let (ti1, ti2) = (r.ti1.unwrap(), r.ti2.unwrap());
    let e1 = (ti1 - REFERENCE_TI1).abs() / REFERENCE_TI1;
    let e2 = (ti2 - REFERENCE_TI2).abs() / REFERENCE_TI2;
    verdict(
        3,
        e1 <= TI_TOL && e2 <= TI_TOL,
        format!(
            "TI1 = {ti1:.1} vs {REFERENCE_TI1} (error {:.0}%), TI2 = {ti2:.1} vs {REFERENCE_TI2} (error {:.0}%), tol {:.0}%",
            100.0 * e1,
            100.0 * e2,
            100.0 * TI_TOL
        ),
    );
}

#[test]
fn criterion_4_volume_trends() {
    let expected = [
        (DesignParam::A, Trend::RiseThenFall),
        (DesignParam::Ds, Trend::RiseThenPlateau),
        (DesignParam::EtaS, Trend::Increasing),
        (DesignParam::Ls, Trend::Increasing),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    let mut ranges = Vec::new();
    for (param, want) in expected {
        let r = sweep_for(param);
        let got = r.verdict(Metric::Volume);
        ok &= got == Some(want);
        parts.push(format!(
            "{}: {} (want {})",
            param.name(),
            got.map_or("none", Trend::name),
            want.name()
        ));
        let v = column(r, Metric::Volume);
        let range = v.iter().cloned().fold(f64::MIN, f64::max) - v.iter().cloned().fold(f64::MAX, f64::min);
        ranges.push((param, range));
    }
    let widest = ranges.iter().max_by(|x, y| x.1.total_cmp(&y.1)).unwrap().0;
    ok &= widest == DesignParam::Ls;
    parts.push(format!("largest volume range: {} (want l_s)", widest.name()));
    verdict(4, ok, parts.join("; "));
}

#[test]
fn sweep_spacing_discretization_is_small() {
    let coarse = volume_at(&reference(), SWEEP_SPACING);
    let change = (coarse - fine_volume()).abs() / fine_volume();
    println!("volume change between spacing {SWEEP_SPACING} and 1.0: {:.2}%", 100.0 * change);
    assert!(change < 0.07);
}

#[test]
fn criterion_5_boundary_classification() {
    let base = reference();
    let complete = [
        ("reference", base),
        ("d_s=80", base.with_param(DesignParam::Ds, 80.0).unwrap()),
        ("eta_s=10", base.with_param(DesignParam::EtaS, 10.0).unwrap()),
        ("eta_s=60", base.with_param(DesignParam::EtaS, 60.0).unwrap()),
    ];
    let incomplete = [
        ("a=10", base.with_param(DesignParam::A, 10.0).unwrap()),
        ("a=80", base.with_param(DesignParam::A, 80.0).unwrap()),
        ("d_s=10", base.with_param(DesignParam::Ds, 10.0).unwrap()),
        ("l_s=20", base.with_param(DesignParam::Ls, 20.0).unwrap()),
    ];
    let scope = Scope {
        position: true,
        orientation: false,
    };
    let res = Resolution {
        completeness_threshold: COMPLETENESS_THRESHOLD,
        ..Resolution::default()
    };
    let cases: Vec<(&str, GeometryParams, bool)> = complete
        .iter()
        .map(|&(n, g)| (n, g, true))
        .chain(incomplete.iter().map(|&(n, g)| (n, g, false)))
        .collect();
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, g, want) in cases {
        let a = analysis::analyze_scoped(&g, &JointLimits::from_geometry(&g), &res, scope).unwrap();
        let c = a.report.boundary_completeness.unwrap_or(0.0);
        let got = c >= COMPLETENESS_THRESHOLD;
        ok &= got == want;
        parts.push(format!("{name} {c:.3} {}", if got { "complete" } else { "incomplete" }));
    }
    verdict(5, ok, parts.join(", "));
}

#[test]
fn criterion_6_surface_optimum() {
    let spec = SweepSpec::new(
        reference(),
        vec![
            ParamRange::new(DesignParam::A, 10.0, 100.0, 10.0).unwrap(),
            ParamRange::new(DesignParam::Ds, 10.0, 90.0, 10.0).unwrap(),
        ],
        vec![Metric::Volume],
        sweep_resolution(),
    );
    let r = sweep::run_surface(&spec).unwrap();
    // Independent near-optimal test from the raw volume column.
    let vols: Vec<f64> = r.rows.iter().map(|row| row.metrics[0].unwrap_or(f64::NEG_INFINITY)).collect();
    let max = vols.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let near: Vec<(f64, f64)> = r
        .rows
        .iter()
        .zip(&vols)
        .filter(|(_, &v)| v >= NEAR_OPTIMAL * max)
        .map(|(row, _)| (row.params[0], row.params[1]))
        .collect();
    let summary = r.surface.as_ref().unwrap();
    assert_eq!(summary.near_optimal.iter().filter(|&&b| b).count(), near.len());
    let best = &r.rows[summary.argmax.unwrap()].params;
    let hit = near.iter().any(|&(a, d)| a > 55.0 && d < 55.0);
    verdict(
        6,
        hit,
        format!(
            "max V = {max:.4e} at (a, d_s) = ({}, {}); 95% region {:?}; intersects a>55, d_s<55: {hit}",
            best[0], best[1], near
        ),
    );
}

/// Exhaustive `(d, eta)` grid per group, testing leg lengths directly.
fn grid_oracle(g: &GeometryParams, lim: &JointLimits, pose: &Pose) -> bool {
    let b = geometry::platform_points(g, pose);
    let step = |lo: f64, hi: f64, k: usize| lo + (hi - lo) * k as f64 / (ORACLE_STEPS - 1) as f64;
    (0..3).all(|i| {
        (0..ORACLE_STEPS).any(|ke| {
            let eta = step(lim.eta_lo, lim.eta_hi, ke);
            (0..ORACLE_STEPS).any(|kd| {
                let d = step(lim.d_lo, lim.d_hi, kd);
                (0..2).all(|j| {
                    let l = (b[i][j] - geometry::carriage_point(g, i, j, d, eta)).norm();
                    l >= lim.l_lo - 1e-9 && l <= lim.l_hi + 1e-9
                })
            })
        })
    })
}

fn shifted(lim: &JointLimits, by: f64) -> JointLimits {
    JointLimits {
        l_lo: lim.l_lo - by,
        l_hi: lim.l_hi + by,
        ..*lim
    }
}

#[test]
fn criterion_7_oracle_equivalence() {
    let g = reference();
    let lim = JointLimits::from_geometry(&g);
    let solver = ReachabilitySolver::new(&g, &lim, ANALYTIC_ETA_STEPS).unwrap();
    // Moving a carriage by one oracle cell moves a carriage point by at most this much.
    let cell = (lim.d_hi - lim.d_lo) / (ORACLE_STEPS - 1) as f64
        + g.r().hypot(g.b() / 2.0) * (lim.eta_hi - lim.eta_lo) / (ORACLE_STEPS - 1) as f64;
    let outer = ReachabilitySolver::new(&g, &shifted(&lim, cell), ANALYTIC_ETA_STEPS).unwrap();
    let inner = ReachabilitySolver::new(&g, &shifted(&lim, -cell), ANALYTIC_ETA_STEPS).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let bound = lim.l_hi + g.r().hypot(g.b() / 2.0);
    let poses: Vec<Pose> = (0..ORACLE_POSES)
        .map(|_| {
            let p = Vector3::new(
                rng.random_range(-bound..bound),
                rng.random_range(-bound..bound),
                rng.random_range(0.0..lim.l_hi),
            );
            let mut ang = || rng.random_range(-0.3..0.3);
            Pose::new(p, ang(), ang(), ang()).unwrap()
        })
        .collect();
    let outcomes: Vec<(bool, bool, bool)> = poses
        .par_iter()
        .map(|pose| {
            let analytic = solver.is_reachable(pose);
            let oracle = grid_oracle(&g, &lim, pose);
            let near = outer.is_reachable(pose) && !inner.is_reachable(pose);
            (analytic, oracle, near)
        })
        .collect();
    let agree = outcomes.iter().filter(|o| o.0 == o.1).count();
    let reachable = outcomes.iter().filter(|o| o.1).count();
    let far = outcomes.iter().filter(|o| o.0 != o.1 && !o.2).count();
    let fraction = agree as f64 / ORACLE_POSES as f64;
    verdict(
        7,
        fraction >= AGREEMENT_MIN && far == 0,
        format!(
            "{agree}/{ORACLE_POSES} agree ({:.2}%, min {:.1}%), {reachable} reachable by the oracle, {far} disagreements away from the boundary",
            100.0 * fraction,
            100.0 * AGREEMENT_MIN
        ),
    );
}

#[test]
fn criterion_8_differential_kinematics() {
    let g = reference();
    let lim = JointLimits::from_geometry(&g);
    let solver = ReachabilitySolver::new(&g, &lim, 61).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut configs: Vec<(Pose, CarriageState)> = Vec::new();
    while configs.len() < FD_CONFIGS {
        let pose = Pose::new(
            Vector3::new(rng.random_range(-60.0..60.0), rng.random_range(-60.0..60.0), rng.random_range(60.0..165.0)),
            rng.random_range(-0.3..0.3),
            rng.random_range(-0.3..0.3),
            rng.random_range(-0.6..0.6),
        )
        .unwrap();
        if let Some(c) = solver.check(&pose).witness {
            configs.push((pose, c));
        }
    }

    let mut basis_err = 0.0f64;
    let mut rate_err = 0.0f64;
    for (pose, c) in &configs {
        for i in 0..3 {
            for j in 0..2 {
                let at = |dd: f64, de: f64| geometry::carriage_point(&g, i, j, c.d[i] + dd, c.eta[i] + de);
                let fd_h = (at(FD_STEP, 0.0) - at(-FD_STEP, 0.0)) / (2.0 * FD_STEP);
                let fd_t = (at(0.0, FD_STEP) - at(0.0, -FD_STEP)) / (2.0 * FD_STEP);
                let (h, t) = diffkin::carriage_rate_basis(&g, c, i, j);
                basis_err = basis_err.max(rel(h.as_slice(), fd_h.as_slice())).max(rel(t.as_slice(), fd_t.as_slice()));
            }
        }
        let jb = diffkin::jacobians(&g, pose, c).unwrap();
        let x_dot = Vector6::from_fn(|_, _| rng.random_range(-1.0..1.0));
        let d_dot: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let eta_dot: [f64; 3] = std::array::from_fn(|_| rng.random_range(-0.1..0.1));
        let legs = |s: f64| {
            let [phi, theta, psi] = pose.euler();
            let p = Pose::new(
                pose.position() + s * Vector3::new(x_dot[0], x_dot[1], x_dot[2]),
                phi + s * x_dot[3],
                theta + s * x_dot[4],
                psi + s * x_dot[5],
            )
            .unwrap();
            let cs = CarriageState::new(
                std::array::from_fn(|k| c.d[k] + s * d_dot[k]),
                std::array::from_fn(|k| c.eta[k] + s * eta_dot[k]),
            );
            geometry::leg_lengths(&g, &p, &cs).flat()
        };
        let (lp, lm) = (legs(FD_STEP), legs(-FD_STEP));
        let fd: Vec<f64> = (0..6).map(|k| (lp[k] - lm[k]) / (2.0 * FD_STEP)).collect();
        rate_err = rate_err.max(rel(jb.leg_rates(&x_dot, &d_dot, &eta_dot).as_slice(), &fd));
    }

    let mut orth_err = 0.0f64;
    let check = |m: &Matrix3<f64>| (m.transpose() * m - Matrix3::identity()).amax().max((m.determinant() - 1.0).abs());
    for _ in 0..FD_CONFIGS {
        let (phi, theta, psi) = (rng.random_range(-3.2..3.2), rng.random_range(-1.5..1.5), rng.random_range(-3.2..3.2));
        orth_err = orth_err.max(check(geometry::rotation_zyx(phi, theta, psi).matrix()));
        let axis = Vector3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)).normalize();
        orth_err = orth_err.max(check(geometry::rotation_about_axis(&axis, phi).unwrap().matrix()));
        orth_err = orth_err.max(check(geometry::rotation_from_quaternion(&axis, phi).matrix()));
    }
    for (pose, _) in &configs {
        orth_err = orth_err.max(check(pose.rotation().matrix()));
    }

    verdict(
        8,
        basis_err < FD_TOL && rate_err < FD_TOL && orth_err <= ORTHONORMAL_TOL,
        format!(
            "{FD_CONFIGS} feasible configs: rate basis rel err {basis_err:.2e}, rate identity rel err {rate_err:.2e} (tol {FD_TOL:.0e}); rotation orthonormality err {orth_err:.2e} (tol {ORTHONORMAL_TOL:.0e})"
        ),
    );
}

#[test]
fn criterion_9_torsion_dominance() {
    let gains: Vec<(DesignParam, f64)> = single_sweeps()
        .iter()
        .map(|r| {
            let ti1 = column(r, Metric::Ti1);
            let (first, last) = (ti1[0], *ti1.last().unwrap());
            (r.params[0], (last - first) / first)
        })
        .collect();
    let eta = gains.iter().find(|g| g.0 == DesignParam::EtaS).unwrap().1;
    let ok = gains.iter().all(|&(p, gain)| p == DesignParam::EtaS || eta > gain);
    let parts: Vec<String> = gains.iter().map(|(p, gain)| format!("{} {:+.1}%", p.name(), 100.0 * gain)).collect();
    verdict(9, ok, format!("relative TI1 gain across each sweep: {}", parts.join(", ")));
}
