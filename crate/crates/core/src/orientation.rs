//! Orientation capability along the mechanism's symmetry axes, and the
//! torsional / tilting capability indices built from those scans.

use nalgebra::Vector3;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{rotation_about_axis, y_prime_axis, Pose};
use crate::reachability::ReachabilitySolver;

/// Default height of the transverse scan lines.
pub const DEFAULT_SCAN_HEIGHT: f64 = 130.0;

/// Scan line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScanAxis {
    /// Vertical line `x = y' = 0`.
    #[serde(rename = "z")]
    Z,
    /// Horizontal line along `y'` at the scan height.
    #[serde(rename = "y'")]
    YPrime,
    /// Horizontal line along `x` at the scan height.
    #[serde(rename = "x")]
    X,
}

impl ScanAxis {
    pub const ALL: [ScanAxis; 3] = [ScanAxis::Z, ScanAxis::YPrime, ScanAxis::X];

    pub fn name(self) -> &'static str {
        match self {
            ScanAxis::Z => "z",
            ScanAxis::YPrime => "y'",
            ScanAxis::X => "x",
        }
    }

    /// Platform center at scan coordinate `s`.
    pub fn position(self, s: f64, height: f64) -> Vector3<f64> {
        match self {
            ScanAxis::Z => Vector3::new(0.0, 0.0, s),
            ScanAxis::YPrime => y_prime_axis() * s + Vector3::new(0.0, 0.0, height),
            ScanAxis::X => Vector3::new(s, 0.0, height),
        }
    }
}

/// Which angle is swept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AngleMode {
    /// Torsion about `z`.
    Phi,
    /// Tilt about `y'`.
    Tau,
    /// Tilt about `x`.
    Psi,
}

impl AngleMode {
    pub const ALL: [AngleMode; 3] = [AngleMode::Phi, AngleMode::Tau, AngleMode::Psi];

    pub fn name(self) -> &'static str {
        match self {
            AngleMode::Phi => "phi",
            AngleMode::Tau => "tau",
            AngleMode::Psi => "psi",
        }
    }

    /// Pose at `position` with the swept angle set to `angle` (radians).
    pub fn pose(self, position: Vector3<f64>, angle: f64) -> Result<Pose> {
        match self {
            AngleMode::Phi => Pose::new(position, 0.0, 0.0, angle),
            AngleMode::Psi => Pose::new(position, angle, 0.0, 0.0),
            AngleMode::Tau => Pose::from_rotation(position, &rotation_about_axis(&y_prime_axis(), angle)?),
        }
    }
}

/// Which feasible angles enter the per-sample hull.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HullPolicy {
    /// Every feasible sampled angle.
    AllFeasible,
    /// Only the connected part of the `(coordinate, angle)` region that
    /// contains the home orientation `angle = 0` somewhere on the line.
    #[default]
    HomeConnected,
}

impl HullPolicy {
    pub fn name(self) -> &'static str {
        match self {
            HullPolicy::AllFeasible => "all_feasible",
            HullPolicy::HomeConnected => "home_connected",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "all_feasible" => Some(HullPolicy::AllFeasible),
            "home_connected" => Some(HullPolicy::HomeConnected),
            _ => None,
        }
    }
}

/// Sampling of one scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanSpec {
    pub coord_range: (f64, f64),
    pub coord_step: f64,
    /// Degrees.
    pub angle_range: (f64, f64),
    /// Degrees.
    pub angle_step: f64,
    pub fixed_height: f64,
    pub hull_policy: HullPolicy,
}

impl ScanSpec {
    fn validate(&self) -> Result<()> {
        if !(self.coord_step > 0.0) || !(self.angle_step > 0.0) {
            return Err(Error::InvalidArgument("scan steps must be > 0".into()));
        }
        if !(self.coord_range.0 <= self.coord_range.1) || !(self.angle_range.0 <= self.angle_range.1) {
            return Err(Error::InvalidArgument("scan ranges must satisfy min <= max".into()));
        }
        Ok(())
    }

    fn samples(range: (f64, f64), step: f64) -> Vec<f64> {
        let n = ((range.1 - range.0) / step + 1e-9).floor() as usize + 1;
        (0..n).map(|k| range.0 + k as f64 * step).collect()
    }

    pub fn coordinates(&self) -> Vec<f64> {
        Self::samples(self.coord_range, self.coord_step)
    }

    pub fn angles(&self) -> Vec<f64> {
        Self::samples(self.angle_range, self.angle_step)
    }
}

/// Feasible angles at one scan coordinate, in degrees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrientationSample {
    pub coordinate: f64,
    /// Hull `[min, max]` of feasible angles, `None` if none is feasible.
    pub hull: Option<(f64, f64)>,
    /// Maximal runs of consecutive feasible angle samples.
    pub intervals: Vec<(f64, f64)>,
    /// Angle samples skipped because they left the Euler chart.
    pub skipped: usize,
}

impl OrientationSample {
    pub fn span(&self) -> f64 {
        self.hull.map_or(0.0, |(lo, hi)| hi - lo)
    }
}

/// Sampled `(coordinate, angle)` feasibility region of one scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrientationRegion {
    pub axis: ScanAxis,
    pub angle_mode: AngleMode,
    pub coordinate_step: f64,
    pub angle_step: f64,
    pub samples: Vec<OrientationSample>,
}

impl OrientationRegion {
    /// Riemann-sum area `sum (max - min) * coordinate_step`, in degree-length units.
    pub fn area(&self) -> f64 {
        self.samples.iter().map(OrientationSample::span).sum::<f64>() * self.coordinate_step
    }

    pub fn skipped(&self) -> usize {
        self.samples.iter().map(|s| s.skipped).sum()
    }
}

/// Sweeps the angle of `mode` at each coordinate of the scan line `axis`.
pub fn orientation_scan(solver: &ReachabilitySolver, axis: ScanAxis, mode: AngleMode, spec: &ScanSpec) -> Result<OrientationRegion> {
    spec.validate()?;
    let angles = spec.angles();
    let samples = spec
        .coordinates()
        .into_par_iter()
        .map(|s| {
            let position = axis.position(s, spec.fixed_height);
            let mut skipped = 0;
            let mut intervals: Vec<(f64, f64)> = Vec::new();
            let mut run: Option<(f64, f64)> = None;
            for &deg in &angles {
                let ok = match mode.pose(position, deg.to_radians()) {
                    Ok(pose) => solver.is_reachable(&pose),
                    Err(_) => {
                        skipped += 1;
                        false
                    }
                };
                run = match (ok, run) {
                    (true, None) => Some((deg, deg)),
                    (true, Some((lo, _))) => Some((lo, deg)),
                    (false, Some(iv)) => {
                        intervals.push(iv);
                        None
                    }
                    (false, None) => None,
                };
            }
            intervals.extend(run);
            let hull = match (intervals.first(), intervals.last()) {
                (Some(f), Some(l)) => Some((f.0, l.1)),
                _ => None,
            };
            OrientationSample {
                coordinate: s,
                hull,
                intervals,
                skipped,
            }
        })
        .collect::<Vec<_>>();
    let samples = match spec.hull_policy {
        HullPolicy::AllFeasible => samples,
        HullPolicy::HomeConnected => restrict_to_home(samples, spec.angle_step),
    };
    Ok(OrientationRegion {
        axis,
        angle_mode: mode,
        coordinate_step: spec.coord_step,
        angle_step: spec.angle_step,
        samples,
    })
}

/// Recomputes each hull over the runs 4-connected to a run containing angle 0.
/// Runs on adjacent samples connect when their angle ranges overlap.
fn restrict_to_home(mut samples: Vec<OrientationSample>, angle_step: f64) -> Vec<OrientationSample> {
    let eps = 1e-9 * angle_step.max(1.0);
    let mut keep: Vec<Vec<bool>> = samples.iter().map(|s| vec![false; s.intervals.len()]).collect();
    let mut stack = Vec::new();
    for (k, s) in samples.iter().enumerate() {
        for (m, &(lo, hi)) in s.intervals.iter().enumerate() {
            if lo <= eps && hi >= -eps {
                keep[k][m] = true;
                stack.push((k, m));
            }
        }
    }
    while let Some((k, m)) = stack.pop() {
        let (lo, hi) = samples[k].intervals[m];
        for nk in [k.wrapping_sub(1), k + 1] {
            let Some(ns) = samples.get(nk) else { continue };
            for (nm, &(nlo, nhi)) in ns.intervals.iter().enumerate() {
                if !keep[nk][nm] && nlo <= hi + eps && nhi >= lo - eps {
                    keep[nk][nm] = true;
                    stack.push((nk, nm));
                }
            }
        }
    }
    for (s, kept) in samples.iter_mut().zip(&keep) {
        s.hull = s
            .intervals
            .iter()
            .zip(kept)
            .filter(|(_, &k)| k)
            .map(|(iv, _)| *iv)
            .reduce(|a, b| (a.0.min(b.0), a.1.max(b.1)));
    }
    samples
}

/// Torsional and tilting capability indices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapabilityIndices {
    pub ti1: f64,
    pub ti2: f64,
}

/// `TI1` averages the three torsion areas; `TI2` averages the six tilt areas.
///
/// Requires exactly one region per `(axis, mode)` pair, all sharing one
/// coordinate step and one angle step.
pub fn capability_indices(regions: &[OrientationRegion]) -> Result<CapabilityIndices> {
    if regions.len() != 9 {
        return Err(Error::InvalidArgument(format!("expected 9 orientation regions, got {}", regions.len())));
    }
    let first = &regions[0];
    let mut area = std::collections::HashMap::new();
    for reg in regions {
        if (reg.coordinate_step - first.coordinate_step).abs() > 1e-12 || (reg.angle_step - first.angle_step).abs() > 1e-12 {
            return Err(Error::InvalidArgument("orientation regions use inconsistent grids".into()));
        }
        if area.insert((reg.axis, reg.angle_mode), reg.area()).is_some() {
            return Err(Error::InvalidArgument(format!(
                "duplicate region for axis {} mode {}",
                reg.axis.name(),
                reg.angle_mode.name()
            )));
        }
    }
    let a = |axis, mode| area[&(axis, mode)];
    let ti1 = ScanAxis::ALL.iter().map(|&ax| a(ax, AngleMode::Phi)).sum::<f64>() / 3.0;
    let ti2 = ScanAxis::ALL
        .iter()
        .map(|&ax| a(ax, AngleMode::Tau) + a(ax, AngleMode::Psi))
        .sum::<f64>()
        / 6.0;
    Ok(CapabilityIndices { ti1, ti2 })
}

/// All nine scans for one solver, in `(axis, mode)` row-major order.
pub fn scan_all(solver: &ReachabilitySolver, specs: impl Fn(ScanAxis) -> ScanSpec) -> Result<Vec<OrientationRegion>> {
    let mut out = Vec::with_capacity(9);
    for axis in ScanAxis::ALL {
        let spec = specs(axis);
        for mode in AngleMode::ALL {
            out.push(orientation_scan(solver, axis, mode, &spec)?);
        }
    }
    Ok(out)
}
