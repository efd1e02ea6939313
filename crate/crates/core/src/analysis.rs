//! End-to-end evaluation of one design: position grid, shape metrics, the nine
//! orientation scans and the capability indices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::GeometryParams;
use crate::orientation::{self, CapabilityIndices, HullPolicy, OrientationRegion, ScanAxis, ScanSpec, DEFAULT_SCAN_HEIGHT};
use crate::reachability::{JointLimits, ReachabilitySolver, DEFAULT_ETA_STEPS};
use crate::workspace::{self, GridDescriptor, GridSpec, Label, VoxelGrid};

pub const REPORT_SCHEMA: &str = "pmws.report/1";

/// Discretization and scan settings shared by all metrics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Resolution {
    pub spacing: f64,
    pub eta_steps: usize,
    /// Degrees.
    pub angle_step: f64,
    /// Degrees.
    pub angle_range: (f64, f64),
    pub coord_step: f64,
    pub scan_height: f64,
    pub azimuth_bins: usize,
    pub completeness_threshold: f64,
    /// `z` band for boundary completeness; `None` for the whole grid.
    pub z_band: Option<(f64, f64)>,
    pub hull_policy: HullPolicy,
    pub max_voxels: Option<usize>,
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution {
            spacing: 2.0,
            eta_steps: DEFAULT_ETA_STEPS,
            angle_step: 1.0,
            angle_range: (-180.0, 180.0),
            coord_step: 2.0,
            scan_height: DEFAULT_SCAN_HEIGHT,
            azimuth_bins: 36,
            completeness_threshold: 0.99,
            z_band: None,
            hull_policy: HullPolicy::default(),
            max_voxels: None,
        }
    }
}

impl Resolution {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("spacing", self.spacing),
            ("angle_step", self.angle_step),
            ("coord_step", self.coord_step),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Configuration(format!("resolution.{name} must be > 0, got {v}")));
            }
        }
        if self.eta_steps < 2 {
            return Err(Error::Configuration(format!("resolution.eta_steps must be >= 2, got {}", self.eta_steps)));
        }
        if !(self.angle_range.0 <= self.angle_range.1) {
            return Err(Error::Configuration(format!(
                "resolution.angle_min {} exceeds resolution.angle_max {}",
                self.angle_range.0, self.angle_range.1
            )));
        }
        if !(0.0..=1.0).contains(&self.completeness_threshold) {
            return Err(Error::Configuration("resolution.completeness_threshold must lie in [0, 1]".into()));
        }
        Ok(())
    }

    /// Scan line sampling: `z` covers `[0, l_hi]`, the transverse lines cover
    /// the analytic reach radius.
    pub fn scan_spec(&self, g: &GeometryParams, limits: &JointLimits, axis: ScanAxis) -> ScanSpec {
        let bound = limits.l_hi + g.r().hypot(g.b() / 2.0);
        ScanSpec {
            coord_range: match axis {
                ScanAxis::Z => (0.0, limits.l_hi),
                ScanAxis::YPrime | ScanAxis::X => (-bound, bound),
            },
            coord_step: self.coord_step,
            angle_range: self.angle_range,
            angle_step: self.angle_step,
            fixed_height: self.scan_height,
            hull_policy: self.hull_policy,
        }
    }
}

/// Which parts of the pipeline to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Scope {
    pub position: bool,
    pub orientation: bool,
}

impl Scope {
    pub const ALL: Scope = Scope {
        position: true,
        orientation: true,
    };
}

/// Design summary with angles in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignSummary {
    pub a: f64,
    pub b: f64,
    pub r: f64,
    pub l_min: f64,
    pub l_s: f64,
    pub d_s: f64,
    pub eta_s_deg: f64,
    pub l_lo: f64,
    pub l_hi: f64,
    pub d_lo: f64,
    pub d_hi: f64,
    pub eta_lo_deg: f64,
    pub eta_hi_deg: f64,
}

impl DesignSummary {
    pub fn new(g: &GeometryParams, lim: &JointLimits) -> Self {
        DesignSummary {
            a: g.a(),
            b: g.b(),
            r: g.r(),
            l_min: g.l_min(),
            l_s: g.l_s(),
            d_s: g.d_s(),
            eta_s_deg: g.eta_s_deg(),
            l_lo: lim.l_lo,
            l_hi: lim.l_hi,
            d_lo: lim.d_lo,
            d_hi: lim.d_hi,
            eta_lo_deg: lim.eta_lo.to_degrees(),
            eta_hi_deg: lim.eta_hi.to_degrees(),
        }
    }
}

/// Scalar results of [`analyze`]. Metrics outside the run's [`Scope`], or
/// undefined for the design, are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkspaceReport {
    pub schema: String,
    pub design: DesignSummary,
    pub resolution: Resolution,
    pub volume: Option<f64>,
    pub voxel_count_reachable: Option<usize>,
    pub voxel_count_cavity: Option<usize>,
    pub cavity_fraction: Option<f64>,
    pub boundary_completeness: Option<f64>,
    pub boundary_complete: Option<bool>,
    pub ti1: Option<f64>,
    pub ti2: Option<f64>,
    pub orientation_samples_skipped: Option<usize>,
    pub grid: Option<GridDescriptor>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub report: WorkspaceReport,
    pub grid: Option<VoxelGrid>,
    pub regions: Vec<OrientationRegion>,
}

pub fn analyze(g: &GeometryParams, limits: &JointLimits, res: &Resolution) -> Result<Analysis> {
    analyze_scoped(g, limits, res, Scope::ALL)
}

pub fn analyze_scoped(g: &GeometryParams, limits: &JointLimits, res: &Resolution, scope: Scope) -> Result<Analysis> {
    res.validate()?;
    limits.validate()?;
    let mut report = WorkspaceReport {
        schema: REPORT_SCHEMA.to_string(),
        design: DesignSummary::new(g, limits),
        resolution: *res,
        volume: None,
        voxel_count_reachable: None,
        voxel_count_cavity: None,
        cavity_fraction: None,
        boundary_completeness: None,
        boundary_complete: None,
        ti1: None,
        ti2: None,
        orientation_samples_skipped: None,
        grid: None,
        warnings: Vec::new(),
    };

    let mut grid = None;
    if scope.position {
        let mut spec = GridSpec::covering(g, limits, res.spacing);
        spec.max_voxels = res.max_voxels;
        let mut vg = workspace::sample_position_workspace(g, limits, [0.0; 3], &spec, res.eta_steps)?;
        report.volume = Some(workspace::volume(&vg));
        report.cavity_fraction = Some(workspace::cavity_fraction(&mut vg));
        report.voxel_count_reachable = Some(vg.count(Label::Reachable));
        report.voxel_count_cavity = Some(vg.count(Label::Cavity));
        report.grid = Some(vg.descriptor());
        let band = res.z_band.unwrap_or((spec.z_lo, spec.z_hi));
        match workspace::boundary_completeness(&vg, band, res.azimuth_bins) {
            Ok(c) => {
                report.boundary_completeness = Some(c);
                report.boundary_complete = Some(c >= res.completeness_threshold);
            }
            Err(Error::UndefinedMetric(msg)) => report.warnings.push(format!("boundary completeness undefined: {msg}")),
            Err(e) => return Err(e),
        }
        grid = Some(vg);
    }

    let mut regions = Vec::new();
    if scope.orientation {
        let solver = ReachabilitySolver::new(g, limits, res.eta_steps)?;
        regions = orientation::scan_all(&solver, |axis| res.scan_spec(g, limits, axis))?;
        let CapabilityIndices { ti1, ti2 } = orientation::capability_indices(&regions)?;
        report.ti1 = Some(ti1);
        report.ti2 = Some(ti2);
        let skipped: usize = regions.iter().map(OrientationRegion::skipped).sum();
        report.orientation_samples_skipped = Some(skipped);
        if skipped > 0 {
            report
                .warnings
                .push(format!("{skipped} orientation samples left the Euler chart and were skipped"));
        }
    }

    Ok(Analysis { report, grid, regions })
}
