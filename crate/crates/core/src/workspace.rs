//! Voxelized position workspace and its metrics: volume, cavity fraction and
//! azimuthal boundary completeness.

use std::collections::VecDeque;
use std::f64::consts::PI;

use nalgebra::Vector3;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{GeometryParams, Pose};
use crate::reachability::{JointLimits, ReachabilitySolver};

/// Voxel state. `Cavity` is only assigned by [`cavity_fraction`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[repr(u8)]
pub enum Label {
    Unreachable = 0,
    Reachable = 1,
    Cavity = 2,
}

impl Label {
    pub fn code(self) -> u8 {
        self as u8
    }
}

/// Extent and resolution of a sampling grid. Voxel centers are placed
/// symmetrically about the `z` axis with one padding layer on every side
/// except the floor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub spacing: f64,
    /// Half-width of the sampled square in `x` and `y`.
    pub half_width: f64,
    pub z_lo: f64,
    pub z_hi: f64,
    /// Upper bound on voxel count; `None` for no cap.
    pub max_voxels: Option<usize>,
}

impl GridSpec {
    /// The smallest grid at `spacing` that holds the analytic reach bound
    /// (cylinder of radius [`GeometryParams::reach_radius_bound`], `z` in `[0, l_hi]`).
    pub fn covering(g: &GeometryParams, limits: &JointLimits, spacing: f64) -> Self {
        GridSpec {
            spacing,
            half_width: g.l_max().max(limits.l_hi) + g.r().hypot(g.b() / 2.0),
            z_lo: 0.0,
            z_hi: limits.l_hi,
            max_voxels: None,
        }
    }

    pub fn with_budget(mut self, max_voxels: usize) -> Self {
        self.max_voxels = Some(max_voxels);
        self
    }

    fn validate(&self, g: &GeometryParams, limits: &JointLimits) -> Result<()> {
        if !(self.spacing > 0.0) || !self.spacing.is_finite() {
            return Err(Error::Configuration(format!("voxel spacing must be > 0, got {}", self.spacing)));
        }
        let radius = limits.l_hi + g.r().hypot(g.b() / 2.0);
        if self.half_width + 1e-9 < radius {
            return Err(Error::Configuration(format!(
                "grid half-width {} does not contain the reach bound {radius:.3}",
                self.half_width
            )));
        }
        if self.z_lo > 1e-9 || self.z_hi + 1e-9 < limits.l_hi {
            return Err(Error::Configuration(format!(
                "grid z range [{}, {}] does not contain [0, {}]",
                self.z_lo, self.z_hi, limits.l_hi
            )));
        }
        Ok(())
    }

    pub fn dims(&self) -> [usize; 3] {
        let half = (self.half_width / self.spacing).ceil() as usize + 1;
        let nxy = 2 * half + 1;
        let nz = ((self.z_hi - self.z_lo) / self.spacing).ceil() as usize + 1;
        [nxy, nxy, nz.max(2)]
    }
}

/// Grid metadata without the labels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridDescriptor {
    pub origin: [f64; 3],
    pub spacing: f64,
    pub dims: [usize; 3],
}

/// Regular voxel lattice. `origin` is the center of voxel `(0, 0, 0)`; the
/// linear index is `(k * ny + j) * nx + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct VoxelGrid {
    origin: Vector3<f64>,
    spacing: f64,
    dims: [usize; 3],
    labels: Vec<Label>,
    /// The `z = z_lo` face is the mechanism's mirror plane rather than open space.
    mirror_floor: bool,
}

impl VoxelGrid {
    pub fn new(origin: Vector3<f64>, spacing: f64, dims: [usize; 3]) -> Result<Self> {
        if !(spacing > 0.0) {
            return Err(Error::InvalidArgument(format!("spacing must be > 0, got {spacing}")));
        }
        if dims.iter().any(|&n| n < 2) {
            return Err(Error::InvalidArgument(format!("every grid dimension must be >= 2, got {dims:?}")));
        }
        Ok(VoxelGrid {
            origin,
            spacing,
            dims,
            labels: vec![Label::Unreachable; dims[0] * dims[1] * dims[2]],
            mirror_floor: false,
        })
    }

    /// Labels every voxel whose center satisfies `pred`.
    pub fn from_predicate(origin: Vector3<f64>, spacing: f64, dims: [usize; 3], pred: impl Fn(Vector3<f64>) -> bool + Sync) -> Result<Self> {
        let mut grid = VoxelGrid::new(origin, spacing, dims)?;
        let g = &grid;
        let labels: Vec<Label> = (0..g.len())
            .into_par_iter()
            .map(|idx| if pred(g.center_of(idx)) { Label::Reachable } else { Label::Unreachable })
            .collect();
        grid.labels = labels;
        Ok(grid)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn origin(&self) -> Vector3<f64> {
        self.origin
    }

    pub fn mirror_floor(&self) -> bool {
        self.mirror_floor
    }

    /// Treat the bottom face as a mirror plane during cavity detection.
    pub fn set_mirror_floor(&mut self, on: bool) {
        self.mirror_floor = on;
    }

    pub fn descriptor(&self) -> GridDescriptor {
        GridDescriptor {
            origin: [self.origin.x, self.origin.y, self.origin.z],
            spacing: self.spacing,
            dims: self.dims,
        }
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (k * self.dims[1] + j) * self.dims[0] + i
    }

    #[inline]
    pub fn coords(&self, idx: usize) -> [usize; 3] {
        let nx = self.dims[0];
        let ny = self.dims[1];
        [idx % nx, (idx / nx) % ny, idx / (nx * ny)]
    }

    #[inline]
    pub fn center(&self, i: usize, j: usize, k: usize) -> Vector3<f64> {
        self.origin + Vector3::new(i as f64, j as f64, k as f64) * self.spacing
    }

    #[inline]
    pub fn center_of(&self, idx: usize) -> Vector3<f64> {
        let [i, j, k] = self.coords(idx);
        self.center(i, j, k)
    }

    pub fn label(&self, i: usize, j: usize, k: usize) -> Label {
        self.labels[self.index(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, label: Label) {
        let idx = self.index(i, j, k);
        self.labels[idx] = label;
    }

    /// Voxel containing point `p`, if inside the grid.
    pub fn voxel_at(&self, p: &Vector3<f64>) -> Option<[usize; 3]> {
        let rel = (p - self.origin) / self.spacing;
        let mut out = [0usize; 3];
        for a in 0..3 {
            let v = rel[a].round();
            if v < 0.0 || v >= self.dims[a] as f64 {
                return None;
            }
            out[a] = v as usize;
        }
        Some(out)
    }

    pub fn label_at(&self, p: &Vector3<f64>) -> Option<Label> {
        self.voxel_at(p).map(|[i, j, k]| self.label(i, j, k))
    }

    pub fn count(&self, label: Label) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }

    /// Reachable span of the voxel column nearest the `z` axis.
    pub fn axis_z_span(&self) -> Option<(f64, f64)> {
        let [i, j, _] = self.voxel_at(&Vector3::new(0.0, 0.0, self.origin.z))?;
        let zs: Vec<f64> = (0..self.dims[2])
            .filter(|&k| self.label(i, j, k) == Label::Reachable)
            .map(|k| self.center(i, j, k).z)
            .collect();
        Some((*zs.first()?, *zs.last()?))
    }

    /// Resets cavity labels back to unreachable.
    pub fn clear_cavities(&mut self) {
        for l in &mut self.labels {
            if *l == Label::Cavity {
                *l = Label::Unreachable;
            }
        }
    }
}

/// Labels every voxel center of `spec` by pose reachability at a fixed orientation.
pub fn sample_position_workspace(
    g: &GeometryParams,
    limits: &JointLimits,
    orientation: [f64; 3],
    spec: &GridSpec,
    eta_steps: usize,
) -> Result<VoxelGrid> {
    spec.validate(g, limits)?;
    let dims = spec.dims();
    let needed = dims.iter().product::<usize>();
    if let Some(budget) = spec.max_voxels {
        if needed > budget {
            return Err(Error::Budget { needed, budget });
        }
    }
    let solver = ReachabilitySolver::new(g, limits, eta_steps)?;
    let template = Pose::new(Vector3::zeros(), orientation[0], orientation[1], orientation[2])?;
    let half = (dims[0] - 1) as f64 / 2.0;
    let origin = Vector3::new(-half * spec.spacing, -half * spec.spacing, spec.z_lo + 0.5 * spec.spacing);
    let mut grid = VoxelGrid::from_predicate(origin, spec.spacing, dims, |p| solver.is_reachable(&template.with_position(p)))?;
    grid.mirror_floor = spec.z_lo == 0.0 && orientation == [0.0; 3];
    Ok(grid)
}

/// `count(reachable) * spacing³`.
pub fn volume(grid: &VoxelGrid) -> f64 {
    grid.count(Label::Reachable) as f64 * grid.spacing.powi(3)
}

/// Flood-fills non-reachable voxels 6-connectedly from the grid boundary; what
/// the fill cannot reach becomes [`Label::Cavity`]. Returns
/// `cavity / (cavity + reachable)`, or 0 for an empty workspace.
///
/// With a mirror floor, the bottom face is not a seed: the workspace continues
/// as its reflection below it.
pub fn cavity_fraction(grid: &mut VoxelGrid) -> f64 {
    grid.clear_cavities();
    let [nx, ny, nz] = grid.dims;
    let mut outside = vec![false; grid.len()];
    let mut queue = VecDeque::new();
    let k_min = if grid.mirror_floor { 1 } else { 0 };
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                let on_face = i == 0 || j == 0 || i == nx - 1 || j == ny - 1 || k == nz - 1 || (k == 0 && k_min == 0);
                let idx = grid.index(i, j, k);
                if on_face && grid.labels[idx] != Label::Reachable {
                    outside[idx] = true;
                    queue.push_back(idx);
                }
            }
        }
    }
    while let Some(idx) = queue.pop_front() {
        let [i, j, k] = grid.coords(idx);
        let mut visit = |ii: usize, jj: usize, kk: usize| {
            let n = grid.index(ii, jj, kk);
            if !outside[n] && grid.labels[n] != Label::Reachable {
                outside[n] = true;
                queue.push_back(n);
            }
        };
        if i > 0 {
            visit(i - 1, j, k);
        }
        if i + 1 < nx {
            visit(i + 1, j, k);
        }
        if j > 0 {
            visit(i, j - 1, k);
        }
        if j + 1 < ny {
            visit(i, j + 1, k);
        }
        if k > 0 {
            visit(i, j, k - 1);
        }
        if k + 1 < nz {
            visit(i, j, k + 1);
        }
    }
    let mut cavities = 0usize;
    for (l, out) in grid.labels.iter_mut().zip(&outside) {
        if *l == Label::Unreachable && !out {
            *l = Label::Cavity;
            cavities += 1;
        }
    }
    let reachable = grid.count(Label::Reachable);
    if cavities + reachable == 0 {
        0.0
    } else {
        cavities as f64 / (cavities + reachable) as f64
    }
}

/// Per-slice azimuthal coverage of the reachable set.
///
/// Reachable voxel centers are binned by azimuth; a slice's coverage is the
/// fraction of occupied bins. Slices whose outermost reachable voxel is too
/// close to the axis to resolve `azimuth_bins` directions (outer circumference
/// under two voxels per bin) are skipped. The result is the minimum coverage
/// over the remaining slices in `z_band`.
pub fn boundary_completeness(grid: &VoxelGrid, z_band: (f64, f64), azimuth_bins: usize) -> Result<f64> {
    slice_coverage(grid, z_band, azimuth_bins)?
        .into_iter()
        .map(|(_, c)| c)
        .reduce(f64::min)
        .ok_or_else(|| Error::UndefinedMetric(format!("no resolvable reachable slice in z band [{}, {}]", z_band.0, z_band.1)))
}

/// Coverage of each resolvable slice in `z_band`, as `(z, coverage)`.
pub fn slice_coverage(grid: &VoxelGrid, z_band: (f64, f64), azimuth_bins: usize) -> Result<Vec<(f64, f64)>> {
    if azimuth_bins < 8 {
        return Err(Error::InvalidArgument(format!("azimuth_bins must be >= 8, got {azimuth_bins}")));
    }
    if !(z_band.0 <= z_band.1) {
        return Err(Error::UndefinedMetric(format!("empty z band [{}, {}]", z_band.0, z_band.1)));
    }
    let [nx, ny, nz] = grid.dims;
    let min_radius = azimuth_bins as f64 * grid.spacing / PI;
    let bin_width = 2.0 * PI / azimuth_bins as f64;
    let mut out = Vec::new();
    for k in 0..nz {
        let z = grid.center(0, 0, k).z;
        if z < z_band.0 || z > z_band.1 {
            continue;
        }
        let mut bins = vec![false; azimuth_bins];
        let mut r_max = 0.0f64;
        for j in 0..ny {
            for i in 0..nx {
                if grid.label(i, j, k) != Label::Reachable {
                    continue;
                }
                let c = grid.center(i, j, k);
                let rho = c.x.hypot(c.y);
                r_max = r_max.max(rho);
                if rho > 0.0 {
                    let b = (c.y.atan2(c.x).rem_euclid(2.0 * PI) / bin_width) as usize;
                    bins[b.min(azimuth_bins - 1)] = true;
                }
            }
        }
        if r_max >= min_radius {
            let covered = bins.iter().filter(|&&b| b).count();
            out.push((z, covered as f64 / azimuth_bins as f64));
        }
    }
    Ok(out)
}
