//! Redundancy resolution: does some carriage state `(d_i, eta_i)` put both legs
//! of every group inside their stroke?
//!
//! For a fixed `eta`, the squared leg length is a monic quadratic in `d`, so the
//! admissible `d` set of each leg is a union of at most two closed intervals.
//! Only `eta` is sampled.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{self, CarriageState, GeometryParams, Pose, GROUPS, LEGS_PER_GROUP};

/// Default number of `eta` samples across the circular stroke.
pub const DEFAULT_ETA_STEPS: usize = 61;

/// Absolute slack on leg-length bounds.
const LENGTH_TOL: f64 = 1e-9;

/// Stroke limits of all actuated joints. Angles in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointLimits {
    pub l_lo: f64,
    pub l_hi: f64,
    pub d_lo: f64,
    pub d_hi: f64,
    pub eta_lo: f64,
    pub eta_hi: f64,
}

/// Placement of the circular stroke `eta_s` around the home azimuth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EtaConvention {
    /// `eta in [0, eta_s]`, like `d in [0, d_s]`.
    #[default]
    OneSided,
    /// `eta in [-eta_s/2, eta_s/2]`.
    Symmetric,
}

impl EtaConvention {
    pub fn name(self) -> &'static str {
        match self {
            EtaConvention::OneSided => "one_sided",
            EtaConvention::Symmetric => "symmetric",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "one_sided" => Some(EtaConvention::OneSided),
            "symmetric" => Some(EtaConvention::Symmetric),
            _ => None,
        }
    }

    /// `(eta_lo, eta_hi)` in radians for a stroke of `eta_s` radians.
    pub fn range(self, eta_s: f64) -> (f64, f64) {
        match self {
            EtaConvention::OneSided => (0.0, eta_s),
            EtaConvention::Symmetric => (-eta_s / 2.0, eta_s / 2.0),
        }
    }
}

impl JointLimits {
    /// `l in [l_min, l_min + l_s]`, `d in [0, d_s]`, `eta in [0, eta_s]`.
    pub fn from_geometry(g: &GeometryParams) -> Self {
        Self::with_convention(g, EtaConvention::default())
    }

    pub fn with_convention(g: &GeometryParams, eta: EtaConvention) -> Self {
        let (eta_lo, eta_hi) = eta.range(g.eta_s());
        JointLimits {
            l_lo: g.l_min(),
            l_hi: g.l_max(),
            d_lo: 0.0,
            d_hi: g.d_s(),
            eta_lo,
            eta_hi,
        }
    }

    pub fn new(l_lo: f64, l_hi: f64, d_lo: f64, d_hi: f64, eta_lo: f64, eta_hi: f64) -> Result<Self> {
        let lim = JointLimits {
            l_lo,
            l_hi,
            d_lo,
            d_hi,
            eta_lo,
            eta_hi,
        };
        lim.validate()?;
        Ok(lim)
    }

    pub fn validate(&self) -> Result<()> {
        let v = [self.l_lo, self.l_hi, self.d_lo, self.d_hi, self.eta_lo, self.eta_hi];
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("joint limits must be finite".into()));
        }
        if self.l_lo > self.l_hi || self.d_lo > self.d_hi || self.eta_lo > self.eta_hi {
            return Err(Error::InvalidArgument(format!("joint limits are inverted: {self:?}")));
        }
        if self.l_lo < 0.0 {
            return Err(Error::InvalidArgument("l_lo must be >= 0".into()));
        }
        Ok(())
    }

    /// Center of the circular stroke, where the scan starts.
    pub fn eta_center(&self) -> f64 {
        0.5 * (self.eta_lo + self.eta_hi)
    }

    pub fn check_carriage(&self, c: &CarriageState) -> Result<()> {
        const TOL: f64 = 1e-12;
        for i in 0..GROUPS {
            if !(c.d[i] >= self.d_lo - TOL && c.d[i] <= self.d_hi + TOL) {
                return Err(Error::LimitViolation {
                    group: i,
                    detail: format!("d = {} outside [{}, {}]", c.d[i], self.d_lo, self.d_hi),
                });
            }
            if !(c.eta[i] >= self.eta_lo - TOL && c.eta[i] <= self.eta_hi + TOL) {
                return Err(Error::LimitViolation {
                    group: i,
                    detail: format!("eta = {} outside [{}, {}] rad", c.eta[i], self.eta_lo, self.eta_hi),
                });
            }
        }
        Ok(())
    }

    /// True when every bound of `self` lies inside the matching bound of `other`.
    pub fn nested_in(&self, other: &JointLimits) -> bool {
        other.l_lo <= self.l_lo
            && self.l_hi <= other.l_hi
            && other.d_lo <= self.d_lo
            && self.d_hi <= other.d_hi
            && other.eta_lo <= self.eta_lo
            && self.eta_hi <= other.eta_hi
    }
}

/// Outcome of [`pose_reachable`].
///
/// `per_group[i]` is `false` both for an infeasible group and for groups skipped
/// after an earlier group failed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityResult {
    pub reachable: bool,
    pub witness: Option<CarriageState>,
    pub per_group: [bool; GROUPS],
}

/// A feasible `(d, eta)` for one group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupWitness {
    pub d: f64,
    pub eta: f64,
}

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    fn intersect(self, other: Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Up to two disjoint intervals, the admissible `d` set of one leg.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LegDSet {
    parts: [Option<Interval>; 2],
}

impl LegDSet {
    pub fn intervals(&self) -> impl Iterator<Item = Interval> + '_ {
        self.parts.iter().flatten().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.iter().all(Option::is_none)
    }
}

/// Admissible `d` set for a leg with platform point `b_point` and carriage unit
/// directions `e1 = Z'(w) x`, `e2 = Z'(w) y`, before clipping to the `d` stroke.
///
/// `B - D(d) = W + d e1` with `W = B - r e1 - sigma (b/2) e2`, so
/// `l² = (d + p)² + q` where `p = W·e1` and `q = |W|² - p²`.
#[inline]
fn leg_d_set(
    b_point: &Vector3<f64>,
    e1: (f64, f64),
    e2: (f64, f64),
    r: f64,
    half_b_signed: f64,
    l_lo: f64,
    l_hi: f64,
) -> LegDSet {
    let wx = b_point.x - r * e1.0 - half_b_signed * e2.0;
    let wy = b_point.y - r * e1.1 - half_b_signed * e2.1;
    let wz = b_point.z;
    let p = wx * e1.0 + wy * e1.1;
    // Perpendicular part: the component of W along e2 plus the vertical component.
    let perp_y = wx * e2.0 + wy * e2.1;
    let q = perp_y * perp_y + wz * wz;

    let hi = l_hi + LENGTH_TOL;
    let outer2 = hi * hi - q;
    if outer2 < 0.0 {
        return LegDSet::default();
    }
    let outer = outer2.sqrt();
    let lo = (l_lo - LENGTH_TOL).max(0.0);
    let inner2 = lo * lo - q;
    if inner2 <= 0.0 {
        return LegDSet {
            parts: [Some(Interval { lo: -p - outer, hi: -p + outer }), None],
        };
    }
    let inner = inner2.sqrt();
    LegDSet {
        parts: [
            Some(Interval { lo: -p - outer, hi: -p - inner }),
            Some(Interval { lo: -p + inner, hi: -p + outer }),
        ],
    }
}

/// One `eta` sample with its in-plane radial and tangential directions.
type EtaSample = (f64, (f64, f64), (f64, f64));

/// Precomputed scan tables for one geometry and limit set.
///
/// Cheap to share between threads; the voxel sweeps build one and call
/// [`ReachabilitySolver::is_reachable`] from every worker.
#[derive(Debug, Clone)]
pub struct ReachabilitySolver {
    geometry: GeometryParams,
    limits: JointLimits,
    /// Per group, `(eta, e1, e2)` in center-out scan order.
    scan: [Vec<EtaSample>; GROUPS],
}

impl ReachabilitySolver {
    pub fn new(g: &GeometryParams, limits: &JointLimits, eta_steps: usize) -> Result<Self> {
        if eta_steps < 2 {
            return Err(Error::InvalidArgument(format!("eta_steps must be >= 2, got {eta_steps}")));
        }
        limits.validate()?;
        let etas = center_out_samples(limits.eta_lo, limits.eta_hi, eta_steps);
        let scan = std::array::from_fn(|i| {
            etas.iter()
                .map(|&eta| {
                    let (s, c) = (eta + geometry::gamma(i)).sin_cos();
                    (eta, (c, s), (-s, c))
                })
                .collect()
        });
        Ok(ReachabilitySolver {
            geometry: *g,
            limits: *limits,
            scan,
        })
    }

    pub fn geometry(&self) -> &GeometryParams {
        &self.geometry
    }

    pub fn limits(&self) -> &JointLimits {
        &self.limits
    }

    /// Admissible `d` intervals for group `group` at sample `eta` (radians).
    pub fn feasible_d_intervals(&self, points: &[Vector3<f64>; LEGS_PER_GROUP], group: usize, eta: f64) -> Vec<Interval> {
        let (s, c) = (eta + geometry::gamma(group)).sin_cos();
        self.d_intervals_at(points, (c, s), (-s, c)).into_iter().flatten().collect()
    }

    #[inline]
    fn d_intervals_at(&self, points: &[Vector3<f64>; LEGS_PER_GROUP], e1: (f64, f64), e2: (f64, f64)) -> [Option<Interval>; 4] {
        let g = &self.geometry;
        let lim = &self.limits;
        let stroke = Interval {
            lo: lim.d_lo,
            hi: lim.d_hi,
        };
        let s0 = leg_d_set(&points[0], e1, e2, g.r(), g.b() / 2.0, lim.l_lo, lim.l_hi);
        let mut out = [None; 4];
        if s0.is_empty() {
            return out;
        }
        let s1 = leg_d_set(&points[1], e1, e2, g.r(), -g.b() / 2.0, lim.l_lo, lim.l_hi);
        let mut k = 0;
        for a in s0.intervals() {
            let Some(a) = a.intersect(stroke) else { continue };
            for b in s1.intervals() {
                if let Some(x) = a.intersect(b) {
                    out[k] = Some(x);
                    k += 1;
                }
            }
        }
        out
    }

    /// Scans `eta` center-out and returns the first feasible `(d, eta)` for the group.
    pub fn group_witness(&self, points: &[Vector3<f64>; LEGS_PER_GROUP], group: usize) -> Option<GroupWitness> {
        for &(eta, e1, e2) in &self.scan[group] {
            let best = self
                .d_intervals_at(points, e1, e2)
                .into_iter()
                .flatten()
                .max_by(|x, y| x.width().total_cmp(&y.width()));
            if let Some(iv) = best {
                return Some(GroupWitness { d: iv.midpoint(), eta });
            }
        }
        None
    }

    fn group_ok(&self, points: &[Vector3<f64>; LEGS_PER_GROUP], group: usize) -> bool {
        self.scan[group]
            .iter()
            .any(|&(_, e1, e2)| self.d_intervals_at(points, e1, e2).iter().any(Option::is_some))
    }

    /// Reachability without witness bookkeeping.
    pub fn is_reachable(&self, pose: &Pose) -> bool {
        let b = geometry::platform_points(&self.geometry, pose);
        (0..GROUPS).all(|i| self.group_ok(&b[i], i))
    }

    pub fn check(&self, pose: &Pose) -> FeasibilityResult {
        let b = geometry::platform_points(&self.geometry, pose);
        let mut per_group = [false; GROUPS];
        let mut witness = CarriageState::zeros();
        for i in 0..GROUPS {
            match self.group_witness(&b[i], i) {
                Some(w) => {
                    per_group[i] = true;
                    witness.d[i] = w.d;
                    witness.eta[i] = w.eta;
                }
                None => {
                    return FeasibilityResult {
                        reachable: false,
                        witness: None,
                        per_group,
                    }
                }
            }
        }
        FeasibilityResult {
            reachable: true,
            witness: Some(witness),
            per_group,
        }
    }
}

/// `n` uniform samples of `[lo, hi]`, reordered from the middle outward.
pub fn center_out_samples(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let grid: Vec<f64> = (0..n)
        .map(|k| if n == 1 { lo } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 })
        .collect();
    let mid = (n as f64 - 1.0) / 2.0;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| (x as f64 - mid).abs().total_cmp(&(y as f64 - mid).abs()).then(y.cmp(&x)));
    order.into_iter().map(|k| grid[k]).collect()
}

/// Feasibility of one leg group given its two platform points.
pub fn group_feasible(
    g: &GeometryParams,
    limits: &JointLimits,
    points: &[Vector3<f64>; LEGS_PER_GROUP],
    group: usize,
    eta_steps: usize,
) -> Result<Option<GroupWitness>> {
    if group >= GROUPS {
        return Err(Error::InvalidArgument(format!("group index {group} out of range")));
    }
    Ok(ReachabilitySolver::new(g, limits, eta_steps)?.group_witness(points, group))
}

/// Resolves the redundancy of all three groups at `pose`.
pub fn pose_reachable(g: &GeometryParams, limits: &JointLimits, pose: &Pose, eta_steps: usize) -> Result<FeasibilityResult> {
    Ok(ReachabilitySolver::new(g, limits, eta_steps)?.check(pose))
}

/// Exhaustive `(d, eta)` grid per group, testing leg lengths directly.
/// Test oracle for the analytic solver.
pub fn brute_force_reachable(
    g: &GeometryParams,
    limits: &JointLimits,
    pose: &Pose,
    d_steps: usize,
    eta_steps: usize,
) -> Result<bool> {
    if d_steps < 2 || eta_steps < 2 {
        return Err(Error::InvalidArgument("brute-force grid needs >= 2 steps per axis".into()));
    }
    let b = geometry::platform_points(g, pose);
    let lin = |lo: f64, hi: f64, n: usize, k: usize| lo + (hi - lo) * k as f64 / (n - 1) as f64;
    Ok((0..GROUPS).all(|i| {
        (0..eta_steps).any(|ke| {
            let eta = lin(limits.eta_lo, limits.eta_hi, eta_steps, ke);
            (0..d_steps).any(|kd| {
                let d = lin(limits.d_lo, limits.d_hi, d_steps, kd);
                (0..LEGS_PER_GROUP).all(|j| {
                    let l = (b[i][j] - geometry::carriage_point(g, i, j, d, eta)).norm();
                    l >= limits.l_lo - LENGTH_TOL && l <= limits.l_hi + LENGTH_TOL
                })
            })
        })
    }))
}
