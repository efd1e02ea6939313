//! One- and two-parameter design sweeps.
//!
//! Rows are evaluated independently in parallel and collected in grid order, so
//! results do not depend on scheduling.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{self, Resolution, Scope, WorkspaceReport};
use crate::error::{Error, Result};
use crate::geometry::{DesignParam, GeometryParams};
use crate::reachability::{EtaConvention, JointLimits};

pub const SWEEP_SCHEMA: &str = "pmws.sweep/1";

/// Fraction of the maximum that defines the near-optimal surface region.
pub const NEAR_OPTIMAL_FRACTION: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Volume,
    CavityFraction,
    BoundaryCompleteness,
    Ti1,
    Ti2,
}

impl Metric {
    pub const ALL: [Metric; 5] = [
        Metric::Volume,
        Metric::CavityFraction,
        Metric::BoundaryCompleteness,
        Metric::Ti1,
        Metric::Ti2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Volume => "volume",
            Metric::CavityFraction => "cavity_fraction",
            Metric::BoundaryCompleteness => "boundary_completeness",
            Metric::Ti1 => "ti1",
            Metric::Ti2 => "ti2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Metric::ALL.into_iter().find(|m| m.name() == s)
    }

    fn needs_orientation(self) -> bool {
        matches!(self, Metric::Ti1 | Metric::Ti2)
    }

    pub fn from_report(self, report: &WorkspaceReport) -> Option<f64> {
        match self {
            Metric::Volume => report.volume,
            Metric::CavityFraction => report.cavity_fraction,
            Metric::BoundaryCompleteness => report.boundary_completeness,
            Metric::Ti1 => report.ti1,
            Metric::Ti2 => report.ti2,
        }
    }
}

/// Inclusive arithmetic range of one design parameter (degrees for `eta_s`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamRange {
    pub param: DesignParam,
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl ParamRange {
    pub fn new(param: DesignParam, min: f64, max: f64, step: f64) -> Result<Self> {
        let r = ParamRange { param, min, max, step };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        let name = self.param.name();
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(Error::Configuration(format!("range of {name}: bounds must be finite")));
        }
        if self.min > self.max {
            return Err(Error::Configuration(format!(
                "range of {name}: min {} exceeds max {}",
                self.min, self.max
            )));
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::Configuration(format!("range of {name}: step must be > 0, got {}", self.step)));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let n = ((self.max - self.min) / self.step + 1e-9).floor() as usize + 1;
        (0..n).map(|k| self.min + k as f64 * self.step).collect()
    }
}

/// A sweep over one parameter, or a surface over two.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub base: GeometryParams,
    pub eta_convention: EtaConvention,
    pub axes: Vec<ParamRange>,
    pub metrics: Vec<Metric>,
    pub resolution: Resolution,
    pub plateau_tol: f64,
    pub noise_tol: f64,
}

impl SweepSpec {
    pub fn new(base: GeometryParams, axes: Vec<ParamRange>, metrics: Vec<Metric>, resolution: Resolution) -> Self {
        SweepSpec {
            base,
            eta_convention: EtaConvention::default(),
            axes,
            metrics,
            resolution,
            plateau_tol: 0.05,
            noise_tol: 0.01,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(Error::Configuration(format!("a sweep needs 1 or 2 parameters, got {}", self.axes.len())));
        }
        if self.axes.len() == 2 && self.axes[0].param == self.axes[1].param {
            return Err(Error::Configuration("surface parameters must differ".into()));
        }
        if self.metrics.is_empty() {
            return Err(Error::Configuration("a sweep needs at least one metric".into()));
        }
        for ax in &self.axes {
            ax.validate()?;
        }
        self.resolution.validate()
    }

    /// Parameter tuples in row-major order (last axis fastest).
    pub fn grid_points(&self) -> Vec<Vec<f64>> {
        let mut points = vec![Vec::new()];
        for ax in &self.axes {
            let vals = ax.values();
            points = points
                .into_iter()
                .flat_map(|p| {
                    vals.iter().map(move |&v| {
                        let mut q = p.clone();
                        q.push(v);
                        q
                    })
                })
                .collect();
        }
        points
    }

    /// Geometry of one grid point.
    pub fn geometry_at(&self, point: &[f64]) -> Result<GeometryParams> {
        let mut g = self.base;
        for (ax, &v) in self.axes.iter().zip(point) {
            g = g.with_param(ax.param, v)?;
        }
        Ok(g)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub params: Vec<f64>,
    /// One entry per metric of the `SweepSpec`; `None` if undefined or failed.
    pub metrics: Vec<Option<f64>>,
    pub runtime_s: f64,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    Increasing,
    Decreasing,
    RiseThenFall,
    RiseThenPlateau,
    NonMonotonicOther,
}

impl Trend {
    pub fn name(self) -> &'static str {
        match self {
            Trend::Increasing => "increasing",
            Trend::Decreasing => "decreasing",
            Trend::RiseThenFall => "rise-then-fall",
            Trend::RiseThenPlateau => "rise-then-plateau",
            Trend::NonMonotonicOther => "non-monotonic-other",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub metric: Metric,
    pub trend: Option<Trend>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceSummary {
    pub metric: Metric,
    /// Index into `rows` of the maximum.
    pub argmax: Option<usize>,
    pub max: Option<f64>,
    /// Per row: value within [`NEAR_OPTIMAL_FRACTION`] of the maximum.
    pub near_optimal: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub schema: String,
    pub params: Vec<DesignParam>,
    pub metrics: Vec<Metric>,
    pub rows: Vec<SweepRow>,
    pub verdicts: Vec<Verdict>,
    pub surface: Option<SurfaceSummary>,
}

impl SweepResult {
    pub fn column(&self, metric: Metric) -> Option<Vec<Option<f64>>> {
        let k = self.metrics.iter().position(|&m| m == metric)?;
        Some(self.rows.iter().map(|r| r.metrics[k]).collect())
    }

    pub fn verdict(&self, metric: Metric) -> Option<Trend> {
        self.verdicts.iter().find(|v| v.metric == metric).and_then(|v| v.trend)
    }
}

/// Evaluates the requested metrics for one design.
pub fn default_evaluator(spec: &SweepSpec) -> impl Fn(&GeometryParams, &JointLimits) -> Result<Vec<Option<f64>>> + Sync + '_ {
    let scope = Scope {
        position: spec.metrics.iter().any(|m| !m.needs_orientation()),
        orientation: spec.metrics.iter().any(|m| m.needs_orientation()),
    };
    move |g, lim| {
        let a = analysis::analyze_scoped(g, lim, &spec.resolution, scope)?;
        Ok(spec.metrics.iter().map(|m| m.from_report(&a.report)).collect())
    }
}

/// Evaluates one grid point; failures are recorded in the row.
pub fn evaluate_row<F>(spec: &SweepSpec, point: &[f64], eval: &F) -> SweepRow
where
    F: Fn(&GeometryParams, &JointLimits) -> Result<Vec<Option<f64>>>,
{
    let start = Instant::now();
    let outcome = spec.geometry_at(point).and_then(|g| {
        let lim = JointLimits::with_convention(&g, spec.eta_convention);
        eval(&g, &lim)
    });
    let runtime_s = start.elapsed().as_secs_f64();
    match outcome {
        Ok(metrics) => SweepRow {
            params: point.to_vec(),
            metrics,
            runtime_s,
            error: None,
        },
        Err(e) => SweepRow {
            params: point.to_vec(),
            metrics: vec![None; spec.metrics.len()],
            runtime_s,
            error: Some(e.to_string()),
        },
    }
}

/// Builds verdicts and the surface summary from rows in grid order.
pub fn aggregate(spec: &SweepSpec, rows: Vec<SweepRow>) -> SweepResult {
    let mut result = SweepResult {
        schema: SWEEP_SCHEMA.to_string(),
        params: spec.axes.iter().map(|a| a.param).collect(),
        metrics: spec.metrics.clone(),
        rows,
        verdicts: Vec::new(),
        surface: None,
    };
    if spec.axes.len() == 1 {
        for (k, &metric) in spec.metrics.iter().enumerate() {
            let values: Option<Vec<f64>> = result.rows.iter().map(|r| r.metrics[k]).collect();
            let verdict = match values {
                None => Verdict {
                    metric,
                    trend: None,
                    note: Some("some rows have no value".into()),
                },
                Some(v) => match classify_trend(&v, spec.plateau_tol, spec.noise_tol) {
                    Ok(t) => Verdict {
                        metric,
                        trend: Some(t),
                        note: None,
                    },
                    Err(e) => Verdict {
                        metric,
                        trend: None,
                        note: Some(e.to_string()),
                    },
                },
            };
            result.verdicts.push(verdict);
        }
    } else {
        let metric = if spec.metrics.contains(&Metric::Volume) {
            Metric::Volume
        } else {
            spec.metrics[0]
        };
        let col = result.column(metric).unwrap_or_default();
        result.surface = Some(near_optimal_region(metric, &col));
    }
    result
}

fn near_optimal_region(metric: Metric, col: &[Option<f64>]) -> SurfaceSummary {
    let mut argmax: Option<usize> = None;
    for (i, v) in col.iter().enumerate() {
        if let Some(v) = v {
            if argmax.is_none_or(|m| *v > col[m].unwrap()) {
                argmax = Some(i);
            }
        }
    }
    let max = argmax.and_then(|i| col[i]);
    let near_optimal = col
        .iter()
        .map(|v| match (v, max) {
            (Some(v), Some(m)) => *v >= m - (1.0 - NEAR_OPTIMAL_FRACTION) * m.abs(),
            _ => false,
        })
        .collect();
    SurfaceSummary {
        metric,
        argmax,
        max,
        near_optimal,
    }
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    run_sweep_with(spec, default_evaluator(spec))
}

/// Runs every grid point through `eval` in parallel.
pub fn run_sweep_with<F>(spec: &SweepSpec, eval: F) -> Result<SweepResult>
where
    F: Fn(&GeometryParams, &JointLimits) -> Result<Vec<Option<f64>>> + Sync,
{
    spec.validate()?;
    let rows = spec
        .grid_points()
        .par_iter()
        .map(|p| evaluate_row(spec, p, &eval))
        .collect();
    Ok(aggregate(spec, rows))
}

pub fn run_surface(spec: &SweepSpec) -> Result<SweepResult> {
    run_surface_with(spec, default_evaluator(spec))
}

pub fn run_surface_with<F>(spec: &SweepSpec, eval: F) -> Result<SweepResult>
where
    F: Fn(&GeometryParams, &JointLimits) -> Result<Vec<Option<f64>>> + Sync,
{
    if spec.axes.len() != 2 {
        return Err(Error::Configuration(format!("a surface needs 2 parameters, got {}", spec.axes.len())));
    }
    run_sweep_with(spec, eval)
}

fn median3(a: f64, b: f64, c: f64) -> f64 {
    a.max(b).min(a.min(b).max(c))
}

/// Qualitative shape of an ordered series.
///
/// The series is smoothed with a 3-point running median (end points kept).
/// Successive differences within `noise_tol * range` of zero are flat. A
/// terminal run of differences within `plateau_tol * range`, covering more
/// than a quarter of the samples and preceded by a rise and no fall, makes a
/// plateau.
pub fn classify_trend(values: &[f64], plateau_tol: f64, noise_tol: f64) -> Result<Trend> {
    let n = values.len();
    if n < 4 {
        return Err(Error::InvalidArgument(format!("trend needs at least 4 values, got {n}")));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("trend values must be finite".into()));
    }
    let mut s = values.to_vec();
    for i in 1..n - 1 {
        s[i] = median3(values[i - 1], values[i], values[i + 1]);
    }
    let lo = s.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let range = hi - lo;
    if range <= 0.0 {
        return Ok(Trend::NonMonotonicOther);
    }
    let diffs: Vec<f64> = s.windows(2).map(|w| w[1] - w[0]).collect();
    let signs: Vec<i8> = diffs
        .iter()
        .map(|&d| {
            if d > noise_tol * range {
                1
            } else if d < -noise_tol * range {
                -1
            } else {
                0
            }
        })
        .collect();

    let flat_tail = diffs.iter().rev().take_while(|d| d.abs() <= plateau_tol * range).count();
    if flat_tail > 0 && flat_tail as f64 > 0.25 * n as f64 {
        let head = &signs[..signs.len() - flat_tail];
        if head.contains(&1) && !head.contains(&-1) {
            return Ok(Trend::RiseThenPlateau);
        }
    }

    let moves: Vec<i8> = signs.into_iter().filter(|&s| s != 0).collect();
    if moves.iter().all(|&m| m == 1) {
        return Ok(Trend::Increasing);
    }
    if moves.iter().all(|&m| m == -1) {
        return Ok(Trend::Decreasing);
    }
    let turn = moves.iter().position(|&m| m == -1).unwrap();
    if turn > 0 && moves[turn..].iter().all(|&m| m == -1) {
        return Ok(Trend::RiseThenFall);
    }
    Ok(Trend::NonMonotonicOther)
}
