//! Run configuration in flat `section.key = value` text.
//!
//! Blank lines and `#` comments are ignored. Angles are in degrees. Unknown
//! keys, duplicates and malformed values are errors that name the line and key.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::analysis::Resolution;
use crate::error::{Error, Result};
use crate::geometry::{DesignParam, GeometryParams};
use crate::orientation::{AngleMode, HullPolicy, ScanAxis};
use crate::reachability::{EtaConvention, JointLimits};
use crate::sweep::{Metric, ParamRange, SweepSpec};

/// Design parameters as written (degrees for `eta_s`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryInput {
    pub a: f64,
    pub b: f64,
    pub r: f64,
    pub l_min: f64,
    pub l_s: f64,
    pub d_s: f64,
    pub eta_s: f64,
}

impl Default for GeometryInput {
    fn default() -> Self {
        GeometryInput {
            a: 50.0,
            b: 14.0,
            r: 100.0,
            l_min: 114.5,
            l_s: 50.0,
            d_s: 50.0,
            eta_s: 30.0,
        }
    }
}

impl GeometryInput {
    pub fn build(&self) -> Result<GeometryParams> {
        GeometryParams::new(self.a, self.b, self.r, self.l_min, self.l_s, self.d_s, self.eta_s)
            .map_err(|e| Error::Configuration(format!("geometry: {e}")))
    }
}

/// Optional replacements for the stroke-derived joint limits (degrees for `eta`).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LimitOverrides {
    pub l_lo: Option<f64>,
    pub l_hi: Option<f64>,
    pub d_lo: Option<f64>,
    pub d_hi: Option<f64>,
    pub eta_lo: Option<f64>,
    pub eta_hi: Option<f64>,
}

impl LimitOverrides {
    pub fn is_empty(&self) -> bool {
        *self == LimitOverrides::default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SweepMode {
    /// One 1-D sweep per listed parameter.
    #[default]
    Separate,
    /// One 2-D grid over exactly two parameters.
    Surface,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepBlock {
    pub mode: SweepMode,
    pub ranges: Vec<ParamRange>,
    pub metrics: Vec<Metric>,
    pub plateau_tol: f64,
    pub noise_tol: f64,
}

impl Default for SweepBlock {
    fn default() -> Self {
        SweepBlock {
            mode: SweepMode::Separate,
            ranges: Vec::new(),
            metrics: vec![Metric::Volume],
            plateau_tol: 0.05,
            noise_tol: 0.01,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanSelection {
    pub axes: Vec<ScanAxis>,
    pub modes: Vec<AngleMode>,
}

impl Default for ScanSelection {
    fn default() -> Self {
        ScanSelection {
            axes: ScanAxis::ALL.to_vec(),
            modes: AngleMode::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckBlock {
    pub seed: u64,
    pub poses: usize,
}

impl Default for CheckBlock {
    fn default() -> Self {
        CheckBlock { seed: 1, poses: 500 }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunConfig {
    pub geometry: GeometryInput,
    pub eta_convention: EtaConvention,
    pub limits: LimitOverrides,
    pub resolution: Resolution,
    pub output_dir: Option<String>,
    pub sweep: Option<SweepBlock>,
    pub scan: ScanSelection,
    pub check: CheckBlock,
}

fn parse_f64(v: &str) -> std::result::Result<f64, String> {
    let x: f64 = v.parse().map_err(|_| format!("expected a number, got '{v}'"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("expected a finite number, got '{v}'"))
    }
}

fn parse_usize(v: &str) -> std::result::Result<usize, String> {
    v.parse().map_err(|_| format!("expected a non-negative integer, got '{v}'"))
}

fn parse_list<T>(v: &str, what: &str, f: impl Fn(&str) -> Option<T>) -> std::result::Result<Vec<T>, String> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| f(s).ok_or_else(|| format!("unknown {what} '{s}'")))
        .collect()
}

/// `min:max:step`.
fn parse_range(param: DesignParam, v: &str) -> std::result::Result<ParamRange, String> {
    let parts: Vec<&str> = v.split(':').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected min:max:step, got '{v}'"));
    }
    let r = ParamRange {
        param,
        min: parse_f64(parts[0])?,
        max: parse_f64(parts[1])?,
        step: parse_f64(parts[2])?,
    };
    if r.min > r.max {
        return Err(format!("min {} exceeds max {}", r.min, r.max));
    }
    if r.step <= 0.0 {
        return Err(format!("step must be > 0, got {}", r.step));
    }
    Ok(r)
}

fn axis_name(a: ScanAxis) -> &'static str {
    match a {
        ScanAxis::Z => "z",
        ScanAxis::YPrime => "y_prime",
        ScanAxis::X => "x",
    }
}

fn parse_axis(s: &str) -> Option<ScanAxis> {
    ScanAxis::ALL.into_iter().find(|&a| axis_name(a) == s)
}

fn mode_name(m: AngleMode) -> &'static str {
    match m {
        AngleMode::Phi => "phi",
        AngleMode::Tau => "tau",
        AngleMode::Psi => "psi",
    }
}

fn parse_mode(s: &str) -> Option<AngleMode> {
    AngleMode::ALL.into_iter().find(|&m| mode_name(m) == s)
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let mut seen: HashMap<String, usize> = HashMap::new();
        let mut sweep = SweepBlock::default();
        let mut sweep_params: Option<Vec<DesignParam>> = None;
        let mut ranges: HashMap<DesignParam, (usize, ParamRange)> = HashMap::new();
        let mut any_sweep = false;
        let mut z_band = (None, None);

        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let diag = |key: &str, msg: String| Error::Configuration(format!("line {line_no}: {key}: {msg}"));
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Configuration(format!("line {line_no}: expected 'key = value', got '{line}'")));
            };
            let (key, value) = (key.trim(), value.trim());
            if let Some(first) = seen.insert(key.to_string(), line_no) {
                return Err(diag(key, format!("duplicate key (first set on line {first})")));
            }
            let num = || parse_f64(value).map_err(|m| diag(key, m));
            let int = || parse_usize(value).map_err(|m| diag(key, m));
            let g = &mut cfg.geometry;
            let res = &mut cfg.resolution;
            match key {
                "geometry.a" => g.a = num()?,
                "geometry.b" => g.b = num()?,
                "geometry.r" => g.r = num()?,
                "geometry.l_min" => g.l_min = num()?,
                "geometry.l_s" => g.l_s = num()?,
                "geometry.d_s" => g.d_s = num()?,
                "geometry.eta_s" => g.eta_s = num()?,
                "limits.eta_convention" => {
                    cfg.eta_convention = EtaConvention::parse(value)
                        .ok_or_else(|| diag(key, format!("expected one_sided or symmetric, got '{value}'")))?
                }
                "limits.l_lo" => cfg.limits.l_lo = Some(num()?),
                "limits.l_hi" => cfg.limits.l_hi = Some(num()?),
                "limits.d_lo" => cfg.limits.d_lo = Some(num()?),
                "limits.d_hi" => cfg.limits.d_hi = Some(num()?),
                "limits.eta_lo" => cfg.limits.eta_lo = Some(num()?),
                "limits.eta_hi" => cfg.limits.eta_hi = Some(num()?),
                "resolution.spacing" => res.spacing = num()?,
                "resolution.eta_steps" => res.eta_steps = int()?,
                "resolution.angle_step" => res.angle_step = num()?,
                "resolution.angle_min" => res.angle_range.0 = num()?,
                "resolution.angle_max" => res.angle_range.1 = num()?,
                "resolution.coord_step" => res.coord_step = num()?,
                "resolution.scan_height" => res.scan_height = num()?,
                "resolution.azimuth_bins" => res.azimuth_bins = int()?,
                "resolution.completeness_threshold" => res.completeness_threshold = num()?,
                "resolution.z_band_min" => z_band.0 = Some(num()?),
                "resolution.z_band_max" => z_band.1 = Some(num()?),
                "resolution.hull_policy" => {
                    res.hull_policy = HullPolicy::parse(value)
                        .ok_or_else(|| diag(key, format!("expected all_feasible or home_connected, got '{value}'")))?
                }
                "resolution.max_voxels" => res.max_voxels = Some(int()?),
                "output.dir" => cfg.output_dir = Some(value.to_string()),
                "sweep.mode" => {
                    any_sweep = true;
                    sweep.mode = match value {
                        "separate" => SweepMode::Separate,
                        "surface" => SweepMode::Surface,
                        _ => return Err(diag(key, format!("expected separate or surface, got '{value}'"))),
                    }
                }
                "sweep.parameters" => {
                    any_sweep = true;
                    sweep_params = Some(parse_list(value, "parameter", DesignParam::parse).map_err(|m| diag(key, m))?);
                }
                "sweep.metrics" => {
                    any_sweep = true;
                    sweep.metrics = parse_list(value, "metric", Metric::parse).map_err(|m| diag(key, m))?;
                }
                "sweep.plateau_tol" => {
                    any_sweep = true;
                    sweep.plateau_tol = num()?;
                }
                "sweep.noise_tol" => {
                    any_sweep = true;
                    sweep.noise_tol = num()?;
                }
                "scan.axes" => cfg.scan.axes = parse_list(value, "scan axis", parse_axis).map_err(|m| diag(key, m))?,
                "scan.modes" => cfg.scan.modes = parse_list(value, "angle mode", parse_mode).map_err(|m| diag(key, m))?,
                "check.seed" => cfg.check.seed = value.parse().map_err(|_| diag(key, format!("expected an integer, got '{value}'")))?,
                "check.poses" => cfg.check.poses = int()?,
                _ => {
                    let param = key.strip_prefix("sweep.range.").and_then(DesignParam::parse);
                    match param {
                        Some(p) => {
                            any_sweep = true;
                            let r = parse_range(p, value).map_err(|m| diag(key, m))?;
                            ranges.insert(p, (line_no, r));
                        }
                        None => return Err(diag(key, "unknown key".into())),
                    }
                }
            }
        }

        cfg.resolution.z_band = match z_band {
            (None, None) => None,
            (Some(lo), Some(hi)) => Some((lo, hi)),
            _ => {
                return Err(Error::Configuration(
                    "resolution.z_band_min and resolution.z_band_max must be set together".into(),
                ))
            }
        };

        if any_sweep {
            let params = sweep_params
                .ok_or_else(|| Error::Configuration("sweep.parameters: required when a sweep block is present".into()))?;
            for p in &params {
                let (_, r) = ranges
                    .remove(p)
                    .ok_or_else(|| Error::Configuration(format!("sweep.range.{}: missing range for listed parameter", p.name())))?;
                sweep.ranges.push(r);
            }
            if let Some((line, r)) = ranges.values().next() {
                return Err(Error::Configuration(format!(
                    "line {line}: sweep.range.{}: parameter is not listed in sweep.parameters",
                    r.param.name()
                )));
            }
            if sweep.mode == SweepMode::Surface && sweep.ranges.len() != 2 {
                return Err(Error::Configuration(format!(
                    "sweep.parameters: surface mode needs exactly 2 parameters, got {}",
                    sweep.ranges.len()
                )));
            }
            cfg.sweep = Some(sweep);
        }

        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let g = self.geometry.build()?;
        self.joint_limits_for(&g)?;
        self.resolution.validate()?;
        Ok(())
    }

    pub fn geometry(&self) -> Result<GeometryParams> {
        self.geometry.build()
    }

    /// Stroke-derived limits of `g` with the configured overrides applied.
    pub fn joint_limits_for(&self, g: &GeometryParams) -> Result<JointLimits> {
        let base = JointLimits::with_convention(g, self.eta_convention);
        let o = &self.limits;
        JointLimits::new(
            o.l_lo.unwrap_or(base.l_lo),
            o.l_hi.unwrap_or(base.l_hi),
            o.d_lo.unwrap_or(base.d_lo),
            o.d_hi.unwrap_or(base.d_hi),
            o.eta_lo.map_or(base.eta_lo, f64::to_radians),
            o.eta_hi.map_or(base.eta_hi, f64::to_radians),
        )
        .map_err(|e| Error::Configuration(format!("limits: {e}")))
    }

    pub fn joint_limits(&self) -> Result<JointLimits> {
        self.joint_limits_for(&self.geometry()?)
    }

    /// Sweep specs in run order: one per parameter, or one surface.
    pub fn sweep_specs(&self) -> Result<Vec<SweepSpec>> {
        let block = self
            .sweep
            .as_ref()
            .ok_or_else(|| Error::Configuration("no sweep block in configuration".into()))?;
        if !self.limits.is_empty() {
            return Err(Error::Configuration(
                "limits overrides cannot be combined with a sweep: limits follow each design's strokes".into(),
            ));
        }
        let base = self.geometry()?;
        let make = |axes: Vec<ParamRange>| SweepSpec {
            base,
            eta_convention: self.eta_convention,
            axes,
            metrics: block.metrics.clone(),
            resolution: self.resolution,
            plateau_tol: block.plateau_tol,
            noise_tol: block.noise_tol,
        };
        Ok(match block.mode {
            SweepMode::Separate => block.ranges.iter().map(|r| make(vec![*r])).collect(),
            SweepMode::Surface => vec![make(block.ranges.clone())],
        })
    }

    /// Canonical text form; [`RunConfig::parse`] reads it back unchanged.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let g = &self.geometry;
        for (k, v) in [
            ("a", g.a),
            ("b", g.b),
            ("r", g.r),
            ("l_min", g.l_min),
            ("l_s", g.l_s),
            ("d_s", g.d_s),
            ("eta_s", g.eta_s),
        ] {
            writeln!(s, "geometry.{k} = {v}").unwrap();
        }
        writeln!(s, "limits.eta_convention = {}", self.eta_convention.name()).unwrap();
        let o = &self.limits;
        for (k, v) in [
            ("l_lo", o.l_lo),
            ("l_hi", o.l_hi),
            ("d_lo", o.d_lo),
            ("d_hi", o.d_hi),
            ("eta_lo", o.eta_lo),
            ("eta_hi", o.eta_hi),
        ] {
            if let Some(v) = v {
                writeln!(s, "limits.{k} = {v}").unwrap();
            }
        }
        let r = &self.resolution;
        writeln!(s, "resolution.spacing = {}", r.spacing).unwrap();
        writeln!(s, "resolution.eta_steps = {}", r.eta_steps).unwrap();
        writeln!(s, "resolution.angle_step = {}", r.angle_step).unwrap();
        writeln!(s, "resolution.angle_min = {}", r.angle_range.0).unwrap();
        writeln!(s, "resolution.angle_max = {}", r.angle_range.1).unwrap();
        writeln!(s, "resolution.coord_step = {}", r.coord_step).unwrap();
        writeln!(s, "resolution.scan_height = {}", r.scan_height).unwrap();
        writeln!(s, "resolution.azimuth_bins = {}", r.azimuth_bins).unwrap();
        writeln!(s, "resolution.completeness_threshold = {}", r.completeness_threshold).unwrap();
        if let Some((lo, hi)) = r.z_band {
            writeln!(s, "resolution.z_band_min = {lo}").unwrap();
            writeln!(s, "resolution.z_band_max = {hi}").unwrap();
        }
        writeln!(s, "resolution.hull_policy = {}", r.hull_policy.name()).unwrap();
        if let Some(m) = r.max_voxels {
            writeln!(s, "resolution.max_voxels = {m}").unwrap();
        }
        if let Some(dir) = &self.output_dir {
            writeln!(s, "output.dir = {dir}").unwrap();
        }
        if let Some(sw) = &self.sweep {
            let mode = match sw.mode {
                SweepMode::Separate => "separate",
                SweepMode::Surface => "surface",
            };
            writeln!(s, "sweep.mode = {mode}").unwrap();
            let names: Vec<&str> = sw.ranges.iter().map(|r| r.param.name()).collect();
            writeln!(s, "sweep.parameters = {}", names.join(", ")).unwrap();
            for rg in &sw.ranges {
                writeln!(s, "sweep.range.{} = {}:{}:{}", rg.param.name(), rg.min, rg.max, rg.step).unwrap();
            }
            let metrics: Vec<&str> = sw.metrics.iter().map(|m| m.name()).collect();
            writeln!(s, "sweep.metrics = {}", metrics.join(", ")).unwrap();
            writeln!(s, "sweep.plateau_tol = {}", sw.plateau_tol).unwrap();
            writeln!(s, "sweep.noise_tol = {}", sw.noise_tol).unwrap();
        }
        let axes: Vec<&str> = self.scan.axes.iter().map(|&a| axis_name(a)).collect();
        writeln!(s, "scan.axes = {}", axes.join(", ")).unwrap();
        let modes: Vec<&str> = self.scan.modes.iter().map(|&m| mode_name(m)).collect();
        writeln!(s, "scan.modes = {}", modes.join(", ")).unwrap();
        writeln!(s, "check.seed = {}", self.check.seed).unwrap();
        writeln!(s, "check.poses = {}", self.check.poses).unwrap();
        s
    }
}
