use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use pmws_core::analysis::{self, Analysis};
use pmws_core::check::{self, CheckOptions};
use pmws_core::config::{RunConfig, SweepMode};
use pmws_core::export;
use pmws_core::geometry;
use pmws_core::orientation::{self, ScanAxis};
use pmws_core::sweep::{self, SweepResult};
use pmws_core::{Error, ReachabilitySolver};

const SUMMARY_SCHEMA: &str = "pmws.sweep-summary/1";

#[derive(Parser, Debug)]
#[command(name = "pmws", version, about = "Workspace characterization of the 3-(PP(2-(UPS))) redundant parallel mechanism")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Configuration file (`section.key = value`); defaults to the reference design.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides `output.dir`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Voxel spacing.
    #[arg(long, global = true)]
    spacing: Option<f64>,
    /// Orientation scan angle step, degrees.
    #[arg(long, global = true)]
    angle_step: Option<f64>,
    /// Circular-stroke samples in the reachability test.
    #[arg(long, global = true)]
    eta_steps: Option<usize>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for randomized check batches.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Position workspace, shape metrics, orientation scans and capability indices.
    Analyze,
    /// Parameter sweeps from the `sweep.*` block.
    Sweep,
    /// Two-parameter surface from the `sweep.*` block.
    Surface,
    /// Orientation scans selected by `scan.axes` and `scan.modes`.
    Orientation,
    /// Self-test battery.
    Check {
        #[arg(long, hide = true)]
        inject_sign_fault: bool,
    },
    /// Mobility of the mechanism from its count table.
    Mobility,
}

/// Validation problems exit with 1, everything else with 2.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Configuration(_) | Error::InvalidArgument(_) => 1,
        _ => 2,
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Configuration(format!("{}: {e}", path.display()))
}

fn load_config(cli: &Cli) -> pmws_core::Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::parse(&fs::read_to_string(p).map_err(|e| io_err(p, e))?)
            .map_err(|e| Error::Configuration(format!("{}: {e}", p.display())))?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.spacing {
        cfg.resolution.spacing = s;
    }
    if let Some(a) = cli.angle_step {
        cfg.resolution.angle_step = a;
    }
    if let Some(n) = cli.eta_steps {
        cfg.resolution.eta_steps = n;
    }
    if let Some(s) = cli.seed {
        cfg.check.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn out_dir(cli: &Cli, cfg: &RunConfig) -> pmws_core::Result<PathBuf> {
    let dir = cli
        .out
        .clone()
        .or_else(|| cfg.output_dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("pmws-out"));
    fs::create_dir_all(&dir).map_err(|e| Error::Configuration(format!("cannot create {}: {e}", dir.display())))?;
    Ok(dir)
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> pmws_core::Result<()> {
    let run = || -> std::io::Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        f(&mut w)?;
        w.flush()
    };
    run().map_err(|e| Error::Configuration(format!("cannot write {}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> pmws_core::Result<()> {
    let text = export::to_json(value).map_err(|e| Error::Configuration(format!("serialization failed: {e}")))?;
    write_file(path, |w| w.write_all(text.as_bytes()))
}

fn opt(v: Option<f64>) -> String {
    v.map_or("undefined".to_string(), export::fmt_num)
}

fn print_summary(a: &Analysis) {
    let r = &a.report;
    let d = &r.design;
    let f = export::fmt_num;
    println!(
        "design    a={} b={} r={} l_min={} l_s={} d_s={} eta_s={} deg",
        f(d.a),
        f(d.b),
        f(d.r),
        f(d.l_min),
        f(d.l_s),
        f(d.d_s),
        f(d.eta_s_deg)
    );
    println!(
        "limits    l in [{}, {}], d in [{}, {}], eta in [{}, {}] deg",
        f(d.l_lo),
        f(d.l_hi),
        f(d.d_lo),
        f(d.d_hi),
        f(d.eta_lo_deg),
        f(d.eta_hi_deg)
    );
    println!(
        "grid      spacing {} dims {:?}, {} reachable voxels",
        r.resolution.spacing,
        r.grid.map(|g| g.dims).unwrap_or_default(),
        r.voxel_count_reachable.unwrap_or(0)
    );
    println!("volume    {}", opt(r.volume));
    println!("cavity    {}", opt(r.cavity_fraction));
    println!(
        "boundary  completeness {} ({})",
        opt(r.boundary_completeness),
        match r.boundary_complete {
            Some(true) => "complete",
            Some(false) => "incomplete",
            None => "undefined",
        }
    );
    for reg in &a.regions {
        println!("scan      {:<2} {:<3} area {}", reg.axis.name(), reg.angle_mode.name(), export::fmt_num(reg.area()));
    }
    println!("TI1       {}", opt(r.ti1));
    println!("TI2       {}", opt(r.ti2));
    for w in &r.warnings {
        println!("warning   {w}");
    }
}

fn cmd_analyze(cli: &Cli) -> pmws_core::Result<()> {
    let cfg = load_config(cli)?;
    let g = cfg.geometry()?;
    let lim = cfg.joint_limits()?;
    let a = analysis::analyze(&g, &lim, &cfg.resolution)?;
    let dir = out_dir(cli, &cfg)?;
    write_json(&dir.join("report.json"), &a.report)?;
    if let Some(grid) = &a.grid {
        write_file(&dir.join("workspace.xyz"), |w| export::write_xyz(grid, w))?;
    }
    write_file(&dir.join("regions.csv"), |w| export::write_regions_csv(&a.regions, w))?;
    print_summary(&a);
    println!("wrote     {}", dir.display());
    Ok(())
}

#[derive(Serialize)]
struct RunSummary<'a> {
    csv: String,
    params: Vec<&'static str>,
    verdicts: Vec<VerdictOut>,
    surface: Option<SurfaceReport>,
    failed_rows: usize,
    #[serde(skip)]
    result: &'a SweepResult,
}

#[derive(Serialize)]
struct VerdictOut {
    metric: &'static str,
    trend: Option<&'static str>,
}

#[derive(Serialize)]
struct SurfaceReport {
    metric: &'static str,
    argmax: Option<Vec<f64>>,
    max: Option<f64>,
    near_optimal: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct SweepSummary<'a> {
    schema: &'static str,
    runs: Vec<RunSummary<'a>>,
}

fn summarize(result: &SweepResult, csv: String) -> RunSummary<'_> {
    let surface = result.surface.as_ref().map(|s| SurfaceReport {
        metric: s.metric.name(),
        argmax: s.argmax.map(|i| result.rows[i].params.clone()),
        max: s.max,
        near_optimal: result
            .rows
            .iter()
            .zip(&s.near_optimal)
            .filter(|(_, &m)| m)
            .map(|(r, _)| r.params.clone())
            .collect(),
    });
    RunSummary {
        csv,
        params: result.params.iter().map(|p| p.name()).collect(),
        verdicts: result
            .verdicts
            .iter()
            .map(|v| VerdictOut {
                metric: v.metric.name(),
                trend: v.trend.map(|t| t.name()),
            })
            .collect(),
        surface,
        failed_rows: result.rows.iter().filter(|r| r.error.is_some()).count(),
        result,
    }
}

fn cmd_sweep(cli: &Cli, force_surface: bool) -> pmws_core::Result<()> {
    let cfg = load_config(cli)?;
    let block = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| Error::Configuration("sweep.parameters: no sweep block in configuration".into()))?;
    if force_surface && (block.mode != SweepMode::Surface) {
        return Err(Error::Configuration("sweep.mode: the surface command needs sweep.mode = surface".into()));
    }
    let specs = cfg.sweep_specs()?;
    let dir = out_dir(cli, &cfg)?;
    let mut results = Vec::new();
    for spec in &specs {
        let res = if spec.axes.len() == 2 {
            sweep::run_surface(spec)?
        } else {
            sweep::run_sweep(spec)?
        };
        let names: Vec<&str> = spec.axes.iter().map(|a| a.param.name()).collect();
        let prefix = if spec.axes.len() == 2 { "surface" } else { "sweep" };
        let csv = format!("{prefix}_{}.csv", names.join("_"));
        write_file(&dir.join(&csv), |w| export::write_sweep_csv(&res, w))?;
        results.push((res, csv));
    }
    let summary = SweepSummary {
        schema: SUMMARY_SCHEMA,
        runs: results.iter().map(|(r, csv)| summarize(r, csv.clone())).collect(),
    };
    write_json(&dir.join("sweep_summary.json"), &summary)?;
    for run in &summary.runs {
        let rows = &run.result.rows;
        println!("{} ({} rows, {} failed)", run.csv, rows.len(), run.failed_rows);
        for v in &run.verdicts {
            println!("  {}: {}", v.metric, v.trend.unwrap_or("unclassified"));
        }
        if let Some(s) = &run.surface {
            println!("  {} argmax at {:?} = {}, {} near-optimal cells", s.metric, s.argmax.clone().unwrap_or_default(), opt(s.max), s.near_optimal.len());
        }
    }
    println!("wrote {}", dir.display());
    Ok(())
}

fn cmd_orientation(cli: &Cli) -> pmws_core::Result<()> {
    let cfg = load_config(cli)?;
    let g = cfg.geometry()?;
    let lim = cfg.joint_limits()?;
    let solver = ReachabilitySolver::new(&g, &lim, cfg.resolution.eta_steps)?;
    let mut regions = Vec::new();
    for &axis in &cfg.scan.axes {
        let spec = cfg.resolution.scan_spec(&g, &lim, axis);
        for &mode in &cfg.scan.modes {
            regions.push(orientation::orientation_scan(&solver, axis, mode, &spec)?);
        }
    }
    let dir = out_dir(cli, &cfg)?;
    write_file(&dir.join("regions.csv"), |w| export::write_regions_csv(&regions, w))?;
    for reg in &regions {
        println!("{:<2} {:<3} area {}", reg.axis.name(), reg.angle_mode.name(), export::fmt_num(reg.area()));
    }
    if regions.len() == 9 && cfg.scan.axes.len() == ScanAxis::ALL.len() {
        let ti = orientation::capability_indices(&regions)?;
        println!("TI1 {}", export::fmt_num(ti.ti1));
        println!("TI2 {}", export::fmt_num(ti.ti2));
    }
    println!("wrote {}", dir.display());
    Ok(())
}

fn cmd_check(cli: &Cli, inject_sign_fault: bool) -> pmws_core::Result<bool> {
    let cfg = load_config(cli)?;
    let g = cfg.geometry()?;
    let lim = cfg.joint_limits()?;
    let opts = CheckOptions {
        seed: cfg.check.seed,
        poses: cfg.check.poses,
        inject_sign_fault,
        ..CheckOptions::default()
    };
    let outcomes = check::run_checks(&g, &lim, &opts)?;
    for c in &outcomes {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    Ok(outcomes.iter().all(|c| c.passed))
}

fn cmd_mobility() {
    let (d, n, gj, f, nu, xi) = check::MOBILITY_TABLE;
    let m = geometry::mobility(d, n, gj, f, nu, xi);
    println!("M = {d}({n} - {gj} - 1) + {f} + {nu} - {xi} = {m}");
}

fn run(cli: &Cli) -> pmws_core::Result<bool> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Configuration(format!("--threads: {e}")))?;
    }
    match &cli.command {
        Command::Analyze => cmd_analyze(cli)?,
        Command::Sweep => cmd_sweep(cli, false)?,
        Command::Surface => cmd_sweep(cli, true)?,
        Command::Orientation => cmd_orientation(cli)?,
        Command::Check { inject_sign_fault } => return cmd_check(cli, *inject_sign_fault),
        Command::Mobility => cmd_mobility(),
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
