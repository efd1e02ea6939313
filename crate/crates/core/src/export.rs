//! Text and JSON writers. Every file starts with a schema tag; floats are
//! written with 9 significant digits.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::Value;

use crate::orientation::OrientationRegion;
use crate::sweep::SweepResult;
use crate::workspace::{Label, VoxelGrid};

pub const XYZ_SCHEMA: &str = "pmws.xyz/1";
pub const REGIONS_SCHEMA: &str = "pmws.regions/1";

/// Rounds to 9 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.8e}").parse().unwrap_or(x)
}

/// Shortest decimal form of `x` rounded to 9 significant digits.
pub fn fmt_num(x: f64) -> String {
    let r = round_sig(x);
    if r == 0.0 {
        "0".to_string()
    } else {
        format!("{r}")
    }
}

fn round_json(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().map(round_sig).and_then(serde_json::Number::from_f64) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

/// Pretty JSON with every float rounded to 9 significant digits.
pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut v = serde_json::to_value(value)?;
    round_json(&mut v);
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

/// One `x y z label` line per reachable or cavity voxel center.
pub fn write_xyz(grid: &VoxelGrid, out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "# {XYZ_SCHEMA}")?;
    writeln!(out, "# x y z in length units of the design; label 1 = reachable, 2 = cavity")?;
    for (idx, &label) in grid.labels().iter().enumerate() {
        if label == Label::Unreachable {
            continue;
        }
        let c = grid.center_of(idx);
        writeln!(out, "{} {} {} {}", fmt_num(c.x), fmt_num(c.y), fmt_num(c.z), label.code())?;
    }
    Ok(())
}

/// One row per (scan, coordinate, feasible interval); angles in degrees.
/// Coordinates with no feasible angle get empty angle fields.
pub fn write_regions_csv(regions: &[OrientationRegion], out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "# {REGIONS_SCHEMA}; coordinate in length units, angles in degrees")?;
    writeln!(out, "axis,mode,coordinate,angle_min,angle_max")?;
    for reg in regions {
        for s in &reg.samples {
            let head = format!("{},{},{}", reg.axis.name(), reg.angle_mode.name(), fmt_num(s.coordinate));
            if s.intervals.is_empty() {
                writeln!(out, "{head},,")?;
            }
            for &(lo, hi) in &s.intervals {
                writeln!(out, "{head},{},{}", fmt_num(lo), fmt_num(hi))?;
            }
        }
    }
    Ok(())
}

/// One row per grid point: parameters, metrics, runtime and error text.
pub fn write_sweep_csv(result: &SweepResult, out: &mut impl Write) -> io::Result<()> {
    writeln!(
        out,
        "# {}; lengths in design units, eta_s in degrees, volume in length^3, ti in degree-length",
        result.schema
    )?;
    let mut header: Vec<&str> = result.params.iter().map(|p| p.name()).collect();
    header.extend(result.metrics.iter().map(|m| m.name()));
    header.extend(["runtime_s", "error"]);
    writeln!(out, "{}", header.join(","))?;
    for row in &result.rows {
        let mut cells: Vec<String> = row.params.iter().map(|&v| fmt_num(v)).collect();
        cells.extend(row.metrics.iter().map(|m| m.map(fmt_num).unwrap_or_default()));
        cells.push(format!("{:.3}", row.runtime_s));
        cells.push(row.error.as_deref().map(csv_field).unwrap_or_default());
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
