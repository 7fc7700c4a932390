//! Text and image formats for fields, clouds, masks and reports.
//!
//! Every writer is deterministic: floats use the shortest round-trip
//! representation and rows are emitted in cell or point order.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{FieldKind, GreenField, GridSpec};

pub fn write_field_csv<W: Write>(mut w: W, field: &GreenField) -> Result<()> {
    writeln!(w, "ix,iy,re,im,value")?;
    let g = &field.grid;
    for iy in 0..g.ny {
        for ix in 0..g.nx {
            let z = g.center(ix, iy);
            writeln!(w, "{},{},{},{},{}", ix, iy, z.re, z.im, field.at(ix, iy))?;
        }
    }
    Ok(())
}

/// Reads a field CSV back given the grid and kind from its sidecar.
pub fn read_field_csv<R: Read>(r: R, grid: GridSpec, kind: FieldKind) -> Result<GreenField> {
    let mut values = vec![f64::NAN; grid.len()];
    for (lineno, line) in BufReader::new(r).lines().enumerate() {
        let line = line?;
        if lineno == 0 {
            if line.trim() != "ix,iy,re,im,value" {
                return Err(Error::Parse(format!("unexpected field header `{line}`")));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 5 {
            return Err(Error::Parse(format!("line {}: expected 5 columns", lineno + 1)));
        }
        let bad = |e: &dyn std::fmt::Display| Error::Parse(format!("line {}: {e}", lineno + 1));
        let ix: usize = cols[0].parse().map_err(|e| bad(&e))?;
        let iy: usize = cols[1].parse().map_err(|e| bad(&e))?;
        let v: f64 = cols[4].parse().map_err(|e| bad(&e))?;
        if ix >= grid.nx || iy >= grid.ny {
            return Err(bad(&"cell index outside grid"));
        }
        values[grid.index(ix, iy)] = v;
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::Parse("field CSV does not cover every cell".into()));
    }
    GreenField::new(grid, kind, values)
}

pub fn write_points_csv<W: Write>(mut w: W, points: &[Complex64]) -> Result<()> {
    writeln!(w, "re,im")?;
    for p in points {
        writeln!(w, "{},{}", p.re, p.im)?;
    }
    Ok(())
}

pub fn read_points_csv<R: Read>(r: R) -> Result<Vec<Complex64>> {
    let mut out = Vec::new();
    for (lineno, line) in BufReader::new(r).lines().enumerate() {
        let line = line?;
        if lineno == 0 || line.trim().is_empty() {
            continue;
        }
        let (re, im) = line
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("line {}: expected `re,im`", lineno + 1)))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))
        };
        out.push(Complex64::new(parse(re)?, parse(im)?));
    }
    Ok(out)
}

/// Binary 8-bit PGM, top row = largest imaginary part. `value = lo + (hi - lo) * pixel / 255`
/// is recorded in a header comment.
pub fn write_field_pgm<W: Write>(mut w: W, field: &GreenField) -> Result<()> {
    let (lo, hi) = field.min_max();
    let span = if hi > lo { hi - lo } else { 1.0 };
    let g = &field.grid;
    writeln!(w, "P5")?;
    writeln!(w, "# affine: value = {lo} + {span} * pixel / 255")?;
    writeln!(w, "# kind: {:?}", field.kind)?;
    writeln!(w, "{} {}", g.nx, g.ny)?;
    writeln!(w, "255")?;
    let mut row = vec![0u8; g.nx];
    for iy in (0..g.ny).rev() {
        for (ix, px) in row.iter_mut().enumerate() {
            let t = (field.at(ix, iy) - lo) / span;
            *px = (t * 255.0).round().clamp(0.0, 255.0) as u8;
        }
        w.write_all(&row)?;
    }
    Ok(())
}

/// Region mask image: 0 outside U, 128 in U \ A, 255 in A.
pub fn write_mask_pgm<W: Write>(mut w: W, grid: &GridSpec, a_mask: &[bool], u_mask: &[bool]) -> Result<()> {
    writeln!(w, "P5")?;
    writeln!(w, "# 0 = outside U, 128 = U \\ A, 255 = A")?;
    writeln!(w, "{} {}", grid.nx, grid.ny)?;
    writeln!(w, "255")?;
    let mut row = vec![0u8; grid.nx];
    for iy in (0..grid.ny).rev() {
        for (ix, px) in row.iter_mut().enumerate() {
            let i = grid.index(ix, iy);
            *px = if a_mask[i] {
                255
            } else if u_mask[i] {
                128
            } else {
                0
            };
        }
        w.write_all(&row)?;
    }
    Ok(())
}

pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json_string(value)?)?;
    Ok(())
}

/// Buffered file writer, creating parent directories.
pub fn create(path: &Path) -> Result<BufWriter<fs::File>> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    Ok(BufWriter::new(fs::File::create(path)?))
}
