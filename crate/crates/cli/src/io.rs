//! Field files: `# key=value` metadata, a `R,t,value` header, then rows in
//! t-major order with 17 significant digits so a re-read is bit-exact.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use lrti::{Field64, Observable, SpaceTimeField};
use ndarray::Array2;

use crate::CliError;

/// `-` means stdout.
pub fn create(path: &str) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        "-" => Box::new(BufWriter::new(io::stdout().lock())),
        _ => Box::new(BufWriter::new(File::create(path)?)),
    })
}

pub fn write_field(out: &mut dyn Write, field: &Field64) -> Result<(), CliError> {
    writeln!(out, "# observable={}", field.observable)?;
    for (k, v) in &field.meta {
        writeln!(out, "# {k}={v}")?;
    }
    writeln!(out, "R,t,value")?;
    for (it, &t) in field.t_grid.iter().enumerate() {
        for (ir, &r) in field.r_grid.iter().enumerate() {
            writeln!(out, "{r},{t:.16e},{:.16e}", field.values[[it, ir]])?;
        }
    }
    out.flush()?;
    Ok(())
}

fn malformed(line: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("field file line {line}: {msg}"))
}

pub fn read_field(path: &Path) -> Result<Field64, CliError> {
    let reader = BufReader::new(File::open(path)?);
    let mut observable = None;
    let mut meta = Vec::new();
    let mut seen_header = false;
    let mut r_grid: Vec<usize> = Vec::new();
    let mut t_grid: Vec<f64> = Vec::new();
    let mut values = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if let Some(rest) = line.strip_prefix('#') {
            let (k, v) = rest.trim().split_once('=').ok_or_else(|| malformed(lineno, "metadata must be key=value"))?;
            if k == "observable" {
                observable = Some(v.parse::<Observable>()?);
            } else {
                meta.push((k.to_string(), v.to_string()));
            }
            continue;
        }
        if !seen_header {
            if line.trim() != "R,t,value" {
                return Err(malformed(lineno, "expected header `R,t,value`"));
            }
            seen_header = true;
            continue;
        }
        let mut cols = line.split(',');
        let (Some(r), Some(t), Some(v), None) = (cols.next(), cols.next(), cols.next(), cols.next()) else {
            return Err(malformed(lineno, "expected three columns"));
        };
        let r: usize = r.trim().parse().map_err(|_| malformed(lineno, "bad R"))?;
        let t: f64 = t.trim().parse().map_err(|_| malformed(lineno, "bad t"))?;
        let v: f64 = v.trim().parse().map_err(|_| malformed(lineno, "bad value"))?;
        if t_grid.last() != Some(&t) {
            t_grid.push(t);
        }
        if t_grid.len() == 1 {
            r_grid.push(r);
        } else if r_grid.get(values.len() % r_grid.len()) != Some(&r) {
            return Err(malformed(lineno, "rows are not in t-major order over a fixed R grid"));
        }
        values.push(v);
    }
    let observable = observable.ok_or_else(|| malformed(1, "missing `# observable=` line"))?;
    if r_grid.is_empty() || values.len() != r_grid.len() * t_grid.len() {
        return Err(malformed(0, "incomplete grid"));
    }
    let values = Array2::from_shape_vec((t_grid.len(), r_grid.len()), values).map_err(|e| malformed(0, e))?;
    let mut field = SpaceTimeField::new(observable, r_grid, t_grid, values)?;
    for (k, v) in meta {
        field = field.with_meta(&k, v);
    }
    Ok(field)
}
