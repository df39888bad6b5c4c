//! CSV emission and parsing. Every file is written to a temporary sibling
//! and renamed into place, so readers never see a partial file.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use levyfp_core::DensityField;

use crate::error::{runtime, CliResult};

/// Round-trip formatting: 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// `<name>_t<time>.csv`, with the shortest decimal form of `time`.
pub fn density_file_name(name: &str, time: f64) -> String {
    format!("{name}_t{time}.csv")
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let ctx = |e: std::io::Error| runtime(format!("{}: {e}", path.display()));
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(ctx)?;
    }
    let file_name = path
        .file_name()
        .ok_or_else(|| runtime(format!("{} has no file name", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(file_name);
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp: PathBuf = path.with_file_name(tmp_name);
    {
        let mut f = fs::File::create(&tmp).map_err(ctx)?;
        f.write_all(bytes).map_err(ctx)?;
        f.sync_all().map_err(ctx)?;
    }
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        runtime(format!("renaming into {}: {e}", path.display()))
    })
}

/// Writes a CSV with the given header; cells are already formatted.
pub fn write_table(path: &Path, header: &[&str], rows: &[Vec<String>]) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    let bytes = w.into_inner().map_err(|e| runtime(e.to_string()))?;
    write_atomic(path, &bytes)
}

pub fn density_csv_bytes(p: &DensityField) -> Vec<u8> {
    let grid = p.grid();
    let mut out = String::with_capacity(48 * p.values().len() + 4);
    out.push_str("x,p\n");
    for (i, v) in p.values().iter().enumerate() {
        out.push_str(&fmt_f64(grid.x(i)));
        out.push(',');
        out.push_str(&fmt_f64(*v));
        out.push('\n');
    }
    out.into_bytes()
}

pub fn write_density(path: &Path, p: &DensityField) -> CliResult<()> {
    write_atomic(path, &density_csv_bytes(p))
}

/// Reads a density CSV back as `(x, p)` columns.
pub fn read_density(path: &Path) -> CliResult<(Vec<f64>, Vec<f64>)> {
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != ["x", "p"] {
        return Err(runtime(format!("{}: expected header x,p", path.display())));
    }
    let (mut xs, mut ps) = (Vec::new(), Vec::new());
    for rec in r.records() {
        let rec = rec?;
        let parse = |k: usize| {
            rec.get(k)
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| runtime(format!("{}: bad row {:?}", path.display(), rec)))
        };
        xs.push(parse(0)?);
        ps.push(parse(1)?);
    }
    Ok((xs, ps))
}
