//! File formats: matrix CSV (full precision, no header), labels CSV,
//! mask triples, and atomically written outputs.

use crate::CliError;
use specperturb::completion::{ObservationMask, PartialMatrix};
use specperturb::numkernel::Matrix;
use std::fs;
use std::path::Path;

pub fn read_to_string(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

/// Plain comma-separated reals, one matrix row per line.
pub fn read_matrix(path: &Path) -> Result<Matrix, CliError> {
    let text = read_to_string(path)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for field in line.split(',') {
            let v: f64 = field.trim().parse().map_err(|_| {
                CliError::usage(format!(
                    "{} line {}: invalid number {:?}",
                    path.display(),
                    lineno + 1,
                    field.trim()
                ))
            })?;
            row.push(v);
        }
        if let Some(w) = width {
            if row.len() != w {
                return Err(CliError::usage(format!(
                    "{} line {}: expected {} fields, found {}",
                    path.display(),
                    lineno + 1,
                    w,
                    row.len()
                )));
            }
        } else {
            width = Some(row.len());
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::usage(format!("{}: no rows", path.display())));
    }
    Matrix::from_rows(rows).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

/// 17 significant digits, LF line endings.
pub fn format_matrix(m: &Matrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row = m.row(i);
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&format!("{v:.16e}"));
        }
        out.push('\n');
    }
    out
}

/// One non-negative integer per line.
pub fn read_labels(path: &Path) -> Result<Vec<usize>, CliError> {
    let text = read_to_string(path)?;
    let mut labels = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let v: usize = line.trim().parse().map_err(|_| {
            CliError::usage(format!(
                "{} line {}: invalid label {:?}",
                path.display(),
                lineno + 1,
                line.trim()
            ))
        })?;
        labels.push(v);
    }
    if labels.is_empty() {
        return Err(CliError::usage(format!("{}: no labels", path.display())));
    }
    Ok(labels)
}

pub fn format_labels(labels: &[usize]) -> String {
    let mut out = String::new();
    for l in labels {
        out.push_str(&l.to_string());
        out.push('\n');
    }
    out
}

/// `row,col,value` triples, 0-indexed, one per line.
pub fn read_mask_csv(path: &Path, shape: (usize, usize)) -> Result<PartialMatrix, CliError> {
    let text = read_to_string(path)?;
    let mut entries = Vec::new();
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(CliError::usage(format!(
                "{} line {}: expected row,col,value",
                path.display(),
                lineno + 1
            )));
        }
        let bad = |what: &str| {
            CliError::usage(format!(
                "{} line {}: invalid {what}",
                path.display(),
                lineno + 1
            ))
        };
        let row: usize = fields[0].parse().map_err(|_| bad("row index"))?;
        let col: usize = fields[1].parse().map_err(|_| bad("column index"))?;
        let value: f64 = fields[2].parse().map_err(|_| bad("value"))?;
        entries.push((row, col));
        values.push(value);
    }
    // Canonicalize value order to match the sorted mask entries.
    let mut order: Vec<usize> = (0..entries.len()).collect();
    order.sort_by_key(|&i| entries[i]);
    let sorted_entries: Vec<(usize, usize)> = order.iter().map(|&i| entries[i]).collect();
    let sorted_values: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    let mask = ObservationMask::new(shape, sorted_entries)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    PartialMatrix::new(mask, sorted_values)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

pub fn format_mask_csv(observed: &PartialMatrix) -> String {
    let mut out = String::new();
    for (&(i, j), &v) in observed.mask.entries().iter().zip(&observed.values) {
        out.push_str(&format!("{i},{j},{v:.16e}\n"));
    }
    out
}

/// Writes via a temp file in the same directory plus rename, so a
/// half-written output never appears under the final name.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let parent = path.parent().filter(|p| !p.as_os_str().is_empty());
    if let Some(dir) = parent {
        fs::create_dir_all(dir)
            .map_err(|e| CliError::usage(format!("cannot create {}: {e}", dir.display())))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(".tmp{}", std::process::id()));
    let tmp_path = std::path::PathBuf::from(tmp);
    fs::write(&tmp_path, contents)
        .map_err(|e| CliError::usage(format!("cannot write {}: {e}", tmp_path.display())))?;
    fs::rename(&tmp_path, path)
        .map_err(|e| CliError::usage(format!("cannot rename to {}: {e}", path.display())))
}

/// Manifest sidecar path for a data output: `X.csv` -> `X.manifest.json`.
pub fn manifest_path(output: &Path) -> std::path::PathBuf {
    output.with_extension("manifest.json")
}
