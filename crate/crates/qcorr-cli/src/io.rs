//! File formats: state JSON, ensemble JSON, and the batch CSV report.
//!
//! The state format is `{"dim_a": int, "dim_b": int, "matrix":
//! [[[re,im],...],...]}` with rows in the A-major product ordering. The
//! writer emits every float with 17 significant digits so a write/read
//! cycle reproduces each `f64` bit-exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use qcorr_core::{BipartiteState, ComplexMatrix, SeparableEnsemble};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    dim_a: usize,
    dim_b: usize,
    matrix: Vec<Vec<[f64; 2]>>,
}

fn read_error(path: &Path, detail: impl std::fmt::Display) -> CliError {
    CliError::validation(format!("{}: {detail}", path.display()))
}

pub fn read_state(path: &Path) -> Result<BipartiteState, CliError> {
    let text = fs::read_to_string(path).map_err(|e| read_error(path, e))?;
    let file: StateFile =
        serde_json::from_str(&text).map_err(|e| read_error(path, format!("bad state JSON: {e}")))?;
    if file.dim_a == 0 || file.dim_b == 0 {
        return Err(read_error(path, "dimensions must be at least 1"));
    }
    let n = file.dim_a * file.dim_b;
    if file.matrix.len() != n {
        return Err(read_error(
            path,
            format!("matrix has {} rows, expected {n}", file.matrix.len()),
        ));
    }
    let mut m = ComplexMatrix::zeros(n, n);
    for (r, row) in file.matrix.iter().enumerate() {
        if row.len() != n {
            return Err(read_error(
                path,
                format!("matrix row {r} has {} entries, expected {n}", row.len()),
            ));
        }
        for (c, &[re, im]) in row.iter().enumerate() {
            m[(r, c)] = Complex64::new(re, im);
        }
    }
    BipartiteState::new(m, file.dim_a, file.dim_b)
        .map_err(|e| read_error(path, format!("invalid state: {e}")))
}

/// 17 significant digits: one leading digit plus 16 after the point.
fn push_float(out: &mut String, x: f64) {
    let _ = write!(out, "{x:.16e}");
}

fn push_matrix(out: &mut String, m: &ComplexMatrix, indent: &str) {
    out.push('[');
    for r in 0..m.rows() {
        if r > 0 {
            out.push(',');
        }
        out.push('\n');
        out.push_str(indent);
        out.push_str("  [");
        for c in 0..m.cols() {
            if c > 0 {
                out.push(',');
            }
            out.push('[');
            push_float(out, m[(r, c)].re);
            out.push(',');
            push_float(out, m[(r, c)].im);
            out.push(']');
        }
        out.push(']');
    }
    out.push('\n');
    out.push_str(indent);
    out.push(']');
}

pub fn write_state(path: &Path, s: &BipartiteState) -> Result<(), CliError> {
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"dim_a\": {},", s.dim_a());
    let _ = writeln!(out, "  \"dim_b\": {},", s.dim_b());
    out.push_str("  \"matrix\": ");
    push_matrix(&mut out, s.rho(), "  ");
    out.push_str("\n}\n");
    fs::write(path, out).map_err(|e| CliError::validation(format!("{}: {e}", path.display())))
}

pub fn write_ensemble(path: &Path, ensemble: &SeparableEnsemble) -> Result<(), CliError> {
    let mut out = String::new();
    out.push_str("{\n  \"terms\": [");
    for (i, term) in ensemble.terms.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str("\n    {\"p\": ");
        push_float(&mut out, term.p);
        out.push_str(", \"a\": ");
        push_matrix(&mut out, &term.a, "    ");
        out.push_str(", \"b\": ");
        push_matrix(&mut out, &term.b, "    ");
        out.push('}');
    }
    out.push_str("\n  ]\n}\n");
    fs::write(path, out).map_err(|e| CliError::validation(format!("{}: {e}", path.display())))
}
