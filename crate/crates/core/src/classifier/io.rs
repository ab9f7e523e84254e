//! Plain-text model files.
//!
//! Format, one row per line:
//!
//! ```text
//! MLPCG 1
//! <n_in> <n_hidden> <n_out>
//! <w1 row 0> ... <w1 row n_hidden-1>
//! <b1>
//! <w2 row 0> ... <w2 row n_out-1>
//! <b2>
//! ```
//!
//! Values are written in scientific notation with 17 fractional digits (18
//! significant), which round-trips 64-bit floats exactly, so re-saving a
//! loaded model is byte-identical.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::classifier::mlp::MlpModel;
use crate::error::{Error, Result};

/// Header line of version 1 model files.
pub const MODEL_MAGIC: &str = "MLPCG 1";

pub fn write_model(m: &MlpModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{MODEL_MAGIC}");
    let _ = writeln!(out, "{} {} {}", m.n_in, m.n_hidden, m.n_out);
    let mut row = |values: &[f64]| {
        let mut line = String::new();
        for (i, v) in values.iter().enumerate() {
            if i > 0 {
                line.push(' ');
            }
            let _ = write!(line, "{v:.17e}");
        }
        out.push_str(&line);
        out.push('\n');
    };
    for j in 0..m.n_hidden {
        row(&m.w1[j * m.n_in..(j + 1) * m.n_in]);
    }
    row(&m.b1);
    for o in 0..m.n_out {
        row(&m.w2[o * m.n_hidden..(o + 1) * m.n_hidden]);
    }
    row(&m.b2);
    out
}

pub fn read_model(text: &str) -> Result<MlpModel> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad("empty file"))?;
    if header.trim() != MODEL_MAGIC {
        return Err(bad(format!("bad header {header:?}")));
    }
    let dims_line = lines.next().ok_or_else(|| bad("missing dimensions"))?;
    let dims: Vec<usize> = dims_line
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| bad(format!("bad dimension {t:?}"))))
        .collect::<Result<_>>()?;
    let [n_in, n_hidden, n_out] = dims[..] else {
        return Err(bad("expected three dimensions"));
    };
    if n_in == 0 || n_hidden == 0 || n_out == 0 {
        return Err(bad("zero dimension"));
    }

    let mut read_row = |expected: usize| -> Result<Vec<f64>> {
        let line = lines.next().ok_or_else(|| bad("missing row"))?;
        let row: Vec<f64> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad(format!("bad value {t:?}"))))
            .collect::<Result<_>>()?;
        if row.len() != expected {
            return Err(bad(format!(
                "row has {} values, expected {expected}",
                row.len()
            )));
        }
        if row.iter().any(|v: &f64| !v.is_finite()) {
            return Err(bad("non-finite weight"));
        }
        Ok(row)
    };

    let mut w1 = Vec::with_capacity(n_hidden * n_in);
    for _ in 0..n_hidden {
        w1.extend(read_row(n_in)?);
    }
    let b1 = read_row(n_hidden)?;
    let mut w2 = Vec::with_capacity(n_out * n_hidden);
    for _ in 0..n_out {
        w2.extend(read_row(n_hidden)?);
    }
    let b2 = read_row(n_out)?;
    Ok(MlpModel {
        n_in,
        n_hidden,
        n_out,
        w1,
        b1,
        w2,
        b2,
    })
}

pub fn save_model(path: &Path, m: &MlpModel) -> Result<()> {
    fs::write(path, write_model(m))
        .map_err(|e| Error::io(format!("writing model {}", path.display()), e))
}

pub fn load_model(path: &Path) -> Result<MlpModel> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::io(format!("reading model {}", path.display()), e))?;
    read_model(&text)
}

fn bad(reason: impl Into<String>) -> Error {
    Error::InvalidModelFile(reason.into())
}
