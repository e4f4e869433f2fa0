//! Dense text matrices: a `rows cols` header followed by row-major decimals.

use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub fn parse_dense_matrix(text: &str) -> Result<DMatrix<f64>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::MatrixFormat("empty input, expected a `rows cols` header".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| Error::MatrixFormat(format!("bad header token {t:?}")))
        })
        .collect::<Result<_>>()?;
    let [rows, cols] = dims[..] else {
        return Err(Error::MatrixFormat(format!(
            "header must hold two integers, got {header:?}"
        )));
    };
    if rows == 0 || cols == 0 {
        return Err(Error::MatrixFormat(format!(
            "matrix dimensions must be positive, got {rows}x{cols}"
        )));
    }
    let values: Vec<f64> = lines
        .flat_map(str::split_whitespace)
        .map(|t| {
            let v: f64 = t
                .parse()
                .map_err(|_| Error::MatrixFormat(format!("bad entry {t:?}")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::MatrixFormat(format!("non-finite entry {t:?}")))
            }
        })
        .collect::<Result<_>>()?;
    if values.len() != rows * cols {
        return Err(Error::MatrixFormat(format!(
            "expected {} entries for a {rows}x{cols} matrix, found {}",
            rows * cols,
            values.len()
        )));
    }
    Ok(DMatrix::from_row_slice(rows, cols, &values))
}

pub fn read_dense_matrix(path: impl AsRef<Path>) -> Result<DMatrix<f64>> {
    parse_dense_matrix(&std::fs::read_to_string(path)?)
}
