//! Plain-text file formats.
//!
//! Matrix record: line 1 the dimension n, line 2 the n diagonal entries,
//! line 3 the n-1 off-diagonal entries (present and empty for n = 1).
//! Spectral record: n, then the eigenvalues ascending, then the norming
//! constants. Floats are written with 17 significant digits; the parser
//! takes any standard decimal or exponent notation. Lines starting with
//! '#' are comments.

use crate::data::SpectralData;
use crate::error::{Error, Result};
use crate::matrix::TridiagonalMatrix;

fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn join_floats(v: &[f64]) -> String {
    v.iter().map(|&x| fmt_float(x)).collect::<Vec<_>>().join(" ")
}

/// Non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim_start().starts_with('#'))
        .collect()
}

fn parse_floats(line: usize, text: &str, expected: usize) -> Result<Vec<f64>> {
    let vals: Vec<f64> = text
        .split_whitespace()
        .map(|tok| {
            tok.parse::<f64>().map_err(|_| Error::Parse {
                line,
                msg: format!("not a number: '{tok}'"),
            })
        })
        .collect::<Result<_>>()?;
    if vals.len() != expected {
        return Err(Error::Parse {
            line,
            msg: format!("expected {expected} values, found {}", vals.len()),
        });
    }
    Ok(vals)
}

fn parse_dimension(lines: &[(usize, &str)]) -> Result<usize> {
    let (line, text) = lines.first().ok_or(Error::Parse {
        line: 0,
        msg: "empty input".into(),
    })?;
    let n: usize = text.trim().parse().map_err(|_| Error::Parse {
        line: *line,
        msg: format!("expected the dimension, found '{}'", text.trim()),
    })?;
    if n == 0 {
        return Err(Error::Parse {
            line: *line,
            msg: "dimension must be positive".into(),
        });
    }
    Ok(n)
}

fn row<'a>(lines: &[(usize, &'a str)], idx: usize) -> (usize, &'a str) {
    // a missing trailing line is treated as empty (n = 1 off-diagonal)
    lines.get(idx).copied().unwrap_or((idx + 1, ""))
}

pub fn write_matrix(t: &TridiagonalMatrix) -> String {
    format!(
        "{}\n{}\n{}\n",
        t.n(),
        join_floats(t.diag()),
        join_floats(t.off_diag())
    )
}

pub fn parse_matrix(text: &str) -> Result<TridiagonalMatrix> {
    let lines = content_lines(text);
    let n = parse_dimension(&lines)?;
    let (dline, dtext) = row(&lines, 1);
    let a = parse_floats(dline, dtext, n)?;
    let (oline, otext) = row(&lines, 2);
    let b = parse_floats(oline, otext, n - 1)?;
    TridiagonalMatrix::new(a, b)
}

pub fn write_spectral(d: &SpectralData) -> String {
    format!(
        "{}\n{}\n{}\n",
        d.n(),
        join_floats(d.lambda()),
        join_floats(d.w())
    )
}

pub fn parse_spectral(text: &str) -> Result<SpectralData> {
    let lines = content_lines(text);
    let n = parse_dimension(&lines)?;
    let (lline, ltext) = row(&lines, 1);
    let lambda = parse_floats(lline, ltext, n)?;
    let (wline, wtext) = row(&lines, 2);
    let w = parse_floats(wline, wtext, n)?;
    SpectralData::new(lambda, w)
}
