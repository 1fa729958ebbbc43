//! Plain-text matrix format.
//!
//! ```text
//! # optional comments
//! 2 3
//! 1 0 -1
//! 4 5 6
//! ```
//!
//! A header line `<rows> <cols>` is followed by `rows` lines of `cols`
//! decimal integers. Lines starting with `#` and blank lines are skipped.
//! Several matrices may be concatenated in one file.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;

use super::IntMatrix;
use crate::error::{Error, Result};

pub fn parse_matrix(text: &str) -> Result<IntMatrix> {
    let mut ms = parse_matrices(text)?;
    match ms.len() {
        1 => Ok(ms.pop().unwrap()),
        0 => Err(Error::Parse { line: 0, msg: "no matrix found".into() }),
        n => Err(Error::Parse { line: 0, msg: format!("expected one matrix, found {n}") }),
    }
}

pub fn parse_matrices(text: &str) -> Result<Vec<IntMatrix>> {
    let mut lines =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let mut out = Vec::new();
    while let Some((ln, header)) = lines.next() {
        let dims = parse_ints::<usize>(header, ln)?;
        let [rows, cols] = dims[..] else {
            return Err(Error::Parse { line: ln, msg: format!("expected `<rows> <cols>`, got `{header}`") });
        };
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let Some((ln, line)) = lines.next() else {
                return Err(Error::Parse {
                    line: ln,
                    msg: format!("unexpected end of input after {r} of {rows} rows"),
                });
            };
            let vals = parse_ints::<BigInt>(line, ln)?;
            if vals.len() != cols {
                return Err(Error::Parse { line: ln, msg: format!("expected {cols} values, found {}", vals.len()) });
            }
            data.extend(vals);
        }
        out.push(IntMatrix::new(rows, cols, data)?);
    }
    Ok(out)
}

fn parse_ints<T: FromStr>(line: &str, ln: usize) -> Result<Vec<T>> {
    line.split_whitespace()
        .map(|tok| tok.parse::<T>().map_err(|_| Error::Parse { line: ln, msg: format!("bad integer `{tok}`") }))
        .collect()
}

pub fn write_matrix(m: &IntMatrix) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} {}", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(ToString::to_string).collect();
        let _ = writeln!(s, "{}", row.join(" "));
    }
    s
}
