//! Plain-text system files.
//!
//! ```text
//! n m
//! a_11 ... a_1m
//! ...
//! a_n1 ... a_nm
//! b:
//! b_1 ... b_n
//! ```
//!
//! Whitespace between numbers is free-form; `#` starts a comment.

use std::fmt::Write as _;
use std::path::Path;

use qkacz_core::{LinearSystem, RealMatrix, RealVector};

use crate::error::CliError;

pub fn format_system(sys: &LinearSystem) -> String {
    let a = sys.a();
    let mut out = format!("{} {}\n", a.rows(), a.cols());
    for i in 0..a.rows() {
        out.push_str(&join(a.row(i)));
        out.push('\n');
    }
    out.push_str("b:\n");
    out.push_str(&join(sys.b().as_slice()));
    out.push('\n');
    out
}

fn join(values: &[f64]) -> String {
    let mut s = String::new();
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        // Shortest representation that round-trips.
        write!(s, "{v:?}").expect("writing to a String");
    }
    s
}

pub fn parse_system(text: &str) -> Result<LinearSystem, String> {
    let mut tokens = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(str::split_whitespace);
    let mut dim = |what: &str| -> Result<usize, String> {
        tokens
            .next()
            .ok_or_else(|| format!("missing {what}"))?
            .parse::<usize>()
            .map_err(|e| format!("bad {what}: {e}"))
    };
    let n = dim("row count")?;
    let m = dim("column count")?;
    if n == 0 || m == 0 {
        return Err(format!("empty system {n}x{m}"));
    }
    let number = |tok: Option<&str>, what: &str| -> Result<f64, String> {
        let tok = tok.ok_or_else(|| format!("unexpected end of file reading {what}"))?;
        tok.parse::<f64>().map_err(|_| format!("bad number {tok:?} in {what}"))
    };
    let mut data = Vec::with_capacity(n * m);
    for i in 0..n {
        for _ in 0..m {
            data.push(number(tokens.next(), &format!("row {}", i + 1))?);
        }
    }
    match tokens.next() {
        Some("b:") => {}
        Some(t) => return Err(format!("expected `b:` after {n} rows, found {t:?}")),
        None => return Err("missing `b:` section".into()),
    }
    let mut b = Vec::with_capacity(n);
    for _ in 0..n {
        b.push(number(tokens.next(), "b")?);
    }
    if let Some(t) = tokens.next() {
        return Err(format!("trailing token {t:?}"));
    }
    let a = RealMatrix::new(n, m, data).map_err(|e| e.to_string())?;
    let b = RealVector::new(b).map_err(|e| e.to_string())?;
    LinearSystem::new(a, b).map_err(|e| e.to_string())
}

pub fn read_system(path: &Path) -> Result<LinearSystem, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_system(&text).map_err(|message| CliError::Parse { path: path.into(), message })
}

pub fn write_system(path: &Path, sys: &LinearSystem) -> Result<(), CliError> {
    std::fs::write(path, format_system(sys)).map_err(|e| CliError::io(path, e))
}
