//! Reading walds and matrices from arguments and files.

use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use waldspace::forest::wald_from_newick;
use waldspace::{Error, Param, Result, SpdMatrix, Wald};

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))
}

/// An argument is a file if one exists at that path, Newick text otherwise.
fn text_of(arg: &str) -> Result<String> {
    let p = Path::new(arg);
    if p.is_file() {
        read(p)
    } else {
        Ok(arg.to_string())
    }
}

/// Walds from a file (or inline text), one per non-empty line. A line may
/// hold several `;`-terminated trees, which together form a forest.
pub fn walds(arg: &str, param: Param) -> Result<Vec<Wald>> {
    text_of(arg)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| wald_from_newick(l, param))
        .collect()
}

pub fn wald(arg: &str, param: Param) -> Result<Wald> {
    let mut all = walds(arg, param)?;
    match all.len() {
        1 => Ok(all.remove(0)),
        0 => Err(Error::InvalidArgument(format!("no tree in '{arg}'"))),
        k => Err(Error::InvalidArgument(format!(
            "expected one tree in '{arg}', found {k}"
        ))),
    }
}

/// Square matrix from CSV. A header row and a label column, as written by
/// the matrix tables, are skipped when they are not numeric.
pub fn matrix(path: &Path) -> Result<SpdMatrix> {
    let text = read(path)?;
    let mut rows: Vec<Vec<&str>> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(',').map(str::trim).collect())
        .collect();
    let numeric = |s: &str| s.parse::<f64>().is_ok();
    if rows.first().is_some_and(|r| !r.iter().all(|c| numeric(c))) && rows.len() > 1 {
        rows.remove(0);
    }
    if rows.iter().all(|r| r.first().is_some_and(|c| !numeric(c))) {
        rows.iter_mut().for_each(|r| {
            r.remove(0);
        });
    }
    let n = rows.len();
    let mut values = Vec::with_capacity(n * n);
    for r in &rows {
        if r.len() != n {
            return Err(Error::InvalidArgument(format!(
                "{} is not a square matrix",
                path.display()
            )));
        }
        for c in r {
            values.push(
                c.parse::<f64>()
                    .map_err(|_| Error::InvalidArgument(format!("not a number: '{c}'")))?,
            );
        }
    }
    SpdMatrix::new(DMatrix::from_row_slice(n, n, &values))
}
