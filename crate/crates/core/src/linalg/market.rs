//! Matrix Market coordinate format (1-based indices).

use std::io::{BufRead, Write};

use crate::error::{Error, Result};

use super::SparseMatrix;

/// Writes `a` in coordinate format. With `symmetric`, only the lower triangle
/// is written under a `symmetric` header; the caller asserts symmetry.
pub fn write_matrix_market<W: Write>(a: &SparseMatrix, symmetric: bool, mut out: W) -> Result<()> {
    let kind = if symmetric { "symmetric" } else { "general" };
    writeln!(out, "%%MatrixMarket matrix coordinate real {kind}")?;
    let keep = |i: usize, j: usize| !symmetric || j <= i;
    let nnz = (0..a.n_rows())
        .map(|i| a.row(i).0.iter().filter(|&&j| keep(i, j)).count())
        .sum::<usize>();
    writeln!(out, "{} {} {}", a.n_rows(), a.n_cols(), nnz)?;
    for i in 0..a.n_rows() {
        let (cols, vals) = a.row(i);
        for (&j, &v) in cols.iter().zip(vals) {
            if keep(i, j) {
                writeln!(out, "{} {} {:e}", i + 1, j + 1, v)?;
            }
        }
    }
    Ok(())
}

pub fn read_matrix_market<R: BufRead>(input: R) -> Result<SparseMatrix> {
    let mut lines = input.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty input".into(),
    })?;
    let header = header?;
    let fields: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if fields.len() != 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" || fields[2] != "coordinate" {
        return Err(Error::Parse {
            line: 1,
            msg: format!("unsupported header `{header}`"),
        });
    }
    if fields[3] != "real" && fields[3] != "integer" {
        return Err(Error::Parse {
            line: 1,
            msg: format!("unsupported field `{}`", fields[3]),
        });
    }
    let symmetric = match fields[4].as_str() {
        "general" => false,
        "symmetric" => true,
        other => {
            return Err(Error::Parse {
                line: 1,
                msg: format!("unsupported symmetry `{other}`"),
            })
        }
    };

    let mut size: Option<(usize, usize, usize)> = None;
    let mut trip = Vec::new();
    for (idx, line) in lines {
        let line = line?;
        let lineno = idx + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let parts: Vec<&str> = t.split_whitespace().collect();
        let bad = |msg: &str| Error::Parse {
            line: lineno,
            msg: msg.to_string(),
        };
        match size {
            None => {
                if parts.len() != 3 {
                    return Err(bad("expected `rows cols nnz`"));
                }
                let p = |s: &str| s.parse::<usize>().map_err(|_| bad("bad size line"));
                size = Some((p(parts[0])?, p(parts[1])?, p(parts[2])?));
            }
            Some((nr, nc, _)) => {
                if parts.len() != 3 {
                    return Err(bad("expected `row col value`"));
                }
                let i: usize = parts[0].parse().map_err(|_| bad("bad row index"))?;
                let j: usize = parts[1].parse().map_err(|_| bad("bad column index"))?;
                let v: f64 = parts[2].parse().map_err(|_| bad("bad value"))?;
                if i == 0 || j == 0 || i > nr || j > nc {
                    return Err(bad("index out of range"));
                }
                trip.push((i - 1, j - 1, v));
                if symmetric && i != j {
                    trip.push((j - 1, i - 1, v));
                }
            }
        }
    }
    let (nr, nc, nnz) = size.ok_or(Error::Parse {
        line: 0,
        msg: "missing size line".into(),
    })?;
    let stored = if symmetric {
        trip.iter().filter(|t| t.0 >= t.1).count()
    } else {
        trip.len()
    };
    if stored != nnz {
        return Err(Error::Parse {
            line: 0,
            msg: format!("expected {nnz} entries, found {stored}"),
        });
    }
    SparseMatrix::from_triplets(nr, nc, &trip)
}
