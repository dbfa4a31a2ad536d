//! Single-block SDPA sparse format (`.dat-s`).
//!
//! The file describes `min cᵀx` s.t. `Σ x_p F_p − F_0 ⪰ 0`, whose dual is
//! `max F_0 • Y` s.t. `F_p • Y = c_p`, `Y ⪰ 0`. That dual is read as the standard form
//! here with `C = −F_0`, `A_p = F_p` and `b = c`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::problem::SdpProblem;
use crate::sparse::SparseSymMatrix;

/// Standard-form data read from an SDPA file.
#[derive(Debug, Clone)]
pub struct SdpaData {
    pub n: usize,
    pub c: SparseSymMatrix,
    pub a: Vec<SparseSymMatrix>,
    pub b: Vec<f64>,
}

impl SdpaData {
    pub fn into_problem(self) -> Result<SdpProblem> {
        SdpProblem::new(self.c, self.a, self.b)
    }

    /// Writes the data back out, upper triangle only, with `F_0 = −C`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.a.len());
        let _ = writeln!(out, "1");
        let _ = writeln!(out, "{}", self.n);
        let b: Vec<String> = self.b.iter().map(|v| format!("{v:?}")).collect();
        let _ = writeln!(out, "{}", b.join(" "));
        let mut emit = |matno: usize, m: &SparseSymMatrix, sign: f64| {
            let mut entries = Vec::new();
            for j in 0..m.n() {
                entries.push((j, j, m.diag[j]));
                for slot in m.pattern().col_range(j) {
                    entries.push((j, m.pattern().row_of_slot(slot), m.off[slot]));
                }
            }
            entries.sort_by_key(|&(i, j, _)| (i, j));
            for (i, j, v) in entries {
                if v != 0.0 {
                    let _ = writeln!(out, "{matno} 1 {} {} {:?}", i + 1, j + 1, sign * v);
                }
            }
        };
        emit(0, &self.c, -1.0);
        for (p, a) in self.a.iter().enumerate() {
            emit(p + 1, a, 1.0);
        }
        out
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Parses an SDPA sparse file with exactly one block. A negative block size marks a
/// diagonal block. `(i, j)` and `(j, i)` address the same entry and repeats are summed.
pub fn parse_sdpa(text: &str) -> Result<SdpaData> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.replace([',', '(', ')', '{', '}'], " ")))
        .filter(|(_, l)| {
            let t = l.trim_start();
            !(t.is_empty() || t.starts_with('"') || t.starts_with('*'))
        });

    let mut header = |what: &str| -> Result<(usize, Vec<String>)> {
        let (no, l) = lines.next().ok_or_else(|| parse_err(0, format!("missing {what}")))?;
        Ok((no, l.split_whitespace().map(str::to_owned).collect()))
    };
    let int = |no: usize, tok: Option<&String>, what: &str| -> Result<i64> {
        let tok = tok.ok_or_else(|| parse_err(no, format!("missing {what}")))?;
        tok.parse::<i64>()
            .or_else(|_| tok.parse::<f64>().ok().filter(|v| v.fract() == 0.0).map(|v| v as i64).ok_or(()))
            .map_err(|_| parse_err(no, format!("invalid {what} '{tok}'")))
    };

    let (no, toks) = header("constraint count")?;
    let m = int(no, toks.first(), "constraint count")?;
    if m < 0 {
        return Err(parse_err(no, "constraint count must be nonnegative"));
    }
    let m = m as usize;
    let (no, toks) = header("block count")?;
    if int(no, toks.first(), "block count")? != 1 {
        return Err(parse_err(no, "only a single block is supported"));
    }
    let (no, toks) = header("block size")?;
    let size = int(no, toks.first(), "block size")?;
    if size == 0 {
        return Err(parse_err(no, "block size must be nonzero"));
    }
    let (n, diagonal_block) = (size.unsigned_abs() as usize, size < 0);

    let mut b = Vec::with_capacity(m);
    while b.len() < m {
        let (no, toks) = header("objective vector")?;
        for t in toks {
            if b.len() == m {
                return Err(parse_err(no, "too many objective coefficients"));
            }
            b.push(t.parse::<f64>().map_err(|_| parse_err(no, format!("invalid number '{t}'")))?);
        }
    }

    let mut triplets: Vec<Vec<(usize, usize, f64)>> = vec![Vec::new(); m + 1];
    for (no, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 5 {
            return Err(parse_err(no, format!("expected 5 fields, found {}", toks.len())));
        }
        let idx = |k: usize, what: &str| -> Result<usize> {
            toks[k].parse::<usize>().map_err(|_| parse_err(no, format!("invalid {what} '{}'", toks[k])))
        };
        let (matno, blk, i, j) = (idx(0, "matrix number")?, idx(1, "block number")?, idx(2, "row")?, idx(3, "column")?);
        let v: f64 = toks[4].parse().map_err(|_| parse_err(no, format!("invalid value '{}'", toks[4])))?;
        if matno > m {
            return Err(parse_err(no, format!("matrix number {matno} exceeds {m}")));
        }
        if blk != 1 {
            return Err(parse_err(no, format!("block number {blk} out of range")));
        }
        if i == 0 || j == 0 || i > n || j > n {
            return Err(parse_err(no, format!("index ({i}, {j}) out of range for size {n}")));
        }
        if diagonal_block && i != j {
            return Err(parse_err(no, "off-diagonal entry in a diagonal block"));
        }
        if !v.is_finite() {
            return Err(parse_err(no, "value is not finite"));
        }
        if v != 0.0 {
            triplets[matno].push((i - 1, j - 1, v));
        }
    }

    let mut mats = triplets.into_iter().map(|t| SparseSymMatrix::from_triplets(n, &t));
    let c = mats.next().expect("F_0 present")?.scaled(-1.0);
    let a = mats.collect::<Result<Vec<_>>>()?;
    Ok(SdpaData { n, c, a, b })
}
