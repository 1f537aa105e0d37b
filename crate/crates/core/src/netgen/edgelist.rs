//! Edge-list text format.
//!
//! ```text
//! n=<n> kind=<binary|count>
//! i<TAB>j            (binary, i <= j)
//! i<TAB>j<TAB>w      (count, i <= j, w > 0)
//! ```

use std::io::{BufRead, Write};

use super::{AdjacencyMatrix, NetworkKind};
use crate::error::{Error, Result};

pub fn write_edge_list<W: Write>(adj: &AdjacencyMatrix, mut out: W) -> Result<()> {
    writeln!(out, "n={} kind={}", adj.n(), adj.kind())?;
    for i in 0..adj.n() {
        for j in i..adj.n() {
            let w = adj.get(i, j);
            if w == 0 {
                continue;
            }
            match adj.kind() {
                NetworkKind::Binary => writeln!(out, "{i}\t{j}")?,
                NetworkKind::Count => writeln!(out, "{i}\t{j}\t{w}")?,
            }
        }
    }
    Ok(())
}

fn bad(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Format(format!("line {line}: {msg}"))
}

fn parse_header(line: &str) -> Result<(usize, NetworkKind)> {
    let mut n = None;
    let mut kind = None;
    for tok in line.split_whitespace() {
        match tok.split_once('=') {
            Some(("n", v)) => n = Some(v.parse::<usize>().map_err(|e| bad(1, format!("bad n: {e}")))?),
            Some(("kind", "binary")) => kind = Some(NetworkKind::Binary),
            Some(("kind", "count")) => kind = Some(NetworkKind::Count),
            _ => return Err(bad(1, format!("unexpected header token `{tok}`"))),
        }
    }
    match (n, kind) {
        (Some(n), Some(k)) => Ok((n, k)),
        _ => Err(bad(1, "header must be `n=<n> kind=<binary|count>`")),
    }
}

pub fn read_edge_list<R: BufRead>(input: R) -> Result<AdjacencyMatrix> {
    let mut lines = input.lines();
    let header = lines.next().ok_or_else(|| bad(1, "empty file"))??;
    let (n, kind) = parse_header(header.trim())?;
    let mut adj = AdjacencyMatrix::zeros(n, kind);
    for (idx, line) in lines.enumerate() {
        let lineno = idx + 2;
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let parse_node = |s: &str| -> Result<usize> {
            let v = s.trim().parse::<usize>().map_err(|e| bad(lineno, format!("bad node `{s}`: {e}")))?;
            if v >= n {
                return Err(bad(lineno, format!("node {v} out of range for n={n}")));
            }
            Ok(v)
        };
        let (i, j, w) = match (kind, fields.as_slice()) {
            (NetworkKind::Binary, [i, j]) => (parse_node(i)?, parse_node(j)?, 1),
            (NetworkKind::Count, [i, j, w]) => {
                let w = w.trim().parse::<u32>().map_err(|e| bad(lineno, format!("bad weight: {e}")))?;
                if w == 0 {
                    return Err(bad(lineno, "zero weight"));
                }
                (parse_node(i)?, parse_node(j)?, w)
            }
            _ => return Err(bad(lineno, format!("wrong number of fields for a {kind} edge list"))),
        };
        if i > j {
            return Err(bad(lineno, format!("expected i <= j, got {i} > {j}")));
        }
        if adj.get(i, j) != 0 {
            return Err(bad(lineno, format!("duplicate edge ({i},{j})")));
        }
        adj.set_pair(i, j, w);
    }
    Ok(adj)
}
