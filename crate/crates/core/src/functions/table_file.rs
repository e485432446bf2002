//! Text format for function tables.
//!
//! ```text
//! A1=<group> A2=<group> B=<group>
//! a1Index a2Index bIndex
//! ...
//! ```
//!
//! Data lines are in row-major order: `a1` outer, `a2` inner.

use std::io::{self, BufRead, Write};

use crate::algebra::{parse_group, GroupSpec};
use crate::error::{Error, Result};

use super::{func_from_table, Func};

pub fn write_table<W: Write>(f: &Func, mut w: W) -> io::Result<()> {
    writeln!(w, "A1={} A2={} B={}", f.a1(), f.a2(), f.codomain())?;
    let n2 = f.a2().order();
    for (i, v) in f.table().iter().enumerate() {
        writeln!(w, "{} {} {}", i / n2, i % n2, v)?;
    }
    Ok(())
}

/// Raw `(a1, a2, b)` triples with their group header, in file order. Used for
/// encoding tables that may not be functions (zero or several tags per cell).
#[derive(Clone, Debug)]
pub struct TripleTable {
    pub a1: GroupSpec,
    pub a2: GroupSpec,
    pub b: GroupSpec,
    pub triples: Vec<(usize, usize, usize)>,
}

fn parse_header(line: &str) -> Result<(GroupSpec, GroupSpec, GroupSpec)> {
    let mut a1 = None;
    let mut a2 = None;
    let mut b = None;
    for tok in line.split_whitespace() {
        let (key, val) = tok
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("bad header token `{tok}`")))?;
        let slot = match key {
            "A1" => &mut a1,
            "A2" => &mut a2,
            "B" => &mut b,
            _ => return Err(Error::Parse(format!("unknown header key `{key}`"))),
        };
        *slot = Some(parse_group(val)?);
    }
    match (a1, a2, b) {
        (Some(a1), Some(a2), Some(b)) => Ok((a1, a2, b)),
        _ => Err(Error::Parse("header must name A1, A2 and B".into())),
    }
}

pub fn read_triples<R: BufRead>(r: R) -> Result<TripleTable> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty table file".into()))?
        .map_err(|e| Error::Parse(e.to_string()))?;
    let (a1, a2, b) = parse_header(&header)?;
    let mut triples = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let line = line.map_err(|e| Error::Parse(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let nums = line
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("line {}: bad index `{t}`", lineno + 2)))
            })
            .collect::<Result<Vec<_>>>()?;
        let [x, y, z] = nums[..] else {
            return Err(Error::Parse(format!("line {}: expected three indices", lineno + 2)));
        };
        for (v, g) in [(x, &a1), (y, &a2), (z, &b)] {
            if v >= g.order() {
                return Err(Error::IndexOutOfRange { index: v, order: g.order() });
            }
        }
        triples.push((x, y, z));
    }
    Ok(TripleTable { a1, a2, b, triples })
}

/// Reads a function table; data lines must be exactly the row-major
/// enumeration of `A1 x A2`.
pub fn read_table<R: BufRead>(r: R) -> Result<Func> {
    let t = read_triples(r)?;
    let (n1, n2) = (t.a1.order(), t.a2.order());
    if t.triples.len() != n1 * n2 {
        return Err(Error::BadTableLength { expected: n1 * n2, got: t.triples.len() });
    }
    let mut values = Vec::with_capacity(n1 * n2);
    for (i, &(x, y, z)) in t.triples.iter().enumerate() {
        if (x, y) != (i / n2, i % n2) {
            return Err(Error::Parse(format!(
                "line {}: expected cell ({}, {}), found ({x}, {y})",
                i + 2,
                i / n2,
                i % n2
            )));
        }
        values.push(z as u32);
    }
    func_from_table(t.a1, t.a2, t.b, values)
}
