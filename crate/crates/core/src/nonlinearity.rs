//! Differential spectra and the two nonlinearity measures.
//!
//! Offsets `delta` in `A = A1 x A2` are addressed by `a1 + |A1| * a2`. The
//! spectrum row of `delta` counts, for every `b`, the `x` in `A` with
//! `f(x + delta) - f(x) = b`. Rows are independent, so they are computed in
//! parallel and merged by row order; maxima use a total order (count, then
//! smallest delta, then smallest b), which makes every result independent
//! of the worker count.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::functions::Func;
use crate::limits;
use crate::Rational;

/// Spectra with more `(delta, b)` cells than this are streamed: only the
/// running maximum is kept.
pub const MATERIALIZE_LIMIT: usize = 1 << 20;

/// A maximal spectrum cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Peak {
    pub count: u64,
    pub delta: usize,
    pub b: usize,
}

impl Peak {
    /// The preferred of two cells: larger count, then smaller delta, then
    /// smaller b.
    pub fn better(self, other: Peak) -> Peak {
        let key = |p: &Peak| (std::cmp::Reverse(p.count), p.delta, p.b);
        if key(&other) < key(&self) {
            other
        } else {
            self
        }
    }
}

fn merge_peaks(a: Option<Peak>, b: Option<Peak>) -> Option<Peak> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.better(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

struct Kernel<'a> {
    f: &'a Func,
    n1: usize,
    n2: usize,
    nb: usize,
    sub: Option<Vec<u32>>,
}

impl<'a> Kernel<'a> {
    fn new(f: &'a Func) -> Kernel<'a> {
        let nb = f.codomain().order();
        let sub = (nb <= 1024).then(|| f.codomain().sub_table());
        Kernel { f, n1: f.a1().order(), n2: f.a2().order(), nb, sub }
    }

    fn rows(&self, restricted: bool) -> Vec<usize> {
        let n = self.n1 * self.n2;
        if restricted {
            (0..n).filter(|d| d % self.n1 != 0).collect()
        } else {
            (0..n).collect()
        }
    }

    fn diff(&self, y1: u32, y0: u32) -> usize {
        match &self.sub {
            Some(t) => t[y1 as usize * self.nb + y0 as usize] as usize,
            None => self.f.codomain().sub(y1 as usize, y0 as usize),
        }
    }

    fn row(&self, delta: usize) -> Vec<u64> {
        let (d1, d2) = (delta % self.n1, delta / self.n1);
        let t1 = self.f.a1().translation(d1);
        let t2 = self.f.a2().translation(d2);
        let table = self.f.table();
        let mut counts = vec![0u64; self.nb];
        for x1 in 0..self.n1 {
            let (base0, base1) = (x1 * self.n2, t1[x1] as usize * self.n2);
            for x2 in 0..self.n2 {
                let y0 = table[base0 + x2];
                let y1 = table[base1 + t2[x2] as usize];
                counts[self.diff(y1, y0)] += 1;
            }
        }
        counts
    }

    fn row_peak(&self, delta: usize) -> Option<Peak> {
        if delta == 0 {
            return None;
        }
        let counts = self.row(delta);
        let (b, &count) = counts
            .iter()
            .enumerate()
            .rev()
            .max_by_key(|(_, &c)| c)
            .expect("codomain is nonempty");
        Some(Peak { count, delta, b })
    }
}

fn check_size(f: &Func) -> Result<()> {
    limits::check_cells(f.domain_order() as u128 * f.codomain().order() as u128)
}

#[derive(Clone, Debug)]
pub struct DifferentialSpectrum {
    func: Func,
    restricted: bool,
    rows: Vec<usize>,
    counts: Option<Vec<u64>>,
    peak: Option<Peak>,
}

impl DifferentialSpectrum {
    pub fn func(&self) -> &Func {
        &self.func
    }

    /// Whether offsets were limited to those with a nonzero `A1` component.
    pub fn restricted(&self) -> bool {
        self.restricted
    }

    /// Offsets covered, ascending.
    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn is_materialized(&self) -> bool {
        self.counts.is_some()
    }

    /// Counts for one offset, when materialized and covered.
    pub fn row(&self, delta: usize) -> Option<&[u64]> {
        let counts = self.counts.as_ref()?;
        let pos = self.rows.binary_search(&delta).ok()?;
        let nb = self.func.codomain().order();
        Some(&counts[pos * nb..(pos + 1) * nb])
    }

    pub fn count(&self, delta: usize, b: usize) -> Option<u64> {
        self.row(delta).and_then(|r| r.get(b).copied())
    }

    /// Maximal cell over nonzero offsets.
    pub fn peak(&self) -> Option<Peak> {
        self.peak
    }

    /// Peak count over `|A|`; zero when there is no nonzero offset.
    pub fn peak_ratio(&self) -> Rational {
        peak_ratio(self.peak, self.func.domain_order())
    }

    /// CSV with header `deltaIndex,bIndex,count`, sorted by offset then `b`.
    /// Streamed spectra are recomputed row by row.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "deltaIndex,bIndex,count")?;
        let nb = self.func.codomain().order();
        let kernel = Kernel::new(&self.func);
        for (pos, &delta) in self.rows.iter().enumerate() {
            let fresh;
            let row = match &self.counts {
                Some(c) => &c[pos * nb..(pos + 1) * nb],
                None => {
                    fresh = kernel.row(delta);
                    &fresh[..]
                }
            };
            for (b, c) in row.iter().enumerate() {
                writeln!(w, "{delta},{b},{c}")?;
            }
        }
        Ok(())
    }
}

fn peak_ratio(peak: Option<Peak>, domain: usize) -> Rational {
    match peak {
        Some(p) => Rational::new(p.count, domain as u64),
        None => Rational::zero(),
    }
}

/// Exhaustive spectrum. Unrestricted mode covers every offset including 0;
/// restricted mode covers offsets `(a1, a2)` with `a1 != 0`.
pub fn differential_spectrum(f: &Func, restricted: bool) -> Result<DifferentialSpectrum> {
    check_size(f)?;
    let kernel = Kernel::new(f);
    let rows = kernel.rows(restricted);
    let nb = kernel.nb;
    let (counts, peak) = if rows.len() * nb <= MATERIALIZE_LIMIT {
        let table: Vec<Vec<u64>> = rows.par_iter().map(|&d| kernel.row(d)).collect();
        let mut peak = None;
        for (&delta, row) in rows.iter().zip(&table) {
            if delta == 0 {
                continue;
            }
            for (b, &count) in row.iter().enumerate() {
                peak = merge_peaks(peak, Some(Peak { count, delta, b }));
            }
        }
        (Some(table.concat()), peak)
    } else {
        let peak = rows
            .par_iter()
            .map(|&d| kernel.row_peak(d))
            .reduce(|| None, merge_peaks);
        (None, peak)
    };
    Ok(DifferentialSpectrum { func: f.clone(), restricted, rows, counts, peak })
}

fn streamed_peak(f: &Func, restricted: bool) -> Result<Option<Peak>> {
    check_size(f)?;
    let kernel = Kernel::new(f);
    Ok(kernel
        .rows(restricted)
        .par_iter()
        .map(|&d| kernel.row_peak(d))
        .reduce(|| None, merge_peaks))
}

/// Nonlinearity: the largest fraction of inputs sharing one derivative value,
/// over all nonzero offsets.
pub fn nonlinearity_of(f: &Func) -> Result<Rational> {
    Ok(peak_ratio(streamed_peak(f, false)?, f.domain_order()))
}

/// Nonlinearity with its maximizing cell.
pub fn nonlinearity_with_peak(f: &Func) -> Result<(Rational, Option<Peak>)> {
    let peak = streamed_peak(f, false)?;
    Ok((peak_ratio(peak, f.domain_order()), peak))
}

/// Partial nonlinearity: as [`nonlinearity_of`] but over offsets whose `A1`
/// component is nonzero.
pub fn partial_nonlinearity_of(f: &Func) -> Result<Rational> {
    Ok(peak_ratio(streamed_peak(f, true)?, f.domain_order()))
}

pub fn partial_nonlinearity_with_peak(f: &Func) -> Result<(Rational, Option<Peak>)> {
    let peak = streamed_peak(f, true)?;
    Ok((peak_ratio(peak, f.domain_order()), peak))
}

/// True iff every value of `codomain_order` has exactly
/// `len / codomain_order` preimages.
pub fn is_balanced(table: &[u32], codomain_order: usize) -> bool {
    if codomain_order == 0 || !table.len().is_multiple_of(codomain_order) {
        return false;
    }
    let mut counts = vec![0usize; codomain_order];
    for &v in table {
        match counts.get_mut(v as usize) {
            Some(c) => *c += 1,
            None => return false,
        }
    }
    let each = table.len() / codomain_order;
    counts.iter().all(|&c| c == each)
}

/// `P_f = 1 / |B|`.
pub fn is_perfect_nonlinear(f: &Func) -> Result<bool> {
    Ok(nonlinearity_of(f)? == Rational::new(1, f.codomain().order() as u64))
}

/// Every derivative along a nonzero offset is balanced. Equivalent to
/// [`is_perfect_nonlinear`], but decided row by row from the counts.
pub fn derivatives_balanced(f: &Func) -> Result<bool> {
    check_size(f)?;
    let kernel = Kernel::new(f);
    let (n, nb) = (f.domain_order(), kernel.nb);
    if n % nb != 0 {
        return Ok(false);
    }
    let each = (n / nb) as u64;
    Ok(kernel
        .rows(false)
        .par_iter()
        .filter(|&&d| d != 0)
        .all(|&d| kernel.row(d).iter().all(|&c| c == each)))
}
