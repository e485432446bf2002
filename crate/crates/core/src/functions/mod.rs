//! Highly nonlinear functions `f: A1 x A2 -> B`, each carrying the split of
//! its domain into the source part `A1` and the randomness part `A2`.
//!
//! Every function is materialized as a lookup table at construction time,
//! stored row-major (`a1 * |A2| + a2`). Coordinates of `GF(q)^k` are packed
//! little-endian, coordinate 1 fastest, so for the catalog families the
//! domain index `a1 + |A1| * a2` equals the index of the full coordinate
//! vector.

mod table_file;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{crt_split, cyclic_iso, prime_power, Extension, GroupSpec};
use crate::error::{Error, Result};
use crate::limits;
use crate::nonlinearity::is_balanced;

pub use table_file::{read_table, read_triples, write_table, TripleTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Origin {
    #[serde(rename = "MM")]
    MaioranaMcFarland,
    Dillon,
    DillonDual,
    TraceMult,
    #[serde(rename = "CDFPW")]
    Cdfpw,
    Table,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Origin::MaioranaMcFarland => "MM",
            Origin::Dillon => "Dillon",
            Origin::DillonDual => "DillonDual",
            Origin::TraceMult => "TraceMult",
            Origin::Cdfpw => "CDFPW",
            Origin::Table => "Table",
        };
        f.write_str(s)
    }
}

/// How the `GF(q)`-coordinates of a catalog function are divided between
/// source and randomness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Split {
    /// Source takes all but the last coordinate; randomness is the last one.
    Weak,
    /// Source and randomness take one half each.
    Strong,
}

impl std::str::FromStr for Split {
    type Err = Error;
    fn from_str(s: &str) -> Result<Split> {
        match s {
            "weak" => Ok(Split::Weak),
            "strong" => Ok(Split::Strong),
            _ => Err(Error::BadParameter(format!("unknown split `{s}`"))),
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Split::Weak => "weak",
            Split::Strong => "strong",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Func {
    a1: GroupSpec,
    a2: GroupSpec,
    b: GroupSpec,
    table: Arc<[u32]>,
    origin: Origin,
    label: String,
}

impl Func {
    pub fn a1(&self) -> &GroupSpec {
        &self.a1
    }

    pub fn a2(&self) -> &GroupSpec {
        &self.a2
    }

    pub fn codomain(&self) -> &GroupSpec {
        &self.b
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    /// Short description of the family and parameters.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// `|A1| * |A2|`.
    pub fn domain_order(&self) -> usize {
        self.a1.order() * self.a2.order()
    }

    /// `A1 x A2` with the `a1 + |A1| * a2` layout.
    pub fn domain(&self) -> GroupSpec {
        GroupSpec::product(vec![self.a1.clone(), self.a2.clone()])
    }

    pub fn eval(&self, a1: usize, a2: usize) -> usize {
        self.table[a1 * self.a2.order() + a2] as usize
    }

    /// Row-major table, `a1 * |A2| + a2`.
    pub fn table(&self) -> &[u32] {
        &self.table
    }

    /// The single-variable function `x -> f(s, x)` on `A2`, as a function
    /// with source group `A2` and a trivial randomness group.
    pub fn fix_source(&self, s: usize) -> Result<Func> {
        if s >= self.a1.order() {
            return Err(Error::BadSource(s));
        }
        let n2 = self.a2.order();
        let row = self.table[s * n2..(s + 1) * n2].to_vec();
        Ok(Func {
            a1: self.a2.clone(),
            a2: GroupSpec::trivial(),
            b: self.b.clone(),
            table: row.into(),
            origin: Origin::Table,
            label: format!("{}[s={s}]", self.label),
        })
    }

    /// Same values with the domain regrouped as `A1' = A1 x A2`, `A2' = {0}`.
    pub fn unsplit(&self) -> Func {
        let (n1, n2) = (self.a1.order(), self.a2.order());
        let mut table = vec![0u32; n1 * n2];
        for a1 in 0..n1 {
            for a2 in 0..n2 {
                table[a1 + n1 * a2] = self.table[a1 * n2 + a2];
            }
        }
        Func {
            a1: self.domain(),
            a2: GroupSpec::trivial(),
            b: self.b.clone(),
            table: table.into(),
            origin: self.origin,
            label: self.label.clone(),
        }
    }
}

/// Builds a row-major table from a closure over the domain index
/// `a1 + n1 * a2`.
fn tabulate(n1: usize, n2: usize, f: impl Fn(usize) -> usize) -> Arc<[u32]> {
    let mut table = Vec::with_capacity(n1 * n2);
    for a1 in 0..n1 {
        for a2 in 0..n2 {
            table.push(f(a1 + n1 * a2) as u32);
        }
    }
    table.into()
}

fn digits(mut v: usize, base: usize, k: usize) -> Vec<usize> {
    (0..k)
        .map(|_| {
            let d = v % base;
            v /= base;
            d
        })
        .collect()
}

fn check_domain(q: u64, coords: u32) -> Result<()> {
    limits::check_cells((q as u128).saturating_pow(coords))
}

fn split_sizes(q: usize, coords: usize, split: Split) -> (usize, usize) {
    let (k1, k2) = match split {
        Split::Weak => (coords - 1, 1),
        Split::Strong => (coords / 2, coords / 2),
    };
    (q.pow(k1 as u32), q.pow(k2 as u32))
}

fn split_groups(ext: &Extension, coords: usize, split: Split) -> (GroupSpec, GroupSpec) {
    match split {
        Split::Weak => (ext.coord_group(coords - 1), ext.coord_group(1)),
        Split::Strong => (ext.coord_group(coords / 2), ext.coord_group(coords / 2)),
    }
}

/// Maiorana-McFarland `f(x_1..x_2r) = sum_{i<=r} x_i x_{i+r}` over GF(q).
pub fn mm_func(q: u64, r: u32, split: Split) -> Result<Func> {
    if r == 0 {
        return Err(Error::ZeroDegree);
    }
    check_domain(q, 2 * r)?;
    let ext = Extension::new(q, 1)?;
    let field = ext.base().clone();
    let (qn, rr) = (field.order(), r as usize);
    let (n1, n2) = split_sizes(qn, 2 * rr, split);
    let table = tabulate(n1, n2, |v| {
        let x = digits(v, qn, 2 * rr);
        (0..rr).fold(0, |acc, i| field.add(acc, field.mul(x[i], x[i + rr])))
    });
    let (a1, a2) = split_groups(&ext, 2 * rr, split);
    Ok(Func {
        a1,
        a2,
        b: ext.base_group(),
        table,
        origin: Origin::MaioranaMcFarland,
        label: format!("mm(q={q},r={r},{split})"),
    })
}

/// Validates a user map `GF(q^r) -> GF(q)` given as a table over element
/// indices of `GF(q^r)`.
fn check_map(ext: &Extension, map: &[u32]) -> Result<()> {
    let expected = ext.field().order();
    if map.len() != expected {
        return Err(Error::BadTableLength { expected, got: map.len() });
    }
    if let Some(&v) = map.iter().find(|&&v| v as usize >= ext.q()) {
        return Err(Error::IndexOutOfRange { index: v as usize, order: ext.q() });
    }
    Ok(())
}

/// Dillon `f(x, y) = g(x * y^{q^r - 2})` on `GF(q^r)^2`; `g` defaults to the
/// relative trace. `x` and `y` are packed from polynomial-basis coordinates.
pub fn dillon_func(q: u64, r: u32, g: Option<Vec<u32>>, split: Split) -> Result<Func> {
    check_domain(q, 2 * r)?;
    let ext = Extension::new(q, r)?;
    let field = ext.field().clone();
    let qr = field.order();
    if qr < 3 {
        return Err(Error::DegenerateField(qr as u64));
    }
    let g = match g {
        Some(g) => {
            check_map(&ext, &g)?;
            if !is_balanced(&g, ext.q()) {
                return Err(Error::NotBalanced);
            }
            g
        }
        None => ext.trace_table(),
    };
    let inv_exp = (qr - 2) as u64;
    let (n1, n2) = split_sizes(ext.q(), 2 * r as usize, split);
    let ys: Vec<usize> = (0..qr).map(|v| field.pow(ext.from_coord_index(v), inv_exp)).collect();
    let table = tabulate(n1, n2, |v| {
        let x = ext.from_coord_index(v % qr);
        g[field.mul(x, ys[v / qr])] as usize
    });
    let (a1, a2) = split_groups(&ext, 2 * r as usize, split);
    Ok(Func {
        a1,
        a2,
        b: ext.base_group(),
        table,
        origin: Origin::Dillon,
        label: format!("dillon(q={q},r={r},{split})"),
    })
}

/// `f(x, y) = tr(x_hat^{q^r - 2} * y_hat)` with `x_hat = sum x_i a_i` and
/// `y_hat = sum y_i b_i` over a pair of dual bases. Strong split only. The
/// basis defaults to the relative polynomial basis.
pub fn dillon_dual_func(q: u64, r: u32, basis: Option<Vec<usize>>) -> Result<Func> {
    check_domain(q, 2 * r)?;
    let ext = Extension::new(q, r)?;
    let field = ext.field().clone();
    let qr = field.order();
    if qr < 3 {
        return Err(Error::DegenerateField(qr as u64));
    }
    let basis = basis.unwrap_or_else(|| ext.polynomial_basis().to_vec());
    let dual = ext.dual_basis(&basis)?;
    let rr = r as usize;
    let q_us = ext.q();
    let inv_exp = (qr - 2) as u64;
    let xs: Vec<usize> = (0..qr)
        .map(|v| field.pow(ext.combine(&basis, &digits(v, q_us, rr)), inv_exp))
        .collect();
    let ys: Vec<usize> = (0..qr).map(|v| ext.combine(&dual, &digits(v, q_us, rr))).collect();
    let table = tabulate(qr, qr, |v| ext.trace(field.mul(xs[v % qr], ys[v / qr])));
    let (a1, a2) = split_groups(&ext, 2 * rr, Split::Strong);
    Ok(Func {
        a1,
        a2,
        b: ext.base_group(),
        table,
        origin: Origin::DillonDual,
        label: format!("dillon-dual(q={q},r={r})"),
    })
}

/// `(s1, s2) -> L(g^z)` where `z` in `Z_{q^r - 1}` is the CRT recombination
/// of `(s1, s2)` in `Z_{m1} x Z_{m2}` and `g` is the field generator. `L`
/// defaults to the relative trace.
pub fn trace_mult_func(
    q: u64,
    r: u32,
    l: Option<Vec<u32>>,
    m1: usize,
    m2: usize,
) -> Result<Func> {
    check_domain(q, r)?;
    let ext = Extension::new(q, r)?;
    let field = ext.field().clone();
    let qr = field.order();
    if qr < 3 {
        return Err(Error::DegenerateField(qr as u64));
    }
    let crt = crt_split(qr - 1, m1, m2)?;
    let phi = cyclic_iso(field.clone())?;
    let l = match l {
        Some(l) => {
            check_map(&ext, &l)?;
            check_additive(&ext, &l)?;
            l
        }
        None => ext.trace_table(),
    };
    let table = tabulate(m1, m2, |v| l[phi.forward(crt.backward(v)) + 1] as usize);
    Ok(Func {
        a1: GroupSpec::cyclic(m1),
        a2: GroupSpec::cyclic(m2),
        b: ext.base_group(),
        table,
        origin: Origin::TraceMult,
        label: format!("trace-mult(q={q},r={r},m1={m1},m2={m2})"),
    })
}

/// Nonzero and additive. Additivity is checked against the expansion over
/// the GF(p)-basis `1, x, ..., x^{n-1}` of `GF(q^r)`, which is exhaustive in
/// `|GF(q^r)|` rather than its square.
fn check_additive(ext: &Extension, l: &[u32]) -> Result<()> {
    if l.iter().all(|&v| v == 0) {
        return Err(Error::ZeroMap);
    }
    let (field, base) = (ext.field(), ext.base());
    let p = field.characteristic() as usize;
    let n = field.degree() as usize;
    let on_basis: Vec<usize> = (0..n).map(|j| l[p.pow(j as u32)] as usize).collect();
    for x in 0..field.order() {
        let expected = field
            .coeffs(x)
            .iter()
            .zip(&on_basis)
            .fold(0, |acc, (&c, &lb)| base.add(acc, base.scale(c as u64, lb)));
        if expected != l[x] as usize {
            return Err(Error::NotAdditive);
        }
    }
    Ok(())
}

/// `h(S, x) = x^{t+2} + sum_{1<=i<=t} s_i x^i` over GF(q), with
/// `A1 = GF(q)^t` holding `S` and `A2 = GF(q)` holding `x`.
pub fn cdfpw_func(q: u64, t: u32) -> Result<Func> {
    if t == 0 {
        return Err(Error::BadParameter("t must be at least 1".into()));
    }
    let (p, _) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if (t as u64 + 2).is_multiple_of(p) {
        return Err(Error::CharacteristicDividesDegree { p, degree: t as u64 + 2 });
    }
    check_domain(q, t + 1)?;
    let ext = Extension::new(q, 1)?;
    let field = ext.base().clone();
    let (qn, tt) = (field.order(), t as usize);
    let n1 = qn.pow(t);
    let table = tabulate(n1, qn, |v| {
        let d = digits(v, qn, tt + 1);
        let x = d[tt];
        let mut acc = field.pow(x, t as u64 + 2);
        let mut xp = x;
        for &s in &d[..tt] {
            acc = field.add(acc, field.mul(s, xp));
            xp = field.mul(xp, x);
        }
        acc
    });
    Ok(Func {
        a1: ext.coord_group(tt),
        a2: ext.base_group(),
        b: ext.base_group(),
        table,
        origin: Origin::Cdfpw,
        label: format!("cdfpw(q={q},t={t})"),
    })
}

/// Table-backed function; `table` is row-major, `a1 * |A2| + a2`.
pub fn func_from_table(a1: GroupSpec, a2: GroupSpec, b: GroupSpec, table: Vec<u32>) -> Result<Func> {
    let expected = a1.order() * a2.order();
    limits::check_cells(expected as u128)?;
    if table.len() != expected {
        return Err(Error::BadTableLength { expected, got: table.len() });
    }
    if let Some(&v) = table.iter().find(|&&v| v as usize >= b.order()) {
        return Err(Error::IndexOutOfRange { index: v as usize, order: b.order() });
    }
    Ok(Func {
        a1,
        a2,
        b,
        table: table.into(),
        origin: Origin::Table,
        label: "table".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mm_small() {
        let f = mm_func(2, 1, Split::Weak).unwrap();
        assert_eq!(f.eval(1, 1), 1);
        assert_eq!(f.eval(1, 0), 0);

        let f = mm_func(3, 1, Split::Weak).unwrap();
        assert_eq!((f.a1().order(), f.a2().order(), f.codomain().order()), (3, 3, 3));
        for s in 0..3 {
            for x in 0..3 {
                assert_eq!(f.eval(s, x), s * x % 3);
            }
        }

        // x1 x3 + x2 x4 at (1,1,1,1)
        let f = mm_func(2, 2, Split::Strong).unwrap();
        assert_eq!(f.eval(0b11, 0b11), 0);
        assert_eq!(f.eval(0b01, 0b01), 1);
        let w = mm_func(2, 2, Split::Weak).unwrap();
        assert_eq!((w.a1().order(), w.a2().order()), (8, 2));
        // same vector (x1..x4) = (1,0,1,0) under both splits
        assert_eq!(w.eval(0b101, 0), f.eval(0b01, 0b01));
    }

    #[test]
    fn dillon_examples() {
        let f = dillon_func(2, 2, None, Split::Strong).unwrap();
        let ext = Extension::new(2, 2).unwrap();
        let w = ext.field().generator();
        let wi = ext.coord_index(w);
        // tr(w * w^2) = tr(1) = 0
        assert_eq!(f.eval(wi, wi), 0);
        for y in 0..4 {
            assert_eq!(f.eval(0, y), 0);
        }

        let f = dillon_func(3, 1, Some(vec![0, 1, 2]), Split::Strong).unwrap();
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(f.eval(x, y), x * y % 3);
            }
        }
    }

    #[test]
    fn dillon_errors() {
        assert_eq!(dillon_func(2, 1, None, Split::Strong).unwrap_err(), Error::DegenerateField(2));
        assert_eq!(
            dillon_func(2, 2, Some(vec![0, 0, 0, 1]), Split::Strong).unwrap_err(),
            Error::NotBalanced
        );
        assert!(matches!(
            dillon_func(2, 2, Some(vec![0, 1]), Split::Strong),
            Err(Error::BadTableLength { .. })
        ));
    }

    #[test]
    fn dillon_dual_examples() {
        let f = dillon_dual_func(3, 1, Some(vec![1])).unwrap();
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(f.eval(x, y), x * y % 3);
            }
        }
        let f = dillon_dual_func(2, 2, None).unwrap();
        for x in 0..4 {
            assert_eq!(f.eval(x, 0), 0);
        }
        assert_eq!(dillon_dual_func(3, 2, Some(vec![1, 2])).unwrap_err(), Error::NotABasis);
    }

    #[test]
    fn trace_mult_gf4() {
        let f = trace_mult_func(2, 2, None, 3, 1).unwrap();
        let got: Vec<usize> = (0..3).map(|s| f.eval(s, 0)).collect();
        assert_eq!(got, vec![0, 1, 1]);
        assert!(matches!(
            trace_mult_func(2, 2, None, 2, 1),
            Err(Error::BadFactorization { .. })
        ));
        assert_eq!(trace_mult_func(2, 4, None, 3, 5).unwrap().a1().order(), 3);
        assert_eq!(trace_mult_func(2, 4, None, 15, 1).unwrap().a1().order(), 15);
        assert_eq!(trace_mult_func(3, 2, None, 2, 4).unwrap_err(), Error::NotCoprime(2, 4));
    }

    #[test]
    fn trace_mult_map_checks() {
        assert_eq!(trace_mult_func(2, 2, Some(vec![0; 4]), 3, 1).unwrap_err(), Error::ZeroMap);
        assert_eq!(
            trace_mult_func(2, 2, Some(vec![0, 1, 1, 1]), 3, 1).unwrap_err(),
            Error::NotAdditive
        );
        // the coordinate projection x -> c0 is additive
        let f = trace_mult_func(2, 2, Some(vec![0, 1, 0, 1]), 3, 1).unwrap();
        assert_eq!(f.codomain().order(), 2);
    }

    #[test]
    fn cdfpw_examples() {
        let h = cdfpw_func(5, 1).unwrap();
        assert_eq!(h.eval(2, 1), 3);
        for s in 0..5 {
            assert_eq!(h.eval(s, 0), 0);
        }
        assert!(cdfpw_func(2, 1).is_ok());
        assert_eq!(
            cdfpw_func(2, 2).unwrap_err(),
            Error::CharacteristicDividesDegree { p: 2, degree: 4 }
        );
        assert!(cdfpw_func(3, 1).is_err());
        assert!(cdfpw_func(4, 2).is_err());
    }

    #[test]
    fn table_functions() {
        let z2 = GroupSpec::cyclic(2);
        let and = func_from_table(z2.clone(), z2.clone(), z2.clone(), vec![0, 0, 0, 1]).unwrap();
        assert_eq!(and.eval(1, 1), 1);
        assert_eq!(and.eval(1, 0), 0);
        assert!(matches!(
            func_from_table(z2.clone(), z2.clone(), z2.clone(), vec![0, 0, 0]),
            Err(Error::BadTableLength { expected: 4, got: 3 })
        ));
        assert!(matches!(
            func_from_table(z2.clone(), z2.clone(), z2, vec![0, 0, 0, 2]),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn fix_source_and_unsplit() {
        let f = cdfpw_func(5, 1).unwrap();
        let g = f.fix_source(2).unwrap();
        for x in 0..5 {
            assert_eq!(g.eval(x, 0), f.eval(2, x));
        }
        assert_eq!(f.fix_source(5).unwrap_err(), Error::BadSource(5));
        let u = f.unsplit();
        assert_eq!(u.eval(2 + 5 * 1, 0), 3);
    }
}
