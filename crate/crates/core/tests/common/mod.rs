//! Brute-force reference computations that share no arithmetic with the
//! library: group laws are re-derived from the group description, field
//! multiplication is schoolbook polynomial reduction.

#![allow(dead_code)]

use std::sync::Arc;

use amdkit::algebra::{cyclic_iso, crt_split, Extension, Field, GroupKind, GroupSpec};
use amdkit::amd::AmdCode;
use amdkit::functions::Func;
use amdkit::Rational;

fn digits(mut v: usize, base: usize, len: usize) -> Vec<usize> {
    (0..len)
        .map(|_| {
            let d = v % base;
            v /= base;
            d
        })
        .collect()
}

fn undigits(d: &[usize], base: usize) -> usize {
    d.iter().rev().fold(0, |acc, &x| acc * base + x)
}

/// Product of two field elements by polynomial multiplication and
/// reduction modulo the field's monic modulus.
pub fn slow_mul(f: &Field, a: usize, b: usize) -> usize {
    let p = f.characteristic() as usize;
    let r = f.degree() as usize;
    let (x, y) = (digits(a, p, r), digits(b, p, r));
    let mut prod = vec![0usize; 2 * r];
    for i in 0..r {
        for j in 0..r {
            prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
        }
    }
    let m: Vec<usize> = f.modulus().iter().map(|&c| c as usize).collect();
    for deg in (r..2 * r).rev() {
        let lead = prod[deg];
        if lead != 0 {
            for (k, &c) in m.iter().enumerate() {
                let idx = deg - r + k;
                prod[idx] = (prod[idx] + p * p - lead * c % p) % p;
            }
        }
    }
    undigits(&prod[..r], p)
}

pub fn slow_add_field(f: &Field, a: usize, b: usize) -> usize {
    let p = f.characteristic() as usize;
    let r = f.degree() as usize;
    let (x, y) = (digits(a, p, r), digits(b, p, r));
    let z: Vec<usize> = x.iter().zip(&y).map(|(u, v)| (u + v) % p).collect();
    undigits(&z, p)
}

pub fn oracle_add(g: &GroupSpec, a: usize, b: usize) -> usize {
    match g.kind() {
        GroupKind::Cyclic(n) => (a + b) % n,
        GroupKind::FieldAdditive(f) => slow_add_field(f, a, b),
        GroupKind::FieldMultAsCyclic(f) => slow_mul(f, a + 1, b + 1) - 1,
        GroupKind::Product(parts) => {
            let mut out = 0;
            let mut stride = 1;
            let (mut a, mut b) = (a, b);
            for part in parts {
                let n = part.order();
                out += stride * oracle_add(part, a % n, b % n);
                a /= n;
                b /= n;
                stride *= n;
            }
            out
        }
    }
}

/// Additive inverse by search; only used on small groups.
pub fn oracle_neg(g: &GroupSpec, a: usize) -> usize {
    let zero = (0..g.order()).find(|&z| oracle_add(g, z, z) == z).expect("identity");
    (0..g.order()).find(|&x| oracle_add(g, a, x) == zero).expect("inverse")
}

pub fn oracle_sub(g: &GroupSpec, a: usize, b: usize) -> usize {
    oracle_add(g, a, oracle_neg(g, b))
}

fn neg_table(g: &GroupSpec) -> Vec<usize> {
    let zero = (0..g.order()).find(|&z| oracle_add(g, z, z) == z).expect("identity");
    let mut t = vec![0; g.order()];
    for a in 0..g.order() {
        t[a] = (0..g.order()).find(|&x| oracle_add(g, a, x) == zero).expect("inverse");
    }
    t
}

fn add_table(g: &GroupSpec) -> Vec<Vec<usize>> {
    (0..g.order()).map(|a| (0..g.order()).map(|b| oracle_add(g, a, b)).collect()).collect()
}

/// `counts[delta][b]` over the full domain `A1 x A2`, with
/// `delta = a1 + |A1| * a2`.
pub fn oracle_spectrum(f: &Func) -> Vec<Vec<u64>> {
    let (g1, g2, gb) = (f.a1(), f.a2(), f.codomain());
    let (n1, n2, nb) = (g1.order(), g2.order(), gb.order());
    let negb = neg_table(gb);
    let (add1, add2, addb) = (add_table(g1), add_table(g2), add_table(gb));
    let mut out = vec![vec![0u64; nb]; n1 * n2];
    for d1 in 0..n1 {
        for d2 in 0..n2 {
            let row = &mut out[d1 + n1 * d2];
            for x1 in 0..n1 {
                for x2 in 0..n2 {
                    let y = f.eval(add1[x1][d1], add2[x2][d2]);
                    row[addb[y][negb[f.eval(x1, x2)]]] += 1;
                }
            }
        }
    }
    out
}

fn peak(spec: &[Vec<u64>], rows: impl Iterator<Item = usize>) -> u64 {
    rows.flat_map(|d| spec[d].iter().copied()).max().unwrap_or(0)
}

pub fn oracle_nonlinearity(f: &Func) -> Rational {
    let s = oracle_spectrum(f);
    let n = f.domain_order() as u64;
    Rational::new(peak(&s, 1..s.len()), n)
}

pub fn oracle_partial_nonlinearity(f: &Func) -> Rational {
    let s = oracle_spectrum(f);
    let n1 = f.a1().order();
    let n = f.domain_order() as u64;
    Rational::new(peak(&s, (0..s.len()).filter(|d| d % n1 != 0)), n)
}

/// `(weak, strong per source, stronger)` by direct decoder simulation over
/// every offset, source and randomness.
pub fn oracle_profile(code: &AmdCode) -> (Rational, Vec<Rational>, Rational) {
    let f = code.func();
    let (g1, g2, gb) = (f.a1(), f.a2(), f.codomain());
    let (m, t, nb) = (g1.order(), g2.order(), gb.order());
    let add1 = add_table(g1);
    let add2 = add_table(g2);
    let addb = add_table(gb);
    let mut weak = 0u64;
    let mut stronger = 0u64;
    let mut per = vec![0u64; m];
    for a1 in 0..m {
        for a2 in 0..t {
            for b in 0..nb {
                if a1 == 0 && a2 == 0 && b == 0 {
                    continue;
                }
                let mut accepted = 0;
                let mut wrong = 0;
                for s in 0..m {
                    let mut wrong_s = 0;
                    for x in 0..t {
                        let s2 = add1[s][a1];
                        let x2 = add2[x][a2];
                        let tag = addb[f.eval(s, x)][b];
                        if f.eval(s2, x2) == tag {
                            accepted += 1;
                            if s2 != s {
                                wrong += 1;
                                wrong_s += 1;
                            }
                        }
                    }
                    per[s] = per[s].max(wrong_s);
                }
                weak = weak.max(wrong);
                stronger = stronger.max(accepted);
            }
        }
    }
    let mt = (m * t) as u64;
    (
        Rational::new(weak, mt),
        per.into_iter().map(|c| Rational::new(c, t as u64)).collect(),
        Rational::new(stronger, mt),
    )
}

pub type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Field axioms, exhaustively, including agreement with schoolbook products.
pub fn check_field_axioms(f: &Field) -> Check {
    let n = f.order();
    for a in 0..n {
        ensure(f.add(a, 0) == a && f.mul(a, 1) == a && f.mul(a, 0) == 0, || format!("{f}: identities at {a}"))?;
        ensure(f.add(a, f.neg(a)) == 0, || format!("{f}: negation at {a}"))?;
        if a != 0 {
            let inv = f.inv(a).map_err(|e| e.to_string())?;
            ensure(f.mul(a, inv) == 1, || format!("{f}: inverse at {a}"))?;
        }
        for b in 0..n {
            ensure(f.add(a, b) == slow_add_field(f, a, b), || format!("{f}: add {a} {b}"))?;
            ensure(f.mul(a, b) == slow_mul(f, a, b), || format!("{f}: mul {a} {b}"))?;
            ensure(f.mul(a, b) == f.mul(b, a), || format!("{f}: commutativity"))?;
            for c in 0..n {
                ensure(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)), || format!("{f}: mul assoc"))?;
                ensure(
                    f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)),
                    || format!("{f}: distributivity"),
                )?;
            }
        }
    }
    Ok(())
}

/// Relative trace: additive, GF(q)-linear, Frobenius-invariant, balanced.
pub fn check_trace(e: &Extension) -> Check {
    let f = e.field();
    let n = f.order();
    let q = e.q();
    let mut hist = vec![0usize; q];
    for x in 0..n {
        let tx = e.trace(x);
        hist[tx] += 1;
        ensure(e.trace(e.frobenius(x)) == tx, || format!("trace not Frobenius-invariant at {x}"))?;
        for y in 0..n {
            ensure(
                e.trace(f.add(x, y)) == e.base().add(tx, e.trace(y)),
                || format!("trace not additive at {x}, {y}"),
            )?;
        }
        for c in 0..q {
            ensure(
                e.trace(f.mul(e.embed(c), x)) == e.base().mul(c, tx),
                || format!("trace not GF(q)-linear at {c}, {x}"),
            )?;
        }
    }
    ensure(hist.iter().all(|&h| h == n / q), || format!("trace not balanced: {hist:?}"))
}

pub fn check_isos(f: &Arc<Field>) -> Check {
    if f.order() >= 3 {
        cyclic_iso(f.clone()).map_err(|e| e.to_string())?.verify()?;
    }
    let n = f.order() - 1;
    for m1 in 1..=n {
        if n % m1 == 0 {
            match crt_split(n, m1, n / m1) {
                Ok(iso) => iso.verify()?,
                Err(amdkit::Error::NotCoprime(..)) => {}
                Err(e) => return Err(e.to_string()),
            }
        }
    }
    Ok(())
}

/// `tr(a_i b_j) = [i == j]` for the dual of every ordered basis; returns the
/// number of bases checked.
pub fn check_dual_bases(e: &Extension) -> Result<usize, String> {
    let f = e.field();
    let r = e.degree();
    let n = f.order();
    let mut checked = 0;
    let mut idx = vec![0usize; r];
    loop {
        if let Ok(dual) = e.dual_basis(&idx) {
            for i in 0..r {
                for j in 0..r {
                    let t = e.trace(f.mul(idx[i], dual[j]));
                    ensure(t == usize::from(i == j), || format!("dual of {idx:?} fails at ({i},{j})"))?;
                }
            }
            ensure(e.dual_basis(&dual).ok().as_deref() == Some(&idx[..]), || format!("dual of dual of {idx:?}"))?;
            checked += 1;
        }
        let mut k = 0;
        loop {
            if k == r {
                return Ok(checked);
            }
            idx[k] += 1;
            if idx[k] < n {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Fields and extensions covered by the exhaustive algebra checks.
pub const FIELDS: &[(u64, u32)] = &[(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 1)];
pub const EXTENSIONS: &[(u64, u32)] = &[(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (4, 2), (5, 2), (9, 2)];
pub const DUAL_EXTENSIONS: &[(u64, u32)] = &[(2, 2), (2, 3), (3, 2), (4, 2), (5, 2)];

pub fn algebra_suite() -> Check {
    for &(p, r) in FIELDS {
        let f = Arc::new(Field::new(p, r, None).map_err(|e| e.to_string())?);
        check_field_axioms(&f)?;
        check_isos(&f)?;
    }
    for &(q, r) in EXTENSIONS {
        check_trace(&Extension::new(q, r).map_err(|e| e.to_string())?)?;
    }
    for &(q, r) in DUAL_EXTENSIONS {
        let e = Extension::new(q, r).map_err(|e| e.to_string())?;
        let checked = check_dual_bases(&e)?;
        // ordered bases of GF(q)^r: prod (q^r - q^i)
        let qr = (q as usize).pow(r);
        let expected: usize = (0..r).map(|i| qr - (q as usize).pow(i)).product();
        ensure(checked == expected, || format!("GF({q}^{r}): {checked} bases, expected {expected}"))?;
    }
    Ok(())
}

/// Catalog instances used across the integration suites.
pub fn catalog() -> Vec<Func> {
    use amdkit::functions::{cdfpw_func, dillon_dual_func, dillon_func, mm_func, trace_mult_func, Split};
    let mut out = Vec::new();
    for &(q, r) in &[(2, 1), (2, 2), (3, 1), (3, 2), (4, 1), (5, 1), (2, 3), (4, 2), (5, 2), (2, 5)] {
        out.push(mm_func(q, r, Split::Weak).unwrap());
        out.push(mm_func(q, r, Split::Strong).unwrap());
    }
    for &(q, r) in &[(2, 2), (3, 1), (3, 2), (4, 1), (5, 1), (2, 3), (4, 2), (5, 2)] {
        out.push(dillon_func(q, r, None, Split::Weak).unwrap());
        out.push(dillon_func(q, r, None, Split::Strong).unwrap());
        out.push(dillon_dual_func(q, r, None).unwrap());
    }
    for &(q, r, m1, m2) in &[(2, 2, 3, 1), (2, 3, 7, 1), (3, 2, 8, 1), (2, 4, 15, 1), (2, 4, 5, 3), (2, 4, 3, 5), (4, 2, 5, 3)] {
        out.push(trace_mult_func(q, r, None, m1, m2).unwrap());
    }
    for &(q, t) in &[(5, 1), (7, 1), (7, 2), (3, 2), (4, 1), (8, 1), (5, 2), (9, 2)] {
        out.push(cdfpw_func(q, t).unwrap());
    }
    out
}
