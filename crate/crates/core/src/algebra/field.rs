//! GF(p^r) in polynomial basis.
//!
//! An element is addressed by its index `c0 + c1*p + ... + c_{r-1}*p^{r-1}`
//! where `c_i` is the coefficient of `x^i`. Multiplication goes through
//! exp/log tables over a fixed generator, built once at construction.

use std::fmt;

use crate::error::{Error, Result};
use crate::limits;

use super::arith::{is_prime, pow_u128, prime_factors};

#[derive(Clone)]
pub struct Field {
    p: u32,
    degree: u32,
    order: usize,
    modulus: Vec<u32>,
    generator: usize,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Canonical text form `GF(p^r|modulus=c0,c1,...,cr)`.
impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}|modulus=", self.p, self.degree)?;
        write_coeffs(f, &self.modulus)?;
        write!(f, ")")
    }
}

pub(crate) fn write_coeffs(f: &mut fmt::Formatter<'_>, c: &[u32]) -> fmt::Result {
    for (i, v) in c.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

// Polynomials over GF(p) as little-endian coefficient vectors.

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let dm = m.len() - 1;
    let lead_inv = inv_mod_p(m[dm], p);
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let p64 = p as u64;
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top] % p64 * lead_inv as u64 % p64;
        if c != 0 {
            for (i, &mc) in m.iter().enumerate() {
                let idx = top - dm + i;
                r[idx] = (r[idx] + p64 - c * mc as u64 % p64) % p64;
            }
        }
        r.pop();
    }
    r.into_iter().map(|c| (c % p64) as u32).collect()
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
    let mut r = poly_rem(&prod, m, p);
    r.resize(m.len() - 1, 0);
    r
}

fn poly_powmod(a: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
    let r = m.len() - 1;
    let mut result = vec![0u32; r];
    result[0] = 1;
    let mut base = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mulmod(&result, &base, m, p);
        }
        base = poly_mulmod(&base, &base, m, p);
        e >>= 1;
    }
    result
}

/// Coefficient vector whose lexicographic rank (c0 most significant) is `k`.
fn lex_coeffs(k: u64, p: u32, r: usize) -> Vec<u32> {
    let mut c = vec![0u32; r];
    let mut k = k;
    for j in 0..r {
        c[r - 1 - j] = (k % p as u64) as u32;
        k /= p as u64;
    }
    c
}

/// Exhaustive trial division by every monic polynomial of degree 1..=deg/2.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let r = poly.len() - 1;
    if r == 1 {
        return true;
    }
    for d in 1..=r / 2 {
        let count = (p as u64).pow(d as u32);
        for k in 0..count {
            let mut g = lex_coeffs(k, p, d);
            g.push(1);
            if poly_rem(poly, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// Builds GF(p^r). Without an explicit modulus, picks the lexicographically
    /// smallest monic irreducible (coefficients compared from degree 0 up).
    /// The generator is the lexicographically smallest element of full order.
    pub fn new(p: u64, r: u32, modulus: Option<Vec<u32>>) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if r == 0 {
            return Err(Error::ZeroDegree);
        }
        let order = pow_u128(p, r);
        limits::check_cells(order)?;
        let order = order as usize;
        let p = p as u32;
        let rr = r as usize;

        let modulus = match modulus {
            Some(m) => {
                if m.len() != rr + 1 || m[rr] != 1 || m.iter().any(|&c| c >= p) {
                    return Err(Error::BadModulus(m));
                }
                if !is_irreducible(&m, p) {
                    return Err(Error::Reducible(m));
                }
                m
            }
            None => (0..order as u64)
                .map(|k| {
                    let mut m = lex_coeffs(k, p, rr);
                    m.push(1);
                    m
                })
                .find(|m| is_irreducible(m, p))
                .expect("an irreducible polynomial of every degree exists"),
        };

        let n = (order - 1) as u64;
        let factors = prime_factors(n);
        let one = {
            let mut v = vec![0u32; rr];
            v[0] = 1;
            v
        };
        let gen_coeffs = (0..order as u64)
            .map(|k| lex_coeffs(k, p, rr))
            .filter(|c| c.iter().any(|&x| x != 0))
            .find(|c| factors.iter().all(|&l| poly_powmod(c, n / l, &modulus, p) != one))
            .expect("the multiplicative group is cyclic");

        let mut field = Field {
            p,
            degree: r,
            order,
            modulus,
            generator: 0,
            exp: Vec::with_capacity(n as usize),
            log: vec![u32::MAX; order],
        };
        field.generator = field.from_coeffs(&gen_coeffs);
        let mut e = one;
        for i in 0..n as usize {
            let idx = field.from_coeffs(&e);
            field.exp.push(idx as u32);
            field.log[idx] = i as u32;
            e = poly_mulmod(&e, &gen_coeffs, &field.modulus, p);
        }
        Ok(field)
    }

    pub fn characteristic(&self) -> u64 {
        self.p as u64
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Number of elements, p^r.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> usize {
        self.generator
    }

    pub fn one(&self) -> usize {
        1
    }

    pub fn coeffs(&self, idx: usize) -> Vec<u32> {
        let mut c = Vec::with_capacity(self.degree as usize);
        let mut v = idx;
        for _ in 0..self.degree {
            c.push((v % self.p as usize) as u32);
            v /= self.p as usize;
        }
        c
    }

    pub fn from_coeffs(&self, c: &[u32]) -> usize {
        c.iter()
            .rev()
            .fold(0usize, |acc, &d| acc * self.p as usize + d as usize)
    }

    /// Prime-field constant `c mod p` as an element index.
    pub fn constant(&self, c: u64) -> usize {
        (c % self.p as u64) as usize
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        if self.p == 2 {
            return a ^ b;
        }
        let p = self.p as usize;
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0usize, 1usize);
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    pub fn neg(&self, a: usize) -> usize {
        if self.p == 2 {
            return a;
        }
        let p = self.p as usize;
        let (mut a, mut out, mut place) = (a, 0usize, 1usize);
        while a > 0 {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// `c * a` for an integer scalar `c`, i.e. `a` added to itself `c` times.
    pub fn scale(&self, c: u64, a: usize) -> usize {
        self.mul(self.constant(c), a)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.order - 1;
        let s = self.log[a] as usize + self.log[b] as usize;
        self.exp[s % n] as usize
    }

    pub fn inv(&self, a: usize) -> Result<usize> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = self.order - 1;
        Ok(self.exp[(n - self.log[a] as usize) % n] as usize)
    }

    /// Square-and-multiply; `0^0 = 1` and `0^e = 0` for `e >= 1`.
    pub fn pow(&self, a: usize, mut e: u64) -> usize {
        let mut result = 1usize;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    /// Generator power `g^i`.
    pub fn exp(&self, i: u64) -> usize {
        self.exp[(i % (self.order as u64 - 1)) as usize] as usize
    }

    /// Discrete logarithm base the generator; `None` for zero.
    pub fn log(&self, a: usize) -> Option<usize> {
        match self.log.get(a) {
            Some(&l) if l != u32::MAX => Some(l as usize),
            _ => None,
        }
    }

    /// Trace down to the prime field, `sum_{i<r} a^(p^i)`. The result is a
    /// constant, so its index is below `p`.
    pub fn absolute_trace(&self, a: usize) -> usize {
        let mut acc = 0;
        let mut x = a;
        for _ in 0..self.degree {
            acc = self.add(acc, x);
            x = self.pow(x, self.p as u64);
        }
        acc
    }

    pub fn elem(&self, idx: usize) -> Result<FieldElem<'_>> {
        if idx >= self.order {
            return Err(Error::IndexOutOfRange { index: idx, order: self.order });
        }
        Ok(FieldElem { field: self, index: idx })
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem<'_>> {
        (0..self.order).map(move |index| FieldElem { field: self, index })
    }
}

/// An element bound to its field; arithmetic checks field identity.
#[derive(Clone, Copy, Debug)]
pub struct FieldElem<'a> {
    field: &'a Field,
    index: usize,
}

impl PartialEq for FieldElem<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.index == other.index && self.field == other.field
    }
}

impl<'a> FieldElem<'a> {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn field(&self) -> &'a Field {
        self.field
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs(self.index)
    }

    pub fn is_zero(&self) -> bool {
        self.index == 0
    }

    fn same_field(&self, other: &FieldElem<'_>) -> Result<()> {
        if std::ptr::eq(self.field, other.field) || self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn wrap(&self, index: usize) -> FieldElem<'a> {
        FieldElem { field: self.field, index }
    }

    pub fn add(&self, other: &FieldElem<'_>) -> Result<FieldElem<'a>> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.add(self.index, other.index)))
    }

    pub fn sub(&self, other: &FieldElem<'_>) -> Result<FieldElem<'a>> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.sub(self.index, other.index)))
    }

    pub fn mul(&self, other: &FieldElem<'_>) -> Result<FieldElem<'a>> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.mul(self.index, other.index)))
    }

    pub fn inv(&self) -> Result<FieldElem<'a>> {
        Ok(self.wrap(self.field.inv(self.index)?))
    }

    pub fn pow(&self, e: u64) -> FieldElem<'a> {
        self.wrap(self.field.pow(self.index, e))
    }
}

/// Operation selector for [`field_arith`].
#[derive(Clone, Copy, Debug)]
pub enum ArithOp<'a> {
    Add(FieldElem<'a>),
    Sub(FieldElem<'a>),
    Mul(FieldElem<'a>),
    Inv,
    Pow(u64),
}

pub fn field_arith<'a>(a: FieldElem<'a>, op: ArithOp<'_>) -> Result<FieldElem<'a>> {
    match op {
        ArithOp::Add(b) => a.add(&b),
        ArithOp::Sub(b) => a.sub(&b),
        ArithOp::Mul(b) => a.mul(&b),
        ArithOp::Inv => a.inv(),
        ArithOp::Pow(e) => Ok(a.pow(e)),
    }
}
