//! GF(q^r) viewed as an r-dimensional space over GF(q), where q may itself
//! be a prime power.
//!
//! GF(q) is built as its own field and embedded into GF(q^r) by sending its
//! defining indeterminate to a root of its modulus. Elements of GF(q^r) get
//! GF(q)-coordinates in the relative polynomial basis `1, x, ..., x^{r-1}`
//! where `x` is the indeterminate class of GF(q^r)'s modulus.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::limits;

use super::arith::prime_power;
use super::field::Field;
use super::group::GroupSpec;

const NOT_IN_SUBFIELD: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub struct Extension {
    base: Arc<Field>,
    field: Arc<Field>,
    degree: usize,
    embed: Vec<u32>,
    unembed: Vec<u32>,
    basis: Vec<usize>,
    coord_to_elem: Vec<u32>,
    elem_to_coord: Vec<u32>,
}

impl Extension {
    pub fn new(q: u64, r: u32) -> Result<Extension> {
        let (p, d) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if r == 0 {
            return Err(Error::ZeroDegree);
        }
        limits::check_cells((q as u128).saturating_pow(r))?;
        let base = Arc::new(Field::new(p, d, None)?);
        let field = if r == 1 { base.clone() } else { Arc::new(Field::new(p, d * r, None)?) };
        let qn = base.order();
        let big = field.order();

        let embed: Vec<u32> = if r == 1 {
            (0..qn as u32).collect()
        } else {
            let m = base.modulus();
            let root = (0..big)
                .find(|&z| {
                    let mut acc = 0;
                    for &c in m.iter().rev() {
                        acc = field.add(field.mul(acc, z), field.constant(c as u64));
                    }
                    acc == 0
                })
                .expect("GF(q) embeds into GF(q^r)");
            (0..qn)
                .map(|c| {
                    let mut acc = 0;
                    for &k in base.coeffs(c).iter().rev() {
                        acc = field.add(field.mul(acc, root), field.constant(k as u64));
                    }
                    acc as u32
                })
                .collect()
        };
        let mut unembed = vec![NOT_IN_SUBFIELD; big];
        for (c, &e) in embed.iter().enumerate() {
            unembed[e as usize] = c as u32;
        }

        let rr = r as usize;
        let theta = if rr == 1 { 1 } else { p as usize };
        let basis: Vec<usize> = (0..rr).map(|i| field.pow(theta, i as u64)).collect();

        let mut ext = Extension {
            base,
            field,
            degree: rr,
            embed,
            unembed,
            basis,
            coord_to_elem: Vec::new(),
            elem_to_coord: vec![NOT_IN_SUBFIELD; big],
        };
        let coord_to_elem: Vec<u32> = (0..big)
            .map(|v| {
                let coords = ext.split_coords(v);
                ext.combine(&ext.basis, &coords) as u32
            })
            .collect();
        for (v, &e) in coord_to_elem.iter().enumerate() {
            ext.elem_to_coord[e as usize] = v as u32;
        }
        debug_assert!(ext.elem_to_coord.iter().all(|&v| v != NOT_IN_SUBFIELD));
        ext.coord_to_elem = coord_to_elem;
        Ok(ext)
    }

    /// GF(q).
    pub fn base(&self) -> &Arc<Field> {
        &self.base
    }

    /// GF(q^r).
    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn q(&self) -> usize {
        self.base.order()
    }

    /// Additive group of GF(q).
    pub fn base_group(&self) -> GroupSpec {
        GroupSpec::field_additive(self.base.clone())
    }

    /// GF(q)^k with coordinate 1 fastest.
    pub fn coord_group(&self, k: usize) -> GroupSpec {
        GroupSpec::power(&self.base_group(), k)
    }

    pub fn embed(&self, c: usize) -> usize {
        self.embed[c] as usize
    }

    /// Preimage in GF(q) of a subfield element.
    pub fn restrict(&self, x: usize) -> Option<usize> {
        match self.unembed[x] {
            NOT_IN_SUBFIELD => None,
            c => Some(c as usize),
        }
    }

    /// The relative polynomial basis `1, x, ..., x^{r-1}`.
    pub fn polynomial_basis(&self) -> &[usize] {
        &self.basis
    }

    fn split_coords(&self, mut v: usize) -> Vec<usize> {
        let q = self.q();
        (0..self.degree)
            .map(|_| {
                let c = v % q;
                v /= q;
                c
            })
            .collect()
    }

    /// `sum_i c_i * basis_i` with `c_i` in GF(q).
    pub fn combine(&self, basis: &[usize], coords: &[usize]) -> usize {
        basis.iter().zip(coords).fold(0, |acc, (&b, &c)| {
            self.field.add(acc, self.field.mul(self.embed(c), b))
        })
    }

    /// Element with polynomial-basis coordinate vector index `v`.
    pub fn from_coord_index(&self, v: usize) -> usize {
        self.coord_to_elem[v] as usize
    }

    pub fn coord_index(&self, x: usize) -> usize {
        self.elem_to_coord[x] as usize
    }

    pub fn coords(&self, x: usize) -> Vec<usize> {
        self.split_coords(self.coord_index(x))
    }

    /// `x^q`.
    pub fn frobenius(&self, x: usize) -> usize {
        self.field.pow(x, self.q() as u64)
    }

    /// Relative trace `sum_{i<r} x^{q^i}`, returned as an element of GF(q).
    pub fn trace(&self, x: usize) -> usize {
        let mut acc = 0;
        let mut y = x;
        for _ in 0..self.degree {
            acc = self.field.add(acc, y);
            y = self.frobenius(y);
        }
        self.restrict(acc).expect("trace lands in the base field")
    }

    pub fn trace_table(&self) -> Vec<u32> {
        (0..self.field.order()).map(|x| self.trace(x) as u32).collect()
    }

    /// The basis `{b_j}` with `tr(a_i b_j) = [i == j]`, obtained by inverting
    /// the trace Gram matrix over GF(q).
    pub fn dual_basis(&self, basis: &[usize]) -> Result<Vec<usize>> {
        let r = self.degree;
        if basis.len() != r || basis.iter().any(|&b| b >= self.field.order()) {
            return Err(Error::NotABasis);
        }
        let gram: Vec<Vec<usize>> = (0..r)
            .map(|i| (0..r).map(|j| self.trace(self.field.mul(basis[i], basis[j]))).collect())
            .collect();
        let inv = invert_matrix(&self.base, gram).ok_or(Error::NotABasis)?;
        Ok((0..r).map(|j| self.combine(basis, &inv[j])).collect())
    }
}

/// Gauss-Jordan inversion over a field; `None` when singular.
fn invert_matrix(f: &Field, mut m: Vec<Vec<usize>>) -> Option<Vec<Vec<usize>>> {
    let n = m.len();
    let mut inv: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).map(|j| usize::from(i == j)).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&row| m[row][col] != 0)?;
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let scale = f.inv(m[col][col]).ok()?;
        for j in 0..n {
            m[col][j] = f.mul(m[col][j], scale);
            inv[col][j] = f.mul(inv[col][j], scale);
        }
        for row in 0..n {
            if row == col || m[row][col] == 0 {
                continue;
            }
            let factor = m[row][col];
            for j in 0..n {
                m[row][j] = f.sub(m[row][j], f.mul(factor, m[col][j]));
                inv[row][j] = f.sub(inv[row][j], f.mul(factor, inv[col][j]));
            }
        }
    }
    Some(inv)
}
