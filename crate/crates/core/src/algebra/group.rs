//! Finite abelian groups addressed by canonical integer indices.
//!
//! * `Cyclic(n)`: index `i` is the residue `i mod n`.
//! * `Product(G1; ...; Gk)`: little-endian mixed radix, component 1 fastest,
//!   so `index = i1 + |G1| * (i2 + |G2| * (...))`.
//! * `FieldAdditive(F)`: the field element index; the law is field addition.
//! * `FieldMultAsCyclic(F)`: nonzero element `e` has index `e - 1`, so the
//!   identity `1` is index 0; the law is field multiplication.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};

use super::field::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupKind {
    Cyclic(usize),
    Product(Vec<GroupSpec>),
    FieldAdditive(Arc<Field>),
    FieldMultAsCyclic(Arc<Field>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    kind: GroupKind,
    order: usize,
}

impl GroupSpec {
    /// Panics on `n == 0`.
    pub fn cyclic(n: usize) -> GroupSpec {
        assert!(n >= 1, "cyclic group order must be positive");
        GroupSpec { kind: GroupKind::Cyclic(n), order: n }
    }

    pub fn trivial() -> GroupSpec {
        GroupSpec::cyclic(1)
    }

    pub fn product(parts: Vec<GroupSpec>) -> GroupSpec {
        let order = parts.iter().map(|g| g.order).product();
        GroupSpec { kind: GroupKind::Product(parts), order }
    }

    /// `base^k`; for `k == 1` the base itself rather than a one-factor product.
    pub fn power(base: &GroupSpec, k: usize) -> GroupSpec {
        if k == 1 {
            base.clone()
        } else {
            GroupSpec::product(vec![base.clone(); k])
        }
    }

    pub fn field_additive(field: Arc<Field>) -> GroupSpec {
        let order = field.order();
        GroupSpec { kind: GroupKind::FieldAdditive(field), order }
    }

    /// Requires `p^r >= 3`.
    pub fn field_mult(field: Arc<Field>) -> Result<GroupSpec> {
        let order = field.order();
        if order < 3 {
            return Err(Error::TrivialGroup(order as u64));
        }
        Ok(GroupSpec { kind: GroupKind::FieldMultAsCyclic(field), order: order - 1 })
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn zero(&self) -> usize {
        0
    }

    pub fn contains(&self, idx: usize) -> bool {
        idx < self.order
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        match &self.kind {
            GroupKind::Cyclic(n) => (a + b) % n,
            GroupKind::FieldAdditive(f) => f.add(a, b),
            GroupKind::FieldMultAsCyclic(f) => f.mul(a + 1, b + 1) - 1,
            GroupKind::Product(parts) => {
                let (mut a, mut b) = (a, b);
                let (mut out, mut place) = (0usize, 1usize);
                for g in parts {
                    let o = g.order;
                    out += g.add(a % o, b % o) * place;
                    a /= o;
                    b /= o;
                    place *= o;
                }
                out
            }
        }
    }

    pub fn neg(&self, a: usize) -> usize {
        match &self.kind {
            GroupKind::Cyclic(n) => (n - a % n) % n,
            GroupKind::FieldAdditive(f) => f.neg(a),
            GroupKind::FieldMultAsCyclic(f) => f.inv(a + 1).expect("nonzero element") - 1,
            GroupKind::Product(parts) => {
                let mut a = a;
                let (mut out, mut place) = (0usize, 1usize);
                for g in parts {
                    let o = g.order;
                    out += g.neg(a % o) * place;
                    a /= o;
                    place *= o;
                }
                out
            }
        }
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// Splits a product index into component indices.
    pub fn decompose(&self, idx: usize) -> Vec<usize> {
        match &self.kind {
            GroupKind::Product(parts) => {
                let mut v = idx;
                parts
                    .iter()
                    .map(|g| {
                        let d = v % g.order;
                        v /= g.order;
                        d
                    })
                    .collect()
            }
            _ => vec![idx],
        }
    }

    pub fn compose(&self, components: &[usize]) -> usize {
        match &self.kind {
            GroupKind::Product(parts) => parts
                .iter()
                .zip(components)
                .rev()
                .fold(0usize, |acc, (g, &c)| acc * g.order + c),
            _ => components[0],
        }
    }

    /// The translation `x -> x + d` as a lookup table over all `x`.
    pub fn translation(&self, d: usize) -> Vec<u32> {
        (0..self.order).map(|x| self.add(x, d) as u32).collect()
    }

    /// Full subtraction table `t[a * order + b] = a - b`.
    pub fn sub_table(&self) -> Vec<u32> {
        let n = self.order;
        let negs: Vec<usize> = (0..n).map(|b| self.neg(b)).collect();
        let mut t = Vec::with_capacity(n * n);
        for a in 0..n {
            for &nb in &negs {
                t.push(self.add(a, nb) as u32);
            }
        }
        t
    }

    pub fn elem(&self, index: usize) -> Result<GroupElem<'_>> {
        if index >= self.order {
            return Err(Error::IndexOutOfRange { index, order: self.order });
        }
        Ok(GroupElem { spec: self, index })
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElem<'_>> {
        (0..self.order).map(move |index| GroupElem { spec: self, index })
    }
}

/// Canonical text form: `Z(n)`, `Prod(a;b;...)`, `GF(p^r|modulus=...)`,
/// `GFmul(p^r|modulus=...)`.
impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            GroupKind::Cyclic(n) => write!(f, "Z({n})"),
            GroupKind::FieldAdditive(field) => write!(f, "{field}"),
            GroupKind::FieldMultAsCyclic(field) => {
                write!(f, "GFmul({}^{}|modulus=", field.characteristic(), field.degree())?;
                super::field::write_coeffs(f, field.modulus())?;
                write!(f, ")")
            }
            GroupKind::Product(parts) => {
                write!(f, "Prod(")?;
                for (i, g) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{g}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// An element bound to its group.
#[derive(Clone, Copy, Debug)]
pub struct GroupElem<'a> {
    spec: &'a GroupSpec,
    index: usize,
}

impl PartialEq for GroupElem<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.index == other.index && self.spec == other.spec
    }
}

impl<'a> GroupElem<'a> {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn spec(&self) -> &'a GroupSpec {
        self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.index == 0
    }
}

impl<'a> Add for GroupElem<'a> {
    type Output = GroupElem<'a>;
    fn add(self, rhs: Self) -> Self {
        debug_assert!(self.spec == rhs.spec);
        GroupElem { spec: self.spec, index: self.spec.add(self.index, rhs.index) }
    }
}

impl<'a> Sub for GroupElem<'a> {
    type Output = GroupElem<'a>;
    fn sub(self, rhs: Self) -> Self {
        debug_assert!(self.spec == rhs.spec);
        GroupElem { spec: self.spec, index: self.spec.sub(self.index, rhs.index) }
    }
}

impl<'a> Neg for GroupElem<'a> {
    type Output = GroupElem<'a>;
    fn neg(self) -> Self {
        GroupElem { spec: self.spec, index: self.spec.neg(self.index) }
    }
}
