use std::sync::Arc;

use crate::error::{Error, Result};
use crate::limits;

use super::arith::{gcd, mod_inverse};
use super::field::Field;
use super::group::GroupSpec;

/// A group isomorphism stored as a pair of total index maps.
#[derive(Clone, Debug)]
pub struct Iso {
    from: GroupSpec,
    to: GroupSpec,
    forward: Vec<u32>,
    backward: Vec<u32>,
}

impl Iso {
    pub fn from_spec(&self) -> &GroupSpec {
        &self.from
    }

    pub fn to_spec(&self) -> &GroupSpec {
        &self.to
    }

    pub fn forward(&self, i: usize) -> usize {
        self.forward[i] as usize
    }

    pub fn backward(&self, j: usize) -> usize {
        self.backward[j] as usize
    }

    /// Exhaustively checks that both maps are mutually inverse and that
    /// `forward` is additive. Cost is quadratic in the order.
    pub fn verify(&self) -> std::result::Result<(), String> {
        let n = self.from.order();
        if self.to.order() != n || self.forward.len() != n || self.backward.len() != n {
            return Err("order mismatch".into());
        }
        for i in 0..n {
            if self.backward(self.forward(i)) != i {
                return Err(format!("backward(forward({i})) != {i}"));
            }
            if self.forward(self.backward(i)) != i {
                return Err(format!("forward(backward({i})) != {i}"));
            }
        }
        for u in 0..n {
            for v in 0..n {
                let lhs = self.forward(self.from.add(u, v));
                let rhs = self.to.add(self.forward(u), self.forward(v));
                if lhs != rhs {
                    return Err(format!("forward({u} + {v}) != forward({u}) + forward({v})"));
                }
            }
        }
        Ok(())
    }
}

/// `Z_{p^r - 1} -> (GF(p^r)^*, x)`, `i -> g^i`, inverted by the log table.
pub fn cyclic_iso(field: Arc<Field>) -> Result<Iso> {
    let to = GroupSpec::field_mult(field.clone())?;
    let n = to.order();
    limits::check_cells(n as u128)?;
    let forward: Vec<u32> = (0..n).map(|i| (field.exp(i as u64) - 1) as u32).collect();
    let backward: Vec<u32> = (0..n)
        .map(|j| field.log(j + 1).expect("nonzero element has a log") as u32)
        .collect();
    Ok(Iso { from: GroupSpec::cyclic(n), to, forward, backward })
}

/// `Z_n -> Z_{m1} x Z_{m2}`, `x -> (x mod m1, x mod m2)`, inverted by CRT.
pub fn crt_split(n: usize, m1: usize, m2: usize) -> Result<Iso> {
    if m1 == 0 || m2 == 0 || m1.checked_mul(m2) != Some(n) {
        return Err(Error::BadFactorization { n: n as u64, m1: m1 as u64, m2: m2 as u64 });
    }
    if gcd(m1 as u64, m2 as u64) != 1 {
        return Err(Error::NotCoprime(m1 as u64, m2 as u64));
    }
    limits::check_cells(n as u128)?;
    let to = GroupSpec::product(vec![GroupSpec::cyclic(m1), GroupSpec::cyclic(m2)]);
    let forward: Vec<u32> = (0..n).map(|x| (x % m1 + m1 * (x % m2)) as u32).collect();
    let e1 = (m2 as u128 * mod_inverse(m2 as u64 % m1 as u64, m1 as u64).unwrap() as u128) % n as u128;
    let e2 = (m1 as u128 * mod_inverse(m1 as u64 % m2 as u64, m2 as u64).unwrap() as u128) % n as u128;
    let backward: Vec<u32> = (0..n)
        .map(|j| {
            let (a, b) = ((j % m1) as u128, (j / m1) as u128);
            ((a * e1 + b * e2) % n as u128) as u32
        })
        .collect();
    Ok(Iso { from: GroupSpec::cyclic(n), to, forward, backward })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf4_cyclic_iso() {
        let f = Arc::new(Field::new(2, 2, None).unwrap());
        let iso = cyclic_iso(f.clone()).unwrap();
        let w = f.generator();
        let w2 = f.mul(w, w);
        // element indices are group index + 1
        assert_eq!(iso.forward(0) + 1, 1);
        assert_eq!(iso.forward(1) + 1, w);
        assert_eq!(iso.forward(2) + 1, w2);
        assert_eq!(iso.forward((1 + 2) % 3) + 1, f.mul(w, w2));
        iso.verify().unwrap();
    }

    #[test]
    fn gf2_has_no_cyclic_iso() {
        let f = Arc::new(Field::new(2, 1, None).unwrap());
        assert_eq!(cyclic_iso(f).unwrap_err(), Error::TrivialGroup(2));
    }

    #[test]
    fn crt_examples() {
        let iso = crt_split(15, 3, 5).unwrap();
        let to = iso.to_spec();
        assert_eq!(to.decompose(iso.forward(7)), vec![1, 2]);
        assert_eq!(iso.backward(to.compose(&[1, 2])), 7);
        assert_eq!(iso.forward(0), 0);
        iso.verify().unwrap();

        let iso = crt_split(12, 4, 3).unwrap();
        assert_eq!(iso.to_spec().decompose(iso.forward(11)), vec![3, 2]);
        iso.verify().unwrap();
    }

    #[test]
    fn crt_errors() {
        assert_eq!(crt_split(12, 2, 6).unwrap_err(), Error::NotCoprime(2, 6));
        assert!(matches!(crt_split(12, 5, 3), Err(Error::BadFactorization { .. })));
        crt_split(7, 7, 1).unwrap().verify().unwrap();
    }
}
