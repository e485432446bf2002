use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul};

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// Exact non-negative rational, always kept in lowest terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Rational(Ratio<BigUint>);

impl Rational {
    /// Panics if `den == 0`.
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(Ratio::new(BigUint::from(num), BigUint::from(den)))
    }

    pub fn from_big(num: BigUint, den: BigUint) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Rational(Ratio::new(num, den))
    }

    pub fn zero() -> Self {
        Rational(Ratio::zero())
    }

    pub fn one() -> Self {
        Rational(Ratio::one())
    }

    pub fn integer(n: u64) -> Self {
        Rational::new(n, 1)
    }

    pub fn numer(&self) -> &BigUint {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigUint {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    /// Approximation for display only; never used in comparisons.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn checked_sub(&self, rhs: &Rational) -> Option<Rational> {
        match self.cmp(rhs) {
            Ordering::Less => None,
            _ => Some(Rational(&self.0 - &rhs.0)),
        }
    }

    pub fn into_inner(self) -> Ratio<BigUint> {
        self.0
    }
}

impl From<Ratio<BigUint>> for Rational {
    fn from(r: Ratio<BigUint>) -> Self {
        Rational(r)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

fn big_to_json(v: &BigUint) -> serde_json::Value {
    match v.to_u64() {
        Some(x) => serde_json::Value::from(x),
        None => serde_json::Value::from(v.to_string()),
    }
}

/// Serialized as `{"num": .., "den": ..}`; values beyond u64 become
/// decimal strings.
impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Rational", 2)?;
        st.serialize_field("num", &big_to_json(self.0.numer()))?;
        st.serialize_field("den", &big_to_json(self.0.denom()))?;
        st.end()
    }
}
