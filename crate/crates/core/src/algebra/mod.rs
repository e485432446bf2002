//! Finite fields, finite abelian groups and the isomorphisms between them.

mod arith;
mod extension;
mod field;
mod group;
mod iso;
mod parse;

pub use arith::{gcd, is_prime, prime_factors, prime_power};
pub use extension::Extension;
pub use field::{field_arith, is_irreducible, ArithOp, Field, FieldElem};
pub use group::{GroupElem, GroupKind, GroupSpec};
pub use iso::{crt_split, cyclic_iso, Iso};
pub use parse::parse_group;
