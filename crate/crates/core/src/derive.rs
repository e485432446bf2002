//! Reverse direction: read a function off a systematic code's valid
//! encodings and bound its nonlinearity by the code's success probabilities.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::GroupSpec;
use crate::amd::{build_code, evaluate, AmdCode, Models};
use crate::error::{Error, Result};
use crate::functions::{func_from_table, Func, TripleTable};
use crate::nonlinearity::nonlinearity_of;
use crate::Rational;

/// `fE(s1, s2)` = the unique tag of the valid encoding `(s1, s2, .)`.
#[derive(Clone, Debug)]
pub struct DerivedFunction {
    fe: Func,
}

impl DerivedFunction {
    pub fn fe(&self) -> &Func {
        &self.fe
    }

    pub fn into_code(self) -> AmdCode {
        build_code(self.fe)
    }
}

/// Tabulates `fE` from the decoder's acceptance set.
pub fn extract_function(code: &AmdCode) -> Result<DerivedFunction> {
    let f = code.func();
    let mut triples = Vec::with_capacity(code.m() * code.t());
    for s in 0..code.m() {
        triples.extend(code.valid_encodings(s)?.into_iter().map(|g| (g.s1, g.s2, g.tag)));
    }
    extract_from_triples(&TripleTable {
        a1: f.a1().clone(),
        a2: f.a2().clone(),
        b: f.codomain().clone(),
        triples,
    })
}

/// Accepts a list of valid encodings in any order; every `(s1, s2)` must
/// carry exactly one tag.
pub fn extract_from_triples(t: &TripleTable) -> Result<DerivedFunction> {
    let (n1, n2) = (t.a1.order(), t.a2.order());
    const EMPTY: u32 = u32::MAX;
    let mut table = vec![EMPTY; n1 * n2];
    for &(s1, s2, tag) in &t.triples {
        for (v, o) in [(s1, n1), (s2, n2), (tag, t.b.order())] {
            if v >= o {
                return Err(Error::IndexOutOfRange { index: v, order: o });
            }
        }
        let cell = &mut table[s1 * n2 + s2];
        if *cell != EMPTY {
            return Err(Error::NotSystematic { s1, s2, tags: 2 });
        }
        *cell = tag as u32;
    }
    if let Some(i) = table.iter().position(|&v| v == EMPTY) {
        return Err(Error::NotSystematic { s1: i / n2, s2: i % n2, tags: 0 });
    }
    let fe = func_from_table(t.a1.clone(), t.a2.clone(), t.b.clone(), table)?;
    Ok(DerivedFunction { fe })
}

/// Nonlinearity of `x -> fE(s, x)` on `A2`.
pub fn restricted_nonlinearity(d: &DerivedFunction, s: usize) -> Result<Rational> {
    nonlinearity_of(&d.fe.fix_source(s)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Theorem3Report {
    /// Nonlinearity of `fE`.
    pub lhs: Rational,
    /// Max of the weak success probability and every restricted nonlinearity.
    pub rhs: Rational,
    pub holds: bool,
    pub weak_rho: Rational,
    pub per_source: Vec<Rational>,
}

/// `P_{fE} <= max({weakRho} U {P_{fE,s'}})`; both sides are always reported.
pub fn theorem3_check(code: &AmdCode) -> Result<Theorem3Report> {
    let d = extract_function(code)?;
    let lhs = nonlinearity_of(d.fe())?;
    let weak_rho = evaluate(code, Models::WEAK)?.weak_rho.expect("weak model requested");
    let per_source = (0..code.m())
        .map(|s| restricted_nonlinearity(&d, s))
        .collect::<Result<Vec<_>>>()?;
    let rhs = per_source.iter().chain([&weak_rho]).max().cloned().expect("non-empty");
    Ok(Theorem3Report { holds: lhs <= rhs, lhs, rhs, weak_rho, per_source })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Theorem4Report {
    pub stronger_rho: Rational,
    #[serde(rename = "fENonlinearity")]
    pub fe_nonlinearity: Rational,
    pub holds: bool,
}

/// `P_{fE} <= strongerRho`.
pub fn theorem4_check(code: &AmdCode) -> Result<Theorem4Report> {
    let d = extract_function(code)?;
    let fe_nonlinearity = nonlinearity_of(d.fe())?;
    let models = Models { weak: false, strong: false, stronger: true };
    let stronger_rho = evaluate(code, models)?.stronger_rho.expect("stronger model requested");
    Ok(Theorem4Report { holds: fe_nonlinearity <= stronger_rho, fe_nonlinearity, stronger_rho })
}

/// Code over cyclic groups of the given orders with uniformly random tags.
pub fn random_systematic_code(seed: u64, a1: usize, a2: usize, b: usize) -> Result<AmdCode> {
    if a1 == 0 || a2 == 0 || b == 0 {
        return Err(Error::BadParameter("group orders must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let table = (0..a1 * a2).map(|_| rng.gen_range(0..b as u32)).collect();
    let f = func_from_table(GroupSpec::cyclic(a1), GroupSpec::cyclic(a2), GroupSpec::cyclic(b), table)?;
    Ok(build_code(f))
}

/// The `index`-th member of a seeded corpus with orders drawn from
/// `2..=max_order` (`A2` may be trivial).
pub fn random_corpus_code(seed: u64, index: u64, max_order: usize) -> Result<AmdCode> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let a1 = rng.gen_range(2..=max_order);
    let a2 = rng.gen_range(1..=max_order);
    let b = rng.gen_range(2..=max_order);
    random_systematic_code(rng.gen(), a1, a2, b)
}
