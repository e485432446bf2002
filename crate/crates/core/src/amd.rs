//! Systematic AMD codes `s -> (s, x, f(s, x))` and their exhaustive
//! evaluation under the weak, strong and stronger attack models.
//!
//! Sources and encoding randomness are uniform throughout. An offset
//! `(0, a2, b)` can only map a codeword to itself or to a rejected word, so
//! it never succeeds in the weak and strong models; the stronger model counts
//! any accepted word and therefore includes those offsets.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functions::Func;
use crate::limits;
use crate::Rational;

#[derive(Clone, Debug)]
pub struct AmdCode {
    func: Func,
}

/// Wraps `f` as a systematic code over `G = A1 x A2 x B`.
pub fn build_code(f: Func) -> AmdCode {
    AmdCode { func: f }
}

impl AmdCode {
    pub fn func(&self) -> &Func {
        &self.func
    }

    /// Number of sources, `|A1|`.
    pub fn m(&self) -> usize {
        self.func.a1().order()
    }

    /// Regularity: valid encodings per source, `|A2|`.
    pub fn t(&self) -> usize {
        self.func.a2().order()
    }

    /// `|G| = |A1| * |A2| * |B|`.
    pub fn n(&self) -> u64 {
        (self.m() * self.t()) as u64 * self.func.codomain().order() as u64
    }

    /// All valid encodings of `s`.
    pub fn valid_encodings(&self, s: usize) -> Result<Vec<Codeword>> {
        if s >= self.m() {
            return Err(Error::BadSource(s));
        }
        Ok((0..self.t())
            .map(|x| Codeword { s1: s, s2: x, tag: self.func.eval(s, x) })
            .collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Codeword {
    pub s1: usize,
    pub s2: usize,
    pub tag: usize,
}

impl Codeword {
    /// Componentwise sum with an offset, as the adversary applies it.
    pub fn shifted(&self, code: &AmdCode, delta: Offset) -> Codeword {
        let f = code.func();
        Codeword {
            s1: f.a1().add(self.s1, delta.a1),
            s2: f.a2().add(self.s2, delta.a2),
            tag: f.codomain().add(self.tag, delta.b),
        }
    }

    /// Hides the codeword behind a uniformly drawn mask.
    pub fn masked(&self, code: &AmdCode, sampler: &mut dyn Sampler) -> (Codeword, Offset) {
        let f = code.func();
        let mask = Offset {
            a1: sampler.sample(f.a1().order()),
            a2: sampler.sample(f.a2().order()),
            b: sampler.sample(f.codomain().order()),
        };
        (self.shifted(code, mask), mask)
    }
}

/// Source of uniform group indices for encoding.
pub trait Sampler {
    /// Uniform draw from `0..order`.
    fn sample(&mut self, order: usize) -> usize;
}

/// Seeded ChaCha8 stream; non-power-of-two orders use rejection sampling
/// on the smallest covering bit mask, so draws are exactly uniform.
pub struct SeededSampler {
    rng: ChaCha8Rng,
}

impl SeededSampler {
    pub fn new(seed: u64) -> SeededSampler {
        SeededSampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl Sampler for SeededSampler {
    fn sample(&mut self, order: usize) -> usize {
        assert!(order >= 1);
        if order == 1 {
            return 0;
        }
        let mask = u64::MAX >> (order as u64 - 1).leading_zeros();
        loop {
            let v = self.rng.next_u64() & mask;
            if v < order as u64 {
                return v as usize;
            }
        }
    }
}

/// Always returns the same index (reduced mod the order).
pub struct FixedSampler(pub usize);

impl Sampler for FixedSampler {
    fn sample(&mut self, order: usize) -> usize {
        self.0 % order
    }
}

pub fn encode(code: &AmdCode, s1: usize, sampler: &mut dyn Sampler) -> Result<Codeword> {
    if s1 >= code.m() {
        return Err(Error::BadSource(s1));
    }
    let x = sampler.sample(code.t());
    Ok(Codeword { s1, s2: x, tag: code.func.eval(s1, x) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decoded {
    Source(usize),
    Reject,
}

pub fn decode(code: &AmdCode, g: Codeword) -> Result<Decoded> {
    let f = code.func();
    for (v, o) in [(g.s1, code.m()), (g.s2, code.t()), (g.tag, f.codomain().order())] {
        if v >= o {
            return Err(Error::IndexOutOfRange { index: v, order: o });
        }
    }
    Ok(if f.eval(g.s1, g.s2) == g.tag { Decoded::Source(g.s1) } else { Decoded::Reject })
}

/// A tampering offset `(a1, a2, b)` in `G`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Offset {
    pub a1: usize,
    pub a2: usize,
    pub b: usize,
}

impl Offset {
    pub fn new(a1: usize, a2: usize, b: usize) -> Offset {
        Offset { a1, a2, b }
    }

    pub fn is_zero(&self) -> bool {
        self.a1 == 0 && self.a2 == 0 && self.b == 0
    }

    pub fn to_array(&self) -> [usize; 3] {
        [self.a1, self.a2, self.b]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AttackModel {
    /// Uniform source unknown to the adversary.
    Weak,
    /// The adversary knows the source.
    Strong(usize),
    /// Any accepted word counts as success.
    Stronger,
}

fn count_hits(code: &AmdCode, delta: Offset, sources: std::ops::Range<usize>) -> u64 {
    let f = code.func();
    let (a1g, a2g, bg) = (f.a1(), f.a2(), f.codomain());
    let t2 = a2g.translation(delta.a2);
    let mut hits = 0;
    for s in sources {
        let s_shift = a1g.add(s, delta.a1);
        for x in 0..code.t() {
            if f.eval(s_shift, t2[x] as usize) == bg.add(f.eval(s, x), delta.b) {
                hits += 1;
            }
        }
    }
    hits
}

fn check_offset(code: &AmdCode, delta: Offset) -> Result<()> {
    let f = code.func();
    for (v, o) in [(delta.a1, code.m()), (delta.a2, code.t()), (delta.b, f.codomain().order())] {
        if v >= o {
            return Err(Error::IndexOutOfRange { index: v, order: o });
        }
    }
    if delta.is_zero() {
        return Err(Error::ZeroOffset);
    }
    Ok(())
}

/// Exact success probability of one offset under one model.
pub fn success_given(code: &AmdCode, delta: Offset, model: AttackModel) -> Result<Rational> {
    check_offset(code, delta)?;
    let (m, t) = (code.m(), code.t());
    match model {
        AttackModel::Weak if delta.a1 == 0 => Ok(Rational::zero()),
        AttackModel::Weak => Ok(Rational::new(count_hits(code, delta, 0..m), (m * t) as u64)),
        AttackModel::Strong(s) if s >= m => Err(Error::BadModel(format!("source {s} out of range"))),
        AttackModel::Strong(_) if delta.a1 == 0 => Ok(Rational::zero()),
        AttackModel::Strong(s) => Ok(Rational::new(count_hits(code, delta, s..s + 1), t as u64)),
        AttackModel::Stronger => Ok(Rational::new(count_hits(code, delta, 0..m), (m * t) as u64)),
    }
}

/// Which models [`evaluate`] reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Models {
    pub weak: bool,
    pub strong: bool,
    pub stronger: bool,
}

impl Models {
    pub const ALL: Models = Models { weak: true, strong: true, stronger: true };
    pub const WEAK: Models = Models { weak: true, strong: false, stronger: false };
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SuccessProfile {
    pub weak_rho: Option<Rational>,
    pub weak_argmax: Option<Offset>,
    pub strong_rho_per_source: Option<Vec<Rational>>,
    pub strong_rho: Option<Rational>,
    pub stronger_rho: Option<Rational>,
    pub stronger_argmax: Option<Offset>,
    pub models: Models,
}

/// Best `(count, offset)` under the deterministic order: larger count, then
/// smaller `a1 + |A1| * a2`, then smaller `b`.
#[derive(Clone, Copy, Debug)]
struct Best {
    count: u64,
    delta: usize,
    offset: Offset,
}

fn pick(a: Option<Best>, b: Option<Best>) -> Option<Best> {
    match (a, b) {
        (Some(x), Some(y)) => {
            let key = |v: &Best| (std::cmp::Reverse(v.count), v.delta, v.offset.b);
            Some(if key(&y) < key(&x) { y } else { x })
        }
        (x, None) => x,
        (None, y) => y,
    }
}

#[derive(Clone, Debug, Default)]
struct Partial {
    weak: Option<Best>,
    stronger: Option<Best>,
    per_source: Vec<u64>,
}

impl Partial {
    fn merge(mut self, other: Partial) -> Partial {
        self.weak = pick(self.weak, other.weak);
        self.stronger = pick(self.stronger, other.stronger);
        if self.per_source.is_empty() {
            self.per_source = other.per_source;
        } else if !other.per_source.is_empty() {
            for (a, b) in self.per_source.iter_mut().zip(other.per_source) {
                *a = (*a).max(b);
            }
        }
        self
    }
}

/// Exhaustive evaluation over every offset. Offsets are processed in
/// parallel; partial results merge under a total order, so the profile does
/// not depend on the worker count.
pub fn evaluate(code: &AmdCode, models: Models) -> Result<SuccessProfile> {
    let f = code.func();
    let (m, t, nb) = (code.m(), code.t(), f.codomain().order());
    limits::check_cells(code.n() as u128)?;
    let bg = f.codomain();
    let sub = (nb <= 1024).then(|| bg.sub_table());
    let table = f.table();

    let partial = (0..m * t)
        .into_par_iter()
        .map(|delta| {
            let (a1, a2) = (delta % m, delta / m);
            let t1 = f.a1().translation(a1);
            let t2 = f.a2().translation(a2);
            let mut per_source = vec![0u64; m * nb];
            for s in 0..m {
                let (r0, r1) = (s * t, t1[s] as usize * t);
                let counts = &mut per_source[s * nb..(s + 1) * nb];
                for x in 0..t {
                    let y0 = table[r0 + x] as usize;
                    let y1 = table[r1 + t2[x] as usize] as usize;
                    let d = match &sub {
                        Some(st) => st[y1 * nb + y0] as usize,
                        None => bg.sub(y1, y0),
                    };
                    counts[d] += 1;
                }
            }
            let mut totals = vec![0u64; nb];
            for s in 0..m {
                for (tot, c) in totals.iter_mut().zip(&per_source[s * nb..(s + 1) * nb]) {
                    *tot += c;
                }
            }
            let best_of = |skip_zero: bool| {
                totals
                    .iter()
                    .enumerate()
                    .filter(|&(b, _)| !(skip_zero && b == 0))
                    .map(|(b, &count)| Best { count, delta, offset: Offset { a1, a2, b } })
                    .fold(None, |acc, v| pick(acc, Some(v)))
            };
            let mut out = Partial::default();
            if a1 != 0 {
                out.weak = best_of(false);
                out.per_source = (0..m)
                    .map(|s| *per_source[s * nb..(s + 1) * nb].iter().max().unwrap())
                    .collect();
            }
            // (0, 0, b) with b != 0 never yields a valid word; (0, 0, 0) is excluded
            out.stronger = best_of(delta == 0);
            out
        })
        .reduce(Partial::default, Partial::merge);

    let mt = (m * t) as u64;
    let ratio = |b: Option<Best>, den: u64| b.map_or(Rational::zero(), |b| Rational::new(b.count, den));
    let per_source: Vec<Rational> = if partial.per_source.is_empty() {
        vec![Rational::zero(); m]
    } else {
        partial.per_source.iter().map(|&c| Rational::new(c, t as u64)).collect()
    };
    let strong_rho = per_source.iter().max().cloned().unwrap_or_else(Rational::zero);
    Ok(SuccessProfile {
        weak_rho: models.weak.then(|| ratio(partial.weak, mt)),
        weak_argmax: if models.weak { partial.weak.map(|b| b.offset) } else { None },
        strong_rho_per_source: models.strong.then_some(per_source),
        strong_rho: models.strong.then_some(strong_rho),
        stronger_rho: models.stronger.then(|| ratio(partial.stronger, mt)),
        stronger_argmax: if models.stronger { partial.stronger.map(|b| b.offset) } else { None },
        models,
    })
}

/// Tag size `log2(n / m)`. The integer ratio is authoritative; `bits` and
/// `rendered` are display approximations.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TagSize {
    pub n: u64,
    pub m: u64,
    pub ratio: Rational,
    pub bits: f64,
    pub rendered: String,
}

pub fn tag_size(code: &AmdCode) -> TagSize {
    tag_size_of(code.n(), code.m() as u64)
}

pub fn tag_size_of(n: u64, m: u64) -> TagSize {
    let ratio = Rational::new(n, m);
    let bits = (n as f64 / m as f64).log2();
    TagSize { n, m, ratio, bits, rendered: format!("{bits:.6}") }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{cdfpw_func, mm_func, Split};

    fn mm3() -> AmdCode {
        build_code(mm_func(3, 1, Split::Weak).unwrap())
    }

    #[test]
    fn parameters() {
        let c = mm3();
        assert_eq!((c.m(), c.n(), c.t()), (3, 27, 3));
        let c = build_code(cdfpw_func(5, 1).unwrap());
        assert_eq!((c.m(), c.n()), (5, 125));
        let c = build_code(mm_func(2, 1, Split::Strong).unwrap());
        assert_eq!((c.m(), c.n()), (2, 8));
    }

    #[test]
    fn encode_decode() {
        let c = mm3();
        let g = encode(&c, 2, &mut FixedSampler(1)).unwrap();
        assert_eq!(g, Codeword { s1: 2, s2: 1, tag: 2 });
        assert_eq!(decode(&c, g).unwrap(), Decoded::Source(2));
        assert_eq!(decode(&c, Codeword { s1: 2, s2: 1, tag: 0 }).unwrap(), Decoded::Reject);
        for x in 0..3 {
            assert_eq!(decode(&c, Codeword { s1: 0, s2: x, tag: 0 }).unwrap(), Decoded::Source(0));
        }
        assert_eq!(encode(&c, 3, &mut FixedSampler(0)).unwrap_err(), Error::BadSource(3));
        assert!(decode(&c, Codeword { s1: 0, s2: 3, tag: 0 }).is_err());
    }

    #[test]
    fn seeded_sampler_is_reproducible_and_in_range() {
        let c = mm3();
        let run = |seed| {
            let mut s = SeededSampler::new(seed);
            (0..50).map(|i| encode(&c, i % 3, &mut s).unwrap()).collect::<Vec<_>>()
        };
        assert_eq!(run(7), run(7));
        assert_ne!(run(7), run(8));
        let mut s = SeededSampler::new(1);
        assert!((0..1000).all(|_| s.sample(5) < 5));
    }

    #[test]
    fn success_examples() {
        let c = mm3();
        assert_eq!(
            success_given(&c, Offset::new(1, 0, 0), AttackModel::Weak).unwrap(),
            Rational::new(1, 3)
        );
        assert_eq!(
            success_given(&c, Offset::new(0, 1, 2), AttackModel::Weak).unwrap(),
            Rational::zero()
        );
        assert_eq!(
            success_given(&c, Offset::new(0, 0, 0), AttackModel::Weak).unwrap_err(),
            Error::ZeroOffset
        );
        assert!(matches!(
            success_given(&c, Offset::new(1, 0, 0), AttackModel::Strong(3)),
            Err(Error::BadModel(_))
        ));
        let s = build_code(mm_func(2, 1, Split::Strong).unwrap());
        assert_eq!(
            success_given(&s, Offset::new(1, 0, 0), AttackModel::Strong(0)).unwrap(),
            Rational::new(1, 2)
        );
    }

    #[test]
    fn profile_examples() {
        let p = evaluate(&mm3(), Models::ALL).unwrap();
        assert_eq!(p.weak_rho, Some(Rational::new(1, 3)));
        let s = build_code(mm_func(2, 1, Split::Strong).unwrap());
        let p = evaluate(&s, Models::ALL).unwrap();
        assert_eq!(p.strong_rho, Some(Rational::new(1, 2)));
        assert_eq!(p.strong_rho_per_source, Some(vec![Rational::new(1, 2); 2]));
        let p = evaluate(&mm3(), Models::WEAK).unwrap();
        assert!(p.strong_rho.is_none() && p.stronger_rho.is_none());
    }

    #[test]
    fn tag_sizes() {
        let t = tag_size(&mm3());
        assert_eq!(t.ratio, Rational::integer(9));
        assert_eq!(t.rendered, "3.169925");
        assert_eq!(tag_size_of(8, 2).rendered, "2.000000");
        let t = tag_size(&build_code(cdfpw_func(5, 1).unwrap()));
        assert_eq!(t.ratio, Rational::integer(25));
        assert!((t.bits - 2.0 * 5f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn masking_is_reversible() {
        let c = mm3();
        let g = encode(&c, 1, &mut FixedSampler(2)).unwrap();
        let (masked, mask) = g.masked(&c, &mut SeededSampler::new(3));
        let f = c.func();
        let neg = Offset::new(f.a1().neg(mask.a1), f.a2().neg(mask.a2), f.codomain().neg(mask.b));
        assert_eq!(masked.shifted(&c, neg), g);
    }
}
