//! Lower bounds on tampering probability and effective tag size, and the
//! R-/G-optimality verdicts built from them.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Pow};
use serde::Serialize;

use crate::algebra::{gcd, prime_power};
use crate::amd::{AmdCode, SuccessProfile};
use crate::error::{Error, Result};
use crate::Rational;

/// `a(m-1) / (m(n-1))` with `a` the total number of valid encodings.
pub fn weak_lower_bound(m: u64, n: u64, a: u64) -> Result<Rational> {
    if m < 2 || n < 2 || a < m {
        return Err(Error::DegenerateParameters(format!("m={m}, n={n}, a={a}")));
    }
    Ok(Rational::from_big(
        BigUint::from(a) * (m - 1),
        BigUint::from(m) * (n - 1),
    ))
}

/// `ceil(t^2 m (m-1) / (n-1)) / (t m)` for t-regular codes.
pub fn regular_lower_bound(t: u64, m: u64, n: u64) -> Result<Rational> {
    if t < 1 || m < 2 || n < 2 {
        return Err(Error::DegenerateParameters(format!("t={t}, m={m}, n={n}")));
    }
    let num = BigUint::from(t) * t * m * (m - 1);
    let ceil = num.div_ceil(&BigUint::from(n - 1));
    Ok(Rational::from_big(ceil, BigUint::from(t) * m))
}

/// `1/|G_s|` for every source; systematic codes have `|G_s| = t`.
pub fn g_lower_bound(code: &AmdCode) -> Vec<Rational> {
    vec![Rational::new(1, code.t() as u64); code.m()]
}

/// `rational + log2(ratio)`, with `ratio > 0`. Kept symbolic so comparisons
/// stay exact; equality is numeric, not structural.
#[derive(Clone, Debug)]
pub struct LogValue {
    pub rational: Rational,
    pub log2_of: Rational,
}

impl LogValue {
    pub fn rational(r: Rational) -> LogValue {
        LogValue { rational: r, log2_of: Rational::one() }
    }

    pub fn log2(x: Rational) -> LogValue {
        assert!(!x.is_zero(), "log of zero");
        LogValue { rational: Rational::zero(), log2_of: x }
    }

    pub fn to_f64(&self) -> f64 {
        self.rational.to_f64() + self.log2_of.to_f64().log2()
    }

    pub fn rendered(&self) -> String {
        format!("{:.6}", self.to_f64())
    }
}

fn pow_big(x: &BigUint, e: &BigUint) -> BigUint {
    let e = u32::try_from(e).expect("exponent fits in u32");
    Pow::pow(x, e)
}

impl Ord for LogValue {
    /// `a + log2 x` vs `b + log2 y` is `2^a x` vs `2^b y`; with `|a - b| = p/q`
    /// both sides are raised to the `q`-th power.
    fn cmp(&self, other: &LogValue) -> Ordering {
        let (flip, hi, lo) = if self.rational >= other.rational {
            (false, self, other)
        } else {
            (true, other, self)
        };
        let d = hi.rational.checked_sub(&lo.rational).expect("hi >= lo");
        let two = BigUint::from(2u32);
        let (p, q) = (d.numer(), d.denom());
        let (xn, xd) = (hi.log2_of.numer(), hi.log2_of.denom());
        let (yn, yd) = (lo.log2_of.numer(), lo.log2_of.denom());
        let left = pow_big(&two, p) * pow_big(xn, q) * pow_big(yd, q);
        let right = pow_big(yn, q) * pow_big(xd, q);
        let ord = left.cmp(&right);
        if flip {
            ord.reverse()
        } else {
            ord
        }
    }
}

impl PartialEq for LogValue {
    fn eq(&self, other: &LogValue) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for LogValue {}

impl PartialOrd for LogValue {
    fn partial_cmp(&self, other: &LogValue) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.rational.is_zero(), self.log2_of == Rational::one()) {
            (_, true) => write!(f, "{}", self.rational),
            (true, false) => write!(f, "log2({})", self.log2_of),
            (false, false) => write!(f, "{} + log2({})", self.rational, self.log2_of),
        }
    }
}

impl Serialize for LogValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("LogValue", 4)?;
        st.serialize_field("rational", &self.rational)?;
        st.serialize_field("log2Of", &self.log2_of)?;
        st.serialize_field("expr", &self.to_string())?;
        st.serialize_field("rendered", &self.rendered())?;
        st.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowModel {
    Weak,
    Strong,
}

/// A weak code whose parameters place an upper end on the tag-size window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `q = 2^k` Maiorana-McFarland code with the least `r` giving
    /// `q^{2r-1} >= 2^u` sources.
    MaioranaMcFarland,
    /// Trace/multiplicative-group code with `m1 * m2 = q^r - 1`, coprime.
    TraceMult { q: u64, r: u32, m2: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WitnessParams {
    pub family: &'static str,
    pub q: u64,
    pub r: u32,
    pub m: u64,
    pub n: u64,
    pub rho: Rational,
    /// Achieved tag size `log2(n/m)`.
    pub achieved: LogValue,
    /// Upper end claimed for this family.
    pub claimed_upper: LogValue,
    pub strict_upper: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TagWindow {
    pub k: u32,
    pub u: u32,
    pub model: WindowModel,
    /// `c*k - 2^{1-u}` with `c = 1` (weak) or `2` (strong).
    pub lower: LogValue,
    /// `c*k - 1`.
    pub lower_floor: LogValue,
    /// Tag size of the witness, or of the evaluated code.
    pub achieved: Option<LogValue>,
    pub witness: Option<WitnessParams>,
    /// `lower <= achieved` and `achieved` within the claimed upper end.
    pub non_empty: bool,
}

fn pow2_recip(e: u32) -> Rational {
    Rational::from_big(BigUint::one(), BigUint::one() << e)
}

/// Lower end of the effective tag-size window plus, optionally, the upper
/// end achieved by a witness construction.
pub fn effective_tag_window(
    k: u32,
    u: u32,
    model: WindowModel,
    witness: Option<Witness>,
) -> Result<TagWindow> {
    if k < 1 || u < 1 {
        return Err(Error::DegenerateParameters(format!("k={k}, u={u}")));
    }
    let c = match model {
        WindowModel::Weak => k as u64,
        WindowModel::Strong => 2 * k as u64,
    };
    let lower = Rational::integer(c).checked_sub(&pow2_recip(u - 1)).expect("c >= 1");
    let lower = LogValue::rational(lower);
    let lower_floor = LogValue::rational(Rational::integer(c - 1));
    let witness = match witness {
        None => None,
        Some(_) if model == WindowModel::Strong => {
            return Err(Error::BadModel("witness constructions are weak codes".into()))
        }
        Some(Witness::MaioranaMcFarland) => Some(mm_witness(k, u)?),
        Some(Witness::TraceMult { q, r, m2 }) => Some(trace_witness(q, r, m2)?),
    };
    let non_empty = match &witness {
        None => true,
        Some(w) => {
            let below = if w.strict_upper {
                w.achieved < w.claimed_upper
            } else {
                w.achieved <= w.claimed_upper
            };
            lower <= w.achieved && below
        }
    };
    let achieved = witness.as_ref().map(|w| w.achieved.clone());
    Ok(TagWindow { k, u, model, lower, lower_floor, achieved, witness, non_empty })
}

fn mm_witness(k: u32, u: u32) -> Result<WitnessParams> {
    // least r >= 1 with u <= k(2r-1)
    let r = (u + k).div_ceil(2 * k).max(1);
    let bits = |e: u32| -> Result<u64> {
        1u64.checked_shl(e)
            .filter(|_| e < 64)
            .ok_or_else(|| Error::DegenerateParameters(format!("2^{e} overflows")))
    };
    let q = bits(k)?;
    let m = bits(k * (2 * r - 1))?;
    let n = bits(k * (2 * r + 1))?;
    Ok(WitnessParams {
        family: "mm",
        q,
        r,
        m,
        n,
        rho: Rational::new(1, q),
        achieved: LogValue::log2(Rational::new(n, m)),
        claimed_upper: LogValue::rational(Rational::integer(2 * k as u64)),
        strict_upper: false,
    })
}

/// Parameters `(k, u)` attained by the trace/multiplicative witness:
/// `u = floor(log2 m1)`, `k = floor(log2((q^r - 1)/q^{r-1}))`.
pub fn trace_witness_ku(q: u64, r: u32, m2: u64) -> Result<(u32, u32)> {
    let (qr, m1) = trace_split(q, r, m2)?;
    let k = floor_log2(qr - 1, qr / q);
    let u = floor_log2(m1, 1);
    Ok((k, u))
}

fn trace_split(q: u64, r: u32, m2: u64) -> Result<(u64, u64)> {
    prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if r == 0 {
        return Err(Error::ZeroDegree);
    }
    let qr = q
        .checked_pow(r)
        .ok_or_else(|| Error::DegenerateParameters(format!("{q}^{r} overflows")))?;
    if m2 == 0 || (qr - 1) % m2 != 0 {
        return Err(Error::BadFactorization { n: qr - 1, m1: (qr - 1) / m2.max(1), m2 });
    }
    let m1 = (qr - 1) / m2;
    if gcd(m1, m2) != 1 {
        return Err(Error::NotCoprime(m1, m2));
    }
    Ok((qr, m1))
}

/// `floor(log2(num/den))` for `num >= den > 0`.
fn floor_log2(num: u64, den: u64) -> u32 {
    let mut k = 0;
    while (den as u128) << (k + 1) <= num as u128 {
        k += 1;
    }
    k
}

fn trace_witness(q: u64, r: u32, m2: u64) -> Result<WitnessParams> {
    let (qr, m1) = trace_split(q, r, m2)?;
    let (k, _) = trace_witness_ku(q, r, m2)?;
    Ok(WitnessParams {
        family: "trace-mult",
        q,
        r,
        m: m1,
        n: m1 * m2 * q,
        rho: Rational::new(qr / q, qr - 1),
        achieved: LogValue::log2(Rational::integer(m2 * q)),
        claimed_upper: LogValue {
            rational: Rational::integer(k as u64 + 1),
            log2_of: Rational::new(m2 * qr, qr - 1),
        },
        strict_upper: true,
    })
}

/// An achieved value against its bound; `met` means exact equality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub value: Rational,
    pub bound: Rational,
    pub met: bool,
}

impl BoundCheck {
    pub fn new(value: Rational, bound: Rational) -> BoundCheck {
        let met = value == bound;
        BoundCheck { value, bound, met }
    }

    /// `value >= bound`.
    pub fn respected(&self) -> bool {
        self.value >= self.bound
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundReport {
    /// Absent when the code has a single source.
    pub weak_lower: Option<BoundCheck>,
    pub regular_lower: Option<BoundCheck>,
    pub g_lower_per_source: Vec<BoundCheck>,
    /// Window for the code's own `(k, u)`; absent when either is zero.
    pub effective_tag_window: Option<TagWindow>,
    pub r_optimal: bool,
    pub g_optimal: bool,
    /// Every achieved value is at least its bound.
    pub consistent: bool,
}

/// Largest `k` with `rho <= 2^{-k}`.
fn security_bits(rho: &Rational) -> u32 {
    if rho.is_zero() {
        return 0;
    }
    let inv = rho.recip();
    let mut k = 0u32;
    while Rational::integer(1u64 << (k + 1)) <= inv && k < 62 {
        k += 1;
    }
    k
}

pub fn optimality_verdict(code: &AmdCode, profile: &SuccessProfile) -> Result<BoundReport> {
    let weak = profile.weak_rho.clone().ok_or(Error::ProfileIncomplete("weak"))?;
    let per_source =
        profile.strong_rho_per_source.clone().ok_or(Error::ProfileIncomplete("strong"))?;
    let (m, t, n) = (code.m() as u64, code.t() as u64, code.n());

    let weak_lower = weak_lower_bound(m, n, m * t).ok().map(|b| BoundCheck::new(weak.clone(), b));
    let regular_lower =
        regular_lower_bound(t, m, n).ok().map(|b| BoundCheck::new(weak.clone(), b));
    let g_lower_per_source: Vec<BoundCheck> = per_source
        .into_iter()
        .zip(g_lower_bound(code))
        .map(|(v, b)| BoundCheck::new(v, b))
        .collect();

    let (k, u) = (security_bits(&weak), floor_log2(m, 1));
    let effective_tag_window = if k >= 1 && u >= 1 {
        let mut w = effective_tag_window(k, u, WindowModel::Weak, None)?;
        let achieved = LogValue::log2(Rational::new(n, m));
        w.non_empty = w.lower <= achieved;
        w.achieved = Some(achieved);
        Some(w)
    } else {
        None
    };

    let r_optimal = regular_lower.as_ref().is_some_and(|c| c.met);
    let g_optimal = !g_lower_per_source.is_empty() && g_lower_per_source.iter().all(|c| c.met);
    let consistent = weak_lower.iter().chain(&regular_lower).chain(&g_lower_per_source).all(BoundCheck::respected);
    Ok(BoundReport {
        weak_lower,
        regular_lower,
        g_lower_per_source,
        effective_tag_window,
        r_optimal,
        g_optimal,
        consistent,
    })
}
