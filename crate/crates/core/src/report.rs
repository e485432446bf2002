//! JSON report shapes shared by the command-line front end.

use serde::Serialize;

use crate::amd::{evaluate, tag_size, AmdCode, Models, SuccessProfile, TagSize};
use crate::bounds::{optimality_verdict, BoundReport};
use crate::derive::{theorem3_check, theorem4_check, Theorem3Report, Theorem4Report};
use crate::error::Result;
use crate::nonlinearity::{nonlinearity_with_peak, partial_nonlinearity_with_peak, Peak};
use crate::Rational;

/// Sources and encodings are always uniform; reports say so explicitly.
pub const SOURCE_DISTRIBUTION: &str = "uniform";

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CodeSummary {
    pub label: String,
    pub a1: String,
    pub a2: String,
    pub b: String,
    pub m: usize,
    pub n: u64,
    pub t: usize,
    pub tag_size: TagSize,
}

pub fn summarize(code: &AmdCode) -> CodeSummary {
    let f = code.func();
    CodeSummary {
        label: f.label().to_string(),
        a1: f.a1().to_string(),
        a2: f.a2().to_string(),
        b: f.codomain().to_string(),
        m: code.m(),
        n: code.n(),
        t: code.t(),
        tag_size: tag_size(code),
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AmdReport {
    pub m: usize,
    pub n: u64,
    pub t: usize,
    pub weak_rho: Option<Rational>,
    pub strong_rho: Option<Rational>,
    pub stronger_rho: Option<Rational>,
    /// Weak-model maximizer when evaluated, else the stronger-model one.
    pub argmax_delta: Option<[usize; 3]>,
    pub stronger_argmax_delta: Option<[usize; 3]>,
    pub per_source: Option<Vec<Rational>>,
    pub source_distribution: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundReport>,
}

impl AmdReport {
    pub fn new(code: &AmdCode, p: SuccessProfile, bounds: Option<BoundReport>) -> AmdReport {
        AmdReport {
            m: code.m(),
            n: code.n(),
            t: code.t(),
            argmax_delta: p.weak_argmax.or(p.stronger_argmax).map(|o| o.to_array()),
            stronger_argmax_delta: p.stronger_argmax.map(|o| o.to_array()),
            weak_rho: p.weak_rho,
            strong_rho: p.strong_rho,
            stronger_rho: p.stronger_rho,
            per_source: p.strong_rho_per_source,
            source_distribution: SOURCE_DISTRIBUTION,
            bounds,
        }
    }
}

/// Evaluates all models and attaches the bound verdicts.
pub fn amd_report(code: &AmdCode, with_bounds: bool) -> Result<AmdReport> {
    let p = evaluate(code, Models::ALL)?;
    let bounds = if with_bounds { Some(optimality_verdict(code, &p)?) } else { None };
    Ok(AmdReport::new(code, p, bounds))
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NonlinearitySummary {
    pub nonlinearity: Rational,
    pub peak: Option<Peak>,
    pub partial_nonlinearity: Rational,
    pub partial_peak: Option<Peak>,
}

pub fn nonlinearity_summary(code: &AmdCode) -> Result<NonlinearitySummary> {
    let (nonlinearity, peak) = nonlinearity_with_peak(code.func())?;
    let (partial_nonlinearity, partial_peak) = partial_nonlinearity_with_peak(code.func())?;
    Ok(NonlinearitySummary { nonlinearity, peak, partial_nonlinearity, partial_peak })
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DeriveReport {
    pub theorem3: Theorem3Report,
    pub theorem4: Theorem4Report,
}

pub fn derive_report(code: &AmdCode) -> Result<DeriveReport> {
    Ok(DeriveReport { theorem3: theorem3_check(code)?, theorem4: theorem4_check(code)? })
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FullReport {
    pub code: CodeSummary,
    pub nonlinearity: NonlinearitySummary,
    pub amd: AmdReport,
    pub derive: DeriveReport,
}

pub fn full_report(code: &AmdCode) -> Result<FullReport> {
    Ok(FullReport {
        code: summarize(code),
        nonlinearity: nonlinearity_summary(code)?,
        amd: amd_report(code, true)?,
        derive: derive_report(code)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amd::build_code;
    use crate::functions::{mm_func, Split};

    #[test]
    fn report_field_names() {
        let c = build_code(mm_func(3, 1, Split::Weak).unwrap());
        let v = serde_json::to_value(amd_report(&c, true).unwrap()).unwrap();
        assert_eq!(v["weakRho"], serde_json::json!({"num": 1, "den": 3}));
        for key in ["m", "n", "t", "strongRho", "strongerRho", "argmaxDelta", "perSource"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["bounds"]["rOptimal"], true);
        assert_eq!(v["bounds"]["regularLower"]["met"], true);
    }
}
