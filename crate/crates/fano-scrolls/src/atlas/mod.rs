//! The case atlas: enumeration of both families, embedded reference tables,
//! the per-case verification pipeline, numerical invariants, and the
//! rationality decision rules.

mod enumerate;
mod rationality;
pub mod tables;
mod verify;

use serde::Serialize;
use thiserror::Error;

pub use enumerate::{
    enumerate_hyperelliptic, enumerate_trigonal, find_case, hyperelliptic_tuples,
    trigonal_tuples, CaseKind, FanoCase,
};
pub use rationality::{descent_applies, rationality_verdict, split_bisection, Rationality};
pub use verify::{verify_case, CaseReport, VerifyOptions};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AtlasError {
    #[error("anticanonical degree must be a positive even integer, got {0}")]
    InvalidDegree(i64),
    #[error("the plurigenus formula gave a non-integer for degree {0}, m {1}")]
    NonIntegral(i64, u32),
    #[error("unknown case label `{0}`")]
    UnknownCase(String),
    #[error(transparent)]
    Scroll(#[from] crate::scroll::ScrollError),
}

/// Dimension of the space of sections of `-mK`:
/// `m(m+1)(2m+1)/12 * (-K)^3 + 2m + 1`, with `m = 0` giving the constants.
pub fn rr_h0(degree: i64, m: u32) -> Result<i64, AtlasError> {
    if m == 0 {
        return Ok(1);
    }
    if degree <= 0 || degree % 2 != 0 {
        return Err(AtlasError::InvalidDegree(degree));
    }
    let m = i64::from(m);
    let numerator = m
        .checked_mul(m + 1)
        .and_then(|v| v.checked_mul(2 * m + 1))
        .and_then(|v| v.checked_mul(degree))
        .ok_or(AtlasError::NonIntegral(degree, m as u32))?;
    if numerator % 12 != 0 {
        return Err(AtlasError::NonIntegral(degree, m as u32));
    }
    Ok(numerator / 12 + 2 * m + 1)
}

/// Aggregated pass/fail counts over a full verification run.
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub total_cases: usize,
    pub scroll_cases: usize,
    pub table_matches: usize,
    pub table_mismatches: Vec<String>,
    pub multiplicity_oracle_agreements: usize,
    pub multiplicity_oracle_disagreements: Vec<String>,
    pub rational: usize,
    pub non_rational_general: usize,
    pub unknown: usize,
}

/// A full run over every case of both families.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub cases: Vec<CaseReport>,
    pub summary: RunSummary,
}

/// Verify every case of both families and aggregate the outcomes.
pub fn run_all(opts: &VerifyOptions) -> Result<RunReport, AtlasError> {
    let mut cases = Vec::new();
    for case in enumerate_hyperelliptic()
        .into_iter()
        .chain(enumerate_trigonal())
    {
        cases.push(verify_case(&case, opts)?);
    }
    let summary = summarize(&cases);
    Ok(RunReport { cases, summary })
}

pub fn summarize(cases: &[CaseReport]) -> RunSummary {
    let scroll_cases = cases.iter().filter(|c| c.class.is_some()).count();
    let table_mismatches: Vec<String> = cases
        .iter()
        .filter(|c| !c.table_match)
        .map(|c| c.id.clone())
        .collect();
    let multiplicity_oracle_disagreements: Vec<String> = cases
        .iter()
        .filter(|c| c.mult.as_ref().is_some_and(|m| m.formula != m.scan))
        .map(|c| c.id.clone())
        .collect();
    RunSummary {
        total_cases: cases.len(),
        scroll_cases,
        table_matches: cases.iter().filter(|c| c.table_match).count(),
        table_mismatches,
        multiplicity_oracle_agreements: cases.len() - multiplicity_oracle_disagreements.len(),
        multiplicity_oracle_disagreements,
        rational: cases
            .iter()
            .filter(|c| c.rationality.verdict == "rational")
            .count(),
        non_rational_general: cases
            .iter()
            .filter(|c| c.rationality.verdict == "non-rational-general")
            .count(),
        unknown: cases
            .iter()
            .filter(|c| c.rationality.verdict == "unknown")
            .count(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plurigenus_formula() {
        // degree 40, m = 1: 23 sections, one more than n = 22.
        assert_eq!(rr_h0(40, 1).unwrap(), 23);
        // degree 2 maps to P^3.
        assert_eq!(rr_h0(2, 1).unwrap(), 4);
        // m = 0 counts the constants.
        assert_eq!(rr_h0(54, 0).unwrap(), 1);
        // m = 1 in general: degree/2 + 3.
        for degree in (2..=54).step_by(2) {
            assert_eq!(rr_h0(degree, 1).unwrap(), degree / 2 + 3);
        }
        assert!(rr_h0(3, 1).is_err());
        assert!(rr_h0(-2, 1).is_err());
    }

    #[test]
    fn higher_plurigenera_are_integral() {
        for degree in (2..=54).step_by(2) {
            for m in 1..=6 {
                let h0 = rr_h0(degree, m).unwrap();
                assert!(h0 > 0);
            }
        }
    }
}
