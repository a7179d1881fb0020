//! Comparison of the closed forms and the step recursion with the oracle.

use serde::{Deserialize, Serialize};

use crate::cf::Word;
use crate::hyperquad::{expand_alpha_with, period_candidate, ExpandOptions, HyperquadSpec};
use crate::laurent::ExpandStop;

use super::classify::IndexMaps;
use super::conditions::{check_conditions, ConditionSummary};
use super::predict::predict;
use super::prop2::{iterate_prop2, Prop2End};
use super::TheoremError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyStatus {
    /// Conditions hold and the oracle matches the prediction everywhere.
    ConsistentPass,
    /// Conditions fail and the oracle shows a quotient of degree != 1.
    ConsistentFail,
    Mismatch,
    /// The oracle could not certify enough quotients to decide.
    PrecisionShortfall,
}

impl VerifyStatus {
    pub fn exit_code(self) -> i32 {
        match self {
            VerifyStatus::ConsistentPass | VerifyStatus::ConsistentFail => 0,
            VerifyStatus::PrecisionShortfall => 3,
            VerifyStatus::Mismatch => 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MismatchDetail {
    /// 1-based quotient index.
    pub index: usize,
    pub predicted: String,
    pub observed: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub conditions: ConditionSummary,
    pub certified: usize,
    pub perfect_through: usize,
    /// Leading quotients on which closed forms and oracle agree; absent when
    /// the conditions fail.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agreement_through: Option<usize>,
    /// Leading quotients on which the step recursion and the oracle agree.
    pub step_agreement_through: usize,
    pub step_end: Prop2End,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_mismatch: Option<MismatchDetail>,
    pub status: VerifyStatus,
    /// `(start, length)` of a period observed in the certified prefix.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period: Option<(usize, usize)>,
    /// Blocks `W_0, W_1, ...` fully covered by the verified prefix.
    pub complete_blocks: usize,
    /// Indices in two of `F`, `F+1`, `G`, `G+1`.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub overlaps: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn common_prefix(a: &Word, b: &Word) -> usize {
    a.terms().iter().zip(b.terms()).take_while(|(x, y)| x == y).count()
}

fn detail(index: usize, predicted: &Word, observed: &Word) -> MismatchDetail {
    let show = |w: &Word| w.terms().get(index - 1).map_or("-".to_string(), |a| a.to_string());
    MismatchDetail { index, predicted: show(predicted), observed: show(observed) }
}

pub fn verify(spec: &HyperquadSpec, n_terms: usize) -> Result<VerificationReport, TheoremError> {
    verify_with(spec, ExpandOptions::new(n_terms).stop_at_imperfect())
}

/// Runs the oracle with `opts`, the step recursion and (when the conditions
/// hold) the closed forms, and classifies the outcome.
pub fn verify_with(spec: &HyperquadSpec, opts: ExpandOptions) -> Result<VerificationReport, TheoremError> {
    let n_terms = opts.n_terms;
    let cond = check_conditions(spec)?;
    let trace = iterate_prop2(spec, n_terms)?;
    let mut report = VerificationReport {
        conditions: cond.summary(),
        certified: 0,
        perfect_through: 0,
        agreement_through: None,
        step_agreement_through: 0,
        step_end: trace.end,
        first_mismatch: None,
        status: VerifyStatus::PrecisionShortfall,
        period: None,
        complete_blocks: 0,
        overlaps: Vec::new(),
        note: None,
    };
    let oracle = match expand_alpha_with(spec, opts) {
        Ok(o) => o,
        Err(e) => {
            report.note = Some(e.to_string());
            return Ok(report);
        }
    };
    let word = &oracle.word;
    report.certified = oracle.certified;
    report.perfect_through = oracle.perfect_through;
    report.period = period_candidate(word);
    let imperfect = oracle.perfect_through < oracle.certified;
    let short = !imperfect && oracle.certified < n_terms;

    let step_agree = common_prefix(&trace.word, word);
    report.step_agreement_through = step_agree;
    let overlap = trace.word.len().min(word.len());
    let mut mismatch = None;
    if step_agree < overlap {
        mismatch = Some(detail(step_agree + 1, &trace.word, word));
        report.note = Some("step recursion disagrees with the oracle".into());
    } else if let Prop2End::NotPerfect { index } = trace.end {
        if index <= word.len() && word.terms()[index - 1].deg() == 1 {
            mismatch = Some(detail(index, &trace.word, word));
            report.note = Some("step recursion predicts a quotient of degree > 1".into());
        }
    }

    let verified;
    if cond.all() {
        match predict(spec, n_terms) {
            Ok(pred) => {
                let agree = common_prefix(&pred.word, word);
                report.agreement_through = Some(agree);
                verified = agree;
                report.overlaps = pred.overlaps;
                if mismatch.is_none() && (agree < word.len() || imperfect) {
                    mismatch = Some(detail(agree + 1, &pred.word, word));
                }
            }
            Err(e) => {
                report.note = Some(e.to_string());
                report.status = VerifyStatus::Mismatch;
                return Ok(report);
            }
        }
        report.status = if mismatch.is_some() {
            VerifyStatus::Mismatch
        } else if short {
            VerifyStatus::PrecisionShortfall
        } else {
            VerifyStatus::ConsistentPass
        };
    } else {
        verified = step_agree;
        report.status = if mismatch.is_some() {
            VerifyStatus::Mismatch
        } else if imperfect {
            VerifyStatus::ConsistentFail
        } else if short {
            VerifyStatus::PrecisionShortfall
        } else {
            report.note = Some("conditions fail but the expansion is perfect to the requested depth".into());
            VerifyStatus::Mismatch
        };
    }
    if oracle.stop == ExpandStop::Precision && report.note.is_none() && short {
        report.note = Some(format!("certified {} of {} quotients", oracle.certified, n_terms));
    }
    report.first_mismatch = mismatch;
    let maps = IndexMaps::new(spec.l(), spec.r());
    report.complete_blocks = maps.wm_blocks(64).iter().take_while(|b| b.end - 1 <= verified).count();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FqContext;

    #[test]
    fn intro_passes() {
        let f = FqContext::prime(5).unwrap();
        let e = f.from_int(3);
        let spec = HyperquadSpec::e0(&f, 1, f.from_int(-1), vec![f.one()], f.mul(e, f.from_int(2)), e).unwrap();
        let rep = verify(&spec, 60).unwrap();
        assert_eq!(rep.status, VerifyStatus::ConsistentPass, "{rep:?}");
        assert_eq!(rep.agreement_through, Some(60));
        assert_eq!(rep.complete_blocks, 3);
    }

    #[test]
    fn failing_c2_is_imperfect() {
        let f = FqContext::prime(5).unwrap();
        let one = f.one();
        let spec = HyperquadSpec::e0(&f, 1, one, vec![one], one, one).unwrap();
        let rep = verify(&spec, 60).unwrap();
        assert!(!rep.conditions.c2);
        assert_eq!(rep.status, VerifyStatus::ConsistentFail, "{rep:?}");
        assert!(rep.perfect_through < rep.certified);
    }

    #[test]
    fn omega_spec_is_periodic() {
        let f = FqContext::prime(3).unwrap();
        let one = f.one();
        let spec = HyperquadSpec::e0(&f, 1, f.from_int(4), vec![one, one], one, f.from_int(-2)).unwrap();
        let rep = verify(&spec, 50).unwrap();
        assert_eq!(rep.status, VerifyStatus::ConsistentPass);
        assert_eq!(rep.period, Some((0, 1)));
    }
}
