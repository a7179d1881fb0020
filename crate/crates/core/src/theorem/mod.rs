//! Closed-form description of the expansions in `E(r, l, a, q)`.
//!
//! [`prop1`] gives the word `W(a, x)` expanding `P_a/(Q_a + x)`, [`prop2`]
//! the single step that turns the relation `α_n^r = ε_{1,n} P_a α_{f(n)} +
//! ε_{2,n} Q_a + ν_n` into `r` partial quotients, [`conditions`] the
//! conditions (C0)-(C3), [`classify`] the index sets `F`, `G` and their
//! orbits, [`predict`] the resulting closed forms for `λ_n`, `μ_n`, and
//! [`verify`] compares everything with the series oracle.

pub mod classify;
pub mod conditions;
pub mod predict;
pub mod prop1;
pub mod prop2;
pub mod verify;

use thiserror::Error;

use crate::cf::CfError;
use crate::field::FieldError;
use crate::hyperquad::SpecError;
use crate::laurent::LaurentError;

pub use classify::{classify_index, forward_sets, IndexCase, IndexClassification, IndexMaps, Orbit};
pub use conditions::{check_conditions, conforming_spec, C0Status, ConditionReport, ConditionSummary};
pub use predict::{predict, predicted_expansion, Prediction};
pub use prop1::{lemma1_extend, prop1_check, prop1_word, Prop1Check, Prop1Word};
pub use prop2::{iterate_prop2, prop2_step, Carry, Prop2End, Prop2Step, Prop2Trace, TheoremState};
pub use verify::{verify, verify_with, MismatchDetail, VerificationReport, VerifyStatus};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TheoremError {
    #[error("invalid spec: {0}")]
    Spec(#[from] SpecError),
    #[error("omega = 0: P_a and Q_a + x are not coprime")]
    NotCoprime,
    #[error("step {0} is undefined: delta_n != 0 but omega_n = 0")]
    UndefinedStep(usize),
    #[error("the spec does not satisfy (C1), (C2) and (C3)")]
    ConditionsFail,
    #[error("the closed forms need (P, Q) = (eps1 P_a, eps2 Q_a); this spec overrides them")]
    Override,
    #[error("index {0} lies in more than one of F, F+1, G+1")]
    CaseCollision(usize),
    #[error("C({0}) is undefined")]
    UndefinedC(usize),
    #[error("field: {0}")]
    Field(#[from] FieldError),
    #[error("series: {0}")]
    Laurent(#[from] LaurentError),
    #[error("continued fraction: {0}")]
    Cf(#[from] CfError),
}
