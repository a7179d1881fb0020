//! Hyperquadratic continued fractions over finite fields of odd characteristic.
//!
//! The crate is layered bottom-up: [`field`] and [`poly`] provide exact
//! arithmetic, [`cf`] and [`laurent`] continued fractions and truncated power
//! series, [`hyperquad`] the series oracle for elements defined by
//! `α = [a_1, ..., a_l, α_{l+1}]`, `α^r = P α_{l+1} + Q`, and [`theorem`] the
//! closed-form description of their partial quotients together with a verifier.

pub mod cf;
pub mod families;
pub mod field;
pub mod hyperquad;
pub mod laurent;
pub mod poly;
pub mod search;
pub mod theorem;

pub use cf::{continuant, convergents, Word};
pub use field::{FieldElem, FqContext};
pub use laurent::Laurent;
pub use poly::Poly;
