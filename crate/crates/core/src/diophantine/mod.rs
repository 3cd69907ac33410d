//! Continued fractions of quadratic surds and the candidate pipeline for
//! times with `|S_z| ~ 0`.
//!
//! At low temperature `L3(t)` is dominated by `cos(2 sqrt(D_n) t)` for
//! `n = 0, 1, 2`. At `t = q pi` the first term is near 1 whenever `q` is a
//! convergent denominator of `sqrt(l + 1) / k`, so candidates come from those
//! denominators; a second-order filter in `b = exp(-beta)` then keeps the
//! ones where all three cosines line up.

mod candidates;
mod cf;
mod curves;
mod filter;

pub use candidates::{build_candidate_set, CandidateSet, CandidateSpec, DivisorRange, Source};
pub use cf::{convergents, expand_surd, within_inverse_square, Convergent, SurdCf};
pub use curves::{bloch_at_q_pi, blue_curves, CurvePoint};
pub use filter::{filter_candidates, filter_margin, filter_rhs, Arithmetic, FilterSpec};
