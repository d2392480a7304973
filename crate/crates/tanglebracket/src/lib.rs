//! Kauffman bracket vectors of rational 2- and 3-tangles in plat form.
//!
//! A tangle is presented as a braid word over 4 or 6 strands whose bottom is
//! capped by a crossingless matching. Its bracket expands over the matching
//! basis (T_0, T_infinity for 2-tangles; the five trivial tangles 0_1..0_5
//! for 3-tangles) with Laurent-polynomial coefficients. That coefficient
//! vector, taken up to the unit group generated by -a^-3, is the invariant
//! this crate computes, compares, and sweeps.
//!
//! Two independent computation paths are kept side by side: a polynomial
//! transfer-matrix fast path on the Temperley-Lieb basis, and an exponential
//! state-sum oracle over planar diagrams. The `verify` module cross-checks
//! them against each other and against the printed calibration values.

pub mod bracket;
pub mod braid;
pub mod diagram;
pub mod invariant;
pub mod laurent;
pub mod tl;
pub mod verify;
