//! Dual-mode arithmetic for path counting.
//!
//! The engines count optimal paths and accumulate fractional dependencies.
//! Counts grow exponentially in the worst case, so every engine is generic
//! over a mode: `Float64` for the usual fast Brandes arithmetic, `Exact` for
//! big-integer counts with big-rational dependencies. Oracle comparisons
//! always use `Exact` on the oracle side.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub trait NumMode {
    type Count: Clone + PartialEq + std::fmt::Debug + Send + 'static;
    type Score: Clone + PartialEq + std::fmt::Debug + Send + 'static;

    fn zero_count() -> Self::Count;
    fn one_count() -> Self::Count;
    fn add_count(dst: &mut Self::Count, src: &Self::Count);
    /// dst += src * factor; parallel arcs enter counting with a multiplicity.
    fn add_count_scaled(dst: &mut Self::Count, src: &Self::Count, factor: u64);

    fn zero_score() -> Self::Score;
    fn add_score(dst: &mut Self::Score, src: &Self::Score);
    fn sub_score(dst: &mut Self::Score, src: &Self::Score);
    fn score_from_usize(value: usize) -> Self::Score;

    /// num / den as a score. Denominators are counts of existing paths and
    /// are therefore nonzero wherever the engines divide.
    fn ratio(num: &Self::Count, den: &Self::Count) -> Self::Score;
    /// score * num / den, the dependency propagation step.
    fn mul_ratio(score: &Self::Score, num: &Self::Count, den: &Self::Count) -> Self::Score;

    fn score_to_f64(score: &Self::Score) -> f64;
}

/// Fast mode: counts and scores are plain doubles.
pub struct Float64;

impl NumMode for Float64 {
    type Count = f64;
    type Score = f64;

    fn zero_count() -> f64 {
        0.0
    }
    fn one_count() -> f64 {
        1.0
    }
    fn add_count(dst: &mut f64, src: &f64) {
        *dst += *src;
    }
    fn add_count_scaled(dst: &mut f64, src: &f64, factor: u64) {
        *dst += *src * factor as f64;
    }

    fn zero_score() -> f64 {
        0.0
    }
    fn add_score(dst: &mut f64, src: &f64) {
        *dst += *src;
    }
    fn sub_score(dst: &mut f64, src: &f64) {
        *dst -= *src;
    }
    fn score_from_usize(value: usize) -> f64 {
        value as f64
    }

    fn ratio(num: &f64, den: &f64) -> f64 {
        *num / *den
    }
    fn mul_ratio(score: &f64, num: &f64, den: &f64) -> f64 {
        score * num / den
    }

    fn score_to_f64(score: &f64) -> f64 {
        *score
    }
}

/// Exact mode: big-integer counts, reduced big-rational scores.
pub struct Exact;

impl NumMode for Exact {
    type Count = BigInt;
    type Score = BigRational;

    fn zero_count() -> BigInt {
        BigInt::zero()
    }
    fn one_count() -> BigInt {
        BigInt::one()
    }
    fn add_count(dst: &mut BigInt, src: &BigInt) {
        *dst += src;
    }
    fn add_count_scaled(dst: &mut BigInt, src: &BigInt, factor: u64) {
        *dst += src * BigInt::from(factor);
    }

    fn zero_score() -> BigRational {
        BigRational::zero()
    }
    fn add_score(dst: &mut BigRational, src: &BigRational) {
        *dst += src;
    }
    fn sub_score(dst: &mut BigRational, src: &BigRational) {
        *dst -= src;
    }
    fn score_from_usize(value: usize) -> BigRational {
        BigRational::from_integer(BigInt::from(value))
    }

    fn ratio(num: &BigInt, den: &BigInt) -> BigRational {
        BigRational::new(num.clone(), den.clone())
    }
    fn mul_ratio(score: &BigRational, num: &BigInt, den: &BigInt) -> BigRational {
        score * BigRational::new(num.clone(), den.clone())
    }

    fn score_to_f64(score: &BigRational) -> f64 {
        rational_to_f64(score)
    }
}

/// Lossless enough for scores: falls back to numerator/denominator division
/// when the rational does not fit `to_f64` directly.
pub fn rational_to_f64(value: &BigRational) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        let num = value.numer().to_f64().unwrap_or(if value.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        });
        let den = value.denom().to_f64().unwrap_or(f64::INFINITY);
        num / den
    })
}
