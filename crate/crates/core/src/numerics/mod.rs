//! Exact and certified arithmetic.
//!
//! [`BigReal`] is an exact real built from rationals and powers of two whose
//! exponents may themselves be huge [`BigReal`]s, so magnitudes such as
//! `2^(2^(2^120))` are first-class values. Ring operations on it are exact.
//! Transcendental functions are only available as enclosures
//! ([`IntervalReal`]) computed at an explicit [`Precision`].

mod interval;
mod kernel;
mod logvalue;
mod real;
mod serial;

pub use interval::{certified_compare, escalate, exp_enclosure, ln2, ln_enclosure, quotient, IntervalReal, Verdict};
pub use kernel::{ln2_enclosure, ln_rational, exp_rational};
pub use logvalue::{ln_one_minus_exp_neg, log_add_exp, log_sub_exp, LogValue};
pub use real::{parse_rational, BigReal, Rational, RoundingMode, FOLD_LIMIT};
pub use serial::BigRealRepr;

use thiserror::Error;

/// Working precision in mantissa bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision(pub u32);

impl Precision {
    pub const DEFAULT: Precision = Precision(256);
    /// Upper limit for automatic precision doubling.
    pub const CAP: Precision = Precision(16384);

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn doubled(self) -> Precision {
        Precision(self.0.saturating_mul(2))
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::DEFAULT
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericsError {
    #[error("negative quantity in log domain")]
    NegativeLogQuantity,
    #[error("logarithm of a non-positive interval")]
    LnDomain,
    #[error("division by an interval containing zero")]
    DivisionByZero,
    #[error("exponent of a power of two must be an integer")]
    NonIntegerExponent,
    #[error("magnitude below every representable value")]
    Underflow,
    #[error("comparison stayed indeterminate up to {0} bits")]
    Indeterminate(u32),
    #[error("cannot parse number: {0}")]
    Parse(String),
}
