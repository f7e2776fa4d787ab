//! Piecewise log-linear functions `h = e^f` with `f` continuous and
//! piecewise linear on `[0, ∞)`.

mod integral;
mod transform;

pub use integral::{integral_log, segment_integral_log};
pub use transform::{maximal_function, ratio_transform, Attainment, MaximalResult};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{parse_rational, quotient, BigReal, IntervalReal, NumericsError, Precision, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PiecewiseError {
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("a piecewise function needs at least one piece")]
    Empty,
    #[error("the first piece must start at 0")]
    Origin,
    #[error("breakpoints not strictly increasing at piece {0}")]
    Unordered(usize),
    #[error("discontinuous at the start of piece {0}")]
    Discontinuous(usize),
    #[error("slopes not {} at piece {index}", if *.strict { "strictly increasing" } else { "nondecreasing" })]
    NotConvex { index: usize, strict: bool },
    #[error("{0} is outside the domain")]
    Domain(String),
    #[error("integral diverges: tail slope {0} is not negative")]
    Divergent(Rational),
}

/// Convexity claimed for `f`; checked on construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Convexity {
    #[default]
    None,
    Convex,
    StrictlyConvex,
}

/// `f(x) = slope·x + intercept` on `[lo, hi)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Piece {
    pub slope: Rational,
    pub intercept: BigReal,
    pub lo: BigReal,
    /// `None` for the final, unbounded piece.
    pub hi: Option<BigReal>,
}

impl Piece {
    pub fn value_at(&self, x: &BigReal) -> BigReal {
        &x.mul_rational(&self.slope) + &self.intercept
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseLogLinear {
    pieces: Vec<Piece>,
    convexity: Convexity,
}

impl PiecewiseLogLinear {
    /// Builds from `(slope, intercept, lo)` triples, checking order,
    /// exact continuity and the claimed convexity.
    pub fn new(
        parts: Vec<(Rational, BigReal, BigReal)>,
        convexity: Convexity,
    ) -> Result<PiecewiseLogLinear, PiecewiseError> {
        if parts.is_empty() {
            return Err(PiecewiseError::Empty);
        }
        if !parts[0].2.is_zero() {
            return Err(PiecewiseError::Origin);
        }
        let mut pieces: Vec<Piece> = Vec::with_capacity(parts.len());
        for (i, (slope, intercept, lo)) in parts.into_iter().enumerate() {
            if let Some(prev) = pieces.last_mut() {
                if lo <= prev.lo {
                    return Err(PiecewiseError::Unordered(i));
                }
                if prev.value_at(&lo) != &lo.mul_rational(&slope) + &intercept {
                    return Err(PiecewiseError::Discontinuous(i));
                }
                let ok = match convexity {
                    Convexity::None => true,
                    Convexity::Convex => prev.slope <= slope,
                    Convexity::StrictlyConvex => prev.slope < slope,
                };
                if !ok {
                    return Err(PiecewiseError::NotConvex {
                        index: i,
                        strict: convexity == Convexity::StrictlyConvex,
                    });
                }
                prev.hi = Some(lo.clone());
            }
            pieces.push(Piece { slope, intercept, lo, hi: None });
        }
        Ok(PiecewiseLogLinear { pieces, convexity })
    }

    /// Builds from slopes and interior breakpoints, deriving intercepts by
    /// continuity from `f(0) = b0`.
    pub fn from_slopes(
        b0: BigReal,
        slopes: &[Rational],
        breakpoints: &[BigReal],
        convexity: Convexity,
    ) -> Result<PiecewiseLogLinear, PiecewiseError> {
        if slopes.is_empty() {
            return Err(PiecewiseError::Empty);
        }
        assert_eq!(breakpoints.len() + 1, slopes.len(), "one breakpoint between each pair of slopes");
        let mut parts = vec![(slopes[0].clone(), b0, BigReal::zero())];
        for (k, a) in breakpoints.iter().enumerate() {
            let (m, b, _) = &parts[k];
            let next = &(&a.mul_rational(m) + b) - &a.mul_rational(&slopes[k + 1]);
            parts.push((slopes[k + 1].clone(), next, a.clone()));
        }
        PiecewiseLogLinear::new(parts, convexity)
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn convexity(&self) -> Convexity {
        self.convexity
    }

    /// Interior breakpoints `a_1, a_2, ...` (excludes 0).
    pub fn breakpoints(&self) -> impl Iterator<Item = &BigReal> {
        self.pieces[1..].iter().map(|p| &p.lo)
    }

    pub fn last(&self) -> &Piece {
        self.pieces.last().expect("nonempty")
    }

    fn check_domain(x: &BigReal) -> Result<(), PiecewiseError> {
        if x.is_negative() {
            return Err(PiecewiseError::Domain(x.to_string()));
        }
        Ok(())
    }

    /// Index of the piece containing `x`; breakpoints belong to the right piece.
    pub fn piece_index(&self, x: &BigReal) -> Result<usize, PiecewiseError> {
        Self::check_domain(x)?;
        Ok(self.pieces.partition_point(|p| &p.lo <= x) - 1)
    }

    /// Exact `f(x)`.
    pub fn eval_exact(&self, x: &BigReal) -> Result<BigReal, PiecewiseError> {
        let k = self.piece_index(x)?;
        Ok(self.pieces[k].value_at(x))
    }

    /// Enclosure of `f(x)`; a point interval since evaluation is exact.
    pub fn eval_log(&self, x: &BigReal) -> Result<IntervalReal, PiecewiseError> {
        Ok(IntervalReal::point(self.eval_exact(x)?))
    }

    pub fn is_log_convex(&self) -> bool {
        self.pieces.windows(2).all(|w| w[0].slope <= w[1].slope)
    }

    /// Enclosure of `f(x) / x`.
    pub fn chord_slope(&self, x: &BigReal, prec: Precision) -> Result<IntervalReal, PiecewiseError> {
        if !x.is_positive() {
            return Err(PiecewiseError::Domain(x.to_string()));
        }
        Ok(quotient(&self.eval_exact(x)?, x, prec)?)
    }

    /// Same function with `c` added to every intercept.
    pub fn shifted(&self, c: &BigReal) -> PiecewiseLogLinear {
        let mut out = self.clone();
        for p in &mut out.pieces {
            p.intercept = &p.intercept + c;
        }
        out
    }
}

pub fn format_rational(q: &Rational) -> String {
    if q.denom() == &1.into() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub(crate) mod rational_text {
    use super::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct PieceDoc {
    #[serde(with = "rational_text")]
    slope: Rational,
    intercept: BigReal,
    lo: BigReal,
}

#[derive(Serialize, Deserialize)]
struct FunctionDoc {
    convex: bool,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    strict: bool,
    pieces: Vec<PieceDoc>,
}

impl Serialize for PiecewiseLogLinear {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FunctionDoc {
            convex: self.convexity != Convexity::None,
            strict: self.convexity == Convexity::StrictlyConvex,
            pieces: self
                .pieces
                .iter()
                .map(|p| PieceDoc { slope: p.slope.clone(), intercept: p.intercept.clone(), lo: p.lo.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PiecewiseLogLinear {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = FunctionDoc::deserialize(d)?;
        let convexity = match (doc.convex, doc.strict) {
            (false, _) => Convexity::None,
            (true, false) => Convexity::Convex,
            (true, true) => Convexity::StrictlyConvex,
        };
        let parts = doc.pieces.into_iter().map(|p| (p.slope, p.intercept, p.lo)).collect();
        PiecewiseLogLinear::new(parts, convexity).map_err(serde::de::Error::custom)
    }
}
