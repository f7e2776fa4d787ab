use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ConstructionError;
use crate::numerics::{parse_rational, Rational};
use crate::piecewise::format_rational;

/// The slopes `m_0 < m_1 < ... < 0`.
#[derive(Clone, Debug, PartialEq)]
pub enum SlopeSchedule {
    /// `m_n = -c / (n + 1)`.
    Harmonic(Rational),
    /// `m_n = -c q^n` with `0 < q < 1`.
    Geometric(Rational, Rational),
    Explicit(Vec<Rational>),
}

impl SlopeSchedule {
    pub fn harmonic(c: i64) -> SlopeSchedule {
        SlopeSchedule::Harmonic(Rational::from_integer(c.into()))
    }

    /// `m_n`, or `None` past the end of an explicit list.
    pub fn slope(&self, n: usize) -> Option<Rational> {
        match self {
            SlopeSchedule::Harmonic(c) => Some(-c / Rational::from_integer((n + 1).into())),
            SlopeSchedule::Geometric(c, q) => Some(-c * num_traits::pow(q.clone(), n)),
            SlopeSchedule::Explicit(v) => v.get(n).cloned(),
        }
    }

    /// Checks `m_0, ..., m_{len-1}` are negative and strictly increasing and
    /// returns them. Explicit lists are checked in full.
    pub fn validate(&self, len: usize) -> Result<Vec<Rational>, ConstructionError> {
        match self {
            SlopeSchedule::Harmonic(c) | SlopeSchedule::Geometric(c, _) if !c.is_positive() => {
                return Err(ConstructionError::Schedule(format!("scale {} must be positive", format_rational(c))));
            }
            SlopeSchedule::Geometric(_, q) if !(q.is_positive() && *q < Rational::one()) => {
                return Err(ConstructionError::Schedule(format!("ratio {} must lie in (0, 1)", format_rational(q))));
            }
            _ => {}
        }
        let checked = match self {
            SlopeSchedule::Explicit(v) => v.len().max(len),
            _ => len,
        };
        let mut out: Vec<Rational> = Vec::with_capacity(checked);
        for n in 0..checked {
            let m = self
                .slope(n)
                .ok_or_else(|| ConstructionError::Schedule(format!("needs at least {len} slopes, got {n}")))?;
            if !m.is_negative() {
                return Err(ConstructionError::Schedule(format!("m_{n} = {} is not negative", format_rational(&m))));
            }
            if let Some(prev) = out.last() {
                if m <= *prev {
                    return Err(ConstructionError::Schedule(format!(
                        "m_{n} = {} does not exceed m_{} = {}",
                        format_rational(&m),
                        n - 1,
                        format_rational(prev)
                    )));
                }
            }
            out.push(m);
        }
        out.truncate(len);
        Ok(out)
    }
}

impl fmt::Display for SlopeSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlopeSchedule::Harmonic(c) => write!(f, "harmonic:{}", format_rational(c)),
            SlopeSchedule::Geometric(c, q) => write!(f, "geometric:{},{}", format_rational(c), format_rational(q)),
            SlopeSchedule::Explicit(v) => {
                let parts: Vec<String> = v.iter().map(format_rational).collect();
                write!(f, "explicit:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for SlopeSchedule {
    type Err = ConstructionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ConstructionError::Schedule(format!("cannot parse schedule {s:?}"));
        let (kind, args) = s.split_once(':').unwrap_or((s, ""));
        let nums: Vec<Rational> = if args.trim().is_empty() {
            Vec::new()
        } else {
            args.split(',').map(|a| parse_rational(a.trim())).collect::<Result<_, _>>().map_err(|_| bad())?
        };
        match (kind.trim(), nums.as_slice()) {
            ("harmonic", []) => Ok(SlopeSchedule::Harmonic(Rational::one())),
            ("harmonic", [c]) => Ok(SlopeSchedule::Harmonic(c.clone())),
            ("geometric", [c, q]) => Ok(SlopeSchedule::Geometric(c.clone(), q.clone())),
            ("explicit", v) if !v.is_empty() => Ok(SlopeSchedule::Explicit(v.to_vec())),
            _ => Err(bad()),
        }
    }
}

impl Serialize for SlopeSchedule {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SlopeSchedule {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}
