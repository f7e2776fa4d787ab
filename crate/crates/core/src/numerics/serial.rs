//! Text form of [`BigReal`].
//!
//! Canonical output is a signed sum of tower terms `n/d*2^(E)` followed by
//! the rational part, e.g. `-32/21*2^(4093)-5/3`. Exponents use the same
//! grammar recursively. Input additionally accepts decimals like `1.5e-3`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::real::{floor_log2, mul_pow2_rat, parse_rational, BigReal, Rational};
use super::{IntervalReal, LogValue, NumericsError};

fn write_rational(f: &mut fmt::Formatter<'_>, q: &Rational) -> fmt::Result {
    if q.denom().is_one() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for t in self.high() {
            if t.coeff.is_negative() {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            write_rational(f, &t.coeff.abs())?;
            write!(f, "*2^({})", t.exp)?;
            first = false;
        }
        let low = self.low();
        if !low.is_zero() {
            if low.is_negative() {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            write_rational(f, &low.abs())?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self) -> NumericsError {
        NumericsError::Parse(self.src.to_string())
    }

    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.src[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn rational_token(&mut self) -> Result<Rational, NumericsError> {
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut i = self.pos;
        while i < bytes.len() {
            let c = bytes[i];
            let exp_sign = (c == b'-' || c == b'+') && i > start && matches!(bytes[i - 1], b'e' | b'E');
            if c.is_ascii_digit() || matches!(c, b'.' | b'/' | b'e' | b'E') || exp_sign {
                i += 1;
            } else {
                break;
            }
        }
        if i == start {
            return Err(self.err());
        }
        self.pos = i;
        parse_rational(&self.src[start..i]).map_err(|_| self.err())
    }

    fn real(&mut self) -> Result<BigReal, NumericsError> {
        let mut high = Vec::new();
        let mut low = Rational::zero();
        let mut first = true;
        loop {
            let negative = if self.eat("-") {
                true
            } else if self.eat("+") || first {
                false
            } else {
                break;
            };
            first = false;
            let mut q = self.rational_token()?;
            if negative {
                q = -q;
            }
            if self.eat("*2^(") {
                let e = self.real()?;
                if !self.eat(")") {
                    return Err(self.err());
                }
                if !e.is_integer() || (!e.is_concrete() && e.is_negative()) {
                    return Err(self.err());
                }
                high.push((q, e));
            } else {
                low += q;
            }
            if !matches!(self.peek(), Some(b'+') | Some(b'-')) {
                break;
            }
        }
        Ok(BigReal::from_parts(high, low))
    }
}

impl FromStr for BigReal {
    type Err = NumericsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { src: s.trim(), pos: 0 };
        let v = p.real()?;
        if p.pos != p.src.len() {
            return Err(p.err());
        }
        Ok(v)
    }
}

impl BigReal {
    /// `Some(k)` when `self == 2^k` exactly.
    pub fn as_pow2_exponent(&self) -> Option<BigReal> {
        if !self.is_positive() {
            return None;
        }
        match (self.high(), self.as_rational()) {
            (_, Some(q)) => {
                let k = floor_log2(q);
                mul_pow2_rat(q, -k).is_one().then(|| BigReal::from_int(k))
            }
            ([t], None) if self.low().is_zero() && t.coeff.is_one() => Some(t.exp.clone()),
            _ => None,
        }
    }
}

/// JSON form: a string, or `{"pow2": k}` for exact powers of two.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
pub enum BigRealRepr {
    Pow2 { pow2: Pow2Exponent },
    Text(String),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
pub enum Pow2Exponent {
    Int(i64),
    Text(String),
}

impl From<&BigReal> for BigRealRepr {
    fn from(x: &BigReal) -> Self {
        match x.as_pow2_exponent() {
            Some(k) => match k.as_bigint().and_then(|n| n.to_i64()) {
                Some(n) => BigRealRepr::Pow2 { pow2: Pow2Exponent::Int(n) },
                None => BigRealRepr::Pow2 { pow2: Pow2Exponent::Text(k.to_string()) },
            },
            None => BigRealRepr::Text(x.to_string()),
        }
    }
}

impl TryFrom<BigRealRepr> for BigReal {
    type Error = NumericsError;

    fn try_from(r: BigRealRepr) -> Result<Self, Self::Error> {
        match r {
            BigRealRepr::Text(s) => s.parse(),
            BigRealRepr::Pow2 { pow2 } => {
                let k = match pow2 {
                    Pow2Exponent::Int(n) => BigReal::from_bigint(BigInt::from(n)),
                    Pow2Exponent::Text(s) => s.parse()?,
                };
                BigReal::pow2(&k)
            }
        }
    }
}

impl Serialize for BigReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        BigRealRepr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for BigReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = BigRealRepr::deserialize(d)?;
        BigReal::try_from(repr).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct IntervalDoc {
    lo: BigReal,
    hi: BigReal,
}

impl Serialize for IntervalReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        IntervalDoc { lo: self.lo().clone(), hi: self.hi().clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntervalReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = IntervalDoc::deserialize(d)?;
        if doc.lo > doc.hi {
            return Err(serde::de::Error::custom("interval endpoints out of order"));
        }
        Ok(IntervalReal::new(doc.lo, doc.hi))
    }
}

/// `NegInfinity` is written as the string `"-inf"`.
impl Serialize for LogValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            LogValue::NegInfinity => s.serialize_str("-inf"),
            LogValue::Finite(iv) => iv.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for LogValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Doc {
            Tag(String),
            Finite(IntervalReal),
        }
        match Doc::deserialize(d)? {
            Doc::Tag(t) if t == "-inf" => Ok(LogValue::NegInfinity),
            Doc::Tag(t) => Err(serde::de::Error::custom(format!("unexpected log value {t:?}"))),
            Doc::Finite(iv) => Ok(LogValue::Finite(iv)),
        }
    }
}
