//! Exact rational helpers: parsing, certified square roots and enclosures.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Parses `a`, `-a` or `a/b`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    (!d.is_zero()).then(|| BigRational::new(n, d))
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Serialises a rational as its exact string form.
pub fn serialize_rational<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// Values serialised with big integers as decimal strings, through any
/// nesting of tuples and vectors.
pub trait Decimal {
    fn ser<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error>;
}

struct AsDecimal<'a, T: ?Sized>(&'a T);

impl<T: Decimal + ?Sized> Serialize for AsDecimal<'_, T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.ser(s)
    }
}

impl Decimal for BigInt {
    fn ser<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Decimal for BigRational {
    fn ser<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Decimal for &str {
    fn ser<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self)
    }
}

impl<A: Decimal, B: Decimal> Decimal for (A, B) {
    fn ser<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        (AsDecimal(&self.0), AsDecimal(&self.1)).serialize(s)
    }
}

impl<A: Decimal, B: Decimal, C: Decimal> Decimal for (A, B, C) {
    fn ser<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        (AsDecimal(&self.0), AsDecimal(&self.1), AsDecimal(&self.2)).serialize(s)
    }
}

impl<T: Decimal> Decimal for Vec<T> {
    fn ser<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter().map(AsDecimal))
    }
}

impl<T: Decimal> Decimal for Option<T> {
    fn ser<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Some(x) => s.serialize_some(&AsDecimal(x)),
            None => s.serialize_none(),
        }
    }
}

/// `serialize_with` target for [`Decimal`] values.
pub fn decimal<T: Decimal, S: Serializer>(x: &T, s: S) -> Result<S::Ok, S::Error> {
    x.ser(s)
}

/// A closed interval `[lo, hi]` with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Enclosure {
    pub fn point(x: BigRational) -> Self {
        Self {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn exact(&self) -> Option<&BigRational> {
        self.is_exact().then_some(&self.lo)
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let (a, b) = (&self.lo * c, &self.hi * c);
        if c.is_negative() {
            Self { lo: b, hi: a }
        } else {
            Self { lo: a, hi: b }
        }
    }

    pub fn midpoint(&self) -> f64 {
        to_f64(&((&self.lo + &self.hi) / int(2)))
    }

    /// Certainly below `x`.
    pub fn lt(&self, x: &BigRational) -> bool {
        &self.hi < x
    }

    /// Certainly above `x`.
    pub fn gt(&self, x: &BigRational) -> bool {
        &self.lo > x
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact() {
            Some(x) => write!(f, "{x}"),
            None => write!(f, "[{:.9}, {:.9}]", to_f64(&self.lo), to_f64(&self.hi)),
        }
    }
}

impl Serialize for Enclosure {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Enclosure", 3)?;
        match self.exact() {
            Some(x) => {
                st.serialize_field("exact", &x.to_string())?;
                st.serialize_field("approx", &to_f64(x))?;
            }
            None => {
                st.serialize_field(
                    "interval",
                    &[
                        decimal_string(&self.lo, INTERVAL_DIGITS, false),
                        decimal_string(&self.hi, INTERVAL_DIGITS, true),
                    ],
                )?;
                st.serialize_field("approx", &self.midpoint())?;
            }
        }
        st.end()
    }
}

/// Decimal places of the interval endpoints in serialized enclosures.
pub const INTERVAL_DIGITS: u32 = 12;

/// `x` with `digits` decimal places, rounded down (or up), so that an
/// interval printed this way still contains the exact one.
pub fn decimal_string(x: &BigRational, digits: u32, round_up: bool) -> String {
    let scaled = x * BigRational::from_integer(BigInt::from(10u32).pow(digits));
    let n = if round_up { scaled.ceil() } else { scaled.floor() }.to_integer();
    let neg = n.is_negative();
    let s = n.abs().to_string();
    let d = digits as usize;
    let s = format!("{s:0>width$}", width = d + 1);
    let (int_part, frac) = s.split_at(s.len() - d);
    let sign = if neg { "-" } else { "" };
    if d == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac}")
    }
}

/// Enclosure of `√x` for `x ≥ 0` whose width is at most `2^-bits` (exact
/// when `x` is the square of a rational).
pub fn sqrt_enclosure(x: &BigRational, bits: u32) -> Enclosure {
    assert!(!x.is_negative(), "square root of a negative number");
    let (n, d) = (x.numer(), x.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    if &(&rn * &rn) == n && &(&rd * &rd) == d {
        return Enclosure::point(BigRational::new(rn, rd));
    }
    // √(n/d) = √(n·d·4^bits) / (d·2^bits)
    let scale = BigInt::one() << bits;
    let radicand = n * d * &scale * &scale;
    let r = radicand.sqrt();
    let den = d * &scale;
    Enclosure {
        lo: BigRational::new(r.clone(), den.clone()),
        hi: BigRational::new(r + 1, den),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("5/432"), Some(rat(5, 432)));
        assert_eq!(parse_rational("-3"), Some(int(-3)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn square_roots() {
        assert_eq!(sqrt_enclosure(&rat(9, 4), 20), Enclosure::point(rat(3, 2)));
        let e = sqrt_enclosure(&int(2), 30);
        assert!(&e.lo * &e.lo < int(2) && &e.hi * &e.hi > int(2));
        assert!(e.width() <= rat(1, 1 << 30));
    }

    #[test]
    fn decimal_rounding() {
        assert_eq!(decimal_string(&rat(1, 3), 4, false), "0.3333");
        assert_eq!(decimal_string(&rat(1, 3), 4, true), "0.3334");
        assert_eq!(decimal_string(&rat(-1, 3), 4, false), "-0.3334");
        assert_eq!(decimal_string(&rat(-1, 3), 4, true), "-0.3333");
        assert_eq!(decimal_string(&int(12), 2, false), "12.00");
        assert_eq!(decimal_string(&rat(7, 2), 0, true), "4");
    }
}
