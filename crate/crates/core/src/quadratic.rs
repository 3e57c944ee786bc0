//! Exact arithmetic in multiquadratic fields: finite sums `Σ s_D·√D` with
//! rational `s_D` and distinct squarefree `D` (`D = 1` is the rational part).
//! For `D < 0`, `√D` means `i·√|D|`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::rational::{int, sqrt_enclosure, Enclosure};

/// Writes `n = k²·m` with `m` squarefree; returns `(k, m)`.
pub fn squarefree_part(n: i64) -> (i64, i64) {
    assert!(n != 0, "zero radicand");
    let sign = n.signum();
    let mut m = n.unsigned_abs();
    let mut k = 1u64;
    let mut p = 2u64;
    while p * p <= m {
        while m % (p * p) == 0 {
            m /= p * p;
            k *= p;
        }
        p += 1;
    }
    (k as i64, sign * m as i64)
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct QuadSum(BTreeMap<i64, BigRational>);

impl QuadSum {
    pub fn rational(r: BigRational) -> Self {
        Self::term(r, 1)
    }

    /// `s·√d` for any nonzero integer `d`.
    pub fn term(s: BigRational, d: i64) -> Self {
        let (k, m) = squarefree_part(d);
        let mut map = BTreeMap::new();
        let s = s * int(k);
        if !s.is_zero() {
            map.insert(m, s);
        }
        Self(map)
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.0.len() {
            0 => Some(BigRational::zero()),
            1 => self.0.get(&1).cloned(),
            _ => None,
        }
    }

    pub fn is_real(&self) -> bool {
        self.0.keys().all(|&d| d > 0)
    }

    pub fn conj(&self) -> Self {
        Self(
            self.0
                .iter()
                .map(|(&d, s)| (d, if d < 0 { -s } else { s.clone() }))
                .collect(),
        )
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self(self.0.iter().map(|(&d, s)| (d, s * c)).collect())
    }

    fn add_term(&mut self, d: i64, s: BigRational) {
        let e = self.0.entry(d).or_insert_with(BigRational::zero);
        *e += s;
        if e.is_zero() {
            self.0.remove(&d);
        }
    }

    /// Certified real enclosure, or `None` if the value is not real.
    pub fn enclosure(&self, bits: u32) -> Option<Enclosure> {
        if !self.is_real() {
            return None;
        }
        let mut lo = BigRational::zero();
        let mut hi = BigRational::zero();
        for (&d, s) in &self.0 {
            let e = sqrt_enclosure(&int(d), bits).scale(s);
            lo += e.lo;
            hi += e.hi;
        }
        Some(Enclosure { lo, hi })
    }

    pub fn approx(&self) -> Option<f64> {
        self.enclosure(60).map(|e| e.midpoint())
    }
}

impl Add for &QuadSum {
    type Output = QuadSum;
    fn add(self, rhs: &QuadSum) -> QuadSum {
        let mut out = self.clone();
        for (&d, s) in &rhs.0 {
            out.add_term(d, s.clone());
        }
        out
    }
}

impl Sub for &QuadSum {
    type Output = QuadSum;
    fn sub(self, rhs: &QuadSum) -> QuadSum {
        self + &(-rhs)
    }
}

impl Neg for &QuadSum {
    type Output = QuadSum;
    fn neg(self) -> QuadSum {
        self.scale(&-BigRational::one())
    }
}

impl Mul for &QuadSum {
    type Output = QuadSum;
    fn mul(self, rhs: &QuadSum) -> QuadSum {
        let mut out = QuadSum::zero();
        for (&a, s) in &self.0 {
            for (&b, t) in &rhs.0 {
                // √a·√b = √(ab), except i·i = −1 when both are negative
                let sign = if a < 0 && b < 0 { -1 } else { 1 };
                let term = QuadSum::term(s * t * int(sign), a * b);
                for (d, c) in term.0 {
                    out.add_term(d, c);
                }
            }
        }
        out
    }
}

impl std::iter::Sum for QuadSum {
    fn sum<I: Iterator<Item = QuadSum>>(iter: I) -> QuadSum {
        iter.fold(QuadSum::zero(), |acc, x| &acc + &x)
    }
}

impl fmt::Display for QuadSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // rational part first
        let terms = self.0.get_key_value(&1).into_iter().chain(self.0.iter().filter(|(&d, _)| d != 1));
        for (i, (&d, s)) in terms.enumerate() {
            if i > 0 && !s.is_negative() {
                write!(f, "+")?;
            }
            if d == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}*sqrt({d})")?;
            }
        }
        Ok(())
    }
}

impl Serialize for QuadSum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn squarefree() {
        assert_eq!(squarefree_part(12), (2, 3));
        assert_eq!(squarefree_part(-7), (1, -7));
        assert_eq!(squarefree_part(-45), (3, -5));
        assert_eq!(squarefree_part(1), (1, 1));
    }

    #[test]
    fn products_and_conjugates() {
        // (−1+√−7)/2 · (−1−√−7)/2 = 2
        let a = &QuadSum::rational(rat(-1, 2)) + &QuadSum::term(rat(1, 2), -7);
        assert_eq!((&a * &a.conj()).as_rational(), Some(int(2)));
        // √−1·√−1 = −1 and √2·√8 = 4
        let i = QuadSum::term(int(1), -1);
        assert_eq!((&i * &i).as_rational(), Some(int(-1)));
        let p = &QuadSum::term(int(1), 2) * &QuadSum::term(int(1), 8);
        assert_eq!(p.as_rational(), Some(int(4)));
        assert!((&a - &a).is_zero());
        assert_eq!(a.to_string(), "-1/2+1/2*sqrt(-7)");
    }

    #[test]
    fn enclosures() {
        let x = &QuadSum::rational(int(1)) + &QuadSum::term(int(1), 5);
        let e = x.enclosure(40).unwrap();
        let phi2 = 1.0 + 5f64.sqrt();
        assert!(e.midpoint() - phi2 < 1e-9 && phi2 - e.midpoint() < 1e-9);
        assert!(QuadSum::term(int(1), -3).enclosure(10).is_none());
    }
}
