//! Small finite fields with log/antilog multiplication tables.
//!
//! An element of `GF(p^k)` is stored as the integer `Σ cᵢ pⁱ` whose base-`p`
//! digits are the coefficients of its polynomial representative. For each
//! `(p, k)` the defining relation `x^k = c₀ + c₁x + … + c_{k-1}x^{k-1}` is
//! the first one, counting `(c₀, …, c_{k-1})` as a base-`p` number, for
//! which `x` generates the multiplicative group. Tables are therefore
//! reproducible across runs and platforms. For prime fields the generator
//! is the least primitive root.

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u32,
    k: u32,
    q: u32,
    /// `x^k = Σ reduction[i] x^i`.
    reduction: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// Factors `q` as `p^k`, if it is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let mut rest = q;
    let mut k = 0;
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

impl FiniteField {
    pub fn new(q: u64) -> Result<Self> {
        if q > MAX_ORDER {
            return Err(Error::InvalidParameters(format!(
                "field order {q} exceeds {MAX_ORDER}"
            )));
        }
        let (p, k) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        let (p, q) = (p as u32, q as u32);
        let mut candidate = vec![0u32; k as usize];
        loop {
            if let Some(field) = Self::try_polynomial(p, k, q, &candidate) {
                return Ok(field);
            }
            // next coefficient vector in base-p counting order
            let mut i = 0;
            loop {
                candidate[i] += 1;
                if candidate[i] < p {
                    break;
                }
                candidate[i] = 0;
                i += 1;
                if i == candidate.len() {
                    unreachable!("a primitive polynomial always exists");
                }
            }
        }
    }

    /// Builds the tables if `x^k = Σ low[i] x^i` defines a field in which
    /// `x` has multiplicative order `q - 1`.
    fn try_polynomial(p: u32, k: u32, q: u32, low: &[u32]) -> Option<Self> {
        if low[0] == 0 {
            return None;
        }
        let n = q as usize - 1;
        let mut exp = Vec::with_capacity(2 * n);
        let mut log = vec![u32::MAX; q as usize];
        let mut digits = vec![0u32; k as usize];
        digits[0] = 1;
        for i in 0..n {
            let e = to_int(&digits, p);
            if log[e as usize] != u32::MAX {
                return None;
            }
            log[e as usize] = i as u32;
            exp.push(e);
            // multiply by x
            let top = digits[k as usize - 1];
            for j in (1..k as usize).rev() {
                digits[j] = digits[j - 1];
            }
            digits[0] = 0;
            for j in 0..k as usize {
                digits[j] = (digits[j] + top * low[j]) % p;
            }
        }
        if to_int(&digits, p) != 1 {
            return None;
        }
        let again = exp.clone();
        exp.extend(again);
        Some(Self {
            p,
            k,
            q,
            reduction: low.to_vec(),
            exp,
            log,
        })
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    /// Coefficients `c` with `x^k = Σ cᵢ xⁱ` in this field's construction.
    pub fn defining_relation(&self) -> &[u32] {
        &self.reduction
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }

    /// The generator of the multiplicative group used for the log tables.
    pub fn primitive_element(&self) -> u32 {
        self.exp[1 % (self.q as usize - 1).max(1)]
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let n = self.q - 1;
        Some(self.exp[((n - self.log[a as usize]) % n) as usize])
    }

    pub fn div(&self, a: u32, b: u32) -> Option<u32> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.q - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (e % n)) % n) as usize]
    }

    /// Discrete logarithm to the base [`primitive_element`](Self::primitive_element).
    pub fn log(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    /// `g^i` for the primitive element `g`.
    pub fn exp(&self, i: u64) -> u32 {
        self.exp[(i % (self.q as u64 - 1)) as usize]
    }

    /// The Frobenius map `a ↦ a^p`.
    pub fn frobenius(&self, a: u32) -> u32 {
        self.pow(a, self.p as u64)
    }
}

fn to_int(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf2_has_characteristic_two() {
        let f = FiniteField::new(2).unwrap();
        assert_eq!(f.add(1, 1), 0);
        assert_eq!(f.mul(1, 1), 1);
    }

    #[test]
    fn gf9_prime_subfield_is_fixed_by_cubing() {
        let f = FiniteField::new(9).unwrap();
        let fixed = f.elements().filter(|&x| f.pow(x, 3) == x).count();
        assert_eq!(fixed, 3);
    }

    /// Schoolbook product of base-p digit vectors reduced with the field's
    /// defining relation; independent of the log tables.
    fn slow_mul(f: &FiniteField, a: u32, b: u32) -> u32 {
        let (p, k) = (f.characteristic(), f.degree() as usize);
        let digits = |mut x: u32| {
            (0..k)
                .map(|_| {
                    let d = x % p;
                    x /= p;
                    d
                })
                .collect::<Vec<_>>()
        };
        let (da, db) = (digits(a), digits(b));
        let mut prod = vec![0u32; 2 * k];
        for i in 0..k {
            for j in 0..k {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        let rel = f.defining_relation();
        for top in (k..2 * k).rev() {
            let c = std::mem::take(&mut prod[top]);
            for (j, &r) in rel.iter().enumerate() {
                prod[top - k + j] = (prod[top - k + j] + c * r) % p;
            }
        }
        prod[..k].iter().rev().fold(0, |acc, &d| acc * p + d)
    }

    #[test]
    fn log_tables_agree_with_schoolbook_multiplication() {
        for q in [4, 8, 9, 25, 27, 49, 64] {
            let f = FiniteField::new(q).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), slow_mul(&f, a, b), "q={q} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn gf8_multiplicative_group_is_cyclic_of_order_7() {
        let f = FiniteField::new(8).unwrap();
        let order = |x: u32| {
            let mut acc = x;
            let mut e = 1;
            while acc != 1 {
                acc = slow_mul(&f, acc, x);
                e += 1;
            }
            e
        };
        let orders: Vec<u32> = (1..8).map(order).collect();
        assert!(orders.contains(&7));
        assert!(orders.iter().all(|o| 7 % o == 0));
    }

    #[test]
    fn non_prime_powers_are_rejected() {
        assert!(matches!(FiniteField::new(6), Err(Error::NotPrimePower(6))));
        assert!(matches!(FiniteField::new(1), Err(Error::NotPrimePower(1))));
        assert!(FiniteField::new(MAX_ORDER * 2).is_err());
        assert!(FiniteField::new(MAX_ORDER).is_ok());
    }

    fn check_axioms(q: u64) {
        let f = FiniteField::new(q).unwrap();
        let n = f.order();
        for a in 0..n {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            for b in 0..n {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                // Frobenius is additive
                assert_eq!(
                    f.frobenius(f.add(a, b)),
                    f.add(f.frobenius(a), f.frobenius(b))
                );
                for c in 0..n {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn field_axioms_hold_exhaustively() {
        for q in [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32, 49, 64, 81] {
            check_axioms(q);
        }
    }
}
