//! Integer polynomials: exact gcds, square-free decomposition and real-root
//! isolation by Sturm sequences.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A polynomial with integer coefficients, lowest degree first, with no
/// trailing zero coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has degree 0 here.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn lead(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divides out the content, keeping the sign of the leading coefficient.
    pub fn primitive(&self) -> Self {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        Self::new(self.coeffs.iter().map(|x| x / &c).collect())
    }

    fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    /// `lc(b)^(deg a − deg b + 1) · a mod b`.
    pub fn pseudo_rem(&self, b: &IntPoly) -> Self {
        assert!(!b.is_zero(), "pseudo-division by zero polynomial");
        let mut r = self.coeffs.clone();
        let db = b.degree();
        let lb = b.lead();
        if self.is_zero() || self.degree() < db {
            return self.clone();
        }
        let steps = self.degree() - db + 1;
        for _ in 0..steps {
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
            if r.len() < db + 1 {
                for c in &mut r {
                    *c *= &lb;
                }
                continue;
            }
            let top = r.len() - 1;
            let lr = r[top].clone();
            for c in r.iter_mut() {
                *c *= &lb;
            }
            let shift = top - db;
            for (i, bc) in b.coeffs.iter().enumerate() {
                r[shift + i] -= &lr * bc;
            }
            r.pop();
        }
        Self::new(r)
    }

    /// Quotient by a monic divisor; `None` unless the division is exact.
    pub fn div_exact_monic(&self, b: &IntPoly) -> Option<Self> {
        assert!(b.lead().is_one(), "divisor must be monic");
        if self.is_zero() {
            return Some(Self::zero());
        }
        let db = b.degree();
        if self.degree() < db {
            return None;
        }
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); self.degree() - db + 1];
        for k in (0..q.len()).rev() {
            let c = r[k + db].clone();
            if !c.is_zero() {
                for (i, bc) in b.coeffs.iter().enumerate() {
                    r[k + i] -= &c * bc;
                }
            }
            q[k] = c;
        }
        r.iter().all(|c| c.is_zero()).then(|| Self::new(q))
    }

    /// Greatest common divisor up to a unit, computed by the primitive
    /// remainder sequence and normalised to a positive leading coefficient.
    pub fn gcd(&self, other: &IntPoly) -> Self {
        let (mut a, mut b) = (self.primitive(), other.primitive());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        if a.lead().is_negative() {
            a.neg()
        } else {
            a
        }
    }

    /// Monic square-free part of a monic polynomial.
    pub fn squarefree_monic(&self) -> Self {
        assert!(self.lead().is_one(), "squarefree_monic expects a monic input");
        if self.degree() == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        // g divides a monic integer polynomial and is primitive, hence monic
        self.div_exact_monic(&g)
            .expect("gcd divides the polynomial")
    }

    /// Square-free layers `s₀, s₁, …` of a monic polynomial: `s_k` is the
    /// product of the distinct roots of multiplicity greater than `k`.
    pub fn multiplicity_layers(&self) -> Vec<IntPoly> {
        let mut out = Vec::new();
        let mut h = self.clone();
        while h.degree() > 0 {
            let s = h.squarefree_monic();
            h = h.div_exact_monic(&s).expect("square-free part divides");
            out.push(s);
        }
        out
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Sign of the value at a rational point, via the homogenised integer
    /// form `b^deg · p(a/b)`.
    pub fn sign_at(&self, x: &BigRational) -> Ordering {
        let (a, b) = (x.numer(), x.denom());
        let mut acc = BigInt::zero();
        let mut bpow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * a + c * &bpow;
            bpow *= b;
        }
        // acc = Σ cᵢ aⁱ b^(deg−i) computed via Horner in a with b-weights
        acc.cmp(&BigInt::zero())
    }

    /// Bound `B` with every real root in `(−B, B)`.
    pub fn root_bound(&self) -> BigInt {
        let lead = self.lead().abs();
        let max = self
            .coeffs
            .iter()
            .take(self.coeffs.len().saturating_sub(1))
            .map(|c| c.abs())
            .max()
            .unwrap_or_default();
        BigInt::one() + max.div_ceil(&lead)
    }

    /// Enclosure of the values on `[lo, hi]` by interval Horner evaluation.
    pub fn eval_interval(&self, lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
        let mut acc = (BigRational::zero(), BigRational::zero());
        for c in self.coeffs.iter().rev() {
            let products = [&acc.0 * lo, &acc.0 * hi, &acc.1 * lo, &acc.1 * hi];
            let min = products.iter().min().unwrap().clone();
            let max = products.iter().max().unwrap().clone();
            let c = BigRational::from_integer(c.clone());
            acc = (min + &c, max + c);
        }
        acc
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{a}*x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{a}*x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Sturm sequence of a square-free polynomial.
#[derive(Clone, Debug)]
pub struct Sturm {
    chain: Vec<IntPoly>,
}

impl Sturm {
    pub fn new(p: &IntPoly) -> Self {
        let mut chain = vec![p.clone(), p.derivative()];
        while !chain.last().unwrap().is_zero() && chain.last().unwrap().degree() > 0 {
            let n = chain.len();
            let b = &chain[n - 1];
            let a = &chain[n - 2];
            // prem multiplies by lc(b)^δ; undo a negative factor so the
            // sign pattern is that of the true remainder
            let delta = a.degree() - b.degree() + 1;
            let mut r = a.pseudo_rem(b);
            if b.lead().is_negative() && delta % 2 == 1 {
                r = r.neg();
            }
            let r = r.neg();
            let c = r.content();
            let r = if c.is_zero() {
                r
            } else {
                IntPoly::new(r.coeffs.iter().map(|x| x / &c).collect())
            };
            if r.is_zero() {
                break;
            }
            chain.push(r);
        }
        chain.retain(|p| !p.is_zero());
        Self { chain }
    }

    pub fn variations(&self, x: &BigRational) -> usize {
        let mut last = Ordering::Equal;
        let mut count = 0;
        for p in &self.chain {
            let s = p.sign_at(x);
            if s == Ordering::Equal {
                continue;
            }
            if last != Ordering::Equal && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Number of distinct real roots in `(lo, hi]`.
    pub fn count(&self, lo: &BigRational, hi: &BigRational) -> usize {
        self.variations(lo) - self.variations(hi)
    }
}

/// An isolated real root of a monic square-free integer polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealRoot {
    /// The root is an integer (the only possible rational roots of a monic
    /// integer polynomial).
    Integer(BigInt),
    /// The unique root in the half-open interval `(lo, hi]`, known to be
    /// irrational.
    Irrational { lo: BigRational, hi: BigRational },
}

impl RealRoot {
    pub fn lower(&self) -> BigRational {
        match self {
            RealRoot::Integer(n) => BigRational::from_integer(n.clone()),
            RealRoot::Irrational { lo, .. } => lo.clone(),
        }
    }

    pub fn upper(&self) -> BigRational {
        match self {
            RealRoot::Integer(n) => BigRational::from_integer(n.clone()),
            RealRoot::Irrational { hi, .. } => hi.clone(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, RealRoot::Integer(_))
    }

    /// Halves the enclosure of an irrational root of `p`.
    pub fn bisect(&mut self, sturm: &Sturm) {
        if let RealRoot::Irrational { lo, hi } = self {
            let mid = (&*lo + &*hi) / BigRational::from_integer(2.into());
            if sturm.count(lo, &mid) == 1 {
                *hi = mid;
            } else {
                *lo = mid;
            }
        }
    }

    /// Refines until the enclosure is narrower than `width`.
    pub fn refine(&mut self, sturm: &Sturm, width: &BigRational) {
        while let RealRoot::Irrational { lo, hi } = self {
            if &(&*hi - &*lo) < width {
                break;
            }
            self.bisect(sturm);
        }
    }
}

/// Isolates all real roots of a monic square-free integer polynomial, in
/// increasing order. Returns the roots and the Sturm sequence used.
pub fn isolate_real_roots(p: &IntPoly) -> (Vec<RealRoot>, Sturm) {
    let sturm = Sturm::new(p);
    let mut out = Vec::new();
    if p.degree() == 0 {
        return (out, sturm);
    }
    let b = BigRational::from_integer(p.root_bound());
    let mut stack = vec![(-b.clone(), b)];
    let two = BigRational::from_integer(2.into());
    let one = BigRational::one();
    // process intervals left to right
    while let Some((lo, hi)) = stack.pop() {
        let n = sturm.count(&lo, &hi);
        if n == 0 {
            continue;
        }
        if n == 1 && &hi - &lo < one {
            // at most one integer lies in (lo, hi]
            let k = hi.floor();
            if k > lo && p.sign_at(&k) == Ordering::Equal {
                out.push(RealRoot::Integer(k.to_integer()));
            } else {
                out.push(RealRoot::Irrational { lo, hi });
            }
            continue;
        }
        let mid = (&lo + &hi) / &two;
        stack.push((mid.clone(), hi));
        stack.push((lo, mid));
    }
    (out, sturm)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn gcd_of_shared_factor() {
        // (x−1)(x+2) and (x−1)(x−3)
        let a = IntPoly::from_i64(&[-2, 1, 1]);
        let b = IntPoly::from_i64(&[3, -4, 1]);
        assert_eq!(a.gcd(&b), IntPoly::from_i64(&[-1, 1]));
    }

    #[test]
    fn squarefree_and_layers() {
        // (x−1)²(x+1)³ x
        let p = IntPoly::from_i64(&[0, 1, 1, -2, -2, 1, 1]);
        assert_eq!(p.squarefree_monic(), IntPoly::from_i64(&[0, -1, 0, 1]));
        let layers = p.multiplicity_layers();
        assert_eq!(layers.len(), 3);
        assert_eq!(layers[1], IntPoly::from_i64(&[-1, 0, 1]));
        assert_eq!(layers[2], IntPoly::from_i64(&[1, 1]));
    }

    #[test]
    fn isolates_integer_and_irrational_roots() {
        // (x − 2)(x² − 5)
        let p = IntPoly::from_i64(&[10, -5, -2, 1]);
        let (roots, sturm) = isolate_real_roots(&p);
        assert_eq!(roots.len(), 3);
        assert!(matches!(&roots[1], RealRoot::Integer(k) if *k == 2.into()));
        let mut s5 = roots[2].clone();
        s5.refine(&sturm, &BigRational::new(1.into(), 1000.into()));
        let (lo, hi) = (s5.lower(), s5.upper());
        assert!(&lo * &lo < r(5) && &hi * &hi >= r(5));
        assert!(roots[0].upper() < r(0));
    }

    #[test]
    fn roots_at_dyadic_midpoints_are_found() {
        // x (x − 1)(x + 1) with bound 2: midpoint 0 is a root
        let p = IntPoly::from_i64(&[0, -1, 0, 1]);
        let (roots, _) = isolate_real_roots(&p);
        let ints: Vec<_> = roots
            .iter()
            .map(|r| match r {
                RealRoot::Integer(k) => k.clone(),
                _ => panic!("all roots are integers"),
            })
            .collect();
        assert_eq!(ints, vec![(-1).into(), 0.into(), 1.into()]);
    }

    #[test]
    fn sign_matches_exact_evaluation() {
        let p = IntPoly::from_i64(&[10, -5, -2, 1]);
        for (n, d) in [(7, 3), (-9, 4), (5, 2), (0, 1)] {
            let x = BigRational::new(n.into(), d.into());
            assert_eq!(p.sign_at(&x), p.eval(&x).cmp(&BigRational::zero()));
        }
    }
}
