//! Permutations of `{0, …, n-1}` acting on the right, and generator sets.

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

/// A permutation stored as its image array. Points are acted on from the
/// right, so `a.then(&b)` applies `a` first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Self {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from its image array, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n {
                return Err(Error::InvalidParameters(format!(
                    "image {x} out of range for degree {n}"
                )));
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidParameters(format!(
                    "point {x} is hit twice; not a bijection"
                )));
            }
        }
        Ok(Self { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        Self { images }
    }

    /// Builds a permutation of the given degree from disjoint cycles of
    /// 0-based points.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (i, &p) in cycle.iter().enumerate() {
                if p >= degree {
                    return Err(Error::InvalidParameters(format!(
                        "point {} out of range for degree {degree}",
                        p + 1
                    )));
                }
                if std::mem::replace(&mut touched[p], true) {
                    return Err(Error::InvalidParameters(format!(
                        "point {} appears twice in the cycle decomposition",
                        p + 1
                    )));
                }
                images[p] = cycle[(i + 1) % cycle.len()] as u32;
            }
        }
        Ok(Self { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn image(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self
                .images
                .iter()
                .map(|&x| other.images[x as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn fixed_points(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &x)| i as u32 == x)
            .count()
    }

    pub fn is_derangement(&self) -> bool {
        self.fixed_points() == 0
    }

    /// Non-trivial cycles, each starting at its smallest point, ordered by
    /// that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.image(start) == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut p = self.image(start);
            while p != start {
                seen[p] = true;
                cycle.push(p);
                p = self.image(p);
            }
            out.push(cycle);
        }
        out
    }

    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1u64, |acc, c| acc.lcm(&(c.len() as u64)))
    }

    /// Parses disjoint-cycle notation with 1-based points, e.g.
    /// `(1,2,3)(4,5)`. `()` and the empty string give the identity.
    pub fn parse_cycles(degree: usize, text: &str) -> Result<Self> {
        let mut cycles = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::InvalidParameters(format!("expected '(' in {text:?}")))?;
            let close = body
                .find(')')
                .ok_or_else(|| Error::InvalidParameters(format!("unclosed cycle in {text:?}")))?;
            let inner = body[..close].trim();
            rest = body[close + 1..].trim_start();
            if inner.is_empty() {
                continue;
            }
            let mut cycle = Vec::new();
            for tok in inner.split(',') {
                let p: usize = tok.trim().parse().map_err(|_| {
                    Error::InvalidParameters(format!("bad point {:?} in {text:?}", tok.trim()))
                })?;
                if p == 0 || p > degree {
                    return Err(Error::InvalidParameters(format!(
                        "point {p} out of range 1..={degree}"
                    )));
                }
                cycle.push(p - 1);
            }
            cycles.push(cycle);
        }
        Self::from_cycles(degree, &cycles)
    }
}

impl fmt::Display for Permutation {
    /// Disjoint-cycle notation with 1-based points; `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (i, p) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", p + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// A list of generators of a permutation group of a fixed degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    pub degree: usize,
    pub generators: Vec<Permutation>,
}

impl GeneratorSet {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::InvalidParameters(format!(
                "generator of degree {} in a set of degree {degree}",
                g.degree()
            )));
        }
        Ok(Self { degree, generators })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_notation_reads_directly() {
        let p = Permutation::parse_cycles(5, "(1,2)(3,4,5)").unwrap();
        assert_eq!(p.fixed_points(), 0);
        assert_eq!(p.order(), 6);
        assert_eq!(p.to_string(), "(1,2)(3,4,5)");
    }

    #[test]
    fn composition_acts_on_the_right() {
        let a = Permutation::parse_cycles(3, "(1,2)").unwrap();
        let b = Permutation::parse_cycles(3, "(2,3)").unwrap();
        // 1 -> 2 -> 3 under a then b.
        assert_eq!(a.then(&b).image(0), 2);
        assert!(a.then(&a.inverse()).is_identity());
    }

    #[test]
    fn malformed_cycles_are_rejected() {
        assert!(Permutation::parse_cycles(3, "(1,2").is_err());
        assert!(Permutation::parse_cycles(3, "(1,4)").is_err());
        assert!(Permutation::parse_cycles(3, "(1,2)(2,3)").is_err());
        assert!(Permutation::parse_cycles(3, "(1,x)").is_err());
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
    }

    #[test]
    fn identity_prints_as_empty_cycle() {
        assert_eq!(Permutation::identity(4).to_string(), "()");
        assert!(Permutation::parse_cycles(4, "()").unwrap().is_identity());
    }
}
