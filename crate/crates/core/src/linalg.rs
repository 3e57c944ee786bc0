//! Exact linear algebra: division-free characteristic polynomials and
//! rational row reduction.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::poly::IntPoly;

/// `det(xI − A)` by Berkowitz's division-free algorithm.
pub fn charpoly(a: &[Vec<BigInt>]) -> IntPoly {
    let n = a.len();
    // coefficients of the leading principal minor's polynomial, highest first
    let mut v: Vec<BigInt> = vec![BigInt::one()];
    for r in 0..n {
        // A_{r+1} = [[A_r, C], [R, a_rr]]
        let mut t = Vec::with_capacity(r + 2);
        t.push(BigInt::one());
        t.push(-a[r][r].clone());
        let mut w: Vec<BigInt> = (0..r).map(|i| a[i][r].clone()).collect();
        for _ in 0..r {
            let rw: BigInt = (0..r).map(|j| &a[r][j] * &w[j]).sum();
            t.push(-rw);
            w = (0..r)
                .map(|i| (0..r).map(|j| &a[i][j] * &w[j]).sum())
                .collect();
        }
        let mut next = vec![BigInt::zero(); r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate().take(i + 1) {
                *slot += &t[i - j] * vj;
            }
        }
        v = next;
    }
    v.reverse();
    IntPoly::new(v)
}

/// Incremental row-echelon basis over the rationals.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    rows: Vec<(usize, Vec<BigRational>)>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[BigRational]) -> Vec<BigRational> {
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            if v[*pivot].is_zero() {
                continue;
            }
            let f = v[*pivot].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &f * r;
                }
            }
        }
        v
    }

    /// Adds `v`; returns whether it was independent of the rows so far.
    pub fn insert(&mut self, v: &[BigRational]) -> bool {
        let mut v = self.reduce(v);
        let Some(pivot) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[pivot].recip();
        for x in v.iter_mut() {
            *x *= &inv;
        }
        // keep the basis fully reduced on pivot columns
        for (_, row) in self.rows.iter_mut() {
            if !row[pivot].is_zero() {
                let f = row[pivot].clone();
                for (x, y) in row.iter_mut().zip(&v) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        self.rows.push((pivot, v));
        true
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }
}

/// Rank of a list of integer vectors over the rationals.
pub fn rank(vectors: &[Vec<i64>]) -> usize {
    let mut basis = EchelonBasis::new();
    for v in vectors {
        basis.insert(&to_rational(v));
    }
    basis.rank()
}

pub fn to_rational(v: &[i64]) -> Vec<BigRational> {
    v.iter()
        .map(|&x| BigRational::from_integer(x.into()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    /// Laplace expansion of det(xI − A) on polynomial entries.
    fn charpoly_by_expansion(a: &[Vec<BigInt>]) -> IntPoly {
        fn det(mat: Vec<Vec<Vec<i64>>>) -> Vec<i64> {
            let n = mat.len();
            if n == 0 {
                return vec![1];
            }
            let mut total = vec![0i64; n + 1];
            for col in 0..n {
                let minor: Vec<Vec<Vec<i64>>> = mat[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(j, _)| j != col)
                            .map(|(_, e)| e.clone())
                            .collect()
                    })
                    .collect();
                let d = det(minor);
                let e = &mat[0][col];
                let sign = if col % 2 == 0 { 1 } else { -1 };
                for (i, ei) in e.iter().enumerate() {
                    for (j, dj) in d.iter().enumerate() {
                        total[i + j] += sign * ei * dj;
                    }
                }
            }
            total
        }
        let n = a.len();
        let mat = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let c: i64 = (-&a[i][j]).try_into().unwrap();
                        if i == j {
                            vec![c, 1]
                        } else {
                            vec![c]
                        }
                    })
                    .collect()
            })
            .collect();
        IntPoly::from_i64(&det(mat))
    }

    #[test]
    fn berkowitz_small_cases() {
        assert_eq!(charpoly(&m(&[])), IntPoly::from_i64(&[1]));
        assert_eq!(charpoly(&m(&[&[3]])), IntPoly::from_i64(&[-3, 1]));
        // [[1,2],[3,4]]: x² − 5x − 2
        assert_eq!(charpoly(&m(&[&[1, 2], &[3, 4]])), IntPoly::from_i64(&[-2, -5, 1]));
    }

    #[test]
    fn berkowitz_agrees_with_expansion() {
        let a = m(&[
            &[2, -1, 0, 3],
            &[1, 0, 4, -2],
            &[0, 5, -3, 1],
            &[7, 1, 1, 0],
        ]);
        assert_eq!(charpoly(&a), charpoly_by_expansion(&a));
    }

    #[test]
    fn rank_and_span() {
        let vs = vec![vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 2]];
        assert_eq!(rank(&vs), 2);
        let mut b = EchelonBasis::new();
        b.insert(&to_rational(&vs[0]));
        b.insert(&to_rational(&vs[1]));
        assert!(b.contains(&to_rational(&[2, -3, -1])));
        assert!(!b.contains(&to_rational(&[0, 0, 1])));
    }
}
