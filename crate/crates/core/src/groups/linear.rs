//! PSL_n(q) and PGL_n(q) on the points of the projective space.
//!
//! SL_n(q) is generated by the root elements x₁₂(1), x₂₁(1), the torus
//! element diag(ω, ω⁻¹, 1, …, 1) for a primitive ω, and the monomial matrix
//! e_i ↦ e_{i+1}, e_n ↦ (−1)^(n−1) e₁ of determinant 1.

use crate::error::Result;
use crate::field::FiniteField;
use crate::perm::GeneratorSet;

use super::{induced_permutation, point_index, projective_points, Mat, MatrixGroupSpec};

fn sl_matrices(f: &FiniteField, n: usize) -> Vec<Mat> {
    let w = f.primitive_element();
    let mut x12 = Mat::identity(n);
    x12.set(0, 1, 1);
    let mut x21 = Mat::identity(n);
    x21.set(1, 0, 1);
    let mut torus = Mat::identity(n);
    torus.set(0, 0, w);
    torus.set(1, 1, f.inv(w).unwrap());
    let mut cycle = Mat { n, a: vec![0; n * n] };
    for i in 0..n - 1 {
        cycle.set(i, i + 1, 1);
    }
    // the n-cycle has sign (−1)^(n−1)
    cycle.set(n - 1, 0, if n % 2 == 0 { f.neg(1) } else { 1 });
    vec![x12, x21, torus, cycle]
}

fn action(n: usize, q: u64, extra_torus: bool) -> Result<GeneratorSet> {
    let f = FiniteField::new(q)?;
    let points = projective_points(&f, n);
    let index = point_index(&points);
    let mut mats = sl_matrices(&f, n);
    if extra_torus {
        let mut d = Mat::identity(n);
        d.set(0, 0, f.primitive_element());
        mats.push(d);
    }
    let gens = mats
        .iter()
        .map(|m| induced_permutation(&f, &points, &index, m))
        .collect::<Result<Vec<_>>>()?;
    GeneratorSet::new(points.len(), gens)
}

/// PSL_n(q) on the (qⁿ−1)/(q−1) points of PG(n−1, q).
pub fn psl_generators(n: usize, q: u64) -> Result<GeneratorSet> {
    MatrixGroupSpec::psl(n as u32, q).validate()?;
    action(n, q, false)
}

/// PGL_n(q) on the points of PG(n−1, q).
pub fn pgl_generators(n: usize, q: u64) -> Result<GeneratorSet> {
    MatrixGroupSpec::pgl(n as u32, q).validate()?;
    action(n, q, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::{GroupTable, DEFAULT_CAP};

    fn order(g: &GeneratorSet) -> usize {
        GroupTable::enumerate(g, DEFAULT_CAP).unwrap().order()
    }

    #[test]
    fn small_orders() {
        assert_eq!(order(&psl_generators(2, 7).unwrap()), 168);
        assert_eq!(order(&psl_generators(2, 4).unwrap()), 60);
        assert_eq!(order(&psl_generators(2, 9).unwrap()), 360);
        assert_eq!(order(&pgl_generators(2, 5).unwrap()), 120);
        assert_eq!(psl_generators(3, 4).unwrap().degree, 21);
    }

    #[test]
    fn excluded_parameters() {
        assert!(psl_generators(2, 2).is_err());
        assert!(psl_generators(2, 3).is_err());
        assert!(psl_generators(1, 5).is_err());
        assert!(psl_generators(2, 6).is_err());
    }
}
