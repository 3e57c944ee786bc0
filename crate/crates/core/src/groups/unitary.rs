//! PSU₃(q) on the q³+1 isotropic points of the Hermitian form
//! h(x, y) = x₁ȳ₃ + x₂ȳ₂ + x₃ȳ₁ over GF(q²), with ȳ = y^q.
//!
//! SU₃(q) is generated by its upper and lower unitriangular subgroups. Each
//! is searched exhaustively and generated greedily: candidates are scanned
//! in coordinate order and kept when they enlarge the subgroup so far.

use hashbrown::HashSet;

use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::perm::GeneratorSet;

use super::{induced_permutation, point_index, projective_points, Mat, MatrixGroupSpec};

fn conj(f: &FiniteField, q: u64, x: u32) -> u32 {
    f.pow(x, q)
}

fn hermitian(f: &FiniteField, q: u64, x: &[u32], y: &[u32]) -> u32 {
    let t = |a: u32, b: u32| f.mul(a, conj(f, q, b));
    f.add(f.add(t(x[0], y[2]), t(x[1], y[1])), t(x[2], y[0]))
}

/// Whether g preserves h, i.e. h(e_i g, e_j g) = h(e_i, e_j) for all i, j.
fn is_isometry(f: &FiniteField, q: u64, g: &Mat) -> bool {
    let rows: Vec<Vec<u32>> = (0..3).map(|i| (0..3).map(|j| g.get(i, j)).collect()).collect();
    (0..3).all(|i| {
        (0..3).all(|j| {
            let want = u32::from(i + j == 2);
            hermitian(f, q, &rows[i], &rows[j]) == want
        })
    })
}

fn closure(f: &FiniteField, gens: &[Mat]) -> HashSet<Mat> {
    let mut seen: HashSet<Mat> = HashSet::new();
    let id = Mat::identity(3);
    seen.insert(id.clone());
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.mul(f, g);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen
}

/// Greedy generating set of the unitriangular isometries (upper or lower).
fn unipotent_generators(f: &FiniteField, q: u64, upper: bool) -> Vec<Mat> {
    let n = f.order();
    let mut gens: Vec<Mat> = Vec::new();
    let mut group = closure(f, &gens);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let mut m = Mat::identity(3);
                if upper {
                    m.set(0, 1, a);
                    m.set(0, 2, b);
                    m.set(1, 2, c);
                } else {
                    m.set(1, 0, a);
                    m.set(2, 0, b);
                    m.set(2, 1, c);
                }
                if is_isometry(f, q, &m) && !group.contains(&m) {
                    gens.push(m);
                    group = closure(f, &gens);
                }
            }
        }
    }
    gens
}

/// Normalised isotropic vectors, in the order of the projective points.
pub fn isotropic_points(q: u64) -> Result<Vec<Vec<u32>>> {
    let f = FiniteField::new(q * q)?;
    Ok(projective_points(&f, 3)
        .into_iter()
        .filter(|p| hermitian(&f, q, p, p) == 0)
        .collect())
}

/// PSU₃(q) on its q³+1 isotropic points.
pub fn psu3_generators(q: u64) -> Result<GeneratorSet> {
    MatrixGroupSpec::psu3(q).validate()?;
    if q > 16 {
        return Err(Error::InvalidParameters(format!(
            "PSU3({q}) is too large to construct as a permutation group"
        )));
    }
    let f = FiniteField::new(q * q)?;
    let points = isotropic_points(q)?;
    let index = point_index(&points);
    let mut mats = unipotent_generators(&f, q, true);
    mats.extend(unipotent_generators(&f, q, false));
    let gens = mats
        .iter()
        .map(|m| induced_permutation(&f, &points, &index, m))
        .collect::<Result<Vec<_>>>()?;
    GeneratorSet::new(points.len(), gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::{GroupTable, DEFAULT_CAP};

    #[test]
    fn isotropic_point_count() {
        for q in [3, 4, 5, 7] {
            assert_eq!(isotropic_points(q).unwrap().len() as u64, q * q * q + 1);
        }
    }

    #[test]
    fn psu3_3_order() {
        let g = psu3_generators(3).unwrap();
        let t = GroupTable::enumerate(&g, DEFAULT_CAP).unwrap();
        assert_eq!(t.order(), 6048);
        assert!(t.is_k_transitive(2).unwrap());
    }

    #[test]
    fn q2_is_rejected() {
        assert!(psu3_generators(2).is_err());
    }
}
