//! Sp₂ₙ(2) acting on quadratic forms.
//!
//! Vectors of V = GF(2)^2n are bitmasks: bit i is e_i and bit n+i is f_i for
//! i < n. The symplectic form is B(x, y) = Σ x_{e_i} y_{f_i} + x_{f_i} y_{e_i}
//! and Q₀(x) = Σ x_{e_i} x_{f_i} is a plus-type form polarising to it. Every
//! form polarising to B is Q_c = Q₀ + B(c, ·) for a unique c ∈ V, and Q_c has
//! plus type exactly when Q₀(c) = 0. Forms are indexed by c, so the action of
//! g is the affine map c ↦ c·g + c_g; its linear part is g itself.
//!
//! The group is generated by the transvections t_v : x ↦ x + B(x, v)·v for
//! v ∈ {e_i, f_i, e_i + e_{i+1}}.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::perm::{GeneratorSet, Permutation};
use crate::table::GroupTable;

fn low_mask(n: usize) -> u32 {
    (1u32 << n) - 1
}

pub fn symplectic_form(n: usize, x: u32, y: u32) -> u32 {
    let m = low_mask(n);
    (((x & m) & (y >> n)) ^ ((x >> n) & (y & m))).count_ones() & 1
}

/// The plus-type form Q₀.
pub fn base_form(n: usize, x: u32) -> u32 {
    ((x & low_mask(n)) & (x >> n)).count_ones() & 1
}

fn transvection(n: usize, v: u32, x: u32) -> u32 {
    if symplectic_form(n, x, v) == 1 {
        x ^ v
    } else {
        x
    }
}

fn transvection_vectors(n: usize) -> Vec<u32> {
    let mut out = Vec::new();
    for i in 0..n {
        out.push(1 << i);
        out.push(1 << (n + i));
    }
    for i in 0..n - 1 {
        out.push((1 << i) | (1 << (i + 1)));
    }
    out
}

fn check_n(n: usize) -> Result<()> {
    if !(2..=4).contains(&n) {
        return Err(Error::InvalidParameters(format!(
            "half-dimension must be between 2 and 4 for a permutation action, got {n}"
        )));
    }
    Ok(())
}

/// Index of the form Q_c ∘ t, for the involution t.
fn form_image(n: usize, t: impl Fn(u32) -> u32, c: u32) -> u32 {
    // f(x) = Q_c(x t) + Q₀(x) is linear; c' is read off the basis
    let f = |x: u32| base_form(n, t(x)) ^ symplectic_form(n, c, t(x)) ^ base_form(n, x);
    let mut out = 0;
    for i in 0..n {
        if f(1 << i) == 1 {
            out |= 1 << (n + i);
        }
        if f(1 << (n + i)) == 1 {
            out |= 1 << i;
        }
    }
    out
}

/// The action on all 2^2n forms polarising to B, indexed by c.
pub fn forms_generators(n: usize) -> Result<GeneratorSet> {
    check_n(n)?;
    let size = 1u32 << (2 * n);
    let gens = transvection_vectors(n)
        .into_iter()
        .map(|v| {
            let images = (0..size)
                .map(|c| form_image(n, |x| transvection(n, v, x), c))
                .collect();
            Permutation::from_images(images)
        })
        .collect::<Result<Vec<_>>>()?;
    GeneratorSet::new(size as usize, gens)
}

/// Indices c of the plus-type (`plus`) or minus-type forms, ascending.
pub fn form_points(n: usize, plus: bool) -> Vec<usize> {
    let want = if plus { 0 } else { 1 };
    (0..1u32 << (2 * n))
        .filter(|&c| base_form(n, c) == want)
        .map(|c| c as usize)
        .collect()
}

fn restrict_gens(all: &GeneratorSet, points: &[usize]) -> Result<GeneratorSet> {
    let mut pos = vec![u32::MAX; all.degree];
    for (i, &p) in points.iter().enumerate() {
        pos[p] = i as u32;
    }
    let gens = all
        .generators
        .iter()
        .map(|g| Permutation::from_images(points.iter().map(|&p| pos[g.image(p)]).collect()))
        .collect::<Result<Vec<_>>>()?;
    GeneratorSet::new(points.len(), gens)
}

/// Actions on the plus-type forms (degree 2ⁿ⁻¹(2ⁿ+1)) and on the minus-type
/// forms (degree 2ⁿ⁻¹(2ⁿ−1)).
pub fn sp2n2_actions(n: usize) -> Result<(GeneratorSet, GeneratorSet)> {
    let all = forms_generators(n)?;
    Ok((
        restrict_gens(&all, &form_points(n, true))?,
        restrict_gens(&all, &form_points(n, false))?,
    ))
}

/// The natural action on the 2^2n − 1 nonzero vectors (point i is vector i+1).
pub fn natural_generators(n: usize) -> Result<GeneratorSet> {
    check_n(n)?;
    let size = (1u32 << (2 * n)) - 1;
    let gens = transvection_vectors(n)
        .into_iter()
        .map(|v| Permutation::from_images((1..=size).map(|x| transvection(n, v, x) - 1).collect()))
        .collect::<Result<Vec<_>>>()?;
    GeneratorSet::new(size as usize, gens)
}

/// |Sp₂ₙ(2)| = 2^(n²) Π (4^i − 1).
pub fn sp_order(n: u32) -> BigUint {
    let mut out = BigUint::one() << (n * n) as usize;
    for i in 1..=n {
        out *= (BigUint::one() << (2 * i) as usize) - 1u32;
    }
    out
}

/// dim Ker(g − 1) on V for an element of a table built from
/// [`forms_generators`], read from the linear part of its affine action.
pub fn fixed_space_dim(forms: &GroupTable, id: u32) -> u32 {
    let e = forms.element(id);
    let shift = e[0] as usize;
    let fixed = (0..e.len()).filter(|&c| (e[c] as usize ^ shift) == c).count();
    fixed.trailing_zeros()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::DEFAULT_CAP;

    #[test]
    fn sp4_is_sym6() {
        let (plus, minus) = sp2n2_actions(2).unwrap();
        assert_eq!((plus.degree, minus.degree), (10, 6));
        for g in [&plus, &minus] {
            let t = GroupTable::enumerate(g, DEFAULT_CAP).unwrap();
            assert_eq!(t.order(), 720);
            assert!(t.is_k_transitive(2).unwrap());
        }
        assert_eq!(sp_order(2), BigUint::from(720u32));
    }

    #[test]
    fn natural_action_is_transitive_on_vectors() {
        let t = GroupTable::enumerate(&natural_generators(2).unwrap(), DEFAULT_CAP).unwrap();
        assert_eq!(t.order(), 720);
        assert_eq!(t.orbits().len(), 1);
    }

    #[test]
    fn forms_polarise_to_the_symplectic_form() {
        let n = 3;
        for c in 0..64u32 {
            for x in 0..64u32 {
                for y in [1u32, 6, 37, 63] {
                    let q = |z: u32| base_form(n, z) ^ symplectic_form(n, c, z);
                    assert_eq!(q(x ^ y) ^ q(x) ^ q(y), symplectic_form(n, x, y));
                }
            }
        }
    }

    #[test]
    fn fixed_space_of_identity_is_everything() {
        let t = GroupTable::enumerate(&forms_generators(2).unwrap(), DEFAULT_CAP).unwrap();
        assert_eq!(fixed_space_dim(&t, 0), 4);
        // a transvection fixes a hyperplane
        assert_eq!(fixed_space_dim(&t, t.generators()[0]), 3);
    }
}
