//! Permutation actions of the classical families, and generator files.

pub mod file;
pub mod linear;
pub mod symplectic;
pub mod unitary;

use hashbrown::HashMap;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::perm::{GeneratorSet, Permutation};

pub use file::{format_group_file, load_group_file, parse_group_file};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Psl,
    Pgl,
    Sp2n2,
    Psu3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ActionKind {
    ProjectivePoints,
    QuadraticFormsPlus,
    QuadraticFormsMinus,
    IsotropicPoints,
    Natural,
}

/// A family member together with one of its 2-transitive actions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatrixGroupSpec {
    pub family: Family,
    pub n: u32,
    pub q: u64,
    pub action: ActionKind,
}

impl MatrixGroupSpec {
    pub fn psl(n: u32, q: u64) -> Self {
        Self {
            family: Family::Psl,
            n,
            q,
            action: ActionKind::ProjectivePoints,
        }
    }

    pub fn pgl(n: u32, q: u64) -> Self {
        Self {
            family: Family::Pgl,
            n,
            q,
            action: ActionKind::ProjectivePoints,
        }
    }

    pub fn sp(n: u32, plus: bool) -> Self {
        Self {
            family: Family::Sp2n2,
            n,
            q: 2,
            action: if plus {
                ActionKind::QuadraticFormsPlus
            } else {
                ActionKind::QuadraticFormsMinus
            },
        }
    }

    pub fn psu3(q: u64) -> Self {
        Self {
            family: Family::Psu3,
            n: 3,
            q,
            action: ActionKind::IsotropicPoints,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameters(msg));
        match (self.family, self.action) {
            (Family::Psl | Family::Pgl, ActionKind::ProjectivePoints) => {
                field_of(self.q)?;
                if self.n < 2 {
                    return bad(format!("dimension must be at least 2, got {}", self.n));
                }
                if self.n == 2 && self.q <= 3 {
                    return bad(format!("(n, q) = (2, {}) is excluded", self.q));
                }
                Ok(())
            }
            (
                Family::Sp2n2,
                ActionKind::QuadraticFormsPlus | ActionKind::QuadraticFormsMinus | ActionKind::Natural,
            ) => {
                if self.q != 2 {
                    return bad("symplectic family is defined over GF(2)".into());
                }
                if self.n < 2 {
                    return bad(format!("half-dimension must be at least 2, got {}", self.n));
                }
                Ok(())
            }
            (Family::Psu3, ActionKind::IsotropicPoints) => {
                field_of(self.q)?;
                if self.q == 2 {
                    return bad("PSU3(2) is excluded".into());
                }
                Ok(())
            }
            _ => bad(format!(
                "action {:?} is not available for family {:?}",
                self.action, self.family
            )),
        }
    }

    pub fn name(&self) -> String {
        match (self.family, self.action) {
            (Family::Psl, _) => format!("PSL({},{})", self.n, self.q),
            (Family::Pgl, _) => format!("PGL({},{})", self.n, self.q),
            (Family::Sp2n2, ActionKind::QuadraticFormsPlus) => format!("Sp({},2) on plus forms", 2 * self.n),
            (Family::Sp2n2, ActionKind::QuadraticFormsMinus) => format!("Sp({},2) on minus forms", 2 * self.n),
            (Family::Sp2n2, _) => format!("Sp({},2) on nonzero vectors", 2 * self.n),
            (Family::Psu3, _) => format!("PSU(3,{})", self.q),
        }
    }

    pub fn degree(&self) -> Result<u64> {
        self.validate()?;
        let q = self.q;
        let n = self.n;
        Ok(match self.action {
            ActionKind::ProjectivePoints => (q.pow(n) - 1) / (q - 1),
            ActionKind::QuadraticFormsPlus => (1u64 << (n - 1)) * ((1u64 << n) + 1),
            ActionKind::QuadraticFormsMinus => (1u64 << (n - 1)) * ((1u64 << n) - 1),
            ActionKind::Natural => (1u64 << (2 * n)) - 1,
            ActionKind::IsotropicPoints => q * q * q + 1,
        })
    }

    /// Closed-form group order.
    pub fn expected_order(&self) -> Result<BigUint> {
        self.validate()?;
        let q = BigUint::from(self.q);
        Ok(match self.family {
            Family::Psl | Family::Pgl => {
                let n = self.n;
                let mut gl = BigUint::one();
                for i in 0..n {
                    gl *= q.pow(n) - q.pow(i);
                }
                let pgl = gl / (&q - 1u32);
                if self.family == Family::Pgl {
                    pgl
                } else {
                    pgl / (self.q - 1).gcd(&(n as u64))
                }
            }
            Family::Sp2n2 => symplectic::sp_order(self.n),
            Family::Psu3 => {
                let q3 = q.pow(3);
                let d = (self.q + 1).gcd(&3);
                &q3 * (&q3 + 1u32) * (&q * &q - 1u32) / d
            }
        })
    }

    pub fn generators(&self) -> Result<GeneratorSet> {
        self.validate()?;
        match self.family {
            Family::Psl => linear::psl_generators(self.n as usize, self.q),
            Family::Pgl => linear::pgl_generators(self.n as usize, self.q),
            Family::Sp2n2 => {
                let (plus, minus) = symplectic::sp2n2_actions(self.n as usize)?;
                Ok(match self.action {
                    ActionKind::QuadraticFormsPlus => plus,
                    ActionKind::QuadraticFormsMinus => minus,
                    _ => symplectic::natural_generators(self.n as usize)?,
                })
            }
            Family::Psu3 => unitary::psu3_generators(self.q),
        }
    }
}

fn field_of(q: u64) -> Result<FiniteField> {
    FiniteField::new(q)
}

/// Square matrix over a finite field, row-major. Vectors are rows and
/// matrices act on the right.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Mat {
    pub n: usize,
    pub a: Vec<u32>,
}

impl Mat {
    pub fn identity(n: usize) -> Self {
        let mut a = vec![0; n * n];
        for i in 0..n {
            a[i * n + i] = 1;
        }
        Self { n, a }
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.a[i * self.n + j] = v;
    }

    pub fn mul(&self, f: &FiniteField, other: &Mat) -> Mat {
        let n = self.n;
        let mut out = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0;
                for k in 0..n {
                    acc = f.add(acc, f.mul(self.get(i, k), other.get(k, j)));
                }
                out[i * n + j] = acc;
            }
        }
        Mat { n, a: out }
    }

    pub fn apply(&self, f: &FiniteField, v: &[u32]) -> Vec<u32> {
        (0..self.n)
            .map(|j| {
                (0..self.n).fold(0, |acc, k| f.add(acc, f.mul(v[k], self.get(k, j))))
            })
            .collect()
    }
}

/// Scales a nonzero vector so its first nonzero coordinate is 1.
pub(crate) fn normalise(f: &FiniteField, v: &mut [u32]) {
    if let Some(&lead) = v.iter().find(|&&x| x != 0) {
        let inv = f.inv(lead).expect("nonzero");
        for x in v.iter_mut() {
            *x = f.mul(*x, inv);
        }
    }
}

/// Normalised representatives of the 1-spaces of `F_q^n`, in increasing
/// base-q order of their coordinate vectors.
pub(crate) fn projective_points(f: &FiniteField, n: usize) -> Vec<Vec<u32>> {
    let q = f.order() as u64;
    let total = q.pow(n as u32);
    let mut out = Vec::new();
    for code in 1..total {
        let mut v = Vec::with_capacity(n);
        let mut c = code;
        for _ in 0..n {
            v.push((c % q) as u32);
            c /= q;
        }
        v.reverse();
        if v.iter().find(|&&x| x != 0) == Some(&1) {
            out.push(v);
        }
    }
    out
}

/// Permutation induced by a matrix on a list of normalised points.
pub(crate) fn induced_permutation(
    f: &FiniteField,
    points: &[Vec<u32>],
    index: &HashMap<Vec<u32>, u32>,
    g: &Mat,
) -> Result<Permutation> {
    let images = points
        .iter()
        .map(|p| {
            let mut w = g.apply(f, p);
            normalise(f, &mut w);
            index
                .get(&w)
                .copied()
                .ok_or_else(|| Error::Precondition("matrix does not preserve the point set".into()))
        })
        .collect::<Result<Vec<u32>>>()?;
    Permutation::from_images(images)
}

pub(crate) fn point_index(points: &[Vec<u32>]) -> HashMap<Vec<u32>, u32> {
    points
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i as u32))
        .collect()
}
