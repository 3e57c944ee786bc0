//! Closed-form results for the families of 2-transitive groups, evaluated
//! exactly and checked against enumeration where the group is small.

pub mod psl;
pub mod psu3;
pub mod ree;
pub mod symplectic;
pub mod suzuki;

use serde::Serialize;

/// Outcome of one named identity or claim.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    /// Passes when `got == expected`, recording both.
    pub fn eq<T: PartialEq + std::fmt::Display>(name: impl Into<String>, got: T, expected: T) -> Self {
        let passed = got == expected;
        Self::new(name, passed, format!("got {got}, expected {expected}"))
    }
}

/// `Some(k)` when `q = p^k`.
pub(crate) fn exponent_of(q: u64, p: u64) -> Option<u32> {
    if q < p {
        return None;
    }
    let mut k = 0;
    let mut x = q;
    while x % p == 0 {
        x /= p;
        k += 1;
    }
    (x == 1).then_some(k)
}
