//! Ree(q), q = 3^(2ℓ+1), on the q³+1 points of its Steiner system.

use num_bigint::BigInt;
use serde::Serialize;

use super::{exponent_of, Check};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct ReeData {
    pub q: u64,
    pub m: u64,
    #[serde(serialize_with = "crate::rational::decimal")]
    pub order: BigInt,
    #[serde(serialize_with = "crate::rational::decimal")]
    pub degree: BigInt,
    /// Derangement class families: (name, number of classes, class size).
    #[serde(serialize_with = "crate::rational::decimal")]
    pub families: Vec<(&'static str, BigInt, BigInt)>,
    /// The eigenvalues the closed forms give: (characters, eigenvalue).
    #[serde(serialize_with = "crate::rational::decimal")]
    pub eigenvalues: Vec<(&'static str, BigInt)>,
    /// All character degrees: (name, number of characters, degree).
    #[serde(serialize_with = "crate::rational::decimal")]
    pub degrees: Vec<(&'static str, BigInt, BigInt)>,
}

pub fn ree_data(q: u64) -> Result<ReeData> {
    let k = exponent_of(q, 3).filter(|&k| k % 2 == 1 && k >= 3).ok_or_else(|| {
        Error::InvalidParameters(format!("Ree(q) needs q = 3^(2l+1) with l >= 1, got {q}"))
    })?;
    let m = 3u64.pow(k / 2);
    let (q, mm) = (BigInt::from(q), BigInt::from(m));
    let q2 = &q * &q;
    let q3 = &q2 * &q;
    let one = BigInt::from(1);
    let order = (&q3 + 1) * &q3 * (&q - 1);
    let degree = &q3 + 1;
    let a: BigInt = (&q2 - &q + 1) * &q3 * (&q - 1);
    let families = vec![
        ("S^a", (&q - 3) / 24, a.clone()),
        ("JS^a", (&q - 3) / 8, a),
        ("V", (&q - 3 * &mm) / 6, (&q + 1 + 3 * &mm) * &q3 * (&q2 - 1)),
        ("W", (&q + 3 * &mm) / 6, (&q + 1 - 3 * &mm) * &q3 * (&q2 - 1)),
    ];
    let w: BigInt = &q3 - 2 * &q2 - 1;
    let eigenvalues = vec![
        ("xi1", &q3 * (&q - 1) * &w / 2),
        ("xi3", -((&q - 1u32) * &w) / 2),
        ("xi2, xi4", BigInt::from(0)),
        ("xi5, xi7", 3 * &mm * &q2 * (-&q + 4 * &mm - 1)),
        ("xi6, xi8", 3 * &mm * &q2 * (&q + 4 * &mm + 1)),
        ("xi9, xi10", q3.clone()),
    ];
    let degrees = vec![
        ("xi1", one.clone(), one.clone()),
        ("xi2", one.clone(), &q2 - &q + 1),
        ("xi3", one.clone(), q3.clone()),
        ("xi4", one.clone(), &q * (&q2 - &q + 1)),
        ("xi5..xi8", BigInt::from(2), &mm * (&q - 1) * (&q - 3 * &mm + 1) / 2),
        ("xi5..xi8", BigInt::from(2), &mm * (&q - 1) * (&q + 3 * &mm + 1) / 2),
        ("xi9, xi10", BigInt::from(2), &mm * (&q2 - 1)),
        ("eta_r", (&q - 3) / 6, (&q - 1) * (&q2 - &q + 1)),
        ("eta_t", (&q - 3) / 2, &q3 + 1),
        ("eta_i^-", (&q + 3 * &mm) / 6, (&q2 - 1) * (&q - 3 * &mm + 1)),
        ("eta_i^+", (&q - 3 * &mm) / 6, (&q2 - 1) * (&q + 3 * &mm + 1)),
    ];
    Ok(ReeData {
        q: q.try_into().unwrap(),
        m,
        order,
        degree,
        families,
        eigenvalues,
        degrees,
    })
}

/// The family-size identity, the dominance of λ(ξ₃), and the degree filter
/// `χ(1) ≤ q³·√((4q²+4)/(q³−2q²−1))`, all as exact integer comparisons.
pub fn ree_family_check(q: u64) -> Result<Vec<Check>> {
    let r = ree_data(q)?;
    let qq = BigInt::from(q);
    let q2 = &qq * &qq;
    let q3 = &q2 * &qq;
    let mut out = Vec::new();
    let total: BigInt = r.families.iter().map(|(_, c, s)| c * s).sum();
    let valency = r.eigenvalues[0].1.clone();
    out.push(Check::eq("derangement family sizes sum to the valency", total, valency.clone()));

    let tau = &r.eigenvalues[1].1;
    let dominated = r.eigenvalues.iter().enumerate().all(|(i, (_, v))| i == 1 || v > tau);
    out.push(Check::new(
        "every other listed eigenvalue exceeds lambda(xi3)",
        dominated,
        r.eigenvalues
            .iter()
            .map(|(n, v)| format!("{n}: {v}"))
            .collect::<Vec<_>>()
            .join("; "),
    ));

    let squares: BigInt = r.degrees.iter().map(|(_, c, d)| c * d * d).sum();
    out.push(Check::eq("sum of squared degrees = |G|", squares, r.order.clone()));

    // (|Ω|−1)²·(|G|/|D| − 2) = q⁶(4q²+4)/(q³−2q²−1)
    let w: BigInt = &q3 - 2 * &q2 - 1;
    let lhs = (&r.order - 2 * &valency) * &w;
    let rhs = valency.clone() * (4 * &q2 + 4);
    out.push(Check::new(
        "critical radicand equals (4q^2+4)/(q^3-2q^2-1)",
        lhs == rhs,
        format!("|G|/|D| - 2 = {}/{}", &r.order - 2 * &valency, valency),
    ));

    // χ(1) ≤ rhs  ⇔  χ(1)²·(q³−2q²−1) ≤ q⁶·(4q²+4)
    let survives = |d: &BigInt| d * d * &w <= &q3 * &q3 * (4 * &q2 + 4);
    let listed = ["xi2", "xi5..xi8", "xi9, xi10"];
    let survivors: Vec<String> = r
        .degrees
        .iter()
        .filter(|(n, _, d)| *n != "xi1" && *n != "xi3" && survives(d))
        .map(|(n, _, d)| format!("{n} ({d})"))
        .collect();
    let ok = r
        .degrees
        .iter()
        .filter(|(n, _, d)| *n != "xi1" && *n != "xi3" && survives(d))
        .all(|(n, _, _)| listed.contains(n));
    out.push(Check::new(
        "degrees below the critical bound are xi2, xi5..xi10",
        ok,
        format!("surviving degrees: {}", survivors.join(", ")),
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Family sizes summed in u128, arranged independently of the module.
    fn family_total(q: u128, m: u128) -> u128 {
        let q3 = q * q * q;
        let a = (q * q - q + 1) * q3 * (q - 1);
        (q - 3) / 24 * a
            + (q - 3) / 8 * a
            + (q - 3 * m) / 6 * (q + 1 + 3 * m) * q3 * (q * q - 1)
            + (q + 3 * m) / 6 * (q + 1 - 3 * m) * q3 * (q * q - 1)
    }

    #[test]
    fn q27_counts() {
        let r = ree_data(27).unwrap();
        let counts: Vec<i64> = r.families.iter().map(|(_, c, _)| c.try_into().unwrap()).collect();
        assert_eq!(counts, [1, 3, 3, 6]);
        for q in [27u128, 243, 2187] {
            let m = [3u128, 9, 27][[27u128, 243, 2187].iter().position(|&x| x == q).unwrap()];
            let target = q * q * q * (q - 1) * (q * q * q - 2 * q * q - 1) / 2;
            assert_eq!(family_total(q, m), target);
        }
    }

    #[test]
    fn identities_hold() {
        for q in [27, 243, 2187] {
            for c in ree_family_check(q).unwrap() {
                assert!(c.passed, "q={q}: {c:?}");
            }
        }
        assert!(ree_data(3).is_err());
        assert!(ree_data(81).is_err());
    }
}
