//! Sz(q), q = 2^(2ℓ+1), on the q²+1 points of its inversive plane.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::{exponent_of, Check};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct SuzukiData {
    pub q: u64,
    pub r: u64,
    #[serde(serialize_with = "crate::rational::decimal")]
    pub order: BigInt,
    #[serde(serialize_with = "crate::rational::decimal")]
    pub degree: BigInt,
    /// (eigenvalue, multiplicity), principal first.
    #[serde(serialize_with = "crate::rational::decimal")]
    pub spectrum: Vec<(BigInt, BigInt)>,
    /// Derangement class families: (number of classes, class size).
    #[serde(serialize_with = "crate::rational::decimal")]
    pub class_families: Vec<(BigInt, BigInt)>,
    /// Character families: (name, number of characters, degree).
    #[serde(serialize_with = "crate::rational::decimal")]
    pub characters: Vec<(&'static str, BigInt, BigInt)>,
}

fn b(x: u64) -> BigInt {
    BigInt::from(x)
}

pub fn sz_spectrum(q: u64) -> Result<SuzukiData> {
    let k = exponent_of(q, 2).filter(|&k| k % 2 == 1 && k >= 3).ok_or_else(|| {
        Error::InvalidParameters(format!("Sz(q) needs q = 2^(2l+1) with l >= 1, got {q}"))
    })?;
    let r = 1u64 << (k.div_ceil(2));
    let (qq, rr) = (b(q), b(r));
    let one = BigInt::from(1);
    let order = (&qq * &qq + 1) * &qq * &qq * (&qq - 1);
    let degree = &qq * &qq + 1;
    let spectrum = vec![
        (&qq * &qq * &qq * (&qq - 1) * (&qq - 1) / 2, one.clone()),
        (-(&qq * (&qq - 1u32) * (&qq - 1u32)) / 2, qq.pow(4)),
        (BigInt::from(0), (&qq * &qq + 1u32).pow(2) * (&qq - 2) / 2),
        (&qq * &qq, &qq * (&qq - 1u32).pow(3) * (&qq + 1) / 2),
    ];
    let class_families = vec![
        ((&qq + &rr) / 4, (&qq - &rr + 1) * &qq * &qq * (&qq - 1)),
        ((&qq - &rr) / 4, (&qq + &rr + 1) * &qq * &qq * (&qq - 1)),
    ];
    let characters = vec![
        ("chi0", one.clone(), one.clone()),
        ("X", one.clone(), &qq * &qq),
        ("X_i", &qq / 2 - 1, &qq * &qq + 1),
        ("Y_j", (&qq + &rr) / 4, (&qq - &rr + 1) * (&qq - 1)),
        ("Z_k", (&qq - &rr) / 4, (&qq + &rr + 1) * (&qq - 1)),
        ("W_l", BigInt::from(2), &rr * (&qq - 1) / 2),
    ];
    Ok(SuzukiData {
        q,
        r,
        order,
        degree,
        spectrum,
        class_families,
        characters,
    })
}

/// Internal consistency of the closed forms: 2q = r², multiplicities sum to
/// |G|, the trace identities, the valency against the class families, the
/// character degrees, and the ratio bound.
pub fn suzuki_checks(q: u64) -> Result<Vec<Check>> {
    let s = sz_spectrum(q)?;
    let mut out = Vec::new();
    out.push(Check::eq("2q = r^2", 2 * q, s.r * s.r));
    let total: BigInt = s.spectrum.iter().map(|(_, m)| m).sum();
    out.push(Check::eq("multiplicities sum to |G|", total, s.order.clone()));
    let valency = s.spectrum[0].0.clone();
    let from_classes: BigInt = s.class_families.iter().map(|(c, z)| c * z).sum();
    out.push(Check::eq("valency = derangement count", valency.clone(), from_classes));
    let trace: BigInt = s.spectrum.iter().map(|(l, m)| l * m).sum();
    out.push(Check::eq("trace of A is 0", trace, BigInt::from(0)));
    let trace2: BigInt = s.spectrum.iter().map(|(l, m)| l * l * m).sum();
    out.push(Check::eq("trace of A^2 = |G|·|D|", trace2, &s.order * &valency));
    let squares: BigInt = s.characters.iter().map(|(_, c, d)| c * d * d).sum();
    out.push(Check::eq("sum of squared degrees = |G|", squares, s.order.clone()));
    // one display gives the Y family (q+4)/4 members; only (q+r)/4 balances
    let qq = b(q);
    let y_alt = (&qq + 4) / 4;
    let alt: BigInt = s
        .characters
        .iter()
        .map(|(n, c, d)| if *n == "Y_j" { &y_alt * d * d } else { c * d * d })
        .sum();
    out.push(Check::new(
        "the (q+4)/4 reading of the Y family is inconsistent",
        y_alt == s.characters[3].1 || alt != s.order,
        format!(
            "(q+r)/4 = {}, (q+4)/4 = {}; with (q+4)/4 the squared degrees sum to {alt}",
            s.characters[3].1, y_alt
        ),
    ));
    let m_rows: Vec<(BigInt, BigInt)> = vec![
        (s.spectrum[2].1.clone(), &s.characters[2].1 * s.characters[2].2.pow(2)),
        (
            s.spectrum[3].1.clone(),
            s.characters[3..].iter().map(|(_, c, d)| c * d * d).sum(),
        ),
    ];
    for (i, (m, from_chars)) in m_rows.into_iter().enumerate() {
        out.push(Check::eq(
            format!("multiplicity of eigenvalue {} from degrees", s.spectrum[i + 2].0),
            m,
            from_chars,
        ));
    }
    let d = BigRational::from_integer(s.spectrum[0].0.clone());
    let tau = BigRational::from_integer(s.spectrum[1].0.clone());
    let rb = BigRational::from_integer(s.order.clone()) / (BigRational::from_integer(1.into()) - d / tau);
    out.push(Check::eq(
        "ratio bound = |G|/(q^2+1)",
        rb,
        BigRational::new(s.order.clone(), s.degree.clone()),
    ));
    out.push(Check::eq(
        "least eigenvalue multiplicity = (|Omega|-1)^2",
        s.spectrum[1].1.clone(),
        (&s.degree - 1u32).pow(2),
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q8_table() {
        let s = sz_spectrum(8).unwrap();
        let got: Vec<(i64, i64)> = s
            .spectrum
            .iter()
            .map(|(a, b)| (a.try_into().unwrap(), b.try_into().unwrap()))
            .collect();
        assert_eq!(got, [(12544, 1), (-196, 4096), (0, 12675), (64, 12348)]);
        assert_eq!(s.order, BigInt::from(29120));
    }

    #[test]
    fn closed_forms_are_consistent() {
        for q in [8, 32, 128, 512, 1 << 15] {
            for c in suzuki_checks(q).unwrap() {
                assert!(c.passed, "q={q}: {c:?}");
            }
        }
        let total: BigInt = sz_spectrum(32).unwrap().spectrum.iter().map(|(_, m)| m).sum();
        assert_eq!(total, BigInt::from(32537600u64));
    }

    #[test]
    fn invalid_q() {
        for q in [2, 4, 16, 12] {
            assert!(sz_spectrum(q).is_err());
        }
    }
}
