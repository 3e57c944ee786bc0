//! PSLₙ(q) on projective points: the totient inequality, the derangement
//! proportion bound, and the character-degree filter against the table of
//! small degrees.

use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::Check;
use crate::data::data_path;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::expr::{self, Value};
use crate::field::prime_power;
use crate::rational::{sqrt_enclosure, to_f64, Enclosure};

/// Relative error allowed for f64 logarithms before falling back to exact
/// integer comparison.
const LOG_MARGIN: f64 = 1e-9;

/// Euler's φ for every integer up to `limit`.
pub fn totient_sieve(limit: usize) -> Vec<u32> {
    let mut phi: Vec<u32> = (0..=limit as u32).collect();
    for p in 2..=limit {
        if phi[p] == p as u32 {
            for m in (p..=limit).step_by(p) {
                phi[m] -= phi[m] / p as u32;
            }
        }
    }
    phi
}

/// Decides `a^x ≥ b^y` for positive integers, by logarithms when the gap is
/// clear and by exact powers otherwise.
fn pow_ge(a: u64, x: u64, b: u64, y: u64) -> bool {
    let l = x as f64 * (a as f64).ln();
    let r = y as f64 * (b as f64).ln();
    if (l - r).abs() > LOG_MARGIN * l.abs().max(r.abs()).max(1.0) {
        return l > r;
    }
    BigInt::from(a).pow(x as u32) >= BigInt::from(b).pow(y as u32)
}

/// `φ(n) ≥ n/log₂ n`, and for odd n also `φ(n) ≥ 2n/(log₃ n + 2)`.
pub fn totient_inequality(n: u64, phi: u64) -> bool {
    // φ·log₂ n ≥ n  ⇔  n^φ ≥ 2^n
    let first = pow_ge(n, phi, 2, n);
    // φ·(log₃ n + 2) ≥ 2n  ⇔  n^φ ≥ 3^(2n−2φ)
    let second = n % 2 == 0 || pow_ge(n, phi, 3, 2 * n - 2 * phi);
    first && second
}

pub fn psl_totient_bound(n: u64) -> Result<bool> {
    if n <= 6 {
        return Err(Error::InvalidParameters(format!("the totient bound needs n > 6, got {n}")));
    }
    let phi = totient_sieve(n as usize)[n as usize];
    Ok(totient_inequality(n, phi as u64))
}

#[derive(Clone, Debug, Serialize)]
pub struct TotientReport {
    pub from: u64,
    pub to: u64,
    pub checked: u64,
    pub failures: Vec<u64>,
}

/// Checks the totient inequality for every n in `from..=to`.
pub fn totient_range(from: u64, to: u64, exec: Exec) -> Result<TotientReport> {
    if from <= 6 || to < from {
        return Err(Error::InvalidParameters(format!("bad range {from}..={to}")));
    }
    let phi = totient_sieve(to as usize);
    const CHUNK: u64 = 4096;
    let chunks = (to - from) / CHUNK + 1;
    let failures = exec
        .map_range(0..chunks as usize, |c| {
            let lo = from + c as u64 * CHUNK;
            let hi = (lo + CHUNK - 1).min(to);
            (lo..=hi)
                .filter(|&n| !totient_inequality(n, phi[n as usize] as u64))
                .collect::<Vec<_>>()
        })
        .concat();
    Ok(TotientReport {
        from,
        to,
        checked: to - from + 1,
        failures,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DerangementBound {
    pub n: u64,
    pub q: u64,
    /// `1/(n²·log₂ q)`, rounded.
    pub bound: f64,
    pub measured: Option<f64>,
    pub passed: Option<bool>,
}

/// The lower bound `1/(n²·log₂ q)` on the proportion of derangements, and
/// its comparison with a measured proportion.
pub fn psl_derangement_lower_bound(
    n: u64,
    q: u64,
    measured: Option<&BigRational>,
) -> Result<DerangementBound> {
    if n < 2 || prime_power(q).is_none() {
        return Err(Error::InvalidParameters(format!("need n >= 2 and a prime power q, got ({n}, {q})")));
    }
    let passed = measured.map(|m| {
        // a/b ≥ 1/(n² log₂ q)  ⇔  q^(a·n²) ≥ 2^b
        let a = m.numer().to_u64().unwrap_or(u64::MAX);
        let b = m.denom().to_u64().unwrap_or(u64::MAX);
        a > 0 && pow_ge(q, a * n * n, 2, b)
    });
    Ok(DerangementBound {
        n,
        q,
        bound: 1.0 / ((n * n) as f64 * (q as f64).log2()),
        measured: measured.map(to_f64),
        passed,
    })
}

fn from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

/// Enclosure of log₂ q: exact when q is a power of 2.
fn log2_enclosure(q: u64) -> Enclosure {
    if q.is_power_of_two() {
        return Enclosure::point(BigRational::from_integer(q.trailing_zeros().into()));
    }
    let l = (q as f64).log2();
    let e = l * LOG_MARGIN;
    Enclosure {
        lo: from_f64(l - e),
        hi: from_f64(l + e),
    }
}

/// `(qⁿ−q)/(q−1)·√(n²·log₂ q − 2)`.
pub fn psl_critical_rhs(n: u64, q: u64) -> Result<Enclosure> {
    if n < 4 || prime_power(q).is_none() {
        return Err(Error::InvalidParameters(format!(
            "the degree filter needs n >= 4 and a prime power q, got ({n}, {q})"
        )));
    }
    let c = BigRational::from_integer(psi_degree(n, q));
    let l = log2_enclosure(q);
    let nn = BigRational::from_integer((n * n).into());
    let two = BigRational::from_integer(2.into());
    let lo = sqrt_enclosure(&(&nn * &l.lo - &two), crate::bounds::SQRT_BITS).lo;
    let hi = sqrt_enclosure(&(&nn * &l.hi - &two), crate::bounds::SQRT_BITS).hi;
    Ok(Enclosure { lo: lo * &c, hi: hi * &c })
}

/// `ψ(1) = (qⁿ−q)/(q−1)`.
pub fn psi_degree(n: u64, q: u64) -> BigInt {
    let qq = BigInt::from(q);
    (qq.pow(n as u32) - &qq) / (qq - 1)
}

/// `(qⁿ−1)/(q−1)`, the degree of the Weil characters.
pub fn weil_degree(n: u64, q: u64) -> BigInt {
    let qq = BigInt::from(q);
    (qq.pow(n as u32) - 1) / (qq - 1)
}

#[derive(Clone, Debug)]
struct DegreeRow {
    condition: String,
    cells: [(String, String); 3],
}

/// The table of the three smallest nontrivial character degrees of PSLₙ(q),
/// n ≥ 4, with their validity conditions.
#[derive(Clone, Debug)]
pub struct SmallDegreeTable {
    rows: Vec<DegreeRow>,
}

impl SmallDegreeTable {
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        let mut header = false;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let f: Vec<&str> = line.split('\t').collect();
            let err = |msg: String| Error::Parse { line: i + 1, msg };
            if f.len() != 7 {
                return Err(err(format!("expected 7 tab-separated fields, found {}", f.len())));
            }
            if !header {
                header = true;
                if f[0] == "condition" {
                    continue;
                }
            }
            let cell = |k: usize| (f[2 * k + 1].to_string(), f[2 * k + 2].to_string());
            rows.push(DegreeRow {
                condition: f[0].to_string(),
                cells: [cell(0), cell(1), cell(2)],
            });
        }
        if rows.is_empty() {
            return Err(Error::Data("degree table has no rows".into()));
        }
        Ok(Self { rows })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn shipped() -> Result<Self> {
        Self::load(&data_path("psl_small_degrees.tsv"))
    }

    /// `[(d₁, N₁), (d₂, N₂), (d₃, N₃)]` from the unique row whose condition
    /// holds.
    pub fn lookup(&self, n: u64, q: u64) -> Result<[(BigInt, BigInt); 3]> {
        let vars = [("n", n as i64), ("q", q as i64)];
        let mut hit = None;
        for row in &self.rows {
            if expr::eval_with(&row.condition, &vars)? == Value::Bool(true) {
                if hit.is_some() {
                    return Err(Error::Data(format!("several degree rows match (n, q) = ({n}, {q})")));
                }
                hit = Some(row);
            }
        }
        let row = hit.ok_or_else(|| Error::Data(format!("no degree row matches (n, q) = ({n}, {q})")))?;
        let int = |s: &str| -> Result<BigInt> {
            match expr::eval_with(s, &vars)? {
                Value::Num(x) if x.is_integer() => Ok(x.to_integer()),
                _ => Err(Error::Data(format!("{s} is not an integer at (n, q) = ({n}, {q})"))),
            }
        };
        let cell = |k: usize| -> Result<(BigInt, BigInt)> {
            Ok((int(&row.cells[k].0)?, int(&row.cells[k].1)?))
        };
        Ok([cell(0)?, cell(1)?, cell(2)?])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FilterOutcome {
    /// No character other than ψ passes the filter.
    NoCompetitor,
    /// Only Weil characters pass; their eigenvalue is 0.
    WeilOnly,
    /// Characters of unlisted or non-Weil degree pass; the group has to be
    /// checked directly.
    DirectCheck,
}

#[derive(Clone, Debug, Serialize)]
pub struct PslFilter {
    pub n: u64,
    pub q: u64,
    pub rhs: Enclosure,
    #[serde(serialize_with = "crate::rational::decimal")]
    pub psi_degree: BigInt,
    #[serde(serialize_with = "crate::rational::decimal")]
    pub weil_degree: BigInt,
    /// Listed `(degree, count)` pairs.
    #[serde(serialize_with = "crate::rational::decimal")]
    pub degrees: Vec<(BigInt, BigInt)>,
    /// Listed degrees not exceeding the rhs, with one ψ removed.
    #[serde(serialize_with = "crate::rational::decimal")]
    pub survivors: Vec<(BigInt, BigInt)>,
    pub outcome: FilterOutcome,
}

fn at_most(d: &BigInt, rhs: &Enclosure) -> Result<bool> {
    let d = BigRational::from_integer(d.clone());
    if d <= rhs.lo {
        Ok(true)
    } else if d > rhs.hi {
        Ok(false)
    } else {
        Err(Error::Precondition(format!("degree {d} is within the rhs enclosure {rhs}")))
    }
}

/// Compares the rhs with the listed degrees. Unlisted degrees exceed d₃, so
/// they can only pass when d₃ does.
pub fn psl_degree_filter(table: &SmallDegreeTable, n: u64, q: u64) -> Result<PslFilter> {
    let rhs = psl_critical_rhs(n, q)?;
    let degrees = table.lookup(n, q)?;
    let psi = psi_degree(n, q);
    let weil = weil_degree(n, q);
    let mut survivors = Vec::new();
    for (d, count) in &degrees {
        if at_most(d, &rhs)? {
            let count = if *d == psi { count - 1 } else { count.clone() };
            if !count.is_zero() {
                survivors.push((d.clone(), count));
            }
        }
    }
    let outcome = if at_most(&degrees[2].0, &rhs)? {
        FilterOutcome::DirectCheck
    } else if survivors.is_empty() {
        FilterOutcome::NoCompetitor
    } else if survivors.iter().all(|(d, _)| *d == weil) {
        FilterOutcome::WeilOnly
    } else {
        FilterOutcome::DirectCheck
    };
    Ok(PslFilter {
        n,
        q,
        rhs,
        psi_degree: psi,
        weil_degree: weil,
        degrees: degrees.to_vec(),
        survivors,
        outcome,
    })
}

/// The case list stated for n ≥ 4: (1) q > 2, n ≥ 5 with a Weil competitor;
/// (2) q = 2, n ∈ {5, 6}; (3) n = 4, q ≥ 16, q ≠ 17 with a Weil competitor;
/// (4) n = 4, q ∈ {2,3,4,5,7,8,9,11,13,17}.
pub fn stated_case(n: u64, q: u64) -> Option<u8> {
    match (n, q) {
        (4, 2 | 3 | 4 | 5 | 7 | 8 | 9 | 11 | 13 | 17) => Some(4),
        (4, q) if q >= 16 => Some(3),
        (5 | 6, 2) => Some(2),
        (n, q) if n >= 5 && q > 2 => Some(1),
        _ => None,
    }
}

/// Whether the computed filter outcome agrees with the stated case list.
pub fn psl_case_check(table: &SmallDegreeTable, n: u64, q: u64) -> Result<Check> {
    let f = psl_degree_filter(table, n, q)?;
    let case = stated_case(n, q);
    let expected = match case {
        Some(1 | 3) => FilterOutcome::WeilOnly,
        Some(_) => FilterOutcome::DirectCheck,
        None => FilterOutcome::NoCompetitor,
    };
    Ok(Check::new(
        format!("degree filter at (n, q) = ({n}, {q})"),
        f.outcome == expected,
        format!(
            "outcome {:?}, stated case {}",
            f.outcome,
            case.map_or("none".to_string(), |c| c.to_string())
        ),
    ))
}

/// Proportion of derangements in an enumerated group.
pub fn derangement_proportion(derangements: u64, order: u64) -> BigRational {
    BigRational::new(derangements.into(), order.into())
}

/// `1/(n²·log₂ q)` exactly when q is a power of two.
pub fn exact_bound(n: u64, q: u64) -> Option<BigRational> {
    q.is_power_of_two()
        .then(|| BigRational::new(BigInt::one(), BigInt::from(n * n * q.trailing_zeros() as u64)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    /// φ by trial division.
    fn phi(n: u64) -> u64 {
        (1..=n).filter(|&k| num_integer::gcd(n, k) == 1).count() as u64
    }

    #[test]
    fn totients() {
        let s = totient_sieve(200);
        for n in 1..=200 {
            assert_eq!(s[n] as u64, phi(n as u64), "n={n}");
        }
        assert!(psl_totient_bound(10).unwrap());
        assert!(psl_totient_bound(9).unwrap());
        assert!(psl_totient_bound(64).unwrap());
        assert!(psl_totient_bound(6).is_err());
        // n = 6 itself fails the inequality, so the bound needs n > 6
        assert!(!totient_inequality(6, 2));
        let r = totient_range(7, 50_000, Exec::default()).unwrap();
        assert!(r.failures.is_empty());
        assert_eq!(r.checked, 49_994);
    }

    #[test]
    fn derangement_bounds() {
        let b = psl_derangement_lower_bound(2, 7, Some(&rat(63, 168))).unwrap();
        assert!((b.bound - 0.0890).abs() < 1e-4);
        assert_eq!(b.passed, Some(true));
        let b = psl_derangement_lower_bound(4, 2, Some(&rat(1, 16))).unwrap();
        assert_eq!(b.passed, Some(true));
        let b = psl_derangement_lower_bound(4, 2, Some(&rat(1, 17))).unwrap();
        assert_eq!(b.passed, Some(false));
        assert_eq!(exact_bound(2, 4), Some(rat(1, 8)));
        assert!(psl_derangement_lower_bound(2, 6, None).is_err());
    }

    #[test]
    fn rhs_values() {
        let r = psl_critical_rhs(4, 2).unwrap();
        let want = 14.0 * 14f64.sqrt();
        assert!((r.midpoint() - want).abs() < 1e-9);
        let r = psl_critical_rhs(5, 3).unwrap();
        assert!((r.midpoint() - 120.0 * (25.0 * 3f64.log2() - 2.0).sqrt()).abs() < 1e-6);
        assert!(psl_critical_rhs(2, 7).is_err());
    }

    #[test]
    fn degree_table() {
        let t = SmallDegreeTable::shipped().unwrap();
        let d = t.lookup(4, 2).unwrap();
        assert_eq!(d.map(|x| x.0), [7, 8, 14].map(BigInt::from));
        let d = t.lookup(5, 3).unwrap();
        assert_eq!(d[1], (BigInt::from(121), BigInt::from(1)));
        let d = t.lookup(4, 5).unwrap();
        assert_eq!(d[2], (BigInt::from(248), BigInt::from(2)));
        assert!(t.lookup(3, 5).is_err());
    }

    #[test]
    fn case_split() {
        let t = SmallDegreeTable::shipped().unwrap();
        assert_eq!(psl_degree_filter(&t, 4, 2).unwrap().outcome, FilterOutcome::DirectCheck);
        assert_eq!(psl_degree_filter(&t, 5, 3).unwrap().outcome, FilterOutcome::WeilOnly);
        assert_eq!(psl_degree_filter(&t, 7, 2).unwrap().outcome, FilterOutcome::NoCompetitor);
        for n in 4..=9 {
            for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 32, 49, 64, 81, 125, 128] {
                let c = psl_case_check(&t, n, q).unwrap();
                assert!(c.passed, "{c:?}");
            }
        }
    }
}
