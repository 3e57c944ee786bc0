//! PSU₃(q) on the q³+1 isotropic points: the (a, b)-weighted scheme, the
//! triple sets parametrising the classes of C₂, and the character sums over
//! them.

use hashbrown::HashMap;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::Check;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::prime_power;
use crate::poly::IntPoly;
use crate::rational::{int, serialize_rational};
use crate::bounds::{ekr_verdict, BoundReport, SpectralSummary};
use crate::classes::{action_stats, ConjugacyClassTable};
use crate::groups::MatrixGroupSpec;
use crate::spectra::{spectrum, ClassAlgebra, WeightVector};
use crate::table::{GroupTable, DEFAULT_CAP};

#[derive(Clone, Debug, Serialize)]
pub struct ClassFamily {
    pub name: &'static str,
    pub classes: u64,
    #[serde(serialize_with = "crate::rational::decimal")]
    pub class_size: BigInt,
}

#[derive(Clone, Debug, Serialize)]
pub struct PredictedEigenvalue {
    pub characters: &'static str,
    #[serde(serialize_with = "crate::rational::decimal")]
    pub degree: BigInt,
    pub count: u64,
    #[serde(serialize_with = "serialize_rational")]
    pub value: BigRational,
}

#[derive(Clone, Debug, Serialize)]
pub struct Psu3Scheme {
    pub q: u64,
    pub d: u64,
    #[serde(serialize_with = "crate::rational::decimal")]
    pub order: BigInt,
    /// C₁ then C₂ (C₂′ and C₂″ when d = 3).
    pub families: Vec<ClassFamily>,
    #[serde(serialize_with = "crate::rational::decimal")]
    pub c1_total: BigInt,
    #[serde(serialize_with = "crate::rational::decimal")]
    pub c2_total: BigInt,
    #[serde(serialize_with = "serialize_rational")]
    pub a: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub b: BigRational,
    pub predicted: Vec<PredictedEigenvalue>,
}

fn valid_q(q: u64) -> Result<()> {
    if q < 3 || prime_power(q).is_none() {
        return Err(Error::InvalidParameters(format!(
            "PSU3(q) needs a prime power q >= 3, got {q}"
        )));
    }
    Ok(())
}

pub fn gcd3(q: u64) -> u64 {
    (q + 1).gcd(&3)
}

pub fn psu3_scheme(q: u64) -> Result<Psu3Scheme> {
    valid_q(q)?;
    let d = gcd3(q);
    let qq = BigInt::from(q);
    let q2 = &qq * &qq;
    let q3 = &q2 * &qq;
    let order = &q3 * (&q3 + 1) * (&q2 - 1) / d;
    let torus: BigInt = &q2 - &qq + 1;
    let sq = (&qq + 1) * (&qq + 1);
    let families = if d == 1 {
        vec![
            ClassFamily {
                name: "C1",
                classes: (q * q - q) / 3,
                class_size: &order / &torus,
            },
            ClassFamily {
                name: "C2",
                classes: (q * q - q) / 6,
                class_size: &order / &sq,
            },
        ]
    } else {
        vec![
            ClassFamily {
                name: "C1",
                classes: (q * q - q - 2) / 9,
                class_size: 3 * &order / &torus,
            },
            ClassFamily {
                name: "C2'",
                classes: (q * q - q - 2) / 18,
                class_size: 3 * &order / &sq,
            },
            ClassFamily {
                name: "C2''",
                classes: 1,
                class_size: &order / &sq,
            },
        ]
    };
    let total = |f: &ClassFamily| BigInt::from(f.classes) * &f.class_size;
    let c1_total = total(&families[0]);
    let c2_total: BigInt = families[1..].iter().map(total).sum();
    let r = |x: BigInt| BigRational::from_integer(x);
    let a = r(&qq * (2 * &q2 + &qq - 1)) / r(3 * &c1_total);
    let b = r(&qq * &torus) / r(3 * &c2_total);
    let mut predicted = vec![
        PredictedEigenvalue {
            characters: "principal",
            degree: BigInt::one(),
            count: 1,
            value: r(q3.clone()),
        },
        PredictedEigenvalue {
            characters: "psi",
            degree: q3.clone(),
            count: 1,
            value: int(-1),
        },
        PredictedEigenvalue {
            characters: "degree q(q-1)",
            degree: &qq * (&qq - 1),
            count: 1,
            value: int(-1),
        },
    ];
    if d == 1 {
        let others = if q % 2 == 1 {
            predicted.push(PredictedEigenvalue {
                characters: "chi_u, u = (q+1)/2",
                degree: torus.clone(),
                count: 1,
                value: int(-1),
            });
            q - 1
        } else {
            q
        };
        predicted.push(PredictedEigenvalue {
            characters: "chi_u, other u",
            degree: torus.clone(),
            count: others,
            value: BigRational::new(2.into(), (q - 1).into()),
        });
    } else {
        predicted.push(PredictedEigenvalue {
            characters: "chi_u",
            degree: torus.clone(),
            count: (q + 1) / 3 - 1,
            value: BigRational::new((6 * q).into(), (q * q - q + 4).into()),
        });
    }
    Ok(Psu3Scheme {
        q,
        d,
        order,
        families,
        c1_total,
        c2_total,
        a,
        b,
        predicted,
    })
}

impl Psu3Scheme {
    /// Identities of the scheme: the displayed totals |C₁|, |C₂| and the
    /// principal eigenvalue a|C₁| + b|C₂| = q³.
    pub fn checks(&self) -> Vec<Check> {
        let qq = BigInt::from(self.q);
        let (c1, c2) = if self.d == 1 {
            (
                qq.pow(4) * (&qq * &qq - 1u32).pow(2) / 3,
                qq.pow(4) * (&qq - 1u32).pow(2) * (&qq * &qq - &qq + 1) / 6,
            )
        } else {
            (
                qq.pow(3) * (&qq - 1) * (&qq + 1u32).pow(3) * (&qq - 2) / 9,
                qq.pow(3) * (&qq - 1) * (&qq * &qq - &qq + 1) * (&qq * &qq - &qq + 4) / 18,
            )
        };
        let principal = &self.a * BigRational::from_integer(self.c1_total.clone())
            + &self.b * BigRational::from_integer(self.c2_total.clone());
        vec![
            Check::eq("|C1| matches the displayed total", self.c1_total.clone(), c1),
            Check::eq("|C2| matches the displayed total", self.c2_total.clone(), c2),
            Check::eq(
                "a|C1| + b|C2| = q^3",
                principal,
                BigRational::from_integer(qq.pow(3)),
            ),
        ]
    }

    /// Weights per derangement class, chosen by class size: `a` on classes of
    /// C₁, `b` on classes of C₂.
    pub fn weights_for_sizes(&self, sizes: &[u64]) -> Result<WeightVector> {
        let c1 = &self.families[0].class_size;
        sizes
            .iter()
            .map(|&s| {
                let s = BigInt::from(s);
                if &s == c1 {
                    Ok(self.a.clone())
                } else if self.families[1..].iter().any(|f| f.class_size == s) {
                    Ok(self.b.clone())
                } else {
                    Err(Error::Precondition(format!(
                        "derangement class of size {s} belongs to neither C1 nor C2"
                    )))
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(WeightVector)
    }

    /// `(|Ω|−1)²·(|G|·Σaᵢ²|Cᵢ|/(Σaᵢ|Cᵢ|)² − 2)`, the square of the weighted
    /// critical bound.
    pub fn critical_square(&self) -> BigRational {
        let r = |x: &BigInt| BigRational::from_integer(x.clone());
        let s1 = &self.a * r(&self.c1_total) + &self.b * r(&self.c2_total);
        let s2 = &self.a * &self.a * r(&self.c1_total) + &self.b * &self.b * r(&self.c2_total);
        let q3 = int(self.q.pow(3));
        &q3 * &q3 * (r(&self.order) * s2 / (&s1 * &s1) - int(2))
    }

    /// The weighted critical bound lies strictly below (q−1)(q²−q+1).
    pub fn critical_filter(&self) -> Check {
        let q = self.q;
        let target = int((q - 1) * (q * q - q + 1));
        let sq = self.critical_square();
        Check::new(
            format!("weighted critical bound < (q-1)(q^2-q+1) at q = {q}"),
            sq < &target * &target,
            format!(
                "bound^2 = {:.6e}, (q-1)(q^2-q+1) = {target}",
                crate::rational::to_f64(&sq)
            ),
        )
    }
}

/// Occurrence tallies of the elements 1..=q+1 over a triple set.
#[derive(Clone, Debug, Serialize)]
pub struct TripleReport {
    pub q: u64,
    pub d: u64,
    pub triples: u64,
    pub expected_triples: u64,
    /// `tally[e]` for `e` in `1..=q+1` (index 0 unused).
    pub tally: Vec<u64>,
    pub checks: Vec<Check>,
}

/// `T = {(k,l,m) : k+l+m ≡ 0 (mod q+1), 1 ≤ k < l < m ≤ q+1}`, or `T′` with
/// the extra condition `l ≤ (q+1)/3` when `prime` is set.
pub fn triples(q: u64, prime: bool, exec: Exec) -> Vec<(u64, u64, u64)> {
    let n = q + 1;
    let l_max = if prime { n / 3 } else { n };
    exec.map_range(1..n as usize + 1, |k| {
        let k = k as u64;
        let mut out = Vec::new();
        for l in k + 1..=l_max {
            let m = match (2 * n - k - l) % n {
                0 => n,
                m => m,
            };
            if m > l {
                out.push((k, l, m));
            }
        }
        out
    })
    .into_iter()
    .flatten()
    .collect()
}

fn tally(n: u64, ts: &[(u64, u64, u64)]) -> Vec<u64> {
    let mut t = vec![0u64; n as usize + 1];
    for &(k, l, m) in ts {
        t[k as usize] += 1;
        t[l as usize] += 1;
        t[m as usize] += 1;
    }
    t
}

/// Enumerates T (when gcd(3, q+1) = 1) or T′ (when it is 3) and compares the
/// tallies with the stated counts.
pub fn psu3_triple_counts(q: u64, exec: Exec) -> Result<TripleReport> {
    valid_q(q)?;
    if q > 1000 {
        return Err(Error::InvalidParameters("triple enumeration is limited to q <= 1000".into()));
    }
    let d = gcd3(q);
    let n = q + 1;
    let ts = triples(q, d == 3, exec);
    let t = tally(n, &ts);
    let mut checks = Vec::new();
    let expected_triples = if d == 1 { (q * q - q) / 6 } else { (q * q - q - 2) / 18 };
    checks.push(Check::eq("number of triples = number of C2 classes", ts.len() as u64, expected_triples));
    let half = |x: i64| BigRational::new(x.into(), 2.into());
    let sixth = |x: i64| BigRational::new(x.into(), 6.into());
    let qi = q as i64;
    let mut compare = |name: String, elems: Vec<u64>, claimed: BigRational| {
        let bad: Vec<String> = elems
            .iter()
            .filter(|&&e| int(t[e as usize]) != claimed)
            .map(|&e| format!("{e}:{}", t[e as usize]))
            .collect();
        checks.push(Check::new(
            name,
            bad.is_empty() && !elems.is_empty(),
            if bad.is_empty() {
                format!("all {} elements occur {claimed} times", elems.len())
            } else {
                format!("claimed {claimed}; differing (element:count) {}", bad.join(" "))
            },
        ));
    };
    if d == 1 {
        if q % 2 == 1 {
            compare("q+1 occurs in (q-1)/2 triples".into(), vec![n], half(qi - 1));
            compare(
                "odd elements occur in (q-1)/2 triples".into(),
                (1..=q).filter(|e| e % 2 == 1).collect(),
                half(qi - 1),
            );
            compare(
                "even elements occur in (q-3)/2 triples".into(),
                (1..=q).filter(|e| e % 2 == 0).collect(),
                half(qi - 3),
            );
        } else {
            compare("q+1 occurs in q/2 triples".into(), vec![n], half(qi));
            compare("elements 1..q occur in (q-2)/2 triples".into(), (1..=q).collect(), half(qi - 2));
        }
    } else {
        let multiples = |parity: Option<u64>| -> Vec<u64> {
            (1..=n / 3)
                .filter(|i| parity.is_none_or(|p| i % 2 == p))
                .map(|i| 3 * i)
                .collect()
        };
        if q % 2 == 1 {
            compare("each 3i occurs (q-2)/6 times".into(), multiples(None), sixth(qi - 2));
        } else {
            compare("3i occurs (q-5)/6 times for even i".into(), multiples(Some(0)), sixth(qi - 5));
            compare("3i occurs (q+1)/6 times for odd i".into(), multiples(Some(1)), sixth(qi + 1));
        }
    }
    Ok(TripleReport {
        q,
        d,
        triples: ts.len() as u64,
        expected_triples,
        tally: t,
        checks,
    })
}

/// The n-th cyclotomic polynomial.
pub fn cyclotomic(n: u64) -> IntPoly {
    fn go(n: u64, memo: &mut HashMap<u64, IntPoly>) -> IntPoly {
        if let Some(p) = memo.get(&n) {
            return p.clone();
        }
        let mut c = vec![BigInt::zero(); n as usize + 1];
        c[0] = BigInt::from(-1);
        c[n as usize] = BigInt::one();
        let mut p = IntPoly::new(c);
        for d in (1..n).filter(|d| n % d == 0) {
            let f = go(d, memo);
            p = p.div_exact_monic(&f).expect("cyclotomic factor divides x^n - 1");
        }
        memo.insert(n, p.clone());
        p
    }
    go(n, &mut HashMap::new())
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacterSum {
    pub q: u64,
    pub u: u64,
    /// The exact value when it is rational.
    #[serde(serialize_with = "crate::rational::decimal")]
    pub value: Option<BigRational>,
    #[serde(serialize_with = "serialize_rational")]
    pub claimed: BigRational,
    pub matches: bool,
    /// The eigenvalue of χ_u the actual sum gives.
    #[serde(serialize_with = "crate::rational::decimal")]
    pub implied_eigenvalue: Option<BigRational>,
}

/// `Σ_{(k,l,m)} e^{3uk} + e^{3ul} + e^{3um}` over T (or T′ when
/// gcd(3, q+1) = 3), with e a primitive (q+1)-th root of unity, evaluated in
/// ℤ[x]/Φ_{q+1}.
pub fn psu3_character_sum(q: u64, u: u64) -> Result<CharacterSum> {
    valid_q(q)?;
    let d = gcd3(q);
    let n = q + 1;
    let valid = if d == 1 { 1..=q } else { 1..=(n / 3 - 1) };
    if !valid.contains(&u) {
        return Err(Error::InvalidParameters(format!(
            "u = {u} is outside {}..={} for q = {q}",
            valid.start(),
            valid.end()
        )));
    }
    let ts = triples(q, d == 3, Exec::Sequential);
    let mut c = vec![BigInt::zero(); n as usize];
    for &(k, l, m) in &ts {
        for e in [k, l, m] {
            c[((3 * u * e) % n) as usize] += 1;
        }
    }
    let phi = cyclotomic(n);
    let rem = IntPoly::new(c).pseudo_rem(&phi);
    let value = (rem.degree() == 0 || rem.is_zero()).then(|| {
        BigRational::from_integer(rem.coeffs().first().cloned().unwrap_or_default())
    });
    let claimed = if d == 3 {
        int(0)
    } else if q % 2 == 1 && u == n / 2 {
        BigRational::new(-BigInt::from(n), 2.into())
    } else {
        int(1)
    };
    let implied_eigenvalue = value.as_ref().map(|s| {
        if d == 1 {
            s * int(2) / int(q as i64 - 1)
        } else {
            int(6 * q as i64) * (s + int(1)) / int((q * q - q + 4) as i64)
        }
    });
    Ok(CharacterSum {
        q,
        u,
        matches: value.as_ref() == Some(&claimed),
        value,
        claimed,
        implied_eigenvalue,
    })
}

/// All valid u for q.
pub fn character_sum_range(q: u64) -> Vec<u64> {
    if gcd3(q) == 1 {
        (1..=q).collect()
    } else {
        (1..(q + 1) / 3).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Psu3Enumerated {
    pub q: u64,
    /// Exact weighted spectrum as (value, multiplicity), ascending.
    #[serde(serialize_with = "crate::rational::decimal")]
    pub spectrum: Vec<(BigRational, BigInt)>,
    pub checks: Vec<Check>,
    pub report: BoundReport,
}

/// Enumerates PSU₃(q), weights its derangement classes with `a` and `b`, and
/// compares the spectrum with the predicted values.
pub fn psu3_enumerated_check(q: u64, exec: Exec) -> Result<Psu3Enumerated> {
    let scheme = psu3_scheme(q)?;
    let spec = MatrixGroupSpec::psu3(q);
    let t = GroupTable::enumerate(&spec.generators()?, DEFAULT_CAP)?;
    let classes = ConjugacyClassTable::compute_with(&t, exec);
    let stats = action_stats(&t, &classes)?;
    let sizes: Vec<u64> = stats.derangement_classes.iter().map(|&c| classes.class(c).size).collect();
    let weights = scheme.weights_for_sizes(&sizes)?;
    let alg = ClassAlgebra::with_exec(&t, &classes, exec);
    let s = spectrum(&alg, &stats, &weights)?;
    let pairs = s
        .exact_pairs()
        .ok_or_else(|| Error::Precondition("weighted spectrum is not rational".into()))?;
    let summary = SpectralSummary::from_spectrum(&s, &classes, &stats, &weights)?;
    let report = ekr_verdict(
        &spec.name(),
        stats.degree as u64,
        stats.order,
        stats.derangement_count,
        Some(&summary),
        None,
    );
    let mut checks = vec![
        Check::eq("group order", BigInt::from(stats.order), scheme.order.clone()),
        Check::eq("largest eigenvalue = q^3", summary.max.clone(), int(q.pow(3))),
        Check::new(
            "least eigenvalue = -1",
            summary.min.exact() == Some(&int(-1)),
            format!("got {}", summary.min),
        ),
        Check::new(
            "ratio bound = |G|/(q^3+1)",
            report.bounds[0]
                .value
                .as_ref()
                .is_some_and(|b| b.exact() == Some(&BigRational::new(scheme.order.clone(), (q.pow(3) + 1).into()))),
            format!("{:?}", report.bounds[0].value.as_ref().map(|b| b.to_string())),
        ),
        Check::new("certified", report.verdict.is_certified(), format!("{:?}", report.verdict)),
    ];
    // each predicted value occurs, with room for Σ count·degree² of its characters
    let mut budget: Vec<(BigRational, BigInt)> = Vec::new();
    for p in &scheme.predicted {
        let need = BigInt::from(p.count) * &p.degree * &p.degree;
        match budget.iter_mut().find(|(v, _)| *v == p.value) {
            Some((_, n)) => *n += need,
            None => budget.push((p.value.clone(), need)),
        }
    }
    for (v, need) in budget {
        let got = BigInt::from(s.multiplicity_of(&v));
        checks.push(Check::new(
            format!("eigenvalue {v} present with multiplicity >= {need}"),
            got >= need,
            format!("multiplicity {got}"),
        ));
    }
    Ok(Psu3Enumerated {
        q,
        spectrum: pairs.into_iter().map(|(v, m)| (v, BigInt::from(m))).collect(),
        checks,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn schemes() {
        let s = psu3_scheme(3).unwrap();
        assert_eq!(s.c1_total, BigInt::from(1728));
        assert_eq!(s.c2_total, BigInt::from(378));
        assert_eq!((s.a.clone(), s.b.clone()), (rat(5, 432), rat(1, 54)));
        let s5 = psu3_scheme(5).unwrap();
        assert_eq!(s5.c1_total, BigInt::from(36000));
        assert_eq!(s5.c2_total, BigInt::from(14000));
        assert_eq!((s5.a.clone(), s5.b.clone()), (rat(1, 400), rat(1, 400)));
        for q in [3, 4, 5, 7, 8, 9, 11, 16, 17, 27, 125] {
            for c in psu3_scheme(q).unwrap().checks() {
                assert!(c.passed, "q={q}: {c:?}");
            }
        }
        let s4 = psu3_scheme(4).unwrap();
        assert!(s4.predicted.iter().any(|p| p.degree == BigInt::from(13) && p.value == rat(2, 3) && p.count == 4));
        assert!(psu3_scheme(6).is_err());
        assert!(psu3_scheme(2).is_err());
    }

    /// Brute-force count of T straight from the definition.
    fn brute_t(q: u64) -> usize {
        let n = q + 1;
        let mut c = 0;
        for k in 1..=n {
            for l in k + 1..=n {
                for m in l + 1..=n {
                    if (k + l + m) % n == 0 {
                        c += 1;
                    }
                }
            }
        }
        c
    }

    #[test]
    fn triple_sets() {
        for q in [4, 7, 8, 9, 13] {
            assert_eq!(triples(q, false, Exec::Sequential).len(), brute_t(q));
        }
        let r = psu3_triple_counts(7, Exec::Sequential).unwrap();
        assert_eq!(r.triples, 7);
        assert_eq!(r.tally[8], 3);
        assert!(r.tally[1..8].iter().enumerate().all(|(i, &c)| c == if i % 2 == 0 { 3 } else { 2 }));
        assert!(r.checks.iter().all(|c| c.passed));
        let r = psu3_triple_counts(4, Exec::Sequential).unwrap();
        assert_eq!((r.triples, r.tally[5]), (2, 2));
        assert!(r.tally[1..5].iter().all(|&c| c == 1));
        assert!(psu3_triple_counts(1001, Exec::Sequential).is_err());
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic(1), IntPoly::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic(6), IntPoly::from_i64(&[1, -1, 1]));
        assert_eq!(cyclotomic(8), IntPoly::from_i64(&[1, 0, 0, 0, 1]));
        assert_eq!(cyclotomic(12).degree(), 4);
    }

    /// The sum evaluated in floating point from the definition.
    fn numeric_sum(q: u64, u: u64) -> f64 {
        let n = (q + 1) as f64;
        triples(q, gcd3(q) == 3, Exec::Sequential)
            .iter()
            .flat_map(|&(k, l, m)| [k, l, m])
            .map(|e| (2.0 * std::f64::consts::PI * (3 * u * e) as f64 / n).cos())
            .sum()
    }

    #[test]
    fn sums_agree_with_floating_point() {
        for q in [4, 5, 7, 8, 9, 11, 13, 16, 17] {
            for u in character_sum_range(q) {
                let s = psu3_character_sum(q, u).unwrap();
                let v = crate::rational::to_f64(s.value.as_ref().unwrap());
                assert!((v - numeric_sum(q, u)).abs() < 1e-9, "q={q} u={u}");
            }
        }
        // q = 7: u = 4 gives -3, not the stated -4; the eigenvalue is still -1
        let s = psu3_character_sum(7, 4).unwrap();
        assert_eq!(s.value, Some(int(-3)));
        assert_eq!(s.claimed, int(-4));
        assert_eq!(s.implied_eigenvalue, Some(int(-1)));
        assert_eq!(psu3_character_sum(7, 1).unwrap().value, Some(int(1)));
        assert!(psu3_character_sum(7, 8).is_err());
    }

    #[test]
    fn psu3_3_weighted_spectrum() {
        let r = psu3_enumerated_check(3, Exec::default()).unwrap();
        for c in &r.checks {
            assert!(c.passed, "{c:?}");
        }
        assert!(r.spectrum.iter().any(|(v, _)| *v == int(1)));
    }
}
