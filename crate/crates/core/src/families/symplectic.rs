//! Sp₂ₙ(2) on the forms of plus and minus type: the single-class weighting
//! by the maximal-torus class, the degree filter, and the fixed-point
//! identities checked on an enumerated group.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::Check;
use crate::bounds::{ekr_verdict, BoundReport, SpectralSummary};
use crate::classes::{action_stats, ConjugacyClassTable};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::groups::symplectic::{fixed_space_dim, form_points, forms_generators, sp_order};
use crate::rational::serialize_rational;
use crate::spectra::{spectrum, ClassAlgebra, WeightVector};
use crate::table::{GroupTable, DEFAULT_CAP};

#[derive(Clone, Debug, Serialize)]
pub struct SpScheme {
    pub n: u32,
    pub plus: bool,
    #[serde(serialize_with = "crate::rational::decimal")]
    pub order: BigInt,
    #[serde(serialize_with = "crate::rational::decimal")]
    pub degree: BigInt,
    /// `2ⁿ + ε·1`, the order of the torus T^ε.
    #[serde(serialize_with = "crate::rational::decimal")]
    pub torus: BigInt,
    #[serde(serialize_with = "crate::rational::decimal")]
    pub d: BigInt,
    #[serde(serialize_with = "serialize_rational")]
    pub tau: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub bound: BigRational,
    #[serde(serialize_with = "crate::rational::decimal")]
    pub alpha: BigInt,
    #[serde(serialize_with = "crate::rational::decimal")]
    pub beta: BigInt,
    #[serde(serialize_with = "crate::rational::decimal")]
    pub zeta1: BigInt,
    /// `(|Ω^ε|−1)²·(2ⁿ + ε·1 − 2)`, the square of the weighted critical bound.
    #[serde(serialize_with = "crate::rational::decimal")]
    pub critical_square: BigInt,
    /// Lower bound on the degrees of the remaining characters.
    #[serde(serialize_with = "serialize_rational")]
    pub large_degree: BigRational,
}

pub fn sp_scheme(n: u32, plus: bool) -> Result<SpScheme> {
    if n < 2 {
        return Err(Error::InvalidParameters(format!("Sp2n(2) needs n >= 2, got {n}")));
    }
    let two = |k: u32| BigInt::one() << k as usize;
    let e: i64 = if plus { 1 } else { -1 };
    let order = BigInt::from(sp_order(n));
    let degree = two(n - 1) * (two(n) + e);
    let torus = two(n) + e;
    let d = &order / &torus;
    let r = |x: &BigInt| BigRational::from_integer(x.clone());
    let tau = -r(&d) / r(&(&degree - 1));
    let bound = r(&order) / r(&degree);
    let alpha = (two(n - 1) - 1) * (two(n) - 1) / 3;
    let beta = (two(n - 1) + 1) * (two(n) + 1) / 3;
    let zeta1 = (two(2 * n) - 1) / 3;
    let critical_square = (&degree - 1u32).pow(2) * (&torus - 2);
    // ((2ⁿ⁻¹+1)(2ⁿ⁻²−2)/3 − 1)·2ⁿ⁻²(2ⁿ⁻¹−1), for n ≥ 2
    let large_degree = (r(&((two(n - 1) + 1) * (two(n - 2) - 2))) / BigRational::from_integer(3.into())
        - BigRational::one())
        * r(&(two(n - 2) * (two(n - 1) - 1)));
    Ok(SpScheme {
        n,
        plus,
        order,
        degree,
        torus,
        d,
        tau,
        bound,
        alpha,
        beta,
        zeta1,
        critical_square,
        large_degree,
    })
}

impl SpScheme {
    pub fn checks(&self) -> Vec<Check> {
        let n = self.n;
        let four_n = BigInt::one() << (2 * n) as usize;
        let other = sp_scheme(n, !self.plus).expect("valid n");
        let (om_plus, om_minus) = if self.plus {
            (&self.degree, &other.degree)
        } else {
            (&other.degree, &self.degree)
        };
        let mut out = vec![
            Check::eq(
                "alpha(1) + beta(1) + 2 zeta1(1) = 4^n",
                &self.alpha + &self.beta + 2 * &self.zeta1,
                four_n,
            ),
            Check::eq("alpha(1) + zeta1(1) = |Omega-|", &self.alpha + &self.zeta1, om_minus.clone()),
            Check::eq("beta(1) + zeta1(1) = |Omega+|", &self.beta + &self.zeta1, om_plus.clone()),
            Check::new(
                "alpha(1) + beta(1) < |Omega-| < |Omega+| < 2 zeta1(1)",
                &self.alpha + &self.beta < *om_minus && om_minus < om_plus && *om_plus < 2 * &self.zeta1,
                "",
            ),
            Check::eq(
                "d / (|Omega|-1) = -tau",
                BigRational::new(self.d.clone(), &self.degree - 1),
                -self.tau.clone(),
            ),
            Check::eq(
                "ratio bound |G|(-tau)/(d - tau) = |G|/|Omega|",
                BigRational::from_integer(self.order.clone()) * (-&self.tau)
                    / (BigRational::from_integer(self.d.clone()) - &self.tau),
                self.bound.clone(),
            ),
        ];
        if n >= 7 {
            let l = &self.large_degree;
            out.push(Check::new(
                "remaining degrees exceed the weighted critical bound",
                l > &BigRational::zero()
                    && l * l > BigRational::from_integer(self.critical_square.clone()),
                format!("threshold {l}, bound^2 = {}", self.critical_square),
            ));
        }
        out
    }
}

/// Sp₂ₙ(2) enumerated on all forms polarising to the symplectic form, with
/// its restrictions to the plus-type and minus-type forms sharing element
/// ids.
pub struct SpEnumerated {
    pub n: usize,
    pub forms: GroupTable,
    pub classes: ConjugacyClassTable,
    pub plus: GroupTable,
    pub minus: GroupTable,
}

impl SpEnumerated {
    pub fn build(n: usize, exec: Exec) -> Result<Self> {
        if n > 3 {
            return Err(Error::Precondition(format!(
                "Sp2n(2) is enumerated only for n <= 3, got {n}"
            )));
        }
        let forms = GroupTable::enumerate(&forms_generators(n)?, DEFAULT_CAP)?;
        let classes = ConjugacyClassTable::compute_with(&forms, exec);
        let plus = forms.restrict(&form_points(n, true))?;
        let minus = forms.restrict(&form_points(n, false))?;
        Ok(Self {
            n,
            forms,
            classes,
            plus,
            minus,
        })
    }

    pub fn action(&self, plus: bool) -> &GroupTable {
        if plus {
            &self.plus
        } else {
            &self.minus
        }
    }

    /// The class of a generator of the torus T^ε: order 2ⁿ+ε·1, centraliser
    /// of the same order, no nonzero fixed vector.
    pub fn torus_class(&self, plus: bool) -> Option<usize> {
        let t = (1u64 << self.n) as i64 + if plus { 1 } else { -1 };
        let g = self.forms.order() as u64;
        (0..self.classes.len()).find(|&c| {
            let info = self.classes.class(c);
            info.element_order as i64 == t
                && g / info.size == t as u64
                && fixed_space_dim(&self.forms, info.representative) == 0
        })
    }
}

/// `π⁺(g) + π⁻(g) = 2^{dim Ker(g−1)}` on every class, and the fixed-point
/// pattern of the torus generators: `π^ε(x^ε) = 0`, `π^{−ε}(x^ε) = 1`.
pub fn sp_weil_identity_check(e: &SpEnumerated) -> Vec<Check> {
    let mut out = Vec::new();
    let mut bad = Vec::new();
    for c in e.classes.classes() {
        let r = c.representative;
        let lhs = e.plus.fixed_points(r) + e.minus.fixed_points(r);
        let rhs = 1usize << fixed_space_dim(&e.forms, r);
        if lhs != rhs {
            bad.push(format!("{}: {lhs} vs {rhs}", c.label));
        }
    }
    out.push(Check::new(
        format!("fix+ + fix- = 2^dim Ker(g-1) on all {} classes", e.classes.len()),
        bad.is_empty(),
        bad.join("; "),
    ));
    for plus in [true, false] {
        let name = if plus { "x+" } else { "x-" };
        match e.torus_class(plus) {
            Some(c) => {
                let r = e.classes.class(c).representative;
                let own = e.action(plus).fixed_points(r);
                let other = e.action(!plus).fixed_points(r);
                out.push(Check::new(
                    format!("{name} fixes 0 points of its own action and 1 of the other"),
                    own == 0 && other == 1,
                    format!("class {}: {own} and {other}", e.classes.class(c).label),
                ));
            }
            None => out.push(Check::new(format!("{name} class located"), false, "no torus class")),
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct SpWeightedResult {
    pub plus: bool,
    pub class: String,
    pub checks: Vec<Check>,
    pub report: BoundReport,
}

/// Weighted spectrum with weight 1 on the torus class x^ε (and its inverse
/// class) and 0 elsewhere, compared with the closed forms.
pub fn sp_weighted_check(e: &SpEnumerated, plus: bool, exec: Exec) -> Result<SpWeightedResult> {
    let scheme = sp_scheme(e.n as u32, plus)?;
    let action = e.action(plus);
    let classes = e.classes.for_action(action)?;
    let stats = action_stats(action, &classes)?;
    let c = e
        .torus_class(plus)
        .ok_or_else(|| Error::Precondition("no torus class found".into()))?;
    let inv = classes.class(c).inverse;
    let weights = WeightVector(
        stats
            .derangement_classes
            .iter()
            .map(|&k| if k == c || k == inv { BigRational::one() } else { BigRational::zero() })
            .collect(),
    );
    if weights.is_zero() {
        return Err(Error::Precondition("the torus class has fixed points".into()));
    }
    let alg = ClassAlgebra::with_exec(action, &classes, exec);
    let s = spectrum(&alg, &stats, &weights)?;
    let summary = SpectralSummary::from_spectrum(&s, &classes, &stats, &weights)?;
    let name = format!("Sp{}(2) on {} forms", 2 * e.n, if plus { "plus" } else { "minus" });
    let report = ekr_verdict(
        &name,
        stats.degree as u64,
        stats.order,
        stats.derangement_count,
        Some(&summary),
        None,
    );
    let r = |x: &BigInt| BigRational::from_integer(x.clone());
    let bound_ok = report.bounds[0]
        .value
        .as_ref()
        .is_some_and(|b| b.is_exact() && b.lo == scheme.bound);
    let checks = vec![
        Check::eq("largest eigenvalue = d", summary.max.clone(), r(&scheme.d)),
        Check::new(
            "least eigenvalue = tau",
            summary.min.is_exact() && summary.min.lo == scheme.tau,
            format!("got {}, expected {}", summary.min, scheme.tau),
        ),
        Check::new(
            "weighted ratio bound = |G|/|Omega|",
            bound_ok,
            format!("expected {}", scheme.bound),
        ),
        Check::new("certified", report.verdict.is_certified(), format!("{:?}", report.verdict)),
    ];
    Ok(SpWeightedResult {
        plus,
        class: classes.class(c).label.clone(),
        checks,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn schemes_at_n3() {
        let p = sp_scheme(3, true).unwrap();
        assert_eq!(p.d, BigInt::from(161280));
        assert_eq!(p.tau, int(-4608));
        assert_eq!(p.bound, int(40320));
        assert_eq!((p.alpha.clone(), p.beta.clone(), p.zeta1.clone()), (7.into(), 15.into(), 21.into()));
        let m = sp_scheme(3, false).unwrap();
        assert_eq!(m.d, BigInt::from(207360));
        assert_eq!(m.tau, int(-7680));
        assert_eq!(m.bound, int(51840));
        for n in 3..=12 {
            for plus in [true, false] {
                for c in sp_scheme(n, plus).unwrap().checks() {
                    assert!(c.passed, "n={n} plus={plus}: {c:?}");
                }
            }
        }
        assert!(sp_scheme(1, true).is_err());
    }

    #[test]
    fn sp4_identities() {
        let e = SpEnumerated::build(2, Exec::default()).unwrap();
        assert_eq!(e.forms.order(), 720);
        // the torus classes only behave as described from n = 3 on
        let checks = sp_weil_identity_check(&e);
        assert!(checks[0].passed, "{:?}", checks[0]);
        assert!(SpEnumerated::build(4, Exec::default()).is_err());
    }
}
