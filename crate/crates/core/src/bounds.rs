//! Coclique bounds for derangement graphs and the resulting verdicts.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::classes::{ActionStats, ConjugacyClassTable};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::rational::{int, serialize_rational, sqrt_enclosure, Enclosure};
use crate::spectra::{eigenvalues_exact, ClassAlgebra, Eigenvalue, Spectrum, WeightVector};
use crate::table::GroupTable;

/// Bits of precision for square-root enclosures.
pub const SQRT_BITS: u32 = 64;

/// `|G|·(1 − d/τ)⁻¹`.
pub fn ratio_bound(d: &BigRational, tau: &BigRational, order: u64) -> Result<BigRational> {
    if !tau.is_negative() {
        return Err(Error::Precondition(format!(
            "least eigenvalue {tau} is not negative; the ratio bound is vacuous"
        )));
    }
    if !d.is_positive() {
        return Err(Error::Precondition(format!("largest eigenvalue {d} is not positive")));
    }
    Ok(int(order) / (BigRational::one() - d / tau))
}

/// The ratio bound for a least eigenvalue known only up to an enclosure.
/// The bound decreases as τ increases.
pub fn ratio_bound_enclosure(d: &BigRational, tau: &Enclosure, order: u64) -> Result<Enclosure> {
    Ok(Enclosure {
        lo: ratio_bound(d, &tau.hi, order)?,
        hi: ratio_bound(d, &tau.lo, order)?,
    })
}

/// Ratio bound from the extreme eigenvalues of a weighted spectrum.
pub fn weighted_ratio_bound(s: &Spectrum) -> Result<Enclosure> {
    if s.entries.len() < 2 {
        return Err(Error::Precondition(
            "spectrum has a single eigenvalue; weights are degenerate".into(),
        ));
    }
    let d = s
        .max()
        .value
        .exact()
        .ok_or_else(|| Error::Precondition("largest eigenvalue is not rational".into()))?;
    ratio_bound_enclosure(d, &eigen_enclosure(&s.min().value), s.order)
}

pub fn eigen_enclosure(e: &Eigenvalue) -> Enclosure {
    Enclosure {
        lo: e.lower().clone(),
        hi: e.upper().clone(),
    }
}

pub fn clique_coclique_bound(n: u64, clique: u64) -> Result<BigRational> {
    if clique == 0 {
        return Err(Error::Precondition("clique must be nonempty".into()));
    }
    Ok(BigRational::new(n.into(), clique.into()))
}

/// Outcome of a critical-degree computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CriticalRhs {
    /// Characters of degree above this value cannot afford an eigenvalue
    /// below λ(ψ).
    Value(Enclosure),
    /// Negative radicand: no character other than ψ can compete.
    NoCompetitor,
}

/// `(|Ω|−1)·√(|G|/|𝒟| − 2)`.
pub fn critical_degree_rhs(degree: u64, order: u64, derangements: u64) -> Result<CriticalRhs> {
    if derangements == 0 {
        return Err(Error::Precondition("action has no derangements".into()));
    }
    Ok(critical_from_radicand(
        degree,
        BigRational::new(order.into(), derangements.into()) - int(2),
    ))
}

/// `(|Ω|−1)·√(|G|·Σaᵢ²|Cᵢ| / (Σaᵢ|Cᵢ|)² − 2)`.
pub fn weighted_critical_rhs(
    degree: u64,
    order: u64,
    weights: &[BigRational],
    sizes: &[u64],
) -> Result<CriticalRhs> {
    if weights.len() != sizes.len() {
        return Err(Error::WeightLength {
            got: weights.len(),
            expected: sizes.len(),
        });
    }
    if weights.iter().any(|a| a.is_negative()) || weights.iter().all(|a| a.is_zero()) {
        return Err(Error::Precondition(
            "weights must be nonnegative and not all zero".into(),
        ));
    }
    let s1: BigRational = weights.iter().zip(sizes).map(|(a, &c)| a * int(c)).sum();
    let s2: BigRational = weights.iter().zip(sizes).map(|(a, &c)| a * a * int(c)).sum();
    Ok(critical_from_radicand(degree, int(order) * s2 / (&s1 * &s1) - int(2)))
}

fn critical_from_radicand(degree: u64, radicand: BigRational) -> CriticalRhs {
    if radicand.is_negative() {
        return CriticalRhs::NoCompetitor;
    }
    CriticalRhs::Value(sqrt_enclosure(&radicand, SQRT_BITS).scale(&int(degree - 1)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    Ratio,
    WeightedRatio,
    CliqueCoclique,
    Critical,
    WeightedCritical,
    SubgroupReduction,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundEntry {
    pub name: BoundKind,
    pub inputs: BTreeMap<String, String>,
    /// `None` when the bound is vacuous (see `note`).
    pub value: Option<Enclosure>,
    /// The bound equals `|G|/|Ω|` exactly.
    pub tight: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    EkrCertified,
    EkrCertifiedWithConjectureSurrogate,
    Inconclusive,
}

impl Verdict {
    pub fn is_certified(self) -> bool {
        self != Verdict::Inconclusive
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    Eigenvalues {
        #[serde(serialize_with = "serialize_rational")]
        d: BigRational,
        #[serde(serialize_with = "serialize_rational")]
        tau: BigRational,
    },
    Clique {
        elements: Vec<u32>,
    },
    Subgroup {
        order: u64,
    },
}

/// The testable stand-in for "a unique character attains the minimum": the
/// least eigenvalue is −(Σaᵢ|Cᵢ|)/(|Ω|−1) with multiplicity (|Ω|−1)².
#[derive(Clone, Debug, Serialize)]
pub struct SurrogateCheck {
    pub least_eigenvalue: Enclosure,
    #[serde(serialize_with = "serialize_rational")]
    pub expected_value: BigRational,
    pub multiplicity: u64,
    pub expected_multiplicity: u64,
    pub holds: bool,
    pub caveat: &'static str,
}

const SURROGATE_CAVEAT: &str = "multiplicity (|Omega|-1)^2 forces a character of degree |Omega|-1 to \
attain the minimum but does not by itself exclude other decompositions";

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub group: String,
    pub degree: u64,
    pub order: u64,
    pub derangements: u64,
    #[serde(serialize_with = "serialize_rational")]
    pub target: BigRational,
    pub bounds: Vec<BoundEntry>,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub surrogate: Option<SurrogateCheck>,
}

/// Everything the verdict needs from a (weighted) spectrum.
#[derive(Clone, Debug)]
pub struct SpectralSummary {
    pub max: BigRational,
    pub min: Enclosure,
    pub min_multiplicity: Option<u64>,
    /// `Σaᵢ²|Cᵢ|`.
    pub square_sum: BigRational,
    pub unit_weights: bool,
    pub weights: Vec<BigRational>,
    pub sizes: Vec<u64>,
}

impl SpectralSummary {
    pub fn from_spectrum(
        s: &Spectrum,
        classes: &ConjugacyClassTable,
        stats: &ActionStats,
        weights: &WeightVector,
    ) -> Result<Self> {
        Ok(Self {
            max: s
                .max()
                .value
                .exact()
                .cloned()
                .ok_or_else(|| Error::Precondition("largest eigenvalue is not rational".into()))?,
            min: eigen_enclosure(&s.min().value),
            min_multiplicity: Some(s.min().multiplicity),
            square_sum: weights.square_sum(classes, stats),
            unit_weights: weights.0.iter().all(|a| a.is_one()),
            weights: weights.0.clone(),
            sizes: stats
                .derangement_classes
                .iter()
                .map(|&c| classes.class(c).size)
                .collect(),
        })
    }
}

fn inputs(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// Runs every applicable bound and renders the verdict.
pub fn ekr_verdict(
    group: &str,
    degree: u64,
    order: u64,
    derangements: u64,
    spectral: Option<&SpectralSummary>,
    clique: Option<&[u32]>,
) -> BoundReport {
    let target = BigRational::new(order.into(), degree.into());
    let mut bounds = Vec::new();
    let mut witness = None;
    let mut surrogate = None;
    if let Some(sp) = spectral {
        let kind = if sp.unit_weights {
            BoundKind::Ratio
        } else {
            BoundKind::WeightedRatio
        };
        let ins = inputs(&[
            ("d", sp.max.to_string()),
            ("tau", sp.min.to_string()),
            ("order", order.to_string()),
        ]);
        match ratio_bound_enclosure(&sp.max, &sp.min, order) {
            Ok(value) => {
                let tight = value.exact() == Some(&target);
                if tight && witness.is_none() {
                    witness = Some(Witness::Eigenvalues {
                        d: sp.max.clone(),
                        tau: sp.min.lo.clone(),
                    });
                }
                bounds.push(BoundEntry {
                    name: kind,
                    inputs: ins,
                    value: Some(value),
                    tight,
                    note: None,
                });
            }
            Err(e) => bounds.push(BoundEntry {
                name: kind,
                inputs: ins,
                value: None,
                tight: false,
                note: Some(e.to_string()),
            }),
        }
        let expected_value = -&sp.max / int(degree - 1);
        let expected_multiplicity = (degree - 1) * (degree - 1);
        if let Some(m) = sp.min_multiplicity {
            surrogate = Some(SurrogateCheck {
                least_eigenvalue: sp.min.clone(),
                holds: sp.min.exact() == Some(&expected_value) && m == expected_multiplicity,
                expected_value,
                multiplicity: m,
                expected_multiplicity,
                caveat: SURROGATE_CAVEAT,
            });
        }
        let (kind, rhs) = if sp.unit_weights {
            (
                BoundKind::Critical,
                critical_degree_rhs(degree, order, derangements),
            )
        } else {
            (
                BoundKind::WeightedCritical,
                weighted_critical_rhs(degree, order, &sp.weights, &sp.sizes),
            )
        };
        let (value, note) = match rhs {
            Ok(CriticalRhs::Value(v)) => (
                Some(v),
                Some("degree threshold: only characters of at most this degree can afford an eigenvalue below the minimum from psi".to_string()),
            ),
            Ok(CriticalRhs::NoCompetitor) => (
                None,
                Some("negative radicand: no character other than psi can attain the minimum".to_string()),
            ),
            Err(e) => (None, Some(e.to_string())),
        };
        bounds.push(BoundEntry {
            name: kind,
            inputs: inputs(&[
                ("degree", degree.to_string()),
                ("order", order.to_string()),
                ("square_sum", sp.square_sum.to_string()),
            ]),
            value,
            tight: false,
            note,
        });
    }
    if let Some(c) = clique {
        if let Ok(value) = clique_coclique_bound(order, c.len() as u64) {
            let tight = value == target;
            if tight && witness.is_none() {
                witness = Some(Witness::Clique { elements: c.to_vec() });
            }
            bounds.push(BoundEntry {
                name: BoundKind::CliqueCoclique,
                inputs: inputs(&[("vertices", order.to_string()), ("clique", c.len().to_string())]),
                value: Some(Enclosure::point(value)),
                tight,
                note: None,
            });
        }
    }
    let certified = bounds.iter().any(|b| b.tight);
    let verdict = match (certified, surrogate.as_ref().is_some_and(|s| s.holds)) {
        (false, _) => Verdict::Inconclusive,
        (true, true) => Verdict::EkrCertifiedWithConjectureSurrogate,
        (true, false) => Verdict::EkrCertified,
    };
    BoundReport {
        group: group.to_string(),
        degree,
        order,
        derangements,
        target,
        bounds,
        verdict,
        witness,
        surrogate,
    }
}

/// Record of propagating an EKR bound from a transitive subgroup.
#[derive(Clone, Debug, Serialize)]
pub struct Propagation {
    pub subgroup_order: u64,
    pub group_order: u64,
    pub degree: u64,
    #[serde(serialize_with = "serialize_rational")]
    pub bound: BigRational,
}

/// If a transitive subgroup H has the EKR property, intersecting sets of G
/// have size at most |G|/|Ω|.
pub fn subgroup_reduction(
    g: &GroupTable,
    h: &[u32],
    h_report: &BoundReport,
) -> Result<(Propagation, BoundEntry)> {
    let sub = g.subgroup(h)?;
    if sub.order() as u64 != h_report.order {
        return Err(Error::Precondition(
            "subgroup report does not match the subgroup order".into(),
        ));
    }
    if !sub.is_k_transitive(1)? {
        return Err(Error::Intransitive);
    }
    if !h_report.verdict.is_certified() {
        return Err(Error::Precondition(
            "subgroup is not certified to have the EKR property".into(),
        ));
    }
    let bound = BigRational::new((g.order() as u64).into(), (g.degree() as u64).into());
    let rec = Propagation {
        subgroup_order: sub.order() as u64,
        group_order: g.order() as u64,
        degree: g.degree() as u64,
        bound: bound.clone(),
    };
    let entry = BoundEntry {
        name: BoundKind::SubgroupReduction,
        inputs: inputs(&[
            ("subgroup_order", rec.subgroup_order.to_string()),
            ("subgroup_verdict", format!("{:?}", h_report.verdict)),
        ]),
        value: Some(Enclosure::point(bound)),
        tight: true,
        note: None,
    };
    Ok((rec, entry))
}

/// A set of weight positions that must carry equal weight (a derangement
/// class together with its inverse class).
#[derive(Clone, Debug, Serialize)]
pub struct WeightUnit {
    pub positions: Vec<usize>,
    pub label: String,
}

/// A provider of extreme weighted eigenvalues: the class algebra of an
/// enumerated group, or a character table.
pub trait EigenSource: Sync {
    fn order(&self) -> u64;
    fn degree(&self) -> u64;
    fn weight_len(&self) -> usize;
    fn units(&self) -> Vec<WeightUnit>;
    /// Largest (exact) and least eigenvalue for the weighting.
    fn extremes(&self, weights: &WeightVector) -> Result<(BigRational, Enclosure)>;
}

/// Groups weight positions with their inverse positions; `inverse[k]` is the
/// position holding the inverse class of position `k`.
pub fn inverse_closed_units_by(labels: &[String], inverse: &[usize]) -> Vec<WeightUnit> {
    let mut out = Vec::new();
    let mut taken = vec![false; labels.len()];
    for k in 0..labels.len() {
        if taken[k] {
            continue;
        }
        let j = inverse[k];
        taken[k] = true;
        taken[j] = true;
        let mut positions = vec![k];
        let mut label = labels[k].clone();
        if j != k {
            positions.push(j);
            label = format!("{label},{}", labels[j]);
        }
        out.push(WeightUnit { positions, label });
    }
    out
}

/// Units for enumerated groups: each derangement class with its inverse.
pub fn inverse_closed_units(classes: &ConjugacyClassTable, stats: &ActionStats) -> Vec<WeightUnit> {
    let labels: Vec<String> = stats
        .derangement_classes
        .iter()
        .map(|&c| classes.class(c).label.clone())
        .collect();
    let inverse: Vec<usize> = stats
        .derangement_classes
        .iter()
        .map(|&c| stats.derangement_index(classes.class(c).inverse).unwrap())
        .collect();
    inverse_closed_units_by(&labels, &inverse)
}

/// [`EigenSource`] backed by the class algebra.
pub struct ClassAlgebraSource<'a> {
    pub alg: &'a ClassAlgebra<'a>,
    pub stats: &'a ActionStats,
}

impl EigenSource for ClassAlgebraSource<'_> {
    fn order(&self) -> u64 {
        self.stats.order
    }

    fn degree(&self) -> u64 {
        self.stats.degree as u64
    }

    fn weight_len(&self) -> usize {
        self.stats.derangement_classes.len()
    }

    fn units(&self) -> Vec<WeightUnit> {
        inverse_closed_units(self.alg.classes(), self.stats)
    }

    fn extremes(&self, weights: &WeightVector) -> Result<(BigRational, Enclosure)> {
        let m = self.alg.collapsed_matrix(self.stats, weights)?;
        let eig = eigenvalues_exact(&m);
        let max = eig
            .last()
            .and_then(|(e, _)| e.exact().cloned())
            .ok_or_else(|| Error::Precondition("largest eigenvalue is not rational".into()))?;
        Ok((max, eigen_enclosure(&eig[0].0)))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SubsetSearchResult {
    pub units: Vec<String>,
    #[serde(skip)]
    pub weights: WeightVector,
    pub bound: Enclosure,
    pub certified: bool,
    pub subsets_examined: usize,
}

/// Nonempty subsets of `0..u` as sorted index lists: the full set first,
/// then by increasing size, lexicographically within a size.
pub fn subset_order(u: usize) -> Vec<Vec<usize>> {
    let mut out = vec![(0..u).collect::<Vec<_>>()];
    for k in 1..u {
        let mut comb: Vec<usize> = (0..k).collect();
        loop {
            out.push(comb.clone());
            let Some(i) = (0..k).rev().find(|&i| comb[i] < u - k + i) else {
                break;
            };
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
        }
    }
    out
}

/// Maximum number of weight units the subset search accepts.
pub const MAX_SEARCH_UNITS: usize = 20;

/// Searches 0/1 weightings over inverse-closed units for one whose ratio
/// bound is `|G|/|Ω|`; otherwise returns the weighting with the least bound.
pub fn weight_subset_search(src: &dyn EigenSource, exec: Exec) -> Result<SubsetSearchResult> {
    let units = src.units();
    if units.is_empty() {
        return Err(Error::Precondition("there are no derangement classes".into()));
    }
    if units.len() > MAX_SEARCH_UNITS {
        return Err(Error::Precondition(format!(
            "{} weight units exceed the search limit of {MAX_SEARCH_UNITS}",
            units.len()
        )));
    }
    let order = src.order();
    let target = BigRational::new(order.into(), src.degree().into());
    let subsets = subset_order(units.len());
    let weights_of = |subset: &[usize]| {
        let mut w = WeightVector::zero(src.weight_len());
        for &u in subset {
            for &p in &units[u].positions {
                w.0[p] = BigRational::one();
            }
        }
        w
    };
    let bound_of = |i: usize| -> Option<Enclosure> {
        let (d, tau) = src.extremes(&weights_of(&subsets[i])).ok()?;
        ratio_bound_enclosure(&d, &tau, order).ok()
    };
    let result = |i: usize, bound: Enclosure, examined: usize| SubsetSearchResult {
        units: subsets[i].iter().map(|&u| units[u].label.clone()).collect(),
        weights: weights_of(&subsets[i]),
        certified: bound.exact() == Some(&target),
        bound,
        subsets_examined: examined,
    };
    if let Some(i) = exec.find_first(0..subsets.len(), |i| {
        bound_of(i).is_some_and(|b| b.exact() == Some(&target))
    }) {
        return Ok(result(i, bound_of(i).unwrap(), i + 1));
    }
    let all = exec.map_range(0..subsets.len(), bound_of);
    let (best, bound) = all
        .into_iter()
        .enumerate()
        .filter_map(|(i, b)| b.map(|b| (i, b)))
        .min_by(|(_, a), (_, b)| a.lo.cmp(&b.lo).then(a.hi.cmp(&b.hi)))
        .ok_or_else(|| Error::Precondition("no weighting gives a finite ratio bound".into()))?;
    Ok(result(best, bound, subsets.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_bound_examples() {
        assert_eq!(ratio_bound(&int(12544), &int(-196), 29120).unwrap(), int(448));
        assert_eq!(ratio_bound(&int(2), &int(-1), 6).unwrap(), int(2));
        assert_eq!(
            ratio_bound(&int(8064000), &int(-46080), 44352000).unwrap(),
            int(252000)
        );
        assert!(ratio_bound(&int(2), &int(0), 6).is_err());
    }

    #[test]
    fn critical_examples() {
        // PSL2(7) on 8 points: 7·√(2/3)
        let CriticalRhs::Value(e) = critical_degree_rhs(8, 168, 63).unwrap() else {
            panic!()
        };
        assert!((e.midpoint() - 7.0 * (2f64 / 3.0).sqrt()).abs() < 1e-12);
        assert_eq!(
            critical_degree_rhs(8, 168, 84).unwrap(),
            CriticalRhs::Value(Enclosure::point(int(0)))
        );
        assert_eq!(critical_degree_rhs(3, 6, 4).unwrap(), CriticalRhs::NoCompetitor);
        // single class: (|Ω|−1)·√(|G|/|C| − 2)
        let w = weighted_critical_rhs(36, 1451520, &[int(1)], &[161280]).unwrap();
        let CriticalRhs::Value(e) = w else { panic!() };
        assert!((e.midpoint() - 35.0 * 7f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn subset_order_is_full_then_by_size() {
        assert_eq!(
            subset_order(3),
            vec![
                vec![0, 1, 2],
                vec![0],
                vec![1],
                vec![2],
                vec![0, 1],
                vec![0, 2],
                vec![1, 2]
            ]
        );
        assert_eq!(subset_order(1), vec![vec![0]]);
        assert_eq!(subset_order(5).len(), 31);
    }

    #[test]
    fn clique_bound() {
        assert_eq!(clique_coclique_bound(6, 3).unwrap(), int(2));
        assert_eq!(clique_coclique_bound(6, 1).unwrap(), int(6));
        assert!(clique_coclique_bound(6, 0).is_err());
    }
}
