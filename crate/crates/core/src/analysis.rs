//! One group end to end: enumerate (or load a character table), classes,
//! action data, weighted spectrum, bounds, and the optional exact searches.

use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::bounds::{
    ekr_verdict, eigen_enclosure, weight_subset_search, BoundReport, ClassAlgebraSource,
    SpectralSummary, SubsetSearchResult,
};
use crate::chartab::{chartab_ekr_verdict, chartab_spectrum, load_chartab, ChartabSource, CharacterTableFile};
use crate::classes::{action_stats, ActionStats, ConjugacyClassTable, Transitivity};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::families::Check;
use crate::groups::{load_group_file, MatrixGroupSpec};
use crate::rational::{int, Enclosure};
use crate::search::{
    find_sharply_transitive_clique, max_coclique_exact, module_v_rank, CliqueResult, CocliqueResult,
    DEFAULT_BUDGET, DEFAULT_MAX_ORDER, MODULE_V_MAX_ORDER,
};
use crate::spectra::{spectrum, verify_trace_identity, ClassAlgebra, Spectrum, WeightVector};
use crate::table::{GroupTable, DEFAULT_CAP};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GroupSelector {
    Family { spec: MatrixGroupSpec },
    File { path: PathBuf },
    Chartab { path: PathBuf },
}

/// Weights on the derangement classes.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum WeightSpec {
    Unit,
    /// Weight 1 on the named classes, 0 elsewhere.
    Classes(Vec<String>),
    /// One weight per derangement class, in class order.
    Explicit(#[serde(serialize_with = "crate::rational::decimal")] Vec<BigRational>),
    /// The first inverse-closed 0/1 weighting that certifies.
    Search,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub group: GroupSelector,
    pub weights: WeightSpec,
    pub cap: usize,
    /// Node budget of the exact searches.
    pub budget: u64,
    /// Largest group order the exact coclique search runs on.
    pub search_max_order: usize,
    /// Run the clique and coclique searches.
    pub search: bool,
    #[serde(skip)]
    pub exec: Exec,
}

impl RunConfig {
    pub fn new(group: GroupSelector) -> Self {
        Self {
            group,
            weights: WeightSpec::Unit,
            cap: DEFAULT_CAP,
            budget: DEFAULT_BUDGET,
            search_max_order: DEFAULT_MAX_ORDER,
            search: false,
            exec: Exec::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    Enumerated,
    CharacterTable,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupInfo {
    pub name: String,
    pub source: Source,
    pub degree: u64,
    pub order: u64,
    pub transitivity: Option<Transitivity>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassRow {
    pub label: String,
    pub size: u64,
    pub fixed_points: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub element_order: Option<u64>,
    #[serde(serialize_with = "crate::rational::decimal")]
    pub weight: BigRational,
}

#[derive(Clone, Debug, Serialize)]
pub struct StatsSummary {
    pub derangement_count: u64,
    #[serde(serialize_with = "crate::rational::serialize_rational")]
    pub derangement_proportion: BigRational,
    pub derangement_classes: Vec<String>,
    pub classes: Vec<ClassRow>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumRow {
    pub value: Enclosure,
    pub multiplicity: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub toolkit_version: &'static str,
    pub config: RunConfig,
    pub group: GroupInfo,
    pub stats: StatsSummary,
    pub spectrum: Vec<SpectrumRow>,
    /// `Σm·λ = 0` and `Σm·λ² = |G|·Σaᵢ²|Cᵢ|`; `None` if not decidable.
    pub trace_identity: Option<bool>,
    pub bounds: BoundReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight_search: Option<SubsetSearchResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clique: Option<CliqueResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coclique: Option<CocliqueResult>,
    pub checks: Vec<Check>,
}

impl AnalysisReport {
    pub fn certified(&self) -> bool {
        self.bounds.verdict.is_certified()
    }
}

/// An enumerated group with its classes and action data.
pub struct Enumerated {
    pub name: String,
    pub table: GroupTable,
    pub classes: ConjugacyClassTable,
    pub stats: ActionStats,
    pub checks: Vec<Check>,
}

impl Enumerated {
    pub fn build(sel: &GroupSelector, cap: usize, exec: Exec) -> Result<Self> {
        let (name, gens, mut checks, expected) = match sel {
            GroupSelector::Family { spec } => {
                (spec.name(), spec.generators()?, Vec::new(), Some(spec.expected_order()?))
            }
            GroupSelector::File { path } => (file_stem(path), load_group_file(path)?, Vec::new(), None),
            GroupSelector::Chartab { .. } => {
                return Err(Error::Precondition("a character table cannot be enumerated".into()))
            }
        };
        let table = GroupTable::enumerate(&gens, cap)?;
        if let Some(e) = expected {
            checks.push(Check::eq(
                "order equals the closed form",
                BigInt::from(table.order()),
                BigInt::from(e),
            ));
        }
        let classes = ConjugacyClassTable::compute_with(&table, exec);
        let stats = action_stats(&table, &classes)?;
        Ok(Self {
            name,
            table,
            classes,
            stats,
            checks,
        })
    }

    pub fn from_spec(spec: MatrixGroupSpec, exec: Exec) -> Result<Self> {
        Self::build(&GroupSelector::Family { spec }, DEFAULT_CAP, exec)
    }

    pub fn from_file(path: impl AsRef<Path>, exec: Exec) -> Result<Self> {
        Self::build(
            &GroupSelector::File {
                path: path.as_ref().to_path_buf(),
            },
            DEFAULT_CAP,
            exec,
        )
    }

    pub fn algebra(&self, exec: Exec) -> ClassAlgebra<'_> {
        ClassAlgebra::with_exec(&self.table, &self.classes, exec)
    }

    /// Weight vector over the derangement classes for a specification;
    /// `Search` is resolved by the caller.
    pub fn weights(&self, spec: &WeightSpec) -> Result<WeightVector> {
        let der = &self.stats.derangement_classes;
        match spec {
            WeightSpec::Unit | WeightSpec::Search => Ok(WeightVector::unit(der.len())),
            WeightSpec::Classes(names) => {
                let mut w = WeightVector::zero(der.len());
                for name in names {
                    let c = self
                        .classes
                        .find_label(name)
                        .ok_or_else(|| Error::InvalidParameters(format!("unknown class {name}")))?;
                    let k = self.stats.derangement_index(c).ok_or_else(|| {
                        Error::Precondition(format!("class {name} is not a derangement class"))
                    })?;
                    w.0[k] = BigRational::one();
                }
                Ok(w)
            }
            WeightSpec::Explicit(v) => {
                if v.len() != der.len() {
                    return Err(Error::WeightLength {
                        got: v.len(),
                        expected: der.len(),
                    });
                }
                Ok(WeightVector(v.clone()))
            }
        }
    }

    /// Exact weighted spectrum.
    pub fn spectrum(&self, weights: &WeightVector, exec: Exec) -> Result<Spectrum> {
        spectrum(&self.algebra(exec), &self.stats, weights)
    }

    /// Spectrum and verdict for a weighting, without searches.
    pub fn verdict(&self, weights: &WeightVector, exec: Exec) -> Result<(Spectrum, BoundReport)> {
        let s = self.spectrum(weights, exec)?;
        let summary = SpectralSummary::from_spectrum(&s, &self.classes, &self.stats, weights)?;
        let report = ekr_verdict(
            &self.name,
            self.stats.degree as u64,
            self.stats.order,
            self.stats.derangement_count,
            Some(&summary),
            None,
        );
        Ok((s, report))
    }

    pub fn class_reps(&self) -> Vec<u32> {
        self.classes.classes().iter().map(|c| c.representative).collect()
    }

    fn stats_summary(&self, weights: &WeightVector) -> StatsSummary {
        let rows = self
            .classes
            .classes()
            .iter()
            .enumerate()
            .map(|(c, info)| ClassRow {
                label: info.label.clone(),
                size: info.size,
                fixed_points: info.fixed_points as u64,
                element_order: Some(info.element_order),
                weight: self
                    .stats
                    .derangement_index(c)
                    .map(|k| weights.0[k].clone())
                    .unwrap_or_else(BigRational::zero),
            })
            .collect();
        StatsSummary {
            derangement_count: self.stats.derangement_count,
            derangement_proportion: BigRational::new(
                self.stats.derangement_count.into(),
                self.stats.order.into(),
            ),
            derangement_classes: self
                .stats
                .derangement_classes
                .iter()
                .map(|&c| self.classes.class(c).label.clone())
                .collect(),
            classes: rows,
        }
    }
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Runs the pipeline described by `cfg`.
pub fn analyze(cfg: &RunConfig) -> Result<AnalysisReport> {
    match &cfg.group {
        GroupSelector::Chartab { path } => analyze_chartab(cfg, &load_chartab(path)?),
        sel => {
            let e = Enumerated::build(sel, cfg.cap, cfg.exec)?;
            analyze_enumerated(cfg, &e)
        }
    }
}

pub fn analyze_enumerated(cfg: &RunConfig, e: &Enumerated) -> Result<AnalysisReport> {
    let exec = cfg.exec;
    let alg = e.algebra(exec);
    let (weights, weight_search) = match &cfg.weights {
        WeightSpec::Search => {
            let r = weight_subset_search(
                &ClassAlgebraSource {
                    alg: &alg,
                    stats: &e.stats,
                },
                exec,
            )?;
            (r.weights.clone(), Some(r))
        }
        spec => (e.weights(spec)?, None),
    };
    let s = spectrum(&alg, &e.stats, &weights)?;
    let trace = verify_trace_identity(&s, &e.classes, &e.stats, &weights);
    let summary = SpectralSummary::from_spectrum(&s, &e.classes, &e.stats, &weights)?;
    let (clique, coclique) = if cfg.search {
        let clique = find_sharply_transitive_clique(&e.table, &e.class_reps(), cfg.budget, cfg.search_max_order)?;
        let coclique = if e.table.order() <= cfg.search_max_order {
            Some(max_coclique_exact(&e.table, cfg.search_max_order, cfg.budget)?)
        } else {
            None
        };
        (Some(clique), coclique)
    } else {
        (None, None)
    };
    let bounds = ekr_verdict(
        &e.name,
        e.stats.degree as u64,
        e.stats.order,
        e.stats.derangement_count,
        Some(&summary),
        clique.as_ref().and_then(|c| c.elements.as_deref()),
    );
    let mut checks = e.checks.clone();
    if let Some(c) = &coclique {
        if c.complete {
            checks.push(Check::eq(
                "maximum intersecting set has size |G|/|Omega|",
                int(c.witness.size as i64),
                bounds.target.clone(),
            ));
        }
    }
    Ok(AnalysisReport {
        schema_version: SCHEMA_VERSION,
        toolkit_version: TOOLKIT_VERSION,
        config: cfg.clone(),
        group: GroupInfo {
            name: e.name.clone(),
            source: Source::Enumerated,
            degree: e.stats.degree as u64,
            order: e.stats.order,
            transitivity: Some(e.stats.transitivity),
        },
        stats: e.stats_summary(&weights),
        spectrum: s
            .entries
            .iter()
            .map(|x| SpectrumRow {
                value: eigen_enclosure(&x.value),
                multiplicity: x.multiplicity,
            })
            .collect(),
        trace_identity: Some(trace),
        bounds,
        weight_search,
        clique,
        coclique,
        checks,
    })
}

fn chartab_weights(t: &CharacterTableFile, spec: &WeightSpec) -> Result<WeightVector> {
    let n = t.derangement_classes().len();
    match spec {
        WeightSpec::Unit | WeightSpec::Search => Ok(WeightVector::unit(n)),
        WeightSpec::Classes(names) => {
            let names: Vec<&str> = names.iter().map(String::as_str).collect();
            t.weights_from_names(&names)
        }
        WeightSpec::Explicit(v) => {
            if v.len() != n {
                return Err(Error::WeightLength {
                    got: v.len(),
                    expected: n,
                });
            }
            Ok(WeightVector(v.clone()))
        }
    }
}

pub fn analyze_chartab(cfg: &RunConfig, t: &CharacterTableFile) -> Result<AnalysisReport> {
    if cfg.search {
        return Err(Error::Precondition(
            "exact searches need an enumerated group, not a character table".into(),
        ));
    }
    let (weights, weight_search) = match &cfg.weights {
        WeightSpec::Search => {
            let r = weight_subset_search(&ChartabSource(t), cfg.exec)?;
            (r.weights.clone(), Some(r))
        }
        spec => (chartab_weights(t, spec)?, None),
    };
    let bounds = chartab_ekr_verdict(t, &weights)?;
    let mut values: Vec<(Enclosure, u64)> = chartab_spectrum(t, &weights)?
        .into_iter()
        .map(|(v, m)| {
            let e = match v.as_rational() {
                Some(r) => Enclosure::point(r),
                None => v.enclosure(crate::bounds::SQRT_BITS).ok_or(Error::NonRealSpectrum)?,
            };
            Ok((e, m))
        })
        .collect::<Result<_>>()?;
    values.sort_by(|(a, _), (b, _)| a.lo.cmp(&b.lo).then(a.hi.cmp(&b.hi)));
    let der = t.derangement_classes();
    let square_sum: BigRational = der
        .iter()
        .zip(&weights.0)
        .map(|(&c, a)| a * a * int(t.classes[c].size as i64))
        .sum();
    // decidable exactly when every eigenvalue is rational
    let trace = values.iter().all(|(e, _)| e.is_exact()).then(|| {
        let s1: BigRational = values.iter().map(|(e, m)| &e.lo * int(*m as i64)).sum();
        let s2: BigRational = values.iter().map(|(e, m)| &e.lo * &e.lo * int(*m as i64)).sum();
        s1.is_zero() && s2 == square_sum * int(t.order as i64)
    });
    let classes = t
        .classes
        .iter()
        .enumerate()
        .map(|(c, cl)| ClassRow {
            label: cl.name.clone(),
            size: cl.size,
            fixed_points: cl.fixed_points,
            element_order: None,
            weight: der
                .iter()
                .position(|&d| d == c)
                .map(|k| weights.0[k].clone())
                .unwrap_or_else(BigRational::zero),
        })
        .collect();
    Ok(AnalysisReport {
        schema_version: SCHEMA_VERSION,
        toolkit_version: TOOLKIT_VERSION,
        config: cfg.clone(),
        group: GroupInfo {
            name: t.name.clone(),
            source: Source::CharacterTable,
            degree: t.degree,
            order: t.order,
            transitivity: None,
        },
        stats: StatsSummary {
            derangement_count: t.derangement_count(),
            derangement_proportion: BigRational::new(t.derangement_count().into(), t.order.into()),
            derangement_classes: der.iter().map(|&c| t.classes[c].name.clone()).collect(),
            classes,
        },
        spectrum: values
            .into_iter()
            .map(|(value, multiplicity)| SpectrumRow { value, multiplicity })
            .collect(),
        trace_identity: trace,
        bounds,
        weight_search,
        clique: None,
        coclique: None,
        checks: Vec::new(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BruteReport {
    pub schema_version: u32,
    pub toolkit_version: &'static str,
    pub config: RunConfig,
    pub group: GroupInfo,
    pub coclique: CocliqueResult,
    #[serde(serialize_with = "crate::rational::serialize_rational")]
    pub target: BigRational,
    pub clique: CliqueResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub module_v_rank: Option<usize>,
    pub expected_module_v_rank: u64,
    pub checks: Vec<Check>,
}

impl BruteReport {
    pub fn complete(&self) -> bool {
        self.coclique.complete
    }
}

/// Exact maximum intersecting set with its classification, the clique
/// search, and the rank of the module V.
pub fn brute(cfg: &RunConfig) -> Result<BruteReport> {
    let e = Enumerated::build(&cfg.group, cfg.cap, cfg.exec)?;
    let (order, degree) = (e.stats.order, e.stats.degree as u64);
    let coclique = max_coclique_exact(&e.table, cfg.search_max_order, cfg.budget)?;
    let clique = find_sharply_transitive_clique(&e.table, &e.class_reps(), cfg.budget, cfg.search_max_order)?;
    let two_transitive = e.stats.transitivity == Transitivity::TwoTransitive;
    let rank = (two_transitive && e.table.order() <= MODULE_V_MAX_ORDER)
        .then(|| module_v_rank(&e.table))
        .transpose()?;
    let expected_rank = 1 + (degree - 1) * (degree - 1);
    let target = BigRational::new(order.into(), degree.into());
    let mut checks = e.checks.clone();
    if coclique.complete {
        checks.push(Check::eq(
            "maximum intersecting set has size |G|/|Omega|",
            int(coclique.witness.size as i64),
            target.clone(),
        ));
    }
    if let Some(r) = rank {
        checks.push(Check::eq("rank of V = 1+(|Omega|-1)^2", r as u64, expected_rank));
    }
    Ok(BruteReport {
        schema_version: SCHEMA_VERSION,
        toolkit_version: TOOLKIT_VERSION,
        config: cfg.clone(),
        group: GroupInfo {
            name: e.name.clone(),
            source: Source::Enumerated,
            degree,
            order,
            transitivity: Some(e.stats.transitivity),
        },
        coclique,
        target,
        clique,
        module_v_rank: rank,
        expected_module_v_rank: expected_rank,
        checks,
    })
}
