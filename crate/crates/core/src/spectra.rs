//! Exact spectra of weighted derangement graphs through the class algebra.
//!
//! For a weighting `a` of the derangement classes, the weighted adjacency
//! matrix of the derangement graph is right multiplication by
//! `D = Σ a_k C̄_k` on the group algebra. `D` is central, so its
//! eigenvalues are those of multiplication by `D` on the centre, written in
//! the basis of class sums: the collapsed matrix. Multiplicities over the
//! whole group are recovered from the identity coefficients of the powers
//! `Dᵏ`, which are the traces `Tr(Aᵏ)/|G|`.

use std::cmp::Ordering;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::classes::{ActionStats, ConjugacyClassTable};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::charpoly;
use crate::poly::{isolate_real_roots, IntPoly, RealRoot, Sturm};
use crate::table::GroupTable;

/// Nonnegative rational weights, one per derangement class (in the order of
/// [`ActionStats::derangement_classes`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector(pub Vec<BigRational>);

impl WeightVector {
    pub fn unit(len: usize) -> Self {
        Self(vec![BigRational::one(); len])
    }

    pub fn zero(len: usize) -> Self {
        Self(vec![BigRational::zero(); len])
    }

    pub fn from_integers(values: &[i64]) -> Self {
        Self(
            values
                .iter()
                .map(|&v| BigRational::from_integer(v.into()))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|a| a.is_zero())
    }

    pub fn scaled(&self, c: &BigRational) -> Self {
        Self(self.0.iter().map(|a| a * c).collect())
    }

    /// Least common multiple of the denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::one(), |acc, a| acc.lcm(a.denom()))
    }

    /// Checks length, nonnegativity and equality on inverse-class pairs.
    pub fn validate(&self, classes: &ConjugacyClassTable, stats: &ActionStats) -> Result<()> {
        if self.len() != stats.derangement_classes.len() {
            return Err(Error::WeightLength {
                got: self.len(),
                expected: stats.derangement_classes.len(),
            });
        }
        if self.0.iter().any(|a| a.is_negative()) {
            return Err(Error::InvalidParameters("weights must be nonnegative".into()));
        }
        for (k, &c) in stats.derangement_classes.iter().enumerate() {
            let inv = classes.class(c).inverse;
            let j = stats
                .derangement_index(inv)
                .expect("inverse of a derangement is a derangement");
            if self.0[k] != self.0[j] {
                return Err(Error::NonRealSpectrum);
            }
        }
        Ok(())
    }

    /// `Σ aᵢ|Cᵢ|`, the principal eigenvalue.
    pub fn valency(&self, classes: &ConjugacyClassTable, stats: &ActionStats) -> BigRational {
        self.0
            .iter()
            .zip(&stats.derangement_classes)
            .map(|(a, &c)| a * BigRational::from_integer(classes.class(c).size.into()))
            .sum()
    }

    /// `Σ aᵢ²|Cᵢ|`.
    pub fn square_sum(&self, classes: &ConjugacyClassTable, stats: &ActionStats) -> BigRational {
        self.0
            .iter()
            .zip(&stats.derangement_classes)
            .map(|(a, &c)| a * a * BigRational::from_integer(classes.class(c).size.into()))
            .sum()
    }
}

/// Class-multiplication coefficients of an enumerated group, computed on
/// demand per class and cached.
pub struct ClassAlgebra<'a> {
    table: &'a GroupTable,
    classes: &'a ConjugacyClassTable,
    cache: Vec<OnceLock<Vec<u64>>>,
    exec: Exec,
}

impl<'a> ClassAlgebra<'a> {
    pub fn new(table: &'a GroupTable, classes: &'a ConjugacyClassTable) -> Self {
        Self::with_exec(table, classes, Exec::default())
    }

    pub fn with_exec(table: &'a GroupTable, classes: &'a ConjugacyClassTable, exec: Exec) -> Self {
        Self {
            table,
            classes,
            cache: (0..classes.len()).map(|_| OnceLock::new()).collect(),
            exec,
        }
    }

    pub fn classes(&self) -> &ConjugacyClassTable {
        self.classes
    }

    pub fn order(&self) -> u64 {
        self.classes.group_order()
    }

    /// Row-major `r × r` block whose entry `(i, j)` is the coefficient of
    /// `C̄ᵢ` in `C̄_k · C̄_j`, i.e. `#{d ∈ C_k : d⁻¹zᵢ ∈ C_j}` for a fixed
    /// `zᵢ ∈ Cᵢ`.
    pub fn structure(&self, k: usize) -> &[u64] {
        self.cache[k].get_or_init(|| {
            let r = self.classes.len();
            let members = self.classes.members(k);
            self.exec
                .map_range(0..r, |i| {
                    let z = self.classes.class(i).representative;
                    let mut row = vec![0u64; r];
                    for &d in members {
                        row[self.classes.class_of(self.table.left_divide(d, z))] += 1;
                    }
                    row
                })
                .concat()
        })
    }

    pub fn collapsed_matrix(
        &self,
        stats: &ActionStats,
        weights: &WeightVector,
    ) -> Result<CollapsedMatrix> {
        weights.validate(self.classes, stats)?;
        let r = self.classes.len();
        let mut m = vec![vec![BigRational::zero(); r]; r];
        for (a, &k) in weights.0.iter().zip(&stats.derangement_classes) {
            if a.is_zero() {
                continue;
            }
            let s = self.structure(k);
            for i in 0..r {
                for j in 0..r {
                    let c = s[i * r + j];
                    if c != 0 {
                        m[i][j] += a * BigRational::from_integer(c.into());
                    }
                }
            }
        }
        Ok(CollapsedMatrix {
            entries: m,
            order: self.order(),
        })
    }
}

/// Matrix of multiplication by the weighted derangement class sum on the
/// centre of the group algebra, in the class-sum basis (class 0 first).
#[derive(Clone, Debug)]
pub struct CollapsedMatrix {
    pub entries: Vec<Vec<BigRational>>,
    pub order: u64,
}

impl CollapsedMatrix {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// `(L, L·M)` with `L` the least common denominator of the entries.
    pub fn integral(&self) -> (BigInt, Vec<Vec<BigInt>>) {
        let l = self
            .entries
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let b = self
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
                    .collect()
            })
            .collect();
        (l, b)
    }

    /// `Mᵏ e₀`, the class-sum coordinates of `Dᵏ`.
    pub fn power_vector(&self, k: usize) -> Vec<BigRational> {
        let r = self.dim();
        let mut v = vec![BigRational::zero(); r];
        if r == 0 {
            return v;
        }
        v[0] = BigRational::one();
        for _ in 0..k {
            v = (0..r)
                .map(|i| {
                    self.entries[i]
                        .iter()
                        .zip(&v)
                        .filter(|(m, x)| !m.is_zero() && !x.is_zero())
                        .map(|(m, x)| m * x)
                        .sum()
                })
                .collect();
        }
        v
    }
}

/// A real eigenvalue: exact when rational, otherwise an isolating enclosure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Eigenvalue {
    Exact(BigRational),
    /// The unique eigenvalue in `(lo, hi]`; irrational.
    Enclosure { lo: BigRational, hi: BigRational },
}

impl Eigenvalue {
    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            Eigenvalue::Exact(x) => Some(x),
            Eigenvalue::Enclosure { .. } => None,
        }
    }

    pub fn lower(&self) -> &BigRational {
        match self {
            Eigenvalue::Exact(x) => x,
            Eigenvalue::Enclosure { lo, .. } => lo,
        }
    }

    pub fn upper(&self) -> &BigRational {
        match self {
            Eigenvalue::Exact(x) => x,
            Eigenvalue::Enclosure { hi, .. } => hi,
        }
    }

    pub fn approx(&self) -> f64 {
        let mid = (self.lower() + self.upper()) / BigRational::from_integer(2.into());
        mid.to_f64().unwrap_or(f64::NAN)
    }

    fn from_root(root: &RealRoot, scale: &BigInt) -> Self {
        let s = BigRational::from_integer(scale.clone());
        match root {
            RealRoot::Integer(k) => Eigenvalue::Exact(BigRational::from_integer(k.clone()) / s),
            RealRoot::Irrational { lo, hi } => Eigenvalue::Enclosure {
                lo: lo / &s,
                hi: hi / &s,
            },
        }
    }
}

/// Distinct eigenvalues of a collapsed matrix with their multiplicities as
/// roots of its characteristic polynomial, in increasing order.
pub fn eigenvalues_exact(m: &CollapsedMatrix) -> Vec<(Eigenvalue, usize)> {
    let (scale, b) = m.integral();
    let p = charpoly(&b);
    let layers = p.multiplicity_layers();
    let Some(g) = layers.first() else {
        return Vec::new();
    };
    let (roots, _) = isolate_real_roots(g);
    assert_eq!(
        roots.len(),
        g.degree(),
        "collapsed matrix has non-real eigenvalues"
    );
    let layer_sturm: Vec<Sturm> = layers.iter().map(Sturm::new).collect();
    roots
        .iter()
        .map(|root| {
            let mult = layers
                .iter()
                .zip(&layer_sturm)
                .filter(|(layer, sturm)| root_of(layer, sturm, root))
                .count();
            (Eigenvalue::from_root(root, &scale), mult)
        })
        .collect()
}

fn root_of(p: &IntPoly, sturm: &Sturm, root: &RealRoot) -> bool {
    match root {
        RealRoot::Integer(k) => p.eval_int(k).is_zero(),
        RealRoot::Irrational { lo, hi } => sturm.count(lo, hi) == 1,
    }
}

/// `Tr(Aᵏ)` for the full weighted adjacency matrix.
pub fn power_sum(
    alg: &ClassAlgebra<'_>,
    stats: &ActionStats,
    weights: &WeightVector,
    k: usize,
) -> Result<BigRational> {
    let m = alg.collapsed_matrix(stats, weights)?;
    Ok(m.power_vector(k)[0].clone() * BigRational::from_integer(alg.order().into()))
}

#[derive(Clone, Debug)]
pub struct SpectrumEntry {
    pub value: Eigenvalue,
    pub multiplicity: u64,
}

/// Eigenvalues of the weighted adjacency matrix with multiplicities summing
/// to `|G|`, in increasing order.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub entries: Vec<SpectrumEntry>,
    pub order: u64,
}

impl Spectrum {
    pub fn max(&self) -> &SpectrumEntry {
        self.entries.last().expect("spectrum is never empty")
    }

    pub fn min(&self) -> &SpectrumEntry {
        self.entries.first().expect("spectrum is never empty")
    }

    pub fn is_exact(&self) -> bool {
        self.entries.iter().all(|e| e.value.exact().is_some())
    }

    /// Multiplicity of an exact eigenvalue, 0 if absent.
    pub fn multiplicity_of(&self, value: &BigRational) -> u64 {
        self.entries
            .iter()
            .find(|e| e.value.exact() == Some(value))
            .map_or(0, |e| e.multiplicity)
    }

    /// `(value, multiplicity)` pairs when every eigenvalue is rational.
    pub fn exact_pairs(&self) -> Option<Vec<(BigRational, u64)>> {
        self.entries
            .iter()
            .map(|e| e.value.exact().map(|v| (v.clone(), e.multiplicity)))
            .collect()
    }
}

pub fn spectrum(
    alg: &ClassAlgebra<'_>,
    stats: &ActionStats,
    weights: &WeightVector,
) -> Result<Spectrum> {
    let m = alg.collapsed_matrix(stats, weights)?;
    spectrum_of_matrix(&m)
}

pub fn spectrum_of_matrix(m: &CollapsedMatrix) -> Result<Spectrum> {
    let order = BigRational::from_integer(m.order.into());
    let (scale, b) = m.integral();
    let g = charpoly(&b).squarefree_monic();
    let (roots, sturm) = isolate_real_roots(&g);
    if roots.len() != g.degree() {
        return Err(Error::NonRealSpectrum);
    }
    // τ'_k = identity coefficient of (L·D)^k
    let r = b.len();
    let mut v = vec![BigInt::zero(); r];
    v[0] = BigInt::one();
    let mut taus = Vec::with_capacity(g.degree());
    for _ in 0..g.degree() {
        taus.push(v[0].clone());
        v = (0..r)
            .map(|i| b[i].iter().zip(&v).map(|(x, y)| x * y).sum())
            .collect();
    }
    // N(y) = Σ_e y^e Σ_k τ'_k g_{k+e+1}; the multiplicity of a root μ of g
    // is |G|·N(μ)/g'(μ)
    let gc = g.coeffs();
    let d = g.degree();
    let numer = IntPoly::new(
        (0..d)
            .map(|e| {
                (0..d - e)
                    .map(|k| &taus[k] * &gc[k + e + 1])
                    .sum::<BigInt>()
            })
            .collect(),
    );
    let dg = g.derivative();
    let mut entries = Vec::with_capacity(roots.len());
    for mut root in roots {
        let multiplicity = match &root {
            RealRoot::Integer(k) => {
                let x = BigRational::from_integer(k.clone());
                let val = &order * numer.eval(&x) / dg.eval(&x);
                if !val.is_integer() || val.is_negative() {
                    return Err(Error::Precondition(format!(
                        "non-integral multiplicity {val} for an eigenvalue"
                    )));
                }
                val.to_integer()
            }
            RealRoot::Irrational { .. } => irrational_multiplicity(&mut root, &sturm, &numer, &dg, &order),
        };
        let multiplicity = multiplicity
            .to_u64()
            .ok_or_else(|| Error::Precondition("multiplicity overflow".into()))?;
        if multiplicity == 0 {
            return Err(Error::Precondition(
                "eigenvalue with zero multiplicity".into(),
            ));
        }
        entries.push(SpectrumEntry {
            value: Eigenvalue::from_root(&root, &scale),
            multiplicity,
        });
    }
    let total: u64 = entries.iter().map(|e| e.multiplicity).sum();
    if total != m.order {
        return Err(Error::Precondition(format!(
            "multiplicities sum to {total}, expected {}",
            m.order
        )));
    }
    Ok(Spectrum {
        entries,
        order: m.order,
    })
}

/// Refines the root until the enclosure of `|G|·N(μ)/g'(μ)` pins down a
/// single integer.
fn irrational_multiplicity(
    root: &mut RealRoot,
    sturm: &Sturm,
    numer: &IntPoly,
    dg: &IntPoly,
    order: &BigRational,
) -> BigInt {
    loop {
        let (lo, hi) = (root.lower(), root.upper());
        let (nl, nh) = numer.eval_interval(&lo, &hi);
        let (dl, dh) = dg.eval_interval(&lo, &hi);
        if dl.is_positive() || dh.is_negative() {
            let qs = [&nl / &dl, &nl / &dh, &nh / &dl, &nh / &dh];
            let ql = qs.iter().min().unwrap() * order;
            let qh = qs.iter().max().unwrap() * order;
            let k = qh.floor();
            if &qh - &ql < BigRational::one() && k >= ql {
                return k.to_integer();
            }
        }
        root.bisect(sturm);
    }
}

/// Checks `Σ m·λ = 0` and `Σ m·λ² = |G|·Σ aᵢ²|Cᵢ|`, exactly for rational
/// spectra and by interval enclosure otherwise.
pub fn verify_trace_identity(
    s: &Spectrum,
    classes: &ConjugacyClassTable,
    stats: &ActionStats,
    weights: &WeightVector,
) -> bool {
    let target =
        weights.square_sum(classes, stats) * BigRational::from_integer(classes.group_order().into());
    let (mut s1, mut s2) = (interval_zero(), interval_zero());
    for e in &s.entries {
        let m = BigRational::from_integer(e.multiplicity.into());
        let (lo, hi) = (e.value.lower().clone(), e.value.upper().clone());
        s1.0 += &m * &lo;
        s1.1 += &m * &hi;
        let (sl, sh) = square_interval(&lo, &hi);
        s2.0 += &m * sl;
        s2.1 += &m * sh;
    }
    let zero = BigRational::zero();
    s1.0 <= zero && zero <= s1.1 && s2.0 <= target && target <= s2.1
}

fn interval_zero() -> (BigRational, BigRational) {
    (BigRational::zero(), BigRational::zero())
}

fn square_interval(lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
    let (a, b) = (lo * lo, hi * hi);
    let upper = a.clone().max(b.clone());
    let lower = if lo.is_negative() && hi.is_positive() {
        BigRational::zero()
    } else {
        a.min(b)
    };
    (lower, upper)
}

/// Compares an eigenvalue with a rational, when the enclosure decides it.
pub fn compare(e: &Eigenvalue, x: &BigRational) -> Option<Ordering> {
    match e {
        Eigenvalue::Exact(v) => Some(v.cmp(x)),
        Eigenvalue::Enclosure { lo, hi } => {
            if hi < x {
                Some(Ordering::Less)
            } else if lo >= x {
                // the root is irrational, so it is never equal to x
                Some(Ordering::Greater)
            } else {
                None
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::action_stats;
    use crate::perm::{GeneratorSet, Permutation};
    use crate::table::DEFAULT_CAP;

    fn group(degree: usize, gens: &[&str]) -> GroupTable {
        let gens = gens
            .iter()
            .map(|g| Permutation::parse_cycles(degree, g).unwrap())
            .collect();
        GroupTable::enumerate(&GeneratorSet::new(degree, gens).unwrap(), DEFAULT_CAP).unwrap()
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn s3_unit_spectrum() {
        let g = group(3, &["(1,2)", "(1,2,3)"]);
        let c = ConjugacyClassTable::compute(&g);
        let st = action_stats(&g, &c).unwrap();
        let alg = ClassAlgebra::new(&g, &c);
        let w = WeightVector::unit(1);
        let eig = eigenvalues_exact(&alg.collapsed_matrix(&st, &w).unwrap());
        assert_eq!(
            eig,
            vec![(Eigenvalue::Exact(q(-1)), 1), (Eigenvalue::Exact(q(2)), 2)]
        );
        let s = spectrum(&alg, &st, &w).unwrap();
        assert_eq!(s.exact_pairs().unwrap(), vec![(q(-1), 4), (q(2), 2)]);
        assert!(verify_trace_identity(&s, &c, &st, &w));
        assert_eq!(power_sum(&alg, &st, &w, 0).unwrap(), q(6));
        assert_eq!(power_sum(&alg, &st, &w, 2).unwrap(), q(12));
        assert_eq!(power_sum(&alg, &st, &w, 3).unwrap(), q(12));
    }

    #[test]
    fn zero_weights_give_zero_spectrum() {
        let g = group(3, &["(1,2)", "(1,2,3)"]);
        let c = ConjugacyClassTable::compute(&g);
        let st = action_stats(&g, &c).unwrap();
        let alg = ClassAlgebra::new(&g, &c);
        let m = alg.collapsed_matrix(&st, &WeightVector::zero(1)).unwrap();
        assert_eq!(eigenvalues_exact(&m), vec![(Eigenvalue::Exact(q(0)), 3)]);
        let s = spectrum_of_matrix(&m).unwrap();
        assert_eq!(s.exact_pairs().unwrap(), vec![(q(0), 6)]);
    }

    #[test]
    fn irrational_eigenvalues_get_integral_multiplicities() {
        // A5 on 5 points, weight on one class of 5-cycles only: the degree-3
        // characters give (1 ± √5)·|C|/6 type values
        let g = group(5, &["(1,2,3)", "(1,2,3,4,5)"]);
        let c = ConjugacyClassTable::compute(&g);
        let st = action_stats(&g, &c).unwrap();
        let alg = ClassAlgebra::new(&g, &c);
        let fives: Vec<usize> = st
            .derangement_classes
            .iter()
            .enumerate()
            .filter(|(_, &k)| c.class(k).element_order == 5)
            .map(|(i, _)| i)
            .collect();
        assert_eq!(fives.len(), 2);
        let mut w = WeightVector::zero(st.derangement_classes.len());
        w.0[fives[0]] = BigRational::one();
        let s = spectrum(&alg, &st, &w).unwrap();
        assert!(!s.is_exact());
        let irr: Vec<u64> = s
            .entries
            .iter()
            .filter(|e| e.value.exact().is_none())
            .map(|e| e.multiplicity)
            .collect();
        assert_eq!(irr, vec![9, 9]);
        assert!(verify_trace_identity(&s, &c, &st, &w));
    }

    #[test]
    fn weights_must_be_real_and_well_sized() {
        // C3 on 3 points: the two 3-cycles are inverse to each other
        let g = group(3, &["(1,2,3)"]);
        let c = ConjugacyClassTable::compute(&g);
        let st = action_stats(&g, &c).unwrap();
        let alg = ClassAlgebra::new(&g, &c);
        assert!(matches!(
            alg.collapsed_matrix(&st, &WeightVector::from_integers(&[1, 2])),
            Err(Error::NonRealSpectrum)
        ));
        assert!(matches!(
            alg.collapsed_matrix(&st, &WeightVector::unit(3)),
            Err(Error::WeightLength { got: 3, expected: 2 })
        ));
        let s = spectrum(&alg, &st, &WeightVector::unit(2)).unwrap();
        assert_eq!(s.exact_pairs().unwrap(), vec![(q(-1), 2), (q(2), 1)]);
    }
}
