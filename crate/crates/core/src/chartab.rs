//! Character-table files and weighted derangement-graph eigenvalues computed
//! from character values.
//!
//! Format:
//!
//! ```text
//! group <name> order <N> degree <n>
//! classes:
//! <name> <size> <fixed points>
//! chars:
//! <degree> <value on class 1> <value on class 2> ...
//! ```
//!
//! Values are `a`, `a/b`, or `a/b+c/d*sqrt(D)`. The first class must be the
//! identity, so each character row starts with its degree twice.

use std::collections::BTreeMap;
use std::path::Path;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::bounds::{
    ekr_verdict, inverse_closed_units_by, BoundReport, EigenSource, SpectralSummary, WeightUnit,
    SQRT_BITS,
};
use crate::error::{Error, Result};
use crate::quadratic::QuadSum;
use crate::rational::{int, parse_rational, Enclosure};
use crate::spectra::WeightVector;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChartabClass {
    pub name: String,
    pub size: u64,
    pub fixed_points: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Character {
    pub degree: u64,
    pub values: Vec<QuadSum>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacterTableFile {
    pub name: String,
    pub order: u64,
    pub degree: u64,
    pub classes: Vec<ChartabClass>,
    pub characters: Vec<Character>,
    /// Index of the class of inverses, read off by complex conjugation.
    pub inverse: Vec<usize>,
}

/// Parses one entry: `a`, `a/b`, `[r(+|-)][s*]sqrt(D)`.
pub fn parse_value(s: &str) -> Option<QuadSum> {
    let s = s.trim();
    let Some(at) = s.find("sqrt(") else {
        return parse_rational(s).map(QuadSum::rational);
    };
    let radicand: i64 = s[at + 5..].strip_suffix(')')?.trim().parse().ok()?;
    if radicand == 0 {
        return None;
    }
    let head = &s[..at];
    let head = head.strip_suffix('*').unwrap_or(head);
    // split the rational part from the coefficient at the last sign
    let split = head
        .char_indices()
        .filter(|&(i, c)| i > 0 && (c == '+' || c == '-') && !head[..i].ends_with('/'))
        .map(|(i, _)| i)
        .last();
    let (r, c) = match split {
        Some(i) => (&head[..i], &head[i..]),
        None => ("0", head),
    };
    let r = parse_rational(r)?;
    let c = match c.trim_start_matches('+') {
        "" => BigRational::one(),
        "-" => -BigRational::one(),
        c => parse_rational(c)?,
    };
    Some(&QuadSum::rational(r) + &QuadSum::term(c, radicand))
}

enum Section {
    Header,
    Classes,
    Chars,
}

pub fn parse_chartab(text: &str) -> Result<CharacterTableFile> {
    let mut header: Option<(String, u64, u64)> = None;
    let mut classes = Vec::new();
    let mut characters = Vec::new();
    let mut section = Section::Header;
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line == "classes:" {
            if header.is_none() {
                return Err(Error::parse(line_no, "`classes:` before the `group` header"));
            }
            section = Section::Classes;
            continue;
        }
        if line == "chars:" {
            if classes.is_empty() {
                return Err(Error::parse(line_no, "`chars:` before any class"));
            }
            section = Section::Chars;
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        match section {
            Section::Header => {
                let bad = || Error::parse(line_no, "expected `group <name> order <N> degree <n>`");
                if words.len() != 6 || words[0] != "group" || words[2] != "order" || words[4] != "degree" {
                    return Err(bad());
                }
                let order = words[3].parse().map_err(|_| bad())?;
                let degree = words[5].parse().map_err(|_| bad())?;
                header = Some((words[1].to_string(), order, degree));
            }
            Section::Classes => {
                let bad = || Error::parse(line_no, "expected `<name> <size> <fixed points>`");
                if words.len() != 3 {
                    return Err(bad());
                }
                classes.push(ChartabClass {
                    name: words[0].to_string(),
                    size: words[1].parse().map_err(|_| bad())?,
                    fixed_points: words[2].parse().map_err(|_| bad())?,
                });
            }
            Section::Chars => {
                if words.len() != classes.len() + 1 {
                    return Err(Error::parse(
                        line_no,
                        format!(
                            "expected a degree and {} values, found {} fields",
                            classes.len(),
                            words.len()
                        ),
                    ));
                }
                let degree = words[0]
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("bad degree `{}`", words[0])))?;
                let values = words[1..]
                    .iter()
                    .map(|w| {
                        parse_value(w).ok_or_else(|| Error::parse(line_no, format!("bad value `{w}`")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                if values[0] != QuadSum::rational(int(degree)) {
                    return Err(Error::parse(line_no, "value on the identity class differs from the degree"));
                }
                characters.push(Character { degree, values });
            }
        }
    }
    let (name, order, degree) = header.ok_or_else(|| Error::parse(last_line.max(1), "missing `group` header"))?;
    if characters.is_empty() {
        return Err(Error::parse(last_line.max(1), "no characters"));
    }
    let mut t = CharacterTableFile {
        name,
        order,
        degree,
        classes,
        characters,
        inverse: Vec::new(),
    };
    t.check()?;
    t.inverse = t.find_inverses()?;
    Ok(t)
}

pub fn load_chartab(path: impl AsRef<Path>) -> Result<CharacterTableFile> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_chartab(&text)
}

impl CharacterTableFile {
    fn check(&self) -> Result<()> {
        let data = |m: String| Err(Error::Data(m));
        let first = &self.classes[0];
        if first.size != 1 || first.fixed_points != self.degree {
            return data("the first class must be the identity, fixing every point".into());
        }
        let total: u64 = self.classes.iter().map(|c| c.size).sum();
        if total != self.order {
            return data(format!("class sizes sum to {total}, not the group order {}", self.order));
        }
        if self.characters.len() != self.classes.len() {
            return data(format!(
                "{} characters for {} classes",
                self.characters.len(),
                self.classes.len()
            ));
        }
        let squares: u128 = self.characters.iter().map(|c| (c.degree as u128).pow(2)).sum();
        if squares != self.order as u128 {
            return data(format!("sum of squared degrees is {squares}, not {}", self.order));
        }
        // each row has norm 1
        for (k, chi) in self.characters.iter().enumerate() {
            let norm: QuadSum = chi
                .values
                .iter()
                .zip(&self.classes)
                .map(|(v, c)| (v * &v.conj()).scale(&int(c.size)))
                .sum();
            if norm != QuadSum::rational(int(self.order)) {
                return data(format!("character {} (degree {}) does not have norm 1", k + 1, chi.degree));
            }
        }
        // column orthogonality against the identity column
        for (j, c) in self.classes.iter().enumerate().skip(1) {
            let s: QuadSum = self
                .characters
                .iter()
                .map(|chi| chi.values[j].scale(&int(chi.degree)))
                .sum();
            if !s.is_zero() {
                return data(format!("column of class {} is not orthogonal to the identity column", c.name));
            }
        }
        // a transitive action averages one fixed point
        let fixed: u128 = self
            .classes
            .iter()
            .map(|c| c.size as u128 * c.fixed_points as u128)
            .sum();
        if fixed != self.order as u128 {
            return data("fixed-point counts do not describe a transitive action".into());
        }
        Ok(())
    }

    fn find_inverses(&self) -> Result<Vec<usize>> {
        (0..self.classes.len())
            .map(|i| {
                (0..self.classes.len())
                    .find(|&j| {
                        self.classes[j].size == self.classes[i].size
                            && self
                                .characters
                                .iter()
                                .all(|chi| chi.values[j] == chi.values[i].conj())
                    })
                    .ok_or_else(|| {
                        Error::Data(format!("no class has the conjugate column of {}", self.classes[i].name))
                    })
            })
            .collect()
    }

    pub fn class_index(&self, name: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.name == name)
    }

    /// Class indices with no fixed points, in file order.
    pub fn derangement_classes(&self) -> Vec<usize> {
        (0..self.classes.len())
            .filter(|&i| self.classes[i].fixed_points == 0)
            .collect()
    }

    pub fn derangement_count(&self) -> u64 {
        self.derangement_classes()
            .iter()
            .map(|&i| self.classes[i].size)
            .sum()
    }

    /// Weights per derangement class from a list of class names: 1 on the
    /// named classes, 0 elsewhere.
    pub fn weights_from_names(&self, names: &[&str]) -> Result<WeightVector> {
        let der = self.derangement_classes();
        let mut w = WeightVector::zero(der.len());
        for name in names {
            let c = self
                .class_index(name)
                .ok_or_else(|| Error::InvalidParameters(format!("unknown class `{name}`")))?;
            let k = der.iter().position(|&d| d == c).ok_or_else(|| {
                Error::InvalidParameters(format!("class `{name}` is not a derangement class"))
            })?;
            w.0[k] = BigRational::one();
        }
        Ok(w)
    }

    /// Expands weights per derangement class to one weight per class.
    fn full_weights(&self, w: &WeightVector) -> Result<Vec<BigRational>> {
        let der = self.derangement_classes();
        if w.len() != der.len() {
            return Err(Error::WeightLength {
                got: w.len(),
                expected: der.len(),
            });
        }
        let mut full = vec![BigRational::zero(); self.classes.len()];
        for (&c, a) in der.iter().zip(&w.0) {
            full[c] = a.clone();
        }
        Ok(full)
    }
}

/// `λ(χ, a) = (1/χ(1))·Σ aᵢ|Cᵢ|χ(xᵢ)` for every character, with one weight
/// per class. Weights on classes with fixed points are rejected.
pub fn weighted_eigs_from_chartab(
    t: &CharacterTableFile,
    weights: &[BigRational],
) -> Result<Vec<(usize, QuadSum)>> {
    if weights.len() != t.classes.len() {
        return Err(Error::WeightLength {
            got: weights.len(),
            expected: t.classes.len(),
        });
    }
    for (a, c) in weights.iter().zip(&t.classes) {
        if a.is_negative() {
            return Err(Error::InvalidParameters("weights must be nonnegative".into()));
        }
        if !a.is_zero() && c.fixed_points != 0 {
            return Err(Error::Precondition(format!(
                "class {} has fixed points and cannot carry weight",
                c.name
            )));
        }
    }
    Ok(t.characters
        .iter()
        .enumerate()
        .map(|(k, chi)| {
            let s: QuadSum = chi
                .values
                .iter()
                .zip(weights)
                .zip(&t.classes)
                .filter(|((_, a), _)| !a.is_zero())
                .map(|((v, a), c)| v.scale(&(a * int(c.size))))
                .sum();
            (k, s.scale(&BigRational::new(1.into(), chi.degree.into())))
        })
        .collect())
}

/// Distinct eigenvalues with multiplicities `Σχ(1)²`, ordered as first seen.
pub fn chartab_spectrum(t: &CharacterTableFile, w: &WeightVector) -> Result<Vec<(QuadSum, u64)>> {
    let full = t.full_weights(w)?;
    let mut out: Vec<(QuadSum, u64)> = Vec::new();
    for (k, v) in weighted_eigs_from_chartab(t, &full)? {
        let m = t.characters[k].degree.pow(2);
        match out.iter_mut().find(|(x, _)| *x == v) {
            Some(e) => e.1 += m,
            None => out.push((v, m)),
        }
    }
    Ok(out)
}

fn summary(t: &CharacterTableFile, w: &WeightVector) -> Result<SpectralSummary> {
    if t.derangement_classes().is_empty() {
        return Err(Error::Precondition("the action has no derangements".into()));
    }
    if w.is_zero() {
        return Err(Error::Precondition("weights are all zero".into()));
    }
    let full = t.full_weights(w)?;
    for (i, &j) in t.inverse.iter().enumerate() {
        if full[i] != full[j] {
            return Err(Error::NonRealSpectrum);
        }
    }
    let spec = chartab_spectrum(t, w)?;
    let valency: BigRational = full
        .iter()
        .zip(&t.classes)
        .map(|(a, c)| a * int(c.size))
        .sum();
    let mut encl = Vec::with_capacity(spec.len());
    for (v, m) in &spec {
        let e = v.enclosure(SQRT_BITS).ok_or(Error::NonRealSpectrum)?;
        encl.push((e, *m, v.as_rational()));
    }
    // the least eigenvalue lies in [min lo, min hi]
    let lo = encl.iter().map(|(e, _, _)| e.lo.clone()).min().unwrap();
    let hi = encl.iter().map(|(e, _, _)| e.hi.clone()).min().unwrap();
    let min = Enclosure { lo, hi };
    let min_multiplicity = min
        .exact()
        .map(|x| encl.iter().filter(|(_, _, r)| r.as_ref() == Some(x)).map(|(_, m, _)| m).sum());
    let der = t.derangement_classes();
    Ok(SpectralSummary {
        max: valency,
        min,
        min_multiplicity,
        square_sum: full.iter().zip(&t.classes).map(|(a, c)| a * a * int(c.size)).sum(),
        unit_weights: w.0.iter().all(|a| a.is_one()),
        weights: w.0.clone(),
        sizes: der.iter().map(|&c| t.classes[c].size).collect(),
    })
}

/// Weighted ratio bound from the character values, with the verdict.
pub fn chartab_ekr_verdict(t: &CharacterTableFile, w: &WeightVector) -> Result<BoundReport> {
    let s = summary(t, w)?;
    Ok(ekr_verdict(
        &t.name,
        t.degree,
        t.order,
        t.derangement_count(),
        Some(&s),
        None,
    ))
}

/// [`EigenSource`] backed by a character table.
pub struct ChartabSource<'a>(pub &'a CharacterTableFile);

impl EigenSource for ChartabSource<'_> {
    fn order(&self) -> u64 {
        self.0.order
    }

    fn degree(&self) -> u64 {
        self.0.degree
    }

    fn weight_len(&self) -> usize {
        self.0.derangement_classes().len()
    }

    fn units(&self) -> Vec<WeightUnit> {
        let der = self.0.derangement_classes();
        let labels: Vec<String> = der.iter().map(|&c| self.0.classes[c].name.clone()).collect();
        let inverse: Vec<usize> = der
            .iter()
            .map(|&c| der.iter().position(|&d| d == self.0.inverse[c]).unwrap())
            .collect();
        inverse_closed_units_by(&labels, &inverse)
    }

    fn extremes(&self, w: &WeightVector) -> Result<(BigRational, Enclosure)> {
        let s = summary(self.0, w)?;
        Ok((s.max, s.min))
    }
}

/// Eigenvalue table for reports: character degree, exact value, approximation.
#[derive(Clone, Debug, Serialize)]
pub struct CharacterEigenvalue {
    pub character: usize,
    pub degree: u64,
    pub value: QuadSum,
    pub approx: Option<f64>,
}

pub fn eigenvalue_table(t: &CharacterTableFile, w: &WeightVector) -> Result<Vec<CharacterEigenvalue>> {
    let full = t.full_weights(w)?;
    Ok(weighted_eigs_from_chartab(t, &full)?
        .into_iter()
        .map(|(k, value)| CharacterEigenvalue {
            character: k,
            degree: t.characters[k].degree,
            approx: value.approx(),
            value,
        })
        .collect())
}

/// Distinct eigenvalues keyed by exact rational value, for comparison with
/// an enumerated spectrum. Fails if some value is irrational.
pub fn rational_spectrum(t: &CharacterTableFile, w: &WeightVector) -> Result<BTreeMap<BigRational, u64>> {
    let mut out = BTreeMap::new();
    for (v, m) in chartab_spectrum(t, w)? {
        let r = v
            .as_rational()
            .ok_or_else(|| Error::Precondition(format!("eigenvalue {v} is irrational")))?;
        *out.entry(r).or_insert(0) += m;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    const TRIVIAL: &str = "group trivial order 1 degree 1\nclasses:\n1A 1 1\nchars:\n1 1\n";

    const S3: &str = "group S3 order 6 degree 3
classes:
1A 1 3
2A 3 1
3A 2 0
chars:
1 1 -1 1
2 2 0 -1
1 1 1 1
";

    #[test]
    fn values() {
        assert_eq!(parse_value("-3"), Some(QuadSum::rational(int(-3))));
        assert_eq!(parse_value("5/2"), Some(QuadSum::rational(rat(5, 2))));
        let v = parse_value("-1/2+1/2*sqrt(-7)").unwrap();
        assert_eq!(v, &QuadSum::rational(rat(-1, 2)) + &QuadSum::term(rat(1, 2), -7));
        assert_eq!(parse_value("0-1*sqrt(-5)").unwrap(), QuadSum::term(int(-1), -5));
        assert_eq!(parse_value("sqrt(5)").unwrap(), QuadSum::term(int(1), 5));
        assert_eq!(parse_value("-sqrt(5)").unwrap(), QuadSum::term(int(-1), 5));
        assert_eq!(parse_value("2*sqrt(12)").unwrap(), QuadSum::term(int(4), 3));
        for bad in ["", "x", "1+", "sqrt(0)", "1/0", "sqrt(5"] {
            assert!(parse_value(bad).is_none(), "{bad}");
        }
    }

    #[test]
    fn trivial_group_parses_but_has_no_derangements() {
        let t = parse_chartab(TRIVIAL).unwrap();
        assert_eq!(t.characters.len(), 1);
        assert!(chartab_ekr_verdict(&t, &WeightVector::zero(0)).is_err());
    }

    #[test]
    fn s3_eigenvalues() {
        let t = parse_chartab(S3).unwrap();
        assert_eq!(t.inverse, vec![0, 1, 2]);
        let spec = rational_spectrum(&t, &WeightVector::unit(1)).unwrap();
        // two disjoint triangles
        let expected: BTreeMap<_, _> = [(int(2), 2), (int(-1), 4)].into_iter().collect();
        assert_eq!(spec, expected);
        let r = chartab_ekr_verdict(&t, &WeightVector::unit(1)).unwrap();
        assert!(r.verdict.is_certified());
    }

    #[test]
    fn rejects_bad_tables() {
        let sizes = S3.replace("3A 2 0", "3A 3 0");
        assert!(matches!(parse_chartab(&sizes), Err(Error::Data(_))));
        let row = S3.replace("2 2 0 -1", "2 2 1 -1");
        assert!(matches!(parse_chartab(&row), Err(Error::Data(_))));
        let syntax = S3.replace("2 2 0 -1", "2 2 0 q");
        assert!(matches!(parse_chartab(&syntax), Err(Error::Parse { line: 8, .. })));
        let short = S3.replace("2 2 0 -1", "2 2 0");
        assert!(matches!(parse_chartab(&short), Err(Error::Parse { line: 8, .. })));
    }

    #[test]
    fn weights_on_fixed_point_classes_are_rejected() {
        let t = parse_chartab(S3).unwrap();
        let w = vec![int(0), int(1), int(0)];
        assert!(weighted_eigs_from_chartab(&t, &w).is_err());
        assert!(t.weights_from_names(&["2A"]).is_err());
        assert!(t.weights_from_names(&["9Z"]).is_err());
    }
}
