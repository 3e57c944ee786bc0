use std::collections::BTreeMap;

use ekr_core::bounds::{weight_subset_search, Verdict};
use ekr_core::chartab::*;
use ekr_core::classes::{action_stats, ConjugacyClassTable};
use ekr_core::data::data_path;
use ekr_core::exec::Exec;
use ekr_core::groups::MatrixGroupSpec;
use ekr_core::perm::{GeneratorSet, Permutation};
use ekr_core::rational::int;
use ekr_core::spectra::{spectrum, ClassAlgebra, WeightVector};
use ekr_core::table::{GroupTable, DEFAULT_CAP};

fn hs() -> CharacterTableFile {
    load_chartab(data_path("hs.ctab")).unwrap()
}

#[test]
fn hs_table_loads() {
    let t = hs();
    assert_eq!(t.characters.len(), 24);
    assert_eq!(t.classes.len(), 24);
    let squares: u64 = t.characters.iter().map(|c| c.degree * c.degree).sum();
    assert_eq!(squares, 44352000);
    let names: Vec<&str> = t
        .derangement_classes()
        .iter()
        .map(|&c| t.classes[c].name.as_str())
        .collect();
    assert_eq!(names, ["4B", "8A", "11A", "11B", "15A"]);
}

#[test]
fn hs_eleven_weighting_certifies() {
    let t = hs();
    let w = t.weights_from_names(&["11A", "11B"]).unwrap();
    let eig = eigenvalue_table(&t, &w).unwrap();
    let values: Vec<_> = eig.iter().map(|e| e.value.as_rational().unwrap()).collect();
    assert_eq!(values.iter().max().unwrap(), &int(8064000));
    assert_eq!(values.iter().min().unwrap(), &int(-46080));
    let psi = eig.iter().find(|e| e.degree == 175).unwrap();
    assert_eq!(psi.value.as_rational(), Some(int(-46080)));
    let r = chartab_ekr_verdict(&t, &w).unwrap();
    assert!(r.verdict.is_certified());
    assert_eq!(r.bounds[0].value.as_ref().unwrap().exact(), Some(&int(252000)));
}

#[test]
fn hs_unit_weights_are_inconclusive() {
    let t = hs();
    let w = WeightVector::unit(5);
    let eig = eigenvalue_table(&t, &w).unwrap();
    let psi = eig.iter().find(|e| e.degree == 175).unwrap();
    assert_eq!(psi.value.as_rational(), Some(int(-79806)));
    assert!(eig
        .iter()
        .any(|e| e.degree == 22 && e.value.as_rational() == Some(int(-118650))));
    let r = chartab_ekr_verdict(&t, &w).unwrap();
    assert_eq!(r.verdict, Verdict::Inconclusive);
    assert!(r.bounds[0].value.as_ref().unwrap().gt(&int(252000)));
}

#[test]
fn hs_subset_search() {
    let t = hs();
    let r = weight_subset_search(&ChartabSource(&t), Exec::default()).unwrap();
    // every unit set tried in order; the single class 8A is the first to certify
    assert!(r.certified);
    assert_eq!(r.units, ["8A"]);
    assert_eq!(r.bound.exact(), Some(&int(252000)));
}

fn enumerated_spectrum(t: &GroupTable) -> BTreeMap<num_rational::BigRational, u64> {
    let c = ConjugacyClassTable::compute(t);
    let st = action_stats(t, &c).unwrap();
    let alg = ClassAlgebra::new(t, &c);
    let s = spectrum(&alg, &st, &WeightVector::unit(st.derangement_classes.len())).unwrap();
    s.exact_pairs().unwrap().into_iter().collect()
}

#[test]
fn chartab_matches_class_algebra() {
    let s3 = load_chartab(data_path("s3.ctab")).unwrap();
    let gens = vec![
        Permutation::parse_cycles(3, "(1,2)").unwrap(),
        Permutation::parse_cycles(3, "(1,2,3)").unwrap(),
    ];
    let s3_group = GroupTable::enumerate(&GeneratorSet::new(3, gens).unwrap(), DEFAULT_CAP).unwrap();
    let w = WeightVector::unit(s3.derangement_classes().len());
    assert_eq!(rational_spectrum(&s3, &w).unwrap(), enumerated_spectrum(&s3_group));

    let psl = load_chartab(data_path("psl2_7.ctab")).unwrap();
    let t = GroupTable::enumerate(&MatrixGroupSpec::psl(2, 7).generators().unwrap(), DEFAULT_CAP).unwrap();
    let w = WeightVector::unit(psl.derangement_classes().len());
    assert_eq!(rational_spectrum(&psl, &w).unwrap(), enumerated_spectrum(&t));
}
