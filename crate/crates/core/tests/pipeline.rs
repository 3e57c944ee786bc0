use ekr_core::analysis::{analyze, brute, Enumerated, GroupSelector, RunConfig, WeightSpec};
use ekr_core::data::data_path;
use ekr_core::exec::Exec;
use ekr_core::groups::MatrixGroupSpec;
use ekr_core::rational::{int, rat};
use ekr_core::verify::{verify, Scope};

fn family(spec: MatrixGroupSpec) -> RunConfig {
    RunConfig::new(GroupSelector::Family { spec })
}

#[test]
fn derangement_counts_match_the_table() {
    for spec in [MatrixGroupSpec::psl(2, 7), MatrixGroupSpec::pgl(2, 5), MatrixGroupSpec::psl(3, 2)] {
        let e = Enumerated::from_spec(spec.clone(), Exec::Sequential).unwrap();
        let direct = (0..e.table.order() as u32)
            .filter(|&g| e.table.permutation(g).is_derangement())
            .count() as u64;
        let r = analyze(&family(spec)).unwrap();
        assert_eq!(r.stats.derangement_count, direct, "{}", r.group.name);
        assert_eq!(r.stats.derangement_proportion, rat(direct as i64, r.group.order as i64));
        let sizes: u64 = r.stats.classes.iter().map(|c| c.size).sum();
        assert_eq!(sizes, r.group.order);
    }
}

#[test]
fn psl27_unit_weights_certify() {
    let r = analyze(&family(MatrixGroupSpec::psl(2, 7))).unwrap();
    assert!(r.certified());
    assert_eq!(r.bounds.target, int(21));
    assert_eq!(r.trace_identity, Some(true));
    let total: u64 = r.spectrum.iter().map(|e| e.multiplicity).sum();
    assert_eq!(total, 168);
}

#[test]
fn execution_modes_agree() {
    let mut cfg = family(MatrixGroupSpec::psl(3, 3));
    cfg.weights = WeightSpec::Search;
    cfg.exec = Exec::Sequential;
    let a = analyze(&cfg).unwrap();
    cfg.exec = Exec::Parallel;
    let b = analyze(&cfg).unwrap();
    let pairs = |r: &ekr_core::analysis::AnalysisReport| {
        r.spectrum.iter().map(|e| (e.value.to_string(), e.multiplicity)).collect::<Vec<_>>()
    };
    assert_eq!(pairs(&a), pairs(&b));
    assert_eq!(a.bounds.verdict, b.bounds.verdict);
}

#[test]
fn brute_pgl25() {
    let r = brute(&family(MatrixGroupSpec::pgl(2, 5))).unwrap();
    assert!(r.complete());
    // point stabilizer: |G| / n
    assert_eq!(r.coclique.witness.size, 120 / 6);
    assert!(r.coclique.witness.coset.is_some());
    assert_eq!(r.clique.elements.as_ref().map(Vec::len), Some(6));
    // (n - 1)^2 + 1 for n = 6 points
    assert_eq!(r.module_v_rank, Some(26));
    assert!(r.checks.iter().all(|c| c.passed));
}

#[test]
fn chartab_selection() {
    let mut cfg = RunConfig::new(GroupSelector::Chartab {
        path: data_path("hs.ctab"),
    });
    cfg.weights = WeightSpec::Classes(vec!["11A".into(), "11B".into()]);
    let r = analyze(&cfg).unwrap();
    assert!(r.certified());
    assert_eq!(r.bounds.target, int(252_000));
    cfg.search = true;
    assert!(analyze(&cfg).is_err());
}

#[test]
fn verify_scopes_pass() {
    for scope in [Scope::Ree, Scope::SmallSporadics, Scope::Suzuki] {
        let r = verify(scope, Exec::default()).unwrap();
        let failing: Vec<_> = r
            .sections
            .iter()
            .flat_map(|s| &s.checks)
            .filter(|c| !c.passed)
            .map(|c| c.name.clone())
            .collect();
        assert!(r.all_passed(), "{scope}: {failing:?}");
        assert_eq!(r.failed, 0);
        assert!(r.passed > 0);
    }
}
