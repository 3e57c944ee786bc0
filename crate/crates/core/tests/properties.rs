use std::sync::OnceLock;

use ekr_core::analysis::Enumerated;
use ekr_core::bounds::{ratio_bound, weighted_ratio_bound};
use ekr_core::exec::Exec;
use ekr_core::expr::{eval_with, Value};
use ekr_core::groups::MatrixGroupSpec;
use ekr_core::perm::Permutation;
use ekr_core::quadratic::QuadSum;
use ekr_core::rational::{decimal_string, int, parse_rational, rat, to_f64};
use ekr_core::spectra::{verify_trace_identity, WeightVector};
use ekr_core::table::GroupTable;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn psl27() -> &'static Enumerated {
    static G: OnceLock<Enumerated> = OnceLock::new();
    G.get_or_init(|| Enumerated::from_spec(MatrixGroupSpec::psl(2, 7), Exec::Sequential).unwrap())
}

fn pgl25() -> &'static Enumerated {
    static G: OnceLock<Enumerated> = OnceLock::new();
    G.get_or_init(|| Enumerated::from_spec(MatrixGroupSpec::pgl(2, 5), Exec::Sequential).unwrap())
}

/// Weights constant on inverse pairs, from one numerator per class.
fn weights(e: &Enumerated, nums: &[u8]) -> WeightVector {
    WeightVector(
        e.stats
            .derangement_classes
            .iter()
            .map(|&c| {
                let k = c.min(e.classes.class(c).inverse);
                rat(nums[k % nums.len()] as i64, 7)
            })
            .collect(),
    )
}

fn small_rat() -> impl Strategy<Value = BigRational> {
    (-40i64..40, 1i64..12).prop_map(|(n, d)| rat(n, d))
}

fn quad() -> impl Strategy<Value = QuadSum> {
    (small_rat(), small_rat(), prop::sample::select(vec![2i64, 3, 5, -1, -3, 8, 12]))
        .prop_map(|(r, s, d)| &QuadSum::rational(r) + &QuadSum::term(s, d))
}

fn is_intersecting(t: &GroupTable, set: &[u32]) -> bool {
    set.iter().all(|&g| set.iter().all(|&h| g == h || t.fixed_points(t.multiply(g, t.inverse(h))) > 0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ratio_bound_is_scale_invariant(d in 1i64..10_000, tau in -10_000i64..-1, c in 1i64..1000, order in 1u64..100_000) {
        let a = ratio_bound(&int(d), &int(tau), order).unwrap();
        let b = ratio_bound(&(int(d) * int(c)), &(int(tau) * int(c)), order).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn weighted_spectra_scale(nums in prop::collection::vec(0u8..6, 1..6), c in 1i64..9) {
        let e = pgl25();
        let w = weights(e, &nums);
        prop_assume!(!w.is_zero());
        let s = e.spectrum(&w, Exec::Sequential).unwrap();
        let scaled = e.spectrum(&w.scaled(&int(c)), Exec::Sequential).unwrap();
        prop_assert_eq!(s.entries.len(), scaled.entries.len());
        for (x, y) in s.entries.iter().zip(&scaled.entries) {
            prop_assert_eq!(x.multiplicity, y.multiplicity);
            match (x.value.exact(), y.value.exact()) {
                (Some(a), Some(b)) => prop_assert_eq!(a * int(c), b.clone()),
                _ => prop_assert!((x.value.approx() * c as f64 - y.value.approx()).abs() < 1e-6),
            }
        }
        if let (Ok(a), Ok(b)) = (weighted_ratio_bound(&s), weighted_ratio_bound(&scaled)) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn weighted_spectra_are_consistent(nums in prop::collection::vec(0u8..6, 1..6)) {
        let e = psl27();
        let w = weights(e, &nums);
        let s = e.spectrum(&w, Exec::Sequential).unwrap();
        let total: u64 = s.entries.iter().map(|x| x.multiplicity).sum();
        prop_assert_eq!(total, e.stats.order);
        prop_assert!(verify_trace_identity(&s, &e.classes, &e.stats, &w));
        // the principal eigenvalue is the weighted valency
        let valency = w.valency(&e.classes, &e.stats);
        prop_assert!(s.entries.iter().any(|x| x.value.exact() == Some(&valency)));
        prop_assert_eq!(s.max().value.exact(), Some(&valency));
    }

    #[test]
    fn quadratic_ring_laws(a in quad(), b in quad(), c in quad()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(a.conj().conj(), a.clone());
    }

    #[test]
    fn quadratic_norm_is_rational(r in small_rat(), s in small_rat(), d in prop::sample::select(vec![2i64, 3, 5, 7, 10])) {
        let x = &QuadSum::rational(r.clone()) + &QuadSum::term(s.clone(), d);
        let y = &QuadSum::rational(r.clone()) + &QuadSum::term(-s.clone(), d);
        prop_assert_eq!((&x * &y).as_rational(), Some(&r * &r - &s * &s * int(d)));
        let e = x.enclosure(40).unwrap();
        let f = to_f64(&r) + to_f64(&s) * (d as f64).sqrt();
        prop_assert!(e.lo <= e.hi && e.width() < rat(1, 1 << 30));
        prop_assert!(to_f64(&e.lo) - 1e-9 <= f && f <= to_f64(&e.hi) + 1e-9);
    }

    #[test]
    fn expressions_match_big_integers(a in -10_000i64..10_000, b in 1i64..500, k in 0u32..30) {
        let num = |src: &str| match eval_with(src, &[("a", a), ("b", b), ("k", k as i64)]).unwrap() {
            Value::Num(x) => x,
            v => panic!("{v:?}"),
        };
        let (ba, bb) = (BigInt::from(a), BigInt::from(b));
        prop_assert_eq!(num("a*b - b^k"), BigRational::from_integer(&ba * &bb - bb.pow(k)));
        prop_assert_eq!(num("(a + b) / b"), BigRational::new(&ba + &bb, bb.clone()));
        prop_assert_eq!(num("a % b"), int(a.rem_euclid(b)));
        prop_assert_eq!(num("-a^2"), BigRational::from_integer(-(&ba * &ba)));
        let cond = eval_with("a % b == 0 || a < b", &[("a", a), ("b", b)]).unwrap();
        prop_assert_eq!(cond, Value::Bool(a.rem_euclid(b) == 0 || a < b));
    }

    #[test]
    fn decimal_strings_enclose(n in -1_000_000i64..1_000_000, d in 1i64..10_000, digits in 0u32..15) {
        let x = rat(n, d);
        let lo = parse_decimal(&decimal_string(&x, digits, false));
        let hi = parse_decimal(&decimal_string(&x, digits, true));
        prop_assert!(lo <= x && x <= hi);
        prop_assert!(&hi - &lo <= BigRational::new(1.into(), BigInt::from(10u32).pow(digits)));
    }

    #[test]
    fn permutation_algebra(a in Just((0u32..9).collect::<Vec<_>>()).prop_shuffle(),
                           b in Just((0u32..9).collect::<Vec<_>>()).prop_shuffle()) {
        let p = Permutation::from_images(a).unwrap();
        let q = Permutation::from_images(b).unwrap();
        prop_assert_eq!(p.then(&q).inverse(), q.inverse().then(&p.inverse()));
        prop_assert!(p.then(&p.inverse()).is_identity());
        let mut r = Permutation::identity(9);
        for _ in 0..p.order() {
            r = r.then(&p);
        }
        prop_assert!(r.is_identity());
        let moved: usize = p.cycles().iter().map(Vec::len).sum();
        prop_assert_eq!(p.fixed_points() + moved, 9);
    }

    /// Greedy cliques and cocliques from random orders: each clique meets each
    /// coclique at most once, so the product of their sizes is at most |G|.
    #[test]
    fn clique_coclique_product(order in Just((0u32..168).collect::<Vec<_>>()).prop_shuffle()) {
        let e = psl27();
        let t = &e.table;
        let derangement = |g: u32, h: u32| t.fixed_points(t.multiply(g, t.inverse(h))) == 0;
        let mut coclique: Vec<u32> = Vec::new();
        let mut clique: Vec<u32> = Vec::new();
        for &g in &order {
            if coclique.iter().all(|&h| !derangement(g, h)) {
                coclique.push(g);
            }
            if clique.iter().all(|&h| derangement(g, h)) {
                clique.push(g);
            }
        }
        prop_assert!(is_intersecting(t, &coclique));
        prop_assert!(clique.iter().filter(|g| coclique.contains(g)).count() <= 1);
        prop_assert!(coclique.len() * clique.len() <= t.order());
        prop_assert!(coclique.len() <= 21);
    }
}

fn parse_decimal(s: &str) -> BigRational {
    let neg = s.starts_with('-');
    let s = s.trim_start_matches('-');
    let (i, f) = s.split_once('.').unwrap_or((s, ""));
    let x = parse_rational(&format!("{i}{f}")).unwrap() / BigRational::from_integer(BigInt::from(10u32).pow(f.len() as u32));
    if neg {
        -x
    } else {
        x
    }
}
