mod common;

use std::sync::Arc;

use anyon_condensation::catalog::{self, CatalogEntry};
use anyon_condensation::channels::{lift, lift_coarse, restrict, round_trip};
use anyon_condensation::duality::{
    apply_permutation, find_dualities, verify_duality, DEFAULT_SEARCH_CAP,
};
use anyon_condensation::entropy::{order_parameter, LogBase};
use anyon_condensation::enumerate::{canonical_columns, enumerate_branchings};
use anyon_condensation::io::{self, Document};
use anyon_condensation::sampling::seeded;
use anyon_condensation::{AnyonSystem, CondensableAlgebraView, SectorState, Tolerance};
use num_rational::Rational64;
use proptest::prelude::*;

fn entries() -> Vec<CatalogEntry> {
    let mut all = catalog::catalog();
    all.push(catalog::entry("z5-full").unwrap());
    all
}

fn entry_and_weights() -> impl Strategy<Value = (usize, Vec<f64>)> {
    let n = entries().len();
    (0..n).prop_flat_map(|i| {
        let k = entries()[i].branching.source().len();
        (Just(i), prop::collection::vec(0.0f64..1.0, k))
    })
}

fn normalized(sys: &Arc<AnyonSystem>, w: &[f64]) -> Option<SectorState> {
    let total: f64 = w.iter().sum();
    if total <= 1e-9 {
        return None;
    }
    Some(SectorState::new(sys.clone(), w.iter().map(|x| x / total).collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn restrict_and_lift_preserve_trace((i, w) in entry_and_weights()) {
        let b = &entries()[i].branching;
        let Some(rho) = normalized(b.source(), &w) else { return Ok(()) };
        let sigma = restrict(b, &rho).unwrap();
        prop_assert!((sigma.total() - 1.0).abs() <= 1e-12);
        prop_assert!((lift(b, &sigma).unwrap().total() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn coarse_lift_matches_round_trip((i, w) in entry_and_weights()) {
        let b = &entries()[i].branching;
        let Some(rho) = normalized(b.source(), &w) else { return Ok(()) };
        let diff = round_trip(b, &rho).unwrap().max_diff(&lift_coarse(b, &rho).unwrap());
        prop_assert!(diff <= 1e-12, "{diff}");
    }

    #[test]
    fn order_parameter_is_bounded((i, w) in entry_and_weights()) {
        let b = &entries()[i].branching;
        let Some(rho) = normalized(b.source(), &w) else { return Ok(()) };
        for base in [LogBase::Natural, LogBase::Bits] {
            let r = order_parameter(b, &rho, base).unwrap();
            prop_assert!(r.order_parameter >= -1e-12);
            prop_assert!(r.order_parameter <= r.bound + 1e-9);
            prop_assert!(r.formula_residual <= 1e-9);
        }
    }

    #[test]
    fn permutation_is_an_involution_for_swaps((w, seed) in (prop::collection::vec(0.0f64..1.0, 4), any::<u64>())) {
        let a = catalog::entry("toric-1Y").unwrap().branching;
        let b = catalog::entry("toric-1Z").unwrap().branching;
        let d = &find_dualities(&a, &b, DEFAULT_SEARCH_CAP).unwrap()[0];
        let Some(rho) = normalized(a.source(), &w) else { return Ok(()) };
        let back = apply_permutation(&d.inverse(), &apply_permutation(d, &rho).unwrap()).unwrap();
        prop_assert_eq!(back, rho);
        let check = verify_duality(&a, &b, d, 5, &mut seeded(seed)).unwrap();
        prop_assert!(check.holds(1e-12));
    }

    #[test]
    fn systems_round_trip_through_json(
        dims in prop::collection::vec(1.0f64..50.0, 1..6),
        twists in prop::collection::vec((-20i64..20, 1i64..12), 6),
        with_twist in any::<bool>(),
    ) {
        let labels: Vec<String> = (0..dims.len()).map(|i| format!("s{i}")).collect();
        let mut dims = dims;
        dims[0] = 1.0;
        let mut sys = AnyonSystem::new(labels.clone(), dims, "s0").unwrap();
        if with_twist {
            let mut values: Vec<Rational64> = twists.iter().map(|&(p, q)| Rational64::new(p, q)).collect();
            values[0] = Rational64::from_integer(0);
            sys = sys.with_twist(labels.iter().map(String::as_str).zip(values)).unwrap();
        }
        let doc = Document::System(sys);
        prop_assert_eq!(io::parse(&io::to_json(&doc)).unwrap(), doc);
    }
}

/// Relabeling the source sectors relabels the solutions and nothing else.
#[test]
fn enumeration_is_invariant_under_source_relabeling() {
    let cases: [(AnyonSystem, Vec<u32>); 2] = [
        (catalog::toric_code(), vec![1, 1, 0, 0]),
        (catalog::rep_s3(), vec![1, 1, 0]),
    ];
    for (sys, column) in cases {
        let k = sys.len();
        let base = canonical_set(&sys, &column);
        for order in permutations(k) {
            let moved = sys.reordered(&order).unwrap();
            let moved_column: Vec<u32> = order.iter().map(|&i| column[i]).collect();
            let got = canonical_set(&moved, &moved_column);
            // undo the reordering on each column before comparing
            let restored: std::collections::BTreeSet<_> = got
                .into_iter()
                .map(|cols| {
                    let mut back: Vec<(u32, Vec<u32>)> = cols
                        .into_iter()
                        .map(|(d, c)| {
                            let mut orig = vec![0; k];
                            for (new, &old) in order.iter().enumerate() {
                                orig[old] = c[new];
                            }
                            (d, orig)
                        })
                        .collect();
                    back.sort();
                    back
                })
                .collect();
            assert_eq!(restored, base, "order {order:?}");
        }
    }
}

fn canonical_set(
    sys: &AnyonSystem,
    column: &[u32],
) -> std::collections::BTreeSet<common::Canonical> {
    let sys = Arc::new(sys.clone());
    let alg = CondensableAlgebraView::new(&sys, column.to_vec()).unwrap();
    enumerate_branchings(sys, &alg, 4, 2)
        .unwrap()
        .iter()
        .map(|b| canonical_columns(b).unwrap())
        .collect()
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

#[test]
fn solver_agrees_with_brute_force_on_small_systems() {
    let systems = [
        (
            AnyonSystem::new(["1", "a", "b", "c"], vec![1.0, 1.0, 2.0, 2.0], "1").unwrap(),
            vec![1, 1, 0, 0],
        ),
        (
            AnyonSystem::new(["1", "a", "b"], vec![1.0, 1.0, 1.0], "1").unwrap(),
            vec![1, 0, 0],
        ),
        (
            AnyonSystem::new(["1", "a", "b"], vec![1.0, 1.0, 1.0], "1").unwrap(),
            vec![1, 1, 1],
        ),
        (
            AnyonSystem::new(["1", "a", "b", "c"], vec![1.0, 1.0, 1.0, 1.0], "1").unwrap(),
            vec![1, 0, 0, 0],
        ),
    ];
    for (sys, column) in systems {
        let expected = common::brute_force(&sys, &column, 4, 2);
        assert_eq!(
            canonical_set(&sys, &column),
            expected,
            "{:?} {column:?}",
            sys.label_names()
        );
    }
}

#[test]
fn duality_search_is_symmetric_on_the_catalog() {
    let all = catalog::catalog();
    for a in &all {
        for b in &all {
            if a.branching.source() != b.branching.source() {
                continue;
            }
            let forward = find_dualities(&a.branching, &b.branching, DEFAULT_SEARCH_CAP).unwrap();
            let backward = find_dualities(&b.branching, &a.branching, DEFAULT_SEARCH_CAP).unwrap();
            assert_eq!(forward.len(), backward.len(), "{} {}", a.id, b.id);
            for d in &forward {
                assert!(backward.contains(&d.inverse()), "{} {}", a.id, b.id);
                let check =
                    verify_duality(&a.branching, &b.branching, d, 100, &mut seeded(0)).unwrap();
                assert!(check.holds(1e-12), "{} {} {check:?}", a.id, b.id);
                assert_eq!(a.branching.jones_index(), b.branching.jones_index());
            }
        }
    }
}

#[test]
fn validation_is_tolerance_monotone() {
    for e in catalog::catalog() {
        for tol in [1e-12, 1e-9, 1e-3] {
            assert!(
                e.branching
                    .validate(Tolerance::new(tol).unwrap())
                    .is_valid(),
                "{}",
                e.id
            );
        }
    }
}
