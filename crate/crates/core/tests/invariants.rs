mod common;

use std::sync::OnceLock;

use proptest::prelude::*;
use subset_factor::cayley::{ball, GeneratingSet};
use subset_factor::factor::{
    classify_factor_with, find_left_complement, find_right_complement, hole_criterion,
    verify_evidence, Classification, ClassifyOptions,
};
use subset_factor::group::{generated_subgroup, Group};
use subset_factor::notation::{format_subset, group_from_spec, parse_subset};
use subset_factor::subset::{canonical_form, invert_set, translate, CanonLevel, Side, Subset};

use common::{brute_left_exists, brute_right_exists, closure, is_direct, set};

const SPECS: &[&str] = &[
    "C4",
    "C2xC2",
    "C6",
    "S3",
    "C8",
    "C4xC2",
    "C2xC2xC2",
    "D4",
    "Q8",
    "C9",
    "C3xC3",
    "D5",
    "C10",
    "A4",
    "sd(3,4,2)",
];

fn groups() -> &'static [Group] {
    static G: OnceLock<Vec<Group>> = OnceLock::new();
    G.get_or_init(|| SPECS.iter().map(|s| group_from_spec(s).unwrap()).collect())
}

/// A group from the pool and a nonempty subset of it.
fn group_and_subset() -> impl Strategy<Value = (usize, Vec<usize>)> {
    (0..SPECS.len()).prop_flat_map(|i| {
        let n = groups()[i].order();
        (Just(i), proptest::collection::btree_set(0..n, 1..=n))
            .prop_map(|(i, s)| (i, s.into_iter().collect()))
    })
}

fn with_elem() -> impl Strategy<Value = (usize, Vec<usize>, usize)> {
    group_and_subset().prop_flat_map(|(i, a)| {
        let n = groups()[i].order();
        (Just(i), Just(a), 0..n)
    })
}

fn exhaustive(g: &Group, a: &Subset) -> Classification {
    classify_factor_with(g, a, ClassifyOptions::exhaustive())
        .unwrap()
        .classification
}

fn shortcut(g: &Group, a: &Subset) -> Classification {
    classify_factor_with(g, a, ClassifyOptions::default())
        .unwrap()
        .classification
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn group_axioms((i, _a, x) in with_elem(), y in 0usize..24, z in 0usize..24) {
        let g = &groups()[i];
        let (y, z) = (y % g.order(), z % g.order());
        prop_assert_eq!(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z)));
        prop_assert_eq!(g.mul(x, g.identity()), x);
        prop_assert_eq!(g.mul(g.inv(x), x), g.identity());
    }

    #[test]
    fn format_then_parse((i, a) in group_and_subset()) {
        let g = &groups()[i];
        let a = set(g, &a);
        prop_assert_eq!(parse_subset(g, &format_subset(g, &a)).unwrap(), a);
    }

    #[test]
    fn complements_are_direct((i, a) in group_and_subset()) {
        let g = &groups()[i];
        let s = set(g, &a);
        if let Some(b) = find_left_complement(g, &s).unwrap() {
            prop_assert!(is_direct(g, &a, &b.to_vec()));
        }
        if let Some(b) = find_right_complement(g, &s).unwrap() {
            prop_assert!(is_direct(g, &b.to_vec(), &a));
        }
    }

    #[test]
    fn classification_matches_brute_force((i, a) in group_and_subset()) {
        let g = &groups()[i];
        prop_assume!(g.order() <= 10);
        let expected = Classification::from_sides(brute_left_exists(g, &a), brute_right_exists(g, &a));
        prop_assert_eq!(exhaustive(g, &set(g, &a)), expected);
    }

    #[test]
    fn shortcuts_agree_with_search((i, a) in group_and_subset()) {
        let g = &groups()[i];
        let s = set(g, &a);
        let quick = classify_factor_with(g, &s, ClassifyOptions::default()).unwrap();
        prop_assert_eq!(quick.classification, exhaustive(g, &s));
        if let Some(ev) = &quick.evidence {
            prop_assert!(verify_evidence(g, &s, ev));
        }
    }

    #[test]
    fn inversion_swaps_sides((i, a) in group_and_subset()) {
        let g = &groups()[i];
        let s = set(g, &a);
        prop_assert_eq!(shortcut(g, &invert_set(g, &s)), shortcut(g, &s).mirrored());
    }

    #[test]
    fn translation_keeps_classification((i, a, x) in with_elem()) {
        let g = &groups()[i];
        let s = set(g, &a);
        let c = shortcut(g, &s);
        prop_assert_eq!(shortcut(g, &translate(g, &s, x, Side::Left)), c);
        prop_assert_eq!(shortcut(g, &translate(g, &s, x, Side::Right)), c);
    }

    #[test]
    fn hole_certificate_is_sound((i, a) in group_and_subset()) {
        let g = &groups()[i];
        let s = set(g, &a);
        prop_assume!(!s.contains(g.identity()));
        if hole_criterion(g, &s, Side::Left).unwrap().is_none() {
            prop_assert!(!brute_left_exists(g, &a));
        }
        if hole_criterion(g, &s, Side::Right).unwrap().is_none() {
            prop_assert!(!brute_right_exists(g, &a));
        }
    }

    #[test]
    fn generated_subgroups_are_two_sided((i, a) in group_and_subset()) {
        let g = &groups()[i];
        let h = closure(g, &a);
        prop_assert_eq!(generated_subgroup(g, &set(g, &a)).elements().to_vec(), h.clone());
        prop_assert_eq!(shortcut(g, &set(g, &h)), Classification::TwoSided);
    }

    #[test]
    fn canonical_form_is_constant_on_orbits((i, a, x) in with_elem()) {
        let g = &groups()[i];
        let s = set(g, &a);
        let left = translate(g, &s, x, Side::Left);
        let right = translate(g, &s, x, Side::Right);
        let c1 = canonical_form(g, &s, CanonLevel::L1).unwrap();
        prop_assert!(c1.contains(g.identity()));
        prop_assert_eq!(canonical_form(g, &left, CanonLevel::L1).unwrap(), c1);
        let c2 = canonical_form(g, &s, CanonLevel::L2).unwrap();
        prop_assert_eq!(canonical_form(g, &right, CanonLevel::L2).unwrap(), c2.clone());
        prop_assert_eq!(canonical_form(g, &invert_set(g, &s), CanonLevel::L2).unwrap(), c2);
    }

    #[test]
    fn balls_grow_monotonically((i, _a) in group_and_subset(), r in 0usize..6) {
        let g = &groups()[i];
        let gens = GeneratingSet::standard(g).unwrap();
        let small = ball(g, &gens, r).members;
        let big = ball(g, &gens, r + 1).members;
        prop_assert!(small.is_subset_of(&big));
        for x in big.iter() {
            let near = gens.symmetric().iter().any(|&s| small.contains(g.mul(x, g.inv(s))));
            prop_assert!(small.contains(x) || near);
        }
    }

    #[test]
    fn subset_ops_match_sets((i, a) in group_and_subset(), b in proptest::collection::vec(0usize..24, 0..12)) {
        let g = &groups()[i];
        let n = g.order();
        let b: Vec<usize> = b.into_iter().map(|x| x % n).collect();
        let (sa, sb) = (set(g, &a), set(g, &b));
        let union: std::collections::BTreeSet<usize> = a.iter().chain(&b).copied().collect();
        prop_assert_eq!(sa.union(&sb).to_vec(), union.into_iter().collect::<Vec<_>>());
        let meet: Vec<usize> = a.iter().copied().filter(|x| b.contains(x)).collect();
        prop_assert_eq!(sa.intersection(&sb).to_vec(), meet);
        prop_assert_eq!(sa.complement().len(), n - a.len());
    }
}

#[test]
fn factor_of_generated_subgroup_iff_factor_of_group() {
    for g in groups().iter().filter(|g| g.order() <= 10) {
        for a in common::subsets_containing(g.order(), g.identity()) {
            let s = set(g, &a);
            let h = generated_subgroup(g, &s);
            if h.order() == g.order() {
                continue;
            }
            let (hg, _) = h.as_group(g);
            let inner = exhaustive(&hg, &h.restrict(&s).unwrap());
            assert_eq!(
                inner.is_left(),
                brute_left_exists(g, &a),
                "{} {:?}",
                g.name(),
                a
            );
            assert_eq!(
                inner.is_right(),
                brute_right_exists(g, &a),
                "{} {:?}",
                g.name(),
                a
            );
        }
    }
}
