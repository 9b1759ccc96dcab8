//! Brute-force oracles against the engine on small integer sets.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use proptest::prelude::*;
use sumset_core::lemmas::{check_lemma_23, check_lemma_24, check_lemma_25, check_tail_bound};
use sumset_core::rep::rep_function_with;
use sumset_core::{
    additive_energy, energy_cross, energy_k, generate, quad_intersection, rep_function,
    restricted_energy_sum, Backend, Family, FamilySpec, FiniteSet, Rational, RepKind,
};

fn set(v: &[i64]) -> FiniteSet {
    FiniteSet::from_ints(v).unwrap()
}

fn brute_sum_rep(a: &[i64], b: &[i64]) -> BTreeMap<i64, u64> {
    let mut m = BTreeMap::new();
    for x in a {
        for y in b {
            *m.entry(x + y).or_insert(0) += 1;
        }
    }
    m
}

fn brute_diff_rep(a: &[i64], b: &[i64]) -> BTreeMap<i64, u64> {
    let mut m = BTreeMap::new();
    for x in a {
        for y in b {
            *m.entry(x - y).or_insert(0) += 1;
        }
    }
    m
}

/// Quadruples `a1 - b1 = a2 - b2`, counted directly.
fn brute_energy(a: &[i64], b: &[i64]) -> u128 {
    let mut n = 0u128;
    for a1 in a {
        for b1 in b {
            for a2 in a {
                for b2 in b {
                    if a1 - b1 == a2 - b2 {
                        n += 1;
                    }
                }
            }
        }
    }
    n
}

fn brute_energy_k(a: &[i64], k: u32) -> u128 {
    brute_diff_rep(a, a)
        .values()
        .map(|&d| (d as u128).pow(k))
        .sum()
}

fn distinct_sorted(v: Vec<i64>) -> Vec<i64> {
    v.into_iter().collect::<BTreeSet<_>>().into_iter().collect()
}

fn small_set() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-60i64..60, 1..14).prop_map(distinct_sorted)
}

fn convex_set() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(1i64..6, 2..14).prop_map(|incs| {
        let mut gap = 0;
        let mut x = 0;
        let mut out = vec![0];
        for d in incs {
            gap += d;
            x += gap;
            out.push(x);
        }
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn rep_functions_match_brute_force(a in small_set(), b in small_set()) {
        let (sa, sb) = (set(&a), set(&b));
        for backend in [Backend::Sparse, Backend::Dense, Backend::Auto] {
            let r = rep_function_with(&sa, &sb, RepKind::Sum, backend).unwrap();
            let got: BTreeMap<i64, u64> =
                r.iter().map(|(x, c)| (x.to_i64().unwrap(), c)).collect();
            prop_assert_eq!(&got, &brute_sum_rep(&a, &b));
            let d = rep_function_with(&sa, &sb, RepKind::Difference, backend).unwrap();
            let got: BTreeMap<i64, u64> =
                d.iter().map(|(x, c)| (x.to_i64().unwrap(), c)).collect();
            prop_assert_eq!(&got, &brute_diff_rep(&a, &b));
        }
    }

    #[test]
    fn energy_three_ways(a in small_set(), b in small_set()) {
        let (sa, sb) = (set(&a), set(&b));
        let want = brute_energy(&a, &b);
        prop_assert_eq!(additive_energy(&sa, &sb), want);
        prop_assert_eq!(energy_cross(&sa, &sb).unwrap(), BigUint::from(want));
        let r = rep_function(&sa, &sb, RepKind::Sum);
        prop_assert_eq!(r.sum_squares(), want);
    }

    #[test]
    fn higher_energies(a in small_set()) {
        let sa = set(&a);
        for k in 1..=4 {
            prop_assert_eq!(energy_k(&sa, k), BigUint::from(brute_energy_k(&a, k)));
        }
        prop_assert_eq!(energy_k(&sa, 1), BigUint::from((a.len() * a.len()) as u64));
    }

    #[test]
    fn quad_intersection_is_symmetric(a in small_set(), s in -10i64..10, t in -10i64..10) {
        let sa = set(&a);
        let (qs, qt) = (Rational::from(s), Rational::from(t));
        let n = quad_intersection(&sa, &qs, &qt);
        let lit = a.iter().filter(|x| {
            let has = |y: i64| a.contains(&y);
            has(**x - s) && has(**x - t) && has(**x - s - t)
        }).count();
        prop_assert_eq!(n, lit);
        prop_assert_eq!(n, quad_intersection(&sa, &qt, &qs));
        let a_s = sa.shift_intersect(&qs);
        let via_rep = rep_function(&a_s, &a_s, RepKind::Difference).get(&qt);
        prop_assert_eq!(n as u64, via_rep);
    }

    #[test]
    fn restricted_energy_matches_per_shift_sum(a in small_set(), b in small_set()) {
        let (sa, sb) = (set(&a), set(&b));
        let mut want = 0u128;
        for s in brute_diff_rep(&a, &a).keys() {
            let a_s: Vec<i64> = a.iter().copied().filter(|x| a.contains(&(x - s))).collect();
            want += brute_energy(&a_s, &b);
        }
        prop_assert_eq!(restricted_energy_sum(&sa, &sb).unwrap(), BigUint::from(want));
    }

    #[test]
    fn sumset_and_diffset_sizes(a in small_set(), b in small_set()) {
        let (sa, sb) = (set(&a), set(&b));
        prop_assert_eq!(sa.sumset(&sb).len(), brute_sum_rep(&a, &b).len());
        prop_assert_eq!(sa.diffset(&sb).len(), brute_diff_rep(&a, &b).len());
    }

    #[test]
    fn convex_lemmas_hold(a in convex_set(), b in small_set()) {
        let (sa, sb) = (set(&a), set(&b));
        prop_assert!(sa.is_convex().is_some());
        prop_assert!(check_lemma_24(&sa, &sb).unwrap().holds());
        prop_assert!(check_lemma_25(&sa, &sb).unwrap().passed());
        prop_assert!(check_lemma_23(&sa, &sb, 1.0).holds());
    }

    #[test]
    fn verdicts_are_affine_invariant(a in convex_set(), b in small_set(), c in -50i64..50, l in 1i64..7) {
        let (sa, sb) = (set(&a), set(&b));
        let lambda = Rational::new(l, 3).unwrap();
        let shift = Rational::from(c);
        let map = |s: &FiniteSet| s.dilate(&lambda).unwrap().translate(&shift);
        let (ta, tb) = (map(&sa), map(&sb));
        let before = [
            check_lemma_24(&sa, &sb).unwrap(),
            check_lemma_25(&sa, &sb).unwrap(),
            check_lemma_23(&sa, &sb, 1.0),
            check_tail_bound(&sa, &sb, 16.0, None),
        ];
        let after = [
            check_lemma_24(&ta, &tb).unwrap(),
            check_lemma_25(&ta, &tb).unwrap(),
            check_lemma_23(&ta, &tb, 1.0),
            check_tail_bound(&ta, &tb, 16.0, None),
        ];
        for (x, y) in before.iter().zip(&after) {
            prop_assert_eq!(x.verdict, y.verdict, "{}", x.name);
            prop_assert!((x.ratio - y.ratio).abs() <= 1e-12 * x.ratio.abs().max(1.0), "{}", x.name);
        }
    }

    #[test]
    fn tail_counts_are_monotone(a in small_set(), b in small_set()) {
        let d = rep_function(&set(&a), &set(&b), RepKind::Difference);
        let mut prev = usize::MAX;
        for tau in 1..=a.len().min(b.len()) as u64 {
            let count = d.counts().iter().filter(|&&c| c >= tau).count();
            prop_assert!(count <= prev);
            prev = count;
        }
    }
}

#[test]
fn rational_sets_match_scaled_integers() {
    let ints = [0i64, 3, 7, 12, 18, 25];
    let q: Vec<Rational> = ints.iter().map(|&x| Rational::new(x, 5).unwrap()).collect();
    let a = FiniteSet::new(q, true).unwrap();
    assert!(a.int_view().is_none());
    assert_eq!(energy_k(&a, 2), BigUint::from(brute_energy_k(&ints, 2)));
    assert_eq!(energy_k(&a, 3), BigUint::from(brute_energy_k(&ints, 3)));
}

#[test]
fn ap_tail_ratios_grow_with_n() {
    let mut prev = 0.0;
    for n in [16usize, 32, 64, 128, 256, 512] {
        let a = generate(&FamilySpec::new(
            Family::Ap {
                start: Rational::one(),
                step: Rational::one(),
            },
            n,
            0,
        ))
        .unwrap();
        let r = check_tail_bound(&a, &a, 16.0, None);
        assert!(r.negative_control);
        assert!(r.ratio > prev, "n = {n}: {} <= {prev}", r.ratio);
        prev = r.ratio;
    }
    assert!(prev > 1.0);
}

#[test]
fn squares_are_convex_and_bounded() {
    for n in [16usize, 64, 128] {
        let a = generate(&FamilySpec::new(Family::Squares, n, 0)).unwrap();
        let r = check_tail_bound(&a, &a, 16.0, None);
        assert!(r.holds(), "n = {n}");
        assert!(!r.negative_control);
    }
}
