mod common;

use std::cmp::Ordering;

use proptest::prelude::*;

use common::{cross_intersecting, meets, non_trivial, subsets, Binom, SplitMix};
use crossint_core::family::{are_cross_intersecting, example1_pair, hm_family, transversal};
use crossint_core::io::{read_family, write_family};
use crossint_core::kset::{lex_family, lex_rank, lex_unrank, shift_le};
use crossint_core::shifting::is_shifted;
use crossint_core::{Family, GroundSpec, KSet};

fn family(n: u32, k: u32, sets: &[Vec<u32>]) -> Family {
    let members = sets.iter().map(|s| KSet::from_elems(s).unwrap()).collect();
    Family::new(GroundSpec::full(n, k).unwrap(), members).unwrap()
}

fn sets_of(f: &Family) -> Vec<Vec<u32>> {
    f.iter().map(KSet::elems).collect()
}

fn pick(all: &[Vec<u32>], bits: u64) -> Vec<Vec<u32>> {
    all.iter()
        .enumerate()
        .filter(|(i, _)| bits >> i & 1 == 1)
        .map(|(_, s)| s.clone())
        .collect()
}

/// Coordinatewise domination of sorted tuples.
fn dominated(a: &[u32], b: &[u32]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x <= y)
}

#[test]
fn shift_order_is_a_partial_order() {
    let all: Vec<KSet> = GroundSpec::full(8, 3).unwrap().iter().collect();
    for &a in &all {
        assert!(shift_le(a, a));
        for &b in &all {
            assert_eq!(shift_le(a, b), dominated(&a.elems(), &b.elems()));
            if shift_le(a, b) && shift_le(b, a) {
                assert_eq!(a, b);
            }
            for &c in &all {
                if shift_le(a, b) && shift_le(b, c) {
                    assert!(shift_le(a, c));
                }
            }
        }
    }
}

#[test]
fn shift_order_refines_into_lex() {
    for k in 2..=4 {
        let g = GroundSpec::full(9, k).unwrap();
        let all: Vec<KSet> = g.iter().collect();
        for &a in &all {
            for &b in &all {
                if shift_le(a, b) {
                    assert_ne!(g.lex_cmp(a, b).unwrap(), Ordering::Greater, "{a} {b}");
                }
            }
        }
    }
}

#[test]
fn lex_families_nest_and_are_shifted() {
    let g = GroundSpec::full(9, 3).unwrap();
    let all = subsets(9, 3);
    let mut prev = lex_family(&g, 0).unwrap();
    for m in 1..=g.total() {
        let cur = lex_family(&g, m).unwrap();
        assert!(prev.is_subfamily_of(&cur) && cur.len() == m as usize);
        assert_eq!(sets_of(&cur), all[..m as usize].to_vec());
        assert!(is_shifted(&cur), "m={m}");
        prev = cur;
    }
    assert!(lex_family(&g, g.total() + 1).is_err());
}

#[test]
fn rank_agrees_with_enumeration() {
    for (n, k) in [(7, 3), (10, 4), (12, 2)] {
        let g = GroundSpec::full(n, k).unwrap();
        for (r, s) in subsets(n, k).iter().enumerate() {
            let a = KSet::from_elems(s).unwrap();
            assert_eq!(lex_rank(&g, a).unwrap(), r as u64);
            assert_eq!(lex_unrank(&g, r as u64).unwrap(), a);
        }
    }
}

#[test]
fn cross_intersection_is_containment_in_transversal() {
    for n in 4..=5u32 {
        let all = subsets(n, 2);
        let mut rng = SplitMix(n as u64);
        for _ in 0..400 {
            let (fb, gb) = (
                rng.next() & ((1 << all.len()) - 1),
                rng.next() & ((1 << all.len()) - 1),
            );
            let (fs, gs) = (pick(&all, fb), pick(&all, gb));
            let (f, g) = (family(n, 2, &fs), family(n, 2, &gs));
            let t = transversal(&f, 2).unwrap();
            let ci = are_cross_intersecting(&f, &g).unwrap();
            assert_eq!(ci, cross_intersecting(&fs, &gs));
            assert_eq!(ci, g.is_subfamily_of(&t));
        }
    }
    let all = subsets(4, 2);
    for fb in 0u64..1 << all.len() {
        let fs = pick(&all, fb);
        let t = transversal(&family(4, 2, &fs), 2).unwrap();
        let oracle: Vec<Vec<u32>> = all
            .iter()
            .filter(|s| fs.iter().all(|a| meets(a, s)))
            .cloned()
            .collect();
        assert_eq!(sets_of(&t), oracle);
    }
    let mut rng = SplitMix(3);
    for n in 6..=8u32 {
        let all = subsets(n, 3);
        for _ in 0..200 {
            let fs: Vec<Vec<u32>> = all.iter().filter(|_| rng.chance(1, 10)).cloned().collect();
            let gs: Vec<Vec<u32>> = all.iter().filter(|_| rng.chance(1, 3)).cloned().collect();
            let (f, g) = (family(n, 3, &fs), family(n, 3, &gs));
            let ci = are_cross_intersecting(&f, &g).unwrap();
            assert_eq!(ci, cross_intersecting(&fs, &gs));
            assert_eq!(ci, g.is_subfamily_of(&transversal(&f, 3).unwrap()));
        }
    }
}

#[test]
fn transversal_antitone_and_closing() {
    let mut rng = SplitMix(11);
    for n in 5..=8u32 {
        let k = if n < 7 { 2 } else { 3 };
        let all = subsets(n, k);
        for _ in 0..150 {
            let fs: Vec<Vec<u32>> = all.iter().filter(|_| rng.chance(1, 6)).cloned().collect();
            let extra: Vec<Vec<u32>> = all
                .iter()
                .filter(|s| fs.contains(s) || rng.chance(1, 8))
                .cloned()
                .collect();
            let (f, f2) = (family(n, k, &fs), family(n, k, &extra));
            let t = transversal(&f, k).unwrap();
            let tt = transversal(&t, k).unwrap();
            assert!(transversal(&f2, k).unwrap().is_subfamily_of(&t));
            assert!(f.is_subfamily_of(&tt));
            assert_eq!(transversal(&tt, k).unwrap(), t);
        }
    }
}

#[test]
fn triviality_is_inherited_by_subfamilies() {
    // Removing one member at a time reaches every subfamily, so checking all
    // single removals of all families is exhaustive.
    let all = subsets(6, 2);
    let fams: Vec<bool> = (0u64..1 << all.len())
        .map(|fb| family(6, 2, &pick(&all, fb)).is_non_trivial())
        .collect();
    for (fb, &nt) in fams.iter().enumerate() {
        assert_eq!(nt, non_trivial(&pick(&all, fb as u64), 6));
        if nt || fb == 0 {
            continue;
        }
        for i in 0..all.len() {
            let sub = fb & !(1 << i);
            if sub != fb && sub != 0 {
                assert!(!fams[sub], "{fb:#x} -> {sub:#x}");
            }
        }
    }
}

#[test]
fn hm_family_shape() {
    let b = Binom::new(40);
    for k in 2..=4u32 {
        for n in 2 * k + 1..=20 {
            let f = hm_family(n, k).unwrap();
            assert!(f.is_intersecting() && f.is_non_trivial(), "({n},{k})");
            assert_eq!(f.size(), b.h(n as i64, k as i64));
        }
    }
}

#[test]
fn pinned_pairs_reach_hm_square() {
    let b = Binom::new(20);
    for (n, k) in [
        (5, 2),
        (6, 2),
        (7, 2),
        (8, 2),
        (9, 2),
        (7, 3),
        (8, 3),
        (9, 3),
    ] {
        let h = b.h(n as i64, k as i64);
        let inner: Vec<Vec<u32>> = subsets(n, k)
            .into_iter()
            .filter(|s| !s.contains(&1))
            .collect();
        for f0 in &inner {
            for g0 in &inner {
                let r = example1_pair(
                    n,
                    k,
                    KSet::from_elems(f0).unwrap(),
                    KSet::from_elems(g0).unwrap(),
                );
                if !meets(f0, g0) {
                    assert!(r.is_err());
                    continue;
                }
                let (f, g) = r.unwrap();
                assert_eq!(f.size() * g.size(), &h * &h, "({n},{k}) {f0:?} {g0:?}");
            }
        }
    }
}

fn arb_family() -> impl Strategy<Value = Family> {
    (1u32..4, 3u32..12)
        .prop_flat_map(|(lo, n)| {
            let width = n - lo + 1;
            (Just(lo), Just(n), 1..=width.min(4))
        })
        .prop_flat_map(|(lo, n, k)| {
            let g = GroundSpec::new(lo, n, k).unwrap();
            let total = g.total() as usize;
            (Just(g), proptest::collection::vec(any::<bool>(), total))
        })
        .prop_map(|(g, keep)| {
            let members = g
                .iter()
                .zip(keep)
                .filter(|(_, b)| *b)
                .map(|(s, _)| s)
                .collect();
            Family::new(g, members).unwrap()
        })
}

proptest! {
    #[test]
    fn family_files_roundtrip(f in arb_family()) {
        let text = write_family(&f);
        let back = read_family(&text).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(write_family(&back), text);
    }
}
