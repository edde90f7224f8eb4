mod common;

use common::{meets, non_trivial, subsets, weight, SplitMix};
use crossint_core::search::{
    brute_oracle, fk_diversity_trial, hilton_trial, max_product_search, size_sum_trial,
    star_split_trial, SearchSpace,
};
use crossint_core::shifting::shift_pair_to_fixpoint;
use crossint_core::{Family, GroundSpec, KSet};

fn family(n: u32, k: u32, sets: &[Vec<u32>]) -> Family {
    let members = sets.iter().map(|s| KSet::from_elems(s).unwrap()).collect();
    Family::new(GroundSpec::full(n, k).unwrap(), members).unwrap()
}

/// Max of `|F||T(F)|` over all `F` with both sides non-trivial; taking `G = T(F)`
/// loses nothing because every admissible `G` sits inside `T(F)`.
fn product_oracle(n: u32, k: u32) -> u64 {
    let all = subsets(n, k);
    let m = all.len();
    let meets_mask: Vec<u64> = all
        .iter()
        .map(|a| {
            (0..m)
                .filter(|&j| meets(a, &all[j]))
                .fold(0u64, |acc, j| acc | 1 << j)
        })
        .collect();
    let contains: Vec<u64> = (1..=n)
        .map(|x| {
            (0..m)
                .filter(|&j| all[j].contains(&x))
                .fold(0u64, |acc, j| acc | 1 << j)
        })
        .collect();
    let trivial = |mask: u64| contains.iter().any(|&c| mask & !c == 0);
    let mut best = 0;
    for f in 1u64..1 << m {
        if trivial(f) {
            continue;
        }
        let t = (0..m)
            .filter(|&i| f >> i & 1 == 1)
            .fold(u64::MAX >> (64 - m), |acc, i| acc & meets_mask[i]);
        if t == 0 || trivial(t) {
            continue;
        }
        best = best.max(f.count_ones() as u64 * t.count_ones() as u64);
    }
    best
}

#[test]
fn searches_agree_with_independent_oracle() {
    for (n, k) in [(4, 2), (5, 2), (6, 2), (6, 3), (7, 2)] {
        let expect = product_oracle(n, k);
        let brute = brute_oracle(n, k).unwrap();
        let bnb = max_product_search(n, k, None).unwrap();
        assert!(brute.optimal && bnb.optimal);
        assert_eq!(brute.best_product, expect.into(), "brute ({n},{k})");
        assert_eq!(bnb.best_product, expect.into(), "search ({n},{k})");
        if n > 2 * k {
            assert!(bnb.matches_conjecture, "({n},{k})");
        }
    }
}

#[test]
fn trivial_transversals_admit_no_partner() {
    let all = subsets(5, 2);
    for fb in 1u64..1 << all.len() {
        let fs: Vec<Vec<u32>> = (0..all.len())
            .filter(|&i| fb >> i & 1 == 1)
            .map(|i| all[i].clone())
            .collect();
        let t: Vec<Vec<u32>> = all
            .iter()
            .filter(|s| fs.iter().all(|a| meets(a, s)))
            .cloned()
            .collect();
        if t.is_empty() || non_trivial(&t, 5) {
            continue;
        }
        for gb in 1u64..1 << t.len() {
            let gs: Vec<Vec<u32>> = (0..t.len())
                .filter(|&i| gb >> i & 1 == 1)
                .map(|i| t[i].clone())
                .collect();
            assert!(!non_trivial(&gs, 5));
        }
    }
}

#[test]
fn bound_dominates_along_random_paths() {
    let space = SearchSpace::new(6, 2).unwrap();
    let mut rng = SplitMix(99);
    for _ in 0..100 {
        let mut node = space.root();
        let mut bounds = vec![space.bound(&node)];
        while space.next(&node).is_some() {
            let step = if rng.chance(1, 2) {
                space.include(&node)
            } else {
                None
            };
            node = match step
                .or_else(|| space.exclude(&node))
                .or_else(|| space.include(&node))
            {
                Some(next) => next,
                None => break,
            };
            if let Some(p) = space.candidate(&node) {
                assert!(
                    bounds.iter().all(|&b| b >= p),
                    "product {p} above an ancestor bound"
                );
            }
            bounds.push(space.bound(&node));
        }
    }
}

#[test]
fn trials_are_deterministic() {
    assert_eq!(
        hilton_trial(9, 3, 500, 7).unwrap(),
        hilton_trial(9, 3, 500, 7).unwrap()
    );
    assert_eq!(
        star_split_trial(9, 3, 500, 7).unwrap(),
        star_split_trial(9, 3, 500, 7).unwrap()
    );
    assert_eq!(
        size_sum_trial(8, 3, 500, 7).unwrap(),
        size_sum_trial(8, 3, 500, 7).unwrap()
    );
    assert_eq!(
        fk_diversity_trial(8, 3, 3, 500, 7).unwrap(),
        fk_diversity_trial(8, 3, 3, 500, 7).unwrap()
    );
    assert_ne!(
        hilton_trial(9, 3, 500, 7).unwrap().seed,
        hilton_trial(9, 3, 500, 8).unwrap().seed
    );
}

#[test]
fn shift_traces_are_monotone() {
    let mut rng = SplitMix(2024);
    for trial in 0..300 {
        let n = 5 + trial % 5;
        let k = 2 + trial % 2;
        let (fs, gs) = common::random_ci_pair(&mut rng, n, k);
        let (_, _, trace) = shift_pair_to_fixpoint(&family(n, k, &fs), &family(n, k, &gs)).unwrap();
        assert_eq!(trace.initial_w, (weight(&fs) + weight(&gs)).into());
        assert!(trace.applied.iter().all(|s| s.moved > 0 && s.i < s.j));
        if trace.applied.is_empty() {
            assert_eq!(trace.initial_w, trace.final_w);
        } else {
            assert!(trace.final_w < trace.initial_w);
        }
    }
    let single = family(5, 2, &[vec![2, 3]]);
    let (f, g, trace) = shift_pair_to_fixpoint(&single, &single).unwrap();
    assert_eq!(
        f.iter().map(KSet::elems).collect::<Vec<_>>(),
        vec![vec![1, 2]]
    );
    assert_eq!(f, g);
    assert_eq!(
        (trace.initial_w.clone(), trace.final_w.clone()),
        (10.into(), 6.into())
    );
}
