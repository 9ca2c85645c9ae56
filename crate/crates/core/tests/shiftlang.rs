//! The address language against independent oracles: expansion hypergraphs
//! built by repeated replacement, and path counts by matrix powers.

mod common;

use common::{random_ray, sys};
use hyperess::catalog;
use hyperess::replacement::{Expansion, System};
use hyperess::shiftlang::{Address, Ctx, Ray};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

/// Letter names used anywhere in the system.
fn alphabet(s: &System) -> Vec<String> {
    let names: BTreeSet<String> = s.color_graph().edges.into_iter().map(|e| e.letter).collect();
    names.into_iter().collect()
}

fn leaf_names(s: &System, x: &Expansion) -> BTreeSet<String> {
    s.expansion_hypergraph(x).edges().iter().map(|e| e.name.clone()).collect()
}

/// Walks the word by replacement: each proper prefix must name a hyperedge
/// of the current expansion, which is then expanded.  Returns the first
/// 1-based position whose prefix is not a hyperedge, if any.
fn replacement_walk(s: &System, word: &[String]) -> Option<usize> {
    let mut x = s.base_expansion();
    for i in 1..=word.len() {
        let name = word[..i].join(".");
        if !leaf_names(s, &x).contains(&name) {
            return Some(i);
        }
        if i < word.len() {
            let w = s.parse_addr(&name).unwrap();
            x = s.expand_hyperedge(&x, &w).unwrap();
        }
    }
    None
}

fn all_words(alpha: &[String], n: usize) -> Vec<Vec<String>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                alpha.iter().map(move |a| {
                    let mut v = w.clone();
                    v.push(a.clone());
                    v
                })
            })
            .collect();
    }
    out
}

#[test]
fn membership_agrees_with_repeated_replacement() {
    for name in catalog::list() {
        let s = sys(&name);
        let alpha = alphabet(&s);
        let max_len = if alpha.len() <= 5 { 4 } else { 3 };
        for n in 1..=max_len {
            for w in all_words(&alpha, n) {
                let text = w.join(".");
                let walk = replacement_walk(&s, &w);
                assert_eq!(s.is_in_language(&text), Ok(walk.is_none()), "{name}: {text}");
                assert_eq!(s.language_check(&text), Ok(walk), "{name}: {text}");
            }
        }
    }
}

#[test]
fn leaves_of_enumerated_expansions_are_words() {
    for name in catalog::list() {
        let s = sys(&name);
        let xs = s.enumerate_expansions(9, 2);
        assert!(!xs.is_empty(), "{name}");
        let mut leaves = BTreeSet::new();
        for x in &xs {
            for w in &x.leaves {
                let text = s.addr_string(w);
                assert_eq!(s.is_in_language(&text), Ok(true), "{name}: {text}");
                leaves.insert(text);
            }
        }
        // conversely every short word is a leaf of some enumerated expansion
        // whenever the expansions reaching it fit in the enumeration bound
        for w in all_words(&alphabet(&s), 2) {
            let text = w.join(".");
            if s.is_in_language(&text) == Ok(true) {
                let a = s.parse_addr(&text).unwrap();
                let x = s.expand_hyperedge(&s.base_expansion(), &Address(a.0[..1].to_vec())).unwrap();
                if x.leaves.len() <= 9 {
                    assert!(leaves.contains(&text), "{name}: {text} missing");
                }
            }
        }
    }
}

/// Path counts from `s` in the color graph via powers of its adjacency matrix.
fn matrix_counts(s: &System, n: usize) -> Vec<u128> {
    let g = s.color_graph();
    let k = g.colors.len();
    let mut adj = vec![vec![0u128; k]; k];
    let mut start = vec![0u128; k];
    for e in &g.edges {
        match e.from {
            None => start[e.to as usize] += 1,
            Some(c) => adj[c as usize][e.to as usize] += 1,
        }
    }
    let mut power = (0..k).map(|i| (0..k).map(|j| u128::from(i == j)).collect::<Vec<_>>()).collect::<Vec<_>>();
    let mut out = vec![];
    for _ in 0..n {
        let total: u128 = (0..k).map(|i| start[i] * power[i].iter().sum::<u128>()).sum();
        out.push(total);
        power = (0..k)
            .map(|i| (0..k).map(|j| (0..k).map(|m| power[i][m] * adj[m][j]).sum()).collect())
            .collect();
    }
    out
}

#[test]
fn word_counts_are_matrix_power_path_counts() {
    for name in catalog::list() {
        let s = sys(&name);
        assert_eq!(s.language_counts(12), matrix_counts(&s, 12), "{name}");
        // and direct enumeration at small depth
        let alpha = alphabet(&s);
        for n in 1..=3 {
            let direct = all_words(&alpha, n).iter().filter(|w| s.is_in_language(&w.join(".")) == Ok(true)).count();
            assert_eq!(s.language_counts(n)[n - 1], direct as u128, "{name} depth {n}");
        }
    }
}

fn system_names() -> Vec<String> {
    catalog::list()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn unrolled_prefixes_are_words(idx in any::<prop::sample::Index>(), seed in any::<u64>(), n in 1usize..24) {
        let names = system_names();
        let s = sys(&names[idx.index(names.len())]);
        let r = random_ray(&s, &mut ChaCha8Rng::seed_from_u64(seed), 4, 4);
        for m in 1..=n {
            let text = s.word_string(Ctx::Base, &r.unroll(m));
            prop_assert_eq!(s.is_in_language(&text), Ok(true), "{}", text);
        }
    }

    #[test]
    fn ray_normal_form_is_canonical(idx in any::<prop::sample::Index>(), seed in any::<u64>(), extra in 0usize..3, reps in 1usize..3) {
        let names = system_names();
        let s = sys(&names[idx.index(names.len())]);
        let r = random_ray(&s, &mut ChaCha8Rng::seed_from_u64(seed), 4, 4);
        // the same infinite word written with a longer prefix and a repeated period
        let prefix = r.unroll(r.prefix.len() + extra * r.period.len());
        let period = r.unroll(prefix.len() + r.period.len()).split_off(prefix.len()).repeat(reps);
        let q = Ray::new(&s, Ctx::Base, prefix, period).unwrap();
        prop_assert_eq!(&q, &r);
        prop_assert_eq!(q.unroll(40), r.unroll(40));
        // printing and parsing round-trips
        prop_assert_eq!(&s.parse_ray(&s.ray_string(&r)).unwrap(), &r);
        // no proper divisor of the period repeats the word and returns to
        // the color the period starts in
        let k = r.prefix.len();
        for p in (1..r.period.len()).filter(|p| r.period.len() % p == 0) {
            let periodic = (0..r.period.len()).all(|i| r.period[i] == r.period[i % p]);
            prop_assert!(!periodic || r.ctx_at(&s, k + p) != r.ctx_at(&s, k), "period {:?} not primitive", r.period);
        }
    }
}
