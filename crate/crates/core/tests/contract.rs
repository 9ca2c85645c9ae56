mod common;

use common::sys;
use hyperess::catalog;
use hyperess::contract::{scan_contractivity, ComplexK, ContractError, Contractor, Parallelism, ScanOptions};
use hyperess::replacement::{Expansion, System, VName};
use hyperess::selfsim::Tuple;
use hyperess::shiftlang::{Address, Ctx};
use proptest::prelude::*;
use std::collections::{BTreeMap, BTreeSet};

fn tuple(system: &str, name: &str) -> Tuple {
    let s = sys(system);
    if name == "trivial" {
        Tuple::trivial(&s)
    } else {
        Tuple::from_json(&s, &catalog::entry(system).unwrap().tuple(name).unwrap()).unwrap()
    }
}

fn expansion(s: &System, leaves: &[&str]) -> Expansion {
    s.parse_expansion_leaves(&leaves.iter().map(|l| l.to_string()).collect::<Vec<_>>()).unwrap()
}

/// Vertices of an expansion with the colors of the leaves on them.
fn incidence(s: &System, x: &Expansion) -> BTreeMap<VName, Vec<(Address, u32)>> {
    let mut inc: BTreeMap<VName, Vec<(Address, u32)>> = BTreeMap::new();
    for w in &x.leaves {
        for v in s.boundary_of(w) {
            inc.entry(v).or_default().push((w.clone(), s.color_of(w)));
        }
    }
    inc
}

/// Tree vertices of a dendrite expansion carrying both colors.
fn mixed_vertices(s: &System, x: &Expansion) -> BTreeMap<VName, BTreeSet<Address>> {
    incidence(s, x)
        .into_iter()
        .filter(|(_, es)| {
            let colors: BTreeSet<u32> = es.iter().map(|e| e.1).collect();
            es.len() >= 2 && colors.len() == 2
        })
        .map(|(v, es)| (v, es.into_iter().map(|e| e.0).collect()))
        .collect()
}

fn internal_vertices(s: &System, x: &Expansion) -> usize {
    incidence(s, x).values().filter(|es| es.len() >= 2).count()
}

/// Largest family of pairwise non-adjacent vertices (adjacent = sharing a leaf).
fn brute_independent(stars: &[BTreeSet<Address>]) -> usize {
    let n = stars.len();
    (0u32..1 << n)
        .filter(|mask| {
            (0..n).all(|i| {
                (i + 1..n).all(|j| mask & (1 << i) == 0 || mask & (1 << j) == 0 || stars[i].is_disjoint(&stars[j]))
            })
        })
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Prefixes all of whose children are leaves, for non-trivial colors.
fn sibling_families(s: &System, x: &Expansion) -> BTreeSet<Vec<Address>> {
    let mut out = BTreeSet::new();
    for w in &x.leaves {
        if w.0.len() < 2 {
            continue;
        }
        let parent = Address(w.0[..w.0.len() - 1].to_vec());
        let c = s.color_of(&parent);
        if s.is_trivial_color(c) {
            continue;
        }
        let kids: Vec<Address> = (0..s.nletters(Ctx::Color(c)) as u16)
            .map(|k| {
                let mut v = parent.0.clone();
                v.push(k);
                Address(v)
            })
            .collect();
        if kids.iter().all(|k| x.leaves.contains(k)) {
            out.insert(kids);
        }
    }
    out
}

#[test]
fn airplane_sites_and_parallel_pair() {
    let t = tuple("airplane", "phi_inf");
    let s = &t.system;
    let c = Contractor::new(&t, 10, Parallelism::Strict);
    let x = expansion(s, &["I.I", "I.F", "I.T", "I.B", "F.I", "F.F", "F.T", "F.B", "T", "B"]);
    let a = c.analyze(&x).unwrap();
    let leafsets: BTreeSet<Vec<String>> =
        a.sites.iter().map(|st| st.leaves.iter().map(|w| s.addr_string(w)).collect()).collect();
    // the three red 2-cycles of degree 2 in the cycle tree; no red contraction exists
    let expected: BTreeSet<Vec<String>> = [
        vec!["I.B", "I.F", "I.I", "I.T"],
        vec!["B", "F.I", "I.I", "T"],
        vec!["F.B", "F.F", "F.I", "F.T"],
    ]
    .iter()
    .map(|v| {
        let mut v: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        v.sort_by_key(|w| s.parse_addr(w).unwrap());
        v
    })
    .collect();
    assert_eq!(leafsets, expected);
    let p = c.max_parallel(&a);
    assert_eq!(p.size, 2);
    let k = c.build_complex(&a);
    assert_eq!(k.nvertices, 3);
    assert_eq!(k.edges.len(), 1);
    let conn = k.connectivity_bound(c.d).unwrap();
    assert_eq!(c.d, 4);
    assert_eq!(conn.bound, -1);
    assert_eq!(conn.skeleton_connected, None);
    assert!(!k.skeleton_connected());
}

#[test]
fn sierpinski_chain_has_unique_site() {
    let t = tuple("sierpinski", "rho_phi");
    let s = &t.system;
    let c = Contractor::new(&t, 11, Parallelism::Strict);
    let mut leaves = vec!["X.1".to_string(), "X.2".to_string()];
    let mut tail = "X.3".to_string();
    for _ in 0..4 {
        leaves.push(format!("{tail}.1"));
        leaves.push(format!("{tail}.2"));
        tail = format!("{tail}.3");
        let mut all = leaves.clone();
        all.push(tail.clone());
        let x = s.parse_expansion_leaves(&all).unwrap();
        let a = c.analyze(&x).unwrap();
        assert_eq!(a.sites.len(), 1, "{all:?}");
        assert_eq!(c.max_parallel(&a).size, 1);
    }
}

#[test]
fn dendrite_sites_are_centered_at_mixed_vertices() {
    let t = tuple("dendrite-3", "phi");
    let s = &t.system;
    let (c, xs) = Contractor::with_expansions(&t, 11, Parallelism::Strict);
    let mut literal_mismatch = 0;
    for x in &xs {
        let a = c.analyze(x).unwrap();
        let mixed = mixed_vertices(s, x);
        // every site is the star of a distinct mixed vertex
        let centers: BTreeSet<&VName> = a
            .sites
            .iter()
            .map(|st| {
                let set: BTreeSet<Address> = st.leaves.iter().cloned().collect();
                mixed.iter().find(|(_, star)| **star == set).map(|(v, _)| v).expect("site is a vertex star")
            })
            .collect();
        assert_eq!(centers.len(), a.sites.len());
        assert_eq!(a.sites.len(), mixed.len());
        if a.sites.len() != internal_vertices(s, x) {
            literal_mismatch += 1;
        }
        let stars: Vec<BTreeSet<Address>> = mixed.values().cloned().collect();
        assert_eq!(c.max_parallel(&a).size, brute_independent(&stars), "{:?}", x.leaves);
    }
    // the base star and trees with a vertex whose edges are all blue
    assert!(literal_mismatch > 0);
}

#[test]
fn sites_sharing_a_leaf_are_not_parallel() {
    let t = tuple("dendrite-3", "phi");
    let s = &t.system;
    let c = Contractor::new(&t, 9, Parallelism::Strict);
    let x = expansion(s, &["1.1", "1.2", "1.3", "2", "3"]);
    let a = c.analyze(&x).unwrap();
    assert_eq!(a.sites.len(), 2);
    assert!(!a.sites[0].leaves.iter().collect::<BTreeSet<_>>().is_disjoint(&a.sites[1].leaves.iter().collect()));
    assert!(!c.are_parallel(&a, 0, 1));
    assert!(!c.are_parallel(&a, 0, 0));
}

#[test]
fn trivial_tuples_give_sibling_families() {
    for (name, exact, max) in [
        ("sierpinski", true, 9),
        ("gasket", true, 8),
        ("dendrite-3", false, 9),
        ("airplane", false, 10),
        ("houghton-3", false, 7),
    ] {
        let t = tuple(name, "trivial");
        let s = &t.system;
        let (c, xs) = Contractor::with_expansions(&t, max, Parallelism::Strict);
        for x in &xs {
            let a = c.analyze(x).unwrap();
            let sites: BTreeSet<Vec<Address>> = a.sites.iter().map(|st| st.leaves.clone()).collect();
            let fams = sibling_families(s, x);
            assert!(fams.is_subset(&sites), "{name} {:?}", x.leaves);
            if exact {
                assert_eq!(fams, sites, "{name} {:?}", x.leaves);
            }
        }
    }
}

#[test]
fn packing_matches_exhaustive_search() {
    for (name, tup, max) in [
        ("gasket", "rho_phi", 8),
        ("houghton-3", "trivial", 8),
        ("matui-k2", "trivial", 9),
        ("dendrite-3", "grigorchuk", 9),
    ] {
        let t = tuple(name, tup);
        let (c, xs) = Contractor::with_expansions(&t, max, Parallelism::Strict);
        for x in xs.iter().step_by(3) {
            let a = c.analyze(x).unwrap();
            let n = a.sites.len();
            if n > 14 {
                continue;
            }
            let par: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| c.are_parallel(&a, i, j)).collect()).collect();
            let brute = (0u32..1 << n)
                .filter(|m| (0..n).all(|i| (0..n).all(|j| i == j || m & (1 << i) == 0 || m & (1 << j) == 0 || par[i][j])))
                .map(|m| m.count_ones() as usize)
                .max()
                .unwrap();
            let p = c.max_parallel(&a);
            assert_eq!(p.size, brute, "{name} {:?}", x.leaves);
            assert!(p.greedy <= p.size && p.size <= n);
            for (i, &u) in p.witness.iter().enumerate() {
                for &v in &p.witness[i + 1..] {
                    assert!(par[u][v]);
                }
            }
            let pairwise_disjoint =
                (0..n).all(|i| (0..n).all(|j| i == j || a.sites[i].leaves.iter().all(|w| !a.sites[j].leaves.contains(w))));
            if pairwise_disjoint && (0..n).all(|i| (0..n).all(|j| i == j || par[i][j])) {
                assert_eq!(p.size, n);
            }
        }
    }
}

#[test]
fn every_site_contracts_to_an_object() {
    for (name, tup, max) in [("gasket", "rho_phi", 8), ("airplane", "phi_inf", 10), ("dendrite-3", "grigorchuk", 9)] {
        let t = tuple(name, tup);
        let (c, xs) = Contractor::with_expansions(&t, max, Parallelism::Strict);
        for x in &xs {
            let a = c.analyze(x).unwrap();
            for i in 0..a.sites.len() {
                assert!(c.is_object(&c.contract(&a, &[i])));
            }
        }
    }
}

#[test]
fn strict_edges_refine_pairwise_edges() {
    let t = tuple("airplane", "phi_inf");
    let (strict, xs) = Contractor::with_expansions(&t, 12, Parallelism::Strict);
    let pairwise = Contractor::new(&t, 12, Parallelism::Pairwise);
    for x in &xs {
        let (a, b) = (strict.analyze(x).unwrap(), pairwise.analyze(x).unwrap());
        assert_eq!(a.sites, b.sites);
        let (ks, kp) = (strict.build_complex(&a), pairwise.build_complex(&b));
        assert!(ks.edges.iter().all(|e| kp.edges.contains(e)));
        assert_eq!(ks.edges.len() + ks.rejected_pairs, kp.edges.len());
    }
}

#[test]
fn scan_exceptions_grow_with_target() {
    let t = tuple("gasket", "rho_phi");
    let mut prev: Option<BTreeSet<Vec<String>>> = None;
    for m in 1..=4 {
        let r = scan_contractivity(&t, &ScanOptions { max_leaves: 8, target: m, mode: Parallelism::Strict, with_complex: false });
        let ex: BTreeSet<Vec<String>> = r.exception_entries().map(|e| e.leaves.clone()).collect();
        if let Some(p) = &prev {
            assert!(p.is_subset(&ex));
        }
        prev = Some(ex);
    }
}

#[test]
fn scan_entries_agree_with_direct_analysis() {
    let t = tuple("dendrite-3", "phi");
    let r = scan_contractivity(&t, &ScanOptions { max_leaves: 9, target: 2, mode: Parallelism::Strict, with_complex: true });
    let (c, xs) = Contractor::with_expansions(&t, 9, Parallelism::Strict);
    assert_eq!(r.entries.len(), xs.len());
    for (e, x) in r.entries.iter().zip(&xs) {
        let a = c.analyze(x).unwrap();
        assert_eq!(e.nsites, a.sites.len());
        assert_eq!(e.max_parallel, c.max_parallel(&a).size);
        assert!(!e.complex.as_ref().unwrap().contradiction);
    }
    assert!(r.consistent);
}

#[test]
fn matui_bound_on_small_expansions() {
    let t = tuple("matui-k2", "trivial");
    let r = scan_contractivity(&t, &ScanOptions { max_leaves: 11, target: 1, mode: Parallelism::Strict, with_complex: false });
    for e in &r.entries {
        assert!(e.nleaves <= 4 + 3 * e.max_parallel, "{:?}", e.leaves);
    }
}

#[test]
fn complex_edge_cases() {
    let single = ComplexK { nvertices: 1, adj: vec![vec![false]], edges: vec![], rejected_pairs: 0, certified_depth: None };
    let g = single.groundedness(3).unwrap();
    assert_eq!(g.m, 1);
    assert_eq!(single.connectivity_bound(3).unwrap().bound, -1);
    let empty = ComplexK { nvertices: 0, adj: vec![], edges: vec![], rejected_pairs: 0, certified_depth: None };
    assert_eq!(empty.connectivity_bound(3), Err(ContractError::EmptyComplex));
}

#[test]
fn dendrite_caterpillar_complex() {
    // path of 9 internal vertices: the spine 3.3.….3 grown from the base
    let t = tuple("dendrite-3", "phi");
    let s = &t.system;
    let c = Contractor::new(&t, 18, Parallelism::Strict);
    let mut leaves = vec!["1".to_string(), "2".to_string()];
    let mut spine = "3".to_string();
    for _ in 0..8 {
        leaves.push(format!("{spine}.1"));
        leaves.push(format!("{spine}.2"));
        spine = format!("{spine}.3");
    }
    leaves.push(spine);
    let x = s.parse_expansion_leaves(&leaves).unwrap();
    assert_eq!(internal_vertices(s, &x), 9);
    let a = c.analyze(&x).unwrap();
    let p = c.max_parallel(&a);
    let stars: Vec<BTreeSet<Address>> = mixed_vertices(s, &x).values().cloned().collect();
    assert_eq!(p.size, brute_independent(&stars));
    let k = c.build_complex(&a);
    let conn = k.connectivity_bound(c.d).unwrap();
    assert_eq!((p.size, conn.m, c.d, conn.bound), (5, 5, 3, 0));
    assert_eq!(conn.skeleton_connected, Some(true));
    // the flag complex: the witness is a simplex
    for (i, &u) in p.witness.iter().enumerate() {
        for &v in &p.witness[i + 1..] {
            assert!(k.adj[u][v]);
        }
    }
}

fn random_complex(n: usize, bits: &[bool]) -> ComplexK {
    let mut adj = vec![vec![false; n]; n];
    let mut edges = vec![];
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            if bits[k % bits.len()] {
                adj[i][j] = true;
                adj[j][i] = true;
                edges.push((i, j));
            }
            k += 1;
        }
    }
    ComplexK { nvertices: n, adj, edges, rejected_pairs: 0, certified_depth: None }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn grounded_simplices_are_ground_cliques(n in 1usize..9, bits in proptest::collection::vec(any::<bool>(), 1..40), d in 1usize..4) {
        let k = random_complex(n, &bits);
        let g = k.groundedness(d).unwrap();
        prop_assert!(g.m >= 1);
        prop_assert!(k.is_ground(&g.simplex, d));
        for (i, &u) in g.simplex.iter().enumerate() {
            for &v in &g.simplex[i + 1..] {
                prop_assert!(k.adj[u][v]);
            }
        }
        // every maximal clique is pairwise adjacent and maximal
        for c in k.maximal_cliques() {
            for v in 0..n {
                if !c.contains(&v) {
                    prop_assert!(c.iter().any(|&u| !k.adj[u][v]));
                }
            }
        }
        let conn = k.connectivity_bound(d).unwrap();
        prop_assert_eq!(conn.bound, (g.m / d) as i64 - 1);
    }
}
