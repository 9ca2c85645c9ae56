//! Properties of π-isomorphisms and canonical forms on random small
//! hypergraphs, checked against exhaustive bijection enumeration.

use hyperess::hypergraph::{
    compose_pi_isomorphisms, find_pi_isomorphisms, EdgeSpec, Hypergraph, HypergraphSpec, PiIsomorphism, ShapeIso,
};
use hyperess::perm::{Perm, PermGroup};
use proptest::prelude::*;
use std::collections::{BTreeMap, BTreeSet};

/// Color `a` has order 2 and color `b` has order 3.
fn order(color: bool) -> usize {
    if color {
        3
    } else {
        2
    }
}

/// Raw random hypergraph: per edge a color flag and boundary vertex indices.
fn raw_graph() -> impl Strategy<Value = Vec<(bool, Vec<u32>)>> {
    proptest::collection::vec(
        any::<bool>().prop_flat_map(|c| (Just(c), proptest::collection::vec(0u32..5, order(c)))),
        1..=5,
    )
}

/// Builds a hypergraph, listing only used vertices, with vertex names
/// `{vp}{i}` and edge names `{ep}{k}`.
fn build(raw: &[(bool, Vec<u32>)], vp: &str, ep: &str) -> Hypergraph {
    let used: BTreeSet<u32> = raw.iter().flat_map(|(_, b)| b.iter().copied()).collect();
    Hypergraph::validate(HypergraphSpec {
        vertices: used.iter().map(|v| format!("{vp}{v}")).collect(),
        hyperedges: raw
            .iter()
            .enumerate()
            .map(|(k, (c, b))| EdgeSpec {
                name: format!("{ep}{k}"),
                color: if *c { "b" } else { "a" }.into(),
                boundary: b.iter().map(|v| format!("{vp}{v}")).collect(),
            })
            .collect(),
    })
    .unwrap()
}

/// A copy of `raw` with vertices renamed by `vperm` and edges listed in the
/// order `eperm`.
fn shuffled(raw: &[(bool, Vec<u32>)], vperm: &[u32], eperm: &[usize]) -> Vec<(bool, Vec<u32>)> {
    eperm.iter().map(|&k| (raw[k].0, raw[k].1.iter().map(|&v| vperm[v as usize]).collect())).collect()
}

fn relabeled() -> impl Strategy<Value = (Vec<(bool, Vec<u32>)>, Vec<(bool, Vec<u32>)>)> {
    raw_graph().prop_flat_map(|raw| {
        let n = raw.len();
        (
            Just(raw),
            Just((0u32..5).collect::<Vec<_>>()).prop_shuffle(),
            Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
        )
            .prop_map(|(raw, vp, ep)| {
                let copy = shuffled(&raw, &vp, &ep);
                (raw, copy)
            })
    })
}

fn symmetric_groups() -> BTreeMap<String, PermGroup> {
    BTreeMap::from([("a".to_string(), PermGroup::symmetric(2)), ("b".to_string(), PermGroup::symmetric(3))])
}

/// Every strict isomorphism `(vertex map, edge map)` by brute force over all
/// vertex and edge bijections.
fn brute_strict(a: &Hypergraph, b: &Hypergraph) -> BTreeSet<(Vec<u32>, Vec<u32>)> {
    let mut out = BTreeSet::new();
    if a.nverts() != b.nverts() || a.nedges() != b.nedges() {
        return out;
    }
    let vperms = Perm::all(a.nverts());
    let eperms = Perm::all(a.nedges());
    for ep in &eperms {
        let colors_ok = (0..a.nedges()).all(|e| a.edges()[e].color == b.edges()[ep.apply(e)].color);
        if !colors_ok {
            continue;
        }
        for vp in &vperms {
            let adjacent = (0..a.nedges()).all(|e| {
                let f = ep.apply(e);
                a.boundary(e).iter().zip(b.boundary(f)).all(|(&v, &w)| vp.apply(v as usize) == w as usize)
            });
            if adjacent {
                out.insert((
                    (0..a.nverts()).map(|v| vp.apply(v) as u32).collect(),
                    (0..a.nedges()).map(|e| ep.apply(e) as u32).collect(),
                ));
            }
        }
    }
    out
}

/// The adjacency equation `f_V(λ_e(i)) = λ_{f_E(e)}(π_e(i))` evaluated on
/// names, together with color preservation.
fn adjacency_holds(f: &PiIsomorphism, a: &Hypergraph, b: &Hypergraph) -> bool {
    a.edges().iter().all(|e| {
        let fe = &f.edge_map[&e.name];
        let img = b.edges().iter().find(|x| &x.name == fe).unwrap();
        let pi = &f.pi[&e.name];
        img.color == e.color
            && (0..e.boundary.len()).all(|i| f.vertex_map[&e.boundary[i]] == img.boundary[pi.apply(i)])
    })
}

fn identity(a: &Hypergraph) -> PiIsomorphism {
    let (shape, _) = a.shape();
    PiIsomorphism::from_shape_iso(&ShapeIso::identity(&shape), a, a)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn canonical_form_is_invariant_under_renaming((raw, copy) in relabeled()) {
        let a = build(&raw, "v", "e");
        let b = build(&copy, "w", "f");
        prop_assert_eq!(a.canonical_string(), b.canonical_string());
    }

    #[test]
    fn equal_canonical_forms_iff_strictly_isomorphic(r1 in raw_graph(), r2 in raw_graph()) {
        let a = build(&r1, "v", "e");
        let b = build(&r2, "w", "f");
        let iso = !brute_strict(&a, &b).is_empty();
        prop_assert_eq!(a.canonical_string() == b.canonical_string(), iso);
    }

    #[test]
    fn strict_search_matches_brute_force((raw, copy) in relabeled(), other in raw_graph()) {
        let a = build(&raw, "v", "e");
        for b in [build(&copy, "w", "f"), build(&other, "w", "f")] {
            let found: BTreeSet<(Vec<u32>, Vec<u32>)> = find_pi_isomorphisms(&a, &b, &BTreeMap::new())
                .iter()
                .map(|f| {
                    let s = f.to_shape_iso(&a, &b).unwrap();
                    prop_assert!(s.pi.iter().all(Perm::is_identity));
                    Ok((s.vmap, s.emap))
                })
                .collect::<Result<_, TestCaseError>>()?;
            prop_assert_eq!(found, brute_strict(&a, &b));
        }
    }

    #[test]
    fn every_found_isomorphism_satisfies_the_adjacency_equation((raw, copy) in relabeled()) {
        let a = build(&raw, "v", "e");
        let b = build(&copy, "w", "f");
        let all = find_pi_isomorphisms(&a, &b, &symmetric_groups());
        prop_assert!(!all.is_empty());
        for f in &all {
            prop_assert!(adjacency_holds(f, &a, &b));
            prop_assert!(f.check(&a, &b));
        }
    }

    #[test]
    fn composition_is_associative_with_identities(
        (raw, copy) in relabeled(),
        vp in Just((0u32..5).collect::<Vec<_>>()).prop_shuffle(),
        vq in Just((0u32..5).collect::<Vec<_>>()).prop_shuffle(),
        pick in any::<[prop::sample::Index; 3]>(),
    ) {
        let n = raw.len();
        let ident: Vec<usize> = (0..n).collect();
        let a = build(&raw, "v", "e");
        let b = build(&copy, "w", "f");
        let c = build(&shuffled(&copy, &vp, &ident), "x", "g");
        let d = build(&shuffled(&shuffled(&copy, &vp, &ident), &vq, &ident), "y", "h");
        let groups = symmetric_groups();
        let choose = |from: &Hypergraph, to: &Hypergraph, i: &prop::sample::Index| {
            let isos = find_pi_isomorphisms(from, to, &groups);
            isos[i.index(isos.len())].clone()
        };
        let f = choose(&a, &b, &pick[0]);
        let g = choose(&b, &c, &pick[1]);
        let h = choose(&c, &d, &pick[2]);

        let gf = compose_pi_isomorphisms(&g, &f).unwrap();
        prop_assert!(adjacency_holds(&gf, &a, &c));
        let left = compose_pi_isomorphisms(&h, &gf).unwrap();
        let right = compose_pi_isomorphisms(&compose_pi_isomorphisms(&h, &g).unwrap(), &f).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert!(adjacency_holds(&left, &a, &d));

        prop_assert_eq!(&compose_pi_isomorphisms(&f, &identity(&a)).unwrap(), &f);
        prop_assert_eq!(&compose_pi_isomorphisms(&identity(&b), &f).unwrap(), &f);
        // mismatched domains are refused
        prop_assert!(compose_pi_isomorphisms(&f, &f).is_err());
    }
}
