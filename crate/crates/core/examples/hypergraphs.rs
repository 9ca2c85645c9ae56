//! Hypergraphs and π-isomorphisms.
//!
//! Builds two colored 3-hypergraphs, validates them, searches for
//! π-isomorphisms with and without boundary reorientations, composes two of
//! them and prints canonical forms.
//!
//! Run: `cargo run --example hypergraphs`

use hyperess::hypergraph::{compose_pi_isomorphisms, find_pi_isomorphisms};
use hyperess::hypergraph::{EdgeSpec, Hypergraph, HypergraphSpec};
use hyperess::perm::PermGroup;
use std::collections::BTreeMap;

fn triangle(names: [&str; 2], vs: [&str; 3]) -> Hypergraph {
    let e = |n: &str, b: [&str; 3]| EdgeSpec { name: n.into(), color: "k".into(), boundary: b.iter().map(|s| s.to_string()).collect() };
    Hypergraph::validate(HypergraphSpec {
        vertices: vs.iter().map(|s| s.to_string()).collect(),
        hyperedges: vec![e(names[0], [vs[0], vs[1], vs[2]]), e(names[1], [vs[0], vs[2], vs[1]])],
    })
    .expect("valid hypergraph")
}

fn main() {
    let a = triangle(["L", "R"], ["t", "b", "c"]);
    let b = triangle(["P", "Q"], ["x", "y", "z"]);
    println!("A: {} vertices, {} hyperedges; canonical form {}", a.nverts(), a.nedges(), a.canonical_string());
    println!("B canonical form {}", b.canonical_string());

    // A hyperedge whose boundary names an undeclared vertex is reported.
    let bad = HypergraphSpec {
        vertices: vec!["u".into()],
        hyperedges: vec![EdgeSpec { name: "e".into(), color: "k".into(), boundary: vec!["u".into(), "w".into()] }],
    };
    if let Err(d) = Hypergraph::validate(bad) {
        println!("invalid input diagnosed: {d}");
    }

    // Without reorientations only boundary-order preserving maps qualify.
    let strict = find_pi_isomorphisms(&a, &b, &BTreeMap::new());
    println!("isomorphisms with trivial π: {}", strict.len());
    // Allowing every reorientation of the 3-edges gives more of them.
    let all = BTreeMap::from([("k".to_string(), PermGroup::symmetric(3))]);
    let loose = find_pi_isomorphisms(&a, &b, &all);
    println!("isomorphisms with π in S3: {}", loose.len());
    for iso in loose.iter().take(2) {
        println!("  edges {:?}, π {:?}", iso.edge_map, iso.pi.iter().map(|(e, p)| (e, p.to_one_line())).collect::<Vec<_>>());
    }

    // Composition of π-isomorphisms is again one: back ∘ loose maps A → B → A.
    let back = find_pi_isomorphisms(&b, &a, &all);
    let comp = compose_pi_isomorphisms(&back[0], &loose[0]).expect("composable");
    println!("composite A → A is a π-isomorphism: {}", comp.check(&a, &a));
    println!("\n{}", a.to_dot("A"));
}
