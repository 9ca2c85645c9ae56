//! Replacement systems and their expansions.
//!
//! Compiles catalog systems, reports their classification, expands
//! hyperedges step by step and enumerates all expansions up to a leaf bound.
//!
//! Run: `cargo run --example expansions`

use hyperess::catalog;
use hyperess::replacement::System;

fn main() {
    for name in ["gasket", "sierpinski", "airplane", "houghton-3", "dendrite-3", "badshift"] {
        let s = System::compile(catalog::entry(name).unwrap().system).unwrap();
        let c = &s.class;
        println!(
            "{name:>11}: {} color(s), {:?}, trivial {:?}, isolated {:?}",
            s.ncolors(),
            c.class,
            c.trivial.iter().map(|&k| &s.colors[k as usize]).collect::<Vec<_>>(),
            c.isolated.iter().map(|&k| &s.colors[k as usize]).collect::<Vec<_>>()
        );
    }

    // Expand the gasket at L, then at L.2.
    let s = System::compile(catalog::entry("gasket").unwrap().system).unwrap();
    let mut x = s.base_expansion();
    for at in ["L", "L.2"] {
        x = s.expand_hyperedge(&x, &s.parse_addr(at).unwrap()).unwrap();
        let m = s.materialize(&x);
        println!(
            "after expanding {at}: {} leaves, {} vertices: {}",
            m.leaves.len(),
            m.vertices.len(),
            m.leaves.iter().map(|w| s.addr_string(w)).collect::<Vec<_>>().join(" ")
        );
    }
    println!("{}", s.expansion_hypergraph(&x).canonical_string());

    // Expansions are determined by their leaf sets; counting them by size.
    let all = s.enumerate_expansions(9, 0);
    let mut by_size = std::collections::BTreeMap::new();
    for e in &all {
        *by_size.entry(e.leaves.len()).or_insert(0) += 1;
    }
    println!("gasket expansions with at most 9 leaves by size: {by_size:?}");
    println!("\n{}", s.expansion_dot(&x));
}
