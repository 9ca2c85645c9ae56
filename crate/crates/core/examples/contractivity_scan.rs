//! Contractivity scans: enumerate expansions, count parallel contractions
//! and decide whether the exceptions stay confined to small sizes.
//!
//! Run: `cargo run --release --example contractivity_scan`

use hyperess::catalog;
use hyperess::contract::{scan_contractivity, Parallelism, ScanOptions};
use hyperess::replacement::System;
use hyperess::selfsim::Tuple;
use std::collections::BTreeMap;

fn main() {
    for (system, tuple, max_leaves, target) in [
        ("sierpinski", "rho_phi", 11, 2),
        ("dendrite-3", "phi", 13, 2),
        ("houghton-3", "trivial", 13, 3),
        ("badshift", "trivial", 12, 2),
    ] {
        let e = catalog::entry(system).unwrap();
        let s = System::compile(e.system.clone()).unwrap();
        let t = if tuple == "trivial" { Tuple::trivial(&s) } else { Tuple::from_json(&s, &e.tuple(tuple).unwrap()).unwrap() };
        let r = scan_contractivity(&t, &ScanOptions { max_leaves, target, mode: Parallelism::Strict, with_complex: true });
        let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
        for x in r.exception_entries() {
            *sizes.entry(x.nleaves).or_default() += 1;
        }
        println!(
            "{system}/{tuple}: {} expansions in {} classes, exceptions by size {sizes:?}\n  {}; {} complex-bound contradictions",
            r.entries.len(),
            r.classes,
            r.verdict(),
            r.complex_contradictions
        );
    }
}
