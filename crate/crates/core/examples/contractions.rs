//! Simple π-contractions, parallel families and the complex K_x.
//!
//! Run: `cargo run --example contractions`

use hyperess::catalog;
use hyperess::contract::{Contractor, Parallelism};
use hyperess::replacement::System;
use hyperess::selfsim::Tuple;

fn report(system: &str, tuple: &str, leaves: &[&str]) {
    let e = catalog::entry(system).unwrap();
    let s = System::compile(e.system.clone()).unwrap();
    let t = Tuple::from_json(&s, &e.tuple(tuple).unwrap()).unwrap();
    let x = s.parse_expansion_leaves(&leaves.iter().map(|l| l.to_string()).collect::<Vec<_>>()).unwrap();
    let c = Contractor::new(&t, leaves.len(), Parallelism::Strict);
    let a = c.analyze(&x).unwrap();
    let p = c.max_parallel(&a);
    println!("{system}/{tuple} on {} leaves: {} sites, max parallel {}", leaves.len(), a.sites.len(), p.size);
    let mut labels = vec![];
    for (i, st) in a.sites.iter().enumerate() {
        let l: Vec<String> = st.leaves.iter().map(|w| s.addr_string(w)).collect();
        println!("  {} site {i}: [{}] {}", if p.witness.contains(&i) { "*" } else { " " }, s.colors[st.color as usize], l.join(" "));
        labels.push(l.join(" "));
    }
    let k = c.build_complex(&a);
    match k.connectivity_bound(c.d) {
        Ok(b) => println!(
            "  K_x: {} vertices, {} edges; ground simplex of size {}, d = {}, connectivity bound {} (1-skeleton connected: {:?})",
            k.nvertices,
            k.edges.len(),
            b.m,
            b.d,
            b.bound,
            b.skeleton_connected
        ),
        Err(e) => println!("  K_x: {e}"),
    }
    if system == "dendrite-3" {
        println!("{}", k.to_dot(&labels));
    }
}

fn main() {
    report("airplane", "phi_inf", &["I.I", "I.F", "I.T", "I.B", "F.I", "F.F", "F.T", "F.B", "T", "B"]);
    report("sierpinski", "rho_phi", &["X.1", "X.2", "X.3.1", "X.3.2", "X.3.3"]);
    report("dendrite-3", "phi", &["1", "2", "3.1", "3.2", "3.3.1", "3.3.2", "3.3.3.1", "3.3.3.2", "3.3.3.3"]);
}
