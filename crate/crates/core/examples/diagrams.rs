//! Diagrams: the group operations of an ESS group.
//!
//! Loads the two gasket generators, composes, inverts, compares and reduces
//! them, and follows points of the limit space through them.
//!
//! Run: `cargo run --example diagrams`

use hyperess::catalog;
use hyperess::diagram::Diagram;
use hyperess::replacement::System;
use hyperess::selfsim::Tuple;

fn show(t: &Tuple, name: &str, d: &Diagram) {
    println!("{name}:");
    for m in d.to_json(t, "gasket", "gasket/rho_phi")["map"].as_array().unwrap() {
        println!("  {} -> {} [{}] π={}", m["from"].as_str().unwrap(), m["to"].as_str().unwrap(), m["label"].as_str().unwrap(), m["pi"]);
    }
}

fn main() {
    let e = catalog::entry("gasket").unwrap();
    let s = System::compile(e.system.clone()).unwrap();
    let t = Tuple::from_json(&s, &e.tuple("rho_phi").unwrap()).unwrap();
    let r = Diagram::from_json(&t, &e.diagram("r").unwrap()).unwrap();
    let a = Diagram::from_json(&t, &e.diagram("a").unwrap()).unwrap();
    r.validate(&t).unwrap();
    a.validate(&t).unwrap();
    show(&t, "r", &r);
    show(&t, "a", &a);

    let ra = r.compose(&t, &a).unwrap();
    show(&t, "r∘a (reduced)", &ra.minimize(&t));
    let id = Diagram::identity(&t, &s.base_expansion());
    println!("r∘r⁻¹ = id: {}", r.compose(&t, &r.invert(&t)).unwrap().equal(&t, &id).unwrap());
    println!("r∘a = a∘r: {}", ra.equal(&t, &a.compose(&t, &r).unwrap()).unwrap());

    // Order of r: smallest n with rⁿ = id.
    let mut p = r.clone();
    let mut n = 1;
    while !p.equal(&t, &id).unwrap() && n < 64 {
        p = p.compose(&t, &r).unwrap();
        n += 1;
    }
    println!("order of r: {n}");

    for x in ["L.(1)", "R.(2.3)", "L.3.(1.2)"] {
        let alpha = s.parse_ray(x).unwrap();
        println!("r({x}) = {}, a({x}) = {}", s.ray_string(&r.apply(&t, &alpha).unwrap()), s.ray_string(&a.apply(&t, &alpha).unwrap()));
    }
}
