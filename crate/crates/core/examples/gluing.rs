//! The gluing relation: automaton, decisions and point classification.
//!
//! Run: `cargo run --example gluing`

use hyperess::catalog;
use hyperess::replacement::System;

fn main() {
    let s = System::compile(catalog::entry("sierpinski").unwrap().system).unwrap();
    let a = s.gluing_automaton().unwrap();
    println!("Sierpinski gluing automaton: {} live states", a.nstates());
    for k in 0..a.nstates() {
        println!("  {}", a.state_label(&s, k));
    }
    for (x, y) in [("X.1.(2)", "X.2.(1)"), ("X.1.(3)", "X.3.(1)"), ("X.1.(1)", "X.3.(3)"), ("X.(1.2)", "X.(2.1)")] {
        let glued = a.decide(&s.parse_ray(x).unwrap(), &s.parse_ray(y).unwrap());
        println!("{x} ~ {y}: {glued}");
    }
    for p in ["X.1.(2)", "X.(1.2)", "X.(1)"] {
        println!("{p}: {:?}", s.classify_point(&s.parse_ray(p).unwrap()));
    }
    let h = System::compile(catalog::entry("houghton-3").unwrap().system).unwrap();
    println!("houghton-3 s1.b.(t): {:?}", h.classify_point(&h.parse_ray("s1.b.(t)").unwrap()));
    println!("\n{}", a.to_dot(&s));
}
