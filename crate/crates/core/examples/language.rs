//! The symbol space: addresses, the language and the color graph.
//!
//! Run: `cargo run --example language`

use hyperess::catalog;
use hyperess::replacement::System;

fn main() {
    let s = System::compile(catalog::entry("airplane").unwrap().system).unwrap();
    for w in ["I.B.M", "I.B.F", "T.0.M.I", "B.B"] {
        match s.language_check(w).unwrap() {
            None => println!("{w}: in the language"),
            Some(p) => println!("{w}: not in the language (fails at letter {p})"),
        }
    }
    println!("words by length: {:?}", s.language_counts(8));

    // Eventually periodic addresses are normalized: the period is rotated
    // into the shortest form.
    for r in ["I.(I)", "I.I.(I)", "T.(0.1)", "T.0.(1.0)"] {
        let ray = s.parse_ray(r).unwrap();
        println!("{r} normalizes to {}", s.ray_string(&ray));
    }

    let g = s.color_graph();
    println!("\n{}", g.to_dot());
}
