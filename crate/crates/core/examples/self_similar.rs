//! Self-similar tuples: compatibility with the gluing relation, boundary
//! groups and the word problem.
//!
//! Run: `cargo run --example self_similar`

use hyperess::catalog;
use hyperess::replacement::System;
use hyperess::selfsim::{Triviality, Tuple};

fn tuple(system: &str, name: &str) -> Tuple {
    let e = catalog::entry(system).unwrap();
    let s = System::compile(e.system.clone()).unwrap();
    Tuple::from_json(&s, &e.tuple(name).unwrap()).unwrap()
}

fn main() {
    for (sys, name) in [("gasket", "rho_phi"), ("airplane", "phi_inf"), ("dendrite-3", "grigorchuk")] {
        let t = tuple(sys, name);
        let rep = t.check_compatibility(t.depth);
        println!("{sys}/{name}: compatible {} (exact {})", rep.compatible(), rep.exact());
        for c in 0..t.system.ncolors() as u32 {
            let g = t.boundary_perm_group(c, t.depth);
            println!("  boundary group of {}: order {}", t.system.colors[c as usize], g.group.order());
        }
    }

    // The Grigorchuk group acting on the red cells of the dendrite.
    let t = tuple("dendrite-3", "grigorchuk");
    let red = t.system.color_id("red").unwrap();
    for w in ["a.a", "b.c.d", "a.d.a.d", "a.d.a.d.a.d.a.d", "a.b.a.b.a.b.a.b", "a.c.a.c.a.c.a.c.a.c.a.c.a.c.a.c"] {
        let g = t.parse_word(red, w).unwrap();
        let verdict = match t.is_trivial(&g) {
            Triviality::Yes => "trivial".to_string(),
            Triviality::No(u) => format!("nontrivial, moves {}", t.system.word_string(hyperess::shiftlang::Ctx::Color(red), &u)),
            Triviality::Undetermined(b) => format!("undetermined within {b} states"),
        };
        println!("{w}: {verdict}");
    }
    let b = t.parse_word(red, "b").unwrap();
    let r = t.system.parse_ray_from(hyperess::shiftlang::Ctx::Color(red), "2.3.(2)").unwrap();
    println!("b · 2.3.(2) = {}", t.system.ray_string(&t.act_ray(&b, &r).unwrap()));
}
