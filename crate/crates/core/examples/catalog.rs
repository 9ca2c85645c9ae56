//! The built-in catalog: list the entries and write their files.
//!
//! Run: `cargo run --example catalog -- [out-dir]`

use hyperess::catalog;

fn main() {
    for name in catalog::list() {
        let e = catalog::entry(&name).unwrap();
        let tuples: Vec<&String> = e.tuples.iter().map(|(t, _)| t).collect();
        let diagrams: Vec<&String> = e.diagrams.iter().map(|(d, _)| d).collect();
        println!("{name:<12} {:?} tuples {tuples:?} diagrams {diagrams:?}", e.class);
    }
    if let Some(dir) = std::env::args().nth(1) {
        let dir = std::path::Path::new(&dir);
        std::fs::create_dir_all(dir).unwrap();
        for name in catalog::list() {
            let e = catalog::entry(&name).unwrap();
            std::fs::write(dir.join(format!("{name}.json")), e.system_json()).unwrap();
            for (t, v) in &e.tuples {
                std::fs::write(dir.join(format!("{name}.tuple.{t}.json")), serde_json::to_string_pretty(v).unwrap()).unwrap();
            }
            for (d, v) in &e.diagrams {
                std::fs::write(dir.join(format!("{name}.diagram.{d}.json")), serde_json::to_string_pretty(v).unwrap()).unwrap();
            }
        }
        println!("written to {}", dir.display());
    }
}
