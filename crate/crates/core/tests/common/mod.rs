//! Independent oracles and random generators shared by the integration tests.
#![allow(dead_code)]

use hyperess::catalog;
use hyperess::replacement::{System, VName};
use hyperess::shiftlang::{Address, Ctx, Ray};
use rand::Rng;
use std::collections::{BTreeMap, BTreeSet};

pub fn sys(name: &str) -> System {
    System::compile(catalog::entry(name).unwrap().system).unwrap()
}

pub fn ray(s: &System, text: &str) -> Ray {
    s.parse_ray(text).unwrap()
}

/// A random eventually periodic address from the base, prefix length
/// `0..=max_pre`, period length `1..=max_per`.
pub fn random_ray<R: Rng>(s: &System, rng: &mut R, max_pre: usize, max_per: usize) -> Ray {
    loop {
        let pre_len = rng.gen_range(1..=max_pre + 1);
        let per_len = rng.gen_range(1..=max_per);
        let mut ctx = Ctx::Base;
        let mut word = vec![];
        for _ in 0..pre_len + per_len {
            let x = rng.gen_range(0..s.nletters(ctx)) as u16;
            word.push(x);
            ctx = Ctx::Color(s.letter_color(ctx, x));
        }
        let period = word.split_off(pre_len);
        if let Some(r) = Ray::new(s, Ctx::Base, word, period) {
            return r;
        }
    }
}

/// Vertex names on the boundary of the length-`n` prefix, computed by
/// walking the rules directly.
pub fn prefix_vertices(s: &System, r: &Ray, n: usize) -> BTreeSet<VName> {
    s.boundary_of(&Address(r.unroll(n))).into_iter().collect()
}

/// Whether all equal-length prefixes up to `depth` share a vertex.
pub fn brute_glued(s: &System, a: &Ray, b: &Ray, depth: usize) -> bool {
    (1..=depth).all(|n| !prefix_vertices(s, a, n).is_disjoint(&prefix_vertices(s, b, n)))
}

/// A depth that exceeds every cycle the joint run can go through.
pub fn oracle_depth(a: &Ray, b: &Ray, states: usize) -> usize {
    let l = lcm(a.period.len(), b.period.len());
    a.prefix.len().max(b.prefix.len()) + states * l + 2
}

pub fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    a / gcd(a, b) * b
}

/// Brute-force point type: `"isolated"` if some prefix has trivial color,
/// `"singular"` if some vertex lies on every prefix from `depth/2` to
/// `depth`, `"regular"` otherwise.
pub fn brute_point(s: &System, r: &Ray, depth: usize) -> &'static str {
    for n in 1..=depth {
        if s.is_trivial_color(s.color_of(&Address(r.unroll(n)))) {
            return "isolated";
        }
    }
    let mut common = prefix_vertices(s, r, depth / 2);
    for n in depth / 2..=depth {
        let here = prefix_vertices(s, r, n);
        common.retain(|v| here.contains(v));
    }
    if common.is_empty() { "regular" } else { "singular" }
}

/// Direct interpretation of a tuple document: acts on words of letter
/// names by unfolding the generator tables recursively, with no reduction,
/// caching or inverse bookkeeping beyond the definition.
pub struct TupleOracle {
    pub doc: serde_json::Value,
    pub sys: System,
}

impl TupleOracle {
    pub fn new(sys: &System, doc: serde_json::Value) -> TupleOracle {
        TupleOracle { doc, sys: sys.clone() }
    }

    fn gen(&self, color: &str, name: &str) -> serde_json::Value {
        self.doc["groups"][color]["generators"][name].clone()
    }

    /// Image of `word` (letter names read from `color`) under the single
    /// generator `name` (inverse when `inv`).
    fn act_gen(&self, color: &str, name: &str, inv: bool, word: &[String]) -> Vec<String> {
        let Some(x) = word.first() else { return vec![] };
        let g = self.gen(color, name);
        let image = |x: &str| g["perm"][x].as_str().unwrap_or(x).to_string();
        let (y, state_letter) = if inv {
            // the letter whose image is x
            let c = self.sys.color_id(color).unwrap();
            let n = self.sys.nletters(Ctx::Color(c));
            let pre = (0..n as u16)
                .map(|i| self.sys.letter_name(Ctx::Color(c), i).to_string())
                .find(|l| image(l) == *x)
                .unwrap();
            (pre.clone(), pre)
        } else {
            (image(x), x.clone())
        };
        let c = self.sys.color_id(color).unwrap();
        let li = self.sys.letter_index(Ctx::Color(c), &state_letter).unwrap();
        let child = self.sys.colors[self.sys.letter_color(Ctx::Color(c), li) as usize].clone();
        let state = g["states"][&state_letter].as_str().unwrap_or("").to_string();
        let state = if inv { invert_word(&state) } else { state };
        let mut out = vec![y];
        out.extend(self.act(&child, &state, &word[1..]));
        out
    }

    /// Image of `word` under the group word `w` ("a.b'" applies b⁻¹ first).
    pub fn act(&self, color: &str, w: &str, word: &[String]) -> Vec<String> {
        let mut cur = word.to_vec();
        for part in w.split('.').filter(|p| !p.is_empty()).collect::<Vec<_>>().into_iter().rev() {
            let (name, inv) = match part.strip_suffix('\'') {
                Some(n) => (n, true),
                None => (part, false),
            };
            cur = self.act_gen(color, name, inv, &cur);
        }
        cur
    }

    /// All words of exactly `n` letters from `color`.
    pub fn words(&self, color: &str, n: usize) -> Vec<Vec<String>> {
        if n == 0 {
            return vec![vec![]];
        }
        let c = self.sys.color_id(color).unwrap();
        let mut out = vec![];
        for i in 0..self.sys.nletters(Ctx::Color(c)) as u16 {
            let x = self.sys.letter_name(Ctx::Color(c), i).to_string();
            let child = self.sys.colors[self.sys.letter_color(Ctx::Color(c), i) as usize].clone();
            for mut rest in self.words(&child, n - 1) {
                rest.insert(0, x.clone());
                out.push(rest);
            }
        }
        out
    }

    /// Whether `w` fixes every word of length `n`.
    pub fn trivial_to_depth(&self, color: &str, w: &str, n: usize) -> bool {
        self.words(color, n).iter().all(|u| self.act(color, w, u) == *u)
    }
}

pub fn invert_word(w: &str) -> String {
    w.split('.')
        .filter(|p| !p.is_empty())
        .rev()
        .map(|p| match p.strip_suffix('\'') {
            Some(n) => n.to_string(),
            None => format!("{p}'"),
        })
        .collect::<Vec<_>>()
        .join(".")
}

/// A catalog tuple and diagram generators for random group elements.
pub fn diagram_setup(system: &str) -> (hyperess::selfsim::Tuple, Vec<hyperess::diagram::Diagram>) {
    use hyperess::diagram::Diagram;
    use hyperess::selfsim::Tuple;
    let e = catalog::entry(system).unwrap();
    let s = sys(system);
    let tname = if system == "gasket" { "rho_phi" } else { "grigorchuk" };
    let t = Tuple::from_json(&s, &e.tuple(tname).unwrap()).unwrap();
    let mut gens: Vec<Diagram> = e.diagrams.iter().map(|(_, d)| Diagram::from_json(&t, d).unwrap()).collect();
    if system == "dendrite-3" {
        // label diagrams: one red base leaf carries a Grigorchuk generator
        for leaf in ["1", "2", "3"] {
            for g in ["a", "b", "c", "d"] {
                let map: Vec<serde_json::Value> = ["1", "2", "3"]
                    .iter()
                    .map(|l| serde_json::json!({"from": l, "to": l, "label": if *l == leaf { g } else { "" }, "pi": [1, 2]}))
                    .collect();
                gens.push(Diagram::from_json(&t, &serde_json::json!({"map": map})).unwrap());
            }
        }
    }
    (t, gens)
}

pub fn random_element<R: Rng>(
    t: &hyperess::selfsim::Tuple,
    gens: &[hyperess::diagram::Diagram],
    rng: &mut R,
    len: usize,
) -> hyperess::diagram::Diagram {
    let mut d = hyperess::diagram::Diagram::identity(t, &t.system.base_expansion());
    for _ in 0..len {
        let g = &gens[rng.gen_range(0..gens.len())];
        let g = if rng.gen_bool(0.5) { g.invert(t) } else { g.clone() };
        d = d.compose(t, &g).unwrap();
    }
    d
}

/// Two addresses of one vertex seen from two different leaves of a random
/// expansion.
pub fn forced_glued<R: Rng>(s: &System, rng: &mut R) -> (Ray, Ray) {
    loop {
        let mut x = s.base_expansion();
        for _ in 0..rng.gen_range(0..5) {
            let leaves: Vec<&Address> = x.leaves.iter().collect();
            let w = leaves[rng.gen_range(0..leaves.len())].clone();
            x = s.expand_hyperedge(&x, &w).unwrap();
        }
        let mut at: BTreeMap<VName, Vec<(Address, usize)>> = BTreeMap::new();
        for w in &x.leaves {
            for (i, v) in s.boundary_of(w).into_iter().enumerate() {
                at.entry(v).or_default().push((w.clone(), i));
            }
        }
        let shared: Vec<&Vec<(Address, usize)>> =
            at.values().filter(|occ| occ.iter().map(|o| &o.0).collect::<BTreeSet<_>>().len() >= 2).collect();
        if shared.is_empty() {
            continue;
        }
        let occ = shared[rng.gen_range(0..shared.len())];
        let (a, i) = &occ[rng.gen_range(0..occ.len())];
        let others: Vec<&(Address, usize)> = occ.iter().filter(|o| o.0 != *a).collect();
        let (b, j) = others[rng.gen_range(0..others.len())];
        return (s.vertex_ray(a, *i).unwrap(), s.vertex_ray(b, *j).unwrap());
    }
}
