//! Built-in replacement systems, self-similar tuples and diagrams.

use crate::hypergraph::{EdgeSpec, HypergraphSpec};
use crate::replacement::{ExpandingClass, RuleSpec, SystemSpec};
use indexmap::IndexMap;
use serde_json::{json, Value};

/// A named system with its tuples and diagrams (as JSON documents).
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub system: SystemSpec,
    pub tuples: Vec<(String, Value)>,
    pub diagrams: Vec<(String, Value)>,
    pub class: ExpandingClass,
    pub notes: String,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),
    #[error("catalog entry `{entry}` has no {kind} named `{name}`")]
    UnknownPart { entry: String, kind: &'static str, name: String },
}

pub fn list() -> Vec<String> {
    let mut v = vec!["airplane".to_string()];
    v.extend((2..=5).map(|n| format!("houghton-{n}")));
    v.push("sierpinski".into());
    v.push("gasket".into());
    v.extend((3..=5).map(|n| format!("dendrite-{n}")));
    v.extend((2..=3).map(|n| format!("fullshift-{n}")));
    v.push("badshift".into());
    v.push("matui-k2".into());
    v
}

pub fn entry(name: &str) -> Result<CatalogEntry, CatalogError> {
    let unknown = || CatalogError::UnknownEntry(name.to_string());
    let num = |prefix: &str| name.strip_prefix(prefix).and_then(|s| s.parse::<usize>().ok());
    match name {
        "airplane" => Ok(airplane()),
        "sierpinski" => Ok(sierpinski()),
        "gasket" => Ok(gasket()),
        "badshift" => Ok(badshift()),
        "matui-k2" => Ok(matui_k2()),
        _ => {
            if let Some(n) = num("houghton-").filter(|n| (2..=5).contains(n)) {
                Ok(houghton(n))
            } else if let Some(n) = num("dendrite-").filter(|n| (3..=5).contains(n)) {
                Ok(dendrite(n))
            } else if let Some(n) = num("fullshift-").filter(|n| (2..=3).contains(n)) {
                Ok(fullshift(n))
            } else {
                Err(unknown())
            }
        }
    }
}

impl CatalogEntry {
    pub fn system_json(&self) -> String {
        serde_json::to_string_pretty(&self.system).unwrap()
    }

    /// Tuple document by name; `trivial` is always available.
    pub fn tuple(&self, name: &str) -> Result<Value, CatalogError> {
        if name == "trivial" {
            return Ok(json!({"groups": {}}));
        }
        self.tuples.iter().find(|(n, _)| n == name).map(|(_, v)| v.clone()).ok_or(CatalogError::UnknownPart {
            entry: self.name.clone(),
            kind: "tuple",
            name: name.into(),
        })
    }

    pub fn diagram(&self, name: &str) -> Result<Value, CatalogError> {
        self.diagrams.iter().find(|(n, _)| n == name).map(|(_, v)| v.clone()).ok_or(CatalogError::UnknownPart {
            entry: self.name.clone(),
            kind: "diagram",
            name: name.into(),
        })
    }
}

fn edge(name: &str, color: &str, bnd: &[&str]) -> EdgeSpec {
    EdgeSpec { name: name.into(), color: color.into(), boundary: bnd.iter().map(|s| s.to_string()).collect() }
}

fn graph(vertices: &[&str], edges: Vec<EdgeSpec>) -> HypergraphSpec {
    HypergraphSpec { vertices: vertices.iter().map(|s| s.to_string()).collect(), hyperedges: edges }
}

fn owned_graph(vertices: Vec<String>, edges: Vec<EdgeSpec>) -> HypergraphSpec {
    HypergraphSpec { vertices, hyperedges: edges }
}

fn rule(g: HypergraphSpec, boundary: &[&str]) -> RuleSpec {
    RuleSpec { graph: g, boundary: boundary.iter().map(|s| s.to_string()).collect() }
}

fn system(colors: &[&str], base: HypergraphSpec, rules: Vec<(&str, RuleSpec)>) -> SystemSpec {
    SystemSpec {
        colors: colors.iter().map(|s| s.to_string()).collect(),
        base,
        rules: rules.into_iter().map(|(c, r)| (c.to_string(), r)).collect::<IndexMap<_, _>>(),
    }
}

/// Airplane.  Its single blue base edge is stored already expanded once, so
/// that addresses begin with the letters `I`, `F`, `T`, `B` of the blue rule.
fn airplane() -> CatalogEntry {
    let blue_rule = || {
        graph(
            &["l", "cl", "cr", "r"],
            vec![
                edge("I", "blue", &["cl", "l"]),
                edge("F", "blue", &["cr", "r"]),
                edge("T", "red", &["cr", "cl"]),
                edge("B", "red", &["cl", "cr"]),
            ],
        )
    };
    let red_rule = graph(
        &["l", "c", "r", "ct"],
        vec![edge("0", "red", &["l", "c"]), edge("1", "red", &["c", "r"]), edge("M", "blue", &["c", "ct"])],
    );
    let sys = system(
        &["blue", "red"],
        blue_rule(),
        vec![("blue", rule(blue_rule(), &["l", "r"])), ("red", rule(red_rule, &["l", "r"]))],
    );
    let phi = json!({"groups": {"blue": {"generators": {"phi_inf": {
        "perm": {"I": "F", "F": "I", "T": "B", "B": "T"},
        "states": {}
    }}}}});
    CatalogEntry {
        name: "airplane".into(),
        system: sys,
        tuples: vec![("phi_inf".into(), phi)],
        diagrams: vec![],
        class: ExpandingClass::Expanding,
        notes: "Airplane system (blue/red). The base is the blue rule graph, i.e. the single blue base \
                edge expanded once, so words read I.B.M etc. Tuple phi_inf swaps I<->F and T<->B with trivial states."
            .into(),
    }
}

fn houghton(n: usize) -> CatalogEntry {
    let colors: Vec<String> = std::iter::once("black".to_string()).chain((1..=n).map(|i| format!("c{i}"))).collect();
    let mut vertices = vec![];
    let mut edges = vec![];
    for i in 1..=n {
        vertices.push(format!("in{i}"));
        vertices.push(format!("out{i}"));
        edges.push(EdgeSpec {
            name: format!("s{i}"),
            color: format!("c{i}"),
            boundary: vec![format!("in{i}"), format!("out{i}")],
        });
    }
    let mut rules = IndexMap::new();
    rules.insert(
        "black".to_string(),
        rule(graph(&["iota", "tau"], vec![edge("t", "black", &["iota", "tau"])]), &["iota", "tau"]),
    );
    for i in 1..=n {
        let c = format!("c{i}");
        rules.insert(
            c.clone(),
            rule(
                graph(&["l1", "m1", "m2", "l2"], vec![edge("b", "black", &["l1", "m1"]), edge("t", &c, &["m2", "l2"])]),
                &["l1", "l2"],
            ),
        );
    }
    CatalogEntry {
        name: format!("houghton-{n}"),
        system: SystemSpec { colors, base: owned_graph(vertices, edges), rules },
        tuples: vec![],
        diagrams: vec![],
        class: ExpandingClass::AlmostExpanding,
        notes: format!("Houghton system with {n} rays; black is trivial and every color is isolated."),
    }
}

fn triangle_rule() -> RuleSpec {
    rule(
        graph(
            &["p1", "p2", "p3", "x", "y", "z"],
            vec![
                edge("1", "k", &["p1", "z", "y"]),
                edge("2", "k", &["z", "p2", "x"]),
                edge("3", "k", &["y", "x", "p3"]),
            ],
        ),
        &["p1", "p2", "p3"],
    )
}

fn rho_phi_tuple() -> Value {
    json!({"groups": {"k": {"generators": {
        "rho": {"perm": {"1": "2", "2": "3", "3": "1"}, "states": {"1": "rho", "2": "rho", "3": "rho"}},
        "phi": {"perm": {"1": "2", "2": "1", "3": "3"}, "states": {"1": "phi", "2": "phi", "3": "phi"}}
    }}}})
}

fn sierpinski() -> CatalogEntry {
    let base = graph(&["l", "r", "t"], vec![edge("X", "k", &["l", "r", "t"])]);
    CatalogEntry {
        name: "sierpinski".into(),
        system: system(&["k"], base, vec![("k", triangle_rule())]),
        tuples: vec![("rho_phi".into(), rho_phi_tuple())],
        diagrams: vec![],
        class: ExpandingClass::Expanding,
        notes: "Sierpinski triangle: base X=(l,r,t); rule 1=(p1,z,y), 2=(z,p2,x), 3=(y,x,p3). \
                Tuple <rho, phi>: rotation and reflection."
            .into(),
    }
}

fn gasket() -> CatalogEntry {
    let base = graph(&["t", "c", "b"], vec![edge("L", "k", &["t", "b", "c"]), edge("R", "k", &["t", "c", "b"])]);
    let r = json!({"system": "gasket", "tuple": "gasket/rho_phi", "map": [
        {"from": "L", "to": "R.3", "label": "rho.rho", "pi": [3, 1, 2]},
        {"from": "R.1", "to": "L", "label": "rho", "pi": [2, 3, 1]},
        {"from": "R.2", "to": "R.2", "label": "rho", "pi": [2, 3, 1]},
        {"from": "R.3", "to": "R.1", "label": "", "pi": [1, 2, 3]}
    ]});
    let a = json!({"system": "gasket", "tuple": "gasket/rho_phi", "map": [
        {"from": "L", "to": "R.2", "label": "phi.rho", "pi": [1, 3, 2]},
        {"from": "R.1", "to": "R.1", "label": "phi", "pi": [2, 1, 3]},
        {"from": "R.2", "to": "L", "label": "phi.rho", "pi": [1, 3, 2]},
        {"from": "R.3", "to": "R.3", "label": "phi.rho", "pi": [1, 3, 2]}
    ]});
    CatalogEntry {
        name: "gasket".into(),
        system: system(&["k"], base, vec![("k", triangle_rule())]),
        tuples: vec![("rho_phi".into(), rho_phi_tuple())],
        diagrams: vec![("r".into(), r), ("a".into(), a)],
        class: ExpandingClass::Expanding,
        notes: "Apollonian gasket: base L=(t,b,c), R=(t,c,b) with the triangle rule; diagrams r and a generate \
                the homeomorphism group together with <rho, phi>."
            .into(),
    }
}

fn dendrite(n: usize) -> CatalogEntry {
    let names: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let mut vertices = vec!["center".to_string()];
    let mut base_edges = vec![];
    for i in 1..=n {
        vertices.push(format!("leaf{i}"));
        base_edges.push(EdgeSpec { name: names[i - 1].clone(), color: "red".into(), boundary: vec!["center".into(), format!("leaf{i}")] });
    }
    let rule_graph = |last: &str| {
        let mut vs = vec!["p1".to_string(), "p2".to_string(), "c".to_string()];
        let mut es = vec![EdgeSpec { name: "1".into(), color: "blue".into(), boundary: vec!["c".into(), "p1".into()] }];
        for i in 2..n {
            vs.push(format!("v{i}"));
            es.push(EdgeSpec { name: i.to_string(), color: "red".into(), boundary: vec!["c".into(), format!("v{i}")] });
        }
        es.push(EdgeSpec { name: n.to_string(), color: last.into(), boundary: vec!["c".into(), "p2".into()] });
        RuleSpec { graph: owned_graph(vs, es), boundary: vec!["p1".into(), "p2".into()] }
    };
    let mut rules = IndexMap::new();
    rules.insert("blue".to_string(), rule_graph("blue"));
    rules.insert("red".to_string(), rule_graph("red"));
    let phi = json!({"groups": {"blue": {"generators": {"phi": {
        "perm": {"1": n.to_string(), n.to_string(): "1"},
        "states": {}
    }}}}});
    let mut tuples = vec![("phi".to_string(), phi)];
    let mut diagrams = vec![];
    if n == 3 {
        let grig = json!({"groups": {
            "blue": {"generators": {"phi": {"perm": {"1": "3", "3": "1"}, "states": {}}}},
            "red": {"generators": {
                "a": {"perm": {"2": "3", "3": "2"}, "states": {}},
                "b": {"perm": {}, "states": {"2": "a", "3": "c"}},
                "c": {"perm": {}, "states": {"2": "a", "3": "d"}},
                "d": {"perm": {}, "states": {"3": "b"}}
            }}
        }});
        tuples.push(("grigorchuk".into(), grig));
        diagrams.push((
            "f".to_string(),
            json!({"system": "dendrite-3", "tuple": "dendrite-3/grigorchuk", "map": [
                {"from": "1", "to": "1.3", "label": "a", "pi": [1, 2]},
                {"from": "2", "to": "1.2", "label": "", "pi": [1, 2]},
                {"from": "3.1", "to": "1.1", "label": "phi", "pi": [2, 1]},
                {"from": "3.2", "to": "2", "label": "", "pi": [1, 2]},
                {"from": "3.3", "to": "3", "label": "b", "pi": [1, 2]}
            ]}),
        ));
    }
    CatalogEntry {
        name: format!("dendrite-{n}"),
        system: SystemSpec { colors: vec!["blue".into(), "red".into()], base: owned_graph(vertices, base_edges), rules },
        tuples,
        diagrams,
        class: ExpandingClass::Expanding,
        notes: format!(
            "Wazewski dendrite D_{n}: base is a red star; blue rule ends in blue edges 1 and {n}, red rule ends in \
             blue 1 and red {n}. Tuple phi swaps 1<->{n} on blue letters with trivial states{}.",
            if n == 3 { "; tuple grigorchuk adds the first Grigorchuk group on the red letters 2,3" } else { "" }
        ),
    }
}

/// One color; the rule is `n` pairwise disjoint edges, the first on
/// `λ(1)` and the last on `λ(2)`.
fn disjoint_chain(letters: &[(&str, &str)]) -> HypergraphSpec {
    let mut vs = vec!["p1".to_string()];
    let mut es = vec![];
    let k = letters.len();
    for (i, (name, color)) in letters.iter().enumerate() {
        let a = if i == 0 { "p1".to_string() } else { format!("u{i}") };
        let b = if i + 1 == k { "p2".to_string() } else { format!("v{i}") };
        if i > 0 {
            vs.push(a.clone());
        }
        if i + 1 < k {
            vs.push(b.clone());
        }
        es.push(EdgeSpec { name: name.to_string(), color: color.to_string(), boundary: vec![a, b] });
    }
    vs.push("p2".into());
    owned_graph(vs, es)
}

fn fullshift(n: usize) -> CatalogEntry {
    let letters: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let pairs: Vec<(&str, &str)> = letters.iter().map(|l| (l.as_str(), "k")).collect();
    let base = graph(&["a", "b"], vec![edge("e", "k", &["a", "b"])]);
    let sys = system(&["k"], base, vec![("k", RuleSpec { graph: disjoint_chain(&pairs), boundary: vec!["p1".into(), "p2".into()] })]);
    let mut tuples = vec![];
    if n == 2 {
        tuples.push((
            "grigorchuk".to_string(),
            json!({"groups": {"k": {"generators": {
                "a": {"perm": {"0": "1", "1": "0"}, "states": {}},
                "b": {"perm": {}, "states": {"0": "a", "1": "c"}},
                "c": {"perm": {}, "states": {"0": "a", "1": "d"}},
                "d": {"perm": {}, "states": {"1": "b"}}
            }}}}),
        ));
    }
    CatalogEntry {
        name: format!("fullshift-{n}"),
        system: sys,
        tuples,
        diagrams: vec![],
        class: ExpandingClass::Expanding,
        notes: format!(
            "Full shift on {n} letters: one color, the rule is {n} pairwise disjoint edges.{}",
            if n == 2 { " With tuple grigorchuk this is the Rover setting." } else { "" }
        ),
    }
}

fn badshift() -> CatalogEntry {
    let base = graph(&["a", "b"], vec![edge("e", "red", &["a", "b"])]);
    let sys = system(
        &["blue", "red"],
        base,
        vec![
            ("blue", RuleSpec { graph: disjoint_chain(&[("a", "red"), ("b", "red")]), boundary: vec!["p1".into(), "p2".into()] }),
            ("red", RuleSpec { graph: disjoint_chain(&[("c", "blue"), ("d", "red")]), boundary: vec!["p1".into(), "p2".into()] }),
        ],
    );
    CatalogEntry {
        name: "badshift".into(),
        system: sys,
        tuples: vec![],
        diagrams: vec![],
        class: ExpandingClass::Expanding,
        notes: "Edge shift on {a,b,c,d}: a,b,d are followed by c or d, c by a or b; started at red. \
                Every color has a rule of isolated edges; this shift is not infinitely contractive."
            .into(),
    }
}

fn matui_k2() -> CatalogEntry {
    let base = graph(&["a", "b"], vec![edge("e", "A", &["a", "b"])]);
    let sys = system(
        &["A", "B"],
        base,
        vec![
            ("A", RuleSpec { graph: disjoint_chain(&[("a1", "A"), ("a2", "A"), ("b", "B")]), boundary: vec!["p1".into(), "p2".into()] }),
            ("B", RuleSpec { graph: disjoint_chain(&[("b1", "B"), ("b2", "B"), ("a", "A")]), boundary: vec!["p1".into(), "p2".into()] }),
        ],
    );
    CatalogEntry {
        name: "matui-k2".into(),
        system: sys,
        tuples: vec![],
        diagrams: vec![],
        class: ExpandingClass::Expanding,
        notes: "Two-color edge shift where each rule has two edges of its own color and exactly one of the other (k=2, L=2)."
            .into(),
    }
}
