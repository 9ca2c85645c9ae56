//! Finite colored hypergraphs with ordered boundaries, π-isomorphisms between
//! them, and canonical forms.

mod canon;
mod iso;

pub use canon::{canonical_form, Canon};
pub use iso::{compose_pi_isomorphisms, find_pi_isomorphisms, find_shape_isos, PiIsoError, PiIsomorphism, ShapeIso};

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

/// One hyperedge as it appears in JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub name: String,
    pub color: String,
    pub boundary: Vec<String>,
}

/// Raw hypergraph record: `{"vertices":[..], "hyperedges":[..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypergraphSpec {
    pub vertices: Vec<String>,
    pub hyperedges: Vec<EdgeSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HypergraphError {
    #[error("vertex `{0}` lies on no hyperedge")]
    IsolatedVertex(String),
    #[error("hyperedge `{edge}` names unknown vertex `{vertex}` at index {index}")]
    UnknownVertex { edge: String, index: usize, vertex: String },
    #[error("duplicate hyperedge name `{0}`")]
    DuplicateEdgeName(String),
    #[error("duplicate vertex name `{0}`")]
    DuplicateVertex(String),
    #[error("hyperedge `{0}` has fewer than two boundary vertices")]
    OrderTooSmall(String),
    #[error("`{0}` is not a valid identifier")]
    BadIdentifier(String),
}

/// Every violated invariant of a raw hypergraph, in input order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostics(pub Vec<HypergraphError>);

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msgs: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        f.write_str(&msgs.join("; "))
    }
}

impl std::error::Error for Diagnostics {}

/// Identifiers are nonempty runs of ASCII letters, digits and underscores.
pub fn is_identifier(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

/// Index-level view used by the algorithms: colors are small integers,
/// vertices are `0..nverts`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Shape {
    pub nverts: usize,
    pub colors: Vec<u32>,
    pub bnd: Vec<Vec<u32>>,
}

impl Shape {
    pub fn nedges(&self) -> usize {
        self.bnd.len()
    }

    /// Number of boundary slots each vertex occupies.
    pub fn occurrences(&self) -> Vec<u32> {
        let mut occ = vec![0u32; self.nverts];
        for b in &self.bnd {
            for &v in b {
                occ[v as usize] += 1;
            }
        }
        occ
    }

    /// Number of distinct hyperedges each vertex lies on.
    pub fn edge_degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.nverts];
        for b in &self.bnd {
            let mut seen: Vec<u32> = b.clone();
            seen.sort_unstable();
            seen.dedup();
            for v in seen {
                deg[v as usize] += 1;
            }
        }
        deg
    }

    /// Bit `i` of entry `e` is set when `λ_e(i)` also lies on another hyperedge.
    pub fn relevant_masks(&self) -> Vec<u32> {
        let deg = self.edge_degrees();
        self.bnd
            .iter()
            .map(|b| {
                b.iter()
                    .enumerate()
                    .filter(|(_, &v)| deg[v as usize] >= 2)
                    .fold(0u32, |m, (i, _)| m | (1 << i))
            })
            .collect()
    }
}

/// A validated colored hypergraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    spec: HypergraphSpec,
    vindex: HashMap<String, u32>,
    eindex: HashMap<String, u32>,
    bnd: Vec<Vec<u32>>,
}

impl Hypergraph {
    /// Checks every invariant and reports all violations at once.
    pub fn validate(spec: HypergraphSpec) -> Result<Hypergraph, Diagnostics> {
        Self::validate_with(spec, true)
    }

    /// Like [`Hypergraph::validate`], optionally skipping the identifier
    /// syntax check (derived hypergraphs use dotted and `w:v` names).
    pub fn validate_with(spec: HypergraphSpec, check_ids: bool) -> Result<Hypergraph, Diagnostics> {
        let mut errs = vec![];
        let is_identifier = |s: &str| !check_ids || is_identifier(s);
        let mut vindex = HashMap::new();
        for (i, v) in spec.vertices.iter().enumerate() {
            if !is_identifier(v) {
                errs.push(HypergraphError::BadIdentifier(v.clone()));
            }
            if vindex.insert(v.clone(), i as u32).is_some() {
                errs.push(HypergraphError::DuplicateVertex(v.clone()));
            }
        }
        let mut eindex = HashMap::new();
        let mut used = vec![false; spec.vertices.len()];
        let mut bnd = vec![];
        for (k, e) in spec.hyperedges.iter().enumerate() {
            if !is_identifier(&e.name) {
                errs.push(HypergraphError::BadIdentifier(e.name.clone()));
            }
            if !is_identifier(&e.color) {
                errs.push(HypergraphError::BadIdentifier(e.color.clone()));
            }
            if eindex.insert(e.name.clone(), k as u32).is_some() {
                errs.push(HypergraphError::DuplicateEdgeName(e.name.clone()));
            }
            if e.boundary.len() < 2 {
                errs.push(HypergraphError::OrderTooSmall(e.name.clone()));
            }
            let mut b = vec![];
            for (i, v) in e.boundary.iter().enumerate() {
                match vindex.get(v) {
                    Some(&x) => {
                        used[x as usize] = true;
                        b.push(x);
                    }
                    None => errs.push(HypergraphError::UnknownVertex {
                        edge: e.name.clone(),
                        index: i + 1,
                        vertex: v.clone(),
                    }),
                }
            }
            bnd.push(b);
        }
        for (i, v) in spec.vertices.iter().enumerate() {
            if !used[i] {
                errs.push(HypergraphError::IsolatedVertex(v.clone()));
            }
        }
        if errs.is_empty() {
            Ok(Hypergraph { spec, vindex, eindex, bnd })
        } else {
            Err(Diagnostics(errs))
        }
    }

    pub fn spec(&self) -> &HypergraphSpec {
        &self.spec
    }

    pub fn vertices(&self) -> &[String] {
        &self.spec.vertices
    }

    pub fn edges(&self) -> &[EdgeSpec] {
        &self.spec.hyperedges
    }

    pub fn nverts(&self) -> usize {
        self.spec.vertices.len()
    }

    pub fn nedges(&self) -> usize {
        self.spec.hyperedges.len()
    }

    pub fn vertex_id(&self, name: &str) -> Option<u32> {
        self.vindex.get(name).copied()
    }

    pub fn edge_id(&self, name: &str) -> Option<u32> {
        self.eindex.get(name).copied()
    }

    /// Boundary of edge `e` as vertex indices.
    pub fn boundary(&self, e: usize) -> &[u32] {
        &self.bnd[e]
    }

    pub fn colors(&self) -> BTreeSet<String> {
        self.spec.hyperedges.iter().map(|e| e.color.clone()).collect()
    }

    /// Index view with colors numbered through `color_id`.
    pub fn shape_with(&self, color_id: &dyn Fn(&str) -> u32) -> Shape {
        Shape {
            nverts: self.nverts(),
            colors: self.spec.hyperedges.iter().map(|e| color_id(&e.color)).collect(),
            bnd: self.bnd.clone(),
        }
    }

    /// Index view with colors numbered by sorted name.
    pub fn shape(&self) -> (Shape, Vec<String>) {
        let names: Vec<String> = self.colors().into_iter().collect();
        let shape = self.shape_with(&|c| names.iter().position(|n| n == c).unwrap() as u32);
        (shape, names)
    }

    /// The same hypergraph with vertices and edges renamed.
    pub fn relabel(
        &self,
        vertex_names: &dyn Fn(&str) -> String,
        edge_names: &dyn Fn(&str) -> String,
    ) -> Hypergraph {
        let spec = HypergraphSpec {
            vertices: self.spec.vertices.iter().map(|v| vertex_names(v)).collect(),
            hyperedges: self
                .spec
                .hyperedges
                .iter()
                .map(|e| EdgeSpec {
                    name: edge_names(&e.name),
                    color: e.color.clone(),
                    boundary: e.boundary.iter().map(|v| vertex_names(v)).collect(),
                })
                .collect(),
        };
        Hypergraph::validate_with(spec, false).expect("renaming preserves validity")
    }

    /// Strict canonical string (colors and boundary orders preserved).
    pub fn canonical_string(&self) -> String {
        let (shape, names) = self.shape();
        canonical_form(&shape, None).render(&names)
    }

    /// Graphviz rendering: order-2 hyperedges as arrows, higher orders as a
    /// box connector with numbered tentacles.
    pub fn to_dot(&self, title: &str) -> String {
        dot_of(
            title,
            self.spec.vertices.iter().map(|v| (v.clone(), v.clone())),
            self.spec.hyperedges.iter().map(|e| (e.name.clone(), e.color.clone(), e.boundary.clone())),
        )
    }
}

pub(crate) fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Shared DOT writer for hypergraphs and expansions.
pub(crate) fn dot_of(
    title: &str,
    vertices: impl Iterator<Item = (String, String)>,
    edges: impl Iterator<Item = (String, String, Vec<String>)>,
) -> String {
    let mut out = format!("digraph \"{}\" {{\n  node [shape=point];\n", dot_escape(title));
    let mut ids: BTreeMap<String, usize> = BTreeMap::new();
    for (name, label) in vertices {
        let id = ids.len();
        ids.insert(name, id);
        out.push_str(&format!("  v{id} [xlabel=\"{}\"];\n", dot_escape(&label)));
    }
    for (k, (name, color, bnd)) in edges.enumerate() {
        let color_attr = format!("color=\"{}\"", dot_escape(&color));
        if bnd.len() == 2 {
            out.push_str(&format!(
                "  v{} -> v{} [label=\"{}\", {color_attr}];\n",
                ids[&bnd[0]],
                ids[&bnd[1]],
                dot_escape(&name)
            ));
        } else {
            out.push_str(&format!(
                "  e{k} [shape=box, label=\"{}\", {color_attr}];\n",
                dot_escape(&name)
            ));
            for (i, v) in bnd.iter().enumerate() {
                out.push_str(&format!(
                    "  e{k} -> v{} [arrowhead=none, label=\"{}\", {color_attr}];\n",
                    ids[v],
                    i + 1
                ));
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hg(vs: &[&str], es: &[(&str, &str, &[&str])]) -> HypergraphSpec {
        HypergraphSpec {
            vertices: vs.iter().map(|s| s.to_string()).collect(),
            hyperedges: es
                .iter()
                .map(|(n, c, b)| EdgeSpec {
                    name: n.to_string(),
                    color: c.to_string(),
                    boundary: b.iter().map(|s| s.to_string()).collect(),
                })
                .collect(),
        }
    }

    #[test]
    fn gasket_base_is_valid() {
        let h = Hypergraph::validate(hg(
            &["t", "c", "b"],
            &[("L", "k", &["t", "b", "c"]), ("R", "k", &["t", "c", "b"])],
        ));
        assert!(h.is_ok());
    }

    #[test]
    fn loops_are_allowed() {
        assert!(Hypergraph::validate(hg(&["u"], &[("e", "k", &["u", "u"])])).is_ok());
    }

    #[test]
    fn every_violation_is_reported() {
        let err = Hypergraph::validate(hg(
            &["u", "v", "w"],
            &[("e", "k", &["u", "v"]), ("e", "k", &["u"]), ("f", "k", &["u", "q"])],
        ))
        .unwrap_err();
        assert!(err.0.contains(&HypergraphError::IsolatedVertex("w".into())));
        assert!(err.0.contains(&HypergraphError::DuplicateEdgeName("e".into())));
        assert!(err.0.contains(&HypergraphError::OrderTooSmall("e".into())));
        assert!(err.0.iter().any(|e| matches!(e, HypergraphError::UnknownVertex { index: 2, .. })));
    }

    #[test]
    fn canonical_strings_distinguish_orientation() {
        let a = Hypergraph::validate(hg(
            &["t", "c", "b"],
            &[("L", "k", &["t", "b", "c"]), ("R", "k", &["t", "c", "b"])],
        ))
        .unwrap();
        let b = Hypergraph::validate(hg(
            &["t", "c", "b"],
            &[("L", "k", &["t", "b", "c"]), ("R", "k", &["t", "b", "c"])],
        ))
        .unwrap();
        assert_ne!(a.canonical_string(), b.canonical_string());
        let renamed = a.relabel(&|v| format!("{v}x"), &|e| format!("{e}y"));
        assert_eq!(a.canonical_string(), renamed.canonical_string());
    }

    #[test]
    fn star_and_path_differ() {
        let star = Hypergraph::validate(hg(
            &["c", "a", "b", "d"],
            &[("1", "r", &["c", "a"]), ("2", "r", &["c", "b"]), ("3", "r", &["c", "d"])],
        ))
        .unwrap();
        let path = Hypergraph::validate(hg(
            &["a", "b", "c", "d"],
            &[("1", "r", &["a", "b"]), ("2", "r", &["b", "c"]), ("3", "r", &["c", "d"])],
        ))
        .unwrap();
        assert_ne!(star.canonical_string(), path.canonical_string());
    }
}
