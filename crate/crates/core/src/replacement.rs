//! Replacement systems: consistency checking, classification, and the
//! hyperedge-expansion engine.

use crate::hypergraph::{dot_of, Diagnostics, Hypergraph, HypergraphSpec, Shape};
use crate::shiftlang::{Address, Ctx};
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

/// One rule as it appears in JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleSpec {
    pub graph: HypergraphSpec,
    pub boundary: Vec<String>,
}

/// Raw replacement system: `{"colors":[..],"base":{..},"rules":{"<color>":{..}}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub colors: Vec<String>,
    pub base: HypergraphSpec,
    pub rules: IndexMap<String, RuleSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SystemError {
    #[error("{place}: {diag}")]
    Hypergraph { place: String, diag: Diagnostics },
    #[error("{place}: hyperedge `{edge}` has undeclared color `{color}`")]
    UnknownColor { place: String, edge: String, color: String },
    #[error("color `{0}` has no replacement rule")]
    MissingRule(String),
    #[error("rule given for undeclared color `{0}`")]
    ExtraRule(String),
    #[error("color `{0}` is declared twice")]
    DuplicateColor(String),
    #[error("{place}: hyperedge `{edge}` of color `{color}` has order {found}, expected {expected}")]
    OrderMismatch { place: String, edge: String, color: String, expected: usize, found: usize },
    #[error("rule `{color}`: boundary vertex `{vertex}` is not a vertex of the rule graph")]
    BoundaryUnknownVertex { color: String, vertex: String },
    #[error("rule `{0}`: boundary vertices are not pairwise distinct")]
    BoundaryNotDistinct(String),
    #[error("rule `{0}`: rule graph has no hyperedges")]
    EmptyRule(String),
}

/// All consistency violations of a system.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("inconsistent replacement system: {}", .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; "))]
pub struct Inconsistent(pub Vec<SystemError>);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExpandingClass {
    Expanding,
    AlmostExpanding,
    Neither,
}

/// Derived data of a consistent system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    /// `d_k` per color.
    pub orders: Vec<usize>,
    pub isolated: BTreeSet<u32>,
    pub trivial: BTreeSet<u32>,
    pub class: ExpandingClass,
    /// Largest number of hyperedges in a rule graph.
    pub max_rule_size: usize,
    /// Colors occurring on some word of the language.
    pub reachable: Vec<bool>,
}

/// A compiled rule `e →(k, d_k) R_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub graph: Hypergraph,
    /// Boundary `λ_R(1..d)` as vertex ids of `graph`.
    pub boundary: Vec<u32>,
    /// Color id of each rule hyperedge.
    pub edge_colors: Vec<u32>,
    /// For each rule vertex, its boundary position if any.
    pub bpos: Vec<Option<usize>>,
    /// Number of internal (non-boundary) vertices.
    pub internal: usize,
}

/// A validated, classified replacement system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct System {
    spec: SystemSpec,
    pub colors: Vec<String>,
    pub base: Hypergraph,
    pub base_colors: Vec<u32>,
    pub rules: Vec<Rule>,
    pub class: Classification,
}

/// Canonical vertex names of expansions: base vertices, or `w:v` for the
/// internal vertex `v` of the rule applied at address `w`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VName {
    Base(u32),
    Inner(Address, u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryFlag {
    TopologicalBoundary,
    InteriorBoundary,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExpansionError {
    #[error("`{0}` is not a leaf of the expansion")]
    NotALeaf(String),
    #[error("`{0}` is not a word of the language")]
    InvalidAddress(String),
    #[error("leaf set is not a complete expansion frontier: {0}")]
    NotAFrontier(String),
}

impl System {
    pub fn from_json(text: &str) -> Result<System, String> {
        let spec: SystemSpec = serde_json::from_str(text).map_err(|e| e.to_string())?;
        System::compile(spec).map_err(|e| e.to_string())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.spec).unwrap()
    }

    pub fn spec(&self) -> &SystemSpec {
        &self.spec
    }

    /// Validates consistency and computes the classification.
    pub fn compile(spec: SystemSpec) -> Result<System, Inconsistent> {
        let mut errs = vec![];
        let mut colors: Vec<String> = vec![];
        for c in &spec.colors {
            if colors.contains(c) {
                errs.push(SystemError::DuplicateColor(c.clone()));
            } else {
                colors.push(c.clone());
            }
        }
        let cid = |c: &str| colors.iter().position(|x| x == c).map(|i| i as u32);
        let base = Hypergraph::validate(spec.base.clone())
            .map_err(|diag| errs.push(SystemError::Hypergraph { place: "base".into(), diag }))
            .ok();
        for k in spec.rules.keys() {
            if cid(k).is_none() {
                errs.push(SystemError::ExtraRule(k.clone()));
            }
        }
        let mut graphs: Vec<Option<Hypergraph>> = vec![];
        for c in &colors {
            match spec.rules.get(c) {
                None => {
                    errs.push(SystemError::MissingRule(c.clone()));
                    graphs.push(None);
                }
                Some(r) => graphs.push(
                    Hypergraph::validate(r.graph.clone())
                        .map_err(|diag| errs.push(SystemError::Hypergraph { place: format!("rule `{c}`"), diag }))
                        .ok(),
                ),
            }
        }
        // orders d_k come from the rule boundaries
        let orders: Vec<Option<usize>> =
            colors.iter().map(|c| spec.rules.get(c).map(|r| r.boundary.len())).collect();
        let check_edges = |place: &str, h: &HypergraphSpec, errs: &mut Vec<SystemError>| {
            for e in &h.hyperedges {
                match cid(&e.color) {
                    None => errs.push(SystemError::UnknownColor {
                        place: place.into(),
                        edge: e.name.clone(),
                        color: e.color.clone(),
                    }),
                    Some(k) => {
                        if let Some(d) = orders[k as usize] {
                            if d != e.boundary.len() {
                                errs.push(SystemError::OrderMismatch {
                                    place: place.into(),
                                    edge: e.name.clone(),
                                    color: e.color.clone(),
                                    expected: d,
                                    found: e.boundary.len(),
                                });
                            }
                        }
                    }
                }
            }
        };
        check_edges("base", &spec.base, &mut errs);
        for c in &colors {
            if let Some(r) = spec.rules.get(c) {
                check_edges(&format!("rule `{c}`"), &r.graph, &mut errs);
                if r.graph.hyperedges.is_empty() {
                    errs.push(SystemError::EmptyRule(c.clone()));
                }
                let set: BTreeSet<&String> = r.boundary.iter().collect();
                if set.len() != r.boundary.len() {
                    errs.push(SystemError::BoundaryNotDistinct(c.clone()));
                }
                for v in &r.boundary {
                    if !r.graph.vertices.contains(v) {
                        errs.push(SystemError::BoundaryUnknownVertex { color: c.clone(), vertex: v.clone() });
                    }
                }
            }
        }
        if !errs.is_empty() {
            return Err(Inconsistent(errs));
        }
        let base = base.unwrap();
        let base_colors = base.edges().iter().map(|e| cid(&e.color).unwrap()).collect();
        let rules: Vec<Rule> = colors
            .iter()
            .zip(graphs)
            .map(|(c, g)| {
                let g = g.unwrap();
                let rs = &spec.rules[c];
                let boundary: Vec<u32> = rs.boundary.iter().map(|v| g.vertex_id(v).unwrap()).collect();
                let mut bpos = vec![None; g.nverts()];
                for (i, &v) in boundary.iter().enumerate() {
                    bpos[v as usize] = Some(i);
                }
                Rule {
                    edge_colors: g.edges().iter().map(|e| cid(&e.color).unwrap()).collect(),
                    internal: g.nverts() - boundary.len(),
                    graph: g,
                    boundary,
                    bpos,
                }
            })
            .collect();
        let mut sys = System {
            spec,
            colors,
            base,
            base_colors,
            rules,
            class: Classification {
                orders: vec![],
                isolated: BTreeSet::new(),
                trivial: BTreeSet::new(),
                class: ExpandingClass::Neither,
                max_rule_size: 0,
                reachable: vec![],
            },
        };
        sys.class = sys.classify();
        Ok(sys)
    }

    fn classify(&self) -> Classification {
        let n = self.colors.len();
        let orders: Vec<usize> = self.rules.iter().map(|r| r.boundary.len()).collect();
        let trivial: BTreeSet<u32> = (0..n as u32)
            .filter(|&k| {
                let r = &self.rules[k as usize];
                r.graph.nedges() == 1
                    && r.edge_colors[0] == k
                    && r.graph.boundary(0) == r.boundary.as_slice()
            })
            .collect();
        // reachable colors
        let mut reachable = vec![false; n];
        let mut queue: VecDeque<u32> = self.base_colors.iter().copied().collect();
        while let Some(c) = queue.pop_front() {
            if !std::mem::replace(&mut reachable[c as usize], true) {
                queue.extend(self.rules[c as usize].edge_colors.iter().copied());
            }
        }
        // occupied[k][i]: some k-colored hyperedge of the language shares its i-th vertex
        let mut occupied: Vec<Vec<bool>> = orders.iter().map(|&d| vec![false; d]).collect();
        let shared = |h: &Hypergraph| {
            let (s, _) = h.shape();
            s.edge_degrees()
        };
        let bdeg = shared(&self.base);
        for (e, &k) in self.base_colors.iter().enumerate() {
            for (i, &v) in self.base.boundary(e).iter().enumerate() {
                if bdeg[v as usize] >= 2 {
                    occupied[k as usize][i] = true;
                }
            }
        }
        loop {
            let mut changed = false;
            for m in 0..n {
                if !reachable[m] {
                    continue;
                }
                let r = &self.rules[m];
                let deg = shared(&r.graph);
                for (y, &k) in r.edge_colors.iter().enumerate() {
                    for (j, &v) in r.graph.boundary(y).iter().enumerate() {
                        let occ = deg[v as usize] >= 2
                            || r.bpos[v as usize].is_some_and(|p| occupied[m][p]);
                        if occ && !occupied[k as usize][j] {
                            occupied[k as usize][j] = true;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let isolated: BTreeSet<u32> =
            (0..n as u32).filter(|&k| occupied[k as usize].iter().all(|&o| !o)).collect();
        let adjacent_boundary: Vec<bool> = self
            .rules
            .iter()
            .map(|r| {
                (0..r.graph.nedges()).any(|y| {
                    let mut bs: Vec<usize> = r.graph.boundary(y).iter().filter_map(|&v| r.bpos[v as usize]).collect();
                    bs.sort_unstable();
                    bs.dedup();
                    bs.len() >= 2
                })
            })
            .collect();
        let class = if adjacent_boundary.iter().all(|&a| !a) {
            ExpandingClass::Expanding
        } else if (0..n).all(|k| {
            !adjacent_boundary[k] || (isolated.contains(&(k as u32)) && trivial.contains(&(k as u32)))
        }) {
            ExpandingClass::AlmostExpanding
        } else {
            ExpandingClass::Neither
        };
        let max_rule_size = self.rules.iter().map(|r| r.graph.nedges()).max().unwrap_or(0);
        Classification { orders, isolated, trivial, class, max_rule_size, reachable }
    }

    pub fn ncolors(&self) -> usize {
        self.colors.len()
    }

    pub fn color_id(&self, name: &str) -> Option<u32> {
        self.colors.iter().position(|c| c == name).map(|i| i as u32)
    }

    pub fn order(&self, color: u32) -> usize {
        self.class.orders[color as usize]
    }

    pub fn is_trivial_color(&self, color: u32) -> bool {
        self.class.trivial.contains(&color)
    }

    pub fn is_almost_expanding(&self) -> bool {
        self.class.class != ExpandingClass::Neither
    }

    /// Number of letters available after a prefix ending in context `ctx`.
    pub fn nletters(&self, ctx: Ctx) -> usize {
        match ctx {
            Ctx::Base => self.base.nedges(),
            Ctx::Color(c) => self.rules[c as usize].graph.nedges(),
        }
    }

    /// Color of letter `x` read in context `ctx`.
    pub fn letter_color(&self, ctx: Ctx, x: u16) -> u32 {
        match ctx {
            Ctx::Base => self.base_colors[x as usize],
            Ctx::Color(c) => self.rules[c as usize].edge_colors[x as usize],
        }
    }

    pub fn letter_name(&self, ctx: Ctx, x: u16) -> &str {
        match ctx {
            Ctx::Base => &self.base.edges()[x as usize].name,
            Ctx::Color(c) => &self.rules[c as usize].graph.edges()[x as usize].name,
        }
    }

    pub fn letter_index(&self, ctx: Ctx, name: &str) -> Option<u16> {
        match ctx {
            Ctx::Base => self.base.edge_id(name),
            Ctx::Color(c) => self.rules[c as usize].graph.edge_id(name),
        }
        .map(|i| i as u16)
    }

    /// Boundary (as rule/base vertex ids) of letter `x` in context `ctx`.
    pub fn letter_boundary(&self, ctx: Ctx, x: u16) -> &[u32] {
        match ctx {
            Ctx::Base => self.base.boundary(x as usize),
            Ctx::Color(c) => self.rules[c as usize].graph.boundary(x as usize),
        }
    }

    /// Color of a nonempty address.
    pub fn color_of(&self, w: &Address) -> u32 {
        self.color_after(Ctx::Base, &w.0)
    }

    /// Color reached after reading `letters` from `ctx`.
    pub fn color_after(&self, ctx: Ctx, letters: &[u16]) -> u32 {
        let mut ctx = ctx;
        let mut col = u32::MAX;
        for &x in letters {
            col = self.letter_color(ctx, x);
            ctx = Ctx::Color(col);
        }
        match (ctx, col) {
            (Ctx::Color(c), _) => c,
            (Ctx::Base, _) => panic!("color of the empty word"),
        }
    }

    pub fn base_expansion(&self) -> Expansion {
        Expansion { leaves: (0..self.base.nedges() as u16).map(|i| Address(vec![i])).collect() }
    }

    /// Cone system: a single `color`-edge on distinct vertices as base.
    pub fn cone_system(&self, color: u32) -> System {
        let d = self.order(color);
        let mut spec = self.spec.clone();
        let vertices: Vec<String> = (1..=d).map(|i| format!("p{i}")).collect();
        spec.base = HypergraphSpec {
            vertices: vertices.clone(),
            hyperedges: vec![crate::hypergraph::EdgeSpec {
                name: "root".into(),
                color: self.colors[color as usize].clone(),
                boundary: vertices,
            }],
        };
        System::compile(spec).expect("cone of a consistent system is consistent")
    }

    /// Graphviz rendering of the base and every rule.
    pub fn to_dot(&self) -> String {
        let mut out = self.base.to_dot("base");
        for (c, r) in self.colors.iter().zip(&self.rules) {
            let bnames: Vec<String> = r.boundary.iter().map(|&v| r.graph.vertices()[v as usize].clone()).collect();
            let h = r.graph.relabel(
                &|v| match bnames.iter().position(|b| b == v) {
                    Some(i) => format!("{v}_lambda{}", i + 1),
                    None => v.to_string(),
                },
                &|e| e.to_string(),
            );
            out.push_str(&h.to_dot(&format!("rule {c}")));
        }
        out
    }
}

/// A hypergraph expansion, identified by its leaf set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Expansion {
    pub leaves: BTreeSet<Address>,
}

/// Fully computed boundary data of an expansion.
#[derive(Clone, Debug)]
pub struct Materialized {
    pub leaves: Vec<Address>,
    pub boundaries: Vec<Vec<VName>>,
    pub vertices: Vec<VName>,
}

impl Materialized {
    /// Index view; colors are system color ids.
    pub fn shape(&self, sys: &System) -> Shape {
        let idx: BTreeMap<&VName, u32> = self.vertices.iter().enumerate().map(|(i, v)| (v, i as u32)).collect();
        Shape {
            nverts: self.vertices.len(),
            colors: self.leaves.iter().map(|w| sys.color_of(w)).collect(),
            bnd: self.boundaries.iter().map(|b| b.iter().map(|v| idx[v]).collect()).collect(),
        }
    }

    pub fn leaf_index(&self, w: &Address) -> Option<usize> {
        self.leaves.binary_search(w).ok()
    }

    /// Flags of every index of leaf `e`.
    pub fn boundary_status(&self, e: &Address) -> Result<Vec<BoundaryFlag>, ExpansionError> {
        let k = self.leaf_index(e).ok_or_else(|| ExpansionError::NotALeaf(format!("{:?}", e.0)))?;
        Ok(self.boundaries[k]
            .iter()
            .map(|v| {
                let elsewhere = self
                    .boundaries
                    .iter()
                    .enumerate()
                    .any(|(j, b)| j != k && b.contains(v));
                if elsewhere {
                    BoundaryFlag::TopologicalBoundary
                } else {
                    BoundaryFlag::InteriorBoundary
                }
            })
            .collect())
    }
}

impl System {
    /// Boundary of address `w` (must be a word of the language).
    pub fn boundary_of(&self, w: &Address) -> Vec<VName> {
        let mut bnd: Vec<VName> = self.base.boundary(w.0[0] as usize).iter().map(|&v| VName::Base(v)).collect();
        let mut col = self.base_colors[w.0[0] as usize];
        for k in 1..w.0.len() {
            let r = &self.rules[col as usize];
            let y = w.0[k] as usize;
            let parent = Address(w.0[..k].to_vec());
            bnd = r
                .graph
                .boundary(y)
                .iter()
                .map(|&v| match r.bpos[v as usize] {
                    Some(i) => bnd[i].clone(),
                    None => VName::Inner(parent.clone(), v),
                })
                .collect();
            col = r.edge_colors[y];
        }
        bnd
    }

    /// Whether `w` is a word of the language (chain condition).
    pub fn is_word(&self, w: &Address) -> bool {
        let mut ctx = Ctx::Base;
        !w.0.is_empty()
            && w.0.iter().all(|&x| {
                if (x as usize) < self.nletters(ctx) {
                    ctx = Ctx::Color(self.letter_color(ctx, x));
                    true
                } else {
                    false
                }
            })
    }

    pub fn materialize(&self, x: &Expansion) -> Materialized {
        let leaves: Vec<Address> = x.leaves.iter().cloned().collect();
        let boundaries: Vec<Vec<VName>> = leaves.iter().map(|w| self.boundary_of(w)).collect();
        let vertices: BTreeSet<VName> = boundaries.iter().flatten().cloned().collect();
        Materialized { leaves, boundaries, vertices: vertices.into_iter().collect() }
    }

    /// Checks that `leaves` is the leaf set of some expansion of the base.
    pub fn expansion_from_leaves(&self, leaves: BTreeSet<Address>) -> Result<Expansion, ExpansionError> {
        for w in &leaves {
            if !self.is_word(w) {
                return Err(ExpansionError::InvalidAddress(self.addr_string(w)));
            }
        }
        let mut internal: BTreeSet<Address> = BTreeSet::new();
        for w in &leaves {
            for k in 1..w.0.len() {
                internal.insert(Address(w.0[..k].to_vec()));
            }
        }
        if let Some(w) = internal.iter().find(|w| leaves.contains(*w)) {
            return Err(ExpansionError::NotAFrontier(format!("`{}` is both a leaf and a prefix of a leaf", self.addr_string(w))));
        }
        let present = |w: &Address| leaves.contains(w) || internal.contains(w);
        for i in 0..self.base.nedges() as u16 {
            if !present(&Address(vec![i])) {
                return Err(ExpansionError::NotAFrontier(format!("base hyperedge `{}` is missing", self.letter_name(Ctx::Base, i))));
            }
        }
        for p in &internal {
            let c = self.color_of(p);
            for y in 0..self.rules[c as usize].graph.nedges() as u16 {
                let mut child = p.0.clone();
                child.push(y);
                let child = Address(child);
                if !present(&child) {
                    return Err(ExpansionError::NotAFrontier(format!("`{}` is missing", self.addr_string(&child))));
                }
            }
        }
        Ok(Expansion { leaves })
    }

    /// Expansion `x ◁ e`.
    pub fn expand_hyperedge(&self, x: &Expansion, e: &Address) -> Result<Expansion, ExpansionError> {
        if !x.leaves.contains(e) {
            return Err(ExpansionError::NotALeaf(self.addr_string(e)));
        }
        let mut leaves = x.leaves.clone();
        leaves.remove(e);
        let c = self.color_of(e);
        for y in 0..self.rules[c as usize].graph.nedges() as u16 {
            let mut w = e.0.clone();
            w.push(y);
            leaves.insert(Address(w));
        }
        Ok(Expansion { leaves })
    }

    /// Number of trivial-color expansions recorded in the leaf set.
    pub fn trivial_steps(&self, x: &Expansion) -> usize {
        let mut internal: HashSet<&[u16]> = HashSet::new();
        for w in &x.leaves {
            for k in 1..w.0.len() {
                internal.insert(&w.0[..k]);
            }
        }
        internal
            .iter()
            .filter(|p| self.rules[self.color_of(&Address(p.to_vec())) as usize].graph.nedges() < 2)
            .count()
    }

    /// Every expansion with at most `max_leaves` leaves, in breadth-first
    /// order (by number of expansion steps, then by leaf set).  Expansions of
    /// colors whose rule has a single hyperedge do not change the number of
    /// leaves, so at most `max_unary_steps` of them are allowed per expansion.
    pub fn enumerate_expansions(&self, max_leaves: usize, max_unary_steps: usize) -> Vec<Expansion> {
        let base = self.base_expansion();
        if base.leaves.len() > max_leaves {
            return vec![];
        }
        let mut seen: HashSet<Expansion> = HashSet::new();
        seen.insert(base.clone());
        let mut out = vec![base.clone()];
        let mut level = vec![(base, 0usize)];
        while !level.is_empty() {
            let mut next: BTreeMap<Expansion, usize> = BTreeMap::new();
            for (x, unary) in &level {
                for e in &x.leaves {
                    let c = self.color_of(e);
                    let size = self.rules[c as usize].graph.nedges();
                    let u = unary + usize::from(size < 2);
                    if x.leaves.len() + size - 1 > max_leaves || u > max_unary_steps {
                        continue;
                    }
                    let y = self.expand_hyperedge(x, e).unwrap();
                    if !seen.contains(&y) {
                        next.entry(y).or_insert(u);
                    }
                }
            }
            level = next.into_iter().collect();
            for (y, _) in &level {
                seen.insert(y.clone());
                out.push(y.clone());
            }
        }
        out
    }

    pub fn vname_string(&self, v: &VName) -> String {
        match v {
            VName::Base(i) => self.base.vertices()[*i as usize].clone(),
            VName::Inner(w, v) => {
                let c = self.color_of(w);
                format!("{}:{}", self.addr_string(w), self.rules[c as usize].graph.vertices()[*v as usize])
            }
        }
    }

    /// Hypergraph with names `w` for leaves and `w:v` for vertices.
    pub fn expansion_hypergraph(&self, x: &Expansion) -> Hypergraph {
        let m = self.materialize(x);
        let spec = HypergraphSpec {
            vertices: m.vertices.iter().map(|v| self.vname_string(v)).collect(),
            hyperedges: m
                .leaves
                .iter()
                .zip(&m.boundaries)
                .map(|(w, b)| crate::hypergraph::EdgeSpec {
                    name: self.addr_string(w),
                    color: self.colors[self.color_of(w) as usize].clone(),
                    boundary: b.iter().map(|v| self.vname_string(v)).collect(),
                })
                .collect(),
        };
        Hypergraph::validate_with(spec, false).expect("expansions are valid hypergraphs")
    }

    pub fn expansion_dot(&self, x: &Expansion) -> String {
        let m = self.materialize(x);
        dot_of(
            "expansion",
            m.vertices.iter().map(|v| (self.vname_string(v), self.vname_string(v))),
            m.leaves.iter().zip(&m.boundaries).map(|(w, b)| {
                (
                    self.addr_string(w),
                    self.colors[self.color_of(w) as usize].clone(),
                    b.iter().map(|v| self.vname_string(v)).collect(),
                )
            }),
        )
    }

    /// Expansion JSON: `{"system": name, "leaves": [..]}`.
    pub fn expansion_json(&self, x: &Expansion, system_name: &str) -> serde_json::Value {
        serde_json::json!({
            "system": system_name,
            "leaves": x.leaves.iter().map(|w| self.addr_string(w)).collect::<Vec<_>>(),
        })
    }

    pub fn parse_expansion_leaves(&self, leaves: &[String]) -> Result<Expansion, ExpansionError> {
        let mut set = BTreeSet::new();
        for l in leaves {
            let w = self.parse_addr(l).map_err(|_| ExpansionError::InvalidAddress(l.clone()))?;
            set.insert(w);
        }
        self.expansion_from_leaves(set)
    }
}

impl fmt::Display for ExpandingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
