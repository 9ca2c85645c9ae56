//! Simple π-contractions of expansions, their parallelism, contractivity
//! scans, and the flag complex `K_x` of contraction classes.
//!
//! A *site* of color `k` in an expansion `x` is a copy of the rule graph
//! `R_k` inside `x`, where every rule hyperedge may be reoriented by a
//! permutation drawn from the boundary group of its color (on the positions
//! shared with other hyperedges; private positions may be reordered freely).
//! Internal rule vertices must map to vertices lying on no other hyperedge.
//! Contracting a site replaces its hyperedges by a single `k`-colored
//! hyperedge on the images of the rule boundary; a site only counts when the
//! result is π-isomorphic to an expansion (an *object*), which is looked up
//! in a table of canonical forms of all expansions up to a size bound.
//!
//! Sites are identified when they have the same leaf set and their
//! attachments (restricted to the potentially shared indices) differ by an
//! element of the boundary group — the effect of composing with an
//! invertible on the contracted side.

use crate::hypergraph::{canonical_form, Shape};
use crate::perm::{Perm, PermGroup};
use crate::replacement::{Expansion, Materialized, System, VName};
use crate::selfsim::Tuple;
use crate::shiftlang::Address;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

/// Which notion of parallelism is used for pairs of sites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parallelism {
    /// Disjoint leaf sets and the simultaneous contraction is an object.
    Strict,
    /// Disjoint leaf sets only.
    Pairwise,
}

impl Parallelism {
    pub fn name(self) -> &'static str {
        match self {
            Parallelism::Strict => "strict",
            Parallelism::Pairwise => "pairwise",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ContractError {
    #[error("the complex has no vertices")]
    EmptyComplex,
    #[error("object table covers expansions with at most {have} leaves, but {needed} are needed")]
    TableTooSmall { needed: usize, have: usize },
}

/// π-canonical forms of every expansion with at most `max_leaves` leaves.
#[derive(Clone, Debug)]
pub struct ObjectTable {
    pub max_leaves: usize,
    pub nexpansions: usize,
    forms: HashSet<Vec<Vec<u32>>>,
}

impl ObjectTable {
    /// Builds the table, returning the enumerated expansions as well.
    /// Expansions of single-hyperedge rules are not performed (they only
    /// rename a leaf and never change the hypergraph).
    pub fn build(sys: &System, groups: &[PermGroup], max_leaves: usize) -> (ObjectTable, Vec<Expansion>) {
        let (table, expansions, _) = ObjectTable::build_with_forms(sys, groups, max_leaves);
        (table, expansions)
    }

    /// Like [`ObjectTable::build`], also returning the canonical form of
    /// every enumerated expansion.
    #[allow(clippy::type_complexity)]
    pub fn build_with_forms(
        sys: &System,
        groups: &[PermGroup],
        max_leaves: usize,
    ) -> (ObjectTable, Vec<Expansion>, Vec<Vec<Vec<u32>>>) {
        let expansions = sys.enumerate_expansions(max_leaves, 0);
        let certs: Vec<Vec<Vec<u32>>> = expansions
            .par_iter()
            .map(|x| canonical_form(&sys.materialize(x).shape(sys), Some(groups)).cert)
            .collect();
        let forms: HashSet<Vec<Vec<u32>>> = certs.iter().cloned().collect();
        (ObjectTable { max_leaves, nexpansions: expansions.len(), forms }, expansions, certs)
    }

    pub fn nforms(&self) -> usize {
        self.forms.len()
    }

    fn contains(&self, shape: &Shape, groups: &[PermGroup]) -> bool {
        assert!(shape.nedges() <= self.max_leaves, "objecthood queried beyond the object table");
        self.forms.contains(&canonical_form(shape, Some(groups)).cert)
    }
}

/// One class of simple π-contractions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionSite {
    pub color: u32,
    /// Leaf set (sorted), the image of the rule hyperedges.
    pub leaves: Vec<Address>,
    /// For each rule hyperedge `y`: its leaf and the permutation `π` with
    /// `φ(λ_y(i)) = λ_leaf(π(i))`.
    pub matching: Vec<(Address, Perm)>,
    /// Image of each rule boundary vertex.
    pub attachment: Vec<VName>,
    leaf_idx: Vec<usize>,
    edge_leaf: Vec<usize>,
    internal: Vec<u32>,
    attach: Vec<u32>,
}

impl ContractionSite {
    pub fn to_json(&self, sys: &System) -> Value {
        let rule = &sys.rules[self.color as usize];
        json!({
            "color": sys.colors[self.color as usize],
            "leaves": self.leaves.iter().map(|w| sys.addr_string(w)).collect::<Vec<_>>(),
            "match": self.matching.iter().enumerate().map(|(y, (w, p))| json!({
                "rule_edge": rule.graph.edges()[y].name,
                "leaf": sys.addr_string(w),
                "pi": p.to_one_line(),
            })).collect::<Vec<_>>(),
            "attachment": self.attachment.iter().map(|v| sys.vname_string(v)).collect::<Vec<_>>(),
        })
    }
}

/// Sites of one expansion together with the data needed to contract them.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub expansion: Expansion,
    pub mat: Materialized,
    pub shape: Shape,
    pub sites: Vec<ContractionSite>,
    /// Candidate site classes whose contraction is not an object.
    pub rejected: usize,
}

/// Result of the exact set-packing search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Packing {
    pub size: usize,
    /// Indices into `Analysis::sites`.
    pub witness: Vec<usize>,
    /// Size found by the greedy pass that seeds the search.
    pub greedy: usize,
}

/// Flag complex on site classes; simplices are the cliques of `adj`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexK {
    pub nvertices: usize,
    pub adj: Vec<Vec<bool>>,
    pub edges: Vec<(usize, usize)>,
    /// Disjoint pairs that are not parallel because their simultaneous
    /// contraction is not an object (always 0 in pairwise mode).
    pub rejected_pairs: usize,
    /// `Some(depth)` when some boundary group is only certified to that depth.
    pub certified_depth: Option<usize>,
}

/// A simplex `σ` with `m` vertices such that every vertex of the complex is
/// adjacent to all but at most `d` vertices of `σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grounding {
    pub m: usize,
    pub simplex: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Connectivity {
    pub m: usize,
    pub d: usize,
    /// `⌊m/d⌋ − 1`: the complex is at least this connected.
    pub bound: i64,
    /// Path-connectedness of the 1-skeleton, checked when `bound ≥ 0`.
    pub skeleton_connected: Option<bool>,
}

/// Contraction machinery for one tuple, with its object table.
pub struct Contractor<'a> {
    pub tuple: &'a Tuple,
    pub groups: Vec<PermGroup>,
    pub groups_exact: bool,
    /// Potentially shared boundary indices of each color.
    pub shared: Vec<u32>,
    pub table: ObjectTable,
    pub mode: Parallelism,
    /// Largest number of hyperedges in a rule.
    pub d: usize,
}

impl<'a> Contractor<'a> {
    pub fn new(tuple: &'a Tuple, max_leaves: usize, mode: Parallelism) -> Contractor<'a> {
        Contractor::with_expansions(tuple, max_leaves, mode).0
    }

    /// Like [`Contractor::new`], also returning the expansions enumerated
    /// for the object table.
    pub fn with_expansions(tuple: &'a Tuple, max_leaves: usize, mode: Parallelism) -> (Contractor<'a>, Vec<Expansion>) {
        let (c, expansions, _) = Contractor::with_forms(tuple, max_leaves, mode);
        (c, expansions)
    }

    #[allow(clippy::type_complexity)]
    fn with_forms(
        tuple: &'a Tuple,
        max_leaves: usize,
        mode: Parallelism,
    ) -> (Contractor<'a>, Vec<Expansion>, Vec<Vec<Vec<u32>>>) {
        let sys = &tuple.system;
        let mut groups = vec![];
        let mut groups_exact = true;
        for c in 0..sys.ncolors() as u32 {
            let bg = tuple.boundary_perm_group(c, tuple.depth);
            groups_exact &= bg.exact;
            groups.push(bg.group);
        }
        let shared = (0..sys.ncolors() as u32).map(|c| sys.shared_boundary_mask(c)).collect();
        let d = sys.rules.iter().map(|r| r.graph.nedges()).max().unwrap_or(0);
        let (table, expansions, certs) = ObjectTable::build_with_forms(sys, &groups, max_leaves);
        (Contractor { tuple, groups, groups_exact, shared, table, mode, d }, expansions, certs)
    }

    fn sys(&self) -> &System {
        &self.tuple.system
    }

    pub fn is_object(&self, shape: &Shape) -> bool {
        self.table.contains(shape, &self.groups)
    }

    /// Materializes `x` and finds all its site classes.
    pub fn analyze(&self, x: &Expansion) -> Result<Analysis, ContractError> {
        if x.leaves.len() > self.table.max_leaves + 1 {
            return Err(ContractError::TableTooSmall { needed: x.leaves.len() - 1, have: self.table.max_leaves });
        }
        let sys = self.sys();
        let mat = sys.materialize(x);
        let shape = mat.shape(sys);
        let (sites, rejected) = self.find_sites(&mat, &shape);
        Ok(Analysis { expansion: x.clone(), mat, shape, sites, rejected })
    }

    /// All site classes of the expansion, and the number of candidate
    /// classes rejected because their contraction is not an object.
    pub fn find_sites(&self, mat: &Materialized, shape: &Shape) -> (Vec<ContractionSite>, usize) {
        let sys = self.sys();
        let occ = shape.occurrences();
        let rel = shape.relevant_masks();
        let mut on_vertex: Vec<Vec<usize>> = vec![vec![]; shape.nverts];
        for (e, b) in shape.bnd.iter().enumerate() {
            for &v in b {
                if !on_vertex[v as usize].contains(&e) {
                    on_vertex[v as usize].push(e);
                }
            }
        }
        let mut by_color: Vec<Vec<usize>> = vec![vec![]; sys.ncolors()];
        for (e, &c) in shape.colors.iter().enumerate() {
            by_color[c as usize].push(e);
        }
        let mut sites = vec![];
        let mut rejected = 0;
        for k in 0..sys.ncolors() as u32 {
            if sys.is_trivial_color(k) || sys.rules[k as usize].graph.nedges() > shape.nedges() {
                continue;
            }
            let mut m = Matcher::new(self, k, shape, &occ, &rel, &on_vertex, &by_color);
            m.go(0);
            for (_, raw) in m.found {
                let mut site = raw;
                let result = contract_shape(shape, &[&site]);
                if self.is_object(&result) {
                    site.leaves = site.leaf_idx.iter().map(|&e| mat.leaves[e].clone()).collect();
                    site.attachment = site.attach.iter().map(|&v| mat.vertices[v as usize].clone()).collect();
                    for (y, (w, _)) in site.matching.iter_mut().enumerate() {
                        *w = mat.leaves[site.edge_leaf[y]].clone();
                    }
                    sites.push(site);
                } else {
                    rejected += 1;
                }
            }
        }
        sites.sort_by(|a, b| (a.color, &a.leaves, &a.attachment).cmp(&(b.color, &b.leaves, &b.attachment)));
        (sites, rejected)
    }

    /// Parallelism of sites `i` and `j` of `a` under the configured mode.
    pub fn are_parallel(&self, a: &Analysis, i: usize, j: usize) -> bool {
        let (s, t) = (&a.sites[i], &a.sites[j]);
        if i == j || !disjoint(&s.leaf_idx, &t.leaf_idx) {
            return false;
        }
        match self.mode {
            Parallelism::Pairwise => true,
            Parallelism::Strict => self.is_object(&contract_shape(&a.shape, &[s, t])),
        }
    }

    /// Hypergraph obtained by contracting the given sites simultaneously.
    pub fn contract(&self, a: &Analysis, sites: &[usize]) -> Shape {
        let refs: Vec<&ContractionSite> = sites.iter().map(|&i| &a.sites[i]).collect();
        contract_shape(&a.shape, &refs)
    }

    /// Maximum number of pairwise parallel sites, by branch and bound
    /// seeded with a greedy packing.
    pub fn max_parallel(&self, a: &Analysis) -> Packing {
        let n = a.sites.len();
        if n == 0 {
            return Packing { size: 0, witness: vec![], greedy: 0 };
        }
        let memo: RefCell<HashMap<(usize, usize), bool>> = RefCell::new(HashMap::new());
        let compat = |i: usize, j: usize| -> bool {
            let key = (i.min(j), i.max(j));
            if let Some(&b) = memo.borrow().get(&key) {
                return b;
            }
            let b = self.are_parallel(a, i, j);
            memo.borrow_mut().insert(key, b);
            b
        };
        // greedy: fewest overlaps first
        let overlaps: Vec<usize> = (0..n)
            .map(|i| (0..n).filter(|&j| j != i && !disjoint(&a.sites[i].leaf_idx, &a.sites[j].leaf_idx)).count())
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (overlaps[i], i));
        let mut greedy: Vec<usize> = vec![];
        for &i in &order {
            if greedy.iter().all(|&j| compat(i, j)) {
                greedy.push(i);
            }
        }
        let greedy_size = greedy.len();
        let mut best = greedy;
        let mut clique = vec![];
        let nleaves = a.mat.leaves.len();
        branch_and_bound(&mut clique, order, &mut best, &compat, a, nleaves);
        best.sort_unstable();
        Packing { size: best.len(), witness: best, greedy: greedy_size }
    }

    /// Flag complex on the sites of `a`, with an edge for every parallel pair.
    pub fn build_complex(&self, a: &Analysis) -> ComplexK {
        let n = a.sites.len();
        let mut adj = vec![vec![false; n]; n];
        let mut edges = vec![];
        let mut rejected_pairs = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.are_parallel(a, i, j) {
                    adj[i][j] = true;
                    adj[j][i] = true;
                    edges.push((i, j));
                } else if disjoint(&a.sites[i].leaf_idx, &a.sites[j].leaf_idx) {
                    rejected_pairs += 1;
                }
            }
        }
        let certified_depth = (!self.groups_exact).then_some(self.tuple.depth);
        ComplexK { nvertices: n, adj, edges, rejected_pairs, certified_depth }
    }
}

fn disjoint(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

fn branch_and_bound(
    clique: &mut Vec<usize>,
    cands: Vec<usize>,
    best: &mut Vec<usize>,
    compat: &dyn Fn(usize, usize) -> bool,
    a: &Analysis,
    nleaves: usize,
) {
    if clique.len() > best.len() {
        *best = clique.clone();
    }
    for pos in 0..cands.len() {
        let rest = &cands[pos..];
        if clique.len() + rest.len() <= best.len() {
            return;
        }
        // leaves still coverable by the remaining candidates bound the packing size
        let mut covered = vec![false; nleaves];
        let mut min_size = usize::MAX;
        for &s in rest {
            min_size = min_size.min(a.sites[s].leaf_idx.len());
            for &e in &a.sites[s].leaf_idx {
                covered[e] = true;
            }
        }
        let ncov = covered.iter().filter(|&&b| b).count();
        if clique.len() + ncov / min_size.max(1) <= best.len() {
            return;
        }
        let v = rest[0];
        let next: Vec<usize> = rest[1..].iter().copied().filter(|&u| compat(v, u)).collect();
        clique.push(v);
        branch_and_bound(clique, next, best, compat, a, nleaves);
        clique.pop();
    }
}

/// Contracts disjoint sites of `shape` simultaneously.
fn contract_shape(shape: &Shape, sites: &[&ContractionSite]) -> Shape {
    let mut gone_edge = vec![false; shape.nedges()];
    let mut gone_vertex = vec![false; shape.nverts];
    for s in sites {
        for &e in &s.leaf_idx {
            gone_edge[e] = true;
        }
        for &v in &s.internal {
            gone_vertex[v as usize] = true;
        }
    }
    let mut newid = vec![u32::MAX; shape.nverts];
    let mut n = 0u32;
    for v in 0..shape.nverts {
        if !gone_vertex[v] {
            newid[v] = n;
            n += 1;
        }
    }
    let mut colors = vec![];
    let mut bnd = vec![];
    for e in 0..shape.nedges() {
        if !gone_edge[e] {
            colors.push(shape.colors[e]);
            bnd.push(shape.bnd[e].iter().map(|&v| newid[v as usize]).collect());
        }
    }
    for s in sites {
        colors.push(s.color);
        bnd.push(s.attach.iter().map(|&v| newid[v as usize]).collect());
    }
    Shape { nverts: n as usize, colors, bnd }
}

type SiteKey = (Vec<usize>, Vec<Option<u32>>);

/// Backtracking search for copies of `R_k` in an expansion.
struct Matcher<'s> {
    sys: &'s System,
    k: u32,
    group: &'s PermGroup,
    shared_mask: u32,
    edge_groups: &'s [PermGroup],
    shape: &'s Shape,
    occ: &'s [u32],
    rel: &'s [u32],
    on_vertex: &'s [Vec<usize>],
    by_color: &'s [Vec<usize>],
    order: Vec<usize>,
    rule_occ: Vec<u32>,
    perms: BTreeMap<usize, Vec<Perm>>,
    phi: Vec<Option<u32>>,
    used_vertex: HashSet<u32>,
    used_leaf: HashSet<usize>,
    chosen: Vec<Option<(usize, Perm)>>,
    found: BTreeMap<SiteKey, ContractionSite>,
}

impl<'s> Matcher<'s> {
    fn new(
        c: &'s Contractor,
        k: u32,
        shape: &'s Shape,
        occ: &'s [u32],
        rel: &'s [u32],
        on_vertex: &'s [Vec<usize>],
        by_color: &'s [Vec<usize>],
    ) -> Matcher<'s> {
        let sys = c.sys();
        let rule = &sys.rules[k as usize];
        let g = &rule.graph;
        let mut rule_occ = vec![0u32; g.nverts()];
        for y in 0..g.nedges() {
            for &v in g.boundary(y) {
                rule_occ[v as usize] += 1;
            }
        }
        // breadth-first over shared rule vertices so constraints bite early
        let mut order = vec![];
        let mut placed = vec![false; g.nedges()];
        for start in 0..g.nedges() {
            if placed[start] {
                continue;
            }
            placed[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(y) = queue.pop_front() {
                order.push(y);
                for z in 0..g.nedges() {
                    if !placed[z] && g.boundary(z).iter().any(|v| g.boundary(y).contains(v)) {
                        placed[z] = true;
                        queue.push_back(z);
                    }
                }
            }
        }
        let perms = (0..g.nedges()).map(|y| g.boundary(y).len()).map(|d| (d, Perm::all(d))).collect();
        Matcher {
            sys,
            k,
            group: &c.groups[k as usize],
            shared_mask: c.shared[k as usize],
            edge_groups: &c.groups,
            shape,
            occ,
            rel,
            on_vertex,
            by_color,
            order,
            rule_occ,
            perms,
            phi: vec![None; g.nverts()],
            used_vertex: HashSet::new(),
            used_leaf: HashSet::new(),
            chosen: vec![None; g.nedges()],
            found: BTreeMap::new(),
        }
    }

    fn go(&mut self, pos: usize) {
        let rule = &self.sys.rules[self.k as usize];
        if pos == self.order.len() {
            self.record();
            return;
        }
        let y = self.order[pos];
        let ybnd = rule.graph.boundary(y).to_vec();
        let ycol = rule.edge_colors[y];
        // candidate leaves: through an already mapped vertex when possible
        let candidates: Vec<usize> = match ybnd.iter().find_map(|&u| self.phi[u as usize]) {
            Some(t) => self.on_vertex[t as usize].clone(),
            None => self.by_color[ycol as usize].clone(),
        };
        for e in candidates {
            if self.shape.colors[e] != ycol || self.used_leaf.contains(&e) {
                continue;
            }
            let perms = self.perms[&ybnd.len()].clone();
            for p in perms {
                if !self.edge_groups[ycol as usize].agrees_on(&p.inverse(), self.rel[e]) {
                    continue;
                }
                // try to extend φ
                let mut assigned = vec![];
                let mut ok = true;
                for (i, &u) in ybnd.iter().enumerate() {
                    let t = self.shape.bnd[e][p.apply(i)];
                    match self.phi[u as usize] {
                        Some(s) if s == t => {}
                        Some(_) => ok = false,
                        None => {
                            let internal = rule.bpos[u as usize].is_none();
                            if self.used_vertex.contains(&t)
                                || (internal && self.occ[t as usize] != self.rule_occ[u as usize])
                            {
                                ok = false;
                            } else {
                                self.phi[u as usize] = Some(t);
                                self.used_vertex.insert(t);
                                assigned.push(u);
                            }
                        }
                    }
                    if !ok {
                        break;
                    }
                }
                if ok {
                    self.used_leaf.insert(e);
                    self.chosen[y] = Some((e, p.clone()));
                    self.go(pos + 1);
                    self.chosen[y] = None;
                    self.used_leaf.remove(&e);
                }
                for u in assigned {
                    let t = self.phi[u as usize].take().unwrap();
                    self.used_vertex.remove(&t);
                }
            }
        }
    }

    fn record(&mut self) {
        let rule = &self.sys.rules[self.k as usize];
        let attach: Vec<u32> = rule.boundary.iter().map(|&u| self.phi[u as usize].unwrap()).collect();
        let mut leaf_idx: Vec<usize> = self.chosen.iter().map(|c| c.as_ref().unwrap().0).collect();
        leaf_idx.sort_unstable();
        let d = attach.len();
        let akey = self
            .group
            .elements
            .iter()
            .map(|g| {
                (0..d)
                    .map(|i| (self.shared_mask & (1 << i) != 0).then(|| attach[g.apply(i)]))
                    .collect::<Vec<_>>()
            })
            .min()
            .unwrap();
        let key = (leaf_idx.clone(), akey);
        if self.found.contains_key(&key) {
            return;
        }
        let internal: Vec<u32> = (0..rule.graph.nverts())
            .filter(|&u| rule.bpos[u].is_none())
            .map(|u| self.phi[u].unwrap())
            .collect();
        let edge_leaf: Vec<usize> = self.chosen.iter().map(|c| c.as_ref().unwrap().0).collect();
        let matching = self.chosen.iter().map(|c| (Address(vec![]), c.as_ref().unwrap().1.clone())).collect();
        self.found.insert(
            key,
            ContractionSite {
                color: self.k,
                leaves: vec![],
                matching,
                attachment: vec![],
                leaf_idx,
                edge_leaf,
                internal,
                attach,
            },
        );
    }
}

impl ComplexK {
    /// Maximal cliques (Bron–Kerbosch with pivoting).
    pub fn maximal_cliques(&self) -> Vec<Vec<usize>> {
        fn bk(adj: &[Vec<bool>], r: &mut Vec<usize>, p: Vec<usize>, x: Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if p.is_empty() && x.is_empty() {
                out.push(r.clone());
                return;
            }
            let pivot = *p.iter().chain(&x).max_by_key(|&&u| p.iter().filter(|&&v| adj[u][v]).count()).unwrap();
            let mut p = p;
            let mut x = x;
            let todo: Vec<usize> = p.iter().copied().filter(|&v| !adj[pivot][v]).collect();
            for v in todo {
                r.push(v);
                let np = p.iter().copied().filter(|&u| adj[v][u]).collect();
                let nx = x.iter().copied().filter(|&u| adj[v][u]).collect();
                bk(adj, r, np, nx, out);
                r.pop();
                p.retain(|&u| u != v);
                x.push(v);
            }
        }
        let mut out = vec![];
        if self.nvertices > 0 {
            bk(&self.adj, &mut vec![], (0..self.nvertices).collect(), vec![], &mut out);
        }
        out
    }

    /// Whether every vertex is adjacent to all but at most `d` vertices of `simplex`.
    pub fn is_ground(&self, simplex: &[usize], d: usize) -> bool {
        (0..self.nvertices).all(|v| simplex.iter().filter(|&&s| s != v && !self.adj[v][s]).count() <= d)
    }

    /// Largest ground simplex found among the maximal simplices (each
    /// shrunk greedily until it is ground).
    pub fn groundedness(&self, d: usize) -> Result<Grounding, ContractError> {
        if self.nvertices == 0 {
            return Err(ContractError::EmptyComplex);
        }
        let mut best = Grounding { m: 0, simplex: vec![] };
        for mut sigma in self.maximal_cliques() {
            loop {
                let violators: Vec<usize> = (0..self.nvertices)
                    .filter(|&v| sigma.iter().filter(|&&s| s != v && !self.adj[v][s]).count() > d)
                    .collect();
                if violators.is_empty() {
                    break;
                }
                let (k, _) = sigma
                    .iter()
                    .enumerate()
                    .map(|(k, &s)| (k, violators.iter().filter(|&&v| v != s && !self.adj[v][s]).count()))
                    .max_by_key(|&(k, c)| (c, std::cmp::Reverse(k)))
                    .unwrap();
                sigma.remove(k);
            }
            if sigma.len() > best.m {
                sigma.sort_unstable();
                best = Grounding { m: sigma.len(), simplex: sigma };
            }
        }
        Ok(best)
    }

    /// `⌊m/d⌋ − 1` for the best ground simplex, with path-connectedness of
    /// the 1-skeleton checked directly whenever the bound is nonnegative.
    pub fn connectivity_bound(&self, d: usize) -> Result<Connectivity, ContractError> {
        let g = self.groundedness(d)?;
        let bound = (g.m / d.max(1)) as i64 - 1;
        let skeleton_connected = (bound >= 0).then(|| self.skeleton_connected());
        Ok(Connectivity { m: g.m, d, bound, skeleton_connected })
    }

    pub fn skeleton_connected(&self) -> bool {
        if self.nvertices == 0 {
            return false;
        }
        let mut seen = vec![false; self.nvertices];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for u in 0..self.nvertices {
                if self.adj[v][u] && !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.iter().all(|&b| b)
    }

    pub fn to_dot(&self, labels: &[String]) -> String {
        let mut s = String::from("graph K {\n  node [shape=box];\n");
        for (i, l) in labels.iter().enumerate().take(self.nvertices) {
            s.push_str(&format!("  s{i} [label=\"{}\"];\n", l.replace('"', "\\\"")));
        }
        for &(i, j) in &self.edges {
            s.push_str(&format!("  s{i} -- s{j};\n"));
        }
        s.push_str("}\n");
        s
    }
}

/// Per-expansion line of a scan report.
#[derive(Clone, Debug, Serialize)]
pub struct ScanEntry {
    pub leaves: Vec<String>,
    pub nleaves: usize,
    pub nsites: usize,
    pub max_parallel: usize,
    pub greedy: usize,
    /// Leaf sets of a maximum parallel family (listed on class
    /// representatives only).
    pub witness: Vec<Vec<String>>,
    /// Entry of the π-isomorphic expansion that was analyzed in its place.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub representative: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complex: Option<ComplexSummary>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplexSummary {
    pub vertices: usize,
    pub edges: usize,
    /// Disjoint pairs rejected by the objecthood requirement.
    pub rejected_pairs: usize,
    pub grounded_m: usize,
    pub bound: i64,
    pub skeleton_connected: Option<bool>,
    /// The reported bound disagrees with `⌊max_parallel/d⌋ − 1`, or a
    /// nonnegative bound meets a disconnected 1-skeleton.
    pub contradiction: bool,
}

#[derive(Clone, Debug)]
pub struct ScanOptions {
    pub max_leaves: usize,
    pub target: usize,
    pub mode: Parallelism,
    /// Also build `K_x` for every expansion and check the connectivity bound.
    pub with_complex: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub max_leaves: usize,
    pub target: usize,
    pub d: usize,
    pub parallelism: Parallelism,
    pub boundary_groups_exact: bool,
    pub depth: usize,
    pub object_forms: usize,
    /// Number of π-isomorphism classes analyzed.
    pub classes: usize,
    pub entries: Vec<ScanEntry>,
    /// Indices into `entries` with `max_parallel < target`.
    pub exceptions: Vec<usize>,
    pub largest_exception: Option<usize>,
    /// All exceptions have fewer than `max_leaves − d` leaves.
    pub consistent: bool,
    pub complex_contradictions: usize,
}

impl ScanReport {
    pub fn verdict(&self) -> String {
        if self.consistent {
            format!("{}-contractivity consistent up to {} leaves", self.target, self.max_leaves)
        } else {
            format!(
                "{}-contractivity inconsistent: exceptions persist up to {} leaves",
                self.target,
                self.largest_exception.unwrap_or(0)
            )
        }
    }

    pub fn exception_entries(&self) -> impl Iterator<Item = &ScanEntry> {
        self.exceptions.iter().map(|&i| &self.entries[i])
    }

    pub fn to_json(&self, system: &str) -> Value {
        let mut v = serde_json::to_value(self).unwrap();
        v["system"] = json!(system);
        v["verdict"] = json!(self.verdict());
        v
    }
}

/// Enumerates every expansion with at most `max_leaves` leaves and records
/// the number of sites and of pairwise parallel sites of each.
///
/// Site counts, parallel families and `K_x` are invariant under
/// π-isomorphism, so one representative per canonical form is analyzed and
/// the other expansions of the class refer to it.
pub fn scan_contractivity(tuple: &Tuple, opts: &ScanOptions) -> ScanReport {
    let (c, expansions, certs) = Contractor::with_forms(tuple, opts.max_leaves, opts.mode);
    let sys = &tuple.system;
    let mut rep_of: HashMap<&Vec<Vec<u32>>, usize> = HashMap::new();
    let reps: Vec<usize> = certs.iter().enumerate().map(|(i, f)| *rep_of.entry(f).or_insert(i)).collect();
    let analyzed: HashMap<usize, ScanEntry> = reps
        .iter()
        .copied()
        .collect::<BTreeSet<usize>>()
        .into_par_iter()
        .map(|i| (i, analyze_entry(&c, &expansions[i], opts.with_complex)))
        .collect();
    let entries: Vec<ScanEntry> = expansions
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let r = &analyzed[&reps[i]];
            if reps[i] == i {
                r.clone()
            } else {
                ScanEntry {
                    leaves: x.leaves.iter().map(|w| sys.addr_string(w)).collect(),
                    witness: vec![],
                    representative: Some(reps[i]),
                    ..r.clone()
                }
            }
        })
        .collect();
    let exceptions: Vec<usize> = (0..entries.len()).filter(|&i| entries[i].max_parallel < opts.target).collect();
    let largest_exception = exceptions.iter().map(|&i| entries[i].nleaves).max();
    let consistent = largest_exception.is_none_or(|n| n + c.d < opts.max_leaves);
    let complex_contradictions =
        entries.iter().filter(|e| e.complex.as_ref().is_some_and(|s| s.contradiction)).count();
    ScanReport {
        max_leaves: opts.max_leaves,
        target: opts.target,
        d: c.d,
        parallelism: opts.mode,
        boundary_groups_exact: c.groups_exact,
        depth: tuple.depth,
        object_forms: c.table.nforms(),
        classes: analyzed.len(),
        entries,
        exceptions,
        largest_exception,
        consistent,
        complex_contradictions,
    }
}

fn analyze_entry(c: &Contractor, x: &Expansion, with_complex: bool) -> ScanEntry {
    let sys = c.sys();
    let a = c.analyze(x).expect("table covers every scanned expansion");
    let p = c.max_parallel(&a);
    let complex = with_complex.then(|| {
        let k = c.build_complex(&a);
        match k.connectivity_bound(c.d) {
            Ok(conn) => ComplexSummary {
                vertices: k.nvertices,
                edges: k.edges.len(),
                rejected_pairs: k.rejected_pairs,
                grounded_m: conn.m,
                bound: conn.bound,
                skeleton_connected: conn.skeleton_connected,
                contradiction: conn.bound != (p.size / c.d) as i64 - 1 || conn.skeleton_connected == Some(false),
            },
            Err(_) => ComplexSummary {
                vertices: 0,
                edges: 0,
                rejected_pairs: 0,
                grounded_m: 0,
                bound: -2,
                skeleton_connected: None,
                contradiction: false,
            },
        }
    });
    ScanEntry {
        leaves: x.leaves.iter().map(|w| sys.addr_string(w)).collect(),
        nleaves: x.leaves.len(),
        nsites: a.sites.len(),
        max_parallel: p.size,
        greedy: p.greedy,
        witness: p
            .witness
            .iter()
            .map(|&i| a.sites[i].leaves.iter().map(|w| sys.addr_string(w)).collect())
            .collect(),
        representative: None,
        complex,
    }
}
