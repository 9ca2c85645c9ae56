//! π-isomorphisms: composition, checking and exhaustive search.

use super::{Hypergraph, Shape};
use crate::perm::{Perm, PermGroup};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashSet};

/// Index-level π-isomorphism between two [`Shape`]s.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ShapeIso {
    pub vmap: Vec<u32>,
    pub emap: Vec<u32>,
    pub pi: Vec<Perm>,
}

impl ShapeIso {
    pub fn identity(shape: &Shape) -> ShapeIso {
        ShapeIso {
            vmap: (0..shape.nverts as u32).collect(),
            emap: (0..shape.nedges() as u32).collect(),
            pi: shape.bnd.iter().map(|b| Perm::identity(b.len())).collect(),
        }
    }

    /// Adjacency equation `f_V(λ_e(i)) = λ_{f_E(e)}(π_e(i))`, bijectivity,
    /// and preservation of colour and order.
    pub fn is_valid(&self, a: &Shape, b: &Shape) -> bool {
        if a.nverts != b.nverts || a.nedges() != b.nedges() {
            return false;
        }
        if self.vmap.len() != a.nverts || self.emap.len() != a.nedges() || self.pi.len() != a.nedges() {
            return false;
        }
        let bij = |m: &[u32], n: usize| {
            let mut seen = vec![false; n];
            m.iter().all(|&x| (x as usize) < n && !std::mem::replace(&mut seen[x as usize], true))
        };
        if !bij(&self.vmap, b.nverts) || !bij(&self.emap, b.nedges()) {
            return false;
        }
        (0..a.nedges()).all(|e| {
            let f = self.emap[e] as usize;
            let d = a.bnd[e].len();
            a.colors[e] == b.colors[f]
                && b.bnd[f].len() == d
                && self.pi[e].len() == d
                && (0..d).all(|i| self.vmap[a.bnd[e][i] as usize] == b.bnd[f][self.pi[e].apply(i)])
        })
    }

    /// `self ∘ g` where `g: A → B` and `self: B → C`.
    pub fn after(&self, g: &ShapeIso) -> ShapeIso {
        ShapeIso {
            vmap: g.vmap.iter().map(|&v| self.vmap[v as usize]).collect(),
            emap: g.emap.iter().map(|&e| self.emap[e as usize]).collect(),
            pi: g.emap.iter().zip(&g.pi).map(|(&e, tau)| self.pi[e as usize].compose(tau)).collect(),
        }
    }
}

/// Named π-isomorphism; permutations are written 1-based in JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiIsomorphism {
    pub vertex_map: BTreeMap<String, String>,
    pub edge_map: BTreeMap<String, String>,
    pub pi: BTreeMap<String, Perm>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PiIsoError {
    #[error("codomain of the first map does not match the domain of the second")]
    DomainMismatch,
}

impl PiIsomorphism {
    pub fn from_shape_iso(iso: &ShapeIso, a: &Hypergraph, b: &Hypergraph) -> PiIsomorphism {
        PiIsomorphism {
            vertex_map: a
                .vertices()
                .iter()
                .zip(&iso.vmap)
                .map(|(v, &w)| (v.clone(), b.vertices()[w as usize].clone()))
                .collect(),
            edge_map: a
                .edges()
                .iter()
                .zip(&iso.emap)
                .map(|(e, &f)| (e.name.clone(), b.edges()[f as usize].name.clone()))
                .collect(),
            pi: a.edges().iter().zip(&iso.pi).map(|(e, p)| (e.name.clone(), p.clone())).collect(),
        }
    }

    pub fn to_shape_iso(&self, a: &Hypergraph, b: &Hypergraph) -> Option<ShapeIso> {
        Some(ShapeIso {
            vmap: a
                .vertices()
                .iter()
                .map(|v| b.vertex_id(self.vertex_map.get(v)?))
                .collect::<Option<_>>()?,
            emap: a
                .edges()
                .iter()
                .map(|e| b.edge_id(self.edge_map.get(&e.name)?))
                .collect::<Option<_>>()?,
            pi: a.edges().iter().map(|e| self.pi.get(&e.name).cloned()).collect::<Option<_>>()?,
        })
    }

    /// Whether this is a π-isomorphism `a → b` (colours and orders preserved,
    /// maps bijective, adjacency equation holds at every `(e, i)`).
    pub fn check(&self, a: &Hypergraph, b: &Hypergraph) -> bool {
        let (sa, sb) = shapes_of(a, b);
        self.to_shape_iso(a, b).is_some_and(|iso| iso.is_valid(&sa, &sb))
    }
}

/// Shapes of two hypergraphs with a common colour numbering.
pub(crate) fn shapes_of(a: &Hypergraph, b: &Hypergraph) -> (Shape, Shape) {
    let names: Vec<String> = a.colors().union(&b.colors()).cloned().collect();
    let id = |c: &str| names.iter().position(|n| n == c).unwrap() as u32;
    (a.shape_with(&id), b.shape_with(&id))
}

/// `f ∘ g` for `g: A → B` and `f: B → C`, with `π_e = σ_{g(e)} ∘ τ_e`.
pub fn compose_pi_isomorphisms(f: &PiIsomorphism, g: &PiIsomorphism) -> Result<PiIsomorphism, PiIsoError> {
    let img_v: HashSet<&String> = g.vertex_map.values().collect();
    let img_e: HashSet<&String> = g.edge_map.values().collect();
    let dom_v: HashSet<&String> = f.vertex_map.keys().collect();
    let dom_e: HashSet<&String> = f.edge_map.keys().collect();
    if img_v != dom_v || img_e != dom_e {
        return Err(PiIsoError::DomainMismatch);
    }
    let mut pi = BTreeMap::new();
    for (e, tau) in &g.pi {
        let ge = g.edge_map.get(e).ok_or(PiIsoError::DomainMismatch)?;
        let sigma = f.pi.get(ge).ok_or(PiIsoError::DomainMismatch)?;
        if sigma.len() != tau.len() {
            return Err(PiIsoError::DomainMismatch);
        }
        pi.insert(e.clone(), sigma.compose(tau));
    }
    Ok(PiIsomorphism {
        vertex_map: g.vertex_map.iter().map(|(v, w)| (v.clone(), f.vertex_map[w].clone())).collect(),
        edge_map: g.edge_map.iter().map(|(e, h)| (e.clone(), f.edge_map[h].clone())).collect(),
        pi,
    })
}

struct Search<'a> {
    a: &'a Shape,
    b: &'a Shape,
    allowed: &'a [PermGroup],
    order: Vec<usize>,
    rel: Vec<u32>,
    occ_a: Vec<u32>,
    occ_b: Vec<u32>,
    deg_a: Vec<u32>,
    deg_b: Vec<u32>,
    profile_a: Vec<Vec<(u32, u32)>>,
    profile_b: Vec<Vec<(u32, u32)>>,
    perms: BTreeMap<usize, Vec<Perm>>,
    vmap: Vec<Option<u32>>,
    vinv: Vec<Option<u32>>,
    emap: Vec<u32>,
    used: Vec<bool>,
    pi: Vec<Perm>,
    seen: HashSet<(Vec<u32>, Vec<u32>)>,
    out: Vec<ShapeIso>,
}

impl Search<'_> {
    fn go(&mut self, k: usize) {
        if k == self.order.len() {
            let vmap: Vec<u32> = self.vmap.iter().map(|v| v.unwrap()).collect();
            if self.seen.insert((vmap.clone(), self.emap.clone())) {
                self.out.push(ShapeIso { vmap, emap: self.emap.clone(), pi: self.pi.clone() });
            }
            return;
        }
        let e = self.order[k];
        let d = self.a.bnd[e].len();
        let group = &self.allowed[self.a.colors[e] as usize];
        for f in 0..self.b.nedges() {
            if self.used[f]
                || self.b.colors[f] != self.a.colors[e]
                || self.b.bnd[f].len() != d
                || self.profile_a[e] != self.profile_b[f]
            {
                continue;
            }
            for pi in self.perms[&d].clone() {
                if !group.agrees_on(&pi, self.rel[e]) {
                    continue;
                }
                let mut assigned = vec![];
                let mut ok = true;
                for i in 0..d {
                    let v = self.a.bnd[e][i] as usize;
                    let w = self.b.bnd[f][pi.apply(i)];
                    match self.vmap[v] {
                        Some(x) if x == w => {}
                        Some(_) => ok = false,
                        None => {
                            if self.vinv[w as usize].is_some()
                                || self.occ_a[v] != self.occ_b[w as usize]
                                || self.deg_a[v] != self.deg_b[w as usize]
                            {
                                ok = false;
                            } else {
                                self.vmap[v] = Some(w);
                                self.vinv[w as usize] = Some(v as u32);
                                assigned.push(v);
                            }
                        }
                    }
                    if !ok {
                        break;
                    }
                }
                if ok {
                    self.used[f] = true;
                    self.emap[e] = f as u32;
                    self.pi[e] = pi.clone();
                    self.go(k + 1);
                    self.used[f] = false;
                }
                for v in assigned {
                    let w = self.vmap[v].take().unwrap();
                    self.vinv[w as usize] = None;
                }
            }
        }
    }
}

/// All π-isomorphisms `a → b` with `π_e ∈ allowed[colour(e)]`.  Maps are
/// deduplicated by their vertex and edge bijections (permutations that differ
/// only on repeated boundary vertices define the same map); for each the
/// lexicographically least permutation tuple is reported.
pub fn find_shape_isos(a: &Shape, b: &Shape, allowed: &[PermGroup]) -> Vec<ShapeIso> {
    if a.nverts != b.nverts || a.nedges() != b.nedges() {
        return vec![];
    }
    let mut ca = a.colors.clone();
    let mut cb = b.colors.clone();
    ca.sort_unstable();
    cb.sort_unstable();
    if ca != cb {
        return vec![];
    }
    // breadth-first edge order so that vertex constraints bite early
    let mut order = vec![];
    let mut placed = vec![false; a.nedges()];
    let mut on_vertex: Vec<Vec<usize>> = vec![vec![]; a.nverts];
    for (e, bd) in a.bnd.iter().enumerate() {
        for &v in bd {
            on_vertex[v as usize].push(e);
        }
    }
    for start in 0..a.nedges() {
        if placed[start] {
            continue;
        }
        placed[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(e) = queue.pop_front() {
            order.push(e);
            for &v in &a.bnd[e] {
                for &f in &on_vertex[v as usize] {
                    if !placed[f] {
                        placed[f] = true;
                        queue.push_back(f);
                    }
                }
            }
        }
    }
    let (occ_a, occ_b) = (a.occurrences(), b.occurrences());
    let (deg_a, deg_b) = (a.edge_degrees(), b.edge_degrees());
    let profile = |s: &Shape, occ: &[u32], deg: &[u32]| -> Vec<Vec<(u32, u32)>> {
        s.bnd
            .iter()
            .map(|bd| {
                let mut p: Vec<(u32, u32)> = bd.iter().map(|&v| (occ[v as usize], deg[v as usize])).collect();
                p.sort_unstable();
                p
            })
            .collect()
    };
    let profile_a = profile(a, &occ_a, &deg_a);
    let profile_b = profile(b, &occ_b, &deg_b);
    let perms = a.bnd.iter().map(|bd| bd.len()).map(|d| (d, Perm::all(d))).collect();
    let mut s = Search {
        a,
        b,
        allowed,
        order,
        rel: a.bnd.iter().map(|bd| (1u32 << bd.len()) - 1).collect(),
        occ_a,
        occ_b,
        deg_a,
        deg_b,
        profile_a,
        profile_b,
        perms,
        vmap: vec![None; a.nverts],
        vinv: vec![None; b.nverts],
        emap: vec![0; a.nedges()],
        used: vec![false; b.nedges()],
        pi: a.bnd.iter().map(|bd| Perm::identity(bd.len())).collect(),
        seen: HashSet::new(),
        out: vec![],
    };
    s.go(0);
    s.out
}

/// Named front end of [`find_shape_isos`]; `allowed` maps colour names to
/// groups, defaulting to the trivial group for colours not listed.
pub fn find_pi_isomorphisms(
    a: &Hypergraph,
    b: &Hypergraph,
    allowed: &BTreeMap<String, PermGroup>,
) -> Vec<PiIsomorphism> {
    let names: Vec<String> = a.colors().union(&b.colors()).cloned().collect();
    let id = |c: &str| names.iter().position(|n| n == c).unwrap() as u32;
    let (sa, sb) = (a.shape_with(&id), b.shape_with(&id));
    let orders: BTreeMap<&String, usize> = a.edges().iter().map(|e| (&e.color, e.boundary.len())).collect();
    let groups: Vec<PermGroup> = names
        .iter()
        .map(|c| {
            let d = orders.get(c).copied().unwrap_or(2);
            allowed.get(c).cloned().unwrap_or_else(|| PermGroup::trivial(d))
        })
        .collect();
    find_shape_isos(&sa, &sb, &groups)
        .iter()
        .map(|iso| PiIsomorphism::from_shape_iso(iso, a, b))
        .collect()
}
