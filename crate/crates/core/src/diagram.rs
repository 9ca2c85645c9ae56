//! Elements of the expansion-based group: labeled π-isomorphisms between two
//! expansions, with rewriting (expansion and minimization), composition,
//! inversion, equality and the action on addresses.

use crate::perm::Perm;
use crate::replacement::{BoundaryFlag, Expansion, ExpansionError, System, VName};
use crate::selfsim::{GroupWord, Triviality, Tuple, TupleError, Undetermined};
use crate::shiftlang::{Address, Ctx, Ray};
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

/// Default maximal length of candidate labels searched by `minimize`.
pub const MINIMIZE_WORD_LENGTH: usize = 8;
/// Cap on the number of candidate label words tried per sibling family.
const MINIMIZE_CANDIDATES: usize = 20_000;

/// Image data of one domain leaf.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub to: Address,
    pub label: GroupWord,
    pub pi: Perm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    pub domain: Expansion,
    pub range: Expansion,
    pub map: BTreeMap<Address, Cell>,
    /// Labels of parents removed by expansion, reused as merge candidates.
    pub provenance: BTreeMap<Address, GroupWord>,
    /// Notes on how much of the validation or minimization is certified.
    pub certificate: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DiagramError {
    #[error("malformed diagram: {0}")]
    Malformed(String),
    #[error("leaf {0}: label, leaf and image colors do not agree")]
    ColorMismatch(String),
    #[error("inconsistent vertex map at {0}")]
    VertexMapInconsistent(String),
    #[error("leaf {leaf}: the label does not send boundary point {index} to boundary point pi({index})")]
    BoundaryConditionViolated { leaf: String, index: usize },
    #[error("leaf {0}: the label does not restrict to a bijection of boundary points")]
    LabelDoesNotRestrict(String),
    #[error("the leaf map is not a bijection: {0}")]
    NotABijection(String),
    #[error("{0} is not a domain leaf")]
    NotALeaf(String),
    #[error("{0} is not covered by the domain")]
    NotCovered(String),
    #[error(transparent)]
    Expansion(#[from] ExpansionError),
    #[error(transparent)]
    Tuple(#[from] TupleError),
    #[error(transparent)]
    Undetermined(#[from] Undetermined),
}

/// Leaves of the common refinement of two expansions.
pub fn join_leaves(a: &Expansion, b: &Expansion) -> BTreeSet<Address> {
    let all: BTreeSet<&Address> = a.leaves.iter().chain(&b.leaves).collect();
    all.iter()
        .filter(|w| !all.iter().any(|v| v.0.len() > w.0.len() && w.is_prefix_of(&v.0)))
        .map(|w| (*w).clone())
        .collect()
}

impl Diagram {
    /// The identity diagram on an expansion.
    pub fn identity(t: &Tuple, x: &Expansion) -> Diagram {
        let sys = &t.system;
        let map = x
            .leaves
            .iter()
            .map(|w| {
                let c = sys.color_of(w);
                (w.clone(), Cell { to: w.clone(), label: GroupWord::identity(c), pi: Perm::identity(sys.order(c)) })
            })
            .collect();
        Diagram { domain: x.clone(), range: x.clone(), map, provenance: BTreeMap::new(), certificate: vec![] }
    }

    /// Parses the `"map"` of a diagram document and validates it.
    pub fn from_json(t: &Tuple, v: &Value) -> Result<Diagram, DiagramError> {
        let sys = &t.system;
        let entries = v
            .get("map")
            .and_then(|m| m.as_array())
            .ok_or_else(|| DiagramError::Malformed("missing \"map\" array".into()))?;
        let mut map = BTreeMap::new();
        let mut to_set = BTreeSet::new();
        for e in entries {
            let field = |k: &str| {
                e.get(k).and_then(|x| x.as_str()).ok_or_else(|| DiagramError::Malformed(format!("entry needs string \"{k}\"")))
            };
            let from = sys.parse_addr(field("from")?).map_err(|err| DiagramError::Malformed(err.to_string()))?;
            let to = sys.parse_addr(field("to")?).map_err(|err| DiagramError::Malformed(err.to_string()))?;
            let c = sys.color_of(&from);
            let label = t.parse_word(c, e.get("label").and_then(|x| x.as_str()).unwrap_or(""))?;
            let pi = match e.get("pi") {
                None => Perm::identity(sys.order(c)),
                Some(p) => {
                    let v: Vec<usize> = serde_json::from_value(p.clone()).map_err(|err| DiagramError::Malformed(err.to_string()))?;
                    Perm::from_one_line(&v).ok_or_else(|| DiagramError::Malformed(format!("pi {v:?} is not a permutation")))?
                }
            };
            if !to_set.insert(to.clone()) {
                return Err(DiagramError::NotABijection(format!("{} is hit twice", sys.addr_string(&to))));
            }
            if map.insert(from.clone(), Cell { to, label, pi }).is_some() {
                return Err(DiagramError::NotABijection(format!("{} appears twice", sys.addr_string(&from))));
            }
        }
        let domain = sys.expansion_from_leaves(map.keys().cloned().collect())?;
        let range = sys.expansion_from_leaves(to_set)?;
        let d = Diagram { domain, range, map, provenance: BTreeMap::new(), certificate: vec![] };
        d.validate(t)?;
        Ok(d)
    }

    pub fn to_json(&self, t: &Tuple, system: &str, tuple: &str) -> Value {
        let sys = &t.system;
        json!({
            "system": system,
            "tuple": tuple,
            "map": self.map.iter().map(|(from, c)| json!({
                "from": sys.addr_string(from),
                "to": sys.addr_string(&c.to),
                "label": t.word_string(&c.label),
                "pi": c.pi.to_one_line(),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn nleaves(&self) -> usize {
        self.map.len()
    }

    /// Checks colors, the induced vertex map, and the boundary conditions.
    pub fn validate(&self, t: &Tuple) -> Result<(), DiagramError> {
        let sys = &t.system;
        let name = |w: &Address| sys.addr_string(w);
        if self.map.len() != self.range.leaves.len() || self.map.values().any(|c| !self.range.leaves.contains(&c.to)) {
            return Err(DiagramError::NotABijection("domain and range leaves do not correspond".into()));
        }
        let md = sys.materialize(&self.domain);
        let mr = sys.materialize(&self.range);
        let mut vmap: HashMap<&VName, &VName> = HashMap::new();
        for (k, (e, cell)) in self.map.iter().enumerate() {
            let c = sys.color_of(e);
            if cell.label.color != c || sys.color_of(&cell.to) != c || cell.pi.len() != sys.order(c) {
                return Err(DiagramError::ColorMismatch(name(e)));
            }
            let bd = &md.boundaries[k];
            let br = &mr.boundaries[mr.leaf_index(&cell.to).unwrap()];
            for (i, v) in bd.iter().enumerate() {
                let w = &br[cell.pi.apply(i)];
                if let Some(old) = vmap.insert(v, w) {
                    if old != w {
                        return Err(DiagramError::VertexMapInconsistent(format!(
                            "{} (vertex {} sent to both {} and {})",
                            name(e),
                            sys.vname_string(v),
                            sys.vname_string(old),
                            sys.vname_string(w)
                        )));
                    }
                }
            }
        }
        let images: HashSet<&&VName> = vmap.values().collect();
        if images.len() != vmap.len() || vmap.len() != mr.vertices.len() {
            return Err(DiagramError::VertexMapInconsistent("the vertex map is not a bijection".into()));
        }
        for (e, cell) in &self.map {
            let flags = md.boundary_status(e)?;
            let Some(b) = t.boundary_perm(&cell.label) else {
                return Err(DiagramError::LabelDoesNotRestrict(name(e)));
            };
            for (i, f) in flags.iter().enumerate() {
                if *f == BoundaryFlag::TopologicalBoundary && b.apply(i) != cell.pi.apply(i) {
                    return Err(DiagramError::BoundaryConditionViolated { leaf: name(e), index: i + 1 });
                }
            }
        }
        Ok(())
    }

    /// Expansion rewriting at the domain leaf `e`.
    pub fn expand(&self, t: &Tuple, e: &Address) -> Result<Diagram, DiagramError> {
        let sys = &t.system;
        let cell = self.map.get(e).ok_or_else(|| DiagramError::NotALeaf(sys.addr_string(e)))?;
        let c = sys.color_of(e);
        let mut out = self.clone();
        out.map.remove(e);
        out.domain = sys.expand_hyperedge(&self.domain, e)?;
        out.range = sys.expand_hyperedge(&self.range, &cell.to)?;
        for x in 0..sys.nletters(Ctx::Color(c)) as u16 {
            let y = t.top_image(&cell.label, x);
            let label = t.state_at(&cell.label, x);
            let pi = t.boundary_perm(&label).ok_or_else(|| DiagramError::LabelDoesNotRestrict(sys.addr_string(&e.child(x))))?;
            out.map.insert(e.child(x), Cell { to: cell.to.child(y), label, pi });
        }
        if !cell.label.is_empty() {
            out.provenance.insert(e.clone(), cell.label.clone());
        }
        Ok(out)
    }

    /// Expands domain leaves until the domain is the given refinement.
    pub fn expand_domain_to(&self, t: &Tuple, target: &BTreeSet<Address>) -> Result<Diagram, DiagramError> {
        let mut d = self.clone();
        loop {
            let next = d.map.keys().find(|w| !target.contains(*w) && target.iter().any(|v| w.is_prefix_of(&v.0))).cloned();
            match next {
                Some(w) => d = d.expand(t, &w)?,
                None => return Ok(d),
            }
        }
    }

    /// Expands until the range is the given refinement.
    pub fn expand_range_to(&self, t: &Tuple, target: &BTreeSet<Address>) -> Result<Diagram, DiagramError> {
        let mut d = self.clone();
        loop {
            let next = d
                .map
                .iter()
                .find(|(_, c)| !target.contains(&c.to) && target.iter().any(|v| c.to.is_prefix_of(&v.0)))
                .map(|(w, _)| w.clone());
            match next {
                Some(w) => d = d.expand(t, &w)?,
                None => return Ok(d),
            }
        }
    }

    /// `self ∘ g` (apply `g` first).
    pub fn compose(&self, t: &Tuple, g: &Diagram) -> Result<Diagram, DiagramError> {
        let join = join_leaves(&self.domain, &g.range);
        let f = self.expand_domain_to(t, &join)?;
        let g = g.expand_range_to(t, &join)?;
        let mut map = BTreeMap::new();
        for (e, gc) in &g.map {
            let fc = &f.map[&gc.to];
            map.insert(
                e.clone(),
                Cell { to: fc.to.clone(), label: t.mul(&fc.label, &gc.label), pi: fc.pi.compose(&gc.pi) },
            );
        }
        Ok(Diagram { domain: g.domain, range: f.range, map, provenance: BTreeMap::new(), certificate: vec![] })
    }

    pub fn invert(&self, t: &Tuple) -> Diagram {
        let map = self
            .map
            .iter()
            .map(|(e, c)| (c.to.clone(), Cell { to: e.clone(), label: t.inverse(&c.label), pi: c.pi.inverse() }))
            .collect();
        Diagram {
            domain: self.range.clone(),
            range: self.domain.clone(),
            map,
            provenance: BTreeMap::new(),
            certificate: self.certificate.clone(),
        }
    }

    /// Same action: compares leaf maps, labels (word problem) and `pi` on
    /// topological-boundary indices after aligning the domains.
    pub fn equal(&self, t: &Tuple, g: &Diagram) -> Result<bool, DiagramError> {
        let sys = &t.system;
        let join = join_leaves(&self.domain, &g.domain);
        let f = self.expand_domain_to(t, &join)?;
        let g = g.expand_domain_to(t, &join)?;
        let md = sys.materialize(&f.domain);
        for (e, fc) in &f.map {
            let gc = &g.map[e];
            let c = sys.color_of(e);
            if sys.is_trivial_color(c) {
                // an isolated point: only the image cell matters
                if cell_key(sys, &fc.to) != cell_key(sys, &gc.to) {
                    return Ok(false);
                }
                continue;
            }
            if fc.to != gc.to {
                return Ok(false);
            }
            match t.is_trivial(&t.mul(&fc.label, &t.inverse(&gc.label))) {
                Triviality::Yes => {}
                Triviality::No(_) => return Ok(false),
                Triviality::Undetermined(b) => return Err(Undetermined(b).into()),
            }
            let flags = md.boundary_status(e)?;
            for (i, fl) in flags.iter().enumerate() {
                if *fl == BoundaryFlag::TopologicalBoundary && fc.pi.apply(i) != gc.pi.apply(i) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Image of an eventually periodic address.
    pub fn apply(&self, t: &Tuple, alpha: &Ray) -> Result<Ray, DiagramError> {
        let sys = &t.system;
        let (e, cell) = self
            .map
            .iter()
            .find(|(e, _)| alpha.starts_with(&e.0))
            .ok_or_else(|| DiagramError::NotCovered(sys.ray_string(alpha)))?;
        let tail = alpha.shift(sys, e.0.len());
        let image = t.act_ray(&cell.label, &tail)?;
        Ok(image.prepend(sys, Ctx::Base, &cell.to.0))
    }

    /// Reverses expansions greedily until no sibling family can be merged,
    /// then canonicalizes `pi` off the topological boundary.
    pub fn minimize(&self, t: &Tuple) -> Diagram {
        let mut d = self.clone();
        let mut exhausted = false;
        'outer: loop {
            let parents: BTreeSet<Address> =
                d.map.keys().filter(|w| w.0.len() > 1).map(|w| Address(w.0[..w.0.len() - 1].to_vec())).collect();
            for p in parents.iter().rev() {
                match d.try_merge(t, p) {
                    Merge::Merged(m) => {
                        d = m;
                        continue 'outer;
                    }
                    Merge::SearchExhausted => exhausted = true,
                    Merge::No => {}
                }
            }
            break;
        }
        d.canonicalize_pi(t);
        d.provenance.clear();
        d.certificate.push(format!(
            "minimized with candidate labels from provenance and words of length <= {MINIMIZE_WORD_LENGTH}{}",
            if exhausted { "; some families were left unmerged after an exhaustive bounded search" } else { "" }
        ));
        d
    }

    fn try_merge(&self, t: &Tuple, p: &Address) -> Merge {
        let sys = &t.system;
        let c = sys.color_of(p);
        let n = sys.nletters(Ctx::Color(c)) as u16;
        let kids: Vec<Address> = (0..n).map(|x| p.child(x)).collect();
        if kids.iter().any(|k| !self.map.contains_key(k)) {
            return Merge::No;
        }
        // all images must be the children of one address of the same color
        let first = &self.map[&kids[0]].to;
        if first.0.len() < 2 {
            return Merge::No;
        }
        let r = Address(first.0[..first.0.len() - 1].to_vec());
        if sys.color_of(&r) != c {
            return Merge::No;
        }
        let mut sigma = vec![];
        for k in &kids {
            let to = &self.map[k].to;
            if to.0.len() != first.0.len() || !r.is_prefix_of(&to.0) {
                return Merge::No;
            }
            sigma.push(*to.0.last().unwrap());
        }
        let child_labels: Vec<&GroupWord> = kids.iter().map(|k| &self.map[k].label).collect();
        let fits = |l: &GroupWord| {
            (0..n).all(|x| {
                t.top_image(l, x) == sigma[x as usize]
                    && matches!(t.is_trivial(&t.mul(&t.state_at(l, x), &t.inverse(child_labels[x as usize]))), Triviality::Yes)
            })
        };
        let mut candidates: Vec<GroupWord> = vec![];
        if let Some(l) = self.provenance.get(p) {
            candidates.push(l.clone());
        }
        let found = candidates.into_iter().find(|l| fits(l)).or_else(|| {
            bounded_words(t, c, MINIMIZE_WORD_LENGTH, MINIMIZE_CANDIDATES).into_iter().find(|l| fits(l))
        });
        let Some(label) = found else { return Merge::SearchExhausted };
        let Some(pi) = t.boundary_perm(&label) else { return Merge::No };
        let mut m = self.clone();
        for k in &kids {
            m.map.remove(k);
        }
        m.map.insert(p.clone(), Cell { to: r.clone(), label, pi });
        let mut dl = m.domain.leaves.clone();
        let mut rl = m.range.leaves.clone();
        for k in &kids {
            dl.remove(k);
            rl.remove(&self.map[k].to);
        }
        dl.insert(p.clone());
        rl.insert(r);
        m.domain = Expansion { leaves: dl };
        m.range = Expansion { leaves: rl };
        // the merged datum must be valid and expand back to the same element
        if m.validate(t).is_err() {
            return Merge::No;
        }
        match m.expand(t, p).and_then(|x| x.equal(t, self)) {
            Ok(true) => Merge::Merged(m),
            _ => Merge::No,
        }
    }

    /// Lexicographically least `pi` agreeing on topological-boundary indices
    /// and keeping the diagram valid.
    fn canonicalize_pi(&mut self, t: &Tuple) {
        let sys = &t.system;
        let md = sys.materialize(&self.domain);
        let keys: Vec<Address> = self.map.keys().cloned().collect();
        for e in keys {
            let flags = md.boundary_status(&e).unwrap();
            let cur = self.map[&e].pi.clone();
            if flags.iter().all(|f| *f == BoundaryFlag::TopologicalBoundary) {
                continue;
            }
            for cand in Perm::all(cur.len()) {
                if cand == cur {
                    break;
                }
                let agrees = flags.iter().enumerate().all(|(i, f)| *f != BoundaryFlag::TopologicalBoundary || cand.apply(i) == cur.apply(i));
                if !agrees {
                    continue;
                }
                self.map.get_mut(&e).unwrap().pi = cand;
                if self.validate(t).is_ok() {
                    break;
                }
                self.map.get_mut(&e).unwrap().pi = cur.clone();
            }
        }
    }
}

enum Merge {
    Merged(Diagram),
    /// No candidate label found within the search bounds.
    SearchExhausted,
    No,
}

/// Address of a cell with trailing trivial-color steps removed.
pub fn cell_key(sys: &System, w: &Address) -> Address {
    let mut v = w.0.clone();
    while v.len() > 1 && sys.is_trivial_color(sys.color_of(&Address(v[..v.len() - 1].to_vec()))) {
        v.pop();
    }
    Address(v)
}

/// Reduced words of color `c` of length at most `max_len`, shortest first,
/// deduplicated, at most `cap` of them.
fn bounded_words(t: &Tuple, c: u32, max_len: usize, cap: usize) -> Vec<GroupWord> {
    let gens = &t.by_color[c as usize];
    let mut seen: HashSet<GroupWord> = HashSet::new();
    let id = GroupWord::identity(c);
    seen.insert(id.clone());
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(w) = queue.pop_front() {
        if w.syms.len() >= max_len {
            continue;
        }
        for &g in gens {
            for inv in [false, true] {
                let s = GroupWord { color: c, syms: vec![crate::selfsim::Sym { gen: g, inv }] };
                let v = t.mul(&w, &s);
                if v.syms.len() == w.syms.len() + 1 && seen.insert(v.clone()) {
                    out.push(v.clone());
                    if out.len() >= cap {
                        return out;
                    }
                    queue.push_back(v);
                }
            }
        }
    }
    out
}
