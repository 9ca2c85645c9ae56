//! The gluing relation as a finite safety automaton over pairs of letters,
//! exact decisions on eventually periodic addresses, and point classification.

use crate::replacement::{Expansion, System, VName};
use crate::shiftlang::{Address, Ctx, Ray};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

/// Equality pattern of a boundary: entry `i` is the smallest index whose
/// vertex equals the `i`-th one.
pub type Pattern = Vec<u8>;

/// Relation between boundary indices of two prefixes: bit `8 i + j` is set
/// when the `i`-th vertex of the first equals the `j`-th vertex of the second.
pub type Relation = u64;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum State {
    Start,
    /// Both prefixes coincide; the current color and its boundary pattern.
    Equal(u32, Pattern),
    /// Distinct prefixes of colors `a`, `b` sharing the vertices in the relation.
    Pair(u32, u32, Relation),
}

/// Trimmed gluing automaton.  Missing transitions lead to the dead state.
#[derive(Clone, Debug)]
pub struct GluingAutomaton {
    pub states: Vec<State>,
    pub index: HashMap<State, usize>,
    /// `(state, x, y) -> state` on letter pairs, letters indexed in context.
    pub delta: HashMap<(usize, u16, u16), usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GluingError {
    #[error("the replacement system is not almost expanding")]
    NotAlmostExpanding,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PointClass {
    Regular,
    /// The represented vertex, and the depth at which it first appears.
    Singular { vertex: String, depth: usize },
    /// The shortest prefix of trivial color.
    Isolated { prefix: String },
}

fn pattern_of(bnd: &[u32]) -> Pattern {
    bnd.iter().map(|v| bnd.iter().position(|w| w == v).unwrap() as u8).collect()
}

fn rel_has(r: Relation, i: usize, j: usize) -> bool {
    r & (1u64 << (8 * i + j)) != 0
}

fn rel_pairs(r: Relation) -> Vec<(usize, usize)> {
    (0..64).filter(|b| r & (1u64 << b) != 0).map(|b| (b / 8, b % 8)).collect()
}

impl System {
    /// Successor of `state` on the letter pair `(x, y)`; `None` is the dead state.
    pub fn glue_step(&self, state: &State, x: u16, y: u16) -> Option<State> {
        match state {
            State::Start => {
                let bx = self.letter_boundary(Ctx::Base, x);
                let by = self.letter_boundary(Ctx::Base, y);
                if x == y {
                    return Some(State::Equal(self.base_colors[x as usize], pattern_of(bx)));
                }
                let mut r = 0;
                for (i, a) in bx.iter().enumerate() {
                    for (j, b) in by.iter().enumerate() {
                        if a == b {
                            r |= 1 << (8 * i + j);
                        }
                    }
                }
                (r != 0).then(|| State::Pair(self.base_colors[x as usize], self.base_colors[y as usize], r))
            }
            State::Equal(c, pat) => {
                let rule = &self.rules[*c as usize];
                // rule vertices modulo the identification of equal boundary vertices
                let class = |v: u32| -> (bool, u32) {
                    match rule.bpos[v as usize] {
                        Some(p) => (true, pat[p] as u32),
                        None => (false, v),
                    }
                };
                let bx: Vec<(bool, u32)> = rule.graph.boundary(x as usize).iter().map(|&v| class(v)).collect();
                if x == y {
                    let keys: Vec<(bool, u32)> = bx.clone();
                    let p = keys.iter().map(|k| keys.iter().position(|w| w == k).unwrap() as u8).collect();
                    return Some(State::Equal(rule.edge_colors[x as usize], p));
                }
                let by: Vec<(bool, u32)> = rule.graph.boundary(y as usize).iter().map(|&v| class(v)).collect();
                let mut r = 0;
                for (i, a) in bx.iter().enumerate() {
                    for (j, b) in by.iter().enumerate() {
                        if a == b {
                            r |= 1 << (8 * i + j);
                        }
                    }
                }
                (r != 0).then(|| State::Pair(rule.edge_colors[x as usize], rule.edge_colors[y as usize], r))
            }
            State::Pair(ca, cb, m) => {
                let ra = &self.rules[*ca as usize];
                let rb = &self.rules[*cb as usize];
                let bx = ra.graph.boundary(x as usize);
                let by = rb.graph.boundary(y as usize);
                let mut r = 0;
                for (j, &v) in bx.iter().enumerate() {
                    let Some(i) = ra.bpos[v as usize] else { continue };
                    for (jj, &w) in by.iter().enumerate() {
                        let Some(ii) = rb.bpos[w as usize] else { continue };
                        if rel_has(*m, i, ii) {
                            r |= 1 << (8 * j + jj);
                        }
                    }
                }
                (r != 0).then(|| State::Pair(ra.edge_colors[x as usize], rb.edge_colors[y as usize], r))
            }
        }
    }

    /// Letter contexts of the two components of a state.
    fn state_ctx(&self, s: &State) -> (Ctx, Ctx) {
        match s {
            State::Start => (Ctx::Base, Ctx::Base),
            State::Equal(c, _) => (Ctx::Color(*c), Ctx::Color(*c)),
            State::Pair(a, b, _) => (Ctx::Color(*a), Ctx::Color(*b)),
        }
    }

    /// Builds the trimmed gluing automaton.
    pub fn gluing_automaton(&self) -> Result<GluingAutomaton, GluingError> {
        if !self.is_almost_expanding() {
            return Err(GluingError::NotAlmostExpanding);
        }
        let mut states = vec![State::Start];
        let mut index: HashMap<State, usize> = HashMap::from([(State::Start, 0)]);
        let mut delta = HashMap::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(k) = queue.pop_front() {
            let s = states[k].clone();
            let (ca, cb) = self.state_ctx(&s);
            for x in 0..self.nletters(ca) as u16 {
                for y in 0..self.nletters(cb) as u16 {
                    if let Some(t) = self.glue_step(&s, x, y) {
                        let id = *index.entry(t.clone()).or_insert_with(|| {
                            states.push(t);
                            queue.push_back(states.len() - 1);
                            states.len() - 1
                        });
                        delta.insert((k, x, y), id);
                    }
                }
            }
        }
        // trim: keep states with an infinite run
        let mut live = vec![true; states.len()];
        loop {
            let mut changed = false;
            for k in 0..states.len() {
                if live[k] && !delta.iter().any(|(&(s, _, _), &t)| s == k && live[t]) {
                    live[k] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let keep: Vec<usize> = (0..states.len()).filter(|&k| live[k]).collect();
        let renum: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let new_states: Vec<State> = keep.iter().map(|&k| states[k].clone()).collect();
        let new_delta = delta
            .into_iter()
            .filter_map(|((s, x, y), t)| Some(((*renum.get(&s)?, x, y), *renum.get(&t)?)))
            .collect();
        let new_index = new_states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Ok(GluingAutomaton { states: new_states, index: new_index, delta: new_delta })
    }
}

impl GluingAutomaton {
    pub fn nstates(&self) -> usize {
        self.states.len()
    }

    pub fn start(&self) -> Option<usize> {
        self.index.get(&State::Start).copied()
    }

    /// Whether `α ∼ β`: the joint run never dies.  Exact, by detecting a
    /// repeated (state, phase of α, phase of β).
    pub fn decide(&self, alpha: &Ray, beta: &Ray) -> bool {
        let Some(mut s) = self.start() else { return false };
        let mut seen: HashSet<(usize, usize, usize)> = HashSet::new();
        let (pa, pb) = (alpha.prefix.len(), beta.prefix.len());
        let mut n = 0usize;
        loop {
            if n >= pa && n >= pb {
                let key = (s, (n - pa) % alpha.period.len(), (n - pb) % beta.period.len());
                if !seen.insert(key) {
                    return true;
                }
            }
            match self.delta.get(&(s, alpha.letter(n), beta.letter(n))) {
                Some(&t) => s = t,
                None => return false,
            }
            n += 1;
        }
    }

    /// A run from `q` that never dies: the letter pairs before the cycle and
    /// the cycle itself (always the smallest available pair).
    pub fn lasso_from(&self, q: usize) -> (Vec<(u16, u16)>, Vec<(u16, u16)>) {
        let mut visited: Vec<usize> = vec![q];
        let mut pairs = vec![];
        let mut s = q;
        loop {
            let (&(_, x, y), &t) = self
                .delta
                .iter()
                .filter(|(&(from, _, _), _)| from == s)
                .min_by_key(|(&(_, x, y), _)| (x, y))
                .expect("trimmed automaton has no dead ends");
            pairs.push((x, y));
            if let Some(k) = visited.iter().position(|&v| v == t) {
                let cycle = pairs.split_off(k);
                return (pairs, cycle);
            }
            visited.push(t);
            s = t;
        }
    }

    /// Human-readable state label in identification-matrix notation.
    pub fn state_label(&self, sys: &System, k: usize) -> String {
        match &self.states[k] {
            State::Start => "q-1".into(),
            State::Equal(c, pat) => {
                if pat.iter().enumerate().all(|(i, &p)| p as usize == i) {
                    format!("q0[{}]", sys.colors[*c as usize])
                } else {
                    format!("q0[{}; {:?}]", sys.colors[*c as usize], pat)
                }
            }
            State::Pair(a, b, r) => {
                let da = sys.order(*a);
                let top: Vec<String> = (1..=da).map(|i| i.to_string()).collect();
                let bottom: Vec<String> = (0..da)
                    .map(|i| {
                        let js: Vec<String> =
                            (0..sys.order(*b)).filter(|&j| rel_has(*r, i, j)).map(|j| (j + 1).to_string()).collect();
                        match js.len() {
                            0 => "0".into(),
                            1 => js[0].clone(),
                            _ => format!("{{{}}}", js.join(",")),
                        }
                    })
                    .collect();
                let colors = if sys.ncolors() > 1 {
                    format!("[{},{}]", sys.colors[*a as usize], sys.colors[*b as usize])
                } else {
                    String::new()
                };
                format!("q1{colors}({} / {})", top.join(" "), bottom.join(" "))
            }
        }
    }

    pub fn to_dot(&self, sys: &System) -> String {
        let mut out = String::from("digraph gluing {\n  rankdir=LR;\n");
        for k in 0..self.nstates() {
            out.push_str(&format!("  s{k} [label=\"{}\"];\n", self.state_label(sys, k)));
        }
        let mut grouped: BTreeMap<(usize, usize), Vec<String>> = BTreeMap::new();
        for (&(s, x, y), &t) in &self.delta {
            let (ca, cb) = sys.state_ctx(&self.states[s]);
            grouped
                .entry((s, t))
                .or_default()
                .push(format!("({},{})", sys.letter_name(ca, x), sys.letter_name(cb, y)));
        }
        for ((s, t), mut labels) in grouped {
            labels.sort();
            out.push_str(&format!("  s{s} -> s{t} [label=\"{}\"];\n", labels.join(" ")));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self, sys: &System) -> serde_json::Value {
        let mut transitions: Vec<serde_json::Value> = self
            .delta
            .iter()
            .map(|(&(s, x, y), &t)| {
                let (ca, cb) = sys.state_ctx(&self.states[s]);
                serde_json::json!({
                    "from": self.state_label(sys, s),
                    "letters": [sys.letter_name(ca, x), sys.letter_name(cb, y)],
                    "to": self.state_label(sys, t),
                })
            })
            .collect();
        transitions.sort_by_key(|v| v.to_string());
        serde_json::json!({
            "states": (0..self.nstates()).map(|k| {
                let (kind, rel) = match &self.states[k] {
                    State::Start => ("start", vec![]),
                    State::Equal(..) => ("equal", vec![]),
                    State::Pair(_, _, r) => ("pair", rel_pairs(*r).into_iter().map(|(i, j)| [i + 1, j + 1]).collect()),
                };
                serde_json::json!({"label": self.state_label(sys, k), "kind": kind, "matching": rel})
            }).collect::<Vec<_>>(),
            "transitions": transitions,
        })
    }
}

impl System {
    /// One step of vertex tracking: indices of letter `x` (read in context
    /// color `c`) whose vertex is one of the boundary vertices in `t`.
    pub fn track_step(&self, c: u32, t: u32, x: u16) -> u32 {
        let r = &self.rules[c as usize];
        r.graph
            .boundary(x as usize)
            .iter()
            .enumerate()
            .filter(|(_, &v)| r.bpos[v as usize].is_some_and(|p| t & (1 << p) != 0))
            .fold(0, |acc, (j, _)| acc | (1 << j))
    }

    /// Whether tracking the index set `t` of the prefix of `ray` of length
    /// `n` (color `c`) survives forever.
    fn tracking_survives(&self, ray: &Ray, n: usize, mut t: u32) -> bool {
        let mut seen: HashSet<(usize, u32)> = HashSet::new();
        let mut k = n;
        let mut c = self.color_after(ray.start, &ray.unroll(n));
        loop {
            if t == 0 {
                return false;
            }
            if k >= ray.prefix.len() && !seen.insert(((k - ray.prefix.len()) % ray.period.len(), t)) {
                return true;
            }
            let x = ray.letter(k);
            t = self.track_step(c, t, x);
            c = self.letter_color(Ctx::Color(c), x);
            k += 1;
        }
    }

    /// Singular / isolated / regular classification of the point addressed by `α`.
    pub fn classify_point(&self, alpha: &Ray) -> PointClass {
        if let Ctx::Color(c) = alpha.start {
            let cone = self.cone_system(c);
            let mut prefix = vec![0];
            prefix.extend(&alpha.prefix);
            let r = Ray::new(&cone, Ctx::Base, prefix, alpha.period.clone()).expect("cone ray");
            return cone.classify_point(&r);
        }
        let horizon = alpha.prefix.len() + alpha.period.len();
        let mut ctx = alpha.start;
        for k in 0..horizon {
            let c = self.letter_color(ctx, alpha.letter(k));
            if self.is_trivial_color(c) {
                return PointClass::Isolated { prefix: self.word_string(alpha.start, &alpha.unroll(k + 1)) };
            }
            ctx = Ctx::Color(c);
        }
        for n in 1..=horizon {
            let w = alpha.unroll(n);
            let bnd: Vec<VName> = self.boundary_of(&Address(w));
            for i in 0..bnd.len() {
                let t = (0..bnd.len()).filter(|&j| bnd[j] == bnd[i]).fold(0u32, |a, j| a | (1 << j));
                if self.tracking_survives(alpha, n, t) {
                    return PointClass::Singular { vertex: self.vname_string(&bnd[i]), depth: n };
                }
            }
        }
        PointClass::Regular
    }

    /// Occurrences `(leaf, index)` of the uniform refinement of `x` to the
    /// given depth (trivial colors are not refined), grouped by vertex.
    pub fn glued_vertex_classes(&self, x: &Expansion, depth: usize) -> Vec<Vec<(Address, usize)>> {
        let mut x = x.clone();
        loop {
            let next = x.leaves.iter().find(|w| {
                w.depth() < depth && self.rules[self.color_of(w) as usize].graph.nedges() >= 2
            });
            match next.cloned() {
                Some(w) => x = self.expand_hyperedge(&x, &w).unwrap(),
                None => break,
            }
        }
        let m = self.materialize(&x);
        let mut classes: BTreeMap<VName, Vec<(Address, usize)>> = BTreeMap::new();
        for (w, b) in m.leaves.iter().zip(&m.boundaries) {
            for (i, v) in b.iter().enumerate() {
                classes.entry(v.clone()).or_default().push((w.clone(), i));
            }
        }
        classes.into_values().collect()
    }
}

/// The pairs `(i, j)` (0-based) of a relation.
pub fn relation_pairs(r: Relation) -> BTreeSet<(usize, usize)> {
    rel_pairs(r).into_iter().collect()
}

impl System {
    /// An eventually periodic address extending `w` that represents the
    /// vertex at boundary index `i` of `w`, if that vertex persists forever.
    pub fn vertex_ray(&self, w: &Address, i: usize) -> Option<Ray> {
        let bnd = self.boundary_of(w);
        let t = (0..bnd.len()).filter(|&j| bnd[j] == bnd[i]).fold(0u32, |a, j| a | (1 << j));
        let c = self.color_of(w);
        let mut path: Vec<(u32, u32)> = vec![];
        let mut letters: Vec<u16> = vec![];
        let mut dead: HashSet<(u32, u32)> = HashSet::new();
        if !self.lasso(c, t, &mut path, &mut letters, &mut dead) {
            return None;
        }
        // the last letter closes a cycle onto some node of the path
        let last = letters.len();
        let (c_end, t_end) = {
            let (pc, pt) = path[last - 1];
            let x = letters[last - 1];
            (self.letter_color(Ctx::Color(pc), x), self.track_step(pc, pt, x))
        };
        let k = path.iter().position(|&n| n == (c_end, t_end)).unwrap();
        let mut prefix = w.0.clone();
        prefix.extend_from_slice(&letters[..k]);
        Ray::new(self, Ctx::Base, prefix, letters[k..].to_vec())
    }

    fn lasso(
        &self,
        c: u32,
        t: u32,
        path: &mut Vec<(u32, u32)>,
        letters: &mut Vec<u16>,
        dead: &mut HashSet<(u32, u32)>,
    ) -> bool {
        if dead.contains(&(c, t)) {
            return false;
        }
        path.push((c, t));
        for x in 0..self.nletters(Ctx::Color(c)) as u16 {
            let t2 = self.track_step(c, t, x);
            if t2 == 0 {
                continue;
            }
            let c2 = self.letter_color(Ctx::Color(c), x);
            letters.push(x);
            if path.contains(&(c2, t2)) || self.lasso(c2, t2, path, letters, dead) {
                return true;
            }
            letters.pop();
        }
        path.pop();
        dead.insert((c, t));
        false
    }
}

impl System {
    /// Rule-boundary indices of color `c` that are shared with another cell
    /// in some expansion (bit `i` = index `i`).  Points at the other indices
    /// are never on the topological boundary of a `c`-cell.
    pub fn shared_boundary_mask(&self, c: u32) -> u32 {
        fn visit(
            graph: &crate::hypergraph::Hypergraph,
            colors: &[u32],
            inherited: &dyn Fn(u32) -> bool,
            shared: &mut [u32],
        ) -> bool {
            let mut occ = vec![0usize; graph.nverts()];
            for e in 0..graph.nedges() {
                for &v in graph.boundary(e) {
                    occ[v as usize] += 1;
                }
            }
            let mut changed = false;
            for e in 0..graph.nedges() {
                for (i, &v) in graph.boundary(e).iter().enumerate() {
                    if (occ[v as usize] >= 2 || inherited(v)) && shared[colors[e] as usize] & (1 << i) == 0 {
                        shared[colors[e] as usize] |= 1 << i;
                        changed = true;
                    }
                }
            }
            changed
        }
        let n = self.ncolors();
        let mut shared = vec![0u32; n];
        loop {
            let mut changed = visit(&self.base, &self.base_colors, &|_| false, &mut shared);
            for k in 0..n {
                if self.class.reachable[k] {
                    let r = &self.rules[k];
                    let mask = shared[k];
                    let inherited = |v: u32| r.bpos[v as usize].is_some_and(|j| mask & (1 << j) != 0);
                    changed |= visit(&r.graph, &r.edge_colors, &inherited, &mut shared);
                }
            }
            if !changed {
                return shared[c as usize];
            }
        }
    }
}
