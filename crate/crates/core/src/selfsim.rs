//! Self-similar tuples: per-color groups of automorphisms of the colored
//! address tree, given by generators with a top action on letters and a
//! state (restriction) at every letter.
//!
//! Group words multiply like functions: `a.b` means "apply `b`, then `a`".

use crate::perm::{Perm, PermGroup};
use crate::replacement::System;
use crate::shiftlang::{Ctx, Ray};
use serde::Serialize;
use serde_json::{json, Map, Value};
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex};

/// Default cap on distinct reduced words visited by the word-problem oracle.
pub const DEFAULT_BUDGET: usize = 100_000;
/// Default certification depth for boundary and compatibility checks.
pub const DEFAULT_DEPTH: usize = 32;

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sym {
    pub gen: u16,
    pub inv: bool,
}

/// An element of `G_c`, as a product of signed generators of color `c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupWord {
    pub color: u32,
    pub syms: Vec<Sym>,
}

impl GroupWord {
    pub fn identity(color: u32) -> GroupWord {
        GroupWord { color, syms: vec![] }
    }

    pub fn is_empty(&self) -> bool {
        self.syms.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct Generator {
    pub name: String,
    pub color: u32,
    /// Top action on the letters of the rule of `color`.
    pub perm: Vec<u16>,
    pub inv_perm: Vec<u16>,
    /// State at each letter (a word in the letter's color).
    pub states: Vec<GroupWord>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TupleError {
    #[error("unknown color {0:?}")]
    UnknownColor(String),
    #[error("color {color}: unknown letter {letter:?}")]
    UnknownLetter { color: String, letter: String },
    #[error("color {color}: unknown generator {name:?}")]
    UnknownGenerator { color: String, name: String },
    #[error("generator {0}: top action is not a bijection of the letters")]
    NotABijection(String),
    #[error("generator {gen}: letter {letter} is sent to a letter of another color")]
    ColorNotPreserved { gen: String, letter: String },
    #[error("generator {0} is declared twice")]
    DuplicateGenerator(String),
    #[error("malformed tuple: {0}")]
    Malformed(String),
    #[error("letter sequence is not a valid word at position {0}")]
    InvalidSuffix(usize),
}

/// Outcome of the word-problem oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Triviality {
    Yes,
    /// A finite word (read from the element's color) that is moved.
    No(Vec<u16>),
    /// The budget of distinct reduced words was exhausted.
    Undetermined(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("state orbit exceeded the budget of {0}")]
pub struct Undetermined(pub usize);

/// Where an element sends a rule-boundary point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundaryAction {
    /// A bijection of the boundary points; `exact` is false when the check
    /// stopped at the certification depth.
    Perm { perm: Perm, exact: bool, depth: usize },
    /// Some boundary point is not sent to a boundary point.
    DoesNotRestrict { index: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryGroup {
    pub group: PermGroup,
    /// Generators whose action does not restrict to the boundary.
    pub excluded: Vec<String>,
    pub exact: bool,
    pub depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum GeneratorVerdict {
    Compatible { exact: bool, depth: usize },
    /// A glued pair whose image (under the generator or its inverse) is not glued.
    Incompatible { inverse: bool, witness: (String, String) },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompatibilityReport {
    pub depth: usize,
    pub generators: Vec<(String, String, GeneratorVerdict)>,
}

impl CompatibilityReport {
    pub fn compatible(&self) -> bool {
        self.generators.iter().all(|(_, _, v)| matches!(v, GeneratorVerdict::Compatible { .. }))
    }

    pub fn exact(&self) -> bool {
        self.generators.iter().all(|(_, _, v)| matches!(v, GeneratorVerdict::Compatible { exact: true, .. }))
    }
}

/// A self-similar tuple over a replacement system.
#[derive(Clone, Debug)]
pub struct Tuple {
    pub system: System,
    pub gens: Vec<Generator>,
    /// Generators of each color, as indices into `gens`.
    pub by_color: Vec<Vec<u16>>,
    /// Generators known to be involutions.
    pub involution: Vec<bool>,
    pub budget: usize,
    /// Depth used when a boundary action cannot be settled exactly.
    pub depth: usize,
    cache: Arc<Mutex<HashMap<GroupWord, bool>>>,
    bcache: Arc<Mutex<HashMap<GroupWord, Option<Perm>>>>,
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>, TupleError> {
    v.as_object().ok_or_else(|| TupleError::Malformed(format!("{what} must be an object")))
}

impl Tuple {
    /// The tuple of trivial groups.
    pub fn trivial(sys: &System) -> Tuple {
        Tuple::from_json(sys, &json!({"groups": {}})).unwrap()
    }

    pub fn from_json(sys: &System, v: &Value) -> Result<Tuple, TupleError> {
        let groups = as_object(v.get("groups").ok_or_else(|| TupleError::Malformed("missing \"groups\"".into()))?, "groups")?;
        // first pass: generator names per color
        let mut gens: Vec<Generator> = vec![];
        let mut by_color = vec![vec![]; sys.ncolors()];
        let mut raw = vec![];
        for (cname, g) in groups {
            let c = sys.color_id(cname).ok_or_else(|| TupleError::UnknownColor(cname.clone()))?;
            let table = match g.get("generators") {
                Some(t) => as_object(t, "generators")?,
                None => continue,
            };
            for (name, body) in table {
                if by_color[c as usize].iter().any(|&k: &u16| gens[k as usize].name == *name) {
                    return Err(TupleError::DuplicateGenerator(name.clone()));
                }
                by_color[c as usize].push(gens.len() as u16);
                let n = sys.nletters(Ctx::Color(c));
                gens.push(Generator {
                    name: name.clone(),
                    color: c,
                    perm: (0..n as u16).collect(),
                    inv_perm: (0..n as u16).collect(),
                    states: vec![],
                });
                raw.push(body.clone());
            }
        }
        let mut t = Tuple {
            system: sys.clone(),
            gens,
            by_color,
            involution: vec![],
            budget: DEFAULT_BUDGET,
            depth: DEFAULT_DEPTH,
            cache: Arc::new(Mutex::new(HashMap::new())),
            bcache: Arc::new(Mutex::new(HashMap::new())),
        };
        // second pass: perms and states
        for (k, body) in raw.iter().enumerate() {
            let c = t.gens[k].color;
            let ctx = Ctx::Color(c);
            let n = sys.nletters(ctx);
            let cname = sys.colors[c as usize].clone();
            let letter = |s: &str| {
                sys.letter_index(ctx, s).ok_or_else(|| TupleError::UnknownLetter { color: cname.clone(), letter: s.into() })
            };
            let name = t.gens[k].name.clone();
            let mut perm: Vec<u16> = (0..n as u16).collect();
            if let Some(p) = body.get("perm") {
                for (x, y) in as_object(p, "perm")? {
                    let y = y.as_str().ok_or_else(|| TupleError::Malformed("perm images must be strings".into()))?;
                    perm[letter(x)? as usize] = letter(y)?;
                }
            }
            let mut seen = vec![false; n];
            for &y in &perm {
                if std::mem::replace(&mut seen[y as usize], true) {
                    return Err(TupleError::NotABijection(name));
                }
            }
            for x in 0..n as u16 {
                if sys.letter_color(ctx, x) != sys.letter_color(ctx, perm[x as usize]) {
                    return Err(TupleError::ColorNotPreserved { gen: name, letter: sys.letter_name(ctx, x).into() });
                }
            }
            let mut states: Vec<GroupWord> = (0..n as u16).map(|x| GroupWord::identity(sys.letter_color(ctx, x))).collect();
            if let Some(s) = body.get("states") {
                for (x, w) in as_object(s, "states")? {
                    let x = letter(x)?;
                    let w = w.as_str().ok_or_else(|| TupleError::Malformed("states must be strings".into()))?;
                    states[x as usize] = t.parse_word(sys.letter_color(ctx, x), w)?;
                }
            }
            let mut inv_perm = vec![0; n];
            for (x, &y) in perm.iter().enumerate() {
                inv_perm[y as usize] = x as u16;
            }
            t.gens[k].perm = perm;
            t.gens[k].inv_perm = inv_perm;
            t.gens[k].states = states;
        }
        t.involution = vec![false; t.gens.len()];
        for k in 0..t.gens.len() {
            let g = Sym { gen: k as u16, inv: false };
            let sq = GroupWord { color: t.gens[k].color, syms: vec![g, g] };
            t.involution[k] = matches!(t.is_trivial_with(&sq, 10_000), Triviality::Yes);
        }
        t.cache.lock().unwrap().clear();
        Ok(t)
    }

    pub fn to_json(&self) -> Value {
        let mut groups = Map::new();
        for (c, ks) in self.by_color.iter().enumerate() {
            if ks.is_empty() {
                continue;
            }
            let ctx = Ctx::Color(c as u32);
            let mut table = Map::new();
            for &k in ks {
                let g = &self.gens[k as usize];
                let mut perm = Map::new();
                let mut states = Map::new();
                for x in 0..g.perm.len() as u16 {
                    if g.perm[x as usize] != x {
                        perm.insert(
                            self.system.letter_name(ctx, x).into(),
                            self.system.letter_name(ctx, g.perm[x as usize]).into(),
                        );
                    }
                    if !g.states[x as usize].is_empty() {
                        states.insert(self.system.letter_name(ctx, x).into(), self.word_string(&g.states[x as usize]).into());
                    }
                }
                table.insert(g.name.clone(), json!({"perm": perm, "states": states}));
            }
            groups.insert(self.system.colors[c].clone(), json!({"generators": table}));
        }
        json!({ "groups": groups })
    }

    pub fn generator(&self, color: u32, name: &str) -> Option<u16> {
        self.by_color[color as usize].iter().copied().find(|&k| self.gens[k as usize].name == name)
    }

    /// Parses `"a.b'"` (= a·b⁻¹); the empty string is the identity.
    pub fn parse_word(&self, color: u32, s: &str) -> Result<GroupWord, TupleError> {
        let mut syms = vec![];
        for part in s.split('.').filter(|p| !p.is_empty()) {
            let (name, inv) = match part.strip_suffix('\'') {
                Some(n) => (n, true),
                None => (part, false),
            };
            let gen = self.generator(color, name).ok_or_else(|| TupleError::UnknownGenerator {
                color: self.system.colors[color as usize].clone(),
                name: name.into(),
            })?;
            syms.push(Sym { gen, inv });
        }
        Ok(GroupWord { color, syms })
    }

    pub fn word_string(&self, w: &GroupWord) -> String {
        w.syms
            .iter()
            .map(|s| format!("{}{}", self.gens[s.gen as usize].name, if s.inv { "'" } else { "" }))
            .collect::<Vec<_>>()
            .join(".")
    }

    pub fn inverse(&self, w: &GroupWord) -> GroupWord {
        GroupWord { color: w.color, syms: w.syms.iter().rev().map(|s| Sym { gen: s.gen, inv: !s.inv }).collect() }
    }

    /// `a · b` (apply `b` first).
    pub fn mul(&self, a: &GroupWord, b: &GroupWord) -> GroupWord {
        assert_eq!(a.color, b.color, "multiplying words of different colors");
        let mut syms = a.syms.clone();
        syms.extend_from_slice(&b.syms);
        self.reduce(&GroupWord { color: a.color, syms })
    }

    pub fn pow(&self, w: &GroupWord, n: usize) -> GroupWord {
        (0..n).fold(GroupWord::identity(w.color), |acc, _| self.mul(&acc, w))
    }

    /// Free reduction, with inverses of known involutions rewritten.
    pub fn reduce(&self, w: &GroupWord) -> GroupWord {
        let mut out: Vec<Sym> = vec![];
        for &s in &w.syms {
            let s = if s.inv && self.involution.get(s.gen as usize) == Some(&true) { Sym { gen: s.gen, inv: false } } else { s };
            match out.last() {
                Some(t) if t.gen == s.gen && (t.inv != s.inv || (!s.inv && self.involution.get(s.gen as usize) == Some(&true))) => {
                    out.pop();
                }
                _ => out.push(s),
            }
        }
        GroupWord { color: w.color, syms: out }
    }

    fn sym_top(&self, s: Sym, x: u16) -> u16 {
        let g = &self.gens[s.gen as usize];
        if s.inv { g.inv_perm[x as usize] } else { g.perm[x as usize] }
    }

    fn sym_state(&self, s: Sym, x: u16) -> GroupWord {
        let g = &self.gens[s.gen as usize];
        if s.inv {
            self.inverse(&g.states[g.inv_perm[x as usize] as usize])
        } else {
            g.states[x as usize].clone()
        }
    }

    /// `ŵ(x)`: the image of a letter of the rule of `w.color`.
    pub fn top_image(&self, w: &GroupWord, x: u16) -> u16 {
        w.syms.iter().rev().fold(x, |y, &s| self.sym_top(s, y))
    }

    /// `w|x`, reduced.
    pub fn state_at(&self, w: &GroupWord, x: u16) -> GroupWord {
        let color = self.system.letter_color(Ctx::Color(w.color), x);
        let mut parts: Vec<GroupWord> = vec![];
        let mut y = x;
        for &s in w.syms.iter().rev() {
            parts.push(self.sym_state(s, y));
            y = self.sym_top(s, y);
        }
        let mut syms = vec![];
        for p in parts.iter().rev() {
            syms.extend_from_slice(&p.syms);
        }
        self.reduce(&GroupWord { color, syms })
    }

    fn check_word(&self, color: u32, u: &[u16]) -> Result<(), TupleError> {
        let mut c = color;
        for (i, &x) in u.iter().enumerate() {
            if x as usize >= self.system.nletters(Ctx::Color(c)) {
                return Err(TupleError::InvalidSuffix(i + 1));
            }
            c = self.system.letter_color(Ctx::Color(c), x);
        }
        Ok(())
    }

    /// `w|u` for a word `u` read from the color of `w`.
    pub fn state_of(&self, w: &GroupWord, u: &[u16]) -> Result<GroupWord, TupleError> {
        self.check_word(w.color, u)?;
        Ok(u.iter().fold(w.clone(), |s, &x| self.state_at(&s, x)))
    }

    /// The image of a finite word `u` read from the color of `w`.
    pub fn act_word(&self, w: &GroupWord, u: &[u16]) -> Result<Vec<u16>, TupleError> {
        self.check_word(w.color, u)?;
        let mut s = w.clone();
        let mut out = vec![];
        for &x in u {
            out.push(self.top_image(&s, x));
            s = self.state_at(&s, x);
        }
        Ok(out)
    }

    /// The image of an eventually periodic address read from the color of `w`.
    pub fn act_ray(&self, w: &GroupWord, r: &Ray) -> Result<Ray, Undetermined> {
        assert_eq!(r.start, Ctx::Color(w.color));
        let mut s = self.reduce(w);
        let mut out = vec![];
        for &x in &r.prefix {
            out.push(self.top_image(&s, x));
            s = self.state_at(&s, x);
        }
        let mut seen: HashMap<GroupWord, usize> = HashMap::new();
        loop {
            if let Some(&k) = seen.get(&s) {
                let start = r.prefix.len() + k * r.period.len();
                let period = out.split_off(start);
                return Ok(Ray::new(&self.system, r.start, out, period).expect("images of valid words are valid"));
            }
            if seen.len() > self.budget {
                return Err(Undetermined(self.budget));
            }
            seen.insert(s.clone(), seen.len());
            for &x in &r.period {
                out.push(self.top_image(&s, x));
                s = self.state_at(&s, x);
            }
        }
    }

    /// Word-problem oracle: breadth-first over reduced states, so a `No`
    /// witness is a shortest moved word.
    pub fn is_trivial(&self, w: &GroupWord) -> Triviality {
        self.is_trivial_with(w, self.budget)
    }

    fn is_trivial_with(&self, w: &GroupWord, budget: usize) -> Triviality {
        let w = self.reduce(w);
        if w.is_empty() {
            return Triviality::Yes;
        }
        if let Some(&v) = self.cache.lock().unwrap().get(&w) {
            if v {
                return Triviality::Yes;
            }
        }
        let mut seen: HashSet<GroupWord> = HashSet::new();
        let mut queue: VecDeque<(GroupWord, Vec<u16>)> = VecDeque::from([(w.clone(), vec![])]);
        while let Some((v, path)) = queue.pop_front() {
            if v.is_empty() || !seen.insert(v.clone()) {
                continue;
            }
            if seen.len() > budget {
                return Triviality::Undetermined(budget);
            }
            let n = self.system.nletters(Ctx::Color(v.color)) as u16;
            if let Some(x) = (0..n).find(|&x| self.top_image(&v, x) != x) {
                let mut p = path;
                p.push(x);
                self.cache.lock().unwrap().insert(w, false);
                return Triviality::No(p);
            }
            for x in 0..n {
                let st = self.state_at(&v, x);
                if !st.is_empty() && !seen.contains(&st) {
                    let mut p = path.clone();
                    p.push(x);
                    queue.push_back((st, p));
                }
            }
        }
        self.cache.lock().unwrap().insert(w, true);
        Triviality::Yes
    }

    /// Whether `w` acts trivially on all words of length `depth` or less
    /// beyond some finite level: returns the smallest `k` with all states at
    /// level `k` trivial, if at most `max_depth`.
    pub fn finitary_depth(&self, w: &GroupWord, max_depth: usize) -> Option<usize> {
        let mut level: HashSet<GroupWord> = [self.reduce(w)].into_iter().collect();
        for k in 0..=max_depth {
            level.retain(|v| !v.is_empty());
            if level.is_empty() {
                return Some(k);
            }
            level = level
                .iter()
                .flat_map(|v| (0..self.system.nletters(Ctx::Color(v.color)) as u16).map(move |x| (v, x)))
                .map(|(v, x)| self.state_at(v, x))
                .collect();
        }
        None
    }

    /// Where `w` sends each rule-boundary point of its color that can be
    /// shared with another cell (the others are fixed in the result).
    ///
    /// Boundary point `i` is characterized by the prefixes whose cells contain
    /// it, tracked as sets of boundary indices; `w` sends `i` to `j` iff `u`
    /// contains `i` exactly when `ŵ(u)` contains `j`.  The states reachable
    /// along such prefixes are explored exhaustively (exact) unless `depth`
    /// levels pass first (certified to that depth).
    pub fn boundary_action(&self, w: &GroupWord, depth: usize) -> BoundaryAction {
        let d = self.system.order(w.color);
        let mask = self.system.shared_boundary_mask(w.color);
        let shared: Vec<usize> = (0..d).filter(|i| mask & (1 << i) != 0).collect();
        let mut image: Vec<u8> = (0..d as u8).collect();
        let mut exact = true;
        for &i in &shared {
            let mut found = None;
            for &j in &shared {
                if let Some(e) = self.sends_point(w, i, j, depth) {
                    found = Some(j);
                    exact &= e;
                    break;
                }
            }
            match found {
                Some(j) => image[i] = j as u8,
                None => return BoundaryAction::DoesNotRestrict { index: i },
            }
        }
        let perm = Perm(image);
        match Perm::from_one_line(&perm.to_one_line()) {
            Some(_) => BoundaryAction::Perm { perm, exact, depth },
            None => BoundaryAction::DoesNotRestrict { index: 0 },
        }
    }

    /// The boundary permutation of `w` (cached), or `None` if it does not restrict.
    pub fn boundary_perm(&self, w: &GroupWord) -> Option<Perm> {
        let w = self.reduce(w);
        if w.is_empty() {
            return Some(Perm::identity(self.system.order(w.color)));
        }
        if let Some(p) = self.bcache.lock().unwrap().get(&w) {
            return p.clone();
        }
        let p = match self.boundary_action(&w, self.depth) {
            BoundaryAction::Perm { perm, .. } => Some(perm),
            BoundaryAction::DoesNotRestrict { .. } => None,
        };
        self.bcache.lock().unwrap().insert(w, p.clone());
        p
    }

    /// `Some(exact)` if `w` sends boundary point `i` to `j` (as far as checked).
    fn sends_point(&self, w: &GroupWord, i: usize, j: usize, depth: usize) -> Option<bool> {
        let sys = &self.system;
        type Node = (GroupWord, u32, u32);
        let mut seen: HashSet<Node> = HashSet::new();
        let mut level: Vec<Node> = vec![(self.reduce(w), 1 << i, 1 << j)];
        for _ in 0..depth {
            let mut next = vec![];
            for (s, ti, tj) in level {
                if !seen.insert((s.clone(), ti, tj)) {
                    continue;
                }
                let c = s.color;
                for x in 0..sys.nletters(Ctx::Color(c)) as u16 {
                    let y = self.top_image(&s, x);
                    let ti2 = sys.track_step(c, ti, x);
                    let tj2 = sys.track_step(c, tj, y);
                    match (ti2 == 0, tj2 == 0) {
                        (true, true) => {}
                        (false, false) => next.push((self.state_at(&s, x), ti2, tj2)),
                        _ => return None,
                    }
                }
            }
            if next.is_empty() {
                return Some(true);
            }
            level = next;
        }
        Some(level.iter().all(|n| seen.contains(n)))
    }

    /// The permutations of the boundary of color `c` realized by generators
    /// that restrict to the boundary.
    pub fn boundary_perm_group(&self, c: u32, depth: usize) -> BoundaryGroup {
        let d = self.system.order(c);
        let mut perms = vec![];
        let mut excluded = vec![];
        let mut exact = true;
        for &k in &self.by_color[c as usize] {
            let g = GroupWord { color: c, syms: vec![Sym { gen: k, inv: false }] };
            match self.boundary_action(&g, depth) {
                BoundaryAction::Perm { perm, exact: e, .. } => {
                    exact &= e;
                    perms.push(perm);
                }
                BoundaryAction::DoesNotRestrict { .. } => excluded.push(self.gens[k as usize].name.clone()),
            }
        }
        BoundaryGroup { group: PermGroup::generate(d, &perms), excluded, exact, depth }
    }

    /// Whether every generator (and its inverse) maps glued pairs of its
    /// cone to glued pairs.  Explores the product of the cone's gluing
    /// automaton with itself, tracking the generator's states on both
    /// components; exact whenever that exploration closes within `depth`
    /// levels.
    pub fn check_compatibility(&self, depth: usize) -> CompatibilityReport {
        let mut generators = vec![];
        for c in 0..self.system.ncolors() as u32 {
            if self.by_color[c as usize].is_empty() {
                continue;
            }
            let cone = self.system.cone_system(c);
            let auto = match cone.gluing_automaton() {
                Ok(a) => a,
                Err(_) => {
                    for &k in &self.by_color[c as usize] {
                        let g = &self.gens[k as usize];
                        generators.push((
                            self.system.colors[c as usize].clone(),
                            g.name.clone(),
                            GeneratorVerdict::Compatible { exact: false, depth: 0 },
                        ));
                    }
                    continue;
                }
            };
            for &k in &self.by_color[c as usize] {
                let mut verdict = GeneratorVerdict::Compatible { exact: true, depth };
                for inv in [false, true] {
                    let g = GroupWord { color: c, syms: vec![Sym { gen: k, inv }] };
                    match self.preserves_gluing(&cone, &auto, &g, depth) {
                        Ok(true) => {}
                        Ok(false) => verdict = GeneratorVerdict::Compatible { exact: false, depth },
                        Err(witness) => {
                            verdict = GeneratorVerdict::Incompatible { inverse: inv, witness };
                            break;
                        }
                    }
                }
                generators.push((self.system.colors[c as usize].clone(), self.gens[k as usize].name.clone(), verdict));
            }
        }
        CompatibilityReport { depth, generators }
    }

    /// `Ok(exact)` or a witness pair of glued cone addresses whose images are not glued.
    fn preserves_gluing(
        &self,
        cone: &System,
        auto: &crate::gluing::GluingAutomaton,
        g: &GroupWord,
        depth: usize,
    ) -> Result<bool, (String, String)> {
        type Node = (usize, usize, GroupWord, GroupWord);
        let start = auto.start().expect("cone automaton has a start state");
        let Some(&q0) = auto.delta.get(&(start, 0, 0)) else { return Ok(true) };
        let mut parent: HashMap<Node, Option<(Node, u16, u16)>> = HashMap::new();
        let root: Node = (q0, q0, g.clone(), g.clone());
        parent.insert(root.clone(), None);
        let mut level = vec![root];
        for _ in 0..depth {
            let mut next = vec![];
            for node in &level {
                let (qa, qb, su, sv) = node;
                for (&(s, x, y), &ta) in &auto.delta {
                    if s != *qa {
                        continue;
                    }
                    let (x2, y2) = (self.top_image(su, x), self.top_image(sv, y));
                    match auto.delta.get(&(*qb, x2, y2)) {
                        None => {
                            // rebuild the path and extend it by a lasso from `ta`
                            let mut pairs = vec![(x, y)];
                            let mut cur = node.clone();
                            while let Some(Some((p, a, b))) = parent.get(&cur) {
                                pairs.push((*a, *b));
                                cur = p.clone();
                            }
                            pairs.reverse();
                            let (pre, cyc) = auto.lasso_from(ta);
                            let mk = |sel: fn(&(u16, u16)) -> u16| {
                                let mut prefix: Vec<u16> = vec![0];
                                prefix.extend(pairs.iter().map(sel));
                                prefix.extend(pre.iter().map(sel));
                                let period: Vec<u16> = cyc.iter().map(sel).collect();
                                cone.ray_string(&Ray::new(cone, Ctx::Base, prefix, period).unwrap())
                            };
                            return Err((mk(|p| p.0), mk(|p| p.1)));
                        }
                        Some(&tb) => {
                            let n: Node = (ta, tb, self.state_at(su, x), self.state_at(sv, y));
                            if !parent.contains_key(&n) {
                                parent.insert(n.clone(), Some((node.clone(), x, y)));
                                next.push(n);
                            }
                        }
                    }
                }
            }
            if next.is_empty() {
                return Ok(true);
            }
            level = next;
        }
        Ok(false)
    }
}

impl fmt::Display for Triviality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Triviality::Yes => write!(f, "trivial"),
            Triviality::No(w) => write!(f, "nontrivial (moves {w:?})"),
            Triviality::Undetermined(b) => write!(f, "undetermined (budget {b})"),
        }
    }
}
