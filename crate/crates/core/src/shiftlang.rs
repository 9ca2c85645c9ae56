//! The symbol space as an edge shift: the color graph, language membership,
//! finite addresses and eventually periodic addresses.

use crate::replacement::System;
use serde::Serialize;
use std::collections::HashMap;
use std::fmt;

/// Reading context: at the start of a word, or after a prefix of a color.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ctx {
    Base,
    Color(u32),
}

/// A finite word of the language; letter `k` indexes a hyperedge of the base
/// (`k = 0`) or of the rule graph of the previous letter's color.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Address(pub Vec<u16>);

impl Address {
    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn is_prefix_of(&self, other: &[u16]) -> bool {
        other.len() >= self.0.len() && other[..self.0.len()] == self.0[..]
    }

    pub fn child(&self, y: u16) -> Address {
        let mut v = self.0.clone();
        v.push(y);
        Address(v)
    }
}

/// An eventually periodic infinite word `prefix · period^∞`, read from
/// context `start`.  Kept normalized: the period is primitive, reading one
/// period returns to the color the period started in, and the prefix is as
/// short as possible.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ray {
    pub start: Ctx,
    pub prefix: Vec<u16>,
    pub period: Vec<u16>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LangError {
    #[error("unknown letter `{name}` at position {position}")]
    UnknownLetter { position: usize, name: String },
    #[error("word leaves the language at position {0}")]
    NotInLanguage(usize),
    #[error("malformed address `{0}`")]
    Malformed(String),
    #[error("colors of the two prefixes differ")]
    ColorMismatch,
    #[error("the address does not start with the given prefix")]
    NotAPrefix,
    #[error("the empty word has no color")]
    Empty,
}

impl Ray {
    /// Builds and normalizes; `None` if some letter is out of range.
    pub fn new(sys: &System, start: Ctx, prefix: Vec<u16>, period: Vec<u16>) -> Option<Ray> {
        if period.is_empty() {
            return None;
        }
        let mut ctx = start;
        for &x in &prefix {
            if x as usize >= sys.nletters(ctx) {
                return None;
            }
            ctx = Ctx::Color(sys.letter_color(ctx, x));
        }
        // unroll periods until the context at a period boundary repeats
        let mut boundaries: Vec<Ctx> = vec![ctx];
        let mut pre = prefix;
        loop {
            let mut c = *boundaries.last().unwrap();
            for &x in &period {
                if x as usize >= sys.nletters(c) {
                    return None;
                }
                c = Ctx::Color(sys.letter_color(c, x));
            }
            if let Some(i) = boundaries.iter().position(|&b| b == c) {
                let reps = boundaries.len() - i;
                for _ in 0..i {
                    pre.extend_from_slice(&period);
                }
                let per: Vec<u16> = period.iter().copied().cycle().take(period.len() * reps).collect();
                let mut r = Ray { start, prefix: pre, period: per };
                r.normalize(sys);
                return Some(r);
            }
            boundaries.push(c);
        }
    }

    fn ctx_after_prefix(&self, sys: &System, n: usize) -> Ctx {
        let mut ctx = self.start;
        for &x in &self.prefix[..n] {
            ctx = Ctx::Color(sys.letter_color(ctx, x));
        }
        ctx
    }

    fn normalize(&mut self, sys: &System) {
        let c0 = self.ctx_after_prefix(sys, self.prefix.len());
        // primitive root that still returns to the starting context
        let n = self.period.len();
        for r in 1..n {
            if n % r != 0 || (0..n).any(|i| self.period[i] != self.period[i % r]) {
                continue;
            }
            let mut c = c0;
            for &x in &self.period[..r] {
                c = Ctx::Color(sys.letter_color(c, x));
            }
            if c == c0 {
                self.period.truncate(r);
                break;
            }
        }
        // absorb trailing prefix letters into the period
        while let Some(&last) = self.prefix.last() {
            let k = self.prefix.len();
            let before = self.ctx_after_prefix(sys, k - 1);
            let p = self.period.len();
            // context before the last period letter, when the period is read from c0
            let mut c = self.ctx_after_prefix(sys, k);
            for &x in &self.period[..p - 1] {
                c = Ctx::Color(sys.letter_color(c, x));
            }
            if last == self.period[p - 1] && c == before {
                self.prefix.pop();
                self.period.rotate_right(1);
            } else {
                break;
            }
        }
    }

    /// Letter at position `i` (0-based).
    pub fn letter(&self, i: usize) -> u16 {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }

    /// First `n` letters.
    pub fn unroll(&self, n: usize) -> Vec<u16> {
        (0..n).map(|i| self.letter(i)).collect()
    }

    /// Context before reading position `i`.
    pub fn ctx_at(&self, sys: &System, i: usize) -> Ctx {
        let mut ctx = self.start;
        let stop = if i <= self.prefix.len() { i } else { self.prefix.len() + (i - self.prefix.len()) % self.period.len() };
        for k in 0..stop {
            ctx = Ctx::Color(sys.letter_color(ctx, self.letter(k)));
        }
        ctx
    }

    /// Tail after removing the first `n` letters.
    pub fn shift(&self, sys: &System, n: usize) -> Ray {
        let start = self.ctx_at(sys, n);
        let (prefix, period) = if n <= self.prefix.len() {
            (self.prefix[n..].to_vec(), self.period.clone())
        } else {
            let k = (n - self.prefix.len()) % self.period.len();
            let mut p = self.period.clone();
            p.rotate_left(k);
            (vec![], p)
        };
        Ray::new(sys, start, prefix, period).unwrap()
    }

    /// `w · self`, reading `w` from `ctx` (which must lead to `self.start`).
    pub fn prepend(&self, sys: &System, ctx: Ctx, w: &[u16]) -> Ray {
        let mut prefix = w.to_vec();
        prefix.extend_from_slice(&self.prefix);
        Ray::new(sys, ctx, prefix, self.period.clone()).unwrap()
    }

    pub fn starts_with(&self, w: &[u16]) -> bool {
        w.iter().enumerate().all(|(i, &x)| self.letter(i) == x)
    }
}

impl System {
    /// Address as `.`-joined letter names.
    pub fn addr_string(&self, w: &Address) -> String {
        self.word_string(Ctx::Base, &w.0)
    }

    pub fn word_string(&self, start: Ctx, w: &[u16]) -> String {
        let mut ctx = start;
        let mut parts = vec![];
        for &x in w {
            parts.push(self.letter_name(ctx, x).to_string());
            ctx = Ctx::Color(self.letter_color(ctx, x));
        }
        parts.join(".")
    }

    /// Parses a `.`-joined address, resolving letter names in context.
    pub fn parse_addr(&self, s: &str) -> Result<Address, LangError> {
        self.parse_word(Ctx::Base, s).map(Address)
    }

    pub fn parse_word(&self, start: Ctx, s: &str) -> Result<Vec<u16>, LangError> {
        if s.is_empty() {
            return Ok(vec![]);
        }
        let names: Vec<&str> = s.split('.').collect();
        self.resolve(start, &names)
    }

    fn all_letter_names(&self) -> std::collections::HashSet<&str> {
        let mut set: std::collections::HashSet<&str> = self.base.edges().iter().map(|e| e.name.as_str()).collect();
        for r in &self.rules {
            set.extend(r.graph.edges().iter().map(|e| e.name.as_str()));
        }
        set
    }

    fn resolve(&self, start: Ctx, names: &[&str]) -> Result<Vec<u16>, LangError> {
        let alphabet = self.all_letter_names();
        let mut ctx = start;
        let mut out = vec![];
        for (i, n) in names.iter().enumerate() {
            if !alphabet.contains(n) {
                return Err(LangError::UnknownLetter { position: i + 1, name: n.to_string() });
            }
            let x = self.letter_index(ctx, n).ok_or(LangError::NotInLanguage(i + 1))?;
            out.push(x);
            ctx = Ctx::Color(self.letter_color(ctx, x));
        }
        Ok(out)
    }

    /// Membership in the language; on failure the 1-based offending position.
    pub fn is_in_language(&self, s: &str) -> Result<bool, LangError> {
        if s.is_empty() {
            return Err(LangError::Empty);
        }
        match self.parse_addr(s) {
            Ok(_) => Ok(true),
            Err(LangError::NotInLanguage(_)) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// Like [`System::is_in_language`] but also reports where the word fails.
    pub fn language_check(&self, s: &str) -> Result<Option<usize>, LangError> {
        match self.parse_addr(s) {
            Ok(_) => Ok(None),
            Err(LangError::NotInLanguage(p)) => Ok(Some(p)),
            Err(e) => Err(e),
        }
    }

    pub fn depth_of(&self, w: &Address) -> usize {
        w.depth()
    }

    /// Parses `a.b.(c.d)` or `(c.d)` read from `start`.
    pub fn parse_ray_from(&self, start: Ctx, s: &str) -> Result<Ray, LangError> {
        let s = s.trim();
        let open = s.find('(').ok_or_else(|| LangError::Malformed(s.into()))?;
        if !s.ends_with(')') || s[open + 1..s.len() - 1].contains(['(', ')']) {
            return Err(LangError::Malformed(s.into()));
        }
        let head = &s[..open];
        let body = &s[open + 1..s.len() - 1];
        let head = if head.is_empty() {
            ""
        } else {
            head.strip_suffix('.').ok_or_else(|| LangError::Malformed(s.into()))?
        };
        let pre_names: Vec<&str> = if head.is_empty() { vec![] } else { head.split('.').collect() };
        let per_names: Vec<&str> = body.split('.').collect();
        if per_names.iter().any(|n| n.is_empty()) || pre_names.iter().any(|n| n.is_empty()) {
            return Err(LangError::Malformed(s.into()));
        }
        // resolve names along the unrolled word until (period phase, context) repeats
        let prefix = self.resolve(start, &pre_names)?;
        let mut ctx = start;
        for &x in &prefix {
            ctx = Ctx::Color(self.letter_color(ctx, x));
        }
        let mut seen: HashMap<Ctx, usize> = HashMap::new();
        let mut letters: Vec<u16> = vec![];
        let alphabet = self.all_letter_names();
        loop {
            if let Some(&at) = seen.get(&ctx) {
                let mut pre = prefix.clone();
                pre.extend_from_slice(&letters[..at]);
                let per = letters[at..].to_vec();
                return Ray::new(self, start, pre, per).ok_or_else(|| LangError::Malformed(s.into()));
            }
            seen.insert(ctx, letters.len());
            for (i, n) in per_names.iter().enumerate() {
                let pos = prefix.len() + letters.len() + 1;
                if !alphabet.contains(n) {
                    return Err(LangError::UnknownLetter { position: pre_names.len() + i + 1, name: n.to_string() });
                }
                let x = self.letter_index(ctx, n).ok_or(LangError::NotInLanguage(pos))?;
                letters.push(x);
                ctx = Ctx::Color(self.letter_color(ctx, x));
            }
        }
    }

    pub fn parse_ray(&self, s: &str) -> Result<Ray, LangError> {
        self.parse_ray_from(Ctx::Base, s)
    }

    pub fn ray_string(&self, r: &Ray) -> String {
        let pre = self.word_string(r.start, &r.prefix);
        let c = r.ctx_at(self, r.prefix.len());
        let per = self.word_string(c, &r.period);
        if pre.is_empty() {
            format!("({per})")
        } else {
            format!("{pre}.({per})")
        }
    }

    /// `χ_{x,y}`: replaces the prefix `x` of `α` by `y`.
    pub fn prefix_swap(&self, x: &Address, y: &Address, alpha: &Ray) -> Result<Ray, LangError> {
        if self.color_of(x) != self.color_of(y) {
            return Err(LangError::ColorMismatch);
        }
        if alpha.start != Ctx::Base || !alpha.starts_with(&x.0) {
            return Err(LangError::NotAPrefix);
        }
        let tail = alpha.shift(self, x.depth());
        Ok(tail.prepend(self, Ctx::Base, &y.0))
    }

    /// The color graph `Γ_C`: vertices are colors plus a start vertex `s`.
    pub fn color_graph(&self) -> ColorGraph {
        let mut edges = vec![];
        for (e, &k) in self.base_colors.iter().enumerate() {
            edges.push(ColorEdge { from: None, to: k, letter: self.base.edges()[e].name.clone() });
        }
        for (c, r) in self.rules.iter().enumerate() {
            for (y, &k) in r.edge_colors.iter().enumerate() {
                edges.push(ColorEdge { from: Some(c as u32), to: k, letter: r.graph.edges()[y].name.clone() });
            }
        }
        ColorGraph { colors: self.colors.clone(), edges }
    }

    /// Number of words of each depth `1..=n` (path counts in `Γ_C` from `s`).
    pub fn language_counts(&self, n: usize) -> Vec<u128> {
        let k = self.ncolors();
        let mut v = vec![0u128; k];
        for &c in &self.base_colors {
            v[c as usize] += 1;
        }
        let mut out = vec![];
        for _ in 0..n {
            out.push(v.iter().sum());
            let mut next = vec![0u128; k];
            for c in 0..k {
                for &d in &self.rules[c].edge_colors {
                    next[d as usize] += v[c];
                }
            }
            v = next;
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColorEdge {
    /// `None` is the start vertex `s`.
    pub from: Option<u32>,
    pub to: u32,
    pub letter: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColorGraph {
    pub colors: Vec<String>,
    pub edges: Vec<ColorEdge>,
}

impl ColorGraph {
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph color_graph {\n  s [shape=circle];\n");
        for c in &self.colors {
            out.push_str(&format!("  \"{c}\" [shape=circle];\n"));
        }
        for e in &self.edges {
            let from = e.from.map_or("s".to_string(), |c| self.colors[c as usize].clone());
            out.push_str(&format!(
                "  \"{from}\" -> \"{}\" [label=\"{}\"];\n",
                self.colors[e.to as usize], e.letter
            ));
        }
        out.push_str("}\n");
        out
    }
}

impl fmt::Display for Ctx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ctx::Base => f.write_str("s"),
            Ctx::Color(c) => write!(f, "{c}"),
        }
    }
}
