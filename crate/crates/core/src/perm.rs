//! Permutations of boundary indices and the small permutation groups built from them.
//!
//! Internally indices are 0-based; everything user-facing is 1-based.

use std::collections::BTreeSet;
use std::fmt;

/// A permutation of `{0..n}` in one-line notation: `p.0[i]` is the image of `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Perm(pub Vec<u8>);

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n as u8).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v as usize] = i as u8;
        }
        Perm(inv)
    }

    /// Builds from 1-based one-line notation, checking it is a bijection.
    pub fn from_one_line(v: &[usize]) -> Option<Perm> {
        let n = v.len();
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for &x in v {
            if x == 0 || x > n || seen[x - 1] {
                return None;
            }
            seen[x - 1] = true;
            out.push((x - 1) as u8);
        }
        Some(Perm(out))
    }

    pub fn to_one_line(&self) -> Vec<usize> {
        self.0.iter().map(|&v| v as usize + 1).collect()
    }

    /// Cycle notation, 1-based, fixed points omitted; `()` for the identity.
    pub fn cycles(&self) -> String {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = String::new();
        for s in 0..n {
            if seen[s] || self.0[s] as usize == s {
                continue;
            }
            let mut cyc = vec![];
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                cyc.push((i + 1).to_string());
                i = self.0[i] as usize;
            }
            out.push('(');
            out.push_str(&cyc.join(" "));
            out.push(')');
        }
        if out.is_empty() {
            "()".into()
        } else {
            out
        }
    }

    /// All permutations of `{0..n}` in lexicographic order.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = vec![];
        let mut cur: Vec<u8> = (0..n as u8).collect();
        loop {
            out.push(Perm(cur.clone()));
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }
}

/// Serialized as 1-based one-line notation, e.g. `[2,1,3]`.
impl serde::Serialize for Perm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_one_line().serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for Perm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Perm, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        Perm::from_one_line(&v).ok_or_else(|| serde::de::Error::custom("not a permutation in one-line notation"))
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cycles())
    }
}

/// A finite subgroup of `Sym(n)`, stored as its full element set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PermGroup {
    pub degree: usize,
    pub elements: BTreeSet<Perm>,
}

impl PermGroup {
    pub fn trivial(n: usize) -> PermGroup {
        PermGroup { degree: n, elements: [Perm::identity(n)].into_iter().collect() }
    }

    pub fn symmetric(n: usize) -> PermGroup {
        PermGroup { degree: n, elements: Perm::all(n).into_iter().collect() }
    }

    /// Closure of the generators under composition.
    pub fn generate(n: usize, gens: &[Perm]) -> PermGroup {
        let mut elements: BTreeSet<Perm> = [Perm::identity(n)].into_iter().collect();
        let mut frontier: Vec<Perm> = vec![Perm::identity(n)];
        while let Some(p) = frontier.pop() {
            for g in gens {
                let q = g.compose(&p);
                if elements.insert(q.clone()) {
                    frontier.push(q);
                }
            }
        }
        PermGroup { degree: n, elements }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.elements.contains(p)
    }

    /// Whether some element agrees with `p` on every index of `mask` (bit `i` = index `i`).
    pub fn agrees_on(&self, p: &Perm, mask: u32) -> bool {
        self.elements
            .iter()
            .any(|g| (0..self.degree).all(|i| mask & (1 << i) == 0 || g.0[i] == p.0[i]))
    }

    pub fn is_full(&self) -> bool {
        let mut f = 1usize;
        for k in 2..=self.degree {
            f *= k;
        }
        self.order() == f
    }
}
