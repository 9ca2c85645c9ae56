//! Canonical forms by colour refinement plus individualisation search.
//!
//! Vertices lying on a single boundary slot ("private" vertices) carry no
//! structure and are anonymised; only shared vertices receive canonical labels.
//! With `sym = Some(groups)`, each hyperedge may additionally be reordered by
//! its colour's permutation group on the positions whose vertex is shared with
//! another hyperedge, and freely elsewhere (the π-isomorphism notion).

use super::Shape;
use crate::perm::PermGroup;
use std::collections::BTreeMap;

const PRIVATE: u32 = u32::MAX;
const IRRELEVANT: u32 = u32::MAX - 1;

/// A canonical certificate together with the labelling that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Canon {
    /// Sorted per-edge codes; equal iff the inputs are isomorphic.
    pub cert: Vec<Vec<u32>>,
    /// Canonical label of every vertex (`None` for private vertices).
    pub labels: Vec<Option<u32>>,
}

impl Canon {
    /// Human-readable form with colour names substituted.
    pub fn render(&self, color_names: &[String]) -> String {
        let parts: Vec<String> = self
            .cert
            .iter()
            .map(|code| {
                let color = &color_names[code[0] as usize];
                let body: Vec<String> = code[2..]
                    .iter()
                    .map(|&x| match x {
                        PRIVATE => "*".to_string(),
                        IRRELEVANT => "~".to_string(),
                        PRIVATE_SEP => "|".to_string(),
                        v => v.to_string(),
                    })
                    .collect();
                format!("{color}({})", body.join(","))
            })
            .collect();
        parts.join(";")
    }
}

const PRIVATE_SEP: u32 = u32::MAX - 2;

struct Ctx<'a> {
    shape: &'a Shape,
    sym: Option<&'a [PermGroup]>,
    /// shared vertices (those that get labels), as dense indices
    shared: Vec<Option<usize>>,
    nshared: usize,
    /// per edge, per position: relevant (vertex shared with another edge)
    rel: Vec<Vec<bool>>,
    /// per edge, per position: position class used by refinement
    posclass: Vec<Vec<u32>>,
    /// incidences of each shared vertex: (edge, position)
    inc: Vec<Vec<(usize, usize)>>,
}

impl<'a> Ctx<'a> {
    fn new(shape: &'a Shape, sym: Option<&'a [PermGroup]>) -> Self {
        let occ = shape.occurrences();
        let deg = shape.edge_degrees();
        let mut shared = vec![None; shape.nverts];
        let mut nshared = 0;
        for v in 0..shape.nverts {
            if occ[v] >= 2 {
                shared[v] = Some(nshared);
                nshared += 1;
            }
        }
        let rel: Vec<Vec<bool>> =
            shape.bnd.iter().map(|b| b.iter().map(|&v| deg[v as usize] >= 2).collect()).collect();
        let posclass = shape
            .bnd
            .iter()
            .enumerate()
            .map(|(e, b)| {
                (0..b.len())
                    .map(|i| match sym {
                        None => i as u32,
                        Some(groups) => {
                            if rel[e][i] {
                                // orbit representative of i under the colour's group
                                let g = &groups[shape.colors[e] as usize];
                                g.elements.iter().map(|p| p.0[i] as u32).min().unwrap()
                            } else {
                                IRRELEVANT
                            }
                        }
                    })
                    .collect()
            })
            .collect();
        let mut inc = vec![vec![]; nshared];
        for (e, b) in shape.bnd.iter().enumerate() {
            for (i, &v) in b.iter().enumerate() {
                if let Some(s) = shared[v as usize] {
                    inc[s].push((e, i));
                }
            }
        }
        Ctx { shape, sym, shared, nshared, rel, posclass, inc }
    }

    /// Value of slot (e, j) under the current colouring.
    fn slot(&self, col: &[u32], e: usize, j: usize) -> u32 {
        match self.shared[self.shape.bnd[e][j] as usize] {
            Some(s) => col[s],
            None => PRIVATE,
        }
    }

    /// One round of refinement; returns a new dense ranking.
    fn refine_once(&self, col: &[u32]) -> Vec<u32> {
        let sigs: Vec<(u32, Vec<Vec<u32>>)> = (0..self.nshared)
            .map(|s| {
                let mut items: Vec<Vec<u32>> = self.inc[s]
                    .iter()
                    .map(|&(e, i)| {
                        let b = &self.shape.bnd[e];
                        let mut item = vec![self.shape.colors[e], b.len() as u32, self.posclass[e][i]];
                        match self.sym {
                            None => {
                                for j in 0..b.len() {
                                    item.push(self.slot(col, e, j));
                                }
                            }
                            Some(_) => {
                                let mut others: Vec<(u32, u32)> = (0..b.len())
                                    .filter(|&j| j != i)
                                    .map(|j| (self.posclass[e][j], self.slot(col, e, j)))
                                    .collect();
                                others.sort_unstable();
                                for (a, b) in others {
                                    item.push(a);
                                    item.push(b);
                                }
                            }
                        }
                        item
                    })
                    .collect();
                items.sort_unstable();
                (col[s], items)
            })
            .collect();
        rank(&sigs)
    }

    fn refine(&self, mut col: Vec<u32>) -> Vec<u32> {
        let mut classes = count_classes(&col);
        loop {
            let next = self.refine_once(&col);
            let c = count_classes(&next);
            col = next;
            if c == classes {
                return col;
            }
            classes = c;
        }
    }

    fn initial(&self) -> Vec<u32> {
        let sigs: Vec<Vec<(u32, u32, u32)>> = (0..self.nshared)
            .map(|s| {
                let mut v: Vec<(u32, u32, u32)> = self.inc[s]
                    .iter()
                    .map(|&(e, i)| (self.shape.colors[e], self.shape.bnd[e].len() as u32, self.posclass[e][i]))
                    .collect();
                v.sort_unstable();
                v
            })
            .collect();
        rank(&sigs)
    }

    /// Certificate for a discrete colouring (labels = colours).
    fn certificate(&self, lab: &[u32]) -> Vec<Vec<u32>> {
        let mut codes: Vec<Vec<u32>> = self
            .shape
            .bnd
            .iter()
            .enumerate()
            .map(|(e, b)| {
                let mut head = vec![self.shape.colors[e], b.len() as u32];
                match self.sym {
                    None => head.extend((0..b.len()).map(|j| self.slot(lab, e, j))),
                    Some(groups) => {
                        let g = &groups[self.shape.colors[e] as usize];
                        let vals: Vec<u32> = (0..b.len())
                            .map(|j| if self.rel[e][j] { self.slot(lab, e, j) } else { IRRELEVANT })
                            .collect();
                        let best = g
                            .elements
                            .iter()
                            .map(|p| {
                                let mut r = vec![0u32; b.len()];
                                for (i, &v) in vals.iter().enumerate() {
                                    r[p.0[i] as usize] = v;
                                }
                                r
                            })
                            .min()
                            .unwrap();
                        head.extend(best);
                        // shared-but-irrelevant vertices (loops within this edge)
                        let mut extra: Vec<u32> = (0..b.len())
                            .filter(|&j| !self.rel[e][j])
                            .map(|j| self.slot(lab, e, j))
                            .filter(|&x| x != PRIVATE)
                            .collect();
                        if !extra.is_empty() {
                            extra.sort_unstable();
                            head.push(PRIVATE_SEP);
                            head.extend(extra);
                        }
                    }
                }
                head
            })
            .collect();
        codes.sort_unstable();
        codes
    }

    fn search(&self, col: Vec<u32>, best: &mut Option<(Vec<Vec<u32>>, Vec<u32>)>) {
        let col = self.refine(col);
        // first non-singleton cell with smallest colour
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for &c in &col {
            *counts.entry(c).or_default() += 1;
        }
        let target = counts.iter().find(|(_, &n)| n > 1).map(|(&c, _)| c);
        match target {
            None => {
                let cert = self.certificate(&col);
                if best.as_ref().is_none_or(|(b, _)| cert < *b) {
                    *best = Some((cert, col));
                }
            }
            Some(t) => {
                for s in 0..self.nshared {
                    if col[s] != t {
                        continue;
                    }
                    let keyed: Vec<(u32, bool)> =
                        col.iter().enumerate().map(|(x, &c)| (c, x != s)).collect();
                    self.search(rank(&keyed), best);
                }
            }
        }
    }
}

fn count_classes(col: &[u32]) -> usize {
    let mut v = col.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

/// Dense ranks of arbitrary ordered signatures.
fn rank<T: Ord + Clone>(sigs: &[T]) -> Vec<u32> {
    let mut sorted: Vec<T> = sigs.to_vec();
    sorted.sort();
    sorted.dedup();
    sigs.iter().map(|s| sorted.binary_search(s).unwrap() as u32).collect()
}

/// Canonical form of `shape`.  With `sym = None` the certificate identifies the
/// hypergraph up to strict isomorphism (colours and boundary orders preserved);
/// with `sym = Some(groups)` (indexed by colour) up to π-isomorphism.
pub fn canonical_form(shape: &Shape, sym: Option<&[PermGroup]>) -> Canon {
    let ctx = Ctx::new(shape, sym);
    let mut best = None;
    ctx.search(ctx.initial(), &mut best);
    let (cert, lab) = best.unwrap_or_else(|| (ctx.certificate(&[]), vec![]));
    let labels = (0..shape.nverts).map(|v| ctx.shared[v].map(|s| lab[s])).collect();
    Canon { cert, labels }
}
