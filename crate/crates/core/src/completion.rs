//! The completion monoid `Q̂` of a finite PMQ.
//!
//! `Q̂` is generated by the letters `â`, `a ∈ Q₊`, subject to
//! `â b̂ = b̂ (a^b)^` and `â b̂ = (ab)^` whenever `ab` is defined. For a normed
//! augmented PMQ every relation preserves the total norm, so the words of a
//! fixed norm form a finite set and each element of `Q̂_ν` is a connected
//! component of the move graph on that set. Components are found with
//! union-find over forward swaps and contractions; [`class_of_word`] finds a
//! single component by breadth-first search over all four kinds of move,
//! which gives an independent route to the same partition.
//!
//! The canonical representative of a class is its minimum under
//! (length, lexicographic) order. Products are read off the PMQ table as
//! given; no left/right convention is imposed here.

use std::collections::{HashMap, HashSet, VecDeque};

use petgraph::unionfind::UnionFind;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_budget, Error, Result};
use crate::pair::PMQGroupPair;
use crate::pmq::FinitePMQ;

/// A word in the letters of `Q₊`, stored as element indices.
pub type Word = Vec<usize>;

/// Default cap on the number of words a single closure may materialize.
pub const DEFAULT_WORD_BUDGET: u64 = 10_000_000;

/// An element of `Q̂_ν`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompletionClass {
    #[serde(skip)]
    parent: u64,
    pub norm: u32,
    pub rep: Word,
    pub size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<Word>>,
}

impl CompletionClass {
    /// The class of the empty word, the unit of `Q̂`.
    pub fn unit(q: &FinitePMQ) -> Self {
        CompletionClass {
            parent: q.fingerprint(),
            norm: 0,
            rep: Vec::new(),
            size: 1,
            members: Some(vec![Vec::new()]),
        }
    }

    pub fn belongs_to(&self, q: &FinitePMQ) -> bool {
        self.parent == q.fingerprint()
    }
}

/// Which words a closure runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Universe {
    /// All words of the given total norm.
    Norm(u32),
    /// All words of length at most the given cap.
    MaxLength(usize),
}

impl Universe {
    fn admits(self, len: usize) -> bool {
        match self {
            Universe::Norm(_) => true,
            Universe::MaxLength(cap) => len <= cap,
        }
    }
}

/// Move tables precomputed from a PMQ.
struct Moves<'a> {
    q: &'a FinitePMQ,
    /// `factorizations[c]`: all `(a, b)` in `Q₊²` with `ab = c`.
    factorizations: Vec<Vec<(usize, usize)>>,
    /// Pairs of non-units multiplying to the unit.
    unit_factorizations: Vec<(usize, usize)>,
}

impl<'a> Moves<'a> {
    fn new(q: &'a FinitePMQ) -> Self {
        let u = q.unit();
        let mut factorizations = vec![Vec::new(); q.size()];
        let mut unit_factorizations = Vec::new();
        for a in q.positive_elements() {
            for b in q.positive_elements() {
                match q.prod(a, b) {
                    Some(c) if c == u => unit_factorizations.push((a, b)),
                    Some(c) => factorizations[c].push((a, b)),
                    None => {}
                }
            }
        }
        Moves {
            q,
            factorizations,
            unit_factorizations,
        }
    }

    fn forward_swap(&self, w: &[usize], i: usize) -> Word {
        let mut out = w.to_vec();
        out[i] = w[i + 1];
        out[i + 1] = self.q.conj(w[i], w[i + 1]);
        out
    }

    /// `(a, b) -> (c, a)` with `c^a = b`.
    fn inverse_swap(&self, w: &[usize], i: usize) -> Word {
        let mut out = w.to_vec();
        out[i] = self.q.conj_inverse(w[i + 1], w[i]);
        out[i + 1] = w[i];
        out
    }

    /// `(a, b) -> (ab)`; a product equal to the unit drops out of the word.
    fn contraction(&self, w: &[usize], i: usize) -> Option<Word> {
        let ab = self.q.prod(w[i], w[i + 1])?;
        let mut out = Vec::with_capacity(w.len() - 1);
        out.extend_from_slice(&w[..i]);
        if ab != self.q.unit() {
            out.push(ab);
        }
        out.extend_from_slice(&w[i + 2..]);
        Some(out)
    }

    fn expansions<'w>(&'w self, w: &'w [usize], i: usize) -> impl Iterator<Item = Word> + 'w {
        self.factorizations[w[i]].iter().map(move |&(a, b)| {
            let mut out = Vec::with_capacity(w.len() + 1);
            out.extend_from_slice(&w[..i]);
            out.push(a);
            out.push(b);
            out.extend_from_slice(&w[i + 1..]);
            out
        })
    }

    /// Inverse of contractions to the unit: insert `(a, b)` with `ab = 𝟙`.
    fn unit_insertions<'w>(&'w self, w: &'w [usize]) -> impl Iterator<Item = Word> + 'w {
        (0..=w.len()).flat_map(move |i| {
            self.unit_factorizations.iter().map(move |&(a, b)| {
                let mut out = Vec::with_capacity(w.len() + 2);
                out.extend_from_slice(&w[..i]);
                out.push(a);
                out.push(b);
                out.extend_from_slice(&w[i..]);
                out
            })
        })
    }

    /// Every one-step neighbour of `w`, in both directions.
    fn neighbors(&self, w: &[usize], universe: Universe) -> Vec<Word> {
        let mut out = Vec::new();
        for i in 0..w.len() {
            if i + 1 < w.len() {
                out.push(self.forward_swap(w, i));
                out.push(self.inverse_swap(w, i));
                if let Some(c) = self.contraction(w, i) {
                    out.push(c);
                }
            }
            out.extend(self.expansions(w, i));
        }
        out.extend(self.unit_insertions(w));
        out.retain(|x| universe.admits(x.len()));
        out
    }
}

fn check_word(q: &FinitePMQ, w: &[usize]) -> Result<()> {
    for &a in w {
        if a >= q.size() {
            return Err(Error::Malformed(format!("letter {a} is not a PMQ element")));
        }
        if a == q.unit() {
            return Err(Error::Malformed("words may not contain the unit".into()));
        }
    }
    Ok(())
}

/// Drops unit letters, which are trivial in `Q̂`.
pub fn normalize_word(q: &FinitePMQ, letters: &[usize]) -> Word {
    letters.iter().copied().filter(|&a| a != q.unit()).collect()
}

pub fn word_norm(q: &FinitePMQ, w: &[usize]) -> Result<u32> {
    let norm = q.require_norm()?;
    Ok(w.iter().map(|&a| norm[a]).sum())
}

/// All one-step neighbours of `w` at position `i`: forward and inverse swap
/// and contraction of the letters at `i, i + 1` (when `i + 1` is a
/// position), and every expansion of the letter at `i`. Sorted, without
/// duplicates.
pub fn relation_moves(q: &FinitePMQ, w: &[usize], i: usize) -> Result<Vec<Word>> {
    check_word(q, w)?;
    if i >= w.len() {
        return Err(Error::Precondition(format!(
            "position {i} is out of range for a word of length {}",
            w.len()
        )));
    }
    let moves = Moves::new(q);
    let mut out = Vec::new();
    if i + 1 < w.len() {
        out.push(moves.forward_swap(w, i));
        out.push(moves.inverse_swap(w, i));
        out.extend(moves.contraction(w, i));
    }
    out.extend(moves.expansions(w, i));
    out.sort();
    out.dedup();
    Ok(out)
}

fn count_norm_words(q: &FinitePMQ, nu: u32) -> u128 {
    let norm = q.norm().expect("normed");
    let letters = q.positive_elements();
    let mut count = vec![0u128; nu as usize + 1];
    count[0] = 1;
    for s in 1..=nu as usize {
        count[s] = letters
            .iter()
            .filter(|&&a| norm[a] as usize <= s)
            .map(|&a| count[s - norm[a] as usize])
            .fold(0u128, |acc, x| acc.saturating_add(x));
    }
    count[nu as usize]
}

/// Words of the universe in (length, lexicographic) order.
fn enumerate_words(q: &FinitePMQ, universe: Universe, budget: u64) -> Result<Vec<Word>> {
    let letters = q.positive_elements();
    match universe {
        Universe::Norm(nu) => {
            check_budget("completion word universe", count_norm_words(q, nu), budget)?;
            let norm = q.norm().expect("normed");
            let mut out = Vec::new();
            for len in 0..=nu as usize {
                let mut w = Vec::with_capacity(len);
                fill_norm(&letters, norm, len, nu, &mut w, &mut out);
            }
            Ok(out)
        }
        Universe::MaxLength(cap) => {
            let m = letters.len() as u128;
            let total: u128 = (0..=cap as u32).map(|l| m.saturating_pow(l)).sum();
            check_budget("completion word universe", total, budget)?;
            let mut out = vec![Vec::new()];
            let mut layer: Vec<Word> = vec![Vec::new()];
            for _ in 0..cap {
                layer = layer
                    .iter()
                    .flat_map(|w| {
                        letters.iter().map(move |&a| {
                            let mut x = w.clone();
                            x.push(a);
                            x
                        })
                    })
                    .collect();
                out.extend(layer.iter().cloned());
            }
            Ok(out)
        }
    }
}

fn fill_norm(letters: &[usize], norm: &[u32], len: usize, remaining: u32, w: &mut Word, out: &mut Vec<Word>) {
    if w.len() == len {
        if remaining == 0 {
            out.push(w.clone());
        }
        return;
    }
    let slots = (len - w.len()) as u32;
    for &a in letters {
        let n = norm[a];
        // every later letter has norm at least 1
        if n <= remaining && remaining - n >= slots - 1 {
            w.push(a);
            fill_norm(letters, norm, len, remaining - n, w, out);
            w.pop();
        }
    }
}

/// Connected components of the move graph, members in (length, lex) order,
/// components ordered by representative.
fn components(q: &FinitePMQ, universe: Universe, budget: u64) -> Result<Vec<Vec<Word>>> {
    let words = enumerate_words(q, universe, budget)?;
    let index: HashMap<&[usize], u32> = words
        .iter()
        .enumerate()
        .map(|(i, w)| (w.as_slice(), i as u32))
        .collect();
    let moves = Moves::new(q);
    let edges: Vec<(u32, u32)> = words
        .par_iter()
        .enumerate()
        .flat_map_iter(|(id, w)| {
            let mut local = Vec::new();
            for i in 0..w.len().saturating_sub(1) {
                let swapped = moves.forward_swap(w, i);
                local.push((id as u32, index[swapped.as_slice()]));
                if let Some(c) = moves.contraction(w, i) {
                    local.push((id as u32, index[c.as_slice()]));
                }
            }
            local
        })
        .collect();
    let mut uf = UnionFind::<u32>::new(words.len());
    for (a, b) in edges {
        uf.union(a, b);
    }
    let mut slot: HashMap<u32, usize> = HashMap::new();
    let mut classes: Vec<Vec<Word>> = Vec::new();
    for (id, w) in words.iter().enumerate() {
        let root = uf.find(id as u32);
        let k = *slot.entry(root).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[k].push(w.clone());
    }
    // first members increase with class index since words are scanned in order
    Ok(classes)
}

/// All elements of `Q̂_ν`, sorted by canonical representative.
pub fn completion_classes(q: &FinitePMQ, nu: u32, members: bool, budget: u64) -> Result<Vec<CompletionClass>> {
    q.require_norm()?;
    q.require_augmented()?;
    Ok(components(q, Universe::Norm(nu), budget)?
        .into_iter()
        .map(|class| CompletionClass {
            parent: q.fingerprint(),
            norm: nu,
            rep: class[0].clone(),
            size: class.len(),
            members: members.then_some(class),
        })
        .collect())
}

fn bfs_component(q: &FinitePMQ, start: Word, universe: Universe, budget: u64) -> Result<Vec<Word>> {
    let moves = Moves::new(q);
    let mut seen: HashSet<Word> = HashSet::new();
    seen.insert(start.clone());
    let mut queue = VecDeque::from([start]);
    while let Some(w) = queue.pop_front() {
        for x in moves.neighbors(&w, universe) {
            if !seen.contains(&x) {
                check_budget("completion class search", seen.len() as u128 + 1, budget)?;
                seen.insert(x.clone());
                queue.push_back(x);
            }
        }
    }
    let mut members: Vec<Word> = seen.into_iter().collect();
    members.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(members)
}

/// The element of `Q̂` represented by `letters` (unit letters are dropped),
/// found by breadth-first search.
pub fn class_of_word(q: &FinitePMQ, letters: &[usize], budget: u64) -> Result<CompletionClass> {
    q.require_augmented()?;
    let w = normalize_word(q, letters);
    check_word(q, &w)?;
    let nu = word_norm(q, &w)?;
    let members = bfs_component(q, w, Universe::Norm(nu), budget)?;
    Ok(CompletionClass {
        parent: q.fingerprint(),
        norm: nu,
        rep: members[0].clone(),
        size: members.len(),
        members: Some(members),
    })
}

/// Product in `Q̂`: the class of the concatenated representatives.
pub fn completion_multiply(
    q: &FinitePMQ,
    x: &CompletionClass,
    y: &CompletionClass,
    budget: u64,
) -> Result<CompletionClass> {
    if !x.belongs_to(q) || !y.belongs_to(q) {
        return Err(Error::ParentMismatch);
    }
    let mut w = x.rep.clone();
    w.extend_from_slice(&y.rep);
    class_of_word(q, &w, budget)
}

/// Total monodromy `e(a₁)···e(a_k)` of the representative. When the
/// members are materialized every member is checked to give the same value.
pub fn total_monodromy(x: &CompletionClass, pair: &PMQGroupPair) -> Result<usize> {
    if !x.belongs_to(pair.pmq()) {
        return Err(Error::ParentMismatch);
    }
    let g = pair.group();
    let of = |w: &[usize]| g.product(w.iter().map(|&a| pair.e(a)));
    let value = of(&x.rep);
    if let Some(members) = &x.members {
        if let Some(w) = members.iter().find(|w| of(w) != value) {
            return Err(Error::Inconsistent(format!(
                "words {:?} and {:?} of one class have different monodromy",
                x.rep, w
            )));
        }
    }
    Ok(value)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CollapseLevel {
    pub cap: usize,
    pub words: usize,
    pub classes: usize,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CollapseReport {
    pub order: usize,
    pub levels: Vec<CollapseLevel>,
    pub ok: bool,
}

/// For a complete PMQ (a group), checks for every cap `1..=max_cap` that
/// the words of length at most the cap fall into exactly one class per
/// group element: classes are in bijection with their products.
pub fn complete_pmq_collapse_check(q: &FinitePMQ, max_cap: usize, budget: u64) -> Result<CollapseReport> {
    if max_cap < 1 {
        return Err(Error::Precondition("the length cap must be at least 1".into()));
    }
    if !q.is_complete() {
        return Err(Error::Precondition("the PMQ does not have a total product".into()));
    }
    let product = |w: &[usize]| {
        w.iter()
            .fold(q.unit(), |acc, &a| q.prod(acc, a).expect("total product"))
    };
    let mut levels = Vec::new();
    for cap in 1..=max_cap {
        let classes = components(q, Universe::MaxLength(cap), budget)?;
        let words = classes.iter().map(Vec::len).sum();
        let mut hit = vec![false; q.size()];
        let mut ok = classes.len() == q.size();
        for class in &classes {
            let p = product(&class[0]);
            ok &= !hit[p] && class.iter().all(|w| product(w) == p);
            hit[p] = true;
        }
        levels.push(CollapseLevel {
            cap,
            words,
            classes: classes.len(),
            ok,
        });
    }
    Ok(CollapseReport {
        order: q.size(),
        ok: levels.iter().all(|l| l.ok),
        levels,
    })
}
