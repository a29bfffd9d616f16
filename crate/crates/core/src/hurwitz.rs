//! Orbits of the Hurwitz braid action on tuples.
//!
//! The `i`-th move sends `(…, a, b, …)` to `(…, b, a^b, …)`. With
//! `a^b = b⁻¹ab` this preserves the left-to-right product. Tuples are
//! encoded as base-`|c|` integers, most significant position first, so
//! scanning states in increasing order meets each orbit first at its
//! lexicographically least tuple.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_budget, Error, Result};
use crate::group::FiniteGroup;
use crate::pair::PMQGroupPair;

pub const DEFAULT_STATE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Letters closed under conjugation, with a map into a group for the
/// Nielsen invariants.
#[derive(Debug, Clone)]
pub struct HurwitzDomain {
    group: FiniteGroup,
    /// Letter ids as seen by callers, ascending.
    letters: Vec<usize>,
    /// `conj[i * m + j]`: local index of `letters[i]^letters[j]`.
    conj: Vec<usize>,
    /// `conj_inv[i * m + j]`: local `k` with `letters[k]^letters[j] = letters[i]`.
    conj_inv: Vec<usize>,
    to_group: Vec<usize>,
    /// Class label of each letter: least letter id of its class.
    class: Vec<usize>,
}

impl HurwitzDomain {
    /// Tuples over a conjugation-closed subset `c` of a group.
    pub fn from_group(g: &FiniteGroup, c: &[usize]) -> Result<Self> {
        let mut letters = c.to_vec();
        letters.sort_unstable();
        letters.dedup();
        if let Some(&x) = letters.iter().find(|&&x| x >= g.order()) {
            return Err(Error::Malformed(format!("{x} is not a group element")));
        }
        if !g.is_conjugation_closed(&letters) {
            return Err(Error::Precondition("the subset is not closed under conjugation".into()));
        }
        let local = |x: usize| letters.binary_search(&x).expect("closed subset");
        let class: Vec<usize> = letters
            .iter()
            .map(|&a| (0..g.order()).map(|x| g.conj(a, x)).min().unwrap())
            .collect();
        let m = letters.len();
        let conj = (0..m * m)
            .map(|k| local(g.conj(letters[k / m], letters[k % m])))
            .collect();
        Ok(Self::finish(g.clone(), letters.clone(), conj, letters, class))
    }

    /// Tuples over `Q₊` of a pair, with conjugation from the PMQ table and
    /// invariants read in the pair's group.
    pub fn from_pair(pair: &PMQGroupPair) -> Self {
        let q = pair.pmq();
        let letters = q.positive_elements();
        let m = letters.len();
        let local = |x: usize| letters.binary_search(&x).expect("Q₊ is conjugation stable");
        let mut class = vec![0; q.size()];
        for orbit in pair.orbits() {
            for &a in &orbit {
                class[a] = orbit[0];
            }
        }
        let class = letters.iter().map(|&a| class[a]).collect();
        let conj = (0..m * m)
            .map(|k| local(q.conj(letters[k / m], letters[k % m])))
            .collect();
        let to_group = letters.iter().map(|&a| pair.e(a)).collect();
        Self::finish(pair.group().clone(), letters, conj, to_group, class)
    }

    fn finish(group: FiniteGroup, letters: Vec<usize>, conj: Vec<usize>, to_group: Vec<usize>, class: Vec<usize>) -> Self {
        let m = letters.len();
        let mut conj_inv = vec![0; m * m];
        for i in 0..m {
            for j in 0..m {
                conj_inv[conj[i * m + j] * m + j] = i;
            }
        }
        HurwitzDomain {
            group,
            letters,
            conj,
            conj_inv,
            to_group,
            class,
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    fn local(&self, x: usize) -> Result<usize> {
        self.letters
            .binary_search(&x)
            .map_err(|_| Error::Malformed(format!("{x} is not an allowed letter")))
    }

    /// One braid move at position `i`.
    pub fn hurwitz_move(&self, t: &[usize], i: usize, direction: Direction) -> Result<Vec<usize>> {
        if i + 1 >= t.len() {
            return Err(Error::Precondition(format!(
                "position {i} is out of range for a tuple of length {}",
                t.len()
            )));
        }
        let m = self.letters.len();
        let a = self.local(t[i])?;
        let b = self.local(t[i + 1])?;
        let (x, y) = match direction {
            Direction::Forward => (b, self.conj[a * m + b]),
            // inverse of (x, y) -> (y, x^y)
            Direction::Inverse => (self.conj_inv[b * m + a], a),
        };
        let mut out = t.to_vec();
        out[i] = self.letters[x];
        out[i + 1] = self.letters[y];
        Ok(out)
    }

    /// Product of the tuple in the group, left to right.
    pub fn total(&self, t: &[usize]) -> Result<usize> {
        let locals = t.iter().map(|&x| self.local(x)).collect::<Result<Vec<_>>>()?;
        Ok(self.group.product(locals.into_iter().map(|k| self.to_group[k])))
    }

    pub fn invariants(&self, t: &[usize]) -> Result<OrbitInvariants> {
        let locals = t.iter().map(|&x| self.local(x)).collect::<Result<Vec<_>>>()?;
        Ok(self.invariants_local(&locals))
    }

    fn invariants_local(&self, t: &[usize]) -> OrbitInvariants {
        let total = self.group.product(t.iter().map(|&k| self.to_group[k]));
        let mut classes: Vec<usize> = t.iter().map(|&k| self.class[k]).collect();
        classes.sort_unstable();
        let gens: Vec<usize> = t.iter().map(|&k| self.to_group[k]).collect();
        OrbitInvariants {
            total,
            classes,
            subgroup_order: self.group.subgroup_closure(&gens).len(),
        }
    }
}

/// Nielsen-type invariants of a tuple: total product, multiset of classes
/// (each class named by its least letter), order of the generated subgroup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitInvariants {
    pub total: usize,
    pub classes: Vec<usize>,
    pub subgroup_order: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HurwitzOrbit {
    pub rep: Vec<usize>,
    pub size: usize,
    pub total: usize,
    pub classes: Vec<usize>,
    pub subgroup_order: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, Copy)]
pub struct OrbitOptions {
    pub fix_total: Option<usize>,
    pub budget: u64,
    pub keep_members: bool,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        OrbitOptions {
            fix_total: None,
            budget: DEFAULT_STATE_BUDGET,
            keep_members: false,
        }
    }
}

struct Codec {
    m: usize,
    n: usize,
    pow: Vec<u64>,
}

impl Codec {
    fn digit(&self, s: u64, i: usize) -> usize {
        ((s / self.pow[self.n - 1 - i]) % self.m as u64) as usize
    }

    fn decode(&self, s: u64) -> Vec<usize> {
        (0..self.n).map(|i| self.digit(s, i)).collect()
    }

    fn set_pair(&self, s: u64, i: usize, x: usize, y: usize) -> u64 {
        let (pi, pj) = (self.pow[self.n - 1 - i], self.pow[self.n - 2 - i]);
        let (a, b) = (self.digit(s, i) as u64, self.digit(s, i + 1) as u64);
        s - a * pi - b * pj + x as u64 * pi + y as u64 * pj
    }
}

/// Partition of `letters^n` (or of the fibre over `fix_total`) into braid
/// orbits, ordered by least tuple.
pub fn enumerate_orbits(domain: &HurwitzDomain, n: usize, options: OrbitOptions) -> Result<Vec<HurwitzOrbit>> {
    let m = domain.letters.len();
    let states = (m as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    check_budget("Hurwitz tuple space", states, options.budget)?;
    if let Some(g) = options.fix_total {
        if g >= domain.group.order() {
            return Err(Error::Malformed(format!("{g} is not a group element")));
        }
    }
    let states = states as u64;
    let codec = Codec {
        m,
        n,
        pow: (0..=n as u32).map(|k| (m as u64).pow(k)).collect(),
    };
    let in_fibre = |s: u64| {
        options.fix_total.is_none_or(|g| {
            domain.group.product(codec.decode(s).into_iter().map(|k| domain.to_group[k])) == g
        })
    };

    let mut visited = vec![false; states as usize];
    let mut raw: Vec<(u64, Vec<u64>)> = Vec::new();
    for start in 0..states {
        if visited[start as usize] || !in_fibre(start) {
            continue;
        }
        visited[start as usize] = true;
        let mut members = vec![start];
        let mut head = 0;
        while head < members.len() {
            let s = members[head];
            head += 1;
            for i in 0..n.saturating_sub(1) {
                let (a, b) = (codec.digit(s, i), codec.digit(s, i + 1));
                let forward = codec.set_pair(s, i, b, domain.conj[a * m + b]);
                let inverse = codec.set_pair(s, i, domain.conj_inv[b * m + a], a);
                for next in [forward, inverse] {
                    if !visited[next as usize] {
                        visited[next as usize] = true;
                        members.push(next);
                    }
                }
            }
        }
        raw.push((start, members));
    }

    raw.into_par_iter()
        .map(|(start, mut members)| {
            let rep_local = codec.decode(start);
            let inv = domain.invariants_local(&rep_local);
            let to_ids = |t: Vec<usize>| -> Vec<usize> { t.into_iter().map(|k| domain.letters[k]).collect() };
            let size = members.len();
            let kept = if options.keep_members {
                members.sort_unstable();
                let tuples: Vec<Vec<usize>> = members.iter().map(|&s| to_ids(codec.decode(s))).collect();
                for (&s, t) in members.iter().zip(&tuples) {
                    if domain.invariants_local(&codec.decode(s)) != inv {
                        return Err(Error::Inconsistent(format!(
                            "Nielsen invariants differ inside the orbit of {:?} at {t:?}",
                            to_ids(rep_local.clone())
                        )));
                    }
                }
                Some(tuples)
            } else {
                None
            };
            Ok(HurwitzOrbit {
                rep: to_ids(rep_local.clone()),
                size,
                total: inv.total,
                classes: inv.classes,
                subgroup_order: inv.subgroup_order,
                members: kept,
            })
        })
        .collect()
}

/// Invariants of an orbit, recomputed from its representative and checked
/// against every materialized member.
pub fn orbit_invariants(domain: &HurwitzDomain, orbit: &HurwitzOrbit) -> Result<OrbitInvariants> {
    let inv = domain.invariants(&orbit.rep)?;
    for t in orbit.members.iter().flatten() {
        if domain.invariants(t)? != inv {
            return Err(Error::Inconsistent(format!(
                "tuple {t:?} has invariants different from {:?}",
                orbit.rep
            )));
        }
    }
    Ok(inv)
}
