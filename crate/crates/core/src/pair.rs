//! PMQ-group pairs `(Q, G, e, r)`: a PMQ, a finite group, a PMQ map
//! `e: Q -> G` and a right action `r` of `G` on `Q` by automorphisms that
//! extends the internal conjugation.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{is_permutation, FiniteGroup};
use crate::pmq::{orbits, FinitePMQ};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairAxiom {
    /// `e(𝟙)` is the identity. Witness `(𝟙)`.
    UnitToIdentity,
    /// `e(a^b) = e(b)⁻¹ e(a) e(b)`. Witness `(a, b)`.
    MapConj,
    /// `e(ab) = e(a) e(b)`. Witness `(a, b)`.
    MapProduct,
    /// `r(g)` is a permutation of the carrier. Witness `(g)`.
    ActionBijective,
    /// `a^{identity} = a`. Witness `(a)`.
    ActionIdentity,
    /// `a^{gh} = (a^g)^h`. Witness `(g, h, a)`.
    ActionComposition,
    /// `𝟙^g = 𝟙`. Witness `(g)`.
    ActionUnit,
    /// `(a^b)^g = (a^g)^(b^g)`. Witness `(g, a, b)`.
    ActionConj,
    /// `(ab)^g = a^g b^g`, with the same definedness. Witness `(g, a, b)`.
    ActionProduct,
    /// `N(a^g) = N(a)`. Witness `(g, a)`.
    ActionNorm,
    /// `a^{r(e(b))} = a^b`. Witness `(a, b)`.
    ExtendsConjugation,
    /// `e(a^g) = g⁻¹ e(a) g`. Witness `(g, a)`.
    MapEquivariant,
    /// `e(Q)` generates `G`. Witness: the proper subgroup reached.
    Generation,
}

impl PairAxiom {
    pub fn id(self) -> &'static str {
        match self {
            PairAxiom::UnitToIdentity => "unit-to-identity",
            PairAxiom::MapConj => "map-conj",
            PairAxiom::MapProduct => "map-product",
            PairAxiom::ActionBijective => "action-bijective",
            PairAxiom::ActionIdentity => "action-identity",
            PairAxiom::ActionComposition => "action-composition",
            PairAxiom::ActionUnit => "action-unit",
            PairAxiom::ActionConj => "action-conj",
            PairAxiom::ActionProduct => "action-product",
            PairAxiom::ActionNorm => "action-norm",
            PairAxiom::ExtendsConjugation => "extends-conjugation",
            PairAxiom::MapEquivariant => "map-equivariant",
            PairAxiom::Generation => "generation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairViolation {
    pub axiom: PairAxiom,
    pub witness: Vec<usize>,
    pub count: u64,
}

impl fmt::Display for PairViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {:?} ({} instances)", self.axiom.id(), self.witness, self.count)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PMQGroupPair {
    pmq: FinitePMQ,
    group: FiniteGroup,
    e: Vec<usize>,
    r: Vec<Vec<usize>>,
}

struct Collector {
    out: Vec<PairViolation>,
}

impl Collector {
    fn record(&mut self, axiom: PairAxiom, witness: &[usize]) {
        match self.out.iter_mut().find(|v| v.axiom == axiom) {
            Some(v) => v.count += 1,
            None => self.out.push(PairViolation {
                axiom,
                witness: witness.to_vec(),
                count: 1,
            }),
        }
    }
}

impl PMQGroupPair {
    /// `r[g][a]` is `a^g`. All axioms are checked exhaustively.
    pub fn validate(pmq: FinitePMQ, group: FiniteGroup, e: Vec<usize>, r: Vec<Vec<usize>>) -> Result<Self> {
        let n = pmq.size();
        let order = group.order();
        if e.len() != n {
            return Err(Error::Malformed(format!("e has length {}, expected {n}", e.len())));
        }
        if let Some((a, &x)) = e.iter().enumerate().find(|(_, &x)| x >= order) {
            return Err(Error::Malformed(format!(
                "e[{a}] = {x} is not an element of the group of order {order}"
            )));
        }
        if r.len() != order {
            return Err(Error::Malformed(format!("r has {} rows, expected {order}", r.len())));
        }
        for (g, row) in r.iter().enumerate() {
            if row.len() != n || row.iter().any(|&x| x >= n) {
                return Err(Error::Malformed(format!(
                    "r[{g}] is not a map of the {n}-element carrier"
                )));
            }
        }
        let pair = PMQGroupPair { pmq, group, e, r };
        let violations = pair.violations();
        if violations.is_empty() {
            Ok(pair)
        } else {
            Err(Error::PairAxioms(violations))
        }
    }

    /// Violations in declaration order of [`PairAxiom`], each with the first
    /// witness met in lexicographic order.
    pub fn violations(&self) -> Vec<PairViolation> {
        let q = &self.pmq;
        let g = &self.group;
        let n = q.size();
        let order = g.order();
        let u = q.unit();
        let e = &self.e;
        let act = |a: usize, x: usize| self.r[x][a];
        let mut c = Collector { out: Vec::new() };

        if e[u] != g.identity() {
            c.record(PairAxiom::UnitToIdentity, &[u]);
        }
        for a in 0..n {
            for b in 0..n {
                if e[q.conj(a, b)] != g.conj(e[a], e[b]) {
                    c.record(PairAxiom::MapConj, &[a, b]);
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if let Some(ab) = q.prod(a, b) {
                    if e[ab] != g.mul(e[a], e[b]) {
                        c.record(PairAxiom::MapProduct, &[a, b]);
                    }
                }
            }
        }
        for x in 0..order {
            if !is_permutation(&self.r[x]) {
                c.record(PairAxiom::ActionBijective, &[x]);
            }
        }
        for a in 0..n {
            if act(a, g.identity()) != a {
                c.record(PairAxiom::ActionIdentity, &[a]);
            }
        }
        for x in 0..order {
            for y in 0..order {
                for a in 0..n {
                    if act(a, g.mul(x, y)) != act(act(a, x), y) {
                        c.record(PairAxiom::ActionComposition, &[x, y, a]);
                    }
                }
            }
        }
        for x in 0..order {
            if act(u, x) != u {
                c.record(PairAxiom::ActionUnit, &[x]);
            }
        }
        for x in 0..order {
            for a in 0..n {
                for b in 0..n {
                    if act(q.conj(a, b), x) != q.conj(act(a, x), act(b, x)) {
                        c.record(PairAxiom::ActionConj, &[x, a, b]);
                    }
                }
            }
        }
        for x in 0..order {
            for a in 0..n {
                for b in 0..n {
                    let lhs = q.prod(a, b).map(|ab| act(ab, x));
                    let rhs = q.prod(act(a, x), act(b, x));
                    if lhs != rhs {
                        c.record(PairAxiom::ActionProduct, &[x, a, b]);
                    }
                }
            }
        }
        if let Some(norm) = q.norm() {
            for x in 0..order {
                for a in 0..n {
                    if norm[act(a, x)] != norm[a] {
                        c.record(PairAxiom::ActionNorm, &[x, a]);
                    }
                }
            }
        }
        for a in 0..n {
            for (b, &eb) in e.iter().enumerate() {
                if act(a, eb) != q.conj(a, b) {
                    c.record(PairAxiom::ExtendsConjugation, &[a, b]);
                }
            }
        }
        for x in 0..order {
            for a in 0..n {
                if e[act(a, x)] != g.conj(e[a], x) {
                    c.record(PairAxiom::MapEquivariant, &[x, a]);
                }
            }
        }
        let reached = g.subgroup_closure(e);
        if reached.len() != order {
            c.record(PairAxiom::Generation, &reached);
        }
        c.out
    }

    pub fn pmq(&self) -> &FinitePMQ {
        &self.pmq
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn e(&self, a: usize) -> usize {
        self.e[a]
    }

    pub fn e_map(&self) -> &[usize] {
        &self.e
    }

    /// `a^g` for a group element `g`.
    pub fn act(&self, a: usize, g: usize) -> usize {
        self.r[g][a]
    }

    pub fn action_table(&self) -> &[Vec<usize>] {
        &self.r
    }

    /// Orbits of the carrier under the full group action.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits(self.pmq.size(), self.r.iter().map(Vec::as_slice))
    }
}
