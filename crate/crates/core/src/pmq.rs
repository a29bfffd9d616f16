//! Finite partially multiplicative quandles given by explicit tables.
//!
//! Elements are dense indices `0..n`. The conjugation table is total,
//! `conj(a, b) = a^b`; the product table is partial, `None` marks an
//! undefined product. A norm, when present, is a vector of naturals.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};

use petgraph::unionfind::UnionFind;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Unvalidated input tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PmqTables {
    pub unit: usize,
    pub conj: Vec<Vec<usize>>,
    pub prod: Vec<Vec<Option<usize>>>,
    pub norm: Option<Vec<u32>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    /// `a ↦ a^b` is injective for every `b`. Witness `(a, a', b)`.
    ConjBijective,
    /// `a^𝟙 = a`. Witness `(a)`.
    ConjByUnit,
    /// `𝟙^b = 𝟙`. Witness `(b)`.
    UnitConj,
    /// `a^a = a`. Witness `(a)`.
    Idempotent,
    /// `(a^b)^c = (a^c)^(b^c)`. Witness `(a, b, c)`.
    SelfDistributive,
    /// `𝟙a = a𝟙 = a`, always defined. Witness `(a)`.
    ProductUnit,
    /// `(ab)c = a(bc)` when both are defined. Witness `(a, b, c)`.
    Associative,
    /// `ab, (ab)c` defined iff `bc, a(bc)` defined. Witness `(a, b, c)`.
    AssociativeDefinedness,
    /// `c^(ab) = (c^a)^b` when `ab` is defined. Witness `(a, b, c)`.
    ConjByProduct,
    /// `(ab)^c = a^c b^c`, the right side defined. Witness `(a, b, c)`.
    ProductConj,
    /// `ab = b (a^b)`, the right side defined. Witness `(a, b)`.
    Swap,
    /// `N(𝟙) = 0`. Witness `(𝟙)`.
    NormUnit,
    /// `N(a) ≥ 1` for `a ≠ 𝟙`. Witness `(a)`.
    NormPositive,
    /// `N(a^b) = N(a)`. Witness `(a, b)`.
    NormConjInvariant,
    /// `N(ab) = N(a) + N(b)`. Witness `(a, b)`.
    NormAdditive,
}

impl Axiom {
    pub fn id(self) -> &'static str {
        match self {
            Axiom::ConjBijective => "conj-bijective",
            Axiom::ConjByUnit => "conj-by-unit",
            Axiom::UnitConj => "unit-conj",
            Axiom::Idempotent => "idempotent",
            Axiom::SelfDistributive => "self-distributive",
            Axiom::ProductUnit => "product-unit",
            Axiom::Associative => "associative",
            Axiom::AssociativeDefinedness => "associative-definedness",
            Axiom::ConjByProduct => "conj-by-product",
            Axiom::ProductConj => "product-conj",
            Axiom::Swap => "swap",
            Axiom::NormUnit => "norm-unit",
            Axiom::NormPositive => "norm-positive",
            Axiom::NormConjInvariant => "norm-conj-invariant",
            Axiom::NormAdditive => "norm-additive",
        }
    }
}

/// One failing axiom with its lexicographically minimal witness and the
/// number of failing instances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: Vec<usize>,
    pub count: u64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {:?} ({} instance", self.axiom.id(), self.witness, self.count)?;
        if self.count != 1 {
            write!(f, "s")?;
        }
        write!(f, ")")
    }
}

/// A validated finite PMQ. Immutable once built.
#[derive(Debug, Clone)]
pub struct FinitePMQ {
    size: usize,
    unit: usize,
    conj: Vec<usize>,
    prod: Vec<Option<usize>>,
    norm: Option<Vec<u32>>,
    fingerprint: u64,
}

impl PartialEq for FinitePMQ {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size
            && self.unit == other.unit
            && self.conj == other.conj
            && self.prod == other.prod
            && self.norm == other.norm
    }
}

impl Eq for FinitePMQ {}

impl FinitePMQ {
    /// Checks table shapes and ranges, then every axiom over all triples.
    pub fn validate(tables: PmqTables) -> Result<Self> {
        let pmq = Self::from_tables_unchecked(tables)?;
        let violations = pmq.violations();
        if violations.is_empty() {
            Ok(pmq)
        } else {
            Err(Error::PmqAxioms(violations))
        }
    }

    /// Shape and range checks only; the axioms are not evaluated.
    pub(crate) fn from_tables_unchecked(tables: PmqTables) -> Result<Self> {
        let PmqTables {
            unit,
            conj,
            prod,
            norm,
        } = tables;
        let n = conj.len();
        if n == 0 {
            return Err(Error::Malformed("PMQ carrier is empty".into()));
        }
        if unit >= n {
            return Err(Error::Malformed(format!("unit {unit} is out of range for size {n}")));
        }
        if prod.len() != n {
            return Err(Error::Malformed(format!(
                "prod has {} rows, expected {n}",
                prod.len()
            )));
        }
        let mut flat_conj = Vec::with_capacity(n * n);
        for (i, row) in conj.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Malformed(format!(
                    "conj row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
            if let Some((j, x)) = row.iter().enumerate().find(|(_, &x)| x >= n) {
                return Err(Error::Malformed(format!("conj[{i}][{j}] = {x} is out of range")));
            }
            flat_conj.extend_from_slice(row);
        }
        let mut flat_prod = Vec::with_capacity(n * n);
        for (i, row) in prod.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Malformed(format!(
                    "prod row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
            if let Some((j, x)) = row
                .iter()
                .enumerate()
                .find_map(|(j, x)| x.filter(|&x| x >= n).map(|x| (j, x)))
            {
                return Err(Error::Malformed(format!("prod[{i}][{j}] = {x} is out of range")));
            }
            flat_prod.extend_from_slice(row);
        }
        if let Some(norm) = &norm {
            if norm.len() != n {
                return Err(Error::Malformed(format!(
                    "norm has length {}, expected {n}",
                    norm.len()
                )));
            }
        }
        let mut hasher = DefaultHasher::new();
        (n, unit, &flat_conj, &flat_prod, &norm).hash(&mut hasher);
        Ok(FinitePMQ {
            size: n,
            unit,
            conj: flat_conj,
            prod: flat_prod,
            norm,
            fingerprint: hasher.finish(),
        })
    }

    /// Every failing axiom, in declaration order of [`Axiom`].
    pub fn violations(&self) -> Vec<Violation> {
        let n = self.size;
        let u = self.unit;
        let conj = |a, b| self.conj(a, b);
        let prod = |a, b| self.prod(a, b);
        let mut out = Vec::new();
        let mut check = |axiom: Axiom, arity: usize, bad: &(dyn Fn(&[usize]) -> bool + Sync)| {
            if let Some((witness, count)) = first_witness(n, arity, bad) {
                out.push(Violation {
                    axiom,
                    witness,
                    count,
                });
            }
        };

        check(Axiom::ConjBijective, 3, &|w| {
            w[0] < w[1] && conj(w[0], w[2]) == conj(w[1], w[2])
        });
        check(Axiom::ConjByUnit, 1, &|w| conj(w[0], u) != w[0]);
        check(Axiom::UnitConj, 1, &|w| conj(u, w[0]) != u);
        check(Axiom::Idempotent, 1, &|w| conj(w[0], w[0]) != w[0]);
        check(Axiom::SelfDistributive, 3, &|w| {
            let (a, b, c) = (w[0], w[1], w[2]);
            conj(conj(a, b), c) != conj(conj(a, c), conj(b, c))
        });
        check(Axiom::ProductUnit, 1, &|w| {
            prod(u, w[0]) != Some(w[0]) || prod(w[0], u) != Some(w[0])
        });
        check(Axiom::Associative, 3, &|w| {
            let (a, b, c) = (w[0], w[1], w[2]);
            let left = prod(a, b).and_then(|ab| prod(ab, c));
            let right = prod(b, c).and_then(|bc| prod(a, bc));
            matches!((left, right), (Some(x), Some(y)) if x != y)
        });
        check(Axiom::AssociativeDefinedness, 3, &|w| {
            let (a, b, c) = (w[0], w[1], w[2]);
            let left = prod(a, b).and_then(|ab| prod(ab, c)).is_some();
            let right = prod(b, c).and_then(|bc| prod(a, bc)).is_some();
            left != right
        });
        check(Axiom::ConjByProduct, 3, &|w| {
            let (a, b, c) = (w[0], w[1], w[2]);
            prod(a, b).is_some_and(|ab| conj(c, ab) != conj(conj(c, a), b))
        });
        check(Axiom::ProductConj, 3, &|w| {
            let (a, b, c) = (w[0], w[1], w[2]);
            prod(a, b).is_some_and(|ab| prod(conj(a, c), conj(b, c)) != Some(conj(ab, c)))
        });
        check(Axiom::Swap, 2, &|w| {
            let (a, b) = (w[0], w[1]);
            prod(a, b).is_some_and(|ab| prod(b, conj(a, b)) != Some(ab))
        });
        if let Some(norm) = self.norm.as_deref() {
            check(Axiom::NormUnit, 1, &|w| w[0] == u && norm[u] != 0);
            check(Axiom::NormPositive, 1, &|w| w[0] != u && norm[w[0]] == 0);
            check(Axiom::NormConjInvariant, 2, &|w| norm[conj(w[0], w[1])] != norm[w[0]]);
            check(Axiom::NormAdditive, 2, &|w| {
                prod(w[0], w[1]).is_some_and(|ab| norm[ab] != norm[w[0]] + norm[w[1]])
            });
        }
        out
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    /// `a^b`.
    #[inline]
    pub fn conj(&self, a: usize, b: usize) -> usize {
        self.conj[a * self.size + b]
    }

    /// `ab`, or `None` when undefined.
    #[inline]
    pub fn prod(&self, a: usize, b: usize) -> Option<usize> {
        self.prod[a * self.size + b]
    }

    /// The unique `c` with `c^b = a`.
    pub fn conj_inverse(&self, a: usize, b: usize) -> usize {
        (0..self.size)
            .find(|&c| self.conj(c, b) == a)
            .expect("conjugation is bijective on a validated PMQ")
    }

    pub fn norm(&self) -> Option<&[u32]> {
        self.norm.as_deref()
    }

    pub fn is_normed(&self) -> bool {
        self.norm.is_some()
    }

    pub(crate) fn require_norm(&self) -> Result<&[u32]> {
        self.norm
            .as_deref()
            .ok_or_else(|| Error::Precondition("the PMQ has no norm".into()))
    }

    /// Stable identity of the tables, used to detect mixing of PMQs.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// `Q₊ = Q ∖ {𝟙}` in index order.
    pub fn positive_elements(&self) -> Vec<usize> {
        (0..self.size).filter(|&a| a != self.unit).collect()
    }

    /// A pair of non-units whose product is the unit, if any.
    pub fn augmentation_witness(&self) -> Option<(usize, usize)> {
        let u = self.unit;
        (0..self.size)
            .flat_map(|a| (0..self.size).map(move |b| (a, b)))
            .find(|&(a, b)| a != u && b != u && self.prod(a, b) == Some(u))
    }

    pub fn is_augmented(&self) -> bool {
        self.augmentation_witness().is_none()
    }

    pub(crate) fn require_augmented(&self) -> Result<()> {
        match self.augmentation_witness() {
            None => Ok(()),
            Some((a, b)) => Err(Error::Precondition(format!(
                "the PMQ is not augmented: {a}·{b} is the unit"
            ))),
        }
    }

    /// No product of two non-units is defined.
    pub fn has_trivial_product(&self) -> bool {
        let u = self.unit;
        (0..self.size).all(|a| {
            a == u || (0..self.size).all(|b| b == u || self.prod(a, b).is_none())
        })
    }

    pub fn is_complete(&self) -> bool {
        self.prod.iter().all(Option::is_some)
    }

    pub fn conj_table(&self) -> Vec<Vec<usize>> {
        self.conj.chunks(self.size).map(<[usize]>::to_vec).collect()
    }

    pub fn prod_table(&self) -> Vec<Vec<Option<usize>>> {
        self.prod.chunks(self.size).map(<[Option<usize>]>::to_vec).collect()
    }

    pub fn tables(&self) -> PmqTables {
        PmqTables {
            unit: self.unit,
            conj: self.conj_table(),
            prod: self.prod_table(),
            norm: self.norm.clone(),
        }
    }

    /// The isomorphic PMQ with element `a` renamed to `sigma[a]`.
    pub fn relabeled(&self, sigma: &[usize]) -> Result<Self> {
        if sigma.len() != self.size || !crate::group::is_permutation(sigma) {
            return Err(Error::Malformed("relabeling is not a permutation of the carrier".into()));
        }
        let n = self.size;
        let inv = crate::group::perm_inverse(sigma);
        let conj = (0..n)
            .map(|x| (0..n).map(|y| sigma[self.conj(inv[x], inv[y])]).collect())
            .collect();
        let prod = (0..n)
            .map(|x| (0..n).map(|y| self.prod(inv[x], inv[y]).map(|z| sigma[z])).collect())
            .collect();
        let norm = self
            .norm
            .as_ref()
            .map(|v| (0..n).map(|x| v[inv[x]]).collect());
        Self::validate(PmqTables {
            unit: sigma[self.unit],
            conj,
            prod,
            norm,
        })
    }
}

/// Lexicographically first tuple in `0..n`^arity satisfying `bad`, and the
/// total number of such tuples. Parallel over the first coordinate.
fn first_witness(
    n: usize,
    arity: usize,
    bad: &(dyn Fn(&[usize]) -> bool + Sync),
) -> Option<(Vec<usize>, u64)> {
    let (first, count) = (0..n)
        .into_par_iter()
        .map(|head| {
            let mut w = vec![0; arity];
            w[0] = head;
            let mut first: Option<Vec<usize>> = None;
            let mut count = 0u64;
            loop {
                if bad(&w) {
                    count += 1;
                    if first.is_none() {
                        first = Some(w.clone());
                    }
                }
                // odometer over coordinates 1..arity
                let mut k = arity;
                loop {
                    if k <= 1 {
                        return (first, count);
                    }
                    k -= 1;
                    w[k] += 1;
                    if w[k] < n {
                        break;
                    }
                    w[k] = 0;
                }
            }
        })
        .reduce(
            || (None, 0),
            |(fa, ca), (fb, cb)| {
                let first = match (fa, fb) {
                    (Some(x), Some(y)) => Some(x.min(y)),
                    (x, y) => x.or(y),
                };
                (first, ca + cb)
            },
        );
    first.map(|w| (w, count))
}

/// Orbits of the carrier `0..n` under a family of permutations, each orbit
/// sorted, ordered by minimal member.
pub fn orbits<'a, I>(n: usize, generators: I) -> Vec<Vec<usize>>
where
    I: IntoIterator<Item = &'a [usize]>,
{
    let mut uf = UnionFind::<usize>::new(n);
    for g in generators {
        for (a, &b) in g.iter().enumerate() {
            uf.union(a, b);
        }
    }
    let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
    for a in 0..n {
        by_root[uf.find(a)].push(a);
    }
    let mut classes: Vec<Vec<usize>> = by_root.into_iter().filter(|c| !c.is_empty()).collect();
    classes.sort_by_key(|c| c[0]);
    classes
}

/// Orbits under the internal conjugations `a ↦ a^b`.
pub fn conjugacy_classes(q: &FinitePMQ) -> Vec<Vec<usize>> {
    let columns: Vec<Vec<usize>> = (0..q.size())
        .map(|b| (0..q.size()).map(|a| q.conj(a, b)).collect())
        .collect();
    orbits(q.size(), columns.iter().map(Vec::as_slice))
}
