//! The PMQ ring `ℚ[Q]` and its invariant subring `𝒜(Q)`.
//!
//! `ℚ[Q]` has basis `⟨a⟩` with `⟨a⟩⟨b⟩ = ⟨ab⟩` when `ab` is defined and `0`
//! otherwise. `𝒜(Q)` is spanned by the class sums `⟨S⟩ = Σ_{a∈S} ⟨a⟩` over
//! the orbits of the acting group, graded with `⟨a⟩` in degree `2N(a)`.
//! Without an explicit pair the orbits are the conjugacy classes of `Q`,
//! which are the orbits of the inner-automorphism image `𝒢(Q)/𝒦(Q)`.

use std::collections::BTreeMap;

use num::{BigRational, One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pair::PMQGroupPair;
use crate::pmq::{conjugacy_classes, FinitePMQ};

/// A sparse element of `ℚ[Q]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AQElement {
    parent: u64,
    coeffs: BTreeMap<usize, BigRational>,
}

impl AQElement {
    pub fn zero(q: &FinitePMQ) -> Self {
        AQElement {
            parent: q.fingerprint(),
            coeffs: BTreeMap::new(),
        }
    }

    /// `⟨a⟩`.
    pub fn basis(q: &FinitePMQ, a: usize) -> Result<Self> {
        Self::class_sum(q, &[a])
    }

    /// `⟨S⟩ = Σ_{a∈S} ⟨a⟩`.
    pub fn class_sum(q: &FinitePMQ, s: &[usize]) -> Result<Self> {
        let mut x = Self::zero(q);
        for &a in s {
            if a >= q.size() {
                return Err(Error::Malformed(format!("{a} is not an element of the PMQ")));
            }
            x.add_term(a, BigRational::one());
        }
        Ok(x)
    }

    pub fn from_terms<I>(q: &FinitePMQ, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, BigRational)>,
    {
        let mut x = Self::zero(q);
        for (a, c) in terms {
            if a >= q.size() {
                return Err(Error::Malformed(format!("{a} is not an element of the PMQ")));
            }
            x.add_term(a, c);
        }
        Ok(x)
    }

    fn add_term(&mut self, a: usize, c: BigRational) {
        let entry = self.coeffs.entry(a).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&a);
        }
    }

    pub fn belongs_to(&self, q: &FinitePMQ) -> bool {
        self.parent == q.fingerprint()
    }

    pub fn coeff(&self, a: usize) -> BigRational {
        self.coeffs.get(&a).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &BigRational)> {
        self.coeffs.iter().map(|(&a, c)| (a, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.parent != other.parent {
            return Err(Error::ParentMismatch);
        }
        let mut out = self.clone();
        for (&a, c) in &other.coeffs {
            out.add_term(a, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = AQElement { parent: self.parent, coeffs: BTreeMap::new() };
        for (&a, x) in &self.coeffs {
            out.add_term(a, x * c);
        }
        out
    }

    /// Constant on every orbit of `classes`.
    pub fn is_invariant(&self, classes: &[Vec<usize>]) -> bool {
        classes
            .iter()
            .all(|s| s.iter().all(|&a| self.coeff(a) == self.coeff(s[0])))
    }
}

pub fn pmq_ring_product(q: &FinitePMQ, x: &AQElement, y: &AQElement) -> Result<AQElement> {
    if !x.belongs_to(q) || !y.belongs_to(q) {
        return Err(Error::ParentMismatch);
    }
    let mut out = AQElement::zero(q);
    for (&a, ca) in &x.coeffs {
        for (&b, cb) in &y.coeffs {
            if let Some(ab) = q.prod(a, b) {
                out.add_term(ab, ca * cb);
            }
        }
    }
    Ok(out)
}

/// Orbits spanning `𝒜(Q)`: those of the pair's group action if given,
/// otherwise the conjugacy classes of `Q`.
pub fn invariant_classes(q: &FinitePMQ, pair: Option<&PMQGroupPair>) -> Result<Vec<Vec<usize>>> {
    match pair {
        Some(p) if p.pmq() != q => Err(Error::ParentMismatch),
        Some(p) => Ok(p.orbits()),
        None => Ok(conjugacy_classes(q)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisClass {
    pub class: Vec<usize>,
    pub degree: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedBasis {
    pub classes: Vec<BasisClass>,
}

impl GradedBasis {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.classes.iter().map(|c| c.degree).collect()
    }
}

type Classes = Vec<Vec<usize>>;

fn ordered_classes(q: &FinitePMQ, pair: Option<&PMQGroupPair>) -> Result<(Classes, Option<Vec<u32>>)> {
    let mut classes = invariant_classes(q, pair)?;
    match q.norm() {
        Some(norm) => {
            classes.sort_by_key(|s| (norm[s[0]], s[0]));
            let degrees = classes.iter().map(|s| 2 * norm[s[0]]).collect();
            Ok((classes, Some(degrees)))
        }
        None => Ok((classes, None)),
    }
}

/// Class sums with degrees `2N`, ordered by (degree, least element).
pub fn aq_basis(q: &FinitePMQ, pair: Option<&PMQGroupPair>) -> Result<GradedBasis> {
    q.require_norm()?;
    let (classes, degrees) = ordered_classes(q, pair)?;
    let classes = classes
        .into_iter()
        .zip(degrees.expect("normed"))
        .map(|(class, degree)| BasisClass { class, degree })
        .collect();
    Ok(GradedBasis { classes })
}

/// `⟨S_i⟩⟨S_j⟩ = Σ_t c[i][j][t] ⟨S_t⟩`.
///
/// For a PMQ without a norm the classes are in least-element order and
/// `degrees` is absent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureConstants {
    pub classes: Vec<Vec<usize>>,
    pub degrees: Option<Vec<u32>>,
    constants: Vec<u64>,
}

impl StructureConstants {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn get(&self, i: usize, j: usize, t: usize) -> u64 {
        let k = self.len();
        self.constants[(i * k + j) * k + t]
    }

    /// Nonzero terms of `⟨S_i⟩⟨S_j⟩` as `(t, c)`.
    pub fn terms(&self, i: usize, j: usize) -> Vec<(usize, u64)> {
        (0..self.len())
            .map(|t| (t, self.get(i, j, t)))
            .filter(|&(_, c)| c != 0)
            .collect()
    }

    /// Index of the class containing `a`.
    pub fn class_of(&self, a: usize) -> Option<usize> {
        self.classes.iter().position(|s| s.contains(&a))
    }
}

/// Counts `|{(a, b) ∈ S × S′ : ab defined, ab = x}|` for every `x`.
fn pair_product_counts(q: &FinitePMQ, s: &[usize], t: &[usize]) -> Vec<u64> {
    let mut hits = vec![0u64; q.size()];
    for &a in s {
        for &b in t {
            if let Some(ab) = q.prod(a, b) {
                hits[ab] += 1;
            }
        }
    }
    hits
}

pub fn aq_structure_constants(q: &FinitePMQ, pair: Option<&PMQGroupPair>) -> Result<StructureConstants> {
    let (classes, degrees) = ordered_classes(q, pair)?;
    let k = classes.len();
    let blocks: Vec<Vec<u64>> = (0..k * k)
        .into_par_iter()
        .map(|ij| {
            let (i, j) = (ij / k, ij % k);
            let hits = pair_product_counts(q, &classes[i], &classes[j]);
            let mut row = vec![0u64; k];
            for (t, class) in classes.iter().enumerate() {
                let c = hits[class[0]];
                if let Some(&x) = class.iter().find(|&&x| hits[x] != c) {
                    return Err(Error::Inconsistent(format!(
                        "product of class sums {i} and {j} is not invariant: \
                         coefficient {c} at {} but {} at {x}",
                        class[0], hits[x]
                    )));
                }
                if let (Some(deg), true) = (&degrees, c != 0) {
                    if deg[t] != deg[i] + deg[j] {
                        return Err(Error::Inconsistent(format!(
                            "product of classes {i} and {j} has a term in degree {} instead of {}",
                            deg[t],
                            deg[i] + deg[j]
                        )));
                    }
                }
                row[t] = c;
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    Ok(StructureConstants {
        classes,
        degrees,
        constants: blocks.concat(),
    })
}

/// Coefficients of `t^0, …, t^max_degree`.
pub fn hilbert_series(q: &FinitePMQ, pair: Option<&PMQGroupPair>, max_degree: usize) -> Result<Vec<u64>> {
    let basis = aq_basis(q, pair)?;
    let mut h = vec![0u64; max_degree + 1];
    for c in &basis.classes {
        if let Some(slot) = h.get_mut(c.degree as usize) {
            *slot += 1;
        }
    }
    Ok(h)
}

/// Least `(i, j)` with `⟨S_i⟩⟨S_j⟩ ≠ ⟨S_j⟩⟨S_i⟩`.
pub fn commutativity_witness(sc: &StructureConstants) -> Option<(usize, usize)> {
    let k = sc.len();
    (0..k)
        .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
        .find(|&(i, j)| (0..k).any(|t| sc.get(i, j, t) != sc.get(j, i, t)))
}

/// `None` if `𝒜(Q)` is commutative, else the least non-commuting pair of
/// class indices (in the order of [`aq_structure_constants`]).
pub fn verify_commutativity(q: &FinitePMQ, pair: Option<&PMQGroupPair>) -> Result<Option<(usize, usize)>> {
    Ok(commutativity_witness(&aq_structure_constants(q, pair)?))
}

/// Checks that `(a, b) ↦ (b, a^b)` maps the defined pairs of `S × S′`
/// bijectively onto those of `S′ × S`, preserving products.
pub fn verify_swap_bijection(q: &FinitePMQ, s: &[usize], t: &[usize]) -> Result<()> {
    let defined = |x: &[usize], y: &[usize]| -> Vec<(usize, usize)> {
        x.iter()
            .flat_map(|&a| y.iter().map(move |&b| (a, b)))
            .filter(|&(a, b)| q.prod(a, b).is_some())
            .collect()
    };
    let source = defined(s, t);
    let target = defined(t, s);
    let mut image: Vec<(usize, usize)> = Vec::with_capacity(source.len());
    for &(a, b) in &source {
        let c = q.conj(a, b);
        if q.prod(b, c) != q.prod(a, b) || !s.contains(&c) {
            return Err(Error::Inconsistent(format!(
                "swap of ({a}, {b}) does not land on a defined pair with the same product"
            )));
        }
        image.push((b, c));
    }
    image.sort_unstable();
    let mut target_sorted = target;
    target_sorted.sort_unstable();
    let before = image.len();
    image.dedup();
    if image.len() != before || image != target_sorted {
        return Err(Error::Inconsistent("swap map is not a bijection onto S′ × S".into()));
    }
    Ok(())
}

/// Index of the class `{𝟙}` and a check that it acts as a two-sided unit.
pub fn verify_unit(q: &FinitePMQ, sc: &StructureConstants) -> Result<usize> {
    let u = sc
        .class_of(q.unit())
        .ok_or_else(|| Error::Inconsistent("the unit lies in no class".into()))?;
    if sc.classes[u] != [q.unit()] {
        return Err(Error::Inconsistent("the unit class is not a singleton".into()));
    }
    for j in 0..sc.len() {
        for t in 0..sc.len() {
            let want = u64::from(j == t);
            if sc.get(u, j, t) != want || sc.get(j, u, t) != want {
                return Err(Error::Inconsistent(format!("⟨𝟙⟩ does not act as a unit on class {j}")));
            }
        }
    }
    Ok(u)
}

/// Least `(i, j, l)` with `(⟨S_i⟩⟨S_j⟩)⟨S_l⟩ ≠ ⟨S_i⟩(⟨S_j⟩⟨S_l⟩)`.
pub fn associativity_witness(sc: &StructureConstants) -> Option<(usize, usize, usize)> {
    let k = sc.len();
    let triples: Vec<(usize, usize, usize)> = (0..k * k * k).map(|x| (x / (k * k), (x / k) % k, x % k)).collect();
    triples.into_par_iter().find_first(|&(i, j, l)| {
        (0..k).any(|t| {
            let left: u128 = (0..k).map(|m| sc.get(i, j, m) as u128 * sc.get(m, l, t) as u128).sum();
            let right: u128 = (0..k).map(|m| sc.get(j, l, m) as u128 * sc.get(i, m, t) as u128).sum();
            left != right
        })
    })
}
