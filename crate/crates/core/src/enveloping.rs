//! Finite shadows of the enveloping group `𝒢(Q)`.
//!
//! The conjugation action `ρ: 𝒢(Q) -> Aut(Q)^op` has finite image
//! `𝒢(Q)/𝒦(Q)`: the permutations of the carrier generated by
//! `φ_b: a ↦ a^b`. Permutations compose left factor first, so the image
//! acts on the right and `a^{φ_b} = a^b` holds literally.

use std::collections::BTreeSet;

use num::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{close_permutations, FiniteGroup, Perm};
use crate::pair::PMQGroupPair;
use crate::pmq::FinitePMQ;
use crate::snf::invariant_factors;

/// The inner-automorphism image, with `e_bar[b]` the index of `φ_b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationGroup {
    pub perms: Vec<Perm>,
    pub group: FiniteGroup,
    pub e_bar: Vec<usize>,
}

impl PermutationGroup {
    pub fn order(&self) -> usize {
        self.perms.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianInvariants {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

pub const DEFAULT_GROUP_BUDGET: u64 = 10_000_000;

fn factorial_bound(n: usize) -> u128 {
    (1..=n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k)).unwrap_or(u128::MAX)
}

pub fn inner_automorphism_group(q: &FinitePMQ, budget: u64) -> Result<PermutationGroup> {
    let n = q.size();
    let gens: Vec<Perm> = (0..n).map(|b| (0..n).map(|a| q.conj(a, b)).collect()).collect();
    let perms = close_permutations(&gens, n, budget)?;
    let bound = factorial_bound(n);
    if perms.len() as u128 > bound || !bound.is_multiple_of(perms.len() as u128) {
        return Err(Error::Inconsistent(format!(
            "closure of order {} does not divide {n}!",
            perms.len()
        )));
    }
    let group = FiniteGroup::from_closed_permutations(&perms)?;
    let e_bar = gens
        .iter()
        .map(|g| perms.binary_search(g).expect("generators lie in their closure"))
        .collect();
    Ok(PermutationGroup { perms, group, e_bar })
}

/// `(Q, 𝒢(Q)/𝒦(Q), ē, r)` with `r` the defining permutation action.
pub fn canonical_pair(q: &FinitePMQ, budget: u64) -> Result<PMQGroupPair> {
    let inner = inner_automorphism_group(q, budget)?;
    PMQGroupPair::validate(q.clone(), inner.group, inner.e_bar, inner.perms)
}

/// Generators (the elements of `Q₊`) and the deduplicated integer relation
/// rows of the abelianized presentation: `a - a^b` for all `a, b`, and
/// `a + b - ab` whenever `ab` is defined (the last term dropped when `ab`
/// is the unit).
pub fn relation_matrix(q: &FinitePMQ) -> (Vec<usize>, Vec<Vec<i64>>) {
    let gens = q.positive_elements();
    let col = |a: usize| gens.binary_search(&a).ok();
    let mut rows: BTreeSet<Vec<i64>> = BTreeSet::new();
    for &a in &gens {
        for b in 0..q.size() {
            let c = q.conj(a, b);
            if c != a {
                let mut row = vec![0; gens.len()];
                row[col(a).unwrap()] += 1;
                row[col(c).unwrap()] -= 1;
                rows.insert(row);
            }
        }
        for &b in &gens {
            if let Some(ab) = q.prod(a, b) {
                let mut row = vec![0; gens.len()];
                row[col(a).unwrap()] += 1;
                row[col(b).unwrap()] += 1;
                if let Some(k) = col(ab) {
                    row[k] -= 1;
                }
                if row.iter().any(|&x| x != 0) {
                    rows.insert(row);
                }
            }
        }
    }
    (gens, rows.into_iter().collect())
}

/// Invariants of `ℤ^{Q₊} / relations`.
pub fn enveloping_abelianization(q: &FinitePMQ) -> Result<AbelianInvariants> {
    let (gens, rows) = relation_matrix(q);
    let diag = invariant_factors(&rows);
    let torsion = diag
        .iter()
        .filter(|d| **d > 1.into())
        .map(|d| {
            d.to_u64()
                .ok_or_else(|| Error::Inconsistent(format!("torsion coefficient {d} overflows")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AbelianInvariants {
        rank: gens.len() - diag.len(),
        torsion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    #[test]
    fn orders() {
        assert_eq!(inner_automorphism_group(&builtins::unit(), 100).unwrap().order(), 1);
        let s3 = builtins::complete("S3").unwrap();
        assert_eq!(inner_automorphism_group(&s3, 100).unwrap().order(), 6);
        let t = builtins::trivial_s3_transpositions().pmq;
        assert_eq!(inner_automorphism_group(&t, 100).unwrap().order(), 6);
        // abelian groups have trivial inner automorphisms
        let z4 = builtins::complete("Z4").unwrap();
        assert_eq!(inner_automorphism_group(&z4, 100).unwrap().order(), 1);
        // Inn(S₄) ≅ S₄, Inn(Q₈) ≅ V₄
        assert_eq!(inner_automorphism_group(&builtins::complete("S4").unwrap(), 100).unwrap().order(), 24);
        assert_eq!(inner_automorphism_group(&builtins::complete("Q8").unwrap(), 100).unwrap().order(), 4);
    }

    #[test]
    fn e_bar_realizes_conjugation() {
        let q = builtins::geodesic_symmetric(3).pmq;
        let inner = inner_automorphism_group(&q, 100).unwrap();
        for a in 0..q.size() {
            for b in 0..q.size() {
                assert_eq!(inner.perms[inner.e_bar[b]][a], q.conj(a, b));
            }
        }
        // ē(ab) = ē(a)ē(b) whenever ab is defined
        for a in 0..q.size() {
            for b in 0..q.size() {
                if let Some(ab) = q.prod(a, b) {
                    assert_eq!(inner.e_bar[ab], inner.group.mul(inner.e_bar[a], inner.e_bar[b]));
                }
            }
        }
    }

    #[test]
    fn canonical_pairs() {
        let p = canonical_pair(&builtins::unit(), 100).unwrap();
        assert_eq!(p.group().order(), 1);
        let p = canonical_pair(&builtins::geodesic_symmetric(3).pmq, 100).unwrap();
        assert_eq!(p.group().order(), 6);
    }

    #[test]
    fn abelianization_examples() {
        let ab = |q: &FinitePMQ| enveloping_abelianization(q).unwrap();
        assert_eq!(ab(&builtins::unit()), AbelianInvariants { rank: 0, torsion: vec![] });
        assert_eq!(ab(&builtins::trivial_s3_transpositions().pmq), AbelianInvariants { rank: 1, torsion: vec![] });
        assert_eq!(ab(&builtins::trivial_s3_nonidentity().pmq), AbelianInvariants { rank: 2, torsion: vec![] });
        assert_eq!(ab(&builtins::geodesic_symmetric(3).pmq), AbelianInvariants { rank: 1, torsion: vec![] });
        // a complete PMQ presents the group itself: 𝒢(Z/4) = Z/4
        assert_eq!(ab(&builtins::complete("Z4").unwrap()), AbelianInvariants { rank: 0, torsion: vec![4] });
        assert_eq!(ab(&builtins::complete("S3").unwrap()), AbelianInvariants { rank: 0, torsion: vec![2] });
    }
}
