//! Sullivan models of `𝒜(Q)` for trivial-product PMQs and the stable
//! rational Betti numbers of classical Hurwitz spaces.
//!
//! With no products among non-units, `𝒜(Q) = ℚ[x_S]/(x_S²)` over the
//! classes `S ⊂ Q₊`, each `x_S` in degree 2. Its minimal model is
//! `ℚ[x_S] ⊗ Λ[y_S]` with `|y_S| = 3` and `dy_S = x_S²`. Looping twice lowers
//! every degree by two; on the unit component this leaves the exterior
//! algebra on the shifted `y_S` in degree 1, so `b_i = C(k, i)`.

use num::integer::binomial;
use num::{BigRational, One};
use serde::Serialize;

use crate::cdga::{FreeCdga, Generator, Polynomial, DEFAULT_MONOMIAL_BUDGET};
use crate::construct::{from_group_subset, Mode};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::pair::PMQGroupPair;
use crate::pmq::{conjugacy_classes, FinitePMQ};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SullivanModel {
    /// The classes `S ⊂ Q₊`, one `(x_S, y_S)` pair each.
    pub classes: Vec<Vec<usize>>,
    /// Generators `x_1 … x_k, y_1 … y_k`.
    pub algebra: FreeCdga,
}

impl SullivanModel {
    pub fn k(&self) -> usize {
        self.classes.len()
    }
}

fn positive_classes(q: &FinitePMQ, pair: Option<&PMQGroupPair>) -> Result<Vec<Vec<usize>>> {
    if !q.has_trivial_product() {
        return Err(Error::Precondition(
            "the PMQ has products of non-units; only the trivial-product case has a model".into(),
        ));
    }
    let classes = match pair {
        Some(p) if p.pmq() != q => return Err(Error::ParentMismatch),
        Some(p) => p.orbits(),
        None => conjugacy_classes(q),
    };
    Ok(classes.into_iter().filter(|s| s != &[q.unit()]).collect())
}

pub fn sullivan_model(q: &FinitePMQ, pair: Option<&PMQGroupPair>) -> Result<SullivanModel> {
    let classes = positive_classes(q, pair)?;
    let k = classes.len();
    let mut generators = Vec::with_capacity(2 * k);
    for s in 1..=k {
        generators.push(Generator { name: format!("x{s}"), degree: 2 });
    }
    for s in 1..=k {
        generators.push(Generator { name: format!("y{s}"), degree: 3 });
    }
    let mut d = vec![Polynomial::zero(); k];
    for s in 0..k {
        let mut square = vec![0; 2 * k];
        square[s] = 2;
        d.push(Polynomial::monomial(square, BigRational::one()));
    }
    let algebra = FreeCdga::new(generators, d)?;
    for i in 0..2 * k {
        let dd = algebra.differential(&algebra.differential(&algebra.generator(i)));
        if !dd.is_zero() {
            return Err(Error::Inconsistent(format!(
                "d² ≠ 0 on generator {}",
                algebra.generators()[i].name
            )));
        }
    }
    Ok(SullivanModel { classes, algebra })
}

/// `dim H^n` of the model for `n ≤ max_degree`, after checking `d² = 0` on
/// the whole truncated basis.
pub fn model_cohomology(m: &SullivanModel, max_degree: u32, budget: u64) -> Result<Vec<u64>> {
    m.algebra.verify_d_squared(max_degree + 1, budget)?;
    m.algebra.cohomology_dims(max_degree, budget)
}

/// `(C(k,0), …, C(k, max_degree))`, zero past `k`.
pub fn exterior_dims(k: usize, max_degree: usize) -> Vec<u64> {
    (0..=max_degree)
        .map(|i| if i <= k { binomial(k as u64, i as u64) } else { 0 })
        .collect()
}

/// Betti numbers of the unit component of the double loop space. The
/// binomial answer is confirmed against the cohomology of the model
/// shifted down by two.
pub fn loop_twice_betti(q: &FinitePMQ, pair: Option<&PMQGroupPair>, max_degree: u32) -> Result<Vec<u64>> {
    let model = sullivan_model(q, pair)?;
    let expected = exterior_dims(model.k(), max_degree as usize);
    let shifted = model.algebra.shifted(2);
    let computed = shifted.cohomology_dims(max_degree, DEFAULT_MONOMIAL_BUDGET)?;
    if computed != expected {
        return Err(Error::Inconsistent(format!(
            "shifted model has Betti numbers {computed:?}, expected {expected:?}"
        )));
    }
    Ok(expected)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StableBetti {
    pub k: usize,
    /// Conjugacy classes of `G` inside `c`, as group elements.
    pub classes: Vec<Vec<usize>>,
    pub betti: Vec<u64>,
}

/// Stable rational Betti numbers of `Hur^c_{G,n}` on one component.
pub fn stable_hurwitz_betti(g: &FiniteGroup, c: &[usize], max_degree: u32) -> Result<StableBetti> {
    if c.contains(&g.identity()) {
        return Err(Error::Precondition("c contains the identity".into()));
    }
    let built = from_group_subset(g, c, Mode::Trivial, None)?;
    if built.group.subgroup_closure(c).len() != g.order() {
        return Err(Error::Precondition("c does not generate the group".into()));
    }
    let pair = built.pair()?;
    let betti = loop_twice_betti(&built.pmq, Some(&pair), max_degree)?;
    let classes: Vec<Vec<usize>> = positive_classes(&built.pmq, Some(&pair))?
        .into_iter()
        .map(|s| {
            let mut elements: Vec<usize> = s.into_iter().map(|a| built.embedding[a]).collect();
            elements.sort_unstable();
            elements
        })
        .collect();
    Ok(StableBetti { k: classes.len(), classes, betti })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::group::{cyclic_group, symmetric_group};

    #[test]
    fn model_sizes() {
        assert_eq!(sullivan_model(&builtins::unit(), None).unwrap().k(), 0);
        assert_eq!(sullivan_model(&builtins::trivial_s3_transpositions().pmq, None).unwrap().k(), 1);
        assert_eq!(sullivan_model(&builtins::trivial_s3_nonidentity().pmq, None).unwrap().k(), 2);
        let geodesic = builtins::geodesic_symmetric(3).pmq;
        assert!(matches!(sullivan_model(&geodesic, None), Err(Error::Precondition(_))));
        assert!(matches!(loop_twice_betti(&geodesic, None, 3), Err(Error::Precondition(_))));
    }

    #[test]
    fn cohomology_of_models() {
        let m = sullivan_model(&builtins::unit(), None).unwrap();
        assert_eq!(model_cohomology(&m, 4, DEFAULT_MONOMIAL_BUDGET).unwrap(), vec![1, 0, 0, 0, 0]);
        let m = sullivan_model(&builtins::trivial_s3_transpositions().pmq, None).unwrap();
        assert_eq!(model_cohomology(&m, 6, DEFAULT_MONOMIAL_BUDGET).unwrap(), vec![1, 0, 1, 0, 0, 0, 0]);
        let m = sullivan_model(&builtins::trivial_s3_nonidentity().pmq, None).unwrap();
        assert_eq!(model_cohomology(&m, 6, DEFAULT_MONOMIAL_BUDGET).unwrap(), vec![1, 0, 2, 0, 1, 0, 0]);
    }

    #[test]
    fn loop_betti() {
        assert_eq!(loop_twice_betti(&builtins::unit(), None, 3).unwrap(), vec![1, 0, 0, 0]);
        assert_eq!(
            loop_twice_betti(&builtins::trivial_s3_transpositions().pmq, None, 3).unwrap(),
            vec![1, 1, 0, 0]
        );
        assert_eq!(exterior_dims(3, 5), vec![1, 3, 3, 1, 0, 0]);
    }

    #[test]
    fn stable_betti_examples() {
        let (s3, _) = symmetric_group(3);
        let transpositions = builtins::symmetric_subset(3, &[&[2]]);
        let r = stable_hurwitz_betti(&s3, &transpositions, 3).unwrap();
        assert_eq!((r.k, r.betti), (1, vec![1, 1, 0, 0]));
        assert_eq!(r.classes, vec![transpositions.clone()]);

        let nonidentity: Vec<usize> = (0..6).filter(|&x| x != s3.identity()).collect();
        let r = stable_hurwitz_betti(&s3, &nonidentity, 3).unwrap();
        assert_eq!((r.k, r.betti), (2, vec![1, 2, 1, 0]));

        let z2 = cyclic_group(2);
        let r = stable_hurwitz_betti(&z2, &[1], 2).unwrap();
        assert_eq!((r.k, r.betti), (1, vec![1, 1, 0]));
    }

    #[test]
    fn stable_betti_preconditions() {
        let (s3, _) = symmetric_group(3);
        let three_cycles = builtins::symmetric_subset(3, &[&[3]]);
        assert!(matches!(stable_hurwitz_betti(&s3, &three_cycles, 2), Err(Error::Precondition(_))));
        let transpositions = builtins::symmetric_subset(3, &[&[2]]);
        assert!(matches!(stable_hurwitz_betti(&s3, &transpositions[..1], 2), Err(Error::Precondition(_))));
        assert!(matches!(stable_hurwitz_betti(&s3, &[s3.identity()], 2), Err(Error::Precondition(_))));
    }
}
