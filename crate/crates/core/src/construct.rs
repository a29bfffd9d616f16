//! PMQs built from a finite group and a conjugation-invariant subset.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::pair::PMQGroupPair;
use crate::pmq::{FinitePMQ, PmqTables};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Carrier `c ∪ {𝟙}`; only products with the unit are defined; norm 1 on `c`.
    Trivial,
    /// Carrier `G` with the full group product; no norm.
    Complete,
    /// Carrier `G` with a supplied norm; `ab` is defined iff `N(a) + N(b) = N(ab)`.
    Geodesic,
}

/// A PMQ together with the group it was cut out of.
#[derive(Debug, Clone)]
pub struct GroupPmq {
    pub pmq: FinitePMQ,
    pub group: FiniteGroup,
    /// PMQ element -> group element.
    pub embedding: Vec<usize>,
}

impl GroupPmq {
    /// The pair with `e` the inclusion and `r` conjugation in the group.
    /// Fails when the subset does not generate the group.
    pub fn pair(&self) -> Result<PMQGroupPair> {
        let g = &self.group;
        let lookup = self.lookup();
        let r = (0..g.order())
            .map(|x| {
                self.embedding
                    .iter()
                    .map(|&a| {
                        lookup[g.conj(a, x)].ok_or_else(|| {
                            Error::Precondition("subset is not closed under conjugation".into())
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        PMQGroupPair::validate(self.pmq.clone(), g.clone(), self.embedding.clone(), r)
    }

    fn lookup(&self) -> Vec<Option<usize>> {
        let mut lookup = vec![None; self.group.order()];
        for (i, &a) in self.embedding.iter().enumerate() {
            lookup[a] = Some(i);
        }
        lookup
    }

    pub fn labels(&self) -> Vec<String> {
        self.embedding.iter().map(|&a| self.group.label(a)).collect()
    }
}

/// Builds and validates the PMQ of `mode` on `g`. `subset` is ignored in
/// complete and geodesic mode; `norm` is required in geodesic mode and is
/// indexed by group element.
pub fn from_group_subset(
    g: &FiniteGroup,
    subset: &[usize],
    mode: Mode,
    norm: Option<&[u32]>,
) -> Result<GroupPmq> {
    let embedding: Vec<usize> = match mode {
        Mode::Trivial => {
            let mut c = subset.to_vec();
            c.sort_unstable();
            c.dedup();
            if let Some(&x) = c.iter().find(|&&x| x >= g.order()) {
                return Err(Error::Malformed(format!("{x} is not a group element")));
            }
            if c.contains(&g.identity()) {
                return Err(Error::Precondition("the subset contains the identity".into()));
            }
            if !g.is_conjugation_closed(&c) {
                return Err(Error::Precondition("the subset is not closed under conjugation".into()));
            }
            std::iter::once(g.identity()).chain(c).collect()
        }
        Mode::Complete | Mode::Geodesic => (0..g.order()).collect(),
    };
    let n = embedding.len();
    let mut lookup = vec![usize::MAX; g.order()];
    for (i, &a) in embedding.iter().enumerate() {
        lookup[a] = i;
    }
    let unit = lookup[g.identity()];
    let conj = embedding
        .iter()
        .map(|&a| embedding.iter().map(|&b| lookup[g.conj(a, b)]).collect())
        .collect();
    let (prod, norm): (Vec<Vec<Option<usize>>>, Option<Vec<u32>>) = match mode {
        Mode::Trivial => {
            let prod = (0..n)
                .map(|a| {
                    (0..n)
                        .map(|b| match (a == unit, b == unit) {
                            (true, _) => Some(b),
                            (_, true) => Some(a),
                            _ => None,
                        })
                        .collect()
                })
                .collect();
            let norm = (0..n).map(|a| u32::from(a != unit)).collect();
            (prod, Some(norm))
        }
        Mode::Complete => {
            let prod = embedding
                .iter()
                .map(|&a| embedding.iter().map(|&b| Some(lookup[g.mul(a, b)])).collect())
                .collect();
            (prod, None)
        }
        Mode::Geodesic => {
            let norm = norm.ok_or_else(|| Error::Precondition("geodesic mode needs a norm".into()))?;
            if norm.len() != g.order() {
                return Err(Error::Malformed(format!(
                    "norm has length {}, expected {}",
                    norm.len(),
                    g.order()
                )));
            }
            let prod = embedding
                .iter()
                .map(|&a| {
                    embedding
                        .iter()
                        .map(|&b| {
                            let ab = g.mul(a, b);
                            (norm[a] + norm[b] == norm[ab]).then_some(lookup[ab])
                        })
                        .collect()
                })
                .collect();
            (prod, Some(embedding.iter().map(|&a| norm[a]).collect()))
        }
    };
    let pmq = FinitePMQ::validate(PmqTables {
        unit,
        conj,
        prod,
        norm,
    })?;
    Ok(GroupPmq {
        pmq,
        group: g.clone(),
        embedding,
    })
}

/// The trivial-product PMQ on `subset`, with the group replaced by the
/// subgroup `subset` generates so that the inclusion pair is valid.
pub fn trivial_over_generated(g: &FiniteGroup, subset: &[usize]) -> Result<GroupPmq> {
    let generated = g.subgroup_closure(subset);
    let (h, embed) = g.induced_subgroup(&generated)?;
    let local: Vec<usize> = subset
        .iter()
        .map(|x| embed.binary_search(x).expect("generators lie in the generated subgroup"))
        .collect();
    from_group_subset(&h, &local, Mode::Trivial, None)
}
