//! Cross-module consistency checks and the run report wrapper.

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::aq::{aq_structure_constants, associativity_witness, commutativity_witness, hilbert_series, verify_swap_bijection, verify_unit};
use crate::completion::{complete_pmq_collapse_check, completion_classes, completion_multiply, total_monodromy};
use crate::enveloping::{canonical_pair, enveloping_abelianization};
use crate::error::{Error, Result};
use crate::hurwitz::{enumerate_orbits, HurwitzDomain, OrbitOptions};
use crate::pair::PMQGroupPair;
use crate::pmq::{conjugacy_classes, FinitePMQ};
use crate::sullivan::{exterior_dims, loop_twice_betti, model_cohomology, sullivan_model};

pub const DEFAULT_CROSSCHECK_BUDGET: u64 = 100_000;

/// Highest norm compared between completion classes and braid orbits.
pub const MAX_CROSSCHECK_NORM: u32 = 4;
/// Degree cap for the ring and model comparisons.
pub const CROSSCHECK_DEGREE: u32 = 8;
/// Word-length cap for the collapse check on complete PMQs.
pub const COLLAPSE_CAP: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: Value,
}

impl Check {
    fn new(name: impl Into<String>, outcome: Result<(bool, Value)>) -> Self {
        let (status, detail) = match outcome {
            Ok((true, d)) => (Status::Pass, d),
            Ok((false, d)) => (Status::Fail, d),
            Err(e @ Error::BudgetExceeded { .. }) => (Status::BudgetExceeded, json!({ "error": e.to_string() })),
            Err(e) => (Status::Fail, json!({ "error": e.to_string() })),
        };
        Check { name: name.into(), status, detail }
    }

    fn skipped(name: impl Into<String>, reason: &str) -> Self {
        Check {
            name: name.into(),
            status: Status::Skipped,
            detail: json!({ "reason": reason }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrosscheckReport {
    pub checks: Vec<Check>,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub budget_exceeded: usize,
}

impl CrosscheckReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    pub fn status_of(&self, name: &str) -> Option<Status> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.status)
    }
}

/// Runs every applicable check. Failures and exhausted budgets are
/// recorded per check; only an invalid pair argument aborts.
pub fn crosscheck(q: &FinitePMQ, pair: Option<&PMQGroupPair>, budget: u64) -> Result<CrosscheckReport> {
    if let Some(p) = pair {
        if p.pmq() != q {
            return Err(Error::ParentMismatch);
        }
    }
    let mut checks = Vec::new();

    let violations = q.violations();
    checks.push(Check::new(
        "pmq-axioms",
        Ok((violations.is_empty(), json!({ "violations": violations.len() }))),
    ));

    let owned;
    let pair = match pair {
        Some(p) => {
            let v = p.violations();
            checks.push(Check::new(
                "pair-axioms",
                Ok((v.is_empty(), json!({ "group_order": p.group().order(), "violations": v.len(), "source": "input" }))),
            ));
            Some(p)
        }
        None => match canonical_pair(q, budget) {
            Ok(p) => {
                let v = p.violations();
                checks.push(Check::new(
                    "pair-axioms",
                    Ok((v.is_empty(), json!({ "group_order": p.group().order(), "violations": v.len(), "source": "inner" }))),
                ));
                owned = p;
                Some(&owned)
            }
            Err(e) => {
                checks.push(Check::new("pair-axioms", Err(e)));
                None
            }
        },
    };

    let graded = q.is_normed() && q.is_augmented();
    let unit_norm_on_positive = q
        .norm()
        .is_some_and(|n| q.positive_elements().iter().all(|&a| n[a] == 1));

    for nu in 1..=MAX_CROSSCHECK_NORM {
        let name = format!("completion-vs-hurwitz-{nu}");
        match pair {
            Some(p) if graded && q.has_trivial_product() && unit_norm_on_positive => {
                checks.push(Check::new(name, completion_vs_hurwitz(q, p, nu, budget)));
            }
            _ => checks.push(Check::skipped(name, "needs a pair and a trivial product with norm 1 on Q₊")),
        }
    }

    match pair {
        Some(p) => checks.push(Check::new("fibre-partition", fibre_partition(p, budget))),
        _ => checks.push(Check::skipped("fibre-partition", "needs a pair")),
    }

    match pair {
        Some(p) if graded => checks.push(Check::new("monodromy-multiplicative", monodromy_multiplicative(q, p, budget))),
        _ => checks.push(Check::skipped("monodromy-multiplicative", "needs a pair and a normed augmented PMQ")),
    }

    ring_checks(q, pair, &mut checks);

    if q.is_normed() && q.has_trivial_product() {
        checks.push(Check::new("hilbert-vs-model", hilbert_vs_model(q, pair, budget)));
        checks.push(Check::new("model-vs-squares-quotient", model_vs_squares_quotient(q, pair, budget)));
        checks.push(Check::new("loop-betti", loop_betti(q, pair)));
    } else {
        checks.push(Check::skipped("hilbert-vs-model", "needs a normed trivial-product PMQ"));
        checks.push(Check::skipped("model-vs-squares-quotient", "needs a normed trivial-product PMQ"));
        checks.push(Check::skipped("loop-betti", "needs a normed trivial-product PMQ"));
    }

    if q.is_complete() {
        let outcome = complete_pmq_collapse_check(q, COLLAPSE_CAP, budget)
            .map(|r| (r.ok, serde_json::to_value(&r).expect("serializable")));
        checks.push(Check::new("collapse", outcome));
    } else {
        checks.push(Check::skipped("collapse", "needs a complete PMQ"));
    }

    checks.push(Check::new("abelianization-rank", abelianization_rank(q)));

    let count = |s: Status| checks.iter().filter(|c| c.status == s).count();
    Ok(CrosscheckReport {
        passed: count(Status::Pass),
        failed: count(Status::Fail),
        skipped: count(Status::Skipped),
        budget_exceeded: count(Status::BudgetExceeded),
        checks,
    })
}

fn completion_vs_hurwitz(q: &FinitePMQ, pair: &PMQGroupPair, nu: u32, budget: u64) -> Result<(bool, Value)> {
    let classes = completion_classes(q, nu, false, budget)?;
    let domain = HurwitzDomain::from_pair(pair);
    let orbits = enumerate_orbits(&domain, nu as usize, OrbitOptions { budget, ..Default::default() })?;
    let mut class_shape: Vec<(Vec<usize>, usize)> = classes.iter().map(|c| (c.rep.clone(), c.size)).collect();
    let mut orbit_shape: Vec<(Vec<usize>, usize)> = orbits.iter().map(|o| (o.rep.clone(), o.size)).collect();
    class_shape.sort();
    orbit_shape.sort();
    Ok((
        class_shape == orbit_shape,
        json!({ "completion_classes": classes.len(), "hurwitz_orbits": orbits.len() }),
    ))
}

/// The orbits on all tuples are the union of the orbits on each fibre of
/// the total product.
fn fibre_partition(pair: &PMQGroupPair, budget: u64) -> Result<(bool, Value)> {
    let domain = HurwitzDomain::from_pair(pair);
    let n = 2;
    let all = enumerate_orbits(&domain, n, OrbitOptions { budget, ..Default::default() })?;
    let mut from_fibres = Vec::new();
    for g in 0..pair.group().order() {
        let options = OrbitOptions { fix_total: Some(g), budget, keep_members: false };
        from_fibres.extend(enumerate_orbits(&domain, n, options)?);
    }
    from_fibres.sort_by(|a, b| a.rep.cmp(&b.rep));
    Ok((all == from_fibres, json!({ "length": n, "orbits": all.len() })))
}

fn monodromy_multiplicative(q: &FinitePMQ, pair: &PMQGroupPair, budget: u64) -> Result<(bool, Value)> {
    let ones = completion_classes(q, 1, true, budget)?;
    let mut products = 0;
    for x in &ones {
        for y in &ones {
            let xy = completion_multiply(q, x, y, budget)?;
            let lhs = total_monodromy(&xy, pair)?;
            let rhs = pair.group().mul(total_monodromy(x, pair)?, total_monodromy(y, pair)?);
            if lhs != rhs {
                return Ok((false, json!({ "left": x.rep, "right": y.rep })));
            }
            products += 1;
        }
    }
    Ok((true, json!({ "products": products })))
}

fn ring_checks(q: &FinitePMQ, pair: Option<&PMQGroupPair>, checks: &mut Vec<Check>) {
    let sc = match aq_structure_constants(q, pair) {
        Ok(sc) => {
            checks.push(Check::new("aq-invariance", Ok((true, json!({ "classes": sc.len() })))));
            sc
        }
        Err(e) => {
            checks.push(Check::new("aq-invariance", Err(e)));
            return;
        }
    };
    let witness = commutativity_witness(&sc);
    checks.push(Check::new("aq-commutativity", Ok((witness.is_none(), json!({ "witness": witness })))));
    let swaps = sc.classes.iter().try_for_each(|s| {
        sc.classes.iter().try_for_each(|t| verify_swap_bijection(q, s, t))
    });
    checks.push(Check::new("aq-swap-bijection", swaps.map(|()| (true, json!({})))));
    checks.push(Check::new("aq-unit", verify_unit(q, &sc).map(|u| (true, json!({ "unit_class": u })))));
    let witness = associativity_witness(&sc);
    checks.push(Check::new("aq-associativity", Ok((witness.is_none(), json!({ "witness": witness })))));
}

fn hilbert_vs_model(q: &FinitePMQ, pair: Option<&PMQGroupPair>, budget: u64) -> Result<(bool, Value)> {
    let hilbert = hilbert_series(q, pair, CROSSCHECK_DEGREE as usize)?;
    let model = model_cohomology(&sullivan_model(q, pair)?, CROSSCHECK_DEGREE, budget)?;
    Ok((hilbert == model, json!({ "hilbert": hilbert, "model": model })))
}

/// The model against `ℚ[x_S]/(x_S²)`, whose degree `2j` part has dimension
/// `C(k, j)`.
fn model_vs_squares_quotient(q: &FinitePMQ, pair: Option<&PMQGroupPair>, budget: u64) -> Result<(bool, Value)> {
    let model = sullivan_model(q, pair)?;
    let dims = model_cohomology(&model, CROSSCHECK_DEGREE, budget)?;
    let expected: Vec<u64> = exterior_dims(model.k(), CROSSCHECK_DEGREE as usize / 2)
        .into_iter()
        .flat_map(|c| [c, 0])
        .take(dims.len())
        .collect();
    Ok((dims == expected, json!({ "model": dims, "squares_quotient": expected })))
}

fn loop_betti(q: &FinitePMQ, pair: Option<&PMQGroupPair>) -> Result<(bool, Value)> {
    let k = sullivan_model(q, pair)?.k();
    let betti = loop_twice_betti(q, pair, k as u32)?;
    let sum: u64 = betti.iter().sum();
    let symmetric = (0..=k).all(|i| betti[i] == betti[k - i]);
    let ok = symmetric && u32::try_from(k).ok().and_then(|k| 2u64.checked_pow(k)) == Some(sum);
    Ok((ok, json!({ "k": k, "betti": betti })))
}

fn abelianization_rank(q: &FinitePMQ) -> Result<(bool, Value)> {
    let ab = enveloping_abelianization(q)?;
    let k = conjugacy_classes(q).len() - 1;
    let mut ok = ab.rank <= k;
    if q.has_trivial_product() {
        ok &= ab.rank == k && ab.torsion.is_empty();
    }
    Ok((ok, json!({ "rank": ab.rank, "torsion": ab.torsion, "classes": k })))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub input_digest: String,
    pub parameters: Value,
    pub results: Value,
    pub tool_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl RunReport {
    pub fn new(command: &str, input: &[u8], parameters: Value, results: Value) -> Self {
        RunReport {
            command: command.to_string(),
            input_digest: hex::encode(Sha256::digest(input)),
            parameters,
            results,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            elapsed_ms: None,
        }
    }
}
