//! Named example PMQs used by the CLI, the cross-checks and the tests.

use crate::construct::{from_group_subset, trivial_over_generated, GroupPmq, Mode};
use crate::error::{Error, Result};
use crate::group::{builtin_group, reflection_length, symmetric_group, Perm, BUILTIN_GROUPS};
use crate::pmq::{FinitePMQ, PmqTables};

/// The one-element PMQ `{𝟙}`.
pub fn unit() -> FinitePMQ {
    FinitePMQ::validate(PmqTables {
        unit: 0,
        conj: vec![vec![0]],
        prod: vec![vec![Some(0)]],
        norm: Some(vec![0]),
    })
    .expect("the unit PMQ is valid")
}

fn cycle_type(p: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; p.len()];
    let mut lengths = Vec::new();
    for start in 0..p.len() {
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i];
            len += 1;
        }
        if len > 1 {
            lengths.push(len);
        }
    }
    lengths.sort_unstable();
    lengths
}

/// Elements of `S_n` whose cycle type (non-trivial cycles, ascending) is
/// one of `types`.
pub fn symmetric_subset(n: usize, types: &[&[usize]]) -> Vec<usize> {
    let (_, perms) = symmetric_group(n);
    select(&perms, |p| types.iter().any(|t| cycle_type(p) == *t))
}

fn select(perms: &[Perm], keep: impl Fn(&Perm) -> bool) -> Vec<usize> {
    perms
        .iter()
        .enumerate()
        .filter(|(_, p)| keep(p))
        .map(|(i, _)| i)
        .collect()
}

pub fn trivial_s3_transpositions() -> GroupPmq {
    trivial_symmetric(3, &[&[2]])
}

pub fn trivial_s3_nonidentity() -> GroupPmq {
    trivial_symmetric(3, &[&[2], &[3]])
}

/// Trivial-product PMQ on the given cycle types of `S_n`, paired with the
/// subgroup they generate.
pub fn trivial_symmetric(n: usize, types: &[&[usize]]) -> GroupPmq {
    let (g, _) = symmetric_group(n);
    trivial_over_generated(&g, &symmetric_subset(n, types)).expect("built-in trivial PMQ")
}

/// `S_n` with the reflection-length norm and geodesic products.
pub fn geodesic_symmetric(n: usize) -> GroupPmq {
    let (g, perms) = symmetric_group(n);
    let norm: Vec<u32> = perms.iter().map(|p| reflection_length(p)).collect();
    from_group_subset(&g, &[], Mode::Geodesic, Some(&norm)).expect("built-in geodesic PMQ")
}

pub fn complete(group: &str) -> Result<FinitePMQ> {
    complete_group_pmq(group).map(|b| b.pmq)
}

pub fn complete_group_pmq(group: &str) -> Result<GroupPmq> {
    let g = builtin_group(group)
        .ok_or_else(|| Error::Malformed(format!("unknown built-in group {group:?}")))?;
    from_group_subset(&g, &[], Mode::Complete, None)
}

const TRIVIAL: &[(&str, usize, &[&[usize]])] = &[
    ("trivial-S3-transpositions", 3, &[&[2]]),
    ("trivial-S3-3cycles", 3, &[&[3]]),
    ("trivial-S3-nonidentity", 3, &[&[2], &[3]]),
    ("trivial-S4-transpositions", 4, &[&[2]]),
    ("trivial-S4-double-transpositions", 4, &[&[2, 2]]),
    ("trivial-S4-3cycles", 4, &[&[3]]),
    ("trivial-S4-4cycles", 4, &[&[4]]),
    ("trivial-S4-nonidentity", 4, &[&[2], &[2, 2], &[3], &[4]]),
];

/// Every built-in PMQ name, in a fixed order.
pub fn names() -> Vec<String> {
    let mut out = vec!["unit".to_string(), "trivial-Z2".to_string()];
    out.extend(TRIVIAL.iter().map(|(name, _, _)| name.to_string()));
    out.push("geodesic-S3".into());
    out.push("geodesic-S4".into());
    out.extend(BUILTIN_GROUPS.iter().map(|g| format!("complete-{g}")));
    out
}

/// Looks up a built-in by name. The group is the one the pair lives over.
pub fn builtin(name: &str) -> Result<GroupPmq> {
    if name == "unit" {
        return from_group_subset(&crate::group::cyclic_group(1), &[], Mode::Trivial, None);
    }
    if name == "trivial-Z2" {
        return from_group_subset(&crate::group::cyclic_group(2), &[1], Mode::Trivial, None);
    }
    if let Some((_, n, types)) = TRIVIAL.iter().find(|(k, _, _)| *k == name) {
        return Ok(trivial_symmetric(*n, types));
    }
    match name {
        "geodesic-S3" => return Ok(geodesic_symmetric(3)),
        "geodesic-S4" => return Ok(geodesic_symmetric(4)),
        _ => {}
    }
    if let Some(group) = name.strip_prefix("complete-") {
        return complete_group_pmq(group);
    }
    Err(Error::Malformed(format!("unknown built-in PMQ {name:?}")))
}
