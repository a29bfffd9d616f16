use std::collections::HashSet;

use pmqkit_core::builtins;
use pmqkit_core::completion::{class_of_word, completion_classes, DEFAULT_WORD_BUDGET};
use pmqkit_core::group::{builtin_group, symmetric_group, FiniteGroup};
use pmqkit_core::hurwitz::{enumerate_orbits, orbit_invariants, Direction, HurwitzDomain, OrbitOptions};
use pmqkit_core::pmq::FinitePMQ;
use proptest::prelude::*;

/// Components of a graph given by a neighbour function, as sorted sizes.
fn component_sizes<T, F>(vertices: Vec<T>, neighbours: F) -> Vec<usize>
where
    T: Clone + Eq + std::hash::Hash,
    F: Fn(&T) -> Vec<T>,
{
    let mut seen: HashSet<T> = HashSet::new();
    let mut sizes = Vec::new();
    for v in vertices {
        if !seen.insert(v.clone()) {
            continue;
        }
        let mut stack = vec![v];
        let mut size = 0;
        while let Some(x) = stack.pop() {
            size += 1;
            for y in neighbours(&x) {
                if seen.insert(y.clone()) {
                    stack.push(y);
                }
            }
        }
        sizes.push(size);
    }
    sizes.sort_unstable();
    sizes
}

fn tuples(letters: &[usize], n: usize) -> Vec<Vec<usize>> {
    (0..n).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|t| letters.iter().map(move |&a| [t.clone(), vec![a]].concat()))
            .collect()
    })
}

/// Braid orbits straight from the group table.
fn naive_braid_orbits(g: &FiniteGroup, c: &[usize], n: usize) -> Vec<usize> {
    component_sizes(tuples(c, n), |t| {
        let mut out = Vec::new();
        for i in 0..n.saturating_sub(1) {
            let (a, b) = (t[i], t[i + 1]);
            let mut f = t.clone();
            f[i] = b;
            f[i + 1] = g.mul(g.mul(g.inv(b), a), b);
            let mut r = t.clone();
            r[i] = g.mul(g.mul(a, b), g.inv(a));
            r[i + 1] = a;
            out.push(f);
            out.push(r);
        }
        out
    })
}

/// Words of norm `nu` in the letters of `Q₊`.
fn words_of_norm(q: &FinitePMQ, nu: u32) -> Vec<Vec<usize>> {
    let norm = q.norm().unwrap();
    if nu == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for a in q.positive_elements() {
        if norm[a] <= nu {
            for mut rest in words_of_norm(q, nu - norm[a]) {
                rest.insert(0, a);
                out.push(rest);
            }
        }
    }
    out
}

/// Completion classes of a fixed norm by closing under all four relation
/// moves, read from the PMQ tables.
fn naive_completion(q: &FinitePMQ, nu: u32) -> Vec<usize> {
    let u = q.unit();
    component_sizes(words_of_norm(q, nu), |w| {
        let mut out = Vec::new();
        for i in 0..w.len().saturating_sub(1) {
            let (a, b) = (w[i], w[i + 1]);
            let mut f = w.clone();
            f[i] = b;
            f[i + 1] = q.conj(a, b);
            out.push(f);
            let back = (0..q.size()).find(|&x| q.conj(x, a) == b).unwrap();
            let mut r = w.clone();
            r[i] = back;
            r[i + 1] = a;
            out.push(r);
            if let Some(ab) = q.prod(a, b).filter(|&ab| ab != u) {
                let mut c = w.clone();
                c.splice(i..i + 2, [ab]);
                out.push(c);
            }
        }
        for i in 0..w.len() {
            for a in q.positive_elements() {
                for b in q.positive_elements() {
                    if q.prod(a, b) == Some(w[i]) {
                        let mut e = w.clone();
                        e.splice(i..=i, [a, b]);
                        out.push(e);
                    }
                }
            }
        }
        out
    })
}

#[test]
fn completion_matches_braid_orbits_on_s3_transpositions() {
    let built = builtins::trivial_s3_transpositions();
    let (s3, _) = symmetric_group(3);
    let c = builtins::symmetric_subset(3, &[&[2]]);
    let counts: Vec<usize> = (1..=4)
        .map(|nu| {
            let classes = completion_classes(&built.pmq, nu, false, DEFAULT_WORD_BUDGET).unwrap();
            let mut sizes: Vec<usize> = classes.iter().map(|x| x.size).collect();
            sizes.sort_unstable();
            assert_eq!(sizes, naive_braid_orbits(&s3, &c, nu as usize), "ν = {nu}");
            assert_eq!(sizes, naive_completion(&built.pmq, nu), "ν = {nu}");
            classes.len()
        })
        .collect();
    assert_eq!(counts, vec![3, 5, 6, 6]);
}

#[test]
fn completion_matches_naive_closure_with_products() {
    for name in ["geodesic-S3", "trivial-S3-nonidentity", "trivial-S4-transpositions"] {
        let q = builtins::builtin(name).unwrap().pmq;
        for nu in 1..=3 {
            let mut sizes: Vec<usize> = completion_classes(&q, nu, false, DEFAULT_WORD_BUDGET)
                .unwrap()
                .iter()
                .map(|x| x.size)
                .collect();
            sizes.sort_unstable();
            assert_eq!(sizes, naive_completion(&q, nu), "{name} ν = {nu}");
        }
    }
}

#[test]
fn breadth_first_class_agrees_with_enumeration() {
    let q = builtins::geodesic_symmetric(3).pmq;
    for nu in 1..=4 {
        for class in completion_classes(&q, nu, true, DEFAULT_WORD_BUDGET).unwrap() {
            for w in class.members.as_ref().unwrap() {
                let found = class_of_word(&q, w, DEFAULT_WORD_BUDGET).unwrap();
                assert_eq!((found.rep.clone(), found.size), (class.rep.clone(), class.size));
            }
        }
    }
}

#[test]
fn braid_orbits_match_naive_search() {
    let (s4, _) = symmetric_group(4);
    let q8 = builtin_group("Q8").unwrap();
    let q8_i: Vec<usize> = q8.conjugacy_classes().into_iter().find(|c| c.len() == 2).unwrap();
    let cases: Vec<(FiniteGroup, Vec<usize>, usize)> = vec![
        (symmetric_group(3).0, builtins::symmetric_subset(3, &[&[2]]), 4),
        (symmetric_group(3).0, builtins::symmetric_subset(3, &[&[2], &[3]]), 3),
        (s4.clone(), builtins::symmetric_subset(4, &[&[2]]), 3),
        (s4, builtins::symmetric_subset(4, &[&[3]]), 3),
        (q8, q8_i, 4),
    ];
    for (g, c, max_n) in cases {
        let domain = HurwitzDomain::from_group(&g, &c).unwrap();
        for n in 0..=max_n {
            let orbits = enumerate_orbits(&domain, n, OrbitOptions { keep_members: true, ..Default::default() }).unwrap();
            let mut sizes: Vec<usize> = orbits.iter().map(|o| o.size).collect();
            sizes.sort_unstable();
            assert_eq!(sizes, naive_braid_orbits(&g, &c, n), "{c:?} n = {n}");
            for o in &orbits {
                orbit_invariants(&domain, o).unwrap();
                assert_eq!(Some(&o.rep), o.members.as_ref().unwrap().iter().min());
            }
        }
    }
}

#[test]
fn fibres_partition_the_orbits() {
    let (s3, _) = symmetric_group(3);
    let domain = HurwitzDomain::from_group(&s3, &builtins::symmetric_subset(3, &[&[2]])).unwrap();
    for n in 1..=4 {
        let all = enumerate_orbits(&domain, n, OrbitOptions::default()).unwrap();
        let mut joined = Vec::new();
        for g in 0..s3.order() {
            let fibre = enumerate_orbits(&domain, n, OrbitOptions { fix_total: Some(g), ..Default::default() }).unwrap();
            assert!(fibre.iter().all(|o| o.total == g));
            joined.extend(fibre);
        }
        joined.sort_by(|a, b| a.rep.cmp(&b.rep));
        assert_eq!(joined, all);
    }
}

proptest! {
    #[test]
    fn braid_moves_preserve_invariants(
        seed in proptest::collection::vec(0usize..9, 2..7),
        moves in proptest::collection::vec((0usize..6, any::<bool>()), 0..20),
    ) {
        let (s4, _) = symmetric_group(4);
        let c = builtins::symmetric_subset(4, &[&[2], &[3]]);
        let domain = HurwitzDomain::from_group(&s4, &c).unwrap();
        let mut t: Vec<usize> = seed.iter().map(|&k| c[k % c.len()]).collect();
        let start = domain.invariants(&t).unwrap();
        for (i, forward) in moves {
            let i = i % (t.len() - 1);
            let dir = if forward { Direction::Forward } else { Direction::Inverse };
            let next = domain.hurwitz_move(&t, i, dir).unwrap();
            let undo = if forward { Direction::Inverse } else { Direction::Forward };
            prop_assert_eq!(domain.hurwitz_move(&next, i, undo).unwrap(), t.clone());
            t = next;
        }
        prop_assert_eq!(domain.invariants(&t).unwrap(), start);
    }
}
