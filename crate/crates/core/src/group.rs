//! Finite groups given by multiplication tables, plus the permutation
//! helpers used to build them.
//!
//! Conventions fixed once for the whole crate:
//!
//! * Permutations are image vectors, `p[i]` is the image of `i`.
//! * The product of permutations applies the left factor first:
//!   `(p * q)[i] = q[p[i]]`. Permutation groups therefore act on the right,
//!   which is the orientation the PMQ conjugation action needs.
//! * Conjugation is `a^b = b⁻¹ a b`, so the Hurwitz move
//!   `(a, b) -> (b, a^b)` preserves left-to-right products.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{check_budget, Error, Result};

pub type Perm = Vec<usize>;

/// `(p * q)[i] = q[p[i]]`: apply `p`, then `q`.
pub fn perm_product(p: &[usize], q: &[usize]) -> Perm {
    p.iter().map(|&i| q[i]).collect()
}

pub fn perm_inverse(p: &[usize]) -> Perm {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

pub fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &j in p {
        if j >= p.len() || seen[j] {
            return false;
        }
        seen[j] = true;
    }
    true
}

pub fn cycle_count(p: &[usize]) -> usize {
    let mut seen = vec![false; p.len()];
    let mut cycles = 0;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i];
        }
    }
    cycles
}

/// Minimal number of transpositions whose product is `p`.
pub fn reflection_length(p: &[usize]) -> u32 {
    (p.len() - cycle_count(p)) as u32
}

/// Cycle notation on 1-based points, `()` for the identity.
pub fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            seen[start] = true;
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push((i + 1).to_string());
            i = p[i];
        }
        out.push('(');
        out.push_str(&cycle.join(" "));
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

/// Closure of a set of permutations of `0..degree` under products.
/// Returned sorted lexicographically, so the identity comes first.
pub fn close_permutations(gens: &[Perm], degree: usize, budget: u64) -> Result<Vec<Perm>> {
    for g in gens {
        if g.len() != degree || !is_permutation(g) {
            return Err(Error::Malformed(format!(
                "generator {g:?} is not a permutation of {degree} points"
            )));
        }
    }
    let identity: Perm = (0..degree).collect();
    let mut seen: BTreeSet<Perm> = BTreeSet::new();
    seen.insert(identity.clone());
    let mut queue = VecDeque::from([identity]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = perm_product(&p, g);
            if !seen.contains(&q) {
                check_budget("permutation group closure", seen.len() as u128 + 1, budget)?;
                seen.insert(q.clone());
                queue.push_back(q);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// A finite group stored as a dense multiplication table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    order: usize,
    mult: Vec<usize>,
    inverse: Vec<usize>,
    identity: usize,
    labels: Option<Vec<String>>,
}

impl FiniteGroup {
    /// Validates the group axioms on `table` (exhaustively, including
    /// associativity) and derives the identity and inverses.
    pub fn from_table(table: &[Vec<usize>]) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Malformed("group table is empty".into()));
        }
        let mut mult = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Malformed(format!(
                    "group table row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
            for (j, &x) in row.iter().enumerate() {
                if x >= n {
                    return Err(Error::Malformed(format!(
                        "group table entry [{i}][{j}] = {x} is out of range"
                    )));
                }
            }
            mult.extend_from_slice(row);
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mult[e * n + x] == x && mult[x * n + e] == x))
            .ok_or_else(|| Error::Malformed("group table has no identity".into()))?;
        let mut inverse = vec![0; n];
        for x in 0..n {
            inverse[x] = (0..n)
                .find(|&y| mult[x * n + y] == identity && mult[y * n + x] == identity)
                .ok_or_else(|| Error::Malformed(format!("element {x} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = mult[a * n + b];
                for c in 0..n {
                    if mult[ab * n + c] != mult[a * n + mult[b * n + c]] {
                        return Err(Error::Malformed(format!(
                            "group table is not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            order: n,
            mult,
            inverse,
            identity,
            labels: None,
        })
    }

    /// Group of the given permutations under `perm_product`; element `i`
    /// of the result is `perms[i]`. `perms` must already be closed.
    pub fn from_closed_permutations(perms: &[Perm]) -> Result<Self> {
        let index: HashMap<&Perm, usize> = perms.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let table = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| {
                        index.get(&perm_product(p, q)).copied().ok_or_else(|| {
                            Error::Malformed("permutation set is not closed".into())
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let labels = perms.iter().map(|p| cycle_notation(p)).collect();
        Ok(Self::from_table(&table)?.with_labels(labels))
    }

    pub fn from_permutations(gens: &[Perm], degree: usize, budget: u64) -> Result<(Self, Vec<Perm>)> {
        let perms = close_permutations(gens, degree, budget)?;
        Ok((Self::from_closed_permutations(&perms)?, perms))
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        if labels.len() == self.order {
            self.labels = Some(labels);
        }
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// `a^b = b⁻¹ a b`.
    #[inline]
    pub fn conj(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(b), a), b)
    }

    pub fn product<I: IntoIterator<Item = usize>>(&self, elements: I) -> usize {
        elements
            .into_iter()
            .fold(self.identity, |acc, x| self.mul(acc, x))
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, a: usize) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn mult_table(&self) -> Vec<Vec<usize>> {
        self.mult.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Elements of the subgroup generated by `gens`, sorted.
    pub fn subgroup_closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order).filter(|&x| seen[x]).collect()
    }

    /// Conjugacy classes, each sorted, ordered by minimal member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut assigned = vec![false; self.order];
        let mut classes = Vec::new();
        for a in 0..self.order {
            if assigned[a] {
                continue;
            }
            let class: BTreeSet<usize> = (0..self.order).map(|g| self.conj(a, g)).collect();
            for &x in &class {
                assigned[x] = true;
            }
            classes.push(class.into_iter().collect());
        }
        classes
    }

    pub fn is_conjugation_closed(&self, subset: &[usize]) -> bool {
        let set: BTreeSet<usize> = subset.iter().copied().collect();
        set.iter()
            .all(|&a| (0..self.order).all(|g| set.contains(&self.conj(a, g))))
    }

    /// The subgroup on `elements` (which must be closed) as a group in its own
    /// right. Returns the group and the embedding `new index -> old index`.
    pub fn induced_subgroup(&self, elements: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
        let mut embed: Vec<usize> = elements.to_vec();
        embed.sort_unstable();
        embed.dedup();
        if embed.first() != Some(&self.identity) && !embed.contains(&self.identity) {
            return Err(Error::Malformed("subgroup does not contain the identity".into()));
        }
        let mut index = vec![usize::MAX; self.order];
        for (i, &x) in embed.iter().enumerate() {
            index[x] = i;
        }
        let mut table = Vec::with_capacity(embed.len());
        for &a in &embed {
            let mut row = Vec::with_capacity(embed.len());
            for &b in &embed {
                let ab = index[self.mul(a, b)];
                if ab == usize::MAX {
                    return Err(Error::Malformed("element set is not closed under products".into()));
                }
                row.push(ab);
            }
            table.push(row);
        }
        let mut sub = FiniteGroup::from_table(&table)?;
        if let Some(l) = &self.labels {
            sub = sub.with_labels(embed.iter().map(|&x| l[x].clone()).collect());
        }
        Ok((sub, embed))
    }

    /// All subgroups generated by at most two elements, as sorted element
    /// lists, in lexicographic order. For groups of order at most 24 every
    /// subgroup of a symmetric group is of this kind.
    pub fn subgroups_two_generated(&self) -> Vec<Vec<usize>> {
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        for a in 0..self.order {
            for b in a..self.order {
                found.insert(self.subgroup_closure(&[a, b]));
            }
        }
        found.into_iter().collect()
    }
}

pub fn symmetric_group(n: usize) -> (FiniteGroup, Vec<Perm>) {
    let mut perms = Vec::new();
    let mut current: Perm = (0..n).collect();
    loop {
        perms.push(current.clone());
        if !next_permutation(&mut current) {
            break;
        }
    }
    let g = FiniteGroup::from_closed_permutations(&perms).expect("symmetric group table");
    (g, perms)
}

pub fn alternating_group(n: usize) -> (FiniteGroup, Vec<Perm>) {
    let (_, all) = symmetric_group(n);
    let perms: Vec<Perm> = all
        .into_iter()
        .filter(|p| (p.len() - cycle_count(p)).is_multiple_of(2))
        .collect();
    let g = FiniteGroup::from_closed_permutations(&perms).expect("alternating group table");
    (g, perms)
}

pub fn cyclic_group(n: usize) -> FiniteGroup {
    let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    FiniteGroup::from_table(&table).expect("cyclic group table")
}

/// Dihedral group of order `2n`, acting on the vertices of an `n`-gon.
pub fn dihedral_group(n: usize) -> (FiniteGroup, Vec<Perm>) {
    let rotation: Perm = (0..n).map(|i| (i + 1) % n).collect();
    let reflection: Perm = (0..n).map(|i| (n - i) % n).collect();
    FiniteGroup::from_permutations(&[rotation, reflection], n, u64::MAX)
        .expect("dihedral group table")
}

pub fn klein_four_group() -> (FiniteGroup, Vec<Perm>) {
    FiniteGroup::from_permutations(&[vec![1, 0, 3, 2], vec![2, 3, 0, 1]], 4, u64::MAX)
        .expect("Klein four group table")
}

pub fn quaternion_group() -> FiniteGroup {
    // unit parts 1, i, j, k as 0..4; (sign, unit) -> 4 * sign + unit
    const UNIT: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    let table: Vec<Vec<usize>> = (0..8)
        .map(|a| {
            (0..8)
                .map(|b| {
                    let (s, u) = UNIT[a % 4][b % 4];
                    4 * ((a / 4 + b / 4 + s) % 2) + u
                })
                .collect()
        })
        .collect();
    let labels = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    FiniteGroup::from_table(&table)
        .expect("quaternion group table")
        .with_labels(labels)
}

/// Names accepted by [`builtin_group`].
pub const BUILTIN_GROUPS: &[&str] = &[
    "Z1", "Z2", "Z3", "Z4", "V4", "Z6", "S3", "D4", "Q8", "A4", "D6", "S4",
];

pub fn builtin_group(name: &str) -> Option<FiniteGroup> {
    let g = match name {
        "Z1" => cyclic_group(1),
        "Z2" => cyclic_group(2),
        "Z3" => cyclic_group(3),
        "Z4" => cyclic_group(4),
        "Z6" => cyclic_group(6),
        "V4" => klein_four_group().0,
        "S3" => symmetric_group(3).0,
        "D4" => dihedral_group(4).0,
        "Q8" => quaternion_group(),
        "A4" => alternating_group(4).0,
        "D6" => dihedral_group(6).0,
        "S4" => symmetric_group(4).0,
        _ => return None,
    };
    Some(g)
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
