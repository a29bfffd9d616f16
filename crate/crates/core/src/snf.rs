//! Smith normal form over the integers, exact, with explicit pivoting.

use num::{BigInt, Integer, Signed, Zero};

/// Nonzero invariant factors `d₁ | d₂ | …` of an integer matrix, positive.
pub fn invariant_factors(rows: &[Vec<i64>]) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = smallest_entry(&a, t) else {
                return diag;
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t].clone();
            let mut clean = true;
            let pivot_row = a[t].clone();
            for row in a.iter_mut().skip(t + 1) {
                if row[t].is_zero() {
                    continue;
                }
                let q = row[t].div_floor(&p);
                for (x, y) in row[t..].iter_mut().zip(&pivot_row[t..]) {
                    *x -= &q * y;
                }
                clean &= row[t].is_zero();
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&p);
                for row in a.iter_mut().skip(t) {
                    let delta = &q * &row[t];
                    row[j] -= delta;
                }
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let stubborn = (t + 1..m).find(|&i| (t + 1..n).any(|j| !(&a[i][j] % &p).is_zero()));
            match stubborn {
                Some(i) => {
                    let row = a[i].clone();
                    for (x, y) in a[t].iter_mut().zip(row) {
                        *x += y;
                    }
                }
                None => {
                    diag.push(p.abs());
                    break;
                }
            }
        }
    }
    diag
}

fn smallest_entry(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn textbook_examples() {
        assert_eq!(invariant_factors(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]), ints(&[2, 6, 12]));
        assert_eq!(invariant_factors(&[vec![2, 0], vec![0, 3]]), ints(&[1, 6]));
        assert_eq!(invariant_factors(&[vec![0, 0], vec![0, 0]]), ints(&[]));
        assert_eq!(invariant_factors(&[]), ints(&[]));
        assert_eq!(invariant_factors(&[vec![1, -1, 0], vec![0, 1, -1]]), ints(&[1, 1]));
    }

    #[test]
    fn divisibility_chain_is_restored() {
        // diag(4, 6) is not in normal form: 4 ∤ 6
        assert_eq!(invariant_factors(&[vec![4, 0], vec![0, 6]]), ints(&[2, 12]));
    }
}
