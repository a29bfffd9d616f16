//! Free graded-commutative differential algebras over `ℚ` with generators
//! in positive degrees, and their cohomology by exact elimination.
//!
//! A monomial is an exponent vector in generator order; odd generators
//! appear with exponent at most one. Products are put back into generator
//! order with the Koszul sign.

use std::collections::BTreeMap;

use num::{BigRational, One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{check_budget, Error, Result};

pub const DEFAULT_MONOMIAL_BUDGET: u64 = 100_000;

pub type Monomial = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: Monomial, c: BigRational) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    fn add(&mut self, other: &Polynomial, scale: &BigRational) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * scale);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeCdga {
    generators: Vec<Generator>,
    d: Vec<Polynomial>,
}

impl FreeCdga {
    /// `d[i]` is the differential of generator `i`. It must be homogeneous
    /// of degree one more than the generator.
    pub fn new(generators: Vec<Generator>, d: Vec<Polynomial>) -> Result<Self> {
        if generators.len() != d.len() {
            return Err(Error::Malformed("one differential per generator is required".into()));
        }
        if let Some(g) = generators.iter().find(|g| g.degree == 0) {
            return Err(Error::Malformed(format!("generator {} has degree 0", g.name)));
        }
        let algebra = FreeCdga { generators, d: Vec::new() };
        for (g, dg) in algebra.generators.iter().zip(&d) {
            for (m, _) in dg.terms() {
                if m.len() != algebra.generators.len() || !algebra.is_monomial(m) {
                    return Err(Error::Malformed(format!("d({}) has an invalid monomial", g.name)));
                }
                if algebra.degree(m) != g.degree + 1 {
                    return Err(Error::Malformed(format!("d({}) is not of degree {}", g.name, g.degree + 1)));
                }
            }
        }
        Ok(FreeCdga { d, ..algebra })
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn differential_of(&self, i: usize) -> &Polynomial {
        &self.d[i]
    }

    fn is_odd(&self, i: usize) -> bool {
        self.generators[i].degree % 2 == 1
    }

    fn is_monomial(&self, m: &[u32]) -> bool {
        m.iter().enumerate().all(|(i, &e)| !self.is_odd(i) || e <= 1)
    }

    pub fn degree(&self, m: &[u32]) -> u32 {
        m.iter().zip(&self.generators).map(|(&e, g)| e * g.degree).sum()
    }

    /// The generator `i` as a polynomial.
    pub fn generator(&self, i: usize) -> Polynomial {
        let mut m = vec![0; self.generators.len()];
        m[i] = 1;
        Polynomial::monomial(m, BigRational::one())
    }

    /// `m₁ · m₂` in normal order: `None` if an odd generator repeats,
    /// otherwise the product monomial and its sign.
    fn multiply_monomials(&self, m1: &[u32], m2: &[u32]) -> Option<(Monomial, bool)> {
        let mut negative = false;
        let mut odd_in_m1_after = 0u32;
        // walk generators from the last to the first, counting odd letters
        // of m1 that each odd letter of m2 must move past
        for i in (0..m1.len()).rev() {
            if self.is_odd(i) {
                if m1[i] + m2[i] > 1 {
                    return None;
                }
                if m2[i] == 1 && odd_in_m1_after % 2 == 1 {
                    negative = !negative;
                }
                odd_in_m1_after += m1[i];
            }
        }
        let m = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
        Some((m, negative))
    }

    pub fn multiply(&self, p: &Polynomial, q: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m1, c1) in p.terms() {
            for (m2, c2) in q.terms() {
                if let Some((m, negative)) = self.multiply_monomials(m1, m2) {
                    let c = c1 * c2;
                    out.add_term(m, if negative { -c } else { c });
                }
            }
        }
        out
    }

    fn differential_of_monomial(&self, m: &[u32]) -> Polynomial {
        let n = m.len();
        let mut out = Polynomial::zero();
        let mut prefix_degree = 0;
        for i in 0..n {
            if m[i] == 0 {
                continue;
            }
            let mut prefix = vec![0; n];
            prefix[..i].copy_from_slice(&m[..i]);
            let mut suffix = vec![0; n];
            suffix[i + 1..].copy_from_slice(&m[i + 1..]);
            // d(g^e) = e g^(e-1) dg for even g; odd g has e = 1
            let mut power = vec![0; n];
            power[i] = m[i] - 1;
            let factor = Polynomial::monomial(power, BigRational::from_integer(m[i].into()));
            let dg = self.multiply(&factor, &self.d[i]);
            let one = BigRational::one();
            let term = self.multiply(
                &self.multiply(&Polynomial::monomial(prefix, one.clone()), &dg),
                &Polynomial::monomial(suffix, one.clone()),
            );
            let sign = if prefix_degree % 2 == 1 { -one } else { one };
            out.add(&term, &sign);
            prefix_degree += m[i] * self.generators[i].degree;
        }
        out
    }

    pub fn differential(&self, p: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in p.terms() {
            out.add(&self.differential_of_monomial(m), c);
        }
        out
    }

    /// Number of monomials in each degree `0..=max_degree`.
    pub fn monomial_counts(&self, max_degree: u32) -> Vec<u128> {
        let mut counts = vec![0u128; max_degree as usize + 1];
        counts[0] = 1;
        for (i, g) in self.generators.iter().enumerate() {
            let step = g.degree as usize;
            if self.is_odd(i) {
                for deg in (step..counts.len()).rev() {
                    counts[deg] = counts[deg].saturating_add(counts[deg - step]);
                }
            } else {
                for deg in step..counts.len() {
                    counts[deg] = counts[deg].saturating_add(counts[deg - step]);
                }
            }
        }
        counts
    }

    fn check_monomial_budget(&self, max_degree: u32, budget: u64) -> Result<()> {
        let total = self
            .monomial_counts(max_degree)
            .into_iter()
            .fold(0u128, u128::saturating_add);
        check_budget("monomial basis", total, budget)
    }

    /// Monomials of degree exactly `degree`, in increasing exponent order.
    pub fn monomials(&self, degree: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut current = vec![0; self.generators.len()];
        self.fill(0, degree, &mut current, &mut out);
        out.sort();
        out
    }

    fn fill(&self, i: usize, remaining: u32, current: &mut Monomial, out: &mut Vec<Monomial>) {
        if i == self.generators.len() {
            if remaining == 0 {
                out.push(current.clone());
            }
            return;
        }
        let deg = self.generators[i].degree;
        let max_e = if self.is_odd(i) { 1.min(remaining / deg) } else { remaining / deg };
        for e in 0..=max_e {
            current[i] = e;
            self.fill(i + 1, remaining - e * deg, current, out);
        }
        current[i] = 0;
    }

    /// Rank of `d: A^degree → A^(degree+1)`.
    fn differential_rank(&self, degree: u32) -> usize {
        let target: BTreeMap<Monomial, usize> = self
            .monomials(degree + 1)
            .into_iter()
            .enumerate()
            .map(|(k, m)| (m, k))
            .collect();
        let rows: Vec<Vec<BigRational>> = self
            .monomials(degree)
            .iter()
            .map(|m| {
                let mut row = vec![BigRational::zero(); target.len()];
                let one = Polynomial::monomial(m.clone(), BigRational::one());
                for (t, c) in self.differential(&one).terms() {
                    row[target[t]] = c.clone();
                }
                row
            })
            .collect();
        rank(rows)
    }

    /// `dim H^n` for `n = 0..=max_degree`.
    pub fn cohomology_dims(&self, max_degree: u32, budget: u64) -> Result<Vec<u64>> {
        self.check_monomial_budget(max_degree + 1, budget)?;
        let ranks: Vec<usize> = (0..=max_degree).into_par_iter().map(|n| self.differential_rank(n)).collect();
        Ok((0..=max_degree as usize)
            .map(|n| {
                let dim = self.monomials(n as u32).len();
                let boundaries = if n == 0 { 0 } else { ranks[n - 1] };
                (dim - ranks[n] - boundaries) as u64
            })
            .collect())
    }

    /// Checks `d² = 0` on every monomial whose image stays within
    /// `max_degree`; returns the number of monomials checked.
    pub fn verify_d_squared(&self, max_degree: u32, budget: u64) -> Result<usize> {
        self.check_monomial_budget(max_degree, budget)?;
        let basis: Vec<Monomial> = (0..max_degree.saturating_sub(1)).flat_map(|n| self.monomials(n)).collect();
        let bad = basis.par_iter().find_first(|m| {
            let p = Polynomial::monomial((*m).clone(), BigRational::one());
            !self.differential(&self.differential(&p)).is_zero()
        });
        match bad {
            Some(m) => Err(Error::Inconsistent(format!("d² ≠ 0 on the monomial with exponents {m:?}"))),
            None => Ok(basis.len()),
        }
    }

    /// Degrees lowered by `shift`; generators falling to degree ≤ 0 are
    /// dropped, and each differential keeps only its linear part in the
    /// surviving generators.
    pub fn shifted(&self, shift: u32) -> Self {
        let kept: Vec<usize> = (0..self.generators.len())
            .filter(|&i| self.generators[i].degree > shift)
            .collect();
        let generators = kept
            .iter()
            .map(|&i| Generator {
                name: format!("s{}{}", shift, self.generators[i].name),
                degree: self.generators[i].degree - shift,
            })
            .collect();
        let d = kept
            .iter()
            .map(|&i| {
                let mut p = Polynomial::zero();
                for (m, c) in self.d[i].terms() {
                    if m.iter().sum::<u32>() != 1 {
                        continue;
                    }
                    let g = m.iter().position(|&e| e == 1).expect("linear term");
                    if let Ok(k) = kept.binary_search(&g) {
                        let mut mono = vec![0; kept.len()];
                        mono[k] = 1;
                        p.add_term(mono, c.clone());
                    }
                }
                p
            })
            .collect();
        FreeCdga { generators, d }
    }
}

/// Rank over `ℚ` by Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len())
            .filter(|&i| !rows[i][c].is_zero())
            .min_by_key(|&i| rows[i][c].abs())
        else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        let pivot_row = rows[r].clone();
        for row in rows.iter_mut().skip(r + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &pivot;
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                *x -= &f * y;
            }
        }
        r += 1;
    }
    r
}
