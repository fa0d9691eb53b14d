//! Weak compositions, multi-index factorials, and contingency tables with
//! prescribed margins.
//!
//! `V(n,q)` is the set of q-tuples of nonnegative integers summing to n; it
//! has cardinality `C(n+q-1, q-1)` and is always enumerated here in
//! lexicographic ascending order, which fixes the row and column layout of
//! every table this crate produces.

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A weak composition: a vector of `q >= 2` nonnegative parts with a cached
/// total. The derived ordering is lexicographic on the parts.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Composition {
    parts: Vec<usize>,
    total: usize,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.len() < 2 {
            return Err(Error::LengthMismatch { expected: 2, found: parts.len() });
        }
        Ok(Self::raw(parts))
    }

    pub(crate) fn raw(parts: Vec<usize>) -> Self {
        debug_assert!(parts.len() >= 2);
        let total = parts.iter().sum();
        Composition { parts, total }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of parts (the `q` of `V(n,q)`).
    pub fn arity(&self) -> usize {
        self.parts.len()
    }

    /// The weight `|p|`, i.e. the sum of the parts.
    pub fn total(&self) -> usize {
        self.total
    }
}

impl std::fmt::Display for Composition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, part) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{part}")?;
        }
        write!(f, "}}")
    }
}

/// Lazy enumeration of `V(n,q)` in lexicographic ascending order.
pub fn compositions(n: usize, q: usize) -> Compositions {
    assert!(q >= 2, "compositions require at least two parts");
    let mut first = vec![0usize; q];
    first[q - 1] = n;
    Compositions { next: Some(first) }
}

pub struct Compositions {
    next: Option<Vec<usize>>,
}

impl Iterator for Compositions {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        let current = self.next.take()?;
        self.next = lex_successor(&current);
        Some(Composition::raw(current))
    }
}

fn lex_successor(parts: &[usize]) -> Option<Vec<usize>> {
    let q = parts.len();
    // Move one unit from the tail onto the rightmost incrementable slot and
    // push the rest of the tail all the way right.
    let mut tail = 0usize;
    for j in (0..q - 1).rev() {
        tail += parts[j + 1];
        if tail > 0 {
            let mut next = parts.to_vec();
            next[j] += 1;
            for slot in next.iter_mut().take(q - 1).skip(j + 1) {
                *slot = 0;
            }
            next[q - 1] = tail - 1;
            return Some(next);
        }
    }
    None
}

/// `C(n, k)` as an arbitrary-precision integer.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - k + i + 1) / BigUint::from(i + 1);
    }
    acc
}

/// `|V(n,q)| = C(n+q-1, q-1)`.
pub fn composition_count(n: usize, q: usize) -> BigUint {
    binomial(n + q - 1, q - 1)
}

pub fn factorial(k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=k {
        acc *= BigInt::from(i);
    }
    acc
}

/// The multi-index factorial `p! = p_0! * p_1! * ... * p_{q-1}!`.
pub fn multi_factorial(p: &Composition) -> BigInt {
    p.parts().iter().map(|&part| factorial(part)).product()
}

/// The multinomial coefficient `n! / p!`; requires `|p| = n`.
pub fn multinomial(n: usize, p: &Composition) -> Result<BigInt> {
    if p.total() != n {
        return Err(Error::SumMismatch { expected: n, found: p.total() });
    }
    let numer = factorial(n);
    let denom = multi_factorial(p);
    debug_assert!((&numer % &denom) == BigInt::ZERO);
    Ok(numer / denom)
}

/// `z^p = prod_j z_j^{p_j}` with the convention `0^0 = 1`.
pub fn monomial_power(z: &[Scalar], p: &Composition) -> Result<Scalar> {
    if z.len() != p.arity() {
        return Err(Error::LengthMismatch { expected: p.arity(), found: z.len() });
    }
    let mut acc = Scalar::one(&z[0].context());
    for (base, &exp) in z.iter().zip(p.parts()) {
        acc = acc.checked_mul(&base.pow_nonneg(exp))?;
    }
    Ok(acc)
}

/// A q-by-q matrix of nonnegative integers with prescribed row and column
/// sums.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ContingencyTable {
    q: usize,
    entries: Vec<usize>,
}

impl ContingencyTable {
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn entry(&self, row: usize, col: usize) -> usize {
        self.entries[row * self.q + col]
    }

    pub fn row_sums(&self) -> Vec<usize> {
        (0..self.q)
            .map(|i| (0..self.q).map(|j| self.entry(i, j)).sum())
            .collect()
    }

    pub fn col_sums(&self) -> Vec<usize> {
        (0..self.q)
            .map(|j| (0..self.q).map(|i| self.entry(i, j)).sum())
            .collect()
    }
}

/// Lazily enumerates every q-by-q nonnegative integer matrix whose row sums
/// are `s` and whose column sums are `p`, row by row in lexicographic order.
///
/// For matching weights the stream is never empty, and since the last row is
/// forced by the running column budget the search has no dead branches.
pub fn tables(s: &Composition, p: &Composition) -> Result<Tables> {
    if s.arity() != p.arity() {
        return Err(Error::LengthMismatch { expected: s.arity(), found: p.arity() });
    }
    if s.total() != p.total() {
        return Err(Error::MarginMismatch { row_total: s.total(), col_total: p.total() });
    }
    Ok(Tables {
        q: s.arity(),
        row_sums: s.parts().to_vec(),
        col_budget: p.parts().to_vec(),
        levels: Vec::new(),
        primed: false,
        done: false,
    })
}

pub struct Tables {
    q: usize,
    row_sums: Vec<usize>,
    col_budget: Vec<usize>,
    levels: Vec<Level>,
    primed: bool,
    done: bool,
}

struct Level {
    iter: BoundedCompositions,
    row: Vec<usize>,
    budget_before: Vec<usize>,
}

impl Tables {
    fn open_level(&mut self, depth: usize, budget: Vec<usize>) {
        let mut iter = BoundedCompositions::new(self.row_sums[depth], budget.clone());
        let row = iter.next().expect("feasible margins leave no dead branches");
        self.levels.push(Level { iter, row, budget_before: budget });
    }

    fn descend_from(&mut self, depth: usize) {
        for d in depth..self.q - 1 {
            let budget = if d == 0 {
                self.col_budget.clone()
            } else {
                let prev = &self.levels[d - 1];
                subtract(&prev.budget_before, &prev.row)
            };
            self.open_level(d, budget);
        }
    }

    fn assemble(&self) -> ContingencyTable {
        let mut entries = Vec::with_capacity(self.q * self.q);
        for level in &self.levels {
            entries.extend_from_slice(&level.row);
        }
        let last = self.levels.last().expect("at least one level");
        let forced = subtract(&last.budget_before, &last.row);
        debug_assert_eq!(forced.iter().sum::<usize>(), self.row_sums[self.q - 1]);
        entries.extend_from_slice(&forced);
        ContingencyTable { q: self.q, entries }
    }
}

fn subtract(budget: &[usize], row: &[usize]) -> Vec<usize> {
    budget.iter().zip(row).map(|(b, r)| b - r).collect()
}

impl Iterator for Tables {
    type Item = ContingencyTable;

    fn next(&mut self) -> Option<ContingencyTable> {
        if self.done {
            return None;
        }
        if !self.primed {
            self.primed = true;
            self.descend_from(0);
        } else {
            // Advance the deepest level that still has a successor.
            loop {
                let Some(level) = self.levels.last_mut() else {
                    self.done = true;
                    return None;
                };
                if let Some(row) = level.iter.next() {
                    level.row = row;
                    let depth = self.levels.len();
                    self.descend_from(depth);
                    break;
                }
                self.levels.pop();
            }
        }
        Some(self.assemble())
    }
}

/// Compositions of `total` with per-part upper bounds, lexicographic
/// ascending.
struct BoundedCompositions {
    caps: Vec<usize>,
    current: Option<Vec<usize>>,
}

impl BoundedCompositions {
    fn new(total: usize, caps: Vec<usize>) -> Self {
        let current = Self::right_packed(total, &caps, caps.len());
        BoundedCompositions { caps, current }
    }

    /// The lexicographically smallest filling of the last `len` slots.
    fn right_packed(total: usize, caps: &[usize], len: usize) -> Option<Vec<usize>> {
        let mut parts = vec![0usize; len];
        let offset = caps.len() - len;
        let mut remaining = total;
        for j in (0..len).rev() {
            let take = remaining.min(caps[offset + j]);
            parts[j] = take;
            remaining -= take;
        }
        (remaining == 0).then_some(parts)
    }

    fn successor(&self, parts: &[usize]) -> Option<Vec<usize>> {
        let q = parts.len();
        let mut tail = 0usize;
        for j in (0..q - 1).rev() {
            tail += parts[j + 1];
            if tail > 0 && parts[j] < self.caps[j] {
                let repacked = Self::right_packed(tail - 1, &self.caps, q - j - 1)
                    .expect("tail fits under its own caps");
                let mut next = parts[..=j].to_vec();
                next[j] += 1;
                next.extend(repacked);
                return Some(next);
            }
        }
        None
    }
}

impl Iterator for BoundedCompositions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.current.take()?;
        self.current = self.successor(&current);
        Some(current)
    }
}

/// Brute-force reference used by the tests: recursively fill every q-by-q
/// matrix whose entries total n and bucket the counts by margins.
#[cfg(test)]
fn brute_force_margin_counts(
    n: usize,
    q: usize,
) -> std::collections::HashMap<(Vec<usize>, Vec<usize>), usize> {
    fn fill(
        entries: &mut Vec<usize>,
        idx: usize,
        remaining: usize,
        q: usize,
        counts: &mut std::collections::HashMap<(Vec<usize>, Vec<usize>), usize>,
    ) {
        if idx + 1 == entries.len() {
            entries[idx] = remaining;
            let table = ContingencyTable { q, entries: entries.clone() };
            *counts.entry((table.row_sums(), table.col_sums())).or_insert(0) += 1;
            return;
        }
        for value in 0..=remaining {
            entries[idx] = value;
            fill(entries, idx + 1, remaining - value, q, counts);
        }
    }

    let mut counts = std::collections::HashMap::new();
    let mut entries = vec![0usize; q * q];
    fill(&mut entries, 0, n, q, &mut counts);
    counts
}
