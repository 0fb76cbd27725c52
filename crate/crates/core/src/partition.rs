//! Young diagrams: conjugation, corners, hooks, contents, dimensions and
//! enumeration.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::Error;
use crate::rational::{AlphaParam, Rational};

/// A partition λ, stored as its weakly decreasing positive parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<usize>,
}

/// A box of a diagram, 1-indexed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BoxRef {
    pub row: usize,
    pub col: usize,
}

impl BoxRef {
    pub fn new(row: usize, col: usize) -> Self {
        BoxRef { row, col }
    }

    /// col − row.
    pub fn content(&self) -> i64 {
        self.col as i64 - self.row as i64
    }

    /// α(col − 1) − (row − 1).
    pub fn alpha_content(&self, alpha: &AlphaParam) -> Rational {
        alpha.value() * Rational::from_integer(BigInt::from(self.col - 1))
            - Rational::from_integer(BigInt::from(self.row - 1))
    }
}

impl fmt::Display for BoxRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxStats {
    pub cell: BoxRef,
    pub arm: usize,
    pub leg: usize,
    pub hook: usize,
    pub content: i64,
    pub alpha_content: Rational,
}

impl Partition {
    /// Builds a partition, dropping trailing zeros.
    pub fn new(mut parts: Vec<usize>) -> Result<Self, Error> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(Error::Domain(format!(
                "parts must be positive and weakly decreasing: {parts:?}"
            )));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub(crate) fn from_parts_unchecked(parts: Vec<usize>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        debug_assert!(!parts.contains(&0));
        Partition { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of rows.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Length of row `i` (1-indexed); 0 beyond the last row.
    pub fn row(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    /// The transposed diagram λ'.
    pub fn conjugate(&self) -> Partition {
        let width = self.parts.first().copied().unwrap_or(0);
        let cols = (1..=width)
            .map(|i| self.parts.iter().take_while(|&&p| p >= i).count())
            .collect();
        Partition { parts: cols }
    }

    pub fn contains(&self, cell: BoxRef) -> bool {
        cell.row >= 1 && cell.col >= 1 && cell.col <= self.row(cell.row)
    }

    /// Boxes in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = BoxRef> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &len)| (1..=len).map(move |j| BoxRef::new(i + 1, j)))
    }

    /// Arm/leg/hook/content table, row-major.
    pub fn box_stats(&self, alpha: &AlphaParam) -> Vec<BoxStats> {
        let conj = self.conjugate();
        self.cells()
            .map(|cell| {
                let arm = self.parts[cell.row - 1] - cell.col;
                let leg = conj.parts[cell.col - 1] - cell.row;
                BoxStats {
                    cell,
                    arm,
                    leg,
                    hook: arm + leg + 1,
                    content: cell.content(),
                    alpha_content: cell.alpha_content(alpha),
                }
            })
            .collect()
    }

    /// Arm and leg of every box, row-major, without the rational content.
    pub(crate) fn arms_legs(&self) -> Vec<(usize, usize)> {
        let conj = self.conjugate();
        self.cells()
            .map(|c| (self.parts[c.row - 1] - c.col, conj.parts[c.col - 1] - c.row))
            .collect()
    }

    /// Addable corners.
    pub fn addable(&self) -> Vec<BoxRef> {
        let mut out = Vec::with_capacity(self.parts.len() + 1);
        for (i, &len) in self.parts.iter().enumerate() {
            if i == 0 || self.parts[i - 1] > len {
                out.push(BoxRef::new(i + 1, len + 1));
            }
        }
        out.push(BoxRef::new(self.parts.len() + 1, 1));
        out
    }

    /// Removable corners.
    pub fn removable(&self) -> Vec<BoxRef> {
        let k = self.parts.len();
        (0..k)
            .filter(|&i| i + 1 == k || self.parts[i] > self.parts[i + 1])
            .map(|i| BoxRef::new(i + 1, self.parts[i]))
            .collect()
    }

    /// (addable, removable), each in increasing row order.
    pub fn corners(&self) -> (Vec<BoxRef>, Vec<BoxRef>) {
        (self.addable(), self.removable())
    }

    /// λ with `cell` added; `None` if the result is not a partition.
    pub fn with_box(&self, cell: BoxRef) -> Option<Partition> {
        if cell.row == 0 || cell.row > self.parts.len() + 1 || cell.col != self.row(cell.row) + 1 {
            return None;
        }
        if cell.row > 1 && self.row(cell.row - 1) < cell.col {
            return None;
        }
        let mut parts = self.parts.clone();
        if cell.row > parts.len() {
            parts.push(1);
        } else {
            parts[cell.row - 1] += 1;
        }
        Some(Partition { parts })
    }

    /// Number of standard Young tableaux, n!/Π h(x). `dimension(()) = 1`.
    pub fn dimension(&self) -> BigUint {
        let n = self.size();
        let factorial: BigUint = (1..=n as u64).map(BigUint::from).product();
        let hooks: BigUint = self
            .arms_legs()
            .into_iter()
            .map(|(a, l)| BigUint::from((a + l + 1) as u64))
            .product();
        let (q, r) = factorial.div_rem(&hooks);
        assert!(
            r.is_zero(),
            "hook length division left a remainder for {self}"
        );
        q
    }

    /// (c, c′) = (Π(α·a + l + 1), Π(α·a + l + α)), exact.
    pub fn hook_products(&self, alpha: &AlphaParam) -> (Rational, Rational) {
        let p = alpha.value().numer().clone();
        let q = alpha.value().denom().clone();
        let mut c = BigInt::one();
        let mut c_prime = BigInt::one();
        let mut scale = BigInt::one();
        for (a, l) in self.arms_legs() {
            let a = BigInt::from(a);
            let l = BigInt::from(l);
            c *= &p * &a + &q * (&l + 1u32);
            c_prime *= &p * &a + &q * &l + &p;
            scale *= &q;
        }
        (
            Rational::new(c, scale.clone()),
            Rational::new(c_prime, scale),
        )
    }

    /// Σ_i [α·C(λ_i,2) − C(λ'_i,2)], split as (Σ C(λ_i,2), Σ C(λ'_i,2)).
    pub fn binomial_sums(&self) -> (u64, u64) {
        let rows = self
            .parts
            .iter()
            .map(|&r| crate::rational::binom2(r as u64))
            .sum();
        let cols = self
            .conjugate()
            .parts
            .iter()
            .map(|&c| crate::rational::binom2(c as u64))
            .sum();
        (rows, cols)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("partition must look like [4,2,1], got {s:?}")))?;
        if inner.trim().is_empty() {
            return Ok(Partition::empty());
        }
        let parts = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad part {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if parts.contains(&0) {
            return Err(Error::Parse(format!("zero part in {s:?}")));
        }
        Partition::new(parts)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// All partitions of `n` in decreasing lexicographic order: `(n)` first,
/// `(1^n)` last.
pub fn enumerate_partitions(n: usize) -> Partitions {
    Partitions {
        next: Some(if n == 0 { Vec::new() } else { vec![n] }),
    }
}

pub struct Partitions {
    next: Option<Vec<usize>>,
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let current = self.next.take()?;
        // Successor: lower the last part > 1 by one and refill the tail
        // greedily with parts no larger than it.
        if let Some(i) = current.iter().rposition(|&p| p > 1) {
            let mut succ = current[..=i].to_vec();
            succ[i] -= 1;
            let cap = succ[i];
            let mut rest = current.len() - i;
            while rest > 0 {
                let take = rest.min(cap);
                succ.push(take);
                rest -= take;
            }
            self.next = Some(succ);
        }
        Some(Partition::from_parts_unchecked(current))
    }
}
