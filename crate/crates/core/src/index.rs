//! Exponent vectors for monomials in `n` variables.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An exponent vector `k ∈ ℕⁿ` with its cached total degree `|k|`.
///
/// Ordering is graded first, then lexicographic on the exponents, so a
/// sorted collection visits degree slices in increasing order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    exps: Box<[u32]>,
    degree: u32,
}

impl MultiIndex {
    pub fn new(exps: impl Into<Vec<u32>>) -> Self {
        let exps: Vec<u32> = exps.into();
        let degree = exps.iter().sum();
        MultiIndex {
            exps: exps.into_boxed_slice(),
            degree,
        }
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex::new(vec![0; n])
    }

    /// The unit vector `e_i` (0-based `i`).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        MultiIndex::new(v)
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.exps.len()
    }

    #[inline]
    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    #[inline]
    pub fn get(&self, i: usize) -> u32 {
        self.exps[i]
    }

    /// Sum of the first `s` exponents (the weight in the `x` block).
    pub fn head_weight(&self, s: usize) -> u32 {
        self.exps[..s].iter().sum()
    }

    /// Sum of the exponents after position `s` (the weight in the `y` block).
    pub fn tail_weight(&self, s: usize) -> u32 {
        self.degree - self.head_weight(s)
    }

    pub fn is_zero(&self) -> bool {
        self.degree == 0
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.dim(), other.dim());
        MultiIndex::new(
            self.exps
                .iter()
                .zip(other.exps.iter())
                .map(|(a, b)| a + b)
                .collect::<Vec<_>>(),
        )
    }

    /// `self − other`, or `None` if some component would go negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        let mut out = Vec::with_capacity(self.dim());
        for (a, b) in self.exps.iter().zip(other.exps.iter()) {
            out.push(a.checked_sub(*b)?);
        }
        Some(MultiIndex::new(out))
    }

    /// Componentwise `self ≤ other`.
    pub fn divides(&self, other: &MultiIndex) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    pub fn with_component(&self, i: usize, value: u32) -> MultiIndex {
        let mut v = self.exps.to_vec();
        v[i] = value;
        MultiIndex::new(v)
    }

    /// Index of the last nonzero exponent.
    pub fn last_nonzero(&self) -> Option<usize> {
        self.exps.iter().rposition(|&e| e != 0)
    }

    /// All indices of total degree `d` in `n` variables, ascending.
    pub fn of_degree(n: usize, d: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        fill(&mut cur, 0, d, &mut out);
        out.sort();
        out
    }

    /// All indices with `lo ≤ |k| ≤ hi`, in graded-lex order.
    pub fn in_degree_range(n: usize, lo: u32, hi: u32) -> Vec<MultiIndex> {
        (lo..=hi).flat_map(|d| MultiIndex::of_degree(n, d)).collect()
    }

    /// Every `a` with `0 ≤ a ≤ self` componentwise, excluding `0` and `self`.
    pub fn proper_divisors(&self) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.dim()];
        loop {
            let idx = MultiIndex::new(cur.clone());
            if !idx.is_zero() && idx.degree != self.degree {
                out.push(idx);
            }
            let mut pos = 0;
            loop {
                if pos == cur.len() {
                    out.sort();
                    return out;
                }
                if cur[pos] < self.exps[pos] {
                    cur[pos] += 1;
                    break;
                }
                cur[pos] = 0;
                pos += 1;
            }
        }
    }
}

fn fill(cur: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    if pos + 1 == cur.len() {
        cur[pos] = remaining;
        out.push(MultiIndex::new(cur.clone()));
        return;
    }
    if cur.is_empty() {
        return;
    }
    for e in 0..=remaining {
        cur[pos] = e;
        fill(cur, pos + 1, remaining - e, out);
    }
    cur[pos] = 0;
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.exps.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for MultiIndex {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.exps.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MultiIndex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(MultiIndex::new(Vec::<u32>::deserialize(deserializer)?))
    }
}
