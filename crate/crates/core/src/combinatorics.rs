//! Partitions, set partitions and the index triples `ξ = (n, k, λ)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// An integer partition stored as its weakly decreasing list of positive parts.
///
/// Ordering is graded: first by weight, then reverse-lexicographically on the
/// parts, so `(2) < (1,1) < (3) < (2,1) < (1,1,1)`. This is the order used by
/// every enumeration and serializer in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Validating constructor: parts must be positive and weakly decreasing.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Self { parts })
    }

    /// Sorts and drops zeros; never fails.
    pub fn from_unsorted<I: IntoIterator<Item = u32>>(parts: I) -> Self {
        let mut parts: Vec<u32> = parts.into_iter().filter(|&p| p > 0).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `|λ|`
    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// `supp λ`, the number of nonzero parts.
    pub fn supp(&self) -> usize {
        self.parts.len()
    }

    /// `m_j(λ)` for `j ≥ 1`.
    pub fn mult(&self, j: u32) -> usize {
        self.parts.iter().filter(|&&p| p == j).count()
    }

    pub fn largest(&self) -> u32 {
        self.parts.first().copied().unwrap_or(0)
    }

    /// Part `i` (1-based), zero beyond the support.
    pub fn part(&self, i: usize) -> u32 {
        if i == 0 {
            return 0;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    /// Multiplicities as a map `part ↦ count`.
    pub fn multiplicities(&self) -> BTreeMap<u32, usize> {
        let mut out = BTreeMap::new();
        for &p in &self.parts {
            *out.entry(p).or_insert(0) += 1;
        }
        out
    }

    pub fn fits_in_box(&self, rows: u32, cols: u32) -> bool {
        self.supp() <= rows as usize && self.largest() <= cols
    }

    /// The partition with the parts of `self` and `other` merged.
    pub fn union(&self, other: &Partition) -> Partition {
        Partition::from_unsorted(self.parts.iter().chain(other.parts.iter()).copied())
    }

    /// Adds one part `k > 0`.
    pub fn with_part(&self, k: u32) -> Partition {
        let mut parts = self.parts.clone();
        let pos = parts.iter().position(|&p| p < k).unwrap_or(parts.len());
        parts.insert(pos, k);
        Partition { parts }
    }

    /// Removes one copy of part `k`, if present.
    pub fn without_part(&self, k: u32) -> Option<Partition> {
        let pos = self.parts.iter().position(|&p| p == k)?;
        let mut parts = self.parts.clone();
        parts.remove(pos);
        Some(Partition { parts })
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;
    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        f.write_str(&text.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad partition `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// All partitions of `d`, in canonical order.
pub fn partitions_of(d: u32) -> Vec<Partition> {
    partitions_bounded(d, d, usize::MAX)
}

/// Partitions of `d` with largest part `≤ max_part` and at most `max_len` parts.
pub fn partitions_bounded(d: u32, max_part: u32, max_len: usize) -> Vec<Partition> {
    fn rec(rem: u32, max_part: u32, max_len: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        if max_len == 0 {
            return;
        }
        for p in (1..=max_part.min(rem)).rev() {
            cur.push(p);
            rec(rem - p, p, max_len - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, max_part, max_len, &mut Vec::new(), &mut out);
    out
}

/// Number of partitions `p(d)`.
pub fn partition_count(d: u32) -> usize {
    let d = d as usize;
    let mut table = vec![0usize; d + 1];
    table[0] = 1;
    for part in 1..=d {
        for total in part..=d {
            table[total] += table[total - part];
        }
    }
    table[d]
}

/// The elements of `𝒴(a, b)`: partitions fitting in an `a × b` box
/// (at most `a` parts, each at most `b`), graded by weight.
pub fn partitions_in_box(a: u32, b: u32) -> Vec<Partition> {
    (0..=a * b)
        .flat_map(|d| partitions_bounded(d, b, a as usize))
        .collect()
}

/// An unordered set partition of `{1, …, r}` in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SetPartition {
    blocks: Vec<Vec<u32>>,
}

impl SetPartition {
    /// Canonicalizes and validates that `blocks` partition `{1, …, r}`.
    pub fn new(mut blocks: Vec<Vec<u32>>) -> Result<Self> {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_by(|x, y| y.len().cmp(&x.len()).then_with(|| x[0].cmp(&y[0])));
        let mut seen: Vec<u32> = blocks.iter().flatten().copied().collect();
        seen.sort_unstable();
        let r = seen.len() as u32;
        if blocks.iter().any(Vec::is_empty) || seen != (1..=r).collect::<Vec<_>>() {
            return Err(Error::InvalidPartition(format!("{blocks:?} is not a set partition")));
        }
        Ok(Self { blocks })
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    /// Size of the ground set.
    pub fn size(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// The partition of block sizes.
    pub fn block_type(&self) -> Partition {
        Partition::from_unsorted(self.blocks.iter().map(|b| b.len() as u32))
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let inner: Vec<String> = b.iter().map(u32::to_string).collect();
                format!("{{{}}}", inner.join(","))
            })
            .collect();
        write!(f, "{{{}}}", blocks.join(","))
    }
}

/// All set partitions of `{1, …, r}` whose block sizes form `pi`.
///
/// Each unordered set partition appears once. The smallest unassigned
/// element always opens the next block, which removes block-order duplicates.
pub fn set_partitions_of_type(r: usize, pi: &Partition) -> Result<Vec<SetPartition>> {
    if pi.weight() as usize != r {
        return Err(Error::SizeMismatch { expected: r, got: pi.weight() as usize });
    }
    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
    for &p in pi.parts() {
        *sizes.entry(p as usize).or_insert(0) += 1;
    }

    fn rec(
        free: &mut Vec<u32>,
        sizes: &mut BTreeMap<usize, usize>,
        cur: &mut Vec<Vec<u32>>,
        out: &mut Vec<SetPartition>,
    ) {
        let Some(&first) = free.first() else {
            out.push(SetPartition::new(cur.clone()).expect("enumeration yields set partitions"));
            return;
        };
        let choices: Vec<usize> = sizes.iter().filter(|(_, &c)| c > 0).map(|(&s, _)| s).collect();
        for size in choices {
            *sizes.get_mut(&size).unwrap() -= 1;
            let rest: Vec<u32> = free[1..].to_vec();
            for combo in combinations(&rest, size - 1) {
                let mut block = vec![first];
                block.extend_from_slice(&combo);
                let remaining: Vec<u32> = rest.iter().copied().filter(|x| !combo.contains(x)).collect();
                let saved = std::mem::replace(free, remaining);
                cur.push(block);
                rec(free, sizes, cur, out);
                cur.pop();
                *free = saved;
            }
            *sizes.get_mut(&size).unwrap() += 1;
        }
    }

    let mut out = Vec::new();
    let mut free: Vec<u32> = (1..=r as u32).collect();
    rec(&mut free, &mut sizes, &mut Vec::new(), &mut out);
    out.sort();
    Ok(out)
}

/// All `k`-element subsets of `items`, preserving order.
pub fn combinations<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    fn rec<T: Clone>(items: &[T], k: usize, start: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i].clone());
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}

/// All permutations of `{0, …, r-1}` in lexicographic order.
pub fn permutations(r: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..r).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..r).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..r).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// `ξ = (n, k, λ)`. Construction through [`IndexTriple::new`] guarantees
/// membership in `𝔓`: `n ≥ k ≥ 0` and `λ` fits in the `(n−k) × k` box.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IndexTriple {
    n: u32,
    k: u32,
    lam: Partition,
}

impl IndexTriple {
    pub fn new(n: u32, k: u32, lam: Partition) -> Result<Self> {
        if k > n {
            return Err(Error::InvalidTriple(format!("{n}:{k}:{lam}"), "k exceeds n".into()));
        }
        if !lam.fits_in_box(n - k, k) {
            return Err(Error::InvalidTriple(
                format!("{n}:{k}:{lam}"),
                format!("partition does not fit in a {}x{k} box", n - k),
            ));
        }
        Ok(Self { n, k, lam })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn lam(&self) -> &Partition {
        &self.lam
    }

    /// `m_0 = n − k − supp λ`.
    pub fn m0(&self) -> usize {
        (self.n - self.k) as usize - self.lam.supp()
    }

    /// `ξ^c = (n, k, λ^c)` where `λ^c` is the complement of `λ` rotated in the box.
    pub fn complement(&self) -> IndexTriple {
        let k = self.k;
        let mut parts = vec![k; self.m0()];
        parts.extend(self.lam.parts().iter().rev().map(|&p| k - p));
        IndexTriple {
            n: self.n,
            k,
            lam: Partition::from_unsorted(parts),
        }
    }

    /// `ψ(n, k, λ) = (n + 2, k + 1, λ)`.
    pub fn psi(&self) -> IndexTriple {
        IndexTriple {
            n: self.n + 2,
            k: self.k + 1,
            lam: self.lam.clone(),
        }
    }

    /// Membership in `𝔓^stab`.
    pub fn is_stable(&self) -> bool {
        let d = self.lam.weight() as i64;
        let (n, k) = (self.n as i64, self.k as i64);
        let bound = if n % 2 == 0 { (n - k).min(k) } else { (n - k).min(k - 1) };
        d <= bound
    }
}

impl fmt::Display for IndexTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.n, self.k, self.lam)
    }
}

impl FromStr for IndexTriple {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut it = s.trim().splitn(3, ':');
        let bad = || Error::Parse(format!("bad index triple `{s}`, expected n:k:parts"));
        let n = it.next().ok_or_else(bad)?.trim().parse::<u32>().map_err(|_| bad())?;
        let k = it.next().ok_or_else(bad)?.trim().parse::<u32>().map_err(|_| bad())?;
        let lam = it.next().ok_or_else(bad)?.parse::<Partition>()?;
        IndexTriple::new(n, k, lam)
    }
}

/// `𝔓(n)`, ordered by `k` and then by the canonical partition order.
pub fn enum_p(n: u32) -> Vec<IndexTriple> {
    (0..=n)
        .flat_map(|k| {
            partitions_in_box(n - k, k)
                .into_iter()
                .map(move |lam| IndexTriple { n, k, lam })
        })
        .collect()
}

/// `𝔓_μ(n)` for `μ = t_{jα1}(Λ0) − dδ`: triples in `𝔓(n)` with
/// `k − n/2 = j` and `|λ| = d`. Requires `n` even.
pub fn enum_p_mu(j: i64, d: u32, n: u32) -> Result<Vec<IndexTriple>> {
    if n % 2 != 0 {
        return Err(Error::Parity(format!("𝔓_μ(n) needs even n, got {n}")));
    }
    let k = j + n as i64 / 2;
    if k < 0 || k > n as i64 {
        return Ok(Vec::new());
    }
    let k = k as u32;
    Ok(partitions_bounded(d, k, (n - k) as usize)
        .into_iter()
        .map(|lam| IndexTriple { n, k, lam })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn xi(n: u32, k: u32, parts: &[u32]) -> IndexTriple {
        IndexTriple::new(n, k, p(parts)).unwrap()
    }

    #[test]
    fn partition_accessors() {
        let lam = p(&[3, 3, 1]);
        assert_eq!(lam.weight(), 7);
        assert_eq!(lam.supp(), 3);
        assert_eq!(lam.mult(3), 2);
        assert_eq!(lam.mult(2), 0);
        let total: u32 = lam.multiplicities().iter().map(|(j, m)| j * *m as u32).sum();
        assert_eq!(total, lam.weight());
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
    }

    #[test]
    fn partition_text() {
        assert_eq!(p(&[2, 1]).to_string(), "2,1");
        assert_eq!(Partition::empty().to_string(), "");
        assert_eq!("2,1".parse::<Partition>().unwrap(), p(&[2, 1]));
        assert_eq!("".parse::<Partition>().unwrap(), Partition::empty());
        assert!("1,2".parse::<Partition>().is_err());
    }

    #[test]
    fn box_examples() {
        assert_eq!(partitions_in_box(0, 5), vec![Partition::empty()]);
        assert_eq!(partitions_in_box(1, 1), vec![Partition::empty(), p(&[1])]);
        assert_eq!(
            partitions_in_box(2, 2),
            vec![Partition::empty(), p(&[1]), p(&[2]), p(&[1, 1]), p(&[2, 1]), p(&[2, 2])]
        );
    }

    #[test]
    fn set_partition_examples() {
        let got = set_partitions_of_type(3, &p(&[2, 1])).unwrap();
        let text: Vec<String> = got.iter().map(ToString::to_string).collect();
        assert_eq!(text, vec!["{{1,2},{3}}", "{{1,3},{2}}", "{{2,3},{1}}"]);
        assert_eq!(set_partitions_of_type(2, &p(&[1, 1])).unwrap().len(), 1);
        let one = set_partitions_of_type(3, &p(&[3])).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].blocks(), &[vec![1, 2, 3]]);
        assert!(set_partitions_of_type(4, &p(&[2, 1])).is_err());
    }

    #[test]
    fn set_partition_canonical_form() {
        let a = SetPartition::new(vec![vec![3], vec![2, 1]]).unwrap();
        let b = SetPartition::new(vec![vec![1, 2], vec![3]]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.block_type(), p(&[2, 1]));
        assert!(SetPartition::new(vec![vec![1], vec![3]]).is_err());
    }

    #[test]
    fn complement_examples() {
        assert_eq!(xi(4, 2, &[2, 1]).complement(), xi(4, 2, &[1]));
        assert_eq!(xi(5, 2, &[]).complement(), xi(5, 2, &[2, 2, 2]));
        assert_eq!(xi(3, 0, &[]).complement(), xi(3, 0, &[]));
    }

    #[test]
    fn psi_and_stability_examples() {
        assert_eq!(xi(4, 2, &[2, 1]).psi(), xi(6, 3, &[2, 1]));
        assert_eq!(xi(0, 0, &[]).psi(), xi(2, 1, &[]));
        assert!(!xi(4, 2, &[2, 1]).is_stable());
        assert!(xi(6, 3, &[2, 1]).is_stable());
        assert!(xi(1, 1, &[]).is_stable());
        assert!(!xi(1, 0, &[]).is_stable());
    }

    #[test]
    fn triple_validation_and_text() {
        assert!(IndexTriple::new(2, 3, Partition::empty()).is_err());
        assert!(IndexTriple::new(4, 2, p(&[3])).is_err());
        assert!(IndexTriple::new(4, 2, p(&[1, 1, 1])).is_err());
        let t: IndexTriple = "4:2:2,1".parse().unwrap();
        assert_eq!(t, xi(4, 2, &[2, 1]));
        assert_eq!(t.to_string(), "4:2:2,1");
        assert_eq!("3:3:".parse::<IndexTriple>().unwrap(), xi(3, 3, &[]));
        assert!("4:2".parse::<IndexTriple>().is_err());
        assert!("4:x:1".parse::<IndexTriple>().is_err());
    }

    #[test]
    fn enum_p_mu_examples() {
        assert_eq!(enum_p_mu(0, 3, 8).unwrap().len(), 3);
        assert!(enum_p_mu(5, 0, 8).unwrap().is_empty());
        assert!(enum_p_mu(0, 0, 3).is_err());
        for t in enum_p_mu(1, 2, 6).unwrap() {
            assert_eq!(t.k() as i64 - 3, 1);
            assert_eq!(t.lam().weight(), 2);
        }
    }

    #[test]
    fn permutations_are_complete() {
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(4).len(), 24);
    }
}
