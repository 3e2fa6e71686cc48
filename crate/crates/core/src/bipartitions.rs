//! Partitions, bi-partitions and the interleaved dominance order.
//!
//! Partitions are stored with trailing zeros stripped, so derived equality is
//! equality modulo zero padding.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Builds a partition, dropping trailing zeros. Fails if the parts increase anywhere.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(parts));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Self(parts))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Nonzero parts.
    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// `parts[i]` with zero padding.
    pub fn part(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest part, zero for the empty partition.
    pub fn first(&self) -> usize {
        self.part(0)
    }

    /// Conjugate partition: `t[j] = #{i : p[i] > j}`.
    pub fn transpose(&self) -> Partition {
        let cols = self.first();
        Partition((0..cols).map(|j| self.0.iter().filter(|&&p| p > j).count()).collect())
    }

    /// Componentwise sum at equal index.
    pub fn add(&self, other: &Partition) -> Partition {
        let len = self.len().max(other.len());
        Partition((0..len).map(|i| self.part(i) + other.part(i)).collect())
    }

    /// All partitions of `n` in increasing lexicographic order.
    pub fn all_of(n: usize) -> Vec<Partition> {
        fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for part in 1..=rest.min(max) {
                cur.push(part);
                rec(rest - part, part, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    /// Runs of equal parts as `(part, multiplicity)`, largest part first.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((part, m)) if *part == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses a comma separated list; the empty string is the empty partition.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<usize>::deserialize(deserializer)?;
        Partition::new(parts).map_err(serde::de::Error::custom)
    }
}

/// A finite list of nonnegative integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Composition(pub Vec<usize>);

impl Composition {
    pub fn partial_sums(&self) -> Vec<usize> {
        self.0
            .iter()
            .scan(0, |acc, &c| {
                *acc += c;
                Some(*acc)
            })
            .collect()
    }
}

/// An ordered pair of partitions `(μ;ν)`; labels an orbit in `V × N` with `n = |μ| + |ν|`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Bipartition {
    pub mu: Partition,
    pub nu: Partition,
}

impl Bipartition {
    pub fn new(mu: Partition, nu: Partition) -> Self {
        Self { mu, nu }
    }

    /// Convenience constructor from raw part lists.
    pub fn from_parts(mu: &[usize], nu: &[usize]) -> Result<Self> {
        Ok(Self::new(Partition::new(mu.to_vec())?, Partition::new(nu.to_vec())?))
    }

    pub fn n(&self) -> usize {
        self.mu.size() + self.nu.size()
    }

    /// Jordan type `μ + ν` of the nilpotent part.
    pub fn lambda(&self) -> Partition {
        self.mu.add(&self.nu)
    }

    /// `(μ₁, ν₁, μ₂, ν₂, …)` padded to `2·max(ℓ(μ), ℓ(ν))` entries.
    pub fn interleave(&self) -> Composition {
        let len = self.mu.len().max(self.nu.len());
        Composition((0..len).flat_map(|i| [self.mu.part(i), self.nu.part(i)]).collect())
    }

    /// Closure order: `self ≤ other` iff every partial sum of the interleaving is dominated.
    pub fn closure_leq(&self, other: &Bipartition) -> Result<bool> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch { left: self.n(), right: other.n() });
        }
        let a = self.interleave().partial_sums();
        let b = other.interleave().partial_sums();
        let n = self.n();
        let len = a.len().max(b.len());
        Ok((0..len).all(|i| a.get(i).copied().unwrap_or(n) <= b.get(i).copied().unwrap_or(n)))
    }

    /// Filename-safe label, e.g. `mu2.1_nu1`.
    pub fn file_stem(&self) -> String {
        let join = |p: &Partition| p.parts().iter().map(ToString::to_string).collect::<Vec<_>>().join(".");
        format!("mu{}_nu{}", join(&self.mu), join(&self.nu))
    }
}

impl fmt::Display for Bipartition {
    /// `"mu|nu"`, e.g. `"2|"` or `"1,1|1"`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.mu, self.nu)
    }
}

impl FromStr for Bipartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (mu, nu) = s
            .split_once('|')
            .ok_or_else(|| Error::Parse(format!("expected \"mu|nu\", got {s:?}")))?;
        Ok(Bipartition::new(mu.parse()?, nu.parse()?))
    }
}

/// Serde adapter storing a [`Bipartition`] as its `"mu|nu"` string.
pub mod as_label {
    use super::*;

    pub fn serialize<S: Serializer>(b: &Bipartition, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(b)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Bipartition, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// All `(μ;ν)` with `|μ| + |ν| = n`, ordered lexicographically on `(|μ|, μ, ν)`.
pub fn enumerate_bipartitions(n: usize) -> Vec<Bipartition> {
    let mut out = Vec::new();
    for k in 0..=n {
        let nus = Partition::all_of(n - k);
        for mu in Partition::all_of(k) {
            for nu in &nus {
                out.push(Bipartition::new(mu.clone(), nu.clone()));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn b(mu: &[usize], nu: &[usize]) -> Bipartition {
        Bipartition::from_parts(mu, nu).unwrap()
    }

    /// Partition numbers by Euler's pentagonal recurrence.
    fn partition_numbers(max: usize) -> Vec<usize> {
        let mut p = vec![0i64; max + 1];
        p[0] = 1;
        for n in 1..=max {
            let mut k = 1i64;
            loop {
                let g1 = (k * (3 * k - 1) / 2) as usize;
                if g1 > n {
                    break;
                }
                let sign = if k % 2 == 1 { 1 } else { -1 };
                p[n] += sign * p[n - g1];
                let g2 = (k * (3 * k + 1) / 2) as usize;
                if g2 <= n {
                    p[n] += sign * p[n - g2];
                }
                k += 1;
            }
        }
        p.into_iter().map(|v| v as usize).collect()
    }

    #[test]
    fn transpose_examples() {
        assert_eq!(p(&[]).transpose(), p(&[]));
        assert_eq!(p(&[3, 1]).transpose(), p(&[2, 1, 1]));
        for n in 0..=10 {
            for part in Partition::all_of(n) {
                assert_eq!(part.transpose().transpose(), part);
            }
        }
    }

    #[test]
    fn zero_padding_is_ignored() {
        assert_eq!(p(&[2, 1, 0, 0]), p(&[2, 1]));
        assert!(Partition::new(vec![1, 2]).is_err());
        assert_eq!(b(&[1, 0], &[]), b(&[1], &[0]));
    }

    #[test]
    fn add_examples() {
        assert_eq!(p(&[1]).add(&p(&[1])), p(&[2]));
        assert_eq!(p(&[2, 1]).add(&p(&[1, 1])), p(&[3, 2]));
    }

    #[test]
    fn add_merges_columns() {
        for n in 0..=8 {
            for bp in enumerate_bipartitions(n) {
                let mut cols: Vec<usize> = bp.mu.transpose().parts().to_vec();
                cols.extend_from_slice(bp.nu.transpose().parts());
                cols.sort_unstable_by(|a, b| b.cmp(a));
                assert_eq!(bp.lambda().transpose().parts(), &cols[..], "{bp}");
            }
        }
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_bipartitions(0), vec![b(&[], &[])]);
        assert_eq!(enumerate_bipartitions(2).len(), 5);
        assert_eq!(enumerate_bipartitions(3).len(), 10);
        let pn = partition_numbers(10);
        for n in 0..=10 {
            let expected: usize = (0..=n).map(|k| pn[k] * pn[n - k]).sum();
            assert_eq!(enumerate_bipartitions(n).len(), expected);
        }
    }

    #[test]
    fn enumeration_order_is_lexicographic() {
        let all = enumerate_bipartitions(4);
        let keys: Vec<_> = all.iter().map(|x| (x.mu.size(), x.mu.clone(), x.nu.clone())).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        sorted.dedup();
        assert_eq!(sorted.len(), all.len());
    }

    #[test]
    fn interleave_examples() {
        assert_eq!(b(&[1, 1], &[]).interleave().0, vec![1, 0, 1, 0]);
        assert_eq!(b(&[1], &[1]).interleave().0, vec![1, 1]);
        assert_eq!(b(&[2, 1], &[1, 1]).interleave().0, vec![2, 1, 1, 1]);
    }

    #[test]
    fn closure_examples() {
        assert!(b(&[1], &[1]).closure_leq(&b(&[2], &[])).unwrap());
        assert!(!b(&[1, 1], &[]).closure_leq(&b(&[], &[2])).unwrap());
        assert!(!b(&[], &[2]).closure_leq(&b(&[1, 1], &[])).unwrap());
        assert!(b(&[2, 1], &[]).closure_leq(&b(&[2, 1], &[])).unwrap());
        assert!(matches!(
            b(&[1], &[]).closure_leq(&b(&[2], &[])),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn closure_is_a_partial_order_with_extremes() {
        for n in 0..=6 {
            let all = enumerate_bipartitions(n);
            for a in &all {
                assert!(a.closure_leq(a).unwrap());
                for c in &all {
                    let ac = a.closure_leq(c).unwrap();
                    if ac && c.closure_leq(a).unwrap() {
                        assert_eq!(a, c);
                    }
                    for d in &all {
                        if ac && c.closure_leq(d).unwrap() {
                            assert!(a.closure_leq(d).unwrap());
                        }
                    }
                }
            }
            let top = b(&[n], &[]);
            let bottom = Bipartition::new(Partition::empty(), Partition::new(vec![1; n]).unwrap());
            for a in &all {
                assert!(a.closure_leq(&top).unwrap());
                assert!(bottom.closure_leq(a).unwrap());
            }
        }
    }

    #[test]
    fn string_and_json_forms() {
        let x = b(&[1, 1], &[1]);
        assert_eq!(x.to_string(), "1,1|1");
        assert_eq!("1,1|1".parse::<Bipartition>().unwrap(), x);
        assert_eq!(b(&[2], &[]).to_string(), "2|");
        assert_eq!(serde_json::to_string(&x).unwrap(), r#"{"mu":[1,1],"nu":[1]}"#);
        let back: Bipartition = serde_json::from_str(r#"{"mu":[1,1,0],"nu":[1]}"#).unwrap();
        assert_eq!(back, x);
        assert!("12".parse::<Bipartition>().is_err());
    }
}
