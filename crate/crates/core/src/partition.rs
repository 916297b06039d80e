//! Partitions and Hurwitz problem descriptors.

use std::fmt;
use std::str::FromStr;

use crate::error::{HurwitzError, Result};

/// An ordered integer partition. The order of the parts carries their
/// labels, so `(2,1)` and `(1,2)` are different values with the same
/// underlying multiset.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Builds a partition, rejecting empty input and zero parts.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(HurwitzError::Parse("a partition needs at least one part".into()));
        }
        if parts.contains(&0) {
            return Err(HurwitzError::Parse("partition parts must be positive".into()));
        }
        Ok(Partition { parts })
    }

    /// Builds a partition from a slice; panics on invalid data. Intended for
    /// literals in tests and examples.
    pub fn of(parts: &[u32]) -> Self {
        Partition::new(parts.to_vec()).expect("valid partition literal")
    }

    /// The partition `(1,1,...,1)` of `d`.
    pub fn ones(d: u32) -> Self {
        Partition::of(&vec![1; d as usize])
    }

    /// The labelled parts.
    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of parts, written ℓ(μ).
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    /// Always false: partitions have at least one part.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// The degree, that is the sum of the parts.
    pub fn degree(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// The subsequence of parts at the given label indices.
    pub fn sub(&self, idx: &[usize]) -> Vec<u32> {
        idx.iter().map(|&i| self.parts[i]).collect()
    }

    /// Order of the group of index permutations preserving the parts, which
    /// is the product of `k!` over the multiplicities `k` of the part values.
    pub fn automorphisms(&self) -> u64 {
        automorphisms(&self.parts)
    }

    /// Parts sorted in descending order.
    pub fn sorted_desc(&self) -> Vec<u32> {
        let mut v = self.parts.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    /// The descending normalization together with the permutation used:
    /// `perm[k]` is the original label of the k-th part of the result.
    pub fn normalize(&self) -> (Partition, Vec<usize>) {
        let mut perm: Vec<usize> = (0..self.parts.len()).collect();
        perm.sort_by(|&a, &b| self.parts[b].cmp(&self.parts[a]).then(a.cmp(&b)));
        let parts = perm.iter().map(|&i| self.parts[i]).collect();
        (Partition { parts }, perm)
    }
}

/// [`Partition::automorphisms`] for a raw slice of parts.
pub fn automorphisms(parts: &[u32]) -> u64 {
    let mut v = parts.to_vec();
    v.sort_unstable();
    let mut total = 1u64;
    let mut run = 0u64;
    for i in 0..v.len() {
        run = if i > 0 && v[i] == v[i - 1] { run + 1 } else { 1 };
        total *= run;
    }
    total
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl FromStr for Partition {
    type Err = HurwitzError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = s
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|_| HurwitzError::Parse(format!("bad part {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// Which side's cycles carry the pruning (no-bubble) condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum PrunedSide {
    /// The cycles of σ₁, labelled by μ.
    Left,
    /// The cycles of σ₂, labelled by ν.
    Right,
    /// No pruning: the classical count.
    #[default]
    None,
}

impl FromStr for PrunedSide {
    type Err = HurwitzError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "left" | "mu" => Ok(PrunedSide::Left),
            "right" | "nu" => Ok(PrunedSide::Right),
            "none" => Ok(PrunedSide::None),
            other => Err(HurwitzError::Parse(format!("unknown pruned side {other:?}"))),
        }
    }
}

impl fmt::Display for PrunedSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PrunedSide::Left => "left",
            PrunedSide::Right => "right",
            PrunedSide::None => "none",
        })
    }
}

/// A double Hurwitz problem `(g, μ, ν)` with an optional pruning side.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HurwitzType {
    pub genus: u32,
    pub mu: Partition,
    pub nu: Partition,
    pub pruned_side: PrunedSide,
}

impl HurwitzType {
    /// Builds a classical type, checking that both partitions have the same
    /// degree.
    pub fn new(genus: u32, mu: Partition, nu: Partition) -> Result<Self> {
        if mu.degree() != nu.degree() {
            return Err(HurwitzError::Parse(format!(
                "degrees differ: |mu| = {}, |nu| = {}",
                mu.degree(),
                nu.degree()
            )));
        }
        Ok(HurwitzType { genus, mu, nu, pruned_side: PrunedSide::None })
    }

    /// Builds a type from slices; panics on invalid data.
    pub fn of(genus: u32, mu: &[u32], nu: &[u32]) -> Self {
        HurwitzType::new(genus, Partition::of(mu), Partition::of(nu)).expect("valid type literal")
    }

    /// The same type with the given pruning side.
    pub fn pruned(mut self, side: PrunedSide) -> Self {
        self.pruned_side = side;
        self
    }

    /// The degree `d`.
    pub fn degree(&self) -> u32 {
        self.mu.degree()
    }

    /// The number of simple branch points, `b = 2g - 2 + ℓ(μ) + ℓ(ν)`.
    /// May be zero or negative for degenerate types.
    pub fn branch_count(&self) -> i64 {
        2 * self.genus as i64 - 2 + self.mu.len() as i64 + self.nu.len() as i64
    }

    /// The type with μ and ν exchanged and the pruning side mirrored.
    pub fn swapped(&self) -> Self {
        let side = match self.pruned_side {
            PrunedSide::Left => PrunedSide::Right,
            PrunedSide::Right => PrunedSide::Left,
            PrunedSide::None => PrunedSide::None,
        };
        HurwitzType { genus: self.genus, mu: self.nu.clone(), nu: self.mu.clone(), pruned_side: side }
    }

    /// Canonical text form `g=G;mu=a,b;nu=x,y`. The pruning side is not part
    /// of the key; callers that need it keep it alongside.
    pub fn key(&self) -> String {
        format!("g={};mu={};nu={}", self.genus, self.mu, self.nu)
    }

    /// The key of the descending normalization, used by memo caches.
    pub fn normalized_key(&self) -> String {
        format!(
            "g={};mu={};nu={}",
            self.genus,
            self.mu.normalize().0,
            self.nu.normalize().0
        )
    }
}

/// Free-function form of [`HurwitzType::branch_count`].
pub fn branch_count(t: &HurwitzType) -> i64 {
    t.branch_count()
}

impl fmt::Display for HurwitzType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.key())?;
        if self.pruned_side != PrunedSide::None {
            write!(f, ";pruned={}", self.pruned_side)?;
        }
        Ok(())
    }
}

impl FromStr for HurwitzType {
    type Err = HurwitzError;

    /// Parses `g=G;mu=...;nu=...` with an optional `;pruned=left|right`.
    fn from_str(s: &str) -> Result<Self> {
        let mut genus = None;
        let mut mu = None;
        let mut nu = None;
        let mut side = PrunedSide::None;
        for field in s.split(';').map(str::trim).filter(|f| !f.is_empty()) {
            let (k, v) = field
                .split_once('=')
                .ok_or_else(|| HurwitzError::Parse(format!("expected key=value, got {field:?}")))?;
            match k.trim() {
                "g" => {
                    genus = Some(v.trim().parse::<u32>().map_err(|_| HurwitzError::Parse(format!("bad genus {v:?}")))?)
                }
                "mu" => mu = Some(v.parse::<Partition>()?),
                "nu" => nu = Some(v.parse::<Partition>()?),
                "pruned" => side = v.parse()?,
                other => return Err(HurwitzError::Parse(format!("unknown field {other:?}"))),
            }
        }
        let missing = |name: &str| HurwitzError::Parse(format!("missing field {name}"));
        let t = HurwitzType::new(genus.ok_or_else(|| missing("g"))?, mu.ok_or_else(|| missing("mu"))?, nu.ok_or_else(|| missing("nu"))?)?;
        Ok(t.pruned(side))
    }
}

/// All compositions (ordered partitions) of `d`.
pub fn compositions(d: u32) -> Vec<Vec<u32>> {
    fn rec(rem: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for k in 1..=rem {
            cur.push(k);
            rec(rem - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if d > 0 {
        rec(d, &mut Vec::new(), &mut out);
    }
    out
}

/// All partitions of `d` as descending sequences.
pub fn partitions_desc(d: u32) -> Vec<Vec<u32>> {
    fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=rem.min(max)).rev() {
            cur.push(k);
            rec(rem - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if d > 0 {
        rec(d, d, &mut Vec::new(), &mut out);
    }
    out
}

/// Every type `(g, μ, ν)` with `1 ≤ d ≤ max_d` and `0 ≤ b ≤ max_b`, with
/// parts in descending order, sorted by degree, genus, then partitions.
pub fn types_within(max_d: u32, max_b: i64) -> Vec<HurwitzType> {
    let mut out = Vec::new();
    for d in 1..=max_d {
        let parts = partitions_desc(d);
        for g in 0..=((max_b + 2) / 2) as u32 {
            for mu in &parts {
                for nu in &parts {
                    let b = 2 * g as i64 - 2 + mu.len() as i64 + nu.len() as i64;
                    if (0..=max_b).contains(&b) {
                        out.push(HurwitzType::of(g, mu, nu));
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branch_count_examples() {
        assert_eq!(HurwitzType::of(1, &[5], &[4, 1]).branch_count(), 3);
        assert_eq!(HurwitzType::of(0, &[1], &[1]).branch_count(), 0);
        assert_eq!(HurwitzType::of(2, &[1, 1, 1], &[3]).branch_count(), 6);
    }

    #[test]
    fn automorphism_examples() {
        assert_eq!(Partition::of(&[1, 1, 1]).automorphisms(), 6);
        assert_eq!(Partition::of(&[4, 1]).automorphisms(), 1);
        assert_eq!(Partition::of(&[2, 2, 1, 1, 1]).automorphisms(), 12);
    }

    #[test]
    fn text_round_trip() {
        let t: HurwitzType = "g=1;mu=5;nu=4,1".parse().unwrap();
        assert_eq!(t, HurwitzType::of(1, &[5], &[4, 1]));
        assert_eq!(t.key(), "g=1;mu=5;nu=4,1");
        let p: HurwitzType = "g=0;mu=2;nu=2;pruned=left".parse().unwrap();
        assert_eq!(p.pruned_side, PrunedSide::Left);
        assert_eq!(p.to_string().parse::<HurwitzType>().unwrap(), p);
    }

    #[test]
    fn rejects_bad_input() {
        assert!("g=0;mu=2;nu=1".parse::<HurwitzType>().is_err());
        assert!("g=0;mu=0,2;nu=2".parse::<HurwitzType>().is_err());
        assert!("g=x;mu=2;nu=2".parse::<HurwitzType>().is_err());
        assert!("mu=2;nu=2".parse::<HurwitzType>().is_err());
    }

    #[test]
    fn normalization_remembers_labels() {
        let (p, perm) = Partition::of(&[1, 3, 2, 3]).normalize();
        assert_eq!(p.parts(), &[3, 3, 2, 1]);
        assert_eq!(perm, vec![1, 3, 2, 0]);
    }

    #[test]
    fn composition_and_partition_counts() {
        assert_eq!(compositions(4).len(), 8);
        assert_eq!(partitions_desc(5).len(), 7);
    }
}
