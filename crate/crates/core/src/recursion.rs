//! The pruned cut-and-join recursion with memoization.
//!
//! `PH_g(μ, ν)` is computed by removing the last simple branch point. Read
//! from the ν side, that branch point either cuts a strand of weight α into
//! `ν_i, ν_j`, joins two strands `a, b` of the same component into `ν_i`, or
//! joins two strands from different components into `ν_i`. A subset `I^c`
//! of the μ cycles (the coloured ends) may be absorbed at the same step;
//! those cycles become bubbles once the branch point is removed and the
//! remaining branch points touching them are interleaved, which is where
//! the falling factorial and the local coefficients come from.
//!
//! Base cases: `PH_0(μ, (ν₁)) = 0`, `PH_0((a), (b, c)) = 1`,
//! `PH_0((a, b), (c, d)) = 2·min(a, b, c, d)`, and longer μ with two ν parts
//! are delegated to the factorization oracle.
//!
//! The coefficient of a cut absorbing coloured cycles is exact only when
//! computed from the local picture. For one coloured cycle of length `m`
//! it equals `α · (2m - (m - ν_i)⁺ - (m - ν_j)⁺)`, which reduces to the
//! generic `2·α·m` when the ν pieces are at least `m`. For two or more
//! coloured cycles it is computed by simulating the local permutations;
//! see [`local_cut_count`].

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::RwLock;

use crate::error::{HurwitzError, Result};
use crate::oracle::{pruned_double_hurwitz_oracle_with, OracleConfig};
use crate::partition::{HurwitzType, Partition, PrunedSide};
use crate::perm::Permutation;
use crate::scalar::{factorial, falling, Scalar};

type Key = (u32, Vec<u32>, Vec<u32>);

fn sorted_desc(v: &[u32]) -> Vec<u32> {
    let mut v = v.to_vec();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

fn key_text(k: &Key) -> String {
    let join = |v: &[u32]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    format!("g={};mu={};nu={}", k.0, join(&k.1), join(&k.2))
}

/// Branch count `2g - 2 + ℓ(μ) + ℓ(ν)` for raw part lists.
pub fn branch(g: u32, m: usize, n: usize) -> i64 {
    2 * g as i64 - 2 + m as i64 + n as i64
}

/// Number of labelled ways to finish a local cut: the α-strand and the
/// coloured cycles `parts` are merged by `parts.len()` transpositions into
/// one cycle, which is then cut into pieces of lengths `ni` and the rest,
/// such that every coloured cycle is touched at least twice overall.
///
/// The count runs over all ordered merge sequences and all starting points
/// of the `ni` piece; dividing by `∏ parts · k!` gives the coefficient.
pub fn local_cut_count(alpha: u32, parts: &[u32], ni: u32) -> u64 {
    let total_len: usize = alpha as usize + parts.iter().map(|&p| p as usize).sum::<usize>();
    let mut blocks: Vec<u32> = vec![alpha];
    blocks.extend_from_slice(parts);
    let start = Permutation::standard(&blocks);
    let mut coloured = Vec::new();
    let mut offset = alpha as usize;
    for &p in parts {
        coloured.push((offset, offset + p as usize));
        offset += p as usize;
    }
    let mut taus = Vec::new();
    let mut total = 0;
    merge_then_cut(&start, parts.len(), &coloured, ni as usize, total_len, &mut taus, &mut total);
    total
}

fn merge_then_cut(
    p: &Permutation,
    left: usize,
    coloured: &[(usize, usize)],
    ni: usize,
    len: usize,
    taus: &mut Vec<(usize, usize)>,
    total: &mut u64,
) {
    if left == 0 {
        let cycle = &p.cycles()[0];
        let mut pos = vec![0; len];
        for (t, &e) in cycle.iter().enumerate() {
            pos[e] = t;
        }
        let inside = |x: usize, c: &(usize, usize)| usize::from(x >= c.0 && x < c.1);
        for x in 0..len {
            let y = cycle[(pos[x] + ni) % len];
            let ok = coloured.iter().all(|c| {
                let hits: usize = taus.iter().map(|&(a, b)| inside(a, c) + inside(b, c)).sum();
                hits + inside(x, c) + inside(y, c) >= 2
            });
            if ok {
                *total += 1;
            }
        }
        return;
    }
    let mut which = vec![0; len];
    for (k, c) in p.cycles().iter().enumerate() {
        for &e in c {
            which[e] = k;
        }
    }
    for a in 0..len {
        for b in a + 1..len {
            if which[a] == which[b] {
                continue;
            }
            let mut q = p.clone();
            q.then_swap(a, b);
            taus.push((a, b));
            merge_then_cut(&q, left - 1, coloured, ni, len, taus, total);
            taus.pop();
        }
    }
}

/// Coefficient of a cut step: strand α absorbs the coloured cycles
/// `coloured` and splits into labelled pieces `ni`, `nj`. Includes the
/// edge weight α but not the falling factorial.
pub fn cut_coefficient<S: Scalar>(alpha: u32, coloured: &[u32], ni: u32, nj: u32) -> S {
    match coloured.len() {
        0 => S::uint(alpha as u64),
        1 => {
            let m = coloured[0] as i64;
            let (ni, nj) = (ni as i64, nj as i64);
            let u = 2 * m - (m - ni).max(0) - (m - nj).max(0);
            S::uint(alpha as u64) * S::int(u)
        }
        k => {
            let count = local_cut_count(alpha, coloured, ni);
            let prod: u64 = coloured.iter().map(|&c| c as u64).product();
            S::uint(count) / (S::uint(prod) * factorial::<S>(k as u64))
        }
    }
}

/// Coefficient of a join step absorbing coloured cycles of total product
/// `prod` with `k` of them: `a · b · (k+1)! · ∏`, without the falling
/// factorial and without the symmetry factor 1/2.
pub fn join_coefficient<S: Scalar>(a: u32, b: u32, coloured: &[u32]) -> S {
    let prod = coloured.iter().fold(S::one(), |acc, &c| acc * S::uint(c as u64));
    S::uint(a as u64) * S::uint(b as u64) * factorial::<S>(coloured.len() as u64 + 1) * prod
}

/// A memoized evaluator of pruned double Hurwitz numbers by recursion.
///
/// The memo is the only shared state; it behaves as a get-or-compute map,
/// so concurrent callers may duplicate work but always agree on values.
pub struct PrunedRecursion<S: Scalar> {
    memo: RwLock<HashMap<Key, S>>,
    cuts: RwLock<HashMap<(u32, Vec<u32>, u32, u32), S>>,
    oracle: OracleConfig,
    cache_path: Option<PathBuf>,
}

impl<S: Scalar> Default for PrunedRecursion<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> PrunedRecursion<S> {
    /// An evaluator with an empty in-memory memo.
    pub fn new() -> Self {
        PrunedRecursion {
            memo: RwLock::new(HashMap::new()),
            cuts: RwLock::new(HashMap::new()),
            oracle: OracleConfig::default(),
            cache_path: None,
        }
    }

    /// Overrides the bounds used for base cases delegated to the oracle.
    pub fn with_oracle_config(mut self, config: OracleConfig) -> Self {
        self.oracle = config;
        self
    }

    /// An evaluator backed by a persistent cache file. Existing entries are
    /// loaded now; the file is rewritten after every top-level query.
    pub fn with_cache_file(path: impl AsRef<Path>) -> Result<Self> {
        let mut r = Self::new();
        let path = path.as_ref().to_path_buf();
        if path.exists() {
            let text = fs::read_to_string(&path)?;
            let mut memo = r.memo.write().expect("memo lock");
            for line in text.lines().filter(|l| !l.trim().is_empty()) {
                let (k, v) = line
                    .split_once('\t')
                    .ok_or_else(|| HurwitzError::Parse(format!("bad cache line {line:?}")))?;
                let t: HurwitzType = k.parse()?;
                let value = S::parse_pq(v).ok_or_else(|| HurwitzError::Parse(format!("bad cache value {v:?}")))?;
                memo.insert((t.genus, t.mu.sorted_desc(), t.nu.sorted_desc()), value);
            }
        }
        r.cache_path = Some(path);
        Ok(r)
    }

    /// Number of memoized entries.
    pub fn memo_len(&self) -> usize {
        self.memo.read().expect("memo lock").len()
    }

    /// Writes the memo to the cache file, if one is configured, by writing a
    /// temporary file and renaming it over the old one.
    pub fn save(&self) -> Result<()> {
        let Some(path) = &self.cache_path else { return Ok(()) };
        let memo = self.memo.read().expect("memo lock");
        let mut lines: Vec<String> = memo.iter().map(|(k, v)| format!("{}\t{}", key_text(k), v.to_pq())).collect();
        lines.sort();
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, lines.join("\n") + "\n")?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    /// `PH_g(μ, ν)` for the type, pruned on the side it names (μ by
    /// default), and persists the memo.
    pub fn value(&self, t: &HurwitzType) -> Result<S> {
        let v = match t.pruned_side {
            PrunedSide::Right => self.ph(t.genus, t.nu.parts(), t.mu.parts())?,
            _ => self.ph(t.genus, t.mu.parts(), t.nu.parts())?,
        };
        self.save()?;
        Ok(v)
    }

    /// The base case `(g, ℓ(ν)) = (0, 2)`.
    pub fn base_two(&self, mu: &[u32], nu: &[u32]) -> Result<S> {
        debug_assert_eq!(nu.len(), 2);
        match mu.len() {
            1 => Ok(S::one()),
            2 => {
                let min = mu.iter().chain(nu).copied().min().expect("nonempty");
                Ok(S::uint(2 * min as u64))
            }
            _ => {
                let t = HurwitzType::new(0, Partition::new(mu.to_vec())?, Partition::new(nu.to_vec())?)?
                    .pruned(PrunedSide::Left);
                pruned_double_hurwitz_oracle_with(&t, &self.oracle)
            }
        }
    }

    /// Cached [`cut_coefficient`].
    pub fn cut_coeff(&self, alpha: u32, coloured: &[u32], ni: u32, nj: u32) -> S {
        if coloured.len() < 2 {
            return cut_coefficient(alpha, coloured, ni, nj);
        }
        let key = (alpha, sorted_desc(coloured), ni, nj);
        if let Some(v) = self.cuts.read().expect("cut lock").get(&key) {
            return v.clone();
        }
        let v: S = cut_coefficient(alpha, &key.1, ni, nj);
        self.cuts.write().expect("cut lock").insert(key, v.clone());
        v
    }

    /// `PH_g(μ, ν)` pruned on the μ side, for raw part lists.
    pub fn ph(&self, g: u32, mu: &[u32], nu: &[u32]) -> Result<S> {
        let key: Key = (g, sorted_desc(mu), sorted_desc(nu));
        if let Some(v) = self.memo.read().expect("memo lock").get(&key) {
            return Ok(v.clone());
        }
        let v = self.compute(g, &key.1, &key.2)?;
        self.memo.write().expect("memo lock").insert(key, v.clone());
        Ok(v)
    }

    fn compute(&self, g: u32, mu: &[u32], nu: &[u32]) -> Result<S> {
        let (m, n) = (mu.len(), nu.len());
        let b = branch(g, m, n);
        if mu.iter().sum::<u32>() != nu.iter().sum::<u32>() || b <= 0 {
            return Ok(S::zero());
        }
        if g == 0 && n == 1 {
            return Ok(S::zero());
        }
        if g == 0 && n == 2 {
            return self.base_two(mu, nu);
        }
        let mut total = S::zero();
        let half = S::ratio(1, 2);
        let full = (1u32 << m) - 1;
        let pick = |mask: u32, v: &[u32]| -> Vec<u32> {
            (0..v.len()).filter(|&k| mask >> k & 1 == 1).map(|k| v[k]).collect()
        };

        // Cut steps: ν_i and ν_j come from one strand of weight α.
        for i in 0..n {
            for j in i + 1..n {
                for keep in 1..=full {
                    let coloured = pick(full & !keep, mu);
                    let alpha = nu[i] as i64 + nu[j] as i64 - coloured.iter().sum::<u32>() as i64;
                    if alpha < 1 {
                        continue;
                    }
                    let mut rest: Vec<u32> = (0..n).filter(|&k| k != i && k != j).map(|k| nu[k]).collect();
                    rest.push(alpha as u32);
                    let core = self.ph(g, &pick(keep, mu), &rest)?;
                    if core.is_zero() {
                        continue;
                    }
                    let coef = self.cut_coeff(alpha as u32, &coloured, nu[i], nu[j]);
                    total = total + falling::<S>(b, coloured.len()) * coef * core;
                }
            }
        }

        // Connected joins: ν_i comes from two strands of one component.
        if g >= 1 {
            for i in 0..n {
                for keep in 1..=full {
                    let coloured = pick(full & !keep, mu);
                    let s = nu[i] as i64 - coloured.iter().sum::<u32>() as i64;
                    for a in 1..s {
                        let bb = s - a;
                        let mut rest: Vec<u32> = (0..n).filter(|&k| k != i).map(|k| nu[k]).collect();
                        rest.push(a as u32);
                        rest.push(bb as u32);
                        let core = self.ph(g - 1, &pick(keep, mu), &rest)?;
                        if core.is_zero() {
                            continue;
                        }
                        let coef: S = join_coefficient(a as u32, bb as u32, &coloured);
                        total = total + half.clone() * falling::<S>(b, coloured.len()) * coef * core;
                    }
                }
            }
        }

        // Disconnected joins: ν_i comes from strands of two components.
        let pow3 = 3usize.pow(m as u32);
        for i in 0..n {
            let others: Vec<usize> = (0..n).filter(|&k| k != i).collect();
            for g1 in 0..=g {
                let g2 = g - g1;
                for jmask in 0..(1u32 << others.len()) {
                    let j1: Vec<u32> = (0..others.len()).filter(|&t| jmask >> t & 1 == 1).map(|t| nu[others[t]]).collect();
                    let j2: Vec<u32> = (0..others.len()).filter(|&t| jmask >> t & 1 == 0).map(|t| nu[others[t]]).collect();
                    for code in 0..pow3 {
                        let (mut i1, mut i2, mut coloured) = (Vec::new(), Vec::new(), Vec::new());
                        let mut c = code;
                        for &part in mu {
                            match c % 3 {
                                0 => coloured.push(part),
                                1 => i1.push(part),
                                _ => i2.push(part),
                            }
                            c /= 3;
                        }
                        if i1.is_empty() || i2.is_empty() {
                            continue;
                        }
                        let s = nu[i] as i64 - coloured.iter().sum::<u32>() as i64;
                        let a = i1.iter().sum::<u32>() as i64 - j1.iter().sum::<u32>() as i64;
                        let bb = s - a;
                        if a < 1 || bb < 1 {
                            continue;
                        }
                        let b1 = branch(g1, i1.len(), j1.len() + 1);
                        let b2 = branch(g2, i2.len(), j2.len() + 1);
                        let mut nu1 = j1.clone();
                        nu1.push(a as u32);
                        let v1 = self.ph(g1, &i1, &nu1)?;
                        if v1.is_zero() {
                            continue;
                        }
                        let mut nu2 = j2.clone();
                        nu2.push(bb as u32);
                        let v2 = self.ph(g2, &i2, &nu2)?;
                        if v2.is_zero() {
                            continue;
                        }
                        let interleave = factorial::<S>((b - 1) as u64)
                            / (factorial::<S>(b1 as u64) * factorial::<S>(b2 as u64));
                        let coef: S = join_coefficient(a as u32, bb as u32, &coloured);
                        total = total + half.clone() * interleave * coef * v1 * v2;
                    }
                }
            }
        }
        Ok(total)
    }
}

/// `PH_g(μ, ν)` by recursion with a fresh memo.
pub fn pruned_recursion<S: Scalar>(t: &HurwitzType) -> Result<S> {
    PrunedRecursion::<S>::new().value(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::Rational;

    #[test]
    fn reference_values() {
        assert_eq!(pruned_recursion::<Rational>(&HurwitzType::of(2, &[1, 1, 1], &[3])).unwrap(), rat(450));
        assert_eq!(pruned_recursion::<Rational>(&HurwitzType::of(0, &[7], &[3, 4])).unwrap(), rat(1));
        assert_eq!(pruned_recursion::<Rational>(&HurwitzType::of(0, &[3, 2], &[4, 1])).unwrap(), rat(2));
    }

    #[test]
    fn single_coloured_cycle_matches_simulation() {
        for alpha in 1..4u32 {
            for m in 1..4u32 {
                let len = alpha + m;
                for ni in 1..len {
                    let nj = len - ni;
                    let closed: Rational = cut_coefficient(alpha, &[m], ni, nj);
                    let sim = Rational::from_integer(local_cut_count(alpha, &[m], ni).into()) / rat(m as i64);
                    assert_eq!(closed, sim, "alpha={alpha} m={m} ni={ni}");
                }
            }
        }
    }

    #[test]
    fn generic_pieces_give_factorial_form() {
        // When α and both pieces are large the coefficient is (k+1)!·α·∏μ;
        // small pieces lose some of the arrangements.
        let c: Rational = cut_coefficient(10, &[1, 1], 6, 6);
        assert_eq!(c, rat(6 * 10));
        let c: Rational = cut_coefficient(2, &[1, 1], 3, 3);
        assert_eq!(c, rat(10));
    }

    #[test]
    fn right_side_pruning_swaps() {
        let t = HurwitzType::of(0, &[3, 4], &[7]).pruned(PrunedSide::Right);
        assert_eq!(pruned_recursion::<Rational>(&t).unwrap(), rat(1));
    }
}
