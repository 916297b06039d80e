//! Single Hurwitz Dyck paths in genus zero.
//!
//! For `μ ⊢ d` with `ℓ(μ) = m` put `b = m + d - 2`. A Hurwitz Dyck path is
//! a primitive `b`-Dyck path of length `2bd` (every maximal up-run has a
//! length divisible by `b`) together with `m` labelled marked pairs of
//! vertices, one of which is the outer pair `(0, 2bd)`. Its distinguished
//! vertices are the starts of the blocks of `b` consecutive up-steps.

use std::collections::BTreeSet;
use std::fmt;

use crate::budget::Budget;
use crate::error::{HurwitzError, Result};
use crate::partition::Partition;

/// Limits for path enumeration.
#[derive(Debug, Clone, Copy)]
pub struct DyckConfig {
    /// Largest degree enumerated.
    pub max_degree: u32,
    /// Step budget for the search.
    pub max_steps: u64,
}

impl Default for DyckConfig {
    fn default() -> Self {
        DyckConfig { max_degree: 4, max_steps: 200_000_000 }
    }
}

/// A Hurwitz Dyck path. Vertices are indexed by their x-coordinate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HurwitzDyckPath {
    /// The parameter `b`; up-runs have lengths divisible by it.
    pub b: usize,
    /// `true` for an up-step.
    pub steps: Vec<bool>,
    /// `marked_pairs[i]` is the pair labelled `i`, of degree `μ_i`.
    pub marked_pairs: Vec<(usize, usize)>,
    /// Distinguished vertices in left-to-right order (their labels).
    pub distinguished: Vec<usize>,
}

impl HurwitzDyckPath {
    /// Number of steps `2bd`.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    /// Whether the path has no steps (never true for a valid path).
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Heights of all vertices `0..=len`.
    pub fn heights(&self) -> Vec<i64> {
        heights(&self.steps)
    }

    /// Degree of each marked pair: up-steps inside its essential interval,
    /// that is inside the pair but outside every pair nested in it,
    /// divided by `b`.
    pub fn degrees(&self) -> Vec<u32> {
        degrees(&self.steps, &self.marked_pairs, self.b).expect("valid path has integral degrees")
    }

    /// The string form: steps over `{U, D}`, then the marked pairs by
    /// label, then the distinguished vertices.
    pub fn serialize(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for HurwitzDyckPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.steps.iter().map(|&u| if u { 'U' } else { 'D' }).collect();
        let pairs: Vec<String> = self.marked_pairs.iter().enumerate().map(|(i, (v, w))| format!("{}:({v},{w})", i + 1)).collect();
        let dist: Vec<String> = self.distinguished.iter().map(|v| v.to_string()).collect();
        write!(f, "{s} [{}] <{}>", pairs.join(" "), dist.join(","))
    }
}

fn heights(steps: &[bool]) -> Vec<i64> {
    let mut h = vec![0i64; steps.len() + 1];
    for (i, &u) in steps.iter().enumerate() {
        h[i + 1] = h[i] + if u { 1 } else { -1 };
    }
    h
}

fn degrees(steps: &[bool], pairs: &[(usize, usize)], b: usize) -> Option<Vec<u32>> {
    pairs
        .iter()
        .map(|&(v, w)| {
            let inner: Vec<(usize, usize)> =
                pairs.iter().copied().filter(|&(v2, w2)| (v2, w2) != (v, w) && v <= v2 && w2 <= w).collect();
            let ups = (v..w).filter(|&t| steps[t] && !inner.iter().any(|&(v2, w2)| v2 <= t && t < w2)).count();
            (ups % b == 0).then_some((ups / b) as u32)
        })
        .collect()
}

/// All primitive `b`-Dyck paths of semilength `bd` whose up-runs have
/// lengths divisible by `b`, in lexicographic order (up before down).
pub fn b_dyck_paths(b: usize, d: usize, budget: &mut Budget) -> Result<Vec<Vec<bool>>> {
    let n = b * d;
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(2 * n);
    fn rec(
        cur: &mut Vec<bool>,
        h: usize,
        ups: usize,
        downs: usize,
        b: usize,
        n: usize,
        out: &mut Vec<Vec<bool>>,
        budget: &mut Budget,
    ) -> Result<()> {
        budget.spend(1)?;
        if ups == n && downs == n {
            out.push(cur.clone());
            return Ok(());
        }
        if cur.last() != Some(&true) {
            for k in 1..=(n - ups) / b {
                cur.extend(std::iter::repeat_n(true, k * b));
                rec(cur, h + k * b, ups + k * b, downs, b, n, out, budget)?;
                cur.truncate(cur.len() - k * b);
            }
        }
        // Primitive: the path may only return to the axis at the very end.
        if downs < n && h > 0 && (h > 1 || downs + 1 == n) {
            cur.push(false);
            rec(cur, h - 1, ups, downs + 1, b, n, out, budget)?;
            cur.pop();
        }
        Ok(())
    }
    rec(&mut cur, 0, 0, 0, b, n, &mut out, budget)?;
    Ok(out)
}

/// Enumerates `D(μ)` with default limits.
pub fn enumerate_hurwitz_dyck_paths(mu: &Partition) -> Result<Vec<HurwitzDyckPath>> {
    enumerate_hurwitz_dyck_paths_with(mu, &DyckConfig::default())
}

/// Enumerates `D(μ)`: every path with every admissible labelled marking.
/// Output is sorted.
pub fn enumerate_hurwitz_dyck_paths_with(mu: &Partition, config: &DyckConfig) -> Result<Vec<HurwitzDyckPath>> {
    let d = mu.degree() as usize;
    let m = mu.len();
    if mu.degree() > config.max_degree {
        return Err(HurwitzError::BudgetExceeded {
            module: "dyck",
            detail: format!("degree {d} exceeds the configured maximum {}", config.max_degree),
        });
    }
    if m + d < 3 {
        return Err(HurwitzError::Inapplicable(format!("b = {} is not positive for mu = {mu}", m + d - 2)));
    }
    let b = m + d - 2;
    let mut budget = Budget::new("dyck", config.max_steps);
    let mut out = Vec::new();
    for steps in b_dyck_paths(b, d, &mut budget)? {
        let len = steps.len();
        let h = heights(&steps);
        let mut ups_before = 0usize;
        let mut distinguished = Vec::new();
        for (i, &u) in steps.iter().enumerate() {
            if u && ups_before.is_multiple_of(b) {
                distinguished.push(i);
            }
            ups_before += u as usize;
        }
        let residue = |i: usize| (h[i] as usize) % (b + 1);
        let dist_res: BTreeSet<usize> = distinguished.iter().map(|&i| residue(i)).collect();
        if dist_res.len() != d {
            continue;
        }
        // Marked vertices are followed by a down-step; inner pairs sit on a
        // common nonzero residue not used by a distinguished vertex.
        let cand: Vec<usize> = (1..len).filter(|&i| !steps[i]).collect();
        let mut pairs = Vec::new();
        for (x, &i) in cand.iter().enumerate() {
            for &j in &cand[x + 1..] {
                let r = residue(i);
                if h[i] == h[j] && r != 0 && !dist_res.contains(&r) {
                    pairs.push((i, j));
                }
            }
        }
        let mut chosen = Vec::new();
        let mut sets = Vec::new();
        choose_pairs(&pairs, 0, m - 1, &mut chosen, &mut BTreeSet::new(), &h, b, &mut sets, &mut budget)?;
        for set in sets {
            let mut all = vec![(0, len)];
            all.extend(set);
            let Some(degs) = degrees(&steps, &all, b) else { continue };
            for labelling in labellings(&degs, mu.parts()) {
                let mut marked = vec![(0, 0); m];
                for (k, &lab) in labelling.iter().enumerate() {
                    marked[lab] = all[k];
                }
                out.push(HurwitzDyckPath { b, steps: steps.clone(), marked_pairs: marked, distinguished: distinguished.clone() });
            }
        }
    }
    out.sort();
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn choose_pairs(
    pairs: &[(usize, usize)],
    start: usize,
    need: usize,
    chosen: &mut Vec<(usize, usize)>,
    used: &mut BTreeSet<usize>,
    h: &[i64],
    b: usize,
    out: &mut Vec<Vec<(usize, usize)>>,
    budget: &mut Budget,
) -> Result<()> {
    budget.spend(1)?;
    if chosen.len() == need {
        out.push(chosen.clone());
        return Ok(());
    }
    for k in start..pairs.len() {
        let (a, c) = pairs[k];
        let r = (h[a] as usize) % (b + 1);
        if used.contains(&r) {
            continue;
        }
        let crosses = chosen.iter().any(|&(x, y)| (a < x && x < c && c < y) || (x < a && a < y && y < c));
        if crosses {
            continue;
        }
        chosen.push((a, c));
        used.insert(r);
        choose_pairs(pairs, k + 1, need, chosen, used, h, b, out, budget)?;
        used.remove(&r);
        chosen.pop();
    }
    Ok(())
}

/// All assignments of distinct labels to pairs with matching degrees.
fn labellings(degs: &[u32], mu: &[u32]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    let mut used = vec![false; mu.len()];
    fn rec(k: usize, degs: &[u32], mu: &[u32], cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if k == degs.len() {
            out.push(cur.clone());
            return;
        }
        for l in 0..mu.len() {
            if !used[l] && mu[l] == degs[k] {
                used[l] = true;
                cur.push(l);
                rec(k + 1, degs, mu, cur, used, out);
                cur.pop();
                used[l] = false;
            }
        }
    }
    rec(0, degs, mu, &mut cur, &mut used, &mut out);
    out
}

/// Whether the path is pruned.
///
/// Descent condition: every run of `b` down-steps starting at a peak
/// contains a marked vertex (its endpoints included). Lowest distinguished
/// vertex condition: if the lowest distinguished vertex of positive height
/// (leftmost on ties) is the second distinguished vertex, some marked
/// vertex lies strictly between the start and it.
pub fn is_pruned_dyck(p: &HurwitzDyckPath) -> bool {
    let (s, b, len) = (&p.steps, p.b, p.len());
    let marked: BTreeSet<usize> = p.marked_pairs.iter().flat_map(|&(v, w)| [v, w]).collect();
    for i in 1..len {
        if s[i - 1] && !s[i] && i + b <= len && s[i..i + b].iter().all(|&u| !u) && !(i..=i + b).any(|t| marked.contains(&t)) {
            return false;
        }
    }
    let h = p.heights();
    let lowest = p.distinguished.iter().copied().filter(|&i| h[i] > 0).min_by_key(|&i| (h[i], i));
    if let Some(low) = lowest {
        if p.distinguished.len() > 1 && low == p.distinguished[1] && !(1..low).any(|t| marked.contains(&t)) {
            return false;
        }
    }
    true
}

/// Vertex identification classes along gluing lines.
///
/// At each height, vertices joined by a horizontal segment lying under the
/// path (the path stays at or above that height in between) form one
/// class; the interior vertices of such a segment are exactly valleys.
/// Every vertex belongs to exactly one class. Classes are sorted.
pub fn gluing_lines(p: &HurwitzDyckPath) -> Vec<Vec<usize>> {
    let h = p.heights();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let max = *h.iter().max().unwrap_or(&0);
    for level in 0..=max {
        let mut current: Vec<usize> = Vec::new();
        for (i, &y) in h.iter().enumerate() {
            if y < level {
                if !current.is_empty() {
                    classes.push(std::mem::take(&mut current));
                }
            } else if y == level {
                current.push(i);
            }
        }
        if !current.is_empty() {
            classes.push(current);
        }
    }
    classes.sort();
    classes
}

/// Whether a vertex is a valley (a down-step followed by an up-step).
pub fn is_valley(p: &HurwitzDyckPath, i: usize) -> bool {
    i > 0 && i < p.len() && !p.steps[i - 1] && p.steps[i]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(mu: &[u32]) -> (usize, usize) {
        let paths = enumerate_hurwitz_dyck_paths(&Partition::of(mu)).unwrap();
        let pruned = paths.iter().filter(|p| is_pruned_dyck(p)).count();
        (paths.len(), pruned)
    }

    #[test]
    fn small_counts() {
        assert_eq!(count(&[2]), (1, 0));
        assert_eq!(count(&[1, 1]), (2, 2));
        assert_eq!(count(&[2, 1]), (12, 3));
        assert_eq!(count(&[3]), (3, 0));
    }

    #[test]
    fn invariants_hold() {
        for mu in [vec![2, 1], vec![1, 1, 1], vec![3]] {
            let mu = Partition::of(&mu);
            for p in enumerate_hurwitz_dyck_paths(&mu).unwrap() {
                assert_eq!(p.degrees(), mu.parts());
                assert_eq!(p.distinguished.len(), mu.degree() as usize);
                let h = p.heights();
                assert!(h.iter().all(|&y| y >= 0));
                assert!(h[1..p.len()].iter().all(|&y| y > 0));
                for class in gluing_lines(&p) {
                    assert!(class.iter().all(|&v| h[v] == h[class[0]]));
                    for &v in class.iter().skip(1).take(class.len().saturating_sub(2)) {
                        assert!(is_valley(&p, v));
                    }
                }
            }
        }
    }

    #[test]
    fn unique_degree_two_path() {
        let paths = enumerate_hurwitz_dyck_paths(&Partition::of(&[2])).unwrap();
        assert_eq!(paths[0].to_string(), "UUDD [1:(0,4)] <0,1>");
        let lines = gluing_lines(&paths[0]);
        assert_eq!(lines, vec![vec![0, 4], vec![1, 3], vec![2]]);
    }
}
