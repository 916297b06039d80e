//! Permutations of `{0, …, d-1}` with cycle bookkeeping.

use std::fmt;

/// A bijection of `{0, …, d-1}`, stored as its image table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// The identity of degree `d`.
    pub fn identity(d: usize) -> Self {
        Permutation { images: (0..d).collect() }
    }

    /// Builds a permutation from its image table, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || seen[x] {
                return None;
            }
            seen[x] = true;
        }
        Some(Permutation { images })
    }

    /// The transposition exchanging `a` and `b`.
    pub fn transposition(d: usize, a: usize, b: usize) -> Self {
        let mut p = Permutation::identity(d);
        p.images.swap(a, b);
        p
    }

    /// The standard representative of cycle type `parts`: consecutive
    /// blocks, each cycled forward.
    pub fn standard(parts: &[u32]) -> Self {
        let d: usize = parts.iter().map(|&p| p as usize).sum();
        let mut images = vec![0; d];
        let mut start = 0;
        for &m in parts {
            let m = m as usize;
            for k in 0..m {
                images[start + k] = start + (k + 1) % m;
            }
            start += m;
        }
        Permutation { images }
    }

    /// Degree `d`.
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of `x`.
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    /// The image table.
    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// The product "first `self`, then `other`", i.e. `x ↦ other(self(x))`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation { images: self.images.iter().map(|&x| other.images[x]).collect() }
    }

    /// Composes with the transposition `(a b)` on the right, in place.
    pub fn then_swap(&mut self, a: usize, b: usize) {
        for x in self.images.iter_mut() {
            if *x == a {
                *x = b;
            } else if *x == b {
                *x = a;
            }
        }
    }

    /// The inverse permutation.
    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y] = x;
        }
        Permutation { images: inv }
    }

    /// The cycles, each listed from its smallest element in orbit order.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let d = self.images.len();
        let mut seen = vec![false; d];
        let mut out = Vec::new();
        for start in 0..d {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }

    /// The cycle type as a descending sequence.
    pub fn cycle_type(&self) -> Vec<u32> {
        let mut t: Vec<u32> = self.cycles().iter().map(|c| c.len() as u32).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    /// The support, i.e. the points that are moved.
    pub fn support(&self) -> Vec<usize> {
        (0..self.images.len()).filter(|&x| self.images[x] != x).collect()
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation with 1-based points, omitting fixed points.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let s: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", s.join(" "))?;
        }
        Ok(())
    }
}

/// A minimal union-find over `0..n`.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    /// `n` singleton classes.
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    /// Representative of the class of `x`.
    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes of `a` and `b`; returns false if already merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }

    /// Number of classes.
    pub fn count(&mut self) -> usize {
        (0..self.parent.len()).filter(|&x| self.find(x) == x).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_representative_has_requested_type() {
        let p = Permutation::standard(&[3, 2, 2]);
        assert_eq!(p.cycle_type(), vec![3, 2, 2]);
        assert_eq!(p.to_string(), "(1 2 3)(4 5)(6 7)");
    }

    #[test]
    fn swap_matches_composition() {
        let p = Permutation::standard(&[4]);
        let mut q = p.clone();
        q.then_swap(0, 2);
        assert_eq!(q, p.then(&Permutation::transposition(4, 0, 2)));
        assert_eq!(q.then(&q.inverse()), Permutation::identity(4));
    }

    #[test]
    fn union_find_counts_classes() {
        let mut uf = UnionFind::new(5);
        uf.union(0, 1);
        uf.union(3, 4);
        assert_eq!(uf.count(), 3);
        assert!(!uf.union(1, 0));
    }
}
