//! Classical monodromy graphs and tropical double Hurwitz numbers.
//!
//! A monodromy graph of type `(g, μ, ν)` starts with ℓ(μ) strands over 0
//! weighted by μ. At each integer position `1..=b` exactly one 3-valent
//! vertex either joins two strands or cuts one strand. The strands over
//! `b+1` carry the weights of ν and the final graph is connected. Its
//! tropical multiplicity is `|Aut μ| |Aut ν| / |Aut Γ| · ∏ w(e)` over the
//! inner edges, where every pair of parallel edges (a balanced fork or a
//! wiener) contributes a factor 2 to `|Aut Γ|`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::budget::Budget;
use crate::error::{HurwitzError, Result};
use crate::graph::canonical_hash;
use crate::partition::HurwitzType;
use crate::perm::UnionFind;
use crate::scalar::Scalar;

/// The two vertex shapes of a classical monodromy graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexKind {
    /// One strand in, two out.
    Cut,
    /// Two strands in, one out.
    Join,
}

/// An edge between positions. Source 0 marks a left end over 0 and
/// destination `b+1` marks a right end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub weight: u32,
}

/// One isomorphism class of classical monodromy graphs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonodromyGraph {
    /// Number of vertices; they sit at positions `1..=b`.
    pub b: usize,
    /// Vertex kind by position (index `p-1`).
    pub kinds: Vec<VertexKind>,
    /// All edges including ends, sorted. The sorted list is the canonical
    /// form: positions are fixed, so parallel edges are the only freedom.
    pub edges: Vec<Edge>,
}

impl MonodromyGraph {
    /// Canonical text serialization.
    pub fn canonical_form(&self) -> String {
        let es: Vec<String> = self.edges.iter().map(|e| format!("{}>{}:{}", e.src, e.dst, e.weight)).collect();
        format!("b={};{}", self.b, es.join(","))
    }

    /// Short stable hash of [`Self::canonical_form`].
    pub fn canonical_hash(&self) -> String {
        canonical_hash(&self.canonical_form())
    }

    /// Edges between two vertices.
    pub fn inner_edges(&self) -> impl Iterator<Item = &Edge> {
        let b = self.b;
        self.edges.iter().filter(move |e| e.src >= 1 && e.dst <= b)
    }

    /// Weights of the left ends, sorted descending.
    pub fn left_weights(&self) -> Vec<u32> {
        let mut w: Vec<u32> = self.edges.iter().filter(|e| e.src == 0).map(|e| e.weight).collect();
        w.sort_unstable_by(|a, b| b.cmp(a));
        w
    }

    /// Weights of the right ends, sorted descending.
    pub fn right_weights(&self) -> Vec<u32> {
        let mut w: Vec<u32> = self.edges.iter().filter(|e| e.dst == self.b + 1).map(|e| e.weight).collect();
        w.sort_unstable_by(|a, b| b.cmp(a));
        w
    }

    /// Number of balanced forks and wieners, i.e. pairs of parallel edges.
    pub fn parallel_pairs(&self) -> usize {
        self.edges.windows(2).filter(|w| w[0] == w[1]).count()
    }

    /// `1 / |Aut Γ|`.
    pub fn automorphism_factor<S: Scalar>(&self) -> S {
        S::one() / S::uint(1u64 << self.parallel_pairs())
    }

    /// Product of inner edge weights.
    pub fn inner_weight_product<S: Scalar>(&self) -> S {
        self.inner_edges().fold(S::one(), |acc, e| acc * S::uint(e.weight as u64))
    }

    /// Checks that every vertex is balanced and 3-valent of its kind.
    pub fn is_balanced(&self) -> bool {
        (1..=self.b).all(|p| {
            let ins: Vec<u32> = self.edges.iter().filter(|e| e.dst == p).map(|e| e.weight).collect();
            let outs: Vec<u32> = self.edges.iter().filter(|e| e.src == p).map(|e| e.weight).collect();
            let shape_ok = match self.kinds[p - 1] {
                VertexKind::Cut => ins.len() == 1 && outs.len() == 2,
                VertexKind::Join => ins.len() == 2 && outs.len() == 1,
            };
            shape_ok && ins.iter().sum::<u32>() == outs.iter().sum::<u32>()
        })
    }

    /// First Betti number, counting each end as its own leaf node.
    pub fn betti_number(&self) -> i64 {
        let ends = self.edges.iter().filter(|e| e.src == 0 || e.dst == self.b + 1).count();
        let nodes = self.b + ends;
        let mut uf = UnionFind::new(nodes);
        let mut next_end = self.b;
        for e in &self.edges {
            let a = if e.src == 0 {
                next_end += 1;
                next_end - 1
            } else {
                e.src - 1
            };
            let c = if e.dst == self.b + 1 {
                next_end += 1;
                next_end - 1
            } else {
                e.dst - 1
            };
            uf.union(a, c);
        }
        let components = uf.count() as i64;
        self.edges.len() as i64 - nodes as i64 + components
    }

    /// Tropical multiplicity of this graph for a type with the given
    /// automorphism orders of μ and ν.
    pub fn multiplicity<S: Scalar>(&self, aut_mu: u64, aut_nu: u64) -> S {
        S::uint(aut_mu) * S::uint(aut_nu) * self.automorphism_factor::<S>() * self.inner_weight_product::<S>()
    }

    /// Graphviz rendering as a left-to-right layered digraph.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"{name}\" {{");
        let _ = writeln!(s, "  rankdir=LR;");
        for p in 1..=self.b {
            let kind = match self.kinds[p - 1] {
                VertexKind::Cut => "cut",
                VertexKind::Join => "join",
            };
            let _ = writeln!(s, "  v{p} [label=\"{p}: {kind}\"];");
        }
        for (i, e) in self.edges.iter().enumerate() {
            let from = if e.src == 0 {
                let _ = writeln!(s, "  l{i} [shape=point];");
                format!("l{i}")
            } else {
                format!("v{}", e.src)
            };
            let to = if e.dst == self.b + 1 {
                let _ = writeln!(s, "  r{i} [shape=point];");
                format!("r{i}")
            } else {
                format!("v{}", e.dst)
            };
            let _ = writeln!(s, "  {from} -> {to} [label=\"w={}\"];", e.weight);
        }
        s.push_str("}\n");
        s
    }
}

/// Cap on partial states explored by one enumeration.
pub const DEFAULT_STATE_CAP: u64 = 10_000_000;

#[derive(Clone, Copy)]
struct Strand {
    src: usize,
    weight: u32,
    node: usize,
}

struct Enumerator {
    b: usize,
    m: usize,
    target: Vec<u32>,
    found: BTreeMap<Vec<Edge>, MonodromyGraph>,
    budget: Budget,
}

impl Enumerator {
    fn step(&mut self, p: usize, live: &[Strand], edges: &mut Vec<Edge>, kinds: &mut Vec<VertexKind>, uf: &UnionFind) -> Result<()> {
        self.budget.spend(1)?;
        let remaining = self.b + 1 - p;
        if live.len().abs_diff(self.target.len()) > remaining {
            return Ok(());
        }
        if p > self.b {
            return self.finish(live, edges, kinds, uf);
        }
        let node = self.m + p - 1;
        // Distinct strand classes by (source, weight); identical strands are
        // interchangeable so one representative per class suffices.
        let mut classes: Vec<(usize, u32, usize)> = Vec::new();
        for (i, s) in live.iter().enumerate() {
            if !classes.iter().any(|&(src, w, _)| src == s.src && w == s.weight) {
                classes.push((s.src, s.weight, i));
            }
        }
        for &(src, w, i) in &classes {
            for w1 in 1..=w / 2 {
                let mut next: Vec<Strand> = live.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, s)| *s).collect();
                next.push(Strand { src: p, weight: w1, node });
                next.push(Strand { src: p, weight: w - w1, node });
                let mut uf2 = uf.clone();
                uf2.union(live[i].node, node);
                edges.push(Edge { src, dst: p, weight: w });
                kinds.push(VertexKind::Cut);
                self.step(p + 1, &next, edges, kinds, &uf2)?;
                kinds.pop();
                edges.pop();
            }
        }
        for (ci, &(s1, w1, i)) in classes.iter().enumerate() {
            for &(s2, w2, j0) in &classes[ci..] {
                let j = if s1 == s2 && w1 == w2 {
                    match live.iter().enumerate().position(|(k, s)| k != i && s.src == s1 && s.weight == w1) {
                        Some(j) => j,
                        None => continue,
                    }
                } else {
                    j0
                };
                let mut next: Vec<Strand> =
                    live.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, s)| *s).collect();
                next.push(Strand { src: p, weight: w1 + w2, node });
                let mut uf2 = uf.clone();
                uf2.union(live[i].node, node);
                uf2.union(live[j].node, node);
                edges.push(Edge { src: s1, dst: p, weight: w1 });
                edges.push(Edge { src: s2, dst: p, weight: w2 });
                kinds.push(VertexKind::Join);
                self.step(p + 1, &next, edges, kinds, &uf2)?;
                kinds.pop();
                edges.pop();
                edges.pop();
            }
        }
        Ok(())
    }

    fn finish(&mut self, live: &[Strand], edges: &[Edge], kinds: &[VertexKind], uf: &UnionFind) -> Result<()> {
        let mut weights: Vec<u32> = live.iter().map(|s| s.weight).collect();
        weights.sort_unstable_by(|a, b| b.cmp(a));
        if weights != self.target {
            return Ok(());
        }
        let mut uf = uf.clone();
        if uf.count() != 1 {
            return Ok(());
        }
        let mut all = edges.to_vec();
        all.extend(live.iter().map(|s| Edge { src: s.src, dst: self.b + 1, weight: s.weight }));
        all.sort_unstable();
        self.found
            .entry(all.clone())
            .or_insert_with(|| MonodromyGraph { b: self.b, kinds: kinds.to_vec(), edges: all });
        Ok(())
    }
}

/// All classical monodromy graphs of type `t`, one per isomorphism class,
/// sorted by canonical form.
pub fn enumerate_monodromy_graphs(t: &HurwitzType) -> Result<Vec<MonodromyGraph>> {
    enumerate_monodromy_graphs_with(t, DEFAULT_STATE_CAP)
}

/// [`enumerate_monodromy_graphs`] with an explicit state cap.
pub fn enumerate_monodromy_graphs_with(t: &HurwitzType, cap: u64) -> Result<Vec<MonodromyGraph>> {
    let b = t.branch_count();
    if b <= 0 {
        return Err(HurwitzError::Inapplicable(format!("tropical count needs b > 0, type {} has b = {b}", t.key())));
    }
    let m = t.mu.len();
    let b = b as usize;
    // Nodes: one per left end, then one per vertex.
    let uf = UnionFind::new(m + b);
    let live: Vec<Strand> =
        t.mu.parts().iter().enumerate().map(|(i, &w)| Strand { src: 0, weight: w, node: i }).collect();
    let mut en = Enumerator {
        b,
        m,
        target: t.nu.sorted_desc(),
        found: BTreeMap::new(),
        budget: Budget::new("trop_classical", cap),
    };
    en.step(1, &live, &mut Vec::new(), &mut Vec::new(), &uf)?;
    Ok(en.found.into_values().collect())
}

/// The tropical double Hurwitz number, the weighted count of monodromy
/// graphs. Equal to the factorization count by the correspondence theorem.
pub fn tropical_double_hurwitz<S: Scalar>(t: &HurwitzType) -> Result<S> {
    let graphs = enumerate_monodromy_graphs(t)?;
    let (am, an) = (t.mu.automorphisms(), t.nu.automorphisms());
    Ok(graphs.iter().fold(S::zero(), |acc, g| acc + g.multiplicity::<S>(am, an)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::Rational;

    #[test]
    fn single_cut_and_single_join() {
        let g = enumerate_monodromy_graphs(&HurwitzType::of(0, &[2], &[1, 1])).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].kinds, vec![VertexKind::Cut]);
        let g = enumerate_monodromy_graphs(&HurwitzType::of(0, &[1, 1], &[2])).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].kinds, vec![VertexKind::Join]);
        // The two weight-1 ends form a balanced left fork.
        assert_eq!(g[0].automorphism_factor::<Rational>(), crate::scalar::rat2(1, 2));
    }

    #[test]
    fn genus_one_family() {
        let t = HurwitzType::of(1, &[5], &[4, 1]);
        let graphs = enumerate_monodromy_graphs(&t).unwrap();
        assert_eq!(graphs.len(), 7);
        let mut totals: Vec<Rational> = graphs.iter().map(|g| g.multiplicity(1, 1)).collect();
        totals.sort();
        let mut expected: Vec<Rational> = [20, 8, 12, 12, 30, 12, 6].iter().map(|&x| rat(x)).collect();
        expected.sort();
        assert_eq!(totals, expected);
        assert_eq!(tropical_double_hurwitz::<Rational>(&t).unwrap(), rat(100));
        for g in &graphs {
            assert!(g.is_balanced());
            assert_eq!(g.betti_number(), 1);
        }
    }

    #[test]
    fn rejects_degenerate_types() {
        assert!(matches!(
            enumerate_monodromy_graphs(&HurwitzType::of(0, &[2], &[2])),
            Err(HurwitzError::Inapplicable(_))
        ));
    }
}
