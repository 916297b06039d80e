//! Pruned monodromy graphs and tropical pruned double Hurwitz numbers.
//!
//! A pruned monodromy graph starts with initial vertices, each absorbing
//! at least one regular left end and emitting two strands, followed by
//! `b - ℓ(μ)` secondary vertices (cuts, connected joins and disconnected
//! joins), each of which may absorb coloured left ends.
//!
//! Graphs are produced by unfolding the pruned recursion step by step. A
//! fully unfolded recursion path is a history; every history determines a
//! graph, and histories of quasi-isomorphic graphs are collected together.
//! The weight of a graph is the sum of its histories' contributions. The
//! closed product formula `|Aut μ||Aut ν|/|Aut Γ| · ∏ w · ∏ m(v)` is
//! evaluated alongside, so the two can be compared.

use std::cell::Cell;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::rc::Rc;

use crate::error::{HurwitzError, Result};
use crate::graph::canonical_hash;
use crate::partition::{HurwitzType, PrunedSide};
use crate::perm::UnionFind;
use crate::recursion::{branch, join_coefficient, PrunedRecursion};
use crate::scalar::{factorial, falling, Scalar};

/// Vertex kinds of a pruned monodromy graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrunedVertexKind {
    /// Absorbs regular left ends and emits two strands.
    Initial,
    /// One strand in, two out.
    Cut,
    /// Two strands of one component in, one out.
    ConnectedJoin,
    /// Two strands of different components in, one out.
    DisconnectedJoin,
}

/// What an edge of a pruned graph connects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeRole {
    /// A left end attached to an initial vertex.
    RegularEnd,
    /// A left end attached to a secondary vertex.
    ColouredEnd,
    /// An edge between two vertices.
    Inner,
    /// A right end.
    RightEnd,
}

/// An edge. Source 0 marks a left end and destination `b̃+1` a right end.
/// Labels identify ends by their index in μ (left) or ν (right) and are
/// only kept when labelled enumeration was requested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrunedEdge {
    pub src: usize,
    pub dst: usize,
    pub weight: u32,
    pub role: EdgeRole,
    pub label: Option<usize>,
}

/// A vertex record. Weights of in/out strands and of the attached ends.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrunedVertex {
    pub kind: PrunedVertexKind,
    /// Regular ends for initial vertices, coloured ends otherwise.
    pub ends: Vec<u32>,
    pub ins: Vec<u32>,
    pub outs: Vec<u32>,
}

/// One quasi-isomorphism class of pruned monodromy graphs with its weight.
#[derive(Debug, Clone)]
pub struct PrunedMonodromyGraph<S: Scalar> {
    /// Vertices in position order `1..=b̃`; initial vertices come first.
    pub vertices: Vec<PrunedVertex>,
    /// All edges, sorted.
    pub edges: Vec<PrunedEdge>,
    /// Sum of the contributions of all histories giving this graph.
    pub weight: S,
    /// The product formula evaluated on this graph.
    pub formula_weight: S,
    /// Vertex multiplicities `m(v)` in position order.
    pub multiplicities: Vec<S>,
    /// Automorphism factor `|Aut μ||Aut ν| / |Aut Γ|`.
    pub automorphism_factor: S,
}

impl<S: Scalar> PrunedMonodromyGraph<S> {
    /// Number of vertex positions `b̃`.
    pub fn positions(&self) -> usize {
        self.vertices.len()
    }

    /// Number of initial vertices.
    pub fn initial_count(&self) -> usize {
        self.vertices.iter().filter(|v| v.kind == PrunedVertexKind::Initial).count()
    }

    /// Number of secondary vertices.
    pub fn secondary_count(&self) -> usize {
        self.vertices.len() - self.initial_count()
    }

    /// Number of coloured ends.
    pub fn coloured_count(&self) -> usize {
        self.edges.iter().filter(|e| e.role == EdgeRole::ColouredEnd).count()
    }

    /// Weights of the right ends, sorted descending.
    pub fn right_weights(&self) -> Vec<u32> {
        let mut w: Vec<u32> = self.edges.iter().filter(|e| e.role == EdgeRole::RightEnd).map(|e| e.weight).collect();
        w.sort_unstable_by(|a, b| b.cmp(a));
        w
    }

    /// Canonical serialization: vertex kinds then sorted edges.
    pub fn canonical_form(&self) -> String {
        canonical_text(&self.vertices, &self.edges, true)
    }

    /// The serialization with edge weights removed. In genus zero the
    /// weights follow from the ends by balancing, so this identifies the
    /// combinatorial type across lattice points.
    pub fn structure_key(&self) -> String {
        canonical_text(&self.vertices, &self.edges, false)
    }

    /// Short stable hash of the canonical form.
    pub fn canonical_hash(&self) -> String {
        canonical_hash(&self.canonical_form())
    }

    /// Checks balancing at every vertex, coloured ends included.
    pub fn is_balanced(&self) -> bool {
        (1..=self.vertices.len()).all(|p| {
            let ins: u32 = self.edges.iter().filter(|e| e.dst == p).map(|e| e.weight).sum();
            let outs: u32 = self.edges.iter().filter(|e| e.src == p).map(|e| e.weight).sum();
            ins == outs
        })
    }

    /// First Betti number of the graph with ends as leaves.
    pub fn betti_number(&self) -> i64 {
        let n = self.vertices.len();
        let mut uf = UnionFind::new(n + self.edges.len());
        let mut leaf = n;
        for e in &self.edges {
            let a = if e.src == 0 {
                leaf += 1;
                leaf - 1
            } else {
                e.src - 1
            };
            let c = if e.dst == n + 1 {
                leaf += 1;
                leaf - 1
            } else {
                e.dst - 1
            };
            uf.union(a, c);
        }
        let nodes = leaf;
        let mut uf2 = uf.clone();
        let comps = (0..nodes).filter(|&x| uf2.find(x) == x).count() as i64;
        self.edges.len() as i64 - nodes as i64 + comps
    }

    /// Graphviz rendering; coloured ends are dashed.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"{name}\" {{");
        let _ = writeln!(s, "  rankdir=LR;");
        let _ = writeln!(s, "  label=\"weight={}\";", self.weight.to_pq());
        for (i, v) in self.vertices.iter().enumerate() {
            let kind = match v.kind {
                PrunedVertexKind::Initial => "initial",
                PrunedVertexKind::Cut => "cut",
                PrunedVertexKind::ConnectedJoin => "connected join",
                PrunedVertexKind::DisconnectedJoin => "disconnected join",
            };
            let _ = writeln!(s, "  v{} [label=\"{}: {kind}\\nm={}\"];", i + 1, i + 1, self.multiplicities[i].to_pq());
        }
        let n = self.vertices.len();
        for (i, e) in self.edges.iter().enumerate() {
            let from = if e.src == 0 {
                let _ = writeln!(s, "  l{i} [shape=point];");
                format!("l{i}")
            } else {
                format!("v{}", e.src)
            };
            let to = if e.dst == n + 1 {
                let _ = writeln!(s, "  r{i} [shape=point];");
                format!("r{i}")
            } else {
                format!("v{}", e.dst)
            };
            let style = if e.role == EdgeRole::ColouredEnd { ", style=dashed, color=red, xlabel=\"coloured\"" } else { "" };
            let _ = writeln!(s, "  {from} -> {to} [label=\"w={}\"{style}];", e.weight);
        }
        s.push_str("}\n");
        s
    }
}

fn canonical_text(vertices: &[PrunedVertex], edges: &[PrunedEdge], with_weights: bool) -> String {
    let kinds: Vec<&str> = vertices
        .iter()
        .map(|v| match v.kind {
            PrunedVertexKind::Initial => "I",
            PrunedVertexKind::Cut => "C",
            PrunedVertexKind::ConnectedJoin => "J",
            PrunedVertexKind::DisconnectedJoin => "D",
        })
        .collect();
    let mut es: Vec<String> = edges
        .iter()
        .map(|e| {
            let role = match e.role {
                EdgeRole::RegularEnd => "r",
                EdgeRole::ColouredEnd => "c",
                EdgeRole::Inner => "i",
                EdgeRole::RightEnd => "e",
            };
            let label = e.label.map(|l| format!("#{l}")).unwrap_or_default();
            if with_weights {
                format!("{}>{}:{}{role}{label}", e.src, e.dst, e.weight)
            } else {
                format!("{}>{}{role}{label}", e.src, e.dst)
            }
        })
        .collect();
    es.sort();
    format!("{};{}", kinds.join(""), es.join(","))
}

/// Statistics of the component(s) feeding a secondary vertex, used by
/// [`vertex_multiplicity`]. `transpositions` holds, for each feeding
/// component, the number of branch points accounted for so far: ends
/// absorbed at initial vertices, secondary vertices and coloured ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexContext {
    pub transpositions: Vec<u64>,
}

/// The multiplicity `m(v)` of a secondary vertex.
///
/// For a cut the local coefficient is the exact one used by the recursion,
/// divided by the weights that the product formula counts separately, so
/// it reduces to `(|c_v|+1)!` when the pieces are large. Joins carry
/// `(|c_v|+1)!`. Initial vertices are evaluated separately as local pruned
/// numbers.
pub fn vertex_multiplicity<S: Scalar>(v: &PrunedVertex, ctx: &VertexContext, rec: &PrunedRecursion<S>) -> Result<S> {
    let k = v.ends.len() as u64;
    let prod = v.ends.iter().fold(S::one(), |acc, &c| acc * S::uint(c as u64));
    match v.kind {
        PrunedVertexKind::Initial => rec.base_two(&v.ends, &v.outs),
        PrunedVertexKind::Cut => {
            let a = ctx.transpositions[0];
            let ratio = factorial::<S>(a + k) / factorial::<S>(a);
            let alpha = v.ins[0];
            let coef = rec.cut_coeff(alpha, &v.ends, v.outs[0], v.outs[1]);
            Ok(ratio * coef / (S::uint(alpha as u64) * prod))
        }
        PrunedVertexKind::ConnectedJoin => {
            let a = ctx.transpositions[0];
            Ok(factorial::<S>(a + k) / factorial::<S>(a) * factorial::<S>(k + 1))
        }
        PrunedVertexKind::DisconnectedJoin => {
            let (a1, a2) = (ctx.transpositions[0], ctx.transpositions[1]);
            Ok(factorial::<S>(a1 + a2 + k) / (factorial::<S>(a1) * factorial::<S>(a2)) * factorial::<S>(k + 1))
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Strand {
    id: u32,
    weight: u32,
}

#[derive(Debug, Clone, Copy)]
struct End {
    label: usize,
    weight: u32,
}

#[derive(Debug)]
struct Step {
    kind: PrunedVertexKind,
    ends: Vec<End>,
    ins: Vec<Strand>,
    outs: Vec<Strand>,
    subs: Vec<Rc<Step>>,
}

type History<S> = (S, Rc<Step>);

struct Unfolder<'a, S: Scalar> {
    rec: &'a PrunedRecursion<S>,
    next_id: Cell<u32>,
}

impl<S: Scalar> Unfolder<'_, S> {
    fn fresh(&self, weight: u32) -> Strand {
        let id = self.next_id.get();
        self.next_id.set(id + 1);
        Strand { id, weight }
    }

    /// All histories of `PH_g(μ, ν)` with nonzero contribution.
    fn histories(&self, g: u32, mu: &[End], nu: &[Strand]) -> Result<Vec<History<S>>> {
        let (m, n) = (mu.len(), nu.len());
        let b = branch(g, m, n);
        let mut out = Vec::new();
        if b <= 0 || (g == 0 && n == 1) {
            return Ok(out);
        }
        let mw: Vec<u32> = mu.iter().map(|e| e.weight).collect();
        if g == 0 && n == 2 {
            let nw: Vec<u32> = nu.iter().map(|s| s.weight).collect();
            let v = self.rec.base_two(&mw, &nw)?;
            if !v.is_zero() {
                let step = Step { kind: PrunedVertexKind::Initial, ends: mu.to_vec(), ins: vec![], outs: nu.to_vec(), subs: vec![] };
                out.push((v, Rc::new(step)));
            }
            return Ok(out);
        }
        let full = (1u32 << m) - 1;
        let pick = |mask: u32| -> Vec<End> { (0..m).filter(|&k| mask >> k & 1 == 1).map(|k| mu[k]).collect() };
        let weights = |e: &[End]| -> Vec<u32> { e.iter().map(|x| x.weight).collect() };
        let half = S::ratio(1, 2);

        for i in 0..n {
            for j in i + 1..n {
                for keep in 1..=full {
                    let coloured = pick(full & !keep);
                    let cw = weights(&coloured);
                    let alpha = nu[i].weight as i64 + nu[j].weight as i64 - cw.iter().sum::<u32>() as i64;
                    if alpha < 1 {
                        continue;
                    }
                    let s = self.fresh(alpha as u32);
                    let mut rest: Vec<Strand> = (0..n).filter(|&k| k != i && k != j).map(|k| nu[k]).collect();
                    rest.push(s);
                    let c = falling::<S>(b, cw.len()) * self.rec.cut_coeff(alpha as u32, &cw, nu[i].weight, nu[j].weight);
                    if c.is_zero() {
                        continue;
                    }
                    for (v, h) in self.histories(g, &pick(keep), &rest)? {
                        let step = Step { kind: PrunedVertexKind::Cut, ends: coloured.clone(), ins: vec![s], outs: vec![nu[i], nu[j]], subs: vec![h] };
                        out.push((c.clone() * v, Rc::new(step)));
                    }
                }
            }
        }

        if g >= 1 {
            for i in 0..n {
                for keep in 1..=full {
                    let coloured = pick(full & !keep);
                    let cw = weights(&coloured);
                    let s = nu[i].weight as i64 - cw.iter().sum::<u32>() as i64;
                    for a in 1..s {
                        let (s1, s2) = (self.fresh(a as u32), self.fresh((s - a) as u32));
                        let mut rest: Vec<Strand> = (0..n).filter(|&k| k != i).map(|k| nu[k]).collect();
                        rest.push(s1);
                        rest.push(s2);
                        let c = half.clone() * falling::<S>(b, cw.len()) * join_coefficient::<S>(a as u32, (s - a) as u32, &cw);
                        for (v, h) in self.histories(g - 1, &pick(keep), &rest)? {
                            let step = Step { kind: PrunedVertexKind::ConnectedJoin, ends: coloured.clone(), ins: vec![s1, s2], outs: vec![nu[i]], subs: vec![h] };
                            out.push((c.clone() * v, Rc::new(step)));
                        }
                    }
                }
            }
        }

        let pow3 = 3usize.pow(m as u32);
        for i in 0..n {
            let others: Vec<usize> = (0..n).filter(|&k| k != i).collect();
            for g1 in 0..=g {
                let g2 = g - g1;
                for jmask in 0..(1u32 << others.len()) {
                    let j1: Vec<Strand> = (0..others.len()).filter(|&t| jmask >> t & 1 == 1).map(|t| nu[others[t]]).collect();
                    let j2: Vec<Strand> = (0..others.len()).filter(|&t| jmask >> t & 1 == 0).map(|t| nu[others[t]]).collect();
                    for code in 0..pow3 {
                        let (mut i1, mut i2, mut coloured) = (Vec::new(), Vec::new(), Vec::new());
                        let mut c = code;
                        for &e in mu {
                            match c % 3 {
                                0 => coloured.push(e),
                                1 => i1.push(e),
                                _ => i2.push(e),
                            }
                            c /= 3;
                        }
                        if i1.is_empty() || i2.is_empty() {
                            continue;
                        }
                        let cw = weights(&coloured);
                        let s = nu[i].weight as i64 - cw.iter().sum::<u32>() as i64;
                        let a = weights(&i1).iter().sum::<u32>() as i64 - j1.iter().map(|x| x.weight).sum::<u32>() as i64;
                        let bb = s - a;
                        if a < 1 || bb < 1 {
                            continue;
                        }
                        let b1 = branch(g1, i1.len(), j1.len() + 1);
                        let b2 = branch(g2, i2.len(), j2.len() + 1);
                        let (s1, s2) = (self.fresh(a as u32), self.fresh(bb as u32));
                        let mut nu1 = j1.clone();
                        nu1.push(s1);
                        let h1 = self.histories(g1, &i1, &nu1)?;
                        if h1.is_empty() {
                            continue;
                        }
                        let mut nu2 = j2.clone();
                        nu2.push(s2);
                        let h2 = self.histories(g2, &i2, &nu2)?;
                        let interleave = factorial::<S>((b - 1) as u64) / (factorial::<S>(b1 as u64) * factorial::<S>(b2 as u64));
                        let coef = half.clone() * interleave * join_coefficient::<S>(a as u32, bb as u32, &cw);
                        for (v2, x2) in &h2 {
                            for (v1, x1) in &h1 {
                                let step = Step {
                                    kind: PrunedVertexKind::DisconnectedJoin,
                                    ends: coloured.clone(),
                                    ins: vec![s1, s2],
                                    outs: vec![nu[i]],
                                    subs: vec![x1.clone(), x2.clone()],
                                };
                                out.push((coef.clone() * v1.clone() * v2.clone(), Rc::new(step)));
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Vertex orders of a history that keep each component's own order; the
/// relative order of components before they merge is free.
fn linearizations(step: &Rc<Step>) -> Vec<Vec<Rc<Step>>> {
    match step.subs.len() {
        0 => vec![vec![step.clone()]],
        1 => linearizations(&step.subs[0])
            .into_iter()
            .map(|mut l| {
                l.push(step.clone());
                l
            })
            .collect(),
        _ => {
            let (l1s, l2s) = (linearizations(&step.subs[0]), linearizations(&step.subs[1]));
            let mut out = Vec::new();
            for l1 in &l1s {
                for l2 in &l2s {
                    for (x, y) in [(l1, l2), (l2, l1)] {
                        let mut l = x.clone();
                        l.extend(y.iter().cloned());
                        l.push(step.clone());
                        out.push(l);
                    }
                }
            }
            out
        }
    }
}

type GraphKey = (Vec<PrunedVertexKind>, Vec<PrunedEdge>);

/// Builds vertex records and edges for a vertex order; initial vertices
/// are moved to the front, keeping relative orders.
fn layout(order: &[Rc<Step>], labelled: bool) -> (Vec<PrunedVertex>, Vec<PrunedEdge>) {
    let mut order: Vec<Rc<Step>> = order.to_vec();
    order.sort_by_key(|s| s.kind != PrunedVertexKind::Initial);
    let right = order.len() + 1;
    let mut src: BTreeMap<u32, (usize, u32)> = BTreeMap::new();
    let mut dst: BTreeMap<u32, usize> = BTreeMap::new();
    let mut edges = Vec::new();
    let mut vertices = Vec::new();
    for (p, s) in order.iter().enumerate() {
        let p = p + 1;
        for x in &s.ins {
            dst.insert(x.id, p);
        }
        for x in &s.outs {
            src.insert(x.id, (p, x.weight));
        }
        let role = if s.kind == PrunedVertexKind::Initial { EdgeRole::RegularEnd } else { EdgeRole::ColouredEnd };
        for e in &s.ends {
            edges.push(PrunedEdge { src: 0, dst: p, weight: e.weight, role, label: labelled.then_some(e.label) });
        }
        vertices.push(PrunedVertex {
            kind: s.kind,
            ends: s.ends.iter().map(|e| e.weight).collect(),
            ins: s.ins.iter().map(|x| x.weight).collect(),
            outs: s.outs.iter().map(|x| x.weight).collect(),
        });
    }
    for (id, (p, w)) in &src {
        match dst.get(id) {
            Some(&q) => edges.push(PrunedEdge { src: *p, dst: q, weight: *w, role: EdgeRole::Inner, label: None }),
            None => edges.push(PrunedEdge { src: *p, dst: right, weight: *w, role: EdgeRole::RightEnd, label: None }),
        }
    }
    edges.sort();
    (vertices, edges)
}

/// Options for pruned graph enumeration.
#[derive(Debug, Clone, Copy, Default)]
pub struct PrunedOptions {
    /// Keep end labels in the graph identity (used for per-type analysis).
    pub labelled: bool,
}

/// All pruned monodromy graphs of type `t`, one per quasi-isomorphism
/// class, sorted by canonical form. The pruning side of `t` selects which
/// partition plays the role of μ.
pub fn enumerate_pruned_monodromy_graphs<S: Scalar>(t: &HurwitzType) -> Result<Vec<PrunedMonodromyGraph<S>>> {
    enumerate_pruned_with(t, &PrunedRecursion::new(), PrunedOptions::default())
}

/// [`enumerate_pruned_monodromy_graphs`] with a shared recursion memo and
/// options.
pub fn enumerate_pruned_with<S: Scalar>(
    t: &HurwitzType,
    rec: &PrunedRecursion<S>,
    opts: PrunedOptions,
) -> Result<Vec<PrunedMonodromyGraph<S>>> {
    let t = if t.pruned_side == PrunedSide::Right { t.swapped() } else { t.clone() };
    let b = t.branch_count();
    let n = t.nu.len();
    if b <= 0 || (t.genus == 0 && n <= 2) {
        return Err(HurwitzError::Inapplicable(format!(
            "pruned graphs are not enumerated for base type {} (value comes from the recursion)",
            t.key()
        )));
    }
    let unfolder = Unfolder { rec, next_id: Cell::new(0) };
    let mu: Vec<End> = t.mu.parts().iter().enumerate().map(|(label, &weight)| End { label, weight }).collect();
    let nu: Vec<Strand> = t.nu.parts().iter().map(|&w| unfolder.fresh(w)).collect();
    let histories = unfolder.histories(t.genus, &mu, &nu)?;

    let mut classes: BTreeMap<GraphKey, (S, Vec<PrunedVertex>, Vec<PrunedEdge>)> = BTreeMap::new();
    for (value, h) in histories {
        let mut best: Option<(GraphKey, Vec<PrunedVertex>, Vec<PrunedEdge>)> = None;
        for order in linearizations(&h) {
            let (vertices, mut edges) = layout(&order, opts.labelled);
            if opts.labelled {
                label_right_ends(&mut edges, &order, &nu);
            }
            let key = (vertices.iter().map(|v| v.kind).collect(), edges.clone());
            if best.as_ref().is_none_or(|(k, _, _)| key < *k) {
                best = Some((key, vertices, edges));
            }
        }
        let (key, vertices, edges) = best.expect("every history has a vertex order");
        classes
            .entry(key)
            .and_modify(|e| e.0 = e.0.clone() + value.clone())
            .or_insert((value, vertices, edges));
    }

    // With labelled ends only unlabelled inner symmetries remain.
    let aut = if opts.labelled { S::one() } else { S::uint(t.mu.automorphisms() * t.nu.automorphisms()) };
    classes
        .into_values()
        .map(|(weight, vertices, edges)| {
            let (multiplicities, automorphism_factor, formula_weight) = product_formula(&vertices, &edges, &aut, rec)?;
            Ok(PrunedMonodromyGraph { vertices, edges, weight, formula_weight, multiplicities, automorphism_factor })
        })
        .collect()
}

/// Right ends are labelled by the position of their strand in ν.
fn label_right_ends(edges: &mut [PrunedEdge], order: &[Rc<Step>], nu: &[Strand]) {
    // Recover which top-level strand each right end is by replaying the
    // layout order: right ends are exactly the outputs never consumed.
    let mut order: Vec<Rc<Step>> = order.to_vec();
    order.sort_by_key(|s| s.kind != PrunedVertexKind::Initial);
    let mut ends: Vec<(usize, u32, usize)> = Vec::new();
    for (p, s) in order.iter().enumerate() {
        for x in &s.outs {
            if let Some(j) = nu.iter().position(|y| y.id == x.id) {
                ends.push((p + 1, x.weight, j));
            }
        }
    }
    let mut used = vec![false; ends.len()];
    for e in edges.iter_mut().filter(|e| e.role == EdgeRole::RightEnd) {
        if let Some(k) = (0..ends.len()).find(|&k| !used[k] && ends[k].0 == e.src && ends[k].1 == e.weight) {
            used[k] = true;
            e.label = Some(ends[k].2);
        }
    }
    edges.sort();
}

/// Evaluates `|Aut μ||Aut ν|/|Aut Γ| · ∏ inner w · ∏ coloured w · ∏ m(v)`.
fn product_formula<S: Scalar>(
    vertices: &[PrunedVertex],
    edges: &[PrunedEdge],
    aut: &S,
    rec: &PrunedRecursion<S>,
) -> Result<(Vec<S>, S, S)> {
    let n = vertices.len();
    // Component bookkeeping: union-find over positions, with a count of
    // branch points accounted for per component root.
    let mut uf = UnionFind::new(n + 1);
    let mut count = vec![0u64; n + 1];
    let mut mults = Vec::with_capacity(n);
    let mut denominators = S::one();
    for (i, v) in vertices.iter().enumerate() {
        let p = i + 1;
        let feeders: Vec<usize> = edges.iter().filter(|e| e.dst == p && e.role == EdgeRole::Inner).map(|e| e.src).collect();
        let mut roots: Vec<usize> = feeders.iter().map(|&q| uf.find(q)).collect();
        roots.sort_unstable();
        roots.dedup();
        let ctx = VertexContext { transpositions: roots.iter().map(|&r| count[r]).collect() };
        mults.push(vertex_multiplicity(v, &ctx, rec)?);
        let mut total: u64 = roots.iter().map(|&r| count[r]).sum();
        total += match v.kind {
            PrunedVertexKind::Initial => v.ends.len() as u64,
            _ => 1 + v.ends.len() as u64,
        };
        for &r in &roots {
            uf.union(r, p);
        }
        let root = uf.find(p);
        count[root] = total;
    }
    denominators = denominators * S::uint(automorphism_count(vertices, edges));
    let factor = aut.clone() / denominators;
    let weights = edges
        .iter()
        .filter(|e| e.role == EdgeRole::Inner || e.role == EdgeRole::ColouredEnd)
        .fold(S::one(), |acc, e| acc * S::uint(e.weight as u64));
    let product = mults.iter().fold(factor.clone() * weights, |acc, m| acc * m.clone());
    Ok((mults, factor, product))
}

/// Order of the automorphism group of a pruned graph: vertex bijections
/// preserving kinds, the edge multiset and the order of every two vertices
/// that already share a component at the later one, times the ways to
/// permute parallel edges (forks of equal ends, wieners). Labelled ends
/// are distinct, so they are never permuted.
pub fn automorphism_count(vertices: &[PrunedVertex], edges: &[PrunedEdge]) -> u64 {
    let n = vertices.len();
    let right = n + 1;
    let sorted = |phi: &[usize]| {
        let map = |x: usize| if x == 0 || x == right { x } else { phi[x - 1] };
        let mut es: Vec<PrunedEdge> =
            edges.iter().map(|e| PrunedEdge { src: map(e.src), dst: map(e.dst), ..*e }).collect();
        es.sort();
        es
    };
    let target = sorted(&(1..=n).collect::<Vec<_>>());
    let mut count = 0u64;
    let mut phi = vec![0usize; n];
    let mut used = vec![false; n + 1];
    fn rec(
        k: usize,
        vertices: &[PrunedVertex],
        phi: &mut Vec<usize>,
        used: &mut Vec<bool>,
        count: &mut u64,
        check: &dyn Fn(&[usize]) -> bool,
    ) {
        if k == vertices.len() {
            if check(phi) {
                *count += 1;
            }
            return;
        }
        for img in 1..=vertices.len() {
            if !used[img] && vertices[img - 1].kind == vertices[k].kind && vertices[img - 1].ins.len() == vertices[k].ins.len() {
                used[img] = true;
                phi[k] = img;
                rec(k + 1, vertices, phi, used, count, check);
                used[img] = false;
            }
        }
    }
    // ordered[u][v]: u < v and both lie in one component of the graph
    // restricted to positions up to v.
    let mut ordered = vec![vec![false; n + 1]; n + 1];
    for v in 1..=n {
        let mut uf = UnionFind::new(n + 1);
        for e in edges.iter().filter(|e| e.role == EdgeRole::Inner && e.dst <= v) {
            uf.union(e.src, e.dst);
        }
        for u in 1..v {
            ordered[u][v] = uf.find(u) == uf.find(v);
        }
    }
    let check = |phi: &[usize]| {
        (1..=n).all(|v| (1..v).all(|u| !ordered[u][v] || phi[u - 1] < phi[v - 1])) && sorted(phi) == target
    };
    rec(0, vertices, &mut phi, &mut used, &mut count, &check);
    let mut parallel = 1u64;
    let mut run = 1u64;
    for w in target.windows(2) {
        if w[0] == w[1] {
            run += 1;
            parallel *= run;
        } else {
            run = 1;
        }
    }
    count * parallel
}

/// The tropical pruned double Hurwitz number. Base types with
/// `(g, ℓ(ν)) = (0, 1)` or `(0, 2)`, and types without branch points, take
/// their value from the recursion.
pub fn tropical_pruned<S: Scalar>(t: &HurwitzType) -> Result<S> {
    tropical_pruned_with(t, &PrunedRecursion::new())
}

/// [`tropical_pruned`] with a shared recursion memo.
pub fn tropical_pruned_with<S: Scalar>(t: &HurwitzType, rec: &PrunedRecursion<S>) -> Result<S> {
    let side_t = if t.pruned_side == PrunedSide::Right { t.swapped() } else { t.clone() };
    if side_t.branch_count() <= 0 || (side_t.genus == 0 && side_t.nu.len() <= 2) {
        return rec.ph(side_t.genus, side_t.mu.parts(), side_t.nu.parts());
    }
    let graphs = enumerate_pruned_with(t, rec, PrunedOptions::default())?;
    Ok(graphs.into_iter().fold(S::zero(), |acc, g| acc + g.weight))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::Rational;

    #[test]
    fn genus_two_family_matches_table() {
        let t = HurwitzType::of(2, &[1, 1, 1], &[3]);
        let graphs = enumerate_pruned_monodromy_graphs::<Rational>(&t).unwrap();
        assert_eq!(graphs.len(), 8);
        let mut w: Vec<Rational> = graphs.iter().map(|g| g.weight.clone()).collect();
        w.sort();
        let mut expected: Vec<Rational> = [72, 24, 12, 72, 36, 108, 96, 30].iter().map(|&x| rat(x)).collect();
        expected.sort();
        assert_eq!(w, expected);
        for g in &graphs {
            assert_eq!(g.formula_weight, g.weight, "{}", g.canonical_form());
            assert_eq!(g.secondary_count(), 6 - 3);
            assert!(g.is_balanced());
            assert_eq!(g.betti_number(), 2);
        }
    }

    #[test]
    fn product_formula_matches_histories() {
        let rec = PrunedRecursion::<Rational>::new();
        let types = [
            HurwitzType::of(0, &[2, 2], &[1, 2, 1]),
            HurwitzType::of(0, &[3, 2], &[1, 1, 1, 2]),
            HurwitzType::of(1, &[2, 2], &[4]),
            HurwitzType::of(1, &[2, 1, 1], &[2, 2]),
            HurwitzType::of(0, &[1, 1, 1, 1], &[2, 1, 1]),
            HurwitzType::of(1, &[3, 1], &[1, 1, 2]),
            HurwitzType::of(2, &[2, 1], &[3]),
        ];
        for t in &types {
            for labelled in [false, true] {
                let graphs = enumerate_pruned_with(t, &rec, PrunedOptions { labelled }).unwrap();
                let total = graphs.iter().fold(rat(0), |a, g| a + g.weight.clone());
                assert_eq!(total, rec.value(t).unwrap(), "{t}");
                for g in &graphs {
                    assert_eq!(g.formula_weight, g.weight, "{t} labelled={labelled} {}", g.canonical_form());
                }
            }
        }
    }

    #[test]
    fn multiplicity_examples() {
        let rec = PrunedRecursion::<Rational>::new();
        let cut = PrunedVertex { kind: PrunedVertexKind::Cut, ends: vec![1], ins: vec![2], outs: vec![2, 1] };
        let ctx = VertexContext { transpositions: vec![2] };
        assert_eq!(vertex_multiplicity(&cut, &ctx, &rec).unwrap(), rat(6));
        let join = PrunedVertex { kind: PrunedVertexKind::ConnectedJoin, ends: vec![1], ins: vec![1, 1], outs: vec![3] };
        let ctx = VertexContext { transpositions: vec![4] };
        assert_eq!(vertex_multiplicity(&join, &ctx, &rec).unwrap(), rat(10));
        let plain = PrunedVertex { kind: PrunedVertexKind::Cut, ends: vec![], ins: vec![3], outs: vec![2, 1] };
        let ctx = VertexContext { transpositions: vec![5] };
        assert_eq!(vertex_multiplicity(&plain, &ctx, &rec).unwrap(), rat(1));
    }
}
