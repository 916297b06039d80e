//! Chamber analysis: resonance arrangements, exact polynomial fits,
//! wall-crossings and per-graph contributions.
//!
//! Points are vectors `(μ_1, …, μ_m, ν_1, …, ν_n)` with `Σμ = Σν`. The last
//! coordinate is eliminated through this relation, so hyperplanes and
//! polynomials live in the first `m + n - 1` coordinates.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{HurwitzError, Result};
use crate::partition::{HurwitzType, Partition};
use crate::pruned_tropical::{enumerate_pruned_with, PrunedMonodromyGraph, PrunedOptions};
use crate::recursion::PrunedRecursion;
use crate::scalar::Scalar;

/// A wall `Σ α_i μ_i − Σ β_j ν_j = 0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hyperplane {
    /// `α` followed by `−β`, one entry in `{−1, 0, 1}` per coordinate.
    pub form: Vec<i64>,
    /// The form with the last coordinate eliminated, divided by the gcd
    /// and with its first nonzero entry positive. Identifies the wall.
    pub reduced: Vec<i64>,
}

impl Hyperplane {
    /// The value of the form at a point.
    pub fn eval(&self, x: &[i64]) -> i64 {
        self.form.iter().zip(x).map(|(a, b)| a * b).sum()
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&linear_form_text(&self.form))
    }
}

fn linear_form_text(form: &[i64]) -> String {
    let mut s = String::new();
    for (k, &c) in form.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let sign = if c > 0 { if s.is_empty() { "" } else { " + " } } else if s.is_empty() { "-" } else { " - " };
        let coef = if c.abs() == 1 { String::new() } else { format!("{}*", c.abs()) };
        s.push_str(&format!("{sign}{coef}x{k}"));
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn reduce(form: &[i64], m: usize) -> Vec<i64> {
    let k = form.len() - 1;
    let last = form[k];
    let mut r: Vec<i64> = form[..k].to_vec();
    for (i, c) in r.iter_mut().enumerate() {
        // ν_n = Σ μ_i − Σ_{j<n} ν_j
        if i < m {
            *c += last;
        } else {
            *c -= last;
        }
    }
    let g = r.iter().fold(0, |g, &c| gcd(g, c));
    if g == 0 {
        return r;
    }
    let sign = if r.iter().find(|&&c| c != 0).copied().unwrap_or(1) < 0 { -1 } else { 1 };
    r.iter().map(|&c| sign * c / g).collect()
}

/// All non-trivial walls for `m` parts over 0 and `n` over ∞, one per
/// wall, sorted. With `refined` every coordinate may enter with either
/// sign; otherwise the walls are `Σ_{i∈I} μ_i − Σ_{j∈J} ν_j`.
pub fn hyperplanes(m: usize, n: usize, refined: bool) -> Vec<Hyperplane> {
    let len = m + n;
    let choices: &[i64] = if refined { &[-1, 0, 1] } else { &[0, 1] };
    let mut out: BTreeMap<Vec<i64>, Vec<i64>> = BTreeMap::new();
    let total = choices.len().pow(len as u32);
    for code in 0..total {
        let mut c = code;
        let mut form = Vec::with_capacity(len);
        for k in 0..len {
            let v = choices[c % choices.len()];
            c /= choices.len();
            form.push(if k < m { v } else { -v });
        }
        let reduced = reduce(&form, m);
        if reduced.iter().all(|&x| x == 0) {
            continue;
        }
        // Prefer the unrefined representative when several forms agree.
        let unrefined = form[..m].iter().all(|&x| x >= 0) && form[m..].iter().all(|&x| x <= 0);
        out.entry(reduced)
            .and_modify(|f| {
                let cur = f[..m].iter().all(|&x| x >= 0) && f[m..].iter().all(|&x| x <= 0);
                if unrefined && !cur {
                    *f = form.clone();
                }
            })
            .or_insert(form);
    }
    out.into_iter().map(|(reduced, form)| Hyperplane { form, reduced }).collect()
}

/// Whether a form is the difference of two part-subset sums.
pub fn is_resonance_form(h: &Hyperplane, m: usize) -> bool {
    h.form[..m].iter().all(|&x| x >= 0) && h.form[m..].iter().all(|&x| x <= 0)
}

/// The sign of every wall at a point.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChamberSignature {
    pub signs: Vec<i8>,
}

impl ChamberSignature {
    /// The signature of `x`, or `None` if `x` lies on a wall.
    pub fn of(x: &[i64], walls: &[Hyperplane]) -> Option<Self> {
        let mut signs = Vec::with_capacity(walls.len());
        for w in walls {
            match w.eval(x).signum() {
                0 => return None,
                s => signs.push(s as i8),
            }
        }
        Some(ChamberSignature { signs })
    }
}

impl fmt::Display for ChamberSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.signs.iter().map(|&x| if x > 0 { '+' } else { '-' }).collect();
        f.write_str(&s)
    }
}

/// A polynomial with exact coefficients; exponent vectors have one entry
/// per coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultivariatePolynomial<S: Scalar> {
    pub vars: usize,
    pub terms: BTreeMap<Vec<u32>, S>,
}

impl<S: Scalar> MultivariatePolynomial<S> {
    /// The zero polynomial.
    pub fn zero(vars: usize) -> Self {
        MultivariatePolynomial { vars, terms: BTreeMap::new() }
    }

    /// Builds a polynomial, dropping zero coefficients.
    pub fn from_terms(vars: usize, terms: impl IntoIterator<Item = (Vec<u32>, S)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            let entry = p.terms.entry(e).or_insert_with(S::zero);
            *entry = entry.clone() + c;
        }
        p.terms.retain(|_, c| !c.is_zero());
        p
    }

    /// Exact evaluation at an integer point.
    pub fn eval(&self, x: &[i64]) -> S {
        self.terms.iter().fold(S::zero(), |acc, (e, c)| {
            let mono = e.iter().zip(x).fold(S::one(), |m, (&k, &v)| m * pow(&S::int(v), k));
            acc + c.clone() * mono
        })
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Whether every coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `self − other`.
    pub fn sub(&self, other: &Self) -> Self {
        let neg = other.terms.iter().map(|(e, c)| (e.clone(), -c.clone()));
        Self::from_terms(self.vars, self.terms.clone().into_iter().chain(neg))
    }
}

fn pow<S: Scalar>(x: &S, k: u32) -> S {
    (0..k).fold(S::one(), |acc, _| acc * x.clone())
}

impl<S: Scalar> fmt::Display for MultivariatePolynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| if k == 1 { format!("x{i}") } else { format!("x{i}^{k}") })
                    .collect();
                if mono.is_empty() {
                    c.to_pq()
                } else {
                    format!("{}*{}", c.to_pq(), mono.join("*"))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Exponent vectors of total degree at most `degree` in the first `free`
/// of `vars` coordinates, in graded lexicographic order.
pub fn monomials(vars: usize, free: usize, degree: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for total in 0..=degree {
        let mut cur = vec![0u32; vars];
        fn rec(k: usize, left: u32, free: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if k == free - 1 {
                cur[k] = left;
                out.push(cur.clone());
                cur[k] = 0;
                return;
            }
            for a in (0..=left).rev() {
                cur[k] = a;
                rec(k + 1, left - a, free, cur, out);
            }
            cur[k] = 0;
        }
        if free == 0 {
            if total == 0 {
                out.push(cur);
            }
            continue;
        }
        rec(0, total, free, &mut cur, &mut out);
    }
    out
}

/// A lattice point split into μ and ν.
pub fn split_point(x: &[i64], m: usize) -> (Vec<u32>, Vec<u32>) {
    (x[..m].iter().map(|&v| v as u32).collect(), x[m..].iter().map(|&v| v as u32).collect())
}

/// Sampling box for lattice points.
#[derive(Debug, Clone, Copy)]
pub struct SampleBox {
    /// Parts range over `1..=max_part`.
    pub max_part: i64,
    /// Points of larger degree are skipped.
    pub max_degree: i64,
}

impl Default for SampleBox {
    fn default() -> Self {
        SampleBox { max_part: 12, max_degree: 12 }
    }
}

/// All lattice points with `m` and `n` parts in the box, off every wall,
/// sorted by degree and then lexicographically.
pub fn sample_points(m: usize, n: usize, walls: &[Hyperplane], bx: SampleBox) -> Vec<(Vec<i64>, ChamberSignature)> {
    let free = m + n - 1;
    let mut out = Vec::new();
    let mut x = vec![1i64; free];
    loop {
        let mu: i64 = x[..m].iter().sum();
        let nu: i64 = x[m..].iter().sum();
        let last = mu - nu;
        if last >= 1 && last <= bx.max_part && mu <= bx.max_degree {
            let mut p = x.clone();
            p.push(last);
            if let Some(sig) = ChamberSignature::of(&p, walls) {
                out.push((p, sig));
            }
        }
        let mut k = 0;
        while k < free {
            x[k] += 1;
            if x[k] <= bx.max_part {
                break;
            }
            x[k] = 1;
            k += 1;
        }
        if k == free {
            break;
        }
    }
    out.sort_by(|a, b| {
        let da: i64 = a.0[..m].iter().sum();
        let db: i64 = b.0[..m].iter().sum();
        (da, &a.0).cmp(&(db, &b.0))
    });
    out
}

/// Points of the box grouped by chamber.
pub fn chambers(m: usize, n: usize, walls: &[Hyperplane], bx: SampleBox) -> BTreeMap<ChamberSignature, Vec<Vec<i64>>> {
    let mut out: BTreeMap<ChamberSignature, Vec<Vec<i64>>> = BTreeMap::new();
    for (p, sig) in sample_points(m, n, walls, bx) {
        out.entry(sig).or_default().push(p);
    }
    out
}

/// The outcome of one chamber fit.
#[derive(Debug, Clone)]
pub struct ChamberFit<S: Scalar> {
    pub signature: ChamberSignature,
    pub polynomial: MultivariatePolynomial<S>,
    pub interpolation: Vec<Vec<i64>>,
    pub verification: Vec<Vec<i64>>,
}

/// Fits the unique polynomial of total degree at most `degree` through
/// the engine values at `points` (all in one chamber).
///
/// Interpolation points are chosen greedily in the given order so that
/// the monomial rows are independent; the next `2 ×` as many remaining
/// points are held out and must agree exactly.
pub fn fit_chamber_polynomial<S: Scalar>(
    engine: &dyn Fn(&[u32], &[u32]) -> Result<S>,
    m: usize,
    points: &[Vec<i64>],
    signature: &ChamberSignature,
    degree: u32,
) -> Result<ChamberFit<S>> {
    let vars = points.first().map(|p| p.len()).ok_or_else(|| HurwitzError::SingularSystem("no points".into()))?;
    let monos = monomials(vars, vars - 1, degree);
    let row = |x: &[i64]| -> Vec<S> {
        monos.iter().map(|e| e.iter().zip(x).fold(S::one(), |acc, (&k, &v)| acc * pow(&S::int(v), k))).collect()
    };
    // Rank-greedy selection with an incremental echelon basis.
    let mut basis: Vec<(usize, Vec<S>)> = Vec::new();
    let mut chosen = Vec::new();
    let mut rest = Vec::new();
    for p in points {
        if chosen.len() == monos.len() {
            rest.push(p.clone());
            continue;
        }
        let mut r = row(p);
        for (pivot, b) in &basis {
            if !r[*pivot].is_zero() {
                let f = r[*pivot].clone() / b[*pivot].clone();
                for (x, y) in r.iter_mut().zip(b) {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
        }
        match r.iter().position(|c| !c.is_zero()) {
            Some(pivot) => {
                basis.push((pivot, r));
                chosen.push(p.clone());
            }
            None => rest.push(p.clone()),
        }
    }
    if chosen.len() < monos.len() {
        return Err(HurwitzError::SingularSystem(format!(
            "chamber {signature}: only {} independent points for {} monomials",
            chosen.len(),
            monos.len()
        )));
    }
    let needed = 2 * monos.len();
    if rest.len() < needed {
        return Err(HurwitzError::SingularSystem(format!(
            "chamber {signature}: {} held-out points available, {needed} required",
            rest.len()
        )));
    }
    let held: Vec<Vec<i64>> = rest.into_iter().take(needed).collect();
    let mut system: Vec<Vec<S>> = Vec::with_capacity(chosen.len());
    for p in &chosen {
        let (mu, nu) = split_point(p, m);
        let mut r = row(p);
        r.push(engine(&mu, &nu)?);
        system.push(r);
    }
    let coeffs = solve(system)?;
    let polynomial = MultivariatePolynomial::from_terms(vars, monos.into_iter().zip(coeffs));
    for p in &held {
        let (mu, nu) = split_point(p, m);
        let expected = engine(&mu, &nu)?;
        let got = polynomial.eval(p);
        if got != expected {
            return Err(HurwitzError::FitMismatch(format!(
                "chamber {signature} at {p:?}: fit gives {}, engine gives {}",
                got.to_pq(),
                expected.to_pq()
            )));
        }
    }
    Ok(ChamberFit { signature: signature.clone(), polynomial, interpolation: chosen, verification: held })
}

/// Solves a square system given as augmented rows.
fn solve<S: Scalar>(mut a: Vec<Vec<S>>) -> Result<Vec<S>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or_else(|| HurwitzError::SingularSystem(format!("no pivot in column {col}")))?;
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x = x.clone() / p.clone();
        }
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n].clone()).collect())
}

/// `P1 − P2`.
pub fn wall_crossing<S: Scalar>(p1: &MultivariatePolynomial<S>, p2: &MultivariatePolynomial<S>) -> MultivariatePolynomial<S> {
    p1.sub(p2)
}

/// The expected polynomial degree `4g − 3 + m + n`.
pub fn expected_degree(g: u32, m: usize, n: usize) -> u32 {
    (4 * g as i64 - 3 + m as i64 + n as i64).max(0) as u32
}

/// Fits every chamber of the arrangement that has enough points in the
/// box. Chambers with too few points are returned in the second list.
pub fn fit_all_chambers<S: Scalar>(
    engine: &dyn Fn(&[u32], &[u32]) -> Result<S>,
    m: usize,
    n: usize,
    walls: &[Hyperplane],
    degree: u32,
    bx: SampleBox,
) -> Result<(Vec<ChamberFit<S>>, Vec<ChamberSignature>)> {
    let mut fits = Vec::new();
    let mut unsampled = Vec::new();
    for (sig, points) in chambers(m, n, walls, bx) {
        match fit_chamber_polynomial(engine, m, &points, &sig, degree) {
            Ok(f) => fits.push(f),
            Err(HurwitzError::SingularSystem(_)) => unsampled.push(sig),
            Err(e) => return Err(e),
        }
    }
    Ok((fits, unsampled))
}

/// Two chambers separated by exactly one wall.
#[derive(Debug, Clone)]
pub struct WallPair {
    /// Index of the wall in the arrangement.
    pub wall: usize,
    /// Index of the fit on the side where the wall's form is positive.
    pub positive: usize,
    /// Index of the fit on the negative side.
    pub negative: usize,
}

/// All pairs of fitted chambers whose signatures differ in one wall.
pub fn adjacent_pairs<S: Scalar>(fits: &[ChamberFit<S>]) -> Vec<WallPair> {
    let mut out = Vec::new();
    for (i, a) in fits.iter().enumerate() {
        for (j, b) in fits.iter().enumerate() {
            let diff: Vec<usize> = (0..a.signature.signs.len()).filter(|&k| a.signature.signs[k] != b.signature.signs[k]).collect();
            if diff.len() == 1 && a.signature.signs[diff[0]] > 0 {
                out.push(WallPair { wall: diff[0], positive: i, negative: j });
            }
        }
    }
    out
}

/// The genus-zero product formula for crossing the wall
/// `δ = Σ_{I} μ_i − Σ_{J} ν_j` at a point where `δ > 0`:
/// `C(m+n−2, |I|+|J|−1) · δ · H_0(μ_I, (ν_J, δ)) · H_0((μ_{I^c}, δ), ν_{J^c})`.
/// The wall must be a resonance wall; `h0` evaluates genus-zero double
/// Hurwitz numbers.
pub fn wall_crossing_formula<S: Scalar>(
    wall: &Hyperplane,
    x: &[i64],
    m: usize,
    h0: &dyn Fn(&[u32], &[u32]) -> Result<S>,
) -> Result<S> {
    if !is_resonance_form(wall, m) {
        return Err(HurwitzError::Inapplicable(format!("{wall} is not a resonance wall")));
    }
    let mut in_i: Vec<bool> = wall.form[..m].iter().map(|&c| c != 0).collect();
    let mut in_j: Vec<bool> = wall.form[m..].iter().map(|&c| c != 0).collect();
    let mut delta = wall.eval(x);
    if delta < 0 {
        in_i.iter_mut().for_each(|b| *b = !*b);
        in_j.iter_mut().for_each(|b| *b = !*b);
        delta = -delta;
    }
    if delta == 0 {
        return Err(HurwitzError::Inapplicable("point lies on the wall".into()));
    }
    let (mu, nu) = split_point(x, m);
    let pick = |v: &[u32], mask: &[bool], want: bool| -> Vec<u32> { v.iter().zip(mask).filter(|(_, &b)| b == want).map(|(&p, _)| p).collect() };
    let mu_i = pick(&mu, &in_i, true);
    let mu_c = pick(&mu, &in_i, false);
    let mut nu_j = pick(&nu, &in_j, true);
    let nu_c = pick(&nu, &in_j, false);
    if mu_i.is_empty() || nu_c.is_empty() {
        return Err(HurwitzError::Inapplicable(format!("{wall} does not separate the point into two covers")));
    }
    nu_j.push(delta as u32);
    let mut mu_c2 = mu_c.clone();
    mu_c2.push(delta as u32);
    let n = nu.len();
    let top = (m + n - 2) as u64;
    let k = (mu_i.len() + in_j.iter().filter(|&&b| b).count() - 1) as u64;
    let binom = crate::scalar::factorial::<S>(top) / (crate::scalar::factorial::<S>(k) * crate::scalar::factorial::<S>(top - k));
    Ok(binom * S::int(delta) * h0(&mu_i, &nu_j)? * h0(&mu_c2, &nu_c)?)
}

/// Pruned graphs at a point with labelled ends, as used for per-graph
/// analysis.
pub fn labelled_pruned_graphs<S: Scalar>(g: u32, mu: &[u32], nu: &[u32], rec: &PrunedRecursion<S>) -> Result<Vec<PrunedMonodromyGraph<S>>> {
    let t = HurwitzType::new(g, Partition::new(mu.to_vec())?, Partition::new(nu.to_vec())?)?;
    enumerate_pruned_with(&t, rec, PrunedOptions { labelled: true })
}

/// The contribution `m(Γ, O)(μ, ν)` of a combinatorial type of pruned
/// graph at a point.
///
/// The type is given by its structure key (vertex kinds and labelled edge
/// incidences, without weights). In genus zero the edge weights are the
/// linear forms fixed by balancing, so the key determines the graph at
/// each point; the contribution is the product formula evaluated there.
pub fn per_graph_contribution<S: Scalar>(structure_key: &str, g: u32, mu: &[u32], nu: &[u32], rec: &PrunedRecursion<S>) -> Result<S> {
    let graphs = labelled_pruned_graphs(g, mu, nu, rec)?;
    graphs
        .into_iter()
        .find(|gr| gr.structure_key() == structure_key)
        .map(|gr| gr.formula_weight)
        .ok_or_else(|| HurwitzError::TypeNotRealized(format!("{structure_key} at mu={mu:?} nu={nu:?}")))
}

/// All structure keys met at the given points.
pub fn structure_keys<S: Scalar>(g: u32, m: usize, points: &[Vec<i64>], rec: &PrunedRecursion<S>) -> Result<BTreeSet<String>> {
    let mut keys = BTreeSet::new();
    for p in points {
        let (mu, nu) = split_point(p, m);
        for gr in labelled_pruned_graphs(g, &mu, &nu, rec)? {
            keys.insert(gr.structure_key());
        }
    }
    Ok(keys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::Rational;

    #[test]
    fn wall_counts() {
        let w = hyperplanes(2, 2, false);
        assert_eq!(w.len(), 7);
        let w12 = hyperplanes(1, 2, false);
        let texts: Vec<Vec<i64>> = w12.iter().map(|h| h.reduced.clone()).collect();
        // μ_1 − ν_1 and μ_1 − ν_2 (the latter reduces to ν_1 alone).
        assert!(texts.contains(&reduce(&[1, -1, 0], 1)));
        assert!(texts.contains(&reduce(&[1, 0, -1], 1)));
        let refined = hyperplanes(2, 2, true);
        let set: BTreeSet<Vec<i64>> = refined.iter().map(|h| h.reduced.clone()).collect();
        assert!(w.iter().all(|h| set.contains(&h.reduced)));
        assert!(refined.len() > w.len());
    }

    #[test]
    fn linear_fit_recovers_min() {
        let walls = hyperplanes(2, 2, false);
        let engine = |mu: &[u32], nu: &[u32]| -> Result<Rational> {
            let all = mu.iter().chain(nu).copied().min().unwrap();
            Ok(rat(2 * all as i64))
        };
        let (fits, _) = fit_all_chambers(&engine, 2, 2, &walls, 1, SampleBox { max_part: 8, max_degree: 10 }).unwrap();
        assert!(!fits.is_empty());
        for f in &fits {
            assert!(f.polynomial.degree() <= 1);
        }
    }

    #[test]
    fn crossing_identical_fits_is_zero() {
        let p = MultivariatePolynomial::from_terms(2, [(vec![1, 0], rat(2)), (vec![0, 0], rat(1))]);
        assert!(wall_crossing(&p, &p).is_zero());
        assert_eq!(p.eval(&[3, 5]), rat(7));
    }

    #[test]
    fn monomial_count() {
        assert_eq!(monomials(4, 3, 1).len(), 4);
        assert_eq!(monomials(5, 4, 2).len(), 15);
    }
}
